mod common;

use common::{fp, random_invertible, scramble};
use filiform::morphism::{verify_isomorphism, find_isomorphism, SearchOptions, Verdict};
use filiform::{build, fingerprint, parse_algebra, render_algebra, superspaces_of, BasisChange, Family, StructureTable, Subspace};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn family_strategy() -> impl Strategy<Value = (Family<u32>, u32)> {
    prop_oneof![Just(2u32), Just(3), Just(5), Just(7)].prop_flat_map(|p| {
        prop_oneof![
            (3usize..=7).prop_map(Family::Model),
            Just(Family::Dim5NonModel),
            (0..p, 0..p, 0..p).prop_map(|(a, b, c)| Family::G6 { a, b, c }),
            (0..p, 0..p, 0..p, 0..p).prop_map(|(a, b, c, d)| Family::G7 { a, b, c, d }),
        ]
        .prop_map(move |f| (f, p))
    })
}

fn table(f: &Family<u32>, p: u32) -> StructureTable<filiform::Fp> {
    build(&fp(p), f).unwrap()
}

/// Number of `k`-dimensional subspaces of `F_q^n`.
fn gaussian_binomial(n: u32, k: u32, q: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num *= q.pow(n - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fingerprint_survives_basis_change((f, p) in family_strategy(), seed in any::<u64>()) {
        let g = table(&f, p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = scramble(&g, &mut rng);
        prop_assert_eq!(fingerprint(&g).unwrap(), fingerprint(&h).unwrap());
        prop_assert!(h.is_filiform());
    }

    #[test]
    fn basis_change_is_an_isomorphism((f, p) in family_strategy(), seed in any::<u64>()) {
        let g = table(&f, p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_invertible(g.field(), g.dim(), &mut rng);
        let h = g.apply_basis_change(&BasisChange::new(m.clone()).unwrap()).unwrap();
        let forward = verify_isomorphism(&h, &g, &m).unwrap();
        let backward = verify_isomorphism(&g, &h, &m.inverse().unwrap()).unwrap();
        prop_assert!(forward || backward);
    }

    #[test]
    fn text_format_round_trips((f, p) in family_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = scramble(&table(&f, p), &mut rng).with_label(f.to_string());
        let text = render_algebra(&g);
        let back = parse_algebra(&text, true).unwrap().into_fp().unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(render_algebra(&back), text);
    }

    #[test]
    fn filiform_basis_recovers_a_filiform_basis((f, p) in family_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = scramble(&table(&f, p), &mut rng);
        let t = s.apply_basis_change(&s.filiform_basis().unwrap()).unwrap();
        prop_assert!(t.is_filiform_basis());
        prop_assert!(common::is_filiform_basis_by_definition(&t));
    }

    #[test]
    fn search_finds_scrambled_copies(p in prop_oneof![Just(2u32), Just(3)], a in 0u32..2, b in 0u32..2, c in 0u32..2, seed in any::<u64>()) {
        let g = table(&Family::G6 { a, b, c }, p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = scramble(&g, &mut rng);
        let verdict = find_isomorphism(&g, &h, &SearchOptions::default()).unwrap();
        match verdict {
            Verdict::Isomorphic(w) => prop_assert!(verify_isomorphism(&g, &h, &w.matrix).unwrap()),
            other => prop_assert!(false, "no isomorphism found: {:?}", other),
        }
    }
}

#[test]
fn superspace_counts_are_gaussian_binomials() {
    for (p, n) in [(2u32, 5usize), (3, 4), (5, 3)] {
        let f = fp(p);
        for k in 0..=n {
            let count = superspaces_of(k, &Subspace::zero(f, n)).unwrap().count() as u64;
            assert_eq!(count, gaussian_binomial(n as u32, k as u32, p as u64), "p={p} n={n} k={k}");
        }
        let line = Subspace::coordinate(f, n, &[1]);
        for k in 1..=n {
            let all: Vec<_> = superspaces_of(k, &line).unwrap().collect();
            assert!(all.iter().all(|s| line.is_subspace_of(s) && s.dim() == k));
            assert_eq!(all.len() as u64, gaussian_binomial(n as u32 - 1, k as u32 - 1, p as u64));
        }
    }
}

#[test]
fn ideal_counts_of_small_algebras() {
    let f = fp(2);
    let heis = StructureTable::from_i64(f, 3, &[(1, 2, 3, 1)]).unwrap();
    let counts: Vec<usize> = (0..=3).map(|m| heis.ideals_of_dim(m).unwrap().len()).collect();
    // every subspace containing the center is an ideal
    assert_eq!(counts, vec![1, 1, 3, 1]);
    let abelian = StructureTable::abelian(f, 3);
    let counts: Vec<usize> = (0..=3).map(|m| abelian.ideals_of_dim(m).unwrap().len()).collect();
    assert_eq!(counts, vec![1, 7, 7, 1]);
}
