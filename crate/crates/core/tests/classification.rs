mod common;

use common::{fp, scramble};
use filiform::classify::{identify, reverify_report, Identification, SeparationCertificate};
use filiform::io::ReportBody;
use filiform::morphism::verify_isomorphism;
use filiform::{build, classify, ClassifyOptions, Family, ReportFile};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn identified(g: &filiform::StructureTable<filiform::Fp>) -> Family<u32> {
    match identify(g).unwrap() {
        Identification::Identified { representative, witness } => {
            let rep = build(g.field(), &representative).unwrap();
            assert!(verify_isomorphism(g, &rep, &witness.matrix).unwrap());
            representative
        }
        Identification::Unclassified { fingerprint } => panic!("unclassified: {fingerprint:?}"),
    }
}

#[test]
fn identifies_scrambled_model_over_f3() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let model = build(&fp(3), &Family::Model(7)).unwrap();
    let g = scramble(&model, &mut rng);
    let rep = build(&fp(3), &identified(&g)).unwrap();
    assert_eq!(rep.nonzero_constants(), model.nonzero_constants());
}

#[test]
fn identifies_g7_member_over_f7() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let member = Family::G7 { a: 2, b: 0, c: 1, d: 3 };
    let g = scramble(&build(&fp(7), &member).unwrap(), &mut rng);
    let rep = identified(&g);
    let Family::G7 { a, b, .. } = rep else { panic!("{rep}") };
    assert_eq!((a, b), (1, 0));
}

#[test]
fn identifies_type3_over_f2() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = scramble(&build(&fp(2), &Family::H7Type3(1)).unwrap(), &mut rng);
    assert_eq!(identified(&g), Family::H7Type3(1));
}

#[test]
fn identify_rejects_non_filiform() {
    let g = filiform::StructureTable::abelian(fp(3), 4);
    assert!(identify(&g).is_err());
}

#[test]
fn classification_is_deterministic_in_the_seed() {
    let opts = ClassifyOptions {
        seed: 5,
        isotopy: true,
        ..Default::default()
    };
    let strip = |mut r: filiform::ClassificationReport| {
        r.seconds = 0.0;
        r
    };
    let a = strip(classify(7, 3, &opts).unwrap());
    let b = strip(classify(7, 3, &opts).unwrap());
    assert_eq!(a, b);
    assert!(a.matches);
}

#[test]
fn report_witnesses_survive_serialization() {
    let opts = ClassifyOptions {
        isotopy: true,
        ..Default::default()
    };
    let report = classify(6, 5, &opts).unwrap();
    let json = ReportFile::new(ReportBody::Classification(report.clone()), Some(0))
        .unwrap()
        .to_json()
        .unwrap();
    let loaded = ReportFile::load(&json).unwrap();
    let ReportBody::Classification(back) = &loaded.body else { panic!() };
    assert_eq!(back, &report);
    assert_eq!(reverify_report(back).unwrap(), reverify_report(&report).unwrap());
    assert!(reverify_report(back).unwrap() > 0);
}

#[test]
fn dim6_char2_has_an_extra_class() {
    let r = classify(6, 2, &ClassifyOptions::default()).unwrap();
    assert_eq!(r.iso_classes.len(), 6);
    let r3 = classify(6, 3, &ClassifyOptions::default()).unwrap();
    assert_eq!(r3.iso_classes.len(), 5);
    assert!(r3
        .iso_separations
        .iter()
        .all(|s| !matches!(s.certificate, SeparationCertificate::HeuristicOnly { .. })));
}
