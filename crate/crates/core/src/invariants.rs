//! Invariants of filiform algebras: the ideal-centralizer sequence `d`,
//! the classical `z1`/`z2`, and a combined fingerprint over the central
//! quotient tower.

use serde::{Deserialize, Serialize};

use crate::algebra::StructureTable;
use crate::error::{Error, Result};
use crate::field::Field;

/// `d_m(g) = max { dim Cen(h) : h an m-dimensional ideal }` for `m = 1..=n`.
/// An entry is 0 when no ideal of that dimension exists.
pub fn d_sequence<F: Field>(g: &StructureTable<F>) -> Result<Vec<usize>> {
    let n = g.dim();
    let mut d = vec![0usize; n + 1];
    for ideal in g.ideals()? {
        let m = ideal.dim();
        if m == 0 {
            continue;
        }
        let c = g.centralizer(&ideal)?.dim();
        if c > d[m] {
            d[m] = c;
        }
    }
    d.remove(0);
    Ok(d)
}

/// `max { k : Cen(C^(n-k+2)) strictly contains C^2 }`.
pub fn z1<F: Field>(g: &StructureTable<F>) -> Result<usize> {
    if !g.is_filiform() {
        return Err(Error::NotFiliform);
    }
    let n = g.dim();
    let series = g.lower_central_series();
    let term = |k: usize| {
        if k <= series.len() {
            series[k - 1].clone()
        } else {
            g.zero_space()
        }
    };
    let c2 = term(2);
    let mut best = 0;
    for k in 1..=n + 1 {
        let cen = g.centralizer(&term(n + 2 - k))?;
        if cen.dim() > c2.dim() && c2.is_subspace_of(&cen) {
            best = k;
        }
    }
    Ok(best)
}

/// `max { k : C^(n-k+1) is abelian }`.
pub fn z2<F: Field>(g: &StructureTable<F>) -> Result<usize> {
    if !g.is_filiform() {
        return Err(Error::NotFiliform);
    }
    let n = g.dim();
    let series = g.lower_central_series();
    let mut best = 0;
    for k in 1..=n {
        let idx = n + 1 - k;
        let abelian = idx > series.len() || g.is_abelian_subspace(&series[idx - 1]);
        if abelian {
            best = k;
        }
    }
    Ok(best)
}

/// Invariants of `g`, `g^(1) = g / Z(g)` and `g^(2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fingerprint {
    pub dim: usize,
    pub characteristic: u32,
    pub type_seq: Vec<usize>,
    pub d0: Vec<usize>,
    pub d1: Vec<usize>,
    pub d2: Vec<usize>,
    pub z1: usize,
    pub z2: usize,
}

impl Fingerprint {
    /// The part of the fingerprint that is an isotopism invariant.
    pub fn isotopy_part(&self) -> &[usize] {
        &self.d0
    }

    /// First component where two fingerprints differ, with every differing
    /// position of that component.
    pub fn first_difference(&self, other: &Self) -> Option<String> {
        let diff_seq = |name: &str, a: &[usize], b: &[usize]| -> Option<String> {
            if a == b {
                return None;
            }
            if a.len() != b.len() {
                return Some(format!("{name}: length {} vs {}", a.len(), b.len()));
            }
            let parts: Vec<String> = a
                .iter()
                .zip(b)
                .enumerate()
                .filter(|(_, (x, y))| x != y)
                .map(|(i, (x, y))| format!("{name}_{}: {x} vs {y}", i + 1))
                .collect();
            Some(parts.join(", "))
        };
        if self.dim != other.dim {
            return Some(format!("dim: {} vs {}", self.dim, other.dim));
        }
        diff_seq("type", &self.type_seq, &other.type_seq)
            .or_else(|| diff_seq("d", &self.d0, &other.d0))
            .or_else(|| diff_seq("d(g^(1))", &self.d1, &other.d1))
            .or_else(|| diff_seq("d(g^(2))", &self.d2, &other.d2))
            .or_else(|| (self.z1 != other.z1).then(|| format!("z1: {} vs {}", self.z1, other.z1)))
            .or_else(|| (self.z2 != other.z2).then(|| format!("z2: {} vs {}", self.z2, other.z2)))
    }

    pub fn first_isotopy_difference(&self, other: &Self) -> Option<String> {
        let strip = |f: &Self| Self {
            type_seq: vec![],
            d1: vec![],
            d2: vec![],
            z1: 0,
            z2: 0,
            ..f.clone()
        };
        strip(self).first_difference(&strip(other))
    }
}

pub fn fingerprint<F: Field>(g: &StructureTable<F>) -> Result<Fingerprint> {
    if !g.is_filiform() {
        return Err(Error::NotFiliform);
    }
    let tower = g.central_quotient_tower(2)?;
    Ok(Fingerprint {
        dim: g.dim(),
        characteristic: g.field().spec().characteristic(),
        type_seq: g.type_sequence(),
        d0: d_sequence(&tower[0])?,
        d1: d_sequence(&tower[1])?,
        d2: d_sequence(&tower[2])?,
        z1: z1(g)?,
        z2: z2(g)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{dim5_nonmodel, g6, g7, model};
    use crate::field::Fp;

    fn fp(p: u32) -> Fp {
        Fp::new(p).unwrap()
    }

    #[test]
    fn d_of_small_tables() {
        assert_eq!(d_sequence(&g6(&fp(3), 0, 0, 0)).unwrap(), vec![6, 5, 5, 5, 5, 1]);
        assert_eq!(d_sequence(&g7(&fp(5), 1, 0, 0, 0)).unwrap(), vec![7, 6, 5, 5, 5, 2, 1]);
        assert_eq!(d_sequence(&dim5_nonmodel(&fp(2))).unwrap()[3], 2);
        assert_eq!(d_sequence(&model(&fp(2), 5)).unwrap()[3], 4);
    }

    #[test]
    fn z_invariants_of_model() {
        for n in 4..=7 {
            assert_eq!(z1(&model(&fp(3), n)).unwrap(), n);
        }
        assert_eq!(z2(&model(&fp(5), 6)).unwrap(), 5);
        let z: Vec<usize> = [3u32, 5, 7]
            .iter()
            .map(|&p| z1(&g6(&fp(p), 1, 0, 0)).unwrap())
            .collect();
        assert!(z.windows(2).all(|w| w[0] == w[1]));
        assert!(z[0] < 6);
    }

    #[test]
    fn not_filiform_errors() {
        let ab = StructureTable::abelian(fp(3), 4);
        assert_eq!(z1(&ab), Err(Error::NotFiliform));
        assert_eq!(z2(&ab), Err(Error::NotFiliform));
        assert_eq!(fingerprint(&ab), Err(Error::NotFiliform));
    }

    #[test]
    fn fingerprint_is_deterministic() {
        let g = model(&fp(3), 6);
        let a = fingerprint(&g).unwrap();
        let b = fingerprint(&g).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.first_difference(&b), None);
        assert_eq!(a.d0[0], 6);
        assert_eq!(a.d0[5], 1);
    }
}
