//! Isomorphism criteria for the seven-dimensional family `g7(a, b, c, d)`,
//! decided directly from the parameters.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Fp};

/// Which zero-pattern of `(a, b)` the decision came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedFormRule {
    /// `a = b = 0`
    AbZero,
    /// `a = 0 != b`
    OnlyB,
    /// `a != 0 = b`
    OnlyA,
    /// `a, b != 0`
    AbNonzero,
}

/// Whether `g7(x)` and `g7(y)` are isomorphic over `F_p`, with the rule used.
/// Tuples whose `(a, b)` zero-patterns differ are out of scope (the invariant
/// `d` already tells them apart).
pub fn closed_form_rule_g7(x: [u32; 4], y: [u32; 4], p: u32) -> Result<(bool, ClosedFormRule)> {
    let f = Fp::new(p)?;
    let x = x.map(|v| v % p);
    let y = y.map(|v| v % p);
    let [a, b, c, d] = x;
    let [aa, bb, cc, dd] = y;
    let nz = |v: u32| v != 0;
    let pattern = |a: u32, b: u32| (nz(a), nz(b));
    if pattern(a, b) != pattern(aa, bb) {
        return Err(Error::OutOfScope(format!(
            "g7 parameter patterns differ: {x:?} vs {y:?}"
        )));
    }
    let char2 = p == 2;
    Ok(match (nz(a), nz(b)) {
        (false, false) => {
            let model_x = c == 0 && d == 0;
            let model_y = cc == 0 && dd == 0;
            let iso = if model_x || model_y {
                model_x == model_y
            } else {
                (c == 0 && cc == 0 && nz(d) && nz(dd))
                    || (d == 0 && dd == 0 && nz(c) && nz(cc))
                    || (nz(c) && nz(cc) && nz(d) && nz(dd))
            };
            (iso, ClosedFormRule::AbZero)
        }
        (false, true) => (!char2 || c == cc, ClosedFormRule::OnlyB),
        (true, false) => {
            let iso = if char2 {
                c == cc && (c != 1 || d == dd)
            } else {
                // 4ad - 5c^2
                let disc = |a: u32, c: u32, d: u32| {
                    let four_ad = f.mul(&f.from_i64(4), &f.mul(&a, &d));
                    let five_c2 = f.mul(&f.from_i64(5), &f.mul(&c, &c));
                    f.sub(&four_ad, &five_c2)
                };
                let (s, t) = (disc(a, c, d), disc(aa, cc, dd));
                match (s == 0, t == 0) {
                    (true, true) => true,
                    (false, false) => f.is_square(f.div(&t, &s)?)?,
                    _ => false,
                }
            };
            (iso, ClosedFormRule::OnlyA)
        }
        (true, true) => {
            let same_ratio = f.mul(&a, &bb) == f.mul(&aa, &b);
            let generic = !char2 && f.add(&a, &b) != 0;
            let iso = same_ratio && (generic || nz(c) == nz(cc));
            (iso, ClosedFormRule::AbNonzero)
        }
    })
}

/// Whether `g7(x)` and `g7(y)` are isomorphic over `F_p`.
pub fn closed_form_iso_g7(x: [u32; 4], y: [u32; 4], p: u32) -> Result<bool> {
    closed_form_rule_g7(x, y, p).map(|(iso, _)| iso)
}
