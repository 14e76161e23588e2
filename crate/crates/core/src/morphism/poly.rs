//! Sparse multivariate polynomials over `F_p` with at most 16 variables.
//! A monomial packs one 4-bit exponent per variable into a `u64`.

use std::collections::HashMap;

const BITS: u32 = 4;
const MASK: u64 = (1 << BITS) - 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Poly {
    /// Sorted by monomial, no zero coefficients.
    terms: Vec<(u64, u32)>,
}

fn exponent(mono: u64, var: usize) -> u32 {
    ((mono >> (BITS * var as u32)) & MASK) as u32
}

fn mono_mul(a: u64, b: u64) -> u64 {
    let s = a.checked_add(b).expect("exponent overflow in polynomial product");
    // a carry out of any nibble would corrupt the neighbouring exponent
    let carries = (a ^ b ^ s) & 0x1111_1111_1111_1110u64;
    assert!(carries == 0, "exponent overflow in polynomial product");
    s
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

impl Poly {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    #[cfg(test)]
    pub fn constant(c: u32, p: u32) -> Self {
        let c = c % p;
        if c == 0 {
            Self::zero()
        } else {
            Self {
                terms: vec![(0, c)],
            }
        }
    }

    pub fn var(v: usize) -> Self {
        assert!(v < 16);
        Self {
            terms: vec![(1u64 << (BITS * v as u32), 1)],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<u32> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(0, c)] => Some(*c),
            _ => None,
        }
    }

    pub fn var_mask(&self) -> u16 {
        let mut mask = 0u16;
        for &(m, _) in &self.terms {
            let mut m = m;
            let mut v = 0;
            while m != 0 {
                if m & MASK != 0 {
                    mask |= 1 << v;
                }
                m >>= BITS;
                v += 1;
            }
        }
        mask
    }

    /// `(x, a, b)` when the polynomial is `a*x + b` with `a != 0`.
    pub fn as_linear_univariate(&self) -> Option<(usize, u32, u32)> {
        let mut constant = 0;
        let mut linear = None;
        for &(m, c) in &self.terms {
            if m == 0 {
                constant = c;
                continue;
            }
            if linear.is_some() || m.count_ones() != 1 {
                return None;
            }
            let v = m.trailing_zeros() / BITS;
            if m != 1u64 << (BITS * v) {
                return None;
            }
            linear = Some((v as usize, c));
        }
        linear.map(|(v, a)| (v, a, constant))
    }

    fn from_map(map: HashMap<u64, u32>) -> Self {
        let mut terms: Vec<(u64, u32)> = map.into_iter().filter(|&(_, c)| c != 0).collect();
        terms.sort_unstable();
        Self { terms }
    }

    pub fn add(&self, other: &Self, p: u32) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = ((a[i].1 as u64 + b[j].1 as u64) % p as u64) as u32;
                    if c != 0 {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Self { terms: out }
    }

    pub fn scale(&self, s: u32, p: u32) -> Self {
        let s = s % p;
        if s == 0 {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|&(m, c)| (m, ((c as u64 * s as u64) % p as u64) as u32))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self, p: u32) -> Self {
        self.add(&other.scale(p - 1, p), p)
    }

    pub fn mul(&self, other: &Self, p: u32) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut map: HashMap<u64, u32> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for &(ma, ca) in &self.terms {
            for &(mb, cb) in &other.terms {
                let e = map.entry(mono_mul(ma, mb)).or_insert(0);
                *e = ((*e as u64 + ca as u64 * cb as u64) % p as u64) as u32;
            }
        }
        Self::from_map(map)
    }

    /// Replace variable `v` by the constant `value`.
    pub fn substitute(&self, v: usize, value: u32, p: u32) -> Self {
        let shift = BITS * v as u32;
        if !self.terms.iter().any(|&(m, _)| (m >> shift) & MASK != 0) {
            return self.clone();
        }
        let mut powers = vec![1u64];
        let mut map: HashMap<u64, u32> = HashMap::with_capacity(self.terms.len());
        for &(m, c) in &self.terms {
            let e = ((m >> shift) & MASK) as usize;
            while powers.len() <= e {
                let last = *powers.last().expect("nonempty");
                powers.push(last * value as u64 % p as u64);
            }
            let coeff = (c as u64 * powers[e] % p as u64) as u32;
            if coeff == 0 {
                continue;
            }
            let key = m & !(MASK << shift);
            let slot = map.entry(key).or_insert(0);
            *slot = ((*slot as u64 + coeff as u64) % p as u64) as u32;
        }
        Self::from_map(map)
    }

    pub fn eval(&self, values: &[u32], p: u32) -> u32 {
        let mut acc = 0u64;
        for &(m, c) in &self.terms {
            let mut t = c as u64;
            for (v, &x) in values.iter().enumerate() {
                let e = exponent(m, v);
                for _ in 0..e {
                    t = t * x as u64 % p as u64;
                }
            }
            acc = (acc + t) % p as u64;
        }
        acc as u32
    }

    #[cfg(test)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P: u32 = 7;

    fn x(v: usize) -> Poly {
        Poly::var(v)
    }

    #[test]
    fn arithmetic() {
        // (x0 + x1)^2 - x0^2 - x1^2 = 2 x0 x1
        let s = x(0).add(&x(1), P);
        let sq = s.mul(&s, P);
        let r = sq.sub(&x(0).mul(&x(0), P), P).sub(&x(1).mul(&x(1), P), P);
        assert_eq!(r, x(0).mul(&x(1), P).scale(2, P));
        assert_eq!(r.var_mask(), 0b11);
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn linear_detection_and_substitution() {
        let f = x(3).scale(3, P).add(&Poly::constant(5, P), P);
        assert_eq!(f.as_linear_univariate(), Some((3, 3, 5)));
        assert_eq!(x(2).mul(&x(2), P).as_linear_univariate(), None);
        assert_eq!(f.substitute(3, 2, P).as_constant(), Some(4));
        assert_eq!(inv_mod(3, P), 5);
    }

    proptest! {
        #[test]
        fn substitution_matches_evaluation(
            coeffs in proptest::collection::vec(0u32..P, 6),
            vals in proptest::collection::vec(0u32..P, 3),
        ) {
            // a small random polynomial in three variables
            let mut f = Poly::zero();
            for (i, &c) in coeffs.iter().enumerate() {
                let mut t = Poly::constant(c, P);
                for _ in 0..=i % 3 {
                    t = t.mul(&x(i % 3), P);
                }
                t = t.mul(&x((i + 1) % 3), P);
                f = f.add(&t, P);
            }
            let direct = f.eval(&vals, P);
            let g = f.substitute(0, vals[0], P).substitute(1, vals[1], P).substitute(2, vals[2], P);
            prop_assert_eq!(g.as_constant(), Some(direct));
        }
    }
}
