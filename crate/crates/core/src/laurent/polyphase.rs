//! Polyphase decomposition and the 1-D to 2-D embeddings.
//!
//! Parity convention: `G(z) = G_e(z²) + z⁻¹·G_o(z²)`. The even component
//! collects stored exponents `k ≡ 0 (mod 2)`, the odd component collects
//! `k ≡ 1 (mod 2)` and carries the unit delay.

use super::coefficient::Mode;
use super::poly::{LaurentPoly1, LaurentPoly2};
use crate::error::AlgebraError;

#[derive(Clone, Debug, PartialEq)]
pub struct PolyphaseComponents {
    pub even: LaurentPoly1,
    pub odd: LaurentPoly1,
}

pub fn polyphase_split(g: &LaurentPoly1) -> PolyphaseComponents {
    let mode = g.mode();
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for (&k, c) in g.terms() {
        if k.rem_euclid(2) == 0 {
            even.push((k.div_euclid(2), c.clone()));
        } else {
            odd.push(((k - 1).div_euclid(2), c.clone()));
        }
    }
    // Every term lands on a distinct exponent, so no mode or merge failure.
    PolyphaseComponents {
        even: LaurentPoly1::from_terms(mode, even).expect("uniform mode"),
        odd: LaurentPoly1::from_terms(mode, odd).expect("uniform mode"),
    }
}

pub fn interleave(even: &LaurentPoly1, odd: &LaurentPoly1) -> Result<LaurentPoly1, AlgebraError> {
    let evens = even.terms().map(|(&k, c)| (2 * k, c.clone()));
    let odds = odd.terms().map(|(&k, c)| (2 * k + 1, c.clone()));
    let merged = LaurentPoly1::from_terms(even.mode(), evens)?;
    merged.add(&LaurentPoly1::from_terms(odd.mode(), odds)?)
}

impl PolyphaseComponents {
    pub fn interleave(&self) -> Result<LaurentPoly1, AlgebraError> {
        interleave(&self.even, &self.odd)
    }
}

/// `Ḡ(z_m, z_n) = G(z_m)`.
pub fn embed_horizontal(g: &LaurentPoly1) -> LaurentPoly2 {
    embed(g, |k| (k, 0))
}

/// `G(z_n)`, the transpose of [`embed_horizontal`].
pub fn embed_vertical(g: &LaurentPoly1) -> LaurentPoly2 {
    embed(g, |k| (0, k))
}

fn embed(g: &LaurentPoly1, place: impl Fn(i32) -> (i32, i32)) -> LaurentPoly2 {
    let mode: Mode = g.mode();
    LaurentPoly2::from_terms(mode, g.terms().map(|(&k, c)| (place(k), c.clone())))
        .expect("uniform mode")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::Coefficient;

    fn poly(terms: &[(i32, i64, i64)]) -> LaurentPoly1 {
        LaurentPoly1::from_terms(
            Mode::Exact,
            terms.iter().map(|&(k, n, d)| (k, Coefficient::rational(n, d))),
        )
        .unwrap()
    }

    #[test]
    fn split_of_one() {
        let parts = polyphase_split(&LaurentPoly1::one(Mode::Exact));
        assert!(parts.even.is_one());
        assert!(parts.odd.is_zero());
    }

    #[test]
    fn split_of_cdf53_predict() {
        // -(1/2)(1 + z): stored exponents 0 and -1.
        let p = poly(&[(0, -1, 2), (-1, -1, 2)]);
        let parts = polyphase_split(&p);
        assert_eq!(parts.even, poly(&[(0, -1, 2)]));
        // k = -1 = 2·(-1) + 1, so the odd phase is -1/2 at exponent -1.
        assert_eq!(parts.odd, poly(&[(-1, -1, 2)]));
        assert_eq!(parts.interleave().unwrap(), p);
    }

    #[test]
    fn split_of_z_squared() {
        let z2 = poly(&[(-2, 1, 1)]);
        let parts = polyphase_split(&z2);
        assert_eq!(parts.even, poly(&[(-1, 1, 1)]));
        assert!(parts.odd.is_zero());
    }

    #[test]
    fn embeddings() {
        let g = poly(&[(0, 1, 1), (-1, 1, 1)]);
        let h = embed_horizontal(&g);
        let v = embed_vertical(&g);
        assert!(h.coefficient((-1, 0)).unwrap().is_one());
        assert!(v.coefficient((0, -1)).unwrap().is_one());
        assert_eq!(h.to_string(), "1 + z_m");
        assert_eq!(v.to_string(), "1 + z_n");
        assert_eq!(h.transpose(), v);
    }
}
