use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::coefficient::{Coefficient, Mode};
use crate::error::AlgebraError;

/// Exponent index of a Laurent monomial.
///
/// Stored exponents follow the z-transform summation: the key `k` stands
/// for the monomial `z^{-k}`. So `z` itself is stored as `-1`, and a stencil
/// tap at offset `+1` (the next sample) corresponds to stored exponent `-1`.
pub trait Exponent: Copy + Ord + fmt::Debug {
    fn origin() -> Self;
    fn combine(self, other: Self) -> Self;
    fn negate(self) -> Self;
    /// Writes the monomial `z^{-k}` (nothing for the origin).
    fn fmt_monomial(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result;
}

impl Exponent for i32 {
    fn origin() -> Self {
        0
    }
    fn combine(self, other: Self) -> Self {
        self + other
    }
    fn negate(self) -> Self {
        -self
    }
    fn fmt_monomial(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_power(f, "z", *self)
    }
}

/// `(k_m, k_n)`: `m` is the horizontal axis, `n` the vertical one.
impl Exponent for (i32, i32) {
    fn origin() -> Self {
        (0, 0)
    }
    fn combine(self, other: Self) -> Self {
        (self.0 + other.0, self.1 + other.1)
    }
    fn negate(self) -> Self {
        (-self.0, -self.1)
    }
    fn fmt_monomial(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_power(f, "z_m", self.0)?;
        if self.0 != 0 && self.1 != 0 {
            f.write_str("·")?;
        }
        write_power(f, "z_n", self.1)
    }
}

/// Finite Laurent polynomial with coefficients of a single [`Mode`].
///
/// Zero coefficients are never stored, so structural equality is
/// polynomial equality.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly<K: Exponent> {
    mode: Mode,
    terms: BTreeMap<K, Coefficient>,
}

/// `G(z) = Σ_k g_k z^{-k}`.
pub type LaurentPoly1 = LaurentPoly<i32>;
/// `G(z_m, z_n) = Σ Σ g_{k_m,k_n} z_m^{-k_m} z_n^{-k_n}`.
pub type LaurentPoly2 = LaurentPoly<(i32, i32)>;

impl<K: Exponent> LaurentPoly<K> {
    pub fn zero(mode: Mode) -> Self {
        LaurentPoly {
            mode,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(mode: Mode) -> Self {
        Self::constant(Coefficient::one(mode))
    }

    pub fn constant(c: Coefficient) -> Self {
        Self::monomial(K::origin(), c)
    }

    pub fn monomial(k: K, c: Coefficient) -> Self {
        let mut p = Self::zero(c.mode());
        if !c.is_zero() {
            p.terms.insert(k, c);
        }
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing
    /// repeated exponents.
    pub fn from_terms<I>(mode: Mode, terms: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (K, Coefficient)>,
    {
        let mut p = Self::zero(mode);
        for (k, c) in terms {
            if c.mode() != mode {
                return Err(AlgebraError::ModeMismatch {
                    left: mode,
                    right: c.mode(),
                });
            }
            p.accumulate(k, c)?;
        }
        Ok(p)
    }

    fn accumulate(&mut self, k: K, c: Coefficient) -> Result<(), AlgebraError> {
        match self.terms.remove(&k) {
            Some(prev) => {
                let sum = prev.add(&c)?;
                if !sum.is_zero() {
                    self.terms.insert(k, sum);
                }
            }
            None => {
                if !c.is_zero() {
                    self.terms.insert(k, c);
                }
            }
        }
        Ok(())
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&K::origin())
                .is_some_and(Coefficient::is_one)
    }

    /// Number of stored (non-zero) terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&K, &Coefficient)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, k: K) -> Option<&Coefficient> {
        self.terms.get(&k)
    }

    /// Coefficient of the zero exponent, or zero.
    pub fn constant_term(&self) -> Coefficient {
        self.terms
            .get(&K::origin())
            .cloned()
            .unwrap_or_else(|| Coefficient::zero(self.mode))
    }

    /// True when the only possible term is the zero-exponent one.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|k| *k == K::origin())
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.mode == other.mode {
            Ok(())
        } else {
            Err(AlgebraError::ModeMismatch {
                left: self.mode,
                right: other.mode,
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.accumulate(*k, c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            mode: self.mode,
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
        }
    }

    /// Full convolution of the two term maps.
    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut out = Self::zero(self.mode);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                out.accumulate(ka.combine(*kb), ca.mul(cb)?)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Coefficient) -> Result<Self, AlgebraError> {
        self.mul(&Self::constant(c.clone()))
    }

    /// Explicit promotion of every coefficient to float mode.
    pub fn to_float(&self) -> Self {
        LaurentPoly {
            mode: Mode::Float,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, c.to_float()))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Inverse of a single-term polynomial, `None` otherwise.
    pub fn monomial_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next()?;
        Some(Self::monomial(k.negate(), c.recip()?))
    }

    /// Drops terms whose magnitude is at most `rel_tol` times the largest
    /// one. Exact polynomials are returned unchanged.
    pub fn pruned(&self, rel_tol: f64) -> Self {
        if self.mode == Mode::Exact {
            return self.clone();
        }
        let max = self.max_abs();
        LaurentPoly {
            mode: self.mode,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.abs_f64() > rel_tol * max)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(Coefficient::abs_f64).fold(0.0, f64::max)
    }

    /// Largest per-coefficient absolute difference, comparing as `f64`.
    /// Works across modes.
    pub fn max_coefficient_diff(&self, other: &Self) -> f64 {
        let mut keys: Vec<K> = self.terms.keys().chain(other.terms.keys()).copied().collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|k| {
                let a = self.terms.get(&k).map_or(0.0, Coefficient::to_f64);
                let b = other.terms.get(&k).map_or(0.0, Coefficient::to_f64);
                (a - b).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_coefficient_diff(other) <= tol
    }
}

impl LaurentPoly1 {
    /// `G(z)` at a complex point.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(k, c)| z.powi(-k) * c.to_f64())
            .sum()
    }

    /// Largest `|k|` over the support.
    pub fn reach(&self) -> i32 {
        self.terms.keys().map(|k| k.abs()).max().unwrap_or(0)
    }
}

impl LaurentPoly2 {
    /// `G(z_m, z_n)` at a complex point.
    pub fn eval(&self, zm: Complex64, zn: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(&(km, kn), c)| zm.powi(-km) * zn.powi(-kn) * c.to_f64())
            .sum()
    }

    /// `G*(z_m, z_n) = G(z_n, z_m)`.
    pub fn transpose(&self) -> Self {
        LaurentPoly {
            mode: self.mode,
            terms: self
                .terms
                .iter()
                .map(|(&(km, kn), c)| ((kn, km), c.clone()))
                .collect(),
        }
    }

    /// `(max |k_m|, max |k_n|)` over the support.
    pub fn reach(&self) -> (i32, i32) {
        self.terms.keys().fold((0, 0), |(rm, rn), &(km, kn)| {
            (rm.max(km.abs()), rn.max(kn.abs()))
        })
    }
}

fn write_power(f: &mut fmt::Formatter<'_>, var: &str, k: i32) -> fmt::Result {
    // z^{-k}
    match -k {
        0 => Ok(()),
        1 => write!(f, "{var}"),
        p => write!(f, "{var}^{p}"),
    }
}

/// Renders in z-notation, e.g. `-1/2 - 1/2·z_m`.
impl<K: Exponent> fmt::Display for LaurentPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // Print in order of increasing power of z, i.e. decreasing stored k.
        for (i, (k, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let magnitude = if negative { c.neg() } else { c.clone() };
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if *k == K::origin() {
                write!(f, "{magnitude}")?;
            } else {
                if !magnitude.is_one() {
                    write!(f, "{magnitude}·")?;
                }
                k.fmt_monomial(f)?;
            }
        }
        Ok(())
    }
}
