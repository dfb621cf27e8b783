use std::fmt;

use crate::error::{AlgebraError, SchemeError};
use crate::laurent::{LaurentPoly2, Mode};

/// Relative threshold below which float-mode terms produced by the
/// adjugate inverse are treated as cancellation noise.
const INVERSE_NOISE: f64 = 1e-12;

/// 4×4 matrix over bivariate Laurent polynomials acting on the polyphase
/// quadruple.
///
/// Quadruple ordering (0-based here, 1-based in the printed matrices):
/// 0 = even row / even column, 1 = odd column, 2 = odd row,
/// 3 = odd row / odd column. A pass maps the column vector of components
/// `x` to `M·x`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepMatrix {
    pub label: String,
    mode: Mode,
    entries: [[LaurentPoly2; 4]; 4],
}

impl StepMatrix {
    pub fn identity(mode: Mode) -> Self {
        let entries = std::array::from_fn(|r| {
            std::array::from_fn(|c| {
                if r == c {
                    LaurentPoly2::one(mode)
                } else {
                    LaurentPoly2::zero(mode)
                }
            })
        });
        StepMatrix {
            label: "I".into(),
            mode,
            entries,
        }
    }

    pub fn from_entries(
        label: impl Into<String>,
        entries: [[LaurentPoly2; 4]; 4],
    ) -> Result<Self, AlgebraError> {
        let mode = entries[0][0].mode();
        for e in entries.iter().flatten() {
            if e.mode() != mode {
                return Err(AlgebraError::ModeMismatch {
                    left: mode,
                    right: e.mode(),
                });
            }
        }
        Ok(StepMatrix {
            label: label.into(),
            mode,
            entries,
        })
    }

    /// Identity with the given off-diagonal entries set (0-based indices).
    pub fn unit_with(
        label: impl Into<String>,
        mode: Mode,
        placed: &[((usize, usize), LaurentPoly2)],
    ) -> Result<Self, AlgebraError> {
        let mut m = StepMatrix::identity(mode);
        m.label = label.into();
        for ((r, c), p) in placed {
            if p.mode() != mode {
                return Err(AlgebraError::ModeMismatch {
                    left: mode,
                    right: p.mode(),
                });
            }
            m.entries[*r][*c] = p.clone();
        }
        Ok(m)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Entry at 0-based `(row, col)`.
    pub fn entry(&self, row: usize, col: usize) -> &LaurentPoly2 {
        &self.entries[row][col]
    }

    pub fn entries(&self) -> &[[LaurentPoly2; 4]; 4] {
        &self.entries
    }

    /// Symbolic product `self · rhs` (`rhs` acts first).
    pub fn mul(&self, rhs: &StepMatrix) -> Result<StepMatrix, AlgebraError> {
        let mut entries: [[LaurentPoly2; 4]; 4] =
            std::array::from_fn(|_| std::array::from_fn(|_| LaurentPoly2::zero(self.mode)));
        for (r, row) in entries.iter_mut().enumerate() {
            for (c, out) in row.iter_mut().enumerate() {
                let mut acc = LaurentPoly2::zero(self.mode);
                for k in 0..4 {
                    let a = &self.entries[r][k];
                    let b = &rhs.entries[k][c];
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b)?)?;
                }
                *out = acc;
            }
        }
        Ok(StepMatrix {
            label: format!("{}·{}", self.label, rhs.label),
            mode: self.mode,
            entries,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().enumerate().all(|(r, row)| {
            row.iter()
                .enumerate()
                .all(|(c, e)| if r == c { e.is_one() } else { e.is_zero() })
        })
    }

    fn unit_diagonal(&self) -> bool {
        (0..4).all(|i| self.entries[i][i].is_one())
    }

    pub fn is_unit_lower_triangular(&self) -> bool {
        self.unit_diagonal() && (0..4).all(|r| (r + 1..4).all(|c| self.entries[r][c].is_zero()))
    }

    pub fn is_unit_upper_triangular(&self) -> bool {
        self.unit_diagonal() && (0..4).all(|r| (0..r).all(|c| self.entries[r][c].is_zero()))
    }

    /// True when no entry reaches a neighbouring quadruple.
    pub fn is_local(&self) -> bool {
        self.entries.iter().flatten().all(LaurentPoly2::is_constant)
    }

    /// `(max |k_m|, max |k_n|)` over all entries.
    pub fn reach(&self) -> (i32, i32) {
        self.entries
            .iter()
            .flatten()
            .map(LaurentPoly2::reach)
            .fold((0, 0), |(a, b), (c, d)| (a.max(c), b.max(d)))
    }

    pub fn to_float(&self) -> StepMatrix {
        StepMatrix {
            label: self.label.clone(),
            mode: Mode::Float,
            entries: std::array::from_fn(|r| std::array::from_fn(|c| self.entries[r][c].to_float())),
        }
    }

    /// Largest per-coefficient difference over all entries.
    pub fn max_coefficient_diff(&self, other: &StepMatrix) -> f64 {
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(a, b)| a.max_coefficient_diff(b))
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &StepMatrix, tol: f64) -> bool {
        self.max_coefficient_diff(other) <= tol
    }

    fn max_abs(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .map(LaurentPoly2::max_abs)
            .fold(0.0, f64::max)
    }

    /// Inverse over Laurent polynomials.
    ///
    /// Unit-triangular matrices are inverted by substitution, which keeps
    /// exact and float modes free of cancellation noise. Anything else goes
    /// through the adjugate and must have a monomial determinant.
    pub fn inverse(&self) -> Result<StepMatrix, SchemeError> {
        let label = format!("{}⁻¹", self.label);
        let entries = if self.is_unit_lower_triangular() {
            self.substitute((0..4).collect(), |r| 0..r)?
        } else if self.is_unit_upper_triangular() {
            self.substitute((0..4).rev().collect(), |r| r + 1..4)?
        } else {
            return self.adjugate_inverse(label);
        };
        Ok(StepMatrix {
            label,
            mode: self.mode,
            entries,
        })
    }

    /// Solves `M·X = I` row by row for unit-triangular `M`; `deps(r)` lists
    /// the already-solved rows that row `r` depends on.
    fn substitute<D>(&self, order: Vec<usize>, deps: impl Fn(usize) -> D) -> Result<[[LaurentPoly2; 4]; 4], AlgebraError>
    where
        D: Iterator<Item = usize>,
    {
        let mode = self.mode;
        let mut x: [[LaurentPoly2; 4]; 4] =
            std::array::from_fn(|_| std::array::from_fn(|_| LaurentPoly2::zero(mode)));
        for r in order {
            for c in 0..4 {
                let mut acc = if r == c {
                    LaurentPoly2::one(mode)
                } else {
                    LaurentPoly2::zero(mode)
                };
                for k in deps(r) {
                    let a = &self.entries[r][k];
                    if a.is_zero() || x[k][c].is_zero() {
                        continue;
                    }
                    acc = acc.sub(&a.mul(&x[k][c])?)?;
                }
                x[r][c] = acc;
            }
        }
        Ok(x)
    }

    fn adjugate_inverse(&self, label: String) -> Result<StepMatrix, SchemeError> {
        let all = [0usize, 1, 2, 3];
        let det = self.minor_det(&all, &all)?;
        let det = det.pruned(INVERSE_NOISE);
        let inv_det = det
            .monomial_inverse()
            .ok_or_else(|| SchemeError::NotInvertible(self.label.clone()))?;
        let mut entries: [[LaurentPoly2; 4]; 4] =
            std::array::from_fn(|_| std::array::from_fn(|_| LaurentPoly2::zero(self.mode)));
        for (r, row) in entries.iter_mut().enumerate() {
            for (c, out) in row.iter_mut().enumerate() {
                // adj[r][c] = (-1)^(r+c) · det(minor without row c, column r)
                let rows: Vec<usize> = all.iter().copied().filter(|&i| i != c).collect();
                let cols: Vec<usize> = all.iter().copied().filter(|&j| j != r).collect();
                let mut cof = self.minor_det(&rows, &cols)?;
                if (r + c) % 2 == 1 {
                    cof = cof.neg();
                }
                *out = cof.mul(&inv_det)?;
            }
        }
        let mut inv = StepMatrix {
            label,
            mode: self.mode,
            entries,
        };
        if self.mode == Mode::Float {
            let threshold = INVERSE_NOISE * inv.max_abs();
            for e in inv.entries.iter_mut().flatten() {
                *e = LaurentPoly2::from_terms(
                    Mode::Float,
                    e.terms()
                        .filter(|(_, c)| c.abs_f64() > threshold)
                        .map(|(k, c)| (*k, c.clone())),
                )?;
            }
        }
        Ok(inv)
    }

    fn minor_det(&self, rows: &[usize], cols: &[usize]) -> Result<LaurentPoly2, AlgebraError> {
        if rows.len() == 1 {
            return Ok(self.entries[rows[0]][cols[0]].clone());
        }
        let mut acc = LaurentPoly2::zero(self.mode);
        let r0 = rows[0];
        for (i, &c) in cols.iter().enumerate() {
            let a = &self.entries[r0][c];
            if a.is_zero() {
                continue;
            }
            let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = a.mul(&self.minor_det(&rows[1..], &sub_cols)?)?;
            acc = if i % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
        }
        Ok(acc)
    }
}

/// Symbolic product `a · b`, with `b` applied first.
pub fn fuse(a: &StepMatrix, b: &StepMatrix) -> Result<StepMatrix, AlgebraError> {
    a.mul(b)
}

/// Prints the matrix row by row, entries in z-notation separated by `|`.
impl fmt::Display for StepMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} =", self.label)?;
        let cells: Vec<Vec<String>> = self
            .entries
            .iter()
            .map(|row| row.iter().map(ToString::to_string).collect())
            .collect();
        let widths: Vec<usize> = (0..4)
            .map(|c| cells.iter().map(|row| row[c].chars().count()).max().unwrap_or(1))
            .collect();
        for row in &cells {
            f.write_str("  [ ")?;
            for (c, cell) in row.iter().enumerate() {
                if c > 0 {
                    f.write_str(" | ")?;
                }
                write!(f, "{cell:<width$}", width = widths[c])?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}
