use std::fmt;
use std::str::FromStr;

use super::matrix::StepMatrix;
use super::scheme::{PassRole, Scheme};
use crate::error::SchemeError;

/// Gains closer to 1 than this are treated as unit gains.
const UNIT_GAIN_TOLERANCE: f64 = 1e-12;

/// How arithmetic operations are tallied per output quadruple.
///
/// Every convention charges one multiply–accumulate per polynomial term of
/// every matrix entry, except that an entry exactly equal to 1 on the
/// diagonal (the sample keeping its own value) is free.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CountConvention {
    /// Gain pass not counted.
    Mac,
    /// Additionally treats the zero-offset self weight of every diagonal
    /// entry as free, i.e. folded into a pre-scaled accumulator.
    MacNoScale,
    /// `Mac` plus one multiply per non-unit gain.
    MacScaled,
}

impl CountConvention {
    pub const ALL: [CountConvention; 3] = [
        CountConvention::Mac,
        CountConvention::MacNoScale,
        CountConvention::MacScaled,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CountConvention::Mac => "mac",
            CountConvention::MacNoScale => "mac-no-scale",
            CountConvention::MacScaled => "mac-scaled",
        }
    }
}

impl fmt::Display for CountConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CountConvention {
    type Err = SchemeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CountConvention::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| SchemeError::UnknownConvention(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PassCount {
    pub label: String,
    pub barrier_before: bool,
    pub ops: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpCountReport {
    pub scheme: String,
    pub convention: CountConvention,
    pub steps: usize,
    pub ops: usize,
    pub per_pass: Vec<PassCount>,
}

impl fmt::Display for OpCountReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: steps {}, ops {} ({})",
            self.scheme, self.steps, self.ops, self.convention
        )?;
        for p in &self.per_pass {
            let sep = if p.barrier_before { "|" } else { " " };
            writeln!(f, "  {sep} {:<12} {}", p.label, p.ops)?;
        }
        Ok(())
    }
}

fn matrix_ops(m: &StepMatrix, convention: CountConvention) -> usize {
    let mut ops = 0;
    for r in 0..4 {
        for c in 0..4 {
            let e = m.entry(r, c);
            if r == c {
                if e.is_one() {
                    continue;
                }
                if convention == CountConvention::MacNoScale && e.coefficient((0, 0)).is_some() {
                    ops += e.len() - 1;
                    continue;
                }
            }
            ops += e.len();
        }
    }
    ops
}

fn scale_ops(m: &StepMatrix) -> usize {
    (0..4)
        .filter(|&i| {
            let g = m.entry(i, i).constant_term().to_f64();
            (g - 1.0).abs() > UNIT_GAIN_TOLERANCE
        })
        .count()
}

/// Steps and operations per output quadruple of a scheme.
pub fn count_operations(scheme: &Scheme, convention: CountConvention) -> OpCountReport {
    let per_pass: Vec<PassCount> = scheme
        .passes
        .iter()
        .map(|p| {
            let ops = match (p.role, convention) {
                (PassRole::Scale, CountConvention::MacScaled) => scale_ops(&p.matrix),
                (PassRole::Scale, _) => 0,
                _ => matrix_ops(&p.matrix, convention),
            };
            PassCount {
                label: p.matrix.label.clone(),
                barrier_before: p.barrier_before,
                ops,
            }
        })
        .collect();
    OpCountReport {
        scheme: scheme.kind.name().to_string(),
        convention,
        steps: scheme.steps(),
        ops: per_pass.iter().map(|p| p.ops).sum(),
        per_pass,
    }
}

/// Parses a convention name and counts.
pub fn count_operations_named(scheme: &Scheme, convention: &str) -> Result<OpCountReport, SchemeError> {
    Ok(count_operations(scheme, convention.parse()?))
}

/// Renders one row per scheme with the steps column followed by one ops
/// column per convention.
pub fn format_count_table(title: &str, schemes: &[Scheme]) -> String {
    let mut out = format!("{title}\n");
    let mut header = format!("{:<24} {:>5}", "scheme", "steps");
    for c in CountConvention::ALL {
        header.push_str(&format!(" {:>12}", c.name()));
    }
    out.push_str(&header);
    out.push('\n');
    for s in schemes {
        let mut line = format!("{:<24} {:>5}", s.kind.name(), s.steps());
        for c in CountConvention::ALL {
            line.push_str(&format!(" {:>12}", count_operations(s, c).ops));
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifting::plan::{cdf53, cdf97};
    use crate::lifting::scheme::{build_scheme, SchemeKind};

    fn mac(kind: SchemeKind, plan: &crate::lifting::LiftingPlan) -> (usize, usize) {
        let r = count_operations(&build_scheme(kind, plan).unwrap(), CountConvention::Mac);
        (r.steps, r.ops)
    }

    #[test]
    fn lifting_rows() {
        let (p53, p97) = (cdf53(), cdf97());
        assert_eq!(mac(SchemeKind::SeparableLifting, &p53), (4, 16));
        assert_eq!(mac(SchemeKind::SeparableLifting, &p97), (8, 32));
        assert_eq!(mac(SchemeKind::NonSeparableSplit, &p53), (2, 18));
        assert_eq!(mac(SchemeKind::NonSeparableSplit, &p97), (4, 36));
        assert_eq!(mac(SchemeKind::NonSeparableLifting, &p53), (2, 24));
        assert_eq!(mac(SchemeKind::NonSeparableLifting, &p97), (4, 48));
    }

    #[test]
    fn convolution_counts_depend_on_convention() {
        let s = build_scheme(SchemeKind::SeparableConvolution, &cdf53()).unwrap();
        assert_eq!(s.steps(), 2);
        assert_eq!(count_operations(&s, CountConvention::Mac).ops, 28);
        assert_eq!(count_operations(&s, CountConvention::MacNoScale).ops, 24);
        let s = build_scheme(SchemeKind::SeparableConvolution, &cdf97()).unwrap();
        assert_eq!(count_operations(&s, CountConvention::Mac).ops, 64);
    }

    #[test]
    fn gains_only_count_when_asked() {
        let s = build_scheme(SchemeKind::SeparableLifting, &cdf97()).unwrap();
        let scaled = count_operations(&s, CountConvention::MacScaled);
        assert_eq!(scaled.ops, 32 + 2);
        assert_eq!(scaled.steps, 8);
    }

    #[test]
    fn unknown_convention() {
        assert!(matches!(
            "flops".parse::<CountConvention>(),
            Err(SchemeError::UnknownConvention(_))
        ));
    }
}
