use std::fmt;
use std::str::FromStr;

use super::matrix::StepMatrix;
use super::plan::{FilterPair, LiftingPair, LiftingPlan};
use crate::error::{AlgebraError, SchemeError};
use crate::laurent::{
    embed_horizontal, embed_vertical, interleave, polyphase_split, Coefficient, LaurentPoly1,
    LaurentPoly2, Mode,
};

/// Maximum per-coefficient deviation tolerated between a float lifting
/// product and the reference filters.
pub const FILTER_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    SeparableConvolution,
    SeparableLifting,
    NonSeparableLifting,
    NonSeparableSplit,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 4] = [
        SchemeKind::SeparableConvolution,
        SchemeKind::SeparableLifting,
        SchemeKind::NonSeparableLifting,
        SchemeKind::NonSeparableSplit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::SeparableConvolution => "separable-convolution",
            SchemeKind::SeparableLifting => "separable-lifting",
            SchemeKind::NonSeparableLifting => "non-separable-lifting",
            SchemeKind::NonSeparableSplit => "non-separable-split",
        }
    }

    /// Short name used on the command line.
    pub fn short_name(self) -> &'static str {
        match self {
            SchemeKind::SeparableConvolution => "conv",
            SchemeKind::SeparableLifting => "sep-lift",
            SchemeKind::NonSeparableLifting => "ns-lift",
            SchemeKind::NonSeparableSplit => "ns-lift-split",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = SchemeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.name() == s || k.short_name() == s)
            .ok_or_else(|| SchemeError::UnknownScheme(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PassRole {
    Convolution,
    Predict,
    Update,
    /// Elementwise gains; never needs neighbours.
    Scale,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Pass {
    pub matrix: StepMatrix,
    /// A global synchronization point precedes this pass.
    pub barrier_before: bool,
    pub role: PassRole,
}

/// Ordered list of passes. `passes[0]` is applied first.
#[derive(Clone, Debug, PartialEq)]
pub struct Scheme {
    pub kind: SchemeKind,
    pub wavelet: String,
    pub direction: Direction,
    pub passes: Vec<Pass>,
}

impl Scheme {
    pub fn mode(&self) -> Mode {
        self.passes.first().map_or(Mode::Exact, |p| p.matrix.mode())
    }

    /// Number of barrier-delimited steps.
    pub fn steps(&self) -> usize {
        self.passes.iter().filter(|p| p.barrier_before).count()
    }

    /// Passes split at each barrier. A leading group without a barrier is
    /// kept as its own group.
    pub fn groups(&self) -> Vec<&[Pass]> {
        let mut groups = Vec::new();
        let mut start = 0;
        for (i, p) in self.passes.iter().enumerate() {
            if p.barrier_before && i > start {
                groups.push(&self.passes[start..i]);
                start = i;
            }
        }
        if start < self.passes.len() {
            groups.push(&self.passes[start..]);
        }
        groups
    }

    /// Symbolic product of all passes in application order.
    pub fn product(&self) -> Result<StepMatrix, AlgebraError> {
        let mut acc = StepMatrix::identity(self.mode());
        for p in &self.passes {
            acc = p.matrix.mul(&acc)?;
        }
        Ok(acc.with_label(format!("{} product", self.kind)))
    }

    /// Barrier notation, last pass first, e.g. `S[U] | T[P] |`.
    pub fn notation(&self) -> String {
        let groups = self.groups();
        groups
            .iter()
            .rev()
            .map(|g| {
                let body: Vec<&str> = g.iter().rev().map(|p| p.matrix.label.as_str()).collect();
                if g[0].barrier_before {
                    format!("{} |", body.join(" "))
                } else {
                    body.join(" ")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dir = match self.direction {
            Direction::Forward => "forward",
            Direction::Inverse => "inverse",
        };
        writeln!(f, "scheme {} ({}, {dir})", self.kind, self.wavelet)?;
        writeln!(f, "  {}", self.notation())?;
        writeln!(f, "  steps: {}", self.steps())?;
        for (i, p) in self.passes.iter().enumerate() {
            let barrier = if p.barrier_before { "barrier" } else { "no barrier" };
            writeln!(f, "pass {} ({barrier}, {:?})", i + 1, p.role)?;
            write!(f, "{}", p.matrix)?;
        }
        Ok(())
    }
}

/// 2×2 polyphase matrix of a 1-D transform over `LaurentPoly1`.
///
/// Rows are the (low, high) outputs, columns the (even, odd) input phases.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyphaseMatrix {
    entries: [[LaurentPoly1; 2]; 2],
}

impl PolyphaseMatrix {
    pub fn new(entries: [[LaurentPoly1; 2]; 2]) -> Self {
        PolyphaseMatrix { entries }
    }

    pub fn identity(mode: Mode) -> Self {
        Self::unit(mode, None, None)
    }

    fn unit(mode: Mode, upper: Option<&LaurentPoly1>, lower: Option<&LaurentPoly1>) -> Self {
        let zero = LaurentPoly1::zero(mode);
        PolyphaseMatrix {
            entries: [
                [LaurentPoly1::one(mode), upper.cloned().unwrap_or_else(|| zero.clone())],
                [lower.cloned().unwrap_or(zero), LaurentPoly1::one(mode)],
            ],
        }
    }

    /// `[[1, 0], [P, 1]]`
    pub fn predict(p: &LaurentPoly1) -> Self {
        Self::unit(p.mode(), None, Some(p))
    }

    /// `[[1, U], [0, 1]]`
    pub fn update(u: &LaurentPoly1) -> Self {
        Self::unit(u.mode(), Some(u), None)
    }

    pub fn gains(low: &Coefficient, high: &Coefficient) -> Self {
        let mode = low.mode();
        PolyphaseMatrix {
            entries: [
                [LaurentPoly1::constant(low.clone()), LaurentPoly1::zero(mode)],
                [LaurentPoly1::zero(mode), LaurentPoly1::constant(high.clone())],
            ],
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> &LaurentPoly1 {
        &self.entries[row][col]
    }

    pub fn mul(&self, rhs: &PolyphaseMatrix) -> Result<PolyphaseMatrix, AlgebraError> {
        let mut out = self.entries.clone();
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = self.entries[r][0]
                    .mul(&rhs.entries[0][c])?
                    .add(&self.entries[r][1].mul(&rhs.entries[1][c])?)?;
            }
        }
        Ok(PolyphaseMatrix { entries: out })
    }

    /// Multiplies out the lifting factorization, gains last.
    pub fn from_lifting(plan: &LiftingPlan) -> Result<Self, AlgebraError> {
        let mut acc = PolyphaseMatrix::identity(plan.mode);
        for pair in &plan.pairs {
            acc = PolyphaseMatrix::predict(&pair.predict).mul(&acc)?;
            acc = PolyphaseMatrix::update(&pair.update).mul(&acc)?;
        }
        if let Some((low, high)) = &plan.scale {
            acc = PolyphaseMatrix::gains(low, high).mul(&acc)?;
        }
        Ok(acc)
    }

    /// Builds the matrix directly from the analysis filters.
    pub fn from_filters(filters: &FilterPair) -> Self {
        let row = |g: &LaurentPoly1| {
            let parts = polyphase_split(g);
            [parts.odd, parts.even]
        };
        PolyphaseMatrix {
            entries: [row(&filters.low), row(&filters.high)],
        }
    }

    /// Recovers the analysis filters by interleaving each row.
    pub fn filters(&self) -> Result<FilterPair, AlgebraError> {
        let filter = |r: usize| interleave(&self.entries[r][1], &self.entries[r][0]);
        Ok(FilterPair {
            low: filter(0)?,
            high: filter(1)?,
        })
    }

    pub fn max_coefficient_diff(&self, other: &PolyphaseMatrix) -> f64 {
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(a, b)| a.max_coefficient_diff(b))
            .fold(0.0, f64::max)
    }

    /// Acts on the (0,1) and (2,3) component pairs along `z_m`.
    pub fn horizontal(&self, label: impl Into<String>) -> StepMatrix {
        self.lift(label, [(0, 1), (2, 3)], embed_horizontal)
    }

    /// Acts on the (0,2) and (1,3) component pairs along `z_n`.
    pub fn vertical(&self, label: impl Into<String>) -> StepMatrix {
        self.lift(label, [(0, 2), (1, 3)], embed_vertical)
    }

    fn lift(
        &self,
        label: impl Into<String>,
        pairs: [(usize, usize); 2],
        embed: fn(&LaurentPoly1) -> LaurentPoly2,
    ) -> StepMatrix {
        let mode = self.entries[0][0].mode();
        let mut e: [[LaurentPoly2; 4]; 4] =
            std::array::from_fn(|_| std::array::from_fn(|_| LaurentPoly2::zero(mode)));
        for (a, b) in pairs {
            let idx = [a, b];
            for r in 0..2 {
                for c in 0..2 {
                    e[idx[r]][idx[c]] = embed(&self.entries[r][c]);
                }
            }
        }
        StepMatrix::from_entries(label, e).expect("uniform mode")
    }
}

/// `T[P]ᴴ`, `T[P]ᵛ`, `S[U]ᴴ`, `S[U]ᵛ` for one lifting pair.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparableSteps {
    pub predict_h: StepMatrix,
    pub predict_v: StepMatrix,
    pub update_h: StepMatrix,
    pub update_v: StepMatrix,
}

pub fn build_separable_step_matrices(pair: &LiftingPair) -> SeparableSteps {
    separable_steps(pair, "")
}

fn separable_steps(pair: &LiftingPair, tag: &str) -> SeparableSteps {
    let predict = PolyphaseMatrix::predict(&pair.predict);
    let update = PolyphaseMatrix::update(&pair.update);
    SeparableSteps {
        predict_h: predict.horizontal(format!("T[P{tag}]^H")),
        predict_v: predict.vertical(format!("T[P{tag}]^V")),
        update_h: update.horizontal(format!("S[U{tag}]^H")),
        update_v: update.vertical(format!("S[U{tag}]^V")),
    }
}

/// The spatial predict `T[P]` and spatial update `S[U]`, written out
/// directly (not obtained by multiplying the separable steps).
pub fn build_nonseparable_step_matrices(
    pair: &LiftingPair,
) -> Result<(StepMatrix, StepMatrix), AlgebraError> {
    nonseparable_steps(pair, "")
}

fn nonseparable_steps(pair: &LiftingPair, tag: &str) -> Result<(StepMatrix, StepMatrix), AlgebraError> {
    let mode = pair.predict.mode();
    let p = embed_horizontal(&pair.predict);
    let pt = p.transpose();
    let u = embed_horizontal(&pair.update);
    let ut = u.transpose();
    let predict = StepMatrix::unit_with(
        format!("T[P{tag}]"),
        mode,
        &[
            ((1, 0), p.clone()),
            ((2, 0), pt.clone()),
            ((3, 0), p.mul(&pt)?),
            ((3, 1), pt),
            ((3, 2), p),
        ],
    )?;
    let update = StepMatrix::unit_with(
        format!("S[U{tag}]"),
        mode,
        &[
            ((0, 1), u.clone()),
            ((0, 2), ut.clone()),
            ((0, 3), u.mul(&ut)?),
            ((1, 3), ut),
            ((2, 3), u),
        ],
    )?;
    Ok((predict, update))
}

/// Polyphase convolution matrices of a plan, 1-D and lifted to 2-D.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvolutionMatrices {
    pub polyphase: PolyphaseMatrix,
    pub horizontal: StepMatrix,
    pub vertical: StepMatrix,
}

/// Builds the 1-D polyphase matrix from the lifting product and, when the
/// plan carries reference filters, checks it against the matrix built from
/// those filters.
pub fn build_convolution_matrix(plan: &LiftingPlan) -> Result<ConvolutionMatrices, SchemeError> {
    let polyphase = PolyphaseMatrix::from_lifting(plan)?;
    if let Some(filters) = &plan.filters {
        let direct = PolyphaseMatrix::from_filters(filters);
        let deviation = polyphase.max_coefficient_diff(&direct);
        let tolerance = match plan.mode {
            Mode::Exact if filters.low.mode() == Mode::Exact => 0.0,
            _ => FILTER_TOLERANCE,
        };
        if deviation > tolerance {
            return Err(SchemeError::FilterMismatch { deviation });
        }
    }
    Ok(ConvolutionMatrices {
        horizontal: polyphase.horizontal("N^H"),
        vertical: polyphase.vertical("N^V"),
        polyphase,
    })
}

/// Full 2-D polyphase transfer matrix `Nᵛ·Nᴴ` of a plan.
pub fn transfer_matrix(plan: &LiftingPlan) -> Result<StepMatrix, SchemeError> {
    let conv = build_convolution_matrix(plan)?;
    Ok(conv.vertical.mul(&conv.horizontal)?.with_label("N"))
}

/// Constant/remainder split of one lifting pair: `P = p0 + p1`,
/// `U = u0 + u1`, with `p0`, `u0` the zero-exponent terms.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitPolynomials {
    pub p0: Coefficient,
    pub u0: Coefficient,
    pub p1: LaurentPoly1,
    pub u1: LaurentPoly1,
}

pub fn split_constants(pair: &LiftingPair) -> SplitPolynomials {
    let split = |g: &LaurentPoly1| {
        let c = g.constant_term();
        let rest = g
            .sub(&LaurentPoly1::constant(c.clone()))
            .expect("same mode");
        (c, rest)
    };
    let (p0, p1) = split(&pair.predict);
    let (u0, u1) = split(&pair.update);
    SplitPolynomials { p0, u0, p1, u1 }
}

fn scale_pass(plan: &LiftingPlan) -> Option<Pass> {
    let (low, high) = plan.scale.as_ref()?;
    let gains = PolyphaseMatrix::gains(low, high);
    let matrix = gains
        .vertical("Z^V")
        .mul(&gains.horizontal("Z^H"))
        .expect("uniform mode")
        .with_label("Z");
    Some(Pass {
        matrix,
        barrier_before: false,
        role: PassRole::Scale,
    })
}

fn pass(matrix: StepMatrix, barrier_before: bool, role: PassRole) -> Pass {
    Pass {
        matrix,
        barrier_before,
        role,
    }
}

/// Barrier-free group: the first member carries the barrier. An empty
/// group becomes one identity pass so the step structure is preserved.
fn group(members: Vec<StepMatrix>, role: PassRole, mode: Mode, label: &str) -> Vec<Pass> {
    if members.is_empty() {
        return vec![pass(StepMatrix::identity(mode).with_label(label), true, role)];
    }
    members
        .into_iter()
        .enumerate()
        .map(|(i, m)| pass(m, i == 0, role))
        .collect()
}

fn split_group(
    remainder: &LiftingPair,
    constant: &LiftingPair,
    keep_remainder: bool,
    keep_constant: bool,
    tag: &str,
    predict: bool,
) -> Result<Vec<StepMatrix>, AlgebraError> {
    let mut members = Vec::new();
    if keep_remainder {
        let (t, s) = nonseparable_steps(remainder, &format!("1{tag}"))?;
        members.push(if predict { t } else { s });
    }
    if keep_constant {
        let sep = separable_steps(constant, &format!("0{tag}"));
        if predict {
            members.push(sep.predict_h);
            members.push(sep.predict_v);
        } else {
            members.push(sep.update_h);
            members.push(sep.update_v);
        }
    }
    Ok(members)
}

/// Builds one of the four schemes for a plan.
pub fn build_scheme(kind: SchemeKind, plan: &LiftingPlan) -> Result<Scheme, SchemeError> {
    let mode = plan.mode;
    let tagged = plan.pairs.len() > 1;
    let mut passes = Vec::new();
    match kind {
        SchemeKind::SeparableConvolution => {
            let conv = build_convolution_matrix(plan)?;
            passes.push(pass(conv.horizontal, true, PassRole::Convolution));
            passes.push(pass(conv.vertical, true, PassRole::Convolution));
        }
        SchemeKind::SeparableLifting => {
            for (k, pair) in plan.pairs.iter().enumerate() {
                let tag = pair_tag(tagged, k);
                let s = separable_steps(pair, &tag);
                passes.push(pass(s.predict_h, true, PassRole::Predict));
                passes.push(pass(s.predict_v, true, PassRole::Predict));
                passes.push(pass(s.update_h, true, PassRole::Update));
                passes.push(pass(s.update_v, true, PassRole::Update));
            }
        }
        SchemeKind::NonSeparableLifting => {
            for (k, pair) in plan.pairs.iter().enumerate() {
                let (t, s) = nonseparable_steps(pair, &pair_tag(tagged, k))?;
                passes.push(pass(t, true, PassRole::Predict));
                passes.push(pass(s, true, PassRole::Update));
            }
        }
        SchemeKind::NonSeparableSplit => {
            for (k, pair) in plan.pairs.iter().enumerate() {
                let tag = pair_tag(tagged, k);
                let split = split_constants(pair);
                let remainder = LiftingPair::new(split.p1.clone(), split.u1.clone());
                let constant = LiftingPair::new(
                    LaurentPoly1::constant(split.p0.clone()),
                    LaurentPoly1::constant(split.u0.clone()),
                );
                let predict = split_group(
                    &remainder,
                    &constant,
                    !split.p1.is_zero(),
                    !split.p0.is_zero(),
                    &tag,
                    true,
                )?;
                passes.extend(group(predict, PassRole::Predict, mode, &format!("T[P{tag}]")));
                let update = split_group(
                    &remainder,
                    &constant,
                    !split.u1.is_zero(),
                    !split.u0.is_zero(),
                    &tag,
                    false,
                )?;
                passes.extend(group(update, PassRole::Update, mode, &format!("S[U{tag}]")));
            }
        }
    }
    if kind != SchemeKind::SeparableConvolution {
        passes.extend(scale_pass(plan));
    }
    Ok(Scheme {
        kind,
        wavelet: plan.name.clone(),
        direction: Direction::Forward,
        passes,
    })
}

fn pair_tag(tagged: bool, k: usize) -> String {
    if tagged {
        format!("({})", k + 1)
    } else {
        String::new()
    }
}

/// The constant-split non-separable scheme.
pub fn build_split_scheme(plan: &LiftingPlan) -> Result<Scheme, SchemeError> {
    build_scheme(SchemeKind::NonSeparableSplit, plan)
}

/// Reverses the pass order and inverts every pass. Barrier groups are kept:
/// each group is reversed internally and its barrier moves to its new first
/// member.
pub fn invert_scheme(scheme: &Scheme) -> Result<Scheme, SchemeError> {
    let mut passes = Vec::with_capacity(scheme.passes.len());
    for g in scheme.groups().into_iter().rev() {
        let barrier = g[0].barrier_before;
        for (i, p) in g.iter().rev().enumerate() {
            let mut matrix = p.matrix.inverse()?;
            matrix.label = match p.matrix.label.strip_suffix("⁻¹") {
                Some(base) => base.to_string(),
                None => format!("{}⁻¹", p.matrix.label),
            };
            passes.push(Pass {
                matrix,
                barrier_before: barrier && i == 0,
                role: p.role,
            });
        }
    }
    Ok(Scheme {
        kind: scheme.kind,
        wavelet: scheme.wavelet.clone(),
        direction: match scheme.direction {
            Direction::Forward => Direction::Inverse,
            Direction::Inverse => Direction::Forward,
        },
        passes,
    })
}
