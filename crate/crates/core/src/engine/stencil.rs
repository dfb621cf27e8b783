use std::ops::Range;

use crate::laurent::{Coefficient, LaurentPoly2, Mode};
use crate::lifting::{PassRole, Scheme, StepMatrix};

/// One multiply–accumulate: `coef · source[q + (dm, dn)]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Term {
    pub source: usize,
    pub dm: i32,
    pub dn: i32,
    pub coef: f64,
}

/// New value of one component. Starts from the old value when `keep_self`
/// (the diagonal entry is exactly 1), otherwise from zero, then adds the
/// terms in order.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentUpdate {
    pub target: usize,
    pub keep_self: bool,
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompiledPass {
    pub label: String,
    pub barrier_before: bool,
    pub role: PassRole,
    /// Components left untouched by the pass have no entry.
    pub updates: Vec<ComponentUpdate>,
    /// `(max |dm|, max |dn|)`.
    pub reach: (usize, usize),
}

impl CompiledPass {
    pub fn compile(matrix: &StepMatrix, barrier_before: bool, role: PassRole) -> Self {
        let m = matrix.to_float();
        let mut updates = Vec::new();
        for r in 0..4 {
            let keep_self = m.entry(r, r).is_one();
            if keep_self && (0..4).all(|c| c == r || m.entry(r, c).is_zero()) {
                continue;
            }
            let mut terms = Vec::new();
            for c in 0..4 {
                if c == r && keep_self {
                    continue;
                }
                for (&(km, kn), coef) in m.entry(r, c).terms() {
                    terms.push(Term {
                        source: c,
                        dm: -km,
                        dn: -kn,
                        coef: coef.to_f64(),
                    });
                }
            }
            terms.sort_by_key(|t| (t.dm, t.dn, t.source));
            updates.push(ComponentUpdate {
                target: r,
                keep_self,
                terms,
            });
        }
        let reach = updates
            .iter()
            .flat_map(|u| &u.terms)
            .fold((0, 0), |(a, b), t| {
                (a.max(t.dm.unsigned_abs() as usize), b.max(t.dn.unsigned_abs() as usize))
            });
        CompiledPass {
            label: matrix.label.clone(),
            barrier_before,
            role,
            updates,
            reach,
        }
    }

    /// Rebuilds the (float) step matrix the pass was compiled from.
    pub fn to_matrix(&self) -> StepMatrix {
        let mut entries: [[LaurentPoly2; 4]; 4] = std::array::from_fn(|r| {
            std::array::from_fn(|c| {
                if r == c {
                    LaurentPoly2::one(Mode::Float)
                } else {
                    LaurentPoly2::zero(Mode::Float)
                }
            })
        });
        for u in &self.updates {
            if !u.keep_self {
                entries[u.target][u.target] = LaurentPoly2::zero(Mode::Float);
            }
            for t in &u.terms {
                let term = LaurentPoly2::monomial((-t.dm, -t.dn), Coefficient::float(t.coef));
                let cell = &mut entries[u.target][t.source];
                *cell = cell.add(&term).expect("float mode");
            }
        }
        StepMatrix::from_entries(self.label.clone(), entries).expect("float mode")
    }

    pub fn modified(&self) -> impl Iterator<Item = usize> + '_ {
        self.updates.iter().map(|u| u.target)
    }
}

/// Executable form of a scheme.
#[derive(Clone, Debug, PartialEq)]
pub struct StencilProgram {
    pub passes: Vec<CompiledPass>,
}

impl StencilProgram {
    pub fn compile(scheme: &Scheme) -> Self {
        StencilProgram {
            passes: scheme
                .passes
                .iter()
                .map(|p| CompiledPass::compile(&p.matrix, p.barrier_before, p.role))
                .collect(),
        }
    }

    /// Pass ranges executed between global synchronization points. When
    /// `fused` is false every pass forms its own group.
    pub fn groups(&self, fused: bool) -> Vec<Range<usize>> {
        let mut groups = Vec::new();
        let mut start = 0;
        for (i, p) in self.passes.iter().enumerate() {
            if i > start && (p.barrier_before || !fused) {
                groups.push(start..i);
                start = i;
            }
        }
        if start < self.passes.len() {
            groups.push(start..self.passes.len());
        }
        groups
    }

    /// Halo of a group: the sum of its passes' reaches per axis.
    pub fn group_halo(&self, group: Range<usize>) -> (usize, usize) {
        self.passes[group]
            .iter()
            .fold((0, 0), |(a, b), p| (a + p.reach.0, b + p.reach.1))
    }

    /// Widest halo over all groups, per axis.
    pub fn halo(&self, fused: bool) -> (usize, usize) {
        self.groups(fused)
            .into_iter()
            .map(|g| self.group_halo(g))
            .fold((0, 0), |(a, b), (c, d)| (a.max(c), b.max(d)))
    }
}

/// Lowers every pass of a scheme to stencils.
pub fn compile(scheme: &Scheme) -> StencilProgram {
    StencilProgram::compile(scheme)
}
