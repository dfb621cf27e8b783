use std::ops::Range;

use rayon::prelude::*;

use super::boundary::reflect_phase;
use super::image::{Image2D, Sample, SubbandQuad};
use super::stencil::{CompiledPass, StencilProgram};
use crate::error::EngineError;
use crate::lifting::{invert_scheme, Direction, Scheme};

/// Tiling and threading of the engine. Tile sizes are in quadruples, so an
/// 8×8 tile covers 16×16 pixels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TileConfig {
    pub tile_width: usize,
    pub tile_height: usize,
    pub threads: usize,
    /// Run barrier-free pass groups in one sweep per tile. When false, every
    /// pass is followed by a global synchronization point.
    pub fused: bool,
}

impl Default for TileConfig {
    fn default() -> Self {
        TileConfig {
            tile_width: 64,
            tile_height: 64,
            threads: 1,
            fused: true,
        }
    }
}

impl TileConfig {
    pub fn new(tile_width: usize, tile_height: usize, threads: usize) -> Self {
        TileConfig {
            tile_width,
            tile_height,
            threads,
            fused: true,
        }
    }

    /// One tile for the whole image.
    pub fn untiled() -> Self {
        Self::new(usize::MAX, usize::MAX, 1)
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn with_fused(mut self, fused: bool) -> Self {
        self.fused = fused;
        self
    }

    /// Halo the program needs under this configuration.
    pub fn halo(&self, program: &StencilProgram) -> usize {
        let (hx, hy) = program.halo(self.fused);
        hx.max(hy)
    }

    fn validate(&self) -> Result<(), EngineError> {
        if self.tile_width == 0 || self.tile_height == 0 {
            return Err(EngineError::InvalidConfig("tile dimensions must be positive".into()));
        }
        if self.threads == 0 {
            return Err(EngineError::InvalidConfig("thread count must be positive".into()));
        }
        Ok(())
    }
}

/// The four quadruple components as separate planes.
#[derive(Clone, Debug)]
struct Planes<T> {
    qw: usize,
    qh: usize,
    comps: [Vec<T>; 4],
}

impl<T: Sample> Planes<T> {
    fn from_quad(quad: SubbandQuad<T>) -> Self {
        let (qw, qh) = (quad.width(), quad.height());
        Planes {
            qw,
            qh,
            comps: quad.into_bands().map(Image2D::into_samples),
        }
    }

    fn into_quad(self) -> SubbandQuad<T> {
        let (qw, qh) = (self.qw, self.qh);
        SubbandQuad::from_bands(self.comps.map(|c| Image2D::new(qw, qh, c).expect("plane size")))
            .expect("equal planes")
    }
}

struct TypedTerm<T> {
    source: usize,
    dm: i64,
    dn: i64,
    coef: T,
}

struct TypedUpdate<T> {
    target: usize,
    keep_self: bool,
    terms: Vec<TypedTerm<T>>,
}

struct TypedPass<T> {
    updates: Vec<TypedUpdate<T>>,
    reach: (usize, usize),
}

impl<T: Sample> TypedPass<T> {
    fn new(pass: &CompiledPass) -> Self {
        TypedPass {
            updates: pass
                .updates
                .iter()
                .map(|u| TypedUpdate {
                    target: u.target,
                    keep_self: u.keep_self,
                    terms: u
                        .terms
                        .iter()
                        .map(|t| TypedTerm {
                            source: t.source,
                            dm: t.dm as i64,
                            dn: t.dn as i64,
                            coef: T::from_f64(t.coef),
                        })
                        .collect(),
                })
                .collect(),
            reach: pass.reach,
        }
    }
}

fn typed<T: Sample>(passes: &[CompiledPass]) -> Vec<TypedPass<T>> {
    passes.iter().map(TypedPass::new).collect()
}

/// Index along one axis for component parity `parity`, reflected into
/// `0..count` when it falls outside the image.
#[inline]
fn fetch(q: i64, parity: usize, count: usize) -> usize {
    if q >= 0 && (q as usize) < count {
        q as usize
    } else {
        reflect_phase(q, parity, count)
    }
}

/// Untiled single-threaded execution with per-read symmetric extension;
/// the oracle for the tiled executor.
pub fn run_reference<T: Sample>(
    program: &StencilProgram,
    quad: &SubbandQuad<T>,
) -> SubbandQuad<T> {
    let mut planes = Planes::from_quad(quad.clone());
    let (qw, qh) = (planes.qw, planes.qh);
    for pass in typed::<T>(&program.passes) {
        let old = planes.comps.clone();
        for u in &pass.updates {
            let dst = &mut planes.comps[u.target];
            for qy in 0..qh {
                for qx in 0..qw {
                    let i = qy * qw + qx;
                    let mut acc = if u.keep_self { old[u.target][i] } else { T::default() };
                    for t in &u.terms {
                        let sx = fetch(qx as i64 + t.dm, t.source & 1, qw);
                        let sy = fetch(qy as i64 + t.dn, t.source >> 1, qh);
                        acc = acc + t.coef * old[t.source][sy * qw + sx];
                    }
                    dst[i] = acc;
                }
            }
        }
    }
    planes.into_quad()
}

/// Executes every pass in place, one quadruple at a time in `order`, with
/// no synchronization at all. Exists to show that the barriers matter.
pub fn run_unsynchronized<T: Sample>(
    program: &StencilProgram,
    quad: &SubbandQuad<T>,
    order: &[usize],
) -> SubbandQuad<T> {
    let mut planes = Planes::from_quad(quad.clone());
    let (qw, qh) = (planes.qw, planes.qh);
    let passes = typed::<T>(&program.passes);
    for &i in order {
        let (qx, qy) = (i % qw, i / qw);
        for pass in &passes {
            for u in &pass.updates {
                let mut acc = if u.keep_self { planes.comps[u.target][i] } else { T::default() };
                for t in &u.terms {
                    let sx = fetch(qx as i64 + t.dm, t.source & 1, qw);
                    let sy = fetch(qy as i64 + t.dn, t.source >> 1, qh);
                    acc = acc + t.coef * planes.comps[t.source][sy * qw + sx];
                }
                planes.comps[u.target][i] = acc;
            }
        }
    }
    planes.into_quad()
}

/// Buffer of one tile plus halo, clipped to the image.
struct Window {
    x: Range<usize>,
    y: Range<usize>,
}

impl Window {
    fn width(&self) -> usize {
        self.x.end - self.x.start
    }
}

struct Scratch<T> {
    buf: [Vec<T>; 4],
    tmp: Vec<Vec<T>>,
}

impl<T: Sample> Scratch<T> {
    fn new() -> Self {
        Scratch {
            buf: Default::default(),
            tmp: Vec::new(),
        }
    }
}

/// Runs one barrier-free group of passes on one tile.
///
/// The window holds the tile plus the group halo, clipped to the image.
/// After each pass the region still holding correct values shrinks by the
/// pass reach on every side that is not an image border; at image borders
/// reads are reflected back into the window instead.
#[allow(clippy::too_many_arguments)]
fn run_tile<T: Sample>(
    passes: &[TypedPass<T>],
    src: &[Vec<T>; 4],
    qw: usize,
    qh: usize,
    tile_x: Range<usize>,
    tile_y: Range<usize>,
    halo: (usize, usize),
    scratch: &mut Scratch<T>,
) -> Window {
    let win = Window {
        x: tile_x.start.saturating_sub(halo.0)..(tile_x.end + halo.0).min(qw),
        y: tile_y.start.saturating_sub(halo.1)..(tile_y.end + halo.1).min(qh),
    };
    let bw = win.width();
    for c in 0..4 {
        let buf = &mut scratch.buf[c];
        buf.clear();
        for gy in win.y.clone() {
            buf.extend_from_slice(&src[c][gy * qw + win.x.start..gy * qw + win.x.end]);
        }
    }

    let mut consumed = (0, 0);
    for pass in passes {
        consumed.0 += pass.reach.0;
        consumed.1 += pass.reach.1;
        let lo_x = if win.x.start == 0 { 0 } else { win.x.start + consumed.0 };
        let hi_x = if win.x.end == qw { qw } else { win.x.end - consumed.0 };
        let lo_y = if win.y.start == 0 { 0 } else { win.y.start + consumed.1 };
        let hi_y = if win.y.end == qh { qh } else { win.y.end - consumed.1 };
        let rw = hi_x - lo_x;
        let rh = hi_y - lo_y;

        scratch.tmp.resize_with(pass.updates.len(), Vec::new);
        for (u, out) in pass.updates.iter().zip(scratch.tmp.iter_mut()) {
            out.clear();
            out.resize(rw * rh, T::default());
            for gy in lo_y..hi_y {
                let ly = gy - win.y.start;
                let out_row = &mut out[(gy - lo_y) * rw..(gy - lo_y + 1) * rw];
                if u.keep_self {
                    let row = &scratch.buf[u.target][ly * bw..(ly + 1) * bw];
                    out_row.copy_from_slice(&row[lo_x - win.x.start..hi_x - win.x.start]);
                }
                for t in &u.terms {
                    let sy = fetch(gy as i64 + t.dn, t.source >> 1, qh) - win.y.start;
                    let row = &scratch.buf[t.source][sy * bw..(sy + 1) * bw];
                    let parity = t.source & 1;
                    // Columns whose source lies inside the image need no
                    // reflection and are handled as one contiguous run.
                    let fast_lo = (lo_x as i64).max(-t.dm).min(hi_x as i64) as usize;
                    let fast_hi = ((hi_x as i64).min(qw as i64 - t.dm)).max(fast_lo as i64) as usize;
                    for gx in (lo_x..fast_lo).chain(fast_hi..hi_x) {
                        let sx = fetch(gx as i64 + t.dm, parity, qw) - win.x.start;
                        let o = &mut out_row[gx - lo_x];
                        *o = *o + t.coef * row[sx];
                    }
                    let n = fast_hi - fast_lo;
                    if n > 0 {
                        let s0 = (fast_lo as i64 + t.dm) as usize - win.x.start;
                        let dst = &mut out_row[fast_lo - lo_x..fast_hi - lo_x];
                        for (o, &v) in dst.iter_mut().zip(&row[s0..s0 + n]) {
                            *o = *o + t.coef * v;
                        }
                    }
                }
            }
        }
        for (u, out) in pass.updates.iter().zip(&scratch.tmp) {
            let buf = &mut scratch.buf[u.target];
            for gy in lo_y..hi_y {
                let ly = gy - win.y.start;
                let start = ly * bw + lo_x - win.x.start;
                buf[start..start + rw].copy_from_slice(&out[(gy - lo_y) * rw..(gy - lo_y + 1) * rw]);
            }
        }
    }
    win
}

/// Executes stencil programs over tiles with a fixed worker pool.
pub struct Engine {
    cfg: TileConfig,
    pool: rayon::ThreadPool,
}

impl Engine {
    pub fn new(cfg: TileConfig) -> Result<Self, EngineError> {
        cfg.validate()?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| EngineError::InvalidConfig(e.to_string()))?;
        Ok(Engine { cfg, pool })
    }

    pub fn config(&self) -> &TileConfig {
        &self.cfg
    }

    pub fn forward<T: Sample>(
        &self,
        image: &Image2D<T>,
        scheme: &Scheme,
    ) -> Result<SubbandQuad<T>, EngineError> {
        let quad = SubbandQuad::deinterleave(image)?;
        self.run(&StencilProgram::compile(scheme), quad)
    }

    /// Accepts either the forward scheme (inverted here) or an already
    /// inverted one.
    pub fn inverse<T: Sample>(
        &self,
        quad: &SubbandQuad<T>,
        scheme: &Scheme,
    ) -> Result<Image2D<T>, EngineError> {
        let program = match scheme.direction {
            Direction::Forward => StencilProgram::compile(&invert_scheme(scheme)?),
            Direction::Inverse => StencilProgram::compile(scheme),
        };
        Ok(self.run(&program, quad.clone())?.interleave())
    }

    /// Runs a compiled program on deinterleaved data.
    pub fn run<T: Sample>(
        &self,
        program: &StencilProgram,
        quad: SubbandQuad<T>,
    ) -> Result<SubbandQuad<T>, EngineError> {
        let mut src = Planes::from_quad(quad);
        let (qw, qh) = (src.qw, src.qh);
        let (tw, th) = (self.cfg.tile_width.min(qw), self.cfg.tile_height.min(qh));
        let passes = typed::<T>(&program.passes);
        let groups = program.groups(self.cfg.fused);
        for g in &groups {
            let (hx, hy) = program.group_halo(g.clone());
            if (tw < hx && tw < qw) || (th < hy && th < qh) {
                return Err(EngineError::TileSmallerThanHalo {
                    tile_width: self.cfg.tile_width,
                    tile_height: self.cfg.tile_height,
                    halo: hx.max(hy),
                });
            }
        }

        let mut dst: [Vec<T>; 4] = std::array::from_fn(|_| vec![T::default(); qw * qh]);
        for g in groups {
            let halo = program.group_halo(g.clone());
            let group = &passes[g];
            let mut modified: Vec<usize> = group
                .iter()
                .flat_map(|p| p.updates.iter().map(|u| u.target))
                .collect();
            modified.sort_unstable();
            modified.dedup();
            if modified.is_empty() {
                continue;
            }

            // One work item per band of tile rows; each owns the matching
            // rows of every modified output plane.
            let mut per_comp: Vec<std::slice::ChunksMut<'_, T>> = Vec::new();
            for (c, plane) in dst.iter_mut().enumerate() {
                if modified.contains(&c) {
                    per_comp.push(plane.chunks_mut(th * qw));
                }
            }
            let mut bands: Vec<(usize, Vec<&mut [T]>)> = Vec::new();
            for b in 0..qh.div_ceil(th) {
                let rows = per_comp.iter_mut().map(|it| it.next().expect("band")).collect();
                bands.push((b, rows));
            }
            let src_ref = &src.comps;
            let modified_ref = &modified;
            self.pool.install(|| {
                bands.into_par_iter().for_each_init(Scratch::new, |scratch, (b, mut rows)| {
                    let ty = b * th..((b + 1) * th).min(qh);
                    for tx0 in (0..qw).step_by(tw) {
                        let tx = tx0..(tx0 + tw).min(qw);
                        let win =
                            run_tile(group, src_ref, qw, qh, tx.clone(), ty.clone(), halo, scratch);
                        let bw = win.width();
                        for (j, &c) in modified_ref.iter().enumerate() {
                            for gy in ty.clone() {
                                let from = (gy - win.y.start) * bw + tx.start - win.x.start;
                                let to = (gy - ty.start) * qw + tx.start;
                                rows[j][to..to + tx.len()]
                                    .copy_from_slice(&scratch.buf[c][from..from + tx.len()]);
                            }
                        }
                    }
                });
            });
            for c in modified {
                std::mem::swap(&mut src.comps[c], &mut dst[c]);
            }
        }
        Ok(src.into_quad())
    }
}

/// Forward transform of an even-sized image.
pub fn forward<T: Sample>(
    image: &Image2D<T>,
    scheme: &Scheme,
    cfg: &TileConfig,
) -> Result<SubbandQuad<T>, EngineError> {
    Engine::new(*cfg)?.forward(image, scheme)
}

/// Inverse transform; `scheme` is the forward scheme.
pub fn inverse<T: Sample>(
    quad: &SubbandQuad<T>,
    scheme: &Scheme,
    cfg: &TileConfig,
) -> Result<Image2D<T>, EngineError> {
    Engine::new(*cfg)?.inverse(quad, scheme)
}

/// Runs a compiled program on an image with the tiled executor.
pub fn run_tiled<T: Sample>(
    program: &StencilProgram,
    image: &Image2D<T>,
    cfg: &TileConfig,
) -> Result<SubbandQuad<T>, EngineError> {
    Engine::new(*cfg)?.run(program, SubbandQuad::deinterleave(image)?)
}

/// Forward transform with the reference executor.
pub fn forward_reference<T: Sample>(
    image: &Image2D<T>,
    scheme: &Scheme,
) -> Result<SubbandQuad<T>, EngineError> {
    let quad = SubbandQuad::deinterleave(image)?;
    Ok(run_reference(&StencilProgram::compile(scheme), &quad))
}
