use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nsdwt::engine::{
    compile, forward, forward_reference, inverse, run_reference, run_tiled, run_unsynchronized,
    Image2D, Sample, SubbandQuad, TileConfig,
};
use nsdwt::lifting::{build_scheme, cdf53, cdf97, transfer_matrix, LiftingPlan, SchemeKind};
use nsdwt::{EngineError, Mode, Wavelet};

fn random_image<T: Sample>(w: usize, h: usize, seed: u64) -> Image2D<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Image2D::from_fn(w, h, |_, _| T::from_f64(rng.gen_range(0.0..1.0))).unwrap()
}

fn bits(q: &SubbandQuad<f64>) -> Vec<u64> {
    q.bands().iter().flat_map(|b| b.samples().iter().map(|v| v.to_bits())).collect()
}

#[test]
fn constant_image_has_no_detail() {
    let img = Image2D::<f64>::from_fn(32, 24, |_, _| 0.75).unwrap();
    for kind in SchemeKind::ALL {
        let s = build_scheme(kind, &cdf53()).unwrap();
        let q = forward(&img, &s, &TileConfig::new(8, 8, 1)).unwrap();
        for band in [&q.hl, &q.lh, &q.hh] {
            assert!(band.max_abs() < 1e-15, "{kind}");
        }
        assert!(q.ll.samples().iter().all(|v| (v - 0.75).abs() < 1e-15));
    }
}

#[test]
fn schemes_agree_in_double_and_single() {
    for wavelet in Wavelet::ALL {
        let plan = wavelet.plan();
        let img = random_image::<f64>(64, 64, 11);
        let img32 = img.convert::<f32>();
        let cfg = TileConfig::new(16, 16, 2);
        let reference = forward(&img, &build_scheme(SchemeKind::SeparableConvolution, &plan).unwrap(), &cfg).unwrap();
        let reference32 = forward(&img32, &build_scheme(SchemeKind::SeparableConvolution, &plan).unwrap(), &cfg).unwrap();
        for kind in SchemeKind::ALL {
            let s = build_scheme(kind, &plan).unwrap();
            let d = forward(&img, &s, &cfg).unwrap().max_abs_diff(&reference);
            assert!(d <= 1e-9, "{wavelet} {kind}: {d:e}");
            let d32 = forward(&img32, &s, &cfg).unwrap().max_abs_diff(&reference32);
            assert!(d32 <= 1e-3, "{wavelet} {kind} single: {d32:e}");
        }
    }
}

#[test]
fn perfect_reconstruction() {
    for (plan, tol) in [(cdf53(), 1e-12), (cdf97(), 1e-9)] {
        let img = random_image::<f64>(64, 64, 3);
        for kind in SchemeKind::ALL {
            let s = build_scheme(kind, &plan).unwrap();
            let cfg = TileConfig::new(8, 8, 1);
            let back = inverse(&forward(&img, &s, &cfg).unwrap(), &s, &cfg).unwrap();
            let err = back.max_abs_diff(&img);
            assert!(err <= tol, "{} {kind}: {err:e}", plan.name);
        }
    }
}

#[test]
fn zeros_stay_zero() {
    let img = Image2D::<f64>::zeros(16, 16).unwrap();
    let s = build_scheme(SchemeKind::NonSeparableSplit, &cdf97()).unwrap();
    let cfg = TileConfig::default();
    let q = forward(&img, &s, &cfg).unwrap();
    assert!(q.bands().iter().all(|b| b.samples().iter().all(|&v| v == 0.0)));
    assert_eq!(inverse(&q, &s, &cfg).unwrap(), img);
}

#[test]
fn trivial_plan_only_deinterleaves() {
    let img = Image2D::<f64>::new(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
    for kind in SchemeKind::ALL {
        let s = build_scheme(kind, &LiftingPlan::trivial(Mode::Exact)).unwrap();
        let q = forward(&img, &s, &TileConfig::default()).unwrap();
        assert_eq!(q, SubbandQuad::deinterleave(&img).unwrap());
    }
}

#[test]
fn tiling_and_threads_are_bit_exact() {
    let img = random_image::<f64>(64, 64, 5);
    for wavelet in Wavelet::ALL {
        for kind in SchemeKind::ALL {
            let s = build_scheme(kind, &wavelet.plan()).unwrap();
            let want = bits(&forward_reference(&img, &s).unwrap());
            for (tw, th) in [(8, 8), (5, 3), (32, 32), (7, 32), (4, 4)] {
                for threads in [1, 8] {
                    for fused in [true, false] {
                        let cfg = TileConfig::new(tw, th, threads).with_fused(fused);
                        let got = bits(&forward(&img, &s, &cfg).unwrap());
                        assert!(got == want, "{wavelet} {kind} tile {tw}x{th} threads {threads} fused {fused}");
                    }
                }
            }
            let whole = bits(&forward(&img, &s, &TileConfig::untiled()).unwrap());
            assert!(whole == want);
        }
    }
}

#[test]
fn non_square_and_tiny_images() {
    for (w, h) in [(2, 2), (2, 10), (12, 4), (30, 6)] {
        let img = random_image::<f64>(w, h, 9);
        for kind in SchemeKind::ALL {
            let s = build_scheme(kind, &cdf97()).unwrap();
            let reference = forward_reference(&img, &s).unwrap();
            let cfg = TileConfig::new(3, 3, 2);
            let q = forward(&img, &s, &cfg).unwrap();
            assert_eq!(bits(&q), bits(&reference), "{w}x{h} {kind}");
            let back = inverse(&q, &s, &cfg).unwrap();
            assert!(back.max_abs_diff(&img) < 1e-9, "{w}x{h} {kind}");
        }
    }
}

#[test]
fn impulse_response_matches_transfer_matrix() {
    // A delta in component c at quadruple q0 shows up in component r at
    // q0 + k with the coefficient of z^{-k} in entry (r, c).
    let q0 = (8i32, 8i32);
    for wavelet in Wavelet::ALL {
        let n = transfer_matrix(&wavelet.plan()).unwrap().to_float();
        for kind in SchemeKind::ALL {
            let s = build_scheme(kind, &wavelet.plan()).unwrap();
            for c in 0..4 {
                let (px, py) = (2 * q0.0 as usize + (c & 1), 2 * q0.1 as usize + (c >> 1));
                let img = Image2D::<f64>::from_fn(32, 32, |x, y| if (x, y) == (px, py) { 1.0 } else { 0.0 }).unwrap();
                let q = forward(&img, &s, &TileConfig::new(8, 8, 1)).unwrap();
                for (r, band) in q.bands().iter().enumerate() {
                    for y in 0..16 {
                        for x in 0..16 {
                            let k = (x as i32 - q0.0, y as i32 - q0.1);
                            let want = n.entry(r, c).coefficient(k).map_or(0.0, |v| v.to_f64());
                            let got = band.get(x, y);
                            assert!((got - want).abs() < 1e-12, "{wavelet} {kind} ({r},{c}) at {k:?}: {got} vs {want}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn compiled_passes_round_trip_to_their_matrices() {
    for wavelet in Wavelet::ALL {
        for kind in SchemeKind::ALL {
            let s = build_scheme(kind, &wavelet.plan()).unwrap();
            let program = compile(&s);
            for (pass, compiled) in s.passes.iter().zip(&program.passes) {
                assert_eq!(compiled.to_matrix().entries(), pass.matrix.to_float().entries());
                assert_eq!(compiled.barrier_before, pass.barrier_before);
            }
        }
    }
}

#[test]
fn quarter_stencil_of_the_spatial_predict() {
    let s = build_scheme(SchemeKind::NonSeparableLifting, &cdf53()).unwrap();
    let program = compile(&s);
    let hh = program.passes[0].updates.iter().find(|u| u.target == 3).unwrap();
    let from_ll: Vec<_> = hh.terms.iter().filter(|t| t.source == 0).map(|t| (t.dm, t.dn, t.coef)).collect();
    assert_eq!(from_ll, vec![(0, 0, 0.25), (0, 1, 0.25), (1, 0, 0.25), (1, 1, 0.25)]);
}

#[test]
fn removing_barriers_breaks_the_result() {
    let img = random_image::<f64>(32, 32, 17);
    let s = build_scheme(SchemeKind::SeparableLifting, &cdf53()).unwrap();
    let program = compile(&s);
    let quad = SubbandQuad::deinterleave(&img).unwrap();
    let synchronized = run_reference(&program, &quad);
    let mut order: Vec<usize> = (0..16 * 16).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in (1..order.len()).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let racy = run_unsynchronized(&program, &quad, &order);
    assert!(racy.max_abs_diff(&synchronized) > 1e-3);
}

#[test]
fn forward_is_linear() {
    let x = random_image::<f64>(32, 32, 21);
    let y = random_image::<f64>(32, 32, 22);
    let (a, b) = (1.5, -0.25);
    let mix = Image2D::from_fn(32, 32, |i, j| a * x.get(i, j) + b * y.get(i, j)).unwrap();
    for wavelet in Wavelet::ALL {
        let s = build_scheme(SchemeKind::NonSeparableSplit, &wavelet.plan()).unwrap();
        let cfg = TileConfig::new(8, 8, 1);
        let (fx, fy, fm) = (
            forward(&x, &s, &cfg).unwrap(),
            forward(&y, &s, &cfg).unwrap(),
            forward(&mix, &s, &cfg).unwrap(),
        );
        for ((bx, by), bm) in fx.bands().iter().zip(fy.bands()).zip(fm.bands()) {
            for ((u, v), w) in bx.samples().iter().zip(by.samples()).zip(bm.samples()) {
                assert!((a * u + b * v - w).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn run_tiled_matches_reference() {
    let img = random_image::<f32>(48, 40, 2);
    let s = build_scheme(SchemeKind::NonSeparableSplit, &cdf97()).unwrap();
    let program = compile(&s);
    let tiled = run_tiled(&program, &img, &TileConfig::new(6, 5, 3)).unwrap();
    let reference = run_reference(&program, &SubbandQuad::deinterleave(&img).unwrap());
    assert_eq!(tiled, reference);
}

#[test]
fn invalid_inputs_are_rejected() {
    let s = build_scheme(SchemeKind::SeparableLifting, &cdf53()).unwrap();
    let odd = Image2D::<f64>::zeros(5, 4).unwrap();
    assert!(matches!(
        forward(&odd, &s, &TileConfig::default()),
        Err(EngineError::OddDimensions { width: 5, height: 4 })
    ));
    let img = Image2D::<f64>::zeros(64, 64).unwrap();
    // The 9/7 convolution passes reach two quadruples.
    let wide = build_scheme(SchemeKind::SeparableConvolution, &cdf97()).unwrap();
    assert!(matches!(
        forward(&img, &wide, &TileConfig::new(1, 1, 1)),
        Err(EngineError::TileSmallerThanHalo { .. })
    ));
    assert!(matches!(
        forward(&img, &s, &TileConfig::new(0, 4, 1)),
        Err(EngineError::InvalidConfig(_))
    ));
    assert!(matches!(
        forward(&img, &s, &TileConfig::new(4, 4, 0)),
        Err(EngineError::InvalidConfig(_))
    ));
}
