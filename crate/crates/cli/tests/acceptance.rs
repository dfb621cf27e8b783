//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use nsdwt::lifting::{
    build_nonseparable_step_matrices, build_separable_step_matrices, fuse, transfer_matrix,
    PolyphaseMatrix,
};
use nsdwt::{
    build_scheme, count_operations, forward, CountConvention, Image2D, Mode, Precision, SchemeKind,
    SubbandQuad, TileConfig, Wavelet,
};
use nsdwt_cli::bench::{CSV_HEADER, DEFAULT_SIZES, MIN_REPS};
use nsdwt_cli::verify::{random_image, run_verify, VerifyConfig};

const FUSION_TOL_97: f64 = 1e-12;
const FUSION_BUDGET: Duration = Duration::from_secs(1);
const CROSS_TOL_DOUBLE: f64 = 1e-9;
const CROSS_BUDGET: Duration = Duration::from_secs(30);
const RECON_TOL_53: f64 = 1e-12;
const RECON_TOL_97: f64 = 1e-9;
const RECON_TOL_SINGLE: f64 = 1e-3;
const IMPULSE_TOL: f64 = 1e-12;
const FILTER_TOL_97: f64 = 1e-12;
const CORPUS_IMAGES: usize = 20;
const CORPUS_MAX: usize = 256;

struct Outcome {
    name: &'static str,
    ok: bool,
    detail: String,
}

fn fusion() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut worst = 0.0f64;
    for wavelet in Wavelet::ALL {
        let plan = wavelet.plan();
        for pair in &plan.pairs {
            let sep = build_separable_step_matrices(pair);
            let (t, s) = build_nonseparable_step_matrices(pair).unwrap();
            let ft = fuse(&sep.predict_v, &sep.predict_h).unwrap();
            let fs = fuse(&sep.update_v, &sep.update_h).unwrap();
            match plan.mode {
                Mode::Exact => ok &= ft.entries() == t.entries() && fs.entries() == s.entries(),
                Mode::Float => {
                    let d = ft.max_coefficient_diff(&t).max(fs.max_coefficient_diff(&s));
                    worst = worst.max(d);
                    ok &= d <= FUSION_TOL_97;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ok &= elapsed < FUSION_BUDGET;
    Outcome {
        name: "fusion identity",
        ok,
        detail: format!("cdf53 exact, cdf97 max diff {worst:.2e} (tol {FUSION_TOL_97:e}), {elapsed:.2?}"),
    }
}

fn steps() -> Outcome {
    let want = [(Wavelet::Cdf53, [2, 4, 2]), (Wavelet::Cdf97, [2, 8, 4])];
    let kinds = [SchemeKind::SeparableConvolution, SchemeKind::SeparableLifting, SchemeKind::NonSeparableSplit];
    let mut ok = true;
    let mut detail = Vec::new();
    for (wavelet, expected) in want {
        let got: Vec<usize> = kinds.iter().map(|&k| build_scheme(k, &wavelet.plan()).unwrap().steps()).collect();
        ok &= got == expected;
        detail.push(format!("{wavelet} {got:?}"));
    }
    Outcome { name: "steps per scheme", ok, detail: detail.join(", ") }
}

fn op_counts() -> Outcome {
    let want = [(Wavelet::Cdf53, 16, 18), (Wavelet::Cdf97, 32, 36)];
    let mut ok = true;
    let mut detail = Vec::new();
    for (wavelet, sep_want, split_want) in want {
        let plan = wavelet.plan();
        let mac = |k| count_operations(&build_scheme(k, &plan).unwrap(), CountConvention::Mac).ops;
        let (sep, split) = (mac(SchemeKind::SeparableLifting), mac(SchemeKind::NonSeparableSplit));
        ok &= sep == sep_want && split == split_want;
        let conv = build_scheme(SchemeKind::SeparableConvolution, &plan).unwrap();
        let conv: Vec<String> = CountConvention::ALL
            .iter()
            .map(|&c| format!("{}={}", c.name(), count_operations(&conv, c).ops))
            .collect();
        detail.push(format!("{wavelet} sep {sep} split {split} conv [{}]", conv.join(" ")));
    }
    Outcome { name: "mac op counts", ok, detail: detail.join("; ") }
}

fn corpus(precision: Precision) -> VerifyConfig {
    VerifyConfig {
        precision,
        images: CORPUS_IMAGES,
        max_size: CORPUS_MAX,
        ..VerifyConfig::default()
    }
}

fn cross_and_reconstruction() -> [Outcome; 2] {
    let start = Instant::now();
    let double = run_verify(&corpus(Precision::Double)).unwrap();
    let elapsed = start.elapsed();
    let single = run_verify(&corpus(Precision::Single)).unwrap();

    let cross: Vec<_> = double.checks.iter().filter(|c| c.name.starts_with("cross-scheme")).collect();
    let cross_worst = cross.iter().map(|c| c.value).fold(0.0, f64::max);
    let cross_ok = cross.len() == 12
        && cross.iter().all(|c| c.value <= CROSS_TOL_DOUBLE)
        && elapsed < CROSS_BUDGET;

    let worst = |report: &nsdwt_cli::verify::VerifyReport, wavelet: &str| {
        report
            .checks
            .iter()
            .filter(|c| c.name.starts_with(&format!("reconstruction {wavelet}")))
            .map(|c| c.value)
            .fold(0.0, f64::max)
    };
    let (r53, r97) = (worst(&double, "cdf53"), worst(&double, "cdf97"));
    let rs = worst(&single, "cdf53").max(worst(&single, "cdf97"));
    [
        Outcome {
            name: "cross-scheme equivalence",
            ok: cross_ok,
            detail: format!(
                "{CORPUS_IMAGES} images up to {CORPUS_MAX}, {} pairs, max diff {cross_worst:.2e} (tol {CROSS_TOL_DOUBLE:e}), {elapsed:.2?}",
                cross.len()
            ),
        },
        Outcome {
            name: "perfect reconstruction",
            ok: r53 <= RECON_TOL_53 && r97 <= RECON_TOL_97 && rs <= RECON_TOL_SINGLE,
            detail: format!("cdf53 {r53:.2e}, cdf97 {r97:.2e}, single {rs:.2e}"),
        },
    ]
}

fn bits(q: &SubbandQuad<f64>) -> Vec<u64> {
    q.bands().iter().flat_map(|b| b.samples().iter().map(|v| v.to_bits())).collect()
}

fn tiling() -> Outcome {
    let img = random_image::<f64>(192, 160, 11);
    let mut ok = true;
    let mut runs = 0;
    for wavelet in Wavelet::ALL {
        for kind in SchemeKind::ALL {
            let s = build_scheme(kind, &wavelet.plan()).unwrap();
            let want = bits(&forward(&img, &s, &TileConfig::untiled()).unwrap());
            for tile in [Some(8), Some(16), Some(32), None] {
                for threads in [1, 2, 8] {
                    let cfg = match tile {
                        Some(t) => TileConfig::new(t, t, threads),
                        None => TileConfig::untiled().with_threads(threads),
                    };
                    ok &= bits(&forward(&img, &s, &cfg).unwrap()) == want;
                    runs += 1;
                }
            }
        }
    }
    Outcome { name: "tiling/thread invariance", ok, detail: format!("{runs} runs bit-identical: {ok}") }
}

fn impulse() -> Outcome {
    let (size, q0) = (48usize, 12i32);
    let mut worst = 0.0f64;
    for wavelet in Wavelet::ALL {
        let n = transfer_matrix(&wavelet.plan()).unwrap().to_float();
        for kind in SchemeKind::ALL {
            let s = build_scheme(kind, &wavelet.plan()).unwrap();
            for c in 0..4 {
                let (px, py) = (2 * q0 as usize + (c & 1), 2 * q0 as usize + (c >> 1));
                let img = Image2D::<f64>::from_fn(size, size, |x, y| f64::from((x, y) == (px, py))).unwrap();
                let q = forward(&img, &s, &TileConfig::default()).unwrap();
                for (r, band) in q.bands().iter().enumerate() {
                    for y in 0..size / 2 {
                        for x in 0..size / 2 {
                            let k = (x as i32 - q0, y as i32 - q0);
                            let want = n.entry(r, c).coefficient(k).map_or(0.0, |v| v.to_f64());
                            worst = worst.max((band.get(x, y) - want).abs());
                        }
                    }
                }
            }
        }
    }
    Outcome {
        name: "impulse response",
        ok: worst <= IMPULSE_TOL,
        detail: format!("max diff {worst:.2e} (tol {IMPULSE_TOL:e})"),
    }
}

fn lifting_product() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for wavelet in Wavelet::ALL {
        let plan = wavelet.plan();
        let lifted = PolyphaseMatrix::from_lifting(&plan).unwrap();
        let conv = PolyphaseMatrix::from_filters(plan.filters.as_ref().unwrap());
        match plan.mode {
            Mode::Exact => {
                ok &= lifted == conv;
                detail.push(format!("{wavelet} exact"));
            }
            Mode::Float => {
                let d = lifted.max_coefficient_diff(&conv);
                ok &= d <= FILTER_TOL_97;
                detail.push(format!("{wavelet} max diff {d:.2e} (tol {FILTER_TOL_97:e})"));
            }
        }
    }
    Outcome { name: "lifting product = convolution polyphase", ok, detail: detail.join(", ") }
}

fn bench(dir: &Path) -> Outcome {
    let csv_path = dir.join("bench.csv");
    let svg_path = dir.join("bench.svg");
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_nsdwt"))
        .args(["bench", "--csv", csv_path.to_str().unwrap(), "--plot", svg_path.to_str().unwrap()])
        .output()
        .unwrap();
    let elapsed = start.elapsed();
    if out.status.code() != Some(0) {
        return Outcome {
            name: "benchmark harness",
            ok: false,
            detail: format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)),
        };
    }
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    let mut lines = csv.lines();
    let header_ok = lines.next() == Some(CSV_HEADER);
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    let expected_rows = DEFAULT_SIZES.len() * SchemeKind::ALL.len();
    let rows_ok = rows.len() == expected_rows
        && rows.iter().all(|r| {
            r.len() == 10
                && r[7].parse::<usize>().is_ok_and(|n| n >= MIN_REPS)
                && r[9].parse::<f64>().is_ok_and(|g| g > 0.0 && g.is_finite())
        });
    let sizes_ok = DEFAULT_SIZES
        .iter()
        .all(|s| rows.iter().filter(|r| r[2] == s.to_string()).count() == SchemeKind::ALL.len());
    let svg_ok = roxmltree::Document::parse(&svg).is_ok_and(|doc| {
        let polylines: Vec<_> = doc.descendants().filter(|n| n.has_tag_name("polyline")).collect();
        doc.root_element().has_tag_name("svg")
            && polylines.len() == SchemeKind::ALL.len()
            && polylines
                .iter()
                .all(|p| p.attribute("points").is_some_and(|pts| pts.split_whitespace().count() == DEFAULT_SIZES.len()))
    });
    Outcome {
        name: "benchmark harness",
        ok: header_ok && rows_ok && sizes_ok && svg_ok,
        detail: format!("{} rows, csv {}, svg {}, {elapsed:.1?}", rows.len(), header_ok && rows_ok && sizes_ok, svg_ok),
    }
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let [cross, recon] = cross_and_reconstruction();
    let outcomes = [
        fusion(),
        steps(),
        op_counts(),
        cross,
        recon,
        tiling(),
        impulse(),
        lifting_product(),
        bench(dir.path()),
    ];
    for o in &outcomes {
        println!("{} {}: {}", if o.ok { "PASS" } else { "FAIL" }, o.name, o.detail);
    }
    let failed = outcomes.iter().filter(|o| !o.ok).count();
    println!("acceptance: {} criteria, {failed} failed", outcomes.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
