//! Acceptance checks, one line per criterion. Runs without the libtest harness so the
//! summary is always printed; exits non-zero if any criterion fails.

use std::f64::consts::{PI, TAU};
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ringmod::capacity::{annulus_capacity, cap_bound_measure, check_capacity_bounds};
use ringmod::distortion::{
    area_bound, default_shrinking_grid, liminf_scan, lipschitz_consistency, q_zero, stretch_estimate,
    verify_area_theorem_with, verify_growth_inequality, AreaBoundParams,
};
use ringmod::modulus::{
    connecting_modulus_annulus, eta0, jensen_functional, lower_modulus_bound, weighted_infimum_closed,
    weighted_infimum_numeric, DiscreteMeasureSpace,
};
use ringmod::report::{read_csv, CsvRow};
use ringmod::test_maps::{image_disk_area, kp_field, radial_power_map};
use ringmod::{Annulus, ExponentP, PlanePoint, QField, QuadratureSpec, RadialDensity, RadialMap, RingCondenser, Status};

// tolerances
const INFIMUM_REL: f64 = 1e-6;
const CONSTRAINT_ABS: f64 = 1e-12;
const INFIMUM_BUDGET: Duration = Duration::from_secs(30);
const CRITERION_REL: f64 = 1e-8;
const JENSEN_REL: f64 = 1e-6;
const DUALITY_REL: f64 = 1e-6;
const CAPACITY_MARGIN: f64 = -1e-9;
const AREA_REL: f64 = 1e-8;
const LIMINF_SLACK: f64 = 1e-6;
const SCALING_REL: f64 = 1e-8;
const END_TO_END_BUDGET: Duration = Duration::from_secs(120);
const MIN_ROWS: usize = 300;

type Outcome = Result<String, String>;

fn ex(p: f64) -> ExponentP {
    ExponentP::new(p).unwrap()
}

fn constant(c: f64) -> QField {
    QField::constant(c).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: ringmod::Error) -> String {
    e.to_string()
}

/// `∫_{r1}^{r2} (2πr)^{1-p} dr` by its antiderivative.
fn circle_family_oracle(r1: f64, r2: f64, p: f64) -> f64 {
    if p == 2.0 {
        (r2 / r1).ln() / TAU
    } else {
        TAU.powf(1.0 - p) * (r2.powf(2.0 - p) - r1.powf(2.0 - p)) / (2.0 - p)
    }
}

fn weighted_infimum() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let (mut worst, mut worst_mass, mut solves) = (0.0f64, 0.0f64, 0);
    for case in 0..50 {
        let n = rng.gen_range(100..=1000);
        let phi: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..20.0)).collect();
        let mu: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..1.5) / n as f64).collect();
        let space = DiscreteMeasureSpace::new((0..n).map(|i| i as f64).collect(), mu.clone(), phi.clone()).map_err(err)?;
        for q in [1.5, 2.0, 3.0] {
            let closed = weighted_infimum_closed(&space, q).map_err(err)?;
            // the oracle value straight from the formula
            let lambda = 1.0 / (q - 1.0);
            let oracle = phi.iter().zip(&mu).map(|(f, w)| f.powf(-lambda) * w).sum::<f64>().powf(-1.0 / lambda);
            ensure(rel(closed.value, oracle) < 1e-12, || format!("closed form off the formula at case {case}, q={q}"))?;
            let numeric = weighted_infimum_numeric(&space, q, 100_000, 1e-10).map_err(err)?;
            solves += 1;
            worst = worst.max(rel(numeric, oracle));
            let mass: f64 = closed.alpha0.iter().zip(&mu).map(|(a, w)| a * w).sum();
            worst_mass = worst_mass.max((mass - 1.0).abs());
            let at_min = space.objective(&closed.alpha0, q);
            for _ in 0..20 {
                // zero-mass direction, scaled to keep α ≥ 0
                let d: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let shift = d.iter().zip(&mu).map(|(x, w)| x * w).sum::<f64>() / mu.iter().sum::<f64>();
                let d: Vec<f64> = d.iter().map(|x| x - shift).collect();
                let room = closed.alpha0.iter().zip(&d).filter(|(_, x)| **x < 0.0).map(|(a, x)| a / -x).fold(f64::INFINITY, f64::min);
                let t = room * rng.gen_range(0.0..1.0);
                let moved: Vec<f64> = closed.alpha0.iter().zip(&d).map(|(a, x)| a + t * x).collect();
                let value = space.objective(&moved, q);
                ensure(value >= at_min * (1.0 - 1e-12), || format!("perturbation lowered the objective at case {case}, q={q}"))?;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(worst <= INFIMUM_REL, || format!("numeric vs closed form off by {worst:e}"))?;
    ensure(worst_mass <= CONSTRAINT_ABS, || format!("constraint violated by {worst_mass:e}"))?;
    ensure(elapsed <= INFIMUM_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("{solves} solves, worst rel {worst:.1e}, mass error {worst_mass:.1e}, 1000 perturbations, {:.2} s", elapsed.as_secs_f64()))
}

fn criterion_consistency() -> Outcome {
    let spec = QuadratureSpec::default();
    let annulus = Annulus::centered(0.5, 1.0).map_err(err)?;
    let mut worst = 0.0f64;
    for p in [1.5, 2.0, 3.0, 4.0] {
        for c in [1.0, 2.5] {
            let bound = lower_modulus_bound(&constant(c), annulus, ex(p), &spec).map_err(err)?.value;
            worst = worst.max(rel(bound, circle_family_oracle(0.5, 1.0, p) / c));
        }
    }
    ensure(worst <= CRITERION_REL, || format!("worst rel {worst:e}"))?;
    let p2 = lower_modulus_bound(&constant(1.0), annulus, ex(2.0), &spec).map_err(err)?.value;
    let p3 = lower_modulus_bound(&constant(1.0), annulus, ex(3.0), &spec).map_err(err)?.value;
    ensure((p2 - 0.110318).abs() < 5e-7 && (p3 - 0.025330).abs() < 5e-7, || format!("anchors {p2} {p3}"))?;
    Ok(format!("worst rel {worst:.1e}; p=2 -> {p2:.6}, p=3 -> {p3:.6}"))
}

fn jensen_minimality() -> Outcome {
    let spec = QuadratureSpec::default();
    let annulus = Annulus::centered(0.5, 1.0).map_err(err)?;
    let (field, p) = (constant(1.0), ex(3.0));
    let integral = circle_family_oracle(0.5, 1.0, 3.0);
    let minimum = integral.powf(-1.0 / 2.0);
    let at_eta0 = jensen_functional(&field, annulus, p, &eta0(&field, annulus, p, &spec).map_err(err)?, &spec).map_err(err)?.value;
    ensure(rel(at_eta0, minimum) <= JENSEN_REL && rel(at_eta0, TAU) <= JENSEN_REL, || format!("J(η₀) = {at_eta0}"))?;
    let uniform = RadialDensity::normalized(|_| 1.0, 0.5, 1.0, &spec).map_err(err)?;
    let at_uniform = jensen_functional(&field, annulus, p, &uniform, &spec).map_err(err)?.value;
    // 2^{3/2} · 2π · (1 - 1/4)/2
    ensure(rel(at_uniform, 8f64.sqrt() * PI * 0.75) < 1e-9 && (at_uniform - 6.6643).abs() < 1e-4, || format!("uniform {at_uniform}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut smallest_gap = f64::INFINITY;
    for _ in 0..20 {
        let (a, b, k): (f64, f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(1.0..6.0));
        let eta = RadialDensity::normalized(move |r| (a * (k * r).sin() + b * r * r).exp(), 0.5, 1.0, &spec).map_err(err)?;
        let value = jensen_functional(&field, annulus, p, &eta, &spec).map_err(err)?.value;
        ensure(value >= at_eta0 * (1.0 - 1e-9), || format!("random density gives {value} < {at_eta0}"))?;
        smallest_gap = smallest_gap.min(value - at_eta0);
    }
    Ok(format!("J(η₀) = {at_eta0:.6} (2π), uniform {at_uniform:.4}, 20 random densities above by >= {smallest_gap:.1e}"))
}

fn duality() -> Outcome {
    let spec = QuadratureSpec::default();
    let mut worst = 0.0f64;
    for p in [2.0, 3.0, 4.0] {
        for (r1, r2) in [(0.5, 1.0), (0.1, 1.0), (0.2, 0.7), (0.3, 0.9), (0.05, 0.5)] {
            let annulus = Annulus::centered(r1, r2).map_err(err)?;
            let connecting = connecting_modulus_annulus(annulus, p / (p - 1.0)).map_err(err)?;
            let bound = lower_modulus_bound(&constant(1.0), annulus, ex(p), &spec).map_err(err)?.value;
            worst = worst.max((connecting * bound.powf(1.0 / (p - 1.0)) - 1.0).abs());
        }
    }
    ensure(worst <= DUALITY_REL, || format!("worst deviation {worst:e}"))?;
    Ok(format!("15 products, worst deviation {worst:.1e}"))
}

fn capacity_bounds() -> Outcome {
    let ps = [1.25, 1.5, 1.75, 2.0];
    let (mut rows, mut min_margin) = (0, f64::INFINITY);
    for k in 1..=9 {
        let cond = RingCondenser::new(PlanePoint::ORIGIN, k as f64 / 10.0, 1.0).map_err(err)?;
        for c in check_capacity_bounds(&cond, &ps).map_err(err)?.entries {
            rows += 1;
            min_margin = min_margin.min(c.margin);
            ensure(c.margin >= CAPACITY_MARGIN && c.passed(), || format!("{} [{}] margin {:e}", c.name, c.params, c.margin))?;
        }
    }
    let cond = RingCondenser::new(PlanePoint::ORIGIN, 0.5, 1.0).map_err(err)?;
    let cap = annulus_capacity(&cond, 1.5).map_err(err)?;
    let maz = cap_bound_measure(cond.compact_area(), 1.5).map_err(err)?;
    ensure(rel(cap, TAU) < 1e-12 && rel(maz, PI * 2f64.sqrt()) < 1e-12, || format!("anchors {cap} {maz}"))?;
    Ok(format!("{rows} rows, min margin {min_margin:.3e}; p=1.5 capacity {cap:.5} vs measure bound {maz:.5}"))
}

fn area_sharpness() -> Outcome {
    let spec = QuadratureSpec::default();
    let grid: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
    let mut worst = 0.0f64;
    for p in [2.0, 3.0, 4.0] {
        for &r in &grid {
            let b = area_bound(&AreaBoundParams { p: ex(p), field: constant(1.0), r }, &spec).map_err(err)?;
            worst = worst.max(rel(b.value, PI * r * r));
        }
        let rep = verify_area_theorem_with(&RadialMap::identity(), ex(p), &constant(1.0), &grid, &spec).map_err(err)?;
        ensure(rep.entries.iter().all(|c| c.status == Status::Equality), || format!("identity rows at p={p} not all equality"))?;
    }
    ensure(worst <= AREA_REL, || format!("identity bound off πr² by {worst:e}"))?;
    let contraction = radial_power_map(0.5).map_err(err)?;
    let b = area_bound(&AreaBoundParams { p: ex(2.0), field: constant(2.0), r: 0.25 }, &spec).map_err(err)?.value;
    let actual = image_disk_area(&contraction, 0.25);
    ensure(rel(b, PI / 4.0) <= AREA_REL && rel(actual, PI / 4.0) <= 1e-12, || format!("contraction {b} vs {actual}"))?;
    let expansion = radial_power_map(2.0).map_err(err)?;
    let mut strict: Vec<f64> = grid.clone();
    strict.push(0.99);
    let rep = verify_area_theorem_with(&expansion, ex(2.0), &constant(2.0), &strict, &spec).map_err(err)?;
    let min_margin = rep.entries.iter().map(|c| c.margin).fold(f64::INFINITY, f64::min);
    ensure(rep.entries.iter().all(|c| c.status == Status::Pass && c.margin > 0.0), || "expansion margins not positive".into())?;
    Ok(format!("identity worst rel {worst:.1e}; contraction π/4 at r=0.25; expansion min margin {min_margin:.3e}"))
}

fn growth_inequality() -> Outcome {
    let spec = QuadratureSpec::default();
    let grid: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
    for p in [2.0, 3.0] {
        let rep = verify_growth_inequality(&RadialMap::identity(), ex(p), &grid, &spec).map_err(err)?;
        ensure(rep.entries.iter().all(|c| c.status == Status::Equality), || format!("identity at p={p} not equality"))?;
        if p == 2.0 {
            for (c, t) in rep.entries.iter().zip(&grid) {
                ensure(rel(c.lhs, 2.0 / t) < 1e-9 && rel(c.rhs, 2.0 / t) < 1e-12, || format!("sides at t={t}: {} {}", c.lhs, c.rhs))?;
            }
        }
    }
    let map = radial_power_map(2.0).map_err(err)?;
    let mut rows = 0;
    for p in [2.0, 3.0] {
        let rep = verify_growth_inequality(&map, ex(p), &grid, &spec).map_err(err)?;
        rows += rep.len();
        ensure(rep.entries.iter().all(|c| c.status == Status::Pass && c.margin > 0.0), || format!("α=2 at p={p} not dominated"))?;
    }
    Ok(format!("identity equality at p=2,3 (sides 2/t at p=2); {rows} strict rows for α=2"))
}

fn point_behavior() -> Outcome {
    let spec = QuadratureSpec::default();
    let grid = default_shrinking_grid();
    let mut worst = f64::NEG_INFINITY;
    for alpha in [0.5, 1.0, 2.0] {
        let map = if alpha == 1.0 { RadialMap::identity() } else { radial_power_map(alpha).map_err(err)? };
        for p in [2.0, 3.0, 4.0] {
            let res = liminf_scan(&map, ex(p), &kp_field(&map, ex(p)), &grid, &spec).map_err(err)?;
            worst = worst.max(res.liminf_estimate);
            ensure(res.liminf_estimate <= 1.0 + LIMINF_SLACK, || format!("α={alpha}, p={p}: {}", res.liminf_estimate))?;
            if alpha == 1.0 || (alpha < 1.0 && p == 2.0) {
                ensure((res.liminf_estimate - 1.0).abs() <= LIMINF_SLACK, || format!("α={alpha}, p={p} not 1: {}", res.liminf_estimate))?;
            }
        }
    }
    Ok(format!("9 combinations, largest liminf {worst:.9}; identity and p=2 contraction equal 1"))
}

fn lipschitz() -> Outcome {
    let spec = QuadratureSpec::default();
    let grid = default_shrinking_grid();
    let (mut finite, mut worst) = (0, 0.0f64);
    for alpha in [0.5, 0.75, 1.0, 1.5, 2.0, 3.0] {
        let map = if alpha == 1.0 { RadialMap::identity() } else { radial_power_map(alpha).map_err(err)? };
        for p in [3.0, 4.0] {
            let q0 = q_zero(&kp_field(&map, ex(p)), PlanePoint::ORIGIN, ex(p), &grid, &spec).map_err(err)?;
            let stretch = stretch_estimate(&map, &grid).map_err(err)?;
            if q0.infinite {
                continue;
            }
            finite += 1;
            ensure(!stretch.infinite, || format!("α={alpha}, p={p}: finite Q₀ but infinite stretch"))?;
            let e = 1.0 / (p - 2.0);
            let base = stretch.value / q0.value.powf(e);
            for c in [0.5, 2.0, 10.0] {
                let scaled = map.scaled(c).map_err(err)?;
                let q0c = q_zero(&kp_field(&scaled, ex(p)), PlanePoint::ORIGIN, ex(p), &grid, &spec).map_err(err)?;
                let lc = stretch_estimate(&scaled, &grid).map_err(err)?;
                worst = worst.max(rel(lc.value / q0c.value.powf(e), base));
            }
            let rep = lipschitz_consistency(&map, ex(p), &grid, &spec).map_err(err)?;
            ensure(rep.all_passed(), || format!("α={alpha}, p={p}: report has failures"))?;
        }
    }
    ensure(worst <= SCALING_REL, || format!("scaling ratio drift {worst:e}"))?;
    ensure(finite > 0, || "no map with finite Q₀".into())?;
    Ok(format!("{finite} finite-Q₀ cases, scaling drift {worst:.1e}"))
}

fn run_cli(out: &Path) -> Result<(i32, Duration), String> {
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_ringmod"))
        .args(["verify", "--suite", "all", "--out"])
        .arg(out)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((status.status.code().unwrap_or(-1), start.elapsed()))
}

fn end_to_end() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let (code, elapsed) = run_cli(&a)?;
    ensure(code == 0, || format!("exit code {code}"))?;
    ensure(elapsed <= END_TO_END_BUDGET, || format!("took {elapsed:?}"))?;
    let rows: Vec<CsvRow> = read_csv(fs::File::open(a.join("report.csv")).map_err(|e| e.to_string())?).map_err(err)?;
    let fails = rows.iter().filter(|r| r.status == Status::Fail).count();
    ensure(rows.len() >= MIN_ROWS && fails == 0, || format!("{} rows, {fails} failed", rows.len()))?;
    let (code_b, _) = run_cli(&b)?;
    ensure(code_b == 0, || format!("rerun exit code {code_b}"))?;
    let mut names: Vec<_> = fs::read_dir(&a).map_err(|e| e.to_string())?.map(|e| e.unwrap().file_name()).collect();
    names.sort();
    for name in &names {
        let same = fs::read(a.join(name)).map_err(|e| e.to_string())? == fs::read(b.join(name)).map_err(|e| e.to_string())?;
        ensure(same, || format!("{name:?} differs between runs"))?;
    }
    Ok(format!("{} rows, 0 failed, exit 0, {} files byte-identical, {:.2} s", rows.len(), names.len(), elapsed.as_secs_f64()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("weighted-infimum oracle equivalence", weighted_infimum),
        ("criterion consistency with the circle-family modulus", criterion_consistency),
        ("Jensen functional minimality", jensen_minimality),
        ("Hesse-Ziemer duality at identity weight", duality),
        ("capacity lower bounds", capacity_bounds),
        ("area-distortion sharpness", area_sharpness),
        ("growth inequality", growth_inequality),
        ("point behaviour liminf", point_behavior),
        ("Lipschitz consistency", lipschitz),
        ("end-to-end verify --suite all", end_to_end),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
