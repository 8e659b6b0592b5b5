use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{QSpec, Suite, SuiteConfig};
use super::table::CsvRow;
use crate::capacity::check_capacity_bounds;
use crate::distortion::{
    corollary_constants, corollary_product, default_shrinking_grid, dominates_dilatation, lipschitz_consistency,
    liminf_scan, verify_area_theorem_with, verify_growth_inequality_with, LIMINF_TOLERANCE,
};
use crate::error::Result;
use crate::integration::QuadratureSpec;
use crate::modulus::{
    circle_family_modulus, connecting_modulus_annulus, eta0, jensen_functional, lower_modulus_bound,
    weighted_infimum_closed, weighted_infimum_numeric, DiscreteMeasureSpace, RadialDensity,
};
use crate::plane::{Annulus, ExponentP, PlanePoint, QField, RingCondenser};
use crate::test_maps::{kp_field, RadialMap};
use crate::verification::{params, Check, Status, VerificationReport};

/// Relative agreement required between the numeric and closed-form infimum.
pub const INFIMUM_REL_TOLERANCE: f64 = 1e-6;
/// Slack on `Σ α₀ μ = 1`.
pub const CONSTRAINT_TOLERANCE: f64 = 1e-12;
/// Relative slack on the lower modulus bound against the circle-family closed form.
pub const CRITERION_REL_TOLERANCE: f64 = 1e-8;
/// Relative slack on the Jensen minimum and on the duality product.
pub const JENSEN_REL_TOLERANCE: f64 = 1e-6;
pub const DUALITY_REL_TOLERANCE: f64 = 1e-6;

const PGD_ITERATIONS: usize = 100_000;
const PGD_TOLERANCE: f64 = 1e-10;
const PERTURBATIONS: usize = 10;
const DOMINANCE_SAMPLES: usize = 200;

/// Annuli used for the modulus identities.
pub const MODULUS_ANNULI: [(f64, f64); 5] = [(0.5, 1.0), (0.1, 1.0), (0.2, 0.7), (0.3, 0.9), (0.75, 0.95)];

/// Runs one concrete suite; rows come back in a fixed order.
pub fn run_one(suite: Suite, config: &SuiteConfig) -> Result<Vec<CsvRow>> {
    let spec = config.quadrature()?;
    let p_values = config.p_for(suite);
    let checks = match suite {
        Suite::Infimum => infimum(&p_values, config.infimum_cases, config.seed)?,
        Suite::Modulus => modulus(&p_values, config, &spec)?,
        Suite::Capacity => capacity(&p_values, &config.radii.points())?,
        Suite::Area | Suite::Growth | Suite::Point | Suite::Lipschitz => distortion(suite, &p_values, config, &spec)?,
        Suite::All => unreachable!("expanded by the caller"),
    };
    Ok(checks.into_iter().map(|c| CsvRow::from_check(suite.as_str(), c)).collect())
}

fn collect(cells: Vec<Result<VerificationReport>>) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for cell in cells {
        out.extend(cell?.entries);
    }
    Ok(out)
}

struct InfimumCase {
    phi: Vec<f64>,
    /// Feasible directions `β` and mixing weights `s` for `(1-s) α₀ + s β`.
    perturbations: Vec<(Vec<f64>, f64)>,
}

fn infimum_cases(count: usize, seed: u64) -> Vec<InfimumCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(100..=1000);
            let phi = (0..n).map(|_| (rng.gen_range(-1.0f64..1.0) * 10f64.ln()).exp()).collect();
            let perturbations = (0..PERTURBATIONS)
                .map(|_| {
                    let u: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
                    let mass = u.iter().sum::<f64>() / n as f64;
                    let s = 10f64.powf(rng.gen_range(-3.0..0.0));
                    (u.into_iter().map(|x| x / mass).collect(), s)
                })
                .collect();
            InfimumCase { phi, perturbations }
        })
        .collect()
}

fn infimum(q_values: &[f64], cases: usize, seed: u64) -> Result<Vec<Check>> {
    let data = infimum_cases(cases, seed);
    let cells: Vec<(usize, f64)> = (0..cases).flat_map(|i| q_values.iter().map(move |&q| (i, q))).collect();
    let reports = cells
        .par_iter()
        .map(|&(i, q)| {
            let case = &data[i];
            let n = case.phi.len();
            let points = (0..n).map(|k| (k as f64 + 0.5) / n as f64).collect();
            let space = DiscreteMeasureSpace::new(points, vec![1.0 / n as f64; n], case.phi.clone())?;
            let key = params(&[("seed", seed.to_string()), ("case", i.to_string()), ("n", n.to_string()), ("q", q.to_string())]);
            let closed = weighted_infimum_closed(&space, q)?;
            let numeric = weighted_infimum_numeric(&space, q, PGD_ITERATIONS, PGD_TOLERANCE)?;
            let mut report = VerificationReport::new();
            report.push(Check::equal(
                "infimum_numeric_vs_closed",
                key.clone(),
                numeric,
                closed.value,
                INFIMUM_REL_TOLERANCE * closed.value,
            ));
            report.push(Check::equal("infimum_constraint", key.clone(), space.mass_of(&closed.alpha0), 1.0, CONSTRAINT_TOLERANCE));
            let at_min = space.objective(&closed.alpha0, q);
            let perturbed = case
                .perturbations
                .iter()
                .map(|(beta, s)| {
                    let alpha: Vec<f64> = closed.alpha0.iter().zip(beta).map(|(a, b)| (1.0 - s) * a + s * b).collect();
                    space.objective(&alpha, q)
                })
                .fold(f64::INFINITY, f64::min);
            report.push(Check::at_most("infimum_perturbation", key, at_min, perturbed, 1e-12 * at_min));
            Ok(report)
        })
        .collect();
    collect(reports)
}

fn density_shapes(count: usize, seed: u64) -> Vec<[f64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    (0..count).map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).collect()
}

fn random_density(c: [f64; 3], r1: f64, r2: f64, spec: &QuadratureSpec) -> Result<RadialDensity> {
    RadialDensity::normalized(
        move |r| {
            let s = std::f64::consts::PI * (r - r1) / (r2 - r1);
            (c[0] * s.cos() + c[1] * (2.0 * s).cos() + c[2] * (3.0 * s).cos()).exp()
        },
        r1,
        r2,
        spec,
    )
}

fn modulus(p_values: &[f64], config: &SuiteConfig, spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let weights = match config.q_spec {
        QSpec::Constant { value } if value != 1.0 => vec![1.0, value],
        _ => vec![1.0, 2.0],
    };
    let shapes = density_shapes(config.random_densities, config.seed);
    let seed = config.seed;

    let mut cells: Vec<(f64, f64)> = Vec::new();
    for &p in p_values {
        for &c in &weights {
            cells.push((p, c));
        }
    }
    let reports: Vec<Result<VerificationReport>> = cells
        .par_iter()
        .map(|&(p, c)| {
            let ex = ExponentP::new(p)?;
            let field = QField::constant(c)?;
            let mut report = VerificationReport::new();
            for (r1, r2) in MODULUS_ANNULI {
                let annulus = Annulus::centered(r1, r2)?;
                let bound = lower_modulus_bound(&field, annulus, ex, spec)?.value;
                let closed = circle_family_modulus(annulus, ex) / c;
                let key = params(&[("p", p.to_string()), ("Q", c.to_string()), ("r1", r1.to_string()), ("r2", r2.to_string())]);
                report.push(Check::equal("criterion_consistency", key, bound, closed, CRITERION_REL_TOLERANCE * closed));
            }

            let annulus = Annulus::centered(0.5, 1.0)?;
            let integral = lower_modulus_bound(&field, annulus, ex, spec)?.value;
            let base = |extra: &[(&str, String)]| {
                let mut pairs = vec![("p", p.to_string()), ("Q", c.to_string()), ("r1", "0.5".to_string()), ("r2", "1".to_string())];
                pairs.extend(extra.iter().cloned());
                params(&pairs)
            };
            let at_eta0 = jensen_functional(&field, annulus, ex, &eta0(&field, annulus, ex, spec)?, spec)?.value;
            let minimum = integral.powf(-1.0 / (p - 1.0));
            report.push(Check::equal("jensen_minimum", base(&[]), at_eta0, minimum, JENSEN_REL_TOLERANCE * minimum));
            let uniform = RadialDensity::normalized(|_| 1.0, 0.5, 1.0, spec)?;
            let value = jensen_functional(&field, annulus, ex, &uniform, spec)?.value;
            let tol = JENSEN_REL_TOLERANCE * at_eta0;
            report.push(Check::at_most("jensen_vs_uniform_density", base(&[]), at_eta0, value, tol));
            for (k, shape) in shapes.iter().enumerate() {
                let eta = random_density(*shape, 0.5, 1.0, spec)?;
                let value = jensen_functional(&field, annulus, ex, &eta, spec)?.value;
                let key = base(&[("seed", seed.to_string()), ("density", k.to_string())]);
                report.push(Check::at_most("jensen_vs_random_density", key, at_eta0, value, tol));
            }
            Ok(report)
        })
        .collect();
    let mut checks = collect(reports)?;

    for &p in p_values {
        let ex = ExponentP::new(p)?;
        let one = QField::constant(1.0)?;
        let q = ex.conjugate();
        for (r1, r2) in MODULUS_ANNULI {
            let annulus = Annulus::centered(r1, r2)?;
            let connecting = connecting_modulus_annulus(annulus, q)?;
            let bound = lower_modulus_bound(&one, annulus, ex, spec)?.value;
            let key = params(&[("p", p.to_string()), ("q", q.to_string()), ("r1", r1.to_string()), ("r2", r2.to_string())]);
            let product = connecting * bound.powf(1.0 / (p - 1.0));
            checks.push(Check::equal("hesse_ziemer_duality", key, product, 1.0, DUALITY_REL_TOLERANCE));
        }
    }
    Ok(checks)
}

fn capacity(p_values: &[f64], radii: &[f64]) -> Result<Vec<Check>> {
    let reports = radii
        .par_iter()
        .map(|&r1| check_capacity_bounds(&RingCondenser::new(PlanePoint::ORIGIN, r1, 1.0)?, p_values))
        .collect();
    collect(reports)
}

fn weight_for(q_spec: QSpec, map: &RadialMap, p: ExponentP) -> Result<QField> {
    match q_spec {
        QSpec::Kp => Ok(kp_field(map, p)),
        QSpec::Constant { value } => QField::constant(value),
    }
}

fn mark_unmet(report: VerificationReport) -> VerificationReport {
    let entries = report
        .entries
        .into_iter()
        .map(|c| Check { status: Status::HypothesisNotMet, ..c })
        .collect();
    VerificationReport { entries }
}

fn distortion(suite: Suite, p_values: &[f64], config: &SuiteConfig, spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let maps = config.maps.iter().map(|m| m.build()).collect::<Result<Vec<_>>>()?;
    let radii = config.radii.points();
    let shrinking = default_shrinking_grid();
    let cells: Vec<(usize, f64)> = (0..maps.len()).flat_map(|i| p_values.iter().map(move |&p| (i, p))).collect();
    let reports = cells
        .par_iter()
        .map(|&(i, p)| {
            let map = &maps[i];
            let ex = ExponentP::new(p)?;
            if suite == Suite::Lipschitz {
                return lipschitz_consistency(map, ex, &shrinking, spec);
            }
            let field = weight_for(config.q_spec, map, ex)?;
            let admissible = config.q_spec == QSpec::Kp || dominates_dilatation(map, ex, &field, DOMINANCE_SAMPLES)?;
            let mut report = match suite {
                Suite::Area => verify_area_theorem_with(map, ex, &field, &radii, spec)?,
                Suite::Growth => verify_growth_inequality_with(map, ex, &field, &radii, spec)?,
                _ => point_rows(map, ex, &field, &shrinking, config.q_spec, spec)?,
            };
            if !admissible {
                report = mark_unmet(report);
            }
            Ok(report)
        })
        .collect();
    let mut checks = collect(reports)?;
    if suite == Suite::Point {
        for &p in p_values.iter().filter(|&&p| p > 2.0) {
            let (derived, printed) = corollary_constants(ExponentP::new(p)?)?;
            checks.push(Check::info("corollary_constant", params(&[("p", p.to_string())]), derived, printed));
        }
    }
    Ok(checks)
}

fn point_rows(
    map: &RadialMap,
    p: ExponentP,
    field: &QField,
    grid: &[f64],
    q_spec: QSpec,
    spec: &QuadratureSpec,
) -> Result<VerificationReport> {
    let res = liminf_scan(map, p, field, grid, spec)?;
    let base = |extra: Option<(&str, String)>| {
        let mut pairs = vec![("map", map.label().to_string()), ("p", p.p().to_string()), ("Q", q_spec.label())];
        pairs.extend(extra);
        params(&pairs)
    };
    let mut report = VerificationReport::new();
    report.push(Check::at_most("point_liminf", base(None), res.liminf_estimate, 1.0, LIMINF_TOLERANCE));
    for (r, ratio) in res.grid.iter().zip(&res.ratio_at) {
        report.push(Check::info("point_ratio", base(Some(("r", r.to_string()))), *ratio, 1.0));
    }
    if p.p() > 2.0 {
        let r = grid[grid.len() - 1];
        let product = corollary_product(map, p, field, r, spec)?;
        let (derived, _) = corollary_constants(p)?;
        report.push(Check::info("corollary_product", base(Some(("r", r.to_string()))), product, derived));
    }
    Ok(report)
}
