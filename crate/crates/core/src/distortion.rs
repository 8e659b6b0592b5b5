//! Area distortion of disks under lower Q-homeomorphisms of the unit disk, the differential
//! inequality behind it, behaviour at the origin, and the finite-Lipschitz scaling law.
//!
//! All estimates are centred at the origin. Limits at the origin (`liminf`, `limsup`) are
//! replaced by extrema over the tail of a geometric radius grid.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::integration::{try_disk_average, QuadratureSpec};
use crate::modulus::{radial_reciprocal_norm_integral, ring_norm, Degeneracy, Estimate, ModulusBound};
use crate::plane::{ExponentP, PlanePoint, QField};
use crate::test_maps::{image_disk_area, kp_field, min_modulus, RadialMap};
use crate::verification::{params, Check, VerificationReport};

/// Number of trailing grid points used as the limit surrogate.
pub const TAIL_LEN: usize = 8;
/// Number of trailing points over which sustained growth flags a divergent limit.
pub const GROWTH_WINDOW: usize = 5;
const GROWTH_EPS: f64 = 1e-9;

/// Slack on area rows, `1e-8 · π`.
pub const AREA_TOLERANCE: f64 = 1e-8 * PI;
/// Relative slack on growth-inequality rows.
pub const GROWTH_REL_TOLERANCE: f64 = 1e-8;
/// Slack on `liminf |f|/R ≤ 1`.
pub const LIMINF_TOLERANCE: f64 = 1e-6;
/// Relative slack on the Lipschitz scaling-law rows.
pub const SCALING_REL_TOLERANCE: f64 = 1e-8;

/// `start · ratio^k`, `k = 0..count`.
pub fn geometric_grid(start: f64, ratio: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| start * ratio.powi(k as i32)).collect()
}

/// The default shrinking grid: 40 radii from 0.9 with ratio 0.7.
pub fn default_shrinking_grid() -> Vec<f64> {
    geometric_grid(0.9, 0.7, 40)
}

#[derive(Debug, Clone)]
pub struct AreaBoundParams {
    pub p: ExponentP,
    pub field: QField,
    pub r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaBound {
    pub value: f64,
    pub error_bound: f64,
    /// `∫_r^1 dt / ‖Q‖_{1/(p-1)}(t)`.
    pub integral: ModulusBound,
    /// The integral diverged and the bound collapsed to 0.
    pub degenerate: bool,
}

fn check_area_exponent(p: ExponentP) -> Result<()> {
    if p.p() < 2.0 {
        return Err(Error::Domain(format!("area estimate needs p >= 2, got {}", p.p())));
    }
    Ok(())
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::Domain(format!("radius must lie in (0, 1], got {r}")));
    }
    Ok(())
}

fn tail_integral(field: &QField, p: ExponentP, r: f64, spec: &QuadratureSpec) -> Result<ModulusBound> {
    radial_reciprocal_norm_integral(field, PlanePoint::ORIGIN, r, 1.0, p, spec)
}

/// `1 + (2π)^{p-1} (p-2) I` for `p > 2`.
fn growth_base(p: f64, integral: f64) -> f64 {
    1.0 + TAU.powf(p - 1.0) * (p - 2.0) * integral
}

/// Upper bound for `m(f B_r)`:
/// `π (1 + (2π)^{p-1}(p-2) I)^{2/(2-p)}` for `p > 2` and `π exp(-4π I)` for `p = 2`, where
/// `I = ∫_r^1 dt/‖Q‖_{1/(p-1)}(t)`.
pub fn area_bound(params: &AreaBoundParams, spec: &QuadratureSpec) -> Result<AreaBound> {
    check_area_exponent(params.p)?;
    check_radius(params.r)?;
    let integral = tail_integral(&params.field, params.p, params.r, spec)?;
    Ok(area_bound_from_integral(params.p, integral))
}

fn area_bound_from_integral(p: ExponentP, integral: ModulusBound) -> AreaBound {
    if integral.degeneracy == Degeneracy::Infinite {
        return AreaBound { value: 0.0, error_bound: 0.0, integral, degenerate: true };
    }
    let (i, di) = (integral.value, integral.error_bound);
    let p = p.p();
    let (value, error_bound) = if p == 2.0 {
        let v = PI * (-2.0 * TAU * i).exp();
        (v, 2.0 * TAU * v * di)
    } else {
        let base = growth_base(p, i);
        // the base is at least one, so the negative power is well defined
        debug_assert!(base >= 1.0);
        let v = PI * base.powf(2.0 / (2.0 - p));
        (v, v * 2.0 * TAU.powf(p - 1.0) / base * di)
    };
    AreaBound { value, error_bound, integral, degenerate: false }
}

/// `R(r)` with `π R(r)² = ` [`area_bound`]:
/// `(1 + (2π)^{p-1}(p-2) I)^{-1/(p-2)}` for `p > 2`, `exp(-2π I)` for `p = 2`.
pub fn point_radius_r(p: ExponentP, field: &QField, r: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    check_area_exponent(p)?;
    check_radius(r)?;
    let integral = tail_integral(field, p, r, spec)?;
    Ok(radius_from_integral(p, integral))
}

fn radius_from_integral(p: ExponentP, integral: ModulusBound) -> Estimate {
    if integral.degeneracy == Degeneracy::Infinite {
        return Estimate::exact(0.0);
    }
    let (i, di) = (integral.value, integral.error_bound);
    let p = p.p();
    if p == 2.0 {
        let v = (-TAU * i).exp();
        Estimate { value: v, error_bound: TAU * v * di }
    } else {
        let base = growth_base(p, i);
        let v = base.powf(-1.0 / (p - 2.0));
        Estimate { value: v, error_bound: v * TAU.powf(p - 1.0) / base * di }
    }
}

fn point_params(map: &RadialMap, p: ExponentP, key: &str, r: f64) -> String {
    params(&[("map", map.label().to_string()), ("p", p.p().to_string()), (key, r.to_string())])
}

/// `m(f B_r) ≤ area_bound(r)` with `Q = K_p(f, ·)` at every grid radius.
pub fn verify_area_theorem(map: &RadialMap, p: ExponentP, r_grid: &[f64], spec: &QuadratureSpec) -> Result<VerificationReport> {
    verify_area_theorem_with(map, p, &kp_field(map, p), r_grid, spec)
}

/// [`verify_area_theorem`] with a caller-supplied weight. The caller is responsible for
/// `K_p(f, ·) ≤ Q`; see [`dominates_dilatation`].
pub fn verify_area_theorem_with(
    map: &RadialMap,
    p: ExponentP,
    field: &QField,
    r_grid: &[f64],
    spec: &QuadratureSpec,
) -> Result<VerificationReport> {
    check_area_exponent(p)?;
    let mut report = VerificationReport::new();
    for &r in r_grid {
        let bound = area_bound(&AreaBoundParams { p, field: field.clone(), r }, spec)?;
        let actual = image_disk_area(map, r);
        let key = point_params(map, p, "r", r);
        if bound.degenerate {
            report.push(Check::degenerate("area_distortion", key, actual, bound.value));
        } else {
            report.push(Check::at_most("area_distortion", key, actual, bound.value, AREA_TOLERANCE));
        }
    }
    Ok(report)
}

/// `2^p π^{p/2} / ‖Q‖_{1/(p-1)}(t) ≤ Φ'(t)/Φ(t)^{p/2}` with `Φ(t) = m(f B_t)` and
/// `Q = K_p(f, ·)`.
pub fn verify_growth_inequality(map: &RadialMap, p: ExponentP, t_grid: &[f64], spec: &QuadratureSpec) -> Result<VerificationReport> {
    verify_growth_inequality_with(map, p, &kp_field(map, p), t_grid, spec)
}

/// [`verify_growth_inequality`] with a caller-supplied weight `Q ≥ K_p(f, ·)`.
pub fn verify_growth_inequality_with(
    map: &RadialMap,
    p: ExponentP,
    field: &QField,
    t_grid: &[f64],
    spec: &QuadratureSpec,
) -> Result<VerificationReport> {
    check_area_exponent(p)?;
    let pp = p.p();
    let mut report = VerificationReport::new();
    for &t in t_grid {
        let norm = ring_norm(field, PlanePoint::ORIGIN, t, p, spec)?.value;
        let lhs = 2f64.powf(pp) * PI.powf(pp / 2.0) / norm;
        let (rho, drho) = (map.radius(t), map.radius_derivative(t));
        let phi = PI * rho * rho;
        let rhs = 2.0 * PI * rho * drho / phi.powf(pp / 2.0);
        let tol = GROWTH_REL_TOLERANCE * lhs.abs().max(rhs.abs());
        report.push(Check::at_most("growth_inequality", point_params(map, p, "t", t), lhs, rhs, tol));
    }
    Ok(report)
}

/// Whether `K_p(f, ·) ≤ Q` on a sample of `n` circles of the unit disk. Radial maps have
/// radial dilatations, so one angle per circle suffices.
pub fn dominates_dilatation(map: &RadialMap, p: ExponentP, field: &QField, n: usize) -> Result<bool> {
    let kp = kp_field(map, p);
    for k in 1..n {
        let r = k as f64 / n as f64;
        for theta in [0.0, 0.5 * PI, PI, 1.5 * PI] {
            let z = PlanePoint::polar(PlanePoint::ORIGIN, r, theta);
            if kp.eval(z)? > field.eval(z)? * (1.0 + 1e-12) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointBehaviorResult {
    /// Minimum of `|f|/R` over the grid tail.
    pub liminf_estimate: f64,
    pub grid: Vec<f64>,
    pub ratio_at: Vec<f64>,
    /// Spread `max - min` of the ratio over the tail.
    pub tail_spread: f64,
}

fn check_shrinking(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 || grid.windows(2).any(|w| !(w[1] < w[0])) || !(grid[grid.len() - 1] > 0.0) {
        return Err(Error::Validation("radius grid must be positive and strictly decreasing".into()));
    }
    Ok(())
}

/// `∫_{r_k}^1 dt/‖Q‖` for every grid radius, accumulated segment by segment.
fn cumulative_tail_integrals(field: &QField, p: ExponentP, grid: &[f64], spec: &QuadratureSpec) -> Result<Vec<ModulusBound>> {
    let mut out = Vec::with_capacity(grid.len());
    let mut acc = tail_integral(field, p, grid[0], spec)?;
    out.push(acc);
    for w in grid.windows(2) {
        let piece = radial_reciprocal_norm_integral(field, PlanePoint::ORIGIN, w[1], w[0], p, spec)?;
        acc = ModulusBound {
            value: acc.value + piece.value,
            error_bound: acc.error_bound + piece.error_bound,
            degeneracy: if acc.degeneracy == Degeneracy::Infinite || piece.degeneracy == Degeneracy::Infinite {
                Degeneracy::Infinite
            } else {
                Degeneracy::Regular
            },
        };
        out.push(acc);
    }
    Ok(out)
}

/// Tail minimum of `ρ(r)/R(r)` along a grid shrinking to the origin.
pub fn liminf_scan(
    map: &RadialMap,
    p: ExponentP,
    field: &QField,
    r_grid_to_zero: &[f64],
    spec: &QuadratureSpec,
) -> Result<PointBehaviorResult> {
    check_area_exponent(p)?;
    check_shrinking(r_grid_to_zero)?;
    if map.radius(0.0) != 0.0 {
        return Err(Error::Domain("map must fix the origin".into()));
    }
    let integrals = cumulative_tail_integrals(field, p, r_grid_to_zero, spec)?;
    let ratio_at: Vec<f64> = r_grid_to_zero
        .iter()
        .zip(&integrals)
        .map(|(&r, &i)| min_modulus(map, r) / radius_from_integral(p, i).value)
        .collect();
    let tail = &ratio_at[ratio_at.len().saturating_sub(TAIL_LEN)..];
    let lo = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(PointBehaviorResult { liminf_estimate: lo, grid: r_grid_to_zero.to_vec(), ratio_at, tail_spread: hi - lo })
}

/// The two asymptotic constants for `liminf |f(z)| (∫_{|z|}^1 dt/‖Q‖)^{1/(p-2)}` at `p > 2`:
/// the one obtained by letting `r → 0` in the point estimate,
/// `((2π)^{p-1}(p-2))^{-1/(p-2)}`, and the printed form `(2π)^{1-p}(p-2)^{1/(2-p)}`.
/// They agree only at `p = 3`.
pub fn corollary_constants(p: ExponentP) -> Result<(f64, f64)> {
    let p = p.p();
    if p <= 2.0 {
        return Err(Error::Domain(format!("needs p > 2, got {p}")));
    }
    let derived = (TAU.powf(p - 1.0) * (p - 2.0)).powf(-1.0 / (p - 2.0));
    let printed = TAU.powf(1.0 - p) * (p - 2.0).powf(1.0 / (2.0 - p));
    Ok((derived, printed))
}

/// `|f(z)| (∫_{|z|}^1 dt/‖Q‖)^{1/(p-2)}` at `|z| = r`.
pub fn corollary_product(map: &RadialMap, p: ExponentP, field: &QField, r: f64, spec: &QuadratureSpec) -> Result<f64> {
    if p.p() <= 2.0 {
        return Err(Error::Domain(format!("needs p > 2, got {}", p.p())));
    }
    check_radius(r)?;
    let i = tail_integral(field, p, r, spec)?.value;
    Ok(min_modulus(map, r) * i.powf(1.0 / (p.p() - 2.0)))
}

/// Limit surrogate over a shrinking grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TailEstimate {
    /// Tail maximum, or `+∞` when flagged.
    pub value: f64,
    /// Sustained growth over the last grid points.
    pub infinite: bool,
    pub samples: Vec<f64>,
    pub tail_spread: f64,
}

fn tail_estimate(samples: Vec<f64>) -> TailEstimate {
    let tail = &samples[samples.len().saturating_sub(TAIL_LEN)..];
    let hi = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let last = &samples[samples.len().saturating_sub(GROWTH_WINDOW)..];
    let growing = last.len() == GROWTH_WINDOW && last.windows(2).all(|w| w[1] > w[0] * (1.0 + GROWTH_EPS));
    let infinite = growing || hi.is_infinite();
    TailEstimate { value: if infinite { f64::INFINITY } else { hi }, infinite, samples, tail_spread: hi - lo }
}

/// `limsup_{ε→0} (⨍_{B(z₀,ε)} Q^{1/(p-1)} dm)^{p-1}` over a shrinking grid.
pub fn q_zero(field: &QField, center: PlanePoint, p: ExponentP, eps_grid: &[f64], spec: &QuadratureSpec) -> Result<TailEstimate> {
    check_shrinking(eps_grid)?;
    let lambda = p.lambda();
    let samples = eps_grid
        .iter()
        .map(|&eps| {
            let avg = try_disk_average(|z| Ok(field.eval(z)?.powf(lambda)), center, eps, spec)?;
            Ok(if avg.divergent { f64::INFINITY } else { avg.value.powf(p.p() - 1.0) })
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(tail_estimate(samples))
}

/// `limsup_{ε→0} ρ(ε)/ε`, the stretching `L(0, f)` of a radial map at the origin.
pub fn stretch_estimate(map: &RadialMap, eps_grid: &[f64]) -> Result<TailEstimate> {
    check_shrinking(eps_grid)?;
    Ok(tail_estimate(eps_grid.iter().map(|&e| map.radius(e) / e).collect()))
}

/// Scale factors for the post-composition test.
pub const SCALING_FACTORS: [f64; 3] = [0.5, 2.0, 10.0];

/// For `p > 2`: finite `Q₀` must come with finite `L(0, f)`, and `L / Q₀^{1/(p-2)}` must not
/// change under `f ↦ c f`.
pub fn lipschitz_consistency(map: &RadialMap, p: ExponentP, eps_grid: &[f64], spec: &QuadratureSpec) -> Result<VerificationReport> {
    if p.p() <= 2.0 {
        return Err(Error::Domain(format!("Lipschitz estimate needs p > 2, got {}", p.p())));
    }
    let e = 1.0 / (p.p() - 2.0);
    let measure = |m: &RadialMap| -> Result<(TailEstimate, TailEstimate)> {
        Ok((q_zero(&kp_field(m, p), PlanePoint::ORIGIN, p, eps_grid, spec)?, stretch_estimate(m, eps_grid)?))
    };
    let (q0, stretch) = measure(map)?;
    let key = |extra: Option<(&str, String)>| {
        let mut pairs = vec![("map", map.label().to_string()), ("p", p.p().to_string())];
        pairs.extend(extra);
        params(&pairs)
    };

    let mut report = VerificationReport::new();
    if q0.infinite {
        report.push(Check::hypothesis_not_met("finite_lipschitz", key(None), stretch.value, q0.value));
        for c in SCALING_FACTORS {
            report.push(Check::hypothesis_not_met("lipschitz_scaling", key(Some(("c", c.to_string()))), f64::NAN, f64::NAN));
        }
        return Ok(report);
    }
    report.push(Check::holds("finite_lipschitz", key(None), stretch.value, q0.value.powf(e), !stretch.infinite));
    let ratio = stretch.value / q0.value.powf(e);
    for c in SCALING_FACTORS {
        let (q0c, stretch_c) = measure(&map.scaled(c)?)?;
        let ratio_c = stretch_c.value / q0c.value.powf(e);
        let tol = SCALING_REL_TOLERANCE * ratio.abs();
        report.push(Check::equal("lipschitz_scaling", key(Some(("c", c.to_string()))), ratio_c, ratio, tol));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_maps::radial_power_map;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn ex(p: f64) -> ExponentP {
        ExponentP::new(p).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn bound(p: f64, c: f64, r: f64) -> AreaBound {
        let field = QField::constant(c).unwrap();
        area_bound(&AreaBoundParams { p: ex(p), field, r }, &spec()).unwrap()
    }

    #[test]
    fn area_bound_examples() {
        assert!(rel(bound(3.0, 1.0, 0.5).value, PI * 0.25) < 1e-9);
        assert!(rel(bound(2.0, 1.0, 0.5).value, PI / 4.0) < 1e-9);
        let b = bound(2.0, 2.0, 0.25).value;
        assert!(rel(b, PI / 4.0) < 1e-9);
        let area = image_disk_area(&radial_power_map(0.5).unwrap(), 0.25);
        assert!(rel(b, area) < 1e-9);
        assert!((bound(3.0, 1.0, 1.0).value - PI).abs() < 1e-15);
    }

    #[test]
    fn area_bound_rejects_small_p() {
        let field = QField::constant(1.0).unwrap();
        assert!(area_bound(&AreaBoundParams { p: ex(1.5), field: field.clone(), r: 0.5 }, &spec()).is_err());
        assert!(area_bound(&AreaBoundParams { p: ex(2.0), field, r: 0.0 }, &spec()).is_err());
    }

    #[test]
    fn divergent_integral_collapses_bound() {
        // ‖Q‖₁(t) = 2π(t - 1/2) near t = 1/2 gives a divergent ∫ dt/‖Q‖
        let field = QField::radial(PlanePoint::ORIGIN, 1.0, |t| (t - 0.5) / t);
        let b = area_bound(&AreaBoundParams { p: ex(2.0), field, r: 0.5 }, &spec()).unwrap();
        assert!(b.degenerate && b.value == 0.0);
    }

    #[test]
    fn area_bound_monotonicity() {
        for p in [2.0, 3.0] {
            let values: Vec<f64> = [0.2, 0.4, 0.6, 0.8].iter().map(|&r| bound(p, 1.5, r).value).collect();
            assert!(values.windows(2).all(|w| w[0] <= w[1]));
            assert!(bound(p, 1.0, 0.4).value <= bound(p, 2.0, 0.4).value);
        }
    }

    #[test]
    fn radius_matches_area_bound() {
        for p in [2.0, 2.5, 3.0, 4.0] {
            for r in [0.1, 0.35, 0.8] {
                let field = QField::constant(1.3).unwrap();
                let big_r = point_radius_r(ex(p), &field, r, &spec()).unwrap().value;
                let b = area_bound(&AreaBoundParams { p: ex(p), field, r }, &spec()).unwrap().value;
                assert!(rel(PI * big_r * big_r, b) < 1e-10);
            }
            let one = QField::constant(1.0).unwrap();
            assert!(rel(point_radius_r(ex(p), &one, 0.3, &spec()).unwrap().value, 0.3) < 1e-9);
        }
    }

    #[test]
    fn area_theorem_rows() {
        let grid: Vec<f64> = (1..10).map(|i| i as f64 / 10.0).collect();
        for p in [2.0, 3.0, 4.0] {
            let rep = verify_area_theorem(&RadialMap::identity(), ex(p), &grid, &spec()).unwrap();
            assert!(rep.entries.iter().all(|c| c.status == crate::Status::Equality), "{rep:?}");
        }
        let rep = verify_area_theorem(&radial_power_map(2.0).unwrap(), ex(2.0), &grid, &spec()).unwrap();
        assert!(rep.entries.iter().all(|c| c.status == crate::Status::Pass && c.margin > 0.0));
        // bound π r^{2/α}... with α = 2 the bound is π r while the area is π r⁴
        for c in &rep.entries {
            let r: f64 = c.params.rsplit("r=").next().unwrap().parse().unwrap();
            assert!(rel(c.rhs, PI * r) < 1e-9 && rel(c.lhs, PI * r.powi(4)) < 1e-12);
        }
        let rep = verify_area_theorem(&radial_power_map(0.5).unwrap(), ex(2.0), &grid, &spec()).unwrap();
        assert!(rep.entries.iter().all(|c| c.status == crate::Status::Equality));
    }

    #[test]
    fn dominance_sampling() {
        let map = radial_power_map(2.0).unwrap();
        assert!(dominates_dilatation(&map, ex(2.0), &QField::constant(2.0).unwrap(), 50).unwrap());
        assert!(!dominates_dilatation(&map, ex(2.0), &QField::constant(1.5).unwrap(), 50).unwrap());
        // K_3 = 4r for α = 2
        assert!(dominates_dilatation(&map, ex(3.0), &QField::constant(4.0).unwrap(), 50).unwrap());
        assert!(!dominates_dilatation(&map, ex(3.0), &QField::constant(3.0).unwrap(), 50).unwrap());
    }

    #[test]
    fn growth_rows() {
        let grid = [0.1, 0.3, 0.5, 0.9];
        let rep = verify_growth_inequality(&RadialMap::identity(), ex(2.0), &grid, &spec()).unwrap();
        for (c, t) in rep.entries.iter().zip(grid) {
            assert_eq!(c.status, crate::Status::Equality);
            assert!(rel(c.lhs, 2.0 / t) < 1e-10 && rel(c.rhs, 2.0 / t) < 1e-12);
        }
        let rep = verify_growth_inequality(&RadialMap::identity(), ex(3.0), &grid, &spec()).unwrap();
        for (c, t) in rep.entries.iter().zip(grid) {
            assert!(rel(c.rhs, 2.0 / PI.sqrt() / (t * t)) < 1e-12);
            assert_eq!(c.status, crate::Status::Equality);
        }
        let rep = verify_growth_inequality(&radial_power_map(2.0).unwrap(), ex(2.0), &grid, &spec()).unwrap();
        for (c, t) in rep.entries.iter().zip(grid) {
            assert!(rel(c.lhs, 1.0 / t) < 1e-10 && rel(c.rhs, 4.0 / t) < 1e-12);
            assert_eq!(c.status, crate::Status::Pass);
        }
    }

    #[test]
    fn liminf_examples() {
        let grid = default_shrinking_grid();
        let one = QField::constant(1.0).unwrap();
        for p in [2.0, 3.0] {
            let res = liminf_scan(&RadialMap::identity(), ex(p), &one, &grid, &spec()).unwrap();
            assert!((res.liminf_estimate - 1.0).abs() < 1e-6);
        }
        let two = QField::constant(2.0).unwrap();
        let res = liminf_scan(&radial_power_map(2.0).unwrap(), ex(2.0), &two, &grid, &spec()).unwrap();
        // ratio r² / r^{1/2} = r^{3/2}
        for (r, v) in res.grid.iter().zip(&res.ratio_at) {
            assert!(rel(*v, r.powf(1.5)) < 1e-8);
        }
        assert!(res.liminf_estimate < 1e-6);
        let res = liminf_scan(&radial_power_map(0.5).unwrap(), ex(2.0), &two, &grid, &spec()).unwrap();
        assert!((res.liminf_estimate - 1.0).abs() < 1e-6 && res.tail_spread < 1e-6);
        assert!(liminf_scan(&RadialMap::identity(), ex(2.0), &one, &[0.1, 0.5], &spec()).is_err());
    }

    #[test]
    fn corollary_constants_agree_only_at_three() {
        let (d, p3) = corollary_constants(ex(3.0)).unwrap();
        assert!(rel(d, TAU.powi(-2)) < 1e-14 && rel(p3, TAU.powi(-2)) < 1e-14);
        let (d4, p4) = corollary_constants(ex(4.0)).unwrap();
        assert!(rel(d4, p4) > 0.1);
        let one = QField::constant(1.0).unwrap();
        for p in [3.0, 4.0] {
            let prod = corollary_product(&RadialMap::identity(), ex(p), &one, 1e-4, &spec()).unwrap();
            assert!(rel(prod, corollary_constants(ex(p)).unwrap().0) < 1e-3);
        }
    }

    #[test]
    fn q_zero_examples() {
        let grid = default_shrinking_grid();
        let c = QField::constant(2.5).unwrap();
        let q = q_zero(&c, PlanePoint::ORIGIN, ex(3.0), &grid, &spec()).unwrap();
        assert!(!q.infinite && rel(q.value, 2.5) < 1e-10);
        let k = kp_field(&radial_power_map(2.0).unwrap(), ex(2.0));
        let q = q_zero(&k, PlanePoint::ORIGIN, ex(2.0), &grid, &spec()).unwrap();
        assert!(!q.infinite && rel(q.value, 2.0) < 1e-9);
        let k = kp_field(&radial_power_map(0.5).unwrap(), ex(3.0));
        let q = q_zero(&k, PlanePoint::ORIGIN, ex(3.0), &grid, &spec()).unwrap();
        assert!(q.infinite);
        // average of (2 r^{-1/2})^{1/2} over B(0, ε) is (8√2/7) ε^{-1/4}
        for (eps, v) in grid.iter().zip(&q.samples) {
            let avg = 8.0 * 2f64.sqrt() / 7.0 * eps.powf(-0.25);
            assert!(rel(*v, avg * avg) < 1e-8, "eps {eps} {}", rel(*v, avg * avg));
        }
    }

    #[test]
    fn stretch_examples() {
        let grid = default_shrinking_grid();
        let s = stretch_estimate(&RadialMap::identity(), &grid).unwrap();
        assert!(!s.infinite && s.value == 1.0);
        let s = stretch_estimate(&radial_power_map(2.0).unwrap(), &grid).unwrap();
        assert!(!s.infinite && s.value < 1e-4);
        let s = stretch_estimate(&radial_power_map(0.5).unwrap(), &grid).unwrap();
        assert!(s.infinite);
    }

    #[test]
    fn lipschitz_rows() {
        let grid = default_shrinking_grid();
        let rep = lipschitz_consistency(&RadialMap::identity(), ex(3.0), &grid, &spec()).unwrap();
        assert!(rep.all_passed() && rep.len() == 4);
        assert!(rel(rep.entries[1].lhs, 1.0) < 1e-9);
        let rep = lipschitz_consistency(&radial_power_map(2.0).unwrap(), ex(3.0), &grid, &spec()).unwrap();
        assert!(rep.all_passed(), "{rep:?}");
        let rep = lipschitz_consistency(&radial_power_map(0.5).unwrap(), ex(3.0), &grid, &spec()).unwrap();
        assert!(rep.entries.iter().all(|c| c.status == crate::Status::HypothesisNotMet));
        assert!(lipschitz_consistency(&RadialMap::identity(), ex(2.0), &grid, &spec()).is_err());
    }
}
