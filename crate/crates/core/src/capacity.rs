//! Capacities of round ring condensers and three lower bounds for them.
//!
//! The capacity of `(A, C)` is taken to be the modulus of the family of curves joining
//! `∂C` to `∂A` in `A \ C`; for concentric disks this has a closed form.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::modulus::connecting_modulus_annulus;
use crate::plane::RingCondenser;
use crate::verification::{params, Check, VerificationReport};

/// Tolerance applied to every capacity-versus-bound row.
pub const BOUND_TOLERANCE: f64 = 1e-9;

/// Default constant for the diameter bound, which is only known to exist.
pub const DEFAULT_DIAMETER_GAMMA: f64 = 1.0;

/// `cap_q (A, C)` for a round ring condenser.
pub fn annulus_capacity(cond: &RingCondenser, q: f64) -> Result<f64> {
    connecting_modulus_annulus(cond.annulus(), q)
}

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::Domain(format!("{name} must be positive and finite, got {v}")));
    }
    Ok(())
}

/// `(inf length σ)^p / m(A \ C)^{p-1}` over smooth curves `σ` separating `C` from `∂A`.
pub fn cap_bound_perimeter(perimeter_inf: f64, gap_area: f64, p: f64) -> Result<f64> {
    positive("perimeter", perimeter_inf)?;
    positive("gap area", gap_area)?;
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::Domain(format!("perimeter bound needs p >= 1, got {p}")));
    }
    Ok(perimeter_inf.powf(p) / gap_area.powf(p - 1.0))
}

/// `2 π^{p/2} ((2-p)/(p-1))^{p-1} m(C)^{(2-p)/2}` for `1 < p < 2`.
pub fn cap_bound_measure(compact_area: f64, p: f64) -> Result<f64> {
    if !(p > 1.0 && p < 2.0) {
        return Err(Error::Domain(format!("measure bound needs 1 < p < 2, got {p}")));
    }
    if !(compact_area.is_finite() && compact_area >= 0.0) {
        return Err(Error::Domain(format!("compact area must be nonnegative, got {compact_area}")));
    }
    Ok(2.0 * PI.powf(p / 2.0) * ((2.0 - p) / (p - 1.0)).powf(p - 1.0) * compact_area.powf((2.0 - p) / 2.0))
}

/// `γ d(C)^p / m(A)^{p-1}` for `1 < p ≤ 2`, with `γ` supplied by the caller.
pub fn cap_bound_diameter(diameter: f64, open_area: f64, p: f64, gamma: f64) -> Result<f64> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(Error::Domain(format!("diameter bound needs 1 < p <= 2, got {p}")));
    }
    positive("open area", open_area)?;
    positive("gamma", gamma)?;
    if !(diameter.is_finite() && diameter >= 0.0) {
        return Err(Error::Domain(format!("diameter must be nonnegative, got {diameter}")));
    }
    Ok(gamma * diameter.powf(p) / open_area.powf(p - 1.0))
}

/// Smallest `cap · m(A)^{p-1} / d(C)^p` over the given condensers and exponents, i.e. the
/// largest `γ` for which the diameter bound holds on that sweep.
pub fn empirical_diameter_gamma(condensers: &[RingCondenser], p_values: &[f64]) -> Result<f64> {
    let mut gamma = f64::INFINITY;
    for cond in condensers {
        for &p in p_values {
            let cap = annulus_capacity(cond, p)?;
            gamma = gamma.min(cap * cond.open_area().powf(p - 1.0) / cond.compact_diameter().powf(p));
        }
    }
    Ok(gamma)
}

/// Compares the capacity of `cond` with every bound that applies at each `p`; margins are
/// `capacity - bound`.
pub fn check_capacity_bounds(cond: &RingCondenser, p_list: &[f64]) -> Result<VerificationReport> {
    check_capacity_bounds_with_gamma(cond, p_list, DEFAULT_DIAMETER_GAMMA)
}

pub fn check_capacity_bounds_with_gamma(cond: &RingCondenser, p_list: &[f64], gamma: f64) -> Result<VerificationReport> {
    let mut report = VerificationReport::new();
    for &p in p_list {
        let cap = annulus_capacity(cond, p)?;
        let key = |extra: Option<(&str, String)>| {
            let mut pairs = vec![
                ("r1", cond.inner_radius.to_string()),
                ("r2", cond.outer_radius.to_string()),
                ("p", p.to_string()),
            ];
            pairs.extend(extra);
            params(&pairs)
        };
        let tol = BOUND_TOLERANCE * cap.max(1.0);
        let perimeter = cap_bound_perimeter(2.0 * PI * cond.inner_radius, cond.gap_area(), p)?;
        report.push(Check::at_most("capacity_vs_perimeter_bound", key(None), perimeter, cap, tol));
        if p > 1.0 && p < 2.0 {
            let measure = cap_bound_measure(cond.compact_area(), p)?;
            report.push(Check::at_most("capacity_vs_measure_bound", key(None), measure, cap, tol));
        }
        if p > 1.0 && p <= 2.0 {
            let diameter = cap_bound_diameter(cond.compact_diameter(), cond.open_area(), p, gamma)?;
            report.push(Check::at_most(
                "capacity_vs_diameter_bound",
                key(Some(("gamma", gamma.to_string()))),
                diameter,
                cap,
                tol,
            ));
        }
    }
    Ok(report)
}
