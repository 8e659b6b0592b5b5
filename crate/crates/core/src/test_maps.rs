//! Radial homeomorphisms `f(z) = ρ(|z|) z/|z|` of the unit disk with exact derivatives.
//!
//! For a radial map `|f_z| + |f_z̄| = max(ρ', ρ/r)` and `J_f = ρ' ρ / r`, which gives the
//! dilatation `K_p = max(ρ', ρ/r)^p / (ρ' ρ / r)` in closed form.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::plane::{ExponentP, PlanePoint, QField};

type Profile = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct RadialMap {
    profile: Profile,
    derivative: Profile,
    label: String,
}

impl fmt::Debug for RadialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialMap").field("label", &self.label).finish()
    }
}

/// Grid size used for the monotonicity certificate.
pub const MONOTONE_GRID: usize = 1000;

impl RadialMap {
    /// Builds a map from a profile and its derivative. The profile must vanish at 0 and be
    /// strictly increasing on `[0, 1]` (checked on a grid).
    pub fn new(
        label: impl Into<String>,
        profile: impl Fn(f64) -> f64 + Send + Sync + 'static,
        derivative: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let map = Self { profile: Arc::new(profile), derivative: Arc::new(derivative), label: label.into() };
        if map.radius(0.0) != 0.0 {
            return Err(Error::Validation(format!("profile of {} does not fix the origin", map.label)));
        }
        if !map.is_strictly_increasing(MONOTONE_GRID) {
            return Err(Error::Validation(format!("profile of {} is not strictly increasing", map.label)));
        }
        Ok(map)
    }

    pub fn identity() -> Self {
        radial_power_map(1.0).expect("alpha = 1 is valid")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Image radius `ρ(r)`.
    pub fn radius(&self, r: f64) -> f64 {
        (self.profile)(r)
    }

    /// `ρ'(r)`.
    pub fn radius_derivative(&self, r: f64) -> f64 {
        (self.derivative)(r)
    }

    pub fn apply(&self, z: PlanePoint) -> PlanePoint {
        let r = z.norm();
        if r == 0.0 {
            return PlanePoint::ORIGIN;
        }
        let s = self.radius(r) / r;
        PlanePoint::new(s * z.x, s * z.y)
    }

    /// Post-composition with the dilation `w ↦ c w`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::Validation(format!("scale factor must be positive, got {c}")));
        }
        let (p, d) = (self.profile.clone(), self.derivative.clone());
        Ok(Self {
            profile: Arc::new(move |r| c * p(r)),
            derivative: Arc::new(move |r| c * d(r)),
            label: format!("{c}*{}", self.label),
        })
    }

    /// `ρ` strictly increasing on an `n`-point grid of `[0, 1]`.
    pub fn is_strictly_increasing(&self, n: usize) -> bool {
        let values: Vec<f64> = (0..=n).map(|i| self.radius(i as f64 / n as f64)).collect();
        values.windows(2).all(|w| w[0] < w[1])
    }
}

/// `ρ(r) = r^α`.
pub fn radial_power_map(alpha: f64) -> Result<RadialMap> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::Domain(format!("power exponent must be positive, got {alpha}")));
    }
    RadialMap::new(format!("power(alpha={alpha})"), move |r| r.powf(alpha), move |r| alpha * r.powf(alpha - 1.0))
}

/// `ρ(r) = r^α` up to `knot`, continued linearly with matching slope beyond it, so the
/// profile is C¹ at the knot.
pub fn knotted_power_map(alpha: f64, knot: f64) -> Result<RadialMap> {
    if !(alpha > 0.0 && knot > 0.0 && knot < 1.0) {
        return Err(Error::Domain(format!("need alpha > 0 and knot in (0, 1), got {alpha}, {knot}")));
    }
    let (base, slope) = (knot.powf(alpha), alpha * knot.powf(alpha - 1.0));
    RadialMap::new(
        format!("knotted(alpha={alpha},knot={knot})"),
        move |r| if r <= knot { r.powf(alpha) } else { base + slope * (r - knot) },
        move |r| if r <= knot { alpha * r.powf(alpha - 1.0) } else { slope },
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeData {
    /// `|f_z| + |f_z̄|`, the operator norm of the differential.
    pub fz_abs_plus_fzbar_abs: f64,
    pub jacobian: f64,
    pub at_radius: f64,
}

pub fn derivative_data(map: &RadialMap, r: f64) -> Result<DerivativeData> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("radius must lie in (0, 1), got {r}")));
    }
    let (d, s) = (map.radius_derivative(r), map.radius(r) / r);
    Ok(DerivativeData { fz_abs_plus_fzbar_abs: d.max(s), jacobian: d * s, at_radius: r })
}

/// `K_p(f, z) = (|f_z| + |f_z̄|)^p / J_f` as a radial field on the unit disk. A vanishing
/// Jacobian gives `+∞`; the centre itself is not evaluable.
pub fn kp_field(map: &RadialMap, p: ExponentP) -> QField {
    let map = map.clone();
    let p = p.p();
    QField::radial(PlanePoint::ORIGIN, 1.0, move |r| {
        if r <= 0.0 {
            return f64::NAN;
        }
        let (d, s) = (map.radius_derivative(r), map.radius(r) / r);
        let jacobian = d * s;
        if jacobian == 0.0 {
            return f64::INFINITY;
        }
        d.max(s).powf(p) / jacobian
    })
}

/// `m(f B_r) = π ρ(r)²`.
pub fn image_disk_area(map: &RadialMap, r: f64) -> f64 {
    let rho = map.radius(r);
    PI * rho * rho
}

/// `min_{|z|=r} |f(z)| = ρ(r)`.
pub fn min_modulus(map: &RadialMap, r: f64) -> f64 {
    map.radius(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ex(p: f64) -> ExponentP {
        ExponentP::new(p).unwrap()
    }

    #[test]
    fn power_profiles() {
        assert_eq!(radial_power_map(1.0).unwrap().radius(0.37), 0.37);
        assert!((radial_power_map(2.0).unwrap().radius(0.5) - 0.25).abs() < 1e-15);
        assert!((radial_power_map(0.5).unwrap().radius(0.25) - 0.5).abs() < 1e-15);
        assert!(radial_power_map(0.0).is_err());
        assert!(radial_power_map(-1.0).is_err());
    }

    #[test]
    fn non_monotone_profile_is_rejected() {
        assert!(RadialMap::new("bad", |r| r * (1.0 - r), |r| 1.0 - 2.0 * r).is_err());
        assert!(RadialMap::new("shifted", |r| r + 0.1, |_| 1.0).is_err());
    }

    #[test]
    fn derivative_examples() {
        let d = derivative_data(&RadialMap::identity(), 0.4).unwrap();
        assert_eq!((d.fz_abs_plus_fzbar_abs, d.jacobian), (1.0, 1.0));
        let d = derivative_data(&radial_power_map(2.0).unwrap(), 0.5).unwrap();
        assert!((d.fz_abs_plus_fzbar_abs - 1.0).abs() < 1e-15 && (d.jacobian - 0.5).abs() < 1e-15);
        let d = derivative_data(&radial_power_map(0.5).unwrap(), 0.25).unwrap();
        assert!((d.fz_abs_plus_fzbar_abs - 2.0).abs() < 1e-14 && (d.jacobian - 2.0).abs() < 1e-14);
        assert!(derivative_data(&RadialMap::identity(), 0.0).is_err());
        assert!(derivative_data(&RadialMap::identity(), 1.0).is_err());
    }

    /// Central differences of the planar map give the Jacobian matrix; its largest singular
    /// value is |f_z|+|f_z̄| and its determinant is J_f.
    fn finite_difference_data(map: &RadialMap, z: PlanePoint) -> (f64, f64) {
        let h = 1e-6;
        let fx = |dx: f64, dy: f64| map.apply(PlanePoint::new(z.x + dx, z.y + dy));
        let (xp, xm, yp, ym) = (fx(h, 0.0), fx(-h, 0.0), fx(0.0, h), fx(0.0, -h));
        let a = (xp.x - xm.x) / (2.0 * h);
        let c = (xp.y - xm.y) / (2.0 * h);
        let b = (yp.x - ym.x) / (2.0 * h);
        let d = (yp.y - ym.y) / (2.0 * h);
        let det = a * d - b * c;
        let frob = a * a + b * b + c * c + d * d;
        let sigma_max = ((frob + (frob * frob - 4.0 * det * det).max(0.0).sqrt()) / 2.0).sqrt();
        (sigma_max, det)
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for alpha in [0.5, 0.75, 1.0, 2.0, 3.0] {
            let map = radial_power_map(alpha).unwrap();
            for (r, t) in [(0.25, 0.3), (0.5, 2.0), (0.8, 4.5), (0.6, 1.1)] {
                let z = PlanePoint::polar(PlanePoint::ORIGIN, r, t);
                let (norm, det) = finite_difference_data(&map, z);
                let d = derivative_data(&map, r).unwrap();
                assert!((norm - d.fz_abs_plus_fzbar_abs).abs() / d.fz_abs_plus_fzbar_abs < 1e-5, "alpha {alpha} r {r}");
                assert!((det - d.jacobian).abs() / d.jacobian < 1e-5, "alpha {alpha} r {r}");
                assert!(d.fz_abs_plus_fzbar_abs >= d.jacobian.sqrt());
            }
        }
    }

    #[test]
    fn two_dilatation_is_constant() {
        for alpha in [0.25, 0.5, 0.75, 1.0, 2.0, 4.0] {
            let k = kp_field(&radial_power_map(alpha).unwrap(), ex(2.0));
            let expected = f64::max(alpha, 1.0 / alpha);
            for i in 1..200 {
                let z = PlanePoint::new(i as f64 / 200.0, 0.0);
                assert!((k.eval(z).unwrap() - expected).abs() <= 1e-10 * expected);
            }
        }
        let k = kp_field(&RadialMap::identity(), ex(3.7));
        assert!((k.eval(PlanePoint::new(0.3, 0.1)).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dilatation_refused_at_centre() {
        let k = kp_field(&radial_power_map(2.0).unwrap(), ex(3.0));
        assert!(k.eval(PlanePoint::ORIGIN).is_err());
    }

    #[test]
    fn dilatation_scales_under_post_composition() {
        let map = radial_power_map(0.5).unwrap();
        for p in [2.0, 3.0, 4.5] {
            let k = kp_field(&map, ex(p));
            let kc = kp_field(&map.scaled(10.0).unwrap(), ex(p));
            let z = PlanePoint::new(0.2, 0.3);
            let ratio = kc.eval(z).unwrap() / k.eval(z).unwrap();
            assert!((ratio - 10f64.powf(p - 2.0)).abs() < 1e-10 * ratio);
        }
    }

    #[test]
    fn knotted_profile_is_continuous_at_knot() {
        for (alpha, knot) in [(2.0, 0.5), (3.0, 0.4), (0.5, 0.3)] {
            let map = knotted_power_map(alpha, knot).unwrap();
            for p in [2.0, 3.0] {
                let k = kp_field(&map, ex(p));
                let below = k.eval(PlanePoint::new(knot - 1e-9, 0.0)).unwrap();
                let above = k.eval(PlanePoint::new(knot + 1e-9, 0.0)).unwrap();
                assert!((below - above).abs() < 1e-6 * below, "alpha {alpha} p {p}: {below} {above}");
            }
        }
    }

    #[test]
    fn image_area_and_min_modulus() {
        let id = RadialMap::identity();
        assert!((image_disk_area(&id, 0.5) - PI / 4.0).abs() < 1e-15);
        assert!((image_disk_area(&radial_power_map(0.5).unwrap(), 0.25) - PI / 4.0).abs() < 1e-15);
        assert!((image_disk_area(&radial_power_map(2.0).unwrap(), 0.5) - 0.196_35).abs() < 1e-5);
        assert_eq!(min_modulus(&id, 0.3), 0.3);
        assert!((min_modulus(&radial_power_map(2.0).unwrap(), 0.5) - 0.25).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn power_maps_are_homeomorphisms(alpha in 0.05f64..6.0, r in 0.001f64..0.999) {
            let map = radial_power_map(alpha).unwrap();
            prop_assert!(map.is_strictly_increasing(MONOTONE_GRID));
            let l = min_modulus(&map, r);
            prop_assert!(PI * l * l <= image_disk_area(&map, r) * (1.0 + 1e-15));
        }
    }
}
