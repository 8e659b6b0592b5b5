//! Ring norms, the weighted-infimum lemma and its brute-force oracle, the lower bound for
//! the modulus of images of concentric circles, and the extremal radial density `η₀`.
//!
//! Curve families are never discretised. Every modulus is reduced to one-dimensional
//! integrals: per circle through the weighted infimum, and per annulus through radial
//! extremality.

use std::f64::consts::TAU;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::integration::{radial_integral, try_circle_integral, try_radial_integral, QuadratureSpec};
use crate::plane::{Annulus, ExponentP, PlanePoint, QField};

/// A computed value with its numerical error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error_bound: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self { value, error_bound: 0.0 }
    }
}

/// The two degenerate branches of the radial lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degeneracy {
    Regular,
    /// `∫ dr/‖Q‖` diverges.
    Infinite,
    /// `‖Q‖ = ∞` almost everywhere on `(r1, r2)`.
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusBound {
    pub value: f64,
    pub error_bound: f64,
    pub degeneracy: Degeneracy,
}

/// `∫_{C(center, r)} Q^{1/(p-1)} |dz|`.
pub fn circle_power_integral(
    field: &QField,
    center: PlanePoint,
    r: f64,
    p: ExponentP,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let lambda = p.lambda();
    let q = try_circle_integral(|z| Ok(field.eval(z)?.powf(lambda)), center, r, spec)?;
    Ok(Estimate { value: q.value, error_bound: q.error_bound })
}

/// `‖Q‖_{1/(p-1)}(r) = (∫_{C(center, r)} Q^{1/(p-1)} |dz|)^{p-1}`.
pub fn ring_norm(field: &QField, center: PlanePoint, r: f64, p: ExponentP, spec: &QuadratureSpec) -> Result<Estimate> {
    let inner = circle_power_integral(field, center, r, p, spec)?;
    let e = p.p() - 1.0;
    let value = inner.value.powf(e);
    let error_bound = e * inner.value.powf(e - 1.0) * inner.error_bound;
    Ok(Estimate { value, error_bound })
}

/// `∫_{r1}^{r2} dr / ‖Q‖_{1/(p-1)}(r)`, the lower bound for `M_p(fΣ)` of a lower
/// Q-homeomorphism.
pub fn lower_modulus_bound(field: &QField, annulus: Annulus, p: ExponentP, spec: &QuadratureSpec) -> Result<ModulusBound> {
    radial_reciprocal_norm_integral(field, annulus.center, annulus.r1, annulus.r2, p, spec)
}

/// `∫_{r1}^{r2} dt / ‖Q‖_{1/(p-1)}(t)` without requiring an [`Annulus`]; `r1 = r2` gives 0.
pub fn radial_reciprocal_norm_integral(
    field: &QField,
    center: PlanePoint,
    r1: f64,
    r2: f64,
    p: ExponentP,
    spec: &QuadratureSpec,
) -> Result<ModulusBound> {
    if r1 == r2 {
        return Ok(ModulusBound { value: 0.0, error_bound: 0.0, degeneracy: Degeneracy::Regular });
    }
    let q = try_radial_integral(
        |r| {
            let norm = ring_norm(field, center, r, p, spec)?.value;
            Ok(if norm.is_infinite() { 0.0 } else { 1.0 / norm })
        },
        r1,
        r2,
        spec,
    )?;
    let degeneracy = if q.divergent {
        Degeneracy::Infinite
    } else if q.value == 0.0 {
        Degeneracy::Zero
    } else {
        Degeneracy::Regular
    };
    Ok(ModulusBound { value: q.value, error_bound: q.error_bound, degeneracy })
}

/// Exact p-modulus of the concentric-circle family, `∫_{r1}^{r2} (2πr)^{1-p} dr`.
pub fn circle_family_modulus(annulus: Annulus, p: ExponentP) -> f64 {
    circle_family_modulus_between(annulus.r1, annulus.r2, p)
}

/// As [`circle_family_modulus`] for raw radii `0 < r1 ≤ r2`; the empty family `r1 = r2`
/// has modulus 0.
pub fn circle_family_modulus_between(r1: f64, r2: f64, p: ExponentP) -> f64 {
    if r1 >= r2 {
        return 0.0;
    }
    let e = 2.0 - p.p();
    let radial = if e.abs() < 1e-12 { (r2 / r1).ln() } else { (r2.powf(e) - r1.powf(e)) / e };
    TAU.powf(1.0 - p.p()) * radial
}

/// `∫_{r1}^{r2} r^{-1/(q-1)} dr`.
fn connecting_kernel_integral(r1: f64, r2: f64, q: f64) -> f64 {
    let e = 1.0 - 1.0 / (q - 1.0);
    if e.abs() < 1e-12 {
        (r2 / r1).ln()
    } else {
        (r2.powf(e) - r1.powf(e)) / e
    }
}

/// q-modulus of the family joining the boundary circles of a round annulus,
/// `2π (∫_{r1}^{r2} r^{-1/(q-1)} dr)^{1-q}`, attained by the radial density
/// `c · r^{-1/(q-1)}`.
pub fn connecting_modulus_annulus(annulus: Annulus, q: f64) -> Result<f64> {
    if !(q.is_finite() && q > 1.0) {
        return Err(Error::Domain(format!("modulus exponent must exceed 1, got {q}")));
    }
    let c = 1.0 / connecting_kernel_integral(annulus.r1, annulus.r2, q);
    Ok(TAU * c.powf(q - 1.0))
}

/// Finite measure space `(X, μ)` with a positive function `φ` on it.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasureSpace {
    points: Vec<f64>,
    weights: Vec<f64>,
    phi: Vec<f64>,
}

impl DiscreteMeasureSpace {
    /// Zero weights are allowed (those points are ignored by the optimizer); the total mass
    /// must be positive.
    pub fn new(points: Vec<f64>, weights: Vec<f64>, phi: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Domain("measure space is empty".into()));
        }
        if weights.len() != points.len() || phi.len() != points.len() {
            return Err(Error::Validation("points, weights and phi must have equal lengths".into()));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::Validation("weights must be finite and nonnegative".into()));
        }
        if !(weights.iter().sum::<f64>() > 0.0) {
            return Err(Error::Validation("total mass must be positive".into()));
        }
        if phi.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::Validation("phi must be positive and finite".into()));
        }
        Ok(Self { points, weights, phi })
    }

    /// Midpoint grid of `n` cells on `[a, b]` with uniform cell masses.
    pub fn uniform_grid(a: f64, b: f64, n: usize, phi: impl Fn(f64) -> f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("measure space is empty".into()));
        }
        let h = (b - a) / n as f64;
        let points: Vec<f64> = (0..n).map(|i| a + (i as f64 + 0.5) * h).collect();
        let phi = points.iter().map(|&x| phi(x)).collect();
        Self::new(points, vec![h; n], phi)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `Σ φᵢ αᵢ^q μᵢ`.
    pub fn objective(&self, alpha: &[f64], q: f64) -> f64 {
        self.phi
            .iter()
            .zip(&self.weights)
            .zip(alpha)
            .map(|((f, w), a)| if *w == 0.0 { 0.0 } else { f * a.powf(q) * w })
            .sum()
    }

    /// `Σ αᵢ μᵢ`.
    pub fn mass_of(&self, alpha: &[f64]) -> f64 {
        self.weights.iter().zip(alpha).map(|(w, a)| w * a).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfimumSolution {
    pub value: f64,
    pub alpha0: Vec<f64>,
}

fn check_q(q: f64) -> Result<()> {
    if !(q.is_finite() && q > 1.0) {
        return Err(Error::Domain(format!("q must exceed 1, got {q}")));
    }
    Ok(())
}

/// `inf { Σ φ α^q μ : α ≥ 0, Σ α μ = 1 } = (Σ φ^{-λ} μ)^{-1/λ}` with `λ = 1/(q-1)`,
/// attained only at `α₀ = γ φ^{-λ}`, `γ = 1/Σ φ^{-λ} μ`.
pub fn weighted_infimum_closed(space: &DiscreteMeasureSpace, q: f64) -> Result<InfimumSolution> {
    check_q(q)?;
    let lambda = 1.0 / (q - 1.0);
    let powered: Vec<f64> = space.phi.iter().map(|f| f.powf(-lambda)).collect();
    let total: f64 = powered.iter().zip(&space.weights).map(|(v, w)| v * w).sum();
    let gamma = 1.0 / total;
    Ok(InfimumSolution { value: total.powf(-1.0 / lambda), alpha0: powered.iter().map(|v| gamma * v).collect() })
}

/// Projection onto `{α ≥ 0, Σ α μ = 1}` in the metric `Σ μᵢ (αᵢ - yᵢ)² / sᵢ`:
/// `αᵢ = max(0, yᵢ - τ sᵢ)`. With `s ≡ 1` this is the Euclidean projection in `L²(μ)`.
fn project_onto_slice(y: &[f64], weights: &[f64], scale: &[f64], out: &mut [f64]) {
    let mut order: Vec<usize> = (0..y.len()).collect();
    order.sort_by(|&i, &j| (y[j] / scale[j]).total_cmp(&(y[i] / scale[i])));
    let (mut moment, mut spread) = (0.0, 0.0);
    let mut tau = f64::NEG_INFINITY;
    for &i in &order {
        moment += weights[i] * y[i];
        spread += weights[i] * scale[i];
        let candidate = (moment - 1.0) / spread;
        if y[i] / scale[i] > candidate {
            tau = candidate;
        } else {
            break;
        }
    }
    for ((o, &v), &s) in out.iter_mut().zip(y).zip(scale) {
        *o = (v - tau * s).max(0.0);
    }
}

/// Scaled projected-gradient minimisation of `Σ φ α^q μ` over `{α ≥ 0, Σ α μ = 1}`, started
/// from the uniform density. The objective is separable, so its Hessian is the diagonal
/// `q(q-1) φ α^{q-2}`; gradient steps are scaled by its inverse and projected in the
/// matching metric, with Armijo backtracking. Iteration stops once the relative KKT
/// residual drops below `tol`.
pub fn weighted_infimum_numeric(space: &DiscreteMeasureSpace, q: f64, iters: usize, tol: f64) -> Result<f64> {
    check_q(q)?;
    // points of zero mass carry no constraint or cost
    let support: Vec<usize> = (0..space.weights.len()).filter(|&i| space.weights[i] > 0.0).collect();
    let phi: Vec<f64> = support.iter().map(|&i| space.phi[i]).collect();
    let mu: Vec<f64> = support.iter().map(|&i| space.weights[i]).collect();
    let n = support.len();

    let objective = |a: &[f64]| -> f64 { phi.iter().zip(&mu).zip(a).map(|((f, w), x)| f * x.powf(q) * w).sum() };

    let mass: f64 = mu.iter().sum();
    let mut alpha = vec![1.0 / mass; n];
    let mut value = objective(&alpha);

    let mut grad = vec![0.0; n];
    let mut scale = vec![0.0; n];
    let mut shifted = vec![0.0; n];
    let mut target_point = vec![0.0; n];
    let mut trial = vec![0.0; n];
    for _ in 0..iters {
        for i in 0..n {
            grad[i] = q * phi[i] * alpha[i].powf(q - 1.0);
        }
        // at the optimum the gradient equals qF on the support
        let target = q * value;
        let residual = alpha
            .iter()
            .zip(&grad)
            .zip(&mu)
            .map(|((a, g), w)| a * w * (g - target).powi(2))
            .sum::<f64>()
            .sqrt();
        // off the support the gradient must not undercut the multiplier
        let below = alpha.iter().zip(&grad).any(|(a, g)| *a == 0.0 && *g < target * (1.0 - tol));
        if residual <= tol * target && !below {
            return Ok(value);
        }

        // coordinates at zero have infinite (q < 2) or vanishing (q > 2) curvature; they get
        // a plain gradient scale instead
        let fallback = alpha.iter().cloned().fold(0.0, f64::max) / target;
        for i in 0..n {
            let inverse = 1.0 / (q * (q - 1.0) * phi[i] * alpha[i].powf(q - 2.0));
            scale[i] = if inverse.is_finite() && inverse > 0.0 { inverse } else { fallback };
            shifted[i] = alpha[i] - scale[i] * grad[i];
        }
        project_onto_slice(&shifted, &mu, &scale, &mut target_point);
        let slope: f64 = (0..n).map(|i| grad[i] * (target_point[i] - alpha[i]) * mu[i]).sum();
        if !(slope < 0.0) {
            // the projected step is a fixed point
            return Ok(value);
        }
        // stop short of the boundary so that no coordinate lands exactly on zero
        let mut t: f64 = if target_point.iter().any(|&a| a == 0.0) { 0.99 } else { 1.0 };
        // objective values near the minimum agree to rounding; allow for it
        let slack = 8.0 * f64::EPSILON * value.abs();
        loop {
            for i in 0..n {
                trial[i] = alpha[i] + t * (target_point[i] - alpha[i]);
            }
            let v = objective(&trial);
            if v <= value + ARMIJO * t * slope + slack {
                value = v;
                break;
            }
            t *= 0.5;
            if t < 1e-20 {
                return Ok(value);
            }
        }
        alpha.copy_from_slice(&trial);
    }
    Err(Error::NotConverged { best: value, iterations: iters })
}

const ARMIJO: f64 = 1e-4;

/// `ρ₀(z) = Q(z) / (∫_{C(z₀,|z-z₀|)} Q^{1/(p-1)}(ζ) |dζ|)^{p-1}`, the density attaining the
/// infimum for the circle family.
pub fn extremal_density(field: &QField, center: PlanePoint, p: ExponentP, z: PlanePoint, spec: &QuadratureSpec) -> Result<f64> {
    let r = z.dist(center);
    if r == 0.0 {
        return Err(Error::Domain("extremal density is undefined at the centre".into()));
    }
    Ok(field.eval(z)? / ring_norm(field, center, r, p, spec)?.value)
}

/// A nonnegative density on `(r1, r2)`.
#[derive(Clone)]
pub struct RadialDensity {
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    r1: f64,
    r2: f64,
}

impl std::fmt::Debug for RadialDensity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialDensity").field("r1", &self.r1).field("r2", &self.r2).finish()
    }
}

/// Normalisation tolerance for `∫ η = 1`.
pub const DENSITY_NORMALIZATION_TOL: f64 = 1e-8;

impl RadialDensity {
    /// Wraps `eval`, checking that it integrates to one.
    pub fn new(eval: impl Fn(f64) -> f64 + Send + Sync + 'static, r1: f64, r2: f64, spec: &QuadratureSpec) -> Result<Self> {
        let density = Self { eval: Arc::new(eval), r1, r2 };
        let total = density.integral(spec)?;
        if (total - 1.0).abs() > DENSITY_NORMALIZATION_TOL {
            return Err(Error::Validation(format!("density integrates to {total}, not 1")));
        }
        Ok(density)
    }

    /// Rescales a nonnegative `shape` to unit integral.
    pub fn normalized(shape: impl Fn(f64) -> f64 + Send + Sync + 'static, r1: f64, r2: f64, spec: &QuadratureSpec) -> Result<Self> {
        let shape: Arc<dyn Fn(f64) -> f64 + Send + Sync> = Arc::new(shape);
        let mass = radial_integral(|t| shape(t), r1, r2, spec)?.value;
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::Validation(format!("density shape has mass {mass}")));
        }
        Self::new(move |t| shape(t) / mass, r1, r2, spec)
    }

    pub fn eval(&self, r: f64) -> f64 {
        (self.eval)(r)
    }

    pub fn support(&self) -> (f64, f64) {
        (self.r1, self.r2)
    }

    pub fn integral(&self, spec: &QuadratureSpec) -> Result<f64> {
        Ok(radial_integral(|t| self.eval(t), self.r1, self.r2, spec)?.value)
    }
}

/// `η₀(t) = 1 / (I · ‖Q‖_{1/(p-1)}(t))` with `I` the radial lower bound on the annulus.
pub fn eta0(field: &QField, annulus: Annulus, p: ExponentP, spec: &QuadratureSpec) -> Result<RadialDensity> {
    let bound = lower_modulus_bound(field, annulus, p, spec)?;
    match bound.degeneracy {
        Degeneracy::Infinite => return Err(Error::Degenerate("I = ∞: the radial integral diverges".into())),
        Degeneracy::Zero => return Err(Error::Degenerate("I = 0: the ring norm is infinite".into())),
        Degeneracy::Regular => {}
    }
    let total = bound.value;
    let field = field.clone();
    let spec_copy = *spec;
    let center = annulus.center;
    RadialDensity::new(
        move |t| match ring_norm(&field, center, t, p, &spec_copy) {
            Ok(n) => 1.0 / (total * n.value),
            Err(_) => f64::NAN,
        },
        annulus.r1,
        annulus.r2,
        spec,
    )
}

/// `∫_{R(z₀,r1,r2)} Q^{1/(p-1)}(z) η^{p/(p-1)}(|z-z₀|) dm(z)`, evaluated as
/// `∫ η(r)^{p/(p-1)} (∫_{C(z₀,r)} Q^{1/(p-1)} |dz|) dr`.
pub fn jensen_functional(
    field: &QField,
    annulus: Annulus,
    p: ExponentP,
    eta: &RadialDensity,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let power = p.conjugate();
    let q = try_radial_integral(
        |r| {
            let weight = eta.eval(r);
            if weight == 0.0 {
                return Ok(0.0);
            }
            Ok(weight.powf(power) * circle_power_integral(field, annulus.center, r, p, spec)?.value)
        },
        annulus.r1,
        annulus.r2,
        spec,
    )?;
    Ok(Estimate { value: q.value, error_bound: q.error_bound })
}
