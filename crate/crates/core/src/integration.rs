//! Deterministic adaptive quadrature: circle integrals, radial integrals and disk averages.
//!
//! Circle integrals use composite Simpson on `θ` with repeated interval halving. Radial
//! integrals use a Gauss–Kronrod 7/15 pair, which never samples the interval endpoints,
//! refined in passes; segments touching an endpoint are split with a geometric grading
//! towards the endpoint so that integrable endpoint singularities are resolved within the
//! pass budget.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::plane::PlanePoint;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_refinements: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-9, max_refinements: 24 }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_refinements: u32) -> Result<Self> {
        let spec = Self { abs_tol, rel_tol, max_refinements };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.max_refinements >= 1) {
            return Err(Error::Validation(format!(
                "quadrature tolerances must be positive and max_refinements >= 1, got {self:?}"
            )));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error_bound: f64,
    /// Set when the integral was found to be infinite.
    pub divergent: bool,
    /// Error bound after each refinement pass.
    pub history: Vec<f64>,
}

impl Quadrature {
    fn exact(value: f64) -> Self {
        Self { value, error_bound: 0.0, divergent: false, history: Vec::new() }
    }

    fn infinite(sign: f64, history: Vec<f64>) -> Self {
        Self { value: sign * f64::INFINITY, error_bound: f64::INFINITY, divergent: true, history }
    }
}

const INITIAL_CIRCLE_NODES: usize = 8;

/// `∫₀^{2π} g(center + r e^{iθ}) r dθ`.
pub fn circle_integral(
    mut g: impl FnMut(PlanePoint) -> f64,
    center: PlanePoint,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    try_circle_integral(|z| Ok(g(z)), center, r, spec)
}

/// [`circle_integral`] for integrands that can fail.
pub fn try_circle_integral(
    mut g: impl FnMut(PlanePoint) -> Result<f64>,
    center: PlanePoint,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    spec.validate()?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("circle radius must be positive, got {r}")));
    }
    let mut sample = |theta: f64| -> Result<f64> {
        let v = g(PlanePoint::polar(center, r, theta))?;
        if v.is_nan() {
            return Err(Error::Domain(format!("integrand is NaN at r={r}, θ={theta}")));
        }
        Ok(v)
    };

    // Periodic nodes θ_k = 2πk/n; `old_sum` holds Σ over the current n nodes.
    let mut n = INITIAL_CIRCLE_NODES;
    let mut old_sum = 0.0;
    for k in 0..n {
        old_sum += sample(TAU * k as f64 / n as f64)?;
    }
    let mut previous: Option<f64> = None;
    let mut history = Vec::new();
    for _ in 0..spec.max_refinements {
        let mut new_sum = 0.0;
        for k in 0..n {
            new_sum += sample(TAU * (2 * k + 1) as f64 / (2 * n) as f64)?;
        }
        let h = TAU / (2 * n) as f64;
        let simpson = r * h / 3.0 * (4.0 * new_sum + 2.0 * old_sum);
        if simpson.is_infinite() || old_sum.is_infinite() || new_sum.is_infinite() {
            return Ok(Quadrature::infinite(1.0, history));
        }
        old_sum += new_sum;
        n *= 2;
        if let Some(prev) = previous {
            let err = (simpson - prev).abs() / 15.0;
            history.push(err);
            if err <= spec.target(simpson) {
                return Ok(Quadrature { value: simpson, error_bound: err, divergent: false, history });
            }
        }
        previous = Some(simpson);
    }
    let estimate = previous.unwrap_or(f64::NAN);
    Err(Error::Accuracy { estimate, error_bound: history.last().copied().unwrap_or(f64::INFINITY) })
}

/// `∫_{r1}^{r2} h(t) dt` for `0 < r1 < r2`, tolerating integrable endpoint singularities.
///
/// A divergent integral is returned as `±∞` with `divergent` set, not as an error.
pub fn radial_integral(
    mut h: impl FnMut(f64) -> f64,
    r1: f64,
    r2: f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    try_radial_integral(|t| Ok(h(t)), r1, r2, spec)
}

/// [`radial_integral`] for integrands that can fail.
pub fn try_radial_integral(
    h: impl FnMut(f64) -> Result<f64>,
    r1: f64,
    r2: f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    if !(r1 > 0.0 && r1 < r2 && r2.is_finite()) {
        return Err(Error::Domain(format!("radial integral needs 0 < r1 < r2 < ∞, got ({r1}, {r2})")));
    }
    integrate_open(h, r1, r2, spec)
}

/// Mean of `g` over the disk `B(center, eps)`.
pub fn disk_average(
    mut g: impl FnMut(PlanePoint) -> f64,
    center: PlanePoint,
    eps: f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    try_disk_average(|z| Ok(g(z)), center, eps, spec)
}

pub fn try_disk_average(
    mut g: impl FnMut(PlanePoint) -> Result<f64>,
    center: PlanePoint,
    eps: f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Domain(format!("disk radius must be positive, got {eps}")));
    }
    // tolerances refer to the average, so the absolute parts scale with the disk size
    let area = PI * eps * eps;
    let circle_spec = QuadratureSpec { abs_tol: spec.abs_tol * eps, ..*spec };
    let radial_spec = QuadratureSpec { abs_tol: spec.abs_tol * area, ..*spec };
    let mut inner_error = 0.0f64;
    let q = integrate_open(
        |r| {
            let c = try_circle_integral(&mut g, center, r, &circle_spec)?;
            inner_error = inner_error.max(c.error_bound);
            Ok(c.value)
        },
        0.0,
        eps,
        &radial_spec,
    )?;
    Ok(Quadrature {
        value: q.value / area,
        error_bound: (q.error_bound + inner_error * eps) / area,
        divergent: q.divergent,
        history: q.history.iter().map(|e| e / area).collect(),
    })
}

// Gauss–Kronrod 7/15 abscissae and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Returns `(kronrod, |kronrod - gauss|)`, or `None` when a sample is infinite.
fn gauss_kronrod(f: &mut impl FnMut(f64) -> Result<f64>, a: f64, b: f64) -> Result<Option<(f64, f64)>> {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut kronrod = 0.0;
    let mut gauss = 0.0;
    for (i, (&x, &w)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let pts: &[f64] = if x == 0.0 { &[0.0] } else { &[x, -x] };
        for &s in pts {
            // keep rounded nodes strictly inside (a, b)
            let t = (mid + half * s).clamp(a.next_up(), b.next_down());
            let v = f(t)?;
            if v.is_nan() {
                return Err(Error::Domain(format!("integrand is NaN at t={t}")));
            }
            if v.is_infinite() {
                return Ok(None);
            }
            kronrod += w * v;
            if i % 2 == 1 {
                gauss += WG[i / 2] * v;
            }
        }
    }
    Ok(Some((kronrod * half, ((kronrod - gauss) * half).abs())))
}

const MAX_SEGMENTS: usize = 10_000;
/// Each refinement of an endpoint segment peels off a piece this many times narrower.
const ENDPOINT_GRADING: f64 = 1024.0;
const OVERFLOW_GUARD: f64 = 1e150;

/// Pass-based adaptive Gauss–Kronrod on `(a, b)`.
pub(crate) fn integrate_open(
    mut f: impl FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Quadrature> {
    spec.validate()?;
    if a == b {
        return Ok(Quadrature::exact(0.0));
    }
    let width = b - a;
    let mut segments = Vec::new();
    let mut history = Vec::new();
    let mut estimates = Vec::new();

    let mut pending = vec![(a, b)];
    for pass in 0..=spec.max_refinements {
        for (lo, hi) in pending.drain(..) {
            match gauss_kronrod(&mut f, lo, hi)? {
                Some((value, error)) => segments.push(Segment { a: lo, b: hi, value, error }),
                None => return Ok(Quadrature::infinite(1.0, history)),
            }
        }
        segments.sort_by(|x, y| x.a.total_cmp(&y.a));
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        history.push(error);
        estimates.push(value);
        if value.abs() > OVERFLOW_GUARD {
            return Ok(Quadrature::infinite(value.signum(), history));
        }
        let target = spec.target(value);
        if error <= target {
            return Ok(Quadrature { value, error_bound: error, divergent: false, history });
        }
        if looks_divergent(&estimates) {
            return Ok(Quadrature::infinite(value.signum(), history));
        }
        if pass == spec.max_refinements || segments.len() > MAX_SEGMENTS {
            break;
        }
        let mut kept = Vec::with_capacity(segments.len());
        for s in segments.drain(..) {
            let w = s.b - s.a;
            let resolvable = w > 64.0 * f64::EPSILON * s.a.abs().max(s.b.abs());
            if s.error > target * w / width && resolvable {
                let g = w / ENDPOINT_GRADING;
                if s.a == a {
                    pending.extend([(s.a, s.a + g), (s.a + g, s.a + w / 2.0), (s.a + w / 2.0, s.b)]);
                } else if s.b == b {
                    pending.extend([(s.a, s.b - w / 2.0), (s.b - w / 2.0, s.b - g), (s.b - g, s.b)]);
                } else {
                    let m = s.a + w / 2.0;
                    pending.extend([(s.a, m), (m, s.b)]);
                }
            } else {
                kept.push(s);
            }
        }
        segments = kept;
        if pending.is_empty() {
            break;
        }
    }

    Err(Error::Accuracy {
        estimate: estimates.last().copied().unwrap_or(f64::NAN),
        error_bound: history.last().copied().unwrap_or(f64::INFINITY),
    })
}

/// Some run of refinement passes shows sustained same-sign growth without geometric decay
/// of the increments.
fn looks_divergent(estimates: &[f64]) -> bool {
    const WINDOW: usize = 3;
    if estimates.len() < WINDOW + 1 {
        return false;
    }
    let steps: Vec<f64> = estimates.windows(2).map(|w| w[1] - w[0]).collect();
    steps.windows(WINDOW).any(|run| {
        let sign = run[0].signum();
        run.iter().all(|d| d.signum() == sign && *d != 0.0)
            && run.windows(2).all(|w| w[1].abs() >= 0.9 * w[0].abs())
    })
}
