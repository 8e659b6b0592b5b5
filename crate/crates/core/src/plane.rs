//! Planar geometry and weight fields shared by the numeric modules.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A point of the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub const ORIGIN: PlanePoint = PlanePoint { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Point at distance `r` and angle `theta` from `center`.
    pub fn polar(center: PlanePoint, r: f64, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(center.x + r * c, center.y + r * s)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(&self, other: PlanePoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Angle of `self - center` in `[0, 2π)`.
    pub fn angle_from(&self, center: PlanePoint) -> f64 {
        let a = (self.y - center.y).atan2(self.x - center.x);
        if a < 0.0 {
            a + TAU
        } else {
            a
        }
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Exponent `p > 1` together with its conjugate `q = p/(p-1)` and `λ = 1/(p-1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentP {
    p: f64,
}

impl ExponentP {
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() || p <= 1.0 {
            return Err(Error::Validation(format!("exponent p must be finite and > 1, got {p}")));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Hölder conjugate `p/(p-1)`.
    pub fn conjugate(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    /// `1/(p-1)`, the power applied to `Q` inside ring norms.
    pub fn lambda(&self) -> f64 {
        1.0 / (self.p - 1.0)
    }
}

/// Round annulus `{ r1 < |z - center| < r2 }`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Annulus {
    pub center: PlanePoint,
    pub r1: f64,
    pub r2: f64,
}

impl Annulus {
    pub fn new(center: PlanePoint, r1: f64, r2: f64) -> Result<Self> {
        validate_annulus(Annulus { center, r1, r2 })
    }

    /// Annulus centred at the origin.
    pub fn centered(r1: f64, r2: f64) -> Result<Self> {
        Self::new(PlanePoint::ORIGIN, r1, r2)
    }

    pub fn area(&self) -> f64 {
        std::f64::consts::PI * (self.r2 * self.r2 - self.r1 * self.r1)
    }
}

pub fn validate_annulus(a: Annulus) -> Result<Annulus> {
    if !a.center.is_finite() || !a.r1.is_finite() || !a.r2.is_finite() {
        return Err(Error::Validation(format!(
            "annulus has non-finite data: center {}, r1 {}, r2 {}",
            a.center, a.r1, a.r2
        )));
    }
    if a.r1 <= 0.0 {
        return Err(Error::Validation(format!("inner radius must be positive, got {}", a.r1)));
    }
    if a.r1 >= a.r2 {
        return Err(Error::Validation(format!(
            "inner radius {} must be smaller than outer radius {}",
            a.r1, a.r2
        )));
    }
    Ok(a)
}

/// Condenser `(A, C)` with `C` the closed disk of `inner_radius` and `A` the open disk of
/// `outer_radius`, both centred at `center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingCondenser {
    pub center: PlanePoint,
    pub inner_radius: f64,
    pub outer_radius: f64,
}

impl RingCondenser {
    pub fn new(center: PlanePoint, inner_radius: f64, outer_radius: f64) -> Result<Self> {
        Annulus::new(center, inner_radius, outer_radius)?;
        Ok(Self { center, inner_radius, outer_radius })
    }

    pub fn annulus(&self) -> Annulus {
        Annulus { center: self.center, r1: self.inner_radius, r2: self.outer_radius }
    }

    /// Area of the compact plate `C`.
    pub fn compact_area(&self) -> f64 {
        std::f64::consts::PI * self.inner_radius * self.inner_radius
    }

    /// Area of the open set `A`.
    pub fn open_area(&self) -> f64 {
        std::f64::consts::PI * self.outer_radius * self.outer_radius
    }

    /// Area of `A \ C`.
    pub fn gap_area(&self) -> f64 {
        self.annulus().area()
    }

    /// Diameter of the compact plate.
    pub fn compact_diameter(&self) -> f64 {
        2.0 * self.inner_radius
    }
}

/// Which curve family of an annulus is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveFamilyKind {
    /// Concentric circles `C(z0, r)`, `r1 < r < r2`.
    Circles,
    /// Curves joining the two boundary circles inside the annulus.
    Connecting,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveFamilyDescriptor {
    pub annulus: Annulus,
    pub kind: CurveFamilyKind,
}

/// Samples of a field on a polar grid, interpolated bilinearly in `(r, θ)`.
///
/// `samples[i][j]` is the value at radius `radii[i]` and angle `2π j / n_angles`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarGrid {
    radii: Vec<f64>,
    n_angles: usize,
    samples: Vec<Vec<f64>>,
}

impl PolarGrid {
    pub fn new(radii: Vec<f64>, samples: Vec<Vec<f64>>) -> Result<Self> {
        if radii.len() < 2 {
            return Err(Error::Validation("polar grid needs at least two radii".into()));
        }
        if radii.windows(2).any(|w| !(w[0] < w[1])) || radii[0] < 0.0 {
            return Err(Error::Validation("polar grid radii must be nonnegative and increasing".into()));
        }
        if samples.len() != radii.len() {
            return Err(Error::Validation("one sample row per radius is required".into()));
        }
        let n_angles = samples[0].len();
        if n_angles < 2 || samples.iter().any(|row| row.len() != n_angles) {
            return Err(Error::Validation("sample rows must share a length of at least two".into()));
        }
        if let Some(bad) = samples.iter().flatten().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::Validation(format!("grid sample {bad} is not positive and finite")));
        }
        Ok(Self { radii, n_angles, samples })
    }

    /// Samples `f(r, θ)` on the given radii and `n_angles` equispaced angles.
    pub fn sample(radii: Vec<f64>, n_angles: usize, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let samples = radii
            .iter()
            .map(|&r| {
                (0..n_angles)
                    .map(|j| f(r, TAU * j as f64 / n_angles as f64))
                    .collect()
            })
            .collect();
        Self::new(radii, samples)
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn n_angles(&self) -> usize {
        self.n_angles
    }

    /// Bilinear interpolation; radii outside the sampled range are clamped.
    pub fn interpolate(&self, r: f64, theta: f64) -> f64 {
        let last = self.radii.len() - 1;
        let r = r.clamp(self.radii[0], self.radii[last]);
        let i = match self.radii.partition_point(|&x| x <= r) {
            0 => 0,
            k if k > last => last - 1,
            k => k - 1,
        };
        let (ra, rb) = (self.radii[i], self.radii[i + 1]);
        let s = ((r - ra) / (rb - ra)).clamp(0.0, 1.0);

        let h = TAU / self.n_angles as f64;
        let u = theta.rem_euclid(TAU) / h;
        let j = (u.floor() as usize).min(self.n_angles - 1);
        let t = u - j as f64;
        let j1 = (j + 1) % self.n_angles;

        let row = |k: usize| self.samples[k][j] * (1.0 - t) + self.samples[k][j1] * t;
        row(i) * (1.0 - s) + row(i + 1) * s
    }
}

type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type PointFn = Arc<dyn Fn(PlanePoint) -> f64 + Send + Sync>;

#[derive(Clone)]
enum FieldKind {
    Constant(f64),
    Radial(RadialFn),
    Analytic(PointFn),
    Grid(PolarGrid),
}

/// A positive weight `Q` on the disk `|z - center| < domain_radius`.
///
/// `+∞` is a legal value and marks a point where the weight blows up (for example a
/// vanishing Jacobian); zero, negative and NaN values are rejected at evaluation.
#[derive(Clone)]
pub struct QField {
    kind: FieldKind,
    center: PlanePoint,
    domain_radius: f64,
}

impl fmt::Debug for QField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            FieldKind::Constant(c) => format!("constant({c})"),
            FieldKind::Radial(_) => "radial".to_string(),
            FieldKind::Analytic(_) => "analytic".to_string(),
            FieldKind::Grid(g) => format!("polar_grid({}x{})", g.radii.len(), g.n_angles),
        };
        f.debug_struct("QField")
            .field("kind", &kind)
            .field("center", &self.center)
            .field("domain_radius", &self.domain_radius)
            .finish()
    }
}

impl QField {
    /// `Q ≡ c` on the whole plane.
    pub fn constant(c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::Validation(format!("constant field value must be positive, got {c}")));
        }
        Ok(Self { kind: FieldKind::Constant(c), center: PlanePoint::ORIGIN, domain_radius: f64::INFINITY })
    }

    /// `Q(z) = profile(|z - center|)`.
    pub fn radial(
        center: PlanePoint,
        domain_radius: f64,
        profile: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self { kind: FieldKind::Radial(Arc::new(profile)), center, domain_radius }
    }

    pub fn analytic(
        center: PlanePoint,
        domain_radius: f64,
        eval: impl Fn(PlanePoint) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self { kind: FieldKind::Analytic(Arc::new(eval)), center, domain_radius }
    }

    /// Grid field; its domain is the disk of the largest sampled radius.
    pub fn polar_grid(center: PlanePoint, grid: PolarGrid) -> Self {
        let domain_radius = *grid.radii.last().expect("grid has radii");
        Self { kind: FieldKind::Grid(grid), center, domain_radius }
    }

    pub fn center(&self) -> PlanePoint {
        self.center
    }

    pub fn domain_radius(&self) -> f64 {
        self.domain_radius
    }

    pub fn constant_value(&self) -> Option<f64> {
        match self.kind {
            FieldKind::Constant(c) => Some(c),
            _ => None,
        }
    }

    /// The field `c · Q`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::Validation(format!("scale factor must be positive, got {c}")));
        }
        let kind = match &self.kind {
            FieldKind::Constant(v) => FieldKind::Constant(c * v),
            FieldKind::Radial(f) => {
                let f = f.clone();
                FieldKind::Radial(Arc::new(move |r| c * f(r)))
            }
            FieldKind::Analytic(f) => {
                let f = f.clone();
                FieldKind::Analytic(Arc::new(move |z| c * f(z)))
            }
            FieldKind::Grid(g) => FieldKind::Grid(PolarGrid {
                radii: g.radii.clone(),
                n_angles: g.n_angles,
                samples: g.samples.iter().map(|row| row.iter().map(|v| c * v).collect()).collect(),
            }),
        };
        Ok(Self { kind, center: self.center, domain_radius: self.domain_radius })
    }

    pub fn eval(&self, z: PlanePoint) -> Result<f64> {
        qfield_eval(self, z)
    }
}

/// Evaluates `Q(z)`, rejecting points outside the domain disk and non-positive values.
pub fn qfield_eval(field: &QField, z: PlanePoint) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::Domain(format!("non-finite query point {z}")));
    }
    let r = z.dist(field.center);
    // relative slack so that circles of exactly the domain radius stay admissible
    if r > field.domain_radius * (1.0 + 1e-12) {
        return Err(Error::Domain(format!(
            "point {z} lies outside the field's domain disk of radius {}",
            field.domain_radius
        )));
    }
    let value = match &field.kind {
        FieldKind::Constant(c) => *c,
        FieldKind::Radial(f) => f(r),
        FieldKind::Analytic(f) => f(z),
        FieldKind::Grid(g) => g.interpolate(r, z.angle_from(field.center)),
    };
    if value.is_nan() || value <= 0.0 {
        return Err(Error::InvalidField { value, x: z.x, y: z.y });
    }
    Ok(value)
}
