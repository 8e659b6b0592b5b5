use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integration::QuadratureSpec;
use crate::plane::QField;
use crate::test_maps::{radial_power_map, RadialMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Infimum,
    Modulus,
    Capacity,
    Area,
    Growth,
    Point,
    Lipschitz,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::Infimum,
        Suite::Modulus,
        Suite::Capacity,
        Suite::Area,
        Suite::Growth,
        Suite::Point,
        Suite::Lipschitz,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::Infimum => "infimum",
            Suite::Modulus => "modulus",
            Suite::Capacity => "capacity",
            Suite::Area => "area",
            Suite::Growth => "growth",
            Suite::Point => "point",
            Suite::Lipschitz => "lipschitz",
            Suite::All => "all",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Suite::EACH
            .iter()
            .chain([Suite::All].iter())
            .copied()
            .find(|suite| suite.as_str() == s)
            .ok_or_else(|| Error::Validation(format!("unknown suite {s:?}")))
    }

    /// The concrete suites this name stands for.
    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => Suite::EACH.to_vec(),
            s => vec![s],
        }
    }

    /// Exponents used when the configuration does not list any.
    pub fn default_p_values(self) -> Vec<f64> {
        match self {
            Suite::Infimum => vec![1.5, 2.0, 3.0],
            Suite::Modulus => vec![1.5, 2.0, 3.0, 4.0],
            Suite::Capacity => vec![1.25, 1.5, 1.75, 2.0],
            Suite::Area | Suite::Growth | Suite::Point => vec![2.0, 3.0, 4.0],
            Suite::Lipschitz => vec![3.0, 4.0],
            Suite::All => Vec::new(),
        }
    }

    /// Whether the suite's statements cover exponent `p`.
    pub fn accepts_p(self, p: f64) -> bool {
        match self {
            Suite::Area | Suite::Growth | Suite::Point => p >= 2.0,
            Suite::Lipschitz => p > 2.0,
            _ => p > 1.0,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Geometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { min: 0.1, max: 0.9, count: 9, spacing: Spacing::Linear }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::Validation(format!("radius grid needs at least 2 points, got {}", self.count)));
        }
        if !(self.min > 0.0 && self.min < self.max && self.max < 1.0) {
            return Err(Error::Validation(format!(
                "radius grid must satisfy 0 < min < max < 1, got min={} max={}",
                self.min, self.max
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let n = self.count - 1;
        (0..=n)
            .map(|k| {
                if k == n {
                    return self.max;
                }
                let s = k as f64 / n as f64;
                match self.spacing {
                    Spacing::Linear => self.min + s * (self.max - self.min),
                    Spacing::Geometric => self.min * (self.max / self.min).powf(s),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    Power,
}

/// A radial test map; `alpha = 1` is the identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    #[serde(default = "MapSpec::default_kind")]
    pub kind: MapKind,
    pub alpha: f64,
}

impl MapSpec {
    fn default_kind() -> MapKind {
        MapKind::Power
    }

    pub fn power(alpha: f64) -> Self {
        Self { kind: MapKind::Power, alpha }
    }

    pub fn build(&self) -> Result<RadialMap> {
        match self.kind {
            MapKind::Power if self.alpha == 1.0 => Ok(RadialMap::identity()),
            MapKind::Power => radial_power_map(self.alpha),
        }
    }
}

/// Which weight `Q` the distortion suites use.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum QSpec {
    /// The map's own dilatation `K_p(f, ·)`.
    #[default]
    Kp,
    Constant { value: f64 },
}

impl QSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            QSpec::Kp => Ok(()),
            QSpec::Constant { value } => QField::constant(*value).map(|_| ()).map_err(|e| Error::Validation(e.to_string())),
        }
    }

    pub fn label(&self) -> String {
        match self {
            QSpec::Kp => "kp".into(),
            QSpec::Constant { value } => value.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub max_refinements: Option<u32>,
}

impl ToleranceOverrides {
    pub fn apply(&self) -> Result<QuadratureSpec> {
        let base = QuadratureSpec::default();
        QuadratureSpec::new(
            self.abs_tol.unwrap_or(base.abs_tol),
            self.rel_tol.unwrap_or(base.rel_tol),
            self.max_refinements.unwrap_or(base.max_refinements),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub suite: Suite,
    /// Exponents; each suite keeps the ones its statements cover. Empty means per-suite
    /// defaults. The infimum suite reads these as `q`.
    pub p_values: Vec<f64>,
    pub radii: GridSpec,
    pub maps: Vec<MapSpec>,
    pub q_spec: QSpec,
    pub tolerances: ToleranceOverrides,
    pub output_dir: PathBuf,
    pub seed: u64,
    /// Random weight vectors per `q` in the infimum suite.
    pub infimum_cases: usize,
    /// Random normalized densities per `(p, Q)` in the modulus suite.
    pub random_densities: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            suite: Suite::All,
            p_values: Vec::new(),
            radii: GridSpec::default(),
            maps: vec![MapSpec::power(0.5), MapSpec::power(1.0), MapSpec::power(2.0)],
            q_spec: QSpec::Kp,
            tolerances: ToleranceOverrides::default(),
            output_dir: PathBuf::from("out"),
            seed: 42,
            infimum_cases: 50,
            random_densities: 20,
        }
    }
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Validation(format!("config: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(p) = self.p_values.iter().find(|p| !(p.is_finite() && **p > 1.0)) {
            return Err(Error::Validation(format!("every exponent must exceed 1, got {p}")));
        }
        self.radii.validate()?;
        if self.maps.is_empty() {
            return Err(Error::Validation("at least one map is required".into()));
        }
        if let Some(m) = self.maps.iter().find(|m| !(m.alpha.is_finite() && m.alpha > 0.0)) {
            return Err(Error::Validation(format!("map exponent must be positive, got {}", m.alpha)));
        }
        self.q_spec.validate()?;
        self.tolerances.apply().map_err(|e| Error::Validation(e.to_string()))?;
        if self.infimum_cases == 0 {
            return Err(Error::Validation("infimum_cases must be at least 1".into()));
        }
        if self.suite != Suite::All && self.p_for(self.suite).is_empty() {
            return Err(Error::Validation(format!("no exponent in {:?} applies to suite {}", self.p_values, self.suite)));
        }
        Ok(())
    }

    /// Exponents for one concrete suite.
    pub fn p_for(&self, suite: Suite) -> Vec<f64> {
        let source = if self.p_values.is_empty() { suite.default_p_values() } else { self.p_values.clone() };
        source.into_iter().filter(|&p| suite.accepts_p(p)).collect()
    }

    pub fn quadrature(&self) -> Result<QuadratureSpec> {
        self.tolerances.apply()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let lin = GridSpec::default().points();
        assert_eq!(lin.len(), 9);
        assert!((lin[4] - 0.5).abs() < 1e-15 && lin[8] == 0.9);
        let geo = GridSpec { spacing: Spacing::Geometric, ..GridSpec::default() }.points();
        assert!((geo[1] / geo[0] - geo[8] / geo[7]).abs() < 1e-12);
        assert!(GridSpec { count: 1, ..GridSpec::default() }.validate().is_err());
        assert!(GridSpec { max: 1.0, ..GridSpec::default() }.validate().is_err());
    }

    #[test]
    fn json_round_trip() {
        let cfg = SuiteConfig {
            suite: Suite::Area,
            p_values: vec![2.0, 3.0],
            q_spec: QSpec::Constant { value: 2.0 },
            ..SuiteConfig::default()
        };
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(text.contains("\"p_values\"") && text.contains("\"q_spec\":{\"kind\":\"constant\""));
        assert_eq!(SuiteConfig::from_json(&text).unwrap(), cfg);
        let partial = SuiteConfig::from_json(r#"{"suite":"capacity","radii":{"count":3}}"#).unwrap();
        assert_eq!(partial.radii.count, 3);
        assert_eq!(partial.radii.max, 0.9);
        assert!(SuiteConfig::from_json(r#"{"suite":"capacity","bogus":1}"#).is_err());
    }

    #[test]
    fn validation() {
        let bad = SuiteConfig { suite: Suite::Capacity, p_values: vec![0.5, 2.0], ..SuiteConfig::default() };
        assert!(matches!(bad.validate(), Err(Error::Validation(_))));
        let none = SuiteConfig { suite: Suite::Lipschitz, p_values: vec![2.0], ..SuiteConfig::default() };
        assert!(none.validate().is_err());
        let cfg = SuiteConfig { p_values: vec![1.5, 3.0], ..SuiteConfig::default() };
        assert!(cfg.validate().is_ok());
        assert_eq!(cfg.p_for(Suite::Area), vec![3.0]);
        assert_eq!(cfg.p_for(Suite::Capacity), vec![1.5, 3.0]);
        assert_eq!(SuiteConfig::default().p_for(Suite::Lipschitz), vec![3.0, 4.0]);
    }
}
