use std::collections::BTreeMap;

use crate::capacity::annulus_capacity;
use crate::distortion::{area_bound, point_radius_r, AreaBoundParams};
use crate::error::{Error, Result};
use crate::integration::QuadratureSpec;
use crate::modulus::{
    circle_family_modulus, connecting_modulus_annulus, extremal_density, lower_modulus_bound, ring_norm,
};
use crate::plane::{Annulus, ExponentP, PlanePoint, QField, RingCondenser};
use crate::test_maps::{kp_field, radial_power_map, RadialMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    RingNorm,
    LowerModulusBound,
    CircleFamilyModulus,
    ConnectingModulus,
    AnnulusCapacity,
    AreaBound,
    PointRadiusR,
    ExtremalDensity,
}

/// Weight keys accepted wherever a `Q` is needed: a constant `Q`, or `alpha` for the
/// dilatation of the radial power map.
const WEIGHT_KEYS: [&str; 2] = ["Q", "alpha"];

impl Quantity {
    pub const ALL: [Quantity; 8] = [
        Quantity::RingNorm,
        Quantity::LowerModulusBound,
        Quantity::CircleFamilyModulus,
        Quantity::ConnectingModulus,
        Quantity::AnnulusCapacity,
        Quantity::AreaBound,
        Quantity::PointRadiusR,
        Quantity::ExtremalDensity,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Quantity::RingNorm => "ring_norm",
            Quantity::LowerModulusBound => "lower_modulus_bound",
            Quantity::CircleFamilyModulus => "circle_family_modulus",
            Quantity::ConnectingModulus => "connecting_modulus",
            Quantity::AnnulusCapacity => "annulus_capacity",
            Quantity::AreaBound => "area_bound",
            Quantity::PointRadiusR => "point_radius_r",
            Quantity::ExtremalDensity => "extremal_density",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|q| q.as_str() == s).ok_or_else(|| {
            let names: Vec<&str> = Self::ALL.iter().map(|q| q.as_str()).collect();
            Error::Validation(format!("unknown quantity {s:?}; expected one of {}", names.join(", ")))
        })
    }

    pub fn required(&self) -> &'static [&'static str] {
        match self {
            Quantity::RingNorm | Quantity::AreaBound | Quantity::PointRadiusR => &["p", "r"],
            Quantity::LowerModulusBound | Quantity::CircleFamilyModulus => &["p", "r1", "r2"],
            Quantity::ConnectingModulus | Quantity::AnnulusCapacity => &["q", "r1", "r2"],
            Quantity::ExtremalDensity => &["p", "r"],
        }
    }

    pub fn optional(&self) -> &'static [&'static str] {
        match self {
            Quantity::CircleFamilyModulus | Quantity::ConnectingModulus | Quantity::AnnulusCapacity => &[],
            Quantity::ExtremalDensity => &["Q", "alpha", "theta"],
            _ => &WEIGHT_KEYS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComputeOutput {
    pub value: f64,
    pub error_bound: f64,
}

impl ComputeOutput {
    fn exact(value: f64) -> Self {
        Self { value, error_bound: 0.0 }
    }
}

struct Args {
    values: BTreeMap<String, f64>,
}

impl Args {
    fn parse(quantity: Quantity, args: &[String]) -> Result<Self> {
        let mut values = BTreeMap::new();
        let allowed: Vec<&str> = quantity.required().iter().chain(quantity.optional()).copied().collect();
        let usage = || format!("required: {}; optional: {}", quantity.required().join(" "), quantity.optional().join(" "));
        for arg in args {
            let (k, v) = arg
                .split_once('=')
                .ok_or_else(|| Error::Validation(format!("expected key=value, got {arg:?}; {}", usage())))?;
            if !allowed.contains(&k) {
                return Err(Error::Validation(format!("unknown parameter {k:?} for {}; {}", quantity.as_str(), usage())));
            }
            let v: f64 = v.parse().map_err(|_| Error::Validation(format!("parameter {k} is not a number: {v:?}")))?;
            values.insert(k.to_string(), v);
        }
        let missing: Vec<&str> = quantity.required().iter().copied().filter(|k| !values.contains_key(*k)).collect();
        if !missing.is_empty() {
            return Err(Error::Validation(format!("missing parameter(s) {}; {}", missing.join(" "), usage())));
        }
        if values.contains_key("Q") && values.contains_key("alpha") {
            return Err(Error::Validation("give either Q or alpha, not both".into()));
        }
        Ok(Self { values })
    }

    fn get(&self, k: &str) -> f64 {
        self.values[k]
    }

    fn p(&self) -> Result<ExponentP> {
        ExponentP::new(self.get("p"))
    }

    fn weight(&self, p: ExponentP) -> Result<QField> {
        match (self.values.get("Q"), self.values.get("alpha")) {
            (_, Some(&alpha)) => {
                let map = if alpha == 1.0 { RadialMap::identity() } else { radial_power_map(alpha)? };
                Ok(kp_field(&map, p))
            }
            (Some(&q), None) => QField::constant(q),
            (None, None) => QField::constant(1.0),
        }
    }
}

/// One-shot evaluation of `quantity` from `key=value` arguments. The weight defaults to
/// `Q ≡ 1`.
pub fn compute(quantity: Quantity, args: &[String], spec: &QuadratureSpec) -> Result<ComputeOutput> {
    let a = Args::parse(quantity, args)?;
    Ok(match quantity {
        Quantity::RingNorm => {
            let p = a.p()?;
            let e = ring_norm(&a.weight(p)?, PlanePoint::ORIGIN, a.get("r"), p, spec)?;
            ComputeOutput { value: e.value, error_bound: e.error_bound }
        }
        Quantity::LowerModulusBound => {
            let p = a.p()?;
            let annulus = Annulus::centered(a.get("r1"), a.get("r2"))?;
            let b = lower_modulus_bound(&a.weight(p)?, annulus, p, spec)?;
            ComputeOutput { value: b.value, error_bound: b.error_bound }
        }
        Quantity::CircleFamilyModulus => {
            ComputeOutput::exact(circle_family_modulus(Annulus::centered(a.get("r1"), a.get("r2"))?, a.p()?))
        }
        Quantity::ConnectingModulus => {
            ComputeOutput::exact(connecting_modulus_annulus(Annulus::centered(a.get("r1"), a.get("r2"))?, a.get("q"))?)
        }
        Quantity::AnnulusCapacity => {
            let cond = RingCondenser::new(PlanePoint::ORIGIN, a.get("r1"), a.get("r2"))?;
            ComputeOutput::exact(annulus_capacity(&cond, a.get("q"))?)
        }
        Quantity::AreaBound => {
            let p = a.p()?;
            let b = area_bound(&AreaBoundParams { p, field: a.weight(p)?, r: a.get("r") }, spec)?;
            ComputeOutput { value: b.value, error_bound: b.error_bound }
        }
        Quantity::PointRadiusR => {
            let p = a.p()?;
            let e = point_radius_r(p, &a.weight(p)?, a.get("r"), spec)?;
            ComputeOutput { value: e.value, error_bound: e.error_bound }
        }
        Quantity::ExtremalDensity => {
            let p = a.p()?;
            let theta = a.values.get("theta").copied().unwrap_or(0.0);
            let z = PlanePoint::polar(PlanePoint::ORIGIN, a.get("r"), theta);
            ComputeOutput::exact(extremal_density(&a.weight(p)?, PlanePoint::ORIGIN, p, z, spec)?)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(q: &str, args: &[&str]) -> Result<ComputeOutput> {
        let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        compute(Quantity::parse(q)?, &args, &QuadratureSpec::default())
    }

    #[test]
    fn examples() {
        let cap = run("annulus_capacity", &["q=2", "r1=0.5", "r2=1"]).unwrap().value;
        assert!((cap - 9.064720284).abs() < 1e-9);
        let norm = run("ring_norm", &["p=3", "r=1"]).unwrap().value;
        assert!((norm - 39.478417604).abs() < 1e-8);
        let area = run("area_bound", &["p=2", "r=0.5", "Q=1"]).unwrap().value;
        assert!((area - 0.7853981634).abs() < 1e-10);
        let lower = run("lower_modulus_bound", &["p=2", "r1=0.5", "r2=1"]).unwrap().value;
        assert!((lower - 2f64.ln() / std::f64::consts::TAU).abs() < 1e-10);
        let rho = run("extremal_density", &["p=2", "r=0.5"]).unwrap().value;
        assert!((rho - 1.0 / std::f64::consts::PI).abs() < 1e-10);
        let big_r = run("point_radius_r", &["p=3", "r=0.4", "alpha=1"]).unwrap().value;
        assert!((big_r - 0.4).abs() < 1e-9);
    }

    #[test]
    fn usage_errors_list_keys() {
        match run("annulus_capacity", &["q=2", "r1=0.5"]) {
            Err(Error::Validation(msg)) => assert!(msg.contains("missing parameter(s) r2") && msg.contains("required: q r1 r2")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(run("ring_norm", &["p=3", "r=1", "x=2"]), Err(Error::Validation(_))));
        assert!(matches!(run("ring_norm", &["p=3", "r"]), Err(Error::Validation(_))));
        assert!(matches!(run("volume", &[]), Err(Error::Validation(_))));
        assert!(run("ring_norm", &["p=3", "r=0.5", "Q=1", "alpha=2"]).is_err());
    }
}
