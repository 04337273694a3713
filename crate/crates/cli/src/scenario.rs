//! Scenario files: which CM structure, which polarization, which classes.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;
use twistor_cm_core::exactalg::{parse_rational, FieldElement, Poly, Rational};
use twistor_cm_core::hodge::{
    build_cm_structure, find_xi, norm_one_primitive, CmField, CmHodgeStructure, DEFAULT_PRECISION_CAP,
};

/// Environment variable for the default precision cap.
pub const PRECISION_ENV: &str = "TWISTOR_CM_PRECISION_CAP";

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid field `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error("cannot build the CM structure: {0}")]
    Build(#[from] twistor_cm_core::Error),
}

fn invalid(field: &'static str, reason: impl Into<String>) -> ScenarioError {
    ScenarioError::Invalid { field, reason: reason.into() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Preset(String),
    /// Monic-or-not modulus, coefficients from the constant term up, and
    /// optionally the image of `X` under complex conjugation.
    Modulus { coeffs: Vec<Rational>, conj: Option<Vec<Rational>> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementSpec {
    Search,
    /// Coordinates in the power basis of the input field.
    Coords(Vec<Rational>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    Cm,
    Picard,
    Equator,
    Period,
}

impl Check {
    pub const ALL: [Check; 4] = [Check::Cm, Check::Picard, Check::Equator, Check::Period];

    pub fn as_str(self) -> &'static str {
        match self {
            Check::Cm => "cm",
            Check::Picard => "picard",
            Check::Equator => "equator",
            Check::Period => "period",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parses one check name; `all` is handled by [`parse_checks`].
impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "cm" => Ok(Check::Cm),
            "picard" => Ok(Check::Picard),
            "equator" => Ok(Check::Equator),
            "period" => Ok(Check::Period),
            other => Err(format!("unknown check {other:?}")),
        }
    }
}

pub fn parse_checks<S: AsRef<str>>(names: &[S]) -> Result<BTreeSet<Check>, String> {
    let mut out = BTreeSet::new();
    for n in names {
        match n.as_ref() {
            "all" => out.extend(Check::ALL),
            other => {
                out.insert(other.parse()?);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioSpec {
    pub name: String,
    pub field: FieldSpec,
    pub alpha: ElementSpec,
    pub xi: ElementSpec,
    pub d: Rational,
    pub classes: Vec<Vec<Rational>>,
    pub height: Option<u32>,
    pub checks: BTreeSet<Check>,
    pub precision_cap: Option<u32>,
    pub search_budget: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: Option<String>,
    preset: Option<String>,
    modulus: Option<Vec<toml::Value>>,
    conj: Option<Vec<toml::Value>>,
    alpha: Option<toml::Value>,
    xi: Option<toml::Value>,
    d: Option<toml::Value>,
    height: Option<i64>,
    classes: Option<Vec<Vec<toml::Value>>>,
    checks: Option<Vec<String>>,
    precision_cap: Option<i64>,
    search_budget: Option<i64>,
}

/// An exact rational from an integer, a `"p/q"` string or a `[p, q]` pair.
/// Floating point is refused.
pub fn rational_from_toml(v: &toml::Value) -> Result<Rational, String> {
    match v {
        toml::Value::Integer(n) => Ok(Rational::from_integer((*n).into())),
        toml::Value::String(s) => parse_rational(s).map_err(|e| e.to_string()),
        toml::Value::Array(pq) if pq.len() == 2 => match (&pq[0], &pq[1]) {
            (toml::Value::Integer(p), toml::Value::Integer(q)) if *q != 0 => {
                Ok(Rational::new((*p).into(), (*q).into()))
            }
            (toml::Value::Integer(_), toml::Value::Integer(_)) => Err("zero denominator".into()),
            _ => Err("a [p, q] pair needs two integers".into()),
        },
        toml::Value::Float(f) => Err(format!("floating point {f} is not exact; write \"p/q\"")),
        other => Err(format!("expected a rational, found {other}")),
    }
}

fn rationals(field: &'static str, vs: &[toml::Value]) -> Result<Vec<Rational>, ScenarioError> {
    vs.iter().map(|v| rational_from_toml(v).map_err(|e| invalid(field, e))).collect()
}

fn element_spec(field: &'static str, v: Option<&toml::Value>) -> Result<ElementSpec, ScenarioError> {
    match v {
        None => Ok(ElementSpec::Search),
        Some(toml::Value::String(s)) if s == "search" => Ok(ElementSpec::Search),
        Some(toml::Value::Array(a)) => Ok(ElementSpec::Coords(rationals(field, a)?)),
        Some(other) => Err(invalid(field, format!("expected \"search\" or a coordinate array, found {other}"))),
    }
}

impl ScenarioSpec {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let raw: RawScenario = toml::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
        let field = match (raw.preset, raw.modulus) {
            (Some(p), None) => {
                if raw.conj.is_some() {
                    return Err(invalid("conj", "only allowed together with `modulus`"));
                }
                FieldSpec::Preset(p)
            }
            (None, Some(m)) => FieldSpec::Modulus {
                coeffs: rationals("modulus", &m)?,
                conj: raw.conj.as_deref().map(|c| rationals("conj", c)).transpose()?,
            },
            (Some(_), Some(_)) => return Err(invalid("preset", "give either `preset` or `modulus`, not both")),
            (None, None) => return Err(invalid("preset", "one of `preset` or `modulus` is required")),
        };
        let d = match raw.d {
            None => return Err(invalid("d", "missing")),
            Some(v) => rational_from_toml(&v).map_err(|e| invalid("d", e))?,
        };
        if !d.is_integer() || d <= Rational::from_integer(0.into()) {
            return Err(invalid("d", format!("must be a positive integer, got {d}")));
        }
        let height = match raw.height {
            None => None,
            Some(h) if (0..=64).contains(&h) => Some(h as u32),
            Some(h) => return Err(invalid("height", format!("must lie in 0..=64, got {h}"))),
        };
        let classes = raw
            .classes
            .unwrap_or_default()
            .iter()
            .map(|c| rationals("classes", c))
            .collect::<Result<Vec<_>, _>>()?;
        if classes.is_empty() && height.is_none() {
            return Err(invalid("classes", "give explicit `classes`, a `height` bound, or both"));
        }
        let checks = match raw.checks {
            None => Check::ALL.into_iter().collect(),
            Some(c) => parse_checks(&c).map_err(|e| invalid("checks", e))?,
        };
        let precision_cap = match raw.precision_cap {
            None => None,
            Some(b) if (64..=1 << 20).contains(&b) => Some(b as u32),
            Some(b) => return Err(invalid("precision_cap", format!("must lie in 64..=1048576 bits, got {b}"))),
        };
        let search_budget = match raw.search_budget {
            None => 2000,
            Some(b) if b > 0 => b as usize,
            Some(b) => return Err(invalid("search_budget", format!("must be positive, got {b}"))),
        };
        let name = raw.name.unwrap_or_else(|| match &field {
            FieldSpec::Preset(p) => p.clone(),
            FieldSpec::Modulus { .. } => "custom".into(),
        });
        Ok(ScenarioSpec {
            name,
            field,
            alpha: element_spec("alpha", raw.alpha.as_ref())?,
            xi: element_spec("xi", raw.xi.as_ref())?,
            d,
            classes,
            height,
            checks,
            precision_cap,
            search_budget,
        })
    }

    pub fn cm_field(&self) -> Result<CmField, ScenarioError> {
        match &self.field {
            FieldSpec::Preset(p) => CmField::preset(p).map_err(|e| invalid("preset", e.to_string())),
            FieldSpec::Modulus { coeffs, conj } => {
                let m = Poly::new(coeffs.clone());
                let c = conj.as_ref().map(|c| Poly::new(c.clone()));
                CmField::new(&self.name, &m, c.as_ref()).map_err(|e| invalid("modulus", e.to_string()))
            }
        }
    }

    /// Builds the CM structure; `seed` orders the searches for `alpha` and
    /// `xi` (0 is the canonical order).
    pub fn build(&self, seed: u64, cap_bits: u32) -> Result<CmHodgeStructure, ScenarioError> {
        let k = self.cm_field()?;
        let element = |name: &'static str, cs: &[Rational]| -> Result<FieldElement, ScenarioError> {
            if cs.len() > k.degree() {
                return Err(invalid(name, format!("{} coordinates for a field of degree {}", cs.len(), k.degree())));
            }
            let mut v = cs.to_vec();
            v.resize(k.degree(), Rational::from_integer(0.into()));
            Ok(k.field().element(v))
        };
        let alpha = match &self.alpha {
            ElementSpec::Search => norm_one_primitive(&k, self.search_budget, seed)?,
            ElementSpec::Coords(c) => element("alpha", c)?,
        };
        let xi = match &self.xi {
            ElementSpec::Search => find_xi(&k, &alpha, self.search_budget, seed, cap_bits)?,
            ElementSpec::Coords(c) => element("xi", c)?,
        };
        Ok(build_cm_structure(&k, &alpha, &xi, cap_bits)?)
    }
}

pub fn load_scenario(path: &Path) -> Result<ScenarioSpec, ScenarioError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ScenarioError::Io { path: path.display().to_string(), source })?;
    ScenarioSpec::parse(&text)
}

/// Flag, then environment, then the built-in default.
pub fn resolve_precision_cap(flag: Option<u32>, scenario: Option<u32>) -> Result<u32, String> {
    if let Some(b) = flag {
        return Ok(b);
    }
    if let Some(b) = scenario {
        return Ok(b);
    }
    match std::env::var(PRECISION_ENV) {
        Ok(v) => v.trim().parse::<u32>().map_err(|_| format!("{PRECISION_ENV}={v:?} is not a bit count")),
        Err(_) => Ok(DEFAULT_PRECISION_CAP),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_scenario() {
        let s = ScenarioSpec::parse("preset = \"gaussian\"\nd = 2\nheight = 3\n").unwrap();
        assert_eq!(s.field, FieldSpec::Preset("gaussian".into()));
        assert_eq!(s.height, Some(3));
        assert_eq!(s.checks.len(), 4);
        assert!(s.build(0, DEFAULT_PRECISION_CAP).is_ok());
    }

    #[test]
    fn rejections() {
        let e = ScenarioSpec::parse("preset = \"gaussian\"\nd = 0\nheight = 1\n").unwrap_err();
        assert!(matches!(e, ScenarioError::Invalid { field: "d", .. }), "{e}");
        let e = ScenarioSpec::parse("preset = \"gaussian\"\nd = 2\nclasses = [[\"1/0\", 0, 1]]\n").unwrap_err();
        assert!(matches!(e, ScenarioError::Invalid { field: "classes", .. }), "{e}");
        let e = ScenarioSpec::parse("preset = \"gaussian\"\nd = 2.5\nheight = 1\n").unwrap_err();
        assert!(matches!(e, ScenarioError::Invalid { field: "d", .. }), "{e}");
        let e = ScenarioSpec::parse("preset = \"gaussian\"\nd = 2\n").unwrap_err();
        assert!(matches!(e, ScenarioError::Invalid { field: "classes", .. }), "{e}");
        let e = ScenarioSpec::parse("preset = \"gaussian\"\nd = 2\nheight = 1\nbogus = 1\n").unwrap_err();
        assert!(matches!(e, ScenarioError::Parse(_)), "{e}");
        let e = ScenarioSpec::parse("preset = \"gaussian\"\nd = 2\nheight = 1\nchecks = [\"nope\"]\n").unwrap_err();
        assert!(matches!(e, ScenarioError::Invalid { field: "checks", .. }), "{e}");
    }

    #[test]
    fn exact_rationals() {
        let s = ScenarioSpec::parse(
            "modulus = [2, 0, 1]\nxi = [\"1/3\"]\nalpha = \"search\"\nd = \"4\"\nclasses = [[[1, 2], 0, 1]]\n",
        )
        .unwrap();
        assert_eq!(s.classes[0][0], Rational::new(1.into(), 2.into()));
        assert_eq!(s.d, Rational::from_integer(4.into()));
        let h = s.build(0, DEFAULT_PRECISION_CAP).unwrap();
        assert_eq!(h.rank(), 2);
    }
}
