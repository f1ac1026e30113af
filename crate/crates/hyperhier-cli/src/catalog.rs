//! Solution catalog: named backgrounds stored as JSON.

use crate::error::CliError;
use hyperhier_core::heavenly::{
    metric_from_tetrad, plane_wave_metric, tetrad_from_omega, tetrad_from_theta, tetrad_plane_wave,
    FirstPotential, MetricField, SecondPotential, Tetrad,
};
use hyperhier_core::{parse_expression, BigRational, Chart, Expr};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

const SHIPPED: &str = include_str!("../catalog/catalog.json");

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Entry {
    pub name: String,
    #[serde(default)]
    pub aliases: Vec<String>,
    pub chart: String,
    #[serde(default)]
    pub potential: Option<String>,
    #[serde(default)]
    pub metric: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
    #[serde(default)]
    pub flat: bool,
}

#[derive(Debug, Clone)]
pub struct Catalog {
    pub entries: Vec<Entry>,
}

impl Catalog {
    pub fn shipped() -> Catalog {
        Catalog::from_json(SHIPPED).expect("shipped catalog parses")
    }

    pub fn from_json(text: &str) -> Result<Catalog, CliError> {
        let entries: Vec<Entry> =
            serde_json::from_str(text).map_err(|e| CliError::Config(format!("catalog: {e}")))?;
        for e in &entries {
            if e.potential.is_some() == e.metric.is_some() {
                return Err(CliError::Config(format!(
                    "catalog entry `{}` needs exactly one of potential, metric",
                    e.name
                )));
            }
        }
        Ok(Catalog { entries })
    }

    pub fn find(&self, name: &str) -> Result<&Entry, CliError> {
        self.entries
            .iter()
            .find(|e| e.name == name || e.aliases.iter().any(|a| a == name))
            .ok_or_else(|| CliError::Config(format!("unknown background `{name}`")))
    }
}

/// A catalog entry with its parameters bound.
#[derive(Debug, Clone)]
pub enum Geometry {
    Second(SecondPotential),
    First(FirstPotential),
    PlaneWave(Expr),
}

#[derive(Debug, Clone)]
pub struct Background {
    pub name: String,
    pub flat: bool,
    pub text: String,
    pub sigma: Option<BigRational>,
    pub geometry: Geometry,
}

pub fn parse_rational(text: &str) -> Result<BigRational, CliError> {
    text.trim()
        .parse::<BigRational>()
        .map_err(|_| CliError::Config(format!("not a rational number: `{text}`")))
}

impl Background {
    /// Binds `sigma` and `f`; `f` replaces the plane-wave profile, or the
    /// potential of a potential entry.
    pub fn resolve(
        entry: &Entry,
        sigma: Option<&BigRational>,
        f: Option<&str>,
    ) -> Result<Background, CliError> {
        let chart = Chart::from_tag(&entry.chart)
            .ok_or_else(|| CliError::Config(format!("unknown chart `{}`", entry.chart)))?;
        let sigma = match sigma {
            Some(s) => Some(s.clone()),
            None => entry
                .params
                .get("sigma")
                .map(|s| parse_rational(s))
                .transpose()?,
        };
        let parse = |text: &str, chart: Chart| -> Result<Expr, CliError> {
            let e = parse_expression(text, chart)?;
            Ok(match &sigma {
                Some(s) => e.bind_sigma(s),
                None => e,
            })
        };
        let (text, geometry) = match (&entry.potential, &entry.metric) {
            (Some(p), None) => {
                let text = f.unwrap_or(p).to_string();
                let e = parse(&text, chart)?;
                let g = match chart {
                    Chart::Second => Geometry::Second(SecondPotential::new(e)),
                    Chart::First => Geometry::First(FirstPotential::new(e)),
                    other => {
                        return Err(CliError::Config(format!(
                            "potentials live on second-form or first-form charts, not {}",
                            other.tag()
                        )))
                    }
                };
                (text, g)
            }
            (None, Some(_)) if chart == Chart::PlaneWave => {
                let text = f
                    .map(str::to_string)
                    .or_else(|| entry.params.get("f").cloned())
                    .ok_or_else(|| CliError::Config("plane wave needs a profile f".into()))?;
                let e = parse(&text, Chart::PlaneWave)?;
                (text, Geometry::PlaneWave(e))
            }
            _ => {
                return Err(CliError::Config(format!(
                    "catalog entry `{}`: unsupported metric form",
                    entry.name
                )))
            }
        };
        let unbound = match &geometry {
            Geometry::Second(t) => t.theta.has_sigma(),
            Geometry::First(o) => o.omega.has_sigma(),
            Geometry::PlaneWave(e) => e.has_sigma(),
        };
        if unbound {
            return Err(CliError::Config(format!("`{}` needs --sigma", entry.name)));
        }
        Ok(Background {
            name: entry.name.clone(),
            flat: entry.flat && f.is_none(),
            text,
            sigma,
            geometry,
        })
    }

    pub fn chart(&self) -> Chart {
        match self.geometry {
            Geometry::Second(_) => Chart::Second,
            Geometry::First(_) => Chart::First,
            Geometry::PlaneWave(_) => Chart::PlaneWave,
        }
    }

    /// The scalar from which metric components are built.
    pub fn source(&self) -> &Expr {
        match &self.geometry {
            Geometry::Second(t) => &t.theta,
            Geometry::First(o) => &o.omega,
            Geometry::PlaneWave(f) => f,
        }
    }

    /// Derivative order of [`Background::source`] entering the metric.
    pub fn metric_order(&self) -> usize {
        match self.geometry {
            Geometry::PlaneWave(_) => 0,
            _ => 2,
        }
    }

    pub fn tetrad(&self) -> Tetrad {
        match &self.geometry {
            Geometry::Second(t) => tetrad_from_theta(t),
            Geometry::First(o) => tetrad_from_omega(o),
            Geometry::PlaneWave(f) => tetrad_plane_wave(f),
        }
    }

    pub fn metric(&self) -> MetricField {
        match &self.geometry {
            Geometry::PlaneWave(f) => plane_wave_metric(f),
            _ => metric_from_tetrad(&self.tetrad()),
        }
    }

    pub fn second(&self) -> Result<&SecondPotential, CliError> {
        match &self.geometry {
            Geometry::Second(t) => Ok(t),
            _ => Err(CliError::Config(format!(
                "`{}` is not a second-form potential",
                self.name
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_entries_resolve() {
        let c = Catalog::shipped();
        for name in [
            "flat-second",
            "flat-first",
            "sparling-tod",
            "st",
            "phi2-eguchi-hanson",
            "plane-wave",
            "polynomial",
        ] {
            let e = c.find(name).unwrap();
            Background::resolve(e, None, None).unwrap();
        }
        assert!(c.find("nope").is_err());
    }

    #[test]
    fn sigma_is_required_when_unbound() {
        let c = Catalog::from_json(
            r#"[{"name": "s", "chart": "second-form", "potential": "sigma/(w*x+z*y)"}]"#,
        )
        .unwrap();
        assert!(Background::resolve(c.find("s").unwrap(), None, None).is_err());
        let s = parse_rational("-3/2").unwrap();
        assert!(Background::resolve(c.find("s").unwrap(), Some(&s), None).is_ok());
    }

    #[test]
    fn f_overrides_profile() {
        let c = Catalog::shipped();
        let b = Background::resolve(c.find("plane-wave").unwrap(), None, Some("q*z")).unwrap();
        assert_eq!(b.text, "q*z");
        assert!(Background::resolve(c.find("plane-wave").unwrap(), None, Some("q*")).is_err());
    }
}
