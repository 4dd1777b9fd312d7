//! Scenario files: TOML whose keys are the fields of [`Scenario`].

use std::path::Path;

use machzero::fixtures;
use machzero::glimm::{default_weights, estimate_constants};
use machzero::Scenario;

use crate::CliError;

/// Reads and validates a scenario. `kappa` replaces the file's value; one of
/// the two must be present.
pub fn parse_scenario(path: &Path, kappa: Option<f64>) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    scenario_from_str(&text, kappa)
}

pub fn scenario_from_str(text: &str, kappa: Option<f64>) -> Result<Scenario, CliError> {
    let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| CliError::Parse(e.to_string()))?;
    if let Some(k) = kappa {
        table.insert("kappa".into(), toml::Value::Float(k));
    }
    if !table.contains_key("kappa") {
        return Err(CliError::Validation {
            field: "kappa".into(),
            message: "missing; set it in the file or pass --kappa".into(),
        });
    }
    let de = toml::Value::Table(table);
    let s: Scenario = serde_path_to_error::deserialize(de).map_err(|e| {
        let field = match e.path().to_string() {
            p if p == "." => "scenario".to_string(),
            p => p,
        };
        CliError::Validation {
            field,
            message: e.inner().to_string(),
        }
    })?;
    check(&s)?;
    Ok(s)
}

/// Built-in data: `standard` or `admissible:<seed>`.
pub fn fixture(name: &str, kappa: Option<f64>) -> Result<Scenario, CliError> {
    let bad = || CliError::Validation {
        field: "fixture".into(),
        message: format!("unknown fixture {name:?}; expected standard or admissible:<seed>"),
    };
    let k = kappa.unwrap_or(0.2);
    let s = match name.split_once(':') {
        None if name == "standard" => fixtures::standard(k),
        Some(("admissible", seed)) => {
            let seed: u64 = seed.parse().map_err(|_| bad())?;
            let base = fixtures::standard(k);
            let (c_int, c_refl) = estimate_constants(&base.gas, &base.liquid_base, base.p_bar, 0.95, 1.05, &[k])?;
            fixtures::random_admissible(seed, k, &default_weights(c_int, c_refl, 1.0)?)?
        }
        _ => return Err(bad()),
    };
    check(&s)?;
    Ok(s)
}

fn check(s: &Scenario) -> Result<(), CliError> {
    s.validate().map_err(|e| match e {
        machzero::Error::InadmissibleScenario(msg) => CliError::Validation {
            field: msg.split(' ').next().unwrap_or("").to_string(),
            message: msg,
        },
        other => CliError::Validation {
            field: "initial".into(),
            message: other.to_string(),
        },
    })?;
    Ok(())
}

/// Comma-separated κ list, e.g. `0.2,0.1,0.05`.
pub fn parse_kappas(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|x| {
            x.trim().parse::<f64>().map_err(|_| CliError::Validation {
                field: "kappas".into(),
                message: format!("{x:?} is not a number"),
            })
        })
        .collect()
}
