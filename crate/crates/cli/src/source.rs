//! Turning command-line parameters or a saved file into a system.

use std::path::Path;

use pgnlab::families::{
    build_family_a, build_family_a_infinite, build_family_b, default_params_b, FamilyAParams,
    FamilyBParams, FamilyParams, InfiniteFamilyA,
};
use pgnlab::rational::{parse_rational, serde_frac, ExtendedRational, Rational};
use pgnlab::system::{PLSystem, ValidationReport};
use serde::{Deserialize, Serialize};

use crate::args::{Family, FamilyArgs, SourceArgs};
use crate::output::{Failure, Status, SCHEMA_VERSION};

/// Parameters of the infinite family A variant, enough to rebuild it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfiniteSpec {
    pub n: usize,
    #[serde(with = "serde_frac")]
    pub a: Rational,
    #[serde(with = "serde_frac")]
    pub q0: Rational,
    pub periods: usize,
}

/// The file written by `build`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemArtifact {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<FamilyParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub infinite: Option<InfiniteSpec>,
    pub system: PLSystem,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationReport>,
}

pub struct Source {
    pub system: PLSystem,
    pub params: Option<FamilyParams>,
    pub infinite: Option<(InfiniteSpec, InfiniteFamilyA)>,
}

impl Source {
    pub fn artifact(&self) -> SystemArtifact {
        SystemArtifact {
            schema_version: SCHEMA_VERSION,
            params: self.params.clone(),
            infinite: self.infinite.as_ref().map(|(spec, _)| spec.clone()),
            system: self.system.clone(),
            validation: Some(self.system.validate()),
        }
    }
}

pub fn fraction(flag: &str, text: &str) -> Result<Rational, Failure> {
    parse_rational(text).map_err(|e| Failure::invalid(format!("--{flag}: {e}")))
}

fn required<T: Clone>(value: &Option<T>, flag: &str) -> Result<T, Failure> {
    value
        .clone()
        .ok_or_else(|| Failure::invalid(format!("--{flag} is required")))
}

pub fn from_family(args: &FamilyArgs) -> Result<Source, Failure> {
    let family = args
        .family
        .ok_or_else(|| Failure::invalid("give --system FILE or --family A|B"))?;
    match family {
        Family::A => {
            let n = required(&args.n, "n")?;
            let omega_hat: ExtendedRational = required(&args.omega_hat, "omega-hat")?
                .parse()
                .map_err(|e| Failure::invalid(format!("--omega-hat: {e}")))?;
            let a = fraction("a", args.a.as_deref().unwrap_or("1"))?;
            let q0 = fraction("q0", args.q0.as_deref().unwrap_or("1"))?;
            if omega_hat.is_infinite() {
                let fam =
                    build_family_a_infinite(n, &a, &q0, args.periods).map_err(Failure::invalid)?;
                let spec = InfiniteSpec {
                    n,
                    a,
                    q0,
                    periods: args.periods,
                };
                return Ok(Source {
                    system: fam.system.clone(),
                    params: None,
                    infinite: Some((spec, fam)),
                });
            }
            let params = FamilyAParams::new(n, omega_hat, a, q0).map_err(Failure::invalid)?;
            let system = build_family_a(&params).map_err(Failure::invalid)?;
            Ok(Source {
                system,
                params: Some(FamilyParams::A(params)),
                infinite: None,
            })
        }
        Family::B => {
            let params = family_b_params(args.n, args.defaults, args.c.as_deref(), &args.coords)?;
            let system = build_family_b(&params).map_err(Failure::invalid)?;
            Ok(Source {
                system,
                params: Some(FamilyParams::B(params)),
                infinite: None,
            })
        }
    }
}

pub fn family_b_params(
    n: Option<usize>,
    defaults: bool,
    c: Option<&str>,
    coords: &[String],
) -> Result<FamilyBParams, Failure> {
    if defaults {
        let n = n.ok_or_else(|| Failure::invalid("--n is required with --defaults"))?;
        return default_params_b(n).map_err(Failure::invalid);
    }
    let c = c.ok_or_else(|| Failure::invalid("family B needs --defaults or --c with --coords"))?;
    let mut point = vec![fraction("c", c)?];
    for text in coords {
        point.push(fraction("coords", text)?);
    }
    if let Some(n) = n {
        if point.len() != n {
            return Err(Failure::invalid(format!(
                "n = {n} needs {} values in --coords, got {}",
                n - 1,
                coords.len()
            )));
        }
    }
    FamilyBParams::from_coordinates(&point).map_err(Failure::invalid)
}

pub fn load(path: &Path) -> Result<Source, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Failure::io(path, e))?;
    let artifact: SystemArtifact = if value.get("system").is_some() {
        serde_json::from_value(value).map_err(|e| Failure::io(path, e))?
    } else {
        let system: PLSystem = serde_json::from_value(value).map_err(|e| Failure::io(path, e))?;
        SystemArtifact {
            schema_version: SCHEMA_VERSION,
            params: None,
            infinite: None,
            system,
            validation: None,
        }
    };
    if artifact.schema_version != SCHEMA_VERSION {
        return Err(Failure::new(
            Status::Io,
            format!(
                "{}: schema version {} is not supported",
                path.display(),
                artifact.schema_version
            ),
        ));
    }
    let infinite = match artifact.infinite {
        Some(spec) => {
            let fam = build_family_a_infinite(spec.n, &spec.a, &spec.q0, spec.periods)
                .map_err(Failure::invalid)?;
            Some((spec, fam))
        }
        None => None,
    };
    Ok(Source {
        system: artifact.system,
        params: artifact.params,
        infinite,
    })
}

pub fn resolve(args: &SourceArgs) -> Result<Source, Failure> {
    match &args.system {
        Some(path) => load(path),
        None => from_family(&args.family),
    }
}
