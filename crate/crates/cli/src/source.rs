//! Turns the source flags into a [`FunctionSpec`].

use std::io::Read;
use std::path::Path;

use qsym::{FunctionSpec, TruthTable};

use crate::args::{Family, SourceArgs};
use crate::CliError;

pub fn read_input(path: &Path) -> Result<String, CliError> {
    let io = |e: std::io::Error| CliError::Usage(format!("cannot read {}: {e}", path.display()));
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

/// Parses `1,3,4` (or the empty string) into argument numbers.
pub fn parse_list(flag: &str, s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| CliError::Usage(format!("--{flag}: {t:?} is not an argument number")))
        })
        .collect()
}

fn require<T: Copy>(v: Option<T>, flag: &str, family: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--family {family} needs --{flag}")))
}

fn family_spec(family: Family, a: &SourceArgs) -> Result<FunctionSpec, CliError> {
    let name = family_name(family);
    let n = require(a.n, "n", name)?;
    Ok(match family {
        Family::Const => FunctionSpec::Const {
            n,
            value: match require(a.value, "value", name)? {
                0 => false,
                1 => true,
                v => return Err(CliError::Usage(format!("--value must be 0 or 1, got {v}"))),
            },
        },
        Family::Dictator => FunctionSpec::Dictator {
            n,
            index: require(a.index, "index", name)?,
        },
        Family::Parity => FunctionSpec::Parity { n },
        Family::Majority => FunctionSpec::Majority { n },
        Family::Threshold => FunctionSpec::Threshold {
            n,
            t: require(a.t, "t", name)?,
        },
        Family::RandomTable => FunctionSpec::RandomTable {
            n,
            seed: a.family_seed,
        },
        Family::SymJunta => {
            let args = a
                .args
                .as_deref()
                .ok_or_else(|| CliError::Usage("--family sym-junta needs --args".into()))?;
            let levels = a
                .levels
                .as_deref()
                .ok_or_else(|| CliError::Usage("--family sym-junta needs --levels".into()))?;
            FunctionSpec::SymJunta {
                n,
                args: parse_list("args", args)?,
                levels: levels
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(CliError::Usage(format!("--levels: {c:?} is not 0 or 1"))),
                    })
                    .collect::<Result<_, _>>()?,
            }
        }
        Family::Perturbed => {
            let base = require(a.base, "base", name)?;
            if base == Family::Perturbed {
                return Err(CliError::Usage("--base cannot itself be perturbed".into()));
            }
            FunctionSpec::Perturbed {
                base: Box::new(family_spec(base, a)?),
                flips: require(a.flips, "flips", name)?,
                seed: a.family_seed,
            }
        }
    })
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Const => "const",
        Family::Dictator => "dictator",
        Family::Parity => "parity",
        Family::Majority => "majority",
        Family::Threshold => "threshold",
        Family::RandomTable => "random-table",
        Family::SymJunta => "sym-junta",
        Family::Perturbed => "perturbed",
    }
}

pub fn spec_from_args(a: &SourceArgs) -> Result<FunctionSpec, CliError> {
    if let Some(path) = &a.table {
        let text = read_input(path)?;
        let table = TruthTable::from_text(&text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        return Ok(FunctionSpec::Table { table });
    }
    if let Some(json) = &a.spec {
        return serde_json::from_str(json).map_err(|e| CliError::Usage(format!("--spec: {e}")));
    }
    match a.family {
        Some(f) => family_spec(f, a),
        None => Err(CliError::Usage(
            "give the function with --table, --family or --spec".into(),
        )),
    }
}
