//! Serializable forms of verdicts, witnesses and estimates.
//!
//! Points are bitstrings with argument 1 leftmost; argument numbers start
//! at 1. (Truth-table files use a different convention: argument 1 is the
//! least-significant bit of the table index.)

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::distance::DependencySet;
use crate::error::{Error, Result};
use crate::point::Assignment;
use crate::testers::{Answer, EstimateResult, Verdict};
use crate::witness::{DependencyWitness, PointPair, RestrictedPair, Witness};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub kind: String,
    /// The two points; for restricted kinds these live in the reduced cube
    /// over `indices`.
    pub points: Vec<String>,
    /// Values observed when the points were queried.
    pub values: Vec<u8>,
    /// `arg-dependency`: the argument found. Restricted kinds: the free
    /// arguments.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub indices: Vec<usize>,
    /// Values fixed on the remaining arguments (restricted kinds).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assignment: Option<BTreeMap<usize, u8>>,
    /// Restricted points lifted to full arity; informational only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lifted: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dependencies: Vec<WitnessRecord>,
}

fn bit(b: bool) -> u8 {
    u8::from(b)
}

fn pair_record(kind: &str, p: &PointPair) -> WitnessRecord {
    WitnessRecord {
        kind: kind.to_string(),
        points: vec![p.x.to_string(), p.y.to_string()],
        values: vec![bit(p.fx), bit(p.fy)],
        indices: Vec::new(),
        assignment: None,
        lifted: None,
        dependencies: Vec::new(),
    }
}

fn dependency_record(d: &DependencyWitness) -> WitnessRecord {
    WitnessRecord {
        indices: vec![d.index + 1],
        ..pair_record("arg-dependency", &d.pair)
    }
}

fn restricted_record(kind: &str, r: &RestrictedPair) -> WitnessRecord {
    let lifted = r.lifted().map(|(x, y)| vec![x.to_string(), y.to_string()]);
    WitnessRecord {
        indices: r.free_args().iter().map(|i| i + 1).collect(),
        assignment: Some(r.assignment.iter().map(|(i, v)| (i + 1, bit(v))).collect()),
        lifted,
        ..pair_record(kind, &r.pair)
    }
}

impl From<&Witness> for WitnessRecord {
    fn from(w: &Witness) -> Self {
        match w {
            Witness::NonSymmetry(p) | Witness::NonConstancy(p) => pair_record(w.kind(), p),
            Witness::ArgDependency(d) => dependency_record(d),
            Witness::RestrictedNonSymmetry(r) => restricted_record(w.kind(), r),
            Witness::QuasiAsymmetry {
                dependencies,
                restricted,
            } => WitnessRecord {
                dependencies: dependencies.iter().map(dependency_record).collect(),
                ..restricted_record(w.kind(), restricted)
            },
        }
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Usage(format!("malformed witness: {}", msg.into()))
}

fn parse_bit(v: u8) -> Result<bool> {
    match v {
        0 => Ok(false),
        1 => Ok(true),
        _ => Err(bad(format!("value {v} is not a bit"))),
    }
}

impl WitnessRecord {
    fn pair(&self) -> Result<PointPair> {
        let [x, y] = self.points.as_slice() else {
            return Err(bad("expected exactly two points"));
        };
        let [fx, fy] = self.values.as_slice() else {
            return Err(bad("expected exactly two values"));
        };
        Ok(PointPair {
            x: x.parse()?,
            y: y.parse()?,
            fx: parse_bit(*fx)?,
            fy: parse_bit(*fy)?,
        })
    }

    fn dependency(&self) -> Result<DependencyWitness> {
        if self.kind != "arg-dependency" {
            return Err(bad(format!(
                "expected an arg-dependency, found {}",
                self.kind
            )));
        }
        let [index] = self.indices.as_slice() else {
            return Err(bad("arg-dependency needs exactly one index"));
        };
        if *index == 0 {
            return Err(bad("argument numbers start at 1"));
        }
        Ok(DependencyWitness {
            index: index - 1,
            pair: self.pair()?,
        })
    }

    fn restricted(&self) -> Result<RestrictedPair> {
        let raw = self
            .assignment
            .as_ref()
            .ok_or_else(|| bad("restricted witness without an assignment"))?;
        let mut assignment = Assignment::new();
        for (&k, &v) in raw {
            if k == 0 {
                return Err(bad("argument numbers start at 1"));
            }
            assignment.insert(k - 1, parse_bit(v)?);
        }
        let r = RestrictedPair {
            assignment,
            pair: self.pair()?,
        };
        let declared: DependencySet = self
            .indices
            .iter()
            .map(|&i| {
                i.checked_sub(1)
                    .ok_or_else(|| bad("argument numbers start at 1"))
            })
            .collect::<Result<_>>()?;
        if declared != r.free_args() || declared.len() != self.indices.len() {
            return Err(bad("indices must list exactly the arguments left free"));
        }
        Ok(r)
    }

    pub fn to_witness(&self) -> Result<Witness> {
        Ok(match self.kind.as_str() {
            "non-symmetry" => Witness::NonSymmetry(self.pair()?),
            "non-constancy" => Witness::NonConstancy(self.pair()?),
            "arg-dependency" => Witness::ArgDependency(self.dependency()?),
            "restricted-non-symmetry" => Witness::RestrictedNonSymmetry(self.restricted()?),
            "quasi-asymmetry" => Witness::QuasiAsymmetry {
                dependencies: self
                    .dependencies
                    .iter()
                    .map(WitnessRecord::dependency)
                    .collect::<Result<_>>()?,
                restricted: self.restricted()?,
            },
            other => return Err(bad(format!("unknown kind {other:?}"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub eps: f64,
    pub delta: f64,
}

/// One tester run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub test: String,
    pub verdict: String,
    pub queries: u64,
    /// Repetition count of the outer loop.
    pub k: u64,
    pub query_cap: u64,
    pub seed: u64,
    /// `None` for single basic steps.
    pub params: Option<Params>,
    pub witness: Option<WitnessRecord>,
}

impl VerdictRecord {
    pub fn new(
        test: &str,
        v: &Verdict,
        k: u64,
        query_cap: u64,
        seed: u64,
        params: Option<Params>,
    ) -> Self {
        Self {
            test: test.to_string(),
            verdict: match v.answer {
                Answer::Yes => "yes",
                Answer::No => "no",
            }
            .to_string(),
            queries: v.queries,
            k,
            query_cap,
            seed,
            params,
            witness: v.witness.as_ref().map(WitnessRecord::from),
        }
    }
}

/// One dependency-estimate run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    /// Arguments found, numbered from 1, increasing.
    pub dependencies: Vec<usize>,
    /// One `arg-dependency` witness per argument, in discovery order.
    pub evidence: Vec<WitnessRecord>,
    pub queries: u64,
    pub query_cap: u64,
    pub seed: u64,
    pub params: Params,
}

impl EstimateRecord {
    pub fn new(r: &EstimateResult, query_cap: u64, seed: u64, params: Params) -> Self {
        Self {
            dependencies: r.set.iter().map(|i| i + 1).collect(),
            evidence: r.evidence.iter().map(dependency_record).collect(),
            queries: r.queries,
            query_cap,
            seed,
            params,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(x: &str, y: &str, fx: bool) -> PointPair {
        PointPair {
            x: x.parse().unwrap(),
            y: y.parse().unwrap(),
            fx,
            fy: !fx,
        }
    }

    #[test]
    fn quasi_record_round_trip() {
        let w = Witness::QuasiAsymmetry {
            dependencies: vec![
                DependencyWitness {
                    index: 0,
                    pair: pp("1000", "0000", true),
                },
                DependencyWitness {
                    index: 3,
                    pair: pp("0001", "0000", true),
                },
            ],
            restricted: RestrictedPair {
                assignment: [(1, true), (2, false)].into_iter().collect(),
                pair: pp("10", "01", true),
            },
        };
        let rec = WitnessRecord::from(&w);
        assert_eq!(rec.indices, vec![1, 4]);
        assert_eq!(
            rec.lifted.as_ref().unwrap(),
            &vec!["1100".to_string(), "0101".to_string()]
        );
        let json = serde_json::to_string(&rec).unwrap();
        let back: WitnessRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_witness().unwrap(), w);
    }

    #[test]
    fn rejects_inconsistent_records() {
        let mut rec = WitnessRecord::from(&Witness::ArgDependency(DependencyWitness {
            index: 2,
            pair: pp("001", "000", true),
        }));
        assert_eq!(rec.indices, vec![3]);
        rec.indices = vec![0];
        assert!(rec.to_witness().is_err());
        rec.indices = vec![3];
        rec.values = vec![1, 2];
        assert!(rec.to_witness().is_err());
        rec.values = vec![1, 0];
        rec.kind = "mystery".into();
        assert!(rec.to_witness().is_err());
    }
}
