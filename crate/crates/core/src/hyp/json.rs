//! JSON form of certificates. Loading rebuilds every node through the
//! constructors, compares the recorded code and norm, and then checks the
//! rebuilt certificate against its programs.

use serde::{Deserialize, Serialize};

use super::cert::{co_singleton, complement, constantize, row, u1, union_of, Cert, Shape};
use super::check::{in_i_report, InIFailure};
use crate::nat::Nat;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertJson {
    #[serde(with = "crate::nat::dec")]
    pub index: Nat,
    pub norm: u32,
    #[serde(flatten)]
    pub shape: ShapeJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum ShapeJson {
    Singleton {
        #[serde(with = "crate::nat::dec")]
        member: Nat,
    },
    Constantized {
        child: Box<CertJson>,
    },
    CoSingleton {
        #[serde(with = "crate::nat::dec")]
        excluded: Nat,
    },
    Union {
        children: Vec<CertJson>,
        #[serde(with = "crate::nat::dec")]
        enumerator: Nat,
        period: usize,
    },
    Complement {
        child: Box<CertJson>,
    },
    Row {
        of: Box<CertJson>,
        #[serde(with = "crate::nat::dec")]
        t: Nat,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CertError {
    #[error("malformed certificate: {0}")]
    Json(#[from] serde_json::Error),
    #[error("recorded {field} of a {kind} node disagrees with the rebuilt one")]
    Mismatch {
        kind: &'static str,
        field: &'static str,
    },
    #[error("a union needs at least one member")]
    EmptyUnion,
    #[error("a row needs a limit certificate, got a singleton")]
    RowOfSingleton,
    #[error("certificate fails the check against its programs: {0}")]
    NotInI(#[from] InIFailure),
}

pub fn to_json(c: &Cert) -> CertJson {
    let shape = match c.shape() {
        Shape::Singleton(i) => ShapeJson::Singleton { member: i.clone() },
        Shape::Constantized(d) => ShapeJson::Constantized {
            child: Box::new(to_json(d)),
        },
        Shape::CoSingleton(e) => ShapeJson::CoSingleton {
            excluded: e.clone(),
        },
        Shape::Union(cs) => ShapeJson::Union {
            children: cs.iter().map(to_json).collect(),
            enumerator: c.enumerator().expect("union").into_nat(),
            period: cs.len(),
        },
        Shape::Complement(d) => ShapeJson::Complement {
            child: Box::new(to_json(d)),
        },
        Shape::Row { of, t } => ShapeJson::Row {
            of: Box::new(to_json(of)),
            t: t.clone(),
        },
    };
    CertJson {
        index: c.index().clone(),
        norm: c.norm(),
        shape,
    }
}

pub fn cert_to_json(c: &Cert) -> String {
    serde_json::to_string_pretty(&to_json(c)).expect("certificates serialize")
}

/// Rebuilds without running any program.
pub fn from_json(j: &CertJson) -> Result<Cert, CertError> {
    let c = match &j.shape {
        ShapeJson::Singleton { member } => u1(member.clone()),
        ShapeJson::Constantized { child } => constantize(&from_json(child)?),
        ShapeJson::CoSingleton { excluded } => co_singleton(excluded.clone()),
        ShapeJson::Union {
            children,
            enumerator,
            period,
        } => {
            let cs = children
                .iter()
                .map(from_json)
                .collect::<Result<Vec<_>, _>>()?;
            let c = union_of(&cs).map_err(|_| CertError::EmptyUnion)?;
            if *period != cs.len() {
                return Err(CertError::Mismatch {
                    kind: "union",
                    field: "period",
                });
            }
            if c.enumerator().expect("union").value() != enumerator {
                return Err(CertError::Mismatch {
                    kind: "union",
                    field: "enumerator",
                });
            }
            c
        }
        ShapeJson::Complement { child } => {
            let d = from_json(child)?;
            if d.is_singleton() {
                // a singleton's complement is recorded as a co-singleton
                return Err(CertError::Mismatch {
                    kind: "complement",
                    field: "shape",
                });
            }
            complement(&d)
        }
        ShapeJson::Row { of, t } => {
            row(&from_json(of)?, t.clone()).ok_or(CertError::RowOfSingleton)?
        }
    };
    if c.norm() != j.norm {
        return Err(CertError::Mismatch {
            kind: c.kind(),
            field: "norm",
        });
    }
    if *c.index() != j.index {
        return Err(CertError::Mismatch {
            kind: c.kind(),
            field: "index",
        });
    }
    Ok(c)
}

/// Parses, rebuilds and checks a certificate against its programs.
pub fn cert_from_json(src: &str, fuel: u64) -> Result<Cert, CertError> {
    let j: CertJson = serde_json::from_str(src)?;
    let c = from_json(&j)?;
    in_i_report(&c, fuel)?;
    Ok(c)
}
