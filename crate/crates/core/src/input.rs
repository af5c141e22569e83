//! Problem-file schema and machine-readable reports. Files are JSON with
//! integers and `"p/q"` rational strings; floating-point literals are
//! rejected. All indices in files and reports are one-based.

use crate::error::Error;
use crate::invariants::{ClassCombo, Mode};
use crate::lattice::{Int, Rat};
use crate::rings::{QuantumRelation, RingPresentation};
use crate::toric::WeightSystem;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

/// An integer or a `"p/q"` string; JSON floats fail to parse into this.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum NumOrStr {
    Int(i64),
    Str(String),
}

pub fn parse_rat(v: &NumOrStr) -> Result<Rat, Error> {
    match v {
        NumOrStr::Int(x) => Ok(Rat::from_integer(Int::from(*x))),
        NumOrStr::Str(s) => parse_rat_str(s),
    }
}

pub fn parse_rat_str(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = Int::from_str(num).map_err(|_| Error::Parse(format!("bad numerator in '{s}'")))?;
    let d = Int::from_str(den).map_err(|_| Error::Parse(format!("bad denominator in '{s}'")))?;
    if d == Int::from(0) {
        return Err(Error::Parse(format!("zero denominator in '{s}'")));
    }
    Ok(Rat::new(n, d))
}

/// Canonical rendering: `"p"` for integers, `"p/q"` otherwise.
pub fn rat_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn int_strings(v: &[Int]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

pub fn rat_strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(rat_string).collect()
}

/// The on-disk problem description.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub k: usize,
    pub weights: Vec<Vec<i64>>,
    #[serde(default)]
    pub tau: Option<Vec<NumOrStr>>,
    #[serde(default)]
    pub lambda: Option<Vec<i64>>,
    #[serde(default)]
    pub ell: Option<Vec<u32>>,
    #[serde(default)]
    pub alpha: Option<Vec<(NumOrStr, Vec<u32>)>>,
    #[serde(default)]
    pub genus: Option<u32>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub mode: Option<String>,
}

/// A parsed and validated problem.
#[derive(Debug, Clone)]
pub struct Problem {
    pub ws: WeightSystem,
    pub tau: Option<Vec<Rat>>,
    pub lambda: Option<Vec<Int>>,
    pub ell: Option<Vec<u32>>,
    pub alpha: Option<ClassCombo>,
    pub genus: Option<u32>,
    pub seed: u64,
    pub mode: Option<Mode>,
}

pub fn parse_mode(s: &str) -> Result<Mode, Error> {
    match s {
        "direct" => Ok(Mode::Direct),
        "wallcross" => Ok(Mode::Wallcross),
        "checked" => Ok(Mode::Checked),
        other => Err(Error::Parse(format!(
            "mode must be direct|wallcross|checked, got '{other}'"
        ))),
    }
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<ProblemFile, Error> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn build(&self) -> Result<Problem, Error> {
        let weights: Vec<Vec<Int>> = self
            .weights
            .iter()
            .map(|w| w.iter().map(|&x| Int::from(x)).collect())
            .collect();
        let ws = WeightSystem::new(self.k, weights)?;
        let tau = match &self.tau {
            Some(raw) => {
                if raw.len() != self.k {
                    return Err(Error::Parse(format!(
                        "tau has {} coordinates, expected {}",
                        raw.len(),
                        self.k
                    )));
                }
                Some(raw.iter().map(parse_rat).collect::<Result<Vec<_>, _>>()?)
            }
            None => None,
        };
        let lambda = match &self.lambda {
            Some(raw) => {
                if raw.len() != self.k {
                    return Err(Error::Parse(format!(
                        "lambda has {} coordinates, expected {}",
                        raw.len(),
                        self.k
                    )));
                }
                Some(raw.iter().map(|&x| Int::from(x)).collect())
            }
            None => None,
        };
        if let Some(e) = &self.ell {
            if e.len() != ws.n() {
                return Err(Error::Parse(format!(
                    "ell has {} entries, expected {}",
                    e.len(),
                    ws.n()
                )));
            }
        }
        let alpha = match &self.alpha {
            Some(raw) => {
                let mut terms = Vec::with_capacity(raw.len());
                for (c, ell) in raw {
                    if ell.len() != ws.n() {
                        return Err(Error::Parse(format!(
                            "alpha exponent vector has {} entries, expected {}",
                            ell.len(),
                            ws.n()
                        )));
                    }
                    terms.push((parse_rat(c)?, ell.clone()));
                }
                Some(ClassCombo::new(terms))
            }
            None => None,
        };
        let mode = match &self.mode {
            Some(s) => Some(parse_mode(s)?),
            None => None,
        };
        Ok(Problem {
            ws,
            tau,
            lambda,
            ell: self.ell.clone(),
            alpha,
            genus: self.genus,
            seed: self.seed.unwrap_or(0),
            mode,
        })
    }
}

/// Serialized relation set; indices one-based, rationals as strings.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PresentationReport {
    pub generators: usize,
    pub linear: Vec<Vec<String>>,
    pub monomial: Vec<Vec<usize>>,
    pub quantum: Vec<QuantumRelationReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct QuantumRelationReport {
    pub dplus: Vec<u32>,
    pub dminus: Vec<u32>,
    pub lambda: Vec<String>,
    pub qdeg: i64,
}

pub fn presentation_report(p: &RingPresentation) -> PresentationReport {
    PresentationReport {
        generators: p.n,
        linear: p.linear.iter().map(|v| int_strings(v)).collect(),
        monomial: p
            .monomial
            .iter()
            .map(|m| m.iter().map(|i| i + 1).collect())
            .collect(),
        quantum: p.quantum.iter().map(quantum_relation_report).collect(),
    }
}

pub fn quantum_relation_report(r: &QuantumRelation) -> QuantumRelationReport {
    QuantumRelationReport {
        dplus: r.d_plus.clone(),
        dminus: r.d_minus.clone(),
        lambda: int_strings(&r.lambda),
        qdeg: crate::residue::int_to_i64(&r.q_degree),
    }
}

/// Human-readable rendering of one quantum relation, `u`-monomials and a
/// symbolic `q^lambda`.
pub fn render_quantum_relation(r: &QuantumRelation) -> String {
    let mono = |d: &[u32]| -> String {
        let parts: Vec<String> = d
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(nu, &e)| {
                if e == 1 {
                    format!("u{}", nu + 1)
                } else {
                    format!("u{}^{}", nu + 1, e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    };
    let lambda_str: Vec<String> = r.lambda.iter().map(|x| x.to_string()).collect();
    let rhs_mono = mono(&r.d_minus);
    if rhs_mono == "1" {
        format!("{} = q^({})", mono(&r.d_plus), lambda_str.join(","))
    } else {
        format!(
            "{} = q^({}) * {}",
            mono(&r.d_plus),
            lambda_str.join(","),
            rhs_mono
        )
    }
}

/// Human-readable rendering of a linear relation `sum eta_nu u_nu = 0`.
pub fn render_linear_relation(eta: &[Int]) -> String {
    use num_traits::Zero;
    let mut parts: Vec<String> = Vec::new();
    for (nu, c) in eta.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let var = format!("u{}", nu + 1);
        let piece = if c.is_one() {
            var
        } else if (-c).is_one() {
            format!("-{}", var)
        } else {
            format!("{}*{}", c, var)
        };
        if parts.is_empty() {
            parts.push(piece);
        } else if piece.starts_with('-') {
            parts.push(format!("- {}", &piece[1..]));
        } else {
            parts.push(format!("+ {}", piece));
        }
    }
    if parts.is_empty() {
        "0 = 0".to_string()
    } else {
        format!("{} = 0", parts.join(" "))
    }
}
