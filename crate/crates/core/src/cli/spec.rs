//! State specifications accepted on the command line.
//!
//! Compact form: terms separated by `;`, each either `n l m up|down [re [im]]`
//! or the coupled `n l j mj [re [im]]` (j, mj as `1/2` or `0.5`).
//!
//! JSON form:
//! `{"Z": 1.0, "terms": [{"n":1,"l":0,"m":0,"spin":"up","re":1.0,"im":0.0}]}`
//! or `{"gaussian": {"sigma":1.0,"center":[0,0,0],"momentum":[0,0,0],"spinor":[[1,0],[0,0]]}}`.
//! JSON terms may give `j` and `mj` in place of `m` and `spin`.

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::math::{clebsch_half, HalfInt};
use crate::states::{BasisTerm, Spin, SpinorState};

/// Parses a compact or JSON spec; `z` applies when the spec carries none.
pub fn parse_state(text: &str, z: f64) -> Result<SpinorState> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        parse_json(trimmed, z)
    } else {
        parse_compact(trimmed, z)
    }
}

fn parse_num<T: std::str::FromStr>(token: &str, what: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| Error::parse(token, format!("expected {what}")))
}

fn parse_spin(token: &str) -> Option<Spin> {
    match token.to_ascii_lowercase().as_str() {
        "up" | "u" | "+" => Some(Spin::Up),
        "down" | "d" | "dn" | "-" => Some(Spin::Down),
        _ => None,
    }
}

/// Basis kets (with coefficients) for one `(n, l, j, m_j)` coupled term.
fn coupled_terms(n: u32, l: u32, j: HalfInt, m_j: HalfInt, coeff: Complex64) -> Result<Vec<BasisTerm>> {
    let (c_up, c_down) = clebsch_half(l as i32, j, m_j)?;
    let mut out = Vec::with_capacity(2);
    if c_up != 0.0 {
        out.push(BasisTerm::new(n, l, (m_j.twice() - 1) / 2, Spin::Up, coeff * c_up));
    }
    if c_down != 0.0 {
        out.push(BasisTerm::new(n, l, (m_j.twice() + 1) / 2, Spin::Down, coeff * c_down));
    }
    Ok(out)
}

fn parse_compact(text: &str, z: f64) -> Result<SpinorState> {
    let mut terms = Vec::new();
    for chunk in text.split(';') {
        let tokens: Vec<&str> = chunk.split_whitespace().collect();
        if tokens.is_empty() {
            return Err(Error::parse(chunk, "empty term"));
        }
        if tokens.len() < 4 {
            return Err(Error::parse(chunk.trim(), "a term needs `n l m up|down` or `n l j mj`"));
        }
        if tokens.len() > 6 {
            return Err(Error::parse(tokens[6], "unexpected extra token"));
        }
        let n: u32 = parse_num(tokens[0], "principal quantum number n >= 1")?;
        let l: u32 = parse_num(tokens[1], "orbital quantum number l >= 0")?;
        let re: f64 = tokens
            .get(4)
            .map(|t| parse_num(t, "real coefficient"))
            .transpose()?
            .unwrap_or(1.0);
        let im: f64 = tokens
            .get(5)
            .map(|t| parse_num(t, "imaginary coefficient"))
            .transpose()?
            .unwrap_or(0.0);
        let coeff = Complex64::new(re, im);
        match parse_spin(tokens[3]) {
            Some(spin) => {
                let m: i32 = parse_num(tokens[2], "magnetic quantum number m")?;
                terms.push(BasisTerm::new(n, l, m, spin, coeff));
            }
            None => {
                let j: HalfInt = tokens[2].parse()?;
                let m_j: HalfInt = tokens[3]
                    .parse()
                    .map_err(|_| Error::parse(tokens[3], "expected up, down or a half-integer m_j"))?;
                terms.extend(coupled_terms(n, l, j, m_j, coeff)?);
            }
        }
    }
    SpinorState::hydrogenic(z, terms)
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum HalfSpec {
    Number(f64),
    Text(String),
}

impl HalfSpec {
    fn to_half(&self) -> Result<HalfInt> {
        match self {
            HalfSpec::Number(v) => v.to_string().parse(),
            HalfSpec::Text(s) => s.parse(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDoc {
    n: u32,
    l: u32,
    m: Option<i32>,
    spin: Option<Spin>,
    j: Option<HalfSpec>,
    mj: Option<HalfSpec>,
    #[serde(default = "one")]
    re: f64,
    #[serde(default)]
    im: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct HydrogenicDoc {
    #[serde(rename = "Z")]
    z: Option<f64>,
    terms: Vec<TermDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GaussianBody {
    sigma: f64,
    #[serde(default)]
    center: [f64; 3],
    #[serde(default)]
    momentum: [f64; 3],
    spinor: [[f64; 2]; 2],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GaussianDoc {
    gaussian: GaussianBody,
}

fn json_error(e: serde_json::Error) -> Error {
    let msg = e.to_string();
    // serde names the offending key in backticks
    let token = msg
        .split('`')
        .nth(1)
        .map(str::to_owned)
        .unwrap_or_else(|| format!("line {} column {}", e.line(), e.column()));
    Error::parse(token, msg)
}

fn parse_json(text: &str, z: f64) -> Result<SpinorState> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(json_error)?;
    if value.get("gaussian").is_some() {
        let doc: GaussianDoc = serde_json::from_value(value).map_err(json_error)?;
        let g = doc.gaussian;
        let spinor = g.spinor.map(|[re, im]| Complex64::new(re, im));
        return SpinorState::gaussian(g.sigma, Vector3::from(g.center), Vector3::from(g.momentum), spinor);
    }
    let doc: HydrogenicDoc = serde_json::from_value(value).map_err(json_error)?;
    let mut terms = Vec::new();
    for (i, t) in doc.terms.iter().enumerate() {
        let coeff = Complex64::new(t.re, t.im);
        match (t.m, t.spin, &t.j, &t.mj) {
            (Some(m), Some(spin), None, None) => terms.push(BasisTerm::new(t.n, t.l, m, spin, coeff)),
            (None, None, Some(j), Some(mj)) => {
                terms.extend(coupled_terms(t.n, t.l, j.to_half()?, mj.to_half()?, coeff)?)
            }
            _ => {
                return Err(Error::parse(
                    format!("terms[{i}]"),
                    "give either `m` and `spin` or `j` and `mj`",
                ))
            }
        }
    }
    SpinorState::hydrogenic(doc.z.unwrap_or(z), terms)
}
