//! Coupling of orbital angular momentum l with spin ½ into spinor spherical
//! harmonics Ω_{j,l,m_j}.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A half-integer stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// True for odd multiples of ½.
    pub fn is_half_odd(self) -> bool {
        self.0 % 2 != 0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts "3/2", "-1/2", "0.5", "1.5", "2".
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::parse(s, "expected a half-integer such as 1/2, 3/2 or 0.5");
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num: i32 = num.trim().parse().map_err(|_| bad())?;
            return match den.trim() {
                "2" => Ok(HalfInt(num)),
                "1" => Ok(HalfInt(2 * num)),
                _ => Err(bad()),
            };
        }
        let v: f64 = s.parse().map_err(|_| bad())?;
        let twice = 2.0 * v;
        if !twice.is_finite() || twice.fract() != 0.0 || twice.abs() > i32::MAX as f64 {
            return Err(bad());
        }
        Ok(HalfInt(twice as i32))
    }
}

/// Coefficients (c_up, c_down) of Y_{l,m_j−½}|↑⟩ and Y_{l,m_j+½}|↓⟩ in
/// Ω_{j,l,m_j}, Condon–Shortley phases with the orbital index coupled first.
pub fn clebsch_half(l: i32, j: HalfInt, m_j: HalfInt) -> Result<(f64, f64)> {
    let invalid = || Error::domain(format!("invalid coupling l={l} j={j} m_j={m_j}"));
    if l < 0 || !j.is_half_odd() || !m_j.is_half_odd() || j.twice() < 1 {
        return Err(invalid());
    }
    if m_j.twice().abs() > j.twice() {
        return Err(invalid());
    }
    let denom = (2 * l + 1) as f64;
    // l ± m_j + ½ in integer form: (2l ± 2m_j + 1) / 2
    let plus = (2 * l + m_j.twice() + 1) as f64 / 2.0;
    let minus = (2 * l - m_j.twice() + 1) as f64 / 2.0;
    if j.twice() == 2 * l + 1 {
        Ok(((plus / denom).sqrt(), (minus / denom).sqrt()))
    } else if j.twice() == 2 * l - 1 {
        Ok((-(minus / denom).sqrt(), (plus / denom).sqrt()))
    } else {
        Err(invalid())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CouplingKey {
    pub l: i32,
    pub j: HalfInt,
    pub m_j: HalfInt,
}

/// Precomputed `clebsch_half` entries for every valid (l, j, m_j) up to l_max.
#[derive(Debug, Clone, Default)]
pub struct CouplingTable {
    entries: BTreeMap<CouplingKey, (f64, f64)>,
}

impl CouplingTable {
    pub fn new(l_max: i32) -> Self {
        let mut entries = BTreeMap::new();
        for l in 0..=l_max {
            for tj in [2 * l - 1, 2 * l + 1] {
                if tj < 1 {
                    continue;
                }
                for tm in (-tj..=tj).step_by(2) {
                    let key = CouplingKey {
                        l,
                        j: HalfInt(tj),
                        m_j: HalfInt(tm),
                    };
                    let c = clebsch_half(l, key.j, key.m_j).expect("enumerated keys are valid");
                    entries.insert(key, c);
                }
            }
        }
        Self { entries }
    }

    pub fn get(&self, l: i32, j: HalfInt, m_j: HalfInt) -> Option<(f64, f64)> {
        self.entries.get(&CouplingKey { l, j, m_j }).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CouplingKey, &(f64, f64))> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
