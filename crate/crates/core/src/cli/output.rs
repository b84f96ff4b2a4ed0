//! Report documents and their table, JSON and CSV renderings.

use std::fmt::Write as _;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::observables::ObservableReport;
use crate::quadrature::GridSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Units {
    #[serde(rename = "J")]
    pub angular_momentum: String,
    pub mu: String,
}

impl Default for Units {
    fn default() -> Self {
        Self {
            angular_momentum: "hbar".into(),
            mu: "bohr_magneton".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleDoc {
    #[serde(rename = "L")]
    pub orbital: [f64; 3],
    #[serde(rename = "S")]
    pub spin: [f64; 3],
}

/// Serialized form of an [`ObservableReport`]; key order is fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub state: String,
    pub units: Units,
    #[serde(rename = "L")]
    pub orbital: [f64; 3],
    #[serde(rename = "S_momentum")]
    pub spin_momentum: [f64; 3],
    #[serde(rename = "S_massflow")]
    pub spin_massflow: [f64; 3],
    #[serde(rename = "J_momentum")]
    pub j_momentum: [f64; 3],
    #[serde(rename = "J_bowman")]
    pub j_bowman: [f64; 3],
    pub mu: [f64; 3],
    pub g_spin: Option<f64>,
    pub oracle: OracleDoc,
    pub max_discrepancy: f64,
    pub convergence_estimate: f64,
}

fn arr(v: Vector3<f64>) -> [f64; 3] {
    [v.x, v.y, v.z]
}

impl ReportDocument {
    pub fn new(state: impl Into<String>, r: &ObservableReport) -> Self {
        Self {
            state: state.into(),
            units: Units::default(),
            orbital: arr(r.orbital),
            spin_momentum: arr(r.spin_momentum),
            spin_massflow: arr(r.spin_massflow),
            j_momentum: arr(r.j_momentum),
            j_bowman: arr(r.j_bowman),
            mu: arr(r.mu),
            g_spin: r.g_spin,
            oracle: OracleDoc {
                orbital: arr(r.oracle.orbital),
                spin: arr(r.oracle.spin),
            },
            max_discrepancy: r.max_discrepancy,
            convergence_estimate: r.convergence_estimate,
        }
    }

    fn vectors(&self) -> [(&'static str, [f64; 3]); 8] {
        [
            ("L", self.orbital),
            ("S_momentum", self.spin_momentum),
            ("S_massflow", self.spin_massflow),
            ("J_momentum", self.j_momentum),
            ("J_bowman", self.j_bowman),
            ("mu", self.mu),
            ("oracle_L", self.oracle.orbital),
            ("oracle_S", self.oracle.spin),
        ]
    }
}

/// Fixed nine decimals, locale independent, no negative zero.
pub fn fixed(v: f64) -> String {
    let s = format!("{v:.9}");
    if s.trim_start_matches('-').bytes().all(|b| b == b'0' || b == b'.') {
        s.trim_start_matches('-').to_owned()
    } else {
        s
    }
}

/// Nine significant digits in scientific notation.
pub fn sci(v: f64) -> String {
    format!("{v:.8e}")
}

fn triple(v: [f64; 3]) -> String {
    format!("({}, {}, {})", fixed(v[0]), fixed(v[1]), fixed(v[2]))
}

fn opt(v: Option<f64>) -> String {
    v.map(fixed).unwrap_or_else(|| "null".into())
}

pub fn report_table(doc: &ReportDocument, grid: &GridSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "state = {}", doc.state);
    let _ = writeln!(
        out,
        "grid = r_max {} N_r {} N_theta {} N_phi {}",
        grid.r_max, grid.n_r, grid.n_theta, grid.n_phi
    );
    let _ = writeln!(out, "units = J: {}, mu: {}", doc.units.angular_momentum, doc.units.mu);
    let [l, sm, sf, jm, jb, mu, ol, os] = doc.vectors();
    for (name, v) in [l, sm, sf, jm, jb, mu] {
        for (axis, x) in ["x", "y", "z"].iter().zip(v) {
            let _ = writeln!(out, "{name}_{axis} = {}", fixed(x));
        }
    }
    let _ = writeln!(out, "g_spin = {}", opt(doc.g_spin));
    for (name, v) in [ol, os] {
        for (axis, x) in ["x", "y", "z"].iter().zip(v) {
            let _ = writeln!(out, "{name}_{axis} = {}", fixed(x));
        }
    }
    let _ = writeln!(out, "max_discrepancy = {}", sci(doc.max_discrepancy));
    let _ = writeln!(out, "convergence_estimate = {}", sci(doc.convergence_estimate));
    out
}

pub fn report_csv_header() -> Vec<String> {
    let mut h = vec!["state".to_owned(), "units_J".to_owned(), "units_mu".to_owned()];
    for name in ["L", "S_momentum", "S_massflow", "J_momentum", "J_bowman", "mu"] {
        h.extend(["x", "y", "z"].map(|a| format!("{name}_{a}")));
    }
    h.push("g_spin".into());
    for name in ["oracle_L", "oracle_S"] {
        h.extend(["x", "y", "z"].map(|a| format!("{name}_{a}")));
    }
    h.push("max_discrepancy".into());
    h.push("convergence_estimate".into());
    h
}

pub fn report_csv_row(doc: &ReportDocument) -> Vec<String> {
    let mut row = vec![
        doc.state.clone(),
        doc.units.angular_momentum.clone(),
        doc.units.mu.clone(),
    ];
    let [l, sm, sf, jm, jb, mu, ol, os] = doc.vectors();
    for (_, v) in [l, sm, sf, jm, jb, mu] {
        row.extend(v.map(fixed));
    }
    row.push(doc.g_spin.map(fixed).unwrap_or_default());
    for (_, v) in [ol, os] {
        row.extend(v.map(fixed));
    }
    row.push(sci(doc.max_discrepancy));
    row.push(sci(doc.convergence_estimate));
    row
}

/// One line of the `compare` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareRow {
    pub state: String,
    #[serde(rename = "J_momentum")]
    pub j_momentum: [f64; 3],
    #[serde(rename = "J_bowman")]
    pub j_bowman: [f64; 3],
    pub difference: [f64; 3],
    pub mu: [f64; 3],
    pub g_spin: Option<f64>,
}

impl CompareRow {
    pub fn new(state: impl Into<String>, r: &ObservableReport) -> Self {
        Self {
            state: state.into(),
            j_momentum: arr(r.j_momentum),
            j_bowman: arr(r.j_bowman),
            difference: arr(r.j_bowman - r.j_momentum),
            mu: arr(r.mu),
            g_spin: r.g_spin,
        }
    }
}

pub fn compare_table(rows: &[CompareRow]) -> String {
    let headers = [
        "state",
        "J_momentum (hbar)",
        "J_bowman (hbar)",
        "difference (hbar)",
        "mu (bohr_magneton)",
        "g_spin",
    ];
    let cells: Vec<[String; 6]> = rows
        .iter()
        .map(|r| {
            [
                r.state.clone(),
                triple(r.j_momentum),
                triple(r.j_bowman),
                triple(r.difference),
                triple(r.mu),
                opt(r.g_spin),
            ]
        })
        .collect();
    let widths: Vec<usize> = (0..6)
        .map(|i| {
            cells
                .iter()
                .map(|c| c[i].chars().count())
                .chain([headers[i].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |items: &[String]| -> String {
        items
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:<w$}"))
            .collect::<Vec<_>>()
            .join(" | ")
            .trim_end()
            .to_owned()
    };
    let mut out = String::new();
    let _ = writeln!(out, "{}", line(&headers.map(String::from)));
    let _ = writeln!(
        out,
        "{}",
        widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("-+-")
    );
    for c in &cells {
        let _ = writeln!(out, "{}", line(c));
    }
    out
}

pub fn compare_csv_header() -> Vec<String> {
    let mut h = vec!["state".to_owned()];
    for name in ["J_momentum", "J_bowman", "difference", "mu"] {
        h.extend(["x", "y", "z"].map(|a| format!("{name}_{a}")));
    }
    h.push("g_spin".into());
    h
}

pub fn compare_csv_row(r: &CompareRow) -> Vec<String> {
    let mut row = vec![r.state.clone()];
    for v in [r.j_momentum, r.j_bowman, r.difference, r.mu] {
        row.extend(v.map(fixed));
    }
    row.push(r.g_spin.map(fixed).unwrap_or_default());
    row
}

pub fn to_csv(header: Vec<String>, rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).expect("writing to memory");
    for r in rows {
        w.write_record(&r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("csv output is UTF-8")
}
