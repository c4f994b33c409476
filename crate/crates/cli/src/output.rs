//! Result tables and their CSV/JSON encodings.

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticRow {
    pub lambda: f64,
    pub lambda_c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub e0_per_atom: f64,
    pub gp_per_atom: f64,
    /// Right-derivative of the geometric phase per atom.
    pub gp_slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticTable {
    pub omega: f64,
    pub omega0: f64,
    pub lambda_c: f64,
    pub rows: Vec<AnalyticRow>,
}

pub const ANALYTIC_HEADER: &str = "lambda,lambda_c,alpha,beta,e0_per_atom,gp_per_atom,gp_slope";

impl AnalyticTable {
    pub fn to_csv(&self) -> String {
        let mut s = format!(
            "# omega={} omega0={} lambda_c={}\n{ANALYTIC_HEADER}\n",
            fmt_float(self.omega),
            fmt_float(self.omega0),
            fmt_float(self.lambda_c)
        );
        for r in &self.rows {
            let cells = [
                r.lambda,
                r.lambda_c,
                r.alpha,
                r.beta,
                r.e0_per_atom,
                r.gp_per_atom,
                r.gp_slope,
            ];
            s.push_str(&cells.map(fmt_float).join(","));
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n_atoms: usize,
    pub omega: f64,
    pub omega0: f64,
    pub lambda: f64,
    pub sector: usize,
    pub e0_per_atom_ed: f64,
    pub gp_per_atom_ed: f64,
    pub e0_per_atom_analytic: f64,
    pub gp_per_atom_analytic: f64,
}

pub const SWEEP_HEADER: &str = "n_atoms,omega,omega0,lambda,sector,e0_per_atom_ed,gp_per_atom_ed,\
e0_per_atom_analytic,gp_per_atom_analytic";

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(SWEEP_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.n_atoms,
            fmt_float(r.omega),
            fmt_float(r.omega0),
            fmt_float(r.lambda),
            r.sector,
            fmt_float(r.e0_per_atom_ed),
            fmt_float(r.gp_per_atom_ed),
            fmt_float(r.e0_per_atom_analytic),
            fmt_float(r.gp_per_atom_analytic),
        ));
    }
    s
}

fn cell<T: std::str::FromStr>(line: usize, name: &str, raw: Option<&str>) -> Result<T> {
    let raw = raw.ok_or_else(|| CliError::Parse {
        what: "sweep table".into(),
        reason: format!("line {line}: missing column {name}"),
    })?;
    raw.trim().parse().map_err(|_| CliError::Parse {
        what: "sweep table".into(),
        reason: format!("line {line}: bad {name} `{raw}`"),
    })
}

pub fn read_sweep_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == SWEEP_HEADER => {}
        _ => {
            return Err(CliError::Parse {
                what: "sweep table".into(),
                reason: "missing or unexpected header".into(),
            })
        }
    }
    lines
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let line = i + 1;
            let mut f = l.split(',');
            let row = SweepRow {
                n_atoms: cell(line, "n_atoms", f.next())?,
                omega: cell(line, "omega", f.next())?,
                omega0: cell(line, "omega0", f.next())?,
                lambda: cell(line, "lambda", f.next())?,
                sector: cell(line, "sector", f.next())?,
                e0_per_atom_ed: cell(line, "e0_per_atom_ed", f.next())?,
                gp_per_atom_ed: cell(line, "gp_per_atom_ed", f.next())?,
                e0_per_atom_analytic: cell(line, "e0_per_atom_analytic", f.next())?,
                gp_per_atom_analytic: cell(line, "gp_per_atom_analytic", f.next())?,
            };
            if f.next().is_some() {
                return Err(CliError::Parse {
                    what: "sweep table".into(),
                    reason: format!("line {line}: too many columns"),
                });
            }
            Ok(row)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub omega: f64,
    pub omega0: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_steps: usize,
    pub n_ladder: Vec<usize>,
    pub peak_slopes: Vec<f64>,
    pub peak_lambdas: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub target: f64,
    pub relative_deviation: f64,
}

impl ScalingReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!(
            "peak d(gamma0)/d(lambda) vs N, lambda in [{}, {}] ({} points)\n",
            self.lambda_min, self.lambda_max, self.lambda_steps
        ));
        for ((n, p), l) in self.n_ladder.iter().zip(&self.peak_slopes).zip(&self.peak_lambdas) {
            s.push_str(&format!("  N = {n:>6}  peak = {p:>14.6}  at lambda = {l:.6}\n"));
        }
        s.push_str(&format!("fitted slope        {:.7}\n", self.slope));
        s.push_str(&format!("intercept           {:.7}\n", self.intercept));
        s.push_str(&format!("target 2 pi lc/w^2  {:.7}\n", self.target));
        s.push_str(&format!(
            "relative deviation  {:.4}%\n",
            100.0 * self.relative_deviation
        ));
        s.push_str(&format!("r^2                 {:.6}\n", self.r_squared));
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Parse {
            what: "scaling report".into(),
            reason: e.to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GpLoopReport {
    pub n_atoms: usize,
    pub lambda: f64,
    pub steps: usize,
    pub sector: usize,
    pub photon_expectation: f64,
    pub gp_closed_form: f64,
    pub gp_loop: f64,
    pub abs_diff: f64,
    /// Absolute difference over `|gp_closed_form|`; equals `abs_diff` when the
    /// closed form vanishes.
    pub rel_diff: f64,
}

impl GpLoopReport {
    pub fn to_text(&self) -> String {
        format!(
            "N = {}, lambda = {}, K = {} (ground sector M = {}, <a'a> = {:.10})\n\
             closed form  {:.12}\n\
             loop         {:.12}\n\
             abs diff     {:.3e}\n\
             rel diff     {:.3e}\n",
            self.n_atoms,
            self.lambda,
            self.steps,
            self.sector,
            self.photon_expectation,
            self.gp_closed_form,
            self.gp_loop,
            self.abs_diff,
            self.rel_diff
        )
    }
}
