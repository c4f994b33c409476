use std::io::Write;
use std::path::{Path, PathBuf};

use dicke_core::crit::{self, derivative_series, SweepResult};
use dicke_core::gp::{gp_closed_form, gp_loop, NumberBasisState};
use dicke_core::model::{self, critical_coupling};
use dicke_core::sector::ground_state;

use crate::config::{CommandKind, Format, RunConfig};
use crate::error::{CliError, Result};
use crate::output::{
    sweep_csv, AnalyticRow, AnalyticTable, GpLoopReport, ScalingReport, SweepRow,
};
use crate::svg::{self, Panel, Series};

fn emit(path: Option<&Path>, content: &str, stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| CliError::io(format!("writing {}", p.display()), e)),
        None => stdout
            .write_all(content.as_bytes())
            .map_err(|e| CliError::io("writing to stdout", e)),
    }
}

pub fn analytic_table(cfg: &RunConfig) -> Result<AnalyticTable> {
    cfg.validate(CommandKind::Analytic)?;
    let params = cfg.params()?;
    let grid = cfg.grid()?;
    let lambda_c = critical_coupling(&params);
    let rows = grid
        .points()
        .iter()
        .map(|&lambda| {
            let mf = model::mean_field(&params, lambda)?;
            Ok(AnalyticRow {
                lambda,
                lambda_c,
                alpha: mf.alpha,
                beta: mf.beta,
                e0_per_atom: model::ground_energy_per_atom(&params, lambda)?,
                gp_per_atom: model::gp_per_atom(&params, lambda)?,
                gp_slope: model::gp_slope_per_atom(&params, lambda)?.right,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AnalyticTable {
        omega: params.omega(),
        omega0: params.omega0(),
        lambda_c,
        rows,
    })
}

pub fn cmd_analytic(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let table = analytic_table(cfg)?;
    let text = match cfg.format {
        Format::Csv => table.to_csv(),
        Format::Json => serde_json::to_string_pretty(&table).expect("table serializes") + "\n",
    };
    emit(cfg.out.as_deref(), &text, stdout)
}

pub fn run_sweep(cfg: &RunConfig) -> Result<SweepResult> {
    cfg.validate(CommandKind::Sweep)?;
    Ok(crit::sweep(
        &cfg.params()?,
        &cfg.n_ladder,
        &cfg.grid()?,
        &cfg.scan(),
        cfg.workers,
    )?)
}

/// Rows sorted by `(n_atoms, lambda)`.
pub fn sweep_rows(result: &SweepResult) -> Vec<SweepRow> {
    result
        .ed
        .iter()
        .flat_map(|series| {
            series.points.iter().zip(&result.analytic).map(move |(ed, an)| SweepRow {
                n_atoms: series.n_atoms,
                omega: result.params.omega(),
                omega0: result.params.omega0(),
                lambda: ed.lambda,
                sector: ed.sector,
                e0_per_atom_ed: ed.e0_per_atom,
                gp_per_atom_ed: ed.gp_per_atom,
                e0_per_atom_analytic: an.e0_per_atom,
                gp_per_atom_analytic: an.gp_per_atom,
            })
        })
        .collect()
}

/// Two panels: `gamma0/N` and its coupling derivative, one curve per `N`
/// plus the thermodynamic limit (dashed, with the jump drawn at the kink).
pub fn sweep_figure(result: &SweepResult) -> String {
    let grid = result.lambda_grid.points();
    let mut phase = Vec::new();
    let mut slope = Vec::new();
    for s in &result.ed {
        let label = format!("N = {}", s.n_atoms);
        let g = s.gp_per_atom();
        phase.push(Series {
            label: label.clone(),
            points: grid.iter().copied().zip(g.iter().copied()).collect(),
            dashed: false,
        });
        if let Ok(d) = derivative_series(grid, &g) {
            slope.push(Series {
                label,
                points: grid.iter().copied().zip(d).collect(),
                dashed: false,
            });
        }
    }
    phase.push(Series {
        label: "N -> infinity".into(),
        points: result.analytic.iter().map(|a| (a.lambda, a.gp_per_atom)).collect(),
        dashed: true,
    });
    slope.push(Series {
        label: "N -> infinity".into(),
        points: result
            .analytic
            .iter()
            .flat_map(|a| {
                let mut v = vec![(a.lambda, a.gp_slope.left)];
                if a.gp_slope.is_kink() {
                    v.push((a.lambda, a.gp_slope.right));
                }
                v
            })
            .collect(),
        dashed: true,
    });
    svg::render(&[
        Panel {
            title: "geometric phase per atom".into(),
            x_label: "lambda".into(),
            y_label: "gamma0 / N".into(),
            series: phase,
        },
        Panel {
            title: "coupling derivative".into(),
            x_label: "lambda".into(),
            y_label: "d(gamma0/N)/d(lambda)".into(),
            series: slope,
        },
    ])
}

pub fn plot_path(cfg: &RunConfig) -> PathBuf {
    match &cfg.out {
        Some(p) => p.with_extension("svg"),
        None => PathBuf::from("sweep.svg"),
    }
}

pub fn cmd_sweep(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let result = run_sweep(cfg)?;
    let rows = sweep_rows(&result);
    let text = match cfg.format {
        Format::Csv => sweep_csv(&rows),
        Format::Json => serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
    };
    emit(cfg.out.as_deref(), &text, stdout)?;
    if cfg.plot {
        let path = plot_path(cfg);
        std::fs::write(&path, sweep_figure(&result))
            .map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
    }
    Ok(())
}

pub fn scaling_report(cfg: &RunConfig) -> Result<ScalingReport> {
    cfg.validate(CommandKind::Scaling)?;
    let params = cfg.params()?;
    let fit = crit::scaling_fit(
        &params,
        &cfg.n_ladder,
        &cfg.grid()?,
        &cfg.scan(),
        cfg.workers,
    )?;
    Ok(ScalingReport {
        omega: params.omega(),
        omega0: params.omega0(),
        lambda_min: cfg.lambda_min,
        lambda_max: cfg.lambda_max,
        lambda_steps: cfg.lambda_steps,
        relative_deviation: fit.relative_deviation(),
        n_ladder: fit.n_ladder,
        peak_slopes: fit.peak_slopes,
        peak_lambdas: fit.peak_lambdas,
        slope: fit.fit.slope,
        intercept: fit.fit.intercept,
        r_squared: fit.fit.r_squared,
        target: fit.target,
    })
}

/// Text report on stdout; the JSON report goes to `--out` when given, or
/// replaces the text when `--format json` is set without a path.
pub fn cmd_scaling(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let report = scaling_report(cfg)?;
    match (&cfg.out, cfg.format) {
        (Some(path), _) => {
            emit(None, &report.to_text(), stdout)?;
            emit(Some(path), &(report.to_json() + "\n"), stdout)
        }
        (None, Format::Json) => emit(None, &(report.to_json() + "\n"), stdout),
        (None, Format::Csv) => emit(None, &report.to_text(), stdout),
    }
}

pub fn read_scaling_report(path: &Path) -> Result<ScalingReport> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    ScalingReport::from_json(&text)
}

pub fn gp_loop_report(cfg: &RunConfig) -> Result<GpLoopReport> {
    cfg.validate(CommandKind::GpLoop)?;
    let params = cfg.params()?;
    let g = ground_state(&params, cfg.n_atoms, cfg.lambda, &cfg.scan())?;
    let state = NumberBasisState::from(&g);
    let closed = gp_closed_form(&state);
    let looped = gp_loop(&state, cfg.loop_steps)?;
    let abs_diff = (looped - closed).abs();
    Ok(GpLoopReport {
        n_atoms: cfg.n_atoms,
        lambda: cfg.lambda,
        steps: cfg.loop_steps,
        sector: g.sector,
        photon_expectation: g.photon_expectation,
        gp_closed_form: closed,
        gp_loop: looped,
        abs_diff,
        rel_diff: if closed == 0.0 {
            abs_diff
        } else {
            abs_diff / closed.abs()
        },
    })
}

pub fn cmd_gp_loop(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let report = gp_loop_report(cfg)?;
    let text = match cfg.format {
        Format::Csv => report.to_text(),
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
    };
    emit(cfg.out.as_deref(), &text, stdout)
}
