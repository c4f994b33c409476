//! Coupling sweeps over an atom-number ladder and finite-size scaling of the
//! geometric-phase derivative.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{DickeError, Result};
use crate::model::{self, ModelParams};
use crate::sector::{ground_state, ScanPolicy};

/// Relative tolerance on grid spacing for stencils that assume uniformity.
const UNIFORM_TOL: f64 = 1e-9;
pub const MIN_SCALING_LADDER: usize = 4;

/// Strictly increasing coupling grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaGrid(Vec<f64>);

impl LambdaGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(DickeError::GridTooSmall { len: 0, min: 1 });
        }
        for &l in &points {
            model::check_coupling(l)?;
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(DickeError::GridNotIncreasing);
        }
        Ok(Self(points))
    }

    /// `steps` evenly spaced points from `min` to `max` inclusive.
    pub fn uniform(min: f64, max: f64, steps: usize) -> Result<Self> {
        if steps < 2 {
            return Err(DickeError::GridTooSmall { len: steps, min: 2 });
        }
        if !(max > min) {
            return Err(DickeError::GridNotIncreasing);
        }
        let last = (steps - 1) as f64;
        Self::new(
            (0..steps)
                .map(|i| min + (max - min) * (i as f64 / last))
                .collect(),
        )
    }

    pub fn points(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Common spacing, if the grid is uniform.
    pub fn spacing(&self) -> Result<f64> {
        uniform_spacing(&self.0)
    }
}

fn uniform_spacing(grid: &[f64]) -> Result<f64> {
    if grid.len() < 2 {
        return Err(DickeError::GridTooSmall {
            len: grid.len(),
            min: 2,
        });
    }
    let h = (grid[grid.len() - 1] - grid[0]) / (grid.len() - 1) as f64;
    if !(h > 0.0) {
        return Err(DickeError::GridNotIncreasing);
    }
    if grid
        .windows(2)
        .any(|w| ((w[1] - w[0]) - h).abs() > UNIFORM_TOL * h)
    {
        return Err(DickeError::NonUniformGrid);
    }
    Ok(h)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdPoint {
    pub lambda: f64,
    pub sector: usize,
    pub e0_per_atom: f64,
    pub gp_per_atom: f64,
    pub photon_expectation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdSeries {
    pub n_atoms: usize,
    pub points: Vec<EdPoint>,
}

impl EdSeries {
    pub fn gp_per_atom(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.gp_per_atom).collect()
    }

    pub fn e0_per_atom(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.e0_per_atom).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticPoint {
    pub lambda: f64,
    pub e0_per_atom: f64,
    pub gp_per_atom: f64,
    pub gp_slope: model::GpSlope,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub params: ModelParams,
    pub scan: ScanPolicy,
    pub lambda_grid: LambdaGrid,
    /// One series per atom number, ascending in `N`.
    pub ed: Vec<EdSeries>,
    pub analytic: Vec<AnalyticPoint>,
}

impl SweepResult {
    pub fn series(&self, n_atoms: usize) -> Option<&EdSeries> {
        self.ed.iter().find(|s| s.n_atoms == n_atoms)
    }

    pub fn analytic_gp_per_atom(&self) -> Vec<f64> {
        self.analytic.iter().map(|p| p.gp_per_atom).collect()
    }
}

fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    if workers == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Exact-diagonalization and analytic series on a common grid.
///
/// The ladder is sorted and deduplicated. `workers == 0` uses the global
/// rayon pool; any worker count yields the same table since each `(N, lambda)`
/// item lands in a fixed slot.
pub fn sweep(
    params: &ModelParams,
    n_ladder: &[usize],
    lambda_grid: &LambdaGrid,
    scan: &ScanPolicy,
    workers: usize,
) -> Result<SweepResult> {
    let mut ladder = n_ladder.to_vec();
    ladder.sort_unstable();
    ladder.dedup();
    if ladder.is_empty() {
        return Err(DickeError::LadderTooSmall { len: 0, min: 1 });
    }
    if ladder[0] == 0 {
        return Err(DickeError::InvalidSector("need at least one atom".into()));
    }

    let grid = lambda_grid.points();
    let items: Vec<(usize, f64)> = ladder
        .iter()
        .flat_map(|&n| grid.iter().map(move |&l| (n, l)))
        .collect();
    let solved: Vec<Result<EdPoint>> = with_pool(workers, || {
        items
            .par_iter()
            .map(|&(n, lambda)| {
                let g = ground_state(params, n, lambda, scan)?;
                Ok(EdPoint {
                    lambda,
                    sector: g.sector,
                    e0_per_atom: g.energy_per_atom(),
                    gp_per_atom: 2.0 * std::f64::consts::PI * g.photon_expectation / n as f64,
                    photon_expectation: g.photon_expectation,
                })
            })
            .collect()
    });
    let mut solved = solved.into_iter();
    let mut ed = Vec::with_capacity(ladder.len());
    for &n in &ladder {
        let points = solved
            .by_ref()
            .take(grid.len())
            .collect::<Result<Vec<_>>>()?;
        ed.push(EdSeries { n_atoms: n, points });
    }

    let analytic = grid
        .iter()
        .map(|&lambda| {
            Ok(AnalyticPoint {
                lambda,
                e0_per_atom: model::ground_energy_per_atom(params, lambda)?,
                gp_per_atom: model::gp_per_atom(params, lambda)?,
                gp_slope: model::gp_slope_per_atom(params, lambda)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SweepResult {
        params: *params,
        scan: *scan,
        lambda_grid: lambda_grid.clone(),
        ed,
        analytic,
    })
}

/// First derivative on a uniform grid: central differences inside,
/// first-order one-sided differences at the two ends.
pub fn derivative_series(grid: &[f64], values: &[f64]) -> Result<Vec<f64>> {
    if grid.len() < 3 {
        return Err(DickeError::GridTooSmall {
            len: grid.len(),
            min: 3,
        });
    }
    if values.len() != grid.len() {
        return Err(DickeError::LengthMismatch(format!(
            "{} values on {} grid points",
            values.len(),
            grid.len()
        )));
    }
    let h = uniform_spacing(grid)?;
    let n = grid.len();
    let mut d = Vec::with_capacity(n);
    d.push((values[1] - values[0]) / h);
    d.extend(values.windows(3).map(|w| (w[2] - w[0]) / (2.0 * h)));
    d.push((values[n - 1] - values[n - 2]) / h);
    Ok(d)
}

/// Grid point with the largest second difference of `values`; ties go to the
/// smaller coupling.
pub fn critical_point_from_series(grid: &[f64], values: &[f64]) -> Result<f64> {
    if grid.len() < 3 {
        return Err(DickeError::GridTooSmall {
            len: grid.len(),
            min: 3,
        });
    }
    if values.len() != grid.len() {
        return Err(DickeError::LengthMismatch(format!(
            "{} values on {} grid points",
            values.len(),
            grid.len()
        )));
    }
    uniform_spacing(grid)?;
    let mut best: Option<(usize, f64)> = None;
    for (i, w) in values.windows(3).enumerate() {
        let curvature = w[2] - 2.0 * w[1] + w[0];
        if best.map_or(true, |(_, c)| curvature > c) {
            best = Some((i + 1, curvature));
        }
    }
    match best {
        Some((i, c)) if c > 0.0 => Ok(grid[i]),
        _ => Err(DickeError::GridDoesNotBracket),
    }
}

/// Finite-N critical coupling estimate from the exact-diagonalization
/// geometric phase of `n_atoms`.
pub fn estimate_critical_point(sweep: &SweepResult, n_atoms: usize) -> Result<f64> {
    let series = sweep.series(n_atoms).ok_or_else(|| {
        DickeError::LengthMismatch(format!("no series for N = {n_atoms} in sweep"))
    })?;
    critical_point_from_series(sweep.lambda_grid.points(), &series.gp_per_atom())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares `y = slope x + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() {
        return Err(DickeError::LengthMismatch(format!(
            "{} abscissae, {} ordinates",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 2 {
        return Err(DickeError::LadderTooSmall {
            len: xs.len(),
            min: 2,
        });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(DickeError::LengthMismatch(
            "all abscissae coincide".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    let r_squared = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else if ss_res == 0.0 {
        1.0
    } else {
        0.0
    };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub n_ladder: Vec<usize>,
    /// Peak of the total derivative `d gamma0 / d lambda` for each `N`.
    pub peak_slopes: Vec<f64>,
    /// Grid location of each peak.
    pub peak_lambdas: Vec<f64>,
    pub fit: LinearFit,
    /// Thermodynamic-limit coefficient `2 pi lambda_c / w^2`.
    pub target: f64,
}

impl ScalingFit {
    pub fn relative_deviation(&self) -> f64 {
        (self.fit.slope - self.target) / self.target
    }
}

/// Largest entry and its index, first occurrence on ties.
fn arg_max(values: &[f64]) -> (usize, f64) {
    values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| {
            if v > bv {
                (i, v)
            } else {
                (bi, bv)
            }
        })
}

/// Fits the peak total geometric-phase derivative against `N`.
pub fn scaling_fit_from_sweep(sweep: &SweepResult) -> Result<ScalingFit> {
    if sweep.ed.len() < MIN_SCALING_LADDER {
        return Err(DickeError::LadderTooSmall {
            len: sweep.ed.len(),
            min: MIN_SCALING_LADDER,
        });
    }
    let grid = sweep.lambda_grid.points();
    let mut peak_slopes = Vec::new();
    let mut peak_lambdas = Vec::new();
    for series in &sweep.ed {
        let total: Vec<f64> = series
            .gp_per_atom()
            .iter()
            .map(|g| g * series.n_atoms as f64)
            .collect();
        let d = derivative_series(grid, &total)?;
        let (i, peak) = arg_max(&d);
        peak_slopes.push(peak);
        peak_lambdas.push(grid[i]);
    }
    let n_ladder: Vec<usize> = sweep.ed.iter().map(|s| s.n_atoms).collect();
    let xs: Vec<f64> = n_ladder.iter().map(|&n| n as f64).collect();
    let fit = linear_fit(&xs, &peak_slopes)?;
    Ok(ScalingFit {
        n_ladder,
        peak_slopes,
        peak_lambdas,
        fit,
        target: model::gp_slope_at_critical(&sweep.params),
    })
}

pub fn scaling_fit(
    params: &ModelParams,
    n_ladder: &[usize],
    lambda_grid: &LambdaGrid,
    scan: &ScanPolicy,
    workers: usize,
) -> Result<ScalingFit> {
    let mut distinct = n_ladder.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < MIN_SCALING_LADDER {
        return Err(DickeError::LadderTooSmall {
            len: distinct.len(),
            min: MIN_SCALING_LADDER,
        });
    }
    lambda_grid.spacing()?;
    let result = sweep(params, &distinct, lambda_grid, scan, workers)?;
    scaling_fit_from_sweep(&result)
}
