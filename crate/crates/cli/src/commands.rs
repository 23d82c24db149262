//! Subcommand bodies. Each returns data plus the numbers that go into the
//! run summary; printing and exit codes are handled by the caller.

use qbounce::bouncer::Eigenmode;
use qbounce::ermakov::{lewis_angles_on_grid, lewis_invariant, PinneyFunction};
use qbounce::spectra::{compare_spectra, SpectralComparison};
use qbounce::susy::IsospectralPotential;
use serde::Serialize;

use crate::config::{Convention, H2Mode, RunConfig};
use crate::error::{CliError, CliResult};
use crate::series::SampledSeries;

/// Largest relative spread accepted for the consistent invariant.
pub const INVARIANT_SPREAD_LIMIT: f64 = 1e-8;
/// Largest level gap accepted between the two discretized spectra.
pub const SPECTRAL_GAP_LIMIT: f64 = 5e-4;
/// Angle additivity tolerance, relative to the size of the angles.
pub const ADDITIVITY_LIMIT: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct ModeRow {
    pub n: usize,
    pub convention: Convention,
    pub energy: f64,
    pub norm: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModesOutput {
    pub series: SampledSeries,
    pub table: Vec<ModeRow>,
}

pub fn cmd_modes(cfg: &RunConfig, n_max: usize) -> CliResult<ModesOutput> {
    cfg.validate()?;
    if n_max == 0 {
        return Err(CliError::Usage("n-max must be at least 1".into()));
    }
    if cfg.convention == Convention::Paper && n_max > 1 {
        return Err(CliError::Usage("paper constants exist only for the ground state; use --n-max 1".into()));
    }
    let grid = cfg.grid();
    let mut series = SampledSeries::new("modes", "s", grid.clone())?;
    for n in 1..=n_max {
        let mode = Eigenmode::new(n, cfg.constants())?;
        let values = grid.iter().map(|&s| mode.psi(s)).collect::<Result<Vec<_>, _>>()?;
        series.push_column(format!("psi_{n}"), values)?;
    }
    let mut table = Vec::new();
    for n in 1..=n_max.max(1) {
        for convention in [Convention::Paper, Convention::Exact] {
            if convention == Convention::Paper && n > 1 {
                continue;
            }
            let mode = Eigenmode::new(n, convention.into())?;
            table.push(ModeRow { n, convention, energy: mode.energy, norm: mode.norm });
        }
    }
    Ok(ModesOutput { series, table })
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantOutput {
    pub series: SampledSeries,
    pub h_squared: f64,
    pub h_squared_used: f64,
    pub mean: f64,
    pub spread: f64,
    pub relative_spread: f64,
}

impl InvariantOutput {
    pub fn warning(&self, mode: H2Mode) -> Option<String> {
        (mode == H2Mode::Paper && self.relative_spread > INVARIANT_SPREAD_LIMIT).then(|| {
            format!(
                "WARNING: with h^2 = 1 the invariant is not constant (relative spread {:e}); \
                 the Pinney function satisfies h^2 = {:.6}",
                self.relative_spread, self.h_squared
            )
        })
    }

    pub fn verify(&self, mode: H2Mode) -> CliResult<()> {
        if mode == H2Mode::Consistent && !(self.relative_spread < INVARIANT_SPREAD_LIMIT) {
            return Err(CliError::Verification(format!(
                "invariant relative spread {:e} exceeds {INVARIANT_SPREAD_LIMIT:e}",
                self.relative_spread
            )));
        }
        Ok(())
    }
}

pub fn cmd_invariant(cfg: &RunConfig, mode: H2Mode) -> CliResult<InvariantOutput> {
    cfg.validate()?;
    let pf = PinneyFunction::new(cfg.constants());
    let psi = Eigenmode::ground(cfg.constants());
    let h_squared_used = match mode {
        H2Mode::Paper => 1.0,
        H2Mode::Consistent => pf.h_squared(),
    };
    let grid = cfg.grid();
    let values = grid.iter().map(|&s| lewis_invariant(&pf, &psi, s, h_squared_used)).collect::<Result<Vec<_>, _>>()?;
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let mut series = SampledSeries::new("invariant", "s", grid)?;
    series.push_column("I", values)?;
    Ok(InvariantOutput {
        series,
        h_squared: pf.h_squared(),
        h_squared_used,
        mean,
        spread: max - min,
        relative_spread: (max - min) / mean.abs(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct AnglesOutput {
    pub series: SampledSeries,
    /// max |dynamical + geometric - total|
    pub max_additivity_error: f64,
    /// Same, divided by max(1, |dynamical|, |geometric|, |total|) per row.
    pub max_relative_additivity_error: f64,
    pub total_nondecreasing: bool,
}

impl AnglesOutput {
    pub fn verify(&self) -> CliResult<()> {
        if !(self.max_relative_additivity_error <= ADDITIVITY_LIMIT) {
            return Err(CliError::Verification(format!(
                "angle additivity error {:e} exceeds {ADDITIVITY_LIMIT:e}",
                self.max_relative_additivity_error
            )));
        }
        if !self.total_nondecreasing {
            return Err(CliError::Verification("total angle decreases along the grid".into()));
        }
        Ok(())
    }
}

pub fn cmd_angles(cfg: &RunConfig) -> CliResult<AnglesOutput> {
    cfg.validate()?;
    let pf = PinneyFunction::new(cfg.constants());
    let grid = cfg.grid();
    let angles = lewis_angles_on_grid(&pf, &grid, cfg.tolerance).map_err(|e| match e {
        qbounce::Error::QuadratureNotConverged { a, b, .. } => {
            CliError::Verification(format!("quadrature failed between T = {a} and T = {b}: {e}"))
        }
        other => CliError::Compute(other),
    })?;
    let mut columns = [Vec::new(), Vec::new(), Vec::new()];
    let (mut abs_err, mut rel_err) = (0.0f64, 0.0f64);
    for a in &angles {
        let err = (a.dynamical + a.geometric - a.total).abs();
        let scale = [1.0, a.dynamical.abs(), a.geometric.abs(), a.total.abs()].into_iter().fold(0.0, f64::max);
        abs_err = abs_err.max(err);
        rel_err = rel_err.max(err / scale);
        columns[0].push(a.dynamical);
        columns[1].push(a.geometric);
        columns[2].push(a.total);
    }
    let total_nondecreasing = columns[2].windows(2).all(|w| w[1] >= w[0]);
    let mut series = SampledSeries::new("angles", "T", grid)?;
    for (label, values) in ["dynamical", "geometric", "total"].into_iter().zip(columns) {
        series.push_column(label, values)?;
    }
    Ok(AnglesOutput {
        series,
        max_additivity_error: abs_err,
        max_relative_additivity_error: rel_err,
        total_nondecreasing,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SusyOutput {
    pub series: SampledSeries,
    pub lambda: f64,
    pub deformed_norm: f64,
    /// I0 at the last grid point.
    pub i0_final: f64,
    /// Trapezoid estimate of the integral of phi_1^2 over the grid.
    pub phi_norm_trapezoid: f64,
}

pub fn cmd_susy(cfg: &RunConfig) -> CliResult<SusyOutput> {
    cfg.validate()?;
    cfg.validate_lambda()?;
    let pot = IsospectralPotential::new(cfg.lambda, cfg.constants())?;
    let grid = cfg.grid();
    let i0: Vec<f64> = grid.iter().map(|&s| pot.i0(s)).collect();
    let v = grid.iter().map(|&s| pot.family_potential(s)).collect::<Result<Vec<_>, _>>()?;
    let psi = grid.iter().map(|&s| pot.ground_mode().psi(s)).collect::<Result<Vec<_>, _>>()?;
    let phi = grid.iter().map(|&s| pot.deformed_ground_state(s)).collect::<Result<Vec<_>, _>>()?;
    let phi_norm_trapezoid = grid
        .windows(2)
        .zip(phi.windows(2))
        .map(|(s, p)| 0.5 * (s[1] - s[0]) * (p[0] * p[0] + p[1] * p[1]))
        .sum();
    let i0_final = *i0.last().expect("grid has at least two points");
    let mut series = SampledSeries::new("susy", "s", grid)?;
    series.push_column("I0", i0)?;
    series.push_column("V", v)?;
    series.push_column("psi_1", psi)?;
    series.push_column("phi_1", phi)?;
    Ok(SusyOutput { series, lambda: cfg.lambda, deformed_norm: pot.norm(), i0_final, phi_norm_trapezoid })
}

pub fn cmd_spectrum(cfg: &RunConfig, length: f64, points: usize, k: usize) -> CliResult<SpectralComparison> {
    cfg.validate_lambda()?;
    if cfg.convention != Convention::Exact {
        return Err(CliError::Usage("the spectral comparison is defined for the exact convention only".into()));
    }
    if k == 0 {
        return Err(CliError::Usage("k must be at least 1".into()));
    }
    if k > qbounce::spectra::MAX_LEVELS {
        return Err(CliError::Usage(format!("k must not exceed {}", qbounce::spectra::MAX_LEVELS)));
    }
    if points < qbounce::spectra::MIN_POINTS {
        return Err(CliError::Usage(format!("points must be at least {}", qbounce::spectra::MIN_POINTS)));
    }
    if !(length > 0.0 && length.is_finite()) {
        return Err(CliError::Usage(format!("L must be positive, got {length}")));
    }
    compare_spectra(cfg.lambda, length, points, k).map_err(|e| match e {
        qbounce::Error::BoxTooSmall { .. } => CliError::Usage(e.to_string()),
        other => CliError::Compute(other),
    })
}

pub fn verify_spectrum(cmp: &SpectralComparison) -> CliResult<()> {
    if !(cmp.max_pairwise_gap < SPECTRAL_GAP_LIMIT) {
        return Err(CliError::Verification(format!(
            "max pairwise gap {:e} is not below {SPECTRAL_GAP_LIMIT:e}",
            cmp.max_pairwise_gap
        )));
    }
    Ok(())
}

/// Levels as a table indexed by `n`.
pub fn spectrum_series(cmp: &SpectralComparison) -> CliResult<SampledSeries> {
    let grid = (1..=cmp.k).map(|n| n as f64).collect();
    let mut series = SampledSeries::new("spectrum", "n", grid)?;
    series.push_column("airy_zero", cmp.airy_reference.clone())?;
    series.push_column("qbb", cmp.eigenvalues_qbb.clone())?;
    series.push_column("lambda", cmp.eigenvalues_lambda.clone())?;
    Ok(series)
}

pub fn spectrum_table(cmp: &SpectralComparison) -> String {
    let mut out = format!(
        "lambda = {}, L = {}, points = {}, max pairwise gap = {:.3e}\n",
        cmp.lambda, cmp.length, cmp.points, cmp.max_pairwise_gap
    );
    out.push_str(" n          a_n        E_qbb     E_lambda          gap\n");
    for n in 0..cmp.k {
        let (a, q, l) = (cmp.airy_reference[n], cmp.eigenvalues_qbb[n], cmp.eigenvalues_lambda[n]);
        out.push_str(&format!("{:2} {:12.8} {:12.8} {:12.8} {:12.3e}\n", n + 1, a, q, l, (q - l).abs()));
    }
    out
}

/// Default convention when `--convention` is not given.
pub fn default_convention(command: &str) -> Convention {
    match command {
        "invariant" | "angles" => Convention::Paper,
        _ => Convention::Exact,
    }
}
