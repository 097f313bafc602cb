//! Command dispatch. Every command returns a [`Report`]; nothing is written
//! until the whole computation has finished.

use std::str::FromStr;

use lasercool_core::cooling::{
    gamma_opt_lorentzian, n_opt_approx, optimal_kappa_tilde, optimal_phonon_number, optimize_pump, phonon_number_rate,
    CoolingResult, Route,
};
use lasercool_core::grid::{default_grid, linspace, log_symmetric, logspace};
use lasercool_core::phonon::PhononModel;
use lasercool_core::spectra::{snn, spectrum_on_grid};
use lasercool_core::steady_state::seeded_photon_number;
use lasercool_core::{
    derive_working_point, diffusion_coefficients, DriveSpec, Error, LaserParams, Method, Model, WorkingPoint,
};
use rayon::prelude::*;

use crate::config::{RunConfig, SweepSpec};
use crate::error::{CliError, Result};
use crate::output::{Cell, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    F1,
    F2,
    F3a,
    F3b,
    F4,
    F5,
}

impl FromStr for FigureId {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "1" => FigureId::F1,
            "2" => FigureId::F2,
            "3a" => FigureId::F3a,
            "3b" => FigureId::F3b,
            "4" => FigureId::F4,
            "5" => FigureId::F5,
            _ => return Err(CliError::validation(format!("unknown figure `{s}`; expected 1, 2, 3a, 3b, 4 or 5"))),
        })
    }
}

impl FigureId {
    pub fn name(self) -> &'static str {
        match self {
            FigureId::F1 => "1",
            FigureId::F2 => "2",
            FigureId::F3a => "3a",
            FigureId::F3b => "3b",
            FigureId::F4 => "4",
            FigureId::F5 => "5",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Derive,
    SteadyState,
    Spectrum,
    Cooling,
    PhononSpectrum,
    Sweep,
    OptimizePump,
    Figure(FigureId),
}

impl Command {
    pub fn name(&self) -> String {
        match self {
            Command::Derive => "derive".into(),
            Command::SteadyState => "steady-state".into(),
            Command::Spectrum => "spectrum".into(),
            Command::Cooling => "cooling".into(),
            Command::PhononSpectrum => "phonon-spectrum".into(),
            Command::Sweep => "sweep".into(),
            Command::OptimizePump => "optimize-pump".into(),
            Command::Figure(id) => format!("figure {}", id.name()),
        }
    }
}

pub fn run(command: &Command, cfg: &RunConfig) -> Result<Report> {
    match command {
        Command::Derive => derive(cfg),
        Command::SteadyState => steady_state(cfg),
        Command::Spectrum => spectrum(cfg),
        Command::Cooling => cooling(cfg),
        Command::PhononSpectrum => phonon_spectrum(cfg),
        Command::Sweep => sweep(cfg),
        Command::OptimizePump => optimize(cfg),
        Command::Figure(FigureId::F1) => figure1(cfg),
        Command::Figure(FigureId::F2) => figure2(cfg),
        Command::Figure(FigureId::F3a) => figure3a(cfg),
        Command::Figure(FigureId::F3b) => figure3b(cfg),
        Command::Figure(FigureId::F4) => figure4(cfg),
        Command::Figure(FigureId::F5) => figure5(cfg),
    }
}

fn working_point(cfg: &RunConfig) -> Result<WorkingPoint> {
    Ok(derive_working_point(&cfg.laser, &cfg.mech, &cfg.drive)?)
}

fn route(cfg: &RunConfig) -> Route {
    Route::new(cfg.model(), cfg.method).with_fpar(cfg.include_fpar())
}

fn passive_route() -> Route {
    Route::new(Model::Passive, Method::ClosedForm)
}

fn error_name(e: &Error) -> Cell {
    Cell::Text(e.variant_name().to_string())
}

fn derive(cfg: &RunConfig) -> Result<Report> {
    let wp = working_point(cfg)?;
    let mut r = Report::new("derive", cfg, Some(&wp)).columns(&["quantity", "value"]);
    r.rows = r.working_point.iter().map(|(k, v)| vec![Cell::from(k.as_str()), Cell::from(*v)]).collect();
    Ok(r)
}

fn steady_state(cfg: &RunConfig) -> Result<Report> {
    let cols = ["branch", "n_bar", "d_bar", "xi", "kappa_tilde", "delta_tilde", "field_phase"];
    match cfg.drive {
        DriveSpec::SeededAmplitude { omega_s, .. } => {
            // list every steady state, not only the selected branch
            let states = seeded_photon_number(&cfg.laser, omega_s);
            let wp = working_point(cfg).ok();
            let mut r = Report::new("steady-state", cfg, wp.as_ref()).columns(&cols);
            r.summary("roots", states.roots.len() as f64);
            r.summary("bistable", states.multiple);
            for (i, root) in states.roots.iter().enumerate() {
                let drive = DriveSpec::SeededAmplitude { omega_s, branch: Some(i) };
                let wp = derive_working_point(&cfg.laser, &cfg.mech, &drive)?;
                r.rows.push(vec![
                    (i as f64).into(),
                    wp.n_bar.into(),
                    wp.d_bar.into(),
                    wp.xi.into(),
                    wp.kappa_tilde.into(),
                    wp.delta_tilde.into(),
                    root.a_bar_raw.arg().into(),
                ]);
            }
            Ok(r)
        }
        _ => {
            let wp = working_point(cfg)?;
            let mut r = Report::new("steady-state", cfg, Some(&wp)).columns(&cols);
            r.rows.push(vec![
                0.0.into(),
                wp.n_bar.into(),
                wp.d_bar.into(),
                wp.xi.into(),
                wp.kappa_tilde.into(),
                wp.delta_tilde.into(),
                wp.field_phase.into(),
            ]);
            Ok(r)
        }
    }
}

fn spectrum(cfg: &RunConfig) -> Result<Report> {
    let wp = working_point(cfg)?;
    let noise = diffusion_coefficients(&wp);
    let grid = cfg.grid.points().unwrap_or_else(|| default_grid(&wp));
    let res = spectrum_on_grid(cfg.model(), &wp, &noise, &grid, cfg.method, cfg.include_fpar())?;
    let mut r = Report::new("spectrum", cfg, Some(&wp)).columns(&["omega", "snn"]);
    r.rows = res.omega_grid.iter().zip(&res.values).map(|(&w, &s)| vec![w.into(), s.into()]).collect();
    Ok(r)
}

const COOLING_COLUMNS: [&str; 9] =
    ["gamma_opt", "n_opt", "n_m", "optical_part", "thermal_part", "t_opt", "s_plus", "s_minus", "branch"];

fn cooling_cells(c: &CoolingResult) -> Vec<Cell> {
    vec![
        c.gamma_opt.into(),
        c.n_opt.into(),
        c.n_m.into(),
        c.optical_part.into(),
        c.thermal_part.into(),
        c.t_opt.into(),
        c.s_plus.into(),
        c.s_minus.into(),
        Cell::Text(format!("{:?}", c.branch).to_lowercase()),
    ]
}

fn nan_cells(n: usize, e: &Error) -> Vec<Cell> {
    let mut v = vec![Cell::Num(f64::NAN); n - 1];
    v.push(error_name(e));
    v
}

fn cooling(cfg: &RunConfig) -> Result<Report> {
    let wp = working_point(cfg)?;
    let noise = diffusion_coefficients(&wp);
    let res = phonon_number_rate(route(cfg), &wp, &noise)?;
    let mut r = Report::new("cooling", cfg, Some(&wp)).columns(&COOLING_COLUMNS);
    if wp.is_seeded() {
        r.summary("n_opt_approx", n_opt_approx(&wp).ok());
        r.summary("gamma_opt_lorentzian", gamma_opt_lorentzian(&wp, wp.mech.omega_m).ok());
    }
    r.rows.push(cooling_cells(&res));
    Ok(r)
}

fn phonon_spectrum(cfg: &RunConfig) -> Result<Report> {
    let wp = working_point(cfg)?;
    let noise = diffusion_coefficients(&wp);
    let model = PhononModel::new(&wp, &noise, cfg.include_fpar())?;
    let grid = match cfg.grid.points() {
        Some(g) => g,
        None => {
            let m = &wp.mech;
            let half = (5.0 * wp.a_bar * m.coupling).max(0.01 * m.omega_m);
            let mut g = linspace(-m.omega_m - half, -m.omega_m + half, 1601);
            g.extend(linspace(m.omega_m - half, m.omega_m + half, 1601));
            g
        }
    };
    let values: Vec<f64> = grid.par_iter().map(|&w| model.sbb(w)).collect::<lasercool_core::Result<_>>()?;
    let integral = model.integrate(1e-8)?;
    let split = model.mode_splitting()?;
    let mut r = Report::new("phonon-spectrum", cfg, Some(&wp)).columns(&["omega", "sbb"]);
    r.summary("n_m_integrated", integral.n_m);
    r.summary("integration_error", integral.error);
    r.summary("peaks", split.peaks.len() as f64);
    r.summary("splitting", split.splitting);
    r.summary("regime", format!("{:?}", split.regime).to_lowercase());
    r.rows = grid.iter().zip(values).map(|(&w, s)| vec![w.into(), s.into()]).collect();
    Ok(r)
}

fn sweep(cfg: &RunConfig) -> Result<Report> {
    let spec: &SweepSpec =
        cfg.sweep.as_ref().ok_or_else(|| CliError::validation("sweep needs `sweep_param` and `sweep_range` (or --param/--range)"))?;
    let values = spec.values();
    let configs: Vec<RunConfig> = values
        .iter()
        .map(|&v| {
            let mut c = cfg.clone();
            c.set_param(&spec.param, v)?;
            Ok(c)
        })
        .collect::<Result<_>>()?;

    let mut cols = vec![spec.param.as_str(), "d0_over_dth", "xi", "n_bar", "kappa_tilde", "delta_tilde"];
    cols.extend(COOLING_COLUMNS);
    let width = cols.len();
    let rows: Vec<Vec<Cell>> = values
        .par_iter()
        .zip(&configs)
        .map(|(&v, c)| {
            let mut row = vec![Cell::from(v)];
            match working_point(c) {
                Err(CliError::Physics(e)) => row.extend(nan_cells(width - 1, &e)),
                Err(e) => row.extend(nan_cells(width - 1, &Error::InvalidParameter(e.to_string()))),
                Ok(wp) => {
                    row.extend([
                        Cell::from(wp.laser.d0 / wp.d_th),
                        wp.xi.into(),
                        wp.n_bar.into(),
                        wp.kappa_tilde.into(),
                        wp.delta_tilde.into(),
                    ]);
                    let noise = diffusion_coefficients(&wp);
                    match phonon_number_rate(route(c), &wp, &noise) {
                        Ok(res) => row.extend(cooling_cells(&res)),
                        Err(e) => row.extend(nan_cells(COOLING_COLUMNS.len(), &e)),
                    }
                }
            }
            row
        })
        .collect();
    let mut r = Report::new("sweep", cfg, None).columns(&cols);
    r.rows = rows;
    Ok(r)
}

fn optimize(cfg: &RunConfig) -> Result<Report> {
    let DriveSpec::SeededPhotonNumber { n_target } = cfg.drive else {
        return Err(CliError::validation("optimize-pump needs drive = seeded with n_target"));
    };
    let d_th = cfg.laser.threshold_inversion();
    let (lo, hi) = cfg.optimize_range.map(|(a, b)| (a * d_th, b * d_th)).unwrap_or((0.0, cfg.laser.n_g));
    let opt = optimize_pump(&cfg.laser, &cfg.mech, n_target, (lo, hi))?;
    let mut r = Report::new("optimize-pump", cfg, None).columns(&[
        "d0",
        "d0_over_dth",
        "kappa_tilde",
        "n_m",
        "gamma_opt",
        "d0_upper",
        "predicted_kappa_tilde",
        "predicted_n_m",
    ]);
    r.rows.push(vec![
        opt.d0.into(),
        opt.d0_over_dth.into(),
        opt.kappa_tilde.into(),
        opt.n_m.into(),
        opt.cooling.gamma_opt.into(),
        opt.d0_upper.into(),
        opt.predicted_kappa_tilde.into(),
        opt.predicted_n_m.into(),
    ]);
    Ok(r)
}

fn require_seeded(cfg: &RunConfig, figure: &str) -> Result<()> {
    if cfg.drive.is_seeded() {
        Ok(())
    } else {
        Err(CliError::validation(format!("figure {figure} needs a seeded drive")))
    }
}

/// Γ_opt/G² and S_nn of the seeded laser against the empty cavity holding
/// the same photon number.
fn figure1(cfg: &RunConfig) -> Result<Report> {
    require_seeded(cfg, "1")?;
    let wp = working_point(cfg)?;
    let noise = diffusion_coefficients(&wp);
    let active = Route::new(Model::Seeded, cfg.method);
    let passive = passive_route();
    let grid = cfg.grid.points().unwrap_or_else(|| linspace(-3.0, 3.0, 6000));
    let rows: Vec<Vec<Cell>> = grid
        .par_iter()
        .map(|&w| -> lasercool_core::Result<Vec<Cell>> {
            let (sa, sa_neg) = active.sidebands(&wp, &noise, w)?;
            let (sp, sp_neg) = passive.sidebands(&wp, &noise, w)?;
            let (ga, gp) = (sa - sa_neg, sp - sp_neg);
            let ratio = if gp != 0.0 { ga / gp } else { f64::NAN };
            Ok(vec![w.into(), ga.into(), gp.into(), ratio.into(), sa.into(), sp.into()])
        })
        .collect::<lasercool_core::Result<_>>()?;
    let max_of = |i: usize| rows.iter().filter_map(|r| r[i].as_f64()).filter(|x| x.is_finite()).fold(f64::NEG_INFINITY, f64::max);
    let mut r = Report::new("figure 1", cfg, Some(&wp)).columns(&[
        "omega",
        "gamma_opt_per_g2_seeded",
        "gamma_opt_per_g2_passive",
        "ratio",
        "snn_seeded",
        "snn_passive",
    ]);
    let (ga_max, gp_max) = (max_of(1), max_of(2));
    r.summary("gamma_max_seeded_per_g2", ga_max);
    r.summary("gamma_max_passive_per_g2", gp_max);
    r.summary("ratio_of_maxima", ga_max / gp_max);
    r.summary("ratio_max", max_of(3));
    r.rows = rows;
    Ok(r)
}

/// Phonon number against G/κ, seeded and passive, with the two contributions.
fn figure2(cfg: &RunConfig) -> Result<Report> {
    require_seeded(cfg, "2")?;
    let base = working_point(cfg)?;
    let noise = diffusion_coefficients(&base);
    let ratios = logspace(1e-5, 1e-2, 60);
    let active = Route::new(Model::Seeded, cfg.method);
    let rows: Vec<Vec<Cell>> = ratios
        .par_iter()
        .map(|&x| -> lasercool_core::Result<Vec<Cell>> {
            // the coupling does not enter the optical working point
            let mut wp = base.clone();
            wp.mech.coupling = x * wp.laser.kappa;
            let s = phonon_number_rate(active, &wp, &noise)?;
            let p = phonon_number_rate(passive_route(), &wp, &noise)?;
            Ok(vec![
                x.into(),
                wp.mech.coupling.into(),
                s.gamma_opt.into(),
                s.n_m.into(),
                s.optical_part.into(),
                s.thermal_part.into(),
                s.n_opt.into(),
                p.gamma_opt.into(),
                p.n_m.into(),
                p.optical_part.into(),
                p.thermal_part.into(),
            ])
        })
        .collect::<lasercool_core::Result<_>>()?;
    let mut r = Report::new("figure 2", cfg, Some(&base)).columns(&[
        "g_over_kappa",
        "coupling",
        "gamma_opt_seeded",
        "n_m_seeded",
        "optical_part_seeded",
        "thermal_part_seeded",
        "n_opt_seeded",
        "gamma_opt_passive",
        "n_m_passive",
        "optical_part_passive",
        "thermal_part_passive",
    ]);
    let (imin, nmin) = rows
        .iter()
        .enumerate()
        .filter_map(|(i, row)| row[3].as_f64().map(|v| (i, v)))
        .fold((0, f64::INFINITY), |b, (i, v)| if v < b.1 { (i, v) } else { b });
    r.summary("n_m_seeded_min", nmin);
    r.summary("g_over_kappa_at_min", ratios[imin]);
    let crossover = rows
        .iter()
        .take_while(|row| row[3].as_f64() < row[8].as_f64())
        .last()
        .and_then(|row| row[0].as_f64());
    r.summary("seeded_below_passive_up_to", crossover);
    r.rows = rows;
    Ok(r)
}

fn laser_at(cfg: &RunConfig, d0_over_dth: f64) -> LaserParams {
    LaserParams { d0: d0_over_dth * cfg.laser.threshold_inversion(), ..cfg.laser }
}

/// Phonon number against the pump: rate equations, the balance-point
/// approximation and the integrated phonon spectrum.
fn figure3a(cfg: &RunConfig) -> Result<Report> {
    require_seeded(cfg, "3a")?;
    let wp0 = working_point(cfg)?;
    let active = Route::new(Model::Seeded, cfg.method);
    let passive = phonon_number_rate(passive_route(), &wp0, &diffusion_coefficients(&wp0))?;
    let grid = linspace(0.0, 1.5, 151);
    let cols = [
        "d0_over_dth",
        "kappa_tilde",
        "gamma_opt",
        "n_m",
        "optical_part",
        "thermal_part",
        "n_m_integrated",
        "n_m_passive",
        "branch",
    ];
    let rows: Vec<Vec<Cell>> = grid
        .par_iter()
        .map(|&x| -> lasercool_core::Result<Vec<Cell>> {
            let wp = derive_working_point(&laser_at(cfg, x), &cfg.mech, &cfg.drive)?;
            let noise = diffusion_coefficients(&wp);
            let mut row = vec![Cell::from(x), wp.kappa_tilde.into()];
            let rate = phonon_number_rate(active, &wp, &noise);
            let integrated = PhononModel::new(&wp, &noise, false).and_then(|m| m.integrate(1e-8));
            match &rate {
                Ok(c) => row.extend([
                    Cell::from(c.gamma_opt),
                    c.n_m.into(),
                    c.optical_part.into(),
                    c.thermal_part.into(),
                ]),
                Err(_) => row.extend(std::iter::repeat_n(Cell::Num(f64::NAN), 4)),
            }
            row.push(integrated.as_ref().map(|i| i.n_m).unwrap_or(f64::NAN).into());
            row.push(passive.n_m.into());
            row.push(match (&rate, &integrated) {
                (Ok(c), _) => Cell::Text(format!("{:?}", c.branch).to_lowercase()),
                (Err(e), _) => error_name(e),
            });
            Ok(row)
        })
        .collect::<lasercool_core::Result<_>>()?;

    let DriveSpec::SeededPhotonNumber { n_target } = cfg.drive else {
        return Err(CliError::validation("figure 3a needs drive = seeded with n_target"));
    };
    let kt = optimal_kappa_tilde(&cfg.laser, &cfg.mech, n_target);
    // κ̃ = κ − W D0 / (2(1+ξ)) at fixed n̄
    let d0_star = 2.0 * (cfg.laser.kappa - kt) * (1.0 + wp0.xi) / wp0.w;
    let mut r = Report::new("figure 3a", cfg, Some(&wp0)).columns(&cols);
    r.summary("kappa_zero_d0_over_dth", 1.0 + wp0.xi);
    r.summary("approx_kappa_tilde", kt);
    r.summary("approx_d0_over_dth", d0_star / wp0.d_th);
    r.summary("approx_n_m", optimal_phonon_number(&cfg.laser, &cfg.mech, n_target));
    r.rows = rows;
    Ok(r)
}

/// Pump-optimized phonon number at several mechanical frequencies, each with
/// the cavity on the red sideband.
fn figure3b(cfg: &RunConfig) -> Result<Report> {
    let DriveSpec::SeededPhotonNumber { n_target } = cfg.drive else {
        return Err(CliError::validation("figure 3b needs drive = seeded with n_target"));
    };
    let omegas = [0.3, 0.5, 1.0, 2.0, 4.0];
    let rows: Vec<Vec<Cell>> = omegas
        .par_iter()
        .map(|&om| -> lasercool_core::Result<Vec<Cell>> {
            let mech = lasercool_core::MechanicsParams { omega_m: om, ..cfg.mech };
            let opt = optimize_pump(&cfg.laser, &mech, n_target, (0.0, cfg.laser.n_g))?;
            let fit = opt.predicted_n_m * (1.0 + 6.0 * (opt.kappa_tilde / om).powi(2));
            Ok(vec![
                om.into(),
                opt.d0_over_dth.into(),
                opt.kappa_tilde.into(),
                opt.n_m.into(),
                opt.predicted_kappa_tilde.into(),
                opt.predicted_n_m.into(),
                fit.into(),
            ])
        })
        .collect::<lasercool_core::Result<_>>()?;
    let mut r = Report::new("figure 3b", cfg, None).columns(&[
        "omega_m",
        "d0_over_dth",
        "kappa_tilde",
        "n_m",
        "predicted_kappa_tilde",
        "predicted_n_m",
        "fit",
    ]);
    r.rows = rows;
    Ok(r)
}

/// S_b†b over (D0, ω) near ω = −ω_m. Unstable working points get NaN and
/// stable = 0.
fn figure4(cfg: &RunConfig) -> Result<Report> {
    require_seeded(cfg, "4")?;
    let wp0 = working_point(cfg)?;
    let m = &cfg.mech;
    let half = (5.0 * wp0.a_bar * m.coupling).max(0.01 * m.omega_m);
    let omegas = cfg.grid.points().unwrap_or_else(|| linspace(-m.omega_m - half, -m.omega_m + half, 401));
    let pumps = linspace(0.0, 1.4, 71);
    let blocks: Vec<Vec<Vec<Cell>>> = pumps
        .par_iter()
        .map(|&x| -> lasercool_core::Result<Vec<Vec<Cell>>> {
            let wp = derive_working_point(&laser_at(cfg, x), &cfg.mech, &cfg.drive)?;
            let noise = diffusion_coefficients(&wp);
            let model = match PhononModel::new(&wp, &noise, false) {
                Ok(model) => model,
                Err(Error::Unstable { .. }) => {
                    return Ok(omegas.iter().map(|&w| vec![x.into(), w.into(), f64::NAN.into(), f64::NAN.into(), false.into()]).collect())
                }
                Err(e) => return Err(e),
            };
            omegas
                .iter()
                .map(|&w| {
                    let s = model.sbb(w)?;
                    Ok(vec![x.into(), w.into(), s.into(), s.log10().into(), true.into()])
                })
                .collect()
        })
        .collect::<lasercool_core::Result<_>>()?;
    let mut r = Report::new("figure 4", cfg, Some(&wp0)).columns(&["d0_over_dth", "omega", "sbb", "log10_sbb", "stable"]);
    r.summary("a_bar_g", wp0.a_bar * m.coupling);
    r.rows = blocks.into_iter().flatten().collect();
    Ok(r)
}

/// Free-running laser: adiabatic closed form against the model with a
/// dynamical polarization, plus the latter's asymmetry.
fn figure5(cfg: &RunConfig) -> Result<Report> {
    if cfg.drive.is_seeded() {
        return Err(CliError::validation("figure 5 needs drive = unseeded"));
    }
    let wp = working_point(cfg)?;
    let noise = diffusion_coefficients(&wp);
    let grid = cfg.grid.points().unwrap_or_else(|| log_symmetric(1.0, 1e-3, 1.0, 400));
    let rows: Vec<Vec<Cell>> = grid
        .par_iter()
        .map(|&w| -> lasercool_core::Result<Vec<Cell>> {
            let adiabatic = snn(Model::UnseededAdiabatic, &wp, &noise, w, Method::ClosedForm, true)?;
            let full = snn(Model::FullPolarization, &wp, &noise, w, Method::Matrix, true)?;
            let mirror = snn(Model::FullPolarization, &wp, &noise, -w, Method::Matrix, true)?;
            let asym = (full - mirror).abs();
            Ok(vec![
                w.into(),
                adiabatic.into(),
                full.into(),
                ((full - adiabatic) / adiabatic).into(),
                asym.into(),
                (asym / full).into(),
            ])
        })
        .collect::<lasercool_core::Result<_>>()?;
    let mut r = Report::new("figure 5", cfg, Some(&wp)).columns(&[
        "omega",
        "snn_adiabatic",
        "snn_full",
        "rel_diff",
        "asymmetry",
        "rel_asymmetry",
    ]);
    r.rows = rows;
    Ok(r)
}
