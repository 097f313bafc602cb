//! Reference values at the published parameter sets, computed independently.

use approx::assert_relative_eq;
use lasercool_core::cooling::{gamma_opt, gamma_opt_lorentzian, gamma_opt_max, n_opt, Route};
use lasercool_core::grid::{default_grid, linspace};
use lasercool_core::phonon::{integrate_phonon_number, PhononModel};
use lasercool_core::spectra::{snn, snn_full_polarization, snn_unseeded, spectrum_on_grid};
use lasercool_core::steady_state::line_pulling_cavity_detuning;
use lasercool_core::{
    derive_working_point, diffusion_coefficients, DriveSpec, Error, LaserParams, MechanicsParams, Method, Model,
    WorkingPoint,
};

fn fig1_laser() -> LaserParams {
    let mut p = LaserParams {
        gamma_perp: 10.0,
        gamma_par: 0.1,
        kappa: 0.1,
        g: 1e-3,
        n_g: 1.0,
        d0: 0.0,
        delta_la: 1.0,
        delta_lr: -1.0,
        n_bb: 0.0,
    };
    let d_th = p.threshold_inversion();
    p.n_g = 1.5 * d_th;
    p.d0 = 1.2 * d_th;
    p
}

fn mech() -> MechanicsParams {
    MechanicsParams { omega_m: 1.0, gamma_m: 2e-5, n_th: 1e3, coupling: 3e-5 }
}

fn seeded(laser: &LaserParams) -> WorkingPoint {
    derive_working_point(laser, &mech(), &DriveSpec::SeededPhotonNumber { n_target: 1e5 }).unwrap()
}

fn fig5() -> WorkingPoint {
    let mut l = LaserParams {
        gamma_perp: 10.0,
        gamma_par: 0.1,
        kappa: 0.1,
        g: 1e-3,
        n_g: 1.0,
        d0: 0.0,
        delta_la: 10.0,
        delta_lr: 0.0,
        n_bb: 0.0,
    };
    l.delta_lr = line_pulling_cavity_detuning(l.delta_la, l.kappa, l.gamma_perp);
    let d_th = l.threshold_inversion();
    l.n_g = 10.0 * d_th;
    l.d0 = d_th * (1.0 + 1e5 / l.saturation_photon_number());
    derive_working_point(&l, &mech(), &DriveSpec::Unseeded).unwrap()
}

#[test]
fn fig1_working_point() {
    let wp = seeded(&fig1_laser());
    assert!((wp.xi - 0.396).abs() < 1e-3);
    assert!((wp.laser.kappa / wp.kappa_tilde - 7.12).abs() < 1e-2);
    let noise = diffusion_coefficients(&wp);
    assert_relative_eq!(noise.d_ada_se, 0.236_127_659_574_468_1, max_relative = 1e-12);
}

#[test]
fn fig5_working_point() {
    let wp = fig5();
    assert_relative_eq!(wp.n_bar, 1e5, max_relative = 1e-12);
    assert_eq!(wp.d_bar, wp.d_th);
    assert!(wp.xi <= 1.0);
}

#[test]
fn fig1_peak_damping() {
    let wp = seeded(&fig1_laser());
    let noise = diffusion_coefficients(&wp);
    let route = Route::new(Model::Seeded, Method::Matrix);
    let grid = linspace(0.8, 1.2, 4001);
    let exact = grid
        .iter()
        .map(|&w| gamma_opt(route, &wp, &noise, w).unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    let approx = grid.iter().map(|&w| gamma_opt_lorentzian(&wp, w).unwrap()).fold(f64::NEG_INFINITY, f64::max);
    assert!((exact - approx).abs() < 0.05 * exact, "{exact} {approx}");
    let max = gamma_opt_max(&wp, 1.0).unwrap().gamma_opt;
    assert!((exact - max).abs() < 0.05 * exact, "{exact} {max}");
}

#[test]
fn fig2_exact_bath_occupation_is_close_to_nine() {
    let wp = seeded(&fig1_laser());
    let noise = diffusion_coefficients(&wp);
    let n = n_opt(Route::new(Model::Seeded, Method::Matrix), &wp, &noise, 1.0).unwrap();
    assert!((8.0..10.0).contains(&n), "{n}");
}

#[test]
fn seeded_peaks_sit_near_the_shifted_detuning() {
    let l = fig1_laser();
    let wp = seeded(&l);
    let noise = diffusion_coefficients(&wp);
    let mut passive = l;
    passive.g = 0.0;
    passive.d0 = 0.0;
    let wpp = seeded(&passive);
    let np = diffusion_coefficients(&wpp);
    for sign in [-1.0, 1.0] {
        let centre = sign * wp.delta_tilde;
        let grid = linspace(centre - 3.0 * wp.kappa_tilde, centre + 3.0 * wp.kappa_tilde, 2001);
        let r = spectrum_on_grid(Model::Seeded, &wp, &noise, &grid, Method::Matrix, false).unwrap();
        let (i, peak) = r.values.iter().enumerate().fold((0, f64::MIN), |b, (i, &v)| if v > b.1 { (i, v) } else { b });
        assert!((grid[i] - centre).abs() < wp.kappa_tilde);
        let passive_value = snn(Model::Passive, &wpp, &np, grid[i], Method::ClosedForm, false).unwrap();
        assert!(peak > passive_value);
    }
}

#[test]
fn fig5_full_polarization() {
    let wp = fig5();
    let noise = diffusion_coefficients(&wp);
    for w in [0.02, 0.05, 0.07] {
        let full = snn_full_polarization(&wp, &noise, w).unwrap();
        let adiabatic = snn_unseeded(&wp, &noise, w, true);
        assert!((full - adiabatic).abs() < 0.02 * adiabatic, "{w} {full} {adiabatic}");
        let mirror = snn_full_polarization(&wp, &noise, -w).unwrap();
        assert!((full - mirror).abs() < 1e-2 * full);
    }
}

#[test]
fn default_grid_spectrum_is_non_negative() {
    let wp = fig5();
    let noise = diffusion_coefficients(&wp);
    let grid = default_grid(&wp);
    for (model, method) in [
        (Model::UnseededAdiabatic, Method::Matrix),
        (Model::UnseededAdiabatic, Method::ClosedForm),
        (Model::FullPolarization, Method::Matrix),
    ] {
        let r = spectrum_on_grid(model, &wp, &noise, &grid, method, true).unwrap();
        let peak = r.values.iter().fold(0.0f64, |m, v| m.max(*v));
        assert!(r.values.iter().all(|&v| v >= -1e-12 * peak));
    }
}

#[test]
fn quadrature_is_stable_under_tolerance_changes() {
    let wp = seeded(&fig1_laser());
    let noise = diffusion_coefficients(&wp);
    let model = PhononModel::new(&wp, &noise, false).unwrap();
    let a = model.integrate(1e-8).unwrap();
    let b = model.integrate(5e-9).unwrap();
    assert!((a.n_m - b.n_m).abs() <= a.error.max(1e-9 * a.n_m));
    assert_eq!(integrate_phonon_number(&wp, &noise, false).unwrap().n_m, a.n_m);
}

#[test]
fn unstable_working_point_is_reported() {
    let mut l = fig1_laser();
    l.d0 = 1.45 * l.threshold_inversion();
    let wp = seeded(&l);
    assert!(wp.kappa_tilde < 0.0);
    let noise = diffusion_coefficients(&wp);
    assert!(matches!(PhononModel::new(&wp, &noise, false), Err(Error::Unstable { .. })));
}
