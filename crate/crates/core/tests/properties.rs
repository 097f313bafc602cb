use lasercool_core::cooling::{cooling_from_sidebands, gamma_opt, phonon_number_rate, CoolingBranch, Route};
use lasercool_core::spectra::snn;
use lasercool_core::steady_state::{seeded_photon_number, seeding_amplitude, unseeded_steady_state};
use lasercool_core::{
    derive_working_point, diffusion_coefficients, DriveSpec, LaserParams, MechanicsParams, Method, Model,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn laser_strategy() -> impl Strategy<Value = LaserParams> {
    (
        1.0..20.0f64,
        0.01..0.5f64,
        0.01..0.5f64,
        1e-4..1e-2f64,
        -5.0..5.0f64,
        -3.0..3.0f64,
        1.1..3.0f64,
        0.0..1.0f64,
        0.0..2.0f64,
    )
        .prop_map(|(gamma_perp, gamma_par, kappa, g, delta_la, delta_lr, ng_rel, d0_frac, n_bb)| {
            let mut p = LaserParams {
                gamma_perp,
                gamma_par,
                kappa,
                g,
                n_g: 1.0,
                d0: 0.0,
                delta_la,
                delta_lr,
                n_bb,
            };
            p.n_g = ng_rel * p.threshold_inversion();
            p.d0 = d0_frac * p.n_g;
            p
        })
}

fn mech_strategy() -> impl Strategy<Value = MechanicsParams> {
    (0.2..3.0f64, 1e-6..1e-3f64, 0.0..1e4f64, 0.0..1e-4f64).prop_map(|(omega_m, gamma_m, n_th, coupling)| {
        MechanicsParams { omega_m, gamma_m, n_th, coupling }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn seeded_round_trip(laser in laser_strategy(), log_n in 1.0..6.0f64) {
        let n = 10f64.powf(log_n);
        let omega_s = seeding_amplitude(&laser, n);
        let states = seeded_photon_number(&laser, omega_s);
        prop_assume!(!states.multiple);
        prop_assert_eq!(states.roots.len(), 1);
        prop_assert!((states.roots[0].n_bar - n).abs() <= 1e-9 * n, "{} vs {}", states.roots[0].n_bar, n);
    }

    #[test]
    fn every_returned_root_solves_the_field_equation(laser in laser_strategy(), omega_s in 0.0..50.0f64) {
        let states = seeded_photon_number(&laser, omega_s);
        for r in &states.roots {
            prop_assert!(r.n_bar >= 0.0);
            let back = seeding_amplitude(&laser, r.n_bar);
            prop_assert!((back - omega_s).abs() <= 1e-6 * omega_s.max(1e-6), "{} {}", back, omega_s);
        }
        prop_assert!(states.roots.windows(2).all(|w| w[0].n_bar < w[1].n_bar));
    }

    #[test]
    fn unseeded_clamping(laser in laser_strategy(), ratio in 1.0001..2.0f64) {
        let mut l = laser;
        l.d0 = ratio * l.threshold_inversion();
        prop_assume!(l.d0 <= l.n_g);
        let (d_bar, n_bar) = unseeded_steady_state(&l).unwrap();
        prop_assert_eq!(d_bar, l.threshold_inversion());
        let xi = n_bar / l.saturation_photon_number();
        prop_assert!((xi - (ratio - 1.0)).abs() <= 1e-12 * ratio);
    }

    #[test]
    fn working_point_invariants(laser in laser_strategy(), mech in mech_strategy(), log_n in 1.0..6.0f64) {
        let wp = derive_working_point(&laser, &mech, &DriveSpec::SeededPhotonNumber { n_target: 10f64.powf(log_n) }).unwrap();
        prop_assert!((wp.n_bar - wp.a_bar * wp.a_bar).abs() <= 1e-12 * wp.n_bar);
        prop_assert!((wp.xi - wp.n_bar / wp.n_sat).abs() <= 1e-12 * wp.xi.max(1e-300));
        prop_assert!((wp.d_bar - laser.d0 / (1.0 + wp.xi)).abs() <= 1e-12 * laser.d0.abs().max(1.0));
        prop_assert!(wp.d_bar * laser.d0 >= 0.0);
        if laser.d0 > 0.0 {
            prop_assert!(wp.kappa_tilde < laser.kappa);
        }
        // ω± are roots of det(−iωI − A₂)
        let gp = laser.gamma_par;
        let a01 = wp.xi * gp / 2.0;
        let a10 = -2.0 * wp.gain();
        let a11 = -gp * (1.0 + wp.xi);
        for w in wp.omega_pm {
            let i = Complex64::new(0.0, 1.0);
            let det = (-i * w) * (-i * w - a11) - a01 * a10;
            prop_assert!(det.norm() / (gp * gp) < 1e-9, "residual {}", det.norm() / (gp * gp));
        }
        let s = 1.0 + wp.xi;
        let [p, m] = wp.omega_pm;
        if s * s > 4.0 * wp.xi * wp.gain() / gp {
            prop_assert!(p.re == 0.0 && m.re == 0.0);
        } else {
            prop_assert!((p.re + m.re).abs() <= 1e-15 * p.norm());
            prop_assert!((p.im - m.im).abs() <= 1e-15 * p.norm());
        }
    }

    #[test]
    fn diffusion_identities(laser in laser_strategy(), mech in mech_strategy(), log_n in 1.0..6.0f64) {
        let wp = derive_working_point(&laser, &mech, &DriveSpec::SeededPhotonNumber { n_target: 10f64.powf(log_n) }).unwrap();
        let d = diffusion_coefficients(&wp);
        let expect = wp.w * wp.d_bar + wp.w * laser.gamma_par / (2.0 * laser.gamma_perp) * (laser.d0 - wp.d_bar);
        prop_assert!(((d.d_ada_se - d.d_aad_se) - expect).abs() <= 1e-12 * (d.d_ada_se + d.d_aad_se));
        let mut cold = laser;
        cold.n_bb = 0.0;
        let d0 = diffusion_coefficients(&derive_working_point(&cold, &mech, &wp.drive).unwrap());
        prop_assert_eq!(d0.d_pp, d.d_pp);
        prop_assert_eq!(d0.d_aad_se, d.d_aad_se);
        prop_assert!((d.d_aad - d0.d_aad - 2.0 * laser.kappa * laser.n_bb).abs() <= 1e-12 * d.d_aad);
    }

    #[test]
    fn seeded_spectra_are_non_negative(laser in laser_strategy(), mech in mech_strategy(), log_n in 1.0..6.0f64, w in -5.0..5.0f64) {
        let wp = derive_working_point(&laser, &mech, &DriveSpec::SeededPhotonNumber { n_target: 10f64.powf(log_n) }).unwrap();
        let noise = diffusion_coefficients(&wp);
        for (model, fpar) in [(Model::Passive, false), (Model::Seeded, false), (Model::Seeded, true)] {
            match snn(model, &wp, &noise, w, Method::Matrix, fpar) {
                Ok(s) => {
                    let peak = snn(model, &wp, &noise, -wp.delta_tilde, Method::Matrix, fpar).unwrap().abs();
                    prop_assert!(s >= -1e-12 * peak.max(s.abs()), "{:?} {}", model, s);
                }
                Err(lasercool_core::Error::Unstable { .. }) => {}
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }

    #[test]
    fn closed_form_matches_matrix(laser in laser_strategy(), mech in mech_strategy(), log_n in 1.0..6.0f64, w in -5.0..5.0f64) {
        let wp = derive_working_point(&laser, &mech, &DriveSpec::SeededPhotonNumber { n_target: 10f64.powf(log_n) }).unwrap();
        let noise = diffusion_coefficients(&wp);
        let m = snn(Model::Seeded, &wp, &noise, w, Method::Matrix, false);
        prop_assume!(m.is_ok());
        let m = m.unwrap();
        let c = snn(Model::Seeded, &wp, &noise, w, Method::ClosedForm, false).unwrap();
        prop_assert!((m - c).abs() <= 1e-8 * c.abs(), "{} {}", m, c);
    }

    #[test]
    fn damping_is_the_sideband_difference(laser in laser_strategy(), mech in mech_strategy(), w in 0.1..3.0f64) {
        let wp = derive_working_point(&laser, &mech, &DriveSpec::SeededPhotonNumber { n_target: 1e4 }).unwrap();
        let noise = diffusion_coefficients(&wp);
        let route = Route::new(Model::Seeded, Method::ClosedForm);
        let g = gamma_opt(route, &wp, &noise, w).unwrap();
        let flipped = -(mech.coupling.powi(2) * (route.snn(&wp, &noise, -w).unwrap() - route.snn(&wp, &noise, w).unwrap()));
        prop_assert_eq!(g, flipped);
    }

    #[test]
    fn weighted_average_bounds(mech in mech_strategy(), s_minus in 1e-3..1e3f64, ratio in 1.0001..100.0f64) {
        let r = cooling_from_sidebands(&mech, ratio * s_minus, s_minus).unwrap();
        if r.branch == CoolingBranch::Cooling {
            let n_opt = r.n_opt.unwrap();
            let lo = n_opt.min(mech.n_th);
            let hi = n_opt.max(mech.n_th);
            prop_assert!(r.n_m >= lo * (1.0 - 1e-12) && r.n_m <= hi * (1.0 + 1e-12));
            let expect = (r.gamma_opt * n_opt + mech.gamma_m * mech.n_th) / (r.gamma_opt + mech.gamma_m);
            prop_assert!((r.n_m - expect).abs() <= 1e-12 * expect.max(1e-300));
        }
    }

    #[test]
    fn decoupled_mechanics_stays_thermal(laser in laser_strategy(), mech in mech_strategy()) {
        let m = MechanicsParams { coupling: 0.0, ..mech };
        let wp = derive_working_point(&laser, &m, &DriveSpec::SeededPhotonNumber { n_target: 1e4 }).unwrap();
        let noise = diffusion_coefficients(&wp);
        let r = phonon_number_rate(Route::new(Model::Seeded, Method::ClosedForm), &wp, &noise).unwrap();
        prop_assert_eq!(r.n_m, m.n_th);
    }
}
