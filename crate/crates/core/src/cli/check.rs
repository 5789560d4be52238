//! Built-in cross-module invariant suite on fixed parameter grids.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2, PI};

use num_complex::Complex64;

use crate::eft::{self, ContactCouplings, RenormConditions, Scheme};
use crate::extension::ExtensionParams;
use crate::numerics;
use crate::scattering::{self, Basis};
use crate::trap;

// Γ(¾)/Γ(¼) to 34 digits (mpmath)
const GAMMA_RATIO_AT_ZERO: f64 = 0.337_989_120_033_642_364_497_723_842_335_402_9;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub max_error: f64,
    pub tolerance: f64,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.max_error <= self.tolerance
    }
}

// Running maximum where NaN or a failed evaluation counts as +∞.
#[derive(Default)]
struct MaxErr(f64);

impl MaxErr {
    fn add(&mut self, e: f64) {
        self.0 = if e.is_nan() { f64::INFINITY } else { self.0.max(e) };
    }

    fn add_result<E>(&mut self, r: Result<f64, E>) {
        self.add(r.unwrap_or(f64::INFINITY));
    }
}

fn outcome(name: &'static str, tolerance: f64, body: impl FnOnce(&mut MaxErr)) -> CheckOutcome {
    let mut m = MaxErr::default();
    body(&mut m);
    CheckOutcome {
        name,
        max_error: m.0,
        tolerance,
    }
}

/// Valid parameters spanning every sign pattern, `δ = 0`, and `φ = π/2`.
pub fn param_grid() -> Vec<ExtensionParams> {
    let mut out = Vec::new();
    for phi in [-1.2, 0.0, 0.6, FRAC_PI_2] {
        for a in [-2.0, -0.5, 0.7, 3.0] {
            for g in [-1.3, 0.7, 2.0] {
                for b in [-1.5, 2.2] {
                    out.push(ExtensionParams::new(a, b, g, (a * g - 1.0) / b, phi));
                }
            }
            for d in [-0.8, 0.0, 1.1] {
                out.push(ExtensionParams::new(a, 0.0, 1.0 / a, d, phi));
            }
        }
    }
    out.into_iter().map(|p| p.expect("grid points satisfy the constraint")).collect()
}

fn k_grid() -> Vec<f64> {
    (0..12).map(|i| 0.05 * 400f64.powf(i as f64 / 11.0)).collect()
}

fn worked() -> ExtensionParams {
    ExtensionParams::new(2.0, -2.5, 0.5, 0.0, 0.0).expect("valid")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

pub fn run_all() -> Vec<CheckOutcome> {
    let grid = param_grid();
    let ks = k_grid();
    vec![
        outcome("determinant_constraint", 1e-12, |m| {
            grid.iter().for_each(|p| m.add((p.determinant() - 1.0).abs()))
        }),
        outcome("unitarity_both_bases", 1e-12, |m| {
            for p in &grid {
                for &k in &ks {
                    for basis in [Basis::Traveling, Basis::PartialWave] {
                        m.add_result(scattering::s_matrix(p, k, basis).map(|s| s.unitarity_defect()));
                    }
                }
            }
        }),
        outcome("flux_conservation", 1e-12, |m| {
            for p in &grid {
                for &k in &ks {
                    m.add_result(scattering::reflection_transmission(p, k).map(|a| {
                        let r = (a.r_plus.norm_sqr() + a.t_plus.norm_sqr() - 1.0).abs();
                        r.max((a.r_minus.norm_sqr() + a.t_minus.norm_sqr() - 1.0).abs())
                    }));
                }
            }
        }),
        outcome("mixing_angle_reconstruction", 1e-12, |m| {
            for p in &grid {
                for &k in &ks {
                    let r = scattering::eigen_observables(p, k).and_then(|o| {
                        let t = scattering::t_matrix(p, k)?.entries;
                        Ok((scattering::t_from_angles(o.f_plus, o.f_minus, o.theta, o.phi_rel) - t).max_abs())
                    });
                    m.add_result(r);
                }
            }
        }),
        outcome("k_cot_theta_closed_form", 1e-10, |m| {
            for p in grid.iter().filter(|p| !p.classify().parity_even) {
                let mix = ((p.alpha() - p.gamma()).powi(2) + 4.0 * p.phi().sin().powi(2)).sqrt();
                for &k in &ks {
                    let expect = -(p.beta() + k * k * p.delta()) / mix;
                    let r = scattering::eigen_observables(p, k)
                        .map(|o| o.k_cot_theta.map_or(f64::INFINITY, |v| (v - expect).abs() / (1.0 + expect.abs())));
                    m.add_result(r);
                }
            }
        }),
        outcome("dictionary_equivalence", 1e-10, |m| {
            for p in &grid {
                if (p.alpha() + p.gamma() + 2.0 * p.phi().cos()).abs() <= 0.1 {
                    continue;
                }
                let Ok(c) = eft::sae_to_couplings(p) else {
                    m.add(f64::INFINITY);
                    continue;
                };
                for &k in &ks {
                    let r = scattering::t_matrix(p, k)
                        .map_err(|_| ())
                        .and_then(|a| Ok((a.entries - eft::t_matrix_full(&c, k).map_err(|_| ())?.entries).max_abs()));
                    m.add_result(r);
                }
            }
        }),
        outcome("dictionary_round_trip", 1e-10, |m| {
            for p in &grid {
                if (p.alpha() + p.gamma() + 2.0 * p.phi().cos()).abs() <= 0.1 {
                    continue;
                }
                let r = eft::sae_to_couplings(p).and_then(|c| eft::couplings_to_sae(&c)).map(|q| {
                    [
                        q.alpha() - p.alpha(),
                        q.beta() - p.beta(),
                        q.gamma() - p.gamma(),
                        q.delta() - p.delta(),
                        q.phi() - p.phi(),
                    ]
                    .into_iter()
                    .fold(0.0, |a: f64, x| a.max(x.abs()))
                });
                m.add_result(r);
            }
        }),
        outcome("scheme_independence", 1e-10, |m| {
            let schemes = [
                Scheme::Ndr,
                Scheme::Pds(0.5),
                Scheme::Pds(1.0),
                Scheme::Pds(10.0),
                Scheme::Cutoff(10.0 * PI),
            ];
            for kappa0 in [1.0, -1.0, 0.3, -0.3] {
                for a_theta in [0.0, 0.3, 0.6, 0.95 / f64::abs(kappa0)] {
                    for phi_rel in [0.0, 0.7, -FRAC_PI_2] {
                        let conds = RenormConditions { kappa0, phi_rel, a_theta };
                        for &k in &ks {
                            let Ok(reference) = eft::renormalized_t_odd(&conds, k) else {
                                m.add(f64::INFINITY);
                                continue;
                            };
                            for s in schemes {
                                let r = eft::renormalize_odd(&conds, s)
                                    .and_then(|c| eft::t_matrix_odd(c.c0, c.c1, c.c1_tilde, s, k))
                                    .map(|t| (t.entries - reference.entries).max_abs());
                                m.add_result(r);
                            }
                        }
                    }
                }
            }
        }),
        outcome("scale_anomaly", 1e-12, |m| {
            m.add_result(eft::anomaly_flow(1.0, 1.0, 1.0).map(|a| (a.k_cot_theta - 1.0).abs()));
            m.add_result(eft::anomaly_flow(1.0, 2.5, 1.0).map(|a| (a.k_cot_theta - 1.25).abs()));
        }),
        outcome("pole_consistency", 1e-9, |m| {
            for p in &grid {
                if (p.alpha() + p.gamma() + 2.0 * p.phi().cos()).abs() <= 0.1 {
                    continue;
                }
                let Ok(Ok(mut a)) = eft::sae_to_couplings(p).map(|c| eft::full_pole_kappas(&c)) else {
                    m.add(f64::INFINITY);
                    continue;
                };
                let mut b: Vec<f64> = scattering::smatrix_poles(p).iter().map(|q| q.kappa).collect();
                if b.is_empty() {
                    b.push(0.0);
                }
                a.sort_by(f64::total_cmp);
                b.sort_by(f64::total_cmp);
                if a.len() != b.len() {
                    m.add(f64::INFINITY);
                    continue;
                }
                a.iter().zip(&b).for_each(|(x, y)| m.add((x - y).abs() / (1.0 + y.abs())));
            }
        }),
        outcome("bound_state_joining", 1e-12, |m| {
            for p in &grid {
                let Ok(b) = scattering::bound_state(p) else { continue };
                let (l, dl, r, dr) = b.one_sided_limits();
                let (jr, jdr) = p.apply_joining(l, dl);
                m.add((jr - r).norm().max((jdr - dr).norm()));
            }
        }),
        outcome("maximal_time_reversal_violation", 1e-12, |m| {
            let p = ExtensionParams::new(1.0, 0.0, 1.0, 1.0, FRAC_PI_2).expect("valid");
            let r = scattering::maximal_tv_eigenvalues(&p, 2.0).map(|(a, b)| {
                let e = Complex64::from_polar(1.0, -FRAC_PI_4);
                let direct = (a - e).norm().max((b + e).norm());
                let swapped = (a + e).norm().max((b - e).norm());
                direct.min(swapped)
            });
            m.add_result(r);
            for &k in &ks {
                m.add_result(scattering::maximal_tv_eigenvalues(&p, k).map(|(a, b)| {
                    (a.norm() - 1.0).abs().max((b.norm() - 1.0).abs()).max((a + b).norm())
                }));
            }
        }),
        outcome("worked_example", 1e-15, |m| {
            let r = scattering::reflection_transmission(&worked(), 1.0).map(|a| {
                (a.r_plus - Complex64::new(-0.2, 0.8))
                    .norm()
                    .max((a.t_plus - Complex64::new(0.4, 0.4)).norm())
            });
            m.add_result(r);
            let t = scattering::t_matrix(&worked(), 1.0).map(|t| (t.entries.get(0, 0) - Complex64::new(0.45, 0.55)).norm());
            m.add_result(t);
        }),
        outcome("trap_3d_unitary", 1e-9, |m| {
            match trap::busch_levels_3d(0.0, 1.0, 1.0, 5) {
                Ok(s) => s
                    .energies()
                    .iter()
                    .enumerate()
                    .for_each(|(n, e)| m.add((e - (2.0 * n as f64 + 0.5)).abs())),
                Err(_) => m.add(f64::INFINITY),
            }
        }),
        outcome("trap_3d_zero_energy", 1e-9, |m| {
            let r = trap::busch_levels_3d(2.0 * GAMMA_RATIO_AT_ZERO, 1.0, 1.0, 1).map(|s| s.energies()[0].abs());
            m.add_result(r);
        }),
        outcome("trap_1d_scale_invariant", 1e-12, |m| {
            for p in [ExtensionParams::identity(), ExtensionParams::new(-1.0, 0.0, -1.0, 0.0, 0.3).expect("valid")] {
                match trap::trap_levels_1d(&p, 1.0, 1.0, 4) {
                    Ok(s) => s
                        .energies()
                        .iter()
                        .enumerate()
                        .for_each(|(n, e)| m.add((e - (n as f64 + 0.5)).abs())),
                    Err(_) => m.add(f64::INFINITY),
                }
            }
        }),
        outcome("trap_1d_phase_independence", 1e-10, |m| {
            for p in grid.iter().filter(|p| p.phi() != 0.0).step_by(7) {
                let q = ExtensionParams::new(p.alpha(), p.beta(), p.gamma(), p.delta(), 0.0).expect("valid");
                let (Ok(a), Ok(b)) = (trap::trap_levels_1d(p, 1.0, 1.0, 5), trap::trap_levels_1d(&q, 1.0, 1.0, 5)) else {
                    m.add(f64::INFINITY);
                    continue;
                };
                a.energies().iter().zip(b.energies()).for_each(|(x, y)| m.add((x - y).abs()));
            }
        }),
        outcome("trap_1d_delta_reduces_to_3d_form", 1e-12, |m| {
            let c0 = 0.9;
            let p = ExtensionParams::delta_potential(c0);
            for i in 0..50 {
                let e = -3.0 + 0.2137 * i as f64;
                if let (Ok(cond), Ok(r)) = (trap::spectrum_condition_1d(&p, e, 1.0, 1.0), trap::busch_rhs(e, 1.0, 1.0)) {
                    m.add((cond * r / 2.0 - (c0 + r)).abs() / (1.0 + r.abs()));
                }
            }
        }),
        outcome("gamma_recurrence", 1e-12, |m| {
            for i in 0..1000 {
                let x = -50.0 + 0.1 * i as f64 + 0.0371;
                let (Ok(a), Ok(b)) = (numerics::log_gamma_signed(x + 1.0), numerics::log_gamma_signed(x)) else {
                    m.add(f64::INFINITY);
                    continue;
                };
                m.add(rel(a.sign * b.sign * (a.log_abs - b.log_abs).exp(), x));
            }
        }),
        outcome("gamma_duplication", 1e-12, |m| {
            for i in 0..500 {
                let z = -25.0 + 0.1 * i as f64 + 0.0137;
                let (Ok(a), Ok(b), Ok(c)) = (
                    numerics::log_gamma_signed(z),
                    numerics::log_gamma_signed(z + 0.5),
                    numerics::log_gamma_signed(2.0 * z),
                ) else {
                    m.add(f64::INFINITY);
                    continue;
                };
                let rhs = 0.5 * PI.ln() + (1.0 - 2.0 * z) * LN_2 + c.log_abs;
                let sign_ok = a.sign * b.sign == c.sign;
                m.add(if sign_ok { (a.log_abs + b.log_abs - rhs).exp_m1().abs() } else { f64::INFINITY });
            }
        }),
        outcome("gamma_ratio_oracle", 1e-13, |m| {
            m.add_result(numerics::gamma_ratio(0.0).map(|g| rel(g, GAMMA_RATIO_AT_ZERO)));
        }),
        outcome("renormalized_k_cot_theta_fixed", 1e-12, |m| {
            let conds = RenormConditions {
                kappa0: 0.8,
                phi_rel: 0.4,
                a_theta: 0.5,
            };
            let reference = eft::renormalize_odd(&conds, Scheme::Ndr)
                .ok()
                .and_then(|c| eft::odd_k_cot_theta(&c));
            for mu in [0.1, 1.0, 30.0] {
                let v = Scheme::pds(mu)
                    .and_then(|s| eft::renormalize_odd(&conds, s))
                    .ok()
                    .and_then(|c: ContactCouplings| eft::odd_k_cot_theta(&c));
                m.add(match (v, reference) {
                    (Some(v), Some(r)) => rel(v, r),
                    _ => f64::INFINITY,
                });
            }
        }),
    ]
}
