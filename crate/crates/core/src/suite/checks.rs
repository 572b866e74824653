//! The check catalogue. Each suite yields a list of independent jobs; every
//! job returns one record and never panics on numerical failure.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::config::SuiteConfig;
use super::oracle::oracle_equivalence;
use super::report::{timed, CheckClass, CheckRecord};
use crate::confmap::{
    bogoliubov, compact_beta_norm, doppler_experiment, perturbation_scaling, planck_spectrum, CompactQuadrature,
    ConformalMap, MapKind, QuadratureSpec,
};
use crate::error::{Error, Result};
use crate::fock::checks::{
    anticommutator_split, density_commutators, density_sandwich, energy_density_commutator,
    energy_position_literal, energy_position_smoothed, generator_number_commutator, mn_distributional, mn_exact,
    number_redistribution, phase_position_routes, position_ladder, energy_density_position, vacuum_pair_component,
    Profile,
};
use crate::fock::ops::{number_density, realize, total_number};
use crate::fock::phase::delta_prime;
use crate::fock::position::m_total;
use crate::fock::{dual_sector_operators, FockBasis, OnePacket, PhaseConvention, PhaseOperatorSet, Sector};
use crate::grid::{DerivativeStencil, FrequencyGrid};
use crate::quadform::{central_charge_ratio, t_k, t_omega, QuadraticForm};
use crate::sparse::CsrMatrix;

pub type Job = Box<dyn FnOnce() -> CheckRecord + Send>;

use CheckClass::*;

fn job<F: FnOnce() -> CheckRecord + Send + 'static>(f: F) -> Job {
    Box::new(move || timed(f))
}

/// Wraps a fallible check so errors become failed records.
fn guarded<F>(id: &'static str, identity: &'static str, class: CheckClass, f: F) -> Job
where
    F: FnOnce() -> Result<CheckRecord> + Send + 'static,
{
    job(move || f().unwrap_or_else(|e| CheckRecord::failed(id, identity, class, &e)))
}

fn exact(id: &str, identity: &str, residual: f64, scale: f64, tol: f64) -> CheckRecord {
    let residual = residual.abs();
    let rel = if scale > 0.0 { residual / scale } else { residual };
    CheckRecord::new(id, identity, Exact)
        .values(vec![residual], vec![0.0])
        .errors(residual, rel)
        .pass(rel <= tol)
}

fn nonzero(id: &str, identity: &str, value: f64, scale: f64, tol: f64) -> CheckRecord {
    let rel = if scale > 0.0 { value / scale } else { value };
    CheckRecord::new(id, identity, Exact)
        .values(vec![value], vec![tol * scale])
        .errors(value, rel)
        .pass(rel >= tol)
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Largest coefficient mismatch over rows/columns whose mode index keeps
/// `reach` away from the top of the grid.
fn masked_diff(lhs: &QuadraticForm, rhs: &QuadraticForm, reach: usize) -> f64 {
    let m = lhs.modes();
    let (a, b) = (lhs.coefficient_matrix(), rhs.coefficient_matrix());
    let mut worst: f64 = 0.0;
    for i in 0..2 * m {
        for j in 0..2 * m {
            if i % m + reach < m && j % m + reach < m {
                worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
            }
        }
    }
    worst
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

// ---------------------------------------------------------------- algebra

pub fn algebra(cfg: &SuiteConfig) -> Vec<Job> {
    let tol = cfg.tolerances.clone();
    let mut jobs = Vec::new();
    let grid = cfg.grid();

    let g = grid.clone();
    let t = tol.exact;
    jobs.push(guarded(
        "algebra.fourier_closure",
        "[T[m],T[n]] = hbar (w_m - w_n) T[m+n]",
        Exact,
        move || {
            let g = g?;
            let mm = g.modes() as i64;
            let mut worst: f64 = 0.0;
            let mut scale: f64 = 0.0;
            for m in -(mm / 2)..=(mm / 2) {
                for n in -(mm / 2)..=(mm / 2) {
                    let reach = (m.abs() + n.abs()) as usize;
                    if reach >= g.modes() {
                        continue;
                    }
                    let lhs = t_omega(&g, m).commutator(&t_omega(&g, n))?;
                    let rhs = t_omega(&g, m + n).scale(c(g.hbar() * g.signed_omega(m - n)));
                    worst = worst.max(masked_diff(&lhs, &rhs, reach));
                    scale = scale.max(max_abs(rhs.coefficient_matrix()));
                }
            }
            Ok(exact("algebra.fourier_closure", "[T[m],T[n]] = hbar (w_m - w_n) T[m+n]", worst, scale, t))
        },
    ));

    let g = grid.clone();
    jobs.push(guarded("algebra.boost_acceleration", "[T_1,T_2] = i hbar T_2", Exact, move || {
        let g = g?;
        let lhs = t_k(&g, 1)?.commutator(&t_k(&g, 2)?)?;
        let rhs = t_k(&g, 2)?.scale(Complex64::new(0.0, g.hbar()));
        let d = masked_diff(&lhs, &rhs, 4);
        Ok(exact("algebra.boost_acceleration", "[T_1,T_2] = i hbar T_2", d, max_abs(rhs.coefficient_matrix()), t))
    }));

    for k in 0..=3usize {
        let g = grid.clone();
        let (id, ident): (&'static str, &'static str) = match k {
            0 => ("algebra.pair_norm_t0", "T_0 has no pair terms"),
            1 => ("algebra.pair_norm_t1", "T_1 has no pair terms"),
            2 => ("algebra.pair_norm_t2", "T_2 has no pair terms"),
            _ => ("algebra.pair_norm_t3", "T_3 carries pair terms"),
        };
        let nz = tol.nonzero;
        jobs.push(guarded(id, ident, Exact, move || {
            let q = t_k(&g?, k)?;
            Ok(if k < 3 {
                exact(id, ident, q.pair_norm(), q.number_norm(), t)
            } else {
                nonzero(id, ident, q.pair_norm(), q.number_norm(), nz)
            })
        }));
    }

    let g = grid.clone();
    jobs.push(guarded("algebra.hermiticity", "T_k^+ = T_k", Exact, move || {
        let g = g?;
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for k in 0..=3 {
            let q = t_k(&g, k)?;
            worst = worst.max(q.hermiticity_defect());
            scale = scale.max(q.number_norm() + q.pair_norm());
        }
        Ok(exact("algebra.hermiticity", "T_k^+ = T_k", worst, scale, t))
    }));

    let grids = cfg.sweep_grids();
    let cc_tol = tol.central_charge;
    jobs.push(guarded(
        "algebra.central_charge",
        "d_omega <[T[m],T[-m]]>_vac / (hbar^2 w_m^3) = 1/12",
        Convergence,
        move || {
            let grids = grids?;
            let id = "algebra.central_charge";
            let ident = "d_omega <[T[m],T[-m]]>_vac / (hbar^2 w_m^3) = 1/12";
            let target = 1.0 / 12.0;
            let mut worst_ratio = Vec::new();
            let mut errs = Vec::new();
            for g in &grids {
                let m = g.modes() as i64;
                let (lo, hi) = (m / 3, 2 * m / 3);
                let (mut wr, mut we) = (target, 0.0f64);
                for k in lo..=hi {
                    let r = central_charge_ratio(g, k);
                    let e = (r - target).abs() / target;
                    if e > we {
                        we = e;
                        wr = r;
                    }
                }
                worst_ratio.push(wr);
                errs.push(we);
            }
            let last = *errs.last().unwrap_or(&f64::INFINITY);
            let monotone = errs.windows(2).all(|w| w[1] < w[0]);
            let slope = if errs.len() >= 2 {
                let h: Vec<f64> = grids.iter().map(|g| g.d_omega()).collect();
                crate::confmap::log_slope(&h, &errs)
            } else {
                f64::NAN
            };
            Ok(CheckRecord::new(id, ident, Convergence)
                .values(worst_ratio, vec![target; grids.len()])
                .errors(last * target, last)
                .slope(slope)
                .pass(last <= cc_tol && monotone)
                .note(format!("middle-third modes; relative errors {errs:?}")))
        },
    ));
    jobs
}

// ---------------------------------------------------------------- number

fn needs_sector(cfg: &SuiteConfig, n: usize) -> bool {
    cfg.n_max >= n
}

pub fn number(cfg: &SuiteConfig) -> Vec<Job> {
    let t = cfg.tolerances.exact;
    let nz = cfg.tolerances.nonzero;
    let mut jobs: Vec<Job> = Vec::new();
    let ids: [(&'static str, &'static str, usize); 4] = [
        ("number.t0_total", "[T_0, n] = 0", 0),
        ("number.t1_total", "[T_1, n] = 0", 1),
        ("number.t2_total", "[T_2, n] = 0", 2),
        ("number.t3_total", "[T_3, n] != 0", 3),
    ];
    for (id, ident, k) in ids {
        if !needs_sector(cfg, 1) {
            jobs.push(job(move || CheckRecord::skipped(id, ident, Exact)));
            continue;
        }
        let cfg = cfg.clone();
        jobs.push(guarded(id, ident, Exact, move || {
            let r = generator_number_commutator(&cfg.basis()?, k)?;
            Ok(if k < 3 {
                exact(id, ident, r.residual, r.scale, t)
            } else {
                nonzero(id, ident, r.residual, r.scale, nz)
            })
        }));
    }
    let vac: [(&'static str, &'static str, usize); 4] = [
        ("number.t0_vacuum", "T_0 |vac> has no two-quantum part", 0),
        ("number.t1_vacuum", "T_1 |vac> has no two-quantum part", 1),
        ("number.t2_vacuum", "T_2 |vac> has no two-quantum part", 2),
        ("number.t3_vacuum", "T_3 |vac> has a two-quantum part", 3),
    ];
    for (id, ident, k) in vac {
        if !needs_sector(cfg, 2) {
            jobs.push(job(move || CheckRecord::skipped(id, ident, Exact)));
            continue;
        }
        let cfg = cfg.clone();
        jobs.push(guarded(id, ident, Exact, move || {
            let r = vacuum_pair_component(&cfg.basis()?, k)?;
            Ok(if k < 3 {
                exact(id, ident, r.residual, r.scale, t)
            } else {
                nonzero(id, ident, r.residual, r.scale, nz)
            })
        }));
    }

    type Exact1 = fn(&FockBasis) -> Result<(f64, f64)>;
    let simple: [(&'static str, &'static str, Exact1); 3] = [
        ("number.t0_density", "[T_0, n_w] = 0", |b| {
            energy_density_commutator(b).map(|r| (r.residual, r.scale))
        }),
        ("number.density_commute", "[n_w, n_w'] = 0", |b| {
            let r = density_commutators(b);
            Ok((r.residual, r.scale))
        }),
        ("number.hermiticity", "T_0, T_1, T_2, n, n_w hermitian", |b| {
            let mut worst: f64 = 0.0;
            let mut scale: f64 = 0.0;
            let mut ops: Vec<CsrMatrix> = Vec::new();
            for k in 0..=2 {
                ops.push(realize(&t_k(b.grid(), k)?, b)?.matrix);
            }
            ops.push(total_number(b).matrix);
            for j in 0..b.modes() {
                ops.push(number_density(b, j).matrix);
            }
            for o in &ops {
                worst = worst.max(o.hermiticity_defect());
                scale = scale.max(o.max_abs());
            }
            Ok((worst, scale))
        }),
    ];
    for (id, ident, f) in simple {
        if !needs_sector(cfg, 1) {
            jobs.push(job(move || CheckRecord::skipped(id, ident, Exact)));
            continue;
        }
        let cfg = cfg.clone();
        jobs.push(guarded(id, ident, Exact, move || {
            let (r, s) = f(&cfg.basis()?)?;
            Ok(exact(id, ident, r, s, t))
        }));
    }
    jobs
}

// ---------------------------------------------------------------- position

pub fn position(cfg: &SuiteConfig) -> Vec<Job> {
    let t = cfg.tolerances.exact;
    let mut jobs: Vec<Job> = Vec::new();
    type Check = fn(&FockBasis, &DerivativeStencil) -> Result<(f64, f64)>;
    let list: [(&'static str, &'static str, Check); 6] = [
        ("position.ladder", "[m, a_j] = i (D_A a)_j", |b, d| {
            let r = position_ladder(b, d, true);
            Ok((r.residual, r.scale))
        }),
        ("position.ladder_stencil", "[m, a_j] = i (D a)_j on deep-interior rows", |b, d| {
            let r = position_ladder(b, d, false);
            Ok((r.residual, r.scale))
        }),
        ("position.energy_smoothed", "[T_0, m] = i hbar a^+ S a", |b, d| {
            energy_position_smoothed(b, d).map(|r| (r.residual, r.scale))
        }),
        ("position.anticommutator", "1/2 {m, n_w} = m_w + :m n_w:", |b, d| {
            let (r, leak) = anticommutator_split(b, d)?;
            // the quartic part must vanish on states with at most one quantum
            Ok((r.residual.max(leak), r.scale))
        }),
        ("position.density_commutator", "[m_w, n_w'] closed form", |b, d| {
            let (r, far) = mn_exact(b, d)?;
            Ok((r.residual.max(far), r.scale))
        }),
        ("position.hermiticity", "m, m_w hermitian", |b, d| {
            let mut worst = m_total(b, d).matrix.hermiticity_defect();
            let mut scale: f64 = 1.0;
            for j in d.interior() {
                let md = crate::fock::m_density(b, d, j)?.matrix;
                worst = worst.max(md.hermiticity_defect());
                scale = scale.max(md.max_abs());
            }
            Ok((worst, scale))
        }),
    ];
    for (id, ident, f) in list {
        if !needs_sector(cfg, 1) {
            jobs.push(job(move || CheckRecord::skipped(id, ident, Exact)));
            continue;
        }
        let cfg = cfg.clone();
        jobs.push(guarded(id, ident, Exact, move || {
            let (r, s) = f(&cfg.basis()?, &cfg.stencil()?)?;
            Ok(exact(id, ident, r, s, t))
        }));
    }

    let (id, ident) = ("position.light_cone", "[E, tau] = (i hbar/2) a^+ S a, [P, xi] = -(i hbar/2) a^+ S a");
    if !needs_sector(cfg, 1) {
        jobs.push(job(move || CheckRecord::skipped(id, ident, Exact)));
    } else {
        let cfg = cfg.clone();
        jobs.push(guarded(id, ident, Exact, move || {
            // the product space squares the dimension; keep it small
            let g = cfg.grid()?;
            let small = FrequencyGrid::with_constants(g.modes().min(6), g.d_omega(), g.constants())?;
            let n = cfg.n_max.min(2);
            let phi = FockBasis::new(&small, n)?.with_sector(Sector::Phi);
            let psi = FockBasis::new(&small, n)?.with_sector(Sector::Psi);
            let d = DerivativeStencil::new(&small, cfg.stencil_order)?;
            let ds = dual_sector_operators(&phi, &psi, &d)?;
            let (et, px) = ds.canonical_residuals(small.hbar());
            let herm = [&ds.energy, &ds.momentum, &ds.tau, &ds.xi].iter().all(|o| o.hermiticity_ok());
            let r = et.residual.max(px.residual);
            let mut rec = exact(id, ident, r, et.scale, t);
            rec.pass &= herm;
            Ok(rec)
        }));
    }
    jobs
}

// ---------------------------------------------------------------- phase

pub fn phase(cfg: &SuiteConfig) -> Vec<Job> {
    let t = cfg.tolerances.exact;
    let mut jobs: Vec<Job> = Vec::new();
    let names: [(&'static str, &'static str); 5] = [
        ("phase.sg_e_edag", "e e^+ = 1 below the cap"),
        ("phase.sg_edag_e", "e^+ e = 1 - |0><0|"),
        ("phase.pb_unitary", "Pegg-Barnett e unitary"),
        ("phase.cross_mode", "[e_j, e_k] = 0, [e_j, e_k^+] = 0 for j != k"),
        ("phase.delta_prime_packet", "<delta'_j> = -i c_j^* (D c)_j on one quantum"),
    ];
    if !needs_sector(cfg, 1) {
        for (id, ident) in names {
            jobs.push(job(move || CheckRecord::skipped(id, ident, Exact)));
        }
        return jobs;
    }

    let c1 = cfg.clone();
    jobs.push(guarded(names[0].0, names[0].1, Exact, move || {
        let b = c1.basis()?;
        let ph = PhaseOperatorSet::new(&b, PhaseConvention::SusskindGlogower)?;
        let low = if b.n_max() >= 1 { b.indices_up_to(b.n_max() - 1) } else { Vec::new() };
        let mut worst: f64 = 0.0;
        for j in 0..b.modes() {
            let p = ph.e(&b, j)?.matmul(&ph.e_dag(&b, j)?).restrict(&low);
            worst = worst.max(p.sub(&CsrMatrix::identity(low.len())).max_abs());
        }
        Ok(exact(names[0].0, names[0].1, worst, 1.0, t))
    }));

    let c2 = cfg.clone();
    jobs.push(guarded(names[1].0, names[1].1, Exact, move || {
        let b = c2.basis()?;
        let ph = PhaseOperatorSet::new(&b, PhaseConvention::SusskindGlogower)?;
        let mut worst: f64 = 0.0;
        for j in 0..b.modes() {
            let p = ph.e_dag(&b, j)?.matmul(&ph.e(&b, j)?);
            let proj: Vec<Complex64> = (0..b.dimension())
                .map(|i| c(if b.occupation(i)[j] == 0 { 0.0 } else { 1.0 }))
                .collect();
            worst = worst.max(p.sub(&CsrMatrix::from_diagonal(&proj)).max_abs());
        }
        Ok(exact(names[1].0, names[1].1, worst, 1.0, t))
    }));

    let c3 = cfg.clone();
    jobs.push(guarded(names[2].0, names[2].1, Exact, move || {
        let b = c3.basis()?;
        let ph = PhaseOperatorSet::new(&b, PhaseConvention::PeggBarnett { s: b.n_max() })?;
        let e = ph.e_local();
        let id = CsrMatrix::identity(ph.local_dim());
        let r = e.matmul(&e.adjoint()).sub(&id).max_abs().max(e.adjoint().matmul(e).sub(&id).max_abs());
        Ok(exact(names[2].0, names[2].1, r, 1.0, t))
    }));

    let c4 = cfg.clone();
    jobs.push(guarded(names[3].0, names[3].1, Exact, move || {
        let b = c4.basis()?;
        let mut worst: f64 = 0.0;
        // Pegg-Barnett on a product of three mode spaces
        let pb = PhaseOperatorSet::new(&b, PhaseConvention::PeggBarnett { s: b.n_max() })?;
        let es: Vec<CsrMatrix> = (0..3).map(|j| pb.e_on_product(3, j)).collect::<Result<_>>()?;
        for j in 0..3 {
            for k in 0..3 {
                if j != k {
                    worst = worst
                        .max(es[j].commutator(&es[k]).max_abs())
                        .max(es[j].commutator(&es[k].adjoint()).max_abs());
                }
            }
        }
        // Susskind-Glogower on the capped basis: e_j e_k commute exactly
        let sg = PhaseOperatorSet::new(&b, PhaseConvention::SusskindGlogower)?;
        for j in 0..b.modes() {
            for k in 0..b.modes() {
                if j != k {
                    worst = worst.max(sg.e(&b, j)?.commutator(&sg.e(&b, k)?).max_abs());
                }
            }
        }
        Ok(exact(names[3].0, names[3].1, worst, 1.0, t))
    }));

    let c5 = cfg.clone();
    jobs.push(guarded(names[4].0, names[4].1, Exact, move || {
        let g = FrequencyGrid::with_max(24, c5.sweep.omega_max, c5.constants()?)?;
        let b = FockBasis::new(&g, 2)?;
        let d = DerivativeStencil::new(&g, 2)?;
        let ph = PhaseOperatorSet::new(&b, PhaseConvention::SusskindGlogower)?;
        let pk = &c5.packet;
        let p = OnePacket::gaussian(&g, pk.omega_c, pk.sigma_omega, pk.u0);
        let s = p.state(&b)?;
        let cj: Vec<Complex64> = p.amplitudes().iter().map(|f| f * g.d_nu().sqrt()).collect();
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for j in d.interior() {
            let got = s.expectation(&delta_prime(&ph, &b, &d, j)?.matrix);
            let dc: Complex64 = d.row(j).iter().map(|&(l, w)| cj[l] * w).sum();
            let expect = Complex64::new(0.0, -1.0) * cj[j].conj() * dc;
            worst = worst.max((got - expect).norm());
            scale = scale.max(expect.norm());
        }
        Ok(exact(names[4].0, names[4].1, worst, scale, t))
    }));
    jobs
}

// ---------------------------------------------------------------- convergence

fn sweep_record(
    id: &str,
    ident: &str,
    grids: &[FrequencyGrid],
    errs: &[f64],
    target: f64,
    window: f64,
) -> CheckRecord {
    let h: Vec<f64> = grids.iter().map(|g| g.d_omega()).collect();
    let slope = crate::confmap::log_slope(&h, errs);
    let last = *errs.last().unwrap_or(&f64::NAN);
    CheckRecord::new(id, ident, Convergence)
        .values(errs.to_vec(), h)
        .errors(last, last)
        .slope(slope)
        .pass((slope - target).abs() <= window)
}

type ProfileFn = fn(&DerivativeStencil, &OnePacket, &SuiteConfig) -> Result<Profile>;

/// Relative profile errors over the sweep for one identity.
pub fn profile_sweep(cfg: &SuiteConfig, f: ProfileFn) -> Result<(Vec<FrequencyGrid>, Vec<f64>)> {
    if cfg.sweep.modes.len() < 3 {
        return Err(Error::SweepTooShort {
            needed: 3,
            got: cfg.sweep.modes.len(),
        });
    }
    let grids = cfg.sweep_grids()?;
    let mut errs = Vec::new();
    for g in &grids {
        let d = DerivativeStencil::new(g, cfg.sweep.stencil_order)?;
        let pk = &cfg.packet;
        let p = OnePacket::gaussian(g, pk.omega_c, pk.sigma_omega, pk.u0);
        errs.push(f(&d, &p, cfg)?.relative_l2());
    }
    Ok((grids, errs))
}

pub const PROFILE_CHECKS: [(&str, &str, ProfileFn); 5] = [
    (
        "convergence.boost_redistribution",
        "(1/i hbar)<[T_1, n_w]> = d_w(w <n_w>)",
        |d, p, _| number_redistribution(d, p, 1),
    ),
    (
        "convergence.acceleration_redistribution",
        "(1/i hbar)<[T_2, n_w]> = 2 d_w(w <m_w>)",
        |d, p, _| number_redistribution(d, p, 2),
    ),
    (
        "convergence.energy_position_density",
        "(1/i hbar)<[T_0, m_w]> = <n_w>",
        |d, p, _| energy_density_position(d, p),
    ),
    (
        "convergence.density_commutator",
        "i int g(w') <[m_w, n_w']> = g'(w) <n_w>",
        |d, p, _| mn_distributional(d, p, f64::sin, f64::cos),
    ),
    (
        "convergence.phase_routes",
        "<sqrt(n) delta' sqrt(n)> = <m_w>",
        |d, p, c| phase_position_routes(d, p, c.packet.amplitude),
    ),
];

pub fn convergence(cfg: &SuiteConfig) -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    for (id, ident, f) in PROFILE_CHECKS {
        let cfg = cfg.clone();
        jobs.push(guarded(id, ident, Convergence, move || {
            let (grids, errs) = profile_sweep(&cfg, f)?;
            let t = &cfg.tolerances;
            Ok(sweep_record(id, ident, &grids, &errs, t.slope_target, t.slope_window))
        }));
    }
    let cfg = cfg.clone();
    let (id, ident) = ("convergence.boost_acceleration_exact", "[T_1,T_2] = i hbar T_2 at every level");
    jobs.push(guarded(id, ident, Exact, move || {
        let grids = cfg.sweep_grids()?;
        let mut errs = Vec::new();
        for g in &grids {
            let lhs = t_k(g, 1)?.commutator(&t_k(g, 2)?)?;
            let rhs = t_k(g, 2)?.scale(Complex64::new(0.0, g.hbar()));
            errs.push(masked_diff(&lhs, &rhs, 4) / max_abs(rhs.coefficient_matrix()));
        }
        let worst = errs.iter().cloned().fold(0.0, f64::max);
        Ok(CheckRecord::new(id, ident, Exact)
            .values(errs, vec![0.0; grids.len()])
            .errors(worst, worst)
            .pass(worst <= cfg.tolerances.exact))
    }));
    jobs
}

// ---------------------------------------------------------------- bogoliubov

pub fn bogoliubov_suite(cfg: &SuiteConfig) -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    let bc = cfg.bogoliubov.clone();
    let qtol = cfg.tolerances.quadrature;
    let maps: [(&'static str, &'static str, MapKind); 3] = [
        ("bogoliubov.identity", "identity map: beta = 0, alpha = 1", MapKind::Translation { b: 0.0 }),
        (
            "bogoliubov.translation",
            "translation: beta = 0, alpha = diag e^{-i wbar b}",
            MapKind::Translation { b: bc.translation },
        ),
        (
            "bogoliubov.dilation",
            "dilation: beta = 0, alpha on wbar = e^{-lambda} w",
            MapKind::Dilation { lambda: bc.dilation },
        ),
    ];
    for (id, ident, kind) in maps {
        let bc = bc.clone();
        let hbar = cfg.grid.hbar;
        jobs.push(guarded(id, ident, Quadrature, move || {
            let g = FrequencyGrid::with_constants(bc.modes, bc.d_omega, crate::grid::Constants::new(hbar)?)?;
            let map = ConformalMap::new(kind)?;
            let p = bogoliubov(&map, &g, &g, &QuadratureSpec::default())?;
            let beta = p.beta_max();
            // structure of alpha
            let alpha_err = match kind {
                MapKind::Translation { b } => {
                    let expect = DMatrix::from_fn(g.modes(), g.modes(), |j, k| {
                        if j == k {
                            Complex64::from_polar(1.0, -g.omega(j) * b)
                        } else {
                            c(0.0)
                        }
                    });
                    max_abs(&(&p.alpha - expect))
                }
                MapKind::Dilation { lambda } => {
                    // each column peaks at the row nearest e^{-lambda} w
                    let mut bad = 0.0;
                    for k in 0..g.modes() {
                        let target = (-lambda).exp() * g.omega(k);
                        if target < g.omega(0) || target > g.omega_max() {
                            continue;
                        }
                        let col = p.alpha.column(k);
                        let peak = (0..g.modes()).max_by(|&a, &b| col[a].norm().total_cmp(&col[b].norm())).unwrap();
                        if (g.omega(peak) - target).abs() > 0.5 * g.d_omega() + 1e-12 {
                            bad = 1.0;
                        }
                    }
                    bad
                }
                _ => 0.0,
            };
            let pass = beta <= qtol && alpha_err <= qtol.max(1e-8);
            Ok(CheckRecord::new(id, ident, Quadrature)
                .values(vec![beta, alpha_err], vec![0.0, 0.0])
                .errors(beta, beta)
                .pass(pass)
                .note(format!("quadrature estimate {:.3e}, {} nodes", p.meta.error_estimate, p.meta.nodes)))
        }));
    }

    for k in [2u32, 3] {
        let bc = bc.clone();
        let cfgc = cfg.clone();
        let (id, ident): (&'static str, &'static str) = if k == 2 {
            ("bogoliubov.perturbation_k2", "|beta| = O(eps^2) for u + eps u^2")
        } else {
            ("bogoliubov.perturbation_k3", "|beta| = O(eps) for u + eps u^3")
        };
        jobs.push(guarded(id, ident, Convergence, move || {
            let g = cfgc.grid()?;
            let s = perturbation_scaling(k, &bc.eps, &FrequencyGrid::with_constants(4, 2.0, g.constants())?, &CompactQuadrature::default())?;
            let pass = if k == 2 { s.slope >= 1.9 } else { (s.slope - 1.0).abs() <= 0.2 };
            Ok(CheckRecord::new(id, ident, Convergence)
                .values(s.beta_norms.clone(), s.eps.clone())
                .slope(s.slope)
                .errors(s.quadrature_error.iter().cloned().fold(0.0, f64::max), 0.0)
                .pass(pass))
        }));
    }
    let (id, ident) = ("bogoliubov.perturbation_zero", "eps = 0 gives beta = 0");
    jobs.push(guarded(id, ident, Quadrature, move || {
        let (b, err) = compact_beta_norm(2, 0.0, 1.0, &CompactQuadrature::default())?;
        Ok(CheckRecord::new(id, ident, Quadrature)
            .values(vec![b], vec![0.0])
            .errors(b, err)
            .pass(b <= qtol))
    }));

    let ptol = cfg.tolerances.planck;
    let hbar = cfg.grid.hbar;
    let (id, ident) = (
        "bogoliubov.rindler_planck",
        "exponential map: |beta|^2 = 1/(2 pi a wbar (e^{2 pi w/a} - 1))",
    );
    jobs.push(guarded(id, ident, Quadrature, move || {
        let g = FrequencyGrid::with_constants(
            bc.planck_modes,
            bc.accel / bc.planck_modes as f64,
            crate::grid::Constants::new(hbar)?,
        )?;
        let fit = planck_spectrum(bc.accel, bc.omega_out, &g, &QuadratureSpec::rindler())?;
        let (lo, hi) = (bc.planck_band[0] * bc.accel, bc.planck_band[1] * bc.accel);
        let sel: Vec<usize> = (0..fit.omega_in.len())
            .filter(|&k| fit.omega_in[k] >= lo - 1e-12 && fit.omega_in[k] <= hi + 1e-12)
            .collect();
        let ratios: Vec<f64> = sel.iter().map(|&k| fit.ratio[k]).collect();
        let dev = ratios.iter().map(|r| (r - 1.0).abs()).fold(0.0, f64::max);
        Ok(CheckRecord::new(id, ident, Quadrature)
            .values(ratios, vec![1.0; sel.len()])
            .errors(dev, dev)
            .pass(dev <= ptol && !sel.is_empty())
            .note(format!("|beta|^2 / thermal over w in [{lo}, {hi}] at wbar = {}", bc.omega_out)))
    }));
    jobs
}

// ---------------------------------------------------------------- doppler

pub fn doppler(cfg: &SuiteConfig) -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    let specs: [(&'static str, &'static str, usize, bool); 4] = [
        (
            "doppler.acceleration",
            "eps <(1/i hbar)[T_2, n_w]> = 2 eps d_w(w u0 <n_w>)",
            2,
            false,
        ),
        ("doppler.mean_position", "<m> = u0", 2, false),
        ("doppler.boost", "eps <(1/i hbar)[T_1, n_w]> = eps d_w(w <n_w>)", 1, false),
        ("doppler.centered", "u0 = 0: no first-order shift", 2, true),
    ];
    for (id, ident, k, centered) in specs {
        let cfg = cfg.clone();
        jobs.push(guarded(id, ident, Convergence, move || {
            let dc = &cfg.doppler;
            let g = FrequencyGrid::with_max(dc.modes, dc.omega_max, cfg.constants()?)?;
            let d = DerivativeStencil::new(&g, dc.stencil_order)?;
            let u0 = if centered { 0.0 } else { dc.u0 };
            let p = OnePacket::gaussian(&g, dc.omega_c, dc.sigma_omega, u0);
            let b = FockBasis::new(&g, 1)?;
            let r = doppler_experiment(&p, dc.eps, &b, &d, k)?;
            let tol = &cfg.tolerances;
            let rec = CheckRecord::new(id, ident, Convergence);
            Ok(if id == "doppler.mean_position" {
                let e = r.position_error();
                rec.values(vec![r.mean_position], vec![u0])
                    .errors((r.mean_position - u0).abs(), e)
                    .pass(e <= tol.position)
            } else if centered {
                let ratio = r.shift_norm / r.reference_norm;
                rec.values(vec![r.shift_norm], vec![0.0])
                    .errors(r.shift_norm, ratio)
                    .pass(ratio <= tol.doppler)
                    .note("relative to the shift of a packet displaced by one spread")
            } else {
                rec.values(vec![r.shift_norm], vec![r.shift_norm / (1.0 + r.relative_l2)])
                    .errors(r.relative_l2 * r.shift_norm, r.relative_l2)
                    .pass(r.relative_l2 <= tol.doppler)
                    .note(format!("sigma_u * omega_max = {:.3}", r.sigma_u * r.omega_max))
            })
        }));
    }
    jobs
}

// ---------------------------------------------------------------- oracle

pub fn oracle(cfg: &SuiteConfig) -> Vec<Job> {
    let oc = cfg.oracle.clone();
    let seed = cfg.seed;
    let tol = cfg.tolerances.oracle;
    let (id, ident) = ("oracle.commutator_equivalence", "realize([Q1, Q2]) = [realize(Q1), realize(Q2)]");
    vec![guarded(id, ident, Exact, move || {
        let s = oracle_equivalence(oc.samples, oc.max_modes, oc.max_n, seed)?;
        let worst = s.iter().map(|x| x.max_diff).fold(0.0, f64::max);
        let pairs = s.iter().filter(|x| x.with_pairs).count();
        Ok(CheckRecord::new(id, ident, Exact)
            .values(vec![worst], vec![0.0])
            .errors(worst, worst)
            .pass(worst <= tol && s.len() == oc.samples)
            .note(format!("{} samples, {pairs} with pair terms", s.len())))
    })]
}

// ---------------------------------------------------------------- literal

/// Identities that hold only in the continuum; expected to fail at any
/// finite size and therefore not selected by default.
pub fn literal(cfg: &SuiteConfig) -> Vec<Job> {
    let t = cfg.tolerances.exact;
    let mut jobs: Vec<Job> = Vec::new();
    let list: [(&'static str, &'static str, fn(&FockBasis, &DerivativeStencil) -> Result<(f64, f64)>); 2] = [
        ("literal.energy_position", "[T_0, m] = i hbar n on interior one-quantum states", |b, d| {
            energy_position_literal(b, d).map(|r| (r.residual, r.scale))
        }),
        ("literal.density_sandwich", "m_w = sqrt(n_w) m sqrt(n_w) on one quantum", |b, d| {
            density_sandwich(b, d).map(|r| (r.residual, r.scale))
        }),
    ];
    for (id, ident, f) in list {
        if !needs_sector(cfg, 1) {
            jobs.push(job(move || CheckRecord::skipped(id, ident, Exact)));
            continue;
        }
        let cfg = cfg.clone();
        jobs.push(guarded(id, ident, Exact, move || {
            let (r, s) = f(&cfg.basis()?, &cfg.stencil()?)?;
            Ok(exact(id, ident, r, s, t).note("holds only in the continuum limit"))
        }));
    }
    jobs
}

pub fn jobs_for(suite: &str, cfg: &SuiteConfig) -> Vec<Job> {
    match suite {
        "algebra" => algebra(cfg),
        "number" => number(cfg),
        "position" => position(cfg),
        "phase" => phase(cfg),
        "convergence" => convergence(cfg),
        "bogoliubov" => bogoliubov_suite(cfg),
        "doppler" => doppler(cfg),
        "oracle" => oracle(cfg),
        "literal" => literal(cfg),
        _ => Vec::new(),
    }
}
