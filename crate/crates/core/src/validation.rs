//! Acceptance checks shared by the `acceptance` test target and `rmdc validate`.
//!
//! Every check returns a [`CheckOutcome`] instead of panicking, so a failing
//! criterion is reported next to the others with the numbers behind it.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::analytics::{
    clifford_stats, dephasing_average_purity, dephasing_average_purity_f_form, dephasing_fluctuation_pi2,
    dephasing_fluctuation_pi2_f_form, fluctuation_surface, haar_stats, nonnormalized_blocks,
};
use crate::clifford::{enumerate_cliffords, sample_uniform_clifford, PauliString};
use crate::error::Result;
use crate::experiments::{
    cell_seed, estimate, run_draws, sample_rng, summarize, EstimateRecord, Protocol, ProtocolConfig,
};
use crate::fold::{
    asymptotic_projector, eigenvalue_moduli, fgh, fold2_dephasing_closed_form, fold2_evolve, fold4_evolve,
    fold4_pi2_closed_form, functional_matrix, max_abs_diff, mnop_matrices, xi_matrix, FoldState2, FoldState4,
    SingleQubitChannel,
};
use crate::rep::{
    haar_fold_channel, permutation_operator, q_operator, s2_character_table, s4_character_table, weingarten_clifford,
    weingarten_haar, Permutation,
};
use crate::state::{Bipartition, MixedState, PureState, ThetaBasis};

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CheckOutcome {
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!("criterion {}: {verdict} [{}] ({:.1} s) {}", self.id, self.name, self.seconds, self.detail)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Level {
    /// Deterministic checks only (criteria 5 closed forms, 6, 7, 8).
    Fast,
    /// Every criterion including the Monte Carlo sweeps.
    Full,
}

fn timed(id: u8, name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> CheckOutcome {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    CheckOutcome { id, name, passed, detail, seconds: start.elapsed().as_secs_f64() }
}

pub fn run(level: Level, master_seed: u64) -> Vec<CheckOutcome> {
    match level {
        Level::Fast => vec![fold_closed_forms(), algebraic_suite(), enumeration(), surface()],
        Level::Full => vec![
            stabilizer_baseline(cell_seed(master_seed, 1)),
            magic_decay(cell_seed(master_seed, 2)),
            clifford_bases(cell_seed(master_seed, 3)),
            dephasing(cell_seed(master_seed, 4)),
            fold_oracle(cell_seed(master_seed, 5)),
            algebraic_suite(),
            enumeration(),
            surface(),
        ],
    }
}

const BASELINE_N: usize = 6;
const BASELINE_SAMPLES: usize = 20_000;
const SWEEP_KS: [u32; 7] = [0, 1, 2, 4, 6, 8, 12];

fn within(value: f64, target: f64, se: f64, z: f64) -> bool {
    (value - target).abs() <= z * se
}

fn sweep_variances(theta: f64, seed: u64) -> Result<Vec<EstimateRecord>> {
    SWEEP_KS
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let cfg = ProtocolConfig::new(
                BASELINE_N,
                k,
                theta,
                Protocol::OneShot,
                BASELINE_SAMPLES,
                cell_seed(seed, i as u64),
            );
            estimate(&cfg)
        })
        .collect()
}

/// Criterion 1: random stabilizer states at `n = 6`, `d_A = 8`.
pub fn stabilizer_baseline(seed: u64) -> CheckOutcome {
    timed(1, "stabilizer baseline", || {
        let cfg = ProtocolConfig::new(BASELINE_N, 0, FRAC_PI_4, Protocol::OneShot, BASELINE_SAMPLES, seed);
        let r = estimate(&cfg)?;
        let mean_target = 16.0 / 65.0;
        let var_target = 63.0 * 63.0 / (65.0 * 65.0 * 66.0);
        let mean_ok = within(r.mean, mean_target, r.std_error_mean, 3.0);
        let var_ok = within(r.variance, var_target, r.std_error_variance, 3.0);
        let cl = clifford_stats(64, 8)?;
        Ok((
            mean_ok && var_ok,
            format!(
                "mean {:.6} ± {:.2e} vs {:.6}; variance {:.4e} ± {:.2e} vs {:.4e} (Clifford closed form {:.4e})",
                r.mean, r.std_error_mean, mean_target, r.variance, r.std_error_variance, var_target, cl.variance
            ),
        ))
    })
}

/// Least-squares slope of `ln y` against `x`.
fn log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1.ln() - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Criterion 2: decay of the purity variance at `θ = π/4` and its plateau.
pub fn magic_decay(seed: u64) -> CheckOutcome {
    timed(2, "magic-basis decay", || {
        let rows = sweep_variances(FRAC_PI_4, seed)?;
        let plateau = rows.last().map(|r| r.variance).unwrap_or(f64::NAN);
        let decaying: Vec<(f64, f64)> = SWEEP_KS
            .iter()
            .zip(&rows)
            .filter(|(_, r)| r.variance >= 3.0 * plateau)
            .map(|(&k, r)| (k as f64, r.variance))
            .collect();
        let target = 2.0 * (0.75f64).ln();
        let slope = if decaying.len() >= 2 { log_slope(&decaying) } else { f64::NAN };
        let slope_ok = (slope - target).abs() <= 0.15 * target.abs();
        let haar = haar_stats(64, 8)?.variance;
        let ratio = plateau / haar;
        let plateau_ok = (0.5..=2.0).contains(&ratio);
        let vars: Vec<String> = rows.iter().map(|r| format!("{:.3e}", r.variance)).collect();
        Ok((
            slope_ok && plateau_ok,
            format!(
                "slope {slope:.4} over k in {:?} vs {target:.4} ({}); plateau {plateau:.3e} = {ratio:.2} x Haar {haar:.3e} ({}); variances at k={SWEEP_KS:?}: [{}]",
                decaying.iter().map(|p| p.0 as u32).collect::<Vec<_>>(),
                if slope_ok { "ok" } else { "off" },
                if plateau_ok { "ok" } else { "outside factor 2" },
                vars.join(", ")
            ),
        ))
    })
}

/// Criterion 3: no decay for measurements in the Clifford bases.
pub fn clifford_bases(seed: u64) -> CheckOutcome {
    timed(3, "Clifford-basis flatness", || {
        let reference = clifford_stats(64, 8)?.variance;
        let mut ok = true;
        let mut parts = Vec::new();
        for (i, (label, theta)) in [("pi/2", FRAC_PI_2), ("0", 0.0)].into_iter().enumerate() {
            let rows = sweep_variances(theta, cell_seed(seed, i as u64))?;
            let mut worst = 0.0f64;
            for r in &rows {
                let dev = (r.variance - reference).abs();
                ok &= dev <= 0.25 * reference + 3.0 * r.std_error_variance;
                worst = worst.max(dev / reference);
            }
            parts.push(format!("theta={label}: max relative deviation {:.3}", worst));
        }
        Ok((ok, format!("{} from k=0 value {reference:.4e} over k={SWEEP_KS:?}", parts.join("; "))))
    })
}

/// Criterion 4: dephasing protocol at `n = 4`, `θ = π/2`.
pub fn dephasing(seed: u64) -> CheckOutcome {
    timed(4, "dephasing purity", || {
        let (n, d, samples) = (4usize, 16u64, 5000usize);
        let mut literal = 0;
        let mut corrected = 0;
        let mut first_literal_miss = None;
        for k in 0..=10u32 {
            let cfg = ProtocolConfig::new(n, k, FRAC_PI_2, Protocol::Dephasing, samples, cell_seed(seed, k as u64));
            let r = estimate(&cfg)?;
            let lit = within(r.mean, dephasing_average_purity_f_form(d, k)?, r.std_error_mean, 3.0)
                && within(r.variance, dephasing_fluctuation_pi2_f_form(d, k)?, r.std_error_variance, 3.0);
            let cor = within(r.mean, dephasing_average_purity(d, k)?, r.std_error_mean, 3.0)
                && within(r.variance, dephasing_fluctuation_pi2(d, k)?, r.std_error_variance, 3.0);
            literal += lit as u32;
            corrected += cor as u32;
            if !lit && first_literal_miss.is_none() {
                first_literal_miss = Some((k, r.mean, dephasing_average_purity_f_form(d, k)?));
            }
        }
        let cfg = ProtocolConfig::new(n, 40, FRAC_PI_2, Protocol::Dephasing, samples, cell_seed(seed, 40));
        let worst = run_draws(&cfg)?.iter().map(|dr| (dr.purity - 0.25).abs()).fold(0.0, f64::max);
        let late_ok = worst <= 1e-3;
        let miss = first_literal_miss
            .map(|(k, m, p)| format!("; first miss k={k}: mean {m:.4} vs f^k form {p:.4}"))
            .unwrap_or_default();
        Ok((
            literal == 11 && late_ok,
            format!(
                "f^k forms match at {literal}/11 k; h^k forms match at {corrected}/11 k; k=40 max |Pur-1/4| = {worst:.2e}{miss}"
            ),
        ))
    })
}

/// Class functionals of `ρ^{⊗4}` read off a single density matrix:
/// `tr(ρ^{⊗4} T_σ)` for the four non-identity classes and
/// `tr(ρ^{⊗4} Q T_σ)` for all five, plus `tr ρ²`.
fn density_functionals(rho: &MixedState, paulis: &[DMatrix<C64>]) -> Vec<f64> {
    let d = rho.dim();
    let r = DMatrix::from_row_slice(d, d, rho.matrix());
    let powers = |a: &DMatrix<C64>| {
        let a2 = a * a;
        let a3 = &a2 * a;
        let a4 = &a3 * a;
        [a.trace(), a2.trace(), a3.trace(), a4.trace()]
    };
    let [_, t2, t3, t4] = powers(&r).map(|z| z.re);
    let mut q = [C64::new(0.0, 0.0); 5];
    for p in paulis {
        let [p1, p2, p3, p4] = powers(&(p * &r));
        q[0] += p1 * p1 * p1 * p1;
        q[1] += p2 * p1 * p1;
        q[2] += p2 * p2;
        q[3] += p3 * p1;
        q[4] += p4;
    }
    let norm = 1.0 / (d * d) as f64;
    let mut out = vec![t2, t2 * t2, t3, t4];
    out.extend(q.iter().map(|z| z.re * norm));
    out
}

fn class_representatives() -> Result<Vec<usize>> {
    let reps: [&[&[usize]]; 5] = [&[], &[&[1, 2]], &[&[1, 2], &[3, 4]], &[&[1, 2, 3]], &[&[1, 2, 3, 4]]];
    reps.iter().map(|c| Ok(Permutation::from_cycles(4, c)?.index())).collect()
}

fn oracle_cell(n: usize, k: u32, theta: f64, samples: usize, seed: u64) -> Result<(usize, usize, String)> {
    let d = 1u64 << n;
    let paulis: Vec<DMatrix<C64>> = (0..d * d)
        .map(|b| {
            let p = PauliString::new(n, b % d, b / d, 0)?;
            Ok(DMatrix::from_row_slice(d as usize, d as usize, &p.matrix()))
        })
        .collect::<Result<_>>()?;
    let draws: Vec<Vec<f64>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i as u64);
            let mut rho = MixedState::zero(n);
            rho.conjugate_by_circuit(&sample_uniform_clifford(n, &mut rng)?.to_gates()?)?;
            for _ in 0..k {
                rho.dephase_qubit(&ThetaBasis::new(theta, 0)?)?;
                rho.conjugate_by_circuit(&sample_uniform_clifford(n, &mut rng)?.to_gates()?)?;
            }
            Ok(density_functionals(&rho, &paulis))
        })
        .collect::<Result<_>>()?;

    let xi = xi_matrix(d, &SingleQubitChannel::dephasing(theta)?)?;
    let two = fold2_evolve(&FoldState2::pure(d)?, k, &xi);
    let df = d as f64;
    let swap = two.a[0] * df + two.a[1] * df * df;

    let transfer = mnop_matrices(d, theta)?;
    let four = fold4_evolve(&FoldState4::stabilizer(d)?, k, &transfer)?;
    let (t, qt) = four.functionals(&transfer.tables);
    let reps = class_representatives()?;
    let mut expected: Vec<f64> = reps[1..].iter().map(|&r| t[r]).collect();
    expected.extend(reps.iter().map(|&r| qt[r]));

    let mut hits = 0;
    let mut total = 0;
    let mut worst = 0.0f64;
    for (j, target) in std::iter::once(swap).chain(expected).enumerate() {
        let column: Vec<f64> = draws.iter().map(|v| if j == 0 { v[0] } else { v[j - 1] }).collect();
        let s = summarize(&column)?;
        let z = (s.mean - target).abs() / s.std_error_mean.max(1e-15);
        total += 1;
        if (s.mean - target).abs() <= 3.0 * s.std_error_mean + 1e-12 {
            hits += 1;
        }
        worst = worst.max(z);
    }
    Ok((hits, total, format!("n={n} k={k}: {hits}/{total} within 3 SE (max z {worst:.2})")))
}

/// Criterion 5: fold channels against Monte Carlo, and closed forms against powering.
pub fn fold_oracle(seed: u64) -> CheckOutcome {
    timed(5, "fold channels", || {
        let mut ok = true;
        let mut parts = Vec::new();
        let mut cell = 0;
        for n in [2usize, 3] {
            for k in [1u32, 3] {
                let (hits, total, line) = oracle_cell(n, k, FRAC_PI_4, 20_000, cell_seed(seed, cell))?;
                ok &= hits == total;
                parts.push(line);
                cell += 1;
            }
        }
        let (closed_ok, closed_line) = closed_form_agreement()?;
        Ok((ok && closed_ok, format!("{}; {closed_line}", parts.join("; "))))
    })
}

fn closed_form_agreement() -> Result<(bool, String)> {
    let mut worst2 = 0.0f64;
    let mut worst4 = 0.0f64;
    for d in [4u64, 8, 16] {
        let xi = xi_matrix(d, &SingleQubitChannel::dephasing(FRAC_PI_2)?)?;
        let transfer = mnop_matrices(d, FRAC_PI_2)?;
        let start = FoldState4::stabilizer(d)?;
        for k in 0..=30u32 {
            let powered = fold2_evolve(&FoldState2::pure(d)?, k, &xi);
            let closed = fold2_dephasing_closed_form(d, k);
            let scale = powered.a[0].abs().max(1e-300);
            for i in 0..2 {
                worst2 = worst2.max((powered.a[i] - closed.a[i]).abs() / scale);
            }
            let (pt, pq) = fold4_evolve(&start, k, &transfer)?.functionals(&transfer.tables);
            let (ct, cq) = fold4_pi2_closed_form(d, k)?.functionals(&transfer.tables);
            for (a, b) in pt.iter().chain(&pq).zip(ct.iter().chain(&cq)) {
                worst4 = worst4.max((a - b).abs());
            }
        }
    }
    let ok = worst2 <= 1e-10 && worst4 <= 1e-10;
    Ok((ok, format!("closed forms vs powering, d in {{4,8,16}}, k<=30: 2-copy {worst2:.1e}, 4-copy {worst4:.1e}")))
}

/// The closed-form half of criterion 5, for the fast level.
pub fn fold_closed_forms() -> CheckOutcome {
    timed(5, "fold closed forms", closed_form_agreement)
}

fn identity_defect(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    max_abs_diff(m, &DMatrix::identity(n, n))
}

/// Criterion 6: algebraic identities of the representation-theoretic machinery.
pub fn algebraic_suite() -> CheckOutcome {
    timed(6, "algebraic identities", || {
        let mut worst_wg = 0.0f64;
        for (t, dims) in [(2usize, [2u64, 4, 8]), (4, [4, 8, 16])] {
            for d in dims {
                let w = weingarten_haar(t, d)?;
                worst_wg = worst_wg.max(identity_defect(&(&w.w * &w.gram)));
            }
        }

        let mut worst_q = 0.0f64;
        for n in [1usize, 2] {
            let q = q_operator(n)?;
            worst_q = worst_q.max((&q * &q - &q).iter().map(|z| z.norm()).fold(0.0, f64::max));
            for p in Permutation::all(4) {
                let t = permutation_operator(&p, 1 << n);
                worst_q = worst_q.max((&t * &q - &q * &t).iter().map(|z| z.norm()).fold(0.0, f64::max));
            }
        }

        let characters = s2_character_table().is_orthogonal() && s4_character_table().is_orthogonal();

        let mut worst_twirl = 0.0f64;
        for d in [4u64, 8, 16] {
            let tables = weingarten_clifford(d)?;
            let (c, b) = tables.twirl(&tables.traces, &tables.q_traces)?;
            let (t, qt) = tables.traces_of(&c, &b);
            for (a, e) in t.iter().chain(&qt).zip(tables.traces.iter().chain(&tables.q_traces)) {
                worst_twirl = worst_twirl.max((a - e).abs() / e.abs().max(1.0));
            }
        }

        let mut worst_proj = 0.0f64;
        let mut worst_gap = 0.0f64;
        for d in [8u64, 16] {
            let p = asymptotic_projector(d)?;
            for theta in [FRAC_PI_4, FRAC_PI_2] {
                let tr = mnop_matrices(d, theta)?;
                let f = functional_matrix(&tr.tables);
                let scale = (&f * &p).abs().max().max(1.0);
                worst_proj = worst_proj.max(max_abs_diff(&(&f * &p * &p), &(&f * &p)) / scale);
                worst_proj = worst_proj.max(max_abs_diff(&(&f * &tr.s * &p), &(&f * &p)) / scale);
                let ev = eigenvalue_moduli(&tr.s);
                let (_, _, h) = fgh(d as f64);
                worst_gap = worst_gap.max((ev[0] - 1.0).abs()).max((ev[1] - h).abs());
            }
        }

        let ok = worst_wg <= 1e-10
            && worst_q <= 1e-12
            && characters
            && worst_twirl <= 1e-10
            && worst_proj <= 1e-10
            && worst_gap <= 1e-8;
        Ok((
            ok,
            format!(
                "WG=1 {worst_wg:.1e}; Q^2=Q and [T,Q]=0 {worst_q:.1e}; characters orthogonal {characters}; twirl fixes commutant {worst_twirl:.1e}; projector {worst_proj:.1e}; leading moduli (1, h) {worst_gap:.1e}"
            ),
        ))
    })
}

fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

/// Criterion 7: exhaustive enumeration for one and two qubits.
pub fn enumeration() -> CheckOutcome {
    timed(7, "exhaustive enumeration", || {
        let one = enumerate_cliffords(1)?;
        let mut worst_channel = 0.0f64;
        let perms = Permutation::all(2);
        let ts: Vec<DMatrix<C64>> = perms.iter().map(|p| permutation_operator(p, 2)).collect();
        let units: Vec<DMatrix<C64>> = one
            .iter()
            .map(|c| {
                let u = DMatrix::from_row_slice(2, 2, &c.unitary()?);
                Ok(kron(&u, &u))
            })
            .collect::<Result<_>>()?;
        for i in 0..4 {
            for j in 0..4 {
                let mut e = DMatrix::<C64>::zeros(4, 4);
                e[(i, j)] = C64::new(1.0, 0.0);
                let mut avg = DMatrix::<C64>::zeros(4, 4);
                for uu in &units {
                    avg += uu * &e * uu.adjoint();
                }
                avg /= C64::new(units.len() as f64, 0.0);
                let traces: Vec<f64> = ts.iter().map(|t| (&e * t).trace().re).collect();
                let a = haar_fold_channel(&traces, 2, 2)?;
                let mut haar = DMatrix::<C64>::zeros(4, 4);
                for (coef, t) in a.iter().zip(&ts) {
                    haar += t * C64::new(*coef, 0.0);
                }
                worst_channel = worst_channel.max((avg - haar).iter().map(|z| z.norm()).fold(0.0, f64::max));
            }
        }

        let two = enumerate_cliffords(2)?;
        let cut = Bipartition::balanced(2)?;
        let purities: Vec<f64> = two
            .iter()
            .map(|c| {
                let u = c.unitary()?;
                let col: Vec<C64> = (0..4).map(|r| u[r * 4]).collect();
                PureState::from_amplitudes(col)?.purity(&cut)
            })
            .collect::<Result<_>>()?;
        let m = purities.len() as f64;
        let mean = purities.iter().sum::<f64>() / m;
        let var = purities.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / m;
        let ok = one.len() == 24
            && two.len() == 11520
            && worst_channel <= 1e-12
            && (mean - 0.8).abs() <= 1e-12
            && (var - 0.06).abs() <= 1e-12;
        Ok((
            ok,
            format!(
                "n=1: {} actions, twirl vs Haar 2-fold {worst_channel:.1e}; n=2: {} actions, mean {mean:.15} variance {var:.15}",
                one.len(),
                two.len()
            ),
        ))
    })
}

/// Criterion 8: the analytic fluctuation surface at `d = 2^12`.
pub fn surface() -> CheckOutcome {
    timed(8, "fluctuation surface", || {
        let start = Instant::now();
        let (d, steps, k_max) = (1u64 << 12, 64usize, 12u32);
        let grid = fluctuation_surface(d, steps, k_max)?;
        let at = |t: usize, k: u32| grid[t * (k_max as usize + 1) + k as usize].delta;
        let elapsed = start.elapsed().as_secs_f64();

        let mut minimum_ok = true;
        for k in 1..=k_max {
            let best = (0..=steps).min_by(|&a, &b| at(a, k).total_cmp(&at(b, k))).unwrap_or(0);
            minimum_ok &= best == steps / 2;
        }
        let mut asym = 0.0f64;
        for t in 0..=steps {
            for k in 0..=k_max {
                asym = asym.max((at(t, k) - at(steps - t, k)).abs() / at(t, k));
            }
        }

        let d_a = 1u64 << 6;
        let mut factor_defect = 0.0f64;
        let mut drift = 0.0f64;
        for t in [0usize, steps] {
            let base = at(t, 0);
            for k in 0..=k_max {
                let cv2 = nonnormalized_blocks(d, d_a, k, FRAC_PI_2 * t as f64 / steps as f64)?.nk_cv_squared();
                factor_defect = factor_defect.max((at(t, k) - base * (1.0 + cv2)).abs() / base);
                drift = drift.max((at(t, k) / base).log10().abs());
            }
        }
        let span = at(steps / 2, 0).log10() - at(steps / 2, k_max).log10();
        let flat_ok = factor_defect <= 1e-10 && drift <= 0.01;
        let ok = minimum_ok && asym <= 1e-10 && flat_ok && elapsed < 10.0;
        Ok((
            ok,
            format!(
                "per-k minimum at pi/4 {minimum_ok}; max relative asymmetry {asym:.1e}; Clifford angles: drift {drift:.4} decades over k<={k_max}, equal to the (1 + Var N/<N>^2) factor to {factor_defect:.1e}, against {span:.2} decades of decay at pi/4; surface in {elapsed:.2} s"
            ),
        ))
    })
}
