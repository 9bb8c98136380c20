//! Closed-form purity statistics for Haar, Clifford, RMDC and dephasing
//! ensembles.
//!
//! RMDC statistics are assembled from the moments of the non-normalized output
//! state `ψ̂_k`: its 2-copy average is a multiple of `Π_2`, its 4-copy average
//! lies in `span{QΠ_4, Π_4}` and evolves under the 2×2 matrix `((I, J), (K, L))`.
//! Normalized quantities follow from the delta-method ratio expansion.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::fold::fgh;
use crate::rep::pi4_traces;

/// Which ensemble a [`PurityStats`] value describes.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Regime {
    Haar,
    Clifford,
    Rmdc,
    Dephasing,
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct PurityStats {
    pub mean: f64,
    pub variance: f64,
    pub regime: Regime,
}

/// Validates a qubit register dimension `d = 2^n ≥ 2` and a cut `d_A | d`,
/// returning `d_B`.
fn check_cut(d: u64, d_a: u64) -> Result<u64> {
    if d < 2 || !d.is_power_of_two() {
        return Err(Error::InvalidInput(format!("d = {d} is not a power of two ≥ 2")));
    }
    if d_a == 0 || !d.is_multiple_of(d_a) {
        return Err(Error::InvalidInput(format!("d_A = {d_a} does not divide d = {d}")));
    }
    Ok(d / d_a)
}

fn balanced_cut(d: u64) -> Result<u64> {
    let n = d.trailing_zeros();
    if d < 4 || !d.is_power_of_two() || !n.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!("d = {d} has no balanced qubit bipartition")));
    }
    Ok(1 << (n / 2))
}

/// `(d_A + d_B)/(d_A d_B + 1)`.
pub fn haar_mean(d_a: f64, d_b: f64) -> f64 {
    (d_a + d_b) / (d_a * d_b + 1.0)
}

pub fn haar_stats(d: u64, d_a: u64) -> Result<PurityStats> {
    let d_b = check_cut(d, d_a)? as f64;
    let (df, da) = (d as f64, d_a as f64);
    let variance =
        2.0 * (df * df - da * da) * (da * da - 1.0) / (da * da * (df + 1.0).powi(2) * (df + 2.0) * (df + 3.0));
    Ok(PurityStats { mean: haar_mean(da, d_b), variance, regime: Regime::Haar })
}

pub fn clifford_stats(d: u64, d_a: u64) -> Result<PurityStats> {
    let d_b = check_cut(d, d_a)? as f64;
    let (df, da) = (d as f64, d_a as f64);
    let variance = (da * da - 1.0) * (df * df - da * da) / ((df + 1.0).powi(2) * (df + 2.0) * da * da);
    Ok(PurityStats { mean: haar_mean(da, d_b), variance, regime: Regime::Clifford })
}

/// `tr(P̃^{⊗4} Q)` for either projector of `B_θ` on one qubit.
pub fn q_overlap(theta: f64) -> f64 {
    (7.0 + (4.0 * theta).cos()) / 16.0
}

/// The one-measurement transfer matrix on `(c, b)`, the coefficients of `(QΠ_4, Π_4)`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Ijkl {
    pub i: f64,
    pub j: f64,
    pub k: f64,
    pub l: f64,
}

impl Ijkl {
    pub fn apply(&self, v: (f64, f64)) -> (f64, f64) {
        (self.i * v.0 + self.j * v.1, self.k * v.0 + self.l * v.1)
    }

    pub fn apply_power(&self, steps: u32, mut v: (f64, f64)) -> (f64, f64) {
        for _ in 0..steps {
            v = self.apply(v);
        }
        v
    }
}

/// The trigonometric closed forms of `I, J, K, L`.
pub fn ijkl_closed_form(d: u64, theta: f64) -> Result<Ijkl> {
    check_cut(d, 1)?;
    if d < 4 {
        return Err(Error::OutOfDomain(format!("the closed forms need d ≥ 4, got {d}")));
    }
    let df = d as f64;
    let (c4, c8) = ((4.0 * theta).cos(), (8.0 * theta).cos());
    let den = df * df - 1.0;
    Ok(Ijkl {
        i: (7.0 + c4) * (7.0 * df * df + 21.0 * df - 64.0 + df * (df + 3.0) * c4) / (1024.0 * den),
        j: (3.0 * df * (df - 1.0) + df * (df + 3.0) * c4) / (64.0 * den),
        k: (125.0 + 4.0 * c4 - c8) / (512.0 * den),
        l: ((df + 7.0) * (df - 1.0) - c4) / (16.0 * den),
    })
}

/// `tr(QΠ_4)`, `tr Π_4` on `d` and on the `d/2`-dimensional unmeasured register.
struct SectorTraces {
    d_plus: f64,
    d_minus: f64,
    d_plus_rest: f64,
    d4_rest: f64,
}

fn sector_traces(d: u64) -> Result<SectorTraces> {
    let full = pi4_traces(d, 1)?;
    let (d_plus_rest, d4_rest) = if d == 2 {
        (1.0, 1.0)
    } else {
        let rest = pi4_traces(d / 2, 1)?;
        (rest.d_plus, rest.d4)
    };
    Ok(SectorTraces { d_plus: full.d_plus, d_minus: full.d4 - full.d_plus, d_plus_rest, d4_rest })
}

/// `I, J, K, L` assembled from the sector traces and `tr(P̃^{⊗4} Q)`.
pub fn ijkl_coefficients(d: u64, theta: f64) -> Result<Ijkl> {
    check_cut(d, 1)?;
    let s = sector_traces(d)?;
    let q = q_overlap(theta);
    let kept = s.d4_rest - q * s.d_plus_rest;
    Ok(Ijkl {
        i: s.d_plus_rest * q * (q / s.d_plus - (1.0 - q) / s.d_minus),
        j: q * s.d_plus_rest / s.d_plus - kept / s.d_minus,
        k: s.d_plus_rest * q * (1.0 - q) / s.d_minus,
        l: kept / s.d_minus,
    })
}

/// `(c_0, b_0)` with `⟨ψ^{⊗4}⟩ = c_0 QΠ_4 + b_0 Π_4` for a stabilizer state `ψ`.
pub fn initial_coefficients(d: u64) -> Result<(f64, f64)> {
    check_cut(d, 1)?;
    let s = sector_traces(d)?;
    let df = d as f64;
    let c0 = (1.0 / s.d_plus + 1.0 / s.d_minus) / df - 1.0 / s.d_minus;
    let b0 = (1.0 - 1.0 / df) / s.d_minus;
    Ok((c0, b0))
}

/// `⟨N_{k+1}⟩/⟨N_k⟩ = tr Π_2^{(ī)}/tr Π_2 = (d+2)/(4(d+1))`.
pub fn nk_step_ratio(d: u64) -> f64 {
    let df = d as f64;
    (df + 2.0) / (4.0 * (df + 1.0))
}

/// Moments of `x = Pur ψ̂_{k,A}` and `y = N_k = (tr ψ̂_k)²`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct NonNormalizedBlocks {
    pub d: u64,
    pub d_a: u64,
    pub k: u32,
    pub theta: f64,
    pub avg_nk: f64,
    pub avg_pur_hat: f64,
    pub delta_nk: f64,
    pub delta_pur_hat: f64,
    pub cov_pur_nk: f64,
}

impl NonNormalizedBlocks {
    /// `⟨x⟩/⟨y⟩ + ε` with `ε` from [`ratio_mean`].
    pub fn ratio_mean(&self) -> f64 {
        ratio_mean(self.avg_pur_hat, self.avg_nk, self.delta_nk, self.cov_pur_nk)
    }

    /// `Var(x/y)` from [`ratio_variance`].
    pub fn ratio_variance(&self) -> f64 {
        let eps = self.ratio_mean() - self.avg_pur_hat / self.avg_nk;
        ratio_variance(self.avg_pur_hat, self.avg_nk, self.delta_pur_hat, self.delta_nk, self.cov_pur_nk, eps)
    }

    /// `Var N_k / ⟨N_k⟩²`.
    pub fn nk_cv_squared(&self) -> f64 {
        self.delta_nk / (self.avg_nk * self.avg_nk)
    }
}

pub fn nonnormalized_blocks(d: u64, d_a: u64, k: u32, theta: f64) -> Result<NonNormalizedBlocks> {
    let d_b = check_cut(d, d_a)?;
    let traces = pi4_traces(d_a, d_b)?;
    let m = ijkl_coefficients(d, theta)?;
    let (c, b) = m.apply_power(k, initial_coefficients(d)?);
    let avg_nk = nk_step_ratio(d).powi(k as i32);
    let avg_pur_hat = avg_nk * haar_mean(d_a as f64, d_b as f64);
    let floor = |v: f64| if v < 0.0 && v > -1e-12 { 0.0 } else { v };
    Ok(NonNormalizedBlocks {
        d,
        d_a,
        k,
        theta,
        avg_nk,
        avg_pur_hat,
        delta_nk: floor(traces.d_plus * c + traces.d4 * b - avg_nk * avg_nk),
        delta_pur_hat: floor(traces.d_plus * c + traces.d_pur * b - avg_pur_hat * avg_pur_hat),
        cov_pur_nk: traces.d_plus_12 * c + traces.d_4_12 * b - avg_pur_hat * avg_nk,
    })
}

/// Second-order expansion of `⟨x/y⟩`: `⟨x⟩/⟨y⟩ − Cov(x,y)/⟨y⟩² + ⟨x⟩ Var(y)/⟨y⟩³`.
pub fn ratio_mean(mean_x: f64, mean_y: f64, var_y: f64, cov_xy: f64) -> f64 {
    mean_x / mean_y - cov_xy / (mean_y * mean_y) + mean_x * var_y / mean_y.powi(3)
}

/// Expansion of `Var(x/y)`:
/// `Var x/⟨y⟩² + Var y ⟨x⟩²/⟨y⟩⁴ − 2 Cov ⟨x⟩/⟨y⟩³ + 3ε²`.
pub fn ratio_variance(mean_x: f64, mean_y: f64, var_x: f64, var_y: f64, cov_xy: f64, eps: f64) -> f64 {
    var_x / mean_y.powi(2) + var_y * mean_x.powi(2) / mean_y.powi(4) - 2.0 * cov_xy * mean_x / mean_y.powi(3)
        + 3.0 * eps * eps
}

/// The leading-order average-purity correction as a closed form in `θ`,
/// `k` and `d`. Diverges at the Clifford angles `θ ∈ {0, π/2}`.
pub fn epsilon_closed_form(d: u64, k: u32, theta: f64) -> Result<f64> {
    let s2 = (2.0 * theta).sin().powi(2);
    if s2 < 1e-12 {
        return Err(Error::OutOfDomain(format!("ε is singular at θ = {theta}")));
    }
    let (c4, c8) = ((4.0 * theta).cos(), (8.0 * theta).cos());
    let kf = k as f64;
    let decay = ((c4 + 7.0) / 8.0).powi(2 * k as i32);
    let den = 15.0 + c4;
    let bracket =
        (29.0 * kf + 24.0 - 24.0 * decay) / den - 4.0 * c4 * (7.0 * kf - 2.0 * (1.0 - decay)) / den - kf * c8 / den;
    Ok(2.0 / s2 * bracket / (d as f64).powf(1.5))
}

/// `2√d/(d+1) + ε` with `ε` from [`epsilon_closed_form`]; exact at `k = 0`.
pub fn rmdc_average_purity(d: u64, k: u32, theta: f64) -> Result<f64> {
    let d_a = balanced_cut(d)?;
    let base = haar_mean(d_a as f64, (d / d_a) as f64);
    if k == 0 {
        return Ok(base);
    }
    Ok(base + epsilon_closed_form(d, k, theta)?)
}

/// Average purity from the second-order ratio expansion of the assembled moments.
pub fn rmdc_mean_expansion(d: u64, d_a: u64, k: u32, theta: f64) -> Result<f64> {
    Ok(nonnormalized_blocks(d, d_a, k, theta)?.ratio_mean())
}

pub fn rmdc_fluctuation(d: u64, d_a: u64, k: u32, theta: f64) -> Result<f64> {
    Ok(nonnormalized_blocks(d, d_a, k, theta)?.ratio_variance())
}

pub fn small_subsystem_stats(d: u64, d_a: u64, k: u32, theta: f64) -> Result<PurityStats> {
    let blocks = nonnormalized_blocks(d, d_a, k, theta)?;
    Ok(PurityStats { mean: blocks.ratio_mean(), variance: blocks.ratio_variance(), regime: Regime::Rmdc })
}

/// Average purity after `k` dephasing rounds at a balanced cut, valid for every `θ`.
pub fn dephasing_average_purity(d: u64, k: u32) -> Result<f64> {
    balanced_cut(d)?;
    let df = d as f64;
    let (_, _, h) = fgh(df);
    Ok((h.powi(k as i32) * (df - 1.0) + df + 1.0) / (df.sqrt() * (df + 1.0)))
}

/// The same expression with `f^k` in place of `h^k`.
pub fn dephasing_average_purity_f_form(d: u64, k: u32) -> Result<f64> {
    balanced_cut(d)?;
    let df = d as f64;
    let (f, _, _) = fgh(df);
    Ok((f.powi(k as i32) * (df - 1.0) + df + 1.0) / (df.sqrt() * (df + 1.0)))
}

/// Purity fluctuations after `k` dephasing rounds in `B_{π/2}` at a balanced cut.
pub fn dephasing_fluctuation_pi2(d: u64, k: u32) -> Result<f64> {
    balanced_cut(d)?;
    let df = d as f64;
    let (_, g, h) = fgh(df);
    let (gk, hk) = (g.powi(k as i32), h.powi(k as i32));
    let value = (df - 1.0) * (df - 4.0) / (df * (df + 1.0) * (df + 2.0)) * gk + (df - 1.0) / (df * (df + 1.0)) * hk
        - (df - 1.0).powi(2) / (df * (df + 1.0).powi(2)) * hk * hk;
    Ok(value.max(0.0))
}

/// The four-term expression with `3h^k − 2f^k` and `f^{2k}` in the last terms.
pub fn dephasing_fluctuation_pi2_f_form(d: u64, k: u32) -> Result<f64> {
    balanced_cut(d)?;
    let df = d as f64;
    let (f, g, h) = fgh(df);
    let (fk, gk, hk) = (f.powi(k as i32), g.powi(k as i32), h.powi(k as i32));
    Ok((df - 1.0) * (df - 4.0) / (df * (df + 1.0) * (df + 2.0)) * gk + 3.0 * (df - 1.0) / (df * (df + 1.0)) * hk
        - 2.0 * (df - 1.0) / (df * (df + 1.0)) * fk
        - (df - 1.0).powi(2) / (df * (df + 1.0).powi(2)) * fk * fk)
}

/// Exponents `e` with `x^{αn} = d^e` for `k = αn` dephasing rounds.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ScalingExponents {
    /// `α log₂ h`: the average purity approaches `d^{-1/2}` as `d^e`.
    pub purity_error_exp: f64,
    /// `α log₂ f`, the same exponent for the `f^k` variant of the average purity.
    pub f_purity_error_exp: f64,
    /// `α log₂ h`: the `θ = π/2` fluctuations are below `d^e`.
    pub fluct_exp: f64,
}

pub fn scaling_bounds(d: u64, alpha: f64) -> Result<ScalingExponents> {
    check_cut(d, 1)?;
    if alpha <= 0.0 || !alpha.is_finite() {
        return Err(Error::InvalidInput(format!("α must be positive, got {alpha}")));
    }
    let (f, _, h) = fgh(d as f64);
    if f <= 0.0 {
        return Err(Error::OutOfDomain(format!("f(d) = {f} ≤ 0 at d = {d}")));
    }
    Ok(ScalingExponents {
        purity_error_exp: alpha * h.log2(),
        f_purity_error_exp: alpha * f.log2(),
        fluct_exp: alpha * h.log2(),
    })
}

/// One cell of the analytic fluctuation surface.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SurfacePoint {
    pub theta: f64,
    pub k: u32,
    pub delta: f64,
}

impl SurfacePoint {
    pub fn log10_delta(&self) -> f64 {
        self.delta.log10()
    }
}

/// `rmdc_fluctuation` at a balanced cut on `theta_steps + 1` equally spaced
/// angles in `[0, π/2]` and `k = 0..=k_max`.
pub fn fluctuation_surface(d: u64, theta_steps: usize, k_max: u32) -> Result<Vec<SurfacePoint>> {
    if theta_steps == 0 {
        return Err(Error::InvalidInput("theta_steps must be at least 1".into()));
    }
    let d_a = balanced_cut(d)?;
    let d_b = d / d_a;
    let traces = pi4_traces(d_a, d_b)?;
    let init = initial_coefficients(d)?;
    let step = nk_step_ratio(d);
    let pab = haar_mean(d_a as f64, d_b as f64);
    let mut out = Vec::with_capacity((theta_steps + 1) * (k_max as usize + 1));
    for t in 0..=theta_steps {
        let theta = FRAC_PI_2 * t as f64 / theta_steps as f64;
        let m = ijkl_coefficients(d, theta)?;
        let mut v = init;
        for k in 0..=k_max {
            let avg_nk = step.powi(k as i32);
            let avg_pur_hat = avg_nk * pab;
            let blocks = NonNormalizedBlocks {
                d,
                d_a,
                k,
                theta,
                avg_nk,
                avg_pur_hat,
                delta_nk: traces.d_plus * v.0 + traces.d4 * v.1 - avg_nk * avg_nk,
                delta_pur_hat: traces.d_plus * v.0 + traces.d_pur * v.1 - avg_pur_hat * avg_pur_hat,
                cov_pur_nk: traces.d_plus_12 * v.0 + traces.d_4_12 * v.1 - avg_pur_hat * avg_nk,
            };
            out.push(SurfacePoint { theta, k, delta: blocks.ratio_variance() });
            v = m.apply(v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn baselines() {
        let h = haar_stats(4, 2).unwrap();
        assert!((h.mean - 0.8).abs() < 1e-15);
        assert!((h.variance - 3.0 / 175.0).abs() < 1e-15);
        let c = clifford_stats(4, 2).unwrap();
        assert!((c.variance - 0.06).abs() < 1e-15);
        assert!((clifford_stats(64, 8).unwrap().variance - 3969.0 / 278850.0).abs() < 1e-15);
        let t = haar_stats(16, 1).unwrap();
        assert!(t.mean == 1.0 && t.variance == 0.0);
        for (d, da) in [(4, 2), (16, 4), (64, 2), (256, 16), (1 << 12, 64)] {
            assert!((haar_stats(d, da).unwrap().mean - clifford_stats(d, da).unwrap().mean).abs() < 1e-15);
        }
        assert!(haar_stats(16, 3).is_err());
    }

    #[test]
    fn ijkl_closed_forms_match_assembly() {
        for d in [4u64, 8, 16, 64, 1024] {
            for i in 0..=16 {
                let theta = FRAC_PI_2 * i as f64 / 16.0;
                let a = ijkl_coefficients(d, theta).unwrap();
                let p = ijkl_closed_form(d, theta).unwrap();
                for (x, y) in [(a.i, p.i), (a.j, p.j), (a.k, p.k), (a.l, p.l)] {
                    assert!(close(x, y, 1e-12), "d={d} θ={theta}: {x} vs {y}");
                }
                assert!(p.k >= 0.0 && p.l >= 0.0);
            }
        }
        let j = ijkl_closed_form(8, FRAC_PI_2).unwrap().j;
        assert!((j - 4.0 * 64.0 / (64.0 * 63.0)).abs() < 1e-15);
        assert!((q_overlap(0.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn k_zero_collapses_to_clifford() {
        for (d, da) in [(16u64, 4u64), (64, 8), (64, 2), (256, 16)] {
            let b = nonnormalized_blocks(d, da, 0, 0.3).unwrap();
            let cl = clifford_stats(d, da).unwrap();
            assert_eq!(b.avg_nk, 1.0);
            assert!(close(b.delta_pur_hat, cl.variance, 1e-10));
            assert!(b.delta_nk.abs() < 1e-12 && b.cov_pur_nk.abs() < 1e-12);
            assert!(close(rmdc_fluctuation(d, da, 0, 0.7).unwrap(), cl.variance, 1e-10));
        }
        assert!((rmdc_average_purity(64, 0, 0.0).unwrap() - 16.0 / 65.0).abs() < 1e-15);
    }

    #[test]
    fn ratio_expansion_limits() {
        assert_eq!(ratio_mean(3.0, 2.0, 0.0, 0.0), 1.5);
        assert_eq!(ratio_variance(3.0, 2.0, 0.0, 0.0, 0.0, 0.0), 0.0);
        assert!((ratio_mean(2.0, 2.0, 0.3, 0.3) - 1.0).abs() < 1e-15);
        assert!(ratio_variance(2.0, 2.0, 0.3, 0.3, 0.3, 0.0).abs() < 1e-15);
    }

    #[test]
    fn mean_expansion_is_flat() {
        for (d, da) in [(16u64, 4u64), (64, 8), (64, 2)] {
            let base = haar_mean(da as f64, (d / da) as f64);
            for k in [1u32, 3, 8] {
                for theta in [0.0, FRAC_PI_8, FRAC_PI_4] {
                    let b = nonnormalized_blocks(d, da, k, theta).unwrap();
                    assert!(close(b.cov_pur_nk, base * b.delta_nk, 1e-9));
                    assert!((b.ratio_mean() - base).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn clifford_angles_scale_by_nk_spread() {
        for (d, da) in [(64u64, 8u64), (4096, 64)] {
            let cl = clifford_stats(d, da).unwrap().variance;
            for k in [1u32, 5, 12] {
                for theta in [0.0, FRAC_PI_2] {
                    let b = nonnormalized_blocks(d, da, k, theta).unwrap();
                    let want = cl * (1.0 + b.nk_cv_squared());
                    assert!(close(b.ratio_variance(), want, 1e-10), "d={d} k={k}");
                }
            }
        }
    }

    #[test]
    fn fluctuation_symmetry_and_decay() {
        let d = 1u64 << 12;
        for k in [0u32, 3, 9] {
            for i in 0..=8 {
                let t = FRAC_PI_2 * i as f64 / 8.0;
                let a = rmdc_fluctuation(d, 64, k, t).unwrap();
                let b = rmdc_fluctuation(d, 64, k, FRAC_PI_2 - t).unwrap();
                assert!(close(a, b, 1e-10));
            }
        }
        let ratios: Vec<f64> = (2..8)
            .map(|k| {
                rmdc_fluctuation(d, 64, k + 1, FRAC_PI_4).unwrap() / rmdc_fluctuation(d, 64, k, FRAC_PI_4).unwrap()
            })
            .collect();
        for r in &ratios {
            assert!((r - 9.0 / 16.0).abs() < 0.06, "{ratios:?}");
        }
    }

    #[test]
    fn epsilon_guarded_and_growing() {
        assert!(epsilon_closed_form(64, 3, 0.0).is_err());
        assert!(rmdc_average_purity(64, 3, FRAC_PI_2).is_err());
        assert_eq!(epsilon_closed_form(64, 0, FRAC_PI_4).unwrap(), 0.0);
        let e: Vec<f64> = (40..43).map(|k| epsilon_closed_form(1 << 12, k, FRAC_PI_4).unwrap()).collect();
        assert!(((e[2] - e[1]) - (e[1] - e[0])).abs() < 1e-12 * e[2]);
        assert!(e[1] > e[0]);
        for k in [1u32, 4] {
            let b = nonnormalized_blocks(1 << 12, 64, k, FRAC_PI_4).unwrap();
            let first_order = b.cov_pur_nk / (b.avg_nk * b.avg_nk);
            assert!(close(epsilon_closed_form(1 << 12, k, FRAC_PI_4).unwrap(), first_order, 5e-3));
        }
    }

    #[test]
    fn dephasing_forms() {
        assert!((dephasing_average_purity(16, 0).unwrap() - 8.0 / 17.0).abs() < 1e-15);
        assert!((dephasing_average_purity(64, 500).unwrap() - 0.125).abs() < 1e-12);
        let f = 248.0 / 2040.0;
        let want = (f * f * f * 15.0 + 17.0) / (4.0 * 17.0);
        assert!((dephasing_average_purity_f_form(16, 3).unwrap() - want).abs() < 1e-15);
        assert!((dephasing_fluctuation_pi2(4, 0).unwrap() - 0.06).abs() < 1e-15);
        assert!((dephasing_fluctuation_pi2_f_form(4, 0).unwrap() - 0.06).abs() < 1e-15);
        for d in [4u64, 16, 64] {
            let (_, _, h) = fgh(d as f64);
            for k in 0..40 {
                let v = dephasing_fluctuation_pi2(d, k).unwrap();
                assert!(v >= 0.0 && v < h.powi(k as i32));
            }
            assert!(dephasing_fluctuation_pi2(d, 400).unwrap() < 1e-100);
        }
    }

    #[test]
    fn scaling() {
        assert!(scaling_bounds(2, 1.0).is_err());
        let s = scaling_bounds(16, 2.0).unwrap();
        let (_, _, h) = fgh(16.0);
        assert!((16f64.powf(s.fluct_exp) - h.powi(8)).abs() < 1e-15);
        let gap = dephasing_average_purity(16, 8).unwrap() - 0.25;
        assert!(gap > 0.0 && gap < 16f64.powf(s.purity_error_exp));
    }

    #[test]
    fn small_subsystem() {
        for k in [0u32, 2, 5] {
            assert!(small_subsystem_stats(64, 1, k, FRAC_PI_4).unwrap().variance.abs() < 1e-12);
        }
        let r2 =
            rmdc_fluctuation(1 << 12, 2, 6, FRAC_PI_4).unwrap() / rmdc_fluctuation(1 << 12, 2, 5, FRAC_PI_4).unwrap();
        let r64 =
            rmdc_fluctuation(1 << 12, 64, 6, FRAC_PI_4).unwrap() / rmdc_fluctuation(1 << 12, 64, 5, FRAC_PI_4).unwrap();
        assert!((r2 - r64).abs() < 0.01, "{r2} vs {r64}");
    }

    #[test]
    fn surface_matches_pointwise() {
        let s = fluctuation_surface(256, 4, 5).unwrap();
        assert_eq!(s.len(), 30);
        for p in &s {
            assert!(close(p.delta, rmdc_fluctuation(256, 16, p.k, p.theta).unwrap(), 1e-12));
        }
    }
}
