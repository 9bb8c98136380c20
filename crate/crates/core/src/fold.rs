//! `(M, C_k)`-fold channels: `k` rounds of a single-qubit CPTP map `M`
//! interleaved with uniform Clifford twirls, acting on 2 and 4 copies.
//!
//! Twirled 2-copy operators are `Σ_ρ a_ρ T_ρ` over `S_2`; twirled 4-copy
//! operators are `Σ_ρ (c_ρ Q + b_ρ) T_ρ` over `S_4`. One round maps the
//! coefficient vector linearly, through `Ξ` (2 copies) or the 48×48 block
//! matrix `S = ((M, N), (O, P))` (4 copies). The map acts on one qubit of an
//! `n`-qubit register; all traces factor into a single-qubit part, computed
//! with explicit `2^t × 2^t` matrices, and a closed-form part on the other
//! `n − 1` qubits.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::rep::commutant::{permutation_operator, q_operator, trace_product};
use crate::rep::{group, q_trace, trace_permutation, weingarten_clifford, weingarten_haar, CliffordWeingartenTables};
use crate::state::{Mat2, Outcome, ThetaBasis};

const CPTP_TOL: f64 = 1e-10;

/// A single-qubit channel given by Kraus operators.
#[derive(Clone, Debug)]
pub struct SingleQubitChannel {
    kraus: Vec<Mat2>,
}

impl SingleQubitChannel {
    /// Validates `Σ K† K = 1`.
    pub fn new(kraus: Vec<Mat2>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::InvalidInput("a channel needs at least one Kraus operator".into()));
        }
        let mut sum = [[C64::new(0.0, 0.0); 2]; 2];
        for k in &kraus {
            for i in 0..2 {
                for j in 0..2 {
                    for l in 0..2 {
                        sum[i][j] += k[l][i].conj() * k[l][j];
                    }
                }
            }
        }
        let mut dev: f64 = 0.0;
        for (i, row) in sum.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((v - want).norm());
            }
        }
        if dev > CPTP_TOL {
            return Err(Error::InvalidInput(format!("Kraus operators are not trace preserving (deviation {dev:.3e})")));
        }
        Ok(Self { kraus })
    }

    pub fn identity() -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Self { kraus: vec![[[one, zero], [zero, one]]] }
    }

    /// Dephasing in the basis `B_θ`: `ρ ↦ Σ_γ P_γ ρ P_γ`.
    pub fn dephasing(theta: f64) -> Result<Self> {
        let basis = ThetaBasis::new(theta, 0)?;
        Ok(Self { kraus: vec![basis.projector(Outcome::One), basis.projector(Outcome::Two)] })
    }

    pub fn kraus(&self) -> &[Mat2] {
        &self.kraus
    }

    /// `M^{⊗t}(X)` for an operator on `t` single-qubit copies.
    fn apply_tensor(&self, x: &DMatrix<C64>, t: usize) -> DMatrix<C64> {
        let ks: Vec<DMatrix<C64>> = self.kraus.iter().map(|k| DMatrix::from_fn(2, 2, |i, j| k[i][j])).collect();
        let r = ks.len();
        let dim = 1usize << t;
        let mut out = DMatrix::zeros(dim, dim);
        for combo in 0..r.pow(t as u32) {
            let mut c = combo;
            let mut op = DMatrix::from_element(1, 1, C64::new(1.0, 0.0));
            for _ in 0..t {
                op = op.kronecker(&ks[c % r]);
                c /= r;
            }
            out += &op * x * op.adjoint();
        }
        out
    }
}

/// `(f, g, h)` with `f = (d²−8)/(8(d²−1))`, `g = (d²−4)/(4(d²−1))`, `h = (d²−2)/(2(d²−1))`.
pub fn fgh(d: f64) -> (f64, f64, f64) {
    let d2 = d * d;
    ((d2 - 8.0) / (8.0 * (d2 - 1.0)), (d2 - 4.0) / (4.0 * (d2 - 1.0)), (d2 - 2.0) / (2.0 * (d2 - 1.0)))
}

fn check_dim(d: u64) -> Result<()> {
    if d < 2 || !d.is_power_of_two() {
        return Err(Error::InvalidInput(format!("d = {d} is not a qubit register dimension ≥ 2")));
    }
    Ok(())
}

/// Trace of `Q T_π` on the unmeasured qubits; the empty register has `Q = 1`.
fn rest_q_trace(p: &crate::rep::Permutation, d_rest: u64) -> f64 {
    if d_rest == 1 {
        1.0
    } else {
        q_trace(p, d_rest).expect("power of two")
    }
}

/// Coefficients over `{e, (12)}` of a twirled 2-copy operator.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct FoldState2 {
    pub d: u64,
    pub a: [f64; 2],
}

impl FoldState2 {
    /// Haar (equivalently Clifford) twirl of `ψ^{⊗2}` for a pure `ψ`.
    pub fn pure(d: u64) -> Result<Self> {
        let w = weingarten_haar(2, d)?;
        Ok(Self { d, a: [w.w[(0, 0)] + w.w[(0, 1)], w.w[(1, 0)] + w.w[(1, 1)]] })
    }

    /// `tr Σ a_ρ T_ρ = a_e d² + a_(12) d`.
    pub fn trace(&self) -> f64 {
        let d = self.d as f64;
        self.a[0] * d * d + self.a[1] * d
    }

    /// `tr(S_A Σ_ρ a_ρ T_ρ)` for a cut with subsystem dimensions `d_A`, `d_B`.
    pub fn swap_expectation(&self, d_a: f64, d_b: f64) -> f64 {
        self.a[0] * d_a * d_b * d_b + self.a[1] * d_a * d_a * d_b
    }
}

/// Transfer matrix `Ξ` acting on column vectors `(a_e, a_(12))`.
pub fn xi_matrix(d: u64, channel: &SingleQubitChannel) -> Result<[[f64; 2]; 2]> {
    check_dim(d)?;
    let g = group(2)?;
    let w = weingarten_haar(2, d)?;
    let d_rest = d / 2;
    let ops: Vec<DMatrix<C64>> = g.elements().iter().map(|p| permutation_operator(p, 2)).collect();
    let mut xi = [[0.0; 2]; 2];
    for rho in 0..2 {
        let mapped = channel.apply_tensor(&ops[rho], 2);
        let tr: Vec<f64> = (0..2)
            .map(|kappa| {
                let single = trace_product(&mapped, &ops[kappa]).re;
                single * trace_permutation(&g.element(g.mul(rho, kappa)), d_rest)
            })
            .collect();
        for sigma in 0..2 {
            xi[sigma][rho] = (0..2).map(|kappa| w.w[(sigma, kappa)] * tr[kappa]).sum();
        }
    }
    Ok(xi)
}

pub fn fold2_evolve(initial: &FoldState2, k: u32, xi: &[[f64; 2]; 2]) -> FoldState2 {
    let mut a = initial.a;
    for _ in 0..k {
        a = [xi[0][0] * a[0] + xi[0][1] * a[1], xi[1][0] * a[0] + xi[1][1] * a[1]];
    }
    FoldState2 { d: initial.d, a }
}

/// Dephasing fold of a pure `ψ^{⊗2}` in closed form.
pub fn fold2_dephasing_closed_form(d: u64, k: u32) -> FoldState2 {
    let df = d as f64;
    let (_, _, h) = fgh(df);
    let hk = h.powi(k as i32);
    let a12 = hk / (df * (df + 1.0));
    FoldState2 { d, a: [(1.0 - df * a12) / (df * df), a12] }
}

/// Coefficients over `S_4` of a twirled 4-copy operator `Σ_ρ (c_ρ Q + b_ρ) T_ρ`.
#[derive(Clone, Debug, PartialEq)]
pub struct FoldState4 {
    pub d: u64,
    pub c: Vec<f64>,
    pub b: Vec<f64>,
}

impl FoldState4 {
    /// Clifford twirl of an operator given by `tr(O T_σ)` and `tr(O Q T_σ)`.
    pub fn twirl_of(tables: &CliffordWeingartenTables, tr_o_t: &[f64], tr_o_qt: &[f64]) -> Result<Self> {
        let (c, b) = tables.twirl(tr_o_t, tr_o_qt)?;
        Ok(Self { d: tables.d, c, b })
    }

    /// Twirl of `ψ^{⊗4}` with `ψ` a stabilizer state such as `|0⟩^{⊗n}`.
    pub fn stabilizer(d: u64) -> Result<Self> {
        let tables = weingarten_clifford(d)?;
        Self::twirl_of(&tables, &[1.0; 24], &[1.0 / d as f64; 24])
    }

    pub fn to_vector(&self) -> Vec<f64> {
        self.c.iter().chain(&self.b).copied().collect()
    }

    pub fn from_vector(d: u64, v: &[f64]) -> Self {
        Self { d, c: v[..24].to_vec(), b: v[24..].to_vec() }
    }

    /// `Σ_ρ c_ρ tr(Q T_ρ) + b_ρ tr T_ρ`.
    pub fn trace(&self, tables: &CliffordWeingartenTables) -> f64 {
        (0..24).map(|r| self.c[r] * tables.q_traces[r] + self.b[r] * tables.traces[r]).sum()
    }

    /// The 48 functionals `(tr(Φ T_σ), tr(Φ Q T_σ))` identifying the operator.
    pub fn functionals(&self, tables: &CliffordWeingartenTables) -> (Vec<f64>, Vec<f64>) {
        tables.traces_of(&self.c, &self.b)
    }
}

/// Blocks of the 4-copy transfer matrix for a channel on one qubit of `d = 2^n`.
#[derive(Clone, Debug)]
pub struct TransferMatrices {
    pub d: u64,
    pub theta: Option<f64>,
    pub xi: [[f64; 2]; 2],
    pub m: DMatrix<f64>,
    pub n: DMatrix<f64>,
    pub o: DMatrix<f64>,
    pub p: DMatrix<f64>,
    /// `((M, N), (O, P))`, acting on `(c, b)`.
    pub s: DMatrix<f64>,
    pub tables: CliffordWeingartenTables,
}

/// Column `ρ` of `(M; O)` is the twirl of `M^{⊗4}(Q T_ρ)`, column `ρ` of
/// `(N; P)` the twirl of `M^{⊗4}(T_ρ)`.
pub fn transfer_matrices(d: u64, channel: &SingleQubitChannel) -> Result<TransferMatrices> {
    check_dim(d)?;
    let g = group(4)?;
    let tables = weingarten_clifford(d)?;
    let d_rest = d / 2;
    let q1 = q_operator(1)?;
    let ts: Vec<DMatrix<C64>> = g.elements().iter().map(|p| permutation_operator(p, 2)).collect();
    let qts: Vec<DMatrix<C64>> = ts.iter().map(|t| &q1 * t).collect();
    let mut s = DMatrix::zeros(48, 48);
    for rho in 0..24 {
        for (col, input) in [(rho, &qts[rho]), (24 + rho, &ts[rho])] {
            let mapped = channel.apply_tensor(input, 4);
            let mut tr_t = vec![0.0; 24];
            let mut tr_qt = vec![0.0; 24];
            for sigma in 0..24 {
                let prod = g.element(g.mul(rho, sigma));
                let q_rest = rest_q_trace(&prod, d_rest);
                // Q^{(ī)} appears once if the input or the probe carries Q.
                let t_rest = if col < 24 { q_rest } else { trace_permutation(&prod, d_rest) };
                tr_t[sigma] = trace_product(&mapped, &ts[sigma]).re * t_rest;
                tr_qt[sigma] = trace_product(&mapped, &qts[sigma]).re * q_rest;
            }
            let (c, b) = tables.twirl(&tr_t, &tr_qt)?;
            for r in 0..24 {
                s[(r, col)] = c[r];
                s[(24 + r, col)] = b[r];
            }
        }
    }
    Ok(TransferMatrices {
        d,
        theta: None,
        xi: xi_matrix(d, channel)?,
        m: s.view((0, 0), (24, 24)).into_owned(),
        n: s.view((0, 24), (24, 24)).into_owned(),
        o: s.view((24, 0), (24, 24)).into_owned(),
        p: s.view((24, 24), (24, 24)).into_owned(),
        s,
        tables,
    })
}

/// Transfer matrices for dephasing in `B_θ`.
pub fn mnop_matrices(d: u64, theta: f64) -> Result<TransferMatrices> {
    let mut t = transfer_matrices(d, &SingleQubitChannel::dephasing(theta)?)?;
    t.theta = Some(theta);
    Ok(t)
}

pub fn fold4_evolve(initial: &FoldState4, k: u32, transfer: &TransferMatrices) -> Result<FoldState4> {
    if initial.d != transfer.d {
        return Err(Error::SizeMismatch { expected: transfer.d as usize, got: initial.d as usize });
    }
    let mut v = DMatrix::from_vec(48, 1, initial.to_vector());
    for _ in 0..k {
        v = &transfer.s * v;
    }
    Ok(FoldState4::from_vector(initial.d, v.as_slice()))
}

/// Dephasing fold of `(|0⟩⟨0|^{⊗n})^{⊗4}` at `θ = π/2`, per conjugacy class.
pub fn fold4_pi2_closed_form(d: u64, k: u32) -> Result<FoldState4> {
    let g = group(4)?;
    let df = d as f64;
    let (f, gg, h) = fgh(df);
    let (fk, gk, hk) = (f.powi(k as i32), gg.powi(k as i32), h.powi(k as i32));
    let (d1, d2, d4) = (df + 1.0, df + 2.0, df + 4.0);
    let dd = |p: i32| df.powi(p);
    let c_e = ((4.0 * dd(2) + 192.0) * fk + (dd(4) + 6.0 * dd(3) + 29.0 * dd(2) + 126.0 * df + 168.0) * hk)
        / (4.0 * dd(4) * d1 * d2 * d4)
        - 3.0 * (dd(2) + 28.0) * gk / (4.0 * dd(4) * d1 * d2)
        - 3.0 / (4.0 * dd(4));
    let c_ab = (dd(2) + 12.0) * gk / (4.0 * dd(3) * d1 * d2)
        - (dd(2) + 16.0) * fk / (2.0 * dd(3) * d1 * d2 * d4)
        - hk / (2.0 * dd(3) * d1);
    let c_abc = fk / (4.0 * d1 * d2 * d4);
    let c_abcd = (dd(2) - 12.0) * gk / (4.0 * dd(3) * d1 * d2)
        - (3.0 * dd(2) - 16.0) * fk / (2.0 * dd(3) * d1 * d2 * d4)
        + hk / (2.0 * dd(3) * d1);
    let c_abcd2 = 1.0 / (4.0 * dd(4))
        + (5.0 * dd(2) - 16.0) * fk / (dd(4) * d1 * d2 * d4)
        + ((dd(2) - 7.0) * hk - 7.0 * (df - 2.0) * gk) / (4.0 * dd(4) * d1);
    let b_e =
        1.0 / dd(4) - 7.0 * hk / (dd(4) * d1) + 28.0 * gk / (dd(4) * d1 * d2) - 64.0 * fk / (dd(4) * d1 * d2 * d4);
    let b_ab = 16.0 * fk / (dd(3) * d1 * d2 * d4) - 6.0 * gk / (dd(3) * d1 * d2) + hk / (dd(3) * d1);
    let b_abc = gk / (dd(2) * d1 * d2) - 4.0 * fk / (dd(2) * d1 * d2 * d4);
    let b_abcd = fk / (df * d1 * d2 * d4);
    let mut c = Vec::with_capacity(24);
    let mut b = Vec::with_capacity(24);
    for p in g.elements() {
        let (cv, bv) = match p.cycle_type().as_slice() {
            [1, 1, 1, 1] => (c_e, b_e),
            [2, 1, 1] => (c_ab, b_ab),
            [2, 2] => (c_abcd2, b_abc),
            [3, 1] => (c_abc, b_abc),
            _ => (c_abcd, b_abcd),
        };
        c.push(cv);
        b.push(bv);
    }
    Ok(FoldState4 { d, c, b })
}

/// Projector onto the eigenvalue-1 eigenspace of `S`: `u τᵀ` with `τ` the trace
/// functional and `u` the coefficients of `1^{⊗4}/d⁴`.
pub fn asymptotic_projector(d: u64) -> Result<DMatrix<f64>> {
    check_dim(d)?;
    let g = group(4)?;
    let tables = weingarten_clifford(d)?;
    let d4 = (d as f64).powi(4);
    let mut p = DMatrix::zeros(48, 48);
    for (rho, perm) in g.elements().iter().enumerate() {
        let weight = if perm.is_identity() {
            -0.75
        } else if perm.cycle_type() == [2, 2] {
            0.25
        } else {
            continue;
        };
        for sigma in 0..24 {
            p[(rho, sigma)] = weight * tables.q_traces[sigma] / d4;
            p[(rho, 24 + sigma)] = weight * tables.traces[sigma] / d4;
        }
    }
    for sigma in 0..24 {
        p[(24, sigma)] = tables.q_traces[sigma] / d4;
        p[(24, 24 + sigma)] = tables.traces[sigma] / d4;
    }
    Ok(p)
}

/// The 48×48 map from `(c, b)` to `(tr(Φ T_σ), tr(Φ Q T_σ))`; two coefficient
/// vectors represent the same operator iff their images agree.
pub fn functional_matrix(tables: &CliffordWeingartenTables) -> DMatrix<f64> {
    let mut f = DMatrix::zeros(48, 48);
    let mut unit = vec![0.0; 48];
    for col in 0..48 {
        unit[col] = 1.0;
        let (t, qt) = tables.traces_of(&unit[..24], &unit[24..]);
        for s in 0..24 {
            f[(s, col)] = t[s];
            f[(24 + s, col)] = qt[s];
        }
        unit[col] = 0.0;
    }
    f
}

/// Eigenvalue moduli of `S`, sorted in decreasing order.
pub fn eigenvalue_moduli(s: &DMatrix<f64>) -> Vec<f64> {
    let schur = s.clone().try_schur(1e-13, 100_000).expect("Schur iteration converges");
    let mut ev: Vec<f64> = schur.complex_eigenvalues().iter().map(|z| z.norm()).collect();
    ev.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
    ev
}

/// Entrywise maximum of `|A − B|`.
pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).iter().fold(0.0, |m, v| m.max(v.abs()))
}
