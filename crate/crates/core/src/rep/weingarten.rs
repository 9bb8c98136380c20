//! Haar and Clifford Weingarten tables.
//!
//! Both are built from characters. With `D_λ = tr Π_λ` the trace of the
//! isotypic projector, the inverse of the Gram matrix `G_ρσ = tr(T_ρ T_σ)` is
//!
//! ```text
//! W_ρσ = Σ_λ d_λ³ χ^λ(ρσ) / ((t!)² D_λ)
//! ```
//!
//! and the Clifford tables use the same expression with `D_λ^± = tr(Q^{(⊥)} Π_λ)`,
//! dropping irreps whose sector dimension vanishes. The Clifford tables are then
//! Moore-Penrose inverses of the (singular) sector Gram matrices.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::characters::character_table;
use super::commutant::{clifford_irrep_dimensions, irrep_dimensions, q_trace_exact, ratio, trace_permutation_exact};
use super::perm::group;
use crate::error::{Error, Result};

/// Class function `π ↦ Σ_λ d_λ³ χ^λ(π) / ((t!)² D_λ)` over the irreps with `D_λ ≠ 0`.
fn weingarten_class_values(t: usize, dims: &[BigRational]) -> Result<Vec<BigRational>> {
    let table = character_table(t)?;
    let order2 = BigInt::from(table.order() * table.order());
    let dl = table.dims();
    Ok((0..table.classes.len())
        .map(|c| {
            let mut s = BigRational::zero();
            for (l, dim) in dims.iter().enumerate() {
                if dim.is_zero() {
                    continue;
                }
                let num = BigInt::from(dl[l].pow(3) * table.values[l][c]);
                s += BigRational::new(num, order2.clone()) / dim;
            }
            s
        })
        .collect())
}

fn table_from_classes(t: usize, class_values: &[BigRational]) -> Result<DMatrix<f64>> {
    let g = group(t)?;
    let table = character_table(t)?;
    let n = g.order();
    let vals: Vec<f64> = class_values.iter().map(ratio).collect();
    Ok(DMatrix::from_fn(n, n, |r, s| vals[table.class_of(&g.element(g.mul(r, s)))]))
}

/// Haar Weingarten table for `t ∈ {2, 4}` copies of `C^d`.
#[derive(Clone, Debug)]
pub struct WeingartenTable {
    pub t: usize,
    pub d: u64,
    /// `W_ρσ`, indexed by the lexicographic order of `S_t`.
    pub w: DMatrix<f64>,
    /// `G_ρσ = d^{#cycles(ρσ)}`.
    pub gram: DMatrix<f64>,
    /// Exact class values of `W`, in character-table class order.
    pub class_values: Vec<BigRational>,
}

pub fn gram_matrix(t: usize, d: u64) -> Result<DMatrix<f64>> {
    let g = group(t)?;
    let n = g.order();
    Ok(DMatrix::from_fn(n, n, |r, s| {
        ratio(&BigRational::from_integer(trace_permutation_exact(&g.element(g.mul(r, s)), d)))
    }))
}

/// Haar Weingarten table. Refuses `d < t`, where the permutation operators are
/// linearly dependent and the Gram matrix is singular.
pub fn weingarten_haar(t: usize, d: u64) -> Result<WeingartenTable> {
    if d == 0 {
        return Err(Error::InvalidInput("d must be positive".into()));
    }
    let dims = irrep_dimensions(t, d)?;
    if dims.iter().any(|v| v.is_zero()) {
        return Err(Error::Degenerate(format!("Gram matrix of S_{t} at d = {d} is singular (d < t)")));
    }
    let class_values = weingarten_class_values(t, &dims)?;
    Ok(WeingartenTable { t, d, w: table_from_classes(t, &class_values)?, gram: gram_matrix(t, d)?, class_values })
}

/// Coefficients `a_ρ = Σ_σ W_ρσ tr(O T_σ)` of the Haar twirl `Σ_ρ a_ρ T_ρ`.
pub fn haar_fold_channel(traces: &[f64], t: usize, d: u64) -> Result<Vec<f64>> {
    let table = weingarten_haar(t, d)?;
    if traces.len() != table.w.nrows() {
        return Err(Error::SizeMismatch { expected: table.w.nrows(), got: traces.len() });
    }
    let v = &table.w * DMatrix::from_column_slice(traces.len(), 1, traces);
    Ok(v.iter().copied().collect())
}

/// Generalized Weingarten tables for the 4-fold Clifford twirl on `d = 2^n`.
#[derive(Clone, Debug)]
pub struct CliffordWeingartenTables {
    pub d: u64,
    pub w_plus: DMatrix<f64>,
    pub w_minus: DMatrix<f64>,
    /// `tr(QΠ_λ)` per irrep of `S_4`.
    pub d_plus_lambda: Vec<BigRational>,
    /// `tr(Q⊥Π_λ)` per irrep of `S_4`.
    pub d_minus_lambda: Vec<BigRational>,
    /// Irreps left out of each sector because their dimension vanishes.
    pub skipped_plus: Vec<usize>,
    pub skipped_minus: Vec<usize>,
    /// Set when `d < 4`: the full sum over irreps is not available in both sectors.
    pub degenerate: bool,
    /// `tr(Q T_π)` for every `π ∈ S_4`.
    pub q_traces: Vec<f64>,
    /// `tr T_π` for every `π ∈ S_4`.
    pub traces: Vec<f64>,
}

pub fn weingarten_clifford(d: u64) -> Result<CliffordWeingartenTables> {
    let (plus, minus) = clifford_irrep_dimensions(d)?;
    let skipped =
        |v: &[BigRational]| v.iter().enumerate().filter(|(_, x)| x.is_zero()).map(|(i, _)| i).collect::<Vec<_>>();
    let g = group(4)?;
    let mut q_traces = Vec::with_capacity(24);
    let mut traces = Vec::with_capacity(24);
    for p in g.elements() {
        q_traces.push(ratio(&q_trace_exact(p, d)?));
        traces.push(ratio(&BigRational::from_integer(trace_permutation_exact(p, d))));
    }
    Ok(CliffordWeingartenTables {
        d,
        w_plus: table_from_classes(4, &weingarten_class_values(4, &plus)?)?,
        w_minus: table_from_classes(4, &weingarten_class_values(4, &minus)?)?,
        skipped_plus: skipped(&plus),
        skipped_minus: skipped(&minus),
        d_plus_lambda: plus,
        d_minus_lambda: minus,
        degenerate: d < 4,
        q_traces,
        traces,
    })
}

impl CliffordWeingartenTables {
    /// `G^+_ρσ = tr(Q T_ρ T_σ)`.
    pub fn gram_plus(&self) -> DMatrix<f64> {
        let g = group(4).expect("S_4");
        DMatrix::from_fn(24, 24, |r, s| self.q_traces[g.mul(r, s)])
    }

    /// `G^-_ρσ = tr(Q⊥ T_ρ T_σ)`.
    pub fn gram_minus(&self) -> DMatrix<f64> {
        let g = group(4).expect("S_4");
        DMatrix::from_fn(24, 24, |r, s| {
            let k = g.mul(r, s);
            self.traces[k] - self.q_traces[k]
        })
    }

    /// 4-fold Clifford twirl of an operator `O` given through its traces
    /// `tr(O T_σ)` and `tr(O Q T_σ)`. Returns `(c, b)` with
    /// `Φ(O) = Σ_ρ (c_ρ Q + b_ρ) T_ρ`.
    pub fn twirl(&self, tr_o_t: &[f64], tr_o_qt: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        for v in [tr_o_t, tr_o_qt] {
            if v.len() != 24 {
                return Err(Error::SizeMismatch { expected: 24, got: v.len() });
            }
        }
        let plus = DMatrix::from_column_slice(24, 1, tr_o_qt);
        let perp = DMatrix::from_fn(24, 1, |i, _| tr_o_t[i] - tr_o_qt[i]);
        let alpha = &self.w_plus * plus;
        let beta = &self.w_minus * perp;
        let c = (0..24).map(|i| alpha[i] - beta[i]).collect();
        let b = beta.iter().copied().collect();
        Ok((c, b))
    }

    /// Traces `(tr(Φ T_σ), tr(Φ Q T_σ))` of `Φ = Σ_ρ (c_ρ Q + b_ρ) T_ρ`.
    pub fn traces_of(&self, c: &[f64], b: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let g = group(4).expect("S_4");
        let mut t = vec![0.0; 24];
        let mut qt = vec![0.0; 24];
        for s in 0..24 {
            for r in 0..24 {
                let k = g.mul(r, s);
                t[s] += c[r] * self.q_traces[k] + b[r] * self.traces[k];
                qt[s] += (c[r] + b[r]) * self.q_traces[k];
            }
        }
        (t, qt)
    }
}
