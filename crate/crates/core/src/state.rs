//! Dense pure-state and density-matrix simulation of `n` qubits.
//!
//! Qubit `q` is bit `q` of the computational-basis index (little endian).
//! Density matrices are stored row-major, so entry `(r, c)` lives at
//! `r * d + c`; viewed as a vector on `2n` qubits the row index occupies bits
//! `n..2n` and the column index bits `0..n`. Conjugation `ρ ↦ UρU†` is then
//! `U` on the high bits and `conj(U)` on the low ones, which lets both state
//! kinds share the same kernels.

use num_complex::Complex64 as C64;
use rand::Rng;

use crate::circuit::Gate;
use crate::error::{Error, Result};

/// A 2×2 complex matrix in row-major order.
pub type Mat2 = [[C64; 2]; 2];

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Probabilities below this are treated as unrealizable branches.
pub const MEASURE_ZERO: f64 = 1e-14;

/// Tolerance on `‖U†U − 1‖_max` for user-supplied gates.
pub const UNITARY_TOL: f64 = 1e-10;

pub fn hadamard() -> Mat2 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [[C64::new(s, 0.0), C64::new(s, 0.0)], [C64::new(s, 0.0), C64::new(-s, 0.0)]]
}

pub fn phase_s() -> Mat2 {
    [[ONE, ZERO], [ZERO, C64::i()]]
}

pub fn pauli_x() -> Mat2 {
    [[ZERO, ONE], [ONE, ZERO]]
}

fn conj2(m: &Mat2) -> Mat2 {
    [[m[0][0].conj(), m[0][1].conj()], [m[1][0].conj(), m[1][1].conj()]]
}

fn unitarity_defect(m: &Mat2) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = ZERO;
            for k in 0..2 {
                acc += m[k][i].conj() * m[k][j];
            }
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((acc - target).norm());
        }
    }
    worst
}

// Kernels on a raw amplitude slice viewed as a register of log2(len) qubits.

fn kernel_1q(amps: &mut [C64], bit: usize, m: &Mat2) {
    let stride = 1usize << bit;
    let len = amps.len();
    let mut base = 0;
    while base < len {
        for i in base..base + stride {
            let a0 = amps[i];
            let a1 = amps[i + stride];
            amps[i] = m[0][0] * a0 + m[0][1] * a1;
            amps[i + stride] = m[1][0] * a0 + m[1][1] * a1;
        }
        base += 2 * stride;
    }
}

fn kernel_h(amps: &mut [C64], bit: usize) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let stride = 1usize << bit;
    let len = amps.len();
    let mut base = 0;
    while base < len {
        for i in base..base + stride {
            let a0 = amps[i];
            let a1 = amps[i + stride];
            amps[i] = (a0 + a1) * s;
            amps[i + stride] = (a0 - a1) * s;
        }
        base += 2 * stride;
    }
}

/// Multiplies the `|1⟩` component of `bit` by `phase`.
fn kernel_phase(amps: &mut [C64], bit: usize, phase: C64) {
    let mask = 1usize << bit;
    for (i, a) in amps.iter_mut().enumerate() {
        if i & mask != 0 {
            *a *= phase;
        }
    }
}

fn kernel_cnot(amps: &mut [C64], cbit: usize, tbit: usize) {
    let cmask = 1usize << cbit;
    let tmask = 1usize << tbit;
    for i in 0..amps.len() {
        if i & cmask != 0 && i & tmask == 0 {
            amps.swap(i, i | tmask);
        }
    }
}

fn check_qubit(qubit: usize, n: usize) -> Result<()> {
    if qubit >= n {
        Err(Error::QubitOutOfRange { qubit, n })
    } else {
        Ok(())
    }
}

fn check_gate(g: &Gate, n: usize) -> Result<()> {
    if let Gate::Cnot { control, target } = *g {
        if control == target {
            return Err(Error::InvalidInput(format!("CNOT with control = target = {control}")));
        }
    }
    check_qubit(g.max_qubit(), n)
}

/// Which projector of a two-outcome basis.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    /// `(|0⟩ + e^{iθ}|1⟩)/√2`
    One,
    /// `(|0⟩ − e^{iθ}|1⟩)/√2`
    Two,
}

/// The single-qubit basis `B_θ = {(|0⟩ ± e^{iθ}|1⟩)/√2}` on one qubit.
///
/// `θ ∈ {0, π/2}` gives the X and Y eigenbases (Clifford bases); any other
/// angle is a non-stabilizer basis, with `θ = π/4` being the `T`-rotated one.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ThetaBasis {
    pub theta: f64,
    pub qubit: usize,
}

impl ThetaBasis {
    pub fn new(theta: f64, qubit: usize) -> Result<Self> {
        let half_pi = std::f64::consts::FRAC_PI_2;
        if !(theta.is_finite() && (-1e-12..=half_pi + 1e-12).contains(&theta)) {
            return Err(Error::OutOfDomain(format!("theta = {theta} outside [0, π/2]")));
        }
        Ok(Self { theta, qubit })
    }

    /// Basis ket for `outcome`, normalized.
    pub fn ket(&self, outcome: Outcome) -> [C64; 2] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let sign = match outcome {
            Outcome::One => 1.0,
            Outcome::Two => -1.0,
        };
        [C64::new(s, 0.0), C64::from_polar(sign * s, self.theta)]
    }

    /// Rank-one projector `|φ⟩⟨φ|` for `outcome`.
    pub fn projector(&self, outcome: Outcome) -> Mat2 {
        let k = self.ket(outcome);
        [[k[0] * k[0].conj(), k[0] * k[1].conj()], [k[1] * k[0].conj(), k[1] * k[1].conj()]]
    }
}

/// Subsystem split `H = H_A ⊗ H_B` given by the qubits of `A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bipartition {
    n: usize,
    qubits_a: Vec<usize>,
}

impl Bipartition {
    pub fn new(n: usize, mut qubits_a: Vec<usize>) -> Result<Self> {
        qubits_a.sort_unstable();
        qubits_a.dedup();
        if let Some(&q) = qubits_a.last() {
            check_qubit(q, n)?;
        }
        Ok(Self { n, qubits_a })
    }

    /// `A` = the lowest `n_a` qubits.
    pub fn leading(n: usize, n_a: usize) -> Result<Self> {
        if n_a > n {
            return Err(Error::InvalidInput(format!("subsystem of {n_a} qubits in a {n}-qubit register")));
        }
        Self::new(n, (0..n_a).collect())
    }

    /// The `d_A = d_B = √d` split used throughout (requires even `n`).
    pub fn balanced(n: usize) -> Result<Self> {
        if !n.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!("balanced split needs even n, got {n}")));
        }
        Self::leading(n, n / 2)
    }

    /// Split with `d_A` given as a dimension; must be a power of two dividing `2^n`.
    pub fn from_dims(n: usize, d_a: u64) -> Result<Self> {
        if d_a == 0 || !d_a.is_power_of_two() || d_a.trailing_zeros() as usize > n {
            return Err(Error::InvalidInput(format!("d_A = {d_a} does not divide d = 2^{n}")));
        }
        Self::leading(n, d_a.trailing_zeros() as usize)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn qubits_a(&self) -> &[usize] {
        &self.qubits_a
    }

    pub fn qubits_b(&self) -> Vec<usize> {
        (0..self.n).filter(|q| !self.qubits_a.contains(q)).collect()
    }

    pub fn d_a(&self) -> usize {
        1 << self.qubits_a.len()
    }

    pub fn d_b(&self) -> usize {
        1 << (self.n - self.qubits_a.len())
    }

    pub fn complement(&self) -> Self {
        Self { n: self.n, qubits_a: self.qubits_b() }
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.n != n {
            return Err(Error::SizeMismatch { expected: n, got: self.n });
        }
        Ok(())
    }

    /// Full index → (index in A, index in B).
    fn index_maps(&self) -> (Vec<usize>, Vec<usize>) {
        let qb = self.qubits_b();
        let d = 1usize << self.n;
        let gather =
            |i: usize, qs: &[usize]| qs.iter().enumerate().fold(0usize, |acc, (pos, &q)| acc | (((i >> q) & 1) << pos));
        let a = (0..d).map(|i| gather(i, &self.qubits_a)).collect();
        let b = (0..d).map(|i| gather(i, &qb)).collect();
        (a, b)
    }
}

/// A pure state vector of `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    n: usize,
    amps: Vec<C64>,
}

impl PureState {
    /// `|0⟩^{⊗n}`.
    pub fn zero(n: usize) -> Self {
        let mut amps = vec![ZERO; 1 << n];
        amps[0] = ONE;
        Self { n, amps }
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if index >= 1 << n {
            return Err(Error::InvalidInput(format!("basis index {index} for {n} qubits")));
        }
        let mut amps = vec![ZERO; 1 << n];
        amps[index] = ONE;
        Ok(Self { n, amps })
    }

    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() || !amps.len().is_power_of_two() {
            return Err(Error::InvalidInput(format!("amplitude vector of length {}", amps.len())));
        }
        let n = amps.len().trailing_zeros() as usize;
        Ok(Self { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_squared(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Rescales to unit norm; fails on a (numerically) null vector.
    pub fn normalize(&mut self) -> Result<()> {
        let ns = self.norm_squared();
        if ns < MEASURE_ZERO {
            return Err(Error::MeasureZero { prob: ns });
        }
        let inv = 1.0 / ns.sqrt();
        self.amps.iter_mut().for_each(|a| *a *= inv);
        Ok(())
    }

    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { expected: self.n, got: other.n });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn apply_single_qubit_gate(&mut self, gate: &Mat2, qubit: usize) -> Result<()> {
        check_qubit(qubit, self.n)?;
        let deviation = unitarity_defect(gate);
        if deviation > UNITARY_TOL {
            return Err(Error::NonUnitary { deviation });
        }
        kernel_1q(&mut self.amps, qubit, gate);
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        check_gate(gate, self.n)?;
        self.apply_gate_unchecked(gate);
        Ok(())
    }

    fn apply_gate_unchecked(&mut self, gate: &Gate) {
        match *gate {
            Gate::H(q) => kernel_h(&mut self.amps, q),
            Gate::S(q) => kernel_phase(&mut self.amps, q, C64::i()),
            Gate::Cnot { control, target } => kernel_cnot(&mut self.amps, control, target),
        }
    }

    /// Applies a gate list in order.
    pub fn conjugate_by_circuit(&mut self, gates: &[Gate]) -> Result<()> {
        for g in gates {
            check_gate(g, self.n)?;
        }
        gates.iter().for_each(|g| self.apply_gate_unchecked(g));
        Ok(())
    }

    fn branch_probability(&self, proj: &Mat2, qubit: usize) -> f64 {
        let stride = 1usize << qubit;
        let mut p = 0.0;
        for i in 0..self.amps.len() {
            if i & stride == 0 {
                let a0 = self.amps[i];
                let a1 = self.amps[i | stride];
                let v0 = proj[0][0] * a0 + proj[0][1] * a1;
                let v1 = proj[1][0] * a0 + proj[1][1] * a1;
                p += (a0.conj() * v0 + a1.conj() * v1).re;
            }
        }
        p.clamp(0.0, 1.0)
    }

    /// Returns `(P ψ, ⟨ψ|P|ψ⟩)` for the `outcome` projector of `basis`, without
    /// renormalizing.
    pub fn project_theta(&self, basis: &ThetaBasis, outcome: Outcome) -> Result<(PureState, f64)> {
        check_qubit(basis.qubit, self.n)?;
        let proj = basis.projector(outcome);
        let prob = self.branch_probability(&proj, basis.qubit);
        let mut out = self.clone();
        kernel_1q(&mut out.amps, basis.qubit, &proj);
        Ok((out, prob))
    }

    /// Projects onto `outcome` and renormalizes; fails on measure-zero branches.
    pub fn project_theta_normalized(&self, basis: &ThetaBasis, outcome: Outcome) -> Result<(PureState, f64)> {
        let (mut out, prob) = self.project_theta(basis, outcome)?;
        if prob < MEASURE_ZERO {
            return Err(Error::MeasureZero { prob });
        }
        out.amps.iter_mut().for_each(|a| *a /= prob.sqrt());
        Ok((out, prob))
    }

    /// Born-rule measurement in `basis`; the returned state is renormalized.
    pub fn born_sample_measure<R: Rng + ?Sized>(
        &self,
        basis: &ThetaBasis,
        rng: &mut R,
    ) -> Result<(PureState, Outcome)> {
        check_qubit(basis.qubit, self.n)?;
        let p1 = self.branch_probability(&basis.projector(Outcome::One), basis.qubit);
        let u: f64 = rng.random();
        let outcome = if u < p1 { Outcome::One } else { Outcome::Two };
        let (state, _) = self.project_theta_normalized(basis, outcome)?;
        Ok((state, outcome))
    }

    /// `tr(ψ_A²)` via the `d_A × d_B` reshaping of the amplitudes:
    /// the reduced state on the smaller side is `M M†` and its purity is
    /// `‖M M†‖_F² = Σ s_i⁴`.
    pub fn purity(&self, cut: &Bipartition) -> Result<f64> {
        cut.check(self.n)?;
        let cut = if cut.d_a() <= cut.d_b() { cut.clone() } else { cut.complement() };
        let (ia, ib) = cut.index_maps();
        let (da, db) = (cut.d_a(), cut.d_b());
        let mut m = vec![ZERO; da * db];
        for (i, a) in self.amps.iter().enumerate() {
            m[ia[i] * db + ib[i]] = *a;
        }
        let mut pur = 0.0;
        for a in 0..da {
            let ra = &m[a * db..(a + 1) * db];
            for a2 in 0..da {
                let rb = &m[a2 * db..(a2 + 1) * db];
                let rho: C64 = ra.iter().zip(rb).map(|(x, y)| x * y.conj()).sum();
                pur += rho.norm_sqr();
            }
        }
        let ns = self.norm_squared();
        Ok(pur / (ns * ns))
    }

    pub fn to_density(&self) -> MixedState {
        let d = self.dim();
        let mut m = vec![ZERO; d * d];
        for r in 0..d {
            for c in 0..d {
                m[r * d + c] = self.amps[r] * self.amps[c].conj();
            }
        }
        MixedState { n: self.n, matrix: m }
    }
}

/// A density operator of `n` qubits, stored dense.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedState {
    n: usize,
    matrix: Vec<C64>,
}

impl MixedState {
    pub fn zero(n: usize) -> Self {
        PureState::zero(n).to_density()
    }

    pub fn maximally_mixed(n: usize) -> Self {
        let d = 1usize << n;
        let mut matrix = vec![ZERO; d * d];
        for i in 0..d {
            matrix[i * d + i] = C64::new(1.0 / d as f64, 0.0);
        }
        Self { n, matrix }
    }

    /// From a row-major `d × d` matrix.
    pub fn from_matrix(n: usize, matrix: Vec<C64>) -> Result<Self> {
        let d = 1usize << n;
        if matrix.len() != d * d {
            return Err(Error::SizeMismatch { expected: d * d, got: matrix.len() });
        }
        Ok(Self { n, matrix })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn matrix(&self) -> &[C64] {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.matrix[row * self.dim() + col]
    }

    pub fn trace(&self) -> C64 {
        let d = self.dim();
        (0..d).map(|i| self.matrix[i * d + i]).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in r..d {
                worst = worst.max((self.matrix[r * d + c] - self.matrix[c * d + r].conj()).norm());
            }
        }
        worst
    }

    pub fn normalize(&mut self) -> Result<()> {
        let t = self.trace().re;
        if t.abs() < MEASURE_ZERO {
            return Err(Error::MeasureZero { prob: t });
        }
        self.matrix.iter_mut().for_each(|x| *x /= t);
        Ok(())
    }

    /// Eigenvalues of the (Hermitian part of the) density matrix, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let d = self.dim();
        let m = nalgebra::DMatrix::from_fn(d, d, |r, c| {
            let a = self.matrix[r * d + c];
            let b = self.matrix[c * d + r].conj();
            (a + b) * 0.5
        });
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    pub fn apply_single_qubit_gate(&mut self, gate: &Mat2, qubit: usize) -> Result<()> {
        check_qubit(qubit, self.n)?;
        let deviation = unitarity_defect(gate);
        if deviation > UNITARY_TOL {
            return Err(Error::NonUnitary { deviation });
        }
        kernel_1q(&mut self.matrix, qubit + self.n, gate);
        kernel_1q(&mut self.matrix, qubit, &conj2(gate));
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        check_gate(gate, self.n)?;
        self.apply_gate_unchecked(gate);
        Ok(())
    }

    fn apply_gate_unchecked(&mut self, gate: &Gate) {
        let n = self.n;
        match *gate {
            Gate::H(q) => {
                kernel_h(&mut self.matrix, q + n);
                kernel_h(&mut self.matrix, q);
            }
            Gate::S(q) => {
                kernel_phase(&mut self.matrix, q + n, C64::i());
                kernel_phase(&mut self.matrix, q, -C64::i());
            }
            Gate::Cnot { control, target } => {
                kernel_cnot(&mut self.matrix, control + n, target + n);
                kernel_cnot(&mut self.matrix, control, target);
            }
        }
    }

    /// `ρ ↦ C ρ C†` with `C` the product of `gates` (first gate applied first).
    pub fn conjugate_by_circuit(&mut self, gates: &[Gate]) -> Result<()> {
        for g in gates {
            check_gate(g, self.n)?;
        }
        gates.iter().for_each(|g| self.apply_gate_unchecked(g));
        Ok(())
    }

    /// The dephasing channel `ρ ↦ Σ_γ P_γ ρ P_γ` in `basis`.
    pub fn dephase_qubit(&mut self, basis: &ThetaBasis) -> Result<()> {
        check_qubit(basis.qubit, self.n)?;
        let p1 = basis.projector(Outcome::One);
        let p2 = basis.projector(Outcome::Two);
        let d = self.dim();
        let mask = 1usize << basis.qubit;
        for r in 0..d {
            if r & mask != 0 {
                continue;
            }
            for c in 0..d {
                if c & mask != 0 {
                    continue;
                }
                let idx = [[r * d + c, r * d + (c | mask)], [(r | mask) * d + c, (r | mask) * d + (c | mask)]];
                let blk = [
                    [self.matrix[idx[0][0]], self.matrix[idx[0][1]]],
                    [self.matrix[idx[1][0]], self.matrix[idx[1][1]]],
                ];
                let out = add2(&sandwich(&p1, &blk), &sandwich(&p2, &blk));
                for a in 0..2 {
                    for b in 0..2 {
                        self.matrix[idx[a][b]] = out[a][b];
                    }
                }
            }
        }
        Ok(())
    }

    pub fn reduced(&self, cut: &Bipartition) -> Result<Vec<C64>> {
        cut.check(self.n)?;
        let (ia, ib) = cut.index_maps();
        let d = self.dim();
        let da = cut.d_a();
        let mut red = vec![ZERO; da * da];
        for r in 0..d {
            for c in 0..d {
                if ib[r] == ib[c] {
                    red[ia[r] * da + ia[c]] += self.matrix[r * d + c];
                }
            }
        }
        Ok(red)
    }

    /// `tr(ρ_A²)`, normalized by `tr(ρ)²`.
    pub fn purity(&self, cut: &Bipartition) -> Result<f64> {
        let red = self.reduced(cut)?;
        let t = self.trace().re;
        Ok(red.iter().map(|x| x.norm_sqr()).sum::<f64>() / (t * t))
    }
}

fn mul2(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn add2(a: &Mat2, b: &Mat2) -> Mat2 {
    [[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]]
}

fn sandwich(p: &Mat2, x: &Mat2) -> Mat2 {
    mul2(&mul2(p, x), p)
}
