//! Clifford tableaus: uniform sampling, Pauli conjugation and synthesis into
//! `{H, S, CNOT}` circuits.
//!
//! Pauli strings are stored as `i^phase · X^x · Z^z` with `x`, `z` bit masks
//! (bit `q` = qubit `q`), so `Y = i·XZ` has `phase = 1`. A tableau stores the
//! images `C X_q C†` (rows `0..n`) and `C Z_q C†` (rows `n..2n`). Global phases
//! of `C` are not represented.

use std::fmt;

use num_complex::Complex64 as C64;
use rand::Rng;

use crate::circuit::{inverse_circuit, Gate};
use crate::error::{Error, Result};

/// Registers are bit masks in a `u64`.
pub const MAX_QUBITS: usize = 64;

#[inline]
fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
fn symplectic_product(x1: u64, z1: u64, x2: u64, z2: u64) -> u32 {
    ((x1 & z2) ^ (z1 & x2)).count_ones() & 1
}

/// `i^phase · X^x Z^z` on `n` qubits.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    phase: u8,
}

impl PauliString {
    pub fn new(n: usize, x: u64, z: u64, phase: u8) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::InvalidInput(format!("{n}-qubit Pauli string")));
        }
        if (x | z) & !mask(n) != 0 {
            return Err(Error::InvalidInput("Pauli bits outside the register".into()));
        }
        Ok(Self { n, x, z, phase: phase & 3 })
    }

    pub fn identity(n: usize) -> Self {
        Self { n, x: 0, z: 0, phase: 0 }
    }

    pub fn x_on(n: usize, q: usize) -> Self {
        Self { n, x: 1 << q, z: 0, phase: 0 }
    }

    pub fn z_on(n: usize, q: usize) -> Self {
        Self { n, x: 0, z: 1 << q, phase: 0 }
    }

    /// Parses labels like `"XIZ"`, `"-YY"` or `"iXZ"`; character `k` acts on qubit `k`.
    pub fn parse(label: &str) -> Result<Self> {
        let (mut phase, body) = if let Some(r) = label.strip_prefix("-i") {
            (3u8, r)
        } else if let Some(r) = label.strip_prefix("+i").or_else(|| label.strip_prefix('i')) {
            (1, r)
        } else if let Some(r) = label.strip_prefix('-') {
            (2, r)
        } else {
            (0, label.strip_prefix('+').unwrap_or(label))
        };
        let n = body.chars().count();
        let (mut x, mut z) = (0u64, 0u64);
        for (q, ch) in body.chars().enumerate() {
            match ch {
                'I' => {}
                'X' => x |= 1 << q,
                'Z' => z |= 1 << q,
                'Y' => {
                    x |= 1 << q;
                    z |= 1 << q;
                    phase += 1;
                }
                _ => return Err(Error::InvalidInput(format!("bad Pauli label {label:?}"))),
            }
        }
        Self::new(n, x, z, phase)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_bits(&self) -> u64 {
        self.x
    }

    pub fn z_bits(&self) -> u64 {
        self.z
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    /// Number of `Y` factors.
    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// True when the string is a Hermitian Pauli, i.e. `±` a product of `I, X, Y, Z`.
    pub fn is_hermitian(&self) -> bool {
        (self.phase as u32 & 1) == (self.y_count() & 1)
    }

    /// `+1` / `−1` relative to the product of `I, X, Y, Z` factors (Hermitian strings only).
    pub fn sign(&self) -> i8 {
        if (self.phase as u32 + 4 - (self.y_count() & 3)).is_multiple_of(4) {
            1
        } else {
            -1
        }
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        symplectic_product(self.x, self.z, other.x, other.z) == 0
    }

    /// Operator product `self · other`, phases included.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { expected: self.n, got: other.n });
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &PauliString) -> PauliString {
        let swaps = (self.z & other.x).count_ones() as u8;
        PauliString {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: (self.phase + other.phase + 2 * (swaps & 1)) & 3,
        }
    }

    /// Dense `2^n × 2^n` matrix, row-major. Intended for small `n`.
    pub fn matrix(&self) -> Vec<C64> {
        let d = 1usize << self.n;
        let coeff = C64::i().powu(self.phase as u32);
        let mut m = vec![C64::new(0.0, 0.0); d * d];
        for b in 0..d {
            let sign = if (self.z & b as u64).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
            let row = b ^ self.x as usize;
            m[row * d + b] = coeff * sign;
        }
        m
    }

    fn conjugate_gate(&mut self, g: &Gate) {
        match *g {
            Gate::H(q) => {
                let (xb, zb) = ((self.x >> q) & 1, (self.z >> q) & 1);
                if xb & zb == 1 {
                    self.phase = (self.phase + 2) & 3;
                }
                self.x = (self.x & !(1 << q)) | (zb << q);
                self.z = (self.z & !(1 << q)) | (xb << q);
            }
            Gate::S(q) => {
                if (self.x >> q) & 1 == 1 {
                    self.z ^= 1 << q;
                    self.phase = (self.phase + 1) & 3;
                }
            }
            Gate::Cnot { control, target } => {
                self.x ^= ((self.x >> control) & 1) << target;
                self.z ^= ((self.z >> target) & 1) << control;
            }
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_hermitian() {
            write!(f, "{}", if self.sign() > 0 { '+' } else { '-' })?;
        } else {
            let p = (self.phase as u32 + 4 - (self.y_count() & 3)) % 4;
            write!(f, "{}", if p == 1 { "+i" } else { "-i" })?;
        }
        for q in 0..self.n {
            let c = match ((self.x >> q) & 1, (self.z >> q) & 1) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (0, 1) => 'Z',
                _ => 'Y',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Conjugation action of an `n`-qubit Clifford unitary.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CliffordTableau {
    n: usize,
    rows: Vec<PauliString>,
}

impl CliffordTableau {
    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|q| PauliString::x_on(n, q)).chain((0..n).map(|q| PauliString::z_on(n, q))).collect();
        Self { n, rows }
    }

    /// Builds a tableau from the images of `X_q` and `Z_q`, validating it.
    pub fn from_images(x_images: Vec<PauliString>, z_images: Vec<PauliString>) -> Result<Self> {
        let n = x_images.len();
        if z_images.len() != n {
            return Err(Error::SizeMismatch { expected: n, got: z_images.len() });
        }
        let t = Self { n, rows: x_images.into_iter().chain(z_images).collect() };
        t.validate()?;
        Ok(t)
    }

    /// Tableau of the circuit `gates` (first gate applied first).
    pub fn from_gates(n: usize, gates: &[Gate]) -> Result<Self> {
        let mut t = Self::identity(n);
        for g in gates {
            t.apply_gate(g)?;
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_image(&self, q: usize) -> &PauliString {
        &self.rows[q]
    }

    pub fn z_image(&self, q: usize) -> &PauliString {
        &self.rows[self.n + q]
    }

    pub fn rows(&self) -> &[PauliString] {
        &self.rows
    }

    /// Checks the symplectic condition over GF(2) and that every row is a
    /// Hermitian Pauli string on `n` qubits.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n == 0 || n > MAX_QUBITS || self.rows.len() != 2 * n {
            return Err(Error::InvalidTableau(format!("{} rows for {n} qubits", self.rows.len())));
        }
        for (i, r) in self.rows.iter().enumerate() {
            if r.n != n {
                return Err(Error::InvalidTableau(format!("row {i} acts on {} qubits", r.n)));
            }
            if !r.is_hermitian() {
                return Err(Error::InvalidTableau(format!("row {i} ({r}) is not Hermitian")));
            }
        }
        for i in 0..2 * n {
            for j in i + 1..2 * n {
                let want = u32::from(j == i + n);
                let (a, b) = (&self.rows[i], &self.rows[j]);
                if symplectic_product(a.x, a.z, b.x, b.z) != want {
                    return Err(Error::InvalidTableau(format!("rows {i} and {j} violate the symplectic form")));
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Composes `gate` after the current Clifford: `C ↦ G C`.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        if gate.max_qubit() >= self.n {
            return Err(Error::QubitOutOfRange { qubit: gate.max_qubit(), n: self.n });
        }
        if let Gate::Cnot { control, target } = *gate {
            if control == target {
                return Err(Error::InvalidInput(format!("CNOT with control = target = {control}")));
            }
        }
        self.rows.iter_mut().for_each(|r| r.conjugate_gate(gate));
        Ok(())
    }

    /// `C P C†`.
    pub fn conjugate_pauli(&self, p: &PauliString) -> Result<PauliString> {
        if p.n != self.n {
            return Err(Error::SizeMismatch { expected: self.n, got: p.n });
        }
        let mut acc = PauliString { n: self.n, x: 0, z: 0, phase: p.phase };
        for q in 0..self.n {
            if (p.x >> q) & 1 == 1 {
                acc = acc.mul_unchecked(&self.rows[q]);
            }
        }
        for q in 0..self.n {
            if (p.z >> q) & 1 == 1 {
                acc = acc.mul_unchecked(&self.rows[self.n + q]);
            }
        }
        Ok(acc)
    }

    /// Synthesizes a `{H, S, CNOT}` circuit with this conjugation action.
    ///
    /// The tableau is reduced to the identity qubit by qubit with gates
    /// applied on the output side; the returned circuit is the inverse of the
    /// reduction. Gate count is `O(n²)`.
    pub fn to_gates(&self) -> Result<Vec<Gate>> {
        self.validate()?;
        let n = self.n;
        let mut work = self.clone();
        let mut reduction: Vec<Gate> = Vec::new();
        let mut push = |work: &mut CliffordTableau, g: Gate| {
            work.rows.iter_mut().for_each(|r| r.conjugate_gate(&g));
            reduction.push(g);
        };

        for q in 0..n {
            // Image of X_q → X_q.
            let p = work.rows[q];
            for j in q..n {
                match ((p.x >> j) & 1, (p.z >> j) & 1) {
                    (0, 1) => push(&mut work, Gate::H(j)),
                    (1, 1) => push(&mut work, Gate::S(j)),
                    _ => {}
                }
            }
            let p = work.rows[q];
            if (p.x >> q) & 1 == 0 {
                let j = (q + 1..n)
                    .find(|&j| (p.x >> j) & 1 == 1)
                    .ok_or_else(|| Error::InvalidTableau("X image has no support".into()))?;
                push(&mut work, Gate::Cnot { control: j, target: q });
            }
            let p = work.rows[q];
            for j in q + 1..n {
                if (p.x >> j) & 1 == 1 {
                    push(&mut work, Gate::Cnot { control: q, target: j });
                }
            }

            // Image of Z_q → Z_q, keeping X_q fixed.
            let r = work.rows[n + q];
            if (r.x >> q) & 1 == 1 {
                push(&mut work, Gate::H(q));
                push(&mut work, Gate::S(q));
                push(&mut work, Gate::H(q));
            }
            let r = work.rows[n + q];
            for j in q + 1..n {
                match ((r.x >> j) & 1, (r.z >> j) & 1) {
                    (1, 0) => push(&mut work, Gate::H(j)),
                    (1, 1) => {
                        push(&mut work, Gate::S(j));
                        push(&mut work, Gate::H(j));
                    }
                    _ => {}
                }
            }
            let r = work.rows[n + q];
            for j in q + 1..n {
                if (r.z >> j) & 1 == 1 {
                    push(&mut work, Gate::Cnot { control: j, target: q });
                }
            }
        }

        // Remaining signs: Z = S² flips X_q, X = H S² H flips Z_q.
        for q in 0..n {
            if work.rows[q].phase == 2 {
                push(&mut work, Gate::S(q));
                push(&mut work, Gate::S(q));
            }
            if work.rows[n + q].phase == 2 {
                for g in [Gate::H(q), Gate::S(q), Gate::S(q), Gate::H(q)] {
                    push(&mut work, g);
                }
            }
        }
        debug_assert_eq!(work, CliffordTableau::identity(n));
        Ok(inverse_circuit(&reduction))
    }

    /// Dense unitary (up to global phase) of the synthesized circuit; small `n` only.
    pub fn unitary(&self) -> Result<Vec<C64>> {
        let gates = self.to_gates()?;
        let d = 1usize << self.n;
        let mut u = vec![C64::new(0.0, 0.0); d * d];
        for col in 0..d {
            let mut s = crate::state::PureState::basis(self.n, col)?;
            s.conjugate_by_circuit(&gates)?;
            for (row, a) in s.amplitudes().iter().enumerate() {
                u[row * d + col] = *a;
            }
        }
        Ok(u)
    }
}

fn random_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (u64, u64) {
    (rng.random::<u64>() & mask(n), rng.random::<u64>() & mask(n))
}

/// Samples a Clifford conjugation action uniformly from `C(2^n)` modulo phases.
///
/// The symplectic part is drawn pair by pair: each new `(X_q, Z_q)` image is a
/// uniformly random hyperbolic pair in the symplectic complement of the pairs
/// already chosen, obtained by projecting uniform vectors onto that complement.
/// Every element of `Sp(2n, 2)` arises from exactly one sequence of choices, so
/// the result is uniform; independent uniform signs on the `2n` rows then make
/// the full action uniform.
pub fn sample_uniform_clifford<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<CliffordTableau> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::InvalidInput(format!("cannot sample a {n}-qubit Clifford")));
    }
    let mut pairs: Vec<((u64, u64), (u64, u64))> = Vec::with_capacity(n);
    let project = |pairs: &[((u64, u64), (u64, u64))], (mut x, mut z): (u64, u64)| {
        let (x0, z0) = (x, z);
        for &((vx, vz), (wx, wz)) in pairs {
            if symplectic_product(x0, z0, wx, wz) == 1 {
                x ^= vx;
                z ^= vz;
            }
            if symplectic_product(x0, z0, vx, vz) == 1 {
                x ^= wx;
                z ^= wz;
            }
        }
        (x, z)
    };
    for _ in 0..n {
        let v = loop {
            let v = project(&pairs, random_vector(n, rng));
            if v != (0, 0) {
                break v;
            }
        };
        let w = loop {
            let w = project(&pairs, random_vector(n, rng));
            if symplectic_product(v.0, v.1, w.0, w.1) == 1 {
                break w;
            }
        };
        pairs.push((v, w));
    }
    let mut rows = vec![PauliString::identity(n); 2 * n];
    for (q, &((vx, vz), (wx, wz))) in pairs.iter().enumerate() {
        for (slot, (x, z)) in [(q, (vx, vz)), (n + q, (wx, wz))] {
            let y = (x & z).count_ones() as u8;
            let sign = if rng.random::<bool>() { 2 } else { 0 };
            rows[slot] = PauliString { n, x, z, phase: (y + sign) & 3 };
        }
    }
    Ok(CliffordTableau { n, rows })
}

/// Every Clifford conjugation action on `n ≤ 2` qubits (24 for one qubit,
/// 11520 for two).
pub fn enumerate_cliffords(n: usize) -> Result<Vec<CliffordTableau>> {
    if !(1..=2).contains(&n) {
        return Err(Error::InvalidInput(format!("enumeration supported for n ∈ {{1, 2}}, got {n}")));
    }
    let vecs: Vec<(u64, u64)> = (0..1u64 << (2 * n)).map(|b| (b & mask(n), b >> n)).collect();
    let mut out = Vec::new();
    let mut chosen: Vec<(u64, u64)> = Vec::with_capacity(2 * n);
    enumerate_rows(n, &vecs, &mut chosen, &mut out);
    Ok(out)
}

fn enumerate_rows(n: usize, vecs: &[(u64, u64)], chosen: &mut Vec<(u64, u64)>, out: &mut Vec<CliffordTableau>) {
    let i = chosen.len();
    if i == 2 * n {
        for signs in 0..1u32 << (2 * n) {
            let rows = chosen
                .iter()
                .enumerate()
                .map(|(r, &(x, z))| {
                    let y = (x & z).count_ones() as u8;
                    let s = if (signs >> r) & 1 == 1 { 2 } else { 0 };
                    PauliString { n, x, z, phase: (y + s) & 3 }
                })
                .collect();
            out.push(CliffordTableau { n, rows });
        }
        return;
    }
    for &v in vecs {
        if v == (0, 0) {
            continue;
        }
        let ok = chosen.iter().enumerate().all(|(j, &u)| {
            let want = u32::from(i == j + n);
            symplectic_product(u.0, u.1, v.0, v.1) == want
        });
        if ok {
            chosen.push(v);
            enumerate_rows(n, vecs, chosen, out);
            chosen.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn matmul(a: &[C64], b: &[C64], d: usize) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let aik = a[i * d + k];
                for j in 0..d {
                    out[i * d + j] += aik * b[k * d + j];
                }
            }
        }
        out
    }

    fn dagger(a: &[C64], d: usize) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                out[j * d + i] = a[i * d + j].conj();
            }
        }
        out
    }

    fn max_diff(a: &[C64], b: &[C64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn pauli_labels_and_products() {
        let y = PauliString::parse("Y").unwrap();
        assert_eq!((y.x_bits(), y.z_bits(), y.phase()), (1, 1, 1));
        assert!(y.is_hermitian());
        let x = PauliString::parse("X").unwrap();
        let z = PauliString::parse("Z").unwrap();
        // XZ = -iY
        let xz = x.mul(&z).unwrap();
        assert_eq!(xz.phase(), 0);
        assert!(!xz.is_hermitian());
        let zx = z.mul(&x).unwrap();
        assert_eq!(zx.phase(), 2);
        assert_eq!(PauliString::parse("-XY").unwrap().to_string(), "-XY");
        assert!(PauliString::parse("XQ").is_err());
    }

    #[test]
    fn pauli_matrix_multiplication_matches_string_product() {
        let labels = ["XY", "ZZ", "-YI", "iXZ", "IY"];
        for a in labels {
            for b in labels {
                let (pa, pb) = (PauliString::parse(a).unwrap(), PauliString::parse(b).unwrap());
                let prod = pa.mul(&pb).unwrap();
                assert!(max_diff(&prod.matrix(), &matmul(&pa.matrix(), &pb.matrix(), 4)) < 1e-12);
            }
        }
    }

    #[test]
    fn identity_and_textbook_conjugations() {
        let id = CliffordTableau::identity(3);
        assert!(id.is_valid());
        let p = PauliString::parse("XYZ").unwrap();
        assert_eq!(id.conjugate_pauli(&p).unwrap(), p);
        assert!(id.to_gates().unwrap().is_empty());

        let h = CliffordTableau::from_gates(1, &[Gate::H(0)]).unwrap();
        assert_eq!(h.conjugate_pauli(&PauliString::parse("X").unwrap()).unwrap(), PauliString::parse("Z").unwrap());
        assert_eq!(h.conjugate_pauli(&PauliString::parse("Z").unwrap()).unwrap(), PauliString::parse("X").unwrap());
        let hg = h.to_gates().unwrap();
        assert_eq!(CliffordTableau::from_gates(1, &hg).unwrap(), h);

        let s = CliffordTableau::from_gates(1, &[Gate::S(0)]).unwrap();
        let sx = s.conjugate_pauli(&PauliString::parse("X").unwrap()).unwrap();
        assert_eq!(sx, PauliString::parse("Y").unwrap());
        assert_eq!((sx.x_bits(), sx.z_bits(), sx.phase()), (1, 1, 1));
    }

    #[test]
    fn s_on_x_matches_matrix_conjugation() {
        // Independent oracle: S X S† computed with 2×2 matrices.
        let s = crate::state::phase_s();
        let sm: Vec<C64> = s.iter().flatten().copied().collect();
        let xm = PauliString::parse("X").unwrap().matrix();
        let conj = matmul(&matmul(&sm, &xm, 2), &dagger(&sm, 2), 2);
        let t = CliffordTableau::from_gates(1, &[Gate::S(0)]).unwrap();
        let image = t.conjugate_pauli(&PauliString::parse("X").unwrap()).unwrap();
        assert!(max_diff(&image.matrix(), &conj) < 1e-12);
    }

    #[test]
    fn conjugation_matches_unitary_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let t = sample_uniform_clifford(3, &mut rng).unwrap();
            let u = t.unitary().unwrap();
            let ud = dagger(&u, 8);
            for label in ["XII", "IZI", "IIY", "-XZY", "iZZX"] {
                let p = PauliString::parse(label).unwrap();
                let want = matmul(&matmul(&u, &p.matrix(), 8), &ud, 8);
                let got = t.conjugate_pauli(&p).unwrap().matrix();
                assert!(max_diff(&want, &got) < 1e-10, "{label}");
            }
        }
    }

    #[test]
    fn conjugation_is_a_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let t = sample_uniform_clifford(4, &mut rng).unwrap();
        let ps: Vec<PauliString> =
            ["XYZI", "iZZXY", "-IIYX", "YXXZ"].iter().map(|l| PauliString::parse(l).unwrap()).collect();
        for a in &ps {
            for b in &ps {
                let lhs = t.conjugate_pauli(&a.mul(b).unwrap()).unwrap();
                let rhs = t.conjugate_pauli(a).unwrap().mul(&t.conjugate_pauli(b).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        assert!(t.conjugate_pauli(&PauliString::identity(3)).is_err());
    }

    #[test]
    fn synthesis_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for n in 1..=6 {
            for _ in 0..50 {
                let t = sample_uniform_clifford(n, &mut rng).unwrap();
                let gates = t.to_gates().unwrap();
                assert_eq!(CliffordTableau::from_gates(n, &gates).unwrap(), t);
                assert!(gates.len() <= n * (9 * n + 20));
            }
        }
    }

    #[test]
    fn invalid_tableau_rejected() {
        let mut t = CliffordTableau::identity(2);
        t.rows[0] = PauliString::parse("Z").map(|_| PauliString::z_on(2, 0)).unwrap();
        assert!(matches!(t.to_gates(), Err(Error::InvalidTableau(_))));
        let bad = CliffordTableau::from_images(
            vec![PauliString::parse("XI").unwrap(), PauliString::parse("IX").unwrap()],
            vec![PauliString::parse("ZI").unwrap(), PauliString::parse("iZZ").unwrap()],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn sampled_tableaus_are_symplectic() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..10_000 {
            assert!(sample_uniform_clifford(5, &mut rng).unwrap().is_valid());
        }
    }

    #[test]
    fn enumeration_sizes() {
        let one = enumerate_cliffords(1).unwrap();
        assert_eq!(one.len(), 24);
        let two = enumerate_cliffords(2).unwrap();
        assert_eq!(two.len(), 11520);
        let distinct: std::collections::HashSet<_> = two.iter().collect();
        assert_eq!(distinct.len(), 11520);
        assert!(two.iter().all(|t| t.is_valid()));
        assert!(enumerate_cliffords(3).is_err());
    }
}
