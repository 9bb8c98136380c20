//! Traces of permutation operators and of the Clifford commutant element
//! `Q = d⁻² Σ_P P^{⊗4}`, in closed form and as explicit matrices.
//!
//! Explicit operators act on `(C^d)^{⊗t}` with copy `k` stored in base-`d`
//! digit `k` of the row/column index (copy 0 least significant).

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::characters::character_table;
use super::perm::{group, Permutation};
use crate::error::{Error, Result};

/// Sector of the 4-copy commutant: the range of `Q` or of `Q⊥ = 1 − Q`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Sector {
    Plus,
    Perp,
}

pub(crate) fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

pub(crate) fn ratio(v: &BigRational) -> f64 {
    v.to_f64().expect("finite rational")
}

fn check_qubit_dim(d: u64) -> Result<()> {
    if d < 2 || !d.is_power_of_two() {
        return Err(Error::InvalidInput(format!("Q is defined on qubit registers; d = {d} is not a power of 2")));
    }
    Ok(())
}

/// `tr T_ρ = d^{#cycles(ρ)}`.
pub fn trace_permutation(rho: &Permutation, d: u64) -> f64 {
    (d as f64).powi(rho.num_cycles() as i32)
}

pub fn trace_permutation_exact(rho: &Permutation, d: u64) -> BigInt {
    big(d).pow(rho.num_cycles())
}

/// `tr(Q T_π)` for `π ∈ S_4`: every Pauli other than the identity contributes
/// `d^{#cycles}` exactly when all cycles of `π` have even length, so
/// `tr(Q T_π) = d^{#cycles − 2} (1 + (d² − 1)·[all cycles even])`.
pub fn q_trace_exact(pi: &Permutation, d: u64) -> Result<BigRational> {
    check_qubit_dim(d)?;
    if pi.t() != 4 {
        return Err(Error::InvalidInput("Q lives on four copies".into()));
    }
    let cyc = pi.num_cycles() as i32;
    let all_even = pi.cycle_type().iter().all(|l| l % 2 == 0);
    let dd = BigRational::from_integer(big(d));
    let mut factor = BigRational::one();
    if all_even {
        factor += &dd * &dd - BigRational::one();
    }
    let power =
        if cyc >= 2 { BigRational::from_integer(big(d).pow((cyc - 2) as u32)) } else { BigRational::one() / &dd };
    Ok(power * factor)
}

pub fn q_trace(pi: &Permutation, d: u64) -> Result<f64> {
    q_trace_exact(pi, d).map(|v| ratio(&v))
}

/// `tr(T_ρ Q T_σ)` (plus) or `tr(T_ρ Q⊥ T_σ)` (perp).
pub fn q_trace_with_permutation(rho: &Permutation, sigma: &Permutation, d: u64, sector: Sector) -> Result<f64> {
    let prod = sigma.compose(rho);
    let plus = q_trace_exact(&prod, d)?;
    let v = match sector {
        Sector::Plus => plus,
        Sector::Perp => BigRational::from_integer(trace_permutation_exact(&prod, d)) - plus,
    };
    Ok(ratio(&v))
}

/// Trace of the isotypic projector `Π_λ = (d_λ/t!) Σ_π χ^λ(π) T_π` for each irrep of `S_t`.
pub fn irrep_dimensions(t: usize, d: u64) -> Result<Vec<BigRational>> {
    let g = group(t)?;
    let table = character_table(t)?;
    let order = BigInt::from(g.order());
    Ok((0..table.irreps.len())
        .map(|l| {
            let s: BigInt =
                g.elements().iter().map(|p| BigInt::from(table.character(l, p)) * trace_permutation_exact(p, d)).sum();
            BigRational::new(BigInt::from(table.dims()[l]) * s, order.clone())
        })
        .collect())
}

/// `(tr(QΠ_λ), tr(Q⊥Π_λ))` for each irrep of `S_4`.
pub fn clifford_irrep_dimensions(d: u64) -> Result<(Vec<BigRational>, Vec<BigRational>)> {
    let g = group(4)?;
    let table = character_table(4)?;
    let full = irrep_dimensions(4, d)?;
    let mut plus = Vec::with_capacity(5);
    for l in 0..5 {
        let mut s = BigRational::zero();
        for p in g.elements() {
            s += q_trace_exact(p, d)? * BigRational::from_integer(BigInt::from(table.character(l, p)));
        }
        plus.push(s * BigRational::new(BigInt::from(table.dims()[l]), BigInt::from(24)));
    }
    let minus = full.iter().zip(&plus).map(|(f, p)| f - p).collect();
    Ok((plus, minus))
}

/// Traces of the symmetric projector `Π_4` against the operators entering the
/// purity moments, for a bipartition with dimensions `d_A`, `d_B`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pi4Traces {
    /// `tr Π_4`.
    pub d4: f64,
    /// `tr(QΠ_4)`.
    pub d_plus: f64,
    /// `tr(T^{(A)}_{(12)(34)} Π_4)`.
    pub d_pur: f64,
    /// `(1/24) Σ_ρ tr(T^{(A)}_{(12)} Q^{(A)} T^{(A)}_ρ) tr(Q^{(B)} T^{(B)}_ρ)`.
    pub d_plus_12: f64,
    /// `(1/24) Σ_ρ tr(T^{(A)}_{(12)} T^{(A)}_ρ) tr(T^{(B)}_ρ)`.
    pub d_4_12: f64,
}

pub fn pi4_traces(d_a: u64, d_b: u64) -> Result<Pi4Traces> {
    let g = group(4)?;
    let d = d_a.checked_mul(d_b).ok_or_else(|| Error::InvalidInput("subsystem dimensions overflow".into()))?;
    let swap12 = Permutation::from_cycles(4, &[&[1, 2]])?;
    let pur = Permutation::from_cycles(4, &[&[1, 2], &[3, 4]])?;
    let (mut d4, mut dp, mut dpur, mut dp12, mut d412) =
        (BigRational::zero(), BigRational::zero(), BigRational::zero(), BigRational::zero(), BigRational::zero());
    let int = |v: BigInt| BigRational::from_integer(v);
    for rho in g.elements() {
        d4 += int(trace_permutation_exact(rho, d));
        dp += q_trace_exact(rho, d)?;
        dpur += int(trace_permutation_exact(&pur.compose(rho), d_a) * trace_permutation_exact(rho, d_b));
        let s_rho = swap12.compose(rho);
        let qa = if d_a == 1 { BigRational::one() } else { q_trace_exact(&s_rho, d_a)? };
        let qb = if d_b == 1 { BigRational::one() } else { q_trace_exact(rho, d_b)? };
        dp12 += qa * qb;
        d412 += int(trace_permutation_exact(&s_rho, d_a) * trace_permutation_exact(rho, d_b));
    }
    let n = BigRational::from_integer(BigInt::from(24));
    Ok(Pi4Traces {
        d4: ratio(&(d4 / &n)),
        d_plus: ratio(&(dp / &n)),
        d_pur: ratio(&(dpur / &n)),
        d_plus_12: ratio(&(dp12 / &n)),
        d_4_12: ratio(&(d412 / &n)),
    })
}

fn digits(mut x: usize, d: usize, t: usize) -> [usize; 4] {
    let mut out = [0; 4];
    for o in out.iter_mut().take(t) {
        *o = x % d;
        x /= d;
    }
    out
}

fn undigits(ds: &[usize], d: usize) -> usize {
    ds.iter().rev().fold(0, |acc, &v| acc * d + v)
}

/// Explicit `T_ρ` on `(C^d)^{⊗t}`.
pub fn permutation_operator(rho: &Permutation, d: usize) -> DMatrix<C64> {
    let t = rho.t();
    let dim = d.pow(t as u32);
    let mut m = DMatrix::zeros(dim, dim);
    for x in 0..dim {
        let i = digits(x, d, t);
        let mut j = [0usize; 4];
        for k in 0..t {
            j[rho.apply(k)] = i[k];
        }
        m[(undigits(&j[..t], d), x)] = C64::new(1.0, 0.0);
    }
    m
}

/// Explicit `T^{(A)}_{ρ_A} ⊗ T^{(B)}_{ρ_B}` on `t` copies of `C^{d_A} ⊗ C^{d_B}`;
/// within one copy the index is `a + d_A·b`.
pub fn bipartite_permutation_operator(
    rho_a: &Permutation,
    rho_b: &Permutation,
    d_a: usize,
    d_b: usize,
) -> DMatrix<C64> {
    let t = rho_a.t();
    assert_eq!(t, rho_b.t());
    let d = d_a * d_b;
    let dim = d.pow(t as u32);
    let mut m = DMatrix::zeros(dim, dim);
    for x in 0..dim {
        let i = digits(x, d, t);
        let mut j = [0usize; 4];
        for k in 0..t {
            let (a, b) = (i[k] % d_a, i[k] / d_a);
            j[rho_a.apply(k)] += a;
            j[rho_b.apply(k)] += d_a * b;
        }
        m[(undigits(&j[..t], d), x)] = C64::new(1.0, 0.0);
    }
    m
}

/// Explicit `Q = d⁻² Σ_P P^{⊗4}` for `n` qubits, summing the `d²` unsigned
/// strings `X^x Z^z`.
pub fn q_operator(n: usize) -> Result<DMatrix<C64>> {
    if n == 0 || n > 2 {
        return Err(Error::InvalidInput(format!("explicit Q is built for 1 or 2 qubits, got {n}")));
    }
    let d = 1usize << n;
    let dim = d.pow(4);
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    let norm = 1.0 / (d * d) as f64;
    for x in 0..d {
        for z in 0..d {
            for col in 0..dim {
                let i = digits(col, d, 4);
                let mut sign = 1.0;
                let mut j = [0usize; 4];
                for k in 0..4 {
                    if (z & i[k]).count_ones() % 2 == 1 {
                        sign = -sign;
                    }
                    j[k] = i[k] ^ x;
                }
                m[(undigits(&j, d), col)] += C64::new(sign * norm, 0.0);
            }
        }
    }
    Ok(m)
}

/// Explicit symmetric projector `Π_t = (1/t!) Σ_π T_π`.
pub fn symmetric_projector(t: usize, d: usize) -> Result<DMatrix<C64>> {
    let g = group(t)?;
    let dim = d.pow(t as u32);
    let mut m = DMatrix::zeros(dim, dim);
    for p in g.elements() {
        m += permutation_operator(p, d);
    }
    Ok(m / C64::new(g.order() as f64, 0.0))
}

/// Largest entry modulus.
pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn trace(m: &DMatrix<C64>) -> C64 {
    m.diagonal().iter().sum()
}

/// `tr(A B)` without forming the product.
pub fn trace_product(a: &DMatrix<C64>, b: &DMatrix<C64>) -> C64 {
    let n = a.nrows();
    let mut s = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            s += a[(i, k)] * b[(k, i)];
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::perm::s4;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9 * (1.0 + b.abs())
    }

    #[test]
    fn permutation_traces() {
        let e4 = Permutation::identity(4);
        assert_eq!(trace_permutation(&e4, 4), 256.0);
        let swap = Permutation::from_cycles(2, &[&[1, 2]]).unwrap();
        assert_eq!(trace_permutation(&swap, 4), 4.0);
        let c4 = Permutation::from_cycles(4, &[&[1, 2, 3, 4]]).unwrap();
        assert_eq!(trace_permutation(&c4, 2), 2.0);
        assert!(close(trace(&permutation_operator(&c4, 2)).re, 2.0));
    }

    #[test]
    fn permutation_operators_multiply_like_the_group() {
        let g = s4();
        let ops: Vec<_> = g.elements().iter().map(|p| permutation_operator(p, 2)).collect();
        for i in 0..24 {
            for j in 0..24 {
                let prod = &ops[i] * &ops[j];
                assert_eq!(prod, ops[g.mul(i, j)]);
            }
        }
    }

    #[test]
    fn q_traces_match_explicit_matrices() {
        for n in 1..=2 {
            let d = 1usize << n;
            let q = q_operator(n).unwrap();
            for p in s4().elements() {
                let explicit = trace_product(&q, &permutation_operator(p, d)).re;
                assert!(close(explicit, q_trace(p, d as u64).unwrap()), "{p} at d={d}");
            }
        }
        assert!(q_trace(&Permutation::identity(4), 6).is_err());
    }

    #[test]
    fn q_projector_identities() {
        for n in 1..=2 {
            let d = 1usize << n;
            let q = q_operator(n).unwrap();
            assert!(max_abs(&(&q * &q - &q)) < 1e-12);
            let t1234 = permutation_operator(&Permutation::from_cycles(4, &[&[1, 2], &[3, 4]]).unwrap(), d);
            assert!(max_abs(&(&t1234 * &q - &q)) < 1e-12);
            for p in s4().elements() {
                let t = permutation_operator(p, d);
                assert!(max_abs(&(&t * &q - &q * &t)) < 1e-12);
            }
        }
    }

    #[test]
    fn single_qubit_q_building_block() {
        // tr(P̃^{⊗4} Q) for a projector of the θ basis.
        let q = q_operator(1).unwrap();
        for &theta in &[0.0, 0.3, std::f64::consts::FRAC_PI_4, 1.2] {
            let basis = crate::state::ThetaBasis::new(theta, 0).unwrap();
            let p = basis.projector(crate::state::Outcome::One);
            let pm = DMatrix::from_fn(2, 2, |i, j| p[i][j]);
            let p4 = pm.kronecker(&pm).kronecker(&pm).kronecker(&pm);
            let v = trace_product(&p4, &q).re;
            assert!(close(v, (7.0 + (4.0 * theta).cos()) / 16.0));
        }
    }

    #[test]
    fn sector_traces() {
        let e = Permutation::identity(4);
        let plus = q_trace_with_permutation(&e, &e, 4, Sector::Plus).unwrap();
        let perp = q_trace_with_permutation(&e, &e, 4, Sector::Perp).unwrap();
        assert_eq!(plus, 16.0);
        assert_eq!(plus + perp, 256.0);
        let t = Permutation::from_cycles(4, &[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(q_trace(&t, 8).unwrap(), q_trace(&e, 8).unwrap());
    }

    #[test]
    fn irrep_dimension_polynomials() {
        for d in [2u64, 4, 8, 16] {
            let df = d as f64;
            let dims = irrep_dimensions(4, d).unwrap();
            let total: f64 = dims.iter().map(ratio).sum();
            assert!(close(total, df.powi(4)));
            // The symmetric irrep has trace d(d+1)(d+2)(d+3)/24.
            assert!(close(ratio(&dims[0]), df * (df + 1.0) * (df + 2.0) * (df + 3.0) / 24.0));
            let (plus, minus) = clifford_irrep_dimensions(d).unwrap();
            assert!(close(ratio(&plus[0]), (df + 1.0) * (df + 2.0) / 6.0));
            assert!(close(ratio(&minus[0]), (df + 1.0) * (df + 2.0) * (df + 4.0) * (df - 1.0) / 24.0));
            assert!(close(ratio(&plus[4]), (df - 1.0) * (df - 2.0) / 6.0));
            assert!(close(ratio(&minus[4]), (df - 1.0) * (df - 2.0) * (df - 4.0) * (df + 1.0) / 24.0));
            assert!(plus.iter().chain(&minus).all(|v| *v >= BigRational::zero()));
        }
    }

    #[test]
    fn pi4_traces_match_explicit_operators() {
        let t = pi4_traces(2, 2).unwrap();
        assert!(close(t.d4, 35.0));
        let pi4 = symmetric_projector(4, 4).unwrap();
        let e = Permutation::identity(4);
        let pur = Permutation::from_cycles(4, &[&[1, 2], &[3, 4]]).unwrap();
        let ta = bipartite_permutation_operator(&pur, &e, 2, 2);
        assert!(close(t.d_pur, trace_product(&ta, &pi4).re));
        let q = q_operator(2).unwrap();
        assert!(close(t.d_plus, trace_product(&q, &pi4).re));

        // Purity times norm: copies (1,2) carry S_A, copies (3,4) the full swap.
        let mixed = bipartite_permutation_operator(&pur, &Permutation::from_cycles(4, &[&[3, 4]]).unwrap(), 2, 2);
        let qpi = &q * &pi4;
        assert!(close(t.d_plus_12, trace_product(&mixed, &qpi).re));
        assert!(close(t.d_4_12, trace_product(&mixed, &pi4).re));

        let small = pi4_traces(1, 2).unwrap();
        let q1 = q_operator(1).unwrap();
        assert!(close(small.d_plus, trace_product(&q1, &symmetric_projector(4, 2).unwrap()).re));
        assert!(close(small.d_plus, 2.0));
    }

    #[test]
    fn d_pur_polynomial() {
        // (d_A²d_B⁴ + d_A⁴d_B² + 4d_A³d_B + 4d_Ad_B³ + 2d_A³d_B³ + 10d_A²d_B² + 2d_Ad_B)/24
        for (a, b) in [(2u64, 2u64), (2, 4), (4, 8), (8, 8), (1, 16)] {
            let (x, y) = (a as f64, b as f64);
            let poly = (x * x * y.powi(4)
                + x.powi(4) * y * y
                + 4.0 * x.powi(3) * y
                + 4.0 * x * y.powi(3)
                + 2.0 * x.powi(3) * y.powi(3)
                + 10.0 * x * x * y * y
                + 2.0 * x * y)
                / 24.0;
            assert!(close(pi4_traces(a, b).unwrap().d_pur, poly), "{a},{b}");
        }
    }
}
