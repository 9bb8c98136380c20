use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// A permutation of `t ≤ 4` tensor slots in one-line notation (`map[i] = π(i)`).
///
/// Composition follows `(ρσ)(i) = ρ(σ(i))`, and the operator `T_π` moves the
/// factor in slot `k` to slot `π(k)`, so that `T_ρ T_σ = T_{ρσ}`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    t: u8,
    map: [u8; 4],
}

impl Permutation {
    pub fn new(map: &[usize]) -> Result<Self> {
        let t = map.len();
        if !(1..=4).contains(&t) {
            return Err(Error::InvalidInput(format!("permutations of {t} slots are not supported")));
        }
        let mut seen = [false; 4];
        let mut out = [0u8; 4];
        for (i, &m) in map.iter().enumerate() {
            if m >= t || seen[m] {
                return Err(Error::InvalidInput(format!("{map:?} is not a bijection")));
            }
            seen[m] = true;
            out[i] = m as u8;
        }
        Ok(Self { t: t as u8, map: out })
    }

    /// Builds a permutation from disjoint cycles written with 1-based slots,
    /// e.g. `from_cycles(4, &[&[1, 2], &[3, 4]])`.
    pub fn from_cycles(t: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut map: Vec<usize> = (0..t).collect();
        let mut used = vec![false; t];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a == 0 || a > t || used[a - 1] {
                    return Err(Error::InvalidInput(format!("bad cycle {cycle:?}")));
                }
                used[a - 1] = true;
                map[a - 1] = cycle[(k + 1) % cycle.len()] - 1;
            }
        }
        Self::new(&map)
    }

    pub fn identity(t: usize) -> Self {
        let mut map = [0u8; 4];
        for (i, m) in map.iter_mut().enumerate().take(t) {
            *m = i as u8;
        }
        Self { t: t as u8, map }
    }

    pub fn t(&self) -> usize {
        self.t as usize
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i] as usize
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.map[..self.t()].iter().map(|&m| m as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.t()).all(|i| self.apply(i) == i)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.t, other.t, "composing permutations of different orders");
        let mut map = [0u8; 4];
        for (i, m) in map.iter_mut().enumerate().take(self.t()) {
            *m = self.map[other.map[i] as usize];
        }
        Permutation { t: self.t, map }
    }

    pub fn inverse(&self) -> Permutation {
        let mut map = [0u8; 4];
        for i in 0..self.t() {
            map[self.map[i] as usize] = i as u8;
        }
        Permutation { t: self.t, map }
    }

    /// Cycle lengths in non-increasing order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut seen = [false; 4];
        let mut lens = Vec::new();
        for start in 0..self.t() {
            if seen[start] {
                continue;
            }
            let mut j = start;
            let mut len = 0;
            while !seen[j] {
                seen[j] = true;
                j = self.apply(j);
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    pub fn num_cycles(&self) -> u32 {
        self.cycle_type().len() as u32
    }

    /// Rank in the lexicographic order of one-line notations.
    pub fn index(&self) -> usize {
        let t = self.t();
        let mut rank = 0;
        let mut fact = (1..t).product::<usize>().max(1);
        for i in 0..t {
            let smaller = (i + 1..t).filter(|&j| self.map[j] < self.map[i]).count();
            rank += smaller * fact;
            fact = fact.checked_div(t - 1 - i).unwrap_or(fact);
        }
        rank
    }

    /// All of `S_t` in lexicographic order.
    pub fn all(t: usize) -> Vec<Permutation> {
        let mut cur: Vec<usize> = (0..t).collect();
        let mut out = vec![Permutation::new(&cur).expect("identity")];
        // Standard next-permutation walk.
        while let Some(i) = (0..t.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) {
            let j = (i + 1..t).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
            cur.swap(i, j);
            cur[i + 1..].reverse();
            out.push(Permutation::new(&cur).expect("bijection"));
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "e");
        }
        let mut seen = [false; 4];
        for start in 0..self.t() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            write!(f, "(")?;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                write!(f, "{}", j + 1)?;
                j = self.apply(j);
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// `S_t` with a precomputed multiplication table, shared process-wide.
#[derive(Debug)]
pub struct SymmetricGroup {
    t: usize,
    elements: Vec<Permutation>,
    product: Vec<usize>,
    inverse: Vec<usize>,
}

impl SymmetricGroup {
    fn build(t: usize) -> Self {
        let elements = Permutation::all(t);
        let n = elements.len();
        let mut product = vec![0; n * n];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                product[i * n + j] = a.compose(b).index();
            }
        }
        let inverse = elements.iter().map(|p| p.inverse().index()).collect();
        Self { t, elements, product, inverse }
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> Permutation {
        self.elements[i]
    }

    /// Index of `ρσ` given the indices of `ρ` and `σ`.
    pub fn mul(&self, rho: usize, sigma: usize) -> usize {
        self.product[rho * self.order() + sigma]
    }

    pub fn inv(&self, rho: usize) -> usize {
        self.inverse[rho]
    }
}

pub fn s2() -> &'static SymmetricGroup {
    static G: OnceLock<SymmetricGroup> = OnceLock::new();
    G.get_or_init(|| SymmetricGroup::build(2))
}

pub fn s4() -> &'static SymmetricGroup {
    static G: OnceLock<SymmetricGroup> = OnceLock::new();
    G.get_or_init(|| SymmetricGroup::build(4))
}

/// `S_t` for `t ∈ {2, 4}`.
pub fn group(t: usize) -> Result<&'static SymmetricGroup> {
    match t {
        2 => Ok(s2()),
        4 => Ok(s4()),
        _ => Err(Error::InvalidInput(format!("only S_2 and S_4 are supported, got t = {t}"))),
    }
}
