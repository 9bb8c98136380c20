//! Monte Carlo protocols over sampled Clifford layers and their estimators.
//!
//! Every sample `i` draws from its own ChaCha8 stream `(master_seed, i)`, so
//! results do not depend on the number of worker threads or on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::clifford::sample_uniform_clifford;
use crate::error::{Error, Result};
use crate::state::{Bipartition, MixedState, Outcome, PureState, ThetaBasis};

/// Largest register simulated as a state vector.
pub const MAX_PURE_QUBITS: usize = 14;
/// Largest register simulated as a density matrix.
pub const MAX_MIXED_QUBITS: usize = 10;
/// Consecutive measure-zero draws tolerated before a sample fails.
pub const MAX_RESAMPLES: u32 = 10_000;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    OneShot,
    Dephasing,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QubitPolicy {
    Fixed(usize),
    UniformRandom,
}

/// How one-shot measurement outcomes are chosen.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomePolicy {
    Born,
    /// Always post-select the `(|0⟩ + e^{iθ}|1⟩)/√2` branch.
    ForcedFirst,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub n: usize,
    pub k: u32,
    pub theta: f64,
    /// Qubits of subsystem `A`; the rest form `B`.
    pub qubits_a: Vec<usize>,
    pub protocol: Protocol,
    pub qubit_policy: QubitPolicy,
    pub outcome_policy: OutcomePolicy,
    pub samples: usize,
    pub master_seed: u64,
    /// Overrides the default qubit cap of the protocol's simulator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qubit_cap: Option<usize>,
}

impl ProtocolConfig {
    /// Balanced cut `A = {0, …, ⌊n/2⌋−1}`, measurements on qubit 0, Born outcomes.
    pub fn new(n: usize, k: u32, theta: f64, protocol: Protocol, samples: usize, master_seed: u64) -> Self {
        Self {
            n,
            k,
            theta,
            qubits_a: (0..n / 2).collect(),
            protocol,
            qubit_policy: QubitPolicy::Fixed(0),
            outcome_policy: OutcomePolicy::Born,
            samples,
            master_seed,
            qubit_cap: None,
        }
    }

    pub fn with_cut(mut self, qubits_a: Vec<usize>) -> Self {
        self.qubits_a = qubits_a;
        self
    }

    pub fn with_qubit_policy(mut self, policy: QubitPolicy) -> Self {
        self.qubit_policy = policy;
        self
    }

    pub fn with_qubit_cap(mut self, cap: usize) -> Self {
        self.qubit_cap = Some(cap);
        self
    }

    /// The qubit cap in force for this configuration.
    pub fn cap(&self) -> usize {
        self.qubit_cap.unwrap_or(match self.protocol {
            Protocol::OneShot => MAX_PURE_QUBITS,
            Protocol::Dephasing => MAX_MIXED_QUBITS,
        })
    }

    pub fn with_outcome_policy(mut self, policy: OutcomePolicy) -> Self {
        self.outcome_policy = policy;
        self
    }

    pub fn bipartition(&self) -> Result<Bipartition> {
        Bipartition::new(self.n, self.qubits_a.clone())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidInput("n must be at least 1".into()));
        }
        let cap = self.cap();
        if self.n > cap {
            let what = match self.protocol {
                Protocol::OneShot => "state-vector simulation",
                Protocol::Dephasing => "density-matrix simulation",
            };
            return Err(Error::CapExceeded { what, n: self.n, cap });
        }
        if !self.theta.is_finite() || !(0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&self.theta) {
            return Err(Error::InvalidInput(format!("θ = {} is outside [0, π/2]", self.theta)));
        }
        if let QubitPolicy::Fixed(q) = self.qubit_policy {
            if q >= self.n {
                return Err(Error::QubitOutOfRange { qubit: q, n: self.n });
            }
        }
        if self.samples < 2 {
            return Err(Error::TooFewSamples(self.samples));
        }
        self.bipartition()?;
        Ok(())
    }

    /// SHA-256 of the canonical JSON form, as lowercase hex.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// One Monte Carlo draw.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Draw {
    pub purity: f64,
    /// Circuits discarded because a forced outcome had probability zero.
    pub resamples: u32,
}

fn measured_qubit<R: Rng + ?Sized>(cfg: &ProtocolConfig, rng: &mut R) -> usize {
    match cfg.qubit_policy {
        QubitPolicy::Fixed(q) => q,
        QubitPolicy::UniformRandom => rng.random_range(0..cfg.n),
    }
}

fn random_clifford_state<R: Rng + ?Sized>(state: &mut PureState, n: usize, rng: &mut R) -> Result<()> {
    let gates = sample_uniform_clifford(n, rng)?.to_gates()?;
    state.conjugate_by_circuit(&gates)
}

/// One draw of `Pur ψ_{k,A}` for the one-shot protocol starting from `|0⟩^{⊗n}`.
pub fn run_rmdc_sample<R: Rng + ?Sized>(cfg: &ProtocolConfig, cut: &Bipartition, rng: &mut R) -> Result<Draw> {
    if cfg.protocol != Protocol::OneShot {
        return Err(Error::InvalidInput("run_rmdc_sample needs the one-shot protocol".into()));
    }
    let mut resamples = 0;
    'circuit: loop {
        let mut state = PureState::zero(cfg.n);
        random_clifford_state(&mut state, cfg.n, rng)?;
        for _ in 0..cfg.k {
            let basis = ThetaBasis::new(cfg.theta, measured_qubit(cfg, rng))?;
            let next = match cfg.outcome_policy {
                OutcomePolicy::Born => state.born_sample_measure(&basis, rng).map(|(s, _)| s),
                OutcomePolicy::ForcedFirst => state.project_theta_normalized(&basis, Outcome::One).map(|(s, _)| s),
            };
            state = match next {
                Ok(s) => s,
                Err(Error::MeasureZero { .. }) => {
                    resamples += 1;
                    if resamples > MAX_RESAMPLES {
                        return Err(Error::Degenerate(format!("{resamples} consecutive measure-zero circuits")));
                    }
                    continue 'circuit;
                }
                Err(e) => return Err(e),
            };
            random_clifford_state(&mut state, cfg.n, rng)?;
        }
        return Ok(Draw { purity: state.purity(cut)?, resamples });
    }
}

/// One draw of the subsystem purity after `k` dephasing rounds.
pub fn run_dephasing_sample<R: Rng + ?Sized>(cfg: &ProtocolConfig, cut: &Bipartition, rng: &mut R) -> Result<Draw> {
    if cfg.protocol != Protocol::Dephasing {
        return Err(Error::InvalidInput("run_dephasing_sample needs the dephasing protocol".into()));
    }
    if cfg.n > cfg.cap() {
        return Err(Error::CapExceeded { what: "density-matrix simulation", n: cfg.n, cap: cfg.cap() });
    }
    let mut rho = MixedState::zero(cfg.n);
    rho.conjugate_by_circuit(&sample_uniform_clifford(cfg.n, rng)?.to_gates()?)?;
    for _ in 0..cfg.k {
        rho.dephase_qubit(&ThetaBasis::new(cfg.theta, measured_qubit(cfg, rng))?)?;
        rho.conjugate_by_circuit(&sample_uniform_clifford(cfg.n, rng)?.to_gates()?)?;
    }
    Ok(Draw { purity: rho.purity(cut)?, resamples: 0 })
}

/// The generator for sample `index` under `master_seed`.
pub fn sample_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// Seed of cell `index` in a sweep; SplitMix64 of `master_seed + index`.
pub fn cell_seed(master_seed: u64, index: u64) -> u64 {
    let mut z = master_seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Neumaier-compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// Mean, unbiased variance and their standard errors.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub variance: f64,
    pub std_error_mean: f64,
    /// Delete-1 jackknife; infinite with only two samples.
    pub std_error_variance: f64,
}

pub fn summarize(values: &[f64]) -> Result<Summary> {
    let n = values.len();
    if n < 2 {
        return Err(Error::TooFewSamples(n));
    }
    let nf = n as f64;
    let mean = compensated_sum(values.iter().copied()) / nf;
    let dev: Vec<f64> = values.iter().map(|v| v - mean).collect();
    let s1 = compensated_sum(dev.iter().copied());
    let s2 = compensated_sum(dev.iter().map(|v| v * v));
    let variance = ((s2 - s1 * s1 / nf) / (nf - 1.0)).max(0.0);
    let std_error_mean = (variance / nf).sqrt();
    let std_error_variance = if n < 3 {
        f64::INFINITY
    } else {
        let loo: Vec<f64> = dev
            .iter()
            .map(|x| {
                let (a, b) = (s1 - x, s2 - x * x);
                ((b - a * a / (nf - 1.0)) / (nf - 2.0)).max(0.0)
            })
            .collect();
        let loo_mean = compensated_sum(loo.iter().copied()) / nf;
        let spread = compensated_sum(loo.iter().map(|v| (v - loo_mean).powi(2)));
        ((nf - 1.0) / nf * spread).sqrt()
    };
    Ok(Summary { mean, variance, std_error_mean, std_error_variance })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub mean: f64,
    pub variance: f64,
    pub std_error_mean: f64,
    pub std_error_variance: f64,
    pub samples: usize,
    pub resamples: u64,
    pub config_hash: String,
    pub seed: u64,
}

impl EstimateRecord {
    /// Fraction of drawn circuits discarded on measure-zero branches.
    pub fn resample_rate(&self) -> f64 {
        self.resamples as f64 / (self.resamples as f64 + self.samples as f64)
    }
}

/// Runs `samples` independent draws of `sampler` in parallel, in index order.
pub fn collect_draws<F>(samples: usize, master_seed: u64, sampler: F) -> Result<Vec<Draw>>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Draw> + Sync,
{
    (0..samples as u64).into_par_iter().map(|i| sampler(&mut sample_rng(master_seed, i))).collect()
}

/// All draws for `cfg`.
pub fn run_draws(cfg: &ProtocolConfig) -> Result<Vec<Draw>> {
    cfg.validate()?;
    let cut = cfg.bipartition()?;
    collect_draws(cfg.samples, cfg.master_seed, |rng| match cfg.protocol {
        Protocol::OneShot => run_rmdc_sample(cfg, &cut, rng),
        Protocol::Dephasing => run_dephasing_sample(cfg, &cut, rng),
    })
}

/// Estimate from any sampler; `config_hash` tags the record.
pub fn estimate_with<F>(samples: usize, master_seed: u64, config_hash: String, sampler: F) -> Result<EstimateRecord>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Draw> + Sync,
{
    if samples < 2 {
        return Err(Error::TooFewSamples(samples));
    }
    let draws = collect_draws(samples, master_seed, sampler)?;
    record_from_draws(&draws, config_hash, master_seed)
}

fn record_from_draws(draws: &[Draw], config_hash: String, seed: u64) -> Result<EstimateRecord> {
    let values: Vec<f64> = draws.iter().map(|d| d.purity).collect();
    let s = summarize(&values)?;
    Ok(EstimateRecord {
        mean: s.mean,
        variance: s.variance,
        std_error_mean: s.std_error_mean,
        std_error_variance: s.std_error_variance,
        samples: values.len(),
        resamples: draws.iter().map(|d| d.resamples as u64).sum(),
        config_hash,
        seed,
    })
}

pub fn estimate(cfg: &ProtocolConfig) -> Result<EstimateRecord> {
    let draws = run_draws(cfg)?;
    record_from_draws(&draws, cfg.hash(), cfg.master_seed)
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub config: ProtocolConfig,
    pub result: std::result::Result<EstimateRecord, Error>,
}

/// Evaluates every cell; failures are kept per cell and do not stop the run.
pub fn sweep(cells: &[ProtocolConfig]) -> Vec<SweepRow> {
    cells.iter().map(|cfg| SweepRow { config: cfg.clone(), result: estimate(cfg) }).collect()
}

/// Cells `θ × k` sharing the other fields of `base`, each with its own seed.
pub fn grid(base: &ProtocolConfig, thetas: &[f64], ks: &[u32]) -> Vec<ProtocolConfig> {
    let mut out = Vec::with_capacity(thetas.len() * ks.len());
    for &theta in thetas {
        for &k in ks {
            let index = out.len() as u64;
            out.push(ProtocolConfig { theta, k, master_seed: cell_seed(base.master_seed, index), ..base.clone() });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_of_constants_and_bernoulli() {
        let s = summarize(&[0.3; 50]).unwrap();
        assert!(s.variance.abs() < 1e-30 && s.std_error_mean < 1e-15 && s.std_error_variance < 1e-15);
        let rec = estimate_with(20_000, 7, "bernoulli".into(), |rng| {
            Ok(Draw { purity: if rng.random::<bool>() { 1.0 } else { 0.0 }, resamples: 0 })
        })
        .unwrap();
        assert!((rec.variance - 0.25).abs() < 3.0 * rec.std_error_variance + 1e-4);
        assert!(rec.std_error_variance > 0.0 && rec.std_error_variance < 1e-3);
        assert!(summarize(&[1.0]).is_err());
    }

    #[test]
    fn jackknife_matches_direct_deletion() {
        let v = [0.1, 0.7, 0.2, 0.9, 0.4, 0.35, 0.8];
        let s = summarize(&v).unwrap();
        let var = |xs: &[f64]| {
            let m = xs.iter().sum::<f64>() / xs.len() as f64;
            xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() as f64 - 1.0)
        };
        let loo: Vec<f64> = (0..v.len())
            .map(|i| var(&v.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| *x).collect::<Vec<_>>()))
            .collect();
        let m = loo.iter().sum::<f64>() / loo.len() as f64;
        let n = v.len() as f64;
        let se = ((n - 1.0) / n * loo.iter().map(|x| (x - m).powi(2)).sum::<f64>()).sqrt();
        assert!((s.variance - var(&v)).abs() < 1e-15);
        assert!((s.std_error_variance - se).abs() < 1e-14);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let v = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(v), 2.0);
    }

    #[test]
    fn validation() {
        let cfg = ProtocolConfig::new(4, 2, 0.3, Protocol::OneShot, 1, 0);
        assert!(matches!(cfg.validate(), Err(Error::TooFewSamples(1))));
        let cfg = ProtocolConfig::new(11, 2, 0.3, Protocol::Dephasing, 10, 0);
        assert!(matches!(cfg.validate(), Err(Error::CapExceeded { cap: 10, .. })));
        assert!(cfg.clone().with_qubit_cap(11).validate().is_ok());
        let cfg = ProtocolConfig::new(6, 2, 0.3, Protocol::OneShot, 10, 0).with_qubit_cap(5);
        assert!(matches!(cfg.validate(), Err(Error::CapExceeded { cap: 5, .. })));
        let cfg = ProtocolConfig::new(4, 2, 2.0, Protocol::OneShot, 10, 0);
        assert!(cfg.validate().is_err());
        let cfg = ProtocolConfig::new(4, 2, 0.3, Protocol::OneShot, 10, 0).with_qubit_policy(QubitPolicy::Fixed(4));
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn deterministic_and_hash_sensitive() {
        let cfg = ProtocolConfig::new(3, 2, 0.6, Protocol::OneShot, 64, 11);
        let a = estimate(&cfg).unwrap();
        let b = estimate(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        let other = ProtocolConfig { master_seed: 12, ..cfg.clone() };
        assert_ne!(cfg.hash(), other.hash());
        assert_eq!(cfg.hash().len(), 64);
    }

    #[test]
    fn stabilizer_purities_at_n2() {
        let cfg = ProtocolConfig::new(2, 0, 0.0, Protocol::OneShot, 500, 3);
        for d in run_draws(&cfg).unwrap() {
            assert!((d.purity - 1.0).abs() < 1e-12 || (d.purity - 0.5).abs() < 1e-12, "{}", d.purity);
        }
    }

    #[test]
    fn dephasing_k0_matches_one_shot_k0() {
        let a = run_draws(&ProtocolConfig::new(3, 0, 0.4, Protocol::OneShot, 32, 5)).unwrap();
        let b = run_draws(&ProtocolConfig::new(3, 0, 0.4, Protocol::Dephasing, 32, 5)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x.purity - y.purity).abs() < 1e-12);
        }
    }

    #[test]
    fn sweep_keeps_failures_and_matches_estimate() {
        let base = ProtocolConfig::new(3, 1, 0.5, Protocol::OneShot, 16, 9);
        let rows = sweep(&[base.clone(), ProtocolConfig { samples: 1, ..base.clone() }]);
        assert_eq!(rows[0].result.as_ref().unwrap(), &estimate(&base).unwrap());
        assert!(rows[1].result.is_err());
        let g = grid(&base, &[0.1, 0.2], &[0, 1, 2]);
        assert_eq!(g.len(), 6);
        let seeds: std::collections::HashSet<u64> = g.iter().map(|c| c.master_seed).collect();
        assert_eq!(seeds.len(), 6);
    }
}
