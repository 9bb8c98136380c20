use std::f64::consts::FRAC_PI_2;

use rmdc::analytics::{
    clifford_stats, dephasing_average_purity, dephasing_fluctuation_pi2, fluctuation_surface, haar_stats,
    rmdc_fluctuation, rmdc_mean_expansion,
};
use rmdc::clifford::enumerate_cliffords;
use rmdc::experiments::{cell_seed, estimate, EstimateRecord, Protocol, ProtocolConfig};
use rmdc::state::{Bipartition, PureState};
use rmdc::validation::{self, Level};

use crate::cli::{BaselineRun, Run, SurfaceRun, SweepRun, ValidateRun};
use crate::error::CliError;
use crate::output::{
    manifest_path, num, opt_num, RunManifest, Table, BASELINE_COLUMNS, CSV_SCHEMA_VERSION, SURFACE_COLUMNS,
    SWEEP_COLUMNS,
};

pub fn execute(run: &Run) -> Result<(), CliError> {
    match run {
        Run::Baseline(r) => baseline(run, r),
        Run::Rmdc(r) => sweep(run, r, Protocol::OneShot),
        Run::Dephase(r) => sweep(run, r, Protocol::Dephasing),
        Run::Surface(r) => surface(run, r),
        Run::Validate(r) => validate(r),
    }
}

/// Subsystem A as the leading qubits of a register of `n` qubits.
fn cut_qubits(n: usize, d_a: u64) -> Result<Vec<usize>, CliError> {
    if !d_a.is_power_of_two() || d_a < 2 || d_a.trailing_zeros() as usize >= n {
        return Err(CliError::Usage(format!("d_A = {d_a} must be a power of two with 2 <= d_A < 2^n = 2^{n}")));
    }
    Ok((0..d_a.trailing_zeros() as usize).collect())
}

/// Writes the manifest (when there is an output file), runs `body`, then
/// stamps the manifest as finished.
fn with_manifest<T>(
    run: &Run,
    master_seed: Option<u64>,
    hashes: Vec<String>,
    body: impl FnOnce() -> Result<T, CliError>,
) -> Result<T, CliError> {
    let path = run.out().map(manifest_path);
    let mut manifest = RunManifest::new(run, master_seed, hashes);
    if let Some(p) = &path {
        manifest.write(p)?;
    }
    let value = body()?;
    if let Some(p) = &path {
        manifest.finish(p)?;
    }
    Ok(value)
}

fn baseline_config(r: &BaselineRun) -> Result<ProtocolConfig, CliError> {
    let mut cfg = ProtocolConfig::new(r.n, 0, 0.0, Protocol::OneShot, r.samples, cell_seed(r.seed, 0))
        .with_cut(cut_qubits(r.n, r.d_a)?);
    cfg.qubit_cap = r.qubit_cap;
    cfg.validate()?;
    Ok(cfg)
}

fn exact_baseline() -> Result<(f64, f64, usize), CliError> {
    let cut = Bipartition::balanced(2)?;
    let purities = enumerate_cliffords(2)?
        .iter()
        .map(|c| {
            let u = c.unitary()?;
            PureState::from_amplitudes((0..4).map(|r| u[r * 4]).collect())?.purity(&cut)
        })
        .collect::<Result<Vec<f64>, _>>()?;
    let m = purities.len() as f64;
    let mean = purities.iter().sum::<f64>() / m;
    let var = purities.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / m;
    Ok((mean, var, purities.len()))
}

fn baseline(run: &Run, r: &BaselineRun) -> Result<(), CliError> {
    let d = 1u64 << r.n;
    if r.exact && r.n != 2 {
        return Err(CliError::Usage("exact enumeration is available for n = 2 only".into()));
    }
    let cfg = baseline_config(r)?;
    let haar = haar_stats(d, r.d_a)?;
    let cl = clifford_stats(d, r.d_a)?;
    let hash = if r.exact { "enumeration".to_string() } else { cfg.hash() };
    let seed = (!r.exact).then_some(r.seed);
    let (passed, report) = with_manifest(run, seed, vec![hash.clone()], || {
        let (mean, mean_se, var, var_se, samples, mean_ok, var_ok) = if r.exact {
            let (mean, var, count) = exact_baseline()?;
            let ok = |a: f64, b: f64| (a - b).abs() <= 1e-12;
            (mean, 0.0, var, 0.0, count, ok(mean, cl.mean), ok(var, cl.variance))
        } else {
            let e = estimate(&cfg)?;
            let mean_ok = (e.mean - haar.mean).abs() <= 3.0 * e.std_error_mean;
            let var_ok = (e.variance - cl.variance).abs() <= 3.0 * e.std_error_variance;
            (e.mean, e.std_error_mean, e.variance, e.std_error_variance, e.samples, mean_ok, var_ok)
        };
        let mut table = Table::create(r.out.as_deref(), &BASELINE_COLUMNS)?;
        table.row(&[
            CSV_SCHEMA_VERSION.to_string(),
            hash.clone(),
            r.n.to_string(),
            r.d_a.to_string(),
            samples.to_string(),
            num(mean),
            num(mean_se),
            num(var),
            num(var_se),
            num(haar.mean),
            num(haar.variance),
            num(cl.mean),
            num(cl.variance),
            mean_ok.to_string(),
            var_ok.to_string(),
        ])?;
        let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
        let report = format!(
            "baseline n={} d_A={} ({}): mean {} vs {} {}; variance {} vs Clifford {} {} (Haar variance {})",
            r.n,
            r.d_a,
            if r.exact { "exact enumeration".to_string() } else { format!("{samples} samples, 3 SE gate") },
            num(mean),
            num(haar.mean),
            verdict(mean_ok),
            num(var),
            num(cl.variance),
            verdict(var_ok),
            num(haar.variance)
        );
        Ok((mean_ok && var_ok, report))
    })?;
    eprintln!("{report}");
    if passed {
        Ok(())
    } else {
        Err(CliError::Validation(report))
    }
}

fn sweep_configs(r: &SweepRun, protocol: Protocol) -> Result<Vec<ProtocolConfig>, CliError> {
    if r.ks.is_empty() {
        return Err(CliError::Usage("the k list is empty".into()));
    }
    let cut = cut_qubits(r.n, r.d_a)?;
    r.ks.iter()
        .map(|&k| {
            let mut cfg = ProtocolConfig::new(r.n, k, r.theta, protocol, r.samples, cell_seed(r.seed, k as u64))
                .with_cut(cut.clone())
                .with_qubit_policy(r.qubit_policy)
                .with_outcome_policy(r.outcome_policy);
            cfg.qubit_cap = r.qubit_cap;
            cfg.validate()?;
            Ok(cfg)
        })
        .collect()
}

fn analytic(r: &SweepRun, k: u32, protocol: Protocol) -> (Option<f64>, Option<f64>) {
    let d = 1u64 << r.n;
    match protocol {
        Protocol::OneShot => {
            (rmdc_mean_expansion(d, r.d_a, k, r.theta).ok(), rmdc_fluctuation(d, r.d_a, k, r.theta).ok())
        }
        Protocol::Dephasing => {
            if r.d_a * r.d_a != d {
                return (None, None);
            }
            let var = if (r.theta - FRAC_PI_2).abs() < 1e-12 { dephasing_fluctuation_pi2(d, k).ok() } else { None };
            (dephasing_average_purity(d, k).ok(), var)
        }
    }
}

fn sweep_row(r: &SweepRun, cfg: &ProtocolConfig, e: &EstimateRecord, protocol: Protocol) -> Vec<String> {
    let (mean, var) = analytic(r, cfg.k, protocol);
    vec![
        CSV_SCHEMA_VERSION.to_string(),
        e.config_hash.clone(),
        cfg.k.to_string(),
        num(cfg.theta),
        num(e.mean),
        num(e.std_error_mean),
        num(e.variance),
        num(e.std_error_variance),
        opt_num(mean),
        opt_num(var),
        e.resamples.to_string(),
    ]
}

fn sweep(run: &Run, r: &SweepRun, protocol: Protocol) -> Result<(), CliError> {
    let configs = sweep_configs(r, protocol)?;
    let hashes = configs.iter().map(ProtocolConfig::hash).collect();
    with_manifest(run, Some(r.seed), hashes, || {
        let mut table = Table::create(r.out.as_deref(), &SWEEP_COLUMNS)?;
        for cfg in &configs {
            let e = estimate(cfg)?;
            table.row(&sweep_row(r, cfg, &e, protocol))?;
        }
        Ok(())
    })
}

fn surface(run: &Run, r: &SurfaceRun) -> Result<(), CliError> {
    let grid = fluctuation_surface(r.d, r.theta_steps, r.k_max)?;
    with_manifest(run, None, Vec::new(), || {
        let mut table = Table::create(r.out.as_deref(), &SURFACE_COLUMNS)?;
        for p in &grid {
            table.row(&[CSV_SCHEMA_VERSION.to_string(), num(p.theta), p.k.to_string(), num(p.log10_delta())])?;
        }
        Ok(())
    })
}

fn validate(r: &ValidateRun) -> Result<(), CliError> {
    let level = match r.level.as_str() {
        "fast" => Level::Fast,
        "full" => Level::Full,
        other => return Err(CliError::Usage(format!("level must be `fast` or `full`, got `{other}`"))),
    };
    let outcomes = validation::run(level, r.seed);
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed: Vec<String> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id.to_string()).collect();
    println!("{}/{} checks passed", outcomes.len() - failed.len(), outcomes.len());
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(format!("criteria {} failed", failed.join(", "))))
    }
}
