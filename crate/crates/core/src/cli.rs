//! Experiment harness behind the command-line binary: CSV/JSON file formats,
//! seeded instance generation, Monte-Carlo sweeps with violation counting,
//! the adversarial-instance demo, and the bound-comparison table.
//!
//! File formats: matrices and vectors are headerless CSV of decimal floats
//! (one row per matrix row; vectors one value per line), printed with 17
//! significant digits so round trips are bit exact. Configs and summaries
//! are JSON. Exit codes: 0 success, 2 parse/config error, 3 dimension
//! mismatch, 4 domain error, 5 enumeration cap exceeded.

use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::guarantees::{self, CheckParams, Guarantee};
use crate::linalg::SupportSet;
use crate::omp;
use crate::rip;
use crate::sensing::{self, PerturbModel, PerturbedProblem, Scenario, DEFAULT_SUBSET_CAP};
use crate::signals::{self, DecayOptions, RatioMode, TailMode};
use crate::{counterexample, oracle};

/// Environment variable overriding the default subset-enumeration cap.
pub const CAP_ENV_VAR: &str = "OMP_PERTURB_CAP";

/// Resolves the enumeration cap: explicit flag beats the environment
/// variable, which beats [`DEFAULT_SUBSET_CAP`].
pub fn resolve_cap(flag: Option<usize>) -> usize {
    if let Some(cap) = flag {
        return cap;
    }
    if let Ok(s) = std::env::var(CAP_ENV_VAR) {
        if let Ok(v) = s.trim().parse::<usize>() {
            return v;
        }
    }
    DEFAULT_SUBSET_CAP
}

/// Signal family drawn per trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SignalSpec {
    Sparse,
    AlmostSparse { beta_target: f64, gamma_target: f64 },
    StrongDecaying { alpha: f64 },
}

/// One Monte-Carlo experiment description (JSON on disk).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub trials: u64,
    pub seed: u64,
    pub eps: f64,
    pub eps_b: f64,
    pub signal: SignalSpec,
    pub t0: f64,
    pub checker: Vec<Guarantee>,
    pub output_path: String,
}

impl ExperimentConfig {
    /// Cross-field validation; the message explains the rejection.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.m == 0 || self.n == 0 {
            return Err("m and n must be positive".into());
        }
        if self.m > self.n {
            return Err(format!("m = {} must not exceed n = {}", self.m, self.n));
        }
        if self.k == 0 || self.k > self.m {
            return Err(format!("k = {} must lie in 1..=m = {}", self.k, self.m));
        }
        if self.k + 1 > self.n {
            return Err("k + 1 exceeds n; order-(k+1) isometry constants are undefined".into());
        }
        if self.trials == 0 {
            return Err("trials must be at least 1".into());
        }
        if self.t0 <= 0.0 {
            return Err("t0 must be positive".into());
        }
        if !(0.0..1.0).contains(&self.eps) {
            return Err("eps must lie in [0, 1)".into());
        }
        if self.eps_b < 0.0 {
            return Err("eps_b must be nonnegative".into());
        }
        if self.checker.is_empty() {
            return Err("checker list must not be empty".into());
        }
        match self.scenario {
            Scenario::N0 => {
                if self.eps != 0.0 || self.eps_b != 0.0 {
                    return Err("scenario N0 requires eps = eps_b = 0".into());
                }
            }
            Scenario::N1 if self.eps != 0.0 => {
                return Err("scenario N1 requires eps = 0".into());
            }
            _ => {}
        }
        for c in &self.checker {
            match c {
                Guarantee::T5 => {
                    if self.scenario != Scenario::N2prime {
                        return Err("checker T5 requires scenario N2prime".into());
                    }
                }
                other => {
                    if self.scenario == Scenario::N2prime {
                        return Err(format!(
                            "checker {} is incompatible with scenario N2prime",
                            other.as_str()
                        ));
                    }
                }
            }
            if matches!(
                c,
                Guarantee::T3 | Guarantee::T4 | Guarantee::C3 | Guarantee::C4
            ) && !matches!(self.signal, SignalSpec::StrongDecaying { .. })
            {
                return Err(format!(
                    "checker {} requires a strong_decaying signal",
                    c.as_str()
                ));
            }
            if matches!(c, Guarantee::C1 | Guarantee::C1prime | Guarantee::C1star)
                && (!matches!(self.signal, SignalSpec::Sparse) || self.eps != 0.0)
            {
                return Err(format!(
                    "checker {} requires a sparse signal and eps = 0",
                    c.as_str()
                ));
            }
            if matches!(c, Guarantee::C2 | Guarantee::C3 | Guarantee::C4)
                && (self.eps != 0.0 || self.eps_b != 0.0)
            {
                return Err(format!("checker {} requires eps = eps_b = 0", c.as_str()));
            }
        }
        Ok(())
    }
}

/// One evaluated (trial, checker) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_id: u64,
    pub delta_actual: f64,
    pub eps_h: f64,
    pub threshold: f64,
    pub condition_satisfied: bool,
    pub support_recovered: bool,
    pub order_respected: Option<bool>,
    pub error_l2: f64,
    pub predicted_bound: f64,
}

impl TrialRecord {
    /// Whether this row breaks the soundness contract: a satisfied condition
    /// whose promise (support, error bound, order when applicable) failed.
    pub fn is_violation(&self) -> bool {
        self.condition_satisfied
            && !(self.support_recovered
                && self.error_l2 <= self.predicted_bound + 1e-12
                && self.order_respected.unwrap_or(true))
    }
}

/// Aggregate written next to the trial CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloSummary {
    pub trials: u64,
    pub satisfied_count: u64,
    pub violations: u64,
}

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------

/// 17 significant digits: enough for bit-exact f64 round trips.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_field(field: &str, line_no: usize) -> std::result::Result<f64, String> {
    match field.trim().parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(format!(
            "line {line_no}: cannot parse '{}' as a finite number",
            field.trim()
        )),
    }
}

/// Reads a headerless CSV matrix; every row must have the same width.
/// Error messages carry 1-based line numbers.
pub fn read_matrix_csv(path: &Path) -> std::result::Result<DMatrix<f64>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for field in line.split(',') {
            row.push(parse_field(field, i + 1)?);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(format!(
                    "line {}: expected {} fields, found {}",
                    i + 1,
                    first.len(),
                    row.len()
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err("matrix file is empty".into());
    }
    let (m, n) = (rows.len(), rows[0].len());
    Ok(DMatrix::from_fn(m, n, |i, j| rows[i][j]))
}

/// Reads a vector: one value per line.
pub fn read_vector_csv(path: &Path) -> std::result::Result<DVector<f64>, String> {
    let mat = read_matrix_csv(path)?;
    if mat.ncols() != 1 {
        return Err(format!(
            "expected one value per line, found {} columns",
            mat.ncols()
        ));
    }
    Ok(DVector::from_column_slice(mat.column(0).as_slice()))
}

pub fn write_matrix_csv(path: &Path, a: &DMatrix<f64>) -> std::io::Result<()> {
    let mut out = String::new();
    for i in 0..a.nrows() {
        let row: Vec<String> = (0..a.ncols()).map(|j| fmt_f64(a[(i, j)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    fs::write(path, out)
}

pub fn write_vector_csv(path: &Path, v: &DVector<f64>) -> std::io::Result<()> {
    let mut out = String::new();
    for i in 0..v.len() {
        out.push_str(&fmt_f64(v[i]));
        out.push('\n');
    }
    fs::write(path, out)
}

// ---------------------------------------------------------------------------
// Instance generation
// ---------------------------------------------------------------------------

fn random_unit_vector(rng: &mut ChaCha8Rng, len: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(len, |_, _| {
            let g: f64 = StandardNormal.sample(rng);
            g
        });
        let norm = v.norm();
        if norm > 1e-12 {
            return v / norm;
        }
    }
}

fn gen_signal(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng) -> Result<DVector<f64>> {
    match cfg.signal {
        SignalSpec::Sparse => {
            let support = sensing::sample_subset(rng, cfg.n, cfg.k);
            let mut x = DVector::zeros(cfg.n);
            let pinned = rng.gen_range(0..cfg.k);
            for (slot, &idx) in support.iter().enumerate() {
                let magnitude = if slot == pinned {
                    cfg.t0
                } else {
                    cfg.t0 * (1.0 + rng.gen::<f64>())
                };
                let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                x[idx] = sign * magnitude;
            }
            Ok(x)
        }
        SignalSpec::AlmostSparse {
            beta_target,
            gamma_target,
        } => {
            // A full shuffle: the first k positions carry the support, the
            // rest are tail candidates.
            let mut picks = sensing::sample_subset(rng, cfg.n, cfg.n);
            let support: Vec<usize> = picks.drain(..cfg.k).collect();
            let mut x = DVector::zeros(cfg.n);
            let pinned = rng.gen_range(0..cfg.k);
            for (slot, &idx) in support.iter().enumerate() {
                let magnitude = if slot == pinned {
                    cfg.t0
                } else {
                    cfg.t0 * (1.0 + rng.gen::<f64>())
                };
                let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                x[idx] = sign * magnitude;
            }
            if beta_target > 0.0 && cfg.n > cfg.k {
                let norm_x1 = x.norm();
                // Tail spread over j slots of equal magnitude hits beta
                // exactly and gamma = beta * sqrt(j/k) approximately.
                let ratio = if beta_target > 0.0 {
                    gamma_target / beta_target
                } else {
                    1.0
                };
                let j = ((cfg.k as f64 * ratio * ratio).round() as usize).clamp(1, cfg.n - cfg.k);
                let mut c = beta_target * norm_x1 / (j as f64).sqrt();
                // The tail must stay strictly below t0 to leave the best-k
                // support unchanged.
                if c >= cfg.t0 {
                    c = 0.9 * cfg.t0;
                }
                for &idx in picks.iter().take(j) {
                    let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                    x[idx] = sign * c;
                }
            }
            Ok(x)
        }
        SignalSpec::StrongDecaying { alpha } => {
            let sig_seed = rng.gen::<u64>();
            signals::gen_strong_decaying(
                cfg.n,
                cfg.k,
                alpha,
                cfg.t0,
                sig_seed,
                DecayOptions {
                    tail: TailMode::GeometricDecay,
                    ratio: RatioMode::Exact,
                },
            )
        }
    }
}

/// Well-conditioned random frame for the sweep: a random rotation of the
/// identity, extended past square by flat sign columns (entries
/// `+-1/sqrt(m)`). Its order-(k+1) isometry constant is 0 for `n = m` and
/// about `sqrt(k/m)` for `n` slightly above `m`; random Gaussian frames at
/// these sizes sit far above every recovery threshold, so sweeps over them
/// would test nothing.
pub fn engineered_frame(m: usize, n: usize, seed: u64) -> Result<DMatrix<f64>> {
    if m == 0 || n < m {
        return Err(Error::DimensionMismatch(format!(
            "engineered frame needs 1 <= m <= n, got m = {m}, n = {n}"
        )));
    }
    let rotation = sensing::gen_partial_orthogonal(m, m, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x9e37_79b9_7f4a_7c15));
    let scale = 1.0 / (m as f64).sqrt();
    let mut phi = DMatrix::zeros(m, n);
    phi.view_mut((0, 0), (m, m)).copy_from(&rotation);
    for j in m..n {
        let flat = DVector::from_fn(m, |_, _| if rng.gen::<bool>() { scale } else { -scale });
        phi.set_column(j, &(&rotation * flat));
    }
    Ok(phi)
}

/// Deterministically generates the trial's problem instance. Each trial owns
/// a generator seeded with `seed XOR trial_id`.
pub fn generate_problem(
    cfg: &ExperimentConfig,
    trial_id: u64,
    cap: usize,
) -> Result<PerturbedProblem> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ trial_id);
    let matrix_seed = rng.gen::<u64>();
    let e_seed = rng.gen::<u64>();

    let phi = engineered_frame(cfg.m, cfg.n, matrix_seed)?;
    let x = gen_signal(cfg, &mut rng)?;
    let e_mat = if cfg.eps > 0.0 {
        sensing::perturb_with_cap(
            &phi,
            cfg.eps,
            PerturbModel::RandomGaussian,
            e_seed,
            cfg.k,
            cap,
        )?
    } else {
        DMatrix::zeros(cfg.m, cfg.n)
    };
    let b = if cfg.eps_b > 0.0 {
        let u = random_unit_vector(&mut rng, cfg.m);
        let scale = match cfg.scenario {
            Scenario::N2prime => ((&phi + &e_mat) * &x).norm(),
            _ => (&phi * &x).norm(),
        };
        u * (cfg.eps_b * scale)
    } else {
        DVector::zeros(cfg.m)
    };
    PerturbedProblem::new(phi, e_mat, b, x, cfg.scenario, cfg.k)
}

/// Magnitude-descending order of the target support (ties toward the lower
/// index), i.e. the selection order an order-of-recovery promise implies.
pub fn magnitude_order_of_support(x: &DVector<f64>, support: &SupportSet) -> Vec<usize> {
    let mut order: Vec<usize> = support.iter().collect();
    order.sort_by(|&i, &j| {
        x[j].abs()
            .partial_cmp(&x[i].abs())
            .expect("finite entries")
            .then(i.cmp(&j))
    });
    order
}

/// Runs one trial: generates the instance, evaluates every configured
/// checker, runs the recovery, and emits one record per checker.
pub fn run_trial(cfg: &ExperimentConfig, trial_id: u64, cap: usize) -> Result<Vec<TrialRecord>> {
    let p = generate_problem(cfg, trial_id, cap)?;
    let (y, avail, _) = sensing::assemble(&p)?;
    let trace = omp::omp_run(&y, &avail, cfg.k, 0.0)?;

    let prof = signals::profile(&p.x, cfg.k)?;
    let (x1, _) = signals::best_k_approx(&p.x, cfg.k)?;
    let recovered = trace.iterations.len() == cfg.k && trace.support() == prof.support;
    let order_ok = trace.selection_sequence() == magnitude_order_of_support(&p.x, &prof.support);
    let error_l2 = (&trace.x_hat - &x1).norm();

    let alpha = match cfg.signal {
        SignalSpec::StrongDecaying { alpha } => Some(alpha),
        _ => None,
    };
    let params = CheckParams {
        alpha,
        tau: Some(guarantees::tau_aligned(cfg.k)),
    };

    let mut records = Vec::with_capacity(cfg.checker.len());
    for &which in &cfg.checker {
        let report = guarantees::check(&p, which, &params, cap)?;
        records.push(TrialRecord {
            trial_id,
            delta_actual: report.delta_actual,
            eps_h: report.eps_h,
            threshold: report.delta_threshold,
            condition_satisfied: report.satisfied,
            support_recovered: recovered,
            order_respected: report.theorem.promises_order().then_some(order_ok),
            error_l2,
            predicted_bound: report.predicted_error_bound,
        });
    }
    Ok(records)
}

const TRIAL_CSV_HEADER: &str = "trial_id,delta_actual,eps_h,threshold,condition_satisfied,\
support_recovered,order_respected,error_l2,predicted_bound";

fn trial_record_csv_row(r: &TrialRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{}",
        r.trial_id,
        fmt_f64(r.delta_actual),
        fmt_f64(r.eps_h),
        fmt_f64(r.threshold),
        r.condition_satisfied,
        r.support_recovered,
        r.order_respected.map(|b| b.to_string()).unwrap_or_default(),
        fmt_f64(r.error_l2),
        fmt_f64(r.predicted_bound),
    )
}

/// Runs the whole sweep in parallel (aggregation is order-independent and
/// the records are emitted in trial order, so output bytes are
/// deterministic). Writes `trials.csv` and `summary.json` under the output
/// directory and returns the summary.
pub fn run_montecarlo(
    cfg: &ExperimentConfig,
    cap: usize,
    out_dir: &Path,
) -> Result<MonteCarloSummary> {
    let per_trial: Vec<Vec<TrialRecord>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, t, cap))
        .collect::<Result<Vec<_>>>()?;
    let records: Vec<TrialRecord> = per_trial.into_iter().flatten().collect();

    let satisfied_count = records.iter().filter(|r| r.condition_satisfied).count() as u64;
    let violations = records.iter().filter(|r| r.is_violation()).count() as u64;
    let summary = MonteCarloSummary {
        trials: cfg.trials,
        satisfied_count,
        violations,
    };

    fs::create_dir_all(out_dir).map_err(|e| Error::Io(format!("create {out_dir:?}: {e}")))?;
    let mut csv = String::from(TRIAL_CSV_HEADER);
    csv.push('\n');
    for r in &records {
        csv.push_str(&trial_record_csv_row(r));
        csv.push('\n');
    }
    fs::write(out_dir.join("trials.csv"), csv)
        .map_err(|e| Error::Io(format!("write trials.csv: {e}")))?;
    let json = serde_json::to_string_pretty(&summary).expect("serializable") + "\n";
    fs::write(out_dir.join("summary.json"), json)
        .map_err(|e| Error::Io(format!("write summary.json: {e}")))?;
    Ok(summary)
}

// ---------------------------------------------------------------------------
// Commands (return process exit codes)
// ---------------------------------------------------------------------------

/// Maps library errors onto the exit-code contract.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Io(_) => 2,
        Error::DimensionMismatch(_) => 3,
        Error::CombinatorialLimit { .. } => 5,
        Error::RankDeficient { .. } | Error::NotSymmetric => 1,
        _ => 4,
    }
}

/// `recover`: run the pursuit on a matrix/measurement pair from disk and
/// print the per-iteration table and the estimate.
pub fn cmd_recover(
    matrix_path: &Path,
    signal_path: &Path,
    max_iter: Option<usize>,
    tol: f64,
) -> i32 {
    let a = match read_matrix_csv(matrix_path) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    let y = match read_vector_csv(signal_path) {
        Ok(y) => y,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    let iters = max_iter.unwrap_or_else(|| a.nrows().min(a.ncols()));
    let trace = match omp::omp_run(&y, &a, iters, tol) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    println!("iter,index,h_max_abs,residual_norm");
    for (l, it) in trace.iterations.iter().enumerate() {
        println!(
            "{},{},{},{}",
            l + 1,
            it.selected_index,
            fmt_f64(it.h_max_abs),
            fmt_f64(it.residual_norm)
        );
    }
    println!("x_hat:");
    for i in 0..trace.x_hat.len() {
        println!("{}", fmt_f64(trace.x_hat[i]));
    }
    0
}

/// `counterexample`: build the adversarial instance, write its pieces as
/// CSV plus a JSON summary, and exit 0 iff the failure is reproduced.
pub fn cmd_counterexample(k: usize, eta: f64, t0: f64, xi: f64, out_dir: &Path) -> i32 {
    let inst = match counterexample::build(k, eta, t0, xi) {
        Ok(i) => i,
        Err(e) => {
            eprintln!("error: {e}");
            return 4;
        }
    };
    if let Err(e) = fs::create_dir_all(out_dir) {
        eprintln!("error: cannot create {}: {e}", out_dir.display());
        return 2;
    }
    let pt = inst.phi_tilde();
    let gram_eigs =
        crate::linalg::symmetric_eigenvalues(&crate::linalg::gram(&pt)).expect("gram is symmetric");
    let trace = omp::omp_run(&inst.y_tilde, &pt, k, 0.0).expect("full-rank construction");
    let first_pick = trace.selection_sequence()[0];
    let failed = counterexample::verify_failure(&inst);
    let rho = xi / t0;
    let delta_bound = eta / (k as f64).sqrt() - ((k as f64 - 1.0).sqrt() / k as f64) * rho;

    let writes = [
        ("phi.csv", &inst.phi),
        ("phi_tilde.csv", &pt),
        ("E.csv", &inst.e_mat),
    ];
    for (name, m) in writes {
        if let Err(e) = write_matrix_csv(&out_dir.join(name), m) {
            eprintln!("error: writing {name}: {e}");
            return 2;
        }
    }
    let vec_writes = [
        ("b.csv", &inst.b),
        ("x.csv", &inst.x),
        ("y_tilde.csv", &inst.y_tilde),
    ];
    for (name, v) in vec_writes {
        if let Err(e) = write_vector_csv(&out_dir.join(name), v) {
            eprintln!("error: writing {name}: {e}");
            return 2;
        }
    }
    let summary = json!({
        "delta": inst.delta,
        "delta_bound": delta_bound,
        "eigenvalues": gram_eigs,
        "omp_first_pick": first_pick,
        "failed": failed,
    });
    if let Err(e) = fs::write(
        out_dir.join("summary.json"),
        serde_json::to_string_pretty(&summary).expect("serializable") + "\n",
    ) {
        eprintln!("error: writing summary.json: {e}");
        return 2;
    }
    println!(
        "delta = {:.6}, first pick = column {first_pick}, support recovery {}",
        inst.delta,
        if failed { "FAILS" } else { "succeeds" }
    );
    if failed {
        0
    } else {
        1
    }
}

/// `montecarlo`: load a config, apply overrides, run the sweep, print the
/// aggregate, exit 0 iff no soundness violation occurred.
pub fn cmd_montecarlo(
    config_path: &Path,
    seed_override: Option<u64>,
    trials_override: Option<u64>,
    out_override: Option<PathBuf>,
    cap: usize,
) -> i32 {
    let text = match fs::read_to_string(config_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", config_path.display());
            return 2;
        }
    };
    let mut cfg: ExperimentConfig = match serde_json::from_str(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: config parse: {e}");
            return 2;
        }
    };
    if let Some(s) = seed_override {
        cfg.seed = s;
    }
    if let Some(t) = trials_override {
        cfg.trials = t;
    }
    if let Err(msg) = cfg.validate() {
        eprintln!("error: config rejected: {msg}");
        return 2;
    }
    let out_dir = out_override.unwrap_or_else(|| PathBuf::from(&cfg.output_path));
    match run_montecarlo(&cfg, cap, &out_dir) {
        Ok(summary) => {
            println!(
                "trials = {}, satisfied = {}, violations = {}",
                summary.trials, summary.satisfied_count, summary.violations
            );
            if summary.violations == 0 {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

/// Inputs for the comparison table, either from flags or a matrix file.
#[derive(Debug, Clone)]
pub struct CompareInputs {
    pub matrix: Option<PathBuf>,
    pub mu: Option<f64>,
    pub delta_k: Option<f64>,
    pub delta_k1: Option<f64>,
    pub delta_2k: Option<f64>,
    pub k: usize,
    pub t0: f64,
    pub norm_b: f64,
    pub beta: f64,
    pub gamma: f64,
    pub norm_x1: f64,
    pub norm_x: f64,
}

/// `compare`: evaluate the competing recovery conditions and error bounds
/// side by side.
pub fn cmd_compare(inputs: &CompareInputs, cap: usize) -> i32 {
    let (mu, delta_k, delta_k1, delta_2k) = if let Some(path) = &inputs.matrix {
        let a = match read_matrix_csv(path) {
            Ok(a) => a,
            Err(msg) => {
                eprintln!("error: {msg}");
                return 2;
            }
        };
        let mu = match rip::coherence(&a) {
            Ok(v) => v,
            Err(e) => {
                eprintln!("error: {e}");
                return exit_code_for(&e);
            }
        };
        let ric = |order: usize| rip::ric_exact_with_cap(&a, order, cap).map(|r| r.delta);
        let dk = match ric(inputs.k) {
            Ok(v) => v,
            Err(e) => {
                eprintln!("error: {e}");
                return exit_code_for(&e);
            }
        };
        let dk1 = match ric(inputs.k + 1) {
            Ok(v) => v,
            Err(e) => {
                eprintln!("error: {e}");
                return exit_code_for(&e);
            }
        };
        let d2k = if 2 * inputs.k <= a.ncols() {
            match ric(2 * inputs.k) {
                Ok(v) => Some(v),
                Err(e) => {
                    eprintln!("error: {e}");
                    return exit_code_for(&e);
                }
            }
        } else {
            None
        };
        (mu, dk, dk1, d2k)
    } else {
        match (inputs.mu, inputs.delta_k, inputs.delta_k1) {
            (Some(mu), Some(dk), Some(dk1)) => (mu, dk, dk1, inputs.delta_2k),
            _ => {
                eprintln!("error: provide --matrix or all of --mu, --delta-k, --delta-k1");
                return 2;
            }
        }
    };

    println!(
        "inputs: k = {}, mu = {}, delta_k = {}, delta_k1 = {}, t0 = {}, ||b|| = {}",
        inputs.k, mu, delta_k, delta_k1, inputs.t0, inputs.norm_b
    );

    match guarantees::compare_coherence(mu, inputs.k, inputs.t0, inputs.norm_b, delta_k) {
        Ok(c) => {
            println!(
                "coherence condition: k <= {:.6} -> {}",
                c.lhs_28, c.satisfied_28
            );
            println!(
                "error-bound ratio r (isometry/coherence) = {:.6}",
                c.error_ratio_r
            );
        }
        Err(e) => println!("coherence condition: {e}"),
    }

    let c1star_threshold =
        (1.0 - 3.0 * inputs.norm_b / inputs.t0) / ((inputs.k as f64).sqrt() + 1.0);
    println!(
        "noisy-sparse threshold (C1star): delta_k1 < {:.6} -> {}",
        c1star_threshold,
        delta_k1 < c1star_threshold
    );

    let hz = guarantees::compare_huangzhu(inputs.k, delta_k1, delta_k, inputs.t0, inputs.norm_b);
    println!(
        "competing pair: delta ok = {}, noise ok = {}; C1prime feasible tau exists = {}",
        hz.hz_delta_ok, hz.hz_noise_ok, hz.c1prime_exists_tau
    );
    println!(
        "aligned tau = {:.6}, noise-budget ratio r = {:.6}",
        hz.tau_aligned, hz.noise_ratio_r
    );

    if let Some(d2k) = delta_2k {
        match guarantees::compare_error_bounds_c2(
            d2k,
            delta_k,
            inputs.beta,
            inputs.gamma,
            inputs.norm_x1,
            inputs.norm_x,
            inputs.k,
        ) {
            Ok(c) => {
                println!(
                    "squared-error bounds: log-factor side = {:.6e}, compressibility side = {:.6e} ({:?} tighter)",
                    c.bound_r30, c.bound_r31_squared_total, c.tighter
                );
            }
            Err(e) => println!("squared-error bounds: {e}"),
        }
    }
    0
}

/// `ric`: print the exact restricted-isometry report for a matrix file.
pub fn cmd_ric(matrix_path: &Path, k: usize, cap: usize) -> i32 {
    let a = match read_matrix_csv(matrix_path) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    match rip::ric_exact_with_cap(&a, k, cap) {
        Ok(r) => {
            println!("order = {}", r.order);
            println!("delta = {}", fmt_f64(r.delta));
            println!(
                "witness = [{}]",
                r.witness
                    .iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            println!("witness_eigenvalue = {}", fmt_f64(r.witness_eigenvalue));
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

/// Convenience wrapper used by tests and examples: verdicts for the three
/// oracles bundled with a freshly run trace.
pub fn run_oracles_on_problem(p: &PerturbedProblem, cap: usize) -> Result<oracle::OracleVerdict> {
    let (y, avail, _) = sensing::assemble(p)?;
    let trace = omp::omp_run(&y, &avail, p.k, 0.0)?;
    oracle::lemma2_empirical_with_cap(p, &trace, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn smoke_config(out: &Path) -> ExperimentConfig {
        ExperimentConfig {
            scenario: Scenario::N2,
            m: 12,
            n: 12,
            k: 2,
            trials: 8,
            seed: 7,
            eps: 0.01,
            eps_b: 0.01,
            signal: SignalSpec::Sparse,
            t0: 1.0,
            checker: vec![Guarantee::T1],
            output_path: out.to_string_lossy().into_owned(),
        }
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let dir = tempdir().unwrap();
        let a = sensing::gen_gaussian(4, 5, 123);
        let path = dir.path().join("a.csv");
        write_matrix_csv(&path, &a).unwrap();
        let b = read_matrix_csv(&path).unwrap();
        assert_eq!(a, b);

        let v = DVector::from_vec(vec![1.0, -2.5e-17, std::f64::consts::PI]);
        let vpath = dir.path().join("v.csv");
        write_vector_csv(&vpath, &v).unwrap();
        assert_eq!(read_vector_csv(&vpath).unwrap(), v);
    }

    #[test]
    fn csv_parse_errors_carry_line_numbers() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        fs::write(&path, "1.0,2.0\n3.0,oops\n").unwrap();
        let err = read_matrix_csv(&path).unwrap_err();
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn config_validation_rejects_bad_combinations() {
        let dir = tempdir().unwrap();
        let mut cfg = smoke_config(dir.path());
        cfg.trials = 0;
        assert!(cfg.validate().is_err());

        let mut cfg = smoke_config(dir.path());
        cfg.scenario = Scenario::N0;
        assert!(cfg.validate().is_err()); // eps nonzero under N0

        let mut cfg = smoke_config(dir.path());
        cfg.checker = vec![Guarantee::T5];
        assert!(cfg.validate().is_err()); // T5 needs N2prime

        let mut cfg = smoke_config(dir.path());
        cfg.checker = vec![Guarantee::T3];
        assert!(cfg.validate().is_err()); // T3 needs strong_decaying
    }

    #[test]
    fn montecarlo_smoke_has_no_violations() {
        let dir = tempdir().unwrap();
        let cfg = smoke_config(&dir.path().join("out"));
        let summary = run_montecarlo(&cfg, DEFAULT_SUBSET_CAP, &dir.path().join("out")).unwrap();
        assert_eq!(summary.trials, 8);
        assert_eq!(summary.violations, 0);
        assert!(dir.path().join("out/trials.csv").exists());
        assert!(dir.path().join("out/summary.json").exists());
    }

    #[test]
    fn montecarlo_is_bit_deterministic() {
        let dir = tempdir().unwrap();
        let cfg = smoke_config(&dir.path().join("a"));
        run_montecarlo(&cfg, DEFAULT_SUBSET_CAP, &dir.path().join("a")).unwrap();
        run_montecarlo(&cfg, DEFAULT_SUBSET_CAP, &dir.path().join("b")).unwrap();
        let a = fs::read(dir.path().join("a/trials.csv")).unwrap();
        let b = fs::read(dir.path().join("b/trials.csv")).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn generate_problem_is_deterministic_per_trial() {
        let dir = tempdir().unwrap();
        let cfg = smoke_config(dir.path());
        let p1 = generate_problem(&cfg, 3, DEFAULT_SUBSET_CAP).unwrap();
        let p2 = generate_problem(&cfg, 3, DEFAULT_SUBSET_CAP).unwrap();
        assert_eq!(p1, p2);
        let p3 = generate_problem(&cfg, 4, DEFAULT_SUBSET_CAP).unwrap();
        assert_ne!(p1, p3);
    }

    #[test]
    fn cap_resolution_order() {
        assert_eq!(resolve_cap(Some(123)), 123);
        assert_eq!(resolve_cap(None), DEFAULT_SUBSET_CAP);
    }
}
