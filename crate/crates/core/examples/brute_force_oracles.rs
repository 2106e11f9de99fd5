//! The three brute-force oracles: exhaustive best-support search against
//! the greedy result, grid minimization of the chain-ratio objective, and
//! the off-support correlation-deviation bound replayed on a real trace.

use nalgebra::DVector;
use omp_perturb::cli::{generate_problem, ExperimentConfig, SignalSpec};
use omp_perturb::oracle;
use omp_perturb::sensing::{self, Scenario, DEFAULT_SUBSET_CAP};
use omp_perturb::{guarantees, omp};

fn main() {
    // Exhaustive support search agrees with the greedy pursuit on an easy
    // instance and can only be better on hard ones.
    let a = sensing::gen_gaussian(10, 14, 2);
    let mut x = DVector::zeros(14);
    x[4] = 1.2;
    x[8] = -0.9;
    let y = &a * &x;
    let (support, residual) = oracle::exhaustive_best_support(&y, &a, 2).unwrap();
    let trace = omp::omp_run(&y, &a, 2, 0.0).unwrap();
    println!(
        "exhaustive support = {:?} (residual {:.2e})",
        support.as_slice(),
        residual
    );
    println!(
        "greedy support     = {:?} (residual {:.2e})",
        trace.support().as_slice(),
        trace.iterations.last().unwrap().residual_norm
    );

    // Grid minimization of sum x_i^2 / (sum x_i)^2 over decaying chains.
    println!("\nchain-ratio minimization:");
    for (l, alpha) in [(2usize, 2.0), (3, 1.5), (4, 3.0)] {
        let v = oracle::lemma1_grid_min(l, alpha, 40).unwrap();
        println!(
            "  l = {l}, alpha = {alpha}: passed = {} (margin {:+.2e})",
            v.passed, v.worst_case_margin
        );
    }

    // Correlation-deviation bound on a trace from a condition-satisfying
    // instance: the worst margin stays nonnegative.
    let cfg = ExperimentConfig {
        scenario: Scenario::N2,
        m: 16,
        n: 16,
        k: 3,
        trials: 1,
        seed: 31,
        eps: 0.01,
        eps_b: 0.01,
        signal: SignalSpec::Sparse,
        t0: 1.0,
        checker: vec![],
        output_path: String::new(),
    };
    let p = generate_problem(&cfg, 0, DEFAULT_SUBSET_CAP).unwrap();
    let report = guarantees::check_t1(&p).unwrap();
    let (y, avail, _) = sensing::assemble(&p).unwrap();
    let trace = omp::omp_run(&y, &avail, p.k, 0.0).unwrap();
    let verdict = oracle::lemma2_empirical(&p, &trace).unwrap();
    println!(
        "\ncorrelation-deviation check on a satisfied={} instance: passed = {}, worst margin = {:+.3e}",
        report.satisfied, verdict.passed, verdict.worst_case_margin
    );
}
