//! Evaluate the joint-perturbation recovery condition on one engineered
//! instance and compare its promise against what the pursuit actually does.

use omp_perturb::cli::{generate_problem, ExperimentConfig, SignalSpec};
use omp_perturb::guarantees;
use omp_perturb::omp;
use omp_perturb::sensing::{self, Scenario, DEFAULT_SUBSET_CAP};
use omp_perturb::signals;

fn main() {
    let cfg = ExperimentConfig {
        scenario: Scenario::N2,
        m: 16,
        n: 16,
        k: 3,
        trials: 1,
        seed: 2024,
        eps: 0.01,
        eps_b: 0.01,
        signal: SignalSpec::Sparse,
        t0: 1.0,
        checker: vec![],
        output_path: String::new(),
    };
    let p = generate_problem(&cfg, 0, DEFAULT_SUBSET_CAP).expect("generates");

    let report = guarantees::check_t1(&p).expect("checkable");
    println!("condition {:?}", report.theorem);
    println!("  eps_h                 = {:.6}", report.eps_h);
    println!("  delta threshold       = {:.6}", report.delta_threshold);
    println!("  delta actual          = {:.6}", report.delta_actual);
    println!("  satisfied             = {}", report.satisfied);
    println!(
        "  predicted error bound = {:.6}",
        report.predicted_error_bound
    );

    let (y, avail, _) = sensing::assemble(&p).unwrap();
    let trace = omp::omp_run(&y, &avail, p.k, 0.0).unwrap();
    let prof = signals::profile(&p.x, p.k).unwrap();
    let (x1, _) = signals::best_k_approx(&p.x, p.k).unwrap();

    println!("\npursuit outcome:");
    println!("  target support    = {:?}", prof.support.as_slice());
    println!("  selected support  = {:?}", trace.support().as_slice());
    println!("  actual l2 error   = {:.6}", (&trace.x_hat - &x1).norm());
    println!(
        "  bound respected   = {}",
        (&trace.x_hat - &x1).norm() <= report.predicted_error_bound
    );
}
