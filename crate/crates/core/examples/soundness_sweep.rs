//! Mini Monte-Carlo soundness sweep: every trial where the recovery
//! condition reports "satisfied" must recover the support in exactly k
//! iterations with error inside the predicted bound.

use omp_perturb::cli::{run_trial, ExperimentConfig, SignalSpec};
use omp_perturb::guarantees::Guarantee;
use omp_perturb::sensing::{Scenario, DEFAULT_SUBSET_CAP};

fn main() {
    let cfg = ExperimentConfig {
        scenario: Scenario::N2,
        m: 16,
        n: 16,
        k: 3,
        trials: 200,
        seed: 99,
        eps: 0.01,
        eps_b: 0.01,
        signal: SignalSpec::Sparse,
        t0: 1.0,
        checker: vec![Guarantee::T1],
        output_path: String::new(),
    };

    let mut satisfied = 0u64;
    let mut recovered_given_satisfied = 0u64;
    let mut violations = 0u64;
    for t in 0..cfg.trials {
        for rec in run_trial(&cfg, t, DEFAULT_SUBSET_CAP).expect("trial runs") {
            if rec.condition_satisfied {
                satisfied += 1;
                if rec.support_recovered {
                    recovered_given_satisfied += 1;
                }
            }
            if rec.is_violation() {
                violations += 1;
            }
        }
    }
    println!("trials                = {}", cfg.trials);
    println!("condition satisfied   = {satisfied}");
    println!("recovered | satisfied = {recovered_given_satisfied}");
    println!("violations            = {violations}");
    assert_eq!(violations, 0, "soundness must hold");
}
