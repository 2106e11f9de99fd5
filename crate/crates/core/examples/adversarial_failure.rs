//! Build the adversarial instance family and show that the pursuit picks
//! the planted extra column first, so support recovery fails even though
//! the matrix's isometry constant is only slightly above the recovery
//! threshold.

use omp_perturb::{counterexample, guarantees, linalg, omp, rip};

fn main() {
    let (k, eta, t0, xi) = (3, 1.1, 1.0, 0.4);
    let inst = counterexample::build(k, eta, t0, xi).expect("parameters in domain");
    let pt = inst.phi_tilde();

    println!("k = {k}, eta = {eta}, t0 = {t0}, xi = {xi}");
    println!("closed-form delta     = {:.6}", inst.delta);

    let report = rip::ric_exact(&pt, k + 1).expect("tiny enumeration");
    println!("exact delta (order {}) = {:.6}", k + 1, report.delta);

    let threshold = guarantees::q_function(k as f64, xi / t0);
    println!("recovery threshold Q(k, xi/t0) = {:.6}", threshold);
    println!(
        "gap: delta exceeds the sufficient condition by {:.6}",
        inst.delta - threshold
    );

    let eigs = linalg::symmetric_eigenvalues(&linalg::gram(&pt)).unwrap();
    println!("Gram eigenvalues = {eigs:.6?}");

    let trace = omp::omp_run(&inst.y_tilde, &pt, k, 0.0).unwrap();
    println!("selection sequence = {:?}", trace.selection_sequence());
    println!(
        "support recovery fails: {}",
        counterexample::verify_failure(&inst)
    );
    println!("(true support is columns 0..{k}; column {k} is the planted decoy)");
}
