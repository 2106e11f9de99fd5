//! Side-by-side evaluation of the recovery conditions and error bounds this
//! crate provides against the coherence-based and noise-budget alternatives.

use omp_perturb::{guarantees, rip, sensing};

fn main() {
    let k = 2;
    let mut a = sensing::gen_gaussian(96, 10, 21);
    for j in 0..a.ncols() {
        let norm = a.column(j).norm();
        a.column_mut(j).scale_mut(1.0 / norm);
    }
    let mu = rip::coherence(&a).unwrap();
    let delta_k = rip::ric_exact(&a, k).unwrap().delta;
    let delta_k1 = rip::ric_exact(&a, k + 1).unwrap().delta;
    let (t0, norm_b) = (1.0, 0.05);

    println!("k = {k}, mu = {mu:.4}, delta_k = {delta_k:.4}, delta_k1 = {delta_k1:.4}");
    println!("t0 = {t0}, ||b|| = {norm_b}\n");

    let c = guarantees::compare_coherence(mu, k, t0, norm_b, delta_k).unwrap();
    println!(
        "coherence framework: needs k <= {:.3} -> {}",
        c.lhs_28, c.satisfied_28
    );
    println!(
        "error-bound ratio r = {:.4} (<= 1 means ours is tighter)",
        c.error_ratio_r
    );

    let hz = guarantees::compare_huangzhu(k, delta_k1, delta_k, t0, norm_b);
    println!("\nnoise-budget framework:");
    println!("  competitor delta condition: {}", hz.hz_delta_ok);
    println!("  competitor noise condition: {}", hz.hz_noise_ok);
    println!(
        "  some tau makes the split condition pass: {}",
        hz.c1prime_exists_tau
    );
    println!(
        "  aligned tau = {:.4}, noise-budget ratio = {:.4}",
        hz.tau_aligned, hz.noise_ratio_r
    );

    let (beta, gamma) = (0.02, 0.015);
    let delta_2k = rip::ric_exact(&a, 2 * k).unwrap().delta;
    match guarantees::compare_error_bounds_c2(delta_2k, delta_k, beta, gamma, 1.0, 1.0, k) {
        Ok(cmp) => {
            println!("\nsquared-error bounds (beta = {beta}, gamma = {gamma}, delta_2k = {delta_2k:.4}):");
            println!("  log-factor bound        = {:.6}", cmp.bound_r30);
            println!(
                "  compressibility bound   = {:.6}",
                cmp.bound_r31_squared_total
            );
            println!("  tighter                 = {:?}", cmp.tighter);
        }
        Err(e) => println!("\nsquared-error bounds unavailable: {e}"),
    }
}
