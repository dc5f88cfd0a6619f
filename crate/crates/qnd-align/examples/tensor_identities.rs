//! Spot-checks the irreducible tensor machinery: commutator expansion over
//! 6-j recoupling, hermiticity, the alkali sum rule that kills the ground
//! J = 1/2 tensor polarizability over a complete multiplet, and the two
//! exact anchor values.

use qnd_align::half::HalfInt;
use qnd_align::polarizability::{alpha_tensor, alpha_vector, build_table, TransitionManifold, ExcitedLevel};
use qnd_align::spin::{build_spin_space, verify_commutator_identity};

fn main() {
    for f in 1..=3 {
        let space = build_spin_space(HalfInt::from_int(f)).expect("spin space");
        let kmax = (2 * f as u32).min(3);
        let mut worst = 0.0f64;
        let mut pairs = 0usize;
        for k1 in 1..=kmax {
            for k2 in 1..=kmax {
                for q1 in -(k1 as i32)..=k1 as i32 {
                    for q2 in -(k2 as i32)..=k2 as i32 {
                        let r = verify_commutator_identity(&space, k1, q1, k2, q2)
                            .expect("ranks fit the space");
                        worst = worst.max(r);
                        pairs += 1;
                    }
                }
            }
        }
        println!("F = {f}: {pairs} commutator pairs up to rank {kmax}, worst residual {worst:.2e}");
    }
    println!();

    let one = HalfInt::from_int(1);
    let half = HalfInt::from_twice(1);
    let av = alpha_vector(one, one, half, half).expect("allowed line");
    let at = alpha_tensor(one, one, half, half).expect("allowed line");
    println!("1 -> 1 line with J = J' = 1/2: alpha_V = {av}, alpha_T = {at}");
    println!();

    // complete F' = 0, 1, 2 multiplet; offsets only label the lines here
    let m = TransitionManifold::new(
        one,
        half,
        HalfInt::from_twice(3),
        HalfInt::from_twice(3),
        780.24e-9,
        6.0,
        (0..3).map(|n| ExcitedLevel { f: HalfInt::from_int(n), offset_mhz: n as f64 }).collect(),
    )
    .expect("valid manifold");
    let table = build_table(&m).expect("table evaluates");
    println!("alkali sum rule over the D2 multiplet:");
    for line in &table.lines {
        println!(
            "  F' = {}: sigma = {:.4e} m^2  alpha_V = {:+.4}  alpha_T = {:+.4}",
            line.f_excited, line.sigma_m2, line.alpha_v, line.alpha_t
        );
    }
    println!("  relative residual of Sum sigma alpha_T: {:.2e}", table.sum_rule_residual());
}
