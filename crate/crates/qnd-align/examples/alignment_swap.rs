//! Beyond the truncated regime the single pass stops being a small
//! perturbation and starts swapping the collective alignment onto the
//! light. The exact kernels make this quantitative: the atom-sourced share
//! of the output variance is A(k) = J0(2k)^2 + J1(2k)^2, the light-sourced
//! share is B = 1 - A, and the collective mean transfers with weight
//! J1(2k)/k.

use qnd_align::kernel::{collective_output_variance, j0, j1};

fn main() {
    println!(
        "{:>6}  {:>10}  {:>10}  {:>12}  {:>12}",
        "kappa", "A (atoms)", "B (light)", "mean weight", "signal weight"
    );
    for kappa in [0.1, 0.5, 1.0, 1.2024, 1.9159, 3.0, 5.0] {
        let a = j0(2.0 * kappa).powi(2) + j1(2.0 * kappa).powi(2);
        let m = collective_output_variance(kappa).expect("quadrature converges");
        println!(
            "{kappa:>6.3}  {a:>10.6}  {:>10.6}  {m_self:>12.6}  {m_light:>12.6}",
            1.0 - a,
            m_self = m.self_weight,
            m_light = m.light_weight,
        );
    }
    println!();
    println!("at kappa = 1.2024 (first J0 zero) the entry cell keeps no weight of");
    println!("itself; at kappa = 1.9159 (first J1 zero) the collective mean has");
    println!("fully migrated into the light, yet every output variance is still 1:");
    println!("the swap is coherent, not dissipative, and A decays only as 1/(pi k)");
}
