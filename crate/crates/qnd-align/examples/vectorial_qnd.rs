//! Faraday probe of the orientation: the textbook QND benchmark the
//! alignment geometries are measured against. Conditioning the atomic x on
//! the measured light s_y gives V[x|s_y] = 1 + k^2 and V[p|s_y] =
//! 1/(1 + k^2), a minimal (product = 1) conditionally squeezed state.

use qnd_align::couplings::CouplingSet;
use qnd_align::scenarios::{evaluate, Geometry, ScenarioConfig};

fn main() {
    println!("{:>7}  {:>12}  {:>12}  {:>12}  {:>10}", "kappa", "V[x|sy]", "V[p|sy]", "product", "dB");
    for kappa in [0.1, 0.3, 1.0, 2.0, 3.0] {
        let coupling = CouplingSet {
            kappa_v: kappa,
            kappa_t: 0.0,
            eps_a: 0.0,
            eps_p: 0.0,
            eps_prime: 0.0,
            saturation: 0.0,
        };
        let mut config = ScenarioConfig::new(Geometry::VectorialSinglePass, coupling);
        config.include_noise = false;
        let r = evaluate(&config).expect("clean vectorial scenario");
        let vx = r.conditional_variances["x|sy"];
        let vp = r.conditional_variances["p|sy"];
        println!(
            "{kappa:>7.2}  {vx:>12.8}  {vp:>12.8}  {:>12.9}  {:>10.3}",
            vx * vp,
            r.squeezing_db["p|sy"]
        );
    }
    println!();
    println!("back-action lands entirely in x; p is squeezed without bound as kappa grows");
}
