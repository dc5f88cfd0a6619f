//! Walks the probe detuning across the D2 manifold of the default config
//! and prints the working points: the zero of the vectorial coupling
//! (where the alignment is probed cleanly) and the zero of the tensorial
//! coupling (where the orientation is).

use qnd_align::config::RunConfig;
use qnd_align::couplings::{
    coupling_set_with, find_zero, sweep_detuning, CouplingKind,
};

fn main() {
    let config = RunConfig::default();
    let params = config.experiment_params().expect("default config is valid");

    let vz = find_zero(&params, CouplingKind::Vector, 20.0, 60.0).expect("bracketed");
    let tz = find_zero(&params, CouplingKind::Tensor, 180.0, 280.0).expect("bracketed");
    println!("vectorial zero:  {vz:.4} MHz  (normalized {:.3})", vz / 2.88);
    println!("tensorial zero: {tz:.4} MHz  (normalized {:.3})", tz / 2.88);
    println!();

    for (name, detuning) in [("vectorial zero", vz), ("tensorial zero", tz)] {
        let mut at = params.clone();
        at.probe_detuning_mhz = detuning;
        let cs = coupling_set_with(&at, false).expect("couplings evaluate");
        println!(
            "at the {name}: kappa_v = {:+.4e}  kappa_t = {:+.4e}  eps = {:.4}  eps' = {:+.2e}",
            cs.kappa_v, cs.kappa_t, cs.eps_a, cs.eps_prime
        );
    }
    println!();

    // coarse sweep for orientation; `qnd-align sweep` writes the full table
    let points = sweep_detuning(&params, 5.0, 100.0, 13).expect("sweep evaluates");
    println!(
        "{:>10}  {:>12}  {:>12}  {:>10}  {:>7}",
        "delta/hw", "kappa_v", "kappa_t", "eps_p", "masked"
    );
    for p in &points {
        println!(
            "{:>10.3}  {:>12.5}  {:>12.5}  {:>10.6}  {:>7}",
            p.normalized_detuning, p.kappa_v, p.kappa_t, p.eps_p, p.masked
        );
    }
}
