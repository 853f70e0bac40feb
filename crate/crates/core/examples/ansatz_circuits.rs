//! TwoLocal and Ry-layer circuits.

use regvqe::ansatz::{build_circuit, prepare_state};
use regvqe::{AnsatzSpec, Entanglement};

fn main() -> regvqe::Result<()> {
    for spec in [
        AnsatzSpec::two_local(4, 4),
        AnsatzSpec::two_local(4, 4).with_entanglement(Entanglement::Full),
        AnsatzSpec::two_local(8, 4),
        AnsatzSpec::ry_layer(12),
    ] {
        println!(
            "{:?} n={} reps={} {:?}: {} parameters, {} gates",
            spec.kind,
            spec.n_qubits,
            spec.reps,
            spec.entanglement,
            spec.param_count(),
            spec.gate_count()
        );
    }

    let spec = AnsatzSpec::two_local(2, 1);
    let theta: Vec<f64> = (0..spec.param_count()).map(|i| 0.1 * (i + 1) as f64).collect();
    for gate in build_circuit(&spec, &theta)? {
        println!("  {gate:?}");
    }
    let state = prepare_state(&spec, &theta)?;
    for (i, a) in state.amplitudes().iter().enumerate() {
        println!("  |{i:02b}> {:+.6}{:+.6}i", a.re, a.im);
    }
    Ok(())
}
