//! Random-field Ising chains and their exact ground energies.

use regvqe::pauli::generate_rfim;
use regvqe::statevector::{ground_energy_dense, ground_energy_diagonal};
use regvqe::{exact_ground_energy, RfimSpec};

fn main() -> regvqe::Result<()> {
    let spec = RfimSpec::calibrated(12, 7);
    let h = generate_rfim(&spec)?;
    let fields: Vec<String> = spec.fields().iter().map(|f| format!("{f:+.3}")).collect();
    println!("fields: {}", fields.join(" "));
    println!("12 qubits, {} terms, diagonal: {}", h.len(), h.is_diagonal());
    println!("E0 = {:.12}", exact_ground_energy(&h)?);

    let small = generate_rfim(&RfimSpec { n_qubits: 6, ..spec })?;
    println!("6 qubits: diagonal {:.12}, dense {:.12}", ground_energy_diagonal(&small)?, ground_energy_dense(&small)?);
    Ok(())
}
