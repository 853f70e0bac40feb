//! Parsing, combining, and hashing Pauli sums.

use regvqe::pauli::{abs_coefficient_sum, parse_pauli_sum, serialize_pauli_sum};
use regvqe::{PauliString, WeightedPauliSum};

fn main() -> regvqe::Result<()> {
    let h = parse_pauli_sum("# a small two-qubit operator\n0.5 ZI\n0.5 IZ\n-0.25 XX\n")?;
    println!("{} qubits, {} terms, sum|c| = {}", h.n_qubits(), h.len(), abs_coefficient_sum(&h));

    let p: PauliString = "XYZ".parse()?;
    println!("{}: x_mask={:03b} z_mask={:03b} y_count={}", p.label(), p.x_mask(), p.z_mask(), p.y_count());
    let q: PauliString = "ZZI".parse()?;
    println!("{} and {} commute: {}", p.label(), q.label(), p.commutes_with(&q));

    let field = WeightedPauliSum::from_labels(2, &[(1.0, "XI"), (1.0, "IX")])?;
    let combined = h.linear_combination(1.0, &field, 0.3)?;
    print!("{}", serialize_pauli_sum(&combined));
    println!("hash {}", combined.content_hash());
    Ok(())
}
