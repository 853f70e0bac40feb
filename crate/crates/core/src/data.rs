//! Bundled molecular Hamiltonians.

use crate::error::{Error, Result};
use crate::pauli::{parse_pauli_sum, WeightedPauliSum};

pub const H2_PSUM: &str = include_str!("../data/h2.psum");
pub const LIH_PSUM: &str = include_str!("../data/lih.psum");

/// H2, 4 qubits.
pub fn h2() -> WeightedPauliSum {
    parse_pauli_sum(H2_PSUM).expect("bundled h2.psum parses")
}

/// LiH, 8 qubits.
pub fn lih() -> WeightedPauliSum {
    parse_pauli_sum(LIH_PSUM).expect("bundled lih.psum parses")
}

/// Looks up a bundled Hamiltonian by name (`h2` or `lih`).
pub fn bundled(name: &str) -> Result<WeightedPauliSum> {
    match name.to_ascii_lowercase().as_str() {
        "h2" => Ok(h2()),
        "lih" => Ok(lih()),
        other => Err(Error::Config(format!("unknown bundled hamiltonian {other:?}; expected h2 or lih"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::abs_coefficient_sum;

    #[test]
    fn qubit_counts() {
        assert_eq!(h2().n_qubits(), 4);
        assert_eq!(lih().n_qubits(), 8);
        assert!(bundled("H2").is_ok());
        assert!(bundled("beh2").is_err());
    }

    #[test]
    fn coefficient_magnitudes() {
        assert!((abs_coefficient_sum(&h2()) - 2.8787).abs() < 5e-4);
        assert!((abs_coefficient_sum(&lih()) - 7.0858).abs() < 5e-4);
    }
}
