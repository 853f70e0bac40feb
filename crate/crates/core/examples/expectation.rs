//! Expectation values on the statevector simulator.

use std::f64::consts::FRAC_PI_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regvqe::statevector::{expectation, pauli_expectation};
use regvqe::{Gate, StateVector, WeightedPauliSum};

fn main() -> regvqe::Result<()> {
    // Bell state: H on qubit 0 is RY(π/2) up to a phase that <XX>, <ZZ> ignore
    let mut s = StateVector::zero(2)?;
    s.apply_all(&[Gate::Ry { qubit: 0, angle: FRAC_PI_2 }, Gate::Cx { control: 0, target: 1 }])?;
    for label in ["ZZ", "XX", "ZI", "YY"] {
        println!("<{label}> = {:+.6}", pauli_expectation(&s, &label.parse()?).re);
    }

    let h = WeightedPauliSum::from_labels(3, &[(0.7, "ZIZ"), (-0.2, "XXY"), (0.1, "IYI")])?;
    let random = StateVector::random(3, &mut ChaCha8Rng::seed_from_u64(5))?;
    println!("<H> on a random 3-qubit state = {:.12}", expectation(&random, &h)?);
    Ok(())
}
