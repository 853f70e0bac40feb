//! Dense-matrix oracles and random instance generators shared by the
//! integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use regvqe::ansatz::build_circuit;
use regvqe::{AnsatzSpec, Gate, PauliString, StateVector, WeightedPauliSum};

pub type CMatrix = DMatrix<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_2x2(letter: char) -> CMatrix {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match letter {
        'I' => CMatrix::from_row_slice(2, 2, &[one, z, z, one]),
        'X' => CMatrix::from_row_slice(2, 2, &[z, one, one, z]),
        'Y' => CMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        'Z' => CMatrix::from_row_slice(2, 2, &[one, z, z, -one]),
        _ => panic!("bad letter {letter}"),
    }
}

/// `A_{n-1} ⊗ … ⊗ A_0`, so that qubit 0 is the least-significant index bit.
pub fn kron_lsb_first(factors: &[CMatrix]) -> CMatrix {
    factors.iter().rev().fold(CMatrix::identity(1, 1), |acc, f| acc.kronecker(f))
}

pub fn dense_pauli(label: &str) -> CMatrix {
    let factors: Vec<CMatrix> = label.chars().map(pauli_2x2).collect();
    kron_lsb_first(&factors)
}

pub fn dense_hamiltonian(h: &WeightedPauliSum) -> CMatrix {
    let dim = 1usize << h.n_qubits();
    let mut m = CMatrix::zeros(dim, dim);
    for (coef, p) in h.terms() {
        m += dense_pauli(&p.label()) * c(*coef, 0.0);
    }
    m
}

pub fn dense_gate(gate: &Gate, n: usize) -> CMatrix {
    let one_qubit = |q: usize, u: CMatrix| {
        let factors: Vec<CMatrix> = (0..n).map(|k| if k == q { u.clone() } else { pauli_2x2('I') }).collect();
        kron_lsb_first(&factors)
    };
    match *gate {
        Gate::Ry { qubit, angle } => {
            let (s, co) = (angle / 2.0).sin_cos();
            one_qubit(qubit, CMatrix::from_row_slice(2, 2, &[c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)]))
        }
        Gate::Rz { qubit, angle } => {
            let e = Complex64::from_polar(1.0, angle / 2.0);
            one_qubit(qubit, CMatrix::from_row_slice(2, 2, &[e.conj(), c(0.0, 0.0), c(0.0, 0.0), e]))
        }
        Gate::Cx { control, target } => {
            let dim = 1usize << n;
            let mut m = CMatrix::zeros(dim, dim);
            for b in 0..dim {
                let out = if b >> control & 1 == 1 { b ^ (1 << target) } else { b };
                m[(out, b)] = c(1.0, 0.0);
            }
            m
        }
    }
}

pub fn to_dvector(state: &StateVector) -> DVector<Complex64> {
    DVector::from_column_slice(state.amplitudes())
}

pub fn dense_expectation(state: &StateVector, h: &WeightedPauliSum) -> Complex64 {
    let v = to_dvector(state);
    (v.adjoint() * dense_hamiltonian(h) * &v)[(0, 0)]
}

/// `|ψ(θ)>` as a product of dense gate matrices applied to `|0…0>`.
pub fn dense_prepare(spec: &AnsatzSpec, theta: &[f64]) -> DVector<Complex64> {
    let dim = 1usize << spec.n_qubits;
    let mut v = DVector::from_element(dim, c(0.0, 0.0));
    v[0] = c(1.0, 0.0);
    for g in build_circuit(spec, theta).unwrap() {
        v = dense_gate(&g, spec.n_qubits) * v;
    }
    v
}

pub fn random_label(n: usize, rng: &mut impl Rng) -> String {
    (0..n).map(|_| ['I', 'X', 'Y', 'Z'][rng.random_range(0..4)]).collect()
}

pub fn random_hamiltonian(n: usize, terms: usize, rng: &mut impl Rng) -> WeightedPauliSum {
    let t: Vec<(f64, PauliString)> = (0..terms)
        .map(|_| (rng.random_range(-1.0..1.0), random_label(n, rng).parse().unwrap()))
        .collect();
    WeightedPauliSum::new(n, t).unwrap()
}

pub fn random_diagonal(n: usize, terms: usize, rng: &mut impl Rng) -> WeightedPauliSum {
    let t: Vec<(f64, PauliString)> = (0..terms)
        .map(|_| {
            let label: String = (0..n).map(|_| if rng.random_bool(0.5) { 'Z' } else { 'I' }).collect();
            (rng.random_range(-1.0..1.0), label.parse().unwrap())
        })
        .collect();
    WeightedPauliSum::new(n, t).unwrap()
}

pub fn random_theta(len: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..len).map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)).collect()
}

/// Smallest eigenvalue of a Hermitian matrix through the real symmetric
/// embedding `[[A, -B], [B, A]]`, whose spectrum is that of `A + iB` doubled.
pub fn dense_ground_energy(h: &WeightedPauliSum) -> f64 {
    let m = dense_hamiltonian(h);
    let d = m.nrows();
    let mut real = DMatrix::<f64>::zeros(2 * d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            let z = m[(i, j)];
            real[(i, j)] = z.re;
            real[(i + d, j + d)] = z.re;
            real[(i, j + d)] = -z.im;
            real[(i + d, j)] = z.im;
        }
    }
    real.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}
