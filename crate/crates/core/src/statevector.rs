//! Noiseless statevector simulation.
//!
//! Qubit 0 is the least-significant bit of the amplitude index, so the
//! basis state written `|q0 q1 ... q_{n-1}>` has index `Σ q_k 2^k`.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::num_fmt::g17;
use crate::pauli::{PauliString, WeightedPauliSum};

/// Largest register a statevector may hold (2^26 amplitudes, 1 GiB).
pub const MAX_STATE_QUBITS: usize = 26;
/// Dense diagonalization limit.
pub const MAX_DENSE_QUBITS: usize = 10;
/// Limit for any exact ground-energy computation.
pub const MAX_EXACT_QUBITS: usize = 16;

const IMAG_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    Ry { qubit: usize, angle: f64 },
    Rz { qubit: usize, angle: f64 },
    Cx { control: usize, target: usize },
}

impl Gate {
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let check = |index: usize| {
            if index >= n_qubits {
                Err(Error::QubitOutOfRange { index, n_qubits })
            } else {
                Ok(())
            }
        };
        match *self {
            Gate::Ry { qubit, .. } | Gate::Rz { qubit, .. } => check(qubit),
            Gate::Cx { control, target } => {
                check(control)?;
                check(target)?;
                if control == target {
                    return Err(Error::ControlIsTarget(control));
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_STATE_QUBITS {
            return Err(Error::TooManyQubits { n_qubits, limit: MAX_STATE_QUBITS, what: "statevectors" });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amplitudes })
    }

    /// Normalizes `amplitudes`; the length must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Config(format!("amplitude count {len} is not a power of two >= 2")));
        }
        let n_qubits = len.trailing_zeros() as usize;
        let mut state = Self { n_qubits, amplitudes };
        let norm = state.norm_sqr().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NonFinite);
        }
        state.amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(state)
    }

    /// Haar-ish random state: i.i.d. Gaussian amplitudes, normalized.
    pub fn random(n_qubits: usize, rng: &mut impl Rng) -> Result<Self> {
        let amps = (0..1usize << n_qubits)
            .map(|_| {
                let (a, b) = gaussian_pair(rng);
                Complex64::new(a, b)
            })
            .collect();
        Self::from_amplitudes(amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Resets to `|0...0>` without reallocating.
    pub fn reset(&mut self) {
        self.amplitudes.iter_mut().for_each(|a| *a = Complex64::new(0.0, 0.0));
        self.amplitudes[0] = Complex64::new(1.0, 0.0);
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        match *gate {
            Gate::Ry { qubit, angle } => self.apply_ry(qubit, angle),
            Gate::Rz { qubit, angle } => self.apply_rz(qubit, angle),
            Gate::Cx { control, target } => self.apply_cx(control, target),
        }
        Ok(())
    }

    pub fn apply_all<'a>(&mut self, gates: impl IntoIterator<Item = &'a Gate>) -> Result<()> {
        for g in gates {
            self.apply(g)?;
        }
        Ok(())
    }

    fn apply_ry(&mut self, qubit: usize, angle: f64) {
        let (s, c) = (angle / 2.0).sin_cos();
        let bit = 1usize << qubit;
        for i0 in (0..self.amplitudes.len()).filter(|i| i & bit == 0) {
            let i1 = i0 | bit;
            let a0 = self.amplitudes[i0];
            let a1 = self.amplitudes[i1];
            self.amplitudes[i0] = a0 * c - a1 * s;
            self.amplitudes[i1] = a0 * s + a1 * c;
        }
    }

    fn apply_rz(&mut self, qubit: usize, angle: f64) {
        let (s, c) = (angle / 2.0).sin_cos();
        let minus = Complex64::new(c, -s);
        let plus = Complex64::new(c, s);
        let bit = 1usize << qubit;
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            *a *= if i & bit == 0 { minus } else { plus };
        }
    }

    fn apply_cx(&mut self, control: usize, target: usize) {
        let cbit = 1usize << control;
        let tbit = 1usize << target;
        for i in 0..self.amplitudes.len() {
            if i & cbit != 0 && i & tbit == 0 {
                self.amplitudes.swap(i, i | tbit);
            }
        }
    }
}

/// Returns a copy of `state` with `gate` applied.
pub fn apply_gate(state: &StateVector, gate: &Gate) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

fn gaussian_pair(rng: &mut impl Rng) -> (f64, f64) {
    // Box-Muller
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let t = std::f64::consts::TAU * u2;
    (r * t.cos(), r * t.sin())
}

/// `i^k` for `k mod 4`.
fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `<psi|P|psi>` without building the operator.
///
/// `P|b> = i^{#Y} (-1)^{|b & z|} |b ^ x>`.
pub fn pauli_expectation(state: &StateVector, p: &PauliString) -> Complex64 {
    let amps = &state.amplitudes;
    let z = p.z_mask() as usize;
    let x = p.x_mask() as usize;
    if x == 0 {
        let v: f64 = amps
            .iter()
            .enumerate()
            .map(|(b, a)| if (b & z).count_ones() % 2 == 0 { a.norm_sqr() } else { -a.norm_sqr() })
            .sum();
        return Complex64::new(v, 0.0);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (b, a) in amps.iter().enumerate() {
        let term = amps[b ^ x].conj() * a;
        if (b & z).count_ones() % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc * i_pow(p.y_count())
}

/// `Σ c_i <psi|P_i|psi>`, rejecting a non-negligible imaginary part.
pub fn expectation(state: &StateVector, h: &WeightedPauliSum) -> Result<f64> {
    if state.n_qubits != h.n_qubits() {
        return Err(Error::QubitMismatch { expected: h.n_qubits(), found: state.n_qubits });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (c, p) in h.terms() {
        acc += pauli_expectation(state, p) * *c;
    }
    if acc.im.abs() >= IMAG_TOLERANCE {
        return Err(Error::NonHermitian(acc.im));
    }
    Ok(acc.re)
}

/// `out = H v` over the full 2^n space.
pub fn apply_hamiltonian(h: &WeightedPauliSum, v: &[Complex64], out: &mut [Complex64]) {
    out.iter_mut().for_each(|o| *o = Complex64::new(0.0, 0.0));
    for (c, p) in h.terms() {
        let x = p.x_mask() as usize;
        let z = p.z_mask() as usize;
        let phase = i_pow(p.y_count()) * *c;
        for (b, a) in v.iter().enumerate() {
            let sign = if (b & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            out[b ^ x] += phase * *a * sign;
        }
    }
}

/// Diagonal entry `<b|H|b>` of a Z/I-only operator.
fn diagonal_entry(h: &WeightedPauliSum, b: usize) -> f64 {
    h.terms()
        .iter()
        .map(|(c, p)| if (b & p.z_mask() as usize).count_ones() % 2 == 0 { *c } else { -*c })
        .sum()
}

/// Minimum diagonal entry, streamed over the basis.
pub fn ground_energy_diagonal(h: &WeightedPauliSum) -> Result<f64> {
    if !h.is_diagonal() {
        return Err(Error::Config("operator has off-diagonal terms".into()));
    }
    limit(h.n_qubits(), MAX_EXACT_QUBITS, "diagonal ground energies")?;
    Ok((0..1usize << h.n_qubits()).map(|b| diagonal_entry(h, b)).fold(f64::INFINITY, f64::min))
}

/// Dense `2^n x 2^n` matrix of `h`.
pub fn dense_matrix(h: &WeightedPauliSum) -> Result<DMatrix<Complex64>> {
    limit(h.n_qubits(), MAX_DENSE_QUBITS, "dense matrices")?;
    let dim = 1usize << h.n_qubits();
    let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for (c, p) in h.terms() {
        let x = p.x_mask() as usize;
        let z = p.z_mask() as usize;
        let phase = i_pow(p.y_count()) * *c;
        for b in 0..dim {
            let sign = if (b & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            m[(b ^ x, b)] += phase * sign;
        }
    }
    Ok(m)
}

/// Smallest eigenvalue by dense Hermitian diagonalization.
pub fn ground_energy_dense(h: &WeightedPauliSum) -> Result<f64> {
    let m = dense_matrix(h)?;
    let eig = m.symmetric_eigenvalues();
    Ok(eig.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Settings for the restarted Lanczos solver.
#[derive(Clone, Copy, Debug)]
pub struct LanczosOptions {
    pub krylov_dim: usize,
    pub max_restarts: usize,
    pub rel_tolerance: f64,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self { krylov_dim: 60, max_restarts: 200, rel_tolerance: 1e-10, seed: 0x5eed }
    }
}

/// Smallest eigenvalue by explicitly restarted Lanczos with full
/// reorthogonalization. Matrix-free; memory is `krylov_dim` vectors.
pub fn ground_energy_lanczos(h: &WeightedPauliSum, opts: &LanczosOptions) -> Result<f64> {
    limit(h.n_qubits(), MAX_EXACT_QUBITS, "Lanczos ground energies")?;
    let dim = 1usize << h.n_qubits();
    let m = opts.krylov_dim.min(dim).max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut start: Vec<Complex64> = (0..dim)
        .map(|_| {
            let (a, b) = gaussian_pair(&mut rng);
            Complex64::new(a, b)
        })
        .collect();
    normalize(&mut start);

    let mut w = vec![Complex64::new(0.0, 0.0); dim];
    let mut previous = f64::INFINITY;
    for _ in 0..opts.max_restarts {
        let mut basis: Vec<Vec<Complex64>> = vec![start.clone()];
        let mut alpha = Vec::with_capacity(m);
        let mut beta: Vec<f64> = Vec::with_capacity(m);
        for j in 0..m {
            apply_hamiltonian(h, &basis[j], &mut w);
            let a = dot(&basis[j], &w).re;
            alpha.push(a);
            // full reorthogonalization, twice for stability
            for _ in 0..2 {
                for q in &basis {
                    let proj = dot(q, &w);
                    w.iter_mut().zip(q).for_each(|(wi, qi)| *wi -= qi * proj);
                }
            }
            let b = norm(&w);
            if j + 1 == m || b < 1e-12 {
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|x| x / b).collect());
        }
        let k = alpha.len();
        let mut t = DMatrix::<f64>::zeros(k, k);
        for i in 0..k {
            t[(i, i)] = alpha[i];
            if i + 1 < k {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let eig = SymmetricEigen::new(t);
        let (idx, theta) = eig
            .eigenvalues
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
        let coeffs: DVector<f64> = eig.eigenvectors.column(idx).into_owned();
        let mut ritz = vec![Complex64::new(0.0, 0.0); dim];
        for (q, c) in basis.iter().zip(coeffs.iter()) {
            ritz.iter_mut().zip(q).for_each(|(r, qi)| *r += qi * *c);
        }
        normalize(&mut ritz);
        apply_hamiltonian(h, &ritz, &mut w);
        let residual: f64 =
            w.iter().zip(&ritz).map(|(hw, r)| (hw - r * theta).norm_sqr()).sum::<f64>().sqrt();
        let scale = theta.abs().max(1.0);
        // eigenvalue error scales as residual^2 / gap
        let converged = k < m
            || residual / scale < opts.rel_tolerance
            || ((theta - previous).abs() / scale < opts.rel_tolerance
                && residual / scale < opts.rel_tolerance.sqrt());
        if converged {
            return Ok(theta);
        }
        previous = theta;
        start = ritz;
    }
    Err(Error::NoConvergence(opts.max_restarts))
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(a: &mut [Complex64]) {
    let n = norm(a);
    a.iter_mut().for_each(|x| *x /= n);
}

fn limit(n_qubits: usize, limit: usize, what: &'static str) -> Result<()> {
    if n_qubits > limit {
        return Err(Error::TooManyQubits { n_qubits, limit, what });
    }
    Ok(())
}

/// Exact ground energy: streamed diagonal minimum for Z/I-only operators,
/// dense diagonalization up to 10 qubits, Lanczos up to 16.
pub fn exact_ground_energy(h: &WeightedPauliSum) -> Result<f64> {
    limit(h.n_qubits(), MAX_EXACT_QUBITS, "exact ground energies")?;
    if h.is_diagonal() {
        ground_energy_diagonal(h)
    } else if h.n_qubits() <= MAX_DENSE_QUBITS {
        ground_energy_dense(h)
    } else {
        ground_energy_lanczos(h, &LanczosOptions::default())
    }
}

/// Ground energies keyed by Hamiltonian content hash, optionally persisted
/// as `<hash>.gse` files holding one decimal value.
#[derive(Debug, Default)]
pub struct GroundEnergyCache {
    dir: Option<PathBuf>,
    memory: Mutex<HashMap<String, f64>>,
}

impl GroundEnergyCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    pub fn on_disk(dir: impl Into<PathBuf>) -> Self {
        Self { dir: Some(dir.into()), memory: Mutex::default() }
    }

    fn path_for(dir: &Path, hash: &str) -> PathBuf {
        dir.join(format!("{hash}.gse"))
    }

    pub fn get(&self, h: &WeightedPauliSum) -> Result<f64> {
        let hash = h.content_hash();
        if let Some(v) = self.memory.lock().expect("cache lock").get(&hash) {
            return Ok(*v);
        }
        if let Some(dir) = &self.dir {
            let path = Self::path_for(dir, &hash);
            if let Ok(text) = fs::read_to_string(&path) {
                let v: f64 = text.trim().parse().map_err(|_| Error::Store {
                    path: path.clone(),
                    message: format!("not a decimal value: {:?}", text.trim()),
                })?;
                self.memory.lock().expect("cache lock").insert(hash, v);
                return Ok(v);
            }
        }
        let v = exact_ground_energy(h)?;
        if let Some(dir) = &self.dir {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            let path = Self::path_for(dir, &hash);
            fs::write(&path, format!("{}\n", g17(v))).map_err(|e| Error::io(&path, e))?;
        }
        self.memory.lock().expect("cache lock").insert(hash, v);
        Ok(v)
    }
}
