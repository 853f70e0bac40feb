//! Energy, L2²-regularized objective, and the λ schedule.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::ansatz::{build_circuit, norm_sqr, AnsatzSpec};
use crate::error::{Error, Result};
use crate::optimizers::Problem;
use crate::pauli::WeightedPauliSum;
use crate::statevector::{expectation, StateVector};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    /// `λ(t) = (λ0/2)(1 + cos(πt/T_A))`, zero for `t >= T_A`.
    #[default]
    Cosine,
    /// `λ(t) = λ0` for `t < T_A`, zero afterwards.
    Constant,
    /// `λ(t) = 0`.
    Off,
}

/// Stage-A regularization strength as a function of the optimizer iteration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub kind: ScheduleKind,
    pub lambda0: f64,
    pub t_a: usize,
}

impl Schedule {
    pub fn cosine(lambda0: f64, t_a: usize) -> Self {
        Self { kind: ScheduleKind::Cosine, lambda0, t_a }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda0.is_finite() && self.lambda0 >= 0.0) {
            return Err(Error::Config(format!("lambda0 must be finite and >= 0, got {}", self.lambda0)));
        }
        if self.t_a == 0 {
            return Err(Error::Config("schedule horizon t_a must be positive".into()));
        }
        Ok(())
    }

    pub fn lambda_at(&self, t: i64) -> Result<f64> {
        if t < 0 {
            return Err(Error::InvalidTime(t));
        }
        let t = t as usize;
        if t >= self.t_a {
            return Ok(0.0);
        }
        Ok(match self.kind {
            ScheduleKind::Off => 0.0,
            ScheduleKind::Constant => self.lambda0,
            ScheduleKind::Cosine => {
                let frac = t as f64 / self.t_a as f64;
                (0.5 * self.lambda0 * (1.0 + (PI * frac).cos())).max(0.0)
            }
        })
    }

    /// Infallible lookup for non-negative iteration indices.
    pub(crate) fn at_iteration(&self, t: usize) -> f64 {
        self.lambda_at(t as i64).expect("non-negative iteration")
    }
}

/// Central-difference gradient of `f` at `theta`.
pub fn finite_difference_gradient<F>(mut f: F, theta: &[f64], step: f64) -> Result<Vec<f64>>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Config(format!("finite-difference step must be positive, got {step}")));
    }
    let mut x = theta.to_vec();
    let mut grad = Vec::with_capacity(theta.len());
    for k in 0..theta.len() {
        x[k] = theta[k] + step;
        let plus = f(&x)?;
        x[k] = theta[k] - step;
        let minus = f(&x)?;
        x[k] = theta[k];
        grad.push((plus - minus) / (2.0 * step));
    }
    Ok(grad)
}

/// `E + λ‖θ‖²`.
pub fn penalized(energy: f64, lambda: f64, theta: &[f64]) -> f64 {
    energy + lambda * norm_sqr(theta)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradientMethod {
    #[default]
    ParameterShift,
    FiniteDifference,
}

/// Energy landscape `E(θ) = <ψ(θ)|H|ψ(θ)>` for one ansatz and Hamiltonian,
/// with an evaluation counter and the current penalty strength.
#[derive(Debug)]
pub struct Objective {
    hamiltonian: Arc<WeightedPauliSum>,
    spec: AnsatzSpec,
    lambda: f64,
    gradient_method: GradientMethod,
    fd_step: f64,
    evals: u64,
    scratch: StateVector,
}

impl Objective {
    pub fn new(hamiltonian: Arc<WeightedPauliSum>, spec: AnsatzSpec) -> Result<Self> {
        spec.validate()?;
        if hamiltonian.n_qubits() != spec.n_qubits {
            return Err(Error::QubitMismatch { expected: hamiltonian.n_qubits(), found: spec.n_qubits });
        }
        let scratch = StateVector::zero(spec.n_qubits)?;
        Ok(Self {
            hamiltonian,
            spec,
            lambda: 0.0,
            gradient_method: GradientMethod::ParameterShift,
            fd_step: 1e-5,
            evals: 0,
            scratch,
        })
    }

    pub fn with_gradient(mut self, method: GradientMethod, fd_step: f64) -> Self {
        self.gradient_method = method;
        self.fd_step = fd_step;
        self
    }

    pub fn spec(&self) -> &AnsatzSpec {
        &self.spec
    }

    pub fn hamiltonian(&self) -> &WeightedPauliSum {
        &self.hamiltonian
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn set_lambda(&mut self, lambda: f64) -> Result<()> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::Config(format!("lambda must be finite and >= 0, got {lambda}")));
        }
        self.lambda = lambda;
        Ok(())
    }

    pub fn eval_count(&self) -> u64 {
        self.evals
    }

    pub fn energy(&mut self, theta: &[f64]) -> Result<f64> {
        let gates = build_circuit(&self.spec, theta)?;
        self.scratch.reset();
        self.scratch.apply_all(&gates)?;
        self.evals += 1;
        expectation(&self.scratch, &self.hamiltonian)
    }

    pub fn regularized_objective(&mut self, theta: &[f64]) -> Result<f64> {
        let e = self.energy(theta)?;
        Ok(penalized(e, self.lambda, theta))
    }

    /// `∂E/∂θ_k = [E(θ + π/2 e_k) − E(θ − π/2 e_k)] / 2`; exact for the
    /// single-parameter RY/RZ gates every ansatz uses. Costs `2P` energies.
    pub fn parameter_shift_gradient(&mut self, theta: &[f64]) -> Result<Vec<f64>> {
        let mut x = theta.to_vec();
        let mut grad = Vec::with_capacity(theta.len());
        for k in 0..theta.len() {
            x[k] = theta[k] + FRAC_PI_2;
            let plus = self.energy(&x)?;
            x[k] = theta[k] - FRAC_PI_2;
            let minus = self.energy(&x)?;
            x[k] = theta[k];
            grad.push(0.5 * (plus - minus));
        }
        Ok(grad)
    }

    pub fn finite_difference_gradient(&mut self, theta: &[f64], step: f64) -> Result<Vec<f64>> {
        finite_difference_gradient(|x| self.energy(x), theta, step)
    }

    /// Gradient of the raw energy with the configured method.
    pub fn energy_gradient(&mut self, theta: &[f64]) -> Result<Vec<f64>> {
        match self.gradient_method {
            GradientMethod::ParameterShift => self.parameter_shift_gradient(theta),
            GradientMethod::FiniteDifference => self.finite_difference_gradient(theta, self.fd_step),
        }
    }

    /// Gradient of `E + λ‖θ‖²`.
    pub fn gradient(&mut self, theta: &[f64]) -> Result<Vec<f64>> {
        let mut g = self.energy_gradient(theta)?;
        g.iter_mut().zip(theta).for_each(|(gk, t)| *gk += 2.0 * self.lambda * t);
        Ok(g)
    }
}

/// The optimizers see the raw energy; the penalty is applied on their side
/// so its value and gradient cost no circuit evaluations.
impl Problem for Objective {
    fn value(&mut self, x: &[f64]) -> Result<f64> {
        self.energy(x)
    }

    fn gradient(&mut self, x: &[f64], grad: &mut [f64]) -> Result<()> {
        let g = self.energy_gradient(x)?;
        grad.copy_from_slice(&g);
        Ok(())
    }

    fn evals(&self) -> u64 {
        self.evals
    }

    fn gradient_cost(&self, dim: usize) -> u64 {
        2 * dim as u64
    }

    fn set_penalty(&mut self, lambda: f64) {
        self.lambda = lambda;
    }
}
