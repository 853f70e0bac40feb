//! Hardware-efficient circuit templates.
//!
//! `TwoLocal` has `reps + 1` rotation layers (`RY` on every qubit, then `RZ`
//! on every qubit) with an entangling block of CX gates between consecutive
//! layers. Parameters are assigned layer-major, qubit-minor, RY before RZ:
//! layer `l` uses `theta[2nl .. 2nl + n]` for RY and `theta[2nl + n .. 2n(l+1)]`
//! for RZ. `RyLayer` is a single RY per qubit.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::{Gate, StateVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnsatzKind {
    TwoLocal,
    RyLayer,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Entanglement {
    /// CX chain q0 -> q1 -> ... -> q_{n-1}.
    #[default]
    Linear,
    /// CX on every pair `i < j`, in lexicographic order.
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub kind: AnsatzKind,
    pub n_qubits: usize,
    pub reps: usize,
    pub entanglement: Entanglement,
}

impl AnsatzSpec {
    pub fn two_local(n_qubits: usize, reps: usize) -> Self {
        Self { kind: AnsatzKind::TwoLocal, n_qubits, reps, entanglement: Entanglement::Linear }
    }

    pub fn ry_layer(n_qubits: usize) -> Self {
        Self { kind: AnsatzKind::RyLayer, n_qubits, reps: 0, entanglement: Entanglement::Linear }
    }

    pub fn with_entanglement(mut self, entanglement: Entanglement) -> Self {
        self.entanglement = entanglement;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 {
            return Err(Error::Config("ansatz needs at least one qubit".into()));
        }
        if self.kind == AnsatzKind::RyLayer && self.reps != 0 {
            return Err(Error::Config(format!("ry_layer takes reps = 0, got {}", self.reps)));
        }
        Ok(())
    }

    pub fn param_count(&self) -> usize {
        match self.kind {
            AnsatzKind::TwoLocal => 2 * self.n_qubits * (self.reps + 1),
            AnsatzKind::RyLayer => self.n_qubits,
        }
    }

    fn entangling_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n_qubits;
        match self.entanglement {
            Entanglement::Linear => (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
            Entanglement::Full => (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect(),
        }
    }

    pub fn gate_count(&self) -> usize {
        match self.kind {
            AnsatzKind::TwoLocal => self.param_count() + self.reps * self.entangling_pairs().len(),
            AnsatzKind::RyLayer => self.n_qubits,
        }
    }
}

/// Circuit angles in radians.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParameterVector(Vec<f64>);

impl ParameterVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.0)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }
}

impl Deref for ParameterVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for ParameterVector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

pub(crate) fn norm_sqr(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn check_theta(spec: &AnsatzSpec, theta: &[f64]) -> Result<()> {
    spec.validate()?;
    let expected = spec.param_count();
    if theta.len() != expected {
        return Err(Error::ParameterLength { expected, found: theta.len() });
    }
    if let Some(i) = theta.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteParameter(i));
    }
    Ok(())
}

pub fn build_circuit(spec: &AnsatzSpec, theta: &[f64]) -> Result<Vec<Gate>> {
    check_theta(spec, theta)?;
    let n = spec.n_qubits;
    let mut gates = Vec::with_capacity(spec.gate_count());
    match spec.kind {
        AnsatzKind::RyLayer => {
            gates.extend(theta.iter().enumerate().map(|(q, &angle)| Gate::Ry { qubit: q, angle }));
        }
        AnsatzKind::TwoLocal => {
            let pairs = spec.entangling_pairs();
            for layer in 0..=spec.reps {
                let block = &theta[2 * n * layer..2 * n * (layer + 1)];
                gates.extend((0..n).map(|q| Gate::Ry { qubit: q, angle: block[q] }));
                gates.extend((0..n).map(|q| Gate::Rz { qubit: q, angle: block[n + q] }));
                if layer < spec.reps {
                    gates.extend(pairs.iter().map(|&(control, target)| Gate::Cx { control, target }));
                }
            }
        }
    }
    Ok(gates)
}

/// `|0...0>` evolved through the circuit for `theta`.
pub fn prepare_state(spec: &AnsatzSpec, theta: &[f64]) -> Result<StateVector> {
    let mut state = StateVector::zero(spec.n_qubits)?;
    prepare_into(spec, theta, &mut state)?;
    Ok(state)
}

/// Like [`prepare_state`] but reuses `state`'s buffer.
pub fn prepare_into(spec: &AnsatzSpec, theta: &[f64], state: &mut StateVector) -> Result<()> {
    if state.n_qubits() != spec.n_qubits {
        return Err(Error::QubitMismatch { expected: spec.n_qubits, found: state.n_qubits() });
    }
    let gates = build_circuit(spec, theta)?;
    state.reset();
    state.apply_all(&gates)
}
