//! Elementary gates shared by the Clifford synthesizer and the simulators.

use std::fmt;

/// One gate from the `{H, S, CNOT}` set the Clifford synthesizer targets.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    S(usize),
    Cnot { control: usize, target: usize },
}

impl Gate {
    /// Largest qubit index the gate touches.
    pub fn max_qubit(&self) -> usize {
        match *self {
            Gate::H(q) | Gate::S(q) => q,
            Gate::Cnot { control, target } => control.max(target),
        }
    }

    /// Gates realizing the inverse, in application order.
    pub fn inverse(&self) -> [Option<Gate>; 3] {
        match *self {
            Gate::S(q) => [Some(Gate::S(q)), Some(Gate::S(q)), Some(Gate::S(q))],
            g => [Some(g), None, None],
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) => write!(f, "H {q}"),
            Gate::S(q) => write!(f, "S {q}"),
            Gate::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
        }
    }
}

/// Inverse of a gate sequence (reversed, with `S† = S³`).
pub fn inverse_circuit(gates: &[Gate]) -> Vec<Gate> {
    gates.iter().rev().flat_map(|g| g.inverse().into_iter().flatten()).collect()
}
