//! Pauli operators on an N-qubit register, collective decoupling operators and
//! XXZ two-body terms.
//!
//! Qubits are indexed from 1; qubit 1 is the leftmost tensor factor.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, ComplexMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PauliAxis {
    I,
    X,
    Y,
    Z,
}

impl PauliAxis {
    /// The three nontrivial axes in `x, y, z` order.
    pub const XYZ: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];
    /// The decoupling group in cycle order.
    pub const GROUP: [PauliAxis; 4] = [PauliAxis::I, PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    pub fn matrix(self) -> ComplexMatrix {
        let (o, l, i) = (c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 1.0));
        let rows = match self {
            PauliAxis::I => [[l, o], [o, l]],
            PauliAxis::X => [[o, l], [l, o]],
            PauliAxis::Y => [[o, -i], [i, o]],
            PauliAxis::Z => [[l, o], [o, -l]],
        };
        ComplexMatrix::from_fn(2, |r, c| rows[r][c])
    }
}

impl fmt::Display for PauliAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PauliAxis::I => "I",
            PauliAxis::X => "X",
            PauliAxis::Y => "Y",
            PauliAxis::Z => "Z",
        };
        f.write_str(s)
    }
}

/// An `n`-qubit register.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Register {
    n_qubits: usize,
}

impl Register {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits < 2 {
            return Err(Error::InvalidArgument(format!(
                "register needs at least 2 qubits, got {n_qubits}"
            )));
        }
        Ok(Self { n_qubits })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }
}

fn check_index(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        Err(Error::IndexOutOfRange { index: k, n })
    } else {
        Ok(())
    }
}

fn tensor_product(factors: impl IntoIterator<Item = ComplexMatrix>) -> ComplexMatrix {
    factors
        .into_iter()
        .reduce(|acc, f| acc.kron(&f))
        .expect("at least one tensor factor")
}

/// `σ^axis` on qubit `k` (1-based) of an `n`-qubit register.
pub fn pauli_on(axis: PauliAxis, k: usize, n: usize) -> Result<ComplexMatrix> {
    check_index(k, n)?;
    Ok(tensor_product((1..=n).map(|q| {
        if q == k {
            axis.matrix()
        } else {
            PauliAxis::I.matrix()
        }
    })))
}

/// `⊗_k σ^axis_k` over the whole register.
pub fn collective_pauli(axis: PauliAxis, n: usize) -> ComplexMatrix {
    assert!(n >= 1, "register must hold at least one qubit");
    tensor_product((0..n).map(|_| axis.matrix()))
}

/// `jx (σx_k σx_l + σy_k σy_l) + jz σz_k σz_l`
pub fn xxz_term(k: usize, l: usize, jx: f64, jz: f64, n: usize) -> Result<ComplexMatrix> {
    check_index(k, n)?;
    check_index(l, n)?;
    if k >= l {
        return Err(Error::RequireKLessL { k, l });
    }
    let pair = |axis| -> Result<ComplexMatrix> { Ok(pauli_on(axis, k, n)? * pauli_on(axis, l, n)?) };
    let flip_flop = pair(PauliAxis::X)? + pair(PauliAxis::Y)?;
    Ok(flip_flop.scale_real(jx) + pair(PauliAxis::Z)?.scale_real(jz))
}
