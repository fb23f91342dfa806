//! Factorization cost functions.
//!
//! Two encodings are provided: the direct method, which squares `n − p·q`
//! over the unknown factor bits, and the block multiplication-table method,
//! which splits the long multiplication into column blocks joined by carry
//! registers.

mod direct;
mod estimate;
mod table;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pbp::{PbpError, PseudoBooleanPolynomial, Role, VariableRegistry};

pub use direct::{encode_direct, encode_direct_with};
pub use estimate::{candidate_lengths, direct_qubit_bound, estimate_qubits, rough_qubit_estimate};
pub use table::{
    build_block_system, encode_table, Block, BlockLayout, BlockSystem, BlockWidths, CarryBit,
    CellTerm, Column,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Direct,
    Table,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Direct => "direct",
            Method::Table => "table",
        })
    }
}

/// Bit lengths of the two factors and whether their leading bits are pinned to 1.
/// Trailing bits are always 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorLayout {
    pub l1: u32,
    pub l2: u32,
    pub fixed_leading: bool,
}

impl FactorLayout {
    /// Bit positions of `p` that are unknown.
    pub fn p_positions(&self) -> std::ops::Range<u32> {
        1..self.unknown_top(self.l1)
    }

    pub fn q_positions(&self) -> std::ops::Range<u32> {
        1..self.unknown_top(self.l2)
    }

    fn unknown_top(&self, len: u32) -> u32 {
        if self.fixed_leading {
            len - 1
        } else {
            len
        }
    }

    pub fn factor_bit_count(&self) -> usize {
        self.p_positions().len() + self.q_positions().len()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error("{0} is even; factors are encoded with a trailing 1 bit")]
    EvenInput(BigUint),
    #[error("{0} is too small to factor (need an odd composite of at least 9)")]
    InputTooSmall(BigUint),
    #[error("factor lengths must be at least 2 bits (got {l1} and {l2})")]
    LengthTooSmall { l1: u32, l2: u32 },
    #[error("block layout does not fit the multiplication table: {0}")]
    WidthMismatch(String),
    #[error(transparent)]
    Polynomial(#[from] PbpError),
}

/// A cost polynomial together with the meaning of its variables.
///
/// For any assignment encoding `p·q = n` (and, for the table method,
/// consistent carries) the polynomial is 0; it is strictly positive otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostFunction {
    pub polynomial: PseudoBooleanPolynomial,
    pub registry: VariableRegistry,
    pub method: Method,
    pub n: BigUint,
    pub layout: FactorLayout,
}

impl CostFunction {
    pub fn var_count(&self) -> usize {
        self.registry.len()
    }

    pub fn carry_count(&self) -> usize {
        self.registry
            .count_where(|r| matches!(r, Role::Carry { .. }))
    }

    pub fn ancilla_count(&self) -> usize {
        self.registry
            .count_where(|r| matches!(r, Role::Ancilla { .. }))
    }
}

pub(crate) fn check_input(n: &BigUint, l1: u32, l2: u32) -> Result<(), EncodeError> {
    if n.bit(0) {
        if *n < BigUint::from(9u32) {
            return Err(EncodeError::InputTooSmall(n.clone()));
        }
    } else {
        return Err(EncodeError::EvenInput(n.clone()));
    }
    if l1 < 2 || l2 < 2 {
        return Err(EncodeError::LengthTooSmall { l1, l2 });
    }
    Ok(())
}
