use std::fmt;

use serde::{Deserialize, Serialize};

use super::{PbpError, Var};

/// What a binary variable stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Role {
    /// Bit of the first factor with weight `2^index`.
    FactorP { index: u32 },
    /// Bit of the second factor with weight `2^index`.
    FactorQ { index: u32 },
    /// Carry bit, numbered from 1 in allocation order.
    Carry { index: u32 },
    /// Auxiliary variable standing for the product `left · right`.
    Ancilla { left: Var, right: Var },
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::FactorP { index } => write!(f, "p{index}"),
            Role::FactorQ { index } => write!(f, "q{index}"),
            Role::Carry { index } => write!(f, "c{index}"),
            Role::Ancilla { left, right } => write!(f, "{left}·{right}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegistryEntry {
    pub var: Var,
    pub role: Role,
    pub description: String,
}

/// Ordered variable table. Ids are handed out consecutively from 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableRegistry {
    entries: Vec<RegistryEntry>,
}

impl VariableRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, role: Role, description: impl Into<String>) -> Result<Var, PbpError> {
        let unordered_dup = |r: &Role| match (r, &role) {
            (Role::Ancilla { left: a, right: b }, Role::Ancilla { left: c, right: d }) => {
                (a, b) == (c, d) || (a, b) == (d, c)
            }
            (r, role) => r == role,
        };
        if self.entries.iter().any(|e| unordered_dup(&e.role)) {
            return Err(PbpError::DuplicateRole(role.to_string()));
        }
        let var = Var(self.entries.len() as u32 + 1);
        self.entries.push(RegistryEntry {
            var,
            role,
            description: description.into(),
        });
        Ok(var)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, var: Var) -> Option<&RegistryEntry> {
        self.entries.get(var.index())
    }

    pub fn entries(&self) -> &[RegistryEntry] {
        &self.entries
    }

    pub fn find(&self, role: Role) -> Option<Var> {
        self.entries.iter().find(|e| e.role == role).map(|e| e.var)
    }

    pub fn name(&self, var: Var) -> String {
        self.get(var)
            .map(|e| e.description.clone())
            .unwrap_or_else(|| var.to_string())
    }

    pub fn ancillas(&self) -> impl Iterator<Item = (Var, Var, Var)> + '_ {
        self.entries.iter().filter_map(|e| match e.role {
            Role::Ancilla { left, right } => Some((e.var, left, right)),
            _ => None,
        })
    }

    pub fn count_where(&self, pred: impl Fn(&Role) -> bool) -> usize {
        self.entries.iter().filter(|e| pred(&e.role)).count()
    }
}
