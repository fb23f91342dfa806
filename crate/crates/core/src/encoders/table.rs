//! Block multiplication-table encoding.
//!
//! The long multiplication of `p = (1 p_{l1-2} … p_1 1)` by
//! `q = (1 q_{l2-2} … q_1 1)` is laid out column by column. Columns are grouped
//! into blocks; each block must reproduce the matching slice of `n` up to a
//! carry register that is passed on to higher columns. The cost is the sum
//! of squared block residuals.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{check_input, CostFunction, EncodeError, FactorLayout, Method};
use crate::pbp::{Half, Monomial, PseudoBooleanPolynomial, Role, Var, VariableRegistry};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockWidths {
    /// Blocks of this many columns until the table is covered.
    Uniform(u32),
    /// Widths from column 1 upwards. The last block also absorbs every
    /// remaining column of the table.
    Explicit(Vec<u32>),
}

/// How to divide the columns, and optionally how many carry bits each
/// non-final block passes on. Without explicit carry widths the register is
/// sized for the largest possible block sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockLayout {
    pub widths: BlockWidths,
    pub carry_widths: Option<Vec<u32>>,
}

impl BlockLayout {
    pub fn uniform(width: u32) -> Self {
        BlockLayout {
            widths: BlockWidths::Uniform(width),
            carry_widths: None,
        }
    }

    pub fn explicit(widths: Vec<u32>) -> Self {
        BlockLayout {
            widths: BlockWidths::Explicit(widths),
            carry_widths: None,
        }
    }

    pub fn with_carry_widths(mut self, carry_widths: Vec<u32>) -> Self {
        self.carry_widths = Some(carry_widths);
        self
    }

    /// Built-in layouts for 143, 59989 and 376289, as `(l1, l2, layout)`.
    pub fn preset(n: &BigUint) -> Option<(u32, u32, BlockLayout)> {
        let n: u64 = n.try_into().ok()?;
        match n {
            143 => Some((4, 4, BlockLayout::explicit(vec![2, 2, 3]))),
            59989 => Some((8, 8, BlockLayout::explicit(vec![3, 3, 3, 3, 3]))),
            // The 376289 table uses narrower carry registers than the
            // worst-case block sums call for; the true carries still fit.
            376289 => Some((
                10,
                10,
                BlockLayout::explicit(vec![4, 3, 3, 3, 3, 2])
                    .with_carry_widths(vec![2, 3, 4, 3, 2]),
            )),
            _ => None,
        }
    }

    /// The preset when `n` has one for these lengths, otherwise 3-column blocks.
    pub fn default_for(n: &BigUint, l1: u32, l2: u32) -> BlockLayout {
        match BlockLayout::preset(n) {
            Some((a, b, layout)) if (a, b) == (l1, l2) => layout,
            _ => BlockLayout::uniform(3),
        }
    }
}

/// One entry of a multiplication-table column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CellTerm {
    One,
    Bit { var: Var },
    Product { p: Var, q: Var },
    Carry { var: Var },
}

impl CellTerm {
    fn polynomial(&self) -> PseudoBooleanPolynomial {
        match self {
            CellTerm::One => PseudoBooleanPolynomial::constant(1),
            CellTerm::Bit { var } | CellTerm::Carry { var } => PseudoBooleanPolynomial::var(*var),
            CellTerm::Product { p, q } => {
                let mut out = PseudoBooleanPolynomial::zero();
                out.add_term(Monomial::new([*p, *q]), &Half::from_int(1));
                out
            }
        }
    }

    fn label(&self, registry: &VariableRegistry) -> String {
        match self {
            CellTerm::One => "1".to_string(),
            CellTerm::Bit { var } | CellTerm::Carry { var } => registry.name(*var),
            CellTerm::Product { p, q } => format!("{}{}", registry.name(*p), registry.name(*q)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub power: u32,
    /// Partial products (one per row, in row order) followed by incoming carries.
    pub terms: Vec<CellTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CarryBit {
    pub var: Var,
    pub column: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub start: u32,
    pub width: u32,
    pub target: BigUint,
    pub carries_out: Vec<CarryBit>,
}

impl Block {
    pub fn columns(&self) -> std::ops::Range<u32> {
        self.start..self.start + self.width
    }
}

/// The divided multiplication table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSystem {
    pub n: BigUint,
    pub l1: u32,
    pub l2: u32,
    pub registry: VariableRegistry,
    /// Indexed by power of two; column 0 is the fixed `1·1` and belongs to no block.
    pub columns: Vec<Column>,
    pub blocks: Vec<Block>,
}

impl BlockSystem {
    pub fn carry_count(&self) -> usize {
        self.blocks.iter().map(|b| b.carries_out.len()).sum()
    }

    pub fn factor_bit_count(&self) -> usize {
        (self.l1 as usize - 2) + (self.l2 as usize - 2)
    }

    pub fn targets(&self) -> Vec<BigUint> {
        self.blocks.iter().map(|b| b.target.clone()).collect()
    }

    /// Residual `Σ 2^(c−start)·column_c − target − Σ 2^(col−start)·carry_out` of one block.
    pub fn block_residual(&self, block: &Block) -> PseudoBooleanPolynomial {
        let mut expr = PseudoBooleanPolynomial::zero();
        for c in block.columns() {
            let weight = BigInt::from(1) << (c - block.start);
            if let Some(col) = self.columns.get(c as usize) {
                for cell in &col.terms {
                    expr = &expr + &cell.polynomial().scale(&weight);
                }
            }
        }
        expr.add_term(
            Monomial::constant(),
            &-Half::from_int(BigInt::from(block.target.clone())),
        );
        for carry in &block.carries_out {
            let weight = BigInt::from(1) << (carry.column - block.start);
            expr.add_term(Monomial::new([carry.var]), &-Half::from_int(weight));
        }
        expr
    }

    /// Bits (indexed by [`Var::index`]) for the factors `p` and `q` with every
    /// carry register set to the overflow of its block. `None` when a factor
    /// does not have the table's length, or an overflow is negative, not a
    /// whole multiple of the block size, or too wide for its register.
    pub fn assignment_for(&self, p: &BigUint, q: &BigUint) -> Option<Vec<bool>> {
        let fits = |f: &BigUint, len: u32| f.bits() == len as u64 && f.bit(0);
        if !fits(p, self.l1) || !fits(q, self.l2) {
            return None;
        }
        let mut bits = vec![false; self.registry.len()];
        for e in self.registry.entries() {
            match e.role {
                Role::FactorP { index } => bits[e.var.index()] = p.bit(index as u64),
                Role::FactorQ { index } => bits[e.var.index()] = q.bit(index as u64),
                _ => {}
            }
        }
        for block in &self.blocks {
            if block.carries_out.is_empty() {
                continue;
            }
            let overflow = self.block_residual(block).evaluate_bits(&bits).ok()?;
            if !overflow.is_integer() {
                return None;
            }
            let unit = BigInt::from(1) << block.width;
            let value: BigInt = overflow.twice() / 2;
            if value.sign() == num_bigint::Sign::Minus || !(&value % &unit).is_zero() {
                return None;
            }
            let k = (value / unit).to_biguint()?;
            if k.bits() > block.carries_out.len() as u64 {
                return None;
            }
            for (i, carry) in block.carries_out.iter().enumerate() {
                bits[carry.var.index()] = k.bit(i as u64);
            }
        }
        Some(bits)
    }

    /// JSON document laid out like a printed multiplication table.
    pub fn to_document(&self) -> Value {
        let name = |v: Var| self.registry.name(v);
        let columns: Vec<Value> = self
            .columns
            .iter()
            .map(|c| {
                let terms: Vec<String> = c.terms.iter().map(|t| t.label(&self.registry)).collect();
                json!({ "power": c.power, "terms": terms })
            })
            .collect();
        let blocks: Vec<Value> = self
            .blocks
            .iter()
            .map(|b| {
                json!({
                    "columns": [b.start, b.start + b.width - 1],
                    "width": b.width,
                    "target": b.target.to_string(),
                    "carries_out": b.carries_out.iter().map(|c| name(c.var)).collect::<Vec<_>>(),
                })
            })
            .collect();
        let carries: Vec<Value> = self
            .blocks
            .iter()
            .enumerate()
            .flat_map(|(i, b)| {
                b.carries_out.iter().map(
                    move |c| json!({ "name": name(c.var), "column": c.column, "from_block": i }),
                )
            })
            .collect();
        json!({
            "n": self.n.to_string(),
            "l1": self.l1,
            "l2": self.l2,
            "factor_bits": self.factor_bit_count(),
            "carry_count": self.carry_count(),
            "targets": self.targets().iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            "columns": columns,
            "blocks": blocks,
            "carries": carries,
        })
    }
}

/// Lays out the table for `p·q = n` with both leading bits fixed to 1.
pub fn build_block_system(
    n: &BigUint,
    l1: u32,
    l2: u32,
    layout: &BlockLayout,
) -> Result<BlockSystem, EncodeError> {
    check_input(n, l1, l2)?;
    let mut registry = VariableRegistry::new();
    let p_vars: Vec<Var> = (1..l1 - 1)
        .map(|i| registry.push(Role::FactorP { index: i }, format!("p{i}")))
        .collect::<Result<_, _>>()?;
    let q_vars: Vec<Var> = (1..l2 - 1)
        .map(|j| registry.push(Role::FactorQ { index: j }, format!("q{j}")))
        .collect::<Result<_, _>>()?;
    let p_bit = |i: u32| {
        if i == 0 || i == l1 - 1 {
            None
        } else {
            Some(p_vars[i as usize - 1])
        }
    };
    let q_bit = |j: u32| {
        if j == 0 || j == l2 - 1 {
            None
        } else {
            Some(q_vars[j as usize - 1])
        }
    };

    let product_top = l1 + l2 - 2;
    let top = product_top.max(n.bits().saturating_sub(1) as u32);
    let mut columns: Vec<Column> = (0..=top)
        .map(|power| Column {
            power,
            terms: Vec::new(),
        })
        .collect();
    // Rows in q order, as the table is written.
    for j in 0..l2 {
        for i in 0..l1 {
            let cell = match (p_bit(i), q_bit(j)) {
                (None, None) => CellTerm::One,
                (Some(v), None) | (None, Some(v)) => CellTerm::Bit { var: v },
                (Some(p), Some(q)) => CellTerm::Product { p, q },
            };
            columns[(i + j) as usize].terms.push(cell);
        }
    }

    let widths: Vec<u32> = match &layout.widths {
        BlockWidths::Uniform(w) => {
            if *w == 0 {
                return Err(EncodeError::WidthMismatch("block width 0".into()));
            }
            let count = top.div_ceil(*w).max(1);
            vec![*w; count as usize]
        }
        BlockWidths::Explicit(ws) => ws.clone(),
    };
    if widths.is_empty() || widths.contains(&0) {
        return Err(EncodeError::WidthMismatch(format!(
            "invalid widths {widths:?}"
        )));
    }
    let mut starts = Vec::with_capacity(widths.len());
    let mut start = 1u32;
    for w in &widths {
        if start > top {
            return Err(EncodeError::WidthMismatch(format!(
                "block starting at column {start} lies beyond the top column {top}"
            )));
        }
        starts.push(start);
        start += w;
    }
    if let Some(cw) = &layout.carry_widths {
        if cw.len() + 1 != widths.len() {
            return Err(EncodeError::WidthMismatch(format!(
                "{} carry widths given for {} blocks",
                cw.len(),
                widths.len()
            )));
        }
    }

    let mut blocks = Vec::with_capacity(widths.len());
    let mut next_carry = 1u32;
    let last = widths.len() - 1;
    for (b, (&start, &width)) in starts.iter().zip(&widths).enumerate() {
        if b == last {
            break;
        }
        let mut max_sum = BigUint::zero();
        for c in start..start + width {
            if let Some(col) = columns.get(c as usize) {
                max_sum += BigUint::from(col.terms.len()) << (c - start);
            }
        }
        let bits = match &layout.carry_widths {
            Some(cw) => cw[b],
            None => (max_sum >> width).bits() as u32,
        };
        let mut carries_out = Vec::new();
        for k in 0..bits {
            let column = start + width + k;
            let var = registry.push(Role::Carry { index: next_carry }, format!("c{next_carry}"))?;
            next_carry += 1;
            while columns.len() <= column as usize {
                let power = columns.len() as u32;
                columns.push(Column {
                    power,
                    terms: Vec::new(),
                });
            }
            columns[column as usize].terms.push(CellTerm::Carry { var });
            carries_out.push(CarryBit { var, column });
        }
        let mask = (BigUint::one() << width) - 1u32;
        let target = (n >> start) & mask;
        blocks.push(Block {
            start,
            width,
            target,
            carries_out,
        });
    }
    let last_start = starts[last];
    let end = (last_start + widths[last]).max(columns.len() as u32);
    while columns.len() < end as usize {
        let power = columns.len() as u32;
        columns.push(Column {
            power,
            terms: Vec::new(),
        });
    }
    blocks.push(Block {
        start: last_start,
        width: end - last_start,
        target: n >> last_start,
        carries_out: Vec::new(),
    });

    Ok(BlockSystem {
        n: n.clone(),
        l1,
        l2,
        registry,
        columns,
        blocks,
    })
}

/// Sum of squared block residuals over the table's variables.
pub fn encode_table(bs: &BlockSystem) -> Result<CostFunction, EncodeError> {
    let mut polynomial = PseudoBooleanPolynomial::zero();
    for block in &bs.blocks {
        polynomial = &polynomial + &bs.block_residual(block).square()?;
    }
    Ok(CostFunction {
        polynomial,
        registry: bs.registry.clone(),
        method: Method::Table,
        n: bs.n.clone(),
        layout: FactorLayout {
            l1: bs.l1,
            l2: bs.l2,
            fixed_leading: true,
        },
    })
}
