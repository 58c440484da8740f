use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::PolyError;

/// A single indeterminate. Indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Lambda(usize),
    Z(usize),
    Mu(usize, usize),
    Aux(String),
}

impl Var {
    pub fn kind(&self) -> BlockKind {
        match self {
            Var::Lambda(_) => BlockKind::Lambda,
            Var::Z(_) => BlockKind::Z,
            Var::Mu(..) => BlockKind::Mu,
            Var::Aux(_) => BlockKind::Aux,
        }
    }

    /// Parses the names produced by `Display`: `l3`, `z2`, `mu1_4`, or a bare aux name.
    pub fn parse(name: &str) -> Var {
        fn index(s: &str) -> Option<usize> {
            if s.is_empty() || s.starts_with('0') || !s.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            s.parse().ok()
        }
        if let Some(rest) = name.strip_prefix("mu") {
            if let Some((i, q)) = rest.split_once('_') {
                if let (Some(i), Some(q)) = (index(i), index(q)) {
                    return Var::Mu(i, q);
                }
            }
        }
        if let Some(i) = name.strip_prefix('l').and_then(index) {
            return Var::Lambda(i);
        }
        if let Some(i) = name.strip_prefix('z').and_then(index) {
            return Var::Z(i);
        }
        Var::Aux(name.to_string())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Lambda(i) => write!(f, "l{i}"),
            Var::Z(i) => write!(f, "z{i}"),
            Var::Mu(i, q) => write!(f, "mu{i}_{q}"),
            Var::Aux(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockKind {
    Lambda,
    Z,
    Mu,
    Aux,
}

/// A block of variables. Blocks are laid out in the order `L < Z < MU < AUX`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Block {
    #[serde(rename = "L")]
    Lambda,
    #[serde(rename = "Z")]
    Z,
    #[serde(rename = "MU")]
    Mu { q_max: usize },
    #[serde(rename = "AUX")]
    Aux { name: String },
}

impl Block {
    pub fn kind(&self) -> BlockKind {
        match self {
            Block::Lambda => BlockKind::Lambda,
            Block::Z => BlockKind::Z,
            Block::Mu { .. } => BlockKind::Mu,
            Block::Aux { .. } => BlockKind::Aux,
        }
    }
}

/// An ordered set of variables for `n` saddles.
#[derive(Clone, Debug)]
pub struct VariableSpace {
    n: usize,
    blocks: Vec<Block>,
    vars: Vec<Var>,
    index: HashMap<Var, usize>,
}

impl PartialEq for VariableSpace {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.blocks == other.blocks
    }
}

impl Eq for VariableSpace {}

impl VariableSpace {
    pub fn new(n: usize, mut blocks: Vec<Block>) -> Result<Arc<Self>, PolyError> {
        if n == 0 {
            return Err(PolyError::InvalidSpace("n must be at least 1".into()));
        }
        blocks.sort_by_key(|b| b.kind());
        let mut vars = Vec::new();
        for (k, b) in blocks.iter().enumerate() {
            if k > 0 && b.kind() != BlockKind::Aux && blocks[k - 1].kind() == b.kind() {
                return Err(PolyError::InvalidSpace(format!("duplicate block {:?}", b.kind())));
            }
            match b {
                Block::Lambda => vars.extend((1..=n).map(Var::Lambda)),
                Block::Z => vars.extend((1..=n).map(Var::Z)),
                Block::Mu { q_max } => {
                    if *q_max == 0 {
                        return Err(PolyError::InvalidSpace("MU block needs q_max >= 1".into()));
                    }
                    for i in 1..=n {
                        vars.extend((1..=*q_max).map(|q| Var::Mu(i, q)));
                    }
                }
                Block::Aux { name } => {
                    let v = Var::Aux(name.clone());
                    if Var::parse(name) != v || name.is_empty() {
                        return Err(PolyError::InvalidSpace(format!("aux name {name:?} clashes with a block variable")));
                    }
                    vars.push(v);
                }
            }
        }
        let mut index = HashMap::with_capacity(vars.len());
        for (k, v) in vars.iter().enumerate() {
            if index.insert(v.clone(), k).is_some() {
                return Err(PolyError::InvalidSpace(format!("duplicate variable {v}")));
            }
        }
        Ok(Arc::new(VariableSpace { n, blocks, vars, index }))
    }

    /// `L ∪ Z`, the home of the λ-family.
    pub fn lz(n: usize) -> Result<Arc<Self>, PolyError> {
        Self::new(n, vec![Block::Lambda, Block::Z])
    }

    /// `Z ∪ MU(q_max)`, the home of the μ-family.
    pub fn z_mu(n: usize, q_max: usize) -> Result<Arc<Self>, PolyError> {
        Self::new(n, vec![Block::Z, Block::Mu { q_max }])
    }

    pub fn lambda_only(n: usize) -> Result<Arc<Self>, PolyError> {
        Self::new(n, vec![Block::Lambda])
    }

    pub fn z_only(n: usize) -> Result<Arc<Self>, PolyError> {
        Self::new(n, vec![Block::Z])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn has_block(&self, kind: BlockKind) -> bool {
        self.blocks.iter().any(|b| b.kind() == kind)
    }

    pub fn q_max(&self) -> Option<usize> {
        self.blocks.iter().find_map(|b| match b {
            Block::Mu { q_max } => Some(*q_max),
            _ => None,
        })
    }

    /// The same space with an extra block (or a replaced MU block).
    pub fn with_block(&self, block: Block) -> Result<Arc<Self>, PolyError> {
        let mut blocks: Vec<Block> = self
            .blocks
            .iter()
            .filter(|b| block.kind() == BlockKind::Aux || b.kind() != block.kind())
            .cloned()
            .collect();
        blocks.push(block);
        Self::new(self.n, blocks)
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn var(&self, idx: usize) -> &Var {
        &self.vars[idx]
    }

    pub fn index_of(&self, v: &Var) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn require(&self, v: &Var) -> Result<usize, PolyError> {
        self.index_of(v).ok_or_else(|| PolyError::UnknownVariable(v.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_is_block_then_index() {
        let s = VariableSpace::new(2, vec![Block::Mu { q_max: 2 }, Block::Z, Block::Lambda]).unwrap();
        let names: Vec<String> = s.vars().iter().map(|v| v.to_string()).collect();
        assert_eq!(names, ["l1", "l2", "z1", "z2", "mu1_1", "mu1_2", "mu2_1", "mu2_2"]);
    }

    #[test]
    fn names_round_trip() {
        for v in [Var::Lambda(12), Var::Z(3), Var::Mu(2, 7), Var::Aux("t".into())] {
            assert_eq!(Var::parse(&v.to_string()), v);
        }
        assert_eq!(Var::parse("z0"), Var::Aux("z0".into()));
    }

    #[test]
    fn rejects_bad_spaces() {
        assert!(VariableSpace::new(0, vec![Block::Z]).is_err());
        assert!(VariableSpace::new(2, vec![Block::Z, Block::Z]).is_err());
        assert!(VariableSpace::new(2, vec![Block::Mu { q_max: 0 }]).is_err());
        assert!(VariableSpace::new(2, vec![Block::Z, Block::Aux { name: "z1".into() }]).is_err());
    }
}
