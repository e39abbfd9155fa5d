//! Sum-of-products local functions

use std::fmt;

use crate::truth::{TruthTable, MAX_VARS};

/// Largest number of variables a cube can reference
pub const MAX_CUBE_VARS: usize = 64;

/// Product term: each variable appears positive, negative or not at all
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    pos: u64,
    neg: u64,
}

impl Cube {
    /// Cube without any literal, i.e. the constant one
    pub fn full() -> Cube {
        Cube::default()
    }

    /// Build a cube from its positive and negative literal masks
    pub fn from_masks(pos: u64, neg: u64) -> Cube {
        assert_eq!(pos & neg, 0, "a variable cannot appear in both polarities");
        Cube { pos, neg }
    }

    /// Build a cube that matches exactly one minterm over `num_vars` variables
    pub fn minterm(num_vars: usize, minterm: usize) -> Cube {
        let all = mask_of(num_vars);
        let pos = minterm as u64 & all;
        Cube { pos, neg: all & !pos }
    }

    pub fn pos_mask(&self) -> u64 {
        self.pos
    }

    pub fn neg_mask(&self) -> u64 {
        self.neg
    }

    /// Literal of `var`: `Some(true)` for positive, `Some(false)` for negative
    pub fn literal(&self, var: usize) -> Option<bool> {
        if self.pos >> var & 1 != 0 {
            Some(true)
        } else if self.neg >> var & 1 != 0 {
            Some(false)
        } else {
            None
        }
    }

    pub fn with_literal(mut self, var: usize, value: Option<bool>) -> Cube {
        let bit = 1u64 << var;
        self.pos &= !bit;
        self.neg &= !bit;
        match value {
            Some(true) => self.pos |= bit,
            Some(false) => self.neg |= bit,
            None => (),
        }
        self
    }

    pub fn num_literals(&self) -> usize {
        (self.pos.count_ones() + self.neg.count_ones()) as usize
    }

    /// Variables referenced by the cube
    pub fn support(&self) -> u64 {
        self.pos | self.neg
    }

    /// Value of the cube under a complete assignment
    pub fn eval(&self, assignment: u64) -> bool {
        assignment & self.pos == self.pos && !assignment & self.neg == self.neg
    }

    /// Whether every minterm of `other` is in `self`
    pub fn contains(&self, other: &Cube) -> bool {
        self.pos & !other.pos == 0 && self.neg & !other.neg == 0
    }

    pub fn truth_table(&self, num_vars: usize) -> TruthTable {
        let mut ret = TruthTable::one(num_vars);
        for v in 0..num_vars {
            match self.literal(v) {
                Some(true) => ret = ret & TruthTable::var(num_vars, v),
                Some(false) => ret = ret & !TruthTable::var(num_vars, v),
                None => (),
            }
        }
        ret
    }

    /// BLIF-style pattern over `num_vars` variables
    pub fn to_pattern(&self, num_vars: usize) -> String {
        (0..num_vars)
            .map(|v| match self.literal(v) {
                Some(true) => '1',
                Some(false) => '0',
                None => '-',
            })
            .collect()
    }
}

impl fmt::Debug for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = 64 - (self.pos | self.neg).leading_zeros() as usize;
        write!(f, "Cube({})", self.to_pattern(n))
    }
}

fn mask_of(num_vars: usize) -> u64 {
    if num_vars >= 64 {
        !0
    } else {
        (1u64 << num_vars) - 1
    }
}

/// Sum of products over a fixed number of variables
///
/// An empty cube list is the constant zero; a cube without literals is the constant one.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Sop {
    num_vars: usize,
    cubes: Vec<Cube>,
}

impl Sop {
    pub fn new(num_vars: usize, cubes: Vec<Cube>) -> Sop {
        assert!(num_vars <= MAX_CUBE_VARS);
        let all = mask_of(num_vars);
        for c in &cubes {
            assert_eq!(c.support() & !all, 0, "cube references a variable out of range");
        }
        Sop { num_vars, cubes }
    }

    pub fn zero(num_vars: usize) -> Sop {
        Sop::new(num_vars, Vec::new())
    }

    pub fn one(num_vars: usize) -> Sop {
        Sop::new(num_vars, vec![Cube::full()])
    }

    /// Single positive literal
    pub fn buffer() -> Sop {
        Sop::new(1, vec![Cube::from_masks(1, 0)])
    }

    /// Single negative literal
    pub fn inverter() -> Sop {
        Sop::new(1, vec![Cube::from_masks(0, 1)])
    }

    /// Conjunction of all variables
    pub fn and(num_vars: usize) -> Sop {
        Sop::new(num_vars, vec![Cube::from_masks(mask_of(num_vars), 0)])
    }

    /// Disjunction of all variables
    pub fn or(num_vars: usize) -> Sop {
        Sop::new(num_vars, (0..num_vars).map(|v| Cube::from_masks(1 << v, 0)).collect())
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn num_literals(&self) -> usize {
        self.cubes.iter().map(|c| c.num_literals()).sum()
    }

    /// Syntactically constant: no cube, or a cube without literals
    pub fn as_constant(&self) -> Option<bool> {
        if self.cubes.is_empty() {
            Some(false)
        } else if self.cubes.iter().any(|c| c.num_literals() == 0) {
            Some(true)
        } else {
            None
        }
    }

    pub fn is_buffer(&self) -> bool {
        self.num_vars == 1 && self.cubes == [Cube::from_masks(1, 0)]
    }

    pub fn is_inverter(&self) -> bool {
        self.num_vars == 1 && self.cubes == [Cube::from_masks(0, 1)]
    }

    /// Variables referenced by at least one cube
    pub fn support(&self) -> u64 {
        self.cubes.iter().fold(0, |acc, c| acc | c.support())
    }

    pub fn eval(&self, assignment: u64) -> bool {
        self.cubes.iter().any(|c| c.eval(assignment))
    }

    /// Truth table over the SOP variables; at most 16 variables
    pub fn truth_table(&self) -> TruthTable {
        assert!(self.num_vars <= MAX_VARS);
        let mut ret = TruthTable::zero(self.num_vars);
        for c in &self.cubes {
            ret = ret | c.truth_table(self.num_vars);
        }
        ret
    }

    /// Evaluate the SOP with each variable replaced by a truth table over `space_vars` variables
    pub fn eval_tables(&self, inputs: &[&TruthTable], space_vars: usize) -> TruthTable {
        assert_eq!(inputs.len(), self.num_vars);
        let mut ret = TruthTable::zero(space_vars);
        for c in &self.cubes {
            let mut t = TruthTable::one(space_vars);
            for (v, inp) in inputs.iter().enumerate() {
                match c.literal(v) {
                    Some(true) => t = t & *inp,
                    Some(false) => t = t & !*inp,
                    None => (),
                }
            }
            ret = ret | t;
        }
        ret
    }

    /// Evaluate the SOP bitwise over 64 parallel patterns
    pub fn eval_words(&self, inputs: &[u64]) -> u64 {
        assert_eq!(inputs.len(), self.num_vars);
        let mut ret = 0;
        for c in &self.cubes {
            let mut w = !0u64;
            for (v, inp) in inputs.iter().enumerate() {
                match c.literal(v) {
                    Some(true) => w &= inp,
                    Some(false) => w &= !inp,
                    None => (),
                }
            }
            ret |= w;
        }
        ret
    }

    /// Substitute a constant for `var` and remove it from the variable list
    pub fn cofactor_remove(&self, var: usize, value: bool) -> Sop {
        let cubes = self
            .cubes
            .iter()
            .filter(|c| c.literal(var) != Some(!value))
            .map(|c| remove_var(c.with_literal(var, None), var))
            .collect();
        Sop::new(self.num_vars - 1, cubes)
    }

    /// Replace variable `drop` by `keep` (complemented if `inverted`) and remove `drop`
    pub fn merge_vars(&self, keep: usize, drop: usize, inverted: bool) -> Sop {
        assert_ne!(keep, drop);
        let mut cubes = Vec::new();
        for c in &self.cubes {
            let lit = c.literal(drop).map(|p| p ^ inverted);
            let existing = c.literal(keep);
            let merged = match (existing, lit) {
                (Some(a), Some(b)) if a != b => continue,
                (Some(a), _) => Some(a),
                (None, b) => b,
            };
            let c = c.with_literal(drop, None).with_literal(keep, merged);
            cubes.push(remove_var(c, drop));
        }
        Sop::new(self.num_vars - 1, cubes)
    }

    /// Complement the polarity of every literal of `var`
    pub fn flip_var(&self, var: usize) -> Sop {
        let cubes = self
            .cubes
            .iter()
            .map(|c| c.with_literal(var, c.literal(var).map(|p| !p)))
            .collect();
        Sop::new(self.num_vars, cubes)
    }

    /// Keep only the listed variables (in that order); they must cover the support
    pub fn restrict_vars(&self, kept: &[usize]) -> Sop {
        assert_eq!(self.support() & !kept.iter().fold(0u64, |a, v| a | 1 << v), 0);
        let cubes = self
            .cubes
            .iter()
            .map(|c| {
                kept.iter()
                    .enumerate()
                    .fold(Cube::full(), |acc, (i, &v)| acc.with_literal(i, c.literal(v)))
            })
            .collect();
        Sop::new(kept.len(), cubes)
    }

    /// Lift the SOP into a larger space; variable `i` becomes `mapping[i]`
    pub fn extend_vars(&self, num_vars: usize, mapping: &[usize]) -> Sop {
        assert_eq!(mapping.len(), self.num_vars);
        let cubes = self
            .cubes
            .iter()
            .map(|c| {
                mapping
                    .iter()
                    .enumerate()
                    .fold(Cube::full(), |acc, (i, &v)| acc.with_literal(v, c.literal(i)))
            })
            .collect();
        Sop::new(num_vars, cubes)
    }
}

/// Shift down every variable above `var`
fn remove_var(c: Cube, var: usize) -> Cube {
    debug_assert!(c.literal(var).is_none());
    let low = mask_of(var);
    let squeeze = |m: u64| (m & low) | ((m >> 1) & !low);
    Cube {
        pos: squeeze(c.pos),
        neg: squeeze(c.neg),
    }
}

impl fmt::Debug for Sop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cubes: Vec<String> = self.cubes.iter().map(|c| c.to_pattern(self.num_vars)).collect();
        write!(f, "Sop({}; [{}])", self.num_vars, cubes.join(", "))
    }
}
