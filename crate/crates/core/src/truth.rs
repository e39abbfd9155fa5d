//! Bit-vector truth tables over a small number of variables
//!
//! Minterm `m` assigns variable `i` the value `(m >> i) & 1`.

use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Not};

/// Largest number of variables a truth table may have
pub const MAX_VARS: usize = 16;

/// Complete truth table of a Boolean function, stored as 64-bit words
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    num_vars: usize,
    words: Vec<u64>,
}

/// Word patterns of the first six variables
const VAR_MASKS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

fn nb_words(num_vars: usize) -> usize {
    if num_vars <= 6 {
        1
    } else {
        1 << (num_vars - 6)
    }
}

impl TruthTable {
    /// Constant zero function
    pub fn zero(num_vars: usize) -> TruthTable {
        assert!(num_vars <= MAX_VARS, "truth tables are limited to {MAX_VARS} variables");
        TruthTable {
            num_vars,
            words: vec![0; nb_words(num_vars)],
        }
    }

    /// Constant one function
    pub fn one(num_vars: usize) -> TruthTable {
        !TruthTable::zero(num_vars)
    }

    /// Projection function of variable `var`
    pub fn var(num_vars: usize, var: usize) -> TruthTable {
        assert!(var < num_vars);
        let mut ret = TruthTable::zero(num_vars);
        if var < 6 {
            for w in ret.words.iter_mut() {
                *w = VAR_MASKS[var];
            }
        } else {
            let stride = 1 << (var - 6);
            for (i, w) in ret.words.iter_mut().enumerate() {
                if i & stride != 0 {
                    *w = !0;
                }
            }
        }
        ret.mask_tail();
        ret
    }

    /// Build a function from the list of its on-set minterms
    pub fn from_minterms<I: IntoIterator<Item = usize>>(num_vars: usize, minterms: I) -> TruthTable {
        let mut ret = TruthTable::zero(num_vars);
        for m in minterms {
            ret.set(m, true);
        }
        ret
    }

    /// Build a function by evaluating a predicate on every minterm
    pub fn from_fn<F: FnMut(usize) -> bool>(num_vars: usize, mut f: F) -> TruthTable {
        let mut ret = TruthTable::zero(num_vars);
        for m in 0..ret.num_bits() {
            if f(m) {
                ret.set(m, true);
            }
        }
        ret
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Number of minterms, 2^num_vars
    pub fn num_bits(&self) -> usize {
        1 << self.num_vars
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, minterm: usize) -> bool {
        debug_assert!(minterm < self.num_bits());
        (self.words[minterm >> 6] >> (minterm & 63)) & 1 != 0
    }

    pub fn set(&mut self, minterm: usize, value: bool) {
        assert!(minterm < self.num_bits(), "minterm {minterm} out of range");
        let bit = 1u64 << (minterm & 63);
        if value {
            self.words[minterm >> 6] |= bit;
        } else {
            self.words[minterm >> 6] &= !bit;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn is_one(&self) -> bool {
        (!self.clone()).is_zero()
    }

    /// Number of on-set minterms
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Whether `self` implies `other`
    pub fn implies(&self, other: &TruthTable) -> bool {
        assert_eq!(self.num_vars, other.num_vars);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Whether the two functions share no minterm
    pub fn is_disjoint(&self, other: &TruthTable) -> bool {
        assert_eq!(self.num_vars, other.num_vars);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Iterate over the on-set minterms in increasing order
    pub fn minterms(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }

    /// Cofactor with respect to `var`, keeping the same variable count
    pub fn cofactor(&self, var: usize, value: bool) -> TruthTable {
        assert!(var < self.num_vars);
        let mut ret = self.clone();
        if var < 6 {
            let shift = 1 << var;
            let mask = VAR_MASKS[var];
            for w in ret.words.iter_mut() {
                *w = if value {
                    (*w & mask) | ((*w & mask) >> shift)
                } else {
                    (*w & !mask) | ((*w & !mask) << shift)
                };
            }
        } else {
            let stride = 1 << (var - 6);
            for i in 0..ret.words.len() {
                if i & stride == 0 {
                    let (lo, hi) = (self.words[i], self.words[i | stride]);
                    let v = if value { hi } else { lo };
                    ret.words[i] = v;
                    ret.words[i | stride] = v;
                }
            }
        }
        ret
    }

    /// Whether the function depends on `var`
    pub fn depends_on(&self, var: usize) -> bool {
        self.cofactor(var, false) != self.cofactor(var, true)
    }

    fn mask_tail(&mut self) {
        if self.num_vars < 6 {
            self.words[0] &= (1u64 << (1 << self.num_vars)) - 1;
        }
    }

    /// Lowercase hexadecimal rendering, most significant minterm first
    pub fn to_hex(&self) -> String {
        let digits = (self.num_bits() / 4).max(1);
        let mut s = String::with_capacity(digits);
        for d in (0..digits).rev() {
            let w = self.words[d / 16];
            let v = (w >> ((d % 16) * 4)) & 0xF;
            s.push(char::from_digit(v as u32, 16).unwrap());
        }
        s
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable({}, 0x{})", self.num_vars, self.to_hex())
    }
}

impl Not for TruthTable {
    type Output = TruthTable;
    fn not(mut self) -> TruthTable {
        for w in self.words.iter_mut() {
            *w = !*w;
        }
        self.mask_tail();
        self
    }
}

impl Not for &TruthTable {
    type Output = TruthTable;
    fn not(self) -> TruthTable {
        !self.clone()
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&TruthTable> for &TruthTable {
            type Output = TruthTable;
            fn $method(self, rhs: &TruthTable) -> TruthTable {
                assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
                TruthTable {
                    num_vars: self.num_vars,
                    words: self.words.iter().zip(&rhs.words).map(|(a, b)| a $op b).collect(),
                }
            }
        }
        impl $trait<&TruthTable> for TruthTable {
            type Output = TruthTable;
            fn $method(self, rhs: &TruthTable) -> TruthTable {
                &self $op rhs
            }
        }
        impl $trait<TruthTable> for TruthTable {
            type Output = TruthTable;
            fn $method(self, rhs: TruthTable) -> TruthTable {
                &self $op &rhs
            }
        }
    };
}

binop!(BitAnd, bitand, &);
binop!(BitOr, bitor, |);
binop!(BitXor, bitxor, ^);

/// Incompletely specified function: disjoint on-set and don't-care set
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isf {
    onset: TruthTable,
    dcset: TruthTable,
}

impl Isf {
    pub fn new(onset: TruthTable, dcset: TruthTable) -> Isf {
        assert_eq!(onset.num_vars(), dcset.num_vars());
        assert!(onset.is_disjoint(&dcset), "on-set and don't-care set overlap");
        Isf { onset, dcset }
    }

    /// Completely specified function
    pub fn from_function(onset: TruthTable) -> Isf {
        let n = onset.num_vars();
        Isf::new(onset, TruthTable::zero(n))
    }

    pub fn num_vars(&self) -> usize {
        self.onset.num_vars()
    }

    pub fn onset(&self) -> &TruthTable {
        &self.onset
    }

    pub fn dcset(&self) -> &TruthTable {
        &self.dcset
    }

    pub fn offset(&self) -> TruthTable {
        !(&self.onset | &self.dcset)
    }

    /// Care set: complement of the don't-care set
    pub fn careset(&self) -> TruthTable {
        !&self.dcset
    }

    /// Largest compatible function: on-set plus don't-cares
    pub fn upper(&self) -> TruthTable {
        &self.onset | &self.dcset
    }

    /// Whether a completely specified function implements this ISF
    pub fn is_implemented_by(&self, f: &TruthTable) -> bool {
        self.onset.implies(f) && f.implies(&self.upper())
    }
}
