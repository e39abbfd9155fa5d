//! Clause form of an AIG miter

use std::fmt::{self, Write};
use std::ops::Not;

use thiserror::Error;

use crate::aig::{Aig, AigNode, Edge, MiterSpec};

/// Variable index
pub type Var = u32;

/// Literal encoded as `var << 1 | negated`
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: Var, negated: bool) -> Lit {
        Lit(var << 1 | negated as u32)
    }

    pub fn pos(var: Var) -> Lit {
        Lit::new(var, false)
    }

    pub fn neg(var: Var) -> Lit {
        Lit::new(var, true)
    }

    pub fn var(self) -> Var {
        self.0 >> 1
    }

    pub fn is_negated(self) -> bool {
        self.0 & 1 != 0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn negate_if(self, c: bool) -> Lit {
        Lit(self.0 ^ c as u32)
    }

    /// DIMACS integer: 1-based, negative when negated
    pub fn to_dimacs(self) -> i64 {
        let v = self.var() as i64 + 1;
        if self.is_negated() {
            -v
        } else {
            v
        }
    }
}

impl Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// Clause set with the variable binding of the AIG it was derived from
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Lit>>,
    /// Variable of each AIG node, if it got one
    pub node_var: Vec<Option<Var>>,
    /// Literal of each pivot fanin tap
    pub y_lits: Vec<Lit>,
}

impl Cnf {
    pub fn new(num_vars: usize) -> Cnf {
        Cnf {
            num_vars,
            ..Cnf::default()
        }
    }

    pub fn add_clause(&mut self, lits: Vec<Lit>) {
        assert!(!lits.is_empty(), "empty clause");
        debug_assert!(lits.iter().all(|l| (l.var() as usize) < self.num_vars));
        self.clauses.push(lits);
    }

    /// Literal of an AIG edge, if its node got a variable
    pub fn edge_lit(&self, e: Edge) -> Option<Lit> {
        self.node_var
            .get(e.node() as usize)
            .copied()
            .flatten()
            .map(|v| Lit::new(v, e.is_complemented()))
    }

    /// Whether an assignment satisfies every clause
    pub fn is_satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| model[l.var() as usize] != l.is_negated()))
    }

    /// Write in DIMACS format
    pub fn to_dimacs(&self) -> String {
        let mut s = String::new();
        writeln!(s, "p cnf {} {}", self.num_vars, self.clauses.len()).unwrap();
        for c in &self.clauses {
            for l in c {
                write!(s, "{} ", l.to_dimacs()).unwrap();
            }
            s.push_str("0\n");
        }
        s
    }
}

/// Add one blocking clause per minterm over the pivot fanin taps
///
/// Bit `j` of a minterm is the value of tap `j`.
pub fn exclude_minterms<I: IntoIterator<Item = u64>>(cnf: &mut Cnf, minterms: I) {
    for m in minterms {
        let clause = blocking_clause(&cnf.y_lits, m);
        cnf.clauses.push(clause);
    }
}

/// Clause that is false exactly when the literals take the values of `minterm`
pub fn blocking_clause(lits: &[Lit], minterm: u64) -> Vec<Lit> {
    lits.iter()
        .enumerate()
        .map(|(j, l)| l.negate_if(minterm >> j & 1 != 0))
        .collect()
}

/// Clauses of the AIG cone of `output` and of the taps, plus a unit clause asserting `output`
///
/// Every AND node gets three clauses. The constant node gets a variable and a unit clause only
/// when some edge references it.
pub fn aig_to_cnf(aig: &Aig, output: Edge, taps: &[Edge]) -> Cnf {
    let mut roots = vec![output];
    roots.extend_from_slice(taps);
    let cone = aig.cone(&roots);
    let mut node_var = vec![None; aig.num_nodes()];
    let mut num_vars = 0u32;
    for &n in &cone {
        node_var[n as usize] = Some(num_vars);
        num_vars += 1;
    }
    let mut cnf = Cnf {
        num_vars: num_vars as usize,
        clauses: Vec::new(),
        node_var,
        y_lits: Vec::new(),
    };
    for &n in &cone {
        match aig.node(n) {
            AigNode::Const => cnf.add_clause(vec![Lit::pos(cnf.node_var[0].unwrap())]),
            AigNode::Input(_) => {}
            AigNode::And(a, b) => {
                let c = Lit::pos(cnf.node_var[n as usize].unwrap());
                let a = cnf.edge_lit(a).unwrap();
                let b = cnf.edge_lit(b).unwrap();
                cnf.add_clause(vec![!c, a]);
                cnf.add_clause(vec![!c, b]);
                cnf.add_clause(vec![!a, !b, c]);
            }
        }
    }
    let out = cnf.edge_lit(output).unwrap();
    cnf.add_clause(vec![out]);
    cnf.y_lits = taps.iter().map(|t| cnf.edge_lit(*t).unwrap()).collect();
    cnf
}

/// Clause form of a don't-care miter, with the pivot fanin taps as projection literals
pub fn circuit_to_cnf(aig: &Aig, spec: &MiterSpec) -> Cnf {
    assert_eq!(aig.outputs().len(), 1, "the miter must have a single output");
    aig_to_cnf(aig, aig.outputs()[0], &spec.y_taps)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing problem line")]
    MissingHeader,
}

/// Parse a DIMACS CNF file; the result has no AIG binding
pub fn parse_dimacs(text: &str) -> Result<Cnf, DimacsError> {
    let mut cnf: Option<Cnf> = None;
    let mut current = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let fields: Vec<&str> = rest.split_whitespace().collect();
            let syntax = || DimacsError::Syntax {
                line: line_no,
                msg: "malformed problem line".into(),
            };
            if fields.len() != 3 || fields[0] != "cnf" {
                return Err(syntax());
            }
            let n: usize = fields[1].parse().map_err(|_| syntax())?;
            cnf = Some(Cnf::new(n));
            continue;
        }
        let c = cnf.as_mut().ok_or(DimacsError::MissingHeader)?;
        for tok in line.split_whitespace() {
            let v: i64 = tok.parse().map_err(|_| DimacsError::Syntax {
                line: line_no,
                msg: format!("bad literal '{tok}'"),
            })?;
            if v == 0 {
                if current.is_empty() {
                    return Err(DimacsError::Syntax {
                        line: line_no,
                        msg: "empty clause".into(),
                    });
                }
                c.clauses.push(std::mem::take(&mut current));
            } else {
                let var = v.unsigned_abs() - 1;
                if var as usize >= c.num_vars {
                    return Err(DimacsError::Syntax {
                        line: line_no,
                        msg: format!("variable {} out of range", var + 1),
                    });
                }
                current.push(Lit::new(var as Var, v < 0));
            }
        }
    }
    let mut cnf = cnf.ok_or(DimacsError::MissingHeader)?;
    if !current.is_empty() {
        cnf.clauses.push(current);
    }
    Ok(cnf)
}
