//! Complete don't-cares of a node in its context
//!
//! The care set of a node, expressed over its fanins, is collected in two steps. Random
//! simulation of the miter gives the part `F1` that is easy to hit; the SAT solver then
//! enumerates the remaining care minterms `F2` with `F1` excluded. The don't-care set is the
//! complement of their union.
//!
//! [`oracle_cdc`] computes the same set by explicit evaluation over all leaf assignments and
//! serves as a reference for small contexts.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::aig::{build_miter, edge_value, Aig, Edge, MiterError, MiterSpec};
use crate::cnf::{circuit_to_cnf, exclude_minterms};
use crate::netlist::{Network, NodeId};
use crate::satcore::{SatError, Solver, SolverConfig, SolverStats};
use crate::windowing::{build_context, Context, Window, WindowError};

pub use crate::truth::{Isf, TruthTable, MAX_VARS};

/// Fanin limit above which nodes are not processed
pub const DEFAULT_MAX_FANINS: usize = 10;

#[derive(Clone, Debug)]
pub struct DcConfig {
    /// Rounds of 64-bit random words fed to the miter
    pub sim_words: usize,
    pub seed: u64,
    /// Nodes with more fanins are skipped; at most 16
    pub max_fanins: usize,
    /// Conflicts allowed for one node
    pub conflict_budget: Option<u64>,
}

impl Default for DcConfig {
    fn default() -> Self {
        DcConfig {
            sim_words: 32,
            seed: 0,
            max_fanins: DEFAULT_MAX_FANINS,
            conflict_budget: Some(100_000),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DcError {
    #[error(transparent)]
    Window(#[from] WindowError),
    #[error(transparent)]
    Miter(#[from] MiterError),
    #[error(transparent)]
    Solver(#[from] SatError),
    #[error("context has {leaves} leaves, more than {max} for exhaustive evaluation")]
    TooManyLeaves { leaves: usize, max: usize },
}

/// Don't-cares of a node together with the intermediate results
#[derive(Clone, Debug)]
pub struct CdcResult {
    /// Function of the node over its fanins with its complete don't-cares
    pub isf: Isf,
    pub window: Window,
    /// Care minterms found by simulation
    pub sim_cares: TruthTable,
    /// Care minterms found by enumeration
    pub sat_cares: TruthTable,
    pub solver: SolverStats,
}

/// Care minterms over the pivot fanins hit by random simulation of the miter
///
/// Every pattern that sets the miter output contributes the fanin values it produces.
pub fn harvest_simulation_cares(aig: &Aig, spec: &MiterSpec, words: usize, seed: u64) -> TruthTable {
    let k = spec.y_taps.len();
    let mut cares = TruthTable::zero(k);
    let out = spec.output(aig);
    if out == Edge::FALSE {
        return cares;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inputs = vec![0u64; aig.num_inputs()];
    for _ in 0..words {
        for w in inputs.iter_mut() {
            *w = rng.gen();
        }
        let values = aig.simulate(&inputs);
        let mut hit = edge_value(&values, out);
        let taps: Vec<u64> = spec.y_taps.iter().map(|t| edge_value(&values, *t)).collect();
        while hit != 0 {
            let bit = hit.trailing_zeros();
            hit &= hit - 1;
            let m = taps
                .iter()
                .enumerate()
                .fold(0usize, |acc, (j, t)| acc | ((t >> bit & 1) as usize) << j);
            cares.set(m, true);
        }
    }
    cares
}

/// Complete don't-cares of `pivot` over its fanins, computed in the given context
pub fn complete_dc(net: &Network, pivot: NodeId, context: Context, config: &DcConfig) -> Result<CdcResult, DcError> {
    let window = build_context(net, pivot, context)?;
    let cap = config.max_fanins.min(MAX_VARS);
    let (aig, spec) = build_miter(net, &window, cap)?;
    let k = spec.y_taps.len();
    let f1 = harvest_simulation_cares(&aig, &spec, config.sim_words, config.seed);
    let mut f2 = TruthTable::zero(k);
    let mut solver_stats = SolverStats::default();
    if spec.output(&aig) != Edge::FALSE && !f1.is_one() {
        let mut cnf = circuit_to_cnf(&aig, &spec);
        exclude_minterms(&mut cnf, f1.minterms().map(|m| m as u64));
        let mut solver = Solver::from_cnf(
            &cnf,
            SolverConfig {
                seed: config.seed,
                conflict_budget: config.conflict_budget,
                restarts: true,
            },
        );
        let found = solver.enumerate_projected(&cnf.y_lits, 1 << k)?;
        for m in found.minterms {
            f2.set(m as usize, true);
        }
        solver_stats = solver.stats();
    }
    let care = &f1 | &f2;
    let onset = net.node(pivot).truth_table() & &care;
    Ok(CdcResult {
        isf: Isf::new(onset, !care),
        window,
        sim_cares: f1,
        sat_cares: f2,
        solver: solver_stats,
    })
}

/// Complete don't-cares by exhaustive evaluation over the leaves of the context
///
/// With `f_i` the roots and `f'_i` the roots with the pivot complemented, the care set over the
/// leaves is `C(x) = OR_i (f_i(x) XOR f'_i(x))`. A fanin minterm `y` is a don't-care when every
/// leaf assignment `x` producing it has `C(x) = 0`; unreachable minterms are don't-cares
/// vacuously. External don't-cares, if any, would be removed from `C` here.
pub fn oracle_cdc(net: &Network, pivot: NodeId, context: Context, max_fanins: usize) -> Result<Isf, DcError> {
    let window = build_context(net, pivot, context)?;
    let fanins = net.fanins(pivot);
    let cap = max_fanins.min(MAX_VARS);
    if fanins.len() > cap {
        return Err(MiterError::TooManyFanins {
            node: pivot,
            fanins: fanins.len(),
            cap,
        }
        .into());
    }
    let n = window.leaves.len();
    if n > MAX_VARS {
        return Err(DcError::TooManyLeaves {
            leaves: n,
            max: MAX_VARS,
        });
    }
    let mut f: HashMap<NodeId, TruthTable> = window
        .leaves
        .iter()
        .enumerate()
        .map(|(i, l)| (*l, TruthTable::var(n, i)))
        .collect();
    let eval = |id: NodeId, f: &HashMap<NodeId, TruthTable>| {
        let node = net.node(id);
        let ins: Vec<&TruthTable> = node.fanins().iter().map(|x| &f[x]).collect();
        node.function().eval_tables(&ins, n)
    };
    let order = window.topological_order(net);
    for &id in &order {
        let t = eval(id, &f);
        f.insert(id, t);
    }
    let mut flipped = f.clone();
    flipped.insert(pivot, !&f[&pivot]);
    let tfo = window.pivot_tfo(net);
    for &id in order.iter().filter(|id| **id != pivot && tfo.binary_search(id).is_ok()) {
        let t = eval(id, &flipped);
        flipped.insert(id, t);
    }
    let care_x = window
        .roots
        .iter()
        .fold(TruthTable::zero(n), |acc, r| acc | (&f[r] ^ &flipped[r]));

    let k = fanins.len();
    let g: Vec<&TruthTable> = fanins.iter().map(|y| &f[y]).collect();
    // CDC(y) = forall x: M(x, y) => ODC(x)
    let cdc = TruthTable::from_fn(k, |y| {
        (0..1usize << n).all(|x| {
            let m = (0..k).all(|j| g[j].get(x) == (y >> j & 1 != 0));
            !m || !care_x.get(x)
        })
    });
    let onset = net.node(pivot).truth_table() & &!&cdc;
    Ok(Isf::new(onset, cdc))
}
