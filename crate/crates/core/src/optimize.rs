//! Node-by-node minimization with complete don't-cares, and combinational equivalence checking

use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use log::{debug, info};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::aig::{build_equivalence_miter, edge_value};
use crate::cnf::aig_to_cnf;
use crate::dontcare::{complete_dc, DcConfig, DcError};
use crate::minimize::{is_smaller, isop, support_reduce};
use crate::netlist::Network;
use crate::satcore::{solve, SolveResult, SolverConfig};
use crate::windowing::Context;

#[derive(Clone, Debug)]
pub struct MfsConfig {
    pub context: Context,
    pub dc: DcConfig,
    /// Passes over the network; stops early when a pass changes nothing
    pub passes: usize,
}

impl Default for MfsConfig {
    fn default() -> Self {
        MfsConfig {
            context: Context::window(2, 2),
            dc: DcConfig::default(),
            passes: 1,
        }
    }
}

/// Summary of an optimization run
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct MfsStats {
    pub visited: usize,
    pub changed: usize,
    /// Nodes above the fanin limit
    pub skipped_fanins: usize,
    /// Nodes whose don't-cares could not be computed within the solver budget
    pub skipped_solver: usize,
    pub passes: usize,
    pub nodes_before: usize,
    pub nodes_after: usize,
    pub literals_before: usize,
    /// Literals once the initial sweep is done
    pub literals_swept: usize,
    pub literals_after: usize,
    /// Projected solutions found by the solver, over all nodes
    pub sat_solutions: u64,
    pub elapsed_secs: f64,
}

/// Simplify every node with its complete don't-cares, replacing it before visiting the next
///
/// The network is swept before and after. Nodes are visited from the outputs towards the inputs
/// and a new function is kept only when it has strictly fewer SOP literals.
pub fn mfs(net: &mut Network, config: &MfsConfig) -> MfsStats {
    let start = Instant::now();
    let mut stats = MfsStats {
        nodes_before: net.num_logic_nodes(),
        literals_before: net.literal_count(),
        ..MfsStats::default()
    };
    net.sweep();
    stats.literals_swept = net.literal_count();
    for pass in 0..config.passes.max(1) {
        stats.passes = pass + 1;
        let changed = mfs_pass(net, config, &mut stats);
        net.sweep();
        info!(
            "pass {}: {} nodes changed, {} literals",
            pass + 1,
            changed,
            net.literal_count()
        );
        if changed == 0 {
            break;
        }
    }
    stats.nodes_after = net.num_logic_nodes();
    stats.literals_after = net.literal_count();
    stats.elapsed_secs = start.elapsed().as_secs_f64();
    stats
}

fn mfs_pass(net: &mut Network, config: &MfsConfig, stats: &mut MfsStats) -> usize {
    let mut changed = 0;
    for id in net.reverse_topological_order() {
        let node = net.node(id);
        if node.fanins().is_empty() || (node.fanouts().is_empty() && !net.is_po_driver(id)) {
            continue;
        }
        stats.visited += 1;
        let result = match complete_dc(net, id, config.context, &config.dc) {
            Ok(r) => r,
            Err(DcError::Miter(_)) => {
                stats.skipped_fanins += 1;
                continue;
            }
            Err(e) => {
                debug!("skipping {}: {e}", node.name());
                stats.skipped_solver += 1;
                continue;
            }
        };
        stats.sat_solutions += result.solver.solutions;
        let (sop, kept) = support_reduce(&isop(&result.isf));
        if is_smaller(node.function(), &sop) {
            let fanins = kept.iter().map(|k| node.fanins()[*k]).collect();
            debug!(
                "{}: {} -> {} literals",
                node.name(),
                node.function().num_literals(),
                sop.num_literals()
            );
            net.replace_node(id, fanins, sop)
                .expect("a subset of the fanins cannot create a cycle");
            stats.changed += 1;
            changed += 1;
        }
    }
    changed
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    /// PI values, in the PI order of the first network, and the name of a differing PO
    Counterexample {
        assignment: Vec<(String, bool)>,
        po: String,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("primary inputs differ: {0}")]
    InputMismatch(String),
    #[error("primary outputs differ: {0}")]
    OutputMismatch(String),
    #[error("solver gave up on output {0}")]
    Unknown(String),
}

fn name_mismatch(a: BTreeSet<&str>, b: BTreeSet<&str>) -> Option<String> {
    let diff: Vec<&str> = a.symmetric_difference(&b).copied().collect();
    (!diff.is_empty() || a.len() != b.len()).then(|| diff.join(" "))
}

fn pi_names(n: &Network) -> Vec<&str> {
    n.pis().iter().map(|p| n.node(*p).name()).collect()
}

fn po_names(n: &Network) -> BTreeSet<&str> {
    n.pos().iter().map(|(s, _)| s.as_str()).collect()
}

/// Combinational equivalence of two networks with the same PI and PO names
///
/// Random simulation looks for a cheap counterexample first; each remaining output pair is then
/// checked by SAT on its own cone.
pub fn verify(a: &Network, b: &Network) -> Result<Verdict, VerifyError> {
    let (pa, pb) = (pi_names(a), pi_names(b));
    if pa.len() != pb.len() {
        return Err(VerifyError::InputMismatch("different counts".into()));
    }
    if let Some(d) = name_mismatch(pa.iter().copied().collect(), pb.iter().copied().collect()) {
        return Err(VerifyError::InputMismatch(d));
    }
    if a.pos().len() != b.pos().len() {
        return Err(VerifyError::OutputMismatch("different counts".into()));
    }
    if let Some(d) = name_mismatch(po_names(a), po_names(b)) {
        return Err(VerifyError::OutputMismatch(d));
    }
    let (aig, diffs) = build_equivalence_miter(a, b).expect("names were checked");

    let counterexample = |values: &[bool]| {
        let words: Vec<u64> = values.iter().map(|v| *v as u64).collect();
        let sim = aig.simulate(&words);
        let po = diffs
            .iter()
            .find(|(_, e)| edge_value(&sim, *e) & 1 != 0)
            .map(|(n, _)| n.clone())
            .expect("a counterexample sets some output difference");
        Verdict::Counterexample {
            assignment: pa.iter().map(|s| s.to_string()).zip(values.iter().copied()).collect(),
            po,
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..16 {
        let words: Vec<u64> = (0..aig.num_inputs()).map(|_| rng.gen()).collect();
        let sim = aig.simulate(&words);
        let hit = edge_value(&sim, aig.outputs()[0]);
        if hit != 0 {
            let bit = hit.trailing_zeros();
            let values: Vec<bool> = words.iter().map(|w| w >> bit & 1 != 0).collect();
            return Ok(counterexample(&values));
        }
    }

    let input_node: HashMap<u32, usize> = (0..aig.num_inputs()).map(|i| (aig.input(i).node(), i)).collect();
    for (name, diff) in &diffs {
        if diff.is_constant() && diff.is_complemented() {
            continue;
        }
        let cnf = aig_to_cnf(&aig, *diff, &[]);
        match solve(&cnf, SolverConfig::default()) {
            Ok(SolveResult::Unsat) => {}
            Ok(SolveResult::Sat(model)) => {
                let mut values = vec![false; aig.num_inputs()];
                for (node, var) in cnf.node_var.iter().enumerate() {
                    if let (Some(v), Some(i)) = (var, input_node.get(&(node as u32))) {
                        values[*i] = model[*v as usize];
                    }
                }
                return Ok(counterexample(&values));
            }
            Err(_) => return Err(VerifyError::Unknown(name.clone())),
        }
    }
    Ok(Verdict::Equivalent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::Sop;

    fn or_observability() -> Network {
        let mut net = Network::new("obs");
        let a = net.add_pi("a");
        let b = net.add_pi("b");
        let g = net.add_node("g", vec![a, b], Sop::and(2)).unwrap();
        let f = net.add_node("f", vec![g, a], Sop::or(2)).unwrap();
        net.add_po("f", f);
        net
    }

    #[test]
    fn masked_node_becomes_constant() {
        let mut net = or_observability();
        let before = net.po_functions();
        let stats = mfs(&mut net, &MfsConfig::default());
        assert_eq!(stats.literals_before, 4);
        assert!(stats.literals_after < stats.literals_before);
        assert_eq!(net.po_functions(), before);
        assert!(net.find("g").is_none());
        assert_eq!(verify(&or_observability(), &net), Ok(Verdict::Equivalent));
    }

    #[test]
    fn buffers_only() {
        let mut net = Network::new("wires");
        let a = net.add_pi("a");
        let b = net.add_pi("b");
        net.add_po("a", a);
        net.add_po("b", b);
        let stats = mfs(&mut net, &MfsConfig::default());
        assert_eq!(stats.changed, 0);
        assert_eq!(stats.visited, 0);
    }

    #[test]
    fn inverted_output_is_caught() {
        let a = or_observability();
        let mut b = Network::new("obs");
        let x = b.add_pi("a");
        let y = b.add_pi("b");
        let g = b.add_node("g", vec![x, y], Sop::and(2)).unwrap();
        let f = b.add_node("f", vec![g, x], Sop::or(2).flip_var(0).flip_var(1)).unwrap();
        let nf = b.add_node("nf", vec![f], Sop::inverter()).unwrap();
        b.add_po("f", nf);
        match verify(&a, &b).unwrap() {
            Verdict::Counterexample { assignment, po } => {
                assert_eq!(po, "f");
                assert_eq!(assignment.len(), 2);
            }
            v => panic!("expected a counterexample, got {v:?}"),
        }
        assert_eq!(verify(&a, &a), Ok(Verdict::Equivalent));
    }

    #[test]
    fn name_mismatch_is_an_error() {
        let a = or_observability();
        let mut b = Network::new("other");
        let x = b.add_pi("a");
        b.add_pi("c");
        b.add_po("f", x);
        assert!(matches!(verify(&a, &b), Err(VerifyError::InputMismatch(_))));
    }
}
