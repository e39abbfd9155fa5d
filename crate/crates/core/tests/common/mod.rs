//! Shared helpers: random networks and a scalar reference evaluator
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;

use dcopt::netlist::Cube;
use dcopt::{Network, NodeId, Sop};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random cover with 1 to 3 cubes over `n` variables
pub fn random_sop(rng: &mut ChaCha8Rng, n: usize) -> Sop {
    let cubes = (0..rng.gen_range(1..=3))
        .map(|_| {
            let (mut pos, mut neg) = (0u64, 0u64);
            for v in 0..n {
                match rng.gen_range(0..3) {
                    0 => pos |= 1 << v,
                    1 => neg |= 1 << v,
                    _ => {}
                }
            }
            Cube::from_masks(pos, neg)
        })
        .collect();
    Sop::new(n, cubes)
}

/// Random network with up to `max_pis` inputs, `max_nodes` nodes and fanin at most `max_fanin`
///
/// Nodes without fanouts drive outputs; a few internal nodes drive outputs too.
pub fn random_network(seed: u64, max_pis: usize, max_nodes: usize, max_fanin: usize) -> Network {
    let mut r = rng(seed);
    let mut net = Network::new(&format!("rand{seed}"));
    let num_pis = r.gen_range(2..=max_pis);
    let mut signals: Vec<NodeId> = (0..num_pis).map(|i| net.add_pi(&format!("x{i}"))).collect();
    let num_nodes = r.gen_range(1..=max_nodes);
    let mut nodes = Vec::new();
    for i in 0..num_nodes {
        let k = r.gen_range(1..=max_fanin.min(signals.len()));
        // favour recent signals to get depth
        let window = signals.len().min(k + 6);
        let recent = &signals[signals.len() - window..];
        let mut fanins: Vec<NodeId> = if r.gen_bool(0.5) {
            recent.choose_multiple(&mut r, k).copied().collect()
        } else {
            signals.choose_multiple(&mut r, k).copied().collect()
        };
        fanins.sort();
        let sop = random_sop(&mut r, fanins.len());
        let id = net.add_node(&format!("n{i}"), fanins, sop).unwrap();
        signals.push(id);
        nodes.push(id);
    }
    for &id in &nodes {
        if net.fanouts(id).is_empty() || r.gen_bool(0.1) {
            let name = net.node(id).name().to_string();
            net.add_po(&name, id);
        }
    }
    net
}

/// Value of every node under a PI assignment, by recursive cube evaluation
pub fn node_values(net: &Network, assignment: u64) -> HashMap<NodeId, bool> {
    fn eval(net: &Network, id: NodeId, memo: &mut HashMap<NodeId, bool>) -> bool {
        if let Some(v) = memo.get(&id) {
            return *v;
        }
        let fanins = net.fanins(id).to_vec();
        let mut x = 0u64;
        for (j, f) in fanins.iter().enumerate() {
            if eval(net, *f, memo) {
                x |= 1 << j;
            }
        }
        let v = net
            .node(id)
            .function()
            .cubes()
            .iter()
            .any(|c| x & c.pos_mask() == c.pos_mask() && x & c.neg_mask() == 0);
        memo.insert(id, v);
        v
    }
    let mut memo: HashMap<NodeId, bool> = net
        .pis()
        .iter()
        .enumerate()
        .map(|(i, p)| (*p, assignment >> i & 1 != 0))
        .collect();
    for id in net.node_ids().collect::<Vec<_>>() {
        eval(net, id, &mut memo);
    }
    memo
}

/// Output values by name for every PI assignment; PIs are matched by position
pub fn po_table(net: &Network) -> Vec<Vec<(String, bool)>> {
    let n = net.pis().len();
    assert!(n <= 16);
    (0..1u64 << n)
        .map(|m| {
            let vals = node_values(net, m);
            let mut row: Vec<(String, bool)> = net.pos().iter().map(|(name, d)| (name.clone(), vals[d])).collect();
            row.sort();
            row
        })
        .collect()
}

/// PIs in the transitive fanin of a node
pub fn pi_support(net: &Network, id: NodeId) -> BTreeSet<NodeId> {
    let mut seen = BTreeSet::new();
    let mut out = BTreeSet::new();
    let mut stack = vec![id];
    while let Some(n) = stack.pop() {
        if !seen.insert(n) {
            continue;
        }
        if net.is_pi(n) {
            out.insert(n);
        }
        stack.extend(net.fanins(n).iter().copied());
    }
    out
}

pub fn benchmark_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../benchmarks")
}

pub fn load_benchmark(name: &str) -> Network {
    let text = std::fs::read_to_string(benchmark_dir().join(format!("{name}.blif"))).unwrap();
    dcopt::parse_blif(&text).unwrap()
}
