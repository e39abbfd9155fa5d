//! Boolean networks: a DAG of nodes with SOP local functions
//!
//! Node ids are stable. Removing a node leaves a hole, and ids are never reused, so that
//! windows and miters can keep referring to nodes across modifications.

mod blif;
mod sop;
mod sweep;

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use thiserror::Error;

pub use blif::{parse_blif, write_blif, BlifError};
pub use sop::{Cube, Sop, MAX_CUBE_VARS};

use crate::truth::{TruthTable, MAX_VARS};

/// Identifier of a node in a [`Network`]
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// A primary input or a logic node
#[derive(Clone, Debug)]
pub struct Node {
    name: String,
    is_pi: bool,
    fanins: Vec<NodeId>,
    function: Sop,
    fanouts: Vec<NodeId>,
}

impl Node {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_pi(&self) -> bool {
        self.is_pi
    }

    pub fn fanins(&self) -> &[NodeId] {
        &self.fanins
    }

    pub fn fanouts(&self) -> &[NodeId] {
        &self.fanouts
    }

    /// Local function over the fanins, in fanin order
    pub fn function(&self) -> &Sop {
        &self.function
    }

    /// Constant logic node: no fanin and a constant function
    pub fn constant_value(&self) -> Option<bool> {
        if self.is_pi || !self.fanins.is_empty() {
            None
        } else {
            self.function.as_constant()
        }
    }

    /// Truth table of the local function; at most 16 fanins
    pub fn truth_table(&self) -> TruthTable {
        self.function.truth_table()
    }
}

/// Errors raised when modifying a network
#[derive(Debug, Error, PartialEq, Eq)]
pub enum NetworkError {
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("node {0} is a primary input")]
    PrimaryInput(NodeId),
    #[error("replacing {0} would create a combinational cycle")]
    Cycle(NodeId),
    #[error("function has {got} variables but node has {expected} fanins")]
    ArityMismatch { expected: usize, got: usize },
    #[error("duplicate fanin {0}")]
    DuplicateFanin(NodeId),
    #[error("duplicate signal name {0}")]
    DuplicateName(String),
}

/// Combinational Boolean network
#[derive(Clone, Debug, Default)]
pub struct Network {
    name: String,
    nodes: Vec<Option<Node>>,
    pis: Vec<NodeId>,
    pos: Vec<(String, NodeId)>,
}

impl Network {
    pub fn new(name: &str) -> Network {
        Network {
            name: name.to_string(),
            ..Default::default()
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn add_pi(&mut self, name: &str) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(Some(Node {
            name: name.to_string(),
            is_pi: true,
            fanins: Vec::new(),
            function: Sop::zero(0),
            fanouts: Vec::new(),
        }));
        self.pis.push(id);
        id
    }

    /// Add a logic node; fanins must already exist, so the network stays acyclic
    pub fn add_node(&mut self, name: &str, fanins: Vec<NodeId>, function: Sop) -> Result<NodeId, NetworkError> {
        if function.num_vars() != fanins.len() {
            return Err(NetworkError::ArityMismatch {
                expected: fanins.len(),
                got: function.num_vars(),
            });
        }
        for (i, f) in fanins.iter().enumerate() {
            if !self.contains(*f) {
                return Err(NetworkError::UnknownNode(*f));
            }
            if fanins[..i].contains(f) {
                return Err(NetworkError::DuplicateFanin(*f));
            }
        }
        let id = NodeId(self.nodes.len() as u32);
        for f in &fanins {
            self.node_mut(*f).fanouts.push(id);
        }
        self.nodes.push(Some(Node {
            name: name.to_string(),
            is_pi: false,
            fanins,
            function,
            fanouts: Vec::new(),
        }));
        Ok(id)
    }

    pub fn add_po(&mut self, name: &str, driver: NodeId) {
        assert!(self.contains(driver), "unknown PO driver {driver}");
        self.pos.push((name.to_string(), driver));
    }

    pub fn contains(&self, id: NodeId) -> bool {
        matches!(self.nodes.get(id.index()), Some(Some(_)))
    }

    pub fn node(&self, id: NodeId) -> &Node {
        self.nodes[id.index()].as_ref().expect("removed node")
    }

    fn node_mut(&mut self, id: NodeId) -> &mut Node {
        self.nodes[id.index()].as_mut().expect("removed node")
    }

    pub fn get(&self, id: NodeId) -> Option<&Node> {
        self.nodes.get(id.index()).and_then(|n| n.as_ref())
    }

    /// One past the largest node id ever allocated
    pub fn id_bound(&self) -> usize {
        self.nodes.len()
    }

    /// All live nodes, PIs included, by increasing id
    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.is_some())
            .map(|(i, _)| NodeId(i as u32))
    }

    /// All live logic nodes by increasing id
    pub fn logic_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.node_ids().filter(|id| !self.node(*id).is_pi)
    }

    pub fn pis(&self) -> &[NodeId] {
        &self.pis
    }

    pub fn pos(&self) -> &[(String, NodeId)] {
        &self.pos
    }

    pub fn is_pi(&self, id: NodeId) -> bool {
        self.node(id).is_pi
    }

    pub fn fanins(&self, id: NodeId) -> &[NodeId] {
        &self.node(id).fanins
    }

    pub fn fanouts(&self, id: NodeId) -> &[NodeId] {
        &self.node(id).fanouts
    }

    /// Whether the node drives at least one primary output
    pub fn is_po_driver(&self, id: NodeId) -> bool {
        self.pos.iter().any(|(_, d)| *d == id)
    }

    /// Per-node flag telling whether it drives a primary output
    pub fn po_driver_flags(&self) -> Vec<bool> {
        let mut ret = vec![false; self.nodes.len()];
        for (_, d) in &self.pos {
            ret[d.index()] = true;
        }
        ret
    }

    /// Look up a PI or logic node by name
    pub fn find(&self, name: &str) -> Option<NodeId> {
        self.node_ids().find(|id| self.node(*id).name == name)
    }

    /// Number of logic nodes
    pub fn num_logic_nodes(&self) -> usize {
        self.logic_ids().count()
    }

    /// Total number of SOP literals over all logic nodes
    pub fn literal_count(&self) -> usize {
        self.logic_ids().map(|id| self.node(id).function.num_literals()).sum()
    }

    /// Logic nodes ordered so that every node comes before its fanouts
    ///
    /// Among the nodes that are ready, the smallest id is picked first.
    pub fn topological_order(&self) -> Vec<NodeId> {
        let mut pending: Vec<usize> = self
            .nodes
            .iter()
            .map(|n| n.as_ref().map_or(0, |n| n.fanins.len()))
            .collect();
        let mut heap = BinaryHeap::new();
        for id in self.node_ids() {
            if pending[id.index()] == 0 {
                heap.push(Reverse(id));
            }
        }
        let mut ret = Vec::new();
        while let Some(Reverse(id)) = heap.pop() {
            if !self.is_pi(id) {
                ret.push(id);
            }
            for &fo in &self.node(id).fanouts {
                pending[fo.index()] -= 1;
                if pending[fo.index()] == 0 {
                    heap.push(Reverse(fo));
                }
            }
        }
        ret
    }

    /// Logic nodes ordered from the outputs towards the inputs
    ///
    /// Every node appears before all of its transitive fanins. Among the nodes whose fanouts have
    /// all been emitted, the smallest id is picked first.
    pub fn reverse_topological_order(&self) -> Vec<NodeId> {
        let mut pending: Vec<usize> = self
            .nodes
            .iter()
            .map(|n| n.as_ref().map_or(0, |n| n.fanouts.len()))
            .collect();
        let mut heap = BinaryHeap::new();
        for id in self.node_ids() {
            if pending[id.index()] == 0 {
                heap.push(Reverse(id));
            }
        }
        let mut ret = Vec::new();
        while let Some(Reverse(id)) = heap.pop() {
            if !self.is_pi(id) {
                ret.push(id);
            }
            for &fi in &self.node(id).fanins {
                pending[fi.index()] -= 1;
                if pending[fi.index()] == 0 {
                    heap.push(Reverse(fi));
                }
            }
        }
        ret
    }

    /// Whether `target` is in the transitive fanout of `source` (inclusive)
    pub fn reaches(&self, source: NodeId, target: NodeId) -> bool {
        let mut visited = vec![false; self.nodes.len()];
        let mut stack = vec![source];
        while let Some(n) = stack.pop() {
            if n == target {
                return true;
            }
            if visited[n.index()] {
                continue;
            }
            visited[n.index()] = true;
            stack.extend(self.node(n).fanouts.iter().copied());
        }
        false
    }

    /// Replace the fanins and the local function of a logic node
    pub fn replace_node(&mut self, id: NodeId, fanins: Vec<NodeId>, function: Sop) -> Result<(), NetworkError> {
        if !self.contains(id) {
            return Err(NetworkError::UnknownNode(id));
        }
        if self.is_pi(id) {
            return Err(NetworkError::PrimaryInput(id));
        }
        if function.num_vars() != fanins.len() {
            return Err(NetworkError::ArityMismatch {
                expected: fanins.len(),
                got: function.num_vars(),
            });
        }
        for (i, f) in fanins.iter().enumerate() {
            if !self.contains(*f) {
                return Err(NetworkError::UnknownNode(*f));
            }
            if fanins[..i].contains(f) {
                return Err(NetworkError::DuplicateFanin(*f));
            }
        }
        let old = &self.node(id).fanins;
        for f in &fanins {
            if !old.contains(f) && self.reaches(id, *f) {
                return Err(NetworkError::Cycle(id));
            }
        }
        self.rewire(id, fanins, function);
        Ok(())
    }

    /// Remove a logic node without fanouts that drives no output
    fn remove_node(&mut self, id: NodeId) {
        let node = self.nodes[id.index()].take().expect("removed node");
        debug_assert!(node.fanouts.is_empty() && !node.is_pi);
        for f in &node.fanins {
            self.node_mut(*f).fanouts.retain(|x| *x != id);
        }
    }

    /// Redirect every output driven by `from` to `to`
    fn redirect_pos(&mut self, from: NodeId, to: NodeId) {
        for (_, d) in self.pos.iter_mut() {
            if *d == from {
                *d = to;
            }
        }
    }

    /// Check the structural invariants; returns a description of the first violation
    pub fn check(&self) -> Result<(), String> {
        for id in self.node_ids() {
            let n = self.node(id);
            if n.is_pi && !n.fanins.is_empty() {
                return Err(format!("PI {id} has fanins"));
            }
            if n.function.num_vars() != n.fanins.len() {
                return Err(format!("node {id} function arity mismatch"));
            }
            for f in &n.fanins {
                if !self.contains(*f) {
                    return Err(format!("node {id} has removed fanin {f}"));
                }
                if !self.node(*f).fanouts.contains(&id) {
                    return Err(format!("fanout list of {f} misses {id}"));
                }
            }
            for f in &n.fanouts {
                if !self.contains(*f) || !self.node(*f).fanins.contains(&id) {
                    return Err(format!("fanout {f} of {id} is not a fanin user"));
                }
            }
            let mut fo = n.fanouts.clone();
            fo.sort();
            fo.dedup();
            if fo.len() != n.fanouts.len() {
                return Err(format!("duplicate fanouts on {id}"));
            }
        }
        for (name, d) in &self.pos {
            if !self.contains(*d) {
                return Err(format!("output {name} driven by removed node {d}"));
            }
        }
        if self.topological_order().len() != self.num_logic_nodes() {
            return Err("network has a cycle".to_string());
        }
        Ok(())
    }

    /// Global functions of every node over the PIs, by exhaustive evaluation; at most 16 PIs
    pub fn global_functions(&self) -> Vec<Option<TruthTable>> {
        let n = self.pis.len();
        assert!(n <= MAX_VARS, "exhaustive evaluation limited to {MAX_VARS} inputs");
        let mut ret: Vec<Option<TruthTable>> = vec![None; self.nodes.len()];
        for (i, pi) in self.pis.iter().enumerate() {
            ret[pi.index()] = Some(TruthTable::var(n, i));
        }
        for id in self.topological_order() {
            let node = self.node(id);
            let inputs: Vec<&TruthTable> = node.fanins.iter().map(|f| ret[f.index()].as_ref().unwrap()).collect();
            ret[id.index()] = Some(node.function.eval_tables(&inputs, n));
        }
        ret
    }

    /// Global functions of the outputs over the PIs; at most 16 PIs
    pub fn po_functions(&self) -> Vec<TruthTable> {
        let g = self.global_functions();
        self.pos.iter().map(|(_, d)| g[d.index()].clone().unwrap()).collect()
    }

    /// Propagate constants, collapse buffers and inverters, remove dangling nodes
    ///
    /// Runs to a fixpoint and returns the number of removed nodes. Output functions are preserved.
    pub fn sweep(&mut self) -> usize {
        sweep::sweep(self)
    }
}
