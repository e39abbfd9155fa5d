//! And-inverter graphs with structural hashing, miter construction and bit-parallel simulation

use std::collections::HashMap;
use std::fmt::{self, Write};
use std::ops::Not;

use thiserror::Error;

use crate::netlist::{Network, NodeId, Sop};
use crate::windowing::Window;

/// Reference to an AIG node with an optional complement
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge(u32);

impl Edge {
    /// The constant one, i.e. the uncomplemented constant node
    pub const TRUE: Edge = Edge(0);
    pub const FALSE: Edge = Edge(1);

    pub fn new(node: u32, complemented: bool) -> Edge {
        Edge(node << 1 | complemented as u32)
    }

    pub fn node(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_complemented(self) -> bool {
        self.0 & 1 != 0
    }

    pub fn is_constant(self) -> bool {
        self.node() == 0
    }

    /// Complement the edge if `c` is set
    pub fn complement_if(self, c: bool) -> Edge {
        Edge(self.0 ^ c as u32)
    }

    pub fn raw(self) -> u32 {
        self.0
    }
}

impl Not for Edge {
    type Output = Edge;
    fn not(self) -> Edge {
        Edge(self.0 ^ 1)
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_complemented() {
            write!(f, "!{}", self.node())
        } else {
            write!(f, "{}", self.node())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AigNode {
    /// Constant one
    Const,
    /// Input with its position in the input list
    Input(usize),
    And(Edge, Edge),
}

/// Structurally hashed AND-INV graph
///
/// Node 0 is the constant. Fanins of an AND node always have smaller indices than the node.
#[derive(Clone, Debug)]
pub struct Aig {
    nodes: Vec<AigNode>,
    inputs: Vec<u32>,
    outputs: Vec<Edge>,
    hash: HashMap<(Edge, Edge), u32>,
}

impl Default for Aig {
    fn default() -> Self {
        Aig::new()
    }
}

impl Aig {
    pub fn new() -> Aig {
        Aig {
            nodes: vec![AigNode::Const],
            inputs: Vec::new(),
            outputs: Vec::new(),
            hash: HashMap::new(),
        }
    }

    pub fn add_input(&mut self) -> Edge {
        let id = self.nodes.len() as u32;
        self.nodes.push(AigNode::Input(self.inputs.len()));
        self.inputs.push(id);
        Edge::new(id, false)
    }

    pub fn input(&self, i: usize) -> Edge {
        Edge::new(self.inputs[i], false)
    }

    pub fn add_output(&mut self, e: Edge) {
        self.outputs.push(e);
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn outputs(&self) -> &[Edge] {
        &self.outputs
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_ands(&self) -> usize {
        self.nodes.len() - 1 - self.inputs.len()
    }

    pub fn node(&self, id: u32) -> AigNode {
        self.nodes[id as usize]
    }

    /// AND of two edges, reusing an existing node when possible
    pub fn and(&mut self, a: Edge, b: Edge) -> Edge {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        if a == Edge::FALSE || a == !b {
            return Edge::FALSE;
        }
        if a == Edge::TRUE || a == b {
            return b;
        }
        if let Some(&id) = self.hash.get(&(a, b)) {
            return Edge::new(id, false);
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(AigNode::And(a, b));
        self.hash.insert((a, b), id);
        Edge::new(id, false)
    }

    pub fn or(&mut self, a: Edge, b: Edge) -> Edge {
        !self.and(!a, !b)
    }

    /// Exclusive or as (a & !b) | (!a & b)
    pub fn xor(&mut self, a: Edge, b: Edge) -> Edge {
        let l = self.and(a, !b);
        let r = self.and(!a, b);
        self.or(l, r)
    }

    /// Balanced AND of a list of edges
    pub fn and_many(&mut self, edges: &[Edge]) -> Edge {
        match edges.len() {
            0 => Edge::TRUE,
            1 => edges[0],
            n => {
                let l = self.and_many(&edges[..n / 2]);
                let r = self.and_many(&edges[n / 2..]);
                self.and(l, r)
            }
        }
    }

    /// Balanced OR of a list of edges
    pub fn or_many(&mut self, edges: &[Edge]) -> Edge {
        let inv: Vec<Edge> = edges.iter().map(|e| !*e).collect();
        !self.and_many(&inv)
    }

    /// Build an SOP over the given fanin edges: balanced AND per cube, balanced OR of cubes
    pub fn add_sop(&mut self, sop: &Sop, fanins: &[Edge]) -> Edge {
        assert_eq!(sop.num_vars(), fanins.len());
        let cubes: Vec<Edge> = sop
            .cubes()
            .iter()
            .map(|c| {
                let lits: Vec<Edge> = (0..fanins.len())
                    .filter_map(|v| c.literal(v).map(|p| fanins[v].complement_if(!p)))
                    .collect();
                self.and_many(&lits)
            })
            .collect();
        self.or_many(&cubes)
    }

    /// Simulate 64 patterns at once; returns one word per node
    pub fn simulate(&self, input_words: &[u64]) -> Vec<u64> {
        assert_eq!(input_words.len(), self.inputs.len());
        let mut values = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let v = match *n {
                AigNode::Const => !0,
                AigNode::Input(i) => input_words[i],
                AigNode::And(a, b) => edge_value(&values, a) & edge_value(&values, b),
            };
            values.push(v);
        }
        values
    }

    /// Nodes in the transitive fanin of the given edges, in increasing order
    pub fn cone(&self, roots: &[Edge]) -> Vec<u32> {
        let mut mark = vec![false; self.nodes.len()];
        let mut stack: Vec<u32> = roots.iter().map(|e| e.node()).collect();
        while let Some(n) = stack.pop() {
            if mark[n as usize] {
                continue;
            }
            mark[n as usize] = true;
            if let AigNode::And(a, b) = self.nodes[n as usize] {
                stack.push(a.node());
                stack.push(b.node());
            }
        }
        (0..self.nodes.len() as u32).filter(|n| mark[*n as usize]).collect()
    }

    /// ASCII dump close to the AIGER "aag" format, for inspection
    pub fn to_aag(&self) -> String {
        let mut s = String::new();
        let var = |e: Edge| -> u32 {
            // AIGER uses literal 0 for false; our node 0 is true
            if e.is_constant() {
                (!e).raw()
            } else {
                e.raw()
            }
        };
        writeln!(
            s,
            "aag {} {} 0 {} {}",
            self.nodes.len() - 1,
            self.inputs.len(),
            self.outputs.len(),
            self.num_ands()
        )
        .unwrap();
        for i in &self.inputs {
            writeln!(s, "{}", i << 1).unwrap();
        }
        for o in &self.outputs {
            writeln!(s, "{}", var(*o)).unwrap();
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if let AigNode::And(a, b) = n {
                writeln!(s, "{} {} {}", i << 1, var(*b), var(*a)).unwrap();
            }
        }
        s
    }
}

/// Value of an edge given per-node simulation words
pub fn edge_value(values: &[u64], e: Edge) -> u64 {
    let v = values[e.node() as usize];
    if e.is_complemented() {
        !v
    } else {
        v
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MiterError {
    #[error("node {node} has {fanins} fanins, more than the limit of {cap}")]
    TooManyFanins { node: NodeId, fanins: usize, cap: usize },
}

/// Variable bindings of a don't-care miter
#[derive(Clone, Debug)]
pub struct MiterSpec {
    pub pivot: NodeId,
    /// Fanins of the pivot, in fanin order
    pub y_vars: Vec<NodeId>,
    /// Window leaves, in the order of the AIG inputs
    pub input_map: Vec<NodeId>,
    /// Signal of each pivot fanin, shared by both copies
    pub y_taps: Vec<Edge>,
    /// Copy-one and copy-two signals of each root
    pub root_pairs: Vec<(Edge, Edge)>,
}

impl MiterSpec {
    pub fn output(&self, aig: &Aig) -> Edge {
        aig.outputs()[0]
    }
}

/// Build the window logic over the given leaf signals; returns the edge of every internal node
fn build_copy(aig: &mut Aig, net: &Network, order: &[NodeId], edges: &mut HashMap<NodeId, Edge>) {
    for &id in order {
        let node = net.node(id);
        let fanins: Vec<Edge> = node.fanins().iter().map(|f| edges[f]).collect();
        let e = aig.add_sop(node.function(), &fanins);
        edges.insert(id, e);
    }
}

/// Miter of the window and of its copy with an inverter at the output of the pivot
///
/// Both copies share the leaves. Only the transitive fanout of the pivot is duplicated; the
/// single output is the OR over the roots of the XOR of the two copies.
pub fn build_miter(net: &Network, window: &Window, fanin_cap: usize) -> Result<(Aig, MiterSpec), MiterError> {
    let pivot = window.pivot;
    let y_vars = net.fanins(pivot).to_vec();
    if y_vars.len() > fanin_cap {
        return Err(MiterError::TooManyFanins {
            node: pivot,
            fanins: y_vars.len(),
            cap: fanin_cap,
        });
    }
    let mut aig = Aig::new();
    let mut copy1: HashMap<NodeId, Edge> = HashMap::new();
    for &l in &window.leaves {
        let e = aig.add_input();
        copy1.insert(l, e);
    }
    let order = window.topological_order(net);
    build_copy(&mut aig, net, &order, &mut copy1);

    let tfo = window.pivot_tfo(net);
    let mut copy2 = copy1.clone();
    copy2.insert(pivot, !copy1[&pivot]);
    let tfo_order: Vec<NodeId> = order
        .iter()
        .copied()
        .filter(|id| *id != pivot && tfo.binary_search(id).is_ok())
        .collect();
    build_copy(&mut aig, net, &tfo_order, &mut copy2);

    let root_pairs: Vec<(Edge, Edge)> = window.roots.iter().map(|r| (copy1[r], copy2[r])).collect();
    let diffs: Vec<Edge> = root_pairs.iter().map(|(a, b)| aig.xor(*a, *b)).collect();
    let out = aig.or_many(&diffs);
    aig.add_output(out);
    let y_taps = y_vars.iter().map(|y| copy1[y]).collect();
    Ok((
        aig,
        MiterSpec {
            pivot,
            y_vars,
            input_map: window.leaves.clone(),
            y_taps,
            root_pairs,
        },
    ))
}

/// Edges of every node of a network built over the given PI signals
pub fn add_network(aig: &mut Aig, net: &Network, pi_edges: &[Edge]) -> HashMap<NodeId, Edge> {
    assert_eq!(pi_edges.len(), net.pis().len());
    let mut edges: HashMap<NodeId, Edge> = net.pis().iter().copied().zip(pi_edges.iter().copied()).collect();
    build_copy(aig, net, &net.topological_order(), &mut edges);
    edges
}

/// Miter of two networks without any inverter, matching PIs and POs by name
///
/// Returns the AIG, whose inputs follow the PI order of `a`, and the XOR of each output pair.
/// The single AIG output is the OR of these XORs.
pub fn build_equivalence_miter(a: &Network, b: &Network) -> Option<(Aig, Vec<(String, Edge)>)> {
    let mut aig = Aig::new();
    let pi_edges: Vec<Edge> = a.pis().iter().map(|_| aig.add_input()).collect();
    let by_name: HashMap<&str, Edge> = a
        .pis()
        .iter()
        .zip(&pi_edges)
        .map(|(p, e)| (a.node(*p).name(), *e))
        .collect();
    let mut b_edges = Vec::with_capacity(b.pis().len());
    for p in b.pis() {
        b_edges.push(*by_name.get(b.node(*p).name())?);
    }
    if b_edges.len() != pi_edges.len() || a.pos().len() != b.pos().len() {
        return None;
    }
    let ea = add_network(&mut aig, a, &pi_edges);
    let eb = add_network(&mut aig, b, &b_edges);
    let b_pos: HashMap<&str, NodeId> = b.pos().iter().map(|(n, d)| (n.as_str(), *d)).collect();
    let mut diffs = Vec::new();
    for (name, da) in a.pos() {
        let db = b_pos.get(name.as_str())?;
        let x = aig.xor(ea[da], eb[db]);
        diffs.push((name.clone(), x));
    }
    let all: Vec<Edge> = diffs.iter().map(|(_, e)| *e).collect();
    let out = aig.or_many(&all);
    aig.add_output(out);
    Some((aig, diffs))
}
