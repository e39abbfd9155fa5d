//! Windows around a node: a bounded sub-network including reconvergent paths
//!
//! A window has a set of leaves, through which every path from the network inputs to the window
//! passes, a set of roots whose values are observed outside the window, and the internal nodes on
//! paths between them. The don't-cares computed for a node in its window are a subset of the
//! don't-cares computed in the whole network.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::netlist::{Network, NodeId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WindowError {
    #[error("node {0} is a primary input")]
    PrimaryInput(NodeId),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
}

/// Scope of the don't-care computation for a node
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Context {
    /// The whole network
    Global,
    /// Window with the given number of logic levels on the fanin and fanout sides
    Window { fanin_levels: usize, fanout_levels: usize },
}

impl Context {
    pub fn window(fanin_levels: usize, fanout_levels: usize) -> Context {
        Context::Window {
            fanin_levels,
            fanout_levels,
        }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Context::Global => write!(f, "global"),
            Context::Window {
                fanin_levels,
                fanout_levels,
            } => write!(f, "{fanin_levels}x{fanout_levels}"),
        }
    }
}

impl FromStr for Context {
    type Err = String;

    /// Parse "NxM" or "global"
    fn from_str(s: &str) -> Result<Context, String> {
        if s.eq_ignore_ascii_case("global") {
            return Ok(Context::Global);
        }
        let (n, m) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("invalid window '{s}', expected NxM"))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| format!("invalid window '{s}', expected NxM"))
        };
        Ok(Context::window(parse(n)?, parse(m)?))
    }
}

/// Sub-network used as the context of a pivot node
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub pivot: NodeId,
    /// Nodes outside the window feeding it, by increasing id
    pub leaves: Vec<NodeId>,
    /// Window nodes observed outside the window, by increasing id
    pub roots: Vec<NodeId>,
    /// Window nodes, by increasing id
    pub internal: Vec<NodeId>,
    pub context: Context,
    /// Number of node visits performed while building the window
    pub visited: usize,
}

impl Window {
    pub fn contains(&self, id: NodeId) -> bool {
        self.internal.binary_search(&id).is_ok()
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        self.leaves.binary_search(&id).is_ok()
    }

    /// Internal nodes ordered from the leaves to the roots
    pub fn topological_order(&self, net: &Network) -> Vec<NodeId> {
        let mut done = BTreeSet::new();
        let mut ret = Vec::with_capacity(self.internal.len());
        for &start in &self.internal {
            if done.contains(&start) {
                continue;
            }
            let mut stack = vec![(start, 0usize)];
            done.insert(start);
            while let Some(&mut (id, ref mut next)) = stack.last_mut() {
                let fanins = net.fanins(id);
                if *next < fanins.len() {
                    let f = fanins[*next];
                    *next += 1;
                    if self.contains(f) && done.insert(f) {
                        stack.push((f, 0));
                    }
                } else {
                    ret.push(id);
                    stack.pop();
                }
            }
        }
        ret
    }

    /// Internal nodes in the transitive fanout of the pivot, by increasing id
    pub fn pivot_tfo(&self, net: &Network) -> Vec<NodeId> {
        let set = tfo_within(net, self.pivot, |id| self.contains(id));
        set.into_iter().collect()
    }
}

/// Nodes at distance at most `levels` from `start` on the fanin side, with the visit count
fn collect_tfi_counted(net: &Network, start: &[NodeId], levels: usize) -> (BTreeSet<NodeId>, usize) {
    collect_counted(start, levels, |id| net.fanins(id))
}

fn collect_tfo_counted(net: &Network, start: &[NodeId], levels: usize) -> (BTreeSet<NodeId>, usize) {
    collect_counted(start, levels, |id| net.fanouts(id))
}

fn collect_counted<'a, F>(start: &[NodeId], levels: usize, next: F) -> (BTreeSet<NodeId>, usize)
where
    F: Fn(NodeId) -> &'a [NodeId],
{
    let mut seen: BTreeSet<NodeId> = start.iter().copied().collect();
    let mut frontier: Vec<NodeId> = seen.iter().copied().collect();
    let mut visited = frontier.len();
    for _ in 0..levels {
        let mut new_frontier = Vec::new();
        for id in frontier {
            for &n in next(id) {
                visited += 1;
                if seen.insert(n) {
                    new_frontier.push(n);
                }
            }
        }
        if new_frontier.is_empty() {
            break;
        }
        frontier = new_frontier;
    }
    (seen, visited)
}

/// Nodes whose shortest fanin-side distance from `start` is at most `levels`; includes `start`
pub fn collect_nodes_tfi(net: &Network, start: &[NodeId], levels: usize) -> BTreeSet<NodeId> {
    collect_tfi_counted(net, start, levels).0
}

/// Nodes whose shortest fanout-side distance from `start` is at most `levels`; includes `start`
pub fn collect_nodes_tfo(net: &Network, start: &[NodeId], levels: usize) -> BTreeSet<NodeId> {
    collect_tfo_counted(net, start, levels).0
}

/// Transitive fanout of `start` restricted to nodes accepted by `inside`
fn tfo_within<F: Fn(NodeId) -> bool>(net: &Network, start: NodeId, inside: F) -> BTreeSet<NodeId> {
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(id) = stack.pop() {
        for &fo in net.fanouts(id) {
            if inside(fo) && seen.insert(fo) {
                stack.push(fo);
            }
        }
    }
    seen
}

/// Finish a window from a candidate node set
///
/// Roots are nodes that drive an output or a node outside the set, restricted to the
/// transitive fanout of the pivot. Nodes that do not reach a root are pruned, except the pivot.
fn finish(net: &Network, pivot: NodeId, mut set: BTreeSet<NodeId>, context: Context, mut visited: usize) -> Window {
    let drivers = net.po_driver_flags();
    let tfo = tfo_within(net, pivot, |id| set.contains(&id));
    let roots: Vec<NodeId> = tfo
        .iter()
        .copied()
        .filter(|id| drivers[id.index()] || net.fanouts(*id).iter().any(|fo| !set.contains(fo)))
        .collect();
    visited += tfo.len();

    let mut kept: BTreeSet<NodeId> = roots.iter().copied().collect();
    kept.insert(pivot);
    let mut stack: Vec<NodeId> = kept.iter().copied().collect();
    while let Some(id) = stack.pop() {
        for &fi in net.fanins(id) {
            visited += 1;
            if set.contains(&fi) && kept.insert(fi) {
                stack.push(fi);
            }
        }
    }
    set = kept;

    let mut leaves = BTreeSet::new();
    for &id in &set {
        for &fi in net.fanins(id) {
            if !set.contains(&fi) {
                leaves.insert(fi);
            }
        }
    }
    Window {
        pivot,
        leaves: leaves.into_iter().collect(),
        roots,
        internal: set.into_iter().collect(),
        context,
        visited,
    }
}

fn check_pivot(net: &Network, pivot: NodeId) -> Result<(), WindowError> {
    if !net.contains(pivot) {
        return Err(WindowError::UnknownNode(pivot));
    }
    if net.is_pi(pivot) {
        return Err(WindowError::PrimaryInput(pivot));
    }
    Ok(())
}

/// Build the window with `fanin_levels` TFI levels and `fanout_levels` TFO levels around `pivot`
pub fn build_window(
    net: &Network,
    pivot: NodeId,
    fanin_levels: usize,
    fanout_levels: usize,
) -> Result<Window, WindowError> {
    check_pivot(net, pivot)?;
    let total = fanin_levels + fanout_levels;
    let (tfi1, v1) = collect_tfi_counted(net, &[pivot], fanin_levels);
    let (tfo1, v2) = collect_tfo_counted(net, &[pivot], fanout_levels);
    let tfo1: Vec<NodeId> = tfo1.into_iter().collect();
    let tfi1: Vec<NodeId> = tfi1.into_iter().collect();
    let (tfi2, v3) = collect_tfi_counted(net, &tfo1, total);
    let (tfo2, v4) = collect_tfo_counted(net, &tfi1, total);
    let set: BTreeSet<NodeId> = tfi2.intersection(&tfo2).copied().filter(|id| !net.is_pi(*id)).collect();
    Ok(finish(
        net,
        pivot,
        set,
        Context::window(fanin_levels, fanout_levels),
        v1 + v2 + v3 + v4,
    ))
}

/// Whole-network context of `pivot`: every logic node feeding an output reachable from it
pub fn build_global_context(net: &Network, pivot: NodeId) -> Result<Window, WindowError> {
    check_pivot(net, pivot)?;
    let drivers = net.po_driver_flags();
    let tfo = tfo_within(net, pivot, |_| true);
    let mut set: BTreeSet<NodeId> = tfo.iter().copied().filter(|id| drivers[id.index()]).collect();
    let mut stack: Vec<NodeId> = set.iter().copied().collect();
    while let Some(id) = stack.pop() {
        for &fi in net.fanins(id) {
            if !net.is_pi(fi) && set.insert(fi) {
                stack.push(fi);
            }
        }
    }
    set.insert(pivot);
    let visited = tfo.len() + set.len();
    Ok(finish(net, pivot, set, Context::Global, visited))
}

/// Build the context requested for `pivot`
pub fn build_context(net: &Network, pivot: NodeId, context: Context) -> Result<Window, WindowError> {
    match context {
        Context::Global => build_global_context(net, pivot),
        Context::Window {
            fanin_levels,
            fanout_levels,
        } => build_window(net, pivot, fanin_levels, fanout_levels),
    }
}
