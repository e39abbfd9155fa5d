//! Network cleanup: constant propagation, buffer and inverter collapsing, dangling node removal

use super::{Network, NodeId, Sop};
use crate::truth::MAX_VARS;

impl Network {
    /// Replace fanins and function without any check; caller guarantees acyclicity
    pub(super) fn rewire(&mut self, id: NodeId, fanins: Vec<NodeId>, function: Sop) {
        debug_assert_eq!(fanins.len(), function.num_vars());
        let old = std::mem::take(&mut self.node_mut(id).fanins);
        for f in &old {
            if !fanins.contains(f) {
                self.node_mut(*f).fanouts.retain(|x| *x != id);
            }
        }
        for f in &fanins {
            if !old.contains(f) {
                self.node_mut(*f).fanouts.push(id);
            }
        }
        let node = self.node_mut(id);
        node.fanins = fanins;
        node.function = function;
    }

    /// Drop vacuous fanins and turn constant functions into constant nodes
    fn normalize(&mut self, id: NodeId) -> bool {
        let node = self.node(id);
        if node.fanins.is_empty() {
            return false;
        }
        let constant = match node.function.as_constant() {
            Some(v) => Some(v),
            None if node.fanins.len() <= MAX_VARS => {
                let tt = node.function.truth_table();
                if tt.is_zero() {
                    Some(false)
                } else if tt.is_one() {
                    Some(true)
                } else {
                    None
                }
            }
            None => None,
        };
        if let Some(v) = constant {
            let f = if v { Sop::one(0) } else { Sop::zero(0) };
            self.rewire(id, Vec::new(), f);
            return true;
        }
        let support = node.function.support();
        let n = node.fanins.len();
        if support.count_ones() as usize == n {
            return false;
        }
        let kept: Vec<usize> = (0..n).filter(|v| support >> v & 1 != 0).collect();
        let fanins = kept.iter().map(|v| node.fanins[*v]).collect();
        let f = node.function.restrict_vars(&kept);
        self.rewire(id, fanins, f);
        true
    }

    /// Substitute `id` in the function of `fanout` by a constant or by another signal
    fn substitute(&mut self, fanout: NodeId, id: NodeId, by: Substitution) {
        let node = self.node(fanout);
        let j = node.fanins.iter().position(|f| *f == id).unwrap();
        let mut fanins = node.fanins.clone();
        let function = match by {
            Substitution::Constant(v) => {
                fanins.remove(j);
                node.function.cofactor_remove(j, v)
            }
            Substitution::Signal(src, inverted) => {
                if let Some(k) = fanins.iter().position(|f| *f == src) {
                    fanins.remove(j);
                    node.function.merge_vars(k, j, inverted)
                } else {
                    fanins[j] = src;
                    if inverted {
                        node.function.flip_var(j)
                    } else {
                        node.function.clone()
                    }
                }
            }
        };
        self.rewire(fanout, fanins, function);
    }
}

#[derive(Clone, Copy)]
enum Substitution {
    Constant(bool),
    Signal(NodeId, bool),
}

pub(super) fn sweep(net: &mut Network) -> usize {
    let mut removed = 0;
    loop {
        let mut changed = false;
        let ids: Vec<NodeId> = net.logic_ids().collect();

        for &id in &ids {
            changed |= net.normalize(id);
        }

        for &id in &ids {
            if !net.contains(id) {
                continue;
            }
            if let Some(v) = net.node(id).constant_value() {
                for fo in net.fanouts(id).to_vec() {
                    net.substitute(fo, id, Substitution::Constant(v));
                    net.normalize(fo);
                    changed = true;
                }
                continue;
            }
            let node = net.node(id);
            if node.fanins.len() != 1 {
                continue;
            }
            let inverted = if node.function.is_buffer() {
                false
            } else if node.function.is_inverter() {
                true
            } else {
                continue;
            };
            let src = node.fanins[0];
            for fo in net.fanouts(id).to_vec() {
                net.substitute(fo, id, Substitution::Signal(src, inverted));
                net.normalize(fo);
                changed = true;
            }
            if !inverted && net.is_po_driver(id) {
                net.redirect_pos(id, src);
                changed = true;
            }
        }

        let drivers = net.po_driver_flags();
        let mut stack: Vec<NodeId> = net
            .logic_ids()
            .filter(|id| net.fanouts(*id).is_empty() && !drivers[id.index()])
            .collect();
        while let Some(id) = stack.pop() {
            if !net.contains(id) {
                continue;
            }
            let fanins = net.fanins(id).to_vec();
            net.remove_node(id);
            removed += 1;
            changed = true;
            for f in fanins {
                if !net.is_pi(f) && net.fanouts(f).is_empty() && !drivers[f.index()] {
                    stack.push(f);
                }
            }
        }

        if !changed {
            return removed;
        }
    }
}
