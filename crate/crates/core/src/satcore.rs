//! CDCL SAT solver with all-solutions enumeration projected onto a set of literals
//!
//! Two watched literals, activity-based decisions, first-UIP learning, geometric restarts and
//! activity-based deletion of learned clauses. Enumeration adds a blocking clause per projected
//! model and backjumps from it as from a conflict.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::cnf::{Cnf, Lit, Var};

#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Seed of the initial activity perturbation
    pub seed: u64,
    /// Conflicts allowed per call before giving up
    pub conflict_budget: Option<u64>,
    pub restarts: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            seed: 0,
            conflict_budget: None,
            restarts: true,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolverStats {
    pub decisions: u64,
    pub conflicts: u64,
    pub propagations: u64,
    pub solutions: u64,
    pub restarts: u64,
    pub learned: u64,
    pub deleted: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SatError {
    #[error("conflict budget of {0} exhausted")]
    ResourceLimit(u64),
    #[error("more than {0} projected solutions")]
    LimitExceeded(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveResult {
    /// Value of every variable
    Sat(Vec<bool>),
    Unsat,
}

/// Result of a projected enumeration
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    /// Distinct projected minterms in the order found; bit `j` is the value of literal `j`
    pub minterms: Vec<u64>,
    pub blocking_clauses: usize,
}

const UNASSIGNED: u8 = 2;

struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    blocking: bool,
    activity: f64,
    deleted: bool,
}

/// Max-heap of variables ordered by activity
struct VarHeap {
    heap: Vec<Var>,
    pos: Vec<Option<usize>>,
}

impl VarHeap {
    fn new(n: usize) -> VarHeap {
        VarHeap {
            heap: Vec::with_capacity(n),
            pos: vec![None; n],
        }
    }

    fn contains(&self, v: Var) -> bool {
        self.pos[v as usize].is_some()
    }

    fn insert(&mut self, v: Var, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.pos[v as usize] = Some(self.heap.len());
        self.heap.push(v);
        self.up(self.heap.len() - 1, act);
    }

    fn pop(&mut self, act: &[f64]) -> Option<Var> {
        if self.heap.is_empty() {
            return None;
        }
        let top = self.heap.swap_remove(0);
        self.pos[top as usize] = None;
        if !self.heap.is_empty() {
            self.pos[self.heap[0] as usize] = Some(0);
            self.down(0, act);
        }
        Some(top)
    }

    /// Restore the heap after the activity of `v` increased
    fn increased(&mut self, v: Var, act: &[f64]) {
        if let Some(i) = self.pos[v as usize] {
            self.up(i, act);
        }
    }

    fn less(a: Var, b: Var, act: &[f64]) -> bool {
        // ties broken by the smaller index
        act[a as usize] > act[b as usize] || (act[a as usize] == act[b as usize] && a < b)
    }

    fn up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let p = (i - 1) / 2;
            if !Self::less(v, self.heap[p], act) {
                break;
            }
            self.heap[i] = self.heap[p];
            self.pos[self.heap[i] as usize] = Some(i);
            i = p;
        }
        self.heap[i] = v;
        self.pos[v as usize] = Some(i);
    }

    fn down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        loop {
            let l = 2 * i + 1;
            if l >= self.heap.len() {
                break;
            }
            let r = l + 1;
            let c = if r < self.heap.len() && Self::less(self.heap[r], self.heap[l], act) {
                r
            } else {
                l
            };
            if !Self::less(self.heap[c], v, act) {
                break;
            }
            self.heap[i] = self.heap[c];
            self.pos[self.heap[i] as usize] = Some(i);
            i = c;
        }
        self.heap[i] = v;
        self.pos[v as usize] = Some(i);
    }
}

pub struct Solver {
    config: SolverConfig,
    clauses: Vec<Clause>,
    watches: Vec<Vec<usize>>,
    values: Vec<u8>,
    level: Vec<u32>,
    reason: Vec<Option<usize>>,
    phase: Vec<bool>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    order: VarHeap,
    /// Variables decided before all others
    priority: Vec<Var>,
    seen: Vec<bool>,
    /// Set once a conflict at level zero is found
    unsat: bool,
    num_learnts: usize,
    max_learnts: f64,
    stats: SolverStats,
}

impl Solver {
    pub fn new(num_vars: usize, config: SolverConfig) -> Solver {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let activity: Vec<f64> = (0..num_vars).map(|_| rng.gen::<f64>() * 1e-5).collect();
        let mut order = VarHeap::new(num_vars);
        for v in 0..num_vars as Var {
            order.insert(v, &activity);
        }
        Solver {
            config,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * num_vars],
            values: vec![UNASSIGNED; num_vars],
            level: vec![0; num_vars],
            reason: vec![None; num_vars],
            phase: vec![false; num_vars],
            trail: Vec::with_capacity(num_vars),
            trail_lim: Vec::new(),
            qhead: 0,
            activity,
            var_inc: 1.0,
            cla_inc: 1.0,
            order,
            priority: Vec::new(),
            seen: vec![false; num_vars],
            unsat: false,
            num_learnts: 0,
            max_learnts: 0.0,
            stats: SolverStats::default(),
        }
    }

    /// Solver loaded with the clauses of `cnf`
    pub fn from_cnf(cnf: &Cnf, config: SolverConfig) -> Solver {
        let mut s = Solver::new(cnf.num_vars, config);
        for c in &cnf.clauses {
            s.add_clause(c);
        }
        s
    }

    pub fn num_vars(&self) -> usize {
        self.values.len()
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    /// Decide these variables, in order, before any other
    pub fn set_priority(&mut self, vars: &[Var]) {
        self.priority = vars.to_vec();
    }

    fn value(&self, l: Lit) -> u8 {
        let v = self.values[l.var() as usize];
        if v == UNASSIGNED {
            v
        } else {
            v ^ l.is_negated() as u8
        }
    }

    fn is_true(&self, l: Lit) -> bool {
        self.value(l) == 1
    }

    fn is_false(&self, l: Lit) -> bool {
        self.value(l) == 0
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// Add a problem clause at level zero; returns false once the problem is known unsatisfiable
    pub fn add_clause(&mut self, lits: &[Lit]) -> bool {
        assert_eq!(self.decision_level(), 0);
        if self.unsat {
            return false;
        }
        let mut c: Vec<Lit> = lits.to_vec();
        c.sort();
        c.dedup();
        if c.windows(2).any(|w| w[0] == !w[1]) || c.iter().any(|l| self.is_true(*l)) {
            return true;
        }
        c.retain(|l| !self.is_false(*l));
        match c.len() {
            0 => {
                self.unsat = true;
                false
            }
            1 => {
                self.enqueue(c[0], None);
                if self.propagate().is_some() {
                    self.unsat = true;
                }
                !self.unsat
            }
            _ => {
                self.attach(c, false, false);
                true
            }
        }
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool, blocking: bool) -> usize {
        debug_assert!(lits.len() >= 2);
        let ci = self.clauses.len();
        self.watches[lits[0].index()].push(ci);
        self.watches[lits[1].index()].push(ci);
        self.clauses.push(Clause {
            lits,
            learnt,
            blocking,
            activity: 0.0,
            deleted: false,
        });
        if learnt {
            self.num_learnts += 1;
            self.stats.learned += 1;
        }
        ci
    }

    fn enqueue(&mut self, l: Lit, reason: Option<usize>) {
        let v = l.var() as usize;
        debug_assert_eq!(self.values[v], UNASSIGNED);
        self.values[v] = !l.is_negated() as u8;
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Unit propagation; returns a conflicting clause
    fn propagate(&mut self) -> Option<usize> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[false_lit.index()]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            while i < ws.len() {
                let ci = ws[i];
                i += 1;
                if self.clauses[ci].deleted {
                    continue;
                }
                {
                    let lits = &mut self.clauses[ci].lits;
                    if lits[0] == false_lit {
                        lits.swap(0, 1);
                    }
                }
                let first = self.clauses[ci].lits[0];
                if self.is_true(first) {
                    ws[j] = ci;
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..self.clauses[ci].lits.len() {
                    let l = self.clauses[ci].lits[k];
                    if !self.is_false(l) {
                        self.clauses[ci].lits.swap(1, k);
                        self.watches[l.index()].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = ci;
                j += 1;
                if self.is_false(first) {
                    conflict = Some(ci);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, Some(ci));
                }
            }
            ws.truncate(j);
            // watches added to this list while it was taken out
            let added = std::mem::take(&mut self.watches[false_lit.index()]);
            ws.extend(added);
            self.watches[false_lit.index()] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn bump_var(&mut self, v: Var) {
        self.activity[v as usize] += self.var_inc;
        if self.activity[v as usize] > 1e100 {
            for a in self.activity.iter_mut() {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.order.increased(v, &self.activity);
    }

    fn bump_clause(&mut self, ci: usize) {
        if !self.clauses[ci].learnt {
            return;
        }
        self.clauses[ci].activity += self.cla_inc;
        if self.clauses[ci].activity > 1e20 {
            for c in self.clauses.iter_mut().filter(|c| c.learnt) {
                c.activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    /// First-UIP conflict analysis; returns the learned clause, asserting literal first, and
    /// the backjump level
    fn analyze(&mut self, confl: usize) -> (Vec<Lit>, u32) {
        let current = self.decision_level();
        let mut learnt = vec![Lit::pos(0)];
        let mut pending = 0;
        let mut ci = confl;
        let mut index = self.trail.len();
        let mut p: Option<Lit> = None;
        loop {
            self.bump_clause(ci);
            let start = if p.is_some() { 1 } else { 0 };
            for k in start..self.clauses[ci].lits.len() {
                let q = self.clauses[ci].lits[k];
                let v = q.var() as usize;
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump_var(q.var());
                    if self.level[v] >= current {
                        pending += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var() as usize] {
                    break;
                }
            }
            let lit = self.trail[index];
            p = Some(lit);
            self.seen[lit.var() as usize] = false;
            pending -= 1;
            if pending == 0 {
                break;
            }
            ci = self.reason[lit.var() as usize].expect("implied literal has a reason");
            // the implied literal sits first in its reason clause
            let lits = &mut self.clauses[ci].lits;
            if lits[0] != lit {
                let pos = lits.iter().position(|l| *l == lit).unwrap();
                lits.swap(0, pos);
            }
        }
        learnt[0] = !p.unwrap();
        for l in &learnt[1..] {
            self.seen[l.var() as usize] = false;
        }
        let mut bt = 0;
        if learnt.len() > 1 {
            let mut max_i = 1;
            for k in 2..learnt.len() {
                if self.level[learnt[k].var() as usize] > self.level[learnt[max_i].var() as usize] {
                    max_i = k;
                }
            }
            learnt.swap(1, max_i);
            bt = self.level[learnt[1].var() as usize];
        }
        (learnt, bt)
    }

    fn cancel_until(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for k in (lim..self.trail.len()).rev() {
            let l = self.trail[k];
            let v = l.var() as usize;
            self.values[v] = UNASSIGNED;
            self.reason[v] = None;
            self.phase[v] = !l.is_negated();
            self.order.insert(l.var(), &self.activity);
        }
        self.trail.truncate(lim);
        self.trail_lim.truncate(level as usize);
        self.qhead = lim;
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        for &v in &self.priority {
            if self.values[v as usize] == UNASSIGNED {
                return Some(Lit::new(v, !self.phase[v as usize]));
            }
        }
        while let Some(v) = self.order.pop(&self.activity) {
            if self.values[v as usize] == UNASSIGNED {
                return Some(Lit::new(v, !self.phase[v as usize]));
            }
        }
        None
    }

    fn locked(&self, ci: usize) -> bool {
        let l = self.clauses[ci].lits[0];
        self.is_true(l) && self.reason[l.var() as usize] == Some(ci)
    }

    /// Delete the less active half of the learned clauses; blocking clauses are kept
    fn reduce_db(&mut self) {
        let mut cand: Vec<usize> = (0..self.clauses.len())
            .filter(|&ci| {
                let c = &self.clauses[ci];
                c.learnt && !c.blocking && !c.deleted && c.lits.len() > 2
            })
            .filter(|&ci| !self.locked(ci))
            .collect();
        cand.sort_by(|a, b| {
            self.clauses[*a]
                .activity
                .partial_cmp(&self.clauses[*b].activity)
                .unwrap()
                .then(a.cmp(b))
        });
        for &ci in &cand[..cand.len() / 2] {
            let c = &mut self.clauses[ci];
            c.deleted = true;
            c.lits = Vec::new();
            self.num_learnts -= 1;
            self.stats.deleted += 1;
        }
    }

    /// Learn from a conflict at a positive level and backjump
    fn learn_from(&mut self, confl: usize) {
        let (learnt, bt) = self.analyze(confl);
        self.cancel_until(bt);
        if learnt.len() == 1 {
            self.enqueue(learnt[0], None);
        } else {
            let first = learnt[0];
            let ci = self.attach(learnt, true, false);
            self.bump_clause(ci);
            self.enqueue(first, Some(ci));
        }
        self.var_inc /= 0.95;
        self.cla_inc /= 0.999;
    }

    /// Search until a model is found (returned as true) or unsatisfiability is proved
    fn search(&mut self, conflicts_left: &mut Option<u64>) -> Result<bool, SatError> {
        if self.unsat {
            return Ok(false);
        }
        let mut restart_limit = 100.0f64;
        let mut since_restart = 0u64;
        if self.max_learnts == 0.0 {
            self.max_learnts = (self.clauses.len() as f64 / 3.0).max(100.0);
        }
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                since_restart += 1;
                if let Some(left) = conflicts_left {
                    if *left == 0 {
                        self.cancel_until(0);
                        return Err(SatError::ResourceLimit(self.config.conflict_budget.unwrap_or(0)));
                    }
                    *left -= 1;
                }
                if self.decision_level() == 0 {
                    self.unsat = true;
                    return Ok(false);
                }
                self.learn_from(confl);
            } else {
                if self.config.restarts && since_restart as f64 >= restart_limit {
                    self.stats.restarts += 1;
                    since_restart = 0;
                    restart_limit *= 1.5;
                    self.cancel_until(0);
                    continue;
                }
                if self.num_learnts as f64 >= self.max_learnts {
                    self.reduce_db();
                    self.max_learnts *= 1.1;
                }
                match self.pick_branch() {
                    None => return Ok(true),
                    Some(l) => {
                        self.stats.decisions += 1;
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(l, None);
                    }
                }
            }
        }
    }

    fn model(&self) -> Vec<bool> {
        self.values.iter().map(|v| *v == 1).collect()
    }

    /// Decide satisfiability of the clauses added so far
    pub fn solve(&mut self) -> Result<SolveResult, SatError> {
        let mut budget = self.config.conflict_budget;
        let res = if self.search(&mut budget)? {
            let m = self.model();
            self.stats.solutions += 1;
            SolveResult::Sat(m)
        } else {
            SolveResult::Unsat
        };
        self.cancel_until(0);
        Ok(res)
    }

    /// Enumerate the distinct values the projection literals take over all models
    ///
    /// Fails when more than `limit` projected solutions exist or when the conflict budget runs
    /// out. Blocking clauses stay in the solver afterwards.
    pub fn enumerate_projected(&mut self, proj: &[Lit], limit: usize) -> Result<Enumeration, SatError> {
        assert!(proj.len() <= 64);
        let mut vars: Vec<Var> = proj.iter().map(|l| l.var()).collect();
        vars.dedup();
        self.set_priority(&vars);
        let mut budget = self.config.conflict_budget;
        let mut found = Enumeration {
            minterms: Vec::new(),
            blocking_clauses: 0,
        };
        loop {
            if !self.search(&mut budget)? {
                break;
            }
            let m = proj
                .iter()
                .enumerate()
                .fold(0u64, |acc, (j, l)| acc | (self.is_true(*l) as u64) << j);
            if found.minterms.len() == limit {
                self.cancel_until(0);
                return Err(SatError::LimitExceeded(limit));
            }
            found.minterms.push(m);
            self.stats.solutions += 1;

            // literals falsified by the model, highest level first
            let mut block: Vec<Lit> = proj.iter().map(|l| if self.is_true(*l) { !*l } else { *l }).collect();
            block.sort();
            block.dedup();
            block.sort_by_key(|l| std::cmp::Reverse(self.level[l.var() as usize]));
            let top = block.first().map_or(0, |l| self.level[l.var() as usize]);
            if top == 0 {
                // the projection is fixed by the problem itself
                self.unsat = true;
                break;
            }
            found.blocking_clauses += 1;
            let second = block.get(1).map_or(0, |l| self.level[l.var() as usize]);
            if block.len() == 1 {
                self.cancel_until(0);
                self.enqueue(block[0], None);
                self.enqueue_check();
            } else if second < top {
                // asserting at the second highest level
                self.cancel_until(second);
                let first = block[0];
                let ci = self.attach(block, true, true);
                self.num_learnts -= 1;
                self.enqueue(first, Some(ci));
            } else {
                self.cancel_until(top);
                let ci = self.attach(block, true, true);
                self.num_learnts -= 1;
                self.stats.conflicts += 1;
                self.learn_from(ci);
            }
        }
        self.cancel_until(0);
        Ok(found)
    }

    /// Record a level-zero contradiction among pending units
    fn enqueue_check(&mut self) {
        if self.propagate().is_some() {
            self.unsat = true;
        }
    }
}

/// Satisfiability of a clause set
pub fn solve(cnf: &Cnf, config: SolverConfig) -> Result<SolveResult, SatError> {
    Solver::from_cnf(cnf, config).solve()
}

/// Projected models of a clause set over `proj`, limited to `limit` solutions
pub fn enumerate_projected(
    cnf: &Cnf,
    proj: &[Lit],
    limit: usize,
    config: SolverConfig,
) -> Result<(Enumeration, SolverStats), SatError> {
    let mut s = Solver::from_cnf(cnf, config);
    let e = s.enumerate_projected(proj, limit)?;
    Ok((e, s.stats()))
}
