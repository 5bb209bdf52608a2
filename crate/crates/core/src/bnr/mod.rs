//! Branch-and-reduce: reductions at every node, max-degree branching with
//! mirrors and satellites, packing constraints, component splitting.

mod bounds;
mod branching;

pub use bounds::{lb_clique_cover, lb_cycle_cover, lb_lp, lower_bound};
pub use branching::{mirrors, satellites};

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::budget::{Budget, Status};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::kernel::{Reducer, RuleSet, Step, Trace};
use crate::verify::is_vertex_cover;

/// Result of an exact search.
#[derive(Clone, Debug, Serialize)]
pub struct SolveOutcome {
    pub status: Status,
    /// Best cover found; for `Optimal` it is a minimum cover.
    pub cover: Option<Vec<Vertex>>,
    pub nodes: u64,
    pub elapsed: Duration,
}

impl SolveOutcome {
    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Fate {
    Cover,
    Free,
    /// Hidden by a rule that decides membership only at lift time.
    Deferred,
}

enum Packing {
    Ok,
    Violated,
    Force(Vertex),
}

struct Search<'b> {
    g: Graph,
    trace: Trace,
    reducer: Reducer,
    fate: Vec<Fate>,
    constraints: Vec<Vec<Vertex>>,
    /// Size to beat.
    best: usize,
    best_cover: Option<Vec<Vertex>>,
    input_n: usize,
    budget: &'b mut Budget,
    aborted: bool,
}

impl<'b> Search<'b> {
    fn new(g: Graph, best: usize, rules: RuleSet, budget: &'b mut Budget) -> Self {
        let input_n = g.capacity();
        Search {
            g,
            trace: Trace::new(),
            reducer: Reducer::new(rules),
            fate: vec![Fate::Deferred; input_n],
            constraints: Vec::new(),
            best,
            best_cover: None,
            input_n,
            budget,
            aborted: false,
        }
    }

    fn note(&mut self, from: usize) {
        if self.fate.len() < self.g.capacity() {
            self.fate.resize(self.g.capacity(), Fate::Deferred);
        }
        let fate = &mut self.fate;
        let mut set = |vs: &[Vertex], f: Fate| {
            for &v in vs {
                fate[v as usize] = f;
            }
        };
        for step in &self.trace.steps()[from..] {
            match step {
                Step::Isolated(v) => set(&[*v], Fate::Free),
                Step::Pendant { v, u } => {
                    set(&[*v], Fate::Free);
                    set(&[*u], Fate::Cover);
                }
                Step::LpFixed { ones, zeros } => {
                    set(ones, Fate::Cover);
                    set(zeros, Fate::Free);
                }
                Step::Unconfined(v) => set(&[*v], Fate::Cover),
                Step::TwinEdges { u, v, nbrs } => {
                    set(nbrs, Fate::Cover);
                    set(&[*u, *v], Fate::Free);
                }
                Step::Funnel { u, v, shared, .. } => {
                    set(shared, Fate::Cover);
                    set(&[*u, *v], Fate::Deferred);
                }
                Step::Fold { v, u, w, .. } => set(&[*v, *u, *w], Fate::Deferred),
                Step::TwinGadget { u, v, nbrs, .. } => {
                    set(&[*u, *v], Fate::Deferred);
                    set(nbrs, Fate::Deferred);
                }
                Step::Desk { a, b, .. } => {
                    set(a, Fate::Deferred);
                    set(b, Fate::Deferred);
                }
                Step::Include(vs) => set(vs, Fate::Cover),
                Step::Exclude(vs) => set(vs, Fate::Free),
            }
        }
    }

    fn reduce(&mut self) {
        let from = self.trace.len();
        self.reducer.reduce(&mut self.g, &mut self.trace);
        self.note(from);
    }

    /// Pushes `include` into the cover and `exclude` out of it, hiding both.
    fn take(&mut self, include: &[Vertex], exclude: &[Vertex]) {
        let from = self.trace.len();
        let include: Vec<Vertex> = include.iter().copied().filter(|&v| self.g.is_alive(v)).collect();
        for &v in &include {
            self.g.hide(v);
        }
        if !include.is_empty() {
            self.trace.push(Step::Include(include));
        }
        let exclude: Vec<Vertex> = exclude.iter().copied().filter(|&v| self.g.is_alive(v)).collect();
        for &v in &exclude {
            debug_assert_eq!(self.g.degree(v), 0);
            self.g.hide(v);
        }
        if !exclude.is_empty() {
            self.trace.push(Step::Exclude(exclude));
        }
        self.note(from);
    }

    fn packing(&self) -> Packing {
        for vars in &self.constraints {
            let mut open = None;
            let mut n_open = 0;
            let mut satisfied = false;
            for &x in vars {
                if self.g.is_alive(x) {
                    open = Some(x);
                    n_open += 1;
                } else if self.fate[x as usize] != Fate::Cover {
                    satisfied = true;
                    break;
                }
            }
            if satisfied {
                continue;
            }
            match (n_open, open) {
                (0, _) => return Packing::Violated,
                (1, Some(x)) => return Packing::Force(x),
                _ => {}
            }
        }
        Packing::Ok
    }

    fn record(&mut self) {
        let mut cover = vec![false; self.g.capacity()];
        self.trace.lift_in_place(&mut cover).expect("branch trace lifts");
        let lifted: Vec<Vertex> = (0..self.input_n as Vertex).filter(|&v| cover[v as usize]).collect();
        debug_assert_eq!(lifted.len(), self.trace.offset());
        self.best = lifted.len();
        self.best_cover = Some(lifted);
    }

    fn node(&mut self) {
        if !self.budget.tick() {
            self.aborted = true;
            return;
        }
        let cp = self.g.checkpoint();
        let (tl, cl) = (self.trace.len(), self.constraints.len());
        self.expand();
        self.g.rollback(cp);
        self.trace.truncate(tl);
        self.constraints.truncate(cl);
    }

    fn expand(&mut self) {
        loop {
            self.reduce();
            match self.packing() {
                Packing::Ok => break,
                Packing::Violated => return,
                Packing::Force(x) => {
                    let nx = self.g.neighbors(x).to_vec();
                    self.take(&nx, &[x]);
                }
            }
        }
        let offset = self.trace.offset();
        if offset >= self.best {
            return;
        }
        if self.g.edge_count() == 0 {
            self.record();
            return;
        }
        if offset + lower_bound(&self.g) >= self.best {
            return;
        }
        let mut comps: Vec<Vec<Vertex>> = self.g.components().into_iter().filter(|c| c.len() > 1).collect();
        if comps.len() > 1 {
            comps.sort_by_key(|c| (c.len(), c[0]));
            self.split(comps);
            return;
        }
        self.branch();
    }

    fn split(&mut self, comps: Vec<Vec<Vertex>>) {
        let subs: Vec<(Graph, Vec<Vertex>)> = comps.iter().map(|c| self.g.induced_subgraph(c)).collect();
        let lbs: Vec<usize> = subs.iter().map(|(s, _)| lower_bound(s)).collect();
        let base = self.trace.offset();
        let mut rest: usize = lbs.iter().sum();
        let mut solved = 0usize;
        let mut chosen: Vec<Vertex> = Vec::new();
        for (i, (sub, ids)) in subs.into_iter().enumerate() {
            rest -= lbs[i];
            let limit = self.best.saturating_sub(base + solved + rest);
            if limit <= lbs[i] {
                return;
            }
            let rules = self.reducer.rules;
            let mut child = Search::new(sub, limit, rules, self.budget);
            child.node();
            if child.aborted {
                self.aborted = true;
                return;
            }
            let Some(cover) = child.best_cover else { return };
            solved += cover.len();
            chosen.extend(cover.iter().map(|&v| ids[v as usize]));
        }
        let all: Vec<Vertex> = comps.into_iter().flatten().collect();
        chosen.sort_unstable();
        let free: Vec<Vertex> = all.into_iter().filter(|v| chosen.binary_search(v).is_err()).collect();
        self.take(&chosen, &free);
        if self.trace.offset() < self.best {
            self.record();
        }
    }

    fn child(&mut self, include: &[Vertex], exclude: &[Vertex], constraint: Option<Vec<Vertex>>) {
        let cp = self.g.checkpoint();
        let (tl, cl) = (self.trace.len(), self.constraints.len());
        self.take(include, exclude);
        self.constraints.extend(constraint);
        self.node();
        self.g.rollback(cp);
        self.trace.truncate(tl);
        self.constraints.truncate(cl);
    }

    fn branch(&mut self) {
        let v = self.g.max_degree_vertex().expect("graph has edges");
        let mut nv = self.g.neighbors(v).to_vec();
        nv.sort_unstable();
        let mirrored = mirrors(&self.g, v);
        if !mirrored.is_empty() {
            let mut with = vec![v];
            with.extend(mirrored);
            self.child(&with, &[], None);
            if !self.aborted {
                self.child(&nv, &[v], None);
            }
            return;
        }
        self.child(&[v], &[], Some(nv.clone()));
        if self.aborted {
            return;
        }
        // v stays out; a satellite in the cover would give an equal cover found above
        let mut out = vec![v];
        out.extend(satellites(&self.g, v));
        if out.iter().enumerate().any(|(i, &a)| out[i + 1..].iter().any(|&b| self.g.adjacent(a, b))) {
            return;
        }
        let mut inc: Vec<Vertex> = out.iter().flat_map(|&x| self.g.neighbors(x).iter().copied()).collect();
        inc.sort_unstable();
        inc.dedup();
        self.child(&inc, &out, None);
    }
}

/// Limits for [`solve_bnr`].
#[derive(Clone, Debug)]
pub struct BnrLimits {
    pub budget: Budget,
    pub rules: RuleSet,
}

impl Default for BnrLimits {
    fn default() -> Self {
        BnrLimits { budget: Budget::unlimited(), rules: RuleSet::ALL }
    }
}

/// Searches for a cover smaller than `initial`, which must cover `g`.
/// `Optimal` means the returned cover (possibly `initial`) is minimum.
pub fn solve_bnr(g: &Graph, initial: &[Vertex], mut limits: BnrLimits) -> Result<SolveOutcome> {
    if !is_vertex_cover(g, initial) {
        return Err(Error::Logic("initial set does not cover the graph".into()));
    }
    let mut initial = initial.to_vec();
    initial.sort_unstable();
    initial.dedup();
    let start = Instant::now();
    let used_before = limits.budget.used();
    let mut work = g.clone();
    work.clear_log();
    let mut search = Search::new(work, initial.len(), limits.rules, &mut limits.budget);
    search.node();
    let aborted = search.aborted;
    let cover = search.best_cover.take().unwrap_or(initial);
    debug_assert!(is_vertex_cover(g, &cover));
    Ok(SolveOutcome {
        status: if aborted { Status::TimedOut } else { Status::Optimal },
        cover: Some(cover),
        nodes: limits.budget.used() - used_before,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::brute_force_vc;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
        let mut e = Vec::new();
        for i in 0..n as u32 {
            for j in i + 1..n as u32 {
                if rng.gen_bool(p) {
                    e.push((i, j));
                }
            }
        }
        Graph::from_edges(n, &e).unwrap()
    }

    fn all(g: &Graph) -> Vec<Vertex> {
        g.alive_sorted()
    }

    #[test]
    fn edgeless() {
        let g = Graph::new(4);
        let out = solve_bnr(&g, &[], BnrLimits::default()).unwrap();
        assert!(out.is_optimal());
        assert_eq!(out.cover.unwrap(), Vec::<Vertex>::new());
        assert_eq!(out.nodes, 1);
    }

    #[test]
    fn rejects_invalid_initial() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert!(matches!(solve_bnr(&g, &[], BnrLimits::default()), Err(Error::Logic(_))));
    }

    #[test]
    fn matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=16);
            let p = rng.gen_range(0.1..0.9);
            let g = random_graph(&mut rng, n, p);
            let (opt, _) = brute_force_vc(&g).unwrap();
            let out = solve_bnr(&g, &all(&g), BnrLimits::default()).unwrap();
            assert!(out.is_optimal());
            let cover = out.cover.unwrap();
            assert!(is_vertex_cover(&g, &cover));
            assert_eq!(cover.len(), opt);
        }
    }

    #[test]
    fn branching_alone_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for rules in [RuleSet::NONE, RuleSet::only(crate::kernel::Rule::Pendant)] {
            for _ in 0..300 {
                let n = rng.gen_range(1..=14);
                let p = rng.gen_range(0.1..0.9);
                let g = random_graph(&mut rng, n, p);
                let (opt, _) = brute_force_vc(&g).unwrap();
                let out = solve_bnr(&g, &all(&g), BnrLimits { rules, ..Default::default() }).unwrap();
                assert_eq!(out.cover.unwrap().len(), opt);
            }
        }
    }

    #[test]
    fn tight_priming_still_proves_optimality() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..300 {
            let n = rng.gen_range(1..=16);
            let g = random_graph(&mut rng, n, 0.4);
            let (opt, w) = brute_force_vc(&g).unwrap();
            let out = solve_bnr(&g, &w, BnrLimits::default()).unwrap();
            assert!(out.is_optimal());
            assert_eq!(out.cover.unwrap().len(), opt);
        }
    }

    #[test]
    fn node_budget_times_out() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let g = random_graph(&mut rng, 120, 0.1);
        let limits = BnrLimits { budget: Budget::nodes(2), rules: RuleSet::ALL };
        let out = solve_bnr(&g, &all(&g), limits).unwrap();
        assert_eq!(out.status, Status::TimedOut);
        assert!(is_vertex_cover(&g, &out.cover.unwrap()));
    }
}
