use serde::Serialize;

use super::lp;
use super::trace::{Step, Trace};
use crate::graph::{Graph, Vertex};

/// Which reductions a [`Reducer`] runs. Order is fixed: pendant,
/// unconfined, LP, fold, twin, funnel, desk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RuleSet {
    pub pendant: bool,
    pub unconfined: bool,
    pub lp: bool,
    pub fold: bool,
    pub twin: bool,
    pub funnel: bool,
    pub desk: bool,
}

impl RuleSet {
    pub const ALL: RuleSet =
        RuleSet { pendant: true, unconfined: true, lp: true, fold: true, twin: true, funnel: true, desk: true };
    pub const NONE: RuleSet =
        RuleSet { pendant: false, unconfined: false, lp: false, fold: false, twin: false, funnel: false, desk: false };

    /// Only the given rule.
    pub fn only(rule: Rule) -> RuleSet {
        let mut r = RuleSet::NONE;
        match rule {
            Rule::Pendant => r.pendant = true,
            Rule::Unconfined => r.unconfined = true,
            Rule::Lp => r.lp = true,
            Rule::Fold => r.fold = true,
            Rule::Twin => r.twin = true,
            Rule::Funnel => r.funnel = true,
            Rule::Desk => r.desk = true,
        }
        r
    }
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet::ALL
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Rule {
    Pendant,
    Unconfined,
    Lp,
    Fold,
    Twin,
    Funnel,
    Desk,
}

impl Rule {
    pub const ORDER: [Rule; 7] =
        [Rule::Pendant, Rule::Unconfined, Rule::Lp, Rule::Fold, Rule::Twin, Rule::Funnel, Rule::Desk];
}

/// Per-rule application counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RuleStats {
    pub pendant: usize,
    pub isolated: usize,
    pub unconfined: usize,
    pub lp_fixed: usize,
    pub fold: usize,
    pub twin: usize,
    pub funnel: usize,
    pub desk: usize,
    pub passes: usize,
}

impl RuleStats {
    pub fn firings(&self) -> usize {
        self.pendant + self.isolated + self.unconfined + self.lp_fixed + self.fold + self.twin + self.funnel + self.desk
    }
}

/// Applies reductions to a graph in place, logging each to a [`Trace`].
#[derive(Clone, Debug, Default)]
pub struct Reducer {
    pub rules: RuleSet,
    pub stats: RuleStats,
    mark: Vec<u32>,
    mark2: Vec<u32>,
    count: Vec<u32>,
    stamp: u32,
}

impl Reducer {
    pub fn new(rules: RuleSet) -> Self {
        Reducer { rules, ..Default::default() }
    }

    fn fit(&mut self, g: &Graph) {
        let cap = g.capacity();
        if self.mark.len() < cap {
            self.mark.resize(cap, 0);
            self.mark2.resize(cap, 0);
            self.count.resize(cap, 0);
        }
    }

    fn next_stamp(&mut self) -> u32 {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.mark2.iter_mut().for_each(|m| *m = 0);
            self.count.iter_mut().for_each(|m| *m = 0);
            self.stamp = 1;
        }
        self.stamp
    }

    /// Runs the enabled rules to a fixpoint: whenever a rule changes the
    /// graph, start over with the first rule. Returns whether anything changed.
    pub fn reduce(&mut self, g: &mut Graph, trace: &mut Trace) -> bool {
        let mut any = false;
        'restart: loop {
            self.stats.passes += 1;
            for rule in Rule::ORDER {
                if self.apply(rule, g, trace) {
                    any = true;
                    continue 'restart;
                }
            }
            return any;
        }
    }

    /// One pass of a single rule over all alive vertices, if enabled.
    pub fn apply(&mut self, rule: Rule, g: &mut Graph, trace: &mut Trace) -> bool {
        match rule {
            Rule::Pendant if self.rules.pendant => self.pendant(g, trace),
            Rule::Unconfined if self.rules.unconfined => self.unconfined(g, trace),
            Rule::Lp if self.rules.lp => self.lp(g, trace),
            Rule::Fold if self.rules.fold => self.fold(g, trace),
            Rule::Twin if self.rules.twin => self.twin(g, trace),
            Rule::Funnel if self.rules.funnel => self.funnel(g, trace),
            Rule::Desk if self.rules.desk => self.desk(g, trace),
            _ => false,
        }
    }

    /// Removes isolated vertices and takes the neighbor of every degree-one
    /// vertex, cascading until no vertex of degree at most one remains.
    pub fn pendant(&mut self, g: &mut Graph, trace: &mut Trace) -> bool {
        let mut queue: std::collections::VecDeque<Vertex> =
            g.alive_sorted().into_iter().filter(|&v| g.degree(v) <= 1).collect();
        let mut changed = false;
        while let Some(v) = queue.pop_front() {
            if !g.is_alive(v) {
                continue;
            }
            match g.degree(v) {
                0 => {
                    trace.push(Step::Isolated(v));
                    g.hide(v);
                    self.stats.isolated += 1;
                }
                1 => {
                    let u = g.neighbors(v)[0];
                    trace.push(Step::Pendant { v, u });
                    g.hide(v);
                    let around: Vec<Vertex> = g.neighbors(u).to_vec();
                    g.hide(u);
                    queue.extend(around.into_iter().filter(|&x| g.degree(x) <= 1));
                    self.stats.pendant += 1;
                }
                _ => continue,
            }
            changed = true;
        }
        changed
    }

    /// Takes every unconfined vertex into the cover.
    pub fn unconfined(&mut self, g: &mut Graph, trace: &mut Trace) -> bool {
        self.fit(g);
        let mut changed = false;
        for v in g.alive_sorted() {
            if g.is_alive(v) && g.degree(v) > 0 && self.is_unconfined(g, v) {
                trace.push(Step::Unconfined(v));
                g.hide(v);
                self.stats.unconfined += 1;
                changed = true;
            }
        }
        changed
    }

    /// Grows `S = {v}` by the confinement loop; true when `v` is unconfined.
    pub fn is_unconfined(&mut self, g: &Graph, v: Vertex) -> bool {
        self.fit(g);
        // mark holds S, count holds N[S], mark2 dedups candidates per round
        let s_in = self.next_stamp();
        self.mark[v as usize] = s_in;
        self.count[v as usize] = s_in;
        for &u in g.neighbors(v) {
            self.count[u as usize] = s_in;
        }
        let mut set = vec![v];
        loop {
            let seen = self.next_stamp();
            let mut best: Option<(usize, Vertex, Vertex)> = None;
            for &s in &set {
                for &u in g.neighbors(s) {
                    if self.mark2[u as usize] == seen {
                        continue;
                    }
                    self.mark2[u as usize] = seen;
                    let in_set = g.neighbors(u).iter().filter(|&&x| self.mark[x as usize] == s_in).count();
                    if in_set != 1 {
                        continue;
                    }
                    let mut outside = 0usize;
                    let mut witness = u;
                    for &x in g.neighbors(u) {
                        if self.count[x as usize] != s_in {
                            outside += 1;
                            witness = x;
                            if outside > 1 {
                                break;
                            }
                        }
                    }
                    if best.is_none_or(|(k, bu, _)| outside < k || (outside == k && u < bu)) {
                        best = Some((outside, u, witness));
                    }
                }
            }
            match best {
                Some((0, _, _)) => return true,
                Some((1, _, w)) => {
                    set.push(w);
                    self.mark[w as usize] = s_in;
                    self.count[w as usize] = s_in;
                    for &x in g.neighbors(w) {
                        self.count[x as usize] = s_in;
                    }
                }
                _ => return false,
            }
        }
    }

    /// Fixes the integral part of the minimal half-integral LP solution.
    pub fn lp(&mut self, g: &mut Graph, trace: &mut Trace) -> bool {
        let mut changed = false;
        loop {
            let (zeros, ones) = lp::integral_part(g);
            if zeros.is_empty() && ones.is_empty() {
                return changed;
            }
            for &v in ones.iter().chain(&zeros) {
                g.hide(v);
            }
            self.stats.lp_fixed += zeros.len() + ones.len();
            trace.push(Step::LpFixed { ones, zeros });
            changed = true;
        }
    }

    /// Folds each degree-2 vertex whose neighbors are non-adjacent.
    pub fn fold(&mut self, g: &mut Graph, trace: &mut Trace) -> bool {
        self.fit(g);
        let mut changed = false;
        for v in g.alive_sorted() {
            if !g.is_alive(v) || g.degree(v) != 2 {
                continue;
            }
            let (u, w) = (g.neighbors(v)[0], g.neighbors(v)[1]);
            let (u, w) = (u.min(w), u.max(w));
            if g.adjacent(u, w) {
                continue;
            }
            let st = self.next_stamp();
            self.mark[v as usize] = st;
            self.mark[u as usize] = st;
            self.mark[w as usize] = st;
            let mut nb = Vec::with_capacity(g.degree(u) + g.degree(w));
            for &x in g.neighbors(u).iter().chain(g.neighbors(w)) {
                if self.mark[x as usize] != st {
                    self.mark[x as usize] = st;
                    nb.push(x);
                }
            }
            nb.sort_unstable();
            g.hide(v);
            g.hide(u);
            g.hide(w);
            let folded = g.materialize(&nb);
            self.fit(g);
            trace.push(Step::Fold { v, u, w, folded });
            self.stats.fold += 1;
            changed = true;
        }
        changed
    }

    /// Degree-3 twins `u`, `v` with `N(u) = N(v)`.
    pub fn twin(&mut self, g: &mut Graph, trace: &mut Trace) -> bool {
        self.fit(g);
        let mut changed = false;
        for u in g.alive_sorted() {
            if !g.is_alive(u) || g.degree(u) != 3 {
                continue;
            }
            let st = self.next_stamp();
            for &x in g.neighbors(u) {
                self.mark[x as usize] = st;
            }
            let first = g.neighbors(u)[0];
            let twin = g
                .neighbors(first)
                .iter()
                .copied()
                .filter(|&v| v != u && g.degree(v) == 3 && g.neighbors(v).iter().all(|&x| self.mark[x as usize] == st))
                .min();
            let Some(v) = twin else { continue };
            let mut nbrs: [Vertex; 3] = g.neighbors(u).try_into().unwrap();
            nbrs.sort_unstable();
            let [a, b, c] = nbrs;
            let has_edge = g.adjacent(a, b) || g.adjacent(a, c) || g.adjacent(b, c);
            if has_edge {
                for x in [u, v, a, b, c] {
                    g.hide(x);
                }
                trace.push(Step::TwinEdges { u, v, nbrs });
            } else {
                // vertices at distance exactly two from u, other than v
                let st2 = self.next_stamp();
                for x in [u, v, a, b, c] {
                    self.mark[x as usize] = st2;
                }
                let mut far = Vec::new();
                for x in nbrs {
                    for &y in g.neighbors(x) {
                        if self.mark[y as usize] != st2 {
                            self.mark[y as usize] = st2;
                            far.push(y);
                        }
                    }
                }
                far.sort_unstable();
                for x in [u, v, a, b, c] {
                    g.hide(x);
                }
                let gadget = g.materialize(&far);
                self.fit(g);
                trace.push(Step::TwinGadget { u, v, nbrs, gadget });
            }
            self.stats.twin += 1;
            changed = true;
        }
        changed
    }

    /// Finds `u` in `N(v)` with `N(v) \ {u}` a clique.
    fn funnel_partner(&mut self, g: &Graph, v: Vertex) -> Option<Vertex> {
        let d = g.degree(v);
        if d == 0 {
            return None;
        }
        if g.neighbors(v).iter().filter(|&&x| g.degree(x) + 1 < d).count() > 1 {
            return None;
        }
        let st = self.next_stamp();
        for &x in g.neighbors(v) {
            self.mark[x as usize] = st;
        }
        // inner degree within N(v); clique members other than u miss at most u
        let mut far = Vec::new();
        let mut near = Vec::new();
        for &x in g.neighbors(v) {
            let inner = g.neighbors(x).iter().filter(|&&y| self.mark[y as usize] == st).count();
            if inner + 2 < d {
                far.push(x);
            } else if inner + 1 < d {
                near.push(x);
            }
            if far.len() > 1 {
                return None;
            }
        }
        match (far.as_slice(), near.len()) {
            ([], 0) => g.neighbors(v).iter().copied().min(),
            ([], 2) => {
                let (a, b) = (near[0], near[1]);
                (!g.adjacent(a, b)).then_some(a.min(b))
            }
            ([u], _) => near.iter().all(|&x| !g.adjacent(x, *u)).then_some(*u),
            _ => None,
        }
    }

    /// Alternative reduction on funnels: `{u}` / `{v}` with `N(v) \ {u}` a clique.
    pub fn funnel(&mut self, g: &mut Graph, trace: &mut Trace) -> bool {
        self.fit(g);
        let mut changed = false;
        for v in g.alive_sorted() {
            if !g.is_alive(v) {
                continue;
            }
            let Some(u) = self.funnel_partner(g, v) else { continue };
            let st = self.next_stamp();
            for &x in g.neighbors(v) {
                self.mark[x as usize] = st;
            }
            let mut shared = Vec::new();
            let mut u_side = Vec::new();
            for &x in g.neighbors(u) {
                if x == v {
                    continue;
                }
                if self.mark[x as usize] == st {
                    shared.push(x);
                } else {
                    u_side.push(x);
                }
            }
            let st2 = self.next_stamp();
            for &x in &shared {
                self.mark[x as usize] = st2;
            }
            let mut v_side: Vec<Vertex> =
                g.neighbors(v).iter().copied().filter(|&x| x != u && self.mark[x as usize] != st2).collect();
            shared.sort_unstable();
            u_side.sort_unstable();
            v_side.sort_unstable();
            g.hide(u);
            g.hide(v);
            for &x in &shared {
                g.hide(x);
            }
            let edges_added = add_biclique(g, &u_side, &v_side);
            trace.push(Step::Funnel { u, v, shared, u_side, v_side, edges_added });
            self.stats.funnel += 1;
            changed = true;
        }
        changed
    }

    /// Alternative reduction on desks: chordless 4-cycles `a1 b1 a2 b2` of
    /// degree 3-4 vertices with small, disjoint outer neighborhoods.
    pub fn desk(&mut self, g: &mut Graph, trace: &mut Trace) -> bool {
        self.fit(g);
        let mut changed = false;
        let deg_ok = |g: &Graph, x: Vertex| (3..=4).contains(&g.degree(x));
        for a1 in g.alive_sorted() {
            if !g.is_alive(a1) || !deg_ok(g, a1) {
                continue;
            }
            let Some((a, b, a_side, b_side)) = self.find_desk(g, a1, deg_ok) else { continue };
            for x in a.iter().chain(&b) {
                g.hide(*x);
            }
            let edges_added = add_biclique(g, &a_side, &b_side);
            trace.push(Step::Desk { a, b, a_side, b_side, edges_added });
            self.stats.desk += 1;
            changed = true;
        }
        changed
    }

    #[allow(clippy::type_complexity)]
    fn find_desk(
        &mut self,
        g: &Graph,
        a1: Vertex,
        deg_ok: impl Fn(&Graph, Vertex) -> bool,
    ) -> Option<([Vertex; 2], [Vertex; 2], Vec<Vertex>, Vec<Vertex>)> {
        let mut nb: Vec<Vertex> = g.neighbors(a1).to_vec();
        nb.sort_unstable();
        for i in 0..nb.len() {
            let b1 = nb[i];
            if !deg_ok(g, b1) {
                continue;
            }
            for &b2 in &nb[i + 1..] {
                if !deg_ok(g, b2) || g.adjacent(b1, b2) {
                    continue;
                }
                let mut a2s: Vec<Vertex> = g
                    .neighbors(b1)
                    .iter()
                    .copied()
                    .filter(|&a2| a2 != a1 && deg_ok(g, a2) && g.adjacent(a2, b2) && !g.adjacent(a1, a2))
                    .collect();
                a2s.sort_unstable();
                for a2 in a2s {
                    let outer = |x: Vertex, y: Vertex, skip: [Vertex; 2]| {
                        let mut s: Vec<Vertex> = g
                            .neighbors(x)
                            .iter()
                            .chain(g.neighbors(y))
                            .copied()
                            .filter(|z| !skip.contains(z))
                            .collect();
                        s.sort_unstable();
                        s.dedup();
                        s
                    };
                    let a_side = outer(a1, a2, [b1, b2]);
                    if a_side.len() > 2 {
                        continue;
                    }
                    let b_side = outer(b1, b2, [a1, a2]);
                    if b_side.len() > 2 || a_side.iter().any(|x| b_side.contains(x)) {
                        continue;
                    }
                    return Some(([a1, a2], [b1, b2], a_side, b_side));
                }
            }
        }
        None
    }
}

fn add_biclique(g: &mut Graph, left: &[Vertex], right: &[Vertex]) -> usize {
    let mut added = 0;
    for &x in left {
        for &y in right {
            if g.add_edge(x, y) {
                added += 1;
            }
        }
    }
    added
}
