//! Exhaustive data reduction and lifting of kernel covers.

pub mod lp;
mod rules;
mod trace;

pub use rules::{Reducer, Rule, RuleSet, RuleStats};
pub use trace::{Step, Trace};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::verify::is_vertex_cover;

/// A reduced instance plus everything needed to map its covers back.
#[derive(Clone, Debug)]
pub struct KernelResult {
    /// The kernel, renumbered densely.
    pub kernel: Graph,
    /// `kernel_ids[i]` is the id of kernel vertex `i` in the working graph.
    pub kernel_ids: Vec<Vertex>,
    pub trace: Trace,
    pub stats: RuleStats,
    input_n: usize,
}

impl KernelResult {
    /// Cover vertices forced by the reductions.
    pub fn offset(&self) -> usize {
        self.trace.offset()
    }

    pub fn n_prime(&self) -> usize {
        self.kernel.alive_count()
    }

    pub fn m_prime(&self) -> usize {
        self.kernel.edge_count()
    }

    /// Number of vertices of the graph that was kernelized.
    pub fn input_n(&self) -> usize {
        self.input_n
    }

    /// Maps a cover of the kernel (kernel ids) to a cover of the input graph.
    pub fn lift(&self, kernel_cover: &[Vertex]) -> Result<Vec<Vertex>> {
        if !is_vertex_cover(&self.kernel, kernel_cover) {
            return Err(Error::Logic("lift called with a set that does not cover the kernel".into()));
        }
        let cap = self.kernel_ids.iter().map(|&v| v as usize + 1).max().unwrap_or(0).max(self.input_n);
        let mut cover = vec![false; cap];
        for &v in kernel_cover {
            let id = *self
                .kernel_ids
                .get(v as usize)
                .ok_or_else(|| Error::Logic(format!("kernel vertex {v} out of range")))?;
            cover[id as usize] = true;
        }
        self.trace.lift_in_place(&mut cover)?;
        Ok((0..self.input_n as Vertex).filter(|&v| cover[v as usize]).collect())
    }
}

/// Kernelizes with every rule enabled.
pub fn kernelize(g: &Graph) -> KernelResult {
    kernelize_with(g, RuleSet::ALL)
}

/// Runs the enabled rules to a fixpoint on a copy of `g`.
pub fn kernelize_with(g: &Graph, rules: RuleSet) -> KernelResult {
    let mut work = g.clone();
    work.clear_log();
    let mut trace = Trace::new();
    let mut reducer = Reducer::new(rules);
    reducer.reduce(&mut work, &mut trace);
    let (kernel, kernel_ids) = work.compact();
    log::debug!(
        "kernel n'={} m'={} offset={} firings={}",
        kernel.alive_count(),
        kernel.edge_count(),
        trace.offset(),
        reducer.stats.firings()
    );
    KernelResult { kernel, kernel_ids, trace, stats: reducer.stats, input_n: g.capacity() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::brute_force_vc;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn g(n: usize, e: &[(u32, u32)]) -> Graph {
        Graph::from_edges(n, e).unwrap()
    }

    fn cycle(n: u32) -> Graph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        g(n as usize, &e)
    }

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
        let mut e = Vec::new();
        for i in 0..n as u32 {
            for j in i + 1..n as u32 {
                if rng.gen_bool(p) {
                    e.push((i, j));
                }
            }
        }
        g(n, &e)
    }

    fn solve_and_lift(k: &KernelResult) -> Vec<Vertex> {
        let (_, kc) = brute_force_vc(&k.kernel).unwrap();
        k.lift(&kc).unwrap()
    }

    fn single(rule: Rule, gr: &Graph) -> (Graph, Trace, bool) {
        let mut work = gr.clone();
        let mut t = Trace::new();
        let changed = Reducer::new(RuleSet::ALL).apply(rule, &mut work, &mut t);
        (work, t, changed)
    }

    #[test]
    fn p3() {
        let k = kernelize(&g(3, &[(0, 1), (1, 2)]));
        assert_eq!(k.n_prime(), 0);
        assert_eq!(k.offset(), 1);
        assert_eq!(k.lift(&[]).unwrap(), vec![1]);
    }

    #[test]
    fn pendant_examples() {
        // P4: optimum 2 ({1, 2})
        let p4 = g(4, &[(0, 1), (1, 2), (2, 3)]);
        let (w, t, changed) = single(Rule::Pendant, &p4);
        assert!(changed);
        assert_eq!(w.alive_count(), 0);
        assert_eq!(t.offset(), 2);
        let star = g(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]);
        let (w, t, _) = single(Rule::Pendant, &star);
        assert_eq!((w.alive_count(), t.offset()), (0, 1));
        assert!(!single(Rule::Pendant, &cycle(4)).2);
    }

    #[test]
    fn fold_examples() {
        for (gr, opt) in [(g(3, &[(0, 1), (1, 2)]), 1), (cycle(5), 3), (cycle(4), 2)] {
            let (w, t, changed) = single(Rule::Fold, &gr);
            assert!(changed);
            let (kopt, _) = brute_force_vc(&w).unwrap();
            assert_eq!(kopt + t.offset(), opt);
        }
        // P3 folds into one isolated vertex; lifting an empty cover gives the center
        let (w, t, _) = single(Rule::Fold, &g(3, &[(0, 1), (1, 2)]));
        assert_eq!((w.alive_count(), w.edge_count()), (1, 0));
        let mut c = vec![false; w.capacity()];
        t.lift_in_place(&mut c).unwrap();
        assert_eq!(c, vec![false, true, false, false]);
    }

    #[test]
    fn lp_examples() {
        let (w, t, changed) = single(Rule::Lp, &g(2, &[(0, 1)]));
        assert!(changed);
        assert_eq!((w.alive_count(), t.offset()), (0, 1));
        assert!(!single(Rule::Lp, &g(3, &[(0, 1), (1, 2), (0, 2)])).2);
        let (w, t, changed) = single(Rule::Lp, &g(4, &[(0, 1), (0, 2), (0, 3)]));
        assert!(changed);
        assert_eq!((w.alive_count(), t.offset()), (0, 1));
        assert!(!single(Rule::Lp, &cycle(5)).2);
    }

    #[test]
    fn unconfined_examples() {
        let k3 = g(3, &[(0, 1), (1, 2), (0, 2)]);
        let mut r = Reducer::new(RuleSet::ALL);
        assert!(r.is_unconfined(&k3, 0));
        let (_, t, changed) = single(Rule::Unconfined, &k3);
        assert!(changed);
        assert_eq!(t.offset(), 2);
        // C5 from 0: u=1 leaves {2}, S={0,2}; then u=3 has nothing outside N[S]
        assert!(r.is_unconfined(&cycle(5), 0));
        // C6 from 0: S grows to {0,2,4}, then every u in N(S) has two neighbors in S
        assert!(!r.is_unconfined(&cycle(6), 0));
        // diamond: the tip 1 grows S to {1,3}, then both candidates see two members of S
        assert!(!r.is_unconfined(&g(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]), 1));
        assert!(!single(Rule::Unconfined, &Graph::new(5)).2);
    }

    #[test]
    fn twin_examples() {
        // u=0, v=1 twins over {2,3,4}; edge (2,3)
        let with_edge = g(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3)]);
        let (w, t, changed) = single(Rule::Twin, &with_edge);
        assert!(changed);
        assert!(matches!(t.steps()[0], Step::TwinEdges { .. }));
        assert_eq!((w.alive_count(), t.offset()), (0, 3));
        assert_eq!(brute_force_vc(&with_edge).unwrap().0, 3);

        let k23 = g(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]);
        let (w, t, _) = single(Rule::Twin, &k23);
        assert!(matches!(t.steps()[0], Step::TwinGadget { gadget: 5, .. }));
        assert_eq!((w.alive_count(), w.edge_count()), (1, 0));
        let mut c = vec![false; 6];
        t.lift_in_place(&mut c).unwrap();
        let cover: Vec<u32> = (0..5).filter(|&v| c[v as usize]).collect();
        assert_eq!(cover, vec![0, 1]);

        assert!(!single(Rule::Twin, &cycle(6)).2);
    }

    #[test]
    fn funnel_example() {
        // triangle 0-1-2 with pendant 3 on 0
        let gr = g(4, &[(0, 1), (1, 2), (0, 2), (0, 3)]);
        let (w, t, changed) = single(Rule::Funnel, &gr);
        assert!(changed);
        let (kopt, kc) = brute_force_vc(&w).unwrap();
        assert_eq!(kopt + t.offset(), 2);
        let mut c = vec![false; w.capacity()];
        for v in kc {
            c[v as usize] = true;
        }
        t.lift_in_place(&mut c).unwrap();
        let cover: Vec<u32> = (0..4).filter(|&v| c[v as usize]).collect();
        assert_eq!(cover.len(), 2);
        assert!(is_vertex_cover(&gr, &cover));
    }

    #[test]
    fn desk_needs_degree_three() {
        assert!(!single(Rule::Desk, &cycle(4)).2);
        // C4 0-1-2-3 with one pendant per corner; A={0,2} B={1,3}
        let gr = g(8, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (2, 5), (1, 6), (3, 7)]);
        let (w, t, changed) = single(Rule::Desk, &gr);
        assert!(changed);
        assert_eq!(w.edge_count(), 4);
        let (kopt, _) = brute_force_vc(&w).unwrap();
        assert_eq!(kopt + t.offset(), brute_force_vc(&gr).unwrap().0);
    }

    #[test]
    fn kernelize_is_sound_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=16);
            let p = rng.gen_range(0.05..0.7);
            let gr = random_graph(&mut rng, n, p);
            let (opt, _) = brute_force_vc(&gr).unwrap();
            let k = kernelize(&gr);
            let (kopt, _) = brute_force_vc(&k.kernel).unwrap();
            assert_eq!(k.offset() + kopt, opt);
            let cover = solve_and_lift(&k);
            assert_eq!(cover.len(), opt);
            assert!(is_vertex_cover(&gr, &cover));
            let created =
                k.trace.steps().iter().filter(|s| matches!(s, Step::Fold { .. } | Step::TwinGadget { .. })).count();
            assert!(k.stats.firings() <= 10 * (n + created));
        }
    }

    #[test]
    fn lift_rejects_non_cover() {
        let k = kernelize(&cycle(7));
        if k.m_prime() > 0 {
            assert!(matches!(k.lift(&[]), Err(Error::Logic(_))));
        }
    }
}
