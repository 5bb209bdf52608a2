#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vcover_core::kernel::{Rule, RuleStats};
use vcover_core::{Graph, Vertex};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gnp(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut e = Vec::new();
    for i in 0..n as Vertex {
        for j in i + 1..n as Vertex {
            if rng.gen_bool(p) {
                e.push((i, j));
            }
        }
    }
    Graph::from_edges(n, &e).unwrap()
}

/// The oracle corpus: n in 1..=16, p in {0.1, ..., 0.9}, cycled deterministically.
pub fn corpus(count: usize, seed: u64) -> Vec<Graph> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let n = 1 + i % 16;
            let p = (1 + (i / 16) % 9) as f64 / 10.0;
            gnp(&mut r, n, p)
        })
        .collect()
}

fn add_unique(edges: &mut Vec<(Vertex, Vertex)>, u: Vertex, v: Vertex) {
    let e = (u.min(v), u.max(v));
    if u != v && !edges.contains(&e) {
        edges.push(e);
    }
}

/// A sparse random graph with a small structure planted on shuffled ids,
/// chosen to give `rule` something to act on.
pub fn planted(rng: &mut ChaCha8Rng, rule: Rule) -> Graph {
    let n = rng.gen_range(8..=16);
    let p = rng.gen_range(0.05..0.3);
    let mut ids: Vec<Vertex> = (0..n as Vertex).collect();
    ids.shuffle(rng);
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    let link = |a: usize, b: usize, edges: &mut Vec<(Vertex, Vertex)>| add_unique(edges, ids[a], ids[b]);
    match rule {
        Rule::Pendant => link(0, 1, &mut edges),
        Rule::Fold => {
            link(0, 1, &mut edges);
            link(0, 2, &mut edges);
        }
        Rule::Twin => {
            for a in [0, 1] {
                for b in [2, 3, 4] {
                    link(a, b, &mut edges);
                }
            }
        }
        Rule::Funnel => {
            for a in 1..4 {
                link(0, a, &mut edges);
                for b in a + 1..4 {
                    link(a, b, &mut edges);
                }
            }
            link(0, 4, &mut edges);
        }
        Rule::Desk => {
            for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (2, 5), (1, 6), (3, 7)] {
                link(a, b, &mut edges);
            }
        }
        Rule::Unconfined | Rule::Lp => {
            link(0, 1, &mut edges);
            link(0, 2, &mut edges);
            link(0, 3, &mut edges);
        }
    }
    let protect = match rule {
        Rule::Twin => 5,
        Rule::Funnel => 1,
        Rule::Desk => 4,
        _ => 1,
    };
    for i in 0..n as Vertex {
        for j in i + 1..n as Vertex {
            let inner = ids[..protect].contains(&i) || ids[..protect].contains(&j);
            if !inner && rng.gen_bool(p) {
                add_unique(&mut edges, i, j);
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

pub fn firings(stats: &RuleStats, rule: Rule) -> usize {
    match rule {
        Rule::Pendant => stats.pendant + stats.isolated,
        Rule::Unconfined => stats.unconfined,
        Rule::Lp => stats.lp_fixed,
        Rule::Fold => stats.fold,
        Rule::Twin => stats.twin,
        Rule::Funnel => stats.funnel,
        Rule::Desk => stats.desk,
    }
}

fn funnel_gadget(n: usize, k: usize, l: usize, extra: &[(Vertex, Vertex)]) -> Graph {
    let (v, u) = (0, 1);
    let mut e = vec![(v, u)];
    for a in 2..2 + k as Vertex {
        e.push((v, a));
        for b in a + 1..2 + k as Vertex {
            e.push((a, b));
        }
    }
    for y in 2 + k as Vertex..2 + (k + l) as Vertex {
        e.push((u, y));
    }
    e.extend_from_slice(extra);
    Graph::from_edges(n, &e).unwrap()
}

/// Graphs on 16 vertices whose kernel has more edges than the input.
///
/// Each starts from a funnel: vertex 0 adjacent to a clique of size k and
/// to vertex 1, which has l further neighbors. The remaining edges are
/// flipped by hill climbing on m' - m until the difference is positive.
pub fn edge_growth_family(seed: u64, want: usize, max_trials: usize) -> Vec<Graph> {
    use vcover_core::kernel::kernelize;
    let mut r = rng(seed);
    let n = 16;
    let mut out = Vec::new();
    for _ in 0..max_trials {
        if out.len() >= want {
            break;
        }
        let k = r.gen_range(2..=4);
        let l = r.gen_range(3..=6);
        let free: Vec<(Vertex, Vertex)> = (2..n as Vertex)
            .flat_map(|a| (a + 1..n as Vertex).map(move |b| (a, b)))
            .filter(|&(a, b)| !(b < 2 + k as Vertex && a < 2 + k as Vertex))
            .collect();
        let mut on: Vec<bool> = free.iter().map(|_| r.gen_bool(0.4)).collect();
        let graph = |on: &[bool]| {
            let extra: Vec<_> = free.iter().zip(on).filter(|x| *x.1).map(|x| *x.0).collect();
            funnel_gadget(n, k, l, &extra)
        };
        let delta = |g: &Graph| kernelize(g).m_prime() as i64 - g.edge_count() as i64;
        let mut best = delta(&graph(&on));
        for _ in 0..3000 {
            if best > 0 {
                break;
            }
            let i = r.gen_range(0..free.len());
            on[i] = !on[i];
            let d = delta(&graph(&on));
            if d >= best {
                best = d;
            } else {
                on[i] = !on[i];
            }
        }
        if best > 0 {
            out.push(graph(&on));
        }
    }
    out
}
