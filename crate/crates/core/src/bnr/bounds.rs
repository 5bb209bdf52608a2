//! Admissible lower bounds on the minimum vertex cover of the alive graph.

use crate::graph::Graph;
use crate::kernel::lp::{cycle_cover_bound, max_matching};

/// Alive count minus the number of cliques in a greedy clique partition
/// (descending degree, each vertex joins the first clique it extends).
pub fn lb_clique_cover(g: &Graph) -> usize {
    let mut order = g.alive_sorted();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let mut clique_of = vec![u32::MAX; g.capacity()];
    let mut sizes: Vec<u32> = Vec::new();
    let mut hits: Vec<u32> = Vec::new();
    let mut touched: Vec<u32> = Vec::new();
    for &v in &order {
        for &u in g.neighbors(v) {
            let c = clique_of[u as usize];
            if c != u32::MAX {
                if hits[c as usize] == 0 {
                    touched.push(c);
                }
                hits[c as usize] += 1;
            }
        }
        let target = touched.iter().copied().filter(|&c| hits[c as usize] == sizes[c as usize]).min();
        for &c in &touched {
            hits[c as usize] = 0;
        }
        touched.clear();
        let c = target.unwrap_or_else(|| {
            sizes.push(0);
            hits.push(0);
            sizes.len() as u32 - 1
        });
        clique_of[v as usize] = c;
        sizes[c as usize] += 1;
    }
    order.len() - sizes.len()
}

/// Rounded-up LP optimum.
pub fn lb_lp(g: &Graph) -> usize {
    max_matching(g).size.div_ceil(2)
}

/// Cycle-and-path cover bound from a maximum double-cover matching.
pub fn lb_cycle_cover(g: &Graph) -> usize {
    cycle_cover_bound(g, &max_matching(g))
}

/// The best of the three bounds, sharing one matching.
pub fn lower_bound(g: &Graph) -> usize {
    if g.edge_count() == 0 {
        return 0;
    }
    let m = max_matching(g);
    let lp = m.size.div_ceil(2);
    lp.max(cycle_cover_bound(g, &m)).max(lb_clique_cover(g))
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

    #[test]
    fn examples() {
        let k4 = g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(lb_clique_cover(&k4), 3);
        assert_eq!(lb_clique_cover(&Graph::new(6)), 0);
        assert_eq!(lb_clique_cover(&cycle(5)), 2);
        assert_eq!(lb_lp(&cycle(5)), 3);
        assert_eq!(lb_lp(&g(2, &[(0, 1)])), 1);
        for k in 1..8u32 {
            assert_eq!(lb_lp(&cycle(2 * k + 1)), k as usize + 1);
        }
    }

    #[test]
    fn admissible_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=14);
            let p = rng.gen_range(0.1..0.9);
            let mut e = Vec::new();
            for i in 0..n as u32 {
                for j in i + 1..n as u32 {
                    if rng.gen_bool(p) {
                        e.push((i, j));
                    }
                }
            }
            let gr = g(n, &e);
            let opt = brute_force_vc(&gr).unwrap().0;
            assert!(lower_bound(&gr) <= opt);
            assert!(lb_clique_cover(&gr) <= opt && lb_lp(&gr) <= opt && lb_cycle_cover(&gr) <= opt);
        }
    }
}
