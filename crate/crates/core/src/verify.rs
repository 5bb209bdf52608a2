//! Cover validation and exponential brute-force optima for small graphs.

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Largest alive vertex count the brute-force routines accept.
pub const BRUTE_FORCE_LIMIT: usize = 26;

/// True iff every alive edge of `g` has an endpoint in `cover`.
pub fn is_vertex_cover(g: &Graph, cover: &[Vertex]) -> bool {
    let mut mark = vec![false; g.capacity()];
    for &v in cover {
        if let Some(m) = mark.get_mut(v as usize) {
            *m = true;
        }
    }
    g.alive_vertices().iter().all(|&u| mark[u as usize] || g.neighbors(u).iter().all(|&w| mark[w as usize]))
}

/// True iff no two vertices of `set` are adjacent in `g`.
pub fn is_independent_set(g: &Graph, set: &[Vertex]) -> bool {
    let mut mark = vec![false; g.capacity()];
    for &v in set {
        mark[v as usize] = true;
    }
    set.iter().all(|&u| g.neighbors(u).iter().all(|&w| !mark[w as usize]))
}

/// True iff all vertices of `set` are pairwise adjacent in `g`.
pub fn is_clique(g: &Graph, set: &[Vertex]) -> bool {
    let mut mark = vec![0u32; g.capacity()];
    for &v in set {
        mark[v as usize] = 1;
    }
    set.iter().all(|&u| {
        let k = g.neighbors(u).iter().filter(|&&w| mark[w as usize] == 1).count();
        k + 1 == set.len()
    })
}

struct Masks {
    ids: Vec<Vertex>,
    adj: Vec<u32>,
}

fn masks(g: &Graph) -> Result<Masks> {
    let ids = g.alive_sorted();
    if ids.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge { alive: ids.len(), limit: BRUTE_FORCE_LIMIT });
    }
    let mut local = vec![u32::MAX; g.capacity()];
    for (i, &v) in ids.iter().enumerate() {
        local[v as usize] = i as u32;
    }
    let adj = ids.iter().map(|&v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << local[u as usize])).collect();
    Ok(Masks { ids, adj })
}

// Maximum independent set size inside the vertex mask `p`.
fn mis(adj: &[u32], p: u32, size: u32, best: &mut u32) {
    if p == 0 {
        *best = (*best).max(size);
        return;
    }
    if size + p.count_ones() <= *best {
        return;
    }
    let mut pick = p.trailing_zeros();
    let mut pick_deg = 0;
    let mut rest = p;
    while rest != 0 {
        let v = rest.trailing_zeros();
        rest &= rest - 1;
        let d = (adj[v as usize] & p).count_ones();
        if d <= 1 {
            // isolated or pendant vertices belong to some maximum independent set
            mis(adj, p & !(adj[v as usize] | 1 << v), size + 1, best);
            return;
        }
        if d > pick_deg {
            pick = v;
            pick_deg = d;
        }
    }
    mis(adj, p & !(adj[pick as usize] | 1 << pick), size + 1, best);
    mis(adj, p & !(1 << pick), size, best);
}

fn mis_size(adj: &[u32], p: u32) -> u32 {
    let mut best = 0;
    mis(adj, p, 0, &mut best);
    best
}

fn full_mask(k: usize) -> u32 {
    if k == 32 {
        u32::MAX
    } else {
        (1u32 << k) - 1
    }
}

/// Minimum vertex cover by exhaustive branching over the alive vertices.
/// Returns the optimum and the lexicographically least optimal cover.
pub fn brute_force_vc(g: &Graph) -> Result<(usize, Vec<Vertex>)> {
    let Masks { ids, adj } = masks(g)?;
    let all = full_mask(ids.len());
    let opt = ids.len() as u32 - mis_size(&adj, all);
    // greedily include the smallest id that still admits an optimal completion
    let mut remaining = all;
    let mut taken = 0u32;
    let mut witness = Vec::new();
    for v in 0..ids.len() as u32 {
        if remaining & (1 << v) == 0 {
            continue;
        }
        let without = remaining & !(1 << v);
        if taken + 1 + without.count_ones() - mis_size(&adj, without) == opt {
            taken += 1;
            witness.push(ids[v as usize]);
            remaining = without;
        } else {
            let nb = adj[v as usize] & remaining;
            for u in 0..ids.len() as u32 {
                if nb & (1 << u) != 0 {
                    witness.push(ids[u as usize]);
                }
            }
            taken += nb.count_ones();
            remaining &= !(nb | 1 << v);
        }
    }
    witness.sort_unstable();
    debug_assert_eq!(witness.len() as u32, opt);
    Ok((opt as usize, witness))
}

/// Maximum independent set size of the alive graph.
pub fn brute_force_max_is(g: &Graph) -> Result<usize> {
    let Masks { ids, adj } = masks(g)?;
    Ok(mis_size(&adj, full_mask(ids.len())) as usize)
}

/// Clique number of the alive graph.
pub fn brute_force_max_clique(g: &Graph) -> Result<usize> {
    let Masks { ids, adj } = masks(g)?;
    let all = full_mask(ids.len());
    let comp: Vec<u32> = adj.iter().enumerate().map(|(i, &a)| !a & all & !(1 << i)).collect();
    Ok(mis_size(&comp, all) as usize)
}
