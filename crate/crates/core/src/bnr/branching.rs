use crate::graph::{Graph, Vertex};

/// Vertices `u` at distance exactly two from `v` such that `N(v) \ N(u)` is
/// empty or a clique. Ascending ids.
pub fn mirrors(g: &Graph, v: Vertex) -> Vec<Vertex> {
    let far = g.neighborhood(v, 2, false, true).to_vec();
    let nv = g.neighbors(v);
    let mut out = Vec::new();
    let mut rest = Vec::with_capacity(nv.len());
    for u in far {
        rest.clear();
        rest.extend(nv.iter().copied().filter(|&x| !g.adjacent(u, x)));
        let clique = rest.iter().enumerate().all(|(i, &a)| rest[i + 1..].iter().all(|&b| g.adjacent(a, b)));
        if clique {
            out.push(u);
        }
    }
    out
}

/// Vertices `u` such that some `w` in `N(v)` has `N(w) \ N[v] = {u}`.
/// Ascending ids.
pub fn satellites(g: &Graph, v: Vertex) -> Vec<Vertex> {
    let mut out = Vec::new();
    for &w in g.neighbors(v) {
        let mut outside = g.neighbors(w).iter().copied().filter(|&x| x != v && !g.adjacent(v, x));
        if let (Some(u), None) = (outside.next(), outside.next()) {
            out.push(u);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}
