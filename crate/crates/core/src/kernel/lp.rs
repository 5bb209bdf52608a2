//! Half-integral LP relaxation of vertex cover via bipartite matching.
//!
//! The bipartite double cover has a left copy `L_v` and a right copy `R_v` of
//! every vertex and an edge `L_u - R_v` for each oriented edge `(u, v)`. Its
//! maximum matching size equals twice the LP optimum. A minimum vertex cover
//! `C` of the double cover gives `x_v = ([L_v in C] + [R_v in C]) / 2`.
//!
//! The solution with the fewest halves is obtained by repeatedly
//! 1. fixing the integral part of the König cover of a maximum matching, and
//! 2. once the matching is perfect, fixing every closed, conflict-free union
//!    of strongly connected components of the residual graph
//!    (`L_u -> R_v` for every edge, `R_v -> L_mate(v)` for matched edges);
//!    `L` nodes of such a set take value 0 and `R` nodes value 1.

use crate::graph::{Graph, Vertex};

const NONE: u32 = u32::MAX;

/// Maximum matching of the double cover, indexed by vertex id:
/// `left[v] = u` means `L_v - R_u` is matched.
#[derive(Clone, Debug)]
pub struct Matching {
    pub left: Vec<u32>,
    pub right: Vec<u32>,
    pub size: usize,
}

/// Hopcroft–Karp on the double cover of the alive graph.
pub fn max_matching(g: &Graph) -> Matching {
    let cap = g.capacity();
    let mut left = vec![NONE; cap];
    let mut right = vec![NONE; cap];
    let mut size = 0usize;
    let alive = g.alive_sorted();
    for &v in &alive {
        if let Some(&u) = g.neighbors(v).iter().find(|&&u| right[u as usize] == NONE) {
            left[v as usize] = u;
            right[u as usize] = v;
            size += 1;
        }
    }
    let mut dist = vec![u32::MAX; cap];
    let mut iter = vec![0u32; cap];
    let mut queue = Vec::with_capacity(alive.len());
    let mut stack: Vec<Vertex> = Vec::new();
    loop {
        queue.clear();
        for &v in &alive {
            if left[v as usize] == NONE {
                dist[v as usize] = 0;
                queue.push(v);
            } else {
                dist[v as usize] = u32::MAX;
            }
        }
        let mut found = false;
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            for &u in g.neighbors(v) {
                let w = right[u as usize];
                if w == NONE {
                    found = true;
                } else if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dist[v as usize] + 1;
                    queue.push(w);
                }
            }
        }
        if !found {
            break;
        }
        for &v in &alive {
            iter[v as usize] = 0;
        }
        for &root in &alive {
            if left[root as usize] != NONE {
                continue;
            }
            stack.clear();
            stack.push(root);
            while let Some(&x) = stack.last() {
                let xi = x as usize;
                let nb = g.neighbors(x);
                if (iter[xi] as usize) < nb.len() {
                    let u = nb[iter[xi] as usize];
                    iter[xi] += 1;
                    let w = right[u as usize];
                    if w == NONE {
                        // augment along the stack
                        for &y in stack.iter().rev() {
                            let uu = g.neighbors(y)[iter[y as usize] as usize - 1];
                            left[y as usize] = uu;
                            right[uu as usize] = y;
                        }
                        size += 1;
                        for &y in &stack {
                            dist[y as usize] = u32::MAX;
                        }
                        stack.clear();
                    } else if dist[w as usize] != u32::MAX && dist[w as usize] == dist[xi] + 1 {
                        stack.push(w);
                    }
                } else {
                    dist[xi] = u32::MAX;
                    stack.pop();
                }
            }
        }
    }
    Matching { left, right, size }
}

/// Twice the LP optimum of the alive graph.
pub fn lp_value_times_two(g: &Graph) -> usize {
    max_matching(g).size
}

/// Integral part of the König cover of `m`: `(zeros, ones)`.
pub fn konig_integral(g: &Graph, m: &Matching) -> (Vec<Vertex>, Vec<Vertex>) {
    let cap = g.capacity();
    let mut in_l = vec![false; cap];
    let mut in_r = vec![false; cap];
    let mut queue = Vec::new();
    for &v in g.alive_vertices() {
        if m.left[v as usize] == NONE {
            in_l[v as usize] = true;
            queue.push(v);
        }
    }
    while let Some(v) = queue.pop() {
        for &u in g.neighbors(v) {
            if !in_r[u as usize] {
                in_r[u as usize] = true;
                let w = m.right[u as usize];
                if w != NONE && !in_l[w as usize] {
                    in_l[w as usize] = true;
                    queue.push(w);
                }
            }
        }
    }
    let mut zeros = Vec::new();
    let mut ones = Vec::new();
    for v in g.alive_sorted() {
        match (in_l[v as usize], in_r[v as usize]) {
            (true, false) => zeros.push(v),
            (false, true) => ones.push(v),
            _ => {}
        }
    }
    (zeros, ones)
}

/// Given a perfect matching of the double cover, finds the integral values
/// the residual strongly connected components allow: `(zeros, ones)`.
pub fn scc_integral(g: &Graph, m: &Matching) -> (Vec<Vertex>, Vec<Vertex>) {
    let alive = g.alive_sorted();
    let cap = g.capacity();
    // node 2v = L_v, 2v + 1 = R_v
    let node_count = 2 * cap;
    let succ = |node: usize, out: &mut Vec<usize>| {
        out.clear();
        let v = (node / 2) as Vertex;
        if node.is_multiple_of(2) {
            out.extend(g.neighbors(v).iter().map(|&u| 2 * u as usize + 1));
        } else {
            let w = m.right[v as usize];
            if w != NONE {
                out.push(2 * w as usize);
            }
        }
    };

    // iterative Tarjan; components come out sinks first
    let mut index = vec![u32::MAX; node_count];
    let mut low = vec![0u32; node_count];
    let mut comp = vec![u32::MAX; node_count];
    let mut on_stack = vec![false; node_count];
    let mut tstack: Vec<usize> = Vec::new();
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut counter = 0u32;
    let mut call: Vec<(usize, Vec<usize>, usize)> = Vec::new();
    let mut buf = Vec::new();
    for &v in &alive {
        for start in [2 * v as usize, 2 * v as usize + 1] {
            if index[start] != u32::MAX {
                continue;
            }
            succ(start, &mut buf);
            index[start] = counter;
            low[start] = counter;
            counter += 1;
            tstack.push(start);
            on_stack[start] = true;
            call.push((start, buf.clone(), 0));
            while let Some(frame) = call.last_mut() {
                let node = frame.0;
                if frame.2 < frame.1.len() {
                    let next = frame.1[frame.2];
                    frame.2 += 1;
                    if index[next] == u32::MAX {
                        succ(next, &mut buf);
                        index[next] = counter;
                        low[next] = counter;
                        counter += 1;
                        tstack.push(next);
                        on_stack[next] = true;
                        call.push((next, buf.clone(), 0));
                    } else if on_stack[next] {
                        low[node] = low[node].min(index[next]);
                    }
                } else {
                    call.pop();
                    if let Some(parent) = call.last() {
                        let p = parent.0;
                        low[p] = low[p].min(low[node]);
                    }
                    if low[node] == index[node] {
                        let id = comps.len() as u32;
                        let mut members = Vec::new();
                        loop {
                            let x = tstack.pop().unwrap();
                            on_stack[x] = false;
                            comp[x] = id;
                            members.push(x);
                            if x == node {
                                break;
                            }
                        }
                        comps.push(members);
                    }
                }
            }
        }
    }

    let mut accepted = vec![false; comps.len()];
    let mut fixed = vec![false; cap];
    let mut zeros = Vec::new();
    let mut ones = Vec::new();
    for (id, members) in comps.iter().enumerate() {
        let ok = members.iter().all(|&node| {
            let v = node / 2;
            if fixed[v] || comp[2 * v] == comp[2 * v + 1] {
                return false;
            }
            succ(node, &mut buf);
            buf.iter().all(|&s| comp[s] as usize == id || accepted[comp[s] as usize])
        });
        if !ok {
            continue;
        }
        accepted[id] = true;
        for &node in members {
            let v = node / 2;
            fixed[v] = true;
            if node % 2 == 0 {
                zeros.push(v as Vertex);
            } else {
                ones.push(v as Vertex);
            }
        }
    }
    zeros.sort_unstable();
    ones.sort_unstable();
    debug_assert_eq!(zeros.len(), ones.len());
    (zeros, ones)
}

/// One round of integral fixing: König part if the matching is not
/// perfect, residual components otherwise.
pub fn integral_part(g: &Graph) -> (Vec<Vertex>, Vec<Vertex>) {
    let m = max_matching(g);
    if m.size < g.alive_count() {
        let r = konig_integral(g, &m);
        debug_assert!(!r.0.is_empty() || !r.1.is_empty());
        r
    } else {
        scc_integral(g, &m)
    }
}

/// LP value of one vertex, in halves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Half {
    Zero,
    Half,
    One,
}

/// Optimal half-integral solution with the fewest halves, indexed by id.
/// Hidden ids map to `None`.
pub fn minimal_half_integral(g: &Graph) -> Vec<Option<Half>> {
    let mut work = g.clone();
    let mut x: Vec<Option<Half>> = vec![None; g.capacity()];
    for &v in g.alive_vertices() {
        x[v as usize] = Some(Half::Half);
    }
    loop {
        let (zeros, ones) = integral_part(&work);
        if zeros.is_empty() && ones.is_empty() {
            break;
        }
        for &v in &zeros {
            x[v as usize] = Some(Half::Zero);
            work.hide(v);
        }
        for &v in &ones {
            x[v as usize] = Some(Half::One);
            work.hide(v);
        }
    }
    x
}

/// Lower bound from vertex-disjoint cycles and paths of a maximum matching
/// of the double cover: every matched pair `L_v - R_u` is a graph edge, so
/// `v -> left[v]` decomposes into cycles and paths.
pub fn cycle_cover_bound(g: &Graph, m: &Matching) -> usize {
    let cap = g.capacity();
    let mut seen = vec![false; cap];
    let mut mark = vec![false; cap];
    let mut bound = 0usize;
    let alive = g.alive_sorted();
    // paths start at vertices with no incoming matched edge
    for &v in &alive {
        if seen[v as usize] || m.right[v as usize] != NONE {
            continue;
        }
        let mut len = 0usize;
        let mut x = v;
        loop {
            seen[x as usize] = true;
            len += 1;
            let nx = m.left[x as usize];
            if nx == NONE || seen[nx as usize] {
                break;
            }
            x = nx;
        }
        bound += len / 2;
    }
    let mut cyc = Vec::new();
    for &v in &alive {
        if seen[v as usize] {
            continue;
        }
        cyc.clear();
        let mut x = v;
        while !seen[x as usize] {
            seen[x as usize] = true;
            cyc.push(x);
            x = m.left[x as usize];
        }
        let k = cyc.len();
        for &c in &cyc {
            mark[c as usize] = true;
        }
        let is_clique = cyc.iter().all(|&c| g.neighbors(c).iter().filter(|&&w| mark[w as usize]).count() + 1 == k);
        for &c in &cyc {
            mark[c as usize] = false;
        }
        bound += if is_clique { k - 1 } else { k.div_ceil(2) };
    }
    bound
}
