//! Mutable undirected simple graph with an undo log.
//!
//! Every vertex keeps its neighbor list split into an *alive prefix*
//! `nbr[v][..deg[v]]` and a hidden tail. Hiding a vertex swaps it out of the
//! prefix of each alive neighbor; `rev` stores the mirrored positions so each
//! swap is O(1). All structural mutations are logged and can be rolled back in
//! LIFO order to any [`Checkpoint`].

use crate::error::{Error, Result};

pub type Vertex = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mutation {
    Hide(Vertex),
    AddEdge(Vertex, Vertex),
    Materialize(Vertex),
}

/// Position in the undo log.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Checkpoint(usize);

#[derive(Clone, Debug)]
pub struct Graph {
    nbr: Vec<Vec<Vertex>>,
    rev: Vec<Vec<u32>>,
    deg: Vec<u32>,
    alive: Vec<bool>,
    // alive vertices occupy order[..n_alive]
    order: Vec<Vertex>,
    pos: Vec<u32>,
    n_alive: usize,
    m_alive: usize,
    base_n: usize,
    log: Vec<Mutation>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph {
            nbr: vec![Vec::new(); n],
            rev: vec![Vec::new(); n],
            deg: vec![0; n],
            alive: vec![true; n],
            order: (0..n as Vertex).collect(),
            pos: (0..n as u32).collect(),
            n_alive: n,
            m_alive: 0,
            base_n: n,
            log: Vec::new(),
        }
    }

    /// Builds a graph from an edge list, collapsing duplicate pairs.
    /// Out-of-range ids and self-loops are rejected.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut lists: Vec<Vec<Vertex>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::Format(format!("edge ({u}, {v}) references a vertex outside [0, {n})")));
            }
            if u == v {
                return Err(Error::Format(format!("self-loop on vertex {u}")));
            }
            lists[u as usize].push(v);
            lists[v as usize].push(u);
        }
        for l in &mut lists {
            l.sort_unstable();
            l.dedup();
        }
        let mut g = Graph::new(n);
        // positions of u inside lists[v] are found by binary search on the sorted lists
        let mut m = 0usize;
        for u in 0..n {
            let list = &lists[u];
            let mut rev = Vec::with_capacity(list.len());
            for &v in list {
                let p = lists[v as usize].binary_search(&(u as Vertex)).unwrap();
                rev.push(p as u32);
            }
            m += list.len();
            g.deg[u] = list.len() as u32;
            g.rev[u] = rev;
        }
        g.nbr = lists;
        g.m_alive = m / 2;
        Ok(g)
    }

    /// Number of vertices of the input this graph was created with.
    pub fn base_n(&self) -> usize {
        self.base_n
    }

    /// Size of the id space, including materialized vertices.
    pub fn capacity(&self) -> usize {
        self.nbr.len()
    }

    pub fn alive_count(&self) -> usize {
        self.n_alive
    }

    pub fn edge_count(&self) -> usize {
        self.m_alive
    }

    pub fn is_alive(&self, v: Vertex) -> bool {
        self.alive.get(v as usize).copied().unwrap_or(false)
    }

    /// Degree among alive vertices. Only meaningful for alive `v`.
    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.deg[v as usize] as usize
    }

    /// Alive neighbors of an alive vertex, in no particular order.
    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.nbr[v as usize][..self.deg[v as usize] as usize]
    }

    /// Alive vertices in an unspecified but deterministic order.
    pub fn alive_vertices(&self) -> &[Vertex] {
        &self.order[..self.n_alive]
    }

    /// Alive vertices in ascending id order.
    pub fn alive_sorted(&self) -> Vec<Vertex> {
        let mut v = self.alive_vertices().to_vec();
        v.sort_unstable();
        v
    }

    pub fn max_degree_vertex(&self) -> Option<Vertex> {
        self.alive_vertices().iter().copied().max_by(|&a, &b| self.degree(a).cmp(&self.degree(b)).then(b.cmp(&a)))
    }

    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.neighbors(a).contains(&b)
    }

    /// Alive edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.m_alive);
        for &u in self.alive_vertices() {
            for &v in self.neighbors(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Sorted alive vertex list plus sorted edge list; equal for structurally
    /// identical graphs regardless of internal ordering.
    pub fn canonical(&self) -> (Vec<Vertex>, Vec<(Vertex, Vertex)>) {
        (self.alive_sorted(), self.edges())
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint(self.log.len())
    }

    /// Undoes every mutation recorded after `cp`.
    pub fn rollback(&mut self, cp: Checkpoint) {
        while self.log.len() > cp.0 {
            match self.log.pop().unwrap() {
                Mutation::Hide(v) => self.undo_hide(v),
                Mutation::AddEdge(u, v) => self.undo_add_edge(u, v),
                Mutation::Materialize(w) => self.undo_materialize(w),
            }
        }
    }

    /// Drops the undo history; the current state becomes the base state.
    pub fn clear_log(&mut self) {
        self.log.clear();
    }

    fn swap_entries(&mut self, u: Vertex, i: usize, j: usize) {
        if i == j {
            return;
        }
        let ui = u as usize;
        let a = self.nbr[ui][i] as usize;
        let b = self.nbr[ui][j] as usize;
        let ra = self.rev[ui][i] as usize;
        let rb = self.rev[ui][j] as usize;
        self.nbr[ui].swap(i, j);
        self.rev[ui].swap(i, j);
        self.rev[a][ra] = j as u32;
        self.rev[b][rb] = i as u32;
    }

    fn order_remove(&mut self, v: Vertex) {
        let p = self.pos[v as usize] as usize;
        let last = self.n_alive - 1;
        let w = self.order[last];
        self.order.swap(p, last);
        self.pos[w as usize] = p as u32;
        self.pos[v as usize] = last as u32;
        self.n_alive -= 1;
    }

    fn order_insert(&mut self, v: Vertex) {
        let p = self.pos[v as usize] as usize;
        let first = self.n_alive;
        let w = self.order[first];
        self.order.swap(p, first);
        self.pos[w as usize] = p as u32;
        self.pos[v as usize] = first as u32;
        self.n_alive += 1;
    }

    /// Removes `v` from the alive graph. Panics if `v` is already hidden.
    pub fn hide(&mut self, v: Vertex) -> Checkpoint {
        let cp = self.checkpoint();
        assert!(self.is_alive(v), "hide: vertex {v} is not alive");
        let vi = v as usize;
        for i in 0..self.deg[vi] as usize {
            let u = self.nbr[vi][i];
            let j = self.rev[vi][i] as usize;
            let last = self.deg[u as usize] as usize - 1;
            self.swap_entries(u, j, last);
            self.deg[u as usize] -= 1;
        }
        self.m_alive -= self.deg[vi] as usize;
        self.alive[vi] = false;
        self.order_remove(v);
        self.log.push(Mutation::Hide(v));
        cp
    }

    fn undo_hide(&mut self, v: Vertex) {
        let vi = v as usize;
        for i in (0..self.deg[vi] as usize).rev() {
            let u = self.nbr[vi][i];
            let j = self.rev[vi][i] as usize;
            let d = self.deg[u as usize] as usize;
            self.swap_entries(u, j, d);
            self.deg[u as usize] += 1;
        }
        self.m_alive += self.deg[vi] as usize;
        self.alive[vi] = true;
        self.order_insert(v);
    }

    fn link(&mut self, u: Vertex, v: Vertex) {
        let (ui, vi) = (u as usize, v as usize);
        let pu = self.nbr[ui].len();
        let pv = self.nbr[vi].len();
        self.nbr[ui].push(v);
        self.rev[ui].push(pv as u32);
        self.nbr[vi].push(u);
        self.rev[vi].push(pu as u32);
        let du = self.deg[ui] as usize;
        self.swap_entries(u, pu, du);
        self.deg[ui] += 1;
        let dv = self.deg[vi] as usize;
        self.swap_entries(v, pv, dv);
        self.deg[vi] += 1;
        self.m_alive += 1;
    }

    // Moves the entry at alive position `p` of `u` to the very end and pops it.
    fn unlink_entry(&mut self, u: Vertex, p: usize) {
        let ui = u as usize;
        let d = self.deg[ui] as usize - 1;
        self.swap_entries(u, p, d);
        self.deg[ui] -= 1;
        let last = self.nbr[ui].len() - 1;
        self.swap_entries(u, d, last);
    }

    fn unlink(&mut self, u: Vertex, v: Vertex) {
        let pu = self.neighbors(u).iter().position(|&x| x == v).unwrap();
        let pv = self.neighbors(v).iter().position(|&x| x == u).unwrap();
        self.unlink_entry(u, pu);
        self.unlink_entry(v, pv);
        self.nbr[u as usize].pop();
        self.rev[u as usize].pop();
        self.nbr[v as usize].pop();
        self.rev[v as usize].pop();
        self.m_alive -= 1;
    }

    /// Adds the edge `{u, v}` between two alive vertices. Returns `false`
    /// (and records nothing) when the edge already exists.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        assert!(u != v, "add_edge: self-loop on {u}");
        assert!(self.is_alive(u) && self.is_alive(v), "add_edge: endpoints must be alive");
        if self.adjacent(u, v) {
            return false;
        }
        self.link(u, v);
        self.log.push(Mutation::AddEdge(u, v));
        true
    }

    fn undo_add_edge(&mut self, u: Vertex, v: Vertex) {
        self.unlink(u, v);
    }

    /// Creates a fresh alive vertex adjacent to `neighbors` (which must be
    /// alive and distinct) and returns its id.
    pub fn materialize(&mut self, neighbors: &[Vertex]) -> Vertex {
        let w = self.nbr.len() as Vertex;
        self.nbr.push(Vec::with_capacity(neighbors.len()));
        self.rev.push(Vec::with_capacity(neighbors.len()));
        self.deg.push(0);
        self.alive.push(true);
        self.pos.push(self.order.len() as u32);
        self.order.push(w);
        // move w into the alive prefix
        self.alive[w as usize] = true;
        self.order_insert(w);
        for &u in neighbors {
            assert!(self.is_alive(u) && u != w, "materialize: neighbor {u} must be alive");
            self.link(w, u);
        }
        self.log.push(Mutation::Materialize(w));
        w
    }

    fn undo_materialize(&mut self, w: Vertex) {
        let wi = w as usize;
        debug_assert_eq!(wi, self.nbr.len() - 1);
        while self.deg[wi] > 0 {
            let i = self.deg[wi] as usize - 1;
            let u = self.nbr[wi][i];
            let p = self.rev[wi][i] as usize;
            self.unlink_entry(u, p);
            self.nbr[u as usize].pop();
            self.rev[u as usize].pop();
            self.deg[wi] -= 1;
            self.nbr[wi].pop();
            self.rev[wi].pop();
            self.m_alive -= 1;
        }
        self.order_remove(w);
        // w now sits right after the alive prefix; move it to the end and drop it
        let p = self.pos[wi] as usize;
        let last = self.order.len() - 1;
        let x = self.order[last];
        self.order.swap(p, last);
        self.pos[x as usize] = p as u32;
        self.order.pop();
        self.pos.pop();
        self.nbr.pop();
        self.rev.pop();
        self.deg.pop();
        self.alive.pop();
    }

    /// Alive neighbors of `v` (radius 1) or vertices within distance 2
    /// (radius 2). With `exact`, radius 2 keeps only vertices at distance
    /// exactly 2. `closed` adds `v` itself.
    pub fn neighborhood(&self, v: Vertex, radius: u8, closed: bool, exact: bool) -> VertexSet {
        assert!(self.is_alive(v), "neighborhood: vertex {v} is hidden");
        let mut set = VertexSet::with_capacity(self.capacity());
        match radius {
            1 => {
                for &u in self.neighbors(v) {
                    set.insert(u);
                }
            }
            2 => {
                let mut near = VertexSet::with_capacity(self.capacity());
                near.insert(v);
                for &u in self.neighbors(v) {
                    near.insert(u);
                }
                if !exact {
                    for &u in self.neighbors(v) {
                        set.insert(u);
                    }
                }
                for &u in self.neighbors(v) {
                    for &w in self.neighbors(u) {
                        if !near.contains(w) {
                            set.insert(w);
                        }
                    }
                }
            }
            _ => panic!("neighborhood: radius must be 1 or 2"),
        }
        if closed {
            set.insert(v);
        }
        set
    }

    /// Graph induced by `vertices` (alive, distinct) with ids renumbered
    /// `0..k` in the given order; returns the graph and the new-to-old map.
    pub fn induced_subgraph(&self, vertices: &[Vertex]) -> (Graph, Vec<Vertex>) {
        let mut local = vec![u32::MAX; self.capacity()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v as usize] = i as u32;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &u in self.neighbors(v) {
                let j = local[u as usize];
                if j != u32::MAX && (i as u32) < j {
                    edges.push((i as u32, j));
                }
            }
        }
        let g = Graph::from_edges(vertices.len(), &edges).expect("induced subgraph is simple");
        (g, vertices.to_vec())
    }

    /// Induced subgraph on the alive vertices in ascending id order.
    pub fn compact(&self) -> (Graph, Vec<Vertex>) {
        self.induced_subgraph(&self.alive_sorted())
    }

    /// Complement on the alive vertices, renumbered in ascending id order.
    /// Returns the graph and the map from its ids back to ids of `self`.
    pub fn complement(&self) -> (Graph, Vec<Vertex>) {
        let ids = self.alive_sorted();
        let a = ids.len();
        let words = a.div_ceil(64);
        let mut local = vec![u32::MAX; self.capacity()];
        for (i, &v) in ids.iter().enumerate() {
            local[v as usize] = i as u32;
        }
        let mut rows = vec![0u64; a * words];
        for (i, &v) in ids.iter().enumerate() {
            for &u in self.neighbors(v) {
                let j = local[u as usize] as usize;
                rows[i * words + j / 64] |= 1 << (j % 64);
            }
        }
        let mut edges = Vec::with_capacity(a * a.saturating_sub(1) / 2 - self.m_alive);
        for i in 0..a {
            for j in i + 1..a {
                if rows[i * words + j / 64] & (1 << (j % 64)) == 0 {
                    edges.push((i as u32, j as u32));
                }
            }
        }
        (Graph::from_edges(a, &edges).expect("complement is simple"), ids)
    }

    /// Connected components of the alive graph, each sorted ascending; the
    /// list is ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.capacity()];
        let mut comps = Vec::new();
        let mut stack = Vec::new();
        for v in self.alive_sorted() {
            if seen[v as usize] {
                continue;
            }
            let mut comp = vec![v];
            seen[v as usize] = true;
            stack.push(v);
            while let Some(x) = stack.pop() {
                for &y in self.neighbors(x) {
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        comp.push(y);
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Checks the internal bookkeeping; used by tests.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let mut deg_sum = 0usize;
        for &v in self.alive_vertices() {
            let vi = v as usize;
            if !self.alive[vi] {
                return Err(format!("{v} in alive order but flagged hidden"));
            }
            let d = self.deg[vi] as usize;
            deg_sum += d;
            for (i, &u) in self.nbr[vi].iter().enumerate() {
                let j = self.rev[vi][i] as usize;
                if self.nbr[u as usize][j] != v || self.rev[u as usize][j] as usize != i {
                    return Err(format!("reverse index broken at {v}->{u}"));
                }
                let should_be_alive = i < d;
                if should_be_alive != self.alive[u as usize] {
                    return Err(format!("prefix of {v} disagrees with liveness of {u}"));
                }
            }
        }
        if deg_sum != 2 * self.m_alive {
            return Err(format!("degree sum {deg_sum} != 2*{}", self.m_alive));
        }
        let flagged = self.alive.iter().filter(|&&a| a).count();
        if flagged != self.n_alive {
            return Err("alive count mismatch".into());
        }
        Ok(())
    }
}

/// A set of vertex ids with O(1) membership and sorted iteration.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VertexSet {
    members: Vec<Vertex>,
    mask: Vec<u64>,
    sorted: bool,
}

impl VertexSet {
    pub fn with_capacity(n: usize) -> Self {
        VertexSet { members: Vec::new(), mask: vec![0; n.div_ceil(64)], sorted: true }
    }

    pub fn from_slice(n: usize, vs: &[Vertex]) -> Self {
        let mut s = Self::with_capacity(n);
        for &v in vs {
            s.insert(v);
        }
        s
    }

    pub fn insert(&mut self, v: Vertex) -> bool {
        let (w, b) = (v as usize / 64, v % 64);
        if w >= self.mask.len() {
            self.mask.resize(w + 1, 0);
        }
        if self.mask[w] & (1 << b) != 0 {
            return false;
        }
        self.mask[w] |= 1 << b;
        if self.members.last().is_some_and(|&l| l > v) {
            self.sorted = false;
        }
        self.members.push(v);
        true
    }

    pub fn contains(&self, v: Vertex) -> bool {
        let w = v as usize / 64;
        w < self.mask.len() && self.mask[w] & (1 << (v % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in ascending order.
    pub fn to_vec(&self) -> Vec<Vertex> {
        let mut v = self.members.clone();
        if !self.sorted {
            v.sort_unstable();
        }
        v
    }
}
