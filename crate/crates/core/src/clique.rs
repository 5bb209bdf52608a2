//! Maximum clique by bitset branch-and-bound with greedy coloring bounds,
//! used on complement graphs to find maximum independent sets.

use std::io::Write as _;
use std::path::Path;
use std::process::{Command, Stdio};
use std::time::Instant;

use crate::bnr::SolveOutcome;
use crate::budget::{Budget, Status};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::verify::{is_independent_set, is_vertex_cover};

/// Alive-vertex cap above which graphs are not densified.
pub const DEFAULT_DENSIFY_CAP: usize = 20_000;

/// Dense adjacency matrix, one bit row per vertex.
#[derive(Clone, Debug)]
pub struct BitGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl BitGraph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitGraph { n, words, rows: vec![0; n * words] }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// The graph itself over its alive vertices (`ids[i]` is vertex `i`).
    pub fn from_graph(g: &Graph) -> (BitGraph, Vec<Vertex>) {
        let ids = g.alive_sorted();
        let local = local_index(g, &ids);
        let mut bg = BitGraph::new(ids.len());
        for (i, &v) in ids.iter().enumerate() {
            for &u in g.neighbors(v) {
                bg.add_edge(i, local[u as usize] as usize);
            }
        }
        (bg, ids)
    }

    /// Complement over the alive vertices of `g`.
    pub fn complement_of(g: &Graph) -> (BitGraph, Vec<Vertex>) {
        let ids = g.alive_sorted();
        let local = local_index(g, &ids);
        let n = ids.len();
        let mut bg = BitGraph::new(n);
        for i in 0..n {
            let row = &mut bg.rows[i * bg.words..(i + 1) * bg.words];
            for (w, word) in row.iter_mut().enumerate() {
                let hi = (n - w * 64).min(64);
                *word = if hi == 64 { u64::MAX } else { (1u64 << hi) - 1 };
            }
            row[i / 64] &= !(1 << (i % 64));
            for &u in g.neighbors(ids[i]) {
                let j = local[u as usize] as usize;
                row[j / 64] &= !(1 << (j % 64));
            }
        }
        (bg, ids)
    }

    /// Same graph with vertex `order[i]` renamed to `i`.
    fn permuted(&self, order: &[usize]) -> BitGraph {
        let mut out = BitGraph::new(self.n);
        let mut pos = vec![0; self.n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        for u in 0..self.n {
            for v in ones(self.row(u)) {
                if u < v {
                    out.add_edge(pos[u], pos[v]);
                }
            }
        }
        out
    }

    /// Vertices in degeneracy order, highest core first.
    fn degeneracy_order(&self) -> Vec<usize> {
        let mut deg: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        let maxd = deg.iter().copied().max().unwrap_or(0);
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); maxd + 1];
        for v in (0..self.n).rev() {
            buckets[deg[v]].push(v);
        }
        let mut removed = vec![false; self.n];
        let mut out = Vec::with_capacity(self.n);
        let mut d = 0;
        while out.len() < self.n {
            d = d.min(maxd);
            while buckets[d].is_empty() {
                d += 1;
            }
            let v = buckets[d].pop().unwrap();
            if removed[v] || deg[v] != d {
                continue;
            }
            removed[v] = true;
            out.push(v);
            for u in ones(self.row(v)) {
                if !removed[u] {
                    deg[u] -= 1;
                    buckets[deg[u]].push(u);
                    d = d.min(deg[u]);
                }
            }
        }
        out.reverse();
        out
    }
}

fn local_index(g: &Graph, ids: &[Vertex]) -> Vec<u32> {
    let mut local = vec![u32::MAX; g.capacity()];
    for (i, &v) in ids.iter().enumerate() {
        local[v as usize] = i as u32;
    }
    local
}

fn ones(bits: &[u64]) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(w * 64 + b)
        })
    })
}

struct CliqueSearch<'a> {
    g: &'a BitGraph,
    current: Vec<usize>,
    best: Vec<usize>,
    best_size: usize,
    budget: &'a mut Budget,
    aborted: bool,
}

impl CliqueSearch<'_> {
    // Greedy sequential coloring of `p` in index order; returns vertices in
    // nondecreasing color with their colors.
    fn color(&self, p: &[u64], order: &mut Vec<usize>, colors: &mut Vec<usize>) {
        order.clear();
        colors.clear();
        let mut uncolored = p.to_vec();
        let mut class = uncolored.clone();
        let mut k = 0;
        while uncolored.iter().any(|&w| w != 0) {
            k += 1;
            class.copy_from_slice(&uncolored);
            while let Some(v) = first(&class) {
                order.push(v);
                colors.push(k);
                uncolored[v / 64] &= !(1 << (v % 64));
                class[v / 64] &= !(1 << (v % 64));
                for (c, &r) in class.iter_mut().zip(self.g.row(v)) {
                    *c &= !r;
                }
            }
        }
    }

    fn expand(&mut self, mut p: Vec<u64>) {
        let (mut order, mut colors) = (Vec::new(), Vec::new());
        self.color(&p, &mut order, &mut colors);
        for i in (0..order.len()).rev() {
            if self.current.len() + colors[i] <= self.best_size {
                return;
            }
            if !self.budget.tick() {
                self.aborted = true;
                return;
            }
            let v = order[i];
            self.current.push(v);
            let next: Vec<u64> = p.iter().zip(self.g.row(v)).map(|(a, b)| a & b).collect();
            if next.iter().all(|&w| w == 0) {
                if self.current.len() > self.best_size {
                    self.best_size = self.current.len();
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            if self.aborted {
                return;
            }
            p[v / 64] &= !(1 << (v % 64));
        }
    }
}

fn first(bits: &[u64]) -> Option<usize> {
    bits.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

/// Result of a clique search: `clique` is set when one larger than the
/// requested size was found.
#[derive(Clone, Debug)]
pub struct CliqueOutcome {
    pub status: Status,
    pub clique: Option<Vec<usize>>,
    pub branches: u64,
}

/// Searches for a clique with more than `initial_size` vertices. `Optimal`
/// with no clique proves that none exists.
pub fn max_clique(g: &BitGraph, initial_size: usize, budget: &mut Budget) -> CliqueOutcome {
    let before = budget.used();
    let order = g.degeneracy_order();
    let pg = g.permuted(&order);
    let mut all = vec![0u64; pg.words];
    for v in 0..pg.n {
        all[v / 64] |= 1 << (v % 64);
    }
    let mut s =
        CliqueSearch { g: &pg, current: Vec::new(), best: Vec::new(), best_size: initial_size, budget, aborted: false };
    if pg.n > 0 {
        s.expand(all);
    }
    let mut clique: Vec<usize> = s.best.iter().map(|&v| order[v]).collect();
    clique.sort_unstable();
    let status = if s.aborted { Status::TimedOut } else { Status::Optimal };
    let clique = (!clique.is_empty()).then_some(clique);
    CliqueOutcome { status, clique, branches: budget.used() - before }
}

/// Minimum vertex cover of `g` via a maximum clique of its complement,
/// seeded with the independent set left by `initial_cover`.
pub fn solve_vc_via_clique(
    g: &Graph,
    initial_cover: &[Vertex],
    budget: &mut Budget,
    cap: usize,
) -> Result<SolveOutcome> {
    if !is_vertex_cover(g, initial_cover) {
        return Err(Error::Logic("initial set does not cover the graph".into()));
    }
    let start = Instant::now();
    let alive = g.alive_count();
    if alive > cap {
        return Ok(SolveOutcome { status: Status::Skipped, cover: None, nodes: 0, elapsed: start.elapsed() });
    }
    let mut init = initial_cover.to_vec();
    init.sort_unstable();
    init.dedup();
    let (comp, ids) = BitGraph::complement_of(g);
    let out = max_clique(&comp, alive - init.len(), budget);
    let cover = match out.clique {
        Some(c) => {
            let is: Vec<Vertex> = c.iter().map(|&i| ids[i]).collect();
            debug_assert!(is_independent_set(g, &is));
            let mut member = vec![false; g.capacity()];
            for &v in &is {
                member[v as usize] = true;
            }
            ids.iter().copied().filter(|&v| !member[v as usize]).collect()
        }
        None => init,
    };
    Ok(SolveOutcome { status: out.status, cover: Some(cover), nodes: out.branches, elapsed: start.elapsed() })
}

/// Writes the complement of `g` in DIMACS format, runs `solver` on it and
/// reads back a clique, returned as an independent set of `g`. The clique is
/// taken from a line starting with `M` or `v` if present, otherwise from the
/// last line of integers. Ids are 1-based. The solver is killed at
/// `deadline`, giving `Ok(None)`.
pub fn external_max_is(solver: &Path, g: &Graph, deadline: Option<Instant>) -> Result<Option<Vec<Vertex>>> {
    let (comp, ids) = BitGraph::complement_of(g);
    let path = std::env::temp_dir().join(format!("vcover-{}-{}.clq", std::process::id(), ids.len()));
    {
        let mut f = std::io::BufWriter::new(std::fs::File::create(&path)?);
        let mut edges = Vec::new();
        for u in 0..comp.n {
            for v in ones(comp.row(u)).filter(|&v| v > u) {
                edges.push((u, v));
            }
        }
        writeln!(f, "p edge {} {}", comp.n, edges.len())?;
        for (u, v) in edges {
            writeln!(f, "e {} {}", u + 1, v + 1)?;
        }
    }
    let result = run_external(solver, &path, deadline);
    std::fs::remove_file(&path).ok();
    let Some(text) = result? else { return Ok(None) };
    let ints = |line: &str| -> Option<Vec<usize>> { line.split_whitespace().map(|t| t.parse().ok()).collect() };
    let marked = text.lines().find_map(|l| {
        let l = l.trim();
        l.strip_prefix('M').or_else(|| l.strip_prefix('v')).and_then(ints)
    });
    let clique = marked
        .or_else(|| text.lines().rev().map(str::trim).filter(|l| !l.is_empty()).find_map(ints))
        .ok_or_else(|| Error::Format("external clique solver printed no clique".into()))?;
    if clique.iter().any(|&i| i == 0 || i > ids.len()) {
        return Err(Error::Format("external clique solver printed an out-of-range vertex".into()));
    }
    let is: Vec<Vertex> = clique.iter().map(|&i| ids[i - 1]).collect();
    if !is_independent_set(g, &is) {
        return Err(Error::Format("external clique solver returned a non-clique".into()));
    }
    Ok(Some(is))
}

fn run_external(solver: &Path, input: &Path, deadline: Option<Instant>) -> Result<Option<String>> {
    use std::io::Read;
    let mut child = Command::new(solver).arg(input).stdout(Stdio::piped()).stderr(Stdio::null()).spawn()?;
    let mut stdout = child.stdout.take().expect("piped stdout");
    let reader = std::thread::spawn(move || {
        let mut s = String::new();
        stdout.read_to_string(&mut s).map(|_| s)
    });
    loop {
        if child.try_wait()?.is_some() {
            break;
        }
        if deadline.is_some_and(|d| Instant::now() >= d) {
            child.kill().ok();
            child.wait().ok();
            return Ok(None);
        }
        std::thread::sleep(std::time::Duration::from_millis(10));
    }
    let text = reader.join().map_err(|_| Error::Logic("reader thread panicked".into()))??;
    Ok(Some(text))
}
