//! Iterated local search for large independent sets: (1,2)-swaps driven by
//! tightness counts, random forced insertions as perturbation.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::verify::is_independent_set;

/// An independent set with, for every vertex, the number of its neighbors
/// in the set.
#[derive(Clone, Debug)]
pub struct IndependentSet {
    in_set: Vec<bool>,
    tight: Vec<u32>,
    size: usize,
    journal: Option<Vec<(Vertex, bool)>>,
}

impl IndependentSet {
    pub fn empty(g: &Graph) -> Self {
        IndependentSet { in_set: vec![false; g.capacity()], tight: vec![0; g.capacity()], size: 0, journal: None }
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.in_set[v as usize]
    }

    pub fn tightness(&self, v: Vertex) -> u32 {
        self.tight[v as usize]
    }

    /// Members in ascending id order.
    pub fn members(&self) -> Vec<Vertex> {
        (0..self.in_set.len() as Vertex).filter(|&v| self.in_set[v as usize]).collect()
    }

    fn insert(&mut self, g: &Graph, v: Vertex) {
        debug_assert!(!self.in_set[v as usize]);
        self.in_set[v as usize] = true;
        self.size += 1;
        for &u in g.neighbors(v) {
            self.tight[u as usize] += 1;
        }
        if let Some(j) = self.journal.as_mut() {
            j.push((v, true));
        }
    }

    fn remove(&mut self, g: &Graph, v: Vertex) {
        debug_assert!(self.in_set[v as usize]);
        self.in_set[v as usize] = false;
        self.size -= 1;
        for &u in g.neighbors(v) {
            self.tight[u as usize] -= 1;
        }
        if let Some(j) = self.journal.as_mut() {
            j.push((v, false));
        }
    }

    fn is_free(&self, v: Vertex) -> bool {
        !self.in_set[v as usize] && self.tight[v as usize] == 0
    }

    /// Inserts every free vertex of `candidates`, in the given order.
    fn fill(&mut self, g: &Graph, candidates: &[Vertex], added: &mut Vec<Vertex>) {
        for &v in candidates {
            if self.is_free(v) {
                self.insert(g, v);
                added.push(v);
            }
        }
    }

    fn begin(&mut self) {
        self.journal = Some(Vec::new());
    }

    fn commit(&mut self) {
        self.journal = None;
    }

    fn revert(&mut self, g: &Graph) {
        let journal = self.journal.take().unwrap_or_default();
        for &(v, inserted) in journal.iter().rev() {
            if inserted {
                self.remove(g, v);
            } else {
                self.insert(g, v);
            }
        }
    }

    /// Checks independence, maximality and the tightness counts.
    pub fn check(&self, g: &Graph) -> std::result::Result<(), String> {
        for &v in g.alive_vertices() {
            let t = g.neighbors(v).iter().filter(|&&u| self.in_set[u as usize]).count() as u32;
            if t != self.tight[v as usize] {
                return Err(format!("tightness of {v} is {} but {t} neighbors are members", self.tight[v as usize]));
            }
            if self.in_set[v as usize] && t > 0 {
                return Err(format!("member {v} has a member neighbor"));
            }
            if !self.in_set[v as usize] && t == 0 {
                return Err(format!("non-member {v} is free"));
            }
        }
        Ok(())
    }
}

/// Maximal independent set by greedy insertion in random order.
pub fn greedy_maximal_is(g: &Graph, seed: u64) -> IndependentSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    greedy_with(g, &mut rng)
}

fn greedy_with(g: &Graph, rng: &mut ChaCha8Rng) -> IndependentSet {
    let mut order = g.alive_sorted();
    order.shuffle(rng);
    let mut is = IndependentSet::empty(g);
    is.fill(g, &order, &mut Vec::new());
    is
}

// A pair of non-adjacent 1-tight neighbors of member x, if any.
fn find_swap(g: &Graph, is: &IndependentSet, x: Vertex, mark: &mut [u32], stamp: u32) -> Option<(Vertex, Vertex)> {
    let mut cand: Vec<Vertex> = g.neighbors(x).iter().copied().filter(|&u| is.tight[u as usize] == 1).collect();
    if cand.len() < 2 {
        return None;
    }
    cand.sort_unstable();
    for &u in &cand {
        mark[u as usize] = stamp;
    }
    for &u in &cand {
        let inside = g.neighbors(u).iter().filter(|&&w| mark[w as usize] == stamp).count();
        if inside + 1 < cand.len() {
            let v = cand.iter().copied().find(|&w| w != u && !g.adjacent(u, w)).unwrap();
            return Some((u, v));
        }
    }
    None
}

/// Applies (1,2)-swaps until none exists, keeping the set maximal.
/// Returns whether the set grew.
pub fn one_two_swap_pass(g: &Graph, is: &mut IndependentSet) -> bool {
    let start = is.len();
    let mut added = Vec::new();
    is.fill(g, &g.alive_sorted(), &mut added);
    let mut mark = vec![0u32; g.capacity()];
    let mut stamp = 0u32;
    let mut queued = vec![false; g.capacity()];
    let mut work: Vec<Vertex> = is.members();
    work.reverse();
    for &x in &work {
        queued[x as usize] = true;
    }
    while let Some(x) = work.pop() {
        queued[x as usize] = false;
        if !is.in_set[x as usize] {
            continue;
        }
        stamp += 1;
        let Some((u, v)) = find_swap(g, is, x, &mut mark, stamp) else { continue };
        is.remove(g, x);
        is.insert(g, u);
        is.insert(g, v);
        added.clear();
        added.extend([u, v]);
        let around: Vec<Vertex> = g.neighbors(x).to_vec();
        is.fill(g, &around, &mut added);
        // vertices that became 1-tight make their solution neighbor a candidate again
        for &y in &around {
            if !is.in_set[y as usize] && is.tight[y as usize] == 1 {
                if let Some(&z) = g.neighbors(y).iter().find(|&&z| is.in_set[z as usize]) {
                    added.push(z);
                }
            }
        }
        for &z in &added {
            if is.in_set[z as usize] && !queued[z as usize] {
                queued[z as usize] = true;
                work.push(z);
            }
        }
    }
    is.len() > start
}

/// Forces `strength` random non-members into the set, evicting their
/// neighbors, then restores maximality.
pub fn perturb<R: Rng>(g: &Graph, is: &mut IndependentSet, strength: usize, rng: &mut R) {
    let alive = g.alive_vertices();
    let mut touched = Vec::new();
    for _ in 0..strength {
        if is.len() == alive.len() {
            break;
        }
        let v = loop {
            let c = alive[rng.gen_range(0..alive.len())];
            if !is.in_set[c as usize] {
                break c;
            }
        };
        let evict: Vec<Vertex> = g.neighbors(v).iter().copied().filter(|&u| is.in_set[u as usize]).collect();
        for u in evict {
            is.remove(g, u);
            touched.extend_from_slice(g.neighbors(u));
        }
        is.insert(g, v);
    }
    touched.sort_unstable();
    touched.dedup();
    touched.shuffle(rng);
    is.fill(g, &touched, &mut Vec::new());
}

/// Incremental ILS driver; `step` runs one perturb-improve-accept round.
#[derive(Debug)]
pub struct Ils<'g> {
    g: &'g Graph,
    rng: ChaCha8Rng,
    current: IndependentSet,
    best: IndependentSet,
    iterations: u64,
    since_best: u64,
}

impl<'g> Ils<'g> {
    pub fn new(g: &'g Graph, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut current = greedy_with(g, &mut rng);
        one_two_swap_pass(g, &mut current);
        let best = current.clone();
        Ils { g, rng, current, best, iterations: 0, since_best: 0 }
    }

    pub fn best(&self) -> &IndependentSet {
        &self.best
    }

    pub fn into_best(self) -> IndependentSet {
        self.best
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    fn strength(&self) -> usize {
        let n = self.g.alive_count().max(1) as u64;
        if self.since_best > n {
            (1 + self.since_best.div_ceil(n)) as usize
        } else {
            1
        }
    }

    pub fn step(&mut self) {
        self.iterations += 1;
        if self.g.edge_count() == 0 {
            return;
        }
        let before = self.current.len();
        let strength = self.strength();
        self.current.begin();
        perturb(self.g, &mut self.current, strength, &mut self.rng);
        one_two_swap_pass(self.g, &mut self.current);
        let after = self.current.len();
        if after > self.best.len() {
            self.current.commit();
            self.best = self.current.clone();
            self.since_best = 0;
            return;
        }
        self.since_best += 1;
        let accept = after >= before || {
            let delta = (before - after) as f64;
            let delta_best = (self.best.len() - after) as f64;
            self.rng.gen_bool(1.0 / (1.0 + delta * delta_best))
        };
        if accept {
            self.current.commit();
        } else {
            self.current.revert(self.g);
        }
    }
}

/// Best independent set after `budget` rounds.
pub fn run_ils(g: &Graph, budget: u64, seed: u64) -> IndependentSet {
    let mut ils = Ils::new(g, seed);
    for _ in 0..budget {
        ils.step();
    }
    ils.into_best()
}

/// The alive vertices outside `is`.
pub fn is_to_cover(g: &Graph, is: &[Vertex]) -> Result<Vec<Vertex>> {
    if !is_independent_set(g, is) {
        return Err(Error::Logic("set is not independent".into()));
    }
    let mut member = vec![false; g.capacity()];
    for &v in is {
        member[v as usize] = true;
    }
    Ok(g.alive_sorted().into_iter().filter(|&v| !member[v as usize]).collect())
}
