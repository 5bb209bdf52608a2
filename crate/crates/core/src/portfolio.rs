//! The five-phase solver schedule and its ablations.

use std::path::PathBuf;
use std::str::FromStr;
use std::sync::atomic::AtomicBool;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::bnr::{solve_bnr, BnrLimits, SolveOutcome};
use crate::budget::{Budget, Status};
use crate::clique::{external_max_is, solve_vc_via_clique, DEFAULT_DENSIFY_CAP};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::ils::{greedy_maximal_is, is_to_cover, Ils};
use crate::kernel::{KernelResult, RuleSet};
use crate::verify::is_vertex_cover;

/// Which solver pipeline to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Ablation {
    /// Clique search on the complement of the unreduced input.
    MoMC,
    /// Reductions, then clique search on the complement of the kernel.
    RMoMC,
    /// Reductions, local search, branch-and-reduce.
    LSBnR,
    /// Reductions and branch-and-reduce from a trivial bound.
    BnR,
    /// The full five-phase schedule.
    FullA,
}

impl Ablation {
    pub const ALL: [Ablation; 5] = [Ablation::MoMC, Ablation::RMoMC, Ablation::LSBnR, Ablation::BnR, Ablation::FullA];

    pub fn name(self) -> &'static str {
        match self {
            Ablation::MoMC => "MoMC",
            Ablation::RMoMC => "RMoMC",
            Ablation::LSBnR => "LSBnR",
            Ablation::BnR => "BnR",
            Ablation::FullA => "FullA",
        }
    }
}

impl FromStr for Ablation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ablation::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Format(format!("unknown ablation `{s}`")))
    }
}

impl std::fmt::Display for Ablation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Node and iteration budgets that replace every wall-clock limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TestBudgets {
    pub ils_iterations: u64,
    pub short_nodes: u64,
    pub clique_kernel: u64,
    pub clique_original: u64,
    pub long_nodes: u64,
    pub final_nodes: u64,
}

impl Default for TestBudgets {
    fn default() -> Self {
        TestBudgets {
            ils_iterations: 1_000,
            short_nodes: 10_000,
            clique_kernel: 100_000,
            clique_original: 200_000,
            long_nodes: 1_000_000,
            final_nodes: 10_000_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PhasePlan {
    pub total: Duration,
    pub short_limit: Duration,
    pub long_limit: Duration,
    pub clique_budget_kernel: u64,
    pub clique_budget_original: u64,
    pub seed: u64,
    pub ils_time: Duration,
    pub ablation: Ablation,
    pub densify_cap: usize,
    pub rules: RuleSet,
    pub external_clique_solver: Option<PathBuf>,
    pub test_mode: Option<TestBudgets>,
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Default for PhasePlan {
    fn default() -> Self {
        PhasePlan::with_total(Duration::from_secs(1800))
    }
}

impl PhasePlan {
    /// Defaults scaled to a total budget.
    pub fn with_total(total: Duration) -> Self {
        PhasePlan {
            total,
            short_limit: Duration::from_secs(1).min(total),
            long_limit: Duration::from_secs(30).min(total),
            clique_budget_kernel: 50_000,
            clique_budget_original: 100_000,
            seed: 0,
            ils_time: Duration::from_secs(5).min(total / 10),
            ablation: Ablation::FullA,
            densify_cap: DEFAULT_DENSIFY_CAP,
            rules: RuleSet::ALL,
            external_clique_solver: None,
            test_mode: None,
            cancel: None,
        }
    }

    /// Wall-clock-free plan for reproducible runs.
    pub fn test(budgets: TestBudgets, seed: u64) -> Self {
        PhasePlan { test_mode: Some(budgets), seed, ..PhasePlan::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.short_limit > self.long_limit || self.long_limit > self.total {
            return Err(Error::Format("time limits must satisfy short <= long <= total".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SolvedBy {
    Phase1Trivial,
    Phase2,
    Phase3Kernel,
    Phase3Original,
    Phase4,
    Phase5,
    Unsolved,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhaseTime {
    pub phase: &'static str,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub instance: String,
    pub ablation: Ablation,
    pub phase: SolvedBy,
    pub size: Option<usize>,
    pub n: usize,
    pub m: usize,
    pub n_prime: Option<usize>,
    pub m_prime: Option<usize>,
    pub offset: Option<usize>,
    /// Per-phase wall time; absent in test mode so reports are reproducible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<Vec<PhaseTime>>,
    pub branches: u64,
    pub verified: bool,
    #[serde(skip)]
    pub cover: Option<Vec<Vertex>>,
}

impl SolveReport {
    pub fn solved(&self) -> bool {
        self.phase != SolvedBy::Unsolved
    }
}

struct Run<'a> {
    g: &'a Graph,
    plan: &'a PhasePlan,
    start: Instant,
    deadline: Instant,
    times: Vec<PhaseTime>,
    branches: u64,
    kernel: Option<KernelResult>,
}

impl Run<'_> {
    fn budget(&self, limit: Duration, nodes: impl FnOnce(&TestBudgets) -> u64) -> Budget {
        let b = match &self.plan.test_mode {
            Some(t) => Budget::nodes(nodes(t)),
            None => Budget::until((Instant::now() + limit).min(self.deadline)),
        };
        b.with_cancel(self.plan.cancel.clone())
    }

    fn clique_budget(&self, branches: u64, nodes: impl FnOnce(&TestBudgets) -> u64) -> Budget {
        match &self.plan.test_mode {
            Some(t) => Budget::nodes(nodes(t)),
            None => self.budget(self.plan.short_limit, |_| 0).with_nodes(Some(branches)),
        }
    }

    fn remaining(&self) -> Duration {
        self.deadline.saturating_duration_since(Instant::now())
    }

    fn out_of_time(&self) -> bool {
        self.plan.test_mode.is_none() && self.remaining().is_zero()
    }

    fn timed<T>(&mut self, phase: &'static str, f: impl FnOnce(&mut Self) -> T) -> T {
        let t = Instant::now();
        let out = f(self);
        self.times.push(PhaseTime { phase, elapsed_ms: t.elapsed().as_millis() as u64 });
        out
    }

    fn kernel(&self) -> &KernelResult {
        self.kernel.as_ref().expect("kernelized")
    }

    fn kernelize(&mut self) {
        let rules = self.plan.rules;
        let g = self.g;
        let k = self.timed("kernelize", |_| crate::kernel::kernelize_with(g, rules));
        self.kernel = Some(k);
    }

    fn ils_cover(&mut self) -> Result<Vec<Vertex>> {
        let seed = self.plan.seed;
        let test = self.plan.test_mode;
        let ils_time = self.plan.ils_time.min(self.remaining());
        self.timed("ils", |run| {
            let kernel = &run.kernel.as_ref().expect("kernelized").kernel;
            let mut ils = Ils::new(kernel, seed);
            match test {
                Some(t) => (0..t.ils_iterations).for_each(|_| ils.step()),
                None => {
                    let stop = Instant::now() + ils_time;
                    while Instant::now() < stop {
                        (0..32).for_each(|_| ils.step());
                    }
                }
            }
            is_to_cover(kernel, &ils.best().members())
        })
    }

    fn bnr(
        &mut self,
        phase: &'static str,
        initial: &[Vertex],
        limit: Duration,
        nodes: fn(&TestBudgets) -> u64,
    ) -> Result<SolveOutcome> {
        let budget = self.budget(limit, nodes);
        let rules = self.plan.rules;
        let out = self.timed(phase, |run| solve_bnr(&run.kernel().kernel, initial, BnrLimits { budget, rules }))?;
        self.branches += out.nodes;
        Ok(out)
    }

    fn clique(
        &mut self,
        phase: &'static str,
        on_kernel: bool,
        initial: &[Vertex],
        budget: Budget,
    ) -> Result<SolveOutcome> {
        let cap = self.plan.densify_cap;
        let mut budget = budget;
        let out = self.timed(phase, |run| {
            let g = if on_kernel { &run.kernel().kernel } else { run.g };
            solve_vc_via_clique(g, initial, &mut budget, cap)
        })?;
        self.branches += out.nodes;
        Ok(out)
    }

    fn external(&mut self, solver: &std::path::Path) -> Result<Option<Vec<Vertex>>> {
        let deadline = Some(self.deadline);
        let g = self.g;
        let is = self.timed("phase5", |_| external_max_is(solver, g, deadline))?;
        is.map(|is| is_to_cover(g, &is)).transpose()
    }

    fn lift(&self, kernel_cover: &[Vertex]) -> Result<Vec<Vertex>> {
        self.kernel().lift(kernel_cover)
    }
}

/// Runs the plan's pipeline on `g`. An unsolved report carries no cover.
pub fn solve(g: &Graph, plan: &PhasePlan, instance: &str) -> Result<SolveReport> {
    plan.validate()?;
    let start = Instant::now();
    let mut run = Run { g, plan, start, deadline: start + plan.total, times: Vec::new(), branches: 0, kernel: None };
    let (phase, cover) = match plan.ablation {
        Ablation::FullA => full(&mut run)?,
        a => single(&mut run, a)?,
    };
    let verified = match &cover {
        Some(c) => {
            if !is_vertex_cover(g, c) {
                return Err(Error::Logic("solver produced a set that does not cover the input".into()));
            }
            true
        }
        None => false,
    };
    log::info!("{instance}: {phase:?} in {:?}", run.start.elapsed());
    let k = run.kernel.as_ref();
    Ok(SolveReport {
        instance: instance.to_string(),
        ablation: plan.ablation,
        phase,
        size: cover.as_ref().map(Vec::len),
        n: g.alive_count(),
        m: g.edge_count(),
        n_prime: k.map(KernelResult::n_prime),
        m_prime: k.map(KernelResult::m_prime),
        offset: k.map(KernelResult::offset),
        elapsed_ms: plan.test_mode.is_none().then_some(run.times),
        branches: run.branches,
        verified,
        cover,
    })
}

type Found = (SolvedBy, Option<Vec<Vertex>>);

fn full(run: &mut Run) -> Result<Found> {
    run.kernelize();
    if run.kernel().m_prime() == 0 {
        let cover = run.kernel().lift(&[])?;
        return Ok((SolvedBy::Phase1Trivial, Some(cover)));
    }
    let mut best = run.ils_cover()?;

    let out = run.bnr("phase2", &best, run.plan.short_limit, |t| t.short_nodes)?;
    let cover = out.cover.clone().expect("bnr returns a cover");
    if out.is_optimal() {
        return Ok((SolvedBy::Phase2, Some(run.lift(&cover)?)));
    }
    best = cover;

    if !run.out_of_time() {
        let budget = run.clique_budget(run.plan.clique_budget_kernel, |t| t.clique_kernel);
        let out = run.clique("phase3_kernel", true, &best, budget)?;
        if let Some(c) = out.cover.clone() {
            if out.is_optimal() {
                return Ok((SolvedBy::Phase3Kernel, Some(run.lift(&c)?)));
            }
            best = c;
        }
    }
    if !run.out_of_time() {
        let lifted = run.lift(&best)?;
        let budget = run.clique_budget(run.plan.clique_budget_original, |t| t.clique_original);
        let out = run.clique("phase3_original", false, &lifted, budget)?;
        if out.is_optimal() {
            return Ok((SolvedBy::Phase3Original, out.cover));
        }
    }
    if !run.out_of_time() {
        let out = run.bnr("phase4", &best, run.plan.long_limit, |t| t.long_nodes)?;
        let cover = out.cover.clone().expect("bnr returns a cover");
        if out.is_optimal() {
            return Ok((SolvedBy::Phase4, Some(run.lift(&cover)?)));
        }
        best = cover;
    }
    if !run.out_of_time() {
        if let Some(solver) = run.plan.external_clique_solver.clone() {
            return Ok(match run.external(&solver)? {
                Some(c) => (SolvedBy::Phase5, Some(c)),
                None => (SolvedBy::Unsolved, None),
            });
        }
        let lifted = run.lift(&best)?;
        let budget = run.budget(run.remaining(), |t| t.final_nodes);
        let out = run.clique("phase5", false, &lifted, budget)?;
        if out.is_optimal() {
            return Ok((SolvedBy::Phase5, out.cover));
        }
    }
    Ok((SolvedBy::Unsolved, None))
}

fn single(run: &mut Run, ablation: Ablation) -> Result<Found> {
    let seed = run.plan.seed;
    if ablation == Ablation::MoMC {
        let g = run.g;
        let initial = is_to_cover(g, &greedy_maximal_is(g, seed).members())?;
        let budget = run.budget(run.remaining(), |t| t.final_nodes);
        let out = run.clique("phase5", false, &initial, budget)?;
        return Ok(if out.is_optimal() { (SolvedBy::Phase5, out.cover) } else { (SolvedBy::Unsolved, None) });
    }
    run.kernelize();
    if run.kernel().m_prime() == 0 {
        let cover = run.kernel().lift(&[])?;
        return Ok((SolvedBy::Phase1Trivial, Some(cover)));
    }
    let (phase, out) = match ablation {
        Ablation::RMoMC => {
            let kernel = &run.kernel().kernel;
            let initial = is_to_cover(kernel, &greedy_maximal_is(kernel, seed).members())?;
            let budget = run.budget(run.remaining(), |t| t.final_nodes);
            (SolvedBy::Phase3Kernel, run.clique("phase3_kernel", true, &initial, budget)?)
        }
        Ablation::LSBnR => {
            let initial = run.ils_cover()?;
            (SolvedBy::Phase4, run.bnr("phase4", &initial, run.remaining(), |t| t.final_nodes)?)
        }
        _ => {
            let initial = run.kernel().kernel.alive_sorted();
            (SolvedBy::Phase4, run.bnr("phase4", &initial, run.remaining(), |t| t.final_nodes)?)
        }
    };
    match (out.status, out.cover) {
        (Status::Optimal, Some(c)) => Ok((phase, Some(run.lift(&c)?))),
        _ => Ok((SolvedBy::Unsolved, None)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::brute_force_vc;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
        let mut e = Vec::new();
        for i in 0..n as u32 {
            for j in i + 1..n as u32 {
                if rng.gen_bool(p) {
                    e.push((i, j));
                }
            }
        }
        Graph::from_edges(n, &e).unwrap()
    }

    #[test]
    fn p3_is_trivial() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let r = solve(&g, &PhasePlan::test(TestBudgets::default(), 0), "p3").unwrap();
        assert_eq!(r.phase, SolvedBy::Phase1Trivial);
        assert_eq!(r.cover.unwrap(), vec![1]);
        assert!(r.verified);
    }

    #[test]
    fn every_ablation_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..150 {
            let n = rng.gen_range(1..=16);
            let p = rng.gen_range(0.1..0.9);
            let g = random_graph(&mut rng, n, p);
            let opt = brute_force_vc(&g).unwrap().0;
            for a in Ablation::ALL {
                let plan = PhasePlan { ablation: a, ..PhasePlan::test(TestBudgets::default(), 1) };
                let r = solve(&g, &plan, "r").unwrap();
                assert!(r.verified, "{a}");
                assert_eq!(r.size, Some(opt), "{a}");
            }
        }
    }

    #[test]
    fn unsolved_when_budgets_are_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        let g = random_graph(&mut rng, 150, 0.08);
        let zero = TestBudgets {
            ils_iterations: 0,
            short_nodes: 0,
            clique_kernel: 0,
            clique_original: 0,
            long_nodes: 0,
            final_nodes: 0,
        };
        let r = solve(&g, &PhasePlan::test(zero, 0), "hard").unwrap();
        assert_eq!(r.phase, SolvedBy::Unsolved);
        assert!(r.cover.is_none() && r.size.is_none() && !r.verified);
    }

    #[test]
    fn test_mode_reports_are_reproducible() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let g = random_graph(&mut rng, 60, 0.1);
        let plan = PhasePlan::test(TestBudgets::default(), 5);
        let a = serde_json::to_string(&solve(&g, &plan, "x").unwrap()).unwrap();
        let b = serde_json::to_string(&solve(&g, &plan, "x").unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(!a.contains("elapsed_ms"));
    }

    #[test]
    fn ablation_names_round_trip() {
        for a in Ablation::ALL {
            assert_eq!(a.name().parse::<Ablation>().unwrap(), a);
        }
        assert!("nope".parse::<Ablation>().is_err());
    }

    #[test]
    fn plan_limits_are_ordered() {
        let bad = PhasePlan { short_limit: Duration::from_secs(40), ..PhasePlan::default() };
        assert!(bad.validate().is_err());
        assert!(PhasePlan::with_total(Duration::from_millis(500)).validate().is_ok());
    }
}
