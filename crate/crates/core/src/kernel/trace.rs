use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Vertex;

/// One applied reduction (or branching decision), with what is needed to
/// undo it at lift time.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Step {
    /// Degree-0 vertex dropped; never in the cover.
    Isolated(Vertex),
    /// `v` had degree one with neighbor `u`; `u` joins the cover.
    Pendant {
        v: Vertex,
        u: Vertex,
    },
    /// Degree-2 `v` with non-adjacent `u`, `w` contracted into `folded`.
    Fold {
        v: Vertex,
        u: Vertex,
        w: Vertex,
        folded: Vertex,
    },
    /// Integral part of the half-integral LP optimum.
    LpFixed {
        ones: Vec<Vertex>,
        zeros: Vec<Vertex>,
    },
    Unconfined(Vertex),
    /// Degree-3 twins whose common neighborhood spans an edge.
    TwinEdges {
        u: Vertex,
        v: Vertex,
        nbrs: [Vertex; 3],
    },
    /// Degree-3 twins with independent neighborhood, replaced by `gadget`.
    TwinGadget {
        u: Vertex,
        v: Vertex,
        nbrs: [Vertex; 3],
        gadget: Vertex,
    },
    /// Alternatives `{u}` / `{v}`; `shared` = N(u) ∩ N(v) joins the cover.
    Funnel {
        u: Vertex,
        v: Vertex,
        shared: Vec<Vertex>,
        u_side: Vec<Vertex>,
        v_side: Vec<Vertex>,
        edges_added: usize,
    },
    /// Alternatives `A` / `B` forming a chordless 4-cycle.
    Desk {
        a: [Vertex; 2],
        b: [Vertex; 2],
        a_side: Vec<Vertex>,
        b_side: Vec<Vertex>,
        edges_added: usize,
    },
    /// Branching decisions.
    Include(Vec<Vertex>),
    Exclude(Vec<Vertex>),
}

impl Step {
    /// Number of cover vertices this step accounts for.
    pub fn offset(&self) -> usize {
        match self {
            Step::Isolated(_) | Step::Exclude(_) => 0,
            Step::Pendant { .. } | Step::Fold { .. } | Step::Unconfined(_) => 1,
            Step::LpFixed { ones, .. } => ones.len(),
            Step::TwinEdges { .. } => 3,
            Step::TwinGadget { .. } => 2,
            Step::Funnel { shared, .. } => shared.len() + 1,
            Step::Desk { .. } => 2,
            Step::Include(vs) => vs.len(),
        }
    }

    fn undo(&self, cover: &mut [bool]) -> Result<()> {
        let set = |cover: &mut [bool], vs: &[Vertex], val: bool| {
            for &v in vs {
                cover[v as usize] = val;
            }
        };
        match self {
            Step::Isolated(v) => cover[*v as usize] = false,
            Step::Pendant { v, u } => {
                cover[*u as usize] = true;
                cover[*v as usize] = false;
            }
            Step::Fold { v, u, w, folded } => {
                let take_outer = cover[*folded as usize];
                cover[*u as usize] = take_outer;
                cover[*w as usize] = take_outer;
                cover[*v as usize] = !take_outer;
            }
            Step::LpFixed { ones, zeros } => {
                set(cover, ones, true);
                set(cover, zeros, false);
            }
            Step::Unconfined(v) => cover[*v as usize] = true,
            Step::TwinEdges { u, v, nbrs } => {
                set(cover, nbrs, true);
                set(cover, &[*u, *v], false);
            }
            Step::TwinGadget { u, v, nbrs, gadget } => {
                let take_nbrs = cover[*gadget as usize];
                set(cover, nbrs, take_nbrs);
                set(cover, &[*u, *v], !take_nbrs);
            }
            Step::Funnel { u, v, shared, u_side, v_side, .. } => {
                set(cover, shared, true);
                choose_alternative(cover, &[*u], &[*v], u_side, v_side)?;
            }
            Step::Desk { a, b, a_side, b_side, .. } => {
                choose_alternative(cover, a, b, a_side, b_side)?;
            }
            Step::Include(vs) => set(cover, vs, true),
            Step::Exclude(vs) => set(cover, vs, false),
        }
        Ok(())
    }
}

// Taking A into the cover leaves the edges between B and B's outer
// neighborhood, so it needs all of `b_side` covered; symmetrically for B.
fn choose_alternative(
    cover: &mut [bool],
    a: &[Vertex],
    b: &[Vertex],
    a_side: &[Vertex],
    b_side: &[Vertex],
) -> Result<()> {
    let covered = |cover: &[bool], vs: &[Vertex]| vs.iter().all(|&x| cover[x as usize]);
    let take_a = if covered(cover, b_side) {
        true
    } else if covered(cover, a_side) {
        false
    } else {
        return Err(Error::Logic("neither alternative completes the cover".into()));
    };
    for &x in a {
        cover[x as usize] = take_a;
    }
    for &x in b {
        cover[x as usize] = !take_a;
    }
    Ok(())
}

/// Ordered log of reductions applied to a graph.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Trace {
    steps: Vec<Step>,
    offset: usize,
}

impl Trace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, step: Step) {
        self.offset += step.offset();
        self.steps.push(step);
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Cover vertices forced so far.
    pub fn offset(&self) -> usize {
        self.offset
    }

    /// Drops every step after the first `len`.
    pub fn truncate(&mut self, len: usize) {
        while self.steps.len() > len {
            let s = self.steps.pop().unwrap();
            self.offset -= s.offset();
        }
    }

    /// Undoes all steps in reverse on top of a membership vector describing
    /// a cover of the reduced graph. On return `cover` describes a cover of
    /// the graph the trace started from.
    pub fn lift_in_place(&self, cover: &mut Vec<bool>) -> Result<()> {
        let max_id = self.steps.iter().flat_map(step_ids).max().map_or(0, |m| m as usize + 1);
        if cover.len() < max_id {
            cover.resize(max_id, false);
        }
        for step in self.steps.iter().rev() {
            step.undo(cover)?;
        }
        Ok(())
    }
}

fn step_ids(step: &Step) -> Vec<Vertex> {
    match step {
        Step::Isolated(v) | Step::Unconfined(v) => vec![*v],
        Step::Pendant { v, u } => vec![*v, *u],
        Step::Fold { v, u, w, folded } => vec![*v, *u, *w, *folded],
        Step::LpFixed { ones, zeros } => ones.iter().chain(zeros).copied().collect(),
        Step::TwinEdges { u, v, nbrs } => [*u, *v].iter().chain(nbrs).copied().collect(),
        Step::TwinGadget { u, v, nbrs, gadget } => [*u, *v, *gadget].iter().chain(nbrs).copied().collect(),
        Step::Funnel { u, v, shared, u_side, v_side, .. } => {
            [*u, *v].iter().chain(shared).chain(u_side).chain(v_side).copied().collect()
        }
        Step::Desk { a, b, a_side, b_side, .. } => a.iter().chain(b).chain(a_side).chain(b_side).copied().collect(),
        Step::Include(vs) | Step::Exclude(vs) => vs.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offsets_accumulate_and_truncate() {
        let mut t = Trace::new();
        t.push(Step::Pendant { v: 0, u: 1 });
        t.push(Step::TwinGadget { u: 2, v: 3, nbrs: [4, 5, 6], gadget: 7 });
        t.push(Step::Isolated(8));
        assert_eq!(t.offset(), 3);
        t.truncate(1);
        assert_eq!(t.offset(), 1);
    }

    #[test]
    fn fold_lift_both_ways() {
        let mut t = Trace::new();
        t.push(Step::Fold { v: 1, u: 0, w: 2, folded: 3 });
        let mut c = vec![false, false, false, true];
        t.lift_in_place(&mut c).unwrap();
        assert_eq!(&c[..3], &[true, false, true]);
        let mut c = vec![false; 4];
        t.lift_in_place(&mut c).unwrap();
        assert_eq!(&c[..3], &[false, true, false]);
    }

    #[test]
    fn alternative_without_completion_is_an_error() {
        let mut t = Trace::new();
        t.push(Step::Desk { a: [0, 1], b: [2, 3], a_side: vec![4], b_side: vec![5], edges_added: 1 });
        let mut c = vec![false; 6];
        assert!(matches!(t.lift_in_place(&mut c), Err(Error::Logic(_))));
    }
}
