use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;

/// How a search ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Optimal,
    TimedOut,
    /// The instance was outside what the solver accepts.
    Skipped,
}

/// Node, wall-clock and cancellation limits for one search. Wall clock and
/// the cancel flag are polled every [`Budget::POLL`] nodes.
#[derive(Clone, Debug)]
pub struct Budget {
    pub nodes: Option<u64>,
    pub deadline: Option<Instant>,
    pub cancel: Option<Arc<AtomicBool>>,
    used: u64,
    tripped: bool,
}

impl Budget {
    pub const POLL: u64 = 256;

    pub fn unlimited() -> Self {
        Budget { nodes: None, deadline: None, cancel: None, used: 0, tripped: false }
    }

    pub fn nodes(n: u64) -> Self {
        Budget { nodes: Some(n), ..Budget::unlimited() }
    }

    pub fn time(limit: Duration) -> Self {
        Budget { deadline: Some(Instant::now() + limit), ..Budget::unlimited() }
    }

    pub fn until(deadline: Instant) -> Self {
        Budget { deadline: Some(deadline), ..Budget::unlimited() }
    }

    pub fn with_cancel(mut self, flag: Option<Arc<AtomicBool>>) -> Self {
        self.cancel = flag;
        self
    }

    pub fn with_nodes(mut self, n: Option<u64>) -> Self {
        self.nodes = n;
        self
    }

    /// Counts one node; false once any limit is exceeded.
    pub fn tick(&mut self) -> bool {
        if self.tripped {
            return false;
        }
        self.used += 1;
        if self.nodes.is_some_and(|n| self.used > n) {
            self.tripped = true;
        } else if self.used.is_multiple_of(Self::POLL) {
            self.tripped = self.deadline.is_some_and(|d| Instant::now() >= d)
                || self.cancel.as_ref().is_some_and(|c| c.load(Ordering::Relaxed));
        }
        !self.tripped
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn exhausted(&self) -> bool {
        self.tripped
    }
}
