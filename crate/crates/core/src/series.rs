//! Stopping rule shared by every infinite sum in the crate.

use std::collections::VecDeque;

use crate::error::{convergence, Result};
use crate::valuation::{fmt_rat, Rat, Val};

/// Terms of a p-adic series are summed until the latest term's valuation
/// reaches the target precision *and* the last `max(5, p)` term valuations
/// have been nondecreasing. More than `10 * target` terms is a convergence
/// failure.
#[derive(Clone, Debug)]
pub struct ConvergenceMonitor {
    target: Rat,
    window: usize,
    cap: usize,
    recent: VecDeque<Option<Rat>>,
    seen: usize,
    what: &'static str,
}

/// Whether to keep summing after observing a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Continue,
    Done,
}

impl ConvergenceMonitor {
    pub fn new(p: u64, target: Rat, what: &'static str) -> Self {
        let cap = (target.ceil().to_integer().max(1) as usize).saturating_mul(10).max(64);
        ConvergenceMonitor { target, window: 5.max(p as usize), cap, recent: VecDeque::new(), seen: 0, what }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn target(&self) -> Rat {
        self.target
    }

    pub fn terms_seen(&self) -> usize {
        self.seen
    }

    /// Records the valuation of the term just computed.
    ///
    /// A term that is zero to a precision at or beyond the target counts as
    /// infinitely small.
    pub fn observe(&mut self, term: Val) -> Result<Step> {
        self.observe_with_tail(term, None)
    }

    /// As [`observe`](Self::observe), but additionally requires a proven lower
    /// bound on the valuation of every later term to reach the target.
    pub fn observe_with_tail(&mut self, term: Val, tail_floor: Option<Rat>) -> Result<Step> {
        self.seen += 1;
        let eff = match term {
            Val::AtLeast(b) if b >= self.target => None,
            v => Some(v.bound()),
        };
        self.recent.push_back(eff);
        if self.recent.len() > self.window {
            self.recent.pop_front();
        }
        let negligible = term.bound() >= self.target;
        let tail_ok = tail_floor.is_none_or(|f| f >= self.target);
        if negligible && tail_ok && self.nondecreasing() {
            return Ok(Step::Done);
        }
        if self.seen >= self.cap {
            return Err(convergence!(
                "{}: {} terms summed without settling; last term valuation {} against target {}",
                self.what,
                self.seen,
                term,
                fmt_rat(&self.target)
            ));
        }
        Ok(Step::Continue)
    }

    fn nondecreasing(&self) -> bool {
        self.recent.iter().zip(self.recent.iter().skip(1)).all(|(a, b)| match (a, b) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(x), Some(y)) => x <= y,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stops_on_increasing_tail() {
        let mut m = ConvergenceMonitor::new(3, Rat::from_integer(4), "test");
        let vals = [0, 1, 2, 3, 4];
        let mut last = Step::Continue;
        for v in vals {
            last = m.observe(Val::exact_int(v)).unwrap();
        }
        assert_eq!(last, Step::Done);
        assert_eq!(m.terms_seen(), 5);
    }

    #[test]
    fn waits_out_a_dip() {
        let mut m = ConvergenceMonitor::new(5, Rat::from_integer(3), "test");
        for v in [0, 2, 1, 3, 4, 5] {
            assert_eq!(m.observe(Val::exact_int(v)).unwrap(), Step::Continue);
        }
        assert_eq!(m.observe(Val::exact_int(6)).unwrap(), Step::Done);
    }

    #[test]
    fn caps_divergent_series() {
        let mut m = ConvergenceMonitor::new(3, Rat::from_integer(2), "divergent").with_cap(10);
        let err = (0..20).map(|_| m.observe(Val::exact_int(0))).find(|r| r.is_err()).unwrap().unwrap_err();
        assert_eq!(err.kind(), "convergence");
    }
}
