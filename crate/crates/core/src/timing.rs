//! Recognition latency bounds for a disc feeding a pattern recognizer.
//!
//! Worst case, the recognizer waits for the full ripple before consuming the
//! pattern: `T_project + T_ripple·N + T_pcn·N`. When it consumes the pattern
//! while the ripple is still running the ripple term overlaps and drops out:
//! `T_project + T_pcn·N`. All durations are integer nanoseconds.

use serde::{Deserialize, Serialize};

use crate::error::{Result, RpnError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimingParams {
    pub t_project_ns: u64,
    pub t_ripple_ns: u64,
    pub t_pcn_ns: u64,
    /// Pattern length (rings per arm).
    pub n: u64,
}

impl TimingParams {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(RpnError::invalid("n", "must be at least 1"));
        }
        Ok(())
    }
}

/// Upper bound on recognition time in nanoseconds. Saturates at `u64::MAX`.
pub fn t_recognize(p: &TimingParams, worst_case: bool) -> u64 {
    let pcn = p.t_pcn_ns.saturating_mul(p.n);
    let overlapped = p.t_project_ns.saturating_add(pcn);
    if worst_case {
        overlapped.saturating_add(p.t_ripple_ns.saturating_mul(p.n))
    } else {
        overlapped
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimingReport {
    pub worst_case_ns: u64,
    pub overlapped_ns: u64,
}

pub fn report(p: &TimingParams) -> TimingReport {
    TimingReport {
        worst_case_ns: t_recognize(p, true),
        overlapped_ns: t_recognize(p, false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_durations() {
        let p = TimingParams {
            t_project_ns: 0,
            t_ripple_ns: 0,
            t_pcn_ns: 0,
            n: 77,
        };
        assert_eq!(t_recognize(&p, true), 0);
        assert_eq!(t_recognize(&p, false), 0);
    }

    #[test]
    fn saturates_instead_of_wrapping() {
        let p = TimingParams {
            t_project_ns: 1,
            t_ripple_ns: u64::MAX,
            t_pcn_ns: 2,
            n: 3,
        };
        assert_eq!(t_recognize(&p, true), u64::MAX);
        assert_eq!(t_recognize(&p, false), 7);
    }

    #[test]
    fn n_must_be_positive() {
        let p = TimingParams {
            t_project_ns: 0,
            t_ripple_ns: 0,
            t_pcn_ns: 0,
            n: 0,
        };
        assert!(p.validate().is_err());
    }
}
