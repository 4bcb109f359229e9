//! Prefix subproblems `H_m = {1, …, m}` of programs with a countable index.

use alloc::vec::Vec;

use crate::duality::{solve_dual_subproblem, solve_primal_subproblem};
use crate::model::{sample_index_set, Factor, Grid, IndexSet, IndexSubset, IndexValue, LipInstance, Scalar};
use crate::{Error, Result, ToleranceConfig};

/// How the interval factor of a product set enters each prefix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProductMode {
    /// `H_m` = interval grid × `{1..m}`.
    MaxOverGrid { resolution: usize },
    /// `H_m` = `{t} × {1..m}`.
    Frozen(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrefixOptions {
    pub product: ProductMode,
    pub stab_tol: f64,
    /// Stabilization is only reported when the last `window` values are flat.
    pub window: usize,
    pub tol: ToleranceConfig,
}

impl Default for PrefixOptions {
    fn default() -> Self {
        Self {
            product: ProductMode::MaxOverGrid { resolution: 101 },
            stab_tol: 1e-9,
            window: 5,
            tol: ToleranceConfig::default(),
        }
    }
}

/// `inf(P_m)` and `sup(D_m)` for `m = 1..=m_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrefixTrace {
    pub m_values: Vec<u64>,
    pub primal_values: Vec<f64>,
    pub dual_values: Vec<f64>,
    pub stabilized_at: Option<u64>,
}

impl PrefixTrace {
    /// `primal − dual` per prefix, `0` where both are the same infinity.
    pub fn gaps(&self) -> Vec<f64> {
        self.primal_values
            .iter()
            .zip(&self.dual_values)
            .map(|(&p, &d)| if p == d { 0.0 } else { p - d })
            .collect()
    }
}

fn prefix(set: &IndexSet, m: u64, opts: &PrefixOptions) -> Result<IndexSubset> {
    let counts = || (1..=m).map(Scalar::Count);
    let values: Vec<IndexValue> = match set {
        IndexSet::Countable => counts().map(IndexValue::Single).collect(),
        IndexSet::Product(a, b) => {
            let (interval, countable_first) = match (a, b) {
                (Factor::Countable, Factor::Interval { .. }) => (*b, true),
                (Factor::Interval { .. }, Factor::Countable) => (*a, false),
                _ => return Err(Error::NotCountable),
            };
            let ts: Vec<Scalar> = match opts.product {
                ProductMode::Frozen(t) => {
                    if let Factor::Interval { lo, hi } = interval {
                        if !(lo..=hi).contains(&t) {
                            return Err(Error::IndexOutOfRange);
                        }
                    }
                    alloc::vec![Scalar::Real(t)]
                }
                ProductMode::MaxOverGrid { resolution } => {
                    let Factor::Interval { lo, hi } = interval else {
                        unreachable!()
                    };
                    sample_index_set(&IndexSet::Interval { lo, hi }, &Grid::new(resolution, 1))?
                        .into_iter()
                        .filter_map(|v| v.as_real().map(Scalar::Real))
                        .collect()
                }
            };
            let mut out = Vec::with_capacity(ts.len() * m as usize);
            for &t in &ts {
                for k in counts() {
                    out.push(if countable_first {
                        IndexValue::Pair(k, t)
                    } else {
                        IndexValue::Pair(t, k)
                    });
                }
            }
            out
        }
        _ => return Err(Error::NotCountable),
    };
    IndexSubset::new(values)
}

pub fn prefix_trace(inst: &LipInstance, m_max: u64, opts: &PrefixOptions) -> Result<PrefixTrace> {
    if !inst.index_set().has_countable_factor() {
        return Err(Error::NotCountable);
    }
    if m_max == 0 {
        return Err(Error::Invalid("m_max must be at least 1"));
    }
    let mut trace = PrefixTrace {
        m_values: Vec::new(),
        primal_values: Vec::new(),
        dual_values: Vec::new(),
        stabilized_at: None,
    };
    for m in 1..=m_max {
        let h = prefix(inst.index_set(), m, opts)?;
        let dual = solve_dual_subproblem(inst, &h, &opts.tol)?.dual_value();
        let primal = solve_primal_subproblem(inst, &h, &opts.tol)?.primal_value();
        trace.m_values.push(m);
        trace.primal_values.push(primal);
        trace.dual_values.push(dual);
    }
    trace.stabilized_at = stabilization(&trace.dual_values, opts.stab_tol, opts.window).map(|i| trace.m_values[i]);
    Ok(trace)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol
}

/// Smallest position from which every value matches the last, provided the
/// last `window` values do.
fn stabilization(values: &[f64], tol: f64, window: usize) -> Option<usize> {
    let last = *values.last()?;
    if window == 0 || values.len() < window {
        return None;
    }
    if !values[values.len() - window..].iter().all(|&v| close(v, last, tol)) {
        return None;
    }
    let flat_from = values.iter().rposition(|&v| !close(v, last, tol)).map_or(0, |i| i + 1);
    Some(flat_from)
}

/// Tail extrapolation of a [`PrefixTrace`]; both indicators are heuristics.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitReport {
    pub dual_limit_estimate: f64,
    pub primal_limit_estimate: f64,
    /// The dual tail still rises by more than the stabilization tolerance.
    pub dual_increasing: bool,
    pub primal_increasing: bool,
    pub zero_gap: bool,
    pub hn_reducible: bool,
}

pub const MIN_TRACE_LEN: usize = 5;

/// Gap below which the last primal and dual values count as equal.
pub const ZERO_GAP_TOL: f64 = 1e-7;

pub fn limit_report(trace: &PrefixTrace, tail_fraction: f64) -> Result<LimitReport> {
    let len = trace.dual_values.len();
    if len < MIN_TRACE_LEN {
        return Err(Error::TraceTooShort);
    }
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::Invalid("tail fraction must lie in (0, 1]"));
    }
    let tail = ((len as f64 * tail_fraction) as usize).clamp(2, len);
    let rising = |v: &[f64]| {
        let t = &v[len - tail..];
        let (first, last) = (t[0], t[tail - 1]);
        last > first && !close(first, last, 1e-9)
    };
    let dual = trace.dual_values[len - 1];
    let primal = trace.primal_values[len - 1];
    let zero_gap = close(primal, dual, ZERO_GAP_TOL);
    Ok(LimitReport {
        dual_limit_estimate: dual,
        primal_limit_estimate: primal,
        dual_increasing: rising(&trace.dual_values),
        primal_increasing: rising(&trace.primal_values),
        zero_gap,
        hn_reducible: trace.stabilized_at.is_some() && zero_gap,
    })
}
