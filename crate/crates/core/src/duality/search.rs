use alloc::vec::Vec;

use super::{dual_only, golden_section_by, DualSolution, DualStatus};
use crate::linalg::{dot, norm_inf};
use crate::model::{enumerate_family, evaluate_constraint, sample_index_set, FamilySpec, Grid, IndexSet, IndexSubset, IndexValue, LipInstance};
use crate::{Error, Result, ToleranceConfig};

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOptions {
    /// Maximum number of subsets solved.
    pub budget: usize,
    /// Continuous refinement of the best singleton (interval index sets only).
    pub refine: bool,
    pub tol: ToleranceConfig,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            budget: 1_000_000,
            refine: false,
            tol: ToleranceConfig::default(),
        }
    }
}

/// Result of `sup_{H ∈ ℋ} sup (D_H)` over the enumerated part of `ℋ`.
#[derive(Clone, Debug, PartialEq)]
pub struct BestDual {
    /// Best optimal `(D_H)`; ties keep the earliest subset.
    pub best: Option<DualSolution>,
    /// Some enumerated `(D_H)` was unbounded, so the supremum is `+∞`.
    pub unbounded: bool,
    pub subsets_examined: usize,
    /// Subsets whose LP hit a numerical breakdown and were left out.
    pub numerical_skips: usize,
    /// `false` when the budget cut enumeration short.
    pub family_exhausted: bool,
    /// The reported optimum came from refinement rather than the grid.
    pub refined: bool,
}

impl BestDual {
    pub fn value(&self) -> f64 {
        if self.unbounded {
            f64::INFINITY
        } else {
            self.best.as_ref().map_or(f64::NEG_INFINITY, |d| d.value)
        }
    }
}

pub fn sup_dual_over_family(
    inst: &LipInstance,
    spec: &FamilySpec,
    grid: &Grid,
    opts: &SearchOptions,
) -> Result<BestDual> {
    let sampled = sample_index_set(inst.index_set(), grid)?;
    let mut iter = enumerate_family(spec, inst.index_set(), &sampled, opts.budget)?;
    let mut out = BestDual {
        best: None,
        unbounded: false,
        subsets_examined: 0,
        numerical_skips: 0,
        family_exhausted: true,
        refined: false,
    };
    for h in iter.by_ref() {
        out.subsets_examined += 1;
        match skip_breakdown(dual_only(inst, &h, &opts.tol))? {
            None => out.numerical_skips += 1,
            Some(DualStatus::Optimal(d)) => {
                if out.best.as_ref().is_none_or(|b| d.value > b.value) {
                    out.best = Some(d);
                }
            }
            Some(DualStatus::Unbounded) => out.unbounded = true,
            Some(DualStatus::Infeasible) => {}
        }
    }
    out.family_exhausted = !iter.truncated();
    if out.subsets_examined == 0 {
        return Err(Error::EmptyFamily);
    }
    if opts.refine && spec.is_singletons() && !out.unbounded {
        if let Some(d) = refine_singleton(inst, &sampled, &opts.tol)? {
            if out.best.as_ref().is_none_or(|b| d.value > b.value) {
                out.best = Some(d);
                out.refined = true;
            }
        }
    }
    Ok(out)
}

/// Closed-form singleton dual used to steer refinement: the residual of
/// `μ a_t = −c` at the best `μ ≥ 0`, and the value `−μ b_t` there.
#[derive(Clone, Copy, Debug)]
struct Merit {
    resid2: f64,
    value: f64,
    feasible: bool,
}

fn merit(inst: &LipInstance, t: f64, feas2: f64) -> Merit {
    let Ok((a, b)) = evaluate_constraint(inst, &IndexValue::real(t)) else {
        return Merit {
            resid2: f64::INFINITY,
            value: f64::NEG_INFINITY,
            feasible: false,
        };
    };
    let w: Vec<f64> = inst.objective().iter().map(|c| -c).collect();
    let aa = dot(&a, &a);
    let aw = dot(&a, &w);
    let mu = if aa > 0.0 && aw > 0.0 { aw / aa } else { 0.0 };
    let resid2: f64 = w.iter().zip(a.iter()).map(|(wi, ai)| (wi - mu * ai) * (wi - mu * ai)).sum();
    Merit {
        resid2,
        value: -mu * b,
        feasible: resid2 <= feas2,
    }
}

/// Feasible beats infeasible; among feasible the larger value wins, among
/// infeasible the smaller residual.
fn merit_better(x: &Merit, y: &Merit) -> bool {
    match (x.feasible, y.feasible) {
        (true, true) => x.value > y.value,
        (true, false) => true,
        (false, true) => false,
        (false, false) => x.resid2 < y.resid2,
    }
}

/// Golden-section search for the best singleton `{t}` between the grid
/// neighbours of the best grid point, finished by an exact solve at the
/// located `t`. Only interval index sets are refined.
pub(crate) fn refine_singleton(
    inst: &LipInstance,
    sampled: &[IndexValue],
    tol: &ToleranceConfig,
) -> Result<Option<DualSolution>> {
    let IndexSet::Interval { lo, hi } = *inst.index_set() else {
        return Ok(None);
    };
    let ts: Vec<f64> = sampled.iter().filter_map(IndexValue::as_real).collect();
    if ts.is_empty() {
        return Ok(None);
    }
    // tighter than the LP's own tolerance: the search drifts to the edge of the band
    let eps = 0.1 * tol.feas_tol * (1.0 + norm_inf(inst.objective()));
    let feas2 = eps * eps;
    let mut best_i = 0;
    let mut best_m = merit(inst, ts[0], feas2);
    for (i, &t) in ts.iter().enumerate().skip(1) {
        let m = merit(inst, t, feas2);
        if merit_better(&m, &best_m) {
            best_i = i;
            best_m = m;
        }
    }
    let left = if best_i > 0 { ts[best_i - 1] } else { ts[best_i] };
    let right = ts.get(best_i + 1).copied().unwrap_or(ts[best_i]);
    let (t, m) = golden_section_by(
        left.max(lo),
        right.min(hi),
        1e-10,
        |t| merit(inst, t, feas2),
        merit_better,
    );
    if !m.feasible {
        return Ok(None);
    }
    Ok(match skip_breakdown(dual_only(inst, &IndexSubset::singleton(IndexValue::real(t)), tol))? {
        Some(DualStatus::Optimal(d)) => Some(d),
        _ => None,
    })
}

/// Turns a numerical breakdown into `None` so that one ill-conditioned
/// subset does not abort a scan over many.
pub(crate) fn skip_breakdown<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::NumericalBreakdown(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::builtin_instance;

    #[test]
    fn grid_search_midpoint() {
        let inst = builtin_instance("ex41", &[1.0, 1.0]).unwrap();
        let r = sup_dual_over_family(&inst, &FamilySpec::Singletons, &Grid::new(101, 0), &SearchOptions::default())
            .unwrap();
        assert!((r.value() - 0.5).abs() < 1e-12);
        assert_eq!(r.subsets_examined, 101);
        assert!(r.family_exhausted);
    }

    #[test]
    fn refinement_finds_off_grid_point() {
        let inst = builtin_instance("ex41", &[2.0, 1.0]).unwrap();
        let plain =
            sup_dual_over_family(&inst, &FamilySpec::Singletons, &Grid::new(101, 0), &SearchOptions::default())
                .unwrap();
        // 2/3 is not on the grid, so no singleton there is dual feasible
        assert!(plain.best.is_none());
        let opts = SearchOptions {
            refine: true,
            ..SearchOptions::default()
        };
        let r = sup_dual_over_family(&inst, &FamilySpec::Singletons, &Grid::new(101, 0), &opts).unwrap();
        assert!(r.refined);
        assert!((r.value() - 2.0 / 3.0).abs() < 1e-6, "{}", r.value());
    }

    #[test]
    fn budget_truncates() {
        let inst = builtin_instance("ex41", &[1.0, 1.0]).unwrap();
        let opts = SearchOptions {
            budget: 10,
            ..SearchOptions::default()
        };
        let r = sup_dual_over_family(&inst, &FamilySpec::Singletons, &Grid::new(101, 0), &opts).unwrap();
        assert_eq!(r.subsets_examined, 10);
        assert!(!r.family_exhausted);
    }

    #[test]
    fn empty_explicit_family() {
        let inst = builtin_instance("ex41", &[1.0, 1.0]).unwrap();
        let r = sup_dual_over_family(
            &inst,
            &FamilySpec::Explicit(Vec::new()),
            &Grid::new(11, 0),
            &SearchOptions::default(),
        );
        assert_eq!(r, Err(Error::EmptyFamily));
    }
}
