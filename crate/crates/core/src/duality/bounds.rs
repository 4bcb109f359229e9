use alloc::vec;
use alloc::vec::Vec;

use super::search::{sup_dual_over_family, SearchOptions};
use super::{solve_dual_subproblem, DualSolution, PrimalStatus};
use crate::linalg::{dot, norm_inf};
use crate::lp::{solve_standard_lp, LpOutcome, StandardLp};
use crate::model::{evaluate_subset, sample_index_set, FamilySpec, Grid, IndexSubset, IndexValue, LipInstance};
use crate::{DenseVector, Matrix, Result, ToleranceConfig};

#[derive(Clone, Debug, PartialEq)]
pub struct BoundsOptions {
    /// Grid used to validate the witness; `None` means [`Grid::doubled`].
    pub validation: Option<Grid>,
    /// Subsets tried by the bounded-cardinality dual search.
    pub subset_budget: usize,
    /// Cardinality bound of that search; `None` means `n + 1`.
    pub max_card: Option<usize>,
    /// Allowed constraint violation of the witness on the validation grid.
    pub margin: f64,
    pub tol: ToleranceConfig,
}

impl Default for BoundsOptions {
    fn default() -> Self {
        Self {
            validation: None,
            subset_budget: 500,
            max_card: None,
            margin: 1e-7,
            tol: ToleranceConfig::default(),
        }
    }
}

/// How `inf(P)` was classified on the grids.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundStatus {
    /// Both bounds finite.
    Bounded,
    /// A validated feasible point and a validated improving direction.
    Unbounded,
    /// Already the grid subproblem is infeasible.
    Infeasible,
    /// At least one side could not be established.
    Unresolved,
}

/// Two-sided bounds `lower ≤ inf(P) ≤ upper` from one grid and its validation grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GapReport {
    pub lower: f64,
    pub upper: f64,
    /// Feasible on the validation grid within the margin; present iff `upper < +∞`.
    pub witness: Option<DenseVector>,
    /// `upper − lower`, and `0` when both are the same infinity.
    pub gap: f64,
    pub status: BoundStatus,
    pub grid: Grid,
    pub validation: Grid,
    /// Dual attaining `lower`, when it is finite.
    pub best_dual: Option<DualSolution>,
}

fn gap_of(lower: f64, upper: f64) -> f64 {
    if lower == upper {
        0.0
    } else {
        upper - lower
    }
}

/// `argmin c·x s.t. ⟨a_j, x⟩ ≤ b_j`, solved as the standard-form dual
/// `max −b·μ s.t. Σ μ_j a_j = −c`; `x` is minus the row duals.
fn min_linear(c: &[f64], a: &[Vec<f64>], b: &[f64], tol: &ToleranceConfig) -> Result<Option<Vec<f64>>> {
    let e = Matrix::from_columns(c.len(), a)?;
    let lp = StandardLp::new(e, c.iter().map(|v| -v).collect(), b.iter().map(|v| -v).collect())?;
    Ok(match solve_standard_lp(&lp, tol)? {
        LpOutcome::Optimal { row_duals, .. } => Some(row_duals.iter().map(|p| -p).collect()),
        _ => None,
    })
}

/// Box rows `±x_i ≤ bound` over the first `n` of `width` coordinates.
fn push_box(a: &mut Vec<Vec<f64>>, b: &mut Vec<f64>, n: usize, width: usize, bound: f64) {
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut row = vec![0.0; width];
            row[i] = s;
            a.push(row);
            b.push(bound);
        }
    }
}

/// Largest uniform slack `σ ≤ 1` over the grid rows inside the box, and a point attaining it.
fn slater(a: &[DenseVector], b: &[f64], bound: f64, tol: &ToleranceConfig) -> Result<Option<(Vec<f64>, f64)>> {
    let n = a[0].len();
    let mut rows: Vec<Vec<f64>> = a
        .iter()
        .map(|at| {
            let mut r = at.to_vec();
            r.push(1.0);
            r
        })
        .collect();
    let mut rhs = b.to_vec();
    push_box(&mut rows, &mut rhs, n, n + 1, bound);
    let mut cap = vec![0.0; n + 1];
    cap[n] = 1.0;
    rows.push(cap);
    rhs.push(1.0);
    let mut obj = vec![0.0; n + 1];
    obj[n] = -1.0;
    Ok(min_linear(&obj, &rows, &rhs, tol)?.map(|mut z| {
        let sigma = z.pop().unwrap_or(0.0);
        (z, sigma)
    }))
}

/// Cheapest point with slack `sigma` on every grid row, inside the box.
fn interior_point(
    c: &[f64],
    a: &[DenseVector],
    b: &[f64],
    sigma: f64,
    bound: f64,
    tol: &ToleranceConfig,
) -> Result<Option<Vec<f64>>> {
    let n = c.len();
    let mut rows: Vec<Vec<f64>> = a.iter().map(|at| at.to_vec()).collect();
    let mut rhs: Vec<f64> = b.iter().map(|v| v - sigma).collect();
    push_box(&mut rows, &mut rhs, n, n, bound);
    min_linear(c, &rows, &rhs, tol)
}

/// `⟨a_t, x⟩ − b_t` for every validation point.
fn residuals(a: &[DenseVector], b: &[f64], x: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(at, bt)| at.dot(x) - bt).collect()
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Moves `x_hat` toward a strictly feasible `x_in` just far enough to satisfy
/// every validation row; `None` if the result still fails the margin.
fn push_to_feasible(
    x_hat: &[f64],
    x_in: &[f64],
    va: &[DenseVector],
    vb: &[f64],
    margin: f64,
) -> Option<Vec<f64>> {
    let r_hat = residuals(va, vb, x_hat);
    if max_of(&r_hat) <= 0.0 {
        return Some(x_hat.to_vec());
    }
    let r_in = residuals(va, vb, x_in);
    let mut theta: f64 = 0.0;
    for (&rh, &ri) in r_hat.iter().zip(&r_in) {
        if rh > 0.0 {
            if ri >= 0.0 {
                return None;
            }
            theta = theta.max(rh / (rh - ri));
        }
    }
    let theta = (theta * (1.0 + 1e-9) + 1e-15).min(1.0);
    let x: Vec<f64> = x_hat
        .iter()
        .zip(x_in)
        .map(|(h, i)| h + theta * (i - h))
        .collect();
    (max_of(&residuals(va, vb, &x)) <= margin).then_some(x)
}

pub fn primal_bounds(inst: &LipInstance, grid: &Grid, opts: &BoundsOptions) -> Result<GapReport> {
    let validation = opts.validation.unwrap_or_else(|| grid.doubled());
    let n = inst.dim();
    let c = inst.objective();
    let sampled = sample_index_set(inst.index_set(), grid)?;
    let full = IndexSubset::new(sampled.clone())?;
    let outcome = solve_dual_subproblem(inst, &full, &opts.tol)?;

    let family = sup_dual_over_family(
        inst,
        &FamilySpec::BoundedSubsets {
            max_card: opts.max_card.unwrap_or(n + 1),
        },
        grid,
        &SearchOptions {
            budget: opts.subset_budget,
            refine: false,
            tol: opts.tol,
        },
    )?;
    let (mut lower, mut best_dual) = (outcome.dual_value(), outcome.dual_solution().cloned().map(DualSolution::into_support));
    if family.value() > lower {
        lower = family.value();
        best_dual = family.best.clone();
    }

    let report = |lower: f64, upper: f64, witness, status, best_dual| GapReport {
        lower,
        upper,
        witness,
        gap: gap_of(lower, upper),
        status,
        grid: *grid,
        validation,
        best_dual,
    };

    if outcome.primal == PrimalStatus::Infeasible {
        return Ok(report(f64::INFINITY, f64::INFINITY, None, BoundStatus::Infeasible, None));
    }

    let vsample: Vec<IndexValue> = sample_index_set(inst.index_set(), &validation)?;
    let (va, vb) = evaluate_subset(inst, &vsample)?;
    let (ga, gb) = evaluate_subset(inst, &sampled)?;

    let x_hat = match &outcome.primal {
        PrimalStatus::Optimal { x, .. } => Some(x.to_vec()),
        _ => None,
    };
    let bound = 1.0 + 10.0 * x_hat.as_deref().map_or(1.0, norm_inf);
    let interior = match slater(&ga, &gb, bound, &opts.tol)? {
        Some((x_s, sigma)) if sigma > 0.0 => {
            // sensitivity makes the push cost roughly independent of the slack used
            interior_point(c, &ga, &gb, 0.5 * sigma, bound, &opts.tol)?.or(Some(x_s))
        }
        _ => None,
    };

    match &outcome.primal {
        PrimalStatus::Optimal { .. } => {
            let x_hat = x_hat.unwrap_or_default();
            let pushed = if max_of(&residuals(&va, &vb, &x_hat)) <= 0.0 {
                Some(x_hat)
            } else {
                interior
                    .as_deref()
                    .and_then(|x_in| push_to_feasible(&x_hat, x_in, &va, &vb, opts.margin))
            };
            Ok(match pushed {
                Some(x) => {
                    let upper = dot(c, &x);
                    let status = if lower.is_finite() {
                        BoundStatus::Bounded
                    } else {
                        BoundStatus::Unresolved
                    };
                    report(lower, upper, Some(DenseVector::new(x)?), status, best_dual)
                }
                None => report(lower, f64::INFINITY, None, BoundStatus::Unresolved, best_dual),
            })
        }
        PrimalStatus::Unbounded { ray } => {
            let feasible = interior.filter(|x| max_of(&residuals(&va, &vb, x)) <= opts.margin);
            let recession_ok = va.iter().all(|at| at.dot(ray) <= opts.margin);
            Ok(match feasible {
                Some(x) if recession_ok && c.dot(ray) < 0.0 => report(
                    f64::NEG_INFINITY,
                    f64::NEG_INFINITY,
                    Some(DenseVector::new(x)?),
                    BoundStatus::Unbounded,
                    None,
                ),
                Some(x) => {
                    let upper = dot(c, &x);
                    report(lower, upper, Some(DenseVector::new(x)?), BoundStatus::Unresolved, None)
                }
                None => report(lower, f64::INFINITY, None, BoundStatus::Unresolved, None),
            })
        }
        PrimalStatus::Infeasible => unreachable!("handled above"),
    }
}

/// Slack allowed on each side of the conjugate bracket.
pub const ATTAIN_TOL: f64 = 1e-6;

/// Comparison of `(f + δ_E)*(y)` with `min_{H ∈ ℋ} φ_H(y)` at one shift point.
#[derive(Clone, Debug, PartialEq)]
pub struct StrongDualityReport {
    /// `−inf{⟨c − y, x⟩ : x ∈ E}`, taken from the lower bound on the validation grid.
    pub conj_estimate: f64,
    /// `min_{H ∈ ℋ} φ_H(y)` over the enumerated family.
    pub phi_family_value: f64,
    /// `phi_family_value` falls inside the fine-grid bracket of the conjugate.
    pub attained: bool,
}

pub fn strong_duality_at(
    inst: &LipInstance,
    spec: &FamilySpec,
    y: &[f64],
    grid: &Grid,
    search: &SearchOptions,
    bounds: &BoundsOptions,
) -> Result<StrongDualityReport> {
    if y.len() != inst.dim() {
        return Err(crate::Error::DimensionMismatch {
            expected: inst.dim(),
            found: y.len(),
        });
    }
    let shifted_c: Vec<f64> = inst.objective().iter().zip(y).map(|(c, y)| c - y).collect();
    let shifted = inst.with_objective(DenseVector::new(shifted_c)?)?;
    let fine = bounds.validation.unwrap_or_else(|| grid.doubled());
    let fine_bounds = primal_bounds(
        &shifted,
        &fine,
        &BoundsOptions {
            validation: Some(fine.doubled()),
            ..bounds.clone()
        },
    )?;
    let conj_estimate = -fine_bounds.lower;
    let phi_family_value = -sup_dual_over_family(&shifted, spec, grid, search)?.value();
    // the conjugate lies in [−upper, −lower] of the fine grid
    let attained = if conj_estimate.is_infinite() || phi_family_value.is_infinite() {
        conj_estimate == phi_family_value
    } else {
        phi_family_value >= -fine_bounds.upper - ATTAIN_TOL && phi_family_value <= conj_estimate + ATTAIN_TOL
    };
    Ok(StrongDualityReport {
        conj_estimate,
        phi_family_value,
        attained,
    })
}
