//! Finite subproblems `(P_H)`, `(D_H)` and the searches built on them.
//!
//! For a finite `H ⊂ T`:
//!
//! ```text
//! (P_H)  inf ⟨c, x⟩          s.t. ⟨a_t, x⟩ ≤ b_t,  t ∈ H
//! (D_H)  sup −Σ μ_t b_t      s.t. μ ∈ ℝ₊^H,  Σ μ_t a_t = −c
//! ```
//!
//! `(D_H)` is already in standard form (`n` equality rows, one column per
//! element of `H`), and the row duals of its optimal basis are `−x` for an
//! optimal `x` of `(P_H)`. `(P_H)` is also solvable directly through the
//! split `x = u − v` with slacks, which gives an independent route.

mod bounds;
mod golden;
mod search;

use alloc::vec;
use alloc::vec::Vec;

pub use bounds::{primal_bounds, strong_duality_at, ATTAIN_TOL, BoundStatus, BoundsOptions, GapReport, StrongDualityReport};
pub use search::{sup_dual_over_family, BestDual, SearchOptions};

pub(crate) use golden::golden_section_by;
pub(crate) use search::{refine_singleton, skip_breakdown};

use crate::linalg::{dot, norm_inf};
use crate::lp::{feasibility, solve_standard_lp, Feasibility, LpOutcome, StandardLp};
use crate::model::{evaluate_subset, IndexSubset, LipInstance};
use crate::{DenseVector, Matrix, Result, ToleranceConfig};

/// A feasible point of `(D_H)`: multipliers over `H` and their dual value.
#[derive(Clone, Debug, PartialEq)]
pub struct DualSolution {
    pub subset: IndexSubset,
    pub mu: Vec<f64>,
    pub value: f64,
}

impl DualSolution {
    /// Re-checks `μ ≥ 0`, `Σ μ_t a_t = −c` (within `1e−7`) and the stored value (within `1e−9`).
    pub fn check(&self, inst: &LipInstance) -> Result<bool> {
        if self.mu.len() != self.subset.len() {
            return Ok(false);
        }
        let (a, b) = evaluate_subset(inst, self.subset.values())?;
        if self.mu.iter().any(|&m| m < 0.0) {
            return Ok(false);
        }
        let mut combo = vec![0.0; inst.dim()];
        for (m, at) in self.mu.iter().zip(&a) {
            for (s, v) in combo.iter_mut().zip(at.iter()) {
                *s += m * v;
            }
        }
        let scale = 1.0 + norm_inf(&self.mu);
        let eq_ok = combo
            .iter()
            .zip(inst.objective().iter())
            .all(|(s, c)| (s + c).abs() <= 1e-7 * scale);
        let value = -dot(&self.mu, &b);
        Ok(eq_ok && (value - self.value).abs() <= 1e-9 * scale)
    }

    /// Restricts `H` to the support of `μ` (keeping one element when `μ = 0`).
    pub fn into_support(self) -> DualSolution {
        let keep: Vec<usize> = (0..self.mu.len()).filter(|&i| self.mu[i] > 0.0).collect();
        let keep = if keep.is_empty() { vec![0] } else { keep };
        let values = keep.iter().map(|&i| self.subset.values()[i]).collect();
        DualSolution {
            subset: IndexSubset::new(values).expect("sub-selection of a valid subset"),
            mu: keep.iter().map(|&i| self.mu[i]).collect(),
            value: self.value,
        }
    }

    /// Number of multipliers above `threshold`.
    pub fn support(&self, threshold: f64) -> usize {
        self.mu.iter().filter(|&&m| m > threshold).count()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PrimalStatus {
    Optimal { x: DenseVector, value: f64 },
    /// Feasible with an improving recession direction.
    Unbounded { ray: DenseVector },
    Infeasible,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DualStatus {
    Optimal(DualSolution),
    Infeasible,
    Unbounded,
}

/// Joint classification of `(P_H)` and `(D_H)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubproblemOutcome {
    pub primal: PrimalStatus,
    pub dual: DualStatus,
}

impl SubproblemOutcome {
    /// `inf (P_H)` with the conventions `−∞` (unbounded) and `+∞` (infeasible).
    pub fn primal_value(&self) -> f64 {
        match &self.primal {
            PrimalStatus::Optimal { value, .. } => *value,
            PrimalStatus::Unbounded { .. } => f64::NEG_INFINITY,
            PrimalStatus::Infeasible => f64::INFINITY,
        }
    }

    /// `sup (D_H)` with the conventions `−∞` (infeasible) and `+∞` (unbounded).
    pub fn dual_value(&self) -> f64 {
        match &self.dual {
            DualStatus::Optimal(d) => d.value,
            DualStatus::Infeasible => f64::NEG_INFINITY,
            DualStatus::Unbounded => f64::INFINITY,
        }
    }

    pub fn dual_solution(&self) -> Option<&DualSolution> {
        match &self.dual {
            DualStatus::Optimal(d) => Some(d),
            _ => None,
        }
    }
}

/// `(D_H)` as `maximize −b·μ s.t. [a_t] μ = rhs, μ ≥ 0`.
fn dual_lp(n: usize, a: &[DenseVector], b: &[f64], rhs: &[f64]) -> Result<StandardLp> {
    let e = Matrix::from_columns(n, a)?;
    StandardLp::new(e, rhs.to_vec(), b.iter().map(|v| -v).collect())
}

/// Is `{x : ⟨a_t, x⟩ ≤ b_t}` empty? Decided by `(0, −1) ∈ cone{(a_t, b_t)}`.
fn system_infeasible(n: usize, a: &[DenseVector], b: &[f64], tol: &ToleranceConfig) -> Result<bool> {
    let cols: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(at, bt)| {
            let mut c = at.to_vec();
            c.push(*bt);
            c
        })
        .collect();
    let e = Matrix::from_columns(n + 1, &cols)?;
    let mut d = vec![0.0; n + 1];
    d[n] = -1.0;
    Ok(matches!(feasibility(&e, &d, tol)?, Feasibility::Feasible { .. }))
}

/// Solves `(D_H)` and classifies `(P_H)` alongside it.
pub fn solve_dual_subproblem(inst: &LipInstance, h: &IndexSubset, tol: &ToleranceConfig) -> Result<SubproblemOutcome> {
    let n = inst.dim();
    let (a, b) = evaluate_subset(inst, h.values())?;
    let rhs: Vec<f64> = inst.objective().iter().map(|c| -c).collect();
    let lp = dual_lp(n, &a, &b, &rhs)?;
    Ok(match solve_standard_lp(&lp, tol)? {
        LpOutcome::Optimal {
            y,
            value,
            row_duals,
        } => {
            let x = DenseVector::new(row_duals.iter().map(|p| -p).collect())?;
            let primal_value = inst.objective().dot(&x);
            SubproblemOutcome {
                primal: PrimalStatus::Optimal { x, value: primal_value },
                dual: DualStatus::Optimal(DualSolution {
                    subset: h.clone(),
                    mu: y,
                    value,
                }),
            }
        }
        LpOutcome::Infeasible { farkas } => {
            if system_infeasible(n, &a, &b, tol)? {
                SubproblemOutcome {
                    primal: PrimalStatus::Infeasible,
                    dual: DualStatus::Infeasible,
                }
            } else {
                // πᵀa_t ≤ 0 and −c·π > 0: π is an improving recession direction.
                let scale = norm_inf(&farkas);
                let ray = DenseVector::new(farkas.iter().map(|v| v / scale).collect())?;
                SubproblemOutcome {
                    primal: PrimalStatus::Unbounded { ray },
                    dual: DualStatus::Infeasible,
                }
            }
        }
        LpOutcome::Unbounded { .. } => SubproblemOutcome {
            primal: PrimalStatus::Infeasible,
            dual: DualStatus::Unbounded,
        },
    })
}

/// `(D_H)` alone, without classifying `(P_H)`.
pub(crate) fn dual_only(inst: &LipInstance, h: &IndexSubset, tol: &ToleranceConfig) -> Result<DualStatus> {
    let (a, b) = evaluate_subset(inst, h.values())?;
    let rhs: Vec<f64> = inst.objective().iter().map(|c| -c).collect();
    let lp = dual_lp(inst.dim(), &a, &b, &rhs)?;
    Ok(match solve_standard_lp(&lp, tol)? {
        LpOutcome::Optimal { y, value, .. } => DualStatus::Optimal(DualSolution {
            subset: h.clone(),
            mu: y,
            value,
        }),
        LpOutcome::Infeasible { .. } => DualStatus::Infeasible,
        LpOutcome::Unbounded { .. } => DualStatus::Unbounded,
    })
}

/// Solves `(P_H)` directly through `x = u − v` and slacks:
/// `maximize −c·u + c·v s.t. a_t·u − a_t·v + s_t = b_t`.
pub fn solve_primal_subproblem(
    inst: &LipInstance,
    h: &IndexSubset,
    tol: &ToleranceConfig,
) -> Result<SubproblemOutcome> {
    let n = inst.dim();
    let m = h.len();
    let (a, b) = evaluate_subset(inst, h.values())?;
    let k = 2 * n + m;
    let mut e = Matrix::zeros(m, k);
    for (t, at) in a.iter().enumerate() {
        for (i, &v) in at.iter().enumerate() {
            e.set(t, i, v);
            e.set(t, n + i, -v);
        }
        e.set(t, 2 * n + t, 1.0);
    }
    let c = inst.objective();
    let mut g = vec![0.0; k];
    for i in 0..n {
        g[i] = -c[i];
        g[n + i] = c[i];
    }
    let lp = StandardLp::new(e, b.clone(), g)?;
    Ok(match solve_standard_lp(&lp, tol)? {
        LpOutcome::Optimal {
            y,
            value,
            row_duals,
        } => {
            let x = DenseVector::new((0..n).map(|i| y[i] - y[n + i]).collect())?;
            let mu: Vec<f64> = row_duals.iter().map(|&p| p.max(0.0)).collect();
            let dual_value = -dot(&mu, &b);
            SubproblemOutcome {
                primal: PrimalStatus::Optimal { x, value: -value },
                dual: DualStatus::Optimal(DualSolution {
                    subset: h.clone(),
                    mu,
                    value: dual_value,
                }),
            }
        }
        LpOutcome::Unbounded { ray } => {
            let dir: Vec<f64> = (0..n).map(|i| ray[i] - ray[n + i]).collect();
            let scale = norm_inf(&dir).max(f64::MIN_POSITIVE);
            SubproblemOutcome {
                primal: PrimalStatus::Unbounded {
                    ray: DenseVector::new(dir.iter().map(|v| v / scale).collect())?,
                },
                dual: DualStatus::Infeasible,
            }
        }
        LpOutcome::Infeasible { .. } => {
            let e = Matrix::from_columns(n, &a)?;
            let rhs: Vec<f64> = c.iter().map(|v| -v).collect();
            let dual = match feasibility(&e, &rhs, tol)? {
                Feasibility::Feasible { .. } => DualStatus::Unbounded,
                Feasibility::Infeasible { .. } => DualStatus::Infeasible,
            };
            SubproblemOutcome {
                primal: PrimalStatus::Infeasible,
                dual,
            }
        }
    })
}

/// `φ_H(y) = inf_{μ ≥ 0} Σ μ_t b_t s.t. Σ μ_t a_t = y − c`; `+∞` when infeasible.
pub fn eval_phi_h(inst: &LipInstance, h: &IndexSubset, y: &[f64], tol: &ToleranceConfig) -> Result<f64> {
    if y.len() != inst.dim() {
        return Err(crate::Error::DimensionMismatch {
            expected: inst.dim(),
            found: y.len(),
        });
    }
    let (a, b) = evaluate_subset(inst, h.values())?;
    let rhs: Vec<f64> = y.iter().zip(inst.objective().iter()).map(|(y, c)| y - c).collect();
    let lp = dual_lp(inst.dim(), &a, &b, &rhs)?;
    Ok(match solve_standard_lp(&lp, tol)? {
        LpOutcome::Optimal { value, .. } => -value,
        LpOutcome::Infeasible { .. } => f64::INFINITY,
        LpOutcome::Unbounded { .. } => f64::NEG_INFINITY,
    })
}
