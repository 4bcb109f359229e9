//! Linear infinite programs `inf ⟨c, x⟩ s.t. ⟨a_t, x⟩ ≤ b_t, t ∈ T`.
//!
//! Constraint coefficients are polynomials in the index parameters
//! `(u₁, u₂)`: an interval or listed coordinate enters as `u = t`, a
//! countable coordinate `k` as `u = 1/k`.

mod builtin;
mod family;
mod index;
mod poly;

use alloc::vec::Vec;

pub use builtin::{builtin_instance, BUILTIN_NAMES};
pub use family::{enumerate_family, FamilyIter, FamilySpec};
pub use index::{sample_index_set, Factor, Grid, IndexSet, IndexSubset, IndexValue, Scalar};
pub use poly::{Poly2, MAX_DEGREE};

use crate::{DenseVector, Error, Result};

/// `t ↦ (a_t, b_t)` as one polynomial per coordinate of `a` plus one for `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintFamily {
    a: Vec<Poly2>,
    b: Poly2,
}

impl ConstraintFamily {
    pub fn new(a: Vec<Poly2>, b: Poly2) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::Invalid("constraint family needs dimension at least 1"));
        }
        if !a.iter().chain(core::iter::once(&b)).all(Poly2::is_finite) {
            return Err(Error::Invalid("polynomial coefficients must be finite"));
        }
        Ok(Self { a, b })
    }

    pub fn dimension(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[Poly2] {
        &self.a
    }

    pub fn b(&self) -> &Poly2 {
        &self.b
    }
}

/// `inf ⟨c, x⟩ s.t. ⟨a_t, x⟩ ≤ b_t, t ∈ T` over `x ∈ ℝⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct LipInstance {
    c: DenseVector,
    index_set: IndexSet,
    family: ConstraintFamily,
}

impl LipInstance {
    pub fn new(c: DenseVector, index_set: IndexSet, family: ConstraintFamily) -> Result<Self> {
        if family.dimension() != c.len() {
            return Err(Error::DimensionMismatch {
                expected: c.len(),
                found: family.dimension(),
            });
        }
        index_set.validate()?;
        if !index_set.is_product()
            && family
                .a
                .iter()
                .chain(core::iter::once(&family.b))
                .any(Poly2::uses_second_parameter)
        {
            return Err(Error::Invalid("second index parameter used on a single-factor set"));
        }
        Ok(Self { c, index_set, family })
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn objective(&self) -> &DenseVector {
        &self.c
    }

    pub fn index_set(&self) -> &IndexSet {
        &self.index_set
    }

    pub fn family(&self) -> &ConstraintFamily {
        &self.family
    }

    /// Same constraints, different objective.
    pub fn with_objective(&self, c: DenseVector) -> Result<Self> {
        if c.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: c.len(),
            });
        }
        Ok(Self {
            c,
            index_set: self.index_set.clone(),
            family: self.family.clone(),
        })
    }
}

/// `(a_t, b_t)` for one index value.
pub fn evaluate_constraint(inst: &LipInstance, idx: &IndexValue) -> Result<(DenseVector, f64)> {
    let (u1, u2) = inst.index_set.params(idx).ok_or(Error::IndexOutOfRange)?;
    let a: Vec<f64> = inst.family.a.iter().map(|p| p.eval(u1, u2)).collect();
    let b = inst.family.b.eval(u1, u2);
    if !b.is_finite() {
        return Err(Error::Invalid("constraint evaluates to a non-finite value"));
    }
    Ok((DenseVector::new(a)?, b))
}

/// Evaluates every element of `h`; used by all subproblem builders.
pub(crate) fn evaluate_subset(inst: &LipInstance, h: &[IndexValue]) -> Result<(Vec<DenseVector>, Vec<f64>)> {
    let mut a = Vec::with_capacity(h.len());
    let mut b = Vec::with_capacity(h.len());
    for idx in h {
        let (ai, bi) = evaluate_constraint(inst, idx)?;
        a.push(ai);
        b.push(bi);
    }
    Ok((a, b))
}
