use alloc::vec;

use super::{ConstraintFamily, Factor, IndexSet, LipInstance, Poly2};
use crate::{DenseVector, Error, Result};

pub const BUILTIN_NAMES: [&str; 4] = ["ex41", "ex42", "countable_gap", "countable_reducible"];

/// The shipped example instances, with `objective` as `c`.
///
/// * `ex41`: `−t x₁ + (t−1) x₂ + t − t² ≤ 0`, `t ∈ [0,1]`.
/// * `ex42`: `−t x₁ + (t−1) x₂ − t² + t − 1/r ≤ 0`, `(t,r) ∈ [0,1] × ℕ`.
/// * `countable_gap`: `x ≥ 1 − 1/k`, `k ∈ ℕ` (`n = 1`).
/// * `countable_reducible`: `x ≥ 1 − 1/k + 1/k²`, so the first constraint is
///   already `x ≥ 1` and the rest stay below it.
pub fn builtin_instance(name: &str, objective: &[f64]) -> Result<LipInstance> {
    let (set, family) = match name {
        "ex41" => (
            IndexSet::Interval { lo: 0.0, hi: 1.0 },
            ConstraintFamily::new(
                vec![Poly2::zero().with(1, 0, -1.0), Poly2::constant(-1.0).with(1, 0, 1.0)],
                Poly2::zero().with(2, 0, 1.0).with(1, 0, -1.0),
            )?,
        ),
        "ex42" => (
            IndexSet::Product(Factor::Interval { lo: 0.0, hi: 1.0 }, Factor::Countable),
            ConstraintFamily::new(
                vec![Poly2::zero().with(1, 0, -1.0), Poly2::constant(-1.0).with(1, 0, 1.0)],
                Poly2::zero().with(2, 0, 1.0).with(1, 0, -1.0).with(0, 1, 1.0),
            )?,
        ),
        "countable_gap" => (
            IndexSet::Countable,
            ConstraintFamily::new(vec![Poly2::constant(-1.0)], Poly2::constant(-1.0).with(1, 0, 1.0))?,
        ),
        "countable_reducible" => (
            IndexSet::Countable,
            ConstraintFamily::new(
                vec![Poly2::constant(-1.0)],
                Poly2::constant(-1.0).with(1, 0, 1.0).with(2, 0, -1.0),
            )?,
        ),
        _ => return Err(Error::UnknownName),
    };
    LipInstance::new(DenseVector::new(objective.to_vec())?, set, family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{evaluate_constraint, IndexValue};

    #[test]
    fn countable_gap_coefficients() {
        let inst = builtin_instance("countable_gap", &[1.0]).unwrap();
        for k in 1..20u64 {
            let (a, b) = evaluate_constraint(&inst, &IndexValue::count(k)).unwrap();
            assert_eq!(&a[..], &[-1.0]);
            assert!((b - (-1.0 + 1.0 / k as f64)).abs() < 1e-15);
        }
    }

    #[test]
    fn countable_reducible_first_constraint() {
        let inst = builtin_instance("countable_reducible", &[1.0]).unwrap();
        let (_, b1) = evaluate_constraint(&inst, &IndexValue::count(1)).unwrap();
        assert_eq!(b1, -1.0);
        for k in 2..50u64 {
            let (_, b) = evaluate_constraint(&inst, &IndexValue::count(k)).unwrap();
            assert!(b > -1.0);
        }
    }

    #[test]
    fn unknown_name() {
        assert_eq!(builtin_instance("ex99", &[1.0]), Err(Error::UnknownName));
    }

    #[test]
    fn objective_dimension_checked() {
        assert!(matches!(
            builtin_instance("ex41", &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
