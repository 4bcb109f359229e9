//! Seeded random instances for the property suites.

use hdual_core::model::{ConstraintFamily, Factor, IndexSet, LipInstance, Poly2};
use hdual_core::model::{evaluate_constraint, sample_index_set, Grid, IndexValue};
use hdual_core::DenseVector;
use rand::Rng;

/// A random standard-form LP with small integer data.
pub fn random_lp<R: Rng>(rng: &mut R) -> (Vec<Vec<f64>>, Vec<f64>, Vec<f64>) {
    let m = rng.gen_range(1..=4);
    let k = rng.gen_range(1..=8);
    let rows: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..k).map(|_| rng.gen_range(-3..=3) as f64).collect())
        .collect();
    let d: Vec<f64> = (0..m).map(|_| rng.gen_range(-5..=5) as f64).collect();
    let g: Vec<f64> = (0..k).map(|_| rng.gen_range(-5..=5) as f64).collect();
    (rows, d, g)
}

/// A random instance together with a grid to sample it on.
///
/// `b(u) ≥ 1/4 > 0` on `[0,1]²`, so `x = 0` is strictly feasible, and `c` is
/// minus a positive combination of sampled `a_t`, so every subproblem that
/// contains those `t` is bounded.
pub fn random_instance<R: Rng>(rng: &mut R) -> (LipInstance, Grid) {
    let n = rng.gen_range(1..=3);
    let (set, grid) = match rng.gen_range(0..4) {
        0 | 1 => (IndexSet::Interval { lo: 0.0, hi: 1.0 }, Grid::new(rng.gen_range(5..=15), 1)),
        2 => (IndexSet::Countable, Grid::new(2, rng.gen_range(4..=12))),
        _ => (
            IndexSet::Product(Factor::Interval { lo: 0.0, hi: 1.0 }, Factor::Countable),
            Grid {
                resolution: [rng.gen_range(3..=6), 1],
                cap: rng.gen_range(2..=4),
            },
        ),
    };
    let uses_u2 = set.is_product();
    let mut a = Vec::with_capacity(n);
    for _ in 0..n {
        let mut p = Poly2::zero();
        for i in 0..=2 {
            p.set(i, 0, rng.gen_range(-2.0..2.0));
        }
        if uses_u2 {
            p.set(0, 1, rng.gen_range(-1.0..1.0));
        }
        a.push(p);
    }
    let b0 = rng.gen_range(0.75..1.5);
    let mut b = Poly2::constant(b0)
        .with(1, 0, rng.gen_range(-0.5..0.5))
        .with(2, 0, rng.gen_range(0.0..1.0));
    if uses_u2 {
        b.set(0, 1, rng.gen_range(0.0..0.5));
    }
    let family = ConstraintFamily::new(a, b).expect("non-empty a");
    let placeholder = DenseVector::new(vec![0.0; n]).unwrap();
    let inst = LipInstance::new(placeholder, set, family).expect("valid instance");

    let sample = sample_index_set(inst.index_set(), &grid).unwrap();
    let mut c = vec![0.0; n];
    for _ in 0..n {
        let t: IndexValue = sample[rng.gen_range(0..sample.len())];
        let w = rng.gen_range(0.5..2.0);
        let (at, _) = evaluate_constraint(&inst, &t).unwrap();
        for (ci, ai) in c.iter_mut().zip(at.iter()) {
            *ci -= w * ai;
        }
    }
    let inst = inst.with_objective(DenseVector::new(c).unwrap()).unwrap();
    (inst, grid)
}

/// A random subset of `items` of size between 1 and `max`.
pub fn random_subset<R: Rng, T: Copy>(rng: &mut R, items: &[T], max: usize) -> Vec<T> {
    let size = rng.gen_range(1..=max.min(items.len()));
    rand::seq::index::sample(rng, items.len(), size)
        .into_iter()
        .map(|i| items[i])
        .collect()
}
