use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// One factor of a product index set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Factor {
    Interval { lo: f64, hi: f64 },
    /// `k = 1, 2, …`, entering the constraint polynomials as `u = 1/k`.
    Countable,
}

/// The index set `T` of the constraint system.
#[derive(Clone, Debug, PartialEq)]
pub enum IndexSet {
    FiniteList(Vec<f64>),
    Interval { lo: f64, hi: f64 },
    Countable,
    Product(Factor, Factor),
}

/// One coordinate of an index value.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub enum Scalar {
    Real(f64),
    Count(u64),
}

/// A concrete index `t ∈ T`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub enum IndexValue {
    Single(Scalar),
    Pair(Scalar, Scalar),
}

impl IndexValue {
    pub fn real(t: f64) -> Self {
        IndexValue::Single(Scalar::Real(t))
    }

    pub fn count(k: u64) -> Self {
        IndexValue::Single(Scalar::Count(k))
    }

    pub fn pair(a: Scalar, b: Scalar) -> Self {
        IndexValue::Pair(a, b)
    }

    pub fn is_finite(&self) -> bool {
        let ok = |s: &Scalar| !matches!(s, Scalar::Real(t) if !t.is_finite());
        match self {
            IndexValue::Single(a) => ok(a),
            IndexValue::Pair(a, b) => ok(a) && ok(b),
        }
    }

    /// The real coordinate of a single-interval index.
    pub fn as_real(&self) -> Option<f64> {
        match self {
            IndexValue::Single(Scalar::Real(t)) => Some(*t),
            _ => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Real(t) => write!(f, "{t}"),
            Scalar::Count(k) => write!(f, "{k}"),
        }
    }
}

impl fmt::Display for IndexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexValue::Single(s) => write!(f, "{s}"),
            IndexValue::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

impl Factor {
    fn validate(&self) -> Result<()> {
        match *self {
            Factor::Interval { lo, hi } if !(lo.is_finite() && hi.is_finite() && lo < hi) => {
                Err(Error::Invalid("interval needs finite bounds with lo < hi"))
            }
            _ => Ok(()),
        }
    }

    fn param(&self, s: Scalar) -> Option<f64> {
        match (*self, s) {
            (Factor::Interval { lo, hi }, Scalar::Real(t)) if t >= lo && t <= hi => Some(t),
            (Factor::Countable, Scalar::Count(k)) if k >= 1 => Some(1.0 / k as f64),
            _ => None,
        }
    }

    fn sample(&self, resolution: usize, cap: u64) -> Result<Vec<Scalar>> {
        match *self {
            Factor::Interval { lo, hi } => {
                if resolution < 2 {
                    return Err(Error::InvalidResolution);
                }
                let steps = (resolution - 1) as f64;
                Ok((0..resolution)
                    .map(|i| {
                        // exact endpoints, uniform in between
                        let t = if i + 1 == resolution {
                            hi
                        } else {
                            lo + (hi - lo) * (i as f64 / steps)
                        };
                        Scalar::Real(t)
                    })
                    .collect())
            }
            Factor::Countable => {
                if cap < 1 {
                    return Err(Error::InvalidResolution);
                }
                Ok((1..=cap).map(Scalar::Count).collect())
            }
        }
    }
}

impl IndexSet {
    pub fn validate(&self) -> Result<()> {
        match self {
            IndexSet::FiniteList(v) => {
                if v.is_empty() {
                    return Err(Error::Invalid("finite index list is empty"));
                }
                if !v.iter().all(|t| t.is_finite()) {
                    return Err(Error::Invalid("finite index list has non-finite labels"));
                }
                for (i, a) in v.iter().enumerate() {
                    if v[..i].contains(a) {
                        return Err(Error::Invalid("finite index list has duplicates"));
                    }
                }
                Ok(())
            }
            IndexSet::Interval { lo, hi } => Factor::Interval { lo: *lo, hi: *hi }.validate(),
            IndexSet::Countable => Ok(()),
            IndexSet::Product(a, b) => {
                a.validate()?;
                b.validate()
            }
        }
    }

    pub fn is_product(&self) -> bool {
        matches!(self, IndexSet::Product(..))
    }

    pub fn has_countable_factor(&self) -> bool {
        match self {
            IndexSet::Countable => true,
            IndexSet::Product(a, b) => *a == Factor::Countable || *b == Factor::Countable,
            _ => false,
        }
    }

    /// Polynomial parameters `(u₁, u₂)` of an index, or `None` if it lies outside the set.
    pub fn params(&self, idx: &IndexValue) -> Option<(f64, f64)> {
        match (self, idx) {
            (IndexSet::FiniteList(v), IndexValue::Single(Scalar::Real(t))) => {
                v.contains(t).then_some((*t, 0.0))
            }
            (IndexSet::Interval { lo, hi }, IndexValue::Single(s)) => {
                Factor::Interval { lo: *lo, hi: *hi }.param(*s).map(|u| (u, 0.0))
            }
            (IndexSet::Countable, IndexValue::Single(s)) => Factor::Countable.param(*s).map(|u| (u, 0.0)),
            (IndexSet::Product(fa, fb), IndexValue::Pair(a, b)) => Some((fa.param(*a)?, fb.param(*b)?)),
            _ => None,
        }
    }

    pub fn contains(&self, idx: &IndexValue) -> bool {
        self.params(idx).is_some()
    }
}

/// Sampling parameters: points per interval factor and the countable cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grid {
    pub resolution: [usize; 2],
    pub cap: u64,
}

impl Grid {
    pub fn new(resolution: usize, cap: u64) -> Self {
        Self {
            resolution: [resolution, resolution],
            cap,
        }
    }

    /// The validation grid: twice the spacing density (nested, so
    /// `2r − 1` points per interval factor) and twice the cap.
    pub fn doubled(&self) -> Self {
        Self {
            resolution: self.resolution.map(|r| 2 * r.max(1) - 1),
            cap: 2 * self.cap,
        }
    }
}

/// Uniform grids including both endpoints on interval factors, `1..=cap` on
/// countable factors and the cross product (first factor outermost) on products.
pub fn sample_index_set(set: &IndexSet, grid: &Grid) -> Result<Vec<IndexValue>> {
    match set {
        IndexSet::FiniteList(v) => Ok(v.iter().map(|&t| IndexValue::real(t)).collect()),
        IndexSet::Interval { lo, hi } => Ok(Factor::Interval { lo: *lo, hi: *hi }
            .sample(grid.resolution[0], grid.cap)?
            .into_iter()
            .map(IndexValue::Single)
            .collect()),
        IndexSet::Countable => Ok(Factor::Countable
            .sample(grid.resolution[0], grid.cap)?
            .into_iter()
            .map(IndexValue::Single)
            .collect()),
        IndexSet::Product(fa, fb) => {
            let a = fa.sample(grid.resolution[0], grid.cap)?;
            let b = fb.sample(grid.resolution[1], grid.cap)?;
            let mut out = Vec::with_capacity(a.len() * b.len());
            for &x in &a {
                for &y in &b {
                    out.push(IndexValue::Pair(x, y));
                }
            }
            Ok(out)
        }
    }
}

/// A non-empty finite subset `H ⊂ T` without repeated elements.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexSubset(Vec<IndexValue>);

impl IndexSubset {
    pub fn new(values: Vec<IndexValue>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Invalid("index subset is empty"));
        }
        if !values.iter().all(IndexValue::is_finite) {
            return Err(Error::Invalid("index subset has non-finite values"));
        }
        let mut sorted = values.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid("index subset has duplicates"));
        }
        Ok(Self(values))
    }

    /// Like [`IndexSubset::new`] but also checks membership in `set`.
    pub fn within(set: &IndexSet, values: Vec<IndexValue>) -> Result<Self> {
        if values.iter().any(|v| !set.contains(v)) {
            return Err(Error::IndexOutOfRange);
        }
        Self::new(values)
    }

    pub fn singleton(v: IndexValue) -> Self {
        Self(alloc::vec![v])
    }

    pub fn values(&self) -> &[IndexValue] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: &IndexValue) -> bool {
        self.0.contains(v)
    }

    pub fn is_superset_of(&self, other: &[IndexValue]) -> bool {
        other.iter().all(|v| self.contains(v))
    }
}

impl fmt::Display for IndexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn interval_grid_includes_endpoints() {
        let s = sample_index_set(&IndexSet::Interval { lo: 0.0, hi: 1.0 }, &Grid::new(3, 1)).unwrap();
        assert_eq!(s, vec![IndexValue::real(0.0), IndexValue::real(0.5), IndexValue::real(1.0)]);
    }

    #[test]
    fn countable_grid() {
        let s = sample_index_set(&IndexSet::Countable, &Grid::new(2, 3)).unwrap();
        assert_eq!(s, vec![IndexValue::count(1), IndexValue::count(2), IndexValue::count(3)]);
    }

    #[test]
    fn product_grid_is_row_major() {
        let set = IndexSet::Product(Factor::Interval { lo: 0.0, hi: 1.0 }, Factor::Countable);
        let s = sample_index_set(&set, &Grid::new(2, 2)).unwrap();
        let p = |t, k| IndexValue::pair(Scalar::Real(t), Scalar::Count(k));
        assert_eq!(s, vec![p(0.0, 1), p(0.0, 2), p(1.0, 1), p(1.0, 2)]);
    }

    #[test]
    fn resolution_below_two_is_rejected() {
        let set = IndexSet::Interval { lo: 0.0, hi: 1.0 };
        assert_eq!(sample_index_set(&set, &Grid::new(1, 1)), Err(Error::InvalidResolution));
        assert_eq!(sample_index_set(&IndexSet::Countable, &Grid::new(2, 0)), Err(Error::InvalidResolution));
    }

    #[test]
    fn degenerate_interval_is_invalid() {
        assert!(IndexSet::Interval { lo: 1.0, hi: 1.0 }.validate().is_err());
        assert!(IndexSet::Product(Factor::Countable, Factor::Interval { lo: 2.0, hi: 1.0 })
            .validate()
            .is_err());
    }

    #[test]
    fn membership_and_params() {
        let set = IndexSet::Product(Factor::Interval { lo: 0.0, hi: 1.0 }, Factor::Countable);
        assert_eq!(set.params(&IndexValue::pair(Scalar::Real(0.5), Scalar::Count(4))), Some((0.5, 0.25)));
        assert_eq!(set.params(&IndexValue::pair(Scalar::Real(1.5), Scalar::Count(4))), None);
        assert_eq!(set.params(&IndexValue::pair(Scalar::Real(0.5), Scalar::Count(0))), None);
        assert_eq!(set.params(&IndexValue::real(0.5)), None);
        assert!(IndexSet::FiniteList(vec![0.1, 0.2]).contains(&IndexValue::real(0.2)));
    }

    #[test]
    fn subsets_reject_duplicates() {
        assert!(IndexSubset::new(vec![IndexValue::count(1), IndexValue::count(1)]).is_err());
        assert!(IndexSubset::new(vec![]).is_err());
        let h = IndexSubset::new(vec![IndexValue::count(1), IndexValue::count(3)]).unwrap();
        assert!(h.is_superset_of(&[IndexValue::count(3)]));
        assert_eq!(alloc::format!("{h}"), "{1, 3}");
    }

    #[test]
    fn doubled_grid_is_nested() {
        let g = Grid::new(1001, 50).doubled();
        assert_eq!(g.resolution, [2001, 2001]);
        assert_eq!(g.cap, 100);
    }
}
