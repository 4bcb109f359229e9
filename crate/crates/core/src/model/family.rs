use alloc::vec::Vec;

use super::index::{IndexSet, IndexSubset, IndexValue};
use crate::{Error, Result};

/// A family `ℋ` of finite index subsets, enumerated over a sampled grid.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilySpec {
    /// `{{t} : t ∈ grid}`
    Singletons,
    /// `{1}, {1,2}, …, {1,…,max}` over a countable set.
    Prefixes { max: usize },
    /// All grid subsets of size `1..=max_card`, size first then lexicographic.
    BoundedSubsets { max_card: usize },
    Explicit(Vec<IndexSubset>),
}

impl FamilySpec {
    /// Prefixes `{g₁}, {g₁,g₂}, …` of an arbitrary ordered sample, as an explicit family.
    pub fn prefixes_of(sample: &[IndexValue]) -> Result<Self> {
        (1..=sample.len())
            .map(|m| IndexSubset::new(sample[..m].to_vec()))
            .collect::<Result<Vec<_>>>()
            .map(FamilySpec::Explicit)
    }

    pub fn is_singletons(&self) -> bool {
        matches!(self, FamilySpec::Singletons)
    }
}

/// Streams the family's subsets in enumeration order, stopping after `budget`.
pub fn enumerate_family<'a>(
    spec: &'a FamilySpec,
    set: &IndexSet,
    sampled: &'a [IndexValue],
    budget: usize,
) -> Result<FamilyIter<'a>> {
    if budget == 0 {
        return Err(Error::Invalid("family budget must be at least 1"));
    }
    let kind = match spec {
        FamilySpec::Singletons => Kind::Singletons { next: 0 },
        FamilySpec::Prefixes { max } => {
            if *set != IndexSet::Countable {
                return Err(Error::SpecSetMismatch);
            }
            Kind::Prefixes {
                len: 0,
                max: (*max).min(sampled.len()),
            }
        }
        FamilySpec::BoundedSubsets { max_card } => {
            if *max_card == 0 {
                return Err(Error::Invalid("subset cardinality bound must be at least 1"));
            }
            Kind::Bounded {
                max_card: (*max_card).min(sampled.len()),
                current: Vec::new(),
            }
        }
        FamilySpec::Explicit(list) => Kind::Explicit { list, next: 0 },
    };
    Ok(FamilyIter {
        sampled,
        kind,
        remaining: budget,
        truncated: false,
    })
}

#[derive(Debug)]
enum Kind<'a> {
    Singletons { next: usize },
    Prefixes { len: usize, max: usize },
    Bounded { max_card: usize, current: Vec<usize> },
    Explicit { list: &'a [IndexSubset], next: usize },
}

#[derive(Debug)]
pub struct FamilyIter<'a> {
    sampled: &'a [IndexValue],
    kind: Kind<'a>,
    remaining: usize,
    truncated: bool,
}

impl FamilyIter<'_> {
    /// `true` once the budget cut the stream short.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    fn advance(&mut self) -> Option<IndexSubset> {
        let sampled = self.sampled;
        match &mut self.kind {
            Kind::Singletons { next } => {
                let v = *sampled.get(*next)?;
                *next += 1;
                Some(IndexSubset::singleton(v))
            }
            Kind::Prefixes { len, max } => {
                if *len >= *max {
                    return None;
                }
                *len += 1;
                Some(IndexSubset::new(sampled[..*len].to_vec()).expect("grid points are distinct"))
            }
            Kind::Bounded { max_card, current } => {
                if !next_combination(current, sampled.len(), *max_card) {
                    return None;
                }
                let values = current.iter().map(|&i| sampled[i]).collect();
                Some(IndexSubset::new(values).expect("grid points are distinct"))
            }
            Kind::Explicit { list, next } => {
                let h = list.get(*next)?.clone();
                *next += 1;
                Some(h)
            }
        }
    }
}

impl Iterator for FamilyIter<'_> {
    type Item = IndexSubset;

    fn next(&mut self) -> Option<IndexSubset> {
        if self.remaining == 0 {
            if !self.truncated && self.advance().is_some() {
                self.truncated = true;
            }
            return None;
        }
        let h = self.advance()?;
        self.remaining -= 1;
        Some(h)
    }
}

/// Steps `current` to the next index combination in size-then-lexicographic
/// order over `0..n`; an empty `current` starts the sequence.
fn next_combination(current: &mut Vec<usize>, n: usize, max_card: usize) -> bool {
    if current.is_empty() {
        if n == 0 || max_card == 0 {
            return false;
        }
        current.push(0);
        return true;
    }
    let k = current.len();
    // rightmost position that can still move
    if let Some(pos) = (0..k).rev().find(|&p| current[p] < n - k + p) {
        current[pos] += 1;
        for p in pos + 1..k {
            current[p] = current[p - 1] + 1;
        }
        return true;
    }
    if k < max_card && k < n {
        current.clear();
        current.extend(0..=k);
        return true;
    }
    false
}
