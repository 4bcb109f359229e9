//! Finite certificates: cone membership, `ℋ`-reducibility and the
//! four-statement chain.
//!
//! `𝒦_H = cone{(a_t, b_t) : t ∈ H} + {0}×ℝ₊`. The program is
//! `ℋ`-reducible at value `α` when `−(c, α) ∈ 𝒦_H` for some `H ∈ ℋ`; the
//! multipliers of that membership are the certificate.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::Rng;

use crate::duality::{
    primal_bounds, refine_singleton, skip_breakdown, solve_dual_subproblem, solve_primal_subproblem, sup_dual_over_family,
    BoundStatus, BoundsOptions, GapReport, SearchOptions,
};
use crate::lp::{feasibility, Feasibility};
use crate::model::{
    enumerate_family, evaluate_constraint, evaluate_subset, sample_index_set, FamilySpec, Grid, IndexSet,
    IndexSubset, IndexValue, LipInstance,
};
use crate::{Error, Matrix, Result, ToleranceConfig};

/// `𝒦_H` for one instance and one finite `H`.
#[derive(Clone, Debug)]
pub struct ConeSpec<'a> {
    inst: &'a LipInstance,
    subset: IndexSubset,
}

impl<'a> ConeSpec<'a> {
    pub fn new(inst: &'a LipInstance, subset: IndexSubset) -> Result<Self> {
        if subset.values().iter().any(|v| !inst.index_set().contains(v)) {
            return Err(Error::IndexOutOfRange);
        }
        Ok(Self { inst, subset })
    }

    pub fn subset(&self) -> &IndexSubset {
        &self.subset
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Membership {
    /// `Σ μ_t (a_t, b_t) + (0, s) = (y, β)`.
    Member { mu: Vec<f64>, s: f64 },
    /// `π` with `πᵀ(a_t, b_t) ≤ 0`, `π_{n+1} ≤ 0` and `π·(y, β) > 0`.
    NotMember { farkas: Vec<f64> },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }
}

fn generator_columns(a: &[crate::DenseVector], b: &[f64], vertical: bool) -> Vec<Vec<f64>> {
    let n = a.first().map_or(0, |v| v.len());
    let mut cols: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(at, bt)| {
            let mut c = at.to_vec();
            c.push(*bt);
            c
        })
        .collect();
    if vertical {
        let mut up = vec![0.0; n + 1];
        up[n] = 1.0;
        cols.push(up);
    }
    cols
}

fn check_point(inst: &LipInstance, y: &[f64], beta: f64) -> Result<()> {
    if y.len() != inst.dim() {
        return Err(Error::DimensionMismatch {
            expected: inst.dim(),
            found: y.len(),
        });
    }
    if !beta.is_finite() || y.iter().any(|v| !v.is_finite()) {
        return Err(Error::Invalid("cone test point must be finite"));
    }
    Ok(())
}

/// Is `(y, β) ∈ 𝒦_H`?
pub fn cone_membership(spec: &ConeSpec<'_>, y: &[f64], beta: f64, tol: &ToleranceConfig) -> Result<Membership> {
    check_point(spec.inst, y, beta)?;
    let n = spec.inst.dim();
    let (a, b) = evaluate_subset(spec.inst, spec.subset.values())?;
    let e = Matrix::from_columns(n + 1, &generator_columns(&a, &b, true))?;
    let mut d = y.to_vec();
    d.push(beta);
    Ok(match feasibility(&e, &d, tol)? {
        Feasibility::Feasible { y: mut z } => {
            let s = z.pop().unwrap_or(0.0);
            Membership::Member { mu: z, s }
        }
        Feasibility::Infeasible { farkas } => Membership::NotMember { farkas },
    })
}

/// Membership in the characteristic cone `cone{(a_t, b_t) : t ∈ H}`;
/// `include_vertical` tests the union with `{0}×ℝ₊` instead.
///
/// For a point with `y ≠ 0` the vertical ray cannot matter, so both
/// variants agree there.
pub fn characteristic_cone_membership(
    inst: &LipInstance,
    h: &IndexSubset,
    y: &[f64],
    beta: f64,
    include_vertical: bool,
    tol: &ToleranceConfig,
) -> Result<Membership> {
    check_point(inst, y, beta)?;
    if h.values().iter().any(|v| !inst.index_set().contains(v)) {
        return Err(Error::IndexOutOfRange);
    }
    if include_vertical && y.iter().all(|&v| v == 0.0) && beta >= 0.0 {
        return Ok(Membership::Member {
            mu: vec![0.0; h.len()],
            s: beta,
        });
    }
    let n = inst.dim();
    let (a, b) = evaluate_subset(inst, h.values())?;
    let e = Matrix::from_columns(n + 1, &generator_columns(&a, &b, false))?;
    let mut d = y.to_vec();
    d.push(beta);
    Ok(match feasibility(&e, &d, tol)? {
        Feasibility::Feasible { y } => Membership::Member { mu: y, s: 0.0 },
        Feasibility::Infeasible { farkas } => Membership::NotMember { farkas },
    })
}

/// `−(c, α) ∈ 𝒦_H` witnessed by `Σ μ_t a_t = −c`, `Σ μ_t b_t + s = −α`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducibilityCertificate {
    pub subset: IndexSubset,
    pub mu: Vec<f64>,
    pub s: f64,
    pub alpha: f64,
}

/// Why [`ReducibilityCertificate::verify`] rejected a certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateError {
    WrongLength,
    NegativeMultiplier,
    NegativeSlack,
    /// `Σ μ_t a_t ≠ −c`.
    Combination,
    /// `Σ μ_t b_t + s ≠ −α`.
    Value,
    NonFinite,
}

impl ReducibilityCertificate {
    /// Re-checks the certificate from scratch, evaluating each `(a_t, b_t)`
    /// individually; residuals must stay within `1e−7`.
    pub fn verify(&self, inst: &LipInstance) -> Result<core::result::Result<(), CertificateError>> {
        if self.mu.len() != self.subset.len() {
            return Ok(Err(CertificateError::WrongLength));
        }
        if !self.alpha.is_finite() || !self.s.is_finite() || self.mu.iter().any(|m| !m.is_finite()) {
            return Ok(Err(CertificateError::NonFinite));
        }
        if self.mu.iter().any(|&m| m < 0.0) {
            return Ok(Err(CertificateError::NegativeMultiplier));
        }
        if self.s < 0.0 {
            return Ok(Err(CertificateError::NegativeSlack));
        }
        let mut combo = vec![0.0; inst.dim()];
        let mut value = self.s;
        for (idx, &m) in self.subset.values().iter().zip(&self.mu) {
            let (a, b) = evaluate_constraint(inst, idx)?;
            for (acc, ai) in combo.iter_mut().zip(a.iter()) {
                *acc += m * ai;
            }
            value += m * b;
        }
        if combo.iter().zip(inst.objective().iter()).any(|(s, c)| (s + c).abs() > 1e-7) {
            return Ok(Err(CertificateError::Combination));
        }
        if (value + self.alpha).abs() > 1e-7 {
            return Ok(Err(CertificateError::Value));
        }
        Ok(Ok(()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertifyOptions {
    pub budget: usize,
    /// After an unsuccessful scan of singletons on an interval, also try the
    /// refined best singleton.
    pub refine: bool,
    pub tol: ToleranceConfig,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            budget: 1_000_000,
            refine: true,
            tol: ToleranceConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CertifyOutcome {
    Found(ReducibilityCertificate),
    /// No scanned subset works; this is not a proof of non-reducibility.
    NotFoundWithinBudget { examined: usize, exhausted: bool },
}

fn try_subset(
    inst: &LipInstance,
    h: IndexSubset,
    alpha: f64,
    tol: &ToleranceConfig,
) -> Result<Option<ReducibilityCertificate>> {
    let y: Vec<f64> = inst.objective().iter().map(|c| -c).collect();
    let spec = ConeSpec { inst, subset: h };
    Ok(match cone_membership(&spec, &y, -alpha, tol)? {
        Membership::Member { mu, s } => Some(ReducibilityCertificate {
            subset: spec.subset,
            mu,
            s,
            alpha,
        }),
        Membership::NotMember { .. } => None,
    })
}

/// First subset of the family (in enumeration order) whose cone contains `−(c, α)`.
pub fn certify_reducibility(
    inst: &LipInstance,
    spec: &FamilySpec,
    alpha: f64,
    grid: &Grid,
    opts: &CertifyOptions,
) -> Result<CertifyOutcome> {
    if !alpha.is_finite() {
        return Err(Error::BoundednessRequired);
    }
    let sampled = sample_index_set(inst.index_set(), grid)?;
    let mut iter = enumerate_family(spec, inst.index_set(), &sampled, opts.budget)?;
    let mut examined = 0;
    for h in iter.by_ref() {
        examined += 1;
        if let Some(Some(cert)) = skip_breakdown(try_subset(inst, h, alpha, &opts.tol))? {
            return Ok(CertifyOutcome::Found(cert));
        }
    }
    if examined == 0 {
        return Err(Error::EmptyFamily);
    }
    if opts.refine && spec.is_singletons() {
        if let Some(d) = refine_singleton(inst, &sampled, &opts.tol)? {
            examined += 1;
            if let Some(Some(cert)) = skip_breakdown(try_subset(inst, d.subset, alpha, &opts.tol))? {
                return Ok(CertifyOutcome::Found(cert));
            }
        }
    }
    Ok(CertifyOutcome::NotFoundWithinBudget {
        examined,
        exhausted: !iter.truncated(),
    })
}

/// Outcome of one chain statement at grid scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StatementStatus {
    HoldsOnGrid,
    FailsOnGrid,
    Undecided,
}

impl StatementStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            StatementStatus::HoldsOnGrid => "holds_on_grid",
            StatementStatus::FailsOnGrid => "fails_on_grid",
            StatementStatus::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainOptions {
    /// Statements are decided only when `inf(P)` is bracketed this tightly.
    pub decision_tol: f64,
    pub search: SearchOptions,
    pub bounds: BoundsOptions,
}

impl Default for ChainOptions {
    fn default() -> Self {
        Self {
            decision_tol: 1e-5,
            search: SearchOptions {
                refine: true,
                ..SearchOptions::default()
            },
            bounds: BoundsOptions::default(),
        }
    }
}

/// Grid-scale evidence for (i) cone membership, (ii) `ℋ`-strong duality,
/// (iii) dual `ℋ`-reducibility with zero gap and (iv) primal `ℋ`-reducibility.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainReport {
    pub cone_membership: StatementStatus,
    pub strong_duality: StatementStatus,
    pub dual_reducible_zero_gap: StatementStatus,
    pub primal_reducible: StatementStatus,
    /// `inf(P) = sup(D_ℋ)` at grid scale.
    pub zero_gap: StatementStatus,
    /// The zero-gap verdict came from the trend between two grids.
    pub zero_gap_from_trend: bool,
    /// Some subproblem on the grid was unbounded below.
    pub unbounded: bool,
    pub bounds: GapReport,
    /// `max(lower, full-grid dual on the validation grid)`.
    pub bracket_lower: f64,
    pub alpha: f64,
    pub best_dual_value: f64,
    pub decision_tol: f64,
}

impl ChainReport {
    pub fn statements(&self) -> [StatementStatus; 4] {
        [
            self.cone_membership,
            self.strong_duality,
            self.dual_reducible_zero_gap,
            self.primal_reducible,
        ]
    }

    /// No statement holds while a statement it implies fails.
    pub fn is_consistent(&self) -> bool {
        self.statements()
            .windows(2)
            .all(|w| !(w[0] == StatementStatus::HoldsOnGrid && w[1] == StatementStatus::FailsOnGrid))
    }
}

fn decide(holds: bool, decided: bool) -> StatementStatus {
    if holds {
        StatementStatus::HoldsOnGrid
    } else if decided {
        StatementStatus::FailsOnGrid
    } else {
        StatementStatus::Undecided
    }
}

pub fn theorem_chain_report(
    inst: &LipInstance,
    spec: &FamilySpec,
    grid: &Grid,
    opts: &ChainOptions,
) -> Result<ChainReport> {
    let tol = opts.decision_tol;
    let bounds = primal_bounds(inst, grid, &opts.bounds)?;
    let best = sup_dual_over_family(inst, spec, grid, &opts.search)?;
    let undecided = |bounds: GapReport, unbounded: bool| ChainReport {
        cone_membership: StatementStatus::Undecided,
        strong_duality: StatementStatus::Undecided,
        dual_reducible_zero_gap: StatementStatus::Undecided,
        primal_reducible: StatementStatus::Undecided,
        zero_gap: StatementStatus::Undecided,
        zero_gap_from_trend: false,
        unbounded,
        bracket_lower: bounds.lower,
        alpha: bounds.upper,
        best_dual_value: best.value(),
        decision_tol: tol,
        bounds,
    };
    if bounds.status != BoundStatus::Bounded {
        let unbounded = bounds.status == BoundStatus::Unbounded;
        return Ok(undecided(bounds, unbounded));
    }

    let alpha = bounds.upper;
    let fine = sample_index_set(inst.index_set(), &bounds.validation)?;
    let lower_fine = solve_dual_subproblem(inst, &IndexSubset::new(fine)?, &opts.bounds.tol)?.dual_value();
    let bracket_lower = bounds.lower.max(lower_fine);
    let decided = alpha - bracket_lower <= tol;

    let certify_opts = CertifyOptions {
        budget: opts.search.budget,
        refine: opts.search.refine,
        tol: opts.search.tol,
    };
    let found = matches!(
        certify_reducibility(inst, spec, alpha - tol, grid, &certify_opts)?,
        CertifyOutcome::Found(_)
    );
    let best_value = best.value();
    let strong = best_value >= alpha - tol - 1e-8;

    let (zero_gap_holds, from_trend) = if alpha - best_value <= tol {
        (true, false)
    } else {
        let g2 = grid.doubled();
        let b2 = primal_bounds(inst, &g2, &opts.bounds)?;
        let best2 = sup_dual_over_family(inst, spec, &g2, &opts.search)?.value();
        let (gap1, gap2) = (alpha - best_value, b2.upper - best2);
        (gap1.is_finite() && gap2.is_finite() && gap2 <= 0.75 * gap1, true)
    };
    let zero_gap = decide(zero_gap_holds, decided && !from_trend);

    // (iv): the best dual's subset first, then the family in order
    let mut primal_ok = false;
    let sampled = sample_index_set(inst.index_set(), grid)?;
    let mut candidates: Vec<IndexSubset> = best.best.iter().map(|d| d.subset.clone()).collect();
    candidates.extend(enumerate_family(spec, inst.index_set(), &sampled, opts.search.budget)?);
    for h in candidates {
        let Some(out) = skip_breakdown(solve_primal_subproblem(inst, &h, &opts.search.tol))? else {
            continue;
        };
        if out.primal_value() >= alpha - tol - 1e-7 {
            primal_ok = true;
            break;
        }
    }

    Ok(ChainReport {
        cone_membership: decide(found, decided),
        strong_duality: decide(strong, decided),
        dual_reducible_zero_gap: decide(strong && zero_gap_holds, decided),
        primal_reducible: decide(primal_ok, decided),
        zero_gap,
        zero_gap_from_trend: from_trend,
        unbounded: false,
        bracket_lower,
        alpha,
        best_dual_value: best_value,
        decision_tol: tol,
        bounds,
    })
}

/// Fraction of random finite `K` that some enumerated family member contains.
#[derive(Clone, Debug, PartialEq)]
pub struct CoveringReport {
    pub trials: usize,
    pub covered: usize,
}

impl CoveringReport {
    pub fn fraction(&self) -> f64 {
        self.covered as f64 / self.trials as f64
    }
}

/// Size range and budget for [`directed_covering_probe`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoveringProbe {
    pub trials: usize,
    pub min_card: usize,
    pub max_card: usize,
    pub budget: usize,
}

/// Draws `K ⊂ sampled` with `|K|` uniform in the size range and searches the
/// truncated family for a superset of each.
pub fn directed_covering_probe<R: Rng + ?Sized>(
    spec: &FamilySpec,
    set: &IndexSet,
    sampled: &[IndexValue],
    probe: &CoveringProbe,
    rng: &mut R,
) -> Result<CoveringReport> {
    if probe.trials == 0 {
        return Err(Error::Invalid("covering probe needs at least one trial"));
    }
    let hi = probe.max_card.min(sampled.len());
    let lo = probe.min_card.max(1);
    if sampled.is_empty() || lo > hi {
        return Err(Error::Invalid("covering probe size range is empty"));
    }
    let members: Vec<IndexSubset> = enumerate_family(spec, set, sampled, probe.budget)?.collect();
    let mut covered = 0;
    for _ in 0..probe.trials {
        let size = rng.gen_range(lo..=hi);
        let k: Vec<IndexValue> = sample(rng, sampled.len(), size).into_iter().map(|i| sampled[i]).collect();
        if members.iter().any(|h| h.is_superset_of(&k)) {
            covered += 1;
        }
    }
    Ok(CoveringReport {
        trials: probe.trials,
        covered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::builtin_instance;
    use rand::SeedableRng;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn membership_at_midpoint() {
        let inst = builtin_instance("ex41", &[1.0, 1.0]).unwrap();
        let spec = ConeSpec::new(&inst, IndexSubset::singleton(IndexValue::real(0.5))).unwrap();
        let Membership::Member { mu, s } = cone_membership(&spec, &[-1.0, -1.0], -0.5, &tol()).unwrap() else {
            panic!()
        };
        assert!((mu[0] - 2.0).abs() < 1e-12);
        assert!(s.abs() < 1e-12);
        let m = cone_membership(&spec, &[0.0, 0.0], 1.0, &tol()).unwrap();
        assert_eq!(m, Membership::Member { mu: vec![0.0], s: 1.0 });
    }

    #[test]
    fn ex42_singletons_not_member() {
        let inst = builtin_instance("ex42", &[1.0, 1.0]).unwrap();
        for r in [1u64, 5, 50] {
            let h = IndexSubset::singleton(IndexValue::pair(
                crate::model::Scalar::Real(0.5),
                crate::model::Scalar::Count(r),
            ));
            let spec = ConeSpec::new(&inst, h).unwrap();
            assert!(!cone_membership(&spec, &[-1.0, -1.0], -0.5, &tol()).unwrap().is_member());
        }
    }

    #[test]
    fn certify_ex41_and_ex42() {
        let inst = builtin_instance("ex41", &[1.0, 1.0]).unwrap();
        let out = certify_reducibility(&inst, &FamilySpec::Singletons, 0.5, &Grid::new(101, 1), &CertifyOptions::default())
            .unwrap();
        let CertifyOutcome::Found(cert) = out else { panic!("{out:?}") };
        assert_eq!(cert.subset.values(), &[IndexValue::real(0.5)]);
        assert_eq!(cert.verify(&inst).unwrap(), Ok(()));

        let inst = builtin_instance("ex42", &[1.0, 1.0]).unwrap();
        let out = certify_reducibility(&inst, &FamilySpec::Singletons, 0.5, &Grid::new(21, 10), &CertifyOptions::default())
            .unwrap();
        assert!(matches!(out, CertifyOutcome::NotFoundWithinBudget { .. }));
        assert_eq!(
            certify_reducibility(&inst, &FamilySpec::Singletons, f64::INFINITY, &Grid::new(21, 10), &CertifyOptions::default()),
            Err(Error::BoundednessRequired)
        );
    }

    #[test]
    fn corrupted_certificate_fails() {
        let inst = builtin_instance("ex41", &[1.0, 1.0]).unwrap();
        let cert = ReducibilityCertificate {
            subset: IndexSubset::singleton(IndexValue::real(0.5)),
            mu: vec![2.5],
            s: 0.0,
            alpha: 0.5,
        };
        assert_eq!(cert.verify(&inst).unwrap(), Err(CertificateError::Combination));
    }

    #[test]
    fn vertical_variant() {
        let inst = builtin_instance("ex41", &[1.0, 1.0]).unwrap();
        let h = IndexSubset::singleton(IndexValue::real(0.25));
        assert!(characteristic_cone_membership(&inst, &h, &[0.0, 0.0], 2.0, true, &tol())
            .unwrap()
            .is_member());
        assert!(!characteristic_cone_membership(&inst, &h, &[0.0, 0.0], 2.0, false, &tol())
            .unwrap()
            .is_member());
        assert!(!characteristic_cone_membership(&inst, &h, &[0.0, 0.0], -1.0, true, &tol())
            .unwrap()
            .is_member());
    }

    #[test]
    fn chain_ex41() {
        let inst = builtin_instance("ex41", &[1.0, 1.0]).unwrap();
        let r = theorem_chain_report(&inst, &FamilySpec::Singletons, &Grid::new(1001, 1), &ChainOptions::default())
            .unwrap();
        assert_eq!(r.statements(), [StatementStatus::HoldsOnGrid; 4], "{r:?}");
    }

    #[test]
    fn chain_ex42() {
        let inst = builtin_instance("ex42", &[1.0, 1.0]).unwrap();
        let r = theorem_chain_report(&inst, &FamilySpec::Singletons, &Grid { resolution: [1001, 1], cap: 20 }, &ChainOptions::default())
            .unwrap();
        assert_eq!(r.cone_membership, StatementStatus::FailsOnGrid, "{r:?}");
        assert_eq!(r.strong_duality, StatementStatus::FailsOnGrid);
        assert_eq!(r.primal_reducible, StatementStatus::FailsOnGrid);
        assert_eq!(r.zero_gap, StatementStatus::HoldsOnGrid);
        assert!(r.is_consistent());
    }

    #[test]
    fn chain_unbounded() {
        let inst = builtin_instance("ex41", &[1.0, -1.0]).unwrap();
        let r = theorem_chain_report(&inst, &FamilySpec::Singletons, &Grid::new(51, 1), &ChainOptions::default())
            .unwrap();
        assert!(r.unbounded);
        assert_eq!(r.statements(), [StatementStatus::Undecided; 4]);
    }

    #[test]
    fn covering_probe_examples() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let s: Vec<_> = (1..=10).map(IndexValue::count).collect();
        let probe = CoveringProbe {
            trials: 50,
            min_card: 1,
            max_card: 10,
            budget: 100,
        };
        let r = directed_covering_probe(&FamilySpec::Prefixes { max: 10 }, &IndexSet::Countable, &s, &probe, &mut rng)
            .unwrap();
        assert_eq!(r.fraction(), 1.0);
        let probe = CoveringProbe { min_card: 2, ..probe };
        let r = directed_covering_probe(&FamilySpec::Singletons, &IndexSet::Countable, &s, &probe, &mut rng).unwrap();
        assert_eq!(r.fraction(), 0.0);
    }
}
