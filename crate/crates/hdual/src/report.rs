//! Human-readable and CSV renderings of library results.
//!
//! Every CSV table has a header row, `.` decimals and LF line endings.
//! Reals use the shortest representation that reads back to the same
//! `f64`; infinities print as `inf` / `-inf`. Vector-valued cells join
//! their coordinates with single spaces.

use std::fmt::Write as _;

use hdual_core::certify::{ChainReport, CertifyOutcome, CoveringReport};
use hdual_core::countable::{LimitReport, PrefixTrace};
use hdual_core::duality::{BestDual, BoundStatus, GapReport, StrongDualityReport};
use hdual_core::model::Grid;

use crate::format::serialize_certificate;

pub const SOLVE_COLUMNS: &[&str] = &[
    "lower",
    "upper",
    "gap",
    "status",
    "resolution",
    "cap",
    "validation_resolution",
    "validation_cap",
    "witness",
];
pub const DUAL_COLUMNS: &[&str] = &["value", "index", "mu", "refined", "family_exhausted", "subsets_examined"];
pub const CERTIFY_COLUMNS: &[&str] = &["status", "alpha", "index", "mu", "s", "subsets_examined"];
pub const CHAIN_COLUMNS: &[&str] = &["statement", "status", "alpha", "bracket_lower", "best_dual", "decision_tol", "unbounded"];
pub const PREFIX_COLUMNS: &[&str] = &["m", "primal", "dual", "gap"];
pub const SWEEP_COLUMNS: &[&str] = &["y", "conj_estimate", "phi_family_value", "attained"];
pub const PROBE_COLUMNS: &[&str] = &["trials", "covered", "fraction"];

/// Column lists shown in `--help`.
pub fn schema_help() -> String {
    let mut s = String::from("CSV columns (--format csv), in order:\n");
    for (cmd, cols) in [
        ("solve", SOLVE_COLUMNS),
        ("dual", DUAL_COLUMNS),
        ("certify", CERTIFY_COLUMNS),
        ("chain", CHAIN_COLUMNS),
        ("prefix", PREFIX_COLUMNS),
        ("sweep", SWEEP_COLUMNS),
        ("probe", PROBE_COLUMNS),
    ] {
        writeln!(s, "  {cmd:<8} {}", cols.join(",")).unwrap();
    }
    s.push_str("Exit codes: 0 success, 1 usage error, 2 parse error, 3 numerical failure, 4 certificate invalid or not found.");
    s
}

fn csv_table(columns: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(columns).expect("writing to memory");
    for r in rows {
        w.write_record(r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is UTF-8")
}

/// Shortest round-trip form, with `-0` printed as `0`.
fn num(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else {
        v.to_string()
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(|&x| num(x)).collect::<Vec<_>>().join(" ")
}

fn status_name(s: BoundStatus) -> &'static str {
    match s {
        BoundStatus::Bounded => "bounded",
        BoundStatus::Unbounded => "unbounded",
        BoundStatus::Infeasible => "infeasible",
        BoundStatus::Unresolved => "unresolved",
    }
}

fn grid_text(g: &Grid) -> String {
    format!("resolution {} cap {}", resolution_cell(g), g.cap)
}

fn resolution_cell(g: &Grid) -> String {
    format!("{} {}", g.resolution[0], g.resolution[1])
}

pub fn solve_text(r: &GapReport) -> String {
    let mut s = String::new();
    writeln!(s, "inf(P) in [{}, {}]", r.lower, r.upper).unwrap();
    writeln!(s, "gap: {}", r.gap).unwrap();
    writeln!(s, "status: {}", status_name(r.status)).unwrap();
    match &r.witness {
        Some(x) => writeln!(s, "witness: {}", join(x)).unwrap(),
        None => writeln!(s, "witness: none").unwrap(),
    }
    if let Some(d) = &r.best_dual {
        writeln!(s, "lower bound from H = {} with mu = {}", d.subset, join(&d.mu)).unwrap();
    }
    writeln!(s, "grid: {}", grid_text(&r.grid)).unwrap();
    writeln!(s, "validation grid: {}", grid_text(&r.validation)).unwrap();
    s
}

pub fn solve_csv(r: &GapReport) -> String {
    let row = vec![
        num(r.lower),
        num(r.upper),
        num(r.gap),
        status_name(r.status).to_string(),
        resolution_cell(&r.grid),
        r.grid.cap.to_string(),
        resolution_cell(&r.validation),
        r.validation.cap.to_string(),
        r.witness.as_deref().map(join).unwrap_or_default(),
    ];
    csv_table(SOLVE_COLUMNS, &[row])
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn dual_text(b: &BestDual) -> String {
    let mut s = String::new();
    writeln!(s, "best dual value: {}", b.value()).unwrap();
    if let Some(d) = &b.best {
        writeln!(s, "H: {}", d.subset).unwrap();
        writeln!(s, "mu: {}", join(&d.mu)).unwrap();
    } else if b.unbounded {
        writeln!(s, "some (D_H) is unbounded").unwrap();
    } else {
        writeln!(s, "no enumerated (D_H) is feasible").unwrap();
    }
    writeln!(s, "refined: {}", yes(b.refined)).unwrap();
    writeln!(
        s,
        "family exhausted: {} ({} subsets examined)",
        yes(b.family_exhausted),
        b.subsets_examined
    )
    .unwrap();
    if b.numerical_skips > 0 {
        writeln!(s, "skipped after numerical breakdown: {}", b.numerical_skips).unwrap();
    }
    s
}

pub fn dual_csv(b: &BestDual) -> String {
    let tail = |index: String, mu: String| {
        vec![
            num(b.value()),
            index,
            mu,
            b.refined.to_string(),
            b.family_exhausted.to_string(),
            b.subsets_examined.to_string(),
        ]
    };
    let rows: Vec<Vec<String>> = match &b.best {
        Some(d) => d
            .subset
            .values()
            .iter()
            .zip(&d.mu)
            .map(|(t, m)| tail(t.to_string(), num(*m)))
            .collect(),
        None => vec![tail(String::new(), String::new())],
    };
    csv_table(DUAL_COLUMNS, &rows)
}

pub fn certify_text(o: &CertifyOutcome) -> String {
    match o {
        CertifyOutcome::Found(c) => format!("{}\n", serialize_certificate(c)),
        CertifyOutcome::NotFoundWithinBudget { examined, exhausted } => format!(
            "not found within budget ({examined} subsets examined, family {})\n",
            if *exhausted { "exhausted" } else { "truncated" }
        ),
    }
}

pub fn certify_csv(o: &CertifyOutcome, alpha: f64) -> String {
    let rows: Vec<Vec<String>> = match o {
        CertifyOutcome::Found(c) => c
            .subset
            .values()
            .iter()
            .zip(&c.mu)
            .map(|(t, m)| {
                vec![
                    "found".into(),
                    num(c.alpha),
                    t.to_string(),
                    num(*m),
                    num(c.s),
                    String::new(),
                ]
            })
            .collect(),
        CertifyOutcome::NotFoundWithinBudget { examined, .. } => vec![vec![
            "not_found".into(),
            num(alpha),
            String::new(),
            String::new(),
            String::new(),
            examined.to_string(),
        ]],
    };
    csv_table(CERTIFY_COLUMNS, &rows)
}

fn chain_rows(r: &ChainReport) -> Vec<(&'static str, &'static str)> {
    vec![
        ("cone_membership", r.cone_membership.as_str()),
        ("strong_duality", r.strong_duality.as_str()),
        ("dual_reducible_zero_gap", r.dual_reducible_zero_gap.as_str()),
        ("primal_reducible", r.primal_reducible.as_str()),
        ("zero_gap", r.zero_gap.as_str()),
    ]
}

pub fn chain_text(r: &ChainReport) -> String {
    let mut s = String::new();
    let labels = [
        "(i)   -(c, alpha) in K_H for some H",
        "(ii)  H-strong duality",
        "(iii) dual H-reducible, zero gap",
        "(iv)  primal H-reducible",
        "      zero H-duality gap",
    ];
    for (label, (_, status)) in labels.iter().zip(chain_rows(r)) {
        writeln!(s, "{label:<36} {status}").unwrap();
    }
    if r.zero_gap_from_trend {
        writeln!(s, "zero-gap verdict is a heuristic from the trend between two grids").unwrap();
    }
    if r.unbounded {
        writeln!(s, "the grid subproblem is unbounded below: inf(P) = -inf").unwrap();
    }
    writeln!(s, "alpha (validated upper bound): {}", r.alpha).unwrap();
    writeln!(s, "bracket: [{}, {}]", r.bracket_lower, r.alpha).unwrap();
    writeln!(s, "best family dual: {}", r.best_dual_value).unwrap();
    writeln!(s, "decision tolerance: {}", r.decision_tol).unwrap();
    s
}

pub fn chain_csv(r: &ChainReport) -> String {
    let rows: Vec<Vec<String>> = chain_rows(r)
        .into_iter()
        .map(|(name, status)| {
            vec![
                name.into(),
                status.into(),
                num(r.alpha),
                num(r.bracket_lower),
                num(r.best_dual_value),
                num(r.decision_tol),
                r.unbounded.to_string(),
            ]
        })
        .collect();
    csv_table(CHAIN_COLUMNS, &rows)
}

pub fn prefix_text(t: &PrefixTrace, limit: Option<&LimitReport>) -> String {
    let mut s = String::new();
    writeln!(s, "{:>6} {:>22} {:>22} {:>12}", "m", "inf(P_m)", "sup(D_m)", "gap").unwrap();
    for ((m, p), (d, g)) in t
        .m_values
        .iter()
        .zip(&t.primal_values)
        .zip(t.dual_values.iter().zip(t.gaps()))
    {
        writeln!(s, "{m:>6} {:>22} {:>22} {g:>12.3e}", num(*p), num(*d)).unwrap();
    }
    match t.stabilized_at {
        Some(m) => writeln!(s, "stabilized at m = {m}").unwrap(),
        None => writeln!(s, "no stabilization detected").unwrap(),
    }
    if let Some(l) = limit {
        writeln!(
            s,
            "dual limit estimate: {}{}",
            l.dual_limit_estimate,
            if l.dual_increasing { " (still increasing)" } else { "" }
        )
        .unwrap();
        writeln!(
            s,
            "primal limit estimate: {}{}",
            l.primal_limit_estimate,
            if l.primal_increasing { " (still increasing)" } else { "" }
        )
        .unwrap();
        writeln!(s, "zero gap (heuristic): {}", yes(l.zero_gap)).unwrap();
        writeln!(s, "prefix-reducible (heuristic): {}", yes(l.hn_reducible)).unwrap();
    }
    s
}

pub fn prefix_csv(t: &PrefixTrace) -> String {
    let rows: Vec<Vec<String>> = t
        .m_values
        .iter()
        .zip(&t.primal_values)
        .zip(t.dual_values.iter().zip(t.gaps()))
        .map(|((m, p), (d, g))| vec![m.to_string(), num(*p), num(*d), num(g)])
        .collect();
    csv_table(PREFIX_COLUMNS, &rows)
}

pub fn sweep_text(points: &[(Vec<f64>, StrongDualityReport)]) -> String {
    let mut s = String::new();
    for (y, r) in points {
        writeln!(
            s,
            "y = ({}): conjugate {} vs family phi {} -> {}",
            join(y),
            r.conj_estimate,
            r.phi_family_value,
            if r.attained { "attained" } else { "not attained" }
        )
        .unwrap();
    }
    s
}

pub fn sweep_csv(points: &[(Vec<f64>, StrongDualityReport)]) -> String {
    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|(y, r)| {
            vec![
                join(y),
                num(r.conj_estimate),
                num(r.phi_family_value),
                r.attained.to_string(),
            ]
        })
        .collect();
    csv_table(SWEEP_COLUMNS, &rows)
}

pub fn probe_text(r: &CoveringReport) -> String {
    format!(
        "covered {} of {} random subsets (fraction {})\n",
        r.covered,
        r.trials,
        r.fraction()
    )
}

pub fn probe_csv(r: &CoveringReport) -> String {
    csv_table(
        PROBE_COLUMNS,
        &[vec![r.trials.to_string(), r.covered.to_string(), num(r.fraction())]],
    )
}
