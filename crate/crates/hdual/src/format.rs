//! Text formats: instances, certificates and shift-point lists.
//!
//! Instance files are line oriented, `#` starts a comment:
//!
//! ```text
//! dim 2
//! objective 1 1
//! index interval 0 1        # or: countable | list 0 0.5 1 | product interval 0 1 countable
//! coeff 1 1 0 -1            # a_1 gets -1 · u1^1 u2^0
//! coeff b 2 0 1             # b gets u1^2
//! ```

use std::fmt::Write as _;

use hdual_core::certify::ReducibilityCertificate;
use hdual_core::model::{ConstraintFamily, Factor, IndexSet, IndexSubset, IndexValue, LipInstance, Poly2, Scalar};
use hdual_core::DenseVector;

/// A problem with some input text, with its 1-based line number (0 when the
/// problem is not tied to a line).
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {reason}")]
pub struct ParseError {
    pub line: usize,
    pub reason: String,
}

fn err<T>(line: usize, reason: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        reason: reason.into(),
    })
}

fn real(tok: &str, line: usize) -> Result<f64, ParseError> {
    match tok.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => err(line, format!("expected a finite number, found `{tok}`")),
    }
}

fn count(tok: &str, line: usize) -> Result<usize, ParseError> {
    tok.parse::<usize>()
        .map_err(|_| ParseError {
            line,
            reason: format!("expected a non-negative integer, found `{tok}`"),
        })
}

/// Parses `interval lo hi` or `countable` from the front of `toks`.
fn factor<'a>(toks: &mut impl Iterator<Item = &'a str>, line: usize) -> Result<Factor, ParseError> {
    match toks.next() {
        Some("interval") => {
            let lo = real(toks.next().unwrap_or(""), line)?;
            let hi = real(toks.next().unwrap_or(""), line)?;
            if lo >= hi {
                return err(line, "interval needs lo < hi");
            }
            Ok(Factor::Interval { lo, hi })
        }
        Some("countable") => Ok(Factor::Countable),
        Some(other) => err(line, format!("unknown index factor `{other}`")),
        None => err(line, "missing index factor"),
    }
}

fn index_set(rest: &[&str], line: usize) -> Result<IndexSet, ParseError> {
    let mut toks = rest.iter().copied();
    let set = match rest.first() {
        Some(&"list") => {
            toks.next();
            let labels = toks.by_ref().map(|t| real(t, line)).collect::<Result<Vec<_>, _>>()?;
            if labels.is_empty() {
                return err(line, "index list is empty");
            }
            IndexSet::FiniteList(labels)
        }
        Some(&"product") => {
            toks.next();
            let a = factor(&mut toks, line)?;
            let b = factor(&mut toks, line)?;
            IndexSet::Product(a, b)
        }
        _ => match factor(&mut toks, line)? {
            Factor::Interval { lo, hi } => IndexSet::Interval { lo, hi },
            Factor::Countable => IndexSet::Countable,
        },
    };
    if let Some(extra) = toks.next() {
        return err(line, format!("unexpected `{extra}` after index set"));
    }
    set.validate().map_err(|e| ParseError {
        line,
        reason: e.to_string(),
    })?;
    Ok(set)
}

pub fn parse_instance(text: &str) -> Result<LipInstance, ParseError> {
    let mut dim: Option<(usize, usize)> = None;
    let mut objective: Option<(Vec<f64>, usize)> = None;
    let mut set: Option<IndexSet> = None;
    let mut coeffs: Vec<(usize, Option<usize>, usize, usize, f64)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = content.split_whitespace().collect();
        let Some((&key, rest)) = toks.split_first() else {
            continue;
        };
        match key {
            "dim" => {
                if dim.is_some() {
                    return err(line, "duplicate `dim`");
                }
                let [n] = rest else {
                    return err(line, "`dim` takes one value");
                };
                let n = count(n, line)?;
                if n == 0 {
                    return err(line, "`dim` must be at least 1");
                }
                dim = Some((n, line));
            }
            "objective" => {
                if objective.is_some() {
                    return err(line, "duplicate `objective`");
                }
                let c = rest.iter().map(|t| real(t, line)).collect::<Result<Vec<_>, _>>()?;
                objective = Some((c, line));
            }
            "index" => {
                if set.is_some() {
                    return err(line, "duplicate `index`");
                }
                set = Some(index_set(rest, line)?);
            }
            "coeff" => {
                let [target, d1, d2, v] = rest else {
                    return err(line, "`coeff` takes <i|b> <deg_u1> <deg_u2> <value>");
                };
                let target = if *target == "b" {
                    None
                } else {
                    let i = count(target, line)?;
                    if i == 0 {
                        return err(line, "coefficient rows are numbered from 1");
                    }
                    Some(i)
                };
                let (d1, d2) = (count(d1, line)?, count(d2, line)?);
                if d1 > hdual_core::model::MAX_DEGREE || d2 > hdual_core::model::MAX_DEGREE {
                    return err(line, format!("degree above {}", hdual_core::model::MAX_DEGREE));
                }
                coeffs.push((line, target, d1, d2, real(v, line)?));
            }
            other => return err(line, format!("unknown keyword `{other}`")),
        }
    }

    let Some((n, _)) = dim else {
        return err(0, "missing `dim`");
    };
    let Some((c, c_line)) = objective else {
        return err(0, "missing `objective`");
    };
    if c.len() != n {
        return err(c_line, format!("objective has {} entries, `dim` is {n}", c.len()));
    }
    let Some(set) = set else {
        return err(0, "missing `index`");
    };
    let mut a = vec![Poly2::zero(); n];
    let mut b = Poly2::zero();
    for (k, &(line, target, d1, d2, _)) in coeffs.iter().enumerate() {
        if coeffs[..k].iter().any(|&(_, t, e1, e2, _)| (t, e1, e2) == (target, d1, d2)) {
            return err(line, "coefficient given twice");
        }
    }
    for (line, target, d1, d2, v) in coeffs {
        let p = match target {
            None => &mut b,
            Some(i) if i <= n => &mut a[i - 1],
            Some(i) => return err(line, format!("coefficient row {i} exceeds `dim` {n}")),
        };
        p.set(d1, d2, v);
    }
    let family = ConstraintFamily::new(a, b).map_err(|e| ParseError {
        line: 0,
        reason: e.to_string(),
    })?;
    let c = DenseVector::new(c).map_err(|e| ParseError {
        line: c_line,
        reason: e.to_string(),
    })?;
    LipInstance::new(c, set, family).map_err(|e| ParseError {
        line: 0,
        reason: e.to_string(),
    })
}

fn write_factor(out: &mut String, f: &Factor) {
    match f {
        Factor::Interval { lo, hi } => write!(out, "interval {lo} {hi}").unwrap(),
        Factor::Countable => out.push_str("countable"),
    }
}

/// Inverse of [`parse_instance`]; numbers use the shortest round-trip form.
pub fn serialize_instance(inst: &LipInstance) -> String {
    let mut out = String::new();
    writeln!(out, "dim {}", inst.dim()).unwrap();
    out.push_str("objective");
    for c in inst.objective().iter() {
        write!(out, " {c}").unwrap();
    }
    out.push_str("\nindex ");
    match inst.index_set() {
        IndexSet::FiniteList(v) => {
            out.push_str("list");
            for t in v {
                write!(out, " {t}").unwrap();
            }
        }
        IndexSet::Interval { lo, hi } => write_factor(&mut out, &Factor::Interval { lo: *lo, hi: *hi }),
        IndexSet::Countable => out.push_str("countable"),
        IndexSet::Product(a, b) => {
            out.push_str("product ");
            write_factor(&mut out, a);
            out.push(' ');
            write_factor(&mut out, b);
        }
    }
    out.push('\n');
    for (i, p) in inst.family().a().iter().enumerate() {
        for (d1, d2, v) in p.terms() {
            writeln!(out, "coeff {} {d1} {d2} {v}", i + 1).unwrap();
        }
    }
    for (d1, d2, v) in inst.family().b().terms() {
        writeln!(out, "coeff b {d1} {d2} {v}").unwrap();
    }
    out
}

fn scalar(tok: &str, f: &Factor, line: usize) -> Result<Scalar, ParseError> {
    match f {
        Factor::Interval { .. } => Ok(Scalar::Real(real(tok, line)?)),
        Factor::Countable => match tok.parse::<u64>() {
            Ok(k) if k >= 1 => Ok(Scalar::Count(k)),
            _ => err(line, format!("expected a positive integer index, found `{tok}`")),
        },
    }
}

/// Reads one index value as printed by its `Display` form: `0.5`, `3` or `(0.5,4)`.
pub fn parse_index_value(tok: &str, set: &IndexSet, line: usize) -> Result<IndexValue, ParseError> {
    let v = match set {
        IndexSet::FiniteList(_) | IndexSet::Interval { .. } => IndexValue::real(real(tok, line)?),
        IndexSet::Countable => IndexValue::Single(scalar(tok, &Factor::Countable, line)?),
        IndexSet::Product(fa, fb) => {
            let inner = tok
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| ParseError {
                    line,
                    reason: format!("expected a pair `(u,v)`, found `{tok}`"),
                })?;
            let Some((a, b)) = inner.split_once(',') else {
                return err(line, format!("expected a pair `(u,v)`, found `{tok}`"));
            };
            IndexValue::Pair(scalar(a.trim(), fa, line)?, scalar(b.trim(), fb, line)?)
        }
    };
    if !set.contains(&v) {
        return err(line, format!("index `{tok}` lies outside the index set"));
    }
    Ok(v)
}

/// `certificate H: <indices> mu: <values> s: <value> alpha: <value>`
pub fn serialize_certificate(cert: &ReducibilityCertificate) -> String {
    let mut out = String::from("certificate H:");
    for v in cert.subset.values() {
        write!(out, " {v}").unwrap();
    }
    out.push_str(" mu:");
    for m in &cert.mu {
        write!(out, " {m}").unwrap();
    }
    write!(out, " s: {} alpha: {}", cert.s, cert.alpha).unwrap();
    out
}

/// Reads the first non-comment line of `text` as a certificate for an
/// instance over `set`. Multipliers may be negative here; validity is
/// decided by verification, not by the parser.
pub fn parse_certificate(text: &str, set: &IndexSet) -> Result<ReducibilityCertificate, ParseError> {
    let (line, content) = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .find(|(_, l)| !l.is_empty())
        .ok_or(ParseError {
            line: 0,
            reason: "no certificate found".into(),
        })?;
    let toks: Vec<&str> = content.split_whitespace().collect();
    if toks.first() != Some(&"certificate") {
        return err(line, "expected `certificate`");
    }
    let pos = |label: &str| {
        toks.iter().position(|t| *t == label).ok_or_else(|| ParseError {
            line,
            reason: format!("missing `{label}`"),
        })
    };
    let (h, mu, s, alpha) = (pos("H:")?, pos("mu:")?, pos("s:")?, pos("alpha:")?);
    if !(h == 1 && h < mu && mu < s && s < alpha) || s + 2 != alpha || alpha + 2 != toks.len() {
        return err(line, "fields must appear as `H: … mu: … s: <v> alpha: <v>`");
    }
    let values = toks[h + 1..mu]
        .iter()
        .map(|t| parse_index_value(t, set, line))
        .collect::<Result<Vec<_>, _>>()?;
    let subset = IndexSubset::new(values).map_err(|e| ParseError {
        line,
        reason: e.to_string(),
    })?;
    let mu_vals = toks[mu + 1..s].iter().map(|t| real(t, line)).collect::<Result<Vec<_>, _>>()?;
    if mu_vals.len() != subset.len() {
        return err(
            line,
            format!("{} multipliers for {} indices", mu_vals.len(), subset.len()),
        );
    }
    Ok(ReducibilityCertificate {
        subset,
        mu: mu_vals,
        s: real(toks[s + 1], line)?,
        alpha: real(toks[alpha + 1], line)?,
    })
}

/// One shift point per line, coordinates separated by commas or whitespace.
pub fn parse_shifts(text: &str, dim: usize) -> Result<Vec<Vec<f64>>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = content
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        if toks.is_empty() {
            continue;
        }
        let y = toks.iter().map(|t| real(t, line)).collect::<Result<Vec<_>, _>>()?;
        if y.len() != dim {
            return err(line, format!("shift point has {} coordinates, instance dimension is {dim}", y.len()));
        }
        out.push(y);
    }
    if out.is_empty() {
        return err(0, "no shift points");
    }
    Ok(out)
}
