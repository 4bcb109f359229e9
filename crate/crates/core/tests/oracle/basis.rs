//! Brute-force LP oracle: enumerate every linearly independent column set of
//! size at most `m`, solve it by Gaussian elimination and keep the feasible
//! ones. Standard form `max g·y s.t. E y = d, y ≥ 0`, `E` given by rows.

#[derive(Clone, Debug, PartialEq)]
pub enum OracleStatus {
    Optimal(f64),
    Infeasible,
    Unbounded,
}

const EPS: f64 = 1e-9;

/// Solves `A z = rhs` for `A` of size `m × s` (`s ≤ m`, given by columns).
/// `None` when the columns are dependent or the system is inconsistent.
fn solve_columns(cols: &[Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
    let m = rhs.len();
    let s = cols.len();
    // augmented m × (s+1), row-major
    let mut a: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let mut row: Vec<f64> = cols.iter().map(|c| c[i]).collect();
            row.push(rhs[i]);
            row
        })
        .collect();
    let mut row = 0;
    for col in 0..s {
        let p = (row..m).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[p][col].abs() < EPS {
            return None;
        }
        a.swap(row, p);
        for r in 0..m {
            if r != row {
                let f = a[r][col] / a[row][col];
                if f != 0.0 {
                    for c in col..=s {
                        a[r][c] -= f * a[row][c];
                    }
                }
            }
        }
        row += 1;
    }
    for r in row..m {
        if a[r][s].abs() > 1e-7 {
            return None;
        }
    }
    Some((0..s).map(|j| a[j][s] / a[j][j]).collect())
}

fn subsets(k: usize, max: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(start: usize, k: usize, max: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        visit(cur);
        if cur.len() == max {
            return;
        }
        for j in start..k {
            cur.push(j);
            rec(j + 1, k, max, cur, visit);
            cur.pop();
        }
    }
    rec(0, k, max, &mut Vec::new(), &mut visit);
}

/// Best objective over all basic feasible solutions of `E y = d, y ≥ 0`.
fn best_vertex(rows: &[Vec<f64>], d: &[f64], g: &[f64]) -> Option<f64> {
    let m = rows.len();
    let k = g.len();
    let column = |j: usize| -> Vec<f64> { rows.iter().map(|r| r[j]).collect() };
    let mut best: Option<f64> = None;
    subsets(k, m, |s| {
        let cols: Vec<Vec<f64>> = s.iter().map(|&j| column(j)).collect();
        if let Some(z) = solve_columns(&cols, d) {
            if z.iter().all(|&v| v >= -EPS) {
                let val: f64 = s.iter().zip(&z).map(|(&j, v)| g[j] * v).sum();
                best = Some(best.map_or(val, |b: f64| b.max(val)));
            }
        }
    });
    best
}

pub fn solve(rows: &[Vec<f64>], d: &[f64], g: &[f64]) -> OracleStatus {
    let Some(best) = best_vertex(rows, d, g) else {
        return OracleStatus::Infeasible;
    };
    // recession cone {E r = 0, r ≥ 0} normalised by Σ r = 1
    let mut ray_rows: Vec<Vec<f64>> = rows.to_vec();
    ray_rows.push(vec![1.0; g.len()]);
    let mut ray_rhs = vec![0.0; rows.len()];
    ray_rhs.push(1.0);
    match best_vertex(&ray_rows, &ray_rhs, g) {
        Some(v) if v > EPS => OracleStatus::Unbounded,
        _ => OracleStatus::Optimal(best),
    }
}

#[cfg(test)]
mod tests {
    #[allow(unused_imports)] // unused when built into a harness-free target
    use super::*;

    #[test]
    fn tiny_cases() {
        let rows = vec![vec![1.0, 1.0]];
        assert_eq!(solve(&rows, &[1.0], &[1.0, 0.0]), OracleStatus::Optimal(1.0));
        assert_eq!(solve(&rows, &[-1.0], &[1.0, 0.0]), OracleStatus::Infeasible);
        let rows = vec![vec![1.0, -1.0]];
        assert_eq!(solve(&rows, &[1.0], &[1.0, 0.0]), OracleStatus::Unbounded);
    }
}
