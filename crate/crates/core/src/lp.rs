//! Dense two-phase simplex for `maximize g·y s.t. E y = d, y ≥ 0`.
//!
//! Every outcome carries a certificate that can be checked by plain
//! arithmetic: an optimal basic solution with row duals, a Farkas vector
//! for infeasibility, or an improving ray for unboundedness.
//!
//! Pricing is Dantzig's largest reduced cost until `2·(m+k)` consecutive
//! degenerate pivots have been made, after which Bland's smallest-index
//! rule takes over for the rest of the phase. The final basis is always
//! re-solved from the original data, so returned values do not carry the
//! tableau's accumulated rounding.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{dot, norm_inf, solve_in_place};
use crate::{Error, Matrix, Result, ToleranceConfig};

/// `maximize g·y s.t. E y = d, y ≥ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct StandardLp {
    e: Matrix,
    d: Vec<f64>,
    g: Vec<f64>,
}

impl StandardLp {
    pub fn new(e: Matrix, d: Vec<f64>, g: Vec<f64>) -> Result<Self> {
        if e.rows() == 0 || e.cols() == 0 {
            return Err(Error::Invalid("standard LP needs at least one row and one column"));
        }
        if d.len() != e.rows() {
            return Err(Error::DimensionMismatch {
                expected: e.rows(),
                found: d.len(),
            });
        }
        if g.len() != e.cols() {
            return Err(Error::DimensionMismatch {
                expected: e.cols(),
                found: g.len(),
            });
        }
        if !e.all_finite() || !d.iter().chain(&g).all(|v| v.is_finite()) {
            return Err(Error::Invalid("LP data must be finite"));
        }
        Ok(Self { e, d, g })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.e
    }

    pub fn rhs(&self) -> &[f64] {
        &self.d
    }

    pub fn objective(&self) -> &[f64] {
        &self.g
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal {
        y: Vec<f64>,
        value: f64,
        /// Optimal solution of the dual `min π·d s.t. Eᵀπ ≥ g`.
        row_duals: Vec<f64>,
    },
    /// `πᵀE ≤ 0` and `π·d > 0`.
    Infeasible { farkas: Vec<f64> },
    /// `r ≥ 0`, `E r = 0` and `g·r > 0`.
    Unbounded { ray: Vec<f64> },
}

/// Result of a phase-one feasibility check of `E y = d, y ≥ 0`.
#[derive(Clone, Debug, PartialEq)]
pub enum Feasibility {
    Feasible { y: Vec<f64> },
    Infeasible { farkas: Vec<f64> },
}

/// Which certificate condition failed in [`LpOutcome::verify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateFault {
    Residual,
    Sign,
    Objective,
    DualFeasibility,
    WrongLength,
}

pub fn solve_standard_lp(lp: &StandardLp, tol: &ToleranceConfig) -> Result<LpOutcome> {
    let mut sx = Simplex::new(&lp.e, &lp.d, *tol);
    if let Some(farkas) = sx.phase_one()? {
        return Ok(LpOutcome::Infeasible { farkas });
    }
    sx.drive_out_artificials();

    let mut cost = vec![0.0; sx.width];
    cost[..sx.k].copy_from_slice(&lp.g);
    match sx.run(&cost)? {
        RunEnd::Optimal => {
            let (y, flipped_duals) = sx.basic_solution(&cost)?;
            let row_duals: Vec<f64> = flipped_duals
                .iter()
                .zip(&sx.sign)
                .map(|(p, s)| p * s)
                .collect();
            let value = dot(&lp.g, &y);
            let out = LpOutcome::Optimal {
                y,
                value,
                row_duals,
            };
            out.verify(lp, &relaxed(tol, &lp.d))
                .map_err(|_| Error::NumericalBreakdown("optimal basis fails its own checks"))?;
            Ok(out)
        }
        RunEnd::Unbounded(col) => {
            let ray = sx.ray(col)?;
            let out = LpOutcome::Unbounded { ray };
            out.verify(lp, &relaxed(tol, &lp.d))
                .map_err(|_| Error::NumericalBreakdown("unbounded ray fails its own checks"))?;
            Ok(out)
        }
    }
}

/// Phase one only: is `E y = d, y ≥ 0` feasible?
pub fn feasibility(e: &Matrix, d: &[f64], tol: &ToleranceConfig) -> Result<Feasibility> {
    if e.rows() == 0 || e.cols() == 0 {
        return Err(Error::Invalid("feasibility system needs at least one row and one column"));
    }
    if d.len() != e.rows() {
        return Err(Error::DimensionMismatch {
            expected: e.rows(),
            found: d.len(),
        });
    }
    if !e.all_finite() || !d.iter().all(|v| v.is_finite()) {
        return Err(Error::Invalid("LP data must be finite"));
    }
    let mut sx = Simplex::new(e, d, *tol);
    if let Some(farkas) = sx.phase_one()? {
        return Ok(Feasibility::Infeasible { farkas });
    }
    sx.drive_out_artificials();
    let zero = vec![0.0; sx.width];
    let (y, _) = sx.basic_solution(&zero)?;
    let rtol = tol.feas_tol * (1.0 + norm_inf(d));
    let res = e.mul_vec(&y);
    if res.iter().zip(d).any(|(r, di)| (r - di).abs() > rtol) {
        return Err(Error::NumericalBreakdown("phase-one point fails its residual check"));
    }
    Ok(Feasibility::Feasible { y })
}

fn relaxed(tol: &ToleranceConfig, d: &[f64]) -> ToleranceConfig {
    ToleranceConfig {
        feas_tol: tol.feas_tol * (1.0 + norm_inf(d)),
        ..*tol
    }
}

impl LpOutcome {
    /// Checks the outcome's certificate against `lp` by direct arithmetic.
    pub fn verify(&self, lp: &StandardLp, tol: &ToleranceConfig) -> core::result::Result<(), CertificateFault> {
        let t = tol.feas_tol;
        match self {
            LpOutcome::Optimal {
                y,
                value,
                row_duals,
            } => {
                if y.len() != lp.e.cols() || row_duals.len() != lp.e.rows() {
                    return Err(CertificateFault::WrongLength);
                }
                let ey = lp.e.mul_vec(y);
                if ey.iter().zip(&lp.d).any(|(a, b)| (a - b).abs() > t) {
                    return Err(CertificateFault::Residual);
                }
                if y.iter().any(|&v| v < -t) {
                    return Err(CertificateFault::Sign);
                }
                if (dot(&lp.g, y) - value).abs() > t {
                    return Err(CertificateFault::Objective);
                }
                let et_pi = lp.e.tr_mul_vec(row_duals);
                let scale = 1.0 + norm_inf(row_duals);
                if et_pi.iter().zip(&lp.g).any(|(a, g)| *a < g - t * scale) {
                    return Err(CertificateFault::DualFeasibility);
                }
                Ok(())
            }
            LpOutcome::Infeasible { farkas } => check_farkas(&lp.e, &lp.d, farkas, t),
            LpOutcome::Unbounded { ray } => {
                if ray.len() != lp.e.cols() {
                    return Err(CertificateFault::WrongLength);
                }
                if ray.iter().any(|&v| v < -t) {
                    return Err(CertificateFault::Sign);
                }
                if lp.e.mul_vec(ray).iter().any(|v| v.abs() > t) {
                    return Err(CertificateFault::Residual);
                }
                if dot(&lp.g, ray) <= 0.0 {
                    return Err(CertificateFault::Objective);
                }
                Ok(())
            }
        }
    }
}

/// `πᵀE ≤ tol` componentwise and `π·d > 0`.
pub fn check_farkas(e: &Matrix, d: &[f64], farkas: &[f64], tol: f64) -> core::result::Result<(), CertificateFault> {
    if farkas.len() != e.rows() {
        return Err(CertificateFault::WrongLength);
    }
    let scale = 1.0 + norm_inf(farkas);
    if e.tr_mul_vec(farkas).iter().any(|&v| v > tol * scale) {
        return Err(CertificateFault::Sign);
    }
    if dot(farkas, d) <= tol * scale {
        return Err(CertificateFault::Objective);
    }
    Ok(())
}

enum RunEnd {
    Optimal,
    Unbounded(usize),
}

/// Tableau over `[S·E | I]` where `S` flips rows with negative right-hand
/// side; columns `k..k+m` are the phase-one artificials and never re-enter.
struct Simplex<'a> {
    e: &'a Matrix,
    d: &'a [f64],
    sign: Vec<f64>,
    m: usize,
    k: usize,
    width: usize,
    tab: Vec<f64>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    tol: ToleranceConfig,
}

impl<'a> Simplex<'a> {
    fn new(e: &'a Matrix, d: &'a [f64], tol: ToleranceConfig) -> Self {
        let (m, k) = (e.rows(), e.cols());
        let width = k + m;
        let stride = width + 1;
        let sign: Vec<f64> = d.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect();
        let mut tab = vec![0.0; m * stride];
        for i in 0..m {
            let row = &mut tab[i * stride..(i + 1) * stride];
            for (dst, &src) in row[..k].iter_mut().zip(e.row(i)) {
                *dst = sign[i] * src;
            }
            row[k + i] = 1.0;
            row[width] = sign[i] * d[i];
        }
        let basis: Vec<usize> = (k..width).collect();
        let mut in_basis = vec![false; width];
        for &b in &basis {
            in_basis[b] = true;
        }
        Self {
            e,
            d,
            sign,
            m,
            k,
            width,
            tab,
            basis,
            in_basis,
            tol,
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.tab[i * (self.width + 1) + j]
    }

    #[inline]
    fn rhs(&self, i: usize) -> f64 {
        self.tab[i * (self.width + 1) + self.width]
    }

    /// Returns a Farkas vector when the system is infeasible.
    fn phase_one(&mut self) -> Result<Option<Vec<f64>>> {
        let mut cost = vec![0.0; self.width];
        for c in &mut cost[self.k..] {
            *c = -1.0;
        }
        match self.run(&cost)? {
            RunEnd::Optimal => {}
            RunEnd::Unbounded(_) => {
                return Err(Error::NumericalBreakdown("phase one reported unbounded"));
            }
        }
        let infeasibility: f64 = (0..self.m)
            .filter(|&i| self.basis[i] >= self.k)
            .map(|i| self.rhs(i).max(0.0))
            .sum();
        if infeasibility <= self.tol.feas_tol * (1.0 + norm_inf(self.d)) {
            return Ok(None);
        }
        // Phase-one duals π' solve Bᵀπ' = c_B; the Farkas vector is −S·π'.
        let duals = self.solve_duals(&cost)?;
        let farkas: Vec<f64> = duals.iter().zip(&self.sign).map(|(p, s)| -p * s).collect();
        check_farkas(self.e, self.d, &farkas, self.tol.feas_tol)
            .map_err(|_| Error::NumericalBreakdown("phase-one Farkas vector fails its checks"))?;
        Ok(Some(farkas))
    }

    /// Pivots zero-level artificials out of the basis where a structural
    /// column allows it; rows where none does are redundant.
    fn drive_out_artificials(&mut self) {
        for i in 0..self.m {
            if self.basis[i] < self.k {
                continue;
            }
            let mut best = None;
            let mut best_abs = self.tol.pivot_tol.max(1e-9);
            for j in 0..self.k {
                if !self.in_basis[j] && self.at(i, j).abs() > best_abs {
                    best_abs = self.at(i, j).abs();
                    best = Some(j);
                }
            }
            if let Some(j) = best {
                self.pivot(i, j);
            }
        }
    }

    fn run(&mut self, cost: &[f64]) -> Result<RunEnd> {
        let max_iter = 50 * (self.m + self.width) + 1000;
        let degenerate_limit = 2 * (self.m + self.k);
        let mut degenerate_run = 0usize;
        let mut bland = false;
        let mut rc = vec![0.0; self.k];
        let cb_tol = self.tol.feas_tol;

        for _ in 0..max_iter {
            self.reduced_costs(cost, &mut rc);
            let entering = if bland {
                (0..self.k).find(|&j| !self.in_basis[j] && rc[j] > cb_tol)
            } else {
                let mut best: Option<(usize, f64)> = None;
                for j in 0..self.k {
                    if !self.in_basis[j] && rc[j] > cb_tol && best.is_none_or(|(_, v)| rc[j] > v) {
                        best = Some((j, rc[j]));
                    }
                }
                best.map(|(j, _)| j)
            };
            let Some(col) = entering else {
                return Ok(RunEnd::Optimal);
            };

            let mut leave: Option<(usize, f64, f64)> = None;
            for i in 0..self.m {
                let a = self.at(i, col);
                if a <= self.tol.pivot_tol {
                    continue;
                }
                let ratio = self.rhs(i).max(0.0) / a;
                leave = match leave {
                    None => Some((i, ratio, a)),
                    Some((li, lr, la)) => {
                        let tie = (ratio - lr).abs() <= 1e-12 * (1.0 + lr.abs());
                        let better = if tie {
                            if bland {
                                self.basis[i] < self.basis[li]
                            } else {
                                a > la
                            }
                        } else {
                            ratio < lr
                        };
                        if better {
                            Some((i, ratio, a))
                        } else {
                            Some((li, lr, la))
                        }
                    }
                };
            }
            let Some((row, ratio, _)) = leave else {
                return Ok(RunEnd::Unbounded(col));
            };
            if ratio <= 1e-12 {
                degenerate_run += 1;
                if degenerate_run > degenerate_limit {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
            }
            self.pivot(row, col);
        }
        Err(Error::NumericalBreakdown("simplex iteration limit reached"))
    }

    fn reduced_costs(&self, cost: &[f64], rc: &mut [f64]) {
        rc.copy_from_slice(&cost[..self.k]);
        for i in 0..self.m {
            let cb = cost[self.basis[i]];
            if cb == 0.0 {
                continue;
            }
            let row = &self.tab[i * (self.width + 1)..i * (self.width + 1) + self.k];
            for (r, &a) in rc.iter_mut().zip(row) {
                *r -= cb * a;
            }
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let stride = self.width + 1;
        let piv = self.at(row, col);
        {
            let r = &mut self.tab[row * stride..(row + 1) * stride];
            for v in r.iter_mut() {
                *v /= piv;
            }
        }
        let pivot_row: Vec<f64> = self.tab[row * stride..(row + 1) * stride].to_vec();
        for i in 0..self.m {
            if i == row {
                continue;
            }
            let f = self.at(i, col);
            if f == 0.0 {
                continue;
            }
            let r = &mut self.tab[i * stride..(i + 1) * stride];
            for (v, &p) in r.iter_mut().zip(&pivot_row) {
                *v -= f * p;
            }
            r[col] = 0.0;
        }
        self.in_basis[self.basis[row]] = false;
        self.basis[row] = col;
        self.in_basis[col] = true;
    }

    fn flipped_column(&self, j: usize) -> Vec<f64> {
        if j < self.k {
            (0..self.m).map(|i| self.sign[i] * self.e.get(i, j)).collect()
        } else {
            let mut c = vec![0.0; self.m];
            c[j - self.k] = 1.0;
            c
        }
    }

    /// Basis matrix `B` (row-major) over the flipped system.
    fn basis_matrix(&self) -> Vec<f64> {
        let m = self.m;
        let mut b = vec![0.0; m * m];
        for (p, &j) in self.basis.iter().enumerate() {
            for (i, v) in self.flipped_column(j).into_iter().enumerate() {
                b[i * m + p] = v;
            }
        }
        b
    }

    fn solve_duals(&self, cost: &[f64]) -> Result<Vec<f64>> {
        let m = self.m;
        let b = self.basis_matrix();
        let mut bt = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                bt[j * m + i] = b[i * m + j];
            }
        }
        let mut rhs: Vec<f64> = self.basis.iter().map(|&j| cost[j]).collect();
        if !solve_in_place(&mut bt, &mut rhs, m, self.tol.pivot_tol) {
            return Err(Error::NumericalBreakdown("singular basis"));
        }
        Ok(rhs)
    }

    /// Structural part of the basic solution and the flipped-row duals.
    fn basic_solution(&self, cost: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let m = self.m;
        let mut b = self.basis_matrix();
        let mut xb: Vec<f64> = (0..m).map(|i| self.sign[i] * self.d[i]).collect();
        if !solve_in_place(&mut b, &mut xb, m, self.tol.pivot_tol) {
            return Err(Error::NumericalBreakdown("singular basis"));
        }
        let mut y = vec![0.0; self.k];
        let clamp = self.tol.feas_tol * (1.0 + norm_inf(self.d));
        for (p, &j) in self.basis.iter().enumerate() {
            if j < self.k {
                let v = xb[p];
                y[j] = if v < 0.0 && v > -clamp { 0.0 } else { v };
            }
        }
        let duals = self.solve_duals(cost)?;
        Ok((y, duals))
    }

    fn ray(&self, col: usize) -> Result<Vec<f64>> {
        let m = self.m;
        let mut b = self.basis_matrix();
        let mut z = self.flipped_column(col);
        if !solve_in_place(&mut b, &mut z, m, self.tol.pivot_tol) {
            return Err(Error::NumericalBreakdown("singular basis"));
        }
        let mut ray = vec![0.0; self.k];
        ray[col] = 1.0;
        for (p, &j) in self.basis.iter().enumerate() {
            if j < self.k {
                let v = -z[p];
                ray[j] = if v < 0.0 && v > -self.tol.feas_tol { 0.0 } else { v };
            }
        }
        let scale = norm_inf(&ray);
        for v in &mut ray {
            *v /= scale;
        }
        Ok(ray)
    }
}
