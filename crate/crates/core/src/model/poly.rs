/// Highest exponent allowed in either index parameter.
pub const MAX_DEGREE: usize = 6;

/// A real polynomial `Σ c_ij u₁^i u₂^j` with `i, j ≤ MAX_DEGREE`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Poly2 {
    coeffs: [[f64; MAX_DEGREE + 1]; MAX_DEGREE + 1],
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(v: f64) -> Self {
        let mut p = Self::zero();
        p.coeffs[0][0] = v;
        p
    }

    /// Builder form of [`Poly2::set`]; panics on degrees above [`MAX_DEGREE`].
    pub fn with(mut self, deg_u1: usize, deg_u2: usize, value: f64) -> Self {
        assert!(self.set(deg_u1, deg_u2, value), "degree above {MAX_DEGREE}");
        self
    }

    /// Sets one coefficient; returns `false` when a degree exceeds [`MAX_DEGREE`].
    pub fn set(&mut self, deg_u1: usize, deg_u2: usize, value: f64) -> bool {
        if deg_u1 > MAX_DEGREE || deg_u2 > MAX_DEGREE {
            return false;
        }
        self.coeffs[deg_u1][deg_u2] = value;
        true
    }

    pub fn coeff(&self, deg_u1: usize, deg_u2: usize) -> f64 {
        self.coeffs[deg_u1][deg_u2]
    }

    /// Non-zero coefficients as `(deg_u1, deg_u2, value)`, ordered by degrees.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.coeffs.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(move |(j, &v)| (i, j, v))
        })
    }

    pub fn uses_second_parameter(&self) -> bool {
        self.terms().any(|(_, j, _)| j > 0)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().flatten().all(|v| v.is_finite())
    }

    /// Nested Horner evaluation.
    pub fn eval(&self, u1: f64, u2: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, row| {
            acc * u1 + row.iter().rev().fold(0.0, |inner, &c| inner * u2 + c)
        })
    }
}
