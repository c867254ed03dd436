//! Truncated Taylor series at the origin with complex coefficients.
//!
//! A [`Series`] holds the first `N` coefficients `c_0..c_{N-1}` of an
//! analytic function's expansion at 0. Binary operations truncate to the
//! smaller order. Fractional powers never touch pointwise logarithms:
//! they go through [`Series::log1`]/[`Series::exp0`] on series whose
//! constant term is 1, which pins the branch with value 1 at the origin.

use num_complex::Complex64;
use thiserror::Error;

/// Order used when a caller does not request anything specific.
pub const DEFAULT_ORDER: usize = 256;

/// Hard cap on automatically raised orders.
pub const MAX_ORDER: usize = 8192;

/// Coefficient magnitude treated as numerical overflow.
pub const COEFF_LIMIT: f64 = 1e150;

/// Tolerance below which a divisor's constant term counts as zero.
pub const DIVISOR_TOL: f64 = 1e-14;

/// Tolerance for the unit/zero constant-term preconditions of log1/exp0.
pub const CONSTANT_TOL: f64 = 1e-12;

/// Target truncation tail `r^N` for samples on the circle of radius `r`.
pub const TAIL_TARGET: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("divisor constant term has modulus {0:.3e} < 1e-14")]
    LeadingZeroDivisor(f64),
    #[error("series logarithm needs constant term 1, found {0}")]
    NotUnitConstant(Complex64),
    #[error("series exponential needs constant term 0, found {0}")]
    NotZeroConstant(Complex64),
    #[error("evaluation point has modulus {0:.6} >= 1, outside the unit disk")]
    OutsideDisk(f64),
    #[error("coefficient magnitude {0:.3e} exceeds the 1e150 overflow guard")]
    Overflow(f64),
}

/// Truncated Taylor expansion `c_0 + c_1 z + ... + c_{N-1} z^{N-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    coeffs: Vec<Complex64>,
}

/// Result of evaluating a series inside the disk: the Horner sum together
/// with the crude geometric tail estimate `|c_{N-1}| r^{N-1} / (1-r)`.
#[derive(Debug, Clone, Copy)]
pub struct Evaluation {
    pub value: Complex64,
    pub tail_bound: f64,
}

/// Truncation order that keeps `r^N < 1e-12` on the circle of radius `r`.
///
/// `exact` is false when the required order exceeds [`MAX_ORDER`]; callers
/// treat that as the indeterminate escape hatch rather than trusting the
/// truncated tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RadiusOrder {
    pub order: usize,
    pub exact: bool,
}

/// Order needed so the truncation tail at radius `r` stays below 1e-12.
pub fn order_for_radius(r: f64) -> RadiusOrder {
    assert!(r > 0.0 && r < 1.0, "radius must lie in (0,1)");
    let needed = (TAIL_TARGET.ln() / r.ln()).ceil() as usize;
    let order = needed.max(DEFAULT_ORDER);
    if order > MAX_ORDER {
        RadiusOrder { order: MAX_ORDER, exact: false }
    } else {
        RadiusOrder { order, exact: true }
    }
}

impl Series {
    /// Builds a series from explicit coefficients. Needs at least two
    /// coefficients, all finite.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(coeffs.len() >= 2, "series order must be >= 2");
        assert!(
            coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite()),
            "series coefficients must be finite"
        );
        Series { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Series::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The zero series at the given order.
    pub fn zero(order: usize) -> Self {
        Series::new(vec![Complex64::new(0.0, 0.0); order.max(2)])
    }

    /// The constant series 1.
    pub fn one(order: usize) -> Self {
        let mut s = Series::zero(order);
        s.coeffs[0] = Complex64::new(1.0, 0.0);
        s
    }

    /// The monomial `z^k`.
    pub fn monomial(k: usize, order: usize) -> Self {
        let mut s = Series::zero(order.max(k + 1));
        s.coeffs[k] = Complex64::new(1.0, 0.0);
        s
    }

    /// Number of retained coefficients.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of `z^k`; zero past the truncation order.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Copy truncated (or zero-padded) to exactly `order` coefficients.
    pub fn resized(&self, order: usize) -> Series {
        let mut v = self.coeffs.clone();
        v.resize(order.max(2), Complex64::new(0.0, 0.0));
        Series { coeffs: v }
    }

    /// True when `c_0 = 0` and `c_1 = 1` up to [`CONSTANT_TOL`].
    pub fn is_normalized(&self) -> bool {
        self.coeff(0).norm() <= CONSTANT_TOL && (self.coeff(1) - 1.0).norm() <= CONSTANT_TOL
    }

    /// Largest coefficient modulus.
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Constructor for internal recurrences whose output may have blown up;
    /// reports [`SeriesError::Overflow`] instead of asserting finiteness.
    fn guarded(coeffs: Vec<Complex64>) -> Result<Series, SeriesError> {
        let m = coeffs
            .iter()
            .map(|c| c.norm())
            .fold(0.0, |a: f64, b| if b.is_finite() { a.max(b) } else { f64::INFINITY });
        if !m.is_finite() || m > COEFF_LIMIT {
            return Err(SeriesError::Overflow(m));
        }
        Ok(Series { coeffs })
    }

    pub fn add(&self, other: &Series) -> Series {
        let n = self.order().min(other.order());
        Series::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Series) -> Series {
        let n = self.order().min(other.order());
        Series::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn scale(&self, t: Complex64) -> Series {
        Series::new(self.coeffs.iter().map(|&c| c * t).collect())
    }

    pub fn scale_real(&self, t: f64) -> Series {
        self.scale(Complex64::new(t, 0.0))
    }

    /// Cauchy product truncated to the smaller order.
    pub fn mul(&self, other: &Series) -> Series {
        let n = self.order().min(other.order());
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let a = self.coeffs[i];
            if a.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..n - i {
                out[i + j] += a * other.coeffs[j];
            }
        }
        Series::new(out)
    }

    /// Quotient `q` with `q * other = self` to truncation.
    ///
    /// `c_k = (a_k - Σ_{j=1..k} b_j c_{k-j}) / b_0`
    pub fn div(&self, other: &Series) -> Result<Series, SeriesError> {
        let b0 = other.coeff(0);
        if b0.norm() < DIVISOR_TOL {
            return Err(SeriesError::LeadingZeroDivisor(b0.norm()));
        }
        let n = self.order().min(other.order());
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for k in 0..n {
            let mut acc = self.coeff(k);
            for j in 1..=k {
                acc -= other.coeff(j) * out[k - j];
            }
            out[k] = acc / b0;
        }
        Series::guarded(out)
    }

    /// Termwise derivative; the order drops by one.
    pub fn differentiate(&self) -> Series {
        let n = self.order();
        let mut out = Vec::with_capacity(n - 1);
        for k in 1..n {
            out.push(self.coeffs[k] * k as f64);
        }
        if out.len() < 2 {
            out.resize(2, Complex64::new(0.0, 0.0));
        }
        Series::new(out)
    }

    /// Termwise antiderivative vanishing at 0; the order grows by one.
    pub fn antidifferentiate(&self) -> Series {
        let n = self.order();
        let mut out = Vec::with_capacity(n + 1);
        out.push(Complex64::new(0.0, 0.0));
        for k in 0..n {
            out.push(self.coeffs[k] / (k + 1) as f64);
        }
        Series::new(out)
    }

    /// Series logarithm with value 0 at the origin. Requires `c_0 = 1`.
    ///
    /// `L_k = a_k - (1/k) Σ_{j=1..k-1} j L_j a_{k-j}`
    pub fn log1(&self) -> Result<Series, SeriesError> {
        let a0 = self.coeff(0);
        if (a0 - 1.0).norm() > CONSTANT_TOL {
            return Err(SeriesError::NotUnitConstant(a0));
        }
        let n = self.order();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for k in 1..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..k {
                acc += out[j] * self.coeff(k - j) * j as f64;
            }
            out[k] = self.coeff(k) - acc / k as f64;
        }
        Series::guarded(out)
    }

    /// Series exponential with value 1 at the origin. Requires `c_0 = 0`.
    ///
    /// `E_k = (1/k) Σ_{j=1..k} j a_j E_{k-j}`
    pub fn exp0(&self) -> Result<Series, SeriesError> {
        let a0 = self.coeff(0);
        if a0.norm() > CONSTANT_TOL {
            return Err(SeriesError::NotZeroConstant(a0));
        }
        let n = self.order();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        out[0] = Complex64::new(1.0, 0.0);
        for k in 1..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.coeff(j) * out[k - j] * j as f64;
            }
            out[k] = acc / k as f64;
        }
        Series::guarded(out)
    }

    /// Real power `self^t = exp0(t · log1(self))`. Requires `c_0 = 1`; the
    /// result again has constant term 1, which is the branch normalization
    /// every operator in this crate relies on.
    pub fn pow_real(&self, t: f64) -> Result<Series, SeriesError> {
        let a0 = self.coeff(0);
        if (a0 - 1.0).norm() > CONSTANT_TOL {
            return Err(SeriesError::NotUnitConstant(a0));
        }
        if t == 0.0 {
            return Ok(Series::one(self.order()));
        }
        self.log1()?.scale_real(t).exp0()
    }

    /// Horner evaluation inside the open unit disk.
    pub fn evaluate(&self, z: Complex64) -> Result<Evaluation, SeriesError> {
        let r = z.norm();
        if r >= 1.0 {
            return Err(SeriesError::OutsideDisk(r));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        let n = self.order();
        let tail_bound = self.coeffs[n - 1].norm() * r.powi(n as i32 - 1) / (1.0 - r);
        Ok(Evaluation { value: acc, tail_bound })
    }
}
