//! Named analytic test functions on the unit disk.
//!
//! Every entry is normalized (`f(0) = 0`, `f'(0) = 1`) and carries closed-form
//! evaluators for `f`, `f'`, `f''` plus a Taylor coefficient generator. The
//! whole catalog lives inside one family: the derivative of each entry is
//!
//! ```text
//! f'(z) = (1+z)^p (1-z)^q
//! ```
//!
//! for real exponents `p`, `q`. Both `1+z` and `1-z` stay in the right
//! half-plane on the disk, so principal powers realize the analytic branch
//! with `f'(0) = 1` (a winding audit backs this up, see
//! [`winding_on_circle`]).  Hornich scaling `t ⋆ f` maps `(p,q)` to
//! `(tp, tq)`, which is why the `kscale`/`gscale` entries are exact closed
//! forms rather than truncated series.

use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

use crate::powerseries::{Series, SeriesError};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("unknown catalog function `{0}`")]
    UnknownName(String),
    #[error("bad parameter for `{name}`: {message}")]
    BadParam { name: String, message: String },
    #[error("`{name}` is missing required parameter `{param}`")]
    MissingParam { name: String, param: &'static str },
    #[error("`{name}` does not accept parameter `{param}`")]
    UnexpectedParam { name: String, param: String },
    #[error("evaluation point has modulus {0:.6} >= 1, outside the unit disk")]
    OutsideDisk(f64),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Class membership tags, with the provenance of the claim.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClassTag {
    /// Convex: `Re(1 + z f''/f') > 0` on the disk.
    Convex,
    /// Convex of order λ: `Re(1 + z f''/f') > λ`.
    ConvexOrder(f64),
    /// Ozaki class of parameter γ: `Re(1 + z f''/f') < 1 + γ/2`.
    Ozaki(f64),
    /// Close-to-convex (Kaplan arc criterion).
    CloseToConvex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Claimed by the source theorems.
    Claimed,
    /// Derived here from classical facts.
    Derived,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tag {
    pub class: ClassTag,
    pub provenance: Provenance,
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassTag::Convex => write!(f, "K"),
            ClassTag::ConvexOrder(l) => write!(f, "K({l})"),
            ClassTag::Ozaki(g) => write!(f, "G({g})"),
            ClassTag::CloseToConvex => write!(f, "C"),
        }
    }
}

/// Exponents of `f'(z) = (1+z)^plus (1-z)^minus`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivExponents {
    pub plus: f64,
    pub minus: f64,
}

/// A catalog entry: normalized analytic function with closed-form
/// evaluators and class tags.
#[derive(Debug, Clone)]
pub struct AnalyticFunction {
    name: String,
    deriv: DerivExponents,
    tags: Vec<Tag>,
}

fn fmt_param(x: f64) -> String {
    format!("{x}")
}

impl AnalyticFunction {
    fn from_parts(name: String, plus: f64, minus: f64, tags: Vec<Tag>) -> Self {
        assert!(plus.is_finite() && minus.is_finite());
        AnalyticFunction { name, deriv: DerivExponents { plus, minus }, tags }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn tags(&self) -> &[Tag] {
        &self.tags
    }

    pub fn deriv_exponents(&self) -> DerivExponents {
        self.deriv
    }

    pub fn is_tagged_convex(&self) -> bool {
        self.tags.iter().any(|t| {
            matches!(t.class, ClassTag::Convex) || matches!(t.class, ClassTag::ConvexOrder(l) if l >= 0.0)
        })
    }

    fn check_disk(z: Complex64) -> Result<(), CatalogError> {
        let r = z.norm();
        if r >= 1.0 {
            return Err(CatalogError::OutsideDisk(r));
        }
        Ok(())
    }

    /// `f(z)`.
    pub fn eval0(&self, z: Complex64) -> Result<Complex64, CatalogError> {
        Self::check_disk(z)?;
        let DerivExponents { plus: p, minus: q } = self.deriv;
        let one = Complex64::new(1.0, 0.0);
        let value = if p == 0.0 && q == 0.0 {
            z
        } else if q == 0.0 {
            // ∫ (1+t)^p dt
            if p == -1.0 {
                (one + z).ln()
            } else {
                ((one + z).powf(p + 1.0) - 1.0) / (p + 1.0)
            }
        } else if p == 0.0 {
            // ∫ (1-t)^q dt
            if q == -1.0 {
                -((one - z).ln())
            } else {
                (1.0 - (one - z).powf(q + 1.0)) / (q + 1.0)
            }
        } else if p == 1.0 && q == -3.0 {
            // ∫ (1+t)(1-t)^{-3} dt = z/(1-z)^2
            z / ((one - z) * (one - z))
        } else {
            self.integrate_derivative(z)
        };
        Ok(value)
    }

    /// `f'(z) = (1+z)^p (1-z)^q` through principal powers.
    pub fn eval1(&self, z: Complex64) -> Result<Complex64, CatalogError> {
        Self::check_disk(z)?;
        Ok(self.deriv_at(z))
    }

    fn deriv_at(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let DerivExponents { plus: p, minus: q } = self.deriv;
        let mut v = one;
        if p != 0.0 {
            v *= (one + z).powf(p);
        }
        if q != 0.0 {
            v *= (one - z).powf(q);
        }
        v
    }

    /// `f''(z) = f'(z) · (p/(1+z) - q/(1-z))`.
    pub fn eval2(&self, z: Complex64) -> Result<Complex64, CatalogError> {
        Self::check_disk(z)?;
        Ok(self.deriv_at(z) * self.log_deriv_of_derivative(z))
    }

    /// `f''/f' = p/(1+z) - q/(1-z)`, rational and branch-free.
    pub fn log_deriv_of_derivative(&self, z: Complex64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let DerivExponents { plus: p, minus: q } = self.deriv;
        p / (one + z) - q / (one - z)
    }

    /// `1 + z f''/f'`, the quantity every membership criterion samples.
    pub fn pre_schwarzian(&self, z: Complex64) -> Result<Complex64, CatalogError> {
        Self::check_disk(z)?;
        Ok(1.0 + z * self.log_deriv_of_derivative(z))
    }

    /// `(f(z), f'(z), f''(z))` from the closed forms.
    pub fn eval012(&self, z: Complex64) -> Result<(Complex64, Complex64, Complex64), CatalogError> {
        Ok((self.eval0(z)?, self.eval1(z)?, self.eval2(z)?))
    }

    /// First `n` Taylor coefficients, generated through the series substrate:
    /// `antidifferentiate(pow_real(1+z, p) · pow_real(1-z, q))`.
    pub fn series(&self, n: usize) -> Result<Series, CatalogError> {
        assert!(n >= 2, "coefficient count must be >= 2");
        let work = n.max(3) - 1;
        let one_plus = Series::new({
            let mut v = vec![Complex64::new(0.0, 0.0); work];
            v[0] = Complex64::new(1.0, 0.0);
            v[1] = Complex64::new(1.0, 0.0);
            v
        });
        let one_minus = Series::new({
            let mut v = vec![Complex64::new(0.0, 0.0); work];
            v[0] = Complex64::new(1.0, 0.0);
            v[1] = Complex64::new(-1.0, 0.0);
            v
        });
        let deriv = one_plus
            .pow_real(self.deriv.plus)?
            .mul(&one_minus.pow_real(self.deriv.minus)?);
        Ok(deriv.antidifferentiate().resized(n))
    }

    /// `f(z) = z ∫_0^1 f'(tz) dt` by adaptive Simpson quadrature. Fallback
    /// for exponent pairs without a registered closed form.
    fn integrate_derivative(&self, z: Complex64) -> Complex64 {
        let f = |t: f64| self.deriv_at(z * t);
        z * adaptive_simpson(&f, 0.0, 1.0, 5e-14, 30)
    }
}

fn adaptive_simpson(
    f: &impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    tol: f64,
    depth: usize,
) -> Complex64 {
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: usize,
) -> Complex64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.norm() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Winding number of `w(θ) = g(r e^{iθ})` around 0 over one full circle,
/// from unwrapped argument increments. Steps whose argument jump exceeds
/// π/2 are bisected, so fast phase swings near the boundary cannot alias.
/// Zero for every catalog derivative, which is the audit behind using
/// principal powers in [`AnalyticFunction::eval1`].
pub fn winding_on_circle(g: &dyn Fn(Complex64) -> Complex64, r: f64, m: usize) -> i32 {
    assert!(r > 0.0 && r < 1.0 && m >= 8);
    fn arg_step(
        g: &dyn Fn(Complex64) -> Complex64,
        r: f64,
        t0: f64,
        a0: f64,
        t1: f64,
        a1: f64,
        depth: usize,
    ) -> f64 {
        let mut d = a1 - a0;
        while d > std::f64::consts::PI {
            d -= 2.0 * std::f64::consts::PI;
        }
        while d < -std::f64::consts::PI {
            d += 2.0 * std::f64::consts::PI;
        }
        if d.abs() <= std::f64::consts::FRAC_PI_2 || depth == 0 {
            return d;
        }
        let tm = 0.5 * (t0 + t1);
        let am = g(Complex64::from_polar(r, tm)).arg();
        arg_step(g, r, t0, a0, tm, am, depth - 1) + arg_step(g, r, tm, am, t1, a1, depth - 1)
    }

    let mut total = 0.0;
    let mut prev_t = 0.0;
    let mut prev_a = g(Complex64::new(r, 0.0)).arg();
    for j in 1..=m {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
        let a = g(Complex64::from_polar(r, theta)).arg();
        total += arg_step(g, r, prev_t, prev_a, theta, a, 40);
        prev_t = theta;
        prev_a = a;
    }
    (total / (2.0 * std::f64::consts::PI)).round() as i32
}

fn tag(class: ClassTag, provenance: Provenance) -> Tag {
    Tag { class, provenance }
}

/// `f(z) = z`.
pub fn identity() -> AnalyticFunction {
    AnalyticFunction::from_parts(
        "identity".into(),
        0.0,
        0.0,
        vec![
            tag(ClassTag::Convex, Provenance::Derived),
            tag(ClassTag::Ozaki(1.0), Provenance::Claimed),
            tag(ClassTag::CloseToConvex, Provenance::Derived),
        ],
    )
}

/// `f(z) = z/(1+z)`, convex onto a half-plane.
pub fn cayley() -> AnalyticFunction {
    AnalyticFunction::from_parts(
        "cayley".into(),
        -2.0,
        0.0,
        vec![
            tag(ClassTag::Convex, Provenance::Claimed),
            tag(ClassTag::CloseToConvex, Provenance::Derived),
        ],
    )
}

/// `f(z) = z/(1-z)`, convex onto a half-plane.
pub fn halfplane() -> AnalyticFunction {
    AnalyticFunction::from_parts(
        "halfplane".into(),
        0.0,
        -2.0,
        vec![
            tag(ClassTag::Convex, Provenance::Derived),
            tag(ClassTag::CloseToConvex, Provenance::Derived),
        ],
    )
}

/// `f(z) = z/(1-z)^2`, univalent but convex only up to radius 2-√3.
pub fn koebe() -> AnalyticFunction {
    AnalyticFunction::from_parts(
        "koebe".into(),
        1.0,
        -3.0,
        vec![tag(ClassTag::CloseToConvex, Provenance::Derived)],
    )
}

/// `b(α)(z) = ∫_0^z (1+t)^α dt`. Convex exactly for -2 ≤ α ≤ 0 and
/// close-to-convex exactly for -3 ≤ α ≤ 1.
pub fn b(alpha: f64) -> Result<AnalyticFunction, CatalogError> {
    if !alpha.is_finite() {
        return Err(CatalogError::BadParam { name: "b".into(), message: "alpha must be finite".into() });
    }
    let mut tags = Vec::new();
    if (-2.0..=0.0).contains(&alpha) {
        tags.push(tag(ClassTag::Convex, Provenance::Claimed));
    }
    if (-3.0..=1.0).contains(&alpha) {
        tags.push(tag(ClassTag::CloseToConvex, Provenance::Claimed));
    }
    Ok(AnalyticFunction::from_parts(
        format!("b(alpha={})", fmt_param(alpha)),
        alpha,
        0.0,
        tags,
    ))
}

/// `f(z) = [1-(1-z)^2]/2 = z - z^2/2`, in the Ozaki class G.
pub fn ozaki_plus() -> AnalyticFunction {
    AnalyticFunction::from_parts(
        "ozaki_plus".into(),
        0.0,
        1.0,
        vec![tag(ClassTag::Ozaki(1.0), Provenance::Claimed)],
    )
}

/// `f(z) = [(1+z)^2-1]/2 = z + z^2/2`, in the Ozaki class G.
pub fn ozaki_minus() -> AnalyticFunction {
    AnalyticFunction::from_parts(
        "ozaki_minus".into(),
        1.0,
        0.0,
        vec![
            tag(ClassTag::Ozaki(1.0), Provenance::Claimed),
            tag(ClassTag::CloseToConvex, Provenance::Claimed),
        ],
    )
}

/// `(1-λ) ⋆ base` for a convex base: produces a member of K(λ).
/// In exponent form the scaling is exact: `(p,q) -> ((1-λ)p, (1-λ)q)`.
pub fn kscale(lambda: f64, base: &AnalyticFunction) -> Result<AnalyticFunction, CatalogError> {
    if !(lambda.is_finite() && lambda < 1.0) {
        return Err(CatalogError::BadParam {
            name: "kscale".into(),
            message: format!("lambda must be finite and < 1, got {lambda}"),
        });
    }
    if !base.is_tagged_convex() {
        return Err(CatalogError::BadParam {
            name: "kscale".into(),
            message: format!("base `{}` is not tagged convex", base.name()),
        });
    }
    let t = 1.0 - lambda;
    let mut tags = vec![tag(ClassTag::ConvexOrder(lambda), Provenance::Claimed)];
    if lambda >= 0.0 {
        tags.push(tag(ClassTag::Convex, Provenance::Derived));
    }
    Ok(AnalyticFunction::from_parts(
        format!("kscale(lambda={},base={})", fmt_param(lambda), base.name()),
        t * base.deriv.plus,
        t * base.deriv.minus,
        tags,
    ))
}

/// `(-γ/2) ⋆ base` for a convex base: produces a member of G(γ).
pub fn gscale(gamma: f64, base: &AnalyticFunction) -> Result<AnalyticFunction, CatalogError> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(CatalogError::BadParam {
            name: "gscale".into(),
            message: format!("gamma must be finite and > 0, got {gamma}"),
        });
    }
    if !base.is_tagged_convex() {
        return Err(CatalogError::BadParam {
            name: "gscale".into(),
            message: format!("base `{}` is not tagged convex", base.name()),
        });
    }
    let t = -gamma / 2.0;
    Ok(AnalyticFunction::from_parts(
        format!("gscale(gamma={},base={})", fmt_param(gamma), base.name()),
        t * base.deriv.plus,
        t * base.deriv.minus,
        vec![tag(ClassTag::Ozaki(gamma), Provenance::Claimed)],
    ))
}

/// Parameter value in a catalog call: a number or a nested function.
#[derive(Debug, Clone)]
pub enum Param {
    Real(f64),
    Function(AnalyticFunction),
}

/// Catalog lookup by name plus parameter map.
pub fn get(name: &str, params: &BTreeMap<String, Param>) -> Result<AnalyticFunction, CatalogError> {
    let want_real = |key: &'static str| -> Result<f64, CatalogError> {
        match params.get(key) {
            Some(Param::Real(x)) => Ok(*x),
            Some(Param::Function(_)) => Err(CatalogError::BadParam {
                name: name.into(),
                message: format!("parameter `{key}` must be a number"),
            }),
            None => Err(CatalogError::MissingParam { name: name.into(), param: key }),
        }
    };
    let want_fn = |key: &'static str| -> Result<AnalyticFunction, CatalogError> {
        match params.get(key) {
            Some(Param::Function(f)) => Ok(f.clone()),
            Some(Param::Real(_)) => Err(CatalogError::BadParam {
                name: name.into(),
                message: format!("parameter `{key}` must be a function"),
            }),
            None => Err(CatalogError::MissingParam { name: name.into(), param: key }),
        }
    };
    let expect_keys = |allowed: &[&str]| -> Result<(), CatalogError> {
        for key in params.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(CatalogError::UnexpectedParam { name: name.into(), param: key.clone() });
            }
        }
        Ok(())
    };

    match name {
        "identity" => {
            expect_keys(&[])?;
            Ok(identity())
        }
        "cayley" => {
            expect_keys(&[])?;
            Ok(cayley())
        }
        "halfplane" => {
            expect_keys(&[])?;
            Ok(halfplane())
        }
        "koebe" => {
            expect_keys(&[])?;
            Ok(koebe())
        }
        "b" => {
            expect_keys(&["alpha"])?;
            b(want_real("alpha")?)
        }
        "ozaki_plus" => {
            expect_keys(&[])?;
            Ok(ozaki_plus())
        }
        "ozaki_minus" => {
            expect_keys(&[])?;
            Ok(ozaki_minus())
        }
        "kscale" => {
            expect_keys(&["lambda", "base"])?;
            kscale(want_real("lambda")?, &want_fn("base")?)
        }
        "gscale" => {
            expect_keys(&["gamma", "base"])?;
            gscale(want_real("gamma")?, &want_fn("base")?)
        }
        other => Err(CatalogError::UnknownName(other.into())),
    }
}

/// Parses the function mini-grammar: `name` or `name(key=value,...)`,
/// where a value is a number or a nested function spec.
pub fn parse(input: &str) -> Result<AnalyticFunction, CatalogError> {
    let mut p = Parser { input: input.as_bytes(), pos: 0 };
    p.skip_ws();
    let f = p.parse_spec()?;
    p.skip_ws();
    if p.pos != p.input.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(f)
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> CatalogError {
        CatalogError::Parse { position: self.pos, message: message.into() }
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ') | Some(b'\t')) {
            self.pos += 1;
        }
    }

    fn parse_ident(&mut self) -> Result<String, CatalogError> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.pos == start {
            return Err(self.error("expected identifier"));
        }
        Ok(String::from_utf8_lossy(&self.input[start..self.pos]).into_owned())
    }

    fn parse_number(&mut self) -> Result<f64, CatalogError> {
        let start = self.pos;
        if matches!(self.peek(), Some(b'+') | Some(b'-')) {
            self.pos += 1;
        }
        let mut saw_digit = false;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() || c == b'.' {
                saw_digit |= c.is_ascii_digit();
                self.pos += 1;
            } else if (c == b'e' || c == b'E') && saw_digit {
                self.pos += 1;
                if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
        if !saw_digit {
            self.pos = start;
            return Err(self.error("expected number"));
        }
        let text = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
        text.parse::<f64>().map_err(|_| CatalogError::Parse {
            position: start,
            message: format!("invalid number `{text}`"),
        })
    }

    fn parse_spec(&mut self) -> Result<AnalyticFunction, CatalogError> {
        let name = self.parse_ident()?;
        let mut params = BTreeMap::new();
        self.skip_ws();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            loop {
                self.skip_ws();
                let key_pos = self.pos;
                let key = self.parse_ident()?;
                self.skip_ws();
                if self.peek() != Some(b'=') {
                    return Err(self.error("expected `=` after parameter name"));
                }
                self.pos += 1;
                self.skip_ws();
                let value = if self.peek().map(|c| c.is_ascii_alphabetic() || c == b'_').unwrap_or(false) {
                    Param::Function(self.parse_spec()?)
                } else {
                    Param::Real(self.parse_number()?)
                };
                if params.insert(key.clone(), value).is_some() {
                    return Err(CatalogError::Parse {
                        position: key_pos,
                        message: format!("duplicate parameter `{key}`"),
                    });
                }
                self.skip_ws();
                match self.peek() {
                    Some(b',') => {
                        self.pos += 1;
                    }
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.error("expected `,` or `)`")),
                }
            }
        }
        get(&name, &params)
    }
}
