//! Hornich operations and the integral operator families built from them.
//!
//! Series route: [`apply_family`] materializes the transformed function as a
//! truncated series, which is what the algebraic identities between the
//! families are tested on. Pointwise route: [`c_pre_schwarzian`] evaluates
//! `1 + z C''/C'` directly from the closed forms of `f` and `g`,
//!
//! ```text
//! 1 + z C''/C' = α (z f'/f) + β (1 + z g''/g') + (1 - α - β),
//! ```
//!
//! which is branch-free and keeps its accuracy on circles arbitrarily close
//! to the boundary. Membership criteria always consume the pointwise route;
//! the series route exists so the operator relations stay directly testable.

use num_complex::Complex64;
use thiserror::Error;

use crate::catalog::{AnalyticFunction, CatalogError};
use crate::powerseries::{Series, SeriesError};

/// Modulus below which `f(z)` or `g'(z)` counts as a singular point.
pub const SINGULAR_TOL: f64 = 1e-13;

#[derive(Debug, Error)]
pub enum OperatorError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("singular point at z = {z}: |{what}| < 1e-13")]
    SingularPoint { z: Complex64, what: &'static str },
    #[error("series of `{0}` is not normalized (f(0)=0, f'(0)=1)")]
    NotNormalized(String),
}

/// Operator family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `(f ⊕ g)(z) = ∫_0^z f'(w) g'(w) dw`
    HornichSum,
    /// `(t ⋆ f)(z) = ∫_0^z (f'(w))^t dw`, exponent taken from `alpha`
    HornichScale,
    /// `J[f](z) = ∫_0^z f(w)/w dw`
    Alexander,
    /// `I[f,g](z) = ∫_0^z (f'(w))^α (g'(w))^β dw`
    IFamily,
    /// `J[f,g](z) = ∫_0^z (f(w)/w)^α (g(w)/w)^β dw`
    JFamily,
    /// `C[f,g](z) = ∫_0^z (f(w)/w)^α (g'(w))^β dw`
    CFamily,
}

impl Family {
    pub fn parse(s: &str) -> Option<Family> {
        match s.to_ascii_lowercase().as_str() {
            "hornich-sum" | "sum" => Some(Family::HornichSum),
            "hornich-scale" | "scale" => Some(Family::HornichScale),
            "alexander" => Some(Family::Alexander),
            "i" => Some(Family::IFamily),
            "j" => Some(Family::JFamily),
            "c" => Some(Family::CFamily),
            _ => None,
        }
    }
}

/// Family tag plus the real exponents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorSpec {
    pub family: Family,
    pub alpha: f64,
    pub beta: f64,
}

impl OperatorSpec {
    pub fn new(family: Family, alpha: f64, beta: f64) -> Self {
        assert!(alpha.is_finite() && beta.is_finite(), "exponents must be finite reals");
        OperatorSpec { family, alpha, beta }
    }

    pub fn c(alpha: f64, beta: f64) -> Self {
        Self::new(Family::CFamily, alpha, beta)
    }
}

fn require_normalized(s: &Series, who: &str) -> Result<(), OperatorError> {
    if !s.is_normalized() {
        return Err(OperatorError::NotNormalized(who.into()));
    }
    Ok(())
}

/// `f(z)/z` as a series: drops the vanishing constant coefficient.
fn over_z(s: &Series) -> Result<Series, OperatorError> {
    require_normalized(s, "f/z input")?;
    let n = s.order();
    Ok(Series::new((1..n).map(|k| s.coeff(k)).collect()))
}

/// Hornich sum `(f ⊕ g) = ∫ f' g'`.
pub fn hornich_sum(f: &Series, g: &Series) -> Series {
    f.differentiate().mul(&g.differentiate()).antidifferentiate()
}

/// Hornich scalar multiple `(t ⋆ g) = ∫ (g')^t`.
pub fn hornich_scale(t: f64, g: &Series) -> Result<Series, OperatorError> {
    Ok(g.differentiate().pow_real(t)?.antidifferentiate())
}

/// Materializes the family's integral as a truncated series of order `n`.
pub fn apply_family(
    spec: &OperatorSpec,
    f: &AnalyticFunction,
    g: &AnalyticFunction,
    n: usize,
) -> Result<Series, OperatorError> {
    let work = n.max(4);
    let fs = f.series(work)?;
    let gs = g.series(work)?;
    let result = match spec.family {
        Family::HornichSum => hornich_sum(&fs, &gs),
        Family::HornichScale => hornich_scale(spec.alpha, &fs)?,
        Family::Alexander => over_z(&fs)?.antidifferentiate(),
        Family::IFamily => {
            let integrand = fs
                .differentiate()
                .pow_real(spec.alpha)?
                .mul(&gs.differentiate().pow_real(spec.beta)?);
            integrand.antidifferentiate()
        }
        Family::JFamily => {
            let integrand = over_z(&fs)?
                .pow_real(spec.alpha)?
                .mul(&over_z(&gs)?.pow_real(spec.beta)?);
            integrand.antidifferentiate()
        }
        Family::CFamily => {
            let integrand = over_z(&fs)?
                .pow_real(spec.alpha)?
                .mul(&gs.differentiate().pow_real(spec.beta)?);
            integrand.antidifferentiate()
        }
    };
    Ok(result.resized(n))
}

/// `z f'(z)/f(z)` from the closed forms, with the normalization limit 1 at 0.
pub fn starlike_quotient(f: &AnalyticFunction, z: Complex64) -> Result<Complex64, OperatorError> {
    if z.norm() == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let v0 = f.eval0(z)?;
    if v0.norm() < SINGULAR_TOL {
        return Err(OperatorError::SingularPoint { z, what: "f(z)" });
    }
    Ok(z * f.eval1(z)? / v0)
}

/// `1 + z C''/C'` for `C[f,g]` with exponents `(alpha, beta)`, evaluated
/// pointwise from closed forms. Returns 1 at the origin.
pub fn c_pre_schwarzian(
    alpha: f64,
    beta: f64,
    f: &AnalyticFunction,
    g: &AnalyticFunction,
    z: Complex64,
) -> Result<Complex64, OperatorError> {
    if z.norm() == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let sf = starlike_quotient(f, z)?;
    let gp = g.eval1(z)?;
    if gp.norm() < SINGULAR_TOL {
        return Err(OperatorError::SingularPoint { z, what: "g'(z)" });
    }
    let pg = 1.0 + z * g.log_deriv_of_derivative(z);
    Ok(alpha * sf + beta * pg + (1.0 - alpha - beta))
}

/// Pointwise `1 + z F''/F'` of the transformed function for any family,
/// obtained by log-differentiating the integrand.
pub fn family_pre_schwarzian(
    spec: &OperatorSpec,
    f: &AnalyticFunction,
    g: &AnalyticFunction,
    z: Complex64,
) -> Result<Complex64, OperatorError> {
    if z.norm() == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let pre = |h: &AnalyticFunction| -> Result<Complex64, OperatorError> {
        Ok(1.0 + z * h.log_deriv_of_derivative(z))
    };
    let (alpha, beta) = (spec.alpha, spec.beta);
    match spec.family {
        Family::HornichSum => Ok(pre(f)? + pre(g)? - 1.0),
        Family::HornichScale => Ok(alpha * pre(f)? + (1.0 - alpha)),
        Family::Alexander => starlike_quotient(f, z),
        Family::IFamily => Ok(alpha * pre(f)? + beta * pre(g)? + (1.0 - alpha - beta)),
        Family::JFamily => {
            let sf = starlike_quotient(f, z)?;
            let sg = starlike_quotient(g, z)?;
            Ok(alpha * sf + beta * sg + (1.0 - alpha - beta))
        }
        Family::CFamily => c_pre_schwarzian(alpha, beta, f, g, z),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_diff(a: &Series, b: &Series) -> f64 {
        let n = a.order().min(b.order());
        (0..n).map(|k| (a.coeff(k) - b.coeff(k)).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn hornich_sum_identity_element() {
        let f = catalog::koebe().series(32).unwrap();
        let id = catalog::identity().series(32).unwrap();
        assert!(max_diff(&hornich_sum(&f, &id), &f) < 1e-12);
    }

    #[test]
    fn hornich_sum_of_cayley_pair_is_b_minus_four() {
        let cay = catalog::cayley().series(48).unwrap();
        let sum = hornich_sum(&cay, &cay);
        let b4 = catalog::b(-4.0).unwrap().series(48).unwrap();
        assert!(max_diff(&sum, &b4) < 1e-10);
    }

    #[test]
    fn hornich_sum_halfplane_cayley_integrand() {
        // (f ⊕ g)' = (1-z)^{-2} (1+z)^{-2} = (1-z^2)^{-2}; check at samples.
        let hp = catalog::halfplane().series(64).unwrap();
        let cay = catalog::cayley().series(64).unwrap();
        let sum = hornich_sum(&hp, &cay);
        let deriv = sum.differentiate();
        for &x in &[0.1, -0.3, 0.55] {
            let z = c(x, 0.2);
            let expect = ((c(1.0, 0.0) - z * z) * (c(1.0, 0.0) - z * z)).powf(-1.0);
            let got = deriv.evaluate(z).unwrap();
            assert!((got.value - expect).norm() < 1e-9, "at {z}");
        }
    }

    #[test]
    fn hornich_scale_identities() {
        let g = catalog::halfplane().series(32).unwrap();
        assert!(max_diff(&hornich_scale(1.0, &g).unwrap(), &g) < 1e-12);

        let id = catalog::identity().series(32).unwrap();
        assert!(max_diff(&hornich_scale(0.0, &g).unwrap(), &id) < 1e-12);
    }

    #[test]
    fn hornich_scale_minus_half_of_halfplane_is_ozaki_plus() {
        let g = catalog::halfplane().series(16).unwrap();
        let scaled = hornich_scale(-0.5, &g).unwrap();
        let oz = catalog::ozaki_plus().series(16).unwrap();
        assert!(max_diff(&scaled, &oz) < 1e-12);
    }

    #[test]
    fn c_family_with_zero_exponents_is_identity() {
        let spec = OperatorSpec::c(0.0, 0.0);
        let s = apply_family(&spec, &catalog::cayley(), &catalog::cayley(), 16).unwrap();
        let id = catalog::identity().series(16).unwrap();
        assert!(max_diff(&s, &id) < 1e-13);
    }

    #[test]
    fn c_family_on_identity_cayley_matches_binomial_integral() {
        // C[identity, cayley] = ∫ (1+t)^{-2β} dt = b(-2β).
        for &(alpha, beta) in &[(0.7, 0.4), (-1.2, 1.1), (2.0, -0.6)] {
            let spec = OperatorSpec::c(alpha, beta);
            let s = apply_family(&spec, &catalog::identity(), &catalog::cayley(), 48).unwrap();
            let expect = catalog::b(-2.0 * beta).unwrap().series(48).unwrap();
            assert!(max_diff(&s, &expect) < 1e-10, "alpha={alpha}, beta={beta}");
        }
    }

    #[test]
    fn j_family_alexander_of_koebe_is_halfplane() {
        let spec = OperatorSpec::new(Family::JFamily, 1.0, 0.0);
        let s = apply_family(&spec, &catalog::koebe(), &catalog::identity(), 32).unwrap();
        let hp = catalog::halfplane().series(32).unwrap();
        assert!(max_diff(&s, &hp) < 1e-10);

        let alex = apply_family(
            &OperatorSpec::new(Family::Alexander, 0.0, 0.0),
            &catalog::koebe(),
            &catalog::identity(),
            32,
        )
        .unwrap();
        assert!(max_diff(&alex, &hp) < 1e-10);
    }

    #[test]
    fn operator_relations_to_the_identity_slot() {
        // C[f, z] ≡ J[f, z] ≡ J with beta 0; C[z, g] ≡ I[z, g] ≡ I with alpha 0.
        let f = catalog::ozaki_minus();
        let g = catalog::cayley();
        let id = catalog::identity();
        let (alpha, beta) = (1.3, -0.8);

        let c_fid = apply_family(&OperatorSpec::c(alpha, beta), &f, &id, 40).unwrap();
        let j_fid = apply_family(&OperatorSpec::new(Family::JFamily, alpha, beta), &f, &id, 40).unwrap();
        let j_f_any = apply_family(&OperatorSpec::new(Family::JFamily, alpha, 0.0), &f, &g, 40).unwrap();
        assert!(max_diff(&c_fid, &j_fid) < 1e-10);
        assert!(max_diff(&c_fid, &j_f_any) < 1e-10);

        let c_idg = apply_family(&OperatorSpec::c(alpha, beta), &id, &g, 40).unwrap();
        let i_idg = apply_family(&OperatorSpec::new(Family::IFamily, alpha, beta), &id, &g, 40).unwrap();
        let i_any = apply_family(&OperatorSpec::new(Family::IFamily, 0.0, beta), &f, &g, 40).unwrap();
        assert!(max_diff(&c_idg, &i_idg) < 1e-10);
        assert!(max_diff(&c_idg, &i_any) < 1e-10);
    }

    #[test]
    fn c_family_is_hornich_sum_of_j_and_i_parts() {
        let f = catalog::halfplane();
        let g = catalog::ozaki_plus();
        let (alpha, beta) = (0.9, 1.4);
        let whole = apply_family(&OperatorSpec::c(alpha, beta), &f, &g, 40).unwrap();
        let j_part = apply_family(&OperatorSpec::new(Family::JFamily, alpha, 0.0), &f, &g, 41).unwrap();
        let i_part = apply_family(&OperatorSpec::new(Family::IFamily, 0.0, beta), &f, &g, 41).unwrap();
        let sum = hornich_sum(&j_part, &i_part);
        assert!(max_diff(&whole, &sum) < 1e-10);
    }

    #[test]
    fn pre_schwarzian_normalization_limit() {
        let v = c_pre_schwarzian(2.3, -1.7, &catalog::cayley(), &catalog::koebe(), c(0.0, 0.0)).unwrap();
        assert_eq!(v, c(1.0, 0.0));
    }

    #[test]
    fn pre_schwarzian_closed_form_value() {
        // With f = ozaki_plus, g = cayley the quantity is
        // (2-(1+α)z)/(2-z) - 2βz/(1+z); at α=1, β=1/2, z=0.8 it equals -1/9.
        let v = c_pre_schwarzian(1.0, 0.5, &catalog::ozaki_plus(), &catalog::cayley(), c(0.8, 0.0)).unwrap();
        assert_abs_diff_eq!(v.re, -1.0 / 9.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn pre_schwarzian_matches_series_route() {
        let f = catalog::ozaki_plus();
        let g = catalog::cayley();
        let z = c(0.3, 0.0);
        for &(alpha, beta) in &[(0.5, 0.5), (-1.5, 2.0), (1.9, -1.1)] {
            let series = apply_family(&OperatorSpec::c(alpha, beta), &f, &g, 128).unwrap();
            let d1 = series.differentiate();
            let d2 = d1.differentiate();
            let from_series = 1.0 + z * d2.evaluate(z).unwrap().value / d1.evaluate(z).unwrap().value;
            let pointwise = c_pre_schwarzian(alpha, beta, &f, &g, z).unwrap();
            assert!((from_series - pointwise).norm() < 1e-8, "alpha={alpha} beta={beta}");
        }
    }

    #[test]
    fn singular_point_is_flagged() {
        // b(6) vanishes inside the disk near z = e^{2πi/7} - 1; the f-slot
        // evaluation must flag it instead of returning garbage.
        let bad = catalog::b(6.0).unwrap();
        let root = c((2.0 * std::f64::consts::PI / 7.0).cos() - 1.0, (2.0 * std::f64::consts::PI / 7.0).sin());
        let hit = starlike_quotient(&bad, root);
        assert!(matches!(hit, Err(OperatorError::SingularPoint { .. })));
    }

    #[test]
    fn segment_combination_is_affine_in_the_exponents() {
        // Pre-Schwarzian at a segment point equals the affine combination of
        // the endpoint values, pointwise.
        let f = catalog::halfplane();
        let g = catalog::cayley();
        let (a1, b1) = (0.5, 0.25);
        let (a2, b2) = (1.5, -0.75);
        let z = c(0.44, -0.61);
        let h1 = c_pre_schwarzian(a1, b1, &f, &g, z).unwrap();
        let h2 = c_pre_schwarzian(a2, b2, &f, &g, z).unwrap();
        for &t in &[0.0, 0.25, 0.5, 1.0] {
            let alpha = t * a1 + (1.0 - t) * a2;
            let beta = t * b1 + (1.0 - t) * b2;
            let h = c_pre_schwarzian(alpha, beta, &f, &g, z).unwrap();
            assert!((h - (t * h1 + (1.0 - t) * h2)).norm() < 1e-10);
        }
    }
}
