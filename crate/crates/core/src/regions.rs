//! Sharp (α,β) parameter regions of the operator theorems, and the grid
//! machinery that reproduces them empirically.
//!
//! Each theorem id names a target class (`K`, `Kl` = K(λ), `G`, `Gg` = G(γ),
//! `C`) and the source classes of the pair `(f, g)` the operator
//! `C[f,g](z) = ∫ (f/w)^α (g')^β dw` is applied to. Its region is a finite
//! list of closed half-planes `a·α + b·β ≤ c`, transcribed from the
//! theorem's inequality list.
//!
//! [`scan`] verifies the inclusion direction: every battery pair must pass
//! the target criterion at every grid cell strictly inside the region.
//! [`sharpness_check`] verifies the converse: at every cell strictly
//! outside, at least one witness pair from the theorem's proof must fail.
//! Cells within one grid step of the boundary are exempt; boundary
//! sharpness is probed one-dimensionally along the witness lines instead
//! (see the verification suite).
//!
//! Region variants: [`RegionVariant::Stated`] transcribes the inequality
//! lists as published. [`RegionVariant::Rederived`] rebuilds each region by
//! reducing to the base theorems through the exact scaling identities
//! `K(λ) = (1-λ)⋆K` and `G(γ) = (-γ/2)⋆K`. The two variants coincide for
//! every theorem except three parts (`G.GKl`, `Gg.GKl`, `G.GGg`) whose
//! stated lists disagree with their own β = 0 corollaries; the sharpness
//! scans flag exactly those strips, and the rederived regions reproduce
//! cleanly. See the region-audit tests.

use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;
use thiserror::Error;

use crate::catalog::{self, AnalyticFunction, CatalogError};
use crate::criteria::{
    Criterion, CriteriaError, OperatorEvaluator, Outcome, SamplingProfile, Verdict,
};
use crate::operators::OperatorSpec;

#[derive(Debug, Error)]
pub enum RegionError {
    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("bad grid: {0}")]
    BadGrid(String),
    #[error(transparent)]
    Criteria(#[from] CriteriaError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

/// Closed half-plane `a·α + b·β ≤ c` with its transcription text.
#[derive(Debug, Clone, Serialize)]
pub struct Constraint {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub text: String,
}

/// A theorem's sharp region: intersection of closed half-planes.
#[derive(Debug, Clone, Serialize)]
pub struct Region {
    pub theorem: String,
    /// The inequality chains as stated, one display line per chain.
    pub chains: Vec<String>,
    pub constraints: Vec<Constraint>,
    pub lambda: Option<f64>,
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Containment {
    pub inside: bool,
    /// Signed distance to the boundary: positive inside, negative outside.
    pub distance: f64,
}

impl Region {
    pub fn contains(&self, alpha: f64, beta: f64) -> Containment {
        let mut distance = f64::INFINITY;
        for k in &self.constraints {
            let norm = k.a.hypot(k.b);
            let d = (k.c - k.a * alpha - k.b * beta) / norm;
            distance = distance.min(d);
        }
        Containment { inside: distance >= 0.0, distance }
    }

    /// Intersection with the β = 0 line, as an α interval (closed; either
    /// end may be infinite). Empty intersection returns `None`.
    pub fn beta_zero_interval(&self) -> Option<(f64, f64)> {
        self.line_interval(|k| k.a, |k| k.b)
    }

    /// Intersection with the α = 0 line, as a β interval.
    pub fn alpha_zero_interval(&self) -> Option<(f64, f64)> {
        self.line_interval(|k| k.b, |k| k.a)
    }

    fn line_interval(
        &self,
        on_line: impl Fn(&Constraint) -> f64,
        _off: impl Fn(&Constraint) -> f64,
    ) -> Option<(f64, f64)> {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for k in &self.constraints {
            let coeff = on_line(k);
            if coeff > 0.0 {
                hi = hi.min(k.c / coeff);
            } else if coeff < 0.0 {
                lo = lo.max(k.c / coeff);
            } else if k.c < 0.0 {
                return None;
            }
        }
        (lo <= hi).then_some((lo, hi))
    }

    /// Constraints that are never active on the window grid: removing any
    /// one of them does not change the region within the window. Reported,
    /// not failed; several stated lists carry bounds implied by the rest.
    pub fn inactive_constraints(&self) -> Vec<usize> {
        let step = 0.05_f64;
        let range = 6.0_f64;
        let tol = 1e-9;
        let n = (2.0 * range / step).round() as i32;
        let mut inactive = Vec::new();
        'outer: for (idx, target) in self.constraints.iter().enumerate() {
            for i in 0..=n {
                for j in 0..=n {
                    let alpha = -range + step * i as f64;
                    let beta = -range + step * j as f64;
                    let others_ok = self
                        .constraints
                        .iter()
                        .enumerate()
                        .all(|(l, k)| l == idx || k.a * alpha + k.b * beta <= k.c + tol);
                    if others_ok && target.a * alpha + target.b * beta > target.c + tol {
                        continue 'outer; // the constraint cuts something: active
                    }
                }
            }
            inactive.push(idx);
        }
        inactive
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}:", self.theorem)?;
        for chain in &self.chains {
            writeln!(f, "  {chain}")?;
        }
        Ok(())
    }
}

/// Which transcription of the inequality lists to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RegionVariant {
    /// The inequality lists exactly as stated by the theorems.
    #[default]
    Stated,
    /// Rebuilt through the scaling identities; differs from `Stated` only
    /// for `G.GKl`, `Gg.GKl` and `G.GGg`.
    Rederived,
}

/// Theorem identifiers: `<target>.<pair>` where the pair letters name the
/// classes of `f` and `g` (`K` convex, `Kl` = K(λ), `G` Ozaki, `Gg` = G(γ)).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TheoremId {
    /// f,g ∈ K into K
    KofKK,
    /// f,g ∈ K into C
    CofKK,
    /// f ∈ K, g ∈ K(λ) into K / K(λ) / G(γ) / C
    KofKKl,
    KlofKKl,
    GgofKKl,
    CofKKl,
    /// f ∈ K, g ∈ G(γ) into K / K(λ) / G(γ) / C
    KofKGg,
    KlofKGg,
    GgofKGg,
    CofKGg,
    /// f ∈ G, g ∈ K into K
    KofGK,
    /// f ∈ G, g ∈ K(λ) into K / K(λ) / G / G(γ)
    KofGKl,
    KlofGKl,
    GofGKl,
    GgofGKl,
    /// f ∈ G, g ∈ G(γ) into K / K(λ) / G / G(γ)
    KofGGg,
    KlofGGg,
    GofGGg,
    GgofGGg,
    /// One-exponent corollary lines: J over convex f, I over convex g
    JConvexToK,
    JConvexToC,
    IConvexToK,
    IConvexToC,
    /// J over f ∈ G into K(λ) / G(γ) / G
    JOzakiToKl,
    JOzakiToGg,
    JOzakiToG,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SourceClass {
    Convex,
    ConvexOrder,
    Ozaki,
    OzakiOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OperatorLine {
    /// Full two-exponent operator.
    Both,
    /// J corollaries: exponent pair (α, 0).
    AlphaOnly,
    /// I corollaries: exponent pair (0, β).
    BetaOnly,
}

impl TheoremId {
    pub const ALL: [TheoremId; 26] = [
        TheoremId::KofKK,
        TheoremId::CofKK,
        TheoremId::KofKKl,
        TheoremId::KlofKKl,
        TheoremId::GgofKKl,
        TheoremId::CofKKl,
        TheoremId::KofKGg,
        TheoremId::KlofKGg,
        TheoremId::GgofKGg,
        TheoremId::CofKGg,
        TheoremId::KofGK,
        TheoremId::KofGKl,
        TheoremId::KlofGKl,
        TheoremId::GofGKl,
        TheoremId::GgofGKl,
        TheoremId::KofGGg,
        TheoremId::KlofGGg,
        TheoremId::GofGGg,
        TheoremId::GgofGGg,
        TheoremId::JConvexToK,
        TheoremId::JConvexToC,
        TheoremId::IConvexToK,
        TheoremId::IConvexToC,
        TheoremId::JOzakiToKl,
        TheoremId::JOzakiToGg,
        TheoremId::JOzakiToG,
    ];

    pub fn code(&self) -> &'static str {
        match self {
            TheoremId::KofKK => "K.KK",
            TheoremId::CofKK => "C.KK",
            TheoremId::KofKKl => "K.KKl",
            TheoremId::KlofKKl => "Kl.KKl",
            TheoremId::GgofKKl => "Gg.KKl",
            TheoremId::CofKKl => "C.KKl",
            TheoremId::KofKGg => "K.KGg",
            TheoremId::KlofKGg => "Kl.KGg",
            TheoremId::GgofKGg => "Gg.KGg",
            TheoremId::CofKGg => "C.KGg",
            TheoremId::KofGK => "K.GK",
            TheoremId::KofGKl => "K.GKl",
            TheoremId::KlofGKl => "Kl.GKl",
            TheoremId::GofGKl => "G.GKl",
            TheoremId::GgofGKl => "Gg.GKl",
            TheoremId::KofGGg => "K.GGg",
            TheoremId::KlofGGg => "Kl.GGg",
            TheoremId::GofGGg => "G.GGg",
            TheoremId::GgofGGg => "Gg.GGg",
            TheoremId::JConvexToK => "J.K",
            TheoremId::JConvexToC => "J.C",
            TheoremId::IConvexToK => "I.K",
            TheoremId::IConvexToC => "I.C",
            TheoremId::JOzakiToKl => "JG.Kl",
            TheoremId::JOzakiToGg => "JG.Gg",
            TheoremId::JOzakiToG => "JG.G",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            TheoremId::KofKK => "C[f,g] convex for convex f, g",
            TheoremId::CofKK => "C[f,g] close-to-convex for convex f, g",
            TheoremId::KofKKl => "C[f,g] convex for f in K, g in K(lambda)",
            TheoremId::KlofKKl => "C[f,g] in K(lambda) for f in K, g in K(lambda)",
            TheoremId::GgofKKl => "C[f,g] in G(gamma) for f in K, g in K(lambda)",
            TheoremId::CofKKl => "C[f,g] close-to-convex for f in K, g in K(lambda)",
            TheoremId::KofKGg => "C[f,g] convex for f in K, g in G(gamma)",
            TheoremId::KlofKGg => "C[f,g] in K(lambda) for f in K, g in G(gamma)",
            TheoremId::GgofKGg => "C[f,g] in G(gamma) for f in K, g in G(gamma)",
            TheoremId::CofKGg => "C[f,g] close-to-convex for f in K, g in G(gamma)",
            TheoremId::KofGK => "C[f,g] convex for f in G, g in K",
            TheoremId::KofGKl => "C[f,g] convex for f in G, g in K(lambda)",
            TheoremId::KlofGKl => "C[f,g] in K(lambda) for f in G, g in K(lambda)",
            TheoremId::GofGKl => "C[f,g] in G for f in G, g in K(lambda)",
            TheoremId::GgofGKl => "C[f,g] in G(gamma) for f in G, g in K(lambda)",
            TheoremId::KofGGg => "C[f,g] convex for f in G, g in G(gamma)",
            TheoremId::KlofGGg => "C[f,g] in K(lambda) for f in G, g in G(gamma)",
            TheoremId::GofGGg => "C[f,g] in G for f in G, g in G(gamma)",
            TheoremId::GgofGGg => "C[f,g] in G(gamma) for f in G, g in G(gamma)",
            TheoremId::JConvexToK => "J[f] convex for convex f",
            TheoremId::JConvexToC => "J[f] close-to-convex for convex f",
            TheoremId::IConvexToK => "I[g] convex for convex g",
            TheoremId::IConvexToC => "I[g] close-to-convex for convex g",
            TheoremId::JOzakiToKl => "J[f] in K(lambda) for f in G",
            TheoremId::JOzakiToGg => "J[f] in G(gamma) for f in G",
            TheoremId::JOzakiToG => "J[f] in G for f in G",
        }
    }

    pub fn needs_lambda(&self) -> bool {
        matches!(
            self,
            TheoremId::KofKKl
                | TheoremId::KlofKKl
                | TheoremId::GgofKKl
                | TheoremId::CofKKl
                | TheoremId::KlofKGg
                | TheoremId::KofGKl
                | TheoremId::KlofGKl
                | TheoremId::GofGKl
                | TheoremId::GgofGKl
                | TheoremId::KlofGGg
                | TheoremId::JOzakiToKl
        )
    }

    pub fn needs_gamma(&self) -> bool {
        matches!(
            self,
            TheoremId::GgofKKl
                | TheoremId::KofKGg
                | TheoremId::KlofKGg
                | TheoremId::GgofKGg
                | TheoremId::CofKGg
                | TheoremId::GgofGKl
                | TheoremId::KofGGg
                | TheoremId::KlofGGg
                | TheoremId::GofGGg
                | TheoremId::GgofGGg
                | TheoremId::JOzakiToGg
        )
    }

    fn f_class(&self) -> SourceClass {
        match self {
            TheoremId::KofKK
            | TheoremId::CofKK
            | TheoremId::KofKKl
            | TheoremId::KlofKKl
            | TheoremId::GgofKKl
            | TheoremId::CofKKl
            | TheoremId::KofKGg
            | TheoremId::KlofKGg
            | TheoremId::GgofKGg
            | TheoremId::CofKGg
            | TheoremId::JConvexToK
            | TheoremId::JConvexToC
            | TheoremId::IConvexToK
            | TheoremId::IConvexToC => SourceClass::Convex,
            _ => SourceClass::Ozaki,
        }
    }

    fn g_class(&self) -> SourceClass {
        match self {
            TheoremId::KofKKl
            | TheoremId::KlofKKl
            | TheoremId::GgofKKl
            | TheoremId::CofKKl
            | TheoremId::KofGKl
            | TheoremId::KlofGKl
            | TheoremId::GofGKl
            | TheoremId::GgofGKl => SourceClass::ConvexOrder,
            TheoremId::KofKGg
            | TheoremId::KlofKGg
            | TheoremId::GgofKGg
            | TheoremId::CofKGg
            | TheoremId::KofGGg
            | TheoremId::KlofGGg
            | TheoremId::GofGGg
            | TheoremId::GgofGGg => SourceClass::OzakiOrder,
            _ => SourceClass::Convex,
        }
    }

    fn operator_line(&self) -> OperatorLine {
        match self {
            TheoremId::JConvexToK
            | TheoremId::JConvexToC
            | TheoremId::JOzakiToKl
            | TheoremId::JOzakiToGg
            | TheoremId::JOzakiToG => OperatorLine::AlphaOnly,
            TheoremId::IConvexToK | TheoremId::IConvexToC => OperatorLine::BetaOnly,
            _ => OperatorLine::Both,
        }
    }
}

impl FromStr for TheoremId {
    type Err = RegionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TheoremId::ALL
            .iter()
            .find(|id| id.code().eq_ignore_ascii_case(s))
            .copied()
            .ok_or_else(|| RegionError::UnknownTheorem(s.into()))
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// A theorem id with its class parameters pinned.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoremInstance {
    pub id: TheoremId,
    pub lambda: Option<f64>,
    pub gamma: Option<f64>,
}

impl TheoremInstance {
    pub fn new(id: TheoremId, lambda: Option<f64>, gamma: Option<f64>) -> Result<Self, RegionError> {
        if id.needs_lambda() {
            match lambda {
                Some(l) if l.is_finite() && l < 1.0 => {}
                Some(l) => return Err(RegionError::BadParam(format!("lambda must be < 1, got {l}"))),
                None => return Err(RegionError::BadParam(format!("{} needs lambda", id.code()))),
            }
        }
        if id.needs_gamma() {
            match gamma {
                Some(g) if g.is_finite() && g > 0.0 => {}
                Some(g) => return Err(RegionError::BadParam(format!("gamma must be > 0, got {g}"))),
                None => return Err(RegionError::BadParam(format!("{} needs gamma", id.code()))),
            }
        }
        Ok(TheoremInstance {
            id,
            lambda: if id.needs_lambda() { lambda } else { None },
            gamma: if id.needs_gamma() { gamma } else { None },
        })
    }

    pub fn label(&self) -> String {
        let mut s = self.id.code().to_string();
        let mut params = Vec::new();
        if let Some(l) = self.lambda {
            params.push(format!("lambda={l}"));
        }
        if let Some(g) = self.gamma {
            params.push(format!("gamma={g}"));
        }
        if !params.is_empty() {
            s.push('(');
            s.push_str(&params.join(","));
            s.push(')');
        }
        s
    }

    /// The membership criterion the theorem's target class names.
    pub fn criterion(&self) -> Criterion {
        match self.id {
            TheoremId::KofKK
            | TheoremId::KofKKl
            | TheoremId::KofKGg
            | TheoremId::KofGK
            | TheoremId::KofGKl
            | TheoremId::KofGGg
            | TheoremId::JConvexToK
            | TheoremId::IConvexToK => Criterion::ConvexOrder(0.0),
            TheoremId::KlofKKl
            | TheoremId::KlofKGg
            | TheoremId::KlofGKl
            | TheoremId::KlofGGg
            | TheoremId::JOzakiToKl => Criterion::ConvexOrder(self.lambda.unwrap()),
            TheoremId::GofGKl | TheoremId::GofGGg | TheoremId::JOzakiToG => Criterion::Ozaki(1.0),
            TheoremId::GgofKKl
            | TheoremId::GgofKGg
            | TheoremId::GgofGKl
            | TheoremId::GgofGGg
            | TheoremId::JOzakiToGg => Criterion::Ozaki(self.gamma.unwrap()),
            TheoremId::CofKK
            | TheoremId::CofKKl
            | TheoremId::CofKGg
            | TheoremId::JConvexToC
            | TheoremId::IConvexToC => Criterion::CloseToConvex,
        }
    }

    /// Exponent pair the operator takes at a grid cell. The one-exponent
    /// corollary lines ignore the off-line grid coordinate.
    pub fn operator_exponents(&self, alpha: f64, beta: f64) -> (f64, f64) {
        match self.id.operator_line() {
            OperatorLine::Both => (alpha, beta),
            OperatorLine::AlphaOnly => (alpha, 0.0),
            OperatorLine::BetaOnly => (0.0, beta),
        }
    }

    fn g_members(&self) -> Result<Vec<AnalyticFunction>, RegionError> {
        Ok(match self.id.g_class() {
            SourceClass::ConvexOrder => {
                let l = self.lambda.unwrap();
                vec![
                    catalog::kscale(l, &catalog::cayley())?,
                    catalog::kscale(l, &catalog::halfplane())?,
                    catalog::identity(),
                ]
            }
            SourceClass::OzakiOrder => {
                let g = self.gamma.unwrap();
                vec![
                    catalog::gscale(g, &catalog::cayley())?,
                    catalog::gscale(g, &catalog::halfplane())?,
                    catalog::identity(),
                ]
            }
            _ => vec![catalog::cayley(), catalog::halfplane(), catalog::identity()],
        })
    }

    /// The sharpness witnesses the theorem's proof uses: pairs whose
    /// failure pins down each constraint family of the region.
    pub fn witness_battery(&self) -> Result<Vec<(AnalyticFunction, AnalyticFunction)>, RegionError> {
        let g_w = self.g_members()?.remove(0);
        let id = catalog::identity();
        Ok(match self.id.operator_line() {
            OperatorLine::AlphaOnly => match self.id.f_class() {
                SourceClass::Convex => vec![(catalog::cayley(), id)],
                _ => vec![(catalog::ozaki_plus(), id.clone()), (catalog::ozaki_minus(), id)],
            },
            OperatorLine::BetaOnly => vec![(id, catalog::cayley())],
            OperatorLine::Both => match self.id.f_class() {
                SourceClass::Convex => vec![
                    (id.clone(), g_w.clone()),
                    (catalog::cayley(), id),
                    (catalog::cayley(), g_w),
                ],
                _ => vec![
                    (id, g_w.clone()),
                    (catalog::ozaki_plus(), g_w.clone()),
                    (catalog::ozaki_minus(), g_w),
                ],
            },
        })
    }

    /// Default scan battery: the sharpness witnesses plus one more pair of
    /// class members.
    pub fn default_battery(&self) -> Result<Vec<(AnalyticFunction, AnalyticFunction)>, RegionError> {
        let g_members = self.g_members()?;
        let g_w = g_members[0].clone();
        let g_alt = g_members[1].clone();
        let id = catalog::identity();
        Ok(match self.id.operator_line() {
            OperatorLine::AlphaOnly => {
                let mut v = self.witness_battery()?;
                match self.id.f_class() {
                    SourceClass::Convex => v.push((catalog::halfplane(), id)),
                    _ => v.push((id.clone(), id)),
                }
                v
            }
            OperatorLine::BetaOnly => vec![
                (id.clone(), catalog::cayley()),
                (id.clone(), catalog::halfplane()),
                (id.clone(), id),
            ],
            OperatorLine::Both => match self.id.f_class() {
                SourceClass::Convex => vec![
                    (catalog::cayley(), g_w.clone()),
                    (id.clone(), g_w.clone()),
                    (catalog::cayley(), id),
                    (catalog::halfplane(), g_w),
                ],
                _ => vec![
                    (catalog::ozaki_plus(), g_w.clone()),
                    (id, g_w.clone()),
                    (catalog::ozaki_minus(), g_w),
                    (catalog::ozaki_plus(), g_alt),
                ],
            },
        })
    }

    /// The theorem's region under the chosen transcription variant.
    pub fn region(&self, variant: RegionVariant) -> Region {
        build_region(self, variant)
    }
}

struct LinTerm {
    a: f64,
    b: f64,
    label: String,
}

fn t(a: f64, b: f64, label: &str) -> LinTerm {
    LinTerm { a, b, label: label.into() }
}

struct RegionBuilder {
    chains: Vec<String>,
    constraints: Vec<Constraint>,
}

impl RegionBuilder {
    fn new() -> Self {
        RegionBuilder { chains: Vec::new(), constraints: Vec::new() }
    }

    /// `lo ≤ every term ≤ hi`: one chain line, two constraints per term.
    fn chain(&mut self, lo: f64, lo_s: &str, terms: &[LinTerm], hi: f64, hi_s: &str) {
        let labels: Vec<&str> = terms.iter().map(|t| t.label.as_str()).collect();
        self.chains.push(format!("{lo_s} <= {} <= {hi_s}", labels.join(", ")));
        for term in terms {
            self.constraints.push(Constraint {
                a: -term.a,
                b: -term.b,
                c: -lo,
                text: format!("{lo_s} <= {}", term.label),
            });
            self.constraints.push(Constraint {
                a: term.a,
                b: term.b,
                c: hi,
                text: format!("{} <= {hi_s}", term.label),
            });
        }
    }

    /// `term ≤ hi`.
    fn upper(&mut self, term: LinTerm, hi: f64, hi_s: &str) {
        self.chains.push(format!("{} <= {hi_s}", term.label));
        self.constraints.push(Constraint {
            a: term.a,
            b: term.b,
            c: hi,
            text: format!("{} <= {hi_s}", term.label),
        });
    }

    /// `lo ≤ term`.
    fn lower(&mut self, lo: f64, lo_s: &str, term: LinTerm) {
        self.chains.push(format!("{} >= {lo_s}", term.label));
        self.constraints.push(Constraint {
            a: -term.a,
            b: -term.b,
            c: -lo,
            text: format!("{} >= {lo_s}", term.label),
        });
    }

    fn finish(self, inst: &TheoremInstance) -> Region {
        Region {
            theorem: inst.label(),
            chains: self.chains,
            constraints: self.constraints,
            lambda: inst.lambda,
            gamma: inst.gamma,
        }
    }
}

fn kk_terms() -> [LinTerm; 3] {
    [t(1.0, 0.0, "alpha"), t(0.0, 2.0, "2 beta"), t(1.0, 2.0, "alpha + 2 beta")]
}

fn kkl_terms(u: f64) -> [LinTerm; 3] {
    [
        t(1.0, 0.0, "alpha"),
        t(0.0, 2.0 * u, "2 beta(1-lambda)"),
        t(1.0, 2.0 * u, "alpha + 2 beta(1-lambda)"),
    ]
}

fn kgg_terms(g: f64) -> [LinTerm; 3] {
    [t(1.0, 0.0, "alpha"), t(0.0, -g, "-beta gamma"), t(1.0, -g, "alpha - beta gamma")]
}

fn build_region(inst: &TheoremInstance, variant: RegionVariant) -> Region {
    let mut rb = RegionBuilder::new();
    let l = inst.lambda.unwrap_or(f64::NAN);
    let g = inst.gamma.unwrap_or(f64::NAN);
    let u = 1.0 - l;
    match inst.id {
        TheoremId::KofKK => rb.chain(0.0, "0", &kk_terms(), 2.0, "2"),
        TheoremId::CofKK => rb.chain(-1.0, "-1", &kk_terms(), 3.0, "3"),
        TheoremId::KofKKl => rb.chain(0.0, "0", &kkl_terms(u), 2.0, "2"),
        TheoremId::KlofKKl => rb.chain(0.0, "0", &kkl_terms(u), 2.0 * u, "2(1-lambda)"),
        TheoremId::GgofKKl => rb.chain(-g, "-gamma", &kkl_terms(u), 0.0, "0"),
        TheoremId::CofKKl => rb.chain(-1.0, "-1", &kkl_terms(u), 3.0, "3"),
        TheoremId::KofKGg => rb.chain(0.0, "0", &kgg_terms(g), 2.0, "2"),
        TheoremId::KlofKGg => rb.chain(0.0, "0", &kgg_terms(g), 2.0 * u, "2(1-lambda)"),
        TheoremId::GgofKGg => rb.chain(-g, "-gamma", &kgg_terms(g), 0.0, "0"),
        TheoremId::CofKGg => rb.chain(-1.0, "-1", &kgg_terms(g), 3.0, "3"),
        TheoremId::KofGK => {
            rb.chain(0.0, "0", &[t(0.0, 1.0, "beta")], 1.0, "1");
            rb.upper(t(1.0, 1.0, "alpha + beta"), 1.0, "1");
            rb.upper(t(-1.0, 3.0, "3 beta - alpha"), 3.0, "3");
        }
        TheoremId::KofGKl => {
            rb.chain(-3.0, "-3", &[t(1.0, 0.0, "alpha")], 1.0, "1");
            rb.chain(0.0, "0", &[t(0.0, u, "beta(1-lambda)")], 1.0, "1");
            rb.upper(t(1.0, u, "alpha + beta(1-lambda)"), 1.0, "1");
            rb.upper(t(-1.0, 3.0 * u, "3 beta(1-lambda) - alpha"), 3.0, "3");
        }
        TheoremId::KlofGKl => {
            rb.chain(-3.0 * u, "-3(1-lambda)", &[t(1.0, 0.0, "alpha")], u, "1-lambda");
            rb.chain(0.0, "0", &[t(0.0, 1.0, "beta")], 1.0, "1");
            rb.upper(t(1.0, u, "alpha + beta(1-lambda)"), u, "1-lambda");
            rb.upper(t(-1.0, 3.0 * u, "3 beta(1-lambda) - alpha"), 3.0 * u, "3(1-lambda)");
        }
        TheoremId::GofGKl => {
            rb.chain(-0.5, "-1/2", &[t(1.0, 0.0, "alpha")], 1.5, "3/2");
            rb.chain(-0.5, "-1/2", &[t(0.0, u, "beta(1-lambda)")], 0.0, "0");
            rb.lower(-0.5, "-1/2", t(1.0, u, "alpha + beta(1-lambda)"));
            match variant {
                RegionVariant::Stated => {
                    rb.lower(-0.5, "-1/2", t(-1.0, 3.0 * u, "3 beta(1-lambda) - alpha"))
                }
                RegionVariant::Rederived => {
                    rb.lower(-1.5, "-3/2", t(-1.0, 3.0 * u, "3 beta(1-lambda) - alpha"))
                }
            }
        }
        TheoremId::GgofGKl => {
            rb.chain(-g / 2.0, "-gamma/2", &[t(1.0, 0.0, "alpha")], 1.5 * g, "3 gamma/2");
            rb.chain(-g / 2.0, "-gamma/2", &[t(0.0, u, "beta(1-lambda)")], 0.0, "0");
            rb.lower(-g / 2.0, "-gamma/2", t(1.0, u, "alpha + beta(1-lambda)"));
            match variant {
                RegionVariant::Stated => {
                    rb.lower(-g / 2.0, "-gamma/2", t(-1.0, 3.0 * u, "3 beta(1-lambda) - alpha"))
                }
                RegionVariant::Rederived => {
                    rb.lower(-1.5 * g, "-3 gamma/2", t(-1.0, 3.0 * u, "3 beta(1-lambda) - alpha"))
                }
            }
        }
        TheoremId::KofGGg => {
            rb.chain(-3.0, "-3", &[t(1.0, 0.0, "alpha")], 1.0, "1");
            rb.chain(-2.0 / g, "-2/gamma", &[t(0.0, 1.0, "beta")], 0.0, "0");
            rb.upper(t(1.0, -g / 2.0, "alpha - beta gamma/2"), 1.0, "1");
            rb.upper(t(-1.0, -1.5 * g, "-3 beta gamma/2 - alpha"), 3.0, "3");
        }
        TheoremId::KlofGGg => {
            rb.chain(-3.0 * u, "-3(1-lambda)", &[t(1.0, 0.0, "alpha")], u, "1-lambda");
            rb.chain(-2.0 * u / g, "-2(1-lambda)/gamma", &[t(0.0, 1.0, "beta")], 0.0, "0");
            rb.upper(t(1.0, -g / 2.0, "alpha - beta gamma/2"), u, "1-lambda");
            rb.upper(t(-1.0, -1.5 * g, "-3 beta gamma/2 - alpha"), 3.0 * u, "3(1-lambda)");
        }
        TheoremId::GofGGg => {
            rb.chain(-0.5, "-1/2", &[t(1.0, 0.0, "alpha")], 1.5, "3/2");
            match variant {
                RegionVariant::Stated => {
                    rb.chain(0.0, "0", &[t(0.0, 1.0, "beta")], 1.0, "1");
                    rb.upper(t(-2.0, 1.0, "-2 alpha + beta"), 1.0, "1");
                    rb.upper(t(2.0, 3.0, "3 beta + 2 alpha"), 3.0, "3");
                }
                RegionVariant::Rederived => {
                    rb.chain(0.0, "0", &[t(0.0, g, "beta gamma")], 1.0, "1");
                    rb.upper(t(-2.0, g, "-2 alpha + beta gamma"), 1.0, "1");
                    rb.upper(t(2.0, 3.0 * g, "3 beta gamma + 2 alpha"), 3.0, "3");
                }
            }
        }
        TheoremId::GgofGGg => {
            rb.chain(-g / 2.0, "-gamma/2", &[t(1.0, 0.0, "alpha")], 1.5 * g, "3 gamma/2");
            rb.chain(0.0, "0", &[t(0.0, 1.0, "beta")], 1.0, "1");
            rb.upper(t(-2.0 / g, 1.0, "-2 alpha/gamma + beta"), 1.0, "1");
            rb.upper(t(2.0 / g, 3.0, "3 beta + 2 alpha/gamma"), 3.0, "3");
        }
        TheoremId::JConvexToK => rb.chain(0.0, "0", &[t(1.0, 0.0, "alpha")], 2.0, "2"),
        TheoremId::JConvexToC => rb.chain(-1.0, "-1", &[t(1.0, 0.0, "alpha")], 3.0, "3"),
        TheoremId::IConvexToK => rb.chain(0.0, "0", &[t(0.0, 1.0, "beta")], 1.0, "1"),
        TheoremId::IConvexToC => rb.chain(-0.5, "-1/2", &[t(0.0, 1.0, "beta")], 1.5, "3/2"),
        TheoremId::JOzakiToKl => {
            rb.chain(-3.0 * u, "-3(1-lambda)", &[t(1.0, 0.0, "alpha")], u, "1-lambda")
        }
        TheoremId::JOzakiToGg => {
            rb.chain(-g / 2.0, "-gamma/2", &[t(1.0, 0.0, "alpha")], 1.5 * g, "3 gamma/2")
        }
        TheoremId::JOzakiToG => rb.chain(-0.5, "-1/2", &[t(1.0, 0.0, "alpha")], 1.5, "3/2"),
    }
    rb.finish(inst)
}

/// Rectangular grid: row-major cells, β descending from `beta_max` (row 0
/// is the top row of the heatmap), α ascending within a row.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridSpec {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub beta_min: f64,
    pub beta_max: f64,
    pub step: f64,
    /// Cells with |signed distance| at most this are exempt from mismatch
    /// accounting; defaults to one grid step.
    pub boundary_exemption: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            alpha_min: -4.0,
            alpha_max: 4.0,
            beta_min: -3.0,
            beta_max: 3.0,
            step: 0.25,
            boundary_exemption: 0.25,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), RegionError> {
        if !(self.step > 0.0 && self.alpha_max > self.alpha_min && self.beta_max > self.beta_min) {
            return Err(RegionError::BadGrid("need positive step and nonempty ranges".into()));
        }
        if self.cell_count() > 2_000_000 {
            return Err(RegionError::BadGrid("grid has more than 2e6 cells".into()));
        }
        Ok(())
    }

    pub fn cols(&self) -> usize {
        ((self.alpha_max - self.alpha_min) / self.step).round() as usize + 1
    }

    pub fn rows(&self) -> usize {
        ((self.beta_max - self.beta_min) / self.step).round() as usize + 1
    }

    pub fn alpha_at(&self, col: usize) -> f64 {
        self.alpha_min + self.step * col as f64
    }

    pub fn beta_at(&self, row: usize) -> f64 {
        self.beta_max - self.step * row as f64
    }

    pub fn cell_count(&self) -> usize {
        self.cols() * self.rows()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScanDirection {
    /// Inside the region: every battery pair must pass.
    Inside,
    /// Outside the region: at least one witness pair must fail.
    Outside,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CellStatus {
    Pass,
    Fail,
    Indeterminate,
    /// Not evaluated: exempt boundary band, or the other side of the region.
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct CellRecord {
    pub alpha: f64,
    pub beta: f64,
    pub distance: f64,
    pub status: CellStatus,
    pub margin: Option<f64>,
    /// Battery pair behind the recorded margin.
    pub pair: Option<String>,
    pub mismatch: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProfileSummary {
    pub radii: Vec<f64>,
    pub sharp_radii: Vec<f64>,
    pub angular_samples: usize,
    pub eps: f64,
    pub band: f64,
}

impl From<&SamplingProfile> for ProfileSummary {
    fn from(p: &SamplingProfile) -> Self {
        ProfileSummary {
            radii: p.radii.clone(),
            sharp_radii: p.sharp_radii.clone(),
            angular_samples: p.angular_samples,
            eps: p.eps,
            band: p.band,
        }
    }
}

/// Result of a grid scan: row-major cell records plus mismatch accounting.
#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub theorem: String,
    pub direction: ScanDirection,
    pub region: Region,
    pub grid: GridSpec,
    pub battery: Vec<(String, String)>,
    pub cells: Vec<CellRecord>,
    /// Indices into `cells` of mismatching cells.
    pub mismatches: Vec<usize>,
    pub tested_count: usize,
    pub indeterminate_count: usize,
    /// Wall-clock timing; not serialized so identical commands keep
    /// producing byte-identical reports.
    #[serde(skip)]
    pub elapsed_seconds: f64,
    pub profile: ProfileSummary,
}

impl ScanReport {
    pub fn passes(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Inclusion-direction scan: every battery pair must pass the target
/// criterion at every cell strictly inside the region (beyond the
/// exemption band).
pub fn scan(
    inst: &TheoremInstance,
    battery: &[(AnalyticFunction, AnalyticFunction)],
    grid: &GridSpec,
    prof: &SamplingProfile,
    variant: RegionVariant,
) -> Result<ScanReport, RegionError> {
    grid.validate()?;
    prof.validate()?;
    assert!(!battery.is_empty(), "battery must not be empty");
    let start = Instant::now();
    let region = inst.region(variant);
    let criterion = inst.criterion();

    let cells: Vec<CellRecord> = (0..grid.cell_count())
        .into_par_iter()
        .map(|idx| -> Result<CellRecord, RegionError> {
            let alpha = grid.alpha_at(idx % grid.cols());
            let beta = grid.beta_at(idx / grid.cols());
            let d = region.contains(alpha, beta).distance;
            if d <= prof.band {
                return Ok(CellRecord {
                    alpha,
                    beta,
                    distance: d,
                    status: CellStatus::Skipped,
                    margin: None,
                    pair: None,
                    mismatch: false,
                });
            }
            // cells within one grid step of the boundary are evaluated but
            // exempt from mismatch accounting
            let accountable = d > grid.boundary_exemption;
            let (a, b) = inst.operator_exponents(alpha, beta);
            let mut merged: Option<(Verdict, String)> = None;
            for (f, g) in battery {
                let eval = OperatorEvaluator { spec: OperatorSpec::c(a, b), f, g };
                let v = criterion.run(&eval, prof, false)?;
                let name = format!("({},{})", f.name(), g.name());
                merged = Some(match merged {
                    None => (v, name),
                    Some((prev, prev_name)) => {
                        let keep_new = v.margin < prev.margin;
                        (prev.merge(v), if keep_new { name } else { prev_name })
                    }
                });
            }
            let (verdict, pair) = merged.expect("battery is nonempty");
            let status = match verdict.outcome {
                Outcome::Pass => CellStatus::Pass,
                Outcome::Fail => CellStatus::Fail,
                Outcome::Indeterminate => CellStatus::Indeterminate,
            };
            Ok(CellRecord {
                alpha,
                beta,
                distance: d,
                status,
                margin: Some(verdict.margin),
                pair: Some(pair),
                mismatch: accountable && status == CellStatus::Fail,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    Ok(assemble_report(inst, ScanDirection::Inside, region, grid, battery, cells, prof, start))
}

/// Sharpness-direction scan: at every cell strictly outside the region, at
/// least one witness pair must fail; cells where all witnesses pass are
/// mismatches.
pub fn sharpness_check(
    inst: &TheoremInstance,
    grid: &GridSpec,
    prof: &SamplingProfile,
    variant: RegionVariant,
) -> Result<ScanReport, RegionError> {
    grid.validate()?;
    prof.validate()?;
    let start = Instant::now();
    let region = inst.region(variant);
    let criterion = inst.criterion();
    let witnesses = inst.witness_battery()?;

    let cells: Vec<CellRecord> = (0..grid.cell_count())
        .into_par_iter()
        .map(|idx| -> Result<CellRecord, RegionError> {
            let alpha = grid.alpha_at(idx % grid.cols());
            let beta = grid.beta_at(idx / grid.cols());
            let d = region.contains(alpha, beta).distance;
            if d >= -prof.band {
                return Ok(CellRecord {
                    alpha,
                    beta,
                    distance: d,
                    status: CellStatus::Skipped,
                    margin: None,
                    pair: None,
                    mismatch: false,
                });
            }
            let accountable = d < -grid.boundary_exemption;
            let (a, b) = inst.operator_exponents(alpha, beta);
            let mut worst: Option<(Verdict, String)> = None;
            let mut any_indeterminate = false;
            let mut failed: Option<(Verdict, String)> = None;
            for (f, g) in &witnesses {
                let eval = OperatorEvaluator { spec: OperatorSpec::c(a, b), f, g };
                let v = criterion.run(&eval, prof, true)?;
                let name = format!("({},{})", f.name(), g.name());
                match v.outcome {
                    Outcome::Fail => {
                        failed = Some((v, name));
                        break;
                    }
                    Outcome::Indeterminate => any_indeterminate = true,
                    Outcome::Pass => {}
                }
                if worst.as_ref().map(|(w, _)| v.margin < w.margin).unwrap_or(true) {
                    worst = Some((v, name));
                }
            }
            let (status, margin, pair) = if let Some((v, name)) = failed {
                (CellStatus::Fail, Some(v.margin), Some(name))
            } else {
                let (v, name) = worst.expect("witness battery nonempty");
                let status =
                    if any_indeterminate { CellStatus::Indeterminate } else { CellStatus::Pass };
                (status, Some(v.margin), Some(name))
            };
            Ok(CellRecord {
                alpha,
                beta,
                distance: d,
                status,
                margin,
                pair,
                // every witness passed outside the region: sharpness failed
                mismatch: accountable && status == CellStatus::Pass,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    Ok(assemble_report(inst, ScanDirection::Outside, region, grid, &witnesses, cells, prof, start))
}

#[allow(clippy::too_many_arguments)]
fn assemble_report(
    inst: &TheoremInstance,
    direction: ScanDirection,
    region: Region,
    grid: &GridSpec,
    battery: &[(AnalyticFunction, AnalyticFunction)],
    cells: Vec<CellRecord>,
    prof: &SamplingProfile,
    start: Instant,
) -> ScanReport {
    let mismatches: Vec<usize> =
        cells.iter().enumerate().filter_map(|(i, c)| c.mismatch.then_some(i)).collect();
    let tested_count = cells.iter().filter(|c| c.status != CellStatus::Skipped).count();
    let indeterminate_count =
        cells.iter().filter(|c| c.status == CellStatus::Indeterminate).count();
    ScanReport {
        theorem: inst.label(),
        direction,
        region,
        grid: *grid,
        battery: battery.iter().map(|(f, g)| (f.name().into(), g.name().into())).collect(),
        cells,
        mismatches,
        tested_count,
        indeterminate_count,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        profile: ProfileSummary::from(prof),
    }
}

/// Offending triple of a convexity violation: two passing cells whose
/// midpoint cell fails.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConvexityViolation {
    pub first: (f64, f64),
    pub midpoint: (f64, f64),
    pub second: (f64, f64),
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvexityAudit {
    pub outcome: Outcome,
    pub checked_midpoints: usize,
    pub violations: Vec<ConvexityViolation>,
}

/// Audits convexity of the empirical pass set: for every pair of passing
/// cells whose midpoint lands on the grid and was tested, the midpoint
/// must not fail. Vacuously passes on fewer than two passing cells.
pub fn convexity_audit(report: &ScanReport) -> ConvexityAudit {
    let cols = report.grid.cols();
    let ok: Vec<usize> = report
        .cells
        .iter()
        .enumerate()
        .filter_map(|(i, c)| (c.status == CellStatus::Pass).then_some(i))
        .collect();
    let mut violations = Vec::new();
    let mut checked = 0usize;
    for (n, &i) in ok.iter().enumerate() {
        let (ri, ci) = (i / cols, i % cols);
        for &j in &ok[n + 1..] {
            let (rj, cj) = (j / cols, j % cols);
            if (ri + rj) % 2 != 0 || (ci + cj) % 2 != 0 {
                continue;
            }
            let mid = (ri + rj) / 2 * cols + (ci + cj) / 2;
            let cell = &report.cells[mid];
            if cell.status == CellStatus::Skipped {
                continue;
            }
            checked += 1;
            if cell.status == CellStatus::Fail {
                let a = &report.cells[i];
                let b = &report.cells[j];
                violations.push(ConvexityViolation {
                    first: (a.alpha, a.beta),
                    midpoint: (cell.alpha, cell.beta),
                    second: (b.alpha, b.beta),
                });
            }
        }
    }
    ConvexityAudit {
        outcome: if violations.is_empty() { Outcome::Pass } else { Outcome::Fail },
        checked_midpoints: checked,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(id: TheoremId) -> TheoremInstance {
        TheoremInstance::new(id, Some(0.5), Some(2.0)).unwrap()
    }

    #[test]
    fn convex_pair_region_membership() {
        let region = inst(TheoremId::KofKK).region(RegionVariant::Stated);
        assert!(region.contains(0.0, 0.0).inside);
        let boundary = region.contains(1.0, 0.5);
        assert!(boundary.inside);
        assert!(boundary.distance.abs() < 1e-12, "alpha + 2 beta = 2 is on the boundary");
        assert!(!region.contains(2.5, 0.0).inside);
    }

    #[test]
    fn close_to_convex_region_membership() {
        let region = inst(TheoremId::CofKK).region(RegionVariant::Stated);
        let c = region.contains(3.0, 0.0);
        assert!(c.inside);
        assert!(c.distance.abs() < 1e-12);

        let g = inst(TheoremId::KofGK).region(RegionVariant::Stated);
        let c = g.contains(-3.0, 0.0);
        assert!(c.inside);
        assert!(c.distance.abs() < 1e-12, "3 beta - alpha = 3 boundary");
        assert!(!g.contains(-3.0, 0.25).inside);
    }

    #[test]
    fn violating_one_constraint_is_outside() {
        let region = inst(TheoremId::KofKK).region(RegionVariant::Stated);
        let c = region.contains(-1.0, 0.5);
        assert!(!c.inside);
        assert!((c.distance + 1.0).abs() < 1e-12);
    }

    #[test]
    fn corollary_duality_with_restricted_lines() {
        let kk = inst(TheoremId::KofKK).region(RegionVariant::Stated);
        assert_eq!(kk.beta_zero_interval(), Some((0.0, 2.0)));
        assert_eq!(kk.alpha_zero_interval(), Some((0.0, 1.0)));

        let jk = inst(TheoremId::JConvexToK).region(RegionVariant::Stated);
        assert_eq!(jk.beta_zero_interval(), Some((0.0, 2.0)));

        let ik = inst(TheoremId::IConvexToK).region(RegionVariant::Stated);
        assert_eq!(ik.alpha_zero_interval(), Some((0.0, 1.0)));

        let ckk = inst(TheoremId::CofKK).region(RegionVariant::Stated);
        assert_eq!(ckk.beta_zero_interval(), Some((-1.0, 3.0)));
        assert_eq!(ckk.alpha_zero_interval(), Some((-0.5, 1.5)));
    }

    #[test]
    fn rederived_matches_stated_except_three_parts() {
        for id in TheoremId::ALL {
            let inst = inst(id);
            let stated = inst.region(RegionVariant::Stated);
            let rederived = inst.region(RegionVariant::Rederived);
            let differs =
                matches!(id, TheoremId::GofGKl | TheoremId::GgofGKl | TheoremId::GofGGg);
            let same = stated.constraints.len() == rederived.constraints.len()
                && stated
                    .constraints
                    .iter()
                    .zip(&rederived.constraints)
                    .all(|(a, b)| a.a == b.a && a.b == b.b && a.c == b.c);
            assert_eq!(same, !differs, "{}", id.code());
        }
    }

    #[test]
    fn stated_gkl_region_is_a_strict_subset_of_rederived() {
        let i = inst(TheoremId::GofGKl);
        let stated = i.region(RegionVariant::Stated);
        let rederived = i.region(RegionVariant::Rederived);
        for &(a, b) in &[(0.0, -0.4), (1.0, -0.5), (-0.25, 0.0), (0.75, -0.25)] {
            if stated.contains(a, b).inside {
                assert!(rederived.contains(a, b).inside, "({a},{b})");
            }
        }
        // a point in the rederived region that the stated list excludes
        assert!(!stated.contains(0.0, -0.8).inside);
        assert!(rederived.contains(0.0, -0.8).inside);
    }

    #[test]
    fn implied_alpha_bounds_are_reported_inactive() {
        // The f in G, g in K(lambda) convexity region states -3 <= alpha <= 1
        // although both bounds follow from the other constraints.
        let region = inst(TheoremId::KofGKl).region(RegionVariant::Stated);
        let inactive = region.inactive_constraints();
        let texts: Vec<&str> =
            inactive.iter().map(|&i| region.constraints[i].text.as_str()).collect();
        assert!(texts.contains(&"-3 <= alpha"), "{texts:?}");
        assert!(texts.contains(&"alpha <= 1"), "{texts:?}");

        let kk = inst(TheoremId::KofKK).region(RegionVariant::Stated);
        for &i in &kk.inactive_constraints() {
            let text = kk.constraints[i].text.as_str();
            assert!(
                text == "0 <= alpha + 2 beta" || text == "alpha <= 2" || text == "2 beta <= 2",
                "unexpected inactive constraint {text}"
            );
        }
    }

    #[test]
    fn gk_region_carries_only_the_stated_constraints() {
        // No standalone alpha bounds are encoded; -3 <= alpha <= 1 emerges
        // from the stated constraints on the beta = 0 line.
        let region = inst(TheoremId::KofGK).region(RegionVariant::Stated);
        assert_eq!(region.constraints.len(), 4);
        assert!(region.constraints.iter().all(|k| k.b != 0.0));
        assert_eq!(region.beta_zero_interval(), Some((-3.0, 1.0)));
    }

    #[test]
    fn every_region_is_nonempty_with_interior() {
        for id in TheoremId::ALL {
            for variant in [RegionVariant::Stated, RegionVariant::Rederived] {
                let region = inst(id).region(variant);
                let mut deepest = f64::NEG_INFINITY;
                let mut alpha = -4.0;
                while alpha <= 4.0 {
                    let mut beta = -3.0;
                    while beta <= 3.0 {
                        deepest = deepest.max(region.contains(alpha, beta).distance);
                        beta += 0.05;
                    }
                    alpha += 0.05;
                }
                assert!(deepest > 0.0, "{} {variant:?} has no interior point", id.code());
            }
        }
    }

    #[test]
    fn theorem_codes_round_trip() {
        for id in TheoremId::ALL {
            let parsed: TheoremId = id.code().parse().unwrap();
            assert_eq!(parsed, id);
        }
        assert!("nope".parse::<TheoremId>().is_err());
    }

    #[test]
    fn instance_parameter_validation() {
        assert!(TheoremInstance::new(TheoremId::KofKKl, None, None).is_err());
        assert!(TheoremInstance::new(TheoremId::KofKKl, Some(1.2), None).is_err());
        assert!(TheoremInstance::new(TheoremId::GgofKGg, Some(0.5), Some(-1.0)).is_err());
        assert!(TheoremInstance::new(TheoremId::KofKK, None, None).is_ok());
    }

    #[test]
    fn grid_geometry() {
        let g = GridSpec::default();
        assert_eq!(g.cols(), 33);
        assert_eq!(g.rows(), 25);
        assert_eq!(g.alpha_at(0), -4.0);
        assert_eq!(g.alpha_at(32), 4.0);
        assert_eq!(g.beta_at(0), 3.0);
        assert_eq!(g.beta_at(24), -3.0);
    }

    #[test]
    fn scan_small_window_of_convex_pair_theorem() {
        let inst = TheoremInstance::new(TheoremId::KofKK, None, None).unwrap();
        let grid = GridSpec {
            alpha_min: -1.0,
            alpha_max: 3.0,
            beta_min: -1.0,
            beta_max: 2.0,
            step: 0.25,
            boundary_exemption: 0.25,
        };
        let prof = SamplingProfile::default();
        let battery = inst.default_battery().unwrap();
        let report = scan(&inst, &battery, &grid, &prof, RegionVariant::Stated).unwrap();
        assert!(report.passes(), "mismatches at {:?}", report.mismatches);
        assert!(report.tested_count > 0);
        assert_eq!(report.indeterminate_count, 0);

        let sharp = sharpness_check(&inst, &grid, &prof, RegionVariant::Stated).unwrap();
        assert!(sharp.passes(), "sharpness mismatches at {:?}", sharp.mismatches);
        assert!(sharp.tested_count > 0);
    }

    #[test]
    fn convexity_audit_flags_synthetic_gap() {
        let inst = TheoremInstance::new(TheoremId::KofKK, None, None).unwrap();
        let grid = GridSpec {
            alpha_min: 0.0,
            alpha_max: 2.0,
            beta_min: 0.0,
            beta_max: 1.0,
            step: 1.0,
            boundary_exemption: 0.0,
        };
        let mk = |alpha: f64, status: CellStatus| CellRecord {
            alpha,
            beta: 0.0,
            distance: 1.0,
            status,
            margin: Some(0.1),
            pair: None,
            mismatch: false,
        };
        let pad = |alpha: f64| mk(alpha, CellStatus::Skipped);
        let report = ScanReport {
            theorem: inst.label(),
            direction: ScanDirection::Inside,
            region: inst.region(RegionVariant::Stated),
            grid,
            battery: vec![],
            // row 0 (beta = 1): skipped; row 1 (beta = 0): pass / fail / pass
            cells: vec![
                pad(0.0),
                pad(1.0),
                pad(2.0),
                mk(0.0, CellStatus::Pass),
                mk(1.0, CellStatus::Fail),
                mk(2.0, CellStatus::Pass),
            ],
            mismatches: vec![],
            tested_count: 3,
            indeterminate_count: 0,
            elapsed_seconds: 0.0,
            profile: ProfileSummary::from(&SamplingProfile::default()),
        };
        let audit = convexity_audit(&report);
        assert_eq!(audit.outcome, Outcome::Fail);
        assert_eq!(audit.violations.len(), 1);
        assert_eq!(audit.violations[0].midpoint, (1.0, 0.0));

        let single = ScanReport {
            cells: vec![
                pad(0.0),
                pad(1.0),
                pad(2.0),
                mk(0.0, CellStatus::Pass),
                pad(1.0),
                pad(2.0),
            ],
            ..report
        };
        assert_eq!(convexity_audit(&single).outcome, Outcome::Pass);
    }
}
