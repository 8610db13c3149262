//! Region predicates over σ(|Q|,|E|) and the classifier suite.
//!
//! Every region is closed. Two-dimensional pieces (the quarter disk, its
//! complement, half-planes) get a symmetric `eps` band reported as
//! [`Membership::Boundary`]; one-dimensional pieces (the `t = 0` ray and the
//! `s = 1` line) are matched within `eps` and reported as inside. Unions take
//! the best membership of their parts, intersections the worst. Verdicts count
//! boundary points as inside.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::jointspec::{self, JointSpectrum, SpectralPoint};
use crate::linalg::ComplexMatrix;
use crate::model::{atom_spectra, AtomKind, AtomModel, PairModel};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionId {
    Subnormal,
    Contraction,
    Expansion,
    Isometry,
    TwoIsometry,
    MContractive(u32),
    MExpansive(u32),
    MIsometric(u32),
    DualSubnormal,
    CompletelyHyperexpansive,
    CompletelyHypercontractive,
    DeltaRegular,
}

impl RegionId {
    /// Replaces the classes that collapse onto simpler ones.
    pub fn resolve(self) -> RegionId {
        match self {
            RegionId::CompletelyHyperexpansive => RegionId::MExpansive(2),
            RegionId::CompletelyHypercontractive => RegionId::Contraction,
            RegionId::DeltaRegular => RegionId::Expansion,
            other => other,
        }
    }

    pub fn is_alias(self) -> bool {
        self.resolve() != self
    }

    pub fn token(self) -> String {
        match self {
            RegionId::Subnormal => "subnormal".into(),
            RegionId::Contraction => "contraction".into(),
            RegionId::Expansion => "expansion".into(),
            RegionId::Isometry => "isometry".into(),
            RegionId::TwoIsometry => "two-isometry".into(),
            RegionId::MContractive(m) => format!("m-contractive:{m}"),
            RegionId::MExpansive(m) => format!("m-expansive:{m}"),
            RegionId::MIsometric(m) => format!("m-isometric:{m}"),
            RegionId::DualSubnormal => "dual-subnormal".into(),
            RegionId::CompletelyHyperexpansive => "che".into(),
            RegionId::CompletelyHypercontractive => "chc".into(),
            RegionId::DeltaRegular => "delta-regular".into(),
        }
    }
}

impl fmt::Display for RegionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

impl FromStr for RegionId {
    type Err = Error;

    fn from_str(token: &str) -> Result<Self> {
        let unknown = || Error::UnknownRegion(token.to_string());
        let token_lc = token.trim().to_ascii_lowercase();
        if let Some((head, m)) = token_lc.split_once(':') {
            let m: u32 = m.parse().map_err(|_| unknown())?;
            if m == 0 {
                return Err(unknown());
            }
            return match head {
                "m-contractive" => Ok(RegionId::MContractive(m)),
                "m-expansive" => Ok(RegionId::MExpansive(m)),
                "m-isometric" => Ok(RegionId::MIsometric(m)),
                _ => Err(unknown()),
            };
        }
        Ok(match token_lc.as_str() {
            "subnormal" => RegionId::Subnormal,
            "contraction" => RegionId::Contraction,
            "expansion" => RegionId::Expansion,
            "isometry" => RegionId::Isometry,
            "two-isometry" => RegionId::TwoIsometry,
            "dual-subnormal" => RegionId::DualSubnormal,
            "che" => RegionId::CompletelyHyperexpansive,
            "chc" => RegionId::CompletelyHypercontractive,
            "delta-regular" => RegionId::DeltaRegular,
            _ => return Err(unknown()),
        })
    }
}

impl Serialize for RegionId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.token())
    }
}

/// Ordered so that `max` is union and `min` is intersection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Outside,
    Boundary,
    Inside,
}

impl Membership {
    pub fn counts_inside(self) -> bool {
        self != Membership::Outside
    }
}

/// Closed set `{g ≥ 0}` with an `eps` band around `g = 0`.
fn solid(g: f64, eps: f64) -> Membership {
    if g > eps {
        Membership::Inside
    } else if g >= -eps {
        Membership::Boundary
    } else {
        Membership::Outside
    }
}

/// Thin set `{d = 0}` for a distance-like `d ≥ 0`.
fn thin(d: f64, eps: f64) -> Membership {
    if d <= eps {
        Membership::Inside
    } else {
        Membership::Outside
    }
}

fn m_contractive(s: f64, t: f64, m: u32, eps: f64) -> Membership {
    let disk = solid(1.0 - (s * s + t * t), eps);
    match m {
        0 | 1 => disk,
        m if m % 2 == 1 => disk.max(thin((s - 1.0).abs(), eps)),
        _ => disk.max(solid(s - 1.0, eps)),
    }
}

fn m_expansive(s: f64, t: f64, m: u32, eps: f64) -> Membership {
    let outer = solid(s * s + t * t - 1.0, eps);
    if m % 2 == 1 || m == 0 {
        outer
    } else {
        outer.min(solid(1.0 - s, eps))
    }
}

/// Membership of a single point.
pub fn region_membership(p: &SpectralPoint, region: RegionId, eps: f64) -> Membership {
    let (s, t) = (p.s, p.t);
    let rho2 = s * s + t * t;
    let axis = thin(t, eps);
    match region.resolve() {
        RegionId::Subnormal => solid(1.0 - rho2, eps).max(axis),
        RegionId::Contraction => m_contractive(s, t, 1, eps),
        RegionId::Expansion => m_expansive(s, t, 1, eps),
        RegionId::Isometry => m_contractive(s, t, 1, eps).min(m_expansive(s, t, 1, eps)),
        RegionId::TwoIsometry => m_contractive(s, t, 2, eps).min(m_expansive(s, t, 2, eps)),
        RegionId::MContractive(m) => m_contractive(s, t, m, eps),
        RegionId::MExpansive(m) => m_expansive(s, t, m, eps),
        RegionId::MIsometric(m) => m_contractive(s, t, m, eps).min(m_expansive(s, t, m, eps)),
        RegionId::DualSubnormal => solid(rho2 - 1.0, eps).max(axis),
        RegionId::CompletelyHyperexpansive
        | RegionId::CompletelyHypercontractive
        | RegionId::DeltaRegular => unreachable!("aliases are resolved above"),
    }
}

/// `ψ_m(s,t) = (1 − s² − t²)(1 − s²)^{m−1}`, the symbol of `B_m(T)` on `H₂`.
pub fn psi_m(m: u32, s: f64, t: f64) -> f64 {
    let s2 = s * s;
    (1.0 - s2 - t * t) * (1.0 - s2).powi(m.saturating_sub(1) as i32)
}

/// `Λ_m = Σ_{j=0}^m (−1)^j C(m,j) Ω_j`, the `H₂` block of `B_m(T)`.
pub fn lambda_m(pair: &PairModel, m: u32) -> ComplexMatrix {
    let n = pair.dim();
    let mut acc = ComplexMatrix::zeros(n, n);
    let mut binom = 1.0_f64;
    for j in 0..=m as usize {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        acc += pair.omega(j) * Complex64::new(sign * binom, 0.0);
        binom = binom * (m as f64 - j as f64) / (j as f64 + 1.0);
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointVerdict {
    pub point: SpectralPoint,
    pub membership: Membership,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub region: RegionId,
    /// Set when `region` was requested through an alias.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub requested_as: Option<RegionId>,
    pub verdict: bool,
    pub per_point: Vec<PointVerdict>,
    pub violators: Vec<SpectralPoint>,
}

pub fn classify(sigma: &JointSpectrum, region: RegionId, eps: f64) -> Result<ClassificationReport> {
    classify_with(sigma, region, eps, Exec::default())
}

pub fn classify_with(
    sigma: &JointSpectrum,
    region: RegionId,
    eps: f64,
    exec: Exec,
) -> Result<ClassificationReport> {
    if sigma.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    let resolved = region.resolve();
    let per_point: Vec<PointVerdict> = exec.map(sigma.points(), |p| PointVerdict {
        point: *p,
        membership: region_membership(p, resolved, eps),
    });
    let violators: Vec<SpectralPoint> = per_point
        .iter()
        .filter(|v| !v.membership.counts_inside())
        .map(|v| v.point)
        .collect();
    Ok(ClassificationReport {
        region: resolved,
        requested_as: region.is_alias().then_some(region),
        verdict: violators.is_empty(),
        per_point,
        violators,
    })
}

/// `‖Ω₁⁻¹‖^{-1/2}`, read off the spectrum; positive iff `T` is left-invertible.
pub fn left_invertibility_margin(sigma: &JointSpectrum) -> Result<f64> {
    jointspec::inner_radius(sigma)
}

/// Support of the range projection of `|E|`: `true` for points with `t > eps`.
/// Points outside it only see `Q` and are decided on the axis.
pub fn sharp_mask(sigma: &JointSpectrum, eps: f64) -> Vec<bool> {
    sigma.points().iter().map(|p| p.t > eps).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BrownianReport {
    pub quasi_brownian: bool,
    pub brownian: bool,
    /// Points of σ(|Q|,|E|) off the quasi-Brownian region, then points of
    /// σ(|Q|,|E|,|Q*|) off the Brownian region.
    pub violators: Vec<SpectralPoint>,
}

/// Spectral Brownian test on an atom model.
pub fn classify_brownian(m: &AtomModel, eps: f64) -> Result<BrownianReport> {
    let (sigma2, sigma3) = atom_spectra(m)?;
    let quasi = classify(&sigma2, RegionId::TwoIsometry, eps)?;
    let mut violators = quasi.violators.clone();
    let mut three_ok = true;
    for p in sigma3.points() {
        let on_sphere = (p.norm_sqr() - 1.0).abs() <= eps;
        let r_one = p.r.map(|r| (r - 1.0).abs() <= eps).unwrap_or(false);
        if !(on_sphere || r_one) {
            three_ok = false;
            violators.push(*p);
        }
    }
    Ok(BrownianReport {
        quasi_brownian: quasi.verdict,
        brownian: quasi.verdict && three_ok,
        violators,
    })
}

/// Quasi-Brownian verdict from σ(|Q|,|E|) alone. Brownian-ness cannot be
/// decided from this spectrum, so only the quasi part is reported.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairBrownianReport {
    pub quasi_brownian: bool,
    pub violators: Vec<SpectralPoint>,
    pub note: &'static str,
}

pub fn quasi_brownian_from_spectrum(sigma: &JointSpectrum, eps: f64) -> Result<PairBrownianReport> {
    let r = classify(sigma, RegionId::TwoIsometry, eps)?;
    Ok(PairBrownianReport {
        quasi_brownian: r.verdict,
        violators: r.violators,
        note: "quasi-Brownian decidable, Brownian requires atom model",
    })
}

/// Atom indices of the orthogonal decomposition `H₂ = H_u ⊕ H_s ⊕ H_si`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BrownianDecomposition {
    pub unitary: Vec<usize>,
    pub shift: Vec<usize>,
    pub spherical: Vec<usize>,
    pub unclassifiable: Vec<usize>,
    /// Shift atoms carrying nonzero |E|.
    pub flagged_shift: Vec<usize>,
    pub flags: Vec<String>,
}

impl BrownianDecomposition {
    /// Structural Brownian verdict: every atom placed and `|E|` vanishes on `H_s`.
    pub fn is_brownian(&self) -> bool {
        self.unclassifiable.is_empty() && self.flagged_shift.is_empty()
    }
}

pub fn brownian_decomposition(m: &AtomModel, eps: f64) -> Result<BrownianDecomposition> {
    if !classify_brownian(m, eps)?.quasi_brownian {
        return Err(Error::NotQuasiBrownian);
    }
    let mut out = BrownianDecomposition {
        unitary: vec![],
        shift: vec![],
        spherical: vec![],
        unclassifiable: vec![],
        flagged_shift: vec![],
        flags: vec![],
    };
    for (i, a) in m.atoms.iter().enumerate() {
        let s_one = (a.s - 1.0).abs() <= eps;
        let on_sphere = (a.s * a.s + a.t * a.t - 1.0).abs() <= eps;
        match a.kind {
            AtomKind::Unitary if s_one => out.unitary.push(i),
            AtomKind::Shift if s_one => {
                out.shift.push(i);
                if a.t > eps {
                    out.flagged_shift.push(i);
                    out.flags.push(format!("atom {i}: |E| nonzero on shift part"));
                }
            }
            _ if on_sphere => out.spherical.push(i),
            _ => out.unclassifiable.push(i),
        }
    }
    Ok(out)
}
