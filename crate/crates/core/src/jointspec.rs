//! Taylor spectrum of a commuting positive pair, stored as a finite point set.
//!
//! For commuting selfadjoint operators the Taylor spectrum is the support of
//! the joint spectral measure; at desk scale that support is the set of joint
//! eigenvalues. Points are kept with multiplicities, which region tests
//! ignore.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::fmt17;
use crate::linalg::{self, CLAMP_BAND, DEFAULT_EPS};
use crate::model::PairModel;

/// Default absolute tolerance under which two points are identified.
pub const DEFAULT_DEDUP_TOL: f64 = 1e-8;

/// A point `(s, t)` of σ(|Q|,|E|), optionally with the |Q*|-coordinate `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    pub s: f64,
    pub t: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    pub mult: usize,
}

impl SpectralPoint {
    pub fn new(s: f64, t: f64) -> Self {
        SpectralPoint { s, t, r: None, mult: 1 }
    }

    pub fn with_r(s: f64, t: f64, r: f64) -> Self {
        SpectralPoint { s, t, r: Some(r), mult: 1 }
    }

    /// Squared Euclidean norm `s² + t²`.
    #[inline]
    pub fn norm_sqr(&self) -> f64 {
        self.s * self.s + self.t * self.t
    }

    fn close_to(&self, other: &SpectralPoint, tol: f64) -> bool {
        let r_close = match (self.r, other.r) {
            (None, None) => true,
            (Some(a), Some(b)) => (a - b).abs() <= tol,
            _ => false,
        };
        r_close && (self.s - other.s).abs() <= tol && (self.t - other.t).abs() <= tol
    }
}

fn clamp_coordinate(x: f64, clamped: &mut usize) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite);
    }
    if x >= 0.0 {
        Ok(x)
    } else if x >= -CLAMP_BAND {
        *clamped += 1;
        Ok(0.0)
    } else {
        Err(Error::NegativeCoordinate(x))
    }
}

/// Finite multiset of points in ℝ₊² (or ℝ₊³ when `r` is tracked).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointSpectrum {
    points: Vec<SpectralPoint>,
    dedup_tol: f64,
    /// Number of coordinates rounded up from `[-1e-10, 0)` to zero.
    clamped: usize,
}

impl JointSpectrum {
    pub fn empty(dedup_tol: f64) -> Self {
        JointSpectrum {
            points: Vec::new(),
            dedup_tol,
            clamped: 0,
        }
    }

    /// Builds a spectrum from raw points, clamping roundoff negatives.
    pub fn from_points<I>(points: I, dedup_tol: f64) -> Result<Self>
    where
        I: IntoIterator<Item = SpectralPoint>,
    {
        let mut out = JointSpectrum::empty(dedup_tol);
        for mut p in points {
            p.s = clamp_coordinate(p.s, &mut out.clamped)?;
            p.t = clamp_coordinate(p.t, &mut out.clamped)?;
            if let Some(r) = p.r {
                p.r = Some(clamp_coordinate(r, &mut out.clamped)?);
            }
            out.insert(p);
        }
        Ok(out)
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::from_points(
            pairs.iter().map(|&(s, t)| SpectralPoint::new(s, t)),
            DEFAULT_DEDUP_TOL,
        )
    }

    fn insert(&mut self, p: SpectralPoint) {
        let tol = self.dedup_tol;
        match self.points.iter_mut().find(|q| q.close_to(&p, tol)) {
            Some(q) => q.mult += p.mult,
            None => self.points.push(p),
        }
    }

    pub fn points(&self) -> &[SpectralPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dedup_tol(&self) -> f64 {
        self.dedup_tol
    }

    pub fn clamped(&self) -> usize {
        self.clamped
    }

    pub fn has_r(&self) -> bool {
        self.points.iter().any(|p| p.r.is_some())
    }

    /// Set equality up to the dedup tolerance, ignoring multiplicities.
    pub fn same_set(&self, other: &JointSpectrum) -> bool {
        let tol = self.dedup_tol.max(other.dedup_tol);
        self.points
            .iter()
            .all(|p| other.points.iter().any(|q| p.close_to(q, tol)))
            && other
                .points
                .iter()
                .all(|q| self.points.iter().any(|p| p.close_to(q, tol)))
    }

    pub fn contains(&self, s: f64, t: f64) -> bool {
        let probe = SpectralPoint::new(s, t);
        self.points.iter().any(|p| {
            SpectralPoint { r: None, ..*p }.close_to(&probe, self.dedup_tol)
        })
    }

    /// CSV with header `s,t[,r],mult` and 17 significant digits.
    pub fn to_csv(&self) -> String {
        let with_r = self.has_r();
        let mut out = String::from(if with_r { "s,t,r,mult\n" } else { "s,t,mult\n" });
        for p in &self.points {
            out.push_str(&fmt17(p.s));
            out.push(',');
            out.push_str(&fmt17(p.t));
            if with_r {
                out.push(',');
                out.push_str(&fmt17(p.r.unwrap_or(0.0)));
            }
            out.push(',');
            out.push_str(&p.mult.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the format written by [`JointSpectrum::to_csv`]. The `mult`
    /// column is optional.
    pub fn from_csv(text: &str, dedup_tol: f64) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<String> = match lines.next() {
            Some(h) => h.split(',').map(|c| c.trim().to_ascii_lowercase()).collect(),
            None => return Ok(JointSpectrum::empty(dedup_tol)),
        };
        let col = |name: &str| header.iter().position(|c| c == name);
        let (si, ti) = match (col("s"), col("t")) {
            (Some(s), Some(t)) => (s, t),
            _ => return Err(Error::Schema("CSV header must contain `s` and `t`".into())),
        };
        let (ri, mi) = (col("r"), col("mult"));
        let mut points = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let cells: Vec<&str> = line.split(',').map(str::trim).collect();
            let num = |i: usize| -> Result<f64> {
                cells
                    .get(i)
                    .and_then(|c| c.parse::<f64>().ok())
                    .ok_or_else(|| Error::Schema(format!("CSV line {}: bad number", lineno + 2)))
            };
            let mut p = SpectralPoint::new(num(si)?, num(ti)?);
            if let Some(ri) = ri {
                p.r = Some(num(ri)?);
            }
            if let Some(mi) = mi {
                p.mult = cells
                    .get(mi)
                    .and_then(|c| c.parse::<usize>().ok())
                    .filter(|&m| m > 0)
                    .ok_or_else(|| Error::Schema(format!("CSV line {}: bad mult", lineno + 2)))?;
            }
            points.push(p);
        }
        Self::from_points(points, dedup_tol)
    }
}

/// σ(A, B) of a commuting positive pair.
pub fn joint_spectrum(pair: &PairModel) -> Result<JointSpectrum> {
    joint_spectrum_with(pair, DEFAULT_EPS, DEFAULT_DEDUP_TOL)
}

pub fn joint_spectrum_with(pair: &PairModel, eps: f64, dedup_tol: f64) -> Result<JointSpectrum> {
    match pair {
        PairModel::Diagonal { a, b } => JointSpectrum::from_points(
            a.iter().zip(b).map(|(&s, &t)| SpectralPoint::new(s, t)),
            dedup_tol,
        ),
        PairModel::Matrices { a, b } => {
            let jd = linalg::simultaneous_diagonalize(a, b, eps)?;
            JointSpectrum::from_points(
                jd.a.iter().zip(&jd.b).map(|(&s, &t)| SpectralPoint::new(s, t)),
                dedup_tol,
            )
        }
    }
}

/// Image of σ under `psi`; multiplicities of merged points add up.
pub fn spectral_map<F>(sigma: &JointSpectrum, psi: F) -> Result<JointSpectrum>
where
    F: Fn(f64, f64) -> (f64, f64),
{
    let tol = sigma.dedup_tol;
    let mut out = JointSpectrum::empty(tol);
    for p in &sigma.points {
        let (s, t) = psi(p.s, p.t);
        if !s.is_finite() || !t.is_finite() {
            return Err(Error::NonFinite);
        }
        if s < -tol || t < -tol {
            return Err(Error::ImageOutsideQuadrant { s, t });
        }
        out.insert(SpectralPoint {
            s: s.max(0.0),
            t: t.max(0.0),
            r: None,
            mult: p.mult,
        });
    }
    Ok(out)
}

/// Geometric spectral radius `max √(s²+t²)`.
pub fn radius(sigma: &JointSpectrum) -> Result<f64> {
    sigma
        .points
        .iter()
        .map(|p| p.norm_sqr().sqrt())
        .reduce(f64::max)
        .ok_or(Error::EmptySpectrum)
}

/// `min √(s²+t²)`; zero means `A² + B²` is not invertible.
pub fn inner_radius(sigma: &JointSpectrum) -> Result<f64> {
    sigma
        .points
        .iter()
        .map(|p| p.norm_sqr().sqrt())
        .reduce(f64::min)
        .ok_or(Error::EmptySpectrum)
}

/// Spectrum of a finite orthogonal sum.
pub fn union(sigma1: &JointSpectrum, sigma2: &JointSpectrum) -> JointSpectrum {
    let mut out = sigma1.clone();
    out.dedup_tol = sigma1.dedup_tol.max(sigma2.dedup_tol);
    out.clamped += sigma2.clamped;
    for p in &sigma2.points {
        out.insert(*p);
    }
    out
}

/// True iff σ lies on the coordinate axes, i.e. `AB = 0`.
pub fn product_vanishes(sigma: &JointSpectrum, eps: f64) -> bool {
    sigma.points.iter().all(|p| p.s * p.t <= eps)
}

/// Coordinate projections σ(A) and σ(B), each deduplicated, in first-seen order.
pub fn projections(sigma: &JointSpectrum) -> (Vec<f64>, Vec<f64>) {
    let tol = sigma.dedup_tol;
    let mut first: Vec<f64> = Vec::new();
    let mut second: Vec<f64> = Vec::new();
    for p in &sigma.points {
        if !first.iter().any(|x| (x - p.s).abs() <= tol) {
            first.push(p.s);
        }
        if !second.iter().any(|x| (x - p.t).abs() <= tol) {
            second.push(p.t);
        }
    }
    (first, second)
}
