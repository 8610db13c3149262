//! Moment-problem oracle, independent of the region predicates.
//!
//! A point `(s, t)` of the spectrum is subnormal iff `φ_n(s, t)` is a Stieltjes
//! moment sequence. Positivity is checked on truncated Hankel matrices. For
//! finite atomic spectral measures the quantifier over vectors reduces to a
//! quantifier over atoms, so a per-point test is complete.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, is_psd, re, ComplexMatrix, DEFAULT_EPS};

/// Default truncation order for the point oracle.
pub const DEFAULT_HANKEL_ORDER: usize = 3;

/// Below this distance from `s = 1` the linear-growth branch is used.
const S_ONE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSequence {
    gamma: Vec<f64>,
}

impl MomentSequence {
    pub fn new(gamma: Vec<f64>) -> Result<Self> {
        if gamma.len() < 2 {
            return Err(Error::InsufficientLength {
                needed: 2,
                got: gamma.len(),
            });
        }
        if gamma.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(MomentSequence { gamma })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.gamma
    }
}

/// Finite signed measure on ℝ, as `(location, weight)` pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomicMeasure {
    pub atoms: Vec<(f64, f64)>,
}

impl AtomicMeasure {
    pub fn new(atoms: Vec<(f64, f64)>) -> Self {
        AtomicMeasure { atoms }
    }

    pub fn dirac(x: f64) -> Self {
        AtomicMeasure { atoms: vec![(x, 1.0)] }
    }

    /// `∫ x^n dμ`.
    pub fn moment(&self, n: usize) -> f64 {
        self.atoms.iter().map(|&(x, w)| w * x.powi(n as i32)).sum()
    }

    pub fn moments(&self, count: usize) -> Vec<f64> {
        (0..count).map(|n| self.moment(n)).collect()
    }

    pub fn is_positive(&self) -> bool {
        self.atoms.iter().all(|&(_, w)| w >= 0.0)
    }

    /// Total weight at locations within `tol` of `x`.
    pub fn mass_at(&self, x: f64, tol: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|&&(y, _)| (y - x).abs() <= tol)
            .map(|&(_, w)| w)
            .sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|&(_, w)| w).sum()
    }
}

/// `φ_0 = 1`, `φ_n = t²·Σ_{j<n} s^{2j} + s^{2n}`.
pub fn phi(n: usize, s: f64, t: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let t2 = t * t;
    if s == 1.0 {
        return 1.0 + n as f64 * t2;
    }
    let s2 = s * s;
    let mut geometric = 0.0;
    let mut power = 1.0;
    for _ in 0..n {
        geometric += power;
        power *= s2;
    }
    t2 * geometric + power
}

/// `μ_{s,t} = t²/(1−s²)·δ₁ + (1 − t²/(1−s²))·δ_{s²}`, the signed measure with
/// moments `φ_n(s, t)`.
pub fn mu_weights(s: f64, t: f64) -> Result<AtomicMeasure> {
    if (s - 1.0).abs() <= S_ONE_TOL {
        return Err(Error::SEqualsOne);
    }
    let w1 = t * t / (1.0 - s * s);
    Ok(AtomicMeasure {
        atoms: vec![(1.0, w1), (s * s, 1.0 - w1)],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HankelKind {
    Hankel,
    Shifted,
}

/// Offending Hankel matrix of a failed test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HankelWitness {
    pub kind: HankelKind,
    pub matrix: Vec<Vec<f64>>,
    pub min_eigenvalue: f64,
}

impl HankelWitness {
    pub fn determinant(&self) -> f64 {
        let n = self.matrix.len();
        nalgebra::DMatrix::from_fn(n, n, |i, j| self.matrix[i][j]).determinant()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "UPPERCASE")]
pub enum OracleVerdict {
    Pass,
    Fail(HankelWitness),
}

impl OracleVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, OracleVerdict::Pass)
    }

    pub fn witness(&self) -> Option<&HankelWitness> {
        match self {
            OracleVerdict::Pass => None,
            OracleVerdict::Fail(w) => Some(w),
        }
    }
}

fn hankel(gamma: &[f64], k: usize, shift: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(k + 1, k + 1, |i, j| re(gamma[i + j + shift]))
}

fn psd_or_witness(h: ComplexMatrix, kind: HankelKind, eps: f64) -> Option<HankelWitness> {
    let eig = hermitian_eig(&h);
    let scale = 1.0 + eig.eigenvalues.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
    // Hankel matrices of real sequences are exactly symmetric.
    if is_psd(&h, eps * scale).unwrap_or(false) {
        return None;
    }
    Some(HankelWitness {
        kind,
        matrix: (0..h.nrows()).map(|i| (0..h.ncols()).map(|j| h[(i, j)].re).collect()).collect(),
        min_eigenvalue: eig.min(),
    })
}

/// Only `H_k = [γ_{i+j}]`, the truncated Hamburger condition.
pub fn hamburger_oracle(gamma: &[f64], k: usize, eps: f64) -> Result<OracleVerdict> {
    let needed = 2 * k + 1;
    if gamma.len() < needed {
        return Err(Error::InsufficientLength { needed, got: gamma.len() });
    }
    Ok(match psd_or_witness(hankel(gamma, k, 0), HankelKind::Hankel, eps) {
        None => OracleVerdict::Pass,
        Some(w) => OracleVerdict::Fail(w),
    })
}

/// PASS iff `H_k = [γ_{i+j}]` and `H'_k = [γ_{i+j+1}]` are both PSD, with
/// tolerance `eps·(1 + ‖H‖)`.
pub fn stieltjes_oracle(gamma: &[f64], k: usize, eps: f64) -> Result<OracleVerdict> {
    let needed = 2 * k + 2;
    if gamma.len() < needed {
        return Err(Error::InsufficientLength { needed, got: gamma.len() });
    }
    for (shift, kind) in [(0, HankelKind::Hankel), (1, HankelKind::Shifted)] {
        if let Some(w) = psd_or_witness(hankel(gamma, k, shift), kind, eps) {
            return Ok(OracleVerdict::Fail(w));
        }
    }
    Ok(OracleVerdict::Pass)
}

/// Stieltjes test of `φ_0(s,t), …, φ_{2K+1}(s,t)`. `K = 1` already detects every
/// failure in this two-atom family; larger `K` only adds margin.
pub fn point_subnormality_oracle(s: f64, t: f64, k: usize) -> OracleVerdict {
    point_subnormality_oracle_with(s, t, k, DEFAULT_EPS)
}

pub fn point_subnormality_oracle_with(s: f64, t: f64, k: usize, eps: f64) -> OracleVerdict {
    let k = k.max(1);
    let gamma: Vec<f64> = (0..2 * k + 2).map(|n| phi(n, s, t)).collect();
    stieltjes_oracle(&gamma, k, eps).expect("length is exactly 2K+2")
}

/// `m`-fold forward difference.
pub fn finite_difference(gamma: &[f64], m: usize) -> Result<Vec<f64>> {
    if gamma.len() <= m {
        return Err(Error::InsufficientLength {
            needed: m + 1,
            got: gamma.len(),
        });
    }
    let mut cur = gamma.to_vec();
    for _ in 0..m {
        cur = cur.windows(2).map(|w| w[1] - w[0]).collect();
    }
    Ok(cur)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerturbationOutcome {
    pub is_moment: bool,
    pub new_measure: Option<AtomicMeasure>,
}

/// Coefficients at or below this magnitude do not count towards the degree.
const COEF_TOL: f64 = 1e-12;

/// Decides whether `γ_n + p(n)` is a Stieltjes moment sequence when `γ` is
/// the moment sequence of a positive compactly supported `μ`: only constant
/// `p` with `μ({1}) + p(0) ≥ 0` qualify, and then the representing measure
/// is `μ + p(0)·δ₁`.
pub fn polynomial_perturbation_test(mu: &AtomicMeasure, p: &[f64]) -> PerturbationOutcome {
    let degree = p.iter().rposition(|c| c.abs() > COEF_TOL).unwrap_or(0);
    let p0 = p.first().copied().unwrap_or(0.0);
    let mass_one = mu.mass_at(1.0, COEF_TOL);
    if degree > 0 || mass_one + p0 < 0.0 {
        return PerturbationOutcome {
            is_moment: false,
            new_measure: None,
        };
    }
    let mut atoms = mu.atoms.clone();
    match atoms.iter_mut().find(|(x, _)| (*x - 1.0).abs() <= COEF_TOL) {
        Some(atom) => atom.1 += p0,
        None if p0 != 0.0 => atoms.push((1.0, p0)),
        None => {}
    }
    PerturbationOutcome {
        is_moment: true,
        new_measure: Some(AtomicMeasure { atoms }),
    }
}
