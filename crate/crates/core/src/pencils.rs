//! Subnormality intervals of the pencils
//! `T†(λ) = [[V, λE], [0, Q]]` and `T_†(λ) = [[V, E], [0, λQ]]`.
//!
//! Scaling `E` (resp. `Q`) by `λ ≥ 0` scales the `t` (resp. `s`) coordinate of
//! `σ(|Q|,|E|)`, so both intervals have closed forms over the finite spectrum.
//! [`pencil_scan`] checks them by brute force.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::jointspec::{JointSpectrum, SpectralPoint};
use crate::linalg::{re, DEFAULT_EPS};
use crate::model::ShiftEmbedding;
use crate::regions::{region_membership, RegionId};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "beta")]
pub enum SubnormalityInterval {
    Empty,
    /// `{0}`.
    Degenerate0,
    /// `[0, β]` with `β > 0`.
    Closed(f64),
    AllOfRPlus,
}

impl SubnormalityInterval {
    pub fn contains(&self, alpha: f64) -> bool {
        match *self {
            SubnormalityInterval::Empty => false,
            SubnormalityInterval::Degenerate0 => alpha == 0.0,
            SubnormalityInterval::Closed(beta) => (0.0..=beta).contains(&alpha),
            SubnormalityInterval::AllOfRPlus => alpha >= 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Pencil {
    /// `λ` multiplies `E`.
    E,
    /// `λ` multiplies `Q`.
    Q,
}

/// Points with `t > eps`.
fn sharp(sigma: &JointSpectrum, eps: f64) -> impl Iterator<Item = &SpectralPoint> {
    sigma.points().iter().filter(move |p| p.t > eps)
}

/// Points with `s > eps` and `t > eps`.
fn flat(sigma: &JointSpectrum, eps: f64) -> impl Iterator<Item = &SpectralPoint> {
    sigma.points().iter().filter(move |p| p.s > eps && p.t > eps)
}

/// `β† = min over σ♯ of √((1 − s²)/t²)`.
pub fn beta_dagger(sigma: &JointSpectrum) -> Result<f64> {
    beta_dagger_with(sigma, DEFAULT_EPS)
}

pub fn beta_dagger_with(sigma: &JointSpectrum, eps: f64) -> Result<f64> {
    let mut beta = f64::INFINITY;
    let mut any = false;
    for p in sharp(sigma, eps) {
        any = true;
        if p.s > 1.0 + eps {
            return Err(Error::PreconditionViolated(format!(
                "sharp point ({}, {}) has s > 1",
                p.s, p.t
            )));
        }
        beta = beta.min(((1.0 - p.s * p.s).max(0.0) / (p.t * p.t)).sqrt());
    }
    if !any {
        return Err(Error::EmptySharpPart);
    }
    Ok(beta)
}

/// `Sub^E(T) = {λ ≥ 0 : T†(λ) subnormal}`.
pub fn sub_e(sigma: &JointSpectrum) -> Result<SubnormalityInterval> {
    sub_e_with(sigma, DEFAULT_EPS)
}

pub fn sub_e_with(sigma: &JointSpectrum, eps: f64) -> Result<SubnormalityInterval> {
    if sigma.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    Ok(match beta_dagger_with(sigma, eps) {
        // E = 0: every T†(λ) equals V ⊕ Q, which is quasinormal.
        Err(Error::EmptySharpPart) => SubnormalityInterval::AllOfRPlus,
        Err(Error::PreconditionViolated(_)) => SubnormalityInterval::Degenerate0,
        Err(e) => return Err(e),
        Ok(0.0) => SubnormalityInterval::Degenerate0,
        Ok(beta) => SubnormalityInterval::Closed(beta),
    })
}

/// `β_† = min over σ♭ of √((1 − t²)/s²)`.
pub fn beta_sub(sigma: &JointSpectrum) -> Result<f64> {
    beta_sub_with(sigma, DEFAULT_EPS)
}

pub fn beta_sub_with(sigma: &JointSpectrum, eps: f64) -> Result<f64> {
    let max_t = sigma.points().iter().map(|p| p.t).fold(0.0, f64::max);
    if max_t > 1.0 + eps {
        return Err(Error::ENormExceedsOne(max_t));
    }
    flat(sigma, eps)
        .map(|p| ((1.0 - p.t * p.t).max(0.0) / (p.s * p.s)).sqrt())
        .reduce(f64::min)
        .ok_or(Error::EmptyFlatPart)
}

/// `Sub_Q(T) = {λ ≥ 0 : T_†(λ) subnormal}`.
pub fn sub_q(sigma: &JointSpectrum) -> Result<SubnormalityInterval> {
    sub_q_with(sigma, DEFAULT_EPS)
}

pub fn sub_q_with(sigma: &JointSpectrum, eps: f64) -> Result<SubnormalityInterval> {
    if sigma.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    Ok(match beta_sub_with(sigma, eps) {
        Err(Error::ENormExceedsOne(_)) => SubnormalityInterval::Empty,
        Err(Error::EmptyFlatPart) => SubnormalityInterval::AllOfRPlus,
        Err(e) => return Err(e),
        Ok(0.0) => SubnormalityInterval::Degenerate0,
        Ok(beta) => SubnormalityInterval::Closed(beta),
    })
}

/// Closed-form interval for either pencil.
pub fn subnormality_interval(sigma: &JointSpectrum, which: Pencil, eps: f64) -> Result<SubnormalityInterval> {
    match which {
        Pencil::E => sub_e_with(sigma, eps),
        Pencil::Q => sub_q_with(sigma, eps),
    }
}

/// The pencil member as an explicit embedding.
pub fn pencil_member(emb: &ShiftEmbedding, which: Pencil, alpha: f64) -> Result<ShiftEmbedding> {
    match which {
        Pencil::E => emb.with_e(emb.e() * re(alpha)),
        Pencil::Q => emb.with_q(emb.q() * re(alpha)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub alpha: f64,
    pub subnormal: bool,
}

/// Subnormal verdict of each pencil member over `alphas`.
pub fn pencil_scan(emb: &ShiftEmbedding, which: Pencil, alphas: &[f64], exec: Exec) -> Result<Vec<ScanRow>> {
    Ok(pencil_scan_spectrum(&emb.joint_spectrum()?, which, alphas, DEFAULT_EPS, exec))
}

pub fn pencil_scan_spectrum(
    sigma: &JointSpectrum,
    which: Pencil,
    alphas: &[f64],
    eps: f64,
    exec: Exec,
) -> Vec<ScanRow> {
    exec.map(alphas, |&alpha| {
        let subnormal = sigma.points().iter().all(|p| {
            let q = match which {
                Pencil::E => SpectralPoint::new(p.s, alpha * p.t),
                Pencil::Q => SpectralPoint::new(alpha * p.s, p.t),
            };
            region_membership(&q, RegionId::Subnormal, eps).counts_inside()
        });
        ScanRow { alpha, subnormal }
    })
}

/// `start, start + step, …` up to `stop` inclusive (with a relative slack of
/// `1e-9` steps so that `0:2:0.25` ends at `2`).
pub fn grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= 0.0 || stop < start {
        return Err(Error::PreconditionViolated(format!(
            "grid {start}:{stop}:{step} needs step > 0 and start ≤ stop"
        )));
    }
    if start < 0.0 {
        return Err(Error::NegativeCoordinate(start));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

/// Largest `α` of a scan whose verdict is true.
pub fn last_subnormal(scan: &[ScanRow]) -> Option<f64> {
    scan.iter().filter(|r| r.subnormal).map(|r| r.alpha).reduce(f64::max)
}
