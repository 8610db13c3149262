//! Cauchy dual `T′ = T(T*T)⁻¹` inside class Q.
//!
//! `T*T = I ⊕ Ω₁` with `Ω₁ = E*E + Q*Q`, so
//! `T′ = [[V, EΩ₁⁻¹], [0, QΩ₁⁻¹]]` and `σ(|Q′|,|E′|)` is the image of
//! `σ(|Q|,|E|)` under `(s, t) ↦ (s, t)/(s² + t²)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jointspec::{inner_radius, spectral_map, JointSpectrum};
use crate::linalg::{hermitian_eig, inverse_pd};
use crate::model::ShiftEmbedding;

#[derive(Debug, Clone, PartialEq)]
pub struct CauchyDual {
    pub embedding: ShiftEmbedding,
    /// 2-norm condition number of `Ω₁`.
    pub omega_condition: f64,
    /// `‖Ω₁⁻¹‖^{-1/2}`.
    pub margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualDiagnostics {
    pub omega_condition: f64,
    pub margin: f64,
}

impl CauchyDual {
    pub fn diagnostics(&self) -> DualDiagnostics {
        DualDiagnostics {
            omega_condition: self.omega_condition,
            margin: self.margin,
        }
    }
}

pub fn cauchy_dual(emb: &ShiftEmbedding, eps: f64) -> Result<ShiftEmbedding> {
    Ok(cauchy_dual_report(emb, eps)?.embedding)
}

pub fn cauchy_dual_report(emb: &ShiftEmbedding, eps: f64) -> Result<CauchyDual> {
    let omega1 = emb.omega(1);
    let margin = hermitian_eig(&omega1).min().max(0.0).sqrt();
    if margin <= eps {
        return Err(Error::NotLeftInvertible { margin });
    }
    let (inv, cond) = inverse_pd(&omega1).ok_or(Error::NotLeftInvertible { margin })?;
    let e = emb.e() * &inv;
    let q = emb.q() * &inv;
    Ok(CauchyDual {
        embedding: ShiftEmbedding::new(emb.levels(), emb.width(), emb.stride(), emb.v_phase(), e, q)?,
        omega_condition: cond,
        margin,
    })
}

/// `ψ(s, t) = (s, t)/(s² + t²)` applied pointwise.
pub fn dual_spectral_map(sigma: &JointSpectrum) -> Result<JointSpectrum> {
    let margin = inner_radius(sigma)?;
    if margin <= 0.0 {
        return Err(Error::NotLeftInvertible { margin });
    }
    spectral_map(sigma, |s, t| {
        let r2 = s * s + t * t;
        (s / r2, t / r2)
    })
}
