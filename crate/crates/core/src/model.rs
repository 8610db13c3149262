//! Concrete realizations of class-Q operators.
//!
//! * [`PairModel`] is a commuting positive pair standing in for `(|Q|, |E|)`.
//! * [`AtomModel`] is a symbolic quasinormal model built from scaled unitary
//!   and unilateral-shift atoms; it carries `|Q*|` data.
//! * [`ShiftEmbedding`] is a finite truncation of `T = [[V, E], [0, Q]]` in
//!   which `V` is a power of a leveled shift on `H₁ = level 0 ⊕ … ⊕ level L`.
//!
//! A finite `V` cannot be an isometry. The truncated shift drops whatever is
//! pushed past level `L`, so every operation of order `n` is only exact while
//! `n·stride ≤ L`; that bound is the embedding's headroom and is enforced.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jointspec::{self, JointSpectrum, SpectralPoint, DEFAULT_DEDUP_TOL};
use crate::linalg::{self, identity, op_norm, re, real_diag, ComplexMatrix, CLAMP_BAND, DEFAULT_EPS};

/// Commuting positive pair `(A, B)`.
#[derive(Debug, Clone, PartialEq)]
pub enum PairModel {
    Diagonal { a: Vec<f64>, b: Vec<f64> },
    Matrices { a: ComplexMatrix, b: ComplexMatrix },
}

fn clamp_nonneg(v: Vec<f64>) -> Result<Vec<f64>> {
    v.into_iter()
        .map(|x| {
            if !x.is_finite() {
                Err(Error::NonFinite)
            } else if x >= 0.0 {
                Ok(x)
            } else if x >= -CLAMP_BAND {
                Ok(0.0)
            } else {
                Err(Error::NegativeCoordinate(x))
            }
        })
        .collect()
}

impl PairModel {
    pub fn diagonal(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch(format!(
                "diagonal lengths {} and {}",
                a.len(),
                b.len()
            )));
        }
        if a.is_empty() {
            return Err(Error::DimensionMismatch("empty pair".into()));
        }
        Ok(PairModel::Diagonal {
            a: clamp_nonneg(a)?,
            b: clamp_nonneg(b)?,
        })
    }

    /// Validates Hermitian, positive and commuting within `eps` (relative).
    pub fn matrices(a: ComplexMatrix, b: ComplexMatrix, eps: f64) -> Result<Self> {
        if a.shape() != b.shape() || a.nrows() != a.ncols() || a.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "pair shapes {:?} and {:?}",
                a.shape(),
                b.shape()
            )));
        }
        if !linalg::is_finite(&a) || !linalg::is_finite(&b) {
            return Err(Error::NonFinite);
        }
        for m in [&a, &b] {
            let scale = 1.0 + op_norm(m);
            let residual = linalg::hermitian_residual(m);
            if residual > eps * scale {
                return Err(Error::NotHermitian { residual, eps });
            }
            let lo = linalg::hermitian_eig(m).min();
            if lo < -eps * scale {
                return Err(Error::NotPositive { min_eigenvalue: lo });
            }
        }
        let residual = op_norm(&linalg::commutator(&a, &b));
        let bound = eps * (1.0 + op_norm(&a) * op_norm(&b));
        if residual > bound {
            return Err(Error::CommutatorTooLarge { residual, bound });
        }
        Ok(PairModel::Matrices { a, b })
    }

    pub fn dim(&self) -> usize {
        match self {
            PairModel::Diagonal { a, .. } => a.len(),
            PairModel::Matrices { a, .. } => a.nrows(),
        }
    }

    pub fn to_matrices(&self) -> (ComplexMatrix, ComplexMatrix) {
        match self {
            PairModel::Diagonal { a, b } => (real_diag(a), real_diag(b)),
            PairModel::Matrices { a, b } => (a.clone(), b.clone()),
        }
    }

    /// `Ω_n` computed from `(A, B) = (|Q|, |E|)`.
    pub fn omega(&self, n: usize) -> ComplexMatrix {
        let (a, b) = self.to_matrices();
        omega_from_parts(&(&b * &b), &(&a * &a), n)
    }
}

/// `Ω_0 = I`, `Ω_n = E*E·Σ_{j<n}(Q*Q)^j + (Q*Q)^n`.
pub fn omega_from_parts(e_star_e: &ComplexMatrix, q_star_q: &ComplexMatrix, n: usize) -> ComplexMatrix {
    let d = q_star_q.nrows();
    let mut geometric = ComplexMatrix::zeros(d, d);
    let mut power = identity(d);
    for _ in 0..n {
        geometric += &power;
        power = &power * q_star_q;
    }
    e_star_e * geometric + power
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AtomKind {
    Unitary,
    Shift,
}

/// `s·U` (unitary) or `s·S` (unilateral shift) paired with the scalar `|E| = t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QAtom {
    pub kind: AtomKind,
    pub s: f64,
    pub t: f64,
    #[serde(default = "one")]
    pub mult: usize,
}

fn one() -> usize {
    1
}

impl QAtom {
    pub fn new(kind: AtomKind, s: f64, t: f64) -> Self {
        QAtom { kind, s, t, mult: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomModel {
    pub atoms: Vec<QAtom>,
}

impl AtomModel {
    pub fn new(atoms: Vec<QAtom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::EmptyGamma);
        }
        for a in &atoms {
            if !a.s.is_finite() || !a.t.is_finite() {
                return Err(Error::NonFinite);
            }
            if a.s < 0.0 {
                return Err(Error::NegativeCoordinate(a.s));
            }
            if a.t < 0.0 {
                return Err(Error::NegativeCoordinate(a.t));
            }
            if a.mult == 0 {
                return Err(Error::Schema("atom multiplicity must be positive".into()));
            }
        }
        Ok(AtomModel { atoms })
    }

    /// Diagonal `(|Q|, |E|)` with one entry per atom copy.
    pub fn pair(&self) -> PairModel {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for atom in &self.atoms {
            for _ in 0..atom.mult {
                a.push(atom.s);
                b.push(atom.t);
            }
        }
        PairModel::Diagonal { a, b }
    }
}

/// σ(|Q|,|E|) and σ(|Q|,|E|,|Q*|) of an atom model.
///
/// `|s·U*| = s`, while `|s·S*|` has spectrum `{0, s}`.
pub fn atom_spectra(m: &AtomModel) -> Result<(JointSpectrum, JointSpectrum)> {
    let flat = m.atoms.iter().map(|a| SpectralPoint {
        s: a.s,
        t: a.t,
        r: None,
        mult: a.mult,
    });
    let sigma2 = JointSpectrum::from_points(flat, DEFAULT_DEDUP_TOL)?;
    let mut pts = Vec::new();
    for a in &m.atoms {
        pts.push(SpectralPoint {
            mult: a.mult,
            ..SpectralPoint::with_r(a.s, a.t, a.s)
        });
        if a.kind == AtomKind::Shift {
            pts.push(SpectralPoint {
                mult: a.mult,
                ..SpectralPoint::with_r(a.s, a.t, 0.0)
            });
        }
    }
    let sigma3 = JointSpectrum::from_points(pts, DEFAULT_DEDUP_TOL)?;
    Ok((sigma2, sigma3))
}

/// Finite truncation of `T = [[V, E], [0, Q]]`.
///
/// `H₁` has `levels + 1` levels of `width` coordinates each; `V` maps level
/// `i` to level `i + stride` with phase `v_phase` and annihilates anything
/// that would land beyond level `levels`. `E` is stored as the full
/// `H₂ → H₁` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftEmbedding {
    levels: usize,
    width: usize,
    stride: usize,
    v_phase: Complex64,
    e: ComplexMatrix,
    q: ComplexMatrix,
}

impl ShiftEmbedding {
    pub fn new(
        levels: usize,
        width: usize,
        stride: usize,
        v_phase: Complex64,
        e: ComplexMatrix,
        q: ComplexMatrix,
    ) -> Result<Self> {
        if levels == 0 || width == 0 {
            return Err(Error::DimensionMismatch("levels and width must be positive".into()));
        }
        if stride > levels {
            return Err(Error::DimensionMismatch(format!(
                "stride {stride} exceeds truncation depth {levels}"
            )));
        }
        let d = q.nrows();
        if d == 0 || q.ncols() != d {
            return Err(Error::DimensionMismatch(format!("Q has shape {:?}", q.shape())));
        }
        let h1 = (levels + 1) * width;
        if e.shape() != (h1, d) {
            return Err(Error::DimensionMismatch(format!(
                "E has shape {:?}, expected ({h1}, {d})",
                e.shape()
            )));
        }
        if !linalg::is_finite(&e) || !linalg::is_finite(&q) || !v_phase.re.is_finite() || !v_phase.im.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(ShiftEmbedding {
            levels,
            width,
            stride,
            v_phase,
            e,
            q,
        })
    }

    /// Same layout with a different `E`.
    pub fn with_e(&self, e: ComplexMatrix) -> Result<Self> {
        Self::new(self.levels, self.width, self.stride, self.v_phase, e, self.q.clone())
    }

    /// Same layout with a different `Q`.
    pub fn with_q(&self, q: ComplexMatrix) -> Result<Self> {
        Self::new(self.levels, self.width, self.stride, self.v_phase, self.e.clone(), q)
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn v_phase(&self) -> Complex64 {
        self.v_phase
    }

    pub fn e(&self) -> &ComplexMatrix {
        &self.e
    }

    pub fn q(&self) -> &ComplexMatrix {
        &self.q
    }

    pub fn h1_dim(&self) -> usize {
        (self.levels + 1) * self.width
    }

    pub fn h2_dim(&self) -> usize {
        self.q.nrows()
    }

    /// Largest `n` for which `T^n` and `Ω_n` are computed without truncation error.
    pub fn headroom(&self) -> usize {
        self.levels.checked_div(self.stride).unwrap_or(usize::MAX)
    }

    /// The truncated `V` on `H₁`.
    pub fn v_matrix(&self) -> ComplexMatrix {
        let h1 = self.h1_dim();
        let shift = self.stride * self.width;
        ComplexMatrix::from_fn(h1, h1, |i, j| {
            if i == j + shift {
                self.v_phase
            } else {
                Complex64::ZERO
            }
        })
    }

    /// The assembled truncated block matrix `[[V, E], [0, Q]]`.
    pub fn assemble(&self) -> ComplexMatrix {
        let h1 = self.h1_dim();
        let d = self.h2_dim();
        let mut t = ComplexMatrix::zeros(h1 + d, h1 + d);
        t.view_mut((0, 0), (h1, h1)).copy_from(&self.v_matrix());
        t.view_mut((0, h1), (h1, d)).copy_from(&self.e);
        t.view_mut((h1, h1), (d, d)).copy_from(&self.q);
        t
    }

    /// Indices of the assembled matrix on which `(T^n)*(T^n)` is exact:
    /// `H₁` levels `0..=L − n·stride` followed by all of `H₂`.
    pub fn exact_indices(&self, n: usize) -> Result<Vec<usize>> {
        if n > self.headroom() {
            return Err(Error::HeadroomExceeded {
                requested: n,
                headroom: self.headroom(),
            });
        }
        let top = self.levels - n * self.stride;
        let h1 = self.h1_dim();
        let mut idx: Vec<usize> = (0..(top + 1) * self.width).collect();
        idx.extend(h1..h1 + self.h2_dim());
        Ok(idx)
    }

    pub fn e_star_e(&self) -> ComplexMatrix {
        self.e.adjoint() * &self.e
    }

    pub fn q_star_q(&self) -> ComplexMatrix {
        self.q.adjoint() * &self.q
    }

    /// `(|Q|, |E|)` as a matrix pair.
    pub fn modulus_pair(&self) -> Result<PairModel> {
        PairModel::matrices(linalg::modulus(&self.q), linalg::modulus(&self.e), DEFAULT_EPS)
    }

    /// σ(|Q|, |E|).
    pub fn joint_spectrum(&self) -> Result<JointSpectrum> {
        jointspec::joint_spectrum(&self.modulus_pair()?)
    }

    /// `Ω_n` on `H₂`.
    pub fn omega(&self, n: usize) -> ComplexMatrix {
        omega_from_parts(&self.e_star_e(), &self.q_star_q(), n)
    }

    /// `T^n` as an embedding: `V^n`, `E_n`, `Q^n`, built with the recursion
    /// `E_0 = 0`, `E_{k+1} = V E_k + E Q^k`.
    pub fn power(&self, n: usize) -> Result<ShiftEmbedding> {
        if n > self.headroom() {
            return Err(Error::HeadroomExceeded {
                requested: n,
                headroom: self.headroom(),
            });
        }
        let v = self.v_matrix();
        let d = self.h2_dim();
        let mut e_n = ComplexMatrix::zeros(self.h1_dim(), d);
        let mut q_pow = identity(d);
        for _ in 0..n {
            e_n = &v * &e_n + &self.e * &q_pow;
            q_pow = &q_pow * &self.q;
        }
        ShiftEmbedding::new(
            self.levels,
            self.width,
            self.stride * n,
            self.v_phase.powu(n as u32),
            e_n,
            q_pow,
        )
    }
}

/// Per-axiom residual of the class-Q conditions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomCheck {
    pub axiom: &'static str,
    pub residual: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassQReport {
    pub checks: Vec<AxiomCheck>,
    pub verdict: bool,
}

impl ClassQReport {
    pub fn check(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }
}

/// Residuals of `V*V = I` (interior levels), `V*E = 0`, `QE*E = E*EQ` and
/// quasinormality of `Q`.
pub fn validate_class_q(emb: &ShiftEmbedding, eps: f64) -> ClassQReport {
    let v = emb.v_matrix();
    let interior = match emb.headroom() {
        0 => 0,
        _ if emb.stride == 0 => emb.h1_dim(),
        _ => (emb.levels - emb.stride + 1) * emb.width,
    };
    let vv = v.adjoint() * &v;
    let iso = (vv.view((0, 0), (interior, interior)) - ComplexMatrix::identity(interior, interior)).into_owned();
    let ee = emb.e_star_e();
    let qq = emb.q_star_q();
    let nq = op_norm(&emb.q);
    let ne = op_norm(&emb.e);

    let mut checks = Vec::with_capacity(4);
    let mut push = |axiom, residual: f64, bound: f64| {
        checks.push(AxiomCheck {
            axiom,
            residual,
            bound,
            pass: residual <= bound,
        });
    };
    push("isometry", op_norm(&iso), eps);
    push("kernel", op_norm(&(v.adjoint() * &emb.e)), eps * (1.0 + ne));
    push(
        "commutation",
        op_norm(&(&emb.q * &ee - &ee * &emb.q)),
        eps * (1.0 + nq * ne * ne),
    );
    push(
        "quasinormal",
        op_norm(&(&emb.q * &qq - &qq * &emb.q)),
        eps * (1.0 + nq * nq * nq),
    );
    let verdict = checks.iter().all(|c| c.pass);
    ClassQReport { checks, verdict }
}

/// Embedding with `Q = A` and `E = U·B`, where the partial isometry `U` sends
/// the i-th eigenvector of `B` with nonzero eigenvalue to the i-th coordinate
/// of level 0.
pub fn build_from_pair(pair: &PairModel, levels: usize) -> Result<ShiftEmbedding> {
    let d = pair.dim();
    let h1 = (levels + 1) * d;
    let mut e = ComplexMatrix::zeros(h1, d);
    let q = match pair {
        PairModel::Diagonal { a, b } => {
            for (i, &bi) in b.iter().enumerate() {
                e[(i, i)] = re(bi);
            }
            real_diag(a)
        }
        PairModel::Matrices { a, b } => {
            let eig = linalg::hermitian_eig(b);
            let mut row = 0;
            for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
                if lambda <= 0.0 {
                    continue;
                }
                let u = eig.eigenvectors.column(k);
                for c in 0..d {
                    e[(row, c)] = re(lambda) * u[c].conj();
                }
                row += 1;
            }
            a.clone()
        }
    };
    ShiftEmbedding::new(levels, d, 1, re(1.0), e, q)
}

/// Embedding whose σ(|Q|,|E|) is the given finite point set.
pub fn realize_spectrum(gamma: &[(f64, f64)], levels: usize) -> Result<ShiftEmbedding> {
    if gamma.is_empty() {
        return Err(Error::EmptyGamma);
    }
    for &(s, t) in gamma {
        if !s.is_finite() || !t.is_finite() {
            return Err(Error::NonFinite);
        }
        if s < 0.0 {
            return Err(Error::NegativeCoordinate(s));
        }
        if t < 0.0 {
            return Err(Error::NegativeCoordinate(t));
        }
    }
    let pair = PairModel::diagonal(
        gamma.iter().map(|p| p.0).collect(),
        gamma.iter().map(|p| p.1).collect(),
    )?;
    build_from_pair(&pair, levels)
}

/// `Ω_n` of an embedding; see [`omega_from_parts`].
pub fn omega(emb: &ShiftEmbedding, n: usize) -> ComplexMatrix {
    emb.omega(n)
}

/// `T₁T₂ = [[V₁V₂, V₁E₂ + E₁Q₂], [0, Q₁Q₂]]`, after checking the product
/// hypotheses.
pub fn compose(t1: &ShiftEmbedding, t2: &ShiftEmbedding, eps: f64) -> Result<ShiftEmbedding> {
    if t1.levels != t2.levels || t1.width != t2.width || t1.h2_dim() != t2.h2_dim() {
        return Err(Error::DimensionMismatch(
            "factors must share levels, width and H₂ dimension".into(),
        ));
    }
    let stride = t1.stride + t2.stride;
    if stride > t1.levels {
        return Err(Error::HeadroomExceeded {
            requested: stride,
            headroom: t1.levels,
        });
    }
    let (q1, q2) = (&t1.q, &t2.q);
    let checks: [(&str, &ComplexMatrix, ComplexMatrix); 5] = [
        ("Q1 commutes with Q2*Q2", q1, t2.q_star_q()),
        ("Q2 commutes with Q1*Q1", q2, t1.q_star_q()),
        ("Q1 commutes with E2*E2", q1, t2.e_star_e()),
        ("Q2 commutes with E1*E1", q2, t1.e_star_e()),
        ("Q1 commutes with Q2", q1, q2.clone()),
    ];
    for (condition, x, y) in checks {
        let residual = op_norm(&linalg::commutator(x, &y));
        if residual > eps * (1.0 + op_norm(x) * op_norm(&y)) {
            return Err(Error::HypothesisViolated {
                condition: condition.to_string(),
                residual,
            });
        }
    }
    let e = t1.v_matrix() * &t2.e + &t1.e * q2;
    ShiftEmbedding::new(t1.levels, t1.width, stride, t1.v_phase * t2.v_phase, e, q1 * q2)
}

/// `[[z₁V, z₂E], [0, z₃Q]]` with `|z₁| = 1` and `|z₂|, |z₃| ≤ 1`.
pub fn scale_entries(
    emb: &ShiftEmbedding,
    z1: Complex64,
    z2: Complex64,
    z3: Complex64,
) -> Result<ShiftEmbedding> {
    const TOL: f64 = 1e-12;
    if (z1.norm() - 1.0).abs() > TOL {
        return Err(Error::ModulusConstraintViolated(format!("|z1| = {} ≠ 1", z1.norm())));
    }
    if z2.norm() > 1.0 + TOL || z3.norm() > 1.0 + TOL {
        return Err(Error::ModulusConstraintViolated(format!(
            "|z2| = {}, |z3| = {} must not exceed 1",
            z2.norm(),
            z3.norm()
        )));
    }
    ShiftEmbedding::new(
        emb.levels,
        emb.width,
        emb.stride,
        emb.v_phase * z1,
        &emb.e * z2,
        &emb.q * z3,
    )
}

/// `‖T‖ = max{1, r(|Q|,|E|)}`.
pub fn operator_norm(emb: &ShiftEmbedding) -> Result<f64> {
    Ok(jointspec::radius(&emb.joint_spectrum()?)?.max(1.0))
}

/// Largest singular value of the assembled truncated matrix.
pub fn assembled_norm(emb: &ShiftEmbedding) -> f64 {
    op_norm(&emb.assemble())
}

/// Two-part model: `Q = τ ⊕ Q̃`, `E = η·P` with `P` the projection of the
/// first `H₂` coordinate onto the first coordinate of level 0 (`ker V*`).
/// σ(|Q|,|E|) = {(|τ|,|η|)} ∪ (σ(|Q̃|) × {0}).
pub fn corner_model(
    tau: Complex64,
    eta: Complex64,
    q_tail: &ComplexMatrix,
    levels: usize,
) -> Result<ShiftEmbedding> {
    let d = 1 + q_tail.nrows();
    let mut q = ComplexMatrix::zeros(d, d);
    q[(0, 0)] = tau;
    q.view_mut((1, 1), (d - 1, d - 1)).copy_from(q_tail);
    let mut e = ComplexMatrix::zeros((levels + 1) * d, d);
    e[(0, 0)] = eta;
    ShiftEmbedding::new(levels, d, 1, re(1.0), e, q)
}
