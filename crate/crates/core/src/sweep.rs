//! Grid sweeps comparing the region classifier with the moment oracle.

use serde::Serialize;

use crate::exec::Exec;
use crate::jointspec::SpectralPoint;
use crate::moments::point_subnormality_oracle_with;
use crate::regions::{region_membership, RegionId};

/// Uniform `n_s × n_t` grid over `[s0, s1] × [t0, t1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub s_range: (f64, f64),
    pub t_range: (f64, f64),
    pub n_s: usize,
    pub n_t: usize,
}

impl GridSpec {
    pub fn square(lo: f64, hi: f64, n: usize) -> Self {
        GridSpec {
            s_range: (lo, hi),
            t_range: (lo, hi),
            n_s: n,
            n_t: n,
        }
    }

    fn axis(range: (f64, f64), n: usize) -> Vec<f64> {
        match n {
            0 => vec![],
            1 => vec![range.0],
            _ => (0..n)
                .map(|i| range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        let ts = Self::axis(self.t_range, self.n_t);
        Self::axis(self.s_range, self.n_s)
            .into_iter()
            .flat_map(|s| ts.iter().map(move |&t| (s, t)))
            .collect()
    }
}

/// Distance of `(s, t)` from the frontier pieces of the subnormal region:
/// the unit circle, the `s` axis, and the line `s = 1`.
pub fn frontier_distance(s: f64, t: f64) -> f64 {
    let circle = ((s * s + t * t).sqrt() - 1.0).abs();
    circle.min(t.abs()).min((s - 1.0).abs())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementSummary {
    pub total: usize,
    pub excluded: usize,
    pub compared: usize,
    pub agreed: usize,
    pub disagreements: Vec<(f64, f64)>,
}

impl AgreementSummary {
    pub fn all_agree(&self) -> bool {
        self.disagreements.is_empty() && self.compared == self.agreed
    }
}

/// Compares `Subnormal` membership with the Hankel oracle of order `k` at
/// every grid point at least `exclusion` away from the region frontier.
pub fn compare_region_with_oracle(
    grid: &GridSpec,
    k: usize,
    exclusion: f64,
    eps: f64,
    exec: Exec,
) -> AgreementSummary {
    let pts = grid.points();
    let verdicts = exec.map(&pts, |&(s, t)| {
        if frontier_distance(s, t) < exclusion {
            return None;
        }
        let region = region_membership(&SpectralPoint::new(s, t), RegionId::Subnormal, eps).counts_inside();
        let oracle = point_subnormality_oracle_with(s, t, k, eps).passed();
        Some(region == oracle)
    });
    let mut out = AgreementSummary {
        total: pts.len(),
        excluded: 0,
        compared: 0,
        agreed: 0,
        disagreements: vec![],
    };
    for (p, v) in pts.iter().zip(verdicts) {
        match v {
            None => out.excluded += 1,
            Some(ok) => {
                out.compared += 1;
                if ok {
                    out.agreed += 1;
                } else {
                    out.disagreements.push(*p);
                }
            }
        }
    }
    out
}
