//! Acceptance criteria. Prints one PASS/FAIL line per criterion, then fails
//! if any criterion failed. Run with `--nocapture` to see the lines.

mod common;

use std::time::Instant;

use num_complex::Complex64;
use qbs::dual::{cauchy_dual, dual_spectral_map};
use qbs::jointspec::joint_spectrum;
use qbs::linalg::{hermitian_eig, is_psd, op_norm, re, ComplexMatrix};
use qbs::model::{assembled_norm, atom_spectra, corner_model, operator_norm, realize_spectrum};
use qbs::moments::{finite_difference, polynomial_perturbation_test, stieltjes_oracle, AtomicMeasure};
use qbs::pencils::{beta_dagger, grid, last_subnormal, pencil_scan, sub_q, Pencil, SubnormalityInterval};
use qbs::regions::{brownian_decomposition, classify_brownian, lambda_m, psi_m};
use qbs::sweep::{compare_region_with_oracle, GridSpec};
use qbs::{classify, AtomKind, AtomModel, Error, Exec, JointSpectrum, PairModel, QAtom, RegionId};
use rand::Rng;

const EPS: f64 = 1e-9;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn verdict(sigma: &JointSpectrum, region: RegionId) -> bool {
    classify(sigma, region, EPS).unwrap().verdict
}

fn c1_region_oracle() -> Outcome {
    let start = Instant::now();
    let s = compare_region_with_oracle(&GridSpec::square(0.0, 2.0, 41), 3, 1e-6, EPS, Exec::default());
    let secs = start.elapsed().as_secs_f64();
    outcome(
        s.all_agree() && s.compared > 0 && secs < 10.0,
        format!(
            "{}/{} compared points agree ({} excluded), {:.3} s",
            s.agreed, s.compared, s.excluded, secs
        ),
    )
}

fn c2_lambda_bridge() -> Outcome {
    let mut rng = common::rng(2);
    let mut worst = 0.0_f64;
    let mut mismatches = 0;
    let mut cases = 0;
    for _ in 0..100 {
        let d = rng.random_range(1..=8);
        let pts = common::lattice_points(&mut rng, d);
        let u = common::random_unitary(&mut rng, d);
        let a = common::conj_diag(&u, &pts.iter().map(|p| re(p.0)).collect::<Vec<_>>());
        let b = common::conj_diag(&u, &pts.iter().map(|p| re(p.1)).collect::<Vec<_>>());
        let pair = PairModel::matrices(a, b, EPS).unwrap();
        let sigma = JointSpectrum::from_pairs(&pts).unwrap();
        for m in 1..=6u32 {
            cases += 1;
            let lam = lambda_m(&pair, m);
            let mut got = hermitian_eig(&lam).eigenvalues;
            let mut want: Vec<f64> = pts.iter().map(|&(s, t)| psi_m(m, s, t)).collect();
            got.sort_by(f64::total_cmp);
            want.sort_by(f64::total_cmp);
            for (g, w) in got.iter().zip(&want) {
                worst = worst.max((g - w).abs());
            }
            let tol = EPS * (1.0 + op_norm(&lam));
            let contractive = is_psd(&lam, tol).unwrap();
            let expansive = is_psd(&(-lam), tol).unwrap();
            if contractive != verdict(&sigma, RegionId::MContractive(m))
                || expansive != verdict(&sigma, RegionId::MExpansive(m))
            {
                mismatches += 1;
            }
        }
    }
    outcome(
        worst <= 1e-9 && mismatches == 0,
        format!("max eigenvalue error {worst:.2e}, {mismatches} verdict mismatches over {cases} cases"),
    )
}

fn c3_block_formula() -> Outcome {
    let mut rng = common::rng(3);
    let levels = 6;
    let mut worst_gram = 0.0_f64;
    let mut worst_rec = 0.0_f64;
    for _ in 0..50 {
        let d = rng.random_range(1..=5);
        let pts = common::random_points(&mut rng, d, 1.5, 1.5);
        let emb = common::random_embedding(&mut rng, &pts, levels);
        let t = emb.assemble();
        let h1 = emb.h1_dim();
        let dim = t.nrows();
        let mut tn = qbs::linalg::identity(dim);
        for n in 1..=5 {
            tn = &t * &tn;
            let gram = tn.adjoint() * &tn;
            let mut target = ComplexMatrix::identity(dim, dim);
            target.view_mut((h1, h1), (d, d)).copy_from(&emb.omega(n));
            let idx = emb.exact_indices(n).unwrap();
            let diff = &gram - &target;
            let block = diff.select_rows(&idx).select_columns(&idx);
            worst_gram = worst_gram.max(op_norm(&block));

            // E_n from the recursion against the assembled power and the closed sum
            let p = emb.power(n).unwrap();
            let from_power = tn.view((0, h1), (h1, d)).clone_owned();
            let v = emb.v_matrix();
            let mut closed = ComplexMatrix::zeros(h1, d);
            let mut vj = qbs::linalg::identity(h1);
            for j in 1..=n {
                let mut qp = qbs::linalg::identity(d);
                for _ in 0..(n - j) {
                    qp = &qp * emb.q();
                }
                closed += &vj * emb.e() * qp;
                vj = &vj * &v;
            }
            let scale = 1.0 + op_norm(p.e());
            worst_rec = worst_rec
                .max(op_norm(&(p.e() - &from_power)) / scale)
                .max(op_norm(&(p.e() - &closed)) / scale);
        }
    }
    outcome(
        worst_gram <= 1e-10 && worst_rec <= 1e-13,
        format!("max Gram residual {worst_gram:.2e}, max relative recursion residual {worst_rec:.2e}"),
    )
}

fn c4_norm_formula() -> Outcome {
    let mut parts = vec![];
    let mut pass = true;
    for ((s, t), want) in [((0.6, 0.8), 1.0), ((1.0, 1.0), 2f64.sqrt()), ((2.0, 0.0), 2.0)] {
        let emb = realize_spectrum(&[(s, t)], 4).unwrap();
        let formula = operator_norm(&emb).unwrap();
        let svd = assembled_norm(&emb);
        pass &= (formula - want).abs() <= 1e-8 && (svd - want).abs() <= 1e-8;
        parts.push(format!("({s},{t}): {formula:.10} / {svd:.10}"));
    }
    outcome(pass, format!("formula / largest singular value: {}", parts.join(", ")))
}

fn c5_cauchy_dual() -> Outcome {
    let mut rng = common::rng(5);
    let mut failures = vec![];
    let mut worst_inv = 0.0_f64;
    for i in 0..50 {
        let d = rng.random_range(1..=4);
        let pts: Vec<(f64, f64)> = (0..d)
            .map(|_| {
                let r = rng.random_range(1.0..3.0);
                let a = rng.random_range(0.0..std::f64::consts::FRAC_PI_2);
                (r * a.cos(), r * a.sin())
            })
            .collect();
        let emb = common::random_embedding(&mut rng, &pts, 4);
        let dual = cauchy_dual(&emb, EPS).unwrap();
        let back = cauchy_dual(&dual, EPS).unwrap();
        worst_inv = worst_inv
            .max(op_norm(&(back.e() - emb.e())))
            .max(op_norm(&(back.q() - emb.q())));
        let dual_sigma = dual.joint_spectrum().unwrap();
        let norm_ok = (operator_norm(&dual).unwrap() - 1.0).abs() <= 1e-8 && (assembled_norm(&dual) - 1.0).abs() <= 1e-8;
        if !norm_ok || !verdict(&dual_sigma, RegionId::Subnormal) || !verdict(&dual_sigma, RegionId::Contraction) {
            failures.push(i);
        }
    }
    let mut mismatches = 0;
    for _ in 0..200 {
        let d = rng.random_range(1..=6);
        let mut pts = if rng.random_bool(0.5) {
            common::lattice_points(&mut rng, d)
        } else {
            common::random_points(&mut rng, d, 2.5, 2.5)
        };
        pts.retain(|p| p.0 * p.0 + p.1 * p.1 > 0.01);
        if pts.is_empty() {
            pts.push((2.0, 0.0));
        }
        let sigma = JointSpectrum::from_pairs(&pts).unwrap();
        let image = dual_spectral_map(&sigma).unwrap();
        if verdict(&sigma, RegionId::DualSubnormal) != verdict(&image, RegionId::Subnormal) {
            mismatches += 1;
        }
    }
    outcome(
        failures.is_empty() && worst_inv <= 1e-10 && mismatches == 0,
        format!(
            "{} of 50 expansive models failed, max (T')' residual {worst_inv:.2e}, {mismatches}/200 dual-subnormal mismatches",
            failures.len()
        ),
    )
}

fn c6_pencils() -> Outcome {
    let emb = realize_spectrum(&[(0.6, 0.8)], 4).unwrap();
    let sigma = emb.joint_spectrum().unwrap();
    let beta = beta_dagger(&sigma).unwrap();
    let step = 1e-3;
    let alphas = grid(0.0, 2.0, step).unwrap();
    let scan = pencil_scan(&emb, Pencil::E, &alphas, Exec::default()).unwrap();
    let last = last_subnormal(&scan).unwrap();
    let monotone = scan.windows(2).all(|w| w[0].subnormal || !w[1].subnormal);
    let flip_ok = (beta - last).abs() < step && monotone;

    let mut rng = common::rng(6);
    let mut empty_ok = true;
    let mut rplus_ok = true;
    for _ in 0..50 {
        let d = rng.random_range(1..=4);
        let mut pts = common::random_points(&mut rng, d, 2.0, 1.0);
        pts.push((rng.random_range(0.0..2.0), rng.random_range(1.01..3.0)));
        empty_ok &= sub_q(&JointSpectrum::from_pairs(&pts).unwrap()).unwrap() == SubnormalityInterval::Empty;

        let pts: Vec<(f64, f64)> = (0..rng.random_range(1..=4))
            .map(|_| {
                if rng.random_bool(0.5) {
                    (0.0, rng.random_range(0.0..=1.0))
                } else {
                    (rng.random_range(0.0..3.0), 0.0)
                }
            })
            .collect();
        rplus_ok &= sub_q(&JointSpectrum::from_pairs(&pts).unwrap()).unwrap() == SubnormalityInterval::AllOfRPlus;
    }
    outcome(
        (beta - 1.0).abs() <= 1e-9 && flip_ok && empty_ok && rplus_ok,
        format!(
            "beta = {beta:.12}, last subnormal grid alpha = {last:.3}, Sub_Q empty cases ok = {empty_ok}, all-of-R+ cases ok = {rplus_ok}"
        ),
    )
}

fn c7_brownian() -> Outcome {
    let shift11 = AtomModel::new(vec![QAtom::new(AtomKind::Shift, 1.0, 1.0)]).unwrap();
    let r = classify_brownian(&shift11, EPS).unwrap();
    let (_, s3) = atom_spectra(&shift11).unwrap();
    let mut pts: Vec<(f64, f64, f64)> = s3.points().iter().map(|p| (p.s, p.t, p.r.unwrap())).collect();
    pts.sort_by(|a, b| a.2.total_cmp(&b.2));
    let mut pass = r.quasi_brownian && !r.brownian && pts == vec![(1.0, 1.0, 0.0), (1.0, 1.0, 1.0)];
    for kind in [(AtomKind::Unitary, 1.0, 1.0), (AtomKind::Shift, 1.0, 0.0)] {
        let m = AtomModel::new(vec![QAtom::new(kind.0, kind.1, kind.2)]).unwrap();
        pass &= classify_brownian(&m, EPS).unwrap().brownian;
    }

    const POOL: [(f64, f64); 9] = [
        (1.0, 0.0),
        (1.0, 0.5),
        (1.0, 1.0),
        (0.6, 0.8),
        (0.8, 0.6),
        (0.0, 1.0),
        (1.0, 2.0),
        (0.5, 0.5),
        (2.0, 0.0),
    ];
    let mut rng = common::rng(7);
    let mut disagreements = 0;
    let mut quasi = 0;
    for _ in 0..100 {
        let atoms: Vec<QAtom> = (0..rng.random_range(1..=5))
            .map(|_| {
                // bias towards quasi-Brownian atoms so both verdicts occur
                let top = if rng.random_bool(0.8) { 7 } else { 9 };
                let (s, t) = POOL[rng.random_range(0..top)];
                let kind = if rng.random_bool(0.5) { AtomKind::Shift } else { AtomKind::Unitary };
                QAtom { kind, s, t, mult: rng.random_range(1..=2) }
            })
            .collect();
        let m = AtomModel::new(atoms).unwrap();
        let spectral = classify_brownian(&m, EPS).unwrap();
        let agree = match brownian_decomposition(&m, EPS) {
            Ok(d) => {
                quasi += 1;
                spectral.quasi_brownian && d.is_brownian() == spectral.brownian
            }
            Err(Error::NotQuasiBrownian) => !spectral.quasi_brownian && !spectral.brownian,
            Err(_) => false,
        };
        if !agree {
            disagreements += 1;
        }
    }
    pass &= disagreements == 0;
    outcome(
        pass,
        format!("fixed examples ok, {disagreements}/100 random models disagree ({quasi} quasi-Brownian)"),
    )
}

fn c8_worked_example() -> Outcome {
    let tail = ComplexMatrix::from_element(1, 1, re(2.0));
    let mut pass = true;
    let mut parts = vec![];
    for (tau, eta) in [(0.6, 0.8), (1.0, 0.5), (0.5, 0.5), (2.0, 1.0), (1.0, 0.0)] {
        let t = Complex64::from_polar(tau, 0.7);
        let e = Complex64::from_polar(eta, -1.9);
        let emb = corner_model(t, e, &tail, 3).unwrap();
        let sigma = emb.joint_spectrum().unwrap();
        let expected = JointSpectrum::from_pairs(&[(tau, eta), (2.0, 0.0)]).unwrap();
        let in_disk = tau * tau + eta * eta <= 1.0 + EPS;
        let norm_want = 1f64.max((tau * tau + eta * eta).sqrt()).max(2.0);
        let sub = verdict(&sigma, RegionId::Subnormal);
        let ok = sigma.same_set(&expected)
            && sub == in_disk
            && (operator_norm(&emb).unwrap() - norm_want).abs() <= 1e-8
            && (assembled_norm(&emb) - norm_want).abs() <= 1e-8;
        pass &= ok;
        parts.push(format!("({tau},{eta}) subnormal={sub}"));
    }
    outcome(pass, parts.join(", "))
}

fn c9_moments() -> Outcome {
    let lin: Vec<f64> = (0..4).map(|n| 1.0 + 0.25 * n as f64).collect();
    let v = stieltjes_oracle(&lin, 1, EPS).unwrap();
    let det = v.witness().map(|w| w.determinant()).unwrap_or(f64::NAN);
    let det_ok = (det + 1.0 / 16.0).abs() <= 1e-12;
    let sq: Vec<f64> = (0..12).map(|n| (n * n) as f64).collect();
    let diff_ok = finite_difference(&sq, 2).unwrap().iter().all(|&x| x == 2.0);

    const LOCS: [f64; 5] = [0.25, 0.5, 1.0, 1.5, 2.0];
    let mut rng = common::rng(9);
    let mut mismatches = 0;
    let mut positives = 0;
    for _ in 0..100 {
        let n_atoms = rng.random_range(1..=3);
        let mut locs = LOCS.to_vec();
        let mut atoms = vec![];
        for _ in 0..n_atoms {
            let x = locs.remove(rng.random_range(0..locs.len()));
            atoms.push((x, rng.random_range(0.2..1.0)));
        }
        let mu = AtomicMeasure::new(atoms);
        let deg = rng.random_range(0..=3);
        let mut p: Vec<f64> = (0..=deg).map(|_| rng.random_range(-1.0..1.0)).collect();
        if deg > 0 {
            let lead = rng.random_range(0.1..1.0);
            p[deg] = if rng.random_bool(0.5) { lead } else { -lead };
        } else {
            // keep μ({1}) + p(0) away from zero
            let m1 = mu.mass_at(1.0, 1e-12);
            p[0] = if rng.random_bool(0.5) {
                -m1 + rng.random_range(0.05..1.0)
            } else {
                -m1 - rng.random_range(0.05..1.0)
            };
        }
        let claim = polynomial_perturbation_test(&mu, &p).is_moment;
        let k = n_atoms + deg + 2;
        let gamma: Vec<f64> = (0..2 * k + 2)
            .map(|n| {
                let pn: f64 = p.iter().rev().fold(0.0, |acc, c| acc * n as f64 + c);
                mu.moment(n) + pn
            })
            .collect();
        let oracle = stieltjes_oracle(&gamma, k, 1e-12).unwrap().passed();
        if claim {
            positives += 1;
        }
        if claim != oracle {
            mismatches += 1;
        }
    }
    outcome(
        det_ok && diff_ok && mismatches == 0,
        format!("det H1 = {det:.15}, second difference of n^2 constant = {diff_ok}, {mismatches}/100 perturbation mismatches ({positives} moment cases)"),
    )
}

fn c10_collapse() -> Outcome {
    let mut rng = common::rng(10);
    let mut mismatches = 0;
    for _ in 0..200 {
        let d = rng.random_range(1..=6);
        let pts = if rng.random_bool(0.5) {
            common::lattice_points(&mut rng, d)
        } else {
            common::random_points(&mut rng, d, 2.0, 2.0)
        };
        let sigma = JointSpectrum::from_pairs(&pts).unwrap();
        for m in 2..=8u32 {
            let mut eq = vec![(RegionId::MIsometric(m), RegionId::MIsometric(2))];
            if m % 2 == 1 {
                eq.push((RegionId::MExpansive(m), RegionId::Expansion));
                eq.push((RegionId::MContractive(m), RegionId::MContractive(3)));
            } else {
                eq.push((RegionId::MExpansive(m), RegionId::MExpansive(2)));
            }
            for (a, b) in eq {
                if verdict(&sigma, a) != verdict(&sigma, b) {
                    mismatches += 1;
                }
            }
        }
    }
    outcome(mismatches == 0, format!("{mismatches} mismatches over 200 spectra, m = 2..8"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("region/oracle equivalence", c1_region_oracle),
        ("Lambda_m eigenvalue bridge", c2_lambda_bridge),
        ("block formula for powers", c3_block_formula),
        ("norm formula", c4_norm_formula),
        ("Cauchy dual", c5_cauchy_dual),
        ("pencil endpoints", c6_pencils),
        ("Brownian discrimination", c7_brownian),
        ("worked two-part example", c8_worked_example),
        ("moment lemmas", c9_moments),
        ("collapse laws", c10_collapse),
    ];
    let mut failed = vec![];
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!("criterion {:>2} {}: {} ({})", i + 1, name, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed.push(i + 1);
        }
    }
    matrix_margin_matches_spectrum();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}

/// Left-invertibility margin from `Ω₁` agrees with the spectral one.
fn matrix_margin_matches_spectrum() {
    let emb = realize_spectrum(&[(0.6, 0.8)], 3).unwrap();
    let inv = qbs::linalg::inverse_pd(&emb.omega(1)).unwrap().0;
    assert!((op_norm(&inv).powf(-0.5) - 1.0).abs() < 1e-14);
    let sigma = joint_spectrum(&emb.modulus_pair().unwrap()).unwrap();
    assert_eq!(qbs::regions::left_invertibility_margin(&sigma).unwrap(), 1.0);
}
