use std::path::Path;
use std::process::ExitCode;

use qbs::dual::{cauchy_dual_report, dual_spectral_map};
use qbs::io::{load_model, save_model, Model, ModelFile};
use qbs::jointspec::DEFAULT_DEDUP_TOL;
use qbs::linalg::DEFAULT_EPS;
use qbs::model::{build_from_pair, realize_spectrum, validate_class_q};
use qbs::moments::{point_subnormality_oracle_with, stieltjes_oracle, DEFAULT_HANKEL_ORDER};
use qbs::pencils::{grid as make_grid, last_subnormal, pencil_scan_spectrum, subnormality_interval, Pencil};
use qbs::regions::{brownian_decomposition, classify as classify_region, classify_brownian, quasi_brownian_from_spectrum};
use qbs::{Error, Exec, JointSpectrum, PairModel, RegionId, ShiftEmbedding};
use serde_json::{json, Value};

pub enum Failure {
    /// Bad arguments, unreadable or malformed input.
    Usage(String),
    /// Well-formed input for which the operation is impossible.
    Domain(String),
}

impl Failure {
    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Domain(m) => m,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            Failure::Usage(_) => ExitCode::from(2),
            Failure::Domain(_) => ExitCode::from(1),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Schema(_)
            | Error::UnknownRegion(_)
            | Error::DimensionMismatch(_)
            | Error::NonFinite
            | Error::NegativeCoordinate(_)
            | Error::NotHermitian { .. }
            | Error::NotPositive { .. }
            | Error::CommutatorTooLarge { .. }
            | Error::EmptyGamma
            | Error::InsufficientLength { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

type Outcome = Result<ExitCode, Failure>;

fn verdict_code(v: bool) -> ExitCode {
    if v {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn emit(report: &Value, out: Option<&Path>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(report).expect("reports serialize") + "\n";
    print!("{text}");
    if let Some(path) = out {
        write_file(path, &text)?;
    }
    Ok(())
}

fn parse_f64(s: &str) -> Result<f64, Failure> {
    s.trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("invalid number `{}`", s.trim())))
}

/// `s,t;s,t;...`
pub fn parse_points(text: &str) -> Result<Vec<(f64, f64)>, Failure> {
    text.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| match p.split(',').collect::<Vec<_>>().as_slice() {
            [s, t] => Ok((parse_f64(s)?, parse_f64(t)?)),
            _ => Err(Failure::Usage(format!("point `{p}` is not of the form s,t"))),
        })
        .collect()
}

fn resolve_eps(flag: Option<f64>, file: Option<&ModelFile>) -> f64 {
    flag.or(file.and_then(|f| f.eps)).unwrap_or(DEFAULT_EPS)
}

enum Target {
    Region(RegionId),
    Brownian,
    QuasiBrownian,
}

fn parse_target(token: &str) -> Result<Target, Failure> {
    match token.trim().to_ascii_lowercase().as_str() {
        "brownian" => Ok(Target::Brownian),
        "quasi-brownian" => Ok(Target::QuasiBrownian),
        other => Ok(Target::Region(other.parse()?)),
    }
}

pub fn classify(
    input: Option<&Path>,
    points: Option<&str>,
    region: &str,
    out: Option<&Path>,
    eps_flag: Option<f64>,
) -> Outcome {
    let target = parse_target(region)?;
    let file = match (input, points) {
        (Some(path), _) => load_model(path)?,
        (None, Some(p)) => {
            let pts = parse_points(p)?;
            let pair = PairModel::diagonal(pts.iter().map(|x| x.0).collect(), pts.iter().map(|x| x.1).collect())?;
            ModelFile::new(Model::Pair(pair))
        }
        (None, None) => return Err(Failure::Usage("one of --input or --points is required".into())),
    };
    let eps = resolve_eps(eps_flag, Some(&file));
    let (report, verdict) = match (&target, &file.model) {
        (Target::Region(r), model) => {
            let sigma = model.joint_spectrum(eps)?;
            let rep = classify_region(&sigma, *r, eps)?;
            let v = rep.verdict;
            (json!({"model": model.kind(), "eps": eps, "report": rep}), v)
        }
        (Target::Brownian | Target::QuasiBrownian, Model::Atoms(m)) => {
            let rep = classify_brownian(m, eps)?;
            let decomposition = if rep.quasi_brownian {
                Some(brownian_decomposition(m, eps)?)
            } else {
                None
            };
            let v = match target {
                Target::Brownian => rep.brownian,
                _ => rep.quasi_brownian,
            };
            let structural_agrees = decomposition.as_ref().map_or(!rep.brownian, |d| d.is_brownian() == rep.brownian);
            (
                json!({
                    "model": "atoms",
                    "eps": eps,
                    "region": region,
                    "verdict": v,
                    "report": rep,
                    "decomposition": decomposition,
                    "structural_agrees": structural_agrees,
                }),
                v,
            )
        }
        (Target::QuasiBrownian, model) => {
            let rep = quasi_brownian_from_spectrum(&model.joint_spectrum(eps)?, eps)?;
            let v = rep.quasi_brownian;
            (json!({"model": model.kind(), "eps": eps, "region": region, "verdict": v, "report": rep}), v)
        }
        (Target::Brownian, model) => {
            return Err(Failure::Usage(format!(
                "{} models decide quasi-Brownian only, Brownian requires atom model",
                model.kind()
            )))
        }
    };
    emit(&report, out)?;
    Ok(verdict_code(verdict))
}

pub fn realize(points: &str, levels: usize, out: Option<&Path>, csv: Option<&Path>, eps_flag: Option<f64>) -> Outcome {
    let pts = parse_points(points)?;
    let emb = realize_spectrum(&pts, levels)?;
    let eps = resolve_eps(eps_flag, None);
    let file = ModelFile::new(Model::Embedding(emb.clone()));
    match out {
        Some(path) => {
            save_model(path, &file)?;
            let check = validate_class_q(&emb, eps);
            emit(&json!({"written": path.display().to_string(), "class_q": check}), None)?;
        }
        None => print!("{}", qbs::io::model_to_json(&file)),
    }
    if let Some(path) = csv {
        write_file(path, &emb.joint_spectrum()?.to_csv())?;
    }
    Ok(ExitCode::SUCCESS)
}

fn as_embedding(model: &Model, levels: usize) -> Result<ShiftEmbedding, Failure> {
    Ok(match model {
        Model::Embedding(e) => e.clone(),
        Model::Pair(p) => build_from_pair(p, levels)?,
        Model::Atoms(a) => build_from_pair(&a.pair(), levels)?,
    })
}

pub fn dual(input: &Path, out: &Path, csv: Option<&Path>, levels: usize, eps_flag: Option<f64>) -> Outcome {
    let file = load_model(input)?;
    let eps = resolve_eps(eps_flag, Some(&file));
    let emb = as_embedding(&file.model, levels)?;
    let d = cauchy_dual_report(&emb, eps)?;
    save_model(out, &ModelFile::new(Model::Embedding(d.embedding.clone())))?;
    let sigma = d.embedding.joint_spectrum()?;
    let expected = dual_spectral_map(&emb.joint_spectrum()?)?;
    if let Some(path) = csv {
        write_file(path, &sigma.to_csv())?;
    }
    emit(
        &json!({
            "written": out.display().to_string(),
            "diagnostics": d.diagnostics(),
            "spectrum_matches_map": sigma.same_set(&expected),
        }),
        None,
    )?;
    Ok(ExitCode::SUCCESS)
}

fn parse_grid(text: &str) -> Result<Vec<f64>, Failure> {
    match text.split(':').collect::<Vec<_>>().as_slice() {
        [a, b, h] => make_grid(parse_f64(a)?, parse_f64(b)?, parse_f64(h)?).map_err(|e| Failure::Usage(e.to_string())),
        _ => Err(Failure::Usage(format!("grid `{text}` is not of the form start:stop:step"))),
    }
}

pub fn pencil(input: &Path, which: Pencil, grid: Option<&str>, out: Option<&Path>, eps_flag: Option<f64>) -> Outcome {
    let file = load_model(input)?;
    let eps = resolve_eps(eps_flag, Some(&file));
    let sigma = file.model.joint_spectrum(eps)?;
    let interval = subnormality_interval(&sigma, which, eps)?;
    let mut report = json!({"which": which, "eps": eps, "interval": interval});
    if let Some(g) = grid {
        let alphas = parse_grid(g)?;
        let scan = pencil_scan_spectrum(&sigma, which, &alphas, eps, Exec::default());
        report["grid_points"] = json!(alphas.len());
        report["last_subnormal_on_grid"] = json!(last_subnormal(&scan));
        if let Some(path) = out {
            let mut text = String::from("alpha,subnormal\n");
            for row in &scan {
                text.push_str(&format!("{},{}\n", qbs::io::fmt17(row.alpha), row.subnormal));
            }
            write_file(path, &text)?;
        }
    } else if out.is_some() {
        return Err(Failure::Usage("--out needs --grid".into()));
    }
    emit(&report, None)?;
    Ok(ExitCode::SUCCESS)
}

/// Inline values or, when the argument names an existing file, its contents.
/// Values are separated by commas, semicolons or whitespace; a leading
/// non-numeric token (a CSV header) is skipped.
fn read_sequence(arg: &str) -> Result<Vec<f64>, Failure> {
    let text = if Path::new(arg).is_file() {
        std::fs::read_to_string(arg).map_err(|e| Failure::Usage(format!("cannot read {arg}: {e}")))?
    } else {
        arg.to_string()
    };
    let mut tokens: Vec<&str> = text
        .split(|c: char| c == ',' || c == ';' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .collect();
    if tokens.first().is_some_and(|t| t.parse::<f64>().is_err()) {
        tokens.remove(0);
    }
    tokens.into_iter().map(parse_f64).collect()
}

pub fn oracle(point: Option<&str>, sequence: Option<&str>, k: Option<usize>, eps_flag: Option<f64>) -> Outcome {
    let eps = resolve_eps(eps_flag, None);
    let (report, pass) = match (point, sequence) {
        (Some(p), _) => {
            let pts = parse_points(p)?;
            let [(s, t)] = pts.as_slice() else {
                return Err(Failure::Usage("--point takes exactly one s,t pair".into()));
            };
            if *s < 0.0 || *t < 0.0 {
                return Err(Failure::Usage("point coordinates must be nonnegative".into()));
            }
            let k = k.unwrap_or(DEFAULT_HANKEL_ORDER);
            if k == 0 {
                return Err(Failure::Usage("--hankel-order must be at least 1".into()));
            }
            let v = point_subnormality_oracle_with(*s, *t, k, eps);
            let pass = v.passed();
            (json!({"point": [s, t], "hankel_order": k, "eps": eps, "result": v}), pass)
        }
        (None, Some(seq)) => {
            let gamma = read_sequence(seq)?;
            let k = match k {
                Some(k) => k,
                None if gamma.len() >= 2 => (gamma.len() - 2) / 2,
                None => return Err(Error::InsufficientLength { needed: 2, got: gamma.len() }.into()),
            };
            let v = stieltjes_oracle(&gamma, k, eps)?;
            let pass = v.passed();
            (json!({"length": gamma.len(), "hankel_order": k, "eps": eps, "result": v}), pass)
        }
        (None, None) => return Err(Failure::Usage("one of --point or --sequence is required".into())),
    };
    emit(&report, None)?;
    Ok(verdict_code(pass))
}

pub fn plot(regions: &[String], input: Option<&Path>, points: Option<&str>, out: &Path) -> Outcome {
    let ids = regions
        .iter()
        .map(|r| r.parse::<RegionId>().map_err(Failure::from))
        .collect::<Result<Vec<_>, _>>()?;
    let sigma = match (input, points) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            Some(JointSpectrum::from_csv(&text, DEFAULT_DEDUP_TOL)?)
        }
        (None, Some(p)) => Some(JointSpectrum::from_pairs(&parse_points(p)?)?),
        (None, None) => None,
    };
    let sigma = sigma.filter(|s| !s.is_empty());
    write_file(out, &qbs::plot::render_svg(&ids, sigma.as_ref()))?;
    Ok(ExitCode::SUCCESS)
}
