//! Drivers for the single-shot subcommands.

use std::path::Path;

use serde::Serialize;
use slp_core::deform::{deformation_scan, fibration_validate, DeformationReport};
use slp_core::lefschetz::{
    enumerate_between, layer_matchings, lefschetz_det, middle_form_reduce, one_step_matrix, path_cap, path_matrix,
    signed_sum, strong_lefschetz_report, uniform_sign, weak_lefschetz_report, PathSystem, WeakReport,
};
use slp_core::polyring::{CoinvariantPresentation, GradedAlgebraPresentation};
use slp_core::quotient::{PosetJson, QuotientPoset};
use slp_core::rootsystem::{self, RootSystem, Theta};
use slp_core::Scalar;

use crate::args::{
    CoinvariantArgs, DeformArgs, Format, LefschetzArgs, Mode, PathsArgs, QuotientArgs, RootsArgs,
};
use crate::output::{emit, matrix_tsv, to_json, write_atomic};
use crate::{resolve_theta, root_system, theta_one_based, CliError, Outcome};

#[derive(Serialize)]
struct RootsJson<'a> {
    #[serde(rename = "type")]
    ty: String,
    field: String,
    simple: &'a [Vec<Scalar>],
    positive: &'a [Vec<Scalar>],
    gram: Vec<Vec<Scalar>>,
}

pub fn roots(a: &RootsArgs) -> Result<Outcome, CliError> {
    let rs = root_system(&a.ty)?;
    let j = RootsJson {
        ty: rs.coxeter_type().to_string(),
        field: rs.field().tag(),
        simple: rs.simple_roots(),
        positive: rs.positive_roots(),
        gram: rs.gram().to_rows(),
    };
    emit(a.out.as_deref(), &to_json(&j)?)?;
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct QuotientSummary {
    #[serde(rename = "type")]
    ty: String,
    theta: Vec<usize>,
    theta_type: String,
    nodes: usize,
    edges: usize,
    r: usize,
    histogram: Vec<usize>,
    symmetric_histogram: bool,
    validation: slp_core::quotient::ValidationReport,
}

pub fn quotient(a: &QuotientArgs) -> Result<Outcome, CliError> {
    let rs = root_system(&a.ty)?;
    let theta = resolve_theta(&rs, a.theta.as_deref())?;
    let p = QuotientPoset::enumerate(&rs, &theta)?;
    let validation = p.validate(Some(&rs));
    let histogram = p.degree_histogram();
    let summary = QuotientSummary {
        ty: rs.coxeter_type().to_string(),
        theta: theta_one_based(&theta),
        theta_type: theta.type_name(&rs.coxeter_type()),
        nodes: p.len(),
        edges: p.edges().len(),
        r: p.top_degree(),
        symmetric_histogram: histogram.iter().eq(histogram.iter().rev()),
        histogram,
        validation,
    };
    // render everything before touching the filesystem
    let dot = a.dot.as_ref().map(|_| p.to_dot());
    let json = a.json.as_ref().map(|_| to_json(&p.to_json_model())).transpose()?;
    let text = to_json(&summary)?;
    if let (Some(path), Some(d)) = (&a.dot, &dot) {
        write_atomic(path, d.as_bytes())?;
    }
    if let (Some(path), Some(j)) = (&a.json, &json) {
        write_atomic(path, j.as_bytes())?;
    }
    emit(a.out.as_deref(), &text)?;
    Ok(Outcome::from_bool(summary.validation.passed() && summary.symmetric_histogram))
}

/// Reads a poset file and rebuilds the root system of its type.
pub fn load_poset(path: &Path) -> Result<(RootSystem, QuotientPoset), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("--poset {}: {e}", path.display())))?;
    let model: PosetJson = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("--poset {}: {e}", path.display())))?;
    let p = QuotientPoset::from_json_model(&model)?;
    let rs = RootSystem::new(p.coxeter_type())?;
    Ok((rs, p))
}

#[derive(Serialize)]
struct MiddleJson {
    nodes: Vec<usize>,
    matrix: Vec<Vec<Scalar>>,
    minors: Vec<Scalar>,
    positive_definite: bool,
    weak: WeakReport,
    strong_verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    exhaustive: Option<slp_core::lefschetz::StrongReport>,
}

#[derive(Serialize)]
struct SystemJson {
    sigma: Vec<usize>,
    /// Node ids along each path.
    paths: Vec<Vec<usize>>,
    sign: i8,
    weight: Scalar,
}

#[derive(Serialize)]
struct PathsJson {
    from: usize,
    to: usize,
    vertex_disjoint_only: bool,
    dropped: Vec<usize>,
    count: usize,
    positive: usize,
    negative: usize,
    uniform_sign: Option<i8>,
    signed_sum: Scalar,
    determinant: Option<Scalar>,
    lgv_agrees: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    systems: Vec<SystemJson>,
}

fn system_json(p: &QuotientPoset, s: &PathSystem) -> SystemJson {
    let paths = s
        .paths
        .iter()
        .map(|edges| {
            let mut ids: Vec<usize> = edges.iter().map(|&e| p.edges()[e].src).collect();
            if let Some(&last) = edges.last() {
                ids.push(p.edges()[last].dst);
            }
            ids
        })
        .collect();
    SystemJson { sigma: s.sigma.clone(), paths, sign: s.sign, weight: s.weight.clone() }
}

fn paths_json(
    p: &QuotientPoset,
    from: usize,
    to: usize,
    vd: bool,
    dropped: &[usize],
    systems: &[PathSystem],
    det: Option<Scalar>,
    list: bool,
) -> PathsJson {
    let sum = signed_sum(p, systems);
    PathsJson {
        from,
        to,
        vertex_disjoint_only: vd,
        dropped: dropped.to_vec(),
        count: systems.len(),
        positive: systems.iter().filter(|s| s.sign > 0).count(),
        negative: systems.iter().filter(|s| s.sign < 0).count(),
        uniform_sign: uniform_sign(systems),
        lgv_agrees: det.as_ref().map(|d| *d == sum),
        signed_sum: sum,
        determinant: det,
        systems: if list { systems.iter().map(|s| system_json(p, s)).collect() } else { Vec::new() },
    }
}

fn systems_tsv(p: &QuotientPoset, systems: &[PathSystem]) -> String {
    let mut s = String::from("sign\tweight\tpaths\n");
    for sys in systems {
        let j = system_json(p, sys);
        let paths: Vec<String> =
            j.paths.iter().map(|ids| ids.iter().map(usize::to_string).collect::<Vec<_>>().join("-")).collect();
        s.push_str(&format!("{}\t{}\t{}\n", sys.sign, sys.weight, paths.join(";")));
    }
    s
}

/// Determinant of the square path matrix V^from -> V^to, if square.
fn square_det(p: &QuotientPoset, from: usize, to: usize) -> Result<Option<Scalar>, CliError> {
    let m = path_matrix(p, from, to)?;
    Ok(m.matrix.is_square().then(|| m.matrix.det()))
}

fn check_degree(p: &QuotientPoset, i: usize) -> Result<(), CliError> {
    if 2 * i > p.top_degree() {
        return Err(CliError::Usage(format!("--degree {i} is above the middle (r = {})", p.top_degree())));
    }
    Ok(())
}

pub fn lefschetz(a: &LefschetzArgs) -> Result<Outcome, CliError> {
    let (rs, p) = load_poset(&a.poset)?;
    if let Some(i) = a.degree {
        check_degree(&p, i)?;
    }
    if a.format == Format::Tsv && a.degree.is_none() && matches!(a.mode, Mode::Strong | Mode::Weak | Mode::Paths) {
        return Err(CliError::Usage("--format tsv needs --degree".into()));
    }
    let r = p.top_degree();
    let (text, ok) = match a.mode {
        Mode::Strong => match a.degree {
            Some(i) => {
                let m = path_matrix(&p, i, r - i)?;
                let det = lefschetz_det(&p, i)?;
                let ok = !det.is_zero();
                let text = match a.format {
                    Format::Tsv => matrix_tsv(&m),
                    Format::Json => to_json(&serde_json::json!({
                        "mode": "strong",
                        "degree": i,
                        "rows": m.rows,
                        "cols": m.cols,
                        "matrix": m.matrix.to_rows(),
                        "det": det,
                        "pass": ok,
                    }))?,
                };
                (text, ok)
            }
            None => {
                let rep = strong_lefschetz_report(&p);
                (to_json(&rep)?, rep.pass)
            }
        },
        Mode::Weak => match a.degree {
            Some(i) => {
                let m = one_step_matrix(&p, i);
                let rank = m.matrix.rank();
                let ok = 2 * i >= r || rank == m.matrix.cols();
                let text = match a.format {
                    Format::Tsv => matrix_tsv(&m),
                    Format::Json => to_json(&serde_json::json!({
                        "mode": "weak",
                        "degree": i,
                        "rows": m.rows,
                        "cols": m.cols,
                        "matrix": m.matrix.to_rows(),
                        "rank": rank,
                        "pass": ok,
                    }))?,
                };
                (text, ok)
            }
            None => {
                let rep = weak_lefschetz_report(&p);
                (to_json(&rep)?, rep.pass)
            }
        },
        Mode::Middle => {
            let mf = middle_form_reduce(&p, &rs)?;
            let exhaustive = a.exhaustive.then(|| strong_lefschetz_report(&p));
            let ok = mf.strong_verdict && exhaustive.as_ref().is_none_or(|e| e.pass);
            let text = match a.format {
                Format::Tsv => {
                    let sm = slp_core::lefschetz::ScalarMatrix {
                        rows: mf.nodes.clone(),
                        cols: mf.nodes.clone(),
                        matrix: mf.matrix.clone(),
                    };
                    matrix_tsv(&sm)
                }
                Format::Json => to_json(&MiddleJson {
                    nodes: mf.nodes,
                    matrix: mf.matrix.to_rows(),
                    minors: mf.minors,
                    positive_definite: mf.positive_definite,
                    weak: mf.weak,
                    strong_verdict: mf.strong_verdict,
                    exhaustive,
                })?,
            };
            (text, ok)
        }
        Mode::Paths => {
            let i = a.degree.ok_or_else(|| CliError::Usage("--mode paths needs --degree".into()))?;
            let systems = enumerate_between(&p, i, r - i, a.vertex_disjoint, path_cap())?;
            let det = square_det(&p, i, r - i)?;
            let j = paths_json(&p, i, r - i, a.vertex_disjoint, &[], &systems, det, true);
            let ok = j.lgv_agrees.unwrap_or(false);
            let text = match a.format {
                Format::Tsv => systems_tsv(&p, &systems),
                Format::Json => to_json(&j)?,
            };
            (text, ok)
        }
    };
    emit(a.out.as_deref(), &text)?;
    Ok(Outcome::from_bool(ok))
}

pub fn paths(a: &PathsArgs) -> Result<Outcome, CliError> {
    let p = match (&a.poset, &a.ty) {
        (Some(path), None) => load_poset(path)?.1,
        (None, Some(ty)) => {
            let rs = root_system(ty)?;
            let theta = resolve_theta(&rs, a.theta.as_deref())?;
            QuotientPoset::enumerate(&rs, &theta)?
        }
        _ => return Err(CliError::Usage("give exactly one of --poset and --type".into())),
    };
    let r = p.top_degree();
    let j = match (a.degree, a.layer) {
        (Some(i), None) => {
            check_degree(&p, i)?;
            let systems = enumerate_between(&p, i, r - i, a.vertex_disjoint, path_cap())?;
            let det = square_det(&p, i, r - i)?;
            paths_json(&p, i, r - i, a.vertex_disjoint, &[], &systems, det, a.list)
        }
        (None, Some(i)) => {
            if i == 0 || i > r {
                return Err(CliError::Usage(format!("--layer must lie in 1..={r}")));
            }
            if let Some(bad) = a.drop.iter().find(|v| !p.layer(i).contains(v)) {
                return Err(CliError::Usage(format!("--drop: node {bad} is not in V^{i}")));
            }
            let systems = layer_matchings(&p, i, &a.drop)?;
            paths_json(&p, i - 1, i, true, &a.drop, &systems, None, a.list)
        }
        _ => return Err(CliError::Usage("give exactly one of --degree and --layer".into())),
    };
    let ok = j.lgv_agrees.unwrap_or(true) && j.count > 0;
    emit(a.out.as_deref(), &to_json(&j)?)?;
    Ok(Outcome::from_bool(ok))
}

/// The element with the given values on the simple coroots, as coefficients
/// of the ambient coordinate functions.
fn element_coefficients(rs: &RootSystem, spec: &str) -> Result<Vec<Scalar>, CliError> {
    let values: Vec<Scalar> = if spec.trim().eq_ignore_ascii_case("rho") {
        vec![Scalar::one(rs.field()); rs.rank()]
    } else {
        spec.split(',')
            .map(|s| Scalar::parse(s.trim(), rs.field()))
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Usage(format!("--element: {e}")))?
    };
    if values.len() != rs.rank() {
        return Err(CliError::Usage(format!("--element needs {} values, got {}", rs.rank(), values.len())));
    }
    let mut v = vec![Scalar::zero(rs.field()); rs.dim()];
    for (c, w) in values.iter().zip(rs.fundamental_weights()) {
        v = rootsystem::axpy(&v, c, &w);
    }
    Ok(rs.gram().mul_vec(&v))
}

#[derive(Serialize)]
struct DegreeDet {
    degree: usize,
    size: usize,
    det: Scalar,
    pass: bool,
}

#[derive(Serialize)]
struct CoinvariantJson {
    #[serde(rename = "type")]
    ty: String,
    dims: Vec<usize>,
    total: usize,
    top: usize,
    element: Vec<Scalar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    degrees: Option<Vec<DegreeDet>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    strong: Option<bool>,
}

pub fn coinvariant(a: &CoinvariantArgs) -> Result<Outcome, CliError> {
    let rs = root_system(&a.ty)?;
    let w = element_coefficients(&rs, &a.element)?;
    let pres = CoinvariantPresentation::new(&rs)?;
    let alg = GradedAlgebraPresentation::from_quotient(pres.ring())?;
    let dims = alg.dims().to_vec();
    let (degrees, strong) = if a.check_strong {
        let dets = alg.lefschetz_dets(&w)?;
        let degrees: Vec<DegreeDet> = dets
            .into_iter()
            .enumerate()
            .map(|(i, det)| DegreeDet { degree: i, size: dims[i], pass: !det.is_zero(), det })
            .collect();
        let ok = degrees.iter().all(|d| d.pass);
        (Some(degrees), Some(ok))
    } else {
        (None, None)
    };
    let j = CoinvariantJson {
        ty: rs.coxeter_type().to_string(),
        total: dims.iter().sum(),
        top: alg.top(),
        dims,
        element: w,
        degrees,
        strong,
    };
    emit(a.out.as_deref(), &to_json(&j)?)?;
    Ok(Outcome::from_bool(j.strong.unwrap_or(true)))
}

#[derive(Serialize)]
pub struct DkJson {
    pub k: usize,
    pub coeffs: Vec<Scalar>,
    pub at0: Scalar,
    pub degree_bound: usize,
    pub tensor_det: Scalar,
}

#[derive(Serialize)]
pub struct CheckJson {
    pub name: String,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct DeformJson {
    #[serde(rename = "type")]
    pub ty: String,
    pub theta: Vec<usize>,
    pub theta_type: String,
    pub hypotheses: Vec<CheckJson>,
    #[serde(rename = "Dk")]
    pub dk: Vec<DkJson>,
    pub t0: u64,
    pub final_check: &'static str,
    pub a0_is_shift: bool,
    pub change_of_base: bool,
    pub t_independent: bool,
}

pub fn deform_report(rs: &RootSystem, theta: &Theta) -> Result<(DeformJson, DeformationReport), CliError> {
    let fd = fibration_validate(rs, theta)?;
    let rep = deformation_scan(&fd)?;
    let j = DeformJson {
        ty: rs.coxeter_type().to_string(),
        theta: theta_one_based(theta),
        theta_type: theta.type_name(&rs.coxeter_type()),
        hypotheses: fd.checks.iter().map(|(n, ok)| CheckJson { name: n.clone(), pass: *ok }).collect(),
        dk: rep
            .dk
            .iter()
            .map(|d| DkJson {
                k: d.k,
                coeffs: d.coeffs.clone(),
                at0: d.at0.clone(),
                degree_bound: d.degree_bound,
                tensor_det: d.tensor_det.clone(),
            })
            .collect(),
        t0: rep.t0,
        final_check: if rep.final_check { "pass" } else { "fail" },
        a0_is_shift: rep.a0_is_shift,
        change_of_base: rep.change_of_base,
        t_independent: rep.t_independent,
    };
    Ok((j, rep))
}

pub fn deform(a: &DeformArgs) -> Result<Outcome, CliError> {
    let rs = root_system(&a.ty)?;
    let theta = resolve_theta(&rs, a.theta.as_deref())?;
    let (j, rep) = deform_report(&rs, &theta)?;
    let ok = rep.final_check && j.hypotheses.iter().all(|c| c.pass) && j.dk.iter().all(|d| !d.at0.is_zero());
    emit(a.report.as_deref(), &to_json(&j)?)?;
    Ok(Outcome::from_bool(ok))
}
