//! The `spectrum`, `verify` and `mesh` commands.

use std::time::Instant;

use mixspec_core::closed_form::{CanonicalDomain, ProblemKind, eigenfunction};
use mixspec_core::fem::{self, assemble, triangulate};
use mixspec_core::geometry::geometric_constants;
use mixspec_core::inequalities::{
    CLOSED_FORM_TOLERANCE, InequalityReport, SpectrumSource, fem_with_error, verify_ks,
    verify_robin_derivative_half_disk, verify_robin_on, weyl_check,
};
use mixspec_core::rellich::{
    EigenfunctionSource, HadamardSource, RellichReport, boundary_integrals, hadamard_scaling_check,
    rellich_check, rellich_christianson, rellich_residual,
};
use mixspec_core::{DomainSpec, Point2};
use serde::Serialize;

use crate::cli::{Check, Cli, Command, MeshArgs, Method, SpectrumArgs, VerifyArgs};
use crate::domain_file::{LoadedDomain, load_domain};
use crate::error::{CliError, Result};
use crate::report::{Cell, RunReport};

/// Mesh size when `--method fem` is given without `--h`.
pub const DEFAULT_H: f64 = 1.0 / 32.0;
/// Residual tolerance of the closed-form Rellich checks.
pub const RELLICH_TOLERANCE: f64 = 1e-8;
/// Relative tolerance of the Hadamard finite-difference derivative.
pub const HADAMARD_FD_TOLERANCE: f64 = 1e-4;
pub const WEYL_TOLERANCE: f64 = 0.05;

/// Accepts the short and long problem names.
pub fn parse_problem(name: &str, alpha: Option<f64>) -> Result<ProblemKind> {
    let kind = match name {
        "nd" | "neumann-dirichlet" | "neumann_dirichlet" => ProblemKind::NeumannDirichlet,
        "sd" | "steklov-dirichlet" | "steklov_dirichlet" => ProblemKind::SteklovDirichlet,
        "robin" | "robin-dirichlet" | "robin_dirichlet" => {
            let alpha = alpha.ok_or_else(|| CliError::input("problem `robin` needs --alpha"))?;
            if !(alpha >= 0.0 && alpha.is_finite()) {
                return Err(CliError::input(format!("--alpha {alpha} must be finite and >= 0")));
            }
            ProblemKind::RobinDirichlet { alpha }
        }
        "dirichlet" => ProblemKind::Dirichlet,
        "neumann" => ProblemKind::Neumann,
        other => {
            return Err(CliError::input(format!(
                "unknown problem `{other}` (expected nd, sd, robin, dirichlet or neumann)"
            )));
        }
    };
    Ok(kind)
}

fn mesh_size(h: Option<f64>) -> Result<f64> {
    let h = h.unwrap_or(DEFAULT_H);
    if h > 0.0 && h.is_finite() {
        Ok(h)
    } else {
        Err(CliError::input(format!("--h {h} must be positive")))
    }
}

fn positive_count(count: Option<usize>, default: usize) -> Result<usize> {
    match count.unwrap_or(default) {
        0 => Err(CliError::input("--count must be at least 1")),
        n => Ok(n),
    }
}

fn canonical(domain: &LoadedDomain) -> Result<CanonicalDomain> {
    CanonicalDomain::recognize(&domain.spec).ok_or_else(|| {
        CliError::input(format!("no closed form for `{}`; try --method fem", domain.source))
    })
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::ClosedForm => "closed_form",
        Method::Fem => "fem",
    }
}

fn source(method: Method, h: Option<f64>) -> Result<SpectrumSource> {
    Ok(match method {
        Method::ClosedForm => SpectrumSource::ClosedForm,
        Method::Fem => SpectrumSource::Fem { h: mesh_size(h)? },
    })
}

fn point_cell(p: Point2) -> Cell {
    Cell::Floats(vec![p.x, p.y])
}

fn base_point(domain: &LoadedDomain, flag: Option<Point2>) -> Point2 {
    flag.or(domain.point).unwrap_or_else(|| domain.spec.default_base_point())
}

pub fn spectrum(args: &SpectrumArgs) -> Result<RunReport> {
    let kind = parse_problem(&args.problem, args.solver.alpha)?;
    let count = positive_count(args.solver.count, 10)?;
    let domain = load_domain(&args.solver.domain, kind)?;
    let mut report = RunReport::new("spectrum", vec!["k", "value", "label", "provenance", "tol"]);
    report
        .input("domain", domain.source.as_str())
        .input("problem", kind.to_string())
        .input("count", count)
        .input("method", method_name(args.solver.method));
    match args.solver.method {
        Method::ClosedForm => {
            let seq = canonical(&domain)?.spectrum(kind, count)?;
            for e in &seq.entries {
                report.push(vec![
                    e.k.into(),
                    e.value.into(),
                    e.label.to_string().into(),
                    seq.provenance.to_string().into(),
                    CLOSED_FORM_TOLERANCE.into(),
                ]);
            }
        }
        Method::Fem => {
            let h = mesh_size(args.solver.h)?;
            report.input("h", h);
            let (seq, errors) = fem_with_error(&domain.spec, kind, h, count)?;
            for (e, err) in seq.entries.iter().zip(errors) {
                report.push(vec![
                    e.k.into(),
                    e.value.into(),
                    Cell::Null,
                    seq.provenance.to_string().into(),
                    (2.0 * err).into(),
                ]);
            }
        }
    }
    Ok(report)
}

const INEQUALITY_COLUMNS: [&str; 10] =
    ["theorem", "k", "lhs", "rhs", "slack", "tol", "holds", "trivial", "lhs_provenance", "rhs_provenance"];

fn push_inequalities(report: &mut RunReport, rows: &[InequalityReport]) {
    for r in rows {
        report.push(vec![
            r.theorem.id().into(),
            r.k.into(),
            r.lhs.into(),
            r.rhs.into(),
            r.slack.into(),
            r.tol.into(),
            r.holds.into(),
            r.trivial.into(),
            r.lhs_provenance.to_string().into(),
            r.rhs_provenance.to_string().into(),
        ]);
    }
}

fn verify_ks_cmd(args: &VerifyArgs) -> Result<RunReport> {
    let domain = load_domain(&args.solver.domain, ProblemKind::SteklovDirichlet)?;
    let count = positive_count(args.solver.count, 10)?;
    let p = base_point(&domain, args.point);
    let src = source(args.solver.method, args.solver.h)?;
    let constants = geometric_constants(&domain.spec, p, 0.0)?;
    let mut report = RunReport::new("verify ks", INEQUALITY_COLUMNS.to_vec());
    report
        .input("domain", domain.source.as_str())
        .input("count", count)
        .input("method", method_name(args.solver.method))
        .input("point", point_cell(p))
        .input("r_max", constants.r_max)
        .input("h_min", constants.h_min)
        .input("c0", constants.c0);
    if let SpectrumSource::Fem { h } = src {
        report.input("h", h);
    }
    push_inequalities(&mut report, &verify_ks(&domain.spec, p, count, src)?);
    Ok(report)
}

fn verify_robin_cmd(args: &VerifyArgs) -> Result<RunReport> {
    let alpha = args.solver.alpha.ok_or_else(|| CliError::input("verify robin needs --alpha"))?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(CliError::input(format!(
            "--alpha {alpha}: the ratio (lambda - mu) / alpha needs alpha > 0"
        )));
    }
    let domain = load_domain(&args.solver.domain, ProblemKind::RobinDirichlet { alpha })?;
    let count = positive_count(args.solver.count, 5)?;
    let src = source(args.solver.method, args.solver.h)?;
    let mut report = RunReport::new("verify robin", INEQUALITY_COLUMNS.to_vec());
    report
        .input("domain", domain.source.as_str())
        .input("alpha", alpha)
        .input("count", count)
        .input("method", method_name(args.solver.method));
    if let SpectrumSource::Fem { h } = src {
        report.input("h", h);
    }
    push_inequalities(&mut report, &verify_robin_on(&domain.spec, alpha, count, src)?);
    if let (SpectrumSource::ClosedForm, Some(CanonicalDomain::HalfDisk { radius })) =
        (src, CanonicalDomain::recognize(&domain.spec))
    {
        push_inequalities(&mut report, &verify_robin_derivative_half_disk(radius, count)?);
    }
    Ok(report)
}

/// Tolerance of the finite-element Rellich residual: the method is first
/// order, so twice `|r_h - r_2h|` estimates the error of the residual at `h`.
fn fem_residuals(
    domain: &DomainSpec,
    h: f64,
    count: usize,
    check: &dyn Fn(EigenfunctionSource<'_>) -> Result<RellichReport>,
) -> Result<Vec<(RellichReport, f64)>> {
    let reports = |h: f64| -> Result<Vec<RellichReport>> {
        let problem = assemble(triangulate(domain, h)?)?;
        let pairs = fem::solve_neumann_dirichlet(&problem, count)?;
        pairs
            .iter()
            .map(|pair| check(EigenfunctionSource::Fem { problem: &problem, pair }))
            .collect()
    };
    let fine = reports(h)?;
    let coarse = reports(2.0 * h)?;
    Ok(fine
        .into_iter()
        .zip(coarse)
        .map(|(f, c)| {
            let tol = 2.0 * (f.residual - c.residual).abs();
            (f, tol)
        })
        .collect())
}

fn verify_rellich_cmd(args: &VerifyArgs, polygon: bool) -> Result<RunReport> {
    let domain = load_domain(&args.solver.domain, ProblemKind::NeumannDirichlet)?;
    let count = positive_count(args.solver.count, 5)?;
    let p = base_point(&domain, args.point);
    if args.quad == 0 {
        return Err(CliError::input("--quad must be at least 1"));
    }
    if polygon && !domain.spec.is_polygon() {
        return Err(mixspec_core::Error::CurvedBoundary.into());
    }
    let name = if polygon { "verify christianson" } else { "verify rellich" };
    let mut columns =
        vec!["k", "label", "eigenvalue", "lhs", "rhs", "residual", "tol", "holds", "provenance"];
    if polygon {
        columns.extend(["face_distance", "face_v2", "face_tan", "face_nrm"]);
    }
    let mut report = RunReport::new(name, columns);
    report
        .input("domain", domain.source.as_str())
        .input("count", count)
        .input("method", method_name(args.solver.method))
        .input("point", point_cell(p))
        .input("quad", args.quad);
    let spec = &domain.spec;
    let check = |src: EigenfunctionSource<'_>| -> Result<RellichReport> {
        if polygon {
            return Ok(rellich_christianson(spec, p, src, args.quad)?);
        }
        let integrals = match src {
            EigenfunctionSource::ClosedForm(v) => {
                return Ok(rellich_check(v, spec, p, args.quad)?);
            }
            fem_source => boundary_integrals(fem_source, spec, p, args.quad)?,
        };
        Ok(rellich_residual(src.eigenvalue(), &integrals))
    };
    let rows: Vec<(usize, Option<String>, RellichReport, f64, String)> = match args.solver.method {
        Method::ClosedForm => {
            let c = canonical(&domain)?;
            let kind = if spec.has_free_boundary() {
                ProblemKind::NeumannDirichlet
            } else {
                ProblemKind::Dirichlet
            };
            let tol = args.tol.unwrap_or(RELLICH_TOLERANCE);
            c.spectrum(kind, count)?
                .entries
                .iter()
                .map(|e| {
                    let v = eigenfunction(kind, &c, e.label)?;
                    let r = check(EigenfunctionSource::ClosedForm(&v))?;
                    Ok((e.k, Some(e.label.to_string()), r, tol, "closed_form".to_string()))
                })
                .collect::<Result<_>>()?
        }
        Method::Fem => {
            let h = mesh_size(args.solver.h)?;
            report.input("h", h);
            fem_residuals(spec, h, count, &check)?
                .into_iter()
                .enumerate()
                .map(|(i, (r, tol))| (i + 1, None, r, args.tol.unwrap_or(tol), format!("fem(h={h})")))
                .collect()
        }
    };
    for (k, label, r, tol, provenance) in rows {
        let mut row = vec![
            k.into(),
            label.map_or(Cell::Null, Cell::Text),
            r.eigenvalue.into(),
            r.lhs.into(),
            r.rhs.into(),
            r.residual.into(),
            tol.into(),
            (r.residual <= tol).into(),
            provenance.into(),
        ];
        if polygon {
            let faces = &r.faces;
            row.push(faces.iter().map(|f| f.signed_distance.unwrap_or(f64::NAN)).collect::<Vec<_>>().into());
            row.push(faces.iter().map(|f| f.v2).collect::<Vec<_>>().into());
            row.push(faces.iter().map(|f| f.tan).collect::<Vec<_>>().into());
            row.push(faces.iter().map(|f| f.nrm).collect::<Vec<_>>().into());
        }
        report.push(row);
    }
    Ok(report)
}

fn verify_hadamard_cmd(args: &VerifyArgs) -> Result<RunReport> {
    let domain = load_domain(&args.solver.domain, ProblemKind::NeumannDirichlet)?;
    let count = positive_count(args.solver.count, 1)?;
    let t = args.step;
    if !(t > 0.0 && t < 1.0) {
        return Err(CliError::input(format!("--step {t} must lie in (0, 1)")));
    }
    let grid = [-t, -0.5 * t, 0.5 * t, t];
    let (src, scaling_tol, provenance) = match args.solver.method {
        Method::ClosedForm => (HadamardSource::ClosedForm, 1e-12, "closed_form".to_string()),
        Method::Fem => {
            let h = mesh_size(args.solver.h)?;
            (HadamardSource::Fem { h }, 1e-10, format!("fem(h={h})"))
        }
    };
    let scaling_tol = args.tol.unwrap_or(scaling_tol);
    let boundary_tol = (args.solver.method == Method::ClosedForm).then_some(RELLICH_TOLERANCE);
    let mut report = RunReport::new(
        "verify hadamard",
        vec![
            "k",
            "eigenvalue",
            "simple",
            "scaling_error",
            "scaling_tol",
            "fd_derivative",
            "fd_relative_error",
            "fd_tol",
            "boundary_derivative",
            "boundary_relative_error",
            "boundary_tol",
            "holds",
            "provenance",
        ],
    );
    report
        .input("domain", domain.source.as_str())
        .input("count", count)
        .input("method", method_name(args.solver.method))
        .input("t_grid", grid.to_vec())
        .input("quad", args.quad);
    if let HadamardSource::Fem { h } = src {
        report.input("h", h);
    }
    for k in 1..=count {
        let r = hadamard_scaling_check(&domain.spec, k, &grid, src, args.quad)?;
        let holds = !r.simple
            || (r.scaling_error <= scaling_tol
                && r.fd_relative_error <= HADAMARD_FD_TOLERANCE
                && boundary_tol.is_none_or(|tol| r.boundary_relative_error <= tol));
        report.push(vec![
            k.into(),
            r.eigenvalue.into(),
            r.simple.into(),
            r.scaling_error.into(),
            scaling_tol.into(),
            r.fd_derivative.into(),
            r.fd_relative_error.into(),
            HADAMARD_FD_TOLERANCE.into(),
            r.boundary_derivative.into(),
            r.boundary_relative_error.into(),
            boundary_tol.into(),
            holds.into(),
            provenance.clone().into(),
        ]);
    }
    Ok(report)
}

fn verify_weyl_cmd(args: &VerifyArgs) -> Result<RunReport> {
    let kind = parse_problem(args.problem.as_deref().unwrap_or("sd"), args.solver.alpha)?;
    let domain = load_domain(&args.solver.domain, kind)?;
    let count = positive_count(args.solver.count, 200)?;
    let tol = args.tol.unwrap_or(WEYL_TOLERANCE);
    let mut report = RunReport::new(
        "verify weyl",
        vec![
            "problem",
            "fit_start",
            "fit_end",
            "fitted_slope",
            "expected_slope",
            "relative_error",
            "printed_neumann_slope",
            "tol",
            "holds",
            "provenance",
        ],
    );
    report
        .input("domain", domain.source.as_str())
        .input("problem", kind.to_string())
        .input("count", count)
        .input("method", method_name(args.solver.method));
    let seq = match args.solver.method {
        Method::ClosedForm => canonical(&domain)?.spectrum(kind, count)?,
        Method::Fem => {
            let h = mesh_size(args.solver.h)?;
            report.input("h", h);
            fem::domain_spectrum(&domain.spec, kind, h, count)?
        }
    };
    let w = weyl_check(&seq, &domain.spec)?;
    report.push(vec![
        kind.to_string().into(),
        w.fit_range.0.into(),
        w.fit_range.1.into(),
        w.fitted_slope.into(),
        w.expected_slope.into(),
        w.relative_error.into(),
        w.printed_neumann_slope.into(),
        tol.into(),
        w.holds(tol).into(),
        seq.provenance.to_string().into(),
    ]);
    Ok(report)
}

pub fn verify(args: &VerifyArgs) -> Result<RunReport> {
    match args.check {
        Check::Ks => verify_ks_cmd(args),
        Check::Robin => verify_robin_cmd(args),
        Check::Rellich => verify_rellich_cmd(args, false),
        Check::Christianson => verify_rellich_cmd(args, true),
        Check::Hadamard => verify_hadamard_cmd(args),
        Check::Weyl => verify_weyl_cmd(args),
    }
}

#[derive(Serialize)]
struct MeshEdge {
    a: usize,
    b: usize,
    segment: usize,
    condition: &'static str,
    triangle: usize,
}

#[derive(Serialize)]
struct MeshDump {
    h: f64,
    vertices: Vec<[f64; 2]>,
    triangles: Vec<[usize; 3]>,
    boundary_edges: Vec<MeshEdge>,
}

/// The mesh as JSON: vertices, counterclockwise triangles and boundary edges
/// tagged with their segment and condition.
pub fn mesh(args: &MeshArgs) -> Result<String> {
    let domain = load_domain(&args.domain, ProblemKind::NeumannDirichlet)?;
    let m = triangulate(&domain.spec, args.h)?;
    let dump = MeshDump {
        h: m.h,
        vertices: m.vertices.iter().map(|v| [v.x, v.y]).collect(),
        triangles: m.triangles.clone(),
        boundary_edges: m
            .boundary_edges
            .iter()
            .map(|e| MeshEdge {
                a: e.a,
                b: e.b,
                segment: e.segment,
                condition: e.condition.as_str(),
                triangle: e.triangle,
            })
            .collect(),
    };
    Ok(serde_json::to_string(&dump).expect("mesh serializes") + "\n")
}

/// What `main` writes and how it exits.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub output: Option<std::path::PathBuf>,
    pub passed: bool,
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let start = Instant::now();
    let (report, out) = match &cli.command {
        Command::Spectrum(a) => (spectrum(a)?, &a.output),
        Command::Verify(a) => (verify(a)?, &a.output),
        Command::Mesh(a) => {
            return Ok(Outcome {
                text: mesh(a)?,
                output: a.output.clone(),
                passed: true,
            });
        }
    };
    let mut report = report;
    if out.timing {
        report.wall_clock_seconds = Some(start.elapsed().as_secs_f64());
    }
    let text = match out.format {
        crate::cli::Format::Json => report.to_json(),
        crate::cli::Format::Csv => report.to_csv(),
    };
    Ok(Outcome {
        text,
        output: out.output.clone(),
        passed: report.passed(),
    })
}
