//! Boundary integrals of eigenfunctions, the Rellich identity for the mixed
//! Neumann-Dirichlet problem, its polygon form with signed face distances,
//! and the scaling check of the first domain variation.
//!
//! For a unit-norm eigenpair `(mu, v)` and any base point `p`,
//!
//! ```text
//! mu (int_F n.(x-p) v^2 - 2) = int_F n.(x-p) |grad_tau v|^2 - int_{D} n.(x-p) v_n^2
//! ```
//!
//! where `D` is the Dirichlet part of the boundary. On a polygon `n.(x-p)`
//! is constant on each face and equals the signed distance of `p` to that face.

use alloc::format;
use alloc::vec::Vec;

use libm::{exp, fabs, sqrt};

use crate::closed_form::{CanonicalDomain, ClosedFormEigenfunction, ProblemKind, eigenfunction};
use crate::error::{Error, Result};
use crate::fem::{self, DiscreteEigenpair, DiscreteProblem};
use crate::geometry::{BoundaryCondition, DomainSpec, Point2, signed_distance};
use crate::quadrature::GaussLegendre;

/// Largest accepted deviation of the `L^2` norm from 1.
pub const NORM_TOLERANCE: f64 = 1e-6;

/// An eigenfunction whose boundary traces can be integrated.
#[derive(Clone, Copy, Debug)]
pub enum EigenfunctionSource<'a> {
    ClosedForm(&'a ClosedFormEigenfunction),
    /// Traces use the constant gradient of the triangle adjacent to each boundary edge.
    Fem {
        problem: &'a DiscreteProblem,
        pair: &'a DiscreteEigenpair,
    },
}

impl EigenfunctionSource<'_> {
    pub fn eigenvalue(&self) -> f64 {
        match self {
            EigenfunctionSource::ClosedForm(v) => v.eigenvalue(),
            EigenfunctionSource::Fem { pair, .. } => pair.eigenvalue,
        }
    }

    pub fn l2_norm(&self) -> f64 {
        match self {
            EigenfunctionSource::ClosedForm(v) => v.l2_norm(),
            EigenfunctionSource::Fem { problem, pair } => {
                sqrt(problem.mass.bilinear(&pair.vector, &pair.vector).max(0.0))
            }
        }
    }
}

/// Integrals over one boundary segment (a polygon face, the arc, the
/// diameter). The raw integrals carry no weight; the weighted ones carry
/// `n . (x - p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SegmentIntegrals {
    pub segment: usize,
    pub condition: BoundaryCondition,
    /// `int v^2`
    pub v2: f64,
    /// `int |grad_tau v|^2`
    pub tan: f64,
    /// `int v_n^2`
    pub nrm: f64,
    pub weighted_v2: f64,
    pub weighted_tan: f64,
    pub weighted_nrm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryIntegrals {
    /// `int_F n.(x-p) v^2`
    pub i_v2: f64,
    /// `int_F n.(x-p) |grad_tau v|^2`
    pub i_tan: f64,
    /// `int_{boundary minus F} n.(x-p) v_n^2`
    pub i_nrm: f64,
    /// Gauss points per boundary edge or curved segment.
    pub quad_order: usize,
    pub base_point: Point2,
    pub segments: Vec<SegmentIntegrals>,
}

/// Accumulates quadrature samples into per-segment sums.
struct Accumulator {
    segments: Vec<SegmentIntegrals>,
}

impl Accumulator {
    fn new(conditions: &[BoundaryCondition]) -> Self {
        Accumulator {
            segments: conditions
                .iter()
                .enumerate()
                .map(|(segment, &condition)| SegmentIntegrals {
                    segment,
                    condition,
                    v2: 0.0,
                    tan: 0.0,
                    nrm: 0.0,
                    weighted_v2: 0.0,
                    weighted_tan: 0.0,
                    weighted_nrm: 0.0,
                })
                .collect(),
        }
    }

    /// One sample with quadrature weight `w`, support height `s = n.(x-p)`,
    /// value, tangential and normal derivative.
    fn add(&mut self, segment: usize, w: f64, s: f64, v: f64, dt: f64, dn: f64) {
        let e = &mut self.segments[segment];
        e.v2 += w * v * v;
        e.tan += w * dt * dt;
        e.nrm += w * dn * dn;
        e.weighted_v2 += w * s * v * v;
        e.weighted_tan += w * s * dt * dt;
        e.weighted_nrm += w * s * dn * dn;
    }

    fn finish(self, quad_order: usize, base_point: Point2) -> BoundaryIntegrals {
        let (mut i_v2, mut i_tan, mut i_nrm) = (0.0, 0.0, 0.0);
        for s in &self.segments {
            if s.condition.is_free() {
                i_v2 += s.weighted_v2;
                i_tan += s.weighted_tan;
            } else {
                i_nrm += s.weighted_nrm;
            }
        }
        BoundaryIntegrals {
            i_v2,
            i_tan,
            i_nrm,
            quad_order,
            base_point,
            segments: self.segments,
        }
    }
}

fn check_norm(source: &EigenfunctionSource<'_>) -> Result<()> {
    let norm = source.l2_norm();
    if fabs(norm - 1.0) > NORM_TOLERANCE {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

/// Gauss-Legendre quadrature of the boundary traces of `v`, `quad_order`
/// points per curved segment or straight edge, with `x` measured from `p`.
pub fn boundary_integrals(
    source: EigenfunctionSource<'_>,
    domain: &DomainSpec,
    p: Point2,
    quad_order: usize,
) -> Result<BoundaryIntegrals> {
    if quad_order == 0 {
        return Err(Error::InvalidArgument("quadrature order must be at least 1".into()));
    }
    check_norm(&source)?;
    let rule = GaussLegendre::new(quad_order);
    let mut acc = Accumulator::new(domain.conditions());
    match source {
        EigenfunctionSource::ClosedForm(v) => {
            for (index, seg) in domain.segments().iter().enumerate() {
                let length = seg.length();
                for (t, w) in rule.on_interval(0.0, 1.0) {
                    let (x, n) = (seg.point(t), seg.normal(t));
                    let tangent = Point2::new(-n.y, n.x);
                    let g = v.gradient(x);
                    acc.add(index, w * length, n.dot(x - p), v.value(x), g.dot(tangent), g.dot(n));
                }
            }
        }
        EigenfunctionSource::Fem { problem, pair } => {
            let mesh = &problem.mesh;
            if domain.segment_count() != mesh.boundary_edges.iter().map(|e| e.segment + 1).max().unwrap_or(0) {
                return Err(Error::InvalidArgument("mesh does not belong to the domain".into()));
            }
            for e in &mesh.boundary_edges {
                let (a, b) = (mesh.vertices[e.a], mesh.vertices[e.b]);
                let (va, vb) = (pair.vector[e.a], pair.vector[e.b]);
                let n = mesh.edge_normal(e);
                let tangent = Point2::new(-n.y, n.x);
                let g = mesh.gradient(e.triangle, &pair.vector);
                let length = mesh.edge_length(e);
                for (t, w) in rule.on_interval(0.0, 1.0) {
                    let x = a + (b - a) * t;
                    let v = va + (vb - va) * t;
                    acc.add(e.segment, w * length, n.dot(x - p), v, g.dot(tangent), g.dot(n));
                }
            }
        }
    }
    Ok(acc.finish(quad_order, p))
}

/// Contribution of one face to the polygon identity.
#[derive(Clone, Debug, PartialEq)]
pub struct FaceContribution {
    pub index: usize,
    pub condition: BoundaryCondition,
    /// `n.(x-p)` on the face, when it is constant (straight faces).
    pub signed_distance: Option<f64>,
    /// Weighted `v^2` integral (free faces, zero otherwise).
    pub v2: f64,
    /// Weighted tangential-gradient integral (free faces, zero otherwise).
    pub tan: f64,
    /// Weighted normal-derivative integral (Dirichlet faces, zero otherwise).
    pub nrm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RellichReport {
    pub eigenvalue: f64,
    /// `mu (I_v2 - 2)`
    pub lhs: f64,
    /// `I_tan - I_nrm`
    pub rhs: f64,
    pub residual: f64,
    pub faces: Vec<FaceContribution>,
}

impl RellichReport {
    fn from_faces(mu: f64, faces: Vec<FaceContribution>) -> Self {
        let i_v2: f64 = faces.iter().map(|f| f.v2).sum();
        let i_tan: f64 = faces.iter().map(|f| f.tan).sum();
        let i_nrm: f64 = faces.iter().map(|f| f.nrm).sum();
        let lhs = mu * (i_v2 - 2.0);
        let rhs = i_tan - i_nrm;
        RellichReport {
            eigenvalue: mu,
            lhs,
            rhs,
            residual: fabs(lhs - rhs),
            faces,
        }
    }
}

/// `|mu (I_v2 - 2) - (I_tan - I_nrm)|` with the per-segment breakdown.
pub fn rellich_residual(mu: f64, integrals: &BoundaryIntegrals) -> RellichReport {
    let faces = integrals
        .segments
        .iter()
        .map(|s| {
            let free = s.condition.is_free();
            FaceContribution {
                index: s.segment,
                condition: s.condition,
                signed_distance: None,
                v2: if free { s.weighted_v2 } else { 0.0 },
                tan: if free { s.weighted_tan } else { 0.0 },
                nrm: if free { 0.0 } else { s.weighted_nrm },
            }
        })
        .collect();
    let mut report = RellichReport::from_faces(mu, faces);
    // Keep the aggregate values exactly as integrated.
    report.lhs = mu * (integrals.i_v2 - 2.0);
    report.rhs = integrals.i_tan - integrals.i_nrm;
    report.residual = fabs(report.lhs - report.rhs);
    report
}

/// Renormalizes a closed-form eigenfunction and checks the identity.
pub fn rellich_check(
    v: &ClosedFormEigenfunction,
    domain: &DomainSpec,
    p: Point2,
    quad_order: usize,
) -> Result<RellichReport> {
    let v = v.normalized();
    let integrals = boundary_integrals(EigenfunctionSource::ClosedForm(&v), domain, p, quad_order)?;
    Ok(rellich_residual(v.eigenvalue(), &integrals))
}

/// The polygon identity: each face integral is taken without weight and
/// multiplied by the face's signed distance from `p`.
pub fn rellich_christianson(
    domain: &DomainSpec,
    p: Point2,
    source: EigenfunctionSource<'_>,
    quad_order: usize,
) -> Result<RellichReport> {
    if !domain.is_polygon() {
        return Err(Error::CurvedBoundary);
    }
    let normalized;
    let source = match source {
        EigenfunctionSource::ClosedForm(v) => {
            normalized = v.normalized();
            EigenfunctionSource::ClosedForm(&normalized)
        }
        fem => fem,
    };
    let integrals = boundary_integrals(source, domain, p, quad_order)?;
    let faces = integrals
        .segments
        .iter()
        .map(|s| {
            let dist = signed_distance(domain, s.segment, p)?;
            let free = s.condition.is_free();
            Ok(FaceContribution {
                index: s.segment,
                condition: s.condition,
                signed_distance: Some(dist),
                v2: if free { dist * s.v2 } else { 0.0 },
                tan: if free { dist * s.tan } else { 0.0 },
                nrm: if free { 0.0 } else { dist * s.nrm },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RellichReport::from_faces(source.eigenvalue(), faces))
}

/// Where the Hadamard check takes its eigenvalues from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HadamardSource {
    ClosedForm,
    /// One mesh of size `h`, with vertices scaled for every `t`.
    Fem { h: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct HadamardReport {
    pub k: usize,
    pub eigenvalue: f64,
    /// `(t, mu_k(e^t Omega))`
    pub samples: Vec<(f64, f64)>,
    /// Largest `|mu_k(e^t Omega) e^{2t} / mu_k - 1|`.
    pub scaling_error: f64,
    /// Richardson-extrapolated central difference of `t -> mu_k(e^t Omega)` at 0.
    pub fd_derivative: f64,
    /// `|fd / (-2 mu_k) - 1|`
    pub fd_relative_error: f64,
    /// `I_tan - I_nrm - mu I_v2` with base point at the origin, which should equal `-2 mu_k`.
    pub boundary_derivative: f64,
    pub boundary_relative_error: f64,
    /// `false` when `mu_k` is not simple; the checks are then skipped.
    pub simple: bool,
}

/// Checks `mu_k(e^t Omega) = e^{-2t} mu_k(Omega)`, the finite-difference
/// derivative `-2 mu_k`, and its boundary-integral form, for the
/// Neumann-Dirichlet problem under dilation about the origin.
pub fn hadamard_scaling_check(
    domain: &DomainSpec,
    k: usize,
    t_grid: &[f64],
    source: HadamardSource,
    quad_order: usize,
) -> Result<HadamardReport> {
    if k == 0 {
        return Err(Error::InvalidArgument("eigenvalue index k is 1-based".into()));
    }
    if t_grid.iter().any(|t| !t.is_finite())
        || t_grid.iter().any(|&t| !t_grid.iter().any(|&s| fabs(s + t) <= 1e-15 * (1.0 + fabs(t))))
    {
        return Err(Error::InvalidArgument("t grid must be symmetric about 0".into()));
    }
    let mut positive: Vec<f64> = t_grid.iter().copied().filter(|&t| t > 0.0).collect();
    positive.sort_by(|a, b| b.total_cmp(a));
    positive.dedup();
    if positive.is_empty() {
        return Err(Error::InvalidArgument("t grid needs a nonzero step".into()));
    }
    let kind = ProblemKind::NeumannDirichlet;
    let count = k + 1;
    // mu_k(e^t Omega) and, at t = 0, the neighbours and boundary derivative.
    let (base, neighbours, mu_at, boundary): (f64, (Option<f64>, Option<f64>), _, f64) = match source {
        HadamardSource::ClosedForm => {
            let canonical = CanonicalDomain::recognize(domain)
                .ok_or_else(|| Error::Unsupported("no closed form for this domain and partition".into()))?;
            let spectrum = canonical.spectrum(kind, count)?;
            let entry = spectrum.entries[k - 1];
            let v = eigenfunction(kind, &canonical, entry.label)?;
            let integrals = boundary_integrals(EigenfunctionSource::ClosedForm(&v), domain, Point2::ORIGIN, quad_order)?;
            let boundary = integrals.i_tan - integrals.i_nrm - entry.value * integrals.i_v2;
            let mu_at = move |t: f64| -> Result<f64> {
                Ok(canonical.scaled(exp(t)).spectrum(kind, k)?.entries[k - 1].value)
            };
            let before = if k >= 2 { spectrum.value(k - 1) } else { None };
            (
                entry.value,
                (before, spectrum.value(k + 1)),
                alloc::boxed::Box::new(mu_at) as alloc::boxed::Box<dyn Fn(f64) -> Result<f64>>,
                boundary,
            )
        }
        HadamardSource::Fem { h } => {
            let problem = fem::assemble(fem::triangulate(domain, h)?)?;
            let pairs = fem::solve_neumann_dirichlet(&problem, count)?;
            let pair = &pairs[k - 1];
            let integrals = boundary_integrals(
                EigenfunctionSource::Fem {
                    problem: &problem,
                    pair,
                },
                domain,
                Point2::ORIGIN,
                quad_order,
            )?;
            let boundary = integrals.i_tan - integrals.i_nrm - pair.eigenvalue * integrals.i_v2;
            let mesh = problem.mesh.clone();
            let mu_at = move |t: f64| -> Result<f64> {
                let scaled = fem::assemble(mesh.scaled(exp(t)))?;
                Ok(fem::solve_neumann_dirichlet(&scaled, k)?[k - 1].eigenvalue)
            };
            let before = if k >= 2 { Some(pairs[k - 2].eigenvalue) } else { None };
            (
                pair.eigenvalue,
                (before, pairs.get(k).map(|p| p.eigenvalue)),
                alloc::boxed::Box::new(mu_at) as alloc::boxed::Box<dyn Fn(f64) -> Result<f64>>,
                boundary,
            )
        }
    };
    let gap = |other: Option<f64>| other.is_none_or(|o| fabs(o - base) > 1e-8 * fabs(base).max(1e-300));
    let simple = gap(neighbours.0) && gap(neighbours.1);
    let mut report = HadamardReport {
        k,
        eigenvalue: base,
        samples: Vec::new(),
        scaling_error: f64::NAN,
        fd_derivative: f64::NAN,
        fd_relative_error: f64::NAN,
        boundary_derivative: boundary,
        boundary_relative_error: fabs(boundary / (-2.0 * base) - 1.0),
        simple,
    };
    if !simple {
        return Ok(report);
    }
    let mut scaling_error: f64 = 0.0;
    for &t in t_grid {
        let mu = mu_at(t)?;
        scaling_error = scaling_error.max(fabs(mu * exp(2.0 * t) / base - 1.0));
        report.samples.push((t, mu));
    }
    let sample = |t: f64| -> f64 {
        report
            .samples
            .iter()
            .find(|s| fabs(s.0 - t) <= 1e-15 * (1.0 + fabs(t)))
            .map(|s| s.1)
            .expect("grid is symmetric")
    };
    let central = |t: f64| (sample(t) - sample(-t)) / (2.0 * t);
    let fd = if positive.len() >= 2 {
        let (t1, t2) = (positive[0], positive[1]);
        let r2 = (t1 / t2) * (t1 / t2);
        (r2 * central(t2) - central(t1)) / (r2 - 1.0)
    } else {
        central(positive[0])
    };
    report.scaling_error = scaling_error;
    report.fd_derivative = fd;
    report.fd_relative_error = fabs(fd / (-2.0 * base) - 1.0);
    Ok(report)
}

/// Human-readable description of a failed normalization, for CLI messages.
pub fn describe_norm(norm: f64) -> alloc::string::String {
    format!("L2 norm {norm} differs from 1 by more than {NORM_TOLERANCE}")
}
