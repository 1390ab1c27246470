//! Exact spectra and eigenfunctions of the canonical domains: the unit square
//! with its four standard partitions, the half disk (arc in `F`, diameter
//! Dirichlet), the full disk and the hyperbolic disk.
//!
//! Doubly indexed spectra are enumerated on a growing index box until the
//! smallest candidate outside the box exceeds the last kept value, so the
//! first `count` entries are always correct. Ties are broken by the mode
//! label, which makes the ordering deterministic.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;
use core::fmt;

use libm::{atan2, cos, cosh, sin, sinh, sqrt, tanh};

use crate::error::{Error, Result};
use crate::geometry::{BoundaryCondition, DomainKind, DomainSpec, Point2};
use crate::quadrature::GaussLegendre;
use crate::specfun::{bessel_j, bessel_j_prime, bessel_j_second, bessel_prime_zeros, bessel_zeros, robin_zeros};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProblemKind {
    NeumannDirichlet,
    SteklovDirichlet,
    RobinDirichlet { alpha: f64 },
    Dirichlet,
    Neumann,
}

impl ProblemKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProblemKind::NeumannDirichlet => "neumann_dirichlet",
            ProblemKind::SteklovDirichlet => "steklov_dirichlet",
            ProblemKind::RobinDirichlet { .. } => "robin_dirichlet",
            ProblemKind::Dirichlet => "dirichlet",
            ProblemKind::Neumann => "neumann",
        }
    }

    /// Steklov eigenvalues scale like `1/length`; all others like `1/length^2`.
    pub fn scaling_exponent(&self) -> i32 {
        match self {
            ProblemKind::SteklovDirichlet => -1,
            _ => -2,
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemKind::RobinDirichlet { alpha } => write!(f, "robin_dirichlet(alpha={alpha})"),
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SteklovBranch {
    /// `sigma_{2k-1} = pi k tanh(pi k / 2)`, eigenfunction even about `x = 1/2`.
    Tanh,
    /// `sigma_{2k} = pi k coth(pi k / 2)`, eigenfunction odd about `x = 1/2`.
    Coth,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AngularParity {
    Constant,
    Sin,
    Cos,
}

/// Mode indices that generate an eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModeLabel {
    /// `cos`/`sin` products on the square with frequencies `(m pi, n pi)`.
    Grid { m: u32, n: u32 },
    /// Square with one Dirichlet side: frequencies `(m pi, (n + 1/2) pi)`.
    HalfShiftedGrid { m: u32, n: u32 },
    SteklovSquare { k: u32, branch: SteklovBranch },
    /// `J_l(kappa r) sin(l theta)` on the half disk.
    Bessel { l: u32, m: u32 },
    /// `r^k sin(k theta)` on the half disk.
    Harmonic { k: u32 },
    /// Disk modes `1`, `sin(m theta)`, `cos(m theta)`.
    Angular { m: u32, parity: AngularParity },
    /// Position in a computed (discrete) spectrum.
    Discrete { index: usize },
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ModeLabel::Grid { m, n } => write!(f, "(m,n)=({m},{n})"),
            ModeLabel::HalfShiftedGrid { m, n } => write!(f, "(m,n+1/2)=({m},{n}+1/2)"),
            ModeLabel::SteklovSquare { k, branch } => {
                let b = match branch {
                    SteklovBranch::Tanh => "tanh",
                    SteklovBranch::Coth => "coth",
                };
                write!(f, "k={k},{b}")
            }
            ModeLabel::Bessel { l, m } => write!(f, "(l,m)=({l},{m})"),
            ModeLabel::Harmonic { k } => write!(f, "k={k}"),
            ModeLabel::Angular { m, parity } => {
                let p = match parity {
                    AngularParity::Constant => "const",
                    AngularParity::Sin => "sin",
                    AngularParity::Cos => "cos",
                };
                write!(f, "m={m},{p}")
            }
            ModeLabel::Discrete { index } => write!(f, "#{index}"),
        }
    }
}

/// Where a spectrum came from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Provenance {
    ClosedForm,
    Fem { h: f64 },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::ClosedForm => f.write_str("closed_form"),
            Provenance::Fem { h } => write!(f, "fem(h={h})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenEntry {
    /// 1-based position in the sorted spectrum.
    pub k: usize,
    pub value: f64,
    pub label: ModeLabel,
}

/// Eigenvalues sorted nondecreasingly, counted with multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenSequence {
    pub kind: ProblemKind,
    pub provenance: Provenance,
    pub entries: Vec<EigenEntry>,
}

impl EigenSequence {
    /// Wraps an already sorted list of computed values.
    pub fn from_values(kind: ProblemKind, provenance: Provenance, values: &[f64]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .map(|(i, &value)| EigenEntry {
                k: i + 1,
                value,
                label: ModeLabel::Discrete { index: i + 1 },
            })
            .collect();
        EigenSequence { kind, provenance, entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.value).collect()
    }

    /// The `k`'th eigenvalue, 1-based.
    pub fn value(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.entries.get(i)).map(|e| e.value)
    }

    pub fn is_sorted(&self) -> bool {
        self.entries.windows(2).all(|w| w[0].value <= w[1].value)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SquarePartition {
    /// Vertical sides in `F`, horizontal sides Dirichlet.
    Mixed,
    /// Bottom side Dirichlet, the other three in `F`.
    OneDirichletSide,
    Dirichlet,
    Neumann,
}

/// A domain/partition pair with a known spectrum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CanonicalDomain {
    /// Axis-aligned square `[c.x, c.x + side] x [c.y, c.y + side]`.
    Square {
        corner: Point2,
        side: f64,
        partition: SquarePartition,
    },
    /// Half disk about the origin, arc in `F`, diameter Dirichlet.
    HalfDisk { radius: f64 },
    /// Disk about the origin with its whole boundary in `F`.
    Disk { radius: f64 },
    /// Hyperbolic disk with its whole boundary in `F`.
    HyperbolicDisk { radius: f64 },
}

impl CanonicalDomain {
    pub fn unit_square(partition: SquarePartition) -> Self {
        CanonicalDomain::Square {
            corner: Point2::ORIGIN,
            side: 1.0,
            partition,
        }
    }

    /// Matches a [`DomainSpec`] against the canonical shapes.
    pub fn recognize(domain: &DomainSpec) -> Option<Self> {
        let bc = domain.conditions();
        match domain.kind() {
            DomainKind::Polygon { vertices } => recognize_square(vertices, bc),
            DomainKind::HalfDisk { radius } => {
                (bc[0].is_free() && !bc[1].is_free()).then_some(CanonicalDomain::HalfDisk { radius: *radius })
            }
            DomainKind::Disk { radius } => bc[0].is_free().then_some(CanonicalDomain::Disk { radius: *radius }),
            DomainKind::HyperbolicDisk { radius } => {
                bc[0].is_free().then_some(CanonicalDomain::HyperbolicDisk { radius: *radius })
            }
        }
    }

    /// The domain as a [`DomainSpec`]; `F` segments carry `free`.
    pub fn to_domain(&self, free: BoundaryCondition) -> DomainSpec {
        use BoundaryCondition::Dirichlet as D;
        match *self {
            CanonicalDomain::Square { corner, side, partition } => {
                let f = free;
                let conditions = match partition {
                    SquarePartition::Mixed => [D, f, D, f],
                    SquarePartition::OneDirichletSide => [D, f, f, f],
                    SquarePartition::Dirichlet => [D, D, D, D],
                    SquarePartition::Neumann => [f, f, f, f],
                };
                let vertices = alloc::vec![
                    corner,
                    corner + Point2::new(side, 0.0),
                    corner + Point2::new(side, side),
                    corner + Point2::new(0.0, side),
                ];
                DomainSpec::polygon(vertices, conditions.to_vec()).expect("square is a valid polygon")
            }
            CanonicalDomain::HalfDisk { radius } => {
                DomainSpec::half_disk(radius, free, D).expect("positive radius")
            }
            CanonicalDomain::Disk { radius } => DomainSpec::disk(radius, free).expect("positive radius"),
            CanonicalDomain::HyperbolicDisk { radius } => {
                DomainSpec::hyperbolic_disk(radius, free).expect("positive radius")
            }
        }
    }

    /// Dilation about the origin.
    pub fn scaled(&self, factor: f64) -> Self {
        match *self {
            CanonicalDomain::Square { corner, side, partition } => CanonicalDomain::Square {
                corner: corner * factor,
                side: side * factor,
                partition,
            },
            CanonicalDomain::HalfDisk { radius } => CanonicalDomain::HalfDisk { radius: radius * factor },
            CanonicalDomain::Disk { radius } => CanonicalDomain::Disk { radius: radius * factor },
            CanonicalDomain::HyperbolicDisk { .. } => *self,
        }
    }

    fn unsupported(&self, kind: ProblemKind) -> Error {
        Error::Unsupported(format!("no closed form for {kind} on {self:?}"))
    }

    /// The first `count` eigenvalues of `kind`.
    pub fn spectrum(&self, kind: ProblemKind, count: usize) -> Result<EigenSequence> {
        let entries = match (*self, kind) {
            (CanonicalDomain::Square { side, partition, .. }, _) => {
                let scale = PI * PI / (side * side);
                let grid = |m0: u32, n0: u32| {
                    grid_spectrum(count, m0, n0, |m, n| (m * m + n * n) as u64, |m, n| ModeLabel::Grid { m, n }, |key| {
                        scale * key as f64
                    })
                };
                match (kind, partition) {
                    (ProblemKind::Dirichlet, _) | (ProblemKind::NeumannDirichlet, SquarePartition::Dirichlet) => {
                        grid(1, 1)
                    }
                    (ProblemKind::Neumann, _) | (ProblemKind::NeumannDirichlet, SquarePartition::Neumann) => {
                        grid(0, 0)
                    }
                    (ProblemKind::NeumannDirichlet, SquarePartition::Mixed) => grid(0, 1),
                    (ProblemKind::NeumannDirichlet, SquarePartition::OneDirichletSide) => grid_spectrum(
                        count,
                        0,
                        0,
                        |m, n| (4 * m * m + (2 * n + 1) * (2 * n + 1)) as u64,
                        |m, n| ModeLabel::HalfShiftedGrid { m, n },
                        |key| 0.25 * scale * key as f64,
                    ),
                    (ProblemKind::SteklovDirichlet, SquarePartition::Mixed) => {
                        let mut entries: Vec<EigenEntry> = (0..count)
                            .map(|i| {
                                let k = (i / 2 + 1) as u32;
                                let branch = if i % 2 == 0 { SteklovBranch::Tanh } else { SteklovBranch::Coth };
                                let label = ModeLabel::SteklovSquare { k, branch };
                                EigenEntry {
                                    k: i + 1,
                                    value: square_steklov_value(side, k, branch),
                                    label,
                                }
                            })
                            .collect();
                        sort_entries(&mut entries);
                        entries
                    }
                    _ => return Err(self.unsupported(kind)),
                }
            }
            (CanonicalDomain::HalfDisk { radius }, ProblemKind::NeumannDirichlet) => {
                bessel_spectrum(count, radius, bessel_prime_zeros)?
            }
            (CanonicalDomain::HalfDisk { radius }, ProblemKind::RobinDirichlet { alpha }) => {
                if !(alpha >= 0.0 && alpha.is_finite()) {
                    return Err(Error::InvalidArgument(format!("alpha = {alpha} must be >= 0")));
                }
                bessel_spectrum(count, radius, |l, m| robin_zeros(l, m, alpha * radius))?
            }
            (CanonicalDomain::HalfDisk { radius }, ProblemKind::Dirichlet) => {
                bessel_spectrum(count, radius, bessel_zeros)?
            }
            (CanonicalDomain::HalfDisk { radius }, ProblemKind::SteklovDirichlet) => (1..=count)
                .map(|k| EigenEntry {
                    k,
                    value: k as f64 / radius,
                    label: ModeLabel::Harmonic { k: k as u32 },
                })
                .collect(),
            (CanonicalDomain::Disk { radius }, ProblemKind::SteklovDirichlet) => angular_spectrum(count, 1.0 / radius),
            (CanonicalDomain::HyperbolicDisk { radius }, ProblemKind::SteklovDirichlet) => {
                angular_spectrum(count, 1.0 / sinh(radius))
            }
            _ => return Err(self.unsupported(kind)),
        };
        Ok(EigenSequence {
            kind,
            provenance: Provenance::ClosedForm,
            entries,
        })
    }

    /// Regenerates the eigenvalue of a mode from its label.
    pub fn eigenvalue(&self, kind: ProblemKind, label: ModeLabel) -> Result<f64> {
        Ok(mode_shape(self, kind, label)?.0)
    }
}

fn recognize_square(vertices: &[Point2], bc: &[BoundaryCondition]) -> Option<CanonicalDomain> {
    if vertices.len() != 4 {
        return None;
    }
    let start = (0..4).min_by(|&a, &b| {
        let (p, q) = (vertices[a], vertices[b]);
        (p.x + p.y).partial_cmp(&(q.x + q.y)).unwrap_or(Ordering::Equal)
    })?;
    let corner = vertices[start];
    let side = vertices[(start + 1) % 4].x - corner.x;
    if side <= 0.0 {
        return None;
    }
    let tol = 1e-12 * side.max(corner.norm());
    let expected = [
        corner,
        corner + Point2::new(side, 0.0),
        corner + Point2::new(side, side),
        corner + Point2::new(0.0, side),
    ];
    for (i, e) in expected.iter().enumerate() {
        if vertices[(start + i) % 4].distance(*e) > tol {
            return None;
        }
    }
    // Sides relative to the corner: bottom, right, top, left.
    let dirichlet: [bool; 4] = core::array::from_fn(|i| !bc[(start + i) % 4].is_free());
    let partition = match dirichlet {
        [true, false, true, false] => SquarePartition::Mixed,
        [true, false, false, false] => SquarePartition::OneDirichletSide,
        [true, true, true, true] => SquarePartition::Dirichlet,
        [false, false, false, false] => SquarePartition::Neumann,
        _ => return None,
    };
    Some(CanonicalDomain::Square { corner, side, partition })
}

fn sort_entries(entries: &mut [EigenEntry]) {
    entries.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap_or(Ordering::Equal).then(a.label.cmp(&b.label)));
    for (i, e) in entries.iter_mut().enumerate() {
        e.k = i + 1;
    }
}

fn square_steklov_value(side: f64, k: u32, branch: SteklovBranch) -> f64 {
    let w = PI * k as f64;
    let t = tanh(0.5 * w);
    match branch {
        SteklovBranch::Tanh => w * t / side,
        SteklovBranch::Coth => w / (t * side),
    }
}

/// Sorted first `count` values of a spectrum indexed by `m >= m0, n >= n0`
/// whose integer `key` is increasing in each index.
fn grid_spectrum(
    count: usize,
    m0: u32,
    n0: u32,
    key: impl Fn(u32, u32) -> u64,
    label: impl Fn(u32, u32) -> ModeLabel,
    value: impl Fn(u64) -> f64,
) -> Vec<EigenEntry> {
    if count == 0 {
        return Vec::new();
    }
    let mut span = (sqrt(count as f64) as u32) + 2;
    loop {
        let mut cands: Vec<(u64, ModeLabel)> = (m0..m0 + span)
            .flat_map(|m| (n0..n0 + span).map(move |n| (m, n)))
            .map(|(m, n)| (key(m, n), label(m, n)))
            .collect();
        cands.sort();
        let excluded = key(m0 + span, n0).min(key(m0, n0 + span));
        if cands.len() >= count && cands[count - 1].0 < excluded {
            return cands[..count]
                .iter()
                .enumerate()
                .map(|(i, &(key, label))| EigenEntry {
                    k: i + 1,
                    value: value(key),
                    label,
                })
                .collect();
        }
        span *= 2;
    }
}

/// Sorted first `count` values `(z_{l,m} / R)^2` over `l, m >= 1`, where
/// `zeros(l, M)` returns the first `M` roots for order `l`. Every root family
/// used here dominates `j'_{l,m}`, which gives the exclusion bound.
fn bessel_spectrum(
    count: usize,
    radius: f64,
    zeros: impl Fn(u32, u32) -> Result<Vec<f64>>,
) -> Result<Vec<EigenEntry>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let mut span = (sqrt(count as f64) as u32) + 2;
    loop {
        let mut entries = Vec::new();
        for l in 1..=span {
            for (i, z) in zeros(l, span)?.into_iter().enumerate() {
                entries.push(EigenEntry {
                    k: 0,
                    value: z * z / (radius * radius),
                    label: ModeLabel::Bessel { l, m: i as u32 + 1 },
                });
            }
        }
        sort_entries(&mut entries);
        let next_l = (span + 1) as f64;
        let next_m = bessel_prime_zeros(1, span + 1)?[span as usize];
        let excluded = (next_l * (next_l + 2.0)).min(next_m * next_m) / (radius * radius);
        if entries[count - 1].value < excluded {
            entries.truncate(count);
            return Ok(entries);
        }
        span *= 2;
    }
}

/// `0, c, c, 2c, 2c, ...` with the constant mode first.
fn angular_spectrum(count: usize, unit: f64) -> Vec<EigenEntry> {
    (1..=count)
        .map(|k| {
            let m = (k / 2) as u32;
            let parity = match (m, k % 2) {
                (0, _) => AngularParity::Constant,
                (_, 0) => AngularParity::Sin,
                _ => AngularParity::Cos,
            };
            EigenEntry {
                k,
                value: m as f64 * unit,
                label: ModeLabel::Angular { m, parity },
            }
        })
        .collect()
}

pub fn square_nd_spectrum(count: usize) -> EigenSequence {
    CanonicalDomain::unit_square(SquarePartition::Mixed)
        .spectrum(ProblemKind::NeumannDirichlet, count)
        .expect("closed form exists")
}

pub fn square_sd_spectrum(count: usize) -> EigenSequence {
    CanonicalDomain::unit_square(SquarePartition::Mixed)
        .spectrum(ProblemKind::SteklovDirichlet, count)
        .expect("closed form exists")
}

pub fn square_dirichlet_spectrum(count: usize) -> EigenSequence {
    CanonicalDomain::unit_square(SquarePartition::Dirichlet)
        .spectrum(ProblemKind::Dirichlet, count)
        .expect("closed form exists")
}

pub fn square_neumann_spectrum(count: usize) -> EigenSequence {
    CanonicalDomain::unit_square(SquarePartition::Neumann)
        .spectrum(ProblemKind::Neumann, count)
        .expect("closed form exists")
}

/// Unit square with Dirichlet condition on the bottom side only.
pub fn square_one_dirichlet_side_spectrum(count: usize) -> EigenSequence {
    CanonicalDomain::unit_square(SquarePartition::OneDirichletSide)
        .spectrum(ProblemKind::NeumannDirichlet, count)
        .expect("closed form exists")
}

pub fn halfdisk_nd_spectrum(count: usize) -> Result<EigenSequence> {
    CanonicalDomain::HalfDisk { radius: 1.0 }.spectrum(ProblemKind::NeumannDirichlet, count)
}

pub fn halfdisk_sd_spectrum(count: usize) -> EigenSequence {
    CanonicalDomain::HalfDisk { radius: 1.0 }
        .spectrum(ProblemKind::SteklovDirichlet, count)
        .expect("closed form exists")
}

pub fn robin_halfdisk_spectrum(alpha: f64, count: usize) -> Result<EigenSequence> {
    CanonicalDomain::HalfDisk { radius: 1.0 }.spectrum(ProblemKind::RobinDirichlet { alpha }, count)
}

/// Steklov spectrum of the Euclidean disk of radius `radius`: `0, 1/R, 1/R, 2/R, ...`.
pub fn disk_steklov_spectrum(radius: f64, count: usize) -> Result<EigenSequence> {
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!("radius {radius} must be positive")));
    }
    CanonicalDomain::Disk { radius }.spectrum(ProblemKind::SteklovDirichlet, count)
}

/// Steklov spectrum of the geodesic disk of radius `R` in the hyperbolic
/// plane: `sigma_1 = 0` and `sigma_{2m} = sigma_{2m+1} = m / sinh(R)`.
///
/// The eigenfunctions are `tanh(r/2)^m` times `sin(m theta)` or `cos(m theta)`
/// in geodesic polar coordinates.
pub fn hyperbolic_disk_steklov_spectrum(radius: f64, count: usize) -> Result<EigenSequence> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("radius {radius} must be positive")));
    }
    CanonicalDomain::HyperbolicDisk { radius }.spectrum(ProblemKind::SteklovDirichlet, count)
}

/// One-dimensional factor of a separable square mode, in the local coordinate `u` in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Factor {
    Cos(f64),
    Sin(f64),
    /// `cosh(w (u - 1/2))`
    CoshCentered(f64),
    /// `sinh(w (u - 1/2))`
    SinhCentered(f64),
}

impl Factor {
    /// Value and first two derivatives.
    fn eval(self, u: f64) -> (f64, f64, f64) {
        match self {
            Factor::Cos(w) => {
                let (c, s) = (cos(w * u), sin(w * u));
                (c, -w * s, -w * w * c)
            }
            Factor::Sin(w) => {
                let (c, s) = (cos(w * u), sin(w * u));
                (s, w * c, -w * w * s)
            }
            Factor::CoshCentered(w) => {
                let t = w * (u - 0.5);
                (cosh(t), w * sinh(t), w * w * cosh(t))
            }
            Factor::SinhCentered(w) => {
                let t = w * (u - 0.5);
                (sinh(t), w * cosh(t), w * w * sinh(t))
            }
        }
    }

    /// `int_0^1 f(u)^2 du`.
    fn square_integral(self) -> f64 {
        match self {
            Factor::Cos(0.0) => 1.0,
            Factor::Cos(w) => 0.5 + sin(2.0 * w) / (4.0 * w),
            Factor::Sin(w) => 0.5 - sin(2.0 * w) / (4.0 * w),
            Factor::CoshCentered(w) => 0.5 + sinh(w) / (2.0 * w),
            Factor::SinhCentered(w) => sinh(w) / (2.0 * w) - 0.5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Radial {
    /// `J_l(kappa r)`
    Bessel { kappa: f64 },
    /// `r^k`
    Power,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Shape {
    Separable {
        corner: Point2,
        side: f64,
        x: Factor,
        y: Factor,
    },
    Polar {
        radius: f64,
        order: u32,
        radial: Radial,
    },
}

impl Shape {
    /// `int_Omega v^2` of the unscaled shape.
    fn square_norm(&self) -> f64 {
        match *self {
            Shape::Separable { side, x, y, .. } => side * side * x.square_integral() * y.square_integral(),
            Shape::Polar { radius, order, radial } => {
                let l = order as f64;
                let radial_integral = match radial {
                    Radial::Bessel { kappa } => {
                        let z = kappa * radius;
                        let (j, dj) = (bessel_j(order, z), bessel_j_prime(order, z));
                        0.5 * radius * radius * (dj * dj + (1.0 - l * l / (z * z)) * j * j)
                    }
                    Radial::Power => libm::pow(radius, 2.0 * l + 2.0) / (2.0 * l + 2.0),
                };
                0.5 * PI * radial_integral
            }
        }
    }

    fn radial_eval(order: u32, radial: Radial, r: f64) -> (f64, f64, f64) {
        match radial {
            Radial::Bessel { kappa } => {
                let z = kappa * r;
                (
                    bessel_j(order, z),
                    kappa * bessel_j_prime(order, z),
                    kappa * kappa * bessel_j_second(order, z),
                )
            }
            Radial::Power => {
                let k = order as f64;
                let p = |e: f64| if e == 0.0 { 1.0 } else { libm::pow(r, e) };
                (p(k), k * p(k - 1.0), k * (k - 1.0) * if k >= 2.0 { p(k - 2.0) } else { 0.0 })
            }
        }
    }
}

fn mode_shape(domain: &CanonicalDomain, kind: ProblemKind, label: ModeLabel) -> Result<(f64, Shape)> {
    let invalid = || Error::InvalidArgument(format!("label {label} is not a mode of {kind} on {domain:?}"));
    match (*domain, label) {
        (CanonicalDomain::Square { corner, side, partition }, _) => {
            use SquarePartition as P;
            let effective = match (kind, partition) {
                (ProblemKind::Dirichlet, _) | (ProblemKind::NeumannDirichlet, P::Dirichlet) => P::Dirichlet,
                (ProblemKind::Neumann, _) | (ProblemKind::NeumannDirichlet, P::Neumann) => P::Neumann,
                (ProblemKind::NeumannDirichlet, p) => p,
                (ProblemKind::SteklovDirichlet, P::Mixed) => {
                    let ModeLabel::SteklovSquare { k, branch } = label else {
                        return Err(invalid());
                    };
                    if k == 0 {
                        return Err(invalid());
                    }
                    let w = PI * k as f64;
                    let x = match branch {
                        SteklovBranch::Tanh => Factor::CoshCentered(w),
                        SteklovBranch::Coth => Factor::SinhCentered(w),
                    };
                    let shape = Shape::Separable { corner, side, x, y: Factor::Sin(w) };
                    return Ok((square_steklov_value(side, k, branch), shape));
                }
                _ => return Err(domain.unsupported(kind)),
            };
            let (x, y, key) = match (effective, label) {
                (P::Mixed, ModeLabel::Grid { m, n }) if n >= 1 => {
                    (Factor::Cos(PI * m as f64), Factor::Sin(PI * n as f64), (m * m + n * n) as f64)
                }
                (P::Dirichlet, ModeLabel::Grid { m, n }) if m >= 1 && n >= 1 => {
                    (Factor::Sin(PI * m as f64), Factor::Sin(PI * n as f64), (m * m + n * n) as f64)
                }
                (P::Neumann, ModeLabel::Grid { m, n }) => {
                    (Factor::Cos(PI * m as f64), Factor::Cos(PI * n as f64), (m * m + n * n) as f64)
                }
                (P::OneDirichletSide, ModeLabel::HalfShiftedGrid { m, n }) => {
                    let nh = n as f64 + 0.5;
                    (Factor::Cos(PI * m as f64), Factor::Sin(PI * nh), (m * m) as f64 + nh * nh)
                }
                _ => return Err(invalid()),
            };
            Ok((PI * PI * key / (side * side), Shape::Separable { corner, side, x, y }))
        }
        (CanonicalDomain::HalfDisk { radius }, ModeLabel::Bessel { l, m }) if l >= 1 && m >= 1 => {
            let z = match kind {
                ProblemKind::NeumannDirichlet => bessel_prime_zeros(l, m)?,
                ProblemKind::RobinDirichlet { alpha } => robin_zeros(l, m, alpha * radius)?,
                ProblemKind::Dirichlet => bessel_zeros(l, m)?,
                _ => return Err(invalid()),
            }[m as usize - 1];
            let kappa = z / radius;
            Ok((kappa * kappa, Shape::Polar { radius, order: l, radial: Radial::Bessel { kappa } }))
        }
        (CanonicalDomain::HalfDisk { radius }, ModeLabel::Harmonic { k })
            if k >= 1 && kind == ProblemKind::SteklovDirichlet =>
        {
            Ok((k as f64 / radius, Shape::Polar { radius, order: k, radial: Radial::Power }))
        }
        (CanonicalDomain::Disk { .. } | CanonicalDomain::HyperbolicDisk { .. }, ModeLabel::Angular { m, .. })
            if kind == ProblemKind::SteklovDirichlet =>
        {
            // Values only; function evaluation on disks is not provided.
            let unit = match *domain {
                CanonicalDomain::Disk { radius } => 1.0 / radius,
                CanonicalDomain::HyperbolicDisk { radius } => 1.0 / sinh(radius),
                _ => unreachable!(),
            };
            Err(Error::Unsupported(format!(
                "eigenfunction evaluation on {domain:?} (eigenvalue {})",
                m as f64 * unit
            )))
        }
        _ => Err(invalid()),
    }
}

/// A closed-form eigenfunction with analytic value, gradient and Laplacian.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormEigenfunction {
    domain: CanonicalDomain,
    kind: ProblemKind,
    label: ModeLabel,
    eigenvalue: f64,
    shape: Shape,
    unit_scale: f64,
    scale: f64,
}

/// The eigenfunction of `kind` on `domain` with mode `label`, scaled to unit `L^2` norm.
pub fn eigenfunction(kind: ProblemKind, domain: &CanonicalDomain, label: ModeLabel) -> Result<ClosedFormEigenfunction> {
    let (eigenvalue, shape) = mode_shape(domain, kind, label)?;
    let unit_scale = 1.0 / sqrt(shape.square_norm());
    Ok(ClosedFormEigenfunction {
        domain: *domain,
        kind,
        label,
        eigenvalue,
        shape,
        unit_scale,
        scale: unit_scale,
    })
}

impl ClosedFormEigenfunction {
    pub fn domain(&self) -> &CanonicalDomain {
        &self.domain
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    pub fn label(&self) -> ModeLabel {
        self.label
    }

    pub fn eigenvalue(&self) -> f64 {
        self.eigenvalue
    }

    /// Multiplies the function by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        ClosedFormEigenfunction {
            scale: self.scale * factor,
            ..self.clone()
        }
    }

    /// The same mode with unit `L^2` norm.
    pub fn normalized(&self) -> Self {
        ClosedFormEigenfunction {
            scale: self.unit_scale,
            ..self.clone()
        }
    }

    /// Analytic `L^2(Omega)` norm.
    pub fn l2_norm(&self) -> f64 {
        libm::fabs(self.scale / self.unit_scale)
    }

    /// `L^2(Omega)` norm by tensor Gauss quadrature: 32x32 on squares, 64x64
    /// in polar coordinates on the half disk.
    pub fn quadrature_l2_norm(&self) -> f64 {
        let sum = match self.shape {
            Shape::Separable { corner, side, .. } => {
                let g = GaussLegendre::new(32);
                let mut s = 0.0;
                for (x, wx) in g.on_interval(corner.x, corner.x + side) {
                    for (y, wy) in g.on_interval(corner.y, corner.y + side) {
                        let v = self.value(Point2::new(x, y));
                        s += wx * wy * v * v;
                    }
                }
                s
            }
            Shape::Polar { radius, .. } => {
                let g = GaussLegendre::new(64);
                let mut s = 0.0;
                for (r, wr) in g.on_interval(0.0, radius) {
                    for (t, wt) in g.on_interval(0.0, PI) {
                        let v = self.value(Point2::new(r * cos(t), r * sin(t)));
                        s += wr * wt * r * v * v;
                    }
                }
                s
            }
        };
        sqrt(sum)
    }

    pub fn value(&self, p: Point2) -> f64 {
        match self.shape {
            Shape::Separable { corner, side, x, y } => {
                let (u, w) = ((p.x - corner.x) / side, (p.y - corner.y) / side);
                self.scale * x.eval(u).0 * y.eval(w).0
            }
            Shape::Polar { order, radial, .. } => {
                let r = p.norm();
                if r == 0.0 {
                    return 0.0;
                }
                let theta = atan2(p.y, p.x);
                self.scale * Shape::radial_eval(order, radial, r).0 * sin(order as f64 * theta)
            }
        }
    }

    pub fn gradient(&self, p: Point2) -> Point2 {
        match self.shape {
            Shape::Separable { corner, side, x, y } => {
                let (u, w) = ((p.x - corner.x) / side, (p.y - corner.y) / side);
                let (fx, dfx, _) = x.eval(u);
                let (fy, dfy, _) = y.eval(w);
                Point2::new(dfx * fy, fx * dfy) * (self.scale / side)
            }
            Shape::Polar { order, radial, .. } => {
                let r = p.norm();
                if r == 0.0 {
                    // Only l = 1 modes have a nonzero gradient at the origin.
                    let slope = match (order, radial) {
                        (1, Radial::Bessel { kappa }) => 0.5 * kappa,
                        (1, Radial::Power) => 1.0,
                        _ => 0.0,
                    };
                    return Point2::new(0.0, self.scale * slope);
                }
                let theta = atan2(p.y, p.x);
                let l = order as f64;
                let (f, df, _) = Shape::radial_eval(order, radial, r);
                let (s, c) = (sin(l * theta), cos(l * theta));
                let e_r = Point2::new(cos(theta), sin(theta));
                let e_t = Point2::new(-sin(theta), cos(theta));
                (e_r * (df * s) + e_t * (f * l * c / r)) * self.scale
            }
        }
    }

    pub fn laplacian(&self, p: Point2) -> f64 {
        match self.shape {
            Shape::Separable { corner, side, x, y } => {
                let (u, w) = ((p.x - corner.x) / side, (p.y - corner.y) / side);
                let (fx, _, ddx) = x.eval(u);
                let (fy, _, ddy) = y.eval(w);
                self.scale * (ddx * fy + fx * ddy) / (side * side)
            }
            Shape::Polar { order, radial, .. } => {
                let r = p.norm();
                if r == 0.0 {
                    return 0.0;
                }
                let theta = atan2(p.y, p.x);
                let l = order as f64;
                let (f, df, ddf) = Shape::radial_eval(order, radial, r);
                self.scale * (ddf + df / r - l * l * f / (r * r)) * sin(l * theta)
            }
        }
    }

    /// `grad v . n`.
    pub fn normal_derivative(&self, p: Point2, normal: Point2) -> f64 {
        self.gradient(p).dot(normal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{bessel_prime_zero, robin_zero};
    use alloc::vec;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn square_nd_values() {
        let pi2 = PI * PI;
        assert_eq!(square_nd_spectrum(0).len(), 0);
        let one = square_nd_spectrum(1);
        assert_eq!(one.entries[0].label, ModeLabel::Grid { m: 0, n: 1 });
        assert!(close(one.entries[0].value, pi2, 1e-15));
        let five = square_nd_spectrum(5).values();
        let want = [pi2, 2.0 * pi2, 4.0 * pi2, 5.0 * pi2, 5.0 * pi2];
        for (g, w) in five.iter().zip(want) {
            assert!(close(*g, w, 1e-14));
        }
    }

    #[test]
    fn square_nd_matches_brute_force_enumeration() {
        let mut brute: Vec<u32> = (0..=10).flat_map(|m| (1..=10).map(move |n| m * m + n * n)).collect();
        brute.sort();
        let got = square_nd_spectrum(40);
        for (e, key) in got.entries.iter().zip(&brute) {
            assert!(close(e.value, PI * PI * *key as f64, 1e-14));
        }
        assert!(got.is_sorted());
    }

    #[test]
    fn ties_are_ordered_by_label() {
        let s = square_nd_spectrum(5);
        assert_eq!(s.entries[3].label, ModeLabel::Grid { m: 1, n: 2 });
        assert_eq!(s.entries[4].label, ModeLabel::Grid { m: 2, n: 1 });
    }

    #[test]
    fn square_sd_values_and_ordering() {
        let s = square_sd_spectrum(6);
        assert!(close(s.entries[0].value, 2.881319039955029, 1e-14));
        assert!(close(s.entries[1].value, 3.4253771499192953, 1e-14));
        for n in 2..=20 {
            let n = n as f64;
            let prev = PI * (n - 1.0) / tanh(PI * (n - 1.0) / 2.0);
            assert!(prev < PI * n * tanh(PI * n / 2.0));
        }
        assert!(s.is_sorted());
    }

    #[test]
    fn one_dirichlet_side() {
        let pi2 = PI * PI;
        let s = square_one_dirichlet_side_spectrum(3).values();
        let want = [pi2 / 4.0, 5.0 * pi2 / 4.0, 9.0 * pi2 / 4.0];
        for (g, w) in s.iter().zip(want) {
            assert!(close(*g, w, 1e-14));
        }
        assert!(square_one_dirichlet_side_spectrum(0).is_empty());
    }

    #[test]
    fn half_disk_spectra() {
        let sd = halfdisk_sd_spectrum(3).values();
        assert_eq!(sd, vec![1.0, 2.0, 3.0]);
        let nd = halfdisk_nd_spectrum(12).unwrap();
        let j11 = bessel_prime_zero(1, 1).unwrap().value;
        assert!(close(nd.entries[0].value, j11 * j11, 1e-15));
        assert!((nd.entries[0].value - 3.3900).abs() < 1e-4);
        assert_eq!(nd.entries[1].label, ModeLabel::Bessel { l: 2, m: 1 });
        assert!(nd.is_sorted());
        // brute force over a generous index box
        let mut brute = Vec::new();
        for l in 1..=12 {
            for z in bessel_prime_zeros(l, 6).unwrap() {
                brute.push(z * z);
            }
        }
        brute.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (e, b) in nd.entries.iter().zip(&brute) {
            assert!(close(e.value, *b, 1e-14));
        }
    }

    #[test]
    fn robin_half_disk() {
        let zero = robin_halfdisk_spectrum(0.0, 8).unwrap().values();
        assert_eq!(zero, halfdisk_nd_spectrum(8).unwrap().values());
        let one = robin_halfdisk_spectrum(1.0, 5).unwrap();
        let z = robin_zero(1, 1, 1.0).unwrap().value;
        assert!(close(one.entries[0].value, z * z, 1e-15));
        let ten = robin_halfdisk_spectrum(10.0, 5).unwrap();
        for k in 1..=5 {
            assert!(zero[k - 1] <= one.value(k).unwrap());
            assert!(one.value(k).unwrap() <= ten.value(k).unwrap());
        }
    }

    #[test]
    fn hyperbolic_disk() {
        let s = hyperbolic_disk_steklov_spectrum(1.0, 5).unwrap();
        assert_eq!(s.value(1), Some(0.0));
        assert!(close(s.value(2).unwrap(), 0.8509181282393216, 1e-15));
        assert_eq!(s.value(2), s.value(3));
        assert!(close(s.value(4).unwrap(), 2.0 / sinh(1.0), 1e-15));
        let s2 = hyperbolic_disk_steklov_spectrum(2.0, 3).unwrap();
        assert!(close(s2.value(2).unwrap() / s.value(2).unwrap(), sinh(1.0) / sinh(2.0), 1e-14));
        assert!(hyperbolic_disk_steklov_spectrum(0.0, 3).is_err());
    }

    /// `tanh(r/2)^m sin(m theta)` is harmonic for the metric `dr^2 + sinh(r)^2 dtheta^2`
    /// and its Steklov quotient at `r = R` is `m / sinh(R)`.
    #[test]
    fn hyperbolic_eigenfunctions_are_harmonic() {
        for m in 1..=4 {
            let mf = m as f64;
            let f = |r: f64| libm::pow(tanh(0.5 * r), mf);
            let h = 1e-4;
            for r in [0.3, 1.0, 2.5] {
                let (fm, f0, fp) = (f(r - h), f(r), f(r + h));
                let d1 = (fp - fm) / (2.0 * h);
                let d2 = (fp - 2.0 * f0 + fm) / (h * h);
                // Laplace-Beltrami in geodesic polar coordinates.
                let lap = d2 + d1 * libm::cosh(r) / sinh(r) - mf * mf * f0 / (sinh(r) * sinh(r));
                assert!(lap.abs() < 1e-6 * (d2.abs() + f0), "m={m} r={r} lap={lap}");
                let sigma = d1 / f0;
                assert!(close(sigma, mf / sinh(r), 1e-6));
            }
        }
    }

    #[test]
    fn disk_steklov() {
        let s = disk_steklov_spectrum(2.0, 5).unwrap().values();
        assert_eq!(s, vec![0.0, 0.5, 0.5, 1.0, 1.0]);
    }

    #[test]
    fn labels_regenerate_values() {
        let cases: [(CanonicalDomain, ProblemKind); 6] = [
            (CanonicalDomain::unit_square(SquarePartition::Mixed), ProblemKind::NeumannDirichlet),
            (CanonicalDomain::unit_square(SquarePartition::Mixed), ProblemKind::SteklovDirichlet),
            (CanonicalDomain::unit_square(SquarePartition::OneDirichletSide), ProblemKind::NeumannDirichlet),
            (CanonicalDomain::unit_square(SquarePartition::Mixed), ProblemKind::Dirichlet),
            (CanonicalDomain::HalfDisk { radius: 1.0 }, ProblemKind::NeumannDirichlet),
            (CanonicalDomain::HalfDisk { radius: 1.0 }, ProblemKind::RobinDirichlet { alpha: 2.0 }),
        ];
        for (domain, kind) in cases {
            for e in domain.spectrum(kind, 10).unwrap().entries {
                let v = domain.eigenvalue(kind, e.label).unwrap();
                assert!(close(v, e.value, 1e-12), "{kind} {}: {v} vs {}", e.label, e.value);
            }
        }
    }

    #[test]
    fn min_max_sandwich_on_square() {
        let n = square_neumann_spectrum(10);
        let nd = square_nd_spectrum(10);
        let d = square_dirichlet_spectrum(10);
        for k in 1..=10 {
            assert!(n.value(k).unwrap() <= nd.value(k).unwrap());
            assert!(nd.value(k).unwrap() <= d.value(k).unwrap());
        }
    }

    #[test]
    fn recognition() {
        use BoundaryCondition::*;
        let sq = DomainSpec::unit_square([Dirichlet, Neumann, Dirichlet, Neumann]);
        assert_eq!(
            CanonicalDomain::recognize(&sq),
            Some(CanonicalDomain::unit_square(SquarePartition::Mixed))
        );
        let one = DomainSpec::unit_square([Dirichlet, Neumann, Neumann, Neumann]);
        assert_eq!(
            CanonicalDomain::recognize(&one),
            Some(CanonicalDomain::unit_square(SquarePartition::OneDirichletSide))
        );
        let odd = DomainSpec::unit_square([Neumann, Dirichlet, Neumann, Neumann]);
        assert_eq!(CanonicalDomain::recognize(&odd), None);
        // rotated vertex list, shifted square
        let v = vec![Point2::new(3.0, 2.0), Point2::new(3.0, 3.0), Point2::new(2.0, 3.0), Point2::new(2.0, 2.0)];
        let shifted = DomainSpec::polygon(v, vec![Neumann, Dirichlet, Neumann, Dirichlet]).unwrap();
        assert_eq!(
            CanonicalDomain::recognize(&shifted),
            Some(CanonicalDomain::Square {
                corner: Point2::new(2.0, 2.0),
                side: 1.0,
                partition: SquarePartition::Mixed
            })
        );
        let hd = DomainSpec::half_disk(1.0, Steklov, Dirichlet).unwrap();
        assert_eq!(CanonicalDomain::recognize(&hd), Some(CanonicalDomain::HalfDisk { radius: 1.0 }));
        for c in [
            CanonicalDomain::unit_square(SquarePartition::Mixed),
            CanonicalDomain::unit_square(SquarePartition::OneDirichletSide),
            CanonicalDomain::HalfDisk { radius: 2.0 },
            CanonicalDomain::Disk { radius: 1.0 },
        ] {
            assert_eq!(CanonicalDomain::recognize(&c.to_domain(Neumann)), Some(c));
        }
    }

    fn sample_points(domain: &CanonicalDomain, count: usize) -> Vec<Point2> {
        // deterministic quasi-random interior points
        (1..=count)
            .map(|i| {
                let a = (i as f64 * 0.618_033_988_749_894_9) % 1.0;
                let b = (i as f64 * 0.754_877_666_246_692_7) % 1.0;
                match *domain {
                    CanonicalDomain::Square { corner, side, .. } => corner + Point2::new(a, b) * side,
                    CanonicalDomain::HalfDisk { radius } => {
                        let (r, t) = (radius * (0.02 + 0.96 * a), PI * (0.01 + 0.98 * b));
                        Point2::new(r * cos(t), r * sin(t))
                    }
                    _ => unreachable!(),
                }
            })
            .collect()
    }

    fn all_modes() -> Vec<ClosedFormEigenfunction> {
        let mut out = Vec::new();
        let mixed = CanonicalDomain::unit_square(SquarePartition::Mixed);
        let one = CanonicalDomain::unit_square(SquarePartition::OneDirichletSide);
        let hd = CanonicalDomain::HalfDisk { radius: 1.0 };
        for m in 0..3 {
            for n in 1..3 {
                out.push(eigenfunction(ProblemKind::NeumannDirichlet, &mixed, ModeLabel::Grid { m, n }).unwrap());
                out.push(eigenfunction(ProblemKind::Dirichlet, &mixed, ModeLabel::Grid { m: m + 1, n }).unwrap());
                out.push(eigenfunction(ProblemKind::Neumann, &mixed, ModeLabel::Grid { m, n: n - 1 }).unwrap());
            }
            for n in 0..3 {
                out.push(
                    eigenfunction(ProblemKind::NeumannDirichlet, &one, ModeLabel::HalfShiftedGrid { m, n }).unwrap(),
                );
            }
        }
        for l in 1..4 {
            for m in 1..3 {
                out.push(eigenfunction(ProblemKind::NeumannDirichlet, &hd, ModeLabel::Bessel { l, m }).unwrap());
                out.push(
                    eigenfunction(ProblemKind::RobinDirichlet { alpha: 1.5 }, &hd, ModeLabel::Bessel { l, m })
                        .unwrap(),
                );
            }
        }
        out
    }

    #[test]
    fn eigenfunctions_solve_the_pde() {
        for v in all_modes() {
            let mu = v.eigenvalue();
            for p in sample_points(v.domain(), 50) {
                let res = v.laplacian(p) + mu * v.value(p);
                assert!(res.abs() < 1e-8 * (1.0 + mu), "{} {}: residual {res}", v.kind(), v.label());
            }
        }
    }

    #[test]
    fn steklov_eigenfunctions_are_harmonic() {
        let mixed = CanonicalDomain::unit_square(SquarePartition::Mixed);
        for k in 1..4 {
            for branch in [SteklovBranch::Tanh, SteklovBranch::Coth] {
                let u = eigenfunction(ProblemKind::SteklovDirichlet, &mixed, ModeLabel::SteklovSquare { k, branch })
                    .unwrap();
                for p in sample_points(&mixed, 20) {
                    assert!(u.laplacian(p).abs() < 1e-8);
                }
                // u_n = sigma u on both vertical sides
                for y in [0.2, 0.5, 0.9] {
                    for (x, nx) in [(0.0, -1.0), (1.0, 1.0)] {
                        let p = Point2::new(x, y);
                        let un = u.normal_derivative(p, Point2::new(nx, 0.0));
                        assert!((un - u.eigenvalue() * u.value(p)).abs() < 1e-10 * (1.0 + un.abs()));
                    }
                }
            }
        }
        let hd = CanonicalDomain::HalfDisk { radius: 1.0 };
        for k in 1..4 {
            let u = eigenfunction(ProblemKind::SteklovDirichlet, &hd, ModeLabel::Harmonic { k }).unwrap();
            for p in sample_points(&hd, 20) {
                assert!(u.laplacian(p).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn eigenfunctions_have_unit_norm() {
        for v in all_modes() {
            assert!((v.quadrature_l2_norm() - 1.0).abs() < 1e-8, "{} {}", v.kind(), v.label());
            assert!((v.l2_norm() - 1.0).abs() < 1e-15);
        }
        let hd = CanonicalDomain::HalfDisk { radius: 1.0 };
        let u = eigenfunction(ProblemKind::SteklovDirichlet, &hd, ModeLabel::Harmonic { k: 2 }).unwrap();
        assert!((u.quadrature_l2_norm() - 1.0).abs() < 1e-8);
        let scaled = u.scaled(2.0);
        assert!((scaled.quadrature_l2_norm() - 2.0).abs() < 1e-8);
        assert_eq!(scaled.normalized(), u);
    }

    #[test]
    fn amplitude_two_is_unit_norm_except_at_m_zero() {
        let one = CanonicalDomain::unit_square(SquarePartition::OneDirichletSide);
        let v = eigenfunction(ProblemKind::NeumannDirichlet, &one, ModeLabel::HalfShiftedGrid { m: 1, n: 0 }).unwrap();
        assert!((v.value(Point2::new(0.0, 1.0)).abs() - 2.0).abs() < 1e-14);
        let v0 = eigenfunction(ProblemKind::NeumannDirichlet, &one, ModeLabel::HalfShiftedGrid { m: 0, n: 0 }).unwrap();
        assert!((v0.value(Point2::new(0.3, 1.0)).abs() - libm::sqrt(2.0)).abs() < 1e-14);
    }

    #[test]
    fn boundary_conditions_hold() {
        let mixed = CanonicalDomain::unit_square(SquarePartition::Mixed);
        let v = eigenfunction(ProblemKind::NeumannDirichlet, &mixed, ModeLabel::Grid { m: 1, n: 1 }).unwrap();
        assert!(v.value(Point2::new(0.3, 0.0)).abs() < 1e-15);
        assert!(v.normal_derivative(Point2::new(0.0, 0.4), Point2::new(-1.0, 0.0)).abs() < 1e-14);
        let hd = CanonicalDomain::HalfDisk { radius: 1.0 };
        let w = eigenfunction(ProblemKind::NeumannDirichlet, &hd, ModeLabel::Bessel { l: 1, m: 1 }).unwrap();
        for t in [0.3, 1.0, 2.0] {
            let p = Point2::new(cos(t), sin(t));
            assert!(w.normal_derivative(p, p).abs() < 1e-10);
        }
        // Robin condition w_n + alpha w = 0 on the arc
        let alpha = 1.5;
        let r = eigenfunction(ProblemKind::RobinDirichlet { alpha }, &hd, ModeLabel::Bessel { l: 2, m: 1 }).unwrap();
        for t in [0.3, 1.0, 2.0] {
            let p = Point2::new(cos(t), sin(t));
            assert!((r.normal_derivative(p, p) + alpha * r.value(p)).abs() < 1e-10);
        }
    }

    #[test]
    fn invalid_labels() {
        let mixed = CanonicalDomain::unit_square(SquarePartition::Mixed);
        assert!(eigenfunction(ProblemKind::NeumannDirichlet, &mixed, ModeLabel::Grid { m: 1, n: 0 }).is_err());
        assert!(eigenfunction(ProblemKind::NeumannDirichlet, &mixed, ModeLabel::Bessel { l: 1, m: 1 }).is_err());
        let hd = CanonicalDomain::HalfDisk { radius: 1.0 };
        assert!(eigenfunction(ProblemKind::SteklovDirichlet, &hd, ModeLabel::Harmonic { k: 0 }).is_err());
        assert!(CanonicalDomain::unit_square(SquarePartition::Neumann)
            .spectrum(ProblemKind::SteklovDirichlet, 3)
            .is_err());
    }

    #[test]
    fn scaled_domains_scale_eigenvalues() {
        let s = 1.7;
        let mixed = CanonicalDomain::unit_square(SquarePartition::Mixed);
        let a = mixed.spectrum(ProblemKind::NeumannDirichlet, 6).unwrap().values();
        let b = mixed.scaled(s).spectrum(ProblemKind::NeumannDirichlet, 6).unwrap().values();
        for (x, y) in a.iter().zip(&b) {
            assert!(close(*y, x / (s * s), 1e-14));
        }
        let hd = CanonicalDomain::HalfDisk { radius: 1.0 };
        let a = hd.spectrum(ProblemKind::SteklovDirichlet, 4).unwrap().values();
        let b = hd.scaled(s).spectrum(ProblemKind::SteklovDirichlet, 4).unwrap().values();
        for (x, y) in a.iter().zip(&b) {
            assert!(close(*y, x / s, 1e-14));
        }
    }
}
