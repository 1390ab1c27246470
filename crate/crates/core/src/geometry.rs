//! Planar domains with a boundary partition, and the geometric quantities the
//! eigenvalue bounds and polygon identities are stated in.
//!
//! Boundary segments are numbered per domain kind:
//!
//! - polygon: segment `i` is the edge from vertex `i` to vertex `i + 1 (mod N)`;
//! - half disk `{|x| < R, y > 0}`: segment 0 is the arc, segment 1 the diameter;
//! - disk and hyperbolic disk (both centred at the origin): segment 0 is the circle.
//!
//! The part `F` of the boundary is the union of the segments whose condition is
//! not [`BoundaryCondition::Dirichlet`].

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};
use core::str::FromStr;

use libm::{atan2, cos, sin, sqrt, tan, tanh};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Rotation by -90 degrees; the outward normal direction of an edge of a
    /// positively oriented polygon.
    pub fn perp_right(self) -> Point2 {
        Point2::new(self.y, -self.x)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Point2 {
    fn add_assign(&mut self, rhs: Point2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryCondition {
    Neumann,
    Dirichlet,
    Steklov,
    Robin,
}

impl BoundaryCondition {
    pub const ALL: [BoundaryCondition; 4] = [
        BoundaryCondition::Neumann,
        BoundaryCondition::Dirichlet,
        BoundaryCondition::Steklov,
        BoundaryCondition::Robin,
    ];

    /// Whether the segment belongs to `F`.
    pub fn is_free(self) -> bool {
        self != BoundaryCondition::Dirichlet
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryCondition::Neumann => "neumann",
            BoundaryCondition::Dirichlet => "dirichlet",
            BoundaryCondition::Steklov => "steklov",
            BoundaryCondition::Robin => "robin",
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundaryCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundaryCondition::ALL
            .into_iter()
            .find(|bc| bc.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown boundary condition `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DomainKind {
    Polygon { vertices: Vec<Point2> },
    HalfDisk { radius: f64 },
    Disk { radius: f64 },
    /// Geodesic disk of radius `radius` in the hyperbolic plane (curvature -1).
    HyperbolicDisk { radius: f64 },
}

/// A boundary segment as a geometric curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Segment {
    Line { start: Point2, end: Point2 },
    /// Counter-clockwise arc of the circle of radius `radius` about `center`.
    Arc {
        center: Point2,
        radius: f64,
        start_angle: f64,
        end_angle: f64,
    },
}

impl Segment {
    pub fn length(&self) -> f64 {
        match *self {
            Segment::Line { start, end } => start.distance(end),
            Segment::Arc {
                radius,
                start_angle,
                end_angle,
                ..
            } => radius * (end_angle - start_angle),
        }
    }

    /// Point at parameter `t` in `[0, 1]`.
    pub fn point(&self, t: f64) -> Point2 {
        match *self {
            Segment::Line { start, end } => start + (end - start) * t,
            Segment::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => {
                let theta = start_angle + t * (end_angle - start_angle);
                center + Point2::new(cos(theta), sin(theta)) * radius
            }
        }
    }

    /// Outward unit normal at parameter `t`.
    pub fn normal(&self, t: f64) -> Point2 {
        match *self {
            Segment::Line { start, end } => {
                let d = end - start;
                d.perp_right() * (1.0 / d.norm())
            }
            Segment::Arc {
                start_angle,
                end_angle,
                ..
            } => {
                let theta = start_angle + t * (end_angle - start_angle);
                Point2::new(cos(theta), sin(theta))
            }
        }
    }

    pub fn is_straight(&self) -> bool {
        matches!(self, Segment::Line { .. })
    }
}

/// A planar domain together with one boundary condition per boundary segment.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainSpec {
    kind: DomainKind,
    conditions: Vec<BoundaryCondition>,
}

impl DomainSpec {
    pub fn new(kind: DomainKind, conditions: Vec<BoundaryCondition>) -> Result<Self> {
        let expected = match &kind {
            DomainKind::Polygon { vertices } => {
                validate_polygon(vertices)?;
                vertices.len()
            }
            DomainKind::HalfDisk { radius } => {
                check_radius(*radius)?;
                2
            }
            DomainKind::Disk { radius } | DomainKind::HyperbolicDisk { radius } => {
                check_radius(*radius)?;
                1
            }
        };
        if conditions.len() != expected {
            return Err(Error::InvalidDomain(format!(
                "expected {expected} boundary conditions, got {}",
                conditions.len()
            )));
        }
        Ok(DomainSpec { kind, conditions })
    }

    pub fn polygon(vertices: Vec<Point2>, conditions: Vec<BoundaryCondition>) -> Result<Self> {
        DomainSpec::new(DomainKind::Polygon { vertices }, conditions)
    }

    pub fn half_disk(radius: f64, arc: BoundaryCondition, diameter: BoundaryCondition) -> Result<Self> {
        DomainSpec::new(DomainKind::HalfDisk { radius }, vec![arc, diameter])
    }

    pub fn disk(radius: f64, condition: BoundaryCondition) -> Result<Self> {
        DomainSpec::new(DomainKind::Disk { radius }, vec![condition])
    }

    pub fn hyperbolic_disk(radius: f64, condition: BoundaryCondition) -> Result<Self> {
        DomainSpec::new(DomainKind::HyperbolicDisk { radius }, vec![condition])
    }

    /// Unit square `[0,1]^2` with edges ordered bottom, right, top, left.
    pub fn unit_square(conditions: [BoundaryCondition; 4]) -> Self {
        let vertices = vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ];
        DomainSpec {
            kind: DomainKind::Polygon { vertices },
            conditions: conditions.to_vec(),
        }
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    pub fn conditions(&self) -> &[BoundaryCondition] {
        &self.conditions
    }

    pub fn condition(&self, segment: usize) -> BoundaryCondition {
        self.conditions[segment]
    }

    pub fn segment_count(&self) -> usize {
        self.conditions.len()
    }

    pub fn vertices(&self) -> Option<&[Point2]> {
        match &self.kind {
            DomainKind::Polygon { vertices } => Some(vertices),
            _ => None,
        }
    }

    pub fn is_polygon(&self) -> bool {
        matches!(self.kind, DomainKind::Polygon { .. })
    }

    pub fn is_euclidean(&self) -> bool {
        !matches!(self.kind, DomainKind::HyperbolicDisk { .. })
    }

    pub fn has_free_boundary(&self) -> bool {
        self.conditions.iter().any(|c| c.is_free())
    }

    pub fn has_dirichlet_boundary(&self) -> bool {
        self.conditions.iter().any(|c| !c.is_free())
    }

    /// Same domain with every segment carrying `condition`.
    pub fn with_uniform_condition(&self, condition: BoundaryCondition) -> Self {
        DomainSpec {
            kind: self.kind.clone(),
            conditions: vec![condition; self.conditions.len()],
        }
    }

    /// Same geometry with the given conditions.
    pub fn with_conditions(&self, conditions: Vec<BoundaryCondition>) -> Result<Self> {
        DomainSpec::new(self.kind.clone(), conditions)
    }

    /// Boundary segments in counter-clockwise order. Empty for the hyperbolic
    /// disk, which has no Euclidean embedding here.
    pub fn segments(&self) -> Vec<Segment> {
        match &self.kind {
            DomainKind::Polygon { vertices } => {
                let n = vertices.len();
                (0..n)
                    .map(|i| Segment::Line {
                        start: vertices[i],
                        end: vertices[(i + 1) % n],
                    })
                    .collect()
            }
            DomainKind::HalfDisk { radius } => vec![
                Segment::Arc {
                    center: Point2::ORIGIN,
                    radius: *radius,
                    start_angle: 0.0,
                    end_angle: PI,
                },
                Segment::Line {
                    start: Point2::new(-radius, 0.0),
                    end: Point2::new(*radius, 0.0),
                },
            ],
            DomainKind::Disk { radius } => vec![Segment::Arc {
                center: Point2::ORIGIN,
                radius: *radius,
                start_angle: 0.0,
                end_angle: 2.0 * PI,
            }],
            DomainKind::HyperbolicDisk { .. } => Vec::new(),
        }
    }

    /// Length of the boundary; the geodesic circumference for the hyperbolic disk.
    pub fn perimeter(&self) -> f64 {
        match &self.kind {
            DomainKind::HyperbolicDisk { radius } => 2.0 * PI * libm::sinh(*radius),
            _ => self.segments().iter().map(Segment::length).sum(),
        }
    }

    /// Length of `F`.
    pub fn free_length(&self) -> f64 {
        match &self.kind {
            DomainKind::HyperbolicDisk { .. } if self.conditions[0].is_free() => self.perimeter(),
            DomainKind::HyperbolicDisk { .. } => 0.0,
            _ => self
                .segments()
                .iter()
                .zip(&self.conditions)
                .filter(|(_, c)| c.is_free())
                .map(|(s, _)| s.length())
                .sum(),
        }
    }

    pub fn area(&self) -> f64 {
        match &self.kind {
            DomainKind::Polygon { vertices } => signed_area(vertices),
            DomainKind::HalfDisk { radius } => 0.5 * PI * radius * radius,
            DomainKind::Disk { radius } => PI * radius * radius,
            DomainKind::HyperbolicDisk { radius } => 2.0 * PI * (libm::cosh(*radius) - 1.0),
        }
    }

    pub fn diameter(&self) -> f64 {
        match &self.kind {
            DomainKind::Polygon { vertices } => {
                let mut d: f64 = 0.0;
                for (i, a) in vertices.iter().enumerate() {
                    for b in &vertices[i + 1..] {
                        d = d.max(a.distance(*b));
                    }
                }
                d
            }
            DomainKind::HalfDisk { radius }
            | DomainKind::Disk { radius }
            | DomainKind::HyperbolicDisk { radius } => 2.0 * radius,
        }
    }

    /// Translate a polygon by `shift`. Curved domains are fixed at the origin.
    pub fn translated(&self, shift: Point2) -> Result<Self> {
        match &self.kind {
            DomainKind::Polygon { vertices } => Ok(DomainSpec {
                kind: DomainKind::Polygon {
                    vertices: vertices.iter().map(|v| *v + shift).collect(),
                },
                conditions: self.conditions.clone(),
            }),
            _ => Err(Error::Unsupported("only polygons can be translated".into())),
        }
    }

    /// Dilation about the origin by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidArgument(format!("scale factor {factor} must be positive")));
        }
        let kind = match &self.kind {
            DomainKind::Polygon { vertices } => DomainKind::Polygon {
                vertices: vertices.iter().map(|v| *v * factor).collect(),
            },
            DomainKind::HalfDisk { radius } => DomainKind::HalfDisk { radius: radius * factor },
            DomainKind::Disk { radius } => DomainKind::Disk { radius: radius * factor },
            DomainKind::HyperbolicDisk { .. } => {
                return Err(Error::Unsupported("hyperbolic disks are not dilated".into()));
            }
        };
        Ok(DomainSpec {
            kind,
            conditions: self.conditions.clone(),
        })
    }

    /// Area centroid for polygons, the origin for the round domains.
    pub fn default_base_point(&self) -> Point2 {
        match &self.kind {
            DomainKind::Polygon { vertices } => polygon_centroid(vertices),
            _ => Point2::ORIGIN,
        }
    }
}

fn check_radius(radius: f64) -> Result<()> {
    if radius > 0.0 && radius.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidDomain(format!("radius {radius} must be positive and finite")))
    }
}

pub(crate) fn signed_area(vertices: &[Point2]) -> f64 {
    let n = vertices.len();
    0.5 * (0..n)
        .map(|i| vertices[i].cross(vertices[(i + 1) % n]))
        .sum::<f64>()
}

fn polygon_centroid(vertices: &[Point2]) -> Point2 {
    let n = vertices.len();
    let mut c = Point2::ORIGIN;
    let mut a2 = 0.0;
    for i in 0..n {
        let (p, q) = (vertices[i], vertices[(i + 1) % n]);
        let w = p.cross(q);
        a2 += w;
        c += (p + q) * w;
    }
    c * (1.0 / (3.0 * a2))
}

fn validate_polygon(vertices: &[Point2]) -> Result<()> {
    let n = vertices.len();
    if n < 3 {
        return Err(Error::InvalidDomain(format!("polygon needs at least 3 vertices, got {n}")));
    }
    if let Some(i) = vertices.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidDomain(format!("vertex {i} is not finite")));
    }
    for i in 0..n {
        for j in i + 1..n {
            if vertices[i] == vertices[j] {
                return Err(Error::InvalidDomain(format!("vertices {i} and {j} coincide")));
            }
        }
    }
    let edge = |i: usize| (vertices[i], vertices[(i + 1) % n]);
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let (a, b) = edge(i);
            let (c, d) = edge(j);
            let hit = if adjacent {
                // Adjacent edges share one endpoint; they may only overlap if collinear and folding back.
                let (shared, p, q) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                let (u, w) = (p - shared, q - shared);
                u.cross(w) == 0.0 && u.dot(w) > 0.0
            } else {
                segments_intersect(a, b, c, d)
            };
            if hit {
                return Err(Error::InvalidDomain(format!("edges {i} and {j} intersect")));
            }
        }
    }
    if signed_area(vertices) <= 0.0 {
        return Err(Error::InvalidDomain(
            "polygon must be positively (counter-clockwise) oriented".into(),
        ));
    }
    Ok(())
}

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(a: Point2, b: Point2, p: Point2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed-segment intersection test, including touching and collinear overlap.
fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let (d1, d2) = (orient(c, d, a), orient(c, d, b));
    let (d3, d4) = (orient(a, b, c), orient(a, b, d));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

/// `cot_kappa(r)`: `coth(r sqrt(-k))/sqrt(-k)` for `k < 0`, `1/r` for `k = 0`,
/// `cot(r sqrt(k))/sqrt(k)` for `k > 0`.
pub fn cot_kappa(r: f64, kappa: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) || !kappa.is_finite() {
        return Err(Error::OutOfDomain {
            function: "cot_kappa",
            detail: format!("r = {r} must be positive"),
        });
    }
    if kappa < 0.0 {
        let s = sqrt(-kappa);
        Ok(1.0 / (tanh(r * s) * s))
    } else if kappa == 0.0 {
        Ok(1.0 / r)
    } else {
        let s = sqrt(kappa);
        if r * s >= PI {
            return Err(Error::OutOfDomain {
                function: "cot_kappa",
                detail: format!("r sqrt(kappa) = {} must be below pi", r * s),
            });
        }
        Ok(1.0 / (tan(r * s) * s))
    }
}

/// Constants of the Kuttler-Sigillito bound for a domain, its part `F` and a base point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeometricConstants {
    pub base_point: Point2,
    /// Largest distance from the base point to the closure of the domain.
    pub r_max: f64,
    /// Infimum over `F` of `n . (x - p)`; the bound is trivial when this is not positive.
    pub h_min: f64,
    pub c0: f64,
    pub kappa: f64,
}

/// Computes `(r_max, h_min, C0)` for `domain` with respect to `p`.
///
/// Euclidean domains require `kappa == 0`; the hyperbolic disk requires
/// `kappa == -1`, `p` at its centre and `F` equal to the whole circle.
pub fn geometric_constants(domain: &DomainSpec, p: Point2, kappa: f64) -> Result<GeometricConstants> {
    if !p.is_finite() {
        return Err(Error::InvalidArgument("base point must be finite".into()));
    }
    if !domain.has_free_boundary() {
        return Err(Error::EmptyFreeBoundary);
    }
    if let DomainKind::HyperbolicDisk { radius } = *domain.kind() {
        if kappa != -1.0 {
            return Err(Error::Unsupported("the hyperbolic disk has curvature kappa = -1".into()));
        }
        if p != Point2::ORIGIN {
            return Err(Error::Unsupported("hyperbolic disk constants need p at the centre".into()));
        }
        return Ok(GeometricConstants {
            base_point: p,
            r_max: radius,
            h_min: radius,
            c0: 1.0 + radius * cot_kappa(radius, kappa)?,
            kappa,
        });
    }
    if kappa != 0.0 {
        return Err(Error::Unsupported(format!(
            "Euclidean domains need kappa = 0, got {kappa}"
        )));
    }
    let r_max = match domain.kind() {
        DomainKind::Polygon { vertices } => {
            vertices.iter().map(|v| v.distance(p)).fold(0.0, f64::max)
        }
        DomainKind::HalfDisk { radius } => {
            let r = *radius;
            let mut best = p.distance(Point2::new(r, 0.0)).max(p.distance(Point2::new(-r, 0.0)));
            // Farthest point of the full circle is in the direction of -p.
            let far = -p;
            if far.norm() > 0.0 && far.y >= 0.0 {
                best = best.max(p.norm() + r);
            } else if far.norm() == 0.0 {
                best = best.max(r);
            }
            best
        }
        DomainKind::Disk { radius } => radius + p.norm(),
        DomainKind::HyperbolicDisk { .. } => unreachable!(),
    };
    let h_min = domain
        .segments()
        .iter()
        .zip(domain.conditions())
        .filter(|(_, c)| c.is_free())
        .map(|(s, _)| min_support_height(s, p))
        .fold(f64::INFINITY, f64::min);
    Ok(GeometricConstants {
        base_point: p,
        r_max,
        h_min,
        c0: 2.0,
        kappa,
    })
}

/// Minimum of `n . (x - p)` over the closed segment.
fn min_support_height(segment: &Segment, p: Point2) -> f64 {
    match *segment {
        Segment::Line { start, .. } => segment.normal(0.0).dot(start - p),
        Segment::Arc {
            center,
            radius,
            start_angle,
            end_angle,
        } => {
            // n . (x - p) = R - (p - c) . e(theta); minimise by maximising the dot product.
            let q = p - center;
            let dot = |theta: f64| q.x * cos(theta) + q.y * sin(theta);
            let mut best = dot(start_angle).max(dot(end_angle));
            if q.norm() > 0.0 {
                let mut theta = atan2(q.y, q.x);
                while theta < start_angle {
                    theta += 2.0 * PI;
                }
                if theta <= end_angle {
                    best = best.max(q.norm());
                }
            }
            radius - best
        }
    }
}

/// One straight face of a polygon seen from a base point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FaceGeometry {
    pub index: usize,
    pub normal: Point2,
    /// Positive when the base point lies on the interior side of the face's line.
    pub signed_distance: f64,
    pub length: f64,
}

/// Face data of a polygon with respect to `p`.
pub fn faces(domain: &DomainSpec, p: Point2) -> Result<Vec<FaceGeometry>> {
    let vertices = domain.vertices().ok_or(Error::CurvedBoundary)?;
    let n = vertices.len();
    (0..n)
        .map(|i| {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            let d = b - a;
            let length = d.norm();
            if length == 0.0 {
                return Err(Error::DegenerateFace { index: i });
            }
            let normal = d.perp_right() * (1.0 / length);
            Ok(FaceGeometry {
                index: i,
                normal,
                signed_distance: normal.dot(a - p),
                length,
            })
        })
        .collect()
}

/// Signed distance from `p` to the line through face `face`.
///
/// For every `x` on the face, `n . (x - p)` equals this value.
pub fn signed_distance(domain: &DomainSpec, face: usize, p: Point2) -> Result<f64> {
    let vertices = domain.vertices().ok_or(Error::CurvedBoundary)?;
    if face >= vertices.len() {
        return Err(Error::InvalidArgument(format!(
            "face {face} out of range for a polygon with {} faces",
            vertices.len()
        )));
    }
    let (a, b) = (vertices[face], vertices[(face + 1) % vertices.len()]);
    let d = b - a;
    let length = d.norm();
    if length == 0.0 {
        return Err(Error::DegenerateFace { index: face });
    }
    Ok(d.perp_right().dot(a - p) / length)
}

/// Where a point lies relative to a polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointLocation {
    Inside,
    OnBoundary,
    Outside,
}

pub fn locate_point(vertices: &[Point2], p: Point2) -> PointLocation {
    let n = vertices.len();
    let scale = vertices.iter().map(|v| v.norm()).fold(p.norm(), f64::max).max(1.0);
    let eps = 1e-12 * scale;
    let mut winding = 0i32;
    for i in 0..n {
        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
        let d = b - a;
        let t = ((p - a).dot(d) / d.norm_squared()).clamp(0.0, 1.0);
        if (a + d * t).distance(p) <= eps {
            return PointLocation::OnBoundary;
        }
        if a.y <= p.y {
            if b.y > p.y && orient(a, b, p) > 0.0 {
                winding += 1;
            }
        } else if b.y <= p.y && orient(a, b, p) < 0.0 {
            winding -= 1;
        }
    }
    if winding != 0 {
        PointLocation::Inside
    } else {
        PointLocation::Outside
    }
}

/// Whether every ray from `p` meets the polygon boundary exactly once.
///
/// For a polygon and an interior point this holds exactly when every face has
/// a positive signed distance from `p`.
pub fn is_strictly_star_convex(domain: &DomainSpec, p: Point2) -> Result<bool> {
    let vertices = domain.vertices().ok_or_else(|| {
        Error::Unsupported("star convexity is only decided for polygons".into())
    })?;
    if locate_point(vertices, p) != PointLocation::Inside {
        return Err(Error::PointNotInterior { x: p.x, y: p.y });
    }
    Ok(faces(domain, p)?.iter().all(|f| f.signed_distance > 0.0))
}

/// Human-readable summary, used in reports.
pub fn describe(domain: &DomainSpec) -> String {
    match domain.kind() {
        DomainKind::Polygon { vertices } => format!("polygon with {} vertices", vertices.len()),
        DomainKind::HalfDisk { radius } => format!("half disk of radius {radius}"),
        DomainKind::Disk { radius } => format!("disk of radius {radius}"),
        DomainKind::HyperbolicDisk { radius } => format!("hyperbolic disk of radius {radius}"),
    }
}
