//! Triangular meshes of the supported domains.
//!
//! Axis-aligned rectangles get a structured grid, the half disk and the disk
//! get concentric rings joined ring to ring, and any other polygon is
//! ear-clipped, made Delaunay by edge flips, and then uniformly refined until
//! every edge is at most `h` long.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{ceil, cos, sin};

use crate::error::{Error, Result};
use crate::geometry::{BoundaryCondition, DomainKind, DomainSpec, Point2};

/// A boundary edge `a -> b` with the domain interior on its left.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub a: usize,
    pub b: usize,
    /// Index of the domain boundary segment the edge lies on.
    pub segment: usize,
    pub condition: BoundaryCondition,
    /// The unique triangle containing the edge.
    pub triangle: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TriMesh {
    pub vertices: Vec<Point2>,
    /// Counterclockwise vertex triples.
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<BoundaryEdge>,
    /// Target edge length the mesh was built for.
    pub h: f64,
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b { (a, b) } else { (b, a) }
}

impl TriMesh {
    /// Builds a mesh from labelled boundary edges `(a, b, segment, condition)`
    /// and checks that triangles are positively oriented, that every
    /// boundary edge belongs to exactly one triangle, and that the labelled
    /// edges are exactly the mesh boundary.
    pub fn new(
        vertices: Vec<Point2>,
        triangles: Vec<[usize; 3]>,
        edges: &[(usize, usize, usize, BoundaryCondition)],
        h: f64,
    ) -> Result<Self> {
        let mut owners: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (t, tri) in triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= vertices.len()) {
                return Err(Error::InvalidDomain(format!("triangle {t} references a missing vertex")));
            }
            for i in 0..3 {
                owners.entry(edge_key(tri[i], tri[(i + 1) % 3])).or_default().push(t);
            }
        }
        let mut boundary_edges = Vec::with_capacity(edges.len());
        for &(a, b, segment, condition) in edges {
            let triangle = match owners.get(&edge_key(a, b)).map(Vec::as_slice) {
                Some(&[t]) => t,
                _ => {
                    return Err(Error::InvalidDomain(format!(
                        "boundary edge ({a}, {b}) is not on exactly one triangle"
                    )));
                }
            };
            let tri = triangles[triangle];
            if !(0..3).any(|i| tri[i] == a && tri[(i + 1) % 3] == b) {
                return Err(Error::InvalidDomain(format!("boundary edge ({a}, {b}) is not counterclockwise")));
            }
            boundary_edges.push(BoundaryEdge {
                a,
                b,
                segment,
                condition,
                triangle,
            });
        }
        let open = owners.values().filter(|o| o.len() == 1).count();
        if owners.values().any(|o| o.len() > 2) || open != boundary_edges.len() {
            return Err(Error::InvalidDomain("labelled edges do not match the mesh boundary".into()));
        }
        let mesh = TriMesh {
            vertices,
            triangles,
            boundary_edges,
            h,
        };
        for t in 0..mesh.triangles.len() {
            if !(mesh.triangle_area(t) > 0.0) {
                return Err(Error::DegenerateTriangle { index: t });
            }
        }
        Ok(mesh)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Signed area of triangle `t`.
    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t].map(|i| self.vertices[i]);
        0.5 * (b - a).cross(c - a)
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    pub fn max_edge_length(&self) -> f64 {
        self.triangles
            .iter()
            .flat_map(|tri| (0..3).map(move |i| (tri[i], tri[(i + 1) % 3])))
            .map(|(a, b)| self.vertices[a].distance(self.vertices[b]))
            .fold(0.0, f64::max)
    }

    pub fn edge_length(&self, edge: &BoundaryEdge) -> f64 {
        self.vertices[edge.a].distance(self.vertices[edge.b])
    }

    /// Outward unit normal of a boundary edge.
    pub fn edge_normal(&self, edge: &BoundaryEdge) -> Point2 {
        let d = self.vertices[edge.b] - self.vertices[edge.a];
        d.perp_right() * (1.0 / d.norm())
    }

    /// Vertices touching a Dirichlet edge.
    pub fn dirichlet_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.vertices.len()];
        for e in self.boundary_edges.iter().filter(|e| !e.condition.is_free()) {
            mask[e.a] = true;
            mask[e.b] = true;
        }
        mask
    }

    /// Vertices on the boundary.
    pub fn boundary_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.vertices.len()];
        for e in &self.boundary_edges {
            mask[e.a] = true;
            mask[e.b] = true;
        }
        mask
    }

    /// Dilation of all vertices by `factor` about the origin.
    pub fn scaled(&self, factor: f64) -> Self {
        TriMesh {
            vertices: self.vertices.iter().map(|&p| p * factor).collect(),
            h: self.h * factor,
            ..self.clone()
        }
    }

    /// Gradients of the three barycentric hat functions on triangle `t`.
    pub fn hat_gradients(&self, t: usize) -> [Point2; 3] {
        let p = self.triangles[t].map(|i| self.vertices[i]);
        let twice_area = 2.0 * self.triangle_area(t);
        core::array::from_fn(|i| {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            Point2::new(p[j].y - p[k].y, p[k].x - p[j].x) * (1.0 / twice_area)
        })
    }

    /// Gradient of the piecewise linear interpolant of `values` on triangle `t`.
    pub fn gradient(&self, t: usize, values: &[f64]) -> Point2 {
        let g = self.hat_gradients(t);
        let tri = self.triangles[t];
        (0..3).fold(Point2::ORIGIN, |acc, i| acc + g[i] * values[tri[i]])
    }
}

/// Meshes `domain` with edges of length about `h`.
pub fn triangulate(domain: &DomainSpec, h: f64) -> Result<TriMesh> {
    if !(h > 0.0 && h.is_finite() && h < domain.diameter()) {
        return Err(Error::InvalidArgument(format!(
            "mesh size h = {h} must lie in (0, {})",
            domain.diameter()
        )));
    }
    let bc = domain.conditions();
    match domain.kind() {
        DomainKind::Polygon { vertices } => match rectangle_sides(vertices) {
            Some(sides) => structured_rectangle(vertices, sides, bc, h),
            None => refined_polygon(vertices, bc, h),
        },
        DomainKind::HalfDisk { radius } => ring_mesh(*radius, bc, h, true),
        DomainKind::Disk { radius } => ring_mesh(*radius, bc, h, false),
        DomainKind::HyperbolicDisk { .. } => {
            Err(Error::Unsupported("finite elements on the hyperbolic disk".into()))
        }
    }
}

/// For an axis-aligned rectangle, the index of the edge on each side in the
/// order bottom, right, top, left.
fn rectangle_sides(vertices: &[Point2]) -> Option<[usize; 4]> {
    if vertices.len() != 4 {
        return None;
    }
    let mut sides = [usize::MAX; 4];
    for i in 0..4 {
        let d = vertices[(i + 1) % 4] - vertices[i];
        let side = match (d.x.partial_cmp(&0.0)?, d.y.partial_cmp(&0.0)?) {
            (core::cmp::Ordering::Greater, core::cmp::Ordering::Equal) => 0,
            (core::cmp::Ordering::Equal, core::cmp::Ordering::Greater) => 1,
            (core::cmp::Ordering::Less, core::cmp::Ordering::Equal) => 2,
            (core::cmp::Ordering::Equal, core::cmp::Ordering::Less) => 3,
            _ => return None,
        };
        sides[side] = i;
    }
    sides.iter().all(|&s| s != usize::MAX).then_some(sides)
}

fn divisions(length: f64, h: f64) -> usize {
    (ceil(length / h - 1e-9) as usize).max(1)
}

fn structured_rectangle(vertices: &[Point2], sides: [usize; 4], bc: &[BoundaryCondition], h: f64) -> Result<TriMesh> {
    let corner = vertices[sides[0]];
    let far = vertices[sides[2]];
    let (width, height) = (far.x - corner.x, far.y - corner.y);
    let (nx, ny) = (divisions(width, h), divisions(height, h));
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut points = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            // Exact endpoints keep the outer rows on the boundary lines.
            let x = if i == nx { far.x } else { corner.x + width * i as f64 / nx as f64 };
            let y = if j == ny { far.y } else { corner.y + height * j as f64 / ny as f64 };
            points.push(Point2::new(x, y));
        }
    }
    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (p00, p10, p11, p01) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            triangles.push([p00, p10, p11]);
            triangles.push([p00, p11, p01]);
        }
    }
    let mut edges = Vec::new();
    let label = |side: usize| (sides[side], bc[sides[side]]);
    for i in 0..nx {
        let (s, c) = label(0);
        edges.push((id(i, 0), id(i + 1, 0), s, c));
    }
    for j in 0..ny {
        let (s, c) = label(1);
        edges.push((id(nx, j), id(nx, j + 1), s, c));
    }
    for i in (0..nx).rev() {
        let (s, c) = label(2);
        edges.push((id(i + 1, ny), id(i, ny), s, c));
    }
    for j in (0..ny).rev() {
        let (s, c) = label(3);
        edges.push((id(0, j + 1), id(0, j), s, c));
    }
    TriMesh::new(points, triangles, &edges, h)
}

/// Joins two rings of vertices, each listed by increasing angle over the
/// same angular span, with counterclockwise triangles.
fn zip_rings(triangles: &mut Vec<[usize; 3]>, inner: &[usize], outer: &[usize]) {
    let (si, so) = (inner.len() - 1, outer.len() - 1);
    let (mut ia, mut ib) = (0, 0);
    while ia < si || ib < so {
        let advance_inner = ib == so || (ia < si && (ia + 1) * so <= (ib + 1) * si);
        if advance_inner {
            triangles.push([inner[ia], outer[ib], inner[ia + 1]]);
            ia += 1;
        } else {
            triangles.push([inner[ia], outer[ib], outer[ib + 1]]);
            ib += 1;
        }
    }
}

/// Concentric rings about the origin. The half disk uses angles in `[0, pi]`
/// with the arc as segment 0 and the diameter as segment 1.
fn ring_mesh(radius: f64, bc: &[BoundaryCondition], h: f64, half: bool) -> Result<TriMesh> {
    let span = if half { PI } else { 2.0 * PI };
    let rings = divisions(radius, h);
    let mut points = vec![Point2::ORIGIN];
    // rings[i] lists vertex ids by increasing angle, closed rings repeat their first vertex.
    let mut ring_ids: Vec<Vec<usize>> = vec![vec![0]];
    for i in 1..=rings {
        let r = if i == rings { radius } else { radius * i as f64 / rings as f64 };
        let steps = divisions(span * r, h).max(if half { 2 } else { 3 });
        let count = if half { steps + 1 } else { steps };
        let first = points.len();
        for j in 0..count {
            let t = span * j as f64 / steps as f64;
            let p = if half && j == steps {
                Point2::new(-r, 0.0)
            } else if j == 0 {
                Point2::new(r, 0.0)
            } else {
                Point2::new(r * cos(t), r * sin(t))
            };
            points.push(p);
        }
        let mut ids: Vec<usize> = (first..first + count).collect();
        if !half {
            ids.push(first);
        }
        ring_ids.push(ids);
    }
    let mut triangles = Vec::new();
    for w in ring_ids[1].windows(2) {
        triangles.push([0, w[0], w[1]]);
    }
    for i in 1..rings {
        zip_rings(&mut triangles, &ring_ids[i], &ring_ids[i + 1]);
    }
    let mut edges = Vec::new();
    for w in ring_ids[rings].windows(2) {
        edges.push((w[0], w[1], 0, bc[0]));
    }
    if half {
        for i in (0..rings).rev() {
            let (outer, inner) = (&ring_ids[i + 1], &ring_ids[i]);
            edges.push((*outer.last().unwrap(), *inner.last().unwrap(), 1, bc[1]));
        }
        for i in 0..rings {
            edges.push((ring_ids[i][0], ring_ids[i + 1][0], 1, bc[1]));
        }
    }
    TriMesh::new(points, triangles, &edges, h)
}

fn refined_polygon(vertices: &[Point2], bc: &[BoundaryCondition], h: f64) -> Result<TriMesh> {
    let n = vertices.len();
    let mut triangles = ear_clip(vertices)?;
    make_delaunay(vertices, &mut triangles);
    let mut points = vertices.to_vec();
    let mut edges: Vec<(usize, usize, usize, BoundaryCondition)> =
        (0..n).map(|i| (i, (i + 1) % n, i, bc[i])).collect();
    loop {
        let longest = triangles
            .iter()
            .flat_map(|t| (0..3).map(move |i| (t[i], t[(i + 1) % 3])))
            .map(|(a, b)| points[a].distance(points[b]))
            .fold(0.0, f64::max);
        if longest <= h * (1.0 + 1e-12) {
            break;
        }
        red_refine(&mut points, &mut triangles, &mut edges);
    }
    TriMesh::new(points, triangles, &edges, h)
}

fn ear_clip(vertices: &[Point2]) -> Result<Vec<[usize; 3]>> {
    let mut remaining: Vec<usize> = (0..vertices.len()).collect();
    let mut triangles = Vec::with_capacity(vertices.len() - 2);
    while remaining.len() > 3 {
        let m = remaining.len();
        let ear = (0..m).find(|&i| {
            let (a, b, c) = (remaining[(i + m - 1) % m], remaining[i], remaining[(i + 1) % m]);
            let (pa, pb, pc) = (vertices[a], vertices[b], vertices[c]);
            if (pb - pa).cross(pc - pb) <= 0.0 {
                return false;
            }
            !remaining
                .iter()
                .filter(|&&q| q != a && q != b && q != c)
                .any(|&q| in_closed_triangle(vertices[q], pa, pb, pc))
        });
        let Some(i) = ear else {
            return Err(Error::InvalidDomain("polygon could not be triangulated".into()));
        };
        triangles.push([remaining[(i + m - 1) % m], remaining[i], remaining[(i + 1) % m]]);
        remaining.remove(i);
    }
    triangles.push([remaining[0], remaining[1], remaining[2]]);
    Ok(triangles)
}

fn in_closed_triangle(q: Point2, a: Point2, b: Point2, c: Point2) -> bool {
    (b - a).cross(q - a) >= 0.0 && (c - b).cross(q - b) >= 0.0 && (a - c).cross(q - c) >= 0.0
}

/// Positive when `d` is strictly inside the circumcircle of the counterclockwise triangle `abc`.
fn in_circle(a: Point2, b: Point2, c: Point2, d: Point2) -> f64 {
    let (ad, bd, cd) = (a - d, b - d, c - d);
    ad.norm_squared() * bd.cross(cd) - bd.norm_squared() * ad.cross(cd) + cd.norm_squared() * ad.cross(bd)
}

/// Lawson flips until every interior edge is locally Delaunay.
fn make_delaunay(points: &[Point2], triangles: &mut [[usize; 3]]) {
    let scale = points.iter().map(|p| p.norm_squared()).fold(0.0, f64::max).max(1e-300);
    for _ in 0..10 * triangles.len() * triangles.len() + 10 {
        let mut owners: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
        for (t, tri) in triangles.iter().enumerate() {
            for i in 0..3 {
                owners.entry(edge_key(tri[i], tri[(i + 1) % 3])).or_default().push((t, i));
            }
        }
        let mut flipped = false;
        for pair in owners.values().filter(|o| o.len() == 2) {
            let ((t1, i1), (t2, i2)) = (pair[0], pair[1]);
            let (a, b, c) = (triangles[t1][i1], triangles[t1][(i1 + 1) % 3], triangles[t1][(i1 + 2) % 3]);
            let d = triangles[t2][(i2 + 2) % 3];
            let (pa, pb, pc, pd) = (points[a], points[b], points[c], points[d]);
            if in_circle(pa, pb, pc, pd) <= 1e-12 * scale * scale {
                continue;
            }
            // Quad a, d, b, c is convex iff both new triangles are positive.
            if (pd - pa).cross(pc - pa) > 0.0 && (pb - pd).cross(pc - pd) > 0.0 {
                triangles[t1] = [a, d, c];
                triangles[t2] = [d, b, c];
                flipped = true;
                break;
            }
        }
        if !flipped {
            return;
        }
    }
}

/// Splits every triangle into four through its edge midpoints.
fn red_refine(
    points: &mut Vec<Point2>,
    triangles: &mut Vec<[usize; 3]>,
    edges: &mut Vec<(usize, usize, usize, BoundaryCondition)>,
) {
    let mut midpoints: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut midpoint = |points: &mut Vec<Point2>, a: usize, b: usize| -> usize {
        *midpoints.entry(edge_key(a, b)).or_insert_with(|| {
            points.push((points[a] + points[b]) * 0.5);
            points.len() - 1
        })
    };
    let mut refined = Vec::with_capacity(4 * triangles.len());
    for &[a, b, c] in triangles.iter() {
        let (ab, bc, ca) = (midpoint(points, a, b), midpoint(points, b, c), midpoint(points, c, a));
        refined.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
    }
    let mut split = Vec::with_capacity(2 * edges.len());
    for &(a, b, s, cond) in edges.iter() {
        let m = midpoint(points, a, b);
        split.push((a, m, s, cond));
        split.push((m, b, s, cond));
    }
    *triangles = refined;
    *edges = split;
}
