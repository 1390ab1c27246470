//! JSON domain files and the built-in named domains.
//!
//! A domain file looks like
//!
//! ```json
//! {
//!   "type": "polygon",
//!   "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]],
//!   "conditions": ["dirichlet", "neumann", "dirichlet", "neumann"],
//!   "point": [0.5, 0.5]
//! }
//! ```
//!
//! Edge `i` of a polygon joins vertex `i` to vertex `i + 1 (mod N)`. Round
//! shapes take `radius` (or `R`) instead of `vertices`; the half disk has two
//! segments (arc, then diameter), the disks one.

use std::fs;
use std::path::Path;

use mixspec_core::closed_form::{CanonicalDomain, ProblemKind, SquarePartition};
use mixspec_core::{BoundaryCondition, DomainKind, DomainSpec, Point2};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeType {
    Polygon,
    HalfDisk,
    Disk,
    HyperbolicDisk,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConditionLabel {
    Neumann,
    Dirichlet,
    Steklov,
    Robin,
}

impl From<ConditionLabel> for BoundaryCondition {
    fn from(c: ConditionLabel) -> Self {
        match c {
            ConditionLabel::Neumann => BoundaryCondition::Neumann,
            ConditionLabel::Dirichlet => BoundaryCondition::Dirichlet,
            ConditionLabel::Steklov => BoundaryCondition::Steklov,
            ConditionLabel::Robin => BoundaryCondition::Robin,
        }
    }
}

impl From<BoundaryCondition> for ConditionLabel {
    fn from(c: BoundaryCondition) -> Self {
        match c {
            BoundaryCondition::Neumann => ConditionLabel::Neumann,
            BoundaryCondition::Dirichlet => ConditionLabel::Dirichlet,
            BoundaryCondition::Steklov => ConditionLabel::Steklov,
            BoundaryCondition::Robin => ConditionLabel::Robin,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainFile {
    #[serde(rename = "type")]
    pub shape: ShapeType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<[f64; 2]>>,
    pub conditions: Vec<ConditionLabel>,
    #[serde(default, alias = "R", skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<[f64; 2]>,
}

impl DomainFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::input(format!("malformed domain file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("domain files always serialize")
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            context: format!("cannot read domain file {}", path.display()),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn from_spec(spec: &DomainSpec, point: Option<Point2>) -> Self {
        let (shape, vertices, radius) = match spec.kind() {
            DomainKind::Polygon { vertices } => {
                (ShapeType::Polygon, Some(vertices.iter().map(|v| [v.x, v.y]).collect()), None)
            }
            DomainKind::HalfDisk { radius } => (ShapeType::HalfDisk, None, Some(*radius)),
            DomainKind::Disk { radius } => (ShapeType::Disk, None, Some(*radius)),
            DomainKind::HyperbolicDisk { radius } => (ShapeType::HyperbolicDisk, None, Some(*radius)),
        };
        DomainFile {
            shape,
            vertices,
            conditions: spec.conditions().iter().map(|&c| c.into()).collect(),
            radius,
            point: point.map(|p| [p.x, p.y]),
        }
    }

    pub fn base_point(&self) -> Option<Point2> {
        self.point.map(|[x, y]| Point2::new(x, y))
    }

    pub fn to_spec(&self) -> Result<DomainSpec> {
        let conditions: Vec<BoundaryCondition> = self.conditions.iter().map(|&c| c.into()).collect();
        let radius = || {
            self.radius
                .ok_or_else(|| CliError::input(format!("{:?} domain needs `radius`", self.shape)))
        };
        if self.shape != ShapeType::Polygon && self.vertices.is_some() {
            return Err(CliError::input("`vertices` is only allowed for polygons"));
        }
        let spec = match self.shape {
            ShapeType::Polygon => {
                if self.radius.is_some() {
                    return Err(CliError::input("`radius` is not allowed for polygons"));
                }
                let vertices = self
                    .vertices
                    .as_ref()
                    .ok_or_else(|| CliError::input("polygon domain needs `vertices`"))?
                    .iter()
                    .map(|&[x, y]| Point2::new(x, y))
                    .collect();
                DomainSpec::polygon(vertices, conditions)?
            }
            ShapeType::HalfDisk => DomainSpec::new(DomainKind::HalfDisk { radius: radius()? }, conditions)?,
            ShapeType::Disk => DomainSpec::new(DomainKind::Disk { radius: radius()? }, conditions)?,
            ShapeType::HyperbolicDisk => {
                DomainSpec::new(DomainKind::HyperbolicDisk { radius: radius()? }, conditions)?
            }
        };
        Ok(spec)
    }
}

/// The boundary label given to `F` for a problem kind on a named domain.
pub fn free_label(kind: ProblemKind) -> BoundaryCondition {
    match kind {
        ProblemKind::SteklovDirichlet => BoundaryCondition::Steklov,
        ProblemKind::RobinDirichlet { .. } => BoundaryCondition::Robin,
        _ => BoundaryCondition::Neumann,
    }
}

pub const NAMED_DOMAINS: &[&str] = &[
    "square-mixed",
    "square-one-dirichlet-side",
    "square-dirichlet",
    "square-neumann",
    "half-disk[:R]",
    "disk[:R]",
    "hyperbolic-disk:R",
];

/// Resolves a built-in name such as `square-mixed` or `hyperbolic-disk:2`.
/// Returns `Ok(None)` when `name` is not a built-in name at all.
pub fn named_domain(name: &str) -> Result<Option<CanonicalDomain>> {
    let (base, radius) = match name.split_once(':') {
        Some((b, r)) => {
            let r: f64 = r
                .parse()
                .map_err(|_| CliError::input(format!("bad radius `{r}` in domain name `{name}`")))?;
            (b, Some(r))
        }
        None => (name, None),
    };
    let square = |partition| {
        if radius.is_some() {
            return Err(CliError::input(format!("`{base}` takes no radius")));
        }
        Ok(Some(CanonicalDomain::unit_square(partition)))
    };
    let positive = |r: f64| {
        if r > 0.0 && r.is_finite() {
            Ok(r)
        } else {
            Err(CliError::input(format!("radius {r} must be positive")))
        }
    };
    match base {
        "square-mixed" => square(SquarePartition::Mixed),
        "square-one-dirichlet-side" => square(SquarePartition::OneDirichletSide),
        "square-dirichlet" => square(SquarePartition::Dirichlet),
        "square-neumann" => square(SquarePartition::Neumann),
        "half-disk" => Ok(Some(CanonicalDomain::HalfDisk {
            radius: positive(radius.unwrap_or(1.0))?,
        })),
        "disk" => Ok(Some(CanonicalDomain::Disk {
            radius: positive(radius.unwrap_or(1.0))?,
        })),
        "hyperbolic-disk" => {
            let r = radius.ok_or_else(|| CliError::input("hyperbolic-disk needs a radius, as in hyperbolic-disk:2"))?;
            Ok(Some(CanonicalDomain::HyperbolicDisk { radius: positive(r)? }))
        }
        _ => Ok(None),
    }
}

/// A domain ready for a command, with the base point from the file if any.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadedDomain {
    pub spec: DomainSpec,
    pub point: Option<Point2>,
    /// The name or path the domain came from.
    pub source: String,
}

/// Interprets `arg` as a built-in name, and otherwise as a path to a domain file.
pub fn load_domain(arg: &str, kind: ProblemKind) -> Result<LoadedDomain> {
    if let Some(canonical) = named_domain(arg)? {
        return Ok(LoadedDomain {
            spec: canonical.to_domain(free_label(kind)),
            point: None,
            source: arg.to_string(),
        });
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(CliError::input(format!(
            "`{arg}` is neither a domain file nor one of {}",
            NAMED_DOMAINS.join(", ")
        )));
    }
    let file = DomainFile::read(path)?;
    Ok(LoadedDomain {
        spec: file.to_spec()?,
        point: file.base_point(),
        source: arg.to_string(),
    })
}
