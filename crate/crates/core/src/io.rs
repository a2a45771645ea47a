//! Serde configuration types for gauges, shapes, cones, weights, densities
//! and interval sets, with builders into the numerical types.

use serde::{Deserialize, Serialize};

use crate::bminkowski::ConvexBody;
use crate::cone::{ConeSpec, WeightKind, WeightSpec};
use crate::error::{Error, Result};
use crate::gauge::{CustomFamily, Gauge};
use crate::mesh::Mesh;
use crate::model1d::{Density1D, IntervalSet, LeftCost, OneDimFinsler};
use crate::shapes::ellipse;

/// `{"kind": "euclidean" | "polytopal" | "support" | "randers" | "custom", …}`,
/// optionally `"dual": true` to take the dual gauge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaugeConfig {
    #[serde(flatten)]
    pub kind: GaugeKindConfig,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub dual: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GaugeKindConfig {
    Euclidean { dim: usize },
    Polytopal { vertices: Vec<Vec<f64>> },
    Support { vertices: Vec<Vec<f64>> },
    Randers { drift: Vec<f64> },
    Custom { family: FamilyConfig },
}

/// Built-in analytic families; arbitrary expressions are not accepted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum FamilyConfig {
    Lp { dim: usize, p: f64 },
    Elliptic { semi_axes: Vec<f64> },
    LpRanders { p: f64, drift: Vec<f64> },
}

impl GaugeConfig {
    pub fn euclidean(dim: usize) -> GaugeConfig {
        GaugeConfig { kind: GaugeKindConfig::Euclidean { dim }, dual: false, resolution: None }
    }

    pub fn build(&self) -> Result<Gauge> {
        let g = match &self.kind {
            GaugeKindConfig::Euclidean { dim } => {
                if !(2..=3).contains(dim) {
                    return Err(Error::InvalidGauge(format!("unsupported dimension {dim}")));
                }
                Gauge::euclidean(*dim)
            }
            GaugeKindConfig::Polytopal { vertices } => Gauge::polytopal(vertices)?,
            GaugeKindConfig::Support { vertices } => Gauge::support(vertices)?,
            GaugeKindConfig::Randers { drift } => Gauge::randers(drift)?,
            GaugeKindConfig::Custom { family } => {
                let (dim, fam) = match family {
                    FamilyConfig::Lp { dim, p } => (*dim, CustomFamily::Lp { p: *p }),
                    FamilyConfig::Elliptic { semi_axes } => {
                        (semi_axes.len(), CustomFamily::Elliptic { semi_axes: semi_axes.clone() })
                    }
                    FamilyConfig::LpRanders { p, drift } => {
                        (drift.len(), CustomFamily::LpRanders { p: *p, drift: drift.clone() })
                    }
                };
                Gauge::custom(dim, fam)?
            }
        };
        let g = match self.resolution {
            Some(r) => g.with_resolution(r),
            None => g,
        };
        if self.dual {
            g.dual()
        } else {
            Ok(g)
        }
    }
}

/// `{"kind": "polygon" | "mesh" | "ball" | "ellipse" | "wulff", …}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShapeConfig {
    /// Simple polygon, counter-clockwise or clockwise.
    Polygon { vertices: Vec<Vec<f64>> },
    /// Closed triangulated surface with outward orientation.
    Mesh { vertices: Vec<Vec<f64>>, triangles: Vec<[usize; 3]> },
    /// Forward ball `B⁺(center, radius)` of `gauge` (Euclidean by default).
    Ball {
        center: Vec<f64>,
        radius: f64,
        #[serde(default)]
        gauge: Option<GaugeConfig>,
    },
    /// Axis-aligned ellipse or ellipsoid centered at `center` (origin by default).
    Ellipse {
        semi_axes: Vec<f64>,
        #[serde(default)]
        center: Option<Vec<f64>>,
    },
    /// Wulff shape `center + scale·W` of the integrand `gauge`.
    Wulff {
        gauge: GaugeConfig,
        #[serde(default = "one")]
        scale: f64,
        #[serde(default)]
        center: Option<Vec<f64>>,
    },
}

fn one() -> f64 {
    1.0
}

impl ShapeConfig {
    pub fn build(&self, resolution: usize) -> Result<Mesh> {
        let placed = |m: Mesh, center: &Option<Vec<f64>>| -> Result<Mesh> {
            match center {
                Some(c) if c.len() != m.dim => Err(Error::DimensionMismatch { expected: m.dim, got: c.len() }),
                Some(c) => Ok(m.translated(c)),
                None => Ok(m),
            }
        };
        let mesh = match self {
            ShapeConfig::Polygon { vertices } => {
                if vertices.len() < 3 || vertices.iter().any(|v| v.len() != 2) {
                    return Err(Error::InvalidArgument("polygons need at least three planar vertices".into()));
                }
                let mut ring = vertices.clone();
                if crate::hull::polygon_area(&ring) < 0.0 {
                    ring.reverse();
                }
                Mesh::from_polygon(&ring)
            }
            ShapeConfig::Mesh { vertices, triangles } => {
                if vertices.iter().any(|v| v.len() != 3) {
                    return Err(Error::InvalidArgument("mesh vertices must be 3-vectors".into()));
                }
                if triangles.iter().flatten().any(|&i| i >= vertices.len()) {
                    return Err(Error::InvalidArgument("triangle index out of range".into()));
                }
                Mesh::from_triangles(vertices, triangles)
            }
            ShapeConfig::Ball { center, radius, gauge } => {
                let g = match gauge {
                    Some(g) => g.build()?,
                    None => Gauge::euclidean(center.len()),
                };
                g.forward_ball(center, *radius, resolution)?
            }
            ShapeConfig::Ellipse { semi_axes, center } => {
                if !(2..=3).contains(&semi_axes.len()) || semi_axes.iter().any(|a| !(*a > 0.0)) {
                    return Err(Error::InvalidArgument("ellipse needs 2 or 3 positive semi-axes".into()));
                }
                placed(ellipse(semi_axes, resolution), center)?
            }
            ShapeConfig::Wulff { gauge, scale, center } => {
                if !(*scale > 0.0) {
                    return Err(Error::InvalidArgument(format!("Wulff scale must be positive, got {scale}")));
                }
                placed(gauge.build()?.wulff(resolution)?.scaled(*scale), center)?
            }
        };
        mesh.require_closed()?;
        Ok(mesh)
    }

    /// Convex hull of the shape's vertices.
    pub fn build_convex(&self, resolution: usize) -> Result<ConvexBody> {
        let mesh = self.build(resolution)?;
        ConvexBody::new(&mesh.vertices().cloned().collect::<Vec<_>>())
    }
}

/// `{"normals": [[..], ..]}`; `dim` is required only for the whole space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeConfig {
    #[serde(default)]
    pub normals: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
}

impl ConeConfig {
    pub fn build(&self, dim: usize) -> Result<ConeSpec> {
        if let Some(d) = self.dim {
            if d != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: d });
            }
        }
        ConeSpec::new(dim, self.normals.clone())
    }
}

/// `{"alpha": real, "kind": "one" | "linear_power" | "monomial", "c": [..], "exponents": [..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightConfig {
    #[serde(default)]
    pub alpha: f64,
    pub kind: WeightKindName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKindName {
    One,
    LinearPower,
    Monomial,
}

impl WeightConfig {
    pub fn one() -> WeightConfig {
        WeightConfig { alpha: 0.0, kind: WeightKindName::One, c: None, exponents: None }
    }

    /// Validates the weight against `cone`.
    pub fn build(&self, cone: &ConeSpec) -> Result<WeightSpec> {
        let missing = |field: &str| Error::InadmissibleWeight(format!("weight kind needs \"{field}\""));
        let kind = match self.kind {
            WeightKindName::One => return WeightSpec::new(self.alpha, WeightKind::One, cone),
            WeightKindName::LinearPower => WeightKind::LinearPower { c: self.c.clone().ok_or_else(|| missing("c"))? },
            WeightKindName::Monomial => {
                WeightKind::Monomial { exponents: self.exponents.clone().ok_or_else(|| missing("exponents"))? }
            }
        };
        WeightSpec::new(self.alpha, kind, cone)
    }
}

/// `ξ` as a number or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum XiValue {
    Finite(f64),
    Named(XiName),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum XiName {
    #[serde(rename = "inf")]
    Inf,
}

impl XiValue {
    pub fn value(self) -> f64 {
        match self {
            XiValue::Finite(x) => x,
            XiValue::Named(XiName::Inf) => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub xi: XiValue,
    #[serde(rename = "D")]
    pub d: f64,
}

/// `{"N", "Dprime", "samples": [[x, h], ..]}` or `{"N", "model": {"xi", "D"}}`,
/// with an optional constant leftward cost `"left"` (1 when reversible).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityConfig {
    #[serde(rename = "N")]
    pub n: f64,
    #[serde(rename = "Dprime", default, skip_serializing_if = "Option::is_none")]
    pub dprime: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<(f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<f64>,
}

impl DensityConfig {
    pub fn build(&self) -> Result<Density1D> {
        match (&self.samples, &self.model) {
            (Some(samples), None) => {
                let h = Density1D::from_samples(self.n, samples)?;
                if let Some(dp) = self.dprime {
                    if (dp - h.dprime).abs() > 1e-9 * dp.abs().max(1.0) {
                        return Err(Error::InvalidArgument(format!(
                            "Dprime = {dp} does not match the last sample abscissa {}",
                            h.dprime
                        )));
                    }
                }
                Ok(h)
            }
            (None, Some(m)) => Density1D::model(self.n, m.d, m.xi.value()),
            _ => Err(Error::InvalidArgument("density needs exactly one of \"samples\" or \"model\"".into())),
        }
    }

    pub fn build_space(&self) -> Result<OneDimFinsler> {
        OneDimFinsler::new(self.build()?, LeftCost::Constant(self.left.unwrap_or(1.0)))
    }
}

/// `[[a, b], ..]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntervalSetConfig(pub Vec<(f64, f64)>);

impl IntervalSetConfig {
    pub fn build(&self) -> Result<IntervalSet> {
        IntervalSet::new(self.0.clone())
    }
}
