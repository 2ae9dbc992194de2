//! JSON surface configurations and their residual evaluation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use soliton_core::expr::{bind, Expr};
use soliton_core::geometry::{
    causal_character, lightlike_ruling_condition, residual_graph, residual_lorentz_cylinder,
    residual_space_translation, CausalCharacter, CurveJet, FuncJet, Jet2, Metric, ResidualMode, Vector3,
};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurfaceKind {
    /// `z = u(x, y)`.
    Graph,
    /// `z = f(x) + g(y)`.
    Translation,
    /// `X = (x, y - c x, f(x) + g(y))`.
    AffineTranslation,
    /// `X = (x, y + f(x), h(x) + g(y))`.
    SpaceTranslation,
    /// `z = f(x) g(y)`.
    Homothetical,
    /// `alpha(s) + t w` in Lorentz-Minkowski space.
    LorentzCylinder,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    pub v: u32,
    pub kind: SurfaceKind,
    #[serde(default = "euclidean")]
    pub metric: Metric,
    pub velocity: [f64; 3],
    pub functions: BTreeMap<String, String>,
    pub domain: BTreeMap<String, [f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ruling: Option<[f64; 3]>,
    /// Shear `c` of an affine translation surface.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

fn euclidean() -> Metric {
    Metric::Euclidean
}

/// Hex SHA-256 of the raw config bytes.
pub fn config_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl SurfaceConfig {
    pub fn from_slice(bytes: &[u8]) -> Result<SurfaceConfig, CliError> {
        let raw: serde_json::Value =
            serde_json::from_slice(bytes).map_err(|e| CliError::Config(format!("invalid JSON: {e}")))?;
        match raw.get("v").and_then(|v| v.as_u64()) {
            Some(v) if v == SCHEMA_VERSION as u64 => {}
            Some(v) => return Err(CliError::Config(format!("unsupported schema version {v}"))),
            None => return Err(CliError::Config("missing schema version field \"v\"".into())),
        }
        serde_json::from_value(raw).map_err(|e| CliError::Config(e.to_string()))
    }

    fn function(&self, name: &str) -> Result<&str, CliError> {
        self.functions
            .get(name)
            .map(String::as_str)
            .ok_or_else(|| CliError::Config(format!("{:?} surface needs functions.{name}", self.kind)))
    }

    fn interval(&self, name: &str) -> Result<[f64; 2], CliError> {
        let d = *self
            .domain
            .get(name)
            .ok_or_else(|| CliError::Config(format!("{:?} surface needs domain.{name}", self.kind)))?;
        if !(d[0].is_finite() && d[1].is_finite() && d[0] < d[1]) {
            return Err(CliError::Config(format!("domain.{name} = {d:?} is not an interval")));
        }
        Ok(d)
    }

    /// Validates kind-specific fields and compiles the expressions.
    pub fn compile(&self) -> Result<Surface, CliError> {
        let allowed: &[&str] = match self.kind {
            SurfaceKind::Graph => &["u"],
            SurfaceKind::Translation | SurfaceKind::AffineTranslation | SurfaceKind::Homothetical => &["f", "g"],
            SurfaceKind::SpaceTranslation => &["f", "h", "g"],
            SurfaceKind::LorentzCylinder => &["x", "y", "z"],
        };
        if let Some(extra) = self.functions.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(CliError::Config(format!("unexpected function {extra:?} for {:?}", self.kind)));
        }
        let lorentz = self.kind == SurfaceKind::LorentzCylinder;
        match (lorentz, self.metric) {
            (true, Metric::Lorentzian) | (false, Metric::Euclidean) => {}
            (true, Metric::Euclidean) => {
                return Err(CliError::Config("lorentz-cylinder needs metric lorentzian".into()))
            }
            (false, Metric::Lorentzian) => {
                return Err(CliError::Config(format!("{:?} surfaces are Euclidean only", self.kind)))
            }
        }
        if self.ruling.is_some() && !lorentz {
            return Err(CliError::Config("ruling is only used by lorentz-cylinder".into()));
        }
        if self.c.is_some() != (self.kind == SurfaceKind::AffineTranslation) {
            return Err(CliError::Config("the shear c is required for, and only for, affine-translation".into()));
        }
        let one = |name: &str, var: &'static str| FnExpr::parse(name, self.function(name)?, var);
        let shape = match self.kind {
            SurfaceKind::Graph => Shape::Graph(GraphExpr::parse(self.function("u")?)?),
            SurfaceKind::Translation => Shape::Translation(one("f", "x")?, one("g", "y")?),
            SurfaceKind::AffineTranslation => Shape::Affine(one("f", "x")?, one("g", "y")?, self.c.unwrap_or(0.0)),
            SurfaceKind::SpaceTranslation => Shape::Space(one("f", "x")?, one("h", "x")?, one("g", "y")?),
            SurfaceKind::Homothetical => Shape::Homothetical(one("f", "x")?, one("g", "y")?),
            SurfaceKind::LorentzCylinder => {
                let w = Vector3::from_array(
                    self.ruling.ok_or_else(|| CliError::Config("lorentz-cylinder needs ruling".into()))?,
                );
                let lightlike = match causal_character(w) {
                    Ok(c) => c == CausalCharacter::Lightlike,
                    Err(e) => return Err(CliError::Config(e.to_string())),
                };
                Shape::Cylinder { alpha: [one("x", "s")?, one("y", "s")?, one("z", "s")?], w, lightlike }
            }
        };
        let domain = if lorentz {
            Domain::Curve(self.interval("s")?)
        } else {
            Domain::Rect(self.interval("x")?, self.interval("y")?)
        };
        Ok(Surface { shape, domain })
    }
}

/// A one-variable expression with its first two derivatives.
#[derive(Debug, Clone)]
pub struct FnExpr {
    name: String,
    var: &'static str,
    e: [Expr; 3],
}

fn finite(name: &str, at: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Domain(format!("{name} is not finite at {at}")))
    }
}

impl FnExpr {
    pub fn parse(name: &str, text: &str, var: &'static str) -> Result<FnExpr, CliError> {
        let e = Expr::parse(text, &[var]).map_err(|err| CliError::Config(format!("functions.{name}: {err}")))?;
        let d1 = e.differentiate(var);
        let d2 = d1.differentiate(var);
        Ok(FnExpr { name: name.into(), var, e: [e, d1, d2] })
    }

    pub fn jet(&self, t: f64) -> Result<FuncJet, CliError> {
        let b = bind(&[(self.var, t)]);
        let at = format!("{} = {t}", self.var);
        let mut out = [0.0; 3];
        for (o, e) in out.iter_mut().zip(&self.e) {
            let v = e.eval(&b).map_err(|err| CliError::Domain(format!("{} at {at}: {err}", self.name)))?;
            *o = finite(&self.name, &at, v)?;
        }
        Ok(FuncJet::new(t, out[0], out[1], out[2]))
    }
}

/// `u(x, y)` with all partial derivatives up to order two.
#[derive(Debug, Clone)]
pub struct GraphExpr {
    u: Expr,
    ux: Expr,
    uy: Expr,
    uxx: Expr,
    uxy: Expr,
    uyy: Expr,
}

impl GraphExpr {
    pub fn parse(text: &str) -> Result<GraphExpr, CliError> {
        let u = Expr::parse(text, &["x", "y"]).map_err(|err| CliError::Config(format!("functions.u: {err}")))?;
        let (ux, uy) = (u.differentiate("x"), u.differentiate("y"));
        Ok(GraphExpr { uxx: ux.differentiate("x"), uxy: ux.differentiate("y"), uyy: uy.differentiate("y"), u, ux, uy })
    }

    pub fn jet(&self, x: f64, y: f64) -> Result<Jet2, CliError> {
        let b = bind(&[("x", x), ("y", y)]);
        let at = format!("(x, y) = ({x}, {y})");
        let ev = |e: &Expr| {
            let v = e.eval(&b).map_err(|err| CliError::Domain(format!("u at {at}: {err}")))?;
            finite("u", &at, v)
        };
        Ok(Jet2 {
            x,
            y,
            u: ev(&self.u)?,
            ux: ev(&self.ux)?,
            uy: ev(&self.uy)?,
            uxx: ev(&self.uxx)?,
            uxy: ev(&self.uxy)?,
            uyy: ev(&self.uyy)?,
        })
    }
}

#[derive(Debug, Clone)]
enum Shape {
    Graph(GraphExpr),
    Translation(FnExpr, FnExpr),
    Affine(FnExpr, FnExpr, f64),
    Space(FnExpr, FnExpr, FnExpr),
    Homothetical(FnExpr, FnExpr),
    Cylinder { alpha: [FnExpr; 3], w: Vector3, lightlike: bool },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Rect([f64; 2], [f64; 2]),
    Curve([f64; 2]),
}

#[derive(Debug, Clone)]
pub struct Surface {
    shape: Shape,
    pub domain: Domain,
}

/// `n` evenly spaced points covering `[a, b]`, endpoints included.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (a + b)];
    }
    (0..n).map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 }).collect()
}

impl Surface {
    /// Residual at a chart point. Graph-type surfaces give `H - <N, v>`; cylinders give
    /// the raw cylinder equation, or `<alpha' x w, v>` when the ruling is lightlike.
    pub fn residual(&self, p: &[f64], v: Vector3) -> Result<f64, CliError> {
        let normalized = |j: &Jet2| residual_graph(j, v, ResidualMode::Normalized);
        Ok(match &self.shape {
            Shape::Graph(u) => normalized(&u.jet(p[0], p[1])?),
            Shape::Translation(f, g) => normalized(&Jet2::translation(&f.jet(p[0])?, &g.jet(p[1])?)),
            Shape::Affine(f, g, c) => normalized(&Jet2::affine_translation(&f.jet(p[0])?, &g.jet(p[1])?, *c)),
            Shape::Homothetical(f, g) => normalized(&Jet2::product(&f.jet(p[0])?, &g.jet(p[1])?)),
            Shape::Space(f, h, g) => {
                let (f, h, g) = (f.jet(p[0])?, h.jet(p[0])?, g.jet(p[1])?);
                let t = f.d1 * g.d1 - h.d1;
                let w2 = 1.0 + g.d1 * g.d1 + t * t;
                residual_space_translation(&f, &h, &g, v) / (2.0 * w2 * w2.sqrt())
            }
            Shape::Cylinder { alpha, w, lightlike } => {
                let [a, b, c] = [alpha[0].jet(p[0])?, alpha[1].jet(p[0])?, alpha[2].jet(p[0])?];
                let curve = CurveJet {
                    s: p[0],
                    pos: Vector3::new(a.value, b.value, c.value),
                    d1: Vector3::new(a.d1, b.d1, c.d1),
                    d2: Vector3::new(a.d2, b.d2, c.d2),
                };
                let r = if *lightlike {
                    lightlike_ruling_condition(&curve, *w, v)
                } else {
                    residual_lorentz_cylinder(&curve, *w, v)
                };
                r.map_err(|e| CliError::Domain(format!("curve at s = {}: {e}", p[0])))?
            }
        })
    }

    /// Sample points of the domain for a grid of `n` points per axis.
    pub fn grid(&self, n: usize) -> Vec<Vec<f64>> {
        match self.domain {
            Domain::Curve([a, b]) => linspace(a, b, n).into_iter().map(|s| vec![s]).collect(),
            Domain::Rect([x0, x1], [y0, y1]) => {
                let ys = linspace(y0, y1, n);
                linspace(x0, x1, n).into_iter().flat_map(|x| ys.iter().map(move |&y| vec![x, y])).collect()
            }
        }
    }

    pub fn coordinates(&self) -> &'static [&'static str] {
        match self.domain {
            Domain::Curve(_) => &["s"],
            Domain::Rect(..) => &["x", "y"],
        }
    }
}
