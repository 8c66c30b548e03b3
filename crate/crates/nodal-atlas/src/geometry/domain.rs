//! Planar Lipschitz/quasiconvex domains, boundary graph patches and presets.

use serde::{Deserialize, Serialize};

use super::pathological::PathologicalCurve;
use super::primitives::*;
use crate::error::{Error, Result};

/// One-dimensional boundary profile of a graph patch, normalized so that
/// `phi(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum PhiKind {
    /// `phi(x) = slope * x`
    Affine { slope: f64 },
    /// `phi(x) = x^2`
    Quadratic,
    /// `phi(x) = -x^2` (concave; quasiconvex with linear modulus)
    NegQuadratic,
    /// `phi(x) = |x|`
    AbsVal,
    /// `phi(x) = max(0, |x| - knee)`
    Hinge { knee: f64 },
    /// `phi(x) = cosh(x) - 1`
    Cosh,
    /// `phi(x) = x^4`
    Quartic,
    /// Lower circular cap of given radius: `phi(x) = R - sqrt(R^2 - x^2)`
    CircleCap { radius: f64 },
    /// Piecewise-linear interpolation of samples (xs strictly increasing).
    Samples { xs: Vec<f64>, ys: Vec<f64> },
    /// Exact piecewise-quadratic pathological profile.
    PiecewiseQuad(PathologicalCurve),
}

impl PhiKind {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            PhiKind::Affine { slope } => slope * x,
            PhiKind::Quadratic => x * x,
            PhiKind::NegQuadratic => -x * x,
            PhiKind::AbsVal => x.abs(),
            PhiKind::Hinge { knee } => (x.abs() - knee).max(0.0),
            PhiKind::Cosh => x.cosh() - 1.0,
            PhiKind::Quartic => x * x * x * x,
            PhiKind::CircleCap { radius } => radius - (radius * radius - x * x).max(0.0).sqrt(),
            PhiKind::Samples { xs, ys } => {
                let n = xs.len();
                if x <= xs[0] {
                    return ys[0];
                }
                if x >= xs[n - 1] {
                    return ys[n - 1];
                }
                let i = xs.partition_point(|&v| v <= x).min(n - 1);
                let (x0, x1) = (xs[i - 1], xs[i]);
                let t = (x - x0) / (x1 - x0);
                ys[i - 1] * (1.0 - t) + ys[i] * t
            }
            PhiKind::PiecewiseQuad(c) => c.eval(x),
        }
    }
}

/// Local boundary graph `x_d = phi(x')` in a rotated frame anchored at a
/// boundary point; the domain lies on the `+normal` side.
#[derive(Debug, Clone)]
pub struct GraphPatch {
    pub anchor: Pt2,
    pub frame: Frame2,
    /// Graph interval `[lo, hi]` with `lo <= 0 <= hi`.
    pub interval: (f64, f64),
    pub phi: PhiKind,
    pub lipschitz: f64,
}

impl GraphPatch {
    pub fn new(
        anchor: Pt2,
        frame: Frame2,
        interval: (f64, f64),
        phi: PhiKind,
        lipschitz: f64,
    ) -> Result<Self> {
        if !(interval.0 <= 0.0 && interval.1 >= 0.0 && interval.0 < interval.1) {
            return Err(Error::invalid(format!(
                "patch interval [{}, {}] must contain 0",
                interval.0, interval.1
            )));
        }
        let patch = GraphPatch {
            anchor,
            frame,
            interval,
            phi,
            lipschitz,
        };
        if patch.phi.eval(0.0).abs() > 1e-10 {
            return Err(Error::invalid("patch profile must satisfy phi(0) = 0"));
        }
        patch.verify_lipschitz(256)?;
        Ok(patch)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.phi.eval(x)
    }

    /// Graph point in world coordinates.
    pub fn graph_point(&self, x: f64) -> Pt2 {
        self.frame
            .to_world(self.anchor, Vc2::new(x, self.phi.eval(x)))
    }

    pub fn contains_local_x(&self, x: f64) -> bool {
        x >= self.interval.0 && x <= self.interval.1
    }

    fn verify_lipschitz(&self, samples: usize) -> Result<()> {
        let (lo, hi) = self.interval;
        let dx = (hi - lo) / samples as f64;
        let mut prev = self.phi.eval(lo);
        for i in 1..=samples {
            let x = lo + dx * i as f64;
            let y = self.phi.eval(x);
            if (y - prev).abs() > self.lipschitz * dx + 1e-9 {
                return Err(Error::invalid(format!(
                    "patch profile violates Lipschitz bound {} near x = {:.6}",
                    self.lipschitz, x
                )));
            }
            prev = y;
        }
        Ok(())
    }

    /// Verifies `phi >= -tol` against an affine minorant on the sample grid;
    /// used when checking support planes.
    pub fn sample_grid(&self, n: usize) -> Vec<f64> {
        let (lo, hi) = self.interval;
        (0..=n)
            .map(|i| lo + (hi - lo) * i as f64 / n as f64)
            .collect()
    }
}

/// Support plane (2D: support line) `P(x') = value_at_base + slope*(x'-base)`
/// of a convex graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportPlane {
    pub base: f64,
    pub value_at_base: f64,
    pub slope: f64,
}

impl SupportPlane {
    pub fn eval(&self, x: f64) -> f64 {
        self.value_at_base + self.slope * (x - self.base)
    }
}

/// Sampled quasiconvexity modulus `omega(rho)` on an increasing radius grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiconvexityModulus {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

impl QuasiconvexityModulus {
    /// Piecewise-linear evaluation, clamped to the grid range.
    pub fn eval(&self, r: f64) -> f64 {
        let n = self.radii.len();
        if n == 0 {
            return 0.0;
        }
        if r <= self.radii[0] {
            // omega is nondecreasing with omega(0+) = 0: interpolate to 0
            return self.values[0] * (r / self.radii[0]).clamp(0.0, 1.0);
        }
        if r >= self.radii[n - 1] {
            return self.values[n - 1];
        }
        let i = self.radii.partition_point(|&v| v <= r);
        let (r0, r1) = (self.radii[i - 1], self.radii[i]);
        let t = (r - r0) / (r1 - r0);
        self.values[i - 1] * (1.0 - t) + self.values[i] * t
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] >= w[0] - 1e-15)
    }
}

/// Closed-form or tabulated modulus attached to a domain preset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModulusSpec {
    Zero,
    Linear { rate: f64 },
    Table(QuasiconvexityModulus),
}

impl ModulusSpec {
    pub fn eval(&self, r: f64) -> f64 {
        match self {
            ModulusSpec::Zero => 0.0,
            ModulusSpec::Linear { rate } => rate * r,
            ModulusSpec::Table(t) => t.eval(r),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainKind {
    Convex,
    Quasiconvex,
    GenericLipschitz,
}

/// Planar Lipschitz domain bounded by a simple, positively oriented closed
/// polyline, with optional exact graph patches on parts of the boundary.
#[derive(Debug, Clone)]
pub struct PlanarDomain {
    pub boundary: Vec<Pt2>,
    pub patches: Vec<GraphPatch>,
    pub lipschitz_l: f64,
    pub r0: f64,
    pub kind: DomainKind,
    /// Known modulus for presets; estimated moduli are not stored here.
    pub modulus: Option<ModulusSpec>,
    pub name: String,
}

impl PlanarDomain {
    pub fn new(
        boundary: Vec<Pt2>,
        patches: Vec<GraphPatch>,
        lipschitz_l: f64,
        r0: f64,
        kind: DomainKind,
    ) -> Result<Self> {
        if boundary.len() < 3 {
            return Err(Error::geometry("boundary polyline needs >= 3 vertices"));
        }
        if !polygon_is_simple(&boundary) {
            return Err(Error::geometry("boundary polyline is self-intersecting"));
        }
        if polygon_area(&boundary) <= 0.0 {
            return Err(Error::geometry(
                "boundary polyline must be positively oriented (counter-clockwise)",
            ));
        }
        if r0 <= 0.0 {
            return Err(Error::invalid("r0 must be positive"));
        }
        if kind == DomainKind::Convex && !polygon_is_convex(&boundary) {
            return Err(Error::geometry(
                "kind = convex but polyline vertices are not in convex position",
            ));
        }
        for p in &patches {
            if p.lipschitz > lipschitz_l + 1e-12 {
                return Err(Error::invalid(
                    "patch Lipschitz constant exceeds the domain bound",
                ));
            }
        }
        Ok(PlanarDomain {
            boundary,
            patches,
            lipschitz_l,
            r0,
            kind,
            modulus: None,
            name: String::new(),
        })
    }

    pub fn with_modulus(mut self, m: ModulusSpec) -> Self {
        self.modulus = Some(m);
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn area(&self) -> f64 {
        polygon_area(&self.boundary)
    }

    pub fn diameter(&self) -> f64 {
        let (lo, hi) = bbox(&self.boundary);
        (hi - lo).norm()
    }

    pub fn shortest_edge(&self) -> f64 {
        let n = self.boundary.len();
        (0..n)
            .map(|i| (self.boundary[(i + 1) % n] - self.boundary[i]).norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, p: Pt2, tol: f64) -> bool {
        point_in_polygon(p, &self.boundary, tol)
    }

    pub fn dist_to_boundary(&self, p: Pt2) -> f64 {
        dist_point_polygon_boundary(p, &self.boundary)
    }

    /// Arc-length-uniform boundary sample including all polyline vertices.
    pub fn sample_boundary(&self, spacing: f64) -> Vec<Pt2> {
        let n = self.boundary.len();
        let mut out = Vec::new();
        for i in 0..n {
            let a = self.boundary[i];
            let b = self.boundary[(i + 1) % n];
            let len = (b - a).norm();
            let m = (len / spacing).ceil().max(1.0) as usize;
            for k in 0..m {
                out.push(a + (b - a) * (k as f64 / m as f64));
            }
        }
        out
    }

    /// Nearest boundary edge: (edge index, closest point, outward unit normal).
    pub fn nearest_edge(&self, p: Pt2) -> (usize, Pt2, Vc2) {
        let n = self.boundary.len();
        let mut best = (0usize, self.boundary[0], f64::INFINITY);
        for i in 0..n {
            let a = self.boundary[i];
            let b = self.boundary[(i + 1) % n];
            let ab = b - a;
            let t = ((p - a).dot(&ab) / ab.norm_squared()).clamp(0.0, 1.0);
            let q = a + ab * t;
            let d = (p - q).norm();
            if d < best.2 {
                best = (i, q, d);
            }
        }
        let (i, q, _) = best;
        let t = (self.boundary[(i + 1) % n] - self.boundary[i]).normalize();
        // interior is left of CCW edges, so the outward normal is the right
        // rotation of the tangent
        (i, q, Vc2::new(t.y, -t.x))
    }

    /// Outward unit normal of the edge nearest to `p`.
    pub fn outward_normal_near(&self, p: Pt2) -> Vc2 {
        self.nearest_edge(p).2
    }

    /// Local graph frame at a boundary point: tangent along the boundary,
    /// normal pointing into the domain. Prefers an exact patch when the point
    /// lies inside one.
    pub fn local_frame(&self, x0: Pt2) -> Frame2 {
        if let Some(patch) = self.patch_containing(x0) {
            return patch.frame;
        }
        let (_, _, outward) = self.nearest_edge(x0);
        Frame2 {
            tangent: Vc2::new(-outward.y, outward.x),
            normal: -outward,
        }
    }

    /// The patch whose graph contains `x0` (within a small tolerance).
    pub fn patch_containing(&self, x0: Pt2) -> Option<&GraphPatch> {
        self.patches.iter().find(|p| {
            let local = p.frame.to_local(p.anchor, x0);
            p.contains_local_x(local.x) && (local.y - p.eval(local.x)).abs() < 1e-7
        })
    }

    /// Known modulus evaluation; falls back to zero for convex domains and
    /// errors otherwise.
    pub fn modulus_at(&self, r: f64) -> Result<f64> {
        if let Some(m) = &self.modulus {
            return Ok(m.eval(r));
        }
        if self.kind == DomainKind::Convex {
            return Ok(0.0);
        }
        Err(Error::geometry(
            "domain has no modulus attached; run estimate_modulus first",
        ))
    }
}

// ---------------------------------------------------------------------------
// JSON document format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum PhiJson {
    Preset(String),
    Samples { xs: Vec<f64>, ys: Vec<f64> },
    PiecewiseQuad { breaks: Vec<f64>, masses: Vec<f64> },
}

#[derive(Serialize, Deserialize)]
struct PatchJson {
    anchor: [f64; 2],
    angle: f64,
    interval: [f64; 2],
    lipschitz: f64,
    phi: PhiJson,
}

#[derive(Serialize, Deserialize)]
struct DomainJson {
    polyline: Vec<[f64; 2]>,
    patches: Vec<PatchJson>,
    #[serde(rename = "L")]
    l: f64,
    r0: f64,
    kind: DomainKind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    modulus: Option<ModulusSpec>,
    #[serde(skip_serializing_if = "String::is_empty", default)]
    name: String,
}

fn phi_to_json(phi: &PhiKind) -> PhiJson {
    match phi {
        PhiKind::Affine { slope } => PhiJson::Preset(format!("affine:{slope}")),
        PhiKind::Quadratic => PhiJson::Preset("quadratic".into()),
        PhiKind::NegQuadratic => PhiJson::Preset("neg-quadratic".into()),
        PhiKind::AbsVal => PhiJson::Preset("absval".into()),
        PhiKind::Hinge { knee } => PhiJson::Preset(format!("hinge:{knee}")),
        PhiKind::Cosh => PhiJson::Preset("cosh".into()),
        PhiKind::Quartic => PhiJson::Preset("quartic".into()),
        PhiKind::CircleCap { radius } => PhiJson::Preset(format!("circle-cap:{radius}")),
        PhiKind::Samples { xs, ys } => PhiJson::Samples {
            xs: xs.clone(),
            ys: ys.clone(),
        },
        PhiKind::PiecewiseQuad(c) => PhiJson::PiecewiseQuad {
            breaks: c.breaks.clone(),
            masses: c.masses.clone(),
        },
    }
}

/// Parses a phi preset string such as `"quadratic"` or `"hinge:0.125"`.
pub fn parse_phi_preset(s: &str) -> Result<PhiKind> {
    let (head, arg) = match s.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (s, None),
    };
    let num = |a: Option<&str>| -> Result<f64> {
        a.ok_or_else(|| Error::UnknownPreset(s.into()))?
            .parse::<f64>()
            .map_err(|_| Error::UnknownPreset(s.into()))
    };
    Ok(match head {
        "affine" => PhiKind::Affine { slope: num(arg)? },
        "quadratic" => PhiKind::Quadratic,
        "neg-quadratic" => PhiKind::NegQuadratic,
        "absval" => PhiKind::AbsVal,
        "hinge" => PhiKind::Hinge { knee: num(arg)? },
        "cosh" => PhiKind::Cosh,
        "quartic" => PhiKind::Quartic,
        "circle-cap" => PhiKind::CircleCap { radius: num(arg)? },
        _ => return Err(Error::UnknownPreset(s.into())),
    })
}

fn phi_from_json(phi: PhiJson) -> Result<PhiKind> {
    Ok(match phi {
        PhiJson::Preset(s) => parse_phi_preset(&s)?,
        PhiJson::Samples { xs, ys } => {
            if xs.len() != ys.len() || xs.len() < 2 {
                return Err(Error::invalid("samples profile needs matching xs/ys"));
            }
            PhiKind::Samples { xs, ys }
        }
        PhiJson::PiecewiseQuad { breaks, masses } => {
            PhiKind::PiecewiseQuad(PathologicalCurve::from_parts(breaks, masses)?)
        }
    })
}

impl PlanarDomain {
    pub fn to_json(&self) -> Result<String> {
        let doc = DomainJson {
            polyline: self.boundary.iter().map(|p| [p.x, p.y]).collect(),
            patches: self
                .patches
                .iter()
                .map(|p| PatchJson {
                    anchor: [p.anchor.x, p.anchor.y],
                    angle: p.frame.angle(),
                    interval: [p.interval.0, p.interval.1],
                    lipschitz: p.lipschitz,
                    phi: phi_to_json(&p.phi),
                })
                .collect(),
            l: self.lipschitz_l,
            r0: self.r0,
            kind: self.kind,
            modulus: self.modulus.clone(),
            name: self.name.clone(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: DomainJson = serde_json::from_str(s)?;
        let boundary = doc.polyline.iter().map(|p| pt(p[0], p[1])).collect();
        let mut patches = Vec::new();
        for pj in doc.patches {
            patches.push(GraphPatch::new(
                pt(pj.anchor[0], pj.anchor[1]),
                Frame2::from_angle(pj.angle),
                (pj.interval[0], pj.interval[1]),
                phi_from_json(pj.phi)?,
                pj.lipschitz,
            )?);
        }
        let mut dom = PlanarDomain::new(boundary, patches, doc.l, doc.r0, doc.kind)?;
        dom.modulus = doc.modulus;
        dom.name = doc.name;
        Ok(dom)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

/// Builds a preset domain by name. `spacing_hint` controls the
/// polygonalization step of curved boundary pieces; pass the intended mesh
/// size to keep polyline edges slightly longer than `h`.
pub fn preset_domain(name: &str, spacing_hint: f64) -> Result<PlanarDomain> {
    let spacing = if spacing_hint > 0.0 {
        spacing_hint * 1.25
    } else {
        0.02
    };
    match name {
        "unit-square" => {
            let boundary = vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)];
            let patch = GraphPatch::new(
                pt(0.5, 0.0),
                Frame2::default(),
                (-0.4, 0.4),
                PhiKind::Affine { slope: 0.0 },
                0.0,
            )?;
            Ok(
                PlanarDomain::new(boundary, vec![patch], 1.0, 0.25, DomainKind::Convex)?
                    .with_modulus(ModulusSpec::Zero)
                    .with_name(name),
            )
        }
        "unit-disk" => {
            let n = ((2.0 * std::f64::consts::PI / spacing).ceil() as usize).clamp(64, 8192);
            let boundary = circle_polygon(pt(0.0, 0.0), 1.0, n, -std::f64::consts::FRAC_PI_2);
            let patch = GraphPatch::new(
                pt(0.0, -1.0),
                Frame2::default(),
                (-0.5, 0.5),
                PhiKind::CircleCap { radius: 1.0 },
                0.6,
            )?;
            Ok(
                PlanarDomain::new(boundary, vec![patch], 1.0, 0.5, DomainKind::Convex)?
                    .with_modulus(ModulusSpec::Zero)
                    .with_name(name),
            )
        }
        "half-disk" => {
            let n = ((std::f64::consts::PI / spacing).ceil() as usize).clamp(32, 8192);
            let mut boundary = vec![pt(-1.0, 0.0), pt(1.0, 0.0)];
            // arc from (1,0) back to (-1,0), counter-clockwise
            for i in 1..n {
                let th = std::f64::consts::PI * i as f64 / n as f64;
                boundary.push(pt(th.cos(), th.sin()));
            }
            let patch = GraphPatch::new(
                pt(0.0, 0.0),
                Frame2::default(),
                (-0.7, 0.7),
                PhiKind::Affine { slope: 0.0 },
                0.0,
            )?;
            Ok(
                PlanarDomain::new(boundary, vec![patch], 1.0, 0.4, DomainKind::Convex)?
                    .with_modulus(ModulusSpec::Zero)
                    .with_name(name),
            )
        }
        "half-box" => {
            let boundary = vec![pt(-1.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(-1.0, 1.0)];
            let patch = GraphPatch::new(
                pt(0.0, 0.0),
                Frame2::default(),
                (-0.8, 0.8),
                PhiKind::Affine { slope: 0.0 },
                0.0,
            )?;
            Ok(
                PlanarDomain::new(boundary, vec![patch], 1.0, 0.4, DomainKind::Convex)?
                    .with_modulus(ModulusSpec::Zero)
                    .with_name(name),
            )
        }
        "parabola" => {
            let half_width = 0.75;
            let top = 0.5;
            let m = ((2.0 * half_width / spacing).ceil() as usize).clamp(32, 8192);
            let mut boundary = Vec::with_capacity(m + 3);
            for i in 0..=m {
                let x = -half_width + 2.0 * half_width * i as f64 / m as f64;
                boundary.push(pt(x, -x * x));
            }
            boundary.push(pt(half_width, top));
            boundary.push(pt(-half_width, top));
            let patch = GraphPatch::new(
                pt(0.0, 0.0),
                Frame2::default(),
                (-0.6, 0.6),
                PhiKind::NegQuadratic,
                1.2,
            )?;
            Ok(
                PlanarDomain::new(boundary, vec![patch], 1.5, 0.5, DomainKind::Quasiconvex)?
                    .with_modulus(ModulusSpec::Linear { rate: 1.0 })
                    .with_name(name),
            )
        }
        _ => {
            if let Some(rest) = name.strip_prefix("ngon-") {
                let k: usize = rest
                    .parse()
                    .map_err(|_| Error::UnknownPreset(name.into()))?;
                if !(3..=64).contains(&k) {
                    return Err(Error::UnknownPreset(name.into()));
                }
                // phase chosen so the bottom edge is horizontal
                let phase = -std::f64::consts::FRAC_PI_2 + std::f64::consts::PI / k as f64;
                let boundary = circle_polygon(pt(0.0, 0.0), 1.0, k, phase);
                Ok(
                    PlanarDomain::new(boundary, Vec::new(), 1.0, 0.3, DomainKind::Convex)?
                        .with_modulus(ModulusSpec::Zero)
                        .with_name(name),
                )
            } else if name == "hexagon" {
                Ok(preset_domain("ngon-6", spacing_hint)?.with_name(name))
            } else if name == "pathological" || name.starts_with("pathological:") {
                let k = match name.split_once(':') {
                    Some((_, arg)) => arg
                        .parse::<usize>()
                        .map_err(|_| Error::UnknownPreset(name.into()))?,
                    None => 4096,
                };
                super::pathological::pathological_domain(k, spacing)
            } else {
                Err(Error::UnknownPreset(name.into()))
            }
        }
    }
}

/// Convex profile patch presets used by the flat-spot audits. All live on
/// the interval `[-1/2, 1/2]`.
pub fn preset_patch(name: &str) -> Result<GraphPatch> {
    let (phi, lip) = match name {
        "quadratic" => (PhiKind::Quadratic, 1.0),
        "absval" => (PhiKind::AbsVal, 1.0),
        "hinge" => (PhiKind::Hinge { knee: 0.125 }, 1.0),
        "cosh" => (PhiKind::Cosh, 0.53),
        "quartic" => (PhiKind::Quartic, 0.5),
        "affine" => (PhiKind::Affine { slope: 0.25 }, 0.25),
        "neg-quadratic" => (PhiKind::NegQuadratic, 1.0),
        _ => return Err(Error::UnknownPreset(name.into())),
    };
    GraphPatch::new(pt(0.0, 0.0), Frame2::default(), (-0.5, 0.5), phi, lip)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_build() {
        for name in [
            "unit-square",
            "unit-disk",
            "half-disk",
            "half-box",
            "parabola",
            "ngon-6",
        ] {
            let d = preset_domain(name, 0.02).unwrap();
            assert!(d.area() > 0.0, "{name}");
            assert!(polygon_is_simple(&d.boundary), "{name}");
        }
    }

    #[test]
    fn reversed_polyline_rejected() {
        let mut boundary = vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)];
        boundary.reverse();
        assert!(PlanarDomain::new(boundary, vec![], 1.0, 0.25, DomainKind::Convex).is_err());
    }

    #[test]
    fn convex_tag_checked() {
        // an L-shape is not in convex position
        let boundary = vec![
            pt(0.0, 0.0),
            pt(2.0, 0.0),
            pt(2.0, 1.0),
            pt(1.0, 1.0),
            pt(1.0, 2.0),
            pt(0.0, 2.0),
        ];
        assert!(
            PlanarDomain::new(boundary.clone(), vec![], 1.0, 0.25, DomainKind::Convex).is_err()
        );
        assert!(
            PlanarDomain::new(boundary, vec![], 1.0, 0.25, DomainKind::GenericLipschitz).is_ok()
        );
    }

    #[test]
    fn json_roundtrip() {
        let d = preset_domain("parabola", 0.05).unwrap();
        let s = d.to_json().unwrap();
        let back = PlanarDomain::from_json(&s).unwrap();
        assert_eq!(back.boundary.len(), d.boundary.len());
        assert_eq!(back.kind, d.kind);
        assert_eq!(back.patches.len(), 1);
        assert!((back.patches[0].eval(0.3) - d.patches[0].eval(0.3)).abs() < 1e-15);
    }

    #[test]
    fn outward_normal_points_out() {
        let d = preset_domain("unit-square", 0.0).unwrap();
        let n = d.outward_normal_near(pt(0.5, 0.0));
        assert!((n - Vc2::new(0.0, -1.0)).norm() < 1e-12);
        let frame = d.local_frame(pt(0.5, 0.0));
        assert!((frame.normal - Vc2::new(0.0, 1.0)).norm() < 1e-12);
    }
}
