//! Conforming P1 triangle meshes, point location and mesh I/O.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::domain::PlanarDomain;
use crate::geometry::primitives::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryEdge {
    pub v0: usize,
    pub v1: usize,
    pub marker: u32,
}

/// Per-triangle geometry cache: area and P1 basis gradients.
#[derive(Debug, Clone, Copy)]
pub struct TriGeom {
    pub area: f64,
    pub grads: [Vc2; 3],
}

/// Conforming triangulation with positively oriented triangles; boundary
/// edges trace the domain polyline exactly.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub vertices: Vec<Pt2>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<BoundaryEdge>,
    /// Maximum edge length.
    pub h: f64,
    pub metadata: std::collections::BTreeMap<String, String>,
    tri_geom: Vec<TriGeom>,
    is_boundary: Vec<bool>,
    locator: Locator,
}

impl Mesh {
    pub fn new(
        vertices: Vec<Pt2>,
        triangles: Vec<[usize; 3]>,
        boundary_edges: Vec<BoundaryEdge>,
    ) -> Result<Mesh> {
        if vertices.is_empty() || triangles.is_empty() {
            return Err(Error::Mesh("empty mesh".into()));
        }
        let mut tri_geom = Vec::with_capacity(triangles.len());
        let mut h: f64 = 0.0;
        for (t, tri) in triangles.iter().enumerate() {
            let [a, b, c] = *tri;
            let (pa, pb, pc) = (vertices[a], vertices[b], vertices[c]);
            let det = orient2d(pa, pb, pc);
            if det <= 0.0 {
                return Err(Error::Mesh(format!(
                    "triangle {t} has non-positive area {det:.3e}"
                )));
            }
            let area = det / 2.0;
            // grad of barycentric basis i is perpendicular to the opposite
            // edge, scaled by 1/(2 area)
            let g = |p: Pt2, q: Pt2| Vc2::new(p.y - q.y, q.x - p.x) / det;
            tri_geom.push(TriGeom {
                area,
                grads: [g(pb, pc), g(pc, pa), g(pa, pb)],
            });
            for (u, v) in [(pa, pb), (pb, pc), (pc, pa)] {
                h = h.max((u - v).norm());
            }
        }
        let mut is_boundary = vec![false; vertices.len()];
        for e in &boundary_edges {
            is_boundary[e.v0] = true;
            is_boundary[e.v1] = true;
        }
        let locator = Locator::build(&vertices, &triangles);
        Ok(Mesh {
            vertices,
            triangles,
            boundary_edges,
            h,
            metadata: std::collections::BTreeMap::new(),
            tri_geom,
            is_boundary,
            locator,
        })
    }

    #[inline]
    pub fn tri_geom(&self, t: usize) -> &TriGeom {
        &self.tri_geom[t]
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.is_boundary[v]
    }

    pub fn interior_vertices(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| !self.is_boundary[v])
            .collect()
    }

    pub fn boundary_vertices(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| self.is_boundary[v])
            .collect()
    }

    pub fn tri_points(&self, t: usize) -> [Pt2; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn centroid(&self, t: usize) -> Pt2 {
        let [pa, pb, pc] = self.tri_points(t);
        pt(
            (pa.x + pb.x + pc.x) / 3.0,
            (pa.y + pb.y + pc.y) / 3.0,
        )
    }

    /// Barycentric coordinates of `p` in triangle `t`.
    pub fn barycentric(&self, t: usize, p: Pt2) -> [f64; 3] {
        let [pa, pb, pc] = self.tri_points(t);
        let det = 2.0 * self.tri_geom[t].area;
        let l0 = orient2d(pb, pc, p) / det;
        let l1 = orient2d(pc, pa, p) / det;
        [l0, l1, 1.0 - l0 - l1]
    }

    /// Locates the triangle containing `p` (smallest index on ties).
    pub fn locate(&self, p: Pt2) -> Option<usize> {
        self.locator.locate(self, p, 1e-12)
    }

    pub fn min_angle_deg(&self) -> f64 {
        let mut worst = f64::INFINITY;
        for t in 0..self.triangles.len() {
            let [pa, pb, pc] = self.tri_points(t);
            for (u, v, w) in [(pa, pb, pc), (pb, pc, pa), (pc, pa, pb)] {
                let e1 = (v - u).normalize();
                let e2 = (w - u).normalize();
                worst = worst.min(e1.dot(&e2).clamp(-1.0, 1.0).acos());
            }
        }
        worst.to_degrees()
    }

    pub fn total_area(&self) -> f64 {
        self.tri_geom.iter().map(|g| g.area).sum()
    }

    /// Triangles whose bounding box intersects the given box.
    pub fn tris_in_box(&self, lo: Pt2, hi: Pt2) -> Vec<usize> {
        self.locator.tris_in_box(lo, hi)
    }
}

// ---------------------------------------------------------------------------
// Point location
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct Locator {
    lo: Pt2,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<u32>>,
}

impl Locator {
    fn build(vertices: &[Pt2], triangles: &[[usize; 3]]) -> Locator {
        let (lo, hi) = bbox(vertices);
        let target_cells = (4.0 * triangles.len() as f64).max(16.0);
        let span_x = (hi.x - lo.x).max(1e-12);
        let span_y = (hi.y - lo.y).max(1e-12);
        let cell = (span_x * span_y / target_cells).sqrt().max(1e-9);
        let nx = ((span_x / cell).ceil() as usize).max(1);
        let ny = ((span_y / cell).ceil() as usize).max(1);
        let mut buckets = vec![Vec::new(); nx * ny];
        for (t, tri) in triangles.iter().enumerate() {
            let pts = [vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]];
            let (tlo, thi) = bbox(&pts);
            let ix0 = (((tlo.x - lo.x) / cell).floor() as isize).clamp(0, nx as isize - 1) as usize;
            let ix1 = (((thi.x - lo.x) / cell).floor() as isize).clamp(0, nx as isize - 1) as usize;
            let iy0 = (((tlo.y - lo.y) / cell).floor() as isize).clamp(0, ny as isize - 1) as usize;
            let iy1 = (((thi.y - lo.y) / cell).floor() as isize).clamp(0, ny as isize - 1) as usize;
            for iy in iy0..=iy1 {
                for ix in ix0..=ix1 {
                    buckets[iy * nx + ix].push(t as u32);
                }
            }
        }
        Locator {
            lo,
            cell,
            nx,
            ny,
            buckets,
        }
    }

    fn locate(&self, mesh: &Mesh, p: Pt2, tol: f64) -> Option<usize> {
        let ix = ((p.x - self.lo.x) / self.cell).floor() as isize;
        let iy = ((p.y - self.lo.y) / self.cell).floor() as isize;
        if ix < 0 || iy < 0 || ix >= self.nx as isize || iy >= self.ny as isize {
            return None;
        }
        let bucket = &self.buckets[iy as usize * self.nx + ix as usize];
        for &t in bucket {
            let t = t as usize;
            let l = mesh.barycentric(t, p);
            if l.iter().all(|&v| v >= -tol) {
                return Some(t);
            }
        }
        None
    }

    fn tris_in_box(&self, lo: Pt2, hi: Pt2) -> Vec<usize> {
        let ix0 = (((lo.x - self.lo.x) / self.cell).floor() as isize).max(0) as usize;
        let iy0 = (((lo.y - self.lo.y) / self.cell).floor() as isize).max(0) as usize;
        let ix1 = (((hi.x - self.lo.x) / self.cell).floor() as isize).min(self.nx as isize - 1);
        let iy1 = (((hi.y - self.lo.y) / self.cell).floor() as isize).min(self.ny as isize - 1);
        if ix1 < 0 || iy1 < 0 || ix0 >= self.nx || iy0 >= self.ny {
            return Vec::new();
        }
        let mut seen = std::collections::BTreeSet::new();
        for iy in iy0..=iy1 as usize {
            for ix in ix0..=ix1 as usize {
                for &t in &self.buckets[iy * self.nx + ix] {
                    seen.insert(t as usize);
                }
            }
        }
        seen.into_iter().collect()
    }
}

// ---------------------------------------------------------------------------
// Structured meshing and the domain dispatcher
// ---------------------------------------------------------------------------

/// Structured mesh of an axis-aligned rectangle with north-east diagonals.
pub fn structured_rect(lo: Pt2, hi: Pt2, nx: usize, ny: usize) -> Result<Mesh> {
    if nx == 0 || ny == 0 {
        return Err(Error::Mesh("structured mesh needs nx, ny >= 1".into()));
    }
    let dx = (hi.x - lo.x) / nx as f64;
    let dy = (hi.y - lo.y) / ny as f64;
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            vertices.push(pt(lo.x + dx * i as f64, lo.y + dy * j as f64));
        }
    }
    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            triangles.push([a, b, c]);
            triangles.push([a, c, d]);
        }
    }
    let mut boundary_edges = Vec::new();
    for i in 0..nx {
        boundary_edges.push(BoundaryEdge {
            v0: id(i, 0),
            v1: id(i + 1, 0),
            marker: 0,
        });
        boundary_edges.push(BoundaryEdge {
            v0: id(i + 1, ny),
            v1: id(i, ny),
            marker: 0,
        });
    }
    for j in 0..ny {
        boundary_edges.push(BoundaryEdge {
            v0: id(nx, j),
            v1: id(nx, j + 1),
            marker: 0,
        });
        boundary_edges.push(BoundaryEdge {
            v0: id(0, j + 1),
            v1: id(0, j),
            marker: 0,
        });
    }
    Mesh::new(vertices, triangles, boundary_edges)
}

fn as_axis_aligned_rect(domain: &PlanarDomain) -> Option<(Pt2, Pt2)> {
    if domain.boundary.len() != 4 {
        return None;
    }
    let b = &domain.boundary;
    let axis = (0..4).all(|i| {
        let d = b[(i + 1) % 4] - b[i];
        d.x.abs() < 1e-14 || d.y.abs() < 1e-14
    });
    axis.then(|| bbox(b))
}

/// Meshes a planar domain at target size `h`.
///
/// Axis-aligned rectangles get a structured grid (`2 (w/h)(ht/h)`
/// triangles); general polygons go through Delaunay refinement with a
/// 20-degree minimum angle.
pub fn mesh_domain(domain: &PlanarDomain, h: f64) -> Result<Mesh> {
    if !(h > 0.0) {
        return Err(Error::Mesh("mesh size h must be positive".into()));
    }
    let shortest = domain.shortest_edge();
    if h >= shortest {
        return Err(Error::Mesh(format!(
            "h = {h} must be smaller than the shortest polyline edge {shortest:.6}"
        )));
    }
    let mut mesh = if let Some((lo, hi)) = as_axis_aligned_rect(domain) {
        let nx = ((hi.x - lo.x) / h).round().max(1.0) as usize;
        let ny = ((hi.y - lo.y) / h).round().max(1.0) as usize;
        structured_rect(lo, hi, nx, ny)?
    } else {
        super::delaunay::refine_polygon(&domain.boundary, h)?
    };
    mesh.metadata
        .insert("domain".into(), domain.name.clone());
    mesh.metadata.insert("h".into(), format!("{h}"));
    Ok(mesh)
}

// ---------------------------------------------------------------------------
// JSON I/O
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct MeshJson {
    vertices: Vec<[f64; 2]>,
    triangles: Vec<[usize; 3]>,
    boundary: Vec<(usize, usize, u32)>,
    #[serde(default)]
    metadata: std::collections::BTreeMap<String, String>,
}

impl Mesh {
    pub fn to_json(&self) -> Result<String> {
        let doc = MeshJson {
            vertices: self.vertices.iter().map(|p| [p.x, p.y]).collect(),
            triangles: self.triangles.clone(),
            boundary: self
                .boundary_edges
                .iter()
                .map(|e| (e.v0, e.v1, e.marker))
                .collect(),
            metadata: self.metadata.clone(),
        };
        Ok(serde_json::to_string(&doc)?)
    }

    pub fn from_json(s: &str) -> Result<Mesh> {
        let doc: MeshJson = serde_json::from_str(s)?;
        let mut mesh = Mesh::new(
            doc.vertices.iter().map(|p| pt(p[0], p[1])).collect(),
            doc.triangles,
            doc.boundary
                .iter()
                .map(|&(v0, v1, marker)| BoundaryEdge { v0, v1, marker })
                .collect(),
        )?;
        mesh.metadata = doc.metadata;
        Ok(mesh)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Mesh> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::domain::preset_domain;

    #[test]
    fn structured_square_counts() {
        let d = preset_domain("unit-square", 0.0).unwrap();
        let m = mesh_domain(&d, 0.1).unwrap();
        assert_eq!(m.triangles.len(), 2 * 10 * 10);
        assert_eq!(m.vertices.len(), 11 * 11);
        assert!((m.total_area() - 1.0).abs() < 1e-12);
        assert!(m.min_angle_deg() > 44.9);
    }

    #[test]
    fn oversized_h_rejected() {
        let d = preset_domain("unit-square", 0.0).unwrap();
        assert!(mesh_domain(&d, 1.5).is_err());
    }

    #[test]
    fn locate_and_barycentric() {
        let d = preset_domain("unit-square", 0.0).unwrap();
        let m = mesh_domain(&d, 0.25).unwrap();
        let p = pt(0.33, 0.71);
        let t = m.locate(p).unwrap();
        let l = m.barycentric(t, p);
        assert!(l.iter().all(|&v| v >= -1e-12));
        assert!((l.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(m.locate(pt(1.5, 0.5)).is_none());
    }

    #[test]
    fn json_roundtrip() {
        let d = preset_domain("unit-square", 0.0).unwrap();
        let m = mesh_domain(&d, 0.25).unwrap();
        let s = m.to_json().unwrap();
        let back = Mesh::from_json(&s).unwrap();
        assert_eq!(back.triangles, m.triangles);
        assert_eq!(back.boundary_edges.len(), m.boundary_edges.len());
        assert!((back.h - m.h).abs() < 1e-15);
    }
}
