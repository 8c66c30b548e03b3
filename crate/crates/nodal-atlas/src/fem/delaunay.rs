//! Delaunay refinement meshing of simple polygons.
//!
//! Bowyer-Watson incremental triangulation with a cavity flood, followed by
//! a Ruppert-style refinement loop: boundary subsegments are split at their
//! midpoints whenever a proposed circumcenter encroaches their diametral
//! circle, otherwise circumcenters of poor-quality or oversized triangles
//! are inserted. Insertions and work queues run in fixed order, so meshes
//! are deterministic for fixed inputs.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::primitives::*;

use super::mesh::{BoundaryEdge, Mesh};

const MIN_ANGLE_DEG: f64 = 20.0;
const MAX_VERTICES: usize = 800_000;

struct Delaunay {
    pts: Vec<Pt2>,
    tris: Vec<[usize; 3]>,
    nbrs: Vec<[i32; 3]>,
    alive: Vec<bool>,
    hint: usize,
    scale: f64,
}

impl Delaunay {
    fn new(bounds: (Pt2, Pt2)) -> Delaunay {
        let (lo, hi) = bounds;
        let c = pt((lo.x + hi.x) / 2.0, (lo.y + hi.y) / 2.0);
        let span = ((hi.x - lo.x).max(hi.y - lo.y)).max(1e-9);
        let r = 20.0 * span;
        // super-triangle well outside the domain
        let pts = vec![
            pt(c.x - 1.8 * r, c.y - r),
            pt(c.x + 1.8 * r, c.y - r),
            pt(c.x, c.y + 1.8 * r),
        ];
        Delaunay {
            pts,
            tris: vec![[0, 1, 2]],
            nbrs: vec![[-1, -1, -1]],
            alive: vec![true],
            hint: 0,
            scale: span,
        }
    }

    #[inline]
    fn edge(&self, t: usize, i: usize) -> (usize, usize) {
        let v = self.tris[t];
        (v[(i + 1) % 3], v[(i + 2) % 3])
    }

    /// Strictly-inside circumcircle test with a relative tolerance; on-circle
    /// points count as outside, which keeps the flood finite.
    fn in_circumcircle(&self, t: usize, p: Pt2) -> bool {
        let [a, b, c] = self.tris[t];
        let (pa, pb, pc) = (self.pts[a], self.pts[b], self.pts[c]);
        let (ax, ay) = (pa.x - p.x, pa.y - p.y);
        let (bx, by) = (pb.x - p.x, pb.y - p.y);
        let (cx, cy) = (pc.x - p.x, pc.y - p.y);
        let (aa, bb, cc) = (ax * ax + ay * ay, bx * bx + by * by, cx * cx + cy * cy);
        let det = ax * (by * cc - bb * cy) - ay * (bx * cc - bb * cx) + aa * (bx * cy - by * cx);
        let mag = ax.abs().max(bx.abs()).max(cx.abs()).max(ay.abs()).max(by.abs()).max(cy.abs());
        det > 1e-11 * mag * mag * mag * mag
    }

    fn walk_to(&self, p: Pt2) -> Option<usize> {
        let eps = 1e-13 * self.scale * self.scale;
        let mut t = if self.alive[self.hint] {
            self.hint
        } else {
            self.alive.iter().position(|&a| a)?
        };
        let mut steps = 0usize;
        let max_steps = 4 * self.tris.len() + 64;
        loop {
            let mut moved = false;
            for i in 0..3 {
                let (a, b) = self.edge(t, i);
                if orient2d(self.pts[a], self.pts[b], p) < -eps {
                    let nb = self.nbrs[t][i];
                    if nb >= 0 {
                        t = nb as usize;
                        moved = true;
                        break;
                    } else {
                        return None; // outside the super-triangle hull
                    }
                }
            }
            if !moved {
                return Some(t);
            }
            steps += 1;
            if steps > max_steps {
                // fall back to a deterministic scan
                return (0..self.tris.len()).find(|&t| {
                    self.alive[t]
                        && (0..3).all(|i| {
                            let (a, b) = self.edge(t, i);
                            orient2d(self.pts[a], self.pts[b], p) >= -eps
                        })
                });
            }
        }
    }

    /// Inserts a point, returning its vertex id, or None when it collides
    /// with an existing vertex.
    fn insert(&mut self, p: Pt2) -> Result<Option<usize>> {
        let t0 = self
            .walk_to(p)
            .ok_or_else(|| Error::MeshRefinement("point left the triangulation".into()))?;
        // vertex collision guard
        for &v in &self.tris[t0] {
            if (self.pts[v] - p).norm() < 1e-12 * self.scale {
                return Ok(None);
            }
        }
        // cavity flood; neighbors across an edge that contains p are always
        // absorbed (near-cocircular configurations can fail the strict
        // circumcircle test even though p sits on the shared edge)
        let mut cavity = vec![t0];
        let mut in_cavity: HashMap<usize, bool> = HashMap::new();
        in_cavity.insert(t0, true);
        let mut stack = vec![t0];
        let on_edge = |a: Pt2, b: Pt2| -> bool {
            let ab = b - a;
            let len = ab.norm();
            if len < 1e-300 {
                return false;
            }
            let dist = orient2d(a, b, p).abs() / len;
            let t = (p - a).dot(&ab) / (len * len);
            dist <= 1e-9 * self.scale && (-1e-9..=1.0 + 1e-9).contains(&t)
        };
        while let Some(t) = stack.pop() {
            for i in 0..3 {
                let nb = self.nbrs[t][i];
                if nb < 0 {
                    continue;
                }
                let nb = nb as usize;
                if in_cavity.contains_key(&nb) {
                    continue;
                }
                let (a, b) = self.edge(t, i);
                if self.in_circumcircle(nb, p) || on_edge(self.pts[a], self.pts[b]) {
                    in_cavity.insert(nb, true);
                    cavity.push(nb);
                    stack.push(nb);
                }
            }
        }
        // cavity boundary: (a, b, outer neighbor)
        let mut boundary: Vec<(usize, usize, i32)> = Vec::new();
        for &t in &cavity {
            for i in 0..3 {
                let nb = self.nbrs[t][i];
                if nb < 0 || !in_cavity.contains_key(&(nb as usize)) {
                    let (a, b) = self.edge(t, i);
                    boundary.push((a, b, nb));
                }
            }
        }
        let eps_area = 1e-13 * self.scale * self.scale;
        for &(a, b, _) in &boundary {
            if orient2d(self.pts[a], self.pts[b], p) <= eps_area {
                return Err(Error::MeshRefinement(
                    "degenerate cavity during point insertion".into(),
                ));
            }
        }
        for &t in &cavity {
            self.alive[t] = false;
        }
        let vid = self.pts.len();
        self.pts.push(p);
        if self.pts.len() > MAX_VERTICES {
            return Err(Error::MeshRefinement("vertex budget exceeded".into()));
        }
        // fan triangles and adjacency
        let mut spoke: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        let base = self.tris.len();
        for (k, &(a, b, outer)) in boundary.iter().enumerate() {
            let t_new = base + k;
            self.tris.push([a, b, vid]);
            self.nbrs.push([-1, -1, -1]);
            self.alive.push(true);
            // edge opposite vid is (a, b): outer neighbor
            self.nbrs[t_new][2] = outer;
            if outer >= 0 {
                let o = outer as usize;
                for i in 0..3 {
                    let (u, w) = self.edge(o, i);
                    if (u == b && w == a) || (u == a && w == b) {
                        self.nbrs[o][i] = t_new as i32;
                    }
                }
            }
            // spokes (vid, a) opposite vertex b (index 1), (b, vid) opposite a (index 0)
            for (key, slot) in [((a.min(vid), a.max(vid)), 1usize), ((b.min(vid), b.max(vid)), 0usize)] {
                if let Some((ot, oslot)) = spoke.remove(&key) {
                    self.nbrs[t_new][slot] = ot as i32;
                    self.nbrs[ot][oslot] = t_new as i32;
                } else {
                    spoke.insert(key, (t_new, slot));
                }
            }
        }
        if !spoke.is_empty() {
            return Err(Error::MeshRefinement("open cavity fan".into()));
        }
        self.hint = base;
        Ok(Some(vid))
    }

    fn circumcenter(&self, t: usize) -> Pt2 {
        let [a, b, c] = self.tris[t];
        let (pa, pb, pc) = (self.pts[a], self.pts[b], self.pts[c]);
        let d = 2.0 * (pa.x * (pb.y - pc.y) + pb.x * (pc.y - pa.y) + pc.x * (pa.y - pb.y));
        let ux = ((pa.x * pa.x + pa.y * pa.y) * (pb.y - pc.y)
            + (pb.x * pb.x + pb.y * pb.y) * (pc.y - pa.y)
            + (pc.x * pc.x + pc.y * pc.y) * (pa.y - pb.y))
            / d;
        let uy = ((pa.x * pa.x + pa.y * pa.y) * (pc.x - pb.x)
            + (pb.x * pb.x + pb.y * pb.y) * (pa.x - pc.x)
            + (pc.x * pc.x + pc.y * pc.y) * (pb.x - pa.x))
            / d;
        pt(ux, uy)
    }

    fn tri_quality(&self, t: usize) -> (f64, f64) {
        let [a, b, c] = self.tris[t];
        let (pa, pb, pc) = (self.pts[a], self.pts[b], self.pts[c]);
        let mut min_angle = f64::INFINITY;
        let mut longest = 0.0_f64;
        for (u, v, w) in [(pa, pb, pc), (pb, pc, pa), (pc, pa, pb)] {
            let e1 = v - u;
            let e2 = w - u;
            longest = longest.max(e1.norm());
            let cosang = (e1.dot(&e2) / (e1.norm() * e2.norm())).clamp(-1.0, 1.0);
            min_angle = min_angle.min(cosang.acos());
        }
        (min_angle.to_degrees(), longest)
    }
}

/// Boundary subsegment bookkeeping with a midpoint grid for encroachment
/// queries (all subsegments have length <= h, so a 3x3 cell neighborhood
/// suffices).
struct Segments {
    list: Vec<(usize, usize)>,
    alive: Vec<bool>,
    grid: HashMap<(i64, i64), Vec<u32>>,
    cell: f64,
}

impl Segments {
    fn new(cell: f64) -> Segments {
        Segments {
            list: Vec::new(),
            alive: Vec::new(),
            grid: HashMap::new(),
            cell,
        }
    }

    fn key(&self, p: Pt2) -> (i64, i64) {
        (
            (p.x / self.cell).floor() as i64,
            (p.y / self.cell).floor() as i64,
        )
    }

    fn push(&mut self, a: usize, b: usize, pts: &[Pt2]) {
        let id = self.list.len() as u32;
        self.list.push((a, b));
        self.alive.push(true);
        let mid = pt((pts[a].x + pts[b].x) / 2.0, (pts[a].y + pts[b].y) / 2.0);
        self.grid.entry(self.key(mid)).or_default().push(id);
    }

    /// Segments whose diametral circle strictly contains `p`.
    fn encroached_by(&self, p: Pt2, pts: &[Pt2]) -> Vec<usize> {
        let (kx, ky) = self.key(p);
        let mut found = Vec::new();
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.grid.get(&(kx + dx, ky + dy)) {
                    for &id in ids {
                        let id = id as usize;
                        if !self.alive[id] {
                            continue;
                        }
                        let (a, b) = self.list[id];
                        let mid = pt((pts[a].x + pts[b].x) / 2.0, (pts[a].y + pts[b].y) / 2.0);
                        let rad = (pts[a] - pts[b]).norm() / 2.0;
                        if (p - mid).norm() < rad * (1.0 - 1e-12) {
                            found.push(id);
                        }
                    }
                }
            }
        }
        found.sort_unstable();
        found.dedup();
        found
    }
}

/// Meshes the interior of a simple CCW polygon with target edge length `h`
/// and a 20-degree minimum-angle goal.
pub fn refine_polygon(polygon: &[Pt2], h: f64) -> Result<Mesh> {
    if polygon.len() < 3 {
        return Err(Error::Mesh("polygon needs >= 3 vertices".into()));
    }
    let tester = PolygonTester::new(polygon);
    let mut dt = Delaunay::new(bbox(polygon));
    let min_seg = h / 128.0;

    // polygon vertices
    let mut vids = Vec::with_capacity(polygon.len());
    for &p in polygon {
        match dt.insert(p)? {
            Some(v) => vids.push(v),
            None => return Err(Error::Mesh("duplicate polygon vertex".into())),
        }
    }
    // pre-split boundary edges to length <= h and register subsegments
    let mut segs = Segments::new(h.max(1e-9));
    let n = polygon.len();
    for i in 0..n {
        let (a, b) = (vids[i], vids[(i + 1) % n]);
        let (pa, pb) = (polygon[i], polygon[(i + 1) % n]);
        let len = (pb - pa).norm();
        let k = (len / h).ceil().max(1.0) as usize;
        let mut prev = a;
        for j in 1..k {
            let t = j as f64 / k as f64;
            let p = pa + (pb - pa) * t;
            if let Some(v) = dt.insert(p)? {
                segs.push(prev, v, &dt.pts);
                prev = v;
            }
        }
        segs.push(prev, b, &dt.pts);
    }

    // refinement queue over triangle ids; new triangles enqueue on creation
    let mut cursor = 0usize;
    let mut rounds = 0usize;
    loop {
        let mut inserted_any = false;
        while cursor < dt.tris.len() {
            let t = cursor;
            cursor += 1;
            if !dt.alive[t] {
                continue;
            }
            let [a, b, c] = dt.tris[t];
            let centroid = pt(
                (dt.pts[a].x + dt.pts[b].x + dt.pts[c].x) / 3.0,
                (dt.pts[a].y + dt.pts[b].y + dt.pts[c].y) / 3.0,
            );
            if !tester.contains(centroid) {
                continue;
            }
            let (min_angle, longest) = dt.tri_quality(t);
            if min_angle >= MIN_ANGLE_DEG && longest <= h {
                continue;
            }
            let cc = dt.circumcenter(t);
            let encroached = segs.encroached_by(cc, &dt.pts);
            if !encroached.is_empty() {
                let mut split_any = false;
                for sid in encroached {
                    let (sa, sb) = segs.list[sid];
                    if (dt.pts[sa] - dt.pts[sb]).norm() <= 2.0 * min_seg {
                        continue;
                    }
                    let mid = pt(
                        (dt.pts[sa].x + dt.pts[sb].x) / 2.0,
                        (dt.pts[sa].y + dt.pts[sb].y) / 2.0,
                    );
                    if let Some(v) = dt.insert(mid)? {
                        segs.alive[sid] = false;
                        segs.push(sa, v, &dt.pts);
                        segs.push(v, sb, &dt.pts);
                        split_any = true;
                        inserted_any = true;
                    }
                }
                if split_any {
                    // revisit this triangle later if it survived
                    if dt.alive[t] {
                        cursor = cursor.min(t);
                    }
                }
                continue;
            }
            if !tester.contains(cc) {
                // circumcenter escaped without encroaching: tiny boundary
                // slivers near sharp corners; leave them
                continue;
            }
            if dt.insert(cc)?.is_some() {
                inserted_any = true;
            }
        }
        // segment recovery: any subsegment missing from the triangulation
        // gets midpoint-split until present
        let mut edge_set: std::collections::HashSet<(usize, usize)> = std::collections::HashSet::new();
        for t in 0..dt.tris.len() {
            if !dt.alive[t] {
                continue;
            }
            for i in 0..3 {
                let (a, b) = dt.edge(t, i);
                edge_set.insert((a.min(b), a.max(b)));
            }
        }
        let mut missing = Vec::new();
        for sid in 0..segs.list.len() {
            if !segs.alive[sid] {
                continue;
            }
            let (a, b) = segs.list[sid];
            if !edge_set.contains(&(a.min(b), a.max(b))) {
                missing.push(sid);
            }
        }
        for sid in missing {
            let (sa, sb) = segs.list[sid];
            if (dt.pts[sa] - dt.pts[sb]).norm() <= 2.0 * min_seg {
                return Err(Error::MeshRefinement(
                    "could not recover a boundary subsegment".into(),
                ));
            }
            let mid = pt(
                (dt.pts[sa].x + dt.pts[sb].x) / 2.0,
                (dt.pts[sa].y + dt.pts[sb].y) / 2.0,
            );
            if let Some(v) = dt.insert(mid)? {
                segs.alive[sid] = false;
                segs.push(sa, v, &dt.pts);
                segs.push(v, sb, &dt.pts);
                inserted_any = true;
            }
        }
        if !inserted_any {
            break;
        }
        cursor = 0;
        rounds += 1;
        if rounds > 64 {
            return Err(Error::MeshRefinement("refinement did not settle".into()));
        }
    }

    // extract interior triangles and compact vertices
    let mut vmap = vec![usize::MAX; dt.pts.len()];
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for t in 0..dt.tris.len() {
        if !dt.alive[t] {
            continue;
        }
        let [a, b, c] = dt.tris[t];
        if a < 3 || b < 3 || c < 3 {
            continue; // touches the super-triangle
        }
        let centroid = pt(
            (dt.pts[a].x + dt.pts[b].x + dt.pts[c].x) / 3.0,
            (dt.pts[a].y + dt.pts[b].y + dt.pts[c].y) / 3.0,
        );
        if !tester.contains(centroid) {
            continue;
        }
        let mut tri = [0usize; 3];
        for (k, &v) in [a, b, c].iter().enumerate() {
            if vmap[v] == usize::MAX {
                vmap[v] = vertices.len();
                vertices.push(dt.pts[v]);
            }
            tri[k] = vmap[v];
        }
        triangles.push(tri);
    }
    let mut boundary_edges = Vec::new();
    for sid in 0..segs.list.len() {
        if !segs.alive[sid] {
            continue;
        }
        let (a, b) = segs.list[sid];
        if vmap[a] != usize::MAX && vmap[b] != usize::MAX {
            boundary_edges.push(BoundaryEdge {
                v0: vmap[a],
                v1: vmap[b],
                marker: 0,
            });
        }
    }
    Mesh::new(vertices, triangles, boundary_edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::domain::preset_domain;

    #[test]
    fn disk_mesh_quality() {
        let d = preset_domain("unit-disk", 0.1).unwrap();
        let m = refine_polygon(&d.boundary, 0.1).unwrap();
        assert!(m.min_angle_deg() >= MIN_ANGLE_DEG - 0.5, "min angle {}", m.min_angle_deg());
        assert!(m.h <= 0.1 + 1e-12, "h = {}", m.h);
        let area = m.total_area();
        assert!(
            (area - std::f64::consts::PI).abs() < 0.02,
            "disk area {area}"
        );
    }

    #[test]
    fn half_disk_mesh() {
        let d = preset_domain("half-disk", 0.08).unwrap();
        let m = refine_polygon(&d.boundary, 0.08).unwrap();
        assert!(m.min_angle_deg() >= MIN_ANGLE_DEG - 0.5);
        assert!((m.total_area() - std::f64::consts::PI / 2.0).abs() < 0.02);
        // boundary vertices trace the input polyline exactly
        for e in &m.boundary_edges {
            for v in [e.v0, e.v1] {
                let p = m.vertices[v];
                let dist = dist_point_polygon_boundary(p, &d.boundary);
                assert!(dist < 1e-12, "boundary vertex {p:?} off the polyline ({dist:.2e})");
            }
        }
    }

    #[test]
    fn hexagon_mesh() {
        let d = preset_domain("ngon-6", 0.1).unwrap();
        let m = refine_polygon(&d.boundary, 0.12).unwrap();
        assert!(m.min_angle_deg() >= MIN_ANGLE_DEG - 0.5);
        let exact = 1.5 * (3.0_f64).sqrt();
        assert!((m.total_area() - exact).abs() < 1e-9);
    }

    #[test]
    fn pathological_domain_meshes() {
        let d = preset_domain("pathological:256", 0.02).unwrap();
        let m = refine_polygon(&d.boundary, 0.03).unwrap();
        assert!(m.min_angle_deg() >= MIN_ANGLE_DEG - 1.0, "min angle {}", m.min_angle_deg());
        assert!(m.total_area() > 0.5);
    }

    #[test]
    fn deterministic_output() {
        let d = preset_domain("unit-disk", 0.15).unwrap();
        let m1 = refine_polygon(&d.boundary, 0.15).unwrap();
        let m2 = refine_polygon(&d.boundary, 0.15).unwrap();
        assert_eq!(m1.triangles, m2.triangles);
        assert_eq!(m1.vertices.len(), m2.vertices.len());
    }
}
