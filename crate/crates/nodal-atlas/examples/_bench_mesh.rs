use nodal_atlas::fem::mesh_domain;
use nodal_atlas::geometry::domain::preset_domain;
use std::time::Instant;

fn main() {
    for (name, h) in [
        ("unit-disk", 0.02-0.0),
        ("unit-disk", 0.005),
        ("half-disk", 0.004),
        ("pathological", 0.0125),
        ("ngon-6", 0.02),
    ] {
        let t0 = Instant::now();
        let d = preset_domain(name, h).unwrap();
        let m = mesh_domain(&d, h).unwrap();
        println!(
            "{name} h={h}: {} verts {} tris, min angle {:.2} deg, area {:.6}, built in {:.2?}",
            m.vertices.len(),
            m.triangles.len(),
            m.min_angle_deg(),
            m.total_area(),
            t0.elapsed()
        );
    }
}
