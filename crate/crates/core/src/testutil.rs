//! Shared helpers for unit tests.

use rand::{Rng, SeedableRng};

use crate::mesh::{Point, PolytopalMesh};

/// Randomly displaces every vertex not on the boundary of the unit square by up to
/// `amount * h` in each coordinate, keeping the topology. Panics if an element folds.
pub fn jittered(mesh: &PolytopalMesh, seed: u64, amount: f64) -> PolytopalMesh {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let h = mesh.h() / std::f64::consts::SQRT_2;
    let vertices = mesh
        .vertices
        .iter()
        .map(|&[x, y]| {
            let on_boundary = x == 0.0 || x == 1.0 || y == 0.0 || y == 1.0;
            if on_boundary {
                [x, y]
            } else {
                [x + amount * h * rng.random_range(-1.0..1.0), y + amount * h * rng.random_range(-1.0..1.0)]
            }
        })
        .collect();
    let loops = mesh.elements.iter().map(|t| t.vertices.clone()).collect();
    let mut m = PolytopalMesh::from_loops(vertices, loops, mesh.level).unwrap();
    m.family = mesh.family;
    assert!(m.validate().is_empty());
    for t in 0..m.num_elements() {
        assert!(is_simple(&m.element_coords(t)), "jitter {amount} folded element {t}");
    }
    m
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// True when no two non-adjacent edges of the closed polygon intersect.
pub fn is_simple(pts: &[Point]) -> bool {
    let n = pts.len();
    for i in 0..n {
        for j in i + 1..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (a, b, c, d) = (pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]);
            let straddles = |p: f64, q: f64| (p > 0.0) != (q > 0.0);
            if straddles(cross(a, b, c), cross(a, b, d)) && straddles(cross(c, d, a), cross(c, d, b)) {
                return false;
            }
        }
    }
    true
}
