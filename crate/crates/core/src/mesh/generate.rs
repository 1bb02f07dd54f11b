//! Self-contained mesh generators: axis-aligned lattices, a
//! sphere-conforming ball, a periodic tube around a circle, and seeded
//! random point clouds. These cover the test geometries without an
//! external mesher.

use super::TetMesh;
use crate::vec3::Vec3;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The six monotone vertex paths splitting a cube into tetrahedra that
/// share the main diagonal (Kuhn subdivision). Applying the same table to
/// every cell keeps shared-face diagonals consistent across neighbors.
const KUHN_PATHS: [[usize; 3]; 6] =
    [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Emit the six Kuhn tetrahedra of one topological cube. `corner` is the
/// low corner in lattice coordinates and `id` maps lattice coordinates to
/// node indices.
fn kuhn_cells(corner: [usize; 3], id: &impl Fn([usize; 3]) -> usize, out: &mut Vec<[usize; 4]>) {
    let far = [corner[0] + 1, corner[1] + 1, corner[2] + 1];
    for path in KUHN_PATHS {
        let mut a = corner;
        a[path[0]] += 1;
        let mut b = a;
        b[path[1]] += 1;
        out.push([id(corner), id(a), id(b), id(far)]);
    }
}

/// Regular lattice mesh of the box `[min, max]` with `n` cells per axis:
/// (n+1)³ nodes, 6n³ tetrahedra tiling the box exactly.
///
/// # Panics
/// If `n == 0` or any `max` component is not greater than `min`.
pub fn lattice_mesh(min: Vec3, max: Vec3, n: usize) -> TetMesh {
    assert!(n >= 1, "lattice_mesh needs at least one cell per axis");
    assert!(
        max.x > min.x && max.y > min.y && max.z > min.z,
        "lattice_mesh needs a box with positive extent"
    );
    let np = n + 1;
    let id = |c: [usize; 3]| (c[0] * np + c[1]) * np + c[2];
    let mut nodes = Vec::with_capacity(np * np * np);
    for i in 0..np {
        for j in 0..np {
            for k in 0..np {
                let f = |lo: f64, hi: f64, q: usize| lo + (hi - lo) * (q as f64 / n as f64);
                nodes.push(Vec3::new(f(min.x, max.x, i), f(min.y, max.y, j), f(min.z, max.z, k)));
            }
        }
    }
    let mut cells = Vec::with_capacity(6 * n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                kuhn_cells([i, j, k], &id, &mut cells);
            }
        }
    }
    TetMesh::new(nodes, cells).expect("lattice cells are nondegenerate by construction")
}

/// Sphere-conforming ball mesh: the cube lattice `[−1,1]³` with `n` cells
/// per axis, warped radially by p ↦ radius·(‖p‖_∞/‖p‖₂)·p, which maps the
/// cube's concentric shells onto spheres. Every boundary node lands exactly
/// on the sphere of the given radius, interior cells stay well-shaped, and
/// the tetrahedra inherit the lattice's consistent subdivision.
///
/// # Panics
/// If `radius ≤ 0` or `n == 0`.
pub fn ball_mesh(radius: f64, n: usize) -> TetMesh {
    assert!(radius > 0.0, "ball_mesh needs a positive radius");
    assert!(n >= 1, "ball_mesh needs at least one cell per axis");
    let cube = lattice_mesh(Vec3::new(-1.0, -1.0, -1.0), Vec3::new(1.0, 1.0, 1.0), n);
    let nodes = cube
        .nodes
        .iter()
        .map(|&p| {
            let linf = p.x.abs().max(p.y.abs()).max(p.z.abs());
            let l2 = p.norm();
            if l2 == 0.0 {
                Vec3::ZERO
            } else {
                p * (radius * linf / l2)
            }
        })
        .collect();
    let cells = cube.tets.iter().map(|t| t.nodes).collect();
    TetMesh::new(nodes, cells).expect("radial warp keeps lattice cells nondegenerate")
}

/// Periodic tube mesh around the circle of radius `ring_radius` in the
/// z = 0 plane: `n_az` azimuthal stations, each carrying a `k`×`k` grid of
/// nodes spanning `±half_width` in the radial and axial directions, joined
/// into hexahedra and Kuhn-split into 6 tetrahedra each (6·n_az·(k−1)²
/// cells). Suited to compactly supported azimuthal vorticity such as a
/// Gaussian-core ring.
///
/// # Panics
/// If `n_az < 3`, `k < 2`, `half_width ≤ 0`, or the tube would reach the
/// axis (`half_width ≥ ring_radius`).
pub fn ring_tube_mesh(ring_radius: f64, half_width: f64, n_az: usize, k: usize) -> TetMesh {
    assert!(n_az >= 3, "ring_tube_mesh needs at least 3 azimuthal stations");
    assert!(k >= 2, "ring_tube_mesh needs at least 2 nodes across the tube");
    assert!(half_width > 0.0, "ring_tube_mesh needs a positive half_width");
    assert!(
        half_width < ring_radius,
        "tube reaches the axis: half_width must be below ring_radius"
    );
    let mut nodes = Vec::with_capacity(n_az * k * k);
    for s in 0..n_az {
        let alpha = 2.0 * std::f64::consts::PI * s as f64 / n_az as f64;
        let (sin_a, cos_a) = alpha.sin_cos();
        for i in 0..k {
            let xi = -half_width + 2.0 * half_width * i as f64 / (k - 1) as f64;
            let r = ring_radius + xi;
            for j in 0..k {
                let zeta = -half_width + 2.0 * half_width * j as f64 / (k - 1) as f64;
                nodes.push(Vec3::new(r * cos_a, r * sin_a, zeta));
            }
        }
    }
    // Topological cubes: azimuth (periodic) × radial × axial.
    let id = |c: [usize; 3]| ((c[0] % n_az) * k + c[1]) * k + c[2];
    let mut cells = Vec::with_capacity(6 * n_az * (k - 1) * (k - 1));
    for s in 0..n_az {
        for i in 0..(k - 1) {
            for j in 0..(k - 1) {
                kuhn_cells([s, i, j], &id, &mut cells);
            }
        }
    }
    TetMesh::new(nodes, cells).expect("tube cells are nondegenerate by construction")
}

/// `count` points uniform in the ball of the given radius, by rejection
/// sampling from the bounding cube; deterministic per seed.
///
/// # Panics
/// If `count == 0` or `radius ≤ 0`.
pub fn random_ball_points(count: usize, radius: f64, seed: u64) -> Vec<Vec3> {
    assert!(count >= 1, "random_ball_points needs count >= 1");
    assert!(radius > 0.0, "random_ball_points needs a positive radius");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(count);
    while points.len() < count {
        let p = Vec3::new(
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        );
        if p.norm2() <= 1.0 {
            points.push(p * radius);
        }
    }
    points
}

/// Up to `cap` distinct node indices of `mesh`, drawn without replacement
/// by a seeded shuffle and returned in ascending order; deterministic per
/// seed. Generated meshes list their nodes in lattice order, so a regular
/// stride through them aliases onto fixed planes of the lattice (e.g. only
/// boundary shells); a randomized subsample stays representative at any
/// cap.
///
/// # Panics
/// If `cap == 0`.
pub fn sample_node_ids(mesh: &TetMesh, cap: usize, seed: u64) -> Vec<usize> {
    assert!(cap >= 1, "sample_node_ids needs cap >= 1");
    let mut ids: Vec<usize> = (0..mesh.nodes.len()).collect();
    ids.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    ids.truncate(cap.min(mesh.nodes.len()));
    ids.sort_unstable();
    ids
}
