//! The Biot–Savart evaluator: sweep the precomputed ray fan around every
//! evaluation point, trace each ray against the mesh, and accumulate the
//! fan-weighted chord integrals. Also hosts the direct volume-quadrature
//! oracle used to validate the fan method.
//!
//! The per-cell inner loop ([`accumulate_cell`]) is generic over
//! [`Scalar`], which admits only +, −, ×, ÷, negation, and comparisons:
//! square roots and trigonometry are impossible to call there, so the
//! per-ray arithmetic budget holds by construction. All trigonometric work
//! lives in the fan tables, built once in [`crate::quadrature`].

use crate::error::OracleError;
use crate::geometry::{barycentric, signed_volume, tet_segment};
use crate::mesh::TetMesh;
use crate::quadrature::QuadFan;
use crate::scalar::{add3, cross3, dot3, scale3, sub3, Scalar};
use crate::vec3::Vec3;
use std::time::{Duration, Instant};

/// One evaluation point, optionally tagged with the mesh node it coincides
/// with. The tag is an index identity, not a geometric test: it switches the
/// ray tracer to the exact self-node rule for cells containing that node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPoint {
    pub position: Vec3,
    pub node: Option<usize>,
}

impl EvalPoint {
    /// A point with no node identity.
    pub const fn free(position: Vec3) -> Self {
        EvalPoint { position, node: None }
    }

    /// The mesh node `i`, tagged with its index.
    pub fn at_node(mesh: &TetMesh, i: usize) -> Self {
        EvalPoint { position: mesh.nodes[i], node: Some(i) }
    }
}

impl From<Vec3> for EvalPoint {
    fn from(position: Vec3) -> Self {
        EvalPoint::free(position)
    }
}

/// Every mesh node as a tagged evaluation point — the dominant use case.
pub fn eval_points_at_nodes(mesh: &TetMesh) -> Vec<EvalPoint> {
    (0..mesh.nodes.len()).map(|i| EvalPoint::at_node(mesh, i)).collect()
}

/// A velocity evaluation job.
#[derive(Clone)]
pub struct EvalRequest<'a> {
    pub mesh: &'a TetMesh,
    pub points: &'a [EvalPoint],
    pub fan: &'a QuadFan,
    /// Squared distance below which the cell skip test is disabled.
    /// `None` applies the per-cell default 4·h2; `Some(x)` (x > 0) overrides
    /// globally.
    pub r_min2: Option<f64>,
    /// Number of parallel workers (≥ 1). Work is partitioned over cells in
    /// fixed contiguous blocks; each worker owns private accumulators and
    /// exactly one merge happens at the end.
    pub workers: usize,
    /// With `true`, accumulation is organized in fixed-size cell chunks
    /// whose partial sums are merged in a fixed ascending order, so results
    /// are bit-identical across runs *and across worker counts* (at the
    /// cost of one partial velocity buffer per chunk). With `false`, each
    /// worker keeps a single accumulator and the merge is ascending by
    /// worker index: stable for a fixed worker count, cheaper in memory,
    /// but not comparable across different worker counts.
    pub deterministic: bool,
}

/// Velocities aligned with the request's points.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityField {
    pub velocities: Vec<Vec3>,
}

/// Cells per deterministic accumulation chunk. Fixed (never derived from
/// the worker count) so chunk boundaries — and therefore rounding — do not
/// move when the worker count changes.
const DET_CHUNK: usize = 256;

/// Fan tables flattened for the generic kernel, ring-major like
/// [`QuadFan`].
#[derive(Debug, Clone)]
pub struct FanKernel<S> {
    pub n_theta: usize,
    pub dirs: Vec<[S; 3]>,
    pub weights: Vec<S>,
    pub sin2_phi: Vec<S>,
    pub cos2_phi: Vec<S>,
}

impl<S: Scalar> FanKernel<S> {
    pub fn from_fan(fan: &QuadFan) -> Self {
        FanKernel {
            n_theta: fan.n_theta,
            dirs: fan
                .dirs
                .iter()
                .map(|d| [S::from_f64(d.x), S::from_f64(d.y), S::from_f64(d.z)])
                .collect(),
            weights: fan.weights.iter().map(|&w| S::from_f64(w)).collect(),
            sin2_phi: fan.sin2_phi.iter().map(|&v| S::from_f64(v)).collect(),
            cos2_phi: fan.cos2_phi.iter().map(|&v| S::from_f64(v)).collect(),
        }
    }
}

/// One cell's data, ready for the generic kernel.
#[derive(Debug, Clone)]
pub struct CellData<S> {
    pub verts: [[S; 3]; 4],
    pub vorts: [[S; 3]; 4],
    pub node_ids: [usize; 4],
    pub h2: S,
    pub r_min2: S,
}

impl CellData<f64> {
    fn gather(mesh: &TetMesh, t: usize, r_min2: Option<f64>) -> Self {
        let vs = mesh.cell_vertices(t);
        let ws = mesh.cell_vorticities(t);
        let h2 = mesh.tets[t].h2;
        CellData {
            verts: [vs[0].to_array(), vs[1].to_array(), vs[2].to_array(), vs[3].to_array()],
            vorts: [ws[0].to_array(), ws[1].to_array(), ws[2].to_array(), ws[3].to_array()],
            node_ids: mesh.tets[t].nodes,
            h2,
            r_min2: r_min2.unwrap_or(4.0 * h2),
        }
    }
}

/// Signed chord integral of dir×ω over one segment, split at the ray
/// origin: the two half-lines of a fan direction enter the velocity with
/// opposite sign (the unit separation vector flips across the evaluation
/// point). ω varies linearly from `w0` at `r0` to `w1` at `r1`, so each
/// half is integrated exactly by its midpoint value.
#[inline]
pub fn oriented_segment_velocity<S: Scalar>(
    dir: [S; 3],
    r0: S,
    r1: S,
    w0: [S; 3],
    w1: [S; 3],
) -> [S; 3] {
    let half = S::from_f64(0.5);
    if r0 >= S::zero() {
        scale3(cross3(dir, add3(w0, w1)), half * (r1 - r0))
    } else if r1 <= S::zero() {
        scale3(cross3(dir, add3(w0, w1)), -(half * (r1 - r0)))
    } else {
        // Straddling segment: interpolate ω at the origin and integrate the
        // two halves with their signs. ½·r0·(w0+wm) is negative-signed via
        // r0 < 0 itself.
        let t = -r0 / (r1 - r0);
        let wm = add3(w0, scale3(sub3(w1, w0), t));
        let fwd = scale3(add3(wm, w1), half * r1);
        let bwd = scale3(add3(w0, wm), half * r0);
        cross3(dir, add3(fwd, bwd))
    }
}

/// Accumulate one cell's contribution to every (point, ray) pair:
/// `acc[p] += Σ_rays k · oriented chord integral`. This is the solver's
/// entire inner loop, generic over the restricted [`Scalar`] arithmetic.
///
/// Skip logic, cheapest first: a per-(cell, point) feasibility check, a
/// per-ring rejection bound (Cauchy–Schwarz over the ring's azimuths,
/// using the precomputed sin²φ/cos²φ), then the per-ray squared-dot test,
/// and only then the four triangle intersections.
pub fn accumulate_cell<S: Scalar>(
    cell: &CellData<S>,
    fan: &FanKernel<S>,
    points: &[[S; 3]],
    point_nodes: &[Option<usize>],
    acc: &mut [[S; 3]],
) {
    let n_phi = fan.sin2_phi.len();
    let n_theta = fan.n_theta;
    let two = S::from_f64(2.0);
    for (pi, &p) in points.iter().enumerate() {
        let self_local = match point_nodes[pi] {
            Some(g) => cell.node_ids.iter().position(|&n| n == g),
            None => None,
        };
        let r = sub3(cell.verts[0], p);
        let r2 = dot3(r, r);
        let margin = r2 - (cell.h2 + cell.h2);
        // When the point is within r_min2 (or the bound is vacuous) no ray
        // may be skipped. Points on the cell's own nodes always land here:
        // r2 ≤ h2 < 2·h2.
        let cullable = r2 > cell.r_min2 && margin > S::zero();
        let rxy2 = r[0] * r[0] + r[1] * r[1];
        let rz2 = r[2] * r[2];
        for n in 0..n_phi {
            if cullable {
                // Ring-level bound: for every azimuth of ring n,
                // (r·ŝ)² ≤ 2·(sin²φ·(rx²+ry²) + cos²φ·rz²); if even the
                // bound is below the margin, the whole ring is skipped.
                let bound = two * (fan.sin2_phi[n] * rxy2 + fan.cos2_phi[n] * rz2);
                if bound < margin {
                    continue;
                }
            }
            for m in 0..n_theta {
                let idx = n * n_theta + m;
                let dir = fan.dirs[idx];
                if cullable {
                    let rs = dot3(r, dir);
                    if rs * rs < margin {
                        continue;
                    }
                }
                if let Some((r0, r1, w0, w1)) =
                    tet_segment(p, dir, &cell.verts, &cell.vorts, cell.h2, self_local)
                {
                    let v = oriented_segment_velocity(dir, r0, r1, w0, w1);
                    acc[pi] = add3(acc[pi], scale3(v, fan.weights[idx]));
                }
            }
        }
    }
}

/// Sum of oriented segment contributions along a single direction: every
/// cell not rejected by the skip test is traced, and cells containing the
/// tagged self node use the origin-anchored segment rule. No fan weights
/// are applied — this is the bare ray integral the fan sum is built from.
pub fn ray_integral(
    point: Vec3,
    self_node: Option<usize>,
    dir: Vec3,
    mesh: &TetMesh,
    r_min2: Option<f64>,
) -> Vec3 {
    let p = point.to_array();
    let d = dir.to_array();
    let mut acc = [0.0f64; 3];
    for t in 0..mesh.tets.len() {
        let cell = CellData::gather(mesh, t, r_min2);
        let self_local = match self_node {
            Some(g) => cell.node_ids.iter().position(|&n| n == g),
            None => None,
        };
        let r = sub3(cell.verts[0], p);
        let r2 = dot3(r, r);
        let margin = r2 - 2.0 * cell.h2;
        if r2 > cell.r_min2 && margin > 0.0 {
            let rs = dot3(r, d);
            if rs * rs < margin {
                continue;
            }
        }
        if let Some((r0, r1, w0, w1)) =
            tet_segment(p, d, &cell.verts, &cell.vorts, cell.h2, self_local)
        {
            acc = add3(acc, oriented_segment_velocity(d, r0, r1, w0, w1));
        }
    }
    Vec3::from_array(acc)
}

/// Contiguous block partition of `n` items over `workers` workers.
fn block_ranges(n: usize, workers: usize) -> Vec<std::ops::Range<usize>> {
    let workers = workers.max(1);
    let base = n / workers;
    let rem = n % workers;
    let mut ranges = Vec::with_capacity(workers);
    let mut lo = 0;
    for w in 0..workers {
        let len = base + usize::from(w < rem);
        ranges.push(lo..lo + len);
        lo += len;
    }
    ranges
}

/// Evaluate the velocity at every request point: v = Σ_cells Σ_rays
/// k_nm · (oriented chord integral), cells partitioned over workers, one
/// merge at the end. Returns the field and the wall time spent inside this
/// call.
///
/// # Panics
/// If `workers == 0` or `r_min2 == Some(x)` with `x ≤ 0`.
pub fn evaluate(req: &EvalRequest) -> (VelocityField, Duration) {
    assert!(req.workers >= 1, "evaluate needs at least one worker");
    if let Some(x) = req.r_min2 {
        assert!(x > 0.0, "r_min2 override must be positive");
    }
    let start = Instant::now();

    let n_pts = req.points.len();
    let n_tets = req.mesh.tets.len();
    if n_pts == 0 || n_tets == 0 {
        return (VelocityField { velocities: vec![Vec3::ZERO; n_pts] }, start.elapsed());
    }

    let fan = FanKernel::<f64>::from_fan(req.fan);
    let points: Vec<[f64; 3]> = req.points.iter().map(|p| p.position.to_array()).collect();
    let point_nodes: Vec<Option<usize>> = req.points.iter().map(|p| p.node).collect();
    let workers = req.workers.min(n_tets).max(1);

    let velocities = if req.deterministic {
        // Fixed-size cell chunks; chunk partials merged in ascending chunk
        // order. Chunk boundaries don't depend on the worker count, so the
        // floating-point sum tree is identical for any `workers`.
        let n_chunks = n_tets.div_ceil(DET_CHUNK);
        let mut partials: Vec<Vec<[f64; 3]>> = vec![vec![[0.0; 3]; n_pts]; n_chunks];
        let per_worker = n_chunks.div_ceil(workers);
        std::thread::scope(|s| {
            for (g, group) in partials.chunks_mut(per_worker).enumerate() {
                let fan = &fan;
                let points = &points;
                let point_nodes = &point_nodes;
                s.spawn(move || {
                    for (ci, acc) in group.iter_mut().enumerate() {
                        let chunk = g * per_worker + ci;
                        let lo = chunk * DET_CHUNK;
                        let hi = (lo + DET_CHUNK).min(n_tets);
                        for t in lo..hi {
                            let cell = CellData::gather(req.mesh, t, req.r_min2);
                            accumulate_cell(&cell, fan, points, point_nodes, acc);
                        }
                    }
                });
            }
        });
        let mut vel = vec![Vec3::ZERO; n_pts];
        for acc in &partials {
            for (v, a) in vel.iter_mut().zip(acc) {
                *v += Vec3::from_array(*a);
            }
        }
        vel
    } else {
        // One private accumulator per worker over a contiguous cell block;
        // merged ascending by worker index.
        let ranges = block_ranges(n_tets, workers);
        let mut worker_accs: Vec<Vec<[f64; 3]>> = Vec::with_capacity(workers);
        std::thread::scope(|s| {
            let handles: Vec<_> = ranges
                .into_iter()
                .map(|range| {
                    let fan = &fan;
                    let points = &points;
                    let point_nodes = &point_nodes;
                    s.spawn(move || {
                        let mut acc = vec![[0.0f64; 3]; n_pts];
                        for t in range {
                            let cell = CellData::gather(req.mesh, t, req.r_min2);
                            accumulate_cell(&cell, fan, points, point_nodes, &mut acc);
                        }
                        acc
                    })
                })
                .collect();
            for h in handles {
                worker_accs.push(h.join().expect("solver worker panicked"));
            }
        });
        let mut vel = vec![Vec3::ZERO; n_pts];
        for acc in &worker_accs {
            for (v, a) in vel.iter_mut().zip(acc) {
                *v += Vec3::from_array(*a);
            }
        }
        vel
    };

    debug_assert!(velocities.iter().all(|v| v.is_finite()));
    (VelocityField { velocities }, start.elapsed())
}

/// Direct evaluation of the Biot–Savart volume integral by recursive
/// subdivision: each cell splits into 8 sub-cells `subdivisions` times
/// (corner cells plus an octahedron cut along a fixed diagonal), then a
/// midpoint rule is applied per leaf with the linearly interpolated ω.
/// Converges O(h²) in leaf size. Only valid at points strictly outside
/// every cell — inside or on a boundary the integrand is singular and the
/// call fails, by design.
pub fn brute_force_velocity(
    point: Vec3,
    mesh: &TetMesh,
    subdivisions: u32,
) -> Result<Vec3, OracleError> {
    for t in 0..mesh.tets.len() {
        let verts = mesh.cell_vertices(t);
        if let Some(l) = barycentric(point, &verts) {
            if l.iter().all(|&x| x >= -1e-12) {
                return Err(OracleError::SingularPoint { tet: t });
            }
        }
    }
    let mut v = Vec3::ZERO;
    for t in 0..mesh.tets.len() {
        v += subdivided_field(
            point,
            &mesh.cell_vertices(t),
            &mesh.cell_vorticities(t),
            subdivisions,
        );
    }
    Ok(v)
}

fn subdivided_field(p: Vec3, verts: &[Vec3; 4], vorts: &[Vec3; 4], depth: u32) -> Vec3 {
    if depth == 0 {
        let c = (verts[0] + verts[1] + verts[2] + verts[3]) / 4.0;
        let w = (vorts[0] + vorts[1] + vorts[2] + vorts[3]) / 4.0;
        let vol = signed_volume(verts).abs();
        let r = p - c;
        let rho = r.norm();
        return r.cross(w) * (-vol / (4.0 * std::f64::consts::PI * rho.powi(3)));
    }
    let mid = |i: usize, j: usize| ((verts[i] + verts[j]) * 0.5, (vorts[i] + vorts[j]) * 0.5);
    let (m01, w01) = mid(0, 1);
    let (m02, w02) = mid(0, 2);
    let (m03, w03) = mid(0, 3);
    let (m12, w12) = mid(1, 2);
    let (m13, w13) = mid(1, 3);
    let (m23, w23) = mid(2, 3);

    let mut v = Vec3::ZERO;
    // Four corner cells.
    v += subdivided_field(p, &[verts[0], m01, m02, m03], &[vorts[0], w01, w02, w03], depth - 1);
    v += subdivided_field(p, &[verts[1], m01, m12, m13], &[vorts[1], w01, w12, w13], depth - 1);
    v += subdivided_field(p, &[verts[2], m02, m12, m23], &[vorts[2], w02, w12, w23], depth - 1);
    v += subdivided_field(p, &[verts[3], m03, m13, m23], &[vorts[3], w03, w13, w23], depth - 1);
    // Central octahedron, cut along the m01–m23 diagonal into four cells
    // around its equator square m02, m12, m13, m03.
    let eq = [(m02, w02), (m12, w12), (m13, w13), (m03, w03)];
    for i in 0..4 {
        let (a, wa) = eq[i];
        let (b, wb) = eq[(i + 1) % 4];
        v += subdivided_field(p, &[m01, m23, a, b], &[w01, w23, wa, wb], depth - 1);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::max_edge_sq;
    use crate::mesh::lattice_mesh;
    use crate::quadrature::{build_fan, gauss_legendre};
    use approx::assert_abs_diff_eq;

    fn unit_tet_mesh(w: Vec3) -> TetMesh {
        let mut mesh = TetMesh::new(
            vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(0.0, 1.0, 0.0),
                Vec3::new(0.0, 0.0, 1.0),
            ],
            vec![[0, 1, 2, 3]],
        )
        .unwrap();
        mesh.set_vorticity(|_| w);
        mesh
    }

    #[test]
    fn ray_integral_single_cell_hand_value() {
        let mesh = unit_tet_mesh(Vec3::new(0.0, 0.0, 1.0));
        let v =
            ray_integral(Vec3::new(-1.0, 0.25, 0.25), None, Vec3::new(1.0, 0.0, 0.0), &mesh, None);
        assert_abs_diff_eq!((v - Vec3::new(0.0, -0.5, 0.0)).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn ray_integral_miss_is_zero() {
        let mesh = unit_tet_mesh(Vec3::new(0.0, 0.0, 1.0));
        let v = ray_integral(Vec3::new(5.0, 5.0, 5.0), None, Vec3::new(0.0, 0.0, 1.0), &mesh, None);
        assert_eq!(v, Vec3::ZERO);
    }

    #[test]
    fn ray_integral_continuous_across_shared_face() {
        // Two cells sharing the face (1,0,0),(0,1,0),(0,0,1); a ray through
        // both must integrate like the single chord across the union.
        let mut mesh = TetMesh::new(
            vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(0.0, 1.0, 0.0),
                Vec3::new(0.0, 0.0, 1.0),
                Vec3::new(1.0, 1.0, 1.0),
            ],
            vec![[0, 1, 2, 3], [1, 2, 3, 4]],
        )
        .unwrap();
        let w = Vec3::new(0.3, -0.2, 1.0);
        mesh.set_vorticity(|_| w);

        let origin = Vec3::new(-1.0, 0.35, 0.35);
        let dir = Vec3::new(1.0, 0.0, 0.0);
        let ray = crate::geometry::Ray::new(origin, dir);

        let verts0 = mesh.cell_vertices(0);
        let verts1 = mesh.cell_vertices(1);
        let seg0 =
            crate::geometry::ray_tet_intersect(&ray, &verts0, &[w; 4], max_edge_sq(&verts0), None)
                .expect("first cell");
        let seg1 =
            crate::geometry::ray_tet_intersect(&ray, &verts1, &[w; 4], max_edge_sq(&verts1), None)
                .expect("second cell");
        assert_abs_diff_eq!(seg0.r1, seg1.r0, epsilon = 1e-12);

        let total = ray_integral(origin, None, dir, &mesh, None);
        let union = 0.5 * (seg1.r1 - seg0.r0) * dir.cross(w + w);
        assert_abs_diff_eq!((total - union).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn oriented_matches_plain_contribution_for_forward_segments() {
        let dir = Vec3::new(0.0, 1.0, 0.0);
        let (r0, r1) = (0.5, 2.25);
        let w0 = Vec3::new(0.1, 0.2, 0.3);
        let w1 = Vec3::new(-0.3, 0.4, 0.0);
        let seg = crate::geometry::TetSegment { r0, r1, w0, w1 };
        let plain = crate::geometry::segment_contribution(&seg, dir);
        let oriented = Vec3::from_array(oriented_segment_velocity(
            dir.to_array(),
            r0,
            r1,
            w0.to_array(),
            w1.to_array(),
        ));
        assert_abs_diff_eq!((plain - oriented).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn oriented_segment_matches_gauss_quadrature() {
        // The chord value must equal ∫ sign(s)·dir×ω(s) ds for linear ω,
        // including segments straddling the origin.
        let rule = gauss_legendre(10).unwrap();
        let dir = Vec3::new(0.36, -0.48, 0.8); // unit
        assert_abs_diff_eq!(dir.norm(), 1.0, epsilon = 1e-12);
        let w0 = Vec3::new(0.7, 0.1, -0.4);
        let w1 = Vec3::new(-0.2, 0.9, 0.5);
        for (r0, r1) in [(0.5, 2.0), (-2.0, -0.5), (-1.0, 1.5), (-0.7, 0.2)] {
            let oriented = Vec3::from_array(oriented_segment_velocity(
                dir.to_array(),
                r0,
                r1,
                w0.to_array(),
                w1.to_array(),
            ));
            // Gauss integration of the signed integrand over [r0, r1],
            // split at 0 so each panel is smooth.
            let mut exact = Vec3::ZERO;
            for (lo, hi) in [(r0, r1.min(0.0)), (r0.max(0.0), r1)] {
                if hi <= lo {
                    continue;
                }
                let sign = if hi <= 0.0 { -1.0 } else { 1.0 };
                let mid = 0.5 * (lo + hi);
                let half = 0.5 * (hi - lo);
                for (&t, &wq) in rule.nodes.iter().zip(&rule.weights) {
                    let s = mid + half * t;
                    let u = (s - r0) / (r1 - r0);
                    let w = w0 + u * (w1 - w0);
                    exact += sign * wq * half * dir.cross(w);
                }
            }
            assert_abs_diff_eq!((oriented - exact).norm(), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn evaluate_empty_mesh_returns_zeros() {
        let mesh = TetMesh::new(vec![], vec![]).unwrap();
        let fan = build_fan(4, 4).unwrap();
        let points = [EvalPoint::free(Vec3::new(1.0, 2.0, 3.0))];
        let (field, _) = evaluate(&EvalRequest {
            mesh: &mesh,
            points: &points,
            fan: &fan,
            r_min2: None,
            workers: 1,
            deterministic: true,
        });
        assert_eq!(field.velocities, vec![Vec3::ZERO]);
    }

    #[test]
    fn evaluate_bit_identical_across_worker_counts() {
        let mut mesh = lattice_mesh(Vec3::new(-1.0, -1.0, -1.0), Vec3::new(1.0, 1.0, 1.0), 3);
        mesh.set_vorticity(|p| Vec3::new(p.y, -p.x, 0.25 * p.z));
        let fan = build_fan(6, 6).unwrap();
        let points: Vec<EvalPoint> =
            (0..mesh.nodes.len()).step_by(7).map(|i| EvalPoint::at_node(&mesh, i)).collect();
        let run = |workers| {
            evaluate(&EvalRequest {
                mesh: &mesh,
                points: &points,
                fan: &fan,
                r_min2: None,
                workers,
                deterministic: true,
            })
            .0
        };
        let v1 = run(1);
        let v8 = run(8);
        let v3 = run(3);
        assert_eq!(v1, v8, "1 vs 8 workers must agree bit-for-bit");
        assert_eq!(v1, v3, "1 vs 3 workers must agree bit-for-bit");
    }

    #[test]
    fn evaluate_is_linear_in_vorticity() {
        let mut mesh = lattice_mesh(Vec3::new(-1.0, -1.0, -1.0), Vec3::new(1.0, 1.0, 1.0), 2);
        let field_a = |p: Vec3| Vec3::new(p.y, -p.x, 0.0);
        let field_b = |p: Vec3| Vec3::new(0.2, p.z, p.x * p.y);
        let fan = build_fan(4, 4).unwrap();
        let points = [
            EvalPoint::free(Vec3::new(0.31, -0.17, 0.05)),
            EvalPoint::free(Vec3::new(2.5, 0.4, -0.3)),
        ];
        let mut run = |f: &dyn Fn(Vec3) -> Vec3| {
            mesh.set_vorticity(f);
            evaluate(&EvalRequest {
                mesh: &mesh,
                points: &points,
                fan: &fan,
                r_min2: None,
                workers: 2,
                deterministic: true,
            })
            .0
            .velocities
        };
        let va = run(&field_a);
        let vb = run(&field_b);
        let vsum = run(&|p| field_a(p) + field_b(p));
        let vscaled = run(&|p| field_a(p) * -2.5);
        for i in 0..points.len() {
            let scale = va[i].norm().max(vb[i].norm()).max(1e-300);
            assert!(((va[i] + vb[i]) - vsum[i]).norm() <= 1e-12 * scale.max(vsum[i].norm()));
            assert!((va[i] * -2.5 - vscaled[i]).norm() <= 1e-12 * (2.5 * scale));
        }
    }

    #[test]
    fn brute_force_zero_vorticity_is_zero() {
        let mesh = unit_tet_mesh(Vec3::ZERO);
        let v = brute_force_velocity(Vec3::new(3.0, 0.0, 0.0), &mesh, 2).unwrap();
        assert_eq!(v, Vec3::ZERO);
    }

    #[test]
    fn brute_force_subdivision_converges() {
        let mesh = unit_tet_mesh(Vec3::new(0.0, 0.0, 1.0));
        let p = Vec3::new(2.0, 0.3, 0.4);
        let v4 = brute_force_velocity(p, &mesh, 4).unwrap();
        let v5 = brute_force_velocity(p, &mesh, 5).unwrap();
        assert!((v4 - v5).norm() / v5.norm() < 0.01, "v4={v4:?} v5={v5:?}");
    }

    #[test]
    fn brute_force_antisymmetry_under_point_reflection() {
        let mesh = unit_tet_mesh(Vec3::new(0.1, 0.7, -0.2));
        let p = Vec3::new(1.5, 1.0, -0.5);
        let v = brute_force_velocity(p, &mesh, 3).unwrap();

        // Reflect the whole configuration through the origin; ω is a
        // pseudovector but Eq-parity here follows from r → −r with ω fixed.
        let mut reflected = TetMesh::new(
            vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(-1.0, 0.0, 0.0),
                Vec3::new(0.0, -1.0, 0.0),
                Vec3::new(0.0, 0.0, -1.0),
            ],
            vec![[0, 1, 2, 3]],
        )
        .unwrap();
        reflected.set_vorticity(|_| Vec3::new(0.1, 0.7, -0.2));
        let vr = brute_force_velocity(-p, &reflected, 3).unwrap();
        assert_abs_diff_eq!((v + vr).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn brute_force_rejects_interior_and_boundary_points() {
        let mesh = unit_tet_mesh(Vec3::new(0.0, 0.0, 1.0));
        assert!(matches!(
            brute_force_velocity(Vec3::new(0.1, 0.1, 0.1), &mesh, 2),
            Err(OracleError::SingularPoint { tet: 0 })
        ));
        // On a vertex and on a face: still singular.
        assert!(brute_force_velocity(Vec3::ZERO, &mesh, 2).is_err());
        assert!(brute_force_velocity(Vec3::new(0.25, 0.25, 0.0), &mesh, 2).is_err());
    }

    #[test]
    fn block_ranges_cover_everything_once() {
        for (n, w) in [(10, 3), (7, 7), (5, 9), (0, 2), (100, 1)] {
            let ranges = block_ranges(n, w);
            let mut covered = vec![false; n];
            for r in ranges {
                for i in r {
                    assert!(!covered[i]);
                    covered[i] = true;
                }
            }
            assert!(covered.into_iter().all(|c| c));
        }
    }
}
