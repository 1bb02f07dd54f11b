//! Ray–tetrahedron geometry: triangle intersection, segment extraction,
//! and the conservative skip test used before tracing.
//!
//! The intersection kernels are generic over [`Scalar`] so the solver's
//! per-ray arithmetic budget (no square roots, no trigonometry) is enforced
//! by the type system; see [`crate::scalar`]. Concrete `f64` wrappers with
//! [`Vec3`] signatures are provided for ordinary use.

use crate::scalar::{add3, cross3, dot3, scale3, sub3, Scalar};
use crate::vec3::Vec3;

/// Triangle-plane determinant threshold: rays with |det| below this are
/// treated as parallel to the face and miss it. The companion faces of a
/// tetrahedron still produce a complete 0-or-2 hit set.
pub const DET_EPS: f64 = 1e-12;

/// Barycentric edge tolerance: hits with u or v within this of an edge are
/// kept, so grazing rays register on both adjacent faces and deduplicate.
pub const UV_TOL: f64 = 1e-10;

/// Duplicate-hit tolerance on the ray parameter, relative to the cell
/// diameter: hits with |t_i − t_j| below `DEDUP_TOL·diam` count as one.
pub const DEDUP_TOL: f64 = 1e-9;

/// The four faces of a tetrahedron by local vertex index.
pub const TET_FACES: [[usize; 3]; 4] = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];

/// A line in space: `origin + t · direction`. The solver always passes unit
/// directions so `t` is an arc length; the intersection routines themselves
/// only require `direction` to be nonzero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    pub origin: Vec3,
    pub direction: Vec3,
}

impl Ray {
    #[inline]
    pub const fn new(origin: Vec3, direction: Vec3) -> Self {
        Ray { origin, direction }
    }

    /// Point at parameter `t`.
    #[inline]
    pub fn at(&self, t: f64) -> Vec3 {
        self.origin + t * self.direction
    }
}

/// Intersection of a line with a triangle: ray parameter `t` (sign
/// preserved — hits behind the origin report negative `t`) and area
/// coordinates `(u, v)` with the hit point `(1−u−v)a + u·b + v·c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriHit {
    pub t: f64,
    pub u: f64,
    pub v: f64,
}

/// The chord a line cuts through one tetrahedron: entry/exit ray parameters
/// `r0 ≤ r1` and the vorticity interpolated at each end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetSegment {
    pub r0: f64,
    pub r1: f64,
    pub w0: Vec3,
    pub w1: Vec3,
}

/// Two-sided Möller–Trumbore on raw scalar arrays.
///
/// Returns `(t, u, v)` for the unique line/triangle intersection, or `None`
/// when the line is parallel to the triangle's plane (|det| < [`DET_EPS`])
/// or the hit falls outside the triangle beyond [`UV_TOL`]. Negative `t` is
/// reported, never culled. Square-root free.
#[inline]
pub fn tri_intersect<S: Scalar>(
    origin: [S; 3],
    dir: [S; 3],
    a: [S; 3],
    b: [S; 3],
    c: [S; 3],
) -> Option<(S, S, S)> {
    let e1 = sub3(b, a);
    let e2 = sub3(c, a);
    let p = cross3(dir, e2);
    let det = dot3(e1, p);
    // |det| test done on the square to avoid needing an abs on S.
    if det * det < S::from_f64(DET_EPS * DET_EPS) {
        return None;
    }
    let inv = S::one() / det;
    let tv = sub3(origin, a);
    let u = dot3(tv, p) * inv;
    let tol = S::from_f64(UV_TOL);
    if u < -tol {
        return None;
    }
    let q = cross3(tv, e1);
    let v = dot3(dir, q) * inv;
    if v < -tol || u + v > S::one() + tol {
        return None;
    }
    let t = dot3(e2, q) * inv;
    Some((t, u, v))
}

/// [`tri_intersect`] with `Vec3` signatures.
pub fn ray_triangle_intersect(ray: &Ray, a: Vec3, b: Vec3, c: Vec3) -> Option<TriHit> {
    tri_intersect(
        ray.origin.to_array(),
        ray.direction.to_array(),
        a.to_array(),
        b.to_array(),
        c.to_array(),
    )
    .map(|(t, u, v)| TriHit { t, u, v })
}

/// Conservative pre-trace skip test on raw scalar arrays.
///
/// `r` is the vector from the evaluation point to a representative vertex
/// of the cell, `h2` the squared cell diameter, `r_min2` the squared
/// distance below which culling is disabled. Returns `true` when the line
/// through the evaluation point along `dir` provably cannot meet the cell:
/// |r|² > r_min2 and (r·dir)² < |r|² − 2·h2. Direction-sign-blind (the
/// squared dot product), matching a trace that walks both half-lines.
#[inline]
// The negated comparisons are load-bearing: a cull is only allowed when the
// inequality provably holds, so NaN (every comparison false) must fall
// through to "keep the cell", never to "skip" — `!(a > b)` does that,
// `a <= b` would not.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn cull_test<S: Scalar>(r: [S; 3], dir: [S; 3], h2: S, r_min2: S) -> bool {
    let r2 = dot3(r, r);
    if !(r2 > r_min2) {
        return false;
    }
    let margin = r2 - (h2 + h2);
    if !(margin > S::zero()) {
        return false;
    }
    let rs = dot3(r, dir);
    rs * rs < margin
}

/// [`cull_test`] with `Vec3` signatures: `r = vertex − eval_point`.
pub fn tet_cull(eval_point: Vec3, dir: Vec3, vertex: Vec3, h2: f64, r_min2: f64) -> bool {
    cull_test((vertex - eval_point).to_array(), dir.to_array(), h2, r_min2)
}

/// Chord extraction on raw scalar arrays.
///
/// Tests the four faces, deduplicates hits closer than
/// [`DEDUP_TOL`]·diameter along the ray (edge/vertex grazing reports the
/// same point on adjacent faces), and returns `(r0, r1, w0, w1)` with
/// `r0 ≤ r1` and the vorticity interpolated at each end from the face's
/// area coordinates.
///
/// `self_node` is the local vertex index (0..4) when the ray origin *is*
/// that mesh node (established by index, not by geometry). With exactly one
/// distinct hit and a self node, the segment runs from the origin (`t = 0`,
/// carrying the node's own vorticity) to the hit; without a self node a
/// single distinct hit is grazing contact and yields `None`.
#[inline]
pub fn tet_segment<S: Scalar>(
    origin: [S; 3],
    dir: [S; 3],
    verts: &[[S; 3]; 4],
    vorts: &[[S; 3]; 4],
    h2: S,
    self_node: Option<usize>,
) -> Option<(S, S, [S; 3], [S; 3])> {
    let mut ts = [S::zero(); 4];
    let mut ws = [[S::zero(); 3]; 4];
    let mut n = 0usize;
    for f in TET_FACES {
        if let Some((t, u, v)) = tri_intersect(origin, dir, verts[f[0]], verts[f[1]], verts[f[2]]) {
            let s = S::one() - u - v;
            let w =
                add3(add3(scale3(vorts[f[0]], s), scale3(vorts[f[1]], u)), scale3(vorts[f[2]], v));
            ts[n] = t;
            ws[n] = w;
            n += 1;
        }
    }
    if n == 0 {
        return None;
    }
    // Insertion sort by t over at most 4 entries.
    for i in 1..n {
        let mut j = i;
        while j > 0 && ts[j] < ts[j - 1] {
            ts.swap(j, j - 1);
            ws.swap(j, j - 1);
            j -= 1;
        }
    }
    // Cluster hits whose parameters agree within DEDUP_TOL·diameter,
    // keeping the first of each cluster (squared compare: sqrt-free).
    let tol2 = S::from_f64(DEDUP_TOL * DEDUP_TOL) * h2;
    let mut keep = [0usize; 4];
    let mut m = 1usize;
    for i in 1..n {
        let d = ts[i] - ts[keep[m - 1]];
        if d * d >= tol2 {
            keep[m] = i;
            m += 1;
        }
    }
    if m >= 2 {
        let (first, last) = (keep[0], keep[m - 1]);
        return Some((ts[first], ts[last], ws[first], ws[last]));
    }
    if let Some(k) = self_node {
        let t = ts[keep[0]];
        let w_hit = ws[keep[0]];
        let w_node = vorts[k];
        return Some(if t >= S::zero() {
            (S::zero(), t, w_node, w_hit)
        } else {
            (t, S::zero(), w_hit, w_node)
        });
    }
    None
}

/// [`tet_segment`] with `Vec3` signatures. `h2` is the squared maximum edge
/// length of the cell ([`max_edge_sq`], cached on meshes).
pub fn ray_tet_intersect(
    ray: &Ray,
    verts: &[Vec3; 4],
    vorts: &[Vec3; 4],
    h2: f64,
    self_node: Option<usize>,
) -> Option<TetSegment> {
    let va = [verts[0].to_array(), verts[1].to_array(), verts[2].to_array(), verts[3].to_array()];
    let wa = [vorts[0].to_array(), vorts[1].to_array(), vorts[2].to_array(), vorts[3].to_array()];
    tet_segment(ray.origin.to_array(), ray.direction.to_array(), &va, &wa, h2, self_node).map(
        |(r0, r1, w0, w1)| TetSegment {
            r0,
            r1,
            w0: Vec3::from_array(w0),
            w1: Vec3::from_array(w1),
        },
    )
}

/// Midpoint-rule value of the chord integral ŝ×ω over one segment:
/// ½(r1−r0)·(dir × (w0+w1)). Exact when ω varies linearly along the ray.
#[inline]
pub fn segment_contribution(seg: &TetSegment, dir: Vec3) -> Vec3 {
    0.5 * (seg.r1 - seg.r0) * dir.cross(seg.w0 + seg.w1)
}

/// Squared maximum edge length of a tetrahedron (its squared diameter).
pub fn max_edge_sq(verts: &[Vec3; 4]) -> f64 {
    let mut h2 = 0.0f64;
    for i in 0..4 {
        for j in (i + 1)..4 {
            h2 = h2.max((verts[i] - verts[j]).norm2());
        }
    }
    h2
}

/// Signed volume of a tetrahedron: positive when (v1−v0, v2−v0, v3−v0) is a
/// right-handed triple.
#[inline]
pub fn signed_volume(verts: &[Vec3; 4]) -> f64 {
    let e1 = verts[1] - verts[0];
    let e2 = verts[2] - verts[0];
    let e3 = verts[3] - verts[0];
    e1.dot(e2.cross(e3)) / 6.0
}

/// Barycentric coordinates of `p` with respect to a tetrahedron, or `None`
/// when the cell is (numerically) degenerate. The four coordinates sum to 1;
/// all in [0,1] means `p` is inside or on the boundary.
pub fn barycentric(p: Vec3, verts: &[Vec3; 4]) -> Option<[f64; 4]> {
    let e1 = verts[1] - verts[0];
    let e2 = verts[2] - verts[0];
    let e3 = verts[3] - verts[0];
    let det = e1.dot(e2.cross(e3));
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let b = p - verts[0];
    let l1 = b.dot(e2.cross(e3)) / det;
    let l2 = e1.dot(b.cross(e3)) / det;
    let l3 = e1.dot(e2.cross(b)) / det;
    Some([1.0 - l1 - l2 - l3, l1, l2, l3])
}
