//! Axisymmetric vortex ring with a Gaussian core, and a tabulated reference
//! velocity field for it.
//!
//! The ring carries azimuthal vorticity
//! ω_θ(r, z) = Γ/(2πσ²)·exp(−ρ²/(2σ²)), where ρ is the in-plane distance
//! from the core circle (radius R at z = 0), σ the core radius, and Γ the
//! total circulation. There is no closed form for its velocity, so the
//! reference field is built numerically: the core is decomposed into a fine
//! grid of circular filaments, each filament's Stokes stream function is
//! evaluated from complete elliptic integrals, and the velocity follows by
//! differencing ψ on a grid:
//!
//!   ψ_fil(r, z; r′, z′) = √(r·r′)/(2π)·[(2/k − k)·K(m) − (2/k)·E(m)],
//!   m = k² = 4·r·r′/((r + r′)² + (z − z′)²),
//!   u_r = −(1/r)·∂ψ/∂z,  u_z = (1/r)·∂ψ/∂r.
//!
//! The resulting table answers point queries by bilinear interpolation and
//! serves as the ground truth for the ring convergence study.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use crate::error::ReferenceError;
use crate::mesh::{ring_tube_mesh, TetMesh};
use crate::reference::elliptic::elliptic_ke;
use crate::vec3::Vec3;

/// Effective distance of a square source cell seen from its own center,
/// as a fraction of the cell side: exp(mean of ln|x| over the cell) with
/// the mean value −ln(side) − 1.0612… When a grid node falls closer than
/// this to a filament, the filament's log-singular stream function is
/// evaluated at this distance instead, which reproduces the cell-averaged
/// kernel a midpoint rule is meant to sample.
const CELL_EFFECTIVE_DISTANCE: f64 = 0.346;

/// A vortex ring of radius `ring_radius` centered on the z axis at z = 0,
/// with a Gaussian vorticity core of radius `core_radius` and total
/// circulation `circulation`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianRing {
    pub ring_radius: f64,
    pub core_radius: f64,
    pub circulation: f64,
}

impl GaussianRing {
    pub fn new(ring_radius: f64, core_radius: f64, circulation: f64) -> Self {
        assert!(ring_radius > 0.0, "ring radius must be positive");
        assert!(core_radius > 0.0, "core radius must be positive");
        assert!(core_radius < ring_radius, "core radius must be smaller than the ring radius");
        GaussianRing { ring_radius, core_radius, circulation }
    }

    /// Azimuthal vorticity at cylindrical position (r, z). Peaks at
    /// Γ/(2πσ²) on the core circle and decays like a Gaussian in the
    /// in-plane distance from it; integrating it over a meridional plane
    /// recovers the circulation.
    pub fn vorticity_theta(&self, r: f64, z: f64) -> f64 {
        let s2 = self.core_radius * self.core_radius;
        let dr = r - self.ring_radius;
        let rho2 = dr * dr + z * z;
        self.circulation / (2.0 * PI * s2) * (-0.5 * rho2 / s2).exp()
    }

    /// Vorticity vector at a point: azimuthal direction (−y, x, 0)/r times
    /// [`Self::vorticity_theta`]. Zero on the axis, where the azimuthal
    /// direction is undefined (and the vorticity magnitude negligible for
    /// any core thinner than the ring).
    pub fn vorticity(&self, p: Vec3) -> Vec3 {
        let r = (p.x * p.x + p.y * p.y).sqrt();
        if r < 1e-14 * self.ring_radius {
            return Vec3::ZERO;
        }
        let w = self.vorticity_theta(r, p.z);
        Vec3::new(-p.y / r, p.x / r, 0.0) * w
    }
}

/// One rectangular grid patch of the velocity table in the (r, z) plane.
/// Velocities are tabulated on the interior nodes (the outermost ring of
/// nodes only carries the stream function needed for differencing), so
/// queries must stay one spacing inside the bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridZone {
    pub r_min: f64,
    pub r_max: f64,
    pub z_min: f64,
    pub z_max: f64,
    /// Node counts along r and z; spacing is (max − min)/(n − 1).
    pub nr: usize,
    pub nz: usize,
}

impl GridZone {
    pub fn dr(&self) -> f64 {
        (self.r_max - self.r_min) / (self.nr - 1) as f64
    }

    pub fn dz(&self) -> f64 {
        (self.z_max - self.z_min) / (self.nz - 1) as f64
    }

    pub fn node_r(&self, i: usize) -> f64 {
        self.r_min + i as f64 * self.dr()
    }

    pub fn node_z(&self, j: usize) -> f64 {
        self.z_min + j as f64 * self.dz()
    }

    /// Whether (r, z) lies in the region covered by interior nodes, where
    /// bilinear interpolation of the tabulated velocity is possible.
    pub fn queryable(&self, r: f64, z: f64) -> bool {
        let pad_r = self.dr() * (1.0 - 1e-9);
        let pad_z = self.dz() * (1.0 - 1e-9);
        r >= self.r_min + pad_r
            && r <= self.r_max - pad_r
            && z >= self.z_min + pad_z
            && z <= self.z_max - pad_z
    }

    fn validate(&self) -> Result<(), ReferenceError> {
        let bounds = [self.r_min, self.r_max, self.z_min, self.z_max];
        if !bounds.iter().all(|v| v.is_finite()) {
            return Err(ReferenceError::InvalidParameter("grid zone bounds must be finite".into()));
        }
        if self.r_min < 0.0 {
            return Err(ReferenceError::InvalidParameter(format!(
                "grid zone radial range starts at {}, but radii are non-negative",
                self.r_min
            )));
        }
        if self.r_max <= self.r_min || self.z_max <= self.z_min {
            return Err(ReferenceError::InvalidParameter(
                "grid zone bounds must have positive extent".into(),
            ));
        }
        if self.nr < 4 || self.nz < 4 {
            return Err(ReferenceError::InvalidParameter(format!(
                "grid zone needs at least 4 nodes per direction for interior \
                 differencing and interpolation, got {}x{}",
                self.nr, self.nz
            )));
        }
        Ok(())
    }
}

/// Recipe for building a [`RingVelocityTable`]: the grid zones to tabulate
/// (earlier zones win where they overlap) and the filament decomposition of
/// the core — filaments on a staggered square grid of the given spacing,
/// kept while within `source_extent` of the core circle.
#[derive(Debug, Clone, PartialEq)]
pub struct RingTableSpec {
    pub zones: Vec<GridZone>,
    pub source_spacing: f64,
    pub source_extent: f64,
}

impl RingTableSpec {
    /// Default two-zone layout: a fine grid (spacing σ/16) over the core
    /// region within 4.5σ of the core circle, and a coarse grid (spacing
    /// R/25) out to 4R for the surrounding flow. Filaments are spaced σ/12
    /// and kept within 4.5σ of the core circle, which captures all but
    /// ~4·10⁻⁵ of the circulation.
    pub fn standard(ring: &GaussianRing) -> Self {
        let s = ring.core_radius;
        let rr = ring.ring_radius;
        let half = 4.5 * s;

        let core_r_min = (rr - half).max(0.0);
        let core_r_max = rr + half;
        let core_step = s / 16.0;
        let nr = ((core_r_max - core_r_min) / core_step).round() as usize + 1;
        let nz = (2.0 * half / core_step).round() as usize + 1;
        let core =
            GridZone { r_min: core_r_min, r_max: core_r_max, z_min: -half, z_max: half, nr, nz };

        let far_extent = 4.0 * rr;
        let far_step = rr / 25.0;
        let far = GridZone {
            r_min: 0.0,
            r_max: far_extent,
            z_min: -far_extent,
            z_max: far_extent,
            nr: (far_extent / far_step).round() as usize + 1,
            nz: (2.0 * far_extent / far_step).round() as usize + 1,
        };

        RingTableSpec { zones: vec![core, far], source_spacing: s / 12.0, source_extent: half }
    }
}

struct ZoneTable {
    zone: GridZone,
    /// Radial and axial velocity on the full node grid, r-major
    /// (index i·nz + j); only interior nodes are populated.
    u_r: Vec<f64>,
    u_z: Vec<f64>,
}

/// Tabulated ring velocity in the (r, z) half-plane, queryable by bilinear
/// interpolation inside its zones.
pub struct RingVelocityTable {
    ring: GaussianRing,
    zones: Vec<ZoneTable>,
}

/// Stream function of a unit-circulation circular filament through
/// (r′, z′), evaluated at (r, z). `d2_floor` bounds the squared in-plane
/// distance from below to regularize the log singularity on the filament
/// itself.
fn filament_stream(r: f64, z: f64, rp: f64, zp: f64, d2_floor: f64) -> f64 {
    let dz = z - zp;
    let denom = (r + rp) * (r + rp) + dz * dz;
    let dr = r - rp;
    let d2 = (dr * dr + dz * dz).max(d2_floor);
    let m = 1.0 - d2 / denom;
    if m <= 0.0 {
        return 0.0;
    }
    let (kk, ee) = elliptic_ke(m);
    let k = m.sqrt();
    (r * rp).sqrt() / (2.0 * PI) * ((2.0 / k - k) * kk - (2.0 / k) * ee)
}

impl RingVelocityTable {
    /// Builds the table for `ring` per `spec`. Cost scales with
    /// (grid nodes) × (filaments); the standard spec takes seconds.
    // Validation must reject NaN parameters: `!(x > y)` is true for NaN
    // where the suggested `x <= y` is false and would let NaN through.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn build(ring: &GaussianRing, spec: &RingTableSpec) -> Result<Self, ReferenceError> {
        if spec.zones.is_empty() {
            return Err(ReferenceError::InvalidParameter("table spec has no grid zones".into()));
        }
        if !(spec.source_spacing > 0.0) || !spec.source_spacing.is_finite() {
            return Err(ReferenceError::InvalidParameter(format!(
                "source spacing must be positive and finite, got {}",
                spec.source_spacing
            )));
        }
        if !(spec.source_extent > spec.source_spacing) {
            return Err(ReferenceError::InvalidParameter(format!(
                "source extent {} must exceed the source spacing {}",
                spec.source_extent, spec.source_spacing
            )));
        }
        for zone in &spec.zones {
            zone.validate()?;
        }

        // Filament decomposition of the core: midpoints of a square grid
        // staggered about the core circle, each weighted by the local
        // vorticity times its cell area. Staggering keeps the set exactly
        // symmetric in z.
        let ds = spec.source_spacing;
        let extent2 = spec.source_extent * spec.source_extent;
        let n_half = (spec.source_extent / ds).ceil() as i64 + 1;
        let mut sources: Vec<(f64, f64, f64)> = Vec::new();
        for i in -n_half..n_half {
            for j in -n_half..n_half {
                let rp = ring.ring_radius + (i as f64 + 0.5) * ds;
                let zp = (j as f64 + 0.5) * ds;
                let dr = rp - ring.ring_radius;
                if dr * dr + zp * zp > extent2 || rp <= 0.0 {
                    continue;
                }
                sources.push((rp, zp, ring.vorticity_theta(rp, zp) * ds * ds));
            }
        }
        let d2_floor = {
            let d = CELL_EFFECTIVE_DISTANCE * ds;
            d * d
        };

        let zones = spec
            .zones
            .iter()
            .map(|&zone| {
                let (nr, nz) = (zone.nr, zone.nz);
                let mut psi = vec![0.0; nr * nz];
                // The source set is symmetric in z, so for a z-symmetric
                // zone the stream function of the lower half mirrors to the
                // upper half; this also makes the tabulated velocity
                // exactly symmetric.
                let symmetric =
                    (zone.z_min + zone.z_max).abs() <= 1e-12 * (zone.z_max - zone.z_min);
                for i in 0..nr {
                    let r = zone.node_r(i);
                    for j in 0..nz {
                        if symmetric && 2 * j >= nz {
                            psi[i * nz + j] = psi[i * nz + (nz - 1 - j)];
                            continue;
                        }
                        let z = zone.node_z(j);
                        if r <= 0.0 {
                            continue;
                        }
                        let mut sum = 0.0;
                        for &(rp, zp, w) in &sources {
                            sum += w * filament_stream(r, z, rp, zp, d2_floor);
                        }
                        psi[i * nz + j] = sum;
                    }
                }

                let mut u_r = vec![0.0; nr * nz];
                let mut u_z = vec![0.0; nr * nz];
                let (two_dr, two_dz) = (2.0 * zone.dr(), 2.0 * zone.dz());
                for i in 1..nr - 1 {
                    let r = zone.node_r(i);
                    for j in 1..nz - 1 {
                        let idx = i * nz + j;
                        u_r[idx] = -(psi[idx + 1] - psi[idx - 1]) / (two_dz * r);
                        u_z[idx] = (psi[(i + 1) * nz + j] - psi[(i - 1) * nz + j]) / (two_dr * r);
                    }
                }
                ZoneTable { zone, u_r, u_z }
            })
            .collect();

        Ok(RingVelocityTable { ring: *ring, zones })
    }

    pub fn ring(&self) -> &GaussianRing {
        &self.ring
    }

    /// Radial and axial velocity at (r, z), from the first zone that covers
    /// the point.
    pub fn velocity_rz(&self, r: f64, z: f64) -> Result<(f64, f64), ReferenceError> {
        for zt in &self.zones {
            if !zt.zone.queryable(r, z) {
                continue;
            }
            let (nr, nz) = (zt.zone.nr, zt.zone.nz);
            let fi = (r - zt.zone.r_min) / zt.zone.dr();
            let fj = (z - zt.zone.z_min) / zt.zone.dz();
            let i0 = (fi.floor() as i64).clamp(1, nr as i64 - 3) as usize;
            let j0 = (fj.floor() as i64).clamp(1, nz as i64 - 3) as usize;
            let (tr, tz) = (fi - i0 as f64, fj - j0 as f64);
            let lerp2 = |g: &[f64]| {
                let g00 = g[i0 * nz + j0];
                let g01 = g[i0 * nz + j0 + 1];
                let g10 = g[(i0 + 1) * nz + j0];
                let g11 = g[(i0 + 1) * nz + j0 + 1];
                (g00 * (1.0 - tr) + g10 * tr) * (1.0 - tz) + (g01 * (1.0 - tr) + g11 * tr) * tz
            };
            return Ok((lerp2(&zt.u_r), lerp2(&zt.u_z)));
        }
        Err(ReferenceError::OutOfRange { r, z })
    }

    /// Velocity vector at a point, rotating the (u_r, u_z) answer into
    /// Cartesian components.
    pub fn velocity(&self, p: Vec3) -> Result<Vec3, ReferenceError> {
        let r = (p.x * p.x + p.y * p.y).sqrt();
        let (u_r, u_z) = self.velocity_rz(r, p.z)?;
        if r < 1e-14 * self.ring.ring_radius {
            return Ok(Vec3::new(0.0, 0.0, u_z));
        }
        Ok(Vec3::new(u_r * p.x / r, u_r * p.y / r, u_z))
    }

    /// Writes every tabulated interior node as a `r,z,ur,uz` CSV row.
    pub fn write_csv(&self, path: &Path) -> std::io::Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "r,z,ur,uz")?;
        for zt in &self.zones {
            let nz = zt.zone.nz;
            for i in 1..zt.zone.nr - 1 {
                for j in 1..nz - 1 {
                    writeln!(
                        out,
                        "{},{},{},{}",
                        zt.zone.node_r(i),
                        zt.zone.node_z(j),
                        zt.u_r[i * nz + j],
                        zt.u_z[i * nz + j]
                    )?;
                }
            }
        }
        out.flush()
    }
}

/// One resolution step of the ring convergence study: azimuthal station
/// count and nodes per cross-section side for the tube mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RingStudyPreset {
    pub name: &'static str,
    pub n_az: usize,
    pub k: usize,
}

/// Coarse-to-fine mesh resolutions for the convergence study.
pub const RING_PRESETS: [RingStudyPreset; 3] = [
    RingStudyPreset { name: "low", n_az: 16, k: 4 },
    RingStudyPreset { name: "medium", n_az: 24, k: 6 },
    RingStudyPreset { name: "high", n_az: 32, k: 8 },
];

impl RingStudyPreset {
    /// Builds the tube mesh around the ring's core circle at this preset's
    /// resolution and samples the ring's vorticity at its nodes.
    /// `half_width` is the tube's cross-section half-side, typically a few
    /// core radii.
    pub fn tube_mesh(&self, ring: &GaussianRing, half_width: f64) -> TetMesh {
        let mut mesh = ring_tube_mesh(ring.ring_radius, half_width, self.n_az, self.k);
        mesh.set_vorticity(|p| ring.vorticity(p));
        mesh
    }
}
