//! Spherical vortex with linearly varying azimuthal vorticity: ω_θ = A·r
//! inside a sphere of radius `a`, zero outside. The classical steady
//! solution with a known analytic velocity field — the workhorse accuracy
//! reference, since the solver's Biot–Savart sum can be compared against it
//! pointwise.

use crate::vec3::Vec3;

/// Frame convention for the velocity field.
///
/// A Biot–Savart integral of the vorticity alone produces the flow in the
/// frame where the fluid is at rest far away; there the vortex translates
/// along +z at [`HillVortex::translation_speed`]. The vortex-fixed frame
/// subtracts that translation, making the sphere a steady streamline
/// surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HillFrame {
    /// Fluid at rest at infinity (what the vorticity field induces). This
    /// is the frame the solver's output lives in.
    #[default]
    RestAtInfinity,
    /// Co-moving with the vortex: rest-frame velocity minus the uniform
    /// translation along z.
    VortexFixed,
}

/// The spherical vortex: vorticity amplitude gradient `amplitude` (units
/// circulation/length³), sphere radius `radius`, and the frame the
/// velocity is reported in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HillVortex {
    pub amplitude: f64,
    pub radius: f64,
    pub frame: HillFrame,
}

impl HillVortex {
    /// A vortex in the rest-at-infinity frame.
    pub fn new(amplitude: f64, radius: f64) -> Self {
        assert!(radius > 0.0, "vortex radius must be positive");
        HillVortex { amplitude, radius, frame: HillFrame::RestAtInfinity }
    }

    /// Self-induced translation speed along +z: U = 2·A·a²/15.
    pub fn translation_speed(&self) -> f64 {
        2.0 * self.amplitude * self.radius * self.radius / 15.0
    }

    /// Vorticity at `p`: A·(−y, x, 0) inside the sphere (azimuthal, with
    /// magnitude A·√(x²+y²)), zero outside.
    pub fn vorticity(&self, p: Vec3) -> Vec3 {
        if p.norm2() <= self.radius * self.radius {
            Vec3::new(-p.y, p.x, 0.0) * self.amplitude
        } else {
            Vec3::ZERO
        }
    }

    /// Velocity at `p` in the configured frame.
    ///
    /// Interior (|p| ≤ a), in cylindrical components about z:
    /// u_r = A·r·z/5 and u_z = (A/5)·((5/3)a² − 2r² − z²). Exterior: the
    /// potential dipole that matches the interior on the sphere and decays
    /// to rest at infinity. Both branches agree on |p| = a.
    pub fn velocity(&self, p: Vec3) -> Vec3 {
        let a2 = self.radius * self.radius;
        let r2 = p.x * p.x + p.y * p.y;
        let rho2 = r2 + p.z * p.z;
        let fifth = self.amplitude / 5.0;

        let (u_r_over_r, u_z) = if rho2 <= a2 {
            // u_r/r is regular on the axis; carrying it avoids a division
            // by r when converting to Cartesian components.
            (fifth * p.z, fifth * ((5.0 / 3.0) * a2 - 2.0 * r2 - p.z * p.z))
        } else {
            let u = self.translation_speed();
            let a3 = a2 * self.radius;
            let rho5 = rho2 * rho2 * rho2.sqrt();
            (1.5 * u * a3 * p.z / rho5, 0.5 * u * a3 * (2.0 * p.z * p.z - r2) / rho5)
        };

        let mut v = Vec3::new(u_r_over_r * p.x, u_r_over_r * p.y, u_z);
        if self.frame == HillFrame::VortexFixed {
            v.z -= self.translation_speed();
        }
        v
    }
}
