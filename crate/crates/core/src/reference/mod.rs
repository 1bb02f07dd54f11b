//! Reference solutions and error metrics: a spherical vortex with linear
//! azimuthal vorticity ([`hill`]), a Gaussian-core vortex ring evaluated
//! through its stream function ([`ring`]), complete elliptic integrals
//! ([`elliptic`]), and RMS error statistics.

mod elliptic;
mod hill;
mod ring;

pub use elliptic::elliptic_ke;
pub use hill::{HillFrame, HillVortex};
pub use ring::{
    GaussianRing, GridZone, RingStudyPreset, RingTableSpec, RingVelocityTable, RING_PRESETS,
};

use crate::error::ReferenceError;
use crate::vec3::Vec3;

/// Error statistics of a computed velocity set against a reference set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorStats {
    /// RMS error normalized by the reference field's RMS magnitude:
    /// ε = rms(|v − v_ref|) / rms(|v_ref|). Zero reference with zero error
    /// gives 0; zero reference with nonzero error gives +∞.
    pub eps: f64,
    /// Unnormalized RMS error, rms(|v − v_ref|).
    pub rms_abs: f64,
    /// Unnormalized maximum pointwise error, max(|v − v_ref|).
    pub max_abs: f64,
    /// Number of samples compared.
    pub count: usize,
    /// Wall time attributed to the computation being scored, in seconds.
    pub seconds: f64,
}

/// Compare computed velocities against reference values.
///
/// `seconds` is carried through into the stats (pass 0.0 when timing is not
/// of interest). Errors if the slices have different lengths or are empty.
pub fn rms_error(
    computed: &[Vec3],
    reference: &[Vec3],
    seconds: f64,
) -> Result<ErrorStats, ReferenceError> {
    if computed.len() != reference.len() {
        return Err(ReferenceError::LengthMismatch {
            computed: computed.len(),
            reference: reference.len(),
        });
    }
    if computed.is_empty() {
        return Err(ReferenceError::InvalidParameter("rms_error needs at least one sample".into()));
    }
    let n = computed.len() as f64;
    let mut sum_err2 = 0.0;
    let mut sum_ref2 = 0.0;
    let mut max_abs = 0.0f64;
    for (&c, &r) in computed.iter().zip(reference) {
        let e2 = (c - r).norm2();
        sum_err2 += e2;
        sum_ref2 += r.norm2();
        max_abs = max_abs.max(e2.sqrt());
    }
    let rms_abs = (sum_err2 / n).sqrt();
    let v_scale = (sum_ref2 / n).sqrt();
    let eps = if v_scale > 0.0 {
        rms_abs / v_scale
    } else if rms_abs == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(ErrorStats { eps, rms_abs, max_abs, count: computed.len(), seconds })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_match_is_zero() {
        let v = vec![Vec3::new(1.0, 2.0, 3.0), Vec3::new(-0.5, 0.0, 0.25)];
        let stats = rms_error(&v, &v, 1.5).unwrap();
        assert_eq!(stats.eps, 0.0);
        assert_eq!(stats.max_abs, 0.0);
        assert_eq!(stats.count, 2);
        assert_eq!(stats.seconds, 1.5);
    }

    #[test]
    fn doubled_field_has_unit_normalized_error() {
        let reference = vec![Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, -2.0, 1.0)];
        let computed: Vec<Vec3> = reference.iter().map(|&v| v * 2.0).collect();
        let stats = rms_error(&computed, &reference, 0.0).unwrap();
        assert!((stats.eps - 1.0).abs() < 1e-15);
        assert!(stats.rms_abs <= stats.max_abs);
    }

    #[test]
    fn single_point_against_unit_scale() {
        let reference = vec![Vec3::new(1.0, 0.0, 0.0)];
        let computed = vec![Vec3::new(1.0, 0.1, 0.0)];
        let stats = rms_error(&computed, &reference, 0.0).unwrap();
        assert!((stats.eps - 0.1).abs() < 1e-15);
        assert!((stats.max_abs - 0.1).abs() < 1e-15);
    }

    #[test]
    fn zero_reference_handling() {
        let zeros = vec![Vec3::ZERO; 3];
        assert_eq!(rms_error(&zeros, &zeros, 0.0).unwrap().eps, 0.0);
        let off = vec![Vec3::new(0.1, 0.0, 0.0); 3];
        assert!(rms_error(&off, &zeros, 0.0).unwrap().eps.is_infinite());
    }

    #[test]
    fn length_mismatch_rejected() {
        let a = vec![Vec3::ZERO; 2];
        let b = vec![Vec3::ZERO; 3];
        assert!(matches!(
            rms_error(&a, &b, 0.0),
            Err(ReferenceError::LengthMismatch { computed: 2, reference: 3 })
        ));
    }
}
