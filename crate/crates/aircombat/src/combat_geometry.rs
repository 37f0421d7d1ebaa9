//! Relative engagement geometry and the normalized observation vector.
//!
//! All quantities are role-relative: `relative_geometry(own, opp)` describes
//! the engagement from `own`'s seat, which decouples the policy from the
//! absolute position of the pair. The line of sight (LOS) runs from own
//! aircraft to the opponent.
//!
//! Conventions:
//! - ATA (antenna train angle): 3D angle between own velocity and the LOS;
//!   zero when the nose points at the opponent.
//! - AA (aspect angle): 3D angle between the opponent's velocity and the LOS;
//!   zero when the opponent flies directly away (dead six).
//! - Plane projections are signed angles from the first vector to the second,
//!   right-handed about the plane normal (Z for XOY, X for YOZ). A projection
//!   degenerates when either vector is normal to the plane; the angle is then
//!   reported as zero and the geometry is flagged.

use crate::flight_dynamics::{AircraftParams, UcavState};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// AA/ATA, their plane projections, and the line-of-sight distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelativeGeometry {
    /// 3D antenna train angle, rad, in [0, pi].
    pub ata: f64,
    /// 3D aspect angle, rad, in [0, pi].
    pub aa: f64,
    /// Signed projections, rad, in (-pi, pi].
    pub ata_xoy: f64,
    pub ata_yoz: f64,
    pub aa_xoy: f64,
    pub aa_yoz: f64,
    /// Line-of-sight distance, m.
    pub d_los: f64,
    /// True when any plane projection was degenerate and substituted by zero.
    pub degenerate: bool,
}

/// The normalized 11-entry observation vector, in order:
/// `[ata_xoy, ata_yoz, aa_xoy, aa_yoz] / 2pi`, `mu / 2pi`, `d_los / d_norm`,
/// `v / (v_max - v_min)`, `gamma / 2pi`, `v_opp / (v_max - v_min)`,
/// `alpha / (alpha_max - alpha_min)`, `h / (h_max - h_min)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observation(pub [f64; 11]);

impl Observation {
    pub const DIM: usize = 11;

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// Unsigned 3D angle between two vectors, in [0, pi].
fn angle_between(a: [f64; 3], b: [f64; 3]) -> f64 {
    let denom = norm(a) * norm(b);
    if denom == 0.0 {
        return 0.0;
    }
    (dot(a, b) / denom).clamp(-1.0, 1.0).acos()
}

const PROJECTION_EPS: f64 = 1e-12;

/// Signed angle from `a` to `b` after projecting both onto the plane with
/// unit normal `n`. Returns `None` when a projection has (near-)zero length.
fn signed_projected_angle(a: [f64; 3], b: [f64; 3], n: [f64; 3]) -> Option<f64> {
    let pa = sub(a, [n[0] * dot(a, n), n[1] * dot(a, n), n[2] * dot(a, n)]);
    let pb = sub(b, [n[0] * dot(b, n), n[1] * dot(b, n), n[2] * dot(b, n)]);
    let scale = norm(a).max(norm(b)).max(1.0);
    if norm(pa) <= PROJECTION_EPS * scale || norm(pb) <= PROJECTION_EPS * scale {
        return None;
    }
    let angle = f64::atan2(dot(n, cross(pa, pb)), dot(pa, pb));
    // atan2 yields [-pi, pi]; fold the closed lower end onto +pi.
    Some(if angle == -std::f64::consts::PI {
        std::f64::consts::PI
    } else {
        angle
    })
}

const Z_AXIS: [f64; 3] = [0.0, 0.0, 1.0];
const X_AXIS: [f64; 3] = [1.0, 0.0, 0.0];

/// Engagement geometry from `own`'s perspective.
///
/// Fails with `DegenerateGeometry` when the two aircraft share a position.
pub fn relative_geometry(own: &UcavState, opp: &UcavState) -> Result<RelativeGeometry> {
    let los = sub(opp.position(), own.position());
    let d_los = norm(los);
    if d_los == 0.0 {
        return Err(Error::DegenerateGeometry("coincident positions".into()));
    }
    let v_own = own.velocity();
    let v_opp = opp.velocity();

    let mut degenerate = false;
    let mut proj = |a: [f64; 3], b: [f64; 3], n: [f64; 3]| match signed_projected_angle(a, b, n) {
        Some(angle) => angle,
        None => {
            degenerate = true;
            0.0
        }
    };
    let ata_xoy = proj(v_own, los, Z_AXIS);
    let ata_yoz = proj(v_own, los, X_AXIS);
    let aa_xoy = proj(v_opp, los, Z_AXIS);
    let aa_yoz = proj(v_opp, los, X_AXIS);

    Ok(RelativeGeometry {
        ata: angle_between(v_own, los),
        aa: angle_between(v_opp, los),
        ata_xoy,
        ata_yoz,
        aa_xoy,
        aa_yoz,
        d_los,
        degenerate,
    })
}

/// The normalized observation of `own` facing `opp`.
pub fn observe(
    own: &UcavState,
    opp: &UcavState,
    params: &AircraftParams,
    d_norm: f64,
) -> Result<Observation> {
    let geo = relative_geometry(own, opp)?;
    Ok(observation_from_geometry(&geo, own, opp, params, d_norm))
}

/// Assembles the observation from an already-computed geometry.
pub fn observation_from_geometry(
    geo: &RelativeGeometry,
    own: &UcavState,
    opp: &UcavState,
    params: &AircraftParams,
    d_norm: f64,
) -> Observation {
    let two_pi = 2.0 * std::f64::consts::PI;
    let v_range = params.v_max - params.v_min;
    let alpha_range = params.alpha_max - params.alpha_min;
    let h_range = params.h_max - params.h_min;
    Observation([
        geo.ata_xoy / two_pi,
        geo.ata_yoz / two_pi,
        geo.aa_xoy / two_pi,
        geo.aa_yoz / two_pi,
        own.mu / two_pi,
        geo.d_los / d_norm,
        own.v / v_range,
        own.gamma / two_pi,
        opp.v / v_range,
        own.alpha / alpha_range,
        own.altitude() / h_range,
    ])
}
