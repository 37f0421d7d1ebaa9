//! Deterministic 3-DOF point-mass aircraft model.
//!
//! Ground frame is north-east-down: `z` grows downward, so altitude is
//! `h = -z`. The state carries the kinematic variables `(x, y, z, v, gamma,
//! chi)` plus the control positions `(alpha, mu, eta)`. Control RATES are the
//! only inputs; positions integrate under rate and position clamps, and the
//! six kinematic variables advance by one explicit Euler step using the
//! derivative at the current time.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// Full kinematic + control state of one aircraft.
///
/// Angles in radians, positions in meters, speed in m/s. `z` is positive
/// downward (altitude `h = -z`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UcavState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    /// Airspeed, m/s.
    pub v: f64,
    /// Flight-path angle, rad, clamped to [-pi/2, pi/2].
    pub gamma: f64,
    /// Heading angle, rad, wrapped to (-pi, pi].
    pub chi: f64,
    /// Attack angle, rad, clamped to [alpha_min, alpha_max].
    pub alpha: f64,
    /// Bank angle, rad, wrapped to (-pi, pi].
    pub mu: f64,
    /// Throttle setting; fixed at 1 for the whole engagement.
    pub eta: f64,
}

impl UcavState {
    /// Level state at a given ground position, altitude and heading, with
    /// neutral controls (`alpha = mu = 0`, full throttle).
    pub fn level(x: f64, y: f64, altitude: f64, v: f64, chi: f64) -> Self {
        Self {
            x,
            y,
            z: -altitude,
            v,
            gamma: 0.0,
            chi,
            alpha: 0.0,
            mu: 0.0,
            eta: 1.0,
        }
    }

    pub fn altitude(&self) -> f64 {
        -self.z
    }

    /// Velocity vector in the ground frame (x, y, z components).
    pub fn velocity(&self) -> [f64; 3] {
        let (sg, cg) = self.gamma.sin_cos();
        let (sc, cc) = self.chi.sin_cos();
        [self.v * cg * cc, self.v * cg * sc, -self.v * sg]
    }

    pub fn position(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

/// Physical constants and operational limits of the airframe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AircraftParams {
    /// Mass, kg.
    pub m: f64,
    /// Gravitational acceleration, m/s^2.
    pub g: f64,
    /// Maximum thrust, N.
    pub t_max: f64,
    /// Air density, kg/m^3 (constant over the combat altitude band).
    pub rho: f64,
    /// Reference wing area, m^2.
    pub s_w: f64,
    /// Zero-angle lift coefficient.
    pub c_l0: f64,
    /// Lift-curve slope, 1/rad.
    pub c_l_alpha: f64,
    /// Zero-lift drag coefficient.
    pub c_d0: f64,
    /// Drag-lift (induced drag) coefficient.
    pub bdp: f64,
    /// Maximum load factor, dimensionless.
    pub n_max: f64,
    /// Maximum dynamic pressure, Pa.
    pub q_max: f64,
    /// Altitude band, m.
    pub h_min: f64,
    pub h_max: f64,
    /// Speed band, m/s.
    pub v_min: f64,
    pub v_max: f64,
    /// Attack-angle band, rad.
    pub alpha_min: f64,
    pub alpha_max: f64,
    /// Maximum attack-angle rate, rad/s.
    pub d_alpha: f64,
    /// Maximum bank-angle rate, rad/s.
    pub d_mu: f64,
    /// Integration step, s.
    pub dt: f64,
}

impl Default for AircraftParams {
    fn default() -> Self {
        let rho = 1.225;
        let v_max = 400.0;
        Self {
            m: 150.0,
            g: 9.80665,
            // Listed as 100 kg of thrust; converted as kilogram-force.
            t_max: 100.0 * 9.80665,
            rho,
            // Sized so the neutral-control reset state (v = 150, alpha = 0)
            // flies inside the load-factor limit and level trim needs only a
            // few degrees of attack angle.
            s_w: 2.0,
            c_l0: 0.2,
            c_l_alpha: 3.5,
            c_d0: 0.02,
            bdp: 0.05,
            n_max: 10.0,
            // Never binds before the speed limit.
            q_max: 0.5 * rho * v_max * v_max,
            h_min: 2000.0,
            h_max: 8000.0,
            v_min: 80.0,
            v_max,
            alpha_min: -15f64.to_radians(),
            alpha_max: 15f64.to_radians(),
            d_alpha: 5f64.to_radians(),
            d_mu: 50f64.to_radians(),
            dt: 0.1,
        }
    }
}

impl AircraftParams {
    /// Validates the band and positivity invariants.
    pub fn validate(&self) -> crate::Result<()> {
        let bands = [
            (self.h_min, self.h_max, "altitude"),
            (self.v_min, self.v_max, "speed"),
            (self.alpha_min, self.alpha_max, "attack angle"),
        ];
        for (lo, hi, name) in bands {
            if !(lo < hi) {
                return Err(crate::Error::Config(format!("empty {name} band")));
            }
        }
        for (val, name) in [
            (self.m, "m"),
            (self.g, "g"),
            (self.rho, "rho"),
            (self.s_w, "s_w"),
            (self.dt, "dt"),
        ] {
            if !(val > 0.0) {
                return Err(crate::Error::Config(format!("{name} must be positive")));
            }
        }
        if !(self.n_max > 1.0) {
            return Err(crate::Error::Config("n_max must exceed 1".into()));
        }
        Ok(())
    }

    /// Attack angle that balances lift (plus the thrust component) against
    /// weight for straight level flight at speed `v`, clamped to the alpha
    /// band. Useful for constructing level test states.
    pub fn level_trim_alpha(&self, v: f64) -> f64 {
        let q_s = 0.5 * self.rho * v * v * self.s_w;
        let mut alpha = 0.0f64;
        // Fixed-point iteration on T*sin(alpha) + L(alpha) = m*g.
        for _ in 0..32 {
            let c_l = (self.m * self.g - self.eta_thrust() * alpha.sin()) / q_s;
            alpha = (c_l - self.c_l0) / self.c_l_alpha;
        }
        alpha.clamp(self.alpha_min, self.alpha_max)
    }

    fn eta_thrust(&self) -> f64 {
        self.t_max
    }
}

/// Time derivative of the six kinematic state variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDerivative {
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
    pub dv: f64,
    pub dgamma: f64,
    pub dchi: f64,
}

/// Commanded control rates; clamped to the rate bands inside `step`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ControlRates {
    pub alpha_dot: f64,
    pub mu_dot: f64,
}

impl ControlRates {
    pub fn new(alpha_dot: f64, mu_dot: f64) -> Self {
        Self { alpha_dot, mu_dot }
    }
}

/// Which operational limit a state violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LimitReason {
    LoadFactor,
    Altitude,
    Speed,
    DynamicPressure,
}

/// Result of `check_limits`: the overload flag plus every violated limit.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitStatus {
    pub overloaded: bool,
    pub reasons: Vec<LimitReason>,
}

/// Lift and drag coefficients at attack angle `alpha`.
pub fn lift_drag_coefficients(alpha: f64, params: &AircraftParams) -> (f64, f64) {
    let c_l = params.c_l0 + params.c_l_alpha * alpha;
    let c_d = params.c_d0 + params.bdp * c_l * c_l;
    (c_l, c_d)
}

/// Lift and drag forces in Newtons.
pub fn aero_forces(alpha: f64, v: f64, params: &AircraftParams) -> (f64, f64) {
    let (c_l, c_d) = lift_drag_coefficients(alpha, params);
    let q_s = 0.5 * params.rho * v * v * params.s_w;
    (q_s * c_l, q_s * c_d)
}

/// Load factor and dynamic pressure.
pub fn load_and_pressure(alpha: f64, v: f64, params: &AircraftParams) -> (f64, f64) {
    let (lift, _) = aero_forces(alpha, v, params);
    let n = lift / (params.m * params.g);
    let q_bar = 0.5 * params.rho * v * v;
    (n, q_bar)
}

/// Kinematic and dynamic state derivative at the given state.
///
/// Heading rate carries a 1/cos(gamma) factor that is singular in vertical
/// flight; because gamma is clamped to exactly +-pi/2, the heading is frozen
/// there (the heading of a vertical velocity vector is undefined).
pub fn state_derivative(state: &UcavState, params: &AircraftParams) -> StateDerivative {
    let (lift, drag) = aero_forces(state.alpha, state.v, params);
    let thrust = state.eta * params.t_max;
    let (sg, cg) = state.gamma.sin_cos();
    let (sc, cc) = state.chi.sin_cos();
    let normal_force = thrust * state.alpha.sin() + lift;

    let dv = (thrust * state.alpha.cos() - drag) / params.m - params.g * sg;
    let dchi = if cg.abs() < 1e-9 {
        0.0
    } else {
        normal_force * state.mu.sin() / (params.m * state.v * cg)
    };
    let dgamma = (normal_force * state.mu.cos() - params.m * params.g * cg) / (params.m * state.v);

    StateDerivative {
        dx: state.v * cg * cc,
        dy: state.v * cg * sc,
        dz: -state.v * sg,
        dv,
        dgamma,
        dchi,
    }
}

/// Wraps an angle to (-pi, pi].
pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

// Speed floor applied after integration. The environment terminates an
// episode as overloaded well above this (v < v_min), so the floor only keeps
// the 1/v terms finite under adversarial open-loop action streams.
const V_FLOOR: f64 = 1.0;

/// Advances the state by one step: clamp the commanded rates, integrate the
/// control positions, then advance the six kinematic variables with the
/// derivative evaluated at the pre-step kinematic state under the new
/// controls. Pure function: identical inputs give bit-identical outputs.
pub fn step(state: &UcavState, action: ControlRates, params: &AircraftParams) -> UcavState {
    let dt = params.dt;
    let alpha_dot = action.alpha_dot.clamp(-params.d_alpha, params.d_alpha);
    let mu_dot = action.mu_dot.clamp(-params.d_mu, params.d_mu);

    let alpha = (state.alpha + alpha_dot * dt).clamp(params.alpha_min, params.alpha_max);
    let mu = wrap_angle(state.mu + mu_dot * dt);

    let with_controls = UcavState {
        alpha,
        mu,
        ..*state
    };
    let d = state_derivative(&with_controls, params);

    UcavState {
        x: state.x + d.dx * dt,
        y: state.y + d.dy * dt,
        z: state.z + d.dz * dt,
        v: (state.v + d.dv * dt).max(V_FLOOR),
        gamma: (state.gamma + d.dgamma * dt).clamp(-FRAC_PI_2, FRAC_PI_2),
        chi: wrap_angle(state.chi + d.dchi * dt),
        alpha,
        mu,
        eta: state.eta,
    }
}

/// Checks the operational limits: load factor, altitude band, speed band and
/// dynamic pressure.
pub fn check_limits(state: &UcavState, params: &AircraftParams) -> LimitStatus {
    let (n, q_bar) = load_and_pressure(state.alpha, state.v, params);
    let h = state.altitude();
    let mut reasons = Vec::new();
    if n > params.n_max {
        reasons.push(LimitReason::LoadFactor);
    }
    if h < params.h_min || h > params.h_max {
        reasons.push(LimitReason::Altitude);
    }
    if state.v < params.v_min || state.v > params.v_max {
        reasons.push(LimitReason::Speed);
    }
    if q_bar > params.q_max {
        reasons.push(LimitReason::DynamicPressure);
    }
    LimitStatus {
        overloaded: !reasons.is_empty(),
        reasons,
    }
}
