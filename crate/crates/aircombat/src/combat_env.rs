//! The one-to-one engagement environment.
//!
//! Each step both aircraft advance simultaneously from the same pre-step
//! snapshot, the post-step situation is classified per side, and three reward
//! signals are produced per side: the sparse outcome reward, the dense
//! always-nonpositive shaping reward, and their blend under the current
//! homotopy weight `q` (`q = 1` fully shaped, `q = 0` purely sparse).

use crate::combat_geometry::{
    observation_from_geometry, relative_geometry, Observation, RelativeGeometry,
};
use crate::flight_dynamics::{check_limits, step, AircraftParams, ControlRates, UcavState};
use crate::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Per-side situation after a step, with precedence
/// Overloaded > Killed > Win > Survival.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CombatOutcome {
    Overloaded,
    Killed,
    Win,
    Survival,
}

impl CombatOutcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            CombatOutcome::Overloaded => "overloaded",
            CombatOutcome::Killed => "killed",
            CombatOutcome::Win => "win",
            CombatOutcome::Survival => "survival",
        }
    }
}

/// Sparse and shaping reward parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RewardConfig {
    /// Absolute-win reward.
    pub r1: f64,
    /// Relative-win reward (opponent overloaded while we survive).
    pub r2: f64,
    /// Loss punishment (own overload or killed).
    pub r3: f64,
    /// Per-step punishment.
    pub r4: f64,
    /// Diagonal of the 4x4 positive weight matrix on the angle vector
    /// `[ata_xoy, ata_yoz, aa_xoy, aa_yoz]`.
    pub q_weight: [f64; 4],
    /// Distance penalty coefficient.
    pub k: f64,
    /// Attack-range band, m.
    pub d_min: f64,
    pub d_max: f64,
}

impl Default for RewardConfig {
    fn default() -> Self {
        Self {
            r1: 10.0,
            r2: 5.0,
            r3: -10.0,
            r4: -0.01,
            q_weight: [1.0; 4],
            k: 0.5,
            d_min: 200.0,
            d_max: 3000.0,
        }
    }
}

impl RewardConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.r1 >= self.r2 && self.r2 > 0.0 && 0.0 > self.r4 && self.r4 > self.r3) {
            return Err(Error::Config(
                "reward ordering must satisfy r1 >= r2 > 0 > r4 > r3".into(),
            ));
        }
        if self.q_weight.iter().any(|w| *w <= 0.0) {
            return Err(Error::Config("q_weight entries must be positive".into()));
        }
        if !(self.k > 0.0) {
            return Err(Error::Config("k must be positive".into()));
        }
        if !(0.0 < self.d_min && self.d_min < self.d_max) {
            return Err(Error::Config("attack range must satisfy 0 < d_min < d_max".into()));
        }
        Ok(())
    }
}

/// Initial kinematic state used in scenario configuration; gamma and mu start
/// level, attack angle starts neutral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialState {
    pub x: f64,
    pub y: f64,
    pub altitude: f64,
    pub speed: f64,
    /// Heading, degrees (configuration convenience; states use radians).
    pub heading_deg: f64,
}

impl InitialState {
    pub fn to_state(self) -> UcavState {
        UcavState::level(
            self.x,
            self.y,
            self.altitude,
            self.speed,
            self.heading_deg.to_radians(),
        )
    }
}

/// How the red aircraft is initialized on reset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum RedInit {
    Fixed(InitialState),
    /// Horizontal ring around blue: horizontal separation and height offset
    /// drawn uniformly from the bands, bearing and heading uniform over the
    /// circle.
    RandomAnnulus {
        distance_band: (f64, f64),
        relative_height_band: (f64, f64),
        speed: f64,
    },
}

/// Who controls red during an episode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RedController {
    /// Red follows the action passed to `step` (a learned or scripted policy).
    Policy,
    /// Red holds zero control rates from its reset attitude.
    HorizontalFlight,
}

/// Engagement scenario: initial conditions, red control mode, episode cap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioConfig {
    pub blue: InitialState,
    pub red: RedInit,
    pub red_controller: RedController,
    pub episode_cap: usize,
    /// Distance normalization constant for the observation, m.
    pub d_norm: f64,
    /// Default seed for stand-alone environment construction.
    pub seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            blue: InitialState {
                x: 0.0,
                y: 0.0,
                altitude: 5000.0,
                speed: 150.0,
                heading_deg: 0.0,
            },
            red: RedInit::RandomAnnulus {
                distance_band: (4000.0, 6000.0),
                relative_height_band: (-1000.0, 1000.0),
                speed: 150.0,
            },
            red_controller: RedController::HorizontalFlight,
            episode_cap: 2000,
            d_norm: 10_000.0,
            seed: 0,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.episode_cap == 0 {
            return Err(Error::InvalidScenario("episode cap must be >= 1".into()));
        }
        if let RedInit::RandomAnnulus {
            distance_band: (lo, hi),
            relative_height_band: (hlo, hhi),
            ..
        } = self.red
        {
            if !(0.0 < lo && lo <= hi) {
                return Err(Error::InvalidScenario("bad distance band".into()));
            }
            if !(hlo <= hhi) {
                return Err(Error::InvalidScenario("bad relative height band".into()));
            }
        }
        Ok(())
    }

    fn fixed_duel(blue: InitialState, red: InitialState) -> Self {
        Self {
            blue,
            red: RedInit::Fixed(red),
            ..Self::default()
        }
    }

    /// Blue trailing red at 45 degrees, 7 km back.
    pub fn advantageous() -> Self {
        Self::fixed_duel(
            InitialState { x: 0.0, y: 0.0, altitude: 5000.0, speed: 150.0, heading_deg: 45.0 },
            InitialState { x: 5000.0, y: 5000.0, altitude: 5000.0, speed: 150.0, heading_deg: 45.0 },
        )
    }

    /// Red trailing blue.
    pub fn disadvantageous() -> Self {
        Self::fixed_duel(
            InitialState { x: 0.0, y: 0.0, altitude: 5000.0, speed: 150.0, heading_deg: -45.0 },
            InitialState { x: -5000.0, y: 5000.0, altitude: 5000.0, speed: 150.0, heading_deg: -45.0 },
        )
    }

    /// Closing head-on.
    pub fn head_on() -> Self {
        Self::fixed_duel(
            InitialState { x: 0.0, y: 0.0, altitude: 5000.0, speed: 150.0, heading_deg: 45.0 },
            InitialState { x: 5000.0, y: 5000.0, altitude: 5000.0, speed: 150.0, heading_deg: -135.0 },
        )
    }

    /// Diverging, neither behind the other.
    pub fn neutral() -> Self {
        Self::fixed_duel(
            InitialState { x: 0.0, y: 0.0, altitude: 5000.0, speed: 150.0, heading_deg: 45.0 },
            InitialState { x: 5000.0, y: -5000.0, altitude: 5000.0, speed: 150.0, heading_deg: -135.0 },
        )
    }

    /// Looks up a named preset scenario.
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "advantageous" => Some(Self::advantageous()),
            "disadvantageous" => Some(Self::disadvantageous()),
            "head_on" => Some(Self::head_on()),
            "neutral" => Some(Self::neutral()),
            _ => None,
        }
    }
}

/// Per-side slice of a step record. The observation is the post-step one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideRecord {
    pub observation: Observation,
    pub action: ControlRates,
    pub sparse_reward: f64,
    pub extra_reward: f64,
    pub homotopy_reward: f64,
    pub outcome: CombatOutcome,
}

/// One environment step, both sides plus the shared bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub blue: SideRecord,
    pub red: SideRecord,
    pub step_index: usize,
    pub done: bool,
    pub q: f64,
}

/// Classifies one side's situation from the post-step states and geometries.
///
/// `geo_own` is own view (own ATA, opponent's aspect), `geo_opp` the
/// opponent's view. The chain is: own limit violation, then the opponent's
/// firing envelope (we are killed), then our own (we win), else survival.
/// Envelope tests use the 3D angle magnitudes.
pub fn classify(
    own: &UcavState,
    opp: &UcavState,
    geo_own: &RelativeGeometry,
    geo_opp: &RelativeGeometry,
    params: &AircraftParams,
    cfg: &RewardConfig,
) -> CombatOutcome {
    let _ = opp;
    if check_limits(own, params).overloaded {
        return CombatOutcome::Overloaded;
    }
    let envelope = |geo: &RelativeGeometry| {
        let limit = 60f64.to_radians();
        geo.aa.abs() < limit
            && geo.ata.abs() < limit
            && geo.d_los >= cfg.d_min
            && geo.d_los <= cfg.d_max
    };
    if envelope(geo_opp) {
        CombatOutcome::Killed
    } else if envelope(geo_own) {
        CombatOutcome::Win
    } else {
        CombatOutcome::Survival
    }
}

/// The four-valued sparse outcome reward.
///
/// Mutual kill (both sides simultaneously classified `Killed`, which is how a
/// simultaneous double firing-envelope shows up under the classification
/// chain) is treated symmetrically as a win for both sides.
pub fn sparse_reward(c_own: CombatOutcome, c_opp: CombatOutcome, cfg: &RewardConfig) -> f64 {
    use CombatOutcome::*;
    match (c_own, c_opp) {
        (Win, _) => cfg.r1,
        (Killed, Killed) => cfg.r1,
        (Survival, Overloaded) => cfg.r2,
        (Overloaded, _) | (Killed, _) => cfg.r3,
        (Survival, _) => cfg.r4,
    }
}

/// The dense shaping reward: an angle penalty plus, inside the attack range,
/// a distance penalty. Always nonpositive.
pub fn extra_reward(geo: &RelativeGeometry, cfg: &RewardConfig) -> f64 {
    let phi = [geo.ata_xoy, geo.ata_yoz, geo.aa_xoy, geo.aa_yoz];
    let angle_penalty: f64 = phi
        .iter()
        .zip(cfg.q_weight.iter())
        .map(|(a, w)| w * a * a)
        .sum();
    if geo.d_los > cfg.d_max {
        -angle_penalty
    } else {
        let ratio = 2.0 * geo.d_los / (cfg.d_max + cfg.d_min) - 1.0;
        -angle_penalty - cfg.k * (ratio * ratio + 1.0)
    }
}

/// Blends sparse and shaped rewards: `q (r + r_extra) + (1 - q) r`.
pub fn homotopy_reward(r: f64, r_extra: f64, q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::Domain(format!("blend weight q = {q} outside [0, 1]")));
    }
    Ok(q * (r + r_extra) + (1.0 - q) * r)
}

/// The engagement environment. One instance is owned by one rollout at a
/// time; independent instances share nothing.
#[derive(Debug, Clone)]
pub struct CombatEnv {
    params: AircraftParams,
    reward: RewardConfig,
    scenario: ScenarioConfig,
    blue: UcavState,
    red: UcavState,
    step_index: usize,
    done: bool,
}

impl CombatEnv {
    pub fn new(
        params: AircraftParams,
        reward: RewardConfig,
        scenario: ScenarioConfig,
    ) -> Result<Self> {
        params.validate()?;
        reward.validate()?;
        scenario.validate()?;
        let blue = scenario.blue.to_state();
        let red = match scenario.red {
            RedInit::Fixed(init) => init.to_state(),
            RedInit::RandomAnnulus { speed, .. } => {
                UcavState::level(4000.0, 0.0, scenario.blue.altitude, speed, 0.0)
            }
        };
        Ok(Self {
            params,
            reward,
            scenario,
            blue,
            red,
            step_index: 0,
            done: true,
        })
    }

    pub fn params(&self) -> &AircraftParams {
        &self.params
    }

    pub fn reward_config(&self) -> &RewardConfig {
        &self.reward
    }

    pub fn scenario(&self) -> &ScenarioConfig {
        &self.scenario
    }

    pub fn blue_state(&self) -> &UcavState {
        &self.blue
    }

    pub fn red_state(&self) -> &UcavState {
        &self.red
    }

    pub fn step_index(&self) -> usize {
        self.step_index
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    /// Resets both aircraft and returns the initial observations
    /// (blue's, red's). Identical generator state gives identical episodes.
    pub fn reset<R: Rng>(&mut self, rng: &mut R) -> Result<(Observation, Observation)> {
        self.blue = self.scenario.blue.to_state();
        self.red = match self.scenario.red {
            RedInit::Fixed(init) => init.to_state(),
            RedInit::RandomAnnulus {
                distance_band: (d_lo, d_hi),
                relative_height_band: (h_lo, h_hi),
                speed,
            } => {
                let distance = rng.random_range(d_lo..=d_hi);
                let bearing = rng.random_range(-std::f64::consts::PI..=std::f64::consts::PI);
                let rel_h = rng.random_range(h_lo..=h_hi);
                let heading = rng.random_range(-180.0..=180.0);
                InitialState {
                    x: self.scenario.blue.x + distance * bearing.cos(),
                    y: self.scenario.blue.y + distance * bearing.sin(),
                    altitude: self.scenario.blue.altitude + rel_h,
                    speed,
                    heading_deg: heading,
                }
                .to_state()
            }
        };
        self.step_index = 0;
        self.done = false;
        let d_norm = self.scenario.d_norm;
        let obs_b = crate::combat_geometry::observe(&self.blue, &self.red, &self.params, d_norm)?;
        let obs_r = crate::combat_geometry::observe(&self.red, &self.blue, &self.params, d_norm)?;
        Ok((obs_b, obs_r))
    }

    /// Advances both aircraft simultaneously and scores the transition under
    /// blend weight `q`. Red's action is overridden to zero rates when its
    /// controller is `HorizontalFlight`.
    pub fn env_step(
        &mut self,
        action_b: ControlRates,
        action_r: ControlRates,
        q: f64,
    ) -> Result<StepRecord> {
        if self.done {
            return Err(Error::EpisodeFinished);
        }
        let action_r = match self.scenario.red_controller {
            RedController::Policy => action_r,
            RedController::HorizontalFlight => ControlRates::default(),
        };

        // Both sides advance from the same pre-step snapshot.
        let blue_next = step(&self.blue, action_b, &self.params);
        let red_next = step(&self.red, action_r, &self.params);
        self.blue = blue_next;
        self.red = red_next;
        self.step_index += 1;

        let geo_b = relative_geometry(&self.blue, &self.red)?;
        let geo_r = relative_geometry(&self.red, &self.blue)?;
        let c_b = classify(&self.blue, &self.red, &geo_b, &geo_r, &self.params, &self.reward);
        let c_r = classify(&self.red, &self.blue, &geo_r, &geo_b, &self.params, &self.reward);

        let side = |own_geo: &RelativeGeometry,
                    own: &UcavState,
                    opp: &UcavState,
                    action: ControlRates,
                    c_own: CombatOutcome,
                    c_opp: CombatOutcome|
         -> Result<SideRecord> {
            let r = sparse_reward(c_own, c_opp, &self.reward);
            let r_extra = extra_reward(own_geo, &self.reward);
            Ok(SideRecord {
                observation: observation_from_geometry(
                    own_geo,
                    own,
                    opp,
                    &self.params,
                    self.scenario.d_norm,
                ),
                action,
                sparse_reward: r,
                extra_reward: r_extra,
                homotopy_reward: homotopy_reward(r, r_extra, q)?,
                outcome: c_own,
            })
        };

        let blue = side(&geo_b, &self.blue, &self.red, action_b, c_b, c_r)?;
        let red = side(&geo_r, &self.red, &self.blue, action_r, c_r, c_b)?;

        let decisive = c_b != CombatOutcome::Survival || c_r != CombatOutcome::Survival;
        self.done = decisive || self.step_index >= self.scenario.episode_cap;

        Ok(StepRecord {
            blue,
            red,
            step_index: self.step_index,
            done: self.done,
            q,
        })
    }
}
