//! Acceptance suite. Each test prints one `criterion NN: PASS/FAIL` line
//! (visible with `cargo test --test acceptance -- --nocapture`) and asserts
//! the criterion at its stated tolerance and time budget.

use aircombat::combat_env::{
    classify, homotopy_reward, CombatEnv, CombatOutcome, RewardConfig, ScenarioConfig,
};
use aircombat::combat_geometry::{observe, RelativeGeometry};
use aircombat::flight_dynamics::{
    state_derivative, step, AircraftParams, ControlRates, UcavState,
};
use aircombat::harness::{
    evaluate_policy, read_metrics, train, Checkpoint, MetricsRecord, RunConfig, TaskKind,
};
use aircombat::homotopy::{fit_slope, HomotopySchedule, ScheduleConfig};
use aircombat::nn::{
    policy_noise, split_policy_output, squash_with_noise, Mlp,
};
use aircombat::sac::{
    actor_loss, critic_loss, temperature_loss, Batch, LearnerState, SacConfig, Transition,
};
use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

fn report(criterion: u32, pass: bool, detail: &str) {
    println!(
        "criterion {criterion:02}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn random_admissible(rng: &mut ChaCha8Rng, p: &AircraftParams, margin: f64) -> UcavState {
    UcavState {
        x: rng.random_range(-2e4..2e4),
        y: rng.random_range(-2e4..2e4),
        z: rng.random_range(-p.h_max + margin..-p.h_min - margin),
        v: rng.random_range(p.v_min + margin..p.v_max - margin),
        gamma: rng.random_range(-1.3..1.3),
        chi: rng.random_range(-PI..PI),
        alpha: rng.random_range(p.alpha_min..p.alpha_max),
        mu: rng.random_range(-PI..PI),
        eta: 1.0,
    }
}

// ---------------------------------------------------------------------------
// 1. Dynamics oracle equivalence
// ---------------------------------------------------------------------------

/// Straight-line re-statement of the model equations, kept independent of
/// the library implementation.
fn oracle_step(s: &UcavState, p: &AircraftParams) -> ([f64; 6], [f64; 6]) {
    let cl = p.c_l0 + p.c_l_alpha * s.alpha;
    let cd = p.c_d0 + p.bdp * cl * cl;
    let lift = 0.5 * p.rho * s.v * s.v * p.s_w * cl;
    let drag = 0.5 * p.rho * s.v * s.v * p.s_w * cd;
    let thrust = s.eta * p.t_max;
    let d = [
        s.v * s.gamma.cos() * s.chi.cos(),
        s.v * s.gamma.cos() * s.chi.sin(),
        -s.v * s.gamma.sin(),
        (thrust * s.alpha.cos() - drag) / p.m - p.g * s.gamma.sin(),
        ((thrust * s.alpha.sin() + lift) * s.mu.cos() - p.m * p.g * s.gamma.cos()) / (p.m * s.v),
        (thrust * s.alpha.sin() + lift) * s.mu.sin() / (p.m * s.v * s.gamma.cos()),
    ];
    let mut chi_next = s.chi + d[5] * p.dt;
    while chi_next > PI {
        chi_next -= 2.0 * PI;
    }
    while chi_next <= -PI {
        chi_next += 2.0 * PI;
    }
    let mut gamma_next = s.gamma + d[4] * p.dt;
    if gamma_next > PI / 2.0 {
        gamma_next = PI / 2.0;
    }
    if gamma_next < -PI / 2.0 {
        gamma_next = -PI / 2.0;
    }
    let next = [
        s.x + d[0] * p.dt,
        s.y + d[1] * p.dt,
        s.z + d[2] * p.dt,
        (s.v + d[3] * p.dt).max(1.0),
        gamma_next,
        chi_next,
    ];
    (d, next)
}

#[test]
fn c01_dynamics_oracle_equivalence() {
    let start = Instant::now();
    let p = AircraftParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let s = random_admissible(&mut rng, &p, 5.0);
        let d = state_derivative(&s, &p);
        let (od, onext) = oracle_step(&s, &p);
        let got_d = [d.dx, d.dy, d.dz, d.dv, d.dgamma, d.dchi];
        for (g, w) in got_d.iter().zip(od) {
            let rel = (g - w).abs() / w.abs().max(1.0);
            worst = worst.max(rel);
        }
        let next = step(&s, ControlRates::default(), &p);
        let got_next = [next.x, next.y, next.z, next.v, next.gamma, next.chi];
        for (g, w) in got_next.iter().zip(onext) {
            let rel = (g - w).abs() / w.abs().max(1.0);
            worst = worst.max(rel);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        1,
        worst < 1e-12 && elapsed < 5.0,
        &format!("worst relative error {worst:.2e} over 1e4 states in {elapsed:.2} s"),
    );
}

// ---------------------------------------------------------------------------
// 2. Order of accuracy
// ---------------------------------------------------------------------------

#[test]
fn c02_order_of_accuracy() {
    let start = Instant::now();
    let base = AircraftParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let horizon = base.dt; // one coarse step
    let advance = |s: &UcavState, dt: f64, n: usize| {
        let mut p = base.clone();
        p.dt = dt;
        let mut out = *s;
        for _ in 0..n {
            out = step(&out, ControlRates::default(), &p);
        }
        out
    };
    let mut ratios = Vec::new();
    for _ in 0..25 {
        let mut s = random_admissible(&mut rng, &base, 20.0);
        s.v = s.v.clamp(100.0, 350.0);
        s.gamma = s.gamma.clamp(-1.0, 1.0);
        let reference = advance(&s, horizon / 64.0, 64);
        let coarse = advance(&s, horizon, 1);
        let half = advance(&s, horizon / 2.0, 2);
        let err = |a: &UcavState| {
            ((a.x - reference.x).powi(2)
                + (a.y - reference.y).powi(2)
                + (a.z - reference.z).powi(2))
            .sqrt()
        };
        let (e1, e2) = (err(&coarse), err(&half));
        if e2 > 1e-12 {
            ratios.push(e1 / e2);
        }
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let elapsed = start.elapsed().as_secs_f64();
    report(
        2,
        (1.8..=2.2).contains(&mean) && elapsed < 10.0,
        &format!(
            "mean halving ratio {mean:.3} over {} states in {elapsed:.2} s",
            ratios.len()
        ),
    );
}

// ---------------------------------------------------------------------------
// 3. Combat-logic truth table
// ---------------------------------------------------------------------------

#[test]
fn c03_combat_logic_truth_table() {
    let p = AircraftParams::default();
    let cfg = RewardConfig::default();
    let angles: [f64; 4] = [-61f64, -59.0, 59.0, 61.0].map(|d| d.to_radians());
    let distances = [150.0, 200.0, 1000.0, 3000.0, 3100.0];
    let ok_state = UcavState::level(0.0, 0.0, 5000.0, 150.0, 0.0);
    let over_state = UcavState::level(0.0, 0.0, 5000.0, 450.0, 0.0);

    let geo = |aa: f64, ata: f64, d: f64| RelativeGeometry {
        ata,
        aa,
        ata_xoy: 0.0,
        ata_yoz: 0.0,
        aa_xoy: 0.0,
        aa_yoz: 0.0,
        d_los: d,
        degenerate: false,
    };
    // Independent chain evaluator.
    let oracle = |own_over: bool, own: &RelativeGeometry, opp: &RelativeGeometry| {
        let lim = 60f64.to_radians();
        let env = |g: &RelativeGeometry| {
            g.aa.abs() < lim && g.ata.abs() < lim && g.d_los >= 200.0 && g.d_los <= 3000.0
        };
        if own_over {
            CombatOutcome::Overloaded
        } else if env(opp) {
            CombatOutcome::Killed
        } else if env(own) {
            CombatOutcome::Win
        } else {
            CombatOutcome::Survival
        }
    };

    let mut cases = 0usize;
    let mut mismatches = 0usize;
    for aa_own in angles {
        for ata_own in angles {
            for aa_opp in angles {
                for ata_opp in angles {
                    for d in distances {
                        for own_over in [false, true] {
                            for opp_over in [false, true] {
                                let own = if own_over { over_state } else { ok_state };
                                let opp_state = if opp_over { over_state } else { ok_state };
                                let g_own = geo(aa_own, ata_own, d);
                                let g_opp = geo(aa_opp, ata_opp, d);
                                let got = classify(&own, &opp_state, &g_own, &g_opp, &p, &cfg);
                                let want = oracle(own_over, &g_own, &g_opp);
                                cases += 1;
                                if got != want {
                                    mismatches += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    report(
        3,
        mismatches == 0 && cases >= 320,
        &format!("{cases} boundary cases, {mismatches} mismatches"),
    );
}

// ---------------------------------------------------------------------------
// 4. Gradient suite
// ---------------------------------------------------------------------------

fn fd_matches(analytic: f64, fd: f64) -> bool {
    (analytic - fd).abs() <= 1e-4 * analytic.abs().max(fd.abs()).max(1e-2)
}

/// Central finite differences over every parameter of `net` for scalar loss
/// `f`, compared against `grads`.
fn check_net_fd(
    net: &mut Mlp,
    grads: &[f64],
    mut f: impl FnMut(&Mlp) -> f64,
) -> (bool, f64) {
    // Small enough that a rectifier kink almost never falls inside the
    // central-difference stencil, large enough that 64-bit roundoff in the
    // loss stays orders of magnitude below the 1e-4 gate.
    let h = 1e-6;
    let n: usize = grads.len();
    let mut worst = 0.0f64;
    let mut ok = true;
    for k in 0..n {
        let bump = |m: &mut Mlp, delta: f64| {
            let mut i = 0;
            m.map_params_mut(|p| {
                if i == k {
                    *p += delta;
                }
                i += 1;
            });
        };
        bump(net, h);
        let up = f(net);
        bump(net, -2.0 * h);
        let down = f(net);
        bump(net, h);
        let fd = (up - down) / (2.0 * h);
        let rel = (grads[k] - fd).abs() / grads[k].abs().max(fd.abs()).max(1e-2);
        worst = worst.max(rel);
        ok &= fd_matches(grads[k], fd);
    }
    (ok, worst)
}

fn flat_grads(g: &aircombat::nn::MlpGrads) -> Vec<f64> {
    g.layers
        .iter()
        .flat_map(|l| l.weight.iter().chain(l.bias.iter()).copied().collect::<Vec<_>>())
        .collect()
}

#[test]
fn c04_gradient_suite() {
    let start = Instant::now();
    let mut all_ok = true;
    let mut worst = 0.0f64;
    for seed in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(400 + seed);
        let cfg = SacConfig {
            hidden_sizes: vec![16, 16],
            batch_size: 6,
            replay_capacity: 64,
            ..SacConfig::default()
        };
        let learner = LearnerState::new(5, 2, cfg, &mut rng).unwrap();
        let transitions: Vec<Transition> = (0..6)
            .map(|_| Transition {
                obs: (0..5).map(|_| rng.random_range(-1.0..1.0)).collect(),
                action: (0..2).map(|_| rng.random_range(-0.9..0.9)).collect(),
                reward: rng.random_range(-2.0..2.0),
                next_obs: (0..5).map(|_| rng.random_range(-1.0..1.0)).collect(),
                done: rng.random_range(0.0..1.0) < 0.3,
                q: 1.0,
            })
            .collect();
        let refs: Vec<&Transition> = transitions.iter().collect();
        let batch = Batch::from_transitions(&refs).unwrap();

        // (a) plain forward network: loss = sum of squares of outputs.
        {
            let x = Array2::from_shape_fn((4, 5), |_| rng.random_range(-1.0..1.0));
            let (y, cache) = learner.actor.forward_batch(&x).unwrap();
            let upstream = y.mapv(|v| 2.0 * v);
            let (grads, _) = learner.actor.backward_batch(&cache, &upstream).unwrap();
            let mut net = learner.actor.clone();
            let (ok, w) = check_net_fd(&mut net, &flat_grads(&grads), |m| {
                let (y, _) = m.forward_batch(&x).unwrap();
                y.iter().map(|v| v * v).sum()
            });
            all_ok &= ok;
            worst = worst.max(w);
        }

        // (b) squashed-Gaussian log-prob through the actor network.
        {
            let obs = Array1::from_shape_fn(5, |_| rng.random_range(-1.0..1.0));
            let noise = policy_noise(2, &mut rng);
            let loss_of = |m: &Mlp| {
                let raw = m.forward(&obs.view()).unwrap();
                let out = split_policy_output(&raw.view());
                squash_with_noise(&out, &noise.view()).log_prob
            };
            let raw = learner.actor.forward(&obs.view()).unwrap();
            let out = split_policy_output(&raw.view());
            let sample = squash_with_noise(&out, &noise.view());
            let zero_g = Array1::zeros(2);
            let (d_mean, d_log_std) =
                aircombat::nn::backprop_through_squash(&out, &sample, 1.0, &zero_g.view());
            let mut upstream = Array1::zeros(4);
            for i in 0..2 {
                upstream[i] = d_mean[i];
                upstream[2 + i] = d_log_std[i];
            }
            let (grads, _) = learner
                .actor
                .backward(&obs.view(), &upstream.view())
                .unwrap();
            let mut net = learner.actor.clone();
            let (ok, w) = check_net_fd(&mut net, &flat_grads(&grads), loss_of);
            all_ok &= ok;
            worst = worst.max(w);
        }

        // (c) critic TD loss J_Q over both critics, at frozen sampling noise.
        {
            let rng_snapshot = rng.clone();
            let (_, g1, g2) = critic_loss(&batch, &learner, 0.9, &mut rng.clone()).unwrap();
            let flat1 = flat_grads(&g1);
            let mut net = learner.critic1.clone();
            let learner_ref = &learner;
            let batch_ref = &batch;
            let (ok, w) = check_net_fd(&mut net, &flat1, |m| {
                let mut l = learner_ref.clone();
                l.critic1 = m.clone();
                let (loss, _, _) = critic_loss(batch_ref, &l, 0.9, &mut rng_snapshot.clone()).unwrap();
                loss
            });
            all_ok &= ok;
            worst = worst.max(w);
            let flat2 = flat_grads(&g2);
            let mut net = learner.critic2.clone();
            let (ok, w) = check_net_fd(&mut net, &flat2, |m| {
                let mut l = learner_ref.clone();
                l.critic2 = m.clone();
                let (loss, _, _) = critic_loss(batch_ref, &l, 0.9, &mut rng_snapshot.clone()).unwrap();
                loss
            });
            all_ok &= ok;
            worst = worst.max(w);
        }

        // (d) actor loss J_pi at frozen noise.
        {
            let rng_snapshot = rng.clone();
            let (_, g_actor) = actor_loss(&batch, &learner, &mut rng.clone()).unwrap();
            let flat = flat_grads(&g_actor);
            let mut net = learner.actor.clone();
            let learner_ref = &learner;
            let batch_ref = &batch;
            let (ok, w) = check_net_fd(&mut net, &flat, |m| {
                let mut l = learner_ref.clone();
                l.actor = m.clone();
                let (loss, _) = actor_loss(batch_ref, &l, &mut rng_snapshot.clone()).unwrap();
                loss
            });
            all_ok &= ok;
            worst = worst.max(w);
        }

        // (e) temperature loss J_alpha: scalar derivative in log alpha.
        {
            let rng_snapshot = rng.clone();
            let (_, grad) = temperature_loss(&batch, &learner, -2.0, &mut rng.clone()).unwrap();
            let h = 1e-5;
            let eval = |la: f64| {
                let mut l = learner.clone();
                l.log_alpha = la;
                let (loss, _) =
                    temperature_loss(&batch, &l, -2.0, &mut rng_snapshot.clone()).unwrap();
                loss
            };
            let fd = (eval(learner.log_alpha + h) - eval(learner.log_alpha - h)) / (2.0 * h);
            all_ok &= fd_matches(grad, fd);
            worst = worst.max((grad - fd).abs() / grad.abs().max(fd.abs()).max(1e-2));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        4,
        all_ok && elapsed < 60.0,
        &format!("worst relative gradient error {worst:.2e} across 10 seeds in {elapsed:.1} s"),
    );
}

// ---------------------------------------------------------------------------
// 5. Homotopy linearity at trajectory level
// ---------------------------------------------------------------------------

#[test]
fn c05_homotopy_linearity() {
    let start = Instant::now();
    let mut scenario = ScenarioConfig::default();
    scenario.episode_cap = 300;
    let mut env = CombatEnv::new(
        AircraftParams::default(),
        RewardConfig::default(),
        scenario,
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let gamma = 0.996;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        env.reset(&mut rng).unwrap();
        // Record the per-step sparse and shaping rewards once.
        let mut sparse = Vec::new();
        let mut extra = Vec::new();
        loop {
            let action = ControlRates::new(
                rng.random_range(-0.09..0.09),
                rng.random_range(-0.9..0.9),
            );
            let rec = env.env_step(action, ControlRates::default(), 0.0).unwrap();
            sparse.push(rec.blue.sparse_reward);
            extra.push(rec.blue.extra_reward);
            if rec.done {
                break;
            }
        }
        for _ in 0..10 {
            let q: f64 = rng.random_range(0.0..=1.0);
            let mut blended_return = 0.0;
            let mut sparse_return = 0.0;
            let mut shaped_return = 0.0;
            let mut g = 1.0;
            for (r, x) in sparse.iter().zip(&extra) {
                blended_return += g * homotopy_reward(*r, *x, q).unwrap();
                sparse_return += g * r;
                shaped_return += g * (r + x);
                g *= gamma;
            }
            let want = q * shaped_return + (1.0 - q) * sparse_return;
            let rel = (blended_return - want).abs()
                / blended_return.abs().max(want.abs()).max(1.0);
            worst = worst.max(rel);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        5,
        worst < 1e-9 && elapsed < 10.0,
        &format!("worst relative deviation {worst:.2e} over 100 episodes x 10 blends in {elapsed:.1} s"),
    );
}

// ---------------------------------------------------------------------------
// 6. Scheduler contract
// ---------------------------------------------------------------------------

#[test]
fn c06_scheduler_contract() {
    let start = Instant::now();
    let cfg = ScheduleConfig {
        big_n: 100,
        big_m: 100,
        epsilon: 1e-5,
    };
    let mut schedule = HomotopySchedule::new(&cfg);
    let mut advances = 0;
    let mut records_since_advance = 0;
    let mut prev_q = schedule.q();
    let mut full_refills_only = true;
    // A converging stream: per-plateau constant magnitudes decaying toward 0.
    while advances < 100 {
        let level = 1.0 / (1.0 + advances as f64);
        schedule.record(level).unwrap();
        records_since_advance += 1;
        if schedule.maybe_advance() {
            advances += 1;
            full_refills_only &= records_since_advance == 100;
            records_since_advance = 0;
            if schedule.q() > prev_q {
                full_refills_only = false;
            }
            prev_q = schedule.q();
        }
        if records_since_advance > 200 {
            break; // stuck; fail below
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        6,
        advances == 100 && schedule.q() == 0.0 && full_refills_only && elapsed < 5.0,
        &format!(
            "{advances} advances, final q = {}, each after a full 100-sample refill, {elapsed:.2} s",
            schedule.q()
        ),
    );
}

// ---------------------------------------------------------------------------
// 7. OLS oracle
// ---------------------------------------------------------------------------

#[test]
fn c07_ols_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let m = rng.random_range(2..400);
        let values: Vec<f64> = (0..m).map(|_| rng.random_range(-10.0..10.0)).collect();
        let got = fit_slope(&values).unwrap();
        let xs: Vec<f64> = (1..=m).map(|x| x as f64).collect();
        let x_bar = xs.iter().sum::<f64>() / m as f64;
        let y_bar = values.iter().sum::<f64>() / m as f64;
        let num: f64 = xs
            .iter()
            .zip(&values)
            .map(|(x, y)| (x - x_bar) * (y - y_bar))
            .sum();
        let den: f64 = xs.iter().map(|x| (x - x_bar) * (x - x_bar)).sum();
        let want = num / den;
        worst = worst.max((got - want).abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        7,
        worst < 1e-10 && elapsed < 5.0,
        &format!("worst absolute slope deviation {worst:.2e} over 1000 buffers in {elapsed:.2} s"),
    );
}

// ---------------------------------------------------------------------------
// 8. Tabular TD sanity
// ---------------------------------------------------------------------------

#[test]
fn c08_tabular_td_sanity() {
    let start = Instant::now();
    // Deterministic 2-state chain: s0 -> s1 (reward 1), s1 -> terminal
    // (reward 2), discount 0.9.
    let gamma = 0.9;
    let r01 = 1.0;
    let r1t = 2.0;
    // Brute-force value iteration.
    let (mut v0, mut v1) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let n1 = r1t; // terminal afterwards
        let n0 = r01 + gamma * v1;
        v0 = n0;
        v1 = n1;
    }
    let q_oracle = [v0, v1];

    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let cfg = SacConfig {
        gamma,
        batch_size: 8,
        replay_capacity: 16,
        hidden_sizes: vec![16],
        lr_critic: 1e-3,
        lr_actor: 1e-3,
        lr_alpha: 0.0,
        ..SacConfig::default()
    };
    let mut learner = LearnerState::new(2, 1, cfg, &mut rng).unwrap();
    learner.log_alpha = -1000.0; // hard values, no entropy bonus
    for _ in 0..4 {
        learner.replay.push(Transition {
            obs: vec![1.0, 0.0],
            action: vec![0.0],
            reward: r01,
            next_obs: vec![0.0, 1.0],
            done: false,
            q: 0.0,
        });
        learner.replay.push(Transition {
            obs: vec![0.0, 1.0],
            action: vec![0.0],
            reward: r1t,
            next_obs: vec![1.0, 0.0],
            done: true,
            q: 0.0,
        });
    }

    let q_of = |l: &LearnerState, obs: [f64; 2]| {
        let x = Array1::from_vec(vec![obs[0], obs[1], 0.0]);
        let q1 = l.critic1.forward(&x.view()).unwrap()[0];
        let q2 = l.critic2.forward(&x.view()).unwrap()[0];
        q1.min(q2)
    };

    let mut updates = 0u64;
    let mut err = f64::INFINITY;
    while updates < 50_000 {
        aircombat::sac::update_step(&mut learner, &mut rng).unwrap();
        updates += 1;
        if updates % 500 == 0 {
            err = (q_of(&learner, [1.0, 0.0]) - q_oracle[0])
                .abs()
                .max((q_of(&learner, [0.0, 1.0]) - q_oracle[1]).abs());
            if err <= 1e-2 {
                break;
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        8,
        err <= 1e-2 && elapsed < 120.0,
        &format!(
            "|Q - VI| = {err:.4} after {updates} updates in {elapsed:.1} s (oracle {q_oracle:?})"
        ),
    );
}

// ---------------------------------------------------------------------------
// 9. Desk-scale learning trend
// ---------------------------------------------------------------------------

#[test]
fn c09_desk_scale_learning_trend() {
    let start = Instant::now();
    let mut seed_results = Vec::new();
    for seed in [0u64, 1, 2] {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = RunConfig::desk_attack();
        assert_eq!(cfg.scenario.episode_cap, 500);
        assert_eq!(cfg.aircraft.dt, 0.1);
        assert_eq!(cfg.episodes, 2000);
        cfg.seed = seed;
        cfg.out_dir = dir.path().to_path_buf();
        let out = train(&cfg).unwrap();

        let evals: Vec<f64> = read_metrics(&out.metrics_path)
            .unwrap()
            .into_iter()
            .filter_map(|r| match r {
                MetricsRecord::Eval {
                    mean_sparse_return, ..
                } => Some(mean_sparse_return),
                _ => None,
            })
            .collect();
        let first10 = evals[..10].iter().sum::<f64>() / 10.0;
        let last10 = evals[evals.len() - 10..].iter().sum::<f64>() / 10.0;
        let trend_ok = last10 > first10;

        let ckpt = Checkpoint::load(&out.final_checkpoint).unwrap();
        let mut adv = ScenarioConfig::advantageous();
        adv.episode_cap = 500;
        let win = evaluate_policy(
            &ckpt.learner.actor,
            None,
            &cfg.aircraft,
            &cfg.reward,
            &adv,
            200,
            999,
        )
        .unwrap();
        let win_ok = win.win_rate >= 0.6;
        println!(
            "  seed {seed}: eval return {first10:.2} -> {last10:.2} (trend {}), advantaged win rate {:.1}% ({})",
            if trend_ok { "ok" } else { "FLAT" },
            100.0 * win.win_rate,
            if win_ok { "ok" } else { "LOW" },
        );
        seed_results.push(trend_ok && win_ok);
    }
    let passes = seed_results.iter().filter(|p| **p).count();
    let elapsed = start.elapsed().as_secs_f64();
    report(
        9,
        passes >= 2 && elapsed < 7200.0,
        &format!("{passes}/3 seeds pass (trend + >=60% advantaged win rate) in {elapsed:.0} s"),
    );
}

// ---------------------------------------------------------------------------
// 10. Self-play symmetry
// ---------------------------------------------------------------------------

#[test]
fn c10_self_play_symmetry() {
    let start = Instant::now();
    let mut seed_passes = 0;
    for seed in [0u64, 1, 2] {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = RunConfig::desk_self_play();
        assert_eq!(cfg.task, TaskKind::SelfPlay);
        assert_eq!(cfg.episodes, 500);
        cfg.seed = seed;
        cfg.out_dir = dir.path().to_path_buf();
        let out = train(&cfg).unwrap();

        let diffs: Vec<f64> = read_metrics(&out.metrics_path)
            .unwrap()
            .into_iter()
            .filter_map(|r| match r {
                MetricsRecord::Episode {
                    sparse_return_blue,
                    sparse_return_red,
                    ..
                } => Some((sparse_return_blue - sparse_return_red).abs()),
                _ => None,
            })
            .collect();
        assert_eq!(diffs.len(), 500);
        // 50-episode moving average, compared over the first and last 100
        // episodes of the run.
        let ma: Vec<f64> = (49..diffs.len())
            .map(|t| diffs[t - 49..=t].iter().sum::<f64>() / 50.0)
            .collect();
        // ma[i] covers episodes i+1..=i+50 (1-based end at i+50).
        let early: Vec<f64> = ma.iter().take(51).copied().collect(); // windows ending within episodes 50..=100
        let late: Vec<f64> = ma[ma.len() - 51..].to_vec(); // windows ending within 450..=500
        let early_mean = early.iter().sum::<f64>() / early.len() as f64;
        let late_mean = late.iter().sum::<f64>() / late.len() as f64;
        let ok = late_mean < early_mean;
        println!(
            "  seed {seed}: |blue-red| moving average {early_mean:.2} -> {late_mean:.2} ({})",
            if ok { "shrinks" } else { "GROWS" }
        );
        if ok {
            seed_passes += 1;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        10,
        seed_passes >= 2 && elapsed < 3600.0,
        &format!("{seed_passes}/3 seeds shrink the return gap in {elapsed:.0} s"),
    );
}

// ---------------------------------------------------------------------------
// 11. Observation hygiene
// ---------------------------------------------------------------------------

#[test]
fn c11_observation_hygiene() {
    let start = Instant::now();
    let p = AircraftParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1111);
    let mut ok = true;
    for _ in 0..100_000 {
        let a = random_admissible(&mut rng, &p, 0.0);
        let mut b = random_admissible(&mut rng, &p, 0.0);
        if a.position() == b.position() {
            b.x += 1.0;
        }
        let obs = observe(&a, &b, &p, 10_000.0).unwrap();
        for e in obs.0 {
            ok &= e.is_finite();
        }
        for e in &obs.0[0..4] {
            ok &= *e > -0.5 - 1e-12 && *e <= 0.5;
        }
        ok &= obs.0[4].abs() <= 0.5;
        ok &= obs.0[5] >= 0.0;
        ok &= (0.25..=1.25).contains(&obs.0[6]) && (0.25..=1.25).contains(&obs.0[8]);
        ok &= obs.0[7].abs() <= 0.25;
        ok &= obs.0[9].abs() <= 0.5;
        ok &= (1.0 / 3.0..=4.0 / 3.0).contains(&obs.0[10]);
        if !ok {
            break;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        11,
        ok && elapsed < 5.0,
        &format!("1e5 random pairs finite and in bounds in {elapsed:.2} s"),
    );
}

// ---------------------------------------------------------------------------
// 12. Reproducibility
// ---------------------------------------------------------------------------

#[test]
fn c12_reproducibility() {
    let start = Instant::now();
    let run = |dir: &std::path::Path| {
        let mut cfg = RunConfig::desk_attack();
        cfg.episodes = 40;
        cfg.seed = 31;
        cfg.update_log_every = 1;
        cfg.out_dir = dir.to_path_buf();
        train(&cfg).unwrap()
    };
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let o1 = run(d1.path());
    let o2 = run(d2.path());
    let m1 = std::fs::read(&o1.metrics_path).unwrap();
    let m2 = std::fs::read(&o2.metrics_path).unwrap();
    let metrics_identical = m1 == m2 && !m1.is_empty();

    let ckpt = Checkpoint::load(&o1.final_checkpoint).unwrap();
    let mut adv = ScenarioConfig::advantageous();
    adv.episode_cap = 300;
    let e1 = evaluate_policy(
        &ckpt.learner.actor,
        None,
        &ckpt.config.aircraft,
        &ckpt.config.reward,
        &adv,
        20,
        5,
    )
    .unwrap();
    let e2 = evaluate_policy(
        &ckpt.learner.actor,
        None,
        &ckpt.config.aircraft,
        &ckpt.config.reward,
        &adv,
        20,
        5,
    )
    .unwrap();
    let eval_identical = e1 == e2;
    let elapsed = start.elapsed().as_secs_f64();
    report(
        12,
        metrics_identical && eval_identical,
        &format!(
            "metrics logs byte-identical ({} bytes), evaluation reports identical, {elapsed:.1} s",
            m1.len()
        ),
    );
}
