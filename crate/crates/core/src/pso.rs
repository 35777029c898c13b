//! Global-best particle swarm optimization with restarts and periodic coordinates.
//!
//! Each restart runs an independent swarm. Particle `p` of restart `r` owns the
//! random substream `(derive_seed(seed, r), p)`, so a run depends only on the
//! seed, never on how objective evaluations are scheduled across threads.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, domain, substream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsoConfig {
    pub swarm_size: usize,
    pub iterations: usize,
    pub restarts: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    /// Per-dimension cap on |velocity|.
    pub velocity_clamp: f64,
    /// Which coordinates are angles wrapped into `[0, 2π)`. Empty means none;
    /// otherwise the length must equal the problem dimension.
    pub periodic: Vec<bool>,
    pub seed: u64,
}

impl Default for PsoConfig {
    fn default() -> Self {
        Self {
            swarm_size: 40,
            iterations: 300,
            restarts: 5,
            inertia: 0.7298,
            cognitive: 1.49618,
            social: 1.49618,
            velocity_clamp: PI,
            periodic: Vec::new(),
            seed: 0,
        }
    }
}

impl PsoConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if dim == 0 {
            return fail("problem dimension must be at least 1".into());
        }
        if self.swarm_size < 2 {
            return fail(format!("swarm_size {} < 2", self.swarm_size));
        }
        if self.iterations < 1 {
            return fail("iterations must be at least 1".into());
        }
        if self.restarts < 1 {
            return fail("restarts must be at least 1".into());
        }
        if !(self.inertia > 0.0 && self.inertia < 1.0) {
            return fail(format!("inertia {} outside (0, 1)", self.inertia));
        }
        if !(self.cognitive > 0.0 && self.social > 0.0) {
            return fail("cognitive and social coefficients must be positive".into());
        }
        if !(self.velocity_clamp > 0.0) {
            return fail("velocity_clamp must be positive".into());
        }
        if !self.periodic.is_empty() && self.periodic.len() != dim {
            return fail(format!("periodic has {} entries for dimension {dim}", self.periodic.len()));
        }
        Ok(())
    }

    fn is_periodic(&self, d: usize) -> bool {
        self.periodic.get(d).copied().unwrap_or(false)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsoRun {
    pub best_position: Vec<f64>,
    pub best_value: f64,
    /// Global-best value after initialization and after each iteration, one list per restart.
    pub history: Vec<Vec<f64>>,
    pub restart_index: usize,
    pub evaluations: u64,
    /// Objective calls that returned NaN (scored as +inf).
    pub nan_evaluations: u64,
}

impl PsoRun {
    /// History of the restart that produced the overall best.
    pub fn best_history(&self) -> &[f64] {
        &self.history[self.restart_index]
    }

    /// Final global-best value of every restart.
    pub fn restart_finals(&self) -> Vec<f64> {
        self.history.iter().map(|h| *h.last().expect("history is never empty")).collect()
    }
}

/// Minimizes `objective` over `R^dim`.
pub fn pso_minimize<F>(objective: F, dim: usize, cfg: &PsoConfig) -> Result<PsoRun>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    pso_minimize_from(objective, dim, cfg, &[])
}

/// As [`pso_minimize`], with `initial` positions placed as the first particles of every restart.
pub fn pso_minimize_from<F>(objective: F, dim: usize, cfg: &PsoConfig, initial: &[Vec<f64>]) -> Result<PsoRun>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    cfg.validate(dim)?;
    if initial.len() > cfg.swarm_size {
        return Err(Error::InvalidConfig(format!(
            "{} initial points for a swarm of {}",
            initial.len(),
            cfg.swarm_size
        )));
    }
    if let Some(bad) = initial.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: bad.len(),
        });
    }

    let mut history = Vec::with_capacity(cfg.restarts);
    let mut best: Option<(f64, Vec<f64>, usize)> = None;
    let mut evaluations = 0u64;
    let mut nan_evaluations = 0u64;
    for r in 0..cfg.restarts {
        let out = run_swarm(&objective, dim, cfg, initial, derive_seed(cfg.seed, domain::PSO, r as u64));
        evaluations += out.evaluations;
        nan_evaluations += out.nan_evaluations;
        if best.as_ref().map_or(true, |b| out.best_value < b.0) {
            best = Some((out.best_value, out.best_position, r));
        }
        history.push(out.history);
    }
    let (best_value, best_position, restart_index) = best.expect("restarts >= 1");
    Ok(PsoRun {
        best_position,
        best_value,
        history,
        restart_index,
        evaluations,
        nan_evaluations,
    })
}

struct SwarmOutcome {
    best_position: Vec<f64>,
    best_value: f64,
    history: Vec<f64>,
    evaluations: u64,
    nan_evaluations: u64,
}

struct Particle<R> {
    rng: R,
    position: Vec<f64>,
    velocity: Vec<f64>,
    best_position: Vec<f64>,
    best_value: f64,
}

fn wrap_angle(x: f64) -> f64 {
    let w = x.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Signed shortest arc from `from` to `to`, in `(-π, π]`.
fn arc(to: f64, from: f64) -> f64 {
    let d = (to - from).rem_euclid(TAU);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

fn run_swarm<F>(objective: &F, dim: usize, cfg: &PsoConfig, initial: &[Vec<f64>], seed: u64) -> SwarmOutcome
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let vmax = cfg.velocity_clamp;
    let mut particles: Vec<_> = (0..cfg.swarm_size)
        .map(|p| {
            let mut rng = substream(seed, domain::PSO, p as u64);
            let mut position: Vec<f64> = (0..dim)
                .map(|d| {
                    if cfg.is_periodic(d) {
                        rng.random_range(0.0..TAU)
                    } else {
                        rng.random_range(-PI..=PI)
                    }
                })
                .collect();
            let velocity: Vec<f64> = (0..dim).map(|_| rng.random_range(-vmax..=vmax)).collect();
            if let Some(init) = initial.get(p) {
                position = init
                    .iter()
                    .enumerate()
                    .map(|(d, &x)| if cfg.is_periodic(d) { wrap_angle(x) } else { x })
                    .collect();
            }
            Particle {
                rng,
                best_position: position.clone(),
                position,
                velocity,
                best_value: f64::INFINITY,
            }
        })
        .collect();

    let mut nan_evaluations = 0u64;
    let mut evaluate = |particles: &mut [Particle<_>]| {
        let values: Vec<f64> = particles.par_iter().map(|p| objective(&p.position)).collect();
        for (p, v) in particles.iter_mut().zip(values) {
            let v = if v.is_nan() {
                nan_evaluations += 1;
                f64::INFINITY
            } else {
                v
            };
            if v < p.best_value {
                p.best_value = v;
                p.best_position.clone_from(&p.position);
            }
        }
    };
    let global_best = |particles: &[Particle<_>]| {
        particles
            .iter()
            .enumerate()
            .fold((usize::MAX, f64::INFINITY), |acc, (i, p)| {
                if acc.0 == usize::MAX || p.best_value < acc.1 {
                    (i, p.best_value)
                } else {
                    acc
                }
            })
    };

    evaluate(&mut particles);
    let (mut g_idx, mut g_val) = global_best(&particles);
    let mut g_pos = particles[g_idx].best_position.clone();
    let mut history = Vec::with_capacity(cfg.iterations + 1);
    history.push(g_val);

    for _ in 0..cfg.iterations {
        for p in particles.iter_mut() {
            for d in 0..dim {
                let r1: f64 = p.rng.random();
                let r2: f64 = p.rng.random();
                let x = p.position[d];
                let (to_own, to_global) = if cfg.is_periodic(d) {
                    (arc(p.best_position[d], x), arc(g_pos[d], x))
                } else {
                    (p.best_position[d] - x, g_pos[d] - x)
                };
                let v = cfg.inertia * p.velocity[d] + cfg.cognitive * r1 * to_own + cfg.social * r2 * to_global;
                let v = v.clamp(-vmax, vmax);
                p.velocity[d] = v;
                p.position[d] = if cfg.is_periodic(d) { wrap_angle(x + v) } else { x + v };
            }
        }
        evaluate(&mut particles);
        let (i, v) = global_best(&particles);
        if v < g_val {
            g_idx = i;
            g_val = v;
            g_pos.clone_from(&particles[g_idx].best_position);
        }
        history.push(g_val);
    }

    SwarmOutcome {
        best_position: g_pos,
        best_value: g_val,
        history,
        evaluations: (cfg.swarm_size * (cfg.iterations + 1)) as u64,
        nan_evaluations,
    }
}
