//! Simulated annealing over spectral factors, minimising Landau's quotient.
//!
//! One chain draws a random member of `P_n`, then for each maximum step size
//! `S` runs `Kz` inverse temperatures `Z0, Z0 + dZ, ...` with `M` trials each,
//! followed by `M` greedy trials, and divides `S` by `1 + λ` while `S > S_min`.
//! Every `Z` sweep restarts from `Z0`.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::trigpoly::{
    apply_step, cosine_from_factor, landau_objective, membership_check, CosinePolynomial,
    SpectralFactor,
};

pub const DEFAULT_RETRY_CAP: u64 = 1_000_000;
/// Incremental steps between full recomputations of the cosine coefficients.
pub const RESYNC_INTERVAL: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealSchedule {
    /// Initial coefficients are drawn from `[0, bound]`.
    pub bound: f64,
    pub z0: f64,
    pub dz: f64,
    /// Number of inverse temperatures per step size.
    pub z_steps: usize,
    /// Trials per inverse temperature (and for the greedy phase).
    pub trials: usize,
    pub step_init: f64,
    pub lambda: f64,
    pub step_min: f64,
    pub seed: u64,
    pub retry_cap: u64,
}

impl AnnealSchedule {
    pub fn defaults(n: usize, seed: u64) -> Self {
        AnnealSchedule {
            bound: 150.0,
            z0: 12.0,
            dz: 1.0,
            z_steps: 10,
            trials: 300 * n,
            step_init: 3.0,
            lambda: 0.03,
            step_min: 1e-5,
            seed,
            retry_cap: DEFAULT_RETRY_CAP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("bound", self.bound),
            ("z0", self.z0),
            ("dz", self.dz),
            ("step_init", self.step_init),
            ("lambda", self.lambda),
            ("step_min", self.step_min),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Number of step sizes the outer loop visits.
    pub fn outer_iterations(&self) -> usize {
        let mut s = self.step_init;
        let mut count = 0;
        while s > self.step_min {
            count += 1;
            s /= 1.0 + self.lambda;
        }
        count
    }

    /// Draw the annealing parameters from the intervals used for multi-chain
    /// runs: B ∈ [100, 200], Z0 ∈ [8, 16], dZ ∈ [0.5, 2], M ∈ [250n, 350n],
    /// Kz ∈ {10, 11}, S ∈ [2.5, 4], λ ∈ [0.015, 0.05].
    pub fn jittered<R: Rng>(&self, n: usize, rng: &mut R) -> Self {
        AnnealSchedule {
            bound: rng.gen_range(100.0..=200.0),
            z0: rng.gen_range(8.0..=16.0),
            dz: rng.gen_range(0.5..=2.0),
            trials: rng.gen_range(250 * n..=350 * n),
            z_steps: rng.gen_range(10..=11),
            step_init: rng.gen_range(2.5..=4.0),
            lambda: rng.gen_range(0.015..=0.05),
            ..*self
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainResult {
    pub best_factor: SpectralFactor,
    pub best_objective: f64,
    pub accepted_steps: u64,
    pub rejected_steps: u64,
    pub constraint_rejections: u64,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct Member {
    pub factor: SpectralFactor,
    pub cosine: CosinePolynomial,
    pub attempts: u64,
}

/// Draw `c_1..c_n` uniformly from `[0, bound]` until the result lies in `P_n`.
pub fn random_member<R: Rng>(n: usize, bound: f64, rng: &mut R, retry_cap: u64) -> Result<Member> {
    if n == 0 {
        return Err(Error::Domain("degree must be positive".into()));
    }
    if n == 1 {
        // 2c ≤ 1 + c² for every real c, so a_1 > a_0 never holds.
        return Err(Error::RetryCap {
            degree: n,
            bound,
            attempts: 0,
        });
    }
    for attempt in 1..=retry_cap {
        let mut c = Vec::with_capacity(n + 1);
        c.push(1.0);
        c.extend((0..n).map(|_| rng.gen_range(0.0..=bound)));
        let factor = SpectralFactor::new(c)?;
        let cosine = cosine_from_factor(&factor);
        if membership_check(&cosine).is_member {
            return Ok(Member {
                factor,
                cosine,
                attempts: attempt,
            });
        }
    }
    Err(Error::RetryCap {
        degree: n,
        bound,
        attempts: retry_cap,
    })
}

/// The acceptance rule on its own: improvements (and ties) are always kept,
/// a worsening `delta` is kept when `u < exp(-z·delta)`; `z = ∞` is greedy.
pub fn metropolis_accept(delta: f64, z: f64, u: f64) -> bool {
    if delta <= 0.0 {
        return true;
    }
    if z == f64::INFINITY {
        return false;
    }
    u < (-z * delta).exp()
}

/// Mutable state of one chain.
#[derive(Debug, Clone)]
pub struct ChainState {
    factor: SpectralFactor,
    cosine: CosinePolynomial,
    objective: f64,
    best_factor: SpectralFactor,
    best_objective: f64,
    pub accepted_steps: u64,
    pub rejected_steps: u64,
    pub constraint_rejections: u64,
    since_resync: u64,
}

impl ChainState {
    pub fn new(factor: SpectralFactor) -> Result<Self> {
        let cosine = cosine_from_factor(&factor);
        let report = membership_check(&cosine);
        if !report.is_member {
            return Err(Error::Constraint(format!(
                "starting polynomial is not in P_n: {report:?}"
            )));
        }
        let objective = landau_objective(&cosine)?;
        Ok(ChainState {
            best_factor: factor.clone(),
            factor,
            cosine,
            objective,
            best_objective: objective,
            accepted_steps: 0,
            rejected_steps: 0,
            constraint_rejections: 0,
            since_resync: 0,
        })
    }

    pub fn factor(&self) -> &SpectralFactor {
        &self.factor
    }

    pub fn cosine(&self) -> &CosinePolynomial {
        &self.cosine
    }

    pub fn objective(&self) -> f64 {
        self.objective
    }

    pub fn best_objective(&self) -> f64 {
        self.best_objective
    }

    fn resync(&mut self) {
        let fresh = cosine_from_factor(&self.factor);
        // Recomputation may round an active constraint to the wrong side; keep
        // the incremental values in that case.
        if membership_check(&fresh).is_member {
            if let Ok(g) = landau_objective(&fresh) {
                self.cosine = fresh;
                self.objective = g;
            }
        }
        self.since_resync = 0;
    }

    fn into_result(self, seed: u64) -> ChainResult {
        let best_objective = landau_objective(&cosine_from_factor(&self.best_factor))
            .unwrap_or(self.best_objective);
        ChainResult {
            best_factor: self.best_factor,
            best_objective,
            accepted_steps: self.accepted_steps,
            rejected_steps: self.rejected_steps,
            constraint_rejections: self.constraint_rejections,
            seed,
        }
    }
}

/// Perturb `c_k` by `s` and keep the move by the Metropolis rule at inverse
/// temperature `z`. Rejected moves restore the previous state exactly.
pub fn metropolis_step<R: Rng>(state: &mut ChainState, k: usize, s: f64, z: f64, rng: &mut R) -> bool {
    let saved_a = state.cosine.clone();
    let saved_c = state.factor.coeffs()[k];
    apply_step(&mut state.factor, &mut state.cosine, k, s);

    let restore = |state: &mut ChainState, saved_a: CosinePolynomial| {
        state.cosine = saved_a;
        state.factor.set_coeff(k, saved_c);
    };

    if !membership_check(&state.cosine).is_member {
        restore(state, saved_a);
        state.constraint_rejections += 1;
        return false;
    }
    let g = match landau_objective(&state.cosine) {
        Ok(g) => g,
        Err(_) => {
            restore(state, saved_a);
            state.constraint_rejections += 1;
            return false;
        }
    };
    let delta = g - state.objective;
    let u: f64 = rng.gen();
    if !metropolis_accept(delta, z, u) {
        restore(state, saved_a);
        state.rejected_steps += 1;
        return false;
    }
    state.objective = g;
    state.accepted_steps += 1;
    state.since_resync += 1;
    if g < state.best_objective {
        state.best_objective = g;
        state.best_factor = state.factor.clone();
    }
    if state.since_resync >= RESYNC_INTERVAL {
        state.resync();
    }
    true
}

fn anneal_from(mut state: ChainState, sched: &AnnealSchedule, rng: &mut ChaCha8Rng) -> ChainResult {
    let n = state.factor.degree();
    let mut step = sched.step_init;
    while step > sched.step_min {
        for zi in 0..sched.z_steps {
            let z = sched.z0 + zi as f64 * sched.dz;
            for _ in 0..sched.trials {
                let k = rng.gen_range(1..=n);
                let s = rng.gen_range(-step..=step);
                metropolis_step(&mut state, k, s, z, rng);
            }
        }
        for _ in 0..sched.trials {
            let k = rng.gen_range(1..=n);
            let s = rng.gen_range(-step..=step);
            metropolis_step(&mut state, k, s, f64::INFINITY, rng);
        }
        step /= 1.0 + sched.lambda;
    }
    state.into_result(sched.seed)
}

pub fn run_chain(n: usize, sched: &AnnealSchedule) -> Result<ChainResult> {
    sched.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(sched.seed);
    let member = random_member(n, sched.bound, &mut rng, sched.retry_cap)?;
    let state = ChainState::new(member.factor)?;
    Ok(anneal_from(state, sched, &mut rng))
}

/// Continue annealing from a given member of `P_n`.
pub fn polish(factor: &SpectralFactor, sched: &AnnealSchedule) -> Result<ChainResult> {
    sched.validate()?;
    let state = ChainState::new(factor.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(sched.seed);
    Ok(anneal_from(state, sched, &mut rng))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of chain `i`: the master seed itself for chain 0, otherwise
/// `splitmix64(master + i·0x9E3779B97F4A7C15)`.
pub fn chain_seed(master: u64, i: u64) -> u64 {
    if i == 0 {
        master
    } else {
        splitmix64(master.wrapping_add(i.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
    }
}

#[derive(Debug, Clone)]
pub struct ChainLogEntry {
    pub chain: usize,
    pub schedule: AnnealSchedule,
    pub outcome: std::result::Result<ChainResult, String>,
}

#[derive(Debug, Clone)]
pub struct ChainsOutcome {
    pub best: ChainResult,
    pub log: Vec<ChainLogEntry>,
}

impl ChainsOutcome {
    pub fn failures(&self) -> usize {
        self.log.iter().filter(|e| e.outcome.is_err()).count()
    }
}

pub const LOG_HEADER: &str = "chain,seed,bound,z0,dz,z_steps,trials,step_init,lambda,step_min,best_objective,accepted,rejected,constraint_rejections,status";

pub fn format_log(log: &[ChainLogEntry]) -> String {
    let mut out = String::from(LOG_HEADER);
    out.push('\n');
    for e in log {
        let s = &e.schedule;
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{},{},{},",
            e.chain, s.seed, s.bound, s.z0, s.dz, s.z_steps, s.trials, s.step_init, s.lambda, s.step_min
        );
        match &e.outcome {
            Ok(r) => {
                let _ = writeln!(
                    out,
                    "{:.15},{},{},{},ok",
                    r.best_objective, r.accepted_steps, r.rejected_steps, r.constraint_rejections
                );
            }
            Err(msg) => {
                let _ = writeln!(out, ",,,,error: {}", msg.replace(',', ";"));
            }
        }
    }
    out
}

/// Run independent chains (in parallel) and keep the best. Chain `i` uses
/// [`chain_seed`]`(template.seed, i)`; with jitter its parameters are drawn
/// from a second stream of the same seed.
pub fn run_chains(n: usize, template: &AnnealSchedule, chains: usize, jitter: bool) -> Result<ChainsOutcome> {
    if chains == 0 {
        return Err(Error::Domain("need at least one chain".into()));
    }
    template.validate()?;
    let log: Vec<ChainLogEntry> = (0..chains)
        .into_par_iter()
        .map(|i| {
            let seed = chain_seed(template.seed, i as u64);
            let mut sched = AnnealSchedule { seed, ..*template };
            if jitter {
                let mut prng = ChaCha8Rng::seed_from_u64(seed);
                prng.set_stream(1);
                sched = sched.jittered(n, &mut prng);
            }
            let outcome = run_chain(n, &sched).map_err(|e| e.to_string());
            ChainLogEntry {
                chain: i,
                schedule: sched,
                outcome,
            }
        })
        .collect();
    let best = log
        .iter()
        .filter_map(|e| e.outcome.as_ref().ok())
        .min_by(|a, b| a.best_objective.total_cmp(&b.best_objective))
        .cloned();
    match best {
        Some(best) => Ok(ChainsOutcome { best, log }),
        None => Err(run_chain(n, &AnnealSchedule {
            seed: template.seed,
            ..*template
        })
        .err()
        .unwrap_or_else(|| Error::Domain("all chains failed".into()))),
    }
}
