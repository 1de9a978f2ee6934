//! Seeded Monte Carlo runs checked against the exact analysis.
//!
//! Trial `i` draws from its own stream, `SeededRng::for_trial(seed, i)`,
//! in a fixed order: θ from the prior, then the outcome from θ's column,
//! then one draw per policy whose final choice set has several members.
//! Partial tallies merge by addition, so the report is the same whatever
//! the thread count.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::analysis::{win_probability, AnalysisError, Policy, Prior};
use crate::model::DiscreteModel;
use crate::rational::Rational;
use crate::rng::{SeededRng, WeightedSampler};
use crate::scenarios::prisoners_guard_joint;

/// Agreement band in standard errors.
pub const TOLERANCE_SIGMAS: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimulationError {
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("no policies given")]
    NoPolicies,
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

/// Counts for one policy. Merging is plain addition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub wins: u64,
    pub losses: u64,
    pub cancelled: u64,
}

impl Tally {
    pub fn total(&self) -> u64 {
        self.wins + self.losses + self.cancelled
    }

    pub fn merge(self, other: Tally) -> Tally {
        Tally {
            wins: self.wins + other.wins,
            losses: self.losses + other.losses,
            cancelled: self.cancelled + other.cancelled,
        }
    }
}

/// `4·sqrt(p(1−p)/n)`.
pub fn tolerance(p: f64, trials: u64) -> f64 {
    TOLERANCE_SIGMAS * (p * (1.0 - p) / trials as f64).sqrt()
}

fn decimal(x: f64) -> String {
    format!("{x:.6}")
}

/// An empirical rate next to its exact value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateCheck {
    pub count: u64,
    pub empirical: String,
    pub exact: Rational,
    pub tolerance: String,
    pub within: bool,
    #[serde(skip)]
    pub empirical_value: f64,
}

impl RateCheck {
    fn new(count: u64, trials: u64, exact: Rational) -> Self {
        let empirical_value = count as f64 / trials as f64;
        let p = exact.to_f64();
        let tol = tolerance(p, trials);
        Self {
            count,
            empirical: decimal(empirical_value),
            within: (empirical_value - p).abs() <= tol,
            tolerance: decimal(tol),
            exact,
            empirical_value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicyReport {
    pub policy: Policy,
    pub tally: Tally,
    pub win: RateCheck,
    pub loss: RateCheck,
    pub cancelled: RateCheck,
}

impl PolicyReport {
    /// Wins among trials that were not cancelled.
    pub fn conditional_win_rate(&self) -> Option<f64> {
        let on = self.tally.wins + self.tally.losses;
        (on > 0).then(|| self.tally.wins as f64 / on as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub model: String,
    pub initial: String,
    pub trials: u64,
    pub seed: u64,
    pub tolerance_sigmas: f64,
    pub policies: Vec<PolicyReport>,
}

impl SimulationReport {
    pub fn all_within(&self) -> bool {
        self.policies
            .iter()
            .all(|p| p.win.within && p.loss.within && p.cancelled.within)
    }

    pub fn policy(&self, policy: Policy) -> Option<&PolicyReport> {
        self.policies.iter().find(|p| p.policy == policy)
    }
}

/// Per-θ outcome samplers; `None` for θ outside the prior's support.
fn column_samplers(model: &DiscreteModel, prior: &Prior) -> Vec<Option<WeightedSampler>> {
    prior
        .weights()
        .iter()
        .enumerate()
        .map(|(j, w)| {
            w.is_positive().then(|| {
                let col: Vec<Rational> = model.column(j).map(|(_, p)| p.clone()).collect();
                WeightedSampler::new(&col).expect("feasible column sums to 1")
            })
        })
        .collect()
}

fn run_chunk<F>(range: std::ops::Range<u64>, policies: usize, trial: &F) -> Vec<Tally>
where
    F: Fn(u64, &mut [Tally]) + Sync,
{
    let mut acc = vec![Tally::default(); policies];
    for i in range {
        trial(i, &mut acc);
    }
    acc
}

const CHUNK: u64 = 4096;

/// Runs `trials` in parallel chunks and merges the tallies.
fn run_trials<F>(trials: u64, policies: usize, trial: F) -> Vec<Tally>
where
    F: Fn(u64, &mut [Tally]) + Sync,
{
    let chunks = trials.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| run_chunk(c * CHUNK..((c + 1) * CHUNK).min(trials), policies, &trial))
        .reduce(
            || vec![Tally::default(); policies],
            |a, b| a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect(),
        )
}

pub fn simulate(
    model: &DiscreteModel,
    prior: &Prior,
    policies: &[Policy],
    initial: &str,
    trials: u64,
    seed: u64,
) -> Result<SimulationReport, SimulationError> {
    if trials == 0 {
        return Err(SimulationError::NoTrials);
    }
    if policies.is_empty() {
        return Err(SimulationError::NoPolicies);
    }
    let exact = policies
        .iter()
        .map(|&p| win_probability(model, prior, p, initial))
        .collect::<Result<Vec<_>, _>>()?;
    let init = model.param_index(initial).map_err(AnalysisError::from)?;
    let theta_sampler = WeightedSampler::new(prior.weights()).expect("prior sums to 1");
    let outcome_samplers = column_samplers(model, prior);
    let game_off: Vec<bool> = model.outcomes().iter().map(|o| model.is_game_off(o)).collect();
    // Final choice sets depend only on the outcome.
    let choices: Vec<Vec<Vec<usize>>> = policies
        .iter()
        .map(|p| {
            (0..model.outcomes().len())
                .map(|i| p.final_choices(model, i, init))
                .collect()
        })
        .collect();

    let tallies = run_trials(trials, policies.len(), |i, acc| {
        let mut rng = SeededRng::for_trial(seed, i);
        let theta = theta_sampler.sample(&mut rng);
        let outcome = outcome_samplers[theta]
            .as_ref()
            .expect("θ drawn from the prior's support")
            .sample(&mut rng);
        for (k, tally) in acc.iter_mut().enumerate() {
            if game_off[outcome] {
                tally.cancelled += 1;
                continue;
            }
            let set = &choices[k][outcome];
            let pick = if set.len() == 1 {
                set[0]
            } else {
                set[rng.below(set.len() as u64) as usize]
            };
            if pick == theta {
                tally.wins += 1;
            } else {
                tally.losses += 1;
            }
        }
    });

    let policies = policies
        .iter()
        .zip(tallies)
        .zip(exact)
        .map(|((&policy, tally), exact)| PolicyReport {
            policy,
            win: RateCheck::new(tally.wins, trials, exact.win),
            loss: RateCheck::new(tally.losses, trials, exact.loss),
            cancelled: RateCheck::new(tally.cancelled, trials, exact.cancelled),
            tally,
        })
        .collect();
    Ok(SimulationReport {
        model: model.name().to_string(),
        initial: initial.to_string(),
        trials,
        seed,
        tolerance_sigmas: TOLERANCE_SIGMAS,
        policies,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointCell {
    pub theta: String,
    pub outcome: String,
    pub check: RateCheck,
}

/// Empirical frequencies of `(θ, A1, A2)` under a uniform θ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointFrequencyTable {
    pub trials: u64,
    pub seed: u64,
    pub cells: Vec<JointCell>,
}

impl JointFrequencyTable {
    pub fn cell(&self, theta: &str, outcome: &str) -> Option<&JointCell> {
        self.cells
            .iter()
            .find(|c| c.theta == theta && c.outcome == outcome)
    }

    /// Empirical `P(θ | outcome)`.
    pub fn conditional(&self, theta: &str, outcome: &str) -> Option<f64> {
        let given: u64 = self
            .cells
            .iter()
            .filter(|c| c.outcome == outcome)
            .map(|c| c.check.count)
            .sum();
        let hit = self.cell(theta, outcome)?.check.count;
        (given > 0).then(|| hit as f64 / given as f64)
    }

    pub fn all_within(&self) -> bool {
        self.cells.iter().all(|c| c.check.within)
    }
}

pub fn simulate_joint(trials: u64, seed: u64) -> Result<JointFrequencyTable, SimulationError> {
    if trials == 0 {
        return Err(SimulationError::NoTrials);
    }
    let model = prisoners_guard_joint();
    let prior = Prior::uniform(&model);
    let theta_sampler = WeightedSampler::new(prior.weights()).expect("uniform prior");
    let outcome_samplers = column_samplers(&model, &prior);
    let n_out = model.outcomes().len();
    let n_params = model.params().len();

    // One tally slot per (θ, outcome) cell, counted in `wins`.
    let tallies = run_trials(trials, n_params * n_out, |i, acc| {
        let mut rng = SeededRng::for_trial(seed, i);
        let theta = theta_sampler.sample(&mut rng);
        let outcome = outcome_samplers[theta]
            .as_ref()
            .expect("uniform prior over feasible θ")
            .sample(&mut rng);
        acc[theta * n_out + outcome].wins += 1;
    });

    let mut cells = Vec::with_capacity(n_params * n_out);
    for (j, theta) in model.params().iter().enumerate() {
        for (i, outcome) in model.outcomes().iter().enumerate() {
            let exact = &prior.weights()[j] * model.entry(i, j);
            cells.push(JointCell {
                theta: theta.clone(),
                outcome: outcome.clone(),
                check: RateCheck::new(tallies[j * n_out + i].wins, trials, exact),
            });
        }
    }
    Ok(JointFrequencyTable {
        trials,
        seed,
        cells,
    })
}
