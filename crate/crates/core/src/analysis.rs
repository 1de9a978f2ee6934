//! Prior-based win probabilities, evidence comparison and the consent
//! analysis of the two-prisoner swap.
//!
//! Priors live here and only here; models never carry one. The default
//! prior is uniform over the feasible parameters.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::model::{Decision, DiscreteModel, LikelihoodVector, ModelError, Verdict};
use crate::rational::{ratio, Rational};
use crate::scenarios::{prisoners_guard_joint, Prisoner};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("prior has {found} weights for {expected} parameters")]
    PriorLength { found: usize, expected: usize },
    #[error("prior weight for θ={0} is negative")]
    NegativePrior(String),
    #[error("prior weights sum to {0}, expected 1")]
    PriorSum(Rational),
    #[error("prior puts weight on infeasible θ={0}")]
    PriorOnInfeasible(String),
    #[error("outcome `{0}` has probability zero under the prior")]
    ZeroProbabilityOutcome(String),
    #[error("A1={0} is not a possible answer to prisoner A")]
    InconsistentObservation(String),
    #[error("unknown policy `{0}` (expected stay, switch or mle)")]
    UnknownPolicy(String),
}

/// Weights over a model's parameters, summing to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prior {
    params: Vec<String>,
    weights: Vec<Rational>,
}

impl Prior {
    /// Uniform over the feasible parameters; infeasible ones get weight 0.
    pub fn uniform(model: &DiscreteModel) -> Self {
        let n = model.feasible_params().count() as i64;
        let weights = (0..model.params().len())
            .map(|j| {
                if model.is_feasible(j) {
                    ratio(1, n)
                } else {
                    Rational::zero()
                }
            })
            .collect();
        Self {
            params: model.params().to_vec(),
            weights,
        }
    }

    pub fn new(model: &DiscreteModel, weights: Vec<Rational>) -> Result<Self, AnalysisError> {
        let params = model.params();
        if weights.len() != params.len() {
            return Err(AnalysisError::PriorLength {
                found: weights.len(),
                expected: params.len(),
            });
        }
        for (j, (p, w)) in params.iter().zip(&weights).enumerate() {
            if w.is_negative() {
                return Err(AnalysisError::NegativePrior(p.clone()));
            }
            if w.is_positive() && !model.is_feasible(j) {
                return Err(AnalysisError::PriorOnInfeasible(p.clone()));
            }
        }
        let sum: Rational = weights.iter().sum();
        if !sum.is_one() {
            return Err(AnalysisError::PriorSum(sum));
        }
        Ok(Self {
            params: params.to_vec(),
            weights,
        })
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    fn check_against(&self, model: &DiscreteModel) -> Result<(), AnalysisError> {
        if self.params != model.params() {
            return Err(AnalysisError::PriorLength {
                found: self.params.len(),
                expected: model.params().len(),
            });
        }
        for (j, w) in self.weights.iter().enumerate() {
            if w.is_positive() && !model.is_feasible(j) {
                return Err(AnalysisError::PriorOnInfeasible(self.params[j].clone()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Weighted {
    pub label: String,
    pub p: Rational,
}

/// Exact posterior `prior[θ]·L(θ) / Σ`.
pub fn posterior(
    model: &DiscreteModel,
    prior: &Prior,
    outcome: &str,
) -> Result<Vec<Weighted>, AnalysisError> {
    prior.check_against(model)?;
    let lik = model.likelihood(outcome)?;
    let joint: Vec<Rational> = prior
        .weights
        .iter()
        .zip(lik.values())
        .map(|(w, l)| w * l)
        .collect();
    let evidence: Rational = joint.iter().sum();
    if evidence.is_zero() {
        return Err(AnalysisError::ZeroProbabilityOutcome(outcome.to_string()));
    }
    Ok(model
        .params()
        .iter()
        .zip(joint)
        .map(|(label, j)| Weighted {
            label: label.clone(),
            p: j / &evidence,
        })
        .collect())
}

/// How the contestant acts on an observation.
///
/// A policy maps (model, outcome, initial choice) to a set of final
/// choices; when the set has more than one member the final choice is
/// uniform over it. `FollowMle` keeps the initial choice on ties, so an
/// `Indifferent` decision is scored as staying.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Policy {
    Stay,
    /// Move to the alternative the observation has not eliminated (nonzero
    /// likelihood). Stays when nothing is left to move to.
    AlwaysSwitch,
    FollowMle,
}

impl Policy {
    pub const ALL: [Policy; 3] = [Policy::Stay, Policy::AlwaysSwitch, Policy::FollowMle];

    /// Parameter indices the policy may end on.
    pub fn final_choices(
        self,
        model: &DiscreteModel,
        outcome: usize,
        initial: usize,
    ) -> Vec<usize> {
        let row = &model.table()[outcome];
        match self {
            Policy::Stay => vec![initial],
            Policy::AlwaysSwitch => {
                let alternatives: Vec<usize> = (0..row.len())
                    .filter(|&j| j != initial && !row[j].is_zero())
                    .collect();
                if alternatives.is_empty() {
                    vec![initial]
                } else {
                    alternatives
                }
            }
            Policy::FollowMle => {
                let decision =
                    Decision::from_mle(&model.params()[initial], model.mle(&model.outcomes()[outcome]).expect("index in range"));
                match decision.verdict {
                    Verdict::Switch => decision
                        .targets
                        .iter()
                        .map(|t| model.param_index(t).expect("mle returns params"))
                        .collect(),
                    Verdict::Stay | Verdict::Indifferent | Verdict::Undefined => vec![initial],
                }
            }
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Policy::Stay => "stay",
            Policy::AlwaysSwitch => "switch",
            Policy::FollowMle => "mle",
        })
    }
}

impl FromStr for Policy {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "stay" => Ok(Policy::Stay),
            "switch" | "always-switch" => Ok(Policy::AlwaysSwitch),
            "mle" | "follow-mle" => Ok(Policy::FollowMle),
            _ => Err(AnalysisError::UnknownPolicy(s.to_string())),
        }
    }
}

impl Serialize for Policy {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WinProbability {
    pub win: Rational,
    pub cancelled: Rational,
    pub loss: Rational,
}

impl WinProbability {
    /// Win probability given the game was not cancelled.
    pub fn conditional_win(&self) -> Option<Rational> {
        self.win.checked_div(&(Rational::one() - &self.cancelled))
    }
}

/// Exact overall win/cancel/loss probabilities, summing over θ under the
/// prior and over outcomes under each column.
pub fn win_probability(
    model: &DiscreteModel,
    prior: &Prior,
    policy: Policy,
    initial: &str,
) -> Result<WinProbability, AnalysisError> {
    prior.check_against(model)?;
    let init = model.param_index(initial)?;
    let mut win = Rational::zero();
    let mut cancelled = Rational::zero();
    for (theta, w) in prior.weights.iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        for (i, outcome) in model.outcomes().iter().enumerate() {
            let mass = w * model.entry(i, theta);
            if mass.is_zero() {
                continue;
            }
            if model.is_game_off(outcome) {
                cancelled = cancelled + mass;
                continue;
            }
            let choices = policy.final_choices(model, i, init);
            if choices.contains(&theta) {
                win = win + mass * ratio(1, choices.len() as i64);
            }
        }
    }
    let loss = Rational::one() - &win - &cancelled;
    Ok(WinProbability {
        win,
        cancelled,
        loss,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvidenceView {
    pub model: String,
    pub outcome: String,
    pub likelihood: LikelihoodVector,
    pub mle: Vec<String>,
    pub decision: Decision,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvidenceComparison {
    pub initial: String,
    pub left: EvidenceView,
    pub right: EvidenceView,
    pub same_likelihood: bool,
    pub same_decision: bool,
}

fn evidence_view(
    model: &DiscreteModel,
    outcome: &str,
    initial: &str,
) -> Result<EvidenceView, AnalysisError> {
    Ok(EvidenceView {
        model: model.name().to_string(),
        outcome: outcome.to_string(),
        likelihood: model.likelihood(outcome)?,
        mle: model.mle(outcome)?,
        decision: model.decide(outcome, initial)?,
    })
}

/// Reads the same observation through two models side by side. The
/// outcome labels may differ when the models name the same datum
/// differently (`A1=2` versus `y2`).
pub fn compare_evidence(
    left: &DiscreteModel,
    left_outcome: &str,
    right: &DiscreteModel,
    right_outcome: &str,
    initial: &str,
) -> Result<EvidenceComparison, AnalysisError> {
    let l = evidence_view(left, left_outcome, initial)?;
    let r = evidence_view(right, right_outcome, initial)?;
    Ok(EvidenceComparison {
        initial: initial.to_string(),
        same_likelihood: l.likelihood == r.likelihood,
        same_decision: l.decision == r.decision,
        left: l,
        right: r,
    })
}

/// What a prisoner should do with the evidence from both answers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Advice {
    SwitchWith(Vec<Prisoner>),
    DontSwitch,
    None,
}

impl Advice {
    fn from_decision(decision: &Decision) -> Self {
        match decision.verdict {
            Verdict::Stay => Advice::DontSwitch,
            Verdict::Switch => Advice::SwitchWith(
                decision
                    .targets
                    .iter()
                    .filter_map(|t| Prisoner::from_label(t))
                    .collect(),
            ),
            Verdict::Indifferent | Verdict::Undefined => Advice::None,
        }
    }

    pub fn switches_with(&self, p: Prisoner) -> bool {
        matches!(self, Advice::SwitchWith(ps) if ps.contains(&p))
    }
}

impl fmt::Display for Advice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Advice::SwitchWith(ps) => {
                let names: Vec<String> = ps.iter().map(Prisoner::to_string).collect();
                write!(f, "Switch with {}", names.join(" or "))
            }
            Advice::DontSwitch => f.write_str("Don't switch!"),
            Advice::None => f.write_str("None"),
        }
    }
}

impl Serialize for Advice {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsentRow {
    pub outcome: String,
    pub a1: String,
    pub a2: String,
    pub likelihood: LikelihoodVector,
    pub mle: Vec<String>,
    pub better_for_a: Advice,
    pub better_for_b: Advice,
}

fn split_pair(label: &str) -> Option<(String, String)> {
    let inner = label.strip_prefix('(')?.strip_suffix(')')?;
    let (a, b) = inner.split_once(',')?;
    Some((a.to_string(), b.to_string()))
}

fn consent_row(model: &DiscreteModel, outcome: &str) -> Result<ConsentRow, AnalysisError> {
    let (a1, a2) = split_pair(outcome).ok_or_else(|| ModelError::UnknownOutcome(outcome.into()))?;
    let likelihood = model.likelihood(outcome)?;
    let mle = likelihood.argmax();
    let advice = |p: Prisoner| Advice::from_decision(&Decision::from_mle(&p.label(), mle.clone()));
    Ok(ConsentRow {
        outcome: outcome.to_string(),
        a1,
        a2,
        better_for_a: advice(Prisoner::A),
        better_for_b: advice(Prisoner::B),
        likelihood,
        mle,
    })
}

/// The joint `(A1,A2)` outcomes that can occur, with each prisoner's best
/// move on seeing both answers.
pub fn consent_table() -> Vec<ConsentRow> {
    let model = prisoners_guard_joint();
    model
        .outcomes()
        .iter()
        .filter(|o| !model.likelihood(o).expect("declared outcome").is_zero())
        .map(|o| consent_row(&model, o).expect("joint outcomes are pairs"))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Willingness {
    /// Willing unless the swap is disadvantageous.
    Weak,
    /// Willing only when the swap is advantageous.
    Strict,
}

impl Willingness {
    fn accepts(self, own: &Rational, other: &Rational) -> bool {
        match self {
            Willingness::Weak => other >= own,
            Willingness::Strict => other > own,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Advantage {
    Gain,
    Neutral,
    Loss,
}

/// One possible answer to B, seen from A's side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsentCase {
    pub outcome: String,
    pub a2: String,
    pub likelihood_a: Rational,
    pub likelihood_b: Rational,
    /// Effect of an A↔B swap on A's likelihood of release.
    pub advantage_for_a: Advantage,
    pub a_willing: bool,
    pub b_willing: bool,
    pub mutual: bool,
    pub neutral: bool,
    pub better_for_a: Advice,
    pub better_for_b: Advice,
    /// Whether either party's best move is the A↔B swap itself.
    pub swap_sought: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsentAnalysis {
    pub a1: String,
    pub willingness: Willingness,
    pub cases: Vec<ConsentCase>,
    /// Outcomes where both parties would agree to the swap.
    pub consented: Vec<String>,
    /// Every consented swap leaves both likelihoods equal.
    pub all_consented_neutral: bool,
}

/// A knows only his own answer `a1`. For every answer B could have
/// received, decide whether each party would agree to swap fates.
pub fn mutual_consent(a1: &str, willingness: Willingness) -> Result<ConsentAnalysis, AnalysisError> {
    let model = prisoners_guard_joint();
    let prefix = format!("({a1},");
    let possible: Vec<&String> = model
        .outcomes()
        .iter()
        .filter(|o| o.starts_with(&prefix))
        .filter(|o| !model.likelihood(o).expect("declared outcome").is_zero())
        .collect();
    if possible.is_empty() {
        return Err(AnalysisError::InconsistentObservation(a1.to_string()));
    }
    let (a, b) = (Prisoner::A.label(), Prisoner::B.label());
    let mut cases = Vec::with_capacity(possible.len());
    for outcome in possible {
        let row = consent_row(&model, outcome)?;
        let la = row.likelihood.get(&a).expect("param A").clone();
        let lb = row.likelihood.get(&b).expect("param B").clone();
        let a_willing = willingness.accepts(&la, &lb);
        let b_willing = willingness.accepts(&lb, &la);
        cases.push(ConsentCase {
            outcome: outcome.clone(),
            a2: row.a2,
            advantage_for_a: match lb.cmp(&la) {
                std::cmp::Ordering::Greater => Advantage::Gain,
                std::cmp::Ordering::Equal => Advantage::Neutral,
                std::cmp::Ordering::Less => Advantage::Loss,
            },
            a_willing,
            b_willing,
            mutual: a_willing && b_willing,
            neutral: la == lb,
            swap_sought: row.better_for_a.switches_with(Prisoner::B)
                || row.better_for_b.switches_with(Prisoner::A),
            better_for_a: row.better_for_a,
            better_for_b: row.better_for_b,
            likelihood_a: la,
            likelihood_b: lb,
        });
    }
    let consented: Vec<String> = cases
        .iter()
        .filter(|c| c.mutual)
        .map(|c| c.outcome.clone())
        .collect();
    let all_consented_neutral = cases.iter().filter(|c| c.mutual).all(|c| c.neutral);
    Ok(ConsentAnalysis {
        a1: a1.to_string(),
        willingness,
        cases,
        consented,
        all_consented_neutral,
    })
}
