//! Discrete models `P(y | θ)`, likelihood reading, maximum likelihood and
//! the switch/stay decision rule.
//!
//! A model is a table with one row per outcome and one column per parameter.
//! Read column-wise it is a sampling distribution; read row-wise it is the
//! likelihood of each parameter given an observed outcome.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("table has {rows} rows but {outcomes} outcomes are declared")]
    RowCount { rows: usize, outcomes: usize },
    #[error("row `{outcome}` has {len} entries, expected {params}")]
    RowLength {
        outcome: String,
        len: usize,
        params: usize,
    },
    #[error("model declares no {0}")]
    Empty(&'static str),
    #[error("duplicate {kind} label `{label}`")]
    DuplicateLabel { kind: &'static str, label: String },
    #[error("entry for θ={param}, y={outcome} is {value}, outside [0, 1]")]
    EntryOutOfRange {
        param: String,
        outcome: String,
        value: Rational,
    },
    #[error("column θ={param} sums to {sum}, expected 0 or 1")]
    ColumnSum { param: String, sum: Rational },
    #[error("every column sums to 0; no parameter is feasible")]
    NoFeasibleParam,
    #[error("unknown outcome `{0}`")]
    UnknownOutcome(String),
    #[error("unknown parameter `{0}`")]
    UnknownParam(String),
    #[error("θ={0} is infeasible (its column is all zeros)")]
    InfeasibleParam(String),
}

/// The JSON shape of a model: `{name, params, outcomes, table}` with
/// rationals as strings, plus the optional `game_off` outcome list.
///
/// A `RawModel` may be invalid; [`DiscreteModel`] is the validated form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawModel {
    pub name: String,
    pub params: Vec<String>,
    pub outcomes: Vec<String>,
    pub table: Vec<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub game_off: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColumnStatus {
    pub param: String,
    pub sum: Rational,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub columns: Vec<ColumnStatus>,
}

impl ValidationReport {
    pub fn feasible(&self) -> impl Iterator<Item = &str> {
        self.columns
            .iter()
            .filter(|c| c.feasible)
            .map(|c| c.param.as_str())
    }

    pub fn infeasible(&self) -> impl Iterator<Item = &str> {
        self.columns
            .iter()
            .filter(|c| !c.feasible)
            .map(|c| c.param.as_str())
    }
}

fn check_unique(kind: &'static str, labels: &[String]) -> Result<(), ModelError> {
    for (i, label) in labels.iter().enumerate() {
        if labels[..i].contains(label) {
            return Err(ModelError::DuplicateLabel {
                kind,
                label: label.clone(),
            });
        }
    }
    Ok(())
}

impl RawModel {
    /// Checks dimensions, entry ranges and the column-sum rule: every column
    /// sums to exactly 1 (feasible) or exactly 0 (infeasible), and at least
    /// one column is feasible.
    pub fn validate(&self) -> Result<ValidationReport, ModelError> {
        if self.params.is_empty() {
            return Err(ModelError::Empty("parameters"));
        }
        if self.outcomes.is_empty() {
            return Err(ModelError::Empty("outcomes"));
        }
        check_unique("parameter", &self.params)?;
        check_unique("outcome", &self.outcomes)?;
        if self.table.len() != self.outcomes.len() {
            return Err(ModelError::RowCount {
                rows: self.table.len(),
                outcomes: self.outcomes.len(),
            });
        }
        for (outcome, row) in self.outcomes.iter().zip(&self.table) {
            if row.len() != self.params.len() {
                return Err(ModelError::RowLength {
                    outcome: outcome.clone(),
                    len: row.len(),
                    params: self.params.len(),
                });
            }
            if let Some((j, value)) = row.iter().enumerate().find(|(_, v)| !v.is_probability()) {
                return Err(ModelError::EntryOutOfRange {
                    param: self.params[j].clone(),
                    outcome: outcome.clone(),
                    value: value.clone(),
                });
            }
        }
        check_unique("game-off", &self.game_off)?;
        if let Some(unknown) = self.game_off.iter().find(|g| !self.outcomes.contains(g)) {
            return Err(ModelError::UnknownOutcome(unknown.clone()));
        }

        let mut columns = Vec::with_capacity(self.params.len());
        for (j, param) in self.params.iter().enumerate() {
            let sum: Rational = self.table.iter().map(|row| &row[j]).sum();
            let feasible = if sum.is_one() {
                true
            } else if sum.is_zero() {
                false
            } else {
                return Err(ModelError::ColumnSum {
                    param: param.clone(),
                    sum,
                });
            };
            columns.push(ColumnStatus {
                param: param.clone(),
                sum,
                feasible,
            });
        }
        if !columns.iter().any(|c| c.feasible) {
            return Err(ModelError::NoFeasibleParam);
        }
        Ok(ValidationReport { columns })
    }
}

/// A validated discrete model. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawModel", into = "RawModel")]
pub struct DiscreteModel {
    raw: RawModel,
    feasible: Vec<bool>,
}

impl TryFrom<RawModel> for DiscreteModel {
    type Error = ModelError;

    fn try_from(raw: RawModel) -> Result<Self, ModelError> {
        let report = raw.validate()?;
        let feasible = report.columns.iter().map(|c| c.feasible).collect();
        Ok(Self { raw, feasible })
    }
}

impl From<DiscreteModel> for RawModel {
    fn from(model: DiscreteModel) -> Self {
        model.raw
    }
}

impl DiscreteModel {
    pub fn new(
        name: impl Into<String>,
        params: Vec<String>,
        outcomes: Vec<String>,
        table: Vec<Vec<Rational>>,
    ) -> Result<Self, ModelError> {
        RawModel {
            name: name.into(),
            params,
            outcomes,
            table,
            game_off: Vec::new(),
        }
        .try_into()
    }

    /// Marks outcomes that cancel the game (scored as neither win nor loss).
    pub fn with_game_off<I, S>(self, labels: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut raw = self.raw;
        raw.game_off = labels.into_iter().map(Into::into).collect();
        raw.try_into()
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        let mut out = self.clone();
        out.raw.name = name.into();
        out
    }

    pub fn name(&self) -> &str {
        &self.raw.name
    }

    pub fn params(&self) -> &[String] {
        &self.raw.params
    }

    pub fn outcomes(&self) -> &[String] {
        &self.raw.outcomes
    }

    /// Rows in outcome order, each with one entry per parameter.
    pub fn table(&self) -> &[Vec<Rational>] {
        &self.raw.table
    }

    pub fn game_off(&self) -> &[String] {
        &self.raw.game_off
    }

    pub fn raw(&self) -> &RawModel {
        &self.raw
    }

    pub fn is_game_off(&self, outcome: &str) -> bool {
        self.raw.game_off.iter().any(|g| g == outcome)
    }

    pub fn validate(&self) -> ValidationReport {
        self.raw.validate().expect("DiscreteModel is validated on construction")
    }

    pub fn param_index(&self, param: &str) -> Result<usize, ModelError> {
        self.raw
            .params
            .iter()
            .position(|p| p == param)
            .ok_or_else(|| ModelError::UnknownParam(param.to_string()))
    }

    pub fn outcome_index(&self, outcome: &str) -> Result<usize, ModelError> {
        self.raw
            .outcomes
            .iter()
            .position(|o| o == outcome)
            .ok_or_else(|| ModelError::UnknownOutcome(outcome.to_string()))
    }

    pub fn is_feasible(&self, param_index: usize) -> bool {
        self.feasible[param_index]
    }

    pub fn feasible_params(&self) -> impl Iterator<Item = &str> {
        self.raw
            .params
            .iter()
            .zip(&self.feasible)
            .filter(|(_, f)| **f)
            .map(|(p, _)| p.as_str())
    }

    pub fn entry(&self, outcome: usize, param: usize) -> &Rational {
        &self.raw.table[outcome][param]
    }

    /// The row for `outcome`, read as a function of the parameter.
    pub fn likelihood(&self, outcome: &str) -> Result<LikelihoodVector, ModelError> {
        let i = self.outcome_index(outcome)?;
        Ok(LikelihoodVector::new(
            self.raw.params.clone(),
            self.raw.table[i].clone(),
        ))
    }

    /// Parameters attaining the maximum likelihood for `outcome`, in
    /// parameter order. Empty when the outcome is impossible under every θ.
    pub fn mle(&self, outcome: &str) -> Result<Vec<String>, ModelError> {
        Ok(self.likelihood(outcome)?.argmax())
    }

    /// Switch/stay verdict for a contestant holding `initial`. A game-off
    /// outcome leaves nothing to decide and yields `Undefined`, whatever its
    /// likelihood.
    pub fn decide(&self, outcome: &str, initial: &str) -> Result<Decision, ModelError> {
        self.param_index(initial)?;
        let targets = self.mle(outcome)?;
        if self.is_game_off(outcome) {
            return Ok(Decision::from_mle(initial, Vec::new()));
        }
        Ok(Decision::from_mle(initial, targets))
    }

    /// Column `theta` as a distribution over outcomes.
    pub fn outcome_distribution(&self, theta: &str) -> Result<Vec<(String, Rational)>, ModelError> {
        let j = self.param_index(theta)?;
        if !self.feasible[j] {
            return Err(ModelError::InfeasibleParam(theta.to_string()));
        }
        Ok(self.column(j).map(|(o, p)| (o.to_string(), p.clone())).collect())
    }

    /// Column `j` with outcome labels, zeros included.
    pub fn column(&self, j: usize) -> impl Iterator<Item = (&str, &Rational)> {
        self.raw
            .outcomes
            .iter()
            .zip(&self.raw.table)
            .map(move |(o, row)| (o.as_str(), &row[j]))
    }
}

/// One table row read as a function of the parameter. Entries need not sum
/// to 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LikelihoodVector {
    params: Vec<String>,
    values: Vec<Rational>,
}

impl LikelihoodVector {
    pub fn new(params: Vec<String>, values: Vec<Rational>) -> Self {
        assert_eq!(params.len(), values.len(), "likelihood arity");
        Self { params, values }
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, param: &str) -> Option<&Rational> {
        self.params
            .iter()
            .position(|p| p == param)
            .map(|i| &self.values[i])
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Rational::is_zero)
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        Self {
            params: self.params.clone(),
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    /// All parameters attaining the maximum, in parameter order. Ties are
    /// kept; an all-zero vector has an empty argmax.
    pub fn argmax(&self) -> Vec<String> {
        let Some(max) = self.values.iter().max() else {
            return Vec::new();
        };
        if max.is_zero() || max.is_negative() {
            return Vec::new();
        }
        self.params
            .iter()
            .zip(&self.values)
            .filter(|(_, v)| *v == max)
            .map(|(p, _)| p.clone())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Stay,
    Switch,
    Indifferent,
    Undefined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Stay => "Stay",
            Verdict::Switch => "Switch",
            Verdict::Indifferent => "Indifferent",
            Verdict::Undefined => "Undefined",
        })
    }
}

/// The verdict for a held choice given the MLE set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub verdict: Verdict,
    pub targets: Vec<String>,
}

impl Decision {
    pub fn from_mle(initial: &str, targets: Vec<String>) -> Self {
        let holds = targets.iter().any(|t| t == initial);
        let verdict = match (targets.len(), holds) {
            (0, _) => Verdict::Undefined,
            (1, true) => Verdict::Stay,
            (_, true) => Verdict::Indifferent,
            (_, false) => Verdict::Switch,
        };
        Self { verdict, targets }
    }
}

/// Renders a label set as `{1,2}`.
pub fn format_set(labels: &[String]) -> String {
    format!("{{{}}}", labels.join(","))
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} → {}", self.verdict, format_set(&self.targets))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn monty() -> DiscreteModel {
        DiscreteModel::new(
            "monty",
            labels(&["1", "2", "3"]),
            labels(&["y1", "y2", "y3"]),
            vec![
                vec![r("0"), r("0"), r("0")],
                vec![r("1/2"), r("0"), r("1")],
                vec![r("1/2"), r("1"), r("0")],
            ],
        )
        .unwrap()
    }

    #[test]
    fn rejects_half_column() {
        let err = DiscreteModel::new(
            "bad",
            labels(&["1", "2"]),
            labels(&["a", "b"]),
            vec![vec![r("1/2"), r("1/4")], vec![r("1/2"), r("1/4")]],
        )
        .unwrap_err();
        assert_eq!(
            err,
            ModelError::ColumnSum {
                param: "2".into(),
                sum: ratio(1, 2)
            }
        );
    }

    #[test]
    fn rejects_out_of_range_and_shape_errors() {
        let err = DiscreteModel::new(
            "bad",
            labels(&["1"]),
            labels(&["a", "b"]),
            vec![vec![r("3/2")], vec![r("-1/2")]],
        )
        .unwrap_err();
        assert!(matches!(err, ModelError::EntryOutOfRange { .. }));
        let err = DiscreteModel::new("bad", labels(&["1"]), labels(&["a"]), vec![]).unwrap_err();
        assert_eq!(err, ModelError::RowCount { rows: 0, outcomes: 1 });
        let err = DiscreteModel::new(
            "bad",
            labels(&["1", "2"]),
            labels(&["a"]),
            vec![vec![r("1")]],
        )
        .unwrap_err();
        assert!(matches!(err, ModelError::RowLength { len: 1, params: 2, .. }));
        let err = DiscreteModel::new(
            "bad",
            labels(&["1", "1"]),
            labels(&["a"]),
            vec![vec![r("1"), r("1")]],
        )
        .unwrap_err();
        assert!(matches!(err, ModelError::DuplicateLabel { .. }));
        let err = DiscreteModel::new("bad", labels(&["1"]), labels(&["a"]), vec![vec![r("0")]])
            .unwrap_err();
        assert_eq!(err, ModelError::NoFeasibleParam);
    }

    #[test]
    fn infeasible_columns_are_reported() {
        let m = DiscreteModel::new(
            "two-promise",
            labels(&["1", "2", "3"]),
            labels(&["y1", "y2", "y3"]),
            vec![
                vec![r("0"), r("0"), r("0")],
                vec![r("0"), r("0"), r("0")],
                vec![r("1"), r("1"), r("0")],
            ],
        )
        .unwrap();
        let report = m.validate();
        assert_eq!(report.feasible().collect::<Vec<_>>(), ["1", "2"]);
        assert_eq!(report.infeasible().collect::<Vec<_>>(), ["3"]);
        assert_eq!(
            m.outcome_distribution("3"),
            Err(ModelError::InfeasibleParam("3".into()))
        );
    }

    #[test]
    fn likelihood_mle_decide() {
        let m = monty();
        assert_eq!(
            m.likelihood("y3").unwrap().values(),
            &[ratio(1, 2), ratio(1, 1), ratio(0, 1)]
        );
        assert_eq!(m.mle("y2").unwrap(), ["3"]);
        assert_eq!(m.mle("y1").unwrap(), Vec::<String>::new());
        let d = m.decide("y3", "1").unwrap();
        assert_eq!(d.verdict, Verdict::Switch);
        assert_eq!(d.targets, ["2"]);
        assert_eq!(d.to_string(), "Switch → {2}");
        assert_eq!(m.decide("y1", "1").unwrap().verdict, Verdict::Undefined);
        assert_eq!(m.decide("y2", "3").unwrap().verdict, Verdict::Stay);
        assert_eq!(m.likelihood("y9"), Err(ModelError::UnknownOutcome("y9".into())));
        assert_eq!(m.decide("y2", "7"), Err(ModelError::UnknownParam("7".into())));
    }

    #[test]
    fn game_off_outcomes_have_no_decision() {
        let m = DiscreteModel::new(
            "forgetful",
            labels(&["1", "2", "3"]),
            labels(&["y2", "y3", "y4"]),
            vec![
                vec![r("1/2"), r("1/2"), r("0")],
                vec![r("1/2"), r("0"), r("1/2")],
                vec![r("0"), r("1/2"), r("1/2")],
            ],
        )
        .unwrap()
        .with_game_off(["y4"])
        .unwrap();
        assert_eq!(m.mle("y4").unwrap(), ["2", "3"]);
        let d = m.decide("y4", "1").unwrap();
        assert_eq!(d.verdict, Verdict::Undefined);
        assert!(d.targets.is_empty());
        assert!(m.clone().with_game_off(["y9"]).is_err());
    }

    #[test]
    fn verdict_partition() {
        let d = Decision::from_mle("1", labels(&["1", "2"]));
        assert_eq!(d.verdict, Verdict::Indifferent);
        let d = Decision::from_mle("1", labels(&["2", "3"]));
        assert_eq!(d.verdict, Verdict::Switch);
        let d = Decision::from_mle("1", labels(&["1"]));
        assert_eq!(d.verdict, Verdict::Stay);
        let d = Decision::from_mle("1", vec![]);
        assert_eq!(d.verdict, Verdict::Undefined);
    }

    #[test]
    fn outcome_distribution_reads_columns() {
        let m = monty();
        let col = m.outcome_distribution("2").unwrap();
        let nonzero: Vec<_> = col.iter().filter(|(_, p)| !p.is_zero()).collect();
        assert_eq!(nonzero, [&("y3".to_string(), ratio(1, 1))]);
    }

    #[test]
    fn json_shape() {
        let m = monty();
        let json = serde_json::to_value(&m).unwrap();
        assert_eq!(json["name"], "monty");
        assert_eq!(json["table"][1][0], "1/2");
        assert!(json.get("game_off").is_none());
        let back: DiscreteModel = serde_json::from_value(json).unwrap();
        assert_eq!(back, m);
        let bad = serde_json::json!({
            "name": "x", "params": ["1"], "outcomes": ["a"], "table": [["1/2"]]
        });
        assert!(serde_json::from_value::<DiscreteModel>(bad).is_err());
    }
}
