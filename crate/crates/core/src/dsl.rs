//! The `.sdg` text format for disclosure-game tables.
//!
//! ```text
//! # comment
//! scenario monty
//! params 1 2 3
//! outcomes y1 y2 y3
//! row y1 0 0 0
//! row y2 1/2 0 1
//! row y3 0.5 1 0
//! ```
//!
//! The format is line-oriented. Blank lines and `#` comments (to end of
//! line) are ignored. `scenario`, `params` and `outcomes` appear once each,
//! before any `row`; every declared outcome gets exactly one `row` with one
//! probability per parameter. Probabilities are `a/b`, integers, or
//! decimals (converted exactly). An optional `gameoff <outcome>+` line marks
//! outcomes that cancel the game.

use std::fmt;

use thiserror::Error;

use crate::model::{DiscreteModel, ModelError, RawModel};
use crate::rational::Rational;

/// 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spanned<T> {
    pub value: T,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowDecl {
    pub outcome: Spanned<String>,
    pub values: Vec<Spanned<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioDoc {
    pub name: Spanned<String>,
    pub params: Vec<Spanned<String>>,
    pub outcomes: Vec<Spanned<String>>,
    /// In declared outcome order.
    pub rows: Vec<RowDecl>,
    pub game_off: Vec<Spanned<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("malformed probability `{0}`")]
    BadRational(String),
    #[error("`{0}` expects at least one argument")]
    MissingArgument(&'static str),
    #[error("`scenario` takes exactly one name")]
    ExtraArgument,
    #[error("duplicate `{0}` directive")]
    DuplicateDirective(&'static str),
    #[error("duplicate {kind} label `{label}`")]
    DuplicateLabel { kind: &'static str, label: String },
    #[error("undeclared outcome `{0}`")]
    UnknownOutcome(String),
    #[error("second row for outcome `{0}`")]
    DuplicateRow(String),
    #[error("row `{outcome}` has {found} probabilities, expected {expected}")]
    Arity {
        outcome: String,
        found: usize,
        expected: usize,
    },
    #[error("row appears before `{0}` is declared")]
    RowBeforeDeclaration(&'static str),
    #[error("no row for outcome `{0}`")]
    MissingRow(String),
    #[error("missing `{0}` directive")]
    MissingDirective(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {kind}")]
pub struct ParseError {
    pub span: Span,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    /// The model rejected the table. `span` points at the offending entry
    /// or declaration when one can be identified.
    #[error("{}{source}", span.map(|s| format!("{s}: ")).unwrap_or_default())]
    Model { span: Option<Span>, source: ModelError },
}

/// Splits a line into whitespace-separated tokens with 1-based columns,
/// stopping at `#`.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let content = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in content.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &content[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &content[s..]));
    }
    out.into_iter()
        .map(|(byte, tok)| (line[..byte].chars().count() + 1, tok))
        .collect()
}

fn err(line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
    ParseError {
        span: Span { line, column },
        kind,
    }
}

fn labels(
    kind: &'static str,
    line: usize,
    args: &[(usize, &str)],
) -> Result<Vec<Spanned<String>>, ParseError> {
    let mut out: Vec<Spanned<String>> = Vec::with_capacity(args.len());
    for &(column, tok) in args {
        if out.iter().any(|l| l.value == tok) {
            return Err(err(
                line,
                column,
                ParseErrorKind::DuplicateLabel {
                    kind,
                    label: tok.to_string(),
                },
            ));
        }
        out.push(Spanned {
            value: tok.to_string(),
            span: Span { line, column },
        });
    }
    Ok(out)
}

/// Parses a document, stopping at the first error.
pub fn parse(text: &str) -> Result<ScenarioDoc, ParseError> {
    let mut name: Option<Spanned<String>> = None;
    let mut params: Option<Vec<Spanned<String>>> = None;
    let mut outcomes: Option<Vec<Spanned<String>>> = None;
    let mut game_off: Option<Vec<Spanned<String>>> = None;
    let mut rows: Vec<Option<RowDecl>> = Vec::new();
    let mut last_line = 0;

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let toks = tokens(line);
        let Some(&(col, directive)) = toks.first() else {
            continue;
        };
        let args = &toks[1..];
        let require_args = |what: &'static str| {
            if args.is_empty() {
                Err(err(lineno, col, ParseErrorKind::MissingArgument(what)))
            } else {
                Ok(())
            }
        };
        let once = |seen: bool, what: &'static str| {
            if seen {
                Err(err(lineno, col, ParseErrorKind::DuplicateDirective(what)))
            } else {
                Ok(())
            }
        };
        match directive {
            "scenario" => {
                once(name.is_some(), "scenario")?;
                require_args("scenario")?;
                if let Some(&(c, _)) = args.get(1) {
                    return Err(err(lineno, c, ParseErrorKind::ExtraArgument));
                }
                name = Some(Spanned {
                    value: args[0].1.to_string(),
                    span: Span {
                        line: lineno,
                        column: args[0].0,
                    },
                });
            }
            "params" => {
                once(params.is_some(), "params")?;
                require_args("params")?;
                params = Some(labels("parameter", lineno, args)?);
            }
            "outcomes" => {
                once(outcomes.is_some(), "outcomes")?;
                require_args("outcomes")?;
                let declared = labels("outcome", lineno, args)?;
                rows = vec![None; declared.len()];
                outcomes = Some(declared);
            }
            "gameoff" => {
                once(game_off.is_some(), "gameoff")?;
                require_args("gameoff")?;
                game_off = Some(labels("game-off", lineno, args)?);
            }
            "row" => {
                let Some(params) = &params else {
                    return Err(err(lineno, col, ParseErrorKind::RowBeforeDeclaration("params")));
                };
                let Some(outcomes) = &outcomes else {
                    return Err(err(lineno, col, ParseErrorKind::RowBeforeDeclaration("outcomes")));
                };
                require_args("row")?;
                let (ocol, olabel) = args[0];
                let Some(slot) = outcomes.iter().position(|o| o.value == olabel) else {
                    return Err(err(
                        lineno,
                        ocol,
                        ParseErrorKind::UnknownOutcome(olabel.to_string()),
                    ));
                };
                if rows[slot].is_some() {
                    return Err(err(
                        lineno,
                        ocol,
                        ParseErrorKind::DuplicateRow(olabel.to_string()),
                    ));
                }
                let values = args[1..]
                    .iter()
                    .map(|&(c, tok)| {
                        tok.parse::<Rational>()
                            .map(|value| Spanned {
                                value,
                                span: Span {
                                    line: lineno,
                                    column: c,
                                },
                            })
                            .map_err(|_| {
                                err(lineno, c, ParseErrorKind::BadRational(tok.to_string()))
                            })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if values.len() != params.len() {
                    let column = args.get(params.len() + 1).map_or(ocol, |a| a.0);
                    return Err(err(
                        lineno,
                        column,
                        ParseErrorKind::Arity {
                            outcome: olabel.to_string(),
                            found: values.len(),
                            expected: params.len(),
                        },
                    ));
                }
                rows[slot] = Some(RowDecl {
                    outcome: Spanned {
                        value: olabel.to_string(),
                        span: Span {
                            line: lineno,
                            column: ocol,
                        },
                    },
                    values,
                });
            }
            other => {
                return Err(err(
                    lineno,
                    col,
                    ParseErrorKind::UnknownDirective(other.to_string()),
                ))
            }
        }
    }

    let end = Span {
        line: last_line.max(1),
        column: 1,
    };
    let missing = |what| ParseError {
        span: end,
        kind: ParseErrorKind::MissingDirective(what),
    };
    let name = name.ok_or_else(|| missing("scenario"))?;
    let params = params.ok_or_else(|| missing("params"))?;
    let outcomes = outcomes.ok_or_else(|| missing("outcomes"))?;
    let rows = rows
        .into_iter()
        .zip(&outcomes)
        .map(|(row, outcome)| {
            row.ok_or_else(|| ParseError {
                span: outcome.span,
                kind: ParseErrorKind::MissingRow(outcome.value.clone()),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let game_off = game_off.unwrap_or_default();
    if let Some(g) = game_off
        .iter()
        .find(|g| !outcomes.iter().any(|o| o.value == g.value))
    {
        return Err(ParseError {
            span: g.span,
            kind: ParseErrorKind::UnknownOutcome(g.value.clone()),
        });
    }
    Ok(ScenarioDoc {
        name,
        params,
        outcomes,
        rows,
        game_off,
    })
}

impl ScenarioDoc {
    fn span_for(&self, e: &ModelError) -> Option<Span> {
        let param_col = |p: &str| self.params.iter().position(|x| x.value == p);
        match e {
            ModelError::EntryOutOfRange { param, outcome, .. } => {
                let j = param_col(param)?;
                let row = self.rows.iter().find(|r| &r.outcome.value == outcome)?;
                Some(row.values[j].span)
            }
            ModelError::ColumnSum { param, .. } | ModelError::InfeasibleParam(param) => {
                param_col(param).map(|j| self.params[j].span)
            }
            ModelError::NoFeasibleParam => Some(self.params[0].span),
            _ => None,
        }
    }
}

/// Validates the document's table and produces the model.
pub fn compile(doc: &ScenarioDoc) -> Result<DiscreteModel, CompileError> {
    let raw = RawModel {
        name: doc.name.value.clone(),
        params: doc.params.iter().map(|p| p.value.clone()).collect(),
        outcomes: doc.outcomes.iter().map(|o| o.value.clone()).collect(),
        table: doc
            .rows
            .iter()
            .map(|r| r.values.iter().map(|v| v.value.clone()).collect())
            .collect(),
        game_off: doc.game_off.iter().map(|g| g.value.clone()).collect(),
    };
    DiscreteModel::try_from(raw).map_err(|source| CompileError::Model {
        span: doc.span_for(&source),
        source,
    })
}

/// Canonical text for a model: declared order, lowest-terms rationals.
pub fn render(model: &DiscreteModel) -> String {
    let mut out = String::new();
    out.push_str(&format!("scenario {}\n", model.name()));
    out.push_str(&format!("params {}\n", model.params().join(" ")));
    out.push_str(&format!("outcomes {}\n", model.outcomes().join(" ")));
    if !model.game_off().is_empty() {
        out.push_str(&format!("gameoff {}\n", model.game_off().join(" ")));
    }
    for (outcome, row) in model.outcomes().iter().zip(model.table()) {
        let values: Vec<String> = row.iter().map(Rational::to_string).collect();
        out.push_str(&format!("row {outcome} {}\n", values.join(" ")));
    }
    out
}
