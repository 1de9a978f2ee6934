//! Plain-text renderings. Numbers are the same exact rationals the JSON
//! output carries.

use std::path::Path;

use disclosure_core::analysis::{
    ConsentAnalysis, ConsentRow, EvidenceComparison, Policy, Weighted, WinProbability,
};
use disclosure_core::model::{format_set, ValidationReport};
use disclosure_core::simulate::SimulationReport;
use disclosure_core::{DiscreteModel, LikelihoodVector, Rational};

/// Right-aligns every column except the first.
fn grid(rows: &[Vec<String>]) -> String {
    let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..ncols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c == 0 {
                line.push_str(&format!("{cell:<w$}", w = widths[0]));
            } else {
                line.push_str(&format!("  {cell:>w$}", w = widths[c]));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// The estimate column as printed in likelihood tables: `-` when there is
/// nothing to decide, a bare label for a unique estimate, a set otherwise.
pub fn estimate(model: &DiscreteModel, outcome: &str) -> String {
    let targets = model
        .decide(outcome, &model.params()[0])
        .map(|d| d.targets)
        .unwrap_or_default();
    match targets.len() {
        0 => "-".to_string(),
        1 => targets[0].clone(),
        _ => format_set(&targets),
    }
}

pub fn table(model: &DiscreteModel) -> String {
    let report = model.validate();
    let mut header = vec![String::new()];
    for c in &report.columns {
        let mark = if c.feasible { "" } else { "*" };
        header.push(format!("θ={}{mark}", c.param));
    }
    header.push("θ̂".to_string());
    let mut rows = vec![header];
    for (outcome, row) in model.outcomes().iter().zip(model.table()) {
        let mut cells = vec![if model.is_game_off(outcome) {
            format!("{outcome} (game off)")
        } else {
            outcome.clone()
        }];
        cells.extend(row.iter().map(Rational::to_string));
        cells.push(estimate(model, outcome));
        rows.push(cells);
    }
    let mut total = vec!["Total".to_string()];
    total.extend(report.columns.iter().map(|c| c.sum.to_string()));
    rows.push(total);
    let mut out = format!("{}\n", model.name());
    out.push_str(&grid(&rows));
    let infeasible: Vec<&str> = report.infeasible().collect();
    if !infeasible.is_empty() {
        out.push_str(&format!(
            "* infeasible: column sums to 0 for θ ∈ {{{}}}\n",
            infeasible.join(",")
        ));
    }
    out
}

pub fn likelihood(
    model: &DiscreteModel,
    outcome: &str,
    lik: &LikelihoodVector,
    mle: &[String],
) -> String {
    let mut rows = vec![vec!["θ".to_string(), format!("L(θ | {outcome})")]];
    for (p, v) in lik.params().iter().zip(lik.values()) {
        rows.push(vec![p.clone(), v.to_string()]);
    }
    let mut out = format!("{}\n", model.name());
    out.push_str(&grid(&rows));
    out.push_str(&format!("MLE: {}\n", format_set(mle)));
    if lik.is_zero() {
        out.push_str("impossible observation: probability 0 under every θ\n");
    }
    if model.is_game_off(outcome) {
        out.push_str("game off: no decision\n");
    }
    out
}

pub fn posterior(model: &DiscreteModel, outcome: &str, post: &[Weighted]) -> String {
    let mut rows = vec![vec!["θ".to_string(), format!("P(θ | {outcome})")]];
    rows.extend(post.iter().map(|w| vec![w.label.clone(), w.p.to_string()]));
    format!("{}\n{}", model.name(), grid(&rows))
}

pub fn winprob(model: &DiscreteModel, policy: Policy, initial: &str, w: &WinProbability) -> String {
    let mut out = format!(
        "{}: policy {policy}, initial {initial}\nwin        {}\ncancelled  {}\nloss       {}\n",
        model.name(),
        w.win,
        w.cancelled,
        w.loss
    );
    if !w.cancelled.is_zero() {
        if let Some(c) = w.conditional_win() {
            out.push_str(&format!("win | game on  {c}\n"));
        }
    }
    out
}

pub fn compare(c: &EvidenceComparison) -> String {
    let (l, r) = (&c.left, &c.right);
    let mut rows = vec![vec![
        String::new(),
        format!("{} ({})", l.model, l.outcome),
        format!("{} ({})", r.model, r.outcome),
    ]];
    for (j, p) in l.likelihood.params().iter().enumerate() {
        rows.push(vec![
            format!("L(θ={p})"),
            l.likelihood.values()[j].to_string(),
            r.likelihood
                .get(p)
                .map_or_else(|| "n/a".to_string(), Rational::to_string),
        ]);
    }
    rows.push(vec!["MLE".into(), format_set(&l.mle), format_set(&r.mle)]);
    rows.push(vec![
        format!("decision ({})", c.initial),
        l.decision.to_string(),
        r.decision.to_string(),
    ]);
    let mut out = grid(&rows);
    out.push_str(if c.same_likelihood {
        "same likelihood\n"
    } else {
        "likelihoods differ\n"
    });
    out
}

pub fn paradox(rows: &[ConsentRow], analyses: &[ConsentAnalysis]) -> String {
    let mut table = vec![vec![
        "(A1,A2)".to_string(),
        "θ=1".into(),
        "θ=2".into(),
        "θ=3".into(),
        "θ̂".into(),
        "Better for A".into(),
        "Better for B".into(),
    ]];
    for r in rows {
        let mut cells = vec![r.outcome.clone()];
        cells.extend(r.likelihood.values().iter().map(Rational::to_string));
        cells.push(format_set(&r.mle));
        cells.push(r.better_for_a.to_string());
        cells.push(r.better_for_b.to_string());
        table.push(cells);
    }
    let mut out = grid(&table);
    for a in analyses {
        out.push_str(&format!(
            "\nA hears A1={} ({} willingness):\n",
            a.a1,
            match a.willingness {
                disclosure_core::Willingness::Weak => "weak",
                disclosure_core::Willingness::Strict => "strict",
            }
        ));
        for c in &a.cases {
            out.push_str(&format!(
                "  A2={}: L(A)={} L(B)={}; A {}, B {}{}{}\n",
                c.a2,
                c.likelihood_a,
                c.likelihood_b,
                if c.a_willing { "willing" } else { "refuses" },
                if c.b_willing { "willing" } else { "refuses" },
                if c.mutual { "; swap by consent" } else { "" },
                if c.swap_sought { "" } else { "; A↔B swap not sought" },
            ));
        }
        out.push_str(&format!(
            "  consented: {}; all consented swaps neutral: {}\n",
            if a.consented.is_empty() {
                "none".to_string()
            } else {
                a.consented.join(" ")
            },
            if a.all_consented_neutral { "yes" } else { "no" }
        ));
    }
    out
}

pub fn simulation(r: &SimulationReport) -> String {
    let mut rows = vec![vec![
        "policy".to_string(),
        "wins".into(),
        "losses".into(),
        "cancelled".into(),
        "win rate".into(),
        "exact".into(),
        "cancel rate".into(),
        "exact".into(),
        "±4 s.e.".into(),
        "ok".into(),
    ]];
    for p in &r.policies {
        let ok = p.win.within && p.loss.within && p.cancelled.within;
        rows.push(vec![
            p.policy.to_string(),
            p.tally.wins.to_string(),
            p.tally.losses.to_string(),
            p.tally.cancelled.to_string(),
            p.win.empirical.clone(),
            p.win.exact.to_string(),
            p.cancelled.empirical.clone(),
            p.cancelled.exact.to_string(),
            p.win.tolerance.clone(),
            if ok { "yes" } else { "NO" }.into(),
        ]);
    }
    format!(
        "{}: {} trials, seed {}, initial {}\n{}",
        r.model,
        r.trials,
        r.seed,
        r.initial,
        grid(&rows)
    )
}

pub fn check(path: &Path, model: &DiscreteModel, report: &ValidationReport) -> String {
    let feasible: Vec<&str> = report.feasible().collect();
    let infeasible: Vec<&str> = report.infeasible().collect();
    let mut out = format!(
        "{}: ok, scenario {} ({} params, {} outcomes)\nfeasible: {}\n",
        path.display(),
        model.name(),
        model.params().len(),
        model.outcomes().len(),
        feasible.join(" ")
    );
    if !infeasible.is_empty() {
        out.push_str(&format!("infeasible: {}\n", infeasible.join(" ")));
    }
    out
}
