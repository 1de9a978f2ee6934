//! Random valid tables: each column is a random composition normalized to
//! sum 1, or (sometimes) all zeros, with at least one feasible column.

use disclosure_core::{ratio, DiscreteModel, Rational, SeededRng};

pub fn random_model(rng: &mut SeededRng, tag: usize) -> DiscreteModel {
    let n_params = 1 + rng.below(4) as usize;
    let n_outcomes = 1 + rng.below(5) as usize;
    let feasible_anchor = rng.below(n_params as u64) as usize;
    let mut columns: Vec<Vec<Rational>> = Vec::new();
    for j in 0..n_params {
        let infeasible = j != feasible_anchor && rng.below(4) == 0;
        let mut raw: Vec<i64> = (0..n_outcomes).map(|_| rng.below(7) as i64).collect();
        if infeasible {
            columns.push(vec![Rational::zero(); n_outcomes]);
            continue;
        }
        if raw.iter().all(|&x| x == 0) {
            let k = rng.below(n_outcomes as u64) as usize;
            raw[k] = 1;
        }
        let total: i64 = raw.iter().sum();
        columns.push(raw.iter().map(|&x| ratio(x, total)).collect());
    }
    let table = (0..n_outcomes)
        .map(|i| columns.iter().map(|c| c[i].clone()).collect())
        .collect();
    DiscreteModel::new(
        format!("random-{tag}"),
        (1..=n_params).map(|j| format!("t{j}")).collect(),
        (1..=n_outcomes).map(|i| format!("o{i}")).collect(),
        table,
    )
    .expect("generator emits valid tables")
}

pub fn random_models(seed: u64, count: usize) -> Vec<DiscreteModel> {
    let mut rng = SeededRng::new(seed);
    (0..count).map(|k| random_model(&mut rng, k)).collect()
}
