//! Built-in disclosure games.
//!
//! Each builder derives its table from the game's disclosure rule (what the
//! informed party may not reveal, and how it randomizes among what remains)
//! rather than from stored constants. Parameters are the labels `1`, `2`,
//! `3`: door numbers in the game show, prisoners A, B, C in the prisoner
//! stories. The contestant always holds Door 1.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{DiscreteModel, ModelError};
use crate::rational::{ratio, Rational, RationalError};

const IDS: [u8; 3] = [1, 2, 3];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("host bias {0} is outside [0, 1]")]
    BiasOutOfRange(Rational),
    #[error("invalid bias: {0}")]
    BadBias(#[from] RationalError),
    #[error("unknown prisoner `{0}` (expected A, B or C)")]
    UnknownPrisoner(char),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("scenario `{0}` takes no arguments")]
    UnexpectedArgs(String),
    #[error("scenario `{0}` needs an argument")]
    MissingArgs(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Probability that the host opens Door 2 when the car is behind Door 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HostBias(Rational);

impl HostBias {
    pub fn new(q: Rational) -> Result<Self, ScenarioError> {
        if q.is_probability() {
            Ok(Self(q))
        } else {
            Err(ScenarioError::BiasOutOfRange(q))
        }
    }

    pub fn fair() -> Self {
        Self(ratio(1, 2))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Prisoner {
    A,
    B,
    C,
}

impl Prisoner {
    pub const ALL: [Prisoner; 3] = [Prisoner::A, Prisoner::B, Prisoner::C];

    pub fn id(self) -> u8 {
        match self {
            Prisoner::A => 1,
            Prisoner::B => 2,
            Prisoner::C => 3,
        }
    }

    pub fn from_id(id: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.id() == id)
    }

    /// Prisoner for a parameter label (`"1"` is A).
    pub fn from_label(label: &str) -> Option<Self> {
        label.parse().ok().and_then(Self::from_id)
    }

    pub fn label(self) -> String {
        self.id().to_string()
    }

    pub fn letter(self) -> char {
        match self {
            Prisoner::A => 'A',
            Prisoner::B => 'B',
            Prisoner::C => 'C',
        }
    }
}

impl fmt::Display for Prisoner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Prisoners told that, if executed, they will not be executed first.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PromiseSet {
    told: BTreeSet<Prisoner>,
}

impl PromiseSet {
    pub fn new(told: impl IntoIterator<Item = Prisoner>) -> Self {
        Self {
            told: told.into_iter().collect(),
        }
    }

    pub fn contains(&self, p: Prisoner) -> bool {
        self.told.contains(&p)
    }

    fn contains_id(&self, id: u8) -> bool {
        Prisoner::from_id(id).is_some_and(|p| self.contains(p))
    }

    pub fn is_empty(&self) -> bool {
        self.told.is_empty()
    }
}

impl fmt::Display for PromiseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.told.iter().try_for_each(|p| write!(f, "{p}"))
    }
}

/// Parses letters such as `AB`; the empty string is the empty set.
impl FromStr for PromiseSet {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c.to_ascii_uppercase() {
                'A' => Ok(Prisoner::A),
                'B' => Ok(Prisoner::B),
                'C' => Ok(Prisoner::C),
                _ => Err(ScenarioError::UnknownPrisoner(c)),
            })
            .collect::<Result<BTreeSet<_>, _>>()
            .map(|told| Self { told })
    }
}

/// Uniform choice over `options`.
fn uniform<T: Copy>(options: &[T]) -> Vec<(T, Rational)> {
    let n = options.len() as i64;
    options.iter().map(|&o| (o, ratio(1, n))).collect()
}

fn others(exclude: &[u8]) -> Vec<u8> {
    IDS.into_iter().filter(|i| !exclude.contains(i)).collect()
}

/// Accumulates per-parameter outcome distributions into a table.
struct TableBuilder {
    outcomes: Vec<String>,
    columns: Vec<Vec<Rational>>,
}

impl TableBuilder {
    fn new(outcomes: Vec<String>) -> Self {
        Self {
            outcomes,
            columns: Vec::new(),
        }
    }

    fn push_column(&mut self, mass: impl IntoIterator<Item = (String, Rational)>) {
        let mut col = vec![Rational::zero(); self.outcomes.len()];
        for (label, p) in mass {
            let i = self
                .outcomes
                .iter()
                .position(|o| *o == label)
                .expect("builder emits only declared outcomes");
            col[i] = &col[i] + &p;
        }
        self.columns.push(col);
    }

    fn build(self, name: String) -> Result<DiscreteModel, ModelError> {
        let params = IDS.iter().map(u8::to_string).collect();
        let table = (0..self.outcomes.len())
            .map(|i| self.columns.iter().map(|c| c[i].clone()).collect())
            .collect();
        DiscreteModel::new(name, params, self.outcomes, table)
    }
}

fn y(door: u8) -> String {
    format!("y{door}")
}

fn pair(a1: u8, a2: u8) -> String {
    format!("({a1},{a2})")
}

/// The intentional host: he never opens the contestant's Door 1 or the car,
/// and when both remaining doors hide goats he opens Door 2 with probability
/// `q`.
pub fn monty_hall(bias: &HostBias) -> DiscreteModel {
    let mut tb = TableBuilder::new(IDS.iter().map(|&d| y(d)).collect());
    for theta in IDS {
        let options = others(&[1, theta]);
        let opened = if options.len() == 2 {
            vec![
                (options[0], bias.0.clone()),
                (options[1], Rational::one() - &bias.0),
            ]
        } else {
            uniform(&options)
        };
        tb.push_column(opened.into_iter().map(|(d, p)| (y(d), p)));
    }
    let name = if bias.0 == ratio(1, 2) {
        "monty".to_string()
    } else {
        format!("monty-biased:{}", bias.0)
    };
    tb.build(name).expect("monty table is valid")
}

/// The forgetful host opens Door 2 or 3 at random. The outcome is the
/// other unopened door while the game is on, or `y4` when he reveals the car.
pub fn forgetful_host() -> DiscreteModel {
    let mut tb = TableBuilder::new(vec![y(2), y(3), y(4)]);
    for theta in IDS {
        tb.push_column(uniform(&[2u8, 3]).into_iter().map(|(opened, p)| {
            let label = if opened == theta {
                y(4)
            } else {
                y(if opened == 2 { 3 } else { 2 })
            };
            (label, p)
        }));
    }
    tb.build("forgetful".into())
        .and_then(|m| m.with_game_off(["y4"]))
        .expect("forgetful table is valid")
}

/// Options the guard has when `questioner` asks which of the other two will
/// be executed: he names neither the questioner nor the released prisoner.
fn guard_answers(questioner: u8, released: u8) -> Vec<(u8, Rational)> {
    uniform(&others(&[questioner, released]))
}

fn a1(answer: u8) -> String {
    format!("A1={answer}")
}

/// Prisoner A asks the guard which of B or C will be executed.
pub fn prisoners_guard_single() -> DiscreteModel {
    let mut tb = TableBuilder::new(IDS.iter().map(|&a| a1(a)).collect());
    for theta in IDS {
        tb.push_column(
            guard_answers(1, theta)
                .into_iter()
                .map(|(a, p)| (a1(a), p)),
        );
    }
    tb.build("guard-single".into())
        .expect("guard table is valid")
}

/// A and B both ask. Given θ the two answers are drawn independently under
/// each question's own constraints. Outcomes are `(A1,A2)` in
/// lexicographic order.
pub fn prisoners_guard_joint() -> DiscreteModel {
    let outcomes = IDS
        .iter()
        .flat_map(|&x| IDS.iter().map(move |&z| pair(x, z)))
        .collect();
    let mut tb = TableBuilder::new(outcomes);
    for theta in IDS {
        let to_a = guard_answers(1, theta);
        let to_b = guard_answers(2, theta);
        tb.push_column(to_a.iter().flat_map(|(x, px)| {
            to_b.iter().map(move |(z, pz)| (pair(*x, *z), px * pz))
        }));
    }
    tb.build("guard-joint".into())
        .expect("joint table is valid")
}

/// First reported execution when the two condemned prisoners are executed
/// in uniformly random order.
pub fn news_random_order() -> DiscreteModel {
    news_promised(&PromiseSet::default()).renamed("news")
}

/// First reported execution when the random order is conditioned on no
/// promised prisoner going first. If every order breaks a promise under
/// some θ, that column is all zeros.
pub fn news_promised(promises: &PromiseSet) -> DiscreteModel {
    let mut tb = TableBuilder::new(IDS.iter().map(|&d| y(d)).collect());
    for theta in IDS {
        let condemned = others(&[theta]);
        let orders = [
            [condemned[0], condemned[1]],
            [condemned[1], condemned[0]],
        ];
        let allowed: Vec<u8> = orders
            .iter()
            .filter(|order| !promises.contains_id(order[0]))
            .map(|order| order[0])
            .collect();
        tb.push_column(uniform(&allowed).into_iter().map(|(first, p)| (y(first), p)));
    }
    tb.build(format!("news-promised:{promises}"))
        .expect("news table is valid")
}

/// A built-in scenario reference, `name[:args]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScenarioRef {
    Monty,
    MontyBiased(HostBias),
    Forgetful,
    GuardSingle,
    GuardJoint,
    News,
    NewsPromised(PromiseSet),
}

impl ScenarioRef {
    pub fn build(&self) -> DiscreteModel {
        match self {
            ScenarioRef::Monty => monty_hall(&HostBias::fair()),
            ScenarioRef::MontyBiased(q) => monty_hall(q),
            ScenarioRef::Forgetful => forgetful_host(),
            ScenarioRef::GuardSingle => prisoners_guard_single(),
            ScenarioRef::GuardJoint => prisoners_guard_joint(),
            ScenarioRef::News => news_random_order(),
            ScenarioRef::NewsPromised(p) => news_promised(p),
        }
    }
}

impl fmt::Display for ScenarioRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioRef::Monty => f.write_str("monty"),
            ScenarioRef::MontyBiased(q) => write!(f, "monty-biased:{}", q.value()),
            ScenarioRef::Forgetful => f.write_str("forgetful"),
            ScenarioRef::GuardSingle => f.write_str("guard-single"),
            ScenarioRef::GuardJoint => f.write_str("guard-joint"),
            ScenarioRef::News => f.write_str("news"),
            ScenarioRef::NewsPromised(p) => write!(f, "news-promised:{p}"),
        }
    }
}

impl FromStr for ScenarioRef {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let no_args = |r: ScenarioRef| match args {
            None => Ok(r),
            Some(_) => Err(ScenarioError::UnexpectedArgs(name.to_string())),
        };
        match name {
            "monty" => no_args(ScenarioRef::Monty),
            "forgetful" => no_args(ScenarioRef::Forgetful),
            "guard-single" => no_args(ScenarioRef::GuardSingle),
            "guard-joint" => no_args(ScenarioRef::GuardJoint),
            "news" => no_args(ScenarioRef::News),
            "monty-biased" => {
                let q = args.ok_or_else(|| ScenarioError::MissingArgs(name.to_string()))?;
                Ok(ScenarioRef::MontyBiased(HostBias::new(q.parse()?)?))
            }
            "news-promised" => Ok(ScenarioRef::NewsPromised(args.unwrap_or("").parse()?)),
            _ => Err(ScenarioError::UnknownScenario(s.to_string())),
        }
    }
}

/// The seven tables the engine ships with, by reference name.
pub fn builtin_suite() -> Vec<(ScenarioRef, DiscreteModel)> {
    [
        ScenarioRef::Monty,
        ScenarioRef::Forgetful,
        ScenarioRef::GuardSingle,
        ScenarioRef::GuardJoint,
        ScenarioRef::News,
        ScenarioRef::NewsPromised(PromiseSet::new([Prisoner::A])),
        ScenarioRef::NewsPromised(PromiseSet::new([Prisoner::A, Prisoner::B])),
    ]
    .into_iter()
    .map(|r| {
        let m = r.build();
        (r, m)
    })
    .collect()
}

/// Host-bias grid `0, 1/10, ..., 1`.
pub fn bias_grid() -> Vec<HostBias> {
    (0..=10)
        .map(|k| HostBias::new(ratio(k, 10)).expect("grid point in range"))
        .collect()
}
