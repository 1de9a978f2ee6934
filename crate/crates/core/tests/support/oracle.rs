//! Enumerates every world of each game (car position or released prisoner,
//! then each random choice of the informed party) with its exact weight,
//! straight from the game's rules.

use disclosure_core::{ratio, Rational};

const DOORS: [u8; 3] = [1, 2, 3];

fn third(a: u8, b: u8) -> u8 {
    6 - a - b
}

/// One fully specified play of the intentional-host game.
pub struct MontyWorld {
    pub weight: Rational,
    pub car: u8,
    pub opened: u8,
}

/// Contestant holds Door 1; when the car is behind it the host opens
/// Door 2 with probability `q`.
pub fn monty_worlds(q: &Rational) -> Vec<MontyWorld> {
    let third_w = ratio(1, 3);
    let mut out = Vec::new();
    for car in DOORS {
        if car == 1 {
            out.push(MontyWorld { weight: &third_w * q, car, opened: 2 });
            out.push(MontyWorld {
                weight: &third_w * &(Rational::one() - q),
                car,
                opened: 3,
            });
        } else {
            out.push(MontyWorld { weight: third_w.clone(), car, opened: third(1, car) });
        }
    }
    out
}

pub struct Odds {
    pub stay: Rational,
    pub switch: Rational,
    pub cancelled: Rational,
}

pub fn monty_odds(q: &Rational) -> Odds {
    let mut stay = Rational::zero();
    let mut switch = Rational::zero();
    for w in monty_worlds(q) {
        if w.car == 1 {
            stay = stay + &w.weight;
        }
        if third(1, w.opened) == w.car {
            switch = switch + &w.weight;
        }
    }
    Odds { stay, switch, cancelled: Rational::zero() }
}

/// `P(car = door | host opened `opened`)` for the intentional host.
pub fn monty_posterior(q: &Rational, opened: u8, door: u8) -> Option<Rational> {
    let worlds = monty_worlds(q);
    let seen: Rational = worlds.iter().filter(|w| w.opened == opened).map(|w| w.weight.clone()).sum();
    let hit: Rational = worlds
        .iter()
        .filter(|w| w.opened == opened && w.car == door)
        .map(|w| w.weight.clone())
        .sum();
    hit.checked_div(&seen)
}

/// The forgetful host opens Door 2 or 3 at random; revealing the car
/// cancels the game.
pub fn forgetful_odds() -> Odds {
    let w = ratio(1, 6);
    let mut odds = Odds { stay: Rational::zero(), switch: Rational::zero(), cancelled: Rational::zero() };
    for car in DOORS {
        for opened in [2u8, 3] {
            if opened == car {
                odds.cancelled = odds.cancelled + &w;
                continue;
            }
            if car == 1 {
                odds.stay = odds.stay + &w;
            }
            if third(1, opened) == car {
                odds.switch = odds.switch + &w;
            }
        }
    }
    odds
}

/// Joint weights of (released, answer to A, answer to B).
pub fn guard_worlds() -> Vec<(u8, u8, u8, Rational)> {
    let mut out = Vec::new();
    for released in DOORS {
        let to_a: Vec<u8> = [2u8, 3].into_iter().filter(|&x| x != released).collect();
        let to_b: Vec<u8> = [1u8, 3].into_iter().filter(|&x| x != released).collect();
        for &x in &to_a {
            for &z in &to_b {
                let w = ratio(1, 3) * ratio(1, to_a.len() as i64) * ratio(1, to_b.len() as i64);
                out.push((released, x, z, w));
            }
        }
    }
    out
}

pub fn guard_posterior(released: u8, a1: u8, a2: u8) -> Option<Rational> {
    let worlds = guard_worlds();
    let seen: Rational = worlds
        .iter()
        .filter(|w| w.1 == a1 && w.2 == a2)
        .map(|w| w.3.clone())
        .sum();
    let hit: Rational = worlds
        .iter()
        .filter(|w| w.0 == released && w.1 == a1 && w.2 == a2)
        .map(|w| w.3.clone())
        .sum();
    hit.checked_div(&seen)
}
