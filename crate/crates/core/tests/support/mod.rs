//! Test-only helpers: a brute-force game enumerator that never looks at a
//! model table, and a generator of random valid tables.

#![allow(dead_code)]

pub mod oracle;
pub mod tables;

use disclosure_core::Rational;

pub fn r(s: &str) -> Rational {
    s.parse().unwrap()
}

pub fn rs(xs: &[&str]) -> Vec<Rational> {
    xs.iter().map(|x| r(x)).collect()
}
