//! Term AST: Build terms create a solution, Optimize terms improve one.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sort {
    Build,
    Optimize,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Build => "Build",
            Sort::Optimize => "Optimize",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    /// Greedy insertion with optimization level `i`.
    Insert(u32),
    /// `LDS(i, n, l)`: level, branching points, threshold.
    Lds(u32, u32, u32),
    Do(Box<Term>, Box<Term>),
    /// First argument is always an `Lds`.
    Forall(Box<Term>, Box<Term>),
    /// `CHAIN(n, m)`: roots, selector.
    Chain(u32, u32),
    /// `TREE(n, m, k)`: roots, selector, discrepancies.
    Tree(u32, u32, u32),
    /// `LNS(n, h, build)`: removed customers, determinism, rebuild term.
    Lns(u32, u32, Box<Term>),
    Loop(u32, Box<Term>),
    Then(Box<Term>, Box<Term>),
}

/// Inclusive parameter ranges accepted by the parser and kept by every
/// generator.
pub mod range {
    pub const LEVEL: (u32, u32) = (0, 4);
    pub const LDS_N: (u32, u32) = (0, 16);
    pub const LDS_L: (u32, u32) = (0, 1_000_000);
    pub const COUNT: (u32, u32) = (1, 100_000);
    pub const SELECTOR: (u32, u32) = (1, 2);
    pub const TREE_K: (u32, u32) = (0, 8);
    pub const LNS_N: (u32, u32) = (0, 100_000);
    pub const LNS_H: (u32, u32) = (1, 1000);
    pub const LOOP_N: (u32, u32) = (1, 100_000);
}

/// Default discrepancy budget of `TREE(n, m)`.
pub const TREE_DEFAULT_K: u32 = 2;

impl Term {
    pub fn sort(&self) -> Sort {
        match self {
            Term::Insert(..) | Term::Lds(..) | Term::Do(..) | Term::Forall(..) => Sort::Build,
            _ => Sort::Optimize,
        }
    }

    /// Operator name as written.
    pub fn name(&self) -> &'static str {
        match self {
            Term::Insert(..) => "INSERT",
            Term::Lds(..) => "LDS",
            Term::Do(..) => "DO",
            Term::Forall(..) => "FORALL",
            Term::Chain(..) => "CHAIN",
            Term::Tree(..) => "TREE",
            Term::Lns(..) => "LNS",
            Term::Loop(..) => "LOOP",
            Term::Then(..) => "THEN",
        }
    }

    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Do(a, b) | Term::Forall(a, b) | Term::Then(a, b) => vec![a, b],
            Term::Lns(_, _, b) | Term::Loop(_, b) => vec![b],
            _ => vec![],
        }
    }

    /// Number of operator nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Checks sorts and parameter ranges, returning the first problem as
    /// text.
    pub fn check(&self) -> Result<(), String> {
        let within = |name: &str, v: u32, (lo, hi): (u32, u32)| {
            if v < lo || v > hi {
                Err(format!("{}: {name} = {v} outside [{lo}, {hi}]", self.name()))
            } else {
                Ok(())
            }
        };
        let sorted = |t: &Term, want: Sort| {
            if t.sort() != want {
                Err(format!(
                    "{}: expected a {want} term, found {}",
                    self.name(),
                    t.name()
                ))
            } else {
                t.check()
            }
        };
        match self {
            Term::Insert(i) => within("i", *i, range::LEVEL),
            Term::Lds(i, n, l) => {
                within("i", *i, range::LEVEL)?;
                within("n", *n, range::LDS_N)?;
                within("l", *l, range::LDS_L)
            }
            Term::Do(b, o) => {
                sorted(b, Sort::Build)?;
                sorted(o, Sort::Optimize)
            }
            Term::Forall(l, o) => {
                if !matches!(**l, Term::Lds(..)) {
                    return Err(format!("FORALL: expected an LDS term, found {}", l.name()));
                }
                l.check()?;
                sorted(o, Sort::Optimize)
            }
            Term::Chain(n, m) => {
                within("n", *n, range::COUNT)?;
                within("m", *m, range::SELECTOR)
            }
            Term::Tree(n, m, k) => {
                within("n", *n, range::COUNT)?;
                within("m", *m, range::SELECTOR)?;
                within("k", *k, range::TREE_K)
            }
            Term::Lns(n, h, b) => {
                within("n", *n, range::LNS_N)?;
                within("h", *h, range::LNS_H)?;
                sorted(b, Sort::Build)
            }
            Term::Loop(n, o) => {
                within("n", *n, range::LOOP_N)?;
                sorted(o, Sort::Optimize)
            }
            Term::Then(a, b) => {
                sorted(a, Sort::Optimize)?;
                sorted(b, Sort::Optimize)
            }
        }
    }

    /// Right-nested THEN of two or more Optimize terms.
    pub fn then_all(mut parts: Vec<Term>) -> Term {
        assert!(parts.len() >= 2, "THEN needs at least two terms");
        let mut acc = parts.pop().unwrap();
        while let Some(t) = parts.pop() {
            acc = Term::Then(Box::new(t), Box::new(acc));
        }
        acc
    }
}

/// Canonical text: no spaces, TREE always with three arguments, THEN
/// flattened along its right spine.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Insert(i) => write!(f, "INSERT({i})"),
            Term::Lds(i, n, l) => write!(f, "LDS({i},{n},{l})"),
            Term::Do(a, b) => write!(f, "DO({a},{b})"),
            Term::Forall(a, b) => write!(f, "FORALL({a},{b})"),
            Term::Chain(n, m) => write!(f, "CHAIN({n},{m})"),
            Term::Tree(n, m, k) => write!(f, "TREE({n},{m},{k})"),
            Term::Lns(n, h, b) => write!(f, "LNS({n},{h},{b})"),
            Term::Loop(n, b) => write!(f, "LOOP({n},{b})"),
            Term::Then(a, b) => {
                write!(f, "THEN({a}")?;
                let mut rest: &Term = b;
                while let Term::Then(x, y) = rest {
                    write!(f, ",{x}")?;
                    rest = y;
                }
                write!(f, ",{rest})")
            }
        }
    }
}

impl Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        super::parse_term(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn then_prints_flat() {
        let t = Term::then_all(vec![Term::Chain(1, 1), Term::Chain(2, 2), Term::Chain(3, 1)]);
        assert_eq!(t.to_string(), "THEN(CHAIN(1,1),CHAIN(2,2),CHAIN(3,1))");
        let left = Term::Then(
            Box::new(Term::Then(Box::new(Term::Chain(1, 1)), Box::new(Term::Chain(2, 2)))),
            Box::new(Term::Chain(3, 1)),
        );
        assert_eq!(left.to_string(), "THEN(THEN(CHAIN(1,1),CHAIN(2,2)),CHAIN(3,1))");
    }

    #[test]
    fn size_counts_nodes() {
        let t = Term::Do(
            Box::new(Term::Lds(3, 3, 100)),
            Box::new(Term::Loop(30, Box::new(Term::Lns(10, 4, Box::new(Term::Lds(4, 4, 1000)))))),
        );
        assert_eq!(t.size(), 5);
        assert_eq!(t.depth(), 4);
        assert!(t.check().is_ok());
    }
}
