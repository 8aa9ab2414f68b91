//! Text syntax: `NAME(arg, ...)` with integer or term arguments.

use thiserror::Error;

use super::term::{range, Sort, Term, TREE_DEFAULT_K};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("unknown operator {0:?}")]
    UnknownOperator(String),
    #[error("{op} takes {expected} arguments, found {found}")]
    Arity {
        op: &'static str,
        expected: &'static str,
        found: usize,
    },
    #[error("{op}: argument {index} must be {expected}")]
    Sort {
        op: &'static str,
        index: usize,
        expected: String,
    },
    #[error("{op}: {param} = {value} outside [{lo}, {hi}]")]
    Range {
        op: &'static str,
        param: &'static str,
        value: i64,
        lo: u32,
        hi: u32,
    },
}

/// A parse failure at byte offset `pos` (0-based) of the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at column {}: {kind}", .pos + 1)]
pub struct TermError {
    pub pos: usize,
    pub kind: TermErrorKind,
}

enum Arg {
    Int(i64, usize),
    Term(Term, usize),
}

impl Arg {
    fn pos(&self) -> usize {
        match self {
            Arg::Int(_, p) | Arg::Term(_, p) => *p,
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err(&self, pos: usize, kind: TermErrorKind) -> TermError {
        TermError { pos, kind }
    }

    fn syntax(&self, msg: impl Into<String>) -> TermError {
        self.err(self.pos, TermErrorKind::Syntax(msg.into()))
    }

    fn expect(&mut self, ch: u8) -> Result<(), TermError> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&ch) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(format!("expected '{}'", ch as char)))
        }
    }

    fn arg(&mut self) -> Result<Arg, TermError> {
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            Some(c) if c.is_ascii_digit() || *c == b'-' => {
                self.pos += 1;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let v = text
                    .parse::<i64>()
                    .map_err(|_| self.err(start, TermErrorKind::Syntax(format!("bad integer {text:?}"))))?;
                Ok(Arg::Int(v, start))
            }
            Some(c) if c.is_ascii_alphabetic() => Ok(Arg::Term(self.term()?, start)),
            Some(c) => Err(self.syntax(format!("unexpected '{}'", *c as char))),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn term(&mut self) -> Result<Term, TermError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected an operator name"));
        }
        let name = std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .to_ascii_uppercase();
        let op: &'static str = match name.as_str() {
            "INSERT" => "INSERT",
            "LDS" => "LDS",
            "DO" => "DO",
            "FORALL" => "FORALL",
            "CHAIN" => "CHAIN",
            "TREE" => "TREE",
            "LNS" => "LNS",
            "LOOP" => "LOOP",
            "THEN" => "THEN",
            _ => return Err(self.err(start, TermErrorKind::UnknownOperator(name))),
        };
        self.expect(b'(')?;
        let mut args = vec![self.arg()?];
        loop {
            self.skip_ws();
            match self.src.get(self.pos) {
                Some(b',') => {
                    self.pos += 1;
                    args.push(self.arg()?);
                }
                Some(b')') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.syntax("expected ',' or ')'")),
            }
        }
        build(op, start, args)
    }
}

fn build(op: &'static str, at: usize, args: Vec<Arg>) -> Result<Term, TermError> {
    let count = args.len();
    let arity = |expected: &'static str| TermError {
        pos: at,
        kind: TermErrorKind::Arity {
            op,
            expected,
            found: count,
        },
    };
    let mut it = args.into_iter().enumerate();
    let mut int = |param: &'static str, (lo, hi): (u32, u32)| -> Result<u32, TermError> {
        let (index, arg) = it.next().unwrap();
        match arg {
            Arg::Int(v, p) if v < lo as i64 || v > hi as i64 => Err(TermError {
                pos: p,
                kind: TermErrorKind::Range {
                    op,
                    param,
                    value: v,
                    lo,
                    hi,
                },
            }),
            Arg::Int(v, _) => Ok(v as u32),
            Arg::Term(_, p) => Err(TermError {
                pos: p,
                kind: TermErrorKind::Sort {
                    op,
                    index: index + 1,
                    expected: "an integer".into(),
                },
            }),
        }
    };
    let sorted = |index: usize, arg: Arg, want: Sort| -> Result<Term, TermError> {
        let p = arg.pos();
        match arg {
            Arg::Term(t, _) if t.sort() == want => Ok(t),
            _ => Err(TermError {
                pos: p,
                kind: TermErrorKind::Sort {
                    op,
                    index,
                    expected: format!("a {want} term"),
                },
            }),
        }
    };
    match op {
        "INSERT" => {
            if count != 1 {
                return Err(arity("1"));
            }
            Ok(Term::Insert(int("i", range::LEVEL)?))
        }
        "LDS" => {
            if count != 3 {
                return Err(arity("3"));
            }
            let i = int("i", range::LEVEL)?;
            let n = int("n", range::LDS_N)?;
            let l = int("l", range::LDS_L)?;
            Ok(Term::Lds(i, n, l))
        }
        "CHAIN" => {
            if count != 2 {
                return Err(arity("2"));
            }
            let n = int("n", range::COUNT)?;
            let m = int("m", range::SELECTOR)?;
            Ok(Term::Chain(n, m))
        }
        "TREE" => {
            if count != 2 && count != 3 {
                return Err(arity("2 or 3"));
            }
            let n = int("n", range::COUNT)?;
            let m = int("m", range::SELECTOR)?;
            let k = if count == 3 {
                int("k", range::TREE_K)?
            } else {
                TREE_DEFAULT_K
            };
            Ok(Term::Tree(n, m, k))
        }
        "LNS" => {
            if count != 3 {
                return Err(arity("3"));
            }
            let n = int("n", range::LNS_N)?;
            let h = int("h", range::LNS_H)?;
            let (_, b) = it.next().unwrap();
            Ok(Term::Lns(n, h, Box::new(sorted(3, b, Sort::Build)?)))
        }
        "LOOP" => {
            if count != 2 {
                return Err(arity("2"));
            }
            let n = int("n", range::LOOP_N)?;
            let (_, b) = it.next().unwrap();
            Ok(Term::Loop(n, Box::new(sorted(2, b, Sort::Optimize)?)))
        }
        "DO" | "FORALL" => {
            if count != 2 {
                return Err(arity("2"));
            }
            let (_, a) = it.next().unwrap();
            let (_, b) = it.next().unwrap();
            let head = if op == "FORALL" {
                let p = a.pos();
                match a {
                    Arg::Term(t @ Term::Lds(..), _) => t,
                    _ => {
                        return Err(TermError {
                            pos: p,
                            kind: TermErrorKind::Sort {
                                op,
                                index: 1,
                                expected: "an LDS term".into(),
                            },
                        })
                    }
                }
            } else {
                sorted(1, a, Sort::Build)?
            };
            let tail = sorted(2, b, Sort::Optimize)?;
            Ok(if op == "DO" {
                Term::Do(Box::new(head), Box::new(tail))
            } else {
                Term::Forall(Box::new(head), Box::new(tail))
            })
        }
        "THEN" => {
            if count < 2 {
                return Err(arity("at least 2"));
            }
            let parts = it
                .map(|(i, a)| sorted(i + 1, a, Sort::Optimize))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Term::then_all(parts))
        }
        _ => unreachable!(),
    }
}

/// Parses one term. Whitespace is insignificant and operator names are
/// case-insensitive.
pub fn parse_term(text: &str) -> Result<Term, TermError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let t = p.term()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.syntax("trailing input"));
    }
    Ok(t)
}

/// Reads a term file: one term per line, `#` starts a comment. Errors
/// carry the 1-based line number.
pub fn parse_term_file(text: &str) -> Result<Vec<Term>, (usize, TermError)> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        out.push(parse_term(body).map_err(|e| (i + 1, e))?);
    }
    Ok(out)
}
