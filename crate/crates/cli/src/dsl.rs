//! Text forms of parameters.
//!
//! ```text
//! group    := ("Sp" | "SO") ":" UINT
//! param    := "0" | term ("+" term)*
//! asummand := [UINT "*"] rho ".S" UINT ".S" UINT
//! lsummand := [UINT "*"] rho "[" HALF "].S" UINT
//! rho      := IDENT "(" UINT "," ("O" | "S") ")"
//! HALF     := ["-"] UINT ["/2"]
//! ```
//!
//! A parameter is either all Arthur summands or all L-summands. Printing is
//! the `Display` of the core types; parsing a printed value gives it back.

use std::fmt;

use arthurlab::orders::Partition;
use arthurlab::{ArthurParam, ArthurSummand, GroupSpec, HalfInt, LParam, LSummand, Rho, SelfDualType};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    pub expected: Vec<String>,
    pub found: Option<char>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let found = match self.found {
            Some(c) => format!("{c:?}"),
            None => "end of input".to_string(),
        };
        write!(f, "at offset {}: expected {}, found {}", self.pos, self.expected.join(" or "), found)
    }
}

/// A parsed parameter of either kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Parsed {
    Arthur(ArthurParam),
    L(LParam),
}

impl fmt::Display for Parsed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parsed::Arthur(p) => p.fmt(f),
            Parsed::L(p) => p.fmt(f),
        }
    }
}

enum Term {
    A(ArthurSummand),
    L(LSummand),
}

#[derive(Clone)]
struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += self.peek().map_or(0, char::len_utf8);
        }
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos, expected: expected.iter().map(|s| s.to_string()).collect(), found: self.peek() })
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.src[self.pos..].starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<(), ParseError> {
        if self.eat(lit) {
            return Ok(());
        }
        // point at the first character that differs
        let mut at = self.clone();
        for c in lit.chars() {
            if at.peek() != Some(c) {
                break;
            }
            at.pos += c.len_utf8();
        }
        at.fail(&[&format!("{lit:?}")])
    }

    fn uint(&mut self) -> Result<u64, ParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.fail(&["digit"]);
        }
        self.src[start..self.pos].parse().map_err(|_| ParseError {
            pos: start,
            expected: vec!["integer in range".into()],
            found: self.src[start..].chars().next(),
        })
    }

    fn positive(&mut self) -> Result<u32, ParseError> {
        let start = self.pos;
        let v = self.uint()?;
        if v == 0 || v > u32::MAX as u64 {
            return Err(ParseError { pos: start, expected: vec!["positive integer".into()], found: Some('0') });
        }
        Ok(v as u32)
    }

    fn half(&mut self) -> Result<HalfInt, ParseError> {
        let neg = self.eat("-");
        let n = self.uint()? as i64;
        let v = if self.eat("/2") { HalfInt::half(n) } else { HalfInt::int(n) };
        Ok(if neg { -v } else { v })
    }

    fn ident(&mut self) -> Result<&'a str, ParseError> {
        let start = self.pos;
        if !self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
            return self.fail(&["identifier"]);
        }
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        Ok(&self.src[start..self.pos])
    }

    fn rho(&mut self) -> Result<Rho, ParseError> {
        let name = self.ident()?;
        self.expect("(")?;
        let dim = self.positive()?;
        self.expect(",")?;
        let kind = match self.peek().and_then(SelfDualType::from_letter) {
            Some(k) => k,
            None => return self.fail(&["\"O\"", "\"S\""]),
        };
        self.pos += 1;
        self.expect(")")?;
        Ok(Rho::new(name, dim, kind))
    }

    fn term(&mut self) -> Result<(usize, Term), ParseError> {
        let mult = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let m = self.positive()? as usize;
            self.ws();
            self.expect("*")?;
            self.ws();
            m
        } else {
            1
        };
        let rho = self.rho()?;
        if self.eat(".S") {
            let a = self.positive()?;
            self.expect(".S")?;
            let b = self.positive()?;
            Ok((mult, Term::A(ArthurSummand::new(rho, a, b))))
        } else if self.eat("[") {
            let x = self.half()?;
            self.expect("].S")?;
            let a = self.positive()?;
            Ok((mult, Term::L(LSummand::new(rho, x, a))))
        } else {
            self.fail(&["\".S\"", "\"[\""])
        }
    }

    fn param(&mut self, group: GroupSpec) -> Result<Parsed, ParseError> {
        self.ws();
        if self.peek().is_none() {
            return self.fail(&["\"0\"", "summand"]);
        }
        let rest = self.src[self.pos..].trim_end();
        if rest == "0" {
            self.pos = self.src.len();
            return Ok(Parsed::Arthur(ArthurParam::new(group, Vec::new())));
        }
        let mut arthur = Vec::new();
        let mut l = Vec::new();
        loop {
            let at = self.pos;
            let (m, t) = self.term()?;
            match t {
                Term::A(s) if l.is_empty() => arthur.extend(std::iter::repeat_n(s, m)),
                Term::L(s) if arthur.is_empty() => l.extend(std::iter::repeat_n(s, m)),
                Term::A(_) => {
                    return Err(ParseError { pos: at, expected: vec!["L-summand".into()], found: self.src[at..].chars().next() })
                }
                Term::L(_) => {
                    return Err(ParseError {
                        pos: at,
                        expected: vec!["Arthur summand".into()],
                        found: self.src[at..].chars().next(),
                    })
                }
            }
            self.ws();
            if self.peek().is_none() {
                break;
            }
            if !self.eat("+") {
                return self.fail(&["\"+\"", "end of input"]);
            }
            self.ws();
        }
        Ok(if l.is_empty() { Parsed::Arthur(ArthurParam::new(group, arthur)) } else { Parsed::L(LParam::new(group, l)) })
    }
}

/// Parses either kind of parameter; `"0"` is the empty Arthur parameter.
pub fn parse_dsl(text: &str, group: GroupSpec) -> Result<Parsed, ParseError> {
    Parser::new(text).param(group)
}

pub fn parse_arthur(text: &str, group: GroupSpec) -> Result<ArthurParam, ParseError> {
    match parse_dsl(text, group)? {
        Parsed::Arthur(p) => Ok(p),
        Parsed::L(_) => Err(ParseError { pos: 0, expected: vec!["Arthur summand".into()], found: text.trim_start().chars().next() }),
    }
}

pub fn parse_lparam(text: &str, group: GroupSpec) -> Result<LParam, ParseError> {
    match parse_dsl(text, group)? {
        Parsed::L(p) => Ok(p),
        Parsed::Arthur(p) if p.is_empty() => Ok(LParam::new(group, Vec::new())),
        Parsed::Arthur(_) => Err(ParseError { pos: 0, expected: vec!["L-summand".into()], found: text.trim_start().chars().next() }),
    }
}

/// A single Arthur summand, e.g. `tr(1,O).S2.S1`.
pub fn parse_summand(text: &str) -> Result<ArthurSummand, ParseError> {
    let mut p = Parser::new(text.trim());
    let rho = p.rho()?;
    p.expect(".S")?;
    let a = p.positive()?;
    p.expect(".S")?;
    let b = p.positive()?;
    if p.peek().is_some() {
        return p.fail(&["end of input"]);
    }
    Ok(ArthurSummand::new(rho, a, b))
}

pub fn parse_rho(text: &str) -> Result<Rho, ParseError> {
    let mut p = Parser::new(text.trim());
    let rho = p.rho()?;
    if p.peek().is_some() {
        return p.fail(&["end of input"]);
    }
    Ok(rho)
}

pub fn parse_half(text: &str) -> Result<HalfInt, ParseError> {
    let mut p = Parser::new(text.trim());
    let v = p.half()?;
    if p.peek().is_some() {
        return p.fail(&["\"/2\"", "end of input"]);
    }
    Ok(v)
}

/// `[4,2^2]`; `[]` is the empty partition.
pub fn parse_partition(text: &str) -> Result<Partition, ParseError> {
    let mut p = Parser::new(text.trim());
    p.expect("[")?;
    let mut parts = Vec::new();
    if !p.eat("]") {
        loop {
            p.ws();
            let v = p.positive()?;
            let k = if p.eat("^") { p.positive()? } else { 1 };
            parts.extend(std::iter::repeat_n(v, k as usize));
            p.ws();
            if p.eat("]") {
                break;
            }
            if !p.eat(",") {
                return p.fail(&["\",\"", "\"]\""]);
            }
        }
    }
    if p.peek().is_some() {
        return p.fail(&["end of input"]);
    }
    Ok(Partition::new(parts))
}
