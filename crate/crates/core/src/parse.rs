//! Text syntax for twists and integer matrices.
//!
//! Twists: `phi`, `phi^k`, `id`, or `M=[[a,b],[c,d]];eps=±1`.
//! Matrices: `A`, `A^k`, `-A`, `-A^k`, `I`, or nested lists `[[a,b],[c,d]]`
//! of any square size.

use num_bigint::BigInt;
use thiserror::Error;

use crate::grp::{Group, GroupError, Sign, Twist};
use crate::intlat::{mat_pow, IntMat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("parse error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error(transparent)]
    Group(#[from] GroupError),
}

fn syntax<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError::Syntax {
        pos,
        msg: msg.into(),
    })
}

struct Scanner<'a> {
    s: &'a [u8],
    pos: usize,
    offset: usize,
}

impl<'a> Scanner<'a> {
    fn new(s: &'a str, offset: usize) -> Self {
        Scanner {
            s: s.as_bytes(),
            pos: 0,
            offset,
        }
    }

    fn at(&self) -> usize {
        self.offset + self.pos
    }

    fn ws(&mut self) {
        while self.s.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => syntax(
                self.at(),
                format!("expected '{}', found '{}'", c as char, x as char),
            ),
            None => syntax(
                self.at(),
                format!("expected '{}', found end of input", c as char),
            ),
        }
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        self.ws();
        let start = self.pos;
        if matches!(self.s.get(self.pos), Some(b'-' | b'+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if digits == self.pos {
            self.pos = start;
            return syntax(self.at(), "expected an integer");
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos])
            .expect("ascii")
            .parse()
            .expect("digits"))
    }

    fn end(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => syntax(self.at(), "trailing characters"),
        }
    }

    /// `[[a,b,..],[..],..]`
    fn matrix(&mut self) -> Result<IntMat, ParseError> {
        self.eat(b'[')?;
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        loop {
            let row_pos = self.at();
            self.eat(b'[')?;
            let mut row = vec![self.int()?];
            while self.peek() == Some(b',') {
                self.pos += 1;
                row.push(self.int()?);
            }
            self.eat(b']')?;
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return syntax(row_pos, "rows have different lengths");
                }
            }
            rows.push(row);
            match self.peek() {
                Some(b',') => self.pos += 1,
                _ => break,
            }
        }
        self.eat(b']')?;
        if rows.len() != rows[0].len() {
            return syntax(self.offset, "matrix must be square");
        }
        Ok(IntMat::from_rows(&rows))
    }
}

fn parse_exponent(text: &str, offset: usize) -> Result<u32, ParseError> {
    text.trim()
        .parse()
        .or_else(|_| syntax(offset, format!("bad exponent '{text}'")))
}

/// Parses a twist for `group`.
pub fn parse_twist(group: &Group, text: &str) -> Result<Twist, ParseError> {
    let trimmed = text.trim();
    if trimmed == "phi" {
        return Ok(group.phi()?);
    }
    if trimmed == "id" {
        return Ok(group.identity_twist());
    }
    if let Some(rest) = trimmed.strip_prefix("phi^") {
        let k = parse_exponent(rest, text.len() - rest.len())?;
        return Ok(group.twist_pow(&group.phi()?, k)?);
    }
    let Some((m_part, eps_part)) = trimmed.split_once(';') else {
        return syntax(
            0,
            "expected 'phi', 'phi^k', 'id' or 'M=[[a,b],[c,d]];eps=±1'",
        );
    };
    let Some(m_text) = m_part.trim().strip_prefix("M=") else {
        return syntax(0, "expected 'M='");
    };
    let m_offset = m_part.len() - m_text.len();
    let mut sc = Scanner::new(m_text, m_offset);
    let m = sc.matrix()?;
    sc.end()?;
    let eps_offset = m_part.len() + 1;
    let Some(eps_text) = eps_part.trim().strip_prefix("eps=") else {
        return syntax(eps_offset, "expected 'eps='");
    };
    let eps = match eps_text.trim() {
        "1" | "+1" => Sign::Plus,
        "-1" => Sign::Minus,
        other => {
            return syntax(
                eps_offset + 4,
                format!("eps must be +1 or -1, got '{other}'"),
            )
        }
    };
    Ok(group.twist(m, eps)?)
}

/// Parses an integer matrix; `A` refers to `group`'s matrix.
pub fn parse_matrix(group: &Group, text: &str) -> Result<IntMat, ParseError> {
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        let mut sc = Scanner::new(trimmed, 0);
        let m = sc.matrix()?;
        sc.end()?;
        return Ok(m);
    }
    if trimmed == "I" {
        return Ok(IntMat::identity(2));
    }
    let (negate, body) = match trimmed.strip_prefix('-') {
        Some(b) => (true, b.trim()),
        None => (false, trimmed),
    };
    let power = match body {
        "A" => 1,
        _ => match body.strip_prefix("A^") {
            Some(e) => parse_exponent(e, text.len() - e.len())?,
            None => return syntax(0, "expected 'A', 'A^k', '-A', 'I' or '[[a,b],[c,d]]'"),
        },
    };
    let m = mat_pow(group.matrix(), power as i64).expect("non-negative power");
    Ok(if negate { -&m } else { m })
}
