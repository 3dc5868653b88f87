//! The group `Z² ⋊_A Z` and its twist endomorphisms.
//!
//! An element `((m,k),n)` multiplies as
//! `((m,k),n)·((m',k'),n') = ((m,k) + Aⁿ(m',k'), n+n')`.
//! A twist `(M, ε)` acts by `((m,k),n) ↦ (M(m,k), εn)` and is a
//! homomorphism exactly when `M·A = A^ε·M`.

use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::intlat::{det, mat_pow, IntMat};

/// Powers of `A` cached eagerly in `[-POWER_CACHE, POWER_CACHE]`.
const POWER_CACHE: i64 = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("matrix must be 2x2, got {rows}x{cols}")]
    NotTwoByTwo { rows: usize, cols: usize },
    #[error("matrix {0} is not a hyperbolic element of SL(2,Z)")]
    NotHyperbolic(IntMat),
    #[error("twist M={m} eps={eps} violates M*A = A^eps*M")]
    IncompatibleTwist { m: IntMat, eps: i64 },
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Sign of the twist on the `Z` factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i64(e: i64) -> Option<Sign> {
        match e {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Group element `((m,k),n)`; `n` is the level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem {
    pub v: [BigInt; 2],
    pub n: i64,
}

impl Elem {
    pub fn new(m: i64, k: i64, n: i64) -> Self {
        Elem {
            v: [BigInt::from(m), BigInt::from(k)],
            n,
        }
    }

    pub fn from_vec(v: &[BigInt], n: i64) -> Self {
        assert_eq!(v.len(), 2);
        Elem {
            v: [v[0].clone(), v[1].clone()],
            n,
        }
    }

    pub fn identity() -> Self {
        Elem::new(0, 0, 0)
    }

    pub fn is_identity(&self) -> bool {
        self.n == 0 && self.v.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({},{}),{})", self.v[0], self.v[1], self.n)
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor {
            bytes: s.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, GroupError> {
        Err(GroupError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), GroupError> {
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            match self.bytes.get(self.pos) {
                Some(&got) => {
                    self.err(format!("expected '{}', found '{}'", c as char, got as char))
                }
                None => self.err(format!("expected '{}', found end of input", c as char)),
            }
        }
    }

    fn integer(&mut self) -> Result<BigInt, GroupError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.bytes.get(self.pos), Some(b'-' | b'+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return self.err("expected an integer");
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii");
        Ok(text.parse().expect("validated digits"))
    }

    fn finish(&mut self) -> Result<(), GroupError> {
        self.skip_ws();
        if self.pos == self.bytes.len() {
            Ok(())
        } else {
            self.err("trailing characters")
        }
    }
}

impl FromStr for Elem {
    type Err = GroupError;

    /// Parses `((m,k),n)` with optional whitespace.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut c = Cursor::new(s);
        c.expect(b'(')?;
        c.expect(b'(')?;
        let m = c.integer()?;
        c.expect(b',')?;
        let k = c.integer()?;
        c.expect(b')')?;
        c.expect(b',')?;
        let level_pos = {
            c.skip_ws();
            c.pos
        };
        let n = c.integer()?;
        let n: i64 = match i64::try_from(&n) {
            Ok(n) => n,
            Err(_) => {
                return Err(GroupError::Parse {
                    pos: level_pos,
                    msg: "level does not fit in 64 bits".into(),
                })
            }
        };
        c.expect(b')')?;
        c.finish()?;
        Ok(Elem { v: [m, k], n })
    }
}

/// Endomorphism datum `(M, ε)`. Only constructed through [`Group`], which
/// checks compatibility with `A`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Twist {
    m: IntMat,
    eps: Sign,
}

impl Twist {
    pub fn matrix(&self) -> &IntMat {
        &self.m
    }

    pub fn eps(&self) -> Sign {
        self.eps
    }

    /// `(M·v, ε·n)`
    pub fn apply(&self, a: &Elem) -> Elem {
        Elem::from_vec(&self.m.mul_vec(&a.v), self.eps.as_i64() * a.n)
    }

    pub fn is_identity(&self) -> bool {
        self.eps == Sign::Plus && self.m == IntMat::identity(2)
    }
}

impl fmt::Display for Twist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M={};eps={}", self.m, self.eps.as_i64())
    }
}

/// `Z² ⋊_A Z` for a hyperbolic `A ∈ SL(2,Z)`.
#[derive(Debug, Clone)]
pub struct Group {
    a: IntMat,
    powers: Vec<IntMat>,
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a
    }
}

impl Eq for Group {}

impl Default for Group {
    fn default() -> Self {
        Group::standard()
    }
}

fn check_two_by_two(m: &IntMat) -> Result<(), GroupError> {
    if m.rows() == 2 && m.cols() == 2 {
        Ok(())
    } else {
        Err(GroupError::NotTwoByTwo {
            rows: m.rows(),
            cols: m.cols(),
        })
    }
}

impl Group {
    /// `A = [[2,1],[1,1]]`.
    pub fn standard() -> Self {
        Group::new(IntMat::from_rows(&[[2, 1], [1, 1]])).expect("standard matrix is hyperbolic")
    }

    pub fn new(a: IntMat) -> Result<Self, GroupError> {
        check_two_by_two(&a)?;
        if !det(&a).is_one() || a.trace().abs() <= BigInt::from(2) {
            return Err(GroupError::NotHyperbolic(a));
        }
        let powers = (-POWER_CACHE..=POWER_CACHE)
            .map(|n| mat_pow(&a, n).expect("det 1"))
            .collect();
        Ok(Group { a, powers })
    }

    pub fn matrix(&self) -> &IntMat {
        &self.a
    }

    /// `Aⁿ` for any integer `n`.
    pub fn power(&self, n: i64) -> Cow<'_, IntMat> {
        if n.abs() <= POWER_CACHE {
            Cow::Borrowed(&self.powers[(n + POWER_CACHE) as usize])
        } else {
            Cow::Owned(mat_pow(&self.a, n).expect("det 1"))
        }
    }

    fn act(&self, n: i64, v: &[BigInt; 2]) -> [BigInt; 2] {
        if n == 0 {
            return v.clone();
        }
        let p = self.power(n);
        [
            &p[(0, 0)] * &v[0] + &p[(0, 1)] * &v[1],
            &p[(1, 0)] * &v[0] + &p[(1, 1)] * &v[1],
        ]
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let w = self.act(a.n, &b.v);
        Elem {
            v: [&a.v[0] + &w[0], &a.v[1] + &w[1]],
            n: a.n + b.n,
        }
    }

    /// `(−A⁻ⁿv, −n)`
    pub fn inv(&self, a: &Elem) -> Elem {
        let w = self.act(-a.n, &a.v);
        Elem {
            v: [-&w[0], -&w[1]],
            n: -a.n,
        }
    }

    /// `g · h · t(g⁻¹)`
    pub fn twisted_conj(&self, g: &Elem, h: &Elem, t: &Twist) -> Elem {
        let gh = self.mul(g, h);
        self.mul(&gh, &t.apply(&self.inv(g)))
    }

    pub fn twist(&self, m: IntMat, eps: Sign) -> Result<Twist, GroupError> {
        check_two_by_two(&m)?;
        let a_eps = self.power(eps.as_i64());
        if &m * &self.a != &*a_eps * &m {
            return Err(GroupError::IncompatibleTwist {
                m,
                eps: eps.as_i64(),
            });
        }
        Ok(Twist { m, eps })
    }

    /// `((m,k),n) ↦ ((k,−m),−n)`; exists when `A` is symmetric.
    pub fn phi(&self) -> Result<Twist, GroupError> {
        self.twist(IntMat::from_rows(&[[0, 1], [-1, 0]]), Sign::Minus)
    }

    pub fn identity_twist(&self) -> Twist {
        Twist {
            m: IntMat::identity(2),
            eps: Sign::Plus,
        }
    }

    /// `s ∘ t`
    pub fn twist_compose(&self, s: &Twist, t: &Twist) -> Result<Twist, GroupError> {
        self.twist(&s.m * &t.m, s.eps * t.eps)
    }

    pub fn twist_pow(&self, t: &Twist, j: u32) -> Result<Twist, GroupError> {
        let mut acc = self.identity_twist();
        for _ in 0..j {
            acc = self.twist_compose(&acc, t)?;
        }
        Ok(acc)
    }
}
