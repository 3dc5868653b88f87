//! Twisted conjugacy: decision procedure, canonical class labels,
//! Reidemeister numbers and the Möbius congruences.
//!
//! Conjugating `h = (v, n)` by `g = (x, z)` under a twist `(M, ε)` gives
//!
//! ```text
//! ε = −1:  (A^z·v + (I − A^{2z+n}·M)·x, 2z + n)
//! ε = +1:  (A^z·v + (I − Aⁿ·M)·x,       n)
//! ```
//!
//! so everything reduces to membership in the lattices `(I − AⁿM)·Z²`.
//! For `ε = −1` these satisfy `A·(I − AⁿM)·Z² = (I − A^{n+2}M)·Z²`, which
//! lets each class be labelled at level 0 or 1.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::grp::{Elem, Group, Sign, Twist};
use crate::intlat::{
    all_coset_labels, coker_order, coset_label, coset_representative, det, int_vec,
    lattice_member_with, mat_pow, snf, Cardinality, IntMat, IntVec, SnfDecomposition,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReidError {
    #[error("det(I - A^{level} M) = 0; degenerate lattices are not supported")]
    DegenerateLattice { level: i64 },
    #[error("twist preserves levels (eps = +1); no finite class labelling")]
    UnsupportedTwist,
    #[error("R(F^{0}) is infinite: det(I - F^{0}) = 0")]
    InfiniteReidemeister(u32),
    #[error("Möbius function is defined for d >= 1, got {0}")]
    Domain(i64),
}

/// Canonical label of a twisted class for an `ε = −1` twist: the level
/// parity and the coset of the base-level vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassId {
    pub parity: u8,
    pub coset: IntVec,
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:(", self.parity)?;
        for (i, c) in self.coset.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// `g` with `g · h₁ · t(g⁻¹) = h₂`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyWitness {
    pub g: Elem,
}

impl ConjugacyWitness {
    pub fn replays(&self, group: &Group, h1: &Elem, h2: &Elem, t: &Twist) -> bool {
        group.twisted_conj(&self.g, h1, t) == *h2
    }
}

/// `I − Aⁿ·M`
pub fn twisted_lattice(group: &Group, t: &Twist, n: i64) -> IntMat {
    &IntMat::identity(2) - &(&*group.power(n) * t.matrix())
}

fn vec_sub(a: &[BigInt; 2], b: &[BigInt]) -> IntVec {
    vec![&a[0] - &b[0], &a[1] - &b[1]]
}

/// Decides whether `h2` lies in the twisted class of `h1`, returning a witness.
pub fn are_twisted_conjugate(
    group: &Group,
    h1: &Elem,
    h2: &Elem,
    t: &Twist,
) -> Result<Option<ConjugacyWitness>, ReidError> {
    if h1 == h2 {
        return Ok(Some(ConjugacyWitness {
            g: Elem::identity(),
        }));
    }
    match t.eps() {
        Sign::Minus => {
            let shift = h2.n - h1.n;
            if shift.rem_euclid(2) != 0 {
                return Ok(None);
            }
            let z = shift / 2;
            let lat = twisted_lattice(group, t, h2.n);
            if det(&lat).is_zero() {
                return Err(ReidError::DegenerateLattice { level: h2.n });
            }
            let moved = group.power(z).mul_vec(&h1.v);
            let target = vec_sub(&h2.v, &moved);
            Ok(
                lattice_member_with(&snf(&lat), &target).map(|x| ConjugacyWitness {
                    g: Elem::from_vec(&x, z),
                }),
            )
        }
        Sign::Plus => {
            if h1.n != h2.n {
                return Ok(None);
            }
            let n = h1.n;
            let lat = twisted_lattice(group, t, n);
            if det(&lat).is_zero() {
                return Err(ReidError::DegenerateLattice { level: n });
            }
            let s = snf(&lat);
            let label = |v: &[BigInt]| coset_label(&s, v).expect("finite cokernel");
            let wanted = label(&h2.v);
            let start = label(&h1.v);
            // A commutes with M here, so it permutes Z²/(I − AⁿM)Z²; walk
            // the orbit of [v₁] until it closes up.
            let a = group.matrix();
            let mut current = start.clone();
            let mut z: i64 = 0;
            loop {
                if current == wanted {
                    break;
                }
                let next = a.mul_vec(&coset_representative(&s, &current));
                current = label(&next);
                z += 1;
                if current == start {
                    return Ok(None);
                }
            }
            let moved = group.power(z).mul_vec(&h1.v);
            let x = lattice_member_with(&s, &vec_sub(&h2.v, &moved))
                .expect("matching coset labels imply membership");
            Ok(Some(ConjugacyWitness {
                g: Elem::from_vec(&x, z),
            }))
        }
    }
}

const SMALL_COKERNEL: i64 = 64;

/// Class labelling for an `ε = −1` twist with finite base cokernels.
#[derive(Debug, Clone)]
pub struct TwistedClasses {
    group: Group,
    twist: Twist,
    base: [SnfDecomposition; 2],
}

impl TwistedClasses {
    pub fn new(group: &Group, t: &Twist) -> Result<Self, ReidError> {
        if t.eps() == Sign::Plus {
            return Err(ReidError::UnsupportedTwist);
        }
        let mut base = Vec::with_capacity(2);
        for p in 0..2 {
            let lat = twisted_lattice(group, t, p);
            if det(&lat).is_zero() {
                return Err(ReidError::DegenerateLattice { level: p });
            }
            base.push(snf(&lat));
        }
        let base: [SnfDecomposition; 2] = base.try_into().expect("two levels");
        Ok(TwistedClasses {
            group: group.clone(),
            twist: t.clone(),
            base,
        })
    }

    pub fn twist(&self) -> &Twist {
        &self.twist
    }

    /// Parity `p = n mod 2` and the coset of `A^{−z}·v`, where `n = 2z + p`.
    pub fn class_id(&self, h: &Elem) -> ClassId {
        let p = h.n.rem_euclid(2);
        let z = (h.n - p) / 2;
        let base_v = self.group.power(-z).mul_vec(&h.v);
        ClassId {
            parity: p as u8,
            coset: coset_label(&self.base[p as usize], &base_v).expect("finite cokernel"),
        }
    }

    /// All classes, even level first, cosets in label order.
    pub fn classes(&self) -> Vec<ClassId> {
        (0..2u8)
            .flat_map(|p| {
                all_coset_labels(&self.base[p as usize])
                    .expect("finite cokernel")
                    .into_iter()
                    .map(move |coset| ClassId { parity: p, coset })
            })
            .collect()
    }

    /// Position of `id` in [`classes`](Self::classes).
    pub fn index_of(&self, id: &ClassId) -> Option<usize> {
        self.classes().iter().position(|c| c == id)
    }

    /// An element at level `parity` carrying the given class. For small
    /// cokernels this is the first `(a,b)` with `a,b ≥ 0` in the class,
    /// ordered by `a + b` then `b`.
    pub fn representative(&self, id: &ClassId) -> Elem {
        let s = &self.base[id.parity as usize];
        let order: i64 = s
            .invariant_factors()
            .iter()
            .product::<BigInt>()
            .try_into()
            .unwrap_or(i64::MAX);
        if order <= SMALL_COKERNEL {
            // order·Z² lies in the lattice, so the square [0, order)² meets every coset
            for total in 0..2 * order - 1 {
                for b in 0.max(total - order + 1)..=total.min(order - 1) {
                    let v = int_vec(&[total - b, b]);
                    if coset_label(s, &v).expect("finite cokernel") == id.coset {
                        return Elem::from_vec(&v, id.parity as i64);
                    }
                }
            }
        }
        let v = coset_representative(s, &id.coset);
        Elem::from_vec(&v, id.parity as i64)
    }

    /// Moves `h` to its base level (0 or 1), with the conjugator used.
    pub fn base_level(&self, h: &Elem) -> (Elem, Elem) {
        let p = h.n.rem_euclid(2);
        let z = (h.n - p) / 2;
        let g = Elem::new(0, 0, -z);
        let moved = self.group.twisted_conj(&g, h, &self.twist);
        (moved, g)
    }
}

pub fn class_id(group: &Group, h: &Elem, t: &Twist) -> Result<ClassId, ReidError> {
    Ok(TwistedClasses::new(group, t)?.class_id(h))
}

/// Why a Reidemeister number is infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfiniteReason {
    /// `ε = +1`: every level is preserved, so each contributes a class.
    LevelPreserving,
    /// `det(I − A^parity·M) = 0`.
    DegenerateCokernel { parity: u8 },
}

impl fmt::Display for InfiniteReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InfiniteReason::LevelPreserving => f.write_str("level-preserving"),
            InfiniteReason::DegenerateCokernel { .. } => f.write_str("degenerate cokernel"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reidemeister {
    Finite(BigInt),
    Infinite(InfiniteReason),
}

impl Reidemeister {
    pub fn cardinality(&self) -> Cardinality {
        match self {
            Reidemeister::Finite(n) => Cardinality::Finite(n.clone()),
            Reidemeister::Infinite(_) => Cardinality::Infinite,
        }
    }
}

/// Even-level classes plus odd-level classes for `ε = −1`; infinite otherwise.
pub fn reidemeister_number(group: &Group, t: &Twist) -> Reidemeister {
    if t.eps() == Sign::Plus {
        return Reidemeister::Infinite(InfiniteReason::LevelPreserving);
    }
    let mut total = BigInt::zero();
    for p in 0..2u8 {
        match coker_order(&twisted_lattice(group, t, p as i64)) {
            Cardinality::Finite(c) => total += c,
            Cardinality::Infinite => {
                return Reidemeister::Infinite(InfiniteReason::DegenerateCokernel { parity: p })
            }
        }
    }
    Reidemeister::Finite(total)
}

/// `|det(I − F)|` for an endomorphism `F` of `Zᵏ`.
pub fn reidemeister_abelian(f: &IntMat) -> Cardinality {
    coker_order(&(&IntMat::identity(f.rows()) - f))
}

pub fn mobius(d: i64) -> Result<i8, ReidError> {
    if d <= 0 {
        return Err(ReidError::Domain(d));
    }
    let mut rest = d;
    let mut sign = 1i8;
    let mut p = 2;
    while p * p <= rest {
        if rest % p == 0 {
            rest /= p;
            if rest % p == 0 {
                return Ok(0);
            }
            sign = -sign;
        }
        p += 1;
    }
    if rest > 1 {
        sign = -sign;
    }
    Ok(sign)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceRow {
    pub n: u32,
    pub lhs: BigInt,
    pub holds: bool,
}

/// `Σ_{d|n} μ(d)·R(F^{n/d}) mod n` for `n = 1..=n_max`.
pub fn congruence_check(f: &IntMat, n_max: u32) -> Result<Vec<CongruenceRow>, ReidError> {
    let mut counts = Vec::with_capacity(n_max as usize);
    for j in 1..=n_max {
        let power = mat_pow(f, j as i64).expect("non-negative power");
        match reidemeister_abelian(&power) {
            Cardinality::Finite(r) => counts.push(r),
            Cardinality::Infinite => return Err(ReidError::InfiniteReidemeister(j)),
        }
    }
    Ok((1..=n_max)
        .map(|n| {
            let mut lhs = BigInt::zero();
            for d in (1..=n).filter(|d| n % d == 0) {
                let mu = mobius(d as i64).expect("d >= 1");
                let r = &counts[(n / d - 1) as usize];
                match mu {
                    1 => lhs += r,
                    -1 => lhs -= r,
                    _ => {}
                }
            }
            let holds = (&lhs % BigInt::from(n)).is_zero();
            CongruenceRow { n, lhs, holds }
        })
        .collect())
}

/// Which parity a table cell constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityForm {
    /// `m + k`
    Sum,
    /// `m`
    First,
    /// `k`
    Second,
}

impl ParityForm {
    pub fn eval(self, v: &[BigInt; 2]) -> BigInt {
        match self {
            ParityForm::Sum => &v[0] + &v[1],
            ParityForm::First => v[0].clone(),
            ParityForm::Second => v[1].clone(),
        }
    }

    fn name(self) -> &'static str {
        match self {
            ParityForm::Sum => "m+k",
            ParityForm::First => "m",
            ParityForm::Second => "k",
        }
    }
}

/// One cell of the class/level parity table for the standard `φ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableCell {
    Empty,
    Even(ParityForm),
    Odd(ParityForm),
}

impl TableCell {
    pub fn holds(&self, v: &[BigInt; 2]) -> bool {
        match self {
            TableCell::Empty => false,
            TableCell::Even(f) => is_even(&f.eval(v)),
            TableCell::Odd(f) => !is_even(&f.eval(v)),
        }
    }
}

fn is_even(x: &BigInt) -> bool {
    (x % 2u32).is_zero()
}

impl fmt::Display for TableCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableCell::Empty => f.write_str("empty"),
            TableCell::Even(p) => write!(f, "{} is even", p.name()),
            TableCell::Odd(p) => write!(f, "{} is odd", p.name()),
        }
    }
}

use ParityForm::{First, Second, Sum};
use TableCell::{Empty, Even, Odd};

/// Rows are levels `j mod 6`, columns are `B₁..B₄`.
const PARITY_TABLE: [[TableCell; 4]; 6] = [
    [Even(Sum), Odd(Sum), Empty, Empty],
    [Empty, Empty, Even(First), Odd(First)],
    [Even(Second), Odd(Second), Empty, Empty],
    [Empty, Empty, Even(Sum), Odd(Sum)],
    [Even(First), Odd(First), Empty, Empty],
    [Empty, Empty, Even(Second), Odd(Second)],
];

/// Cell for class `B_{class+1}` at level `level` (any integer).
pub fn parity_table_cell(class: usize, level: i64) -> TableCell {
    PARITY_TABLE[level.rem_euclid(6) as usize][class]
}

/// The table's prediction for which `B_i` (0-based) contains `h`.
pub fn table_class(h: &Elem) -> usize {
    (0..4)
        .find(|&i| parity_table_cell(i, h.n).holds(&h.v))
        .expect("each level row covers Z²")
}
