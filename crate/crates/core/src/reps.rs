//! Finite-dimensional φ-invariant representations and twisted characters.
//!
//! A finite `A`-orbit `{p₀, …, p_{d−1}}` of rational points on the dual
//! torus gives a `d`-dimensional representation on functions on the orbit:
//! `(v, 0)` acts diagonally by `exp(2πi⟨v, pᵢ⟩)` and `(0, n)` permutes the
//! basis by `A⁻ⁿ`. When the orbit is also `M`-invariant, the permutation
//! induced by `M` intertwines `ρ` and `ρ∘φ`, and `g ↦ Tr(S·ρ(g))` is
//! constant on twisted classes.
//!
//! Irreducibility of these representations is not checked.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::grp::{Elem, Group, Twist};
use crate::intlat::{det, lattice_member, IntMat};
use crate::reid::{ClassId, ReidError, TwistedClasses};

/// Tolerance for comparing root sums whose angles have denominator > 2.
pub const FLOAT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("unsupported matrix: {0}")]
    UnsupportedMatrix(String),
    #[error("orbit is not invariant under the twist")]
    NotInvariant,
    #[error("det(M - A^{level}) = 0")]
    DegenerateLattice { level: i64 },
    #[error("character table is only defined for the standard group and its phi")]
    NotStandardPhi,
    #[error(transparent)]
    Reid(#[from] ReidError),
}

/// Rational in `[0, 1)`, read as the root of unity `exp(2πi·a)`.
pub type Angle = Ratio<i64>;

fn frac(r: Ratio<i64>) -> Ratio<i64> {
    r - r.floor()
}

/// Rational point of `T² = R²/Z²`, both coordinates reduced into `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusPoint {
    pub x: Ratio<i64>,
    pub y: Ratio<i64>,
}

impl TorusPoint {
    pub fn new(x: Ratio<i64>, y: Ratio<i64>) -> Self {
        TorusPoint {
            x: frac(x),
            y: frac(y),
        }
    }

    pub fn from_grid(i: i64, j: i64, q: i64) -> Self {
        TorusPoint::new(Ratio::new(i, q), Ratio::new(j, q))
    }

    pub fn origin() -> Self {
        TorusPoint::from_grid(0, 0, 1)
    }

    pub fn denominator(&self) -> i64 {
        self.x.denom().lcm(self.y.denom())
    }

    /// `m·p mod 1`
    pub fn transform(&self, m: &IntMat) -> TorusPoint {
        let q = self.denominator();
        let a = (self.x * q).to_integer();
        let b = (self.y * q).to_integer();
        let qb = BigInt::from(q);
        let entry = |i, j| {
            m[(i, j)]
                .mod_floor(&qb)
                .to_i64()
                .expect("reduced below the denominator")
        };
        let nx = (entry(0, 0) as i128 * a as i128 + entry(0, 1) as i128 * b as i128)
            .rem_euclid(q as i128) as i64;
        let ny = (entry(1, 0) as i128 * a as i128 + entry(1, 1) as i128 * b as i128)
            .rem_euclid(q as i128) as i64;
        TorusPoint::from_grid(nx, ny, q)
    }

    /// `⟨v, p⟩ mod 1`
    pub fn pairing(&self, v: &[BigInt; 2]) -> Angle {
        let part = |c: &BigInt, r: &Ratio<i64>| {
            let d = BigInt::from(*r.denom());
            let c = c
                .mod_floor(&d)
                .to_i64()
                .expect("reduced below the denominator");
            Ratio::new(c * r.numer(), *r.denom())
        };
        frac(part(&v[0], &self.x) + part(&v[1], &self.y))
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Integer combination of roots of unity `Σ c·exp(2πi·a)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RootSum {
    terms: BTreeMap<Angle, i64>,
}

/// How two root sums were compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComparisonMethod {
    Exact,
    Float,
}

impl RootSum {
    pub fn zero() -> Self {
        RootSum::default()
    }

    pub fn root(angle: Angle) -> Self {
        RootSum::zero().plus_term(frac(angle), 1)
    }

    pub fn integer(c: i64) -> Self {
        RootSum::zero().plus_term(Angle::zero(), c)
    }

    fn plus_term(mut self, angle: Angle, c: i64) -> Self {
        if c != 0 {
            let e = self.terms.entry(angle).or_insert(0);
            *e += c;
            if *e == 0 {
                self.terms.remove(&angle);
            }
        }
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Angle, &i64)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: i64) -> RootSum {
        self.terms
            .iter()
            .fold(RootSum::zero(), |acc, (a, x)| acc.plus_term(*a, x * c))
    }

    pub fn to_complex(&self) -> Complex64 {
        self.terms
            .iter()
            .map(|(a, c)| {
                let theta = 2.0 * std::f64::consts::PI * a.to_f64().expect("small ratio");
                Complex64::from_polar(*c as f64, theta)
            })
            .sum()
    }

    /// Exact integer value when every angle is 0 or 1/2.
    pub fn as_integer(&self) -> Option<i64> {
        let half = Ratio::new(1, 2);
        self.terms.iter().try_fold(0i64, |acc, (a, c)| {
            if a.is_zero() {
                Some(acc + c)
            } else if *a == half {
                Some(acc - c)
            } else {
                None
            }
        })
    }

    /// Value equality: exact for denominators ≤ 2, otherwise within [`FLOAT_TOLERANCE`].
    pub fn value_eq(&self, other: &RootSum) -> (bool, ComparisonMethod) {
        match (self.as_integer(), other.as_integer()) {
            (Some(a), Some(b)) => (a == b, ComparisonMethod::Exact),
            _ => (
                (self.to_complex() - other.to_complex()).norm() < FLOAT_TOLERANCE,
                ComparisonMethod::Float,
            ),
        }
    }
}

impl Add for &RootSum {
    type Output = RootSum;
    fn add(self, rhs: &RootSum) -> RootSum {
        rhs.terms
            .iter()
            .fold(self.clone(), |acc, (a, c)| acc.plus_term(*a, *c))
    }
}

impl Neg for &RootSum {
    type Output = RootSum;
    fn neg(self) -> RootSum {
        self.scale(-1)
    }
}

impl Mul for &RootSum {
    type Output = RootSum;
    fn mul(self, rhs: &RootSum) -> RootSum {
        let mut out = RootSum::zero();
        for (a, c) in &self.terms {
            for (b, d) in &rhs.terms {
                out = out.plus_term(frac(a + b), c * d);
            }
        }
        out
    }
}

impl fmt::Display for RootSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_integer() {
            return write!(f, "{n}");
        }
        for (i, (a, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*e({a})")?;
        }
        Ok(())
    }
}

/// Matrix with exactly one root-of-unity entry per column:
/// `X·e_j = exp(2πi·phases[j])·e_{perm[j]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMatrix {
    pub perm: Vec<usize>,
    pub phases: Vec<Angle>,
}

impl MonomialMatrix {
    pub fn identity(d: usize) -> Self {
        MonomialMatrix {
            perm: (0..d).collect(),
            phases: vec![Angle::zero(); d],
        }
    }

    pub fn permutation(perm: Vec<usize>) -> Self {
        let d = perm.len();
        MonomialMatrix {
            perm,
            phases: vec![Angle::zero(); d],
        }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> RootSum {
        if self.perm[j] == i {
            RootSum::root(self.phases[j])
        } else {
            RootSum::zero()
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<RootSum>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    pub fn trace(&self) -> RootSum {
        (0..self.dim())
            .filter(|&j| self.perm[j] == j)
            .fold(RootSum::zero(), |acc, j| {
                &acc + &RootSum::root(self.phases[j])
            })
    }

    pub fn inverse(&self) -> MonomialMatrix {
        let d = self.dim();
        let mut perm = vec![0; d];
        let mut phases = vec![Angle::zero(); d];
        for j in 0..d {
            perm[self.perm[j]] = j;
            phases[self.perm[j]] = frac(-self.phases[j]);
        }
        MonomialMatrix { perm, phases }
    }
}

impl Mul for &MonomialMatrix {
    type Output = MonomialMatrix;
    fn mul(self, rhs: &MonomialMatrix) -> MonomialMatrix {
        assert_eq!(self.dim(), rhs.dim());
        let (perm, phases) = (0..rhs.dim())
            .map(|j| {
                let mid = rhs.perm[j];
                (self.perm[mid], frac(rhs.phases[j] + self.phases[mid]))
            })
            .unzip();
        MonomialMatrix { perm, phases }
    }
}

/// Finite `A`-orbit on the torus, points in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitRep {
    pub points: Vec<TorusPoint>,
    /// `A·points[i] = points[alpha_perm[i]]`
    pub alpha_perm: Vec<usize>,
    /// `M·points[i] = points[mu_perm[i]]`, present iff the orbit is `M`-invariant.
    pub mu_perm: Option<Vec<usize>>,
}

impl OrbitRep {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, p: &TorusPoint) -> Option<usize> {
        self.points.binary_search(p).ok()
    }
}

/// Dual actions of `A` and `M` on the torus.
///
/// The dual of `v ↦ Av` is `Aᵀ`, and the intertwiner needs `M⁻ᵀ`; both
/// coincide with the matrices themselves when `A` is symmetric and `M` is
/// orthogonal, which is all that is supported.
#[derive(Debug, Clone)]
pub struct TorusAction {
    a: IntMat,
    m: IntMat,
}

impl TorusAction {
    pub fn new(group: &Group, t: &Twist) -> Result<Self, RepError> {
        let a = group.matrix().clone();
        if !a.is_symmetric() {
            return Err(RepError::UnsupportedMatrix(format!(
                "A = {a} is not symmetric"
            )));
        }
        let m = t.matrix().clone();
        if &m.transpose() * &m != IntMat::identity(2) {
            return Err(RepError::UnsupportedMatrix(format!(
                "M = {m} is not orthogonal"
            )));
        }
        Ok(TorusAction { a, m })
    }

    /// The orbit of `p` under `A`, sorted, without `mu_perm`.
    pub fn alpha_orbit(&self, p: TorusPoint) -> OrbitRep {
        let mut visited = vec![p];
        let mut cur = p.transform(&self.a);
        while cur != p {
            visited.push(cur);
            cur = cur.transform(&self.a);
        }
        let mut points = visited.clone();
        points.sort();
        let index = |q: &TorusPoint| points.binary_search(q).expect("orbit point");
        let alpha_perm = points
            .iter()
            .map(|q| index(&q.transform(&self.a)))
            .collect();
        OrbitRep {
            points,
            alpha_perm,
            mu_perm: None,
        }
    }

    /// Fills `mu_perm` when `M` maps the orbit onto itself.
    pub fn with_mu(&self, mut orbit: OrbitRep) -> OrbitRep {
        orbit.mu_perm = orbit
            .points
            .iter()
            .map(|p| orbit.index_of(&p.transform(&self.m)))
            .collect();
        orbit
    }

    /// All `M`-invariant `A`-orbits of points in `(1/q_max)·Z² / Z²`.
    pub fn find_invariant_orbits(&self, q_max: u32) -> Vec<OrbitRep> {
        assert!(q_max >= 1, "q_max must be positive");
        let q = q_max as i64;
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for i in 0..q {
            for j in 0..q {
                let p = TorusPoint::from_grid(i, j, q);
                if seen.contains(&p) {
                    continue;
                }
                let orbit = self.alpha_orbit(p);
                seen.extend(orbit.points.iter().copied());
                let orbit = self.with_mu(orbit);
                if orbit.mu_perm.is_some() {
                    out.push(orbit);
                }
            }
        }
        out
    }
}

/// Representation induced from a finite orbit; dimension = orbit size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub orbit: OrbitRep,
}

impl Representation {
    pub fn new(orbit: OrbitRep) -> Self {
        Representation { orbit }
    }

    pub fn dimension(&self) -> usize {
        self.orbit.len()
    }
}

/// `ρ(g) = ρ(v,0)·ρ(0,n)`.
pub fn rep_matrix(rep: &Representation, g: &Elem) -> MonomialMatrix {
    let alpha = &rep.orbit.alpha_perm;
    // σ = alpha_perm^{−n}, reduced modulo the order of the permutation
    let steps = (-g.n).rem_euclid(perm_order(alpha) as i64);
    let mut sigma: Vec<usize> = (0..rep.dimension()).collect();
    for _ in 0..steps {
        sigma = sigma.iter().map(|&i| alpha[i]).collect();
    }
    let phases = sigma
        .iter()
        .map(|&i| rep.orbit.points[i].pairing(&g.v))
        .collect();
    MonomialMatrix {
        perm: sigma,
        phases,
    }
}

fn perm_order(perm: &[usize]) -> usize {
    let mut cur: Vec<usize> = perm.to_vec();
    let mut k = 1;
    while cur.iter().enumerate().any(|(i, &x)| i != x) {
        cur = cur.iter().map(|&i| perm[i]).collect();
        k += 1;
    }
    k
}

/// Permutation matrix of `mu_perm`.
pub fn intertwiner(rep: &Representation) -> Result<MonomialMatrix, RepError> {
    rep.orbit
        .mu_perm
        .clone()
        .map(MonomialMatrix::permutation)
        .ok_or(RepError::NotInvariant)
}

/// `Tr(S·ρ(g))`
pub fn twisted_character(rep: &Representation, g: &Elem) -> Result<RootSum, RepError> {
    let s = intertwiner(rep)?;
    Ok((&s * &rep_matrix(rep, g)).trace())
}

/// `(−1)ⁿ`
pub fn sign_character(g: &Elem) -> i64 {
    if g.n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

pub fn twisted_character_tensor_sign(rep: &Representation, g: &Elem) -> Result<RootSum, RepError> {
    Ok(twisted_character(rep, g)?.scale(sign_character(g)))
}

/// The four φ-invariant finite-dimensional representations.
#[derive(Debug, Clone)]
pub struct StandardReps {
    pub trivial: Representation,
    pub three_dim: Representation,
}

impl StandardReps {
    pub fn new(group: &Group, t: &Twist) -> Result<Self, RepError> {
        if *group != Group::standard() || *t != group.phi().expect("standard phi") {
            return Err(RepError::NotStandardPhi);
        }
        let action = TorusAction::new(group, t)?;
        let mut orbits = action.find_invariant_orbits(2).into_iter();
        let (Some(trivial), Some(three_dim), None) = (orbits.next(), orbits.next(), orbits.next())
        else {
            unreachable!("two invariant orbits at denominator 2")
        };
        Ok(StandardReps {
            trivial: Representation::new(trivial),
            three_dim: Representation::new(three_dim),
        })
    }

    /// `(φ_{ρ₁}, φ_π, φ_{ρ₂}, φ_{ρ₂⊗π})` at `g`.
    pub fn characters(&self, g: &Elem) -> [RootSum; 4] {
        let rho1 = twisted_character(&self.trivial, g).expect("invariant");
        let rho2 = twisted_character(&self.three_dim, g).expect("invariant");
        let pi = RootSum::integer(sign_character(g));
        let rho2_pi = rho2.scale(sign_character(g));
        [rho1, pi, rho2, rho2_pi]
    }

    /// Same as [`characters`](Self::characters) as exact integers.
    pub fn integer_characters(&self, g: &Elem) -> [i64; 4] {
        self.characters(g)
            .map(|c| c.as_integer().expect("denominators are 1 or 2"))
    }
}

pub const CHARACTER_NAMES: [&str; 4] = ["phi_rho1", "phi_pi", "phi_rho2", "phi_rho2_pi"];

/// Values of the four twisted characters on the four twisted classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterTable {
    pub classes: Vec<ClassId>,
    pub representatives: Vec<Elem>,
    /// rows: characters in [`CHARACTER_NAMES`] order; columns: `B₁..B₄`.
    pub entries: [[i64; 4]; 4],
    pub det: BigInt,
}

pub fn character_table(group: &Group, t: &Twist) -> Result<CharacterTable, RepError> {
    let reps = StandardReps::new(group, t)?;
    let classes = TwistedClasses::new(group, t)?;
    let ids = classes.classes();
    let representatives: Vec<Elem> = ids.iter().map(|id| classes.representative(id)).collect();
    let mut entries = [[0i64; 4]; 4];
    for (col, h) in representatives.iter().enumerate() {
        for (row, value) in reps.integer_characters(h).into_iter().enumerate() {
            entries[row][col] = value;
        }
    }
    let det = det(&IntMat::from_rows(&entries));
    Ok(CharacterTable {
        classes: ids,
        representatives,
        entries,
        det,
    })
}

/// Number of `(s,t)` with `(m,k) = (M − Aⁿ)·(s,t)`; 0 or 1 when the matrix is invertible.
pub fn l2_twisted_character(group: &Group, t: &Twist, g: &Elem) -> Result<u8, RepError> {
    let lat = t.matrix() - &*group.power(g.n);
    if det(&lat).is_zero() {
        return Err(RepError::DegenerateLattice { level: g.n });
    }
    Ok(lattice_member(&lat, &g.v).is_some() as u8)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Group, Twist, TorusAction) {
        let g = Group::standard();
        let phi = g.phi().unwrap();
        let act = TorusAction::new(&g, &phi).unwrap();
        (g, phi, act)
    }

    fn half() -> Ratio<i64> {
        Ratio::new(1, 2)
    }

    fn pt(x: (i64, i64), y: (i64, i64)) -> TorusPoint {
        TorusPoint::new(Ratio::new(x.0, x.1), Ratio::new(y.0, y.1))
    }

    #[test]
    fn orbit_of_origin_is_a_point() {
        let (_, _, act) = setup();
        let o = act.alpha_orbit(TorusPoint::origin());
        assert_eq!(o.points, vec![TorusPoint::origin()]);
        assert_eq!(o.alpha_perm, vec![0]);
    }

    #[test]
    fn orbit_of_half_points() {
        let (_, _, act) = setup();
        let o = act.alpha_orbit(pt((0, 1), (1, 2)));
        assert_eq!(
            o.points,
            vec![pt((0, 1), (1, 2)), pt((1, 2), (0, 1)), pt((1, 2), (1, 2))]
        );
        // A·A₁ = A₃, A·A₃ = A₂, A·A₂ = A₁
        assert_eq!(o.alpha_perm, vec![2, 0, 1]);
    }

    #[test]
    fn orbit_of_third_matches_iteration() {
        let (_, _, act) = setup();
        // iterate (i,j) ↦ (2i+j, i+j) mod 3 from (1,0) by hand
        let mut expected = vec![];
        let (mut i, mut j) = (1i64, 0i64);
        loop {
            expected.push(TorusPoint::from_grid(i, j, 3));
            let (ni, nj) = ((2 * i + j) % 3, (i + j) % 3);
            (i, j) = (ni, nj);
            if (i, j) == (1, 0) {
                break;
            }
        }
        expected.sort();
        let o = act.alpha_orbit(pt((1, 3), (0, 1)));
        assert_eq!(o.points, expected);
        assert_eq!(o.len(), 4);
    }

    #[test]
    fn invariant_orbits_at_small_denominators() {
        let (_, _, act) = setup();
        let one = act.find_invariant_orbits(1);
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].points, vec![TorusPoint::origin()]);
        let two = act.find_invariant_orbits(2);
        assert_eq!(two.len(), 2);
        assert_eq!(two[0].points, vec![TorusPoint::origin()]);
        assert_eq!(two[1].points.len(), 3);
        assert_eq!(two[1].mu_perm, Some(vec![1, 0, 2]));
    }

    #[test]
    fn intertwiner_matrices() {
        let (_, _, act) = setup();
        let orbits = act.find_invariant_orbits(2);
        let s1 = intertwiner(&Representation::new(orbits[0].clone())).unwrap();
        assert_eq!(s1, MonomialMatrix::identity(1));
        let s2 = intertwiner(&Representation::new(orbits[1].clone())).unwrap();
        let dense: Vec<Vec<i64>> = s2
            .to_dense()
            .iter()
            .map(|r| r.iter().map(|x| x.as_integer().unwrap()).collect())
            .collect();
        assert_eq!(dense, vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]);
        let bare = Representation::new(act.alpha_orbit(TorusPoint::origin()));
        assert_eq!(intertwiner(&bare), Err(RepError::NotInvariant));
    }

    #[test]
    fn rho2_generators() {
        let (_, _, act) = setup();
        let rho2 = Representation::new(act.find_invariant_orbits(2)[1].clone());
        assert_eq!(
            rep_matrix(&rho2, &Elem::identity()),
            MonomialMatrix::identity(3)
        );
        for n in -4..=4i64 {
            let p = rep_matrix(&rho2, &Elem::new(0, 0, n));
            for i in 0..3 {
                assert_eq!(p.perm[i], (i as i64 + n).rem_euclid(3) as usize);
            }
        }
        let (m, k) = (3, 4);
        let d = rep_matrix(&rho2, &Elem::new(m, k, 0));
        assert_eq!(d.perm, vec![0, 1, 2]);
        let h = half();
        let z = Angle::zero();
        let par = |x: i64| if x % 2 == 0 { z } else { h };
        assert_eq!(d.phases, vec![par(k), par(m), par(m + k)]);
    }

    #[test]
    fn rho2_twisted_character_values() {
        let (_, _, act) = setup();
        let rho2 = Representation::new(act.find_invariant_orbits(2)[1].clone());
        for (m, k) in [(0, 0), (1, 0), (0, 1), (1, 1), (3, -2)] {
            for n in -6..=6i64 {
                let val = twisted_character(&rho2, &Elem::new(m, k, n))
                    .unwrap()
                    .as_integer()
                    .unwrap();
                let exponent = match n.rem_euclid(3) {
                    0 => m + k,
                    1 => m,
                    _ => k,
                };
                let expected = if exponent.rem_euclid(2) == 0 { 1 } else { -1 };
                assert_eq!(val, expected, "(({m},{k}),{n})");
            }
        }
        let rho1 = Representation::new(act.find_invariant_orbits(2)[0].clone());
        assert_eq!(
            twisted_character(&rho1, &Elem::new(5, 7, 3)).unwrap(),
            RootSum::integer(1)
        );
    }

    #[test]
    fn sign_character_examples() {
        assert_eq!(sign_character(&Elem::new(5, -3, 0)), 1);
        assert_eq!(sign_character(&Elem::new(0, 0, 1)), -1);
        assert_eq!(sign_character(&Elem::new(0, 0, -3)), -1);
    }

    #[test]
    fn tensor_sign_character() {
        let (_, _, act) = setup();
        let rho2 = Representation::new(act.find_invariant_orbits(2)[1].clone());
        let even = Elem::new(1, 2, 4);
        assert_eq!(
            twisted_character_tensor_sign(&rho2, &even).unwrap(),
            twisted_character(&rho2, &even).unwrap()
        );
        let odd = Elem::new(0, 0, 1);
        assert_eq!(
            twisted_character_tensor_sign(&rho2, &odd).unwrap(),
            -&twisted_character(&rho2, &odd).unwrap()
        );
    }

    #[test]
    fn table_and_determinant() {
        let (g, phi, _) = setup();
        let t = character_table(&g, &phi).unwrap();
        assert_eq!(
            t.entries,
            [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]]
        );
        // a 4x4 Hadamard matrix: H·Hᵀ = 4I, so |det| = 16
        assert_eq!(t.det, BigInt::from(-16));
    }

    #[test]
    fn table_requires_standard_phi() {
        let (g, phi, _) = setup();
        let phi2 = g.twist_pow(&phi, 2).unwrap();
        assert_eq!(
            character_table(&g, &phi2).unwrap_err(),
            RepError::NotStandardPhi
        );
    }

    #[test]
    fn l2_examples() {
        let (g, phi, _) = setup();
        assert_eq!(l2_twisted_character(&g, &phi, &Elem::identity()), Ok(1));
        assert_eq!(l2_twisted_character(&g, &phi, &Elem::new(1, 0, 0)), Ok(0));
        // level 1: (m,k) = (−2s, −2s−t) so only m even is reached
        assert_eq!(l2_twisted_character(&g, &phi, &Elem::new(2, 1, 1)), Ok(1));
        assert_eq!(l2_twisted_character(&g, &phi, &Elem::new(1, 1, 1)), Ok(0));
    }

    #[test]
    fn non_symmetric_base_is_rejected() {
        let g = Group::new(IntMat::from_rows(&[[3, 1], [2, 1]])).unwrap();
        let id = g.identity_twist();
        assert!(matches!(
            TorusAction::new(&g, &id),
            Err(RepError::UnsupportedMatrix(_))
        ));
    }

    #[test]
    fn root_sum_arithmetic() {
        let third = Ratio::new(1, 3);
        let w = RootSum::root(third);
        let w2 = &w * &w;
        let total = &(&RootSum::integer(1) + &w) + &w2;
        assert!(total.as_integer().is_none());
        let (eq, method) = total.value_eq(&RootSum::zero());
        assert!(eq);
        assert_eq!(method, ComparisonMethod::Float);
        let minus_one = RootSum::root(half());
        assert_eq!(minus_one.as_integer(), Some(-1));
        assert_eq!((&minus_one * &minus_one).as_integer(), Some(1));
        assert_eq!(
            RootSum::integer(3).value_eq(&RootSum::integer(3)),
            (true, ComparisonMethod::Exact)
        );
        assert!((&w + &(-&w)).is_zero());
        assert_eq!(w2.to_string(), "1*e(2/3)");
    }

    #[test]
    fn monomial_inverse() {
        let x = MonomialMatrix {
            perm: vec![2, 0, 1],
            phases: vec![Ratio::new(1, 3), Angle::zero(), half()],
        };
        assert_eq!(&x * &x.inverse(), MonomialMatrix::identity(3));
        assert_eq!(&x.inverse() * &x, MonomialMatrix::identity(3));
    }
}
