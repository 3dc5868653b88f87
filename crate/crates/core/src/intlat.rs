//! Exact integer matrices, Smith normal form and lattice queries.
//!
//! Everything here works over arbitrary-precision integers. Powers of a
//! hyperbolic matrix grow like the golden ratio, so fixed-width entries
//! would overflow long before the group algorithms run out of steam.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Column vector of exact integers.
pub type IntVec = Vec<BigInt>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("matrix is not invertible over the integers (det = {det})")]
    NonInvertible { det: BigInt },
    #[error("cokernel is infinite")]
    InfiniteCokernel,
}

/// Size of a cokernel (or any count that may diverge).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cardinality {
    Finite(BigInt),
    Infinite,
}

impl Cardinality {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            Cardinality::Finite(n) => Some(n),
            Cardinality::Infinite => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Cardinality::Finite(_))
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinality::Finite(n) => write!(f, "{n}"),
            Cardinality::Infinite => f.write_str("infinite"),
        }
    }
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zeros(k, k);
        for i in 0..k {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows. Panics if the rows are ragged.
    pub fn from_rows<T, R>(rows: &[R]) -> Self
    where
        T: Into<BigInt> + Clone,
        R: AsRef<[T]>,
    {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().cloned().map(Into::into));
        }
        IntMat {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn trace(&self) -> BigInt {
        assert!(self.is_square());
        (0..self.rows).map(|i| &self[(i, i)]).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && det(self).abs().is_one()
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> IntVec {
        assert_eq!(
            v.len(),
            self.cols,
            "dimension mismatch in matrix-vector product"
        );
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for c in 0..self.cols {
            let delta = &self[(src, c)] * factor;
            self[(dst, c)] += delta;
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for r in 0..self.rows {
            let delta = &self[(r, src)] * factor;
            self[(r, dst)] += delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let x = std::mem::take(&mut self[(i, c)]);
            self[(i, c)] = -x;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for r in 0..self.rows {
            let x = std::mem::take(&mut self[(r, j)]);
            self[(r, j)] = -x;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl Mul for &IntMat {
    type Output = IntMat;
    fn mul(self, rhs: &IntMat) -> IntMat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = IntMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * &rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &IntMat {
    type Output = IntMat;
    fn add(self, rhs: &IntMat) -> IntMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        IntMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &IntMat {
    type Output = IntMat;
    fn sub(self, rhs: &IntMat) -> IntMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        IntMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &IntMat {
    type Output = IntMat;
    fn neg(self) -> IntMat {
        IntMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &IntMat) -> BigInt {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows;
    match n {
        0 => return BigInt::one(),
        1 => return m[(0, 0)].clone(),
        2 => return &m[(0, 0)] * &m[(1, 1)] - &m[(0, 1)] * &m[(1, 0)],
        _ => {}
    }
    let mut a = m.clone();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = num / &prev;
            }
        }
        prev = a[(k, k)].clone();
    }
    let d = a[(n - 1, n - 1)].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(m: &IntMat) -> Result<IntMat, LatticeError> {
    assert!(m.is_square());
    let d = det(m);
    if !d.abs().is_one() {
        return Err(LatticeError::NonInvertible { det: d });
    }
    if m.rows == 2 {
        // adjugate divided by ±1
        let adj = IntMat::from_rows(&[
            [m[(1, 1)].clone(), -&m[(0, 1)]],
            [-&m[(1, 0)], m[(0, 0)].clone()],
        ]);
        return Ok(if d.is_one() { adj } else { -&adj });
    }
    // U·M·V = I, so M⁻¹ = V·U.
    let s = snf(m);
    Ok(&s.v * &s.u)
}

/// Exact n-th power; negative exponents need a unimodular base.
pub fn mat_pow(m: &IntMat, n: i64) -> Result<IntMat, LatticeError> {
    assert!(m.is_square(), "power of a non-square matrix");
    let base = if n < 0 {
        unimodular_inverse(m)?
    } else {
        m.clone()
    };
    let mut e = n.unsigned_abs();
    let mut acc = IntMat::identity(m.rows);
    let mut sq = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    Ok(acc)
}

/// Smith decomposition `u · m · v = d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub d: IntMat,
    pub u: IntMat,
    pub v: IntMat,
    /// Inverse of `u`, tracked alongside the row operations.
    pub u_inv: IntMat,
}

impl SnfDecomposition {
    /// Diagonal entries d₁ | d₂ | …
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors()
            .iter()
            .filter(|d| !d.is_zero())
            .count()
    }
}

/// Smallest nonzero |entry| in the trailing block, row-major tie-break.
fn find_pivot(a: &IntMat, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some(b) if a[b].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Smith normal form with a fixed pivoting rule, so the output is deterministic.
pub fn snf(m: &IntMat) -> SnfDecomposition {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntMat::identity(r);
    let mut u_inv = IntMat::identity(r);
    let mut v = IntMat::identity(c);

    for t in 0..r.min(c) {
        while let Some((pi, pj)) = find_pivot(&a, t) {
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            u_inv.swap_cols(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..r {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = &a[(i, t)] / &a[(t, t)];
                let neg_q = -&q;
                a.add_row_multiple(i, t, &neg_q);
                u.add_row_multiple(i, t, &neg_q);
                u_inv.add_col_multiple(t, i, &q);
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..c {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&a[(t, j)] / &a[(t, t)]);
                a.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }

            let pivot = a[(t, t)].clone();
            let offender = (t + 1..r)
                .flat_map(|i| (t + 1..c).map(move |j| (i, j)))
                .find(|&ij| !a[ij].is_multiple_of(&pivot));
            match offender {
                Some((i, _)) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                    u_inv.add_col_multiple(i, t, &-one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
    }

    SnfDecomposition { d: a, u, v, u_inv }
}

/// Solves `m · w = v` over the integers, if possible.
pub fn lattice_member(m: &IntMat, v: &[BigInt]) -> Option<IntVec> {
    lattice_member_with(&snf(m), v)
}

/// Same as [`lattice_member`] with a precomputed decomposition.
pub fn lattice_member_with(s: &SnfDecomposition, v: &[BigInt]) -> Option<IntVec> {
    let uv = s.u.mul_vec(v);
    let diag = s.d.rows.min(s.d.cols);
    let mut y = vec![BigInt::zero(); s.d.cols];
    for (i, x) in uv.iter().enumerate() {
        let d = if i < diag {
            &s.d[(i, i)]
        } else {
            // rows past the diagonal are zero in d
            if !x.is_zero() {
                return None;
            }
            continue;
        };
        if d.is_zero() {
            if !x.is_zero() {
                return None;
            }
        } else {
            let (q, rem) = x.div_rem(d);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(s.v.mul_vec(&y))
}

/// Order of `Zᵏ / m·Zᵏ`.
pub fn coker_order(m: &IntMat) -> Cardinality {
    let d = det(m);
    if d.is_zero() {
        Cardinality::Infinite
    } else {
        Cardinality::Finite(d.abs())
    }
}

/// Canonical coordinates of `v` in `Zᵏ / m·Zᵏ`: `(u·v)ᵢ mod dᵢ` in `[0, dᵢ)`.
pub fn coset_label(s: &SnfDecomposition, v: &[BigInt]) -> Result<IntVec, LatticeError> {
    if !s.d.is_square() {
        return Err(LatticeError::InfiniteCokernel);
    }
    let factors = s.invariant_factors();
    if factors.iter().any(Zero::is_zero) {
        return Err(LatticeError::InfiniteCokernel);
    }
    Ok(s.u
        .mul_vec(v)
        .iter()
        .zip(&factors)
        .map(|(x, d)| x.mod_floor(d))
        .collect())
}

/// A vector whose coset label is `label` (the inverse of [`coset_label`]).
pub fn coset_representative(s: &SnfDecomposition, label: &[BigInt]) -> IntVec {
    s.u_inv.mul_vec(label)
}

/// Every coset label of a finite cokernel, in lexicographic order.
pub fn all_coset_labels(s: &SnfDecomposition) -> Result<Vec<IntVec>, LatticeError> {
    if !s.d.is_square() {
        return Err(LatticeError::InfiniteCokernel);
    }
    let factors = s.invariant_factors();
    if factors.iter().any(Zero::is_zero) {
        return Err(LatticeError::InfiniteCokernel);
    }
    let mut out = vec![Vec::new()];
    for d in &factors {
        let mut next = Vec::new();
        for prefix in &out {
            let mut x = BigInt::zero();
            while &x < d {
                let mut p = prefix.clone();
                p.push(x.clone());
                next.push(p);
                x += 1;
            }
        }
        out = next;
    }
    Ok(out)
}

/// Convenience for small literal vectors.
pub fn int_vec(xs: &[i64]) -> IntVec {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2(a: i64, b: i64, c: i64, d: i64) -> IntMat {
        IntMat::from_rows(&[[a, b], [c, d]])
    }

    fn a() -> IntMat {
        m2(2, 1, 1, 1)
    }

    fn i_minus_m() -> IntMat {
        m2(1, -1, 1, 1)
    }

    #[test]
    fn det_examples() {
        assert_eq!(det(&IntMat::identity(2)), BigInt::from(1));
        assert_eq!(det(&a()), BigInt::from(1));
        assert_eq!(det(&m2(-1, -1, -1, 0)), BigInt::from(-1));
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = IntMat::from_rows(&[[2, -3, 1, 0], [4, 0, -2, 5], [1, 1, 1, 1], [0, 7, -1, 3]]);
        // cofactor expansion along the first row, done longhand
        fn cof(m: &IntMat) -> BigInt {
            let n = m.rows();
            if n == 1 {
                return m[(0, 0)].clone();
            }
            let mut total = BigInt::zero();
            for j in 0..n {
                let minor: Vec<Vec<BigInt>> = (1..n)
                    .map(|i| {
                        (0..n)
                            .filter(|&c| c != j)
                            .map(|c| m[(i, c)].clone())
                            .collect()
                    })
                    .collect();
                let term = &m[(0, j)] * cof(&IntMat::from_rows(&minor));
                if j % 2 == 0 {
                    total += term;
                } else {
                    total -= term;
                }
            }
            total
        }
        assert_eq!(det(&m), cof(&m));
        let singular = IntMat::from_rows(&[[1, 2, 3], [2, 4, 6], [0, 1, 5]]);
        assert!(det(&singular).is_zero());
        let needs_swap = IntMat::from_rows(&[[0, 1, 2], [1, 0, 3], [4, -3, 8]]);
        assert_eq!(det(&needs_swap), cof(&needs_swap));
    }

    #[test]
    fn pow_examples() {
        assert_eq!(mat_pow(&a(), 0).unwrap(), IntMat::identity(2));
        assert_eq!(mat_pow(&a(), -1).unwrap(), m2(1, -1, -1, 2));
        assert_eq!(mat_pow(&a(), 2).unwrap(), m2(5, 3, 3, 2));
        assert_eq!(mat_pow(&a(), 3).unwrap(), m2(13, 8, 8, 5));
    }

    #[test]
    fn negative_power_needs_unimodular() {
        let err = mat_pow(&m2(2, 0, 0, 1), -1).unwrap_err();
        assert_eq!(
            err,
            LatticeError::NonInvertible {
                det: BigInt::from(2)
            }
        );
    }

    #[test]
    fn snf_examples() {
        let s = snf(&IntMat::identity(2));
        assert_eq!(s.d, IntMat::identity(2));
        let s = snf(&i_minus_m());
        assert_eq!(s.d, m2(1, 0, 0, 2));
        let s = snf(&IntMat::zeros(2, 2));
        assert!(s.d.is_zero());
    }

    #[test]
    fn snf_of_larger_matrix() {
        let m = IntMat::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]);
        let s = snf(&m);
        assert_eq!(&(&s.u * &m) * &s.v, s.d);
        assert_eq!(s.invariant_factors(), int_vec(&[2, 6, 12]));
        assert_eq!(&s.u * &s.u_inv, IntMat::identity(3));
    }

    #[test]
    fn membership_examples() {
        let m = i_minus_m();
        assert_eq!(
            lattice_member(&m, &int_vec(&[0, 0])),
            Some(int_vec(&[0, 0]))
        );
        assert_eq!(
            lattice_member(&m, &int_vec(&[1, 1])),
            Some(int_vec(&[1, 0]))
        );
        assert_eq!(lattice_member(&m, &int_vec(&[1, 0])), None);
        let z = IntMat::zeros(2, 2);
        assert_eq!(
            lattice_member(&z, &int_vec(&[0, 0])),
            Some(int_vec(&[0, 0]))
        );
        assert_eq!(lattice_member(&z, &int_vec(&[0, 3])), None);
    }

    #[test]
    fn coker_examples() {
        assert_eq!(
            coker_order(&i_minus_m()),
            Cardinality::Finite(BigInt::from(2))
        );
        let a_minus_m = &a() - &m2(0, 1, -1, 0);
        assert_eq!(
            coker_order(&a_minus_m),
            Cardinality::Finite(BigInt::from(2))
        );
        assert_eq!(coker_order(&IntMat::zeros(2, 2)), Cardinality::Infinite);
    }

    #[test]
    fn label_examples() {
        let s = snf(&i_minus_m());
        let zero = coset_label(&s, &int_vec(&[0, 0])).unwrap();
        assert!(zero.iter().all(Zero::is_zero));
        assert_ne!(coset_label(&s, &int_vec(&[1, 0])).unwrap(), zero);
        assert_eq!(coset_label(&s, &int_vec(&[1, 1])).unwrap(), zero);
        let degenerate = snf(&IntMat::zeros(2, 2));
        assert_eq!(
            coset_label(&degenerate, &int_vec(&[1, 1])),
            Err(LatticeError::InfiniteCokernel)
        );
    }

    #[test]
    fn representatives_invert_labels() {
        let s = snf(&m2(4, 6, 2, -8));
        for label in all_coset_labels(&s).unwrap() {
            let rep = coset_representative(&s, &label);
            assert_eq!(coset_label(&s, &rep).unwrap(), label);
        }
    }

    #[test]
    fn three_by_three_inverse() {
        let m = IntMat::from_rows(&[[1, 2, 0], [0, 1, 3], [0, 0, 1]]);
        let inv = unimodular_inverse(&m).unwrap();
        assert_eq!(&m * &inv, IntMat::identity(3));
    }

    #[test]
    fn display_is_nested_lists() {
        assert_eq!(a().to_string(), "[[2,1],[1,1]]");
    }
}
