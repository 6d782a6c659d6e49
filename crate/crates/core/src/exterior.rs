//! Exterior algebra over a fixed `2n`-dimensional dual space with basis
//! `e^1, ..., e^{2n}`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactlinalg::{Rational, RationalMatrix, SubspaceBasis};

/// Largest supported half-dimension (monomials are stored as `u32` bitmasks).
pub const MAX_HALF_DIM: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExteriorError {
    #[error("dimension mismatch: n = {left} vs n = {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("generator index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("monomial indices must be strictly increasing")]
    NotIncreasing,
    #[error("expected a form of degree {expected}, found a nonzero component of degree {found}")]
    WrongDegree { expected: usize, found: usize },
    #[error("2-form is degenerate")]
    Degenerate,
}

/// A wedge monomial `e^{i_1} ^ ... ^ e^{i_k}` with `i_1 < ... < i_k`,
/// stored as a bitmask (bit `i - 1` for index `i`).
///
/// Ordered by degree first, then lexicographically by index sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(u32);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_bits(bits: u32) -> Self {
        Self(bits)
    }

    /// From 1-based, strictly increasing indices.
    pub fn from_indices(indices: &[usize]) -> Result<Self, ExteriorError> {
        let mut bits = 0u32;
        let mut last = 0;
        for &i in indices {
            if i == 0 || i > 2 * MAX_HALF_DIM {
                return Err(ExteriorError::IndexOutOfRange {
                    index: i,
                    dim: 2 * MAX_HALF_DIM,
                });
            }
            if i <= last {
                return Err(ExteriorError::NotIncreasing);
            }
            last = i;
            bits |= 1 << (i - 1);
        }
        Ok(Self(bits))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, index: usize) -> bool {
        index >= 1 && self.0 & (1 << (index - 1)) != 0
    }

    /// 1-based indices in increasing order.
    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|b| self.0 & (1 << b) != 0).map(|b| b + 1).collect()
    }

    /// Highest index present, or 0 for the unit monomial.
    pub fn max_index(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    /// `e^I ^ e^J` as `(sign, e^{I u J})`, or `None` when the supports overlap.
    pub fn wedge(self, other: Self) -> Option<(bool, Self)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // count pairs (i in I, j in J) with i > j
        let mut inversions = 0u32;
        let mut rest = other.0;
        while rest != 0 {
            let j = rest.trailing_zeros();
            rest &= rest - 1;
            inversions += (self.0 >> j).count_ones();
        }
        Some((inversions % 2 == 1, Self(self.0 | other.0)))
    }

    /// Interior product with the dual vector `e_index`: removes `index`
    /// with the Koszul sign `(-1)^(position from the left)`.
    pub fn interior(self, index: usize) -> Option<(bool, Self)> {
        if !self.contains(index) {
            return None;
        }
        let bit = 1u32 << (index - 1);
        let before = (self.0 & (bit - 1)).count_ones();
        Some((before % 2 == 1, Self(self.0 & !bit)))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            if self.0 == other.0 {
                return Ordering::Equal;
            }
            // the first differing index decides; whoever owns it is smaller
            let diff = self.0 ^ other.0;
            let lowest = diff & diff.wrapping_neg();
            if self.0 & lowest != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx = self.indices();
        if idx.is_empty() {
            return write!(f, "1");
        }
        let sep = if self.max_index() > 9 { "," } else { "" };
        let body: Vec<String> = idx.iter().map(ToString::to_string).collect();
        write!(f, "e^{{{}}}", body.join(sep))
    }
}

/// Degree-`k` monomials on `2n` generators in lexicographic order.
pub fn basis_monomials(n: usize, k: usize) -> Vec<Monomial> {
    let dim = 2 * n;
    let mut out = Vec::new();
    if k > dim {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(Monomial(idx.iter().fold(0, |acc, &i| acc | (1 << i))));
        // advance to the next k-combination of 0..dim
        let mut pos = k;
        while pos > 0 && idx[pos - 1] == dim - k + pos - 1 {
            pos -= 1;
        }
        if pos == 0 {
            break;
        }
        idx[pos - 1] += 1;
        for j in pos..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

/// Number of degree-`k` monomials on `2n` generators.
pub fn graded_dim(n: usize, k: usize) -> usize {
    let dim = 2 * n;
    if k > dim {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (dim - i) / (i + 1))
}

/// A finite rational combination of wedge monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Form {
    n: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Form {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_HALF_DIM, "half-dimension {n} exceeds {MAX_HALF_DIM}");
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, value: Rational) -> Self {
        let mut f = Self::zero(n);
        f.add_term(Monomial::ONE, value);
        f
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Rational::one())
    }

    /// `e^{i_1 ... i_k}` from 1-based strictly increasing indices.
    pub fn monomial(n: usize, indices: &[usize]) -> Result<Self, ExteriorError> {
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > 2 * n) {
            return Err(ExteriorError::IndexOutOfRange {
                index: bad,
                dim: 2 * n,
            });
        }
        let m = Monomial::from_indices(indices)?;
        let mut f = Self::zero(n);
        f.add_term(m, Rational::one());
        Ok(f)
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self, ExteriorError>
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut f = Self::zero(n);
        for (m, c) in terms {
            if m.max_index() > 2 * n {
                return Err(ExteriorError::IndexOutOfRange {
                    index: m.max_index(),
                    dim: 2 * n,
                });
            }
            f.add_term(m, c);
        }
        Ok(f)
    }

    /// Degree-`k` form with coordinates `coords` in the lexicographic basis.
    pub fn from_vector(n: usize, k: usize, coords: &[Rational]) -> Self {
        let basis = basis_monomials(n, k);
        assert_eq!(basis.len(), coords.len(), "coordinate vector length");
        let mut f = Self::zero(n);
        for (m, c) in basis.into_iter().zip(coords) {
            f.add_term(m, c.clone());
        }
        f
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: Monomial) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The degree-`k` part.
    pub fn component(&self, k: usize) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Degrees carrying a nonzero component, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = self.terms.keys().map(|m| m.degree()).collect();
        ds.dedup();
        ds
    }

    /// `Some(k)` if the form is nonzero and homogeneous of degree `k`.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        match self.degrees().as_slice() {
            [k] => Some(*k),
            _ => None,
        }
    }

    /// True when every nonzero component has degree `k` (the zero form qualifies).
    pub fn is_homogeneous_of(&self, k: usize) -> bool {
        self.terms.keys().all(|m| m.degree() == k)
    }

    /// Coordinates of the degree-`k` component in the lexicographic basis.
    pub fn component_vector(&self, k: usize) -> Vec<Rational> {
        basis_monomials(self.n, k)
            .into_iter()
            .map(|m| self.coefficient(m))
            .collect()
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero(self.n);
        }
        Self {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (*m, c * factor)).collect(),
        }
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, ExteriorError> {
        check_same_n(self.n, other.n)?;
        let mut out = Self::zero(self.n);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some((negative, m)) = a.wedge(*b) {
                    let c = x * y;
                    out.add_term(m, if negative { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Interior product with the dual basis vector `e_index` (1-based).
    pub fn interior(&self, index: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            if let Some((negative, rest)) = m.interior(index) {
                out.add_term(rest, if negative { -c.clone() } else { c.clone() });
            }
        }
        out
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ExteriorError> {
        check_same_n(self.n, other.n)?;
        Ok(self + other)
    }
}

fn check_same_n(left: usize, right: usize) -> Result<(), ExteriorError> {
    if left == right {
        Ok(())
    } else {
        Err(ExteriorError::DimensionMismatch { left, right })
    }
}

impl AddAssign<&Form> for Form {
    fn add_assign(&mut self, rhs: &Form) {
        assert_eq!(self.n, rhs.n, "adding forms of different dimension");
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl Add for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Form {
    type Output = Form;
    fn add(mut self, rhs: Form) -> Form {
        self += &rhs;
        self
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        Form {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for Form {
    type Output = Form;
    fn neg(self) -> Form {
        -&self
    }
}

impl Sub for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        self + &(-rhs)
    }
}

impl Sub for Form {
    type Output = Form;
    fn sub(self, rhs: Form) -> Form {
        &self - &rhs
    }
}

impl Mul<&Rational> for &Form {
    type Output = Form;
    fn mul(self, rhs: &Rational) -> Form {
        self.scale(rhs)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if *m == Monomial::ONE {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag} {m}")?;
            }
        }
        Ok(())
    }
}

/// Matrix of a linear operator `Omega^from -> Omega^to` in monomial bases.
///
/// Panics if an image has a component outside degree `to`.
pub fn operator_matrix<F, E>(n: usize, from: usize, to: usize, mut f: F) -> Result<RationalMatrix, E>
where
    F: FnMut(&Form) -> Result<Form, E>,
{
    let mut columns = Vec::with_capacity(graded_dim(n, from));
    for m in basis_monomials(n, from) {
        let mut unit = Form::zero(n);
        unit.add_term(m, Rational::one());
        let image = f(&unit)?;
        assert!(
            image.is_homogeneous_of(to),
            "operator image of {m} leaves degree {to}: {image}"
        );
        columns.push(image.component_vector(to));
    }
    Ok(RationalMatrix::from_columns(graded_dim(n, to), &columns).expect("column lengths match"))
}

/// An antisymmetric bivector `pi^{ij} e_i ^ e_j` on the `2n`-dimensional space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bivector {
    n: usize,
    /// Row-major `2n x 2n`, `coefficients[i][j] = pi^{(i+1)(j+1)}`.
    coefficients: Vec<Vec<Rational>>,
}

impl Bivector {
    /// The Poisson bivector of a 2-form: the exact inverse of its matrix
    /// `omega_{ij}` (with `omega = sum_{i<j} omega_{ij} e^{ij}`).
    pub fn inverse_of(omega: &Form) -> Result<Self, ExteriorError> {
        if let Some(&k) = omega.degrees().iter().find(|&&k| k != 2) {
            return Err(ExteriorError::WrongDegree {
                expected: 2,
                found: k,
            });
        }
        let n = omega.n();
        let dim = 2 * n;
        let w = symplectic_matrix(omega);
        let columns: Vec<Vec<Rational>> = (0..dim).map(|j| (0..dim).map(|i| w[i][j].clone()).collect()).collect();
        let basis = SubspaceBasis::new(dim, columns).map_err(|_| ExteriorError::Degenerate)?;
        // W * X = I column by column; X = W^{-1}
        let inverse_columns: Vec<Vec<Rational>> = (0..dim)
            .map(|j| {
                let unit: Vec<Rational> = (0..dim)
                    .map(|i| if i == j { Rational::one() } else { Rational::zero() })
                    .collect();
                basis.coordinates(&unit).expect("invertible matrix")
            })
            .collect();
        let coefficients: Vec<Vec<Rational>> = (0..dim)
            .map(|i| inverse_columns.iter().map(|c| c[i].clone()).collect())
            .collect();
        Ok(Self { n, coefficients })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `pi^{ij}` for 1-based indices.
    pub fn coefficient(&self, i: usize, j: usize) -> &Rational {
        &self.coefficients[i - 1][j - 1]
    }

    /// A copy with every coefficient multiplied by `factor`.
    pub fn scaled(&self, factor: &Rational) -> Self {
        Self {
            n: self.n,
            coefficients: self
                .coefficients
                .iter()
                .map(|row| row.iter().map(|x| x * factor).collect())
                .collect(),
        }
    }

    pub fn is_antisymmetric(&self) -> bool {
        let dim = 2 * self.n;
        (0..dim).all(|i| (0..dim).all(|j| self.coefficients[i][j] == -&self.coefficients[j][i]))
    }
}

/// `omega_{ij}` as a dense antisymmetric matrix (0-based).
pub fn symplectic_matrix(omega: &Form) -> Vec<Vec<Rational>> {
    let dim = 2 * omega.n();
    let mut w = vec![vec![Rational::zero(); dim]; dim];
    for (m, c) in omega.component(2).terms() {
        let idx = m.indices();
        let (i, j) = (idx[0] - 1, idx[1] - 1);
        w[i][j] = c.clone();
        w[j][i] = -c.clone();
    }
    w
}

/// `Lambda a = (1/2) sum_{i,j} pi^{ij} iota_{e_i} iota_{e_j} a`; lowers degree by two.
pub fn contract(pi: &Bivector, a: &Form) -> Result<Form, ExteriorError> {
    check_same_n(pi.n, a.n)?;
    let dim = 2 * a.n;
    let half = Rational::new(1.into(), 2.into());
    let mut out = Form::zero(a.n);
    for (m, c) in &a.terms {
        if m.degree() < 2 {
            continue;
        }
        for j in 1..=dim {
            let Some((neg_j, mj)) = m.interior(j) else { continue };
            for i in 1..=dim {
                let p = pi.coefficient(i, j);
                if p.is_zero() {
                    continue;
                }
                let Some((neg_i, mij)) = mj.interior(i) else { continue };
                let value = c * p * &half;
                out.add_term(mij, if neg_i ^ neg_j { -value } else { value });
            }
        }
    }
    Ok(out)
}

/// Coefficient of `e^{1...2n}` (unit covolume, orientation = basis order).
pub fn integrate(a: &Form) -> Result<Rational, ExteriorError> {
    let top = 2 * a.n;
    if let Some(&k) = a.degrees().iter().find(|&&k| k != top) {
        return Err(ExteriorError::WrongDegree {
            expected: top,
            found: k,
        });
    }
    Ok(a.coefficient(Monomial((1u64.wrapping_shl(top as u32) - 1) as u32)))
}
