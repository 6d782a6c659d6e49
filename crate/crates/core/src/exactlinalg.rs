//! Exact rational linear algebra.
//!
//! Everything here works over arbitrary-precision rationals. Ranks, kernels and
//! images go through a fraction-free (Bareiss-style) Gauss-Jordan reduction on
//! integer rows; [`RationalMatrix::rref_naive`] keeps the textbook rational
//! elimination around as an independent cross-check.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar used throughout the crate.
pub type Rational = BigRational;

/// Shorthand for the rational `num / den`.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integral rational.
pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vectors are linearly dependent")]
    LinearlyDependent,
    #[error("subspace vector {index} is not in the span of the space")]
    NotASubspace { index: usize },
    #[error("image of domain vector {index} is not in the span of the codomain basis")]
    NotInCodomain { index: usize },
    #[error("vector is not in the span of the basis")]
    NotInSpace,
}

/// Dense row-major matrix with exact rational entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from rows; `cols` is only consulted when `rows` is empty.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(cols, Vec::len);
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Self::new(nrows, cols, entries)
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, column) in columns.iter().enumerate() {
            if column.len() != rows {
                return Err(LinalgError::DimensionMismatch {
                    expected: rows,
                    found: column.len(),
                });
            }
            for (i, value) in column.iter().enumerate() {
                m.set(i, j, value.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[Rational] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, col).clone()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.entries[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    /// Rank via fraction-free elimination.
    pub fn rank(&self) -> usize {
        fraction_free_reduce(integer_rows(self), self.cols).pivots.len()
    }

    /// Rank, kernel and image in one fraction-free pass.
    ///
    /// The kernel has one vector per free column (that coordinate set to 1);
    /// the image is spanned by the pivot columns of `self`.
    pub fn rank_kernel_image(&self) -> RankKernelImage {
        let echelon = fraction_free_reduce(integer_rows(self), self.cols);
        let pivots = &echelon.pivots;
        let mut kernel = Vec::with_capacity(self.cols - pivots.len());
        let mut next_pivot = 0;
        for col in 0..self.cols {
            if next_pivot < pivots.len() && pivots[next_pivot] == col {
                next_pivot += 1;
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[col] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                let entry = &echelon.rows[row][col];
                if !entry.is_zero() {
                    v[pc] = -Rational::new(entry.clone(), echelon.pivot_value.clone());
                }
            }
            kernel.push(v);
        }
        let image = pivots.iter().map(|&c| self.column(c)).collect();
        RankKernelImage {
            rank: pivots.len(),
            kernel: SubspaceBasis::from_independent(self.cols, kernel),
            image: SubspaceBasis::from_independent(self.rows, image),
        }
    }

    pub fn kernel(&self) -> SubspaceBasis {
        self.rank_kernel_image().kernel
    }

    pub fn image(&self) -> SubspaceBasis {
        self.rank_kernel_image().image
    }

    /// Reduced row echelon form by plain rational Gauss-Jordan elimination,
    /// taking the first nonzero entry as pivot. Returns the reduced matrix and
    /// its pivot columns.
    pub fn rref_naive(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                m.entries.swap(row * m.cols + j, pr * m.cols + j);
            }
            let inv = m.get(row, col).recip();
            for j in 0..m.cols {
                let v = m.get(row, j) * &inv;
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in 0..m.cols {
                    let v = m.get(r, j) - &factor * m.get(row, j);
                    m.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank_naive(&self) -> usize {
        self.rref_naive().1.len()
    }

    /// Square and of full rank.
    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug)]
pub struct RankKernelImage {
    pub rank: usize,
    pub kernel: SubspaceBasis,
    pub image: SubspaceBasis,
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// `sum_i coeffs[i] * vectors[i]` in an ambient space of dimension `dim`.
pub fn combine(dim: usize, coeffs: &[Rational], vectors: &[Vec<Rational>]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); dim];
    for (c, v) in coeffs.iter().zip(vectors) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            if !x.is_zero() {
                *o += c * x;
            }
        }
    }
    out
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    /// Every pivot entry equals this value once the reduction is complete.
    pivot_value: BigInt,
}

/// Clears denominators row by row; row scaling preserves kernel and pivots.
fn integer_rows(m: &RationalMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows).map(|i| integer_row(m.row(i))).collect()
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect()
}

/// Fraction-free Gauss-Jordan elimination.
///
/// Pivots are searched only in columns `< pivot_limit`, but every row
/// operation spans the full width. Among candidate rows the pivot of least
/// magnitude is chosen to curb coefficient growth. After step `k` every
/// entry is a `k x k` minor of the input, so the division by the previous
/// pivot is exact (Sylvester's identity).
fn fraction_free_reduce(mut rows: Vec<Vec<BigInt>>, pivot_limit: usize) -> Echelon {
    let nrows = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for col in 0..pivot_limit.min(width) {
        if r == nrows {
            break;
        }
        let Some(pr) = (r..nrows)
            .filter(|&i| !rows[i][col].is_zero())
            .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()))
        else {
            continue;
        };
        rows.swap(r, pr);
        let pivot_row = rows[r].clone();
        let p = pivot_row[col].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let a = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                let num = &p * &*x - &a * y;
                let (q, rem) = num.div_rem(&prev);
                assert!(rem.is_zero(), "inexact fraction-free division");
                *x = q;
            }
        }
        prev = p;
        pivots.push(col);
        r += 1;
    }
    Echelon {
        rows,
        pivots,
        pivot_value: prev,
    }
}

/// Precomputed left inverse for a full-column-rank basis matrix.
#[derive(Clone, Debug)]
struct Coordinatizer {
    rank: usize,
    transform: Vec<Vec<BigInt>>,
    scale: BigInt,
}

impl Coordinatizer {
    fn new(ambient_dim: usize, vectors: &[Vec<Rational>]) -> Self {
        let r = vectors.len();
        let mut rows = Vec::with_capacity(ambient_dim);
        for i in 0..ambient_dim {
            let mut row: Vec<Rational> = vectors.iter().map(|v| v[i].clone()).collect();
            row.extend((0..ambient_dim).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            rows.push(integer_row(&row));
        }
        let echelon = fraction_free_reduce(rows, r);
        assert_eq!(echelon.pivots.len(), r, "coordinatizer basis is not independent");
        let transform = echelon
            .rows
            .into_iter()
            .map(|row| row[r..].to_vec())
            .collect();
        Self {
            rank: r,
            transform,
            scale: echelon.pivot_value,
        }
    }

    fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        let apply = |row: &Vec<BigInt>| {
            row.iter()
                .zip(v)
                .filter(|(t, x)| !t.is_zero() && !x.is_zero())
                .fold(Rational::zero(), |acc, (t, x)| acc + x * t)
        };
        if self.transform[self.rank..].iter().any(|row| !apply(row).is_zero()) {
            return None;
        }
        let scale = Rational::from_integer(self.scale.clone());
        Some(
            self.transform[..self.rank]
                .iter()
                .map(|row| apply(row) / &scale)
                .collect(),
        )
    }
}

/// An ordered basis of a subspace of `Q^ambient_dim`.
#[derive(Clone, Debug)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    vectors: Vec<Vec<Rational>>,
    solver: OnceLock<Coordinatizer>,
}

impl PartialEq for SubspaceBasis {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.vectors == other.vectors
    }
}

impl Eq for SubspaceBasis {}

impl SubspaceBasis {
    /// Checked constructor: lengths must match and vectors must be independent.
    pub fn new(ambient_dim: usize, vectors: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        for v in &vectors {
            if v.len() != ambient_dim {
                return Err(LinalgError::DimensionMismatch {
                    expected: ambient_dim,
                    found: v.len(),
                });
            }
        }
        let m = RationalMatrix::from_columns(ambient_dim, &vectors)?;
        if m.rank() != vectors.len() {
            return Err(LinalgError::LinearlyDependent);
        }
        Ok(Self::from_independent(ambient_dim, vectors))
    }

    fn from_independent(ambient_dim: usize, vectors: Vec<Vec<Rational>>) -> Self {
        Self {
            ambient_dim,
            vectors,
            solver: OnceLock::new(),
        }
    }

    /// Basis of the span of `vectors`, keeping the first independent ones in order.
    pub fn spanning(ambient_dim: usize, vectors: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let m = RationalMatrix::from_columns(ambient_dim, &vectors)?;
        let pivots = fraction_free_reduce(integer_rows(&m), m.cols).pivots;
        let mut vectors: Vec<Option<Vec<Rational>>> = vectors.into_iter().map(Some).collect();
        let chosen = pivots
            .into_iter()
            .map(|c| vectors[c].take().expect("pivot columns are distinct"))
            .collect();
        Ok(Self::from_independent(ambient_dim, chosen))
    }

    pub fn empty(ambient_dim: usize) -> Self {
        Self::from_independent(ambient_dim, Vec::new())
    }

    /// The standard basis of the whole space.
    pub fn full(ambient_dim: usize) -> Self {
        let vectors = (0..ambient_dim)
            .map(|i| {
                (0..ambient_dim)
                    .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        Self::from_independent(ambient_dim, vectors)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    /// Matrix whose columns are the basis vectors.
    pub fn to_matrix(&self) -> RationalMatrix {
        RationalMatrix::from_columns(self.ambient_dim, &self.vectors)
            .expect("basis vectors have ambient length")
    }

    fn solver(&self) -> &Coordinatizer {
        self.solver
            .get_or_init(|| Coordinatizer::new(self.ambient_dim, &self.vectors))
    }

    /// Coordinates of `v` in this basis, or `None` if `v` is not in the span.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        if v.len() != self.ambient_dim {
            return None;
        }
        if self.vectors.is_empty() {
            return is_zero_vector(v).then(Vec::new);
        }
        self.solver().coordinates(v)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some()
    }

    /// `sum_i coeffs[i] * basis[i]`.
    pub fn combination(&self, coeffs: &[Rational]) -> Vec<Rational> {
        combine(self.ambient_dim, coeffs, &self.vectors)
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.vectors.iter().all(|v| other.contains(v))
    }

    pub fn same_span(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(other)
    }

    pub fn sum(&self, other: &Self) -> Self {
        let vectors = self.vectors.iter().chain(&other.vectors).cloned().collect();
        Self::spanning(self.ambient_dim, vectors).expect("ambient dimensions agree")
    }

    pub fn intersection(&self, other: &Self) -> Self {
        if self.is_empty() || other.is_empty() {
            return Self::empty(self.ambient_dim);
        }
        // x = A a = B b  <=>  [A | -B] (a, b) = 0
        let mut columns = self.vectors.clone();
        columns.extend(other.vectors.iter().map(|v| v.iter().map(|x| -x).collect()));
        let stacked = RationalMatrix::from_columns(self.ambient_dim, &columns)
            .expect("ambient dimensions agree");
        let k = self.dim();
        let vectors = stacked
            .kernel()
            .vectors()
            .iter()
            .map(|w| self.combination(&w[..k]))
            .collect();
        Self::spanning(self.ambient_dim, vectors).expect("ambient dimensions agree")
    }
}

/// Vectors completing a basis of `subspace` to a basis of `space`.
pub fn quotient_representatives(
    space: &SubspaceBasis,
    subspace: &SubspaceBasis,
) -> Result<SubspaceBasis, LinalgError> {
    if space.ambient_dim != subspace.ambient_dim {
        return Err(LinalgError::DimensionMismatch {
            expected: space.ambient_dim,
            found: subspace.ambient_dim,
        });
    }
    if let Some(index) = subspace.vectors.iter().position(|v| !space.contains(v)) {
        return Err(LinalgError::NotASubspace { index });
    }
    let k = subspace.dim();
    let candidates: Vec<Vec<Rational>> = subspace
        .vectors
        .iter()
        .chain(&space.vectors)
        .cloned()
        .collect();
    let m = RationalMatrix::from_columns(space.ambient_dim, &candidates)?;
    let pivots = fraction_free_reduce(integer_rows(&m), m.cols).pivots;
    let reps = pivots
        .into_iter()
        .filter(|&c| c >= k)
        .map(|c| candidates[c].clone())
        .collect();
    Ok(SubspaceBasis::from_independent(space.ambient_dim, reps))
}

/// Matrix of a linear map in the given bases.
///
/// Column `j` holds the codomain coordinates of `apply(domain[j])`. An image
/// outside the codomain span is reported as [`LinalgError::NotInCodomain`].
pub fn matrix_of_map<F>(
    domain: &SubspaceBasis,
    codomain: &SubspaceBasis,
    mut apply: F,
) -> Result<RationalMatrix, LinalgError>
where
    F: FnMut(&[Rational]) -> Vec<Rational>,
{
    try_matrix_of_map(domain, codomain, |v| Ok::<_, LinalgError>(apply(v)))
}

/// Fallible variant of [`matrix_of_map`].
pub fn try_matrix_of_map<F, E>(
    domain: &SubspaceBasis,
    codomain: &SubspaceBasis,
    mut apply: F,
) -> Result<RationalMatrix, E>
where
    F: FnMut(&[Rational]) -> Result<Vec<Rational>, E>,
    E: From<LinalgError>,
{
    let mut columns = Vec::with_capacity(domain.dim());
    for (index, v) in domain.vectors.iter().enumerate() {
        let image = apply(v)?;
        let coords = codomain
            .coordinates(&image)
            .ok_or(LinalgError::NotInCodomain { index })?;
        columns.push(coords);
    }
    Ok(RationalMatrix::from_columns(codomain.dim(), &columns)?)
}

/// A quotient `numerator / denominator` with chosen representatives.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    numerator: SubspaceBasis,
    denominator: SubspaceBasis,
    representatives: SubspaceBasis,
    combined: SubspaceBasis,
}

impl QuotientSpace {
    pub fn new(numerator: SubspaceBasis, denominator: SubspaceBasis) -> Result<Self, LinalgError> {
        let representatives = quotient_representatives(&numerator, &denominator)?;
        let combined_vectors = denominator
            .vectors
            .iter()
            .chain(&representatives.vectors)
            .cloned()
            .collect();
        let combined = SubspaceBasis::from_independent(numerator.ambient_dim, combined_vectors);
        Ok(Self {
            numerator,
            denominator,
            representatives,
            combined,
        })
    }

    /// The zero quotient inside an ambient space.
    pub fn zero(ambient_dim: usize) -> Self {
        let empty = SubspaceBasis::empty(ambient_dim);
        Self {
            numerator: empty.clone(),
            denominator: empty.clone(),
            representatives: empty.clone(),
            combined: empty,
        }
    }

    pub fn dim(&self) -> usize {
        self.representatives.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.numerator.ambient_dim
    }

    pub fn numerator(&self) -> &SubspaceBasis {
        &self.numerator
    }

    pub fn denominator(&self) -> &SubspaceBasis {
        &self.denominator
    }

    pub fn representatives(&self) -> &SubspaceBasis {
        &self.representatives
    }

    /// Coordinates of the class of `v` with respect to the representatives.
    pub fn class_coordinates(&self, v: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        let coords = self.combined.coordinates(v).ok_or(LinalgError::NotInSpace)?;
        Ok(coords[self.denominator.dim()..].to_vec())
    }
}
