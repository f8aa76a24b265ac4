//! Exact rational scalars plus the small dense linear algebra the geometry
//! modules lean on.
//!
//! Scalars are [`num_rational::BigRational`], which is always kept in lowest
//! terms with a positive denominator. Everything that leaves the crate as
//! text uses the `"p/q"` form (`"p"` when the denominator is one).

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse {0:?} as a rational")]
    Parse(String),
}

/// `numer / denom` in lowest terms. Panics on a zero denominator, so only use
/// it for literals; fallible paths go through [`checked_div`].
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn checked_div(a: &Rational, b: &Rational) -> Result<Rational, RatError> {
    if b.is_zero() {
        return Err(RatError::DivisionByZero);
    }
    Ok(a / b)
}

pub fn parse_rational(text: &str) -> Result<Rational, RatError> {
    let trimmed = text.trim();
    let parsed = match trimmed.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| RatError::Parse(text.into()))?;
            let d: BigInt = d.trim().parse().map_err(|_| RatError::Parse(text.into()))?;
            if d.is_zero() {
                return Err(RatError::DivisionByZero);
            }
            Rational::new(n, d)
        }
        None => Rational::from_integer(
            trimmed
                .parse::<BigInt>()
                .map_err(|_| RatError::Parse(text.into()))?,
        ),
    };
    Ok(parsed)
}

/// Canonical `"p/q"` rendering.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

/// Decimal approximation for human-facing output only.
pub fn approx_f64(value: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}

pub fn floor_to_i64(value: &Rational) -> Option<i64> {
    use num_traits::ToPrimitive;
    value.floor().to_integer().to_i64()
}

pub fn ceil_to_i64(value: &Rational) -> Option<i64> {
    use num_traits::ToPrimitive;
    value.ceil().to_integer().to_i64()
}

/// Serde adapter writing a single rational as a string.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = RationalText::deserialize(d)?;
        text.into_rational().map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a list of rationals.
pub mod rational_vec_str {
    use super::*;

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = values.iter().map(format_rational).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let texts = Vec::<RationalText>::deserialize(d)?;
        texts
            .into_iter()
            .map(|t| t.into_rational().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Accepts `"3/4"`, `"7"` or a bare JSON integer.
#[derive(Deserialize)]
#[serde(untagged)]
enum RationalText {
    Text(String),
    Int(i64),
}

impl RationalText {
    fn into_rational(self) -> Result<Rational, RatError> {
        match self {
            RationalText::Text(t) => parse_rational(&t),
            RationalText::Int(i) => Ok(int(i)),
        }
    }
}

/// Dense rational vector with a fixed length.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QVector(pub Vec<Rational>);

impl QVector {
    pub fn zeros(dim: usize) -> Self {
        QVector(vec![Rational::zero(); dim])
    }

    pub fn unit(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[index] = Rational::one();
        v
    }

    pub fn from_i64(values: &[i64]) -> Self {
        QVector(values.iter().map(|&v| int(v)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn dot(&self, other: &QVector) -> Rational {
        assert_eq!(self.dim(), other.dim(), "dot product of non-conforming vectors");
        dot(&self.0, &other.0)
    }

    pub fn add(&self, other: &QVector) -> QVector {
        assert_eq!(self.dim(), other.dim());
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &QVector) -> QVector {
        assert_eq!(self.dim(), other.dim());
        QVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, factor: &Rational) -> QVector {
        QVector(self.0.iter().map(|a| a * factor).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl Index<usize> for QVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl IndexMut<usize> for QVector {
    fn index_mut(&mut self, i: usize) -> &mut Rational {
        &mut self.0[i]
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for QVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        rational_vec_str::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for QVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        rational_vec_str::deserialize(d).map(QVector)
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// Row-major dense rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        let nrows = rows.len();
        QMatrix {
            rows: nrows,
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &QVector) -> QVector {
        assert_eq!(self.cols, v.dim());
        QVector((0..self.rows).map(|i| dot(self.row(i), &v.0)).collect())
    }

    /// Row-reduces a copy and reports the rank.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.eliminate(None).0
    }

    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let (rank, sign) = m.eliminate(None);
        if rank < self.rows {
            return Rational::zero();
        }
        let mut det = if sign { -Rational::one() } else { Rational::one() };
        for i in 0..self.rows {
            det *= &m[(i, i)];
        }
        det
    }

    /// Gaussian elimination to row echelon form, optionally carrying a
    /// right-hand side. Returns the rank and whether an odd number of row
    /// swaps happened.
    fn eliminate(&mut self, mut rhs: Option<&mut Vec<Rational>>) -> (usize, bool) {
        let mut pivot_row = 0;
        let mut odd = false;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            let Some(p) = (pivot_row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            if p != pivot_row {
                self.swap_rows(p, pivot_row);
                if let Some(rhs) = rhs.as_deref_mut() {
                    rhs.swap(p, pivot_row);
                }
                odd = !odd;
            }
            let pivot = self[(pivot_row, col)].clone();
            for r in pivot_row + 1..self.rows {
                if self[(r, col)].is_zero() {
                    continue;
                }
                let factor = &self[(r, col)] / &pivot;
                for c in col..self.cols {
                    let delta = &factor * &self[(pivot_row, c)];
                    self[(r, c)] -= delta;
                }
                if let Some(rhs) = rhs.as_deref_mut() {
                    let delta = &factor * &rhs[pivot_row];
                    rhs[r] -= delta;
                }
            }
            pivot_row += 1;
        }
        (pivot_row, odd)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }
}

/// Solves `m · x = v` exactly; `None` when `m` is singular.
pub fn solve_linear(m: &QMatrix, v: &QVector) -> Option<QVector> {
    assert_eq!(m.rows(), m.cols(), "solve_linear needs a square matrix");
    assert_eq!(m.rows(), v.dim());
    let n = m.rows();
    let mut work = m.clone();
    let mut rhs = v.0.clone();
    let (rank, _) = work.eliminate(Some(&mut rhs));
    if rank < n {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = rhs[i].clone();
        for j in i + 1..n {
            acc -= &work[(i, j)] * &x[j];
        }
        x[i] = acc / &work[(i, i)];
    }
    Some(QVector(x))
}

/// Affine rank of a point set (dimension of its affine hull).
pub fn affine_rank(points: &[QVector]) -> usize {
    let Some(base) = points.first() else {
        return 0;
    };
    if points.len() == 1 {
        return 0;
    }
    let rows: Vec<Vec<Rational>> = points[1..].iter().map(|p| p.sub(base).0).collect();
    QMatrix::from_rows(rows).rank()
}

/// Scales an integer vector down by the gcd of its entries.
pub fn primitive(values: &mut [BigInt]) {
    use num_integer::Integer;
    let mut g = BigInt::zero();
    for v in values.iter() {
        if !v.is_zero() {
            g = g.gcd(v);
            if g.is_one() {
                return;
            }
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for v in values.iter_mut() {
        *v = &*v / &g;
    }
}

/// Clears denominators of a rational vector by a positive factor and returns
/// the primitive integer vector on the same ray.
pub fn integer_direction(values: &[Rational]) -> Vec<BigInt> {
    use num_integer::Integer;
    let mut lcm = BigInt::one();
    for v in values {
        lcm = lcm.lcm(v.denom());
    }
    let mut out: Vec<BigInt> = values
        .iter()
        .map(|v| v.numer() * (&lcm / v.denom()))
        .collect();
    primitive(&mut out);
    out
}

pub fn abs(value: &Rational) -> Rational {
    value.abs()
}
