//! Arbitrary-precision rational scalars, vectors and row-major matrices.
//!
//! `Rational` is `num_rational::BigRational`, which keeps values in lowest
//! terms with a positive denominator. Every other numeric object in the
//! crate is built from it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Index, IndexMut};

pub type Rational = BigRational;

/// `n` as a rational.
pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// `n/d` as a rational. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Dense rational vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RVector(pub Vec<Rational>);

impl RVector {
    pub fn zeros(n: usize) -> Self {
        RVector(vec![Rational::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Rational::one();
        v
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        RVector(entries.iter().map(|&e| rat(e)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn dot(&self, other: &RVector) -> Rational {
        assert_eq!(self.len(), other.len(), "dot: length mismatch");
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn add(&self, other: &RVector) -> RVector {
        assert_eq!(self.len(), other.len(), "add: length mismatch");
        RVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RVector) -> RVector {
        assert_eq!(self.len(), other.len(), "sub: length mismatch");
        RVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rational) -> RVector {
        RVector(self.0.iter().map(|a| a * s).collect())
    }

    pub fn neg(&self) -> RVector {
        RVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn concat(&self, other: &RVector) -> RVector {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        RVector(v)
    }

    /// Rescale by the unique positive rational that makes all entries coprime
    /// integers. The zero vector is returned unchanged.
    pub fn to_coprime_integer(&self) -> RVector {
        if self.is_zero() {
            return self.clone();
        }
        let mut lcm_den = BigInt::one();
        for x in &self.0 {
            lcm_den = lcm_den.lcm(x.denom());
        }
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|x| x.numer() * (&lcm_den / x.denom()))
            .collect();
        let mut g = BigInt::zero();
        for n in &ints {
            g = g.gcd(n);
        }
        RVector(
            ints.into_iter()
                .map(|n| BigRational::from_integer(n / &g))
                .collect(),
        )
    }

    /// Coprime-integer form with the leading nonzero entry positive.
    /// Used for rows whose sign is free (equalities, subspace bases).
    pub fn to_coprime_integer_signed(&self) -> RVector {
        let v = self.to_coprime_integer();
        match v.0.iter().find(|x| !x.is_zero()) {
            Some(x) if x.is_negative() => v.neg(),
            _ => v,
        }
    }
}

impl Index<usize> for RVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl IndexMut<usize> for RVector {
    fn index_mut(&mut self, i: usize) -> &mut Rational {
        &mut self.0[i]
    }
}

impl fmt::Debug for RVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", x)?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for RVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: &[RVector], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "from_rows: row length mismatch");
            for j in 0..cols {
                m[(i, j)] = r[j].clone();
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rvs: Vec<RVector> = rows.iter().map(|r| RVector::from_i64(r)).collect();
        Self::from_rows(&rvs, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> RVector {
        RVector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn col(&self, j: usize) -> RVector {
        RVector((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn row_vectors(&self) -> Vec<RVector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> RMatrix {
        let mut t = RMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn matvec(&self, v: &RVector) -> RVector {
        assert_eq!(self.cols, v.len(), "matvec: dimension mismatch");
        RVector(
            (0..self.rows)
                .map(|i| {
                    (0..self.cols).fold(Rational::zero(), |acc, j| acc + &self[(i, j)] * &v[j])
                })
                .collect(),
        )
    }

    /// vᵀ M, as a vector.
    pub fn vecmat(&self, v: &RVector) -> RVector {
        assert_eq!(self.rows, v.len(), "vecmat: dimension mismatch");
        RVector(
            (0..self.cols)
                .map(|j| {
                    (0..self.rows).fold(Rational::zero(), |acc, i| acc + &v[i] * &self[(i, j)])
                })
                .collect(),
        )
    }

    pub fn matmul(&self, other: &RMatrix) -> RMatrix {
        assert_eq!(self.cols, other.rows, "matmul: dimension mismatch");
        let mut m = RMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rational::zero();
                for k in 0..self.cols {
                    acc += &self[(i, k)] * &other[(k, j)];
                }
                m[(i, j)] = acc;
            }
        }
        m
    }

    pub fn add(&self, other: &RMatrix) -> RMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        m
    }

    pub fn scale(&self, s: &Rational) -> RMatrix {
        let mut m = self.clone();
        for a in m.data.iter_mut() {
            *a *= s;
        }
        m
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// (M + Mᵀ)/2. Panics on non-square input.
    pub fn symmetrize(&self) -> RMatrix {
        assert_eq!(self.rows, self.cols, "symmetrize: non-square matrix");
        let half = ratio(1, 2);
        let mut m = RMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = (&self[(i, j)] + &self[(j, i)]) * &half;
            }
        }
        m
    }

    /// Quadratic form xᵀ M x.
    pub fn quad_form(&self, x: &RVector) -> Rational {
        self.matvec(x).dot(x)
    }
}

impl Index<(usize, usize)> for RMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        let c = self.cols;
        &mut self.data[i * c + j]
    }
}

impl fmt::Debug for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Parse "p/q", "p" or "-p/q" exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((num, den)) => {
            let n: BigInt = num.trim().parse().ok()?;
            let d: BigInt = den.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(BigRational::from_integer(n))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coprime_scaling() {
        let v = RVector(vec![ratio(2, 3), ratio(-4, 3), rat(0)]);
        assert_eq!(v.to_coprime_integer(), RVector::from_i64(&[1, -2, 0]));
        let w = RVector(vec![ratio(-2, 5), ratio(4, 5)]);
        assert_eq!(w.to_coprime_integer_signed(), RVector::from_i64(&[1, -2]));
    }

    #[test]
    fn parse_exact() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), rat(-7));
        assert!(parse_rational("0.5").is_none());
        assert!(parse_rational("1/0").is_none());
    }

    #[test]
    fn symmetrize_halves_cross_terms() {
        let m = RMatrix::from_i64(&[&[0, 2], &[0, 0]]);
        let s = m.symmetrize();
        assert_eq!(s[(0, 1)], rat(1));
        assert_eq!(s[(1, 0)], rat(1));
    }
}
