//! Small dense square matrices over a [`Scalar`].

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};
use crate::minkowski::Vec3;
use crate::scalar::{Q, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    n: usize,
    a: Vec<S>,
}

pub type Mat2<S> = Matrix<S>;
pub type Mat3<S> = Matrix<S>;
pub type Mat4<S> = Matrix<S>;

impl<S: Scalar> Matrix<S> {
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix { n, a: rows.into_iter().flatten().collect() }
    }

    pub fn from_ints<const N: usize>(rows: [[i64; N]; N]) -> Self {
        Matrix { n: N, a: rows.iter().flatten().map(|&x| S::int(x)).collect() }
    }

    pub fn from_q(m: &Matrix<Q>) -> Self {
        m.map(S::rat)
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> S) -> Self {
        let mut a = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                a.push(f(i, j));
            }
        }
        Matrix { n, a }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| S::int((i == j) as i64))
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_, _| S::zero())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> &S {
        &self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.a[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        self.a.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn map<T>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix { n: self.n, a: self.a.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.at(j, i).clone())
    }

    pub fn trace(&self) -> S {
        (0..self.n).fold(S::zero(), |acc, i| acc + self.at(i, i).clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_fn(self.n, |i, j| self.at(i, j).clone() + o.at(i, j).clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::from_fn(self.n, |i, j| self.at(i, j).clone() - o.at(i, j).clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        Self::from_fn(self.n, |i, j| {
            (0..self.n).fold(S::zero(), |acc, k| acc + self.at(i, k).clone() * o.at(k, j).clone())
        })
    }

    pub fn apply(&self, v: &Vec3<S>) -> Vec3<S> {
        assert_eq!(self.n, 3);
        let c = v.coords();
        let row = |i: usize| (0..3).fold(S::zero(), |acc, k| acc + self.at(i, k).clone() * c[k].clone());
        Vec3::new(row(0), row(1), row(2))
    }

    pub fn block(&self, r: usize, c: usize, size: usize) -> Self {
        Self::from_fn(size, |i, j| self.at(r + i, c + j).clone())
    }

    pub fn from_blocks(tl: &Self, tr: &Self, bl: &Self, br: &Self) -> Self {
        let h = tl.n;
        Self::from_fn(2 * h, |i, j| match (i < h, j < h) {
            (true, true) => tl.at(i, j).clone(),
            (true, false) => tr.at(i, j - h).clone(),
            (false, true) => bl.at(i - h, j).clone(),
            (false, false) => br.at(i - h, j - h).clone(),
        })
    }

    pub fn near_eq(&self, o: &Self) -> bool {
        self.n == o.n && self.a.iter().zip(&o.a).all(|(x, y)| (x.clone() - y.clone()).near_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.near_eq(&Self::identity(self.n))
    }

    /// Determinant by elimination with exact pivoting on nonzero entries.
    pub fn det(&self) -> S {
        let n = self.n;
        let mut m = self.rows();
        let mut det = S::one();
        for c in 0..n {
            let Some(p) = pivot(&m, c, c) else { return S::zero() };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            let pv = m[c][c].clone();
            det = det * pv.clone();
            for r in c + 1..n {
                let f = m[r][c].clone() / pv.clone();
                for k in c..n {
                    let t = m[c][k].clone() * f.clone();
                    m[r][k] = m[r][k].clone() - t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut m = self.rows();
        let mut inv = Self::identity(n).rows();
        for c in 0..n {
            let p = pivot(&m, c, c).ok_or(Error::Singular)?;
            m.swap(p, c);
            inv.swap(p, c);
            let pv = m[c][c].clone();
            for k in 0..n {
                m[c][k] = m[c][k].clone() / pv.clone();
                inv[c][k] = inv[c][k].clone() / pv.clone();
            }
            for r in 0..n {
                if r == c || m[r][c].near_zero() {
                    continue;
                }
                let f = m[r][c].clone();
                for k in 0..n {
                    let a = m[c][k].clone() * f.clone();
                    m[r][k] = m[r][k].clone() - a;
                    let b = inv[c][k].clone() * f.clone();
                    inv[r][k] = inv[r][k].clone() - b;
                }
            }
        }
        Ok(Self::from_rows(inv))
    }

    pub fn approx(&self) -> Vec<Vec<f64>> {
        self.rows().iter().map(|r| r.iter().map(|x| x.approx()).collect()).collect()
    }
}

/// Row index at or below `from` with the largest usable entry in column `c`.
/// Exact fields take the first nonzero; floats take the largest magnitude.
fn pivot<S: Scalar>(m: &[Vec<S>], from: usize, c: usize) -> Option<usize> {
    if S::EXACT {
        (from..m.len()).find(|&r| !m[r][c].near_zero())
    } else {
        let best = (from..m.len()).max_by(|&a, &b| m[a][c].approx().abs().total_cmp(&m[b][c].approx().abs()))?;
        (m[best][c].approx() != 0.0).then_some(best)
    }
}

impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;
    fn mul(self, o: Self) -> Matrix<S> {
        Matrix::mul(self, o)
    }
}

impl<S: Scalar> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.rows().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Rank by row reduction.
pub fn rank<S: Scalar>(rows: &[Vec<S>]) -> usize {
    let mut m = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = pivot(&m, r, c) else { continue };
        m.swap(p, r);
        let pv = m[r][c].clone();
        for i in r + 1..m.len() {
            let f = m[i][c].clone() / pv.clone();
            for k in c..cols {
                let t = m[r][k].clone() * f.clone();
                m[i][k] = m[i][k].clone() - t;
            }
        }
        r += 1;
    }
    r
}

/// Solves the square system `A x = b`.
pub fn solve<S: Scalar>(a: &Matrix<S>, b: &[S]) -> Result<Vec<S>> {
    let inv = a.inverse()?;
    Ok((0..a.dim())
        .map(|i| (0..a.dim()).fold(S::zero(), |acc, k| acc + inv.at(i, k).clone() * b[k].clone()))
        .collect())
}
