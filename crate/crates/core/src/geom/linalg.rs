use std::cmp::Ordering;
use std::ops::{Add, Index, Mul, Neg, Sub};

use super::scalar::Scalar;

/// A 3-vector whose coordinates share one arithmetic mode.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vec3<S>(pub [S; 3]);

/// A 3×3 matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat3<S>(pub [[S; 3]; 3]);

impl<S: Scalar> Vec3<S> {
    pub fn new(x: S, y: S, z: S) -> Self {
        Vec3([x, y, z])
    }

    pub fn zero() -> Self {
        Vec3([S::zero(), S::zero(), S::zero()])
    }

    pub fn from_ints(v: [i64; 3]) -> Self {
        Vec3(v.map(S::from_int))
    }

    pub fn x(&self) -> &S {
        &self.0[0]
    }
    pub fn y(&self) -> &S {
        &self.0[1]
    }
    pub fn z(&self) -> &S {
        &self.0[2]
    }

    pub fn dot(&self, o: &Self) -> S {
        self.0[0].clone() * o.0[0].clone()
            + self.0[1].clone() * o.0[1].clone()
            + self.0[2].clone() * o.0[2].clone()
    }

    pub fn cross(&self, o: &Self) -> Self {
        let [a0, a1, a2] = &self.0;
        let [b0, b1, b2] = &o.0;
        Vec3([
            a1.clone() * b2.clone() - a2.clone() * b1.clone(),
            a2.clone() * b0.clone() - a0.clone() * b2.clone(),
            a0.clone() * b1.clone() - a1.clone() * b0.clone(),
        ])
    }

    pub fn norm_squared(&self) -> S {
        self.dot(self)
    }

    pub fn norm_f64(&self) -> f64 {
        self.to_f64().norm()
    }

    pub fn scale(&self, k: &S) -> Self {
        Vec3(self.0.clone().map(|v| v * k.clone()))
    }

    pub fn map<T>(&self, f: impl Fn(&S) -> T) -> Vec3<T> {
        Vec3([f(&self.0[0]), f(&self.0[1]), f(&self.0[2])])
    }

    pub fn to_f64(&self) -> Vec3<f64> {
        self.map(S::to_f64)
    }

    pub fn is_zero_tol(&self, tol: f64) -> bool {
        self.0.iter().all(|v| v.is_zero_tol(tol))
    }

    /// Lexicographic order using the scalar's total order.
    pub fn lex_cmp(&self, o: &Self) -> Ordering {
        self.0[0]
            .total_cmp(&o.0[0])
            .then_with(|| self.0[1].total_cmp(&o.0[1]))
            .then_with(|| self.0[2].total_cmp(&o.0[2]))
    }

    pub fn key(&self) -> [S::Key; 3] {
        [self.0[0].key(), self.0[1].key(), self.0[2].key()]
    }
}

impl Vec3<f64> {
    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn distance(&self, o: &Self) -> f64 {
        (self.clone() - o.clone()).norm()
    }
}

impl<S: Scalar> Add for Vec3<S> {
    type Output = Vec3<S>;
    fn add(self, o: Self) -> Self {
        let [a0, a1, a2] = self.0;
        let [b0, b1, b2] = o.0;
        Vec3([a0 + b0, a1 + b1, a2 + b2])
    }
}

impl<S: Scalar> Sub for Vec3<S> {
    type Output = Vec3<S>;
    fn sub(self, o: Self) -> Self {
        let [a0, a1, a2] = self.0;
        let [b0, b1, b2] = o.0;
        Vec3([a0 - b0, a1 - b1, a2 - b2])
    }
}

impl<S: Scalar> Neg for Vec3<S> {
    type Output = Vec3<S>;
    fn neg(self) -> Self {
        Vec3(self.0.map(|v| -v))
    }
}

impl<S> Index<usize> for Vec3<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.0[i]
    }
}

impl<S: Scalar> Mat3<S> {
    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn zero() -> Self {
        Self::from_fn(|_, _| S::zero())
    }

    pub fn from_fn(f: impl Fn(usize, usize) -> S) -> Self {
        Mat3([
            [f(0, 0), f(0, 1), f(0, 2)],
            [f(1, 0), f(1, 1), f(1, 2)],
            [f(2, 0), f(2, 1), f(2, 2)],
        ])
    }

    pub fn from_ints(m: [[i64; 3]; 3]) -> Self {
        Self::from_fn(|i, j| S::from_int(m[i][j]))
    }

    pub fn entry(&self, i: usize, j: usize) -> &S {
        &self.0[i][j]
    }

    pub fn row(&self, i: usize) -> Vec3<S> {
        Vec3(self.0[i].clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].clone())
    }

    pub fn scale(&self, k: &S) -> Self {
        Self::from_fn(|i, j| self.0[i][j].clone() * k.clone())
    }

    pub fn apply(&self, v: &Vec3<S>) -> Vec3<S> {
        Vec3([self.row(0).dot(v), self.row(1).dot(v), self.row(2).dot(v)])
    }

    pub fn mul_mat(&self, o: &Self) -> Self {
        Self::from_fn(|i, j| {
            (0..3).fold(S::zero(), |acc, k| acc + self.0[i][k].clone() * o.0[k][j].clone())
        })
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::identity();
        for _ in 0..n {
            acc = acc.mul_mat(self);
        }
        acc
    }

    pub fn determinant(&self) -> S {
        let m = &self.0;
        m[0][0].clone() * (m[1][1].clone() * m[2][2].clone() - m[1][2].clone() * m[2][1].clone())
            - m[0][1].clone() * (m[1][0].clone() * m[2][2].clone() - m[1][2].clone() * m[2][0].clone())
            + m[0][2].clone() * (m[1][0].clone() * m[2][1].clone() - m[1][1].clone() * m[2][0].clone())
    }

    /// Inverse by the adjugate; `None` when the determinant vanishes
    /// (exactly, or within `tol` in float mode).
    pub fn inverse(&self, tol: f64) -> Option<Self> {
        let det = self.determinant();
        if det.is_zero_tol(tol) {
            return None;
        }
        let m = &self.0;
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| {
            m[r0][c0].clone() * m[r1][c1].clone() - m[r0][c1].clone() * m[r1][c0].clone()
        };
        // adj[i][j] = cofactor(j, i)
        let adj = Mat3([
            [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
            [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
            [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
        ]);
        Some(Self::from_fn(|i, j| adj.0[i][j].clone() / det.clone()))
    }

    pub fn map<T>(&self, f: impl Fn(&S) -> T) -> Mat3<T> {
        let m = &self.0;
        Mat3([
            [f(&m[0][0]), f(&m[0][1]), f(&m[0][2])],
            [f(&m[1][0]), f(&m[1][1]), f(&m[1][2])],
            [f(&m[2][0]), f(&m[2][1]), f(&m[2][2])],
        ])
    }

    pub fn to_f64(&self) -> Mat3<f64> {
        self.map(S::to_f64)
    }

    /// Largest absolute entrywise difference, in floating point.
    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        let a = self.to_f64();
        let b = o.to_f64();
        (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| (a.0[i][j] - b.0[i][j]).abs())
            .fold(0.0, f64::max)
    }
}

impl<S: Scalar> Add for Mat3<S> {
    type Output = Mat3<S>;
    fn add(self, o: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j].clone() + o.0[i][j].clone())
    }
}

impl<S: Scalar> Sub for Mat3<S> {
    type Output = Mat3<S>;
    fn sub(self, o: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j].clone() - o.0[i][j].clone())
    }
}

impl<S: Scalar> Mul for &Mat3<S> {
    type Output = Mat3<S>;
    fn mul(self, o: Self) -> Mat3<S> {
        self.mul_mat(o)
    }
}

impl<S: Scalar> Mul<&Vec3<S>> for &Mat3<S> {
    type Output = Vec3<S>;
    fn mul(self, v: &Vec3<S>) -> Vec3<S> {
        self.apply(v)
    }
}

/// Sign of the orientation determinant `det[b − a, c − a, d − a]`:
/// positive when `d` lies on the side the normal `(b − a) × (c − a)` points to.
pub fn orient3d<S: Scalar>(a: &Vec3<S>, b: &Vec3<S>, c: &Vec3<S>, d: &Vec3<S>, tol: f64) -> Ordering {
    let ab = b.clone() - a.clone();
    let ac = c.clone() - a.clone();
    let ad = d.clone() - a.clone();
    ab.cross(&ac).dot(&ad).sign(tol)
}
