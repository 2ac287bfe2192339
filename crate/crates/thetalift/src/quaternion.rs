//! Quaternions `x0 + x1·i + x2·j + x3·ij` with i² = a, j² = b and
//! ij = −ji over a commutative coefficient ring, plus small matrices over
//! them. The real forms used throughout have a = −1 and b = e = ±1.

use crate::scalar::Field;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quaternion<S> {
    pub c: [S; 4],
    /// (i², j²).
    pub params: (S, S),
}

impl<S: Field> Quaternion<S> {
    /// i² = −1 and j² = e.
    pub fn new(c: [S; 4], e: i8) -> Self {
        assert!(e == 1 || e == -1, "j² must be ±1");
        Quaternion { c, params: (-S::one(), S::from_i64(e as i64)) }
    }

    /// The algebra (a, b): i² = a, j² = b.
    pub fn with_params(c: [S; 4], a: S, b: S) -> Self {
        Quaternion { c, params: (a, b) }
    }

    pub fn zero(e: i8) -> Self {
        Self::new([S::zero(), S::zero(), S::zero(), S::zero()], e)
    }

    /// Zero in the same algebra as `self`.
    pub fn zero_like(&self) -> Self {
        self.with_coeffs([S::zero(), S::zero(), S::zero(), S::zero()])
    }

    pub fn with_coeffs(&self, c: [S; 4]) -> Self {
        Quaternion { c, params: self.params.clone() }
    }

    pub fn scalar(s: S, e: i8) -> Self {
        Self::new([s, S::zero(), S::zero(), S::zero()], e)
    }

    /// The basis element 1, i, j or ij for `k` = 0..4.
    pub fn unit(k: usize, e: i8) -> Self {
        let mut q = Self::zero(e);
        q.c[k] = S::one();
        q
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// The main involution x ↦ x*.
    pub fn star(&self) -> Self {
        let [a, b, c, d] = self.c.clone();
        self.with_coeffs([a, -b, -c, -d])
    }

    /// Reduced trace x + x*.
    pub fn trace(&self) -> S {
        self.c[0].clone() + self.c[0].clone()
    }

    /// Reduced norm x·x*.
    pub fn norm(&self) -> S {
        (self * &self.star()).c[0].clone()
    }

    pub fn scale(&self, s: &S) -> Self {
        self.with_coeffs(self.c.clone().map(|x| x * s.clone()))
    }

    /// Applies a map to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&S) -> S) -> Self {
        self.with_coeffs([f(&self.c[0]), f(&self.c[1]), f(&self.c[2]), f(&self.c[3])])
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm().inv()?;
        Some(self.star().scale(&n))
    }
}

impl<S: Field> Mul for &Quaternion<S> {
    type Output = Quaternion<S>;
    fn mul(self, o: &Quaternion<S>) -> Quaternion<S> {
        assert!(self.params == o.params, "mixed quaternion algebras");
        let (a, b) = self.params.clone();
        let [x0, x1, x2, x3] = &self.c;
        let [y0, y1, y2, y3] = &o.c;
        let m = |x: &S, y: &S| x.clone() * y.clone();
        self.with_coeffs([
            m(x0, y0) + a.clone() * m(x1, y1) + b.clone() * m(x2, y2) - a.clone() * b.clone() * m(x3, y3),
            m(x0, y1) + m(x1, y0) + b * (m(x3, y2) - m(x2, y3)),
            m(x0, y2) + m(x2, y0) + a * (m(x1, y3) - m(x3, y1)),
            m(x0, y3) + m(x3, y0) + m(x1, y2) - m(x2, y1),
        ])
    }
}

impl<S: Field> Add for &Quaternion<S> {
    type Output = Quaternion<S>;
    fn add(self, o: &Quaternion<S>) -> Quaternion<S> {
        self.with_coeffs([0, 1, 2, 3].map(|k| self.c[k].clone() + o.c[k].clone()))
    }
}

impl<S: Field> Sub for &Quaternion<S> {
    type Output = Quaternion<S>;
    fn sub(self, o: &Quaternion<S>) -> Quaternion<S> {
        self.with_coeffs([0, 1, 2, 3].map(|k| self.c[k].clone() - o.c[k].clone()))
    }
}

impl<S: Field> Neg for &Quaternion<S> {
    type Output = Quaternion<S>;
    fn neg(self) -> Quaternion<S> {
        self.map_coeffs(|x| -x.clone())
    }
}

/// A dense matrix of quaternions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix<S> {
    pub rows: usize,
    pub cols: usize,
    zero: Quaternion<S>,
    data: Vec<Quaternion<S>>,
}

impl<S: Field> QMatrix<S> {
    pub fn zeros(rows: usize, cols: usize, e: i8) -> Self {
        Self::zeros_like(rows, cols, &Quaternion::zero(e))
    }

    /// Zeros in the algebra of `q`.
    pub fn zeros_like(rows: usize, cols: usize, q: &Quaternion<S>) -> Self {
        let zero = q.zero_like();
        QMatrix { rows, cols, data: vec![zero.clone(); rows * cols], zero }
    }

    /// The matrix with `x` at (r, c) and zeros elsewhere.
    pub fn unit(rows: usize, cols: usize, r: usize, c: usize, x: Quaternion<S>) -> Self {
        let mut m = Self::zeros_like(rows, cols, &x);
        m.set(r, c, x);
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &Quaternion<S> {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: Quaternion<S>) {
        self.data[r * self.cols + c] = x;
    }

    pub fn scale(&self, s: &S) -> Self {
        QMatrix { data: self.data.iter().map(|q| q.scale(s)).collect(), ..self.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|q| q.is_zero())
    }

    /// All coefficients, row-major, four per entry.
    pub fn flatten(&self) -> Vec<S> {
        self.data.iter().flat_map(|q| q.c.clone()).collect()
    }

    pub fn commutator(&self, o: &Self) -> Self {
        &(self * o) - &(o * self)
    }
}

impl<S: Field> Mul for &QMatrix<S> {
    type Output = QMatrix<S>;
    fn mul(self, o: &QMatrix<S>) -> QMatrix<S> {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let mut out = QMatrix::zeros_like(self.rows, o.cols, &self.zero);
        for r in 0..self.rows {
            for c in 0..o.cols {
                let mut acc = self.zero.clone();
                for k in 0..self.cols {
                    let (a, b) = (self.get(r, k), o.get(k, c));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(r, c, acc);
            }
        }
        out
    }
}

impl<S: Field> Add for &QMatrix<S> {
    type Output = QMatrix<S>;
    fn add(self, o: &QMatrix<S>) -> QMatrix<S> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in sum");
        QMatrix { data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(), ..self.clone() }
    }
}

impl<S: Field> Sub for &QMatrix<S> {
    type Output = QMatrix<S>;
    fn sub(self, o: &QMatrix<S>) -> QMatrix<S> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in difference");
        QMatrix { data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(), ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use crate::Rational;

    fn u(k: usize, e: i8) -> Quaternion<Rational> {
        Quaternion::unit(k, e)
    }

    #[test]
    fn multiplication_table() {
        for e in [1i8, -1] {
            let (i, j, k) = (u(1, e), u(2, e), u(3, e));
            let s = |x: i64| Quaternion::scalar(int(x), e);
            assert_eq!(&i * &i, s(-1));
            assert_eq!(&j * &j, s(e as i64));
            assert_eq!(&i * &j, k);
            assert_eq!(&j * &i, -&k);
            assert_eq!(&k * &k, s(e as i64));
            assert_eq!(&i * &k, -&j);
            assert_eq!(&k * &i, j);
            assert_eq!(&j * &k, i.scale(&int(-(e as i64))));
        }
    }

    #[test]
    fn general_algebra() {
        let (a, b) = (int(2), int(5));
        let q = |k: usize| {
            let mut c = [int(0), int(0), int(0), int(0)];
            c[k] = int(1);
            Quaternion::with_params(c, a.clone(), b.clone())
        };
        let (i, j, k) = (q(1), q(2), q(3));
        assert_eq!(&i * &i, q(0).scale(&a));
        assert_eq!(&j * &j, q(0).scale(&b));
        assert_eq!(&k * &k, q(0).scale(&(-a.clone() * b.clone())));
        assert_eq!(&j * &i, -&k);
        let x = Quaternion::with_params([int(1), int(2), int(-1), int(3)], a.clone(), b.clone());
        let y = Quaternion::with_params([int(0), int(1), int(5), int(-2)], a, b);
        assert_eq!((&x * &y).star(), &y.star() * &x.star());
        assert_eq!(&(&x * &y) * &i, &x * &(&y * &i));
    }

    #[test]
    fn star_is_anti_multiplicative() {
        let a = Quaternion::new([int(1), int(2), int(-1), int(3)], -1);
        let b = Quaternion::new([int(0), int(1), int(5), int(-2)], -1);
        assert_eq!((&a * &b).star(), &b.star() * &a.star());
        assert_eq!(&a * &a.inverse().unwrap(), Quaternion::scalar(int(1), -1));
    }
}
