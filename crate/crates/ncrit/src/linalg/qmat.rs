//! Rational matrices stored as an integer matrix over one common denominator.
//! Products and fraction-free inversion stay in ℤ; a single content gcd per
//! operation replaces per-entry normalization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Mat;
use crate::field::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMat {
    n: usize,
    num: Vec<BigInt>,
    /// Positive.
    den: BigInt,
}

impl QMat {
    pub fn from_mat(m: &Mat<Rat>) -> QMat {
        assert!(m.is_square(), "square matrices only");
        let mut den = BigInt::one();
        for e in m.data() {
            den = den.lcm(e.denom());
        }
        let num = m.data().iter().map(|e| e.numer() * (&den / e.denom())).collect();
        QMat { n: m.rows(), num, den }.normalized()
    }

    pub fn to_mat(&self) -> Mat<Rat> {
        let data = self.num.iter().map(|x| Rat::new(x.clone(), self.den.clone())).collect();
        Mat::new((), self.n, self.n, data).unwrap()
    }

    pub fn scalar(c: &Rat, n: usize) -> QMat {
        let mut num = vec![BigInt::zero(); n * n];
        for i in 0..n {
            num[i * n + i] = c.numer().clone();
        }
        QMat { n, num, den: c.denom().clone() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    fn normalized(mut self) -> QMat {
        let mut g = self.den.clone();
        for x in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(x);
        }
        if !g.is_one() && !g.is_zero() {
            for x in &mut self.num {
                *x /= &g;
            }
            self.den /= &g;
        }
        self
    }

    pub fn add(&self, o: &QMat) -> QMat {
        let g = self.den.gcd(&o.den);
        let (fa, fb) = (&o.den / &g, &self.den / &g);
        let num = self.num.iter().zip(&o.num).map(|(a, b)| a * &fa + b * &fb).collect();
        QMat { n: self.n, num, den: &self.den * &fa }.normalized()
    }

    pub fn mul(&self, o: &QMat) -> QMat {
        let n = self.n;
        let mut num = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.num[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &o.num[k * n + j];
                    if !b.is_zero() {
                        num[i * n + j] += a * b;
                    }
                }
            }
        }
        QMat { n, num, den: &self.den * &o.den }.normalized()
    }

    pub fn scale(&self, c: &Rat) -> QMat {
        let num = self.num.iter().map(|x| x * c.numer()).collect();
        QMat { n: self.n, num, den: &self.den * c.denom() }.normalized()
    }

    /// Fraction-free Gauss–Jordan on [N | I]: ends at [det·I | det·N⁻¹].
    pub fn inverse(&self) -> Option<QMat> {
        let n = self.n;
        let w = 2 * n;
        let mut a = vec![BigInt::zero(); n * w];
        for i in 0..n {
            for j in 0..n {
                a[i * w + j] = self.num[i * n + j].clone();
            }
            a[i * w + n + i] = BigInt::one();
        }
        let mut prev = BigInt::one();
        for k in 0..n {
            let p = (k..n).find(|&r| !a[r * w + k].is_zero())?;
            if p != k {
                for j in 0..w {
                    a.swap(p * w + j, k * w + j);
                }
            }
            let piv = a[k * w + k].clone();
            for i in 0..n {
                if i == k {
                    continue;
                }
                let f = a[i * w + k].clone();
                for j in 0..w {
                    if j == k {
                        continue;
                    }
                    let v = &piv * &a[i * w + j] - &f * &a[k * w + j];
                    a[i * w + j] = v / &prev;
                }
                a[i * w + k] = BigInt::zero();
            }
            prev = piv;
        }
        // every row now carries the last pivot (±det) on its diagonal
        let det = prev;
        debug_assert!((0..n).all(|i| a[i * w + i] == det));
        let mut num = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                num.push(&a[i * w + n + j] * &self.den);
            }
        }
        let (num, den) = if det.is_negative() { (num.into_iter().map(|x| -x).collect(), -det) } else { (num, det) };
        Some(QMat { n, num, den }.normalized())
    }
}
