//! Nonsingularity certificates by reduction to a prime field.
//!
//! A matrix over ℚ(ω)(z) whose image under ω ↦ w, z ↦ t (w a primitive ℓ-th
//! root of unity mod p) has nonzero determinant is itself nonsingular, since
//! the reduction is a ring homomorphism on the entries where it is defined.
//! A zero residue proves nothing, so the caller falls back to exact
//! elimination.

use serde::{Deserialize, Serialize};

use super::Mat;
use crate::field::{CycloElem, Field, KElem, Rat, RatFn};

/// (prime, primitive root), all with large 2-adic part in p − 1.
pub const PRIMES: [(u64, u64); 5] =
    [(998244353, 3), (469762049, 3), (167772161, 3), (754974721, 11), (2013265921, 31)];

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Inverse modulo a prime; `d` must be nonzero mod p.
pub fn inv_mod(d: u64, p: u64) -> u64 {
    pow_mod(d, p - 2, p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModPoint {
    pub p: u64,
    /// Image of ω.
    pub w: u64,
    /// Image of the rational-function generator.
    pub t: u64,
}

impl ModPoint {
    /// `None` when ℓ does not divide p − 1.
    pub fn new(prime: (u64, u64), order: usize, t: u64) -> Option<ModPoint> {
        let (p, g) = prime;
        let l = order as u64;
        if l == 0 || (p - 1) % l != 0 {
            return None;
        }
        Some(ModPoint { p, w: pow_mod(g, (p - 1) / l, p), t: t % p })
    }
}

pub trait ModReduce: Field {
    /// Order of the root of unity the scalars need (1 if none).
    fn root_order(ctx: &Self::Ctx) -> usize;
    fn reduce(&self, pt: &ModPoint) -> Option<u64>;
}

impl ModReduce for Rat {
    fn root_order(_: &()) -> usize {
        1
    }
    fn reduce(&self, pt: &ModPoint) -> Option<u64> {
        self.mod_p(pt.p)
    }
}

impl ModReduce for CycloElem {
    fn root_order(ctx: &usize) -> usize {
        *ctx
    }
    fn reduce(&self, pt: &ModPoint) -> Option<u64> {
        self.mod_p(pt.p, pt.w)
    }
}

impl ModReduce for KElem {
    fn root_order(ctx: &usize) -> usize {
        *ctx
    }
    fn reduce(&self, pt: &ModPoint) -> Option<u64> {
        self.mod_p(pt.p, pt.w, pt.t)
    }
}

impl ModReduce for RatFn {
    fn root_order(_: &()) -> usize {
        1
    }
    fn reduce(&self, pt: &ModPoint) -> Option<u64> {
        self.mod_p(pt.p, pt.t)
    }
}

/// Determinant of a residue matrix (row-major, n×n).
pub fn det_residue(mut a: Vec<u64>, n: usize, p: u64) -> u64 {
    let mut det = 1u64;
    for c in 0..n {
        let Some(r) = (c..n).find(|&r| a[r * n + c] != 0) else {
            return 0;
        };
        if r != c {
            for j in 0..n {
                a.swap(r * n + j, c * n + j);
            }
            det = (p - det) % p;
        }
        let piv = a[c * n + c];
        det = det * piv % p;
        let inv = inv_mod(piv, p);
        for i in c + 1..n {
            let f = a[i * n + c] * inv % p;
            if f == 0 {
                continue;
            }
            for j in c..n {
                let s = f * a[c * n + j] % p;
                a[i * n + j] = (a[i * n + j] + p - s) % p;
            }
        }
    }
    det
}

/// Determinant of the reduction, `None` if some entry does not reduce.
pub fn det_mod<R: ModReduce>(m: &Mat<R>, pt: &ModPoint) -> Option<u64> {
    let n = m.rows();
    let mut a = Vec::with_capacity(n * n);
    for e in m.data() {
        a.push(e.reduce(pt)?);
    }
    Some(det_residue(a, n, pt.p))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertMethod {
    Modular { p: u64, t: u64 },
    Exact,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Nonsingular {
    pub nonsingular: bool,
    pub method: CertMethod,
}

const TRIAL_T: [u64; 2] = [1_000_003, 7_919];

/// Prove or refute nonsingularity; modular first, exact elimination last.
pub fn certify_nonsingular<R: ModReduce>(m: &Mat<R>) -> Nonsingular {
    assert!(m.is_square());
    let order = R::root_order(m.ctx());
    for &prime in &PRIMES {
        for &t in &TRIAL_T {
            let Some(pt) = ModPoint::new(prime, order, t) else { continue };
            if let Some(d) = det_mod(m, &pt) {
                if d != 0 {
                    return Nonsingular { nonsingular: true, method: CertMethod::Modular { p: pt.p, t: pt.t } };
                }
            }
        }
    }
    let d = m.det().expect("square");
    Nonsingular { nonsingular: !d.is_zero(), method: CertMethod::Exact }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Ring;

    #[test]
    fn roots_are_primitive() {
        for &pr in &PRIMES {
            let pt = ModPoint::new(pr, 16, 5).unwrap();
            assert_eq!(pow_mod(pt.w, 16, pt.p), 1);
            assert_eq!(pow_mod(pt.w, 8, pt.p), pt.p - 1);
        }
    }

    #[test]
    fn modular_det_agrees_with_exact() {
        let a = Mat::from_rows(
            (),
            vec![
                vec![Rat::new(1, 2), Rat::int(3), Rat::int(0)],
                vec![Rat::int(-1), Rat::int(2), Rat::new(5, 3)],
                vec![Rat::int(4), Rat::int(0), Rat::int(1)],
            ],
        )
        .unwrap();
        let pt = ModPoint::new(PRIMES[0], 1, 0).unwrap();
        let exact = a.det().unwrap();
        assert_eq!(det_mod(&a, &pt), exact.mod_p(pt.p));
        assert!(certify_nonsingular(&a).nonsingular);
    }

    #[test]
    fn singular_falls_back_to_exact() {
        let a = Mat::from_rows((), vec![vec![Rat::int(1), Rat::int(2)], vec![Rat::int(2), Rat::int(4)]]).unwrap();
        let c = certify_nonsingular(&a);
        assert!(!c.nonsingular);
        assert_eq!(c.method, CertMethod::Exact);
    }

    #[test]
    fn kelem_reduction_is_a_homomorphism() {
        let l = 8;
        let a = KElem::omega(l).add(&KElem::z(l).mul(&KElem::int(l, 3)));
        let b = KElem::z(l).add(&KElem::int(l, 2)).inv().unwrap();
        let pt = ModPoint::new(PRIMES[1], l, 11).unwrap();
        let (ra, rb) = (a.reduce(&pt).unwrap(), b.reduce(&pt).unwrap());
        assert_eq!(a.mul(&b).reduce(&pt).unwrap(), ra * rb % pt.p);
        assert_eq!(a.add(&b).reduce(&pt).unwrap(), (ra + rb) % pt.p);
    }
}
