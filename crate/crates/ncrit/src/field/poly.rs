use std::fmt;

use super::{Field, Ring};

/// Dense univariate polynomial, coefficients in ascending degree, no trailing
/// zeros.
#[derive(Clone, PartialEq)]
pub struct Poly<F: Ring> {
    ctx: F::Ctx,
    coeffs: Vec<F>,
}

impl<F: Ring> Poly<F> {
    pub fn new(ctx: F::Ctx, mut coeffs: Vec<F>) -> Poly<F> {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { ctx, coeffs }
    }

    pub fn zero(ctx: &F::Ctx) -> Poly<F> {
        Poly { ctx: ctx.clone(), coeffs: vec![] }
    }

    pub fn constant(c: F) -> Poly<F> {
        Poly::new(c.ctx(), vec![c])
    }

    pub fn one(ctx: &F::Ctx) -> Poly<F> {
        Poly::constant(F::one(ctx))
    }

    /// The indeterminate.
    pub fn var(ctx: &F::Ctx) -> Poly<F> {
        Poly::new(ctx.clone(), vec![F::zero(ctx), F::one(ctx)])
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(|| F::zero(&self.ctx))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, o: &Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n)
            .map(|i| match (self.coeffs.get(i), o.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::new(self.ctx.clone(), c)
    }

    pub fn neg(&self) -> Poly<F> {
        Poly { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn sub(&self, o: &Poly<F>) -> Poly<F> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly<F>) -> Poly<F> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.ctx);
        }
        if o.coeffs.len() == 1 {
            return self.scale(&o.coeffs[0]);
        }
        if self.coeffs.len() == 1 {
            return o.scale(&self.coeffs[0]);
        }
        let mut c = vec![F::zero(&self.ctx); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        Poly::new(self.ctx.clone(), c)
    }

    pub fn scale(&self, s: &F) -> Poly<F> {
        if s.is_one() {
            return self.clone();
        }
        Poly::new(self.ctx.clone(), self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    pub fn map<G: Ring>(&self, ctx: G::Ctx, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(ctx, self.coeffs.iter().map(f).collect())
    }

    /// Horner evaluation at a ring element.
    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Evaluation in an extension ring through an embedding of coefficients.
    pub fn eval_with<G: Ring>(&self, x: &G, embed: impl Fn(&F) -> G) -> G {
        let mut acc = G::zero(&x.ctx());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&embed(c));
        }
        acc
    }
}

impl<F: Field> Poly<F> {
    /// Division with remainder.
    pub fn divrem(&self, d: &Poly<F>) -> (Poly<F>, Poly<F>) {
        let dl = d.leading().expect("division by zero polynomial");
        let dinv = dl.inv().expect("leading coefficient invertible");
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(&self.ctx), self.clone());
        }
        let mut q = vec![F::zero(&self.ctx); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].mul(&dinv);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    r[k + j] = r[k + j].sub(&c.mul(dc));
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Poly::new(self.ctx.clone(), q), Poly::new(self.ctx.clone(), r))
    }

    pub fn monic(&self) -> Poly<F> {
        match self.leading() {
            None => self.clone(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, o: &Poly<F>) -> Poly<F> {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            if b.degree() == Some(0) {
                return Poly::one(&self.ctx);
            }
            let (_, r) = a.divrem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Exact division, panics on nonzero remainder in debug builds.
    pub fn div_exact(&self, d: &Poly<F>) -> Poly<F> {
        if d.is_one() {
            return self.clone();
        }
        let (q, r) = self.divrem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }
}

impl<F: Ring + fmt::Display> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{j}")?,
            }
        }
        Ok(())
    }
}

impl<F: Ring> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::super::Rat;
    use super::*;

    fn p(c: &[i64]) -> Poly<Rat> {
        Poly::new((), c.iter().map(|&v| Rat::int(v)).collect())
    }

    #[test]
    fn divrem_and_gcd() {
        // (z-1)(z+2) and (z-1)(z-3)
        let a = p(&[-2, 1, 1]);
        let b = p(&[3, -4, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        let (q, r) = a.divrem(&p(&[-1, 1]));
        assert_eq!(q, p(&[2, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn trailing_zeros_trimmed() {
        assert_eq!(p(&[1, 0, 0]).degree(), Some(0));
        assert!(p(&[0]).is_zero());
    }
}
