use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{CycloElem, Degree, Field, FieldError, Poly, Rat, Ring};

/// Reduced fraction num/den of univariate polynomials over a field, den monic.
#[derive(Clone, PartialEq)]
pub struct RatFunc<F: Field> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RatFunc<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Result<RatFunc<F>, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Poly<F>, den: Poly<F>) -> RatFunc<F> {
        if num.is_zero() {
            let ctx = den.ctx().clone();
            return RatFunc { num: Poly::zero(&ctx), den: Poly::one(&ctx) };
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            (num.div_exact(&g), den.div_exact(&g))
        };
        let lc = den.leading().unwrap().clone();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let li = lc.inv().unwrap();
            RatFunc { num: num.scale(&li), den: den.scale(&li) }
        }
    }

    pub fn from_poly(p: Poly<F>) -> RatFunc<F> {
        let ctx = p.ctx().clone();
        RatFunc { num: p, den: Poly::one(&ctx) }
    }

    pub fn constant(c: F) -> RatFunc<F> {
        RatFunc::from_poly(Poly::constant(c))
    }

    /// The transcendental generator.
    pub fn var(ctx: &F::Ctx) -> RatFunc<F> {
        RatFunc::from_poly(Poly::var(ctx))
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    /// Coefficient-wise map by a field automorphism (keeps normal form).
    pub fn map_coeffs(&self, f: impl Fn(&F) -> F) -> RatFunc<F> {
        let ctx = self.num.ctx().clone();
        RatFunc { num: self.num.map(ctx.clone(), &f), den: self.den.map(ctx, &f) }
    }

    /// Substitute the generator by a field element.
    pub fn eval(&self, t: &F) -> Result<F, FieldError> {
        let d = self.den.eval(t);
        let n = self.num.eval(t);
        n.div(&d).ok_or(FieldError::DenominatorVanishes)
    }

    /// The value as a constant when the function does not depend on the
    /// generator.
    pub fn as_constant(&self) -> Option<F> {
        if self.num.is_constant() && self.den.is_one() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }
}

impl<F: Field> Ring for RatFunc<F> {
    type Ctx = F::Ctx;

    fn ctx(&self) -> F::Ctx {
        self.num.ctx().clone()
    }
    fn zero(ctx: &F::Ctx) -> Self {
        RatFunc { num: Poly::zero(ctx), den: Poly::one(ctx) }
    }
    fn one(ctx: &F::Ctx) -> Self {
        RatFunc { num: Poly::one(ctx), den: Poly::one(ctx) }
    }
    fn from_rat(ctx: &F::Ctx, r: &Rat) -> Self {
        RatFunc::constant(F::from_rat(ctx, r))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc::from_poly(self.num.add(&o.num));
        }
        if self.den == o.den {
            return Self::normalize(self.num.add(&o.num), self.den.clone());
        }
        let g = self.den.gcd(&o.den);
        let a = o.den.div_exact(&g);
        let b = self.den.div_exact(&g);
        let num = self.num.mul(&a).add(&o.num.mul(&b));
        Self::normalize(num, self.den.mul(&a))
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.ctx());
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc::from_poly(self.num.mul(&o.num));
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let num = self.num.div_exact(&g1).mul(&o.num.div_exact(&g2));
        let den = self.den.div_exact(&g2).mul(&o.den.div_exact(&g1));
        RatFunc { num, den }
    }
    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
}

impl<F: Field> Field for RatFunc<F> {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let lc = self.num.leading().unwrap().inv()?;
        Some(RatFunc { num: self.den.scale(&lc), den: self.num.scale(&lc) })
    }
}

impl<F: Field> Degree for RatFunc<F> {
    /// max(deg num, deg den) in the generator.
    fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.num.degree().unwrap().max(self.den.degree().unwrap()))
        }
    }
}

impl<F: Field + fmt::Display> fmt::Display for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl<F: Field> fmt::Debug for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}/{:?}", self.num, self.den)
    }
}

impl<F: Field + Serialize> Serialize for RatFunc<F> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        // a zero numerator is written with one zero coefficient so that the
        // field context survives the round trip
        let num: Vec<F> = if self.num.is_zero() {
            vec![F::zero(&self.ctx())]
        } else {
            self.num.coeffs().to_vec()
        };
        (num, self.den.coeffs().to_vec()).serialize(s)
    }
}

impl<'de, F: Field + Deserialize<'de>> Deserialize<'de> for RatFunc<F> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (num, den): (Vec<F>, Vec<F>) = Deserialize::deserialize(d)?;
        let ctx = den.first().ok_or_else(|| D::Error::custom("empty denominator"))?.ctx();
        if num.iter().chain(den.iter()).any(|c| c.ctx() != ctx) {
            return Err(D::Error::custom("mixed field orders"));
        }
        RatFunc::new(Poly::new(ctx.clone(), num), Poly::new(ctx, den)).map_err(D::Error::custom)
    }
}

impl Serialize for CycloElem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coeffs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let c: Vec<Rat> = Deserialize::deserialize(d)?;
        CycloElem::reduce(2 * c.len(), &c).map_err(D::Error::custom)
    }
}

/// Elements of K = ℚ(ω)(z).
impl RatFunc<CycloElem> {
    pub fn omega(order: usize) -> Self {
        RatFunc::constant(CycloElem::omega_pow(order, 1))
    }

    pub fn omega_pow(order: usize, e: i64) -> Self {
        RatFunc::constant(CycloElem::omega_pow(order, e))
    }

    pub fn z(order: usize) -> Self {
        RatFunc::var(&order)
    }

    pub fn rat(order: usize, r: Rat) -> Self {
        RatFunc::constant(CycloElem::from_rat(order, r))
    }

    pub fn int(order: usize, v: i64) -> Self {
        Self::rat(order, Rat::int(v))
    }

    pub fn order(&self) -> usize {
        self.ctx()
    }

    /// True when every cyclotomic coefficient is rational (element of ℚ(z)).
    pub fn in_base_field(&self) -> bool {
        self.num.coeffs().iter().chain(self.den.coeffs()).all(|c| c.is_rational())
    }

    /// Formal substitution ω ↦ t1, z ↦ t2 on the reduced representative.
    pub fn eval_at_rationals(&self, t1: &Rat, t2: &Rat) -> Result<Rat, FieldError> {
        let ev = |p: &Poly<CycloElem>| {
            let mut acc = Rat::int(0);
            for c in p.coeffs().iter().rev() {
                acc = acc.mul(t2).add(&c.eval_at(t1));
            }
            acc
        };
        let d = ev(&self.den);
        if d.is_zero() {
            return Err(FieldError::DenominatorVanishes);
        }
        Ok(ev(&self.num).mul(&d.inv().unwrap()))
    }

    /// Image under ℤ_(p)[ω][z] → F_p with ω ↦ w, z ↦ t.
    pub fn mod_p(&self, p: u64, w: u64, t: u64) -> Option<u64> {
        let ev = |q: &Poly<CycloElem>| -> Option<u64> {
            let mut acc = 0u64;
            for c in q.coeffs().iter().rev() {
                acc = (acc * t + c.mod_p(p, w)?) % p;
            }
            Some(acc)
        };
        let d = ev(&self.den)?;
        if d == 0 {
            return None;
        }
        Some(ev(&self.num)? * crate::linalg::modp::inv_mod(d, p) % p)
    }
}

/// Elements of ℚ(t).
impl RatFunc<Rat> {
    pub fn mod_p(&self, p: u64, t: u64) -> Option<u64> {
        let ev = |q: &Poly<Rat>| -> Option<u64> {
            let mut acc = 0u64;
            for c in q.coeffs().iter().rev() {
                acc = (acc * t + c.mod_p(p)?) % p;
            }
            Some(acc)
        };
        let d = ev(&self.den)?;
        if d == 0 {
            return None;
        }
        Some(ev(&self.num)? * crate::linalg::modp::inv_mod(d, p) % p)
    }

    /// Taylor coefficients at 0 up to degree `n` (requires den(0) ≠ 0).
    pub fn taylor(&self, n: usize) -> Result<Vec<Rat>, FieldError> {
        let d0 = self.den.coeff(0);
        let d0i = d0.inv().ok_or(FieldError::DenominatorVanishes)?;
        let mut out: Vec<Rat> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.num.coeff(k);
            for j in 1..=k {
                let dj = self.den.coeff(j);
                if !dj.is_zero() {
                    acc = acc.sub(&dj.mul(&out[k - j]));
                }
            }
            out.push(acc.mul(&d0i));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type K = RatFunc<CycloElem>;

    #[test]
    fn z_inverse() {
        let z = K::z(4);
        let zi = z.inv().unwrap();
        assert!(zi.mul(&z).is_one());
        assert_eq!(zi.num().degree(), Some(0));
        assert_eq!(zi.den().degree(), Some(1));
    }

    #[test]
    fn eval_examples() {
        let e = K::omega(4).add(&K::z(4));
        assert_eq!(e.eval_at_rationals(&Rat::int(2), &Rat::int(3)).unwrap(), Rat::int(5));
        let e = K::z(4).inv().unwrap();
        assert_eq!(e.eval_at_rationals(&Rat::int(2), &Rat::int(0)), Err(FieldError::DenominatorVanishes));
        let w2p1 = K::omega_pow(4, 2).add(&K::int(4, 1));
        let e = w2p1.mul(&K::z(4).add(&K::int(4, 1)).inv().unwrap());
        assert!(e.is_zero());
        assert_eq!(e.eval_at_rationals(&Rat::int(7), &Rat::int(5)).unwrap(), Rat::int(0));
    }

    #[test]
    fn normal_form_cancels() {
        let z = K::z(8);
        let one = K::int(8, 1);
        let a = z.mul(&z).sub(&one); // z²-1
        let b = z.sub(&one); // z-1
        let q = a.mul(&b.inv().unwrap());
        assert_eq!(q, z.add(&one));
        assert!(q.is_poly());
    }

    #[test]
    fn serde_round_trip() {
        let e = K::omega(4).add(&K::z(4).inv().unwrap());
        let s = serde_json::to_string(&e).unwrap();
        let back: K = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
        let zero = K::zero(&4);
        let s = serde_json::to_string(&zero).unwrap();
        assert_eq!(s, r#"[[["0","0"]],[["1","0"]]]"#);
        assert_eq!(serde_json::from_str::<K>(&s).unwrap(), zero);
    }

    #[test]
    fn taylor_of_geometric_series() {
        // 1/(1-t) = 1 + t + t² + ...
        let t = RatFunc::<Rat>::var(&());
        let f = RatFunc::<Rat>::one(&()).sub(&t).inv().unwrap();
        assert_eq!(f.taylor(3).unwrap(), vec![Rat::int(1); 4]);
    }
}
