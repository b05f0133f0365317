use std::collections::BTreeMap;
use std::fmt;

use super::{Rat, Ring};

/// Sorted (variable, exponent) pairs.
pub type Monomial = Vec<(u32, u32)>;

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Sparse commutative polynomial in numbered variables.
#[derive(Clone, PartialEq)]
pub struct MPoly<F: Ring> {
    ctx: F::Ctx,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Ring> MPoly<F> {
    pub fn var(ctx: &F::Ctx, v: u32) -> MPoly<F> {
        Self::term(vec![(v, 1)], F::one(ctx))
    }

    pub fn constant(c: F) -> MPoly<F> {
        Self::term(vec![], c)
    }

    pub fn term(m: Monomial, c: F) -> MPoly<F> {
        let ctx = c.ctx();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { ctx, terms }
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, F> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, s: &F) -> MPoly<F> {
        if s.is_zero() {
            return Self::zero(&self.ctx);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c.mul(s)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        MPoly { ctx: self.ctx.clone(), terms }
    }

    /// Substitute every variable; `val(v)` gives the value of variable v.
    pub fn eval<G: Ring>(&self, ctx: &G::Ctx, embed: impl Fn(&F) -> G, val: impl Fn(u32) -> G) -> G {
        let mut acc = G::zero(ctx);
        for (m, c) in &self.terms {
            let mut t = embed(c);
            for &(v, e) in m {
                let x = val(v);
                for _ in 0..e {
                    t = t.mul(&x);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Rename variables; monomials that merge are added.
    pub fn rename(&self, f: impl Fn(u32) -> u32) -> MPoly<F> {
        let mut out = Self::zero(&self.ctx);
        for (m, c) in &self.terms {
            let mut mm: Monomial = vec![];
            for &(v, e) in m {
                mm = mono_mul(&mm, &vec![(f(v), e)]);
            }
            out = out.add(&Self::term(mm, c.clone()));
        }
        out
    }

    /// Variables occurring in the polynomial.
    pub fn vars(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.terms.keys().flat_map(|m| m.iter().map(|p| p.0)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

impl<F: Ring> Ring for MPoly<F> {
    type Ctx = F::Ctx;

    fn ctx(&self) -> F::Ctx {
        self.ctx.clone()
    }
    fn zero(ctx: &F::Ctx) -> Self {
        MPoly { ctx: ctx.clone(), terms: BTreeMap::new() }
    }
    fn one(ctx: &F::Ctx) -> Self {
        Self::constant(F::one(ctx))
    }
    fn from_rat(ctx: &F::Ctx, r: &Rat) -> Self {
        Self::constant(F::from_rat(ctx, r))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let (big, small) = if self.terms.len() >= o.terms.len() { (self, o) } else { (o, self) };
        let mut terms = big.terms.clone();
        for (m, c) in &small.terms {
            match terms.get_mut(m) {
                Some(x) => {
                    *x = x.add(c);
                    if x.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(m.clone(), c.clone());
                }
            }
        }
        MPoly { ctx: self.ctx.clone(), terms }
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn neg(&self) -> Self {
        MPoly { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }
    fn mul(&self, o: &Self) -> Self {
        let mut terms: BTreeMap<Monomial, F> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m = mono_mul(ma, mb);
                let c = ca.mul(cb);
                match terms.get_mut(&m) {
                    Some(x) => *x = x.add(&c),
                    None => {
                        terms.insert(m, c);
                    }
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MPoly { ctx: self.ctx.clone(), terms }
    }
}

impl<F: Ring> fmt::Debug for MPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}
