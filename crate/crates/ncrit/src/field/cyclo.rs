use std::fmt;

use super::{Field, FieldError, Rat, Ring};

/// Element of ℚ(ω), ω a primitive ℓ-th root of unity with ℓ = 2^L.
/// Stored as ℓ/2 coefficients modulo ω^{ℓ/2} + 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloElem {
    order: usize,
    coeffs: Vec<Rat>,
}

pub(crate) fn check_order(order: usize) -> Result<(), FieldError> {
    if order >= 2 && order.is_power_of_two() {
        Ok(())
    } else {
        Err(FieldError::BadOrder(order))
    }
}

impl CycloElem {
    /// Fold a raw coefficient vector (any length) using ω^{ℓ/2} = −1.
    pub fn reduce(order: usize, raw: &[Rat]) -> Result<CycloElem, FieldError> {
        check_order(order)?;
        let h = order / 2;
        let mut coeffs = vec![Rat::int(0); h];
        for (j, c) in raw.iter().enumerate() {
            let e = j % order;
            if e < h {
                coeffs[e] = coeffs[e].add(c);
            } else {
                coeffs[e - h] = coeffs[e - h].sub(c);
            }
        }
        Ok(CycloElem { order, coeffs })
    }

    pub fn from_rat(order: usize, r: Rat) -> CycloElem {
        let mut coeffs = vec![Rat::int(0); order / 2];
        coeffs[0] = r;
        CycloElem { order, coeffs }
    }

    /// ω^e for any integer e.
    pub fn omega_pow(order: usize, e: i64) -> CycloElem {
        let e = e.rem_euclid(order as i64) as usize;
        let h = order / 2;
        let mut coeffs = vec![Rat::int(0); h];
        if e < h {
            coeffs[e] = Rat::int(1);
        } else {
            coeffs[e - h] = Rat::int(-1);
        }
        CycloElem { order, coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// ω ↦ ω^e with e odd.
    pub fn apply_exponent(&self, e: usize) -> CycloElem {
        let l = self.order;
        let h = l / 2;
        let mut coeffs = vec![Rat::int(0); h];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = (j * e) % l;
            if t < h {
                coeffs[t] = coeffs[t].add(c);
            } else {
                coeffs[t - h] = coeffs[t - h].sub(c);
            }
        }
        CycloElem { order: l, coeffs }
    }

    /// Formal substitution ω ↦ t on the reduced representative.
    pub fn eval_at(&self, t: &Rat) -> Rat {
        let mut acc = Rat::int(0);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(t).add(c);
        }
        acc
    }

    pub fn mod_p(&self, p: u64, w: u64) -> Option<u64> {
        let mut acc = 0u64;
        for c in self.coeffs.iter().rev() {
            acc = (acc * w + c.mod_p(p)?) % p;
        }
        Some(acc)
    }

    /// a(−ω), the image under ω ↦ ω^{1+ℓ/2}.
    fn conj_neg(&self) -> CycloElem {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| if j % 2 == 1 { c.neg() } else { c.clone() })
            .collect();
        CycloElem { order: self.order, coeffs }
    }

    pub fn scale(&self, r: &Rat) -> CycloElem {
        CycloElem { order: self.order, coeffs: self.coeffs.iter().map(|c| c.mul(r)).collect() }
    }
}

impl Ring for CycloElem {
    type Ctx = usize;

    fn ctx(&self) -> usize {
        self.order
    }
    fn zero(ctx: &usize) -> CycloElem {
        CycloElem { order: *ctx, coeffs: vec![Rat::int(0); ctx / 2] }
    }
    fn one(ctx: &usize) -> CycloElem {
        CycloElem::from_rat(*ctx, Rat::int(1))
    }
    fn from_rat(ctx: &usize, r: &Rat) -> CycloElem {
        CycloElem::from_rat(*ctx, r.clone())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    fn add(&self, o: &CycloElem) -> CycloElem {
        debug_assert_eq!(self.order, o.order);
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect();
        CycloElem { order: self.order, coeffs }
    }
    fn sub(&self, o: &CycloElem) -> CycloElem {
        debug_assert_eq!(self.order, o.order);
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.sub(b)).collect();
        CycloElem { order: self.order, coeffs }
    }
    fn neg(&self) -> CycloElem {
        CycloElem { order: self.order, coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }
    fn mul(&self, o: &CycloElem) -> CycloElem {
        debug_assert_eq!(self.order, o.order);
        let h = self.order / 2;
        if o.is_rational() {
            return self.scale(&o.coeffs[0]);
        }
        if self.is_rational() {
            return o.scale(&self.coeffs[0]);
        }
        // negacyclic convolution
        let mut coeffs = vec![Rat::int(0); h];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let p = a.mul(b);
                let k = i + j;
                if k < h {
                    coeffs[k] = coeffs[k].add(&p);
                } else {
                    coeffs[k - h] = coeffs[k - h].sub(&p);
                }
            }
        }
        CycloElem { order: self.order, coeffs }
    }
    fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.is_rational()
    }
}

impl Field for CycloElem {
    /// a⁻¹ = a(−ω)·(a(ω)a(−ω))⁻¹, where the product lies in ℚ(ω²); recurse.
    fn inv(&self) -> Option<CycloElem> {
        if self.is_zero() {
            return None;
        }
        if self.is_rational() {
            return Some(CycloElem::from_rat(self.order, self.coeffs[0].inv()?));
        }
        let conj = self.conj_neg();
        let norm = self.mul(&conj);
        let half = self.order / 2;
        let sub = CycloElem {
            order: half,
            coeffs: norm.coeffs.iter().step_by(2).cloned().collect(),
        };
        let sub_inv = sub.inv()?;
        let mut lifted = vec![Rat::int(0); self.order / 2];
        for (j, c) in sub_inv.coeffs.into_iter().enumerate() {
            lifted[2 * j] = c;
        }
        Some(conj.mul(&CycloElem { order: self.order, coeffs: lifted }))
    }
}

impl fmt::Display for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
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
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})w")?,
                _ => write!(f, "({c})w^{j}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> Rat {
        Rat::int(v)
    }

    #[test]
    fn reduce_folds_high_powers() {
        assert_eq!(CycloElem::reduce(4, &[r(0), r(0), r(1)]).unwrap().coeffs(), &[r(-1), r(0)]);
        assert_eq!(CycloElem::reduce(4, &[r(1), r(0)]).unwrap().coeffs(), &[r(1), r(0)]);
        assert_eq!(
            CycloElem::reduce(8, &[r(0), r(0), r(0), r(0), r(1)]).unwrap().coeffs(),
            &[r(-1), r(0), r(0), r(0)]
        );
        assert_eq!(CycloElem::reduce(6, &[r(1)]), Err(FieldError::BadOrder(6)));
        assert_eq!(CycloElem::reduce(1, &[r(1)]), Err(FieldError::BadOrder(1)));
    }

    #[test]
    fn omega_squared_is_minus_one_at_order_four() {
        let w = CycloElem::omega_pow(4, 1);
        assert_eq!(w.mul(&w), CycloElem::from_rat(4, r(-1)));
        assert_eq!(w.inv().unwrap(), w.neg());
    }

    #[test]
    fn order_two_is_rational() {
        let w = CycloElem::omega_pow(2, 1);
        assert_eq!(w, CycloElem::from_rat(2, r(-1)));
    }

    #[test]
    fn inverse_round_trip_order_sixteen() {
        let a = CycloElem::reduce(16, &[r(3), r(-1), r(0), r(2), r(0), r(0), r(5), r(1)]).unwrap();
        assert!(a.mul(&a.inv().unwrap()).is_one());
    }

    #[test]
    fn substitution_is_formal() {
        let a = CycloElem::reduce(8, &[r(1), r(2), r(0), r(1)]).unwrap();
        assert_eq!(a.eval_at(&r(2)), r(1 + 4 + 8));
    }
}
