use super::cyclo::check_order;
use super::{CycloElem, FieldError, KElem, Poly};

/// The automorphism ω ↦ ω^{2^κ+1} of K, fixing z and ℚ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Sigma {
    pub order: usize,
    pub kappa: u32,
}

impl Sigma {
    pub fn new(order: usize, kappa: u32) -> Result<Sigma, FieldError> {
        check_order(order)?;
        Ok(Sigma { order, kappa })
    }

    /// (2^κ+1)^times mod ℓ.
    pub fn exponent(&self, times: u64) -> usize {
        let l = self.order as u128;
        let base = ((1u128 << self.kappa.min(100)) + 1) % l;
        let mut acc = 1 % l;
        let mut b = base;
        let mut e = times;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % l;
            }
            b = b * b % l;
            e >>= 1;
        }
        acc as usize
    }

    /// Multiplicative order of σ on ω.
    pub fn period(&self) -> u64 {
        (1..=self.order as u64).find(|&t| self.exponent(t) == 1).unwrap()
    }

    pub fn apply_cyclo(&self, c: &CycloElem, times: u64) -> CycloElem {
        let e = self.exponent(times);
        if e == 1 {
            c.clone()
        } else {
            c.apply_exponent(e)
        }
    }

    pub fn apply(&self, e: &KElem, times: u64) -> Result<KElem, FieldError> {
        if e.order() != self.order {
            return Err(FieldError::OrderMismatch(e.order(), self.order));
        }
        let ex = self.exponent(times);
        if ex == 1 || e.in_base_field() {
            return Ok(e.clone());
        }
        Ok(e.map_coeffs(|c| c.apply_exponent(ex)))
    }

    pub fn apply_poly(&self, p: &Poly<CycloElem>, times: u64) -> Poly<CycloElem> {
        let ex = self.exponent(times);
        p.map(self.order, |c| if ex == 1 { c.clone() } else { c.apply_exponent(ex) })
    }

    /// Coefficient-wise on polynomials over K (the variable is σ-fixed).
    pub fn apply_kpoly(&self, p: &Poly<KElem>, times: u64) -> Result<Poly<KElem>, FieldError> {
        let coeffs = p.coeffs().iter().map(|c| self.apply(c, times)).collect::<Result<Vec<_>, _>>()?;
        Ok(Poly::new(self.order, coeffs))
    }

    pub fn fixes(&self, e: &KElem, times: u64) -> bool {
        self.apply(e, times).map(|s| s == *e).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Rat, Ring};

    #[test]
    fn sigma_examples() {
        let s = Sigma::new(4, 1).unwrap();
        let w = KElem::omega(4);
        assert_eq!(s.apply(&w, 1).unwrap(), w.neg());
        let s16 = Sigma::new(16, 2).unwrap();
        let w16 = KElem::omega(16);
        assert_eq!(s16.apply(&w16, 4).unwrap(), w16);
        let q = KElem::rat(16, Rat::new(3, 7)).add(&KElem::z(16));
        assert_eq!(s16.apply(&q, 3).unwrap(), q);
    }

    #[test]
    fn order_mismatch() {
        let s = Sigma::new(8, 1).unwrap();
        assert_eq!(s.apply(&KElem::omega(4), 1), Err(FieldError::OrderMismatch(4, 8)));
    }

    #[test]
    fn period_is_two_to_kappa_when_l_is_two_kappa() {
        for kappa in 1..=5u32 {
            let s = Sigma::new(1 << (2 * kappa), kappa).unwrap();
            assert_eq!(s.period(), 1 << kappa);
        }
    }
}
