//! Exact scalars: ℚ, power-of-two cyclotomic fields, univariate rational
//! function fields over those, and the automorphism σ.

mod cyclo;
mod mpoly;
mod poly;
mod rat;
mod ratfunc;
mod sigma;

use std::fmt::Debug;

pub use cyclo::CycloElem;
pub use mpoly::{MPoly, Monomial};
pub use poly::Poly;
pub use rat::Rat;
pub use ratfunc::RatFunc;
pub use sigma::Sigma;

/// Scalar of the tower ℚ(ω)(z).
pub type KElem = RatFunc<CycloElem>;

/// ℚ(t).
pub type RatFn = RatFunc<Rat>;

/// ℚ(t₁)(t₂), i.e. bivariate rational functions.
pub type BiRatFn = RatFunc<RatFunc<Rat>>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("order {0} is not a power of two >= 2")]
    BadOrder(usize),
    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("division by zero")]
    DivByZero,
    #[error("denominator vanishes at the substituted point")]
    DenominatorVanishes,
    #[error("cannot parse element: {0}")]
    Parse(String),
}

/// Commutative ring with identity. `Ctx` carries whatever is needed to build
/// constants (for cyclotomic elements, the order ℓ).
pub trait Ring: Clone + PartialEq + Debug + Send + Sync + 'static {
    type Ctx: Clone + PartialEq + Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_rat(ctx: &Self::Ctx, r: &Rat) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;

    fn from_i64(ctx: &Self::Ctx, v: i64) -> Self {
        Self::from_rat(ctx, &Rat::from(v))
    }
    fn is_one(&self) -> bool {
        *self == Self::one(&self.ctx())
    }
}

pub trait Field: Ring {
    /// `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }
}

/// Total degree bookkeeping for rational functions, used by degree-bound
/// checks.
pub trait Degree {
    fn degree(&self) -> Option<usize>;
}
