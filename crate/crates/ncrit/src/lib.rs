//! Deterministic and randomized identity testing for noncommutative rational
//! formulas of inversion height at most two, over exact arithmetic.

pub mod assembly;
pub mod divalg;
pub mod field;
pub mod genabp;
pub mod hitset;
pub mod formula;
pub mod fsgen;
pub mod linalg;
pub mod realization;
