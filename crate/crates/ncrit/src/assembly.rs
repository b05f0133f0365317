//! The end-to-end pipeline: scaling sets, the height-1 strong hitting set Ĥ₁
//! over K, the height-2 set H̃₂ over ℚ, transfer of K-points to ℚ, the
//! black-box verdict procedure and the randomized baseline.

use std::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::field::{FieldError, KElem, Rat};
use crate::formula::{eval, eval_rat, EvalResult, Formula, FormulaError, Node};
use crate::fsgen::{self, FsError, Mode};
use crate::genabp::{self, describe, GenAbpError};
use crate::hitset::{Certification, HitPoint, HittingSet, Meta};
use crate::linalg::modp::certify_nonsingular;
use crate::linalg::Mat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AssemblyError {
    #[error(transparent)]
    Fs(#[from] FsError),
    #[error(transparent)]
    GenAbp(#[from] GenAbpError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Derivation {
    pub s: usize,
    pub m: usize,
    pub dprime: usize,
    /// Dimension 2·s·m of the pencil evaluated at m×m points.
    pub pencil_dim: usize,
    /// Degree bound 2·s·m·d′ for numerators and denominators of entries.
    pub entry_degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScalingSet {
    pub values: Vec<Rat>,
    pub bound: usize,
    pub derivation: Derivation,
}

/// Entries of the inverse of a (2sm)-dimensional pencil with entry degree d′
/// have numerator and denominator degree ≤ 2smd′ (cofactor expansion).
pub fn entry_degree_bound(s: usize, m: usize, dprime: usize) -> usize {
    2 * s * m * dprime
}

/// values = {0, …, N}, N = 2·(2smd′) + 1 (numerator·denominator products),
/// or N = 1 for constant entries.
pub fn scaling_set(s: usize, m: usize, dprime: usize) -> ScalingSet {
    let entry = entry_degree_bound(s, m, dprime);
    let bound = if dprime == 0 { 1 } else { 2 * entry + 1 };
    ScalingSet {
        values: (0..=bound as i64).map(Rat::int).collect(),
        bound,
        derivation: Derivation { s, m, dprime, pencil_dim: 2 * s * m, entry_degree: entry },
    }
}

/// Desk-scale parameters. Every set is a prefix of its deterministic
/// enumeration; the caps are recorded in the set metadata.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeskParams {
    /// ℓ = 4^κ.
    pub kappa: u32,
    /// Block dimension d of the generalized-ABP points (dimension d·ℓ).
    pub blockdim: usize,
    pub h1_cap: usize,
    pub t_cap: usize,
    pub ttilde_cap: usize,
    pub beta_cap: usize,
}

impl Default for DeskParams {
    fn default() -> DeskParams {
        DeskParams { kappa: 1, blockdim: 1, h1_cap: 2, t_cap: 2, ttilde_cap: 3, beta_cap: 2 }
    }
}

fn capped(v: Vec<Rat>, cap: usize) -> Vec<Rat> {
    v.into_iter().take(cap.max(1)).collect()
}

/// Ĥ₁ = { α·p + q⊗I_d : p ∈ H₁, q ∈ H₀, α ∈ T } over K, with H₀ the
/// embedded generator set in D and H₁ the generalized-ABP strong set.
pub fn strong_hs_height1(n: usize, s: usize, params: &DeskParams) -> Result<HittingSet<KElem>, AssemblyError> {
    let n = n.max(1);
    let sched = fsgen::schedule(n, 1, 1, 1, Mode::Desk, params.kappa)?;
    let alg = sched.algebra()?;
    let h0 = fsgen::hitting_set_in_d(&sched)?;
    let h1 = genabp::strong_hitting_set_genabp(n, 2 * s.max(1), params.blockdim, alg, params.h1_cap)?;
    if h0.is_empty() || h1.is_empty() {
        return Err(AssemblyError::Infeasible("empty component set".into()));
    }
    let d = params.blockdim;
    let dim = d * alg.ell;
    let t = capped(scaling_set(s, dim, 1).values, params.t_cap);
    let mut points = vec![];
    for alpha in &t {
        let ak = KElem::rat(alg.ell, alpha.clone());
        for p in &h1.points {
            for q in &h0.points {
                let mats: Vec<Mat<KElem>> =
                    p.matrices.iter().zip(&q.matrices).map(|(pk, qk)| pk.scale(&ak).add(&qk.kron_identity(d))).collect();
                let certs: Vec<_> = mats.iter().map(certify_nonsingular).collect();
                let det_nonzero = certs.iter().all(|c| c.nonsingular);
                let method = describe(&certs[0].method);
                points.push(HitPoint { matrices: mats, cert: Certification { det_nonzero, sigma_chain_ok: None, method } });
            }
        }
    }
    let meta = Meta {
        n,
        s: Some(s),
        height: Some(1),
        dim,
        field: "K".into(),
        ell: alg.ell,
        kappa: alg.kappa(),
        big_l: alg.ell.trailing_zeros(),
        blockdim: Some(d),
        mode: "desk".into(),
        count: points.len(),
        notes: vec![
            format!("|H0| = {}, |H1| = {}, |T| = {} (cap {})", h0.len(), h1.len(), t.len(), params.t_cap),
            format!("H1: {}", h1.meta.notes.join("; ")),
        ],
        ..Meta::default()
    };
    Ok(HittingSet { meta, points })
}

/// ω ↦ t₁, z ↦ t₂ on reduced representatives.
pub fn transfer_point(point: &[Mat<KElem>], t1: &Rat, t2: &Rat) -> Result<Vec<Mat<Rat>>, FieldError> {
    point
        .iter()
        .map(|m| {
            let data = m.data().iter().map(|e| e.eval_at_rationals(t1, t2)).collect::<Result<Vec<_>, _>>()?;
            Ok(Mat::new((), m.rows(), m.cols(), data).unwrap())
        })
        .collect()
}

/// T̃: the scaling set for entries of degree ≤ ℓ/2 in (ω, z).
fn ttilde(s: usize, dim: usize, ell: usize, cap: usize) -> Vec<Rat> {
    capped(scaling_set(s, dim, (ell / 2).max(1)).values, cap)
}

/// A hitting set enumerated lazily over ℚ.
pub trait PointSource {
    fn meta(&self) -> Meta;
    /// Visit points in enumeration order until `f` breaks; returns the number
    /// visited.
    fn for_each(&self, f: &mut dyn FnMut(usize, Vec<Mat<Rat>>) -> ControlFlow<()>) -> usize;
    /// Component points carrying certification records.
    fn certifications(&self) -> usize;

    fn collect(&self) -> HittingSet<Rat> {
        let mut points = vec![];
        self.for_each(&mut |_, p| {
            points.push(HitPoint {
                matrices: p,
                cert: Certification { det_nonzero: true, sigma_chain_ok: None, method: "transferred".into() },
            });
            ControlFlow::Continue(())
        });
        let mut meta = self.meta();
        meta.count = points.len();
        HittingSet { meta, points }
    }
}

/// Ĥ₁ transferred to ℚ over T̃ × T̃.
pub struct Height1 {
    pub k_set: HittingSet<KElem>,
    pub ttilde: Vec<Rat>,
}

impl Height1 {
    pub fn build(n: usize, s: usize, params: &DeskParams) -> Result<Height1, AssemblyError> {
        let k_set = strong_hs_height1(n, s, params)?;
        let ttilde = ttilde(s, k_set.meta.dim, k_set.meta.ell, params.ttilde_cap);
        Ok(Height1 { k_set, ttilde })
    }
}

impl PointSource for Height1 {
    fn meta(&self) -> Meta {
        let mut m = self.k_set.meta.clone();
        m.field = "Q".into();
        m.notes.push(format!("transferred over T̃ × T̃, T̃ = {:?}", self.ttilde.iter().map(Rat::to_string).collect::<Vec<_>>()));
        m
    }

    fn for_each(&self, f: &mut dyn FnMut(usize, Vec<Mat<Rat>>) -> ControlFlow<()>) -> usize {
        let mut idx = 0;
        for kp in &self.k_set.points {
            for t1 in &self.ttilde {
                for t2 in &self.ttilde {
                    let Ok(p) = transfer_point(&kp.matrices, t1, t2) else { continue };
                    idx += 1;
                    if f(idx - 1, p).is_break() {
                        return idx;
                    }
                }
            }
        }
        idx
    }

    fn certifications(&self) -> usize {
        self.k_set.points.iter().filter(|p| p.cert.det_nonzero).count()
    }
}

/// H̃₂ = { α·p + q⊗I₂ } with q ∈ Ĥ₁ (transferred), p from the
/// degree-1 Kronecker generator over the n·dim² block variables, α ∈ T.
pub struct Height2 {
    pub shifts: HittingSet<KElem>,
    pub ttilde: Vec<Rat>,
    pub betas: Vec<Rat>,
    pub alphas: Vec<Rat>,
    pub s: usize,
}

impl Height2 {
    pub fn build(n: usize, s: usize, params: &DeskParams) -> Result<Height2, AssemblyError> {
        let shifts = strong_hs_height1(n, s, params)?;
        let dim = shifts.meta.dim;
        let ttilde = ttilde(s, dim, shifts.meta.ell, params.ttilde_cap);
        // β = 0, 1 collapse the Kronecker map; the enumeration starts at 2.
        let betas = (2..2 + params.beta_cap.max(1) as i64).map(Rat::int).collect();
        let alphas = capped(scaling_set(s, 2 * dim, 1).values, params.t_cap);
        Ok(Height2 { shifts, ttilde, betas, alphas, s })
    }

    fn dim(&self) -> usize {
        self.shifts.meta.dim
    }

    /// B_k(β) ⊗ N with B_k(β)_{ij} = β^{(k−1)·dim² + i·dim + j} and N the 2×2
    /// nilpotent shift.
    fn fs_part(&self, k: usize, beta: &Rat) -> Mat<Rat> {
        let dim = self.dim();
        let b = Mat::from_fn(&(), dim, dim, |i, j| beta.pow(((k - 1) * dim * dim + i * dim + j) as u32));
        let nil = Mat::from_rows((), vec![vec![Rat::int(0), Rat::int(1)], vec![Rat::int(0), Rat::int(0)]]).unwrap();
        b.kron(&nil)
    }
}

impl PointSource for Height2 {
    fn meta(&self) -> Meta {
        let m = &self.shifts.meta;
        Meta {
            n: m.n,
            s: Some(self.s),
            height: Some(2),
            dim: 2 * m.dim,
            field: "Q".into(),
            ell: m.ell,
            kappa: m.kappa,
            big_l: m.big_l,
            blockdim: m.blockdim,
            mode: "desk".into(),
            count: 0,
            notes: vec![
                format!("{} shift points from the height-1 set", self.shifts.len()),
                format!("truncation degree 1, β ∈ {:?}", self.betas.iter().map(Rat::to_string).collect::<Vec<_>>()),
                format!("α ∈ {:?}", self.alphas.iter().map(Rat::to_string).collect::<Vec<_>>()),
                format!("T̃ = {:?}", self.ttilde.iter().map(Rat::to_string).collect::<Vec<_>>()),
            ],
            ..Meta::default()
        }
    }

    fn for_each(&self, f: &mut dyn FnMut(usize, Vec<Mat<Rat>>) -> ControlFlow<()>) -> usize {
        let n = self.shifts.meta.n;
        let fs: Vec<Vec<Mat<Rat>>> = self.betas.iter().map(|b| (1..=n).map(|k| self.fs_part(k, b)).collect()).collect();
        let mut idx = 0;
        for q in &self.shifts.points {
            for t1 in &self.ttilde {
                for t2 in &self.ttilde {
                    let Ok(qr) = transfer_point(&q.matrices, t1, t2) else { continue };
                    let lifted: Vec<Mat<Rat>> = qr.iter().map(|m| m.kron_identity(2)).collect();
                    for fsb in &fs {
                        for alpha in &self.alphas {
                            let p = lifted.iter().zip(fsb).map(|(l, b)| l.add(&b.scale(alpha))).collect();
                            idx += 1;
                            if f(idx - 1, p).is_break() {
                                return idx;
                            }
                        }
                    }
                }
            }
        }
        idx
    }

    fn certifications(&self) -> usize {
        self.shifts.points.iter().filter(|p| p.cert.det_nonzero).count()
    }
}

/// The rational hitting set for formulas of the given height (≤ 2).
pub fn point_source(n: usize, s: usize, height: usize, params: &DeskParams) -> Result<Box<dyn PointSource>, AssemblyError> {
    match height {
        0 | 1 => Ok(Box::new(Height1::build(n, s, params)?)),
        2 => Ok(Box::new(Height2::build(n, s, params)?)),
        h => Err(AssemblyError::Infeasible(format!("inversion height {h} > 2"))),
    }
}

pub fn hs_height2(n: usize, s: usize, params: &DeskParams) -> Result<HittingSet<Rat>, AssemblyError> {
    Ok(Height2::build(n, s, params)?.collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Zero,
    Nonzero,
    LikelyZero,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlackboxReport {
    pub verdict: Verdict,
    pub witness_index: Option<usize>,
    pub witness_point: Option<Vec<Mat<Rat>>>,
    pub points_checked: usize,
    pub not_defined: usize,
    pub certifications_checked: usize,
    pub height: usize,
    pub dim: usize,
}

/// Evaluate the oracle over the height-appropriate set in order; the first
/// defined nonzero value is the witness. `None` from the oracle means
/// not defined.
pub fn blackbox_test(
    oracle: &mut dyn FnMut(&[Mat<Rat>]) -> Option<Mat<Rat>>,
    n: usize,
    s: usize,
    height: usize,
    params: &DeskParams,
) -> Result<BlackboxReport, AssemblyError> {
    let src = point_source(n, s, height, params)?;
    let mut witness = None;
    let mut not_defined = 0;
    let checked = src.for_each(&mut |i, p| match oracle(&p) {
        None => {
            not_defined += 1;
            ControlFlow::Continue(())
        }
        Some(v) if v.is_zero() => ControlFlow::Continue(()),
        Some(_) => {
            witness = Some((i, p));
            ControlFlow::Break(())
        }
    });
    let (verdict, witness_index, witness_point) = match witness {
        Some((i, p)) => (Verdict::Nonzero, Some(i), Some(p)),
        None => (Verdict::Zero, None, None),
    };
    Ok(BlackboxReport {
        verdict,
        witness_index,
        witness_point,
        points_checked: checked,
        not_defined,
        certifications_checked: src.certifications(),
        height,
        dim: src.meta().dim,
    })
}

/// blackbox_test with the formula as oracle; the witness is re-evaluated by
/// the generic evaluator before being reported.
pub fn test_formula(f: &Formula, height: Option<usize>, params: &DeskParams) -> Result<BlackboxReport, AssemblyError> {
    let h = height.unwrap_or(f.height());
    if f.height() > h {
        return Err(AssemblyError::Infeasible(format!("formula height {} exceeds {h}", f.height())));
    }
    let mut oracle = |p: &[Mat<Rat>]| eval_rat(f, p).ok().and_then(|r| r.value().cloned());
    let rep = blackbox_test(&mut oracle, f.nvars().max(1), f.size(), h, params)?;
    if let Some(p) = &rep.witness_point {
        let again = eval(f, p, p[0].rows())?;
        assert!(again.is_defined_nonzero(), "witness failed re-verification");
    }
    Ok(rep)
}

#[derive(Debug, Clone, Serialize)]
pub struct RandomReport {
    pub verdict: Verdict,
    pub dim: Option<usize>,
    pub trial: Option<usize>,
    pub witness_point: Option<Vec<Mat<Rat>>>,
    pub evaluations: usize,
}

pub const RANDOM_ENTRY_RANGE: i64 = 5;

/// `trials` uniform points per dimension 1..=max_dim with entries in
/// [−5, 5]; a defined nonzero value is re-verified and returned.
pub fn random_oracle_test(f: &Formula, max_dim: usize, trials: usize, seed: u64) -> RandomReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = f.nvars().max(1);
    let mut evaluations = 0;
    for dim in 1..=max_dim {
        for trial in 0..trials {
            let point: Vec<Mat<Rat>> = (0..n)
                .map(|_| Mat::from_fn(&(), dim, dim, |_, _| Rat::int(rng.gen_range(-RANDOM_ENTRY_RANGE..=RANDOM_ENTRY_RANGE))))
                .collect();
            evaluations += 1;
            if let Ok(EvalResult::Value(v)) = eval_rat(f, &point) {
                if !v.is_zero() && eval(f, &point, dim).is_ok_and(|r| r.is_defined_nonzero()) {
                    return RandomReport {
                        verdict: Verdict::Nonzero,
                        dim: Some(dim),
                        trial: Some(trial),
                        witness_point: Some(point),
                        evaluations,
                    };
                }
            }
        }
    }
    RandomReport { verdict: Verdict::LikelyZero, dim: None, trial: None, witness_point: None, evaluations }
}

/// Smallest subformula (by size, then enumeration order) still satisfying
/// `bad`; `f` itself if none of its proper subformulas does.
pub fn minimize(f: &Formula, bad: &mut dyn FnMut(&Formula) -> bool) -> Formula {
    fn subs(f: &Formula, out: &mut Vec<Formula>) {
        match f.node() {
            Node::Var(_) | Node::Const(_) => {}
            Node::Add(a, b) | Node::Mul(a, b) => {
                out.push(a.clone());
                out.push(b.clone());
                subs(a, out);
                subs(b, out);
            }
            Node::Inv(a) => {
                out.push(a.clone());
                subs(a, out);
            }
        }
    }
    let mut all = vec![];
    subs(f, &mut all);
    all.sort_by_key(Formula::size);
    all.into_iter().find(|g| bad(g)).unwrap_or_else(|| f.clone())
}
