//! Linear pencils of formulas, the shifted realization c(I − M)⁻¹b and
//! zero testing of recognizable generalized series.

use serde::Serialize;

use crate::field::{Field, Rat, Ring};
use crate::formula::{eval, EvalResult, Formula, Node};
use crate::genabp::GenABP;
use crate::linalg::Mat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RealizationError {
    #[error("formula is not defined at the shift point (inverse at {0})")]
    NotDefinedAtShift(String),
    #[error("shift point has {got} matrices, formula needs {need}")]
    Arity { need: usize, got: usize },
    #[error("shift matrices must be square of one size")]
    Dim,
}

/// L(x) = A₀ + Σ_k A_k x_k over ℚ, in the bordered form
/// [[1, a, c], [0, B, b], [0, 0, 1]] whose inverse has the formula value at
/// position (1, p).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearPencil {
    pub size: usize,
    /// coeffs[0] = A₀, coeffs[k] = A_k.
    pub coeffs: Vec<Mat<Rat>>,
    /// 0-based output position.
    pub out: (usize, usize),
}

impl LinearPencil {
    pub fn nvars(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// L(point) = A₀⊗I + Σ A_k⊗p_k.
    pub fn at<R: Field>(&self, point: &[Mat<R>]) -> Mat<R> {
        let m = point[0].rows();
        let ctx = point[0].ctx().clone();
        let conv = |a: &Mat<Rat>| a.convert::<R>(&ctx, |r| R::from_rat(&ctx, r));
        let mut out = conv(&self.coeffs[0]).kron_identity(m);
        for (k, a) in self.coeffs.iter().enumerate().skip(1) {
            if a.is_zero() {
                continue;
            }
            out = out.add(&conv(a).kron(&point[k - 1]));
        }
        out
    }

    /// Output block of L(point)⁻¹, `None` when L(point) is singular.
    pub fn value_at<R: Field>(&self, point: &[Mat<R>]) -> Option<Mat<R>> {
        let m = point[0].rows();
        let inv = self.at(point).inverse().ok()?;
        Some(inv.block(self.out.0 + 1, self.out.1 + 1, m).unwrap())
    }
}

/// Sparse pencil under construction: (row, col, var, coeff), var 0 = constant.
struct Draft {
    size: usize,
    entries: Vec<(usize, usize, usize, Rat)>,
}

impl Draft {
    fn leaf(var: usize, c: Rat) -> Draft {
        Draft { size: 2, entries: vec![(0, 0, 0, Rat::int(1)), (1, 1, 0, Rat::int(1)), (0, 1, var, c.neg())] }
    }

    fn shifted(self, off: usize) -> impl Iterator<Item = (usize, usize, usize, Rat)> {
        self.entries.into_iter().map(move |(i, j, v, c)| (i + off, j + off, v, c))
    }

    /// [[L_f, A], [0, L_g]] with the given −1 entries of A.
    fn join(f: Draft, g: Draft, links: &[(usize, usize)]) -> Draft {
        let p = f.size;
        let size = p + g.size;
        let mut entries: Vec<_> = f.entries;
        entries.extend(g.shifted(p));
        for &(i, j) in links {
            entries.push((i, p + j, 0, Rat::int(-1)));
        }
        Draft { size, entries }
    }

    /// Core T = [[B, b], [a, c]] bordered by −e_lastᵀ and e_last.
    fn invert(f: Draft) -> Draft {
        let p = f.size;
        // T sits at indices 1..p−1 of the new pencil; old row 0 becomes its
        // last row, all other old indices keep their position.
        let row_map = |i: usize| if i == 0 { p - 1 } else { i };
        let mut entries = vec![(0, 0, 0, Rat::int(1)), (p, p, 0, Rat::int(1)), (0, p - 1, 0, Rat::int(-1)), (p - 1, p, 0, Rat::int(1))];
        for (i, j, v, c) in f.entries {
            if i == p - 1 || j == 0 {
                // bottom row (e_p) and first column (e_1) of the old pencil are dropped
                continue;
            }
            entries.push((row_map(i), j, v, c));
        }
        Draft { size: p + 1, entries }
    }
}

fn draft(f: &Formula) -> Draft {
    match f.node() {
        Node::Var(i) => Draft::leaf(*i, Rat::int(1)),
        Node::Const(c) => Draft::leaf(0, c.clone()),
        Node::Add(a, b) => {
            let (da, db) = (draft(a), draft(b));
            let (p, q) = (da.size, db.size);
            Draft::join(da, db, &[(0, 0), (p - 1, q - 1)])
        }
        Node::Mul(a, b) => {
            let da = draft(a);
            let p = da.size;
            Draft::join(da, draft(b), &[(p - 1, 0)])
        }
        Node::Inv(a) => Draft::invert(draft(a)),
    }
}

/// Pencil of size ≤ 2·size(f) over variables x1..xn (n ≥ nvars(f)).
pub fn build_pencil_n(f: &Formula, n: usize) -> LinearPencil {
    let n = n.max(f.nvars());
    let d = draft(f);
    let p = d.size;
    let mut coeffs = vec![Mat::<Rat>::zeros(&(), p, p); n + 1];
    for (i, j, v, c) in d.entries {
        let cur = coeffs[v].get(i, j).add(&c);
        coeffs[v].set(i, j, cur);
    }
    LinearPencil { size: p, coeffs, out: (0, p - 1) }
}

pub fn build_pencil(f: &Formula) -> LinearPencil {
    build_pencil_n(f, f.nvars())
}

/// Σ_t a_t·x_{k_t}·b_t with m×m coefficients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenLinForm<R: Ring> {
    pub terms: Vec<LinTerm<R>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinTerm<R: Ring> {
    pub a: Mat<R>,
    /// 1-based variable.
    pub var: usize,
    pub b: Mat<R>,
}

/// Inclusion of coefficient matrices into larger matrix algebras.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Iota {
    /// a ↦ a ⊗ I_k.
    KronRight,
    /// a ↦ I_k ⊗ a.
    KronLeft,
}

impl Iota {
    pub fn apply<R: Ring>(self, a: &Mat<R>, k: usize) -> Mat<R> {
        match self {
            Iota::KronRight => a.kron_identity(k),
            Iota::KronLeft => a.identity_kron(k),
        }
    }
}

impl<R: Ring> GenLinForm<R> {
    pub fn zero() -> GenLinForm<R> {
        GenLinForm { terms: vec![] }
    }

    pub fn is_trivial(&self) -> bool {
        self.terms.iter().all(|t| t.a.is_zero() || t.b.is_zero())
    }

    /// Value at a point of dimension k·m under ι.
    pub fn eval(&self, point: &[Mat<R>], m: usize, iota: Iota) -> Mat<R> {
        let dim = point[0].rows();
        let k = dim / m;
        let ctx = point[0].ctx().clone();
        let mut acc = Mat::zeros(&ctx, dim, dim);
        for t in &self.terms {
            if t.a.is_zero() || t.b.is_zero() {
                continue;
            }
            let v = iota.apply(&t.a, k).mul(&point[t.var - 1]).mul(&iota.apply(&t.b, k));
            acc = acc.add(&v);
        }
        acc
    }
}

/// c(I − M)⁻¹b with c a 1×s row, M an s×s matrix of generalized linear forms
/// and b an s×1 column, all over M_m.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearRep<R: Ring> {
    pub s: usize,
    pub m: usize,
    pub nvars: usize,
    pub c: Vec<Mat<R>>,
    pub mm: Vec<Vec<GenLinForm<R>>>,
    pub b: Vec<Mat<R>>,
    pub shift: Vec<Mat<R>>,
}

/// Realize f(x + u) as a recognizable generalized series via the pencil:
/// L(x + u) = L(u) + L_lin(x), M = −L(u)⁻¹·L_lin.
pub fn realize_shifted<R: Field>(f: &Formula, u: &[Mat<R>]) -> Result<LinearRep<R>, RealizationError> {
    let n = f.nvars().max(u.len());
    if u.len() < f.nvars() {
        return Err(RealizationError::Arity { need: f.nvars(), got: u.len() });
    }
    let m = u[0].rows();
    if u.iter().any(|x| x.rows() != m || x.cols() != m) {
        return Err(RealizationError::Dim);
    }
    if let EvalResult::NotDefined(p) = eval(f, u, m).map_err(|_| RealizationError::Dim)? {
        return Err(RealizationError::NotDefinedAtShift(p));
    }
    let pencil = build_pencil_n(f, n);
    let s = pencil.size;
    let ctx = u[0].ctx().clone();
    let g = pencil.at(u).inverse().map_err(|_| RealizationError::NotDefinedAtShift("pencil".into()))?;
    let blk = |i: usize, j: usize| g.block(i + 1, j + 1, m).unwrap();
    let id = Mat::<R>::identity(&ctx, m);
    let zero = Mat::<R>::zeros(&ctx, m, m);
    let c: Vec<Mat<R>> = (0..s).map(|j| if j == pencil.out.0 { id.clone() } else { zero.clone() }).collect();
    let b: Vec<Mat<R>> = (0..s).map(|i| blk(i, pencil.out.1)).collect();
    let gb: Vec<Vec<Mat<R>>> = (0..s).map(|i| (0..s).map(|l| blk(i, l)).collect()).collect();
    let mut mm = vec![vec![GenLinForm::zero(); s]; s];
    for (k, a) in pencil.coeffs.iter().enumerate().skip(1) {
        for l in 0..s {
            for j in 0..s {
                let coef = a.get(l, j);
                if coef.is_zero() {
                    continue;
                }
                let sc = R::from_rat(&ctx, &coef.neg());
                for i in 0..s {
                    if gb[i][l].is_zero() {
                        continue;
                    }
                    let term = gb[i][l].scale(&sc);
                    push_term(&mut mm[i][j], term, k, &id);
                }
            }
        }
    }
    Ok(LinearRep { s, m, nvars: n, c, mm, b, shift: u.to_vec() })
}

/// Merge a·x_k·I into the form, combining with an existing x_k·I term.
fn push_term<R: Field>(form: &mut GenLinForm<R>, a: Mat<R>, k: usize, id: &Mat<R>) {
    if let Some(t) = form.terms.iter_mut().find(|t| t.var == k && t.b == *id) {
        t.a = t.a.add(&a);
    } else {
        form.terms.push(LinTerm { a, var: k, b: id.clone() });
    }
}

impl<R: Field> LinearRep<R> {
    /// M(q) as an (s·dim)×(s·dim) matrix, q of dimension k·m, ι = a⊗I_k.
    pub fn m_at(&self, q: &[Mat<R>]) -> Mat<R> {
        let dim = q[0].rows();
        let ctx = q[0].ctx().clone();
        let mut out = Mat::zeros(&ctx, self.s * dim, self.s * dim);
        for i in 0..self.s {
            for j in 0..self.s {
                let f = &self.mm[i][j];
                if f.terms.is_empty() {
                    continue;
                }
                out.set_sub(i * dim, j * dim, &f.eval(q, self.m, Iota::KronRight));
            }
        }
        out
    }

    /// c·M(q)^k·b for k = 0..=n.
    pub fn series_terms(&self, q: &[Mat<R>], n: usize) -> Vec<Mat<R>> {
        let dim = q[0].rows();
        let k = dim / self.m;
        let ctx = q[0].ctx().clone();
        let stack = |v: &[Mat<R>]| {
            let mut out = Mat::zeros(&ctx, self.s * dim, dim);
            for (i, x) in v.iter().enumerate() {
                out.set_sub(i * dim, 0, &x.kron_identity(k));
            }
            out
        };
        let mut row = Mat::zeros(&ctx, dim, self.s * dim);
        for (j, x) in self.c.iter().enumerate() {
            row.set_sub(0, j * dim, &x.kron_identity(k));
        }
        let col = stack(&self.b);
        let mq = self.m_at(q);
        let mut out = vec![];
        for _ in 0..=n {
            out.push(row.mul(&col));
            row = row.mul(&mq);
        }
        out
    }

    /// Series value with q substituted, i.e. c(I − M(q))⁻¹b, if defined.
    pub fn value_at(&self, q: &[Mat<R>]) -> Option<Mat<R>> {
        let dim = q[0].rows();
        let k = dim / self.m;
        let ctx = q[0].ctx().clone();
        let big = Mat::identity(&ctx, self.s * dim).sub(&self.m_at(q));
        let mut col = Mat::zeros(&ctx, self.s * dim, dim);
        for (i, x) in self.b.iter().enumerate() {
            col.set_sub(i * dim, 0, &x.kron_identity(k));
        }
        let y = big.solve(&col).ok()?;
        let mut acc = Mat::zeros(&ctx, dim, dim);
        for (j, x) in self.c.iter().enumerate() {
            acc = acc.add(&x.kron_identity(k).mul(&y.sub_matrix(j * dim, 0, dim, dim).unwrap()));
        }
        Some(acc)
    }
}

/// The homogeneous degree-d part c·M^d·b as a generalized ABP.
pub fn truncate<R: Field>(rep: &LinearRep<R>, d: usize) -> GenABP<R> {
    GenABP { width: rep.s, m: rep.m, nvars: rep.nvars, c: rep.c.clone(), layers: vec![rep.mm.clone(); d], b: rep.b.clone() }
}

/// After ψ (each x_k ↦ generic m×m matrix of fresh noncommuting letters
/// z_{i,j,k}), an ordinary recognizable series of dimension s·m:
/// start rows (m × sm), one sm×sm matrix per letter, end columns (sm × m).
#[derive(Debug, Clone)]
pub struct PsiRep<R: Ring> {
    pub dim: usize,
    pub start: Mat<R>,
    /// ((i, j, k), A_{ijk}), 0-based i, j and 1-based k.
    pub letters: Vec<((usize, usize, usize), Mat<R>)>,
    pub end: Mat<R>,
}

pub fn psi_expand<R: Field>(rep: &LinearRep<R>) -> PsiRep<R> {
    let (s, m) = (rep.s, rep.m);
    let dim = s * m;
    let ctx = rep.c[0].ctx().clone();
    let mut start = Mat::zeros(&ctx, m, dim);
    for (p, cp) in rep.c.iter().enumerate() {
        start.set_sub(0, p * m, cp);
    }
    let mut end = Mat::zeros(&ctx, dim, m);
    for (q, bq) in rep.b.iter().enumerate() {
        end.set_sub(q * m, 0, bq);
    }
    let mut letters = vec![];
    for k in 1..=rep.nvars {
        for i in 0..m {
            for j in 0..m {
                let mut a: Mat<R> = Mat::zeros(&ctx, dim, dim);
                for p in 0..s {
                    for q in 0..s {
                        for t in rep.mm[p][q].terms.iter().filter(|t| t.var == k) {
                            for al in 0..m {
                                let x = t.a.get(al, i);
                                if x.is_zero() {
                                    continue;
                                }
                                for be in 0..m {
                                    let y = t.b.get(j, be);
                                    if y.is_zero() {
                                        continue;
                                    }
                                    let (r, c) = (p * m + al, q * m + be);
                                    let v = a.get(r, c).add(&x.mul(y));
                                    a.set(r, c, v);
                                }
                            }
                        }
                    }
                }
                if !a.is_zero() {
                    letters.push(((i, j, k), a));
                }
            }
        }
    }
    PsiRep { dim, start, letters, end }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ZeroTest {
    Zero,
    NonzeroAtDegree(usize),
}

/// Reduced row basis kept in echelon form (pivot column per row).
struct RowSpace<R: Field> {
    rows: Vec<(usize, Vec<R>)>,
}

impl<R: Field> RowSpace<R> {
    fn new() -> Self {
        RowSpace { rows: vec![] }
    }

    /// Insert v; true if it enlarged the space.
    fn insert(&mut self, mut v: Vec<R>) -> bool {
        for (piv, r) in &self.rows {
            let f = v[*piv].clone();
            if !f.is_zero() {
                for (x, y) in v.iter_mut().zip(r) {
                    if !y.is_zero() {
                        *x = x.sub(&f.mul(y));
                    }
                }
            }
        }
        let Some(piv) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[piv].inv().unwrap();
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = x.mul(&inv);
            }
        }
        for (_, r) in self.rows.iter_mut() {
            let f = r[piv].clone();
            if !f.is_zero() {
                for (x, y) in r.iter_mut().zip(&v) {
                    if !y.is_zero() {
                        *x = x.sub(&f.mul(y));
                    }
                }
            }
        }
        self.rows.push((piv, v));
        true
    }
}

fn row_times<R: Field>(v: &[R], a: &Mat<R>) -> Vec<R> {
    let ctx = a.ctx();
    let mut out = vec![R::zero(ctx); a.cols()];
    for (i, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in a.row(i).iter().enumerate() {
            if !y.is_zero() {
                out[j] = out[j].add(&x.mul(y));
            }
        }
    }
    out
}

fn kills<R: Field>(v: &[R], end: &Mat<R>) -> bool {
    row_times(v, end).iter().all(|x| x.is_zero())
}

/// Least d ≤ 2sm − 1 with S^{d} ≠ 0, or Zero. Uses the degree-d row spaces
/// U_d = span{start·A_w : |w| = d}; stops early once U_0 + … + U_d is stable.
pub fn zero_test_rep<R: Field>(rep: &LinearRep<R>) -> ZeroTest {
    let psi = psi_expand(rep);
    zero_test_psi(&psi, 2 * rep.s * rep.m)
}

pub fn zero_test_psi<R: Field>(psi: &PsiRep<R>, degrees: usize) -> ZeroTest {
    let mut cur = RowSpace::new();
    for i in 0..psi.start.rows() {
        cur.insert(psi.start.row(i).to_vec());
    }
    let mut total = RowSpace::new();
    for d in 0..degrees {
        if cur.rows.iter().any(|(_, v)| !kills(v, &psi.end)) {
            return ZeroTest::NonzeroAtDegree(d);
        }
        let mut grew = false;
        for (_, v) in &cur.rows {
            grew |= total.insert(v.clone());
        }
        if !grew && d > 0 {
            return ZeroTest::Zero;
        }
        let mut next = RowSpace::new();
        for (_, v) in &cur.rows {
            for (_, a) in &psi.letters {
                next.insert(row_times(v, a));
            }
        }
        if next.rows.is_empty() {
            return ZeroTest::Zero;
        }
        cur = next;
    }
    ZeroTest::Zero
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn q(rows: &[&[i64]]) -> Mat<Rat> {
        Mat::from_rows((), rows.iter().map(|r| r.iter().map(|&v| Rat::int(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn leaf_pencil_value() {
        let p = build_pencil(&parse("x1").unwrap());
        assert_eq!(p.size, 2);
        assert_eq!(p.value_at(&[q(&[&[3]])]).unwrap(), q(&[&[3]]));
    }

    #[test]
    fn pencil_sizes_and_values() {
        let a = q(&[&[2, 1], &[1, 1]]);
        let b = q(&[&[0, 1], &[-1, 3]]);
        for text in ["x1*x2", "x1 + x2", "inv(x1)", "inv(x1*x2 - x2*x1)", "inv(x1 + x1*inv(x2)*x1) + inv(x1+x2) - inv(x1)", "3/2"] {
            let f = parse(text).unwrap();
            let p = build_pencil_n(&f, 2);
            assert!(p.size <= 2 * f.size(), "{text}");
            let pt = [a.clone(), b.clone()];
            let direct = eval(&f, &pt, 2).unwrap();
            assert_eq!(p.value_at(&pt).as_ref(), direct.value(), "{text}");
        }
    }

    #[test]
    fn double_inverse_at_zero_is_the_converse_gap() {
        let f = parse("inv(inv(x1))").unwrap();
        let p = build_pencil(&f);
        let zero = [q(&[&[0]])];
        assert!(matches!(eval(&f, &zero, 1).unwrap(), EvalResult::NotDefined(_)));
        assert!(p.value_at(&zero).is_some());
    }

    #[test]
    fn constant_term_is_the_value_at_the_shift() {
        let f = parse("inv(x1*x2 - x2*x1)").unwrap();
        let u = [q(&[&[1, 1], &[0, 1]]), q(&[&[1, 0], &[1, 1]])];
        let rep = realize_shifted(&f, &u).unwrap();
        let zero = [Mat::zeros(&(), 2, 2), Mat::zeros(&(), 2, 2)];
        let t = rep.series_terms(&zero, 0);
        assert_eq!(Some(&t[0]), eval(&f, &u, 2).unwrap().value());
        assert_eq!(zero_test_rep(&rep), ZeroTest::NonzeroAtDegree(0));
    }

    #[test]
    fn hua_realization_is_zero() {
        let f = parse("inv(x1 + x1*inv(x2)*x1) + inv(x1+x2) - inv(x1)").unwrap();
        let u = [q(&[&[2]]), q(&[&[3]])];
        let rep = realize_shifted(&f, &u).unwrap();
        assert_eq!(zero_test_rep(&rep), ZeroTest::Zero);
    }

    #[test]
    fn undefined_shift_rejected() {
        let f = parse("inv(x1)").unwrap();
        assert_eq!(realize_shifted(&f, &[q(&[&[0]])]), Err(RealizationError::NotDefinedAtShift("inv".into())));
    }

    #[test]
    fn zero_boundary_is_zero() {
        let f = parse("x1*x2").unwrap();
        let u = [q(&[&[1]]), q(&[&[1]])];
        let mut rep = realize_shifted(&f, &u).unwrap();
        for c in rep.c.iter_mut() {
            *c = Mat::zeros(&(), 1, 1);
        }
        assert_eq!(zero_test_rep(&rep), ZeroTest::Zero);
    }

    #[test]
    fn truncation_width() {
        let f = parse("x1*x2").unwrap();
        let rep = realize_shifted(&f, &[q(&[&[1]]), q(&[&[2]])]).unwrap();
        let t = truncate(&rep, 2);
        assert_eq!(t.width, rep.s);
        assert_eq!(t.layers.len(), 2);
        assert!(truncate(&rep, 0).layers.is_empty());
    }
}
