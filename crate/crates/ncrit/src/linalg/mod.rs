//! Dense exact matrices over any [`Ring`]; elimination-based routines need a
//! [`Field`].

pub mod modp;
pub mod qmat;

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::field::{Field, Ring};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    Shape(usize, usize, usize, usize),
    #[error("field descriptors differ")]
    FieldMismatch,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not square")]
    NotSquare,
    #[error("index out of range")]
    OutOfRange,
}

#[derive(Clone, PartialEq)]
pub struct Mat<R: Ring> {
    rows: usize,
    cols: usize,
    ctx: R::Ctx,
    data: Vec<R>,
}

impl<R: Ring> Mat<R> {
    pub fn new(ctx: R::Ctx, rows: usize, cols: usize, data: Vec<R>) -> Result<Mat<R>, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape(rows, cols, data.len(), 1));
        }
        if data.iter().any(|e| e.ctx() != ctx) {
            return Err(LinalgError::FieldMismatch);
        }
        Ok(Mat { rows, cols, ctx, data })
    }

    pub fn from_rows(ctx: R::Ctx, rows: Vec<Vec<R>>) -> Result<Mat<R>, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(LinalgError::Shape(r, c, 0, 0));
        }
        Mat::new(ctx, r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(ctx: &R::Ctx, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Mat<R> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, ctx: ctx.clone(), data }
    }

    pub fn zeros(ctx: &R::Ctx, rows: usize, cols: usize) -> Mat<R> {
        Mat { rows, cols, ctx: ctx.clone(), data: vec![R::zero(ctx); rows * cols] }
    }

    pub fn identity(ctx: &R::Ctx, n: usize) -> Mat<R> {
        let mut m = Mat::zeros(ctx, n, n);
        for i in 0..n {
            m.data[i * n + i] = R::one(ctx);
        }
        m
    }

    /// c·I.
    pub fn scalar(c: R, n: usize) -> Mat<R> {
        let ctx = c.ctx();
        let mut m = Mat::zeros(&ctx, n, n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn ctx(&self) -> &R::Ctx {
        &self.ctx
    }
    pub fn data(&self) -> &[R] {
        &self.data
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// 0-based access.
    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() }))
    }

    fn same_shape(&self, o: &Mat<R>) -> Result<(), LinalgError> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(LinalgError::Shape(self.rows, self.cols, o.rows, o.cols));
        }
        if self.ctx != o.ctx {
            return Err(LinalgError::FieldMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Mat<R>) -> Result<Mat<R>, LinalgError> {
        self.same_shape(o)?;
        Ok(self.zip(o, |a, b| a.add(b)))
    }

    pub fn try_sub(&self, o: &Mat<R>) -> Result<Mat<R>, LinalgError> {
        self.same_shape(o)?;
        Ok(self.zip(o, |a, b| a.sub(b)))
    }

    pub fn try_mul(&self, o: &Mat<R>) -> Result<Mat<R>, LinalgError> {
        if self.cols != o.rows {
            return Err(LinalgError::Shape(self.rows, self.cols, o.rows, o.cols));
        }
        if self.ctx != o.ctx {
            return Err(LinalgError::FieldMismatch);
        }
        let mut out: Mat<R> = Mat::zeros(&self.ctx, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let one = a.is_one();
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let p = if one { b.clone() } else { a.mul(b) };
                    let idx = i * o.cols + j;
                    out.data[idx] = out.data[idx].add(&p);
                }
            }
        }
        Ok(out)
    }

    /// Panicking shorthands for callers that control shapes.
    pub fn add(&self, o: &Mat<R>) -> Mat<R> {
        self.try_add(o).expect("matrix add")
    }
    pub fn sub(&self, o: &Mat<R>) -> Mat<R> {
        self.try_sub(o).expect("matrix sub")
    }
    pub fn mul(&self, o: &Mat<R>) -> Mat<R> {
        self.try_mul(o).expect("matrix mul")
    }

    pub fn neg(&self) -> Mat<R> {
        self.map(|e| e.neg())
    }

    pub fn scale(&self, s: &R) -> Mat<R> {
        if s.is_zero() {
            return Mat::zeros(&self.ctx, self.rows, self.cols);
        }
        self.map(|e| e.mul(s))
    }

    pub fn map(&self, f: impl Fn(&R) -> R) -> Mat<R> {
        Mat { rows: self.rows, cols: self.cols, ctx: self.ctx.clone(), data: self.data.iter().map(f).collect() }
    }

    /// Change of scalar ring.
    pub fn convert<S: Ring>(&self, ctx: &S::Ctx, f: impl Fn(&R) -> S) -> Mat<S> {
        Mat { rows: self.rows, cols: self.cols, ctx: ctx.clone(), data: self.data.iter().map(f).collect() }
    }

    fn zip(&self, o: &Mat<R>, f: impl Fn(&R, &R) -> R) -> Mat<R> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            ctx: self.ctx.clone(),
            data: self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn transpose(&self) -> Mat<R> {
        Mat::from_fn(&self.ctx, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn kron(&self, o: &Mat<R>) -> Mat<R> {
        let (rb, cb) = (o.rows, o.cols);
        Mat::from_fn(&self.ctx, self.rows * rb, self.cols * cb, |i, j| {
            let a = self.get(i / rb, j / cb);
            if a.is_zero() {
                return R::zero(&self.ctx);
            }
            a.mul(o.get(i % rb, j % cb))
        })
    }

    /// a ⊗ I_k.
    pub fn kron_identity(&self, k: usize) -> Mat<R> {
        if k == 1 {
            return self.clone();
        }
        self.kron(&Mat::identity(&self.ctx, k))
    }

    /// I_k ⊗ a.
    pub fn identity_kron(&self, k: usize) -> Mat<R> {
        if k == 1 {
            return self.clone();
        }
        Mat::identity(&self.ctx, k).kron(self)
    }

    /// Submatrix of shape h×w starting at (r0, c0), 0-based.
    pub fn sub_matrix(&self, r0: usize, c0: usize, h: usize, w: usize) -> Result<Mat<R>, LinalgError> {
        if r0 + h > self.rows || c0 + w > self.cols {
            return Err(LinalgError::OutOfRange);
        }
        Ok(Mat::from_fn(&self.ctx, h, w, |i, j| self.get(r0 + i, c0 + j).clone()))
    }

    /// The m×m block at block position (i, j), 1-based.
    pub fn block(&self, i: usize, j: usize, m: usize) -> Result<Mat<R>, LinalgError> {
        if m == 0 || !self.rows.is_multiple_of(m) || !self.cols.is_multiple_of(m) || i == 0 || j == 0 {
            return Err(LinalgError::OutOfRange);
        }
        if i > self.rows / m || j > self.cols / m {
            return Err(LinalgError::OutOfRange);
        }
        self.sub_matrix((i - 1) * m, (j - 1) * m, m, m)
    }

    /// Overwrite the region starting at (r0, c0), 0-based.
    pub fn set_sub(&mut self, r0: usize, c0: usize, b: &Mat<R>) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    /// Matrix of matrices to one big matrix; all blocks m×m.
    pub fn from_blocks(ctx: &R::Ctx, blocks: &[Vec<Mat<R>>], m: usize) -> Mat<R> {
        let br = blocks.len();
        let bc = blocks.first().map_or(0, |r| r.len());
        let mut out = Mat::zeros(ctx, br * m, bc * m);
        for (i, row) in blocks.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                out.set_sub(i * m, j * m, b);
            }
        }
        out
    }

    /// Block-diagonal sum.
    pub fn direct_sum(blocks: &[Mat<R>]) -> Mat<R> {
        let ctx = blocks[0].ctx.clone();
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(&ctx, n, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_sub(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// If only the entries (i, i+1) and (n−1, 0) are nonzero, return them in
    /// order v₁..v_n.
    pub fn circulant_shift_entries(&self) -> Option<Vec<R>> {
        let n = self.rows;
        if !self.is_square() || n < 2 {
            return None;
        }
        for i in 0..n {
            for j in 0..n {
                if j != (i + 1) % n && !self.get(i, j).is_zero() {
                    return None;
                }
            }
        }
        Some((0..n).map(|i| self.get(i, (i + 1) % n).clone()).collect())
    }
}

impl<R: Field> Mat<R> {
    /// Row echelon form in place with first-nonzero pivoting; returns pivot
    /// columns and the number of row swaps.
    fn echelon(&mut self) -> (Vec<usize>, usize) {
        let mut pivots = vec![];
        let mut swaps = 0;
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                self.swap_rows(p, r);
                swaps += 1;
            }
            let inv = self.get(r, c).inv().unwrap();
            for i in r + 1..self.rows {
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                let f = f.mul(&inv);
                for j in c..self.cols {
                    let t = self.get(r, j);
                    if t.is_zero() {
                        continue;
                    }
                    let v = self.get(i, j).sub(&f.mul(t));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (pivots, swaps)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().echelon().0.len()
    }

    pub fn det(&self) -> Result<R, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare);
        }
        let n = self.rows;
        if let Some(v) = self.circulant_shift_entries() {
            let mut p = R::one(&self.ctx);
            for e in &v {
                p = p.mul(e);
            }
            // the cyclic shift permutation has sign (−1)^{n−1}
            return Ok(if n.is_multiple_of(2) { p.neg() } else { p });
        }
        let mut m = self.clone();
        let (piv, swaps) = m.echelon();
        if piv.len() < n {
            return Ok(R::zero(&self.ctx));
        }
        let mut d = R::one(&self.ctx);
        for i in 0..n {
            d = d.mul(m.get(i, i));
        }
        Ok(if swaps % 2 == 1 { d.neg() } else { d })
    }

    /// Gauss–Jordan inverse.
    pub fn inverse(&self) -> Result<Mat<R>, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare);
        }
        let n = self.rows;
        let ctx = self.ctx.clone();
        let mut a = self.clone();
        let mut b: Mat<R> = Mat::identity(&ctx, n);
        for c in 0..n {
            let p = (c..n).find(|&i| !a.get(i, c).is_zero()).ok_or(LinalgError::Singular)?;
            if p != c {
                a.swap_rows(p, c);
                b.swap_rows(p, c);
            }
            let inv = a.get(c, c).inv().unwrap();
            if !inv.is_one() {
                for j in 0..n {
                    let v = a.get(c, j);
                    if !v.is_zero() {
                        let v = v.mul(&inv);
                        a.set(c, j, v);
                    }
                    let w = b.get(c, j);
                    if !w.is_zero() {
                        let w = w.mul(&inv);
                        b.set(c, j, w);
                    }
                }
            }
            for i in 0..n {
                if i == c {
                    continue;
                }
                let f = a.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let t = a.get(c, j);
                    if !t.is_zero() {
                        let v = a.get(i, j).sub(&f.mul(t));
                        a.set(i, j, v);
                    }
                    let t = b.get(c, j);
                    if !t.is_zero() {
                        let v = b.get(i, j).sub(&f.mul(t));
                        b.set(i, j, v);
                    }
                }
            }
        }
        Ok(b)
    }

    /// Solve A·X = B for square nonsingular A.
    pub fn solve(&self, rhs: &Mat<R>) -> Result<Mat<R>, LinalgError> {
        self.inverse()?.try_mul(rhs)
    }

    /// Some solution of A·x = b (b a column), or `None` if inconsistent.
    pub fn solve_any(&self, rhs: &Mat<R>) -> Option<Mat<R>> {
        let n = self.cols;
        let mut aug = Mat::zeros(&self.ctx, self.rows, n + 1);
        aug.set_sub(0, 0, self);
        aug.set_sub(0, n, rhs);
        let (piv, _) = aug.echelon();
        if piv.last() == Some(&n) {
            return None;
        }
        let mut x = vec![R::zero(&self.ctx); n];
        for (r, &c) in piv.iter().enumerate().rev() {
            let mut acc = aug.get(r, n).clone();
            for j in c + 1..n {
                if !x[j].is_zero() {
                    acc = acc.sub(&aug.get(r, j).mul(&x[j]));
                }
            }
            x[c] = acc.mul(&aug.get(r, c).inv().unwrap());
        }
        Some(Mat { rows: n, cols: 1, ctx: self.ctx.clone(), data: x })
    }
}

impl<R: Ring> fmt::Debug for Mat<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut l = f.debug_list();
        for i in 0..self.rows {
            l.entry(&self.row(i));
        }
        l.finish()
    }
}

impl<R: Ring + fmt::Display> fmt::Display for Mat<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl<R: Ring + Serialize> Serialize for Mat<R> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<&[R]> = (0..self.rows).map(|i| self.row(i)).collect();
        rows.serialize(s)
    }
}

impl<'de, R: Ring + Deserialize<'de>> Deserialize<'de> for Mat<R> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<R>> = Vec::deserialize(d)?;
        let ctx = rows
            .first()
            .and_then(|r| r.first())
            .map(|e| e.ctx())
            .ok_or_else(|| D::Error::custom("empty matrix"))?;
        Mat::from_rows(ctx, rows).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{KElem, Rat};

    fn q(rows: &[&[i64]]) -> Mat<Rat> {
        Mat::from_rows((), rows.iter().map(|r| r.iter().map(|&v| Rat::int(v)).collect()).collect()).unwrap()
    }

    fn mx(l: usize) -> Mat<KElem> {
        let z = KElem::z(l);
        Mat::from_rows(l, vec![vec![KElem::int(l, 0), KElem::int(l, 1)], vec![z, KElem::int(l, 0)]]).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let a = q(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        assert_eq!(Mat::identity(&(), 3).mul(&a), a);
        assert!(a.scale(&Rat::int(0)).is_zero());
    }

    #[test]
    fn shift_square_is_z() {
        let m = mx(2);
        assert_eq!(m.mul(&m), Mat::scalar(KElem::z(2), 2));
        assert_eq!(m.det().unwrap(), KElem::z(2).neg());
    }

    #[test]
    fn inverse_det_rank() {
        assert_eq!(Mat::<Rat>::identity(&(), 4).inverse().unwrap(), Mat::identity(&(), 4));
        assert_eq!(q(&[&[1, 2, 3], &[2, 4, 6]]).rank(), 1);
        let a = q(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let ai = a.inverse().unwrap();
        assert!(a.mul(&ai).is_identity());
        assert_eq!(a.det().unwrap(), Rat::int(18));
        assert_eq!(q(&[&[1, 2], &[2, 4]]).inverse(), Err(LinalgError::Singular));
    }

    #[test]
    fn circulant_det_matches_elimination() {
        let a = q(&[&[0, 2, 0, 0], &[0, 0, 3, 0], &[0, 0, 0, 5], &[7, 0, 0, 0]]);
        let mut b = a.clone();
        b.set(0, 0, Rat::int(0));
        let (piv, swaps) = b.echelon();
        assert_eq!(piv.len(), 4);
        let mut d = Rat::int(1);
        for i in 0..4 {
            d = d.mul(b.get(i, i));
        }
        if swaps % 2 == 1 {
            d = d.neg();
        }
        assert_eq!(a.det().unwrap(), d);
        assert_eq!(d, Rat::int(-210));
    }

    #[test]
    fn kron_and_blocks() {
        let a = q(&[&[1, 2], &[3, 4]]);
        assert_eq!(a.kron(&Mat::identity(&(), 1)), a);
        assert!(Mat::<Rat>::identity(&(), 2).kron(&Mat::identity(&(), 3)).is_identity());
        let i3a = a.identity_kron(3);
        for b in 1..=3 {
            assert_eq!(i3a.block(b, b, 2).unwrap(), a);
        }
        assert!(i3a.block(1, 2, 2).unwrap().is_zero());
        let i6 = Mat::<Rat>::identity(&(), 6);
        assert!(i6.block(1, 1, 3).unwrap().is_identity());
        assert!(i6.block(1, 2, 3).unwrap().is_zero());
        assert!(a.kron_identity(2).block(1, 1, 2).unwrap().is_identity());
        assert_eq!(i6.block(3, 1, 3), Err(LinalgError::OutOfRange));
    }

    #[test]
    fn solve_any_finds_solution() {
        let a = q(&[&[1, 2, 3], &[2, 4, 6]]);
        let b = q(&[&[1], &[2]]);
        let x = a.solve_any(&b).unwrap();
        assert_eq!(a.mul(&x), b);
        assert!(a.solve_any(&q(&[&[1], &[3]])).is_none());
    }

    #[test]
    fn serde_round_trip() {
        let a = q(&[&[1, -2], &[3, 4]]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"[["1","-2"],["3","4"]]"#);
        assert_eq!(serde_json::from_str::<Mat<Rat>>(&s).unwrap(), a);
    }
}
