use super::{Formula, FormulaError, Node};
use crate::field::{Field, Rat};
use crate::linalg::qmat::QMat;
use crate::linalg::{LinalgError, Mat};

#[derive(Debug, Clone, PartialEq)]
pub enum EvalResult<R: Field> {
    Value(Mat<R>),
    /// Path to the inverse gate whose argument was singular.
    NotDefined(String),
}

impl<R: Field> EvalResult<R> {
    pub fn value(&self) -> Option<&Mat<R>> {
        match self {
            EvalResult::Value(m) => Some(m),
            EvalResult::NotDefined(_) => None,
        }
    }

    pub fn is_defined_nonzero(&self) -> bool {
        self.value().is_some_and(|m| !m.is_zero())
    }
}

fn go<R: Field>(f: &Formula, point: &[Mat<R>], ctx: &R::Ctx, m: usize, path: &mut Vec<String>) -> Result<Mat<R>, String> {
    match f.node() {
        Node::Var(i) => Ok(point[i - 1].clone()),
        Node::Const(c) => Ok(Mat::scalar(R::from_rat(ctx, c), m)),
        Node::Add(a, b) | Node::Mul(a, b) => {
            let add = matches!(f.node(), Node::Add(..));
            let tag = if add { "add" } else { "mul" };
            path.push(format!("{tag}.0"));
            let va = go(a, point, ctx, m, path)?;
            path.pop();
            path.push(format!("{tag}.1"));
            let vb = go(b, point, ctx, m, path)?;
            path.pop();
            Ok(if add { va.add(&vb) } else { va.mul(&vb) })
        }
        Node::Inv(a) => {
            path.push("inv".into());
            let va = go(a, point, ctx, m, path)?;
            match va.inverse() {
                Ok(v) => {
                    path.pop();
                    Ok(v)
                }
                Err(LinalgError::Singular) => Err(path.join("/")),
                Err(e) => unreachable!("{e}"),
            }
        }
    }
}

/// Evaluate at an n-tuple of m×m matrices; constants embed as c·I_m.
pub fn eval<R: Field>(f: &Formula, point: &[Mat<R>], m: usize) -> Result<EvalResult<R>, FormulaError> {
    if point.len() < f.nvars() {
        return Err(FormulaError::Arity { need: f.nvars(), got: point.len() });
    }
    if point.iter().any(|p| p.rows() != m || p.cols() != m) {
        return Err(FormulaError::Dim(m));
    }
    let ctx = match point.first() {
        Some(p) => p.ctx().clone(),
        None => return Err(FormulaError::Arity { need: 1, got: 0 }),
    };
    Ok(match go(f, point, &ctx, m, &mut vec![]) {
        Ok(v) => EvalResult::Value(v),
        Err(p) => EvalResult::NotDefined(p),
    })
}

fn go_q(f: &Formula, point: &[QMat], m: usize, path: &mut Vec<String>) -> Result<QMat, String> {
    match f.node() {
        Node::Var(i) => Ok(point[i - 1].clone()),
        Node::Const(c) => Ok(QMat::scalar(c, m)),
        Node::Add(a, b) | Node::Mul(a, b) => {
            let add = matches!(f.node(), Node::Add(..));
            let tag = if add { "add" } else { "mul" };
            path.push(format!("{tag}.0"));
            let va = go_q(a, point, m, path)?;
            path.pop();
            path.push(format!("{tag}.1"));
            let vb = go_q(b, point, m, path)?;
            path.pop();
            Ok(if add { va.add(&vb) } else { va.mul(&vb) })
        }
        Node::Inv(a) => {
            path.push("inv".into());
            let va = go_q(a, point, m, path)?;
            let v = va.inverse().ok_or_else(|| path.join("/"))?;
            path.pop();
            Ok(v)
        }
    }
}

/// Same as `eval` over ℚ, using common-denominator integer matrices.
pub fn eval_rat(f: &Formula, point: &[Mat<Rat>]) -> Result<EvalResult<Rat>, FormulaError> {
    let m = point.first().map_or(0, |p| p.rows());
    if point.len() < f.nvars() || point.is_empty() {
        return Err(FormulaError::Arity { need: f.nvars().max(1), got: point.len() });
    }
    if point.iter().any(|p| p.rows() != m || p.cols() != m) {
        return Err(FormulaError::Dim(m));
    }
    let q: Vec<QMat> = point.iter().map(QMat::from_mat).collect();
    Ok(match go_q(f, &q, m, &mut vec![]) {
        Ok(v) => EvalResult::Value(v.to_mat()),
        Err(p) => EvalResult::NotDefined(p),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Rat, Ring};
    use crate::formula::parse;

    fn q(rows: &[&[i64]]) -> Mat<Rat> {
        Mat::from_rows((), rows.iter().map(|r| r.iter().map(|&v| Rat::int(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn commutator_by_hand() {
        let f = parse("x1*x2 - x2*x1").unwrap();
        let p = q(&[&[1, 1], &[0, 1]]);
        let r = q(&[&[1, 0], &[1, 1]]);
        // pq = [[2,1],[1,1]], qp = [[1,1],[1,2]]
        let v = eval(&f, &[p, r], 2).unwrap();
        assert_eq!(v, EvalResult::Value(q(&[&[1, 0], &[0, -1]])));
    }

    #[test]
    fn singular_inverse_reports_path() {
        let f = parse("inv(x1)").unwrap();
        assert_eq!(eval(&f, &[q(&[&[1, 1], &[1, 1]])], 2).unwrap(), EvalResult::NotDefined("inv".into()));
        let g = parse("x2 + x1*inv(x1 - x1)").unwrap();
        let r = eval(&g, &[q(&[&[1]]), q(&[&[2]])], 1).unwrap();
        assert_eq!(r, EvalResult::NotDefined("add.1/mul.1/inv".into()));
    }

    #[test]
    fn hua_vanishes() {
        let f = parse("inv(x1 + x1*inv(x2)*x1) + inv(x1+x2) - inv(x1)").unwrap();
        let a = q(&[&[2, 1], &[0, 3]]);
        let b = q(&[&[1, 4], &[1, -1]]);
        let v = eval(&f, &[a, b], 2).unwrap();
        assert!(v.value().unwrap().is_zero());
    }

    #[test]
    fn integer_path_agrees() {
        let f = parse("inv(x1 + x1*inv(x2)*x1) + inv(x1+x2) - 1/2*x1*inv(x2)").unwrap();
        let a = q(&[&[2, 1], &[0, 3]]);
        let b = q(&[&[1, 4], &[1, -1]]);
        assert_eq!(eval_rat(&f, &[a.clone(), b.clone()]).unwrap(), eval(&f, &[a.clone(), b.clone()], 2).unwrap());
        let g = parse("x2 + x1*inv(x1 - x1)").unwrap();
        assert_eq!(eval_rat(&g, &[a, b]).unwrap(), EvalResult::NotDefined("add.1/mul.1/inv".into()));
    }

    #[test]
    fn arity_and_dim_errors() {
        let f = parse("x2").unwrap();
        assert_eq!(eval(&f, &[q(&[&[1]])], 1), Err(FormulaError::Arity { need: 2, got: 1 }));
        assert_eq!(eval(&f, &[q(&[&[1]]), q(&[&[1]])], 2), Err(FormulaError::Dim(2)));
        let c = parse("3").unwrap();
        assert_eq!(eval(&c, &[q(&[&[1]])], 1).unwrap().value().unwrap().get(0, 0), &Rat::int(3));
        assert!(!Rat::int(3).is_one());
    }
}
