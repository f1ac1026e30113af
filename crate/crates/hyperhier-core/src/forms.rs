//! Two-forms on four-dimensional charts, stored as antisymmetric arrays
//! with `(a ^ b)_{mn} = a_m b_n - a_n b_m`.

use crate::chart::{Chart, Point};
use crate::error::Result;
use crate::expr::Expr;
use crate::jet::Jet;
use crate::scalar::{Algebra, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct TwoForm {
    pub chart: Chart,
    pub c: [[Expr; 4]; 4],
}

/// Index triples of the independent components of a 3-form.
pub const TRIPLES: [[usize; 3]; 4] = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];

impl TwoForm {
    pub fn zero(chart: Chart) -> TwoForm {
        TwoForm {
            chart,
            c: std::array::from_fn(|_| std::array::from_fn(|_| Expr::zero())),
        }
    }

    /// Wedge product of two one-forms given by coordinate components.
    pub fn wedge(chart: Chart, a: &[Expr; 4], b: &[Expr; 4]) -> TwoForm {
        TwoForm {
            chart,
            c: std::array::from_fn(|m| {
                std::array::from_fn(|n| a[m].mul(&b[n]).sub(&a[n].mul(&b[m])))
            }),
        }
    }

    pub fn add(&self, o: &TwoForm) -> TwoForm {
        TwoForm {
            chart: self.chart,
            c: std::array::from_fn(|m| std::array::from_fn(|n| self.c[m][n].add(&o.c[m][n]))),
        }
    }

    pub fn scale(&self, k: &Expr) -> TwoForm {
        TwoForm {
            chart: self.chart,
            c: std::array::from_fn(|m| std::array::from_fn(|n| self.c[m][n].mul(k))),
        }
    }

    pub fn values<S: Scalar>(&self, p: &Point<S>) -> Result<[[S; 4]; 4]> {
        let mut out: [[S; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| S::zero()));
        for m in 0..4 {
            for n in (m + 1)..4 {
                let v = self.c[m][n].value(p)?;
                out[n][m] = v.neg();
                out[m][n] = v;
            }
        }
        Ok(out)
    }

    pub fn jets<S: Scalar>(&self, p: &Point<S>, order: usize) -> Result<Vec<Vec<Jet<S>>>> {
        self.c
            .iter()
            .map(|row| row.iter().map(|e| e.jet(p, order)).collect())
            .collect()
    }
}

/// Coefficient of `dx0 ^ dx1 ^ dx2 ^ dx3` in `a ^ b`.
pub fn wedge_top<S: Scalar>(a: &[[S; 4]; 4], b: &[[S; 4]; 4]) -> S {
    let t = |i: usize, j: usize, k: usize, l: usize| a[i][j].mul(&b[k][l]);
    t(0, 1, 2, 3)
        .sub(&t(0, 2, 1, 3))
        .add(&t(0, 3, 1, 2))
        .add(&t(1, 2, 0, 3))
        .sub(&t(1, 3, 0, 2))
        .add(&t(2, 3, 0, 1))
}

/// Independent components `(dS)_{mnr}` over [`TRIPLES`] at the jet center.
pub fn exterior_derivative<S: Scalar>(s: &[Vec<Jet<S>>]) -> [S; 4] {
    std::array::from_fn(|t| {
        let [m, n, r] = TRIPLES[t];
        s[n][r]
            .partial(m)
            .value()
            .add(s[r][m].partial(n).value())
            .add(s[m][n].partial(r).value())
    })
}

/// `(i_V S)_n = V^m S_{mn}`.
pub fn interior<S: Scalar>(v: &[S], s: &[[S; 4]; 4]) -> [S; 4] {
    std::array::from_fn(|n| (0..4).fold(S::zero(), |acc, m| acc.add(&v[m].mul(&s[m][n]))))
}

/// Determinant of a 4x4 matrix by cofactor expansion.
pub fn det4<S: Algebra>(m: &[[S; 4]; 4]) -> S {
    let det3 = |r: [usize; 3], c: [usize; 3]| {
        let e = |i: usize, j: usize| &m[r[i]][c[j]];
        e(0, 0)
            .mul(&e(1, 1).mul(e(2, 2)).sub(&e(1, 2).mul(e(2, 1))))
            .sub(&e(0, 1).mul(&e(1, 0).mul(e(2, 2)).sub(&e(1, 2).mul(e(2, 0)))))
            .add(&e(0, 2).mul(&e(1, 0).mul(e(2, 1)).sub(&e(1, 1).mul(e(2, 0)))))
    };
    let mut acc: Option<S> = None;
    for j in 0..4 {
        let cols: Vec<usize> = (0..4).filter(|&c| c != j).collect();
        let minor = det3([1, 2, 3], [cols[0], cols[1], cols[2]]);
        let t = m[0][j].mul(&minor);
        let t = if j % 2 == 1 { t.neg() } else { t };
        acc = Some(match acc {
            None => t,
            Some(a) => a.add(&t),
        });
    }
    acc.expect("four columns")
}
