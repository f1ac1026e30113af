//! Vector fields as first-order operators, symbolic and on jets.

use crate::chart::{Chart, Point};
use crate::error::Result;
use crate::expr::Expr;
use crate::jet::Jet;
use crate::scalar::{Algebra, Scalar};
use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub chart: Chart,
    pub comps: Vec<Expr>,
}

impl VectorField {
    pub fn new(chart: Chart, comps: Vec<Expr>) -> Self {
        assert_eq!(comps.len(), chart.arity());
        VectorField { chart, comps }
    }

    /// Coordinate field along `slot`, scaled by `c`.
    pub fn coordinate(chart: Chart, slot: usize, c: i64) -> Self {
        let mut comps = vec![Expr::zero(); chart.arity()];
        comps[slot] = Expr::int(c);
        VectorField { chart, comps }
    }

    /// `V(f) = V^a d_a f`, symbolically.
    pub fn apply(&self, f: &Expr) -> Expr {
        Expr::sum(
            self.comps
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero_const())
                .map(|(a, c)| c.mul(&f.diff(a))),
        )
    }

    pub fn jets<S: Scalar>(&self, p: &Point<S>, order: usize) -> Result<Vec<Jet<S>>> {
        self.comps.iter().map(|c| c.jet(p, order)).collect()
    }

    pub fn values<S: Scalar>(&self, p: &Point<S>) -> Result<Vec<S>> {
        self.comps.iter().map(|c| c.value(p)).collect()
    }

    pub fn add(&self, o: &VectorField) -> VectorField {
        let comps = self
            .comps
            .iter()
            .zip(&o.comps)
            .map(|(a, b)| a.add(b))
            .collect();
        VectorField::new(self.chart, comps)
    }

    pub fn scale(&self, c: &Expr) -> VectorField {
        VectorField::new(self.chart, self.comps.iter().map(|a| a.mul(c)).collect())
    }
}

/// A field `c0 + lambda c1`, affine in the spectral parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineField {
    pub c0: VectorField,
    pub c1: VectorField,
}

impl AffineField {
    pub fn at(&self, lambda: &BigRational) -> VectorField {
        self.c0.add(&self.c1.scale(&Expr::constant(lambda.clone())))
    }
}

/// `V(f)` on jets; the result has the order of `f` minus one (or of `V`).
pub fn apply_jet<S: Scalar>(v: &[Jet<S>], f: &Jet<S>) -> Jet<S> {
    let k = v
        .iter()
        .map(|c| c.order())
        .min()
        .unwrap_or(0)
        .min(f.order() - 1);
    let mut acc = f.partial(0).truncate(k).scale(&S::zero());
    for (a, c) in v.iter().enumerate() {
        if !c.vanishes() {
            acc = acc.add(&c.mul(&f.partial(a)));
        }
    }
    acc
}

/// `[U, V]^a = U(V^a) - V(U^a)` on component jets.
pub fn commutator_jets<S: Scalar>(u: &[Jet<S>], v: &[Jet<S>]) -> Vec<Jet<S>> {
    (0..u.len())
        .map(|a| apply_jet(u, &v[a]).sub(&apply_jet(v, &u[a])))
        .collect()
}

/// Components of `[U, V]` at `p`.
pub fn commutator_at<S: Scalar>(u: &VectorField, v: &VectorField, p: &Point<S>) -> Result<Vec<S>> {
    let uj = u.jets(p, 1)?;
    let vj = v.jets(p, 1)?;
    Ok(commutator_jets(&uj, &vj)
        .into_iter()
        .map(|j| j.value().clone())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::second::*;
    use crate::scalar::int;

    #[test]
    fn commutator_of_x_dy_and_dx() {
        // [x d_y, d_x] = -d_y
        let mut c = vec![Expr::zero(); 4];
        c[Y] = Expr::var(X);
        let u = VectorField::new(Chart::Second, c);
        let v = VectorField::coordinate(Chart::Second, X, 1);
        let p = Point::new(Chart::Second, vec![int(1), int(2), int(3), int(4)]).unwrap();
        let r = commutator_at(&u, &v, &p).unwrap();
        assert_eq!(r, vec![int(0), int(0), int(0), int(-1)]);
    }
}
