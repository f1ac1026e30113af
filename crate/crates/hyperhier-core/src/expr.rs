//! Rational-function expressions over chart coordinates and `sigma`.
//!
//! Trees are built only through the folding constructors below, so a
//! printed expression parses back to the identical tree.

use crate::chart::{Chart, Point};
use crate::error::{Error, Result};
use crate::jet::{Jet, JetSpace, MAX_ORDER};
use crate::scalar::{int, rational_text, Algebra, Scalar};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

#[derive(Debug, PartialEq, Eq)]
pub enum Node {
    Const(BigRational),
    Var(usize),
    Sigma,
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Div(Expr, Expr),
    Neg(Expr),
    /// Non-negative integer power; negative powers are stored as `1/b^n`.
    Pow(Expr, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr(Arc<Node>);

impl Expr {
    pub fn node(&self) -> &Node {
        &self.0
    }

    fn key(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    fn wrap(n: Node) -> Expr {
        Expr(Arc::new(n))
    }

    pub fn constant(q: BigRational) -> Expr {
        Expr::wrap(Node::Const(q))
    }

    pub fn int(n: i64) -> Expr {
        Expr::constant(int(n))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn var(slot: usize) -> Expr {
        Expr::wrap(Node::Var(slot))
    }

    pub fn sigma() -> Expr {
        Expr::wrap(Node::Sigma)
    }

    pub fn as_const(&self) -> Option<&BigRational> {
        match self.node() {
            Node::Const(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_zero_const(&self) -> bool {
        self.as_const().is_some_and(|q| q.is_zero())
    }

    pub fn add(&self, o: &Expr) -> Expr {
        match (self.as_const(), o.as_const()) {
            (Some(a), Some(b)) => Expr::constant(a + b),
            (Some(a), _) if a.is_zero() => o.clone(),
            (_, Some(b)) if b.is_zero() => self.clone(),
            _ => Expr::wrap(Node::Add(self.clone(), o.clone())),
        }
    }

    pub fn sub(&self, o: &Expr) -> Expr {
        match (self.as_const(), o.as_const()) {
            (Some(a), Some(b)) => Expr::constant(a - b),
            (Some(a), _) if a.is_zero() => o.neg(),
            (_, Some(b)) if b.is_zero() => self.clone(),
            _ => Expr::wrap(Node::Sub(self.clone(), o.clone())),
        }
    }

    pub fn mul(&self, o: &Expr) -> Expr {
        match (self.as_const(), o.as_const()) {
            (Some(a), Some(b)) => Expr::constant(a * b),
            (Some(a), _) if a.is_zero() => Expr::zero(),
            (_, Some(b)) if b.is_zero() => Expr::zero(),
            (Some(a), _) if a.is_one() => o.clone(),
            (_, Some(b)) if b.is_one() => self.clone(),
            _ => Expr::wrap(Node::Mul(self.clone(), o.clone())),
        }
    }

    pub fn div(&self, o: &Expr) -> Expr {
        match (self.as_const(), o.as_const()) {
            (Some(a), Some(b)) if !b.is_zero() => Expr::constant(a / b),
            (_, Some(b)) if b.is_one() => self.clone(),
            (Some(a), None) if a.is_zero() => Expr::zero(),
            _ => Expr::wrap(Node::Div(self.clone(), o.clone())),
        }
    }

    pub fn neg(&self) -> Expr {
        match self.node() {
            Node::Const(q) => Expr::constant(-q),
            Node::Neg(a) => a.clone(),
            _ => Expr::wrap(Node::Neg(self.clone())),
        }
    }

    pub fn pow(&self, n: i64) -> Expr {
        if n < 0 {
            return Expr::one().div(&self.pow(-n));
        }
        match (n, self.as_const()) {
            (0, _) => Expr::one(),
            (1, _) => self.clone(),
            (_, Some(q)) => Expr::constant(q.powi(n as u32)),
            _ => Expr::wrap(Node::Pow(self.clone(), n as u32)),
        }
    }

    pub fn scale(&self, q: &BigRational) -> Expr {
        Expr::constant(q.clone()).mul(self)
    }

    /// Sum of a list; empty sums are zero.
    pub fn sum<I: IntoIterator<Item = Expr>>(items: I) -> Expr {
        items.into_iter().fold(Expr::zero(), |acc, e| acc.add(&e))
    }

    /// Symbolic partial derivative along coordinate `slot`.
    pub fn diff(&self, slot: usize) -> Expr {
        let mut memo = HashMap::new();
        self.diff_memo(slot, &mut memo)
    }

    /// Symbolic partial derivative along the listed slots.
    pub fn diffs(&self, slots: &[usize]) -> Expr {
        slots.iter().fold(self.clone(), |e, &s| e.diff(s))
    }

    fn diff_memo(&self, slot: usize, memo: &mut HashMap<usize, Expr>) -> Expr {
        if let Some(d) = memo.get(&self.key()) {
            return d.clone();
        }
        let d = match self.node() {
            Node::Const(_) | Node::Sigma => Expr::zero(),
            Node::Var(i) => Expr::int((*i == slot) as i64),
            Node::Add(a, b) => a.diff_memo(slot, memo).add(&b.diff_memo(slot, memo)),
            Node::Sub(a, b) => a.diff_memo(slot, memo).sub(&b.diff_memo(slot, memo)),
            Node::Mul(a, b) => {
                let da = a.diff_memo(slot, memo);
                let db = b.diff_memo(slot, memo);
                da.mul(b).add(&a.mul(&db))
            }
            Node::Div(a, b) => {
                // (a' - (a/b) b') / b reuses this node
                let da = a.diff_memo(slot, memo);
                let db = b.diff_memo(slot, memo);
                if db.is_zero_const() {
                    da.div(b)
                } else {
                    da.sub(&self.mul(&db)).div(b)
                }
            }
            Node::Neg(a) => a.diff_memo(slot, memo).neg(),
            Node::Pow(a, n) => {
                let da = a.diff_memo(slot, memo);
                Expr::int(*n as i64).mul(&a.pow(*n as i64 - 1)).mul(&da)
            }
        };
        memo.insert(self.key(), d.clone());
        d
    }

    /// Replaces coordinate slots and/or sigma.
    pub fn substitute(&self, vars: &dyn Fn(usize) -> Option<Expr>, sigma: Option<&Expr>) -> Expr {
        let mut memo = HashMap::new();
        self.subst_memo(vars, sigma, &mut memo)
    }

    fn subst_memo(
        &self,
        vars: &dyn Fn(usize) -> Option<Expr>,
        sigma: Option<&Expr>,
        memo: &mut HashMap<usize, Expr>,
    ) -> Expr {
        if let Some(d) = memo.get(&self.key()) {
            return d.clone();
        }
        let mut go = |e: &Expr| e.subst_memo(vars, sigma, memo);
        let r = match self.node() {
            Node::Const(_) => self.clone(),
            Node::Var(i) => vars(*i).unwrap_or_else(|| self.clone()),
            Node::Sigma => sigma.cloned().unwrap_or_else(|| self.clone()),
            Node::Add(a, b) => {
                let a = go(a);
                a.add(&go(b))
            }
            Node::Sub(a, b) => {
                let a = go(a);
                a.sub(&go(b))
            }
            Node::Mul(a, b) => {
                let a = go(a);
                a.mul(&go(b))
            }
            Node::Div(a, b) => {
                let a = go(a);
                a.div(&go(b))
            }
            Node::Neg(a) => go(a).neg(),
            Node::Pow(a, n) => go(a).pow(*n as i64),
        };
        memo.insert(self.key(), r.clone());
        r
    }

    pub fn bind_sigma(&self, sigma: &BigRational) -> Expr {
        self.substitute(&|_| None, Some(&Expr::constant(sigma.clone())))
    }

    pub fn has_sigma(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.walk(&mut |n| matches!(n, Node::Sigma), &mut seen)
    }

    /// Coordinate slots the expression mentions.
    pub fn slots(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        let mut seen = BTreeSet::new();
        self.collect_slots(&mut out, &mut seen);
        out
    }

    fn collect_slots(&self, out: &mut BTreeSet<usize>, seen: &mut BTreeSet<usize>) {
        if !seen.insert(self.key()) {
            return;
        }
        match self.node() {
            Node::Var(i) => {
                out.insert(*i);
            }
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.collect_slots(out, seen);
                b.collect_slots(out, seen);
            }
            Node::Neg(a) | Node::Pow(a, _) => a.collect_slots(out, seen),
            Node::Const(_) | Node::Sigma => {}
        }
    }

    fn walk(&self, pred: &mut dyn FnMut(&Node) -> bool, seen: &mut BTreeSet<usize>) -> bool {
        if !seen.insert(self.key()) {
            return false;
        }
        if pred(self.node()) {
            return true;
        }
        match self.node() {
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.walk(pred, seen) || b.walk(pred, seen)
            }
            Node::Neg(a) | Node::Pow(a, _) => a.walk(pred, seen),
            _ => false,
        }
    }

    /// Evaluates in any algebra; `vars[i]` is the value of slot `i`.
    pub fn eval<A: Algebra>(
        &self,
        chart: Chart,
        vars: &[A],
        konst: &dyn Fn(&BigRational) -> A,
    ) -> Result<A> {
        let mut memo = HashMap::new();
        self.eval_memo(chart, vars, konst, &mut memo)
    }

    fn eval_memo<A: Algebra>(
        &self,
        chart: Chart,
        vars: &[A],
        konst: &dyn Fn(&BigRational) -> A,
        memo: &mut HashMap<usize, A>,
    ) -> Result<A> {
        if let Some(v) = memo.get(&self.key()) {
            return Ok(v.clone());
        }
        let mut go = |e: &Expr| e.eval_memo(chart, vars, konst, memo);
        let v = match self.node() {
            Node::Const(q) => konst(q),
            Node::Var(i) => vars
                .get(*i)
                .cloned()
                .ok_or_else(|| Error::IndexRange(format!("coordinate slot {i}")))?,
            Node::Sigma => return Err(Error::UnboundSigma),
            Node::Add(a, b) => {
                let a = go(a)?;
                a.add(&go(b)?)
            }
            Node::Sub(a, b) => {
                let a = go(a)?;
                a.sub(&go(b)?)
            }
            Node::Mul(a, b) => {
                let a = go(a)?;
                a.mul(&go(b)?)
            }
            Node::Div(a, b) => {
                let a = go(a)?;
                let bv = go(b)?;
                a.div(&bv).ok_or_else(|| Error::Pole {
                    denominator: b.print(chart),
                })?
            }
            Node::Neg(a) => go(a)?.neg(),
            Node::Pow(a, n) => go(a)?.powi(*n),
        };
        memo.insert(self.key(), v.clone());
        Ok(v)
    }

    /// Jet of the expression at `p` through order `k`.
    pub fn jet<S: Scalar>(&self, p: &Point<S>, k: usize) -> Result<Jet<S>> {
        if k > MAX_ORDER {
            return Err(Error::OrderCap {
                requested: k,
                cap: MAX_ORDER,
            });
        }
        self.jet_in(&JetSpace::new(p.coords.clone(), k), p.chart)
    }

    /// Jet in a prepared space; no order cap.
    pub fn jet_in<S: Scalar>(&self, space: &JetSpace<S>, chart: Chart) -> Result<Jet<S>> {
        let vars: Vec<Jet<S>> = (0..space.center.len()).map(|i| space.variable(i)).collect();
        self.eval(chart, &vars, &|q| space.constant(S::from_rational(q)))
    }

    /// Value at `p`.
    pub fn value<S: Scalar>(&self, p: &Point<S>) -> Result<S> {
        self.eval(p.chart, &p.coords, &|q| S::from_rational(q))
    }

    pub fn print(&self, chart: Chart) -> String {
        self.fmt_prec(chart).0
    }

    // a unary minus on the right of a binary operator is parenthesised
    fn fmt_right(&self, chart: Chart) -> (String, u8) {
        let (s, p) = self.fmt_prec(chart);
        if matches!(self.node(), Node::Neg(_)) {
            (s, 0)
        } else {
            (s, p)
        }
    }

    // precedence: 0 sum, 1 product, 2 power, 3 atom
    fn fmt_prec(&self, chart: Chart) -> (String, u8) {
        let wrap = |(s, p): (String, u8), min: u8| {
            if p >= min {
                s
            } else {
                format!("({s})")
            }
        };
        match self.node() {
            Node::Const(q) => {
                let s = rational_text(q);
                if q.is_negative() {
                    (s, 0)
                } else if !q.is_integer() {
                    (s, 1)
                } else {
                    (s, 3)
                }
            }
            Node::Var(i) => (chart.name(*i), 3),
            Node::Sigma => ("sigma".into(), 3),
            Node::Add(a, b) | Node::Sub(a, b) => {
                let op = if matches!(self.node(), Node::Add(..)) {
                    "+"
                } else {
                    "-"
                };
                let l = a.fmt_prec(chart).0;
                let r = wrap(b.fmt_right(chart), 1);
                (format!("{l} {op} {r}"), 0)
            }
            Node::Mul(a, b) | Node::Div(a, b) => {
                let op = if matches!(self.node(), Node::Mul(..)) {
                    "*"
                } else {
                    "/"
                };
                let l = wrap(a.fmt_prec(chart), 1);
                let r = wrap(b.fmt_right(chart), 2);
                (format!("{l}{op}{r}"), 1)
            }
            Node::Neg(a) => {
                let inner = wrap(a.fmt_prec(chart), 3);
                (format!("-{inner}"), 2)
            }
            Node::Pow(a, n) => {
                let b = wrap(a.fmt_prec(chart), 3);
                (format!("{b}^{n}"), 2)
            }
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl std::ops::$tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, o: Expr) -> Expr {
                Expr::$m(&self, &o)
            }
        }
        impl std::ops::$tr<&Expr> for &Expr {
            type Output = Expr;
            fn $m(self, o: &Expr) -> Expr {
                Expr::$m(self, o)
            }
        }
        impl std::ops::$tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, o: &Expr) -> Expr {
                Expr::$m(&self, o)
            }
        }
        impl std::ops::$tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, o: Expr) -> Expr {
                Expr::$m(self, &o)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(&self)
    }
}

impl std::ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

/// Algebra instance so that the generic evaluator can build expressions.
impl Algebra for Expr {
    fn add(&self, o: &Self) -> Self {
        Expr::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Expr::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Expr::mul(self, o)
    }
    fn neg(&self) -> Self {
        Expr::neg(self)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        if o.is_zero_const() {
            None
        } else {
            Some(Expr::div(self, o))
        }
    }
    fn vanishes(&self) -> bool {
        self.is_zero_const()
    }
    fn one_like(&self) -> Self {
        Expr::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::second::*;
    use crate::scalar::rat;

    fn q() -> Expr {
        Expr::var(W) * Expr::var(X) + Expr::var(Z) * Expr::var(Y)
    }

    #[test]
    fn folding() {
        assert_eq!(Expr::int(2) + Expr::int(3), Expr::int(5));
        assert_eq!(Expr::var(W) * Expr::one(), Expr::var(W));
        assert_eq!(Expr::var(W) * Expr::zero(), Expr::zero());
        assert_eq!(Expr::int(1) / Expr::int(2), Expr::constant(rat(1, 2)));
        assert_eq!(Expr::int(3).neg(), Expr::int(-3));
        assert_eq!(Expr::var(X).neg().neg(), Expr::var(X));
    }

    #[test]
    fn derivative_of_inverse_q() {
        let f = Expr::one() / q();
        let p = Point::new(Chart::Second, vec![int(1); 4]).unwrap();
        assert_eq!(f.diff(X).value(&p).unwrap(), rat(-1, 4));
        assert_eq!(f.diffs(&[X, X]).value(&p).unwrap(), rat(1, 4));
    }

    #[test]
    fn pole_names_denominator() {
        let f = Expr::one() / q();
        let p = Point::new(Chart::Second, vec![int(1), int(1), int(1), int(-1)]).unwrap();
        match f.value(&p) {
            Err(Error::Pole { denominator }) => assert_eq!(denominator, "w*x + z*y"),
            other => panic!("expected pole, got {other:?}"),
        }
    }

    #[test]
    fn printing() {
        let e = (Expr::var(Y).neg() / Expr::var(W)).pow(2) / q();
        assert_eq!(e.print(Chart::Second), "(-y/w)^2/(w*x + z*y)");
        assert_eq!(Expr::sigma().print(Chart::Second), "sigma");
        assert_eq!(Expr::constant(rat(-1, 2)).print(Chart::Second), "-1/2");
    }
}
