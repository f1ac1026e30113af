//! Sparse multivariate polynomials with exact rational coefficients.

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::scalar::{int, Algebra, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;

fn q0() -> BigRational {
    <BigRational as Zero>::zero()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Poly {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Poly {
        Poly::monomial(nvars, &[(i, 1)], int(1))
    }

    /// `c * prod x_i^e_i` from `(i, e)` pairs.
    pub fn monomial(nvars: usize, powers: &[(usize, u32)], c: BigRational) -> Poly {
        let mut e = vec![0; nvars];
        for &(i, k) in powers {
            e[i] += k;
        }
        let mut p = Poly::zero(nvars);
        p.add_term(e, c);
        p
    }

    /// Dense polynomial of total degree at most `degree`; `coeff` is called
    /// once per monomial, in graded order.
    pub fn dense(nvars: usize, degree: u32, coeff: &mut dyn FnMut() -> i64) -> Poly {
        fn rec(i: usize, left: u32, e: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if i == e.len() {
                out.push(e.clone());
                return;
            }
            for k in 0..=left {
                e[i] = k;
                rec(i + 1, left - k, e, out);
            }
            e[i] = 0;
        }
        let mut exps = Vec::new();
        rec(0, degree, &mut vec![0; nvars], &mut exps);
        exps.sort_by_key(|e| (e.iter().sum::<u32>(), std::cmp::Reverse(e.clone())));
        let mut p = Poly::zero(nvars);
        for e in exps {
            p.add_term(e, int(coeff()));
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(q0);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn coeff(&self, e: &[u32]) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(q0)
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&k| k as usize).sum())
            .max()
            .unwrap_or(0)
    }

    /// Degree in variable `i`.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(q0()),
            1 => {
                let (e, c) = self.terms.iter().next().expect("one term");
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * int(e[i] as i64));
            }
        }
        out
    }

    /// Antiderivative in variable `i` with no `x_i`-free part.
    pub fn antiderivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            f[i] += 1;
            let k = int(f[i] as i64);
            out.add_term(f, c / k);
        }
        out
    }

    /// Whether the polynomial involves only the listed variables.
    pub fn depends_only_on(&self, vars: &[usize]) -> bool {
        self.terms.keys().all(|e| {
            e.iter()
                .enumerate()
                .all(|(i, &k)| k == 0 || vars.contains(&i))
        })
    }

    /// The part of the polynomial that involves only the listed variables.
    pub fn part_in(&self, vars: &[usize]) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e.iter()
                .enumerate()
                .all(|(i, &k)| k == 0 || vars.contains(&i))
            {
                out.add_term(e.clone(), c.clone());
            }
        }
        out
    }

    /// Substitutes `x_i = v`; the result still has `nvars` slots.
    pub fn restrict(&self, i: usize, v: &BigRational) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            f[i] = 0;
            out.add_term(f, c * v.powi(e[i]));
        }
        out
    }

    /// Definite integral over `x_i` in `[a, b]`.
    pub fn integrate(&self, i: usize, a: &BigRational, b: &BigRational) -> Poly {
        let anti = self.antiderivative(i);
        anti.restrict(i, b).sub(&anti.restrict(i, a))
    }

    pub fn eval<S: Scalar>(&self, x: &[S]) -> S {
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let mut t = S::from_rational(c);
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t = t.mul(&xi.powi(k));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn to_expr(&self) -> Expr {
        Expr::sum(self.terms.iter().map(|(e, c)| {
            let m = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .fold(Expr::one(), |acc, (i, &k)| {
                    acc.mul(&Expr::var(i).pow(k as i64))
                });
            Expr::constant(c.clone()).mul(&m)
        }))
    }

    /// Converts a polynomial expression; fails on a non-constant divisor.
    pub fn from_expr(e: &Expr, chart: Chart) -> Result<Poly> {
        let n = chart.arity();
        let vars: Vec<Poly> = (0..n).map(|i| Poly::var(n, i)).collect();
        e.eval(chart, &vars, &|q| Poly::constant(n, q.clone()))
            .map_err(|err| match err {
                Error::Pole { .. } => Error::NotPolynomial,
                other => other,
            })
    }

    /// Univariate polynomial in the first variable from coefficients.
    pub fn univariate(coeffs: &[BigRational]) -> Poly {
        let mut p = Poly::zero(1);
        for (k, c) in coeffs.iter().enumerate() {
            p.add_term(vec![k as u32], c.clone());
        }
        p
    }

    /// Evaluates a univariate polynomial at `t`.
    pub fn eval_at(&self, t: &BigRational) -> BigRational {
        self.eval(std::slice::from_ref(t))
    }

    /// Text with variable names, highest degree first.
    pub fn print(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        names[i].to_string()
                    } else {
                        format!("{}^{}", names[i], k)
                    }
                })
                .collect();
            let neg = c < &q0();
            let mag = if neg { -c.clone() } else { c.clone() };
            let coef = crate::scalar::rational_text(&mag);
            let body = match (mono.is_empty(), coef.as_str()) {
                (true, _) => coef.clone(),
                (false, "1") => mono.join("*"),
                (false, _) => format!("{}*{}", coef, mono.join("*")),
            };
            if idx == 0 {
                out.push_str(if neg { "-" } else { "" });
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

impl Algebra for Poly {
    fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
    fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
    fn mul(&self, o: &Self) -> Self {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            for (f, d) in &o.terms {
                let g: Vec<u32> = e.iter().zip(f).map(|(a, b)| a + b).collect();
                out.add_term(g, c * d);
            }
        }
        out
    }
    fn neg(&self) -> Self {
        self.scale(&int(-1))
    }
    fn div(&self, o: &Self) -> Option<Self> {
        let c = o.as_constant()?;
        if c.is_zero() {
            return None;
        }
        Some(self.scale(&(BigRational::from_integer(BigInt::from(1)) / c)))
    }
    fn vanishes(&self) -> bool {
        self.terms.is_empty()
    }
    fn one_like(&self) -> Self {
        Poly::constant(self.nvars, int(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::second::*;
    use crate::parse::parse_expression;
    use crate::scalar::rat;

    #[test]
    fn from_expr_and_back() {
        let e = parse_expression("(w + 2*x)^2 - x*y/3", Chart::Second).unwrap();
        let p = Poly::from_expr(&e, Chart::Second).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.coeff(&[0, 0, 1, 1]), rat(-1, 3));
        let back = Poly::from_expr(&p.to_expr(), Chart::Second).unwrap();
        assert_eq!(back, p);
        assert!(Poly::from_expr(
            &parse_expression("1/w", Chart::Second).unwrap(),
            Chart::Second
        )
        .is_err());
    }

    #[test]
    fn calculus() {
        let p = Poly::monomial(4, &[(X, 2), (W, 1)], int(3));
        assert_eq!(
            p.derivative(X),
            Poly::monomial(4, &[(X, 1), (W, 1)], int(6))
        );
        assert_eq!(p.antiderivative(X).derivative(X), p);
        // int_0^2 3 w x^2 dx = 8 w
        assert_eq!(
            p.integrate(X, &int(0), &int(2)),
            Poly::monomial(4, &[(W, 1)], int(8))
        );
    }

    #[test]
    fn printing() {
        let p = Poly::univariate(&[int(1), int(0), rat(-2, 3)]);
        assert_eq!(p.print(&["sigma"]), "-2/3*sigma^2 + 1");
    }
}
