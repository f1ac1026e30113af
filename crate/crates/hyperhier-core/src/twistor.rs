//! Twistor coordinates as series in the spectral parameter, their Lax
//! annihilation, and the residue form of the twistor integral.

use crate::chart::{second, Chart, Point};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::heavenly::{q_expr, LaxPair};
use crate::jet::Jet;
use crate::poly::Poly;
use crate::recursion::{ratio_u, recursion_step_poly_on, sigma_poly_expr, CoeffTable};
use crate::scalar::{Algebra, Scalar};
use crate::vfield::apply_jet;
use num_rational::BigRational;

/// `sum_{i=m}^{N} c_i lambda^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSeries {
    pub min_deg: i32,
    pub coeffs: Vec<Expr>,
    /// Highest degree kept.
    pub top: i32,
}

impl LambdaSeries {
    pub fn new(min_deg: i32, coeffs: Vec<Expr>, top: i32) -> LambdaSeries {
        let mut s = LambdaSeries {
            min_deg,
            coeffs,
            top,
        };
        s.fit();
        s
    }

    fn fit(&mut self) {
        let len = (self.top - self.min_deg + 1).max(0) as usize;
        self.coeffs.resize(len, Expr::zero());
    }

    pub fn zero(top: i32) -> LambdaSeries {
        LambdaSeries::new(0, Vec::new(), top)
    }

    pub fn coeff(&self, i: i32) -> Expr {
        if i < self.min_deg || i > self.top {
            return Expr::zero();
        }
        self.coeffs[(i - self.min_deg) as usize].clone()
    }

    pub fn add(&self, o: &LambdaSeries) -> LambdaSeries {
        let m = self.min_deg.min(o.min_deg);
        let top = self.top.min(o.top);
        let c = (m..=top).map(|i| self.coeff(i).add(&o.coeff(i))).collect();
        LambdaSeries::new(m, c, top)
    }

    pub fn mul(&self, o: &LambdaSeries) -> LambdaSeries {
        let m = self.min_deg + o.min_deg;
        // each factor is exact up to its own top degree
        let top = (self.top + o.min_deg).min(o.top + self.min_deg);
        let c = (m..=top)
            .map(|i| {
                Expr::sum(
                    (self.min_deg..=self.top)
                        .map(|a| self.coeff(a).mul(&o.coeff(i - a)))
                        .filter(|e| !e.is_zero_const()),
                )
            })
            .collect();
        LambdaSeries::new(m, c, top)
    }

    /// Multiplication by `lambda^k`.
    pub fn shift(&self, k: i32) -> LambdaSeries {
        LambdaSeries::new(self.min_deg + k, self.coeffs.clone(), self.top + k)
    }

    pub fn scale(&self, e: &Expr) -> LambdaSeries {
        LambdaSeries::new(
            self.min_deg,
            self.coeffs.iter().map(|c| c.mul(e)).collect(),
            self.top,
        )
    }

    pub fn bind_sigma(&self, s: &BigRational) -> LambdaSeries {
        LambdaSeries::new(
            self.min_deg,
            self.coeffs.iter().map(|c| c.bind_sigma(s)).collect(),
            self.top,
        )
    }
}

/// `(mu^0, mu^1)` on the second-form chart.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistorCurve {
    pub mu: [LambdaSeries; 2],
}

impl TwistorCurve {
    pub fn bind_sigma(&self, s: &BigRational) -> TwistorCurve {
        TwistorCurve {
            mu: [self.mu[0].bind_sigma(s), self.mu[1].bind_sigma(s)],
        }
    }

    pub fn top(&self) -> i32 {
        self.mu[0].top.min(self.mu[1].top)
    }
}

/// `mu^0 = w + lambda y`, `mu^1 = z - lambda x`, kept through `lambda^N`.
pub fn flat_twistor_curve(n: i32) -> TwistorCurve {
    use second::*;
    TwistorCurve {
        mu: [
            LambdaSeries::new(0, vec![Expr::var(W), Expr::var(Y)], n),
            LambdaSeries::new(0, vec![Expr::var(Z), Expr::var(X).neg()], n),
        ],
    }
}

/// The Sparling-Tod curve through `lambda^N`, `sigma` symbolic:
/// `mu^0 = w + lambda y + sum_{n>=1} sigma lambda^(n+1) sum_k B_(n)^k w (-y/w)^k Q^(k-n-1)`
/// and `mu^1` with `z (x/z)^k` and `-lambda x`.
pub fn st_twistor_curve(table: &CoeffTable, n_top: i32) -> Result<TwistorCurve> {
    use second::*;
    if n_top < 1 || n_top as usize > table.max_n() + 1 {
        return Err(Error::IndexRange(format!("truncation order {n_top}")));
    }
    let q = q_expr();
    let v = Expr::var(X).div(&Expr::var(Z));
    let mut c0 = vec![Expr::var(W), Expr::var(Y)];
    let mut c1 = vec![Expr::var(Z), Expr::var(X).neg()];
    for n in 1..n_top as usize {
        let mut s0 = Vec::new();
        let mut s1 = Vec::new();
        for k in 0..=n {
            let b = table.coeff_b(n, k as i64)?;
            if b.is_empty() {
                continue;
            }
            let qk = q.pow(k as i64 - n as i64 - 1);
            let bs = sigma_poly_expr(&b);
            s0.push(bs.mul(&Expr::var(W)).mul(&ratio_u().pow(k as i64)).mul(&qk));
            s1.push(bs.mul(&Expr::var(Z)).mul(&v.pow(k as i64)).mul(&qk));
        }
        c0.push(Expr::sigma().mul(&Expr::sum(s0)));
        c1.push(Expr::sigma().mul(&Expr::sum(s1)));
    }
    Ok(TwistorCurve {
        mu: [
            LambdaSeries::new(0, c0, n_top),
            LambdaSeries::new(0, c1, n_top),
        ],
    })
}

/// `L_A mu^B` by powers of `lambda`.
#[derive(Debug, Clone)]
pub struct Annihilation<S> {
    pub top: i32,
    /// `orders[i][2A + B]` is the `lambda^i` coefficient, `i = 0..=top+1`.
    pub orders: Vec<[S; 4]>,
}

impl<S: Scalar> Annihilation<S> {
    /// Orders `0..top-1`, where every contribution is present.
    pub fn checked(&self) -> &[[S; 4]] {
        &self.orders[..self.top as usize]
    }

    /// Orders `top` and `top+1`, reported apart.
    pub fn truncation(&self) -> &[[S; 4]] {
        &self.orders[self.top as usize..]
    }

    /// First checked order with a nonzero coefficient.
    pub fn first_failure(&self) -> Option<usize> {
        self.checked()
            .iter()
            .position(|o| o.iter().any(|v| !v.vanishes()))
    }
}

/// Expands `L_A mu^B = (c0 + lambda c1)(sum mu_i lambda^i)` at `p`.
pub fn lax_annihilation_residual<S: Scalar>(
    curve: &TwistorCurve,
    lax: &LaxPair,
    p: &Point<S>,
) -> Result<Annihilation<S>> {
    let top = curve.top();
    if top < 0 || curve.mu.iter().any(|m| m.min_deg < 0) {
        return Err(Error::IndexRange("curve must start at lambda^0".into()));
    }
    let fields: Vec<[Vec<Jet<S>>; 2]> = lax
        .l
        .iter()
        .map(|l| Ok([l.c0.jets(p, 1)?, l.c1.jets(p, 1)?]))
        .collect::<Result<_>>()?;
    let mut coeff_jets: Vec<Vec<Jet<S>>> = Vec::new();
    for m in &curve.mu {
        coeff_jets.push(
            (0..=top)
                .map(|i| m.coeff(i).jet(p, 2))
                .collect::<Result<_>>()?,
        );
    }
    let mut orders = Vec::with_capacity(top as usize + 2);
    for i in 0..=(top + 1) {
        let vals: [S; 4] = std::array::from_fn(|ab| {
            let (a, b) = (ab / 2, ab % 2);
            let mut acc = S::zero();
            if i <= top {
                acc = acc.add(apply_jet(&fields[a][0], &coeff_jets[b][i as usize]).value());
            }
            if i >= 1 {
                acc = acc.add(apply_jet(&fields[a][1], &coeff_jets[b][i as usize - 1]).value());
            }
            acc
        });
        orders.push(vals);
    }
    Ok(Annihilation { top, orders })
}

/// Curve coefficients `omega_i = R^i omega_0` with `omega_0 = (w, z)` on a
/// polynomial background.
pub fn series_solve_omega(theta: &Poly, n_top: i32) -> Result<TwistorCurve> {
    use second::*;
    let mut mu = Vec::with_capacity(2);
    for start in [W, Z] {
        let mut cur = Poly::var(4, start);
        let mut c = vec![cur.to_expr()];
        for _ in 0..n_top {
            cur = recursion_step_poly_on(theta, &cur)?;
            c.push(cur.to_expr());
        }
        mu.push(LambdaSeries::new(0, c, n_top));
    }
    let m1 = mu.pop().expect("two series");
    let m0 = mu.pop().expect("two series");
    Ok(TwistorCurve { mu: [m0, m1] })
}

/// Dense univariate polynomial with coefficients in a ring, lowest degree first.
#[derive(Debug, Clone)]
pub struct UPoly<A> {
    pub c: Vec<A>,
    zero: A,
}

impl<A: Algebra> UPoly<A> {
    pub fn constant(a: A) -> UPoly<A> {
        let zero = a.sub(&a);
        UPoly { c: vec![a], zero }.trim()
    }

    pub fn linear(a0: A, a1: A) -> UPoly<A> {
        let zero = a0.sub(&a0);
        UPoly {
            c: vec![a0, a1],
            zero,
        }
        .trim()
    }

    fn trim(mut self) -> Self {
        while self.c.last().is_some_and(|x| x.vanishes()) {
            self.c.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn get(&self, i: usize) -> A {
        self.c.get(i).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        UPoly {
            c: (0..n).map(|i| self.get(i).add(&o.get(i))).collect(),
            zero: self.zero.clone(),
        }
        .trim()
    }

    pub fn neg(&self) -> Self {
        UPoly {
            c: self.c.iter().map(|x| x.neg()).collect(),
            zero: self.zero.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UPoly {
                c: Vec::new(),
                zero: self.zero.clone(),
            };
        }
        let mut c = vec![self.zero.clone(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        UPoly {
            c,
            zero: self.zero.clone(),
        }
        .trim()
    }

    /// Quotient and remainder of division by `(t - r)`.
    pub fn div_linear(&self, r: &A) -> (Self, A) {
        if self.is_zero() {
            return (self.clone(), self.zero.clone());
        }
        let n = self.c.len();
        let mut q = vec![self.zero.clone(); n.saturating_sub(1)];
        let mut acc = self.c[n - 1].clone();
        for i in (0..n - 1).rev() {
            q[i] = acc.clone();
            acc = self.c[i].add(&acc.mul(r));
        }
        (
            UPoly {
                c: q,
                zero: self.zero.clone(),
            }
            .trim(),
            acc,
        )
    }

    /// Taylor coefficients about `t = r`.
    pub fn shift(&self, r: &A) -> Vec<A> {
        let mut out = Vec::new();
        let mut cur = self.clone();
        while !cur.is_zero() {
            let (q, rem) = cur.div_linear(r);
            out.push(rem);
            cur = q;
        }
        out
    }
}

/// `num / den` with polynomials over a ring; no cancellation is attempted.
#[derive(Debug, Clone)]
pub struct RatFun<A> {
    pub num: UPoly<A>,
    pub den: UPoly<A>,
}

impl<A: Algebra> Algebra for RatFun<A> {
    fn add(&self, o: &Self) -> Self {
        RatFun {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        RatFun {
            num: self.num.mul(&o.num),
            den: self.den.mul(&o.den),
        }
    }
    fn neg(&self) -> Self {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn div(&self, o: &Self) -> Option<Self> {
        if o.num.is_zero() {
            return None;
        }
        Some(RatFun {
            num: self.num.mul(&o.den),
            den: self.den.mul(&o.num),
        })
    }
    fn vanishes(&self) -> bool {
        self.num.is_zero()
    }
    fn one_like(&self) -> Self {
        let one = self.den.zero.one_like();
        RatFun {
            num: UPoly::constant(one.clone()),
            den: UPoly::constant(one),
        }
    }
}

impl<A: Algebra> RatFun<A> {
    pub fn constant(a: A) -> Self {
        let one = a.one_like();
        RatFun {
            num: UPoly::constant(a),
            den: UPoly::constant(one),
        }
    }

    pub fn poly(p: UPoly<A>) -> Self {
        let one = p.zero.one_like();
        RatFun {
            num: p,
            den: UPoly::constant(one),
        }
    }

    /// Residue at `t = r`; zero if `r` is not a root of the denominator.
    pub fn residue(&self, r: &A) -> Result<A> {
        if self.den.is_zero() {
            return Err(Error::PoleNotFound);
        }
        let mut e = self.den.clone();
        let mut m = 0usize;
        loop {
            let (q, rem) = e.div_linear(r);
            if !rem.vanishes() {
                break;
            }
            e = q;
            m += 1;
        }
        let zero = self.den.zero.clone();
        if m == 0 {
            return Ok(zero);
        }
        // coefficient of t^(m-1) in N(t)/E(t), both expanded about r
        let n = self.num.shift(r);
        let d = e.shift(r);
        let get = |v: &[A], i: usize| v.get(i).cloned().unwrap_or_else(|| zero.clone());
        let d0 = get(&d, 0);
        let mut s: Vec<A> = Vec::with_capacity(m);
        for k in 0..m {
            let mut acc = get(&n, k);
            for j in 1..=k {
                acc = acc.sub(&get(&d, j).mul(&s[k - j]));
            }
            s.push(acc.div(&d0).ok_or(Error::PoleNotFound)?);
        }
        Ok(s.pop().expect("m >= 1"))
    }
}

/// `F(lambda, w + lambda y, z - lambda x)` as a rational function of lambda
/// with coefficients in `A`, given `(w, z, x, y)` in `A`.
pub fn restrict_to_flat_curve<A: Algebra>(f: &Expr, coords: &[A; 4]) -> Result<RatFun<A>> {
    use second::*;
    let one = coords[0].one_like();
    let zero = one.sub(&one);
    let lambda = RatFun::poly(UPoly::linear(zero, one.clone()));
    let mu0 = RatFun::poly(UPoly::linear(coords[W].clone(), coords[Y].clone()));
    let mu1 = RatFun::poly(UPoly::linear(coords[Z].clone(), coords[X].neg()));
    let konst = |q: &BigRational| -> RatFun<A> { RatFun::constant(scale_one(&one, q)) };
    f.eval(Chart::Twistor, &[lambda, mu0, mu1], &konst)
}

fn scale_one<A: Algebra>(one: &A, q: &BigRational) -> A {
    let n = crate::scalar::int_like(one, q.numer());
    let d = crate::scalar::int_like(one, q.denom());
    n.div(&d).expect("nonzero denominator")
}

/// Residue at the declared pole of `F` restricted to the flat curve through `p`.
pub fn penrose_residue_transform<S: Scalar>(f: &Expr, pole: &Expr, p: &Point<S>) -> Result<S> {
    let coords: [S; 4] = std::array::from_fn(|i| p.coords[i].clone());
    let rf = restrict_to_flat_curve(f, &coords)?;
    rf.residue(&pole.value(p)?)
}

/// The transform as a jet in the space-time point, through order `k`.
pub fn penrose_residue_jet<S: Scalar>(
    f: &Expr,
    pole: &Expr,
    p: &Point<S>,
    k: usize,
) -> Result<Jet<S>> {
    let space = crate::jet::JetSpace::new(p.coords.clone(), k);
    let coords: [Jet<S>; 4] = std::array::from_fn(|i| space.variable(i));
    let rf = restrict_to_flat_curve(f, &coords)?;
    rf.residue(&pole.jet_in(&space, Chart::Second)?)
}

/// `lambda^-1 F`.
pub fn recursion_on_twistor(f: &Expr) -> Expr {
    f.div(&Expr::var(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expression;
    use crate::scalar::{int, rat};

    #[test]
    fn residue_of_simple_and_double_pole() {
        // 1/((t-2)(t+1)) at 2 -> 1/3 ; 1/(t-1)^2 * t^3 at 1 -> 3
        let a = RatFun {
            num: UPoly::constant(int(1)),
            den: UPoly::linear(int(-2), int(1)).mul(&UPoly::linear(int(1), int(1))),
        };
        assert_eq!(a.residue(&int(2)).unwrap(), rat(1, 3));
        let l = UPoly::linear(int(-1), int(1));
        let b = RatFun {
            num: UPoly::linear(int(0), int(1))
                .mul(&UPoly::linear(int(0), int(1)))
                .mul(&UPoly::linear(int(0), int(1))),
            den: l.mul(&l),
        };
        assert_eq!(b.residue(&int(1)).unwrap(), int(3));
        assert_eq!(b.residue(&int(5)).unwrap(), int(0));
    }

    #[test]
    fn phi_zero_from_residue() {
        let f = parse_expression("1/(mu0*mu1)", Chart::Twistor).unwrap();
        let pole = parse_expression("-w/y", Chart::Second).unwrap();
        let p = Point::new(Chart::Second, vec![int(1), int(2), int(3), int(5)]).unwrap();
        assert_eq!(
            penrose_residue_transform(&f, &pole, &p).unwrap(),
            rat(1, 13)
        );
    }
}
