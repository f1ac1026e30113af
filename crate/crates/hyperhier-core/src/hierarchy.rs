//! The truncated hierarchy on the extended chart `x^{Ai}`, `i = 0..=n`.
//!
//! # Index conventions
//!
//! | object                  | value                                         |
//! |-------------------------|-----------------------------------------------|
//! | slot of `x^{Ai}`        | `2i + A`                                      |
//! | bracket `{f, g}`        | `f_{00} g_{10} - f_{10} g_{00}` (`d_{A0}` = `d/dx^{A0}`) |
//! | `H_f = {f, .}`          | `f_{00} d_{10} - f_{10} d_{00}`               |
//! | `V`                     | `H_Theta`                                     |
//! | `d^{0i}`, `d^{1i}`      | `d_{1i}`, `-d_{0i}`                           |
//! | `x_{00}`, `x_{10}`      | `-x^{10}`, `x^{00}` (so `{x_{A0}, .} = d_{A0}`) |
//! | `n = 1` chart map       | `x^{00} = y`, `x^{10} = x`, `x^{01} = w`, `x^{11} = -z` |
//!
//! With these constants the `(0,1,1,1)` residual at `n = 1` is the second
//! heavenly residual, `L_{00}, L_{10}` are the second-form Lax pair, and
//! `[L_{Ai}, L_{Bj}] = -lambda (three) + lambda^2 (one)` with
//! `(one) = H_E` for `E` the `(A,i+1,B,j+1)` residual.

use crate::chart::{ext_slot, second, Chart, Point};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::heavenly::{SecondPotential, EPS};
use crate::jet::Jet;
use crate::scalar::{int, Algebra, Scalar};
use crate::twistor::{LambdaSeries, TwistorCurve};
use crate::vfield::{commutator_at, AffineField, VectorField};
use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedPotential {
    pub n: usize,
    pub theta: Expr,
}

impl ExtendedPotential {
    pub fn new(n: usize, theta: Expr) -> Result<Self> {
        if n == 0 {
            return Err(Error::IndexRange(
                "truncation level must be at least 1".into(),
            ));
        }
        if let Some(&s) = theta.slots().iter().max() {
            if s >= 2 * n + 2 {
                return Err(Error::Arity {
                    expected: 2 * n + 2,
                    got: s + 1,
                });
            }
        }
        Ok(ExtendedPotential { n, theta })
    }

    pub fn chart(&self) -> Chart {
        Chart::Extended(self.n)
    }

    /// A second-form potential placed on `x^{A0}, x^{A1}` of an `n`-chart.
    pub fn embed_second(t: &SecondPotential, n: usize) -> Result<Self> {
        ExtendedPotential::new(n, t.theta.substitute(&second_to_extended, None))
    }

    /// `d_{A i}` of Theta.
    pub fn d(&self, a: usize, i: usize) -> Expr {
        self.theta.diff(ext_slot(a, i))
    }

    fn check(&self, i: usize, lo: usize, hi: usize) -> Result<()> {
        if i < lo || i > hi {
            return Err(Error::IndexRange(format!(
                "index {i} outside {lo}..={hi} for n = {}",
                self.n
            )));
        }
        Ok(())
    }
}

/// Second-form coordinates in terms of `x^{A0}, x^{A1}`.
pub fn second_to_extended(slot: usize) -> Option<Expr> {
    use second::*;
    Some(match slot {
        W => Expr::var(ext_slot(0, 1)),
        Z => Expr::var(ext_slot(1, 1)).neg(),
        X => Expr::var(ext_slot(1, 0)),
        Y => Expr::var(ext_slot(0, 0)),
        _ => return None,
    })
}

/// `x^{A0}, x^{A1}` in terms of second-form coordinates.
pub fn extended_to_second(slot: usize) -> Option<Expr> {
    use second::*;
    Some(match slot {
        0 => Expr::var(Y),
        1 => Expr::var(X),
        2 => Expr::var(W),
        3 => Expr::var(Z).neg(),
        _ => return None,
    })
}

/// An `n = 1` field written on the second-form chart.
pub fn field_to_second(v: &VectorField) -> Result<VectorField> {
    use second::*;
    if v.chart != Chart::Extended(1) {
        return Err(Error::Arity {
            expected: 4,
            got: v.chart.arity(),
        });
    }
    let c: Vec<Expr> = v
        .comps
        .iter()
        .map(|e| e.substitute(&extended_to_second, None))
        .collect();
    let mut out = vec![Expr::zero(); 4];
    out[Y] = c[0].clone();
    out[X] = c[1].clone();
    out[W] = c[2].clone();
    out[Z] = c[3].neg();
    Ok(VectorField::new(Chart::Second, out))
}

pub fn bracket_expr(f: &Expr, g: &Expr) -> Expr {
    let (s0, s1) = (ext_slot(0, 0), ext_slot(1, 0));
    f.diff(s0)
        .mul(&g.diff(s1))
        .sub(&f.diff(s1).mul(&g.diff(s0)))
}

/// The bracket on jets of order at least one.
pub fn bracket_jets<S: Scalar>(f: &Jet<S>, g: &Jet<S>) -> Jet<S> {
    let (s0, s1) = (ext_slot(0, 0), ext_slot(1, 0));
    f.partial(s0)
        .mul(&g.partial(s1))
        .sub(&f.partial(s1).mul(&g.partial(s0)))
}

pub fn poisson_yx<S: Scalar>(f: &Expr, g: &Expr, p: &Point<S>) -> Result<S> {
    let fj = f.jet(p, 1)?;
    let gj = g.jet(p, 1)?;
    Ok(bracket_jets(&fj, &gj).value().clone())
}

/// `H_f = {f, .}` on an extended chart.
pub fn hamiltonian_field(f: &Expr, n: usize) -> VectorField {
    let chart = Chart::Extended(n);
    let mut c = vec![Expr::zero(); chart.arity()];
    c[ext_slot(1, 0)] = f.diff(ext_slot(0, 0));
    c[ext_slot(0, 0)] = f.diff(ext_slot(1, 0)).neg();
    VectorField::new(chart, c)
}

/// `d_{Ai} d_{Bj-1} T - d_{Bj} d_{Ai-1} T + {d_{Ai-1} T, d_{Bj-1} T}`.
pub fn hierarchy_residual_expr(
    e: &ExtendedPotential,
    a: usize,
    i: usize,
    b: usize,
    j: usize,
) -> Result<Expr> {
    e.check(i, 1, e.n)?;
    e.check(j, 1, e.n)?;
    let ai = e.d(a, i - 1);
    let bj = e.d(b, j - 1);
    Ok(bj
        .diff(ext_slot(a, i))
        .sub(&ai.diff(ext_slot(b, j)))
        .add(&bracket_expr(&ai, &bj)))
}

pub fn hierarchy_residual<S: Scalar>(
    e: &ExtendedPotential,
    a: usize,
    i: usize,
    b: usize,
    j: usize,
    p: &Point<S>,
) -> Result<S> {
    hierarchy_residual_expr(e, a, i, b, j)?.value(p)
}

/// `V = H_Theta`.
pub fn v_field(e: &ExtendedPotential) -> VectorField {
    hamiltonian_field(&e.theta, e.n)
}

/// `delta_{Ai} = d_{Ai}`.
pub fn delta_field(e: &ExtendedPotential, a: usize, i: usize) -> Result<VectorField> {
    e.check(i, 0, e.n)?;
    Ok(VectorField::coordinate(e.chart(), ext_slot(a, i), 1))
}

/// `D_{Ai+1} = d_{Ai+1} + [d_{Ai}, V]`.
pub fn d_field(e: &ExtendedPotential, a: usize, i: usize) -> Result<VectorField> {
    e.check(i, 0, e.n - 1)?;
    let v = v_field(e);
    // d_{Ai} has constant coefficients, so [d_{Ai}, V]^m = d_{Ai} V^m.
    let comm = VectorField::new(
        e.chart(),
        v.comps.iter().map(|c| c.diff(ext_slot(a, i))).collect(),
    );
    Ok(VectorField::coordinate(e.chart(), ext_slot(a, i + 1), 1).add(&comm))
}

/// `L_{Ai} = delta_{Ai} - lambda D_{Ai+1}`.
pub fn lax_field(e: &ExtendedPotential, a: usize, i: usize) -> Result<AffineField> {
    let d = d_field(e, a, i)?;
    Ok(AffineField {
        c0: delta_field(e, a, i)?,
        c1: d.scale(&Expr::int(-1)),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompatResidual<S> {
    pub pair: (usize, usize, usize, usize),
    /// `[D_{Ai+1}, D_{Bj+1}]`.
    pub one: Vec<S>,
    /// `H_E` for the `(A,i+1,B,j+1)` residual `E`.
    pub one_expected: Vec<S>,
    /// `[delta_{Ai}, delta_{Bj}]`.
    pub two: Vec<S>,
    /// `[D_{Ai+1}, delta_{Bj}] - [D_{Bj+1}, delta_{Ai}]`.
    pub three: Vec<S>,
    /// `[L_{Ai}, L_{Bj}] - lambda^2 H_E` at each lambda sample.
    pub full: Vec<Vec<S>>,
}

impl<S: Scalar> CompatResidual<S> {
    /// `one - one_expected`.
    pub fn equivalence_gap(&self) -> Vec<S> {
        self.one
            .iter()
            .zip(&self.one_expected)
            .map(|(a, b)| a.sub(b))
            .collect()
    }
}

fn sub_vec<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

/// Compatibility commutators for each `(A, i, B, j)` in `pairs`, `0 <= i, j < n`.
pub fn lax_compat_residual<S: Scalar>(
    e: &ExtendedPotential,
    pairs: &[(usize, usize, usize, usize)],
    lambdas: &[BigRational],
    p: &Point<S>,
) -> Result<Vec<CompatResidual<S>>> {
    let mut out = Vec::with_capacity(pairs.len());
    for &(a, i, b, j) in pairs {
        let (da, db) = (d_field(e, a, i)?, d_field(e, b, j)?);
        let (ea, eb) = (delta_field(e, a, i)?, delta_field(e, b, j)?);
        let one = commutator_at(&da, &db, p)?;
        let h = hamiltonian_field(&hierarchy_residual_expr(e, a, i + 1, b, j + 1)?, e.n);
        let one_expected = h.values(p)?;
        let two = commutator_at(&ea, &eb, p)?;
        let three = sub_vec(&commutator_at(&da, &eb, p)?, &commutator_at(&db, &ea, p)?);
        let (la, lb) = (lax_field(e, a, i)?, lax_field(e, b, j)?);
        let mut full = Vec::with_capacity(lambdas.len());
        for l in lambdas {
            let c = commutator_at(&la.at(l), &lb.at(l), p)?;
            let l2 = S::from_rational(&(l * l));
            let expect: Vec<S> = one_expected.iter().map(|x| x.mul(&l2)).collect();
            full.push(sub_vec(&c, &expect));
        }
        out.push(CompatResidual {
            pair: (a, i, b, j),
            one,
            one_expected,
            two,
            three,
            full,
        });
    }
    Ok(out)
}

/// All `(A, i, B, j)` with `0 <= i, j < n`, `(A, i) < (B, j)`.
pub fn all_pairs(n: usize) -> Vec<(usize, usize, usize, usize)> {
    let idx: Vec<(usize, usize)> = (0..n).flat_map(|i| [(0, i), (1, i)]).collect();
    let mut out = Vec::new();
    for (k, &(a, i)) in idx.iter().enumerate() {
        for &(b, j) in &idx[k + 1..] {
            out.push((a, i, b, j));
        }
    }
    out
}

/// `d^{Bi}` as a slot and sign.
pub fn raised(b: usize, i: usize) -> (usize, i64) {
    if b == 0 {
        (ext_slot(1, i), 1)
    } else {
        (ext_slot(0, i), -1)
    }
}

/// `d^{Bi} f`.
pub fn d_upper(f: &Expr, b: usize, i: usize) -> Expr {
    let (s, k) = raised(b, i);
    f.diff(s).mul(&Expr::int(k))
}

/// `x_{A0}`: `x_{00} = -x^{10}`, `x_{10} = x^{00}`.
pub fn x_lower(a: usize) -> Expr {
    if a == 0 {
        Expr::var(ext_slot(1, 0)).neg()
    } else {
        Expr::var(ext_slot(0, 0))
    }
}

/// `omega_{Aj} = -x_{A0} + sum_{i<j} lambda^{i+1} d_{Ai} Theta` (lower),
/// or `omega^{Bj} = -x^{B0} + sum_{m=1..j} lambda^m d^{B m-1} Theta` (upper).
pub fn truncated_omega(
    e: &ExtendedPotential,
    a: usize,
    j: usize,
    upper: bool,
) -> Result<LambdaSeries> {
    e.check(j, 1, e.n)?;
    let mut c = Vec::with_capacity(j + 1);
    if upper {
        c.push(Expr::var(ext_slot(a, 0)).neg());
        for m in 1..=j {
            c.push(d_upper(&e.theta, a, m - 1));
        }
    } else {
        c.push(x_lower(a).neg());
        for i in 0..j {
            c.push(e.d(a, i));
        }
    }
    Ok(LambdaSeries::new(0, c, j as i32))
}

/// Per lambda-order `k = 0..=j` the components of
/// `-sum_{i<j} lambda^i L_{Ai} - lambda^j d_{Aj} - H_{omega_{Aj}}`.
pub fn summed_lax_residual<S: Scalar>(
    e: &ExtendedPotential,
    a: usize,
    j: usize,
    p: &Point<S>,
) -> Result<Vec<Vec<S>>> {
    let om = truncated_omega(e, a, j, false)?;
    let laxes: Vec<AffineField> = (0..j).map(|i| lax_field(e, a, i)).collect::<Result<_>>()?;
    let chart = e.chart();
    let mut out = Vec::with_capacity(j + 1);
    for k in 0..=j {
        let mut lhs = VectorField::new(chart, vec![Expr::zero(); chart.arity()]);
        if k < j {
            lhs = lhs.add(&laxes[k].c0);
        }
        if k >= 1 {
            lhs = lhs.add(&laxes[k - 1].c1);
        }
        let lhs = lhs.scale(&Expr::int(-1));
        let mut rhs = hamiltonian_field(&om.coeff(k as i32), e.n);
        if k == j {
            rhs = rhs.add(&VectorField::coordinate(chart, ext_slot(a, j), 1));
        }
        out.push(sub_vec(&lhs.values(p)?, &rhs.values(p)?));
    }
    Ok(out)
}

/// Flow form `d^{Bj} omega^C = {omega^C, lambda^{-j} omega^{Bj}}` on a
/// lambda series pair `omega`.  Entry `r` holds the two residuals (for
/// `C = 0, 1`) at order `lambda^r`, for `r = min_deg..=top - j`.
pub fn sato_flow_residual<S: Scalar>(
    e: &ExtendedPotential,
    omega: &[LambdaSeries; 2],
    b: usize,
    j: usize,
    p: &Point<S>,
) -> Result<Vec<[S; 2]>> {
    let ob = truncated_omega(e, b, j, true)?;
    let top = omega[0].top.min(omega[1].top);
    let lo = omega[0].min_deg.min(omega[1].min_deg);
    let (ds, dk) = raised(b, j);
    let mut out = Vec::new();
    let mut r = lo;
    while r + j as i32 <= top {
        let mut row: [S; 2] = [S::zero(), S::zero()];
        for (c, w) in omega.iter().enumerate() {
            let lhs = w.coeff(r).diff(ds).mul(&Expr::int(dk));
            let rhs = Expr::sum(
                (0..=j).map(|m| bracket_expr(&w.coeff(r + (j - m) as i32), &ob.coeff(m as i32))),
            );
            row[c] = lhs.sub(&rhs).value(p)?;
        }
        out.push(row);
        r += 1;
    }
    Ok(out)
}

/// `omega^C = sum_i lambda^{n-i} x^{Ci}`, the flat solution.
pub fn flat_extended_omega(n: usize) -> [LambdaSeries; 2] {
    std::array::from_fn(|c| {
        LambdaSeries::new(
            0,
            (0..=n).map(|r| Expr::var(ext_slot(c, n - r))).collect(),
            n as i32,
        )
    })
}

/// An `n = 1` pair `omega^0 = mu^0`, `omega^1 = -mu^1` from a second-form curve.
pub fn omega_from_curve(curve: &TwistorCurve) -> [LambdaSeries; 2] {
    let map = |s: &LambdaSeries, k: i64| {
        LambdaSeries::new(
            s.min_deg,
            s.coeffs
                .iter()
                .map(|c| c.substitute(&second_to_extended, None).mul(&Expr::int(k)))
                .collect(),
            s.top,
        )
    };
    [map(&curve.mu[0], 1), map(&curve.mu[1], -1)]
}

/// `2 eps_{AB} dx^{A1} dx^{B0} + 2 T_{A0 B0} dx^{A1} dx^{B1}` on the slots
/// `x^{00}, x^{10}, x^{01}, x^{11}` at `p` (the remaining coordinates of
/// `p` fix the slice).
pub fn slice_metric<S: Scalar>(e: &ExtendedPotential, p: &Point<S>) -> Result<[[S; 4]; 4]> {
    let mut g: [[S; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| S::zero()));
    let h = e.theta.jet(p, 2)?;
    for a in 0..2 {
        for b in 0..2 {
            let k = S::from_i64(EPS[a][b]);
            let (u, v) = (ext_slot(a, 1), ext_slot(b, 0));
            g[u][v] = g[u][v].add(&k);
            g[v][u] = g[v][u].add(&k);
            let t = h.d(&[ext_slot(a, 0), ext_slot(b, 0)]);
            let (u, v) = (ext_slot(a, 1), ext_slot(b, 1));
            g[u][v] = g[u][v].add(&t.add(&t));
        }
    }
    Ok(g)
}

/// Slice metric pulled back to the second-form chart through the `n = 1`
/// map; `rest` holds the coordinates `x^{Ai}`, `i >= 2`, fixing the slice.
pub fn slice_metric_second<S: Scalar>(
    e: &ExtendedPotential,
    p: &Point<S>,
    rest: &[S],
) -> Result<[[S; 4]; 4]> {
    use second::*;
    if p.chart != Chart::Second {
        return Err(Error::Mismatch("needs a second-form point".into()));
    }
    let c = &p.coords;
    let mut coords = vec![c[Y].clone(), c[X].clone(), c[W].clone(), c[Z].neg()];
    coords.extend_from_slice(rest);
    let q = Point::new(e.chart(), coords)?;
    let g = slice_metric(e, &q)?;
    // second slot -> (extended slot, sign)
    let j = |s: usize| match s {
        W => (2, 1),
        Z => (3, -1),
        X => (1, 1),
        _ => (0, 1),
    };
    Ok(std::array::from_fn(|m| {
        std::array::from_fn(|n| {
            let ((a, sa), (b, sb)) = (j(m), j(n));
            g[a][b].mul(&S::from_i64(sa * sb))
        })
    }))
}

/// `C(n, k)`.
pub fn binomial(n: usize, k: usize) -> BigRational {
    (0..k).fold(int(1), |acc, i| {
        acc * int((n - i) as i64) / int((i + 1) as i64)
    })
}

/// Spinor components `U^{A A'_1..A'_n}` of a vector with components along
/// `x^{Ai}`, using `x^{Ai} = C(n,i) (-1)^{n-i} x^{A 0'..0' 1'..1'}` with `i`
/// zeros.  The array index is `A 2^n + sum_k A'_k 2^{n-k}`.
pub fn spinor_view<S: Scalar>(n: usize, v: &[S]) -> Result<Vec<S>> {
    if v.len() != 2 * n + 2 {
        return Err(Error::Rank(format!(
            "expected {} components, got {}",
            2 * n + 2,
            v.len()
        )));
    }
    let size = 1usize << n;
    let mut out = Vec::with_capacity(2 * size);
    for a in 0..2 {
        for bits in 0..size {
            let ones = bits.count_ones() as usize;
            let i = n - ones;
            let w = S::from_rational(&(int(if ones % 2 == 0 { 1 } else { -1 }) / binomial(n, i)));
            out.push(v[ext_slot(a, i)].mul(&w));
        }
    }
    Ok(out)
}

/// `G(U, W) = eps_{AB} eps_{A'_1 B'_1}..eps_{A'_n B'_n} U^{A A'..} W^{B B'..}`.
pub fn paraconformal_eval<S: Scalar>(n: usize, u: &[S], w: &[S]) -> Result<S> {
    let size = 2usize << n;
    for (name, x) in [("U", u), ("W", w)] {
        if x.len() != size {
            return Err(Error::Rank(format!(
                "{name} has {} components, expected 2^{} = {size}",
                x.len(),
                n + 1
            )));
        }
    }
    let mut acc = S::zero();
    // eps is antisymmetric with eps_{01} = 1, so every index of W is the flip
    // of the matching index of U and the sign counts the ones in U.
    for (i, ui) in u.iter().enumerate() {
        let j = i ^ (size - 1);
        let t = ui.mul(&w[j]);
        acc = if i.count_ones() % 2 == 0 {
            acc.add(&t)
        } else {
            acc.sub(&t)
        };
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn bracket_of_base_coordinates() {
        let p = Point::new(Chart::Extended(2), (1..=6).map(int).collect()).unwrap();
        let r = poisson_yx(&Expr::var(0), &Expr::var(1), &p).unwrap();
        assert_eq!(r, int(1));
    }

    #[test]
    fn flat_lax_fields() {
        let e = ExtendedPotential::new(2, Expr::zero()).unwrap();
        let l = lax_field(&e, 1, 1).unwrap();
        assert_eq!(l.c0, VectorField::coordinate(Chart::Extended(2), 3, 1));
        assert_eq!(l.c1.comps[5], Expr::int(-1));
        assert!(lax_field(&e, 0, 2).is_err());
    }

    #[test]
    fn paraconformal_rank_is_checked() {
        let u = vec![int(1); 4];
        assert!(matches!(paraconformal_eval(2, &u, &u), Err(Error::Rank(_))));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), int(10));
        assert_eq!(binomial(3, 0), int(1));
    }
}
