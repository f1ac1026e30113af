//! The recursion operator on linearised solutions.
//!
//! `R` is defined by `d_{A0'} (R phi) = d_{A1'} phi` with the frame of
//! [`crate::heavenly`], i.e. `d_y (R phi) = X_0 phi` and `-d_x (R phi) = X_1 phi`.
//! On the flat background these are `(R phi)_y = phi_w`, `(R phi)_x = -phi_z`.

use crate::chart::{second, Chart, Point};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::heavenly::{eta, linearized_second_residual, tetrad_from_theta, SecondPotential};
use crate::poly::Poly;
use crate::scalar::{int, rat, Algebra, Scalar};
use num_rational::BigRational;

/// `g^{mn} d_m d_n phi` for the metric of `theta`.
pub fn wave_residual<S: Scalar>(theta: &SecondPotential, phi: &Expr, p: &Point<S>) -> Result<S> {
    let t = tetrad_from_theta(theta);
    let e = t.frame_at(p)?;
    let j = phi.jet(p, 2)?;
    let mut acc = S::zero();
    for a in 0..4 {
        for b in 0..4 {
            let s = eta(a, b);
            if s == 0 {
                continue;
            }
            for m in 0..4 {
                for n in 0..4 {
                    let c = e[a][m].mul(&e[b][n]);
                    if c.vanishes() {
                        continue;
                    }
                    let t = c.mul(&j.d(&[m, n])).mul(&S::from_i64(s));
                    acc = acc.add(&t);
                }
            }
        }
    }
    Ok(acc)
}

/// The Sparling-Tod wave operator in closed form,
/// `2 (d_x d_w + d_y d_z + 2 sigma Q^-3 (z^2 d_x^2 + w^2 d_y^2 - 2 w z d_x d_y)) psi`.
pub fn st_wave_operator<S: Scalar>(sigma: &BigRational, psi: &Expr, p: &Point<S>) -> Result<S> {
    use second::*;
    let j = psi.jet(p, 2)?;
    let (w, z, x, y) = (p.get(W), p.get(Z), p.get(X), p.get(Y));
    let q = w.mul(x).add(&z.mul(y));
    let k = S::from_rational(sigma)
        .mul(&S::from_i64(2))
        .div(&q.powi(3))
        .ok_or(Error::Pole {
            denominator: "w*x + z*y".into(),
        })?;
    let inner = z
        .mul(z)
        .mul(&j.d(&[X, X]))
        .add(&w.mul(w).mul(&j.d(&[Y, Y])))
        .sub(&S::from_i64(2).mul(w).mul(z).mul(&j.d(&[X, Y])));
    Ok(S::from_i64(2).mul(&j.d(&[X, W]).add(&j.d(&[Y, Z])).add(&k.mul(&inner))))
}

/// Residuals `d_y(R phi) - X_0 phi` and `-d_x(R phi) - X_1 phi` on `theta`.
pub fn recursion_relation_residuals<S: Scalar>(
    theta: &SecondPotential,
    phi: &Expr,
    r_phi: &Expr,
    p: &Point<S>,
) -> Result<[S; 2]> {
    use second::*;
    let t = tetrad_from_theta(theta);
    let e = t.frame_at(p)?;
    let f = phi.jet(p, 1)?;
    let r = r_phi.jet(p, 1)?;
    let along = |row: &[S; 4]| (0..4).fold(S::zero(), |acc, m| acc.add(&row[m].mul(&f.d(&[m]))));
    Ok([
        r.d(&[Y]).sub(&along(&e[1])),
        r.d(&[X]).neg().sub(&along(&e[3])),
    ])
}

/// Flat wave operator `phi_xw + phi_yz` on polynomials.
pub fn flat_wave_poly(phi: &Poly) -> Poly {
    use second::*;
    phi.derivative(X)
        .derivative(W)
        .add(&phi.derivative(Y).derivative(Z))
}

/// Solves `d_y r = a`, `d_x r = b` for polynomial `r` with no `(w, z)`-only part.
pub fn invert_d_a0(a: &Poly, b: &Poly) -> Result<Poly> {
    use second::*;
    let rho = a.antiderivative(Y);
    let rest = b.sub(&rho.derivative(X));
    if !rest.derivative(Y).is_empty() {
        return Err(Error::Integrability(
            "right-hand sides are not closed".into(),
        ));
    }
    Ok(rho.add(&rest.antiderivative(X)))
}

/// `R phi` on the flat background for polynomial `phi`, with no `(w, z)`-only part.
pub fn recursion_step_poly(phi: &Poly) -> Result<Poly> {
    use second::*;
    invert_d_a0(&phi.derivative(W), &phi.derivative(Z).neg())
        .map_err(|_| Error::Integrability("phi_xw + phi_yz does not vanish".into()))
}

/// `R phi` on a polynomial background `theta`: `d_y R phi = X_0 phi`, `-d_x R phi = X_1 phi`.
pub fn recursion_step_poly_on(theta: &Poly, phi: &Poly) -> Result<Poly> {
    use second::*;
    let d2 = |a: usize, b: usize| theta.derivative(a).derivative(b);
    let (txx, tyy, txy) = (d2(X, X), d2(Y, Y), d2(X, Y));
    let (px, py) = (phi.derivative(X), phi.derivative(Y));
    let x0 = phi.derivative(W).sub(&txy.mul(&py)).add(&tyy.mul(&px));
    let x1 = phi.derivative(Z).add(&txx.mul(&py)).sub(&txy.mul(&px));
    invert_d_a0(&x0, &x1.neg())
}

/// `R^k phi` on the flat background.
pub fn recursion_power_poly(phi: &Poly, k: usize) -> Result<Poly> {
    (0..k).try_fold(phi.clone(), |acc, _| recursion_step_poly(&acc))
}

/// Neutrino fields `psi_A = d_{A0'} phi` and `R psi_A = d_{A0'} R phi`, with
/// their divergences `eps^{AB} d_{BA'} psi_A` for `A' = 0', 1'`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZrmPair {
    pub psi: [Poly; 2],
    pub r_psi: [Poly; 2],
    pub div_psi: [Poly; 2],
    pub div_r_psi: [Poly; 2],
}

fn d_frame_flat(f: &Poly, a: usize, ap: usize) -> Poly {
    use second::*;
    match (a, ap) {
        (0, 0) => f.derivative(Y),
        (1, 0) => f.derivative(X).neg(),
        (0, 1) => f.derivative(W),
        _ => f.derivative(Z),
    }
}

fn neutrino_divergence(psi: &[Poly; 2]) -> [Poly; 2] {
    std::array::from_fn(|ap| d_frame_flat(&psi[0], 1, ap).sub(&d_frame_flat(&psi[1], 0, ap)))
}

pub fn zrm_recursion(phi: &Poly) -> Result<ZrmPair> {
    let r = recursion_step_poly(phi)?;
    let psi = [d_frame_flat(phi, 0, 0), d_frame_flat(phi, 1, 0)];
    let r_psi = [d_frame_flat(&r, 0, 0), d_frame_flat(&r, 1, 0)];
    Ok(ZrmPair {
        div_psi: neutrino_divergence(&psi),
        div_r_psi: neutrino_divergence(&r_psi),
        psi,
        r_psi,
    })
}

/// `(-y/w)`.
pub fn ratio_u() -> Expr {
    use second::*;
    Expr::var(Y).neg().div(&Expr::var(W))
}

/// `phi_n = (-y/w)^n / (w x + z y)`.
pub fn flat_phi(n: u32) -> Expr {
    ratio_u().pow(n as i64).div(&crate::heavenly::q_expr())
}

/// Triangular tables of polynomials in `sigma`:
/// `T_(n+1)^k = T_(n)^{k-1} - 2 sigma (k+1)/(n-k+d) T_(n)^{k+1}` with
/// `d = 1` for `A` and `d = 2` for `B`, seeded by `T_(1) = [1, 0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffTable {
    a: Vec<Vec<Poly>>,
    b: Vec<Vec<Poly>>,
}

fn build_table(max_n: usize, shift: i64) -> Vec<Vec<Poly>> {
    let one = Poly::constant(1, int(1));
    let sigma = Poly::var(1, 0);
    let mut t: Vec<Vec<Poly>> = vec![Vec::new(), vec![one, Poly::zero(1)]];
    for n in 1..max_n {
        let prev = &t[n];
        let mut row = Vec::with_capacity(n + 2);
        for k in 0..=(n + 1) {
            let mut v = if k >= 1 {
                prev[k - 1].clone()
            } else {
                Poly::zero(1)
            };
            if k < n {
                let c = rat(-2 * (k as i64 + 1), n as i64 - k as i64 + shift);
                v = v.add(&sigma.mul(&prev[k + 1]).scale(&c));
            }
            row.push(v);
        }
        t.push(row);
    }
    t
}

impl CoeffTable {
    pub fn new(max_n: usize) -> CoeffTable {
        let max_n = max_n.max(1);
        CoeffTable {
            a: build_table(max_n, 1),
            b: build_table(max_n, 2),
        }
    }

    pub fn max_n(&self) -> usize {
        self.a.len() - 1
    }

    fn get(&self, t: &[Vec<Poly>], n: usize, k: i64) -> Result<Poly> {
        if n == 0 || n >= t.len() || k > n as i64 || k < -1 {
            return Err(Error::IndexRange(format!("({n}, {k})")));
        }
        Ok(if k < 0 {
            Poly::zero(1)
        } else {
            t[n][k as usize].clone()
        })
    }

    pub fn coeff_a(&self, n: usize, k: i64) -> Result<Poly> {
        self.get(&self.a, n, k)
    }

    pub fn coeff_b(&self, n: usize, k: i64) -> Result<Poly> {
        self.get(&self.b, n, k)
    }

    /// Replaces one entry, for fault-injection tests.
    pub fn with_b(mut self, n: usize, k: usize, v: Poly) -> CoeffTable {
        self.b[n][k] = v;
        self
    }
}

/// A polynomial in `sigma` as an expression in the `sigma` symbol.
pub fn sigma_poly_expr(p: &Poly) -> Expr {
    Expr::sum(
        p.terms()
            .map(|(e, c)| Expr::constant(c.clone()).mul(&Expr::sigma().pow(e[0] as i64))),
    )
}

/// `psi_n = sum_k A_(n)^k (-y/w)^k Q^(k-n)`, with `sigma` left symbolic.
pub fn st_psi(table: &CoeffTable, n: usize) -> Result<Expr> {
    if n == 0 {
        return Err(Error::IndexRange("psi_n needs n >= 1".into()));
    }
    let q = crate::heavenly::q_expr();
    let mut terms = Vec::new();
    for k in 0..=n {
        let a = table.coeff_a(n, k as i64)?;
        if a.is_empty() {
            continue;
        }
        terms.push(
            sigma_poly_expr(&a)
                .mul(&ratio_u().pow(k as i64))
                .mul(&q.pow(k as i64 - n as i64)),
        );
    }
    Ok(Expr::sum(terms))
}

/// Monomial rule `R(u^k Q^j) = (u - sigma u^-1 Q^-2 k/(j+2)) u^k Q^j`
/// applied termwise to `psi_n`.
pub fn monomial_rule_step(table: &CoeffTable, n: usize) -> Result<Expr> {
    let q = crate::heavenly::q_expr();
    let u = ratio_u();
    let mut terms = Vec::new();
    for k in 0..=n {
        let a = table.coeff_a(n, k as i64)?;
        if a.is_empty() {
            continue;
        }
        let j = k as i64 - n as i64;
        let mono = u.pow(k as i64).mul(&q.pow(j));
        let factor = if j + 2 == 0 {
            if k != 0 {
                return Err(Error::Pole {
                    denominator: "j + 2".into(),
                });
            }
            u.clone()
        } else {
            u.sub(
                &Expr::sigma()
                    .mul(&u.pow(-1))
                    .mul(&q.pow(-2))
                    .mul(&Expr::constant(rat(k as i64, j + 2))),
            )
        };
        terms.push(sigma_poly_expr(&a).mul(&factor).mul(&mono));
    }
    Ok(Expr::sum(terms))
}

/// Per-point residuals of one curved recursion step `psi_n -> psi_{n+1}`.
#[derive(Debug, Clone)]
pub struct StStep<S> {
    pub n: usize,
    /// `[d_y relation, d_x relation]` per point.
    pub relations: Vec<[S; 2]>,
    /// `st_wave_operator(psi_{n+1})` per point.
    pub wave: Vec<S>,
    /// `monomial_rule_step(psi_n) - psi_{n+1}` per point.
    pub monomial_rule: Vec<S>,
}

impl<S: Scalar> StStep<S> {
    pub fn relations_hold(&self) -> bool {
        self.relations.iter().flatten().all(|r| r.vanishes())
            && self.wave.iter().all(|r| r.vanishes())
    }

    pub fn monomial_rule_holds(&self) -> bool {
        self.monomial_rule.iter().all(|r| r.vanishes())
    }
}

pub fn recursion_step_st<S: Scalar>(
    table: &CoeffTable,
    n: usize,
    sigma: &BigRational,
    points: &[Point<S>],
) -> Result<StStep<S>> {
    if n + 1 > table.max_n() {
        return Err(Error::IndexRange(format!("psi_{} beyond table", n + 1)));
    }
    let theta = SecondPotential::sparling_tod(sigma);
    let a = st_psi(table, n)?.bind_sigma(sigma);
    let b = st_psi(table, n + 1)?.bind_sigma(sigma);
    let m = monomial_rule_step(table, n)?.bind_sigma(sigma);
    let mut out = StStep {
        n,
        relations: Vec::new(),
        wave: Vec::new(),
        monomial_rule: Vec::new(),
    };
    for p in points {
        out.relations
            .push(recursion_relation_residuals(&theta, &a, &b, p)?);
        out.wave.push(st_wave_operator(sigma, &b, p)?);
        out.monomial_rule.push(m.value(p)?.sub(&b.value(p)?));
    }
    Ok(out)
}

/// Inputs of a pure-gauge perturbation, all functions of `(w, z)` only.
#[derive(Debug, Clone)]
pub struct GaugeData {
    pub f: Expr,
    pub g_up: [Expr; 2],
    pub g: Expr,
    pub h: Expr,
}

impl GaugeData {
    /// `G^A = d k / d w_A`, which makes `d G^A / d w^A` vanish.
    pub fn with_potential(f: Expr, k: Expr, g: Expr, h: Expr) -> GaugeData {
        GaugeData {
            f,
            g_up: [d_lower_w(&k, 0), d_lower_w(&k, 1)],
            g,
            h,
        }
    }

    fn check(&self) -> Result<()> {
        use second::*;
        for e in [&self.f, &self.g_up[0], &self.g_up[1], &self.g, &self.h] {
            if e.slots().iter().any(|&s| s == X || s == Y) || e.has_sigma() {
                return Err(Error::Dependency(e.print(Chart::Second)));
            }
        }
        Ok(())
    }
}

/// `d / d w_A`: `(-d_z, d_w)`.
pub fn d_lower_w(e: &Expr, a: usize) -> Expr {
    use second::*;
    if a == 0 {
        e.diff(Z).neg()
    } else {
        e.diff(W)
    }
}

/// `d / d w^A`: `(d_w, d_z)`.
pub fn d_upper_w(e: &Expr, a: usize) -> Expr {
    use second::*;
    e.diff(if a == 0 { W } else { Z })
}

/// `d / d x^A`: `(d_y, -d_x)`.
pub fn d_upper_x(e: &Expr, a: usize) -> Expr {
    use second::*;
    if a == 0 {
        e.diff(Y)
    } else {
        e.diff(X).neg()
    }
}

fn x_lower(a: usize) -> Expr {
    use second::*;
    Expr::var(if a == 0 { X } else { Y })
}

fn x_upper(a: usize) -> Expr {
    use second::*;
    if a == 0 {
        Expr::var(Y)
    } else {
        Expr::var(X).neg()
    }
}

/// Weights of the gauge combination: quadratic, cubic and last-term sign.
#[derive(Debug, Clone, Copy)]
pub struct GaugeWeights {
    pub quadratic: (i64, i64),
    pub cubic: (i64, i64),
    pub last: i64,
}

/// Weights under which every term solves the linearised equation.
pub const GAUGE_WEIGHTS: GaugeWeights = GaugeWeights {
    quadratic: (1, 2),
    cubic: (1, 6),
    last: 1,
};

/// The weights as displayed with the generator formula (unit weights, minus sign).
pub const GAUGE_WEIGHTS_LITERAL: GaugeWeights = GaugeWeights {
    quadratic: (1, 1),
    cubic: (1, 1),
    last: -1,
};

pub fn gauge_combination(d: &GaugeData, theta: &SecondPotential, wt: GaugeWeights) -> Result<Expr> {
    d.check()?;
    let th = &theta.theta;
    let mut terms = vec![d.f.clone()];
    for a in 0..2 {
        terms.push(x_lower(a).mul(&d.g_up[a]));
    }
    let mut quad = Vec::new();
    let mut cub = Vec::new();
    for a in 0..2 {
        let ga = d_lower_w(&d.g, a);
        let ha = d_lower_w(&d.h, a);
        for b in 0..2 {
            let gab = d_lower_w(&ga, b);
            quad.push(x_lower(a).mul(&x_lower(b)).mul(&gab));
            let hab = d_lower_w(&ha, b);
            for c in 0..2 {
                cub.push(
                    x_lower(a)
                        .mul(&x_lower(b))
                        .mul(&x_lower(c))
                        .mul(&d_lower_w(&hab, c)),
                );
            }
            let mixed = d_upper_w(&ha, b);
            terms.push(
                Expr::int(wt.last)
                    .mul(&x_upper(b))
                    .mul(&mixed)
                    .mul(&d_upper_x(th, a)),
            );
        }
        terms.push(ga.mul(&d_upper_x(th, a)));
        terms.push(ha.mul(&d_upper_w(th, a)));
    }
    terms.push(Expr::constant(rat(wt.quadratic.0, wt.quadratic.1)).mul(&Expr::sum(quad)));
    terms.push(Expr::constant(rat(wt.cubic.0, wt.cubic.1)).mul(&Expr::sum(cub)));
    Ok(Expr::sum(terms))
}

/// Pure-gauge perturbation of `theta`.
pub fn gauge_symmetry_perturbation(d: &GaugeData, theta: &SecondPotential) -> Result<Expr> {
    gauge_combination(d, theta, GAUGE_WEIGHTS)
}

/// Linearised residual of a gauge perturbation at each point.
pub fn gauge_residuals<S: Scalar>(
    d: &GaugeData,
    theta: &SecondPotential,
    wt: GaugeWeights,
    points: &[Point<S>],
) -> Result<Vec<S>> {
    let dt = gauge_combination(d, theta, wt)?;
    points
        .iter()
        .map(|p| linearized_second_residual(theta, &dt, p))
        .collect()
}

/// Components `L_0 .. L_n` of a flat Killing spinor, `L_i = K_{0'..0' 1'..1'}`
/// with `i` primed ones.
#[derive(Debug, Clone, PartialEq)]
pub struct KillingChain {
    pub n: usize,
    pub l: Vec<Poly>,
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

/// `L_i = (-1)^i C(n, i)^-1 R^i L_0`, requiring `R L_n = 0`.
pub fn killing_chain_flat(l0: &Poly, n: usize) -> Result<KillingChain> {
    use second::*;
    if !(l0.derivative(X).is_empty() && l0.derivative(Y).is_empty()) {
        return Err(Error::Dependency("L_0 must depend on (w, z) only".into()));
    }
    let mut r = l0.clone();
    let mut l = vec![l0.clone()];
    for i in 1..=n {
        r = recursion_step_poly(&r)?;
        let sign = if i % 2 == 1 { -1 } else { 1 };
        l.push(r.scale(&rat(sign, binomial(n, i))));
    }
    if !recursion_step_poly(&r)?.is_empty() {
        return Err(Error::Integrability("R L_n does not vanish".into()));
    }
    Ok(KillingChain { n, l })
}

impl KillingChain {
    /// `m d_{A1'} L_{m-1} + (n+1-m) d_{A0'} L_m` for `m = 1..n`, `A = 0, 1`.
    pub fn contracted_residuals(&self) -> Vec<[Poly; 2]> {
        let n = self.n;
        (1..=n)
            .map(|m| {
                std::array::from_fn(|a| {
                    d_frame_flat(&self.l[m - 1], a, 1)
                        .scale(&int(m as i64))
                        .add(&d_frame_flat(&self.l[m], a, 0).scale(&int((n + 1 - m) as i64)))
                })
            })
            .collect()
    }

    /// `K_{B'_1..B'_n}` for primed indices given as bits.
    pub fn component(&self, idx: &[usize]) -> &Poly {
        &self.l[idx.iter().filter(|&&b| b == 1).count()]
    }

    /// `sum_j d_{A c_j} K_{c without c_j}` over every `c` in `{0,1}^(n+1)`,
    /// the totally symmetrised Killing spinor operator.
    pub fn kspinor_residuals(&self) -> Vec<Poly> {
        let len = self.n + 1;
        let mut out = Vec::new();
        for a in 0..2 {
            for mask in 0..(1usize << len) {
                let c: Vec<usize> = (0..len).map(|t| (mask >> t) & 1).collect();
                let mut acc = Poly::zero(4);
                for j in 0..len {
                    let rest: Vec<usize> = c
                        .iter()
                        .enumerate()
                        .filter(|&(t, _)| t != j)
                        .map(|(_, &b)| b)
                        .collect();
                    acc = acc.add(&d_frame_flat(self.component(&rest), a, c[j]));
                }
                out.push(acc);
            }
        }
        out
    }
}
