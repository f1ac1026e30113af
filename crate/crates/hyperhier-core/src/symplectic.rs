//! Lagrangians, the boundary symplectic form and its compatibility with
//! the recursion operator, evaluated by exact polynomial integration.
//!
//! Three-forms are stored by their components on [`TRIPLES`]; the
//! component on `(a, b, c)` is the coefficient of `dx^a ^ dx^b ^ dx^c`.
//! Faces of a box carry the outward orientation, so
//! `int_{dM} beta = int_M d beta`.

use crate::chart::{first, second, Chart, Point};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::forms::{det4, TRIPLES};
use crate::heavenly::{eta, fi, FirstPotential, SecondPotential, SigmaForms, Tetrad};
use crate::poly::Poly;
use crate::recursion::{flat_wave_poly, recursion_power_poly};
use crate::scalar::{int, rat, Algebra, Scalar};
use num_rational::BigRational;
use num_traits::Zero;

/// `{f, g}_{ab} = f_a g_b - f_b g_a` on jets.
fn bracket<S: Scalar>(f: &crate::jet::Jet<S>, g: &crate::jet::Jet<S>, a: usize, b: usize) -> S {
    f.d(&[a]).mul(&g.d(&[b])).sub(&f.d(&[b]).mul(&g.d(&[a])))
}

/// `O (1 - (1/3) {O_zt, O_wt}_{wz})`, the coefficient of the volume form.
pub fn lagrangian_density_first<S: Scalar>(o: &FirstPotential, p: &Point<S>) -> Result<S> {
    use first::*;
    let j = o.omega.jet(p, 3)?;
    let b = bracket(&j.partial(ZT), &j.partial(WT), W, Z);
    let third = S::from_rational(&rat(1, 3));
    Ok(j.value().mul(&S::one().sub(&third.mul(&b))))
}

/// `(1/3) T {T_x, T_y}_{xy} - (1/2)(T_x T_w + T_y T_z)`.
pub fn lagrangian_density_second<S: Scalar>(t: &SecondPotential, p: &Point<S>) -> Result<S> {
    use second::*;
    let j = t.theta.jet(p, 3)?;
    let b = bracket(&j.partial(X), &j.partial(Y), X, Y);
    let cubic = S::from_rational(&rat(1, 3)).mul(j.value()).mul(&b);
    let quad = j.d(&[X]).mul(&j.d(&[W])).add(&j.d(&[Y]).mul(&j.d(&[Z])));
    Ok(cubic.sub(&S::from_rational(&rat(1, 2)).mul(&quad)))
}

fn poly_bracket(f: &Poly, g: &Poly, a: usize, b: usize) -> Poly {
    f.derivative(a)
        .mul(&g.derivative(b))
        .sub(&f.derivative(b).mul(&g.derivative(a)))
}

/// The second Lagrangian density of a polynomial potential.
pub fn lagrangian_second_poly(theta: &Poly) -> Poly {
    use second::*;
    let (tx, ty) = (theta.derivative(X), theta.derivative(Y));
    let cubic = theta.mul(&poly_bracket(&tx, &ty, X, Y)).scale(&rat(1, 3));
    let quad = tx
        .mul(&theta.derivative(W))
        .add(&ty.mul(&theta.derivative(Z)));
    cubic.sub(&quad.scale(&rat(1, 2)))
}

/// The second heavenly residual of a polynomial potential.
pub fn second_residual_poly(theta: &Poly) -> Poly {
    use second::*;
    let d2 = |a: usize, b: usize| theta.derivative(a).derivative(b);
    d2(X, W)
        .add(&d2(Y, Z))
        .add(&d2(X, X).mul(&d2(Y, Y)))
        .sub(&d2(X, Y).mul(&d2(X, Y)))
}

/// `d/de L(T + e delta)` at `e = 0` for the second density.
pub fn linearized_lagrangian_second(theta: &Poly, delta: &Poly) -> Poly {
    use second::*;
    let (tx, ty) = (theta.derivative(X), theta.derivative(Y));
    let (dx, dy) = (delta.derivative(X), delta.derivative(Y));
    let cubic = delta
        .mul(&poly_bracket(&tx, &ty, X, Y))
        .add(&theta.mul(&poly_bracket(&dx, &ty, X, Y).add(&poly_bracket(&tx, &dy, X, Y))))
        .scale(&rat(1, 3));
    let quad = dx
        .mul(&theta.derivative(W))
        .add(&tx.mul(&delta.derivative(W)))
        .add(&dy.mul(&theta.derivative(Z)))
        .add(&ty.mul(&delta.derivative(Z)));
    cubic.sub(&quad.scale(&rat(1, 2)))
}

/// `d/de int_box L(T + e delta)` at `e = 0`, exactly.
pub fn first_variation_second(theta: &Poly, delta: &Poly, bx: &BoundaryBox) -> BigRational {
    bx.volume_integral(&linearized_lagrangian_second(theta, delta))
}

/// A three-form on a four-dimensional chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeForm {
    pub chart: Chart,
    pub c: [Expr; 4],
}

impl ThreeForm {
    pub fn values<S: Scalar>(&self, p: &Point<S>) -> Result<[S; 4]> {
        let v: Vec<S> = self.c.iter().map(|e| e.value(p)).collect::<Result<_>>()?;
        Ok(std::array::from_fn(|t| v[t].clone()))
    }

    pub fn polys(&self) -> Result<[Poly; 4]> {
        let v: Vec<Poly> = self
            .c
            .iter()
            .map(|e| Poly::from_expr(e, self.chart))
            .collect::<Result<_>>()?;
        Ok(std::array::from_fn(|t| v[t].clone()))
    }

    pub fn add(&self, o: &ThreeForm) -> ThreeForm {
        ThreeForm {
            chart: self.chart,
            c: std::array::from_fn(|t| self.c[t].add(&o.c[t])),
        }
    }

    pub fn scale(&self, k: &Expr) -> ThreeForm {
        ThreeForm {
            chart: self.chart,
            c: std::array::from_fn(|t| self.c[t].mul(k)),
        }
    }
}

/// Index missing from the triple `t`.
pub const fn missing(t: usize) -> usize {
    3 - t
}

/// Sign of the permutation `(TRIPLES[t], missing(t))` of `(0,1,2,3)`.
pub const fn triple_sign(t: usize) -> i64 {
    if t % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Coefficient of `dx^0 ^ .. ^ dx^3` in `d beta` at `p`.
pub fn d_three_form<S: Scalar>(beta: &ThreeForm, p: &Point<S>) -> Result<S> {
    let mut acc = S::zero();
    for t in 0..4 {
        let d = missing(t);
        // dx^d ^ dx^{abc} = (-1)^d dx^{0123}
        let v = beta.c[t].diff(d).value(p)?;
        acc = if d % 2 == 0 { acc.add(&v) } else { acc.sub(&v) };
    }
    Ok(acc)
}

/// Inverse metric `g^{mn} = eta^{ab} E_a^m E_b^n` (here `eta^{-1} = eta`).
pub fn inverse_metric(t: &Tetrad) -> [[Expr; 4]; 4] {
    std::array::from_fn(|m| {
        std::array::from_fn(|n| {
            let mut acc = Expr::zero();
            for a in 0..4 {
                for b in 0..4 {
                    let s = eta(a, b);
                    if s != 0 {
                        acc = acc.add(&t.frame[a][m].mul(&t.frame[b][n]).mul(&Expr::int(s)));
                    }
                }
            }
            acc
        })
    })
}

/// Volume coefficient `nu_{0123}`: `e^{01'} ^ e^{10'} ^ e^{11'} ^ e^{00'}`.
pub fn volume_expr(t: &Tetrad) -> Expr {
    det4(&[
        t.coframe[fi(0, 1)].clone(),
        t.coframe[fi(1, 0)].clone(),
        t.coframe[fi(1, 1)].clone(),
        t.coframe[fi(0, 0)].clone(),
    ])
}

/// `(*d phi)_{abc} = nu_{abcd} g^{de} d_e phi`.
pub fn hodge_star_d(t: &Tetrad, phi: &Expr) -> ThreeForm {
    let gi = inverse_metric(t);
    let vol = volume_expr(t);
    let c = std::array::from_fn(|k| {
        let d = missing(k);
        let up = Expr::sum((0..4).map(|e| gi[d][e].mul(&phi.diff(e))));
        up.mul(&vol).mul(&Expr::int(triple_sign(k)))
    });
    ThreeForm { chart: t.chart, c }
}

/// `f1 *d f2 - f2 *d f1`.
pub fn current(t: &Tetrad, f1: &Expr, f2: &Expr) -> ThreeForm {
    let a = hodge_star_d(t, f2).scale(f1);
    let b = hodge_star_d(t, f1).scale(f2);
    a.add(&b.scale(&Expr::int(-1)))
}

/// A closed box `prod [lo_i, hi_i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryBox {
    pub lo: [BigRational; 4],
    pub hi: [BigRational; 4],
}

/// The face `x^axis = hi` (`upper`) or `x^axis = lo`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Face {
    pub axis: usize,
    pub upper: bool,
}

impl Face {
    /// Orientation relative to `dx^{abc}`, the remaining coordinates in order.
    pub fn sign(&self) -> i64 {
        let s = if self.axis % 2 == 0 { 1 } else { -1 };
        if self.upper {
            s
        } else {
            -s
        }
    }
}

impl BoundaryBox {
    pub fn cube(a: BigRational, b: BigRational) -> Result<Self> {
        if a >= b {
            return Err(Error::Mismatch("box needs lo < hi".into()));
        }
        Ok(BoundaryBox {
            lo: std::array::from_fn(|_| a.clone()),
            hi: std::array::from_fn(|_| b.clone()),
        })
    }

    pub fn faces(&self) -> [Face; 8] {
        std::array::from_fn(|k| Face {
            axis: k / 2,
            upper: k % 2 == 1,
        })
    }

    pub fn volume_integral(&self, f: &Poly) -> BigRational {
        let mut g = f.clone();
        for i in 0..4 {
            g = g.integrate(i, &self.lo[i], &self.hi[i]);
        }
        g.as_constant().unwrap_or_else(<BigRational as Zero>::zero)
    }

    /// Oriented integral of the polynomial 3-form `beta` over one face.
    pub fn face_integral(&self, beta: &[Poly; 4], face: Face) -> BigRational {
        let t = 3 - face.axis;
        let at = if face.upper {
            &self.hi[face.axis]
        } else {
            &self.lo[face.axis]
        };
        let mut g = beta[t].restrict(face.axis, at);
        for &i in &TRIPLES[t] {
            g = g.integrate(i, &self.lo[i], &self.hi[i]);
        }
        let v = g.as_constant().unwrap_or_else(<BigRational as Zero>::zero);
        v * int(face.sign())
    }

    pub fn face_integrals(&self, beta: &[Poly; 4]) -> [BigRational; 8] {
        let f = self.faces();
        std::array::from_fn(|k| self.face_integral(beta, f[k]))
    }

    pub fn boundary_integral(&self, beta: &[Poly; 4]) -> BigRational {
        self.face_integrals(beta)
            .into_iter()
            .fold(<BigRational as Zero>::zero(), |a, b| a + b)
    }
}

/// `d beta` of a polynomial 3-form, as the coefficient of `dx^{0123}`.
pub fn d_three_poly(beta: &[Poly; 4]) -> Poly {
    (0..4).fold(Poly::zero(4), |acc, t| {
        let d = missing(t);
        let v = beta[t].derivative(d);
        if d % 2 == 0 {
            acc.add(&v)
        } else {
            acc.sub(&v)
        }
    })
}

fn flat_tetrad() -> Tetrad {
    crate::heavenly::tetrad_from_theta(&SecondPotential::new(Expr::zero()))
}

/// `(2/3)(f1 *d f2 - f2 *d f1)` on the flat second-form background.
pub fn flat_current(f1: &Poly, f2: &Poly) -> Result<[Poly; 4]> {
    let j = current(&flat_tetrad(), &f1.to_expr(), &f2.to_expr()).polys()?;
    Ok(std::array::from_fn(|t| j[t].scale(&rat(2, 3))))
}

fn check_polynomial(f: &Poly) -> Result<()> {
    if f.nvars() != 4 {
        return Err(Error::Arity {
            expected: 4,
            got: f.nvars(),
        });
    }
    Ok(())
}

/// `Omega(d1, d2) = (2/3) int_{dM} d1 *d d2 - d2 *d d1` on the flat background.
pub fn symplectic_pair(d1: &Poly, d2: &Poly, bx: &BoundaryBox) -> Result<BigRational> {
    check_polynomial(d1)?;
    check_polynomial(d2)?;
    Ok(bx.boundary_integral(&flat_current(d1, d2)?))
}

/// `Omega^k(phi, phi') = Omega(R^k phi, phi')`.
pub fn omega_k(phi: &Poly, phi2: &Poly, k: usize, bx: &BoundaryBox) -> Result<BigRational> {
    symplectic_pair(&recursion_power_poly(phi, k)?, phi2, bx)
}

/// Whether `phi` lies in the flat solution space.
pub fn in_w_flat(phi: &Poly) -> bool {
    flat_wave_poly(phi).is_empty()
}

/// The one-form `d^{B'}_{A'} phi = e^{A B'} d_{A A'} phi`.
pub fn spinor_derivative(t: &Tetrad, bp: usize, ap: usize, phi: &Expr) -> [Expr; 4] {
    std::array::from_fn(|m| {
        Expr::sum((0..2).map(|a| {
            let d =
                crate::vfield::VectorField::new(t.chart, t.frame[fi(a, ap)].to_vec()).apply(phi);
            t.coframe[fi(a, bp)][m].mul(&d)
        }))
    })
}

/// `(dt, d0, d2, d) = (d^{0'}_{0'}, d^{0'}_{1'}, d^{1'}_{0'}, d^{1'}_{1'})`.
pub fn named_derivatives(t: &Tetrad, phi: &Expr) -> [[Expr; 4]; 4] {
    [
        spinor_derivative(t, 0, 0, phi),
        spinor_derivative(t, 0, 1, phi),
        spinor_derivative(t, 1, 0, phi),
        spinor_derivative(t, 1, 1, phi),
    ]
}

/// `S ^ a` for a two-form array and a one-form, on [`TRIPLES`].
pub fn wedge_two_one<S: Algebra>(s: &[[S; 4]; 4], a: &[S; 4]) -> [S; 4] {
    std::array::from_fn(|t| {
        let [i, j, k] = TRIPLES[t];
        s[i][j]
            .mul(&a[k])
            .sub(&s[i][k].mul(&a[j]))
            .add(&s[j][k].mul(&a[i]))
    })
}

struct WedgeCtx<S> {
    om: [[S; 4]; 4],
    al: [[S; 4]; 4],
    at: [[S; 4]; 4],
}

impl<S: Scalar> WedgeCtx<S> {
    /// `omega`, and half of `alpha` and `alpha-tilde`: the normalisation
    /// with `omega ^ omega = 2 alpha ^ alpha-tilde`.
    fn new(sf: &SigmaForms, p: &Point<S>) -> Result<Self> {
        let h = S::from_rational(&rat(1, 2));
        let half = |f: [[S; 4]; 4]| f.map(|r| r.map(|v| v.mul(&h)));
        Ok(WedgeCtx {
            om: sf.omega().values(p)?,
            al: half(sf.alpha().values(p)?),
            at: half(sf.alpha_tilde().values(p)?),
        })
    }
}

fn one_form<S: Scalar>(e: &[Expr; 4], p: &Point<S>) -> Result<[S; 4]> {
    let v: Vec<S> = e.iter().map(|c| c.value(p)).collect::<Result<_>>()?;
    Ok(std::array::from_fn(|m| v[m].clone()))
}

fn minus<S: Scalar>(a: [S; 4], b: [S; 4]) -> [S; 4] {
    std::array::from_fn(|k| a[k].sub(&b[k]))
}

fn plus<S: Scalar>(a: [S; 4], b: [S; 4]) -> [S; 4] {
    std::array::from_fn(|k| a[k].add(&b[k]))
}

/// Residuals of the wedge relations between the Sigma-forms and the
/// derivative one-forms of `phi`:
/// `w ^ dt = at ^ d2`, `w ^ d = -a ^ d0`, `w ^ d0 = at ^ d`,
/// `w ^ d2 = -a ^ dt`, `a ^ d = 0`, `at ^ dt = 0`, with `w = omega` and
/// `a`, `at` half of [`SigmaForms::alpha`], [`SigmaForms::alpha_tilde`].
pub fn sigma_wedge_residuals<S: Scalar>(
    t: &Tetrad,
    sf: &SigmaForms,
    phi: &Expr,
    p: &Point<S>,
) -> Result<[[S; 4]; 6]> {
    let c = WedgeCtx::new(sf, p)?;
    let [dt, d0, d2, d] = named_derivatives(t, phi);
    let [dt, d0, d2, d] = [
        one_form(&dt, p)?,
        one_form(&d0, p)?,
        one_form(&d2, p)?,
        one_form(&d, p)?,
    ];
    let w = wedge_two_one::<S>;
    Ok([
        minus(w(&c.om, &dt), w(&c.at, &d2)),
        plus(w(&c.om, &d), w(&c.al, &d0)),
        minus(w(&c.om, &d0), w(&c.at, &d)),
        plus(w(&c.om, &d2), w(&c.al, &dt)),
        w(&c.al, &d),
        w(&c.at, &dt),
    ])
}

/// Residuals of the four displayed identities
/// `w ^ d phi = -a ^ dt R phi`, `w ^ d2 phi = at ^ d2 R phi`,
/// `w ^ d2 R phi = -a ^ d0 phi`, `w ^ dt R phi = at ^ d phi`,
/// normalised as in [`sigma_wedge_residuals`].
pub fn tech_lemma_residuals<S: Scalar>(
    t: &Tetrad,
    sf: &SigmaForms,
    phi: &Expr,
    r_phi: &Expr,
    p: &Point<S>,
) -> Result<[[S; 4]; 4]> {
    let c = WedgeCtx::new(sf, p)?;
    let [_, d0, d2, d] = named_derivatives(t, phi);
    let [dtr, _, d2r, _] = named_derivatives(t, r_phi);
    let [d0, d2, d] = [one_form(&d0, p)?, one_form(&d2, p)?, one_form(&d, p)?];
    let [dtr, d2r] = [one_form(&dtr, p)?, one_form(&d2r, p)?];
    let w = wedge_two_one::<S>;
    Ok([
        plus(w(&c.om, &d), w(&c.al, &dtr)),
        minus(w(&c.om, &d2), w(&c.at, &d2r)),
        plus(w(&c.om, &d2r), w(&c.al, &d0)),
        minus(w(&c.om, &dtr), w(&c.at, &d)),
    ])
}

/// `d_w phi + (d_z + {phi, .}_{yx}) d_x^{-1} d_y phi` with `phi = -T_x`;
/// `d_x^{-1}` has zero `x`-independent part.
pub fn first_order_residual(theta: &Poly) -> Poly {
    use second::*;
    let phi = theta.derivative(X).scale(&int(-1));
    let t = phi.derivative(Y).antiderivative(X);
    let br = phi
        .derivative(Y)
        .mul(&t.derivative(X))
        .sub(&phi.derivative(X).mul(&t.derivative(Y)));
    phi.derivative(W).add(&t.derivative(Z)).add(&br)
}
