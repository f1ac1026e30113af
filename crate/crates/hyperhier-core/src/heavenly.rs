//! Heavenly equations, null tetrads, Σ-forms and Lax pairs.
//!
//! # Index conventions
//!
//! Frame indices `AA'` are flattened to `2A + A'`, so the order is
//! `00', 01', 10', 11'`.  Both spinor metrics have `eps_{01} = eps^{01} = 1`.
//! In the second-form chart `(w, z, x, y)`:
//!
//! | object              | value                                   |
//! |---------------------|-----------------------------------------|
//! | `x^A = x^{A0'}`     | `(y, -x)`                               |
//! | `x_A`               | `(x, y)`                                |
//! | `w^A = x^{A1'}`     | `(w, z)`                                |
//! | `d/dw_A`            | `(-d_z, d_w)`                           |
//! | `d_{00'}`           | `d_y`                                   |
//! | `d_{10'}`           | `-d_x`                                  |
//! | `d_{01'}`           | `d_w - T_xy d_y + T_yy d_x`             |
//! | `d_{11'}`           | `d_z + T_xx d_y - T_xy d_x`             |
//! | `e^{00'}`           | `dy + T_xy dw - T_xx dz`                |
//! | `e^{01'}`           | `dw`                                    |
//! | `e^{10'}`           | `-dx + T_yy dw - T_xy dz`               |
//! | `e^{11'}`           | `dz`                                    |
//!
//! The metric is `g = eps_{AB} eps_{A'B'} e^{AA'} e^{BB'}`, the volume form
//! `e^{01'} ^ e^{10'} ^ e^{11'} ^ e^{00'}`, and
//! `Sigma^{A'B'} = eps_{AB} e^{AA'} ^ e^{BB'}`.  With these choices the
//! Lax pair below is the literal `L_0 = d_{00'} - lambda d_{01'}`,
//! `L_1 = -(d_{10'} - lambda d_{11'})`, and the metric of
//! `T = sigma/(wx+zy)` is `2dwdx + 2dzdy - 4 sigma Q^-3 (w dz - z dw)^2`.

use crate::chart::{first, plane, second, Chart, Point};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::forms::{det4, TwoForm};
use crate::parse::parse_expression;
use crate::scalar::Scalar;
use crate::vfield::{commutator_at, AffineField, VectorField};
use num_rational::BigRational;

/// `eps_{AB}` (equal to `eps^{AB}` in these conventions).
pub const EPS: [[i64; 2]; 2] = [[0, 1], [-1, 0]];

/// Flattened frame index of `AA'`.
pub const fn fi(a: usize, ap: usize) -> usize {
    2 * a + ap
}

/// `eps_{AB} eps_{A'B'}` on flattened indices.
pub fn eta(a: usize, b: usize) -> i64 {
    EPS[a / 2][b / 2] * EPS[a % 2][b % 2]
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecondPotential {
    pub theta: Expr,
}

impl SecondPotential {
    pub fn new(theta: Expr) -> Self {
        SecondPotential { theta }
    }

    /// Parses in the second-form chart, binding `sigma` if given.
    pub fn parse(text: &str, sigma: Option<&BigRational>) -> Result<Self> {
        let e = parse_expression(text, Chart::Second)?;
        Ok(SecondPotential::new(match sigma {
            Some(s) => e.bind_sigma(s),
            None => e,
        }))
    }

    /// `sigma / (w x + z y)`.
    pub fn sparling_tod(sigma: &BigRational) -> Self {
        SecondPotential::new(Expr::constant(sigma.clone()).div(&q_expr()))
    }

    pub fn d(&self, slots: &[usize]) -> Expr {
        self.theta.diffs(slots)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FirstPotential {
    pub omega: Expr,
}

impl FirstPotential {
    pub fn new(omega: Expr) -> Self {
        FirstPotential { omega }
    }

    pub fn parse(text: &str, sigma: Option<&BigRational>) -> Result<Self> {
        let e = parse_expression(text, Chart::First)?;
        Ok(FirstPotential::new(match sigma {
            Some(s) => e.bind_sigma(s),
            None => e,
        }))
    }

    pub fn d(&self, slots: &[usize]) -> Expr {
        self.omega.diffs(slots)
    }
}

/// `Q = w x + z y`.
pub fn q_expr() -> Expr {
    use second::*;
    Expr::var(W) * Expr::var(X) + Expr::var(Z) * Expr::var(Y)
}

/// `T_xw + T_yz + T_xx T_yy - T_xy^2`.
pub fn second_heavenly_residual<S: Scalar>(t: &SecondPotential, p: &Point<S>) -> Result<S> {
    use second::*;
    let j = t.theta.jet(p, 2)?;
    Ok(j.d(&[X, W])
        .add(&j.d(&[Y, Z]))
        .add(&j.d(&[X, X]).mul(&j.d(&[Y, Y])))
        .sub(&j.d(&[X, Y]).powi(2)))
}

/// `O_{w zt} O_{z wt} - O_{w wt} O_{z zt} - 1`.
pub fn first_heavenly_residual<S: Scalar>(o: &FirstPotential, p: &Point<S>) -> Result<S> {
    use first::*;
    let j = o.omega.jet(p, 2)?;
    Ok(j.d(&[W, ZT])
        .mul(&j.d(&[Z, WT]))
        .sub(&j.d(&[W, WT]).mul(&j.d(&[Z, ZT])))
        .sub(&S::one()))
}

/// Linearisation of the second heavenly equation about `t` applied to `dt`.
pub fn linearized_second_residual<S: Scalar>(
    t: &SecondPotential,
    dt: &Expr,
    p: &Point<S>,
) -> Result<S> {
    use second::*;
    let j = t.theta.jet(p, 2)?;
    let d = dt.jet(p, 2)?;
    let two = S::from_i64(2);
    Ok(d.d(&[X, W])
        .add(&d.d(&[Y, Z]))
        .add(&j.d(&[Y, Y]).mul(&d.d(&[X, X])))
        .add(&j.d(&[X, X]).mul(&d.d(&[Y, Y])))
        .sub(&two.mul(&j.d(&[X, Y])).mul(&d.d(&[X, Y]))))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tetrad {
    pub chart: Chart,
    /// `frame[a][m]`: component of `d_a` along coordinate `m`.
    pub frame: [[Expr; 4]; 4],
    /// `coframe[a][m]`: component of `e^a` on `dx^m`.
    pub coframe: [[Expr; 4]; 4],
}

fn row(v: [Expr; 4]) -> [Expr; 4] {
    v
}

impl Tetrad {
    /// `e^a(d_b)` at `p`; the identity when the tetrad is consistent.
    pub fn duality_at<S: Scalar>(&self, p: &Point<S>) -> Result<[[S; 4]; 4]> {
        let f = self.frame_at(p)?;
        let c = self.coframe_at(p)?;
        Ok(std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                (0..4).fold(S::zero(), |acc, m| acc.add(&c[a][m].mul(&f[b][m])))
            })
        }))
    }

    pub fn frame_at<S: Scalar>(&self, p: &Point<S>) -> Result<[[S; 4]; 4]> {
        eval_matrix(&self.frame, p)
    }

    pub fn coframe_at<S: Scalar>(&self, p: &Point<S>) -> Result<[[S; 4]; 4]> {
        eval_matrix(&self.coframe, p)
    }

    pub fn frame_field(&self, a: usize) -> VectorField {
        VectorField::new(self.chart, self.frame[a].to_vec())
    }

    /// Coefficient of `dx0^dx1^dx2^dx3` in `e^{01'} ^ e^{10'} ^ e^{11'} ^ e^{00'}`.
    pub fn volume_at<S: Scalar>(&self, p: &Point<S>) -> Result<S> {
        let c = self.coframe_at(p)?;
        let m = [c[1].clone(), c[2].clone(), c[3].clone(), c[0].clone()];
        Ok(det4(&m))
    }
}

pub(crate) fn eval_matrix<S: Scalar>(m: &[[Expr; 4]; 4], p: &Point<S>) -> Result<[[S; 4]; 4]> {
    let mut out: [[S; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| S::zero()));
    for (a, r) in m.iter().enumerate() {
        for (b, e) in r.iter().enumerate() {
            out[a][b] = e.value(p)?;
        }
    }
    Ok(out)
}

pub fn tetrad_from_theta(t: &SecondPotential) -> Tetrad {
    use second::*;
    let (txx, tyy, txy) = (t.d(&[X, X]), t.d(&[Y, Y]), t.d(&[X, Y]));
    let z = Expr::zero;
    let one = Expr::one;
    let frame = [
        row([z(), z(), z(), one()]),
        row([one(), z(), tyy.clone(), txy.neg()]),
        row([z(), z(), Expr::int(-1), z()]),
        row([z(), one(), txy.neg(), txx.clone()]),
    ];
    let coframe = [
        row([txy.clone(), txx.neg(), z(), one()]),
        row([one(), z(), z(), z()]),
        row([tyy, txy.neg(), Expr::int(-1), z()]),
        row([z(), one(), z(), z()]),
    ];
    Tetrad {
        chart: Chart::Second,
        frame,
        coframe,
    }
}

/// Tetrad of a first-form potential: `e^{A1'} = dw^A`,
/// `e^{A0'} = O_{w_A wt_B} dwt_B`, with the frame its inverse.
///
/// The frame divides by `O_{w zt} O_{z wt} - O_{w wt} O_{z zt}`; points
/// where this vanishes are rejected by [`tetrad_from_omega_checked`].
pub fn tetrad_from_omega(o: &FirstPotential) -> Tetrad {
    use first::*;
    let h = |a: usize, b: usize| o.d(&[a, b]);
    let det = h(W, ZT).mul(&h(Z, WT)).sub(&h(W, WT).mul(&h(Z, ZT)));
    let z = Expr::zero;
    let one = Expr::one;
    let coframe = [
        row([z(), z(), h(Z, WT).neg(), h(Z, ZT).neg()]),
        row([one(), z(), z(), z()]),
        row([z(), z(), h(W, WT), h(W, ZT)]),
        row([z(), one(), z(), z()]),
    ];
    let frame = [
        row([z(), z(), h(W, ZT).neg().div(&det), h(W, WT).div(&det)]),
        row([one(), z(), z(), z()]),
        row([z(), z(), h(Z, ZT).neg().div(&det), h(Z, WT).div(&det)]),
        row([z(), one(), z(), z()]),
    ];
    Tetrad {
        chart: Chart::First,
        frame,
        coframe,
    }
}

/// As [`tetrad_from_omega`], failing if the Hessian block degenerates at `p`.
pub fn tetrad_from_omega_checked<S: Scalar>(o: &FirstPotential, p: &Point<S>) -> Result<Tetrad> {
    use first::*;
    let j = o.omega.jet(p, 2)?;
    let det = j
        .d(&[W, ZT])
        .mul(&j.d(&[Z, WT]))
        .sub(&j.d(&[W, WT]).mul(&j.d(&[Z, ZT])));
    if det.vanishes() {
        return Err(Error::DegenerateHessian);
    }
    Ok(tetrad_from_omega(o))
}

/// Null tetrad of `2 dw dq + 2 dz dp + f dz^2` in the chart `(w, z, q, p)`.
pub fn tetrad_plane_wave(f: &Expr) -> Tetrad {
    let half = f.div(&Expr::int(2));
    let z = Expr::zero;
    let one = Expr::one;
    let coframe = [
        row([z(), half.clone(), z(), one()]),
        row([one(), z(), z(), z()]),
        row([z(), z(), Expr::int(-1), z()]),
        row([z(), one(), z(), z()]),
    ];
    let frame = [
        row([z(), z(), z(), one()]),
        row([one(), z(), z(), z()]),
        row([z(), z(), Expr::int(-1), z()]),
        row([z(), one(), z(), half.neg()]),
    ];
    Tetrad {
        chart: Chart::PlaneWave,
        frame,
        coframe,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricField {
    pub chart: Chart,
    pub g: [[Expr; 4]; 4],
}

impl MetricField {
    pub fn values<S: Scalar>(&self, p: &Point<S>) -> Result<[[S; 4]; 4]> {
        eval_matrix(&self.g, p)
    }

    /// `g(u, v)` at `p`.
    pub fn pair<S: Scalar>(&self, p: &Point<S>, u: &[S], v: &[S]) -> Result<S> {
        let g = self.values(p)?;
        let mut acc = S::zero();
        for m in 0..4 {
            for n in 0..4 {
                acc = acc.add(&g[m][n].mul(&u[m]).mul(&v[n]));
            }
        }
        Ok(acc)
    }

    /// Metric with the given components; symmetrised from the upper triangle.
    pub fn from_upper(chart: Chart, g: [[Expr; 4]; 4]) -> MetricField {
        MetricField {
            chart,
            g: std::array::from_fn(|m| {
                std::array::from_fn(|n| {
                    if m <= n {
                        g[m][n].clone()
                    } else {
                        g[n][m].clone()
                    }
                })
            }),
        }
    }
}

pub fn metric_from_tetrad(t: &Tetrad) -> MetricField {
    let g = std::array::from_fn(|m| {
        std::array::from_fn(|n| {
            let mut acc = Expr::zero();
            for a in 0..4 {
                for b in 0..4 {
                    let s = eta(a, b);
                    if s != 0 {
                        let term = t.coframe[a][m].mul(&t.coframe[b][n]);
                        acc = if s > 0 {
                            acc.add(&term)
                        } else {
                            acc.sub(&term)
                        };
                    }
                }
            }
            acc
        })
    });
    MetricField { chart: t.chart, g }
}

/// The plane wave metric `2 dw dq + 2 dz dp + f dz^2`.
pub fn plane_wave_metric(f: &Expr) -> MetricField {
    use plane::*;
    let mut g: [[Expr; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| Expr::zero()));
    g[W][Q] = Expr::one();
    g[Z][P] = Expr::one();
    g[Z][Z] = f.clone();
    MetricField::from_upper(Chart::PlaneWave, g)
}

/// `Sigma^{0'0'} = -alphatilde`, `Sigma^{0'1'} = omega`, `Sigma^{1'1'} = alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaForms {
    pub s00: TwoForm,
    pub s01: TwoForm,
    pub s11: TwoForm,
}

impl SigmaForms {
    pub fn alpha(&self) -> &TwoForm {
        &self.s11
    }

    pub fn omega(&self) -> &TwoForm {
        &self.s01
    }

    pub fn alpha_tilde(&self) -> TwoForm {
        self.s00.scale(&Expr::int(-1))
    }

    /// `Sigma(lambda) = lambda^2 Sigma^{0'0'} + 2 lambda Sigma^{0'1'} + Sigma^{1'1'}`,
    /// i.e. `pi_{A'} = (lambda, 1)`.
    pub fn pencil(&self, lambda: &BigRational) -> TwoForm {
        let l = Expr::constant(lambda.clone());
        self.s00
            .scale(&l.mul(&l))
            .add(&self.s01.scale(&Expr::int(2).mul(&l)))
            .add(&self.s11)
    }
}

pub fn sigma_forms(t: &Tetrad) -> SigmaForms {
    let sig = |ap: usize, bp: usize| {
        let mut acc = TwoForm::zero(t.chart);
        for a in 0..2 {
            for b in 0..2 {
                let e = EPS[a][b];
                if e != 0 {
                    let w = TwoForm::wedge(t.chart, &t.coframe[fi(a, ap)], &t.coframe[fi(b, bp)]);
                    acc = acc.add(&w.scale(&Expr::int(e)));
                }
            }
        }
        acc
    };
    SigmaForms {
        s00: sig(0, 0),
        s01: sig(0, 1),
        s11: sig(1, 1),
    }
}

/// Two lambda-affine vector fields.
#[derive(Debug, Clone, PartialEq)]
pub struct LaxPair {
    pub l: [AffineField; 2],
}

impl LaxPair {
    pub fn at(&self, lambda: &BigRational) -> [VectorField; 2] {
        [self.l[0].at(lambda), self.l[1].at(lambda)]
    }
}

/// `L_0 = d_y - lambda (d_w - T_xy d_y + T_yy d_x)`,
/// `L_1 = d_x + lambda (d_z + T_xx d_y - T_xy d_x)`.
pub fn lax_pair_theta(t: &SecondPotential) -> LaxPair {
    use second::*;
    let (txx, tyy, txy) = (t.d(&[X, X]), t.d(&[Y, Y]), t.d(&[X, Y]));
    let c = Chart::Second;
    let z = Expr::zero;
    let l0 = AffineField {
        c0: VectorField::coordinate(c, Y, 1),
        c1: VectorField::new(c, vec![Expr::int(-1), z(), tyy.neg(), txy.clone()]),
    };
    let l1 = AffineField {
        c0: VectorField::coordinate(c, X, 1),
        c1: VectorField::new(c, vec![z(), Expr::one(), txy.neg(), txx]),
    };
    LaxPair { l: [l0, l1] }
}

/// `L_0 = O_{w wt} d_zt - O_{w zt} d_wt - lambda d_w`,
/// `L_1 = O_{z wt} d_zt - O_{z zt} d_wt - lambda d_z`.
pub fn lax_pair_omega(o: &FirstPotential) -> LaxPair {
    use first::*;
    let h = |a: usize, b: usize| o.d(&[a, b]);
    let c = Chart::First;
    let z = Expr::zero;
    let l0 = AffineField {
        c0: VectorField::new(c, vec![z(), z(), h(W, ZT).neg(), h(W, WT)]),
        c1: VectorField::coordinate(c, W, -1),
    };
    let l1 = AffineField {
        c0: VectorField::new(c, vec![z(), z(), h(Z, ZT).neg(), h(Z, WT)]),
        c1: VectorField::coordinate(c, Z, -1),
    };
    LaxPair { l: [l0, l1] }
}

/// Components of `[L_0, L_1]` at `p` for the given lambda.
pub fn lax_commutator_residual<S: Scalar>(
    lp: &LaxPair,
    lambda: &BigRational,
    p: &Point<S>,
) -> Result<Vec<S>> {
    let [a, b] = lp.at(lambda);
    commutator_at(&a, &b, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn pt(v: [i64; 4]) -> Point<BigRational> {
        Point::new(Chart::Second, v.iter().map(|&x| int(x)).collect()).unwrap()
    }

    #[test]
    fn flat_and_st_solve() {
        let p = pt([1, 1, 1, 1]);
        let flat = SecondPotential::new(Expr::zero());
        assert_eq!(second_heavenly_residual(&flat, &p).unwrap(), int(0));
        let st = SecondPotential::sparling_tod(&int(1));
        assert_eq!(second_heavenly_residual(&st, &p).unwrap(), int(0));
    }

    #[test]
    fn first_form_examples() {
        let p = Point::new(Chart::First, vec![int(2), int(3), int(-1), int(5)]).unwrap();
        let f = |s: &str| FirstPotential::parse(s, None).unwrap();
        assert_eq!(
            first_heavenly_residual(&f("w*zt + z*wt"), &p).unwrap(),
            int(0)
        );
        assert_eq!(
            first_heavenly_residual(&f("w*zt + z*wt + zt^2"), &p).unwrap(),
            int(0)
        );
        assert_eq!(first_heavenly_residual(&f("w*zt"), &p).unwrap(), int(-1));
    }

    #[test]
    fn eta_table() {
        assert_eq!(eta(fi(0, 0), fi(1, 1)), 1);
        assert_eq!(eta(fi(0, 1), fi(1, 0)), -1);
        assert_eq!(eta(fi(0, 0), fi(0, 1)), 0);
    }

    #[test]
    fn plane_wave_tetrad_matches_metric() {
        let f = parse_expression("q^2", Chart::PlaneWave).unwrap();
        let t = tetrad_plane_wave(&f);
        let g = metric_from_tetrad(&t);
        let h = plane_wave_metric(&f);
        let p = Point::new(Chart::PlaneWave, vec![int(1), rat(1, 2), int(3), int(-2)]).unwrap();
        assert_eq!(g.values(&p).unwrap(), h.values(&p).unwrap());
    }
}
