//! Levi-Civita connection, Riemann, Ricci and Weyl tensors from metric
//! components, with the spinor split of Weyl and trace-free Ricci.
//!
//! Spinor parts are read off in the frame of a [`Tetrad`] using
//! `C_{AA'BB'CC'DD'} = eps_{A'B'} eps_{C'D'} C_{ABCD} + eps_{AB} eps_{CD} Ct_{A'B'C'D'}`,
//! so `C_{ABCD} = 1/4 eps^{A'B'} eps^{C'D'} C_{AA'BB'CC'DD'}` and likewise for
//! the primed spinor.

use crate::chart::Point;
use crate::error::{Error, Result};
use crate::forms::det4;
use crate::heavenly::{eta, fi, MetricField, Tetrad, EPS};
use crate::jet::Jet;
use crate::scalar::{Algebra, Scalar};

type M4<S> = [[S; 4]; 4];
type T3<S> = [[[S; 4]; 4]; 4];
type T4<S> = [[[[S; 4]; 4]; 4]; 4];

fn zeros2<S: Scalar>() -> M4<S> {
    std::array::from_fn(|_| std::array::from_fn(|_| S::zero()))
}

fn zeros4<S: Scalar>() -> T4<S> {
    std::array::from_fn(|_| std::array::from_fn(|_| zeros2()))
}

/// Matrix inverse by the adjugate; `None` if the determinant cannot be inverted.
pub fn inverse4<A: Algebra>(m: &[[A; 4]; 4]) -> Option<[[A; 4]; 4]> {
    let det = det4(m);
    let minor = |i: usize, j: usize| {
        let r: Vec<usize> = (0..4).filter(|&k| k != i).collect();
        let c: Vec<usize> = (0..4).filter(|&k| k != j).collect();
        let e = |a: usize, b: usize| &m[r[a]][c[b]];
        e(0, 0)
            .mul(&e(1, 1).mul(e(2, 2)).sub(&e(1, 2).mul(e(2, 1))))
            .sub(&e(0, 1).mul(&e(1, 0).mul(e(2, 2)).sub(&e(1, 2).mul(e(2, 0)))))
            .add(&e(0, 2).mul(&e(1, 0).mul(e(2, 1)).sub(&e(1, 1).mul(e(2, 0)))))
    };
    let mut out: Vec<Vec<A>> = Vec::with_capacity(4);
    for i in 0..4 {
        let mut row = Vec::with_capacity(4);
        for j in 0..4 {
            let c = minor(j, i);
            let c = if (i + j) % 2 == 1 { c.neg() } else { c };
            row.push(c.div(&det)?);
        }
        out.push(row);
    }
    Some(std::array::from_fn(|i| {
        std::array::from_fn(|j| out[i][j].clone())
    }))
}

/// `Gamma^a_{bc}` at a point, with first-derivative jets.
#[derive(Debug, Clone)]
pub struct Christoffel<S> {
    pub gamma: Vec<Vec<Vec<Jet<S>>>>,
}

impl<S: Scalar> Christoffel<S> {
    pub fn value(&self, a: usize, b: usize, c: usize) -> &S {
        self.gamma[a][b][c].value()
    }

    pub fn values(&self) -> T3<S> {
        std::array::from_fn(|a| {
            std::array::from_fn(|b| std::array::from_fn(|c| self.value(a, b, c).clone()))
        })
    }
}

/// Metric data needed for curvature: `g` and `g^-1` at the point, and `Gamma`.
#[derive(Debug, Clone)]
pub struct Connection<S> {
    pub g: M4<S>,
    pub ginv: M4<S>,
    /// First derivatives `d_c g_{ab}` as `dg[c][a][b]`.
    pub dg: T3<S>,
    pub christoffel: Christoffel<S>,
}

pub fn connection<S: Scalar>(g: &MetricField, p: &Point<S>) -> Result<Connection<S>> {
    let mut gj: Vec<Vec<Jet<S>>> = Vec::with_capacity(4);
    for row in &g.g {
        gj.push(row.iter().map(|e| e.jet(p, 2)).collect::<Result<_>>()?);
    }
    let garr: [[Jet<S>; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| gj[i][j].clone()));
    let inv = inverse4(&garr).ok_or(Error::Singular)?;
    let half = S::one().div(&S::from_i64(2)).expect("two is invertible");
    let dgj: Vec<Vec<Vec<Jet<S>>>> = (0..4)
        .map(|c| {
            (0..4)
                .map(|a| (0..4).map(|b| gj[a][b].partial(c)).collect())
                .collect()
        })
        .collect();
    let mut gamma = Vec::with_capacity(4);
    for a in 0..4 {
        let mut ga = Vec::with_capacity(4);
        for b in 0..4 {
            let mut gb = Vec::with_capacity(4);
            for c in 0..4 {
                let mut acc: Option<Jet<S>> = None;
                for d in 0..4 {
                    let k = dgj[b][d][c].add(&dgj[c][d][b]).sub(&dgj[d][b][c]);
                    let t = inv[a][d].mul(&k);
                    acc = Some(match acc {
                        None => t,
                        Some(x) => x.add(&t),
                    });
                }
                gb.push(acc.expect("four terms").scale(&half));
            }
            ga.push(gb);
        }
        gamma.push(ga);
    }
    Ok(Connection {
        g: std::array::from_fn(|i| std::array::from_fn(|j| gj[i][j].value().clone())),
        ginv: std::array::from_fn(|i| std::array::from_fn(|j| inv[i][j].value().clone())),
        dg: std::array::from_fn(|c| {
            std::array::from_fn(|a| std::array::from_fn(|b| dgj[c][a][b].value().clone()))
        }),
        christoffel: Christoffel { gamma },
    })
}

pub fn christoffel<S: Scalar>(g: &MetricField, p: &Point<S>) -> Result<Christoffel<S>> {
    Ok(connection(g, p)?.christoffel)
}

/// `(nabla_c g)_{ab}` from the connection; zero for the Levi-Civita connection.
pub fn metric_compatibility<S: Scalar>(c: &Connection<S>) -> T3<S> {
    let gm = c.christoffel.values();
    std::array::from_fn(|k| {
        std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                let mut acc = c.dg[k][a][b].clone();
                for e in 0..4 {
                    acc = acc.sub(&gm[e][k][a].mul(&c.g[e][b]));
                    acc = acc.sub(&gm[e][k][b].mul(&c.g[a][e]));
                }
                acc
            })
        })
    })
}

/// `R^a_{bcd} = d_c Gamma^a_{db} - d_d Gamma^a_{cb} + Gamma^a_{ce} Gamma^e_{db} - Gamma^a_{de} Gamma^e_{cb}`.
pub fn riemann_from<S: Scalar>(c: &Connection<S>) -> T4<S> {
    let g = &c.christoffel.gamma;
    let v = c.christoffel.values();
    let mut r = zeros4::<S>();
    for a in 0..4 {
        for b in 0..4 {
            for cc in 0..4 {
                for d in 0..4 {
                    let mut acc = g[a][d][b]
                        .partial(cc)
                        .value()
                        .sub(g[a][cc][b].partial(d).value());
                    for e in 0..4 {
                        acc = acc.add(&v[a][cc][e].mul(&v[e][d][b]));
                        acc = acc.sub(&v[a][d][e].mul(&v[e][cc][b]));
                    }
                    r[a][b][cc][d] = acc;
                }
            }
        }
    }
    r
}

pub fn riemann<S: Scalar>(g: &MetricField, p: &Point<S>) -> Result<T4<S>> {
    Ok(riemann_from(&connection(g, p)?))
}

/// `R_{abcd} = g_{ae} R^e_{bcd}`.
pub fn lower_first<S: Scalar>(g: &M4<S>, r: &T4<S>) -> T4<S> {
    let mut out = zeros4::<S>();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    out[a][b][c][d] =
                        (0..4).fold(S::zero(), |acc, e| acc.add(&g[a][e].mul(&r[e][b][c][d])));
                }
            }
        }
    }
    out
}

/// `R_{bd} = R^a_{bad}` and `R = g^{bd} R_{bd}`.
pub fn ricci_from<S: Scalar>(ginv: &M4<S>, r: &T4<S>) -> (M4<S>, S) {
    let ric: M4<S> = std::array::from_fn(|b| {
        std::array::from_fn(|d| (0..4).fold(S::zero(), |acc, a| acc.add(&r[a][b][a][d])))
    });
    let mut s = S::zero();
    for b in 0..4 {
        for d in 0..4 {
            s = s.add(&ginv[b][d].mul(&ric[b][d]));
        }
    }
    (ric, s)
}

pub fn ricci<S: Scalar>(g: &MetricField, p: &Point<S>) -> Result<(M4<S>, S)> {
    let c = connection(g, p)?;
    Ok(ricci_from(&c.ginv, &riemann_from(&c)))
}

/// Weyl tensor with all indices down, in four dimensions.
pub fn weyl_from<S: Scalar>(g: &M4<S>, rdown: &T4<S>, ric: &M4<S>, scalar: &S) -> T4<S> {
    let half = S::one().div(&S::from_i64(2)).expect("invertible");
    let sixth = scalar.div(&S::from_i64(6)).expect("invertible");
    let mut c = zeros4::<S>();
    for a in 0..4 {
        for b in 0..4 {
            for cc in 0..4 {
                for d in 0..4 {
                    let ric_part = g[a][cc]
                        .mul(&ric[b][d])
                        .sub(&g[a][d].mul(&ric[b][cc]))
                        .sub(&g[b][cc].mul(&ric[a][d]))
                        .add(&g[b][d].mul(&ric[a][cc]));
                    let sc = g[a][cc].mul(&g[b][d]).sub(&g[a][d].mul(&g[b][cc]));
                    c[a][b][cc][d] = rdown[a][b][cc][d]
                        .sub(&half.mul(&ric_part))
                        .add(&sixth.mul(&sc));
                }
            }
        }
    }
    c
}

/// `T(E_a, E_b, E_c, E_d)` for the tetrad frame `E`.
pub fn to_frame4<S: Scalar>(frame: &M4<S>, t: &T4<S>) -> T4<S> {
    // contract one slot at a time
    let mut cur = t.clone();
    for slot in 0..4 {
        let mut next = zeros4::<S>();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        let idx = [i, j, k, l];
                        let mut acc = S::zero();
                        for m in 0..4 {
                            let mut src = idx;
                            src[slot] = m;
                            acc = acc.add(
                                &frame[idx[slot]][m].mul(&cur[src[0]][src[1]][src[2]][src[3]]),
                            );
                        }
                        next[i][j][k][l] = acc;
                    }
                }
            }
        }
        cur = next;
    }
    cur
}

pub fn to_frame2<S: Scalar>(frame: &M4<S>, t: &M4<S>) -> M4<S> {
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let mut acc = S::zero();
            for m in 0..4 {
                for n in 0..4 {
                    acc = acc.add(&frame[a][m].mul(&frame[b][n]).mul(&t[m][n]));
                }
            }
            acc
        })
    })
}

/// `C_{ABCD}` (unprimed) or `Ct_{A'B'C'D'}` (primed) from frame Weyl components.
pub fn weyl_spinor<S: Scalar>(cf: &T4<S>, primed: bool) -> [[[[S; 2]; 2]; 2]; 2] {
    let quarter = S::one().div(&S::from_i64(4)).expect("invertible");
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            std::array::from_fn(|c| {
                std::array::from_fn(|d| {
                    let mut acc = S::zero();
                    for s in 0..2 {
                        for t in 0..2 {
                            for u in 0..2 {
                                for v in 0..2 {
                                    let e = EPS[s][t] * EPS[u][v];
                                    if e == 0 {
                                        continue;
                                    }
                                    let x = if primed {
                                        &cf[fi(s, a)][fi(t, b)][fi(u, c)][fi(v, d)]
                                    } else {
                                        &cf[fi(a, s)][fi(b, t)][fi(c, u)][fi(d, v)]
                                    };
                                    acc = if e > 0 { acc.add(x) } else { acc.sub(x) };
                                }
                            }
                        }
                    }
                    acc.mul(&quarter)
                })
            })
        })
    })
}

/// The five independent components `psi_k = C_{(0..0)(1..1)}` with `k` ones.
pub fn five_components<S: Scalar>(c: &[[[[S; 2]; 2]; 2]; 2]) -> [S; 5] {
    [
        c[0][0][0][0].clone(),
        c[0][0][0][1].clone(),
        c[0][0][1][1].clone(),
        c[0][1][1][1].clone(),
        c[1][1][1][1].clone(),
    ]
}

/// Whether a rank-four two-spinor is totally symmetric.
pub fn totally_symmetric<S: Scalar>(c: &[[[[S; 2]; 2]; 2]; 2]) -> bool {
    for a in 0..2 {
        for b in 0..2 {
            for cc in 0..2 {
                for d in 0..2 {
                    let v = &c[a][b][cc][d];
                    if v != &c[b][a][cc][d] || v != &c[a][cc][b][d] || v != &c[a][b][d][cc] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Frame components rebuilt from the two Weyl spinors.
pub fn reassemble<S: Scalar>(c: &[[[[S; 2]; 2]; 2]; 2], ct: &[[[[S; 2]; 2]; 2]; 2]) -> T4<S> {
    let mut out = zeros4::<S>();
    for a in 0..4 {
        for b in 0..4 {
            for cc in 0..4 {
                for d in 0..4 {
                    let (ua, pa) = (a / 2, a % 2);
                    let (ub, pb) = (b / 2, b % 2);
                    let (uc, pc) = (cc / 2, cc % 2);
                    let (ud, pd) = (d / 2, d % 2);
                    let e1 = EPS[pa][pb] * EPS[pc][pd];
                    let e2 = EPS[ua][ub] * EPS[uc][ud];
                    let mut acc = S::zero();
                    if e1 != 0 {
                        acc = acc.add(&c[ua][ub][uc][ud].mul(&S::from_i64(e1)));
                    }
                    if e2 != 0 {
                        acc = acc.add(&ct[pa][pb][pc][pd].mul(&S::from_i64(e2)));
                    }
                    out[a][b][cc][d] = acc;
                }
            }
        }
    }
    out
}

/// Curvature summary at one point.
#[derive(Debug, Clone)]
pub struct CurvatureReport<S> {
    /// `R_{ab}`, upper triangle in row order (10 entries).
    pub ricci: Vec<S>,
    pub scalar: S,
    pub asd_weyl: [S; 5],
    pub sd_weyl: [S; 5],
    /// `Phi_{ABA'B'}` for `AB, A'B'` in `00, 01, 11` (9 entries).
    pub phi: Vec<S>,
    pub ricci_max_abs: f64,
    pub asd_weyl_max_abs: f64,
    pub sd_weyl_max_abs: f64,
    pub phi_max_abs: f64,
    pub riemann_max_abs: f64,
    /// Largest deviation between reassembled and direct Weyl components.
    pub reassembly_max_abs: f64,
    pub spinors_symmetric: bool,
}

fn max_abs<'a, S: Scalar + 'a>(it: impl IntoIterator<Item = &'a S>) -> f64 {
    it.into_iter().map(|x| x.abs_f64()).fold(0.0, f64::max)
}

/// Checks `g(E_a, E_b) = eps eps` to tolerance (exactly in exact mode).
pub fn check_duality<S: Scalar>(g: &M4<S>, frame: &M4<S>, tol: f64) -> Result<()> {
    let gf = to_frame2(frame, g);
    for a in 0..4 {
        for b in 0..4 {
            let d = gf[a][b].sub(&S::from_i64(eta(a, b)));
            if !is_zero(&d, tol) {
                return Err(Error::TetradMismatch);
            }
        }
    }
    Ok(())
}

/// Exact zero in exact mode, `|x| < tol` in float mode.
pub fn is_zero<S: Scalar>(x: &S, tol: f64) -> bool {
    match S::MODE {
        crate::scalar::Mode::Exact => x.vanishes(),
        crate::scalar::Mode::Float => x.abs_f64() < tol,
    }
}

pub fn weyl_spinors<S: Scalar>(
    g: &MetricField,
    t: &Tetrad,
    p: &Point<S>,
    tol: f64,
) -> Result<CurvatureReport<S>> {
    let c = connection(g, p)?;
    let frame = t.frame_at(p)?;
    check_duality(&c.g, &frame, tol)?;
    let rup = riemann_from(&c);
    let (ric, scalar) = ricci_from(&c.ginv, &rup);
    let rdown = lower_first(&c.g, &rup);
    let weyl = weyl_from(&c.g, &rdown, &ric, &scalar);
    let cf = to_frame4(&frame, &weyl);
    let cs = weyl_spinor(&cf, false);
    let cts = weyl_spinor(&cf, true);
    let back = reassemble(&cs, &cts);
    let mut reassembly = 0.0f64;
    for a in 0..4 {
        for b in 0..4 {
            for cc in 0..4 {
                for d in 0..4 {
                    reassembly = reassembly.max(back[a][b][cc][d].sub(&cf[a][b][cc][d]).abs_f64());
                }
            }
        }
    }
    let rf = to_frame2(&frame, &ric);
    let half = S::one().div(&S::from_i64(2)).expect("invertible");
    let quarter_r = scalar.div(&S::from_i64(4)).expect("invertible");
    let sym = [(0, 0), (0, 1), (1, 1)];
    let mut phi = Vec::with_capacity(9);
    for &(a, b) in &sym {
        for &(ap, bp) in &sym {
            let (i, j) = (fi(a, ap), fi(b, bp));
            let tf = rf[i][j].sub(&quarter_r.mul(&S::from_i64(eta(i, j))));
            phi.push(tf.mul(&half));
        }
    }
    let ricci: Vec<S> = (0..4)
        .flat_map(|a| (a..4).map(move |b| (a, b)))
        .map(|(a, b)| ric[a][b].clone())
        .collect();
    let asd = five_components(&cs);
    let sd = five_components(&cts);
    let mut riemann_max = 0.0f64;
    for a in rup.iter().flatten().flatten().flatten() {
        riemann_max = riemann_max.max(a.abs_f64());
    }
    Ok(CurvatureReport {
        ricci_max_abs: max_abs(&ricci),
        asd_weyl_max_abs: max_abs(&asd),
        sd_weyl_max_abs: max_abs(&sd),
        phi_max_abs: max_abs(&phi),
        riemann_max_abs: riemann_max,
        reassembly_max_abs: reassembly,
        spinors_symmetric: totally_symmetric(&cs) && totally_symmetric(&cts),
        ricci,
        scalar,
        asd_weyl: asd,
        sd_weyl: sd,
        phi,
    })
}

/// First point and component at which a vacuum check failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub point: usize,
    pub quantity: &'static str,
    pub component: usize,
    pub value: String,
}

#[derive(Debug, Clone)]
pub struct AsdVacuumReport<S> {
    pub reports: Vec<CurvatureReport<S>>,
    pub pass: bool,
    pub violation: Option<Violation>,
}

/// Ricci-flat with vanishing self-dual Weyl spinor at every point.
pub fn verify_asd_vacuum<S: Scalar>(
    g: &MetricField,
    t: &Tetrad,
    points: &[Point<S>],
    tol: f64,
) -> Result<AsdVacuumReport<S>> {
    let mut reports = Vec::with_capacity(points.len());
    let mut violation = None;
    for (i, p) in points.iter().enumerate() {
        let r = weyl_spinors(g, t, p, tol)?;
        if violation.is_none() {
            let found = r
                .ricci
                .iter()
                .position(|x| !is_zero(x, tol))
                .map(|k| ("ricci", k, r.ricci[k].to_text()))
                .or_else(|| {
                    r.sd_weyl
                        .iter()
                        .position(|x| !is_zero(x, tol))
                        .map(|k| ("sd_weyl", k, r.sd_weyl[k].to_text()))
                });
            if let Some((quantity, component, value)) = found {
                violation = Some(Violation {
                    point: i,
                    quantity,
                    component,
                    value,
                });
            }
        }
        reports.push(r);
    }
    Ok(AsdVacuumReport {
        pass: violation.is_none(),
        violation,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Chart;
    use crate::scalar::int;
    use num_rational::BigRational;

    #[test]
    fn inverse_of_jet_free_matrix() {
        let m: M4<BigRational> = [
            [int(2), int(1), int(0), int(0)],
            [int(1), int(1), int(0), int(0)],
            [int(0), int(0), int(0), int(3)],
            [int(0), int(0), int(1), int(0)],
        ];
        let inv = inverse4(&m).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let s = (0..4).fold(int(0), |a, k| a + &m[i][k] * &inv[k][j]);
                assert_eq!(s, int((i == j) as i64));
            }
        }
    }

    #[test]
    fn flat_metric_has_no_curvature() {
        let t = crate::heavenly::tetrad_from_theta(&crate::heavenly::SecondPotential::new(
            crate::expr::Expr::zero(),
        ));
        let g = crate::heavenly::metric_from_tetrad(&t);
        let p = Point::new(Chart::Second, vec![int(1), int(2), int(3), int(5)]).unwrap();
        let r = weyl_spinors(&g, &t, &p, 0.0).unwrap();
        assert_eq!(r.riemann_max_abs, 0.0);
    }
}
