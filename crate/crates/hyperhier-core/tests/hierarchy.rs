use hyperhier_core::chart::{ext_slot, Chart, Point};
use hyperhier_core::heavenly::{
    lax_pair_theta, metric_from_tetrad, second_heavenly_residual, tetrad_from_theta,
    SecondPotential,
};
use hyperhier_core::hierarchy::*;
use hyperhier_core::poly::Poly;
use hyperhier_core::scalar::{int, rat, Algebra};
use hyperhier_core::twistor::{flat_twistor_curve, series_solve_omega};
use hyperhier_core::{parse_expression, BigRational, Expr};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_poly(rng: &mut ChaCha8Rng, nvars: usize) -> Expr {
    Poly::dense(nvars, 3, &mut || rng.gen_range(-2..=2)).to_expr()
}

fn random_point(rng: &mut ChaCha8Rng, chart: Chart) -> Point<BigRational> {
    let coords = (0..chart.arity())
        .map(|_| rat(rng.gen_range(-7..=7), rng.gen_range(1..=7)))
        .collect();
    Point::new(chart, coords).unwrap()
}

fn all_zero(v: &[BigRational]) -> bool {
    v.iter().all(|x| x.vanishes())
}

#[test]
fn n1_residual_is_second_heavenly() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let t = SecondPotential::new(random_poly(&mut rng, 4));
        let e = ExtendedPotential::embed_second(&t, 1).unwrap();
        for _ in 0..3 {
            let p = random_point(&mut rng, Chart::Second);
            let c = &p.coords;
            let q = Point::new(
                Chart::Extended(1),
                vec![c[3].clone(), c[2].clone(), c[0].clone(), -c[1].clone()],
            )
            .unwrap();
            assert_eq!(
                hierarchy_residual(&e, 0, 1, 1, 1, &q).unwrap(),
                second_heavenly_residual(&t, &p).unwrap()
            );
        }
    }
}

#[test]
fn n1_lax_fields_are_second_form_pair() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..5 {
        let t = SecondPotential::new(random_poly(&mut rng, 4));
        let e = ExtendedPotential::embed_second(&t, 1).unwrap();
        let lp = lax_pair_theta(&t);
        for a in 0..2 {
            let l = lax_field(&e, a, 0).unwrap();
            let c0 = field_to_second(&l.c0).unwrap();
            let c1 = field_to_second(&l.c1).unwrap();
            for _ in 0..3 {
                let p = random_point(&mut rng, Chart::Second);
                assert_eq!(c0.values(&p).unwrap(), lp.l[a].c0.values(&p).unwrap());
                assert_eq!(c1.values(&p).unwrap(), lp.l[a].c1.values(&p).unwrap());
            }
        }
    }
}

#[test]
fn bracket_sign_and_leibniz() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let c = Chart::Extended(2);
    let x00 = Expr::var(ext_slot(0, 0));
    let x10 = Expr::var(ext_slot(1, 0));
    for _ in 0..5 {
        let p = random_point(&mut rng, c);
        assert_eq!(poisson_yx(&x00, &x10, &p).unwrap(), int(1));
        let (f, g, h) = (
            random_poly(&mut rng, 6),
            random_poly(&mut rng, 6),
            random_poly(&mut rng, 6),
        );
        assert!(poisson_yx(&f, &f, &p).unwrap().vanishes());
        let lhs = poisson_yx(&f, &g.mul(&h), &p).unwrap();
        let rhs = poisson_yx(&f, &g, &p).unwrap() * h.value(&p).unwrap()
            + g.value(&p).unwrap() * poisson_yx(&f, &h, &p).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn residual_without_base_dependence() {
    // Theta in x^{A1} only: the bracket drops out.
    let e = ExtendedPotential::new(
        2,
        parse_expression("x0_1^2*x1_2 + x1_1^3*x0_2", Chart::Extended(2)).unwrap(),
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..4 {
        let p = random_point(&mut rng, e.chart());
        let t = &e.theta;
        let expect = t
            .diffs(&[ext_slot(1, 1), ext_slot(0, 2)])
            .value(&p)
            .unwrap()
            - t.diffs(&[ext_slot(0, 1), ext_slot(1, 2)])
                .value(&p)
                .unwrap();
        assert_eq!(hierarchy_residual(&e, 0, 2, 1, 2, &p).unwrap(), expect);
    }
    assert!(hierarchy_residual(&e, 0, 3, 1, 1, &random_point(&mut rng, e.chart())).is_err());
}

#[test]
fn compatibility_identities_on_random_potentials() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let lambdas = [rat(1, 2), int(-3)];
    for n in [2usize, 3] {
        for _ in 0..2 {
            let e = ExtendedPotential::new(n, random_poly(&mut rng, 2 * n + 2)).unwrap();
            let pairs = all_pairs(n);
            for _ in 0..2 {
                let p = random_point(&mut rng, e.chart());
                let rs = lax_compat_residual(&e, &pairs, &lambdas, &p).unwrap();
                let mut nonzero_one = false;
                for r in &rs {
                    assert!(all_zero(&r.two), "{:?}", r.pair);
                    assert!(all_zero(&r.three), "{:?}", r.pair);
                    assert!(all_zero(&r.equivalence_gap()), "{:?}", r.pair);
                    for f in &r.full {
                        assert!(all_zero(f), "{:?}", r.pair);
                    }
                    nonzero_one |= !all_zero(&r.one);
                }
                // random potentials are not solutions
                assert!(nonzero_one);
            }
        }
    }
}

#[test]
fn flat_compatibility_vanishes() {
    let e = ExtendedPotential::new(2, Expr::zero()).unwrap();
    let p = Point::new(e.chart(), (1..=6).map(int).collect()).unwrap();
    for r in lax_compat_residual(&e, &all_pairs(2), &[int(2)], &p).unwrap() {
        assert!(all_zero(&r.one));
        assert!(all_zero(&r.full[0]));
    }
}

#[test]
fn summed_lax_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for n in 1..=3usize {
        let e = ExtendedPotential::new(n, random_poly(&mut rng, 2 * n + 2)).unwrap();
        let p = random_point(&mut rng, e.chart());
        for a in 0..2 {
            for j in 1..=n {
                let r = summed_lax_residual(&e, a, j, &p).unwrap();
                assert_eq!(r.len(), j + 1);
                for order in r {
                    assert!(all_zero(&order));
                }
            }
        }
    }
}

#[test]
fn flow_form_on_flat_solution() {
    for n in 1..=3usize {
        let e = ExtendedPotential::new(n, Expr::zero()).unwrap();
        let om = flat_extended_omega(n);
        let p = Point::new(
            e.chart(),
            (0..2 * n + 2).map(|k| rat(k as i64 + 2, 3)).collect(),
        )
        .unwrap();
        for b in 0..2 {
            for j in 1..=n {
                let r = sato_flow_residual(&e, &om, b, j, &p).unwrap();
                assert_eq!(r.len(), n - j + 1);
                assert!(r.iter().all(|row| all_zero(row)));
                let t = truncated_omega(&e, b, j, true).unwrap();
                assert_eq!(t.coeff(0), Expr::var(ext_slot(b, 0)).neg());
                assert!(t.coeff(1).is_zero_const());
            }
        }
    }
}

#[test]
fn flow_form_on_series_solutions() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for text in ["x^3", "z*x^3", "x^2 + x*y + x*w"] {
        let th = parse_expression(text, Chart::Second).unwrap();
        let e = ExtendedPotential::embed_second(&SecondPotential::new(th.clone()), 1).unwrap();
        let curve = series_solve_omega(&Poly::from_expr(&th, Chart::Second).unwrap(), 5).unwrap();
        let om = omega_from_curve(&curve);
        for _ in 0..5 {
            let p = random_point(&mut rng, e.chart());
            for b in 0..2 {
                let r = sato_flow_residual(&e, &om, b, 1, &p).unwrap();
                assert_eq!(r.len(), 5);
                assert!(r.iter().all(|row| all_zero(row)), "{text}");
            }
        }
    }
}

#[test]
fn flow_form_detects_wrong_series() {
    // The flat series does not solve the flow for a curved potential.
    let th = parse_expression("x^2 + x*y + x*w", Chart::Second).unwrap();
    let e = ExtendedPotential::embed_second(&SecondPotential::new(th), 1).unwrap();
    let p = Point::new(e.chart(), vec![int(1), int(2), int(3), int(4)]).unwrap();
    let om = omega_from_curve(&flat_twistor_curve(4));
    let r = sato_flow_residual(&e, &om, 0, 1, &p).unwrap();
    assert!(r.iter().any(|row| !all_zero(row)));
}

#[test]
fn slice_metric_is_tetrad_metric_of_negated_potential() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for _ in 0..5 {
        let th = random_poly(&mut rng, 4);
        let e = ExtendedPotential::embed_second(&SecondPotential::new(th.clone()), 1).unwrap();
        let g = metric_from_tetrad(&tetrad_from_theta(&SecondPotential::new(th.neg())));
        for _ in 0..3 {
            let p = random_point(&mut rng, Chart::Second);
            assert_eq!(
                slice_metric_second(&e, &p, &[]).unwrap(),
                g.values(&p).unwrap()
            );
        }
    }
    let flat = ExtendedPotential::new(1, Expr::zero()).unwrap();
    let p = Point::new(Chart::Second, vec![int(1), int(2), int(3), int(4)]).unwrap();
    let g = slice_metric_second(&flat, &p, &[]).unwrap();
    assert_eq!(g[0][2], int(1));
    assert_eq!(g[1][3], int(1));
    assert!(g[0][0].vanishes() && g[0][1].vanishes() && g[2][3].vanishes());
}

#[test]
fn slice_of_extended_sparling_tod() {
    for s in [int(1), rat(-3, 2)] {
        let e = ExtendedPotential::embed_second(&SecondPotential::sparling_tod(&s), 2).unwrap();
        for c in [[1, 2, 3, 5], [2, -1, 1, 3], [-3, 4, 2, 1]] {
            let p = Point::new(Chart::Second, c.iter().map(|&k| int(k)).collect()).unwrap();
            let g = slice_metric_second(&e, &p, &[int(7), int(-2)]).unwrap();
            let (w, z) = (int(c[0]), int(c[1]));
            let q = int(c[0] * c[2] + c[1] * c[3]);
            let k = int(4) * &s / (&q * &q * &q);
            assert_eq!(g[0][2], int(1));
            assert_eq!(g[1][3], int(1));
            assert_eq!(g[0][0], &k * &z * &z);
            assert_eq!(g[1][1], &k * &w * &w);
            assert_eq!(g[0][1], -(&k * &w * &z));
            assert!(g[2][2].vanishes() && g[3][3].vanishes() && g[2][3].vanishes());
        }
    }
}

#[test]
fn paraconformal_symmetry_by_parity() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for n in 1..=4usize {
        let size = 2usize << n;
        let mut v = || {
            (0..size)
                .map(|_| int(rng.gen_range(-3..=3)))
                .collect::<Vec<_>>()
        };
        let (u, w) = (v(), v());
        let uw = paraconformal_eval(n, &u, &w).unwrap();
        let wu = paraconformal_eval(n, &w, &u).unwrap();
        if n % 2 == 1 {
            assert_eq!(uw, wu);
        } else {
            assert_eq!(uw, -wu);
            assert!(paraconformal_eval(n, &u, &u).unwrap().vanishes());
        }
    }
}

#[test]
fn paraconformal_on_slice_tangents() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    // flat slice through the binomial spinor view
    let flat = ExtendedPotential::new(1, Expr::zero()).unwrap();
    let p = random_point(&mut rng, Chart::Extended(1));
    let g = slice_metric(&flat, &p).unwrap();
    for _ in 0..5 {
        let u: Vec<BigRational> = (0..4).map(|_| int(rng.gen_range(-3..=3))).collect();
        let w: Vec<BigRational> = (0..4).map(|_| int(rng.gen_range(-3..=3))).collect();
        let gv = (0..4)
            .flat_map(|m| (0..4).map(move |n| (m, n)))
            .fold(int(0), |acc, (m, n)| acc + &g[m][n] * &u[m] * &w[n]);
        let su = spinor_view(1, &u).unwrap();
        let sw = spinor_view(1, &w).unwrap();
        assert_eq!(paraconformal_eval(1, &su, &sw).unwrap(), -gv);
    }
    // curved slice through frame components
    let th = random_poly(&mut rng, 4);
    let e = ExtendedPotential::embed_second(&SecondPotential::new(th.clone()), 1).unwrap();
    let tet = tetrad_from_theta(&SecondPotential::new(th.neg()));
    for _ in 0..3 {
        let p = random_point(&mut rng, Chart::Second);
        let g = slice_metric_second(&e, &p, &[]).unwrap();
        let cf = tet.coframe_at(&p).unwrap();
        let u: Vec<BigRational> = (0..4).map(|_| int(rng.gen_range(-3..=3))).collect();
        let w: Vec<BigRational> = (0..4).map(|_| int(rng.gen_range(-3..=3))).collect();
        let frame = |v: &[BigRational]| -> Vec<BigRational> {
            (0..4)
                .map(|a| (0..4).fold(int(0), |acc, m| acc + &cf[a][m] * &v[m]))
                .collect()
        };
        let gv = (0..4)
            .flat_map(|m| (0..4).map(move |n| (m, n)))
            .fold(int(0), |acc, (m, n)| acc + &g[m][n] * &u[m] * &w[n]);
        assert_eq!(paraconformal_eval(1, &frame(&u), &frame(&w)).unwrap(), gv);
    }
}
