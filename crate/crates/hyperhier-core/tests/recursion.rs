use hyperhier_core::chart::{Chart, Point};
use hyperhier_core::heavenly::{
    linearized_second_residual, second_heavenly_residual, SecondPotential,
};
use hyperhier_core::parse_expression;
use hyperhier_core::poly::Poly;
use hyperhier_core::recursion::*;
use hyperhier_core::scalar::{int, rat};
use hyperhier_core::{BigRational, Expr};

fn pts() -> Vec<Point<BigRational>> {
    let raw = [
        [int(1), int(2), int(3), int(5)],
        [int(2), int(-1), int(1), int(3)],
        [rat(1, 2), rat(-2, 3), int(3), rat(5, 7)],
        [int(-3), int(4), rat(2, 5), int(1)],
    ];
    raw.iter()
        .map(|v| Point::new(Chart::Second, v.to_vec()).unwrap())
        .collect()
}

fn flat() -> SecondPotential {
    SecondPotential::new(Expr::zero())
}

#[test]
fn flat_phi_chain() {
    for n in 0..=6 {
        let a = flat_phi(n);
        let b = flat_phi(n + 1);
        for p in pts() {
            assert_eq!(wave_residual(&flat(), &a, &p).unwrap(), int(0));
            let r = recursion_relation_residuals(&flat(), &a, &b, &p).unwrap();
            assert_eq!(r, [int(0), int(0)], "n = {n}");
        }
    }
}

#[test]
fn st_psi_displayed_forms() {
    let t = CoeffTable::new(9);
    let q = "(w*x + z*y)";
    let cases = [
        (1, format!("1/{q}")),
        (2, format!("(-y/w)/{q}")),
        (3, format!("-2/3*sigma/{q}^3 + (-y/w)^2/{q}")),
    ];
    for (n, text) in cases {
        let want = parse_expression(&text, Chart::Second).unwrap();
        let got = st_psi(&t, n).unwrap();
        for s in [int(1), rat(-3, 2)] {
            for p in pts() {
                assert_eq!(
                    got.bind_sigma(&s).value(&p).unwrap(),
                    want.bind_sigma(&s).value(&p).unwrap()
                );
            }
        }
    }
}

#[test]
fn st_chain_satisfies_wave_and_relations() {
    let t = CoeffTable::new(9);
    for sigma in [int(1), rat(1, 2), int(-3)] {
        for n in 1..=8 {
            let step = recursion_step_st(&t, n, &sigma, &pts()).unwrap();
            assert!(step.relations_hold(), "n = {n}");
            let th = SecondPotential::sparling_tod(&sigma);
            let psi = st_psi(&t, n).unwrap().bind_sigma(&sigma);
            for p in pts() {
                let a = wave_residual(&th, &psi, &p).unwrap();
                assert_eq!(a, int(0));
                // closed form, including its overall factor 2
                let f = parse_expression("x^2*w + y^3*z - x*y", Chart::Second).unwrap();
                let lhs = st_wave_operator(&sigma, &f, &p).unwrap();
                let rhs = wave_residual(&th, &f, &p).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn monomial_rule_disagrees_from_psi_2_on() {
    let t = CoeffTable::new(4);
    let s1 = recursion_step_st(&t, 1, &int(1), &pts()).unwrap();
    assert!(s1.monomial_rule_holds());
    let s2 = recursion_step_st(&t, 2, &int(1), &pts()).unwrap();
    assert!(!s2.monomial_rule_holds());
}

#[test]
fn sigma_zero_collapses_to_flat_chain() {
    let t = CoeffTable::new(9);
    for n in 1..=8 {
        let psi = st_psi(&t, n).unwrap().bind_sigma(&int(0));
        let phi = flat_phi(n as u32 - 1);
        for p in pts() {
            assert_eq!(psi.value(&p).unwrap(), phi.value(&p).unwrap());
        }
    }
}

#[test]
fn phi_n_heavenly_selection() {
    let zeros: Vec<u32> = (0..=4)
        .filter(|&n| {
            let th = SecondPotential::new(flat_phi(n));
            pts()
                .iter()
                .all(|p| second_heavenly_residual(&th, p).unwrap() == int(0))
        })
        .collect();
    assert_eq!(zeros, vec![0, 2]);
}

#[test]
fn gauge_generators_solve_linearised_equation() {
    let e = |s: &str| parse_expression(s, Chart::Second).unwrap();
    let st = SecondPotential::sparling_tod(&int(1));
    let data = [
        GaugeData::with_potential(e("w"), e("0"), e("0"), e("0")),
        GaugeData::with_potential(e("0"), e("0"), e("0"), e("w")),
        GaugeData::with_potential(e("0"), e("0"), e("z"), e("0")),
        GaugeData::with_potential(e("w*z"), e("w^2*z"), e("w^2 + z^3"), e("w*z^2 - w^3")),
    ];
    for d in &data {
        let r = gauge_residuals(d, &st, GAUGE_WEIGHTS, &pts()).unwrap();
        assert!(r.iter().all(|v| *v == int(0)));
    }
    let lit = gauge_residuals(&data[3], &st, GAUGE_WEIGHTS_LITERAL, &pts()).unwrap();
    assert!(lit.iter().any(|v| *v != int(0)));
    let bad = GaugeData::with_potential(e("x"), e("0"), e("0"), e("0"));
    assert!(gauge_symmetry_perturbation(&bad, &st).is_err());
}

#[test]
fn linearised_examples() {
    let st = SecondPotential::sparling_tod(&int(1));
    let e = |s: &str| parse_expression(s, Chart::Second).unwrap();
    for p in pts() {
        assert_eq!(
            linearized_second_residual(&st, &e("1/(w*x+z*y)"), &p).unwrap(),
            int(0)
        );
        assert_eq!(
            linearized_second_residual(&flat(), &e("x*w - y*z"), &p).unwrap(),
            int(0)
        );
        assert_eq!(wave_residual(&flat(), &e("x^2"), &p).unwrap(), int(0));
    }
}

#[test]
fn killing_chains() {
    let p = |s: &str| {
        Poly::from_expr(&parse_expression(s, Chart::Second).unwrap(), Chart::Second).unwrap()
    };
    for (l0, n) in [("1", 1), ("w", 1), ("z", 1), ("w^2", 2), ("w*z", 2)] {
        let k = killing_chain_flat(&p(l0), n).unwrap();
        assert_eq!(k.l.len(), n + 1);
        assert!(
            k.contracted_residuals()
                .iter()
                .flatten()
                .all(|r| r.is_empty()),
            "{l0}"
        );
        assert!(k.kspinor_residuals().iter().all(|r| r.is_empty()), "{l0}");
    }
    assert_eq!(killing_chain_flat(&p("1"), 1).unwrap().l[1], Poly::zero(4));
    // w^2 needs two steps to terminate
    assert!(killing_chain_flat(&p("w^2"), 1).is_err());
}
