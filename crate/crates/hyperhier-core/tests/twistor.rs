use hyperhier_core::chart::{Chart, Point};
use hyperhier_core::heavenly::{lax_pair_theta, SecondPotential};
use hyperhier_core::parse_expression;
use hyperhier_core::poly::Poly;
use hyperhier_core::recursion::{flat_phi, CoeffTable};
use hyperhier_core::scalar::{int, rat};
use hyperhier_core::twistor::*;
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

#[test]
fn st_curve_is_annihilated() {
    let table = CoeffTable::new(8);
    for sigma in [int(1), rat(-2, 3)] {
        let curve = st_twistor_curve(&table, 6).unwrap().bind_sigma(&sigma);
        let lax = lax_pair_theta(&SecondPotential::sparling_tod(&sigma));
        for p in pts() {
            let a = lax_annihilation_residual(&curve, &lax, &p).unwrap();
            assert_eq!(a.checked().len(), 6);
            assert_eq!(a.first_failure(), None);
        }
    }
}

#[test]
fn st_curve_low_orders() {
    let table = CoeffTable::new(4);
    let s = int(2);
    let curve = st_twistor_curve(&table, 3).unwrap().bind_sigma(&s);
    let th = SecondPotential::sparling_tod(&s);
    for p in pts() {
        let v = |e: &Expr| e.value(&p).unwrap();
        assert_eq!(v(&curve.mu[0].coeff(0)), p.coords[0]);
        assert_eq!(v(&curve.mu[0].coeff(1)), p.coords[3]);
        assert_eq!(v(&curve.mu[1].coeff(1)), -p.coords[2].clone());
        assert_eq!(v(&curve.mu[0].coeff(2)), -v(&th.d(&[2])));
        assert_eq!(v(&curve.mu[1].coeff(2)), -v(&th.d(&[3])));
    }
    let flat = st_twistor_curve(&table, 3).unwrap().bind_sigma(&int(0));
    for p in pts() {
        for i in 2..=3 {
            assert_eq!(flat.mu[0].coeff(i).value(&p).unwrap(), int(0));
        }
    }
}

#[test]
fn corrupted_b_entry_is_located() {
    let table = CoeffTable::new(8).with_b(3, 1, Poly::constant(1, int(5)));
    let curve = st_twistor_curve(&table, 6).unwrap().bind_sigma(&int(1));
    let lax = lax_pair_theta(&SecondPotential::sparling_tod(&int(1)));
    let a = lax_annihilation_residual(&curve, &lax, &pts()[0]).unwrap();
    // B_(3) sits at lambda^4
    assert_eq!(a.first_failure(), Some(4));
}

#[test]
fn flat_curve_is_annihilated() {
    let lax = lax_pair_theta(&SecondPotential::new(Expr::zero()));
    let a = lax_annihilation_residual(&flat_twistor_curve(4), &lax, &pts()[1]).unwrap();
    assert!(a.orders.iter().flatten().all(|v| *v == int(0)));
}

#[test]
fn series_solution_on_polynomial_backgrounds() {
    for th in ["0", "x^3", "z*x^3", "x^2 + x*y + x*w"] {
        let e = parse_expression(th, Chart::Second).unwrap();
        let p = Poly::from_expr(&e, Chart::Second).unwrap();
        let curve = series_solve_omega(&p, 5).unwrap();
        let lax = lax_pair_theta(&SecondPotential::new(e.clone()));
        for q in pts() {
            let a = lax_annihilation_residual(&curve, &lax, &q).unwrap();
            assert_eq!(a.first_failure(), None, "{th}");
            assert!(a.truncation()[0].iter().all(|v| *v == int(0)));
        }
    }
    let e = parse_expression("x^3", Chart::Second).unwrap();
    let curve = series_solve_omega(&Poly::from_expr(&e, Chart::Second).unwrap(), 2).unwrap();
    for q in pts() {
        assert_eq!(
            curve.mu[0].coeff(2).value(&q).unwrap(),
            -e.diff(2).value(&q).unwrap()
        );
    }
}

#[test]
fn residues_give_phi_chain_and_intertwine_r() {
    let pole = parse_expression("-w/y", Chart::Second).unwrap();
    for n in 0..=4 {
        let f = parse_expression(&format!("1/(lambda^{n}*mu0*mu1)"), Chart::Twistor).unwrap();
        for p in pts() {
            let got = penrose_residue_transform(&f, &pole, &p).unwrap();
            assert_eq!(got, flat_phi(n as u32).value(&p).unwrap());
            let a = penrose_residue_jet(&f, &pole, &p, 1).unwrap();
            let b = penrose_residue_jet(&recursion_on_twistor(&f), &pole, &p, 1).unwrap();
            // (R phi)_y = phi_w, (R phi)_x = -phi_z
            assert_eq!(b.d(&[3]), a.d(&[0]));
            assert_eq!(b.d(&[2]), -a.d(&[1]));
        }
    }
}

#[test]
fn residue_without_pole_is_zero() {
    let f = parse_expression("1/(lambda - 100)", Chart::Twistor).unwrap();
    let pole = parse_expression("-w/y", Chart::Second).unwrap();
    assert_eq!(
        penrose_residue_transform(&f, &pole, &pts()[0]).unwrap(),
        int(0)
    );
}
