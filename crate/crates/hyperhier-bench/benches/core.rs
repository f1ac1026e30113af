use criterion::{black_box, criterion_group, criterion_main, Criterion};
use hyperhier_core::curvature::weyl_spinors;
use hyperhier_core::heavenly::{
    lax_commutator_residual, lax_pair_theta, metric_from_tetrad, second_heavenly_residual,
    tetrad_from_theta, SecondPotential,
};
use hyperhier_core::poly::Poly;
use hyperhier_core::scalar::{int, rat};
use hyperhier_core::symplectic::{symplectic_pair, BoundaryBox};
use hyperhier_core::{parse_expression, BigRational, Chart, Point};

fn point() -> Point<BigRational> {
    Point::new(
        Chart::Second,
        vec![rat(1, 2), rat(-2, 3), int(3), rat(5, 7)],
    )
    .unwrap()
}

fn float_point() -> Point<f64> {
    Point::new(Chart::Second, vec![0.5, -2.0 / 3.0, 3.0, 5.0 / 7.0]).unwrap()
}

fn heavenly(c: &mut Criterion) {
    let st = SecondPotential::sparling_tod(&int(1));
    let p = point();
    let pf = float_point();
    c.bench_function("st_residual_exact", |b| {
        b.iter(|| second_heavenly_residual(&st, black_box(&p)).unwrap())
    });
    c.bench_function("st_residual_float", |b| {
        b.iter(|| second_heavenly_residual(&st, black_box(&pf)).unwrap())
    });
    let lax = lax_pair_theta(&st);
    let l = rat(1, 3);
    c.bench_function("st_lax_commutator_exact", |b| {
        b.iter(|| lax_commutator_residual(&lax, &l, black_box(&p)).unwrap())
    });
    let jet_p = point();
    c.bench_function("st_jet_order_4", |b| {
        b.iter(|| st.theta.jet(black_box(&jet_p), 4).unwrap())
    });
}

fn curvature(c: &mut Criterion) {
    let st = SecondPotential::sparling_tod(&int(1));
    let t = tetrad_from_theta(&st);
    let g = metric_from_tetrad(&t);
    let p = point();
    let pf = float_point();
    let mut group = c.benchmark_group("st_curvature");
    group.sample_size(20);
    group.bench_function("exact", |b| {
        b.iter(|| weyl_spinors(&g, &t, black_box(&p), 0.0).unwrap())
    });
    group.bench_function("float", |b| {
        b.iter(|| weyl_spinors(&g, &t, black_box(&pf), 1e-9).unwrap())
    });
    group.finish();
}

fn symplectic(c: &mut Criterion) {
    let poly = |s: &str| {
        Poly::from_expr(&parse_expression(s, Chart::Second).unwrap(), Chart::Second).unwrap()
    };
    let (a, b2) = (poly("x*w - y*z"), poly("x^2 + w*z*y^2"));
    let bx = BoundaryBox::cube(int(0), int(1)).unwrap();
    c.bench_function("symplectic_pair_unit_cube", |b| {
        b.iter(|| symplectic_pair(black_box(&a), black_box(&b2), &bx).unwrap())
    });
}

criterion_group!(benches, heavenly, curvature, symplectic);
criterion_main!(benches);
