//! Seeded rational sample points.

use crate::error::CliError;
use hyperhier_core::curvature::inverse4;
use hyperhier_core::heavenly::MetricField;
use hyperhier_core::scalar::{rat, Algebra};
use hyperhier_core::{BigRational, Chart, Expr, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest numerator and denominator magnitude of a sampled coordinate.
pub const BOUND: i64 = 7;

const ATTEMPTS_PER_POINT: usize = 1000;

/// Rejection rule for candidate points.
#[derive(Debug, Clone)]
pub enum Exclusion {
    /// The expression is finite and nonzero.
    Nonzero(Expr),
    /// The expressions have finite jets of the given order.
    Regular(Vec<Expr>, usize),
    /// The metric is finite and invertible.
    Nondegenerate(MetricField),
}

impl Exclusion {
    pub fn var_nonzero(slot: usize) -> Exclusion {
        Exclusion::Nonzero(Expr::var(slot))
    }

    fn admits(&self, p: &Point<BigRational>) -> bool {
        match self {
            Exclusion::Nonzero(e) => e.value(p).map(|v| !v.vanishes()).unwrap_or(false),
            Exclusion::Regular(es, k) => es.iter().all(|e| e.jet(p, *k).is_ok()),
            Exclusion::Nondegenerate(g) => g.values(p).ok().and_then(|m| inverse4(&m)).is_some(),
        }
    }
}

/// `count` points with `|num|, |den| <= 7`, deterministic per seed.
pub fn sample_points(
    chart: Chart,
    seed: u64,
    count: usize,
    exclusions: &[Exclusion],
) -> Result<Vec<Point<BigRational>>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let limit = ATTEMPTS_PER_POINT * count.max(1);
    let mut attempts = 0;
    while out.len() < count {
        if attempts == limit {
            return Err(CliError::Exhausted {
                attempts,
                found: out.len(),
                wanted: count,
            });
        }
        attempts += 1;
        let coords = (0..chart.arity())
            .map(|_| rat(rng.gen_range(-BOUND..=BOUND), rng.gen_range(1..=BOUND)))
            .collect();
        let p = Point::new(chart, coords)?;
        if exclusions.iter().all(|x| x.admits(&p)) {
            out.push(p);
        }
    }
    Ok(out)
}
