//! Truncated multivariate Taylor series.
//!
//! Coefficients are Taylor coefficients `d^a f / a!`, stored in graded
//! order: all indices of degree 0, then degree 1, and so on, lexicographic
//! inside a degree.  Because of that ordering a lower-order layout is a
//! prefix of a higher-order one, which makes truncation a slice.

use crate::error::{Error, Result};
use crate::scalar::{Algebra, Scalar};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Hard cap on user-requested jet order.
pub const MAX_ORDER: usize = 6;
/// Default order used by the verification routines.
pub const DEFAULT_ORDER: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        MultiIndex(v)
    }

    /// Multi-index counting how many times each slot occurs in `slots`.
    pub fn from_slots(n: usize, slots: &[usize]) -> Self {
        let mut v = vec![0; n];
        for &s in slots {
            v[s] += 1;
        }
        MultiIndex(v)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn factorial(&self) -> u64 {
        self.0
            .iter()
            .map(|&e| (1..=e as u64).product::<u64>())
            .product()
    }

    pub fn add(&self, o: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

#[derive(Debug)]
pub struct Layout {
    pub nvars: usize,
    pub order: usize,
    indices: Vec<MultiIndex>,
    lookup: HashMap<MultiIndex, usize>,
    // products landing on index k: pairs[offsets[k]..offsets[k+1]]
    offsets: Vec<usize>,
    pairs: Vec<(u32, u32)>,
}

fn enumerate(nvars: usize, order: usize) -> Vec<MultiIndex> {
    fn rec(slot: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if slot + 1 == cur.len() {
            cur[slot] = left as u32;
            out.push(MultiIndex(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[slot] = e as u32;
            rec(slot + 1, left - e, cur, out);
        }
        cur[slot] = 0;
    }
    let mut out = Vec::new();
    if nvars == 0 {
        out.push(MultiIndex(vec![]));
        return out;
    }
    let mut cur = vec![0u32; nvars];
    for d in 0..=order {
        rec(0, d, &mut cur, &mut out);
    }
    out
}

impl Layout {
    fn build(nvars: usize, order: usize) -> Layout {
        let indices = enumerate(nvars, order);
        let lookup: HashMap<_, _> = indices
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let mut buckets: Vec<Vec<(u32, u32)>> = vec![Vec::new(); indices.len()];
        for (i, a) in indices.iter().enumerate() {
            let da = a.degree();
            for (j, b) in indices.iter().enumerate() {
                if da + b.degree() > order {
                    // indices are graded, so every later j is too deep
                    break;
                }
                let k = lookup[&a.add(b)];
                buckets[k].push((i as u32, j as u32));
            }
        }
        let mut offsets = Vec::with_capacity(indices.len() + 1);
        let mut pairs = Vec::new();
        offsets.push(0);
        for b in buckets {
            pairs.extend(b);
            offsets.push(pairs.len());
        }
        Layout {
            nvars,
            order,
            indices,
            lookup,
            offsets,
            pairs,
        }
    }

    /// Shared layout for `(nvars, order)`.
    pub fn get(nvars: usize, order: usize) -> Arc<Layout> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<Layout>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("layout cache poisoned");
        guard
            .entry((nvars, order))
            .or_insert_with(|| Arc::new(Layout::build(nvars, order)))
            .clone()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn index_of(&self, a: &MultiIndex) -> Option<usize> {
        self.lookup.get(a).copied()
    }

    /// Number of coefficients of total degree at most `order`.
    pub fn prefix_len(&self, order: usize) -> usize {
        self.indices.partition_point(|m| m.degree() <= order)
    }

    fn products(&self, k: usize) -> &[(u32, u32)] {
        &self.pairs[self.offsets[k]..self.offsets[k + 1]]
    }
}

/// Truncated Taylor expansion of a scalar field about `center`.
#[derive(Clone, Debug)]
pub struct Jet<S> {
    layout: Arc<Layout>,
    center: Arc<Vec<S>>,
    coeffs: Vec<S>,
}

impl<S: Scalar> Jet<S> {
    pub fn constant(layout: &Arc<Layout>, center: &Arc<Vec<S>>, c: S) -> Self {
        let mut coeffs = vec![S::zero(); layout.len()];
        coeffs[0] = c;
        Jet {
            layout: layout.clone(),
            center: center.clone(),
            coeffs,
        }
    }

    /// The coordinate function `x_i` expanded about the center.
    pub fn variable(layout: &Arc<Layout>, center: &Arc<Vec<S>>, i: usize) -> Self {
        let mut j = Jet::constant(layout, center, center[i].clone());
        if layout.order >= 1 {
            let k = layout
                .index_of(&MultiIndex::unit(layout.nvars, i))
                .expect("unit index present");
            j.coeffs[k] = S::one();
        }
        j
    }

    pub fn from_coeffs(layout: &Arc<Layout>, center: &Arc<Vec<S>>, coeffs: Vec<S>) -> Self {
        assert_eq!(coeffs.len(), layout.len());
        Jet {
            layout: layout.clone(),
            center: center.clone(),
            coeffs,
        }
    }

    pub fn order(&self) -> usize {
        self.layout.order
    }

    pub fn nvars(&self) -> usize {
        self.layout.nvars
    }

    pub fn layout(&self) -> &Arc<Layout> {
        &self.layout
    }

    pub fn center(&self) -> &Arc<Vec<S>> {
        &self.center
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn value(&self) -> &S {
        &self.coeffs[0]
    }

    /// Taylor coefficient at `a`; zero for indices beyond the order.
    pub fn coeff(&self, a: &MultiIndex) -> S {
        match self.layout.index_of(a) {
            Some(k) => self.coeffs[k].clone(),
            None => S::zero(),
        }
    }

    /// Partial derivative `d^a f` at the center.
    pub fn derivative(&self, a: &MultiIndex) -> Result<S> {
        if a.degree() > self.order() {
            return Err(Error::Mismatch(format!(
                "derivative of degree {} from a jet of order {}",
                a.degree(),
                self.order()
            )));
        }
        let f = S::from_i64(a.factorial() as i64);
        Ok(self.coeff(a).mul(&f))
    }

    /// Derivative along the listed coordinate slots, e.g. `&[0, 2]`.
    pub fn d(&self, slots: &[usize]) -> S {
        self.derivative(&MultiIndex::from_slots(self.nvars(), slots))
            .expect("jet order too low for requested derivative")
    }

    pub fn truncate(&self, order: usize) -> Jet<S> {
        if order >= self.order() {
            return self.clone();
        }
        let layout = Layout::get(self.nvars(), order);
        let coeffs = self.coeffs[..layout.len()].to_vec();
        Jet {
            layout,
            center: self.center.clone(),
            coeffs,
        }
    }

    /// Jet of `d f / d x_i`, one order lower.
    pub fn partial(&self, i: usize) -> Jet<S> {
        assert!(self.order() >= 1, "cannot differentiate an order-0 jet");
        let layout = Layout::get(self.nvars(), self.order() - 1);
        let coeffs = layout
            .indices()
            .iter()
            .map(|a| {
                let mut b = a.clone();
                b.0[i] += 1;
                let k = self.layout.index_of(&b).expect("shifted index present");
                self.coeffs[k].mul(&S::from_i64(b.0[i] as i64))
            })
            .collect();
        Jet {
            layout,
            center: self.center.clone(),
            coeffs,
        }
    }

    /// Repeated partial derivative along the listed slots.
    pub fn partials(&self, slots: &[usize]) -> Jet<S> {
        slots.iter().fold(self.clone(), |j, &s| j.partial(s))
    }

    pub fn scale(&self, c: &S) -> Jet<S> {
        Jet {
            layout: self.layout.clone(),
            center: self.center.clone(),
            coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect(),
        }
    }

    fn aligned(&self, o: &Jet<S>) -> (Jet<S>, Jet<S>) {
        debug_assert_eq!(self.nvars(), o.nvars());
        let k = self.order().min(o.order());
        (self.truncate(k), o.truncate(k))
    }

    fn check(&self, o: &Jet<S>) -> Result<()> {
        if self.nvars() != o.nvars() {
            return Err(Error::Mismatch("different number of variables".into()));
        }
        if self.order() != o.order() {
            return Err(Error::Mismatch(format!(
                "orders {} and {}",
                self.order(),
                o.order()
            )));
        }
        if *self.center != *o.center {
            return Err(Error::Mismatch("different centers".into()));
        }
        Ok(())
    }

    fn zip(&self, o: &Jet<S>, f: impl Fn(&S, &S) -> S) -> Jet<S> {
        let (a, b) = self.aligned(o);
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| f(x, y))
            .collect();
        Jet {
            layout: a.layout,
            center: a.center,
            coeffs,
        }
    }

    fn mul_raw(&self, o: &Jet<S>) -> Jet<S> {
        let (a, b) = self.aligned(o);
        let l = &a.layout;
        let coeffs = (0..l.len())
            .map(|k| {
                let mut acc = S::zero();
                for &(i, j) in l.products(k) {
                    let (x, y) = (&a.coeffs[i as usize], &b.coeffs[j as usize]);
                    if !x.vanishes() && !y.vanishes() {
                        acc = acc.add(&x.mul(y));
                    }
                }
                acc
            })
            .collect();
        Jet {
            layout: a.layout.clone(),
            center: a.center.clone(),
            coeffs,
        }
    }

    fn div_raw(&self, o: &Jet<S>) -> Option<Jet<S>> {
        let (a, b) = self.aligned(o);
        let b0 = b.coeffs[0].clone();
        if b0.vanishes() {
            return None;
        }
        let l = &a.layout;
        let mut q: Vec<S> = Vec::with_capacity(l.len());
        for k in 0..l.len() {
            let mut acc = a.coeffs[k].clone();
            for &(i, j) in l.products(k) {
                if i == 0 {
                    continue;
                }
                let bi = &b.coeffs[i as usize];
                if !bi.vanishes() {
                    acc = acc.sub(&bi.mul(&q[j as usize]));
                }
            }
            q.push(acc.div(&b0)?);
        }
        Some(Jet {
            layout: a.layout.clone(),
            center: a.center.clone(),
            coeffs: q,
        })
    }
}

/// Checked binary operation on jets of equal center, order and mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn jet_arith<S: Scalar>(kind: JetOp, a: &Jet<S>, b: &Jet<S>) -> Result<Jet<S>> {
    a.check(b)?;
    Ok(match kind {
        JetOp::Add => a.add(b),
        JetOp::Sub => a.sub(b),
        JetOp::Mul => a.mul(b),
        JetOp::Div => a.div(b).ok_or(Error::ZeroDivisor)?,
    })
}

/// Jets mixing orders are truncated to the lower order.
impl<S: Scalar> Algebra for Jet<S> {
    fn add(&self, o: &Self) -> Self {
        self.zip(o, |x, y| x.add(y))
    }
    fn sub(&self, o: &Self) -> Self {
        self.zip(o, |x, y| x.sub(y))
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul_raw(o)
    }
    fn neg(&self) -> Self {
        self.scale(&S::one().neg())
    }
    fn div(&self, o: &Self) -> Option<Self> {
        self.div_raw(o)
    }
    fn vanishes(&self) -> bool {
        self.coeffs.iter().all(|c| c.vanishes())
    }
    fn one_like(&self) -> Self {
        Jet::constant(&self.layout, &self.center, S::one())
    }
}

/// Factory for jets sharing a center and an order.
#[derive(Clone, Debug)]
pub struct JetSpace<S> {
    pub layout: Arc<Layout>,
    pub center: Arc<Vec<S>>,
}

impl<S: Scalar> JetSpace<S> {
    pub fn new(center: Vec<S>, order: usize) -> Self {
        JetSpace {
            layout: Layout::get(center.len(), order),
            center: Arc::new(center),
        }
    }

    pub fn constant(&self, c: S) -> Jet<S> {
        Jet::constant(&self.layout, &self.center, c)
    }

    pub fn variable(&self, i: usize) -> Jet<S> {
        Jet::variable(&self.layout, &self.center, i)
    }

    pub fn zero(&self) -> Jet<S> {
        self.constant(S::zero())
    }
}
