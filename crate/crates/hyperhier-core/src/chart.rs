//! Coordinate charts and points.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chart {
    /// `(w, z, x, y)`, the second heavenly chart.
    Second,
    /// `(w, z, wt, zt)`, the first heavenly chart; `wt` stands for w-tilde.
    First,
    /// `(w, z, q, p)`, used by the plane wave metrics.
    PlaneWave,
    /// `x^{Ai}` for `A = 0, 1` and `i = 0..=n`, slot `2i + A`, named `xA_i`.
    Extended(usize),
    /// `(lambda, mu0, mu1)`, the variables of twistor functions.
    Twistor,
}

impl Chart {
    pub fn arity(&self) -> usize {
        match self {
            Chart::Second | Chart::First | Chart::PlaneWave => 4,
            Chart::Extended(n) => 2 * n + 2,
            Chart::Twistor => 3,
        }
    }

    pub fn name(&self, slot: usize) -> String {
        match self {
            Chart::Second => ["w", "z", "x", "y"][slot].to_string(),
            Chart::First => ["w", "z", "wt", "zt"][slot].to_string(),
            Chart::PlaneWave => ["w", "z", "q", "p"][slot].to_string(),
            Chart::Extended(_) => format!("x{}_{}", slot % 2, slot / 2),
            Chart::Twistor => ["lambda", "mu0", "mu1"][slot].to_string(),
        }
    }

    pub fn names(&self) -> Vec<String> {
        (0..self.arity()).map(|i| self.name(i)).collect()
    }

    pub fn slot(&self, name: &str) -> Option<usize> {
        (0..self.arity()).find(|&i| self.name(i) == name)
    }

    pub fn tag(&self) -> String {
        match self {
            Chart::Second => "second-form".into(),
            Chart::First => "first-form".into(),
            Chart::PlaneWave => "plane-wave".into(),
            Chart::Extended(n) => format!("extended-{n}"),
            Chart::Twistor => "twistor".into(),
        }
    }

    pub fn from_tag(tag: &str) -> Option<Chart> {
        match tag {
            "second-form" => Some(Chart::Second),
            "first-form" => Some(Chart::First),
            "plane-wave" => Some(Chart::PlaneWave),
            "twistor" => Some(Chart::Twistor),
            t => t
                .strip_prefix("extended-")
                .and_then(|n| n.parse().ok())
                .map(Chart::Extended),
        }
    }
}

/// Slots of the second-form chart.
pub mod second {
    pub const W: usize = 0;
    pub const Z: usize = 1;
    pub const X: usize = 2;
    pub const Y: usize = 3;
}

/// Slots of the first-form chart.
pub mod first {
    pub const W: usize = 0;
    pub const Z: usize = 1;
    pub const WT: usize = 2;
    pub const ZT: usize = 3;
}

/// Slots of the plane-wave chart.
pub mod plane {
    pub const W: usize = 0;
    pub const Z: usize = 1;
    pub const Q: usize = 2;
    pub const P: usize = 3;
}

/// Slot of `x^{Ai}` in an extended chart.
pub fn ext_slot(a: usize, i: usize) -> usize {
    2 * i + a
}

#[derive(Debug, Clone, PartialEq)]
pub struct Point<S> {
    pub chart: Chart,
    pub coords: Vec<S>,
}

impl<S: Scalar> Point<S> {
    pub fn new(chart: Chart, coords: Vec<S>) -> Result<Self> {
        if coords.len() != chart.arity() {
            return Err(Error::Arity {
                expected: chart.arity(),
                got: coords.len(),
            });
        }
        Ok(Point { chart, coords })
    }

    pub fn get(&self, slot: usize) -> &S {
        &self.coords[slot]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_and_slots() {
        assert_eq!(Chart::Second.names(), ["w", "z", "x", "y"]);
        assert_eq!(Chart::Extended(2).name(ext_slot(1, 2)), "x1_2");
        assert_eq!(Chart::Extended(2).slot("x0_1"), Some(2));
        assert_eq!(Chart::from_tag("extended-3"), Some(Chart::Extended(3)));
        assert_eq!(Chart::from_tag(&Chart::First.tag()), Some(Chart::First));
    }

    #[test]
    fn point_arity() {
        assert!(Point::new(Chart::Second, vec![1.0; 3]).is_err());
        assert!(Point::new(Chart::Extended(1), vec![1.0; 4]).is_ok());
    }
}
