//! Exact stay probabilities `P_t(R)`, `P_t(B)` by counting walks.
//!
//! `P_t(S)` is the probability that a random walk started at a uniform vertex
//! of `S` stays in `S` for its first `t` steps. It equals the number of
//! `t`-step walks inside `S` divided by `|S| d^t`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::colouring::Colouring;
use crate::error::{invalid, Result};
use crate::frac::{self, Q};
use crate::graph::{boundary_of_mask, Graph};
use crate::region::RationalPoint;

/// `(P_t(R), P_t(B))` as exact reduced fractions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalPair {
    pub x: Q,
    pub y: Q,
}

impl RationalPair {
    pub fn new(x: Q, y: Q) -> Self {
        Self { x, y }
    }

    pub fn swapped(&self) -> Self {
        Self {
            x: self.y.clone(),
            y: self.x.clone(),
        }
    }

    pub fn to_point(&self) -> RationalPoint {
        RationalPoint::new(self.x.clone(), self.y.clone())
    }

    pub fn to_strings(&self) -> PairStrings {
        PairStrings {
            x: frac::to_string(&self.x),
            y: frac::to_string(&self.y),
        }
    }
}

/// JSON form: `{"x": "p/q", "y": "p/q"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairStrings {
    pub x: String,
    pub y: String,
}

/// One-step pair; both coordinates equal `1 - ∂(R) / (d |R|)`.
pub fn p1(c: &Colouring) -> RationalPair {
    let g = c.graph();
    let boundary = boundary_of_mask(g, c.red_mask()) as i64;
    let half = (g.n() / 2) as i64;
    let denom = g.d() as i64 * half;
    let v = BigRational::new(BigInt::from(denom - boundary), BigInt::from(denom));
    RationalPair::new(v.clone(), v)
}

/// Two-step pair from the degree profile: `(2 / (n d²)) Σ i² r_i`.
pub fn p2(c: &Colouring) -> RationalPair {
    let g = c.graph();
    let (red, blue) = square_sums(g, c.red_mask());
    p2_from_sums(g, red, blue)
}

pub(crate) fn p2_from_sums(g: &Graph, red: u64, blue: u64) -> RationalPair {
    let den = BigInt::from(g.n() as u64) * BigInt::from((g.d() * g.d()) as u64);
    RationalPair::new(
        BigRational::new(BigInt::from(2 * red), den.clone()),
        BigRational::new(BigInt::from(2 * blue), den),
    )
}

/// `(Σ_{v∈R} d_R(v)², Σ_{v∈B} d_B(v)²)` without building a profile.
#[inline]
pub(crate) fn square_sums(g: &Graph, red: &[bool]) -> (u64, u64) {
    let (mut rs, mut bs) = (0u64, 0u64);
    for v in 0..g.n() {
        let c = red[v];
        let same = g.neighbours(v).iter().filter(|&&u| red[u] == c).count() as u64;
        if c {
            rs += same * same;
        } else {
            bs += same * same;
        }
    }
    (rs, bs)
}

/// `t`-step pair by dynamic programming over each induced class.
pub fn pt(c: &Colouring, t: usize) -> Result<RationalPair> {
    if t == 0 {
        return invalid("walk length t must be at least 1");
    }
    let g = c.graph();
    let mask = c.red_mask();
    let blue: Vec<bool> = mask.iter().map(|&r| !r).collect();
    let walks_red = class_walks(g, mask, t);
    let walks_blue = class_walks(g, &blue, t);
    let den = BigInt::from(g.n() / 2) * BigInt::from(g.d()).pow(t as u32);
    Ok(RationalPair::new(
        BigRational::new(BigInt::from(walks_red), den.clone()),
        BigRational::new(BigInt::from(walks_blue), den),
    ))
}

/// Number of `t`-step walks that start and stay inside `class`.
pub fn class_walks(g: &Graph, class: &[bool], t: usize) -> BigUint {
    let n = g.n();
    let mut w: Vec<BigUint> = class.iter().map(|&c| BigUint::from(c as u8)).collect();
    let mut next = vec![BigUint::default(); n];
    for _ in 0..t {
        for v in 0..n {
            let mut acc = BigUint::default();
            if class[v] {
                for &u in g.neighbours(v) {
                    if class[u] {
                        acc += &w[u];
                    }
                }
            }
            next[v] = acc;
        }
        std::mem::swap(&mut w, &mut next);
    }
    w.into_iter().sum()
}
