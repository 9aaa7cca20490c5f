//! Colouring constructions: the four cycle colourings, concatenation of cycle
//! colourings, the half-split torus colouring built from an exact cover, and
//! block tiling of torus colourings.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::colouring::Colouring;
use crate::covers::{check_seams, verify_on_torus, CoverPredicate};
use crate::error::{invalid, Error, Result};
use crate::frac::{q, Q};
use crate::graph::{Graph, GraphLabel, TorusShape};
use crate::walk::RationalPair;

/// `R = {1, ..., n/2}` (1-based): P₂ = (1 - 3/n, 1 - 3/n).
pub fn cycle_half(n: usize) -> Result<Colouring> {
    let g = Arc::new(Graph::cycle(n)?);
    let red: Vec<usize> = (0..n / 2).collect();
    Colouring::from_red_set(g, &red)
}

/// `R = {2, 4, ..., n}` (1-based): every edge is bichromatic.
pub fn cycle_alternating(n: usize) -> Result<Colouring> {
    let g = Arc::new(Graph::cycle(n)?);
    let red: Vec<usize> = (0..n).filter(|v| v % 2 == 1).collect();
    Colouring::from_red_set(g, &red)
}

#[derive(Debug, Clone)]
pub struct ThreeQuarters {
    pub colouring: Colouring,
    /// `n ≡ 0 (mod 12)`: the period-3 pattern ends exactly at `3n/4`.
    pub seamless: bool,
    /// Vertices (0-based) flipped to restore balance.
    pub adjusted: Vec<usize>,
}

/// `R = {x <= 3n/4 : x ≢ 0 (mod 3)}` (1-based): red vertices pair up, and half
/// of the blue vertices sit deep inside a blue arc. P₂ → (1/4, 1/2).
pub fn cycle_three_quarters(n: usize) -> Result<ThreeQuarters> {
    if !n.is_multiple_of(4) || n < 4 {
        return invalid(format!(
            "three-quarter colouring needs n ≡ 0 mod 4, got {n}"
        ));
    }
    let g = Arc::new(Graph::cycle(n)?);
    let mut red: Vec<bool> = (1..=n).map(|x| x <= 3 * n / 4 && x % 3 != 0).collect();
    let mut adjusted = Vec::new();
    // Balance by flipping the highest-index vertices of the majority colour.
    loop {
        let count = red.iter().filter(|&&r| r).count();
        if 2 * count == n {
            break;
        }
        let majority = 2 * count > n;
        let v = (0..n)
            .rev()
            .find(|&v| red[v] == majority)
            .expect("majority colour is present");
        red[v] = !majority;
        adjusted.push(v);
    }
    Ok(ThreeQuarters {
        colouring: Colouring::new(g, red)?,
        seamless: n.is_multiple_of(12),
        adjusted,
    })
}

fn cycle_length(c: &Colouring) -> Option<usize> {
    match c.graph().label() {
        GraphLabel::Cycle { n } => Some(n),
        _ => None,
    }
}

/// Concatenates copies of cycle colourings around one longer cycle, in the
/// given order.
pub fn concat_cycles(parts: &[(Colouring, usize)]) -> Result<Colouring> {
    let Some((first, _)) = parts.first() else {
        return invalid("concatenation needs at least one part");
    };
    let n = cycle_length(first).ok_or_else(|| {
        Error::InvalidParameter("concatenation parts must be cycle colourings".into())
    })?;
    if parts.iter().any(|(c, _)| cycle_length(c) != Some(n)) {
        return invalid("all concatenated parts must colour the same cycle");
    }
    let copies: usize = parts.iter().map(|(_, k)| k).sum();
    if copies == 0 {
        return invalid("total multiplicity is zero");
    }
    if copies == 1 {
        return Ok(parts
            .iter()
            .find(|(_, k)| *k == 1)
            .expect("one copy")
            .0
            .clone());
    }
    let mut red = Vec::with_capacity(n * copies);
    for (c, mult) in parts {
        for _ in 0..*mult {
            red.extend_from_slice(c.red_mask());
        }
    }
    Colouring::new(Arc::new(Graph::cycle(n * copies)?), red)
}

/// Joins between copies in a concatenation (0 for a single copy).
pub fn concat_joins(parts: &[(Colouring, usize)]) -> usize {
    let copies: usize = parts.iter().map(|(_, k)| k).sum();
    if copies > 1 {
        copies
    } else {
        0
    }
}

/// Bound `6 · joins / length` on each coordinate's deviation from the
/// multiplicity-weighted average.
pub fn concat_deviation_bound(parts: &[(Colouring, usize)]) -> Q {
    let len: usize = parts.iter().map(|(c, k)| c.graph().n() * k).sum();
    q(6 * concat_joins(parts) as i64, len.max(1) as i64)
}

/// Weighted average of pairs; weights need not be normalised.
pub fn weighted_average(items: &[(RationalPair, u64)]) -> RationalPair {
    let total: u64 = items.iter().map(|(_, w)| w).sum();
    let total = Q::from_integer(BigInt::from(total));
    let (mut x, mut y) = (Q::zero(), Q::zero());
    for (p, w) in items {
        let w = Q::from_integer(BigInt::from(*w));
        x += &p.x * &w;
        y += &p.y * &w;
    }
    RationalPair::new(x / &total, y / &total)
}

/// Max-coordinate distance.
pub fn linf(a: &RationalPair, b: &RationalPair) -> Q {
    (&a.x - &b.x).abs().max((&a.y - &b.y).abs())
}

/// Distance to the nearer of `target` and its swap.
pub fn unordered_deviation(a: &RationalPair, target: &RationalPair) -> Q {
    linf(a, target).min(linf(a, &target.swapped()))
}

/// Parameters and balancing record of a half-split colouring.
#[derive(Debug, Clone)]
pub struct HalfSplitSpec {
    pub m: usize,
    pub k: usize,
    pub r: usize,
    pub cover: CoverPredicate,
    /// Height of the cover slab `X = [k]^{m-1} × [a]`.
    pub a: usize,
    /// The balancing set `E` (vertex indices).
    pub adjust: Vec<usize>,
    /// `|E| <= c · k^{m-1}` is enforced with this constant.
    pub c: usize,
}

/// `((2m-r)/2m, ((2m-r)/2m)²)`: the red class is mostly solid, the blue
/// class sits in the cover slab with `2m - r` blue neighbours each.
pub fn half_split_target(m: usize, r: usize) -> RationalPair {
    let f = q((2 * m - r) as i64, 2 * m as i64);
    RationalPair::new(f.clone(), &f * &f)
}

/// Colours `[k]^m` red on `Y = {x : x_m >= a}` and on `S ∩ X`, blue on the
/// rest of the slab `X`, with `a = ⌈(2m+r)k / 4m⌉`, then flips a small set
/// `E` to reach exact balance.
///
/// `E` is taken from the majority colour inside `X`, from the rows farthest
/// from the `X`/`Y` interface, lowest index first.
pub fn half_split(
    m: usize,
    k: usize,
    r: usize,
    cover: &CoverPredicate,
) -> Result<(Colouring, HalfSplitSpec)> {
    if cover.m() != m {
        return invalid(format!(
            "cover dimension {} differs from m = {m}",
            cover.m()
        ));
    }
    if r > 2 * m {
        return invalid(format!("r = {r} exceeds 2m = {}", 2 * m));
    }
    if !k.is_multiple_of(2) {
        return invalid(format!("half-split needs an even side, got k = {k}"));
    }
    check_seams(cover, k)?;
    let report = verify_on_torus(cover, k, r)?;
    if !report.passes() {
        return invalid(format!(
            "cover is not an independent exact {r}-cover of [{k}]^{m}"
        ));
    }
    let shape = TorusShape::new(m, k)?;
    let g = Arc::new(Graph::torus(m, k)?);
    let a = ((2 * m + r) * k).div_ceil(4 * m);
    let n = shape.len();
    let row = |v: usize| v % k; // last coordinate
    let mut red: Vec<bool> = (0..n)
        .map(|v| {
            if row(v) < a {
                let x: Vec<i64> = shape.decode(v).into_iter().map(|c| c as i64).collect();
                cover.contains(&x)
            } else {
                true
            }
        })
        .collect();

    let count = red.iter().filter(|&&c| c).count();
    let surplus = count as isize - (n / 2) as isize;
    let flip_from = surplus > 0;
    let needed = surplus.unsigned_abs();
    let depth = |v: usize| (a - row(v)).min(row(v) + 1);
    let mut candidates: Vec<usize> = (0..n)
        .filter(|&v| row(v) < a && red[v] == flip_from)
        .collect();
    candidates.sort_by_key(|&v| (std::cmp::Reverse(depth(v)), v));
    if candidates.len() < needed {
        return Err(Error::Infeasible(format!(
            "need {needed} balancing flips, only {} candidates",
            candidates.len()
        )));
    }
    let c = 10 * m;
    let face = n / k;
    if needed > c * face {
        return Err(Error::Infeasible(format!(
            "balancing set of {needed} exceeds {c}·k^(m-1) = {}",
            c * face
        )));
    }
    let mut adjust: Vec<usize> = candidates[..needed].to_vec();
    for &v in &adjust {
        red[v] = !red[v];
    }
    adjust.sort_unstable();
    let colouring = Colouring::new(g, red)?;
    Ok((
        colouring,
        HalfSplitSpec {
            m,
            k,
            r,
            cover: cover.clone(),
            a,
            adjust,
            c,
        },
    ))
}

/// Red on `x_m < k/2`, blue above: two solid bands.
pub fn torus_bands(m: usize, k: usize) -> Result<Colouring> {
    if !k.is_multiple_of(2) {
        return invalid("banded colouring needs an even side");
    }
    let g = Arc::new(Graph::torus(m, k)?);
    let red = (0..g.n()).map(|v| v % k < k / 2).collect();
    Colouring::new(g, red)
}

/// Tiles `[kt]^m` with `t^m` copies of `[k]^m`; the first `s` blocks in
/// lexicographic block order use `c1`, the rest `c2`.
pub fn tile_torus(c1: &Colouring, c2: &Colouring, s: usize, t: usize) -> Result<Colouring> {
    let shape = c1
        .graph()
        .torus_shape()
        .ok_or_else(|| Error::InvalidParameter("tiling needs torus colourings".into()))?;
    if c2.graph().torus_shape() != Some(shape) {
        return invalid("both tiles must colour the same torus");
    }
    if t == 0 {
        return invalid("tiling factor must be at least 1");
    }
    let blocks = t.pow(shape.m as u32);
    if s > blocks {
        return invalid(format!("s = {s} exceeds t^m = {blocks}"));
    }
    let big = TorusShape::new(shape.m, shape.k * t)?;
    let g = Arc::new(Graph::torus(shape.m, shape.k * t)?);
    let red = (0..big.len())
        .map(|v| {
            let coords = big.decode(v);
            let block = coords.iter().fold(0, |acc, &c| acc * t + c / shape.k);
            let local: Vec<usize> = coords.iter().map(|&c| c % shape.k).collect();
            let src = if block < s { c1 } else { c2 };
            src.is_red(shape.encode(&local))
        })
        .collect();
    Colouring::new(g, red)
}

/// `6 · 2m / k`.
pub fn tile_deviation_bound(m: usize, k: usize) -> Q {
    BigRational::new(BigInt::from(12 * m), BigInt::from(k))
}
