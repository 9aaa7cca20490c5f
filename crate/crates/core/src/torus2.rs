//! Local structure behind the exact region of the 2-dimensional torus.
//!
//! For a balanced colouring of `[k]²`, each blue vertex `v` with a single
//! blue neighbour `w` gets a type:
//!
//! * Type 3 when `w` has at least three blue neighbours;
//! * Type 1 when both lateral neighbours of `w` (seen with `w` north of `v`)
//!   are red;
//! * Type 2 otherwise.
//!
//! The bipartite graph `H` joins Type 1 and Type 2 vertices (`X`) to red
//! vertices with between one and three red neighbours (`Y`). Double counting
//! `E(H)` with `deg_H ≥ 2` on `X` and `deg_H ≤ 3` on `Y` yields
//! `P₂(B) ≥ 1/8 + ε/2` whenever `P₂(R) = 1/4 + ε`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::colouring::Colouring;
use crate::enumerate::{pool, sample_colourings};
use crate::error::{invalid, Result};
use crate::frac::{self, q, Q};
use crate::graph::{Graph, TorusShape};
use crate::walk::p2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum B1Type {
    One,
    Two,
    Three,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct B1Vertex {
    pub v: usize,
    /// The unique blue neighbour.
    pub w: usize,
    pub kind: B1Type,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct TypeCensus {
    pub t1: u64,
    pub t2: u64,
    pub t3: u64,
    pub x_size: u64,
    pub y_size: u64,
    pub h_edges: u64,
}

fn torus2_shape(c: &Colouring, min_k: usize) -> Result<TorusShape> {
    match c.graph().torus_shape() {
        Some(s) if s.m == 2 && s.k >= min_k => Ok(s),
        Some(s) if s.m == 2 => invalid(format!("need k >= {min_k}, got k = {}", s.k)),
        _ => invalid("expected a colouring of a 2-dimensional torus"),
    }
}

/// Axis and sign of the step from `v` to its neighbour `w`.
fn direction(shape: TorusShape, v: usize, w: usize) -> (usize, isize) {
    for axis in 0..2 {
        for delta in [1, -1] {
            if shape.shift(v, axis, delta) == w {
                return (axis, delta);
            }
        }
    }
    unreachable!("w is a torus neighbour of v")
}

/// Classifies every vertex of `B₁`. Needs `k >= 5`.
pub fn classify_b1(c: &Colouring) -> Result<Vec<B1Vertex>> {
    let shape = torus2_shape(c, 5)?;
    let g = c.graph();
    let mut out = Vec::new();
    for v in 0..g.n() {
        if c.is_red(v) || c.same_colour_degree(v) != 1 {
            continue;
        }
        let w = *g
            .neighbours(v)
            .iter()
            .find(|&&u| !c.is_red(u))
            .expect("one blue neighbour");
        let kind = if c.same_colour_degree(w) >= 3 {
            B1Type::Three
        } else {
            // Rotate so that w is north of v; its laterals are w ± the other axis.
            let (axis, _) = direction(shape, v, w);
            let other = 1 - axis;
            let left = shape.shift(w, other, -1);
            let right = shape.shift(w, other, 1);
            if c.is_red(left) && c.is_red(right) {
                B1Type::One
            } else {
                B1Type::Two
            }
        };
        out.push(B1Vertex { v, w, kind });
    }
    Ok(out)
}

/// The 8 positions `(i±1, j), (i, j±1), (i±1, j±1)` around `v`.
fn ring8(shape: TorusShape, v: usize) -> [usize; 8] {
    let mut out = [0; 8];
    let mut idx = 0;
    for di in -1isize..=1 {
        for dj in -1isize..=1 {
            if di == 0 && dj == 0 {
                continue;
            }
            out[idx] = shape.shift(shape.shift(v, 0, di), 1, dj);
            idx += 1;
        }
    }
    out
}

/// Bipartite graph between `X` (Type 1/2 vertices of `B₁`) and
/// `Y = R₁ ∪ R₂ ∪ R₃`.
#[derive(Debug, Clone)]
pub struct HGraph {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    /// `(x vertex, y vertex)`, sorted.
    pub edges: Vec<(usize, usize)>,
    x_degree: Vec<usize>,
    y_degree: Vec<usize>,
}

impl HGraph {
    pub fn degree_x(&self, v: usize) -> usize {
        self.x_degree[v]
    }

    pub fn degree_y(&self, v: usize) -> usize {
        self.y_degree[v]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

pub fn in_y(c: &Colouring, v: usize) -> bool {
    c.is_red(v) && (1..=3).contains(&c.same_colour_degree(v))
}

/// Type 1 vertices join their torus neighbours in `Y`; Type 2 vertices join
/// every `Y` vertex among the 8 surrounding positions.
pub fn build_h(c: &Colouring, b1: &[B1Vertex]) -> Result<HGraph> {
    let shape = torus2_shape(c, 5)?;
    let g = c.graph();
    let n = g.n();
    let y: Vec<usize> = (0..n).filter(|&v| in_y(c, v)).collect();
    let mut edges = Vec::new();
    let mut x = Vec::new();
    for entry in b1 {
        let candidates: Vec<usize> = match entry.kind {
            B1Type::Three => continue,
            B1Type::One => g.neighbours(entry.v).to_vec(),
            B1Type::Two => ring8(shape, entry.v).to_vec(),
        };
        x.push(entry.v);
        for u in candidates {
            if in_y(c, u) {
                edges.push((entry.v, u));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let mut x_degree = vec![0; n];
    let mut y_degree = vec![0; n];
    for &(a, b) in &edges {
        x_degree[a] += 1;
        y_degree[b] += 1;
    }
    Ok(HGraph {
        x,
        y,
        edges,
        x_degree,
        y_degree,
    })
}

/// Type counts and the sizes of `H`.
pub fn type_census(c: &Colouring) -> Result<TypeCensus> {
    let b1 = classify_b1(c)?;
    let h = build_h(c, &b1)?;
    Ok(census_of(&b1, &h))
}

fn census_of(b1: &[B1Vertex], h: &HGraph) -> TypeCensus {
    let count = |t| b1.iter().filter(|e| e.kind == t).count() as u64;
    let (t1, t2, t3) = (count(B1Type::One), count(B1Type::Two), count(B1Type::Three));
    TypeCensus {
        t1,
        t2,
        t3,
        x_size: t1 + t2,
        y_size: h.y.len() as u64,
        h_edges: h.edge_count() as u64,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Side {
    X,
    Y,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimCounterexample {
    pub vertex: [usize; 2],
    pub side: Side,
    pub degree: usize,
    /// Rows `i-1, i, i+1`, columns `j-1, j, j+1`, as `R`/`B`.
    pub neighbourhood: [String; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimsReport {
    pub census: TypeCensus,
    pub counterexamples: Vec<ClaimCounterexample>,
    /// `2(t₁+t₂) <= |E(H)| <= 3(r₁+r₂+r₃)`.
    pub double_count_holds: bool,
}

impl ClaimsReport {
    pub fn passes(&self) -> bool {
        self.counterexamples.is_empty() && self.double_count_holds
    }
}

fn neighbourhood(c: &Colouring, shape: TorusShape, v: usize) -> [String; 3] {
    let row = |di: isize| -> String {
        (-1isize..=1)
            .map(|dj| {
                let u = shape.shift(shape.shift(v, 0, di), 1, dj);
                if c.is_red(u) {
                    'R'
                } else {
                    'B'
                }
            })
            .collect()
    };
    [row(-1), row(0), row(1)]
}

/// Checks `deg_H(v) ≥ 2` on `X` and `deg_H(y) ≤ 3` on `Y`. Needs `k >= 6`.
pub fn verify_t2_claims(c: &Colouring) -> Result<ClaimsReport> {
    let shape = torus2_shape(c, 6)?;
    let b1 = classify_b1(c)?;
    let h = build_h(c, &b1)?;
    let census = census_of(&b1, &h);
    let coords = |v: usize| {
        let xy = shape.decode(v);
        [xy[0], xy[1]]
    };
    let mut counterexamples = Vec::new();
    for &v in &h.x {
        if h.degree_x(v) < 2 {
            counterexamples.push(ClaimCounterexample {
                vertex: coords(v),
                side: Side::X,
                degree: h.degree_x(v),
                neighbourhood: neighbourhood(c, shape, v),
            });
        }
    }
    for &v in &h.y {
        if h.degree_y(v) > 3 {
            counterexamples.push(ClaimCounterexample {
                vertex: coords(v),
                side: Side::Y,
                degree: h.degree_y(v),
                neighbourhood: neighbourhood(c, shape, v),
            });
        }
    }
    let double_count_holds =
        2 * census.x_size <= census.h_edges && census.h_edges <= 3 * census.y_size;
    Ok(ClaimsReport {
        census,
        counterexamples,
        double_count_holds,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityReport {
    pub k: usize,
    pub x: Q,
    pub y: Q,
    /// `P₂(R) - 1/4`.
    pub epsilon: Q,
    /// `1/8 + ε/2`.
    pub bound: Q,
    /// `y - bound`; negative means the bound failed without slack.
    pub margin: Q,
    pub slack: Q,
    /// `2n + 8εn = r₁ + 4r₂ + 9r₃ + 16r₄`.
    pub identity_holds: bool,
    /// `t₃ ≤ 3b₃ + 4b₄`.
    pub t3_bound_holds: bool,
    /// `2n + 8εn ≤ 4I(R) - 2(t₁+t₂)`.
    pub red_chain_holds: bool,
    /// `8n P₂(B) ≥ 2I(R) - (t₁+t₂)`.
    pub blue_chain_holds: bool,
    pub census: TypeCensus,
}

impl InequalityReport {
    pub fn passes(&self) -> bool {
        self.margin >= -self.slack.clone()
            && self.identity_holds
            && self.t3_bound_holds
            && self.red_chain_holds
            && self.blue_chain_holds
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "k": self.k,
            "x": frac::to_string(&self.x),
            "y": frac::to_string(&self.y),
            "epsilon": frac::to_string(&self.epsilon),
            "bound": frac::to_string(&self.bound),
            "margin": frac::to_string(&self.margin),
            "slack": frac::to_string(&self.slack),
            "identity_holds": self.identity_holds,
            "t3_bound_holds": self.t3_bound_holds,
            "red_chain_holds": self.red_chain_holds,
            "blue_chain_holds": self.blue_chain_holds,
            "passes": self.passes(),
            "census": self.census,
        })
    }
}

/// Checks `P₂(B) ≥ 1/8 + ε/2 - 4/k` together with the exact intermediate
/// relations it is derived from. Needs `k >= 6`.
pub fn verify_t2_inequality(c: &Colouring) -> Result<InequalityReport> {
    let shape = torus2_shape(c, 6)?;
    let census = type_census(c)?;
    let prof = c.degree_profile();
    let pair = p2(c);
    let n = c.graph().n() as i64;
    let nq = Q::from_integer(BigInt::from(n));
    let epsilon = &pair.x - q(1, 4);
    let bound = q(1, 8) + &epsilon / q(2, 1);
    let margin = &pair.y - &bound;
    let slack = q(4, shape.k as i64);

    let big = |v: u64| Q::from_integer(BigInt::from(v));
    let r = &prof.red;
    let b = &prof.blue;
    let lhs = q(2, 1) * &nq + q(8, 1) * &epsilon * &nq;
    let identity_holds = lhs == big(r[1] + 4 * r[2] + 9 * r[3] + 16 * r[4]);
    let t3_bound_holds = census.t3 <= 3 * b[3] + 4 * b[4];
    let ir = big(prof.internal_red);
    let t12 = big(census.t1 + census.t2);
    let red_chain_holds = lhs <= q(4, 1) * &ir - q(2, 1) * &t12;
    let blue_chain_holds = q(8, 1) * &nq * &pair.y >= q(2, 1) * &ir - &t12;

    Ok(InequalityReport {
        k: shape.k,
        x: pair.x,
        y: pair.y,
        epsilon,
        bound,
        margin,
        slack,
        identity_holds,
        t3_bound_holds,
        red_chain_holds,
        blue_chain_holds,
        census,
    })
}

/// One sampled colouring's claim and inequality results.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct T2Row {
    pub index: usize,
    pub claims: ClaimsReport,
    pub inequality: InequalityReport,
}

/// Runs both checks on `count` seeded random balanced colourings of
/// `[k]²`. Output is independent of `workers`.
pub fn t2_batch(k: usize, count: usize, seed: u64, workers: usize) -> Result<Vec<T2Row>> {
    let g = std::sync::Arc::new(Graph::torus(2, k)?);
    let colourings = sample_colourings(&g, count, seed)?;
    pool(workers)?.install(|| {
        colourings
            .par_iter()
            .enumerate()
            .map(|(index, c)| {
                Ok(T2Row {
                    index,
                    claims: verify_t2_claims(c)?,
                    inequality: verify_t2_inequality(c)?,
                })
            })
            .collect()
    })
}

/// CSV of a batch, one line per colouring.
pub fn t2_rows_csv(rows: &[T2Row]) -> String {
    let mut out = String::from("index,t1,t2,t3,y_size,h_edges,counterexamples,x,y,margin,passes\n");
    for r in rows {
        let c = &r.claims.census;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.index,
            c.t1,
            c.t2,
            c.t3,
            c.y_size,
            c.h_edges,
            r.claims.counterexamples.len(),
            frac::to_string(&r.inequality.x),
            frac::to_string(&r.inequality.y),
            frac::to_string(&r.inequality.margin),
            r.claims.passes() && r.inequality.passes()
        )
        .expect("write to string");
    }
    out
}

/// Smallest `y - (1/8 + ε/2)` over a batch.
pub fn min_margin(rows: &[T2Row]) -> Option<Q> {
    rows.iter().map(|r| r.inequality.margin.clone()).min()
}
