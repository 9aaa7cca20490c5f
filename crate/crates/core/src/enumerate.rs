//! Ground-truth clouds of `P₂` pairs: every balanced colouring of a small
//! graph, or a seeded uniform sample of balanced colourings of a larger one.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::colouring::Colouring;
use crate::error::{invalid, Error, Result};
use crate::frac;
use crate::graph::Graph;
use crate::region::{convex_hull, ConvexRegion, Location, RegionFile};
use crate::walk::{p2_from_sums, RationalPair};

/// Exhaustive enumeration refuses graphs with more balanced colourings.
pub const MAX_EXHAUSTIVE: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum EnumerationMode {
    Exhaustive,
    Sample { count: usize, seed: u64 },
}

/// One colouring: its red set as little-endian 64-bit words and the two
/// walk counts `Σ d_R(v)²`, `Σ d_B(v)²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CloudRow {
    pub red: Vec<u64>,
    pub red_squares: u64,
    pub blue_squares: u64,
}

impl CloudRow {
    /// Hex of the red-set bitmask, bit `v` = vertex `v`, most significant
    /// digit first, padded to `⌈n/4⌉` digits.
    pub fn mask_hex(&self, n: usize) -> String {
        let digits = n.div_ceil(4).max(1);
        let mut out = String::with_capacity(digits);
        for i in (0..digits).rev() {
            let word = self.red.get(i / 16).copied().unwrap_or(0);
            let nibble = (word >> ((i % 16) * 4)) & 0xf;
            out.push(char::from_digit(nibble as u32, 16).expect("nibble"));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct RegionCloud {
    pub label: String,
    pub mode: EnumerationMode,
    graph: Arc<Graph>,
    pub rows: Vec<CloudRow>,
    pub hull: ConvexRegion,
    pub colourings_enumerated: u64,
}

impl RegionCloud {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn pair(&self, row: &CloudRow) -> RationalPair {
        p2_from_sums(&self.graph, row.red_squares, row.blue_squares)
    }

    /// Distinct points with multiplicities, keyed by walk counts.
    pub fn multiplicities(&self) -> BTreeMap<(u64, u64), usize> {
        let mut out = BTreeMap::new();
        for row in &self.rows {
            *out.entry((row.red_squares, row.blue_squares)).or_insert(0) += 1;
        }
        out
    }

    pub fn distinct_points(&self) -> Vec<(RationalPair, usize)> {
        let mut pts: Vec<_> = self
            .multiplicities()
            .into_iter()
            .map(|((r, b), c)| (p2_from_sums(&self.graph, r, b), c))
            .collect();
        pts.sort();
        pts
    }

    /// `red_mask_hex,x_num,x_den,y_num,y_den`, one row per colouring in
    /// enumeration order.
    pub fn to_csv(&self) -> String {
        let n = self.graph.n();
        let mut out = String::from("red_mask_hex,x_num,x_den,y_num,y_den\n");
        let cache: BTreeMap<(u64, u64), RationalPair> = self
            .multiplicities()
            .into_keys()
            .map(|(r, b)| ((r, b), p2_from_sums(&self.graph, r, b)))
            .collect();
        for row in &self.rows {
            let p = &cache[&(row.red_squares, row.blue_squares)];
            writeln!(
                out,
                "{},{},{},{},{}",
                row.mask_hex(n),
                p.x.numer(),
                p.x.denom(),
                p.y.numer(),
                p.y.denom()
            )
            .expect("write to string");
        }
        out
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Point {
            x: String,
            y: String,
            count: usize,
        }
        let points: Vec<Point> = self
            .distinct_points()
            .into_iter()
            .map(|(p, count)| Point {
                x: frac::to_string(&p.x),
                y: frac::to_string(&p.y),
                count,
            })
            .collect();
        let hull: RegionFile = self.hull.to_file();
        serde_json::json!({
            "label": self.label,
            "mode": self.mode,
            "colourings_enumerated": self.colourings_enumerated,
            "distinct_points": points,
            "hull": hull,
        })
    }
}

fn binomial(n: u64, k: u64) -> Option<u64> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Next integer with the same popcount (Gosper's hack).
fn next_same_popcount(x: u64) -> u64 {
    let c = x & x.wrapping_neg();
    let r = x + c;
    (((r ^ x) >> 2) / c) | r
}

fn row_from_words(g: &Graph, words: Vec<u64>) -> CloudRow {
    let is_red = |v: usize| (words[v / 64] >> (v % 64)) & 1 == 1;
    let (mut rs, mut bs) = (0u64, 0u64);
    for v in 0..g.n() {
        let c = is_red(v);
        let same = g.neighbours(v).iter().filter(|&&u| is_red(u) == c).count() as u64;
        if c {
            rs += same * same;
        } else {
            bs += same * same;
        }
    }
    CloudRow {
        red: words,
        red_squares: rs,
        blue_squares: bs,
    }
}

fn words_from_mask(mask: &[bool]) -> Vec<u64> {
    let mut words = vec![0u64; mask.len().div_ceil(64).max(1)];
    for (v, _) in mask.iter().enumerate().filter(|(_, &r)| r) {
        words[v / 64] |= 1 << (v % 64);
    }
    words
}

/// `count` uniform balanced colourings drawn from a ChaCha8 stream seeded
/// with `seed`; each is a uniformly random `n/2`-subset.
pub fn sample_balanced(n: usize, count: usize, seed: u64) -> Vec<Vec<bool>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut mask = vec![false; n];
            for v in rand::seq::index::sample(&mut rng, n, n / 2) {
                mask[v] = true;
            }
            mask
        })
        .collect()
}

/// Random balanced colourings of `g` (see [`sample_balanced`]).
pub fn sample_colourings(g: &Arc<Graph>, count: usize, seed: u64) -> Result<Vec<Colouring>> {
    sample_balanced(g.n(), count, seed)
        .into_iter()
        .map(|mask| Colouring::new(Arc::clone(g), mask))
        .collect()
}

pub(crate) fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::ResourceLimit(format!("cannot start worker pool: {e}")))
}

/// Computes `P₂` for every balanced colouring (bitmasks in increasing
/// numeric order) or for a seeded sample. The result does not depend on
/// `workers`.
pub fn enumerate_region(
    g: &Arc<Graph>,
    mode: EnumerationMode,
    workers: usize,
) -> Result<RegionCloud> {
    let n = g.n();
    if !n.is_multiple_of(2) {
        return invalid("balanced colourings need an even vertex count");
    }
    let masks: Vec<Vec<u64>> = match mode {
        EnumerationMode::Exhaustive => {
            let total = if n <= 64 {
                binomial(n as u64, n as u64 / 2)
            } else {
                None
            };
            let total = match total {
                Some(t) if t <= MAX_EXHAUSTIVE => t,
                _ => {
                    return Err(Error::ResourceLimit(format!(
                        "C({n}, {}) exceeds the exhaustive bound {MAX_EXHAUSTIVE}",
                        n / 2
                    )))
                }
            };
            let mut out = Vec::with_capacity(total as usize);
            let mut x: u64 = (1u64 << (n / 2)) - 1;
            for i in 0..total {
                out.push(vec![x]);
                if i + 1 < total {
                    x = next_same_popcount(x);
                }
            }
            out
        }
        EnumerationMode::Sample { count, seed } => sample_balanced(n, count, seed)
            .iter()
            .map(|m| words_from_mask(m))
            .collect(),
    };
    let rows: Vec<CloudRow> = pool(workers)?.install(|| {
        masks
            .into_par_iter()
            .map(|w| row_from_words(g, w))
            .collect()
    });
    let mut cloud = RegionCloud {
        label: g.label().to_string(),
        mode,
        graph: Arc::clone(g),
        colourings_enumerated: rows.len() as u64,
        rows,
        hull: convex_hull(&[crate::region::RationalPoint::ratio(0, 1, 0, 1)])?,
    };
    let pts: Vec<_> = cloud
        .distinct_points()
        .into_iter()
        .map(|(p, _)| p.to_point())
        .collect();
    if !pts.is_empty() {
        cloud.hull = convex_hull(&pts)?.with_label(format!("hull of {}", cloud.label));
    }
    Ok(cloud)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContainmentViolation {
    pub red_mask_hex: String,
    pub pair: RationalPair,
}

/// Every cloud point outside `region`; boundary points are accepted.
pub fn check_containment(cloud: &RegionCloud, region: &ConvexRegion) -> Vec<ContainmentViolation> {
    let outside: BTreeMap<(u64, u64), RationalPair> = cloud
        .multiplicities()
        .into_keys()
        .filter_map(|key| {
            let p = p2_from_sums(cloud.graph(), key.0, key.1);
            (region.contains(&p.to_point()) == Location::Outside).then_some((key, p))
        })
        .collect();
    cloud
        .rows
        .iter()
        .filter_map(|row| {
            outside
                .get(&(row.red_squares, row.blue_squares))
                .map(|p| ContainmentViolation {
                    red_mask_hex: row.mask_hex(cloud.graph().n()),
                    pair: p.clone(),
                })
        })
        .collect()
}
