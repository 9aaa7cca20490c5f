//! Independent exact `r`-covers of the lattice `Z^m`.
//!
//! A set `S` is an independent exact `r`-cover when no two members are
//! adjacent and every non-member has exactly `r` neighbours in `S`. Covers of
//! `Z^m` are held as periodic membership rules; a rule whose period divides
//! `k` in every coordinate descends to the torus `[k]^m` and is verified there
//! exhaustively.

mod search;

pub use search::{exhaustive_cover_search, Certificate, Prefilter, SearchLimits, SearchOutcome};

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::frac::{self, Q};
use crate::graph::{Graph, TorusShape};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverFamily {
    /// `Σ wᵢ xᵢ ≡ 0 (mod modulus)`.
    Linear { weights: Vec<i64>, modulus: u64 },
    /// `x mod 2` is a codeword of the binary Hamming code of length `2^l - 1`.
    Hamming { l: u32 },
    /// Pull-back of `inner` along the map summing blocks of `lambda`
    /// consecutive coordinates.
    Lifted {
        inner: Box<CoverPredicate>,
        lambda: usize,
    },
    /// Members listed as residues modulo the period.
    Explicit { members: BTreeSet<Vec<u64>> },
}

/// A periodic membership rule on `Z^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverPredicate {
    m: usize,
    family: CoverFamily,
    period: Vec<u64>,
}

impl CoverPredicate {
    pub fn linear(weights: Vec<i64>, modulus: u64) -> Result<Self> {
        if weights.is_empty() {
            return invalid("linear predicate needs at least one weight");
        }
        if modulus == 0 {
            return invalid("modulus must be positive");
        }
        Ok(Self {
            m: weights.len(),
            period: vec![modulus; weights.len()],
            family: CoverFamily::Linear { weights, modulus },
        })
    }

    pub fn hamming(l: u32) -> Result<Self> {
        if !(2..=16).contains(&l) {
            return invalid(format!("hamming parameter l = {l} outside 2..=16"));
        }
        let m = (1usize << l) - 1;
        Ok(Self {
            m,
            period: vec![2; m],
            family: CoverFamily::Hamming { l },
        })
    }

    /// Explicit member residues; each entry is reduced modulo `period`.
    pub fn explicit(period: Vec<u64>, members: impl IntoIterator<Item = Vec<i64>>) -> Result<Self> {
        if period.is_empty() || period.contains(&0) {
            return invalid("explicit predicate needs a positive period in every coordinate");
        }
        let m = period.len();
        let mut set = BTreeSet::new();
        for x in members {
            if x.len() != m {
                return invalid(format!("member {x:?} has wrong dimension, expected {m}"));
            }
            set.insert(
                x.iter()
                    .zip(&period)
                    .map(|(&c, &p)| c.rem_euclid(p as i64) as u64)
                    .collect(),
            );
        }
        Ok(Self {
            m,
            period,
            family: CoverFamily::Explicit { members: set },
        })
    }

    /// The empty set, the independent exact 0-cover.
    pub fn empty(m: usize) -> Result<Self> {
        if m == 0 {
            return invalid("dimension must be at least 1");
        }
        Self::explicit(vec![1; m], std::iter::empty())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn period(&self) -> &[u64] {
        &self.period
    }

    pub fn family(&self) -> &CoverFamily {
        &self.family
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        debug_assert_eq!(x.len(), self.m);
        match &self.family {
            CoverFamily::Linear { weights, modulus } => {
                let s: i128 = weights
                    .iter()
                    .zip(x)
                    .map(|(&w, &c)| w as i128 * c as i128)
                    .sum();
                s.rem_euclid(*modulus as i128) == 0
            }
            CoverFamily::Hamming { .. } => {
                let syndrome = x
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c.rem_euclid(2) == 1)
                    .fold(0usize, |acc, (i, _)| acc ^ (i + 1));
                syndrome == 0
            }
            CoverFamily::Lifted { inner, lambda } => {
                let image: Vec<i64> = x.chunks(*lambda).map(|b| b.iter().sum()).collect();
                inner.contains(&image)
            }
            CoverFamily::Explicit { members } => {
                let key: Vec<u64> = x
                    .iter()
                    .zip(&self.period)
                    .map(|(&c, &p)| c.rem_euclid(p as i64) as u64)
                    .collect();
                members.contains(&key)
            }
        }
    }

    /// Fraction of members in one period box.
    pub fn period_density(&self) -> Result<Q> {
        let total: u64 = self.period.iter().product();
        if total > 1 << 24 {
            return Err(Error::ResourceLimit(format!(
                "period box of {total} points is too large to scan"
            )));
        }
        let mut x = vec![0i64; self.m];
        let mut members = 0u64;
        for _ in 0..total {
            if self.contains(&x) {
                members += 1;
            }
            for (c, &p) in x.iter_mut().zip(&self.period).rev() {
                *c += 1;
                if *c < p as i64 {
                    break;
                }
                *c = 0;
            }
        }
        Ok(BigRational::new(BigInt::from(members), BigInt::from(total)))
    }

    pub fn to_file(&self) -> CoverFile {
        match &self.family {
            CoverFamily::Linear { weights, modulus } => CoverFile::Linear {
                m: self.m,
                weights: weights.clone(),
                modulus: *modulus,
            },
            CoverFamily::Hamming { l } => CoverFile::Hamming { m: self.m, l: *l },
            CoverFamily::Lifted { inner, lambda } => CoverFile::Lifted {
                m: self.m,
                lambda: *lambda,
                inner: Box::new(inner.to_file()),
            },
            CoverFamily::Explicit { members } => CoverFile::Explicit {
                m: self.m,
                period: self.period.clone(),
                members: members.iter().cloned().collect(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("cover serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CoverFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.into_predicate()
    }
}

/// Serialized cover predicate, tagged by `"family"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum CoverFile {
    Linear {
        m: usize,
        weights: Vec<i64>,
        modulus: u64,
    },
    Hamming {
        m: usize,
        l: u32,
    },
    Lifted {
        m: usize,
        lambda: usize,
        inner: Box<CoverFile>,
    },
    Explicit {
        m: usize,
        period: Vec<u64>,
        members: Vec<Vec<u64>>,
    },
}

impl CoverFile {
    pub fn into_predicate(self) -> Result<CoverPredicate> {
        let (declared, pred) = match self {
            CoverFile::Linear {
                m,
                weights,
                modulus,
            } => (m, CoverPredicate::linear(weights, modulus)?),
            CoverFile::Hamming { m, l } => (m, CoverPredicate::hamming(l)?),
            CoverFile::Lifted { m, lambda, inner } => {
                (m, lift_cover(&inner.into_predicate()?, lambda)?)
            }
            CoverFile::Explicit { m, period, members } => (
                m,
                CoverPredicate::explicit(
                    period,
                    members
                        .into_iter()
                        .map(|x| x.into_iter().map(|c| c as i64).collect()),
                )?,
            ),
        };
        if pred.m != declared {
            return Err(Error::Parse(format!(
                "declared m = {declared} but the predicate has dimension {}",
                pred.m
            )));
        }
        Ok(pred)
    }
}

/// `Σ i·xᵢ ≡ 0 (mod 2m+1)`: an independent exact 1-cover.
pub fn cover_r1(m: usize) -> Result<CoverPredicate> {
    if m == 0 {
        return invalid("dimension must be at least 1");
    }
    CoverPredicate::linear((1..=m as i64).collect(), 2 * m as u64 + 1)
}

/// `Σ i·xᵢ ≡ 0 (mod m+1)`: an independent exact 2-cover.
pub fn cover_r2(m: usize) -> Result<CoverPredicate> {
    if m < 2 {
        return invalid("the 2-cover construction needs m >= 2");
    }
    CoverPredicate::linear((1..=m as i64).collect(), m as u64 + 1)
}

/// `Σ xᵢ ≡ 0 (mod 3)`: an independent exact m-cover.
pub fn cover_rm(m: usize) -> Result<CoverPredicate> {
    if m == 0 {
        return invalid("dimension must be at least 1");
    }
    CoverPredicate::linear(vec![1; m], 3)
}

/// `Σ xᵢ ≡ 0 (mod 2)`: the even sublattice, an independent exact 2m-cover.
pub fn cover_r2m(m: usize) -> Result<CoverPredicate> {
    if m == 0 {
        return invalid("dimension must be at least 1");
    }
    CoverPredicate::linear(vec![1; m], 2)
}

/// Points whose parity vector lies in the Hamming code of length
/// `m = 2^l - 1` (parity-check columns are `1..=m` in binary).
pub fn cover_hamming(l: u32) -> Result<CoverPredicate> {
    CoverPredicate::hamming(l)
}

/// `S' = f⁻¹(S)` in `Z^{λm}`, where `f` sums consecutive blocks of `λ`
/// coordinates. Turns an exact `r`-cover into an exact `λr`-cover.
pub fn lift_cover(inner: &CoverPredicate, lambda: usize) -> Result<CoverPredicate> {
    if lambda == 0 {
        return invalid("lift factor must be at least 1");
    }
    if lambda == 1 {
        return Ok(inner.clone());
    }
    let period = inner
        .period
        .iter()
        .flat_map(|&p| std::iter::repeat_n(p, lambda))
        .collect();
    Ok(CoverPredicate {
        m: inner.m * lambda,
        period,
        family: CoverFamily::Lifted {
            inner: Box::new(inner.clone()),
            lambda,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum ObservedCover {
    /// Every non-member has this many member neighbours.
    Uniform(usize),
    NonUniform,
    /// There are no non-members.
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ViolationKind {
    /// A member with member neighbours.
    Dependent { member_neighbours: usize },
    /// A non-member whose member-neighbour count differs from `r`.
    WrongCount { member_neighbours: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverViolation {
    /// Torus coordinates, or `[vertex]` for a general graph.
    pub point: Vec<usize>,
    #[serde(flatten)]
    pub kind: ViolationKind,
}

/// Stored witnesses are capped; `violation_count` is the full tally.
pub const MAX_WITNESSES: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverReport {
    pub expected_r: usize,
    pub independent: bool,
    pub exact: bool,
    pub r_observed: ObservedCover,
    pub violations: Vec<CoverViolation>,
    pub violation_count: usize,
    pub members: usize,
    pub vertices: usize,
    pub density: Q,
}

impl CoverReport {
    pub fn passes(&self) -> bool {
        self.independent && self.exact
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "expected_r": self.expected_r,
            "independent": self.independent,
            "exact": self.exact,
            "passes": self.passes(),
            "r_observed": self.r_observed,
            "violation_count": self.violation_count,
            "violations": self.violations,
            "members": self.members,
            "vertices": self.vertices,
            "density": frac::to_string(&self.density),
        })
    }
}

/// Checks a member set of an arbitrary regular graph.
pub fn verify_cover_in_graph(g: &Graph, members: &[usize], r: usize) -> Result<CoverReport> {
    let mut mask = vec![false; g.n()];
    for &v in members {
        if v >= g.n() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: g.n(),
            });
        }
        mask[v] = true;
    }
    Ok(report_from_mask(g, &mask, r, |v| vec![v]))
}

fn report_from_mask(
    g: &Graph,
    mask: &[bool],
    r: usize,
    locate: impl Fn(usize) -> Vec<usize>,
) -> CoverReport {
    let mut independent = true;
    let mut exact = true;
    let mut observed: Option<usize> = None;
    let mut uniform = true;
    let mut violations = Vec::new();
    let mut violation_count = 0;
    let mut members = 0;
    for v in 0..g.n() {
        let hits = g.neighbours(v).iter().filter(|&&u| mask[u]).count();
        let kind = if mask[v] {
            members += 1;
            (hits > 0).then(|| {
                independent = false;
                ViolationKind::Dependent {
                    member_neighbours: hits,
                }
            })
        } else {
            match observed {
                None => observed = Some(hits),
                Some(o) if o != hits => uniform = false,
                _ => {}
            }
            (hits != r).then(|| {
                exact = false;
                ViolationKind::WrongCount {
                    member_neighbours: hits,
                }
            })
        };
        if let Some(kind) = kind {
            violation_count += 1;
            if violations.len() < MAX_WITNESSES {
                violations.push(CoverViolation {
                    point: locate(v),
                    kind,
                });
            }
        }
    }
    CoverReport {
        expected_r: r,
        independent,
        exact,
        r_observed: match (observed, uniform) {
            (None, _) => ObservedCover::Vacuous,
            (Some(o), true) => ObservedCover::Uniform(o),
            (Some(_), false) => ObservedCover::NonUniform,
        },
        violations,
        violation_count,
        members,
        vertices: g.n(),
        density: BigRational::new(BigInt::from(members), BigInt::from(g.n())),
    }
}

/// Refuses sides that the period does not divide.
pub fn check_seams(pred: &CoverPredicate, k: usize) -> Result<()> {
    if let Some(&p) = pred.period.iter().find(|&&p| !(k as u64).is_multiple_of(p)) {
        return Err(Error::Seam {
            period: p,
            k: k as u64,
        });
    }
    Ok(())
}

/// Member mask of `pred` on `[k]^m` in row-major order.
pub fn torus_mask(pred: &CoverPredicate, shape: TorusShape) -> Vec<bool> {
    (0..shape.len())
        .map(|i| {
            let x: Vec<i64> = shape.decode(i).into_iter().map(|c| c as i64).collect();
            pred.contains(&x)
        })
        .collect()
}

/// Exhaustive check of independence and exactness on `[k]^m`.
pub fn verify_on_torus(pred: &CoverPredicate, k: usize, r: usize) -> Result<CoverReport> {
    check_seams(pred, k)?;
    let g = Graph::torus(pred.m, k)?;
    let shape = g.torus_shape().expect("torus");
    let mask = torus_mask(pred, shape);
    Ok(report_from_mask(&g, &mask, r, |v| shape.decode(v)))
}

/// `r / (d + r)`.
pub fn cover_density(d: usize, r: usize) -> Q {
    BigRational::new(BigInt::from(r), BigInt::from(d + r))
}
