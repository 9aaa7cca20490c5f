//! Exact rational convex polygons in the unit square: the universal container
//! `D_d`, the constructible region `X_{2m}` of the torus, and the exact
//! asymptotic region of the 2-dimensional torus.
//!
//! Nothing here uses a tolerance; every predicate is an exact sign test.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::frac::{self, in_unit_interval, q, Q};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalPoint {
    pub x: Q,
    pub y: Q,
}

impl RationalPoint {
    pub fn new(x: Q, y: Q) -> Self {
        Self { x, y }
    }

    pub fn ratio(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        Self::new(q(xn, xd), q(yn, yd))
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.y.clone(), self.x.clone())
    }

    pub fn to_strings(&self) -> [String; 2] {
        [frac::to_string(&self.x), frac::to_string(&self.y)]
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Twice the signed area of `(a, b, c)`; positive for a left turn.
pub fn cross(a: &RationalPoint, b: &RationalPoint, c: &RationalPoint) -> Q {
    (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Interior,
    Boundary,
    Outside,
}

impl Location {
    /// Inside or on the boundary.
    pub fn is_inside(self) -> bool {
        self != Location::Outside
    }
}

/// A convex polygon with vertices in strictly convex position, listed
/// counter-clockwise from the lexicographically smallest vertex. One and two
/// vertices describe a point and a segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexRegion {
    pub label: String,
    vertices: Vec<RationalPoint>,
}

impl ConvexRegion {
    pub fn vertices(&self) -> &[RationalPoint] {
        &self.vertices
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn contains(&self, p: &RationalPoint) -> Location {
        contains(self, p)
    }

    /// Every vertex of `self` lies in `other` (boundary allowed).
    pub fn is_subset_of(&self, other: &ConvexRegion) -> bool {
        self.vertices.iter().all(|v| other.contains(v).is_inside())
    }

    pub fn to_file(&self) -> RegionFile {
        RegionFile {
            label: self.label.clone(),
            vertices: self.vertices.iter().map(|v| v.to_strings()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("region serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: RegionFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.into_region()
    }
}

/// `{"label": str, "vertices": [["p/q", "p/q"], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionFile {
    pub label: String,
    pub vertices: Vec<[String; 2]>,
}

impl RegionFile {
    /// Re-hulls the listed points, so a file with stray or reordered
    /// vertices still yields a valid region.
    pub fn into_region(self) -> Result<ConvexRegion> {
        let pts = self
            .vertices
            .iter()
            .map(|[x, y]| Ok(RationalPoint::new(frac::parse(x)?, frac::parse(y)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(convex_hull(&pts)?.with_label(self.label))
    }
}

/// Monotone-chain hull with exact cross products. Collinear and repeated
/// points are dropped.
pub fn convex_hull(points: &[RationalPoint]) -> Result<ConvexRegion> {
    if points.is_empty() {
        return invalid("convex hull of an empty point set");
    }
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return Ok(ConvexRegion {
            label: String::from("hull"),
            vertices: pts,
        });
    }
    let mut lower: Vec<RationalPoint> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<RationalPoint> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    Ok(ConvexRegion {
        label: String::from("hull"),
        vertices: lower,
    })
}

/// Hull of the points together with their coordinate swaps.
pub fn sym_hull(points: &[RationalPoint]) -> Result<ConvexRegion> {
    let mut all = points.to_vec();
    all.extend(points.iter().map(RationalPoint::swapped));
    convex_hull(&all)
}

pub fn contains(region: &ConvexRegion, p: &RationalPoint) -> Location {
    let vs = &region.vertices;
    match vs.len() {
        0 => Location::Outside,
        1 => {
            if &vs[0] == p {
                Location::Boundary
            } else {
                Location::Outside
            }
        }
        2 => {
            let on_line = cross(&vs[0], &vs[1], p).is_zero();
            let within = p.x >= vs[0].x.clone().min(vs[1].x.clone())
                && p.x <= vs[0].x.clone().max(vs[1].x.clone())
                && p.y >= vs[0].y.clone().min(vs[1].y.clone())
                && p.y <= vs[0].y.clone().max(vs[1].y.clone());
            if on_line && within {
                Location::Boundary
            } else {
                Location::Outside
            }
        }
        len => {
            let mut on_edge = false;
            for i in 0..len {
                let c = cross(&vs[i], &vs[(i + 1) % len], p);
                match c.cmp(&Q::zero()) {
                    Ordering::Less => return Location::Outside,
                    Ordering::Equal => on_edge = true,
                    Ordering::Greater => {}
                }
            }
            if on_edge {
                Location::Boundary
            } else {
                Location::Interior
            }
        }
    }
}

fn parabola_points(d: usize, ls: impl IntoIterator<Item = usize>) -> Vec<RationalPoint> {
    let d = d as i64;
    ls.into_iter()
        .map(|l| {
            let l = l as i64;
            RationalPoint::ratio(l, d, l * l, d * d)
        })
        .collect()
}

/// `D_d`: the symmetric hull of `{(l/d, l²/d²) : 0 <= l <= d}`.
pub fn d_region(d: usize) -> Result<ConvexRegion> {
    if d == 0 {
        return invalid("degree must be at least 1");
    }
    Ok(sym_hull(&parabola_points(d, 0..=d))?.with_label(format!("D_{d}")))
}

/// `X_{2m}`: the symmetric hull of the parabola points with
/// `l ∈ {0, m, 2m-2, 2m-1, 2m}` over `d = 2m`.
pub fn x_region(m: usize) -> Result<ConvexRegion> {
    if m < 2 {
        return invalid("x_region needs m >= 2");
    }
    let ls = [0, m, 2 * m - 2, 2 * m - 1, 2 * m];
    Ok(sym_hull(&parabola_points(2 * m, ls))?.with_label(format!("X_{}", 2 * m)))
}

/// The asymptotic region of the 2-dimensional torus:
/// `sch{(0,0), (1/2,1/4), (3/4,9/16), (1,1)}`.
pub fn torus2_region() -> ConvexRegion {
    let pts = [
        RationalPoint::ratio(0, 1, 0, 1),
        RationalPoint::ratio(1, 2, 1, 4),
        RationalPoint::ratio(3, 4, 9, 16),
        RationalPoint::ratio(1, 1, 1, 1),
    ];
    sym_hull(&pts).expect("non-empty").with_label("P(T^2)")
}

/// Integer-sharpened lower bound on `P_2(R)` given the internal-edge
/// fraction `alpha`: `(α d (2l+1) - l(l+1)) / d²` with `l <= αd < l+1`
/// (and `l = d-1` at `α = 1`).
pub fn lower_envelope(d: usize, alpha: &Q) -> Result<Q> {
    if d == 0 {
        return invalid("degree must be at least 1");
    }
    if !in_unit_interval(alpha) {
        return invalid(format!("alpha = {alpha} outside [0, 1]"));
    }
    let dq = Q::from_integer(BigInt::from(d));
    let ad = alpha * &dq;
    let mut l = ad.floor().to_integer();
    if alpha.is_one() {
        l = BigInt::from(d - 1);
    }
    let lq = Q::from_integer(l.clone());
    let value = (&ad * (lq.clone() * q(2, 1) + Q::one())
        - Q::from_integer(&l * (&l + BigInt::one())))
        / (&dq * &dq);
    Ok(value)
}

/// Both envelope inequalities: `y >= g(x)` and `x >= g(y)`.
pub fn envelope_membership(d: usize, p: &RationalPoint) -> bool {
    match (lower_envelope(d, &p.x), lower_envelope(d, &p.y)) {
        (Ok(gx), Ok(gy)) => p.y >= gx && p.x >= gy,
        _ => false,
    }
}

/// `l` with `l <= α d < l + 1`, clamped to `d - 1` at `α = 1`.
pub fn envelope_bracket(d: usize, alpha: &Q) -> Result<usize> {
    if !in_unit_interval(alpha) || d == 0 {
        return invalid("alpha outside [0, 1] or zero degree");
    }
    let ad = alpha * Q::from_integer(BigInt::from(d));
    let l = ad.floor().to_integer();
    let l: usize = l.to_string().parse().expect("small bracket");
    Ok(l.min(d - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(xn: i64, xd: i64, yn: i64, yd: i64) -> RationalPoint {
        RationalPoint::ratio(xn, xd, yn, yd)
    }

    #[test]
    fn hull_drops_interior_points() {
        let h = convex_hull(&[
            pt(0, 1, 0, 1),
            pt(1, 1, 0, 1),
            pt(0, 1, 1, 1),
            pt(1, 4, 1, 4),
        ])
        .unwrap();
        assert_eq!(
            h.vertices(),
            &[pt(0, 1, 0, 1), pt(1, 1, 0, 1), pt(0, 1, 1, 1)]
        );
        let single = convex_hull(&[pt(1, 3, 1, 5)]).unwrap();
        assert_eq!(single.vertices().len(), 1);
        assert!(convex_hull(&[]).is_err());
        let collinear = convex_hull(&[pt(0, 1, 0, 1), pt(1, 2, 1, 2), pt(1, 1, 1, 1)]).unwrap();
        assert_eq!(collinear.vertices(), &[pt(0, 1, 0, 1), pt(1, 1, 1, 1)]);
    }

    #[test]
    fn d4_generating_set_has_eight_vertices() {
        let mut pts = parabola_points(4, 0..=4);
        pts.extend(parabola_points(4, 0..=4).iter().map(RationalPoint::swapped));
        assert_eq!(pts.len(), 10);
        let h = convex_hull(&pts).unwrap();
        assert_eq!(h.vertices().len(), 8);
    }

    #[test]
    fn sym_hull_examples() {
        let h = sym_hull(&[pt(1, 2, 1, 4), pt(0, 1, 0, 1), pt(1, 1, 1, 1)]).unwrap();
        assert_eq!(
            h.vertices(),
            &[
                pt(0, 1, 0, 1),
                pt(1, 2, 1, 4),
                pt(1, 1, 1, 1),
                pt(1, 4, 1, 2)
            ]
        );
        let again = sym_hull(h.vertices()).unwrap();
        assert_eq!(again.vertices(), h.vertices());
        let plain = convex_hull(h.vertices()).unwrap();
        assert_eq!(plain.vertices(), h.vertices());
    }

    #[test]
    fn d_regions() {
        let d2 = d_region(2).unwrap();
        assert_eq!(
            d2.vertices(),
            &[
                pt(0, 1, 0, 1),
                pt(1, 2, 1, 4),
                pt(1, 1, 1, 1),
                pt(1, 4, 1, 2)
            ]
        );
        let d4 = d_region(4).unwrap();
        assert!(d4.vertices().contains(&pt(1, 4, 1, 16)));
        assert!(d4.vertices().contains(&pt(9, 16, 3, 4)));
        for d in 1..=8 {
            let r = d_region(d).unwrap();
            assert_eq!(r.contains(&pt(0, 1, 0, 1)), Location::Boundary);
            assert_eq!(r.contains(&pt(1, 1, 1, 1)), Location::Boundary);
        }
        assert_eq!(d_region(1).unwrap().vertices().len(), 2);
    }

    #[test]
    fn containment_examples() {
        let d2 = d_region(2).unwrap();
        assert_eq!(d2.contains(&pt(1, 2, 1, 2)), Location::Interior);
        let d4 = d_region(4).unwrap();
        // 1/16 - 1/1000
        assert_eq!(d4.contains(&pt(1, 4, 123, 2000)), Location::Outside);
        assert_eq!(d4.contains(&pt(1, 4, 1, 16)), Location::Boundary);
    }

    #[test]
    fn segment_and_point_containment() {
        let seg = d_region(1).unwrap();
        assert_eq!(seg.contains(&pt(1, 2, 1, 2)), Location::Boundary);
        assert_eq!(seg.contains(&pt(1, 2, 1, 3)), Location::Outside);
        assert_eq!(seg.contains(&pt(2, 1, 2, 1)), Location::Outside);
        let dot = convex_hull(&[pt(1, 2, 1, 3)]).unwrap();
        assert_eq!(dot.contains(&pt(1, 2, 1, 3)), Location::Boundary);
    }

    #[test]
    fn envelope_values() {
        assert_eq!(lower_envelope(2, &q(1, 2)).unwrap(), q(1, 4));
        assert_eq!(lower_envelope(2, &q(1, 4)).unwrap(), q(1, 8));
        assert_eq!(lower_envelope(4, &q(7, 8)).unwrap(), q(25, 32));
        assert_eq!(lower_envelope(4, &q(1, 1)).unwrap(), q(1, 1));
        assert!(lower_envelope(4, &q(5, 4)).is_err());
        assert!(lower_envelope(4, &q(-1, 4)).is_err());
        for d in 1..=9usize {
            for l in 0..=d {
                let a = q(l as i64, d as i64);
                assert_eq!(lower_envelope(d, &a).unwrap(), &a * &a);
            }
        }
        assert_eq!(envelope_bracket(4, &q(7, 8)).unwrap(), 3);
        assert_eq!(envelope_bracket(4, &q(1, 1)).unwrap(), 3);
    }

    #[test]
    fn envelope_membership_examples() {
        assert!(envelope_membership(2, &pt(1, 2, 1, 4)));
        assert!(!envelope_membership(4, &pt(9, 10, 1, 2)));
        assert!(!d_region(4).unwrap().contains(&pt(9, 10, 1, 2)).is_inside());
    }

    #[test]
    fn x_regions() {
        let x2 = x_region(2).unwrap();
        assert_eq!(x2.vertices(), torus2_region().vertices());
        assert_eq!(x2.vertices().len(), 6);
        let x3 = x_region(3).unwrap();
        assert!(x3.vertices().contains(&pt(4, 6, 16, 36)));
        for m in 2..=6 {
            assert!(x_region(m).unwrap().is_subset_of(&d_region(2 * m).unwrap()));
        }
        assert!(x_region(1).is_err());
        assert!(!d_region(4).unwrap().is_subset_of(&x2));
    }

    #[test]
    fn region_json_roundtrip() {
        let r = torus2_region();
        let text = r.to_json();
        assert!(text.contains(r#"["0/1","0/1"]"#));
        assert!(text.contains(r#"["9/16","3/4"]"#));
        assert_eq!(ConvexRegion::from_json(&text).unwrap(), r);
    }

    fn orientation_ok(r: &ConvexRegion) -> bool {
        let vs = r.vertices();
        let n = vs.len();
        n < 3 || (0..n).all(|i| cross(&vs[i], &vs[(i + 1) % n], &vs[(i + 2) % n]).is_positive())
    }

    proptest! {
        #[test]
        fn hull_is_strictly_convex_and_contains_inputs(
            raw in proptest::collection::vec((0i64..20, 1i64..8, 0i64..20, 1i64..8), 1..25)
        ) {
            let pts: Vec<_> = raw.iter().map(|&(a, b, c, d)| pt(a, b, c, d)).collect();
            let h = convex_hull(&pts).unwrap();
            prop_assert!(orientation_ok(&h));
            for p in &pts {
                prop_assert!(h.contains(p).is_inside());
            }
        }

        #[test]
        fn envelope_agrees_with_hull(d in 1usize..7, xn in 0i64..=60, yn in 0i64..=60, den in 1i64..=60) {
            let xn = xn.min(den);
            let yn = yn.min(den);
            let p = pt(xn, den, yn, den);
            let region = d_region(d).unwrap();
            prop_assert_eq!(envelope_membership(d, &p), region.contains(&p).is_inside());
        }

        #[test]
        fn envelope_is_convex(d in 1usize..8, a in 0i64..=100, b in 0i64..=100, lam in 1i64..100) {
            let (a1, a2) = (q(a.min(b), 100), q(a.max(b), 100));
            let lam = q(lam, 100);
            let mid = &lam * &a1 + (Q::one() - &lam) * &a2;
            let g = |v: &Q| lower_envelope(d, v).unwrap();
            prop_assert!(g(&mid) <= &lam * g(&a1) + (Q::one() - &lam) * g(&a2));
        }
    }
}
