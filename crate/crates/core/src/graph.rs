//! Finite regular graphs: cycles, discrete tori, unions of 4-cycles and the
//! 40-vertex cubic graph carrying independent exact 1-, 2- and 3-covers.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest vertex count any builder will allocate.
pub const MAX_VERTICES: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GraphLabel {
    Cycle { n: usize },
    Torus { m: usize, k: usize },
    C4Union { copies: usize },
    Cubic40,
    Custom,
}

impl fmt::Display for GraphLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphLabel::Cycle { n } => write!(f, "cycle({n})"),
            GraphLabel::Torus { m, k } => write!(f, "torus(m={m},k={k})"),
            GraphLabel::C4Union { copies } => write!(f, "c4-union({copies})"),
            GraphLabel::Cubic40 => write!(f, "cubic40"),
            GraphLabel::Custom => write!(f, "custom"),
        }
    }
}

/// Row-major coordinates on `[k]^m`; the last coordinate varies fastest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TorusShape {
    pub m: usize,
    pub k: usize,
}

impl TorusShape {
    pub fn new(m: usize, k: usize) -> Result<Self> {
        if m == 0 {
            return invalid("torus dimension must be at least 1");
        }
        if k < 3 {
            return invalid(format!("torus side {k} < 3 gives a multigraph"));
        }
        let mut len: usize = 1;
        for _ in 0..m {
            len = len
                .checked_mul(k)
                .filter(|&l| l <= MAX_VERTICES)
                .ok_or_else(|| {
                    Error::ResourceLimit(format!("torus [{k}]^{m} exceeds {MAX_VERTICES} vertices"))
                })?;
        }
        Ok(Self { m, k })
    }

    pub fn len(&self) -> usize {
        self.k.pow(self.m as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut coords = vec![0; self.m];
        for c in coords.iter_mut().rev() {
            *c = index % self.k;
            index /= self.k;
        }
        coords
    }

    pub fn encode(&self, coords: &[usize]) -> usize {
        coords.iter().fold(0, |acc, &c| acc * self.k + c % self.k)
    }

    /// Stride of `axis` in the row-major encoding.
    fn stride(&self, axis: usize) -> usize {
        self.k.pow((self.m - 1 - axis) as u32)
    }

    /// Moves `index` by `delta` (any sign) along `axis`, wrapping modulo `k`.
    pub fn shift(&self, index: usize, axis: usize, delta: isize) -> usize {
        let stride = self.stride(axis);
        let c = (index / stride) % self.k;
        let k = self.k as isize;
        let nc = (c as isize + delta).rem_euclid(k) as usize;
        index - c * stride + nc * stride
    }
}

/// A finite `d`-regular simple undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    d: usize,
    adjacency: Vec<usize>,
    label: GraphLabel,
}

impl Graph {
    /// Builds a graph from an undirected edge list and validates regularity,
    /// simplicity and index ranges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], label: GraphLabel) -> Result<Self> {
        if n == 0 {
            return invalid("graph must have at least one vertex");
        }
        let mut lists: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return invalid(format!("self-loop at vertex {u}"));
            }
            if lists[u].contains(&v) {
                return invalid(format!("duplicate edge ({u},{v})"));
            }
            lists[u].push(v);
            lists[v].push(u);
        }
        let d = lists[0].len();
        if let Some((v, l)) = lists.iter().enumerate().find(|(_, l)| l.len() != d) {
            return Err(Error::InvariantViolation(format!(
                "graph is not regular: vertex 0 has degree {d}, vertex {v} has degree {}",
                l.len()
            )));
        }
        Ok(Self {
            n,
            d,
            adjacency: lists.concat(),
            label,
        })
    }

    /// The `n`-cycle with edges `(i, i+1 mod n)`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 4 || !n.is_multiple_of(2) {
            return invalid(format!("cycle length must be even and at least 4, got {n}"));
        }
        Ok(Self::ring(n))
    }

    /// Any cycle of length at least 3; neighbours ordered `[i+1, i-1]`.
    pub(crate) fn ring(n: usize) -> Self {
        let mut adjacency = Vec::with_capacity(2 * n);
        for i in 0..n {
            adjacency.push((i + 1) % n);
            adjacency.push((i + n - 1) % n);
        }
        Self {
            n,
            d: 2,
            adjacency,
            label: GraphLabel::Cycle { n },
        }
    }

    /// The discrete torus `[k]^m`: `2m`-regular, wrapping modulo `k` in every
    /// coordinate. Neighbours are ordered `+e_0, -e_0, +e_1, -e_1, ...`.
    pub fn torus(m: usize, k: usize) -> Result<Self> {
        let shape = TorusShape::new(m, k)?;
        let n = shape.len();
        let mut adjacency = Vec::with_capacity(n * 2 * m);
        for v in 0..n {
            for axis in 0..m {
                adjacency.push(shape.shift(v, axis, 1));
                adjacency.push(shape.shift(v, axis, -1));
            }
        }
        Ok(Self {
            n,
            d: 2 * m,
            adjacency,
            label: GraphLabel::Torus { m, k },
        })
    }

    /// Disjoint union of `copies` 4-cycles on vertices `4c..4c+4`.
    pub fn c4_union(copies: usize) -> Result<Self> {
        if copies == 0 {
            return invalid("c4 union needs at least one copy");
        }
        let mut adjacency = Vec::with_capacity(8 * copies);
        for c in 0..copies {
            for i in 0..4 {
                adjacency.push(4 * c + (i + 1) % 4);
                adjacency.push(4 * c + (i + 3) % 4);
            }
        }
        Ok(Self {
            n: 4 * copies,
            d: 2,
            adjacency,
            label: GraphLabel::C4Union { copies },
        })
    }

    /// The 40-vertex cubic graph: two 20-cycles `a_1..a_20` (indices 0..20)
    /// and `b_1..b_20` (indices 20..40) joined by the doubled matching
    /// `{(a_i, b_j), (b_i, a_j) : (i, j) in F}`.
    pub fn cubic40() -> Self {
        let a = |i: usize| i - 1;
        let b = |i: usize| 19 + i;
        let mut edges = Vec::with_capacity(60);
        for i in 1..=20 {
            edges.push((a(i), a(i % 20 + 1)));
        }
        for i in 1..=20 {
            edges.push((b(i), b(i % 20 + 1)));
        }
        for &(i, j) in CUBIC40_MATCHING.iter() {
            edges.push((a(i), b(j)));
            edges.push((b(i), a(j)));
        }
        Self::from_edges(40, &edges, GraphLabel::Cubic40).expect("hard-coded graph is cubic")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn label(&self) -> GraphLabel {
        self.label
    }

    pub fn torus_shape(&self) -> Option<TorusShape> {
        match self.label {
            GraphLabel::Torus { m, k } => Some(TorusShape { m, k }),
            _ => None,
        }
    }

    #[inline]
    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adjacency[v * self.d..(v + 1) * self.d]
    }

    pub fn edge_count(&self) -> usize {
        self.n * self.d / 2
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = (0..self.n)
            .flat_map(|u| {
                self.neighbours(u)
                    .iter()
                    .filter(move |&&v| u < v)
                    .map(move |&v| (u, v))
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.neighbours(u).contains(&v)
    }

    /// Number of connected components.
    pub fn component_count(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut count = self.n;
        for (u, v) in self.edges() {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru] = rv;
                count -= 1;
            }
        }
        count
    }

    /// BFS 2-colouring; `Some(side)` with `side[v] ∈ {0, 1}` when bipartite.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let mut side = vec![u8::MAX; self.n];
        let mut queue = std::collections::VecDeque::new();
        for start in 0..self.n {
            if side[start] != u8::MAX {
                continue;
            }
            side[start] = 0;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbours(u) {
                    if side[v] == u8::MAX {
                        side[v] = 1 - side[u];
                        queue.push_back(v);
                    } else if side[v] == side[u] {
                        return None;
                    }
                }
            }
        }
        Some(side)
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            n: self.n,
            d: self.d,
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GraphFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.into_graph()
    }
}

/// On-disk graph format: `{"n": int, "d": int, "edges": [[u, v], ...]}`,
/// 0-based vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub d: usize,
    pub edges: Vec<[usize; 2]>,
}

impl GraphFile {
    pub fn into_graph(self) -> Result<Graph> {
        let edges: Vec<_> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        let g = Graph::from_edges(self.n, &edges, GraphLabel::Custom)?;
        if g.d != self.d {
            return Err(Error::InvariantViolation(format!(
                "declared degree {} but edges give degree {}",
                self.d, g.d
            )));
        }
        Ok(g)
    }
}

/// Count of edges with exactly one endpoint in `set`.
pub fn edge_boundary(g: &Graph, set: &[usize]) -> Result<usize> {
    let mut inside = vec![false; g.n()];
    for &v in set {
        if v >= g.n() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: g.n(),
            });
        }
        inside[v] = true;
    }
    Ok(boundary_of_mask(g, &inside))
}

pub(crate) fn boundary_of_mask(g: &Graph, inside: &[bool]) -> usize {
    (0..g.n())
        .filter(|&u| inside[u])
        .map(|u| g.neighbours(u).iter().filter(|&&v| !inside[v]).count())
        .sum()
}

/// The matching pairs `F` of the 40-vertex cubic graph (1-based).
pub const CUBIC40_MATCHING: [(usize, usize); 10] = [
    (1, 5),
    (2, 12),
    (3, 9),
    (4, 18),
    (6, 20),
    (7, 17),
    (8, 14),
    (10, 16),
    (11, 15),
    (13, 19),
];

/// `{a_4, a_8, ..., a_20, b_4, ..., b_20}`, an independent exact 1-cover.
pub fn cubic40_one_cover() -> Vec<usize> {
    [4, 8, 12, 16, 20]
        .iter()
        .flat_map(|&i| [i - 1, 19 + i])
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// `{a_i, b_i : i in 1,3,6,8,11,13,16,18}`, an independent exact 2-cover.
pub fn cubic40_two_cover() -> Vec<usize> {
    [1, 3, 6, 8, 11, 13, 16, 18]
        .iter()
        .flat_map(|&i| [i - 1, 19 + i])
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// The side of the bipartition containing `a_1`; an independent exact 3-cover.
pub fn cubic40_three_cover(g: &Graph) -> Option<Vec<usize>> {
    let side = g.bipartition()?;
    Some((0..g.n()).filter(|&v| side[v] == side[0]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_valid(g: &Graph) {
        for v in 0..g.n() {
            let nb = g.neighbours(v);
            assert_eq!(nb.len(), g.d());
            assert!(!nb.contains(&v));
            let mut s = nb.to_vec();
            s.sort_unstable();
            s.dedup();
            assert_eq!(s.len(), g.d(), "duplicate neighbour at {v}");
            for &u in nb {
                assert!(g.is_adjacent(u, v));
            }
        }
    }

    #[test]
    fn cycles() {
        let c4 = Graph::cycle(4).unwrap();
        assert_valid(&c4);
        assert!((0..4).all(|v| c4.neighbours(v).len() == 2));

        // 1-based vertex 1 is adjacent to 2 and 8.
        let c8 = Graph::cycle(8).unwrap();
        let mut nb = c8.neighbours(0).to_vec();
        nb.sort_unstable();
        assert_eq!(nb, vec![1, 7]);

        let c6 = Graph::cycle(6).unwrap();
        assert_valid(&c6);
        assert_eq!(c6.edges().len(), 6);

        assert!(matches!(Graph::cycle(7), Err(Error::InvalidParameter(_))));
        assert!(matches!(Graph::cycle(2), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn tori() {
        let t = Graph::torus(1, 6).unwrap();
        let c = Graph::cycle(6).unwrap();
        assert_eq!(t.n(), c.n());
        assert_eq!(t.d(), c.d());
        assert_eq!(t.adjacency, c.adjacency);

        let t = Graph::torus(2, 4).unwrap();
        assert_valid(&t);
        assert_eq!((t.n(), t.d()), (16, 4));
        assert_eq!(t.edges().len(), 32);

        let t = Graph::torus(3, 4).unwrap();
        assert_valid(&t);
        assert_eq!((t.n(), t.d()), (64, 6));

        assert!(Graph::torus(2, 2).is_err());
        assert!(Graph::torus(0, 5).is_err());
        assert!(matches!(Graph::torus(30, 4), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn torus_coordinates_roundtrip() {
        let s = TorusShape::new(3, 5).unwrap();
        for i in 0..s.len() {
            assert_eq!(s.encode(&s.decode(i)), i);
        }
        assert_eq!(s.decode(s.shift(0, 2, -1)), vec![0, 0, 4]);
        assert_eq!(s.decode(s.shift(0, 0, 1)), vec![1, 0, 0]);
    }

    #[test]
    fn c4_unions() {
        let g = Graph::c4_union(1).unwrap();
        assert_eq!(g.edges(), Graph::cycle(4).unwrap().edges());
        let g = Graph::c4_union(2).unwrap();
        assert_eq!(g.n(), 8);
        assert_eq!(g.component_count(), 2);
        let g = Graph::c4_union(3).unwrap();
        assert_valid(&g);
        assert_eq!(g.component_count(), 3);
        assert!(Graph::c4_union(0).is_err());
    }

    #[test]
    fn cubic40() {
        let g = Graph::cubic40();
        assert_valid(&g);
        assert_eq!(g.d(), 3);
        assert_eq!(g.edges().len(), 60);
        let mut nb = g.neighbours(0).to_vec();
        nb.sort_unstable();
        // a_1 ~ {a_2, a_20, b_5}
        assert_eq!(nb, vec![1, 19, 24]);
        assert!(g.bipartition().is_some());
        assert_eq!(cubic40_one_cover().len(), 10);
        assert_eq!(cubic40_two_cover().len(), 16);
        assert_eq!(cubic40_three_cover(&g).unwrap().len(), 20);
    }

    #[test]
    fn boundaries() {
        let c8 = Graph::cycle(8).unwrap();
        assert_eq!(edge_boundary(&c8, &[]).unwrap(), 0);
        assert_eq!(edge_boundary(&c8, &[0, 1, 2, 3]).unwrap(), 2);
        assert_eq!(edge_boundary(&c8, &[4, 5, 6, 7]).unwrap(), 2);
        let t = Graph::torus(2, 4).unwrap();
        // one row: first coordinate fixed
        assert_eq!(edge_boundary(&t, &[0, 1, 2, 3]).unwrap(), 8);
        assert!(matches!(
            edge_boundary(&c8, &[8]),
            Err(Error::VertexOutOfRange { vertex: 8, n: 8 })
        ));
    }

    #[test]
    fn json_roundtrip_and_validation() {
        let g = Graph::cubic40();
        let back = Graph::from_json(&g.to_json()).unwrap();
        assert_eq!(back.edges(), g.edges());
        assert!(Graph::from_json(r#"{"n":3,"d":2,"edges":[[0,1],[1,2]]}"#).is_err());
        assert!(Graph::from_json(r#"{"n":2,"d":1,"edges":[[0,0]]}"#).is_err());
        assert!(Graph::from_json(r#"{"n":4,"d":1,"edges":[[0,1],[2,3]]}"#).is_ok());
        assert!(Graph::from_json(r#"{"n":4,"d":2,"edges":[[0,1],[2,3]]}"#).is_err());
    }
}
