//! Balanced red/blue colourings and their degree profiles.

use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

/// A balanced partition `V = R ∪ B` with `|R| = |B| = n/2`.
#[derive(Clone, PartialEq, Eq)]
pub struct Colouring {
    graph: Arc<Graph>,
    red: Vec<bool>,
}

impl fmt::Debug for Colouring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Colouring")
            .field("graph", &self.graph.label())
            .field("colours", &self.to_rb_string())
            .finish()
    }
}

impl Colouring {
    pub fn new(graph: Arc<Graph>, red: Vec<bool>) -> Result<Self> {
        if red.len() != graph.n() {
            return invalid(format!(
                "colouring has {} entries but the graph has {} vertices",
                red.len(),
                graph.n()
            ));
        }
        let count = red.iter().filter(|&&r| r).count();
        if !graph.n().is_multiple_of(2) || 2 * count != graph.n() {
            return Err(Error::Unbalanced {
                red: count,
                n: graph.n(),
            });
        }
        Ok(Self { graph, red })
    }

    pub fn from_red_set(graph: Arc<Graph>, red_set: &[usize]) -> Result<Self> {
        let n = graph.n();
        let mut red = vec![false; n];
        for &v in red_set {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            red[v] = true;
        }
        Self::new(graph, red)
    }

    /// Parses a string of `R`/`B` characters, one per vertex.
    pub fn parse(graph: Arc<Graph>, text: &str) -> Result<Self> {
        let text = text.trim();
        let red = text
            .chars()
            .map(|c| match c {
                'R' => Ok(true),
                'B' => Ok(false),
                other => Err(Error::Parse(format!(
                    "unexpected colour character {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        if red.len() != graph.n() {
            return Err(Error::Parse(format!(
                "colouring string has length {} but the graph has {} vertices",
                red.len(),
                graph.n()
            )));
        }
        Self::new(graph, red)
    }

    pub fn to_rb_string(&self) -> String {
        self.red
            .iter()
            .map(|&r| if r { 'R' } else { 'B' })
            .collect()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn red_mask(&self) -> &[bool] {
        &self.red
    }

    #[inline]
    pub fn is_red(&self, v: usize) -> bool {
        self.red[v]
    }

    pub fn red_vertices(&self) -> Vec<usize> {
        (0..self.red.len()).filter(|&v| self.red[v]).collect()
    }

    pub fn blue_vertices(&self) -> Vec<usize> {
        (0..self.red.len()).filter(|&v| !self.red[v]).collect()
    }

    /// Colour classes exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            graph: Arc::clone(&self.graph),
            red: self.red.iter().map(|&r| !r).collect(),
        }
    }

    /// Number of neighbours of `v` sharing its colour.
    #[inline]
    pub fn same_colour_degree(&self, v: usize) -> usize {
        let c = self.red[v];
        self.graph
            .neighbours(v)
            .iter()
            .filter(|&&u| self.red[u] == c)
            .count()
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        DegreeProfile::of_mask(&self.graph, &self.red)
    }
}

/// `red[i] = |R_i|`, `blue[i] = |B_i|` and the internal degree sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeProfile {
    pub red: Vec<u64>,
    pub blue: Vec<u64>,
    pub internal_red: u64,
    pub internal_blue: u64,
}

impl DegreeProfile {
    pub(crate) fn of_mask(g: &Graph, red: &[bool]) -> Self {
        let d = g.d();
        let mut r = vec![0u64; d + 1];
        let mut b = vec![0u64; d + 1];
        for v in 0..g.n() {
            let c = red[v];
            let same = g.neighbours(v).iter().filter(|&&u| red[u] == c).count();
            if c {
                r[same] += 1;
            } else {
                b[same] += 1;
            }
        }
        let weighted = |xs: &[u64]| xs.iter().enumerate().map(|(i, &x)| i as u64 * x).sum();
        Self {
            internal_red: weighted(&r),
            internal_blue: weighted(&b),
            red: r,
            blue: b,
        }
    }

    /// `Σ i² r_i` (number of 2-step walks inside the red class).
    pub fn red_square_sum(&self) -> u64 {
        square_sum(&self.red)
    }

    pub fn blue_square_sum(&self) -> u64 {
        square_sum(&self.blue)
    }

    /// Checks the counting identities every balanced profile satisfies.
    pub fn check(&self, g: &Graph) -> Result<()> {
        let half = (g.n() / 2) as u64;
        let rs: u64 = self.red.iter().sum();
        let bs: u64 = self.blue.iter().sum();
        if rs != half || bs != half {
            return Err(Error::InvariantViolation(format!(
                "class sizes {rs}/{bs}, expected {half}"
            )));
        }
        if self.internal_red != self.internal_blue {
            return Err(Error::InvariantViolation(format!(
                "I(R) = {} differs from I(B) = {}",
                self.internal_red, self.internal_blue
            )));
        }
        Ok(())
    }
}

fn square_sum(xs: &[u64]) -> u64 {
    xs.iter()
        .enumerate()
        .map(|(i, &x)| (i * i) as u64 * x)
        .sum()
}

/// Degree profile of a balanced colouring.
pub fn degree_profile(c: &Colouring) -> DegreeProfile {
    c.degree_profile()
}
