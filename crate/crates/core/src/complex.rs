//! Edges, triangles, graphs and 2-complexes on the vertex set {1, …, n},
//! together with the signed boundary matrix between them.
//!
//! Conventions used throughout the crate:
//!
//! * vertices are 1-based;
//! * an edge is written {a, b} with a < b, a triangle {x0, x1, x2} with
//!   x0 < x1 < x2;
//! * every complex has the complete 1-skeleton implicitly, so a `Complex2`
//!   stores only its triangle set;
//! * rows and columns of boundary matrices are ordered lexicographically by
//!   vertex tuple, and `edge_index` / `triangle_index` are the ranks in that
//!   order;
//! * the column of a triangle {x0, x1, x2} has entry (−1)^i in the row of the
//!   edge obtained by deleting x_i, i.e. +1 at {x1,x2}, −1 at {x0,x2},
//!   +1 at {x0,x1}.
//!
//! n < 3 is rejected by every constructor that needs triangles to exist.

use crate::binomial;
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// Smallest vertex count for which 2-complexes make sense.
pub const MIN_VERTICES: u32 = 3;

// ---------------------------------------------------------------------------
// Edges and triangles
// ---------------------------------------------------------------------------

/// An undirected edge {a, b} with 1 <= a < b.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Edge {
    a: u32,
    b: u32,
}

impl Edge {
    /// Builds the edge {a, b}; the endpoints may be given in either order.
    pub fn new(a: u32, b: u32) -> Result<Edge> {
        if a == 0 || b == 0 {
            return Err(Error::bad_argument("vertices are 1-based"));
        }
        if a == b {
            return Err(Error::bad_argument(format!("degenerate edge {{{a},{b}}}")));
        }
        Ok(Edge { a: a.min(b), b: a.max(b) })
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn max_vertex(&self) -> u32 {
        self.b
    }
}

impl std::fmt::Display for Edge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{},{}}}", self.a, self.b)
    }
}

/// A triangle {x0, x1, x2} with 1 <= x0 < x1 < x2.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Triangle {
    v: [u32; 3],
}

impl Triangle {
    /// Builds the triangle on three distinct vertices, in any order.
    pub fn new(a: u32, b: u32, c: u32) -> Result<Triangle> {
        if a == 0 || b == 0 || c == 0 {
            return Err(Error::bad_argument("vertices are 1-based"));
        }
        let mut v = [a, b, c];
        v.sort_unstable();
        if v[0] == v[1] || v[1] == v[2] {
            return Err(Error::bad_argument(format!(
                "degenerate triangle {{{a},{b},{c}}}"
            )));
        }
        Ok(Triangle { v })
    }

    pub fn vertices(&self) -> [u32; 3] {
        self.v
    }

    pub fn max_vertex(&self) -> u32 {
        self.v[2]
    }

    /// The three boundary edges, ordered by which vertex is dropped:
    /// [{x1,x2}, {x0,x2}, {x0,x1}], carrying signs +1, −1, +1.
    pub fn boundary_edges(&self) -> [(Edge, i64); 3] {
        let [x0, x1, x2] = self.v;
        [
            (Edge { a: x1, b: x2 }, 1),
            (Edge { a: x0, b: x2 }, -1),
            (Edge { a: x0, b: x1 }, 1),
        ]
    }

    /// The three edges of the triangle, unsigned.
    pub fn edges(&self) -> [Edge; 3] {
        let [x0, x1, x2] = self.v;
        [
            Edge { a: x0, b: x1 },
            Edge { a: x0, b: x2 },
            Edge { a: x1, b: x2 },
        ]
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        let [x0, x1, x2] = self.v;
        (e.a == x0 || e.a == x1) && (e.b == x1 || e.b == x2) && e.a < e.b
    }
}

impl std::fmt::Display for Triangle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{},{},{}}}", self.v[0], self.v[1], self.v[2])
    }
}

// ---------------------------------------------------------------------------
// Lexicographic indexing
// ---------------------------------------------------------------------------

/// Number of edges of the complete graph on n vertices.
pub fn edge_count(n: u32) -> usize {
    binomial(n as u64, 2)
}

/// Number of triangles on n vertices.
pub fn triangle_count(n: u32) -> usize {
    binomial(n as u64, 3)
}

/// Rank of `e` among all edges on [n] in lexicographic order.
///
/// Panics if `e` does not fit on [n]; edge validity is established at
/// construction time, the vertex range is the caller's responsibility.
pub fn edge_index(n: u32, e: Edge) -> usize {
    assert!(e.b <= n, "edge {e} does not fit on [{n}]");
    let (n, a, b) = (n as usize, e.a as usize, e.b as usize);
    (a - 1) * n - a * (a - 1) / 2 + (b - a - 1)
}

/// Inverse of [`edge_index`].
pub fn edge_at(n: u32, mut idx: usize) -> Edge {
    assert!(idx < edge_count(n), "edge index {idx} out of range for [{n}]");
    let mut a = 1u32;
    loop {
        let fan = (n - a) as usize;
        if idx < fan {
            return Edge { a, b: a + 1 + idx as u32 };
        }
        idx -= fan;
        a += 1;
    }
}

/// Rank of `t` among all triangles on [n] in lexicographic order.
pub fn triangle_index(n: u32, t: Triangle) -> usize {
    assert!(t.v[2] <= n, "triangle {t} does not fit on [{n}]");
    let [x0, x1, x2] = t.v;
    let mut idx = 0usize;
    for i in 1..x0 {
        idx += binomial((n - i) as u64, 2);
    }
    // Rank of {x1, x2} among pairs drawn from {x0+1, …, n}.
    let m = n - x0;
    idx + edge_index(m, Edge { a: x1 - x0, b: x2 - x0 })
}

/// All edges on [n] in lexicographic order.
pub fn all_edges(n: u32) -> Vec<Edge> {
    let mut out = Vec::with_capacity(edge_count(n));
    for a in 1..=n {
        for b in a + 1..=n {
            out.push(Edge { a, b });
        }
    }
    out
}

/// All triangles on [n] in lexicographic order.
pub fn all_triangles(n: u32) -> Vec<Triangle> {
    let mut out = Vec::with_capacity(triangle_count(n));
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                out.push(Triangle { v: [a, b, c] });
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Graphs
// ---------------------------------------------------------------------------

/// A simple graph on the vertex set [n], stored as a sorted edge list.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Graph {
    n: u32,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph from an edge list; rejects duplicates and edges not
    /// fitting on [n].
    pub fn new(n: u32, mut edges: Vec<Edge>) -> Result<Graph> {
        if n == 0 {
            return Err(Error::bad_argument("empty vertex set"));
        }
        edges.sort_unstable();
        for w in edges.windows(2) {
            if w[0] == w[1] {
                return Err(Error::bad_argument(format!("duplicate edge {}", w[0])));
            }
        }
        if let Some(e) = edges.last() {
            if e.max_vertex() > n {
                return Err(Error::IndexOutOfRange(format!(
                    "edge {e} does not fit on [{n}]"
                )));
            }
        }
        Ok(Graph { n, edges })
    }

    pub fn empty(n: u32) -> Graph {
        Graph { n, edges: Vec::new() }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Dense adjacency matrix, row-major n x n, 0-based.
    pub fn adjacency(&self) -> Vec<bool> {
        let n = self.n as usize;
        let mut adj = vec![false; n * n];
        for e in &self.edges {
            let (a, b) = (e.a as usize - 1, e.b as usize - 1);
            adj[a * n + b] = true;
            adj[b * n + a] = true;
        }
        adj
    }
}

/// The cut determined by a vertex subset: all edges with exactly one endpoint
/// in `side`.
pub fn cut_edges(n: u32, side: &[u32]) -> Result<Graph> {
    let mut in_side = vec![false; n as usize + 1];
    for &v in side {
        if v == 0 || v > n {
            return Err(Error::IndexOutOfRange(format!("vertex {v} not in [{n}]")));
        }
        in_side[v as usize] = true;
    }
    let edges = all_edges(n)
        .into_iter()
        .filter(|e| in_side[e.a as usize] != in_side[e.b as usize])
        .collect();
    Graph::new(n, edges)
}

// ---------------------------------------------------------------------------
// Complexes
// ---------------------------------------------------------------------------

/// A 2-dimensional complex on [n] with complete 1-skeleton: only the triangle
/// set is stored, sorted lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Complex2 {
    n: u32,
    triangles: Vec<Triangle>,
}

impl Complex2 {
    /// Builds a complex from a triangle list; rejects n < 3, out-of-range
    /// vertices, and duplicate triangles.
    pub fn new(n: u32, mut triangles: Vec<Triangle>) -> Result<Complex2> {
        if n < MIN_VERTICES {
            return Err(Error::InvalidDimension { n, min: MIN_VERTICES });
        }
        triangles.sort_unstable();
        for w in triangles.windows(2) {
            if w[0] == w[1] {
                return Err(Error::bad_argument(format!("duplicate triangle {}", w[0])));
            }
        }
        if let Some(t) = triangles.last() {
            if t.max_vertex() > n {
                return Err(Error::IndexOutOfRange(format!(
                    "triangle {t} does not fit on [{n}]"
                )));
            }
        }
        Ok(Complex2 { n, triangles })
    }

    /// Like [`Complex2::new`] but deduplicates instead of rejecting repeats
    /// (samplers may draw the same triangle through different edges).
    pub fn new_dedup(n: u32, mut triangles: Vec<Triangle>) -> Result<Complex2> {
        triangles.sort_unstable();
        triangles.dedup();
        Complex2::new(n, triangles)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn contains(&self, t: Triangle) -> bool {
        self.triangles.binary_search(&t).is_ok()
    }

    /// Dimension of the cycle space of the complete graph on [n]; a complex
    /// is a hypertree candidate exactly when it has this many triangles.
    pub fn cycle_space_dim(&self) -> usize {
        edge_count(self.n) - (self.n as usize - 1)
    }
}

// ---------------------------------------------------------------------------
// Signed boundary matrix
// ---------------------------------------------------------------------------

/// The signed boundary matrix from triangles to edges on [n]: rows are the
/// C(n,2) edges, columns the C(n,3) triangles, both lexicographic; entries
/// follow the (−1)^i deleted-vertex rule. The matrix is defined by n alone
/// and materialized only on demand.
#[derive(Clone, Copy, Debug)]
pub struct SignedBoundaryMatrix {
    n: u32,
}

impl SignedBoundaryMatrix {
    pub fn new(n: u32) -> Result<SignedBoundaryMatrix> {
        if n < MIN_VERTICES {
            return Err(Error::InvalidDimension { n, min: MIN_VERTICES });
        }
        Ok(SignedBoundaryMatrix { n })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn rows(&self) -> usize {
        edge_count(self.n)
    }

    pub fn cols(&self) -> usize {
        triangle_count(self.n)
    }

    /// Entry in the row of `e` and column of `t`.
    pub fn entry(&self, e: Edge, t: Triangle) -> i64 {
        for (be, sign) in t.boundary_edges() {
            if be == e {
                return sign;
            }
        }
        0
    }

    /// Dense submatrix on the given edge rows and triangle columns, in the
    /// order given. Labels must fit on [n] and repeat-free row/column labels
    /// are required.
    pub fn submatrix(&self, rows: &[Edge], cols: &[Triangle]) -> Result<IntMatrix> {
        let data = self.submatrix_i64(rows, cols)?;
        Ok(IntMatrix::from_i64(rows.len(), cols.len(), &data))
    }

    /// Same as [`SignedBoundaryMatrix::submatrix`] but as a flat i64 buffer
    /// (row-major), for callers that stay in machine integers.
    pub fn submatrix_i64(&self, rows: &[Edge], cols: &[Triangle]) -> Result<Vec<i64>> {
        let n = self.n;
        for e in rows {
            if e.max_vertex() > n {
                return Err(Error::IndexOutOfRange(format!(
                    "edge {e} does not fit on [{n}]"
                )));
            }
        }
        for t in cols {
            if t.max_vertex() > n {
                return Err(Error::IndexOutOfRange(format!(
                    "triangle {t} does not fit on [{n}]"
                )));
            }
        }
        check_distinct(rows, "row")?;
        check_distinct(cols, "column")?;

        let mut row_of: Vec<Option<usize>> = vec![None; edge_count(n)];
        for (i, e) in rows.iter().enumerate() {
            row_of[edge_index(n, *e)] = Some(i);
        }
        let mut data = vec![0i64; rows.len() * cols.len()];
        for (j, t) in cols.iter().enumerate() {
            for (e, sign) in t.boundary_edges() {
                if let Some(i) = row_of[edge_index(n, e)] {
                    data[i * cols.len() + j] = sign;
                }
            }
        }
        Ok(data)
    }

    /// The full dense matrix; intended for small n.
    pub fn dense(&self) -> IntMatrix {
        self.submatrix(&all_edges(self.n), &all_triangles(self.n))
            .expect("full label sets are always valid")
    }
}

fn check_distinct<T: Ord + Copy + std::fmt::Display>(labels: &[T], kind: &str) -> Result<()> {
    let mut sorted = labels.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::bad_argument(format!("repeated {kind} label {}", w[0])));
        }
    }
    Ok(())
}

/// The signed boundary matrix on [n]; n >= 3 required.
pub fn full_boundary(n: u32) -> Result<SignedBoundaryMatrix> {
    SignedBoundaryMatrix::new(n)
}

/// Submatrix of the signed boundary matrix on explicit row/column labels.
pub fn boundary_submatrix(
    m: &SignedBoundaryMatrix,
    rows: &[Edge],
    cols: &[Triangle],
) -> Result<IntMatrix> {
    m.submatrix(rows, cols)
}

// ---------------------------------------------------------------------------
// Coboundaries, t-counts, star trees
// ---------------------------------------------------------------------------

/// The mod-2 coboundary of a graph on [n]: all triangles containing an odd
/// number of its edges, in lexicographic order. Requires n >= 3.
pub fn graph_coboundary(g: &Graph) -> Result<Vec<Triangle>> {
    let n = g.n();
    if n < MIN_VERTICES {
        return Err(Error::InvalidDimension { n, min: MIN_VERTICES });
    }
    let adj = g.adjacency();
    let nn = n as usize;
    let at = |a: u32, b: u32| adj[(a as usize - 1) * nn + (b as usize - 1)];
    let mut out = Vec::new();
    for t in all_triangles(n) {
        let [x0, x1, x2] = t.vertices();
        let c = at(x0, x1) as u8 + at(x0, x2) as u8 + at(x1, x2) as u8;
        if c % 2 == 1 {
            out.push(t);
        }
    }
    Ok(out)
}

/// For every edge of the complete graph on [n], the number of triangles of
/// the complex containing it (possibly zero). Indexed by [`edge_index`].
pub fn t_counts(k: &Complex2) -> Vec<usize> {
    let n = k.n();
    let mut counts = vec![0usize; edge_count(n)];
    for t in k.triangles() {
        for e in t.edges() {
            counts[edge_index(n, e)] += 1;
        }
    }
    counts
}

/// The star spanning tree {{1, v} : 2 <= v <= n}. Requires n >= 2.
pub fn star_tree(n: u32) -> Result<Vec<Edge>> {
    if n < 2 {
        return Err(Error::InvalidDimension { n, min: 2 });
    }
    Ok((2..=n).map(|v| Edge { a: 1, b: v }).collect())
}

/// Complement of the star tree: all edges within {2, …, n}, lexicographic.
/// These are the C(n−1, 2) rows used by every determinant identity here.
pub fn star_tree_complement(n: u32) -> Vec<Edge> {
    let mut out = Vec::with_capacity(binomial(n as u64 - 1, 2));
    for a in 2..=n {
        for b in a + 1..=n {
            out.push(Edge { a, b });
        }
    }
    out
}
