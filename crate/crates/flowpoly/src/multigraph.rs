//! Loopless directed multigraphs on `[n+1]` with edges oriented from smaller
//! to larger vertex, and the graph surgeries used throughout the crate:
//! restriction, transitive closure, sink structure, the sink-edge extension,
//! sink-parallel-edge simplification, the vertex flip, and the appended-web
//! construction consumed by the volume pipeline.
//!
//! Vertices are 1-based. A graph satisfying the *unique-sink convention* has
//! outdegree 0 at vertex `n+1` and outdegree >= 1 everywhere else. Plain
//! forward multigraphs (for example flips and restrictions) are also
//! representable; operations that require the convention check it and fail
//! otherwise.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::{Error, Result};

/// 1-based vertex index.
pub type Vertex = usize;

/// Stable identifier of a single edge: the `index`-th parallel edge from
/// `tail` to `head`, counted in insertion order starting at 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct EdgeId {
    pub tail: Vertex,
    pub head: Vertex,
    pub index: usize,
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{})", self.tail, self.head, self.index)
    }
}

/// A loopless directed multigraph with all edges oriented small -> large.
/// Immutable after construction; edge positions and ids are stable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Multigraph {
    vertex_count: usize,
    edges: Vec<(Vertex, Vertex)>,
    edge_ids: Vec<EdgeId>,
    unique_sink: bool,
}

impl Multigraph {
    /// Builds a graph from `(tail, head)` pairs. Requires `1 <= tail < head
    /// <= vertex_count` for every edge; parallel edges are given stable ids
    /// in insertion order. The unique-sink convention is recorded, not
    /// required.
    pub fn new(vertex_count: usize, edges: Vec<(Vertex, Vertex)>) -> Result<Self> {
        let mut multiplicity: BTreeMap<(Vertex, Vertex), usize> = BTreeMap::new();
        let mut edge_ids = Vec::with_capacity(edges.len());
        for &(tail, head) in &edges {
            if tail < 1 || head > vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "edge ({tail},{head}) out of range for {vertex_count} vertices"
                )));
            }
            if tail >= head {
                return Err(Error::InvalidGraph(format!(
                    "edge ({tail},{head}) is not oriented small to large"
                )));
            }
            let k = multiplicity.entry((tail, head)).or_insert(0);
            *k += 1;
            edge_ids.push(EdgeId {
                tail,
                head,
                index: *k,
            });
        }

        let mut outdeg = vec![0usize; vertex_count + 1];
        for &(tail, _) in &edges {
            outdeg[tail] += 1;
        }
        let unique_sink = vertex_count >= 1
            && outdeg[vertex_count] == 0
            && (1..vertex_count).all(|v| outdeg[v] >= 1);

        Ok(Multigraph {
            vertex_count,
            edges,
            edge_ids,
            unique_sink,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// The sink vertex `n+1` under the unique-sink convention.
    pub fn sink(&self) -> Vertex {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn edge_ids(&self) -> &[EdgeId] {
        &self.edge_ids
    }

    /// Position of an edge id in the edge list, if present.
    pub fn edge_position(&self, id: &EdgeId) -> Option<usize> {
        self.edge_ids.iter().position(|e| e == id)
    }

    /// Number of parallel edges from `i` to `j`.
    pub fn multiplicity(&self, i: Vertex, j: Vertex) -> usize {
        self.edges.iter().filter(|&&(t, h)| t == i && h == j).count()
    }

    pub fn outdegree(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|&&(t, _)| t == v).count()
    }

    pub fn has_unique_sink(&self) -> bool {
        self.unique_sink
    }

    pub fn require_unique_sink(&self) -> Result<()> {
        if self.unique_sink {
            Ok(())
        } else {
            Err(Error::NoUniqueSink(format!(
                "graph on {} vertices with edges {:?}",
                self.vertex_count, self.edges
            )))
        }
    }

    /// Incidence matrix of shape `vertex_count x edge_count`; the column for
    /// an edge `(i,j)` is `e_i - e_j`.
    pub fn incidence_matrix(&self) -> Vec<Vec<i64>> {
        let mut matrix = vec![vec![0i64; self.edges.len()]; self.vertex_count];
        for (pos, &(tail, head)) in self.edges.iter().enumerate() {
            matrix[tail - 1][pos] = 1;
            matrix[head - 1][pos] = -1;
        }
        matrix
    }

    /// All pairs `(i,j)` joined by a directed path of length >= 1.
    pub fn transitive_closure(&self) -> BTreeSet<(Vertex, Vertex)> {
        // Forward edges only, so vertices in decreasing order see complete
        // reachability of their successors.
        let mut reach: Vec<BTreeSet<Vertex>> = vec![BTreeSet::new(); self.vertex_count + 1];
        for v in (1..=self.vertex_count).rev() {
            let mut set = BTreeSet::new();
            for &(tail, head) in &self.edges {
                if tail == v {
                    set.insert(head);
                    set.extend(reach[head].iter().copied());
                }
            }
            reach[v] = set;
        }
        let mut closure = BTreeSet::new();
        for (v, set) in reach.iter().enumerate().skip(1) {
            for &w in set {
                closure.insert((v, w));
            }
        }
        closure
    }

    /// The restriction to `[n]`: drops the last vertex and all edges into it.
    pub fn restriction(&self) -> Multigraph {
        assert!(self.vertex_count >= 1, "cannot restrict the empty graph");
        let edges: Vec<(Vertex, Vertex)> = self
            .edges
            .iter()
            .copied()
            .filter(|&(_, head)| head < self.vertex_count)
            .collect();
        Multigraph::new(self.vertex_count - 1, edges)
            .expect("restriction of a valid graph is valid")
    }

    /// Relabels vertices by `v -> m+1-v` and reverses edge orientation, which
    /// keeps every edge oriented small -> large. Reversing the edge list as
    /// well makes this an involution on the representation, edge ids
    /// included.
    pub fn flip(&self) -> Multigraph {
        let m = self.vertex_count;
        let edges: Vec<(Vertex, Vertex)> = self
            .edges
            .iter()
            .rev()
            .map(|&(tail, head)| (m + 1 - head, m + 1 - tail))
            .collect();
        Multigraph::new(m, edges).expect("flip of a valid graph is valid")
    }

    /// The flipped restriction: restrict to `[n]`, then flip. The result is a
    /// plain forward multigraph (the unique-sink convention may fail) used
    /// only as a Kostant-function argument.
    pub fn flip_restriction(&self) -> Multigraph {
        self.restriction().flip()
    }

    /// Sink structure of a unique-sink graph: the sink edges `S_G` ordered by
    /// `(tail, index)`, the sink-adjacent vertices `T_G`, and their
    /// reachable-from-`i` refinements.
    pub fn sink_structure(&self) -> Result<SinkStructure> {
        self.require_unique_sink()?;
        let sink = self.sink();
        let n = self.vertex_count - 1;

        let mut s_g: Vec<(EdgeId, usize)> = self
            .edge_ids
            .iter()
            .enumerate()
            .filter(|(_, id)| id.head == sink)
            .map(|(pos, id)| (*id, pos))
            .collect();
        s_g.sort_unstable_by_key(|(id, _)| (id.tail, id.index));
        let s_g_positions: Vec<usize> = s_g.iter().map(|&(_, pos)| pos).collect();
        let s_g: Vec<EdgeId> = s_g.into_iter().map(|(id, _)| id).collect();

        let t_g: Vec<Vertex> = s_g
            .iter()
            .map(|id| id.tail)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();

        let mut i_sets: BTreeMap<Vertex, Vec<EdgeId>> = BTreeMap::new();
        for id in &s_g {
            i_sets.entry(id.tail).or_default().push(*id);
        }

        let closure = self.transitive_closure();
        let mut t_g_i = BTreeMap::new();
        let mut s_g_i = BTreeMap::new();
        for i in 1..=n {
            // A path leaving the graph at i itself counts, so T_{G,i}
            // includes i whenever i is sink-adjacent.
            let reachable: Vec<Vertex> = t_g
                .iter()
                .copied()
                .filter(|&j| j == i || closure.contains(&(i, j)))
                .collect();
            let edges: Vec<EdgeId> = reachable
                .iter()
                .flat_map(|j| i_sets[j].iter().copied())
                .collect();
            t_g_i.insert(i, reachable);
            s_g_i.insert(i, edges);
        }

        Ok(SinkStructure {
            n,
            s_g,
            s_g_positions,
            t_g,
            i_sets,
            t_g_i,
            s_g_i,
        })
    }

    /// Collapses, for each vertex, all parallel edges into the sink down to a
    /// single edge. Idempotent; other edges and their order are untouched.
    pub fn simplify_at_sink(&self) -> Result<Multigraph> {
        self.require_unique_sink()?;
        let sink = self.sink();
        let edges: Vec<(Vertex, Vertex)> = self
            .edge_ids
            .iter()
            .filter(|id| id.head != sink || id.index == 1)
            .map(|id| (id.tail, id.head))
            .collect();
        Multigraph::new(self.vertex_count, edges)
    }

    /// The sink-edge extension: one new vertex per sink-adjacent vertex `i`,
    /// inserted between `n` and the sink in increasing order of `i`; each
    /// sink edge `(i, n+1; k)` is rerouted through the new vertex, which gets
    /// a single edge to the sink.
    pub fn extension(&self) -> Result<Extension> {
        let sinkinfo = self.sink_structure()?;
        let n = sinkinfo.n;
        let old_sink = self.sink();

        let mut ex_vertex: BTreeMap<Vertex, Vertex> = BTreeMap::new();
        for (rank, &i) in sinkinfo.t_g.iter().enumerate() {
            ex_vertex.insert(i, n + 1 + rank);
        }
        let new_sink = n + sinkinfo.t_g.len() + 1;

        let mut edges: Vec<(Vertex, Vertex)> = Vec::with_capacity(self.edge_count() + ex_vertex.len());
        for id in &self.edge_ids {
            if id.head == old_sink {
                edges.push((id.tail, ex_vertex[&id.tail]));
            } else {
                edges.push((id.tail, id.head));
            }
        }
        for &i in &sinkinfo.t_g {
            edges.push((ex_vertex[&i], new_sink));
        }

        let graph = Multigraph::new(new_sink, edges)?;
        Ok(Extension { graph, ex_vertex })
    }

    /// The graph used in the volume pipeline: the flipped restriction plus
    /// `-min(z)` appended vertices, with every forward edge into each
    /// appended vertex. `z` must have one entry per non-sink vertex and sum
    /// to -2.
    pub fn proof_graph(&self, z: &[i64]) -> Result<ProofGraph> {
        self.require_unique_sink()?;
        let n = self.vertex_count - 1;
        if z.len() != n {
            return Err(Error::NetflowLength {
                expected: n,
                found: z.len(),
            });
        }
        if z.iter().sum::<i64>() != -2 {
            return Err(Error::Precondition(format!(
                "z must sum to -2, got {:?}",
                z
            )));
        }
        let z_min = *z.iter().min().expect("z is nonempty");
        debug_assert!(z_min < 0);

        let big_n = n + (-z_min) as usize;
        let flipped = self.flip_restriction();
        let mut edges = flipped.edges().to_vec();
        for j in (n + 1)..=(big_n + 1) {
            for i in 1..j {
                edges.push((i, j));
            }
        }
        let graph = Multigraph::new(big_n + 1, edges)?;
        graph.require_unique_sink()?;

        let mut z_tilde = z.to_vec();
        z_tilde.resize(big_n, 0);
        let out_tilde: Vec<i64> = (1..=big_n)
            .map(|v| graph.outdegree(v) as i64 - 1)
            .collect();
        debug_assert!(z_tilde
            .iter()
            .zip(&out_tilde)
            .all(|(z, o)| z + o >= 0));

        Ok(ProofGraph {
            graph,
            big_n,
            z_tilde,
            out_tilde,
        })
    }

    /// Serializes to the line-oriented graph format: vertex count, then one
    /// `tail head` line per edge in id order.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.vertex_count);
        for &(tail, head) in &self.edges {
            out.push_str(&format!("{tail} {head}\n"));
        }
        out
    }

    /// Parses the graph format: first significant line is the vertex count;
    /// each following line holds one `tail head` edge. Blank lines and `#`
    /// comments are skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter_map(|line| {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                None
            } else {
                Some(line)
            }
        });
        let vertex_count: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("missing vertex count".into()))?
            .parse()
            .map_err(|_| Error::Parse("bad vertex count".into()))?;
        let mut edges = Vec::new();
        for line in lines {
            let mut fields = line.split_whitespace();
            let tail: Vertex = fields
                .next()
                .and_then(|f| f.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad edge line: {line}")))?;
            let head: Vertex = fields
                .next()
                .and_then(|f| f.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad edge line: {line}")))?;
            if fields.next().is_some() {
                return Err(Error::Parse(format!("trailing fields on edge line: {line}")));
            }
            edges.push((tail, head));
        }
        Multigraph::new(vertex_count, edges)
    }
}

/// The sink-incidence data of a unique-sink graph on `[n+1]`.
#[derive(Clone, Debug)]
pub struct SinkStructure {
    n: usize,
    s_g: Vec<EdgeId>,
    s_g_positions: Vec<usize>,
    t_g: Vec<Vertex>,
    i_sets: BTreeMap<Vertex, Vec<EdgeId>>,
    t_g_i: BTreeMap<Vertex, Vec<Vertex>>,
    s_g_i: BTreeMap<Vertex, Vec<EdgeId>>,
}

impl SinkStructure {
    /// Number of non-sink vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges into the sink, ordered by `(tail, index)`.
    pub fn s_g(&self) -> &[EdgeId] {
        &self.s_g
    }

    /// For each edge of `S_G` (in `s_g` order) its position in the owning
    /// graph's edge list.
    pub fn s_g_positions(&self) -> &[usize] {
        &self.s_g_positions
    }

    /// Vertices adjacent to the sink, sorted.
    pub fn t_g(&self) -> &[Vertex] {
        &self.t_g
    }

    /// The set `I_i` of sink edges with tail `i` (empty when `i` is not
    /// sink-adjacent).
    pub fn i_set(&self, i: Vertex) -> &[EdgeId] {
        self.i_sets.get(&i).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Sink edges reachable from `i`, including `i`'s own sink edges.
    pub fn s_g_i(&self, i: Vertex) -> &[EdgeId] {
        self.s_g_i.get(&i).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Sink-adjacent vertices reachable from `i`, including `i` itself when
    /// sink-adjacent.
    pub fn t_g_i(&self, i: Vertex) -> &[Vertex] {
        self.t_g_i.get(&i).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Result of [`Multigraph::extension`]: the extended graph together with the
/// map from each sink-adjacent vertex `i` to its new vertex. The bijection
/// between `T_G` and the new graph's sink edges sends `i` to the unique sink
/// edge with tail `ex_vertex[i]`.
#[derive(Clone, Debug)]
pub struct Extension {
    pub graph: Multigraph,
    pub ex_vertex: BTreeMap<Vertex, Vertex>,
}

/// Result of [`Multigraph::proof_graph`]: the appended-web graph on
/// `[big_n + 1]`, the padded vector `z_tilde`, and the shifted outdegree
/// vector `out_tilde` (both of length `big_n`).
#[derive(Clone, Debug)]
pub struct ProofGraph {
    pub graph: Multigraph,
    pub big_n: usize,
    pub z_tilde: Vec<i64>,
    pub out_tilde: Vec<i64>,
}
