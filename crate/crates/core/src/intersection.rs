//! Intersection graphs and their induced-subgraph views.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::vertex_set::VertexSet;

#[derive(Debug)]
struct Structure {
    /// Neighbors of each vertex in the base graph, as bitsets.
    adj: Vec<VertexSet>,
}

/// A simple undirected graph together with an active-vertex mask.
///
/// Cloning is cheap: the adjacency structure is shared, only the mask is
/// copied. Every query sees just the subgraph induced by the active vertices.
#[derive(Debug, Clone)]
pub struct IGraph {
    base: Arc<Structure>,
    active: VertexSet,
}

impl PartialEq for IGraph {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.base, &other.base) || self.base.adj == other.base.adj)
            && self.active == other.active
    }
}

impl IGraph {
    /// Graph on `0..n` with the given undirected edges. Loops and repeated
    /// edges are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![VertexSet::empty(n); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::Precondition(format!("edge ({a},{b}) out of range")));
            }
            if a == b {
                return Err(Error::Precondition(format!("loop at {a}")));
            }
            if adj[a].contains(b) {
                return Err(Error::Precondition(format!("repeated edge ({a},{b})")));
            }
            adj[a].insert(b);
            adj[b].insert(a);
        }
        Ok(IGraph {
            base: Arc::new(Structure { adj }),
            active: VertexSet::full(n),
        })
    }

    /// The intersection graph L(H): one vertex per hyperedge (indexed by
    /// [`EdgeId`](crate::EdgeId)), adjacent iff the triples share a vertex.
    pub fn line_graph(h: &Hypergraph) -> Self {
        let m = h.num_edges();
        let mut adj = vec![VertexSet::empty(m); m];
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); h.num_vertices()];
        for (i, e) in h.edges().iter().enumerate() {
            for &v in e {
                incident[v].push(i);
            }
        }
        for edges in &incident {
            for (k, &a) in edges.iter().enumerate() {
                for &b in &edges[k + 1..] {
                    adj[a].insert(b);
                    adj[b].insert(a);
                }
            }
        }
        IGraph {
            base: Arc::new(Structure { adj }),
            active: VertexSet::full(m),
        }
    }

    /// Number of vertices of the underlying (unmasked) graph.
    pub fn capacity(&self) -> usize {
        self.base.adj.len()
    }

    pub fn active(&self) -> &VertexSet {
        &self.active
    }

    pub fn num_vertices(&self) -> usize {
        self.active.len()
    }

    pub fn is_empty(&self) -> bool {
        self.active.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.active.contains(v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.active.iter()
    }

    /// Open neighborhood N(v) among the active vertices.
    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.base.adj[v].intersection(&self.active)
    }

    /// Closed neighborhood N[v].
    pub fn closed_neighbors(&self, v: usize) -> VertexSet {
        let mut n = self.neighbors(v);
        n.insert(v);
        n
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).len()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.contains(a) && self.contains(b) && self.base.adj[a].contains(b)
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn num_edges(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// G - A: deactivates `removed`. The receiver is left untouched.
    pub fn induced(&self, removed: &VertexSet) -> IGraph {
        IGraph {
            base: Arc::clone(&self.base),
            active: self.active.difference(removed),
        }
    }

    /// G[V']: keeps only the active vertices that are also in `keep`.
    pub fn restrict(&self, keep: &VertexSet) -> IGraph {
        IGraph {
            base: Arc::clone(&self.base),
            active: self.active.intersection(keep),
        }
    }

    pub fn without_vertex(&self, v: usize) -> IGraph {
        let mut active = self.active.clone();
        active.remove(v);
        IGraph {
            base: Arc::clone(&self.base),
            active,
        }
    }

    /// Builds a bitset over this graph's vertex space.
    pub fn set_of<I: IntoIterator<Item = usize>>(&self, items: I) -> VertexSet {
        VertexSet::from_iter_with_capacity(self.capacity(), items)
    }

    /// Connected components of the active graph, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let mut unseen = self.active.clone();
        let mut comps = Vec::new();
        while let Some(start) = unseen.first() {
            let comp = self.reach(start, &unseen);
            unseen = unseen.difference(&comp);
            comps.push(comp);
        }
        comps
    }

    fn reach(&self, start: usize, within: &VertexSet) -> VertexSet {
        let mut comp = self.set_of([start]);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for w in self.base.adj[u].intersection(within).iter() {
                if !comp.contains(w) {
                    comp.insert(w);
                    stack.push(w);
                }
            }
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        match self.active.first() {
            None => true,
            Some(s) => self.reach(s, &self.active).len() == self.num_vertices(),
        }
    }

    /// A vertex whose removal keeps the graph connected.
    ///
    /// Runs a depth-first search from the smallest active id and returns the
    /// smallest-id leaf (tree degree at most one) of the resulting spanning
    /// tree.
    pub fn non_cut_vertex(&self) -> Result<usize> {
        let root = self
            .active
            .first()
            .ok_or_else(|| Error::Precondition("non_cut_vertex on an empty graph".into()))?;
        let mut tree_degree = vec![0usize; self.capacity()];
        let mut visited = self.set_of([root]);
        let mut stack = vec![(
            root,
            self.neighbors(root).iter().collect::<Vec<_>>(),
            0usize,
        )];
        while let Some((u, nbrs, next)) = stack.last_mut() {
            let u = *u;
            if *next == nbrs.len() {
                stack.pop();
                continue;
            }
            let w = nbrs[*next];
            *next += 1;
            if visited.contains(w) {
                continue;
            }
            visited.insert(w);
            tree_degree[u] += 1;
            tree_degree[w] += 1;
            stack.push((w, self.neighbors(w).iter().collect(), 0));
        }
        if visited.len() != self.num_vertices() {
            return Err(Error::Precondition(
                "non_cut_vertex on a disconnected graph".into(),
            ));
        }
        Ok(self
            .vertices()
            .find(|&v| tree_degree[v] <= 1)
            .expect("a finite tree has a leaf"))
    }

    /// Checks the properties that the block machinery relies on.
    pub fn check_structure(&self) -> StructReport {
        let mut claws = Vec::new();
        let mut bad_neighborhoods = Vec::new();
        for v in self.vertices() {
            let nbrs = self.neighbors(v).to_vec();
            for_each_independent_4(self, &nbrs, |quad| {
                let mut w = vec![v];
                w.extend_from_slice(quad);
                claws.push(w);
            });
            let d = nbrs.len();
            if d >= 5 {
                let isolated = nbrs
                    .iter()
                    .filter(|&&a| nbrs.iter().all(|&b| a == b || !self.adjacent(a, b)))
                    .count();
                if isolated + d > 6 {
                    bad_neighborhoods.push(v);
                }
            }
        }
        let max_degree = self.max_degree();
        StructReport {
            claw_free_4: claws.is_empty(),
            max_degree,
            neighborhood_ok: bad_neighborhoods.is_empty(),
            claw_witnesses: claws,
            neighborhood_witnesses: bad_neighborhoods,
        }
    }
}

fn for_each_independent_4(g: &IGraph, nbrs: &[usize], mut f: impl FnMut(&[usize])) {
    let k = nbrs.len();
    for a in 0..k {
        for b in a + 1..k {
            if g.adjacent(nbrs[a], nbrs[b]) {
                continue;
            }
            for c in b + 1..k {
                if g.adjacent(nbrs[a], nbrs[c]) || g.adjacent(nbrs[b], nbrs[c]) {
                    continue;
                }
                for d in c + 1..k {
                    if [a, b, c].iter().all(|&x| !g.adjacent(nbrs[x], nbrs[d])) {
                        f(&[nbrs[a], nbrs[b], nbrs[c], nbrs[d]]);
                    }
                }
            }
        }
    }
}

/// Structural facts about an intersection graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructReport {
    /// No induced K_{1,4}.
    pub claw_free_4: bool,
    pub max_degree: usize,
    /// Every vertex of degree d >= 5 has at most 6 - d isolated vertices in
    /// the subgraph induced by its neighborhood.
    pub neighborhood_ok: bool,
    /// Induced claws as `[center, leaf, leaf, leaf, leaf]`.
    pub claw_witnesses: Vec<Vec<usize>>,
    /// Vertices whose neighborhood violates the isolated-vertex bound.
    pub neighborhood_witnesses: Vec<usize>,
}

impl StructReport {
    pub fn passed(&self) -> bool {
        self.claw_free_4 && self.max_degree <= 6 && self.neighborhood_ok
    }
}
