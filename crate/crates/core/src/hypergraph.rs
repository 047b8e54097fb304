//! 3-uniform hypergraphs of bounded vertex degree.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Maximum vertex degree of a (3,3)-graph.
pub const MAX_DEGREE: usize = 3;

/// Position of an edge in [`Hypergraph::edges`]. Doubles as the vertex id of
/// that edge in the intersection graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

/// A 3-uniform hypergraph on vertices `0..n`.
///
/// Every edge is stored as a sorted triple of distinct vertices. Vertices not
/// covered by any edge are allowed and play no role in counting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<[usize; 3]>,
}

/// Outcome of [`Hypergraph::validate_33`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    /// `(vertex, degree)` for each vertex lying in more than three edges.
    pub overloaded: Vec<(usize, usize)>,
    /// Human-readable descriptions of malformed or duplicated edges.
    pub malformed: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.overloaded.is_empty() && self.malformed.is_empty()
    }
}

impl Hypergraph {
    /// Builds a hypergraph, sorting each triple. Rejects edges that are not
    /// three distinct in-range vertices and duplicated edges. The degree bound
    /// is *not* enforced here; see [`validate_33`](Self::validate_33).
    pub fn new(n: usize, edges: impl IntoIterator<Item = [usize; 3]>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut stored = Vec::new();
        for (i, mut e) in edges.into_iter().enumerate() {
            e.sort_unstable();
            if e[2] >= n {
                return Err(Error::InvalidHypergraph(format!(
                    "edge {i} uses vertex {} but n = {n}",
                    e[2]
                )));
            }
            if e[0] == e[1] || e[1] == e[2] {
                return Err(Error::InvalidHypergraph(format!(
                    "edge {i} {:?} has a repeated vertex",
                    e
                )));
            }
            if !seen.insert(e) {
                return Err(Error::InvalidHypergraph(format!("duplicate edge {:?}", e)));
            }
            stored.push(e);
        }
        Ok(Hypergraph { n, edges: stored })
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[[usize; 3]] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> [usize; 3] {
        self.edges[id.0]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(&v)).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            for &v in e {
                deg[v] += 1;
            }
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Checks membership in the (3,3) class.
    pub fn validate_33(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let mut seen = BTreeSet::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.iter().any(|&v| v >= self.n) || e[0] >= e[1] || e[1] >= e[2] {
                report.malformed.push(format!("edge {i} {:?}", e));
            } else if !seen.insert(*e) {
                report
                    .malformed
                    .push(format!("edge {i} {:?} duplicated", e));
            }
        }
        if report.malformed.is_empty() {
            for (v, d) in self.degrees().into_iter().enumerate() {
                if d > MAX_DEGREE {
                    report.overloaded.push((v, d));
                }
            }
        }
        report
    }

    /// Canonical form: edge list sorted lexicographically.
    pub fn canonicalize(&self) -> Hypergraph {
        let mut edges = self.edges.clone();
        edges.sort_unstable();
        Hypergraph { n: self.n, edges }
    }

    /// Groups edges into maximal classes connected through shared vertices.
    /// Every component keeps the original vertex ids and `n`; components are
    /// ordered by their smallest edge index.
    pub fn components(&self) -> Vec<Hypergraph> {
        let m = self.edges.len();
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut owner: Vec<Option<usize>> = vec![None; self.n];
        for (i, e) in self.edges.iter().enumerate() {
            for &v in e {
                match owner[v] {
                    Some(j) => {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        parent[a.max(b)] = a.min(b);
                    }
                    None => owner[v] = Some(i),
                }
            }
        }
        let mut groups: Vec<(usize, Vec<[usize; 3]>)> = Vec::new();
        for i in 0..m {
            let root = find(&mut parent, i);
            match groups.iter_mut().find(|(r, _)| *r == root) {
                Some((_, g)) => g.push(self.edges[i]),
                None => groups.push((root, vec![self.edges[i]])),
            }
        }
        groups
            .into_iter()
            .map(|(_, edges)| Hypergraph { n: self.n, edges })
            .collect()
    }

    /// Parses the canonical text format: `#` comment lines, a header line
    /// `n m`, then `m` lines of three vertex ids.
    pub fn parse(text: &str) -> Result<Hypergraph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            message: "missing header line 'n m'".into(),
        })?;
        let header = parse_numbers(hline, header)?;
        let [n, m] = header[..] else {
            return Err(Error::Parse {
                line: hline,
                message: format!("header must be 'n m', got {} fields", header.len()),
            });
        };

        let mut edges = Vec::with_capacity(m);
        let mut seen = BTreeSet::new();
        for (line, l) in lines.by_ref() {
            if edges.len() == m {
                return Err(Error::Parse {
                    line,
                    message: format!("more than the declared {m} edges"),
                });
            }
            let ids = parse_numbers(line, l)?;
            let Ok(mut e) = <[usize; 3]>::try_from(ids.as_slice()) else {
                return Err(Error::Parse {
                    line,
                    message: format!("edge must have 3 vertices, got {}", ids.len()),
                });
            };
            if let Some(&bad) = e.iter().find(|&&v| v >= n) {
                return Err(Error::Parse {
                    line,
                    message: format!("vertex id {bad} out of range for n = {n}"),
                });
            }
            e.sort_unstable();
            if e[0] == e[1] || e[1] == e[2] {
                return Err(Error::Parse {
                    line,
                    message: "edge repeats a vertex".into(),
                });
            }
            if !seen.insert(e) {
                return Err(Error::Parse {
                    line,
                    message: format!("duplicate edge {} {} {}", e[0], e[1], e[2]),
                });
            }
            edges.push(e);
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: hline,
                message: format!("declared {m} edges but found {}", edges.len()),
            });
        }
        Ok(Hypergraph { n, edges }.canonicalize())
    }

    /// Writes the canonical text form (no comments, sorted edges).
    pub fn serialize(&self) -> String {
        let canon = self.canonicalize();
        let mut out = format!("{} {}\n", canon.n, canon.edges.len());
        for e in &canon.edges {
            let _ = writeln!(out, "{} {} {}", e[0], e[1], e[2]);
        }
        out
    }
}

fn parse_numbers(line: usize, text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| Error::Parse {
                line,
                message: format!("expected a non-negative integer, got '{tok}'"),
            })
        })
        .collect()
}

/// Seeded rejection sampler for (3,3)-graphs on `n` vertices.
///
/// Draws uniform 3-subsets and keeps one when it is new and all three of its
/// vertices still have degree below three. Stops after `m` acceptances or
/// `100 * m` draws, so the result may have fewer than `m` edges.
pub fn gen_random_33(n: usize, m: usize, seed: u64) -> Result<Hypergraph> {
    if n < 3 {
        return Err(Error::Precondition(format!("need n >= 3, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut deg = vec![0usize; n];
    let mut seen = BTreeSet::new();
    let mut edges = Vec::with_capacity(m);
    for _ in 0..100 * m {
        if edges.len() == m {
            break;
        }
        let mut e = [0usize; 3];
        for (slot, v) in e.iter_mut().zip(sample(&mut rng, n, 3)) {
            *slot = v;
        }
        e.sort_unstable();
        if e.iter().all(|&v| deg[v] < MAX_DEGREE) && seen.insert(e) {
            for &v in &e {
                deg[v] += 1;
            }
            edges.push(e);
        }
    }
    Ok(Hypergraph { n, edges }.canonicalize())
}

/// Names accepted by [`named_instance`].
pub const NAMED_INSTANCES: [&str; 4] = ["triple", "two-disjoint", "two-sharing", "fano"];

/// Small fixtures used throughout the tests and by the CLI.
pub fn named_instance(name: &str) -> Result<Hypergraph> {
    let (n, edges): (usize, Vec<[usize; 3]>) = match name {
        "triple" => (3, vec![[0, 1, 2]]),
        "two-disjoint" => (6, vec![[0, 1, 2], [3, 4, 5]]),
        "two-sharing" => (5, vec![[0, 1, 2], [2, 3, 4]]),
        "fano" => (
            7,
            vec![
                [0, 1, 2],
                [0, 3, 4],
                [0, 5, 6],
                [1, 3, 5],
                [1, 4, 6],
                [2, 3, 6],
                [2, 4, 5],
            ],
        ),
        other => return Err(Error::UnknownInstance(other.to_string())),
    };
    Ok(Hypergraph::new(n, edges)?.canonicalize())
}
