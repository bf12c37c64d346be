//! Undirected simple graphs and the subgraph queries the samplers are built on.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::io::{self, BufRead, Write};
use std::path::Path;

use crate::error::{invalid_arg, Error, Result};

/// Immutable undirected simple graph on nodes `0..n`.
///
/// Adjacency lists are sorted ascending; every set-valued query returns ids in
/// ascending order so that seeded runs are reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    /// Builds a graph from unordered pairs. Duplicate pairs (in either
    /// orientation) collapse to one edge; self-loops and out-of-range ids are
    /// rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(invalid_arg("graph must have at least one node"));
        }
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(invalid_arg(format!(
                    "edge ({u}, {v}) out of range for n = {n}"
                )));
            }
            if u == v {
                return Err(invalid_arg(format!("self-loop on node {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut twice_m = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            twice_m += list.len();
        }
        Ok(Self {
            adjacency,
            m: twice_m / 2,
        })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::from_edges(n, std::iter::empty())
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Result<Self> {
        Self::from_edges(n, (1..n).map(|v| (v - 1, v)))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Renders the edge-list text format: `n m` on the first line, then one
    /// `u v` line per edge with `u < v` in lexicographic order.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(16 + 8 * self.m);
        let _ = writeln!(out, "{} {}", self.n(), self.m);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn write_edge_list<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(self.to_edge_list().as_bytes())
    }

    pub fn save_edge_list(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_edge_list())?;
        Ok(())
    }

    pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let (n, m) = match lines.next() {
            Some((_, line)) => {
                let line = line?;
                parse_pair(&line, 1)?
            }
            None => {
                return Err(Error::Parse {
                    line: 1,
                    message: "missing header line \"n m\"".into(),
                })
            }
        };
        let mut edges = Vec::with_capacity(m);
        for (idx, line) in lines {
            let line = line?;
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let (u, v) = parse_pair(&line, lineno)?;
            if u >= n || v >= n || u == v {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("invalid edge ({u}, {v}) for n = {n}"),
                });
            }
            edges.push((u, v));
        }
        let g = Self::from_edges(n, edges)?;
        if g.m != m {
            return Err(Error::Parse {
                line: 1,
                message: format!(
                    "header declares {m} edges but {} distinct edges were read",
                    g.m
                ),
            });
        }
        Ok(g)
    }

    pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read_edge_list(io::BufReader::new(file))
    }
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let bad = || Error::Parse {
        line: lineno,
        message: format!("expected two non-negative integers, found {line:?}"),
    };
    let mut it = line.split_whitespace();
    let a = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let b = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    if it.next().is_some() {
        return Err(bad());
    }
    Ok((a, b))
}

/// A set of `k` distinct node ids, stored ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Selection {
    nodes: Vec<usize>,
}

impl Selection {
    /// Validates ids against `g` and sorts them.
    pub fn new(g: &Graph, nodes: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut nodes: Vec<usize> = nodes.into_iter().collect();
        nodes.sort_unstable();
        if nodes.is_empty() {
            return Err(Error::InvalidSelection("selection is empty".into()));
        }
        if nodes.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSelection(
                "selection has repeated nodes".into(),
            ));
        }
        if let Some(&bad) = nodes.last().filter(|&&v| v >= g.n()) {
            return Err(Error::InvalidSelection(format!(
                "node {bad} out of range for n = {}",
                g.n()
            )));
        }
        Ok(Self { nodes })
    }

    /// Caller guarantees the ids are sorted, distinct and in range.
    pub(crate) fn from_sorted_unchecked(nodes: Vec<usize>) -> Self {
        debug_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        Self { nodes }
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.nodes.len()
    }

    #[inline]
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.nodes.binary_search(&v).is_ok()
    }

    /// The selection with `out` replaced by `incoming`.
    pub fn swap(&self, out: usize, incoming: usize) -> Self {
        debug_assert!(self.contains(out) && !self.contains(incoming));
        let mut nodes: Vec<usize> = self.nodes.iter().copied().filter(|&v| v != out).collect();
        let at = nodes.binary_search(&incoming).unwrap_err();
        nodes.insert(at, incoming);
        Self { nodes }
    }
}

/// Number of edges of `g` with both endpoints in `s`.
pub fn internal_edges(g: &Graph, s: &Selection) -> usize {
    let sel = s.nodes();
    let mut twice = 0;
    for &u in sel {
        // Merge of two sorted lists.
        let adj = g.neighbors(u);
        let (mut i, mut j) = (0, 0);
        while i < adj.len() && j < sel.len() {
            match adj[i].cmp(&sel[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    twice += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    twice / 2
}

/// Density of a `k`-node subgraph holding `edges` internal edges.
#[inline]
pub fn density_from_edges(edges: usize, k: usize) -> f64 {
    (2 * edges) as f64 / (k * (k - 1)) as f64
}

/// Edge count of a complete graph on `k` nodes.
#[inline]
pub fn clique_edges(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

/// Edge density `2 m_S / (k (k - 1))` of the subgraph induced by `s`.
pub fn edge_density(g: &Graph, s: &Selection) -> Result<f64> {
    if s.k() < 2 {
        return Err(Error::InvalidSelection(format!(
            "density needs at least 2 nodes, got {}",
            s.k()
        )));
    }
    Ok(density_from_edges(internal_edges(g, s), s.k()))
}

/// Nodes outside `nodes` adjacent to at least one member, ascending.
pub fn neighbors_of_set(g: &Graph, nodes: &[usize]) -> Vec<usize> {
    let mut mark = vec![0u8; g.n()];
    for &u in nodes {
        mark[u] = 1;
    }
    let mut out = Vec::new();
    for &u in nodes {
        for &v in g.neighbors(u) {
            if mark[v] == 0 {
                mark[v] = 2;
                out.push(v);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Adjacency of the subgraph induced by `sorted` (local indices).
fn induced_adjacency(g: &Graph, sorted: &[usize]) -> Vec<Vec<usize>> {
    sorted
        .iter()
        .map(|&u| {
            g.neighbors(u)
                .iter()
                .filter_map(|v| sorted.binary_search(v).ok())
                .collect()
        })
        .collect()
}

fn sorted_distinct(nodes: &[usize]) -> Vec<usize> {
    let mut sorted = nodes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted
}

fn induced_connected(adj: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == adj.len()
}

/// Whether the subgraph induced by `nodes` is connected. Only edges between
/// members count.
pub fn is_connected(g: &Graph, nodes: &[usize]) -> Result<bool> {
    if nodes.is_empty() {
        return Err(invalid_arg("connectivity of an empty node set"));
    }
    let sorted = sorted_distinct(nodes);
    Ok(induced_connected(&induced_adjacency(g, &sorted)))
}

/// Members of `nodes` whose removal leaves the induced subgraph connected,
/// ascending. Uses a single lowpoint DFS over the induced subgraph.
pub fn non_articulation_nodes(g: &Graph, nodes: &[usize]) -> Result<Vec<usize>> {
    let sorted = sorted_distinct(nodes);
    if sorted.len() < 2 {
        return Err(invalid_arg("articulation analysis needs at least 2 nodes"));
    }
    let adj = induced_adjacency(g, &sorted);
    let cut =
        articulation_flags(&adj).ok_or_else(|| invalid_arg("induced subgraph is disconnected"))?;
    Ok(sorted
        .iter()
        .zip(cut)
        .filter_map(|(&v, is_cut)| (!is_cut).then_some(v))
        .collect())
}

/// Iterative Hopcroft–Tarjan articulation points on a local adjacency.
/// Returns `None` if the graph is disconnected.
fn articulation_flags(adj: &[Vec<usize>]) -> Option<Vec<bool>> {
    const UNSEEN: usize = usize::MAX;
    let len = adj.len();
    let mut disc = vec![UNSEEN; len];
    let mut low = vec![0; len];
    let mut cut = vec![false; len];
    let mut root_children = 0;
    // (node, parent, next neighbor position)
    let mut stack: Vec<(usize, usize, usize)> = vec![(0, UNSEEN, 0)];
    disc[0] = 0;
    low[0] = 0;
    let mut time = 1;
    while let Some(&mut (u, parent, ref mut pos)) = stack.last_mut() {
        if *pos < adj[u].len() {
            let v = adj[u][*pos];
            *pos += 1;
            if disc[v] == UNSEEN {
                disc[v] = time;
                low[v] = time;
                time += 1;
                if u == 0 {
                    root_children += 1;
                }
                stack.push((v, u, 0));
            } else if v != parent {
                low[u] = low[u].min(disc[v]);
            }
        } else {
            stack.pop();
            if parent != UNSEEN {
                low[parent] = low[parent].min(low[u]);
                if parent != 0 && low[u] >= disc[parent] {
                    cut[parent] = true;
                }
            }
        }
    }
    if time != len {
        return None;
    }
    cut[0] = root_children > 1;
    Some(cut)
}

/// Sum over ordered pairs of selected nodes of their shortest-path length in
/// the full graph. Diagonal terms are zero; unreachable pairs contribute
/// `unreachable_penalty`.
pub fn pairwise_distance_sum(g: &Graph, s: &Selection, unreachable_penalty: u64) -> u64 {
    let n = g.n();
    let mut dist = vec![u32::MAX; n];
    let mut queue = VecDeque::with_capacity(n);
    let mut total = 0u64;
    for &src in s.nodes() {
        dist.iter_mut().for_each(|d| *d = u32::MAX);
        queue.clear();
        dist[src] = 0;
        queue.push_back(src);
        let mut remaining = s.k() - 1;
        'bfs: while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if dist[v] == u32::MAX {
                    dist[v] = dist[u] + 1;
                    if s.contains(v) {
                        total += u64::from(dist[v]);
                        remaining -= 1;
                        if remaining == 0 {
                            break 'bfs;
                        }
                    }
                    queue.push_back(v);
                }
            }
        }
        total += remaining as u64 * unreachable_penalty;
    }
    total
}

/// SM objective `L(S)` with the node count as the unreachable-pair penalty.
pub fn distance_objective(g: &Graph, s: &Selection) -> u64 {
    pairwise_distance_sum(g, s, g.n() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sel(g: &Graph, nodes: &[usize]) -> Selection {
        Selection::new(g, nodes.iter().copied()).unwrap()
    }

    fn triangle() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).unwrap()
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::from_edges(3, [(0, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
        assert!(Graph::from_edges(0, []).is_err());
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn selection_validation() {
        let g = Graph::empty(4).unwrap();
        assert!(Selection::new(&g, [0, 0]).is_err());
        assert!(Selection::new(&g, [0, 4]).is_err());
        assert!(Selection::new(&g, []).is_err());
        assert_eq!(sel(&g, &[3, 1]).nodes(), &[1, 3]);
        assert_eq!(sel(&g, &[0, 2, 3]).swap(2, 1).nodes(), &[0, 1, 3]);
    }

    #[test]
    fn density_examples() {
        let k10 = Graph::complete(10).unwrap();
        let all: Vec<usize> = (0..10).collect();
        assert_eq!(edge_density(&k10, &sel(&k10, &all)).unwrap(), 1.0);

        let empty = Graph::empty(10).unwrap();
        assert_eq!(edge_density(&empty, &sel(&empty, &all)).unwrap(), 0.0);

        let tree = Graph::path(10).unwrap();
        assert_eq!(
            edge_density(&tree, &sel(&tree, &all)).unwrap(),
            2.0 * 9.0 / 90.0
        );

        assert!(matches!(
            edge_density(&tree, &sel(&tree, &[3])),
            Err(Error::InvalidSelection(_))
        ));
    }

    #[test]
    fn neighbor_examples() {
        let path = Graph::path(3).unwrap();
        assert_eq!(neighbors_of_set(&path, &[0]), vec![1]);
        assert_eq!(neighbors_of_set(&triangle(), &[0, 1]), vec![2]);
        let isolated = Graph::empty(5).unwrap();
        assert!(neighbors_of_set(&isolated, &[1, 3]).is_empty());
        assert!(neighbors_of_set(&path, &[]).is_empty());
    }

    #[test]
    fn connectivity_examples() {
        assert!(is_connected(&triangle(), &[0, 1, 2]).unwrap());
        let two = Graph::empty(2).unwrap();
        assert!(!is_connected(&two, &[0, 1]).unwrap());
        assert!(is_connected(&two, &[1]).unwrap());
        assert!(is_connected(&two, &[]).is_err());
        // Connected only through a node outside the set.
        let path = Graph::path(3).unwrap();
        assert!(!is_connected(&path, &[0, 2]).unwrap());
    }

    #[test]
    fn non_articulation_examples() {
        let path = Graph::path(3).unwrap();
        assert_eq!(
            non_articulation_nodes(&path, &[0, 1, 2]).unwrap(),
            vec![0, 2]
        );
        assert_eq!(
            non_articulation_nodes(&triangle(), &[0, 1, 2]).unwrap(),
            vec![0, 1, 2]
        );
        assert_eq!(
            non_articulation_nodes(&star(3), &[0, 1, 2, 3]).unwrap(),
            vec![1, 2, 3]
        );
        assert!(non_articulation_nodes(&path, &[0, 2]).is_err());
        assert!(non_articulation_nodes(&path, &[1]).is_err());
    }

    #[test]
    fn distance_sum_examples() {
        let t = triangle();
        assert_eq!(pairwise_distance_sum(&t, &sel(&t, &[0, 1, 2]), 3), 6);

        let k10 = Graph::complete(10).unwrap();
        let all: Vec<usize> = (0..10).collect();
        assert_eq!(pairwise_distance_sum(&k10, &sel(&k10, &all), 10), 90);

        let apart = Graph::empty(2).unwrap();
        assert_eq!(
            pairwise_distance_sum(&apart, &sel(&apart, &[0, 1]), 100),
            200
        );

        // Paths may leave the selection.
        let path = Graph::path(5).unwrap();
        assert_eq!(pairwise_distance_sum(&path, &sel(&path, &[0, 4]), 5), 8);
        assert_eq!(distance_objective(&path, &sel(&path, &[0, 2])), 4);
    }

    #[test]
    fn edge_list_format() {
        let g = Graph::from_edges(4, [(2, 1), (0, 3), (0, 1)]).unwrap();
        assert_eq!(g.to_edge_list(), "4 3\n0 1\n0 3\n1 2\n");
        let back = Graph::read_edge_list(g.to_edge_list().as_bytes()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn edge_list_errors() {
        assert!(matches!(
            Graph::read_edge_list("".as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Graph::read_edge_list("3 1\n0 x\n".as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Graph::read_edge_list("3 2\n0 1\n".as_bytes()),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            Graph::read_edge_list("3 1\n0 5\n".as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(Graph::read_edge_list("3 1\n# comment\n0 1\n".as_bytes()).is_err());
    }
}
