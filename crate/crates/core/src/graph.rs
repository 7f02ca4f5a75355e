//! Finite simple graphs with labelled vertices.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::{self, Display, Write as _};
use std::hash::Hash;

use serde::Serialize;

use crate::error::{Error, Result};

/// A simple undirected graph. Vertices are kept sorted by label, so indices
/// and exports are deterministic.
#[derive(Clone, Debug)]
pub struct Graph<L> {
    labels: Vec<L>,
    adj: Vec<Vec<usize>>,
    index: HashMap<L, usize>,
}

impl<L: Clone + Ord + Hash> Graph<L> {
    /// Builds a graph from vertex labels and label pairs. Endpoints missing
    /// from `vertices` are added; loops and repeated edges are dropped.
    pub fn from_edges<V, E>(vertices: V, edges: E) -> Self
    where
        V: IntoIterator<Item = L>,
        E: IntoIterator<Item = (L, L)>,
    {
        let edges: Vec<(L, L)> = edges.into_iter().collect();
        let mut set: BTreeSet<L> = vertices.into_iter().collect();
        for (a, b) in &edges {
            set.insert(a.clone());
            set.insert(b.clone());
        }
        let labels: Vec<L> = set.into_iter().collect();
        let index: HashMap<L, usize> = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        let pairs = edges.iter().map(|(a, b)| (index[a], index[b]));
        let adj = adjacency(labels.len(), pairs);
        Graph { labels, adj, index }
    }

    /// Builds a graph from labels in index order and index pairs, relabelling
    /// so that indices follow label order.
    pub fn from_indexed(labels: Vec<L>, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut order: Vec<usize> = (0..labels.len()).collect();
        order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
        let mut rank = vec![0; labels.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new;
        }
        let sorted: Vec<L> = order.iter().map(|&i| labels[i].clone()).collect();
        let index = sorted.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        let adj = adjacency(sorted.len(), edges.into_iter().map(|(a, b)| (rank[a], rank[b])));
        Graph {
            labels: sorted,
            adj,
            index,
        }
    }

    pub fn index_of(&self, label: &L) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn contains(&self, label: &L) -> bool {
        self.index.contains_key(label)
    }

    /// The line graph: one vertex per edge (labelled by its sorted endpoint
    /// labels), adjacent when the edges share an endpoint.
    pub fn line_graph(&self) -> Graph<(L, L)> {
        let all: Vec<(usize, usize)> = self.edges().collect();
        let labels: Vec<(L, L)> = all
            .iter()
            .map(|&(a, b)| (self.labels[a].clone(), self.labels[b].clone()))
            .collect();
        let mut at: Vec<Vec<usize>> = vec![Vec::new(); self.len()];
        for (k, &(a, b)) in all.iter().enumerate() {
            at[a].push(k);
            at[b].push(k);
        }
        let mut edges = Vec::new();
        for inc in &at {
            for (i, &x) in inc.iter().enumerate() {
                for &y in &inc[i + 1..] {
                    edges.push((x, y));
                }
            }
        }
        Graph::from_indexed(labels, edges)
    }

    /// The subgraph induced on the vertices selected by `keep`.
    pub fn induced(&self, keep: impl Fn(usize) -> bool) -> Graph<L> {
        let chosen: Vec<usize> = (0..self.len()).filter(|&v| keep(v)).collect();
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &v) in chosen.iter().enumerate() {
            pos[v] = i;
        }
        let labels = chosen.iter().map(|&v| self.labels[v].clone()).collect();
        let edges = self
            .edges()
            .filter(|&(a, b)| pos[a] != usize::MAX && pos[b] != usize::MAX)
            .map(|(a, b)| (pos[a], pos[b]));
        Graph::from_indexed(labels, edges)
    }
}

impl<L> Graph<L> {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn label(&self, v: usize) -> &L {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, ns)| ns.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
    }
}

fn adjacency(n: usize, pairs: impl Iterator<Item = (usize, usize)>) -> Vec<Vec<usize>> {
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (a, b) in pairs {
        if a != b {
            adj[a].insert(b);
            adj[b].insert(a);
        }
    }
    adj.into_iter().map(|s| s.into_iter().collect()).collect()
}

/// Hop distances from `root`; `None` for unreachable vertices.
pub fn bfs_distances<L>(g: &Graph<L>, root: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.len()];
    dist[root] = Some(0);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v].unwrap();
        for &w in g.neighbors(v) {
            if dist[w].is_none() {
                dist[w] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

pub fn is_connected<L>(g: &Graph<L>) -> bool {
    g.is_empty() || bfs_distances(g, 0).iter().all(Option::is_some)
}

/// Outcome of a distance query inside a truncated ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certified {
    /// The ball distance equals the true distance in the infinite graph.
    Exact(usize),
    /// A shorter path might leave the ball.
    Uncertified,
}

impl Certified {
    pub fn exact(self) -> Option<usize> {
        match self {
            Certified::Exact(d) => Some(d),
            Certified::Uncertified => None,
        }
    }
}

/// A ball of radius `radius` about `center` in some infinite graph, with every
/// edge incident to a vertex at distance `< radius` present.
///
/// A ball distance `d(u, v)` is exact when `max(|u|, |v|) + d(u, v) <= radius`:
/// any shorter path stays within distance `|u| + d(u, v)` of the center, so it
/// lies in the ball.
pub struct CertifiedBall<'a, L> {
    graph: &'a Graph<L>,
    radius: usize,
    depth: Vec<usize>,
}

impl<'a, L> CertifiedBall<'a, L> {
    pub fn new(graph: &'a Graph<L>, center: usize, radius: usize) -> Self {
        let depth = bfs_distances(graph, center)
            .into_iter()
            .map(|d| d.unwrap_or(usize::MAX))
            .collect();
        CertifiedBall { graph, radius, depth }
    }

    pub fn graph(&self) -> &Graph<L> {
        self.graph
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Distance from the center.
    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    /// Certifies a precomputed ball distance `d = d_ball(u, v)`.
    pub fn certify(&self, u: usize, v: usize, d: Option<usize>) -> Certified {
        match d {
            Some(d) if self.depth[u].max(self.depth[v]).saturating_add(d) <= self.radius => Certified::Exact(d),
            _ => Certified::Uncertified,
        }
    }

    pub fn distance(&self, u: usize, v: usize) -> Certified {
        self.certify(u, v, bfs_distances(self.graph, u)[v])
    }
}

/// Rooted isomorphism test. Returns a witness `phi` with `phi[v]` in `b`, or
/// `None` if no isomorphism sends `ra` to `rb`.
pub fn rooted_isomorphism<L, M>(a: &Graph<L>, ra: usize, b: &Graph<M>, rb: usize) -> Option<Vec<usize>> {
    if a.len() != b.len() || a.edge_count() != b.edge_count() {
        return None;
    }
    let n = a.len();
    let (ca, cb) = refine(a, ra, b, rb)?;
    // order vertices of `a` by BFS so each new vertex has a mapped neighbour
    let da = bfs_distances(a, ra);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (da[v].unwrap_or(usize::MAX), v));
    let mut class_b: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        class_b.entry(cb[v]).or_default().push(v);
    }
    let mut phi = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend(a, b, &ca, &class_b, &order, 0, &mut phi, &mut used) {
        Some(phi)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn extend<L, M>(
    a: &Graph<L>,
    b: &Graph<M>,
    ca: &[usize],
    class_b: &BTreeMap<usize, Vec<usize>>,
    order: &[usize],
    k: usize,
    phi: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    if k == order.len() {
        return true;
    }
    let v = order[k];
    let mapped: Vec<(usize, usize)> = a
        .neighbors(v)
        .iter()
        .filter(|&&w| phi[w] != usize::MAX)
        .map(|&w| (w, phi[w]))
        .collect();
    let candidates: Vec<usize> = match mapped.first() {
        Some(&(_, x)) => b.neighbors(x).iter().copied().filter(|&y| class_b_has(class_b, ca[v], y)).collect(),
        None => class_b.get(&ca[v]).cloned().unwrap_or_default(),
    };
    for y in candidates {
        if used[y] {
            continue;
        }
        if !mapped.iter().all(|&(_, x)| b.has_edge(x, y)) {
            continue;
        }
        // non-edges to mapped vertices must also be preserved
        let mapped_b = b.neighbors(y).iter().filter(|&&z| used[z]).count();
        if mapped_b != mapped.len() {
            continue;
        }
        phi[v] = y;
        used[y] = true;
        if extend(a, b, ca, class_b, order, k + 1, phi, used) {
            return true;
        }
        phi[v] = usize::MAX;
        used[y] = false;
    }
    false
}

fn class_b_has(class_b: &BTreeMap<usize, Vec<usize>>, c: usize, y: usize) -> bool {
    class_b.get(&c).is_some_and(|vs| vs.binary_search(&y).is_ok())
}

/// Joint colour refinement seeded by distance from the roots. Returns `None`
/// when the colour histograms differ.
fn refine<L, M>(a: &Graph<L>, ra: usize, b: &Graph<M>, rb: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let seed = |d: Vec<Option<usize>>| d.into_iter().map(|x| x.map_or(usize::MAX, |x| x)).collect::<Vec<_>>();
    let mut ca = seed(bfs_distances(a, ra));
    let mut cb = seed(bfs_distances(b, rb));
    let mut classes = usize::MAX;
    loop {
        let sig = |g_adj: &dyn Fn(usize) -> Vec<usize>, c: &[usize], v: usize| {
            let mut ns: Vec<usize> = g_adj(v).into_iter().map(|w| c[w]).collect();
            ns.sort_unstable();
            (c[v], ns)
        };
        let na = |v: usize| a.neighbors(v).to_vec();
        let nb = |v: usize| b.neighbors(v).to_vec();
        let sa: Vec<_> = (0..a.len()).map(|v| sig(&na, &ca, v)).collect();
        let sb: Vec<_> = (0..b.len()).map(|v| sig(&nb, &cb, v)).collect();
        let mut palette: BTreeMap<&(usize, Vec<usize>), usize> = BTreeMap::new();
        for s in sa.iter().chain(sb.iter()) {
            let next = palette.len();
            palette.entry(s).or_insert(next);
        }
        let new_a: Vec<usize> = sa.iter().map(|s| palette[s]).collect();
        let new_b: Vec<usize> = sb.iter().map(|s| palette[s]).collect();
        let mut ha: Vec<usize> = new_a.clone();
        let mut hb: Vec<usize> = new_b.clone();
        ha.sort_unstable();
        hb.sort_unstable();
        if ha != hb {
            return None;
        }
        let count = palette.len();
        ca = new_a;
        cb = new_b;
        if count == classes {
            return Some((ca, cb));
        }
        classes = count;
    }
}

/// Output format for graph exports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Dot,
    Json,
}

#[derive(Serialize)]
struct JsonGraph<'a> {
    vertices: Vec<String>,
    edges: Vec<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    annotations: Option<&'a [String]>,
}

/// Deterministic DOT or JSON text for `g`. Vertex `i` in the output is the
/// `i`-th label in sorted order; `annotations`, if given, is indexed the same way.
pub fn export<L: Display>(g: &Graph<L>, format: Format, annotations: Option<&[String]>) -> Result<String> {
    if let Some(a) = annotations {
        if a.len() != g.len() {
            return Err(Error::InvalidTrack(format!(
                "{} annotations for {} vertices",
                a.len(),
                g.len()
            )));
        }
    }
    match format {
        Format::Json => {
            let doc = JsonGraph {
                vertices: g.labels().iter().map(ToString::to_string).collect(),
                edges: g.edges().map(|(a, b)| [a, b]).collect(),
                annotations,
            };
            serde_json::to_string_pretty(&doc).map_err(|e| Error::Parse(e.to_string()))
        }
        Format::Dot => {
            let mut out = String::from("graph G {\n");
            for (i, l) in g.labels().iter().enumerate() {
                let text = match annotations {
                    Some(a) => format!("{l}\\n{}", a[i]),
                    None => l.to_string(),
                };
                writeln!(out, "  {i} [label=\"{}\"];", text.replace('"', "\\\"")).unwrap();
            }
            for (a, b) in g.edges() {
                writeln!(out, "  {a} -- {b};").unwrap();
            }
            out.push_str("}\n");
            Ok(out)
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Dot => "dot",
            Format::Json => "json",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph<usize> {
        Graph::from_edges(0..n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    fn path(n: usize) -> Graph<usize> {
        Graph::from_edges(0..n, (1..n).map(|i| (i - 1, i)))
    }

    #[test]
    fn builds_simple_graph() {
        let g = Graph::from_edges([3, 1], [(1, 2), (2, 1), (2, 2), (3, 2)]);
        assert_eq!(g.labels(), &[1, 2, 3]);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn bfs_on_path() {
        let g = path(5);
        let d = bfs_distances(&g, 0);
        assert_eq!(d, (0..5).map(Some).collect::<Vec<_>>());
        let h = Graph::from_edges(0..3, [(0, 1)]);
        assert_eq!(bfs_distances(&h, 0)[2], None);
        assert!(!is_connected(&h));
    }

    #[test]
    fn certification_rule() {
        // ball of radius 2 about 0 in the infinite path ... -2 -1 0 1 2 ...
        let g = Graph::from_edges(-2..=2i32, (-2..2).map(|i| (i, i + 1)));
        let c = g.index_of(&0).unwrap();
        let ball = CertifiedBall::new(&g, c, 2);
        let at = |x: i32| g.index_of(&x).unwrap();
        assert_eq!(ball.distance(at(-1), at(1)), Certified::Uncertified);
        assert_eq!(ball.distance(at(0), at(2)), Certified::Uncertified);
        assert_eq!(ball.distance(at(0), at(1)), Certified::Exact(1));
        assert_eq!(ball.distance(at(2), at(2)), Certified::Exact(0));
    }

    #[test]
    fn isomorphism_of_cycles() {
        let a = cycle(6);
        let b = Graph::from_edges(0..6, [(0, 2), (2, 4), (4, 1), (1, 3), (3, 5), (5, 0)]);
        let phi = rooted_isomorphism(&a, 0, &b, 3).unwrap();
        assert_eq!(phi[0], 3);
        for (x, y) in a.edges() {
            assert!(b.has_edge(phi[x], phi[y]));
        }
        assert!(rooted_isomorphism(&cycle(6), 0, &path(6), 0).is_none());
    }

    #[test]
    fn rooted_isomorphism_respects_root() {
        // star with one subdivided ray: root at the centre vs. at a leaf
        let g = Graph::from_edges(0..5, [(0, 1), (0, 2), (0, 3), (3, 4)]);
        assert!(rooted_isomorphism(&g, 1, &g, 2).is_some());
        assert!(rooted_isomorphism(&g, 1, &g, 4).is_none());
    }

    #[test]
    fn line_graph_of_star_and_cycle() {
        let star = Graph::from_edges(0..4, [(0, 1), (0, 2), (0, 3)]);
        let l = star.line_graph();
        assert_eq!((l.len(), l.edge_count()), (3, 3));
        let c = cycle(5).line_graph();
        assert!(rooted_isomorphism(&c, 0, &cycle(5), 0).is_some());
    }

    #[test]
    fn exports_are_deterministic() {
        let g = Graph::from_edges(["b", "a"], [("a", "b")]);
        let dot = export(&g, Format::Dot, None).unwrap();
        assert_eq!(dot, "graph G {\n  0 [label=\"a\"];\n  1 [label=\"b\"];\n  0 -- 1;\n}\n");
        let json: serde_json::Value = serde_json::from_str(&export(&g, Format::Json, None).unwrap()).unwrap();
        assert_eq!(json["vertices"], serde_json::json!(["a", "b"]));
        assert_eq!(json["edges"], serde_json::json!([[0, 1]]));
    }
}
