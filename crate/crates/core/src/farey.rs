//! Slopes, the Farey graph and its dual tree.
//!
//! Essential simple closed curves on both surfaces are labelled by reduced
//! projective rationals `p/q` (with `1/0` for infinity). Two slopes span a Farey
//! edge iff `|ps - rq| = 1`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::track::SurfaceId;

/// Largest generation depth accepted by [`farey_ball`].
pub const MAX_FAREY_DEPTH: usize = 16;

/// A reduced projective rational `p/q`, sign-canonical (`q > 0`, or `1/0`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slope {
    p: i64,
    q: i64,
}

impl Slope {
    pub const ZERO: Slope = Slope { p: 0, q: 1 };
    pub const INFINITY: Slope = Slope { p: 1, q: 0 };

    /// Reduces `(p, q)` and moves the sign to the numerator. Rejects `(0, 0)`.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p == 0 && q == 0 {
            return Err(Error::ZeroSlope);
        }
        let g = p.gcd(&q);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 || (q == 0 && p < 0) {
            p = -p;
            q = -q;
        }
        Ok(Slope { p, q })
    }

    /// Slope of a nonzero integer vector.
    pub fn from_vector(v: [i64; 2]) -> Result<Self> {
        Slope::new(v[0], v[1])
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn vector(&self) -> [i64; 2] {
        [self.p, self.q]
    }

    /// `max(|p|, |q|)`.
    pub fn height(&self) -> i64 {
        self.p.abs().max(self.q.abs())
    }

    pub fn det_abs(self, other: Slope) -> i64 {
        det_abs(self, other)
    }

    /// `(p + r)/(q + s)`.
    pub fn mediant(self, other: Slope) -> Slope {
        Slope::new(self.p + other.p, self.q + other.q).expect("distinct slopes have a mediant")
    }

    /// `(p - r)/(q - s)`, the other completion of a Farey edge.
    pub fn antimediant(self, other: Slope) -> Slope {
        Slope::new(self.p - other.p, self.q - other.q).expect("distinct slopes have an antimediant")
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (p, q) = s
            .trim()
            .split_once('/')
            .ok_or_else(|| Error::Parse(format!("slope `{s}` is not of the form p/q")))?;
        let p = p.trim().parse::<i64>().map_err(|e| Error::Parse(e.to_string()))?;
        let q = q.trim().parse::<i64>().map_err(|e| Error::Parse(e.to_string()))?;
        Slope::new(p, q)
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Slope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `|p_a q_b - p_b q_a|`.
pub fn det_abs(a: Slope, b: Slope) -> i64 {
    (a.p * b.q - b.p * a.q).abs()
}

/// Minimal geometric intersection number of the curves with slopes `a` and `b`.
pub fn intersection_number(surface: SurfaceId, a: Slope, b: Slope) -> i64 {
    match surface {
        SurfaceId::S11 => det_abs(a, b),
        SurfaceId::S04 => 2 * det_abs(a, b),
    }
}

/// An unordered Farey edge, stored with its endpoints sorted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FareyEdge(pub Slope, pub Slope);

impl FareyEdge {
    pub fn new(a: Slope, b: Slope) -> Self {
        if a <= b {
            FareyEdge(a, b)
        } else {
            FareyEdge(b, a)
        }
    }

    pub fn base() -> Self {
        FareyEdge::new(Slope::ZERO, Slope::INFINITY)
    }

    pub fn contains(&self, s: Slope) -> bool {
        self.0 == s || self.1 == s
    }

    /// The four edges sharing a Farey triangle with this one.
    pub fn triangle_neighbors(&self) -> [FareyEdge; 4] {
        let (a, b) = (self.0, self.1);
        let m = a.mediant(b);
        let n = a.antimediant(b);
        [
            FareyEdge::new(a, m),
            FareyEdge::new(b, m),
            FareyEdge::new(a, n),
            FareyEdge::new(b, n),
        ]
    }
}

impl fmt::Display for FareyEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}, {}}}", self.0, self.1)
    }
}

/// A Farey triangle, vertices sorted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triangle(pub [Slope; 3]);

impl Triangle {
    pub fn new(a: Slope, b: Slope, c: Slope) -> Self {
        let mut v = [a, b, c];
        v.sort();
        Triangle(v)
    }

    pub fn edges(&self) -> [FareyEdge; 3] {
        let [a, b, c] = self.0;
        [FareyEdge::new(a, b), FareyEdge::new(a, c), FareyEdge::new(b, c)]
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.0[0], self.0[1], self.0[2])
    }
}

/// A finite, triangle-closed window of the Farey graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FareyGraph {
    pub vertices: Vec<Slope>,
    pub edges: Vec<FareyEdge>,
    pub depth: usize,
}

impl FareyGraph {
    pub fn to_graph(&self) -> Graph<Slope> {
        Graph::from_edges(
            self.vertices.iter().copied(),
            self.edges.iter().map(|e| (e.0, e.1)),
        )
    }

    /// All 3-cliques, found by scanning common neighbours of each edge.
    pub fn triangles(&self) -> Vec<Triangle> {
        let mut nbrs: BTreeMap<Slope, BTreeSet<Slope>> = BTreeMap::new();
        for e in &self.edges {
            nbrs.entry(e.0).or_default().insert(e.1);
            nbrs.entry(e.1).or_default().insert(e.0);
        }
        let mut out = BTreeSet::new();
        for e in &self.edges {
            for c in nbrs[&e.0].intersection(&nbrs[&e.1]) {
                out.insert(Triangle::new(e.0, e.1, *c));
            }
        }
        out.into_iter().collect()
    }
}

/// Generates the Farey graph to `depth` triangle-completion generations, starting
/// from the edge `{0/1, 1/0}`.
pub fn farey_ball(depth: usize) -> Result<FareyGraph> {
    if depth > MAX_FAREY_DEPTH {
        return Err(Error::DepthBound {
            depth,
            bound: MAX_FAREY_DEPTH,
        });
    }
    let mut edges: BTreeSet<FareyEdge> = BTreeSet::new();
    edges.insert(FareyEdge::base());
    let mut frontier = vec![FareyEdge::base()];
    for _ in 0..depth {
        let mut next = BTreeSet::new();
        for e in &frontier {
            for c in [e.0.mediant(e.1), e.0.antimediant(e.1)] {
                for f in [FareyEdge::new(e.0, c), FareyEdge::new(e.1, c)] {
                    if edges.insert(f) {
                        next.insert(f);
                    }
                }
            }
        }
        frontier = next.into_iter().collect();
    }
    let vertices: BTreeSet<Slope> = edges.iter().flat_map(|e| [e.0, e.1]).collect();
    Ok(FareyGraph {
        vertices: vertices.into_iter().collect(),
        edges: edges.into_iter().collect(),
        depth,
    })
}

/// The dual graph: one vertex per Farey triangle, edges between triangles that
/// share a Farey edge.
pub fn dual_tree(f: &FareyGraph) -> Graph<Triangle> {
    let tris = f.triangles();
    let mut by_edge: BTreeMap<FareyEdge, Vec<Triangle>> = BTreeMap::new();
    for t in &tris {
        for e in t.edges() {
            by_edge.entry(e).or_default().push(*t);
        }
    }
    let edges = by_edge
        .values()
        .filter(|ts| ts.len() == 2)
        .map(|ts| (ts[0], ts[1]))
        .collect::<Vec<_>>();
    Graph::from_edges(tris, edges)
}

/// For slopes at det 2, the unique Farey edge `{c3, c4}` whose endpoints are
/// adjacent to both inputs. Found by exhaustive search over slopes of height
/// at most `max(height) + 2`.
pub fn resolve_i4_to_edge(a: Slope, b: Slope) -> Result<FareyEdge> {
    let det = det_abs(a, b);
    if det != 2 {
        return Err(Error::NotIntersectionFour {
            a: a.to_string(),
            b: b.to_string(),
            det,
        });
    }
    let h = a.height().max(b.height()) + 2;
    let mut common = Vec::new();
    for q in 0..=h {
        for p in -h..=h {
            if p.gcd(&q) != 1 || (q == 0 && p != 1) {
                continue;
            }
            let s = Slope { p, q };
            if det_abs(s, a) == 1 && det_abs(s, b) == 1 {
                common.push(s);
            }
        }
    }
    let mut pairs = Vec::new();
    for (i, &x) in common.iter().enumerate() {
        for &y in &common[i + 1..] {
            if det_abs(x, y) == 1 {
                pairs.push(FareyEdge::new(x, y));
            }
        }
    }
    match pairs.as_slice() {
        [e] => Ok(*e),
        _ => Err(Error::AmbiguousResolution {
            a: a.to_string(),
            b: b.to_string(),
            count: pairs.len(),
        }),
    }
}

/// Distance between two Farey edges in the line graph of the dual tree, by
/// breadth-first search over triangle neighbours. `None` past `max_depth`.
pub fn line_graph_distance(from: FareyEdge, to: FareyEdge, max_depth: usize) -> Option<usize> {
    if from == to {
        return Some(0);
    }
    let mut seen = BTreeSet::from([from]);
    let mut queue = VecDeque::from([(from, 0usize)]);
    while let Some((e, d)) = queue.pop_front() {
        if d == max_depth {
            continue;
        }
        for f in e.triangle_neighbors() {
            if f == to {
                return Some(d + 1);
            }
            if seen.insert(f) {
                queue.push_back((f, d + 1));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(p: i64, q: i64) -> Slope {
        Slope::new(p, q).unwrap()
    }

    #[test]
    fn make_slope_canonicalizes() {
        assert_eq!(s(2, 4), s(1, 2));
        assert_eq!((s(2, 4).p(), s(2, 4).q()), (1, 2));
        assert_eq!(s(-1, 0), Slope::INFINITY);
        assert_eq!((s(3, -6).p(), s(3, -6).q()), (-1, 2));
        assert_eq!(Slope::new(0, 0), Err(Error::ZeroSlope));
    }

    #[test]
    fn slope_string_form() {
        assert_eq!(Slope::INFINITY.to_string(), "1/0");
        assert_eq!(s(1, -2).to_string(), "-1/2");
        assert_eq!("-1/2".parse::<Slope>().unwrap(), s(-1, 2));
        assert!("3".parse::<Slope>().is_err());
        assert_eq!(serde_json::to_string(&s(2, 3)).unwrap(), "\"2/3\"");
    }

    #[test]
    fn det_examples() {
        assert_eq!(det_abs(Slope::ZERO, Slope::INFINITY), 1);
        assert_eq!(det_abs(s(1, 2), s(1, 3)), 1);
        assert_eq!(det_abs(Slope::ZERO, s(2, 1)), 2);
    }

    #[test]
    fn intersection_examples() {
        assert_eq!(intersection_number(SurfaceId::S11, Slope::ZERO, Slope::INFINITY), 1);
        assert_eq!(intersection_number(SurfaceId::S04, Slope::ZERO, Slope::INFINITY), 2);
        assert_eq!(intersection_number(SurfaceId::S04, Slope::ZERO, s(2, 1)), 4);
    }

    #[test]
    fn farey_depth_zero_and_one() {
        let f0 = farey_ball(0).unwrap();
        assert_eq!(f0.vertices, vec![Slope::ZERO, Slope::INFINITY]);
        assert_eq!(f0.edges.len(), 1);
        let f1 = farey_ball(1).unwrap();
        assert_eq!(f1.vertices.len(), 4);
        assert_eq!(f1.edges.len(), 5);
        // brute-force edge test over the vertex set
        let mut brute = 0;
        for (i, a) in f1.vertices.iter().enumerate() {
            for b in &f1.vertices[i + 1..] {
                if det_abs(*a, *b) == 1 {
                    brute += 1;
                }
            }
        }
        assert_eq!(brute, 5);
        assert!(farey_ball(MAX_FAREY_DEPTH + 1).is_err());
    }

    #[test]
    fn generated_edges_are_unimodular() {
        let f = farey_ball(8).unwrap();
        assert!(f.edges.iter().all(|e| det_abs(e.0, e.1) == 1));
    }

    #[test]
    fn dual_of_depth_one() {
        let d = dual_tree(&farey_ball(1).unwrap());
        assert_eq!(d.len(), 2);
        assert_eq!(d.edge_count(), 1);
    }

    #[test]
    fn dual_tree_is_trivalent_tree() {
        let f = farey_ball(6).unwrap();
        let d = dual_tree(&f);
        assert_eq!(d.edge_count() + 1, d.len(), "connected acyclic");
        assert!(crate::graph::is_connected(&d));
        let degs: BTreeSet<usize> = (0..d.len()).map(|v| d.degree(v)).collect();
        assert!(degs.iter().all(|&k| k == 1 || k == 3), "{degs:?}");
        // triangles built from edges of depth < 6 are interior
        let inner = farey_ball(4).unwrap();
        for t in inner.triangles() {
            let v = d.index_of(&t).unwrap();
            assert_eq!(d.degree(v), 3, "{t}");
        }
    }

    #[test]
    fn resolve_examples() {
        assert_eq!(
            resolve_i4_to_edge(Slope::ZERO, s(2, 1)).unwrap(),
            FareyEdge::new(s(1, 1), Slope::INFINITY)
        );
        assert_eq!(
            resolve_i4_to_edge(Slope::INFINITY, s(1, 2)).unwrap(),
            FareyEdge::new(Slope::ZERO, s(1, 1))
        );
        assert!(matches!(
            resolve_i4_to_edge(Slope::ZERO, Slope::INFINITY),
            Err(Error::NotIntersectionFour { det: 1, .. })
        ));
    }

    #[test]
    fn line_graph_distance_small() {
        let e = FareyEdge::base();
        assert_eq!(line_graph_distance(e, e, 3), Some(0));
        for f in e.triangle_neighbors() {
            assert_eq!(line_graph_distance(e, f, 3), Some(1));
        }
        // {1/1, 1/2} lies two triangles away
        assert_eq!(line_graph_distance(e, FareyEdge::new(s(1, 1), s(1, 2)), 5), Some(2));
    }
}
