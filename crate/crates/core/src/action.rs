//! The mapping class group model: `PSL(2, Z)` for `S(1,1)` and
//! `PSL(2, Z) x (Z/2)^2` for `S(0,4)`, the Klein factor acting trivially.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Mul;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::complex::{distance_to_set, ComplexBall};
use crate::farey::{FareyEdge, Slope};
use crate::graph::{bfs_distances, Certified, Graph};
use crate::matrix::Psl2;
use crate::report::Report;
use crate::track::{ClassKey, SurfaceId, TrainTrack};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MappingClass {
    pub matrix: Psl2,
    pub klein: [bool; 2],
}

impl MappingClass {
    pub const IDENTITY: MappingClass = MappingClass {
        matrix: Psl2::IDENTITY,
        klein: [false, false],
    };

    pub fn new(matrix: Psl2) -> Self {
        MappingClass { matrix, klein: [false; 2] }
    }

    pub fn klein(tag: [bool; 2]) -> Self {
        MappingClass {
            matrix: Psl2::IDENTITY,
            klein: tag,
        }
    }

    /// The four Klein tags, identity first.
    pub fn klein_tags() -> [[bool; 2]; 4] {
        [[false, false], [true, false], [false, true], [true, true]]
    }

    pub fn act_on_slope(&self, s: Slope) -> Slope {
        self.matrix.act_on_slope(s)
    }

    pub fn act_on_edge(&self, e: FareyEdge) -> FareyEdge {
        self.matrix.act_on_edge(e)
    }

    /// Multiplies every marking vector by the matrix; the pairing is unchanged.
    pub fn act_on_track(&self, t: &TrainTrack) -> TrainTrack {
        t.with_marking(t.marking().transform(self.matrix.entries()))
            .expect("a unimodular transform keeps a valid marking")
    }

    pub fn order(&self) -> usize {
        let mut g = *self;
        let mut n = 1;
        while g != MappingClass::IDENTITY {
            g = g * *self;
            n += 1;
        }
        n
    }
}

impl Mul for MappingClass {
    type Output = MappingClass;

    fn mul(self, o: MappingClass) -> MappingClass {
        MappingClass {
            matrix: self.matrix * o.matrix,
            klein: [self.klein[0] ^ o.klein[0], self.klein[1] ^ o.klein[1]],
        }
    }
}

impl fmt::Display for MappingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.matrix)?;
        if self.klein != [false; 2] {
            write!(f, "|{}{}", self.klein[0] as u8, self.klein[1] as u8)?;
        }
        Ok(())
    }
}

/// The track `g . t` for a matrix `g`.
pub fn act(g: Psl2, t: &TrainTrack) -> TrainTrack {
    MappingClass::new(g).act_on_track(t)
}

/// The model elements for a matrix: one for `S(1,1)`, four for `S(0,4)`.
pub fn lifts(surface: SurfaceId, m: Psl2) -> Vec<MappingClass> {
    match surface {
        SurfaceId::S11 => vec![MappingClass::new(m)],
        SurfaceId::S04 => MappingClass::klein_tags()
            .into_iter()
            .map(|k| MappingClass { matrix: m, klein: k })
            .collect(),
    }
}

/// A finite stabilizer with its multiplication table.
#[derive(Clone, Debug, Serialize)]
pub struct Stabilizer {
    pub elements: Vec<MappingClass>,
    /// `table[i][j]` is the index of `elements[i] * elements[j]`.
    pub table: Vec<Vec<usize>>,
}

impl Stabilizer {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_closed(&self) -> bool {
        self.table.iter().all(|row| row.iter().all(|&k| k < self.elements.len()))
    }

    /// Abelian with every non-identity element of order 2.
    pub fn is_elementary_abelian_2(&self) -> bool {
        let n = self.order();
        self.is_closed()
            && (0..n).all(|i| (0..n).all(|j| self.table[i][j] == self.table[j][i]))
            && self.elements.iter().all(|g| *g == MappingClass::IDENTITY || g.order() == 2)
    }
}

/// Model elements with entries bounded by `bound` fixing the canonical key of `t`.
pub fn stabilizer_in_model(surface: SurfaceId, t: &TrainTrack, bound: i64) -> Stabilizer {
    let key = t.canonical_key();
    let fixing: Vec<Psl2> = Psl2::enumerate(bound)
        .into_par_iter()
        .filter(|g| MappingClass::new(*g).act_on_track(t).canonical_key() == key)
        .collect();
    let mut elements: Vec<MappingClass> = fixing.into_iter().flat_map(|g| lifts(surface, g)).collect();
    elements.sort();
    let table = elements
        .iter()
        .map(|a| {
            elements
                .iter()
                .map(|b| elements.iter().position(|c| *c == *a * *b).unwrap_or(usize::MAX))
                .collect()
        })
        .collect();
    Stabilizer { elements, table }
}

/// Counts model elements with entries `<= b` moving the center at most `r`,
/// for every `b <= bound`, and requires the count to be unchanged over the
/// last `margin` bounds.
pub fn verify_properly_discontinuous(ball: &ComplexBall, r: usize, bound: i64, margin: i64) -> Report {
    let mut report = Report::new(format!("properly-discontinuous-{}-r{r}", ball.surface), Some(ball.radius));
    if r >= ball.radius {
        report.violation("r must be below the ball radius", json!({"r": r}));
        return report;
    }
    let center = &ball.tracks[0];
    let near: Vec<i64> = Psl2::enumerate(bound)
        .into_par_iter()
        .filter(|g| {
            let k = MappingClass::new(*g).act_on_track(center).canonical_key();
            ball.index_of(&k).is_some_and(|v| ball.depth[v] <= r)
        })
        .map(|g| g.max_entry())
        .collect();
    let per_element = lifts(ball.surface, Psl2::IDENTITY).len();
    let counts: BTreeMap<i64, usize> = (1..=bound)
        .map(|b| (b, near.iter().filter(|&&e| e <= b).count() * per_element))
        .collect();
    let last = counts[&bound];
    let stable = (bound - margin..=bound).all(|b| counts.get(&b) == Some(&last));
    report.require(stable, "count still growing at the bound", json!({"counts": counts}));
    let ball_count = ball.depth.iter().filter(|&&d| d <= r).count();
    report.certified_pairs = ball_count as u64;
    report.detail("r", r);
    report.detail("count", last);
    report.detail("bound", bound);
    report.detail("margin", margin);
    report.detail("max_degree", (0..ball.len()).map(|v| ball.graph.degree(v)).max());
    report
}

/// The two model translates of `seed` lying over `e`.
fn translates_over(seed: &TrainTrack, e: FareyEdge) -> [TrainTrack; 2] {
    let g = Psl2::carrying_base_to(e);
    let s = Psl2::new(0, -1, 1, 0).expect("half-turn");
    [MappingClass::new(g).act_on_track(seed), MappingClass::new(g * s).act_on_track(seed)]
}

/// `S(1,1)`: every ball vertex is a translate of the center. `S(0,4)`: every
/// class-(1) vertex is a translate of the center, and every certified vertex
/// lies within 5 of one.
pub fn verify_cocompact(ball: &ComplexBall, class_one: Option<&ClassKey>) -> Report {
    let mut report = Report::new(format!("cocompact-{}", ball.surface), Some(ball.radius));
    let seed = &ball.tracks[0];
    let targets: Vec<usize> = match (ball.surface, class_one) {
        (SurfaceId::S11, _) => (0..ball.len()).collect(),
        (SurfaceId::S04, Some(c)) => (0..ball.len()).filter(|&v| &ball.tracks[v].class_key() == c).collect(),
        (SurfaceId::S04, None) => {
            report.violation("class (1) required on s04", json!(null));
            return report;
        }
    };
    let misses: Vec<usize> = targets
        .par_iter()
        .copied()
        .filter(|&v| {
            !translates_over(seed, ball.images[v])
                .iter()
                .any(|t| t.canonical_key() == ball.keys[v])
        })
        .collect();
    for v in misses {
        report.violation("vertex not in the orbit of the center", json!({"vertex": ball.keys[v].to_string()}));
    }
    report.detail("orbit_vertices", targets.len());
    if ball.surface == SurfaceId::S04 {
        let is_target: BTreeSet<usize> = targets.iter().copied().collect();
        let dist = distance_to_set(ball, |v| is_target.contains(&v));
        // a path to the nearest target of length <= 5 stays in the ball
        // when the vertex has depth <= R - 5
        let certified: Vec<usize> = (0..ball.len()).filter(|&v| ball.depth[v] + 5 <= ball.radius).collect();
        let mut worst = 0;
        for &v in &certified {
            match dist[v] {
                Some(d) if d <= 5 => worst = worst.max(d),
                d => report.violation("vertex farther than 5 from class (1)", json!({"vertex": ball.keys[v].to_string(), "distance": d})),
            }
        }
        report.certified_pairs = certified.len() as u64;
        report.detail("max_distance_to_t1", worst);
    } else {
        report.certified_pairs = targets.len() as u64;
    }
    report
}

/// `d(gu, gv) = d(u, v)` for the given elements over pairs of vertices of
/// depth `<= inner`, wherever both distances are certified.
pub fn verify_equivariance(ball: &ComplexBall, elements: &[Psl2], inner: usize) -> Report {
    let mut report = Report::new(format!("equivariance-{}", ball.surface), Some(ball.radius));
    let cert = ball.certified();
    let sample: Vec<usize> = (0..ball.len()).filter(|&v| ball.depth[v] <= inner).collect();
    let results: Vec<(u64, Vec<serde_json::Value>)> = elements
        .par_iter()
        .map(|&g| {
            let g = MappingClass::new(g);
            let moved: Vec<Option<usize>> = sample
                .iter()
                .map(|&v| ball.index_of(&g.act_on_track(&ball.tracks[v]).canonical_key()))
                .collect();
            let mut count = 0;
            let mut bad = Vec::new();
            for (i, &u) in sample.iter().enumerate() {
                let Some(gu) = moved[i] else { continue };
                let du = ball.distances_from(u);
                let dgu = ball.distances_from(gu);
                for (j, &v) in sample.iter().enumerate().skip(i + 1) {
                    let Some(gv) = moved[j] else { continue };
                    if let (Certified::Exact(a), Certified::Exact(b)) = (cert.certify(u, v, du[v]), cert.certify(gu, gv, dgu[gv])) {
                        count += 1;
                        if a != b {
                            bad.push(json!({"g": g.to_string(), "u": ball.keys[u].to_string(), "v": ball.keys[v].to_string(), "d": a, "d_moved": b}));
                        }
                    }
                }
            }
            (count, bad)
        })
        .collect();
    for (count, bad) in results {
        report.certified_pairs += count;
        for w in bad {
            report.violation("distance not preserved", w);
        }
    }
    report.require(report.certified_pairs > 0, "no certified pairs", json!({"inner": inner}));
    report
}

/// The orbit map `g -> g . center` from the Cayley ball is a graph
/// isomorphism onto the ball.
pub fn verify_orbit_map(ball: &ComplexBall, cayley: &Graph<Psl2>, root: usize) -> Report {
    let mut report = Report::new("orbit-map", Some(ball.radius));
    let center = &ball.tracks[0];
    let image: Vec<Option<usize>> = cayley
        .labels()
        .par_iter()
        .map(|g| ball.index_of(&MappingClass::new(*g).act_on_track(center).canonical_key()))
        .collect();
    let hit: BTreeSet<usize> = image.iter().flatten().copied().collect();
    report.require(
        image.iter().all(Option::is_some) && hit.len() == ball.len() && cayley.len() == ball.len(),
        "orbit map is not a bijection",
        json!({"cayley": cayley.len(), "ball": ball.len(), "hit": hit.len()}),
    );
    for (a, b) in cayley.edges() {
        if let (Some(x), Some(y)) = (image[a], image[b]) {
            report.require(ball.graph.has_edge(x, y), "edge not preserved", json!({"g": cayley.label(a).to_string(), "h": cayley.label(b).to_string()}));
        }
    }
    report.require(
        cayley.edge_count() == ball.graph.edge_count(),
        "edge counts differ",
        json!({"cayley": cayley.edge_count(), "ball": ball.graph.edge_count()}),
    );
    let dc = bfs_distances(cayley, root);
    let depth_ok = (0..cayley.len()).all(|v| image[v].is_none_or(|x| dc[v] == Some(ball.depth[x])));
    report.require(depth_ok, "orbit map moves depths", json!(null));
    report.certified_pairs = cayley.edge_count() as u64;
    report
}
