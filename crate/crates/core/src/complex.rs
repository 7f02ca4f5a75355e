//! Finite balls of the train track complex and the checks run on them.
//!
//! Vertices are canonical keys of complete marked tracks; edges are single
//! complete splits. A ball of radius `R` contains every vertex within `R` of
//! its center and every edge at a vertex of depth `< R`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::farey::{det_abs, farey_ball, dual_tree, line_graph_distance, resolve_i4_to_edge, FareyEdge, Slope};
use crate::graph::{bfs_distances, rooted_isomorphism, Certified, CertifiedBall, Graph};
use crate::matrix::Psl2;
use crate::measures::slope_pair;
use crate::report::Report;
use crate::splitting::{adjacent, double_splits_unchecked, large_branches, split, Direction, SplitMove, Chirality};
use crate::track::{enumerate_complete, mirror_pairing, class_key, CanonicalKey, ClassKey, SurfaceId, TrainTrack};

pub const MAX_RADIUS_S11: usize = 12;
pub const MAX_RADIUS_S04: usize = 9;

pub fn radius_bound(surface: SurfaceId) -> usize {
    match surface {
        SurfaceId::S11 => MAX_RADIUS_S11,
        SurfaceId::S04 => MAX_RADIUS_S04,
    }
}

/// The Farey edge of a track: its vertex cycles if they are Farey-adjacent,
/// otherwise (on `S(0,4)`, det 2) the edge resolving them.
pub fn project(t: &TrainTrack) -> Result<FareyEdge> {
    let (a, b) = slope_pair(t)?;
    match (det_abs(a, b), t.surface()) {
        (1, _) => Ok(FareyEdge::new(a, b)),
        (2, SurfaceId::S04) => resolve_i4_to_edge(a, b),
        (d, s) => Err(Error::InvalidTrack(format!("vertex cycles {a}, {b} at det {d} on {s}"))),
    }
}

/// A ball of the complex about a seed track.
#[derive(Clone, Debug)]
pub struct ComplexBall {
    pub surface: SurfaceId,
    pub radius: usize,
    /// Vertex `i` in BFS discovery order; vertex 0 is the center.
    pub keys: Vec<CanonicalKey>,
    pub tracks: Vec<TrainTrack>,
    pub depth: Vec<usize>,
    /// Labels are vertex indices.
    pub graph: Graph<usize>,
    /// Directed edges `(t, t')` with `t'` a split of `t`.
    pub splits: BTreeSet<(usize, usize)>,
    pub slopes: Vec<(Slope, Slope)>,
    pub images: Vec<FareyEdge>,
    index: HashMap<CanonicalKey, usize>,
}

impl ComplexBall {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn index_of(&self, key: &CanonicalKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Vertices whose full neighbourhood is in the ball.
    pub fn is_interior(&self, v: usize) -> bool {
        self.depth[v] < self.radius
    }

    pub fn certified(&self) -> CertifiedBall<'_, usize> {
        CertifiedBall::new(&self.graph, 0, self.radius)
    }

    pub fn distances_from(&self, v: usize) -> Vec<Option<usize>> {
        bfs_distances(&self.graph, v)
    }

    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.radius + 1];
        for &d in &self.depth {
            s[d] += 1;
        }
        s
    }

    /// The ball's graph with canonical keys as labels and slope pairs as annotations.
    pub fn labelled(&self) -> (Graph<String>, Vec<String>) {
        let labels: Vec<String> = self.keys.iter().map(ToString::to_string).collect();
        let g = Graph::from_indexed(labels.clone(), self.graph.edges());
        let ann: BTreeMap<&String, String> = labels
            .iter()
            .zip(&self.slopes)
            .map(|(l, (a, b))| (l, format!("{a} {b}")))
            .collect();
        let annotations = g.labels().iter().map(|l| ann[l].clone()).collect();
        (g, annotations)
    }

    pub fn to_json(&self) -> BallJson {
        BallJson {
            surface: self.surface,
            radius: self.radius,
            vertices: (0..self.len())
                .map(|v| BallVertex {
                    key: self.keys[v].to_string(),
                    depth: self.depth[v],
                    slopes: [self.slopes[v].0, self.slopes[v].1],
                    image: self.images[v],
                })
                .collect(),
            edges: self.graph.edges().map(|(a, b)| [a, b]).collect(),
            splits: self.splits.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

/// Stored form of a ball: vertices in BFS order, undirected edges and
/// directed split edges by vertex index.
#[derive(Clone, Debug, Serialize)]
pub struct BallJson {
    pub surface: SurfaceId,
    pub radius: usize,
    pub vertices: Vec<BallVertex>,
    pub edges: Vec<[usize; 2]>,
    pub splits: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BallVertex {
    pub key: String,
    pub depth: usize,
    pub slopes: [Slope; 2],
    pub image: FareyEdge,
}

/// Breadth-first ball of radius `radius` about `seed`. Each level's
/// neighbourhoods are computed in parallel and merged in a fixed order.
pub fn build_ball(seed: &TrainTrack, radius: usize) -> Result<ComplexBall> {
    let surface = seed.surface();
    let bound = radius_bound(surface);
    if radius > bound {
        return Err(Error::RadiusBound {
            radius,
            bound,
            surface: surface.name(),
        });
    }
    if !seed.is_complete() {
        return Err(Error::NotComplete(surface.name()));
    }
    let k0 = seed.canonical_key();
    let mut keys = vec![k0.clone()];
    let mut tracks = vec![seed.clone()];
    let mut depth = vec![0];
    let mut index = HashMap::from([(k0, 0usize)]);
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut splits = BTreeSet::new();
    let mut frontier = vec![0usize];
    for d in 0..radius {
        let found: Vec<Vec<(Direction, CanonicalKey, TrainTrack)>> =
            frontier.par_iter().map(|&v| adjacent(&tracks[v])).collect();
        let mut next = Vec::new();
        for (&v, nbrs) in frontier.iter().zip(found) {
            for (dir, key, track) in nbrs {
                let w = match index.get(&key) {
                    Some(&w) => w,
                    None => {
                        let w = keys.len();
                        index.insert(key.clone(), w);
                        keys.push(key);
                        tracks.push(track);
                        depth.push(d + 1);
                        next.push(w);
                        w
                    }
                };
                if v != w {
                    edges.insert((v.min(w), v.max(w)));
                    splits.insert(match dir {
                        Direction::Split => (v, w),
                        Direction::Fold => (w, v),
                    });
                }
            }
        }
        frontier = next;
    }
    let slopes: Vec<(Slope, Slope)> = tracks.par_iter().map(slope_pair).collect::<Result<_>>()?;
    let images: Vec<FareyEdge> = tracks.par_iter().map(project).collect::<Result<_>>()?;
    let graph = Graph::from_indexed((0..keys.len()).collect(), edges);
    Ok(ComplexBall {
        surface,
        radius,
        keys,
        tracks,
        depth,
        graph,
        splits,
        slopes,
        images,
        index,
    })
}

/// The projection to Farey edges and its fibres.
#[derive(Clone, Debug)]
pub struct FiberMap {
    pub assignment: Vec<FareyEdge>,
    pub fibers: BTreeMap<FareyEdge, Vec<usize>>,
}

/// The fibre map and the image graph: Farey edges hit, joined when some of
/// their preimages are adjacent.
pub fn project_fibers(ball: &ComplexBall) -> (FiberMap, Graph<FareyEdge>) {
    let mut fibers: BTreeMap<FareyEdge, Vec<usize>> = BTreeMap::new();
    for (v, e) in ball.images.iter().enumerate() {
        fibers.entry(*e).or_default().push(v);
    }
    let edges: Vec<(FareyEdge, FareyEdge)> = ball
        .graph
        .edges()
        .map(|(u, v)| (ball.images[u], ball.images[v]))
        .filter(|(a, b)| a != b)
        .collect();
    let image = Graph::from_edges(fibers.keys().copied(), edges);
    (
        FiberMap {
            assignment: ball.images.clone(),
            fibers,
        },
        image,
    )
}

/// Largest certified distance within a fibre, provided every pair is certified.
pub fn fiber_diameter(ball: &ComplexBall, members: &[usize]) -> Certified {
    let cert = ball.certified();
    let mut best = 0;
    for (i, &u) in members.iter().enumerate() {
        let du = ball.distances_from(u);
        for &v in &members[i + 1..] {
            match cert.certify(u, v, du[v]) {
                Certified::Exact(d) => best = best.max(d),
                Certified::Uncertified => return Certified::Uncertified,
            }
        }
    }
    Certified::Exact(best)
}

/// Exact distances from `t` to every vertex within `radius`.
pub fn distance_map(t: &TrainTrack, radius: usize) -> Result<HashMap<CanonicalKey, usize>> {
    let b = build_ball(t, radius)?;
    Ok(b.keys.into_iter().zip(b.depth).collect())
}

/// Exact diameter of a finite vertex set by meeting in the middle: with
/// balls of radius `h` about every member, a pair at distance `d <= 2h` has
/// a common vertex realising `d`.
pub fn set_diameter(members: &[TrainTrack], h: usize) -> Result<Certified> {
    let maps: Vec<HashMap<CanonicalKey, usize>> =
        members.par_iter().map(|t| distance_map(t, h)).collect::<Result<_>>()?;
    let mut best = 0;
    for i in 0..maps.len() {
        for j in i + 1..maps.len() {
            let (a, b) = if maps[i].len() <= maps[j].len() { (&maps[i], &maps[j]) } else { (&maps[j], &maps[i]) };
            let d = a.iter().filter_map(|(k, x)| b.get(k).map(|y| x + y)).min();
            match d {
                Some(d) if d <= 2 * h => best = best.max(d),
                _ => return Ok(Certified::Uncertified),
            }
        }
    }
    Ok(Certified::Exact(best))
}

/// Smallest `h <= bound` certifying the diameter, with the diameter.
pub fn certify_diameter(members: &[TrainTrack], bound: usize) -> Result<Option<(usize, usize)>> {
    for h in 1..=bound {
        if let Certified::Exact(d) = set_diameter(members, h)? {
            return Ok(Some((d, h)));
        }
    }
    Ok(None)
}

/// The fibre over the base edge: for each class met in the ball, the two
/// translates of its first vertex lying over the base edge.
pub fn fiber_over_base(ball: &ComplexBall) -> Vec<TrainTrack> {
    let mut first: BTreeMap<ClassKey, usize> = BTreeMap::new();
    for v in 0..ball.len() {
        first.entry(ball.tracks[v].class_key()).or_insert(v);
    }
    let s = Psl2::new(0, -1, 1, 0).expect("half-turn");
    let mut out: BTreeMap<CanonicalKey, TrainTrack> = BTreeMap::new();
    for &v in first.values() {
        let g = Psl2::carrying_base_to(ball.images[v]).inverse();
        for h in [Psl2::IDENTITY, s] {
            let t = crate::action::act(h * g, &ball.tracks[v]);
            out.entry(t.canonical_key()).or_insert(t);
        }
    }
    out.into_values().collect()
}

/// Fibres of the projection. The fibre over the base edge is built from
/// class translates; every ball vertex must be a translate of one of its
/// members, and the translates over every edge whose whole fibre lies in
/// the ball must match the observed fibre there. Diameters are exact, for
/// the central fibre and for each such edge. With `expected = Some((size, a))`
/// the central fibre must match it.
pub fn verify_fibers(ball: &ComplexBall, expected: Option<(usize, usize)>) -> Result<Report> {
    let mut report = Report::new(format!("fibers-{}", ball.surface), Some(ball.radius));
    let central = fiber_over_base(ball);
    let keys: BTreeSet<CanonicalKey> = central.iter().map(TrainTrack::canonical_key).collect();
    let strays: Vec<usize> = (0..ball.len())
        .into_par_iter()
        .filter(|&v| {
            let g = Psl2::carrying_base_to(ball.images[v]).inverse();
            !keys.contains(&crate::action::act(g, &ball.tracks[v]).canonical_key())
        })
        .collect();
    for v in strays {
        report.violation("vertex is not a translate of the central fibre", json!({"vertex": ball.keys[v].to_string()}));
    }
    let bound = radius_bound(ball.surface);
    let Some((a, h)) = certify_diameter(&central, bound)? else {
        report.violation("central fibre diameter not certified", json!({"size": central.len(), "bound": bound}));
        return Ok(report);
    };
    let size = central.len();
    if let Some((s, d)) = expected {
        report.require((size, a) == (s, d), "central fibre differs from expected", json!({"size": size, "diameter": a}));
    }
    let (fm, _) = project_fibers(ball);
    let mut complete = Vec::new();
    for (e, m) in &fm.fibers {
        let g = Psl2::carrying_base_to(*e);
        let translate: Vec<TrainTrack> = central.iter().map(|t| crate::action::act(g, t)).collect();
        let tk: BTreeSet<CanonicalKey> = translate.iter().map(TrainTrack::canonical_key).collect();
        let seen: BTreeSet<CanonicalKey> = m.iter().map(|&v| ball.keys[v].clone()).collect();
        if tk.iter().all(|k| ball.index_of(k).is_some()) {
            report.require(seen == tk, "observed fibre differs from the translate", json!({"edge": e.to_string()}));
            complete.push((*e, translate));
        }
    }
    let diams: Vec<Certified> = complete
        .par_iter()
        .map(|(_, m)| set_diameter(m, h))
        .collect::<Result<_>>()?;
    for ((e, _), d) in complete.iter().zip(&diams) {
        report.require(*d == Certified::Exact(a), "fibre diameter differs", json!({"edge": e.to_string(), "diameter": d.exact()}));
    }
    report.certified_pairs = (complete.len() * size * (size - 1) / 2) as u64;
    report.detail("complete_edges", complete.len());
    report.detail("fiber_size", size);
    report.detail("fiber_diameter", a);
    report.detail("half_radius", h);
    Ok(report)
}

/// Every edge with a complete, interior fibre has exactly the transported
/// pattern as its image neighbours.
pub fn verify_pattern(ball: &ComplexBall, pattern: &EdgePattern) -> Report {
    let mut report = Report::new(format!("g2-pattern-{}", ball.surface), Some(ball.radius));
    report.require(pattern.is_stabilizer_invariant(), "pattern not invariant under the half-turn", json!(null));
    report.require(pattern.is_symmetric(), "pattern not symmetric", json!(null));
    let (fm, image) = project_fibers(ball);
    let size = fm.fibers[&ball.images[0]].len();
    let mut checked = 0;
    for (e, m) in &fm.fibers {
        if m.len() != size || !m.iter().all(|&v| ball.is_interior(v)) {
            continue;
        }
        checked += 1;
        let v = image.index_of(e).unwrap();
        let seen: BTreeSet<FareyEdge> = image.neighbors(v).iter().map(|&w| *image.label(w)).collect();
        let want: BTreeSet<FareyEdge> = pattern.neighbors(*e).into_iter().collect();
        report.require(seen == want, "image neighbours differ from the pattern", json!({"edge": e.to_string()}));
    }
    report.certified_pairs = checked;
    report.detail("pattern_size", pattern.base.len());
    report.detail("pattern", pattern.base.iter().map(ToString::to_string).collect::<Vec<_>>());
    report
}

/// Breadth-first distances between Farey edges in an implicit graph.
pub fn farey_distances(
    from: FareyEdge,
    max_depth: usize,
    neighbors: &dyn Fn(FareyEdge) -> Vec<FareyEdge>,
) -> HashMap<FareyEdge, usize> {
    let mut dist = HashMap::from([(from, 0usize)]);
    let mut queue = VecDeque::from([from]);
    while let Some(e) = queue.pop_front() {
        let d = dist[&e];
        if d == max_depth {
            continue;
        }
        for f in neighbors(e) {
            if !dist.contains_key(&f) {
                dist.insert(f, d + 1);
                queue.push_back(f);
            }
        }
    }
    dist
}

pub fn g1_neighbors(e: FareyEdge) -> Vec<FareyEdge> {
    e.triangle_neighbors().to_vec()
}

/// The image-graph neighbourhood of the base edge, transported to every edge
/// by `PSL(2, Z)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgePattern {
    pub base: Vec<FareyEdge>,
}

impl EdgePattern {
    pub fn neighbors(&self, e: FareyEdge) -> Vec<FareyEdge> {
        let g = Psl2::carrying_base_to(e);
        self.base.iter().map(|&f| g.act_on_edge(f)).collect()
    }

    /// The pattern is invariant under the half-turn fixing the base edge.
    pub fn is_stabilizer_invariant(&self) -> bool {
        let s = Psl2::new(0, -1, 1, 0).expect("half-turn");
        let set: BTreeSet<FareyEdge> = self.base.iter().copied().collect();
        self.base.iter().all(|&f| set.contains(&s.act_on_edge(f)))
    }

    /// `f` is a neighbour of the base edge iff the base edge is one of `f`'s.
    pub fn is_symmetric(&self) -> bool {
        self.base.iter().all(|&f| self.neighbors(f).contains(&FareyEdge::base()))
    }
}

/// Observed image neighbours of the fibre over the center's edge.
pub fn observed_pattern(ball: &ComplexBall) -> Result<EdgePattern> {
    let e0 = ball.images[0];
    if e0 != FareyEdge::base() {
        return Err(Error::InvalidTrack(format!("center projects to {e0}, not the base edge")));
    }
    let mut set = BTreeSet::new();
    for v in 0..ball.len() {
        if ball.images[v] != e0 {
            continue;
        }
        if !ball.is_interior(v) {
            return Err(Error::InvalidTrack("central fibre reaches the ball boundary".into()));
        }
        for &w in ball.graph.neighbors(v) {
            if ball.images[w] != e0 {
                set.insert(ball.images[w]);
            }
        }
    }
    Ok(EdgePattern {
        base: set.into_iter().collect(),
    })
}

/// Lipschitz and coarse-inverse checks over every certified pair:
/// `d_img <= d_TT <= k * d_img + c`, with `d_img` computed by `image_nbrs`.
pub fn verify_qi(
    ball: &ComplexBall,
    k: usize,
    c: usize,
    image_nbrs: &(dyn Fn(FareyEdge) -> Vec<FareyEdge> + Sync),
) -> Report {
    let mut report = Report::new(format!("qi-{}", ball.surface), Some(ball.radius));
    let r = ball.radius;
    let results: Vec<(u64, Vec<(usize, usize, usize, Option<usize>)>, usize)> = (0..ball.len())
        .into_par_iter()
        .map(|u| {
            let du = ball.distances_from(u);
            let reach = r - ball.depth[u];
            let img = farey_distances(ball.images[u], reach, image_nbrs);
            let mut count = 0;
            let mut bad = Vec::new();
            let mut tight = 0;
            for v in u + 1..ball.len() {
                let Some(d) = du[v] else { continue };
                if ball.depth[u].max(ball.depth[v]) + d > r {
                    continue;
                }
                count += 1;
                let di = img.get(&ball.images[v]).copied();
                match di {
                    Some(di) if d <= k * di + c => {
                        if d == k * di + c {
                            tight += 1;
                        }
                    }
                    _ => bad.push((u, v, d, di)),
                }
            }
            (count, bad, tight)
        })
        .collect();
    let mut tight = 0;
    for (count, bad, t) in results {
        report.certified_pairs += count;
        tight += t;
        for (u, v, d, di) in bad {
            report.violation(
                "distance inequality fails",
                json!({"u": ball.keys[u].to_string(), "v": ball.keys[v].to_string(), "d_tt": d, "d_image": di}),
            );
        }
    }
    report.detail("k", k);
    report.detail("c", c);
    report.detail("tight_pairs", tight);
    report
}

/// Ball of radius `radius` about the identity in the Cayley graph of
/// `PSL(2, Z)` for `{r, l}`; edges `g -- g s`.
pub fn cayley_ball_psl2z(radius: usize) -> (Graph<Psl2>, usize) {
    let mut depth = HashMap::from([(Psl2::IDENTITY, 0usize)]);
    let mut order = vec![Psl2::IDENTITY];
    let mut edges = Vec::new();
    let mut frontier = vec![Psl2::IDENTITY];
    for d in 0..radius {
        let mut next = Vec::new();
        for g in &frontier {
            for s in Psl2::generators() {
                let h = *g * s;
                if !depth.contains_key(&h) {
                    depth.insert(h, d + 1);
                    order.push(h);
                    next.push(h);
                }
                edges.push((*g, h));
            }
        }
        frontier = next;
    }
    let g = Graph::from_edges(order, edges);
    let root = g.index_of(&Psl2::IDENTITY).unwrap();
    (g, root)
}

/// Rooted isomorphism from the ball's graph (root = center) to the Cayley ball.
pub fn verify_cayley_isomorphism(ball: &ComplexBall, cayley: &Graph<Psl2>, root: usize) -> Option<Vec<usize>> {
    rooted_isomorphism(&ball.graph, 0, cayley, root)
}

/// The ball of radius `r` about `root` in `g`: vertices within `r`, edges at
/// a vertex closer than `r`.
pub fn truncate<L: Clone + Ord + std::hash::Hash>(g: &Graph<L>, root: usize, r: usize) -> (Graph<L>, usize) {
    let d = bfs_distances(g, root);
    let within = |v: usize| d[v].is_some_and(|x| x <= r);
    let keep: Vec<usize> = (0..g.len()).filter(|&v| within(v)).collect();
    let labels: Vec<L> = keep.iter().map(|&v| g.label(v).clone()).collect();
    let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let edges = g
        .edges()
        .filter(|&(a, b)| within(a) && within(b) && (d[a].unwrap() < r || d[b].unwrap() < r))
        .map(|(a, b)| (pos[&a], pos[&b]));
    let t = Graph::from_indexed(labels, edges);
    let new_root = t.index_of(g.label(root)).unwrap();
    (t, new_root)
}

/// The line graph of the dual tree of the depth-`depth` Farey ball, each
/// vertex labelled by the Farey edge its two triangles share.
pub fn edge_line_graph(depth: usize) -> Result<Graph<FareyEdge>> {
    let line = dual_tree(&farey_ball(depth)?).line_graph();
    let shared: Vec<FareyEdge> = line
        .labels()
        .iter()
        .map(|(a, b)| {
            let ea: BTreeSet<FareyEdge> = a.edges().into_iter().collect();
            b.edges().into_iter().find(|e| ea.contains(e)).expect("adjacent triangles share an edge")
        })
        .collect();
    Ok(Graph::from_indexed(shared, line.edges()))
}

/// Compares the image graph near the base edge with the line graph of the
/// dual tree: as labelled graphs and by rooted isomorphism.
pub fn verify_line_graph_structure(ball: &ComplexBall) -> Report {
    let mut report = Report::new("g1-line-graph", Some(ball.radius));
    let (fm, image) = project_fibers(ball);
    let base = FareyEdge::base();
    let Some(root) = image.index_of(&base) else {
        report.violation("base edge not in the image", json!(null));
        return report;
    };
    // an image vertex is interior when its whole fibre is present and interior
    let interior = |e: &FareyEdge| {
        fm.fibers
            .get(e)
            .is_some_and(|m| m.len() == 2 && m.iter().all(|&v| ball.is_interior(v)))
    };
    let d = bfs_distances(&image, root);
    let mut rho = usize::MAX;
    for v in 0..image.len() {
        if !interior(image.label(v)) {
            rho = rho.min(d[v].unwrap_or(usize::MAX));
        }
    }
    rho = rho.min(crate::farey::MAX_FAREY_DEPTH - 2);
    if rho < 2 {
        report.violation("image ball too small", json!({"rho": rho}));
        return report;
    }
    let (gi, ri) = truncate(&image, root, rho);
    let line = edge_line_graph(rho + 2).expect("depth within bound");
    let lroot = line.index_of(&base).expect("base edge in line graph");
    let (gl, rl) = truncate(&line, lroot, rho);
    let same_labels = gi.labels() == gl.labels() && gi.edges().collect::<Vec<_>>() == gl.edges().collect::<Vec<_>>();
    report.require(same_labels, "image ball differs from the line-graph ball", json!({"rho": rho}));
    let iso = rooted_isomorphism(&gi, ri, &gl, rl);
    report.require(iso.is_some(), "no rooted isomorphism", json!({"rho": rho}));
    let di = bfs_distances(&gi, ri);
    let mut interior_degrees = BTreeSet::new();
    for v in 0..gi.len() {
        if di[v].is_some_and(|x| x < rho) {
            interior_degrees.insert(gi.degree(v));
        }
    }
    report.require(
        interior_degrees.iter().all(|&k| k == 4),
        "interior degree is not 4",
        json!({"degrees": interior_degrees}),
    );
    // 3-cliques are exactly the Farey triangles
    let mut cliques = 0;
    for (a, b) in gi.edges() {
        for &c in gi.neighbors(a) {
            if c > b && gi.has_edge(b, c) {
                cliques += 1;
                let slopes: BTreeSet<Slope> = [a, b, c].iter().flat_map(|&v| [gi.label(v).0, gi.label(v).1]).collect();
                report.require(slopes.len() == 3, "3-clique is not a Farey triangle", json!({"slopes": slopes.len()}));
            }
        }
    }
    report.detail("rho", rho);
    report.detail("vertices", gi.len());
    report.detail("triangles", cliques);
    report
}

/// How two Farey edges sit relative to each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FareyRelation {
    Same,
    Adjacent,
    NextButOne,
}

impl FareyRelation {
    pub fn between(a: FareyEdge, b: FareyEdge) -> Option<FareyRelation> {
        match line_graph_distance(a, b, 2)? {
            0 => Some(FareyRelation::Same),
            1 => Some(FareyRelation::Adjacent),
            _ => Some(FareyRelation::NextButOne),
        }
    }
}

/// Expected `(class of t, class of split, relation of projections)` triples
/// for the classes (1)-(8) of `S(0,4)`.
pub const SPLIT_RELATIONS: [(u8, u8, FareyRelation); 10] = [
    (1, 2, FareyRelation::Adjacent),
    (2, 1, FareyRelation::Same),
    (3, 2, FareyRelation::Same),
    (4, 3, FareyRelation::Adjacent),
    (5, 4, FareyRelation::Adjacent),
    (5, 5, FareyRelation::NextButOne),
    (6, 3, FareyRelation::Adjacent),
    (6, 6, FareyRelation::Adjacent),
    (7, 6, FareyRelation::Same),
    (8, 7, FareyRelation::Adjacent),
];

/// Labels (1)-(8) of the `S(0,4)` classes, shared by mirror pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassLabels {
    pub labels: BTreeMap<ClassKey, u8>,
    pub amphichiral: BTreeSet<u8>,
}

impl ClassLabels {
    pub fn label(&self, k: &ClassKey) -> Option<u8> {
        self.labels.get(k).copied()
    }

    /// The class-key of label (1).
    pub fn class_one(&self) -> ClassKey {
        self.labels.iter().find(|(_, &l)| l == 1).map(|(k, _)| k.clone()).expect("label 1 assigned")
    }
}

/// Split relations observed from marked class representatives, grouped by
/// mirror class (indexed by sorted minimal key).
fn observed_relations(reps: &[TrainTrack]) -> Result<(Vec<ClassKey>, BTreeSet<(usize, usize, FareyRelation)>, Vec<bool>)> {
    let mirror_class = |k: &ClassKey| {
        let p: Vec<usize> = k.0.iter().map(|&x| x as usize).collect();
        k.clone().min(class_key(&mirror_pairing(&p)))
    };
    let groups: Vec<ClassKey> = reps
        .iter()
        .map(|t| mirror_class(&t.class_key()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let idx = |k: &ClassKey| groups.iter().position(|g| g == &mirror_class(k)).unwrap();
    let amph: Vec<bool> = groups
        .iter()
        .map(|g| {
            let p: Vec<usize> = g.0.iter().map(|&x| x as usize).collect();
            class_key(&mirror_pairing(&p)) == *g
        })
        .collect();
    let mut rel = BTreeSet::new();
    for t in reps {
        let e = project(t)?;
        for b in large_branches(t) {
            for c in Chirality::BOTH {
                if let Some(s) = split(t, SplitMove { branch: b, chirality: c })?.into_track() {
                    let r = FareyRelation::between(e, project(&s)?)
                        .ok_or_else(|| Error::InvalidTrack("split moves the projection too far".into()))?;
                    rel.insert((idx(&t.class_key()), idx(&s.class_key()), r));
                }
            }
        }
    }
    Ok((groups, rel, amph))
}

/// The unique labelling of mirror classes by (1)-(8) under which the
/// observed split relations are exactly [`SPLIT_RELATIONS`], with the
/// amphichiral classes labelled among (1), (4), (8).
pub fn derive_class_labels(reps: &[TrainTrack]) -> Result<ClassLabels> {
    let (groups, observed, amph) = observed_relations(reps)?;
    if groups.len() != 8 {
        return Err(Error::InvalidTrack(format!("{} mirror classes, expected 8", groups.len())));
    }
    let expected: BTreeSet<(u8, u8, FareyRelation)> = SPLIT_RELATIONS.iter().copied().collect();
    let mut found: Vec<Vec<usize>> = Vec::new();
    for perm in crate::track::permutations(8) {
        // perm[g] + 1 is the label of mirror class g
        let ok_amph = (0..8).all(|g| amph[g] == [1, 4, 8].contains(&(perm[g] + 1)));
        if !ok_amph {
            continue;
        }
        let mapped: BTreeSet<(u8, u8, FareyRelation)> = observed
            .iter()
            .map(|&(a, b, r)| ((perm[a] + 1) as u8, (perm[b] + 1) as u8, r))
            .collect();
        if mapped == expected {
            found.push(perm);
        }
    }
    if found.len() != 1 {
        return Err(Error::InvalidTrack(format!("{} labellings match the split relations", found.len())));
    }
    let perm = &found[0];
    let mut labels = BTreeMap::new();
    for t in reps {
        let k = t.class_key();
        let p: Vec<usize> = k.0.iter().map(|&x| x as usize).collect();
        let g = groups.iter().position(|g| *g == k.clone().min(class_key(&mirror_pairing(&p)))).unwrap();
        labels.insert(k, (perm[g] + 1) as u8);
    }
    let amphichiral = (0..8).filter(|&g| amph[g]).map(|g| (perm[g] + 1) as u8).collect();
    Ok(ClassLabels { labels, amphichiral })
}

/// Every directed split edge of the ball matches a row of
/// [`SPLIT_RELATIONS`], and every row occurs.
pub fn verify_split_relations(ball: &ComplexBall, labels: &ClassLabels) -> Report {
    let mut report = Report::new("table1", Some(ball.radius));
    let expected: BTreeSet<(u8, u8, FareyRelation)> = SPLIT_RELATIONS.iter().copied().collect();
    let mut seen: BTreeMap<(u8, u8, FareyRelation), usize> = BTreeMap::new();
    for &(u, v) in &ball.splits {
        let (Some(a), Some(b)) = (
            labels.label(&ball.tracks[u].class_key()),
            labels.label(&ball.tracks[v].class_key()),
        ) else {
            report.violation("unlabelled class", json!({"u": u, "v": v}));
            continue;
        };
        match FareyRelation::between(ball.images[u], ball.images[v]) {
            Some(r) if expected.contains(&(a, b, r)) => *seen.entry((a, b, r)).or_insert(0) += 1,
            r => report.violation(
                "split edge not in the table",
                json!({"from": a, "to": b, "relation": r, "u": ball.keys[u].to_string(), "v": ball.keys[v].to_string()}),
            ),
        }
    }
    for row in &expected {
        report.require(seen.contains_key(row), "table row never observed", json!({"row": row}));
    }
    report.certified_pairs = ball.splits.len() as u64;
    report.detail(
        "witnesses",
        seen.iter().map(|((a, b, r), n)| json!({"from": a, "to": b, "relation": r, "count": n})).collect::<Vec<_>>(),
    );
    report
}

/// The class-(1) vertices of the ball with double-split edges. Labels are
/// ball vertex indices.
pub fn t1_subgraph(ball: &ComplexBall, class_one: &ClassKey) -> Result<Graph<usize>> {
    if ball.surface != SurfaceId::S04 {
        return Err(Error::WrongSurface { expected: "s04" });
    }
    let verts: Vec<usize> = (0..ball.len()).filter(|&v| &ball.tracks[v].class_key() == class_one).collect();
    let found: Vec<Vec<usize>> = verts
        .par_iter()
        .map(|&v| {
            double_splits_unchecked(&ball.tracks[v])
                .into_iter()
                .filter_map(|d| ball.index_of(&d.key))
                .collect()
        })
        .collect();
    let edges: Vec<(usize, usize)> = verts
        .iter()
        .zip(found)
        .flat_map(|(&v, ws)| ws.into_iter().map(move |w| (v, w)))
        .collect();
    Ok(Graph::from_edges(verts, edges))
}

/// Distance from every ball vertex to the nearest vertex satisfying `target`,
/// within the ball.
pub fn distance_to_set(ball: &ComplexBall, target: impl Fn(usize) -> bool) -> Vec<Option<usize>> {
    let mut dist = vec![None; ball.len()];
    let mut queue = VecDeque::new();
    for v in 0..ball.len() {
        if target(v) {
            dist[v] = Some(0);
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        let d = dist[v].unwrap();
        for &w in ball.graph.neighbors(v) {
            if dist[w].is_none() {
                dist[w] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Exact distance from `t` to the nearest track whose class key is `class`,
/// by breadth-first search from `t` up to `max` steps.
pub fn distance_to_class(t: &TrainTrack, class: &ClassKey, max: usize) -> Option<usize> {
    if &t.class_key() == class {
        return Some(0);
    }
    let mut seen = BTreeSet::from([t.canonical_key()]);
    let mut frontier = vec![t.clone()];
    for d in 1..=max {
        let mut next = Vec::new();
        for s in &frontier {
            for (_, key, n) in adjacent(s) {
                if &n.class_key() == class {
                    return Some(d);
                }
                if seen.insert(key) {
                    next.push(n);
                }
            }
        }
        frontier = next;
    }
    None
}

/// Every large branch of every ball track has a complete split.
pub fn verify_split_totality(ball: &ComplexBall) -> Report {
    let mut report = Report::new(format!("split-totality-{}", ball.surface), Some(ball.radius));
    let bad: Vec<(usize, usize)> = (0..ball.len())
        .into_par_iter()
        .flat_map_iter(|v| {
            let t = &ball.tracks[v];
            large_branches(t)
                .into_iter()
                .filter(|&b| {
                    Chirality::BOTH.iter().all(|&c| {
                        split(t, SplitMove { branch: b, chirality: c })
                            .map(|o| o.track().is_none())
                            .unwrap_or(true)
                    })
                })
                .map(move |b| (v, b))
                .collect::<Vec<_>>()
        })
        .collect();
    let checked: usize = ball.tracks.iter().map(|t| large_branches(t).len()).sum();
    for (v, b) in bad {
        report.violation("no complete split", json!({"track": ball.keys[v].to_string(), "branch": b}));
    }
    report.certified_pairs = checked as u64;
    report.detail("tracks", ball.len());
    report
}

/// Unmarked class summary for the enumeration suite.
#[derive(Clone, Debug, Serialize)]
pub struct ClassInfo {
    pub key: String,
    pub switches: usize,
    pub branches: usize,
    pub large_branches: usize,
    pub amphichiral: bool,
    pub mirror: String,
}

pub fn class_table(surface: SurfaceId) -> Vec<ClassInfo> {
    enumerate_complete(surface)
        .iter()
        .map(|t| {
            let k = t.class_key();
            let m = class_key(&mirror_pairing(t.pairing()));
            ClassInfo {
                key: k.to_string(),
                switches: t.switch_count(),
                branches: t.branch_count(),
                large_branches: t.large_darts().len(),
                amphichiral: m == k,
                mirror: m.to_string(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{s04_seed, s11_seed};

    #[test]
    fn s11_ball_radius_one() {
        let b = build_ball(&s11_seed(), 1).unwrap();
        assert_eq!(b.len(), 5);
        assert_eq!(b.graph.degree(0), 4);
        assert_eq!(b.splits.iter().filter(|&&(u, _)| u == 0).count(), 2);
    }

    #[test]
    fn radius_bounds() {
        assert!(matches!(
            build_ball(&s11_seed(), MAX_RADIUS_S11 + 1),
            Err(Error::RadiusBound { .. })
        ));
    }

    #[test]
    fn cayley_small() {
        let (g, r) = cayley_ball_psl2z(1);
        assert_eq!(g.len(), 5);
        assert_eq!(g.degree(r), 4);
        let (g3, r3) = cayley_ball_psl2z(3);
        let b = build_ball(&s11_seed(), 3).unwrap();
        assert!(verify_cayley_isomorphism(&b, &g3, r3).is_some());
        // removing an edge breaks it
        let mut edges: Vec<(usize, usize)> = b.graph.edges().collect();
        edges.pop();
        let broken = Graph::from_indexed((0..b.len()).collect(), edges);
        assert!(rooted_isomorphism(&broken, 0, &g3, r3).is_none());
    }

    #[test]
    fn s11_fibres() {
        let b = build_ball(&s11_seed(), 6).unwrap();
        let r = verify_fibers(&b, Some((2, 3))).unwrap();
        assert!(r.passed, "{}", r.to_json());
        assert!(r.details["complete_edges"].as_u64().unwrap() > 1);
    }

    #[test]
    fn pattern_of_s11_is_g1() {
        let b = build_ball(&s11_seed(), 5).unwrap();
        let p = observed_pattern(&b).unwrap();
        let mut g1 = g1_neighbors(FareyEdge::base());
        g1.sort();
        assert_eq!(p.base, g1);
        assert!(p.is_stabilizer_invariant() && p.is_symmetric());
    }

    #[test]
    fn labels_are_unique() {
        let l = derive_class_labels(&crate::fixtures::s04_representatives()).unwrap();
        assert_eq!(l.labels.len(), 13);
        assert_eq!(l.amphichiral, BTreeSet::from([1, 4, 8]));
        assert_eq!(s04_seed().class_key(), l.class_one());
    }
}
