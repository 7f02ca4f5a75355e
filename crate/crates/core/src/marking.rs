//! Twisted `Z^2` markings.
//!
//! A marking assigns to every half-branch `h` a [`Transit`] describing the walk
//! from `h` across its branch to `pairing[h]`. Curves are traced on a two-sheeted
//! cover: leaving a switch on sheet `s` adds `(-1)^s * vector` and crossing a
//! branch with `flip` set swaps sheets. On `S(1,1)` every flip is clear and the
//! vectors are homology classes; on `S(0,4)` the sheets are those of the torus
//! double cover and the vectors live in the cover's homology.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{integer_kernel, solve_mod2};
use crate::track::{faces, sigma, switch_of};

/// The marking datum carried by one oriented branch traversal.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Transit {
    pub vector: [i64; 2],
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub flip: bool,
}

impl Transit {
    pub const ZERO: Transit = Transit {
        vector: [0, 0],
        flip: false,
    };

    pub fn new(vector: [i64; 2], flip: bool) -> Self {
        Transit { vector, flip }
    }

    /// The same branch walked the other way.
    pub fn reverse(self) -> Self {
        let s = if self.flip { 1 } else { -1 };
        Transit {
            vector: [s * self.vector[0], s * self.vector[1]],
            flip: self.flip,
        }
    }

    fn map(self, f: impl Fn([i64; 2]) -> [i64; 2]) -> Self {
        Transit {
            vector: f(self.vector),
            flip: self.flip,
        }
    }
}

fn sign(sheet: bool) -> i64 {
    if sheet {
        -1
    } else {
        1
    }
}

/// Per-half-branch transits with `m[pairing[h]] = m[h].reverse()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Marking {
    transits: Vec<Transit>,
}

impl Marking {
    pub fn zero(half_branches: usize) -> Self {
        Marking {
            transits: vec![Transit::ZERO; half_branches],
        }
    }

    /// Builds a marking from one transit per branch, each read from the lower
    /// half-branch of the branch.
    pub fn from_branches(pairing: &[usize], mut per_branch: impl FnMut(usize, usize) -> Transit) -> Self {
        let mut transits = vec![Transit::ZERO; pairing.len()];
        let mut b = 0;
        for h in 0..pairing.len() {
            if h < pairing[h] {
                let t = per_branch(b, h);
                transits[h] = t;
                transits[pairing[h]] = t.reverse();
                b += 1;
            }
        }
        Marking { transits }
    }

    /// Wraps raw per-half-branch transits after checking reversal consistency.
    pub fn from_transits(pairing: &[usize], transits: Vec<Transit>) -> Result<Self> {
        if transits.len() != pairing.len() {
            return Err(Error::Marking(format!(
                "{} transits for {} half-branches",
                transits.len(),
                pairing.len()
            )));
        }
        for h in 0..pairing.len() {
            if transits[pairing[h]] != transits[h].reverse() {
                return Err(Error::Marking(format!("transit at {h} is not reversed at {}", pairing[h])));
            }
        }
        Ok(Marking { transits })
    }

    pub fn get(&self, h: usize) -> Transit {
        self.transits[h]
    }

    pub fn transits(&self) -> &[Transit] {
        &self.transits
    }

    pub fn is_twisted(&self) -> bool {
        self.transits.iter().any(|t| t.flip)
    }

    /// Total transit of walking the half-branches in `path` in order, starting
    /// on sheet 0.
    pub fn compose(&self, path: &[usize]) -> Transit {
        let mut v = [0i64; 2];
        let mut sheet = false;
        for &h in path {
            let t = self.transits[h];
            let s = sign(sheet);
            v[0] += s * t.vector[0];
            v[1] += s * t.vector[1];
            sheet ^= t.flip;
        }
        Transit { vector: v, flip: sheet }
    }

    /// Renumbers half-branches: the transit at `h` moves to `f(h)`.
    pub fn relabel(&self, f: impl Fn(usize) -> usize) -> Self {
        let mut transits = vec![Transit::ZERO; self.transits.len()];
        for (h, t) in self.transits.iter().enumerate() {
            transits[f(h)] = *t;
        }
        Marking { transits }
    }

    /// Applies the integer matrix `[[a, b], [c, d]]` to every vector.
    pub fn transform(&self, m: [i64; 4]) -> Self {
        let [a, b, c, d] = m;
        Marking {
            transits: self
                .transits
                .iter()
                .map(|t| t.map(|[x, y]| [a * x + b * y, c * x + d * y]))
                .collect(),
        }
    }

    /// Gauge transformation: relabel the sheets at switch `v` when `flips[v]`,
    /// then add the coboundary of `shifts`.
    pub fn gauge(&self, pairing: &[usize], flips: &[bool], shifts: &[[i64; 2]]) -> Self {
        let transits = (0..pairing.len())
            .map(|h| {
                let (v, w) = (switch_of(h), switch_of(pairing[h]));
                let t = self.transits[h];
                let s = sign(flips[v]);
                let flip = flips[v] ^ t.flip ^ flips[w];
                let tw = sign(flip);
                Transit {
                    vector: [
                        s * t.vector[0] + tw * shifts[w][0] - shifts[v][0],
                        s * t.vector[1] + tw * shifts[w][1] - shifts[v][1],
                    ],
                    flip,
                }
            })
            .collect();
        Marking { transits }
    }

    /// Gauge so that the branch through `h` reads zero, changing only the
    /// switch at `pairing[h]`. The branch must join distinct switches.
    pub fn zero_branch(&self, pairing: &[usize], h: usize) -> Self {
        let n = pairing.len() / 3;
        let z = switch_of(pairing[h]);
        debug_assert_ne!(z, switch_of(h));
        let mut flips = vec![false; n];
        flips[z] = self.transits[h].flip;
        let flipped = self.gauge(pairing, &flips, &vec![[0, 0]; n]);
        let t = flipped.transits[h];
        let mut shifts = vec![[0, 0]; n];
        shifts[z] = [-t.vector[0], -t.vector[1]];
        flipped.gauge(pairing, &vec![false; n], &shifts)
    }

    /// Gauge-invariant normal form: one `[x, y, flip]` triple per branch (in
    /// lower-half-branch order) after straightening along a BFS tree from
    /// switch 0. Requires a connected pairing.
    pub fn normal_form(&self, pairing: &[usize]) -> Vec<[i64; 3]> {
        let n = pairing.len() / 3;
        let mut best: Option<Vec<[i64; 3]>> = None;
        for root_sheet in [false, true] {
            let mut sh = vec![None; n];
            let mut f = vec![[0i64; 2]; n];
            sh[0] = Some(root_sheet);
            let mut queue = VecDeque::from([0usize]);
            while let Some(v) = queue.pop_front() {
                for h in 3 * v..3 * v + 3 {
                    let w = switch_of(pairing[h]);
                    if sh[w].is_none() {
                        let t = self.transits[h];
                        let sv = sh[v].unwrap();
                        let s = sign(sv);
                        sh[w] = Some(sv ^ t.flip);
                        f[w] = [f[v][0] - s * t.vector[0], f[v][1] - s * t.vector[1]];
                        queue.push_back(w);
                    }
                }
            }
            let flips: Vec<bool> = sh.iter().map(|s| s.expect("connected pairing")).collect();
            let g = self.gauge(pairing, &flips, &f);
            let mut arr: Vec<[i64; 3]> = (0..pairing.len())
                .filter(|&h| h < pairing[h])
                .map(|h| {
                    let t = g.transits[h];
                    [t.vector[0], t.vector[1], i64::from(t.flip)]
                })
                .collect();
            // a constant half-period shift moves every twisted branch by the same vector
            if let Some(x) = arr.iter().find(|x| x[2] == 1).copied() {
                for y in arr.iter_mut().filter(|y| y[2] == 1) {
                    y[0] -= x[0];
                    y[1] -= x[1];
                }
            }
            if best.as_ref().is_none_or(|b| arr < *b) {
                best = Some(arr);
            }
        }
        best.unwrap()
    }
}

/// Derives an integral marking from the ribbon structure alone: a basis of
/// `H^1` of the closed torus (for `S(1,1)`) or of the torus double cover
/// branched over the punctures (for `S(0,4)`), as a cochain anti-invariant
/// under the deck involution. The basis is arbitrary up to `GL(2, Z)`.
pub fn derive_marking(pairing: &[usize], twisted: bool) -> Result<Marking> {
    if twisted {
        derive_twisted(pairing)
    } else {
        derive_untwisted(pairing)
    }
}

fn lower_sign(pairing: &[usize], h: usize) -> i64 {
    if h < pairing[h] {
        1
    } else {
        -1
    }
}

fn derive_untwisted(pairing: &[usize]) -> Result<Marking> {
    let n = pairing.len();
    let edge_of = branch_index(pairing);
    let nb = n / 2;
    let tree = spanning_tree(n / 3, |v| (3 * v..3 * v + 3).map(|h| (edge_of[h], switch_of(pairing[h]))).collect());
    let nontree: Vec<usize> = (0..nb).filter(|b| !tree.contains(b)).collect();
    let rows: Vec<Vec<i64>> = faces(pairing)
        .iter()
        .map(|face| {
            let mut r = vec![0; nontree.len()];
            for &h in &face.walk {
                if let Some(j) = nontree.iter().position(|&b| b == edge_of[h]) {
                    r[j] += lower_sign(pairing, h);
                }
            }
            r
        })
        .collect();
    let kernel = integer_kernel(&rows, nontree.len());
    if kernel.len() != 2 {
        return Err(Error::Marking(format!("cohomology has rank {}, expected 2", kernel.len())));
    }
    let mut per_branch = vec![[0i64; 2]; nb];
    for (j, &b) in nontree.iter().enumerate() {
        per_branch[b] = [kernel[0][j], kernel[1][j]];
    }
    Ok(Marking::from_branches(pairing, |b, _| Transit::new(per_branch[b], false)))
}

/// Branch index of every half-branch, branches ordered by lower half-branch.
pub fn branch_index(pairing: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; pairing.len()];
    let mut b = 0;
    for h in 0..pairing.len() {
        if h < pairing[h] {
            idx[h] = b;
            idx[pairing[h]] = b;
            b += 1;
        }
    }
    idx
}

/// BFS spanning tree from vertex 0; `out(v)` lists `(edge, endpoint)` pairs.
/// Returns the tree edges.
fn spanning_tree(vertices: usize, out: impl Fn(usize) -> Vec<(usize, usize)>) -> Vec<usize> {
    let mut seen = vec![false; vertices];
    seen[0] = true;
    let mut tree = Vec::new();
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for (e, w) in out(v) {
            if !seen[w] {
                seen[w] = true;
                tree.push(e);
                queue.push_back(w);
            }
        }
    }
    tree
}

/// Sheet flips making every complementary region lift to two regions that
/// each close up on the cover: each region boundary must cross an odd number
/// of flipped branch sides.
fn solve_flips(pairing: &[usize]) -> Result<Vec<bool>> {
    let edge_of = branch_index(pairing);
    let nb = pairing.len() / 2;
    let fs = faces(pairing);
    let rows: Vec<Vec<u8>> = fs
        .iter()
        .map(|face| {
            let mut r = vec![0u8; nb];
            for &h in &face.walk {
                r[edge_of[h]] ^= 1;
            }
            r
        })
        .collect();
    let x = solve_mod2(&rows, &vec![1; fs.len()], nb)
        .ok_or_else(|| Error::Marking("no double cover branched at every region".into()))?;
    Ok(x.into_iter().map(|b| b == 1).collect())
}

fn derive_twisted(pairing: &[usize]) -> Result<Marking> {
    let n = pairing.len();
    let ns = n / 3;
    let edge_of = branch_index(pairing);
    let eps = solve_flips(pairing)?;
    let flip = |h: usize| eps[edge_of[h]];
    // lifted half-branch (h, s) is index 2h + s; lifted switch (v, s) is 2v + s
    let lp = |h: usize, s: usize| (pairing[h], s ^ usize::from(flip(h)));
    let lsw = |(h, s): (usize, usize)| 2 * switch_of(h) + s;

    // lifted faces
    let mut seen = vec![false; 2 * n];
    let mut lfaces: Vec<Vec<(usize, usize)>> = Vec::new();
    for h in 0..n {
        for s in 0..2 {
            if seen[2 * h + s] {
                continue;
            }
            let mut walk = Vec::new();
            let mut cur = (h, s);
            while !seen[2 * cur.0 + cur.1] {
                seen[2 * cur.0 + cur.1] = true;
                walk.push(cur);
                let d = lp(cur.0, cur.1);
                cur = (sigma(d.0), d.1);
            }
            lfaces.push(walk);
        }
    }
    // lifted edges, oriented from the smaller lifted half-branch
    let mut edge_id = vec![(0usize, 0i64); 2 * n];
    let mut edges = 0;
    for h in 0..n {
        for s in 0..2 {
            let d = lp(h, s);
            if (h, s) < d {
                edge_id[2 * h + s] = (edges, 1);
                edge_id[2 * d.0 + d.1] = (edges, -1);
                edges += 1;
            }
        }
    }
    let chi = 2 * ns as i64 - edges as i64 + lfaces.len() as i64;
    if chi != 0 {
        return Err(Error::Marking(format!("double cover has Euler characteristic {chi}, expected 0")));
    }
    let tree = spanning_tree(2 * ns, |v| {
        let (sw, s) = (v / 2, v % 2);
        (3 * sw..3 * sw + 3).map(|h| (edge_id[2 * h + s].0, lsw(lp(h, s)))).collect()
    });
    let nontree: Vec<usize> = (0..edges).filter(|e| !tree.contains(e)).collect();
    let rows: Vec<Vec<i64>> = lfaces
        .iter()
        .map(|walk| {
            let mut r = vec![0; nontree.len()];
            for &(h, s) in walk {
                let (e, sg) = edge_id[2 * h + s];
                if let Some(j) = nontree.iter().position(|&x| x == e) {
                    r[j] += sg;
                }
            }
            r
        })
        .collect();
    let kernel = integer_kernel(&rows, nontree.len());
    if kernel.len() != 2 {
        return Err(Error::Marking(format!("cover cohomology has rank {}, expected 2", kernel.len())));
    }
    let mut m = vec![[0i64; 2]; edges];
    for (j, &e) in nontree.iter().enumerate() {
        m[e] = [kernel[0][j], kernel[1][j]];
    }
    let mv = |h: usize, s: usize| {
        let (e, sg) = edge_id[2 * h + s];
        [sg * m[e][0], sg * m[e][1]]
    };
    // m + m∘ι is a coboundary -dh; correct m by an invariant g to make it anti-invariant
    let mut hval: Vec<Option<[i64; 2]>> = vec![None; 2 * ns];
    hval[0] = Some([0, 0]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        let (sw, s) = (v / 2, v % 2);
        for h in 3 * sw..3 * sw + 3 {
            let w = lsw(lp(h, s));
            let (a, b) = (mv(h, s), mv(h, s ^ 1));
            let hv = hval[v].unwrap();
            let val = [hv[0] - a[0] - b[0], hv[1] - a[1] - b[1]];
            match hval[w] {
                None => {
                    hval[w] = Some(val);
                    queue.push_back(w);
                }
                Some(x) if x != val => {
                    return Err(Error::Marking("cover cochain is not anti-invariant up to a coboundary".into()))
                }
                Some(_) => {}
            }
        }
    }
    let hval: Vec<[i64; 2]> = hval.into_iter().map(|x| x.expect("connected cover")).collect();
    let g = |lifted: usize| if lifted % 2 == 0 { hval[lifted] } else { [0, 0] };
    for v in 0..ns {
        if hval[2 * v] != hval[2 * v + 1] {
            return Err(Error::Marking("correction is not deck-invariant".into()));
        }
    }
    let transits: Vec<Transit> = (0..n)
        .map(|h| {
            let a = mv(h, 0);
            let (gw, gv) = (g(lsw(lp(h, 0))), g(2 * switch_of(h)));
            Transit::new([a[0] + gw[0] - gv[0], a[1] + gw[1] - gv[1]], flip(h))
        })
        .collect();
    Marking::from_transits(pairing, transits)
}

#[cfg(test)]
mod tests {
    use super::*;

    const S11: [usize; 6] = [3, 4, 5, 0, 1, 2];

    fn fixture() -> Marking {
        Marking::from_branches(&S11, |b, _| match b {
            1 => Transit::new([1, 0], false),
            2 => Transit::new([0, 1], false),
            _ => Transit::ZERO,
        })
    }

    #[test]
    fn reverse_is_involution() {
        for t in [Transit::new([2, -3], false), Transit::new([1, 5], true)] {
            assert_eq!(t.reverse().reverse(), t);
        }
        assert_eq!(Transit::new([2, -3], true).reverse(), Transit::new([2, -3], true));
    }

    #[test]
    fn compose_tracks_sheets() {
        let p = [1, 0, 3, 2, 5, 4];
        let m = Marking::from_transits(
            &p,
            vec![
                Transit::new([1, 0], true),
                Transit::new([1, 0], true),
                Transit::new([0, 1], false),
                Transit::new([0, -1], false),
                Transit::ZERO,
                Transit::ZERO,
            ],
        )
        .unwrap();
        assert_eq!(m.compose(&[0, 2]), Transit::new([1, -1], true));
    }

    #[test]
    fn gauge_preserves_normal_form() {
        let m = fixture();
        let g = m.gauge(&S11, &[false, false], &[[3, -1], [0, 2]]);
        assert_ne!(g, m);
        assert_eq!(g.normal_form(&S11), m.normal_form(&S11));
        let z = m.zero_branch(&S11, 1);
        assert_eq!(z.get(1), Transit::ZERO);
        assert_eq!(z.normal_form(&S11), m.normal_form(&S11));
    }

    #[test]
    fn derived_s11_marking_is_a_basis() {
        let m = derive_marking(&S11, false).unwrap();
        // transits of the three branches span Z^2 with the switch relation e = a + b
        let v: Vec<[i64; 2]> = [0, 1, 2].iter().map(|&h| m.get(h).vector).collect();
        let minors = [(0, 1), (0, 2), (1, 2)].map(|(i, j)| (v[i][0] * v[j][1] - v[i][1] * v[j][0]).abs());
        assert!(minors.contains(&1), "{v:?}");
    }
}
