//! Splits at large branches, their inverses (folds) and double splits.
//!
//! Splitting the large branch `e` between switches `u` and `w` replaces it by
//! a small diagonal branch: the four outer branches are reattached to two new
//! switches on the same vertices, and the diagonal joins `S1` to `S1`
//! ([`Chirality::Right`]) or `S2` to `S2` ([`Chirality::Left`]). The marking
//! of the branches that entered `u` absorbs the transit of `e`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Q;
use crate::marking::{branch_index, Marking, Transit};
use crate::measures::TransverseMeasure;
use crate::track::{is_complete_pairing, switch_of, CanonicalKey, ClassKey, TrainTrack};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Chirality {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

impl Chirality {
    pub const BOTH: [Chirality; 2] = [Chirality::Right, Chirality::Left];
}

impl fmt::Display for Chirality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chirality::Left => "L",
            Chirality::Right => "R",
        })
    }
}

/// A split at branch `branch` (an index into [`TrainTrack::branches`]).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SplitMove {
    pub branch: usize,
    pub chirality: Chirality,
}

/// Branch ids of the large branches.
pub fn large_branches(t: &TrainTrack) -> Vec<usize> {
    let bi = t.branch_of();
    t.large_darts().into_iter().map(|h| bi[h]).collect()
}

/// Linear map from measures on the split track back to the original:
/// `old[b] = sum_j matrix[b][j] * new[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MeasureTransfer {
    pub matrix: Vec<Vec<i64>>,
}

impl MeasureTransfer {
    pub fn apply(&self, m: &TransverseMeasure) -> TransverseMeasure {
        TransverseMeasure {
            weights: self
                .matrix
                .iter()
                .map(|row| row.iter().zip(&m.weights).map(|(&a, w)| *w * a).sum::<Q>())
                .collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum SplitOutcome {
    Complete { track: TrainTrack, transfer: MeasureTransfer },
    NotComplete,
}

impl SplitOutcome {
    pub fn track(&self) -> Option<&TrainTrack> {
        match self {
            SplitOutcome::Complete { track, .. } => Some(track),
            SplitOutcome::NotComplete => None,
        }
    }

    pub fn into_track(self) -> Option<TrainTrack> {
        match self {
            SplitOutcome::Complete { track, .. } => Some(track),
            SplitOutcome::NotComplete => None,
        }
    }
}

/// Where the small half-branches at `u` and `w` go, and the diagonal's ends.
fn rewiring(u: usize, w: usize, c: Chirality) -> ([(usize, usize); 4], (usize, usize)) {
    let (s1u, s2u, s1w, s2w) = (3 * u + 1, 3 * u + 2, 3 * w + 1, 3 * w + 2);
    match c {
        Chirality::Right => (
            [(s1u, 3 * u), (s2u, 3 * w + 2), (s1w, 3 * w), (s2w, 3 * u + 2)],
            (3 * u + 1, 3 * w + 1),
        ),
        Chirality::Left => (
            [(s1u, 3 * u + 1), (s2w, 3 * u), (s2u, 3 * w), (s1w, 3 * w + 1)],
            (3 * u + 2, 3 * w + 2),
        ),
    }
}

fn lookup(map: &[(usize, usize)], h: usize) -> usize {
    map.iter().find(|&&(a, _)| a == h).map_or(h, |&(_, b)| b)
}

/// Splits at the large branch whose `u`-end is the `L` half-branch `eu`,
/// without the completeness filter.
pub fn split_at_dart(t: &TrainTrack, eu: usize, c: Chirality) -> (TrainTrack, MeasureTransfer) {
    let p = t.pairing();
    let ew = p[eu];
    let (u, w) = (switch_of(eu), switch_of(ew));
    let (mp, diag) = rewiring(u, w, c);
    let m = |h: usize| lookup(&mp, h);
    let n = p.len();
    let (s1u, s2u) = (3 * u + 1, 3 * u + 2);
    let old = t.marking();
    let mut newp = vec![0; n];
    let mut newt = vec![Transit::ZERO; n];
    for h in 0..n {
        if h == eu || h == ew {
            continue;
        }
        let d = p[h];
        newp[m(h)] = m(d);
        let mut path = Vec::with_capacity(3);
        if h == s1u || h == s2u {
            path.push(ew);
        }
        path.push(h);
        if d == s1u || d == s2u {
            path.push(eu);
        }
        newt[m(h)] = old.compose(&path);
    }
    newp[diag.0] = diag.1;
    newp[diag.1] = diag.0;
    let marking = Marking::from_transits(&newp, newt).expect("split transport keeps reversal consistency");
    let track = TrainTrack::from_parts_unchecked(t.surface(), newp.clone(), marking);

    let old_bi = branch_index(p);
    let new_bi = branch_index(&newp);
    let mut matrix = vec![vec![0i64; n / 2]; n / 2];
    for h in 0..n {
        if h == eu || h == ew || h > p[h] {
            continue;
        }
        matrix[old_bi[h]][new_bi[m(h)]] = 1;
    }
    let e = old_bi[eu];
    matrix[e][new_bi[m(s1u)]] += 1;
    matrix[e][new_bi[m(s2u)]] += 1;
    (track, MeasureTransfer { matrix })
}

pub fn split(t: &TrainTrack, mv: SplitMove) -> Result<SplitOutcome> {
    let (lo, hi) = *t
        .branches()
        .get(mv.branch)
        .ok_or(Error::NotLarge(mv.branch))?;
    if lo % 3 != 0 || hi % 3 != 0 || switch_of(lo) == switch_of(hi) {
        return Err(Error::NotLarge(mv.branch));
    }
    let (track, transfer) = split_at_dart(t, lo, mv.chirality);
    if track.is_complete() {
        Ok(SplitOutcome::Complete { track, transfer })
    } else {
        Ok(SplitOutcome::NotComplete)
    }
}

/// A complete split of a track.
#[derive(Clone, Debug)]
pub struct Neighbor {
    pub mv: SplitMove,
    pub key: CanonicalKey,
    pub track: TrainTrack,
}

/// All complete splits, one per resulting canonical key.
pub fn neighbors(t: &TrainTrack) -> Vec<Neighbor> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for b in large_branches(t) {
        for c in Chirality::BOTH {
            let mv = SplitMove { branch: b, chirality: c };
            if let Ok(SplitOutcome::Complete { track, .. }) = split(t, mv) {
                let key = track.canonical_key();
                if seen.insert(key.clone()) {
                    out.push(Neighbor { mv, key, track });
                }
            }
        }
    }
    out
}

/// Complete tracks that split to `t`: undo a split at each small branch
/// joining `S1` to `S1` or `S2` to `S2` at distinct switches.
pub fn fold_neighbors(t: &TrainTrack) -> Vec<(CanonicalKey, TrainTrack)> {
    let p = t.pairing();
    let n = p.len();
    let mut out: BTreeMap<CanonicalKey, TrainTrack> = BTreeMap::new();
    for h in 0..n {
        let d = p[h];
        if h > d || switch_of(h) == switch_of(d) || h % 3 != d % 3 || h % 3 == 0 {
            continue;
        }
        let c = if h % 3 == 1 { Chirality::Right } else { Chirality::Left };
        for (x, y) in [(h, d), (d, h)] {
            let (u, w) = (switch_of(x), switch_of(y));
            // make the diagonal read zero by a gauge at the far switch
            let g = t.marking().zero_branch(p, x);
            let (mp, diag) = rewiring(u, w, c);
            let inv: Vec<(usize, usize)> = mp.iter().map(|&(a, b)| (b, a)).collect();
            let m = |z: usize| lookup(&inv, z);
            let mut newp = vec![0; n];
            let mut newt = vec![Transit::ZERO; n];
            for z in 0..n {
                if z == diag.0 || z == diag.1 {
                    continue;
                }
                newp[m(z)] = m(p[z]);
                newt[m(z)] = g.get(z);
            }
            newp[3 * u] = 3 * w;
            newp[3 * w] = 3 * u;
            if !is_complete_pairing(&newp, t.surface()) {
                continue;
            }
            let Ok(marking) = Marking::from_transits(&newp, newt) else {
                continue;
            };
            let track = TrainTrack::from_parts_unchecked(t.surface(), newp, marking);
            out.entry(track.canonical_key()).or_insert(track);
        }
    }
    out.into_iter().collect()
}

/// Direction of a complex edge relative to the track it was found from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Direction {
    /// The neighbour is a split of the track.
    Split,
    /// The track is a split of the neighbour.
    Fold,
}

/// All neighbours in the complex, with the direction of the split.
pub fn adjacent(t: &TrainTrack) -> Vec<(Direction, CanonicalKey, TrainTrack)> {
    let mut out: Vec<(Direction, CanonicalKey, TrainTrack)> = neighbors(t)
        .into_iter()
        .map(|nb| (Direction::Split, nb.key, nb.track))
        .collect();
    out.extend(fold_neighbors(t).into_iter().map(|(k, tr)| (Direction::Fold, k, tr)));
    out
}

/// A result of splitting both large branches of a two-large-branch track.
#[derive(Clone, Debug)]
pub struct DoubleSplit {
    pub chiralities: (Chirality, Chirality),
    pub key: CanonicalKey,
    pub track: TrainTrack,
}

/// Complete tracks reached by one split at each of the two large branches,
/// with complete intermediate tracks. `class_one` is the class key the source
/// must have.
pub fn double_split(t: &TrainTrack, class_one: &ClassKey) -> Result<Vec<DoubleSplit>> {
    if &t.class_key() != class_one {
        return Err(Error::NotClassOne(t.class_key().to_string()));
    }
    let large = t.large_darts();
    if large.len() != 2 {
        return Err(Error::NotClassOne(format!("{} large branches", large.len())));
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for c1 in Chirality::BOTH {
        let (mid, _) = split_at_dart(t, large[0], c1);
        if !mid.is_complete() {
            continue;
        }
        // the second large branch sits at the other two switches, untouched
        for c2 in Chirality::BOTH {
            let (fin, _) = split_at_dart(&mid, large[1], c2);
            if fin.is_complete() {
                let key = fin.canonical_key();
                if seen.insert(key.clone()) {
                    out.push(DoubleSplit {
                        chiralities: (c1, c2),
                        key,
                        track: fin,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Double splits of `t`, without the class check (empty unless `t` has two
/// large branches).
pub fn double_splits_unchecked(t: &TrainTrack) -> Vec<DoubleSplit> {
    double_split(t, &t.class_key()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farey::Slope;
    use crate::measures::{extremal_rays, slope_of_measure, slope_pair};
    use crate::track::SurfaceId;

    fn s11() -> TrainTrack {
        let p = vec![3, 4, 5, 0, 1, 2];
        let m = Marking::from_branches(&p, |b, _| match b {
            1 => Transit::new([1, 0], false),
            2 => Transit::new([0, 1], false),
            _ => Transit::ZERO,
        });
        TrainTrack::new(SurfaceId::S11, p, m).unwrap()
    }

    fn s(p: i64, q: i64) -> Slope {
        Slope::new(p, q).unwrap()
    }

    #[test]
    fn s11_large_branch() {
        assert_eq!(large_branches(&s11()), vec![0]);
    }

    #[test]
    fn s11_split_chiralities() {
        let t = s11();
        let right = split(&t, SplitMove { branch: 0, chirality: Chirality::Right }).unwrap();
        let left = split(&t, SplitMove { branch: 0, chirality: Chirality::Left }).unwrap();
        assert_eq!(slope_pair(right.track().unwrap()).unwrap(), (Slope::INFINITY, s(1, 1)));
        assert_eq!(slope_pair(left.track().unwrap()).unwrap(), (Slope::ZERO, s(1, 1)));
        assert_eq!(neighbors(&t).len(), 2);
        assert!(matches!(
            split(&t, SplitMove { branch: 1, chirality: Chirality::Left }),
            Err(Error::NotLarge(1))
        ));
    }

    #[test]
    fn carrying_coherence_on_fixture() {
        let t = s11();
        for c in Chirality::BOTH {
            let SplitOutcome::Complete { track, transfer } = split(&t, SplitMove { branch: 0, chirality: c }).unwrap()
            else {
                panic!("split incomplete");
            };
            for mu in extremal_rays(&track) {
                let pushed = transfer.apply(&mu);
                assert!(pushed.is_valid(t.pairing()));
                assert_eq!(slope_of_measure(&track, &mu).unwrap(), slope_of_measure(&t, &pushed).unwrap());
            }
        }
    }

    #[test]
    fn fold_inverts_split() {
        let t = s11();
        let key = t.canonical_key();
        for nb in neighbors(&t) {
            let back: Vec<CanonicalKey> = fold_neighbors(&nb.track).into_iter().map(|(k, _)| k).collect();
            assert!(back.contains(&key));
        }
        assert_eq!(adjacent(&t).len(), 4);
    }
}
