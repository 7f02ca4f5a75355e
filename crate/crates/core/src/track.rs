//! Generic train tracks as trivalent ribbon graphs.
//!
//! Half-branch `h` sits at switch `h / 3` in slot `h % 3` (`0 = L`, `1 = S1`,
//! `2 = S2`), counterclockwise in that order. `pairing[h]` is the other end of
//! the branch through `h`. Branches are numbered by their lower half-branch.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::marking::{branch_index, derive_marking, Marking, Transit};
use crate::measures;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceId {
    S11,
    S04,
}

impl SurfaceId {
    pub fn name(self) -> &'static str {
        match self {
            SurfaceId::S11 => "s11",
            SurfaceId::S04 => "s04",
        }
    }

    /// Switches of a complete track.
    pub fn switch_count(self) -> usize {
        match self {
            SurfaceId::S11 => 2,
            SurfaceId::S04 => 4,
        }
    }

    pub fn genus(self) -> i64 {
        match self {
            SurfaceId::S11 => 1,
            SurfaceId::S04 => 0,
        }
    }

    pub fn punctures(self) -> usize {
        match self {
            SurfaceId::S11 => 1,
            SurfaceId::S04 => 4,
        }
    }

    /// Cusp counts of the complementary regions of a complete track.
    pub fn complete_profile(self) -> &'static [usize] {
        match self {
            SurfaceId::S11 => &[2],
            SurfaceId::S04 => &[1, 1, 1, 1],
        }
    }

    /// Whether markings live on a double cover.
    pub fn twisted(self) -> bool {
        self == SurfaceId::S04
    }
}

impl fmt::Display for SurfaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SurfaceId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s11" | "s1,1" | "s_{1,1}" => Ok(SurfaceId::S11),
            "s04" | "s0,4" | "s_{0,4}" => Ok(SurfaceId::S04),
            _ => Err(Error::UnknownSurface(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Slot {
    L,
    S1,
    S2,
}

impl Slot {
    pub fn of(h: usize) -> Slot {
        match h % 3 {
            0 => Slot::L,
            1 => Slot::S1,
            _ => Slot::S2,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

pub fn switch_of(h: usize) -> usize {
    h / 3
}

pub fn dart(switch: usize, slot: Slot) -> usize {
    3 * switch + slot.index()
}

/// Next half-branch counterclockwise at the same switch.
pub fn sigma(h: usize) -> usize {
    3 * (h / 3) + (h % 3 + 1) % 3
}

/// A closed boundary walk of the ribbon surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub cusps: usize,
    /// Half-branches whose branch the walk runs along, in order.
    pub walk: Vec<usize>,
}

/// Boundary walks: cross the branch at `h`, then turn to the next slot
/// counterclockwise. The corner from `S1` to `S2` is the cusp.
pub fn faces(pairing: &[usize]) -> Vec<Face> {
    let mut seen = vec![false; pairing.len()];
    let mut out = Vec::new();
    for h in 0..pairing.len() {
        if seen[h] {
            continue;
        }
        let mut walk = Vec::new();
        let mut cusps = 0;
        let mut cur = h;
        while !seen[cur] {
            seen[cur] = true;
            walk.push(cur);
            let d = pairing[cur];
            if d % 3 == 1 {
                cusps += 1;
            }
            cur = sigma(d);
        }
        out.push(Face { cusps, walk });
    }
    out
}

/// Complementary regions and the surface they close up to (one puncture per region).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegionProfile {
    /// Cusp count of each region, sorted.
    pub regions: Vec<usize>,
    pub genus: i64,
    pub punctures: usize,
}

impl RegionProfile {
    /// Every region is a punctured disc with at least one cusp.
    pub fn all_negative(&self) -> bool {
        self.regions.iter().all(|&c| c >= 1)
    }
}

pub fn region_profile(pairing: &[usize]) -> RegionProfile {
    let mut regions: Vec<usize> = faces(pairing).iter().map(|f| f.cusps).collect();
    regions.sort_unstable();
    let chi = (pairing.len() / 3) as i64 - (pairing.len() / 2) as i64 + regions.len() as i64;
    RegionProfile {
        genus: (2 - chi) / 2,
        punctures: regions.len(),
        regions,
    }
}

pub fn is_connected_pairing(pairing: &[usize]) -> bool {
    let n = pairing.len() / 3;
    if n == 0 {
        return false;
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        for h in 3 * v..3 * v + 3 {
            let w = switch_of(pairing[h]);
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|x| x)
}

fn validate_pairing(pairing: &[usize]) -> Result<()> {
    let n = pairing.len();
    if n == 0 || n % 3 != 0 || n % 2 != 0 {
        return Err(Error::InvalidTrack(format!("{n} half-branches is not a multiple of 6")));
    }
    for (h, &d) in pairing.iter().enumerate() {
        if d >= n || d == h || pairing[d] != h {
            return Err(Error::InvalidTrack(format!("pairing is not a fixed-point-free involution at {h}")));
        }
    }
    if !is_connected_pairing(pairing) {
        return Err(Error::InvalidTrack("track is disconnected".into()));
    }
    Ok(())
}

/// Complete on `surface`: connected, region profile of the surface, recurrent.
pub fn is_complete_pairing(pairing: &[usize], surface: SurfaceId) -> bool {
    pairing.len() == 3 * surface.switch_count()
        && is_connected_pairing(pairing)
        && region_profile(pairing).regions == surface.complete_profile()
        && measures::is_recurrent_pairing(pairing)
}

/// Unmarked canonical key: the minimal pairing over switch relabelings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassKey(pub Vec<u8>);

/// Marked canonical key: the minimal (pairing, gauge normal form) over switch
/// relabelings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    pub pairing: Vec<u8>,
    pub marking: Vec<[i64; 3]>,
}

impl fmt::Display for ClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u8::to_string).collect();
        f.write_str(&parts.join("."))
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.pairing.iter().map(u8::to_string).collect();
        let m: Vec<String> = self
            .marking
            .iter()
            .map(|[x, y, e]| if *e == 1 { format!("{x},{y}*") } else { format!("{x},{y}") })
            .collect();
        write!(f, "{}|{}", p.join("."), m.join(";"))
    }
}

impl Serialize for CanonicalKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Pairing after sending switch `v` to `perm[v]`.
pub fn relabel_pairing(pairing: &[usize], perm: &[usize]) -> Vec<usize> {
    let f = |h: usize| 3 * perm[h / 3] + h % 3;
    let mut new = vec![0; pairing.len()];
    for (h, &d) in pairing.iter().enumerate() {
        new[f(h)] = f(d);
    }
    new
}

fn to_u8(p: &[usize]) -> Vec<u8> {
    p.iter().map(|&x| x as u8).collect()
}

pub fn class_key(pairing: &[usize]) -> ClassKey {
    let key = permutations(pairing.len() / 3)
        .iter()
        .map(|perm| relabel_pairing(pairing, perm))
        .min()
        .unwrap();
    ClassKey(to_u8(&key))
}

/// Swaps `S1` and `S2` at every switch.
pub fn mirror_pairing(pairing: &[usize]) -> Vec<usize> {
    let f = mirror_dart;
    let mut new = vec![0; pairing.len()];
    for (h, &d) in pairing.iter().enumerate() {
        new[f(h)] = f(d);
    }
    new
}

fn mirror_dart(h: usize) -> usize {
    3 * (h / 3) + [0, 2, 1][h % 3]
}

/// A generic train track with a marking.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrainTrack {
    surface: SurfaceId,
    pairing: Vec<usize>,
    marking: Marking,
}

impl TrainTrack {
    pub fn new(surface: SurfaceId, pairing: Vec<usize>, marking: Marking) -> Result<Self> {
        validate_pairing(&pairing)?;
        let marking = Marking::from_transits(&pairing, marking.transits().to_vec())?;
        Ok(TrainTrack {
            surface,
            pairing,
            marking,
        })
    }

    /// A track with the zero marking.
    pub fn unmarked(surface: SurfaceId, pairing: Vec<usize>) -> Result<Self> {
        let n = pairing.len();
        TrainTrack::new(surface, pairing, Marking::zero(n))
    }

    /// A track whose marking is derived from its ribbon structure.
    pub fn with_derived_marking(surface: SurfaceId, pairing: Vec<usize>) -> Result<Self> {
        validate_pairing(&pairing)?;
        let marking = derive_marking(&pairing, surface.twisted())?;
        TrainTrack::new(surface, pairing, marking)
    }

    pub(crate) fn from_parts_unchecked(surface: SurfaceId, pairing: Vec<usize>, marking: Marking) -> Self {
        TrainTrack {
            surface,
            pairing,
            marking,
        }
    }

    pub fn surface(&self) -> SurfaceId {
        self.surface
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    pub fn marking(&self) -> &Marking {
        &self.marking
    }

    pub fn with_marking(&self, marking: Marking) -> Result<Self> {
        TrainTrack::new(self.surface, self.pairing.clone(), marking)
    }

    pub fn switch_count(&self) -> usize {
        self.pairing.len() / 3
    }

    pub fn branch_count(&self) -> usize {
        self.pairing.len() / 2
    }

    pub fn half_branches(&self) -> usize {
        self.pairing.len()
    }

    /// Branches as `(lower, upper)` half-branch pairs.
    pub fn branches(&self) -> Vec<(usize, usize)> {
        (0..self.pairing.len())
            .filter(|&h| h < self.pairing[h])
            .map(|h| (h, self.pairing[h]))
            .collect()
    }

    /// Branch index of each half-branch.
    pub fn branch_of(&self) -> Vec<usize> {
        branch_index(&self.pairing)
    }

    pub fn boundary_regions(&self) -> RegionProfile {
        region_profile(&self.pairing)
    }

    pub fn is_recurrent(&self) -> bool {
        measures::is_recurrent_pairing(&self.pairing)
    }

    pub fn is_complete(&self) -> bool {
        is_complete_pairing(&self.pairing, self.surface)
    }

    pub fn class_key(&self) -> ClassKey {
        class_key(&self.pairing)
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        let mut best: Option<CanonicalKey> = None;
        for perm in permutations(self.switch_count()) {
            let p = relabel_pairing(&self.pairing, &perm);
            let pk = to_u8(&p);
            if best.as_ref().is_some_and(|b| pk > b.pairing) {
                continue;
            }
            let m = self.marking.relabel(|h| 3 * perm[h / 3] + h % 3);
            let key = CanonicalKey {
                pairing: pk,
                marking: m.normal_form(&p),
            };
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
        best.unwrap()
    }

    /// The track with switches renumbered by `perm` (old to new).
    pub fn relabel(&self, perm: &[usize]) -> TrainTrack {
        TrainTrack {
            surface: self.surface,
            pairing: relabel_pairing(&self.pairing, perm),
            marking: self.marking.relabel(|h| 3 * perm[h / 3] + h % 3),
        }
    }

    /// `S1 <-> S2` everywhere, with the marking reflected by `(x, y) -> (x, -y)`.
    pub fn mirror(&self) -> TrainTrack {
        TrainTrack {
            surface: self.surface,
            pairing: mirror_pairing(&self.pairing),
            marking: self.marking.relabel(mirror_dart).transform([1, 0, 0, -1]),
        }
    }

    /// Lower half-branches of the large branches.
    pub fn large_darts(&self) -> Vec<usize> {
        (0..self.pairing.len())
            .filter(|&h| {
                let d = self.pairing[h];
                h % 3 == 0 && d % 3 == 0 && h < d && switch_of(h) != switch_of(d)
            })
            .collect()
    }

    pub fn to_json(&self) -> TrackJson {
        let branches = self.branches();
        let mut marking = BTreeMap::new();
        let mut cover = BTreeMap::new();
        for (i, &(h, _)) in branches.iter().enumerate() {
            let t = self.marking.get(h);
            marking.insert(i.to_string(), t.vector);
            if t.flip {
                cover.insert(i.to_string(), 1u8);
            }
        }
        TrackJson {
            surface: self.surface,
            switches: (0..self.switch_count())
                .map(|v| SwitchJson {
                    l: 3 * v,
                    s1: 3 * v + 1,
                    s2: 3 * v + 2,
                })
                .collect(),
            pairing: branches.iter().map(|&(a, b)| [a, b]).collect(),
            marking,
            cover,
        }
    }

    pub fn from_json(doc: &TrackJson) -> Result<Self> {
        let n = 3 * doc.switches.len();
        // internal half-branch of each external identifier
        let mut internal = BTreeMap::new();
        for (v, s) in doc.switches.iter().enumerate() {
            for (slot, id) in [s.l, s.s1, s.s2].into_iter().enumerate() {
                if internal.insert(id, 3 * v + slot).is_some() {
                    return Err(Error::InvalidTrack(format!("half-branch {id} used twice")));
                }
            }
        }
        let look = |id: usize| {
            internal
                .get(&id)
                .copied()
                .ok_or_else(|| Error::InvalidTrack(format!("half-branch {id} is not at any switch")))
        };
        if doc.pairing.len() * 2 != n {
            return Err(Error::InvalidTrack(format!(
                "{} branches for {} switches",
                doc.pairing.len(),
                doc.switches.len()
            )));
        }
        let mut pairing = vec![usize::MAX; n];
        let mut transits = vec![Transit::ZERO; n];
        for (i, &[a, b]) in doc.pairing.iter().enumerate() {
            let (a, b) = (look(a)?, look(b)?);
            if pairing[a] != usize::MAX || pairing[b] != usize::MAX || a == b {
                return Err(Error::InvalidTrack(format!("branch {i} reuses a half-branch")));
            }
            pairing[a] = b;
            pairing[b] = a;
            let v = doc.marking.get(&i.to_string()).copied().unwrap_or([0, 0]);
            let flip = doc.cover.get(&i.to_string()).is_some_and(|&f| f == 1);
            let t = Transit::new(v, flip);
            transits[a] = t;
            transits[b] = t.reverse();
        }
        validate_pairing(&pairing)?;
        let marking = Marking::from_transits(&pairing, transits)?;
        TrainTrack::new(doc.surface, pairing, marking)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("track json")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: TrackJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        TrainTrack::from_json(&doc)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchJson {
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "S1")]
    pub s1: usize,
    #[serde(rename = "S2")]
    pub s2: usize,
}

/// On-disk track format. `marking[i]` is read from the first to the second
/// half-branch of `pairing[i]`; `cover[i] = 1` marks a sheet-swapping branch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrackJson {
    pub surface: SurfaceId,
    pub switches: Vec<SwitchJson>,
    pub pairing: Vec<[usize; 2]>,
    #[serde(default)]
    pub marking: BTreeMap<String, [i64; 2]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub cover: BTreeMap<String, u8>,
}

/// All fixed-point-free involutions of `0..n`.
pub fn perfect_matchings(n: usize) -> Vec<Vec<usize>> {
    fn go(pairing: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some(a) = pairing.iter().position(|&x| x == usize::MAX) else {
            out.push(pairing.clone());
            return;
        };
        for b in a + 1..pairing.len() {
            if pairing[b] == usize::MAX {
                pairing[a] = b;
                pairing[b] = a;
                go(pairing, out);
                pairing[a] = usize::MAX;
                pairing[b] = usize::MAX;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut vec![usize::MAX; n], &mut out);
    out
}

/// One representative per combinatorial class of complete tracks, in key
/// order. Each representative's pairing is its class key; its marking is
/// derived from the ribbon structure.
pub fn enumerate_complete(surface: SurfaceId) -> Vec<TrainTrack> {
    let keys: BTreeSet<ClassKey> = perfect_matchings(3 * surface.switch_count())
        .into_par_iter()
        .filter(|p| is_complete_pairing(p, surface))
        .map(|p| class_key(&p))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    keys.into_iter()
        .map(|k| {
            let pairing: Vec<usize> = k.0.iter().map(|&x| x as usize).collect();
            TrainTrack::with_derived_marking(surface, pairing).expect("complete tracks carry a derived marking")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const S11: [usize; 6] = [3, 4, 5, 0, 1, 2];

    #[test]
    fn sigma_cycles_slots() {
        assert_eq!((sigma(0), sigma(1), sigma(2)), (1, 2, 0));
        assert_eq!(sigma(5), 3);
    }

    #[test]
    fn s11_profile() {
        let p = region_profile(&S11);
        assert_eq!(p.regions, vec![2]);
        assert_eq!((p.genus, p.punctures), (1, 1));
        assert!(is_complete_pairing(&S11, SurfaceId::S11));
        assert!(!is_complete_pairing(&S11, SurfaceId::S04));
    }

    #[test]
    fn invalid_pairings_rejected() {
        assert!(TrainTrack::unmarked(SurfaceId::S11, vec![1, 0, 2, 4, 3, 5]).is_err());
        assert!(TrainTrack::unmarked(SurfaceId::S11, vec![1, 0, 3, 2]).is_err());
        // two disjoint theta pieces are not allowed
        assert!(TrainTrack::unmarked(SurfaceId::S04, vec![3, 4, 5, 0, 1, 2, 9, 10, 11, 6, 7, 8]).is_err());
    }

    #[test]
    fn class_key_is_relabel_invariant() {
        let p = vec![3, 7, 11, 0, 10, 8, 9, 1, 5, 6, 4, 2];
        for perm in permutations(4) {
            assert_eq!(class_key(&relabel_pairing(&p, &perm)), class_key(&p));
        }
    }

    #[test]
    fn s11_enumeration() {
        let reps = enumerate_complete(SurfaceId::S11);
        assert_eq!(reps.len(), 1);
        assert_eq!((reps[0].switch_count(), reps[0].branch_count()), (2, 3));
        assert_eq!(reps[0].mirror().class_key(), reps[0].class_key());
    }

    #[test]
    fn json_round_trip_and_orientation_gauge() {
        let t = TrainTrack::with_derived_marking(SurfaceId::S04, vec![3, 7, 11, 0, 10, 8, 9, 1, 5, 6, 4, 2]).unwrap();
        let back = TrainTrack::from_json_str(&t.to_json_string()).unwrap();
        assert_eq!(back, t);
        // listing a branch the other way round with the reversed transit is the same track
        let mut doc = t.to_json();
        let [a, b] = doc.pairing[1];
        doc.pairing[1] = [b, a];
        let rev = t.marking().get(a).reverse();
        doc.marking.insert("1".into(), rev.vector);
        assert_eq!(TrainTrack::from_json(&doc).unwrap().canonical_key(), t.canonical_key());
    }

    #[test]
    fn json_accepts_arbitrary_identifiers() {
        let s = r#"{"surface":"s11",
            "switches":[{"L":10,"S1":11,"S2":12},{"L":20,"S1":21,"S2":22}],
            "pairing":[[10,20],[11,21],[12,22]],
            "marking":{"1":[1,0],"2":[0,1]}}"#;
        let t = TrainTrack::from_json_str(s).unwrap();
        assert_eq!(t.pairing(), &S11);
        assert_eq!(t.marking().get(1).vector, [1, 0]);
        assert!(TrainTrack::from_json_str(&s.replace("[12,22]", "[12,21]")).is_err());
    }

    #[test]
    fn surface_names() {
        assert_eq!("S04".parse::<SurfaceId>().unwrap(), SurfaceId::S04);
        assert!(matches!("s22".parse::<SurfaceId>(), Err(Error::UnknownSurface(_))));
    }
}
