//! Transverse measures: the cone `P(t)`, its extremal rays and the slopes of
//! the curves they count.

use std::collections::{BTreeMap, BTreeSet};

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::farey::Slope;
use crate::lattice::{nullspace, primitive, Q};
use crate::marking::{branch_index, Marking, Transit};
use crate::track::{switch_of, TrainTrack};

/// Switch conditions `w(L) - w(S1) - w(S2) = 0`, one row per switch, with a
/// branch incident twice counted per incidence.
pub fn switch_rows(pairing: &[usize]) -> Vec<Vec<i64>> {
    let bi = branch_index(pairing);
    let nb = pairing.len() / 2;
    (0..pairing.len() / 3)
        .map(|v| {
            let mut r = vec![0; nb];
            r[bi[3 * v]] += 1;
            r[bi[3 * v + 1]] -= 1;
            r[bi[3 * v + 2]] -= 1;
            r
        })
        .collect()
}

/// Nonnegative branch weights satisfying the switch conditions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TransverseMeasure {
    pub weights: Vec<Q>,
}

impl TransverseMeasure {
    pub fn from_integers(w: &[i64]) -> Self {
        TransverseMeasure {
            weights: w.iter().map(|&x| Q::from_integer(x)).collect(),
        }
    }

    pub fn is_valid(&self, pairing: &[usize]) -> bool {
        self.weights.iter().all(|w| *w >= Q::from_integer(0))
            && switch_rows(pairing).iter().all(|r| {
                r.iter().zip(&self.weights).map(|(&a, w)| *w * a).sum::<Q>() == Q::from_integer(0)
            })
    }

    /// The primitive integer vector on this measure's ray.
    pub fn primitive(&self) -> Vec<i64> {
        primitive(&self.weights)
    }
}

impl Serialize for TransverseMeasure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.weights.len()))?;
        for (i, w) in self.weights.iter().enumerate() {
            m.serialize_entry(&i.to_string(), &[*w.numer(), *w.denom()])?;
        }
        m.end()
    }
}

/// `P(t)` as the nonnegative part of the solution space of the switch conditions.
#[derive(Clone, Debug)]
pub struct MeasureCone {
    /// Rational basis of the solution space, one vector per free branch.
    pub basis: Vec<Vec<Q>>,
    pub branches: usize,
}

impl MeasureCone {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

pub fn measure_cone(t: &TrainTrack) -> MeasureCone {
    cone_of(t.pairing())
}

fn cone_of(pairing: &[usize]) -> MeasureCone {
    let nb = pairing.len() / 2;
    MeasureCone {
        basis: nullspace(&switch_rows(pairing), nb),
        branches: nb,
    }
}

/// Extremal rays of `{y : G y >= 0}` for a full-column-rank `G`, by the double
/// description method.
fn double_description(g: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let k = g.first().map_or(0, Vec::len);
    if k == 0 {
        return Vec::new();
    }
    let zero = Q::from_integer(0);
    let dot = |a: &[Q], b: &[Q]| a.iter().zip(b).map(|(x, y)| *x * *y).sum::<Q>();

    // k independent rows give the initial simplicial cone
    let mut basis_rows: Vec<usize> = Vec::new();
    for i in 0..g.len() {
        let mut trial: Vec<Vec<Q>> = basis_rows.iter().map(|&j| g[j].clone()).collect();
        trial.push(g[i].clone());
        if q_rank(&trial) == trial.len() {
            basis_rows.push(i);
            if basis_rows.len() == k {
                break;
            }
        }
    }
    assert_eq!(basis_rows.len(), k, "constraint matrix must have full column rank");
    let b: Vec<Vec<Q>> = basis_rows.iter().map(|&i| g[i].clone()).collect();
    let inv = q_inverse(&b);
    let mut rays: Vec<Vec<Q>> = (0..k).map(|j| normalize((0..k).map(|i| inv[i][j]).collect())).collect();
    let mut processed: Vec<usize> = basis_rows.clone();

    for i in 0..g.len() {
        if basis_rows.contains(&i) {
            continue;
        }
        let a = &g[i];
        let vals: Vec<Q> = rays.iter().map(|r| dot(a, r)).collect();
        let zeros: Vec<BTreeSet<usize>> = rays
            .iter()
            .map(|r| processed.iter().copied().filter(|&j| dot(&g[j], r) == zero).collect())
            .collect();
        let mut next: Vec<Vec<Q>> = Vec::new();
        for (r, v) in rays.iter().zip(&vals) {
            if *v >= zero {
                next.push(r.clone());
            }
        }
        for p in 0..rays.len() {
            if vals[p] <= zero {
                continue;
            }
            for n in 0..rays.len() {
                if vals[n] >= zero {
                    continue;
                }
                let common: BTreeSet<usize> = zeros[p].intersection(&zeros[n]).copied().collect();
                if common.len() + 2 < k {
                    continue;
                }
                let adjacent = (0..rays.len()).all(|o| o == p || o == n || !common.is_subset(&zeros[o]));
                if !adjacent {
                    continue;
                }
                let c: Vec<Q> = rays[n]
                    .iter()
                    .zip(&rays[p])
                    .map(|(x, y)| vals[p] * *x - vals[n] * *y)
                    .collect();
                next.push(normalize(c));
            }
        }
        rays = next;
        processed.push(i);
    }
    rays
}

fn normalize(v: Vec<Q>) -> Vec<Q> {
    primitive(&v).into_iter().map(Q::from_integer).collect()
}

fn q_rank(rows: &[Vec<Q>]) -> usize {
    let mut m = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != Q::from_integer(0)) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            let f = m[i][c] / m[r][c];
            for j in 0..cols {
                let s = f * m[r][j];
                m[i][j] -= s;
            }
        }
        r += 1;
    }
    r
}

fn q_inverse(b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let k = b.len();
    let mut m: Vec<Vec<Q>> = b
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..k).map(|j| Q::from_integer(i64::from(i == j))));
            row
        })
        .collect();
    for c in 0..k {
        let p = (c..k).find(|&i| m[i][c] != Q::from_integer(0)).expect("invertible");
        m.swap(c, p);
        let pv = m[c][c];
        for x in m[c].iter_mut() {
            *x /= pv;
        }
        for i in 0..k {
            if i != c {
                let f = m[i][c];
                for j in 0..2 * k {
                    let s = f * m[c][j];
                    m[i][j] -= s;
                }
            }
        }
    }
    m.into_iter().map(|r| r[k..].to_vec()).collect()
}

/// Primitive integer extremal rays of `P`, sorted.
pub fn extremal_rays_pairing(pairing: &[usize]) -> Vec<Vec<i64>> {
    let cone = cone_of(pairing);
    if cone.basis.is_empty() {
        return Vec::new();
    }
    // constraint rows: branch weight as a function of the basis coordinates
    let g: Vec<Vec<Q>> = (0..cone.branches)
        .map(|b| cone.basis.iter().map(|v| v[b]).collect())
        .collect();
    let rays: BTreeSet<Vec<i64>> = double_description(&g)
        .into_iter()
        .map(|y| {
            let x: Vec<Q> = (0..cone.branches)
                .map(|b| cone.basis.iter().zip(&y).map(|(v, c)| v[b] * *c).sum())
                .collect();
            primitive(&x)
        })
        .collect();
    rays.into_iter().collect()
}

pub fn extremal_rays(t: &TrainTrack) -> Vec<TransverseMeasure> {
    extremal_rays_pairing(t.pairing())
        .iter()
        .map(|r| TransverseMeasure::from_integers(r))
        .collect()
}

/// Some measure is positive on every branch.
pub fn is_recurrent_pairing(pairing: &[usize]) -> bool {
    let rays = extremal_rays_pairing(pairing);
    !rays.is_empty() && (0..pairing.len() / 2).all(|b| rays.iter().any(|r| r[b] > 0))
}

/// Traces the multicurve with integer branch weights `w` and returns the total
/// transit of each component, read from sheet 0.
pub fn trace_curves(pairing: &[usize], marking: &Marking, w: &[i64]) -> Vec<Transit> {
    let bi = branch_index(pairing);
    let n = pairing.len();
    let wd: Vec<usize> = (0..n).map(|h| w[bi[h]].max(0) as usize).collect();
    let mut used: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut curves = Vec::new();
    let limit = 4 * wd.iter().sum::<usize>() + 8;
    for h0 in 0..n {
        for k0 in 0..wd[h0] {
            if used.contains(&(h0, k0)) {
                continue;
            }
            let (mut h, mut k) = (h0, k0);
            let mut sheet = false;
            let mut v = [0i64; 2];
            for _ in 0..limit {
                used.insert((h, k));
                used.insert((pairing[h], wd[h] - 1 - k));
                let t = marking.get(h);
                let s = if sheet { -1 } else { 1 };
                v[0] += s * t.vector[0];
                v[1] += s * t.vector[1];
                sheet ^= t.flip;
                let d = pairing[h];
                let kk = wd[d] - 1 - k;
                let sw = switch_of(d);
                let (l, s1, s2) = (3 * sw, 3 * sw + 1, 3 * sw + 2);
                (h, k) = match d % 3 {
                    0 if kk < wd[s2] => (s2, wd[s2] - 1 - kk),
                    0 => (s1, wd[s1] - 1 - (kk - wd[s2])),
                    2 => (l, wd[s2] - 1 - kk),
                    _ => (l, wd[s2] + (wd[s1] - 1 - kk)),
                };
                if (h, k) == (h0, k0) && !sheet {
                    break;
                }
            }
            curves.push(Transit { vector: v, flip: sheet });
        }
    }
    curves
}

/// The slope of the single closed curve counted by `m`.
pub fn slope_of_measure(t: &TrainTrack, m: &TransverseMeasure) -> Result<Slope> {
    let w = m.primitive();
    let curves = trace_curves(t.pairing(), t.marking(), &w);
    if curves.len() != 1 {
        return Err(Error::NotSingleCurve(curves.len()));
    }
    Slope::from_vector(curves[0].vector)
}

/// An extremal ray with its curve's slope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexCycle {
    pub weights: Vec<i64>,
    pub slope: Slope,
}

pub fn vertex_cycles(t: &TrainTrack) -> Result<Vec<VertexCycle>> {
    extremal_rays_pairing(t.pairing())
        .into_iter()
        .map(|w| {
            let slope = slope_of_measure(t, &TransverseMeasure::from_integers(&w))?;
            Ok(VertexCycle { weights: w, slope })
        })
        .collect()
}

/// The two vertex-cycle slopes, sorted.
pub fn slope_pair(t: &TrainTrack) -> Result<(Slope, Slope)> {
    let cs = vertex_cycles(t)?;
    if cs.len() != 2 {
        return Err(Error::InvalidTrack(format!("{} vertex cycles, expected 2", cs.len())));
    }
    let (a, b) = (cs[0].slope, cs[1].slope);
    Ok(if a <= b { (a, b) } else { (b, a) })
}

/// Which weights occur over a collection of rays.
pub fn weight_histogram<'a>(rays: impl IntoIterator<Item = &'a Vec<i64>>) -> BTreeMap<i64, usize> {
    let mut h = BTreeMap::new();
    for r in rays {
        for &w in r {
            *h.entry(w).or_insert(0) += 1;
        }
    }
    h
}
