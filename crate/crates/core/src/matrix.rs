//! `PSL(2, Z)` elements as sign-canonical integer matrices.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::farey::{FareyEdge, Slope};

/// A determinant-one matrix `[[a, b], [c, d]]` modulo `±I`. The first nonzero
/// entry in the scan `a, b, c, d` is positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Psl2 {
    m: [i64; 4],
}

impl Psl2 {
    pub const IDENTITY: Psl2 = Psl2 { m: [1, 0, 0, 1] };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::Parse(format!("matrix {a},{b};{c},{d} has determinant {}", a * d - b * c)));
        }
        Ok(Self::canonical([a, b, c, d]))
    }

    fn canonical(m: [i64; 4]) -> Self {
        let first = m.iter().copied().find(|&x| x != 0).unwrap_or(1);
        if first < 0 {
            Psl2 { m: m.map(|x| -x) }
        } else {
            Psl2 { m }
        }
    }

    /// `r = [[1, 1], [0, 1]]`.
    pub fn r() -> Self {
        Psl2 { m: [1, 1, 0, 1] }
    }

    /// `l = [[1, 0], [1, 1]]`.
    pub fn l() -> Self {
        Psl2 { m: [1, 0, 1, 1] }
    }

    /// The generators `r, r^-1, l, l^-1`.
    pub fn generators() -> [Psl2; 4] {
        [Psl2::r(), Psl2::r().inverse(), Psl2::l(), Psl2::l().inverse()]
    }

    pub fn entries(&self) -> [i64; 4] {
        self.m
    }

    pub fn max_entry(&self) -> i64 {
        self.m.iter().map(|x| x.abs()).max().unwrap()
    }

    pub fn inverse(&self) -> Self {
        let [a, b, c, d] = self.m;
        Self::canonical([d, -b, -c, a])
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Psl2::IDENTITY, |acc, _| acc * *self)
    }

    /// Matrix times column vector. Defined up to the global sign.
    pub fn apply(&self, v: [i64; 2]) -> [i64; 2] {
        let [a, b, c, d] = self.m;
        [a * v[0] + b * v[1], c * v[0] + d * v[1]]
    }

    pub fn act_on_slope(&self, s: Slope) -> Slope {
        Slope::from_vector(self.apply(s.vector())).expect("invertible matrix maps nonzero vectors to nonzero vectors")
    }

    pub fn act_on_edge(&self, e: FareyEdge) -> FareyEdge {
        FareyEdge::new(self.act_on_slope(e.0), self.act_on_slope(e.1))
    }

    /// An element sending the base edge `{0/1, 1/0}` to `e`, with `1/0 -> e.0`.
    pub fn carrying_base_to(e: FareyEdge) -> Self {
        let ([p, q], [r, s]) = (e.0.vector(), e.1.vector());
        // columns (p, q) and ±(r, s)
        if p * s - r * q == 1 {
            Self::canonical([p, r, q, s])
        } else {
            Self::canonical([p, -r, q, -s])
        }
    }

    /// Every element with all entries in `[-bound, bound]`, in canonical order.
    pub fn enumerate(bound: i64) -> Vec<Psl2> {
        let mut out = Vec::new();
        let mut push = |m: [i64; 4]| {
            if Self::canonical(m).m == m {
                out.push(Psl2 { m });
            }
        };
        for a in -bound..=bound {
            for b in -bound..=bound {
                for c in -bound..=bound {
                    if a == 0 {
                        if b * c == -1 {
                            for d in -bound..=bound {
                                push([a, b, c, d]);
                            }
                        }
                    } else if (1 + b * c) % a == 0 && ((1 + b * c) / a).abs() <= bound {
                        push([a, b, c, (1 + b * c) / a]);
                    }
                }
            }
        }
        out.sort();
        out
    }
}

impl Mul for Psl2 {
    type Output = Psl2;

    fn mul(self, o: Psl2) -> Psl2 {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = o.m;
        Psl2::canonical([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }
}

impl fmt::Display for Psl2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.m;
        write!(f, "{a},{b};{c},{d}")
    }
}

impl FromStr for Psl2 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("matrix `{s}` is not of the form a,b;c,d"));
        let (top, bottom) = s.split_once(';').ok_or_else(bad)?;
        let (a, b) = top.split_once(',').ok_or_else(bad)?;
        let (c, d) = bottom.split_once(',').ok_or_else(bad)?;
        let n = |x: &str| x.trim().parse::<i64>().map_err(|_| bad());
        Psl2::new(n(a)?, n(b)?, n(c)?, n(d)?)
    }
}

impl Serialize for Psl2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Psl2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relators_are_trivial() {
        let (r, l) = (Psl2::r(), Psl2::l());
        let x = l * r.inverse() * l;
        assert_eq!(x * x, Psl2::IDENTITY);
        assert_eq!((l * r.inverse()).pow(3), Psl2::IDENTITY);
        // the raw products are -I before reduction
        let [a, b, c, d] = [0i64, -1, 1, 0];
        assert_eq!(a * a + b * c, -1);
        assert_eq!(c * b + d * d, -1);
    }

    #[test]
    fn sign_canonical() {
        assert_eq!(Psl2::new(-1, 0, 0, -1).unwrap(), Psl2::IDENTITY);
        assert_eq!(Psl2::new(0, -1, 1, 0).unwrap().entries(), [0, 1, -1, 0]);
        assert!(Psl2::new(2, 0, 0, 1).is_err());
    }

    #[test]
    fn parse_and_print() {
        let g: Psl2 = "1,1;0,1".parse().unwrap();
        assert_eq!(g, Psl2::r());
        assert_eq!(g.to_string(), "1,1;0,1");
    }

    #[test]
    fn r_on_zero() {
        assert_eq!(Psl2::r().act_on_slope(Slope::ZERO), Slope::new(1, 1).unwrap());
    }

    #[test]
    fn carrying_matrix() {
        let e = FareyEdge::new(Slope::new(1, 2).unwrap(), Slope::new(1, 3).unwrap());
        assert_eq!(Psl2::carrying_base_to(e).act_on_edge(FareyEdge::base()), e);
    }

    #[test]
    fn enumerate_small() {
        let all = Psl2::enumerate(1);
        assert!(all.contains(&Psl2::IDENTITY));
        assert!(all.iter().all(|g| g.max_entry() <= 1));
        let mut dedup = all.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), all.len());
    }
}
