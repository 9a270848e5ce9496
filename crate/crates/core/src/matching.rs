//! Perfect matchings on `{1..2n}` and their action as an `n x 2n` GF(2) matrix.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bits::BitString;
use crate::error::{Error, Result};

/// A perfect matching in canonical form: each edge `(k, l)` has `k < l` and
/// edges are sorted by `k`. Row `i` of the matrix `M` is edge `i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PerfectMatching {
    edges: Vec<(usize, usize)>,
    /// `partner[k - 1]` is the index matched with `k`.
    partner: Vec<usize>,
    /// `edge_of[k - 1]` is the 1-based row containing `k`.
    edge_of: Vec<usize>,
}

impl PerfectMatching {
    /// Builds a matching from pairs given in any order and orientation.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut edges: Vec<(usize, usize)> = pairs
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        if edges.is_empty() {
            return Err(Error::InvalidMatching(
                "a matching needs at least one edge".into(),
            ));
        }
        let size = 2 * edges.len();
        let mut seen = vec![false; size];
        for &(k, l) in &edges {
            if k == l {
                return Err(Error::InvalidMatching(format!("self-loop at {k}")));
            }
            for v in [k, l] {
                if v == 0 || v > size {
                    return Err(Error::InvalidMatching(format!(
                        "index {v} outside 1..={size}"
                    )));
                }
                if std::mem::replace(&mut seen[v - 1], true) {
                    return Err(Error::InvalidMatching(format!("index {v} covered twice")));
                }
            }
        }
        edges.sort_unstable();
        let mut partner = vec![0; size];
        let mut edge_of = vec![0; size];
        for (row, &(k, l)) in edges.iter().enumerate() {
            partner[k - 1] = l;
            partner[l - 1] = k;
            edge_of[k - 1] = row + 1;
            edge_of[l - 1] = row + 1;
        }
        Ok(Self {
            edges,
            partner,
            edge_of,
        })
    }

    /// Uniformly random perfect matching on `{1..2n}`: shuffle, then pair
    /// consecutive entries.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        assert!(n >= 1, "a matching needs at least one edge");
        let mut perm: Vec<usize> = (1..=2 * n).collect();
        perm.shuffle(rng);
        Self::from_pairs(perm.chunks_exact(2).map(|c| (c[0], c[1])))
            .expect("paired permutation is a perfect matching")
    }

    /// Every perfect matching on `{1..2n}`, in lexicographic edge order.
    pub fn enumerate_all(n: usize) -> Vec<Self> {
        fn rec(
            remaining: &mut Vec<usize>,
            current: &mut Vec<(usize, usize)>,
            out: &mut Vec<Vec<(usize, usize)>>,
        ) {
            if remaining.is_empty() {
                out.push(current.clone());
                return;
            }
            let first = remaining.remove(0);
            for j in 0..remaining.len() {
                let other = remaining.remove(j);
                current.push((first, other));
                rec(remaining, current, out);
                current.pop();
                remaining.insert(j, other);
            }
            remaining.insert(0, first);
        }
        assert!(n >= 1);
        let mut out = Vec::new();
        rec(&mut (1..=2 * n).collect(), &mut Vec::new(), &mut out);
        out.into_iter()
            .map(|e| Self::from_pairs(e).expect("enumerated pairs form a matching"))
            .collect()
    }

    /// Number of edges.
    pub fn n(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edge at 1-based row `i`.
    pub fn edge(&self, i: usize) -> (usize, usize) {
        self.edges[i - 1]
    }

    pub fn partner(&self, k: usize) -> usize {
        self.partner[k - 1]
    }

    /// 1-based row of the edge covering index `k`.
    pub fn edge_of(&self, k: usize) -> usize {
        self.edge_of[k - 1]
    }

    /// The product `Mx`: bit `i` is the parity of `x` across edge `i`.
    pub fn apply(&self, x: &BitString) -> Result<BitString> {
        if x.len() != 2 * self.n() {
            return Err(Error::dimension(2 * self.n(), x.len()));
        }
        let bits = self
            .edges
            .iter()
            .map(|&(k, l)| x.get(k) ^ x.get(l))
            .collect();
        BitString::new(bits)
    }

    /// The lifted character `Mᵀs`: both endpoints of edge `i` carry `s_i`.
    pub fn lift(&self, s: &BitString) -> Result<BitString> {
        if s.len() != self.n() {
            return Err(Error::dimension(self.n(), s.len()));
        }
        let mut out = BitString::zeros(2 * self.n());
        for (i, &(k, l)) in self.edges.iter().enumerate() {
            let bit = s.get(i + 1);
            out.set(k, bit);
            out.set(l, bit);
        }
        Ok(out)
    }

    /// The explicit `n x 2n` 0/1 matrix, row `i` having ones at the endpoints
    /// of edge `i`.
    pub fn matrix(&self) -> Vec<Vec<bool>> {
        self.edges
            .iter()
            .map(|&(k, l)| {
                let mut row = vec![false; 2 * self.n()];
                row[k - 1] = true;
                row[l - 1] = true;
                row
            })
            .collect()
    }
}

impl fmt::Display for PerfectMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, l)) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}-{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PerfectMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PerfectMatching({self})")
    }
}

impl FromStr for PerfectMatching {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let pairs = s
            .split(',')
            .map(|edge| {
                let (a, b) = edge
                    .split_once('-')
                    .ok_or_else(|| Error::Parse(format!("edge {edge:?} is not of the form k-l")))?;
                let parse = |t: &str| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|e| Error::Parse(format!("bad index {t:?}: {e}")))
                };
                Ok((parse(a)?, parse(b)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_pairs(pairs)
    }
}

impl Serialize for PerfectMatching {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PerfectMatching {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
