//! Signatures `(m, (d_1, .., d_k))`: validity, enumeration by total sum, and
//! counting of isometry classes of maximal spacings.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `m` zero-radius classes plus the support dimensions of the positive-radius
/// classes. `d[0]` is the inner class; `d[1..]` is non-increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawSignature")]
pub struct Signature {
    pub m: usize,
    pub d: Vec<usize>,
}

#[derive(Deserialize)]
struct RawSignature {
    m: usize,
    d: Vec<usize>,
}

impl TryFrom<RawSignature> for Signature {
    type Error = Error;
    fn try_from(raw: RawSignature) -> Result<Self> {
        Signature::new(raw.m, raw.d)
    }
}

impl Signature {
    pub fn new(m: usize, d: Vec<usize>) -> Result<Self> {
        if d.contains(&0) {
            return Err(Error::InvalidSignature(format!(
                "dimension terms must be positive: {d:?}"
            )));
        }
        if d.len() > 1 && d[1..].windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidSignature(format!(
                "terms after the inner term must be non-increasing: {d:?}"
            )));
        }
        Ok(Signature { m, d })
    }

    /// Number of positive-radius classes.
    pub fn k(&self) -> usize {
        self.d.len()
    }

    /// Number of classes.
    pub fn class_count(&self) -> usize {
        self.m + self.d.len()
    }

    pub fn dim_sum(&self) -> usize {
        self.d.iter().sum()
    }

    /// `m + sum d_i`, the enumeration key.
    pub fn total(&self) -> usize {
        self.m + self.dim_sum()
    }

    fn fully_sorted(&self) -> bool {
        self.d.windows(2).all(|w| w[0] >= w[1])
    }

    /// Placement as a coincident-center signature, if any.
    pub fn eq_placement(&self) -> Option<Placement> {
        let i = self.class_count();
        let ok = match self.m {
            0 => self.k() >= 1,
            1 => i <= 2,
            _ => false,
        };
        (ok && self.fully_sorted()).then(|| Placement {
            classes: i,
            dimension: self.dim_sum(),
        })
    }

    /// Placement as a distinct-center signature, if any.
    pub fn neq_placement(&self) -> Option<Placement> {
        let i = self.class_count();
        (self.k() >= 1 && i > 2).then(|| Placement {
            classes: i,
            dimension: i - 2 + self.dim_sum(),
        })
    }
}

impl fmt::Display for Signature {
    /// Canonical text form `m;(d1,d2,..)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.d.iter().map(|x| x.to_string()).collect();
        write!(f, "{};({})", self.m, terms.join(","))
    }
}

impl FromStr for Signature {
    type Err = Error;

    /// Accepts `m;(d1,..)`, and also the tuple form `(m,(d1,..))`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSignature(format!("cannot parse {s:?}"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (m_part, d_part) = if let Some((m, d)) = t.split_once(';') {
            (m.to_string(), d.to_string())
        } else {
            let inner = t
                .strip_prefix('(')
                .and_then(|x| x.strip_suffix(')'))
                .ok_or_else(bad)?;
            let (m, d) = inner.split_once(',').ok_or_else(bad)?;
            (m.to_string(), d.to_string())
        };
        let m: usize = m_part.parse().map_err(|_| bad())?;
        let d_inner = d_part
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(bad)?;
        let d = if d_inner.is_empty() {
            Vec::new()
        } else {
            d_inner
                .split(',')
                .map(|x| x.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?
        };
        Signature::new(m, d)
    }
}

/// Class count `I` and ambient dimension `n` at which a signature is maximal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    #[serde(rename = "I")]
    pub classes: usize,
    #[serde(rename = "n")]
    pub dimension: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureClassification {
    pub eq: Option<Placement>,
    pub neq: Option<Placement>,
}

pub fn classify(s: &Signature) -> SignatureClassification {
    SignatureClassification {
        eq: s.eq_placement(),
        neq: s.neq_placement(),
    }
}

/// All partitions of `n` as non-increasing tuples, in reverse-lexicographic order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for first in (1..=rest.min(max)).rev() {
            prefix.push(first);
            go(rest - first, first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// The partition function `p(n)`, by the coin-change recurrence.
pub fn partition_count(n: usize) -> u128 {
    let mut ways = vec![0u128; n + 1];
    ways[0] = 1;
    for part in 1..=n {
        for total in part..=n {
            ways[total] += ways[total - part];
        }
    }
    ways[n]
}

/// Coincident-center signatures with total `n`: the single `m = 1` signature
/// followed by `(0, p)` for every partition `p` of `n`.
pub fn enumerate_eq(n: usize) -> Result<Vec<Signature>> {
    if n == 0 {
        return Err(Error::OutOfRange("sum must be at least 1".into()));
    }
    let mut out = vec![if n == 1 {
        Signature { m: 1, d: vec![] }
    } else {
        Signature {
            m: 1,
            d: vec![n - 1],
        }
    }];
    out.extend(partitions(n).into_iter().map(|p| Signature { m: 0, d: p }));
    Ok(out)
}

/// Distinct-center signatures with total `n`: `(m, (d_1, p..))` for
/// `m < n`, `1 <= d_1 <= n - m`, `p` a partition of `n - m - d_1`, kept when
/// the class count `m + 1 + len(p)` is at least 3.
pub fn enumerate_neq(n: usize) -> Result<Vec<Signature>> {
    if n == 0 {
        return Err(Error::OutOfRange("sum must be at least 1".into()));
    }
    let mut out = Vec::new();
    for m in 0..n {
        for inner in 1..=n - m {
            for p in partitions(n - m - inner) {
                if m + p.len() >= 2 {
                    let mut d = Vec::with_capacity(p.len() + 1);
                    d.push(inner);
                    d.extend(p);
                    out.push(Signature { m, d });
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalCount {
    pub eq: u128,
    pub neq: u128,
    pub total: u128,
}

/// Number of isometry classes of maximal spacings in `R^n`, split by whether
/// centers coincide: `1 + p(n)` coincident (just one at `n = 0`),
/// `sum_{i=1}^{n-1} p(i)` distinct, `sum_{i=0}^{n} p(i)` in total.
pub fn count_maximal(n: usize) -> MaximalCount {
    let eq = if n == 0 { 1 } else { 1 + partition_count(n) };
    let neq: u128 = (1..n).map(partition_count).sum();
    let total: u128 = (0..=n).map(partition_count).sum();
    assert_eq!(eq + neq, total, "count split must add up at n = {n}");
    MaximalCount { eq, neq, total }
}
