//! Record sets of sampled paths and dyadic box counts over them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::FbmPath;

/// Boxes narrower than this many grid steps are rejected by [`box_count`].
pub const MIN_GRID_STEPS_PER_BOX: usize = 8;

/// Grid indices `i` at which `X_i ≥ max_{j<i} X_j`, on a grid of `n` steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordSet {
    indices: Vec<usize>,
    n: usize,
    source: String,
}

impl RecordSet {
    /// Record set from explicit indices; they must be strictly increasing, start at 0
    /// and not exceed `n`.
    pub fn from_indices(indices: Vec<usize>, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("grid size must be positive".into()));
        }
        if indices.first() != Some(&0) {
            return Err(Error::InvalidArgument("index 0 is always a record".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("record indices must be strictly increasing".into()));
        }
        if indices.last().is_some_and(|&i| i > n) {
            return Err(Error::InvalidArgument(format!("record index beyond grid size {n}")));
        }
        Ok(Self { indices, n, source: "explicit".into() })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn times(&self) -> Vec<f64> {
        self.indices.iter().map(|&i| i as f64 / self.n as f64).collect()
    }

    /// Whether some record index lies in `lo..=hi`.
    pub fn hits_index_range(&self, lo: usize, hi: usize) -> bool {
        let first = self.indices.partition_point(|&i| i < lo);
        self.indices.get(first).is_some_and(|&i| i <= hi)
    }

    /// Membership mask over the grid `0..=n`.
    pub fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.n + 1];
        for &i in &self.indices {
            mask[i] = true;
        }
        mask
    }
}

/// Single left-to-right pass. Ties with the running maximum count as records.
pub fn extract_records(path: &FbmPath) -> RecordSet {
    let values = path.values();
    let mut indices = Vec::new();
    let mut best = f64::NEG_INFINITY;
    for (i, &v) in values.iter().enumerate() {
        if v >= best {
            best = v;
            indices.push(i);
        }
    }
    RecordSet {
        indices,
        n: path.n(),
        source: format!(
            "{} H={} seed={}",
            path.generator().as_str(),
            path.hurst(),
            path.seed()
        ),
    }
}

/// Largest `k` for which boxes of width `2^-k` span at least
/// [`MIN_GRID_STEPS_PER_BOX`] steps of a grid of size `n`.
pub fn max_scale_exponent(n: usize) -> Option<u32> {
    let ratio = n / MIN_GRID_STEPS_PER_BOX;
    (ratio >= 1).then(|| ratio.ilog2())
}

fn check_scale(k: u32, n: usize) -> Result<()> {
    match max_scale_exponent(n) {
        Some(kmax) if k <= kmax => Ok(()),
        _ => Err(Error::ScaleTooFine { k, n }),
    }
}

#[inline]
fn box_of(i: usize, k: u32, n: usize) -> u64 {
    let boxes = 1u64 << k;
    let b = ((i as u128) << k) / n as u128;
    (b as u64).min(boxes - 1)
}

/// Number of boxes `[b·2^-k, (b+1)·2^-k)` containing a record time (`t = 1` goes in
/// the last box).
pub fn box_count(recs: &RecordSet, k: u32) -> Result<u64> {
    check_scale(k, recs.n)?;
    Ok(count_boxes(recs, k))
}

fn count_boxes(recs: &RecordSet, k: u32) -> u64 {
    let mut count = 0;
    let mut last = None;
    for &i in &recs.indices {
        let b = box_of(i, k, recs.n);
        if last != Some(b) {
            count += 1;
            last = Some(b);
        }
    }
    count
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxCountEntry {
    pub k: u32,
    pub eps: f64,
    pub m_eps: u64,
}

/// `(ε, M_ε)` over dyadic scales `ε = 2^-k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxCountCurve {
    pub entries: Vec<BoxCountEntry>,
    pub n: usize,
    pub record_source: String,
}

impl BoxCountCurve {
    pub fn k_range(&self) -> Option<(u32, u32)> {
        Some((self.entries.first()?.k, self.entries.last()?.k))
    }

    pub fn entry(&self, k: u32) -> Option<&BoxCountEntry> {
        self.entries.iter().find(|e| e.k == k)
    }
}

pub fn box_count_curve(recs: &RecordSet, k_min: u32, k_max: u32) -> Result<BoxCountCurve> {
    if k_min > k_max {
        return Err(Error::InvalidArgument(format!("k_min {k_min} > k_max {k_max}")));
    }
    check_scale(k_max, recs.n)?;
    let entries = (k_min..=k_max)
        .map(|k| BoxCountEntry { k, eps: (-(k as f64)).exp2(), m_eps: count_boxes(recs, k) })
        .collect();
    Ok(BoxCountCurve { entries, n: recs.n, record_source: recs.source.clone() })
}
