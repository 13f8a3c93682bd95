//! Per-pair distance state with freshness tracking.

use std::collections::HashMap;

use semloc_core::{ObjectId, RangingEstimate};

/// Unordered pair of object ids, stored in canonical (smaller, larger) order
/// so `(a, b)` and `(b, a)` address the same entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairKey(ObjectId, ObjectId);

impl PairKey {
    pub fn new(a: &ObjectId, b: &ObjectId) -> Self {
        if a <= b {
            Self(a.clone(), b.clone())
        } else {
            Self(b.clone(), a.clone())
        }
    }
}

#[derive(Debug, Clone)]
struct CacheEntry {
    estimate: RangingEstimate,
    last_update: f64,
}

/// Latest estimate per unordered pair. Queries take the current time and the
/// staleness window explicitly so a config reload applies immediately.
#[derive(Debug, Default, Clone)]
pub struct DistanceCache {
    entries: HashMap<PairKey, CacheEntry>,
}

impl DistanceCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Stores `estimate` unless the pair already holds a strictly newer one.
    /// Returns whether the cache changed.
    pub fn upsert(&mut self, estimate: RangingEstimate, timestamp: f64) -> bool {
        let key = PairKey::new(&estimate.a, &estimate.b);
        match self.entries.get(&key) {
            Some(existing) if existing.last_update > timestamp => false,
            _ => {
                self.entries.insert(
                    key,
                    CacheEntry {
                        estimate,
                        last_update: timestamp,
                    },
                );
                true
            }
        }
    }

    fn is_fresh(entry: &CacheEntry, now: f64, staleness_s: f64) -> bool {
        now - entry.last_update <= staleness_s
    }

    /// Fresh estimates involving `id`, as (other endpoint, estimate) sorted
    /// by the other id for deterministic downstream iteration.
    pub fn fresh_involving(
        &self,
        id: &ObjectId,
        now: f64,
        staleness_s: f64,
    ) -> Vec<(&ObjectId, &RangingEstimate)> {
        let mut out: Vec<(&ObjectId, &RangingEstimate)> = self
            .entries
            .values()
            .filter(|entry| Self::is_fresh(entry, now, staleness_s))
            .filter_map(|entry| {
                entry
                    .estimate
                    .other(id)
                    .map(|other| (other, &entry.estimate))
            })
            .collect();
        out.sort_by_key(|entry| entry.0);
        out
    }

    /// The fresh estimate between a specific pair, if any.
    pub fn fresh_between(
        &self,
        a: &ObjectId,
        b: &ObjectId,
        now: f64,
        staleness_s: f64,
    ) -> Option<&RangingEstimate> {
        self.entries
            .get(&PairKey::new(a, b))
            .filter(|entry| Self::is_fresh(entry, now, staleness_s))
            .map(|entry| &entry.estimate)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
