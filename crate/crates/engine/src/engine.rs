//! The event-driven core: ingest distance messages, evaluate SPDs.

use semloc_core::{DistanceSemantics, ObjectId, RangingEstimate, Sod, Spd};
use semloc_spd::{
    alignment_estimator, combine, proximity_estimator, room_determination, AlignmentPair,
};
use serde::{Deserialize, Serialize};

use crate::cache::DistanceCache;
use crate::config::EngineConfig;
use crate::error::EngineError;

fn default_sample_count() -> usize {
    1
}

/// Wire payload of one ranging result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangingMessage {
    pub a: ObjectId,
    pub b: ObjectId,
    pub distance_m: f64,
    /// Seconds on the producer's clock.
    pub timestamp: f64,
    /// How many raw samples back this value (1 for a single measurement).
    #[serde(default = "default_sample_count")]
    pub sample_count: usize,
}

/// What happened to an ingested message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IngestOutcome {
    /// Cache updated; both endpoints may need re-evaluation.
    Stored { a: ObjectId, b: ObjectId },
    /// Valid message, but the cache already held a newer estimate.
    OutOfDate,
    /// Malformed or inconsistent message, counted and dropped.
    Rejected { reason: String },
}

/// Holds the distance cache and answers `evaluate` queries against it.
///
/// Ingest never panics on bad input: malformed messages are counted and
/// dropped so one rogue producer cannot take the engine down.
#[derive(Debug, Clone)]
pub struct Engine {
    sod: Sod,
    config: EngineConfig,
    cache: DistanceCache,
    /// Latest message timestamp seen; the default "now" for evaluate.
    clock: f64,
    rejected: u64,
}

impl Engine {
    pub fn new(sod: Sod, config: EngineConfig) -> Result<Self, EngineError> {
        config.validate()?;
        Ok(Self {
            sod,
            config,
            cache: DistanceCache::new(),
            clock: 0.0,
            rejected: 0,
        })
    }

    pub fn sod(&self) -> &Sod {
        &self.sod
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    /// Replaces the configuration (bus-driven reload).
    pub fn set_config(&mut self, config: EngineConfig) -> Result<(), EngineError> {
        config.validate()?;
        self.config = config;
        Ok(())
    }

    pub fn rejected_count(&self) -> u64 {
        self.rejected
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    pub fn clock(&self) -> f64 {
        self.clock
    }

    /// Parses and ingests a raw payload; parse failures are rejections.
    pub fn ingest_payload(&mut self, payload: &[u8]) -> IngestOutcome {
        match serde_json::from_slice::<RangingMessage>(payload) {
            Ok(message) => self.ingest(&message),
            Err(err) => self.reject(format!("unparseable payload: {err}")),
        }
    }

    /// Validates a message against the SOD and updates the cache.
    pub fn ingest(&mut self, message: &RangingMessage) -> IngestOutcome {
        if let Err(reason) = self.check(message) {
            return self.reject(reason);
        }
        self.clock = self.clock.max(message.timestamp);
        let estimate = RangingEstimate {
            a: message.a.clone(),
            b: message.b.clone(),
            distance_m: message.distance_m,
            sample_count: message.sample_count,
            semantics: self.config.semantics,
        };
        if self.cache.upsert(estimate, message.timestamp) {
            IngestOutcome::Stored {
                a: message.a.clone(),
                b: message.b.clone(),
            }
        } else {
            IngestOutcome::OutOfDate
        }
    }

    fn check(&self, message: &RangingMessage) -> Result<(), String> {
        if message.a == message.b {
            return Err(format!("self-ranging id `{}`", message.a));
        }
        for id in [&message.a, &message.b] {
            if self.sod.get(id).is_none() {
                return Err(format!("unknown id `{id}`"));
            }
        }
        if !message.distance_m.is_finite() || message.distance_m < 0.0 {
            return Err(format!("bad distance {}", message.distance_m));
        }
        if !message.timestamp.is_finite() {
            return Err("non-finite timestamp".to_owned());
        }
        if message.sample_count == 0 {
            return Err("zero sample count".to_owned());
        }
        Ok(())
    }

    fn reject(&mut self, reason: String) -> IngestOutcome {
        self.rejected += 1;
        log::warn!("dropping ranging message: {reason}");
        IngestOutcome::Rejected { reason }
    }

    /// Evaluates the target at the engine's logical clock.
    pub fn evaluate(&self, target: &ObjectId) -> Result<Spd, EngineError> {
        self.evaluate_at(target, self.clock)
    }

    /// Inter-centre equivalent of a measured distance between two objects.
    /// Triangle geometry needs centre points, so edge measurements get the
    /// bounding radii added back.
    fn inter_centre(&self, measured_m: f64, a: &ObjectId, b: &ObjectId) -> f64 {
        match self.config.semantics {
            DistanceSemantics::InterCentre => measured_m,
            DistanceSemantics::EdgeToEdge => {
                let ra = self.sod.get(a).map_or(0.0, |o| o.bounding_radius);
                let rb = self.sod.get(b).map_or(0.0, |o| o.bounding_radius);
                measured_m + ra + rb
            }
        }
    }

    /// Evaluates the target against the cache as seen at `now`: room vote
    /// over every fresh neighbour, proximity over fresh fixed references,
    /// alignment over fixed-reference pairs. Returns the combined (possibly
    /// empty) description.
    pub fn evaluate_at(&self, target: &ObjectId, now: f64) -> Result<Spd, EngineError> {
        self.sod.require(target)?;
        let staleness = self.config.staleness_s;
        let fresh = self.cache.fresh_involving(target, now, staleness);
        if fresh.is_empty() {
            return Ok(Spd::empty(target.clone()));
        }

        let spd_config = &self.config.spd;
        let mut fragments = Vec::new();

        let neighbours: Vec<(ObjectId, f64)> = fresh
            .iter()
            .map(|(id, est)| ((*id).clone(), est.distance_m))
            .collect();
        if let Some(fragment) = room_determination(
            target,
            &neighbours,
            &self.sod,
            &spd_config.room_vote,
            &spd_config.templates,
        )? {
            fragments.push(fragment);
        }

        let references: Vec<(ObjectId, f64)> = fresh
            .iter()
            .filter(|(id, _)| self.sod.get(id).is_some_and(|o| o.is_fixed_reference()))
            .map(|(id, est)| ((*id).clone(), est.distance_m))
            .collect();
        if !references.is_empty() {
            fragments.extend(proximity_estimator(
                target,
                &references,
                &self.sod,
                &spd_config.thresholds,
                spd_config.nearest_only,
                &spd_config.templates,
            )?);

            // Candidate pairs in lexicographic order; references came out
            // of the cache already sorted by id.
            let mut pairs = Vec::new();
            for (i, (ref_a, d_a)) in references.iter().enumerate() {
                for (ref_b, d_b) in &references[i + 1..] {
                    let measured_ab_m = self
                        .cache
                        .fresh_between(ref_a, ref_b, now, staleness)
                        .map(|est| self.inter_centre(est.distance_m, ref_a, ref_b));
                    pairs.push(AlignmentPair {
                        ref_a: ref_a.clone(),
                        ref_b: ref_b.clone(),
                        target_to_a_m: self.inter_centre(*d_a, target, ref_a),
                        target_to_b_m: self.inter_centre(*d_b, target, ref_b),
                        measured_ab_m,
                    });
                }
            }
            fragments.extend(alignment_estimator(
                target,
                &pairs,
                &self.sod,
                &spd_config.alignment,
                &spd_config.templates,
            )?);
        }

        Ok(combine(target.clone(), fragments)?)
    }
}
