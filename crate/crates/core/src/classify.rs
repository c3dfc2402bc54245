// SPDX-License-Identifier: Apache-2.0

//! Bounded-depth classifiers for boundary points given by ray prefixes.
//!
//! All classifiers work in the free-group (tree) model and read only an
//! already materialised prefix, so they are pure and may run concurrently.
//!
//! * conicality: look for a segment `τ` of length `100δ` in the ray whose
//!   `20δ`-truncation is not a coarse leaf segment and whose `6δ`-trimmed
//!   core recurs along the ray, reaching the tail;
//! * injectivity: look for factors (up to the language horizon) that are
//!   not leaf factors arbitrarily far out;
//! * recurrence: a uniform-recurrence proxy on factors of fixed length.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::leaflang::{HyperbolicityParams, LeafLanguage, LeafLanguageError};
use crate::words::{invert_letters, Letter, ReducedWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("depth {depth} is too small; at least {needed} letters are required")]
    DepthTooSmall { depth: usize, needed: usize },
    #[error("window {window} and factor length {k} must satisfy 1 ≤ k < window")]
    InvalidWindow { window: usize, k: usize },
    #[error("language horizon {horizon} is below the {needed} letters this classifier queries")]
    BeyondHorizon { horizon: usize, needed: usize },
    #[error("verdicts were computed at different depths: {0:?}")]
    DepthMismatch(Vec<usize>),
    #[error("verdicts were computed against different languages")]
    LanguageMismatch,
    #[error(transparent)]
    Language(#[from] LeafLanguageError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierKind {
    Conical,
    Injective,
    Recurrent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VerdictKind {
    ConicalCertified,
    NonConicalEvidence,
    InjectiveEvidence,
    NonInjectiveEvidence,
    RecurrentEvidence,
    NotRecurrentEvidence,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Caveat {
    /// The language omits the diagonal leaf orbits of the lamination.
    DiagonalLeavesOmitted,
    /// Bounded-depth evidence, not a proof.
    EvidenceOnly,
    /// Uniform recurrence stands in for controlled concentration.
    RecurrenceProxy,
}

/// Where a placement of `τ`'s aligned core was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Occurrence {
    pub offset: usize,
    /// The ray traverses the segment backwards (the inverted core occurs).
    pub inverted: bool,
}

/// Replayable evidence that a ray is conical.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConicalCertificate {
    pub params: HyperbolicityParams,
    /// Where `τ` was read off the ray.
    pub tau_start: usize,
    pub tau: ReducedWord,
    /// `20δ`-truncation of `τ`.
    pub tau_truncated: ReducedWord,
    /// `2δ`-trimmed core of the truncation, queried and found not to be a member.
    pub queried_core: ReducedWord,
    /// `6δ`-trimmed core of `τ`, whose occurrences place `τ` within `6δ` of the ray.
    pub aligned_core: ReducedWord,
    pub occurrences: Vec<Occurrence>,
    pub min_occurrences: usize,
    pub tail_start: usize,
    pub depth: usize,
    pub horizon: usize,
    pub language_hash: String,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateReplayError {
    #[error("certificate language {expected} differs from {actual}")]
    LanguageMismatch { expected: String, actual: String },
    #[error("ray prefix has {available} letters, certificate needs {needed}")]
    PrefixTooShort { available: usize, needed: usize },
    #[error("{0}")]
    Mismatch(String),
    #[error(transparent)]
    Language(#[from] LeafLanguageError),
}

impl ConicalCertificate {
    /// Recomputes the truncation and cores, re-queries non-membership and
    /// re-checks every occurrence against `prefix`.
    pub fn replay(&self, language: &LeafLanguage, prefix: &[Letter]) -> Result<(), CertificateReplayError> {
        if language.hash() != self.language_hash {
            return Err(CertificateReplayError::LanguageMismatch {
                expected: self.language_hash.clone(),
                actual: language.hash().to_string(),
            });
        }
        let fail = |what: &str| Err(CertificateReplayError::Mismatch(what.to_string()));
        let delta = self.params.delta;
        let tau = self.tau.letters();
        if tau.len() < 100 * delta {
            return fail("tau shorter than 100 delta");
        }
        if prefix.len() < self.depth {
            return Err(CertificateReplayError::PrefixTooShort {
                available: prefix.len(),
                needed: self.depth,
            });
        }
        if prefix.get(self.tau_start..self.tau_start + tau.len()) != Some(tau) {
            return fail("tau is not read off the ray at tau_start");
        }
        let cut = 20 * delta;
        if tau[cut..tau.len() - cut] != *self.tau_truncated.letters() {
            return fail("truncation differs");
        }
        let trim = 2 * delta;
        let truncated = self.tau_truncated.letters();
        if truncated[trim..truncated.len() - trim] != *self.queried_core.letters() {
            return fail("queried core differs");
        }
        if language.is_coarse_leaf_segment(&self.params, &self.tau_truncated)? {
            return fail("truncation is a coarse leaf segment");
        }
        let align = 6 * delta;
        let core = &tau[align..tau.len() - align];
        if core != self.aligned_core.letters() {
            return fail("aligned core differs");
        }
        let inverted = invert_letters(core);
        if self.occurrences.len() < self.min_occurrences {
            return fail("fewer occurrences than required");
        }
        let mut previous: Option<usize> = None;
        for occ in &self.occurrences {
            if previous.is_some_and(|p| occ.offset < p + tau.len()) {
                return fail("occurrences overlap or are not increasing");
            }
            let expected: &[Letter] = if occ.inverted { &inverted } else { core };
            if prefix[..self.depth].get(occ.offset..occ.offset + core.len()) != Some(expected) {
                return fail("aligned core not found at a recorded offset");
            }
            previous = Some(occ.offset);
        }
        if previous.is_none_or(|last| last < self.tail_start) {
            return fail("last occurrence is not in the tail");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Payload {
    Conical(ConicalCertificate),
    /// Every examined factor starting at or after `from` is leaf-like.
    LeafTail { from: usize, examined: usize, factor_len: usize },
    /// No non-leaf candidate recurs the required number of times.
    NoRecurrence {
        candidates: usize,
        max_occurrences: usize,
        required: usize,
    },
    /// Some candidate recurs often enough but its occurrences stop before the tail.
    StalledRecurrence {
        best_occurrences: usize,
        last_offset: usize,
        tail_start: usize,
    },
    /// Non-leaf factors keep appearing up to the tail.
    NonLeafTail {
        non_leaf_factors: usize,
        last_non_leaf: usize,
        tail_start: usize,
        max_factor_len: usize,
    },
    /// Non-leaf factors stop between the middle and the tail.
    Undecided {
        last_non_leaf: usize,
        tail_start: usize,
    },
    /// Every first-half factor recurs in every window of the second half.
    Recurrence { factors: usize, k: usize, window: usize },
    /// A first-half factor with the longest absence from the second half.
    AbsentFactor {
        factor: ReducedWord,
        first_position: usize,
        gap_start: usize,
        gap_len: usize,
        k: usize,
        window: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub classifier: ClassifierKind,
    pub kind: VerdictKind,
    pub depth: usize,
    pub payload: Payload,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub language_hash: Option<String>,
    pub caveats: Vec<Caveat>,
}

impl Verdict {
    pub fn certificate(&self) -> Option<&ConicalCertificate> {
        match &self.payload {
            Payload::Conical(c) => Some(c),
            _ => None,
        }
    }
}

/// Tuning shared by the classifiers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailPolicy {
    /// Occurrences count as "reaching infinity" when they start at or after
    /// this fraction of the depth.
    pub tail_fraction: f64,
    /// A leaf-like tail must start at or before this fraction of the depth.
    pub leaf_tail_fraction: f64,
}

impl Default for TailPolicy {
    fn default() -> Self {
        TailPolicy {
            tail_fraction: 0.75,
            leaf_tail_fraction: 0.5,
        }
    }
}

impl TailPolicy {
    fn tail_start(&self, depth: usize) -> usize {
        (self.tail_fraction * depth as f64).ceil() as usize
    }

    fn leaf_tail_limit(&self, depth: usize) -> usize {
        (self.leaf_tail_fraction * depth as f64).floor() as usize
    }
}

fn language_caveats(evidence: bool) -> Vec<Caveat> {
    let mut caveats = vec![Caveat::DiagonalLeavesOmitted];
    if evidence {
        caveats.push(Caveat::EvidenceOnly);
    }
    caveats
}

fn positions_by_factor(prefix: &[Letter], len: usize) -> HashMap<&[Letter], Vec<usize>> {
    let mut map: HashMap<&[Letter], Vec<usize>> = HashMap::new();
    if len == 0 || len > prefix.len() {
        return map;
    }
    for (i, w) in prefix.windows(len).enumerate() {
        map.entry(w).or_default().push(i);
    }
    map
}

/// Conicality test on a materialised prefix (its length is the depth).
pub fn classify_conical(
    prefix: &[Letter],
    language: &LeafLanguage,
    params: &HyperbolicityParams,
    min_occurrences: usize,
) -> Result<Verdict, ClassifyError> {
    classify_conical_with(prefix, language, params, min_occurrences, TailPolicy::default())
}

pub fn classify_conical_with(
    prefix: &[Letter],
    language: &LeafLanguage,
    params: &HyperbolicityParams,
    min_occurrences: usize,
    policy: TailPolicy,
) -> Result<Verdict, ClassifyError> {
    let delta = params.delta;
    let tau_len = 100 * delta;
    let depth = prefix.len();
    if depth < tau_len {
        return Err(ClassifyError::DepthTooSmall { depth, needed: tau_len });
    }
    if language.horizon() < tau_len {
        return Err(ClassifyError::BeyondHorizon {
            horizon: language.horizon(),
            needed: tau_len,
        });
    }
    let cut = 20 * delta;
    let align = 6 * delta;
    let core_len = tau_len - 2 * align;
    let tail_start = policy.tail_start(depth);
    let occurrences = positions_by_factor(prefix, core_len);

    let mut non_leaf_starts = Vec::new();
    for start in 0..=depth - tau_len {
        let truncation = &prefix[start + cut..start + tau_len - cut];
        if !language.is_coarse_leaf_slice(params, truncation)? {
            non_leaf_starts.push(start);
        }
    }

    let mut seen: HashMap<&[Letter], ()> = HashMap::new();
    let mut max_occurrences = 0usize;
    let mut stalled: Option<(usize, usize)> = None;
    for &start in &non_leaf_starts {
        let core = &prefix[start + align..start + tau_len - align];
        if seen.insert(core, ()).is_some() {
            continue;
        }
        let inverted = invert_letters(core);
        let mut found: Vec<Occurrence> = occurrences
            .get(core)
            .into_iter()
            .flatten()
            .map(|&offset| Occurrence { offset, inverted: false })
            .collect();
        if inverted.as_slice() != core {
            found.extend(
                occurrences
                    .get(inverted.as_slice())
                    .into_iter()
                    .flatten()
                    .map(|&offset| Occurrence { offset, inverted: true }),
            );
            found.sort_by_key(|o| o.offset);
        }
        // disjoint placements of τ, greedily from the left
        let mut chosen: Vec<Occurrence> = Vec::new();
        for occ in found {
            if chosen.last().is_none_or(|last| occ.offset >= last.offset + tau_len) {
                chosen.push(occ);
            }
        }
        max_occurrences = max_occurrences.max(chosen.len());
        let last = chosen.last().map(|o| o.offset).unwrap_or(0);
        if chosen.len() >= min_occurrences {
            if last >= tail_start {
                let tau = prefix[start..start + tau_len].to_vec();
                let tau_truncated = tau[cut..tau_len - cut].to_vec();
                let queried_core = tau_truncated[2 * delta..tau_truncated.len() - 2 * delta].to_vec();
                let certificate = ConicalCertificate {
                    params: *params,
                    tau_start: start,
                    tau: ReducedWord::from_reduced_unchecked(tau),
                    tau_truncated: ReducedWord::from_reduced_unchecked(tau_truncated),
                    queried_core: ReducedWord::from_reduced_unchecked(queried_core),
                    aligned_core: ReducedWord::from_reduced_unchecked(core.to_vec()),
                    occurrences: chosen,
                    min_occurrences,
                    tail_start,
                    depth,
                    horizon: language.horizon(),
                    language_hash: language.hash().to_string(),
                };
                return Ok(Verdict {
                    classifier: ClassifierKind::Conical,
                    kind: VerdictKind::ConicalCertified,
                    depth,
                    payload: Payload::Conical(certificate),
                    language_hash: Some(language.hash().to_string()),
                    caveats: language_caveats(false),
                });
            }
            if stalled.is_none_or(|(best, _)| chosen.len() > best) {
                stalled = Some((chosen.len(), last));
            }
        }
    }

    let leaf_from = non_leaf_starts.last().map_or(0, |s| s + 1);
    let (kind, payload) = if leaf_from <= policy.leaf_tail_limit(depth) {
        (
            VerdictKind::NonConicalEvidence,
            Payload::LeafTail {
                from: leaf_from,
                examined: depth - tau_len + 1,
                factor_len: tau_len,
            },
        )
    } else if max_occurrences < min_occurrences {
        (
            VerdictKind::NonConicalEvidence,
            Payload::NoRecurrence {
                candidates: seen.len(),
                max_occurrences,
                required: min_occurrences,
            },
        )
    } else {
        let (best_occurrences, last_offset) = stalled.unwrap_or((max_occurrences, 0));
        (
            VerdictKind::Unknown,
            Payload::StalledRecurrence {
                best_occurrences,
                last_offset,
                tail_start,
            },
        )
    };
    Ok(Verdict {
        classifier: ClassifierKind::Conical,
        kind,
        depth,
        payload,
        language_hash: Some(language.hash().to_string()),
        caveats: language_caveats(true),
    })
}

/// Injectivity evidence: the latest start of a factor of length at most the
/// language horizon that is not a leaf factor.
pub fn classify_injective(
    prefix: &[Letter],
    language: &LeafLanguage,
    params: &HyperbolicityParams,
) -> Result<Verdict, ClassifyError> {
    classify_injective_with(prefix, language, params, TailPolicy::default())
}

pub fn classify_injective_with(
    prefix: &[Letter],
    language: &LeafLanguage,
    params: &HyperbolicityParams,
    policy: TailPolicy,
) -> Result<Verdict, ClassifyError> {
    let window_len = 100 * params.delta;
    let depth = prefix.len();
    if depth < window_len {
        return Err(ClassifyError::DepthTooSmall {
            depth,
            needed: window_len,
        });
    }
    let horizon = language.horizon();
    if horizon < window_len {
        return Err(ClassifyError::BeyondHorizon {
            horizon,
            needed: window_len,
        });
    }
    let tail_start = policy.tail_start(depth);
    let mut non_leaf = 0usize;
    let mut last_non_leaf: Option<usize> = None;
    // the shortest non-member ending at j starts at j - matched
    for (j, &matched) in language.member_suffix_lengths(prefix).iter().enumerate() {
        if matched < horizon && matched <= j {
            non_leaf += 1;
            let start = j - matched;
            last_non_leaf = Some(last_non_leaf.map_or(start, |l| l.max(start)));
        }
    }
    let leaf_from = last_non_leaf.map_or(0, |s| s + 1);
    let (kind, payload) = match last_non_leaf {
        Some(last) if last >= tail_start => (
            VerdictKind::InjectiveEvidence,
            Payload::NonLeafTail {
                non_leaf_factors: non_leaf,
                last_non_leaf: last,
                tail_start,
                max_factor_len: horizon,
            },
        ),
        _ if leaf_from <= policy.leaf_tail_limit(depth) => (
            VerdictKind::NonInjectiveEvidence,
            Payload::LeafTail {
                from: leaf_from,
                examined: depth,
                factor_len: horizon,
            },
        ),
        _ => (
            VerdictKind::Unknown,
            Payload::Undecided {
                last_non_leaf: leaf_from.saturating_sub(1),
                tail_start,
            },
        ),
    };
    Ok(Verdict {
        classifier: ClassifierKind::Injective,
        kind,
        depth,
        payload,
        language_hash: Some(language.hash().to_string()),
        caveats: language_caveats(true),
    })
}

/// Longest interval of `[half, depth)` containing no occurrence of a
/// length-`k` factor with the given sorted start positions.
fn longest_absence(occurrences: &[usize], half: usize, depth: usize, k: usize) -> (usize, usize) {
    let mut best = (half, 0);
    let mut cursor = half;
    for &o in occurrences.iter().filter(|&&o| o >= half) {
        let end = o + k - 1;
        if end > cursor && end - cursor > best.1 {
            best = (cursor, end - cursor);
        }
        cursor = o + 1;
    }
    if depth > cursor && depth - cursor > best.1 {
        best = (cursor, depth - cursor);
    }
    best
}

/// Uniform-recurrence proxy for controlled concentration.
///
/// Every length-`k` factor of the first half must occur inside every
/// length-`window` interval of the second half. An absence spanning at least
/// a quarter of the depth (and at least `window`) is evidence against
/// recurrence; a shorter absence longer than `window` is inconclusive.
pub fn classify_recurrent(prefix: &[Letter], window: usize, k: usize) -> Result<Verdict, ClassifyError> {
    let depth = prefix.len();
    if k == 0 || k >= window {
        return Err(ClassifyError::InvalidWindow { window, k });
    }
    if depth < 2 * window {
        return Err(ClassifyError::DepthTooSmall {
            depth,
            needed: 2 * window,
        });
    }
    let half = depth / 2;
    let positions = positions_by_factor(prefix, k);
    let mut factors = 0usize;
    // (gap length, first position, gap start, factor); longest gap, earliest factor
    let mut worst: Option<(usize, usize, usize, &[Letter])> = None;
    for (factor, occ) in &positions {
        if occ[0] + k > half {
            continue;
        }
        factors += 1;
        let (gap_start, gap_len) = longest_absence(occ, half, depth, k);
        let better = worst.is_none_or(|(len, first, _, _)| {
            gap_len > len || (gap_len == len && occ[0] < first)
        });
        if better {
            worst = Some((gap_len, occ[0], gap_start, factor));
        }
    }
    let threshold = window.max(depth.div_ceil(4));
    let (kind, payload) = match worst {
        Some((gap_len, first_position, gap_start, factor)) if gap_len >= window => (
            if gap_len >= threshold {
                VerdictKind::NotRecurrentEvidence
            } else {
                VerdictKind::Unknown
            },
            Payload::AbsentFactor {
                factor: ReducedWord::from_reduced_unchecked(factor.to_vec()),
                first_position,
                gap_start,
                gap_len,
                k,
                window,
            },
        ),
        _ => (
            VerdictKind::RecurrentEvidence,
            Payload::Recurrence { factors, k, window },
        ),
    };
    Ok(Verdict {
        classifier: ClassifierKind::Recurrent,
        kind,
        depth,
        payload,
        language_hash: None,
        caveats: vec![Caveat::RecurrenceProxy, Caveat::EvidenceOnly],
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub consistent: bool,
    pub kinds: Vec<VerdictKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flagged: Option<String>,
}

/// A recurrent, injective point must be conical; the combination
/// {recurrent, injective, non-conical} is flagged.
pub fn consistency_check(verdicts: &[Verdict]) -> Result<ConsistencyReport, ClassifyError> {
    let mut depths: Vec<usize> = verdicts.iter().map(|v| v.depth).collect();
    depths.dedup();
    if depths.len() > 1 {
        return Err(ClassifyError::DepthMismatch(depths));
    }
    let mut hashes = verdicts.iter().filter_map(|v| v.language_hash.as_deref());
    if let Some(first) = hashes.next() {
        if hashes.any(|h| h != first) {
            return Err(ClassifyError::LanguageMismatch);
        }
    }
    let kinds: Vec<VerdictKind> = verdicts.iter().map(|v| v.kind).collect();
    let has = |k: VerdictKind| kinds.contains(&k);
    let forbidden = has(VerdictKind::RecurrentEvidence)
        && has(VerdictKind::InjectiveEvidence)
        && has(VerdictKind::NonConicalEvidence);
    Ok(ConsistencyReport {
        consistent: !forbidden,
        flagged: forbidden.then(|| {
            "recurrent and injective evidence together with non-conical evidence: a controlled \
             concentration point with a single preimage must be conical"
                .to_string()
        }),
        kinds,
    })
}
