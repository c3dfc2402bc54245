// SPDX-License-Identifier: Apache-2.0

//! Lazily extended geodesic rays: fixed rays of train-track maps, periodic
//! rays, finite explicit words and the poisoned ray `w∞`.
//!
//! `w∞ = α_r^{κ_r} v_r t_r α_{r+1}^{κ_{r+1}} v_{r+1} t_{r+1} ⋯` is assembled
//! from subwords of a leaf ray `ℓ₊`: `v_m` a recurring factor of length `m`,
//! `u_m` with `v_m u_m v_m` in `ℓ₊`, `t_m` with `v_m t_m v_{m+1}` in `ℓ₊`,
//! `α_m = v_m u_m`. Each block `α_m^{κ_m}` is long enough that its
//! `20δ`-truncation is certified not to be a coarse leaf segment.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cayley::{is_local_geodesic, GeodesicBackend};
use crate::leaflang::{HyperbolicityParams, LeafLanguage, LeafLanguageError};
use crate::traintrack::{FixedRayScheme, TrainTrackError};
use crate::words::{cancellation_depth, Alphabet, Letter, ReducedWord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RayError {
    #[error("period word is empty or not cyclically reduced")]
    NotCyclicallyReduced,
    #[error("explicit ray has only {available} letters, {requested} requested")]
    Exhausted { available: usize, requested: usize },
    #[error("leaf ray iterate is not nested in the next one; the map cancels")]
    NonNestedIterate,
    #[error("search budget exhausted at m = {m}: no {missing} in the examined leaf prefix of {examined} letters")]
    SearchBudgetExhausted { m: usize, missing: String, examined: usize },
    #[error("block {m} needs a language horizon of {needed}, the language has {horizon}")]
    HorizonTooSmall { m: usize, needed: usize, horizon: usize },
    #[error("junction cancellation while appending piece of block {m}")]
    JunctionCancellation { m: usize },
    #[error("prefix fails the {r}-local geodesic check")]
    NotLocalGeodesic { r: usize },
    #[error("the leaf ray must come from a primitive map")]
    NonPrimitiveSource,
    #[error(transparent)]
    Language(#[from] LeafLanguageError),
    #[error(transparent)]
    TrainTrack(#[from] TrainTrackError),
}

/// Where a ray came from; copied into every verdict document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub kind: String,
    pub description: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map_hash: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub language_hash: Option<String>,
}

#[derive(Clone, Debug)]
enum Producer {
    Fixed { scheme: FixedRayScheme, iterate: Vec<Letter> },
    Periodic { period: ReducedWord },
    Explicit { word: ReducedWord },
    WInfinity(Box<WInfinityBuilder>),
}

/// A reduced infinite word materialised on demand. Extension takes `&mut
/// self`; materialised prefixes are shared reads.
#[derive(Clone, Debug)]
pub struct RayStream {
    producer: Producer,
    prefix: Vec<Letter>,
    provenance: Provenance,
}

impl RayStream {
    pub(crate) fn fixed(scheme: FixedRayScheme) -> Self {
        let map = scheme.map().clone();
        let seed = scheme.seed();
        RayStream {
            provenance: Provenance {
                kind: "fixed".into(),
                description: format!("fixed ray of seed {}", map.alphabet().name(seed)),
                map_hash: Some(map.source_hash().to_string()),
                language_hash: None,
            },
            producer: Producer::Fixed {
                iterate: vec![seed],
                scheme,
            },
            prefix: vec![seed],
        }
    }

    /// The ray `w w w ⋯` of a cyclically reduced nonempty word.
    pub fn periodic(period: ReducedWord) -> Result<Self, RayError> {
        if period.is_empty() || !period.is_cyclically_reduced() {
            return Err(RayError::NotCyclicallyReduced);
        }
        Ok(RayStream {
            provenance: Provenance {
                kind: "periodic".into(),
                description: format!("periodic ray of period length {}", period.len()),
                map_hash: None,
                language_hash: None,
            },
            producer: Producer::Periodic { period },
            prefix: Vec::new(),
        })
    }

    /// A finite word treated as a ray prefix; extending past its end fails.
    pub fn explicit(word: ReducedWord) -> Self {
        RayStream {
            provenance: Provenance {
                kind: "explicit".into(),
                description: format!("explicit word of length {}", word.len()),
                map_hash: None,
                language_hash: None,
            },
            prefix: word.letters().to_vec(),
            producer: Producer::Explicit { word },
        }
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn set_description(&mut self, description: impl Into<String>) {
        self.provenance.description = description.into();
    }

    /// Currently materialised letters.
    pub fn prefix(&self) -> &[Letter] {
        &self.prefix
    }

    pub fn materialized_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn w_infinity_scheme(&self) -> Option<&WInfinityScheme> {
        match &self.producer {
            Producer::WInfinity(builder) => Some(&builder.scheme),
            _ => None,
        }
    }

    /// Materialises at least `length` letters and returns that prefix.
    pub fn extend(&mut self, length: usize) -> Result<ReducedWord, RayError> {
        self.materialize(length)?;
        Ok(ReducedWord::from_reduced_unchecked(self.prefix[..length].to_vec()))
    }

    pub fn materialize(&mut self, length: usize) -> Result<(), RayError> {
        if self.prefix.len() >= length {
            return Ok(());
        }
        match &mut self.producer {
            Producer::Periodic { period } => {
                let p = period.letters();
                while self.prefix.len() < length {
                    let i = self.prefix.len() % p.len();
                    self.prefix.push(p[i]);
                }
            }
            Producer::Explicit { word } => {
                return Err(RayError::Exhausted {
                    available: word.len(),
                    requested: length,
                });
            }
            Producer::Fixed { scheme, iterate } => {
                while iterate.len() < length {
                    let next = scheme
                        .map()
                        .apply(&ReducedWord::from_reduced_unchecked(iterate.clone()), 1)
                        .into_letters();
                    if next.len() <= iterate.len() || !next.starts_with(iterate) {
                        return Err(RayError::NonNestedIterate);
                    }
                    *iterate = next;
                }
                self.prefix = iterate.clone();
            }
            Producer::WInfinity(builder) => {
                while builder.prefix.len() < length {
                    builder.next_unit()?;
                }
                builder.check_local_geodesic()?;
                self.prefix = builder.prefix.clone();
            }
        }
        Ok(())
    }
}

/// A finite-depth record of the `w∞` construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WInfinityScheme {
    pub language_hash: String,
    pub horizon: usize,
    pub params: HyperbolicityParams,
    pub leaf_provenance: Provenance,
    /// Length of the leaf-ray prefix searched for `v_m`, `u_m`, `t_m`.
    pub examined_length: usize,
    pub blocks: Vec<WInfinityBlock>,
    pub prefix_length: usize,
    pub local_geodesic_checked: bool,
}

/// One unit `α_m^{κ_m} v_m t_m` of `w∞`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WInfinityBlock {
    pub m: usize,
    pub v: ReducedWord,
    pub u: ReducedWord,
    pub t: ReducedWord,
    pub v_next: ReducedWord,
    /// Position of `v_m u_m v_m` in the leaf ray.
    pub vuv_position: usize,
    /// Position of `v_m t_m v_{m+1}` in the leaf ray.
    pub vtv_position: usize,
    pub alpha: ReducedWord,
    pub period: usize,
    pub kappa: usize,
    /// Empirical overlap bound for this period, `max_leaf_overlap(α_m)`.
    pub overlap_bound: usize,
    /// Largest `j` with `α_m^j` a leaf factor.
    pub leaf_power: usize,
    /// Offset of `α_m^{κ_m}` in the `w∞` prefix.
    pub offset: usize,
    pub certificate: NonLeafBlockCertificate,
}

impl WInfinityBlock {
    pub fn block_len(&self) -> usize {
        self.period * self.kappa
    }

    /// Total letters contributed: block, `v_m` and `t_m`.
    pub fn unit_len(&self) -> usize {
        self.block_len() + self.v.len() + self.t.len()
    }
}

/// Evidence that the `20δ`-truncation of `α_m^{κ_m}` is not a coarse leaf
/// segment of the referenced language.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonLeafBlockCertificate {
    pub m: usize,
    pub block: ReducedWord,
    pub truncation: ReducedWord,
    /// The `2δ`-trimmed core of the truncation that was queried.
    pub queried_core: ReducedWord,
    pub horizon: usize,
    pub language_hash: String,
    pub non_leaf: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReplayError {
    #[error("certificate refers to language {expected}, replaying against {actual}")]
    LanguageMismatch { expected: String, actual: String },
    #[error("block {m}: {what}")]
    Mismatch { m: usize, what: String },
    #[error(transparent)]
    Language(#[from] LeafLanguageError),
}

impl NonLeafBlockCertificate {
    /// Recomputes truncation and core from the block and re-queries the
    /// language.
    pub fn replay(&self, language: &LeafLanguage, params: &HyperbolicityParams) -> Result<(), ReplayError> {
        if language.hash() != self.language_hash {
            return Err(ReplayError::LanguageMismatch {
                expected: self.language_hash.clone(),
                actual: language.hash().to_string(),
            });
        }
        let mismatch = |what: &str| ReplayError::Mismatch {
            m: self.m,
            what: what.to_string(),
        };
        let cut = 20 * params.delta;
        if self.block.len() <= 2 * cut {
            return Err(mismatch("block shorter than the truncation"));
        }
        let truncation = self.block.subword(cut, self.block.len() - 2 * cut);
        if truncation != self.truncation {
            return Err(mismatch("truncation differs"));
        }
        let trim = 2 * params.delta;
        if truncation.len() <= 2 * trim {
            return Err(mismatch("truncation too short for a coarse test"));
        }
        if truncation.subword(trim, truncation.len() - 2 * trim) != self.queried_core {
            return Err(mismatch("queried core differs"));
        }
        let leaf = language.is_coarse_leaf_segment(params, &truncation)?;
        if leaf == self.non_leaf {
            return Err(mismatch("membership verdict differs"));
        }
        if !self.non_leaf {
            return Err(mismatch("certificate does not assert non-leaf"));
        }
        Ok(())
    }
}

impl WInfinityScheme {
    /// Reassembles the prefix from the recorded pieces.
    pub fn assemble(&self) -> Vec<Letter> {
        let mut out = Vec::with_capacity(self.prefix_length);
        for block in &self.blocks {
            out.extend_from_slice(block.certificate.block.letters());
            out.extend_from_slice(block.v.letters());
            out.extend_from_slice(block.t.letters());
        }
        out
    }

    /// Length `|v_r t_r v_{r+1}|` of the first junction, capped.
    pub fn first_junction_len(&self, cap: usize) -> Option<usize> {
        self.blocks
            .first()
            .map(|b| (b.v.len() + b.t.len() + b.v_next.len()).min(cap))
    }

    /// Offsets `[start, end)` of each block `α_m^{κ_m}` in the prefix.
    pub fn block_spans(&self) -> Vec<(usize, usize)> {
        self.blocks.iter().map(|b| (b.offset, b.offset + b.block_len())).collect()
    }

    /// Re-verifies every recorded fact against the language and a leaf-ray
    /// prefix of at least `examined_length` letters.
    pub fn replay(&self, language: &LeafLanguage, leaf_prefix: &[Letter]) -> Result<(), ReplayError> {
        if language.hash() != self.language_hash {
            return Err(ReplayError::LanguageMismatch {
                expected: self.language_hash.clone(),
                actual: language.hash().to_string(),
            });
        }
        let examined = &leaf_prefix[..self.examined_length.min(leaf_prefix.len())];
        let mut offset = 0usize;
        for (i, block) in self.blocks.iter().enumerate() {
            let bad = |what: String| ReplayError::Mismatch { m: block.m, what };
            if block.v.len() != block.m || block.u.len() < block.m || block.t.is_empty() {
                return Err(bad("piece lengths violate |v| = m, |u| ≥ m, t ≠ ε".into()));
            }
            let vuv: Vec<Letter> = [block.v.letters(), block.u.letters(), block.v.letters()].concat();
            if !occurs_at(examined, &vuv, block.vuv_position) {
                return Err(bad("v u v not found at its recorded leaf position".into()));
            }
            let vtv: Vec<Letter> = [block.v.letters(), block.t.letters(), block.v_next.letters()].concat();
            if !occurs_at(examined, &vtv, block.vtv_position) {
                return Err(bad("v t v' not found at its recorded leaf position".into()));
            }
            if let Some(next) = self.blocks.get(i + 1) {
                if next.v != block.v_next {
                    return Err(bad("v' differs from the next block's v".into()));
                }
            }
            let alpha: Vec<Letter> = [block.v.letters(), block.u.letters()].concat();
            if alpha != block.alpha.letters() || block.period != alpha.len() {
                return Err(bad("α differs from v u".into()));
            }
            if block.certificate.block != block.alpha.power(block.kappa) {
                return Err(bad("block word differs from α^κ".into()));
            }
            if block.kappa * block.period <= block.overlap_bound.max(block.leaf_power * block.period) {
                return Err(bad("κ p does not exceed the recorded overlap bound".into()));
            }
            if block.offset != offset {
                return Err(bad("block offset differs".into()));
            }
            block.certificate.replay(language, &self.params)?;
            offset += block.unit_len();
        }
        if offset != self.prefix_length {
            return Err(ReplayError::Mismatch {
                m: 0,
                what: "prefix length differs from the sum of units".into(),
            });
        }
        Ok(())
    }

    pub fn render_summary(&self, alphabet: &Alphabet) -> String {
        let mut out = String::new();
        for b in &self.blocks {
            out.push_str(&format!(
                "m={} |v|={} |u|={} |t|={} p={} kappa={} overlap={} block=[{}, {}) v={}\n",
                b.m,
                b.v.len(),
                b.u.len(),
                b.t.len(),
                b.period,
                b.kappa,
                b.overlap_bound,
                b.offset,
                b.offset + b.block_len(),
                alphabet.render(&b.v)
            ));
        }
        out
    }
}

fn occurs_at(text: &[Letter], pattern: &[Letter], position: usize) -> bool {
    text.get(position..position + pattern.len()) == Some(pattern)
}

#[derive(Clone, Debug)]
struct WInfinityBuilder {
    language: Arc<LeafLanguage>,
    params: HyperbolicityParams,
    leaf: Vec<Letter>,
    next_m: usize,
    next_v: Option<(ReducedWord, Vec<usize>)>,
    prefix: Vec<Letter>,
    scheme: WInfinityScheme,
}

/// Builds a prefix of `w∞` of at least `target_length` letters.
///
/// `search_budget` is the number of leaf-ray letters examined when looking
/// for `v_m`, `u_m` and `t_m`. The leaf ray should come from a primitive map
/// so every factor recurs.
pub fn build_w_infinity(
    language: Arc<LeafLanguage>,
    params: HyperbolicityParams,
    mut leaf_ray: RayStream,
    target_length: usize,
    search_budget: usize,
) -> Result<(RayStream, WInfinityScheme), RayError> {
    if let Producer::Fixed { scheme, .. } = &leaf_ray.producer {
        if !scheme.map().primitive() {
            return Err(RayError::NonPrimitiveSource);
        }
    }
    leaf_ray.materialize(search_budget)?;
    let leaf = leaf_ray.prefix()[..search_budget].to_vec();
    let scheme = WInfinityScheme {
        language_hash: language.hash().to_string(),
        horizon: language.horizon(),
        params,
        leaf_provenance: leaf_ray.provenance().clone(),
        examined_length: search_budget,
        blocks: Vec::new(),
        prefix_length: 0,
        local_geodesic_checked: false,
    };
    let mut builder = WInfinityBuilder {
        language: language.clone(),
        params,
        leaf,
        next_m: params.r,
        next_v: None,
        prefix: Vec::new(),
        scheme,
    };
    while builder.prefix.len() < target_length {
        builder.next_unit()?;
    }
    builder.check_local_geodesic()?;
    let scheme = builder.scheme.clone();
    let stream = RayStream {
        provenance: Provenance {
            kind: "winf".into(),
            description: format!("w-infinity over {}", leaf_ray.provenance().description),
            map_hash: leaf_ray.provenance().map_hash.clone(),
            language_hash: Some(language.hash().to_string()),
        },
        prefix: builder.prefix.clone(),
        producer: Producer::WInfinity(Box::new(builder)),
    };
    Ok((stream, scheme))
}

impl WInfinityBuilder {
    fn occurrences(&self, pattern: &[Letter]) -> Vec<usize> {
        self.leaf
            .windows(pattern.len())
            .enumerate()
            .filter(|(_, w)| *w == pattern)
            .map(|(i, _)| i)
            .collect()
    }

    /// First length-`m` factor (by first occurrence) that occurs again.
    fn choose_v(&self, m: usize) -> Result<(ReducedWord, Vec<usize>), RayError> {
        let examined = self.leaf.len();
        for start in 0..examined.saturating_sub(m) + 1 {
            let candidate = &self.leaf[start..start + m];
            let occ = self.occurrences(candidate);
            if occ[0] < start {
                continue;
            }
            if occ.len() >= 2 {
                return Ok((ReducedWord::from_reduced_unchecked(candidate.to_vec()), occ));
            }
        }
        Err(RayError::SearchBudgetExhausted {
            m,
            missing: format!("recurring factor v_{m}"),
            examined,
        })
    }

    fn next_unit(&mut self) -> Result<(), RayError> {
        let m = self.next_m;
        let examined = self.leaf.len();
        let (v, v_occ) = match self.next_v.take() {
            Some(found) => found,
            None => self.choose_v(m)?,
        };
        // shortest u with |u| ≥ m and v u v in ℓ₊, leftmost among equals
        let mut best_u: Option<(usize, usize)> = None;
        for &j in &v_occ {
            let Some(limit) = j.checked_sub(2 * m) else { continue };
            let idx = v_occ.partition_point(|&i| i <= limit);
            if idx == 0 {
                continue;
            }
            let i = v_occ[idx - 1];
            let len = j - i - m;
            if best_u.is_none_or(|(_, l)| len < l) {
                best_u = Some((i, len));
            }
        }
        let (vuv_position, u_len) = best_u.ok_or_else(|| RayError::SearchBudgetExhausted {
            m,
            missing: format!("v_{m} u_{m} v_{m}"),
            examined,
        })?;
        let u = ReducedWord::from_reduced_unchecked(self.leaf[vuv_position + m..vuv_position + m + u_len].to_vec());

        let (v_next, next_occ) = self.choose_v(m + 1)?;
        // shortest nonempty t with v t v' in ℓ₊
        let mut best_t: Option<(usize, usize)> = None;
        for &k in &next_occ {
            let Some(limit) = k.checked_sub(m + 1) else { continue };
            let idx = v_occ.partition_point(|&i| i <= limit);
            if idx == 0 {
                continue;
            }
            let i = v_occ[idx - 1];
            let len = k - i - m;
            if best_t.is_none_or(|(_, l)| len < l) {
                best_t = Some((i, len));
            }
        }
        let (vtv_position, t_len) = best_t.ok_or_else(|| RayError::SearchBudgetExhausted {
            m,
            missing: format!("v_{m} t_{m} v_{}", m + 1),
            examined,
        })?;
        let t = ReducedWord::from_reduced_unchecked(self.leaf[vtv_position + m..vtv_position + m + t_len].to_vec());

        let alpha = ReducedWord::from_reduced_unchecked([v.letters(), u.letters()].concat());
        let period = alpha.len();
        let horizon = self.language.horizon();
        let overlap_bound = self.language.max_leaf_overlap(&self.params, &alpha, horizon)?;
        if overlap_bound >= horizon {
            return Err(RayError::HorizonTooSmall {
                m,
                needed: overlap_bound + 1,
                horizon,
            });
        }
        let leaf_power = self.language.longest_leaf_power(&alpha);
        let bound = overlap_bound.max(leaf_power * period) + 4 * self.params.delta;
        let mut kappa = bound / period + 1;
        let cut = 20 * self.params.delta;
        let trim = 2 * self.params.delta;
        let certificate = loop {
            let block_len = kappa * period;
            if block_len > 2 * (cut + trim) {
                let core_len = block_len - 2 * (cut + trim);
                if core_len > horizon {
                    return Err(RayError::HorizonTooSmall {
                        m,
                        needed: core_len,
                        horizon,
                    });
                }
                let block = alpha.power(kappa);
                let truncation = block.subword(cut, block_len - 2 * cut);
                let leaf = self.language.is_coarse_leaf_segment(&self.params, &truncation)?;
                if !leaf {
                    break NonLeafBlockCertificate {
                        m,
                        queried_core: truncation.subword(trim, truncation.len() - 2 * trim),
                        block,
                        truncation,
                        horizon,
                        language_hash: self.language.hash().to_string(),
                        non_leaf: true,
                    };
                }
            }
            kappa += 1;
        };

        let offset = self.prefix.len();
        for piece in [certificate.block.letters(), v.letters(), t.letters()] {
            if cancellation_depth(&self.prefix, piece) != 0 {
                return Err(RayError::JunctionCancellation { m });
            }
            self.prefix.extend_from_slice(piece);
        }
        self.scheme.blocks.push(WInfinityBlock {
            m,
            v,
            u,
            t,
            v_next: v_next.clone(),
            vuv_position,
            vtv_position,
            alpha,
            period,
            kappa,
            overlap_bound,
            leaf_power,
            offset,
            certificate,
        });
        self.scheme.prefix_length = self.prefix.len();
        self.scheme.local_geodesic_checked = false;
        self.next_v = Some((v_next, next_occ));
        self.next_m = m + 1;
        Ok(())
    }

    fn check_local_geodesic(&mut self) -> Result<(), RayError> {
        let prefix = ReducedWord::from_reduced(self.prefix.clone()).ok_or(RayError::NotLocalGeodesic { r: self.params.r })?;
        match is_local_geodesic(&GeodesicBackend::Free, &prefix, self.params.r) {
            Ok(true) => {
                self.scheme.local_geodesic_checked = true;
                Ok(())
            }
            _ => Err(RayError::NotLocalGeodesic { r: self.params.r }),
        }
    }
}

/// A line of a ray script: `periodic: a b`, `fixed: MAP seed a`,
/// `winf: MAP target 2000`, `explicit: a b c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RayScript {
    Periodic { word: String },
    Fixed { map: String, seed: String },
    WInfinity { map: String, target: usize },
    Explicit { word: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid ray script `{script}`: {message}")]
pub struct RayScriptError {
    pub script: String,
    pub message: String,
}

impl RayScript {
    pub fn parse(text: &str) -> Result<Self, RayScriptError> {
        let script = text.trim();
        let err = |message: &str| RayScriptError {
            script: script.to_string(),
            message: message.to_string(),
        };
        let (kind, rest) = script.split_once(':').ok_or_else(|| err("expected `kind: ...`"))?;
        let rest = rest.trim();
        let tokens: Vec<&str> = rest.split_whitespace().collect();
        match kind.trim() {
            "periodic" => {
                if tokens.is_empty() {
                    return Err(err("missing period word"));
                }
                Ok(RayScript::Periodic { word: rest.to_string() })
            }
            "explicit" => Ok(RayScript::Explicit { word: rest.to_string() }),
            "fixed" => match tokens.as_slice() {
                [map, "seed", seed] => Ok(RayScript::Fixed {
                    map: map.to_string(),
                    seed: seed.to_string(),
                }),
                _ => Err(err("expected `fixed: MAP seed LETTER`")),
            },
            "winf" => match tokens.as_slice() {
                [map, "target", target] => Ok(RayScript::WInfinity {
                    map: map.to_string(),
                    target: target.parse().map_err(|_| err("target is not a number"))?,
                }),
                _ => Err(err("expected `winf: MAP target LENGTH`")),
            },
            other => Err(err(&format!("unknown ray kind `{other}`"))),
        }
    }
}

impl fmt::Display for RayScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RayScript::Periodic { word } => write!(f, "periodic: {word}"),
            RayScript::Explicit { word } => write!(f, "explicit: {word}"),
            RayScript::Fixed { map, seed } => write!(f, "fixed: {map} seed {seed}"),
            RayScript::WInfinity { map, target } => write!(f, "winf: {map} target {target}"),
        }
    }
}
