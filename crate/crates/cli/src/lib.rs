// SPDX-License-Identifier: Apache-2.0

//! Command implementations behind the `laminar` binary.
//!
//! Every command returns a serialisable document carrying a schema id; the
//! binary prints a short summary and optionally writes the document as JSON.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use laminar_core::leaflang::BuildOptions;
use laminar_core::rays::WInfinityScheme;
use laminar_core::traintrack::fixtures;
use laminar_core::{
    build_ball, build_language, build_w_infinity, classify_conical, classify_injective, classify_recurrent,
    consistency_check, estimate_delta, fixed_ray, sha256_hex, BallOptions, ConsistencyReport, DeltaEstimate,
    DeltaOptions, HyperbolicityParams, LeafLanguage, Letter, Presentation, Provenance, RayScript, RayStream,
    TrainTrackMap, Verdict, VerdictKind,
};

pub const VERDICT_SCHEMA: &str = "laminar.verdict/v1";
pub const WINF_SCHEMA: &str = "laminar.winf-certificate/v1";
pub const LANGUAGE_SCHEMA: &str = "laminar.language-report/v1";
pub const CAYLEY_SCHEMA: &str = "laminar.cayley-report/v1";
pub const CACHE_ENV: &str = "LAMINAR_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".laminar-cache";
/// Field excluded when comparing documents for determinism.
pub const TIMESTAMP_FIELD: &str = "generated_at_unix";

/// Everything a run depends on. Serialised into documents so replay can
/// reconstruct the run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Map files or builtin map names; the first one drives `fixed` and `winf` rays by default.
    pub maps: Vec<String>,
    pub horizon: usize,
    pub delta: usize,
    pub r: Option<usize>,
    pub d: Option<usize>,
    pub depth: usize,
    pub ray: String,
    pub min_occurrences: usize,
    /// Window length of the recurrence test.
    pub window: usize,
    /// Factor length of the recurrence test; chosen from the ray when absent.
    pub factor_length: Option<usize>,
    /// Leaf-ray letters examined by the `w∞` builder.
    pub search_budget: usize,
    pub budget_members: u64,
    pub budget_letters: u64,
    pub budget_generations: usize,
    pub seed: Option<u64>,
    #[serde(skip)]
    pub cache_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        let build = BuildOptions::default();
        RunConfig {
            maps: vec!["tribonacci".into()],
            horizon: 400,
            delta: 1,
            r: None,
            d: None,
            depth: 2000,
            ray: "periodic: a".into(),
            min_occurrences: 5,
            window: 200,
            factor_length: None,
            search_budget: 20_000,
            budget_members: build.member_budget,
            budget_letters: build.letter_budget,
            budget_generations: build.depth_cap,
            seed: None,
            cache_dir: default_cache_dir(),
        }
    }
}

pub fn default_cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
}

impl RunConfig {
    pub fn params(&self) -> Result<HyperbolicityParams> {
        Ok(HyperbolicityParams::with_overrides(self.delta, self.r, self.d)?)
    }

    pub fn build_options(&self) -> BuildOptions {
        BuildOptions {
            member_budget: self.budget_members,
            letter_budget: self.budget_letters,
            depth_cap: self.budget_generations,
            ..BuildOptions::default()
        }
    }

    /// Invariants of a classification run.
    pub fn validate_for_classify(&self) -> Result<()> {
        if self.delta == 0 {
            bail!("delta must be at least 1");
        }
        if self.horizon < 100 * self.delta {
            bail!("horizon {} is below 100·delta = {}", self.horizon, 100 * self.delta);
        }
        if self.depth < self.horizon {
            bail!("depth {} is below the horizon {}", self.depth, self.horizon);
        }
        if self.min_occurrences == 0 {
            bail!("min-occurrences must be at least 1");
        }
        Ok(())
    }
}

fn now_unix() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Loads a map from a file, or from the builtin fixtures when no such file exists.
pub fn load_map(spec: &str) -> Result<TrainTrackMap> {
    let path = Path::new(spec);
    let text = if path.is_file() {
        fs::read_to_string(path).with_context(|| format!("reading map file {spec}"))?
    } else if let Some(text) = fixtures::by_name(spec) {
        text.to_string()
    } else {
        bail!("no map file or builtin map named `{spec}`");
    };
    let map = TrainTrackMap::parse(&text).with_context(|| format!("parsing map {spec}"))?;
    let depth = map.requested_depth().unwrap_or(8);
    map.verified(depth).with_context(|| format!("verifying map {spec}"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CacheStatus {
    Hit,
    Built,
    /// A cache file existed but was unusable; the reason is recorded.
    Rebuilt(String),
}

pub fn cache_path(cache_dir: &Path, maps: &[TrainTrackMap], horizon: usize) -> PathBuf {
    let hashes: Vec<&str> = maps.iter().map(|m| m.source_hash()).collect();
    let key = sha256_hex(hashes.join("\n").as_bytes());
    cache_dir.join(format!("language-{}-h{horizon}.json", &key[..16]))
}

/// Loads the language from the cache when its recorded sources match the
/// maps, otherwise builds it and refreshes the cache.
pub fn obtain_language(
    maps: &[TrainTrackMap],
    horizon: usize,
    options: BuildOptions,
    cache_dir: &Path,
) -> Result<(LeafLanguage, CacheStatus, PathBuf)> {
    let path = cache_path(cache_dir, maps, horizon);
    let hashes: Vec<&str> = maps.iter().map(|m| m.source_hash()).collect();
    let mut status = CacheStatus::Built;
    if path.exists() {
        match LeafLanguage::load(&path) {
            Ok(lang) if lang.matches_sources(&hashes) && lang.horizon() == horizon => {
                return Ok((lang, CacheStatus::Hit, path));
            }
            Ok(_) => status = CacheStatus::Rebuilt("recorded source hash differs from the map".into()),
            Err(e) => status = CacheStatus::Rebuilt(format!("unreadable cache: {e}")),
        }
        if let CacheStatus::Rebuilt(reason) = &status {
            eprintln!("warning: ignoring cache {}: {reason}", path.display());
        }
    }
    let lang = build_language(maps, horizon, options)?;
    if let Err(e) = lang.save(&path) {
        eprintln!("warning: could not write cache {}: {e}", path.display());
    }
    Ok((lang, status, path))
}

fn load_maps(specs: &[String]) -> Result<Vec<TrainTrackMap>> {
    if specs.is_empty() {
        bail!("at least one --map is required");
    }
    specs.iter().map(|s| load_map(s)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanguageSummary {
    pub hash: String,
    pub horizon: usize,
    pub generation_depth: usize,
    pub materialized_depth: usize,
    pub source_hashes: Vec<String>,
}

impl LanguageSummary {
    fn of(lang: &LeafLanguage) -> Self {
        LanguageSummary {
            hash: lang.hash().to_string(),
            horizon: lang.horizon(),
            generation_depth: lang.generation_depth(),
            materialized_depth: lang.materialized_depth(),
            source_hashes: lang.source_hashes().into_iter().map(str::to_string).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanguageReport {
    pub schema: String,
    pub generated_at_unix: u64,
    pub language: LanguageSummary,
    /// Number of members of each length `0..=horizon`.
    pub member_counts: Vec<u64>,
    pub cache_path: PathBuf,
    pub cache_status: CacheStatus,
}

pub fn cmd_build_language(config: &RunConfig) -> Result<LanguageReport> {
    if config.horizon == 0 {
        bail!("horizon must be at least 1");
    }
    let maps = load_maps(&config.maps)?;
    let (lang, cache_status, cache_path) =
        obtain_language(&maps, config.horizon, config.build_options(), &config.cache_dir)?;
    Ok(LanguageReport {
        schema: LANGUAGE_SCHEMA.into(),
        generated_at_unix: now_unix(),
        language: LanguageSummary::of(&lang),
        member_counts: lang.member_counts().to_vec(),
        cache_path,
        cache_status,
    })
}

/// A ray built from a script, with the `w∞` scheme when there is one.
pub struct ResolvedRay {
    pub stream: RayStream,
    pub scheme: Option<WInfinityScheme>,
}

/// Builds the ray described by `script`. `winf` rays need a language of
/// their map; it is `language` when the maps agree.
pub fn resolve_ray(script: &str, config: &RunConfig, language: &Arc<LeafLanguage>) -> Result<ResolvedRay> {
    let script = RayScript::parse(script)?;
    let alphabet = language.alphabet();
    let mut stream = match &script {
        RayScript::Periodic { word } => RayStream::periodic(alphabet.parse_word(word)?)?,
        RayScript::Explicit { word } => RayStream::explicit(alphabet.parse_word(word)?),
        RayScript::Fixed { map, seed } => {
            let map = load_map(map)?;
            let seed = map.alphabet().letter(seed)?;
            fixed_ray(Arc::new(map), seed)?
        }
        RayScript::WInfinity { map, target } => {
            let map = load_map(map)?;
            let lang = if language.matches_sources(&[map.source_hash()]) {
                language.clone()
            } else {
                let (lang, _, _) = obtain_language(
                    std::slice::from_ref(&map),
                    config.horizon,
                    config.build_options(),
                    &config.cache_dir,
                )?;
                Arc::new(lang)
            };
            let seed = first_expanding_seed(&map)?;
            let leaf = fixed_ray(Arc::new(map), seed)?;
            let (mut stream, scheme) =
                build_w_infinity(lang, config.params()?, leaf, *target, config.search_budget)?;
            stream.set_description(script.to_string());
            return Ok(ResolvedRay {
                stream,
                scheme: Some(scheme),
            });
        }
    };
    stream.set_description(script.to_string());
    Ok(ResolvedRay { stream, scheme: None })
}

/// The first generator whose image starts with itself.
pub fn first_expanding_seed(map: &TrainTrackMap) -> Result<Letter> {
    (0..map.alphabet().rank())
        .map(Letter::generator)
        .find(|&g| {
            let image = map.image(g);
            image.len() >= 2 && image.letters()[0] == g
        })
        .ok_or_else(|| anyhow!("no generator's image begins with itself, so the map has no fixed ray"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RaySummary {
    pub script: String,
    pub provenance: Provenance,
    pub depth: usize,
    /// SHA-256 of the prefix letters, as decimal codes joined by spaces.
    pub prefix_hash: String,
}

fn prefix_hash(prefix: &[Letter]) -> String {
    let codes: Vec<String> = prefix.iter().map(|l| l.0.to_string()).collect();
    sha256_hex(codes.join(" ").as_bytes())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictDocument {
    pub schema: String,
    pub generated_at_unix: u64,
    pub config: RunConfig,
    pub alphabet: Vec<String>,
    pub language: LanguageSummary,
    pub ray: RaySummary,
    /// Factor length used by the recurrence test.
    pub factor_length: usize,
    pub verdicts: Vec<Verdict>,
    pub consistency: ConsistencyReport,
}

impl VerdictDocument {
    pub fn has_unknown(&self) -> bool {
        self.verdicts.iter().any(|v| v.kind == VerdictKind::Unknown)
    }
}

/// Recurrence factor length: the configured one, else the first junction
/// length of a `w∞` ray, else 8; always below the window.
fn recurrence_factor_length(config: &RunConfig, scheme: Option<&WInfinityScheme>) -> usize {
    let cap = config.window.saturating_sub(1).max(1);
    config
        .factor_length
        .or_else(|| scheme.and_then(|s| s.first_junction_len(cap)))
        .unwrap_or(8)
        .clamp(1, cap)
}

pub fn cmd_classify(config: &RunConfig) -> Result<VerdictDocument> {
    config.validate_for_classify()?;
    let params = config.params()?;
    let maps = load_maps(&config.maps)?;
    let (lang, _, _) = obtain_language(&maps, config.horizon, config.build_options(), &config.cache_dir)?;
    let lang = Arc::new(lang);
    let mut ray = resolve_ray(&config.ray, config, &lang)?;
    let prefix = ray.stream.extend(config.depth)?.into_letters();
    let k = recurrence_factor_length(config, ray.scheme.as_ref());

    let (conical, injective, recurrent) = std::thread::scope(|s| {
        let conical = s.spawn(|| classify_conical(&prefix, &lang, &params, config.min_occurrences));
        let injective = s.spawn(|| classify_injective(&prefix, &lang, &params));
        let recurrent = classify_recurrent(&prefix, config.window, k);
        (conical.join(), injective.join(), recurrent)
    });
    let verdicts = vec![
        conical.map_err(|_| anyhow!("conical classifier panicked"))??,
        injective.map_err(|_| anyhow!("injective classifier panicked"))??,
        recurrent?,
    ];
    let consistency = consistency_check(&verdicts)?;
    Ok(VerdictDocument {
        schema: VERDICT_SCHEMA.into(),
        generated_at_unix: now_unix(),
        config: config.clone(),
        alphabet: lang.alphabet().generators().to_vec(),
        language: LanguageSummary::of(&lang),
        ray: RaySummary {
            script: config.ray.clone(),
            provenance: ray.stream.provenance().clone(),
            depth: prefix.len(),
            prefix_hash: prefix_hash(&prefix),
        },
        factor_length: k,
        verdicts,
        consistency,
    })
}

/// Rendered view of one `w∞` unit, for reading the certificate by eye.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockText {
    pub m: usize,
    pub v: String,
    pub u: String,
    pub t: String,
    pub alpha: String,
    pub kappa: usize,
    pub offset: usize,
    pub truncation_non_leaf: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WInfinityDocument {
    pub schema: String,
    pub generated_at_unix: u64,
    pub config: RunConfig,
    pub target: usize,
    pub alphabet: Vec<String>,
    pub language: LanguageSummary,
    pub leaf_seed: String,
    pub blocks: Vec<BlockText>,
    pub scheme: WInfinityScheme,
    pub prefix_hash: String,
    pub replay: String,
}

pub fn cmd_winf(config: &RunConfig, target: usize) -> Result<WInfinityDocument> {
    if config.delta == 0 {
        bail!("delta must be at least 1");
    }
    let maps = load_maps(&config.maps)?;
    let (lang, _, _) = obtain_language(&maps, config.horizon, config.build_options(), &config.cache_dir)?;
    let lang = Arc::new(lang);
    let seed = first_expanding_seed(&maps[0])?;
    let leaf = fixed_ray(Arc::new(maps[0].clone()), seed)?;
    let (mut stream, scheme) = build_w_infinity(lang.clone(), config.params()?, leaf, target, config.search_budget)?;
    let prefix = stream.extend(target)?.into_letters();
    let alphabet = lang.alphabet();
    let blocks = scheme
        .blocks
        .iter()
        .map(|b| BlockText {
            m: b.m,
            v: alphabet.render(&b.v),
            u: alphabet.render(&b.u),
            t: alphabet.render(&b.t),
            alpha: alphabet.render(&b.alpha),
            kappa: b.kappa,
            offset: b.offset,
            truncation_non_leaf: b.certificate.non_leaf,
        })
        .collect();
    Ok(WInfinityDocument {
        schema: WINF_SCHEMA.into(),
        generated_at_unix: now_unix(),
        config: config.clone(),
        target,
        alphabet: alphabet.generators().to_vec(),
        language: LanguageSummary::of(&lang),
        leaf_seed: alphabet.name(seed),
        blocks,
        scheme,
        prefix_hash: prefix_hash(&prefix),
        replay: "laminar replay-certificate --certificate FILE".into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub schema: String,
    pub checks: Vec<String>,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

/// Re-verifies a stored verdict or `w∞` document. Languages come from the
/// cache directory of `cache_dir`; recorded source hashes must match.
pub fn cmd_replay_certificate(path: &Path, cache_dir: &Path) -> Result<ReplayReport> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text).context("certificate is not JSON")?;
    let schema = value
        .get("schema")
        .and_then(|s| s.as_str())
        .ok_or_else(|| anyhow!("document has no schema"))?
        .to_string();
    let mut checks = Vec::new();
    let outcome = match schema.as_str() {
        VERDICT_SCHEMA => replay_verdicts(serde_json::from_value(value)?, cache_dir, &mut checks),
        WINF_SCHEMA => replay_winf(serde_json::from_value(value)?, cache_dir, &mut checks),
        other => bail!("unsupported schema `{other}`"),
    }?;
    Ok(ReplayReport {
        schema,
        checks,
        ok: outcome.is_none(),
        failure: outcome,
    })
}

fn replay_language(config: &RunConfig, cache_dir: &Path, expected: &LanguageSummary) -> Result<Result<LeafLanguage, String>> {
    let maps = load_maps(&config.maps)?;
    let hashes: Vec<String> = maps.iter().map(|m| m.source_hash().to_string()).collect();
    if hashes != expected.source_hashes {
        return Ok(Err("map files differ from the recorded source hashes".into()));
    }
    let (lang, _, _) = obtain_language(&maps, config.horizon, config.build_options(), cache_dir)?;
    if lang.hash() != expected.hash {
        return Ok(Err(format!("language hash {} differs from recorded {}", lang.hash(), expected.hash)));
    }
    Ok(Ok(lang))
}

fn replay_verdicts(doc: VerdictDocument, cache_dir: &Path, checks: &mut Vec<String>) -> Result<Option<String>> {
    let mut config = doc.config.clone();
    config.cache_dir = cache_dir.to_path_buf();
    let lang = match replay_language(&config, cache_dir, &doc.language)? {
        Ok(lang) => Arc::new(lang),
        Err(failure) => return Ok(Some(failure)),
    };
    checks.push("language hash".into());
    let mut ray = resolve_ray(&config.ray, &config, &lang)?;
    let prefix = ray.stream.extend(config.depth)?.into_letters();
    if prefix_hash(&prefix) != doc.ray.prefix_hash {
        return Ok(Some("ray prefix differs from the recorded one".into()));
    }
    checks.push("ray prefix".into());
    for verdict in &doc.verdicts {
        if let Some(cert) = verdict.certificate() {
            if let Err(e) = cert.replay(&lang, &prefix) {
                return Ok(Some(format!("conical certificate: {e}")));
            }
            checks.push(format!("conical certificate with {} occurrences", cert.occurrences.len()));
        }
    }
    let fresh = cmd_classify(&config)?;
    if fresh.verdicts != doc.verdicts {
        return Ok(Some("recomputed verdicts differ".into()));
    }
    checks.push("verdicts recomputed".into());
    Ok(None)
}

fn replay_winf(doc: WInfinityDocument, cache_dir: &Path, checks: &mut Vec<String>) -> Result<Option<String>> {
    let mut config = doc.config.clone();
    config.cache_dir = cache_dir.to_path_buf();
    let lang = match replay_language(&config, cache_dir, &doc.language)? {
        Ok(lang) => lang,
        Err(failure) => return Ok(Some(failure)),
    };
    checks.push("language hash".into());
    let map = load_map(&config.maps[0])?;
    let seed = map.alphabet().letter(&doc.leaf_seed)?;
    let mut leaf = fixed_ray(Arc::new(map), seed)?;
    let leaf_prefix = leaf.extend(doc.scheme.examined_length)?.into_letters();
    if let Err(e) = doc.scheme.replay(&lang, &leaf_prefix) {
        return Ok(Some(format!("scheme: {e}")));
    }
    checks.push(format!("{} blocks and their non-leaf certificates", doc.scheme.blocks.len()));
    let prefix = doc.scheme.assemble();
    let target = doc.target.min(prefix.len());
    if prefix_hash(&prefix[..target]) != doc.prefix_hash {
        return Ok(Some("assembled prefix differs from the recorded one".into()));
    }
    checks.push("assembled prefix".into());
    Ok(None)
}

/// Builtin presentation names: `free2` (or `freeN`), `z2`, `genus2`; anything
/// else is read as a presentation file.
pub fn load_presentation(spec: &str) -> Result<Presentation> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = fs::read_to_string(path).with_context(|| format!("reading {spec}"))?;
        return Ok(Presentation::parse(&text)?);
    }
    match spec {
        "z2" => Ok(Presentation::z2()),
        "genus2" => Ok(Presentation::genus2_surface()),
        _ => match spec.strip_prefix("free").and_then(|n| n.parse::<usize>().ok()) {
            Some(rank) if rank >= 1 => Ok(Presentation::free(rank)),
            _ => bail!("no presentation file or builtin presentation named `{spec}`"),
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyRadius {
    pub radius: usize,
    pub vertices: usize,
    pub sphere_sizes: Vec<usize>,
    pub confirmed: bool,
    pub margin: usize,
    pub delta: DeltaEstimate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyReport {
    pub schema: String,
    pub generated_at_unix: u64,
    pub presentation: String,
    pub alphabet: Vec<String>,
    pub relators: Vec<String>,
    pub radii: Vec<CayleyRadius>,
}

pub fn cmd_cayley(
    presentation: &str,
    radii: &[usize],
    seed: Option<u64>,
    max_cosets: Option<usize>,
) -> Result<CayleyReport> {
    let p = load_presentation(presentation)?;
    let mut options = BallOptions::default();
    if let Some(budget) = max_cosets {
        options.max_cosets = budget;
    }
    let mut out = Vec::new();
    for &radius in radii {
        let ball = build_ball(&p, radius, options)?;
        let delta = estimate_delta(
            &ball,
            DeltaOptions {
                seed,
                ..DeltaOptions::default()
            },
        );
        out.push(CayleyRadius {
            radius,
            vertices: ball.vertex_count(),
            sphere_sizes: ball.sphere_sizes(),
            confirmed: ball.confirmed(),
            margin: ball.margin(),
            delta,
        });
    }
    Ok(CayleyReport {
        schema: CAYLEY_SCHEMA.into(),
        generated_at_unix: now_unix(),
        presentation: presentation.into(),
        alphabet: p.alphabet().generators().to_vec(),
        relators: p.relators().iter().map(|r| p.alphabet().render(r)).collect(),
        radii: out,
    })
}

/// Parses `1,2,5` or `1..6` (inclusive).
pub fn parse_radii(text: &str) -> Result<Vec<usize>> {
    if let Some((a, b)) = text.split_once("..") {
        let (a, b): (usize, usize) = (a.trim().parse()?, b.trim().parse()?);
        if a > b {
            bail!("empty radius range {text}");
        }
        return Ok((a..=b).collect());
    }
    text.split(',')
        .map(|r| r.trim().parse::<usize>().map_err(|e| anyhow!("bad radius `{r}`: {e}")))
        .collect()
}

/// JSON of a document with the timestamp removed, for determinism checks.
pub fn without_timestamp<T: Serialize>(doc: &T) -> Result<String> {
    let mut value = serde_json::to_value(doc)?;
    if let Some(map) = value.as_object_mut() {
        map.remove(TIMESTAMP_FIELD);
    }
    Ok(serde_json::to_string_pretty(&value)?)
}

pub fn write_document<T: Serialize>(doc: &T, out: &Path) -> Result<()> {
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(out, serde_json::to_string_pretty(doc)? + "\n").with_context(|| format!("writing {}", out.display()))
}

/// One line per verdict.
pub fn summarize_verdicts(doc: &VerdictDocument) -> String {
    let mut lines = vec![format!(
        "ray `{}` at depth {} against language {} (horizon {})",
        doc.ray.script,
        doc.ray.depth,
        &doc.language.hash[..12],
        doc.language.horizon
    )];
    for v in &doc.verdicts {
        lines.push(format!("{:?}: {:?}", v.classifier, v.kind));
    }
    lines.push(match &doc.consistency.flagged {
        None => "consistent".into(),
        Some(reason) => format!("INCONSISTENT: {reason}"),
    });
    lines.join("\n")
}
