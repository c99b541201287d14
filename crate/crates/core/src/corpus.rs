//! Corpus ingestion and class-rebalanced expert dataset construction.
//!
//! Dataset files are UTF-8 JSON lines. Each line carries `id`, `text`,
//! `label` ("B" or "N") and, for biased records only, `bias_types` as a
//! three-slot 0/1 array ordered `[AC, DI, ANB]`:
//!
//! ```text
//! {"id":"s1","text":"...","label":"B","bias_types":[1,0,0]}
//! {"id":"s2","text":"...","label":"N"}
//! ```

use crate::digest::sha256_hex;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::collections::HashSet;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use thiserror::Error;

/// Multi-hot vector over the three bias categories, fixed order [AC, DI, ANB].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[u8; 3]", into = "[u8; 3]")]
pub struct BiasVector {
    pub ac: bool,
    pub di: bool,
    pub anb: bool,
}

impl BiasVector {
    pub const ZERO: BiasVector = BiasVector::new(false, false, false);

    pub const fn new(ac: bool, di: bool, anb: bool) -> Self {
        BiasVector { ac, di, anb }
    }

    pub fn from_slots(slots: [bool; 3]) -> Self {
        BiasVector::new(slots[0], slots[1], slots[2])
    }

    pub fn slots(&self) -> [bool; 3] {
        [self.ac, self.di, self.anb]
    }

    pub fn bits(&self) -> [u8; 3] {
        self.slots().map(u8::from)
    }

    /// True when at least one category is set.
    pub fn any(&self) -> bool {
        self.ac || self.di || self.anb
    }
}

impl TryFrom<[u8; 3]> for BiasVector {
    type Error = String;

    fn try_from(bits: [u8; 3]) -> Result<Self, Self::Error> {
        for (i, b) in bits.iter().enumerate() {
            if *b > 1 {
                return Err(format!("bias_types slot {i} must be 0 or 1, got {b}"));
            }
        }
        Ok(BiasVector::new(bits[0] == 1, bits[1] == 1, bits[2] == 1))
    }
}

impl From<BiasVector> for [u8; 3] {
    fn from(v: BiasVector) -> [u8; 3] {
        v.bits()
    }
}

impl std::fmt::Display for BiasVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let b = self.bits();
        write!(f, "[{}, {}, {}]", b[0], b[1], b[2])
    }
}

/// Gold sentence-level label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "B")]
    Biased,
    #[serde(rename = "N")]
    NonBiased,
}

/// One corpus sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceRecord {
    pub id: String,
    pub text: String,
    pub label: Label,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bias_types: Option<BiasVector>,
}

impl SentenceRecord {
    pub fn is_biased(&self) -> bool {
        self.label == Label::Biased
    }
}

/// Which split a file is loaded as. Recorded in stats and manifests; the
/// record schema is identical across splits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitKind {
    Train,
    Dev,
    Test,
}

impl std::fmt::Display for SplitKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SplitKind::Train => "train",
            SplitKind::Dev => "dev",
            SplitKind::Test => "test",
        })
    }
}

impl std::str::FromStr for SplitKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "train" => Ok(SplitKind::Train),
            "dev" => Ok(SplitKind::Dev),
            "test" => Ok(SplitKind::Test),
            other => Err(format!("unknown split {other:?}")),
        }
    }
}

/// An immutable, validated dataset. Records keep file order.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub split: SplitKind,
    records: Vec<SentenceRecord>,
}

impl Dataset {
    /// Validates every record; see [`load_dataset`] for the error contract.
    pub fn new(split: SplitKind, records: Vec<SentenceRecord>) -> Result<Self, CorpusError> {
        let mut seen = HashSet::with_capacity(records.len());
        for rec in &records {
            validate_record(rec)?;
            if !seen.insert(rec.id.clone()) {
                return Err(CorpusError::DuplicateId(rec.id.clone()));
            }
        }
        Ok(Dataset { split, records })
    }

    pub fn records(&self) -> &[SentenceRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&SentenceRecord> {
        self.records.iter().find(|r| r.id == id)
    }
}

/// Per-split tallies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitStats {
    pub n_biased: usize,
    pub n_nonbiased: usize,
    pub n_total: usize,
    /// Sum of each bias-type slot over biased records, order [AC, DI, ANB].
    pub per_type_counts: [usize; 3],
}

/// One expert's training composition: every biased id plus a slice of the
/// non-biased pool (experts 1..k), or the whole corpus (expert k+1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpertDataset {
    pub expert_id: u32,
    pub biased_ids: Vec<String>,
    pub nonbiased_ids: Vec<String>,
    pub seed: u64,
}

impl ExpertDataset {
    /// Non-biased to biased size ratio.
    pub fn ratio(&self) -> f64 {
        if self.biased_ids.is_empty() {
            return 0.0;
        }
        self.nonbiased_ids.len() as f64 / self.biased_ids.len() as f64
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: malformed record: {detail}")]
    MalformedLine { line: usize, detail: String },
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("record {0:?}: bias_types presence contradicts label")]
    LabelVectorMismatch(String),
    #[error("rebalancing needs at least one record of each class")]
    EmptyClass,
    #[error("subset count must be at least 2, got {0}")]
    InvalidSubsetCount(usize),
    #[error("unknown expert id {0} in dataset export")]
    UnknownExpertRecord(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn validate_record(rec: &SentenceRecord) -> Result<(), CorpusError> {
    match (rec.label, rec.bias_types) {
        (Label::Biased, Some(v)) if v.any() => Ok(()),
        (Label::NonBiased, None) => Ok(()),
        _ => Err(CorpusError::LabelVectorMismatch(rec.id.clone())),
    }
}

/// Loads and validates a line-delimited dataset file. Blank lines are
/// permitted and skipped; record order is preserved.
pub fn load_dataset(path: &Path, split: SplitKind) -> Result<Dataset, CorpusError> {
    let file = std::fs::File::open(path)?;
    let reader = BufReader::new(file);
    let mut records = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let rec: SentenceRecord =
            serde_json::from_str(trimmed).map_err(|e| CorpusError::MalformedLine {
                line: lineno,
                detail: e.to_string(),
            })?;
        if rec.id.is_empty() {
            return Err(CorpusError::MalformedLine {
                line: lineno,
                detail: "empty id".into(),
            });
        }
        if rec.text.is_empty() {
            return Err(CorpusError::MalformedLine {
                line: lineno,
                detail: "empty text".into(),
            });
        }
        records.push(rec);
    }
    Dataset::new(split, records)
}

/// Writes records as one JSON object per line, trailing newline included.
pub fn write_records(records: &[SentenceRecord], path: &Path) -> Result<(), CorpusError> {
    let mut out = Vec::new();
    for rec in records {
        // serialization of a validated record cannot fail
        let line = serde_json::to_string(rec).expect("record serializes");
        out.extend_from_slice(line.as_bytes());
        out.push(b'\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Exact tallies over a dataset.
pub fn dataset_stats(dataset: &Dataset) -> SplitStats {
    let mut stats = SplitStats {
        n_biased: 0,
        n_nonbiased: 0,
        n_total: dataset.len(),
        per_type_counts: [0; 3],
    };
    for rec in dataset.records() {
        match rec.label {
            Label::Biased => {
                stats.n_biased += 1;
                if let Some(v) = rec.bias_types {
                    for (slot, set) in stats.per_type_counts.iter_mut().zip(v.slots()) {
                        *slot += usize::from(set);
                    }
                }
            }
            Label::NonBiased => stats.n_nonbiased += 1,
        }
    }
    stats
}

/// Builds the k+1 expert datasets: the non-biased pool is shuffled by
/// `seed` and split into k contiguous near-equal parts (the first
/// `n mod k` parts take one extra element), each paired with the full
/// biased pool; expert k+1 is the unsplit corpus and does not depend on
/// the seed.
pub fn rebalance(dataset: &Dataset, k: usize, seed: u64) -> Result<Vec<ExpertDataset>, CorpusError> {
    if k < 2 {
        return Err(CorpusError::InvalidSubsetCount(k));
    }
    let biased: Vec<String> = dataset
        .records()
        .iter()
        .filter(|r| r.is_biased())
        .map(|r| r.id.clone())
        .collect();
    let nonbiased: Vec<String> = dataset
        .records()
        .iter()
        .filter(|r| !r.is_biased())
        .map(|r| r.id.clone())
        .collect();
    if biased.is_empty() || nonbiased.is_empty() {
        return Err(CorpusError::EmptyClass);
    }

    let mut pool = nonbiased.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pool.shuffle(&mut rng);

    let base = pool.len() / k;
    let extra = pool.len() % k;
    let mut experts = Vec::with_capacity(k + 1);
    let mut offset = 0;
    for i in 0..k {
        let size = base + usize::from(i < extra);
        experts.push(ExpertDataset {
            expert_id: (i + 1) as u32,
            biased_ids: biased.clone(),
            nonbiased_ids: pool[offset..offset + size].to_vec(),
            seed,
        });
        offset += size;
    }
    experts.push(ExpertDataset {
        expert_id: (k + 1) as u32,
        biased_ids: biased,
        nonbiased_ids: nonbiased,
        seed,
    });
    Ok(experts)
}

/// Manifest entry for one exported expert file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpertFileEntry {
    pub expert_id: u32,
    pub file: String,
    pub n_biased: usize,
    pub n_nonbiased: usize,
    pub ratio: f64,
    pub sha256: String,
}

/// Manifest for an exported set of expert datasets. Contains no
/// timestamps, so re-running with the same seed is byte-identical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RebalanceManifest {
    pub seed: u64,
    pub subsets: usize,
    pub files: Vec<ExpertFileEntry>,
}

pub const REBALANCE_MANIFEST_FILE: &str = "manifest.json";

/// Writes one JSONL file per expert (`expert_<id>.jsonl`, biased block in
/// corpus order followed by the non-biased ids in subset order) plus a
/// manifest with sizes and per-file digests.
pub fn export_expert_datasets(
    dataset: &Dataset,
    experts: &[ExpertDataset],
    out_dir: &Path,
) -> Result<RebalanceManifest, CorpusError> {
    std::fs::create_dir_all(out_dir)?;
    let by_id: BTreeMap<&str, &SentenceRecord> = dataset
        .records()
        .iter()
        .map(|r| (r.id.as_str(), r))
        .collect();
    let lookup = |id: &String| -> Result<SentenceRecord, CorpusError> {
        by_id
            .get(id.as_str())
            .map(|r| (*r).clone())
            .ok_or_else(|| CorpusError::UnknownExpertRecord(id.clone()))
    };

    let mut files = Vec::with_capacity(experts.len());
    for expert in experts {
        let mut records = Vec::with_capacity(expert.biased_ids.len() + expert.nonbiased_ids.len());
        for id in expert.biased_ids.iter().chain(&expert.nonbiased_ids) {
            records.push(lookup(id)?);
        }
        let name = format!("expert_{}.jsonl", expert.expert_id);
        let path = out_dir.join(&name);
        write_records(&records, &path)?;
        let digest = crate::digest::sha256_file(&path)?;
        files.push(ExpertFileEntry {
            expert_id: expert.expert_id,
            file: name,
            n_biased: expert.biased_ids.len(),
            n_nonbiased: expert.nonbiased_ids.len(),
            ratio: expert.ratio(),
            sha256: digest,
        });
    }
    let manifest = RebalanceManifest {
        seed: experts.first().map(|e| e.seed).unwrap_or(0),
        subsets: experts.len().saturating_sub(1),
        files,
    };
    let mut body = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    body.push('\n');
    std::fs::write(out_dir.join(REBALANCE_MANIFEST_FILE), body)?;
    Ok(manifest)
}

/// Digest of the manifest body, convenient for replay checks.
pub fn manifest_digest(manifest: &RebalanceManifest) -> String {
    sha256_hex(serde_json::to_string(manifest).expect("manifest serializes").as_bytes())
}
