//! Relation and bonding-system file formats.
//!
//! Relation text files are line oriented:
//!
//! ```text
//! relation v1 3
//! labels a b c
//! # comment
//! 0 0
//! 2 1
//! ```
//!
//! The `labels` line is optional. A JSON mirror carries the same fields.
//! System files are TOML, see [`SystemFile`].

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mahavier::{BondingSystem, MahavierError};
use crate::preorder::{build_preorder, PreorderError};
use crate::relation::{BinaryRelation, EndoRelation, RelationError};

pub const RELATION_TAG: &str = "relation";
pub const SYSTEM_TAG: &str = "system";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("line {line}: expected header `relation v1 <n>`, found `{text}`")]
    BadHeader { line: usize, text: String },
    #[error("missing header `relation v1 <n>`")]
    MissingHeader,
    #[error("line {line}: unsupported format version `{version}`")]
    UnsupportedVersion { line: usize, version: String },
    #[error("line {line}: malformed line `{text}`")]
    Malformed { line: usize, text: String },
    #[error("line {line}: id {id} out of range for n = {n}")]
    OutOfRange { line: usize, id: usize, n: usize },
    #[error("line {line}: duplicate pair ({a}, {b})")]
    Duplicate { line: usize, a: usize, b: usize },
    #[error("line {line}: expected {expected} labels, got {got}")]
    LabelCount { line: usize, expected: usize, got: usize },
    #[error("line {line}: {source}")]
    Relation {
        line: usize,
        #[source]
        source: RelationError,
    },
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("invalid TOML: {0}")]
    Toml(String),
    #[error("format tag `{found}`, expected `{expected}`")]
    WrongFormat { expected: &'static str, found: String },
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("bond key `{0}` is not of the form `p,q`")]
    BondKey(String),
    #[error("bond {key}: unknown keyword `{word}` (expected `identity` or `default`)")]
    BondKeyword { key: String, word: String },
    #[error("bond {0} refers to `default` but no default relation is given")]
    NoDefault(String),
    #[error("bond {key}: {source}")]
    BondRelation {
        key: String,
        #[source]
        source: RelationError,
    },
    #[error("bond {key}: `identity` needs equal sizes, got {src} and {dst}")]
    IdentityShape { key: String, src: usize, dst: usize },
    #[error(transparent)]
    Preorder(#[from] PreorderError),
    #[error(transparent)]
    System(#[from] MahavierError),
}

/// A relation together with optional display labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationFile {
    pub relation: EndoRelation,
    pub labels: Option<Vec<String>>,
}

fn parse_header(line: usize, text: &str) -> Result<usize, IoError> {
    let bad = || IoError::BadHeader {
        line,
        text: text.to_string(),
    };
    let mut words = text.split_whitespace();
    if words.next() != Some(RELATION_TAG) {
        return Err(bad());
    }
    let version = words.next().ok_or_else(bad)?;
    if version != "v1" {
        return Err(IoError::UnsupportedVersion {
            line,
            version: version.to_string(),
        });
    }
    let n = words.next().and_then(|w| w.parse().ok()).ok_or_else(bad)?;
    if words.next().is_some() {
        return Err(bad());
    }
    Ok(n)
}

impl RelationFile {
    pub fn new(relation: EndoRelation) -> Self {
        RelationFile { relation, labels: None }
    }

    /// Parses the text format. Line numbers in errors are 1-based.
    pub fn parse(text: &str) -> Result<Self, IoError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (header_line, header) = lines.next().ok_or(IoError::MissingHeader)?;
        let n = parse_header(header_line, header)?;
        let mut relation = EndoRelation::empty(n).map_err(|source| IoError::Relation {
            line: header_line,
            source,
        })?;
        let mut labels = None;
        let mut seen_pair = false;
        for (line, text) in lines {
            if let Some(rest) = text.strip_prefix("labels") {
                if labels.is_some() || seen_pair || !rest.starts_with(char::is_whitespace) {
                    return Err(IoError::Malformed {
                        line,
                        text: text.to_string(),
                    });
                }
                let words: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if words.len() != n {
                    return Err(IoError::LabelCount {
                        line,
                        expected: n,
                        got: words.len(),
                    });
                }
                labels = Some(words);
                continue;
            }
            let ids: Vec<usize> = text
                .split_whitespace()
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|_| IoError::Malformed {
                    line,
                    text: text.to_string(),
                })?;
            let [a, b] = ids[..] else {
                return Err(IoError::Malformed {
                    line,
                    text: text.to_string(),
                });
            };
            if let Some(&id) = [a, b].iter().find(|&&id| id >= n) {
                return Err(IoError::OutOfRange { line, id, n });
            }
            if relation.contains(a, b) {
                return Err(IoError::Duplicate { line, a, b });
            }
            relation.insert(a, b).expect("range checked");
            seen_pair = true;
        }
        Ok(RelationFile { relation, labels })
    }

    /// Canonical text: header, labels if any, pairs in lexicographic order.
    pub fn to_text(&self) -> String {
        let mut out = format!("{RELATION_TAG} v1 {}\n", self.relation.size());
        if let Some(labels) = &self.labels {
            out.push_str("labels ");
            out.push_str(&labels.join(" "));
            out.push('\n');
        }
        for (a, b) in self.relation.pairs() {
            out.push_str(&format!("{a} {b}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = RelationJson {
            format: RELATION_TAG.to_string(),
            version: FORMAT_VERSION,
            n: self.relation.size(),
            labels: self.labels.clone(),
            pairs: self.relation.pairs().collect(),
        };
        serde_json::to_string_pretty(&doc).expect("plain data")
    }

    pub fn from_json(text: &str) -> Result<Self, IoError> {
        let doc: RelationJson = serde_json::from_str(text).map_err(|e| IoError::Json(e.to_string()))?;
        if doc.format != RELATION_TAG {
            return Err(IoError::WrongFormat {
                expected: RELATION_TAG,
                found: doc.format,
            });
        }
        if doc.version != FORMAT_VERSION {
            return Err(IoError::Version(doc.version));
        }
        if let Some(labels) = &doc.labels {
            if labels.len() != doc.n {
                return Err(IoError::LabelCount {
                    line: 0,
                    expected: doc.n,
                    got: labels.len(),
                });
            }
        }
        let mut seen = BTreeSet::new();
        if let Some(&(a, b)) = doc.pairs.iter().find(|&&p| !seen.insert(p)) {
            return Err(IoError::Duplicate { line: 0, a, b });
        }
        let relation =
            EndoRelation::from_pairs(doc.n, doc.pairs).map_err(|source| IoError::Relation { line: 0, source })?;
        Ok(RelationFile {
            relation,
            labels: doc.labels,
        })
    }

    /// Accepts either format; JSON is recognised by a leading `{`.
    pub fn parse_any(text: &str) -> Result<Self, IoError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::parse(text)
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationJson {
    format: String,
    version: u32,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    pairs: Vec<(usize, usize)>,
}

pub fn parse_relation(text: &str) -> Result<EndoRelation, IoError> {
    RelationFile::parse(text).map(|f| f.relation)
}

pub fn serialize_relation(r: &EndoRelation) -> String {
    RelationFile::new(r.clone()).to_text()
}

/// A bond entry: an explicit pair list `[[a, b], …]` with `a ∈ X_q`,
/// `b ∈ X_p`, or one of the keywords `identity` and `default`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BondSpec {
    Pairs(Vec<(usize, usize)>),
    Keyword(String),
}

/// TOML description of a bonding system.
///
/// ```toml
/// format = "system"
/// version = 1
/// indices = 3
/// order = [[0, 1], [1, 2]]
/// sizes = [2, 2, 2]
/// default = [[0, 0], [1, 0], [1, 1]]
///
/// [bonds]
/// "0,2" = [[0, 0], [1, 1]]
/// ```
///
/// `order` is closed reflexively and transitively. Comparable pairs without
/// an entry get `ι` on the diagonal and the shared `default` elsewhere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub format: String,
    pub version: u32,
    pub indices: usize,
    #[serde(default)]
    pub order: Vec<(usize, usize)>,
    pub sizes: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default: Option<Vec<(usize, usize)>>,
    #[serde(default)]
    pub bonds: BTreeMap<String, BondSpec>,
}

fn parse_key(key: &str) -> Result<(usize, usize), IoError> {
    let bad = || IoError::BondKey(key.to_string());
    let (p, q) = key.split_once(',').ok_or_else(bad)?;
    Ok((p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?))
}

impl SystemFile {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        let file: SystemFile = toml::from_str(text).map_err(|e| IoError::Toml(e.to_string()))?;
        if file.format != SYSTEM_TAG {
            return Err(IoError::WrongFormat {
                expected: SYSTEM_TAG,
                found: file.format,
            });
        }
        if file.version != FORMAT_VERSION {
            return Err(IoError::Version(file.version));
        }
        Ok(file)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("plain data")
    }

    /// Resolves keywords and defaults into a validated system.
    pub fn to_system(&self) -> Result<BondingSystem, IoError> {
        let preorder = build_preorder(self.indices, self.order.iter().copied())?.preorder;
        if self.sizes.len() != self.indices {
            return Err(MahavierError::SizeCount {
                expected: self.indices,
                got: self.sizes.len(),
            }
            .into());
        }
        let mut explicit = BTreeMap::new();
        for (key, spec) in &self.bonds {
            let (p, q) = parse_key(key)?;
            if p >= self.indices || q >= self.indices || !preorder.leq(p, q) {
                return Err(MahavierError::UnexpectedBond { p, q }.into());
            }
            explicit.insert((p, q), (key.clone(), spec));
        }
        let mut bonds = Vec::new();
        for (p, q) in preorder.comparable_pairs() {
            let key = format!("{p},{q}");
            let keyword;
            let spec = match explicit.get(&(p, q)) {
                Some((_, spec)) => *spec,
                None => {
                    keyword = BondSpec::Keyword(if p == q { "identity" } else { "default" }.to_string());
                    &keyword
                }
            };
            let (src, dst) = (self.sizes[q], self.sizes[p]);
            let pairs = match spec {
                BondSpec::Pairs(pairs) => pairs.clone(),
                BondSpec::Keyword(w) if w == "identity" => {
                    if src != dst {
                        return Err(IoError::IdentityShape { key, src, dst });
                    }
                    (0..src).map(|a| (a, a)).collect()
                }
                BondSpec::Keyword(w) if w == "default" => {
                    self.default.clone().ok_or_else(|| IoError::NoDefault(key.clone()))?
                }
                BondSpec::Keyword(w) => {
                    return Err(IoError::BondKeyword {
                        key,
                        word: w.clone(),
                    })
                }
            };
            let bond = BinaryRelation::from_pairs(src, dst, pairs)
                .map_err(|source| IoError::BondRelation { key, source })?;
            bonds.push(((p, q), bond));
        }
        Ok(BondingSystem::new(preorder, self.sizes.clone(), bonds)?)
    }

    /// Writes every bond explicitly, diagonal identities as `identity`.
    pub fn from_system(sys: &BondingSystem) -> Self {
        let bonds = sys
            .bonds()
            .map(|((p, q), bond)| {
                let is_identity = p == q
                    && bond.src_size() == bond.dst_size()
                    && bond.pair_count() == bond.src_size()
                    && (0..bond.src_size()).all(|a| bond.contains(a, a));
                let spec = if is_identity {
                    BondSpec::Keyword("identity".to_string())
                } else {
                    BondSpec::Pairs(bond.pairs().collect())
                };
                (format!("{p},{q}"), spec)
            })
            .collect();
        SystemFile {
            format: SYSTEM_TAG.to_string(),
            version: FORMAT_VERSION,
            indices: sys.preorder().len(),
            order: sys.preorder().strict_pairs(),
            sizes: sys.sizes().to_vec(),
            default: None,
            bonds,
        }
    }
}

pub fn parse_system(text: &str) -> Result<BondingSystem, IoError> {
    SystemFile::parse(text)?.to_system()
}

pub fn serialize_system(sys: &BondingSystem) -> String {
    SystemFile::from_system(sys).to_toml()
}
