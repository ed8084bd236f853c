//! The JSON document format shared by every command.
//!
//! ```text
//! {
//!   "kind": "box",
//!   "n": 2,
//!   "metadata": {},
//!   "entries": [
//!     {"s":"00","a":"00","value":"1/2"},
//!     ...
//!   ]
//! }
//! ```
//!
//! Entries are written one per line in lexicographic key order, so equal
//! objects always serialize to identical bytes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use hardybox::bellpoly::{Certificate, DeterministicStrategy};
use hardybox::boxspace::{BinaryVector, BoxTable, CorrelationTable, Parties, Rational};
use hardybox::functional::{BellFunctional, CorrelationFunctional};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::rational::parse_rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Box,
    Functional,
    Correlations,
    Certificate,
}

impl Kind {
    fn as_str(self) -> &'static str {
        match self {
            Kind::Box => "box",
            Kind::Functional => "functional",
            Kind::Correlations => "correlations",
            Kind::Certificate => "certificate",
        }
    }
}

/// One record. The variant fixes which keys appear.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entry {
    /// `{s, a, value}`: boxes, functionals, nonlocality certificates.
    Event {
        s: BinaryVector,
        a: BinaryVector,
        value: Rational,
    },
    /// `{c, s, value}` with `s ⊆ c`: correlation tables.
    Subset {
        c: BinaryVector,
        s: BinaryVector,
        value: Rational,
    },
    /// `{a, b, value}`: vertex weights of a locality certificate.
    Strategy {
        a: BinaryVector,
        b: BinaryVector,
        value: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub kind: Kind,
    pub n: usize,
    pub metadata: BTreeMap<String, Value>,
    pub entries: Vec<Entry>,
}

/// A typed view of a document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Object {
    Box(BoxTable),
    Functional(BellFunctional),
    Correlations(CorrelationTable),
    /// Correlation coefficients of a functional (`"of": "functional"`).
    Coefficients(CorrelationFunctional),
    Certificate(Certificate),
}

#[derive(Clone, Copy, Debug)]
pub struct ParseOptions {
    pub strict: bool,
    pub limit: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    kind: Kind,
    n: usize,
    #[serde(default)]
    metadata: BTreeMap<String, Value>,
    entries: Vec<BTreeMap<String, String>>,
}

#[derive(Serialize)]
struct EventRecord<'a> {
    s: String,
    a: String,
    value: &'a str,
}

#[derive(Serialize)]
struct SubsetRecord<'a> {
    c: String,
    s: String,
    value: &'a str,
}

#[derive(Serialize)]
struct StrategyRecord<'a> {
    a: String,
    b: String,
    value: &'a str,
}

fn metadata<const N: usize>(pairs: [(&str, Value); N]) -> BTreeMap<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

impl Document {
    pub fn from_box(p: &BoxTable) -> Self {
        Document {
            kind: Kind::Box,
            n: p.n(),
            metadata: BTreeMap::new(),
            entries: event_entries(p.entries()),
        }
    }

    pub fn from_functional(b: &BellFunctional) -> Self {
        Document {
            kind: Kind::Functional,
            n: b.n(),
            metadata: BTreeMap::new(),
            entries: event_entries(b.entries()),
        }
    }

    pub fn from_correlations(t: &CorrelationTable) -> Self {
        Document {
            kind: Kind::Correlations,
            n: t.n(),
            metadata: BTreeMap::new(),
            entries: subset_entries(t.entries()),
        }
    }

    pub fn from_coefficients(t: &CorrelationFunctional) -> Self {
        Document {
            kind: Kind::Correlations,
            n: t.n(),
            metadata: metadata([("of", "functional".into())]),
            entries: subset_entries(t.entries()),
        }
    }

    pub fn from_certificate(n: usize, cert: &Certificate) -> Self {
        match cert {
            Certificate::Local { weights } => Document {
                kind: Kind::Certificate,
                n,
                metadata: metadata([("verdict", "local".into())]),
                entries: weights
                    .iter()
                    .map(|(d, w)| Entry::Strategy {
                        a: d.a(),
                        b: d.b(),
                        value: w.clone(),
                    })
                    .collect(),
            },
            Certificate::Nonlocal { separator, value } => Document {
                kind: Kind::Certificate,
                n,
                metadata: metadata([
                    ("value", value.to_string().into()),
                    ("verdict", "nonlocal".into()),
                ]),
                entries: event_entries(separator.entries()),
            },
        }
    }

    /// Canonical text, ending in a newline.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let meta = serde_json::to_string(&self.metadata).expect("metadata is plain JSON");
        writeln!(out, "{{").unwrap();
        writeln!(out, "  \"kind\": \"{}\",", self.kind.as_str()).unwrap();
        writeln!(out, "  \"n\": {},", self.n).unwrap();
        writeln!(out, "  \"metadata\": {meta},").unwrap();
        writeln!(out, "  \"entries\": [").unwrap();
        for (i, entry) in self.entries.iter().enumerate() {
            let record = match entry {
                Entry::Event { s, a, value } => serde_json::to_string(&EventRecord {
                    s: s.to_string(),
                    a: a.to_string(),
                    value: &value.to_string(),
                }),
                Entry::Subset { c, s, value } => serde_json::to_string(&SubsetRecord {
                    c: c.to_string(),
                    s: s.to_string(),
                    value: &value.to_string(),
                }),
                Entry::Strategy { a, b, value } => serde_json::to_string(&StrategyRecord {
                    a: a.to_string(),
                    b: b.to_string(),
                    value: &value.to_string(),
                }),
            }
            .expect("records are plain JSON");
            let comma = if i + 1 < self.entries.len() { "," } else { "" };
            writeln!(out, "    {record}{comma}").unwrap();
        }
        writeln!(out, "  ]").unwrap();
        writeln!(out, "}}").unwrap();
        out
    }

    /// Parses and checks field syntax; completeness is checked by
    /// [`Document::into_object`].
    pub fn parse(text: &str, options: ParseOptions) -> Result<Self, String> {
        let raw: RawDocument = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let parties = Parties::with_limit(raw.n, options.limit).map_err(|e| format!("field \"n\": {e}"))?;
        let n = parties.get();
        let lines = entry_lines(text);
        let keys: [&str; 2] = match raw.kind {
            Kind::Box | Kind::Functional => ["s", "a"],
            Kind::Correlations => ["c", "s"],
            Kind::Certificate => match raw.metadata.get("verdict").and_then(Value::as_str) {
                Some("local") => ["a", "b"],
                Some("nonlocal") => ["s", "a"],
                _ => {
                    return Err(
                        "field \"metadata\": certificate needs \"verdict\": \"local\" or \"nonlocal\"".into(),
                    )
                }
            },
        };
        let mut entries = Vec::with_capacity(raw.entries.len());
        for (i, record) in raw.entries.iter().enumerate() {
            let at = match lines.get(i) {
                Some(line) => format!("entry {i} (line {line})"),
                None => format!("entry {i}"),
            };
            for key in record.keys() {
                if !keys.contains(&key.as_str()) && key != "value" {
                    return Err(format!("{at}: unexpected field \"{key}\""));
                }
            }
            let field = |key: &str| {
                record
                    .get(key)
                    .ok_or_else(|| format!("{at}: missing field \"{key}\""))
            };
            let bits = |key: &str| -> Result<BinaryVector, String> {
                let text = field(key)?;
                let v: BinaryVector = text.parse().map_err(|e| format!("{at}, field \"{key}\": {e}"))?;
                if v.n() != n {
                    return Err(format!(
                        "{at}, field \"{key}\": {text:?} has length {}, document has n = {n}",
                        v.n()
                    ));
                }
                Ok(v)
            };
            let x = bits(keys[0])?;
            let y = bits(keys[1])?;
            let value = parse_rational(field("value")?, options.strict)
                .map_err(|e| format!("{at}, field \"value\": {e}"))?;
            entries.push(match (raw.kind, keys[0]) {
                (Kind::Correlations, _) => Entry::Subset { c: x, s: y, value },
                (Kind::Certificate, "a") => Entry::Strategy { a: x, b: y, value },
                _ => Entry::Event { s: x, a: y, value },
            });
        }
        Ok(Document {
            kind: raw.kind,
            n,
            metadata: raw.metadata,
            entries,
        })
    }

    /// Builds the typed object. Boxes and correlation tables must list every
    /// key exactly once; functionals may omit zero coefficients unless
    /// `strict` is set.
    pub fn into_object(self, options: ParseOptions) -> Result<Object, String> {
        let parties = Parties::with_limit(self.n, options.limit).map_err(|e| e.to_string())?;
        let mut seen = BTreeSet::new();
        for entry in &self.entries {
            let key = match entry {
                Entry::Event { s, a, .. } => (*s, *a),
                Entry::Subset { c, s, .. } => (*c, *s),
                Entry::Strategy { a, b, .. } => (*a, *b),
            };
            if !seen.insert(key) {
                return Err(format!("duplicate entry for ({}, {})", key.0, key.1));
            }
        }
        let events = |complete: bool| -> Result<BTreeMap<(BinaryVector, BinaryVector), Rational>, String> {
            let map: BTreeMap<_, _> = self
                .entries
                .iter()
                .filter_map(|e| match e {
                    Entry::Event { s, a, value } => Some(((*s, *a), value.clone())),
                    _ => None,
                })
                .collect();
            if complete && map.len() != parties.events() {
                let missing = BinaryVector::all(parties)
                    .flat_map(|s| BinaryVector::all(parties).map(move |a| (s, a)))
                    .find(|k| !map.contains_key(k))
                    .expect("some key is missing");
                return Err(format!("missing entry s={}, a={}", missing.0, missing.1));
            }
            Ok(map)
        };
        let functional = |complete: bool| -> Result<BellFunctional, String> {
            let map = events(complete)?;
            Ok(BellFunctional::from_fn(parties, |s, a| {
                map.get(&(s, a)).cloned().unwrap_or_else(Rational::zero)
            }))
        };
        let subset_entries = || {
            self.entries.iter().filter_map(|e| match e {
                Entry::Subset { c, s, value } => Some((*c, *s, value.clone())),
                _ => None,
            })
        };
        Ok(match self.kind {
            Kind::Box => {
                let map = events(true)?;
                Object::Box(BoxTable::from_fn(parties, |s, a| map[&(s, a)].clone()))
            }
            Kind::Functional => Object::Functional(functional(options.strict)?),
            Kind::Correlations => match self.metadata.get("of").and_then(Value::as_str) {
                None | Some("box") => Object::Correlations(
                    CorrelationTable::from_entries(parties, subset_entries()).map_err(|e| e.to_string())?,
                ),
                Some("functional") => Object::Coefficients(
                    CorrelationFunctional::from_entries(parties, subset_entries())
                        .map_err(|e| e.to_string())?,
                ),
                Some(other) => return Err(format!("field \"metadata\": unknown \"of\": {other:?}")),
            },
            Kind::Certificate => {
                if self.metadata.get("verdict").and_then(Value::as_str) == Some("local") {
                    let mut weights = BTreeMap::new();
                    for entry in &self.entries {
                        if let Entry::Strategy { a, b, value } = entry {
                            let d = DeterministicStrategy::new(*a, *b).map_err(|e| e.to_string())?;
                            weights.insert(d, value.clone());
                        }
                    }
                    Object::Certificate(Certificate::Local { weights })
                } else {
                    let value = self
                        .metadata
                        .get("value")
                        .and_then(Value::as_str)
                        .ok_or("field \"metadata\": nonlocal certificate needs \"value\"")?;
                    let value = parse_rational(value, options.strict)
                        .map_err(|e| format!("field \"metadata.value\": {e}"))?;
                    Object::Certificate(Certificate::Nonlocal {
                        separator: functional(true)?,
                        value,
                    })
                }
            }
        })
    }
}

fn event_entries<'a>(
    it: impl Iterator<Item = (BinaryVector, BinaryVector, &'a Rational)>,
) -> Vec<Entry> {
    it.map(|(s, a, value)| Entry::Event {
        s,
        a,
        value: value.clone(),
    })
    .collect()
}

fn subset_entries<'a>(
    it: impl Iterator<Item = (BinaryVector, BinaryVector, &'a Rational)>,
) -> Vec<Entry> {
    it.map(|(c, s, value)| Entry::Subset {
        c,
        s,
        value: value.clone(),
    })
    .collect()
}

/// 1-based line on which each object of the top-level `"entries"` array
/// opens. Only used for diagnostics, so it gives up quietly on odd input.
fn entry_lines(text: &str) -> Vec<usize> {
    let mut lines = Vec::new();
    let mut line = 1;
    let mut depth = 0usize;
    let mut in_string = false;
    let mut escaped = false;
    let mut current = String::new();
    let mut last_key = String::new();
    let mut in_entries = false;
    for ch in text.chars() {
        if ch == '\n' {
            line += 1;
        }
        if in_string {
            if escaped {
                escaped = false;
            } else if ch == '\\' {
                escaped = true;
            } else if ch == '"' {
                in_string = false;
                if depth == 1 {
                    last_key = std::mem::take(&mut current);
                }
            } else if depth == 1 {
                current.push(ch);
            }
            continue;
        }
        match ch {
            '"' => {
                in_string = true;
                current.clear();
            }
            '[' | '{' => {
                if ch == '[' && depth == 1 && last_key == "entries" {
                    in_entries = true;
                }
                if ch == '{' && depth == 2 && in_entries {
                    lines.push(line);
                }
                depth += 1;
            }
            ']' | '}' => {
                depth = depth.saturating_sub(1);
                if depth == 1 {
                    in_entries = false;
                }
            }
            _ => {}
        }
    }
    lines
}
