//! The interchange format: one JSON document per structure, canonically
//! serialized so that saving a loaded document is byte-identical.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::event::{Event, EventId, EventSet, Label};
use crate::hda::{Hda, HdaError, RawCell, RawHda};
use crate::related::{ConfigStructure, InpureEventStructure, RelatedError};
use crate::st::{StError, StStructure, ValidationMode};
use crate::stc::{ChuSpace, ChuValue, StcError, StcStructure};
use crate::translate::{bulk_key_string, parse_bulk_key, Sculpture, TranslateError};

pub const DOC_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DocError {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("semantic error: {0}")]
    St(#[from] StError),
    #[error("semantic error: {0}")]
    Stc(#[from] StcError),
    #[error("semantic error: {0}")]
    Hda(#[from] HdaError),
    #[error("semantic error: {0}")]
    Related(#[from] RelatedError),
    #[error("semantic error: {0}")]
    Translate(#[from] TranslateError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// A loaded, semantically validated document.
#[derive(Clone, Debug)]
pub enum Document {
    St(StStructure),
    Stc(StcStructure),
    Config(ConfigStructure),
    Event(InpureEventStructure),
    Hda(Hda),
    Sculpture(Sculpture),
    Chu(ChuSpace),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::St(_) => "st",
            Document::Stc(_) => "stc",
            Document::Config(_) => "config",
            Document::Event(_) => "event",
            Document::Hda(_) => "hda",
            Document::Sculpture(_) => "sculpture",
            Document::Chu(_) => "chu",
        }
    }
}

#[derive(Serialize, Deserialize)]
struct EventDoc {
    id: String,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct StConfigDoc {
    #[serde(rename = "S")]
    s: Vec<String>,
    #[serde(rename = "T")]
    t: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct StcConfigDoc {
    #[serde(rename = "S")]
    s: Vec<String>,
    #[serde(rename = "T")]
    t: Vec<String>,
    #[serde(rename = "C")]
    c: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct EnablingDoc {
    #[serde(rename = "Z")]
    z: Vec<String>,
    #[serde(rename = "Y")]
    y: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct MapEntryDoc {
    cell: String,
    i: usize,
    to: String,
}

#[derive(Serialize, Deserialize)]
struct HdaPayload {
    cells: Vec<RawCell>,
    s: Vec<MapEntryDoc>,
    t: Vec<MapEntryDoc>,
    labels: BTreeMap<String, String>,
    initial: String,
    finals: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind")]
enum DocPayload {
    #[serde(rename = "st")]
    St {
        version: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mode: Option<String>,
        events: Vec<EventDoc>,
        configs: Vec<StConfigDoc>,
    },
    #[serde(rename = "stc")]
    Stc { version: u32, events: Vec<EventDoc>, configs: Vec<StcConfigDoc> },
    #[serde(rename = "config")]
    Config { version: u32, events: Vec<EventDoc>, configs: Vec<Vec<String>> },
    #[serde(rename = "event")]
    Event { version: u32, events: Vec<EventDoc>, enabling: Vec<EnablingDoc> },
    #[serde(rename = "hda")]
    Hda { version: u32, #[serde(flatten)] payload: HdaPayload },
    #[serde(rename = "sculpture")]
    Sculpture {
        version: u32,
        hda: HdaPayload,
        #[serde(rename = "bulkDim")]
        bulk_dim: usize,
        #[serde(rename = "bulkLabels")]
        bulk_labels: Vec<String>,
        embedding: BTreeMap<String, String>,
    },
    #[serde(rename = "chu")]
    Chu {
        version: u32,
        #[serde(rename = "K")]
        k: u8,
        events: Vec<EventDoc>,
        states: Vec<BTreeMap<String, String>>,
    },
}

fn ids(names: &[String]) -> Vec<EventId> {
    names.iter().map(|n| EventId::new(n.clone())).collect()
}

fn events_of(docs: &[EventDoc]) -> Vec<Event> {
    docs.iter().map(|e| Event::new(e.id.clone(), e.label.clone())).collect()
}

fn raw_hda_of(p: HdaPayload) -> RawHda {
    RawHda {
        cells: p.cells,
        s: p.s.into_iter().map(|m| (m.cell, m.i, m.to)).collect(),
        t: p.t.into_iter().map(|m| (m.cell, m.i, m.to)).collect(),
        labels: p.labels,
        initial: p.initial,
        finals: p.finals,
    }
}

fn hda_payload_of(h: &Hda) -> HdaPayload {
    let raw = h.to_raw();
    HdaPayload {
        cells: raw.cells,
        s: raw.s.into_iter().map(|(cell, i, to)| MapEntryDoc { cell, i, to }).collect(),
        t: raw.t.into_iter().map(|(cell, i, to)| MapEntryDoc { cell, i, to }).collect(),
        labels: raw.labels,
        initial: raw.initial,
        finals: raw.finals,
    }
}

/// Parses and semantically validates a document.
pub fn load(bytes: &[u8]) -> Result<Document, DocError> {
    let payload: DocPayload = serde_json::from_slice(bytes)?;
    decode(payload)
}

/// Like [`load`], but an `hda` document that fails validation is kept in
/// its lenient form and returned with its violation tags.
pub fn load_lenient_hda(bytes: &[u8]) -> Result<(Hda, Vec<HdaError>), DocError> {
    let payload: DocPayload = serde_json::from_slice(bytes)?;
    match payload {
        DocPayload::Hda { payload, .. } => Ok(raw_hda_of(payload).lenient()?),
        _ => Err(DocError::Schema("expected an hda document".into())),
    }
}

fn decode(payload: DocPayload) -> Result<Document, DocError> {
    Ok(match payload {
        DocPayload::St { mode, events, configs, .. } => {
            let mode = match mode.as_deref() {
                None | Some("strict") => ValidationMode::Strict,
                Some("weak") => ValidationMode::Weak,
                Some(other) => {
                    return Err(DocError::Schema(format!("unknown validation mode `{other}`")))
                }
            };
            let raw: Vec<(Vec<EventId>, Vec<EventId>)> =
                configs.iter().map(|c| (ids(&c.s), ids(&c.t))).collect();
            Document::St(StStructure::from_ids_with_mode(events_of(&events), &raw, mode)?)
        }
        DocPayload::Stc { events, configs, .. } => {
            let raw: Vec<(Vec<EventId>, Vec<EventId>, Vec<EventId>)> =
                configs.iter().map(|c| (ids(&c.s), ids(&c.t), ids(&c.c))).collect();
            Document::Stc(StcStructure::from_ids(events_of(&events), &raw)?)
        }
        DocPayload::Config { events, configs, .. } => {
            let raw: Vec<Vec<EventId>> = configs.iter().map(|c| ids(c)).collect();
            Document::Config(ConfigStructure::from_ids(events_of(&events), &raw)?)
        }
        DocPayload::Event { events, enabling, .. } => {
            let raw: Vec<(Vec<EventId>, Vec<EventId>)> =
                enabling.iter().map(|e| (ids(&e.z), ids(&e.y))).collect();
            Document::Event(InpureEventStructure::from_ids(events_of(&events), &raw)?)
        }
        DocPayload::Hda { payload, .. } => Document::Hda(raw_hda_of(payload).validate()?),
        DocPayload::Sculpture { hda, bulk_dim, bulk_labels, embedding, .. } => {
            let hda = raw_hda_of(hda).validate()?;
            let embedding = embedding
                .into_iter()
                .map(|(cell, key)| {
                    parse_bulk_key(&key)
                        .ok_or_else(|| DocError::Schema(format!("bad bulk key `{key}`")))
                        .map(|k| (cell, k))
                })
                .collect::<Result<BTreeMap<_, _>, _>>()?;
            let sc = Sculpture {
                hda,
                bulk_dim,
                bulk_labels: bulk_labels.into_iter().map(Label::new).collect(),
                embedding,
            };
            sc.validate()?;
            Document::Sculpture(sc)
        }
        DocPayload::Chu { k, events, states, .. } => {
            if k != 3 && k != 4 {
                return Err(DocError::Schema(format!("unsupported K = {k}")));
            }
            let events = events_of(&events);
            let mut sorted = events.clone();
            sorted.sort_by(|a, b| a.id.cmp(&b.id));
            let mut decoded = std::collections::BTreeSet::new();
            for (i, state) in states.iter().enumerate() {
                let mut vals = Vec::with_capacity(sorted.len());
                for e in &sorted {
                    let sym = state.get(e.id.as_str()).ok_or_else(|| {
                        DocError::Schema(format!("state {i} misses event `{}`", e.id))
                    })?;
                    let v = ChuValue::parse(sym).ok_or_else(|| {
                        DocError::Schema(format!("state {i} has unknown symbol `{sym}`"))
                    })?;
                    if k == 3 && v == ChuValue::Cancelled {
                        return Err(DocError::Stc(StcError::InvalidValuation(
                            i,
                            "✕ in a Chu space over 3".into(),
                        )));
                    }
                    vals.push(v);
                }
                if state.len() != sorted.len() {
                    return Err(DocError::Schema(format!("state {i} names stray events")));
                }
                decoded.insert(vals);
            }
            Document::Chu(ChuSpace { k, events: sorted, states: decoded })
        }
    })
}

fn encode(doc: &Document) -> DocPayload {
    match doc {
        Document::St(st) => DocPayload::St {
            version: DOC_VERSION,
            mode: match st.mode() {
                ValidationMode::Strict => None,
                ValidationMode::Weak => Some("weak".into()),
            },
            events: st
                .events()
                .iter()
                .map(|e| EventDoc { id: e.id.to_string(), label: e.label.to_string() })
                .collect(),
            configs: st
                .configs()
                .map(|c| StConfigDoc {
                    s: set_ids(st.events(), c.started),
                    t: set_ids(st.events(), c.terminated),
                })
                .collect(),
        },
        Document::Stc(stc) => DocPayload::Stc {
            version: DOC_VERSION,
            events: stc
                .events()
                .iter()
                .map(|e| EventDoc { id: e.id.to_string(), label: e.label.to_string() })
                .collect(),
            configs: stc
                .configs()
                .map(|c| StcConfigDoc {
                    s: set_ids(stc.events(), c.started),
                    t: set_ids(stc.events(), c.terminated),
                    c: set_ids(stc.events(), c.canceled),
                })
                .collect(),
        },
        Document::Config(c) => DocPayload::Config {
            version: DOC_VERSION,
            events: c
                .events()
                .iter()
                .map(|e| EventDoc { id: e.id.to_string(), label: e.label.to_string() })
                .collect(),
            configs: c.configs().map(|x| set_ids(c.events(), x)).collect(),
        },
        Document::Event(e) => DocPayload::Event {
            version: DOC_VERSION,
            events: e
                .events()
                .iter()
                .map(|ev| EventDoc { id: ev.id.to_string(), label: ev.label.to_string() })
                .collect(),
            enabling: e
                .enabling()
                .map(|(z, y)| EnablingDoc {
                    z: set_ids(e.events(), z),
                    y: set_ids(e.events(), y),
                })
                .collect(),
        },
        Document::Hda(h) => {
            DocPayload::Hda { version: DOC_VERSION, payload: hda_payload_of(h) }
        }
        Document::Sculpture(sc) => DocPayload::Sculpture {
            version: DOC_VERSION,
            hda: hda_payload_of(&sc.hda),
            bulk_dim: sc.bulk_dim,
            bulk_labels: sc.bulk_labels.iter().map(|l| l.to_string()).collect(),
            embedding: sc
                .embedding
                .iter()
                .map(|(cell, &key)| (cell.clone(), bulk_key_string(key)))
                .collect(),
        },
        Document::Chu(chu) => DocPayload::Chu {
            version: DOC_VERSION,
            k: chu.k,
            events: chu
                .events
                .iter()
                .map(|e| EventDoc { id: e.id.to_string(), label: e.label.to_string() })
                .collect(),
            states: chu
                .states
                .iter()
                .map(|vals| {
                    chu.events
                        .iter()
                        .zip(vals)
                        .map(|(e, v)| (e.id.to_string(), v.symbol().to_string()))
                        .collect()
                })
                .collect(),
        },
    }
}

fn set_ids(events: &[Event], m: EventSet) -> Vec<String> {
    m.iter().map(|i| events[i].id.to_string()).collect()
}

/// Canonical bytes: pretty JSON with sorted keys and a trailing newline.
pub fn save(doc: &Document) -> Vec<u8> {
    let mut bytes =
        serde_json::to_vec_pretty(&encode(doc)).expect("serializable payload");
    bytes.push(b'\n');
    bytes
}

/// Canonical bytes for a raw automaton, Valid or not; used to ship the
/// degenerate examples that only the lenient loader accepts.
pub fn save_raw_hda(raw: &RawHda) -> Vec<u8> {
    let mut raw = raw.clone();
    raw.cells.sort_by(|a, b| (a.dim, &a.id).cmp(&(b.dim, &b.id)));
    raw.s.sort();
    raw.t.sort();
    raw.finals.sort();
    let payload = DocPayload::Hda {
        version: DOC_VERSION,
        payload: HdaPayload {
            cells: raw.cells,
            s: raw.s.into_iter().map(|(cell, i, to)| MapEntryDoc { cell, i, to }).collect(),
            t: raw.t.into_iter().map(|(cell, i, to)| MapEntryDoc { cell, i, to }).collect(),
            labels: raw.labels,
            initial: raw.initial,
            finals: raw.finals,
        },
    };
    let mut bytes = serde_json::to_vec_pretty(&payload).expect("serializable payload");
    bytes.push(b'\n');
    bytes
}
