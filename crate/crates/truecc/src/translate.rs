//! Translations between ST-structures and HDAs, and the sculpting
//! machinery: bulks, sculptures, α-chains, and event quotients.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::event::{Event, EventId, EventSet, Label};
use crate::hda::{Hda, HdaError, HdaPath, HdaStepKind, RawCell, RawHda};
use crate::st::{StConfig, StError, StStructure};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TranslateError {
    #[error("precondition violated: input is not {0}")]
    PreconditionViolated(String),
    #[error("bulk dimension {0} exceeds the desk-scale cap {1}")]
    DimensionCap(usize, usize),
    #[error("sculpture search budget exceeded")]
    SearchBudgetExceeded,
    #[error("α-chains have different lengths")]
    LengthMismatch,
    #[error("α-chain index out of range at position {0}")]
    BadChainIndex(usize),
    #[error("events {0} and {1} with different labels merged into one class")]
    LabelConflictInClass(EventId, EventId),
    #[error("embedding is not an injective morphism: {0}")]
    BadEmbedding(String),
    #[error(transparent)]
    St(#[from] StError),
    #[error(transparent)]
    Hda(#[from] HdaError),
}

/// A total order on the events of a structure, fixing the map indices of
/// the generated automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventListing(Vec<usize>);

impl EventListing {
    /// The default listing: events in id order.
    pub fn default_for(st: &StStructure) -> Self {
        EventListing((0..st.event_count()).collect())
    }

    pub fn from_ids(st: &StStructure, ids: &[EventId]) -> Result<Self, TranslateError> {
        if ids.len() != st.event_count() {
            return Err(TranslateError::PreconditionViolated("a complete event listing".into()));
        }
        let mut order = Vec::with_capacity(ids.len());
        let mut seen = BTreeSet::new();
        for id in ids {
            let i = st.event_index(id)?;
            if !seen.insert(i) {
                return Err(TranslateError::PreconditionViolated("a duplicate-free listing".into()));
            }
            order.push(i);
        }
        Ok(EventListing(order))
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    /// The events of `set` in listing order, reindexed from 1.
    pub fn restrict(&self, set: EventSet) -> Vec<usize> {
        self.0.iter().copied().filter(|&e| set.contains(e)).collect()
    }

    /// 1-based index of `event` within the restriction to `set`.
    pub fn index_in(&self, set: EventSet, event: usize) -> usize {
        self.restrict(set).iter().position(|&e| e == event).expect("member of the set") + 1
    }
}

fn config_cell_id(st: &StStructure, c: StConfig) -> String {
    let part = |m: EventSet| -> String {
        m.iter().map(|e| st.event_id(e).as_str()).collect::<Vec<_>>().join(",")
    };
    format!("q:{}|{}", part(c.started), part(c.terminated))
}

fn require_translatable(st: &StStructure) -> Result<(), TranslateError> {
    if !st.is_rooted() {
        return Err(TranslateError::PreconditionViolated("rooted".into()));
    }
    if st.is_connected().is_err() {
        return Err(TranslateError::PreconditionViolated("connected".into()));
    }
    if st.is_adjacent_closed().is_err() {
        return Err(TranslateError::PreconditionViolated("adjacent-closed".into()));
    }
    Ok(())
}

/// Maps a rooted, connected, adjacent-closed ST-structure onto an HDA
/// with one cell per configuration and indices from the listing.
pub fn st_into_hda(st: &StStructure, listing: &EventListing) -> Result<Hda, TranslateError> {
    require_translatable(st)?;
    let mut raw = RawHda {
        initial: config_cell_id(st, StConfig::ROOT),
        ..RawHda::default()
    };
    for c in st.configs() {
        let id = config_cell_id(st, c);
        let running = c.executing();
        raw.cells.push(RawCell { id: id.clone(), dim: running.len() });
        for e in running.iter() {
            let i = listing.index_in(running, e);
            let s_face = StConfig::new(c.started.remove(e), c.terminated);
            let t_face = StConfig::new(c.started, c.terminated.insert(e));
            raw.s.push((id.clone(), i, config_cell_id(st, s_face)));
            raw.t.push((id.clone(), i, config_cell_id(st, t_face)));
        }
        if running.len() == 1 {
            let e = running.iter().next().unwrap();
            raw.labels.insert(id.clone(), st.label_of(e).as_str().to_string());
        }
    }
    Ok(raw.validate()?)
}

/// Event classes of a non-degenerate HDA: transitions identified when
/// they are opposite faces of a shared square, transitively.
pub fn event_classes(h: &Hda) -> Vec<Vec<usize>> {
    let n = h.cell_count();
    let mut uf: Vec<usize> = (0..n).collect();
    fn find(uf: &mut Vec<usize>, x: usize) -> usize {
        if uf[x] != x {
            let r = find(uf, uf[x]);
            uf[x] = r;
        }
        uf[x]
    }
    for q in h.cells_of_dim(2) {
        for i in 1..=2 {
            let (a, b) = (h.s_face(q, i), h.t_face(q, i));
            let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
            if ra != rb {
                uf[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for q in h.cells_of_dim(1) {
        groups.entry(find(&mut uf, q)).or_default().push(q);
    }
    groups.into_values().collect()
}

/// Translates an acyclic non-degenerate HDA (its reachable part) into an
/// ST-structure whose events are the transition classes.
pub fn hda_into_st(h: &Hda) -> Result<StStructure, TranslateError> {
    let (h, _pruned) = h.reachable_part();
    h.is_acyclic().map_err(|cyc| TranslateError::PreconditionViolated(format!(
        "acyclic (cycle through `{}`)",
        cyc[0]
    )))?;
    h.is_non_degenerate()
        .map_err(|w| TranslateError::PreconditionViolated(format!("non-degenerate ({w})")))?;
    let classes = event_classes(&h);
    let class_of: HashMap<usize, usize> = classes
        .iter()
        .enumerate()
        .flat_map(|(k, cells)| cells.iter().map(move |&q| (q, k)))
        .collect();
    // Classes are named by their least member id; the event table sorts
    // by id, so translate class numbers to sorted positions.
    let mut events: Vec<Event> = classes
        .iter()
        .map(|cells| Event {
            id: EventId::new(h.id(cells[0]).to_string()),
            label: h.label(cells[0]).clone(),
        })
        .collect();
    let mut sorted_ids: Vec<(EventId, usize)> =
        events.iter().enumerate().map(|(k, e)| (e.id.clone(), k)).collect();
    sorted_ids.sort();
    let class_to_event: HashMap<usize, usize> =
        sorted_ids.iter().enumerate().map(|(pos, (_, k))| (*k, pos)).collect();
    events.sort_by(|a, b| a.id.cmp(&b.id));
    hda_into_st_with_named_classes(&h, events, &class_of, &class_to_event)
}

/// A single labelled hypercube with all its faces.
#[derive(Clone, Debug)]
pub struct Bulk {
    pub dim: usize,
    pub labels: Vec<Label>,
    pub hda: Hda,
    key_to_cell: BTreeMap<(u64, u64), usize>,
}

/// Printable key for a bulk cell: 1-based direction indices "1,3|1".
pub fn bulk_key_string(key: (EventSet, EventSet)) -> String {
    let part = |m: EventSet| -> String {
        m.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
    };
    format!("{}|{}", part(key.0), part(key.1))
}

pub fn parse_bulk_key(s: &str) -> Option<(EventSet, EventSet)> {
    let (a, b) = s.split_once('|')?;
    let parse = |txt: &str| -> Option<EventSet> {
        let mut m = EventSet::EMPTY;
        if txt.is_empty() {
            return Some(m);
        }
        for p in txt.split(',') {
            let i: usize = p.parse().ok()?;
            if i == 0 {
                return None;
            }
            m = m.insert(i - 1);
        }
        Some(m)
    };
    Some((parse(a)?, parse(b)?))
}

pub const BULK_DIM_CAP: usize = 10;

/// The full n-cube: one cell per pair T ⊆ S of direction sets.
pub fn make_bulk(n: usize, labels: &[Label]) -> Result<Bulk, TranslateError> {
    if n > BULK_DIM_CAP {
        return Err(TranslateError::DimensionCap(n, BULK_DIM_CAP));
    }
    assert_eq!(labels.len(), n, "one label per direction");
    let all = EventSet::full(n);
    let mut raw = RawHda {
        initial: format!("b:{}", bulk_key_string((EventSet::EMPTY, EventSet::EMPTY))),
        ..RawHda::default()
    };
    let id_of = |s: EventSet, t: EventSet| format!("b:{}", bulk_key_string((s, t)));
    for s in all.subsets() {
        for t in s.subsets() {
            let id = id_of(s, t);
            let running: Vec<usize> = s.diff(t).iter().collect();
            raw.cells.push(RawCell { id: id.clone(), dim: running.len() });
            for (pos, &d) in running.iter().enumerate() {
                raw.s.push((id.clone(), pos + 1, id_of(s.remove(d), t)));
                raw.t.push((id.clone(), pos + 1, id_of(s, t.insert(d))));
            }
            if running.len() == 1 {
                raw.labels.insert(id.clone(), labels[running[0]].as_str().to_string());
            }
        }
    }
    raw.finals.push(id_of(all, all));
    let hda = raw.validate()?;
    let mut key_to_cell = BTreeMap::new();
    for s in all.subsets() {
        for t in s.subsets() {
            key_to_cell.insert((s.0, t.0), hda.index_of(&id_of(s, t))?);
        }
    }
    Ok(Bulk { dim: n, labels: labels.to_vec(), hda, key_to_cell })
}

impl Bulk {
    pub fn cell_of_key(&self, key: (EventSet, EventSet)) -> Option<usize> {
        self.key_to_cell.get(&(key.0 .0, key.1 .0)).copied()
    }

    pub fn key_of_cell(&self, cell: usize) -> (EventSet, EventSet) {
        let id = self.hda.id(cell);
        parse_bulk_key(id.strip_prefix("b:").expect("bulk id")).expect("bulk key")
    }
}

/// An HDA together with a bulk and an injective embedding morphism,
/// recorded as the bulk key of every cell.
#[derive(Clone, Debug)]
pub struct Sculpture {
    pub hda: Hda,
    pub bulk_dim: usize,
    pub bulk_labels: Vec<Label>,
    /// Cell id → (S,T) over bulk directions.
    pub embedding: BTreeMap<String, (EventSet, EventSet)>,
}

impl Sculpture {
    /// Checks that the recorded embedding is an injective morphism into
    /// the bulk of the recorded dimension.
    pub fn validate(&self) -> Result<(), TranslateError> {
        let h = &self.hda;
        let all = EventSet::full(self.bulk_dim);
        let mut seen: HashSet<(u64, u64)> = HashSet::new();
        let key = |c: usize| -> Result<(EventSet, EventSet), TranslateError> {
            self.embedding
                .get(h.id(c))
                .copied()
                .ok_or_else(|| TranslateError::BadEmbedding(format!("cell `{}` unmapped", h.id(c))))
        };
        for c in 0..h.cell_count() {
            let (s, t) = key(c)?;
            if !t.is_subset(s) || !s.is_subset(all) {
                return Err(TranslateError::BadEmbedding(format!(
                    "key of `{}` is not a bulk cell",
                    h.id(c)
                )));
            }
            if s.diff(t).len() != h.dim(c) {
                return Err(TranslateError::BadEmbedding(format!(
                    "key of `{}` has the wrong dimension",
                    h.id(c)
                )));
            }
            if !seen.insert((s.0, t.0)) {
                return Err(TranslateError::BadEmbedding("embedding is not injective".into()));
            }
            let running: Vec<usize> = s.diff(t).iter().collect();
            for (pos, &d) in running.iter().enumerate() {
                let i = pos + 1;
                if key(h.s_face(c, i))? != (s.remove(d), t) {
                    return Err(TranslateError::BadEmbedding(format!(
                        "s_{i} of `{}` not preserved",
                        h.id(c)
                    )));
                }
                if key(h.t_face(c, i))? != (s, t.insert(d)) {
                    return Err(TranslateError::BadEmbedding(format!(
                        "t_{i} of `{}` not preserved",
                        h.id(c)
                    )));
                }
            }
            if h.dim(c) == 1 {
                let d = s.diff(t).iter().next().unwrap();
                if h.label(c) != &self.bulk_labels[d] {
                    return Err(TranslateError::BadEmbedding(format!(
                        "label of `{}` differs from its bulk direction",
                        h.id(c)
                    )));
                }
            }
        }
        if key(h.initial())? != (EventSet::EMPTY, EventSet::EMPTY) {
            return Err(TranslateError::BadEmbedding("initial cell not at the bulk root".into()));
        }
        Ok(())
    }

    /// Directions that actually carry part of the image.
    pub fn used_directions(&self) -> EventSet {
        let mut used = EventSet::EMPTY;
        for &(s, _) in self.embedding.values() {
            used = used.union(s);
        }
        used
    }

    /// Drops unused bulk directions; the result cannot be simplified
    /// further, i.e. it is simplistic for this embedding.
    pub fn simplify(&self) -> Sculpture {
        let used = self.used_directions();
        if used.len() == self.bulk_dim {
            return self.clone();
        }
        let order: Vec<usize> = used.iter().collect();
        let remap = |m: EventSet| -> EventSet {
            EventSet::from_indices(
                m.iter().map(|d| order.iter().position(|&x| x == d).unwrap()),
            )
        };
        Sculpture {
            hda: self.hda.clone(),
            bulk_dim: used.len(),
            bulk_labels: order.iter().map(|&d| self.bulk_labels[d].clone()).collect(),
            embedding: self
                .embedding
                .iter()
                .map(|(id, &(s, t))| (id.clone(), (remap(s), remap(t))))
                .collect(),
        }
    }
}

/// Two sculptures are isomorphic when their simplistic versions have the
/// same bulk dimension and isomorphic automata.
pub fn sculpture_isomorphic(a: &Sculpture, b: &Sculpture) -> bool {
    let (a, b) = (a.simplify(), b.simplify());
    a.bulk_dim == b.bulk_dim && crate::hda::hda_isomorphic(&a.hda, &b.hda).is_some()
}

/// Like [`st_into_hda`], but also returns the bulk over all declared
/// events and the configuration-keyed embedding.
pub fn st_into_sculpture(
    st: &StStructure,
    listing: &EventListing,
) -> Result<Sculpture, TranslateError> {
    let hda = st_into_hda(st, listing)?;
    let n = st.event_count();
    if n > BULK_DIM_CAP {
        return Err(TranslateError::DimensionCap(n, BULK_DIM_CAP));
    }
    // Direction j of the bulk is the j-th event of the listing.
    let pos_of_event: BTreeMap<usize, usize> =
        listing.order().iter().enumerate().map(|(j, &e)| (e, j)).collect();
    let to_key = |m: EventSet| EventSet::from_indices(m.iter().map(|e| pos_of_event[&e]));
    let embedding: BTreeMap<String, (EventSet, EventSet)> = st
        .configs()
        .map(|c| {
            (config_cell_id(st, c), (to_key(c.started), to_key(c.terminated)))
        })
        .collect();
    let bulk_labels: Vec<Label> =
        listing.order().iter().map(|&e| st.label_of(e).clone()).collect();
    let sc = Sculpture { hda, bulk_dim: n, bulk_labels, embedding };
    debug_assert!(sc.validate().is_ok());
    Ok(sc)
}

/// One face-map application of an α-chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FaceKind {
    S,
    T,
}

/// A sequence of face-map applications in application order (the first
/// entry is applied first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaChain(pub Vec<(FaceKind, usize)>);

impl AlphaChain {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Applies the chain to an ST-configuration with respect to a
    /// listing: an s-application removes the i-th executing event, a
    /// t-application terminates it.
    pub fn apply_config(
        &self,
        start: StConfig,
        listing: &[usize],
    ) -> Result<StConfig, TranslateError> {
        let mut cfg = start;
        for (pos, &(kind, i)) in self.0.iter().enumerate() {
            let running: Vec<usize> =
                listing.iter().copied().filter(|&e| cfg.executing().contains(e)).collect();
            if i == 0 || i > running.len() {
                return Err(TranslateError::BadChainIndex(pos + 1));
            }
            let e = running[i - 1];
            cfg = match kind {
                FaceKind::S => StConfig::new(cfg.started.remove(e), cfg.terminated),
                FaceKind::T => StConfig::new(cfg.started, cfg.terminated.insert(e)),
            };
        }
        Ok(cfg)
    }

    /// The residual listing after removing, at every application, the
    /// element at the applied index.
    pub fn apply_listing(&self, n: usize) -> Result<Vec<usize>, TranslateError> {
        let mut list: Vec<usize> = (1..=n).collect();
        for (pos, &(_, i)) in self.0.iter().enumerate() {
            if i == 0 || i > list.len() {
                return Err(TranslateError::BadChainIndex(pos + 1));
            }
            list.remove(i - 1);
        }
        Ok(list)
    }
}

/// Chain equivalence: equal length and equal residual listings, which
/// coincides with the closure under cubical-law rewrites.
pub fn alpha_chain_equiv(
    a: &AlphaChain,
    b: &AlphaChain,
    n: usize,
) -> Result<bool, TranslateError> {
    if a.len() != b.len() {
        return Err(TranslateError::LengthMismatch);
    }
    Ok(a.apply_listing(n)? == b.apply_listing(n)?)
}

/// Reads the ST-structure off a sculpture: every cell's configuration is
/// the α-chain application ᾱ(E,∅) for a chain reaching its embedded
/// image from the bulk top cell.
pub fn sculpture_into_st(sc: &Sculpture) -> Result<StStructure, TranslateError> {
    sc.validate()?;
    let n = sc.bulk_dim;
    let events: Vec<Event> = (0..n)
        .map(|d| Event { id: EventId::new(format!("d{:02}", d + 1)), label: sc.bulk_labels[d].clone() })
        .collect();
    let listing: Vec<usize> = (0..n).collect();
    let top = StConfig::new(EventSet::full(n), EventSet::EMPTY);
    let mut configs = Vec::new();
    for &(s, t) in sc.embedding.values() {
        // A chain from the top cell down to (s, t): undo the missing
        // starts with s-applications, then terminate t.
        let mut chain = Vec::new();
        let mut cur = top;
        for d in EventSet::full(n).diff(s).iter() {
            let i = cur.executing().iter().position(|x| x == d).unwrap() + 1;
            chain.push((FaceKind::S, i));
            cur = StConfig::new(cur.started.remove(d), cur.terminated);
        }
        for d in t.iter() {
            let i = cur.executing().iter().position(|x| x == d).unwrap() + 1;
            chain.push((FaceKind::T, i));
            cur = StConfig::new(cur.started, cur.terminated.insert(d));
        }
        let cfg = AlphaChain(chain).apply_config(top, &listing)?;
        debug_assert_eq!(cfg, StConfig::new(s, t), "chain evaluation lands on the key");
        configs.push(cfg);
    }
    Ok(StStructure::new(events, configs)?)
}

/// Like `hda_into_st` but with the event classes induced by the bulk:
/// transitions embedded in the same direction are one event.
pub fn hda_into_st_sculpture(sc: &Sculpture) -> Result<StStructure, TranslateError> {
    sc.validate()?;
    let h = &sc.hda;
    h.is_acyclic().map_err(|cyc| {
        TranslateError::PreconditionViolated(format!("acyclic (cycle through `{}`)", cyc[0]))
    })?;
    h.is_non_degenerate()
        .map_err(|w| TranslateError::PreconditionViolated(format!("non-degenerate ({w})")))?;
    // One class per bulk direction, so the output always declares the
    // same events as sculpture_into_st for the same sculpture.
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); sc.bulk_dim];
    let mut class_of: HashMap<usize, usize> = HashMap::new();
    for q in h.cells_of_dim(1) {
        let (s, t) = sc.embedding[h.id(q)];
        let d = s.diff(t).iter().next().unwrap();
        classes[d].push(q);
        class_of.insert(q, d);
    }
    let events: Vec<Event> = (0..sc.bulk_dim)
        .map(|d| Event { id: EventId::new(format!("d{:02}", d + 1)), label: sc.bulk_labels[d].clone() })
        .collect();
    let class_to_event: HashMap<usize, usize> = (0..sc.bulk_dim).map(|d| (d, d)).collect();
    hda_into_st_with_named_classes(h, events, &class_of, &class_to_event)
}

/// Shared path-to-configuration construction with explicit event naming.
fn hda_into_st_with_named_classes(
    h: &Hda,
    events: Vec<Event>,
    class_of: &HashMap<usize, usize>,
    class_to_event: &HashMap<usize, usize>,
) -> Result<StStructure, TranslateError> {
    // Events here are pre-sorted by construction (d1..dn): build an
    // artificial classes table matching `hda_into_st_with_classes`.
    let ev_of = |q1: usize| -> usize { class_to_event[&class_of[&q1]] };
    let hc = h.rooted_homotopy_classes()?;
    let mut order: Vec<usize> = (0..hc.members.len()).collect();
    order.sort_by_key(|&k| hc.paths[hc.members[k][0]].len());
    let mut config_of: Vec<Option<StConfig>> = vec![None; hc.members.len()];
    for &k in &order {
        let rep = &hc.paths[hc.members[k][0]];
        let end = rep.end();
        let cfg = if rep.is_empty() {
            StConfig::ROOT
        } else if h.dim(end) == 0 {
            let mut prefix = rep.clone();
            prefix.steps.pop();
            let from = prefix.end();
            let base = config_of[hc.class_of_path(&prefix)].expect("shorter class done");
            StConfig::new(base.started, base.terminated.insert(ev_of(from)))
        } else if h.dim(end) == 1 {
            let member = hc.members[k]
                .iter()
                .map(|&pi| &hc.paths[pi])
                .find(|p| p.steps.last().is_some_and(|s| s.kind == HdaStepKind::Up))
                .ok_or_else(|| TranslateError::PreconditionViolated(
                    "reachability of transitions through s-steps".into(),
                ))?;
            let mut prefix = member.clone();
            prefix.steps.pop();
            let base = config_of[hc.class_of_path(&prefix)].expect("shorter class done");
            StConfig::new(base.started.insert(ev_of(end)), base.terminated)
        } else {
            let mut candidates: Vec<(usize, HdaPath)> = hc.members[k]
                .iter()
                .map(|&pi| &hc.paths[pi])
                .filter_map(|p| {
                    let last = *p.steps.last()?;
                    (last.kind == HdaStepKind::Up).then(|| {
                        let mut prefix = p.clone();
                        prefix.steps.pop();
                        (last.index, prefix)
                    })
                })
                .collect();
            candidates.sort();
            candidates.dedup();
            let first = candidates.first().cloned().ok_or_else(|| {
                TranslateError::PreconditionViolated("s-step reachability of higher cells".into())
            })?;
            // The two predecessors must come in through different s-maps;
            // non-degeneracy guarantees a second one exists.
            let second = candidates
                .iter()
                .find(|(i, _)| *i != first.0)
                .cloned()
                .ok_or_else(|| TranslateError::PreconditionViolated(
                    "two distinct s-step predecessors (non-degeneracy)".into(),
                ))?;
            let a = config_of[hc.class_of_path(&first.1)].expect("shorter class done");
            let b = config_of[hc.class_of_path(&second.1)].expect("shorter class done");
            let union = a.union(b);
            #[cfg(debug_assertions)]
            for (ia, pa) in &candidates {
                for (ib, pb) in &candidates {
                    if ia != ib {
                        let x = config_of[hc.class_of_path(pa)].unwrap();
                        let y = config_of[hc.class_of_path(pb)].unwrap();
                        debug_assert_eq!(x.union(y), union, "choice of predecessors is immaterial");
                    }
                }
            }
            union
        };
        config_of[k] = Some(cfg);
    }
    let configs: Vec<StConfig> = config_of.into_iter().map(|c| c.unwrap()).collect();
    Ok(StStructure::new(events, configs)?)
}

/// Quotients the events of a structure by an explicit partition; events
/// left out stay singletons. Labels must agree within each class.
pub fn quotient_events(
    st: &StStructure,
    partition: &[Vec<EventId>],
) -> Result<StStructure, TranslateError> {
    let n = st.event_count();
    let mut class: Vec<usize> = (0..n).collect();
    for group in partition {
        if group.is_empty() {
            continue;
        }
        let first = st.event_index(&group[0])?;
        for id in &group[1..] {
            let e = st.event_index(id)?;
            if st.label_of(e) != st.label_of(first) {
                return Err(TranslateError::LabelConflictInClass(
                    st.event_id(first).clone(),
                    id.clone(),
                ));
            }
            class[e] = first.min(class[e]).min(class[first]);
            class[first] = class[e];
        }
        for id in group {
            let e = st.event_index(id)?;
            class[e] = class[first];
        }
    }
    // Compress to new indices in representative order.
    let mut reps: Vec<usize> = class.clone();
    reps.sort_unstable();
    reps.dedup();
    let new_index = |e: usize| reps.iter().position(|&r| r == class[e]).unwrap();
    let events: Vec<Event> = reps
        .iter()
        .map(|&r| Event { id: st.event_id(r).clone(), label: st.label_of(r).clone() })
        .collect();
    let configs: Vec<StConfig> = st
        .configs()
        .map(|c| {
            StConfig::new(
                EventSet::from_indices(c.started.iter().map(new_index)),
                EventSet::from_indices(c.terminated.iter().map(new_index)),
            )
        })
        .collect();
    Ok(StStructure::new(events, configs)?)
}

/// Search parameters for [`is_sculpture`].
#[derive(Clone, Copy, Debug)]
pub struct SculptureSearch {
    /// Hard cap on the bulk dimension; searches needing more report
    /// budget exhaustion instead of a verdict.
    pub max_dim: usize,
    /// Backtracking-node budget.
    pub budget: u64,
}

impl Default for SculptureSearch {
    fn default() -> Self {
        SculptureSearch { max_dim: 6, budget: 2_000_000 }
    }
}

/// Searches for a minimal-bulk sculpture presentation of `h`. Cyclic or
/// degenerate automata are never sculptures, since both properties are
/// inherited from bulks by sub-complexes.
pub fn is_sculpture(
    h: &Hda,
    opts: SculptureSearch,
) -> Result<Option<Sculpture>, TranslateError> {
    if h.is_acyclic().is_err() || h.is_non_degenerate().is_err() {
        return Ok(None);
    }
    let (h, _) = h.reachable_part();
    let class_count = event_classes(&h).len();
    let lo = h.max_dim();
    let hi = class_count.max(lo);
    if lo > opts.max_dim {
        return Err(TranslateError::SearchBudgetExceeded);
    }
    let mut budget = opts.budget;
    for n in lo..=hi.min(opts.max_dim) {
        if let Some(embedding) = embed_into_bulk(&h, n, &mut budget)? {
            let mut labels: Vec<Option<Label>> = vec![None; n];
            for q in h.cells_of_dim(1) {
                let (s, t) = embedding[&q];
                let d = s.diff(t).iter().next().unwrap();
                labels[d] = Some(h.label(q).clone());
            }
            let bulk_labels: Vec<Label> = labels
                .into_iter()
                .map(|l| l.expect("every direction of a minimal bulk carries a transition"))
                .collect();
            let sc = Sculpture {
                hda: h.clone(),
                bulk_dim: n,
                bulk_labels,
                embedding: embedding
                    .into_iter()
                    .map(|(c, key)| (h.id(c).to_string(), key))
                    .collect(),
            };
            sc.validate()?;
            return Ok(Some(sc));
        }
    }
    if hi > opts.max_dim {
        return Err(TranslateError::SearchBudgetExceeded);
    }
    Ok(None)
}

/// Backtracking embedding search into the bulk of dimension n.
fn embed_into_bulk(
    h: &Hda,
    n: usize,
    budget: &mut u64,
) -> Result<Option<BTreeMap<usize, (EventSet, EventSet)>>, TranslateError> {
    // Assignment order: breadth-first over face- and step-adjacency from
    // the initial cell, so each cell is constrained by an assigned one.
    let count = h.cell_count();
    let mut order = Vec::with_capacity(count);
    let mut seen = vec![false; count];
    let mut queue = VecDeque::new();
    queue.push_back(h.initial());
    seen[h.initial()] = true;
    while let Some(c) = queue.pop_front() {
        order.push(c);
        let mut neighbors: Vec<usize> = Vec::new();
        for i in 1..=h.dim(c) {
            neighbors.push(h.s_face(c, i));
            neighbors.push(h.t_face(c, i));
        }
        for &(_, y) in h.up_steps(c) {
            neighbors.push(y);
        }
        for q in h.cells_of_dim(h.dim(c) + 1) {
            for i in 1..=h.dim(q) {
                if h.t_face(q, i) == c {
                    neighbors.push(q);
                }
            }
        }
        neighbors.sort_unstable();
        for y in neighbors {
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    for (c, seen) in seen.iter().enumerate() {
        if !seen {
            order.push(c);
        }
    }

    struct Ctx<'a> {
        h: &'a Hda,
        n: usize,
        order: Vec<usize>,
        assign: Vec<Option<(EventSet, EventSet)>>,
        used: HashSet<(u64, u64)>,
        dir_labels: Vec<Option<Label>>,
    }
    fn key_s_face(key: (EventSet, EventSet), i: usize) -> (EventSet, EventSet) {
        let d: Vec<usize> = key.0.diff(key.1).iter().collect();
        (key.0.remove(d[i - 1]), key.1)
    }
    fn key_t_face(key: (EventSet, EventSet), i: usize) -> (EventSet, EventSet) {
        let d: Vec<usize> = key.0.diff(key.1).iter().collect();
        (key.0, key.1.insert(d[i - 1]))
    }
    fn candidates(ctx: &Ctx, c: usize) -> Vec<(EventSet, EventSet)> {
        let h = ctx.h;
        if c == h.initial() {
            return vec![(EventSet::EMPTY, EventSet::EMPTY)];
        }
        // Forced by an assigned higher cell whose face this is.
        for q in 0..h.cell_count() {
            if h.dim(q) != h.dim(c) + 1 {
                continue;
            }
            if let Some(kq) = ctx.assign[q] {
                for i in 1..=h.dim(q) {
                    if h.s_face(q, i) == c {
                        return vec![key_s_face(kq, i)];
                    }
                    if h.t_face(q, i) == c {
                        return vec![key_t_face(kq, i)];
                    }
                }
            }
        }
        // Constrained from below through an assigned face.
        let mut out: Vec<(EventSet, EventSet)> = Vec::new();
        let mut constrained = false;
        for i in 1..=h.dim(c) {
            let sf = h.s_face(c, i);
            if let Some((xs, xt)) = ctx.assign[sf] {
                constrained = true;
                for d in 0..ctx.n {
                    if xs.contains(d) {
                        continue;
                    }
                    let s2 = xs.insert(d);
                    let pos = s2.diff(xt).iter().position(|x| x == d).unwrap() + 1;
                    if pos == i {
                        out.push((s2, xt));
                    }
                }
                break;
            }
            let tf = h.t_face(c, i);
            if let Some((xs, xt)) = ctx.assign[tf] {
                constrained = true;
                for d in xt.iter() {
                    let t2 = xt.remove(d);
                    let pos = xs.diff(t2).iter().position(|x| x == d).unwrap() + 1;
                    if pos == i {
                        out.push((xs, t2));
                    }
                }
                break;
            }
        }
        if constrained {
            return out;
        }
        // Unconstrained (disconnected piece): every key of the dimension.
        let all = EventSet::full(ctx.n);
        for s in all.subsets() {
            for t in s.subsets() {
                if s.diff(t).len() == h.dim(c) {
                    out.push((s, t));
                }
            }
        }
        out
    }
    fn consistent(ctx: &Ctx, c: usize, key: (EventSet, EventSet)) -> bool {
        let h = ctx.h;
        if key.0.diff(key.1).len() != h.dim(c) {
            return false;
        }
        if ctx.used.contains(&(key.0 .0, key.1 .0)) {
            return false;
        }
        for i in 1..=h.dim(c) {
            if let Some(k) = ctx.assign[h.s_face(c, i)] {
                if k != key_s_face(key, i) {
                    return false;
                }
            }
            if let Some(k) = ctx.assign[h.t_face(c, i)] {
                if k != key_t_face(key, i) {
                    return false;
                }
            }
        }
        // Assigned higher neighbours must map this cell to their face.
        for q in 0..h.cell_count() {
            if h.dim(q) != h.dim(c) + 1 {
                continue;
            }
            if let Some(kq) = ctx.assign[q] {
                for i in 1..=h.dim(q) {
                    if h.s_face(q, i) == c && key_s_face(kq, i) != key {
                        return false;
                    }
                    if h.t_face(q, i) == c && key_t_face(kq, i) != key {
                        return false;
                    }
                }
            }
        }
        if h.dim(c) == 1 {
            let d = key.0.diff(key.1).iter().next().unwrap();
            if let Some(l) = &ctx.dir_labels[d] {
                if l != h.label(c) {
                    return false;
                }
            }
        }
        true
    }
    fn backtrack(ctx: &mut Ctx, k: usize, budget: &mut u64) -> Result<bool, TranslateError> {
        if *budget == 0 {
            return Err(TranslateError::SearchBudgetExceeded);
        }
        *budget -= 1;
        if k == ctx.order.len() {
            return Ok(true);
        }
        let c = ctx.order[k];
        let cands = candidates(ctx, c);
        for key in cands {
            if !consistent(ctx, c, key) {
                continue;
            }
            ctx.assign[c] = Some(key);
            ctx.used.insert((key.0 .0, key.1 .0));
            let mut label_set = None;
            if ctx.h.dim(c) == 1 {
                let d = key.0.diff(key.1).iter().next().unwrap();
                if ctx.dir_labels[d].is_none() {
                    ctx.dir_labels[d] = Some(ctx.h.label(c).clone());
                    label_set = Some(d);
                }
            }
            if backtrack(ctx, k + 1, budget)? {
                return Ok(true);
            }
            ctx.assign[c] = None;
            ctx.used.remove(&(key.0 .0, key.1 .0));
            if let Some(d) = label_set {
                ctx.dir_labels[d] = None;
            }
        }
        Ok(false)
    }

    let mut ctx = Ctx {
        h,
        n,
        order,
        assign: vec![None; count],
        used: HashSet::new(),
        dir_labels: vec![None; n],
    };
    if backtrack(&mut ctx, 0, budget)? {
        Ok(Some(
            ctx.assign
                .iter()
                .enumerate()
                .map(|(c, k)| (c, k.expect("complete assignment")))
                .collect(),
        ))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::st_isomorphic;
    use crate::fixtures::*;
    use crate::hda::hda_isomorphic;

    #[test]
    fn st_into_hda_examples() {
        let st = filled_square();
        let h = st_into_hda(&st, &EventListing::default_for(&st)).unwrap();
        assert!(hda_isomorphic(&h, &filled_square_hda()).is_some());
        assert!(h.is_acyclic().is_ok());
        assert!(h.is_non_degenerate().is_ok());

        let single = st_chars(&[], &[("", "")]).unwrap();
        let h = st_into_hda(&single, &EventListing::default_for(&single)).unwrap();
        assert_eq!(h.cell_count(), 1);

        assert!(st_into_hda(&triangle(), &EventListing::default_for(&triangle())).is_err());
    }

    #[test]
    fn st_into_hda_collapses_asym_variants() {
        let a2 = asym_conflict_2ev();
        let a3 = asym_conflict_3ev();
        let h2 = st_into_hda(&a2, &EventListing::default_for(&a2)).unwrap();
        let h3 = st_into_hda(&a3, &EventListing::default_for(&a3)).unwrap();
        assert!(hda_isomorphic(&h2, &h3).is_some());
        assert!(st_isomorphic(&a2, &a3).is_none());
    }

    #[test]
    fn listings_yield_isomorphic_hdas() {
        let st = filled_square();
        let l1 = EventListing::default_for(&st);
        let l2 = EventListing::from_ids(
            &st,
            &[crate::event::EventId::new("b"), crate::event::EventId::new("a")],
        )
        .unwrap();
        let h1 = st_into_hda(&st, &l1).unwrap();
        let h2 = st_into_hda(&st, &l2).unwrap();
        // Different listings agree only up to reindexing of the maps.
        assert!(crate::hda::hda_isomorphic_reindexing(&h1, &h2).is_some());
        assert!(hda_isomorphic(&h1, &h2).is_none());
    }

    #[test]
    fn hda_into_st_examples() {
        let st = hda_into_st(&filled_square_hda()).unwrap();
        assert_eq!(st.event_count(), 2);
        assert_eq!(st.config_count(), 9);
        assert!(st_isomorphic(&st, &filled_square()).is_some());

        // The interleaving square falls apart into four events.
        let st = hda_into_st(&empty_square_hda()).unwrap();
        assert_eq!(st.event_count(), 4);
        assert_eq!(st.config_count(), 9);
        let rep = st.property_report();
        assert!(rep.rooted && rep.connected && rep.adjacent_closed);
    }

    #[test]
    fn hda_into_st_collapses_cube_and_unfolding() {
        let h = cube_minus_face_hda();
        let u = h.history_unfolding().unwrap();
        assert!(hda_isomorphic(&h, &u).is_none());
        let a = hda_into_st(&h).unwrap();
        let b = hda_into_st(&u).unwrap();
        assert!(st_isomorphic(&a, &b).is_some());

        // Even with the dotted transitions added on both sides.
        let a = hda_into_st(&cube_minus_face_dotted_hda()).unwrap();
        let b = hda_into_st(&cube_minus_face_unfolded_dotted_hda()).unwrap();
        assert!(st_isomorphic(&a, &b).is_some());
    }

    #[test]
    fn bulk_sizes() {
        let l = |n: usize| -> Vec<Label> {
            (0..n).map(|i| Label::new(format!("l{i}"))).collect()
        };
        assert_eq!(make_bulk(0, &l(0)).unwrap().hda.cell_count(), 1);
        assert_eq!(make_bulk(2, &l(2)).unwrap().hda.cell_count(), 9);
        assert_eq!(make_bulk(3, &l(3)).unwrap().hda.cell_count(), 27);
        assert!(matches!(
            make_bulk(BULK_DIM_CAP + 1, &l(BULK_DIM_CAP + 1)),
            Err(TranslateError::DimensionCap(_, _))
        ));
    }

    #[test]
    fn sculpture_round_trips() {
        for st in [
            filled_square(),
            empty_square(),
            chain_ab(),
            choice_ab(),
            asym_conflict_2ev(),
            asym_conflict_3ev(),
            parallel_switch(),
            resolved_conflict(),
        ] {
            let sc = st_into_sculpture(&st, &EventListing::default_for(&st)).unwrap();
            let back = sculpture_into_st(&sc).unwrap();
            assert!(st_isomorphic(&st, &back).is_some(), "round trip failed on {st:?}");
        }
    }

    #[test]
    fn zero_dimensional_sculpture_round_trips() {
        let single = st_chars(&[], &[("", "")]).unwrap();
        let sc = st_into_sculpture(&single, &EventListing::default_for(&single)).unwrap();
        assert_eq!(sc.bulk_dim, 0);
        let back = sculpture_into_st(&sc).unwrap();
        assert_eq!(back.config_count(), 1);
        assert!(back.contains(crate::st::StConfig::ROOT));
        let via_bulk = hda_into_st_sculpture(&sc).unwrap();
        assert!(st_isomorphic(&via_bulk, &back).is_some());
    }

    #[test]
    fn whole_bulk_reads_back_as_full_structure() {
        let labels = vec![Label::new("a"), Label::new("b")];
        let bulk = make_bulk(2, &labels).unwrap();
        let embedding = (0..bulk.hda.cell_count())
            .map(|c| (bulk.hda.id(c).to_string(), bulk.key_of_cell(c)))
            .collect();
        let sc = Sculpture { hda: bulk.hda.clone(), bulk_dim: 2, bulk_labels: labels, embedding };
        let st = sculpture_into_st(&sc).unwrap();
        assert_eq!(st.config_count(), 9);
        assert!(st_isomorphic(&st, &filled_square()).is_some());
    }

    #[test]
    fn sculptures_separate_asym_variants() {
        let a2 = asym_conflict_2ev();
        let a3 = asym_conflict_3ev();
        let s2 = st_into_sculpture(&a2, &EventListing::default_for(&a2)).unwrap();
        let s3 = st_into_sculpture(&a3, &EventListing::default_for(&a3)).unwrap();
        assert!(!sculpture_isomorphic(&s2, &s3));
        assert!(sculpture_isomorphic(&s2, &s2));
    }

    #[test]
    fn alpha_chain_examples() {
        use FaceKind::*;
        // Equal index lists are equivalent regardless of kinds.
        let a = AlphaChain(vec![(S, 1), (T, 1)]);
        let b = AlphaChain(vec![(T, 1), (S, 1)]);
        assert!(alpha_chain_equiv(&a, &b, 2).unwrap());
        // The two orders of removing both directions of a square.
        let a = AlphaChain(vec![(S, 1), (S, 1)]);
        let b = AlphaChain(vec![(S, 2), (S, 1)]);
        assert!(alpha_chain_equiv(&a, &b, 2).unwrap());
        // Different residual lists are inequivalent.
        let a = AlphaChain(vec![(S, 1)]);
        let b = AlphaChain(vec![(S, 2)]);
        assert!(!alpha_chain_equiv(&a, &b, 2).unwrap());
        // Length mismatch is an error.
        let b2 = AlphaChain(vec![(S, 1), (S, 1)]);
        assert!(matches!(alpha_chain_equiv(&a, &b2, 2), Err(TranslateError::LengthMismatch)));
    }

    /// Oracle: connectivity under single cubical-law rewrites on the
    /// index lists, kinds quotiented away.
    fn chains_connected(a: &[usize], b: &[usize], n: usize) -> bool {
        use std::collections::{BTreeSet, VecDeque};
        let valid = |l: &[usize]| l.iter().enumerate().all(|(q, &i)| i >= 1 && i <= n - q);
        assert!(valid(a) && valid(b));
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(a.to_vec());
        queue.push_back(a.to_vec());
        while let Some(l) = queue.pop_front() {
            if l == b {
                return true;
            }
            for p in 0..l.len().saturating_sub(1) {
                let (x, y) = (l[p], l[p + 1]);
                let mut m = l.clone();
                if y < x {
                    m[p] = y;
                    m[p + 1] = x - 1;
                } else {
                    m[p] = y + 1;
                    m[p + 1] = x;
                }
                if valid(&m) && seen.insert(m.clone()) {
                    queue.push_back(m);
                }
            }
        }
        false
    }

    #[test]
    fn alpha_chain_equiv_matches_rewrite_oracle_small() {
        fn all_lists(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 1..=n {
                for rest in all_lists(n - 1, k - 1) {
                    let mut l = vec![first];
                    l.extend(rest);
                    out.push(l);
                }
            }
            out
        }
        for n in 1..=3usize {
            for k in 0..=n {
                let lists = all_lists(n, k);
                for a in &lists {
                    for b in &lists {
                        let ca = AlphaChain(a.iter().map(|&i| (FaceKind::S, i)).collect());
                        let cb = AlphaChain(b.iter().map(|&i| (FaceKind::T, i)).collect());
                        let fast = alpha_chain_equiv(&ca, &cb, n).unwrap();
                        let slow = chains_connected(a, b, n);
                        assert_eq!(fast, slow, "n={n} a={a:?} b={b:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn sculpture_search_examples() {
        let opts = SculptureSearch::default();
        // The angelic choice embeds into a 3-bulk, minimally.
        let sc = is_sculpture(&angelic_choice_hda(), opts).unwrap().unwrap();
        assert_eq!(sc.bulk_dim, 3);
        // The demonic choice is degenerate, hence never a sculpture.
        assert!(is_sculpture(&demonic_choice_hda(), opts).unwrap().is_none());
        // The speed game shares square faces, which no bulk admits.
        assert!(is_sculpture(&speed_game_hda(), opts).unwrap().is_none());
        // The interleaving square sculpts from dimension 2.
        let sc = is_sculpture(&empty_square_hda(), opts).unwrap().unwrap();
        assert_eq!(sc.bulk_dim, 2);
        let sc = is_sculpture(&filled_square_hda(), opts).unwrap().unwrap();
        assert_eq!(sc.bulk_dim, 2);
        // Cyclic automata are never sculptures.
        assert!(is_sculpture(&cylinder_hda(), opts).unwrap().is_none());
    }

    #[test]
    fn bulk_classes_restore_the_interleaving_square() {
        let sc = is_sculpture(&empty_square_hda(), SculptureSearch::default()).unwrap().unwrap();
        let via_bulk = hda_into_st_sculpture(&sc).unwrap();
        assert_eq!(via_bulk.event_count(), 2);
        assert!(st_isomorphic(&via_bulk, &empty_square()).is_some());
        let direct = sculpture_into_st(&sc).unwrap();
        assert!(st_isomorphic(&via_bulk, &direct).is_some());
    }

    #[test]
    fn hintost_on_sculptures_matches_direct_reading() {
        for st in [filled_square(), empty_square(), chain_ab(), asym_conflict_2ev()] {
            let sc = st_into_sculpture(&st, &EventListing::default_for(&st)).unwrap();
            let a = hda_into_st_sculpture(&sc).unwrap();
            let b = sculpture_into_st(&sc).unwrap();
            assert!(st_isomorphic(&a, &b).is_some(), "bulk-aware reading diverged on {st:?}");
        }
    }

    #[test]
    fn quotient_examples() {
        let st = asym_conflict_3ev();
        // Identity quotient is an isomorphic copy.
        let q = quotient_events(&st, &[]).unwrap();
        assert!(st_isomorphic(&q, &st).is_some());
        // Merging the two s-copies restores the 2-event presentation.
        let merge = vec![vec![EventId::new("s1"), EventId::new("s2")]];
        let q = quotient_events(&st, &merge).unwrap();
        assert!(st_isomorphic(&q, &asym_conflict_2ev()).is_some());
        // Merging differently labelled events is rejected.
        let bad = vec![vec![EventId::new("b"), EventId::new("s1")]];
        assert!(matches!(
            quotient_events(&st, &bad),
            Err(TranslateError::LabelConflictInClass(_, _))
        ));
    }

    #[test]
    fn quotient_by_bulk_classes_recovers_sculpture_reading() {
        // ≋ ∘ hintost on a sculpture agrees with the bulk-aware reading:
        // quotient the plain hintost events by shared bulk direction.
        let sc = is_sculpture(&empty_square_hda(), SculptureSearch::default()).unwrap().unwrap();
        let plain = hda_into_st(&sc.hda).unwrap();
        assert_eq!(plain.event_count(), 4);
        let mut by_dir: std::collections::BTreeMap<usize, Vec<EventId>> = Default::default();
        for q in sc.hda.cells_of_dim(1) {
            let (s, t) = sc.embedding[sc.hda.id(q)];
            let d = s.diff(t).iter().next().unwrap();
            by_dir.entry(d).or_default().push(EventId::new(sc.hda.id(q).to_string()));
        }
        let partition: Vec<Vec<EventId>> = by_dir.into_values().collect();
        let quotiented = quotient_events(&plain, &partition).unwrap();
        let bulk_aware = hda_into_st_sculpture(&sc).unwrap();
        assert!(st_isomorphic(&quotiented, &bulk_aware).is_some());
    }
}
