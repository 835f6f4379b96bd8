//! STC-structures: ST-structures extended with cancellation, their step
//! semantics, termination via maximality, Chu encodings over 3 and 4,
//! and the generators for the cancellation examples.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::event::{Event, EventId, EventSet, Label, MAX_EVENTS};
use crate::st::{StConfig, StError, StStructure};

/// A triple (S,T,C) with T ⊆ S and S ∩ C = ∅.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct StcConfig {
    pub started: EventSet,
    pub terminated: EventSet,
    pub canceled: EventSet,
}

impl StcConfig {
    pub const ROOT: StcConfig = StcConfig {
        started: EventSet::EMPTY,
        terminated: EventSet::EMPTY,
        canceled: EventSet::EMPTY,
    };

    pub fn new(started: EventSet, terminated: EventSet, canceled: EventSet) -> Self {
        debug_assert!(terminated.is_subset(started));
        debug_assert!(started.inter(canceled).is_empty());
        StcConfig { started, terminated, canceled }
    }

    pub fn dim(self) -> usize {
        self.started.len() + self.terminated.len() + self.canceled.len()
    }

    /// Componentwise inclusion.
    pub fn is_subset(self, other: StcConfig) -> bool {
        self.started.is_subset(other.started)
            && self.terminated.is_subset(other.terminated)
            && self.canceled.is_subset(other.canceled)
    }
}

impl std::fmt::Debug for StcConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:?},{:?},{:?})", self.started, self.terminated, self.canceled)
    }
}

impl Ord for StcConfig {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.dim()
            .cmp(&other.dim())
            .then_with(|| self.started.lex_cmp(other.started))
            .then_with(|| self.terminated.lex_cmp(other.terminated))
            .then_with(|| self.canceled.lex_cmp(other.canceled))
    }
}

impl PartialOrd for StcConfig {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StcError {
    #[error("event `{0}` declared more than once")]
    DuplicateEvent(EventId),
    #[error("undeclared event `{0}`")]
    UndeclaredEvent(EventId),
    #[error("structure exceeds {MAX_EVENTS} events")]
    TooManyEvents,
    #[error("config {0} violates T ⊆ S")]
    TnotSubsetS(String),
    #[error("config {0} violates S ∩ C = ∅")]
    SCOverlap(String),
    #[error("config {0} has no completion (S,S,C') with C ⊆ C'")]
    MissingDiagonalWithC(String),
    #[error("config {0} is not part of the structure")]
    ConfigNotInStructure(String),
    #[error("state {0} carries an invalid valuation: {1}")]
    InvalidValuation(usize, String),
    #[error("projection to an ST-structure fails the closure: {0}")]
    ProjectionViolatesSTConstraint(String),
    #[error(transparent)]
    St(#[from] StError),
}

/// An STC-structure over labelled events.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StcStructure {
    events: Vec<Event>,
    configs: BTreeSet<StcConfig>,
}

impl StcStructure {
    pub fn new(events: Vec<Event>, configs: Vec<StcConfig>) -> Result<Self, StcError> {
        if events.len() > MAX_EVENTS {
            return Err(StcError::TooManyEvents);
        }
        let mut events = events;
        events.sort_by(|a, b| a.id.cmp(&b.id));
        for w in events.windows(2) {
            if w[0].id == w[1].id {
                return Err(StcError::DuplicateEvent(w[0].id.clone()));
            }
        }
        let universe = EventSet::full(events.len());
        let set: BTreeSet<StcConfig> = configs.into_iter().collect();
        let stc = StcStructure { events, configs: set };
        for &c in &stc.configs {
            for part in [c.started, c.terminated, c.canceled] {
                if !part.is_subset(universe) {
                    let stray = part.diff(universe).iter().next().unwrap();
                    return Err(StcError::UndeclaredEvent(EventId::new(format!("#{stray}"))));
                }
            }
            if !c.terminated.is_subset(c.started) {
                return Err(StcError::TnotSubsetS(stc.show_config(c)));
            }
            if !c.started.inter(c.canceled).is_empty() {
                return Err(StcError::SCOverlap(stc.show_config(c)));
            }
            let ok = stc.configs.iter().any(|d| {
                d.started == c.started && d.terminated == c.started && c.canceled.is_subset(d.canceled)
            });
            if !ok {
                return Err(StcError::MissingDiagonalWithC(stc.show_config(c)));
            }
        }
        Ok(stc)
    }

    pub fn from_ids(
        events: Vec<Event>,
        raw: &[(Vec<EventId>, Vec<EventId>, Vec<EventId>)],
    ) -> Result<Self, StcError> {
        let mut sorted = events;
        sorted.sort_by(|a, b| a.id.cmp(&b.id));
        let index = |id: &EventId| -> Result<usize, StcError> {
            sorted
                .binary_search_by(|e| e.id.cmp(id))
                .map_err(|_| StcError::UndeclaredEvent(id.clone()))
        };
        let mut configs = Vec::new();
        for (s_ids, t_ids, c_ids) in raw {
            let build = |ids: &[EventId]| -> Result<EventSet, StcError> {
                let mut m = EventSet::EMPTY;
                for id in ids {
                    m = m.insert(index(id)?);
                }
                Ok(m)
            };
            let s = build(s_ids)?;
            let t = build(t_ids)?;
            let c = build(c_ids)?;
            configs.push(StcConfig { started: s, terminated: t, canceled: c });
        }
        Self::new(sorted, configs)
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn event_count(&self) -> usize {
        self.events.len()
    }

    pub fn configs(&self) -> impl Iterator<Item = StcConfig> + '_ {
        self.configs.iter().copied()
    }

    pub fn config_count(&self) -> usize {
        self.configs.len()
    }

    pub fn contains(&self, c: StcConfig) -> bool {
        self.configs.contains(&c)
    }

    pub fn label_of(&self, e: usize) -> &Label {
        &self.events[e].label
    }

    pub fn event_index(&self, id: &EventId) -> Result<usize, StcError> {
        self.events
            .binary_search_by(|e| e.id.cmp(id))
            .map_err(|_| StcError::UndeclaredEvent(id.clone()))
    }

    pub fn show_set(&self, m: EventSet) -> String {
        let names: Vec<&str> = m.iter().map(|i| self.events[i].id.as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn show_config(&self, c: StcConfig) -> String {
        format!(
            "({},{},{})",
            self.show_set(c.started),
            self.show_set(c.terminated),
            self.show_set(c.canceled)
        )
    }

    /// Configurations maximal under componentwise inclusion.
    pub fn maximal_configs(&self) -> Vec<StcConfig> {
        self.configs()
            .filter(|&c| !self.configs().any(|d| c != d && c.is_subset(d)))
            .collect()
    }
}

/// The eight step kinds: plain s/t plus the six cancellation kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum StcStepKind {
    /// Start one event, C unchanged.
    S,
    /// Terminate one event, C unchanged.
    T,
    /// Start one event and cancel exactly one.
    Cs1,
    /// Terminate one event and cancel exactly one.
    Ct1,
    /// Start one event and cancel at least one.
    CsN,
    /// Terminate one event and cancel at least one.
    CtN,
    /// Start one uncanceled event while C strictly grows or shrinks.
    CsPm,
    /// Terminate one event while C strictly grows or shrinks.
    CtPm,
}

impl StcStepKind {
    pub const ALL: [StcStepKind; 8] = [
        StcStepKind::S,
        StcStepKind::T,
        StcStepKind::Cs1,
        StcStepKind::Ct1,
        StcStepKind::CsN,
        StcStepKind::CtN,
        StcStepKind::CsPm,
        StcStepKind::CtPm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StcStepKind::S => "s",
            StcStepKind::T => "t",
            StcStepKind::Cs1 => "1+cs",
            StcStepKind::Ct1 => "1+ct",
            StcStepKind::CsN => "n+cs",
            StcStepKind::CtN => "n+ct",
            StcStepKind::CsPm => "pm-cs",
            StcStepKind::CtPm => "pm-ct",
        }
    }
}

/// A step between two STC-configurations of a structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CancellationStep {
    pub source: StcConfig,
    pub target: StcConfig,
    pub kind: StcStepKind,
    pub event: EventId,
    pub label: Label,
}

fn step_kind_applies(kind: StcStepKind, from: StcConfig, to: StcConfig, e: usize) -> bool {
    let s_move = to.terminated == from.terminated
        && from.started.is_strict_subset(to.started)
        && to.started.diff(from.started) == EventSet::singleton(e);
    let t_move = to.started == from.started
        && from.terminated.is_strict_subset(to.terminated)
        && to.terminated.diff(from.terminated) == EventSet::singleton(e);
    let c_grew = from.canceled.is_strict_subset(to.canceled);
    let c_shrunk = to.canceled.is_strict_subset(from.canceled);
    let c_same = from.canceled == to.canceled;
    match kind {
        StcStepKind::S => s_move && c_same,
        StcStepKind::T => t_move && c_same,
        StcStepKind::Cs1 => s_move && c_grew && to.canceled.diff(from.canceled).len() == 1,
        StcStepKind::Ct1 => t_move && c_grew && to.canceled.diff(from.canceled).len() == 1,
        StcStepKind::CsN => s_move && c_grew,
        StcStepKind::CtN => t_move && c_grew,
        StcStepKind::CsPm => s_move && !from.canceled.contains(e) && (c_grew || c_shrunk),
        StcStepKind::CtPm => t_move && (c_grew || c_shrunk),
    }
}

/// All steps of the allowed kinds leaving `cfg` whose target is in the
/// structure; a pair may satisfy several kinds and is reported per kind.
pub fn stc_steps(
    stc: &StcStructure,
    cfg: StcConfig,
    allowed: &[StcStepKind],
) -> Result<Vec<CancellationStep>, StcError> {
    if !stc.contains(cfg) {
        return Err(StcError::ConfigNotInStructure(stc.show_config(cfg)));
    }
    let mut out = Vec::new();
    for target in stc.configs() {
        let event = if target.started != cfg.started {
            let delta = target.started.diff(cfg.started);
            if delta.len() != 1 {
                continue;
            }
            delta.iter().next().unwrap()
        } else if target.terminated != cfg.terminated {
            let delta = target.terminated.diff(cfg.terminated);
            if delta.len() != 1 {
                continue;
            }
            delta.iter().next().unwrap()
        } else {
            continue;
        };
        for &kind in allowed {
            if step_kind_applies(kind, cfg, target, event) {
                out.push(CancellationStep {
                    source: cfg,
                    target,
                    kind,
                    event: stc.events()[event].id.clone(),
                    label: stc.label_of(event).clone(),
                });
            }
        }
    }
    out.sort_by(|a, b| {
        (a.kind, &a.event, a.target).cmp(&(b.kind, &b.event, b.target))
    });
    Ok(out)
}

/// Embeds an ST-structure with C = ∅ everywhere.
pub fn st_to_stc(st: &StStructure) -> StcStructure {
    let configs = st
        .configs()
        .map(|c| StcConfig { started: c.started, terminated: c.terminated, canceled: EventSet::EMPTY })
        .collect();
    StcStructure::new(st.events().to_vec(), configs).expect("embedding is valid")
}

/// Drops the C component, deduplicates, and revalidates as an
/// ST-structure.
pub fn stc_project_st(stc: &StcStructure) -> Result<StStructure, StcError> {
    let configs: Vec<StConfig> = stc
        .configs()
        .map(|c| StConfig::new(c.started, c.terminated))
        .collect();
    StStructure::new(stc.events().to_vec(), configs)
        .map_err(|e| StcError::ProjectionViolatesSTConstraint(e.to_string()))
}

/// A value of the Chu alphabet: 0 < ⊙ < 1, with ✕ added over 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ChuValue {
    Zero,
    During,
    One,
    Cancelled,
}

impl ChuValue {
    pub fn symbol(self) -> &'static str {
        match self {
            ChuValue::Zero => "0",
            ChuValue::During => "*",
            ChuValue::One => "1",
            ChuValue::Cancelled => "x",
        }
    }

    pub fn parse(s: &str) -> Option<ChuValue> {
        match s {
            "0" => Some(ChuValue::Zero),
            "*" => Some(ChuValue::During),
            "1" => Some(ChuValue::One),
            "x" => Some(ChuValue::Cancelled),
            _ => None,
        }
    }
}

/// How the order on the four values treats cancellation: the default
/// only lets C grow (0 < ✕); the enabling extension (✕ < 0) admits the
/// steps that re-enable events.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ChuOrderMode {
    #[default]
    MonotoneCancel,
    Enabling,
}

/// The partial order on Chu values under a given mode.
pub fn chu_leq(a: ChuValue, b: ChuValue, mode: ChuOrderMode) -> bool {
    use ChuValue::*;
    if a == b {
        return true;
    }
    match (a, b) {
        (Zero, During) | (Zero, One) | (During, One) => true,
        (Zero, Cancelled) => true,
        (Cancelled, Zero) => mode == ChuOrderMode::Enabling,
        _ => false,
    }
}

/// A Chu space over K ∈ {2,3,4}: events with states as total valuations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChuSpace {
    pub k: u8,
    pub events: Vec<Event>,
    pub states: BTreeSet<Vec<ChuValue>>,
}

/// Per-event valuation 0 / ⊙ / 1 from membership in S and T.
pub fn chu3_encode(st: &StStructure) -> ChuSpace {
    let n = st.event_count();
    let states = st
        .configs()
        .map(|c| {
            (0..n)
                .map(|e| match (c.started.contains(e), c.terminated.contains(e)) {
                    (false, _) => ChuValue::Zero,
                    (true, false) => ChuValue::During,
                    (true, true) => ChuValue::One,
                })
                .collect()
        })
        .collect();
    ChuSpace { k: 3, events: st.events().to_vec(), states }
}

pub fn chu3_decode(chu: &ChuSpace) -> Result<StStructure, StcError> {
    let mut configs = Vec::new();
    for (i, state) in chu.states.iter().enumerate() {
        let mut s = EventSet::EMPTY;
        let mut t = EventSet::EMPTY;
        for (e, v) in state.iter().enumerate() {
            match v {
                ChuValue::Zero => {}
                ChuValue::During => s = s.insert(e),
                ChuValue::One => {
                    s = s.insert(e);
                    t = t.insert(e);
                }
                ChuValue::Cancelled => {
                    return Err(StcError::InvalidValuation(i, "✕ in a Chu space over 3".into()))
                }
            }
        }
        configs.push(StConfig::new(s, t));
    }
    Ok(StStructure::new(chu.events.clone(), configs)?)
}

/// The four-case valuation adding ✕ for canceled events.
pub fn chu4_encode(stc: &StcStructure) -> ChuSpace {
    let n = stc.event_count();
    let states = stc
        .configs()
        .map(|c| {
            (0..n)
                .map(|e| {
                    if c.canceled.contains(e) {
                        ChuValue::Cancelled
                    } else if c.terminated.contains(e) {
                        ChuValue::One
                    } else if c.started.contains(e) {
                        ChuValue::During
                    } else {
                        ChuValue::Zero
                    }
                })
                .collect()
        })
        .collect();
    ChuSpace { k: 4, events: stc.events().to_vec(), states }
}

pub fn chu4_decode(chu: &ChuSpace) -> Result<StcStructure, StcError> {
    let mut configs = Vec::new();
    for state in chu.states.iter() {
        let mut s = EventSet::EMPTY;
        let mut t = EventSet::EMPTY;
        let mut c = EventSet::EMPTY;
        for (e, v) in state.iter().enumerate() {
            match v {
                ChuValue::Zero => {}
                ChuValue::During => s = s.insert(e),
                ChuValue::One => {
                    s = s.insert(e);
                    t = t.insert(e);
                }
                ChuValue::Cancelled => c = c.insert(e),
            }
        }
        configs.push(StcConfig { started: s, terminated: t, canceled: c });
    }
    StcStructure::new(chu.events.clone(), configs)
}

fn def_events() -> Vec<Event> {
    vec![Event::new("d", "d"), Event::new("e", "e"), Event::new("f", "f")]
}

/// Late choice: d runs and terminates before the choice between e and f
/// cancels the loser.
pub fn gen_angelic() -> StcStructure {
    let id = |s: &str| EventId::new(s);
    let raw: Vec<(Vec<EventId>, Vec<EventId>, Vec<EventId>)> = vec![
        (vec![], vec![], vec![]),
        (vec![id("d")], vec![], vec![]),
        (vec![id("d")], vec![id("d")], vec![]),
        (vec![id("d"), id("e")], vec![id("d")], vec![id("f")]),
        (vec![id("d"), id("f")], vec![id("d")], vec![id("e")]),
        (vec![id("d"), id("e")], vec![id("d"), id("e")], vec![id("f")]),
        (vec![id("d"), id("f")], vec![id("d"), id("f")], vec![id("e")]),
    ];
    StcStructure::from_ids(def_events(), &raw).unwrap()
}

/// Early choice: the commitment happens at the start of d.
pub fn gen_demonic() -> StcStructure {
    let id = |s: &str| EventId::new(s);
    let raw: Vec<(Vec<EventId>, Vec<EventId>, Vec<EventId>)> = vec![
        (vec![], vec![], vec![]),
        (vec![id("d")], vec![], vec![id("e")]),
        (vec![id("d")], vec![], vec![id("f")]),
        (vec![id("d")], vec![id("d")], vec![id("e")]),
        (vec![id("d")], vec![id("d")], vec![id("f")]),
        (vec![id("d"), id("f")], vec![id("d")], vec![id("e")]),
        (vec![id("d"), id("e")], vec![id("d")], vec![id("f")]),
        (vec![id("d"), id("e")], vec![id("d"), id("e")], vec![id("f")]),
        (vec![id("d"), id("f")], vec![id("d"), id("f")], vec![id("e")]),
    ];
    StcStructure::from_ids(def_events(), &raw).unwrap()
}

/// The asymmetric conflict s + b;s as an STC-structure: starting s
/// cancels b, so both outcomes are maximal.
pub fn gen_asym_conflict_stc() -> StcStructure {
    let id = |s: &str| EventId::new(s);
    let raw: Vec<(Vec<EventId>, Vec<EventId>, Vec<EventId>)> = vec![
        (vec![], vec![], vec![]),
        (vec![id("b")], vec![], vec![]),
        (vec![id("b")], vec![id("b")], vec![]),
        (vec![id("s")], vec![], vec![id("b")]),
        (vec![id("s")], vec![id("s")], vec![id("b")]),
        (vec![id("b"), id("s")], vec![id("b")], vec![]),
        (vec![id("b"), id("s")], vec![id("b"), id("s")], vec![]),
    ];
    StcStructure::from_ids(
        vec![Event::new("b", "b"), Event::new("s", "s")],
        &raw,
    )
    .unwrap()
}

/// The shutdown-backup loop truncated to `k_max` backup events: backups
/// b_1, b_2, … run in sequence, each concurrent with the shutdown s;
/// starting or finishing s cancels every backup not yet begun.
pub fn gen_shutdown_backup(k_max: usize) -> StcStructure {
    assert!(k_max >= 1, "at least one backup event");
    let mut events = vec![Event::new("s", "s")];
    for i in 1..=k_max {
        events.push(Event::new(format!("b{i:02}"), "b"));
    }
    let mut events_sorted = events.clone();
    events_sorted.sort_by(|a, b| a.id.cmp(&b.id));
    let idx_of = |id: &str| events_sorted.iter().position(|e| e.id.as_str() == id).unwrap();
    let s_idx = idx_of("s");
    let b_idx: Vec<usize> = (1..=k_max).map(|i| idx_of(&format!("b{i:02}"))).collect();
    let s_ev = EventSet::singleton(s_idx);
    let b_below = |k: usize| EventSet::from_indices(b_idx.iter().take(k.saturating_sub(1)).copied());
    let b_from = |k: usize| {
        EventSet::from_indices(b_idx.iter().skip(k.saturating_sub(1)).copied())
    };
    let mut configs: BTreeSet<StcConfig> = BTreeSet::new();
    for k in 1..=k_max + 1 {
        let done = b_below(k);
        let rest = b_from(k);
        // Corner: k-1 backups done, nothing else.
        configs.insert(StcConfig::new(done, done, EventSet::EMPTY));
        // Shutdown started from the corner, cancelling the remainder.
        configs.insert(StcConfig::new(s_ev.union(done), done, rest));
        // Shutdown terminated, remainder canceled: the terminal family.
        configs.insert(StcConfig::new(s_ev.union(done), s_ev.union(done), rest));
        // Shutdown started without cancellation yet.
        configs.insert(StcConfig::new(s_ev.union(done), done, EventSet::EMPTY));
        // Shutdown terminated without cancellation.
        configs.insert(StcConfig::new(s_ev.union(done), s_ev.union(done), EventSet::EMPTY));
        if k <= k_max {
            let bk = EventSet::singleton(b_idx[k - 1]);
            let rest_after = b_from(k + 1);
            // Backup k running.
            configs.insert(StcConfig::new(done.union(bk), done, EventSet::EMPTY));
            // Backup k and s running together, later backups canceled.
            configs.insert(StcConfig::new(
                s_ev.union(done).union(bk),
                done,
                rest_after,
            ));
            // s done while backup k still runs.
            configs.insert(StcConfig::new(
                s_ev.union(done).union(bk),
                s_ev.union(done),
                rest_after,
            ));
            // Backup k done with s running (same as the k+1 cancel edge).
            configs.insert(StcConfig::new(
                s_ev.union(done).union(bk),
                done.union(bk),
                rest_after,
            ));
        }
    }
    StcStructure::new(events, configs.into_iter().collect()).expect("families are valid")
}

/// Label-preserving isomorphism of STC-structures by backtracking over
/// event bijections.
pub fn stc_isomorphic(a: &StcStructure, b: &StcStructure) -> Option<Vec<(EventId, EventId)>> {
    if a.event_count() != b.event_count() || a.config_count() != b.config_count() {
        return None;
    }
    let n = a.event_count();
    let mut perm: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    fn apply(perm: &[Option<usize>], m: EventSet) -> EventSet {
        EventSet::from_indices(m.iter().map(|e| perm[e].unwrap()))
    }
    fn backtrack(
        k: usize,
        a: &StcStructure,
        b: &StcStructure,
        perm: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
    ) -> bool {
        let n = a.event_count();
        if k == n {
            return a.configs().all(|c| {
                b.contains(StcConfig {
                    started: apply(perm, c.started),
                    terminated: apply(perm, c.terminated),
                    canceled: apply(perm, c.canceled),
                })
            });
        }
        for f in 0..n {
            if used[f] || a.label_of(k) != b.label_of(f) {
                continue;
            }
            perm[k] = Some(f);
            used[f] = true;
            if backtrack(k + 1, a, b, perm, used) {
                return true;
            }
            perm[k] = None;
            used[f] = false;
        }
        false
    }
    if !backtrack(0, a, b, &mut perm, &mut used) {
        return None;
    }
    Some(
        (0..n)
            .map(|e| (a.events()[e].id.clone(), b.events()[perm[e].unwrap()].id.clone()))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    #[test]
    fn validation_examples() {
        assert_eq!(gen_angelic().config_count(), 7);
        assert_eq!(gen_demonic().config_count(), 9);
        // S ∩ C ≠ ∅ rejected.
        let err = StcStructure::new(
            vec![Event::new("d", "d")],
            vec![StcConfig {
                started: EventSet::singleton(0),
                terminated: EventSet::EMPTY,
                canceled: EventSet::singleton(0),
            }],
        )
        .unwrap_err();
        assert!(matches!(err, StcError::SCOverlap(_)));
        // The lone root is fine.
        assert!(StcStructure::new(vec![], vec![StcConfig::ROOT]).is_ok());
        // Missing completion rejected.
        let err = StcStructure::new(
            vec![Event::new("d", "d"), Event::new("e", "e")],
            vec![StcConfig {
                started: EventSet::singleton(0),
                terminated: EventSet::EMPTY,
                canceled: EventSet::singleton(1),
            }],
        )
        .unwrap_err();
        assert!(matches!(err, StcError::MissingDiagonalWithC(_)));
    }

    fn scfg(stc: &StcStructure, s: &[&str], t: &[&str], c: &[&str]) -> StcConfig {
        let build = |ids: &[&str]| {
            EventSet::from_indices(
                ids.iter().map(|id| stc.event_index(&EventId::new(*id)).unwrap()),
            )
        };
        let cfg = StcConfig { started: build(s), terminated: build(t), canceled: build(c) };
        assert!(stc.contains(cfg), "fixture config {} missing", stc.show_config(cfg));
        cfg
    }

    #[test]
    fn demonic_steps_cancel_at_start() {
        let stc = gen_demonic();
        let steps = stc_steps(&stc, StcConfig::ROOT, &StcStepKind::ALL).unwrap();
        let cs1: Vec<&CancellationStep> =
            steps.iter().filter(|s| s.kind == StcStepKind::Cs1).collect();
        assert_eq!(cs1.len(), 2);
        let targets: BTreeSet<StcConfig> = cs1.iter().map(|s| s.target).collect();
        assert!(targets.contains(&scfg(&stc, &["d"], &[], &["e"])));
        assert!(targets.contains(&scfg(&stc, &["d"], &[], &["f"])));
    }

    #[test]
    fn angelic_steps_cancel_after_d() {
        let stc = gen_angelic();
        let mid = scfg(&stc, &["d"], &["d"], &[]);
        let steps = stc_steps(&stc, mid, &[StcStepKind::Cs1]).unwrap();
        assert_eq!(steps.len(), 2);
        let targets: BTreeSet<StcConfig> = steps.iter().map(|s| s.target).collect();
        assert!(targets.contains(&scfg(&stc, &["d", "e"], &["d"], &["f"])));
        assert!(targets.contains(&scfg(&stc, &["d", "f"], &["d"], &["e"])));
        // Maximal configurations admit no steps.
        for m in stc.maximal_configs() {
            assert!(stc_steps(&stc, m, &StcStepKind::ALL).unwrap().is_empty());
        }
    }

    #[test]
    fn pm_step_never_starts_canceled_event() {
        let stc = gen_demonic();
        for cfg in stc.configs() {
            for step in stc_steps(&stc, cfg, &[StcStepKind::CsPm]).unwrap() {
                let e = stc.event_index(&step.event).unwrap();
                assert!(!cfg.canceled.contains(e));
            }
        }
    }

    #[test]
    fn enabling_mode_steps_shrink_the_canceled_set() {
        // A start that cancels e, then a termination that re-enables it:
        // only the ± kinds admit a shrinking C.
        let id = |s: &str| EventId::new(s);
        let raw: Vec<(Vec<EventId>, Vec<EventId>, Vec<EventId>)> = vec![
            (vec![], vec![], vec![]),
            (vec![id("a")], vec![], vec![id("e")]),
            (vec![id("a")], vec![id("a")], vec![id("e")]),
            (vec![id("a")], vec![id("a")], vec![]),
        ];
        let stc = StcStructure::from_ids(
            vec![Event::new("a", "a"), Event::new("e", "e")],
            &raw,
        )
        .unwrap();
        let mid = scfg(&stc, &["a"], &[], &["e"]);
        let steps = stc_steps(&stc, mid, &StcStepKind::ALL).unwrap();
        let shrinking: Vec<&CancellationStep> =
            steps.iter().filter(|s| s.target.canceled.is_empty()).collect();
        assert!(!shrinking.is_empty());
        assert!(shrinking.iter().all(|s| s.kind == StcStepKind::CtPm));
        // The mask really filters.
        let only_plain = stc_steps(&stc, mid, &[StcStepKind::S, StcStepKind::T]).unwrap();
        assert!(only_plain.iter().all(|s| s.target.canceled == mid.canceled));
    }

    #[test]
    fn projections_of_both_choices_agree() {
        let ang = stc_project_st(&gen_angelic()).unwrap();
        let dem = stc_project_st(&gen_demonic()).unwrap();
        assert_eq!(ang, dem);
        assert!(stc_isomorphic(&gen_angelic(), &gen_demonic()).is_none());
    }

    #[test]
    fn st_embedding_round_trips() {
        let st = filled_square();
        let stc = st_to_stc(&st);
        assert_eq!(stc_project_st(&stc).unwrap(), st);
    }

    #[test]
    fn chu_encodings_are_inverses() {
        for st in [filled_square(), empty_square(), triangle(), parallel_switch()] {
            let chu = chu3_encode(&st);
            assert_eq!(chu3_decode(&chu).unwrap(), st);
        }
        for stc in [gen_angelic(), gen_demonic(), gen_shutdown_backup(2)] {
            let chu = chu4_encode(&stc);
            assert_eq!(chu4_decode(&chu).unwrap(), stc);
        }
    }

    #[test]
    fn chu_value_cases() {
        let stc = gen_demonic();
        let chu = chu4_encode(&stc);
        // (d,∅,e) over d,e,f: d ↦ ⊙, e ↦ ✕, f ↦ 0.
        let want = vec![ChuValue::During, ChuValue::Cancelled, ChuValue::Zero];
        assert!(chu.states.contains(&want));
        // (de,de,f) ↦ d,e ↦ 1, f ↦ ✕.
        let want = vec![ChuValue::One, ChuValue::One, ChuValue::Cancelled];
        assert!(chu.states.contains(&want));
        // Cancelled values are invalid over 3.
        let mut bad = chu.clone();
        bad.k = 3;
        assert!(matches!(chu3_decode(&bad), Err(StcError::InvalidValuation(_, _))));
    }

    #[test]
    fn chu3_valuations_follow_membership() {
        let st = filled_square();
        let chu = chu3_encode(&st);
        // (ab,a) over a,b: a ↦ 1, b ↦ ⊙.
        assert!(chu.states.contains(&vec![ChuValue::One, ChuValue::During]));
        // (∅,∅) is the all-zero state.
        assert!(chu.states.contains(&vec![ChuValue::Zero, ChuValue::Zero]));
        // Decoding {a ↦ 1, b ↦ 0} gives the configuration (a,a).
        let one_state = ChuSpace {
            k: 3,
            events: st.events().to_vec(),
            states: [
                vec![ChuValue::Zero, ChuValue::Zero],
                vec![ChuValue::One, ChuValue::Zero],
            ]
            .into_iter()
            .collect(),
        };
        let decoded = chu3_decode(&one_state).unwrap();
        let a = EventSet::singleton(decoded.event_index(&EventId::new("a")).unwrap());
        assert!(decoded.contains(crate::st::StConfig::new(a, a)));
    }

    #[test]
    fn single_config_structure_is_its_own_maximum() {
        let stc = StcStructure::new(vec![], vec![StcConfig::ROOT]).unwrap();
        assert_eq!(stc.maximal_configs(), vec![StcConfig::ROOT]);
    }

    #[test]
    fn chu_order_modes() {
        assert!(chu_leq(ChuValue::Zero, ChuValue::Cancelled, ChuOrderMode::MonotoneCancel));
        assert!(!chu_leq(ChuValue::Cancelled, ChuValue::Zero, ChuOrderMode::MonotoneCancel));
        assert!(chu_leq(ChuValue::Cancelled, ChuValue::Zero, ChuOrderMode::Enabling));
        assert!(!chu_leq(ChuValue::During, ChuValue::Cancelled, ChuOrderMode::Enabling));
    }

    #[test]
    fn asym_conflict_stc_maximal_configs() {
        let stc = gen_asym_conflict_stc();
        let maxima = stc.maximal_configs();
        assert_eq!(maxima.len(), 2);
        assert!(maxima.contains(&scfg(&stc, &["s"], &["s"], &["b"])));
        assert!(maxima.contains(&scfg(&stc, &["b", "s"], &["b", "s"], &[])));
    }

    #[test]
    fn shutdown_families() {
        let stc = gen_shutdown_backup(2);
        // Root and the first cancellation edge.
        assert!(stc.contains(StcConfig::ROOT));
        let all_b: Vec<EventId> = vec![EventId::new("b01"), EventId::new("b02")];
        let b_mask = EventSet::from_indices(
            all_b.iter().map(|id| stc.event_index(id).unwrap()),
        );
        let s = EventSet::singleton(stc.event_index(&EventId::new("s")).unwrap());
        assert!(stc.contains(StcConfig::new(s, EventSet::EMPTY, b_mask)));
        // Maximal configurations are exactly the terminal family.
        for m in stc.maximal_configs() {
            assert!(m.terminated.is_subset(m.started));
            assert!(m.terminated == m.started && m.started.contains(
                stc.event_index(&EventId::new("s")).unwrap()
            ));
        }
        assert_eq!(stc.maximal_configs().len(), 3);
        // The backup loop advances by a plain t-step to the next corner.
        let edge = scfg(&stc, &["b01"], &[], &[]);
        let steps = stc_steps(&stc, edge, &[StcStepKind::T]).unwrap();
        assert!(steps.iter().any(|st| st.target == scfg(&stc, &["b01"], &["b01"], &[])));
    }
}
