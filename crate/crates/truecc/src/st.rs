//! ST-configurations and ST-structures: validation, structural properties,
//! step/path/trace semantics, and the per-configuration relations of
//! concurrency, causality, conflict, and cc-equivalence.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::event::{Event, EventId, EventSet, Label, MAX_EVENTS};

/// A pair (S,T) of started and terminated events with T ⊆ S.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct StConfig {
    pub started: EventSet,
    pub terminated: EventSet,
}

impl StConfig {
    pub const ROOT: StConfig = StConfig { started: EventSet::EMPTY, terminated: EventSet::EMPTY };

    pub fn new(started: EventSet, terminated: EventSet) -> Self {
        debug_assert!(terminated.is_subset(started));
        StConfig { started, terminated }
    }

    /// |S| + |T|.
    pub fn dim(self) -> usize {
        self.started.len() + self.terminated.len()
    }

    /// Events started but not yet terminated.
    pub fn executing(self) -> EventSet {
        self.started.diff(self.terminated)
    }

    pub fn is_root(self) -> bool {
        self.started.is_empty()
    }

    /// Componentwise inclusion.
    pub fn is_subset(self, other: StConfig) -> bool {
        self.started.is_subset(other.started) && self.terminated.is_subset(other.terminated)
    }

    pub fn union(self, other: StConfig) -> StConfig {
        StConfig {
            started: self.started.union(other.started),
            terminated: self.terminated.union(other.terminated),
        }
    }

    pub fn inter(self, other: StConfig) -> StConfig {
        StConfig {
            started: self.started.inter(other.started),
            terminated: self.terminated.inter(other.terminated),
        }
    }

    pub fn is_diagonal(self) -> bool {
        self.started == self.terminated
    }
}

impl Ord for StConfig {
    /// Canonical order: dimension first, then the started and terminated
    /// sets as ascending index sequences. Witness selection and all
    /// deterministic enumerations use this order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim()
            .cmp(&other.dim())
            .then_with(|| self.started.lex_cmp(other.started))
            .then_with(|| self.terminated.lex_cmp(other.terminated))
    }
}

impl PartialOrd for StConfig {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for StConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?},{:?})", self.started, self.terminated)
    }
}

/// Which closure constraint was used to validate a structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValidationMode {
    /// (S,T) ∈ ST implies (S,S) ∈ ST.
    Strict,
    /// (S,T) ∈ ST implies some (S',S') ∈ ST with S ⊆ S'.
    Weak,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StError {
    #[error("event `{0}` declared more than once")]
    DuplicateEvent(EventId),
    #[error("config refers to undeclared event `{0}`")]
    UndeclaredEvent(EventId),
    #[error("structure exceeds {MAX_EVENTS} events")]
    TooManyEvents,
    #[error("config {0} violates T ⊆ S")]
    ConstraintTnotSubsetS(String),
    #[error("closure violated: {0} present but its completion {1} is missing")]
    MissingClosure(String, String),
    #[error("config {0} is not part of the structure")]
    ConfigNotInStructure(String),
    #[error("target config {0} is not part of the structure")]
    TargetNotInStructure(String),
    #[error("path is not rooted")]
    NotRooted,
    #[error("empty label")]
    EmptyLabel,
}

/// An ST-structure: declared events, a set of ST-configurations closed
/// under the validation-mode constraint, and a total labelling.
#[derive(Clone, PartialEq, Eq)]
pub struct StStructure {
    events: Vec<Event>,
    configs: BTreeSet<StConfig>,
    mode: ValidationMode,
}

impl fmt::Debug for StStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StStructure{{events:{:?}, configs:[", self.events)?;
        for (k, c) in self.configs.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", self.show_config(*c))?;
        }
        write!(f, "]}}")
    }
}

/// Kind of a single step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum StepKind {
    /// Adds one event to S.
    Start,
    /// Adds one event to T.
    Terminate,
}

/// A single s- or t-step between two configurations of a structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub source: StConfig,
    pub target: StConfig,
    pub kind: StepKind,
    pub event: EventId,
    pub label: Label,
}

/// A contiguous sequence of steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    pub start: StConfig,
    pub steps: Vec<Step>,
}

impl Path {
    pub fn end(&self) -> StConfig {
        self.steps.last().map_or(self.start, |s| s.target)
    }

    pub fn is_rooted(&self) -> bool {
        self.start == StConfig::ROOT
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// One entry of an ST-trace: a label with its annotation. `0` marks an
/// s-step; a positive `n` marks a t-step whose event was started by the
/// n-th step of the path (1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub label: Label,
    pub annotation: usize,
}

pub type StTrace = Vec<TraceEntry>;

/// Violation of a bounded-union or bounded-intersection closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureWitness {
    pub first: StConfig,
    pub second: StConfig,
    pub bound: StConfig,
    pub missing: StConfig,
}

/// Violation of one of the four adjacent-closure rules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyWitness {
    pub rule: u8,
    pub premise: Vec<StConfig>,
    pub missing: StConfig,
}

/// Violation of closure under single events.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingleEventWitness {
    pub config: StConfig,
    pub event: EventId,
    pub missing: StConfig,
}

/// Exhaustively computed structural properties, with a minimal witness
/// (under the canonical config order) for every flag that fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub mode: ValidationMode,
    pub rooted: bool,
    pub connected: bool,
    pub stranded: Option<StConfig>,
    pub closed_bounded_unions: bool,
    pub union_witness: Option<ClosureWitness>,
    pub closed_bounded_intersections: bool,
    pub intersection_witness: Option<ClosureWitness>,
    pub stable: bool,
    pub adjacent_closed: bool,
    pub adjacency_witness: Option<AdjacencyWitness>,
    pub closed_single_events: bool,
    pub single_event_witness: Option<SingleEventWitness>,
}

impl StStructure {
    /// Validates and canonicalizes a structure under the strict closure.
    pub fn new(events: Vec<Event>, configs: Vec<StConfig>) -> Result<Self, StError> {
        Self::with_mode(events, configs, ValidationMode::Strict)
    }

    pub fn with_mode(
        events: Vec<Event>,
        configs: Vec<StConfig>,
        mode: ValidationMode,
    ) -> Result<Self, StError> {
        if events.len() > MAX_EVENTS {
            return Err(StError::TooManyEvents);
        }
        let mut events = events;
        events.sort_by(|a, b| a.id.cmp(&b.id));
        for w in events.windows(2) {
            if w[0].id == w[1].id {
                return Err(StError::DuplicateEvent(w[0].id.clone()));
            }
        }
        for e in &events {
            if e.label.as_str().is_empty() {
                return Err(StError::EmptyLabel);
            }
        }
        let universe = EventSet::full(events.len());
        let set: BTreeSet<StConfig> = configs.into_iter().collect();
        let st = StStructure { events, configs: set, mode };
        for &c in &st.configs {
            if !c.started.is_subset(universe) {
                let stray = c.started.diff(universe).iter().next().unwrap();
                return Err(StError::UndeclaredEvent(EventId::new(format!("#{stray}"))));
            }
            if !c.terminated.is_subset(c.started) {
                return Err(StError::ConstraintTnotSubsetS(st.show_config(c)));
            }
            let ok = match mode {
                ValidationMode::Strict => {
                    st.configs.contains(&StConfig::new(c.started, c.started))
                }
                ValidationMode::Weak => st
                    .configs
                    .iter()
                    .any(|d| d.is_diagonal() && c.started.is_subset(d.started)),
            };
            if !ok {
                let completion = StConfig::new(c.started, c.started);
                return Err(StError::MissingClosure(
                    st.show_config(c),
                    st.show_config(completion),
                ));
            }
        }
        Ok(st)
    }

    /// Builds without the closure check; callers must immediately prune
    /// (e.g. through [`StStructure::reachable_part`]) before exposing it.
    pub(crate) fn new_unchecked(events: Vec<Event>, configs: Vec<StConfig>) -> Self {
        let mut events = events;
        events.sort_by(|a, b| a.id.cmp(&b.id));
        let universe = EventSet::full(events.len());
        let configs: BTreeSet<StConfig> = configs
            .into_iter()
            .inspect(|c| debug_assert!(c.started.is_subset(universe)))
            .collect();
        StStructure { events, configs, mode: ValidationMode::Strict }
    }

    /// Validates raw id-based input, the form used by the JSON documents.
    pub fn from_ids(
        events: Vec<Event>,
        raw_configs: &[(Vec<EventId>, Vec<EventId>)],
    ) -> Result<Self, StError> {
        Self::from_ids_with_mode(events, raw_configs, ValidationMode::Strict)
    }

    pub fn from_ids_with_mode(
        events: Vec<Event>,
        raw_configs: &[(Vec<EventId>, Vec<EventId>)],
        mode: ValidationMode,
    ) -> Result<Self, StError> {
        let mut sorted = events.clone();
        sorted.sort_by(|a, b| a.id.cmp(&b.id));
        let index = |id: &EventId| -> Result<usize, StError> {
            sorted
                .binary_search_by(|e| e.id.cmp(id))
                .map_err(|_| StError::UndeclaredEvent(id.clone()))
        };
        let mut configs = Vec::with_capacity(raw_configs.len());
        for (s_ids, t_ids) in raw_configs {
            let mut s = EventSet::EMPTY;
            for id in s_ids {
                s = s.insert(index(id)?);
            }
            let mut t = EventSet::EMPTY;
            for id in t_ids {
                t = t.insert(index(id)?);
            }
            if !t.is_subset(s) {
                let mut txt = String::from("({");
                txt.push_str(&s_ids.iter().map(|i| i.0.clone()).collect::<Vec<_>>().join(","));
                txt.push_str("},{");
                txt.push_str(&t_ids.iter().map(|i| i.0.clone()).collect::<Vec<_>>().join(","));
                txt.push_str("})");
                return Err(StError::ConstraintTnotSubsetS(txt));
            }
            configs.push(StConfig { started: s, terminated: t });
        }
        Self::with_mode(sorted, configs, mode)
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn mode(&self) -> ValidationMode {
        self.mode
    }

    pub fn event_count(&self) -> usize {
        self.events.len()
    }

    /// Configurations in canonical order (dimension, then lexicographic).
    pub fn configs(&self) -> impl Iterator<Item = StConfig> + '_ {
        self.configs.iter().copied()
    }

    pub fn config_count(&self) -> usize {
        self.configs.len()
    }

    pub fn contains(&self, c: StConfig) -> bool {
        self.configs.contains(&c)
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn label_of(&self, event_index: usize) -> &Label {
        &self.events[event_index].label
    }

    pub fn event_id(&self, event_index: usize) -> &EventId {
        &self.events[event_index].id
    }

    pub fn event_index(&self, id: &EventId) -> Result<usize, StError> {
        self.events
            .binary_search_by(|e| e.id.cmp(id))
            .map_err(|_| StError::UndeclaredEvent(id.clone()))
    }

    pub fn set_of_ids(&self, ids: &[EventId]) -> Result<EventSet, StError> {
        let mut s = EventSet::EMPTY;
        for id in ids {
            s = s.insert(self.event_index(id)?);
        }
        Ok(s)
    }

    pub fn show_set(&self, s: EventSet) -> String {
        let names: Vec<&str> = s.iter().map(|i| self.events[i].id.as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn show_config(&self, c: StConfig) -> String {
        format!("({},{})", self.show_set(c.started), self.show_set(c.terminated))
    }

    pub fn is_rooted(&self) -> bool {
        self.configs.contains(&StConfig::ROOT)
    }

    /// Every non-empty configuration can lose one started or one
    /// terminated event and stay in the structure.
    pub fn is_connected(&self) -> Result<(), StConfig> {
        for &c in &self.configs {
            if c.dim() == 0 {
                continue;
            }
            let mut ok = false;
            for e in c.executing().iter() {
                if self.configs.contains(&StConfig::new(c.started.remove(e), c.terminated)) {
                    ok = true;
                    break;
                }
            }
            if !ok {
                for e in c.terminated.iter() {
                    if self.configs.contains(&StConfig::new(c.started, c.terminated.remove(e))) {
                        ok = true;
                        break;
                    }
                }
            }
            if !ok {
                return Err(c);
            }
        }
        Ok(())
    }

    fn closure_check(&self, unions: bool) -> Result<(), ClosureWitness> {
        let configs: Vec<StConfig> = self.configs.iter().copied().collect();
        for (i, &a) in configs.iter().enumerate() {
            for &b in &configs[i + 1..] {
                let u = a.union(b);
                if self.configs.contains(&u) && unions {
                    continue;
                }
                let bound = configs.iter().copied().find(|&d| u.is_subset(d));
                let Some(bound) = bound else { continue };
                let required = if unions { u } else { a.inter(b) };
                if !self.configs.contains(&required) {
                    return Err(ClosureWitness { first: a, second: b, bound, missing: required });
                }
            }
        }
        Ok(())
    }

    pub fn closed_under_bounded_unions(&self) -> Result<(), ClosureWitness> {
        self.closure_check(true)
    }

    pub fn closed_under_bounded_intersections(&self) -> Result<(), ClosureWitness> {
        self.closure_check(false)
    }

    /// Checks the four adjacent-closure rules; the witness names the rule
    /// and the premise triple, first violation in canonical order.
    pub fn is_adjacent_closed(&self) -> Result<(), AdjacencyWitness> {
        let n = self.events.len();
        for &c in &self.configs {
            let (s, t) = (c.started, c.terminated);
            for e in 0..n {
                if s.contains(e) {
                    continue;
                }
                let c1 = StConfig::new(s.insert(e), t);
                // Rule 1: (S,T),(S∪e,T),(S∪{e,e'},T) ⊢ (S∪e',T)
                if self.configs.contains(&c1) {
                    for e2 in 0..n {
                        if e2 == e || s.contains(e2) {
                            continue;
                        }
                        let c2 = StConfig::new(s.insert(e).insert(e2), t);
                        if self.configs.contains(&c2) {
                            let want = StConfig::new(s.insert(e2), t);
                            if !self.configs.contains(&want) {
                                return Err(AdjacencyWitness {
                                    rule: 1,
                                    premise: vec![c, c1, c2],
                                    missing: want,
                                });
                            }
                        }
                    }
                    // Rule 2: (S,T),(S∪e,T),(S∪e,T∪e') ⊢ (S,T∪e')
                    for e2 in 0..n {
                        if e2 == e || t.contains(e2) || !s.contains(e2) {
                            continue;
                        }
                        let c2 = StConfig::new(s.insert(e), t.insert(e2));
                        if self.configs.contains(&c2) {
                            let want = StConfig::new(s, t.insert(e2));
                            if !self.configs.contains(&want) {
                                return Err(AdjacencyWitness {
                                    rule: 2,
                                    premise: vec![c, c1, c2],
                                    missing: want,
                                });
                            }
                        }
                    }
                    // Rule 3: (S,T),(S∪e,T),(S,T∪e') ⊢ (S∪e,T∪e')
                    for e2 in 0..n {
                        if e2 == e || t.contains(e2) || !s.contains(e2) {
                            continue;
                        }
                        let c2 = StConfig::new(s, t.insert(e2));
                        if self.configs.contains(&c2) {
                            let want = StConfig::new(s.insert(e), t.insert(e2));
                            if !self.configs.contains(&want) {
                                return Err(AdjacencyWitness {
                                    rule: 3,
                                    premise: vec![c, c1, c2],
                                    missing: want,
                                });
                            }
                        }
                    }
                }
            }
            // Rule 4: (S,T),(S,T∪e),(S,T∪{e,e'}) ⊢ (S,T∪e')
            for e in 0..n {
                if t.contains(e) || !s.contains(e) {
                    continue;
                }
                let c1 = StConfig::new(s, t.insert(e));
                if !self.configs.contains(&c1) {
                    continue;
                }
                for e2 in 0..n {
                    if e2 == e || t.contains(e2) || !s.contains(e2) {
                        continue;
                    }
                    let c2 = StConfig::new(s, t.insert(e).insert(e2));
                    if self.configs.contains(&c2) {
                        let want = StConfig::new(s, t.insert(e2));
                        if !self.configs.contains(&want) {
                            return Err(AdjacencyWitness {
                                rule: 4,
                                premise: vec![c, c1, c2],
                                missing: want,
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// For every (S,T) and e ∈ S∖T, both (S,T∪e) and (S∖e,T) are present.
    /// The witness is the first violation per config, checking the
    /// termination completions before the removal completions.
    pub fn closed_under_single_events(&self) -> Result<(), SingleEventWitness> {
        for &c in &self.configs {
            for e in c.executing().iter() {
                let terminate = StConfig::new(c.started, c.terminated.insert(e));
                if !self.configs.contains(&terminate) {
                    return Err(SingleEventWitness {
                        config: c,
                        event: self.events[e].id.clone(),
                        missing: terminate,
                    });
                }
            }
            for e in c.executing().iter() {
                let unstart = StConfig::new(c.started.remove(e), c.terminated);
                if !self.configs.contains(&unstart) {
                    return Err(SingleEventWitness {
                        config: c,
                        event: self.events[e].id.clone(),
                        missing: unstart,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn property_report(&self) -> PropertyReport {
        let rooted = self.is_rooted();
        let connected = self.is_connected();
        let unions = self.closed_under_bounded_unions();
        let inters = self.closed_under_bounded_intersections();
        let adjacent = self.is_adjacent_closed();
        let single = self.closed_under_single_events();
        let stable = rooted && connected.is_ok() && unions.is_ok() && inters.is_ok();
        PropertyReport {
            mode: self.mode,
            rooted,
            connected: connected.is_ok(),
            stranded: connected.err(),
            closed_bounded_unions: unions.is_ok(),
            union_witness: unions.err(),
            closed_bounded_intersections: inters.is_ok(),
            intersection_witness: inters.err(),
            stable,
            adjacent_closed: adjacent.is_ok(),
            adjacency_witness: adjacent.err(),
            closed_single_events: single.is_ok(),
            single_event_witness: single.err(),
        }
    }

    fn step(&self, source: StConfig, target: StConfig, kind: StepKind, event: usize) -> Step {
        Step {
            source,
            target,
            kind,
            event: self.events[event].id.clone(),
            label: self.events[event].label.clone(),
        }
    }

    /// All single steps leaving `cfg`, s-steps before t-steps, events in
    /// id order within each kind.
    pub fn steps_from(&self, cfg: StConfig) -> Result<Vec<Step>, StError> {
        if !self.configs.contains(&cfg) {
            return Err(StError::ConfigNotInStructure(self.show_config(cfg)));
        }
        let mut out = Vec::new();
        for e in 0..self.events.len() {
            if !cfg.started.contains(e) {
                let target = StConfig::new(cfg.started.insert(e), cfg.terminated);
                if self.configs.contains(&target) {
                    out.push(self.step(cfg, target, StepKind::Start, e));
                }
            }
        }
        for e in cfg.executing().iter() {
            let target = StConfig::new(cfg.started, cfg.terminated.insert(e));
            if self.configs.contains(&target) {
                out.push(self.step(cfg, target, StepKind::Terminate, e));
            }
        }
        Ok(out)
    }

    /// Single steps entering `cfg`, in the same deterministic order.
    pub fn steps_into(&self, cfg: StConfig) -> Result<Vec<Step>, StError> {
        if !self.configs.contains(&cfg) {
            return Err(StError::ConfigNotInStructure(self.show_config(cfg)));
        }
        let mut out = Vec::new();
        for e in cfg.executing().iter() {
            let source = StConfig::new(cfg.started.remove(e), cfg.terminated);
            if self.configs.contains(&source) {
                out.push(self.step(source, cfg, StepKind::Start, e));
            }
        }
        for e in cfg.terminated.iter() {
            let source = StConfig::new(cfg.started, cfg.terminated.remove(e));
            if self.configs.contains(&source) {
                out.push(self.step(source, cfg, StepKind::Terminate, e));
            }
        }
        Ok(out)
    }

    /// All rooted paths ending in `target`, capped at `bound` paths, in
    /// lexicographic step order. Every returned path has length
    /// |S| + |T| of the target.
    pub fn enumerate_rooted_paths(
        &self,
        target: StConfig,
        bound: usize,
    ) -> Result<Vec<Path>, StError> {
        if !self.configs.contains(&target) {
            return Err(StError::TargetNotInStructure(self.show_config(target)));
        }
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        self.paths_dfs(StConfig::ROOT, target, &mut prefix, &mut out, bound);
        Ok(out)
    }

    fn paths_dfs(
        &self,
        from: StConfig,
        target: StConfig,
        prefix: &mut Vec<Step>,
        out: &mut Vec<Path>,
        bound: usize,
    ) {
        if out.len() >= bound {
            return;
        }
        if from == target {
            out.push(Path { start: StConfig::ROOT, steps: prefix.clone() });
            return;
        }
        if !self.configs.contains(&from) || !from.is_subset(target) {
            return;
        }
        for step in self.steps_from(from).expect("source present") {
            if !step.target.is_subset(target) {
                continue;
            }
            prefix.push(step.clone());
            self.paths_dfs(step.target, target, prefix, out, bound);
            prefix.pop();
            if out.len() >= bound {
                return;
            }
        }
    }

    /// The ST-trace of a rooted path. Each s-step emits label⁰; the
    /// t-step of event e emits labelⁿ where n is the 1-based position of
    /// the s-step that added e.
    pub fn st_trace(&self, path: &Path) -> Result<StTrace, StError> {
        if !path.is_rooted() {
            return Err(StError::NotRooted);
        }
        let mut trace = Vec::with_capacity(path.steps.len());
        for (pos, step) in path.steps.iter().enumerate() {
            match step.kind {
                StepKind::Start => {
                    trace.push(TraceEntry { label: step.label.clone(), annotation: 0 });
                }
                StepKind::Terminate => {
                    let started_at = path.steps[..pos]
                        .iter()
                        .position(|s| s.kind == StepKind::Start && s.event == step.event)
                        .expect("t-step terminates a started event")
                        + 1;
                    trace.push(TraceEntry { label: step.label.clone(), annotation: started_at });
                }
            }
        }
        Ok(trace)
    }

    /// Configurations of the structure included in `cfg`, canonical order.
    fn sub_configs(&self, cfg: StConfig) -> Vec<StConfig> {
        self.configs.iter().copied().filter(|c| c.is_subset(cfg)).collect()
    }

    /// Unordered pairs of distinct events concurrent at `cfg`: some
    /// sub-configuration has both executing.
    pub fn concurrency(&self, cfg: StConfig) -> Result<BTreeSet<(usize, usize)>, StError> {
        if !self.configs.contains(&cfg) {
            return Err(StError::ConfigNotInStructure(self.show_config(cfg)));
        }
        let mut pairs = BTreeSet::new();
        for sub in self.sub_configs(cfg) {
            let ex: Vec<usize> = sub.executing().iter().collect();
            for (i, &a) in ex.iter().enumerate() {
                for &b in &ex[i + 1..] {
                    pairs.insert((a, b));
                }
            }
        }
        Ok(pairs)
    }

    /// Ordered pairs (e,e') with e a cause of e' at `cfg`: in every
    /// sub-configuration, e' started implies e terminated.
    pub fn causality(&self, cfg: StConfig) -> Result<BTreeSet<(usize, usize)>, StError> {
        if !self.configs.contains(&cfg) {
            return Err(StError::ConfigNotInStructure(self.show_config(cfg)));
        }
        let subs = self.sub_configs(cfg);
        let mut pairs = BTreeSet::new();
        let members: Vec<usize> = cfg.started.iter().collect();
        for &e in &members {
            for &e2 in &members {
                if e == e2 {
                    continue;
                }
                let causal = subs
                    .iter()
                    .all(|sub| !sub.started.contains(e2) || sub.terminated.contains(e));
                if causal {
                    pairs.insert((e, e2));
                }
            }
        }
        Ok(pairs)
    }

    /// Global conflict: no configuration starts the whole set.
    pub fn in_conflict(&self, events: EventSet) -> Result<bool, StError> {
        if !events.is_subset(EventSet::full(self.events.len())) {
            let stray = events.diff(EventSet::full(self.events.len())).iter().next().unwrap();
            return Err(StError::UndeclaredEvent(EventId::new(format!("#{stray}"))));
        }
        Ok(!self.configs.iter().any(|c| events.is_subset(c.started)))
    }

    /// Largest valid substructure of reachable configurations: keeps the
    /// configurations with a rooted path, iterating with the closure
    /// constraint until a fixed point.
    pub fn reachable_part(&self) -> StStructure {
        let mut kept: BTreeSet<StConfig> = self.configs.clone();
        loop {
            // Reachability over the current set.
            let mut reach = BTreeSet::new();
            if kept.contains(&StConfig::ROOT) {
                let mut stack = vec![StConfig::ROOT];
                reach.insert(StConfig::ROOT);
                while let Some(c) = stack.pop() {
                    for e in 0..self.events.len() {
                        if !c.started.contains(e) {
                            let t = StConfig::new(c.started.insert(e), c.terminated);
                            if kept.contains(&t) && reach.insert(t) {
                                stack.push(t);
                            }
                        }
                    }
                    for e in c.executing().iter() {
                        let t = StConfig::new(c.started, c.terminated.insert(e));
                        if kept.contains(&t) && reach.insert(t) {
                            stack.push(t);
                        }
                    }
                }
            }
            // Drop configurations whose diagonal completion fell away.
            let next: BTreeSet<StConfig> = reach
                .iter()
                .copied()
                .filter(|c| reach.contains(&StConfig::new(c.started, c.started)))
                .collect();
            if next == kept {
                break;
            }
            kept = next;
        }
        StStructure { events: self.events.clone(), configs: kept, mode: self.mode }
    }

    /// The causality relation of `cfg` restricted to its started events,
    /// as a pomset carrier (events, strict order, labels).
    pub fn pomset(&self, cfg: StConfig) -> Result<Pomset, StError> {
        let order = self.causality(cfg)?;
        Ok(Pomset {
            carrier: cfg.started,
            order,
            labels: cfg.started.iter().map(|e| self.events[e].label.clone()).collect(),
        })
    }
}

/// Pomset of one configuration, compared up to isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pomset {
    pub carrier: EventSet,
    pub order: BTreeSet<(usize, usize)>,
    pub labels: Vec<Label>,
}

/// cc-equivalence of two configurations (possibly in different
/// structures): a label-preserving order-isomorphism of the pomsets that
/// also carries the parallel set onto the parallel set.
pub fn cc_equivalent(
    st_a: &StStructure,
    cfg_a: StConfig,
    st_b: &StStructure,
    cfg_b: StConfig,
) -> Result<bool, StError> {
    let pom_a = st_a.pomset(cfg_a)?;
    let pom_b = st_b.pomset(cfg_b)?;
    let par_a = st_a.concurrency(cfg_a)?;
    let par_b = st_b.concurrency(cfg_b)?;
    if pom_a.carrier.len() != pom_b.carrier.len()
        || pom_a.order.len() != pom_b.order.len()
        || par_a.len() != par_b.len()
    {
        return Ok(false);
    }
    let ev_a: Vec<usize> = pom_a.carrier.iter().collect();
    let ev_b: Vec<usize> = pom_b.carrier.iter().collect();
    let mut assignment: Vec<Option<usize>> = vec![None; ev_a.len()];
    let mut used = vec![false; ev_b.len()];
    fn order_has(order: &BTreeSet<(usize, usize)>, a: usize, b: usize) -> bool {
        order.contains(&(a, b))
    }
    fn backtrack(
        k: usize,
        ev_a: &[usize],
        ev_b: &[usize],
        assignment: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        st_a: &StStructure,
        st_b: &StStructure,
        pom_a: &Pomset,
        pom_b: &Pomset,
        par_a: &BTreeSet<(usize, usize)>,
        par_b: &BTreeSet<(usize, usize)>,
    ) -> bool {
        if k == ev_a.len() {
            // Check the parallel set transfers exactly.
            let map = |e: usize| -> usize {
                let pos = ev_a.iter().position(|&x| x == e).unwrap();
                ev_b[assignment[pos].unwrap()]
            };
            let mapped: BTreeSet<(usize, usize)> = par_a
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = (map(a), map(b));
                    if x < y {
                        (x, y)
                    } else {
                        (y, x)
                    }
                })
                .collect();
            return &mapped == par_b;
        }
        let a = ev_a[k];
        for (j, &b) in ev_b.iter().enumerate() {
            if used[j] || st_a.label_of(a) != st_b.label_of(b) {
                continue;
            }
            // Order constraints against already-assigned events.
            let mut ok = true;
            for (k2, &a2) in ev_a.iter().enumerate().take(k) {
                let b2 = ev_b[assignment[k2].unwrap()];
                if order_has(&pom_a.order, a, a2) != order_has(&pom_b.order, b, b2)
                    || order_has(&pom_a.order, a2, a) != order_has(&pom_b.order, b2, b)
                {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            assignment[k] = Some(j);
            used[j] = true;
            if backtrack(k + 1, ev_a, ev_b, assignment, used, st_a, st_b, pom_a, pom_b, par_a, par_b)
            {
                return true;
            }
            assignment[k] = None;
            used[j] = false;
        }
        false
    }
    Ok(backtrack(
        0,
        &ev_a,
        &ev_b,
        &mut assignment,
        &mut used,
        st_a,
        st_b,
        &pom_a,
        &pom_b,
        &par_a,
        &par_b,
    ))
}

/// `a` cc-simulates `b`: every configuration of `b` has a cc-equivalent
/// configuration in `a`.
pub fn cc_simulates(a: &StStructure, b: &StStructure) -> bool {
    b.configs().all(|cb| a.configs().any(|ca| cc_equivalent(a, ca, b, cb).unwrap_or(false)))
}

/// Mutual cc-simulation.
pub fn cc_equivalent_structures(a: &StStructure, b: &StStructure) -> bool {
    cc_simulates(a, b) && cc_simulates(b, a)
}
