//! Configuration structures and inpure event structures, their
//! asynchronous-step semantics, and the translations between them and
//! ST-structures.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::event::{Event, EventId, EventSet, MAX_EVENTS};
use crate::st::{StConfig, StError, StStructure};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelatedError {
    #[error("event `{0}` declared more than once")]
    DuplicateEvent(EventId),
    #[error("undeclared event `{0}`")]
    UndeclaredEvent(EventId),
    #[error("structure exceeds {MAX_EVENTS} events")]
    TooManyEvents,
    #[error("input is not stable: {0}")]
    NotStableInput(String),
    #[error("precondition violated: input is not {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    St(#[from] StError),
}

/// A set of configurations over a set of labelled events.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigStructure {
    events: Vec<Event>,
    configs: BTreeSet<EventSet>,
}

/// An asynchronous step between two configurations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AsyncStep {
    pub from: EventSet,
    pub to: EventSet,
}

impl ConfigStructure {
    pub fn new(events: Vec<Event>, configs: Vec<EventSet>) -> Result<Self, RelatedError> {
        if events.len() > MAX_EVENTS {
            return Err(RelatedError::TooManyEvents);
        }
        let mut events = events;
        events.sort_by(|a, b| a.id.cmp(&b.id));
        for w in events.windows(2) {
            if w[0].id == w[1].id {
                return Err(RelatedError::DuplicateEvent(w[0].id.clone()));
            }
        }
        let universe = EventSet::full(events.len());
        for c in &configs {
            if !c.is_subset(universe) {
                let stray = c.diff(universe).iter().next().unwrap();
                return Err(RelatedError::UndeclaredEvent(EventId::new(format!("#{stray}"))));
            }
        }
        Ok(ConfigStructure { events, configs: configs.into_iter().collect() })
    }

    pub fn from_ids(events: Vec<Event>, raw: &[Vec<EventId>]) -> Result<Self, RelatedError> {
        let mut sorted = events;
        sorted.sort_by(|a, b| a.id.cmp(&b.id));
        let mut configs = Vec::new();
        for ids in raw {
            let mut m = EventSet::EMPTY;
            for id in ids {
                let i = sorted
                    .binary_search_by(|e| e.id.cmp(id))
                    .map_err(|_| RelatedError::UndeclaredEvent(id.clone()))?;
                m = m.insert(i);
            }
            configs.push(m);
        }
        Self::new(sorted, configs)
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn configs(&self) -> impl Iterator<Item = EventSet> + '_ {
        self.configs.iter().copied()
    }

    pub fn config_count(&self) -> usize {
        self.configs.len()
    }

    pub fn contains(&self, c: EventSet) -> bool {
        self.configs.contains(&c)
    }

    /// All asynchronous steps X → Y: X ⊆ Y and every Z between them is a
    /// configuration. Reflexive steps included.
    pub fn async_steps(&self) -> Vec<AsyncStep> {
        let mut out = Vec::new();
        for &x in &self.configs {
            for &y in &self.configs {
                if !x.is_subset(y) {
                    continue;
                }
                let between_ok = y.diff(x).subsets().all(|z| self.configs.contains(&x.union(z)));
                if between_ok {
                    out.push(AsyncStep { from: x, to: y });
                }
            }
        }
        out.sort();
        out
    }

    pub fn is_rooted(&self) -> bool {
        self.configs.contains(&EventSet::EMPTY)
    }

    pub fn is_connected(&self) -> bool {
        self.configs.iter().all(|&c| {
            c.is_empty() || c.iter().any(|e| self.configs.contains(&c.remove(e)))
        })
    }

    pub fn closed_under_bounded_unions(&self) -> bool {
        self.bounded_closure(true)
    }

    pub fn closed_under_bounded_intersections(&self) -> bool {
        self.bounded_closure(false)
    }

    fn bounded_closure(&self, unions: bool) -> bool {
        for &a in &self.configs {
            for &b in &self.configs {
                let u = a.union(b);
                if self.configs.iter().any(|&d| u.is_subset(d)) {
                    let need = if unions { u } else { a.inter(b) };
                    if !self.configs.contains(&need) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_stable(&self) -> bool {
        self.is_rooted()
            && self.is_connected()
            && self.closed_under_bounded_unions()
            && self.closed_under_bounded_intersections()
    }
}

/// The corner embedding: one diagonal ST-configuration per configuration.
pub fn config_into_st(c: &ConfigStructure) -> StStructure {
    let configs = c.configs().map(|x| StConfig::new(x, x)).collect();
    StStructure::new(c.events().to_vec(), configs).expect("corners satisfy the closure")
}

/// The filled-in translation: corners plus one (Y,X) per asynchronous
/// step X → Y.
pub fn config_into_st_filled(c: &ConfigStructure) -> StStructure {
    let mut configs: Vec<StConfig> = c.configs().map(|x| StConfig::new(x, x)).collect();
    for step in c.async_steps() {
        configs.push(StConfig::new(step.to, step.from));
    }
    StStructure::new(c.events().to_vec(), configs).expect("corners satisfy the closure")
}

/// Keeps the diagonal ST-configurations only.
pub fn st_into_config(st: &StStructure) -> ConfigStructure {
    let configs: Vec<EventSet> =
        st.configs().filter(|c| c.is_diagonal()).map(|c| c.started).collect();
    ConfigStructure::new(st.events().to_vec(), configs).expect("events already valid")
}

/// The stable correspondence: corners, single-event intermediates, then
/// closure under bounded unions and intersections. Input must be stable.
pub fn config_into_st_stable(c: &ConfigStructure) -> Result<StStructure, RelatedError> {
    if !c.is_stable() {
        return Err(RelatedError::NotStableInput(
            "configuration structure must be rooted, connected, and closed under bounded unions and intersections".into(),
        ));
    }
    let mut set: BTreeSet<StConfig> = c.configs().map(|x| StConfig::new(x, x)).collect();
    for &x in c.configs().collect::<Vec<_>>().iter() {
        for e in x.iter() {
            let smaller = x.remove(e);
            if c.contains(smaller) {
                set.insert(StConfig::new(x, smaller));
            }
        }
    }
    // Close under bounded unions and intersections.
    loop {
        let snapshot: Vec<StConfig> = set.iter().copied().collect();
        let mut grew = false;
        for (i, &a) in snapshot.iter().enumerate() {
            for &b in &snapshot[i + 1..] {
                let u = a.union(b);
                if snapshot.iter().any(|&d| u.is_subset(d)) {
                    grew |= set.insert(u);
                    grew |= set.insert(a.inter(b));
                }
            }
        }
        if !grew {
            break;
        }
    }
    Ok(StStructure::new(c.events().to_vec(), set.into_iter().collect())?)
}

/// An event structure with an arbitrary enabling relation Z ⊢ Y.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InpureEventStructure {
    events: Vec<Event>,
    enabling: BTreeSet<(EventSet, EventSet)>,
}

impl InpureEventStructure {
    pub fn new(
        events: Vec<Event>,
        enabling: Vec<(EventSet, EventSet)>,
    ) -> Result<Self, RelatedError> {
        if events.len() > MAX_EVENTS {
            return Err(RelatedError::TooManyEvents);
        }
        let mut events = events;
        events.sort_by(|a, b| a.id.cmp(&b.id));
        for w in events.windows(2) {
            if w[0].id == w[1].id {
                return Err(RelatedError::DuplicateEvent(w[0].id.clone()));
            }
        }
        let universe = EventSet::full(events.len());
        for (z, y) in &enabling {
            for part in [z, y] {
                if !part.is_subset(universe) {
                    let stray = part.diff(universe).iter().next().unwrap();
                    return Err(RelatedError::UndeclaredEvent(EventId::new(format!("#{stray}"))));
                }
            }
        }
        Ok(InpureEventStructure { events, enabling: enabling.into_iter().collect() })
    }

    pub fn from_ids(
        events: Vec<Event>,
        raw: &[(Vec<EventId>, Vec<EventId>)],
    ) -> Result<Self, RelatedError> {
        let mut sorted = events;
        sorted.sort_by(|a, b| a.id.cmp(&b.id));
        let index = |id: &EventId| -> Result<usize, RelatedError> {
            sorted
                .binary_search_by(|e| e.id.cmp(id))
                .map_err(|_| RelatedError::UndeclaredEvent(id.clone()))
        };
        let mut enabling = Vec::new();
        for (z_ids, y_ids) in raw {
            let mut z = EventSet::EMPTY;
            for id in z_ids {
                z = z.insert(index(id)?);
            }
            let mut y = EventSet::EMPTY;
            for id in y_ids {
                y = y.insert(index(id)?);
            }
            enabling.push((z, y));
        }
        Self::new(sorted, enabling)
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn enabling(&self) -> impl Iterator<Item = (EventSet, EventSet)> + '_ {
        self.enabling.iter().copied()
    }

    pub fn enables(&self, z: EventSet, y: EventSet) -> bool {
        self.enabling.contains(&(z, y))
    }

    /// The left-closed configurations L(E): sets X with every subset
    /// enabled from within X.
    pub fn left_closed_configs(&self) -> BTreeSet<EventSet> {
        let universe = EventSet::full(self.events.len());
        universe
            .subsets()
            .filter(|&x| {
                x.subsets()
                    .all(|y| x.subsets().any(|z| self.enables(z, y)))
            })
            .collect()
    }

    /// Asynchronous steps between left-closed configurations: X ⊆ Y and
    /// every subset of Y is enabled from within X.
    pub fn async_steps(&self) -> Vec<AsyncStep> {
        let lc = self.left_closed_configs();
        let mut out = Vec::new();
        for &x in &lc {
            for &y in &lc {
                if !x.is_subset(y) {
                    continue;
                }
                let ok = y.subsets().all(|z| x.subsets().any(|w| self.enables(w, z)));
                if ok {
                    out.push(AsyncStep { from: x, to: y });
                }
            }
        }
        out.sort();
        out
    }

    pub fn is_rooted(&self) -> bool {
        self.left_closed_configs().contains(&EventSet::EMPTY)
    }

    /// Every left-closed configuration reachable from ∅ through
    /// asynchronous steps.
    pub fn is_connected(&self) -> bool {
        let lc = self.left_closed_configs();
        if lc.is_empty() {
            return true;
        }
        if !lc.contains(&EventSet::EMPTY) {
            return false;
        }
        let steps = self.async_steps();
        let mut reach: BTreeSet<EventSet> = BTreeSet::new();
        reach.insert(EventSet::EMPTY);
        loop {
            let mut grew = false;
            for s in &steps {
                if reach.contains(&s.from) && reach.insert(s.to) {
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
        reach == lc
    }
}

/// Corners from L(E) plus one (Y,X) per asynchronous step.
pub fn event_into_st(e: &InpureEventStructure) -> StStructure {
    let mut configs: Vec<StConfig> =
        e.left_closed_configs().into_iter().map(|x| StConfig::new(x, x)).collect();
    for step in e.async_steps() {
        configs.push(StConfig::new(step.to, step.from));
    }
    StStructure::new(e.events().to_vec(), configs).expect("corners satisfy the closure")
}

/// Translates a rooted, connected, adjacent-closed ST-structure into an
/// inpure event structure: for every configuration (T∪X, T) the enabling
/// gains T ⊢ X′∪Y for all X′ ⊆ X and Y ⊆ T.
pub fn st_into_event(st: &StStructure) -> Result<InpureEventStructure, RelatedError> {
    if !st.is_rooted() {
        return Err(RelatedError::PreconditionViolated("rooted".into()));
    }
    if st.is_connected().is_err() {
        return Err(RelatedError::PreconditionViolated("connected".into()));
    }
    if st.is_adjacent_closed().is_err() {
        return Err(RelatedError::PreconditionViolated("adjacent-closed".into()));
    }
    let mut enabling = BTreeSet::new();
    for c in st.configs() {
        let base = c.terminated;
        let x = c.executing();
        for xp in x.subsets() {
            for y in base.subsets() {
                enabling.insert((base, xp.union(y)));
            }
        }
    }
    InpureEventStructure::new(st.events().to_vec(), enabling.into_iter().collect())
}

/// Checks the configuration-structure morphism conditions for a partial
/// event map given as index pairs (a-event → b-event).
pub fn config_morphism_check(
    map: &[(usize, Option<usize>)],
    a: &ConfigStructure,
    b: &ConfigStructure,
) -> bool {
    let image = |x: EventSet| -> Option<EventSet> {
        let mut out = EventSet::EMPTY;
        let mut count = 0usize;
        for e in x.iter() {
            if let Some(Some(f)) = map.iter().find(|(k, _)| *k == e).map(|(_, v)| *v) {
                out = out.insert(f);
                count += 1;
            }
        }
        // Local injectivity: defined members map to distinct events.
        if out.len() != count {
            None
        } else {
            Some(out)
        }
    };
    for x in a.configs() {
        match image(x) {
            None => return false,
            Some(y) => {
                if !b.contains(y) {
                    return false;
                }
            }
        }
    }
    // Labels preserved where defined.
    for &(e, f) in map {
        if let Some(f) = f {
            if a.events()[e].label != b.events()[f].label {
                return false;
            }
        }
    }
    true
}
