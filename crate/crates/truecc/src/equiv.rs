//! Isomorphism and (hereditary) history-preserving bisimulation on
//! ST-structures, plus the explicit step graph used as a test oracle.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::event::{EventId, EventSet};
use crate::st::{StConfig, StError, StStructure, Step, StepKind};

/// A bijection on event indices (a-event → b-event), restricted to the
/// started set of one configuration.
pub type EventBijection = Vec<(usize, usize)>;

/// One element of a history-preserving bisimulation: two configurations
/// and an isomorphism between them.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BisimTriple {
    pub left: StConfig,
    pub right: StConfig,
    pub iso: EventBijection,
}

/// Checks the morphism conditions for a partial event map between two
/// structures: configurations preserved, labels preserved where defined,
/// locally injective.
pub fn st_morphism_check(
    map: &[(usize, Option<usize>)],
    a: &StStructure,
    b: &StStructure,
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
        if out.len() != count {
            None
        } else {
            Some(out)
        }
    };
    for c in a.configs() {
        let (Some(s), Some(t)) = (image(c.started), image(c.terminated)) else {
            return false;
        };
        if !b.contains(StConfig::new(s, t)) {
            return false;
        }
    }
    for &(e, f) in map {
        if let Some(f) = f {
            if a.label_of(e) != b.label_of(f) {
                return false;
            }
        }
    }
    true
}

/// Searches for a label-preserving bijection on events carrying the
/// configuration set of `a` exactly onto that of `b`.
pub fn st_isomorphic(a: &StStructure, b: &StStructure) -> Option<BTreeMap<EventId, EventId>> {
    if a.event_count() != b.event_count() || a.config_count() != b.config_count() {
        return None;
    }
    let n = a.event_count();
    let mut label_pool_a: Vec<&str> = (0..n).map(|e| a.label_of(e).as_str()).collect();
    let mut label_pool_b: Vec<&str> = (0..n).map(|e| b.label_of(e).as_str()).collect();
    label_pool_a.sort();
    label_pool_b.sort();
    if label_pool_a != label_pool_b {
        return None;
    }
    let mut perm: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    fn apply(perm: &[Option<usize>], x: EventSet) -> EventSet {
        EventSet::from_indices(x.iter().map(|e| perm[e].unwrap()))
    }
    fn full_check(perm: &[Option<usize>], a: &StStructure, b: &StStructure) -> bool {
        a.configs().all(|c| {
            b.contains(StConfig::new(apply(perm, c.started), apply(perm, c.terminated)))
        })
    }
    fn backtrack(
        k: usize,
        a: &StStructure,
        b: &StStructure,
        perm: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
    ) -> bool {
        let n = a.event_count();
        if k == n {
            return full_check(perm, a, b);
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
            .map(|e| (a.event_id(e).clone(), b.event_id(perm[e].unwrap()).clone()))
            .collect(),
    )
}

/// Result of a bisimulation decision.
pub struct StBisimOutcome {
    pub bisimilar: bool,
    /// The largest bisimulation when the verdict is positive.
    pub relation: Vec<BisimTriple>,
    /// Shortest distinguishing play when the verdict is negative.
    pub distinguishing: Option<Vec<String>>,
}

/// History-preserving bisimilarity (forward clauses only).
pub fn st_h_bisimilar(a: &StStructure, b: &StStructure) -> Result<StBisimOutcome, StError> {
    decide_bisim(a, b, false)
}

/// Hereditary history-preserving bisimilarity: forward clauses plus the
/// backward clause on the left structure; the symmetric backward clause
/// is redundant and checked only as a debug assertion.
pub fn st_hh_bisimilar(a: &StStructure, b: &StStructure) -> Result<StBisimOutcome, StError> {
    decide_bisim(a, b, true)
}

fn iso_candidates(a: &StStructure, b: &StStructure, ca: StConfig, cb: StConfig) -> Vec<EventBijection> {
    if ca.started.len() != cb.started.len() || ca.terminated.len() != cb.terminated.len() {
        return Vec::new();
    }
    let ev_a: Vec<usize> = ca.started.iter().collect();
    let ev_b: Vec<usize> = cb.started.iter().collect();
    let mut out = Vec::new();
    let mut perm: Vec<Option<usize>> = vec![None; ev_a.len()];
    let mut used = vec![false; ev_b.len()];
    fn backtrack(
        k: usize,
        a: &StStructure,
        b: &StStructure,
        ca: StConfig,
        cb: StConfig,
        ev_a: &[usize],
        ev_b: &[usize],
        perm: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        out: &mut Vec<EventBijection>,
    ) {
        if k == ev_a.len() {
            out.push(ev_a.iter().enumerate().map(|(i, &e)| (e, ev_b[perm[i].unwrap()])).collect());
            return;
        }
        let e = ev_a[k];
        for (j, &f) in ev_b.iter().enumerate() {
            if used[j]
                || a.label_of(e) != b.label_of(f)
                || ca.terminated.contains(e) != cb.terminated.contains(f)
            {
                continue;
            }
            perm[k] = Some(j);
            used[j] = true;
            backtrack(k + 1, a, b, ca, cb, ev_a, ev_b, perm, used, out);
            perm[k] = None;
            used[j] = false;
        }
    }
    backtrack(0, a, b, ca, cb, &ev_a, &ev_b, &mut perm, &mut used, &mut out);
    out
}

fn decide_bisim(
    a: &StStructure,
    b: &StStructure,
    hereditary: bool,
) -> Result<StBisimOutcome, StError> {
    if !a.is_rooted() || !b.is_rooted() {
        return Err(StError::NotRooted);
    }
    // All candidate triples.
    let mut triples: Vec<BisimTriple> = Vec::new();
    for ca in a.configs() {
        for cb in b.configs() {
            for iso in iso_candidates(a, b, ca, cb) {
                triples.push(BisimTriple { left: ca, right: cb, iso });
            }
        }
    }
    let index: HashMap<&BisimTriple, usize> =
        triples.iter().enumerate().map(|(i, t)| (t, i)).collect();
    const ALIVE: usize = usize::MAX;
    let mut state = vec![ALIVE; triples.len()];

    let apply = |iso: &EventBijection, e: usize| iso.iter().find(|(x, _)| *x == e).map(|(_, y)| *y);
    let lookup = |left: StConfig, right: StConfig, iso: &EventBijection| -> Option<usize> {
        let t = BisimTriple { left, right, iso: iso.clone() };
        index.get(&t).copied()
    };

    // Probes one triple for a violated clause under an aliveness view
    // of the triple set; returns the attacking move and the defender's
    // candidate replies (possibly dead ones, for strategy replay).
    let probe = |t: &BisimTriple, alive_idx: &dyn Fn(usize) -> bool| -> Option<(String, Vec<usize>)> {
        let mark = |k: StepKind| if k == StepKind::Start { "+" } else { "-" };
        // Forward, left to right.
        for step in a.steps_from(t.left).expect("config present") {
            let e = a.event_index(&step.event).unwrap();
            let mut replies = Vec::new();
            match step.kind {
                StepKind::Terminate => {
                    let f = apply(&t.iso, e).expect("started event mapped");
                    let target = StConfig::new(t.right.started, t.right.terminated.insert(f));
                    if b.contains(target) {
                        replies.extend(lookup(step.target, target, &t.iso));
                    }
                }
                StepKind::Start => {
                    for f in 0..b.event_count() {
                        if t.right.started.contains(f) || b.label_of(f) != a.label_of(e) {
                            continue;
                        }
                        let target =
                            StConfig::new(t.right.started.insert(f), t.right.terminated);
                        if !b.contains(target) {
                            continue;
                        }
                        let mut iso2 = t.iso.clone();
                        iso2.push((e, f));
                        iso2.sort_unstable();
                        replies.extend(lookup(step.target, target, &iso2));
                    }
                }
            }
            if !replies.iter().copied().any(alive_idx) {
                return Some((format!("forward {}{}", step.label, mark(step.kind)), replies));
            }
        }
        // Forward, right to left.
        for step in b.steps_from(t.right).expect("config present") {
            let f = b.event_index(&step.event).unwrap();
            let mut replies = Vec::new();
            match step.kind {
                StepKind::Terminate => {
                    let e = t.iso.iter().find(|(_, y)| *y == f).map(|(x, _)| *x).unwrap();
                    let target = StConfig::new(t.left.started, t.left.terminated.insert(e));
                    if a.contains(target) {
                        replies.extend(lookup(target, step.target, &t.iso));
                    }
                }
                StepKind::Start => {
                    for e in 0..a.event_count() {
                        if t.left.started.contains(e) || a.label_of(e) != b.label_of(f) {
                            continue;
                        }
                        let target = StConfig::new(t.left.started.insert(e), t.left.terminated);
                        if !a.contains(target) {
                            continue;
                        }
                        let mut iso2 = t.iso.clone();
                        iso2.push((e, f));
                        iso2.sort_unstable();
                        replies.extend(lookup(target, step.target, &iso2));
                    }
                }
            }
            if !replies.iter().copied().any(alive_idx) {
                return Some((
                    format!("forward(right) {}{}", step.label, mark(step.kind)),
                    replies,
                ));
            }
        }
        if hereditary {
            // Backward on the left: the image predecessor must exist and
            // stay related under the restricted isomorphism.
            for step in a.steps_into(t.left).expect("config present") {
                let e = a.event_index(&step.event).unwrap();
                let f = apply(&t.iso, e).expect("started event mapped");
                let (pred_b, iso2): (StConfig, EventBijection) = match step.kind {
                    StepKind::Start => (
                        StConfig::new(t.right.started.remove(f), t.right.terminated),
                        t.iso.iter().copied().filter(|(x, _)| *x != e).collect(),
                    ),
                    StepKind::Terminate => (
                        StConfig::new(t.right.started, t.right.terminated.remove(f)),
                        t.iso.clone(),
                    ),
                };
                let mut replies = Vec::new();
                if b.contains(pred_b) {
                    replies.extend(lookup(step.source, pred_b, &iso2));
                }
                if !replies.iter().copied().any(alive_idx) {
                    return Some((
                        format!("backward {}{}", step.label, mark(step.kind)),
                        replies,
                    ));
                }
            }
        }
        None
    };

    // Level-synchronous greatest fixpoint: each round removes against
    // the previous round's survivors, so removal rounds measure the
    // attacker's winning depth exactly.
    let mut round = 0usize;
    loop {
        round += 1;
        let snapshot = state.clone();
        let mut removed = false;
        for i in 0..triples.len() {
            if state[i] != ALIVE {
                continue;
            }
            if probe(&triples[i], &|j| snapshot[j] == ALIVE).is_some() {
                state[i] = round;
                removed = true;
            }
        }
        if !removed {
            break;
        }
    }

    let root = BisimTriple { left: StConfig::ROOT, right: StConfig::ROOT, iso: vec![] };
    let bisimilar = index.get(&root).is_some_and(|&i| state[i] == ALIVE);

    if bisimilar {
        let relation: Vec<BisimTriple> = triples
            .iter()
            .zip(&state)
            .filter(|(_, &s)| s == ALIVE)
            .map(|(t, _)| t.clone())
            .collect();
        #[cfg(debug_assertions)]
        if hereditary {
            debug_assert!(backward_right_clause_holds(a, b, &relation));
        }
        Ok(StBisimOutcome { bisimilar: true, relation, distinguishing: None })
    } else {
        // Replay the attacker's optimal strategy: at a triple removed in
        // round r, some clause fails against the round-(r-1) survivors
        // and every defender reply died strictly earlier. Following the
        // longest-surviving reply yields a shortest unmatchable
        // step sequence.
        let mut seq = Vec::new();
        let mut cur = index[&root];
        loop {
            let r = state[cur];
            debug_assert_ne!(r, ALIVE);
            let stage = |j: usize| state[j] == ALIVE || state[j] >= r;
            let Some((desc, replies)) = probe(&triples[cur], &stage) else {
                break;
            };
            seq.push(format!(
                "at {} ~ {}: {}",
                a.show_config(triples[cur].left),
                b.show_config(triples[cur].right),
                desc
            ));
            match replies.into_iter().max_by_key(|&j| state[j]) {
                Some(next) if state[next] != ALIVE => cur = next,
                _ => break,
            }
        }
        Ok(StBisimOutcome { bisimilar: false, relation: Vec::new(), distinguishing: Some(seq) })
    }
}

/// The symmetric hereditary clause, redundant with the enforced one;
/// verified on results in debug builds.
#[cfg(debug_assertions)]
fn backward_right_clause_holds(a: &StStructure, b: &StStructure, relation: &[BisimTriple]) -> bool {
    let set: BTreeSet<&BisimTriple> = relation.iter().collect();
    relation.iter().all(|t| {
        b.steps_into(t.right).expect("config present").into_iter().all(|step| {
            let f = b.event_index(&step.event).unwrap();
            let e = t.iso.iter().find(|(_, y)| *y == f).map(|(x, _)| *x).unwrap();
            let (pred_a, iso2): (StConfig, EventBijection) = match step.kind {
                StepKind::Start => (
                    StConfig::new(t.left.started.remove(e), t.left.terminated),
                    t.iso.iter().copied().filter(|(x, _)| *x != e).collect(),
                ),
                StepKind::Terminate => {
                    (StConfig::new(t.left.started, t.left.terminated.remove(e)), t.iso.clone())
                }
            };
            a.contains(pred_a)
                && set.contains(&BisimTriple { left: pred_a, right: step.source, iso: iso2 })
        })
    })
}

/// The explicit labelled transition graph over the configurations of a
/// structure: nodes in canonical order, edges in deterministic order.
pub struct StepGraph {
    pub nodes: Vec<StConfig>,
    pub edges: Vec<(usize, Step, usize)>,
}

pub fn oracle_step_graph(st: &StStructure) -> StepGraph {
    let nodes: Vec<StConfig> = st.configs().collect();
    let pos: BTreeMap<StConfig, usize> =
        nodes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut edges = Vec::new();
    for (i, &c) in nodes.iter().enumerate() {
        for step in st.steps_from(c).expect("config present") {
            let j = pos[&step.target];
            edges.push((i, step, j));
        }
    }
    StepGraph { nodes, edges }
}


#[cfg(test)]
mod distinguishing_tests {
    use super::*;
    use crate::fixtures::*;

    #[test]
    fn shortest_play_for_filled_vs_empty_square() {
        let out = st_hh_bisimilar(&filled_square(), &empty_square()).unwrap();
        assert!(!out.bisimilar);
        let seq = out.distinguishing.unwrap();
        // Start one event, then the second start is unmatchable.
        assert_eq!(seq.len(), 2, "{seq:?}");
        assert!(seq[1].contains("forward"));
    }

    #[test]
    fn plays_end_in_a_genuinely_unmatchable_move() {
        let out = st_hh_bisimilar(&chain_ab(), &choice_ab()).unwrap();
        assert!(!out.bisimilar);
        assert!(!out.distinguishing.unwrap().is_empty());
    }
}
