//! Action refinement of ST-structures by label-indexed replacement
//! structures, with preservation checks.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::event::{Event, EventSet, Label};
use crate::st::{StConfig, StError, StStructure};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RefineError {
    #[error("refinement image for label `{0}` has no non-empty configuration")]
    EmptyRefinementImage(Label),
    #[error("refinement would enumerate more than {0} choice tuples")]
    ChoiceBudgetExceeded(u64),
    #[error("refined event id `{0}` collides; event ids may not contain the separator")]
    AmbiguousEventId(String),
    #[error("refined structure violates the closure: {0}")]
    RefinedNotClosed(String),
    #[error(transparent)]
    St(#[from] StError),
}

/// Separator joining an original event id with a refining event id.
pub const REFINED_SEPARATOR: char = '.';

/// A total map from labels to replacement structures. Labels without an
/// explicit image refine by the singleton structure with the same label.
#[derive(Clone, Debug, Default)]
pub struct RefinementFunction {
    images: BTreeMap<Label, StStructure>,
}

impl RefinementFunction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, label: impl Into<String>, image: StStructure) -> Self {
        self.images.insert(Label::new(label), image);
        self
    }

    pub fn insert(&mut self, label: Label, image: StStructure) {
        self.images.insert(label, image);
    }

    pub fn explicit(&self) -> impl Iterator<Item = (&Label, &StStructure)> {
        self.images.iter()
    }

    /// The image of a label; unrefined labels get the singleton
    /// same-label structure over one fresh event named by the label.
    pub fn image(&self, label: &Label) -> StStructure {
        match self.images.get(label) {
            Some(st) => st.clone(),
            None => singleton_structure(label),
        }
    }
}

/// The one-event structure carrying `label`.
pub fn singleton_structure(label: &Label) -> StStructure {
    let e = EventSet::singleton(0);
    StStructure::new(
        vec![Event::new(label.as_str(), label.as_str())],
        vec![StConfig::ROOT, StConfig::new(e, EventSet::EMPTY), StConfig::new(e, e)],
    )
    .expect("singleton is valid")
}

/// Maximal configurations of a structure under componentwise inclusion.
fn maximal_configs(st: &StStructure) -> Vec<StConfig> {
    st.configs()
        .filter(|&c| !st.configs().any(|d| c != d && c.is_subset(d)))
        .collect()
}

struct ImageParts {
    /// Choices for a started-but-unterminated original event: non-empty,
    /// non-maximal configurations.
    executing_choices: Vec<StConfig>,
    /// Choices for a terminated original event: maximal configurations.
    terminated_choices: Vec<StConfig>,
}

/// Refines `st` by `r`: each configuration contributes one refined
/// configuration per choice of per-event replacement configurations.
pub fn refine(st: &StStructure, r: &RefinementFunction, budget: u64) -> Result<StStructure, RefineError> {
    // Per original event: the image structure and its admissible choices.
    let mut parts: Vec<ImageParts> = Vec::with_capacity(st.event_count());
    let mut new_events: Vec<Event> = Vec::new();
    let mut base_of: Vec<usize> = Vec::with_capacity(st.event_count());
    for e in 0..st.event_count() {
        let image = r.image(st.label_of(e));
        if !image.configs().any(|c| !c.started.is_empty()) {
            return Err(RefineError::EmptyRefinementImage(st.label_of(e).clone()));
        }
        let maxima = maximal_configs(&image);
        debug_assert!(
            maxima.iter().all(|m| m.is_diagonal()),
            "maximal configurations have S = T under the closure"
        );
        let executing_choices: Vec<StConfig> = image
            .configs()
            .filter(|c| !c.started.is_empty() && !maxima.contains(c))
            .collect();
        let terminated_choices = maxima;
        base_of.push(new_events.len());
        for f in 0..image.event_count() {
            let id = format!(
                "{}{}{}",
                st.event_id(e).as_str(),
                REFINED_SEPARATOR,
                image.event_id(f).as_str()
            );
            new_events.push(Event::new(id, image.label_of(f).as_str()));
        }
        parts.push(ImageParts { executing_choices, terminated_choices });
    }
    {
        let mut ids: Vec<&str> = new_events.iter().map(|e| e.id.as_str()).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(RefineError::AmbiguousEventId(w[0].to_string()));
        }
    }
    // The new event table is sorted by id inside StStructure::new; map
    // (original, refining) pairs onto final indices once.
    let mut sorted: Vec<(String, usize)> = new_events
        .iter()
        .enumerate()
        .map(|(i, e)| (e.id.as_str().to_string(), i))
        .collect();
    sorted.sort();
    let mut final_index = vec![0usize; new_events.len()];
    for (pos, (_, i)) in sorted.iter().enumerate() {
        final_index[*i] = pos;
    }
    let pair_index =
        |e: usize, f: usize| -> usize { final_index[base_of[e] + f] };

    let mut configs: Vec<StConfig> = Vec::new();
    let mut spent: u64 = 0;
    for c in st.configs() {
        let executing: Vec<usize> = c.executing().iter().collect();
        let terminated: Vec<usize> = c.terminated.iter().collect();
        // Cartesian product over the per-event choices.
        let mut stack: Vec<(usize, StConfig)> = vec![(0, StConfig::ROOT)];
        let slots: Vec<(usize, bool)> = executing
            .iter()
            .map(|&e| (e, true))
            .chain(terminated.iter().map(|&f| (f, false)))
            .collect();
        while let Some((slot, acc)) = stack.pop() {
            if slot == slots.len() {
                spent += 1;
                if spent > budget {
                    return Err(RefineError::ChoiceBudgetExceeded(budget));
                }
                configs.push(acc);
                continue;
            }
            let (orig, is_exec) = slots[slot];
            let choices = if is_exec {
                &parts[orig].executing_choices
            } else {
                &parts[orig].terminated_choices
            };
            for choice in choices {
                let started = acc.started.union(EventSet::from_indices(
                    choice.started.iter().map(|f| pair_index(orig, f)),
                ));
                let terminated = acc.terminated.union(EventSet::from_indices(
                    choice.terminated.iter().map(|f| pair_index(orig, f)),
                ));
                stack.push((slot + 1, StConfig { started, terminated }));
            }
        }
    }
    StStructure::new(new_events, configs)
        .map_err(|e| RefineError::RefinedNotClosed(e.to_string()))
}

/// One row of a preservation report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreservationRow {
    pub property: &'static str,
    /// Whether the hypothesis of the implication is met by the inputs.
    pub hypothesis_met: bool,
    /// Whether the refined structure has the property; only meaningful
    /// when the hypothesis is met.
    pub holds: bool,
}

/// Verifies each preservation implication on a concrete instance.
pub fn check_preservation(
    st: &StStructure,
    r: &RefinementFunction,
    budget: u64,
) -> Result<Vec<PreservationRow>, RefineError> {
    let refined = refine(st, r, budget)?;
    let before = st.property_report();
    let after = refined.property_report();
    let used_labels: Vec<Label> =
        (0..st.event_count()).map(|e| st.label_of(e).clone()).collect();
    let images: Vec<StStructure> = used_labels.iter().map(|l| r.image(l)).collect();
    let image_reports: Vec<_> = images.iter().map(|i| i.property_report()).collect();
    Ok(vec![
        PreservationRow {
            property: "rooted",
            hypothesis_met: before.rooted,
            holds: after.rooted,
        },
        PreservationRow {
            property: "connected",
            hypothesis_met: before.connected && image_reports.iter().all(|r| r.connected),
            holds: after.connected,
        },
        PreservationRow {
            property: "adjacent-closed",
            hypothesis_met: before.adjacent_closed
                && image_reports.iter().all(|r| r.adjacent_closed),
            holds: after.adjacent_closed,
        },
        PreservationRow {
            property: "closed-bounded-unions",
            hypothesis_met: before.closed_bounded_unions
                && image_reports.iter().all(|r| r.closed_bounded_unions),
            holds: after.closed_bounded_unions,
        },
        PreservationRow {
            property: "closed-bounded-intersections",
            hypothesis_met: before.closed_bounded_intersections
                && image_reports.iter().all(|r| r.closed_bounded_intersections),
            holds: after.closed_bounded_intersections,
        },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::st_isomorphic;
    use crate::fixtures::*;

    const BUDGET: u64 = 1 << 20;

    #[test]
    fn singleton_refinement_is_isomorphic() {
        for st in [filled_square(), empty_square(), chain_ab(), choice_ab(), asym_conflict_2ev()] {
            let refined = refine(&st, &RefinementFunction::new(), BUDGET).unwrap();
            assert!(st_isomorphic(&st, &refined).is_some(), "failed on {st:?}");
        }
    }

    #[test]
    fn refine_chain_by_chain() {
        // Replace a in a;b by c;d: the result is the chain c;d;b.
        let cd = st_chars(&["c", "d"], &[("", ""), ("c", ""), ("c", "c"), ("cd", "c"), ("cd", "cd")])
            .unwrap();
        let r = RefinementFunction::new().with("a", cd);
        let refined = refine(&chain_ab(), &r, BUDGET).unwrap();
        let expected = st_chars(
            &["b", "c", "d"],
            &[
                ("", ""),
                ("c", ""),
                ("c", "c"),
                ("cd", "c"),
                ("cd", "cd"),
                ("bcd", "cd"),
                ("bcd", "bcd"),
            ],
        )
        .unwrap();
        assert!(st_isomorphic(&refined, &expected).is_some());
    }

    #[test]
    fn refine_event_by_filled_square() {
        let single = st_chars(&["a"], &[("", ""), ("a", ""), ("a", "a")]).unwrap();
        let square = st_chars(
            &["c", "d"],
            &[
                ("", ""),
                ("c", ""),
                ("d", ""),
                ("c", "c"),
                ("d", "d"),
                ("cd", ""),
                ("cd", "c"),
                ("cd", "d"),
                ("cd", "cd"),
            ],
        )
        .unwrap();
        let r = RefinementFunction::new().with("a", square.clone());
        let refined = refine(&single, &r, BUDGET).unwrap();
        assert_eq!(refined.config_count(), 9);
        assert_eq!(refined.event_count(), 2);
        assert!(st_isomorphic(&refined, &square).is_some());
    }

    #[test]
    fn empty_image_rejected() {
        let empty_image = StStructure::new(vec![], vec![StConfig::ROOT]).unwrap();
        let r = RefinementFunction::new().with("a", empty_image);
        let err = refine(&chain_ab(), &r, BUDGET).unwrap_err();
        assert!(matches!(err, RefineError::EmptyRefinementImage(_)));
    }

    #[test]
    fn budget_enforced() {
        let r = RefinementFunction::new();
        let err = refine(&filled_square(), &r, 3).unwrap_err();
        assert!(matches!(err, RefineError::ChoiceBudgetExceeded(3)));
    }

    #[test]
    fn preservation_rows_on_filled_square() {
        let rows = check_preservation(&filled_square(), &RefinementFunction::new(), BUDGET).unwrap();
        for row in rows {
            assert!(row.hypothesis_met, "{} hypothesis", row.property);
            assert!(row.holds, "{} preserved", row.property);
        }
    }

    #[test]
    fn preservation_hypothesis_gate() {
        // A non-adjacent-closed image leaves the implication inapplicable.
        let r = RefinementFunction::new().with("a", triangle());
        let rows = check_preservation(&filled_square(), &r, BUDGET).unwrap();
        let adj = rows.iter().find(|r| r.property == "adjacent-closed").unwrap();
        assert!(!adj.hypothesis_met);
        let rooted = rows.iter().find(|r| r.property == "rooted").unwrap();
        assert!(rooted.hypothesis_met && rooted.holds);
    }

    #[test]
    fn closure_needs_single_event_closed_bases() {
        // The triangle admits (ab,∅) without (ab,b). With both labels
        // refined by two-event chains, the choice a ↦ (c,∅), b ↦ (cd,c)
        // has a diagonal completion that could only refine the absent
        // (ab,b), so the strict construction cannot close the result.
        let cd =
            st_chars(&["c", "d"], &[("", ""), ("c", ""), ("c", "c"), ("cd", "c"), ("cd", "cd")])
                .unwrap();
        let r = RefinementFunction::new().with("a", cd.clone()).with("b", cd);
        let err = refine(&triangle(), &r, BUDGET).unwrap_err();
        assert!(matches!(err, RefineError::RefinedNotClosed(_)));
    }

    #[test]
    fn output_always_rooted() {
        let cd =
            st_chars(&["c", "d"], &[("", ""), ("c", ""), ("c", "c"), ("cd", "c"), ("cd", "cd")])
                .unwrap();
        let r = RefinementFunction::new().with("a", cd).with("b", triangle());
        let refined = refine(&filled_square(), &r, BUDGET).unwrap();
        assert!(refined.is_rooted());
    }
}
