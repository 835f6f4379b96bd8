//! Named example structures used across the test suites and exposed
//! through the CLI `generate` subcommand.
//!
//! Single-character event ids double as labels unless stated otherwise.

use crate::event::{Event, EventId, EventSet};
use crate::hda::{Hda, RawCell, RawHda};
use crate::st::{StConfig, StError, StStructure, ValidationMode};

/// Builds a structure whose events are single-character ids labelled by
/// themselves, with configs written as character strings ("ab", "a").
pub fn st_chars(ids: &[&str], cfgs: &[(&str, &str)]) -> Result<StStructure, StError> {
    st_chars_mode(ids, cfgs, ValidationMode::Strict)
}

pub fn st_chars_mode(
    ids: &[&str],
    cfgs: &[(&str, &str)],
    mode: ValidationMode,
) -> Result<StStructure, StError> {
    let events: Vec<Event> = ids.iter().map(|id| Event::new(*id, *id)).collect();
    let raw: Vec<(Vec<EventId>, Vec<EventId>)> = cfgs
        .iter()
        .map(|(s, t)| {
            (
                s.chars().map(|c| EventId::new(c.to_string())).collect(),
                t.chars().map(|c| EventId::new(c.to_string())).collect(),
            )
        })
        .collect();
    StStructure::from_ids_with_mode(events, &raw, mode)
}

/// Looks up the configuration written as two character strings; the
/// config must use single-character event ids.
pub fn cfg(st: &StStructure, s: &str, t: &str) -> StConfig {
    let c = cfg_raw(s, t, st);
    debug_assert!(st.contains(c), "fixture config {} missing", st.show_config(c));
    c
}

/// Same lookup without requiring membership.
pub fn cfg_raw(s: &str, t: &str, st: &StStructure) -> StConfig {
    let set = |txt: &str| {
        let mut m = EventSet::EMPTY;
        for ch in txt.chars() {
            m = m.insert(st.event_index(&EventId::new(ch.to_string())).expect("declared event"));
        }
        m
    };
    StConfig { started: set(s), terminated: set(t) }
}

/// Two concurrent events a ∥ b: all nine configurations.
pub fn filled_square() -> StStructure {
    st_chars(
        &["a", "b"],
        &[
            ("", ""),
            ("a", ""),
            ("b", ""),
            ("a", "a"),
            ("b", "b"),
            ("ab", ""),
            ("ab", "a"),
            ("ab", "b"),
            ("ab", "ab"),
        ],
    )
    .unwrap()
}

/// The interleaving square: a ∥ b without the inside, i.e. without (ab,∅).
pub fn empty_square() -> StStructure {
    st_chars(
        &["a", "b"],
        &[
            ("", ""),
            ("a", ""),
            ("b", ""),
            ("a", "a"),
            ("b", "b"),
            ("ab", "a"),
            ("ab", "b"),
            ("ab", "ab"),
        ],
    )
    .unwrap()
}

/// a and b concurrent but a always faster: stable, not adjacent-closed.
pub fn triangle() -> StStructure {
    st_chars(
        &["a", "b"],
        &[("", ""), ("a", ""), ("a", "a"), ("ab", ""), ("ab", "a"), ("ab", "ab")],
    )
    .unwrap()
}

/// Sequential composition a;b.
pub fn chain_ab() -> StStructure {
    st_chars(&["a", "b"], &[("", ""), ("a", ""), ("a", "a"), ("ab", "a"), ("ab", "ab")]).unwrap()
}

/// Binary choice a + b.
pub fn choice_ab() -> StStructure {
    st_chars(&["a", "b"], &[("", ""), ("a", ""), ("a", "a"), ("b", ""), ("b", "b")]).unwrap()
}

/// The parallel switch: event b needs one of the switches 0, 1 closed.
/// Closed under bounded unions but not under bounded intersections.
pub fn parallel_switch() -> StStructure {
    let ids = ["0", "1", "b"];
    let events: Vec<Event> = ids.iter().map(|id| Event::new(*id, *id)).collect();
    let b = 2;
    let mut configs = Vec::new();
    for s in EventSet::full(3).subsets() {
        for t in s.subsets() {
            // b may run only once a switch has closed.
            if s.contains(b) && !t.contains(0) && !t.contains(1) {
                continue;
            }
            configs.push(StConfig { started: s, terminated: t });
        }
    }
    StStructure::new(events, configs).unwrap()
}

/// The resolved conflict: a and b conflict until c has terminated.
/// Closed under bounded intersections but not under bounded unions.
pub fn resolved_conflict() -> StStructure {
    let ids = ["a", "b", "c"];
    let events: Vec<Event> = ids.iter().map(|id| Event::new(*id, *id)).collect();
    let (a, b, c) = (0, 1, 2);
    let mut configs = Vec::new();
    for s in EventSet::full(3).subsets() {
        for t in s.subsets() {
            if s.contains(a) && s.contains(b) && !t.contains(c) {
                continue;
            }
            configs.push(StConfig { started: s, terminated: t });
        }
    }
    StStructure::new(events, configs).unwrap()
}

/// Strong asymmetric conflict s + b;s over two events.
pub fn asym_conflict_2ev() -> StStructure {
    st_chars(
        &["b", "s"],
        &[("", ""), ("b", ""), ("s", ""), ("b", "b"), ("s", "s"), ("bs", "b"), ("bs", "bs")],
    )
    .unwrap()
}

/// The same behaviour presented over three events: the initial s and the
/// s after b are distinct events with the same label.
pub fn asym_conflict_3ev() -> StStructure {
    let events =
        vec![Event::new("b", "b"), Event::new("s1", "s"), Event::new("s2", "s")];
    let id = |s: &str| EventId::new(s);
    let raw: Vec<(Vec<EventId>, Vec<EventId>)> = vec![
        (vec![], vec![]),
        (vec![id("b")], vec![]),
        (vec![id("b")], vec![id("b")]),
        (vec![id("s1")], vec![]),
        (vec![id("s1")], vec![id("s1")]),
        (vec![id("b"), id("s2")], vec![id("b")]),
        (vec![id("b"), id("s2")], vec![id("b"), id("s2")]),
    ];
    StStructure::from_ids(events, &raw).unwrap()
}

/// Shutdown next to a single backup: the asymmetric-conflict square with
/// the inside filled in. Only weak-mode valid, since s may start but can
/// never terminate alone.
pub fn shutdown_square_weak() -> StStructure {
    st_chars_mode(
        &["b", "s"],
        &[("", ""), ("b", ""), ("s", ""), ("b", "b"), ("bs", ""), ("bs", "b"), ("bs", "bs")],
        ValidationMode::Weak,
    )
    .unwrap()
}

fn raw_cell(id: &str, dim: usize) -> RawCell {
    RawCell { id: id.to_string(), dim }
}

/// Helper assembling a raw HDA from literal tables.
pub fn raw_hda(
    cells: &[(&str, usize)],
    s: &[(&str, usize, &str)],
    t: &[(&str, usize, &str)],
    labels: &[(&str, &str)],
    initial: &str,
    finals: &[&str],
) -> RawHda {
    RawHda {
        cells: cells.iter().map(|(id, d)| raw_cell(id, *d)).collect(),
        s: s.iter().map(|(c, i, to)| (c.to_string(), *i, to.to_string())).collect(),
        t: t.iter().map(|(c, i, to)| (c.to_string(), *i, to.to_string())).collect(),
        labels: labels.iter().map(|(c, l)| (c.to_string(), l.to_string())).collect(),
        initial: initial.to_string(),
        finals: finals.iter().map(|f| f.to_string()).collect(),
    }
}

/// The filled square a ∥ b as an HDA: four states, four transitions,
/// one square.
pub fn filled_square_hda() -> Hda {
    raw_hda(
        &[
            ("p00", 0),
            ("pa", 0),
            ("pb", 0),
            ("pab", 0),
            ("ea0", 1),
            ("eb0", 1),
            ("ea1", 1),
            ("eb1", 1),
            ("sq", 2),
        ],
        &[
            ("ea0", 1, "p00"),
            ("eb0", 1, "p00"),
            ("ea1", 1, "pb"),
            ("eb1", 1, "pa"),
            ("sq", 1, "eb0"),
            ("sq", 2, "ea0"),
        ],
        &[
            ("ea0", 1, "pa"),
            ("eb0", 1, "pb"),
            ("ea1", 1, "pab"),
            ("eb1", 1, "pab"),
            ("sq", 1, "eb1"),
            ("sq", 2, "ea1"),
        ],
        &[("ea0", "a"), ("eb0", "b"), ("ea1", "a"), ("eb1", "b")],
        "p00",
        &["pab"],
    )
    .validate()
    .unwrap()
}

/// The interleaving square: same boundary, no filling cell.
pub fn empty_square_hda() -> Hda {
    raw_hda(
        &[
            ("p00", 0),
            ("pa", 0),
            ("pb", 0),
            ("pab", 0),
            ("ea0", 1),
            ("eb0", 1),
            ("ea1", 1),
            ("eb1", 1),
        ],
        &[("ea0", 1, "p00"), ("eb0", 1, "p00"), ("ea1", 1, "pb"), ("eb1", 1, "pa")],
        &[("ea0", 1, "pa"), ("eb0", 1, "pb"), ("ea1", 1, "pab"), ("eb1", 1, "pab")],
        &[("ea0", "a"), ("eb0", "b"), ("ea1", "a"), ("eb1", "b")],
        "p00",
        &["pab"],
    )
    .validate()
    .unwrap()
}

/// A state reached either by one event c or by the sequence a;b.
pub fn triangle_hda() -> Hda {
    raw_hda(
        &[("p0", 0), ("pm", 0), ("pf", 0), ("ea", 1), ("eb", 1), ("ec", 1)],
        &[("ea", 1, "p0"), ("eb", 1, "pm"), ("ec", 1, "p0")],
        &[("ea", 1, "pm"), ("eb", 1, "pf"), ("ec", 1, "pf")],
        &[("ea", "a"), ("eb", "b"), ("ec", "c")],
        "p0",
        &["pf"],
    )
    .validate()
    .unwrap()
}

/// Late choice: d, then a choice between e and f.
pub fn angelic_choice_hda() -> Hda {
    raw_hda(
        &[("p0", 0), ("pm", 0), ("pe", 0), ("pf", 0), ("ed", 1), ("ee", 1), ("ef", 1)],
        &[("ed", 1, "p0"), ("ee", 1, "pm"), ("ef", 1, "pm")],
        &[("ed", 1, "pm"), ("ee", 1, "pe"), ("ef", 1, "pf")],
        &[("ed", "d"), ("ee", "e"), ("ef", "f")],
        "p0",
        &["pe", "pf"],
    )
    .validate()
    .unwrap()
}

/// Early choice: the commitment happens at the start of d, so the two
/// d-transitions connect the same pair of states. The HDA is valid but
/// degenerate, which is exactly the failure STC-structures repair.
pub fn demonic_choice_hda() -> Hda {
    raw_hda(
        &[("p0", 0), ("pm", 0), ("pe", 0), ("pf", 0), ("ed1", 1), ("ed2", 1), ("ee", 1), ("ef", 1)],
        &[("ed1", 1, "p0"), ("ed2", 1, "p0"), ("ee", 1, "pm"), ("ef", 1, "pm")],
        &[("ed1", 1, "pm"), ("ed2", 1, "pm"), ("ee", 1, "pe"), ("ef", 1, "pf")],
        &[("ed1", "d"), ("ed2", "d"), ("ee", "e"), ("ef", "f")],
        "p0",
        &["pe", "pf"],
    )
    .validate()
    .unwrap()
}

/// The angelic-vs-demonic speed game: tasks d and a run concurrently
/// through one of two squares that share their lower faces; the square
/// decides whether the evil e or the good g follows.
pub fn speed_game_hda() -> Hda {
    raw_hda(
        &[
            ("p0", 0),
            ("pd", 0),
            ("pa", 0),
            ("pf1", 0),
            ("pf2", 0),
            ("px1", 0),
            ("px2", 0),
            ("ed", 1),
            ("ea", 1),
            ("eu1", 1),
            ("eu2", 1),
            ("ev1", 1),
            ("ev2", 1),
            ("ee", 1),
            ("eg", 1),
            ("sq1", 2),
            ("sq2", 2),
        ],
        &[
            ("ed", 1, "p0"),
            ("ea", 1, "p0"),
            ("eu1", 1, "pd"),
            ("eu2", 1, "pd"),
            ("ev1", 1, "pa"),
            ("ev2", 1, "pa"),
            ("ee", 1, "pf1"),
            ("eg", 1, "pf2"),
            ("sq1", 1, "ea"),
            ("sq1", 2, "ed"),
            ("sq2", 1, "ea"),
            ("sq2", 2, "ed"),
        ],
        &[
            ("ed", 1, "pd"),
            ("ea", 1, "pa"),
            ("eu1", 1, "pf1"),
            ("eu2", 1, "pf2"),
            ("ev1", 1, "pf1"),
            ("ev2", 1, "pf2"),
            ("ee", 1, "px1"),
            ("eg", 1, "px2"),
            ("sq1", 1, "eu1"),
            ("sq1", 2, "ev1"),
            ("sq2", 1, "eu2"),
            ("sq2", 2, "ev2"),
        ],
        &[
            ("ed", "d"),
            ("ea", "a"),
            ("eu1", "a"),
            ("eu2", "a"),
            ("ev1", "d"),
            ("ev2", "d"),
            ("ee", "e"),
            ("eg", "g"),
        ],
        "p0",
        &["px1", "px2"],
    )
    .validate()
    .unwrap()
}

/// Cyclic HDA for s ∥ b*: the parallel square rolled into a cylinder.
pub fn cylinder_hda() -> Hda {
    raw_hda(
        &[("pa", 0), ("pb", 0), ("es", 1), ("eb0", 1), ("eb1", 1), ("sq", 2)],
        &[("es", 1, "pa"), ("eb0", 1, "pa"), ("eb1", 1, "pb"), ("sq", 1, "eb0"), ("sq", 2, "es")],
        &[("es", 1, "pb"), ("eb0", 1, "pa"), ("eb1", 1, "pb"), ("sq", 1, "eb1"), ("sq", 2, "es")],
        &[("es", "s"), ("eb0", "b"), ("eb1", "b")],
        "pa",
        &["pb"],
    )
    .validate()
    .unwrap()
}

/// Raw form of the shutdown square as an HDA: the inside cell and the
/// lone s-transition are missing t-maps, so strict validation rejects it.
pub fn shutdown_square_raw_hda() -> RawHda {
    raw_hda(
        &[("p0", 0), ("pb", 0), ("pf", 0), ("eb", 1), ("es0", 1), ("es1", 1), ("sq", 2)],
        &[
            ("eb", 1, "p0"),
            ("es0", 1, "p0"),
            ("es1", 1, "pb"),
            ("sq", 1, "es0"),
            ("sq", 2, "eb"),
        ],
        &[("eb", 1, "pb"), ("es1", 1, "pf"), ("sq", 1, "es1")],
        &[("eb", "b"), ("es0", "s"), ("es1", "s")],
        "p0",
        &["pf"],
    )
}

/// The boundary of the a,b,c cube with its top cell and one square
/// removed; the far corner keeps two homotopy classes.
pub fn cube_minus_face_hda() -> Hda {
    cube_minus_face_builder(false).validate().unwrap()
}

/// The same with two extra transitions d and e from the split-prone
/// corner; paired with the asymmetric unfolded variant below this
/// separates hh-bisimilarity while both translate to one ST-structure.
pub fn cube_minus_face_dotted_hda() -> Hda {
    cube_minus_face_builder(true).validate().unwrap()
}

/// The history unfolding of the cube with the missing face, with the d
/// transition attached to one copy of the split corner and e to the
/// other. The split corners are the states whose only outgoing
/// transitions carry label c.
pub fn cube_minus_face_unfolded_dotted_hda() -> Hda {
    let u = cube_minus_face_hda().history_unfolding().unwrap();
    let mut corners: Vec<String> = (0..u.cell_count())
        .filter(|&c| {
            u.dim(c) == 0 && {
                let up = u.up_steps(c);
                !up.is_empty() && up.iter().all(|&(_, e)| u.label(e).as_str() == "c")
            }
        })
        .map(|c| u.id(c).to_string())
        .collect();
    corners.sort();
    assert_eq!(corners.len(), 2, "the unfolding splits the corner into two");
    let mut raw = u.to_raw();
    for (anchor, extra) in corners.iter().zip(["d", "e"]) {
        let eid = format!("x{extra}");
        let pid = format!("y{extra}");
        raw.cells.push(RawCell { id: eid.clone(), dim: 1 });
        raw.cells.push(RawCell { id: pid.clone(), dim: 0 });
        raw.s.push((eid.clone(), 1, anchor.clone()));
        raw.t.push((eid.clone(), 1, pid.clone()));
        raw.labels.insert(eid, extra.to_string());
        raw.finals.push(pid);
    }
    raw.validate().unwrap()
}

fn cube_minus_face_builder(dotted: bool) -> RawHda {
    cube_minus_square_builder(dotted, CUBE_MISSING_SQUARE)
}

/// Which square of the cube boundary is removed: the bottom face where
/// a and b run concurrently before c has started. The corner after a
/// and b then keeps two homotopy classes, which the unfolding splits.
pub const CUBE_MISSING_SQUARE: (u64, u64) = (0b011, 0b000);

pub fn cube_minus_square_builder(dotted: bool, missing: (u64, u64)) -> RawHda {
    // Cells of the full B3 boundary keyed by (S,T) over events a,b,c,
    // minus the top cell (built implicitly: we never add dim 3) and
    // minus one square.
    let evs = ["a", "b", "c"];
    let key = |s: EventSet, t: EventSet| -> String {
        let part = |m: EventSet| -> String { m.iter().map(|i| evs[i]).collect() };
        format!("c{}.{}", part(s), part(t))
    };
    let missing_s = EventSet(missing.0);
    let missing_t = EventSet(missing.1);
    let mut cells = Vec::new();
    let mut smap = Vec::new();
    let mut tmap = Vec::new();
    let mut labels = Vec::new();
    let all = EventSet::full(3);
    let keep = |s: EventSet, t: EventSet| -> bool {
        let dim = s.diff(t).len();
        dim < 3 && !(s == missing_s && t == missing_t)
    };
    for s in all.subsets() {
        for t in s.subsets() {
            if !keep(s, t) {
                continue;
            }
            let dim = s.diff(t).len();
            let id = key(s, t);
            cells.push((id.clone(), dim));
            let running: Vec<usize> = s.diff(t).iter().collect();
            for (pos, &e) in running.iter().enumerate() {
                let i = pos + 1;
                let face_s = (s.remove(e), t);
                let face_t = (s, t.insert(e));
                if keep(face_s.0, face_s.1) {
                    smap.push((id.clone(), i, key(face_s.0, face_s.1)));
                }
                if keep(face_t.0, face_t.1) {
                    tmap.push((id.clone(), i, key(face_t.0, face_t.1)));
                }
            }
            if dim == 1 {
                labels.push((id.clone(), evs[running[0]].to_string()));
            }
        }
    }
    let mut finals = vec![key(all, all)];
    if dotted {
        // Both extra transitions hang off the split-prone corner where
        // a and b have terminated.
        let anchor = key(EventSet::from_indices([0, 1]), EventSet::from_indices([0, 1]));
        for extra in ["d", "e"] {
            let eid = format!("x{extra}");
            let pid = format!("y{extra}");
            cells.push((eid.clone(), 1));
            cells.push((pid.clone(), 0));
            smap.push((eid.clone(), 1, anchor.clone()));
            tmap.push((eid.clone(), 1, pid.clone()));
            labels.push((eid, extra.to_string()));
            finals.push(pid);
        }
    }
    RawHda {
        cells: cells.into_iter().map(|(id, dim)| RawCell { id, dim }).collect(),
        s: smap,
        t: tmap,
        labels: labels.into_iter().collect(),
        initial: key(EventSet::EMPTY, EventSet::EMPTY),
        finals,
    }
}
