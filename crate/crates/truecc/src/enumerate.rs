//! Exhaustive and random desk-scale generation of small structures,
//! used by the property and acceptance suites.

use rand::Rng;

use crate::event::{Event, EventSet};
use crate::related::ConfigStructure;
use crate::st::{StConfig, StStructure};

fn default_events(n: usize) -> Vec<Event> {
    const NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];
    (0..n).map(|i| Event::new(NAMES[i], NAMES[i])).collect()
}

/// Enumeration table for the ST-configurations over n events: the root
/// is pinned, every other configuration gets one mask bit.
pub struct StEnumerator {
    events: Vec<Event>,
    non_root: Vec<StConfig>,
    /// Bit of the diagonal completion per non-root config (usize::MAX
    /// marks the root).
    diag_bit: Vec<usize>,
    /// Bits of the one-step predecessors per non-root config; the root
    /// predecessor is encoded as usize::MAX.
    pred_bits: Vec<Vec<usize>>,
}

impl StEnumerator {
    pub fn new(n: usize) -> Self {
        assert!(n <= 4, "exhaustive enumeration is desk-scale");
        let events = default_events(n);
        let mut non_root = Vec::new();
        for s in EventSet::full(n).subsets() {
            for t in s.subsets() {
                let c = StConfig::new(s, t);
                if c != StConfig::ROOT {
                    non_root.push(c);
                }
            }
        }
        non_root.sort();
        let bit_of = |c: StConfig| -> usize {
            if c == StConfig::ROOT {
                usize::MAX
            } else {
                non_root.binary_search(&c).expect("member")
            }
        };
        let diag_bit = non_root
            .iter()
            .map(|&c| bit_of(StConfig::new(c.started, c.started)))
            .collect();
        let pred_bits = non_root
            .iter()
            .map(|&c| {
                let mut preds = Vec::new();
                for e in c.executing().iter() {
                    preds.push(bit_of(StConfig::new(c.started.remove(e), c.terminated)));
                }
                for e in c.terminated.iter() {
                    preds.push(bit_of(StConfig::new(c.started, c.terminated.remove(e))));
                }
                preds
            })
            .collect();
        StEnumerator { events, non_root, diag_bit, pred_bits }
    }

    /// Number of candidate masks (each mask selects non-root configs;
    /// the root is always present).
    pub fn mask_count(&self) -> u64 {
        1u64 << self.non_root.len()
    }

    /// Whether the mask describes a rooted connected structure
    /// satisfying the closure constraint.
    pub fn mask_is_valid(&self, mask: u32) -> bool {
        for bit in 0..self.non_root.len() {
            if mask & (1 << bit) == 0 {
                continue;
            }
            let d = self.diag_bit[bit];
            if d != usize::MAX && mask & (1 << d) == 0 {
                return false;
            }
            let connected = self.pred_bits[bit]
                .iter()
                .any(|&p| p == usize::MAX || mask & (1 << p) != 0);
            if !connected {
                return false;
            }
        }
        true
    }

    /// Materializes a valid mask as a structure.
    pub fn structure_for(&self, mask: u32) -> StStructure {
        let mut configs = vec![StConfig::ROOT];
        for bit in 0..self.non_root.len() {
            if mask & (1 << bit) != 0 {
                configs.push(self.non_root[bit]);
            }
        }
        StStructure::new(self.events.clone(), configs).expect("mask pre-validated")
    }

    /// All rooted connected structures over the event table.
    pub fn all_valid(&self) -> impl Iterator<Item = StStructure> + '_ {
        (0..self.mask_count() as u32)
            .filter(|&m| self.mask_is_valid(m))
            .map(|m| self.structure_for(m))
    }
}

/// A random rooted connected ST-structure over n events: a random config
/// set pruned to its largest valid reachable core.
pub fn random_rooted_connected_st(n: usize, rng: &mut impl Rng, density: f64) -> StStructure {
    let events = default_events(n);
    let mut configs = vec![StConfig::ROOT];
    for s in EventSet::full(n).subsets() {
        for t in s.subsets() {
            if rng.gen_bool(density) {
                configs.push(StConfig::new(s, t));
            }
        }
    }
    // Random subsets rarely satisfy the closure; the reachability fixed
    // point prunes them to a valid rooted connected core.
    StStructure::new_unchecked(events, configs).reachable_part()
}

/// All configuration structures over n events (every subset of the
/// powerset), labelled a, b, c, ….
pub fn all_config_structures(n: usize) -> impl Iterator<Item = ConfigStructure> {
    assert!(n <= 3, "exhaustive enumeration is desk-scale");
    let events = default_events(n);
    let subsets: Vec<EventSet> = EventSet::full(n).subsets().collect();
    let total = 1u32 << subsets.len();
    (0..total).map(move |mask| {
        let configs: Vec<EventSet> = subsets
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &s)| s)
            .collect();
        ConfigStructure::new(events.clone(), configs).expect("within the universe")
    })
}

/// A random inpure event structure over n events with ∅ ⊢ ∅ pinned so
/// the structure is rooted.
pub fn random_event_structure(
    n: usize,
    rng: &mut impl Rng,
    density: f64,
) -> crate::related::InpureEventStructure {
    let events = default_events(n);
    let subsets: Vec<EventSet> = EventSet::full(n).subsets().collect();
    let mut enabling = vec![(EventSet::EMPTY, EventSet::EMPTY)];
    for &z in &subsets {
        for &y in &subsets {
            if rng.gen_bool(density) {
                enabling.push((z, y));
            }
        }
    }
    crate::related::InpureEventStructure::new(events, enabling).expect("within the universe")
}
