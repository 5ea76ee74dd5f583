//! Triad pattern tables and census.
//!
//! A labeled triad on slots (a, b, c) is a 6-bit code; bit k is the k-th arc
//! of (a->b, b->a, a->c, c->a, b->c, c->b). The 64 codes fall into 16
//! isomorphism classes numbered in the usual motif-detection order:
//!
//! | id | arcs | shape |
//! |----|------|-------|
//! | 1  | 0 | empty |
//! | 2  | 1 | single arc |
//! | 3  | 2 | single mutual dyad |
//! | 4  | 2 | out-star |
//! | 5  | 2 | chain |
//! | 6  | 3 | mutual dyad plus arc out of it |
//! | 7  | 2 | in-star |
//! | 8  | 3 | feed-forward loop |
//! | 9  | 4 | mutual dyad, both ends pointing at the third node |
//! | 10 | 3 | mutual dyad plus arc into it |
//! | 11 | 4 | two mutual dyads, open |
//! | 12 | 3 | directed 3-cycle |
//! | 13 | 4 | mutual dyad closed by a cycle-oriented path |
//! | 14 | 4 | third node pointing at both ends of a mutual dyad |
//! | 15 | 5 | two mutual dyads plus one arc |
//! | 16 | 6 | complete |
//!
//! Node-specific orbits (1..=30) are numbered by pattern id, then by the
//! minimal code with the focal node in slot a.

mod census;
mod signed;

pub use census::{census, node_specific_counts, node_specific_counts_and_census, triad_code};
pub use signed::{
    signed_node_specific_counts, signed_pattern_table, SignedPattern, SignedPosition,
    SIGNED_PATTERN_COUNT,
};

use std::collections::BTreeMap;
use std::sync::LazyLock;

use serde::Serialize;

pub const PATTERN_COUNT: usize = 16;
pub const CONNECTED_COUNT: usize = 13;
pub const ORBIT_COUNT: usize = 30;
/// Pattern id of the feed-forward loop.
pub const FFL: usize = 8;
/// Pattern id of the directed 3-cycle.
pub const LOOP: usize = 12;

/// Arc slots as (from, to) positions, in bit order.
pub const SLOTS: [(usize, usize); 6] = [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)];

/// One representative code per pattern id (index id - 1).
const REPRESENTATIVES: [u8; PATTERN_COUNT] = [0, 1, 3, 40, 24, 56, 10, 42, 58, 52, 60, 38, 46, 30, 62, 63];

/// All six permutations of the slots; `p[x]` is the new position of old position x.
pub const PERMUTATIONS: [[usize; 3]; 6] =
    [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

#[inline]
fn slot_bit(from: usize, to: usize) -> u8 {
    match (from, to) {
        (0, 1) => 1,
        (1, 0) => 2,
        (0, 2) => 4,
        (2, 0) => 8,
        (1, 2) => 16,
        (2, 1) => 32,
        _ => unreachable!("self slot"),
    }
}

/// Image of `code` when node position x moves to `perm[x]`.
pub fn permute_code(code: u8, perm: &[usize; 3]) -> u8 {
    let mut out = 0;
    for (k, &(x, y)) in SLOTS.iter().enumerate() {
        if code >> k & 1 == 1 {
            out |= slot_bit(perm[x], perm[y]);
        }
    }
    out
}

fn reverse_code(code: u8) -> u8 {
    let mut out = 0;
    for (k, &(x, y)) in SLOTS.iter().enumerate() {
        if code >> k & 1 == 1 {
            out |= slot_bit(y, x);
        }
    }
    out
}

fn canonical(code: u8) -> u8 {
    PERMUTATIONS.iter().map(|p| permute_code(code, p)).min().unwrap()
}

/// Minimal code over relabelings that put position `focal` in slot a.
fn focal_canonical(code: u8, focal: usize) -> u8 {
    PERMUTATIONS
        .iter()
        .filter(|p| p[focal] == 0)
        .map(|p| permute_code(code, p))
        .min()
        .unwrap()
}

fn in_degree_at(code: u8, pos: usize) -> usize {
    SLOTS.iter().enumerate().filter(|&(k, &(_, y))| y == pos && code >> k & 1 == 1).count()
}

fn out_degree_at(code: u8, pos: usize) -> usize {
    SLOTS.iter().enumerate().filter(|&(k, &(x, _))| x == pos && code >> k & 1 == 1).count()
}

#[derive(Clone, Debug, Serialize)]
pub struct PatternInfo {
    pub id: usize,
    pub representative: u8,
    pub canonical: u8,
    pub arcs: usize,
    pub mutual_dyads: usize,
    pub connected: bool,
    pub closed: bool,
    /// Number of labeled codes in the class.
    pub class_size: usize,
    /// Pattern obtained by reversing every arc.
    pub reverse: usize,
    /// Orbit ids (1-based), ascending.
    pub orbits: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitInfo {
    pub id: usize,
    pub pattern: usize,
    /// Index of this orbit within its pattern.
    pub index: usize,
    /// Number of the pattern's three nodes in this orbit.
    pub size: usize,
    /// Minimal code with the focal node in slot a.
    pub focal_code: u8,
    /// In- and out-degree of the focal node inside the triad.
    pub focal_in: usize,
    pub focal_out: usize,
}

#[derive(Debug, Serialize)]
pub struct PatternTable {
    /// Pattern id of each code.
    pub pattern_of: Vec<usize>,
    pub patterns: Vec<PatternInfo>,
    pub orbits: Vec<OrbitInfo>,
    /// Orbit id (1..=30, 0 if disconnected) of each slot of each code.
    pub orbit_at: Vec<[usize; 3]>,
    /// Labeled codes of each pattern (the equally likely orientations).
    pub configurations: Vec<Vec<u8>>,
}

impl PatternTable {
    fn build() -> PatternTable {
        let mut id_of_canonical = BTreeMap::new();
        for (i, &rep) in REPRESENTATIVES.iter().enumerate() {
            let prev = id_of_canonical.insert(canonical(rep), i + 1);
            assert!(prev.is_none(), "duplicate representative");
        }
        let pattern_of: Vec<usize> = (0..64u8).map(|c| id_of_canonical[&canonical(c)]).collect();
        let mut configurations = vec![Vec::new(); PATTERN_COUNT];
        for c in 0..64u8 {
            configurations[pattern_of[c as usize] - 1].push(c);
        }

        let mut orbits = Vec::new();
        let mut orbit_of_focal = BTreeMap::new();
        let mut patterns = Vec::new();
        for (i, &rep) in REPRESENTATIVES.iter().enumerate() {
            let id = i + 1;
            let arcs = rep.count_ones() as usize;
            let mutual_dyads = [(0, 1), (0, 2), (1, 2)]
                .iter()
                .filter(|&&(x, y)| rep & slot_bit(x, y) != 0 && rep & slot_bit(y, x) != 0)
                .count();
            let occupied = [(0, 1), (0, 2), (1, 2)]
                .iter()
                .filter(|&&(x, y)| rep & (slot_bit(x, y) | slot_bit(y, x)) != 0)
                .count();
            let connected = occupied >= 2;
            let mut ids = Vec::new();
            if connected {
                let mut focal: BTreeMap<u8, (usize, usize)> = BTreeMap::new();
                for pos in 0..3 {
                    focal.entry(focal_canonical(rep, pos)).or_insert((pos, 0)).1 += 1;
                }
                for (index, (code, (pos, size))) in focal.into_iter().enumerate() {
                    let orbit_id = orbits.len() + 1;
                    orbit_of_focal.insert(code, orbit_id);
                    ids.push(orbit_id);
                    orbits.push(OrbitInfo {
                        id: orbit_id,
                        pattern: id,
                        index,
                        size,
                        focal_code: code,
                        focal_in: in_degree_at(rep, pos),
                        focal_out: out_degree_at(rep, pos),
                    });
                }
            }
            patterns.push(PatternInfo {
                id,
                representative: rep,
                canonical: canonical(rep),
                arcs,
                mutual_dyads,
                connected,
                closed: occupied == 3,
                class_size: configurations[i].len(),
                reverse: pattern_of[reverse_code(rep) as usize],
                orbits: ids,
            });
        }

        let orbit_at = (0..64u8)
            .map(|c| {
                let mut at = [0; 3];
                if patterns[pattern_of[c as usize] - 1].connected {
                    for (pos, slot) in at.iter_mut().enumerate() {
                        *slot = orbit_of_focal[&focal_canonical(c, pos)];
                    }
                }
                at
            })
            .collect();

        PatternTable { pattern_of, patterns, orbits, orbit_at, configurations }
    }

    pub fn pattern(&self, id: usize) -> &PatternInfo {
        &self.patterns[id - 1]
    }

    pub fn orbit(&self, id: usize) -> &OrbitInfo {
        &self.orbits[id - 1]
    }
}

static TABLE: LazyLock<PatternTable> = LazyLock::new(PatternTable::build);

/// The process-wide pattern table.
pub fn table() -> &'static PatternTable {
    &TABLE
}

/// Pattern id (1..=16) of a triad code.
#[inline]
pub fn classify(code: u8) -> usize {
    TABLE.pattern_of[code as usize]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sixteen_classes_with_expected_sizes() {
        let t = table();
        let mut sizes: Vec<usize> = t.patterns.iter().map(|p| p.class_size).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 64);
        sizes.sort_unstable();
        let mut expected = vec![1, 6, 3, 3, 3, 6, 6, 3, 6, 2, 6, 3, 3, 6, 6, 1];
        expected.sort_unstable();
        assert_eq!(sizes, expected);
    }

    #[test]
    fn named_patterns() {
        assert_eq!(classify(0), 1);
        assert_eq!(classify(0b11), 3);
        assert_eq!(classify(63), 16);
        // a->b, a->c, b->c
        assert_eq!(classify(1 | 4 | 16), FFL);
        // a->b, b->c, c->a
        assert_eq!(classify(1 | 16 | 8), LOOP);
        let closed: Vec<usize> = table().patterns.iter().filter(|p| p.closed).map(|p| p.id).collect();
        assert_eq!(closed, vec![8, 9, 12, 13, 14, 15, 16]);
        assert!(table().patterns[..3].iter().all(|p| !p.connected));
        assert!(table().patterns[3..].iter().all(|p| p.connected));
    }

    #[test]
    fn orbit_structure() {
        let t = table();
        assert_eq!(t.orbits.len(), ORBIT_COUNT);
        assert_eq!(t.pattern(FFL).orbits.len(), 3);
        assert_eq!(t.pattern(LOOP).orbits.len(), 1);
        assert_eq!(t.pattern(16).orbits.len(), 1);
        for p in t.patterns.iter().filter(|p| p.connected) {
            let total: usize = p.orbits.iter().map(|&o| t.orbit(o).size).sum();
            assert_eq!(total, 3);
        }
    }

    #[test]
    fn classify_is_relabeling_invariant() {
        for code in 0..64u8 {
            for p in &PERMUTATIONS {
                assert_eq!(classify(code), classify(permute_code(code, p)));
            }
        }
    }

    #[test]
    fn orbit_slots_follow_relabeling() {
        for code in 0..64u8 {
            for p in &PERMUTATIONS {
                let moved = permute_code(code, p);
                for pos in 0..3 {
                    assert_eq!(table().orbit_at[code as usize][pos], table().orbit_at[moved as usize][p[pos]]);
                }
            }
        }
    }

    #[test]
    fn reversal_is_an_involution() {
        for p in &table().patterns {
            assert_eq!(table().pattern(p.reverse).reverse, p.id);
        }
        assert_eq!(table().pattern(4).reverse, 7);
        assert_eq!(table().pattern(FFL).reverse, FFL);
    }
}
