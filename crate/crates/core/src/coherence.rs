//! The diagrammatic predicates: coherent, strongly almost coherent
//! (downstairs), and virtually almost coherent (universal cover).
//!
//! Downstairs, each rainbow arc is read off the closed walk together with its
//! traversal direction. Per nest the minority direction is inconsistent; with
//! equal counts either direction may be chosen. A diagram is coherent when no
//! nest has two directions, strongly almost coherent when exactly two
//! inconsistent arcs exist and they are adjacent in the sense of the two
//! witness cases below, and virtually almost coherent when the cover census
//! of [`crate::cover::CoverWalk::arc_census`] totals exactly two.

use rayon::prelude::*;
use serde::Serialize;

use crate::cover::{build_walk, extend_and_normalize, Orientation};
use crate::diagram::{all_tuples, FourTuple};
use crate::{residue, Result};

/// One rainbow arc of the standard diagram, as traversed by the walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DownstairsArc {
    pub nest: Nest,
    /// Feet in the nest's own edge frame, (entry, exit) in traversal order.
    pub entry_foot: i64,
    pub exit_foot: i64,
    pub orientation: Orientation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Nest {
    /// Bottom-edge nest around the w basepoint.
    Bottom,
    /// Top-edge nest around the z basepoint.
    Top,
}

impl DownstairsArc {
    /// Feet as downstairs intersection-point ids (bottom-edge indices), using
    /// the identification `top i = bottom i+s`.
    pub fn feet_ids(&self, t: &FourTuple) -> [i64; 2] {
        let to_id = |foot: i64| match self.nest {
            Nest::Bottom => residue(foot, t.p()),
            Nest::Top => residue(foot + t.s(), t.p()),
        };
        [to_id(self.entry_foot), to_id(self.exit_foot)]
    }
}

/// Orientation census of the rainbow arcs per nest.
#[derive(Debug, Clone)]
pub struct DownstairsCensus {
    pub bottom: NestCensus,
    pub top: NestCensus,
}

#[derive(Debug, Clone)]
pub struct NestCensus {
    pub arcs: Vec<DownstairsArc>,
}

impl NestCensus {
    pub fn rightward(&self) -> usize {
        self.arcs.iter().filter(|a| a.orientation == Orientation::Rightward).count()
    }

    pub fn leftward(&self) -> usize {
        self.arcs.iter().filter(|a| a.orientation == Orientation::Leftward).count()
    }

    pub fn minority(&self) -> usize {
        self.rightward().min(self.leftward())
    }

    pub fn tie(&self) -> bool {
        self.rightward() == self.leftward() && !self.arcs.is_empty()
    }

    /// Directions an admissible tie-break may declare inconsistent.
    fn inconsistent_choices(&self) -> Vec<Orientation> {
        use std::cmp::Ordering::*;
        match self.rightward().cmp(&self.leftward()) {
            Less => vec![Orientation::Rightward],
            Greater => vec![Orientation::Leftward],
            Equal if self.arcs.is_empty() => vec![],
            Equal => vec![Orientation::Rightward, Orientation::Leftward],
        }
    }

    fn arcs_in(&self, orientation: Orientation) -> Vec<DownstairsArc> {
        self.arcs.iter().copied().filter(|a| a.orientation == orientation).collect()
    }
}

impl DownstairsCensus {
    pub fn total_inconsistent(&self) -> usize {
        self.bottom.minority() + self.top.minority()
    }
}

/// Reads the rainbow arcs and their orientations off one closed traversal.
pub fn downstairs_census(t: &FourTuple) -> Result<DownstairsCensus> {
    let walk = build_walk(t)?;
    let mut bottom = Vec::new();
    let mut top = Vec::new();
    for piece in walk.pieces() {
        use crate::cover::PieceKind::*;
        let orientation = if piece.from.position < piece.to.position {
            Orientation::Rightward
        } else {
            Orientation::Leftward
        };
        match piece.kind {
            BottomRainbow { .. } => bottom.push(DownstairsArc {
                nest: Nest::Bottom,
                entry_foot: residue(piece.from.position, t.p()),
                exit_foot: residue(piece.to.position, t.p()),
                orientation,
            }),
            TopRainbow { .. } => top.push(DownstairsArc {
                nest: Nest::Top,
                entry_foot: residue(piece.from.position, t.p()),
                exit_foot: residue(piece.to.position, t.p()),
                orientation,
            }),
            StrandUp | StrandDown => {}
        }
    }
    debug_assert_eq!(bottom.len(), t.q() as usize);
    debug_assert_eq!(top.len(), t.q() as usize);
    Ok(DownstairsCensus { bottom: NestCensus { arcs: bottom }, top: NestCensus { arcs: top } })
}

/// A diagram is coherent when every nest is uniformly oriented.
pub fn is_coherent(t: &FourTuple) -> Result<bool> {
    Ok(downstairs_census(t)?.total_inconsistent() == 0)
}

/// Which adjacency clause the two inconsistent arcs satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WitnessCase {
    /// The arcs share a common end point under the edge identification.
    SharedEndpoint,
    /// The arcs are connected by a path of two other rainbow arcs.
    ConnectedByTwoArcs,
}

/// Evidence for (or against) strong almost coherence.
#[derive(Debug, Clone, Serialize)]
pub struct StrongWitness {
    pub case: Option<WitnessCase>,
    /// The two inconsistent arcs under the successful (or last tried) choice.
    pub inconsistent: Vec<DownstairsArc>,
    /// The two connecting arcs, when the second clause applies.
    pub connectors: Option<(DownstairsArc, DownstairsArc)>,
    /// Tie-break used per nest, when there was a choice.
    pub tie_choice: (Option<Orientation>, Option<Orientation>),
}

/// Exactly two inconsistent arcs, adjacent per Definition of strong almost
/// coherence; existential over tie-breaks.
pub fn is_strongly_almost_coherent(t: &FourTuple) -> Result<(bool, StrongWitness)> {
    let census = downstairs_census(t)?;
    let mut last = StrongWitness {
        case: None,
        inconsistent: Vec::new(),
        connectors: None,
        tie_choice: (None, None),
    };
    if census.total_inconsistent() != 2 {
        return Ok((false, last));
    }
    let all_arcs: Vec<DownstairsArc> = census
        .bottom
        .arcs
        .iter()
        .chain(census.top.arcs.iter())
        .copied()
        .collect();
    for &bc in &nest_choices(&census.bottom) {
        for &tc in &nest_choices(&census.top) {
            let mut inconsistent = Vec::new();
            if census.bottom.minority() > 0 {
                inconsistent.extend(census.bottom.arcs_in(bc));
            }
            if census.top.minority() > 0 {
                inconsistent.extend(census.top.arcs_in(tc));
            }
            if inconsistent.len() != 2 {
                continue;
            }
            let witness = StrongWitness {
                case: None,
                inconsistent: inconsistent.clone(),
                connectors: None,
                tie_choice: (
                    census.bottom.tie().then_some(bc),
                    census.top.tie().then_some(tc),
                ),
            };
            if let Some(found) = check_adjacency(t, &inconsistent[0], &inconsistent[1], &all_arcs) {
                return Ok((
                    true,
                    StrongWitness { case: Some(found.0), connectors: found.1, ..witness },
                ));
            }
            last = witness;
        }
    }
    Ok((false, last))
}

/// Orientations to try as the inconsistent direction of one nest. A nest that
/// contributes no inconsistent arcs gets a single irrelevant placeholder so
/// the product loop still runs.
fn nest_choices(census: &NestCensus) -> Vec<Orientation> {
    if census.minority() == 0 {
        vec![Orientation::Rightward]
    } else {
        census.inconsistent_choices()
    }
}

type Adjacency = (WitnessCase, Option<(DownstairsArc, DownstairsArc)>);

fn check_adjacency(
    t: &FourTuple,
    g1: &DownstairsArc,
    g2: &DownstairsArc,
    all_arcs: &[DownstairsArc],
) -> Option<Adjacency> {
    let f1 = g1.feet_ids(t);
    let f2 = g2.feet_ids(t);
    if f1.iter().any(|a| f2.contains(a)) {
        return Some((WitnessCase::SharedEndpoint, None));
    }
    // Two other rainbow arcs forming a path from a foot of one inconsistent
    // arc to a foot of the other.
    let others: Vec<&DownstairsArc> =
        all_arcs.iter().filter(|a| *a != g1 && *a != g2).collect();
    for (i, s1) in others.iter().enumerate() {
        let s1_feet = s1.feet_ids(t);
        for s2 in &others[i + 1..] {
            let s2_feet = s2.feet_ids(t);
            for &u in &s1_feet {
                for &v in &s2_feet {
                    if u != v {
                        continue;
                    }
                    let s1_other = if s1_feet[0] == u { s1_feet[1] } else { s1_feet[0] };
                    let s2_other = if s2_feet[0] == v { s2_feet[1] } else { s2_feet[0] };
                    let links = |end1: i64, end2: i64| {
                        (f1.contains(&end1) && f2.contains(&end2))
                            || (f2.contains(&end1) && f1.contains(&end2))
                    };
                    if links(s1_other, s2_other) {
                        return Some((WitnessCase::ConnectedByTwoArcs, Some((**s1, **s2))));
                    }
                }
            }
        }
    }
    None
}

/// Exactly two inconsistent arcs in the universal cover.
pub fn is_virtually_almost_coherent(t: &FourTuple) -> Result<bool> {
    let walk = extend_and_normalize(&build_walk(t)?);
    walk.spin_structure_count()?;
    Ok(walk.arc_census()?.total_inconsistent() == 2)
}

/// Per-tuple outcome of the equivalence check.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceEntry {
    pub tuple: FourTuple,
    pub strongly: bool,
    pub virtually: bool,
}

/// Result of checking strongly <=> virtually almost coherent over all
/// connected rational-homology-sphere tuples with `p <= max_p`.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub max_p: i64,
    pub checked: usize,
    pub entries: Vec<EquivalenceEntry>,
    pub disagreements: Vec<EquivalenceEntry>,
}

/// Runs both predicates on every eligible tuple and reports disagreements
/// (there must be none).
pub fn equivalence_report(max_p: i64) -> EquivalenceReport {
    let entries: Vec<EquivalenceEntry> = all_tuples(max_p)
        .par_iter()
        .filter_map(|t| {
            let walk = build_walk(t).ok()?;
            if walk.delta_height() == 0 {
                return None;
            }
            let strongly = is_strongly_almost_coherent(t).ok()?.0;
            let virtually = is_virtually_almost_coherent(t).ok()?;
            Some(EquivalenceEntry { tuple: *t, strongly, virtually })
        })
        .collect();
    let disagreements =
        entries.iter().filter(|e| e.strongly != e.virtually).cloned().collect();
    EquivalenceReport { max_p, checked: entries.len(), entries, disagreements }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tup(p: i64, q: i64, r: i64, s: i64) -> FourTuple {
        FourTuple::new(p, q, r, s).unwrap()
    }

    #[test]
    fn downstairs_census_examples() {
        let c = downstairs_census(&tup(5, 2, 0, 1)).unwrap();
        assert_eq!((c.bottom.rightward(), c.bottom.leftward()), (1, 1));
        assert!(c.bottom.tie());
        assert_eq!((c.top.rightward(), c.top.leftward()), (1, 1));
        assert!(c.top.tie());

        let c = downstairs_census(&tup(9, 2, 0, 4)).unwrap();
        assert_eq!(c.total_inconsistent(), 2);

        let c = downstairs_census(&tup(4, 0, 2, 1)).unwrap();
        assert!(c.bottom.arcs.is_empty() && c.top.arcs.is_empty());
        assert_eq!(c.total_inconsistent(), 0);
    }

    #[test]
    fn coherent_examples() {
        assert!(is_coherent(&tup(1, 0, 0, 0)).unwrap());
        assert!(is_coherent(&tup(3, 1, 0, 1)).unwrap());
        assert!(!is_coherent(&tup(5, 2, 0, 1)).unwrap());
    }

    #[test]
    fn strongly_almost_coherent_examples() {
        assert!(is_strongly_almost_coherent(&tup(5, 2, 0, 1)).unwrap().0);
        assert!(!is_strongly_almost_coherent(&tup(9, 2, 0, 4)).unwrap().0);
        assert!(is_strongly_almost_coherent(&tup(11, 3, 4, 2)).unwrap().0);
    }

    #[test]
    fn virtually_almost_coherent_examples() {
        assert!(is_virtually_almost_coherent(&tup(5, 2, 0, 1)).unwrap());
        assert!(!is_virtually_almost_coherent(&tup(9, 2, 0, 4)).unwrap());
        assert!(!is_virtually_almost_coherent(&tup(3, 1, 0, 1)).unwrap());
    }

    #[test]
    fn equivalence_holds_up_to_p10() {
        let report = equivalence_report(10);
        assert!(report.checked > 0);
        assert!(
            report.disagreements.is_empty(),
            "disagreements: {:?}",
            report.disagreements.iter().map(|e| e.tuple.to_string()).collect::<Vec<_>>()
        );
        let fig3 = report
            .entries
            .iter()
            .find(|e| e.tuple == tup(9, 2, 0, 4))
            .expect("(9,2,0,4) must be checked");
        assert!(!fig3.strongly && !fig3.virtually);
    }

    #[test]
    fn equivalence_vacuous_for_p1() {
        let report = equivalence_report(1);
        assert!(report.disagreements.is_empty());
    }

    #[test]
    fn predicates_are_mirror_invariant() {
        for t in all_tuples(9) {
            let Ok(walk) = build_walk(&t) else { continue };
            let m = t.mirror();
            assert_eq!(is_coherent(&t).unwrap(), is_coherent(&m).unwrap(), "{t}");
            if walk.delta_height() != 0 {
                assert_eq!(
                    is_strongly_almost_coherent(&t).unwrap().0,
                    is_strongly_almost_coherent(&m).unwrap().0,
                    "{t}"
                );
                assert_eq!(
                    is_virtually_almost_coherent(&t).unwrap(),
                    is_virtually_almost_coherent(&m).unwrap(),
                    "{t}"
                );
            }
        }
    }

    #[test]
    fn coherent_matches_cover_census() {
        for t in all_tuples(9) {
            let Ok(walk) = build_walk(&t) else { continue };
            if walk.delta_height() == 0 {
                continue;
            }
            let cover_total =
                extend_and_normalize(&walk).arc_census().unwrap().total_inconsistent();
            assert_eq!(is_coherent(&t).unwrap(), cover_total == 0, "{t}");
        }
    }
}
