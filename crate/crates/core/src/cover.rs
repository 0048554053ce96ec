//! The lifted beta curve in the universal cover of the torus.
//!
//! Intersection events are recorded as `[position, direction, side, height]`
//! four-tuples. A point where the lifted beta curve crosses the horizontal
//! line `y = height` is seen twice: once from the strip below the line (side
//! `Top`, positions in the top-edge frame of that strip) and once from the
//! strip above (side `Bottom`, positions in the bottom-edge frame). The two
//! frames differ by the gluing shift `s`. Bottom-frame positions are the
//! canonical x-coordinates on their line.
//!
//! The walk starts at `[0, +1, top, 0]`, follows the transition function
//! [`find_next`] until the curve closes up downstairs, and is then extended
//! over enough fundamental periods that a chosen family of lines is fully
//! crossed.

use serde::Serialize;

use crate::diagram::FourTuple;
use crate::geom;
use crate::{residue, Error, Result};

/// Vertical direction in which beta crosses alpha at an event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Dir {
    Up,
    Down,
}

impl Dir {
    pub fn sign(self) -> i64 {
        match self {
            Dir::Up => 1,
            Dir::Down => -1,
        }
    }
}

/// Which edge of a rectangle lift the event is expressed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    Top,
    Bottom,
}

impl Side {
    pub fn sign(self) -> i64 {
        match self {
            Side::Top => 1,
            Side::Bottom => -1,
        }
    }
}

/// One intersection-event record of the lifted walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgePoint {
    pub position: i64,
    pub direction: Dir,
    pub side: Side,
    pub height: i64,
}

impl EdgePoint {
    pub fn new(position: i64, direction: Dir, side: Side, height: i64) -> Self {
        EdgePoint { position, direction, side, height }
    }

    /// The `[position, direction, side, height]` sign encoding used by the
    /// `walk` CLI output.
    pub fn as_signs(&self) -> [i64; 4] {
        [self.position, self.direction.sign(), self.side.sign(), self.height]
    }
}

/// The transition function of the walk: given the current event, produce the
/// next one.
///
/// Branches, with `%` the nonnegative residue mod `p`:
/// - `(top, up) -> [pos+s, up, bottom, h]` and `(bottom, down) -> [pos-s,
///   down, top, h]` re-express the same crossing in the adjacent strip's
///   frame.
/// - `(top, down)`: the first `r` strands slant to `[pos+2q, down, bottom,
///   h-1]`; positions in `[r, r+2q)` bounce off a top rainbow to
///   `[2r+2q-1-2*(pos%p)+pos, up, top, h]`; the rest drop straight to
///   `[pos, down, bottom, h-1]`.
/// - `(bottom, up)`: positions in `[0, 2q)` bounce off a bottom rainbow to
///   `[2q-1-2*(pos%p)+pos, down, bottom, h]`; positions in `[2q, 2q+r)` rise
///   to `[pos-2q, up, top, h+1]`; the rest rise straight to `[pos, up, top,
///   h+1]`.
pub fn find_next(e: EdgePoint, t: &FourTuple) -> EdgePoint {
    let (p, q, r, s) = (t.p(), t.q(), t.r(), t.s());
    let pos = e.position;
    let m = residue(pos, p);
    match (e.side, e.direction) {
        (Side::Top, Dir::Up) => EdgePoint::new(pos + s, Dir::Up, Side::Bottom, e.height),
        (Side::Bottom, Dir::Down) => EdgePoint::new(pos - s, Dir::Down, Side::Top, e.height),
        (Side::Top, Dir::Down) => {
            if m <= r - 1 {
                EdgePoint::new(pos + 2 * q, Dir::Down, Side::Bottom, e.height - 1)
            } else if r <= m && m <= r + 2 * q - 1 {
                EdgePoint::new(2 * r + 2 * q - 1 - 2 * m + pos, Dir::Up, Side::Top, e.height)
            } else {
                EdgePoint::new(pos, Dir::Down, Side::Bottom, e.height - 1)
            }
        }
        (Side::Bottom, Dir::Up) => {
            if m <= 2 * q - 1 {
                EdgePoint::new(2 * q - 1 - 2 * m + pos, Dir::Down, Side::Bottom, e.height)
            } else if 2 * q <= m && m <= 2 * q + r - 1 {
                EdgePoint::new(pos - 2 * q, Dir::Up, Side::Top, e.height + 1)
            } else {
                EdgePoint::new(pos, Dir::Up, Side::Top, e.height + 1)
            }
        }
    }
}

/// The lifted beta walk: one closed traversal from [`build_walk`], or the
/// height-normalized multi-period extension from [`extend_and_normalize`].
#[derive(Debug, Clone)]
pub struct CoverWalk {
    tuple: FourTuple,
    entries: Vec<EdgePoint>,
    delta_height: i64,
    drift: i64,
    /// Events per closed traversal, excluding the repeated start (= 2p).
    period: usize,
    /// Number of recorded traversals.
    traversals: usize,
    /// Height range of the first traversal after normalization.
    first_min_height: i64,
    first_max_height: i64,
}

impl CoverWalk {
    pub fn tuple(&self) -> &FourTuple {
        &self.tuple
    }

    pub fn entries(&self) -> &[EdgePoint] {
        &self.entries
    }

    /// Net height change over one closed traversal; `|delta_height|` is the
    /// order of `H_1` of the ambient manifold.
    pub fn delta_height(&self) -> i64 {
        self.delta_height
    }

    /// Net position change over one closed traversal; always `0 mod p`.
    pub fn drift(&self) -> i64 {
        self.drift
    }

    pub fn traversals(&self) -> usize {
        self.traversals
    }

    /// Number of spin-c structures, `|delta_height|`.
    pub fn spin_structure_count(&self) -> Result<i64> {
        if self.delta_height == 0 {
            Err(Error::NotRationalHomologySphere)
        } else {
            Ok(self.delta_height.abs())
        }
    }

    /// The canonical fully covered lines, one per spin-c structure:
    /// `{0, 1, .., |d|-1}` when `delta_height > 0`, `{0, -1, .., -(|d|-1)}`
    /// when negative.
    pub fn class_lines(&self) -> Result<Vec<i64>> {
        let k = self.spin_structure_count()?;
        let sign = self.delta_height.signum();
        Ok((0..k).map(|j| sign * j).collect())
    }

    /// Index range of traversals whose height span can touch line `h`, or an
    /// error when the recorded extension misses part of that range.
    fn coverage_window(&self, h: i64) -> Result<(usize, usize)> {
        let d = self.delta_height;
        if d == 0 {
            // A horizontally periodic curve meets a line in its span
            // infinitely often; no finite record covers it.
            if h < self.first_min_height || h > self.first_max_height {
                return Ok((1, 0)); // empty window: zero crossings, covered
            }
            return Err(Error::LineNotCovered { line: h });
        }
        // Traversal i spans [first_min + i*d, first_max + i*d].
        let lo_num = h - self.first_max_height;
        let hi_num = h - self.first_min_height;
        let (i_min, i_max) = if d > 0 {
            (div_ceil(lo_num, d), div_floor(hi_num, d))
        } else {
            (div_ceil(hi_num, d), div_floor(lo_num, d))
        };
        if i_max < i_min {
            return Ok((1, 0)); // the line is never crossed
        }
        if i_min < 0 || i_max >= self.traversals as i64 {
            return Err(Error::LineNotCovered { line: h });
        }
        Ok((i_min as usize, i_max as usize))
    }

    /// Whether every crossing of line `h` lies inside the recorded extension.
    pub fn covers_line(&self, h: i64) -> bool {
        self.coverage_window(h).is_ok()
    }

    /// All crossings of the walk with horizontal lines, in walk order.
    ///
    /// A crossing is one identification pair of events; its `x` is the
    /// bottom-frame position. The trailing unpaired top event (the seed of the
    /// next traversal) is not a recorded crossing.
    pub fn crossings(&self) -> Vec<LineCrossing> {
        let p = self.tuple.p();
        let mut out = Vec::new();
        for (i, pair) in self.entries.windows(2).enumerate() {
            let (a, b) = (pair[0], pair[1]);
            let cross = match (a.side, a.direction, b.side) {
                (Side::Top, Dir::Up, Side::Bottom) => Some((i + 1, b)),
                (Side::Bottom, Dir::Down, Side::Top) => Some((i, a)),
                _ => None,
            };
            if let Some((walk_index, bottom)) = cross {
                debug_assert_eq!(a.height, b.height);
                out.push(LineCrossing {
                    walk_index,
                    x: bottom.position,
                    direction: a.direction,
                    line: bottom.height,
                    residue: residue(bottom.position, p),
                });
            }
        }
        out
    }

    /// Crossings of line `h` in walk order, or [`Error::LineNotCovered`].
    pub fn line_crossings(&self, h: i64) -> Result<Vec<LineCrossing>> {
        self.coverage_window(h)?;
        Ok(self.crossings().into_iter().filter(|c| c.line == h).collect())
    }

    /// The within-strip pieces linking consecutive crossings, in walk order.
    pub fn pieces(&self) -> Vec<ArcPiece> {
        let t = &self.tuple;
        let (p, q, r) = (t.p(), t.q(), t.r());
        let mut out = Vec::new();
        for (i, pair) in self.entries.windows(2).enumerate() {
            let (a, b) = (pair[0], pair[1]);
            let kind = match (a.side, a.direction) {
                (Side::Top, Dir::Up) | (Side::Bottom, Dir::Down) => continue,
                (Side::Bottom, Dir::Up) => {
                    let m = residue(a.position, p);
                    if m <= 2 * q - 1 {
                        PieceKind::BottomRainbow { pair_index: m.min(2 * q - 1 - m) }
                    } else {
                        PieceKind::StrandUp
                    }
                }
                (Side::Top, Dir::Down) => {
                    let m = residue(a.position, p);
                    if r <= m && m <= r + 2 * q - 1 {
                        PieceKind::TopRainbow { pair_index: (m - r).min(2 * q - 1 - (m - r)) }
                    } else {
                        PieceKind::StrandDown
                    }
                }
            };
            out.push(ArcPiece { kind, from_event: i, to_event: i + 1, from: a, to: b });
        }
        out
    }

    /// Half-plane arcs of line `h`: one per consecutive crossing pair.
    pub fn half_plane_arcs(&self, h: i64) -> Result<Vec<HalfPlaneArc>> {
        let crossings = self.line_crossings(h)?;
        let pieces = self.pieces();
        let mut arcs = Vec::new();
        for w in crossings.windows(2) {
            let (from, to) = (w[0], w[1]);
            let half = match from.direction {
                Dir::Up => Half::Upper,
                Dir::Down => Half::Lower,
            };
            debug_assert_ne!(from.x, to.x);
            let orientation = if from.x < to.x {
                Orientation::Rightward
            } else {
                Orientation::Leftward
            };
            let height_extent = geom::arc_height_extent(self.tuple(), &pieces, &from, &to, h);
            arcs.push(HalfPlaneArc { line: h, from, to, half, orientation, height_extent });
        }
        Ok(arcs)
    }

    /// Census of arc orientations per half-plane, aggregated over one line per
    /// spin-c class.
    pub fn arc_census(&self) -> Result<ArcCensus> {
        let lines = self.class_lines()?;
        let mut upper = DirectionCount::default();
        let mut lower = DirectionCount::default();
        let mut arcs = Vec::new();
        for &h in &lines {
            for arc in self.half_plane_arcs(h)? {
                let counter = match arc.half {
                    Half::Upper => &mut upper,
                    Half::Lower => &mut lower,
                };
                match arc.orientation {
                    Orientation::Rightward => counter.rightward += 1,
                    Orientation::Leftward => counter.leftward += 1,
                }
                arcs.push(arc);
            }
        }
        Ok(ArcCensus { lines, upper, lower, arcs })
    }
}

fn div_floor(a: i64, b: i64) -> i64 {
    // div_euclid is floor division only for positive divisors.
    let (a, b) = if b < 0 { (-a, -b) } else { (a, b) };
    a.div_euclid(b)
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -div_floor(-a, b)
}

/// One transversal crossing of the lifted beta curve with a horizontal line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LineCrossing {
    /// Index of the bottom-frame event of this crossing in the walk.
    pub walk_index: usize,
    /// Bottom-frame position: the x-coordinate on the line.
    pub x: i64,
    pub direction: Dir,
    pub line: i64,
    /// `x mod p`: which intersection point downstairs.
    pub residue: i64,
}

/// The combinatorial type of a within-strip piece of the walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PieceKind {
    StrandUp,
    StrandDown,
    /// Rainbow over the bottom edge of a strip, nesting index 0 = outermost.
    BottomRainbow { pair_index: i64 },
    /// Rainbow under the top edge of a strip.
    TopRainbow { pair_index: i64 },
}

/// A piece of the walk between two consecutive crossings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArcPiece {
    pub kind: PieceKind,
    pub from_event: usize,
    pub to_event: usize,
    pub from: EdgePoint,
    pub to: EdgePoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Half {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orientation {
    Rightward,
    Leftward,
}

/// An arc of the lifted beta curve cut off by one line, between consecutive
/// crossings in walk order.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfPlaneArc {
    pub line: i64,
    pub from: LineCrossing,
    pub to: LineCrossing,
    pub half: Half,
    pub orientation: Orientation,
    /// Exact maximal `|y - line|` excursion of the arc.
    pub height_extent: num_rational::Rational64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DirectionCount {
    pub rightward: usize,
    pub leftward: usize,
}

impl DirectionCount {
    pub fn minority(&self) -> usize {
        self.rightward.min(self.leftward)
    }

    /// Equal nonzero counts: either direction may be declared inconsistent.
    pub fn tie(&self) -> bool {
        self.rightward == self.leftward && self.rightward > 0
    }

    /// Directions that a tie-break may declare inconsistent.
    pub fn inconsistent_choices(&self) -> Vec<Orientation> {
        use std::cmp::Ordering::*;
        match self.rightward.cmp(&self.leftward) {
            Less => vec![Orientation::Rightward],
            Greater => vec![Orientation::Leftward],
            Equal if self.rightward == 0 => vec![],
            Equal => vec![Orientation::Rightward, Orientation::Leftward],
        }
    }
}

/// Inconsistent-arc census over the union of one lift per spin-c structure.
#[derive(Debug, Clone)]
pub struct ArcCensus {
    pub lines: Vec<i64>,
    pub upper: DirectionCount,
    pub lower: DirectionCount,
    pub arcs: Vec<HalfPlaneArc>,
}

impl ArcCensus {
    /// Total number of inconsistent arcs; independent of tie choices.
    pub fn total_inconsistent(&self) -> usize {
        self.upper.minority() + self.lower.minority()
    }

    pub fn arcs_in(&self, half: Half, orientation: Orientation) -> Vec<&HalfPlaneArc> {
        self.arcs
            .iter()
            .filter(|a| a.half == half && a.orientation == orientation)
            .collect()
    }
}

/// Follows the walk from `[0, +1, top, 0]` until the curve closes downstairs.
///
/// A connected beta curve visits all `2p` edge events before returning to the
/// start; an early return is reported as [`Error::DisconnectedBeta`].
pub fn build_walk(t: &FourTuple) -> Result<CoverWalk> {
    let p = t.p();
    let expected = (2 * p + 1) as usize;
    let start = EdgePoint::new(0, Dir::Up, Side::Top, 0);
    let mut entries = vec![start];
    loop {
        let next = find_next(*entries.last().unwrap(), t);
        entries.push(next);
        if next.side == Side::Top && residue(next.position, p) == 0 {
            debug_assert_eq!(next.direction, Dir::Up, "closure direction must match the start");
            break;
        }
        if entries.len() > expected {
            unreachable!("walk failed to close within one period");
        }
    }
    if entries.len() < expected {
        return Err(Error::DisconnectedBeta { visited: entries.len() - 1, expected: expected - 1 });
    }
    let last = *entries.last().unwrap();
    let delta_height = last.height - start.height;
    let drift = last.position - start.position;
    debug_assert_eq!(residue(drift, p), 0, "drift must vanish mod p");
    let (min_h, max_h) = height_range(&entries);
    Ok(CoverWalk {
        tuple: *t,
        entries,
        delta_height,
        drift,
        period: expected - 1,
        traversals: 1,
        first_min_height: min_h,
        first_max_height: max_h,
    })
}

fn height_range(entries: &[EdgePoint]) -> (i64, i64) {
    let min = entries.iter().map(|e| e.height).min().unwrap();
    let max = entries.iter().map(|e| e.height).max().unwrap();
    (min, max)
}

/// Extends a closed traversal over `iteration + 1` periods and shifts heights
/// so that the canonical class lines near `y = 0` are fully crossed.
///
/// `iteration` is `ceil((min-max)/delta)` for negative drops and
/// `ceil((max-min)/delta)` for positive, `0` when `delta = 0`. The shift
/// subtracts the first traversal's max height when `delta >= 0` and its min
/// height when `delta < 0`.
pub fn extend_and_normalize(walk: &CoverWalk) -> CoverWalk {
    let t = walk.tuple;
    let d = walk.delta_height;
    let (min_h, max_h) = (walk.first_min_height, walk.first_max_height);
    let iteration = if d < 0 {
        div_ceil(min_h - max_h, d)
    } else if d > 0 {
        div_ceil(max_h - min_h, d)
    } else {
        0
    };
    let mut entries = walk.entries[..=walk.period].to_vec();
    let target_len = (iteration as usize + 1) * walk.period + 1;
    while entries.len() < target_len {
        let next = find_next(*entries.last().unwrap(), &t);
        entries.push(next);
    }
    let shift = if d >= 0 { max_h } else { min_h };
    for e in &mut entries {
        e.height -= shift;
    }
    CoverWalk {
        tuple: t,
        entries,
        delta_height: d,
        drift: walk.drift,
        period: walk.period,
        traversals: iteration as usize + 1,
        first_min_height: min_h - shift,
        first_max_height: max_h - shift,
    }
}

/// [`build_walk`] followed by [`extend_and_normalize`].
pub fn extended_walk(t: &FourTuple) -> Result<CoverWalk> {
    Ok(extend_and_normalize(&build_walk(t)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::all_tuples;

    fn tup(p: i64, q: i64, r: i64, s: i64) -> FourTuple {
        FourTuple::new(p, q, r, s).unwrap()
    }

    fn ep(pos: i64, dir: i64, side: i64, h: i64) -> EdgePoint {
        EdgePoint::new(
            pos,
            if dir == 1 { Dir::Up } else { Dir::Down },
            if side == 1 { Side::Top } else { Side::Bottom },
            h,
        )
    }

    #[test]
    fn find_next_examples() {
        let t = tup(5, 2, 0, 1);
        assert_eq!(find_next(ep(0, 1, 1, 0), &t), ep(1, 1, -1, 0));
        assert_eq!(find_next(ep(1, 1, -1, 0), &t), ep(2, -1, -1, 0));
        assert_eq!(find_next(ep(-1, -1, 1, 0), &t), ep(-1, -1, -1, -1));
    }

    #[test]
    fn build_walk_golden_5201() {
        let walk = build_walk(&tup(5, 2, 0, 1)).unwrap();
        let expected: Vec<EdgePoint> = [
            (0, 1, 1, 0),
            (1, 1, -1, 0),
            (2, -1, -1, 0),
            (1, -1, 1, 0),
            (2, 1, 1, 0),
            (3, 1, -1, 0),
            (0, -1, -1, 0),
            (-1, -1, 1, 0),
            (-1, -1, -1, -1),
            (-2, -1, 1, -1),
            (-5, 1, 1, -1),
        ]
        .iter()
        .map(|&(a, b, c, d)| ep(a, b, c, d))
        .collect();
        assert_eq!(walk.entries(), &expected[..]);
        assert_eq!(walk.entries().len(), 11);
        assert_eq!(walk.delta_height(), -1);
        assert_eq!(walk.drift(), -5);
    }

    #[test]
    fn build_walk_unknot() {
        let walk = build_walk(&tup(1, 0, 0, 0)).unwrap();
        assert_eq!(walk.entries().len(), 3);
        assert_eq!(walk.delta_height(), 1);
    }

    #[test]
    fn build_walk_disconnected() {
        match build_walk(&tup(3, 1, 0, 0)) {
            Err(Error::DisconnectedBeta { visited, expected }) => {
                assert_eq!(visited, 4);
                assert_eq!(expected, 6);
            }
            other => panic!("expected DisconnectedBeta, got {other:?}"),
        }
    }

    #[test]
    fn extend_and_normalize_examples() {
        let w = extended_walk(&tup(5, 2, 0, 1)).unwrap();
        assert_eq!(w.traversals(), 2);
        assert_eq!(w.entries().len(), 21);
        assert_eq!(w.line_crossings(0).unwrap().len(), 5);

        let w = extended_walk(&tup(1, 0, 0, 0)).unwrap();
        assert_eq!(w.traversals(), 2);
        assert_eq!(w.line_crossings(0).unwrap().len(), 1);

        // delta = 0: no extension
        let w = extend_and_normalize(&build_walk(&tup(2, 1, 0, 0)).unwrap());
        assert_eq!(w.traversals(), 1);
    }

    #[test]
    fn line_crossings_examples() {
        let w = extended_walk(&tup(5, 2, 0, 1)).unwrap();
        let xs: Vec<i64> = w.line_crossings(0).unwrap().iter().map(|c| c.x).collect();
        assert_eq!(xs, vec![-1, -4, -3, -2, -5]);
        let mut residues: Vec<i64> =
            w.line_crossings(0).unwrap().iter().map(|c| c.residue).collect();
        residues.sort_unstable();
        assert_eq!(residues, vec![0, 1, 2, 3, 4]);

        let w = extended_walk(&tup(3, 1, 0, 1)).unwrap();
        let xs: Vec<i64> = w.line_crossings(0).unwrap().iter().map(|c| c.x).collect();
        assert_eq!(xs, vec![-1, -2, -3]);
    }

    #[test]
    fn spin_structure_count_examples() {
        assert_eq!(build_walk(&tup(5, 2, 0, 1)).unwrap().spin_structure_count().unwrap(), 1);
        assert_eq!(build_walk(&tup(3, 1, 0, 1)).unwrap().spin_structure_count().unwrap(), 1);
        assert!(matches!(
            build_walk(&tup(2, 1, 0, 0)).unwrap().spin_structure_count(),
            Err(Error::NotRationalHomologySphere)
        ));
    }

    #[test]
    fn half_plane_arcs_examples() {
        let w = extended_walk(&tup(5, 2, 0, 1)).unwrap();
        let arcs = w.half_plane_arcs(0).unwrap();
        let summary: Vec<(Half, Orientation, i64, i64)> =
            arcs.iter().map(|a| (a.half, a.orientation, a.from.x, a.to.x)).collect();
        assert_eq!(
            summary,
            vec![
                (Half::Lower, Orientation::Leftward, -1, -4),
                (Half::Upper, Orientation::Rightward, -4, -3),
                (Half::Lower, Orientation::Rightward, -3, -2),
                (Half::Upper, Orientation::Leftward, -2, -5),
            ]
        );

        let w = extended_walk(&tup(3, 1, 0, 1)).unwrap();
        let arcs = w.half_plane_arcs(0).unwrap();
        let summary: Vec<(Half, Orientation, i64, i64)> =
            arcs.iter().map(|a| (a.half, a.orientation, a.from.x, a.to.x)).collect();
        assert_eq!(
            summary,
            vec![
                (Half::Lower, Orientation::Leftward, -1, -2),
                (Half::Upper, Orientation::Leftward, -2, -3),
            ]
        );

        let w = extended_walk(&tup(1, 0, 0, 0)).unwrap();
        assert!(w.half_plane_arcs(0).unwrap().is_empty());
    }

    #[test]
    fn arc_census_examples() {
        let w = extended_walk(&tup(5, 2, 0, 1)).unwrap();
        let census = w.arc_census().unwrap();
        assert_eq!((census.upper.rightward, census.upper.leftward), (1, 1));
        assert_eq!((census.lower.rightward, census.lower.leftward), (1, 1));
        assert_eq!(census.total_inconsistent(), 2);

        let w = extended_walk(&tup(9, 2, 0, 4)).unwrap();
        assert_eq!(w.arc_census().unwrap().total_inconsistent(), 4);

        let w = extended_walk(&tup(3, 1, 0, 1)).unwrap();
        assert_eq!(w.arc_census().unwrap().total_inconsistent(), 0);
    }

    #[test]
    fn closed_traversal_visits_every_event_once() {
        for t in all_tuples(10) {
            let Ok(walk) = build_walk(&t) else { continue };
            assert_eq!(walk.entries().len(), 2 * t.p() as usize + 1, "length for {t}");
            let mut seen = std::collections::HashSet::new();
            for e in &walk.entries()[..walk.entries().len() - 1] {
                assert!(
                    seen.insert((residue(e.position, t.p()), e.side)),
                    "event revisited in {t}"
                );
            }
            assert_eq!(residue(walk.drift(), t.p()), 0, "drift mod p for {t}");
        }
    }

    #[test]
    fn class_lines_cover_all_residues_once() {
        for t in all_tuples(10) {
            let Ok(base) = build_walk(&t) else { continue };
            if base.delta_height() == 0 {
                continue;
            }
            let w = extend_and_normalize(&base);
            let mut seen = std::collections::HashSet::new();
            let mut total = 0usize;
            for h in w.class_lines().unwrap() {
                let crossings = w.line_crossings(h).unwrap();
                assert!(crossings.len() % 2 == 1, "even class size for {t} on line {h}");
                total += crossings.len();
                for c in crossings {
                    assert!(seen.insert(c.residue), "residue {} repeated for {t}", c.residue);
                }
            }
            assert_eq!(total, t.p() as usize, "class sizes must sum to p for {t}");
        }
    }

    #[test]
    fn arcs_stay_strictly_on_one_side() {
        for t in all_tuples(9) {
            let Ok(base) = build_walk(&t) else { continue };
            if base.delta_height() == 0 {
                continue;
            }
            let w = extend_and_normalize(&base);
            for h in w.class_lines().unwrap() {
                for arc in w.half_plane_arcs(h).unwrap() {
                    for e in &w.entries()[arc.from.walk_index + 1..arc.to.walk_index] {
                        match arc.half {
                            Half::Upper => assert!(e.height >= h),
                            Half::Lower => assert!(e.height <= h),
                        }
                    }
                    assert!(arc.height_extent > num_rational::Rational64::from_integer(0));
                }
            }
        }
    }

    #[test]
    fn total_two_census_means_one_inconsistent_arc_per_half_plane() {
        for t in all_tuples(10) {
            let Ok(base) = build_walk(&t) else { continue };
            if base.delta_height() == 0 {
                continue;
            }
            let census = extend_and_normalize(&base).arc_census().unwrap();
            if census.total_inconsistent() == 2 {
                assert_eq!(census.upper.minority(), 1, "{t}");
                assert_eq!(census.lower.minority(), 1, "{t}");
                // The height lemma: each inconsistent arc has extent < 1.
                for choice in census.upper.inconsistent_choices() {
                    for arc in census.arcs_in(Half::Upper, choice) {
                        assert!(arc.height_extent < num_rational::Rational64::from_integer(1));
                    }
                }
                for choice in census.lower.inconsistent_choices() {
                    for arc in census.arcs_in(Half::Lower, choice) {
                        assert!(arc.height_extent < num_rational::Rational64::from_integer(1));
                    }
                }
            }
        }
    }
}
