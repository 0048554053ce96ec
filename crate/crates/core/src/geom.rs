//! Exact rational geometry shared by the cover census and the planar
//! realization.
//!
//! All drawings live in the sheared frame where the crossing at bottom-frame
//! position `x` on line `y = h` sits at the point `(x, h)`, a strand from
//! bottom position `b` to top position `t` of one strip is the straight
//! segment `(b, h) -> (t + s, h + 1)`, and points at fractional height `eta`
//! inside a strip pick up a horizontal shear of `s * eta`. In this frame the
//! deck transformations are the pure translations `(x, y) -> (x + m*p, y +
//! j)`, so basepoint lifts form an honest lattice.
//!
//! Vertical clearances are chosen so nothing touches: rainbows of nesting
//! index `j` (0 = outermost) reach `(2q - j) / (8q^2)` into their strip,
//! strictly below the `1/(2q)` level where slanted strands first enter the
//! nest's x-range, and basepoints sit at inset `1/(16q)`, strictly inside the
//! innermost rainbow.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Signed, Zero};

use crate::cover::{ArcPiece, LineCrossing, PieceKind};
use crate::diagram::FourTuple;

/// Vertical reach of the rainbow with nesting index `pair_index` into its
/// strip (`0 < reach <= 1/(4q)`).
pub fn rainbow_reach(q: i64, pair_index: i64) -> Rational64 {
    debug_assert!(q >= 1 && (0..q).contains(&pair_index));
    Rational64::new(2 * q - pair_index, 8 * q * q)
}

/// Vertical inset of the basepoints from their edge (`1/(16q)`).
pub fn basepoint_inset(q: i64) -> Rational64 {
    debug_assert!(q >= 1);
    Rational64::new(1, 16 * q)
}

/// Exact maximal `|y - h|` excursion of the walk arc between two consecutive
/// crossings of line `h`.
pub fn arc_height_extent(
    t: &FourTuple,
    pieces: &[ArcPiece],
    from: &LineCrossing,
    to: &LineCrossing,
    h: i64,
) -> Rational64 {
    let q = t.q();
    let (start, end) = (crossing_pair_end(from), crossing_pair_start(to));
    let mut extent = Rational64::zero();
    for piece in pieces {
        if piece.from_event < start || piece.to_event > end {
            continue;
        }
        let line_of = |height: i64| Rational64::from_integer(height - h);
        let candidates: [Rational64; 2] = match piece.kind {
            PieceKind::StrandUp | PieceKind::StrandDown => {
                [line_of(piece.from.height), line_of(piece.to.height)]
            }
            PieceKind::BottomRainbow { pair_index } => {
                let reach = rainbow_reach(q, pair_index);
                [line_of(piece.from.height) + reach, line_of(piece.from.height)]
            }
            PieceKind::TopRainbow { pair_index } => {
                let reach = rainbow_reach(q, pair_index);
                [line_of(piece.from.height) - reach, line_of(piece.from.height)]
            }
        };
        for c in candidates {
            let a = c.abs();
            if a > extent {
                extent = a;
            }
        }
    }
    extent
}

/// Index of the last event of a crossing's identification pair.
pub fn crossing_pair_end(c: &LineCrossing) -> usize {
    match c.direction {
        crate::cover::Dir::Up => c.walk_index,
        crate::cover::Dir::Down => c.walk_index + 1,
    }
}

/// Index of the first event of a crossing's identification pair.
pub fn crossing_pair_start(c: &LineCrossing) -> usize {
    match c.direction {
        crate::cover::Dir::Up => c.walk_index - 1,
        crate::cover::Dir::Down => c.walk_index,
    }
}

/// A point with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoint {
    pub x: BigRational,
    pub y: BigRational,
}

impl RatPoint {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        RatPoint { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        RatPoint { x: big(x), y: big(y) }
    }
}

pub fn big(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn big_r64(v: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*v.numer()), BigInt::from(*v.denom()))
}

/// Twice the signed area of a closed polygon (counterclockwise positive).
pub fn signed_area2(ring: &[RatPoint]) -> BigRational {
    let mut acc = BigRational::zero();
    for i in 0..ring.len() {
        let a = &ring[i];
        let b = &ring[(i + 1) % ring.len()];
        acc += &a.x * &b.y - &b.x * &a.y;
    }
    acc
}

/// Sign of the cross product `(b - a) x (c - a)`: positive when `c` lies to
/// the left of the directed line `a -> b`.
pub fn orient(a: &RatPoint, b: &RatPoint, c: &RatPoint) -> i32 {
    let v = (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x);
    num_sign(&v)
}

fn num_sign(v: &BigRational) -> i32 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// Where a segment crosses the horizontal line `y = row`, if it does so
/// transversally (neither endpoint on the row).
///
/// Returns the crossing x and the sign of the crossing (+1 upward, -1
/// downward). Endpoint-on-row contact is reported as `Err(())` so callers can
/// treat it as a degeneracy.
pub fn segment_row_crossing(
    a: &RatPoint,
    b: &RatPoint,
    row: &BigRational,
) -> std::result::Result<Option<(BigRational, i32)>, ()> {
    let (ya, yb) = (&a.y, &b.y);
    if ya == row || yb == row {
        // Endpoint contact, including pieces collinear with the row.
        return Err(());
    }
    let below_a = ya < row;
    let below_b = yb < row;
    if below_a == below_b {
        return Ok(None);
    }
    // x = xa + (xb - xa) * (row - ya) / (yb - ya)
    let tnum = row - ya;
    let tden = yb - ya;
    let x = &a.x + (&b.x - &a.x) * tnum / &tden;
    Ok(Some((x, if below_a { 1 } else { -1 })))
}

/// Whether two closed segments intersect anywhere.
pub fn segments_intersect(a1: &RatPoint, a2: &RatPoint, b1: &RatPoint, b2: &RatPoint) -> bool {
    let d1 = orient(b1, b2, a1);
    let d2 = orient(b1, b2, a2);
    let d3 = orient(a1, a2, b1);
    let d4 = orient(a1, a2, b2);
    if ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)) {
        return true;
    }
    (d1 == 0 && on_segment(b1, b2, a1))
        || (d2 == 0 && on_segment(b1, b2, a2))
        || (d3 == 0 && on_segment(a1, a2, b1))
        || (d4 == 0 && on_segment(a1, a2, b2))
}

/// Whether `p` lies on the closed segment `a..b`, assuming collinearity.
pub fn on_segment(a: &RatPoint, b: &RatPoint, p: &RatPoint) -> bool {
    let (xmin, xmax) = minmax(&a.x, &b.x);
    let (ymin, ymax) = minmax(&a.y, &b.y);
    &p.x >= xmin && &p.x <= xmax && &p.y >= ymin && &p.y <= ymax
}

fn minmax<'a>(a: &'a BigRational, b: &'a BigRational) -> (&'a BigRational, &'a BigRational) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Whether `p` lies on the boundary of the polygon `ring` (closed polyline).
pub fn point_on_ring(ring: &[RatPoint], p: &RatPoint) -> bool {
    for i in 0..ring.len() {
        let a = &ring[i];
        let b = &ring[(i + 1) % ring.len()];
        if orient(a, b, p) == 0 && on_segment(a, b, p) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn area_sign_distinguishes_orientation() {
        let ccw = vec![
            RatPoint::from_ints(0, 0),
            RatPoint::from_ints(1, 0),
            RatPoint::from_ints(1, 1),
        ];
        assert!(signed_area2(&ccw).is_positive());
        let cw: Vec<_> = ccw.iter().rev().cloned().collect();
        assert!(signed_area2(&cw).is_negative());
    }

    #[test]
    fn row_crossing_signs() {
        let a = RatPoint::from_ints(0, -1);
        let b = RatPoint::from_ints(2, 1);
        let row = BigRational::new(BigInt::from(1), BigInt::from(2));
        let (x, sign) = segment_row_crossing(&a, &b, &row).unwrap().unwrap();
        assert_eq!(sign, 1);
        assert_eq!(x, BigRational::new(BigInt::from(3), BigInt::from(2)));
        assert!(segment_row_crossing(&b, &a, &row).unwrap().unwrap().1 == -1);
        assert!(segment_row_crossing(&a, &b, &big(5)).unwrap().is_none());
        assert!(segment_row_crossing(&a, &b, &big(1)).is_err());
    }

    #[test]
    fn rainbow_reach_is_nested_and_clears_strands() {
        for q in 1..8 {
            for j in 0..q {
                let reach = rainbow_reach(q, j);
                assert!(reach < Rational64::new(1, 2 * q));
                if j > 0 {
                    assert!(reach < rainbow_reach(q, j - 1));
                }
                assert!(basepoint_inset(q) < rainbow_reach(q, q - 1));
            }
        }
    }
}
