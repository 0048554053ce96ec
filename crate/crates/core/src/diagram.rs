//! Four-tuple encoding of standard (1,1) diagrams.
//!
//! A standard diagram is drawn on a rectangle whose top and bottom edges are
//! both the alpha curve: `p` intersection points per edge, `q` nested rainbow
//! arcs at each edge, `r` strands slanting left, and a vertical gluing that
//! identifies the `i`-th point on the top with the `(i+s)`-th on the bottom.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::{residue, Error, Result};

/// The `(p,q,r,s)` encoding of a standard (1,1) diagram.
///
/// Invariants: `p >= 1`, `q, r >= 0`, `2q + r <= p`, `0 <= s < p`.
/// Connectedness of the beta curve is *not* part of validity; it is decided by
/// [`crate::cover::build_walk`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FourTuple {
    p: i64,
    q: i64,
    r: i64,
    s: i64,
}

impl FourTuple {
    /// Validates the static constraints and returns the tuple.
    ///
    /// `s` must already lie in `[0,p)`; out-of-range shifts are reported as
    /// [`Error::SOutOfRange`] so the caller can choose [`FourTuple::normalized`]
    /// instead.
    pub fn new(p: i64, q: i64, r: i64, s: i64) -> Result<Self> {
        if p < 1 {
            return Err(Error::ConstraintViolation {
                constraint: "p >= 1".into(),
                value: p,
            });
        }
        if q < 0 {
            return Err(Error::ConstraintViolation {
                constraint: "q >= 0".into(),
                value: q,
            });
        }
        if r < 0 {
            return Err(Error::ConstraintViolation {
                constraint: "r >= 0".into(),
                value: r,
            });
        }
        if 2 * q + r > p {
            return Err(Error::ConstraintViolation {
                constraint: format!("2q + r <= p (p={p})"),
                value: 2 * q + r,
            });
        }
        if s < 0 || s >= p {
            return Err(Error::SOutOfRange { s, p });
        }
        Ok(FourTuple { p, q, r, s })
    }

    /// Like [`FourTuple::new`] but reduces `s_raw` to its nonnegative residue
    /// mod `p` first (a Dehn twist along alpha, preserving the knot).
    pub fn normalized(p: i64, q: i64, r: i64, s_raw: i64) -> Result<Self> {
        if p < 1 {
            return Err(Error::ConstraintViolation {
                constraint: "p >= 1".into(),
                value: p,
            });
        }
        Self::new(p, q, r, residue(s_raw, p))
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn s(&self) -> i64 {
        self.s
    }

    /// The mirror diagram: `r -> p - 2q - r`, `s -> (2q - s) mod p`.
    ///
    /// Reflection in the horizontal direction; an involution after
    /// normalization of `s`.
    pub fn mirror(&self) -> FourTuple {
        FourTuple::normalized(self.p, self.q, self.p - 2 * self.q - self.r, 2 * self.q - self.s)
            .expect("mirror of a valid tuple is valid")
    }

    /// Lexicographically smaller of `self` and `self.mirror()` under the
    /// `(p,q,r,s)` ordering; deduplicates mirror pairs.
    pub fn canonical_rep(&self) -> FourTuple {
        let m = self.mirror();
        if m < *self {
            m
        } else {
            *self
        }
    }

    /// The nested foot pairings of the rainbow arcs at each edge.
    pub fn rainbow_pairing(&self) -> RainbowPairing {
        let q = self.q;
        let r = self.r;
        let bottom = (0..q).map(|j| (j, 2 * q - 1 - j)).collect();
        let top = (0..q).map(|j| (r + j, 2 * r + 2 * q - 1 - (r + j))).collect();
        RainbowPairing { bottom, top, q, r }
    }

    pub fn as_array(&self) -> [i64; 4] {
        [self.p, self.q, self.r, self.s]
    }
}

impl fmt::Display for FourTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.p, self.q, self.r, self.s)
    }
}

impl FromStr for FourTuple {
    type Err = Error;

    /// Parses the text form `p,q,r,s` (comma-separated, optional whitespace).
    fn from_str(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Parse {
                line: 0,
                msg: format!("expected four comma-separated integers, got {text:?}"),
            });
        }
        let mut vals = [0i64; 4];
        for (slot, part) in vals.iter_mut().zip(&parts) {
            *slot = part.parse().map_err(|_| Error::Parse {
                line: 0,
                msg: format!("not an integer: {part:?}"),
            })?;
        }
        FourTuple::new(vals[0], vals[1], vals[2], vals[3])
    }
}

/// Foot pairings of the rainbow arcs, indexed on each edge's own frame.
///
/// Bottom pairs are `(j, 2q-1-j)` in bottom-edge coordinates, nesting around
/// the w basepoint; top pairs are `(r+j, 2r+2q-1-(r+j))` in top-edge
/// coordinates, nesting around z. Pair index `j = 0` is the outermost arc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RainbowPairing {
    pub bottom: Vec<(i64, i64)>,
    pub top: Vec<(i64, i64)>,
    q: i64,
    r: i64,
}

impl RainbowPairing {
    /// Center of the bottom (w) nest in bottom-edge coordinates.
    pub fn w_nest_center(&self) -> Rational64 {
        Rational64::new(2 * self.q - 1, 2)
    }

    /// Center of the top (z) nest in top-edge coordinates.
    pub fn z_nest_center(&self) -> Rational64 {
        Rational64::new(2 * (self.r + self.q) - 1, 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(p: i64, q: i64, r: i64, s: i64) -> FourTuple {
        FourTuple::new(p, q, r, s).unwrap()
    }

    #[test]
    fn validate_accepts_table_entries() {
        assert!(FourTuple::new(5, 2, 0, 1).is_ok());
        assert!(FourTuple::new(5, 2, 0, 4).is_ok());
    }

    #[test]
    fn validate_rejects_overfull_nests() {
        match FourTuple::new(5, 3, 0, 0) {
            Err(Error::ConstraintViolation { value, .. }) => assert_eq!(value, 6),
            other => panic!("expected ConstraintViolation, got {other:?}"),
        }
    }

    #[test]
    fn validate_rejects_out_of_range_shift() {
        assert!(matches!(
            FourTuple::new(7, 3, 0, 9),
            Err(Error::SOutOfRange { s: 9, p: 7 })
        ));
    }

    #[test]
    fn normalize_reduces_shift() {
        assert_eq!(FourTuple::normalized(7, 3, 0, 9).unwrap(), t(7, 3, 0, 2));
        assert_eq!(FourTuple::normalized(5, 2, 0, -1).unwrap(), t(5, 2, 0, 4));
        assert_eq!(FourTuple::normalized(5, 2, 0, 1).unwrap(), t(5, 2, 0, 1));
    }

    #[test]
    fn mirror_examples() {
        assert_eq!(t(5, 2, 0, 1).mirror(), t(5, 2, 1, 3));
        assert_eq!(t(7, 3, 0, 1).mirror(), t(7, 3, 1, 5));
    }

    #[test]
    fn mirror_is_an_involution() {
        for tu in all_valid_tuples(9) {
            assert_eq!(tu.mirror().mirror(), tu, "mirror^2 != id for {tu}");
            assert_eq!(tu.mirror().p(), tu.p());
            assert_eq!(tu.mirror().q(), tu.q());
        }
    }

    #[test]
    fn canonical_rep_examples() {
        assert_eq!(t(5, 2, 0, 4).mirror(), t(5, 2, 1, 0));
        assert_eq!(t(5, 2, 0, 4).canonical_rep(), t(5, 2, 0, 4));
        assert_eq!(t(1, 0, 0, 0).mirror(), t(1, 0, 1, 0));
        assert_eq!(t(1, 0, 0, 0).canonical_rep(), t(1, 0, 0, 0));
    }

    #[test]
    fn canonical_rep_is_mirror_invariant() {
        for tu in all_valid_tuples(9) {
            assert_eq!(tu.canonical_rep(), tu.mirror().canonical_rep());
        }
    }

    #[test]
    fn rainbow_pairing_examples() {
        let p1 = t(5, 2, 0, 1).rainbow_pairing();
        assert_eq!(p1.bottom, vec![(0, 3), (1, 2)]);
        assert_eq!(p1.top, vec![(0, 3), (1, 2)]);

        let p2 = t(7, 3, 1, 0).rainbow_pairing();
        assert_eq!(p2.bottom, vec![(0, 5), (1, 4), (2, 3)]);
        assert_eq!(p2.top, vec![(1, 6), (2, 5), (3, 4)]);

        let p3 = t(4, 0, 2, 1).rainbow_pairing();
        assert!(p3.bottom.is_empty());
        assert!(p3.top.is_empty());
    }

    #[test]
    fn rainbow_pairs_nest_strictly() {
        for tu in all_valid_tuples(10) {
            let pairing = tu.rainbow_pairing();
            for pairs in [&pairing.bottom, &pairing.top] {
                for (i, &(a, b)) in pairs.iter().enumerate() {
                    for &(c, d) in &pairs[i + 1..] {
                        // inner pair strictly between the outer pair's feet
                        assert!(a < c && d < b, "pairs interleave: ({a},{b}) vs ({c},{d})");
                    }
                }
            }
        }
    }

    #[test]
    fn parse_round_trip() {
        let tu: FourTuple = " 7, 3, 0, 2 ".parse().unwrap();
        assert_eq!(tu, t(7, 3, 0, 2));
        assert_eq!(tu.to_string().parse::<FourTuple>().unwrap(), tu);
        assert!("1,2,3".parse::<FourTuple>().is_err());
        assert!("a,b,c,d".parse::<FourTuple>().is_err());
    }

    fn all_valid_tuples(max_p: i64) -> Vec<FourTuple> {
        super::all_tuples(max_p)
    }
}

/// Every valid tuple with `p <= max_p`, in lexicographic `(p,q,r,s)` order.
pub fn all_tuples(max_p: i64) -> Vec<FourTuple> {
    let mut out = Vec::new();
    for p in 1..=max_p {
        for q in 0..=(p / 2) {
            for r in 0..=(p - 2 * q) {
                for s in 0..p {
                    out.push(FourTuple { p, q, r, s });
                }
            }
        }
    }
    out
}
