//! Chain vectors with U-power bookkeeping, for filtered changes of basis.
//!
//! A term `(g, shift)` is the element `U^shift * [g, 0, A(g)]`; it sits at
//! filtration `(-shift, A(g) - shift)` and Maslov grading `M(g) - 2*shift`.
//! Vectors are mod-2 sets of terms, kept Maslov-homogeneous.

use std::collections::BTreeSet;

use crate::{Error, Result};

/// One spin-c class of a knot complex, re-indexed locally.
#[derive(Debug, Clone)]
pub struct ClassComplex {
    /// Global generator ids in local order.
    pub global_ids: Vec<usize>,
    pub alexander: Vec<i64>,
    pub maslov: Vec<i64>,
    /// Components `(from, to, n_w, n_z)` in local indices.
    pub components: Vec<(usize, usize, u32, u32)>,
}

impl ClassComplex {
    pub fn from_complex(complex: &crate::floer::KnotComplex, class: usize) -> ClassComplex {
        let members: Vec<usize> =
            complex.generators.iter().filter(|g| g.spin_class == class).map(|g| g.id).collect();
        let local: std::collections::BTreeMap<usize, usize> =
            members.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let alexander = members.iter().map(|&g| complex.generators[g].alexander).collect();
        let maslov = members.iter().map(|&g| complex.generators[g].maslov).collect();
        let components = complex
            .components
            .iter()
            .filter(|c| local.contains_key(&c.from))
            .map(|c| (local[&c.from], local[&c.to], c.n_w, c.n_z))
            .collect();
        ClassComplex { global_ids: members, alexander, maslov, components }
    }

    pub fn len(&self) -> usize {
        self.global_ids.len()
    }

    /// Differential of a single term.
    pub fn boundary_term(&self, term: Term) -> ModVec {
        let mut out = ModVec::zero();
        for &(from, to, n_w, _) in &self.components {
            if from == term.0 {
                out.toggle((to, term.1 + n_w as i64));
            }
        }
        out
    }

    pub fn boundary(&self, v: &ModVec) -> ModVec {
        let mut out = ModVec::zero();
        for &t in &v.terms {
            out.xor_assign(&self.boundary_term(t));
        }
        out
    }

    /// Maslov grading of a term.
    pub fn term_maslov(&self, term: Term) -> i64 {
        self.maslov[term.0] - 2 * term.1
    }

    /// j-filtration (Alexander level) of a term.
    pub fn term_alexander(&self, term: Term) -> i64 {
        self.alexander[term.0] - term.1
    }

    /// Common Maslov grading of a homogeneous vector.
    pub fn vector_maslov(&self, v: &ModVec) -> Result<i64> {
        let mut grades = v.terms.iter().map(|&t| self.term_maslov(t));
        let first = grades.next().ok_or_else(|| {
            Error::DecompositionFailed("empty vector has no Maslov grading".into())
        })?;
        if grades.all(|m| m == first) {
            Ok(first)
        } else {
            Err(Error::DecompositionFailed("vector is not Maslov-homogeneous".into()))
        }
    }

    /// j-filtration of a vector: the maximum over its terms.
    pub fn vector_alexander(&self, v: &ModVec) -> i64 {
        v.terms.iter().map(|&t| self.term_alexander(t)).max().expect("nonempty vector")
    }
}

pub type Term = (usize, i64);

/// A mod-2 set of U-shifted generators.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModVec {
    pub terms: BTreeSet<Term>,
}

impl ModVec {
    pub fn zero() -> ModVec {
        ModVec { terms: BTreeSet::new() }
    }

    pub fn generator(g: usize) -> ModVec {
        ModVec { terms: [(g, 0)].into() }
    }

    pub fn from_terms(terms: &[Term]) -> ModVec {
        let mut v = ModVec::zero();
        for &t in terms {
            v.toggle(t);
        }
        v
    }

    pub fn toggle(&mut self, term: Term) {
        if !self.terms.remove(&term) {
            self.terms.insert(term);
        }
    }

    pub fn xor_assign(&mut self, other: &ModVec) {
        for &t in &other.terms {
            self.toggle(t);
        }
    }

    pub fn shifted(&self, by: i64) -> ModVec {
        ModVec { terms: self.terms.iter().map(|&(g, s)| (g, s + by)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Generators appearing in the vector.
    pub fn support(&self) -> BTreeSet<usize> {
        self.terms.iter().map(|&(g, _)| g).collect()
    }
}

/// A triangular module basis: each vector owns a pivot generator that appears
/// in no later vector's pivot position, so expansion by back-substitution
/// terminates.
#[derive(Debug, Clone)]
pub struct ModBasis {
    pub vectors: Vec<ModVec>,
    /// Pivot generator of each vector; the pivot term has shift 0.
    pub pivots: Vec<usize>,
}

impl ModBasis {
    pub fn new(vectors: Vec<ModVec>, pivots: Vec<usize>) -> Result<ModBasis> {
        let n = vectors.len();
        let mut seen = BTreeSet::new();
        for (v, &p) in vectors.iter().zip(&pivots) {
            if !v.terms.contains(&(p, 0)) {
                return Err(Error::DecompositionFailed(format!(
                    "pivot {p} not present with shift 0 in its basis vector"
                )));
            }
            if !seen.insert(p) {
                return Err(Error::DecompositionFailed(format!("duplicate pivot {p}")));
            }
        }
        if seen.len() != n {
            return Err(Error::DecompositionFailed("pivot count mismatch".into()));
        }
        Ok(ModBasis { vectors, pivots })
    }

    /// Expresses `target` as a sum of U-shifted basis vectors; returns the
    /// coefficients `(basis index, shift)`.
    pub fn express(&self, target: &ModVec) -> Result<Vec<(usize, i64)>> {
        let mut rest = target.clone();
        let mut coeffs = Vec::new();
        let mut guard = 0usize;
        while let Some(&(g, shift)) = rest.terms.iter().next() {
            let idx = self
                .pivots
                .iter()
                .position(|&p| p == g)
                .ok_or_else(|| {
                    Error::DecompositionFailed(format!("no basis vector with pivot {g}"))
                })?;
            rest.xor_assign(&self.vectors[idx].shifted(shift));
            coeffs.push((idx, shift));
            guard += 1;
            if guard > 10_000 {
                return Err(Error::DecompositionFailed(
                    "basis expansion does not terminate; basis is not triangular".into(),
                ));
            }
        }
        // Cancel repeated coefficients mod 2.
        coeffs.sort_unstable();
        let mut reduced: Vec<(usize, i64)> = Vec::new();
        for c in coeffs {
            if reduced.last() == Some(&c) {
                reduced.pop();
            } else {
                reduced.push(c);
            }
        }
        Ok(reduced)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansion_terminates_and_cancels() {
        // basis: v0 = g0 + g1, v1 = g1; target g0 = v0 + v1
        let basis = ModBasis::new(
            vec![ModVec::from_terms(&[(0, 0), (1, 0)]), ModVec::generator(1)],
            vec![0, 1],
        )
        .unwrap();
        let coeffs = basis.express(&ModVec::generator(0)).unwrap();
        assert_eq!(coeffs, vec![(0, 0), (1, 0)]);
        // U-shifted target
        let coeffs = basis.express(&ModVec::from_terms(&[(0, 2), (1, 2)])).unwrap();
        assert_eq!(coeffs, vec![(0, 2)]);
    }
}
