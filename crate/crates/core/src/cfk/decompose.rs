//! Constructive splitting of the exceptional class into a staircase and a box
//! with length one.
//!
//! The change of basis follows the sufficiency proof: locate the two
//! inconsistent arcs on their line, split on whether they share an end point
//! (with three sub-cases on the neighbors d, e relative to the interval
//! [b, c]) or are joined by two arcs, form the box from the prescribed
//! mod-2 sums, and verify that the complement is a staircase and no
//! differential crosses the blocks.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cfk::modvec::{ClassComplex, ModBasis, ModVec};
use crate::cfk::recognize::{
    recognize_box, recognize_staircase, Block, BoxData, StaircaseData,
};
use crate::cover::{CoverWalk, Half, HalfPlaneArc, LineCrossing};
use crate::floer::KnotComplex;
use crate::{Error, Result};

/// One recorded basis vector: mod-2 sum of U-shifted generators, by global
/// generator id.
#[derive(Debug, Clone, Serialize)]
pub struct BasisVector {
    pub terms: Vec<(usize, i64)>,
    pub label: String,
}

/// The verified staircase-plus-box decomposition of the exceptional class.
#[derive(Debug, Clone, Serialize)]
pub struct Decomposition {
    pub spin_class: usize,
    pub staircase: StaircaseData,
    pub box_part: BoxData,
    /// The filtered basis: first the four box vectors, then the staircase
    /// vectors, in block order.
    pub basis: Vec<BasisVector>,
    /// Which witness configuration produced the box.
    pub configuration: BoxConfiguration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoxConfiguration {
    SharedEndpointBothInside,
    SharedEndpointBothOutside,
    SharedEndpointSuccessorInside,
    SharedEndpointPredecessorInside,
    NoSharedEndpoint,
}

/// Splits the exceptional class of a virtually almost coherent diagram.
pub fn decompose_staircase_plus_box(
    complex: &KnotComplex,
    walk: &CoverWalk,
) -> Result<Decomposition> {
    let census = walk.arc_census()?;
    if census.total_inconsistent() != 2 {
        return Err(Error::DecompositionFailed(format!(
            "{} is not virtually almost coherent (census total {})",
            complex.tuple,
            census.total_inconsistent()
        )));
    }
    let mut last_failure = None;
    for upper_choice in census.upper.inconsistent_choices() {
        for lower_choice in census.lower.inconsistent_choices() {
            let uppers = census.arcs_in(Half::Upper, upper_choice);
            let lowers = census.arcs_in(Half::Lower, lower_choice);
            if uppers.len() != 1 || lowers.len() != 1 {
                continue;
            }
            match try_decompose(complex, walk, uppers[0], lowers[0]) {
                Ok(d) => return Ok(d),
                Err(e) => last_failure = Some(e),
            }
        }
    }
    Err(last_failure.unwrap_or_else(|| {
        Error::DecompositionFailed(format!(
            "no admissible inconsistent-arc choice for {}",
            complex.tuple
        ))
    }))
}

fn try_decompose(
    complex: &KnotComplex,
    walk: &CoverWalk,
    upper: &HalfPlaneArc,
    lower: &HalfPlaneArc,
) -> Result<Decomposition> {
    if upper.line != lower.line {
        return Err(Error::DecompositionFailed(format!(
            "inconsistent arcs on different class lines ({} vs {}) for {}",
            upper.line, lower.line, complex.tuple
        )));
    }
    let line = upper.line;
    let spin_class = complex
        .generators
        .iter()
        .find(|g| g.line == line)
        .map(|g| g.spin_class)
        .ok_or_else(|| {
            Error::DecompositionFailed(format!("no generators on line {line}"))
        })?;
    let crossings = walk.line_crossings(line)?;
    let arc_pos = |arc: &HalfPlaneArc| -> Result<usize> {
        crossings
            .iter()
            .position(|c| c.walk_index == arc.from.walk_index)
            .ok_or_else(|| Error::DecompositionFailed("arc not on its line".into()))
    };
    let (i, j) = {
        let (a, b) = (arc_pos(upper)?, arc_pos(lower)?);
        if a < b {
            (a, b)
        } else {
            (b, a)
        }
    };
    let class = ClassComplex::from_complex(complex, spin_class);
    let local_of: BTreeMap<i64, usize> = class
        .global_ids
        .iter()
        .enumerate()
        .map(|(local, &g)| (complex.generators[g].residue, local))
        .collect();
    let at = |idx: i64| -> Result<usize> {
        if idx < 0 || idx as usize >= crossings.len() {
            return Err(Error::DecompositionFailed(format!(
                "required neighbor crossing {idx} out of range for {}",
                complex.tuple
            )));
        }
        local_of.get(&crossings[idx as usize].residue).copied().ok_or_else(|| {
            Error::DecompositionFailed("crossing outside its own spin class".into())
        })
    };
    let in_interval = |v: &LineCrossing, b: &LineCrossing, c: &LineCrossing| -> bool {
        let (lo, hi) = if b.x < c.x { (b.x, c.x) } else { (c.x, b.x) };
        lo < v.x && v.x < hi
    };

    let i = i as i64;
    let j = j as i64;
    let (configuration, box_sums): (BoxConfiguration, Vec<Vec<usize>>) = if j - i == 1 {
        // Shared endpoint: walk passes c_first, a, b_last.
        let a = at(i + 1)?;
        let c = at(i)?;
        let b = at(i + 2)?;
        let d_cross = i + 3;
        let e_cross = i - 1;
        let d = at(d_cross)?;
        let e = at(e_cross)?;
        let d_in = in_interval(
            &crossings[d_cross as usize],
            &crossings[i as usize],
            &crossings[(i + 2) as usize],
        );
        let e_in = in_interval(
            &crossings[e_cross as usize],
            &crossings[i as usize],
            &crossings[(i + 2) as usize],
        );
        match (d_in, e_in) {
            (true, true) => {
                let f = at(i + 4)?;
                let g = at(i - 2)?;
                (
                    BoxConfiguration::SharedEndpointBothInside,
                    vec![vec![a], vec![b, g], vec![c, f], vec![d, e]],
                )
            }
            (false, false) => (
                BoxConfiguration::SharedEndpointBothOutside,
                vec![vec![a], vec![b], vec![c], vec![d, e]],
            ),
            (true, false) => {
                let f = at(i + 4)?;
                (
                    BoxConfiguration::SharedEndpointSuccessorInside,
                    vec![vec![a], vec![b], vec![c, f], vec![d, e]],
                )
            }
            (false, true) => {
                let g = at(i - 2)?;
                (
                    BoxConfiguration::SharedEndpointPredecessorInside,
                    vec![vec![a], vec![b, g], vec![c], vec![d, e]],
                )
            }
        }
    } else if j - i == 3 {
        // No shared endpoint: d, b, a, c, e consecutive along the walk.
        let d = at(i)?;
        let b = at(i + 1)?;
        let a = at(i + 2)?;
        let c = at(i + 3)?;
        let e = at(i + 4)?;
        (BoxConfiguration::NoSharedEndpoint, vec![vec![a], vec![b], vec![c], vec![d, e]])
    } else {
        return Err(Error::DecompositionFailed(format!(
            "inconsistent arcs at walk distance {} (expected 1 or 3) for {}",
            j - i,
            complex.tuple
        )));
    };

    split_off_box(complex, &class, spin_class, configuration, &box_sums)
}

/// Builds the basis from the prescribed sums, corrects the complement, and
/// verifies the direct sum.
fn split_off_box(
    complex: &KnotComplex,
    class: &ClassComplex,
    spin_class: usize,
    configuration: BoxConfiguration,
    box_sums: &[Vec<usize>],
) -> Result<Decomposition> {
    let n = class.len();
    if n < 5 {
        return Err(Error::DecompositionFailed(format!(
            "class of size {n} cannot split as staircase plus box"
        )));
    }
    // Maslov-homogenized vectors from the sums; the first generator is the
    // pivot.
    let mut vectors: Vec<ModVec> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for sum in box_sums {
        let base = sum[0];
        let mut v = ModVec::generator(base);
        for &extra in &sum[1..] {
            let dm = class.maslov[extra] - class.maslov[base];
            if dm % 2 != 0 {
                return Err(Error::DecompositionFailed(format!(
                    "sum {sum:?} cannot be Maslov-homogenized for {}",
                    complex.tuple
                )));
            }
            v.toggle((extra, dm / 2));
        }
        vectors.push(v);
        pivots.push(base);
    }
    let box_count = vectors.len();
    debug_assert_eq!(box_count, 4);
    for g in 0..n {
        if !pivots.contains(&g) {
            vectors.push(ModVec::generator(g));
            pivots.push(g);
        }
    }
    let mut basis = ModBasis::new(vectors, pivots)?;

    // The box must be closed under the differential.
    for idx in 0..box_count {
        let coeffs = basis.express(&class.boundary(&basis.vectors[idx]))?;
        if coeffs.iter().any(|&(j, _)| j >= box_count) {
            return Err(Error::DecompositionFailed(format!(
                "prescribed box is not a subcomplex for {}",
                complex.tuple
            )));
        }
    }
    // Correct each complement vector by a subset of box vectors so its
    // boundary stays in the complement.
    for idx in box_count..basis.vectors.len() {
        let needs = |basis: &ModBasis, v: &ModVec| -> Result<bool> {
            let coeffs = basis.express(&class.boundary(v))?;
            Ok(coeffs.iter().any(|&(j, _)| j < box_count))
        };
        if !needs(&basis, &basis.vectors[idx])? {
            continue;
        }
        let m_w = class.vector_maslov(&basis.vectors[idx])?;
        let mut fixed = false;
        'subsets: for mask in 1u32..(1 << box_count) {
            let mut candidate = basis.vectors[idx].clone();
            for b in 0..box_count {
                if mask >> b & 1 == 1 {
                    let m_v = class.vector_maslov(&basis.vectors[b])?;
                    if (m_v - m_w) % 2 != 0 {
                        continue 'subsets;
                    }
                    candidate.xor_assign(&basis.vectors[b].shifted((m_v - m_w) / 2));
                }
            }
            if candidate.is_zero() || !candidate.terms.contains(&(basis.pivots[idx], 0)) {
                continue;
            }
            if !needs(&basis, &candidate)? {
                basis.vectors[idx] = candidate;
                fixed = true;
                break;
            }
        }
        if !fixed {
            return Err(Error::DecompositionFailed(format!(
                "complement vector with pivot {} cannot be pushed off the box for {}",
                basis.pivots[idx], complex.tuple
            )));
        }
    }

    // Assemble the two induced blocks and check there is no cross talk.
    let box_block = induced_block(class, &basis, 0..box_count)?;
    let stair_block = induced_block(class, &basis, box_count..basis.vectors.len())?;
    let box_part = recognize_box(&box_block).ok_or_else(|| {
        Error::DecompositionFailed(format!(
            "box block does not match the length-one pattern for {}",
            complex.tuple
        ))
    })?;
    let staircase = recognize_staircase(&stair_block).ok_or_else(|| {
        Error::DecompositionFailed(format!(
            "complement block is not a staircase for {}",
            complex.tuple
        ))
    })?;
    let basis_record = basis
        .vectors
        .iter()
        .map(|v| {
            let terms: Vec<(usize, i64)> =
                v.terms.iter().map(|&(g, s)| (class.global_ids[g], s)).collect();
            let label = terms
                .iter()
                .map(|&(g, s)| {
                    let name = format!("x{}", complex.generators[g].residue);
                    if s == 0 {
                        name
                    } else {
                        format!("U^{s}{name}")
                    }
                })
                .collect::<Vec<_>>()
                .join("+");
            BasisVector { terms, label }
        })
        .collect();
    Ok(Decomposition { spin_class, staircase, box_part, basis: basis_record, configuration })
}

/// The induced differential among the chosen basis vectors, as a block;
/// errors if any boundary leaves the span of the range.
fn induced_block(
    class: &ClassComplex,
    basis: &ModBasis,
    range: std::ops::Range<usize>,
) -> Result<Block> {
    let offset = range.start;
    let size = range.end - range.start;
    let mut edges = Vec::new();
    for idx in range.clone() {
        let v = &basis.vectors[idx];
        let boundary = class.boundary(v);
        if boundary.is_zero() {
            continue;
        }
        let m_src = class.vector_maslov(v)?;
        let a_src = class.vector_alexander(v);
        for (j, shift) in basis.express(&boundary)? {
            if !range.contains(&j) {
                return Err(Error::DecompositionFailed(format!(
                    "differential crosses blocks: vector {idx} hits vector {j}"
                )));
            }
            let m_tgt = class.vector_maslov(&basis.vectors[j])?;
            // d lowers Maslov by one: M(U^shift v_j) = m_tgt - 2 shift.
            if m_tgt - 2 * shift != m_src - 1 {
                return Err(Error::DecompositionFailed(
                    "induced edge violates the Maslov relation".into(),
                ));
            }
            let a_tgt = class.vector_alexander(&basis.vectors[j]) - shift;
            let n_w = shift;
            let n_z = n_w + a_src - a_tgt;
            if n_w < 0 || n_z < 0 {
                return Err(Error::DecompositionFailed(
                    "induced edge has negative basepoint weight".into(),
                ));
            }
            edges.push((idx - offset, j - offset, n_w as u32, n_z as u32));
        }
    }
    let labels = range.map(|idx| format!("v{idx}")).collect();
    Ok(Block::new(size, edges, labels))
}
