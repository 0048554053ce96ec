//! Dense linear algebra over the two-element field, on word-packed rows.

/// A vector over F2 of fixed length.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct F2Vec {
    words: Vec<u64>,
    len: usize,
}

impl F2Vec {
    pub fn zero(len: usize) -> Self {
        F2Vec { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zero(len);
        v.set(i, true);
        v
    }

    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut v = Self::zero(len);
        for &i in indices {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &F2Vec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn leading(&self) -> Option<usize> {
        for (w, word) in self.words.iter().enumerate() {
            if *word != 0 {
                return Some(w * 64 + word.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }
}

/// Row space with reduction, for rank and membership queries.
#[derive(Debug, Clone, Default)]
pub struct RowSpace {
    /// Reduced rows keyed by pivot index.
    rows: Vec<(usize, F2Vec)>,
}

impl RowSpace {
    pub fn new() -> Self {
        RowSpace { rows: Vec::new() }
    }

    /// Reduces `v` against the stored rows; the remainder is zero iff `v` was
    /// in the span.
    pub fn reduce(&self, mut v: F2Vec) -> F2Vec {
        loop {
            let Some(lead) = v.leading() else { return v };
            match self.rows.iter().find(|(p, _)| *p == lead) {
                Some((_, row)) => v.xor_assign(row),
                None => return v,
            }
        }
    }

    /// Inserts `v` if independent; returns whether the rank grew.
    pub fn insert(&mut self, v: F2Vec) -> bool {
        let reduced = self.reduce(v);
        match reduced.leading() {
            Some(lead) => {
                self.rows.push((lead, reduced));
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &F2Vec) -> bool {
        self.reduce(v.clone()).is_zero()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Rank of a set of vectors.
pub fn rank(vectors: &[F2Vec]) -> usize {
    let mut space = RowSpace::new();
    for v in vectors {
        space.insert(v.clone());
    }
    space.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_rank() {
        let a = F2Vec::from_indices(5, &[0, 2]);
        let b = F2Vec::from_indices(5, &[2, 4]);
        let c = F2Vec::from_indices(5, &[0, 4]);
        assert_eq!(rank(&[a.clone(), b.clone(), c.clone()]), 2);
        let mut space = RowSpace::new();
        space.insert(a);
        space.insert(b);
        assert!(space.contains(&c));
        assert!(!space.contains(&F2Vec::unit(5, 0)));
    }
}
