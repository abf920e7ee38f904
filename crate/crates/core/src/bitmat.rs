//! Dense boolean matrices over packed 64-bit rows.
//!
//! Used for causal relations and poset orders at desk scale (n up to a few
//! thousand), where O(n²) bits is cheap and Warshall closure over packed rows
//! is fast enough that no sparse representation is worth the complexity.

/// A dense n×n boolean matrix with rows packed into `u64` words.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoolMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BoolMatrix {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        BoolMatrix {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.n && j < self.n);
        let w = self.bits[i * self.words + j / 64];
        (w >> (j % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        debug_assert!(i < self.n && j < self.n);
        let idx = i * self.words + j / 64;
        let mask = 1u64 << (j % 64);
        if value {
            self.bits[idx] |= mask;
        } else {
            self.bits[idx] &= !mask;
        }
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    /// Indices j with entry (i, j) set, ascending.
    pub fn row_iter(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let row = self.row(i);
        (0..self.n).filter(move |&j| (row[j / 64] >> (j % 64)) & 1 == 1)
    }

    /// True iff rows `self[i]` and `other[j]` share a set column.
    pub fn rows_intersect(&self, i: usize, other: &BoolMatrix, j: usize) -> bool {
        debug_assert_eq!(self.words, other.words);
        self.row(i)
            .iter()
            .zip(other.row(j))
            .any(|(a, b)| a & b != 0)
    }

    pub fn transpose(&self) -> BoolMatrix {
        let mut t = BoolMatrix::new(self.n);
        for i in 0..self.n {
            for j in self.row_iter(i) {
                t.set(j, i, true);
            }
        }
        t
    }

    /// Reachability closure (Warshall over packed rows). Does not touch the
    /// diagonal, so the closure of a strict order stays strict when the order
    /// is acyclic.
    pub fn transitive_closure(&self) -> BoolMatrix {
        let mut c = self.clone();
        let mut row_k = vec![0u64; c.words];
        for k in 0..c.n {
            row_k.copy_from_slice(c.row(k));
            for i in 0..c.n {
                if c.get(i, k) {
                    let start = i * c.words;
                    for (w, rk) in c.bits[start..start + c.words].iter_mut().zip(&row_k) {
                        *w |= rk;
                    }
                }
            }
        }
        c
    }

    pub fn with_diagonal(&self) -> BoolMatrix {
        let mut c = self.clone();
        for i in 0..c.n {
            c.set(i, i, true);
        }
        c
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i))
    }

    pub fn is_irreflexive(&self) -> bool {
        (0..self.n).all(|i| !self.get(i, i))
    }

    /// No pair i ≠ j related in both directions.
    pub fn is_antisymmetric(&self) -> bool {
        for i in 0..self.n {
            for j in self.row_iter(i) {
                if j != i && self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    /// (i,k) and (k,j) set imply (i,j) set: every row must contain the rows of
    /// its successors.
    pub fn is_transitive(&self) -> bool {
        for i in 0..self.n {
            for k in self.row_iter(i) {
                let ri = self.row(i);
                let rk = self.row(k);
                if rk.iter().zip(ri).any(|(k_w, i_w)| k_w & !i_w != 0) {
                    return false;
                }
            }
        }
        true
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_of_chain() {
        let mut m = BoolMatrix::new(3);
        m.set(0, 1, true);
        m.set(1, 2, true);
        let c = m.transitive_closure();
        assert!(c.get(0, 2));
        assert!(c.is_irreflexive());
        assert!(c.is_antisymmetric());
        assert!(c.is_transitive());
        assert_eq!(c.count_ones(), 3);
    }

    #[test]
    fn transitivity_detects_missing_edge() {
        let mut m = BoolMatrix::new(3);
        m.set(0, 1, true);
        m.set(1, 2, true);
        assert!(!m.is_transitive());
    }

    #[test]
    fn packing_across_word_boundary() {
        let n = 130;
        let mut m = BoolMatrix::new(n);
        m.set(0, 64, true);
        m.set(0, 129, true);
        m.set(129, 0, true);
        assert!(m.get(0, 64) && m.get(0, 129) && m.get(129, 0));
        assert!(!m.get(64, 0));
        assert_eq!(m.row_iter(0).collect::<Vec<_>>(), vec![64, 129]);
        assert!(!m.is_antisymmetric());
    }
}
