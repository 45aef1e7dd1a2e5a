//! Sets of atoms of a spectral measure: Borel sets modulo the measure.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AtomSet {
    measure_id: u64,
    universe: usize,
    words: Vec<u64>,
}

impl AtomSet {
    pub fn empty(measure_id: u64, universe: usize) -> Self {
        Self { measure_id, universe, words: vec![0; universe.div_ceil(64)] }
    }

    pub fn full(measure_id: u64, universe: usize) -> Self {
        let mut s = Self::empty(measure_id, universe);
        for j in 0..universe {
            s.insert(j);
        }
        s
    }

    pub fn from_indices(measure_id: u64, universe: usize, idx: &[usize]) -> Self {
        let mut s = Self::empty(measure_id, universe);
        for &j in idx {
            s.insert(j);
        }
        s
    }

    pub fn measure_id(&self) -> u64 {
        self.measure_id
    }

    /// Number of atoms of the underlying measure.
    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, j: usize) {
        assert!(j < self.universe, "atom index {j} out of range {}", self.universe);
        self.words[j / 64] |= 1 << (j % 64);
    }

    pub fn remove(&mut self, j: usize) {
        if j < self.universe {
            self.words[j / 64] &= !(1 << (j % 64));
        }
    }

    pub fn contains(&self, j: usize) -> bool {
        j < self.universe && self.words[j / 64] >> (j % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe).filter(move |&j| self.contains(j))
    }

    fn same_measure(&self, other: &AtomSet) -> Result<()> {
        if self.measure_id != other.measure_id || self.universe != other.universe {
            return Err(Error::MeasureMismatch);
        }
        Ok(())
    }

    fn zip_with(&self, other: &AtomSet, f: impl Fn(u64, u64) -> u64) -> Result<AtomSet> {
        self.same_measure(other)?;
        let words = self.words.iter().zip(other.words.iter()).map(|(&a, &b)| f(a, b)).collect();
        Ok(AtomSet { measure_id: self.measure_id, universe: self.universe, words })
    }

    pub fn join(&self, other: &AtomSet) -> Result<AtomSet> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn meet(&self, other: &AtomSet) -> Result<AtomSet> {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &AtomSet) -> Result<AtomSet> {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> AtomSet {
        let mut out = self.clone();
        for w in out.words.iter_mut() {
            *w = !*w;
        }
        let tail = self.universe % 64;
        if tail != 0 {
            if let Some(last) = out.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        out
    }

    /// `E(self \ other) = 0`; every atom carries a nonzero projection, so this is bit containment.
    pub fn is_subset(&self, other: &AtomSet) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    pub fn essentially_equal(&self, other: &AtomSet) -> Result<bool> {
        self.same_measure(other)?;
        Ok(self.words == other.words)
    }
}

/// Join of a finite family; the empty join is the empty set.
pub fn join_all<'a>(measure_id: u64, universe: usize, sets: impl IntoIterator<Item = &'a AtomSet>) -> Result<AtomSet> {
    let mut acc = AtomSet::empty(measure_id, universe);
    for s in sets {
        acc = acc.join(s)?;
    }
    Ok(acc)
}

/// Meet of a finite family; the empty meet is the full set.
pub fn meet_all<'a>(measure_id: u64, universe: usize, sets: impl IntoIterator<Item = &'a AtomSet>) -> Result<AtomSet> {
    let mut acc = AtomSet::full(measure_id, universe);
    for s in sets {
        acc = acc.meet(s)?;
    }
    Ok(acc)
}
