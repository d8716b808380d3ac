/// Fixed-width bit set over point indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet { words: vec![0; len.div_ceil(64)] }
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn xor_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn or_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn copy_from(&mut self, other: &BitSet) {
        self.words.copy_from_slice(&other.words);
    }

    pub fn intersects(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn count(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// `|mask ∩ (self ∪ extra)|` and `|mask ∩ (¬self ∪ extra)|` in one pass.
    pub fn split_counts(&self, extra: &BitSet, mask: &BitSet) -> (u32, u32) {
        let mut ones = 0;
        let mut zeros = 0;
        for ((p, b), m) in self.words.iter().zip(&extra.words).zip(&mask.words) {
            ones += ((p | b) & m).count_ones();
            zeros += ((!p | b) & m).count_ones();
        }
        (ones, zeros)
    }

    /// `|mask ∩ self ∩ ¬extra|`, `|mask ∩ ¬self ∩ ¬extra|` and `|mask ∩ extra|`.
    pub fn interior_counts(&self, extra: &BitSet, mask: &BitSet) -> (u32, u32, u32) {
        let mut ones = 0;
        let mut zeros = 0;
        let mut on = 0;
        for ((p, b), m) in self.words.iter().zip(&extra.words).zip(&mask.words) {
            ones += (p & !b & m).count_ones();
            zeros += (!p & !b & m).count_ones();
            on += (b & m).count_ones();
        }
        (ones, zeros, on)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let mut p = BitSet::new(70);
        let mut b = BitSet::new(70);
        let mut m = BitSet::new(70);
        for i in [1, 3, 65] {
            p.set(i);
        }
        b.set(3);
        for i in [1, 2, 3, 65, 69] {
            m.set(i);
        }
        assert_eq!(p.split_counts(&b, &m), (3, 3));
        assert_eq!(p.interior_counts(&b, &m), (2, 2, 1));
    }
}
