/// Square boolean matrix with rows packed into `u64` words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitMatrix {
    size: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn new(size: usize) -> Self {
        let words = size.div_ceil(64).max(1);
        BitMatrix {
            size,
            words,
            bits: vec![0; size * words],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let w = &mut self.bits[i * self.words + j / 64];
        let mask = 1u64 << (j % 64);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    pub fn transpose(&self) -> Self {
        let mut t = BitMatrix::new(self.size);
        for i in 0..self.size {
            for j in 0..self.size {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    /// Warshall's algorithm: for each pivot `k`, every row that reaches `k`
    /// absorbs row `k`.
    pub fn close_transitively(&mut self) {
        let w = self.words;
        for k in 0..self.size {
            let pivot: Vec<u64> = self.row(k).to_vec();
            for i in 0..self.size {
                if self.get(i, k) {
                    let row = &mut self.bits[i * w..(i + 1) * w];
                    for (dst, src) in row.iter_mut().zip(&pivot) {
                        *dst |= *src;
                    }
                }
            }
        }
    }

    /// True when every set bit of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &BitMatrix) -> bool {
        self.size == other.size && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }
}
