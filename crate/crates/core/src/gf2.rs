//! Linear algebra over GF(2).
//!
//! Two flavours of XOR basis: [`Basis64`] for vectors of at most 64
//! coordinates (the oracle's hot loop) and [`DenseBasis`] for arbitrary
//! lengths with an attached right-hand-side bit (the scheme verifier's
//! decoder).

/// Row-echelon basis of `u64` vectors, indexed by the highest set bit.
#[derive(Clone, Debug)]
pub struct Basis64 {
    rows: [u64; 64],
    rank: usize,
}

impl Default for Basis64 {
    fn default() -> Self {
        Basis64 { rows: [0; 64], rank: 0 }
    }
}

impl Basis64 {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn reduce(&self, mut v: u64) -> u64 {
        while v != 0 {
            let top = 63 - v.leading_zeros() as usize;
            let row = self.rows[top];
            if row == 0 {
                break;
            }
            v ^= row;
        }
        v
    }

    /// Inserts `v`; returns `false` when it was already in the span.
    pub fn insert(&mut self, v: u64) -> bool {
        let mut v = v;
        loop {
            if v == 0 {
                return false;
            }
            let top = 63 - v.leading_zeros() as usize;
            if self.rows[top] == 0 {
                self.rows[top] = v;
                self.rank += 1;
                return true;
            }
            v ^= self.rows[top];
        }
    }

    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }
}

/// Rank of a set of `u64` rows.
pub fn rank64(rows: &[u64]) -> usize {
    let mut b = Basis64::new();
    for &r in rows {
        b.insert(r);
    }
    b.rank()
}

/// A packed bit vector of fixed length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitRow {
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn unit(len: usize, bit: usize) -> Self {
        let mut r = Self::zeros(len);
        r.set(bit);
        r
    }

    pub fn set(&mut self, bit: usize) {
        self.words[bit / 64] |= 1 << (bit % 64);
    }

    pub fn clear(&mut self, bit: usize) {
        self.words[bit / 64] &= !(1 << (bit % 64));
    }

    pub fn get(&self, bit: usize) -> bool {
        self.words[bit / 64] >> (bit % 64) & 1 == 1
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn lowest(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    /// Parity of the coordinates selected by `self` in `values`.
    pub fn dot(&self, values: &BitRow) -> bool {
        self.words
            .iter()
            .zip(&values.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }
}

/// Echelon basis over long vectors where every row carries a value bit, so
/// that reducing a target also yields the value of the matching combination.
#[derive(Clone, Debug)]
pub struct DenseBasis {
    by_pivot: Vec<Option<(BitRow, bool)>>,
    rank: usize,
}

impl DenseBasis {
    pub fn new(len: usize) -> Self {
        DenseBasis {
            by_pivot: vec![None; len],
            rank: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Reduces `(v, value)`; the remainder is zero iff `v` is in the span.
    pub fn reduce(&self, mut v: BitRow, mut value: bool) -> (BitRow, bool) {
        while let Some(p) = v.lowest() {
            match &self.by_pivot[p] {
                Some((row, bit)) => {
                    v.xor_assign(row);
                    value ^= bit;
                }
                None => break,
            }
        }
        (v, value)
    }

    /// Returns `false` for dependent rows. A dependent row whose value
    /// disagrees with the span is an inconsistent equation; callers that
    /// build equations from true payloads never see one.
    pub fn insert(&mut self, v: BitRow, value: bool) -> bool {
        let (v, value) = self.reduce(v, value);
        match v.lowest() {
            Some(p) => {
                self.by_pivot[p] = Some((v, value));
                self.rank += 1;
                true
            }
            None => false,
        }
    }

    /// Value of coordinate `bit` if the span pins it down.
    pub fn solve_unit(&self, len: usize, bit: usize) -> Option<bool> {
        let (rest, value) = self.reduce(BitRow::unit(len, bit), false);
        rest.is_zero().then_some(value)
    }
}
