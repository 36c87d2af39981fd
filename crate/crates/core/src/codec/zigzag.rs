use crate::error::{Error, Result};
use crate::transforms::N;

/// Number of coefficients in a block.
pub const BLOCK_LEN: usize = N * N;

/// JPEG zig-zag scan generalized to 16×16 blocks.
///
/// Anti-diagonals `d = 0..=30` are visited in turn; even diagonals run
/// up-right (column increasing), odd ones down-left (row increasing).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZigzagOrder {
    sequence: [(usize, usize); BLOCK_LEN],
    rank: [[usize; N]; N],
}

impl ZigzagOrder {
    pub fn new() -> Self {
        let mut sequence = [(0, 0); BLOCK_LEN];
        let mut rank = [[0; N]; N];
        let mut k = 0;
        for d in 0..(2 * N - 1) {
            let lo = d.saturating_sub(N - 1);
            let hi = d.min(N - 1);
            for t in lo..=hi {
                let (row, col) = if d % 2 == 0 { (d - t, t) } else { (t, d - t) };
                sequence[k] = (row, col);
                rank[row][col] = k;
                k += 1;
            }
        }
        ZigzagOrder { sequence, rank }
    }

    pub fn sequence(&self) -> &[(usize, usize); BLOCK_LEN] {
        &self.sequence
    }

    /// Scan position of coefficient `(row, col)`.
    pub fn rank(&self, row: usize, col: usize) -> usize {
        self.rank[row][col]
    }
}

impl Default for ZigzagOrder {
    fn default() -> Self {
        Self::new()
    }
}

pub fn zigzag_order() -> ZigzagOrder {
    ZigzagOrder::new()
}

/// Keep the first `r` zig-zag coefficients, zero the rest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetentionPolicy {
    r: usize,
}

impl RetentionPolicy {
    pub fn new(r: usize) -> Result<Self> {
        if !(1..=BLOCK_LEN).contains(&r) {
            return Err(Error::InvalidRetention(r));
        }
        Ok(RetentionPolicy { r })
    }

    pub fn retained(&self) -> usize {
        self.r
    }

    pub fn keeps(&self, zigzag: &ZigzagOrder, row: usize, col: usize) -> bool {
        zigzag.rank(row, col) < self.r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_entries() {
        let z = zigzag_order();
        assert_eq!(
            &z.sequence()[..6],
            &[(0, 0), (0, 1), (1, 0), (2, 0), (1, 1), (0, 2)]
        );
        assert_eq!(z.sequence()[BLOCK_LEN - 1], (15, 15));
    }

    #[test]
    fn bijection_and_adjacency() {
        let z = zigzag_order();
        let mut seen = [[false; N]; N];
        for (k, &(r, c)) in z.sequence().iter().enumerate() {
            assert!(!seen[r][c]);
            seen[r][c] = true;
            assert_eq!(z.rank(r, c), k);
        }
        for w in z.sequence().windows(2) {
            let d0 = w[0].0 + w[0].1;
            let d1 = w[1].0 + w[1].1;
            assert!(d1 == d0 || d1 == d0 + 1);
        }
    }

    #[test]
    fn matches_8x8_jpeg_prefix() {
        // Standard JPEG order for the first 10 entries of an 8×8 scan.
        let z = zigzag_order();
        let jpeg = [
            (0, 0),
            (0, 1),
            (1, 0),
            (2, 0),
            (1, 1),
            (0, 2),
            (0, 3),
            (1, 2),
            (2, 1),
            (3, 0),
        ];
        assert_eq!(&z.sequence()[..10], &jpeg);
    }

    #[test]
    fn retention_bounds() {
        assert!(matches!(
            RetentionPolicy::new(0),
            Err(Error::InvalidRetention(0))
        ));
        assert!(RetentionPolicy::new(257).is_err());
        let p = RetentionPolicy::new(3).unwrap();
        let z = zigzag_order();
        assert!(p.keeps(&z, 1, 0));
        assert!(!p.keeps(&z, 2, 0));
    }
}
