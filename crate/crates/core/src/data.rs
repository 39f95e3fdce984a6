//! Bundled parity-check matrices.

use crate::codecio::{parse_alist, parse_dense};
use crate::gf2::BitMatrix;

pub const HAMMING_TXT: &str = include_str!("../data/hamming.txt");
pub const HAMMING_STAR_TXT: &str = include_str!("../data/hamming_star.txt");
pub const GOLAY_ALIST: &str = include_str!("../data/golay.alist");

/// The `[7,4]` Hamming code with three rows.
pub fn hamming() -> BitMatrix {
    parse_dense(HAMMING_TXT).expect("bundled matrix")
}

/// The same code with all seven nonzero dual codewords as rows.
pub fn hamming_star() -> BitMatrix {
    parse_dense(HAMMING_STAR_TXT).expect("bundled matrix")
}

/// A `12 x 24` matrix of the extended Golay code whose rows are all weight-8
/// codewords, chosen so that the fractional distance is `21/8`.
pub fn golay() -> BitMatrix {
    parse_alist(GOLAY_ALIST).expect("bundled matrix")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_shapes() {
        let h = hamming();
        assert_eq!((h.m(), h.n(), h.rank()), (3, 7, 3));
        let s = hamming_star();
        assert_eq!((s.m(), s.n(), s.rank()), (7, 7, 3));
        for r in s.rows() {
            assert!(h.in_row_space(r).unwrap());
        }
        let g = golay();
        assert_eq!((g.m(), g.n(), g.rank()), (12, 24, 12));
        assert!(g.row_weights().iter().all(|&w| w == 8));
        assert_eq!(g.minimum_distance(1 << 12).unwrap(), Some(8));
    }
}
