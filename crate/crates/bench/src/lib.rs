//! Fixtures shared by the benchmarks in `benches/`.

use num_bigint::BigInt;
use orbifloer_core::lattice::{IntMatrix, LatticeVector};

/// Deterministic `n x n` integer matrices with entries in `[-9, 9]`.
pub fn matrices(count: usize, n: usize) -> Vec<IntMatrix> {
    // small LCG, enough for fixed benchmark inputs
    let mut state: u64 = 0x9e3779b97f4a7c15;
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 33) % 19) as i64 - 9
    };
    (0..count)
        .map(|_| {
            let rows: Vec<LatticeVector> =
                (0..n).map(|_| LatticeVector((0..n).map(|_| BigInt::from(next())).collect())).collect();
            IntMatrix::from_row_vectors(&rows)
        })
        .collect()
}

/// Two-dimensional cones `(1, 0), (p, q)` of multiplicity `q`.
pub fn cones(max_mult: i64) -> Vec<Vec<LatticeVector>> {
    (2..=max_mult)
        .map(|q| vec![LatticeVector::from_i64(&[1, 0]), LatticeVector::from_i64(&[q - 1, q])])
        .collect()
}
