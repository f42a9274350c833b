use super::{hermite_normal_form, lattice_rank, smith_normal_form, IntMatrix, LatticeVector};
use crate::{Error, Result};

/// Z-basis of `N` adapted to the flag `span(A_1) ⊆ span(A_2) ⊆ ...`: for every
/// level the first `rank(A_l)` output vectors are a Z-basis of the saturated
/// sublattice `span_Q(A_l) ∩ N`.
///
/// Each new block is put in Hermite form so the output does not depend on
/// incidental choices inside the Smith reduction. If the last level does not
/// span, the remaining vectors are an arbitrary unimodular completion.
pub fn saturate_flag(bases: &[Vec<LatticeVector>]) -> Result<Vec<LatticeVector>> {
    let n = bases
        .iter()
        .flatten()
        .map(LatticeVector::dim)
        .next()
        .ok_or_else(|| Error::InvalidModel("empty flag".into()))?;
    if bases.iter().flatten().any(|v| v.dim() != n) {
        return Err(Error::InvalidModel("flag vectors of mixed dimension".into()));
    }

    let mut w = IntMatrix::identity(n);
    let mut done = 0usize;
    let mut prev: Vec<LatticeVector> = Vec::new();
    for (l, level) in bases.iter().enumerate() {
        let r = lattice_rank(level);
        let mut joint = prev.clone();
        joint.extend(level.iter().cloned());
        if lattice_rank(&joint) != r || r < done {
            return Err(Error::FlagNotIncreasing(l));
        }
        prev = level.clone();
        if r == done {
            continue;
        }

        // coordinates of A_l in the current basis, restricted to the free tail
        let w_inv = w.inverse_unimodular()?;
        let coords = IntMatrix::from_row_vectors(level).mul(&w_inv);
        let tail_cols: Vec<LatticeVector> = coords
            .row_vectors()
            .into_iter()
            .map(|row| LatticeVector(row.0[done..].to_vec()))
            .collect();
        let snf = smith_normal_form(&IntMatrix::from_row_vectors(&tail_cols));
        let v_inv = snf.v.inverse_unimodular()?;

        let w_tail = IntMatrix::from_row_vectors(&w.row_vectors()[done..]);
        let new_tail = v_inv.mul(&w_tail).row_vectors();
        let block = hermite_normal_form(&IntMatrix::from_row_vectors(&new_tail[..r - done])).row_vectors();

        let mut rows = w.row_vectors();
        rows.truncate(done);
        rows.extend(block);
        rows.extend(new_tail[r - done..].iter().cloned());
        w = IntMatrix::from_row_vectors(&rows);
        done = r;
    }
    Ok(w.row_vectors())
}
