//! Fraction-free (Bareiss) elimination over the integers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Default limit on the bit length of any intermediate entry.
pub const DEFAULT_BIT_CAP: u64 = 1 << 16;

/// Rank of an integer matrix given as rows. Pivots are taken column by
/// column, using the first row with a nonzero entry. Every intermediate entry
/// is a minor of the input, so divisions are exact.
pub fn rank_fraction_free(mut rows: Vec<Vec<BigInt>>, bit_cap: u64) -> Result<usize> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidParameter("ragged matrix".into()));
    }
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in rank + 1..rows.len() {
            let factor = rows[r][c].clone();
            for j in c..cols {
                let v = (&pivot * &rows[r][j] - &factor * &rows[rank][j]) / &prev;
                if v.bits() > bit_cap {
                    return Err(Error::CapExceeded {
                        what: "fraction-free elimination entry bits",
                        size: v.bits() as u128,
                        cap: bit_cap as u128,
                    });
                }
                rows[r][j] = v;
            }
        }
        prev = pivot;
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    Ok(rank)
}
