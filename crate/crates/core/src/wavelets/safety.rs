//! Safety-zone dilation of retained-coefficient masks.

use crate::grid::Dim;

use super::coeffs::CoeffMask;

/// Adds, for every retained coefficient, its neighbours in position and scale.
///
/// 1D: `(j, i-1)`, `(j, i+1)` (periodic), the parent `(j-1, i/2)` and the children
/// `(j+1, 2i)`, `(j+1, 2i+1)`. 2D, per orientation band: the four position
/// neighbours, the parent and the four children. Levels outside the layout are
/// skipped. The result is a superset of the input; repeated application keeps growing it.
pub fn safety_zone(mask: &CoeffMask) -> CoeffMask {
    let mut out = mask.clone();
    let levels = mask.num_levels();
    match mask.dim() {
        Dim::One => {
            for j in 0..levels {
                let len = 1usize << j;
                for i in (0..len).filter(|&i| mask.get(j, i)) {
                    out.set(j, (i + len - 1) % len, true);
                    out.set(j, (i + 1) % len, true);
                    if j > 0 {
                        out.set(j - 1, i / 2, true);
                    }
                    if j + 1 < levels {
                        out.set(j + 1, 2 * i, true);
                        out.set(j + 1, 2 * i + 1, true);
                    }
                }
            }
        }
        Dim::Two => {
            for j in 0..levels {
                let side = 1usize << j;
                let band_len = side * side;
                for idx in (0..3 * band_len).filter(|&idx| mask.get(j, idx)) {
                    let band = idx / band_len;
                    let (r, c) = ((idx % band_len) / side, idx % side);
                    let at = |lvl: usize, r: usize, c: usize| {
                        let s = 1usize << lvl;
                        band * s * s + r * s + c
                    };
                    out.set(j, at(j, (r + side - 1) % side, c), true);
                    out.set(j, at(j, (r + 1) % side, c), true);
                    out.set(j, at(j, r, (c + side - 1) % side), true);
                    out.set(j, at(j, r, (c + 1) % side), true);
                    if j > 0 {
                        out.set(j - 1, at(j - 1, r / 2, c / 2), true);
                    }
                    if j + 1 < levels {
                        for (dr, dc) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                            out.set(j + 1, at(j + 1, 2 * r + dr, 2 * c + dc), true);
                        }
                    }
                }
            }
        }
    }
    out
}
