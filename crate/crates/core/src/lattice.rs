//! Integer lattices spanned by generator vectors, with exact membership
//! testing by column echelon reduction.

/// Column echelon basis of the sublattice of Z^dim generated by a list of
/// integer vectors. Membership is decided by forward substitution with
/// divisibility checks.
#[derive(Clone, Debug)]
pub struct Lattice {
    dim: usize,
    /// Pivot columns paired with their pivot row, in increasing row order.
    pivots: Vec<(usize, Vec<i128>)>,
}

impl Lattice {
    pub fn from_generators(dim: usize, gens: &[Vec<i64>]) -> Lattice {
        let mut cols: Vec<Vec<i128>> = gens
            .iter()
            .map(|g| {
                assert_eq!(g.len(), dim, "generator has wrong dimension");
                g.iter().map(|&x| x as i128).collect()
            })
            .collect();
        let mut pivots = Vec::new();
        for row in 0..dim {
            // Euclid on the entries of `row` across the working columns until
            // at most one column is nonzero there.
            loop {
                let mut nz: Vec<usize> = (0..cols.len()).filter(|&c| cols[c][row] != 0).collect();
                if nz.len() <= 1 {
                    break;
                }
                nz.sort_by_key(|&c| cols[c][row].unsigned_abs());
                let (small, other) = (nz[0], nz[1]);
                let q = cols[other][row] / cols[small][row];
                for r in 0..dim {
                    let s = cols[small][r];
                    cols[other][r] -= q * s;
                }
            }
            if let Some(c) = (0..cols.len()).find(|&c| cols[c][row] != 0) {
                let mut col = cols.swap_remove(c);
                if col[row] < 0 {
                    for x in col.iter_mut() {
                        *x = -*x;
                    }
                }
                pivots.push((row, col));
            }
        }
        Lattice { dim, pivots }
    }

    pub fn contains(&self, t: &[i64]) -> bool {
        if t.len() != self.dim {
            return false;
        }
        let mut v: Vec<i128> = t.iter().map(|&x| x as i128).collect();
        for (row, col) in &self.pivots {
            if v[*row] % col[*row] != 0 {
                return false;
            }
            let q = v[*row] / col[*row];
            for r in 0..self.dim {
                v[r] -= q * col[r];
            }
        }
        v.iter().all(|&x| x == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_sublattice_of_z() {
        let l = Lattice::from_generators(1, &[vec![2]]);
        assert!(l.contains(&[4]));
        assert!(l.contains(&[0]));
        assert!(l.contains(&[-6]));
        assert!(!l.contains(&[3]));
    }

    #[test]
    fn coprime_generators_span_z() {
        let l = Lattice::from_generators(1, &[vec![2], vec![3]]);
        for t in -10..10 {
            assert!(l.contains(&[t]));
        }
    }

    #[test]
    fn planar_sublattice() {
        // (1,1) and (1,-1) span the checkerboard lattice of Z^2.
        let l = Lattice::from_generators(2, &[vec![1, 1], vec![1, -1]]);
        assert!(l.contains(&[2, 0]));
        assert!(l.contains(&[3, 5]));
        assert!(!l.contains(&[1, 0]));
    }
}
