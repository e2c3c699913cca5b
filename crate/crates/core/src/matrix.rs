//! Sparse exact matrices between enumerated cells.

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::linalg::{axpy, Echelon, Insert, SparseVec};
use crate::scalar::Scalar;

/// An ordered monomial basis with index lookup.
#[derive(Clone, Debug)]
pub struct Basis<M> {
    elems: Vec<M>,
    index: HashMap<M, u32>,
}

impl<M: Clone + Eq + std::hash::Hash> Basis<M> {
    pub fn new(elems: Vec<M>) -> Self {
        let index = elems.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();
        Basis { elems, index }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[M] {
        &self.elems
    }

    pub fn get(&self, i: usize) -> &M {
        &self.elems[i]
    }

    pub fn index_of(&self, m: &M) -> Option<u32> {
        self.index.get(m).copied()
    }

    /// Coordinates of `v`; errors if `v` leaves the basis.
    pub fn coords(&self, v: &LinComb<M>) -> Result<SparseVec>
    where
        M: Ord + std::fmt::Debug,
    {
        let mut out: SparseVec = v
            .iter()
            .map(|(m, c)| {
                self.index_of(m)
                    .map(|i| (i, c.clone()))
                    .ok_or_else(|| Error::Invalid(format!("{m:?} is not in the target cell")))
            })
            .collect::<Result<_>>()?;
        out.sort_unstable_by_key(|e| e.0);
        Ok(out)
    }

    pub fn vector(&self, coords: &SparseVec) -> LinComb<M>
    where
        M: Ord,
    {
        coords.iter().map(|(i, c)| (self.elems[*i as usize].clone(), c.clone())).collect()
    }
}

/// A column-major sparse matrix with exact rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseRationalMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec>,
}

impl SparseRationalMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseRationalMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseRationalMatrix {
            rows: n,
            cols: n,
            columns: (0..n).map(|i| vec![(i as u32, Scalar::one())]).collect(),
        }
    }

    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Self {
        debug_assert!(columns.iter().flatten().all(|(i, _)| (*i as usize) < rows));
        SparseRationalMatrix {
            rows,
            cols: columns.len(),
            columns,
        }
    }

    pub fn from_triplets(rows: usize, cols: usize, entries: &[(usize, usize, Scalar)]) -> Self {
        let mut columns: Vec<LinComb<u32>> = vec![LinComb::new(); cols];
        for (i, j, c) in entries {
            columns[*j].add_term(*i as u32, c.clone());
        }
        let columns = columns
            .into_iter()
            .map(|c| c.into_terms().into_iter().collect())
            .collect();
        SparseRationalMatrix { rows, cols, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.columns[j]
            .binary_search_by_key(&(i as u32), |e| e.0)
            .map(|k| self.columns[j][k].1.clone())
            .unwrap_or_default()
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    /// Triplets `(row, col, value)` in column-major order.
    pub fn triplets(&self) -> Vec<(usize, usize, Scalar)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |(i, c)| (*i as usize, j, c.clone())))
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut columns: Vec<SparseVec> = vec![Vec::new(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, c) in col {
                columns[*i as usize].push((j as u32, c.clone()));
            }
        }
        SparseRationalMatrix {
            rows: self.cols,
            cols: self.rows,
            columns,
        }
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc = Vec::new();
        for (j, c) in v {
            acc = axpy(&acc, c, &self.columns[*j as usize]);
        }
        acc
    }

    /// `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Invalid(format!(
                "dimension mismatch: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let columns = other.columns.par_iter().map(|col| self.apply(col)).collect();
        Ok(SparseRationalMatrix {
            rows: self.rows,
            cols: other.cols,
            columns,
        })
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Invalid(format!(
                "shape mismatch: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| axpy(a, &Scalar::one(), b))
            .collect();
        Ok(SparseRationalMatrix {
            rows: self.rows,
            cols: self.cols,
            columns,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| axpy(a, &Scalar::from_int(-1), b))
            .collect();
        Ok(SparseRationalMatrix {
            rows: self.rows,
            cols: self.cols,
            columns,
        })
    }

    fn echelon_of_columns(&self, track: bool) -> (Echelon, Vec<SparseVec>) {
        let mut e = Echelon::new(self.rows, if track { self.cols } else { 0 });
        let mut relations = Vec::new();
        for (j, col) in self.columns.iter().enumerate() {
            let tag = if track { vec![(j as u32, Scalar::one())] } else { Vec::new() };
            if let Insert::Dependent(t) = e.insert(col, &tag) {
                if track {
                    relations.push(t);
                }
            }
        }
        (e, relations)
    }

    pub fn rank(&self) -> usize {
        self.echelon_of_columns(false).0.rank()
    }

    /// The reduced row-echelon form: pivot columns and the `rank × cols`
    /// matrix whose rows are the nonzero rows of the RREF.
    pub fn rref(&self) -> (Vec<usize>, SparseRationalMatrix) {
        let (e, relations) = self.echelon_of_columns(true);
        let rank = e.rank();
        // Each relation ends in its own (free) column; the rest are pivots.
        let free: std::collections::HashSet<usize> =
            relations.iter().map(|t| t.last().expect("relation has its own column").0 as usize).collect();
        let pivot_cols: Vec<usize> = (0..self.cols).filter(|j| !free.contains(j)).collect();
        let row_of_col: HashMap<usize, usize> = pivot_cols.iter().enumerate().map(|(k, j)| (*j, k)).collect();
        let mut entries = Vec::new();
        for (k, j) in pivot_cols.iter().enumerate() {
            entries.push((k, *j, Scalar::one()));
        }
        for t in &relations {
            // t = e_f − Σ R[k,f] e_{pivot_k}
            let f = t.last().expect("relation has its own column").0 as usize;
            for (j, c) in t {
                if *j as usize != f {
                    entries.push((row_of_col[&(*j as usize)], f, -c));
                }
            }
        }
        (pivot_cols, SparseRationalMatrix::from_triplets(rank, self.cols, &entries))
    }

    /// The kernel basis `e_f − Σ_k R[k,f] e_{pivot_k}` read off the RREF, one
    /// vector per free column.
    pub fn kernel_basis(&self) -> Vec<SparseVec> {
        self.echelon_of_columns(true).1
    }

    /// A solution of `self · x = b` supported on the pivot columns, or `None`
    /// if `b` is outside the column space.
    pub fn solve(&self, b: &SparseVec) -> Option<SparseVec> {
        let (e, _) = self.echelon_of_columns(true);
        let (res, tag) = e.reduce(b, &Vec::new());
        res.is_empty().then(|| tag.into_iter().map(|(j, c)| (j, -c)).collect())
    }

    /// The pivot columns, a basis of the column space.
    pub fn image_basis(&self) -> Vec<SparseVec> {
        let mut e = Echelon::new(self.rows, 0);
        self.columns
            .iter()
            .filter(|col| matches!(e.insert(col, &Vec::new()), Insert::Pivot(_)))
            .cloned()
            .collect()
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .triplets()
                .into_iter()
                .map(|(i, j, c)| (i, j, c))
                .collect(),
        }
    }

    pub fn from_json(m: &MatrixJson) -> Result<Self> {
        if m.entries.iter().any(|(i, j, _)| *i >= m.rows || *j >= m.cols) {
            return Err(Error::Invalid("matrix entry out of range".into()));
        }
        Ok(Self::from_triplets(m.rows, m.cols, &m.entries))
    }

    /// MatrixMarket coordinate format with rational entries as `p/q` strings.
    pub fn to_matrix_market(&self) -> String {
        let mut s = String::from("%%MatrixMarket matrix coordinate rational general\n");
        let _ = writeln!(s, "{} {} {}", self.rows, self.cols, self.nnz());
        for (i, j, c) in self.triplets() {
            let _ = writeln!(s, "{} {} {}", i + 1, j + 1, c);
        }
        s
    }
}

/// JSON triplet form `{"rows", "cols", "entries": [[i, j, "p/q"], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, Scalar)>,
}

/// The matrix of `op` from `source` to `target`, one column per source
/// monomial. Fails if some image leaves the target basis.
pub fn assemble<M, F>(source: &[M], target: &Basis<M>, op: F) -> Result<SparseRationalMatrix>
where
    M: Clone + Ord + Eq + std::hash::Hash + Send + Sync + std::fmt::Debug,
    F: Fn(&M) -> LinComb<M> + Sync,
{
    let columns = source
        .par_iter()
        .map(|m| target.coords(&op(m)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SparseRationalMatrix::from_columns(target.len(), columns))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn random_matrix(rows: usize, cols: usize, density: f64, seed: u64) -> SparseRationalMatrix {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut entries = Vec::new();
        for i in 0..rows {
            for j in 0..cols {
                if rng.gen_bool(density) {
                    entries.push((i, j, Scalar::new(rng.gen_range(-5..=5), rng.gen_range(1..=3))));
                }
            }
        }
        SparseRationalMatrix::from_triplets(rows, cols, &entries)
    }

    #[test]
    fn trivial_cases() {
        let z = SparseRationalMatrix::zero(3, 4);
        assert_eq!(z.rank(), 0);
        assert_eq!(z.kernel_basis().len(), 4);
        assert!(z.image_basis().is_empty());
        let id = SparseRationalMatrix::identity(3);
        assert!(id.kernel_basis().is_empty());
        assert_eq!(id.image_basis().len(), 3);
    }

    #[test]
    fn rank_of_transpose_agrees() {
        for seed in 0..5 {
            let m = random_matrix(20, 30, 0.15, seed);
            assert_eq!(m.rank(), m.transpose().rank());
        }
    }

    #[test]
    fn rref_small() {
        // [[1,2,3],[2,4,7]] has RREF [[1,2,0],[0,0,1]].
        let m = SparseRationalMatrix::from_triplets(
            2,
            3,
            &[
                (0, 0, Scalar::from_int(1)),
                (0, 1, Scalar::from_int(2)),
                (0, 2, Scalar::from_int(3)),
                (1, 0, Scalar::from_int(2)),
                (1, 1, Scalar::from_int(4)),
                (1, 2, Scalar::from_int(7)),
            ],
        );
        let (piv, r) = m.rref();
        assert_eq!(piv, vec![0, 2]);
        assert_eq!(r.get(0, 1), Scalar::from_int(2));
        assert_eq!(r.get(0, 2), Scalar::zero());
        assert_eq!(r.get(1, 2), Scalar::one());
        assert_eq!(m.kernel_basis(), vec![vec![(0, Scalar::from_int(-2)), (1, Scalar::one())]]);
    }

    #[test]
    fn export_formats() {
        let m = SparseRationalMatrix::from_triplets(2, 2, &[(1, 0, Scalar::new(3, 2))]);
        let js = serde_json::to_string(&m.to_json()).unwrap();
        assert_eq!(js, r#"{"rows":2,"cols":2,"entries":[[1,0,"3/2"]]}"#);
        let back: MatrixJson = serde_json::from_str(&js).unwrap();
        assert_eq!(SparseRationalMatrix::from_json(&back).unwrap(), m);
        assert!(m.to_matrix_market().ends_with("2 1 3/2\n"));
    }

    proptest! {
        #[test]
        fn rank_nullity_and_kernel(seed in 0u64..1000, rows in 1usize..12, cols in 1usize..12) {
            let m = random_matrix(rows, cols, 0.3, seed);
            let ker = m.kernel_basis();
            prop_assert_eq!(m.rank() + ker.len(), cols);
            for k in &ker {
                prop_assert!(m.apply(k).is_empty());
            }
            let (piv, r) = m.rref();
            prop_assert_eq!(piv.len(), m.rank());
            prop_assert_eq!(r.rank(), m.rank());
            let b = m.apply(&(0..cols as u32).map(|j| (j, Scalar::from_int(j as i64 % 3 - 1))).filter(|e| !e.1.is_zero()).collect());
            let x = m.solve(&b).expect("b is in the image");
            prop_assert_eq!(m.apply(&x), b);
        }
    }
}
