//! Exact sparse linear algebra over ℚ.
//!
//! Everything is built on an incrementally maintained reduced echelon basis:
//! vectors are inserted one at a time, each stored row has a unit pivot and
//! zeros in every other row's pivot position. Optional tags record how each
//! stored row was obtained from the inserted vectors, which yields kernel
//! vectors and quotient coordinates.

use crate::scalar::Scalar;

/// Sparse vector with strictly increasing indices and no zero entries.
pub type SparseVec = Vec<(u32, Scalar)>;

const NONE: u32 = u32::MAX;

/// `x + c·y` on sparse vectors.
pub fn axpy(x: &SparseVec, c: &Scalar, y: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j == y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i == x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i].clone());
            i += 1;
        } else if take_y {
            out.push((y[j].0, c * &y[j].1));
            j += 1;
        } else {
            let v = &x[i].1 + &(c * &y[j].1);
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale_vec(x: &SparseVec, c: &Scalar) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    x.iter().map(|(i, v)| (*i, v * c)).collect()
}

fn get(x: &SparseVec, i: u32) -> Option<&Scalar> {
    x.binary_search_by_key(&i, |e| e.0).ok().map(|k| &x[k].1)
}

/// Sums `Σ c_k v_k` through a dense scratch buffer.
struct Accumulator {
    dense: Vec<Scalar>,
    touched: Vec<u32>,
    mark: Vec<bool>,
}

impl Accumulator {
    fn new(dim: usize) -> Self {
        Accumulator {
            dense: vec![Scalar::zero(); dim],
            touched: Vec::new(),
            mark: vec![false; dim],
        }
    }

    fn add(&mut self, v: &SparseVec, c: &Scalar) {
        for (i, x) in v {
            let k = *i as usize;
            if !self.mark[k] {
                self.mark[k] = true;
                self.touched.push(*i);
            }
            self.dense[k] += c * x;
        }
    }

    fn drain(&mut self) -> SparseVec {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            let k = i as usize;
            self.mark[k] = false;
            let v = std::mem::take(&mut self.dense[k]);
            if !v.is_zero() {
                out.push((i, v));
            }
        }
        self.touched.clear();
        out
    }
}

/// `v + Σ c_k x_k`, through a dense buffer when the inputs are dense enough
/// and by sorting otherwise.
fn combine<'a>(dim: usize, v: &SparseVec, terms: impl Iterator<Item = (&'a SparseVec, Scalar)> + Clone) -> SparseVec {
    let nnz: usize = v.len() + terms.clone().map(|(x, _)| x.len()).sum::<usize>();
    if nnz * 4 >= dim {
        let mut acc = Accumulator::new(dim);
        acc.add(v, &Scalar::one());
        for (x, c) in terms {
            acc.add(x, &c);
        }
        return acc.drain();
    }
    let mut all: Vec<(u32, Scalar)> = Vec::with_capacity(nnz);
    all.extend(v.iter().cloned());
    for (x, c) in terms {
        all.extend(x.iter().map(|(i, y)| (*i, y * &c)));
    }
    all.sort_unstable_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(all.len());
    for (i, c) in all {
        match out.last_mut() {
            Some((j, d)) if *j == i => *d += c,
            _ => {
                if out.last().is_some_and(|e| e.1.is_zero()) {
                    out.pop();
                }
                out.push((i, c));
            }
        }
    }
    if out.last().is_some_and(|e| e.1.is_zero()) {
        out.pop();
    }
    out
}

/// Outcome of inserting a vector into an [`Echelon`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insert {
    /// The vector was independent and now owns this pivot.
    Pivot(u32),
    /// The vector lay in the span; the payload is its reduced tag, i.e. a
    /// relation among the tags that maps to zero.
    Dependent(SparseVec),
}

/// An incrementally built, fully reduced echelon basis of a subspace of `ℚ^dim`.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    tag_dim: usize,
    rows: Vec<SparseVec>,
    tags: Vec<SparseVec>,
    pivots: Vec<u32>,
    row_of: Vec<u32>,
}

impl Echelon {
    /// `tag_dim = 0` disables tag tracking.
    pub fn new(dim: usize, tag_dim: usize) -> Self {
        Echelon {
            dim,
            tag_dim,
            rows: Vec::new(),
            tags: Vec::new(),
            pivots: Vec::new(),
            row_of: vec![NONE; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[u32] {
        &self.pivots
    }

    pub fn tags(&self) -> &[SparseVec] {
        &self.tags
    }

    /// Returns `(v − Σ c_i row_i, tag − Σ c_i tag_i)`, the residual having no
    /// entry in any pivot position.
    pub fn reduce(&self, v: &SparseVec, tag: &SparseVec) -> (SparseVec, SparseVec) {
        let hits: Vec<(usize, &Scalar)> = v
            .iter()
            .filter_map(|(i, c)| {
                let r = self.row_of[*i as usize];
                (r != NONE).then_some((r as usize, c))
            })
            .collect();
        if hits.is_empty() {
            return (v.clone(), tag.clone());
        }
        let residual = combine(self.dim, v, hits.iter().map(|(r, c)| (&self.rows[*r], -*c)));
        let mut t = tag.clone();
        if self.tag_dim > 0 {
            t = combine(self.tag_dim, tag, hits.iter().map(|(r, c)| (&self.tags[*r], -*c)));
        }
        (residual, t)
    }

    /// Expresses `v` in terms of stored rows; `None` if `v` is outside the span.
    pub fn coordinates(&self, v: &SparseVec) -> Option<Vec<(usize, Scalar)>> {
        let (res, _) = self.reduce(v, &Vec::new());
        if !res.is_empty() {
            return None;
        }
        Some(
            v.iter()
                .filter_map(|(i, c)| {
                    let r = self.row_of[*i as usize];
                    (r != NONE).then(|| (r as usize, c.clone()))
                })
                .collect(),
        )
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v, &Vec::new()).0.is_empty()
    }

    pub fn insert(&mut self, v: &SparseVec, tag: &SparseVec) -> Insert {
        let (res, t) = self.reduce(v, tag);
        if res.is_empty() {
            return Insert::Dependent(t);
        }
        let (q, lead) = (res[0].0, res[0].1.clone());
        let inv = lead.recip().expect("nonzero lead");
        let row = scale_vec(&res, &inv);
        let tag = if self.tag_dim > 0 { scale_vec(&t, &inv) } else { Vec::new() };
        for k in 0..self.rows.len() {
            if let Some(c) = get(&self.rows[k], q) {
                let c = -c;
                self.rows[k] = axpy(&self.rows[k], &c, &row);
                if self.tag_dim > 0 {
                    self.tags[k] = axpy(&self.tags[k], &c, &tag);
                }
            }
        }
        self.row_of[q as usize] = self.rows.len() as u32;
        self.rows.push(row);
        self.tags.push(tag);
        self.pivots.push(q);
        Insert::Pivot(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[(u32, i64)]) -> SparseVec {
        xs.iter().map(|(i, c)| (*i, Scalar::from_int(*c))).collect()
    }

    #[test]
    fn axpy_cancels() {
        let x = v(&[(0, 1), (2, 3)]);
        let y = v(&[(2, 1), (5, 1)]);
        assert_eq!(axpy(&x, &Scalar::from_int(-3), &y), v(&[(0, 1), (5, -3)]));
    }

    #[test]
    fn echelon_rank_and_relations() {
        let mut e = Echelon::new(3, 3);
        assert_eq!(e.insert(&v(&[(0, 1), (1, 1)]), &v(&[(0, 1)])), Insert::Pivot(0));
        assert_eq!(e.insert(&v(&[(1, 1), (2, 1)]), &v(&[(1, 1)])), Insert::Pivot(1));
        // (1,0,-1) = first − second
        let r = e.insert(&v(&[(0, 1), (2, -1)]), &v(&[(2, 1)]));
        assert_eq!(r, Insert::Dependent(v(&[(0, -1), (1, 1), (2, 1)])));
        assert_eq!(e.rank(), 2);
        // Rows are fully reduced: no row has an entry in another row's pivot.
        for (k, row) in e.rows().iter().enumerate() {
            for (j, p) in e.pivots().iter().enumerate() {
                if j != k {
                    assert!(get(row, *p).is_none());
                }
            }
        }
    }
}
