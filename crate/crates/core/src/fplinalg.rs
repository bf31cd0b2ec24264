//! Exact dense linear algebra over F_p: rank, kernel and image bases,
//! solving against a row span. Every homology dimension and code in the
//! crate reduces to these routines, so pivoting is fixed (first nonzero,
//! left-to-right, top-to-bottom) to keep bases reproducible across runs.

use crate::{Error, Result};

/// Dense row-major matrix over F_p with entries reduced into [0, p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFp {
    p: u32,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl MatrixFp {
    pub fn new(p: u32, rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self> {
        if p < 2 {
            return Err(Error::Input(format!("modulus {p} too small")));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        let entries = entries.into_iter().map(|e| e % p).collect();
        Ok(MatrixFp { p, rows, cols, entries })
    }

    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        MatrixFp { p, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: u32, cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a {cols}-column matrix",
                    r.len()
                )));
            }
            entries.extend(r.iter().map(|&e| e % p));
        }
        MatrixFp::new(p, rows.len(), cols, entries)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.entries[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> MatrixFp {
        let mut out = MatrixFp::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// Stack `other` below `self`.
    pub fn stack(&self, other: &MatrixFp) -> Result<MatrixFp> {
        if self.cols != other.cols || self.p != other.p {
            return Err(Error::DimensionMismatch(
                "stacking matrices of different shape or modulus".into(),
            ));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        MatrixFp::new(self.p, self.rows + other.rows, self.cols, entries)
    }

    /// Matrix-vector product self * v.
    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let p = self.p as u64;
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = 0u64;
                for c in 0..self.cols {
                    acc = (acc + self.get(r, c) as u64 * v[c] as u64) % p;
                }
                acc as u32
            })
            .collect())
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (MatrixFp, Vec<usize>) {
        let mut m = self.clone();
        let p = m.p as u64;
        let mut pivots = Vec::new();
        let mut pivot_row = 0usize;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let found = (pivot_row..m.rows).find(|&r| m.get(r, col) != 0);
            let Some(src) = found else { continue };
            if src != pivot_row {
                for c in 0..m.cols {
                    let a = m.get(pivot_row, c);
                    let b = m.get(src, c);
                    m.set(pivot_row, c, b);
                    m.set(src, c, a);
                }
            }
            let inv = inverse_mod(m.get(pivot_row, col), m.p);
            if inv != 1 {
                for c in 0..m.cols {
                    m.set(pivot_row, c, (m.get(pivot_row, c) as u64 * inv as u64 % p) as u32);
                }
            }
            for r in 0..m.rows {
                if r == pivot_row {
                    continue;
                }
                let factor = m.get(r, col) as u64;
                if factor == 0 {
                    continue;
                }
                for c in 0..m.cols {
                    let v = (m.get(r, c) as u64 + (p - factor) * m.get(pivot_row, c) as u64) % p;
                    m.set(r, c, v as u32);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space {v : self * v = 0}. Size is always
    /// cols - rank. Vectors come out of the fixed echelon form, so identical
    /// inputs produce identical bases.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let (rref, pivots) = self.rref();
        let p = self.p;
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = Some(row);
            }
            v
        };
        let mut basis = Vec::new();
        for free_col in 0..self.cols {
            if pivot_set[free_col].is_some() {
                continue;
            }
            let mut vec = vec![0u32; self.cols];
            vec[free_col] = 1;
            for (row, &col) in pivots.iter().enumerate() {
                let e = rref.get(row, free_col);
                if e != 0 {
                    vec[col] = p - e;
                }
            }
            basis.push(vec);
        }
        basis
    }

    /// Coefficients x with selfᵀ · x = target, i.e. express `target` as a
    /// linear combination of the rows of `self`. Returns None when the
    /// target is outside the row span.
    pub fn solve_in_span(&self, target: &[u32]) -> Result<Option<Vec<u32>>> {
        if target.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "target length {} against row length {}",
                target.len(),
                self.cols
            )));
        }
        // Solve the augmented system over the transpose: columns are the
        // rows of self, last column is the target.
        let mut aug = MatrixFp::zeros(self.p, self.cols, self.rows + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(c, r, self.get(r, c));
            }
        }
        for (c, &t) in target.iter().enumerate() {
            aug.set(c, self.rows, t % self.p);
        }
        let (rref, pivots) = aug.rref();
        if pivots.contains(&self.rows) {
            return Ok(None); // pivot in the target column: inconsistent
        }
        let mut x = vec![0u32; self.rows];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = rref.get(row, self.rows);
        }
        Ok(Some(x))
    }

    /// A row basis of the row space, taken from the echelon form.
    pub fn row_basis(&self) -> Vec<Vec<u32>> {
        let (rref, pivots) = self.rref();
        (0..pivots.len()).map(|r| rref.row(r).to_vec()).collect()
    }
}

/// Incremental row echelon: accepts vectors one at a time, keeping only
/// those independent of what came before. Insertion order is part of the
/// contract — greedy basis completion and membership tests both rely on it.
#[derive(Clone, Debug)]
pub struct Echelon {
    p: u32,
    width: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(p: u32, width: usize) -> Self {
        Echelon { p, width, rows: Vec::new(), pivots: Vec::new() }
    }

    /// Residual of v after reduction by the stored rows.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        let mut v: Vec<u32> = v.iter().map(|&e| e % self.p).collect();
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let factor = v[piv] as u64;
            if factor == 0 {
                continue;
            }
            for (ve, re) in v.iter_mut().zip(row) {
                *ve = ((*ve as u64 + (p - factor) * *re as u64) % p) as u32;
            }
        }
        v
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&e| e == 0)
    }

    /// Insert v if independent; returns whether the rank grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.width, "echelon width mismatch");
        let mut r = self.reduce(v);
        let Some(piv) = r.iter().position(|&e| e != 0) else {
            return false;
        };
        let inv = inverse_mod(r[piv], self.p) as u64;
        let p = self.p as u64;
        for e in r.iter_mut() {
            *e = (*e as u64 * inv % p) as u32;
        }
        // keep rows sorted by pivot so reduction stays canonical
        let pos = self.pivots.partition_point(|&q| q < piv);
        self.rows.insert(pos, r);
        self.pivots.insert(pos, piv);
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Multiplicative inverse mod p (p prime, a nonzero).
pub fn inverse_mod(a: u32, p: u32) -> u32 {
    // Fermat: a^(p-2) mod p. p is small in every experiment.
    let mut base = (a % p) as u64;
    let mut exp = p - 2;
    let mut acc = 1u64;
    let p64 = p as u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p64;
        }
        base = base * base % p64;
        exp >>= 1;
    }
    acc as u32
}

/// a + b mod p.
pub fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    (a + b) % p
}

/// a - b mod p.
pub fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    (a + p - b % p) % p
}

/// a * b mod p.
pub fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    (a as u64 * b as u64 % p as u64) as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::SplitMix64;

    /// Determinant by Laplace cofactor expansion: the independent oracle for
    /// rank (rank = largest k with a nonsingular k-by-k submatrix).
    fn det_laplace(m: &MatrixFp, rows: &[usize], cols: &[usize]) -> u32 {
        let p = m.p();
        if rows.is_empty() {
            return 1;
        }
        let r = rows[0];
        let mut acc = 0u32;
        for (j, &c) in cols.iter().enumerate() {
            let e = m.get(r, c);
            if e == 0 {
                continue;
            }
            let sub_cols: Vec<usize> =
                cols.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &c)| c).collect();
            let minor = det_laplace(m, &rows[1..], &sub_cols);
            let term = mul_mod(e, minor, p);
            if j % 2 == 0 {
                acc = add_mod(acc, term, p);
            } else {
                acc = sub_mod(acc, term, p);
            }
        }
        acc
    }

    fn rank_by_minors(m: &MatrixFp) -> usize {
        let n = m.rows().min(m.cols());
        for k in (1..=n).rev() {
            let row_sets = subsets_of_size(m.rows(), k);
            let col_sets = subsets_of_size(m.cols(), k);
            for rs in &row_sets {
                for cs in &col_sets {
                    if det_laplace(m, rs, cs) != 0 {
                        return k;
                    }
                }
            }
        }
        0
    }

    fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        rec(0, n, k, &mut cur, &mut out);
        out
    }

    fn random_matrix(rng: &mut SplitMix64, p: u32, rows: usize, cols: usize) -> MatrixFp {
        let entries = (0..rows * cols).map(|_| rng.below(p as u64) as u32).collect();
        MatrixFp::new(p, rows, cols, entries).unwrap()
    }

    #[test]
    fn rank_identity_and_zero() {
        assert_eq!(MatrixFp::identity(2, 3).rank(), 3);
        assert_eq!(MatrixFp::zeros(5, 4, 7).rank(), 0);
    }

    #[test]
    fn rank_matches_minor_oracle_f3() {
        let mut rng = SplitMix64::new(31);
        for _ in 0..6 {
            let m = random_matrix(&mut rng, 3, 8, 8);
            assert_eq!(m.rank(), rank_by_minors(&m));
        }
        // lower-rank cases reached by multiplying rank-deficient factors
        for _ in 0..4 {
            let a = random_matrix(&mut rng, 3, 8, 3);
            let b = random_matrix(&mut rng, 3, 3, 8);
            let mut prod = MatrixFp::zeros(3, 8, 8);
            for r in 0..8 {
                for c in 0..8 {
                    let mut acc = 0;
                    for k in 0..3 {
                        acc = add_mod(acc, mul_mod(a.get(r, k), b.get(k, c), 3), 3);
                    }
                    prod.set(r, c, acc);
                }
            }
            assert_eq!(prod.rank(), rank_by_minors(&prod));
            assert!(prod.rank() <= 3);
        }
    }

    #[test]
    fn rank_equals_transpose_rank() {
        let mut rng = SplitMix64::new(77);
        for &p in &[2u32, 3, 5, 7] {
            let m = random_matrix(&mut rng, p, 6, 9);
            assert_eq!(m.rank(), m.transpose().rank());
        }
    }

    #[test]
    fn kernel_identity_is_empty_and_parity_vector() {
        assert!(MatrixFp::identity(3, 4).kernel_basis().is_empty());
        let m = MatrixFp::from_rows(2, 2, &[vec![1, 1]]).unwrap();
        assert_eq!(m.kernel_basis(), vec![vec![1, 1]]);
    }

    #[test]
    fn kernel_vectors_annihilate_and_count() {
        let mut rng = SplitMix64::new(101);
        for _ in 0..8 {
            let m = random_matrix(&mut rng, 5, 5, 9);
            let basis = m.kernel_basis();
            assert_eq!(basis.len(), 9 - m.rank());
            for v in &basis {
                assert!(m.mul_vec(v).unwrap().iter().all(|&e| e == 0));
            }
            // basis really is independent
            let bm = MatrixFp::from_rows(5, 9, &basis).unwrap();
            assert_eq!(bm.rank(), basis.len());
        }
    }

    #[test]
    fn solve_in_span_identity_and_outside() {
        let id = MatrixFp::identity(2, 3);
        let x = id.solve_in_span(&[1, 0, 0]).unwrap().unwrap();
        assert_eq!(x, vec![1, 0, 0]);

        let m = MatrixFp::from_rows(2, 2, &[vec![1, 1]]).unwrap();
        assert!(m.solve_in_span(&[1, 0]).unwrap().is_none());
    }

    #[test]
    fn solve_in_span_random_consistent_f7() {
        let mut rng = SplitMix64::new(202);
        for _ in 0..10 {
            let m = random_matrix(&mut rng, 7, 4, 6);
            let coeffs: Vec<u32> = (0..4).map(|_| rng.below(7) as u32).collect();
            let target = m.transpose().mul_vec(&coeffs).unwrap();
            let x = m.solve_in_span(&target).unwrap().expect("consistent system");
            assert_eq!(m.transpose().mul_vec(&x).unwrap(), target);
        }
    }

    #[test]
    fn rref_is_deterministic() {
        let mut rng = SplitMix64::new(303);
        let m = random_matrix(&mut rng, 3, 5, 5);
        let (a, pa) = m.rref();
        let (b, pb) = m.clone().rref();
        assert_eq!(a, b);
        assert_eq!(pa, pb);
    }

    #[test]
    fn rank_plus_nullity() {
        let mut rng = SplitMix64::new(404);
        for &p in &[2u32, 3, 5] {
            let m = random_matrix(&mut rng, p, 7, 5);
            assert_eq!(m.rank() + m.kernel_basis().len(), 5);
        }
    }
}
