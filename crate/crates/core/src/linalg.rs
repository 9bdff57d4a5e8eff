//! Exact linear algebra over the scalar field: small dense matrices and an
//! incremental sparse reduced row-echelon form.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::coeff::Scalar;
use crate::series::accumulate;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * other.get(k, j);
                    out.entries[i * other.cols + j] += &t;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc += &(self.get(i, j) * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// Gauss-Jordan inverse; `None` when singular or not square.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.entries.swap(pivot * n + j, col * n + j);
                    inv.entries.swap(pivot * n + j, col * n + j);
                }
            }
            let scale = a.get(col, col).inv().ok()?;
            for j in 0..n {
                a.entries[col * n + j] = a.get(col, j) * &scale;
                inv.entries[col * n + j] = inv.get(col, j) * &scale;
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    let da = &f * a.get(col, j);
                    let di = &f * inv.get(col, j);
                    a.entries[r * n + j] -= &da;
                    inv.entries[r * n + j] -= &di;
                }
            }
        }
        Some(inv)
    }

    pub fn determinant(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Scalar::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return Scalar::zero();
            };
            if pivot != col {
                for j in 0..n {
                    a.entries.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a.get(col, col).clone();
            det = &det * &p;
            let p_inv = p.inv().expect("nonzero pivot");
            for r in col + 1..n {
                if a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col) * &p_inv;
                for j in col..n {
                    let d = &f * a.get(col, j);
                    a.entries[r * n + j] -= &d;
                }
            }
        }
        det
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

pub type SparseVec<K> = BTreeMap<K, Scalar>;

#[derive(Clone, Debug)]
pub struct EchelonRow<K> {
    pub pivot: K,
    pub vector: SparseVec<K>,
    /// Coefficients expressing `vector` in terms of the inserted sources.
    pub combination: BTreeMap<usize, Scalar>,
}

/// Reduced row-echelon basis of a growing subspace. The pivot of a row is
/// its greatest key; every row has coefficient 1 at its pivot and 0 at all
/// other pivots, so the basis depends only on the spanned subspace.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord> {
    rows: Vec<EchelonRow<K>>,
    pivots: BTreeMap<K, usize>,
    track: bool,
}

fn axpy<K: Ord + Clone>(y: &mut BTreeMap<K, Scalar>, a: &Scalar, x: &BTreeMap<K, Scalar>) {
    for (k, v) in x {
        accumulate(y, k.clone(), &(a * v));
    }
}

impl<K: Ord + Clone> Echelon<K> {
    /// With `track`, rows remember how they combine the inserted sources.
    pub fn new(track: bool) -> Self {
        Echelon { rows: Vec::new(), pivots: BTreeMap::new(), track }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Rows sorted by pivot.
    pub fn rows(&self) -> impl Iterator<Item = &EchelonRow<K>> {
        self.pivots.values().map(|&i| &self.rows[i])
    }

    pub fn is_pivot(&self, k: &K) -> bool {
        self.pivots.contains_key(k)
    }

    /// Splits `v = remainder + Σ_s combination[s]·source_s` with the
    /// remainder supported off the pivots.
    pub fn reduce(&self, v: &SparseVec<K>) -> (SparseVec<K>, BTreeMap<usize, Scalar>) {
        let hits: Vec<(usize, Scalar)> = v
            .iter()
            .filter_map(|(k, c)| self.pivots.get(k).map(|&r| (r, c.clone())))
            .collect();
        let mut rem = v.clone();
        let mut combination = BTreeMap::new();
        for (r, c) in hits {
            let row = &self.rows[r];
            axpy(&mut rem, &-&c, &row.vector);
            if self.track {
                axpy(&mut combination, &c, &row.combination);
            }
        }
        (rem, combination)
    }

    /// Adds `v` (labelled `source`) to the span. Returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec<K>, source: usize) -> bool {
        let (rem, used) = self.reduce(&v);
        let Some((pivot, lead)) = rem.iter().next_back().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let scale = lead.inv().expect("nonzero lead");
        let mut vector = SparseVec::new();
        axpy(&mut vector, &scale, &rem);
        let mut combination = BTreeMap::new();
        if self.track {
            combination.insert(source, scale.clone());
            axpy(&mut combination, &-&scale, &used);
        }
        for row in &mut self.rows {
            if let Some(c) = row.vector.get(&pivot).cloned() {
                axpy(&mut row.vector, &-&c, &vector);
                if self.track {
                    axpy(&mut row.combination, &-&c, &combination);
                }
            }
        }
        self.pivots.insert(pivot.clone(), self.rows.len());
        self.rows.push(EchelonRow { pivot, vector, combination });
        true
    }
}
