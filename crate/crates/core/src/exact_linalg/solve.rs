use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Matrix, Rational, Vector};
use crate::error::{Error, Result};

/// Dense rectangular matrix over the rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RectMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RectMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RectMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let r = rows.len();
        let mut entries = Vec::with_capacity(r * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Shape(format!(
                    "row {i} has length {} but row 0 has length {cols}",
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Ok(RectMatrix {
            rows: r,
            cols,
            entries,
        })
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Result<Self> {
        let mut m = RectMatrix::zero(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            c.check_len(rows)?;
            for i in 0..rows {
                m.set(i, j, c[i].clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }
}

impl From<&Matrix> for RectMatrix {
    fn from(m: &Matrix) -> Self {
        RectMatrix {
            rows: m.dim(),
            cols: m.dim(),
            entries: m.entries().to_vec(),
        }
    }
}

/// One solution of `A x = b` together with a basis of `ker A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSolution {
    pub particular: Vector,
    pub kernel: Vec<Vector>,
}

/// Exact solution of `A x = b` by fraction-free (Bareiss) elimination with full pivoting.
///
/// Returns `Ok(None)` when the system is inconsistent.
pub fn solve_linear(a: &RectMatrix, b: &Vector) -> Result<Option<LinearSolution>> {
    if b.len() != a.rows {
        return Err(Error::Shape(format!(
            "right-hand side has length {} but the matrix has {} rows",
            b.len(),
            a.rows
        )));
    }
    let (m, c) = (a.rows, a.cols);

    // Clear denominators row by row; the augmented column rides along at index c.
    let mut rows: Vec<Vec<BigInt>> = (0..m)
        .map(|i| {
            let row: Vec<&Rational> = (0..c).map(|j| a.get(i, j)).chain([&b[i]]).collect();
            let lcm = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            row.iter()
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect()
        })
        .collect();
    let mut col_perm: Vec<usize> = (0..c).collect();
    let mut prev = BigInt::one();
    let mut rank = 0;

    while rank < m.min(c) {
        let pivot = (rank..m)
            .flat_map(|i| (rank..c).map(move |j| (i, j)))
            .filter(|&(i, j)| !rows[i][j].is_zero())
            .min_by_key(|&(i, j)| rows[i][j].bits());
        let Some((pi, pj)) = pivot else { break };
        rows.swap(rank, pi);
        if pj != rank {
            for row in rows.iter_mut() {
                row.swap(rank, pj);
            }
            col_perm.swap(rank, pj);
        }
        let k = rank;
        let (head, tail) = rows.split_at_mut(k + 1);
        let prow = &head[k];
        for row in tail.iter_mut() {
            for j in (k + 1)..=c {
                let v = &prow[k] * &row[j] - &row[k] * &prow[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = prow[k].clone();
        rank += 1;
    }

    if rows[rank..].iter().any(|row| !row[c].is_zero()) {
        return Ok(None);
    }

    let to_q = |x: &BigInt| Rational::from_big(x.clone(), BigInt::one()).expect("unit denominator");
    let back_substitute = |rhs: Vec<Rational>, free: Option<usize>| -> Vec<Rational> {
        let mut y = vec![Rational::zero(); c];
        if let Some(f) = free {
            y[f] = Rational::one();
        }
        for k in (0..rank).rev() {
            let mut acc = rhs[k].clone();
            for j in (k + 1)..c {
                if !y[j].is_zero() && !rows[k][j].is_zero() {
                    acc -= to_q(&rows[k][j]) * &y[j];
                }
            }
            y[k] = acc / to_q(&rows[k][k]);
        }
        let mut x = vec![Rational::zero(); c];
        for (pos, &orig) in col_perm.iter().enumerate() {
            x[orig] = y[pos].clone();
        }
        x
    };

    let rhs: Vec<Rational> = (0..rank).map(|k| to_q(&rows[k][c])).collect();
    let particular = Vector::new(back_substitute(rhs, None));
    let kernel = (rank..c)
        .map(|f| Vector::new(back_substitute(vec![Rational::zero(); rank], Some(f))))
        .collect();
    Ok(Some(LinearSolution { particular, kernel }))
}

/// Rank of the span of the given vectors.
pub fn rank(vectors: &[Vector]) -> usize {
    span_basis(vectors).len()
}

/// Reduced echelon basis of the span of `vectors`.
pub fn span_basis(vectors: &[Vector]) -> Vec<Vector> {
    let mut echelon = Echelon::default();
    for v in vectors {
        let _ = echelon.insert(v.clone());
    }
    echelon.rows.into_iter().map(|(_, r)| r).collect()
}

#[derive(Default, Clone, Debug)]
struct Echelon {
    // (pivot column, row normalized to 1 at the pivot and 0 at the other pivots)
    rows: Vec<(usize, Vector)>,
}

impl Echelon {
    fn reduce(&self, mut v: Vector) -> Vector {
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                v = &v - &row.scale(&f);
            }
        }
        v
    }

    /// Inserts `v`; returns its pivot column, or `None` if `v` was already in the span.
    fn insert(&mut self, v: Vector) -> Option<usize> {
        let r = self.reduce(v);
        let p = (0..r.len())
            .filter(|&j| !r[j].is_zero())
            .min_by_key(|&j| (r[j].height(), j))?;
        let inv = r[p].recip().expect("nonzero pivot");
        let r = r.scale(&inv);
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                *row = &*row - &r.scale(&f);
            }
        }
        self.rows.push((p, r));
        Some(p)
    }
}

/// Exact coefficient extraction for a fixed linearly independent family.
///
/// Picks `k` coordinates on which the family is invertible, so a membership
/// query costs one small matrix-vector product plus an exact verification.
#[derive(Clone, Debug)]
pub struct SpanSolver {
    len: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
    // inverse of the k×k restriction basis[.][pivots[.]], indexed [coefficient][pivot]
    inverse: Vec<Vec<Rational>>,
}

impl SpanSolver {
    pub fn new(len: usize, basis: Vec<Vector>) -> Result<Self> {
        let mut echelon = Echelon::default();
        let mut pivots = Vec::with_capacity(basis.len());
        for (index, b) in basis.iter().enumerate() {
            b.check_len(len)?;
            match echelon.insert(b.clone()) {
                Some(p) => pivots.push(p),
                None => return Err(Error::DependentBasis { index }),
            }
        }
        let k = basis.len();
        let restricted = Matrix::from_fn(k, |p, i| basis[i][pivots[p]].clone());
        let inv = restricted
            .inverse()
            .expect("restriction to pivot coordinates is invertible");
        let inverse = inv.rows();
        Ok(SpanSolver {
            len,
            basis,
            pivots,
            inverse,
        })
    }

    pub fn from_matrices(n: usize, basis: &[Matrix]) -> Result<Self> {
        let vectors = basis
            .iter()
            .map(|m| {
                m.check_dim(n)?;
                Ok(Vector::new(m.entries().to_vec()))
            })
            .collect::<Result<Vec<_>>>()?;
        SpanSolver::new(n * n, vectors)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// Coefficients `c` with `candidate = Σ c_i basis_i`, or `None` if not in the span.
    pub fn coefficients(&self, candidate: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if candidate.len() != self.len {
            return Err(Error::DimensionMismatch {
                expected: self.len,
                found: candidate.len(),
            });
        }
        let coeffs: Vec<Rational> = self
            .inverse
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.pivots)
                    .map(|(a, &p)| a * &candidate[p])
                    .sum()
            })
            .collect();
        for (t, target) in candidate.iter().enumerate() {
            let recon: Rational = coeffs
                .iter()
                .zip(&self.basis)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, b)| c * &b[t])
                .sum();
            if &recon != target {
                return Ok(None);
            }
        }
        Ok(Some(coeffs))
    }
}

/// Exact membership of `candidate` in the span of `basis` with coefficients.
pub fn span_membership(basis: &[Matrix], candidate: &Matrix) -> Result<Option<Vec<Rational>>> {
    let n = candidate.dim();
    SpanSolver::from_matrices(n, basis)?.coefficients(candidate.entries())
}

/// Inertia `(n_plus, n_minus, n_zero)` of a symmetric rational matrix.
///
/// Symmetric LDLᵀ with diagonal pivots when available and 2×2 pivots
/// `[[0, a], [a, 0]]` (inertia (1, 1)) when the remaining diagonal vanishes.
pub fn symmetric_inertia(s: &Matrix) -> Result<(usize, usize, usize)> {
    if !s.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let mut a: Vec<Vec<Rational>> = s.rows();
    let (mut plus, mut minus) = (0, 0);
    while !a.is_empty() {
        let m = a.len();
        if let Some(p) = (0..m)
            .filter(|&i| !a[i][i].is_zero())
            .min_by_key(|&i| a[i][i].height())
        {
            let d = a[p][p].clone();
            if d.signum() > 0 {
                plus += 1;
            } else {
                minus += 1;
            }
            let row = a[p].clone();
            a = (0..m)
                .filter(|&i| i != p)
                .map(|i| {
                    (0..m)
                        .filter(|&j| j != p)
                        .map(|j| &a[i][j] - &(&a[i][p] * &row[j]) / &d)
                        .collect()
                })
                .collect();
            continue;
        }
        let Some((p, q)) = (0..m)
            .flat_map(|i| ((i + 1)..m).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_zero())
        else {
            break;
        };
        // Block [[0, b], [b, 0]] has inverse [[0, 1/b], [1/b, 0]].
        plus += 1;
        minus += 1;
        let b = a[p][q].clone();
        let rest: Vec<usize> = (0..m).filter(|&i| i != p && i != q).collect();
        a = rest
            .iter()
            .map(|&i| {
                rest.iter()
                    .map(|&j| {
                        let corr = &(&a[i][p] * &a[q][j] + &a[i][q] * &a[p][j]) / &b;
                        &a[i][j] - &corr
                    })
                    .collect()
            })
            .collect();
    }
    let n = s.dim();
    Ok((plus, minus, n - plus - minus))
}

/// True when `m` is invertible over ℚ.
pub fn is_invertible(m: &Matrix) -> bool {
    let rm = RectMatrix::from(m);
    matches!(
        solve_linear(&rm, &Vector::zero(m.dim())),
        Ok(Some(sol)) if sol.kernel.is_empty()
    )
}
