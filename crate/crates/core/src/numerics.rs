//! Small dense symmetric linear algebra: Cholesky factorization, bordered
//! (grow-only) Cholesky chains and cyclic Jacobi eigendecomposition.

use crate::error::{Error, Result};

/// Relative pivot threshold: a pivot must exceed `PIVOT_TOL * max diagonal`.
pub const PIVOT_TOL: f64 = 1e-12;

/// Symmetric matrix stored as its row-major lower triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    lower: Vec<f64>,
}

#[inline]
fn tri(i: usize, j: usize) -> usize {
    debug_assert!(j <= i);
    i * (i + 1) / 2 + j
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        SymmetricMatrix {
            n,
            lower: vec![0.0; n * (n + 1) / 2],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![1.0; n])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    /// Builds from a full row-major square matrix, which must be symmetric
    /// up to `1e-12` relative.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Domain("matrix is not square".into()));
            }
            for j in 0..=i {
                let (a, b) = (rows[i][j], rows[j][i]);
                if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::Domain(format!("matrix is not symmetric at ({i}, {j})")));
                }
                m.set(i, j, a);
            }
        }
        Ok(m)
    }

    /// Builds from an entry function evaluated on the lower triangle.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                m.lower[tri(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j <= i {
            self.lower[tri(i, j)]
        } else {
            self.lower[tri(j, i)]
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        if j <= i {
            self.lower[tri(i, j)] = v;
        } else {
            self.lower[tri(j, i)] = v;
        }
    }

    pub fn max_diagonal(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).fold(0.0, f64::max)
    }

    /// Principal submatrix on `idx` (in the given order), plus `shift` on the diagonal.
    pub fn principal(&self, idx: &[usize], shift: f64) -> SymmetricMatrix {
        SymmetricMatrix::from_fn(idx.len(), |a, b| {
            self.get(idx[a], idx[b]) + if a == b { shift } else { 0.0 }
        })
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    pub fn frobenius(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                s += self.get(i, j).powi(2);
            }
        }
        s.sqrt()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }
}

/// Lower-triangular Cholesky factor `L` with `L Lᵀ = M`.
#[derive(Debug, Clone, PartialEq)]
pub struct CholeskyFactor {
    n: usize,
    lower: Vec<f64>,
}

/// Cholesky factorization; fails with the index of the first bad pivot.
pub fn chol_factor(m: &SymmetricMatrix) -> Result<CholeskyFactor> {
    let n = m.n();
    let threshold = PIVOT_TOL * m.max_diagonal();
    let mut l = vec![0.0; n * (n + 1) / 2];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = m.get(i, j);
            for k in 0..j {
                sum -= l[tri(i, k)] * l[tri(j, k)];
            }
            if i == j {
                if sum <= threshold || sum.is_nan() {
                    return Err(Error::NotPositiveDefinite { pivot: i, value: sum });
                }
                l[tri(i, i)] = sum.sqrt();
            } else {
                l[tri(i, j)] = sum / l[tri(j, j)];
            }
        }
    }
    Ok(CholeskyFactor { n, lower: l })
}

impl CholeskyFactor {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j <= i {
            self.lower[tri(i, j)]
        } else {
            0.0
        }
    }

    /// Solves `L z = b`.
    pub fn forward(&self, b: &[f64]) -> Vec<f64> {
        forward_packed(&self.lower, b)
    }

    /// Solves `Lᵀ x = z`.
    pub fn backward(&self, z: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x = z.to_vec();
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= self.lower[tri(k, i)] * x[k];
            }
            x[i] = s / self.lower[tri(i, i)];
        }
        x
    }

    /// Solves `M x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        self.backward(&self.forward(b))
    }
}

fn forward_packed(lower: &[f64], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut z = vec![0.0; n];
    for i in 0..n {
        let row = &lower[tri(i, 0)..tri(i, 0) + i + 1];
        let s: f64 = row[..i].iter().zip(&z[..i]).map(|(l, v)| l * v).sum();
        z[i] = (b[i] - s) / row[i];
    }
    z
}

/// Cholesky factor of a principal submatrix that grows one index at a time.
///
/// Greedy chains only ever add elements, so a bordered update replaces a
/// full refactorization: appending a row costs `O(k²)` for a `k×k` factor.
#[derive(Debug, Clone, Default)]
pub struct CholChain {
    members: Vec<usize>,
    lower: Vec<f64>,
    max_diag: f64,
}

impl CholChain {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        CholChain {
            members: Vec::with_capacity(n),
            lower: Vec::with_capacity(n * (n + 1) / 2),
            max_diag: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Appends index `i` with `border[k] = M[members[k], i]` and `diag = M[i, i]`.
    /// Returns the new factor row (length `len() + 1` after the call).
    pub fn extend(&mut self, i: usize, border: &[f64], diag: f64) -> Result<&[f64]> {
        let k = self.members.len();
        if self.members.contains(&i) {
            return Err(Error::Domain(format!("index {i} is already in the chain")));
        }
        if border.len() != k {
            return Err(Error::Domain(format!(
                "border has length {}, expected {k}",
                border.len()
            )));
        }
        let l = forward_packed(&self.lower, border);
        let schur = diag - l.iter().map(|v| v * v).sum::<f64>();
        let max_diag = self.max_diag.max(diag);
        if schur <= PIVOT_TOL * max_diag || schur.is_nan() {
            return Err(Error::NotPositiveDefinite {
                pivot: k,
                value: schur,
            });
        }
        self.max_diag = max_diag;
        self.lower.extend_from_slice(&l);
        self.lower.push(schur.sqrt());
        self.members.push(i);
        Ok(&self.lower[tri(k, 0)..])
    }

    /// Solves `L z = b` with the current factor.
    pub fn forward(&self, b: &[f64]) -> Vec<f64> {
        forward_packed(&self.lower, b)
    }

    pub fn factor(&self) -> CholeskyFactor {
        CholeskyFactor {
            n: self.members.len(),
            lower: self.lower.clone(),
        }
    }
}

/// Eigen-decomposition `M = V diag(λ) Vᵀ` by cyclic Jacobi rotations.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// Column `k` (stored as `vectors[k]`) is the eigenvector of `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

const JACOBI_MAX_SWEEPS: usize = 100;
/// Largest matrix accepted by the Jacobi routines.
pub const JACOBI_LIMIT: usize = 512;

/// Cyclic Jacobi until the off-diagonal norm is at most `1e-12 ‖M‖_F`.
pub fn symmetric_eigen(m: &SymmetricMatrix) -> Result<SymmetricEigen> {
    let n = m.n();
    if n > JACOBI_LIMIT {
        return Err(Error::DimensionTooLarge {
            dim: n,
            limit: JACOBI_LIMIT,
        });
    }
    let mut a = m.to_rows();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let target = 1e-12 * m.frobenius();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }

    let values: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    let vectors = (0..n).map(|k| (0..n).map(|i| v[i][k]).collect()).collect();
    Ok(SymmetricEigen { values, vectors })
}

/// `(λ_min, λ_max)` of a symmetric matrix.
pub fn eigen_extremes(m: &SymmetricMatrix) -> Result<(f64, f64)> {
    let e = symmetric_eigen(m)?;
    let lo = e.values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = e.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_pd(n: usize, rng: &mut impl Rng) -> SymmetricMatrix {
        let b: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        SymmetricMatrix::from_fn(n, |i, j| {
            (0..n).map(|k| b[i][k] * b[j][k]).sum::<f64>() + if i == j { 0.5 } else { 0.0 }
        })
    }

    #[test]
    fn factor_examples() {
        let id = chol_factor(&SymmetricMatrix::identity(3)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(id.get(i, j), if i == j { 1.0 } else { 0.0 });
            }
        }
        let m = SymmetricMatrix::from_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]).unwrap();
        let l = chol_factor(&m).unwrap();
        assert_eq!(l.get(0, 0), 2.0);
        assert_eq!(l.get(1, 0), 1.0);
        assert!((l.get(1, 1) - 2f64.sqrt()).abs() < 1e-15);

        let bad = SymmetricMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(
            chol_factor(&bad),
            Err(Error::NotPositiveDefinite { pivot: 1, .. })
        ));
    }

    #[test]
    fn solve_recovers_rhs() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = random_pd(6, &mut rng);
        let b: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
        let x = chol_factor(&m).unwrap().solve(&b);
        let r = m.mul_vec(&x);
        for (ri, bi) in r.iter().zip(&b) {
            assert!((ri - bi).abs() < 1e-10);
        }
    }

    #[test]
    fn chain_extend_examples() {
        let mut c = CholChain::new();
        let row = c.extend(3, &[], 9.0).unwrap();
        assert_eq!(row, &[3.0]);
        // [[9, 3], [3, 1]] is singular: Schur complement 1 - 1 = 0
        assert!(matches!(
            c.extend(1, &[3.0], 1.0),
            Err(Error::NotPositiveDefinite { pivot: 1, .. })
        ));
        assert_eq!(c.len(), 1);
        assert!(c.extend(3, &[9.0], 10.0).is_err());
    }

    #[test]
    fn chain_matches_refactorization_on_every_prefix() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for trial in 0..50 {
            let n = 1 + trial % 12;
            let m = random_pd(n, &mut rng);
            let mut order: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                order.swap(i, rng.random_range(0..=i));
            }
            let mut chain = CholChain::new();
            for (k, &i) in order.iter().enumerate() {
                let border: Vec<f64> = order[..k].iter().map(|&j| m.get(j, i)).collect();
                chain.extend(i, &border, m.get(i, i)).unwrap();
                let direct = chol_factor(&m.principal(&order[..=k], 0.0)).unwrap();
                let got = chain.factor();
                for a in 0..=k {
                    for b in 0..=a {
                        let (x, y) = (got.get(a, b), direct.get(a, b));
                        assert!((x - y).abs() <= 1e-10 * y.abs().max(1.0));
                    }
                }
            }
        }
    }

    #[test]
    fn eigen_examples() {
        let (lo, hi) = eigen_extremes(&SymmetricMatrix::from_diagonal(&[1.0, 4.0])).unwrap();
        assert_eq!((lo, hi), (1.0, 4.0));
        let m = SymmetricMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let (lo, hi) = eigen_extremes(&m).unwrap();
        assert!((lo - 1.0).abs() < 1e-12 && (hi - 3.0).abs() < 1e-12);
        assert_eq!(eigen_extremes(&SymmetricMatrix::identity(4)).unwrap(), (1.0, 1.0));
    }

    #[test]
    fn rayleigh_quotients_lie_between_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_pd(8, &mut rng);
        let (lo, hi) = eigen_extremes(&m).unwrap();
        for _ in 0..100 {
            let x: Vec<f64> = (0..8).map(|_| rng.random_range(-1.0..1.0)).collect();
            let nrm: f64 = x.iter().map(|v| v * v).sum();
            let q: f64 = m.mul_vec(&x).iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() / nrm;
            assert!(q >= lo - 1e-9 && q <= hi + 1e-9);
        }
    }

    #[test]
    fn eigenvectors_reconstruct_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let m = random_pd(5, &mut rng);
        let e = symmetric_eigen(&m).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let r: f64 = (0..5)
                    .map(|k| e.values[k] * e.vectors[k][i] * e.vectors[k][j])
                    .sum();
                assert!((r - m.get(i, j)).abs() < 1e-10);
            }
        }
    }
}
