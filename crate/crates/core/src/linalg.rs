//! Dense complex linear algebra for small qubit registers.
//!
//! Matrices are `nalgebra` dense matrices over `Complex<f64>`. Multi-qubit
//! indices follow the global convention: factor 0 is the leftmost ket, i.e.
//! the most significant digit of the row/column index.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

/// Max entry-wise `|M - M†|` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Max `|Tr ρ - 1|` accepted for a density matrix.
pub const TRACE_TOL: f64 = 1e-12;
/// Most negative eigenvalue accepted for a density matrix.
pub const PSD_TOL: f64 = 1e-10;
/// Eigenvalues below this magnitude count as zero for ranks.
pub const RANK_TOL: f64 = 1e-12;

pub(crate) fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub(crate) fn c_re(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

/// Largest entry of `|m - m†|`.
pub fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Largest entry-wise modulus of `a - b`.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn check_square(m: &ComplexMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    Ok(())
}

fn check_finite(m: &ComplexMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Eigendecomposition of a Hermitian matrix. Eigenvalues are returned in
/// ascending order together with the matching orthonormal eigenvectors as
/// columns.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    check_square(m)?;
    check_finite(m)?;
    let dev = hermitian_deviation(m);
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(m.nrows(), order.len(), |i, j| {
        eig.eigenvectors[(i, order[j])]
    });
    Ok((values, vectors))
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(m).map(|(v, _)| v)
}

/// Trace norm `Tr|h|`: the sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(h: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(h)?.iter().map(|l| l.abs()).sum())
}

/// Number of eigenvalues with `|λ| >= RANK_TOL`.
pub fn rank(h: &ComplexMatrix) -> Result<usize> {
    Ok(hermitian_eigenvalues(h)?
        .iter()
        .filter(|l| l.abs() >= RANK_TOL)
        .count())
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Kronecker product of a vector pair.
pub fn kron_vec(a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
    a.kronecker(b)
}

/// Outer product `|v⟩⟨v|`.
pub fn projector(v: &ComplexVector) -> ComplexMatrix {
    v * v.adjoint()
}

/// The 4x4 operator exchanging two qubit factors.
pub fn swap_operator() -> ComplexMatrix {
    let mut s = ComplexMatrix::zeros(4, 4);
    for (from, to) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
        s[(to, from)] = c_re(1.0);
    }
    s
}

/// Permutation operator on `n` qubits sending factor `k` to position
/// `perm[k]`.
pub fn qubit_permutation(n: usize, perm: &[usize]) -> Result<ComplexMatrix> {
    if perm.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: perm.len(),
        });
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::invalid(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    let dim = 1usize << n;
    let mut out = ComplexMatrix::zeros(dim, dim);
    for x in 0..dim {
        let mut y = 0usize;
        for (k, &p) in perm.iter().enumerate() {
            let bit = (x >> (n - 1 - k)) & 1;
            y |= bit << (n - 1 - p);
        }
        out[(y, x)] = c_re(1.0);
    }
    Ok(out)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Orthogonal projector onto the permutation-symmetric subspace of `n`
/// qubits.
///
/// Averaging the permutation operators over the symmetric group gives
/// `⟨x|P|y⟩ = 1/C(n, w)` when `x` and `y` share the Hamming weight `w`, and
/// zero otherwise.
pub fn symmetric_projector(n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::invalid(
            "symmetric projector needs at least one qubit",
        ));
    }
    if n > 16 {
        return Err(Error::invalid(format!("{n} qubits is beyond dense range")));
    }
    let dim = 1usize << n;
    let weights: Vec<u32> = (0..dim).map(|x| (x as u32).count_ones()).collect();
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| {
        if weights[i] == weights[j] {
            c_re(1.0 / binomial(n, weights[i] as usize))
        } else {
            C64::default()
        }
    }))
}

/// Hermitian, positive semidefinite, unit-trace matrix with a record of the
/// subsystem dimensions it is a tensor product over.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    factor_shape: Vec<usize>,
}

impl DensityMatrix {
    /// Validates `matrix` as a density operator on `factor_shape`.
    pub fn new(matrix: ComplexMatrix, factor_shape: Vec<usize>) -> Result<Self> {
        check_square(&matrix)?;
        check_finite(&matrix)?;
        let dim: usize = factor_shape.iter().product();
        if dim != matrix.nrows() {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: matrix.nrows(),
            });
        }
        if factor_shape.contains(&0) {
            return Err(Error::invalid("factor dimensions must be positive"));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr.re));
        }
        let eig = hermitian_eigenvalues(&matrix)?;
        let min = eig.first().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(Self {
            matrix,
            factor_shape,
        })
    }

    /// Builds a state on `n` qubits.
    pub fn qubits(matrix: ComplexMatrix, n: usize) -> Result<Self> {
        Self::new(matrix, vec![2; n])
    }

    /// `|ψ⟩⟨ψ|` for a normalized copy of `psi`.
    pub fn from_pure(psi: &ComplexVector, factor_shape: Vec<usize>) -> Result<Self> {
        let norm = psi.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::invalid("state vector has zero or non-finite norm"));
        }
        Self::new(projector(&(psi / c_re(norm))), factor_shape)
    }

    /// `I/d` on the given factors.
    pub fn maximally_mixed(factor_shape: Vec<usize>) -> Result<Self> {
        let dim: usize = factor_shape.iter().product();
        Self::new(
            ComplexMatrix::identity(dim, dim) / c_re(dim as f64),
            factor_shape,
        )
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn factor_shape(&self) -> &[usize] {
        &self.factor_shape
    }

    /// Number of qubit factors, or `None` if any factor is not a qubit.
    pub fn n_qubits(&self) -> Option<usize> {
        self.factor_shape
            .iter()
            .all(|&d| d == 2)
            .then_some(self.factor_shape.len())
    }

    /// `self ⊗ other`; the factor shapes concatenate.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut factor_shape = self.factor_shape.clone();
        factor_shape.extend_from_slice(&other.factor_shape);
        DensityMatrix {
            matrix: kron(&self.matrix, &other.matrix),
            factor_shape,
        }
    }

    /// Traces out every factor not listed in `keep`. Indices must be strictly
    /// increasing and in range; an empty `keep` yields the 1x1 scalar state.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let nf = self.factor_shape.len();
        if keep.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!(
                "kept factors {keep:?} must be strictly increasing"
            )));
        }
        if let Some(&bad) = keep.iter().find(|&&k| k >= nf) {
            return Err(Error::invalid(format!(
                "factor index {bad} out of range for {nf} factors"
            )));
        }
        let dims = &self.factor_shape;
        let kept_shape: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
        let traced: Vec<usize> = (0..nf).filter(|k| !keep.contains(k)).collect();
        let kept_dim: usize = kept_shape.iter().product();
        let traced_dim: usize = traced.iter().map(|&k| dims[k]).product();

        // Compose a full index from kept and traced digits.
        let compose = |kept_idx: usize, traced_idx: usize| -> usize {
            let mut digits = vec![0usize; nf];
            let mut rem = kept_idx;
            for &k in keep.iter().rev() {
                digits[k] = rem % dims[k];
                rem /= dims[k];
            }
            let mut rem = traced_idx;
            for &k in traced.iter().rev() {
                digits[k] = rem % dims[k];
                rem /= dims[k];
            }
            digits.iter().zip(dims).fold(0, |acc, (d, n)| acc * n + d)
        };

        let mut out = ComplexMatrix::zeros(kept_dim, kept_dim);
        for t in 0..traced_dim {
            let full: Vec<usize> = (0..kept_dim).map(|k| compose(k, t)).collect();
            for i in 0..kept_dim {
                for j in 0..kept_dim {
                    out[(i, j)] += self.matrix[(full[i], full[j])];
                }
            }
        }
        Ok(DensityMatrix {
            matrix: out,
            factor_shape: kept_shape,
        })
    }

    /// Eigen-ensemble `{(p_k, |v_k⟩)}` with `p_k > RANK_TOL`, weights
    /// renormalized to sum to one. Eigenvalues are in descending order.
    pub fn eigen_ensemble(&self) -> Result<Vec<(f64, ComplexVector)>> {
        let (values, vectors) = hermitian_eigen(&self.matrix)?;
        let mut members: Vec<(f64, ComplexVector)> = values
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &l)| l > RANK_TOL)
            .map(|(k, &l)| (l, vectors.column(k).into_owned()))
            .collect();
        let total: f64 = members.iter().map(|(w, _)| w).sum();
        for (w, _) in &mut members {
            *w /= total;
        }
        Ok(members)
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Bloch vector `(⟨X⟩, ⟨Y⟩, ⟨Z⟩)` of a single-qubit state.
    pub fn bloch_vector(&self) -> Result<[f64; 3]> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: self.dim(),
            });
        }
        let m = &self.matrix;
        Ok([
            2.0 * m[(0, 1)].re,
            -2.0 * m[(0, 1)].im,
            (m[(0, 0)] - m[(1, 1)]).re,
        ])
    }

    /// Single-qubit state `(I + r·σ)/2`.
    pub fn from_bloch(r: [f64; 3]) -> Result<Self> {
        let m = ComplexMatrix::from_row_slice(
            2,
            2,
            &[
                c_re((1.0 + r[2]) / 2.0),
                c(r[0] / 2.0, -r[1] / 2.0),
                c(r[0] / 2.0, r[1] / 2.0),
                c_re((1.0 - r[2]) / 2.0),
            ],
        );
        Self::new(m, vec![2])
    }
}
