//! Dense real-symmetric linear algebra on qubit registers.
//!
//! Qubits are labelled `1..=n`. Qubit 1 is the most significant bit of a
//! basis index, and bit value 0 is spin up, 1 is spin down, so index `b`
//! encodes `|s1 s2 ... sn>`.

use crate::error::{QrgError, Result};

const MAX_DIM: usize = 1 << 10;
const JACOBI_TOLERANCE: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Dense real symmetric matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    /// Builds a matrix from row-major entries, rejecting anything that is not
    /// exactly symmetric.
    pub fn new(dim: usize, entries: Vec<f64>) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(QrgError::EntryCount {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if entries[i * dim + j] != entries[j * dim + i] {
                    return Err(QrgError::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self { dim, data: entries })
    }

    /// Builds a matrix by evaluating `f` on the upper triangle and mirroring.
    pub fn from_upper(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        check_dim(dim)?;
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                data[i * dim + j] = v;
                data[j * dim + i] = v;
            }
        }
        Ok(Self { dim, data })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            data: vec![0.0; dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_upper(dim, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        Self::from_upper(values.len(), |i, j| if i == j { values[i] } else { 0.0 })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.dim + col]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Number of qubits when the dimension is a power of two.
    pub fn nqubits(&self) -> Option<usize> {
        self.dim
            .is_power_of_two()
            .then(|| self.dim.trailing_zeros() as usize)
    }

    pub fn mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.dim {
            return Err(QrgError::DimensionMismatch(self.dim, v.len()));
        }
        Ok(self
            .data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn sub(&self, other: &SymMatrix) -> Result<SymMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &SymMatrix) -> Result<SymMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn scale(&self, factor: f64) -> SymMatrix {
        SymMatrix {
            dim: self.dim,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn zip_with(&self, other: &SymMatrix, f: impl Fn(f64, f64) -> f64) -> Result<SymMatrix> {
        if self.dim != other.dim {
            return Err(QrgError::DimensionMismatch(self.dim, other.dim));
        }
        Ok(SymMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        })
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(QrgError::NotPowerOfTwo(0));
    }
    if dim > MAX_DIM {
        return Err(QrgError::DimensionTooLarge(dim));
    }
    Ok(())
}

fn qubit_count(dim: usize) -> Result<usize> {
    if !dim.is_power_of_two() {
        return Err(QrgError::NotPowerOfTwo(dim));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Real unit vector on `nqubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    nqubits: usize,
    amplitudes: Vec<f64>,
}

impl PureState {
    pub const NORM_TOLERANCE: f64 = 1e-12;

    pub fn new(nqubits: usize, amplitudes: Vec<f64>) -> Result<Self> {
        let dim = 1usize << nqubits;
        if nqubits == 0 || dim > MAX_DIM {
            return Err(QrgError::DimensionTooLarge(dim));
        }
        if amplitudes.len() != dim {
            return Err(QrgError::EntryCount {
                expected: dim,
                got: amplitudes.len(),
            });
        }
        let norm2: f64 = amplitudes.iter().map(|a| a * a).sum();
        if (norm2 - 1.0).abs() > Self::NORM_TOLERANCE {
            return Err(QrgError::NotNormalized(norm2 - 1.0));
        }
        Ok(Self {
            nqubits,
            amplitudes,
        })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(nqubits: usize, mut amplitudes: Vec<f64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(QrgError::NotNormalized(-1.0));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::new(nqubits, amplitudes)
    }

    /// Computational basis state with the given basis index.
    pub fn basis(nqubits: usize, index: usize) -> Result<Self> {
        let mut amps = vec![0.0; 1 << nqubits];
        if index >= amps.len() {
            return Err(QrgError::DimensionMismatch(amps.len(), index));
        }
        amps[index] = 1.0;
        Self::new(nqubits, amps)
    }

    #[inline]
    pub fn nqubits(&self) -> usize {
        self.nqubits
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn dot(&self, other: &PureState) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// The projector `|psi><psi|`.
    pub fn density(&self) -> SymMatrix {
        let dim = self.amplitudes.len();
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                data[i * dim + j] = self.amplitudes[i] * self.amplitudes[j];
            }
        }
        SymMatrix { dim, data }
    }
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Row-major `dim x dim`; column `k` pairs with `eigenvalues[k]`.
    pub eigenvectors: Vec<f64>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> Vec<f64> {
        let n = self.dim();
        (0..n).map(|i| self.eigenvectors[i * n + k]).collect()
    }

    /// `V diag(e) V^T`.
    pub fn reconstruct(&self) -> Result<SymMatrix> {
        let n = self.dim();
        let v = &self.eigenvectors;
        SymMatrix::from_upper(n, |i, j| {
            (0..n)
                .map(|k| v[i * n + k] * self.eigenvalues[k] * v[j * n + k])
                .sum()
        })
    }

    /// Applies `f` to the eigenvalues and rebuilds the matrix.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> Result<SymMatrix> {
        Spectrum {
            eigenvalues: self.eigenvalues.iter().map(|&e| f(e)).collect(),
            eigenvectors: self.eigenvectors.clone(),
        }
        .reconstruct()
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &SymMatrix, b: &SymMatrix) -> Result<SymMatrix> {
    let dim = a.dim * b.dim;
    check_dim(dim)?;
    let mut data = vec![0.0; dim * dim];
    for i in 0..a.dim {
        for j in 0..a.dim {
            let aij = a.get(i, j);
            for k in 0..b.dim {
                let row = (i * b.dim + k) * dim + j * b.dim;
                for l in 0..b.dim {
                    data[row + l] = aij * b.get(k, l);
                }
            }
        }
    }
    Ok(SymMatrix { dim, data })
}

/// Bit shift of qubit `label` in an `nqubits` register.
#[inline]
pub(crate) fn shift_of(label: usize, nqubits: usize) -> usize {
    nqubits - label
}

/// Sorted, deduplicated labels, checked against `1..=nqubits`.
pub(crate) fn normalize_labels(labels: &[usize], nqubits: usize) -> Result<Vec<usize>> {
    let mut out = labels.to_vec();
    out.sort_unstable();
    out.dedup();
    if let Some(&bad) = out.iter().find(|&&l| l == 0 || l > nqubits) {
        return Err(QrgError::QubitOutOfRange {
            label: bad,
            nqubits,
        });
    }
    Ok(out)
}

/// Spreads the bits of `compact` (MSB first) onto the given shifts.
#[inline]
fn scatter(compact: usize, shifts: &[usize]) -> usize {
    let k = shifts.len();
    shifts.iter().enumerate().fold(0, |acc, (pos, &s)| {
        acc | (((compact >> (k - 1 - pos)) & 1) << s)
    })
}

#[inline]
fn gather(full: usize, shifts: &[usize]) -> usize {
    shifts
        .iter()
        .fold(0, |acc, &s| (acc << 1) | ((full >> s) & 1))
}

/// Reduced density matrix on the qubits in `keep` (1-based labels). The
/// result orders the kept qubits by ascending label.
pub fn partial_trace(rho: &SymMatrix, nqubits: usize, keep: &[usize]) -> Result<SymMatrix> {
    if qubit_count(rho.dim)? != nqubits {
        return Err(QrgError::DimensionMismatch(rho.dim, 1 << nqubits));
    }
    if keep.is_empty() {
        return Err(QrgError::EmptyKeep);
    }
    let keep = normalize_labels(keep, nqubits)?;
    if keep.len() == nqubits {
        return Ok(rho.clone());
    }
    let kept_shifts: Vec<usize> = keep.iter().map(|&l| shift_of(l, nqubits)).collect();
    let traced_shifts: Vec<usize> = (1..=nqubits)
        .filter(|l| !keep.contains(l))
        .map(|l| shift_of(l, nqubits))
        .collect();
    let out_dim = 1usize << keep.len();
    let rows: Vec<usize> = (0..out_dim).map(|r| scatter(r, &kept_shifts)).collect();
    let env: Vec<usize> = (0..1usize << traced_shifts.len())
        .map(|t| scatter(t, &traced_shifts))
        .collect();
    SymMatrix::from_upper(out_dim, |r, c| {
        env.iter().map(|&t| rho.get(rows[r] | t, rows[c] | t)).sum()
    })
}

/// Embeds `a ⊗ b` into an `nqubits` register where `a` acts on `part_a` and
/// `b` on `part_b` (disjoint, together covering every qubit). Each factor's
/// qubits are ordered by ascending label, as returned by [`partial_trace`].
pub fn kron_embedded(
    a: &SymMatrix,
    part_a: &[usize],
    b: &SymMatrix,
    part_b: &[usize],
    nqubits: usize,
) -> Result<SymMatrix> {
    let part_a = normalize_labels(part_a, nqubits)?;
    let part_b = normalize_labels(part_b, nqubits)?;
    if part_a.len() + part_b.len() != nqubits || part_a.iter().any(|l| part_b.contains(l)) {
        return Err(QrgError::InvalidBipartition);
    }
    if a.dim != 1 << part_a.len() {
        return Err(QrgError::DimensionMismatch(a.dim, 1 << part_a.len()));
    }
    if b.dim != 1 << part_b.len() {
        return Err(QrgError::DimensionMismatch(b.dim, 1 << part_b.len()));
    }
    let sa: Vec<usize> = part_a.iter().map(|&l| shift_of(l, nqubits)).collect();
    let sb: Vec<usize> = part_b.iter().map(|&l| shift_of(l, nqubits)).collect();
    let dim = 1usize << nqubits;
    let ia: Vec<usize> = (0..dim).map(|i| gather(i, &sa)).collect();
    let ib: Vec<usize> = (0..dim).map(|i| gather(i, &sb)).collect();
    SymMatrix::from_upper(dim, |i, j| a.get(ia[i], ia[j]) * b.get(ib[i], ib[j]))
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Stops once the off-diagonal Frobenius norm drops below
/// `1e-14 * max(1, ||A||_F)`. Eigenvalues come back ascending; each
/// eigenvector's largest-magnitude entry is made positive.
pub fn eigh(a: &SymMatrix) -> Result<Spectrum> {
    let n = a.dim;
    let mut m = a.data.clone();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let threshold = JACOBI_TOLERANCE * a.frobenius_norm().max(1.0);

    let off_norm = |m: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += 2.0 * m[i * n + j] * m[i * n + j];
            }
        }
        s.sqrt()
    };

    let mut converged = off_norm(&m) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(QrgError::NoConvergence {
                sweeps,
                residual: off_norm(&m),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let g = 100.0 * apq.abs();
                if sweeps > 4 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    m[p * n + q] = 0.0;
                    m[q * n + p] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let kp = m[k * n + p];
                    let kq = m[k * n + q];
                    m[k * n + p] = c * kp - s * kq;
                    m[k * n + q] = s * kp + c * kq;
                }
                for k in 0..n {
                    let pk = m[p * n + k];
                    let qk = m[q * n + k];
                    m[p * n + k] = c * pk - s * qk;
                    m[q * n + k] = s * pk + c * qk;
                }
                m[p * n + q] = 0.0;
                m[q * n + p] = 0.0;
                for k in 0..n {
                    let kp = v[k * n + p];
                    let kq = v[k * n + q];
                    v[k * n + p] = c * kp - s * kq;
                    v[k * n + q] = s * kp + c * kq;
                }
            }
        }
        converged = off_norm(&m) <= threshold;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[x * n + x].total_cmp(&m[y * n + y]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| m[k * n + k]).collect();
    let mut eigenvectors = vec![0.0; n * n];
    for (col, &k) in order.iter().enumerate() {
        let mut lead = 0.0f64;
        for i in 0..n {
            let x = v[i * n + k];
            if x.abs() > lead.abs() + 1e-12 {
                lead = x;
            }
        }
        let sign = if lead < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            eigenvectors[i * n + col] = sign * v[i * n + k];
        }
    }
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Sum of absolute eigenvalues.
pub fn trace_norm(a: &SymMatrix) -> Result<f64> {
    Ok(eigh(a)?.eigenvalues.iter().map(|e| e.abs()).sum())
}

const DENSITY_TOLERANCE: f64 = 1e-10;

/// Eigenvalues of a density matrix, clamped at zero after validation.
pub(crate) fn density_eigenvalues(rho: &SymMatrix) -> Result<Spectrum> {
    let tr = rho.trace();
    if (tr - 1.0).abs() > DENSITY_TOLERANCE {
        return Err(QrgError::InvalidDensity(format!("trace {tr}")));
    }
    let spec = eigh(rho)?;
    if let Some(&low) = spec.eigenvalues.first() {
        if low < -DENSITY_TOLERANCE {
            return Err(QrgError::InvalidDensity(format!("eigenvalue {low:e}")));
        }
    }
    Ok(spec)
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &SymMatrix) -> Result<f64> {
    let spec = density_eigenvalues(rho)?;
    let s: f64 = spec
        .eigenvalues
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    Ok(s.max(0.0))
}

/// Binary Shannon entropy in bits.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&p) || p.is_nan() {
        return Err(QrgError::InvalidProbability(p));
    }
    let p = p.clamp(0.0, 1.0);
    let term = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    Ok(term(p) + term(1.0 - p))
}
