//! Small dense linear-algebra kernels: a cyclic-Jacobi eigensolver for
//! Hermitian complex matrices and singular values through the Gram matrix.
//!
//! Matrix sizes in this crate top out around `d⁴ × d⁴` with `d ≤ 4`, so a
//! plain Jacobi sweep is accurate, dependency-free and fast enough.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::tensor::{Tensor, TensorError};

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("expected a square rank-2 tensor, got shape {0:?}")]
    NotSquare(Vec<usize>),

    #[error("expected a rank-2 tensor, got rank {0}")]
    NotAMatrix(usize),

    #[error("matrix is not Hermitian (max defect {0:.3e})")]
    NotHermitian(f64),

    #[error(transparent)]
    Tensor(#[from] TensorError),
}

pub type LinalgResult<T> = Result<T, LinalgError>;

/// Eigendecomposition of a Hermitian matrix: `m = V · diag(values) · V†`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Unitary matrix whose column `k` is the eigenvector of `values[k]`.
    pub vectors: Tensor,
}

fn square_dim(m: &Tensor) -> LinalgResult<usize> {
    if m.rank() != 2 {
        return Err(LinalgError::NotAMatrix(m.rank()));
    }
    if m.shape()[0] != m.shape()[1] {
        return Err(LinalgError::NotSquare(m.shape().to_vec()));
    }
    Ok(m.shape()[0])
}

/// Max modulus of `m − m†`.
pub fn hermitian_defect(m: &Tensor) -> LinalgResult<f64> {
    let d = square_dim(m)?;
    let mut defect = 0.0f64;
    for r in 0..d {
        for c in 0..d {
            defect = defect.max((m.get(&[r, c]) - m.get(&[c, r]).conj()).norm());
        }
    }
    Ok(defect)
}

/// Cyclic-Jacobi eigendecomposition of a Hermitian matrix.
///
/// The input must be Hermitian to within `1e-9` of its scale; the
/// decomposition itself is carried out on the Hermitian part.
pub fn hermitian_eigen(m: &Tensor) -> LinalgResult<HermitianEigen> {
    let d = square_dim(m)?;
    let scale = m.max_abs().max(1.0);
    let defect = hermitian_defect(m)?;
    if defect > 1e-9 * scale {
        return Err(LinalgError::NotHermitian(defect));
    }

    // work on the Hermitian part so tiny asymmetries cannot bias the sweep
    let mut a: Vec<C64> = (0..d * d)
        .map(|f| {
            let (r, c) = (f / d, f % d);
            (m.get(&[r, c]) + m.get(&[c, r]).conj()) * 0.5
        })
        .collect();
    let mut v: Vec<C64> = (0..d * d)
        .map(|f| {
            if f / d == f % d { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
        })
        .collect();

    let off = |a: &[C64]| -> f64 {
        let mut s = 0.0;
        for r in 0..d {
            for c in 0..d {
                if r != c {
                    s += a[r * d + c].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let threshold = 1e-14 * scale * d as f64;
    for _sweep in 0..100 {
        if off(&a) <= threshold {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = a[p * d + q];
                if apq.norm() <= threshold / (d * d) as f64 {
                    continue;
                }
                let app = a[p * d + p].re;
                let aqq = a[q * d + q].re;
                let phase = apq / apq.norm();
                let tau = (app - aqq) / (2.0 * apq.norm());
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // unitary U: col p = (c, s·e^{−iφ}), col q = (−s·e^{iφ}, c)
                let up_p = C64::new(c, 0.0);
                let uq_p = phase.conj() * s;
                let up_q = -phase * s;
                let uq_q = C64::new(c, 0.0);
                // A ← A·U on columns p, q
                for r in 0..d {
                    let arp = a[r * d + p];
                    let arq = a[r * d + q];
                    a[r * d + p] = arp * up_p + arq * uq_p;
                    a[r * d + q] = arp * up_q + arq * uq_q;
                }
                // A ← U†·A on rows p, q
                for col in 0..d {
                    let apc = a[p * d + col];
                    let aqc = a[q * d + col];
                    a[p * d + col] = apc * up_p.conj() + aqc * uq_p.conj();
                    a[q * d + col] = apc * up_q.conj() + aqc * uq_q.conj();
                }
                // V ← V·U
                for r in 0..d {
                    let vrp = v[r * d + p];
                    let vrq = v[r * d + q];
                    v[r * d + p] = vrp * up_p + vrq * uq_p;
                    v[r * d + q] = vrp * up_q + vrq * uq_q;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    let diag: Vec<f64> = (0..d).map(|k| a[k * d + k].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&k| diag[k]).collect();
    let vectors = Tensor::from_fn(&[d, d], |ix| v[ix[0] * d + order[ix[1]]]);
    Ok(HermitianEigen { values, vectors })
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_hermitian_eigenvalue(m: &Tensor) -> LinalgResult<f64> {
    Ok(hermitian_eigen(m)?.values[0])
}

/// Singular values of a (possibly rectangular) complex matrix, descending.
///
/// Computed as the square roots of the eigenvalues of `m†m`, clamped at zero.
pub fn singular_values(m: &Tensor) -> LinalgResult<Vec<f64>> {
    if m.rank() != 2 {
        return Err(LinalgError::NotAMatrix(m.rank()));
    }
    let gram = m.dagger(1)?.matmul(m)?;
    let eig = hermitian_eigen(&gram)?;
    let mut sv: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    sv.reverse();
    Ok(sv)
}

/// Smallest singular value of a square matrix.
pub fn smallest_singular_value(m: &Tensor) -> LinalgResult<f64> {
    let sv = singular_values(m)?;
    Ok(*sv.last().expect("matrix has at least one singular value"))
}

/// Inverse of a square complex matrix by Gauss–Jordan elimination with
/// partial pivoting. Returns `None` when a pivot falls below `1e-12` of the
/// matrix scale.
pub fn invert_matrix(m: &Tensor) -> LinalgResult<Option<Tensor>> {
    let d = square_dim(m)?;
    let scale = m.max_abs().max(1.0);
    let mut a: Vec<C64> = m.data().to_vec();
    let mut inv: Vec<C64> = Tensor::identity(d).data().to_vec();
    for col in 0..d {
        let mut pivot = col;
        for r in (col + 1)..d {
            if a[r * d + col].norm() > a[pivot * d + col].norm() {
                pivot = r;
            }
        }
        if a[pivot * d + col].norm() <= 1e-12 * scale {
            return Ok(None);
        }
        if pivot != col {
            for k in 0..d {
                a.swap(col * d + k, pivot * d + k);
                inv.swap(col * d + k, pivot * d + k);
            }
        }
        let p = a[col * d + col];
        for k in 0..d {
            a[col * d + k] /= p;
            inv[col * d + k] /= p;
        }
        for r in 0..d {
            if r == col {
                continue;
            }
            let factor = a[r * d + col];
            if factor.norm() == 0.0 {
                continue;
            }
            for k in 0..d {
                let ak = a[col * d + k];
                let ik = inv[col * d + k];
                a[r * d + k] -= factor * ak;
                inv[r * d + k] -= factor * ik;
            }
        }
    }
    Ok(Some(Tensor::new(vec![d, d], inv)?))
}
