//! Pure maps, completely positive maps and one level of the doubling
//! construction.
//!
//! A [`PureMap`] is a complex matrix with designated output/input axes. A
//! [`CpMap`] is a completely positive map presented by a nonempty Kraus family
//! `{K_m}`; the transfer matrix and Choi matrix are derived views. Doubling
//! sends `f` to `f ⊗ f*`, the passage from pure to mixed-state semantics, and
//! the partial trace discards a tensor factor of a density matrix.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::linalg::{self, LinalgError};
use crate::tensor::{Tensor, TensorError};

#[derive(Debug, Error)]
pub enum CpmError {
    #[error("expected a rank-2 tensor, got rank {0}")]
    NotAMatrix(usize),

    #[error("a CP map needs at least one Kraus element")]
    EmptyKraus,

    #[error("Kraus elements have inconsistent dimensions")]
    InconsistentKraus,

    #[error("dimension mismatch: map expects {expected}, state has {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("input density matrix is not Hermitian (max defect {0:.3e})")]
    NotHermitian(f64),

    #[error("density matrix on {0} does not factor as {1} × {2}")]
    BadFactorisation(usize, usize, usize),

    #[error(transparent)]
    Tensor(#[from] TensorError),

    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type CpmResult<T> = Result<T, CpmError>;

/// A complex linear map presented as a rank-2 tensor `[out, in]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureMap {
    mat: Tensor,
}

impl PureMap {
    pub fn new(mat: Tensor) -> CpmResult<Self> {
        if mat.rank() != 2 {
            return Err(CpmError::NotAMatrix(mat.rank()));
        }
        Ok(Self { mat })
    }

    pub fn identity(d: usize) -> Self {
        Self { mat: Tensor::identity(d) }
    }

    /// Diagonal matrix from its diagonal entries.
    pub fn diagonal(entries: &[C64]) -> Self {
        let d = entries.len();
        Self {
            mat: Tensor::from_fn(&[d, d], |ix| {
                if ix[0] == ix[1] { entries[ix[0]] } else { C64::new(0.0, 0.0) }
            }),
        }
    }

    /// A column vector viewed as a map from the unit (a state preparation).
    pub fn from_state(amplitudes: &[C64]) -> Self {
        let d = amplitudes.len();
        Self {
            mat: Tensor::from_fn(&[d, 1], |ix| amplitudes[ix[0]]),
        }
    }

    pub fn matrix(&self) -> &Tensor {
        &self.mat
    }

    pub fn d_out(&self) -> usize {
        self.mat.shape()[0]
    }

    pub fn d_in(&self) -> usize {
        self.mat.shape()[1]
    }

    pub fn entry(&self, r: usize, c: usize) -> C64 {
        self.mat.get(&[r, c])
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> CpmResult<Self> {
        if self.d_in() != other.d_out() {
            return Err(CpmError::DimensionMismatch {
                expected: self.d_in(),
                actual: other.d_out(),
            });
        }
        Ok(Self { mat: self.mat.matmul(&other.mat)? })
    }

    pub fn dagger(&self) -> Self {
        Self { mat: self.mat.dagger(1).expect("rank-2 dagger") }
    }

    pub fn conj(&self) -> Self {
        Self { mat: self.mat.conj() }
    }

    /// Entrywise (Schur) square `f ⊙ f`.
    pub fn schur_square(&self) -> Self {
        let mat = Tensor::from_fn(self.mat.shape(), |ix| {
            let z = self.mat.get(ix);
            z * z
        });
        Self { mat }
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        if self.d_in() != self.d_out() {
            return false;
        }
        let gram = self.dagger().mat.matmul(&self.mat).expect("square matmul");
        gram
            .max_abs_diff(&Tensor::identity(self.d_in()))
            .map(|d| d <= tol)
            .unwrap_or(false)
    }
}

/// Doubles a pure map: `f ⊗ conj(f)` with axis order `(out, out*, in, in*)`.
pub fn double(f: &PureMap) -> Tensor {
    let m = f.matrix();
    m.outer(&m.conj())
        .permute(&[0, 2, 1, 3])
        .expect("doubling permutation")
}

/// Two levels of doubling: `f ⊗ f* ⊗ f ⊗ f*` with axis order
/// `(out, out*, out, out*, in, in*, in, in*)`.
pub fn quad_fold(f: &PureMap) -> Tensor {
    let d2 = double(f);
    d2.outer(&d2)
        .permute(&[0, 1, 4, 5, 2, 3, 6, 7])
        .expect("folding permutation")
}

/// A completely positive map in Kraus form.
#[derive(Clone, Debug, PartialEq)]
pub struct CpMap {
    kraus: Vec<PureMap>,
}

impl CpMap {
    pub fn from_kraus(kraus: Vec<PureMap>) -> CpmResult<Self> {
        let first = kraus.first().ok_or(CpmError::EmptyKraus)?;
        let (d_out, d_in) = (first.d_out(), first.d_in());
        if kraus.iter().any(|k| k.d_out() != d_out || k.d_in() != d_in) {
            return Err(CpmError::InconsistentKraus);
        }
        Ok(Self { kraus })
    }

    pub fn identity(d: usize) -> Self {
        Self { kraus: vec![PureMap::identity(d)] }
    }

    pub fn kraus(&self) -> &[PureMap] {
        &self.kraus
    }

    pub fn d_in(&self) -> usize {
        self.kraus[0].d_in()
    }

    pub fn d_out(&self) -> usize {
        self.kraus[0].d_out()
    }

    /// Applies the channel: `ρ ↦ Σ_m K_m ρ K_m†`.
    ///
    /// The input must be a Hermitian square matrix of matching dimension.
    pub fn apply(&self, rho: &Tensor) -> CpmResult<Tensor> {
        self.validate_state(rho)?;
        let mut out = Tensor::zeros(&[self.d_out(), self.d_out()]);
        for k in &self.kraus {
            let term = k
                .matrix()
                .matmul(rho)?
                .matmul(&k.matrix().dagger(1)?)?;
            out = out.add(&term)?;
        }
        Ok(out)
    }

    fn validate_state(&self, rho: &Tensor) -> CpmResult<()> {
        if rho.rank() != 2 {
            return Err(CpmError::NotAMatrix(rho.rank()));
        }
        if rho.shape()[0] != self.d_in() || rho.shape()[1] != self.d_in() {
            return Err(CpmError::DimensionMismatch {
                expected: self.d_in(),
                actual: rho.shape()[0],
            });
        }
        let defect = linalg::hermitian_defect(rho)?;
        if defect > 1e-9 * rho.max_abs().max(1.0) {
            return Err(CpmError::NotHermitian(defect));
        }
        Ok(())
    }

    /// Transfer tensor `Λ[a, b, a', b'] = Σ_m K_m[a,a']·conj(K_m[b,b'])`;
    /// applying it to a vectorised `ρ[a',b']` gives the channel action.
    pub fn transfer(&self) -> Tensor {
        let (o, i) = (self.d_out(), self.d_in());
        Tensor::from_fn(&[o, o, i, i], |ix| {
            self.kraus
                .iter()
                .map(|k| k.entry(ix[0], ix[2]) * k.entry(ix[1], ix[3]).conj())
                .sum()
        })
    }

    /// Second route to the channel action, through the transfer tensor.
    pub fn apply_via_transfer(&self, rho: &Tensor) -> CpmResult<Tensor> {
        self.validate_state(rho)?;
        Ok(self.transfer().contract(rho, &[(2, 0), (3, 1)])?)
    }

    /// Choi matrix `C[(a,a'),(b,b')] = Σ_m K_m[a,a']·conj(K_m[b,b'])` as a
    /// square matrix of side `d_out·d_in`.
    pub fn choi(&self) -> Tensor {
        choi_from_transfer(&self.transfer())
    }

    /// Derived-view report: Choi matrix, positivity and trace preservation.
    pub fn choi_and_check(&self) -> CpmResult<ChoiReport> {
        let choi = self.choi();
        let min_eigenvalue = linalg::min_hermitian_eigenvalue(&choi)?;
        let mut gram = Tensor::zeros(&[self.d_in(), self.d_in()]);
        for k in &self.kraus {
            gram = gram.add(&k.matrix().dagger(1)?.matmul(k.matrix())?)?;
        }
        let tp_defect = gram.max_abs_diff(&Tensor::identity(self.d_in()))?;
        Ok(ChoiReport {
            choi,
            min_eigenvalue,
            is_cp: min_eigenvalue >= -1e-9,
            tp_defect,
            is_trace_preserving: tp_defect <= 1e-9,
        })
    }
}

/// Report produced by [`CpMap::choi_and_check`].
#[derive(Clone, Debug)]
pub struct ChoiReport {
    pub choi: Tensor,
    pub min_eigenvalue: f64,
    pub is_cp: bool,
    pub tp_defect: f64,
    pub is_trace_preserving: bool,
}

/// Regroups a rank-4 transfer tensor `Λ[a,b,a',b']` into the Choi matrix
/// `C[(a,a'),(b,b')]`.
pub fn choi_from_transfer(transfer: &Tensor) -> Tensor {
    let o = transfer.shape()[0];
    let i = transfer.shape()[2];
    transfer
        .permute(&[0, 2, 1, 3])
        .expect("choi permutation")
        .reshape(&[o * i, o * i])
        .expect("choi reshape")
}

/// Positivity check for a Choi matrix: `(is_cp, min_eigenvalue)` with the
/// uniform `−1e−9` tolerance.
pub fn is_cp_choi(choi: &Tensor) -> CpmResult<(bool, f64)> {
    let min = linalg::min_hermitian_eigenvalue(choi)?;
    Ok((min >= -1e-9, min))
}

/// Reconstructs a Kraus family from a Choi matrix by eigendecomposition,
/// clamping eigenvalues below `1e-12` to zero.
pub fn kraus_from_choi(choi: &Tensor, d_out: usize, d_in: usize) -> CpmResult<CpMap> {
    let eig = linalg::hermitian_eigen(choi)?;
    let mut kraus = Vec::new();
    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda < 1e-12 {
            continue;
        }
        let root = lambda.sqrt();
        let mat = Tensor::from_fn(&[d_out, d_in], |ix| {
            eig.vectors.get(&[ix[0] * d_in + ix[1], k]) * root
        });
        kraus.push(PureMap::new(mat)?);
    }
    if kraus.is_empty() {
        // the zero map still needs a representative
        kraus.push(PureMap::new(Tensor::zeros(&[d_out, d_in]))?);
    }
    CpMap::from_kraus(kraus)
}

/// Which tensor factor the partial trace discards.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceOut {
    First,
    Second,
}

/// Partial trace of a density matrix on a bipartite system `A ⊗ B` with
/// dimensions `(d_a, d_b)`.
pub fn partial_trace(rho: &Tensor, d_a: usize, d_b: usize, out: TraceOut) -> CpmResult<Tensor> {
    if rho.rank() != 2 {
        return Err(CpmError::NotAMatrix(rho.rank()));
    }
    let d = rho.shape()[0];
    if rho.shape()[1] != d || d_a * d_b != d {
        return Err(CpmError::BadFactorisation(d, d_a, d_b));
    }
    let lifted = rho.reshape(&[d_a, d_b, d_a, d_b])?;
    let reduced = match out {
        TraceOut::First => lifted.trace_pair(0, 2)?,
        TraceOut::Second => lifted.trace_pair(1, 3)?,
    };
    Ok(reduced)
}
