//! Double dilation and double mixing: the two sibling theories whose
//! cross-copy effects pair ket with bra wires.
//!
//! A double-dilation state on `H` is a rank-4 tensor `S[i,j,k,l]`
//! (ket, bra, ket, bra). Built from a tripartite pure vector `c[i,p,r]` on
//! `A ⊗ B ⊗ C` it reads
//!
//! ```text
//! S[i,j,k,l] = Σ_{p,q,r,s} c[i,p,r]·conj(c[j,p,s])·c[k,q,s]·conj(c[l,q,r])
//! ```
//!
//! the `B` wires traced within each copy and the `C` wires paired *crosswise*
//! between the copies. Double mixing replaces the crosswise pairing by a
//! four-legged spider (one shared classical index), which makes it a
//! sub-theory of double dilation: dephasing the environment of a
//! double-dilation realization reproduces any double-mixing map.
//!
//! The obvious hyper-decoherence candidate `S ↦ S[i,j,j,i]` always produces
//! real symmetric matrices, so it cannot reach generic quantum states, and
//! maps with a nontrivial discarded environment are never invertible within
//! the theory: the invertible maps are exactly the folded unitaries.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::cpm::{self, PureMap};
use crate::linalg::{self, LinalgError};
use crate::tensor::{Tensor, TensorError};

#[derive(Debug, Error)]
pub enum DdError {
    #[error("expected equal-dimension axes, got shape {0:?}")]
    BadShape(Vec<usize>),

    #[error("expected a rank-3 amplitude tensor, got rank {0}")]
    BadAmplitudes(usize),

    #[error("a realization needs at least one Kraus element")]
    EmptyKraus,

    #[error("Kraus element has shape {0:?}, expected rank-3 [out, env, in]")]
    BadKrausShape(Vec<usize>),

    #[error("map tensor is not square: output volume {0}, input volume {1}")]
    NotSquare(usize, usize),

    #[error(transparent)]
    Tensor(#[from] TensorError),

    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type DdResult<T> = Result<T, DdError>;

/// A double-dilation state: rank-4 tensor `S[i,j,k,l]` on `H`.
#[derive(Clone, Debug, PartialEq)]
pub struct DdState {
    tensor: Tensor,
    dim: usize,
}

impl DdState {
    pub fn new(tensor: Tensor) -> DdResult<Self> {
        let shape = tensor.shape().to_vec();
        if shape.len() != 4 || shape.iter().any(|&d| d != shape[0]) {
            return Err(DdError::BadShape(shape));
        }
        let dim = shape[0];
        Ok(Self { tensor, dim })
    }

    pub fn tensor(&self) -> &Tensor {
        &self.tensor
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Trace of each doubled half: `Σ_{i,k} S[i,i,k,k]`.
    pub fn discard(&self) -> f64 {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..self.dim {
            for k in 0..self.dim {
                acc += self.tensor.get(&[i, i, k, k]);
            }
        }
        acc.re
    }

    /// Max violation of `conj(S[i,j,k,l]) = S[j,i,l,k]`,
    /// `S[i,j,k,l] = S[k,l,i,j]` and the reality of the full diagonal.
    pub fn symmetry_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let s = self.tensor.get(&[i, j, k, l]);
                        worst = worst
                            .max((s.conj() - self.tensor.get(&[j, i, l, k])).norm())
                            .max((s - self.tensor.get(&[k, l, i, j])).norm());
                    }
                }
            }
            let diag = self.tensor.get(&[i, i, i, i]);
            worst = worst.max(diag.im.abs()).max((-diag.re).max(0.0));
        }
        worst
    }
}

/// Builds a state from tripartite amplitudes `c[i,p,r]` on `A ⊗ B ⊗ C`.
pub fn dd_state_from_tripartite(c: &Tensor) -> DdResult<DdState> {
    if c.rank() != 3 {
        return Err(DdError::BadAmplitudes(c.rank()));
    }
    let (da, db, dc) = (c.shape()[0], c.shape()[1], c.shape()[2]);
    let tensor = Tensor::from_fn(&[da, da, da, da], |ix| {
        let (i, j, k, l) = (ix[0], ix[1], ix[2], ix[3]);
        let mut acc = C64::new(0.0, 0.0);
        for p in 0..db {
            for q in 0..db {
                for r in 0..dc {
                    for s in 0..dc {
                        acc += c.get(&[i, p, r])
                            * c.get(&[j, p, s]).conj()
                            * c.get(&[k, q, s])
                            * c.get(&[l, q, r]).conj();
                    }
                }
            }
        }
        acc
    });
    DdState::new(tensor)
}

/// A double-dilation or double-mixing realization: a Kraus family for a CP
/// map `H → K ⊗ C`, with the environment `C` paired crosswise (dilation) or
/// through a four-legged spider (mixing).
#[derive(Clone, Debug, PartialEq)]
pub struct DdRealization {
    /// Kraus elements as rank-3 tensors `[out, env, in]`.
    kraus: Vec<Tensor>,
}

impl DdRealization {
    pub fn new(kraus: Vec<Tensor>) -> DdResult<Self> {
        let first = kraus.first().ok_or(DdError::EmptyKraus)?;
        if first.rank() != 3 {
            return Err(DdError::BadKrausShape(first.shape().to_vec()));
        }
        let shape = first.shape().to_vec();
        for k in &kraus {
            if k.shape() != shape.as_slice() {
                return Err(DdError::BadKrausShape(k.shape().to_vec()));
            }
        }
        Ok(Self { kraus })
    }

    pub fn kraus(&self) -> &[Tensor] {
        &self.kraus
    }

    pub fn d_out(&self) -> usize {
        self.kraus[0].shape()[0]
    }

    pub fn d_env(&self) -> usize {
        self.kraus[0].shape()[1]
    }

    pub fn d_in(&self) -> usize {
        self.kraus[0].shape()[2]
    }

    /// Dephases the environment output in the computational basis: Kraus
    /// family `{(id ⊗ P_u)∘K_m}`. Denoting the result crosswise reproduces
    /// the four-legged-spider semantics.
    pub fn dephase_env(&self) -> DdRealization {
        let (o, env, i) = (self.d_out(), self.d_env(), self.d_in());
        let mut kraus = Vec::with_capacity(self.kraus.len() * env);
        for u in 0..env {
            for k in &self.kraus {
                kraus.push(Tensor::from_fn(&[o, env, i], |ix| {
                    if ix[1] == u { k.get(ix) } else { C64::new(0.0, 0.0) }
                }));
            }
        }
        DdRealization { kraus }
    }

    fn pairwise(&self) -> DdResult<Tensor> {
        let nk = self.kraus.len();
        let (o, env, i) = (self.d_out(), self.d_env(), self.d_in());
        let mut stacked = Tensor::zeros(&[nk, o, env, i]);
        for (m, k) in self.kraus.iter().enumerate() {
            for a in 0..o {
                for b in 0..env {
                    for x in 0..i {
                        stacked.set(&[m, a, b, x], k.get(&[a, b, x]));
                    }
                }
            }
        }
        // G[i, r, i', j, s, j'] = Σ_m K_m[i,r,i']·conj(K_m[j,s,j'])
        Ok(stacked.contract(&stacked.conj(), &[(0, 0)])?)
    }
}

/// Denotes a realization with the crosswise pairing: the first copy's
/// ket-side environment wire meets the second copy's bra-side wire and vice
/// versa.
pub fn dd_denote(r: &DdRealization) -> DdResult<Tensor> {
    let g = r.pairwise()?;
    // pair r (axis 1) with the other copy's s-slot (axis 4) and vice versa
    let n8 = g.contract(&g, &[(1, 4), (4, 1)])?; // [i, i', j, j', k, k', l, l']
    Ok(n8.permute(&[0, 2, 4, 6, 1, 3, 5, 7])?)
}

/// Denotes a realization with the four-legged spider: all four environment
/// wires share one classical index.
pub fn dm_denote(r: &DdRealization) -> DdResult<Tensor> {
    let g = r.pairwise()?;
    let (o, env, i) = (r.d_out(), r.d_env(), r.d_in());
    // collapse the two environment slots of each copy onto the diagonal
    let gd = Tensor::from_fn(&[o, env, i, o, i], |ix| {
        g.get(&[ix[0], ix[1], ix[2], ix[3], ix[1], ix[4]])
    });
    let n8 = gd.contract(&gd, &[(1, 1)])?; // [i, i', j, j', k, k', l, l']
    Ok(n8.permute(&[0, 2, 4, 6, 1, 3, 5, 7])?)
}

/// Applies a rank-8 map tensor to a state.
pub fn dd_apply(map: &Tensor, state: &DdState) -> DdResult<DdState> {
    let t = map.contract(state.tensor(), &[(4, 0), (5, 1), (6, 2), (7, 3)])?;
    DdState::new(t)
}

/// The decoherence map `S[i,j,k,l] ↦ [i=j=k=l]·S[i,i,i,i]` as a rank-8
/// tensor; idempotent, and its outputs are classical distributions.
pub fn dd_dec_map(d: usize) -> Tensor {
    Tensor::from_fn(&[d, d, d, d, d, d, d, d], |ix| {
        let diag = ix[0] == ix[1] && ix[1] == ix[2] && ix[2] == ix[3];
        let same = ix[4] == ix[0] && ix[5] == ix[0] && ix[6] == ix[0] && ix[7] == ix[0];
        if diag && same { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
    })
}

/// The candidate hyper-decoherence output `out[i,j] = S[i,j,j,i]`.
///
/// On every state of the theory this matrix is real symmetric, so its image
/// misses every quantum state with non-real off-diagonal entries.
pub fn candidate_hypdec(state: &DdState) -> Tensor {
    let d = state.dim();
    Tensor::from_fn(&[d, d], |ix| state.tensor().get(&[ix[0], ix[1], ix[1], ix[0]]))
}

/// Outcome of an invertibility probe on a rank-8 map tensor.
#[derive(Clone, Copy, Debug)]
pub struct InvertibilityProbe {
    pub smallest_singular_value: f64,
    pub largest_singular_value: f64,
    pub invertible: bool,
}

impl InvertibilityProbe {
    pub fn condition_number(&self) -> f64 {
        self.largest_singular_value / self.smallest_singular_value
    }
}

/// Reshapes a rank-8 map tensor to a square matrix and reports its extreme
/// singular values; invertible means the smallest exceeds `1e-8`.
pub fn invertibility_probe(map: &Tensor) -> DdResult<InvertibilityProbe> {
    if map.rank() != 8 {
        return Err(DdError::BadShape(map.shape().to_vec()));
    }
    let o: usize = map.shape()[..4].iter().product();
    let i: usize = map.shape()[4..].iter().product();
    if o != i {
        return Err(DdError::NotSquare(o, i));
    }
    let flat = map.reshape(&[o, i])?;
    let sv = linalg::singular_values(&flat)?;
    let largest = sv[0];
    let smallest = *sv.last().expect("nonempty singular values");
    Ok(InvertibilityProbe {
        smallest_singular_value: smallest,
        largest_singular_value: largest,
        invertible: smallest > 1e-8,
    })
}

/// The fold of a pure map as a rank-8 tensor (shared with the other
/// theories; invertible exactly when the map is unitary).
pub fn folded_map(f: &PureMap) -> Tensor {
    cpm::quad_fold(f)
}
