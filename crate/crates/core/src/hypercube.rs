//! Density hypercubes: states, maps, bridges, hyper-decoherence and its
//! probabilistic completion, the phase and hyper-phase families, and the
//! embedded quantum sector.
//!
//! Objects are two doubled copies of a Hilbert space `H`. A state is a rank-4
//! tensor `T[a,b,c,d]` where `a, c` are ket indices and `b, d` bra indices;
//! `(a,b)` is the first doubled copy and `(c,d)` the second. A map is a rank-8
//! tensor acting on such states by contraction.
//!
//! Every physical map arises from a single completely positive map
//! `Φ: H → K ⊗ B` applied to *both* copies, with a two-legged *bridge* effect
//! joining the two ket-side `B` wires and (conjugated) the two bra-side `B`
//! wires. [`DhRealization`] captures that data and [`dh_denote`] contracts it
//! into the rank-8 denotation; closed-form constructors carry their
//! realizations as certificates so the two routes can be checked against each
//! other.
//!
//! Discarding is the trace of each doubled half, `Σ_{a,c} T[a,a,c,c]`.
//! Decoherence keeps the `a=b=c=d` diagonal (classical data), while
//! hyper-decoherence keeps the `a=c, b=d` support (the embedded quantum
//! sector). Hyper-decoherence is *sub*-causal: the missing probability is
//! carried by the bridge-shift maps `D_k`, whose sum over `k ≠ e` completes
//! it to a causal process, and by the matching effect ([`uhfb_effect`]) that
//! completes quantum measurements.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::cpm::{self, PureMap};
use crate::group::{ClassicalStructure, FiniteAbelianGroup, GroupError, PhaseFunction};
use crate::linalg::{self, LinalgError};
use crate::tensor::{Tensor, TensorError};

#[derive(Debug, Error)]
pub enum DhError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("expected equal-dimension axes, got shape {0:?}")]
    BadShape(Vec<usize>),

    #[error("a realization needs at least one Kraus element")]
    EmptyKraus,

    #[error("Kraus element has shape {0:?}, expected rank-3 [out, bridge, in]")]
    BadKrausShape(Vec<usize>),

    #[error("bridge group order {0} does not match bridge dimension {1}")]
    BridgeOrderMismatch(usize, usize),

    #[error("bridge dressing is not symmetric under inversion (witness {0:.3e})")]
    AsymmetricDressing(f64),

    #[error("scalars must be nonnegative, got {0}")]
    NegativeScale(f64),

    #[error("state is not invariant under hyper-decoherence (defect {0:.3e})")]
    NotHypdecInvariant(f64),

    #[error("matrix is not diagonal in the given basis (defect {0:.3e})")]
    NotDiagonalInBasis(f64),

    #[error("map carries no realization certificate")]
    NoCertificate,

    #[error(transparent)]
    Group(#[from] GroupError),

    #[error(transparent)]
    Tensor(#[from] TensorError),

    #[error(transparent)]
    Linalg(#[from] LinalgError),

    #[error(transparent)]
    Cpm(#[from] cpm::CpmError),
}

pub type DhResult<T> = Result<T, DhError>;

/// A density-hypercube state: rank-4 tensor `T[a,b,c,d]` on `H` of dimension
/// `dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct DhState {
    tensor: Tensor,
    dim: usize,
}

impl DhState {
    pub fn new(tensor: Tensor) -> DhResult<Self> {
        let shape = tensor.shape().to_vec();
        if shape.len() != 4 || shape.iter().any(|&d| d != shape[0]) {
            return Err(DhError::BadShape(shape));
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

    /// Trace of each doubled half: `Σ_{a,c} T[a,a,c,c]`.
    pub fn discard(&self) -> f64 {
        let mut acc = C64::new(0.0, 0.0);
        for a in 0..self.dim {
            for c in 0..self.dim {
                acc += self.tensor.get(&[a, a, c, c]);
            }
        }
        acc.re
    }

    /// Max violation of the two state symmetries
    /// `conj(T[a,b,c,d]) = T[b,a,d,c]` and `T[a,b,c,d] = T[c,d,a,b]`.
    pub fn symmetry_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for e in 0..d {
                        let t = self.tensor.get(&[a, b, c, e]);
                        worst = worst
                            .max((t.conj() - self.tensor.get(&[b, a, e, c])).norm())
                            .max((t - self.tensor.get(&[c, e, a, b])).norm());
                    }
                }
            }
        }
        worst
    }

    pub fn scale(&self, s: f64) -> DhResult<Self> {
        if s < 0.0 {
            return Err(DhError::NegativeScale(s));
        }
        Ok(Self { tensor: self.tensor.scale_re(s), dim: self.dim })
    }

    pub fn add(&self, other: &Self) -> DhResult<Self> {
        if self.dim != other.dim {
            return Err(DhError::DimensionMismatch { expected: self.dim, actual: other.dim });
        }
        Ok(Self { tensor: self.tensor.add(&other.tensor)?, dim: self.dim })
    }
}

/// An effect on density-hypercube states, paired entrywise.
#[derive(Clone, Debug, PartialEq)]
pub struct DhEffect {
    tensor: Tensor,
    dim: usize,
}

impl DhEffect {
    pub fn new(tensor: Tensor) -> DhResult<Self> {
        let shape = tensor.shape().to_vec();
        if shape.len() != 4 || shape.iter().any(|&d| d != shape[0]) {
            return Err(DhError::BadShape(shape));
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

    /// Full pairing `Σ e[a,b,c,d]·T[a,b,c,d]`.
    pub fn evaluate(&self, state: &DhState) -> DhResult<C64> {
        if self.dim != state.dim {
            return Err(DhError::DimensionMismatch { expected: self.dim, actual: state.dim });
        }
        Ok(self
            .tensor
            .contract(&state.tensor, &[(0, 0), (1, 1), (2, 2), (3, 3)])?
            .first())
    }

    /// The effect obtained by first applying `f`.
    pub fn after(&self, f: &DhMap) -> DhResult<DhEffect> {
        if self.dim != f.d_out {
            return Err(DhError::DimensionMismatch { expected: self.dim, actual: f.d_out });
        }
        let t = self
            .tensor
            .contract(&f.n, &[(0, 0), (1, 1), (2, 2), (3, 3)])?;
        DhEffect::new(t)
    }

    pub fn add(&self, other: &Self) -> DhResult<Self> {
        if self.dim != other.dim {
            return Err(DhError::DimensionMismatch { expected: self.dim, actual: other.dim });
        }
        DhEffect::new(self.tensor.add(&other.tensor)?)
    }

    pub fn max_abs_diff(&self, other: &Self) -> DhResult<f64> {
        Ok(self.tensor.max_abs_diff(&other.tensor)?)
    }
}

/// Symmetric decoration of the bridge.
///
/// The undecorated bridge pairs the two ket-side wires with a plain cap (and
/// the bra-side wires with its conjugate). A decoration replaces the cap by a
/// symmetric matrix: phases assign `ψ(β₁⁻¹·β₂)` and require `θ_k = θ_{k̄}`;
/// shifts assign `Σ_k [β₂ = β₁·k]` and require the multiset to be closed
/// under inversion. Symmetry is what lets the decoration split as an
/// identical square-root factor on both copies, the membership condition for
/// the theory.
#[derive(Clone, Debug, PartialEq)]
pub enum Dressing {
    Phase(PhaseFunction),
    /// Element indices into the bridge group.
    Shifts(Vec<usize>),
}

/// A density-hypercube realization: one CP map `Φ: H → K ⊗ B` in Kraus form,
/// applied to both copies, with a (possibly dressed) bridge on `B`.
#[derive(Clone, Debug, PartialEq)]
pub struct DhRealization {
    /// Kraus elements as rank-3 tensors `[out, bridge, in]`.
    kraus: Vec<Tensor>,
    /// Group presenting the bridge's classical structure.
    bridge: FiniteAbelianGroup,
    dressing: Option<Dressing>,
}

impl DhRealization {
    pub fn new(
        kraus: Vec<Tensor>,
        bridge: FiniteAbelianGroup,
        dressing: Option<Dressing>,
    ) -> DhResult<Self> {
        let first = kraus.first().ok_or(DhError::EmptyKraus)?;
        if first.rank() != 3 {
            return Err(DhError::BadKrausShape(first.shape().to_vec()));
        }
        let shape = first.shape().to_vec();
        for k in &kraus {
            if k.shape() != shape.as_slice() {
                return Err(DhError::BadKrausShape(k.shape().to_vec()));
            }
        }
        if bridge.order() != shape[1] {
            return Err(DhError::BridgeOrderMismatch(bridge.order(), shape[1]));
        }
        Ok(Self { kraus, bridge, dressing })
    }

    pub fn kraus(&self) -> &[Tensor] {
        &self.kraus
    }

    pub fn bridge(&self) -> &FiniteAbelianGroup {
        &self.bridge
    }

    pub fn dressing(&self) -> Option<&Dressing> {
        self.dressing.as_ref()
    }

    pub fn d_out(&self) -> usize {
        self.kraus[0].shape()[0]
    }

    pub fn d_bridge(&self) -> usize {
        self.kraus[0].shape()[1]
    }

    pub fn d_in(&self) -> usize {
        self.kraus[0].shape()[2]
    }

    /// The bridge matrix `B[β₁, β₂]` including any dressing.
    ///
    /// Rejects dressings that are not symmetric under group inversion, since
    /// those do not admit the square-root split a valid bridge needs.
    pub fn bridge_matrix(&self) -> DhResult<Tensor> {
        let g = &self.bridge;
        let d = g.order();
        match &self.dressing {
            None => Ok(Tensor::identity(d)),
            Some(Dressing::Phase(psi)) => {
                if psi.group() != g {
                    return Err(DhError::BridgeOrderMismatch(psi.group().order(), d));
                }
                if !psi.is_symmetric(1e-9) {
                    return Err(DhError::AsymmetricDressing(psi.max_symmetry_witness()));
                }
                Ok(Tensor::from_fn(&[d, d], |ix| psi.psi_diff(ix[0], ix[1])))
            }
            Some(Dressing::Shifts(ks)) => {
                for &k in ks {
                    let inv = g.inverse(k);
                    if ks.iter().filter(|&&x| x == k).count()
                        != ks.iter().filter(|&&x| x == inv).count()
                    {
                        return Err(DhError::AsymmetricDressing(1.0));
                    }
                }
                let mut b = Tensor::zeros(&[d, d]);
                for &k in ks {
                    for beta in 0..d {
                        let target = g.multiply(beta, k);
                        b.set(&[beta, target], b.get(&[beta, target]) + C64::new(1.0, 0.0));
                    }
                }
                Ok(b)
            }
        }
    }

    /// Effective Kraus family of the action seen through hyper-decoherence:
    /// `S_{mn}[x, y] = Σ_{β₁,β₂} B[β₁,β₂] · K_m[x,β₁,y] · K_n[x,β₂,y]`.
    pub fn effective_kraus(&self) -> DhResult<Vec<PureMap>> {
        let b = self.bridge_matrix()?;
        let (o, i) = (self.d_out(), self.d_in());
        let nb = self.d_bridge();
        let mut out = Vec::new();
        for km in &self.kraus {
            for kn in &self.kraus {
                let mat = Tensor::from_fn(&[o, i], |ix| {
                    let mut acc = C64::new(0.0, 0.0);
                    for b1 in 0..nb {
                        for b2 in 0..nb {
                            acc += b.get(&[b1, b2])
                                * km.get(&[ix[0], b1, ix[1]])
                                * kn.get(&[ix[0], b2, ix[1]]);
                        }
                    }
                    acc
                });
                out.push(PureMap::new(mat)?);
            }
        }
        Ok(out)
    }
}

/// Certificate that a map's denotation comes from honest realizations.
#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    None,
    /// Nonnegative combination of realizations whose denotations sum to the
    /// map.
    Realizations(Vec<(f64, DhRealization)>),
}

/// A density-hypercube map: rank-8 denotation with axes
/// `[a, b, c, d, a', b', c', d']` acting on states by contraction, plus an
/// optional realization certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct DhMap {
    n: Tensor,
    d_in: usize,
    d_out: usize,
    certificate: Certificate,
}

impl DhMap {
    pub fn from_tensor(n: Tensor, certificate: Certificate) -> DhResult<Self> {
        let shape = n.shape().to_vec();
        if shape.len() != 8 {
            return Err(DhError::BadShape(shape));
        }
        let d_out = shape[0];
        let d_in = shape[4];
        if shape[..4].iter().any(|&d| d != d_out) || shape[4..].iter().any(|&d| d != d_in) {
            return Err(DhError::BadShape(shape));
        }
        Ok(Self { n, d_in, d_out, certificate })
    }

    pub fn tensor(&self) -> &Tensor {
        &self.n
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }

    pub fn identity(d: usize) -> Self {
        let n = diagonal_map_tensor(d, |_, _, _, _| C64::new(1.0, 0.0));
        let kraus = Tensor::from_fn(&[d, 1, d], |ix| {
            if ix[0] == ix[2] { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
        });
        let r = DhRealization::new(vec![kraus], FiniteAbelianGroup::trivial(), None)
            .expect("identity realization");
        Self {
            n,
            d_in: d,
            d_out: d,
            certificate: Certificate::Realizations(vec![(1.0, r)]),
        }
    }

    pub fn apply(&self, state: &DhState) -> DhResult<DhState> {
        if state.dim != self.d_in {
            return Err(DhError::DimensionMismatch { expected: self.d_in, actual: state.dim });
        }
        let t = self
            .n
            .contract(&state.tensor, &[(4, 0), (5, 1), (6, 2), (7, 3)])?;
        DhState::new(t)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> DhResult<Self> {
        if self.d_in != other.d_out {
            return Err(DhError::DimensionMismatch {
                expected: self.d_in,
                actual: other.d_out,
            });
        }
        let n = self
            .n
            .contract(&other.n, &[(4, 0), (5, 1), (6, 2), (7, 3)])?;
        DhMap::from_tensor(n, Certificate::None)
    }

    /// Denotation sum; certificates combine as a sum of realizations.
    pub fn add(&self, other: &Self) -> DhResult<Self> {
        if self.d_in != other.d_in || self.d_out != other.d_out {
            return Err(DhError::DimensionMismatch {
                expected: self.d_in,
                actual: other.d_in,
            });
        }
        let n = self.n.add(&other.n)?;
        let certificate = match (&self.certificate, &other.certificate) {
            (Certificate::Realizations(a), Certificate::Realizations(b)) => {
                let mut all = a.clone();
                all.extend(b.iter().cloned());
                Certificate::Realizations(all)
            }
            _ => Certificate::None,
        };
        DhMap::from_tensor(n, certificate)
    }

    /// Rescaling by a nonnegative scalar.
    pub fn scale(&self, s: f64) -> DhResult<Self> {
        if s < 0.0 {
            return Err(DhError::NegativeScale(s));
        }
        let certificate = match &self.certificate {
            Certificate::Realizations(rs) => Certificate::Realizations(
                rs.iter().map(|(w, r)| (w * s, r.clone())).collect(),
            ),
            Certificate::None => Certificate::None,
        };
        DhMap::from_tensor(self.n.scale_re(s), certificate)
    }

    pub fn max_abs_diff(&self, other: &Self) -> DhResult<f64> {
        Ok(self.n.max_abs_diff(&other.n)?)
    }

    /// Residual of `discard ∘ self = discard`.
    pub fn causal_residual(&self) -> DhResult<f64> {
        let pulled = discard_effect(self.d_out).after(self)?;
        pulled.max_abs_diff(&discard_effect(self.d_in))
    }

    /// Max difference between the denotation and the weighted sum of its
    /// certificate realizations' denotations.
    pub fn certificate_defect(&self) -> DhResult<f64> {
        match &self.certificate {
            Certificate::None => Err(DhError::NoCertificate),
            Certificate::Realizations(rs) => {
                let mut acc = Tensor::zeros(self.n.shape());
                for (w, r) in rs {
                    if *w < 0.0 {
                        return Err(DhError::NegativeScale(*w));
                    }
                    let n = dh_denote(r)?;
                    acc = acc.add(&n.n.scale_re(*w))?;
                }
                Ok(acc.max_abs_diff(&self.n)?)
            }
        }
    }

    /// The transfer tensor `Q[a, b, a', b']` of the action seen through
    /// hyper-decoherence: the restriction of the denotation to the embedded
    /// quantum support on both sides.
    pub fn quantum_action(&self) -> Tensor {
        let (o, i) = (self.d_out, self.d_in);
        Tensor::from_fn(&[o, o, i, i], |ix| {
            self.n
                .get(&[ix[0], ix[1], ix[0], ix[1], ix[2], ix[3], ix[2], ix[3]])
        })
    }
}

/// Builds the rank-8 tensor of a diagonal map `T[a,b,c,d] ↦ m(a,b,c,d)·T`.
fn diagonal_map_tensor(d: usize, mult: impl Fn(usize, usize, usize, usize) -> C64) -> Tensor {
    Tensor::from_fn(&[d, d, d, d, d, d, d, d], |ix| {
        if ix[0] == ix[4] && ix[1] == ix[5] && ix[2] == ix[6] && ix[3] == ix[7] {
            mult(ix[0], ix[1], ix[2], ix[3])
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Contracts a realization into its rank-8 denotation.
///
/// With Kraus family `{K_m}` and bridge matrix `B`:
///
/// ```text
/// N[(a,b,c,d),(a',b',c',d')] = Σ B[β₁,β₂]·conj(B[β₁',β₂'])
///     · (Σ_m K_m[a,β₁,a']·conj(K_m[b,β₁',b']))
///     · (Σ_n K_n[c,β₂,c']·conj(K_n[d,β₂',d']))
/// ```
///
/// i.e. the same CP map on both copies, ket-side bridge wires joined through
/// `B` and bra-side wires through its conjugate.
pub fn dh_denote(r: &DhRealization) -> DhResult<DhMap> {
    let nk = r.kraus.len();
    let (o, nb, i) = (r.d_out(), r.d_bridge(), r.d_in());
    let mut stacked = Tensor::zeros(&[nk, o, nb, i]);
    for (m, k) in r.kraus.iter().enumerate() {
        for a in 0..o {
            for b in 0..nb {
                for x in 0..i {
                    stacked.set(&[m, a, b, x], k.get(&[a, b, x]));
                }
            }
        }
    }
    // G[a, β, a', b, β', b'] = Σ_m K_m[a,β,a']·conj(K_m[b,β',b'])
    let g = stacked.contract(&stacked.conj(), &[(0, 0)])?;
    let bridge = r.bridge_matrix()?;
    // attach the ket-side bridge to β and the bra-side conjugate to β'
    let h1 = g.contract(&bridge, &[(1, 0)])?; // [a, a', b, β', b', β₂]
    let h2 = h1.contract(&bridge.conj(), &[(3, 0)])?; // [a, a', b, b', β₂, β₂']
    let n8 = h2.contract(&g, &[(4, 1), (5, 4)])?; // [a, a', b, b', c, c', d, d']
    let n = n8.permute(&[0, 2, 4, 6, 1, 3, 5, 7])?;
    DhMap::from_tensor(n, Certificate::Realizations(vec![(1.0, r.clone())]))
}

/// Denotes a realization with trivial input (`d_in = 1`) into a state.
pub fn state_from_realization(r: &DhRealization) -> DhResult<DhState> {
    if r.d_in() != 1 {
        return Err(DhError::DimensionMismatch { expected: 1, actual: r.d_in() });
    }
    let map = dh_denote(r)?;
    let d = map.d_out;
    let t = map.n.reshape(&[d, d, d, d])?;
    DhState::new(t)
}

/// The discarding effect `Σ_{a,c} ⟨a,a,c,c|`: trace of each doubled half.
pub fn discard_effect(d: usize) -> DhEffect {
    DhEffect::new(Tensor::from_fn(&[d, d, d, d], |ix| {
        if ix[0] == ix[1] && ix[2] == ix[3] {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    }))
    .expect("discard effect shape")
}

/// The effect carried by the completion branch: `T ↦ Σ_{a≠c} T[a,a,c,c]`,
/// equivalently discard − discard∘hypdec. Evaluates to zero on every embedded
/// quantum state.
pub fn uhfb_effect(d: usize) -> DhEffect {
    DhEffect::new(Tensor::from_fn(&[d, d, d, d], |ix| {
        if ix[0] == ix[1] && ix[2] == ix[3] && ix[0] != ix[2] {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    }))
    .expect("uhfb effect shape")
}

/// The copy isometry `Δ: |g⟩ ↦ |g⟩⊗|g⟩` as a rank-3 Kraus element
/// `[out, bridge, in]`.
fn copy_kraus(d: usize) -> Tensor {
    Tensor::from_fn(&[d, d, d], |ix| {
        if ix[0] == ix[1] && ix[1] == ix[2] {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Decoherence onto the classical diagonal:
/// `dec(T)[a,b,c,d] = [a=b=c=d]·T[a,a,a,a]`.
///
/// Certificate: Kraus family `{Δ∘P_g}` (copy after projection onto each
/// classical state) with an undressed bridge.
pub fn dec_map(group: &FiniteAbelianGroup) -> DhMap {
    let d = group.order();
    let n = Tensor::from_fn(&[d, d, d, d, d, d, d, d], |ix| {
        let diag = ix[0] == ix[1] && ix[1] == ix[2] && ix[2] == ix[3];
        let same = ix[4] == ix[0] && ix[5] == ix[0] && ix[6] == ix[0] && ix[7] == ix[0];
        if diag && same { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
    });
    let kraus: Vec<Tensor> = (0..d)
        .map(|g| {
            Tensor::from_fn(&[d, d, d], |ix| {
                if ix[0] == g && ix[1] == g && ix[2] == g {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            })
        })
        .collect();
    let r = DhRealization::new(kraus, group.clone(), None).expect("dec realization");
    DhMap { n, d_in: d, d_out: d, certificate: Certificate::Realizations(vec![(1.0, r)]) }
}

/// Hyper-decoherence onto the embedded quantum sector:
/// `hypdec(T)[a,b,c,d] = [a=c]·[b=d]·T[a,b,c,d]`.
///
/// Certificate: the copy isometry with an undressed bridge. Idempotent but
/// sub-causal; see [`hypdec_completion`].
pub fn hypdec_map(group: &FiniteAbelianGroup) -> DhMap {
    let d = group.order();
    let n = diagonal_map_tensor(d, |a, b, c, e| {
        if a == c && b == e { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
    });
    let r = DhRealization::new(vec![copy_kraus(d)], group.clone(), None)
        .expect("hypdec realization");
    DhMap { n, d_in: d, d_out: d, certificate: Certificate::Realizations(vec![(1.0, r)]) }
}

/// Bridge-shift map `D_k(T)[a,b,c,d] = [c = a·k]·[d = b·k]·T[a,b,c,d]`.
///
/// `D_e` is hyper-decoherence. Self-inverse shifts carry a single-realization
/// certificate (a shift-dressed bridge); other shifts only exist in the
/// theory through inverse pairs, see [`hypdec_completion`].
pub fn shifted_bridge_map(group: &FiniteAbelianGroup, k: usize) -> DhMap {
    let d = group.order();
    let n = diagonal_map_tensor(d, |a, b, c, e| {
        if c == group.multiply(a, k) && e == group.multiply(b, k) {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let certificate = if group.inverse(k) == k {
        let r = DhRealization::new(
            vec![copy_kraus(d)],
            group.clone(),
            Some(Dressing::Shifts(vec![k])),
        )
        .expect("shift realization");
        Certificate::Realizations(vec![(1.0, r)])
    } else {
        Certificate::None
    };
    DhMap { n, d_in: d, d_out: d, certificate }
}

/// Realization whose denotation is `D_k + D_{k̄}` for an inverse pair
/// `k ≠ k̄`.
///
/// Two Kraus elements over a doubled bridge; the `±i` halves make the
/// diagonal contributions vanish and leave exactly the two opposite shifts:
/// with `R₁ = (1/√2)(Δ; i·Δ)` and `R₂ = (1/√2)(X_k·Δ; −i·X_k·Δ)` one has
/// `R₁ᵀR₁ = R₂ᵀR₂ = 0` while `R₁ᵀR₂ = X_{k̄}` and `R₂ᵀR₁ = X_k`.
fn inverse_pair_realization(group: &FiniteAbelianGroup, k: usize) -> DhResult<DhRealization> {
    let d = group.order();
    let b = 2 * d;
    let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
    let k1 = Tensor::from_fn(&[d, b, d], |ix| {
        let (a, beta, x) = (ix[0], ix[1], ix[2]);
        if a != x {
            return C64::new(0.0, 0.0);
        }
        if beta < d {
            if beta == x { C64::new(inv_sqrt2, 0.0) } else { C64::new(0.0, 0.0) }
        } else if beta - d == x {
            C64::new(0.0, inv_sqrt2)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let k2 = Tensor::from_fn(&[d, b, d], |ix| {
        let (a, beta, x) = (ix[0], ix[1], ix[2]);
        if a != x {
            return C64::new(0.0, 0.0);
        }
        let shifted = group.multiply(x, k);
        if beta < d {
            if beta == shifted { C64::new(inv_sqrt2, 0.0) } else { C64::new(0.0, 0.0) }
        } else if beta - d == shifted {
            C64::new(0.0, -inv_sqrt2)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    DhRealization::new(vec![k1, k2], FiniteAbelianGroup::cyclic(b as u32), None)
}

/// The completion of hyper-decoherence to a causal process: the denotation
/// sum `Σ_{k≠e} D_k`, certified by one realization per inverse pair (a
/// shift-dressed bridge for self-inverse shifts, a two-Kraus doubled bridge
/// otherwise).
pub fn hypdec_completion(group: &FiniteAbelianGroup) -> DhResult<DhMap> {
    let d = group.order();
    let e = group.identity_index();
    let mut n = Tensor::zeros(&[d, d, d, d, d, d, d, d]);
    let mut realizations = Vec::new();
    for k in 0..d {
        if k == e {
            continue;
        }
        n = n.add(shifted_bridge_map(group, k).tensor())?;
        let kbar = group.inverse(k);
        if kbar == k {
            realizations.push((
                1.0,
                DhRealization::new(
                    vec![copy_kraus(d)],
                    group.clone(),
                    Some(Dressing::Shifts(vec![k])),
                )?,
            ));
        } else if k < kbar {
            realizations.push((1.0, inverse_pair_realization(group, k)?));
        }
    }
    DhMap::from_tensor(n, Certificate::Realizations(realizations))
}

/// Measurement effects of the classical outcomes: outcome `k` evaluates to
/// `T[k,k,k,k]`. Together with [`uhfb_effect`] they sum exactly to the
/// discarding effect.
pub fn povm_effects(d: usize) -> Vec<DhEffect> {
    (0..d)
        .map(|k| {
            DhEffect::new(Tensor::from_fn(&[d, d, d, d], |ix| {
                if ix.iter().all(|&i| i == k) {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }))
            .expect("povm effect shape")
        })
        .collect()
}

/// Outcome probabilities of the completed computational-basis measurement:
/// `(P(0), …, P(d−1))` and the completion-branch probability.
pub fn povm_outcomes(state: &DhState) -> DhResult<(Vec<f64>, f64)> {
    let d = state.dim();
    let mut ps = Vec::with_capacity(d);
    for e in povm_effects(d) {
        ps.push(e.evaluate(state)?.re);
    }
    let beyond = uhfb_effect(d).evaluate(state)?.re;
    Ok((ps, beyond))
}

/// Embeds a pure quantum state: `T[a,b,c,d] = σ_a·σ̄_b·σ_c·σ̄_d·[a=c][b=d]`
/// with `σ_a` the principal square root of the amplitude `ψ_a`.
pub fn embed_pure(amplitudes: &[C64]) -> DhState {
    let d = amplitudes.len();
    let sigma: Vec<C64> = amplitudes.iter().map(|z| z.sqrt()).collect();
    DhState::new(Tensor::from_fn(&[d, d, d, d], |ix| {
        if ix[0] == ix[2] && ix[1] == ix[3] {
            sigma[ix[0]] * sigma[ix[1]].conj() * sigma[ix[2]] * sigma[ix[3]].conj()
        } else {
            C64::new(0.0, 0.0)
        }
    }))
    .expect("embed shape")
}

/// Embeds a convex mixture of pure states affinely.
pub fn embed_mixture(mixture: &[(f64, Vec<C64>)]) -> DhResult<DhState> {
    let d = mixture
        .first()
        .map(|(_, psi)| psi.len())
        .ok_or(DhError::EmptyKraus)?;
    let mut acc = Tensor::zeros(&[d, d, d, d]);
    for (p, psi) in mixture {
        if *p < 0.0 {
            return Err(DhError::NegativeScale(*p));
        }
        if psi.len() != d {
            return Err(DhError::DimensionMismatch { expected: d, actual: psi.len() });
        }
        acc = acc.add(&embed_pure(psi).tensor.scale_re(*p))?;
    }
    DhState::new(acc)
}

/// Extracts the density matrix `ρ[a,b] = T[a,b,a,b]` of a state in the image
/// of hyper-decoherence; states outside that image are rejected.
pub fn extract_quantum(state: &DhState, tol: f64) -> DhResult<Tensor> {
    let d = state.dim();
    let mut defect = 0.0f64;
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for e in 0..d {
                    if a == c && b == e {
                        continue;
                    }
                    defect = defect.max(state.tensor.get(&[a, b, c, e]).norm());
                }
            }
        }
    }
    if defect > tol {
        return Err(DhError::NotHypdecInvariant(defect));
    }
    Ok(Tensor::from_fn(&[d, d], |ix| {
        state.tensor.get(&[ix[0], ix[1], ix[0], ix[1]])
    }))
}

/// Folds a pure map into the theory: denotation `f ⊗ f* ⊗ f ⊗ f*`, certified
/// by a trivial bridge.
pub fn fld(f: &PureMap) -> DhMap {
    let n = cpm::quad_fold(f);
    let (o, i) = (f.d_out(), f.d_in());
    let kraus = Tensor::from_fn(&[o, 1, i], |ix| f.entry(ix[0], ix[2]));
    let r = DhRealization::new(vec![kraus], FiniteAbelianGroup::trivial(), None)
        .expect("fold realization");
    DhMap { n, d_in: i, d_out: o, certificate: Certificate::Realizations(vec![(1.0, r)]) }
}

/// The fold of a diagonal phase gate:
/// `T[a,b,c,d] ↦ e^{i(φ_a − φ_b + φ_c − φ_d)}·T[a,b,c,d]`.
///
/// Erased by decoherence for every `φ`, but not by hyper-decoherence unless
/// `φ` is constant; its quantum action is the phase gate with doubled angles.
pub fn doubled_phase_gate(group: &FiniteAbelianGroup, phi: &PhaseFunction) -> DhMap {
    let entries: Vec<C64> = (0..group.order()).map(|k| phi.psi(k)).collect();
    fld(&PureMap::diagonal(&entries))
}

/// The qubit phase gadget
/// `T[a,b,c,d] ↦ e^{iα([a≠c] − [b≠d])}·T[a,b,c,d]`: causal, invertible (by
/// `−α`), composition adds angles, and it is erased by both decoherence and
/// hyper-decoherence.
pub fn phase_gadget(alpha: f64) -> DhMap {
    let group = FiniteAbelianGroup::cyclic(2);
    let psi = PhaseFunction::new(group.clone(), vec![0.0, alpha]).expect("qubit phases");
    bridge_phase_map(&group, &psi).expect("qubit phases are symmetric")
}

/// The bridge-phase map
/// `T[a,b,c,d] ↦ ψ(a⁻¹·c)·conj(ψ(b⁻¹·d))·T[a,b,c,d]` for a phase function
/// with `θ_k = θ_{k̄}`.
///
/// Asymmetric phase functions are rejected with the Fourier witness of the
/// defect. Composition multiplies phase functions pointwise and the inverse
/// is the conjugate phase function; on qubits with `θ = (0, α)` this is the
/// phase gadget.
pub fn bridge_phase_map(group: &FiniteAbelianGroup, psi: &PhaseFunction) -> DhResult<DhMap> {
    if psi.group() != group {
        return Err(DhError::DimensionMismatch {
            expected: group.order(),
            actual: psi.group().order(),
        });
    }
    if !psi.is_symmetric(1e-9) {
        return Err(DhError::AsymmetricDressing(psi.max_symmetry_witness()));
    }
    let d = group.order();
    let n = diagonal_map_tensor(d, |a, b, c, e| {
        psi.psi_diff(a, c) * psi.psi_diff(b, e).conj()
    });
    let r = DhRealization::new(
        vec![copy_kraus(d)],
        group.clone(),
        Some(Dressing::Phase(psi.clone())),
    )?;
    Ok(DhMap { n, d_in: d, d_out: d, certificate: Certificate::Realizations(vec![(1.0, r)]) })
}

/// The qubit matrix `M(α) = √2·e^{iα/2}·diag_X(cos α/2, −i·sin α/2)` written
/// in the computational basis.
///
/// Its entries are `M[a,c] = (1/√2)·e^{iα·[a≠c]}`, so splitting it across the
/// bridge reproduces the phase gadget up to a positive scalar.
pub fn m_matrix(alpha: f64) -> PureMap {
    let front = C64::from_polar(2.0f64.sqrt(), alpha / 2.0);
    let plus_coeff = front * (alpha / 2.0).cos();
    let minus_coeff = front * C64::new(0.0, -1.0) * (alpha / 2.0).sin();
    let half = C64::new(0.5, 0.0);
    PureMap::new(Tensor::from_fn(&[2, 2], |ix| {
        // |+⟩⟨+| has all entries 1/2; |−⟩⟨−| flips sign off the diagonal
        let sign = if ix[0] == ix[1] { 1.0 } else { -1.0 };
        plus_coeff * half + minus_coeff * half * sign
    }))
    .expect("2x2 matrix")
}

/// Square root `R` of a matrix diagonal in the given structure's basis, using
/// the principal branch per eigenvalue; `R` is diagonal in the same basis and
/// hence self-transpose there.
pub fn symmetric_sqrt(m: &PureMap, basis: &ClassicalStructure) -> DhResult<PureMap> {
    let d = basis.dim();
    if m.d_in() != d || m.d_out() != d {
        return Err(DhError::DimensionMismatch { expected: d, actual: m.d_in() });
    }
    let vectors: Vec<Tensor> = (0..d).map(|k| basis.basis_vector(k)).collect();
    let mut eigenvalues = Vec::with_capacity(d);
    for v in &vectors {
        // λ_k = ⟨v_k| M |v_k⟩
        let mv = m.matrix().contract(v, &[(1, 0)])?;
        eigenvalues.push(v.conj().contract(&mv, &[(0, 0)])?.first());
    }
    let mut rebuilt = Tensor::zeros(&[d, d]);
    let mut root = Tensor::zeros(&[d, d]);
    for (k, v) in vectors.iter().enumerate() {
        let proj = v.outer(&v.conj());
        rebuilt = rebuilt.add(&proj.scale(eigenvalues[k]))?;
        root = root.add(&proj.scale(eigenvalues[k].sqrt()))?;
    }
    let defect = rebuilt.max_abs_diff(m.matrix())?;
    if defect > 1e-9 * m.matrix().max_abs().max(1.0) {
        return Err(DhError::NotDiagonalInBasis(defect));
    }
    Ok(PureMap::new(root)?)
}

/// Places `r` on both sides of an undressed bridge: the realization
/// `(id ⊗ r) ∘ Δ` applied to both copies. The resulting diagonal action is
/// `T ↦ (rᵀr)[a,c]·conj((rᵀr)[b,d])·T`.
pub fn bridge_expand(r: &PureMap) -> DhResult<DhMap> {
    let d = r.d_in();
    if r.d_out() != d {
        return Err(DhError::DimensionMismatch { expected: d, actual: r.d_out() });
    }
    let kraus = Tensor::from_fn(&[d, d, d], |ix| {
        if ix[0] == ix[2] { r.entry(ix[1], ix[2]) } else { C64::new(0.0, 0.0) }
    });
    let realization =
        DhRealization::new(vec![kraus], FiniteAbelianGroup::cyclic(d as u32), None)?;
    dh_denote(&realization)
}

/// Lifts a quantum transfer tensor `Q[a,b,a',b']` to the rank-8 map supported
/// on the embedded quantum sector on both sides.
pub fn lift_quantum(q: &Tensor) -> DhResult<DhMap> {
    let o = q.shape()[0];
    let i = q.shape()[2];
    let n = Tensor::from_fn(&[o, o, o, o, i, i, i, i], |ix| {
        if ix[0] == ix[2] && ix[1] == ix[3] && ix[4] == ix[6] && ix[5] == ix[7] {
            q.get(&[ix[0], ix[1], ix[4], ix[5]])
        } else {
            C64::new(0.0, 0.0)
        }
    });
    DhMap::from_tensor(n, Certificate::None)
}

/// Derived realizability diagnostics of a state: psd defect of the extracted
/// matrix `M[a,b] = T[a,b,a,b]` and the worst negativity or imaginarity of
/// `N[a,c] = T[a,a,c,c]`.
pub fn realizability_defects(state: &DhState) -> DhResult<(f64, f64)> {
    let d = state.dim();
    let m = Tensor::from_fn(&[d, d], |ix| state.tensor.get(&[ix[0], ix[1], ix[0], ix[1]]));
    let min_eig = linalg::min_hermitian_eigenvalue(&m)?;
    let psd_defect = (-min_eig).max(0.0);
    let mut diag_defect = 0.0f64;
    for a in 0..d {
        for c in 0..d {
            let z = state.tensor.get(&[a, a, c, c]);
            diag_defect = diag_defect.max(z.im.abs()).max((-z.re).max(0.0));
        }
    }
    Ok((psd_defect, diag_defect))
}
