//! Dense complex tensors with explicit shapes.
//!
//! Everything in this crate (states, maps, effects, spiders) eventually
//! denotes into a [`Tensor`]: a dense multi-index array of complex numbers
//! stored in row-major order (last index fastest). Ranks stay small (≤ 8) and
//! dimensions stay at desk scale, so storage is always dense and all
//! operations are straightforward nested loops.
//!
//! A tensor with an empty shape is a scalar holding exactly one entry.

use num_complex::Complex64 as C64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TensorError {
    /// Returned when an entry buffer does not match the volume of its shape.
    #[error("entry count {0} does not match shape volume {1}")]
    BadEntryCount(usize, usize),

    /// Returned when an operation requires equal shapes.
    #[error("shape mismatch: {0:?} vs {1:?}")]
    ShapeMismatch(Vec<usize>, Vec<usize>),

    /// Returned when an axis index exceeds the rank of the tensor.
    #[error("axis {0} out of bounds for rank {1}")]
    AxisOutOfBounds(usize, usize),

    /// Returned when a contraction pairs an axis more than once.
    #[error("axis {0} paired more than once")]
    RepeatedAxis(usize),

    /// Returned when paired axes have different dimensions.
    #[error("contracted axes have different dimensions: {0} vs {1}")]
    DimMismatch(usize, usize),

    /// Returned when a permutation is not a bijection on the axes.
    #[error("invalid axis permutation {0:?} for rank {1}")]
    InvalidPermutation(Vec<usize>, usize),

    /// Returned when a reshape does not preserve the entry count.
    #[error("cannot reshape volume {0} into shape {1:?}")]
    BadReshape(usize, Vec<usize>),

    /// Returned when a dagger or transpose is requested without a valid
    /// output/input axis split.
    #[error("invalid output/input axis split {0} for rank {1}")]
    BadAxisSplit(usize, usize),

    /// Returned when a rank-2 operation receives a tensor of another rank.
    #[error("expected a rank-2 tensor, got rank {0}")]
    NotAMatrix(usize),
}

pub type TensorResult<T> = Result<T, TensorError>;

/// Result of fitting a single positive scalar `s` so that `lhs ≈ s·rhs`.
#[derive(Clone, Copy, Debug)]
pub struct ScalarFit {
    /// Least-squares optimal scalar.
    pub scalar: f64,
    /// Max entrywise modulus of `lhs − s·rhs` at the fitted scalar.
    pub residual: f64,
}

/// Dense complex tensor in row-major layout.
#[derive(Clone, PartialEq)]
pub struct Tensor {
    shape: Vec<usize>,
    data: Vec<C64>,
}

/// Row-major strides for a shape (last index fastest).
pub(crate) fn strides_of(shape: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; shape.len()];
    for k in (0..shape.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * shape[k + 1];
    }
    strides
}

/// Calls `f` once for every multi-index of `shape` in row-major order.
pub(crate) fn for_each_index(shape: &[usize], mut f: impl FnMut(&[usize])) {
    if shape.contains(&0) {
        return;
    }
    let mut idx = vec![0usize; shape.len()];
    loop {
        f(&idx);
        let mut k = shape.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < shape[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}

impl Tensor {
    /// Builds a tensor from a shape and row-major entries.
    pub fn new(shape: Vec<usize>, data: Vec<C64>) -> TensorResult<Self> {
        let volume: usize = shape.iter().product();
        if data.len() != volume {
            return Err(TensorError::BadEntryCount(data.len(), volume));
        }
        Ok(Self { shape, data })
    }

    pub fn zeros(shape: &[usize]) -> Self {
        let volume: usize = shape.iter().product();
        Self { shape: shape.to_vec(), data: vec![C64::new(0.0, 0.0); volume] }
    }

    /// A rank-0 tensor holding a single entry.
    pub fn scalar(z: C64) -> Self {
        Self { shape: Vec::new(), data: vec![z] }
    }

    /// Builds a tensor by evaluating `f` at every multi-index.
    pub fn from_fn(shape: &[usize], mut f: impl FnMut(&[usize]) -> C64) -> Self {
        let mut data = Vec::with_capacity(shape.iter().product());
        for_each_index(shape, |idx| data.push(f(idx)));
        if shape.is_empty() {
            // for_each_index visits the empty index once already
            debug_assert_eq!(data.len(), 1);
        }
        Self { shape: shape.to_vec(), data }
    }

    /// The `d × d` identity matrix.
    pub fn identity(d: usize) -> Self {
        Self::from_fn(&[d, d], |ix| {
            if ix[0] == ix[1] { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
        })
    }

    /// Standard basis column vector `|i⟩` of dimension `d`.
    pub fn basis_vector(d: usize, i: usize) -> Self {
        let mut t = Self::zeros(&[d]);
        t.data[i] = C64::new(1.0, 0.0);
        t
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    /// The single entry of a rank-0 tensor, or the first entry otherwise.
    pub fn first(&self) -> C64 {
        self.data[0]
    }

    fn flat(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.shape.len());
        let mut f = 0;
        let mut stride = 1;
        for k in (0..self.shape.len()).rev() {
            debug_assert!(idx[k] < self.shape[k]);
            f += idx[k] * stride;
            stride *= self.shape[k];
        }
        f
    }

    pub fn get(&self, idx: &[usize]) -> C64 {
        self.data[self.flat(idx)]
    }

    pub fn set(&mut self, idx: &[usize], z: C64) {
        let f = self.flat(idx);
        self.data[f] = z;
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            shape: self.shape.clone(),
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, z: C64) -> Self {
        Self {
            shape: self.shape.clone(),
            data: self.data.iter().map(|w| w * z).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn add(&self, other: &Self) -> TensorResult<Self> {
        if self.shape != other.shape {
            return Err(TensorError::ShapeMismatch(self.shape.clone(), other.shape.clone()));
        }
        Ok(Self {
            shape: self.shape.clone(),
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> TensorResult<Self> {
        if self.shape != other.shape {
            return Err(TensorError::ShapeMismatch(self.shape.clone(), other.shape.clone()));
        }
        Ok(Self {
            shape: self.shape.clone(),
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// Contracts `self` with `other` over the given `(axis of self, axis of
    /// other)` pairs.
    ///
    /// The result carries the unpaired axes of `self` followed by the unpaired
    /// axes of `other`; every entry is the sum over the paired indices of the
    /// products of entries. An empty pair list yields the outer product.
    pub fn contract(&self, other: &Self, pairs: &[(usize, usize)]) -> TensorResult<Self> {
        let ra = self.rank();
        let rb = other.rank();
        let mut used_a = vec![false; ra];
        let mut used_b = vec![false; rb];
        for &(ax_a, ax_b) in pairs {
            if ax_a >= ra {
                return Err(TensorError::AxisOutOfBounds(ax_a, ra));
            }
            if ax_b >= rb {
                return Err(TensorError::AxisOutOfBounds(ax_b, rb));
            }
            if used_a[ax_a] {
                return Err(TensorError::RepeatedAxis(ax_a));
            }
            if used_b[ax_b] {
                return Err(TensorError::RepeatedAxis(ax_b));
            }
            if self.shape[ax_a] != other.shape[ax_b] {
                return Err(TensorError::DimMismatch(self.shape[ax_a], other.shape[ax_b]));
            }
            used_a[ax_a] = true;
            used_b[ax_b] = true;
        }
        let kept_a: Vec<usize> = (0..ra).filter(|&k| !used_a[k]).collect();
        let kept_b: Vec<usize> = (0..rb).filter(|&k| !used_b[k]).collect();
        let mut out_shape: Vec<usize> = kept_a.iter().map(|&k| self.shape[k]).collect();
        out_shape.extend(kept_b.iter().map(|&k| other.shape[k]));
        let sum_shape: Vec<usize> = pairs.iter().map(|&(a, _)| self.shape[a]).collect();

        let str_a = strides_of(&self.shape);
        let str_b = strides_of(&other.shape);
        let w_out_a: Vec<usize> = kept_a.iter().map(|&k| str_a[k]).collect();
        let w_out_b: Vec<usize> = kept_b.iter().map(|&k| str_b[k]).collect();
        let w_sum_a: Vec<usize> = pairs.iter().map(|&(a, _)| str_a[a]).collect();
        let w_sum_b: Vec<usize> = pairs.iter().map(|&(_, b)| str_b[b]).collect();

        let volume: usize = out_shape.iter().product();
        let mut data = Vec::with_capacity(volume);
        let na = kept_a.len();

        let mut out_idx = vec![0usize; out_shape.len()];
        let mut done_out = out_shape.contains(&0);
        while !done_out {
            let mut base_a = 0usize;
            let mut base_b = 0usize;
            for (k, &i) in out_idx.iter().enumerate() {
                if k < na {
                    base_a += i * w_out_a[k];
                } else {
                    base_b += i * w_out_b[k - na];
                }
            }
            let mut acc = C64::new(0.0, 0.0);
            let mut sum_idx = vec![0usize; sum_shape.len()];
            let mut done_sum = sum_shape.contains(&0);
            while !done_sum {
                let mut fa = base_a;
                let mut fb = base_b;
                for (p, &i) in sum_idx.iter().enumerate() {
                    fa += i * w_sum_a[p];
                    fb += i * w_sum_b[p];
                }
                acc += self.data[fa] * other.data[fb];
                done_sum = !increment(&mut sum_idx, &sum_shape);
            }
            data.push(acc);
            done_out = !increment(&mut out_idx, &out_shape);
        }
        Tensor::new(out_shape, data)
    }

    /// Outer (tensor) product.
    pub fn outer(&self, other: &Self) -> Self {
        self.contract(other, &[]).expect("outer product cannot fail")
    }

    /// Sums over a pair of equal-dimension axes of the same tensor.
    pub fn trace_pair(&self, ax1: usize, ax2: usize) -> TensorResult<Self> {
        let r = self.rank();
        if ax1 >= r {
            return Err(TensorError::AxisOutOfBounds(ax1, r));
        }
        if ax2 >= r {
            return Err(TensorError::AxisOutOfBounds(ax2, r));
        }
        if ax1 == ax2 {
            return Err(TensorError::RepeatedAxis(ax1));
        }
        if self.shape[ax1] != self.shape[ax2] {
            return Err(TensorError::DimMismatch(self.shape[ax1], self.shape[ax2]));
        }
        let kept: Vec<usize> = (0..r).filter(|&k| k != ax1 && k != ax2).collect();
        let out_shape: Vec<usize> = kept.iter().map(|&k| self.shape[k]).collect();
        let strides = strides_of(&self.shape);
        let d = self.shape[ax1];
        let mut out = Tensor::zeros(&out_shape);
        let mut pos = 0usize;
        for_each_index(&out_shape, |idx| {
            let mut base = 0usize;
            for (k, &i) in idx.iter().enumerate() {
                base += i * strides[kept[k]];
            }
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..d {
                acc += self.data[base + j * strides[ax1] + j * strides[ax2]];
            }
            out.data[pos] = acc;
            pos += 1;
        });
        Ok(out)
    }

    /// Reorders axes: axis `k` of the result is axis `perm[k]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> TensorResult<Self> {
        let r = self.rank();
        if perm.len() != r {
            return Err(TensorError::InvalidPermutation(perm.to_vec(), r));
        }
        let mut seen = vec![false; r];
        for &p in perm {
            if p >= r || seen[p] {
                return Err(TensorError::InvalidPermutation(perm.to_vec(), r));
            }
            seen[p] = true;
        }
        let out_shape: Vec<usize> = perm.iter().map(|&p| self.shape[p]).collect();
        let strides = strides_of(&self.shape);
        let mut data = Vec::with_capacity(self.data.len());
        for_each_index(&out_shape, |idx| {
            let mut f = 0usize;
            for (k, &i) in idx.iter().enumerate() {
                f += i * strides[perm[k]];
            }
            data.push(self.data[f]);
        });
        Tensor::new(out_shape, data)
    }

    /// Merges or splits axes by row-major flattening into a new shape of the
    /// same volume.
    pub fn reshape(&self, new_shape: &[usize]) -> TensorResult<Self> {
        let volume: usize = new_shape.iter().product();
        if volume != self.data.len() {
            return Err(TensorError::BadReshape(self.data.len(), new_shape.to_vec()));
        }
        Ok(Self { shape: new_shape.to_vec(), data: self.data.clone() })
    }

    /// Conjugate transpose over a designated output/input split: the first
    /// `n_out` axes are outputs, the rest inputs, and the two groups swap.
    pub fn dagger(&self, n_out: usize) -> TensorResult<Self> {
        let r = self.rank();
        if n_out > r {
            return Err(TensorError::BadAxisSplit(n_out, r));
        }
        let perm: Vec<usize> = (n_out..r).chain(0..n_out).collect();
        Ok(self.permute(&perm)?.conj())
    }

    /// Transpose over a designated output/input split (no conjugation).
    pub fn transpose_split(&self, n_out: usize) -> TensorResult<Self> {
        let r = self.rank();
        if n_out > r {
            return Err(TensorError::BadAxisSplit(n_out, r));
        }
        let perm: Vec<usize> = (n_out..r).chain(0..n_out).collect();
        self.permute(&perm)
    }

    /// Matrix product of two rank-2 tensors.
    pub fn matmul(&self, other: &Self) -> TensorResult<Self> {
        if self.rank() != 2 {
            return Err(TensorError::NotAMatrix(self.rank()));
        }
        if other.rank() != 2 {
            return Err(TensorError::NotAMatrix(other.rank()));
        }
        self.contract(other, &[(1, 0)])
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max entrywise modulus of the difference.
    pub fn max_abs_diff(&self, other: &Self) -> TensorResult<f64> {
        if self.shape != other.shape {
            return Err(TensorError::ShapeMismatch(self.shape.clone(), other.shape.clone()));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Exact-mode comparison: max entrywise modulus difference ≤ `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> TensorResult<bool> {
        Ok(self.max_abs_diff(other)? <= tol)
    }

    /// Fits the least-squares positive scalar `s` with `self ≈ s·other` and
    /// reports the max entrywise residual at that scalar.
    ///
    /// The fit minimises `‖self − s·other‖₂` over real `s`; callers decide
    /// whether the reported residual is acceptable.
    pub fn fit_scalar(&self, other: &Self) -> TensorResult<ScalarFit> {
        if self.shape != other.shape {
            return Err(TensorError::ShapeMismatch(self.shape.clone(), other.shape.clone()));
        }
        let denom: f64 = other.data.iter().map(|z| z.norm_sqr()).sum();
        let scalar = if denom == 0.0 {
            1.0
        } else {
            let numer: f64 = self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| (a * b.conj()).re)
                .sum();
            numer / denom
        };
        let residual = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b * C64::new(scalar, 0.0)).norm())
            .fold(0.0, f64::max);
        Ok(ScalarFit { scalar, residual })
    }

    /// Scalar-mode comparison: true when the fitted scalar is positive and the
    /// residual is within `tol`.
    pub fn approx_eq_scalar(&self, other: &Self, tol: f64) -> TensorResult<(bool, ScalarFit)> {
        let fit = self.fit_scalar(other)?;
        Ok((fit.scalar > 0.0 && fit.residual <= tol, fit))
    }
}

/// Advances a row-major odometer; returns false on wrap-around.
fn increment(idx: &mut [usize], shape: &[usize]) -> bool {
    let mut k = shape.len();
    loop {
        if k == 0 {
            return false;
        }
        k -= 1;
        idx[k] += 1;
        if idx[k] < shape[k] {
            return true;
        }
        idx[k] = 0;
    }
}

impl std::fmt::Debug for Tensor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Tensor{:?}[", self.shape)?;
        for (k, z) in self.data.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            if k >= 16 {
                write!(f, "…")?;
                break;
            }
            write!(f, "{:.4}{:+.4}i", z.re, z.im)?;
        }
        write!(f, "]")
    }
}
