//! Finite abelian groups, their group algebras and classical structures.
//!
//! A [`FiniteAbelianGroup`] is a product of cyclic factors `Z_{n₁} × … × Z_{n_m}`.
//! Its group algebra `ℂ[G] ≅ ℂ^d` carries two distinguished orthonormal bases:
//! the group-element basis (the "point" spiders, Pauli Z for a qubit) and the
//! Fourier basis of normalised characters (Pauli X for a qubit). A
//! [`ClassicalStructure`] is a group together with a choice of basis flavor,
//! and provides spiders, the antipode and the Hopf-law check.
//!
//! Element enumeration is lexicographic with the last factor fastest, matching
//! the row-major tensor layout, and characters are indexed by group elements
//! through the canonical self-duality (same tuple encoding).

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::tensor::Tensor;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("cannot parse group spec {0:?} (expected e.g. \"Z2\", \"Z3x Z4\", \"Z2xZ2\")")]
    BadSpec(String),

    #[error("cyclic factor orders must be positive")]
    ZeroFactor,

    #[error("operation requires elements of the same group")]
    MismatchedGroups,

    #[error("phase function has {0} phases but the group has order {1}")]
    BadPhaseCount(usize, usize),

    #[error("operation requires the group-element (point) basis")]
    PointBasisRequired,

    #[error(
        "phase function is not symmetric under inversion (max Fourier witness {0:.3e})"
    )]
    AsymmetricPhases(f64),
}

pub type GroupResult<T> = Result<T, GroupError>;

/// A finite abelian group presented as a product of cyclic factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    factors: Vec<u32>,
}

impl FiniteAbelianGroup {
    pub fn new(factors: Vec<u32>) -> GroupResult<Self> {
        if factors.contains(&0) {
            return Err(GroupError::ZeroFactor);
        }
        Ok(Self { factors })
    }

    /// The cyclic group `Z_n`.
    pub fn cyclic(n: u32) -> Self {
        Self { factors: vec![n] }
    }

    /// The one-element group.
    pub fn trivial() -> Self {
        Self { factors: vec![1] }
    }

    /// Parses specs like `"Z2"`, `"z3"`, `"Z2xZ4"` (case-insensitive).
    pub fn parse(spec: &str) -> GroupResult<Self> {
        let lowered = spec.trim().to_ascii_lowercase();
        let mut factors = Vec::new();
        for part in lowered.split('x') {
            let part = part.trim();
            let digits = part
                .strip_prefix('z')
                .ok_or_else(|| GroupError::BadSpec(spec.to_string()))?;
            let n: u32 = digits
                .parse()
                .map_err(|_| GroupError::BadSpec(spec.to_string()))?;
            if n == 0 {
                return Err(GroupError::BadSpec(spec.to_string()));
            }
            factors.push(n);
        }
        if factors.is_empty() {
            return Err(GroupError::BadSpec(spec.to_string()));
        }
        Ok(Self { factors })
    }

    /// Canonical spec string, e.g. `"Z2xZ3"`.
    pub fn spec_string(&self) -> String {
        self.factors
            .iter()
            .map(|n| format!("Z{n}"))
            .collect::<Vec<_>>()
            .join("x")
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    /// Group order `d = Π nⱼ`.
    pub fn order(&self) -> usize {
        self.factors.iter().map(|&n| n as usize).product()
    }

    /// Element tuple at enumeration index `i`.
    pub fn element(&self, i: usize) -> Vec<u32> {
        debug_assert!(i < self.order());
        let mut rem = i;
        let mut out = vec![0u32; self.factors.len()];
        for k in (0..self.factors.len()).rev() {
            let n = self.factors[k] as usize;
            out[k] = (rem % n) as u32;
            rem /= n;
        }
        out
    }

    /// Enumeration index of an element tuple.
    pub fn index(&self, e: &[u32]) -> usize {
        debug_assert_eq!(e.len(), self.factors.len());
        let mut idx = 0usize;
        for (k, &n) in self.factors.iter().enumerate() {
            idx = idx * n as usize + (e[k] % n) as usize;
        }
        idx
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    pub fn multiply(&self, i: usize, j: usize) -> usize {
        let a = self.element(i);
        let b = self.element(j);
        let sum: Vec<u32> = a
            .iter()
            .zip(&b)
            .zip(&self.factors)
            .map(|((&x, &y), &n)| (x + y) % n)
            .collect();
        self.index(&sum)
    }

    pub fn inverse(&self, i: usize) -> usize {
        let a = self.element(i);
        let inv: Vec<u32> = a
            .iter()
            .zip(&self.factors)
            .map(|(&x, &n)| (n - x) % n)
            .collect();
        self.index(&inv)
    }

    /// Character value `χᵢ(gⱼ) = Π_k exp(2πi·χ_k·g_k / n_k)`, multiplicative in
    /// both arguments.
    pub fn character(&self, chi: usize, g: usize) -> C64 {
        let c = self.element(chi);
        let e = self.element(g);
        let mut angle = 0.0f64;
        for (k, &n) in self.factors.iter().enumerate() {
            let prod = (c[k] as u64 * e[k] as u64) % n as u64;
            angle += prod as f64 / n as f64;
        }
        C64::from_polar(1.0, TAU * angle)
    }

    /// The group-inverse permutation matrix `|g⟩ ↦ |g⁻¹⟩`; involutive and
    /// self-transpose.
    pub fn antipode_matrix(&self) -> Tensor {
        let d = self.order();
        Tensor::from_fn(&[d, d], |ix| {
            if ix[0] == self.inverse(ix[1]) {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// Group multiplication as a tensor `[out, in1, in2] ↦ [out = in1·in2]`.
    ///
    /// This is the algebra of the Fourier partner expressed in point
    /// coordinates (the Fourier (2,1)-spider equals it up to `1/√d`).
    pub fn multiplication_tensor(&self) -> Tensor {
        let d = self.order();
        Tensor::from_fn(&[d, d, d], |ix| {
            if ix[0] == self.multiply(ix[1], ix[2]) {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// Unitary change of basis from the Fourier basis to the point basis:
    /// column `χ` is the normalised character vector `χ(g)/√d`.
    pub fn fourier_matrix(&self) -> Tensor {
        let d = self.order();
        let norm = 1.0 / (d as f64).sqrt();
        Tensor::from_fn(&[d, d], |ix| self.character(ix[1], ix[0]).scale(norm))
    }
}

/// Forward Fourier transform of a function on the group:
/// `f̂(χ) = Σ_k χ(k)·f(k)`.
pub fn fourier_transform(group: &FiniteAbelianGroup, f: &[C64]) -> Vec<C64> {
    let d = group.order();
    debug_assert_eq!(f.len(), d);
    (0..d)
        .map(|chi| (0..d).map(|k| group.character(chi, k) * f[k]).sum())
        .collect()
}

/// Inverse of [`fourier_transform`]: `f(k) = (1/d)·Σ_χ χ(k)*·f̂(χ)`.
pub fn inverse_fourier_transform(group: &FiniteAbelianGroup, fhat: &[C64]) -> Vec<C64> {
    let d = group.order();
    debug_assert_eq!(fhat.len(), d);
    (0..d)
        .map(|k| {
            (0..d)
                .map(|chi| group.character(chi, k).conj() * fhat[chi])
                .sum::<C64>()
                / d as f64
        })
        .collect()
}

/// Which orthonormal basis a classical structure is built on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    /// Group-element (computational) basis; the white dot.
    Point,
    /// Fourier basis of normalised characters; the black dot.
    Fourier,
}

/// A finite abelian group with a choice of spider basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalStructure {
    pub group: FiniteAbelianGroup,
    pub flavor: Flavor,
}

impl ClassicalStructure {
    pub fn point(group: FiniteAbelianGroup) -> Self {
        Self { group, flavor: Flavor::Point }
    }

    pub fn fourier(group: FiniteAbelianGroup) -> Self {
        Self { group, flavor: Flavor::Fourier }
    }

    pub fn dim(&self) -> usize {
        self.group.order()
    }

    /// The `k`-th classical state of this structure as a column vector.
    pub fn basis_vector(&self, k: usize) -> Tensor {
        let d = self.dim();
        match self.flavor {
            Flavor::Point => Tensor::basis_vector(d, k),
            Flavor::Fourier => {
                let norm = 1.0 / (d as f64).sqrt();
                Tensor::from_fn(&[d], |ix| self.group.character(k, ix[0]).scale(norm))
            }
        }
    }

    /// Unnormalised spider `Σ_k e^{iθ_k} |k⟩^⊗n ⟨k|^⊗m` in this structure's
    /// basis, with `m` input legs and `n` output legs.
    ///
    /// The returned tensor carries the `n` output axes first, then the `m`
    /// input axes. Phases default to zero. No `1/√d` normalisation factors are
    /// inserted; callers that compare against normalised conventions should
    /// use scalar-mode comparison.
    pub fn spider(&self, legs_in: usize, legs_out: usize, phase: Option<&PhaseFunction>) -> Tensor {
        let d = self.dim();
        let basis: Vec<Tensor> = (0..d).map(|k| self.basis_vector(k)).collect();
        let coeffs: Vec<C64> = (0..d)
            .map(|k| match phase {
                Some(p) => p.psi(k),
                None => C64::new(1.0, 0.0),
            })
            .collect();
        let shape = vec![d; legs_out + legs_in];
        Tensor::from_fn(&shape, |ix| {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..d {
                let mut term = coeffs[k];
                for &axis in &ix[..legs_out] {
                    term *= basis[k].get(&[axis]);
                }
                for &axis in &ix[legs_out..] {
                    term *= basis[k].get(&[axis]).conj();
                }
                acc += term;
            }
            acc
        })
    }

    /// The antipode `|g⟩ ↦ |g⁻¹⟩`; defined on the point structure.
    pub fn antipode(&self) -> GroupResult<Tensor> {
        if self.flavor != Flavor::Point {
            return Err(GroupError::PointBasisRequired);
        }
        Ok(self.group.antipode_matrix())
    }

    /// Checks the Hopf identity `multiply ∘ (id ⊗ antipode) ∘ copy =
    /// |e⟩⟨counit|` in scalar mode and returns the fitted scalar.
    ///
    /// Copying happens in this structure's point basis and multiplication in
    /// the algebra of its Fourier partner (group multiplication).
    pub fn hopf_check(&self) -> GroupResult<HopfCheck> {
        let antipode = self.antipode()?;
        self.hopf_check_with(&antipode)
    }

    /// Same as [`hopf_check`](Self::hopf_check) but with a caller-provided
    /// antipode matrix, so corrupted antipodes can be probed.
    pub fn hopf_check_with(&self, antipode: &Tensor) -> GroupResult<HopfCheck> {
        if self.flavor != Flavor::Point {
            return Err(GroupError::PointBasisRequired);
        }
        let d = self.dim();
        let copy = self.spider(1, 2, None); // axes [out1, out2, in]
        let multiply = self.group.multiplication_tensor(); // axes [out, in1, in2]
        let counit = self.spider(1, 0, None); // axes [in]
        // (id ⊗ antipode) ∘ copy: apply the antipode to the second output leg
        let twisted = antipode
            .contract(&copy, &[(1, 1)])
            .map_err(|_| GroupError::MismatchedGroups)?; // [s_out, out1, in]
        let lhs = multiply
            .contract(&twisted, &[(1, 1), (2, 0)])
            .map_err(|_| GroupError::MismatchedGroups)?; // [out, in]
        let unit_e = Tensor::basis_vector(d, self.group.identity_index());
        let rhs = unit_e.outer(&counit);
        let (holds, fit) = lhs
            .approx_eq_scalar(&rhs, 1e-9)
            .map_err(|_| GroupError::MismatchedGroups)?;
        Ok(HopfCheck { holds, scalar: fit.scalar, residual: fit.residual })
    }
}

/// Outcome of a Hopf-law check.
#[derive(Clone, Copy, Debug)]
pub struct HopfCheck {
    pub holds: bool,
    pub scalar: f64,
    pub residual: f64,
}

/// An assignment of a phase `θ_k ∈ ℝ` to every group element.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseFunction {
    group: FiniteAbelianGroup,
    thetas: Vec<f64>,
}

impl PhaseFunction {
    pub fn new(group: FiniteAbelianGroup, thetas: Vec<f64>) -> GroupResult<Self> {
        if thetas.len() != group.order() {
            return Err(GroupError::BadPhaseCount(thetas.len(), group.order()));
        }
        Ok(Self { group, thetas })
    }

    /// All phases zero.
    pub fn trivial(group: FiniteAbelianGroup) -> Self {
        let thetas = vec![0.0; group.order()];
        Self { group, thetas }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn theta(&self, k: usize) -> f64 {
        self.thetas[k]
    }

    /// The unimodular value `ψ_k = e^{iθ_k}`.
    pub fn psi(&self, k: usize) -> C64 {
        C64::from_polar(1.0, self.thetas[k])
    }

    /// Phase applied to the difference `g⁻¹·h`.
    pub fn psi_diff(&self, g: usize, h: usize) -> C64 {
        self.psi(self.group.multiply(self.group.inverse(g), h))
    }

    /// True when `ψ_k = ψ_{k̄}` for every element (phases symmetric under
    /// group inversion, up to 2π).
    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.max_symmetry_defect() <= tol
    }

    fn max_symmetry_defect(&self) -> f64 {
        (0..self.group.order())
            .map(|k| (self.psi(k) - self.psi(self.group.inverse(k))).norm())
            .fold(0.0, f64::max)
    }

    /// Fourier transform of `f(k) = ψ_k − ψ_{k̄}`; identically zero exactly
    /// when the phase function is symmetric. The max modulus serves as a
    /// rejection witness.
    pub fn symmetry_witness(&self) -> Vec<C64> {
        let d = self.group.order();
        let f: Vec<C64> = (0..d)
            .map(|k| self.psi(k) - self.psi(self.group.inverse(k)))
            .collect();
        fourier_transform(&self.group, &f)
    }

    pub fn max_symmetry_witness(&self) -> f64 {
        self.symmetry_witness()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Pointwise Frobenius product: phases add modulo 2π.
    pub fn frobenius_product(&self, other: &Self) -> GroupResult<Self> {
        if self.group != other.group {
            return Err(GroupError::MismatchedGroups);
        }
        let thetas = self
            .thetas
            .iter()
            .zip(&other.thetas)
            .map(|(a, b)| (a + b).rem_euclid(TAU))
            .collect();
        Ok(Self { group: self.group.clone(), thetas })
    }

    /// Pointwise inverse: phases negate modulo 2π.
    pub fn inverse(&self) -> Self {
        let thetas = self.thetas.iter().map(|t| (-t).rem_euclid(TAU)).collect();
        Self { group: self.group.clone(), thetas }
    }

    /// The phase state `Σ_k e^{iθ_k}|k⟩` in the point basis.
    pub fn phase_state(&self) -> Tensor {
        let d = self.group.order();
        Tensor::from_fn(&[d], |ix| self.psi(ix[0]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn element_enumeration_round_trips() {
        let g = FiniteAbelianGroup::parse("Z2xZ3").unwrap();
        assert_eq!(g.order(), 6);
        for i in 0..6 {
            assert_eq!(g.index(&g.element(i)), i);
        }
        // last factor fastest
        assert_eq!(g.element(1), vec![0, 1]);
        assert_eq!(g.element(3), vec![1, 0]);
    }

    #[test]
    fn multiply_and_inverse_satisfy_group_axioms() {
        for spec in ["Z2", "Z3", "Z4", "Z2xZ2", "Z2xZ4", "Z6"] {
            let g = FiniteAbelianGroup::parse(spec).unwrap();
            let e = g.identity_index();
            for i in 0..g.order() {
                assert_eq!(g.multiply(i, g.inverse(i)), e, "{spec}");
                assert_eq!(g.multiply(e, i), i);
                for j in 0..g.order() {
                    assert_eq!(g.multiply(i, j), g.multiply(j, i));
                }
            }
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(FiniteAbelianGroup::parse("Q8").is_err());
        assert!(FiniteAbelianGroup::parse("Z0").is_err());
        assert!(FiniteAbelianGroup::parse("").is_err());
        assert!(FiniteAbelianGroup::parse("Z2x").is_err());
        assert_eq!(
            FiniteAbelianGroup::parse("z2XZ3").unwrap().spec_string(),
            "Z2xZ3"
        );
    }

    #[test]
    fn sign_character_on_z2() {
        let g = FiniteAbelianGroup::cyclic(2);
        assert!((g.character(1, 1) - C64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn cube_root_character_on_z3() {
        let g = FiniteAbelianGroup::cyclic(3);
        let expected = C64::from_polar(1.0, TAU / 3.0);
        assert!((g.character(1, 1) - expected).norm() < 1e-15);
    }

    #[test]
    fn character_orthogonality_z2xz2_brute_force() {
        let g = FiniteAbelianGroup::parse("Z2xZ2").unwrap();
        let d = g.order();
        for chi in 0..d {
            for chi2 in 0..d {
                let sum: C64 = (0..d)
                    .map(|k| g.character(chi, k) * g.character(chi2, k).conj())
                    .sum();
                let expected = if chi == chi2 { d as f64 } else { 0.0 };
                assert!((sum - C64::new(expected, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn character_is_multiplicative() {
        let g = FiniteAbelianGroup::parse("Z3xZ4").unwrap();
        let mut rng = Rng::new(5);
        for _ in 0..20 {
            let chi = (rng.next_u64() % g.order() as u64) as usize;
            let a = (rng.next_u64() % g.order() as u64) as usize;
            let b = (rng.next_u64() % g.order() as u64) as usize;
            let lhs = g.character(chi, g.multiply(a, b));
            let rhs = g.character(chi, a) * g.character(chi, b);
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn fourier_matrix_is_unitary() {
        for spec in ["Z2", "Z3", "Z4", "Z2xZ2", "Z6"] {
            let g = FiniteAbelianGroup::parse(spec).unwrap();
            let f = g.fourier_matrix();
            let prod = f.dagger(1).unwrap().matmul(&f).unwrap();
            let id = Tensor::identity(g.order());
            assert!(prod.max_abs_diff(&id).unwrap() < 1e-12, "{spec}");
        }
    }

    #[test]
    fn fourier_transform_basics_and_round_trip() {
        let g = FiniteAbelianGroup::cyclic(2);
        let zero = vec![C64::new(0.0, 0.0); 2];
        assert!(fourier_transform(&g, &zero).iter().all(|z| z.norm() == 0.0));

        let indicator = vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        let fhat = fourier_transform(&g, &indicator);
        assert!(fhat.iter().all(|z| (z - C64::new(1.0, 0.0)).norm() < 1e-15));

        let g = FiniteAbelianGroup::parse("Z2xZ3").unwrap();
        let mut rng = Rng::new(9);
        let f: Vec<C64> = (0..g.order()).map(|_| rng.c64_gaussian()).collect();
        // oracle: direct double sum through the inverse formula
        let back = inverse_fourier_transform(&g, &fourier_transform(&g, &f));
        for (a, b) in f.iter().zip(&back) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn identity_spider_is_identity() {
        for flavor in [Flavor::Point, Flavor::Fourier] {
            let s = ClassicalStructure {
                group: FiniteAbelianGroup::cyclic(3),
                flavor,
            };
            let spider = s.spider(1, 1, None);
            assert!(spider.max_abs_diff(&Tensor::identity(3)).unwrap() < 1e-12);
        }
    }

    #[test]
    fn bridge_effect_on_z2() {
        let s = ClassicalStructure::point(FiniteAbelianGroup::cyclic(2));
        let bridge = s.spider(2, 0, None);
        let expected = Tensor::new(
            vec![2, 2],
            vec![
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
            ],
        )
        .unwrap();
        assert_eq!(bridge.max_abs_diff(&expected).unwrap(), 0.0);
    }

    #[test]
    fn pi_phased_fourier_effect_annihilates_unphased_state() {
        // the π-phased black dot composed with the unphased black dot is the
        // scalar zero: a 2-entry dot product
        let g = FiniteAbelianGroup::cyclic(2);
        let s = ClassicalStructure::fourier(g.clone());
        let phase = PhaseFunction::new(g, vec![0.0, PI]).unwrap();
        let effect = s.spider(1, 0, Some(&phase));
        let state = s.spider(0, 1, None);
        let paired = effect.contract(&state, &[(0, 0)]).unwrap().first();
        assert!(paired.norm() < 1e-12);
        // the effect itself is ⟨χ₀| − ⟨χ₁| in the Fourier labelling
        let minus = s
            .basis_vector(0)
            .conj()
            .sub(&s.basis_vector(1).conj())
            .unwrap();
        assert!(effect.max_abs_diff(&minus).unwrap() < 1e-12);
    }

    #[test]
    fn spider_fusion_all_small_legs() {
        let groups = ["Z2", "Z3", "Z4", "Z2xZ2", "Z6"];
        for spec in groups {
            let g = FiniteAbelianGroup::parse(spec).unwrap();
            for flavor in [Flavor::Point, Flavor::Fourier] {
                let s = ClassicalStructure { group: g.clone(), flavor };
                for m in 0..=3usize {
                    for n in 0..=3usize {
                        if m + n == 0 {
                            continue;
                        }
                        // (m,1) spider ∘ (1,n) spider = (m,n) spider
                        let top = s.spider(m, 1, None); // [out, in^m]
                        let bottom = s.spider(1, n, None); // [out^n, in]
                        let fused = bottom.contract(&top, &[(n, 0)]).unwrap();
                        let expected = s.spider(m, n, None);
                        assert!(
                            fused.max_abs_diff(&expected).unwrap() < 1e-12,
                            "{spec} {flavor:?} m={m} n={n}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn phased_spider_fusion_adds_phases() {
        let g = FiniteAbelianGroup::cyclic(3);
        let s = ClassicalStructure::point(g.clone());
        let p1 = PhaseFunction::new(g.clone(), vec![0.1, 0.7, 1.9]).unwrap();
        let p2 = PhaseFunction::new(g.clone(), vec![0.4, 2.2, 0.3]).unwrap();
        let top = s.spider(1, 1, Some(&p1));
        let bottom = s.spider(1, 1, Some(&p2));
        let fused = bottom.contract(&top, &[(1, 0)]).unwrap();
        let expected = s.spider(1, 1, Some(&p1.frobenius_product(&p2).unwrap()));
        assert!(fused.max_abs_diff(&expected).unwrap() < 1e-12);
    }

    #[test]
    fn antipode_is_identity_on_z2_and_swaps_on_z3() {
        let z2 = ClassicalStructure::point(FiniteAbelianGroup::cyclic(2));
        assert_eq!(
            z2.antipode().unwrap().max_abs_diff(&Tensor::identity(2)).unwrap(),
            0.0
        );
        let z3 = ClassicalStructure::point(FiniteAbelianGroup::cyclic(3));
        let a = z3.antipode().unwrap();
        assert_eq!(a.get(&[0, 0]), C64::new(1.0, 0.0));
        assert_eq!(a.get(&[2, 1]), C64::new(1.0, 0.0));
        assert_eq!(a.get(&[1, 2]), C64::new(1.0, 0.0));
    }

    #[test]
    fn antipode_squares_to_identity() {
        let s = ClassicalStructure::point(FiniteAbelianGroup::parse("Z2xZ4").unwrap());
        let a = s.antipode().unwrap();
        let sq = a.matmul(&a).unwrap();
        assert!(sq.max_abs_diff(&Tensor::identity(8)).unwrap() < 1e-12);
    }

    #[test]
    fn hopf_law_holds_for_small_groups() {
        for spec in ["Z2", "Z3", "Z4", "Z2xZ2"] {
            let s = ClassicalStructure::point(FiniteAbelianGroup::parse(spec).unwrap());
            let check = s.hopf_check().unwrap();
            assert!(check.holds, "{spec}: residual {}", check.residual);
            assert!(check.scalar > 0.0);
        }
    }

    #[test]
    fn hopf_law_fails_with_corrupted_antipode() {
        let s = ClassicalStructure::point(FiniteAbelianGroup::cyclic(3));
        let check = s.hopf_check_with(&Tensor::identity(3)).unwrap();
        assert!(!check.holds);
        assert!(check.residual > 1e-3);
    }

    #[test]
    fn frobenius_product_unit_inverse_and_addition() {
        let g = FiniteAbelianGroup::cyclic(2);
        let psi = PhaseFunction::new(g.clone(), vec![0.0, FRAC_PI_4]).unwrap();
        let unit = PhaseFunction::trivial(g.clone());
        assert_eq!(psi.frobenius_product(&unit).unwrap(), psi);

        let cancelled = psi.frobenius_product(&psi.inverse()).unwrap();
        for k in 0..2 {
            assert!((cancelled.psi(k) - C64::new(1.0, 0.0)).norm() < 1e-12);
        }

        let doubled = psi.frobenius_product(&psi).unwrap();
        assert!((doubled.theta(1) - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn symmetry_flag_and_fourier_witness_agree() {
        let g = FiniteAbelianGroup::cyclic(3);
        let sym = PhaseFunction::new(g.clone(), vec![0.0, 0.7, 0.7]).unwrap();
        assert!(sym.is_symmetric(1e-12));
        assert!(sym.max_symmetry_witness() < 1e-12);

        let asym = PhaseFunction::new(g.clone(), vec![0.0, 0.7, 0.9]).unwrap();
        assert!(!asym.is_symmetric(1e-9));
        assert!(asym.max_symmetry_witness() > 1e-6);

        // both directions on random draws over a non-cyclic group
        let g = FiniteAbelianGroup::parse("Z2xZ3").unwrap();
        let mut rng = Rng::new(31);
        for _ in 0..20 {
            let thetas: Vec<f64> = (0..g.order()).map(|_| rng.uniform() * TAU).collect();
            let p = PhaseFunction::new(g.clone(), thetas).unwrap();
            assert_eq!(p.is_symmetric(1e-9), p.max_symmetry_witness() <= 1e-9);
        }
    }
}
