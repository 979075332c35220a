//! Proposition-level verification: seeded deterministic sampling, quotient
//! and causality checks, and one runner per certified statement.
//!
//! Every randomized suite is a deterministic function of `(kind, dim, seed)`;
//! trial `i` of a battery draws from seed `base + i`, so runs are
//! reproducible and trial order is irrelevant.
//!
//! Each runner aggregates sub-checks into a single `max_violation`. Equality
//! checks with their own stated tolerance `t` contribute their residual
//! rescaled by `tol/t`, so the report invariant `pass ⇔ max_violation ≤ tol`
//! holds uniformly; exclusion checks (something must *fail* to be erased or
//! reached, with residual at least some threshold) contribute zero when the
//! witness is strong enough and the raw shortfall otherwise.

use std::f64::consts::TAU;
use std::time::Instant;

use num_complex::Complex64 as C64;

use crate::cpm::{self, CpMap, PureMap};
use crate::dilation::{self, DdRealization};
use crate::group::{ClassicalStructure, FiniteAbelianGroup, PhaseFunction};
use crate::hypercube::{self, DhMap, DhRealization, DhState};
use crate::linalg;
use crate::tensor::Tensor;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown proposition id {0:?}")]
    UnknownProposition(String),

    #[error("unsupported dimension {0} (supported: 2–5)")]
    UnsupportedDim(usize),

    #[error("unknown sample kind {0:?}")]
    UnknownKind(String),
}

/// SplitMix64 generator with a Box–Muller Gaussian tap.
///
/// Hand-rolled so that sampled values are bit-stable across releases of any
/// external RNG crate; reports and golden files depend on that stability.
#[derive(Clone, Debug)]
pub struct Rng {
    state: u64,
    spare_gaussian: Option<f64>,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self { state: seed, spare_gaussian: None }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw in `(0, 1]`, safe as a logarithm argument.
    fn uniform_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal draw.
    pub fn gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare_gaussian.take() {
            return z;
        }
        let r = (-2.0 * self.uniform_open().ln()).sqrt();
        let theta = TAU * self.uniform();
        self.spare_gaussian = Some(r * theta.sin());
        r * theta.cos()
    }

    /// Complex Gaussian draw with independent standard-normal parts.
    pub fn c64_gaussian(&mut self) -> C64 {
        C64::new(self.gaussian(), self.gaussian())
    }

    pub fn index(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }
}

/// Complex-Gaussian tensor of the given shape.
pub fn gaussian_tensor(shape: &[usize], rng: &mut Rng) -> Tensor {
    Tensor::from_fn(shape, |_| rng.c64_gaussian())
}

/// Normalised Gaussian-random pure state.
pub fn random_pure_state(d: usize, rng: &mut Rng) -> Vec<C64> {
    let mut v: Vec<C64> = (0..d).map(|_| rng.c64_gaussian()).collect();
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    v
}

/// Haar-ish random unitary via modified Gram–Schmidt on a Gaussian matrix.
pub fn random_unitary(d: usize, rng: &mut Rng) -> Tensor {
    let mut cols: Vec<Vec<C64>> = (0..d)
        .map(|_| (0..d).map(|_| rng.c64_gaussian()).collect())
        .collect();
    for k in 0..d {
        for j in 0..k {
            let proj: C64 = (0..d).map(|r| cols[j][r].conj() * cols[k][r]).sum();
            let correction: Vec<C64> = cols[j].iter().map(|z| z * proj).collect();
            for (x, adj) in cols[k].iter_mut().zip(correction) {
                *x -= adj;
            }
        }
        let norm: f64 = cols[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut cols[k] {
            *z /= norm;
        }
    }
    Tensor::from_fn(&[d, d], |ix| cols[ix[1]][ix[0]])
}

/// Random trace-preserving channel with `n_kraus` Kraus elements, obtained by
/// whitening a Gaussian family with the inverse square root of `Σ K†K`.
pub fn random_cp_map(d: usize, n_kraus: usize, rng: &mut Rng) -> CpMap {
    let raw: Vec<Tensor> = (0..n_kraus)
        .map(|_| gaussian_tensor(&[d, d], rng))
        .collect();
    let mut gram = Tensor::zeros(&[d, d]);
    for k in &raw {
        gram = gram
            .add(&k.dagger(1).expect("rank 2").matmul(k).expect("square"))
            .expect("same shape");
    }
    let eig = linalg::hermitian_eigen(&gram).expect("gram is hermitian");
    let mut inv_sqrt = Tensor::zeros(&[d, d]);
    for (k, &lambda) in eig.values.iter().enumerate() {
        let col = Tensor::from_fn(&[d], |ix| eig.vectors.get(&[ix[0], k]));
        let proj = col.outer(&col.conj());
        inv_sqrt = inv_sqrt
            .add(&proj.scale_re(1.0 / lambda.sqrt()))
            .expect("same shape");
    }
    let kraus: Vec<PureMap> = raw
        .iter()
        .map(|k| PureMap::new(k.matmul(&inv_sqrt).expect("square")).expect("rank 2"))
        .collect();
    CpMap::from_kraus(kraus).expect("nonempty family")
}

/// Random phase function; when `symmetric` is set, phases are constant on
/// inverse pairs `{k, k̄}`.
pub fn random_phase_function(
    group: &FiniteAbelianGroup,
    rng: &mut Rng,
    symmetric: bool,
) -> PhaseFunction {
    let d = group.order();
    let mut thetas = vec![f64::NAN; d];
    for k in 0..d {
        if thetas[k].is_nan() {
            let theta = rng.uniform() * TAU;
            thetas[k] = theta;
            if symmetric {
                thetas[group.inverse(k)] = theta;
            }
        }
    }
    PhaseFunction::new(group.clone(), thetas).expect("phase count matches order")
}

/// Random realizable density-hypercube state, normalised to `discard = 1`.
///
/// A complex-Gaussian pure vector on `H ⊗ E ⊗ B` (all factors of dimension
/// `d`) is read as a Kraus family indexed by `E`, realized through an
/// undressed bridge on `B`, and rescaled. Deterministic in `(d, seed)`.
pub fn random_dh_state(d: usize, seed: u64) -> DhState {
    let mut rng = Rng::new(seed);
    let psi = gaussian_tensor(&[d, d, d], &mut rng); // [H, E, B]
    let kraus: Vec<Tensor> = (0..d)
        .map(|m| Tensor::from_fn(&[d, d, 1], |ix| psi.get(&[ix[0], m, ix[1]])))
        .collect();
    let r = DhRealization::new(kraus, FiniteAbelianGroup::cyclic(d as u32), None)
        .expect("state realization");
    let raw = hypercube::state_from_realization(&r).expect("state denotation");
    let total = raw.discard();
    assert!(total > 0.0, "gaussian state has positive discard");
    raw.scale(1.0 / total).expect("positive rescale")
}

/// Random certificate-backed density-hypercube map: a two-Kraus CP map
/// `H → H ⊗ B` with `dim B = d` through an undressed bridge. Returns both the
/// denoted map and its realization. Deterministic in `(d, seed)`.
pub fn random_dh_map(d: usize, seed: u64) -> (DhMap, DhRealization) {
    let mut rng = Rng::new(seed.wrapping_mul(0x9E37_79B9).wrapping_add(17));
    let kraus: Vec<Tensor> = (0..2)
        .map(|_| Tensor::from_fn(&[d, d, d], |_| rng.c64_gaussian().scale(0.5)))
        .collect();
    let r = DhRealization::new(kraus, FiniteAbelianGroup::cyclic(d as u32), None)
        .expect("map realization");
    let map = hypercube::dh_denote(&r).expect("map denotation");
    (map, r)
}

/// Random normalised tripartite amplitudes and the double-dilation state they
/// induce. Deterministic in `(dims, seed)`.
pub fn random_dd_state(dims: [usize; 3], seed: u64) -> (Tensor, dilation::DdState) {
    let mut rng = Rng::new(seed.wrapping_mul(0x517C_C1B7).wrapping_add(3));
    let raw = gaussian_tensor(&dims, &mut rng);
    let c = raw.scale_re(1.0 / raw.frobenius_norm());
    let s = dilation::dd_state_from_tripartite(&c).expect("rank-3 amplitudes");
    (c, s)
}

/// One sampled value, as produced by [`random_suite`].
#[derive(Clone, Debug)]
pub enum SampleValue {
    DhState(DhState),
    DdState(dilation::DdState),
    CpMap(CpMap),
    DhMap(DhMap),
}

/// Deterministic sampler behind the `sample` command.
pub fn random_suite(kind: &str, dim: usize, seed: u64) -> Result<SampleValue, VerifyError> {
    if !(2..=5).contains(&dim) {
        return Err(VerifyError::UnsupportedDim(dim));
    }
    match kind {
        "dh-state" => Ok(SampleValue::DhState(random_dh_state(dim, seed))),
        "dd-state" => Ok(SampleValue::DdState(random_dd_state([dim, dim, dim], seed).1)),
        "cp-map" => {
            let mut rng = Rng::new(seed.wrapping_mul(0xA076_1D64).wrapping_add(5));
            Ok(SampleValue::CpMap(random_cp_map(dim, 2, &mut rng)))
        }
        "dh-map" => Ok(SampleValue::DhMap(random_dh_map(dim, seed).0)),
        other => Err(VerifyError::UnknownKind(other.to_string())),
    }
}

/// Residual of the quotient identity `q ∘ u = q`: the membership predicate
/// for phase and hyper-phase groups.
pub fn quotient_residual(q: &DhMap, u: &DhMap) -> f64 {
    q.compose(u).expect("matching dims").max_abs_diff(q).expect("same shape")
}

/// Residual of idempotence `e ∘ e = e`.
pub fn idempotent_residual(e: &DhMap) -> f64 {
    e.compose(e).expect("square map").max_abs_diff(e).expect("same shape")
}

/// Residual of causality `discard ∘ f = discard`.
pub fn causal_residual(f: &DhMap) -> f64 {
    f.causal_residual().expect("well-formed map")
}

/// Residual of sub-normalisation with an explicit witness: `f ⊞ g` causal.
pub fn subnormalised_residual(f: &DhMap, g: &DhMap) -> f64 {
    causal_residual(&f.add(g).expect("matching dims"))
}

/// A structured verification outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub proposition: String,
    pub theory: String,
    pub group: String,
    pub trials: u64,
    pub seed: u64,
    pub tolerance: f64,
    pub max_violation: f64,
    pub fitted_scalars: Vec<f64>,
    pub pass: bool,
    /// Wall-clock time; displayed by the text formatter but deliberately
    /// excluded from the machine-readable form, which must be deterministic.
    pub elapsed_ms: f64,
}

/// Configuration shared by every proposition runner.
#[derive(Clone, Debug)]
pub struct PropConfig {
    pub groups: Vec<FiniteAbelianGroup>,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for PropConfig {
    fn default() -> Self {
        Self {
            groups: vec![
                FiniteAbelianGroup::cyclic(2),
                FiniteAbelianGroup::cyclic(3),
                FiniteAbelianGroup::parse("Z2xZ2").expect("static spec"),
            ],
            trials: 200,
            seed: 42,
            tol: 1e-9,
        }
    }
}

/// Identifier of one certified statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropId {
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
    P7,
    P8,
    Eq9,
    DmSubDd,
    Hopf,
}

impl PropId {
    pub fn parse(s: &str) -> Result<Self, VerifyError> {
        Ok(match s {
            "1" => Self::P1,
            "2" => Self::P2,
            "3" => Self::P3,
            "4" => Self::P4,
            "5" => Self::P5,
            "6" => Self::P6,
            "7" => Self::P7,
            "8" => Self::P8,
            "eq9" => Self::Eq9,
            "dm-sub-dd" => Self::DmSubDd,
            "hopf" => Self::Hopf,
            other => return Err(VerifyError::UnknownProposition(other.to_string())),
        })
    }

    pub fn all() -> [Self; 11] {
        [
            Self::P1,
            Self::P2,
            Self::P3,
            Self::P4,
            Self::P5,
            Self::P6,
            Self::P7,
            Self::P8,
            Self::Eq9,
            Self::DmSubDd,
            Self::Hopf,
        ]
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::P1 => "1",
            Self::P2 => "2",
            Self::P3 => "3",
            Self::P4 => "4",
            Self::P5 => "5",
            Self::P6 => "6",
            Self::P7 => "7",
            Self::P8 => "8",
            Self::Eq9 => "eq9",
            Self::DmSubDd => "dm-sub-dd",
            Self::Hopf => "hopf",
        }
    }
}

/// Violation accumulator. Equality residuals are rescaled so that one report
/// tolerance governs sub-checks with different stated tolerances.
struct Battery {
    tol: f64,
    max_violation: f64,
    scalars: Vec<f64>,
}

impl Battery {
    fn new(tol: f64) -> Self {
        Self { tol, max_violation: 0.0, scalars: Vec::new() }
    }

    /// Equality check with its own stated tolerance.
    fn equality(&mut self, residual: f64, stated_tol: f64) {
        self.max_violation = self.max_violation.max(residual * (self.tol / stated_tol));
    }

    /// Exclusion check: the residual must be at least `threshold`.
    fn exclusion(&mut self, residual: f64, threshold: f64) {
        if residual < threshold {
            self.max_violation = self.max_violation.max(threshold - residual);
        }
    }

    /// Raw bound violation (already a defect; zero when satisfied).
    fn bound(&mut self, violation: f64) {
        self.max_violation = self.max_violation.max(violation.max(0.0));
    }

    fn scalar(&mut self, s: f64) {
        self.scalars.push(s);
    }
}

fn finish(
    id: PropId,
    theory: &str,
    cfg: &PropConfig,
    group_label: String,
    trials: u64,
    battery: Battery,
    start: Instant,
) -> VerificationReport {
    VerificationReport {
        proposition: id.as_str().to_string(),
        theory: theory.to_string(),
        group: group_label,
        trials,
        seed: cfg.seed,
        tolerance: cfg.tol,
        max_violation: battery.max_violation,
        fitted_scalars: battery.scalars,
        pass: battery.max_violation <= cfg.tol,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

fn group_label(groups: &[FiniteAbelianGroup]) -> String {
    groups
        .iter()
        .map(|g| g.spec_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Probabilistic hyper-decoherence: idempotence, the sub-causality bounds on
/// random realizable states, the causal completion, and every realization
/// certificate involved.
fn run_prop1(cfg: &PropConfig) -> VerificationReport {
    let start = Instant::now();
    let mut battery = Battery::new(cfg.tol);
    for group in &cfg.groups {
        let d = group.order();
        let hyp = hypercube::hypdec_map(group);
        let completion = hypercube::hypdec_completion(group).expect("completion");
        battery.equality(idempotent_residual(&hyp), cfg.tol);
        battery.equality(hyp.certificate_defect().expect("certified"), cfg.tol);
        battery.equality(completion.certificate_defect().expect("certified"), cfg.tol);
        let branch = hyp.add(&completion).expect("same dims");
        battery.equality(causal_residual(&branch), 1e-10);
        battery.equality(subnormalised_residual(&hyp, &completion), 1e-10);
        if d == 2 {
            let flip = hypercube::shifted_bridge_map(group, 1);
            battery.equality(
                completion.max_abs_diff(&flip).expect("same dims"),
                cfg.tol,
            );
        }
        for i in 0..cfg.trials as u64 {
            let state = random_dh_state(d, cfg.seed + i);
            let total = state.discard();
            let collapsed = hyp.apply(&state).expect("same dim").discard();
            battery.bound(-collapsed);
            battery.bound(collapsed - total);
            let through = completion.apply(&state).expect("same dim").discard();
            battery.equality((collapsed + through - total).abs(), 1e-10);
        }
    }
    finish(
        PropId::P1,
        "density-hypercubes",
        cfg,
        group_label(&cfg.groups),
        cfg.trials as u64,
        battery,
        start,
    )
}

/// Doubled phase gates: members of the phase group (erased by decoherence),
/// invertible, and acting as double-angle phase gates on the quantum sector.
fn run_prop2(cfg: &PropConfig) -> VerificationReport {
    let start = Instant::now();
    let mut battery = Battery::new(cfg.tol);
    let trials = (cfg.trials / 20).max(5);
    for group in &cfg.groups {
        let dec = hypercube::dec_map(group);
        for i in 0..trials as u64 {
            let mut rng = Rng::new(cfg.seed + 7000 + i);
            let phi = random_phase_function(group, &mut rng, false);
            let gate = hypercube::doubled_phase_gate(group, &phi);
            battery.equality(quotient_residual(&dec, &gate), cfg.tol);
            battery.equality(causal_residual(&gate), cfg.tol);
            let inv = hypercube::doubled_phase_gate(group, &phi.inverse());
            battery.equality(
                gate.compose(&inv)
                    .expect("same dims")
                    .max_abs_diff(&DhMap::identity(group.order()))
                    .expect("same shape"),
                cfg.tol,
            );
            // quantum action doubles the angles
            let doubled: Vec<C64> = (0..group.order())
                .map(|k| C64::from_polar(1.0, 2.0 * phi.theta(k)))
                .collect();
            let expected = cpm::double(&PureMap::diagonal(&doubled));
            battery.equality(
                gate.quantum_action().max_abs_diff(&expected).expect("same shape"),
                cfg.tol,
            );
        }
    }
    finish(
        PropId::P2,
        "density-hypercubes",
        cfg,
        group_label(&cfg.groups),
        trials as u64,
        battery,
        start,
    )
}

/// Qubit phase gadgets: erased by both idempotents, angles add under
/// composition, and the bridge expansion of the square root of `M(α)`
/// reproduces the gadget up to a positive scalar.
fn run_prop3(cfg: &PropConfig) -> VerificationReport {
    let start = Instant::now();
    let mut battery = Battery::new(cfg.tol);
    let group = FiniteAbelianGroup::cyclic(2);
    let dec = hypercube::dec_map(&group);
    let hyp = hypercube::hypdec_map(&group);
    for k in 0..16 {
        let alpha = 0.1 + 0.2 * k as f64;
        let gadget = hypercube::phase_gadget(alpha);
        battery.equality(quotient_residual(&dec, &gadget), cfg.tol);
        battery.equality(quotient_residual(&hyp, &gadget), cfg.tol);
        battery.equality(causal_residual(&gadget), cfg.tol);
    }
    let mut rng = Rng::new(cfg.seed + 3000);
    for _ in 0..20 {
        let a = rng.uniform() * TAU;
        let b = rng.uniform() * TAU;
        let composed = hypercube::phase_gadget(a)
            .compose(&hypercube::phase_gadget(b))
            .expect("qubit maps");
        battery.equality(
            composed
                .max_abs_diff(&hypercube::phase_gadget(a + b))
                .expect("same shape"),
            1e-12,
        );
    }
    // closed forms of the bridge matrix at the endpoints
    let m0 = hypercube::m_matrix(0.0);
    let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
    let mut m0_defect = 0.0f64;
    for r in 0..2 {
        for c in 0..2 {
            m0_defect = m0_defect.max((m0.entry(r, c) - C64::new(inv_sqrt2, 0.0)).norm());
        }
    }
    battery.equality(m0_defect, cfg.tol);
    let mpi = hypercube::m_matrix(std::f64::consts::PI);
    let mut mpi_defect = 0.0f64;
    for r in 0..2 {
        for c in 0..2 {
            let sign = if r == c { 1.0 } else { -1.0 };
            mpi_defect =
                mpi_defect.max((mpi.entry(r, c) - C64::new(sign * inv_sqrt2, 0.0)).norm());
        }
    }
    battery.equality(mpi_defect, cfg.tol);
    // symmetric square root expands about the bridge to the gadget
    let fourier = ClassicalStructure::fourier(group.clone());
    for alpha in [0.3, 1.0, 2.5] {
        let root = hypercube::symmetric_sqrt(&hypercube::m_matrix(alpha), &fourier)
            .expect("diagonal in the Fourier basis");
        let expanded = hypercube::bridge_expand(&root).expect("square matrix");
        let (ok, fit) = hypercube::phase_gadget(alpha)
            .tensor()
            .approx_eq_scalar(expanded.tensor(), cfg.tol)
            .expect("same shape");
        battery.equality(fit.residual, cfg.tol);
        battery.scalar(fit.scalar);
        if !ok {
            battery.bound(1.0);
        }
    }
    finish(PropId::P3, "density-hypercubes", cfg, "Z2".to_string(), 20, battery, start)
}

/// Bridge-phase maps for arbitrary groups: phase-group membership, causality,
/// certificates, composition through the pointwise product, and rejection of
/// asymmetric phase functions with a Fourier witness.
fn run_prop4(cfg: &PropConfig) -> VerificationReport {
    let start = Instant::now();
    let mut battery = Battery::new(cfg.tol);
    let trials = (cfg.trials / 40).max(4);
    for group in &cfg.groups {
        let dec = hypercube::dec_map(group);
        for i in 0..trials as u64 {
            let mut rng = Rng::new(cfg.seed + 4000 + i);
            let p1 = random_phase_function(group, &mut rng, true);
            let p2 = random_phase_function(group, &mut rng, true);
            let b1 = hypercube::bridge_phase_map(group, &p1).expect("symmetric phases");
            let b2 = hypercube::bridge_phase_map(group, &p2).expect("symmetric phases");
            battery.equality(quotient_residual(&dec, &b1), cfg.tol);
            battery.equality(causal_residual(&b1), cfg.tol);
            battery.equality(b1.certificate_defect().expect("certified"), cfg.tol);
            let composed = b1.compose(&b2).expect("same dims");
            let product =
                hypercube::bridge_phase_map(group, &p1.frobenius_product(&p2).expect("same group"))
                    .expect("symmetric phases");
            battery.equality(composed.max_abs_diff(&product).expect("same shape"), 1e-12);
            let inv = hypercube::bridge_phase_map(group, &p1.inverse()).expect("symmetric");
            battery.equality(
                b1.compose(&inv)
                    .expect("same dims")
                    .max_abs_diff(&DhMap::identity(group.order()))
                    .expect("same shape"),
                1e-12,
            );
            // asymmetric phases must be rejected with a nonzero witness;
            // only possible when some element differs from its inverse
            if (0..group.order()).any(|k| group.inverse(k) != k) {
                let asym = loop {
                    let candidate = random_phase_function(group, &mut rng, false);
                    if !candidate.is_symmetric(1e-6) {
                        break candidate;
                    }
                };
                match hypercube::bridge_phase_map(group, &asym) {
                    Err(hypercube::DhError::AsymmetricDressing(witness)) => {
                        battery.exclusion(witness, 1e-6);
                    }
                    _ => battery.bound(1.0),
                }
            }
        }
    }
    finish(
        PropId::P4,
        "density-hypercubes",
        cfg,
        group_label(&cfg.groups),
        trials as u64,
        battery,
        start,
    )
}

/// The qubit hyper-phase group: gadgets are quotiented away by
/// hyper-decoherence, doubled phases are not, and the two families commute.
fn run_prop5(cfg: &PropConfig) -> VerificationReport {
    let start = Instant::now();
    let mut battery = Battery::new(cfg.tol);
    let group = FiniteAbelianGroup::cyclic(2);
    let hyp = hypercube::hypdec_map(&group);
    for k in 0..16 {
        let alpha = 0.1 + 0.2 * k as f64;
        battery.equality(quotient_residual(&hyp, &hypercube::phase_gadget(alpha)), cfg.tol);
    }
    // exclusion: a doubled quarter phase survives hyper-decoherence
    let phi = PhaseFunction::new(group.clone(), vec![0.0, std::f64::consts::FRAC_PI_2])
        .expect("qubit phases");
    let gate = hypercube::doubled_phase_gate(&group, &phi);
    battery.exclusion(quotient_residual(&hyp, &gate), 1e-3);
    // torus structure: the two families commute exactly
    let mut rng = Rng::new(cfg.seed + 5000);
    for _ in 0..10 {
        let alpha = rng.uniform() * TAU;
        let theta = rng.uniform() * TAU;
        let gadget = hypercube::phase_gadget(alpha);
        let phase = hypercube::doubled_phase_gate(
            &group,
            &PhaseFunction::new(group.clone(), vec![0.0, theta]).expect("qubit phases"),
        );
        let ab = gadget.compose(&phase).expect("qubit maps");
        let ba = phase.compose(&gadget).expect("qubit maps");
        battery.equality(ab.max_abs_diff(&ba).expect("same shape"), 1e-12);
    }
    finish(PropId::P5, "density-hypercubes", cfg, "Z2".to_string(), 16, battery, start)
}

/// General-dimension hyper-phases: symmetric bridge-phase maps are quotiented
/// away by hyper-decoherence and compose through the pointwise product.
fn run_prop6(cfg: &PropConfig) -> VerificationReport {
    let start = Instant::now();
    let mut battery = Battery::new(cfg.tol);
    let trials = (cfg.trials / 40).max(4);
    for group in &cfg.groups {
        let hyp = hypercube::hypdec_map(group);
        for i in 0..trials as u64 {
            let mut rng = Rng::new(cfg.seed + 6000 + i);
            let p1 = random_phase_function(group, &mut rng, true);
            let p2 = random_phase_function(group, &mut rng, true);
            let b1 = hypercube::bridge_phase_map(group, &p1).expect("symmetric phases");
            let b2 = hypercube::bridge_phase_map(group, &p2).expect("symmetric phases");
            battery.equality(quotient_residual(&hyp, &b1), 1e-10);
            let composed = b1.compose(&b2).expect("same dims");
            let product =
                hypercube::bridge_phase_map(group, &p1.frobenius_product(&p2).expect("same group"))
                    .expect("symmetric phases");
            battery.equality(composed.max_abs_diff(&product).expect("same shape"), 1e-12);
            if (0..group.order()).any(|k| group.inverse(k) != k) {
                let asym = loop {
                    let candidate = random_phase_function(group, &mut rng, false);
                    if !candidate.is_symmetric(1e-6) {
                        break candidate;
                    }
                };
                match hypercube::bridge_phase_map(group, &asym) {
                    Err(hypercube::DhError::AsymmetricDressing(witness)) => {
                        battery.exclusion(witness, 1e-6);
                    }
                    _ => battery.bound(1.0),
                }
            }
        }
    }
    finish(
        PropId::P6,
        "density-hypercubes",
        cfg,
        group_label(&cfg.groups),
        trials as u64,
        battery,
        start,
    )
}

/// The failed hyper-decoherence candidate of double dilation: its output is
/// always real symmetric, so the imaginary quantum witness is unreachable.
fn run_prop7(cfg: &PropConfig) -> VerificationReport {
    let start = Instant::now();
    let mut battery = Battery::new(cfg.tol);
    let trials = cfg.trials.max(1000);
    for i in 0..trials as u64 {
        let (_, state) = random_dd_state([2, 2, 2], cfg.seed + i);
        let out = dilation::candidate_hypdec(&state);
        let mut max_im = 0.0f64;
        let mut max_asym = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                max_im = max_im.max(out.get(&[r, c]).im.abs());
                max_asym = max_asym.max((out.get(&[r, c]) - out.get(&[c, r])).norm());
            }
        }
        battery.equality(max_im, 1e-10);
        battery.equality(max_asym, 1e-10);
    }
    // witness: the imaginary plus state is unreachable
    let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
    let psi = [C64::new(inv_sqrt2, 0.0), C64::new(0.0, inv_sqrt2)];
    let c3 = Tensor::from_fn(&[2, 1, 1], |ix| psi[ix[0]]);
    let s = dilation::dd_state_from_tripartite(&c3).expect("amplitudes");
    let out = dilation::candidate_hypdec(&s);
    battery.equality((out.get(&[0, 1]) - C64::new(0.25, 0.0)).norm(), 1e-12);
    let truth = psi[0] * psi[1].conj(); // −i/2
    battery.exclusion((out.get(&[0, 1]) - truth).norm(), 1e-3);
    finish(PropId::P7, "double-dilation", cfg, "Z2".to_string(), trials as u64, battery, start)
}

/// Invertibility probes. Folded unitaries have condition number one. The
/// stated expectation that generic realizations with nontrivial environments
/// have vanishing smallest singular value is also probed verbatim; it fails
/// and the report says so. The in-theory obstruction is certified
/// through the positivity failure of the linear inverse.
fn run_prop8(cfg: &PropConfig) -> VerificationReport {
    let start = Instant::now();
    let mut battery = Battery::new(cfg.tol);
    let trials = (cfg.trials / 2).max(100);
    let mut rng = Rng::new(cfg.seed + 8000);
    for _ in 0..20 {
        let u = PureMap::new(random_unitary(2, &mut rng)).expect("square");
        let probe = dilation::invertibility_probe(&dilation::folded_map(&u))
            .expect("square fold");
        battery.bound(probe.condition_number() - 1.0 - 1e-9);
        if !probe.invertible {
            battery.bound(1.0);
        }
    }
    for _ in 0..trials {
        let kraus: Vec<Tensor> = (0..2)
            .map(|_| Tensor::from_fn(&[2, 2, 2], |_| rng.c64_gaussian().scale(0.5)))
            .collect();
        let r = DdRealization::new(kraus).expect("kraus family");
        let dd = dilation::invertibility_probe(&dilation::dd_denote(&r).expect("denotation"))
            .expect("square");
        let dm = dilation::invertibility_probe(&dilation::dm_denote(&r).expect("denotation"))
            .expect("square");
        // verbatim expectation: smallest singular value at most 1e-8
        battery.bound(dd.smallest_singular_value - 1e-8);
        battery.bound(dm.smallest_singular_value - 1e-8);
    }
    // in-theory obstruction: the linear inverse of a noisy fold is not a
    // completely positive process
    for _ in 0..20 {
        let channel = random_cp_map(2, 2, &mut rng);
        let flat = channel.transfer().reshape(&[4, 4]).expect("square");
        if let Some(inv) = linalg::invert_matrix(&flat).expect("rank-2 input") {
            let inv_transfer = inv.reshape(&[2, 2, 2, 2]).expect("volume");
            let choi = cpm::choi_from_transfer(&inv_transfer);
            let min = linalg::min_hermitian_eigenvalue(&choi).expect("hermitian");
            battery.exclusion(-min, 1e-6);
        }
    }
    finish(PropId::P8, "double-dilation/double-mixing", cfg, "Z2".to_string(), trials as u64, battery, start)
}

/// Sub-causality of hyper-decoherence: the gap statistics on random states
/// and the strict gap on the folded uniform-superposition state.
fn run_eq9(cfg: &PropConfig) -> VerificationReport {
    let start = Instant::now();
    let mut battery = Battery::new(cfg.tol);
    for group in &cfg.groups {
        let d = group.order();
        let hyp = hypercube::hypdec_map(group);
        for i in 0..cfg.trials as u64 {
            let state = random_dh_state(d, cfg.seed + 90_000 + i);
            let total = state.discard();
            let collapsed = hyp.apply(&state).expect("same dim").discard();
            battery.bound(-collapsed);
            battery.bound(collapsed - total);
            let beyond = hypercube::uhfb_effect(d)
                .evaluate(&state)
                .expect("same dim")
                .re;
            battery.equality((total - collapsed - beyond).abs(), cfg.tol);
        }
        // folded uniform superposition: gap exactly 1 − 1/d
        let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
        let kraus = Tensor::from_fn(&[d, 1, 1], |_| amp);
        let r = DhRealization::new(vec![kraus], FiniteAbelianGroup::trivial(), None)
            .expect("state realization");
        let uniform = hypercube::state_from_realization(&r).expect("state");
        let gap = uniform.discard() - hyp.apply(&uniform).expect("dim").discard();
        battery.equality((gap - (1.0 - 1.0 / d as f64)).abs(), cfg.tol);
        battery.exclusion(gap, 1e-3);
        // embedded states have no gap
        let mut rng = Rng::new(cfg.seed + 91_000);
        let embedded = hypercube::embed_pure(&random_pure_state(d, &mut rng));
        let gap = embedded.discard() - hyp.apply(&embedded).expect("dim").discard();
        battery.equality(gap.abs(), cfg.tol);
    }
    finish(
        PropId::Eq9,
        "density-hypercubes",
        cfg,
        group_label(&cfg.groups),
        cfg.trials as u64,
        battery,
        start,
    )
}

/// Double mixing as a sub-theory of double dilation: the four-legged spider
/// equals the crosswise pairing of the dephased realization.
fn run_dm_sub_dd(cfg: &PropConfig) -> VerificationReport {
    let start = Instant::now();
    let mut battery = Battery::new(cfg.tol);
    let trials = (cfg.trials / 2).max(100);
    for i in 0..trials as u64 {
        let mut rng = Rng::new(cfg.seed + 77_000 + i);
        let d = 2 + (i % 2) as usize; // alternate d = 2, 3
        let kraus: Vec<Tensor> = (0..2)
            .map(|_| Tensor::from_fn(&[d, 2, d], |_| rng.c64_gaussian().scale(0.5)))
            .collect();
        let r = DdRealization::new(kraus).expect("kraus family");
        let dm = dilation::dm_denote(&r).expect("denotation");
        let dd = dilation::dd_denote(&r.dephase_env()).expect("denotation");
        battery.equality(dm.max_abs_diff(&dd).expect("same shape"), 1e-10);
    }
    finish(
        PropId::DmSubDd,
        "double-mixing",
        cfg,
        "Z2,Z3".to_string(),
        trials as u64,
        battery,
        start,
    )
}

/// The algebraic substrate: Hopf law, spider fusion, Fourier unitarity and
/// character orthogonality for every configured group.
fn run_hopf(cfg: &PropConfig) -> VerificationReport {
    let start = Instant::now();
    let mut battery = Battery::new(cfg.tol);
    for group in &cfg.groups {
        let d = group.order();
        let point = ClassicalStructure::point(group.clone());
        let check = point.hopf_check().expect("point structure");
        battery.equality(check.residual, 1e-12);
        battery.scalar(check.scalar);
        // an element of order > 2 makes the identity a corrupted antipode
        if (0..d).any(|k| group.inverse(k) != k) {
            let corrupted = point.hopf_check_with(&Tensor::identity(d)).expect("point");
            battery.exclusion(corrupted.residual, 1e-3);
        }
        // spider fusion across both flavors
        for structure in [point.clone(), ClassicalStructure::fourier(group.clone())] {
            for m in 0..=3usize {
                for n in 0..=3usize {
                    if m + n == 0 {
                        continue;
                    }
                    let top = structure.spider(m, 1, None);
                    let bottom = structure.spider(1, n, None);
                    let fused = bottom.contract(&top, &[(n, 0)]).expect("shared leg");
                    battery.equality(
                        fused
                            .max_abs_diff(&structure.spider(m, n, None))
                            .expect("same shape"),
                        1e-12,
                    );
                }
            }
        }
        // phased fusion adds phases
        let mut rng = Rng::new(cfg.seed + 60_000);
        let p1 = random_phase_function(group, &mut rng, false);
        let p2 = random_phase_function(group, &mut rng, false);
        let fused = point
            .spider(1, 1, Some(&p2))
            .contract(&point.spider(1, 1, Some(&p1)), &[(1, 0)])
            .expect("shared leg");
        battery.equality(
            fused
                .max_abs_diff(
                    &point.spider(1, 1, Some(&p1.frobenius_product(&p2).expect("same group"))),
                )
                .expect("same shape"),
            1e-12,
        );
        // Fourier unitarity
        let f = group.fourier_matrix();
        battery.equality(
            f.dagger(1)
                .expect("matrix")
                .matmul(&f)
                .expect("square")
                .max_abs_diff(&Tensor::identity(d))
                .expect("same shape"),
            1e-12,
        );
        // character orthogonality, brute force
        let mut ortho_defect = 0.0f64;
        for chi in 0..d {
            for chi2 in 0..d {
                let sum: C64 = (0..d)
                    .map(|k| group.character(chi, k) * group.character(chi2, k).conj())
                    .sum();
                let expected = if chi == chi2 { d as f64 } else { 0.0 };
                ortho_defect = ortho_defect.max((sum - C64::new(expected, 0.0)).norm());
            }
        }
        battery.equality(ortho_defect, 1e-12);
    }
    finish(
        PropId::Hopf,
        "group-algebra",
        cfg,
        group_label(&cfg.groups),
        1,
        battery,
        start,
    )
}

/// Karoubi-envelope spot check: for random certificate-backed maps the
/// idempotent sandwich is determined by the quantum action, the quantum
/// action is completely positive and functorial through the idempotent, and
/// embedded states round-trip.
pub fn karoubi_quantum_sector_check(dim: usize, trials: usize, seed: u64) -> VerificationReport {
    let cfg = PropConfig {
        groups: vec![FiniteAbelianGroup::cyclic(dim as u32)],
        trials,
        seed,
        tol: 1e-9,
    };
    let start = Instant::now();
    let mut battery = Battery::new(cfg.tol);
    let group = FiniteAbelianGroup::cyclic(dim as u32);
    let hyp = hypercube::hypdec_map(&group);
    for i in 0..trials as u64 {
        let (map, realization) = random_dh_map(dim, seed + i);
        // the sandwich is determined by the quantum action
        let sandwich = hyp
            .compose(&map)
            .expect("dims")
            .compose(&hyp)
            .expect("dims");
        let lifted = hypercube::lift_quantum(&map.quantum_action()).expect("transfer");
        battery.equality(sandwich.max_abs_diff(&lifted).expect("same shape"), 1e-9);
        // complete positivity through the effective Kraus family
        let q = map.quantum_action();
        let channel = CpMap::from_kraus(realization.effective_kraus().expect("bridge"))
            .expect("nonempty");
        battery.equality(q.max_abs_diff(&channel.transfer()).expect("same shape"), 1e-12);
        let (_, min) = cpm::is_cp_choi(&cpm::choi_from_transfer(&q)).expect("hermitian");
        battery.bound(-min - 1e-9);
        // functoriality through the idempotent
        if i % 10 == 0 {
            let (other, _) = random_dh_map(dim, seed + 100_000 + i);
            let composite = map
                .compose(&hyp)
                .expect("dims")
                .compose(&other)
                .expect("dims");
            let direct = composite.quantum_action();
            let chained = map
                .quantum_action()
                .contract(&other.quantum_action(), &[(2, 0), (3, 1)])
                .expect("transfer contraction");
            battery.equality(direct.max_abs_diff(&chained).expect("same shape"), 1e-9);
        }
        // embedded round trip
        let mut rng = Rng::new(seed + 200_000 + i);
        let psi = random_pure_state(dim, &mut rng);
        let rho = hypercube::extract_quantum(&hypercube::embed_pure(&psi), 1e-12)
            .expect("embedded states are invariant");
        let expected = Tensor::from_fn(&[dim, dim], |ix| psi[ix[0]] * psi[ix[1]].conj());
        battery.equality(rho.max_abs_diff(&expected).expect("same shape"), 1e-12);
    }
    VerificationReport {
        proposition: "karoubi".to_string(),
        theory: "density-hypercubes".to_string(),
        group: group.spec_string(),
        trials: trials as u64,
        seed,
        tolerance: cfg.tol,
        max_violation: battery.max_violation,
        fitted_scalars: battery.scalars,
        pass: battery.max_violation <= cfg.tol,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

/// Runs one certified statement under the given configuration.
pub fn run_proposition(id: PropId, cfg: &PropConfig) -> VerificationReport {
    match id {
        PropId::P1 => run_prop1(cfg),
        PropId::P2 => run_prop2(cfg),
        PropId::P3 => run_prop3(cfg),
        PropId::P4 => run_prop4(cfg),
        PropId::P5 => run_prop5(cfg),
        PropId::P6 => run_prop6(cfg),
        PropId::P7 => run_prop7(cfg),
        PropId::P8 => run_prop8(cfg),
        PropId::Eq9 => run_eq9(cfg),
        PropId::DmSubDd => run_dm_sub_dd(cfg),
        PropId::Hopf => run_hopf(cfg),
    }
}

/// Runs the full battery in a fixed order.
pub fn run_all(cfg: &PropConfig) -> Vec<VerificationReport> {
    PropId::all().iter().map(|&id| run_proposition(id, cfg)).collect()
}
