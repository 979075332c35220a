//! Browser bindings for the interactive demo page.
//!
//! Three operations are exposed, each returning a JSON string so the page
//! needs no shared memory management:
//!
//! - [`povm_demo`]: outcome distribution of the completed computational-basis
//!   measurement on a one-parameter family of qubit states, either embedded
//!   quantum states or their folded post-quantum cousins.
//! - [`phase_residuals`]: quotient residuals showing which diagonal families
//!   are erased by decoherence and hyper-decoherence.
//! - [`run_check`]: one verification report at a chosen group, trial count
//!   and seed.

use wasm_bindgen::prelude::*;

use hdlab_core::group::{FiniteAbelianGroup, PhaseFunction};
use hdlab_core::hypercube;
use hdlab_core::io;
use hdlab_core::tensor::Tensor;
use hdlab_core::verify::{self, PropConfig, PropId};
use num_complex::Complex64 as C64;

fn err_json(message: &str) -> String {
    let mut out = String::from("{\"error\":\"");
    for ch in message.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c => out.push(c),
        }
    }
    out.push_str("\"}");
    out
}

/// Qubit state `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
fn bloch_state(theta: f64, phi: f64) -> [C64; 2] {
    [
        C64::new((theta / 2.0).cos(), 0.0),
        C64::from_polar((theta / 2.0).sin(), phi),
    ]
}

/// Outcome probabilities of the completed measurement on a Bloch-angle state.
///
/// With `post_quantum` unset the state is the embedded quantum state (the
/// completion branch never fires); set, it is the fold of the same amplitudes
/// through a trivial bridge, and probability leaks into the extra outcome.
#[wasm_bindgen]
pub fn povm_demo(theta: f64, phi: f64, post_quantum: bool) -> String {
    let amplitudes = bloch_state(theta, phi);
    let state = if post_quantum {
        let kraus = Tensor::from_fn(&[2, 1, 1], |ix| amplitudes[ix[0]]);
        let r = match hypercube::DhRealization::new(
            vec![kraus],
            FiniteAbelianGroup::trivial(),
            None,
        ) {
            Ok(r) => r,
            Err(e) => return err_json(&e.to_string()),
        };
        match hypercube::state_from_realization(&r) {
            Ok(s) => s,
            Err(e) => return err_json(&e.to_string()),
        }
    } else {
        hypercube::embed_pure(&amplitudes)
    };
    match hypercube::povm_outcomes(&state) {
        Ok((ps, beyond)) => {
            let mut out = String::from("{\"p\":[");
            for (k, p) in ps.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push_str(&format!("{p}"));
            }
            out.push_str(&format!("],\"uhfb\":{beyond}}}"));
            out
        }
        Err(e) => err_json(&e.to_string()),
    }
}

/// Residuals of the two diagonal families under both quotients on a qubit:
/// the phase gadget of angle `alpha` and the doubled phase gate of angle
/// `beta`, plus their commutator defect.
#[wasm_bindgen]
pub fn phase_residuals(alpha: f64, beta: f64) -> String {
    let group = FiniteAbelianGroup::cyclic(2);
    let dec = hypercube::dec_map(&group);
    let hyp = hypercube::hypdec_map(&group);
    let gadget = hypercube::phase_gadget(alpha);
    let phase = match PhaseFunction::new(group.clone(), vec![0.0, beta]) {
        Ok(p) => p,
        Err(e) => return err_json(&e.to_string()),
    };
    let doubled = hypercube::doubled_phase_gate(&group, &phase);
    let ab = gadget.compose(&doubled).expect("qubit maps");
    let ba = doubled.compose(&gadget).expect("qubit maps");
    format!(
        "{{\"gadget\":{{\"dec\":{},\"hypdec\":{}}},\"doubled\":{{\"dec\":{},\"hypdec\":{}}},\"commutator\":{}}}",
        verify::quotient_residual(&dec, &gadget),
        verify::quotient_residual(&hyp, &gadget),
        verify::quotient_residual(&dec, &doubled),
        verify::quotient_residual(&hyp, &doubled),
        ab.max_abs_diff(&ba).expect("same shape"),
    )
}

/// Runs one proposition check and returns its report as JSON.
#[wasm_bindgen]
pub fn run_check(prop: &str, group: &str, trials: u32, seed: u64) -> String {
    let id = match PropId::parse(prop) {
        Ok(id) => id,
        Err(e) => return err_json(&e.to_string()),
    };
    let parsed = match FiniteAbelianGroup::parse(group) {
        Ok(g) => g,
        Err(e) => return err_json(&e.to_string()),
    };
    if parsed.order() > 5 {
        return err_json("groups of order above 5 are too slow for the demo");
    }
    let cfg = PropConfig {
        groups: vec![parsed],
        trials: (trials as usize).clamp(1, 500),
        seed,
        tol: 1e-9,
    };
    let report = verify::run_proposition(id, &cfg);
    match io::report_to_json(&report) {
        Ok(json) => json,
        Err(e) => err_json(&e.to_string()),
    }
}
