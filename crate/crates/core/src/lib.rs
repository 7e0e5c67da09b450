//! Measures obtained by pushing the Parry measure of a sofic shift forward
//! through the digit map `(x_k) ↦ Σ x_k β^{-k}` for a Pisot number `β`.
//!
//! The crate is organised bottom-up:
//!
//! - [`ball`]: fixed-point ball arithmetic backing every certified enclosure.
//! - [`algebraic`]: Pisot numbers, exact arithmetic in `ℤ[β]` and `ℚ(β)`,
//!   fractional parts of `zβᵏ`.
//! - [`automaton`]: labelled automata over integer alphabets, transition
//!   matrices, primitivity and word counting.
//! - [`parry`]: Perron–Frobenius data and the maximal-entropy measure.
//! - [`zero`]: the automaton recognising digit words of value zero.
//! - [`classify`]: atomic / continuous verdicts with exact atoms.
//! - [`fourier`]: Fourier transforms as infinite matrix products and the
//!   limits along `β`-power sequences.
//! - [`distribution`]: depth-`n` point clouds and CDF brackets.
//! - [`fixtures`]: bundled example automata and the self-check report.

pub mod algebraic;
pub mod automaton;
pub mod ball;
pub mod classify;
pub mod distribution;
mod error;
pub mod fixtures;
pub mod fourier;
pub mod parry;
pub mod zero;

pub use algebraic::{
    bint_embed, bint_mul, frac_beta_power, make_pisot, qbeta_div, BetaInt, FracPart, PisotNumber,
    QBeta,
};
pub use automaton::{
    count_words, enumerate_paths, parse_automaton, primitivity_check, transition_matrices,
    AutomatonDocument, LabeledAutomaton, Primitivity, TransitionMatrices,
};
pub use classify::{
    atoms, classify, finite_image_test, Atom, ClassifyOptions, Evidence, FiniteImage, Verdict,
    VerdictKind,
};
pub use distribution::{
    cdf_bounds, cdf_bounds_at_depth, depth_cloud, sample_values, value_bounds, DepthCloud,
};
pub use error::{Error, Result};
pub use fourier::{nu_hat, nu_hat_initial, psi_hat, rajchman_scan, FourierValue, ScanReport};
pub use parry::{
    cylinder_measure, cylinder_measure_initial, perron, sample_run, start_distribution, PerronData,
};
pub use zero::{build_zero_automaton, verify_zero_language, Trim, ZeroAutomaton};

/// Default cap on working precision, in bits.
pub const DEFAULT_PRECISION_CAP: u32 = 4096;

/// Environment variable overriding [`DEFAULT_PRECISION_CAP`].
pub const PRECISION_CAP_ENV: &str = "MEASURE_LAB_PRECISION_CAP";

/// Precision cap from the environment, falling back to the default.
pub fn precision_cap() -> u32 {
    std::env::var(PRECISION_CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<u32>().ok())
        .filter(|&bits| bits >= 64)
        .unwrap_or(DEFAULT_PRECISION_CAP)
}
