use rand::distr::{Bernoulli, Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, unitarity_residual, CMatrix, C64};

/// How the clean qubit is read out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Readout {
    /// Report `P(0)` itself.
    ExactProbability,
    /// Draw a maximally mixed input and a measurement outcome per shot.
    Sampled { shots: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEstimate {
    /// Estimate of `Re Tr(U) / 2^n`.
    pub re: f64,
    /// Estimate of `Im Tr(U) / 2^n`.
    pub im: f64,
    /// Shots per quadrature (0 in exact mode).
    pub shots: u64,
    pub seed: u64,
}

/// Per-basis-state probability of reading 0 on the clean qubit.
///
/// The clean qubit starts in `(|0> + c|1>)/sqrt 2` with `c = 1` (real part)
/// or `c = -i` (imaginary part); for input `|x>` the circuit leaves
/// `(|x> + c U|x>)/2` in the zero branch after the final Hadamard.
fn zero_probabilities(u: &CMatrix, c: C64) -> Vec<f64> {
    let dim = u.nrows();
    (0..dim)
        .map(|x| {
            (0..dim)
                .map(|row| {
                    let basis = if row == x { c64(1.0, 0.0) } else { c64(0.0, 0.0) };
                    ((basis + c * u[(row, x)]) * 0.5).norm_sqr()
                })
                .sum()
        })
        .collect()
}

/// Monte-Carlo frequency of outcome 0: `x` uniform, then Bernoulli(`p0[x]`).
fn sample_zero_frequency(p0: &[f64], shots: u64, rng: &mut ChaCha8Rng) -> Result<f64> {
    let pick = Uniform::new(0, p0.len()).map_err(|e| Error::InvalidInput(e.to_string()))?;
    let coins: Vec<Bernoulli> = p0
        .iter()
        .map(|&p| Bernoulli::new(p.clamp(0.0, 1.0)).expect("clamped probability"))
        .collect();
    let zeros = (0..shots)
        .filter(|_| coins[pick.sample(rng)].sample(rng))
        .count();
    Ok(zeros as f64 / shots as f64)
}

/// One-clean-qubit estimate of `Tr(U) / 2^n` for a unitary on `n` qubits.
pub fn dqc1_trace_estimate(u: &CMatrix, readout: Readout, seed: u64) -> Result<TraceEstimate> {
    if !u.is_square() || !u.nrows().is_power_of_two() {
        return Err(Error::InvalidInput("U must be a 2^n x 2^n matrix".into()));
    }
    let residual = unitarity_residual(u);
    if residual > 1e-10 {
        return Err(Error::InvalidInput(format!("U is not unitary (residual {residual:e})")));
    }
    let re_p0 = zero_probabilities(u, c64(1.0, 0.0));
    let im_p0 = zero_probabilities(u, c64(0.0, -1.0));
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (re_freq, im_freq, shots) = match readout {
        Readout::ExactProbability => (mean(&re_p0), mean(&im_p0), 0),
        Readout::Sampled { shots } => {
            if shots == 0 {
                return Err(Error::InvalidInput("shots must be positive".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let re = sample_zero_frequency(&re_p0, shots, &mut rng)?;
            let im = sample_zero_frequency(&im_p0, shots, &mut rng)?;
            (re, im, shots)
        }
    };
    Ok(TraceEstimate {
        re: 2.0 * re_freq - 1.0,
        im: 2.0 * im_freq - 1.0,
        shots,
        seed,
    })
}

/// DQC1 readout of a compressed trace given the per-input zero
/// probabilities `p0[x] = 1/2 + Re <x|U'|x> / 2`; used by the trace-of-f circuit.
pub(crate) fn sampled_readout(p0: &[f64], shots: u64, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(2.0 * sample_zero_frequency(p0, shots, &mut rng)? - 1.0)
}
