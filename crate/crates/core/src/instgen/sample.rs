//! Per-patient samplers shared by the generator and the real-data filler.

use rand::Rng;
use rand_distr::{Distribution, Gamma};

pub const WORKLOAD_MIN: f64 = 1.0;
pub const WORKLOAD_MAX: f64 = 5.0;
/// Per-shift decay of the workload over a stay.
pub const WORKLOAD_DECAY: f64 = 0.1;
pub const GAMMA_SHAPE: f64 = 3.0;

/// Probabilities of the initial skill requirement 2, 1, 0.
pub const SKILLREQ_START: [f64; 3] = [0.2, 0.5, 0.3];

pub fn gamma_scale(agegroup: u32) -> f64 {
    0.5 + f64::from(agegroup) / 10.0
}

/// Workload sequence of a stay: a clamped gamma draw followed by a
/// multiplicative decay floored at the minimum.
pub fn sample_workload(agegroup: u32, los_shifts: usize, rng: &mut impl Rng) -> Vec<f64> {
    let gamma = Gamma::new(GAMMA_SHAPE, gamma_scale(agegroup)).expect("positive gamma parameters");
    let first = gamma.sample(rng).clamp(WORKLOAD_MIN, WORKLOAD_MAX);
    decay_sequence(first, los_shifts)
}

pub fn decay_sequence(first: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut w = first;
    for _ in 0..len {
        out.push(w);
        w = (w * (1.0 - WORKLOAD_DECAY)).max(WORKLOAD_MIN);
    }
    out
}

/// Nonincreasing skill requirements over `len` day shifts.
pub fn sample_skillreq(len: usize, rng: &mut impl Rng) -> Vec<u8> {
    let u: f64 = rng.random();
    let start: u8 = if u < SKILLREQ_START[0] {
        2
    } else if u < SKILLREQ_START[0] + SKILLREQ_START[1] {
        1
    } else {
        0
    };
    let mut drops = vec![0u8; len];
    if len > 1 {
        for _ in 0..start {
            if rng.random_bool(0.5) {
                drops[rng.random_range(1..len)] += 1;
            }
        }
    }
    let mut level = start;
    drops
        .into_iter()
        .map(|d| {
            level = level.saturating_sub(d);
            level
        })
        .collect()
}

/// Nonincreasing equipment requirements over `len` days as bit masks over
/// `num_types` equipment types.
pub fn sample_equipment(num_types: usize, len: usize, rng: &mut impl Rng) -> Vec<u64> {
    let mut until = vec![0usize; num_types];
    for u in until.iter_mut() {
        if rng.random_bool(0.3) {
            *u = if len > 1 && rng.random_bool(0.5) { rng.random_range(1..len) } else { len };
        }
    }
    (0..len).map(|t| until.iter().enumerate().filter(|(_, &u)| t < u).fold(0u64, |m, (i, _)| m | (1 << i))).collect()
}
