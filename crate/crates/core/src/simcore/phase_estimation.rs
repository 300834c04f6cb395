use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
use rand::Rng;

use super::{AEOutcome, GroverOperator, QueryCost};
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Largest joint (system x phase register) dimension the statevector
/// backend will allocate.
pub const STATEVECTOR_LIMIT: usize = 1 << 24;

/// In-place radix-2 DFT, `X[k] = sum_y x[y] e^{-2 pi i y k / M}`.
fn dft_in_place(buf: &mut [Complex64]) {
    let n = buf.len();
    let bits = n.trailing_zeros();
    if n <= 1 {
        return;
    }
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            buf.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let angle = -2.0 * PI / len as f64;
        for start in (0..n).step_by(len) {
            for k in 0..len / 2 {
                let w = Complex64::new(libm::cos(angle * k as f64), libm::sin(angle * k as f64));
                let even = buf[start + k];
                let odd = buf[start + k + len / 2] * w;
                buf[start + k] = even + odd;
                buf[start + k + len / 2] = even - odd;
            }
        }
        len <<= 1;
    }
}

/// Outcome law of textbook phase estimation on `Q`, computed from the full
/// joint state.
///
/// The phase register starts uniform, controlled powers `Q^y` act on the
/// system, and the inverse Fourier transform over `M` points is applied
/// before measuring the register.
pub fn statevector_outcome_distribution(op: &GroverOperator, register: usize) -> Result<Vec<f64>> {
    if register < 2 || !register.is_power_of_two() {
        return Err(Error::configuration(format!(
            "phase register size {register} must be a power of two >= 2"
        )));
    }
    let dim = op.dimension();
    if dim.saturating_mul(register) > STATEVECTOR_LIMIT {
        return Err(Error::configuration(format!(
            "joint dimension {dim} x {register} exceeds the statevector limit {STATEVECTOR_LIMIT}"
        )));
    }
    // joint[y * dim + s] = <y, s| after controlled powers, up to 1/sqrt(M)
    let mut joint = vec![Complex64::new(0.0, 0.0); dim * register];
    joint[..dim].copy_from_slice(op.initial().amplitudes());
    for y in 1..register {
        let (done, rest) = joint.split_at_mut(y * dim);
        let next = &mut rest[..dim];
        next.copy_from_slice(&done[(y - 1) * dim..]);
        op.apply(next);
    }

    let scale = 1.0 / register as f64;
    let mut probabilities = vec![0.0; register];
    let mut column = vec![Complex64::new(0.0, 0.0); register];
    for s in 0..dim {
        for (y, c) in column.iter_mut().enumerate() {
            *c = joint[y * dim + s];
        }
        dft_in_place(&mut column);
        for (p, c) in probabilities.iter_mut().zip(&column) {
            *p += c.norm_sqr() * scale * scale;
        }
    }
    Ok(probabilities)
}

/// Amplitude estimation on the full statevector. Slow; for cross-checks.
pub fn statevector_ae(
    op: &GroverOperator,
    register: usize,
    cost: QueryCost,
    rng: &mut RngStream,
) -> Result<AEOutcome> {
    let law = statevector_outcome_distribution(op, register)?;
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut outcome = register - 1;
    for (y, p) in law.iter().enumerate() {
        acc += p;
        if u < acc {
            outcome = y;
            break;
        }
    }
    Ok(AEOutcome::from_outcome(outcome, register, cost))
}
