//! Seeded random operators shared by unit, integration and bench code.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::opcore::{CMat, DensityState, HermitianOperator};

/// Small deterministic xorshift so the crate itself stays free of rand;
/// test-only quality requirements.
pub struct XorShift {
    state: u64,
}

pub fn rng(seed: u64) -> XorShift {
    XorShift {
        state: seed.wrapping_mul(0x9E3779B97F4A7C15).max(1),
    }
}

impl XorShift {
    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.state = x;
        x
    }

    /// Uniform in [0,1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in (-1,1).
    pub fn symmetric(&mut self) -> f64 {
        2.0 * self.uniform() - 1.0
    }
}

pub fn random_hermitian(r: &mut XorShift, d: usize) -> HermitianOperator {
    let mut m = CMat::zeros(d, d);
    for i in 0..d {
        m[(i, i)] = Complex64::new(r.symmetric(), 0.0);
        for j in (i + 1)..d {
            let z = Complex64::new(r.symmetric(), r.symmetric()) * 0.5;
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    HermitianOperator::from_computed(m)
}

/// Random psd operator G G^dag, normalized to unit trace if requested.
pub fn random_psd(r: &mut XorShift, d: usize, unit_trace: bool) -> HermitianOperator {
    let mut g: DMatrix<Complex64> = CMat::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            g[(i, j)] = Complex64::new(r.symmetric(), r.symmetric());
        }
    }
    let m = &g * g.adjoint();
    let op = HermitianOperator::from_computed(m);
    if unit_trace {
        op.scale(1.0 / op.trace())
    } else {
        op
    }
}

/// Random density matrix; `full_rank` mixes in the identity so the smallest
/// eigenvalue is bounded away from zero.
pub fn random_density(r: &mut XorShift, d: usize, full_rank: bool) -> DensityState {
    let mut op = random_psd(r, d, true);
    if full_rank {
        op = op.scale(0.9).add(&HermitianOperator::identity(d).scale(0.1 / d as f64));
    }
    DensityState::new(op).expect("normalized psd")
}
