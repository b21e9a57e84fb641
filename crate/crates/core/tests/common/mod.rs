//! Shared fixtures and a deterministic generator for the integration suites.
#![allow(dead_code)]

use mpec_core::geom::ProblemData;
use mpec_core::rational::{rat, ratio, RMatrix, RVector};

/// Splitmix-style deterministic generator; fixed seeds keep every suite
/// reproducible.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next_u64() % ((hi - lo + 1) as u64)) as i64
    }

    pub fn vector(&mut self, len: usize, lo: i64, hi: i64) -> RVector {
        RVector((0..len).map(|_| rat(self.int_in(lo, hi))).collect())
    }

    pub fn matrix(&mut self, rows: usize, cols: usize, lo: i64, hi: i64) -> RMatrix {
        let rvs: Vec<RVector> = (0..rows).map(|_| self.vector(cols, lo, hi)).collect();
        RMatrix::from_rows(&rvs, cols)
    }

    pub fn symmetric(&mut self, n: usize, lo: i64, hi: i64) -> RMatrix {
        let mut m = RMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = rat(self.int_in(lo, hi));
                m[(i, j)] = v.clone();
                m[(j, i)] = v;
            }
        }
        m
    }
}

/// The first worked instance: three-dimensional lower level, two parabolic
/// constraints, a segment of multipliers.
pub fn example1() -> ProblemData {
    ProblemData {
        n: 2,
        m: 3,
        p: 2,
        q: 2,
        grad_f: RVector(vec![rat(1), rat(1), ratio(-3, 2), ratio(-3, 2), rat(-1)]),
        phi_val: RVector::from_i64(&[0, 0, -1]),
        jac_phi: RMatrix::from_i64(&[&[-1, 0, 1, 0, 0], &[0, -1, 0, 1, 0], &[0, 0, 0, 0, 0]]),
        g_val: RVector::from_i64(&[0, 0]),
        jac_g: RMatrix::from_i64(&[&[0, 0, 1], &[0, 0, 1]]),
        hess_g: vec![
            RMatrix::from_i64(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, 0]]),
            RMatrix::from_i64(&[&[0, 0, 0], &[0, 1, 0], &[0, 0, 0]]),
        ],
        g_upper_val: RVector::from_i64(&[0, 0]),
        jac_g_upper: RMatrix::from_i64(&[&[-1, -2, 0, 0, 0], &[-2, -1, 0, 0, 0]]),
        assumption1: true,
    }
}

/// The second worked instance: affine lower level, singleton multiplier set,
/// LICQ fails.
pub fn example2() -> ProblemData {
    ProblemData {
        n: 1,
        m: 2,
        p: 0,
        q: 3,
        grad_f: RVector::from_i64(&[1, 1, 1]),
        phi_val: RVector::from_i64(&[0, 0]),
        jac_phi: RMatrix::from_i64(&[&[1, 2, 0], &[1, 0, 1]]),
        g_val: RVector::from_i64(&[0, 0, 0]),
        jac_g: RMatrix::from_i64(&[&[1, 0], &[0, -1], &[1, 1]]),
        hess_g: vec![
            RMatrix::zeros(2, 2),
            RMatrix::zeros(2, 2),
            RMatrix::zeros(2, 2),
        ],
        g_upper_val: RVector::zeros(0),
        jac_g_upper: RMatrix::zeros(0, 3),
        assumption1: true,
    }
}
