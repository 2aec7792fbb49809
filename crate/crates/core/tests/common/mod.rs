#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ihomog::lie_builder::LiftShift;
use ihomog::{CurvatureTensor, LieSubalgebra, Lifting, Matrix, Rational, TorsionTensor, Vector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(rng: &mut impl Rng) -> Rational {
    Rational::new(rng.random_range(-5..=5), rng.random_range(1..=3)).unwrap()
}

pub fn random_vector(rng: &mut impl Rng, n: usize) -> Vector {
    Vector::new((0..n).map(|_| small_rational(rng)).collect())
}

pub fn random_matrix(rng: &mut impl Rng, n: usize) -> Matrix {
    Matrix::from_fn(n, |_, _| small_rational(rng))
}

pub fn random_lifting(rng: &mut impl Rng, n: usize) -> Lifting {
    Lifting::from_fn(n, |_| random_matrix(rng, n))
}

pub fn random_curvature(rng: &mut impl Rng, n: usize) -> CurvatureTensor {
    CurvatureTensor::from_fn(n, |_, _| random_matrix(rng, n))
}

pub fn random_torsion(rng: &mut impl Rng, n: usize) -> TorsionTensor {
    TorsionTensor::from_fn(n, |_, _| random_vector(rng, n))
}

pub fn random_shift(rng: &mut impl Rng, n: usize, k: usize) -> LiftShift {
    LiftShift {
        delta: (0..n).map(|_| (0..k).map(|_| small_rational(rng)).collect()).collect(),
    }
}

/// E_ij − E_ji for i < j.
pub fn so_basis(n: usize) -> Vec<Matrix> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(&Matrix::unit(n, i, j) - &Matrix::unit(n, j, i));
        }
    }
    out
}

pub fn so(n: usize) -> LieSubalgebra {
    LieSubalgebra::new(n, so_basis(n)).unwrap()
}

/// R(u,v)w = c(⟨v,w⟩u − ⟨u,w⟩v), so R(e_i,e_j) = c(E_ij − E_ji).
pub fn constant_curvature(n: usize, c: i64) -> CurvatureTensor {
    let c = Rational::integer(c);
    CurvatureTensor::from_fn(n, |i, j| (&Matrix::unit(n, i, j) - &Matrix::unit(n, j, i)).scale(&c))
}

pub fn int(v: i64) -> Rational {
    Rational::integer(v)
}
