//! proptest strategies shared by the unit tests.

use proptest::prelude::*;

use crate::exact_linalg::{Matrix, Rational, Vector};
use crate::tensor_algebra::{CurvatureTensor, Lifting, TorsionTensor};

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| Rational::new(p, q).unwrap())
}

pub fn vector(n: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(small_rational(), n).prop_map(Vector::new)
}

pub fn matrix(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(small_rational(), n * n).prop_map(move |e| {
        Matrix::from_fn(n, |i, j| e[i * n + j].clone())
    })
}

pub fn lifting(n: usize) -> impl Strategy<Value = Lifting> {
    prop::collection::vec(matrix(n), n).prop_map(|m| Lifting::new(m).unwrap())
}

pub fn curvature(n: usize) -> impl Strategy<Value = CurvatureTensor> {
    prop::collection::vec(matrix(n), n * (n - 1) / 2).prop_map(move |m| {
        let mut it = m.into_iter();
        CurvatureTensor::from_fn(n, |_, _| it.next().unwrap())
    })
}

pub fn torsion(n: usize) -> impl Strategy<Value = TorsionTensor> {
    prop::collection::vec(vector(n), n * (n - 1) / 2).prop_map(move |m| {
        let mut it = m.into_iter();
        TorsionTensor::from_fn(n, |_, _| it.next().unwrap())
    })
}
