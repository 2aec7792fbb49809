//! Moving between torsion-free and torsioned characteristic data by the
//! connection shift ∇′ = ∇ + ½t, at the level of constant tensors.

use crate::conditions::{check_inf_invariance_T, CharTriple};
use crate::error::{Error, Result};
use crate::exact_linalg::{Matrix, Rational};
use crate::subalgebra::LieSubalgebra;
use crate::tensor_algebra::{CurvatureTensor, Lifting, TorsionTensor};

/// s₀(X) = ½·t(X,·), so s₀(eᵢ) has column j equal to ½·t(eᵢ,eⱼ).
pub fn torsion_shift(t: &TorsionTensor) -> Lifting {
    let n = t.dim();
    let half = Rational::half();
    Lifting::from_fn(n, |i| {
        let cols: Vec<_> = (0..n).map(|j| t.get(i, j)).collect();
        Matrix::from_fn(n, |a, j| &cols[j][a] * &half)
    })
}

/// (X,Y) ↦ (𝒟_{λX}s₀)(Y) − (𝒟_{λY}s₀)(X) + [s₀X, s₀Y], with (𝒟_L s₀)(Y) = [L, s₀Y] − s₀(LY).
pub fn curvature_correction(lam: &Lifting, s0: &Lifting) -> CurvatureTensor {
    let d = |l: &Matrix, y: usize| -> Matrix {
        &l.commutator(s0.get(y)) - &s0.eval(&l.column(y)).expect("same dimension")
    };
    CurvatureTensor::from_fn(lam.dim(), |i, j| {
        let a = &d(lam.get(i), j) - &d(lam.get(j), i);
        a + &s0.get(i).commutator(s0.get(j))
    })
}

fn require_invariant(h: &LieSubalgebra, tor: &TorsionTensor) -> Result<()> {
    let c = check_inf_invariance_T(h, tor)?;
    match c.witness {
        None => Ok(()),
        Some(w) => Err(Error::NonInvariantTorsion(format!(
            "h-basis element {} acting on pair ({},{}) gives {:?}",
            w.basis.unwrap_or(0),
            w.indices[0],
            w.indices[1],
            w.value.expect("witness carries the offending value")
        ))),
    }
}

/// From torsion-free (R, 0, λ) to (R + corr(λ,s₀), tor, λ + s₀).
pub fn add_torsion(h: &LieSubalgebra, t: &CharTriple, tor: &TorsionTensor) -> Result<CharTriple> {
    if !t.is_torsion_free() {
        return Err(Error::NonzeroTorsion);
    }
    if tor.dim() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: t.dim(),
            found: tor.dim(),
        });
    }
    require_invariant(h, tor)?;
    let s0 = torsion_shift(tor);
    let r = t.r.add(&curvature_correction(&t.lam, &s0));
    CharTriple::new(r, tor.clone(), t.lam.add(&s0))
}

/// Inverse of [`add_torsion`] with tor = T: λ = λ′ − s₀, R = R′ − corr(λ, s₀), T = 0.
pub fn remove_torsion(h: &LieSubalgebra, t: &CharTriple) -> Result<CharTriple> {
    require_invariant(h, &t.t)?;
    Ok(remove_torsion_unchecked(t))
}

/// The reduction formulas without the invariance precondition; used for diagnostics.
pub(crate) fn remove_torsion_unchecked(t: &CharTriple) -> CharTriple {
    let s0 = torsion_shift(&t.t);
    let lam = t.lam.sub(&s0);
    let r = t.r.sub(&curvature_correction(&lam, &s0));
    CharTriple {
        r,
        t: TorsionTensor::zero(t.dim()),
        lam,
    }
}
