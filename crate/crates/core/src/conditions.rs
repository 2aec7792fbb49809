//! Necessary conditions on a candidate (h, R₀, T₀, λ): infinitesimal invariance,
//! the Bianchi identities and the curvature relation, plus the certificate runner.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_linalg::{Matrix, Vector};
use crate::subalgebra::{check_closure, check_group_invariance, CheckResult, GroupGenerators, LieSubalgebra, Witness};
use crate::tensor_algebra::{
    derivation_action_on_R, derivation_action_on_T, m_bracket, CurvatureTensor, Lifting, TorsionTensor,
};
use crate::torsion_reduction;

/// Characteristic data (R₀, T₀, λ) on ℚⁿ.
#[derive(Clone, Debug, PartialEq)]
pub struct CharTriple {
    pub r: CurvatureTensor,
    pub t: TorsionTensor,
    pub lam: Lifting,
}

impl CharTriple {
    pub fn new(r: CurvatureTensor, t: TorsionTensor, lam: Lifting) -> Result<Self> {
        let n = r.dim();
        for found in [t.dim(), lam.dim()] {
            if found != n {
                return Err(Error::DimensionMismatch { expected: n, found });
            }
        }
        Ok(CharTriple { r, t, lam })
    }

    pub fn zero(n: usize) -> Self {
        CharTriple {
            r: CurvatureTensor::zero(n),
            t: TorsionTensor::zero(n),
            lam: Lifting::zero(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.r.dim()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.t.is_zero()
    }

    pub fn with_lifting(&self, lam: Lifting) -> Result<Self> {
        CharTriple::new(self.r.clone(), self.t.clone(), lam)
    }
}

fn check_dims(h: &LieSubalgebra, n: usize) -> Result<()> {
    if h.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: h.ambient_dim(),
        });
    }
    Ok(())
}

pub const INF_R: &str = "inf_invariance_R";
pub const INF_T: &str = "inf_invariance_T";
pub const INF_LAMBDA: &str = "inf_invariance_lambda";
pub const BIANCHI_1: &str = "bianchi_1";
pub const BIANCHI_2: &str = "bianchi_2";
pub const CURVATURE_RELATION: &str = "curvature_relation";

/// For every h-basis element L: 𝒟_L R = 0, 𝒟_L T = 0 and [L,λ(u)] − λ(Lu) ∈ h.
pub fn check_inf_invariance(h: &LieSubalgebra, t: &CharTriple) -> Result<[CheckResult; 3]> {
    Ok([
        check_inf_invariance_R(h, &t.r)?,
        check_inf_invariance_T(h, &t.t)?,
        check_inf_invariance_lambda(h, &t.lam)?,
    ])
}

#[allow(non_snake_case)]
pub fn check_inf_invariance_R(h: &LieSubalgebra, r: &CurvatureTensor) -> Result<CheckResult> {
    check_dims(h, r.dim())?;
    for (a, l) in h.basis().iter().enumerate() {
        let d = derivation_action_on_R(l, r)?;
        let first = d.nonzero_pairs().next().map(|(i, j, v)| (i, j, v.clone()));
        if let Some((i, j, v)) = first {
            let w = Witness::at([i, j]).with_basis(a).with_matrix(v);
            return Ok(CheckResult::fail(INF_R, w));
        }
    }
    Ok(CheckResult::pass(INF_R))
}

#[allow(non_snake_case)]
pub fn check_inf_invariance_T(h: &LieSubalgebra, t: &TorsionTensor) -> Result<CheckResult> {
    check_dims(h, t.dim())?;
    for (a, l) in h.basis().iter().enumerate() {
        let d = derivation_action_on_T(l, t)?;
        let first = d.nonzero_pairs().next().map(|(i, j, v)| (i, j, v.clone()));
        if let Some((i, j, v)) = first {
            let w = Witness::at([i, j]).with_basis(a).with_vector(v);
            return Ok(CheckResult::fail(INF_T, w));
        }
    }
    Ok(CheckResult::pass(INF_T))
}

pub fn check_inf_invariance_lambda(h: &LieSubalgebra, lam: &Lifting) -> Result<CheckResult> {
    let n = lam.dim();
    check_dims(h, n)?;
    for (a, l) in h.basis().iter().enumerate() {
        for i in 0..n {
            let d = &l.commutator(lam.get(i)) - &lam.eval(&l.column(i))?;
            if !h.contains(&d)? {
                let w = Witness::at([i]).with_basis(a).with_matrix(d);
                return Ok(CheckResult::fail(INF_LAMBDA, w));
            }
        }
    }
    Ok(CheckResult::pass(INF_LAMBDA))
}

/// Ordered triples i<j<k; both cyclic sums below are alternating, so these suffice.
fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| (i, j, k))))
}

/// 𝔖 R(X,Y)Z = 0.
pub fn check_first_bianchi(r: &CurvatureTensor) -> CheckResult {
    let n = r.dim();
    let col = |i: usize, j: usize, k: usize| r.get(i, j).column(k);
    let first = triples(n).find_map(|(i, j, k)| {
        let s = &(&col(i, j, k) + &col(j, k, i)) + &col(k, i, j);
        (!s.is_zero()).then(|| Witness::at([i, j, k]).with_vector(s))
    });
    CheckResult::from_first(BIANCHI_1, first)
}

/// 𝔖 (𝒟_{λ(X)} R)(Y,Z) = 0.
pub fn check_second_bianchi(r: &CurvatureTensor, lam: &Lifting) -> Result<CheckResult> {
    let n = r.dim();
    if lam.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: lam.dim(),
        });
    }
    let d: Vec<CurvatureTensor> = lam
        .components()
        .iter()
        .map(|l| derivation_action_on_R(l, r))
        .collect::<Result<_>>()?;
    let first = triples(n).find_map(|(i, j, k)| {
        let s = &(&d[i].get(j, k) + &d[j].get(k, i)) + &d[k].get(i, j);
        (!s.is_zero()).then(|| Witness::at([i, j, k]).with_matrix(s))
    });
    Ok(CheckResult::from_first(BIANCHI_2, first))
}

/// R(u,v) − [λu,λv] + λ(λ(u)v − λ(v)u), which must lie in h.
pub fn curvature_residual(r: &CurvatureTensor, lam: &Lifting, i: usize, j: usize) -> Result<Matrix> {
    let n = r.dim();
    let (u, v) = (Vector::basis(n, i), Vector::basis(n, j));
    let br = lam.get(i).commutator(lam.get(j));
    Ok(&(&r.get(i, j) - &br) + &lam.eval(&m_bracket(lam, &u, &v)?)?)
}

pub fn check_curvature_relation(h: &LieSubalgebra, r: &CurvatureTensor, lam: &Lifting) -> Result<CheckResult> {
    let n = r.dim();
    check_dims(h, n)?;
    if lam.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: lam.dim(),
        });
    }
    for i in 0..n {
        for j in i + 1..n {
            let res = curvature_residual(r, lam, i, j)?;
            if !h.contains(&res)? {
                let w = Witness::at([i, j]).with_matrix(res);
                return Ok(CheckResult::fail(CURVATURE_RELATION, w));
            }
        }
    }
    Ok(CheckResult::pass(CURVATURE_RELATION))
}

/// 𝔖([λ(Z),R(X,Y)] − R([X,Y]^m,Z)) = 0; a rearrangement of the second Bianchi identity.
pub fn check_derived_curvature_identity(r: &CurvatureTensor, lam: &Lifting) -> Result<CheckResult> {
    let n = r.dim();
    let e = |i| Vector::basis(n, i);
    let term = |x: usize, y: usize, z: usize| -> Result<Matrix> {
        let a = lam.get(z).commutator(&r.get(x, y));
        Ok(&a - &r.eval(&m_bracket(lam, &e(x), &e(y))?, &e(z))?)
    };
    for (i, j, k) in triples(n) {
        let s = &(&term(i, j, k)? + &term(j, k, i)?) + &term(k, i, j)?;
        if !s.is_zero() {
            return Ok(CheckResult::fail("derived_identity", Witness::at([i, j, k]).with_matrix(s)));
        }
    }
    Ok(CheckResult::pass("derived_identity"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub verdict: Verdict,
    pub checks: Vec<CheckResult>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Names of the failing checks, in report order.
    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect()
    }
}

pub const NOTE_TORSION_ROUTE: &str = "T0 is nonzero: bianchi_1, bianchi_2 and curvature_relation were evaluated on the torsion-free reduction (lambda - s0, R - corr) with s0(X) = 1/2 T0(X,.); the sufficiency theorem is stated for the torsion-free case";
pub const NOTE_HALF_FACTOR: &str = "torsion correction uses the 1/2 factor throughout (connection shifted by 1/2 t); the written-out curvature formula for the shifted connection omits it";
pub const NOTE_TORSION_NOT_INVARIANT: &str = "T0 fails infinitesimal invariance, so the reduction is not a valid symmetric model; the reduced checks are reported for diagnosis only";

/// Runs every condition. When T ≠ 0 the Bianchi identities and the curvature relation
/// are evaluated on the torsion-free reduction.
pub fn run_certificate(
    h: &LieSubalgebra,
    t: &CharTriple,
    g: Option<&GroupGenerators>,
) -> Result<CertificateReport> {
    let n = t.dim();
    check_dims(h, n)?;
    let mut checks = vec![check_closure(h)];
    let inf = check_inf_invariance(h, t)?;
    let torsion_invariant = inf[1].pass;
    checks.extend(inf);
    if let Some(g) = g {
        checks.push(check_group_invariance(g, h, t)?);
    }
    let mut notes = Vec::new();
    let reduced;
    let base = if t.is_torsion_free() {
        t
    } else {
        notes.push(NOTE_TORSION_ROUTE.to_string());
        notes.push(NOTE_HALF_FACTOR.to_string());
        if !torsion_invariant {
            notes.push(NOTE_TORSION_NOT_INVARIANT.to_string());
        }
        reduced = torsion_reduction::remove_torsion_unchecked(t);
        &reduced
    };
    checks.push(check_first_bianchi(&base.r));
    checks.push(check_second_bianchi(&base.r, &base.lam)?);
    checks.push(check_curvature_relation(h, &base.r, &base.lam)?);
    let verdict = if checks.iter().all(|c| c.pass) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(CertificateReport { verdict, checks, notes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::Rational;
    use crate::testutil::*;
    use proptest::prelude::*;

    fn j2() -> Matrix {
        Matrix::from_ints([[0, -1], [1, 0]])
    }

    /// R(u,v)w = c(⟨v,w⟩u − ⟨u,w⟩v).
    fn constant_curvature(n: usize, c: Rational) -> CurvatureTensor {
        CurvatureTensor::from_fn(n, |i, j| {
            (&Matrix::unit(n, i, j) - &Matrix::unit(n, j, i)).scale(&c)
        })
    }

    fn so(n: usize) -> LieSubalgebra {
        let mut b = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                b.push(&Matrix::unit(n, i, j) - &Matrix::unit(n, j, i));
            }
        }
        LieSubalgebra::new(n, b).unwrap()
    }

    fn sphere2() -> (LieSubalgebra, CharTriple) {
        let h = LieSubalgebra::new(2, vec![j2()]).unwrap();
        let r = CurvatureTensor::from_pairs(2, [(0, 1, -&j2())]).unwrap();
        (h, CharTriple::new(r, TorsionTensor::zero(2), Lifting::zero(2)).unwrap())
    }

    /// λ(X) = ½ ad_X and R(X,Y) = −¼ ad_{X×Y} on ℚ³ with the cross product.
    fn liegroup_reduced() -> CharTriple {
        let ad = |i: usize| cross_ad(i);
        let lam = Lifting::from_fn(3, |i| ad(i).scale(&Rational::half()));
        let r = CurvatureTensor::from_fn(3, |i, j| {
            let k = 3 - i - j;
            let sign = if (i, j) == (0, 2) { -1 } else { 1 };
            ad(k).scale(&Rational::new(-sign, 4).unwrap())
        });
        CharTriple::new(r, TorsionTensor::zero(3), lam).unwrap()
    }

    fn cross_ad(i: usize) -> Matrix {
        let e = Vector::basis(3, i);
        Matrix::from_fn(3, |a, b| {
            let eb = Vector::basis(3, b);
            cross(&e, &eb)[a].clone()
        })
    }

    fn cross(x: &Vector, y: &Vector) -> Vector {
        Vector::new(vec![
            &x[1] * &y[2] - &x[2] * &y[1],
            &x[2] * &y[0] - &x[0] * &y[2],
            &x[0] * &y[1] - &x[1] * &y[0],
        ])
    }

    #[test]
    fn zero_subalgebra_vacuous() {
        let t = CharTriple::zero(3);
        let r = check_inf_invariance(&LieSubalgebra::zero(3), &t).unwrap();
        assert!(r.iter().all(|c| c.pass));
    }

    #[test]
    fn sphere_inf_invariance() {
        let (h, t) = sphere2();
        assert!(check_inf_invariance(&h, &t).unwrap().iter().all(|c| c.pass));
    }

    #[test]
    fn perturbed_sphere_fails_r_invariance() {
        let (h, _) = sphere2();
        let r = CurvatureTensor::from_pairs(2, [(0, 1, Matrix::unit(2, 0, 0))]).unwrap();
        let t = CharTriple::new(r, TorsionTensor::zero(2), Lifting::zero(2)).unwrap();
        let [cr, ct, cl] = check_inf_invariance(&h, &t).unwrap();
        assert!(ct.pass && cl.pass);
        let w = cr.witness.unwrap();
        assert_eq!((w.basis, w.indices), (Some(0), vec![0, 1]));
    }

    #[test]
    fn first_bianchi_examples() {
        assert!(check_first_bianchi(&CurvatureTensor::zero(3)).pass);
        assert!(check_first_bianchi(&constant_curvature(3, 1.into())).pass);
        let any2 = CurvatureTensor::from_pairs(2, [(0, 1, Matrix::from_ints([[1, 2], [3, 4]]))]).unwrap();
        assert!(check_first_bianchi(&any2).pass);
        let bad = CurvatureTensor::from_pairs(3, [(0, 1, Matrix::unit(3, 2, 2))]).unwrap();
        let w = check_first_bianchi(&bad).witness.unwrap();
        assert_eq!(w.indices, vec![0, 1, 2]);
    }

    #[test]
    fn second_bianchi_examples() {
        let r = constant_curvature(3, 1.into());
        assert!(check_second_bianchi(&r, &Lifting::zero(3)).unwrap().pass);
        let (_, s) = sphere2();
        assert!(check_second_bianchi(&s.r, &s.lam).unwrap().pass);
        let lg = liegroup_reduced();
        assert!(check_second_bianchi(&lg.r, &lg.lam).unwrap().pass);
        assert!(check_first_bianchi(&lg.r).pass);
    }

    #[test]
    fn curvature_relation_examples() {
        let (h, s) = sphere2();
        assert!(check_curvature_relation(&h, &s.r, &s.lam).unwrap().pass);
        assert!(check_curvature_relation(&h, &CurvatureTensor::zero(2), &Lifting::zero(2)).unwrap().pass);
        let lg = liegroup_reduced();
        let z = LieSubalgebra::zero(3);
        for i in 0..3 {
            for j in i + 1..3 {
                assert!(curvature_residual(&lg.r, &lg.lam, i, j).unwrap().is_zero());
            }
        }
        assert!(check_curvature_relation(&z, &lg.r, &lg.lam).unwrap().pass);
        let w = check_curvature_relation(&z, &lg.r.scale(&2.into()), &lg.lam).unwrap().witness.unwrap();
        assert_eq!(w.indices, vec![0, 1]);
    }

    #[test]
    fn certificate_sphere_and_flat() {
        let (h, s) = sphere2();
        let rep = run_certificate(&h, &s, None).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.checks.len(), 7);
        assert!(rep.notes.is_empty());
        let flat = CharTriple::zero(2);
        assert!(run_certificate(&h, &flat, None).unwrap().passed());
    }

    #[test]
    fn certificate_runs_group_checks() {
        let (h, s) = sphere2();
        let g = GroupGenerators::new(vec![j2(), Matrix::from_ints([[1, 0], [0, -1]])]).unwrap();
        let rep = run_certificate(&h, &s, Some(&g)).unwrap();
        assert!(rep.passed());
        assert!(rep.check("group_invariance").is_some());
    }

    #[test]
    fn certificate_reduces_torsion() {
        // Lie group with the (−)-connection: T(X,Y) = −X×Y, λ = 0, R = 0.
        let t = TorsionTensor::from_fn(3, |i, j| -&cross(&Vector::basis(3, i), &Vector::basis(3, j)));
        let triple = CharTriple::new(CurvatureTensor::zero(3), t, Lifting::zero(3)).unwrap();
        let rep = run_certificate(&LieSubalgebra::zero(3), &triple, None).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.notes.len(), 2);
        let skewed = CharTriple::new(constant_curvature(3, 1.into()), triple.t.clone(), Lifting::zero(3)).unwrap();
        assert!(!run_certificate(&LieSubalgebra::zero(3), &skewed, None).unwrap().passed());
    }

    #[test]
    fn report_json_shape() {
        let (h, s) = sphere2();
        let json = serde_json::to_value(run_certificate(&h, &s, None).unwrap()).unwrap();
        assert_eq!(json["verdict"], "pass");
        assert_eq!(json["checks"][0]["name"], "closure");
        assert!(json.get("notes").is_none());
    }

    /// Sphere at n = 3 with R(e₁,e₂) doubled: breaks 𝒟_L R = 0. Its second Bianchi verdict also
    /// depends on the lifting, because that identity is only lifting-independent once
    /// infinitesimal invariance holds.
    #[test]
    fn scaled_pair_sphere_breaks_invariance() {
        let h = so(3);
        let mut r = constant_curvature(3, 1.into());
        r = CurvatureTensor::from_fn(3, |i, j| {
            let m = r.get(i, j);
            if (i, j) == (0, 1) { m.scale(&2.into()) } else { m }
        });
        let t = CharTriple::new(r.clone(), TorsionTensor::zero(3), Lifting::zero(3)).unwrap();
        let rep = run_certificate(&h, &t, None).unwrap();
        assert!(!rep.check(INF_R).unwrap().pass);
        assert_eq!(rep.check(INF_R).unwrap().witness.as_ref().unwrap().basis, Some(1));
        assert!(rep.check(BIANCHI_2).unwrap().pass);
        let delta = Lifting::from_fn(3, |i| if i == 0 { h.basis()[1].clone() } else { Matrix::zero(3) });
        assert!(!check_second_bianchi(&r, &delta).unwrap().pass);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn constant_curvature_satisfies_first_bianchi((n, c) in (2usize..=5, small_rational())) {
            prop_assert!(check_first_bianchi(&constant_curvature(n, c)).pass);
        }

        #[test]
        fn constant_curvature_certifies((n, c) in (2usize..=4, small_rational())) {
            let t = CharTriple::new(constant_curvature(n, c), TorsionTensor::zero(n), Lifting::zero(n)).unwrap();
            prop_assert!(run_certificate(&so(n), &t, None).unwrap().passed());
        }

        #[test]
        fn derived_identity_tracks_second_bianchi((r, lam) in (2usize..=4).prop_flat_map(|n| (curvature(n), lifting(n)))) {
            let b2 = check_second_bianchi(&r, &lam).unwrap().pass;
            prop_assert_eq!(check_derived_curvature_identity(&r, &lam).unwrap().pass, b2);
        }

        #[test]
        fn verdicts_ignore_h_valued_shift(
            (c, coeffs) in (small_rational(), prop::collection::vec(small_rational(), 9))
        ) {
            let h = so(3);
            let t = CharTriple::new(constant_curvature(3, c), TorsionTensor::zero(3), Lifting::zero(3)).unwrap();
            let delta = Lifting::from_fn(3, |i| h.combination(&coeffs[3 * i..3 * i + 3]));
            let a = run_certificate(&h, &t, None).unwrap();
            let b = run_certificate(&h, &t.with_lifting(delta).unwrap(), None).unwrap();
            let va: Vec<bool> = a.checks.iter().map(|c| c.pass).collect();
            let vb: Vec<bool> = b.checks.iter().map(|c| c.pass).collect();
            prop_assert_eq!(va, vb);
        }
    }
}
