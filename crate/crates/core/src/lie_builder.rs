//! The Lie algebra a = h ⊕ m built from torsion-free characteristic data, with
//! Jacobi, Killing-form and lifting-change checks.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_linalg::{
    solve_linear, span_basis, symmetric_inertia, Matrix, Rational, RectMatrix, Vector,
};
use crate::subalgebra::{CheckResult, LieSubalgebra, Witness};
use crate::tensor_algebra::{m_bracket, CurvatureTensor, Lifting};

/// Structure constants of a in the basis (h₁…h_k, e₁…e_n): `c[a][b]` is the coefficient
/// vector of [basis_a, basis_b].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LieAlgebraStructure {
    pub dim: usize,
    pub h_dim: usize,
    pub basis: Vec<String>,
    pub structure_constants: Vec<Vec<Vector>>,
}

impl LieAlgebraStructure {
    /// Wraps raw constants with labels b1…bd; no checks beyond shape.
    pub fn from_constants(c: Vec<Vec<Vector>>) -> Result<Self> {
        let dim = c.len();
        for row in &c {
            if row.len() != dim || row.iter().any(|v| v.len() != dim) {
                return Err(Error::Shape(format!("structure constants must be {dim}×{dim}×{dim}")));
            }
        }
        Ok(LieAlgebraStructure {
            dim,
            h_dim: 0,
            basis: (1..=dim).map(|i| format!("b{i}")).collect(),
            structure_constants: c,
        })
    }

    pub fn m_dim(&self) -> usize {
        self.dim - self.h_dim
    }

    pub fn constant(&self, a: usize, b: usize) -> &Vector {
        &self.structure_constants[a][b]
    }

    /// Bracket of two elements given by coordinates.
    pub fn bracket(&self, x: &Vector, y: &Vector) -> Vector {
        let mut acc = Vector::zero(self.dim);
        for (a, xa) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (b, yb) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                acc = acc + &self.structure_constants[a][b].scale(&(xa * yb));
            }
        }
        acc
    }

    /// ad_a as a dim × dim matrix: (ad_a)_{cd} = coefficient of basis_c in [basis_a, basis_d].
    pub fn ad(&self, a: usize) -> Matrix {
        Matrix::from_fn(self.dim, |c, d| self.structure_constants[a][d][c].clone())
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.dim).all(|a| {
            (a..self.dim).all(|b| self.structure_constants[a][b] == -&self.structure_constants[b][a])
        })
    }
}

fn label(k: usize, a: usize) -> String {
    if a < k {
        format!("h{}", a + 1)
    } else {
        format!("e{}", a - k + 1)
    }
}

fn stack(h_part: Vec<Rational>, m_part: &Vector) -> Vector {
    let mut v = h_part;
    v.extend(m_part.iter().cloned());
    Vector::new(v)
}

/// The bracket on h ⊕ m:
/// [X,Y]^m = λX·Y − λY·X, [X,Y]^h = [λX,λY] − λ([X,Y]^m) − R(X,Y),
/// [L,X]^m = L·X, [L,X]^h = [L,λX] − λ(LX), and the bracket of h on h ⊕ 0.
pub fn build_bracket(h: &LieSubalgebra, r: &CurvatureTensor, lam: &Lifting) -> Result<LieAlgebraStructure> {
    let n = r.dim();
    if h.ambient_dim() != n || lam.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if h.ambient_dim() != n { h.ambient_dim() } else { lam.dim() },
        });
    }
    let k = h.dim();
    let dim = k + n;
    let mut c = vec![vec![Vector::zero(dim); dim]; dim];
    let coeffs = |m: &Matrix, condition: &'static str, recheck: &'static str, a: usize, b: usize| {
        h.in_h(m)?.ok_or_else(|| Error::Membership {
            condition,
            location: format!("({},{})", label(k, a), label(k, b)),
            recheck,
        })
    };
    let basis = h.basis();
    for a in 0..k {
        for b in a + 1..k {
            let br = basis[a].commutator(&basis[b]);
            c[a][b] = stack(coeffs(&br, "[L,M] in h", "closure", a, b)?, &Vector::zero(n));
        }
        for i in 0..n {
            let l = &basis[a];
            let e = Vector::basis(n, i);
            let hm = &l.commutator(lam.get(i)) - &lam.eval(&l.column(i))?;
            let hc = coeffs(&hm, "[L,X]^h in h", "inf_invariance_lambda", a, k + i)?;
            c[a][k + i] = stack(hc, &l.mul_vec(&e));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let (ei, ej) = (Vector::basis(n, i), Vector::basis(n, j));
            let m = m_bracket(lam, &ei, &ej)?;
            let hm = &(&lam.get(i).commutator(lam.get(j)) - &lam.eval(&m)?) - &r.get(i, j);
            let hc = coeffs(&hm, "[X,Y]^h in h", "curvature_relation", k + i, k + j)?;
            c[k + i][k + j] = stack(hc, &m);
        }
    }
    for a in 1..dim {
        let (upper, rest) = c.split_at_mut(a);
        for (b, row) in upper.iter().enumerate() {
            rest[0][b] = -&row[a];
        }
    }
    Ok(LieAlgebraStructure {
        dim,
        h_dim: k,
        basis: (0..dim).map(|a| label(k, a)).collect(),
        structure_constants: c,
    })
}

/// Σ_cyc [[x,y],z] = 0 on basis triples a<b<c; the Jacobiator of an antisymmetric bracket
/// is alternating, so these suffice.
pub fn check_jacobi(alg: &LieAlgebraStructure) -> CheckResult {
    let d = alg.dim;
    let e = |a| Vector::basis(d, a);
    let br2 = |a: usize, b: usize, c: usize| alg.bracket(alg.constant(a, b), &e(c));
    for a in 0..d {
        for b in a + 1..d {
            for c in b + 1..d {
                let s = &(&br2(a, b, c) + &br2(b, c, a)) + &br2(c, a, b);
                if !s.is_zero() {
                    return CheckResult::fail("jacobi", Witness::at([a, b, c]).with_vector(s));
                }
            }
        }
    }
    CheckResult::pass("jacobi")
}

/// B(x,y) = tr(ad_x ad_y).
pub fn killing_form(alg: &LieAlgebraStructure) -> Matrix {
    let ads: Vec<Matrix> = (0..alg.dim).map(|a| alg.ad(a)).collect();
    Matrix::from_fn(alg.dim, |a, b| (&ads[a] * &ads[b]).trace())
}

pub fn killing_inertia(alg: &LieAlgebraStructure) -> (usize, usize, usize) {
    symmetric_inertia(&killing_form(alg)).expect("the Killing form is symmetric")
}

/// Basis of the center {x : [x,·] = 0}.
pub fn center(alg: &LieAlgebraStructure) -> Vec<Vector> {
    let d = alg.dim;
    let mut a = RectMatrix::zero(d * d, d);
    for x in 0..d {
        for b in 0..d {
            for c in 0..d {
                a.set(b * d + c, x, alg.structure_constants[x][b][c].clone());
            }
        }
    }
    solve_linear(&a, &Vector::zero(d * d))
        .expect("shapes agree")
        .expect("the homogeneous system is consistent")
        .kernel
}

/// Dimensions of a, [a,a], [[a,a],[a,a]], … until the sequence stabilizes.
pub fn derived_series(alg: &LieAlgebraStructure) -> Vec<usize> {
    let mut current: Vec<Vector> = (0..alg.dim).map(|a| Vector::basis(alg.dim, a)).collect();
    let mut dims = vec![current.len()];
    loop {
        let mut brackets = Vec::new();
        for i in 0..current.len() {
            for j in i + 1..current.len() {
                brackets.push(alg.bracket(&current[i], &current[j]));
            }
        }
        let next = span_basis(&brackets);
        if next.len() == current.len() {
            return dims;
        }
        dims.push(next.len());
        if next.is_empty() {
            return dims;
        }
        current = next;
    }
}

/// δ: m → h, stored as the h-coefficients of δ(eᵢ).
#[derive(Clone, Debug, PartialEq)]
pub struct LiftShift {
    pub delta: Vec<Vec<Rational>>,
}

impl LiftShift {
    pub fn zero(n: usize, k: usize) -> Self {
        LiftShift {
            delta: vec![vec![Rational::zero(); k]; n],
        }
    }

    pub fn to_lifting(&self, h: &LieSubalgebra) -> Lifting {
        Lifting::from_fn(self.delta.len(), |i| h.combination(&self.delta[i]))
    }
}

/// φ(L + X) = L + δ(X) + X maps the bracket built from λ to the one built from λ − δ.
pub fn lifting_shift_isomorphism(
    h: &LieSubalgebra,
    r: &CurvatureTensor,
    lam: &Lifting,
    delta: &LiftShift,
) -> Result<CheckResult> {
    let n = r.dim();
    let k = h.dim();
    if delta.delta.len() != n || delta.delta.iter().any(|d| d.len() != k) {
        return Err(Error::Shape(format!("lifting shift must be {n} vectors of length {k}")));
    }
    let a = build_bracket(h, r, lam)?;
    let b = build_bracket(h, r, &lam.sub(&delta.to_lifting(h)))?;
    let phi = |v: &Vector| -> Vector {
        let mut out = v.clone();
        for i in 0..n {
            let xi = &v[k + i];
            if !xi.is_zero() {
                for (c, dc) in delta.delta[i].iter().enumerate() {
                    out[c] += dc * xi;
                }
            }
        }
        out
    };
    let basis: Vec<Vector> = (0..a.dim).map(|x| Vector::basis(a.dim, x)).collect();
    for x in 0..a.dim {
        for y in x + 1..a.dim {
            let lhs = phi(a.constant(x, y));
            let rhs = b.bracket(&phi(&basis[x]), &phi(&basis[y]));
            if lhs != rhs {
                let w = Witness::at([x, y]).with_vector(&lhs - &rhs);
                return Ok(CheckResult::fail("lifting_shift_isomorphism", w));
            }
        }
    }
    Ok(CheckResult::pass("lifting_shift_isomorphism"))
}

/// λ̄(Σ cₐhₐ + X) = Σ cₐhₐ + λ(X), as a matrix on m.
pub fn lambda_bar(h: &LieSubalgebra, lam: &Lifting, v: &Vector) -> Result<Matrix> {
    let k = h.dim();
    let x = Vector::new(v.entries()[k..].to_vec());
    Ok(&h.combination(&v.entries()[..k]) + &lam.eval(&x)?)
}

/// [λ̄(L), λ̄(x)] = λ̄([L,x]) for every h-basis L and every basis element x of a.
pub fn lambda_bar_equivariance(h: &LieSubalgebra, lam: &Lifting, alg: &LieAlgebraStructure) -> Result<CheckResult> {
    let d = alg.dim;
    for a in 0..h.dim() {
        let la = &h.basis()[a];
        for x in 0..d {
            let lhs = la.commutator(&lambda_bar(h, lam, &Vector::basis(d, x))?);
            let rhs = lambda_bar(h, lam, alg.constant(a, x))?;
            if lhs != rhs {
                let w = Witness::at([a, x]).with_matrix(&lhs - &rhs);
                return Ok(CheckResult::fail("lambda_bar_equivariance", w));
            }
        }
    }
    Ok(CheckResult::pass("lambda_bar_equivariance"))
}

/// `build` output: constants plus identification invariants.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BuildReport {
    pub dim: usize,
    pub basis: Vec<String>,
    pub structure_constants: Vec<Vec<Vector>>,
    pub killing_inertia: [usize; 3],
    pub derived_series: Vec<usize>,
    pub jacobi: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jacobi_witness: Option<Witness>,
}

impl BuildReport {
    pub fn new(alg: &LieAlgebraStructure) -> Self {
        let jac = check_jacobi(alg);
        let (p, m, z) = killing_inertia(alg);
        BuildReport {
            dim: alg.dim,
            basis: alg.basis.clone(),
            structure_constants: alg.structure_constants.clone(),
            killing_inertia: [p, m, z],
            derived_series: derived_series(alg),
            jacobi: if jac.pass { "pass" } else { "fail" },
            jacobi_witness: jac.witness,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;
    use proptest::prelude::*;

    fn j2() -> Matrix {
        Matrix::from_ints([[0, -1], [1, 0]])
    }

    fn e2_flat() -> LieAlgebraStructure {
        let h = LieSubalgebra::new(2, vec![j2()]).unwrap();
        build_bracket(&h, &CurvatureTensor::zero(2), &Lifting::zero(2)).unwrap()
    }

    fn plane(c: i64) -> (LieSubalgebra, CurvatureTensor) {
        let h = LieSubalgebra::new(2, vec![j2()]).unwrap();
        // R(e₁,e₂) = c(E₁₂ − E₂₁) = −cJ
        let r = CurvatureTensor::from_pairs(2, [(0, 1, j2().scale(&(-c).into()))]).unwrap();
        (h, r)
    }

    fn v(x: [i64; 3]) -> Vector {
        Vector::from_ints(x)
    }

    #[test]
    fn flat_builds_euclidean_algebra() {
        let a = e2_flat();
        assert_eq!(a.basis, vec!["h1", "e1", "e2"]);
        assert_eq!(a.constant(0, 1), &v([0, 0, 1]));
        assert_eq!(a.constant(0, 2), &v([0, -1, 0]));
        assert_eq!(a.constant(1, 2), &v([0, 0, 0]));
        assert!(a.is_antisymmetric());
        assert!(check_jacobi(&a).pass);
        assert_eq!(killing_inertia(&a), (0, 1, 2));
        assert!(center(&a).is_empty());
        assert_eq!(derived_series(&a), vec![3, 2, 0]);
    }

    #[test]
    fn sphere_builds_so3() {
        let (h, r) = plane(1);
        let a = build_bracket(&h, &r, &Lifting::zero(2)).unwrap();
        assert_eq!(a.constant(1, 2), &v([1, 0, 0]));
        assert_eq!(a.constant(0, 1), &v([0, 0, 1]));
        assert_eq!(a.constant(0, 2), &v([0, -1, 0]));
        assert!(check_jacobi(&a).pass);
        assert_eq!(killing_inertia(&a), (0, 3, 0));
        assert_eq!(derived_series(&a), vec![3]);
        assert!(lambda_bar_equivariance(&h, &Lifting::zero(2), &a).unwrap().pass);
    }

    #[test]
    fn hyperbolic_builds_sl2() {
        let (h, r) = plane(-1);
        let a = build_bracket(&h, &r, &Lifting::zero(2)).unwrap();
        assert!(check_jacobi(&a).pass);
        assert_eq!(killing_inertia(&a), (2, 1, 0));
    }

    #[test]
    fn liegroup_reduced_builds_cross_product() {
        let ad = |i: usize| {
            Matrix::from_fn(3, |a, b| {
                // (e_i × e_b)_a
                let eps = |x: usize, y: usize, z: usize| -> i64 {
                    match (x, y, z) {
                        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
                        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
                        _ => 0,
                    }
                };
                Rational::integer(eps(i, b, a))
            })
        };
        let lam = Lifting::from_fn(3, |i| ad(i).scale(&Rational::half()));
        let r = CurvatureTensor::from_fn(3, |i, j| {
            let kk = 3 - i - j;
            let s = if (i, j) == (0, 2) { 1 } else { -1 };
            ad(kk).scale(&Rational::new(s, 4).unwrap())
        });
        let a = build_bracket(&LieSubalgebra::zero(3), &r, &lam).unwrap();
        assert_eq!(a.constant(0, 1), &v([0, 0, 1]));
        assert_eq!(a.constant(1, 2), &v([1, 0, 0]));
        assert_eq!(a.constant(2, 0), &v([0, 1, 0]));
        assert_eq!(killing_inertia(&a), (0, 3, 0));
    }

    #[test]
    fn membership_failures_name_the_condition() {
        let h = LieSubalgebra::new(2, vec![j2()]).unwrap();
        let r = CurvatureTensor::from_pairs(2, [(0, 1, Matrix::identity(2))]).unwrap();
        match build_bracket(&h, &r, &Lifting::zero(2)) {
            Err(Error::Membership { recheck, location, .. }) => {
                assert_eq!(recheck, "curvature_relation");
                assert_eq!(location, "(e1,e2)");
            }
            other => panic!("unexpected {other:?}"),
        }
        let lam = Lifting::new(vec![Matrix::unit(2, 0, 0), Matrix::zero(2)]).unwrap();
        match build_bracket(&h, &CurvatureTensor::zero(2), &lam) {
            Err(Error::Membership { recheck, .. }) => assert_eq!(recheck, "inf_invariance_lambda"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn corrupted_jacobi_witness() {
        let mut a = e2_flat();
        a.structure_constants[1][2] = v([0, 1, 0]);
        a.structure_constants[2][1] = v([0, -1, 0]);
        let r = check_jacobi(&a);
        assert!(!r.pass);
        assert_eq!(r.witness.unwrap().indices, vec![0, 1, 2]);
    }

    #[test]
    fn abelian_invariants() {
        let a = build_bracket(&LieSubalgebra::zero(2), &CurvatureTensor::zero(2), &Lifting::zero(2)).unwrap();
        assert!(check_jacobi(&a).pass);
        assert_eq!(killing_inertia(&a), (0, 0, 2));
        assert_eq!(center(&a).len(), 2);
        assert!(lambda_bar_equivariance(&LieSubalgebra::zero(2), &Lifting::zero(2), &a).unwrap().pass);
    }

    #[test]
    fn shift_isomorphism_examples() {
        let (h, r) = plane(1);
        let lam = Lifting::zero(2);
        assert!(lifting_shift_isomorphism(&h, &r, &lam, &LiftShift::zero(2, 1)).unwrap().pass);
        let d = LiftShift {
            delta: vec![vec![Rational::one()], vec![Rational::zero()]],
        };
        assert!(lifting_shift_isomorphism(&h, &r, &lam, &d).unwrap().pass);
    }

    #[test]
    fn build_report_json() {
        let json = serde_json::to_string(&BuildReport::new(&e2_flat())).unwrap();
        assert_eq!(
            json,
            r#"{"dim":3,"basis":["h1","e1","e2"],"structure_constants":[[[0,0,0],[0,0,1],[0,-1,0]],[[0,0,-1],[0,0,0],[0,0,0]],[[0,1,0],[0,0,0],[0,0,0]]],"killing_inertia":[0,1,2],"derived_series":[3,2,0],"jacobi":"pass"}"#
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn plane_family_jacobi_and_shift((c, d0, d1) in (small_rational(), small_rational(), small_rational())) {
            let h = LieSubalgebra::new(2, vec![j2()]).unwrap();
            let r = CurvatureTensor::from_pairs(2, [(0, 1, j2().scale(&-&c))]).unwrap();
            let lam = Lifting::new(vec![j2().scale(&d0), j2().scale(&d1)]).unwrap();
            let a = build_bracket(&h, &r, &lam).unwrap();
            prop_assert!(check_jacobi(&a).pass);
            prop_assert!(lambda_bar_equivariance(&h, &lam, &a).unwrap().pass);
            let shift = LiftShift { delta: vec![vec![d1.clone()], vec![d0.clone()]] };
            prop_assert!(lifting_shift_isomorphism(&h, &r, &lam, &shift).unwrap().pass);
            let b = build_bracket(&h, &r, &lam.sub(&shift.to_lifting(&h))).unwrap();
            prop_assert_eq!(killing_inertia(&a), killing_inertia(&b));
        }

        #[test]
        fn bracket_matches_commutator_of_ad((x, y) in (vector(3), vector(3))) {
            let (h, r) = plane(1);
            let a = build_bracket(&h, &r, &Lifting::zero(2)).unwrap();
            let adv = |v: &Vector| (0..3).fold(Matrix::zero(3), |acc, i| acc + &a.ad(i).scale(&v[i]));
            let z = a.bracket(&x, &y);
            prop_assert_eq!(adv(&z), adv(&x).commutator(&adv(&y)));
        }
    }
}
