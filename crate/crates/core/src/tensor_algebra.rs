//! Constant tensors on ℚⁿ: skew bilinear maps (torsion- and curvature-type),
//! the lifting λ, and the derivation action of gl(n) on them.

use std::fmt;
use std::ops::Add;

use crate::error::{Error, Result};
use crate::exact_linalg::{Matrix, Rational, Vector};

/// Values a skew bilinear map on ℚⁿ can take.
pub trait TensorValue: Clone + PartialEq + fmt::Debug {
    fn zero_of(n: usize) -> Self;
    fn dim_of(&self) -> usize;
    fn is_zero_value(&self) -> bool;
    fn add_value(&self, other: &Self) -> Self;
    fn sub_value(&self, other: &Self) -> Self;
    fn scale_value(&self, c: &Rational) -> Self;
}

impl TensorValue for Vector {
    fn zero_of(n: usize) -> Self {
        Vector::zero(n)
    }
    fn dim_of(&self) -> usize {
        self.len()
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn add_value(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_value(&self, other: &Self) -> Self {
        self - other
    }
    fn scale_value(&self, c: &Rational) -> Self {
        self.scale(c)
    }
}

impl TensorValue for Matrix {
    fn zero_of(n: usize) -> Self {
        Matrix::zero(n)
    }
    fn dim_of(&self) -> usize {
        self.dim()
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn add_value(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_value(&self, other: &Self) -> Self {
        self - other
    }
    fn scale_value(&self, c: &Rational) -> Self {
        self.scale(c)
    }
}

/// Skew-symmetric bilinear map ℚⁿ × ℚⁿ → V, stored on basis pairs i<j only.
#[derive(Clone, PartialEq)]
pub struct SkewBilinear<V> {
    n: usize,
    comps: Vec<V>,
}

/// T₀: skew bilinear, vector valued.
pub type TorsionTensor = SkewBilinear<Vector>;
/// R₀: skew bilinear, gl(n) valued.
pub type CurvatureTensor = SkewBilinear<Matrix>;

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl<V: TensorValue> SkewBilinear<V> {
    pub fn zero(n: usize) -> Self {
        SkewBilinear {
            n,
            comps: vec![V::zero_of(n); n * n.saturating_sub(1) / 2],
        }
    }

    /// Builds the tensor from the components on i<j; `f` is never called with i ≥ j.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> V) -> Self {
        let mut comps = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                comps.push(f(i, j));
            }
        }
        SkewBilinear { n, comps }
    }

    /// Sparse construction; omitted pairs are zero. Each entry needs i<j and no repeats.
    pub fn from_pairs(n: usize, entries: impl IntoIterator<Item = (usize, usize, V)>) -> Result<Self> {
        let mut t = Self::zero(n);
        let mut seen = vec![false; t.comps.len()];
        for (i, j, v) in entries {
            if i >= j {
                return Err(Error::Instance(format!("entry ({i},{j}): i<j required")));
            }
            if j >= n {
                return Err(Error::Instance(format!(
                    "entry ({i},{j}): index out of range for dimension {n}"
                )));
            }
            if v.dim_of() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.dim_of(),
                });
            }
            let k = pair_index(n, i, j);
            if seen[k] {
                return Err(Error::Instance(format!("entry ({i},{j}) given twice")));
            }
            seen[k] = true;
            t.comps[k] = v;
        }
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Value on (eᵢ, eⱼ) for any i, j, using skew-symmetry.
    pub fn get(&self, i: usize, j: usize) -> V {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.comps[pair_index(self.n, i, j)].clone(),
            Greater => V::zero_of(self.n).sub_value(&self.comps[pair_index(self.n, j, i)]),
            Equal => V::zero_of(self.n),
        }
    }

    /// Stored component for i<j.
    pub fn component(&self, i: usize, j: usize) -> &V {
        assert!(i < j, "component expects i<j");
        &self.comps[pair_index(self.n, i, j)]
    }

    /// Iterates (i, j, value) over i<j in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, &V)> + '_ {
        let n = self.n;
        (0..n)
            .flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
            .zip(&self.comps)
            .map(|((i, j), v)| (i, j, v))
    }

    /// Nonzero stored components only.
    pub fn nonzero_pairs(&self) -> impl Iterator<Item = (usize, usize, &V)> + '_ {
        self.pairs().filter(|(_, _, v)| !v.is_zero_value())
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(V::is_zero_value)
    }

    /// Σᵢ<ⱼ (uᵢvⱼ − uⱼvᵢ)·X(eᵢ,eⱼ).
    pub fn eval(&self, u: &Vector, v: &Vector) -> Result<V> {
        u.check_len(self.n)?;
        v.check_len(self.n)?;
        let mut acc = V::zero_of(self.n);
        for (i, j, c) in self.pairs() {
            let w = &u[i] * &v[j] - &u[j] * &v[i];
            if !w.is_zero() {
                acc = acc.add_value(&c.scale_value(&w));
            }
        }
        Ok(acc)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "tensor dimension mismatch");
        self.zip_with(other, V::add_value)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "tensor dimension mismatch");
        self.zip_with(other, V::sub_value)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        SkewBilinear {
            n: self.n,
            comps: self.comps.iter().map(|v| v.scale_value(c)).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&V, &V) -> V) -> Self {
        SkewBilinear {
            n: self.n,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| f(a, b)).collect(),
        }
    }

    /// Σₖ L_{ki} X(eₖ,eⱼ) + L_{kj} X(eᵢ,eₖ), i.e. X(L eᵢ, eⱼ) + X(eᵢ, L eⱼ).
    fn argument_terms(&self, l: &Matrix, i: usize, j: usize) -> V {
        let mut acc = V::zero_of(self.n);
        for k in 0..self.n {
            let a = &l[(k, i)];
            if !a.is_zero() && k != j {
                acc = acc.add_value(&self.get(k, j).scale_value(a));
            }
            let b = &l[(k, j)];
            if !b.is_zero() && k != i {
                acc = acc.add_value(&self.get(i, k).scale_value(b));
            }
        }
        acc
    }
}

impl<V: fmt::Debug + TensorValue> fmt::Debug for SkewBilinear<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (i, j, v) in self.nonzero_pairs() {
            m.entry(&(i, j), v);
        }
        m.finish()
    }
}

/// Linear map λ: ℚⁿ → gl(n), stored as λ(eᵢ).
#[derive(Clone, PartialEq)]
pub struct Lifting {
    n: usize,
    comps: Vec<Matrix>,
}

impl Lifting {
    pub fn zero(n: usize) -> Self {
        Lifting {
            n,
            comps: vec![Matrix::zero(n); n],
        }
    }

    pub fn new(comps: Vec<Matrix>) -> Result<Self> {
        let n = comps.len();
        for m in &comps {
            m.check_dim(n)?;
        }
        Ok(Lifting { n, comps })
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> Matrix) -> Self {
        Lifting {
            n,
            comps: (0..n).map(f).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize) -> &Matrix {
        &self.comps[i]
    }

    pub fn components(&self) -> &[Matrix] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Matrix::is_zero)
    }

    pub fn eval(&self, u: &Vector) -> Result<Matrix> {
        u.check_len(self.n)?;
        let mut acc = Matrix::zero(self.n);
        for (c, m) in u.iter().zip(&self.comps) {
            if !c.is_zero() {
                acc = acc + &m.scale(c);
            }
        }
        Ok(acc)
    }

    pub fn add(&self, other: &Lifting) -> Lifting {
        assert_eq!(self.n, other.n, "lifting dimension mismatch");
        Lifting::from_fn(self.n, |i| &self.comps[i] + &other.comps[i])
    }

    pub fn sub(&self, other: &Lifting) -> Lifting {
        assert_eq!(self.n, other.n, "lifting dimension mismatch");
        Lifting::from_fn(self.n, |i| &self.comps[i] - &other.comps[i])
    }
}

impl fmt::Debug for Lifting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.comps).finish()
    }
}

#[allow(non_snake_case)]
pub fn eval_R(r: &CurvatureTensor, u: &Vector, v: &Vector) -> Result<Matrix> {
    r.eval(u, v)
}

#[allow(non_snake_case)]
pub fn eval_T(t: &TorsionTensor, u: &Vector, v: &Vector) -> Result<Vector> {
    t.eval(u, v)
}

pub fn eval_lambda(lam: &Lifting, u: &Vector) -> Result<Matrix> {
    lam.eval(u)
}

/// (𝒟_L T)(u,v) = L·T(u,v) − T(Lu,v) − T(u,Lv).
#[allow(non_snake_case)]
pub fn derivation_action_on_T(l: &Matrix, t: &TorsionTensor) -> Result<TorsionTensor> {
    l.check_dim(t.dim())?;
    Ok(TorsionTensor::from_fn(t.dim(), |i, j| {
        &l.mul_vec(t.component(i, j)) - &t.argument_terms(l, i, j)
    }))
}

/// (𝒟_L R)(u,v) = [L, R(u,v)] − R(Lu,v) − R(u,Lv).
#[allow(non_snake_case)]
pub fn derivation_action_on_R(l: &Matrix, r: &CurvatureTensor) -> Result<CurvatureTensor> {
    l.check_dim(r.dim())?;
    Ok(CurvatureTensor::from_fn(r.dim(), |i, j| {
        &l.commutator(r.component(i, j)) - &r.argument_terms(l, i, j)
    }))
}

/// f(X,Y,Z) + f(Y,Z,X) + f(Z,X,Y).
pub fn cyclic_sum<T, F>(f: F, x: &Vector, y: &Vector, z: &Vector) -> T
where
    F: Fn(&Vector, &Vector, &Vector) -> T,
    T: for<'a> Add<&'a T, Output = T>,
{
    f(x, y, z) + &f(y, z, x) + &f(z, x, y)
}

/// [X,Y]^m = λ(X)·Y − λ(Y)·X.
pub fn m_bracket(lam: &Lifting, x: &Vector, y: &Vector) -> Result<Vector> {
    Ok(&lam.eval(x)?.mul_vec(y) - &lam.eval(y)?.mul_vec(x))
}

#[cfg(test)]
/// 𝒮_{[L,X,Y]} = [L,λ(X)]·Y − λ(Y)·(L·X).
pub(crate) fn s_expr(lam: &Lifting, l: &Matrix, x: &Vector, y: &Vector) -> Result<Vector> {
    let lx = lam.eval(x)?;
    Ok(&l.commutator(&lx).mul_vec(y) - &lam.eval(y)?.mul_vec(&l.mul_vec(x)))
}

#[cfg(test)]
/// 𝒯_{[X,Y,Z]} = [λ(X),λ(Y)]·Z − λ(Z)·[X,Y]^m.
pub(crate) fn t_expr(lam: &Lifting, x: &Vector, y: &Vector, z: &Vector) -> Result<Vector> {
    let br = lam.eval(x)?.commutator(&lam.eval(y)?);
    Ok(&br.mul_vec(z) - &lam.eval(z)?.mul_vec(&m_bracket(lam, x, y)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;
    use proptest::prelude::*;

    fn j2() -> Matrix {
        Matrix::from_ints([[0, -1], [1, 0]])
    }

    #[test]
    fn pair_indexing_covers_all_pairs() {
        let t = TorsionTensor::from_fn(4, |i, j| Vector::from_ints([i as i64, j as i64, 0, 0]));
        for i in 0..4 {
            for j in i + 1..4 {
                assert_eq!(t.get(i, j), Vector::from_ints([i as i64, j as i64, 0, 0]));
                assert_eq!(t.get(j, i), Vector::from_ints([-(i as i64), -(j as i64), 0, 0]));
            }
            assert!(t.get(i, i).is_zero());
        }
    }

    #[test]
    fn from_pairs_validation() {
        let v = Vector::from_ints([1, 0]);
        assert!(TorsionTensor::from_pairs(2, [(1, 1, v.clone())]).unwrap_err().to_string().contains("i<j required"));
        assert!(TorsionTensor::from_pairs(2, [(1, 0, v.clone())]).is_err());
        assert!(TorsionTensor::from_pairs(2, [(0, 2, v.clone())]).is_err());
        assert!(TorsionTensor::from_pairs(2, [(0, 1, v.clone()), (0, 1, v.clone())]).is_err());
        assert!(TorsionTensor::from_pairs(2, [(0, 1, Vector::from_ints([1, 0, 0]))]).is_err());
    }

    #[test]
    fn eval_examples() {
        let r = CurvatureTensor::from_pairs(2, [(0, 1, Matrix::from_ints([[0, 1], [-1, 0]]))]).unwrap();
        let e1 = Vector::basis(2, 0);
        let v = Vector::from_ints([0, 2]);
        assert_eq!(eval_R(&r, &e1, &v).unwrap(), Matrix::from_ints([[0, 2], [-2, 0]]));
        assert!(eval_R(&r, &v, &v).unwrap().is_zero());
        assert!(eval_R(&CurvatureTensor::zero(2), &e1, &v).unwrap().is_zero());
        assert!(eval_R(&r, &Vector::zero(3), &v).is_err());

        let t = TorsionTensor::from_pairs(2, [(0, 1, Vector::from_ints([1, 0]))]).unwrap();
        assert!(eval_T(&t, &v, &v).unwrap().is_zero());

        let a = Matrix::from_ints([[1, 2], [3, 4]]);
        let b = Matrix::from_ints([[0, 5], [0, 1]]);
        let lam = Lifting::new(vec![a.clone(), b.clone()]).unwrap();
        assert_eq!(eval_lambda(&lam, &Vector::from_ints([1, 1])).unwrap(), &a + &b);
        assert!(eval_lambda(&Lifting::zero(2), &v).unwrap().is_zero());
    }

    #[test]
    fn derivation_examples() {
        let t = TorsionTensor::from_pairs(2, [(0, 1, Vector::from_ints([1, 0]))]).unwrap();
        assert!(derivation_action_on_T(&Matrix::zero(2), &t).unwrap().is_zero());
        assert_eq!(derivation_action_on_T(&Matrix::identity(2), &t).unwrap(), t.scale(&(-1).into()));
        let dj = derivation_action_on_T(&j2(), &t).unwrap();
        assert_eq!(dj.get(0, 1), Vector::from_ints([0, 1]));

        let r = CurvatureTensor::from_pairs(2, [(0, 1, -&j2())]).unwrap();
        assert!(derivation_action_on_R(&Matrix::zero(2), &r).unwrap().is_zero());
        assert_eq!(derivation_action_on_R(&Matrix::identity(2), &r).unwrap(), r.scale(&(-2).into()));
        assert!(derivation_action_on_R(&j2(), &r).unwrap().is_zero());
        assert!(derivation_action_on_R(&Matrix::zero(3), &r).is_err());
    }

    #[test]
    fn cyclic_sum_examples() {
        let x = Vector::from_ints([1, 2]);
        let y = Vector::from_ints([3, -1]);
        let z = &-&x - &y;
        let zero: Vector = cyclic_sum(|_, _, _| Vector::zero(2), &x, &y, &z);
        assert!(zero.is_zero());
        let proj: Vector = cyclic_sum(|a, _, _| a.clone(), &x, &y, &z);
        assert!(proj.is_zero());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn derivations_are_linear(
            (l, m, r1, r2, t1, t2, c) in (2usize..=3).prop_flat_map(|n| (
                matrix(n), matrix(n), curvature(n), curvature(n), torsion(n), torsion(n), small_rational(),
            ))
        ) {
            let lc = &l.scale(&c) + &m;
            let lhs = derivation_action_on_R(&lc, &r1.add(&r2)).unwrap();
            let rhs = derivation_action_on_R(&l, &r1).unwrap().add(&derivation_action_on_R(&l, &r2).unwrap()).scale(&c)
                .add(&derivation_action_on_R(&m, &r1).unwrap())
                .add(&derivation_action_on_R(&m, &r2).unwrap());
            prop_assert_eq!(lhs, rhs);
            let lhs = derivation_action_on_T(&lc, &t1.add(&t2)).unwrap();
            let rhs = derivation_action_on_T(&l, &t1).unwrap().add(&derivation_action_on_T(&l, &t2).unwrap()).scale(&c)
                .add(&derivation_action_on_T(&m, &t1).unwrap())
                .add(&derivation_action_on_T(&m, &t2).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn commutator_derivation_law(
            (l, m, r, t) in (2usize..=3).prop_flat_map(|n| (matrix(n), matrix(n), curvature(n), torsion(n)))
        ) {
            let lm = l.commutator(&m);
            let dr = |a: &Matrix, x: &CurvatureTensor| derivation_action_on_R(a, x).unwrap();
            let dt = |a: &Matrix, x: &TorsionTensor| derivation_action_on_T(a, x).unwrap();
            prop_assert_eq!(dr(&lm, &r), dr(&l, &dr(&m, &r)).sub(&dr(&m, &dr(&l, &r))));
            prop_assert_eq!(dt(&lm, &t), dt(&l, &dt(&m, &t)).sub(&dt(&m, &dt(&l, &t))));
        }

        #[test]
        fn cyclic_t_expr_vanishes(
            (lam, x, y, z) in (2usize..=4).prop_flat_map(|n| (lifting(n), vector(n), vector(n), vector(n)))
        ) {
            let s: Vector = cyclic_sum(|a, b, c| t_expr(&lam, a, b, c).unwrap(), &x, &y, &z);
            prop_assert!(s.is_zero());
        }

        #[test]
        fn s_expr_difference(
            (lam, l, x, y) in (2usize..=4).prop_flat_map(|n| (lifting(n), matrix(n), vector(n), vector(n)))
        ) {
            let lhs = &s_expr(&lam, &l, &x, &y).unwrap() - &s_expr(&lam, &l, &y, &x).unwrap();
            prop_assert_eq!(lhs, l.mul_vec(&m_bracket(&lam, &x, &y).unwrap()));
        }

        #[test]
        fn eval_is_skew_and_bilinear(
            (r, u, v, w, c) in (2usize..=4).prop_flat_map(|n| (curvature(n), vector(n), vector(n), vector(n), small_rational()))
        ) {
            prop_assert_eq!(r.eval(&u, &v).unwrap(), -&r.eval(&v, &u).unwrap());
            let lhs = r.eval(&(&u.scale(&c) + &w), &v).unwrap();
            let rhs = &r.eval(&u, &v).unwrap().scale(&c) + &r.eval(&w, &v).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
