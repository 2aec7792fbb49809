//! The subalgebra h ⊂ gl(n), membership modulo h, and optional group generators.

use serde::{Deserialize, Serialize};

use crate::conditions::CharTriple;
use crate::error::{Error, Result};
use crate::exact_linalg::{linear_combination, Matrix, Rational, SpanSolver, Vector};

/// Offending value attached to a failed check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WitnessValue {
    Matrix(Matrix),
    Vector(Vector),
}

/// Where a check failed. `basis` is an index into the h-basis, `generator` into the group generators.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<String>,
    pub indices: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<WitnessValue>,
}

impl Witness {
    pub fn at(indices: impl Into<Vec<usize>>) -> Self {
        Witness {
            indices: indices.into(),
            ..Witness::default()
        }
    }

    pub fn with_basis(mut self, l: usize) -> Self {
        self.basis = Some(l);
        self
    }

    pub fn with_generator(mut self, g: usize) -> Self {
        self.generator = Some(g);
        self
    }

    pub fn with_condition(mut self, c: &str) -> Self {
        self.condition = Some(c.to_string());
        self
    }

    pub fn with_matrix(mut self, m: Matrix) -> Self {
        self.value = Some(WitnessValue::Matrix(m));
        self
    }

    pub fn with_vector(mut self, v: Vector) -> Self {
        self.value = Some(WitnessValue::Vector(v));
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub witness: Option<Witness>,
}

impl CheckResult {
    pub fn pass(name: &str) -> Self {
        CheckResult {
            name: name.to_string(),
            pass: true,
            witness: None,
        }
    }

    pub fn fail(name: &str, witness: Witness) -> Self {
        CheckResult {
            name: name.to_string(),
            pass: false,
            witness: Some(witness),
        }
    }

    pub(crate) fn from_first(name: &str, first: Option<Witness>) -> Self {
        match first {
            Some(w) => CheckResult::fail(name, w),
            None => CheckResult::pass(name),
        }
    }
}

/// h ⊂ gl(n) given by a linearly independent basis; the empty basis is h = 0.
#[derive(Clone, Debug)]
pub struct LieSubalgebra {
    n: usize,
    basis: Vec<Matrix>,
    solver: SpanSolver,
}

impl PartialEq for LieSubalgebra {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.basis == other.basis
    }
}

impl LieSubalgebra {
    pub fn new(n: usize, basis: Vec<Matrix>) -> Result<Self> {
        let solver = SpanSolver::from_matrices(n, &basis)?;
        Ok(LieSubalgebra { n, basis, solver })
    }

    pub fn zero(n: usize) -> Self {
        LieSubalgebra::new(n, Vec::new()).expect("empty basis is always valid")
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    /// Coefficients of M in the h-basis, or `None` when M ∉ h.
    pub fn in_h(&self, m: &Matrix) -> Result<Option<Vec<Rational>>> {
        m.check_dim(self.n)?;
        self.solver.coefficients(m.entries())
    }

    pub fn contains(&self, m: &Matrix) -> Result<bool> {
        Ok(self.in_h(m)?.is_some())
    }

    /// Σ cₐ hₐ.
    pub fn combination(&self, coeffs: &[Rational]) -> Matrix {
        linear_combination(self.n, coeffs, &self.basis)
    }
}

pub fn in_h(h: &LieSubalgebra, m: &Matrix) -> Result<Option<Vec<Rational>>> {
    h.in_h(m)
}

/// [bᵢ,bⱼ] ∈ h for all i<j; the witness carries the first offending pair and its bracket.
pub fn check_closure(h: &LieSubalgebra) -> CheckResult {
    let b = h.basis();
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            let br = b[i].commutator(&b[j]);
            if !h.contains(&br).expect("basis shares the ambient dimension") {
                return CheckResult::fail("closure", Witness::at([i, j]).with_matrix(br));
            }
        }
    }
    CheckResult::pass("closure")
}

/// A finite set of invertible matrices sampling G.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupGenerators {
    gens: Vec<Matrix>,
    inverses: Vec<Matrix>,
}

impl GroupGenerators {
    pub fn new(gens: Vec<Matrix>) -> Result<Self> {
        let mut inverses = Vec::with_capacity(gens.len());
        for (index, g) in gens.iter().enumerate() {
            inverses.push(g.inverse().ok_or(Error::SingularGenerator { index })?);
        }
        Ok(GroupGenerators { gens, inverses })
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.gens
    }
}

/// Checks, for each generator g and basis pair (u,v):
/// R(u,v) = Ad_g R(g⁻¹u, g⁻¹v), T(u,v) = g·T(g⁻¹u, g⁻¹v), Ad_g λ(g⁻¹u) − λ(u) ∈ h.
///
/// Witness values are LHS − RHS of the first two, and Ad_g λ(g⁻¹u) − λ(u) for the third.
pub fn check_group_invariance(
    g: &GroupGenerators,
    h: &LieSubalgebra,
    t: &CharTriple,
) -> Result<CheckResult> {
    const NAME: &str = "group_invariance";
    let n = t.dim();
    if h.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: h.ambient_dim(),
        });
    }
    for (k, (a, ai)) in g.gens.iter().zip(&g.inverses).enumerate() {
        a.check_dim(n)?;
        let pulled: Vec<Vector> = (0..n).map(|i| ai.column(i)).collect();
        for i in 0..n {
            for j in i + 1..n {
                let moved = &(a * &t.r.eval(&pulled[i], &pulled[j])?) * ai;
                let d = t.r.component(i, j) - &moved;
                if !d.is_zero() {
                    let w = Witness::at([i, j]).with_generator(k).with_condition("R").with_matrix(d);
                    return Ok(CheckResult::fail(NAME, w));
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let moved = a.mul_vec(&t.t.eval(&pulled[i], &pulled[j])?);
                let d = t.t.component(i, j) - &moved;
                if !d.is_zero() {
                    let w = Witness::at([i, j]).with_generator(k).with_condition("T").with_vector(d);
                    return Ok(CheckResult::fail(NAME, w));
                }
            }
        }
        for (i, p) in pulled.iter().enumerate() {
            let d = &(&(a * &t.lam.eval(p)?) * ai) - t.lam.get(i);
            if !h.contains(&d)? {
                let w = Witness::at([i]).with_generator(k).with_condition("lambda").with_matrix(d);
                return Ok(CheckResult::fail(NAME, w));
            }
        }
    }
    Ok(CheckResult::pass(NAME))
}
