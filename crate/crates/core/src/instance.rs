//! Instance files: JSON serialization of (h, R₀, T₀, λ) plus optional group generators.

use std::fmt;
use std::path::Path;

use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::{Deserialize, Serialize};

use crate::conditions::CharTriple;
use crate::error::{Error, Result};
use crate::exact_linalg::{Matrix, Vector};
use crate::subalgebra::{GroupGenerators, LieSubalgebra};
use crate::tensor_algebra::{CurvatureTensor, Lifting, TorsionTensor};

/// One stored component of a skew tensor: the value on (eᵢ, eⱼ), i<j, 0-based.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairEntry<V> {
    pub i: usize,
    pub j: usize,
    #[serde(flatten)]
    pub value: V,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixValue {
    pub matrix: Matrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorValue {
    pub vector: Vector,
}

struct PairVisitor<V>(std::marker::PhantomData<V>, &'static str);

impl<'de, V: Deserialize<'de>> Visitor<'de> for PairVisitor<V> {
    type Value = PairEntry<V>;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "an object with \"i\", \"j\" and \"{}\"", self.1)
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Self::Value, A::Error> {
        let mut i: Option<usize> = None;
        let mut j: Option<usize> = None;
        let mut value: Option<V> = None;
        while let Some(key) = map.next_key::<String>()? {
            match key.as_str() {
                "i" => i = Some(map.next_value()?),
                "j" => j = Some(map.next_value()?),
                k if k == self.1 => value = Some(map.next_value()?),
                other => {
                    return Err(de::Error::custom(format!(
                        "unknown field `{other}`, expected `i`, `j` or `{}`",
                        self.1
                    )))
                }
            }
        }
        let i = i.ok_or_else(|| de::Error::missing_field("i"))?;
        let j = j.ok_or_else(|| de::Error::missing_field("j"))?;
        if i >= j {
            return Err(de::Error::custom(format!("i<j required (got i={i}, j={j})")));
        }
        let value = value.ok_or_else(|| de::Error::missing_field(self.1))?;
        Ok(PairEntry { i, j, value })
    }
}

impl<'de> Deserialize<'de> for PairEntry<MatrixValue> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let e = d.deserialize_map(PairVisitor::<Matrix>(Default::default(), "matrix"))?;
        Ok(PairEntry { i: e.i, j: e.j, value: MatrixValue { matrix: e.value } })
    }
}

impl<'de> Deserialize<'de> for PairEntry<VectorValue> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let e = d.deserialize_map(PairVisitor::<Vector>(Default::default(), "vector"))?;
        Ok(PairEntry { i: e.i, j: e.j, value: VectorValue { vector: e.value } })
    }
}

/// On-disk instance. `lambda` may be empty (zero lifting); omitted R0/T0 pairs are zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub metadata: serde_json::Value,
    pub dimension: usize,
    #[serde(default)]
    pub h_basis: Vec<Matrix>,
    #[serde(default)]
    pub lambda: Vec<Matrix>,
    #[serde(rename = "R0", default)]
    pub r0: Vec<PairEntry<MatrixValue>>,
    #[serde(rename = "T0", default)]
    pub t0: Vec<PairEntry<VectorValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_generators: Option<Vec<Matrix>>,
}

fn check_square(field: &str, m: &Matrix, n: usize) -> Result<()> {
    if m.dim() != n {
        return Err(Error::Instance(format!(
            "{field}: expected a {n}×{n} matrix, found {0}×{0}",
            m.dim()
        )));
    }
    Ok(())
}

impl InstanceFile {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let inst: InstanceFile = serde_json::from_str(s)?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serialization cannot fail") + "\n"
    }

    pub fn name(&self) -> Option<&str> {
        self.metadata.get("name").and_then(|v| v.as_str())
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dimension;
        if n == 0 {
            return Err(Error::Instance("dimension must be at least 1".into()));
        }
        for (a, m) in self.h_basis.iter().enumerate() {
            check_square(&format!("h_basis[{a}]"), m, n)?;
        }
        if !self.lambda.is_empty() && self.lambda.len() != n {
            return Err(Error::Instance(format!(
                "lambda: expected {n} matrices (one per basis vector), found {}",
                self.lambda.len()
            )));
        }
        for (a, m) in self.lambda.iter().enumerate() {
            check_square(&format!("lambda[{a}]"), m, n)?;
        }
        for (a, e) in self.r0.iter().enumerate() {
            if e.j >= n {
                return Err(Error::Instance(format!("R0[{a}]: index j={} out of range for dimension {n}", e.j)));
            }
            check_square(&format!("R0[{a}].matrix"), &e.value.matrix, n)?;
        }
        for (a, e) in self.t0.iter().enumerate() {
            if e.j >= n {
                return Err(Error::Instance(format!("T0[{a}]: index j={} out of range for dimension {n}", e.j)));
            }
            if e.value.vector.len() != n {
                return Err(Error::Instance(format!(
                    "T0[{a}].vector: expected length {n}, found {}",
                    e.value.vector.len()
                )));
            }
        }
        for (a, m) in self.group_generators.iter().flatten().enumerate() {
            check_square(&format!("group_generators[{a}]"), m, n)?;
        }
        self.subalgebra()?;
        self.triple()?;
        self.generators()?;
        Ok(())
    }

    pub fn subalgebra(&self) -> Result<LieSubalgebra> {
        LieSubalgebra::new(self.dimension, self.h_basis.clone()).map_err(|e| match e {
            Error::DependentBasis { index } => {
                Error::Instance(format!("h_basis[{index}] lies in the span of the previous elements"))
            }
            e => e,
        })
    }

    pub fn triple(&self) -> Result<CharTriple> {
        let n = self.dimension;
        let r = CurvatureTensor::from_pairs(n, self.r0.iter().map(|e| (e.i, e.j, e.value.matrix.clone())))
            .map_err(|e| Error::Instance(format!("R0: {e}")))?;
        let t = TorsionTensor::from_pairs(n, self.t0.iter().map(|e| (e.i, e.j, e.value.vector.clone())))
            .map_err(|e| Error::Instance(format!("T0: {e}")))?;
        let lam = if self.lambda.is_empty() {
            Lifting::zero(n)
        } else {
            Lifting::new(self.lambda.clone())?
        };
        CharTriple::new(r, t, lam)
    }

    pub fn generators(&self) -> Result<Option<GroupGenerators>> {
        self.group_generators
            .as_ref()
            .map(|g| {
                GroupGenerators::new(g.clone()).map_err(|e| match e {
                    Error::SingularGenerator { index } => {
                        Error::Instance(format!("group_generators[{index}] is singular"))
                    }
                    e => e,
                })
            })
            .transpose()
    }

    /// Serializable form of the given data; zero components of R and T are omitted.
    pub fn from_parts(
        metadata: serde_json::Value,
        h: &LieSubalgebra,
        t: &CharTriple,
        generators: Option<Vec<Matrix>>,
    ) -> Self {
        InstanceFile {
            metadata,
            dimension: t.dim(),
            h_basis: h.basis().to_vec(),
            lambda: t.lam.components().to_vec(),
            r0: t
                .r
                .nonzero_pairs()
                .map(|(i, j, m)| PairEntry { i, j, value: MatrixValue { matrix: m.clone() } })
                .collect(),
            t0: t
                .t
                .nonzero_pairs()
                .map(|(i, j, v)| PairEntry { i, j, value: VectorValue { vector: v.clone() } })
                .collect(),
            group_generators: generators,
        }
    }
}

pub fn parse_instance(path: impl AsRef<Path>) -> Result<InstanceFile> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Instance(format!("{}: {e}", path.display())))?;
    InstanceFile::from_json_str(&text)
}
