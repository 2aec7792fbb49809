//! Instances bundled with the library. Names match the files under `corpus/`.

use crate::error::{Error, Result};
use crate::instance::InstanceFile;

pub const CORPUS: &[(&str, &str)] = &[
    ("flat_e2", include_str!("../corpus/flat_e2.json")),
    ("flat_r2", include_str!("../corpus/flat_r2.json")),
    ("sphere_s2", include_str!("../corpus/sphere_s2.json")),
    ("hyperbolic_h2", include_str!("../corpus/hyperbolic_h2.json")),
    ("sphere_s3", include_str!("../corpus/sphere_s3.json")),
    ("liegroup_so3_minus_connection", include_str!("../corpus/liegroup_so3_minus_connection.json")),
    ("liegroup_so3_reduced", include_str!("../corpus/liegroup_so3_reduced.json")),
    ("sphere_s3_torsion", include_str!("../corpus/sphere_s3_torsion.json")),
    ("corrupted_flat_e2", include_str!("../corpus/corrupted_flat_e2.json")),
    ("corrupted_sphere_s2", include_str!("../corpus/corrupted_sphere_s2.json")),
    ("corrupted_hyperbolic_h2", include_str!("../corpus/corrupted_hyperbolic_h2.json")),
    ("corrupted_sphere_s3", include_str!("../corpus/corrupted_sphere_s3.json")),
    ("corrupted_liegroup_so3_minus_connection", include_str!("../corpus/corrupted_liegroup_so3_minus_connection.json")),
    ("corrupted_bianchi1_r3", include_str!("../corpus/corrupted_bianchi1_r3.json")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    CORPUS.iter().map(|(n, _)| *n)
}

pub fn source(name: &str) -> Option<&'static str> {
    CORPUS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn load(name: &str) -> Result<InstanceFile> {
    let text = source(name).ok_or_else(|| Error::Instance(format!("no bundled instance named {name:?}")))?;
    InstanceFile::from_json_str(text)
}

/// Negative controls are the `corrupted_*` entries.
pub fn is_corrupted(name: &str) -> bool {
    name.starts_with("corrupted_")
}
