//! Manifold files shipped with the crate, and resolution of a fixture
//! argument to file contents.

use std::path::Path;

use crate::error::{Error, Result};

pub const BUNDLED: &[(&str, &str)] = &[
    ("lcs3-example", include_str!("../fixtures/lcs3-example.ini")),
    ("minkowski3", include_str!("../fixtures/minkowski3.ini")),
    ("euclidean3-gaussian", include_str!("../fixtures/euclidean3-gaussian.ini")),
    ("sphere2", include_str!("../fixtures/sphere2.ini")),
    ("milne3", include_str!("../fixtures/milne3.ini")),
    ("desitter3", include_str!("../fixtures/desitter3.ini")),
];

const ALIASES: &[(&str, &str)] = &[("gaussian3", "euclidean3-gaussian")];

pub fn bundled(name: &str) -> Option<&'static str> {
    let name = ALIASES.iter().find(|(a, _)| *a == name).map_or(name, |(_, target)| target);
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, src)| *src)
}

/// A fixture's origin label and source text. An existing file (with or
/// without the `.ini` extension) wins; otherwise the last path component
/// names a bundled fixture, so `fixtures/lcs3-example` works from anywhere.
pub fn resolve(arg: &str) -> Result<(String, String)> {
    for candidate in [arg.to_string(), format!("{arg}.ini")] {
        let path = Path::new(&candidate);
        if path.is_file() {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: candidate.clone(), source })?;
            return Ok((candidate, text));
        }
    }
    let stem = Path::new(arg).file_stem().and_then(|s| s.to_str()).unwrap_or(arg);
    bundled(stem).map(|src| (format!("bundled:{stem}"), src.to_string())).ok_or_else(|| Error::UnknownFixture(arg.into()))
}
