use std::path::{Path, PathBuf};

use super::algebra::{load_algebra, LieSuperalgebraData};
use crate::error::{Error, Result};

const BUNDLED: [(&str, &str); 4] = [
    ("sl2", include_str!("../../catalog/sl2.json")),
    ("gl11", include_str!("../../catalog/gl11.json")),
    ("osp12", include_str!("../../catalog/osp12.json")),
    ("sl21", include_str!("../../catalog/sl21.json")),
];

/// Environment variable naming a directory that replaces the bundled catalog.
pub const CATALOG_ENV: &str = "SUPERW_CATALOG";

pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

fn catalog_dir() -> Option<PathBuf> {
    std::env::var_os(CATALOG_ENV).map(PathBuf::from)
}

/// Document text for a catalog name.
pub fn catalog_text(name: &str) -> Result<String> {
    if let Some(dir) = catalog_dir() {
        let path = dir.join(format!("{name}.json"));
        return std::fs::read_to_string(&path)
            .map_err(|e| Error::Document(format!("catalog entry {}: {e}", path.display())));
    }
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| t.to_string())
        .ok_or_else(|| Error::Document(format!("unknown catalog algebra {name:?}")))
}

/// Loads a catalog entry by name.
pub fn catalog_algebra(name: &str) -> Result<LieSuperalgebraData> {
    load_algebra(&catalog_text(name)?)
}

/// Resolves a path or catalog name to document text.
pub fn resolve_text(spec: &str) -> Result<String> {
    let p = Path::new(spec);
    if spec.ends_with(".json") || p.components().count() > 1 {
        Ok(std::fs::read_to_string(p)?)
    } else {
        catalog_text(spec)
    }
}
