//! JSON input formats. Every loader error names the file and the field that
//! failed.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use crate::algebra::{Seminorm, State};
use crate::config::Tolerances;
use crate::constructions::{UnionComponent, UnionSpace};
use crate::linalg::Operator;
use crate::metric::{validate_metric, Cover, MetricSpace};
use crate::spectral::FourierProfile;

/// A rejected input file.
#[derive(Debug, Clone, PartialEq)]
pub struct InputError {
    pub file: PathBuf,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.file.display(), self.message)
    }
}

impl std::error::Error for InputError {}

pub type InputResult<T> = std::result::Result<T, InputError>;

fn fail(path: &Path, message: impl Into<String>) -> InputError {
    InputError { file: path.to_path_buf(), message: message.into() }
}

fn read_value(path: &Path) -> InputResult<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| fail(path, format!("cannot read file: {e}")))?;
    serde_json::from_str(&text).map_err(|e| fail(path, format!("invalid JSON: {e}")))
}

fn field<T: DeserializeOwned>(path: &Path, v: &Value, name: &str) -> InputResult<T> {
    let raw = v.get(name).ok_or_else(|| fail(path, format!("missing field `{name}`")))?;
    serde_json::from_value(raw.clone()).map_err(|e| fail(path, format!("field `{name}`: {e}")))
}

fn optional_field<T: DeserializeOwned>(path: &Path, v: &Value, name: &str) -> InputResult<Option<T>> {
    match v.get(name) {
        None | Some(Value::Null) => Ok(None),
        Some(_) => field(path, v, name).map(Some),
    }
}

/// Distance matrix and labels as written, before the metric axioms are checked.
#[derive(Debug, Clone, Deserialize)]
pub struct RawMetric {
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    pub dist: Vec<Vec<f64>>,
}

pub fn load_raw_metric(path: &Path) -> InputResult<RawMetric> {
    let v = read_value(path)?;
    Ok(RawMetric { labels: optional_field(path, &v, "labels")?, dist: field(path, &v, "dist")? })
}

fn metric_from_value(path: &Path, v: &Value, tol: &Tolerances) -> InputResult<MetricSpace> {
    let labels: Option<Vec<String>> = optional_field(path, v, "labels")?;
    let dist: Vec<Vec<f64>> = field(path, v, "dist")?;
    if let Err(violations) = validate_metric(&dist, tol) {
        let first: Vec<String> = violations.iter().take(3).map(|x| x.to_string()).collect();
        return Err(fail(
            path,
            format!("field `dist`: {} metric violation(s): {}", violations.len(), first.join("; ")),
        ));
    }
    MetricSpace::new(dist, labels, tol).map_err(|e| fail(path, format!("field `labels`: {e}")))
}

pub fn load_metric(path: &Path, tol: &Tolerances) -> InputResult<MetricSpace> {
    metric_from_value(path, &read_value(path)?, tol)
}

pub fn load_operator(path: &Path) -> InputResult<Operator> {
    let text = std::fs::read_to_string(path).map_err(|e| fail(path, format!("cannot read file: {e}")))?;
    serde_json::from_str(&text).map_err(|e| fail(path, e.to_string()))
}

fn state_from_value(path: &Path, v: &Value, tol: &Tolerances) -> InputResult<State> {
    let block: usize = optional_field(path, v, "block")?.unwrap_or(0);
    let (state, name) = if v.get("density").is_some() {
        (State::Density { block, density: field(path, v, "density")? }, "density")
    } else if v.get("probs").is_some() {
        (State::Probs { block, probs: field(path, v, "probs")? }, "probs")
    } else {
        return Err(fail(path, "expected field `density` or `probs`"));
    };
    state.validated(tol).map_err(|e| fail(path, format!("field `{name}`: {e}")))
}

pub fn load_state(path: &Path, tol: &Tolerances) -> InputResult<State> {
    state_from_value(path, &read_value(path)?, tol)
}

/// Cover JSON `{"sets": [[...]], "colors": [...]}`; the diameter bound is
/// recomputed on `m`.
pub fn load_cover(path: &Path, m: &MetricSpace) -> InputResult<Cover> {
    let v = read_value(path)?;
    let sets: Vec<Vec<usize>> = field(path, &v, "sets")?;
    let colors: Vec<usize> = field(path, &v, "colors")?;
    Cover::new(sets, colors, m).map_err(|e| fail(path, format!("field `sets`: {e}")))
}

pub fn load_profile(path: &Path) -> InputResult<FourierProfile> {
    let text = std::fs::read_to_string(path).map_err(|e| fail(path, format!("cannot read file: {e}")))?;
    serde_json::from_str(&text).map_err(|e| fail(path, e.to_string()))
}

/// Union file:
/// `{"components": [{"kind": "classical", "space": {...}, "anchor": {...}} |
///   {"kind": "matrix", "dim": k, "anchor": {...}}], "gaps": [R_0, ...]}`.
pub fn load_union(path: &Path, tol: &Tolerances) -> InputResult<UnionSpace> {
    let v = read_value(path)?;
    let comps: Vec<Value> = field(path, &v, "components")?;
    let gaps: Vec<f64> = field(path, &v, "gaps")?;
    let mut components = Vec::with_capacity(comps.len());
    for (i, c) in comps.iter().enumerate() {
        let at = |m: String| fail(path, format!("field `components[{i}]`: {m}"));
        let kind: String =
            c.get("kind").and_then(Value::as_str).ok_or_else(|| at("missing string field `kind`".into()))?.to_string();
        let seminorm = match kind.as_str() {
            "classical" => {
                let space = c.get("space").ok_or_else(|| at("missing field `space`".into()))?;
                Seminorm::ClassicalLip(metric_from_value(path, space, tol).map_err(|e| at(e.message))?)
            }
            "matrix" => {
                let dim =
                    c.get("dim").and_then(Value::as_u64).ok_or_else(|| at("missing integer field `dim`".into()))?;
                Seminorm::Spread { dim: dim as usize }
            }
            other => return Err(at(format!("field `kind`: unknown component kind `{other}`"))),
        };
        let anchor_v = c.get("anchor").ok_or_else(|| at("missing field `anchor`".into()))?;
        let anchor = state_from_value(path, anchor_v, tol).map_err(|e| at(format!("field `anchor`: {}", e.message)))?;
        components.push(UnionComponent::new(seminorm, anchor, tol).map_err(|e| at(e.to_string()))?);
    }
    UnionSpace::new(components, gaps).map_err(|e| fail(path, format!("field `gaps`: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    #[test]
    fn errors_name_file_and_field() {
        let tol = Tolerances::default();
        let f = file(r#"{"dist": [[0, 1], [2, 0]]}"#);
        let e = load_metric(f.path(), &tol).unwrap_err();
        assert!(e.to_string().contains("field `dist`") && e.to_string().contains(&f.path().display().to_string()));

        let f = file(r#"{"probs": [0.5, 0.6]}"#);
        assert!(load_state(f.path(), &tol).unwrap_err().message.contains("field `probs`"));

        let f = file(r#"{"rows": 2, "cols": 2, "re": [[1, 0]]}"#);
        assert!(load_operator(f.path()).unwrap_err().message.contains("`re`"));
    }

    #[test]
    fn loads_union_file() {
        let tol = Tolerances::default();
        let f = file(
            r#"{"components": [
                {"kind": "matrix", "dim": 2, "anchor": {"density": {"rows": 2, "cols": 2, "re": [[1, 0], [0, 0]]}}},
                {"kind": "classical", "space": {"dist": [[0, 1], [1, 0]]}, "anchor": {"probs": [1, 0]}}
            ], "gaps": [2.5]}"#,
        );
        let u = load_union(f.path(), &tol).unwrap();
        assert_eq!(u.components.len(), 2);
        assert_eq!(u.gaps, vec![2.5]);
        let bad = file(r#"{"components": [{"kind": "torus"}], "gaps": []}"#);
        assert!(load_union(bad.path(), &tol).unwrap_err().message.contains("components[0]"));
    }
}
