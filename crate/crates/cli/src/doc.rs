//! JSON documents whose leaves are Laurent literal strings.

use std::fs;
use std::path::Path;

use nilorb::{AffineElement, GaussianRational, GroupElement, Laurent, MatK, OrbitLabel};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementDocument {
    pub n: usize,
    pub matrix: Vec<Vec<String>>,
    #[serde(default = "zero_literal")]
    pub c: String,
    #[serde(default = "zero_literal")]
    pub d: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDocument {
    #[serde(default = "one_literal")]
    pub z: String,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LabelDocument {
    pub partition: Vec<usize>,
    pub k: usize,
    pub level: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitRow {
    pub partition: Vec<usize>,
    pub k: usize,
    pub level: String,
    pub matrix: Vec<Vec<String>>,
}

fn zero_literal() -> String {
    "0".into()
}

fn one_literal() -> String {
    "1".into()
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Parses a literal that must denote an element of `Q(i)`.
pub fn parse_scalar(text: &str) -> Result<GaussianRational, CliError> {
    Laurent::parse(text)?
        .as_exact_constant()
        .ok_or_else(|| CliError::Input(format!("`{text}` is not a Q(i) scalar literal")))
}

fn parse_matrix(rows: &[Vec<String>], n: Option<usize>) -> Result<MatK, CliError> {
    let n = n.unwrap_or(rows.len());
    if n == 0 {
        return Err(CliError::Input("matrix must be at least 1×1".into()));
    }
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Input(format!("matrix is not {n}×{n}")));
    }
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|s| Laurent::parse(s)).collect::<nilorb::Result<Vec<_>>>())
        .collect::<nilorb::Result<Vec<_>>>()?;
    Ok(MatK::from_rows(parsed)?)
}

fn render_matrix(m: &MatK) -> Vec<Vec<String>> {
    m.rows().iter().map(|r| r.iter().map(Laurent::to_literal).collect()).collect()
}

impl ElementDocument {
    pub fn load(path: &Path) -> Result<AffineElement, CliError> {
        read_json::<ElementDocument>(path)?.to_element()
    }

    pub fn to_element(&self) -> Result<AffineElement, CliError> {
        let mat = parse_matrix(&self.matrix, Some(self.n))?;
        Ok(AffineElement::new(mat, parse_scalar(&self.c)?, parse_scalar(&self.d)?)?)
    }

    pub fn from_element(a: &AffineElement) -> Self {
        ElementDocument { n: a.n(), matrix: render_matrix(a.mat()), c: a.c().to_literal(), d: a.d().to_literal() }
    }
}

impl GroupDocument {
    pub fn load(path: &Path, working_prec: i64) -> Result<GroupElement, CliError> {
        read_json::<GroupDocument>(path)?.to_group(working_prec)
    }

    pub fn to_group(&self, working_prec: i64) -> Result<GroupElement, CliError> {
        let g = parse_matrix(&self.matrix, None)?;
        Ok(GroupElement::new(parse_scalar(&self.z)?, g, working_prec)?)
    }

    pub fn from_group(h: &GroupElement) -> Self {
        GroupDocument { z: h.z().to_literal(), matrix: render_matrix(h.g()) }
    }
}

impl From<&OrbitLabel> for LabelDocument {
    fn from(label: &OrbitLabel) -> Self {
        LabelDocument { partition: label.partition.parts().to_vec(), k: label.k, level: label.level.to_literal() }
    }
}

impl OrbitRow {
    pub fn new(label: &OrbitLabel, rep: &MatK) -> Self {
        OrbitRow {
            partition: label.partition.parts().to_vec(),
            k: label.k,
            level: label.level.to_literal(),
            matrix: render_matrix(rep),
        }
    }
}
