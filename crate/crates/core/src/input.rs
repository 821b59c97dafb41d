//! Input files: a scheme in a product of projective spaces and a height-one
//! base change, in TOML.
//!
//! ```toml
//! [field]
//! p = 2
//! params = ["s", "t"]
//!
//! [ambient]
//! blocks = [["x", "y", "z"]]
//!
//! [scheme]
//! generators = ["s*x^2 + t*y^2 + z^2"]
//!
//! [base_change]
//! raise = ["s", "t"]
//! ```

use crate::error::{Error, Result};
use crate::geometry::{BaseChangeSpec, SchemeDesc};
use crate::poly::{parse_poly, PolyRing};
use crate::tower::TowerField;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct FieldSection {
    pub p: u32,
    pub params: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<u32>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct AmbientSection {
    pub blocks: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SchemeSection {
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq, Default)]
#[serde(deny_unknown_fields)]
pub struct BaseChangeSection {
    /// Parameters whose level goes up by one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raise: Option<Vec<String>>,
    /// Target levels, as an alternative to `raise`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<u32>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct InputFile {
    pub field: FieldSection,
    pub ambient: AmbientSection,
    pub scheme: SchemeSection,
    #[serde(default)]
    pub base_change: BaseChangeSection,
}

/// A validated input.
#[derive(Clone, Debug)]
pub struct Input {
    pub file: InputFile,
    pub x: SchemeDesc,
    pub bc: BaseChangeSpec,
}

impl Input {
    pub fn target(&self) -> &TowerField {
        &self.bc.target
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map(|i| i + 1).unwrap_or(0) + 1;
    (line, col)
}

pub fn parse_input(text: &str) -> Result<Input> {
    let file: InputFile = toml::from_str(text).map_err(|e| {
        let (line, col) = e.span().map(|s| line_col(text, s.start)).unwrap_or((0, 0));
        Error::Parse { line, col, msg: e.message().to_string() }
    })?;
    build(file, Some(text))
}

pub fn read_input(path: &Path) -> Result<Input> {
    parse_input(&std::fs::read_to_string(path)?)
}

/// Validates a parsed file. `text` is used to place generator parse errors.
pub fn build(file: InputFile, text: Option<&str>) -> Result<Input> {
    let f = &file.field;
    let levels = f.levels.clone().unwrap_or_else(|| vec![0; f.params.len()]);
    let field = TowerField::new(f.p, f.params.clone(), levels)?;
    if file.ambient.blocks.is_empty() || file.ambient.blocks.iter().any(|b| b.len() < 2) {
        return Err(Error::Validation("every factor needs at least two coordinates".into()));
    }
    let mut seen = std::collections::BTreeSet::new();
    for v in file.ambient.blocks.iter().flatten() {
        if !seen.insert(v.clone()) || f.params.contains(v) {
            return Err(Error::Validation(format!("duplicate name {v}")));
        }
        if !v.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) || !v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Error::Validation(format!("bad variable name {v}")));
        }
    }
    let ring = PolyRing::multiprojective(field.clone(), &file.ambient.blocks);
    let mut gens = Vec::new();
    for g in &file.scheme.generators {
        let poly = parse_poly(&ring, g).map_err(|e| match (e, text) {
            (Error::Parse { col, msg, .. }, Some(t)) => {
                let start = t.find(&format!("\"{g}\"")).map(|i| i + 1).unwrap_or(0);
                let (line, c0) = line_col(t, start);
                Error::Parse { line, col: c0 + col - 1, msg }
            }
            (e, _) => e,
        })?;
        gens.push(poly);
    }
    let x = SchemeDesc::new(&ring, gens)?;
    let bcs = &file.base_change;
    let target_levels = match (&bcs.raise, &bcs.levels) {
        (Some(_), Some(_)) => return Err(Error::Validation("give either raise or levels, not both".into())),
        (Some(names), None) => {
            let mut lv = field.levels().to_vec();
            for n in names {
                let i = field.param_index(n).ok_or_else(|| Error::Validation(format!("unknown parameter {n}")))?;
                lv[i] += 1;
            }
            lv
        }
        (None, Some(lv)) => {
            if lv.len() != field.nsyms() {
                return Err(Error::Validation("base change levels have the wrong length".into()));
            }
            lv.clone()
        }
        (None, None) => field.levels().to_vec(),
    };
    let target = field.with_levels(target_levels);
    let bc = BaseChangeSpec::new(field, target)?;
    Ok(Input { file, x, bc })
}

/// Canonical text form of a scheme and base change.
pub fn print_input(x: &SchemeDesc, bc: &BaseChangeSpec) -> String {
    let field = x.field();
    let file = InputFile {
        field: FieldSection {
            p: field.p(),
            params: field.params().to_vec(),
            levels: if field.levels().iter().all(|&l| l == 0) { None } else { Some(field.levels().to_vec()) },
        },
        ambient: AmbientSection { blocks: x.blocks() },
        scheme: SchemeSection { generators: x.render_gens() },
        base_change: BaseChangeSection { raise: None, levels: Some(bc.target.levels().to_vec()) },
    };
    toml::to_string(&file).expect("input serialises")
}
