//! Reading classes, list classes and certificates from files or stdin.

use std::io::Read;
use std::path::Path;

use dsbound::dims::ListClass;
use dsbound::{parse_class_auto, HypothesisClass, Label};
use serde::Deserialize;

use crate::CliError;

pub fn read_source(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        Some(p) if p != Path::new("-") => {
            std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Usage(format!("cannot read stdin: {e}")))?;
            Ok(s)
        }
    }
}

pub fn read_class(path: Option<&Path>) -> Result<HypothesisClass, CliError> {
    Ok(parse_class_auto(&read_source(path)?)?)
}

/// JSON list class: `{"n": 2, "k": 3, "ell": 2, "members": [[[0, 1], [2]], …]}`.
#[derive(Deserialize)]
struct ListClassDoc {
    n: usize,
    k: Label,
    ell: usize,
    members: Vec<Vec<Vec<Label>>>,
}

/// A list-class document, or an ordinary class read as singleton lists.
pub fn read_list_class(path: Option<&Path>) -> Result<ListClass, CliError> {
    let text = read_source(path)?;
    let value: Option<serde_json::Value> = serde_json::from_str(&text).ok();
    if value.as_ref().is_some_and(|v| v.get("members").is_some()) {
        let doc: ListClassDoc = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("list class: {e}")))?;
        let mut members = Vec::with_capacity(doc.members.len());
        for m in doc.members {
            let mut masks = Vec::with_capacity(m.len());
            for list in m {
                if list.iter().any(|&y| y >= 64) {
                    return Err(CliError::Usage("list labels must be below 64".into()));
                }
                masks.push(list.iter().fold(0u64, |acc, &y| acc | 1 << y));
            }
            members.push(masks);
        }
        return Ok(ListClass::new(doc.n, doc.k, doc.ell, members)?);
    }
    Ok(ListClass::from_class(&parse_class_auto(&text)?))
}
