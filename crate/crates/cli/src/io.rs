use std::fs;
use std::path::Path;
use std::sync::Arc;

use prismkit_core::base_rings::{ElemJson, Precision, RingElem, RingSpec};
use prismkit_core::witt::{WittJson, WittVector};

use crate::CliError;

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = read(path)?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Domain(prismkit_core::Error::Parse(format!("{}: {e}", path.display()))))
}

pub fn elem(path: &Path, ctx: Precision) -> Result<RingElem, CliError> {
    Ok(parse::<ElemJson>(path)?.into_elem_parsed(ctx)?)
}

pub fn elem_in(path: &Path, spec: &Arc<RingSpec>) -> Result<RingElem, CliError> {
    Ok(parse::<ElemJson>(path)?.into_elem(spec)?)
}

pub fn elems_in(path: &Path, spec: &Arc<RingSpec>) -> Result<Vec<RingElem>, CliError> {
    let list: Vec<ElemJson> = parse(path)?;
    Ok(list.iter().map(|e| e.into_elem(spec)).collect::<Result<_, _>>()?)
}

pub fn elems(path: &Path, ctx: Precision) -> Result<Vec<RingElem>, CliError> {
    let list: Vec<ElemJson> = parse(path)?;
    Ok(list.iter().map(|e| e.into_elem_parsed(ctx)).collect::<Result<_, _>>()?)
}

pub fn witt(path: &Path, ctx: Precision) -> Result<WittVector, CliError> {
    Ok(parse::<WittJson>(path)?.into_vector(ctx)?)
}

/// Exactly `n` inputs.
pub fn expect<'a>(
    inputs: &'a [std::path::PathBuf],
    n: usize,
    what: &str,
) -> Result<&'a [std::path::PathBuf], CliError> {
    if inputs.len() != n {
        return Err(CliError::Usage(format!("{what} needs {n} --in file(s), got {}", inputs.len())));
    }
    Ok(inputs)
}
