//! Parsing of command-line operands: inline JSON, files, text shorthands and
//! catalog names.

use std::path::Path;
use std::sync::Arc;

use vlab::finlat::{FinLattice, FinPoset, FinPosetJson};
use vlab::ideals::{IdealJson, IdealSpec};
use vlab::pl::PLFunJson;
use vlab::rational::{int, parse_rational};
use vlab::region::RegionJson;
use vlab::seq::{IncreasingSeqRule, SeqRuleJson};
use vlab::{Error, PLFun, Region, Result, Space};

/// Reads `arg` as a file when it names one, otherwise returns it as is.
fn contents(arg: &str) -> Result<Option<String>> {
    let path = Path::new(arg);
    if path.is_file() {
        return std::fs::read_to_string(path)
            .map(Some)
            .map_err(|e| Error::Json(format!("{arg}: {e}")));
    }
    Ok(None)
}

fn json<T: serde::de::DeserializeOwned>(what: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Json(format!("{what}: {e}")))
}

fn nested_list(text: &str) -> bool {
    text.trim_start().strip_prefix('[').is_some_and(|r| r.trim_start().starts_with('['))
}

fn object(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

/// `[["a","b"], ...]`, a file holding it, or `a:b,c:d`.
pub fn space(arg: &str) -> Result<Arc<Space>> {
    if let Some(text) = contents(arg)? {
        return Ok(Arc::new(json::<Space>(arg, &text)?));
    }
    if nested_list(arg) {
        return Ok(Arc::new(json::<Space>("--space", arg)?));
    }
    let comps = arg
        .split(',')
        .map(|c| {
            let (a, b) = c
                .split_once(':')
                .ok_or_else(|| Error::InvalidSpace(format!("component {c:?} is not a:b")))?;
            Ok((parse_rational(a.trim())?, parse_rational(b.trim())?))
        })
        .collect::<Result<Vec<_>>>()?;
    Space::new(comps)
}

/// The space a JSON function lives on, when `arg` is one.
pub fn space_of_function(arg: &str) -> Result<Option<Arc<Space>>> {
    let text = match contents(arg)? {
        Some(t) => t,
        None if nested_list(arg) => arg.to_string(),
        None => return Ok(None),
    };
    let raw: PLFunJson = json(arg, &text)?;
    Ok(Some(PLFun::from_json(&raw)?.space().clone()))
}

fn catalog_function(space: &Arc<Space>, name: &str) -> Option<PLFun> {
    let t = PLFun::identity(space);
    Some(match name {
        "tplus" | "t+" => t.pos_part(),
        "tminus" | "t-" => t.neg_part(),
        "t" | "identity" => t,
        "abs" | "|t|" => t.abs(),
        "one" | "1" => PLFun::constant(space, int(1)),
        "zero" | "0" => PLFun::zero(space),
        _ => {
            let c = parse_rational(name.strip_prefix("const:")?).ok()?;
            PLFun::constant(space, c)
        }
    })
}

/// A function as JSON, a JSON file, or a catalog name (`tplus`, `t`, `abs`,
/// `one`, `zero`, `const:c`); a `.json` suffix on a missing file is ignored.
pub fn function(space: &Arc<Space>, arg: &str) -> Result<PLFun> {
    if let Some(text) = contents(arg)? {
        return PLFun::from_json_on(space, &json(arg, &text)?);
    }
    if nested_list(arg) {
        return PLFun::from_json_on(space, &json("--fn", arg)?);
    }
    let name = arg.strip_suffix(".json").unwrap_or(arg);
    catalog_function(space, name).ok_or_else(|| Error::InvalidFunction(format!("unknown function {arg:?}")))
}

/// A region as interval text (`[-1,0)∪(0,1]`), JSON, or a JSON file.
pub fn region(space: &Arc<Space>, arg: &str) -> Result<Region> {
    if let Some(text) = contents(arg)? {
        return Region::from_json(space, &json::<RegionJson>(arg, &text)?);
    }
    if nested_list(arg) {
        return Region::from_json(space, &json::<RegionJson>("region", arg)?);
    }
    Region::parse(space, arg)
}

/// An ideal as JSON, a JSON file, `E(<region>)` or `I(<function>)`.
pub fn ideal(space: &Arc<Space>, arg: &str) -> Result<IdealSpec> {
    if let Some(text) = contents(arg)? {
        return IdealSpec::from_json(space, &json::<IdealJson>(arg, &text)?);
    }
    if object(arg) {
        return IdealSpec::from_json(space, &json::<IdealJson>("--ideal", arg)?);
    }
    let t = arg.trim();
    if let Some(inner) = t.strip_prefix("E(").and_then(|r| r.strip_suffix(')')) {
        return Ok(IdealSpec::region(region(space, inner)?));
    }
    if let Some(inner) = t.strip_prefix("I(").and_then(|r| r.strip_suffix(')')) {
        return IdealSpec::principal(function(space, inner)?);
    }
    Err(Error::UnsupportedIdealShape(format!("cannot read ideal {arg:?}")))
}

/// A sequence rule as JSON, a file, `exhaust:<region>` or `multiples:<fn>`.
pub fn sequence(space: &Arc<Space>, arg: &str) -> Result<IncreasingSeqRule> {
    if let Some(text) = contents(arg)? {
        return IncreasingSeqRule::from_json(space, &json::<SeqRuleJson>(arg, &text)?);
    }
    if object(arg) {
        return IncreasingSeqRule::from_json(space, &json::<SeqRuleJson>("--seq", arg)?);
    }
    if let Some(r) = arg.strip_prefix("exhaust:") {
        return IncreasingSeqRule::exhaustion(&region(space, r)?);
    }
    if let Some(f) = arg.strip_prefix("multiples:") {
        return IncreasingSeqRule::multiples(function(space, f)?);
    }
    Err(Error::InvalidSequenceRule(format!("cannot read sequence {arg:?}")))
}

/// A poset as `{n, leq, labels}` JSON or a file holding it.
pub fn poset(arg: &str) -> Result<FinPoset> {
    let text = contents(arg)?.unwrap_or_else(|| arg.to_string());
    FinPoset::from_json(&json::<FinPosetJson>("--poset", &text)?)
}

/// A lattice given as a poset or by catalog name.
pub fn lattice(arg: &str) -> Result<FinLattice> {
    if contents(arg)?.is_some() || object(arg) {
        return FinLattice::from_poset(poset(arg)?);
    }
    FinLattice::named(arg)
}
