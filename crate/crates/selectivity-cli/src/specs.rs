use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use selectivity::transforms::{
    associativize_full, associativize_partial, associativize_total, etime_selector,
    gapset_selector, maxvals_commutativize, minmax_commutativize, score_selector,
    union_commutativize, GapLengths,
};
use selectivity::{MultiMap, TargetSet, Universe};

use crate::files;

/// Grammar:
///   SPEC  := "maxlex" | "minlex" | "table:PATH" | WRAP ":" SPEC | CTOR ":" ARGS
///   WRAP  := "prime" | "dprime" | "hat" | "assoc" | "assocp" | "assocf"
///   CTOR  := "score" | "gapset" | "etime"
///   ARGS  := key "=" value (";" key "=" value)*
/// Values inside ARGS may not contain ";" or "="; nested specs and paths
/// there must avoid both characters.
pub fn parse_selector_spec(spec: &str, max_len: u8, budget: u64) -> Result<MultiMap> {
    build(spec.trim(), max_len, budget)
        .with_context(|| format!("selector spec \"{}\"", spec.trim()))
}

fn build(spec: &str, max_len: u8, budget: u64) -> Result<MultiMap> {
    match spec {
        "maxlex" => return Ok(MultiMap::max_shortlex(Universe::new(max_len)?)),
        "minlex" => return Ok(MultiMap::min_shortlex(Universe::new(max_len)?)),
        _ => {}
    }
    let Some((head, rest)) = spec.split_once(':') else {
        bail!("unknown selector \"{spec}\" (expected maxlex, minlex, table:, prime:, dprime:, hat:, assoc:, assocp:, assocf:, score:, gapset: or etime:)");
    };
    match head {
        "table" => files::parse_table_file(Path::new(rest), max_len),
        "prime" => Ok(minmax_commutativize(&build(rest, max_len, budget)?)),
        "dprime" => {
            let f = build(rest, max_len, budget)?;
            Ok(maxvals_commutativize(&f, budget)?)
        }
        "hat" => Ok(union_commutativize(&build(rest, max_len, budget)?)),
        "assoc" => {
            let f = build(rest, max_len, budget)?;
            Ok(associativize_total(&f, budget)?)
        }
        "assocp" => {
            let f = build(rest, max_len, budget)?;
            Ok(associativize_partial(&f, budget)?)
        }
        "assocf" => {
            let f = build(rest, max_len, budget)?;
            Ok(associativize_full(&f, budget)?)
        }
        "score" => {
            let args = parse_args(rest, &["set", "base"])?;
            let base = build(required(&args, "set, base", "base")?, max_len, budget)?;
            let b = arg_set(&args, base.universe(), "score")?;
            Ok(score_selector(&base, &b, budget)?)
        }
        "gapset" => {
            let args = parse_args(rest, &["set", "lengths"])?;
            let u = Universe::new(max_len)?;
            let b = arg_set(&args, u, "gapset")?;
            let lengths = match args.get("lengths") {
                None => GapLengths::default_for(max_len),
                Some(list) => {
                    let parsed: Result<Vec<u8>, _> =
                        list.split(',').map(|t| t.trim().parse::<u8>()).collect();
                    GapLengths::new(parsed.with_context(|| format!("lengths \"{list}\""))?)?
                }
            };
            Ok(gapset_selector(&b, &lengths)?)
        }
        "etime" => {
            let args = parse_args(rest, &["set", "base", "upto"])?;
            let base = build(required(&args, "set, base, upto", "base")?, max_len, budget)?;
            let b = arg_set(&args, base.universe(), "etime")?;
            let upto = match args.get("upto") {
                None => base.universe().max_len(),
                Some(t) => t.parse::<u8>().with_context(|| format!("upto \"{t}\""))?,
            };
            let (f, _orders) = etime_selector(&b, &base, upto, budget)?;
            Ok(f)
        }
        other => bail!("unknown selector constructor \"{other}:\""),
    }
}

fn parse_args<'a>(rest: &'a str, allowed: &[&str]) -> Result<BTreeMap<&'a str, &'a str>> {
    let mut args = BTreeMap::new();
    for part in rest.split(';') {
        let Some((key, value)) = part.split_once('=') else {
            bail!("argument \"{part}\" is not key=value");
        };
        let key = key.trim();
        if !allowed.contains(&key) {
            bail!("unknown argument \"{key}\" (expected {})", allowed.join(", "));
        }
        if args.insert(key, value.trim()).is_some() {
            bail!("argument \"{key}\" given twice");
        }
    }
    Ok(args)
}

fn required<'a>(
    args: &BTreeMap<&str, &'a str>,
    allowed: &str,
    key: &str,
) -> Result<&'a str> {
    match args.get(key) {
        Some(v) => Ok(v),
        None => bail!("missing argument \"{key}\" (expected {allowed})"),
    }
}

fn arg_set(args: &BTreeMap<&str, &str>, u: Universe, ctor: &str) -> Result<TargetSet> {
    let path = match args.get("set") {
        Some(p) => p,
        None => bail!("missing argument \"set\" for {ctor}:"),
    };
    files::parse_set_file(Path::new(path), u)
}
