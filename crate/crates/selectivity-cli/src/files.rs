use std::collections::HashSet;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use selectivity::functions::{TableBuilder, MAX_TABLE_LEN};
use selectivity::{MultiMap, TargetSet, Universe, ValueSet, Word};

fn line_err(path: &Path, lineno: usize, msg: impl std::fmt::Display) -> anyhow::Error {
    anyhow!("{}:{lineno}: {msg}", path.display())
}

/// SET file: optional first line "maxlen N", then one word per line; "-" is
/// the empty word; "#" starts a comment line. Duplicates parse fine but emit
/// a warning on stderr.
pub fn parse_set_file(path: &Path, u: Universe) -> Result<TargetSet> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading set file {}", path.display()))?;
    let mut b = TargetSet::new(u);
    let mut cap = u.max_len();
    let mut header_allowed = true;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if header_allowed {
            header_allowed = false;
            if let Some(rest) = line.strip_prefix("maxlen") {
                let n: u8 = rest
                    .trim()
                    .parse()
                    .map_err(|e| line_err(path, lineno, format!("bad maxlen header: {e}")))?;
                if n > u.max_len() {
                    bail!(line_err(
                        path,
                        lineno,
                        format!("set file declares maxlen {n} but the run universe allows {}", u.max_len()),
                    ));
                }
                cap = n;
                continue;
            }
        }
        let w: Word = line.parse().map_err(|e| line_err(path, lineno, e))?;
        if w.len() > cap {
            bail!(line_err(path, lineno, format!("word {w} is longer than maxlen {cap}")));
        }
        let fresh = b.insert(w).map_err(|e| line_err(path, lineno, e))?;
        if !fresh {
            eprintln!("warning: {}:{lineno}: duplicate word {w}", path.display());
        }
    }
    Ok(b)
}

fn parse_cell_value(token: &str) -> Option<ValueSet> {
    match token {
        "x" => Some(ValueSet::first_only()),
        "y" => Some(ValueSet::second_only()),
        "xy" => Some(ValueSet::both()),
        "none" => Some(ValueSet::EMPTY),
        _ => None,
    }
}

/// TABLE file: header "table maxlen N [single|multi]" (default multi), then
/// cell lines "x y -> V" with V one of x, y, xy, none. Unlisted off-diagonal
/// cells stay empty; the diagonal defaults to {x}. The declared maxlen must
/// match the run universe so every function of a run shares one universe.
pub fn parse_table_file(path: &Path, run_max_len: u8) -> Result<MultiMap> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading table file {}", path.display()))?;
    let mut builder: Option<TableBuilder> = None;
    let mut seen: HashSet<(Word, Word)> = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some(tb) = builder.as_mut() else {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() < 3 || toks.len() > 4 || toks[0] != "table" || toks[1] != "maxlen" {
                bail!(line_err(path, lineno, "expected header \"table maxlen N [single|multi]\""));
            }
            let n: u8 = toks[2]
                .parse()
                .map_err(|e| line_err(path, lineno, format!("bad maxlen: {e}")))?;
            let single = match toks.get(3) {
                None | Some(&"multi") => false,
                Some(&"single") => true,
                Some(other) => {
                    bail!(line_err(path, lineno, format!("expected single or multi, got {other}")))
                }
            };
            if n > MAX_TABLE_LEN {
                bail!(line_err(path, lineno, format!("table maxlen {n} exceeds the table limit {MAX_TABLE_LEN}")));
            }
            if n != run_max_len {
                bail!(line_err(
                    path,
                    lineno,
                    format!("table declares maxlen {n} but the run uses maxlen {run_max_len}; pass --maxlen {n}"),
                ));
            }
            let mut tb = TableBuilder::new(Universe::new(n)?, single)?;
            tb.fill_diagonal()?;
            builder = Some(tb);
            continue;
        };
        let (lhs, rhs) = line
            .split_once("->")
            .ok_or_else(|| line_err(path, lineno, "expected cell line \"x y -> V\""))?;
        let words: Vec<&str> = lhs.split_whitespace().collect();
        let [xs, ys] = words[..] else {
            bail!(line_err(path, lineno, "expected exactly two words before \"->\""));
        };
        let x: Word = xs.parse().map_err(|e| line_err(path, lineno, e))?;
        let y: Word = ys.parse().map_err(|e| line_err(path, lineno, e))?;
        let v = parse_cell_value(rhs.trim())
            .ok_or_else(|| line_err(path, lineno, "value must be one of x, y, xy, none"))?;
        // a nonempty diagonal value always means {x}
        let v = if x == y && !v.is_empty() { ValueSet::first_only() } else { v };
        if !seen.insert((x, y)) {
            bail!(line_err(path, lineno, format!("duplicate cell ({x}, {y})")));
        }
        tb.set(x, y, v).map_err(|e| line_err(path, lineno, e))?;
    }
    let Some(tb) = builder else {
        bail!("{}: missing \"table maxlen N\" header", path.display());
    };
    Ok(tb.build(&format!("table:{}", path.display())))
}

/// Writes f as a TABLE file and returns the number of cell lines. Inverse of
/// `parse_table_file` up to value-set semantics: off-diagonal cells are
/// written when nonempty, diagonal cells only when empty.
pub fn dump_table(f: &MultiMap, path: &Path) -> Result<u64> {
    let u = f.universe();
    if u.max_len() > MAX_TABLE_LEN {
        bail!(
            "cannot dump {}: universe maxlen {} exceeds the table limit {MAX_TABLE_LEN}",
            f.name(),
            u.max_len()
        );
    }
    let marker = if f.promises_single_valued() { "single" } else { "multi" };
    let mut text = format!("table maxlen {} {marker}\n", u.max_len());
    let mut cells = 0u64;
    for x in u.words() {
        for y in u.words() {
            let v = f.eval(x, y)?;
            let token = if x == y {
                if !v.is_empty() {
                    continue;
                }
                "none"
            } else {
                match (v.contains_first(), v.contains_second()) {
                    (false, false) => continue,
                    (true, false) => "x",
                    (false, true) => "y",
                    (true, true) => "xy",
                }
            };
            text.push_str(&format!("{x} {y} -> {token}\n"));
            cells += 1;
        }
    }
    fs::write(path, text).with_context(|| format!("writing table to {}", path.display()))?;
    Ok(cells)
}
