//! selcheck: build, transform and verify selector functions over bounded
//! binary-string universes from the command line.

mod files;
mod output;
mod specs;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use selectivity::advice::{
    decode, decoder_members, extract_clique_advice, extract_source_advice, AdviceKind, CliqueSide,
};
use selectivity::digraph::{Digraph, ExtremalSide};
use selectivity::functions::{
    assoc_sides, check_basic, enumerate_class, is_associative_at_each_length, is_associative_on,
    is_selector_for, is_weakly_associative_on, three_way_assoc_check, totality_consequence,
    ValueMode,
};
use selectivity::report::fmt_words;
use selectivity::samples::{ambiguous_total_triple, sparse_partial_triple};
use selectivity::transforms::{minmax_commutativize, union_commutativize};
use selectivity::witness::{
    dominating_cover, hinted_subset, lexmax_cover, printable_subset, score, top_string,
    CoverSource, HintSet, TopMethod,
};
use selectivity::{
    MultiMap, PropertyReport, TargetSet, Witness, Word, DEFAULT_BUDGET,
};

use output::{OutFormat, Sink};

/// Largest function class `enumerate` will stream through.
const ENUMERATION_CAP: u64 = 1 << 20;

#[derive(Parser)]
#[command(
    name = "selcheck",
    version,
    about = "Build, transform and verify selector functions over bounded binary-string universes"
)]
struct Cli {
    /// Universe bound: all binary words of length 0..=N
    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(u8).range(0..=20))]
    maxlen: u8,
    /// Seed for the sampled equivalence suites
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Write the report to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Lines,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    P,
    Np,
    Conp,
    Strong,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpArg {
    Score,
    Top,
    Cover,
    Print,
    Hinted,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Greedy,
    Lexmax,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnumModeArg {
    Single,
    Multi,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check properties of a selector over its whole universe
    Check {
        /// Selector spec, e.g. maxlex, table:f.tbl, hat:table:f.tbl
        #[arg(long)]
        selector: String,
        /// SET file naming the target set for selector/consequence checks
        #[arg(long)]
        set: Option<PathBuf>,
        /// Comma list: basic, total, commutative, single, assoc, weakassoc,
        /// lengthassoc, threeway, selector, consequence
        #[arg(long, default_value = "basic,assoc")]
        props: String,
    },
    /// Induce the selector's digraph and run graph analyses
    Digraph {
        #[arg(long)]
        selector: String,
        /// Vertex set; the whole universe when omitted
        #[arg(long)]
        set: Option<PathBuf>,
        /// Comma list: classify, tournament, complete, transitive, cycle,
        /// extremal, condensation, dominating, equivalences
        #[arg(long, default_value = "classify,transitive")]
        analyses: String,
    },
    /// Construct a derived selector, verify it, optionally dump a TABLE file
    Transform {
        #[arg(long)]
        selector: String,
        #[arg(long)]
        set: Option<PathBuf>,
        /// Properties to verify; defaults to basic,assoc plus selector when
        /// --set is given
        #[arg(long)]
        props: Option<String>,
        /// Write the constructed function as a TABLE file
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Extract per-length advice words and verify their decoders
    Advice {
        #[arg(long)]
        selector: String,
        #[arg(long)]
        set: PathBuf,
        /// Largest advice length; defaults to the universe bound
        #[arg(long)]
        upto: Option<u8>,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Also list up to CAP accepted decoder pair codes per length
        #[arg(long, value_name = "CAP")]
        emit_decoder_members: Option<usize>,
    },
    /// Score rows, top strings, covers and printable subsets
    Witness {
        #[arg(long)]
        selector: String,
        #[arg(long)]
        set: Option<PathBuf>,
        /// Largest length; defaults to the universe bound
        #[arg(long)]
        upto: Option<u8>,
        #[arg(long, value_enum)]
        op: OpArg,
        /// Hinted lengths: even, odd, all, or list:2,4,6
        #[arg(long)]
        hint: Option<String>,
        /// Cover construction for the cover and print ops
        #[arg(long, value_enum, default_value_t = ModeArg::Greedy)]
        mode: ModeArg,
    },
    /// Exhaustively count a small function class and cross-check the
    /// associativity census against the induced-digraph route
    Enumerate {
        /// Domain: the first SIZE words of the universe in shortlex order
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=6))]
        size: u8,
        #[arg(long, value_enum, default_value_t = EnumModeArg::Multi)]
        mode: EnumModeArg,
        /// Restrict to commutative functions
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        commutative: bool,
        /// Restrict to total functions
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        total: bool,
    },
    /// Reproduce the frozen associativity counterexamples
    Demo,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let format = match cli.format {
        FormatArg::Text => OutFormat::Text,
        FormatArg::Lines => OutFormat::Lines,
        FormatArg::Dot => OutFormat::Dot,
    };
    if format == OutFormat::Dot && !matches!(cli.cmd, Cmd::Digraph { .. }) {
        bail!("--format dot is only available for the digraph subcommand");
    }
    let mut sink = Sink::new(format);
    match &cli.cmd {
        Cmd::Check { selector, set, props } => {
            let f = specs::parse_selector_spec(selector, cli.maxlen, DEFAULT_BUDGET)?;
            let b = load_set(set.as_deref(), &f)?;
            let d: Vec<Word> = f.universe().words().collect();
            run_props(&mut sink, &f, &d, b.as_ref(), props)?;
        }
        Cmd::Digraph { selector, set, analyses } => {
            run_digraph(&mut sink, &cli, selector, set.as_deref(), analyses)?;
        }
        Cmd::Transform { selector, set, props, dump } => {
            let f = specs::parse_selector_spec(selector, cli.maxlen, DEFAULT_BUDGET)?;
            let b = load_set(set.as_deref(), &f)?;
            let u = f.universe();
            sink.push_line(format!(
                "TRANSFORM name={} maxlen={} single={}",
                f.name(),
                u.max_len(),
                f.promises_single_valued()
            ));
            let props = match props {
                Some(p) => p.clone(),
                None if b.is_some() => "basic,assoc,selector".to_string(),
                None => "basic,assoc".to_string(),
            };
            let d: Vec<Word> = u.words().collect();
            run_props(&mut sink, &f, &d, b.as_ref(), &props)?;
            if let Some(path) = dump {
                let cells = files::dump_table(&f, path)?;
                sink.push_line(format!("DUMP path={} cells={cells}", path.display()));
            }
        }
        Cmd::Advice { selector, set, upto, kind, emit_decoder_members } => {
            let f = specs::parse_selector_spec(selector, cli.maxlen, DEFAULT_BUDGET)?;
            let b = files::parse_set_file(set, f.universe())?;
            let upto = bounded_upto(*upto, &f)?;
            run_advice(&mut sink, &f, &b, upto, *kind, *emit_decoder_members)?;
        }
        Cmd::Witness { selector, set, upto, op, hint, mode } => {
            let f = specs::parse_selector_spec(selector, cli.maxlen, DEFAULT_BUDGET)?;
            let b = load_set(set.as_deref(), &f)?;
            let upto = bounded_upto(*upto, &f)?;
            run_witness(&mut sink, &f, b.as_ref(), upto, *op, hint.as_deref(), *mode)?;
        }
        Cmd::Enumerate { size, mode, commutative, total } => {
            run_enumerate(&mut sink, &cli, *size, *mode, *commutative, *total)?;
        }
        Cmd::Demo => run_demo(&mut sink)?,
    }
    sink.write_out(cli.out.as_deref())?;
    Ok(sink.all_pass)
}

fn load_set(path: Option<&std::path::Path>, f: &MultiMap) -> Result<Option<TargetSet>> {
    path.map(|p| files::parse_set_file(p, f.universe())).transpose()
}

fn bounded_upto(upto: Option<u8>, f: &MultiMap) -> Result<u8> {
    let max = f.universe().max_len();
    let upto = upto.unwrap_or(max);
    if upto > max {
        bail!("--upto {upto} exceeds the universe bound {max}");
    }
    Ok(upto)
}

fn run_props(
    sink: &mut Sink,
    f: &MultiMap,
    d: &[Word],
    b: Option<&TargetSet>,
    props: &str,
) -> Result<()> {
    let names: Vec<&str> = props.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
    if names.is_empty() {
        bail!("--props lists no properties");
    }
    let wants_basic = names
        .iter()
        .any(|p| matches!(*p, "basic" | "total" | "commutative" | "single"));
    let basics = if wants_basic { Some(check_basic(f, d)?) } else { None };
    let basic = |i: usize| basics.as_ref().expect("computed above")[i].clone();
    for name in names {
        match name {
            "basic" => {
                for i in 0..3 {
                    sink.push_report(&basic(i));
                }
            }
            "total" => sink.push_report(&basic(0)),
            "commutative" => sink.push_report(&basic(1)),
            "single" => sink.push_report(&basic(2)),
            "assoc" => sink.push_caught(is_associative_on(f, d))?,
            "weakassoc" => sink.push_caught(is_weakly_associative_on(f, d))?,
            "lengthassoc" => sink.push_caught(is_associative_at_each_length(f))?,
            "threeway" => sink.push_caught(three_way_assoc_check(f, d).map(|ar| ar.report))?,
            "selector" => {
                let b = require_set(b, "selector")?;
                sink.push_caught(is_selector_for(f, b, d))?;
            }
            "consequence" => {
                let b = require_set(b, "consequence")?;
                sink.push_caught(totality_consequence(f, b))?;
            }
            other => bail!(
                "unknown property \"{other}\" (expected basic, total, commutative, single, assoc, weakassoc, lengthassoc, threeway, selector, consequence)"
            ),
        }
    }
    Ok(())
}

fn require_set<'a>(b: Option<&'a TargetSet>, what: &str) -> Result<&'a TargetSet> {
    match b {
        Some(b) => Ok(b),
        None => bail!("--set is required for \"{what}\""),
    }
}

fn run_digraph(
    sink: &mut Sink,
    cli: &Cli,
    selector: &str,
    set: Option<&std::path::Path>,
    analyses: &str,
) -> Result<()> {
    let f = specs::parse_selector_spec(selector, cli.maxlen, DEFAULT_BUDGET)?;
    let vertices: Vec<Word> = match set {
        Some(p) => files::parse_set_file(p, f.universe())?.members(),
        None => f.universe().words().collect(),
    };
    if vertices.is_empty() {
        bail!("the digraph needs a nonempty vertex set");
    }
    let g = Digraph::induce(&f, &vertices)?;
    if sink.format() == OutFormat::Dot {
        sink.push_block(&g.to_dot());
        return Ok(());
    }
    for name in analyses.split(',').map(str::trim).filter(|a| !a.is_empty()) {
        match name {
            "classify" => {
                let c = g.classify();
                sink.push_line(format!(
                    "GRAPH name={} vertices={} s-tournament={} complete={} strong-clique={}",
                    g.name(),
                    g.len(),
                    c.s_tournament,
                    c.complete,
                    c.strong_clique
                ));
            }
            "tournament" => sink.push_report(&g.s_tournament_report()),
            "complete" => sink.push_report(&g.completeness_report()),
            "transitive" => sink.push_report(&g.is_transitive()),
            "cycle" => match g.long_cycle() {
                Some(cycle) => {
                    sink.push_line(format!("CYCLE found=true words={}", fmt_words(&cycle)))
                }
                None => sink.push_line("CYCLE found=false"),
            },
            "extremal" => {
                let show = |w: Option<Word>| match w {
                    Some(w) => w.to_string(),
                    None => "none".to_string(),
                };
                sink.push_line(format!(
                    "EXTREMAL source={} target={}",
                    show(g.extremal_node(ExtremalSide::Source)),
                    show(g.extremal_node(ExtremalSide::Target))
                ));
            }
            "condensation" => {
                if let Some(order) = sink.catch(g.condensation())? {
                    let blocks: Vec<String> =
                        order.blocks().iter().map(|blk| fmt_words(blk)).collect();
                    sink.push_line(format!(
                        "CONDENSATION blocks={} order={}",
                        blocks.len(),
                        blocks.join(">")
                    ));
                }
            }
            "dominating" => {
                if let Some(ds) = sink.catch(g.dominating_set())? {
                    let bound = (usize::BITS - g.len().leading_zeros()) as usize;
                    sink.push_line(format!(
                        "DOMINATING size={} bound={bound} members={}",
                        ds.len(),
                        fmt_words(&ds)
                    ));
                    let report = if ds.len() <= bound {
                        PropertyReport::pass("dominating-bound", g.name(), g.len() as u64, 0)
                    } else {
                        PropertyReport::fail(
                            "dominating-bound",
                            g.name(),
                            g.len() as u64,
                            0,
                            Witness::Split {
                                what: format!("size {} exceeds bound {bound}", ds.len()),
                            },
                        )
                    };
                    sink.push_report(&report);
                }
            }
            "equivalences" => {
                sink.push_caught(g.verify_equivalences(cli.seed).map(|ar| ar.report))?
            }
            other => bail!(
                "unknown analysis \"{other}\" (expected classify, tournament, complete, transitive, cycle, extremal, condensation, dominating, equivalences)"
            ),
        }
    }
    Ok(())
}

fn run_advice(
    sink: &mut Sink,
    f: &MultiMap,
    b: &TargetSet,
    upto: u8,
    kind: KindArg,
    emit_cap: Option<usize>,
) -> Result<()> {
    let kind = match kind {
        KindArg::P => AdviceKind::PSource,
        KindArg::Np => AdviceKind::NpSourceClique,
        KindArg::Conp => AdviceKind::CoNpTargetClique,
        KindArg::Strong => AdviceKind::StrongSource,
    };
    let u = f.universe();
    for n in 0..=upto {
        let extracted = match kind {
            AdviceKind::PSource => extract_source_advice(f, b, n, false),
            AdviceKind::StrongSource => extract_source_advice(f, b, n, true),
            AdviceKind::NpSourceClique => extract_clique_advice(f, b, n, CliqueSide::Np),
            AdviceKind::CoNpTargetClique => extract_clique_advice(f, b, n, CliqueSide::CoNp),
        };
        let Some(pkg) = sink
            .catch(extracted)
            .with_context(|| format!("advice extraction at n={n}"))?
        else {
            return Ok(());
        };
        let words: Vec<Word> = if kind == AdviceKind::StrongSource {
            u.upto(n)?.collect()
        } else {
            u.exact(n)?.collect()
        };
        let mut ok = true;
        for x in words {
            if decode(&pkg, x, f)? != b.contains(x) {
                ok = false;
                break;
            }
        }
        if !ok {
            sink.fail();
        }
        sink.push_line(format!(
            "ADVICE n={n} word={} verify={}",
            pkg.advice,
            if ok { "PASS" } else { "FAIL" }
        ));
        if let Some(cap) = emit_cap {
            for code in decoder_members(&pkg, f, cap)? {
                sink.push_line(format!("MEMBER n={n} code={code}"));
            }
        }
    }
    Ok(())
}

fn parse_hint(hint: Option<&str>) -> Result<HintSet> {
    let Some(hint) = hint else {
        bail!("--hint is required for the hinted op (even, odd, all, or list:2,4)");
    };
    match hint {
        "even" => Ok(HintSet::evens()),
        "odd" => Ok(HintSet::odds()),
        "all" => Ok(HintSet::all()),
        other => {
            let Some(rest) = other.strip_prefix("list:") else {
                bail!("unknown hint \"{other}\" (expected even, odd, all, or list:2,4)");
            };
            let lengths: Result<Vec<u8>, _> =
                rest.split(',').map(|t| t.trim().parse::<u8>()).collect();
            Ok(HintSet::from_lengths(
                lengths.with_context(|| format!("hint lengths \"{rest}\""))?,
            )?)
        }
    }
}

fn run_witness(
    sink: &mut Sink,
    f: &MultiMap,
    b: Option<&TargetSet>,
    upto: u8,
    op: OpArg,
    hint: Option<&str>,
    mode: ModeArg,
) -> Result<()> {
    let u = f.universe();
    match op {
        OpArg::Score => {
            for n in 0..=upto {
                for x in u.exact(n)? {
                    let Some(s) = sink.catch(score(f, x))? else { return Ok(()) };
                    sink.push_line(format!("SCORE n={n} word={x} score={s}"));
                }
            }
        }
        OpArg::Top => {
            for n in 0..=upto {
                let Some(scan) = sink.catch(top_string(f, n, TopMethod::Scan))? else {
                    return Ok(());
                };
                let Some(prefix) = sink.catch(top_string(f, n, TopMethod::PrefixSearch))? else {
                    return Ok(());
                };
                let agree = scan == prefix;
                if !agree {
                    sink.fail();
                }
                sink.push_line(format!(
                    "TOP n={n} scan={scan} prefix={prefix} agree={}",
                    if agree { "PASS" } else { "FAIL" }
                ));
            }
        }
        OpArg::Cover => match mode {
            ModeArg::Greedy => {
                let b = require_set(b, "cover with --mode greedy")?;
                for n in 0..=upto {
                    if b.count_exact(n)? == 0 {
                        sink.push_line(format!("COVER n={n} mode=greedy skipped=empty-slice"));
                        continue;
                    }
                    let Some(cover) = sink.catch(dominating_cover(f, b, n))? else {
                        return Ok(());
                    };
                    sink.push_line(format!(
                        "COVER n={n} mode=greedy size={} members={}",
                        cover.members.len(),
                        fmt_words(&cover.members)
                    ));
                }
            }
            ModeArg::Lexmax => {
                for n in 0..=upto {
                    let Some(found) = sink.catch(lexmax_cover(f, n))? else { return Ok(()) };
                    match found {
                        Some(cover) => sink.push_line(format!(
                            "COVER n={n} mode=lexmax size={} members={}",
                            cover.members.len(),
                            fmt_words(&cover.members)
                        )),
                        None => sink.push_line(format!("COVER n={n} mode=lexmax none=true")),
                    }
                }
            }
        },
        OpArg::Print => {
            let b = require_set(b, "print")?;
            let source = match mode {
                ModeArg::Greedy => CoverSource::Greedy,
                ModeArg::Lexmax => CoverSource::LexMax,
            };
            let Some((members, queries)) = sink.catch(printable_subset(f, b, upto, source))?
            else {
                return Ok(());
            };
            for w in &members {
                sink.push_line(format!("MEMBER word={w}"));
            }
            let mode_name = match mode {
                ModeArg::Greedy => "greedy",
                ModeArg::Lexmax => "lexmax",
            };
            sink.push_line(format!(
                "PRINT mode={mode_name} count={} queries={queries}",
                members.len()
            ));
        }
        OpArg::Hinted => {
            let b = require_set(b, "hinted")?;
            let hints = parse_hint(hint)?;
            let Some(members) = sink.catch(hinted_subset(f, b, &hints, upto))? else {
                return Ok(());
            };
            for w in &members {
                sink.push_line(format!("MEMBER word={w}"));
            }
            sink.push_line(format!("HINTED count={}", members.len()));
        }
    }
    Ok(())
}

fn run_enumerate(
    sink: &mut Sink,
    cli: &Cli,
    size: u8,
    mode: EnumModeArg,
    commutative: bool,
    total: bool,
) -> Result<()> {
    let u = selectivity::Universe::new(cli.maxlen)?;
    let domain: Vec<Word> = u.words().take(usize::from(size)).collect();
    if domain.len() < usize::from(size) {
        bail!("universe with maxlen {} has only {} words", cli.maxlen, domain.len());
    }
    let mode = match mode {
        EnumModeArg::Single => ValueMode::Single,
        EnumModeArg::Multi => ValueMode::Multi,
    };
    let stream = enumerate_class(&domain, mode, commutative, total)?;
    let count = stream.total_count();
    if count > ENUMERATION_CAP {
        bail!("class of {count} functions exceeds the enumeration cap {ENUMERATION_CAP}");
    }
    // the digraph route (transitivity of the induced graph) characterizes
    // associativity only for commutative total functions
    let route_applies = commutative && total;
    let mut associative = 0u64;
    let mut transitive = 0u64;
    let mut agree = true;
    for item in stream {
        let f = item?;
        let direct = is_associative_on(&f, &domain)?.pass;
        associative += u64::from(direct);
        if route_applies {
            let route = Digraph::induce(&f, &domain)?.is_transitive().pass;
            transitive += u64::from(route);
            agree &= route == direct;
        }
    }
    sink.push_line(format!("associative {associative} / {count}"));
    if route_applies {
        sink.push_line(format!("transitive-route {transitive} / {count}"));
        if !agree {
            sink.fail();
        }
        sink.push_line(format!("AGREEMENT routes={}", if agree { "PASS" } else { "FAIL" }));
    }
    Ok(())
}

fn letter_set(words: &[Word], names: &[(Word, &str)]) -> String {
    let mut s = String::from("{");
    for (i, w) in words.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(names.iter().find(|(v, _)| v == w).map_or("?", |(_, n)| n));
    }
    s.push('}');
    s
}

fn run_demo(sink: &mut Sink) -> Result<()> {
    // a commutativized ambiguous function that loses associativity
    let (f, [a, b, c]) = ambiguous_total_triple()?;
    let names = [(a, "a"), (b, "b"), (c, "c")];
    let fp = minmax_commutativize(&f);
    let (left, right) = assoc_sides(&fp, a, c, b)?;
    sink.push_line(format!("DEMO ambiguous-triple a={a} b={b} c={c}"));
    sink.push_line(format!("  minmax f'(a, f'(c, b)) = {}", letter_set(&left, &names)));
    sink.push_line(format!("  minmax f'(f'(a, c), b) = {}", letter_set(&right, &names)));
    sink.push_line(format!("  {} \u{2260} {}", letter_set(&left, &names), letter_set(&right, &names)));
    if left != vec![a, c] || right != vec![a, b, c] {
        sink.fail();
    }

    // a sparse partial function that defeats both commutativizations
    let (g, [a, b, c]) = sparse_partial_triple()?;
    let names = [(a, "a"), (b, "b"), (c, "c")];
    for (tag, h) in [("minmax", minmax_commutativize(&g)), ("union", union_commutativize(&g))] {
        let (left, right) = assoc_sides(&h, a, b, c)?;
        sink.push_line(format!("DEMO sparse-triple-{tag} a={a} b={b} c={c}"));
        sink.push_line(format!("  {tag} f(a, f(b, c)) = {}", letter_set(&left, &names)));
        sink.push_line(format!("  {tag} f(f(a, b), c) = {}", letter_set(&right, &names)));
        sink.push_line(format!(
            "  {} \u{2260} {}",
            letter_set(&left, &names),
            letter_set(&right, &names)
        ));
        if left != vec![c] || !right.is_empty() {
            sink.fail();
        }
    }
    Ok(())
}
