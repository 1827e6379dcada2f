use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use tensorgp::format::{
    catalog_to_raw, check_report_to_raw, compat_to_raw, field_to_raw, gp_to_raw, special_report_to_raw, Bundle,
    RawCheckReport, RawField, RawHomology, RawOracle, ReportDoc,
};
use tensorgp::resolution::{
    check_compatibility, check_complete, check_strongly_gp, extract_gp, first_disagreement, lift_resolution,
    oracle_positions, CheckReport, ResolutionWindow,
};
use tensorgp::search::{hunt_strongly_gp, random_window, WindowShape, DEFAULT_BUDGET};
use tensorgp::special_rings::{
    morita_checks, morita_to_trivext, mu_transport, triangular_as_conditions, triangular_checks, trivext_checks,
    SpecialReport,
};
use tensorgp::{Error, FieldSpec, Fp, Scalar, Q};

#[derive(Parser, Debug)]
#[command(name = "tensorgp", version, about = "Checks complete projective resolutions over tensor rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Interpret the input over this field instead of the one it declares (a prime or `Q`).
    #[arg(long, global = true)]
    field: Option<String>,
    /// Treat the input window or complex as periodic with this period.
    #[arg(long, global = true)]
    period: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Suppress the summary table on standard error.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse bundles and check algebra, bimodule and nilpotency data.
    Validate { paths: Vec<PathBuf> },
    /// Check C1-C3 on a window.
    Check {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Conditions)]
        mode: Mode,
    },
    /// Report ker α^k of a window as a T-module.
    ExtractGp {
        path: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
    },
    /// Check SC1-SC3 for a period-1 window.
    Strong { path: PathBuf },
    /// Check the compatibility conditions for a complex of projective R-modules.
    Compat { path: PathBuf },
    /// Lift a complete resolution over R to a window over T.
    Lift { path: PathBuf },
    /// Run a specialized checker next to the generic one.
    Specialize {
        #[arg(value_enum)]
        kind: Kind,
        path: PathBuf,
    },
    /// Enumerate strongly Gorenstein projective candidates exhaustively.
    Hunt {
        path: PathBuf,
        #[arg(long, default_value_t = 1)]
        max_rank: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Draw a seeded random window over the ring of a bundle.
    Generate {
        path: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated ranks of the objects.
        #[arg(long, value_delimiter = ',', default_value = "1,1,1")]
        ranks: Vec<usize>,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        lo: i64,
        /// Draw each map to compose to zero with the previous one.
        #[arg(long)]
        chain: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// The three conditions C1-C3.
    #[value(alias = "paper")]
    Conditions,
    Oracle,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Trivext,
    Morita,
    Triangular,
}

const PASS: u8 = 0;
const FAIL: u8 = 1;
const INVALID: u8 = 2;
const INTERNAL: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotComplete(_) | Error::NotCompatible { .. } => FAIL,
        Error::BudgetExceeded { .. } | Error::Internal(_) => INTERNAL,
        _ => INVALID,
    }
}

struct Outcome {
    doc: ReportDoc,
    code: u8,
    summary: Vec<String>,
    /// Printed instead of the report, for commands that produce an input bundle.
    bundle: Option<Bundle>,
}

impl Outcome {
    fn new(doc: ReportDoc) -> Self {
        let code = if doc.passed { PASS } else { FAIL };
        Outcome {
            doc,
            code,
            summary: Vec::new(),
            bundle: None,
        }
    }
}

fn read_bundle(path: &Path, cli: &Cli) -> Result<Bundle, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let mut b = Bundle::parse(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    if let Some(f) = &cli.field {
        let spec: FieldSpec = f.parse().map_err(|e| Error::Parse(format!("--field: {e}")))?;
        b.field = field_to_raw(spec);
    }
    if let Some(p) = cli.period {
        if let Some(w) = &mut b.window {
            w.period = Some(p);
        }
        if let Some(c) = &mut b.complex {
            c.period = Some(p);
        }
        if let Some(w) = b.morita.as_mut().and_then(|m| m.window.as_mut()) {
            w.period = Some(p);
        }
    }
    Ok(b)
}

fn field_of(b: &Bundle) -> Result<FieldSpec, Error> {
    b.field_spec()
}

fn table(report: &RawCheckReport) -> Vec<String> {
    let Some(first) = report.positions.first() else {
        return vec![format!("no interior positions ({})", report.scope)];
    };
    let mut out = Vec::new();
    let mut head = format!("{:>6}", "k");
    for v in &first.verdicts {
        head.push_str(&format!("  {:>14}", v.condition));
    }
    out.push(head);
    for p in &report.positions {
        let mut line = format!("{:>6}", p.k);
        for v in &p.verdicts {
            line.push_str(&format!("  {:>14}", if v.passed { "pass" } else { "FAIL" }));
        }
        out.push(line);
    }
    out.push(format!(
        "scope {}: {}",
        report.scope,
        if report.passed { "pass" } else { "FAIL" }
    ));
    out
}

fn generic_rows<S>(r: &CheckReport<S>) -> Vec<(i64, [bool; 3])> {
    r.positions
        .iter()
        .map(|p| (p.k, [p.c1.passed(), p.c2.passed(), p.c3.passed()]))
        .collect()
}

fn special_rows<S>(r: &SpecialReport<S>) -> Vec<(i64, [bool; 3])> {
    r.positions
        .iter()
        .map(|p| {
            let v: Vec<bool> = p.verdicts.iter().map(|v| v.passed()).collect();
            (p.k, [v[0], v[1], v[2]])
        })
        .collect()
}

fn run<S: Scalar>(cli: &Cli, bundles: Vec<Bundle>) -> Result<Outcome, Error> {
    let field = S::field();
    let bundle = || bundles.first().cloned().ok_or_else(|| Error::Parse("no input given".into()));
    match &cli.command {
        Command::Validate { .. } => {
            let mut lines = Vec::new();
            for b in &bundles {
                b.expect_field::<S>()?;
                if b.ring.is_some() {
                    let ring = b.tensor_ring::<S>()?;
                    lines.push(format!(
                        "ring dim {}, bimodule dim {}, nilpotency {}",
                        ring.base().dim(),
                        ring.bimodule().dim(),
                        ring.nilpotency()
                    ));
                    if b.window.is_some() {
                        let w = b.resolution_window(&ring)?;
                        lines.push(format!("window with {} objects ({})", w.objects().len(), w.scope()));
                    }
                    if b.complex.is_some() {
                        let c = b.r_complex(ring.base())?;
                        lines.push(format!("complex with {} objects", c.objects.len()));
                    }
                }
                if b.morita.is_some() {
                    let (d, w) = b.morita_data::<S>()?;
                    lines.push(format!(
                        "morita data: dim A {}, dim B {}, dim V {}, dim U {}{}",
                        d.a.dim(),
                        d.b.dim(),
                        d.v.dim(),
                        d.u.dim(),
                        if w.is_some() { ", with window" } else { "" }
                    ));
                }
            }
            let mut doc = ReportDoc::new("validate", field, true);
            doc.message = Some(format!("{} bundle(s) valid", bundles.len()));
            let mut out = Outcome::new(doc);
            out.summary = lines;
            Ok(out)
        }
        Command::Check { mode, .. } => {
            let b = bundle()?;
            let ring = b.tensor_ring::<S>()?;
            let w = b.resolution_window(&ring)?;
            check_window(&w, *mode, field)
        }
        Command::ExtractGp { k, .. } => {
            let b = bundle()?;
            let ring = b.tensor_ring::<S>()?;
            let w = b.resolution_window(&ring)?;
            let report = check_complete(&w)?;
            let k = match k {
                Some(k) => *k,
                None => *w
                    .interior()
                    .first()
                    .ok_or_else(|| Error::InvalidWindow("window has no interior index".into()))?,
            };
            let g = extract_gp(&w, k)?;
            let raw = check_report_to_raw(&report);
            let mut doc = ReportDoc::new("extract-gp", field, report.is_complete_resolution());
            if !doc.passed {
                doc.message = Some("window is not certified as a complete resolution".into());
            }
            doc.gp = Some(gp_to_raw(k, &g));
            let mut out = Outcome::new(doc);
            out.summary = table(&raw);
            out.summary.push(format!("ker α^{k}: dim {}, u = 0: {}", g.module.dim(), g.module.u.is_zero()));
            out.doc.check = Some(raw);
            Ok(out)
        }
        Command::Strong { .. } => {
            let b = bundle()?;
            let ring = b.tensor_ring::<S>()?;
            let w = b.resolution_window(&ring)?;
            if w.period() != Some(1) {
                return Err(Error::InvalidWindow("strong needs a period-1 window".into()));
            }
            let report = check_strongly_gp(ring, w.objects()[0].clone(), w.maps()[0].clone())?;
            let g = extract_gp(&w, w.lo())?;
            let raw = check_report_to_raw(&report);
            let mut doc = ReportDoc::new("strong", field, report.passed());
            doc.gp = Some(gp_to_raw(w.lo(), &g));
            let mut out = Outcome::new(doc);
            out.summary = table(&raw);
            out.doc.check = Some(raw);
            Ok(out)
        }
        Command::Compat { .. } => {
            let b = bundle()?;
            let ring = b.tensor_ring::<S>()?;
            let c = b.r_complex(ring.base())?;
            let report = check_compatibility(&ring, &c)?;
            let mut doc = ReportDoc::new("compat", field, report.passed());
            let mut summary = vec![format!("levels checked: {:?}", report.levels)];
            match report.first_failure() {
                Some(f) => {
                    let m = format!("fails at i = {} ({} at k = {})", f.i, f.kind, f.k);
                    summary.push(m.clone());
                    doc.message = Some(m);
                }
                None => summary.push("compatible".into()),
            }
            doc.compatibility = Some(compat_to_raw(&report));
            let mut out = Outcome::new(doc);
            out.summary = summary;
            Ok(out)
        }
        Command::Lift { .. } => {
            let b = bundle()?;
            let ring = b.tensor_ring::<S>()?;
            let c = b.r_complex(ring.base())?;
            let lifted = lift_resolution(ring.clone(), &c)?;
            let report = check_complete(&lifted)?;
            let raw = check_report_to_raw(&report);
            let mut doc = ReportDoc::new("lift", field, report.is_complete_resolution());
            doc.output = Some(Bundle::from_window(&ring, Some(&lifted)));
            let mut out = Outcome::new(doc);
            out.summary = table(&raw);
            out.doc.check = Some(raw);
            Ok(out)
        }
        Command::Specialize { kind, .. } => {
            let b = bundle()?;
            specialize::<S>(&b, *kind)
        }
        Command::Hunt { max_rank, budget, .. } => {
            let b = bundle()?;
            let ring = b.tensor_ring::<S>()?;
            let catalog = hunt_strongly_gp(&ring, *max_rank, *budget)?;
            let mut doc = ReportDoc::new("hunt", field, true);
            let passing = catalog.passing().count();
            doc.message = Some(format!("{} classes, {passing} passing", catalog.entries.len()));
            let summary = catalog
                .entries
                .iter()
                .map(|e| {
                    format!(
                        "rank {}  kernel dim {:>3}  {:>4}  count {}",
                        e.rank,
                        e.kernel_dim,
                        if e.passes { "pass" } else { "fail" },
                        e.count
                    )
                })
                .collect();
            doc.catalog = Some(catalog_to_raw(&catalog));
            let mut out = Outcome::new(doc);
            out.summary = summary;
            Ok(out)
        }
        Command::Generate {
            seed, ranks, lo, chain, ..
        } => {
            let b = bundle()?;
            let ring = b.tensor_ring::<S>()?;
            let shape = WindowShape {
                lo: *lo,
                ranks: ranks.clone(),
                period: cli.period,
            };
            let w = random_window(&ring, *seed, &shape, *chain)?;
            let mut out = Outcome::new(ReportDoc::new("generate", field, true));
            out.bundle = Some(Bundle::from_window(&ring, Some(&w)));
            out.summary.push(format!("window with {} objects ({})", w.objects().len(), w.scope()));
            Ok(out)
        }
    }
}

fn check_window<S: Scalar>(w: &ResolutionWindow<S>, mode: Mode, field: FieldSpec) -> Result<Outcome, Error> {
    let mode_name = format!("{mode:?}").to_lowercase();
    let report = (mode != Mode::Oracle).then(|| check_complete(w)).transpose()?;
    let oracle = (mode != Mode::Conditions).then(|| oracle_positions(w)).transpose()?;
    let oracle_pass = oracle.as_ref().map(|o| o.iter().all(|p| p.exact && p.homology == 0));
    let passed = report.as_ref().is_none_or(CheckReport::passed) && oracle_pass.unwrap_or(true);
    let mut doc = ReportDoc::new("check", field, passed);
    doc.mode = Some(mode_name);
    let mut summary = Vec::new();
    let mut code = None;
    if let Some(r) = &report {
        let raw = check_report_to_raw(r);
        summary = table(&raw);
        doc.check = Some(raw);
    }
    if let Some(o) = &oracle {
        let agrees = report.as_ref().map(|r| first_disagreement(r, o));
        if let Some(Some(k)) = agrees {
            let m = format!("checker/oracle disagreement at k = {k}");
            summary.push(m.clone());
            doc.message = Some(m);
            code = Some(INTERNAL);
        }
        for p in o {
            summary.push(format!(
                "oracle k = {:>3}: exact {}, Hom homology {}",
                p.k, p.exact, p.homology
            ));
        }
        doc.oracle = Some(RawOracle {
            exact_positions: o.iter().filter(|p| p.exact).map(|p| p.k).collect(),
            homology: o.iter().map(|p| RawHomology { k: p.k, dim: p.homology }).collect(),
            agrees: agrees.map(|d| d.is_none()),
        });
    }
    let mut out = Outcome::new(doc);
    if let Some(c) = code {
        out.code = c;
    }
    out.summary = summary;
    Ok(out)
}

fn specialize<S: Scalar>(b: &Bundle, kind: Kind) -> Result<Outcome, Error> {
    let field = S::field();
    let name = format!("specialize-{kind:?}").to_lowercase();
    let (special, generic_report, special_rows, transported) = match kind {
        Kind::Trivext => {
            let ring = b.tensor_ring::<S>()?;
            let w = b.resolution_window(&ring)?;
            let s = trivext_checks(&w)?;
            let g = check_complete(&w)?;
            let rows = generic_rows(&s);
            (check_report_to_raw(&s), g, rows, None)
        }
        Kind::Morita | Kind::Triangular => {
            let (d, w) = b.morita_data::<S>()?;
            let w = w.ok_or_else(|| Error::InvalidWindow("morita section has no window".into()))?;
            let t = mu_transport(&d, &w)?;
            let g = check_complete(&t)?;
            let ring = Arc::new(morita_to_trivext(&d)?.ring()?);
            let out = Bundle::from_window(&ring, Some(&t));
            if kind == Kind::Morita {
                let s = morita_checks(&d, &w)?;
                (special_report_to_raw(&s), g, special_rows(&s), Some(out))
            } else {
                if d.u.dim() != 0 {
                    return Err(Error::InvalidBimodule("triangular specialization needs U = 0".into()));
                }
                let s = triangular_checks(&d, &w)?;
                let m = morita_checks(&d, &w)?;
                let rows: Vec<(i64, [bool; 3])> =
                    s.positions.iter().map(|p| (p.k, triangular_as_conditions(p))).collect();
                if rows != special_rows(&m) {
                    return Err(Error::Internal("triangular and Morita checkers disagree".into()));
                }
                (special_report_to_raw(&s), g, rows, Some(out))
            }
        }
    };
    let agrees = special_rows == generic_rows(&generic_report);
    let generic = check_report_to_raw(&generic_report);
    let mut doc = ReportDoc::new(&name, field, special.passed);
    doc.agrees = Some(agrees);
    doc.output = transported;
    let mut summary = table(&special);
    summary.push("generic:".into());
    summary.extend(table(&generic));
    summary.push(format!("verdict tables agree: {agrees}"));
    doc.check = Some(special);
    doc.generic = Some(generic);
    let mut out = Outcome::new(doc);
    if !agrees {
        out.doc.message = Some("specialized and generic verdicts disagree".into());
        out.code = INTERNAL;
    }
    out.summary = summary;
    Ok(out)
}

fn dispatch(cli: &Cli, bundles: Vec<Bundle>, field: FieldSpec) -> Result<Outcome, Error> {
    match field {
        FieldSpec::Prime(2) => run::<Fp<2>>(cli, bundles),
        FieldSpec::Prime(3) => run::<Fp<3>>(cli, bundles),
        FieldSpec::Prime(5) => run::<Fp<5>>(cli, bundles),
        FieldSpec::Prime(7) => run::<Fp<7>>(cli, bundles),
        FieldSpec::Prime(11) => run::<Fp<11>>(cli, bundles),
        FieldSpec::Prime(13) => run::<Fp<13>>(cli, bundles),
        FieldSpec::Rational => run::<Q>(cli, bundles),
        FieldSpec::Prime(p) => Err(Error::Parse(format!(
            "F_{p} is not compiled in (supported: 2, 3, 5, 7, 11, 13, Q)"
        ))),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Check { .. } => "check",
        Command::ExtractGp { .. } => "extract-gp",
        Command::Strong { .. } => "strong",
        Command::Compat { .. } => "compat",
        Command::Lift { .. } => "lift",
        Command::Specialize { .. } => "specialize",
        Command::Hunt { .. } => "hunt",
        Command::Generate { .. } => "generate",
    }
}

fn paths(cli: &Cli) -> Vec<&Path> {
    match &cli.command {
        Command::Validate { paths } => paths.iter().map(PathBuf::as_path).collect(),
        Command::Check { path, .. }
        | Command::ExtractGp { path, .. }
        | Command::Strong { path }
        | Command::Compat { path }
        | Command::Lift { path }
        | Command::Specialize { path, .. }
        | Command::Hunt { path, .. }
        | Command::Generate { path, .. } => vec![path.as_path()],
    }
}

fn execute(cli: &Cli) -> Result<Outcome, (Error, Option<FieldSpec>)> {
    let bundles = paths(cli)
        .into_iter()
        .map(|p| read_bundle(p, cli))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| (e, None))?;
    let field = match bundles.first() {
        Some(b) => field_of(b).map_err(|e| (e, None))?,
        None => return Err((Error::Parse("no input given".into()), None)),
    };
    if let Some(other) = bundles.iter().find_map(|b| match field_of(b) {
        Ok(f) if f == field => None,
        Ok(f) => Some(Error::Parse(format!("bundles mix fields {field} and {f}"))),
        Err(e) => Some(e),
    }) {
        return Err((other, Some(field)));
    }
    dispatch(cli, bundles, field).map_err(|e| (e, Some(field)))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err((e, field)) => {
            let mut doc = ReportDoc::new(command_name(&cli.command), field.unwrap_or(FieldSpec::Prime(2)), false);
            if field.is_none() {
                doc.field = RawField::Name("unknown".into());
            }
            doc.message = Some(e.to_string());
            Outcome {
                doc,
                code: exit_code(&e),
                summary: vec![format!("error: {e}")],
                bundle: None,
            }
        }
    };
    if !cli.quiet {
        for line in &outcome.summary {
            eprintln!("{line}");
        }
    }
    let text = match outcome.bundle.as_ref().map_or_else(|| outcome.doc.to_toml(), Bundle::to_toml) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(INTERNAL);
        }
    };
    match &cli.output {
        Some(p) => {
            if let Err(e) = fs::write(p, &text) {
                eprintln!("error: cannot write {}: {e}", p.display());
                return ExitCode::from(INVALID);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(outcome.code)
}
