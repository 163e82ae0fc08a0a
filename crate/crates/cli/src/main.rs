//! `obstruction-lab`: command-line front end for the obstruction engines.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use obstruction_core::amap::{amap_report, check_condition, AmapError, Evidence, Ingredient};
use obstruction_core::chains::ChainError;
use obstruction_core::forms::{FormError, FormFile, SearchOptions};
use obstruction_core::gamma::{verify_tertiary, GammaError};
use obstruction_core::groups::{GroupError, GroupSpec};
use obstruction_core::homology::HomologyError;
use obstruction_core::report::{
    ahss_report, d2_report, evenness_report, full_report, homology_report, parse_coefficients, ReportError,
};
use obstruction_core::steenrod::SteenrodError;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "obstruction-lab", version, about = "Group homology, d2 differentials, the A map and evenness of forms")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Largest m for the quotients Z -> Z/2^m (default: largest finite 2-exponent + 2).
    #[arg(long, global = true, value_name = "M")]
    max_quotient_exponent: Option<u32>,
    /// Support window for evenness witnesses over a Z factor.
    #[arg(long, global = true, value_name = "B", default_value_t = 8)]
    max_support: i64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Homology of a group with integral or cyclic coefficients.
    Homology {
        group: String,
        /// Z, Z2 or Z<m>.
        #[arg(long, default_value = "Z")]
        coefficients: String,
        #[arg(long)]
        degree: usize,
    },
    /// The differential Sq2 o red2 out of H_4 or H_5.
    D2 {
        group: String,
        #[arg(long, value_parser = clap::value_parser!(u8).range(4..=5))]
        degree: u8,
    },
    /// The forms A(x) for the basis classes of H_3(G;Z/2).
    Amap { group: String },
    /// Decide whether a hermitian form read from a JSON file is even.
    Evenness {
        group: String,
        #[arg(long)]
        form: PathBuf,
    },
    /// Exactness of H5(G;Z) -> H3(G;Z/2) -> Tate at the middle term.
    Condition { group: String },
    /// Which criterion settles the tertiary invariant.
    Tertiary { group: String },
    /// Low-degree corner of the spin bordism spectral sequence.
    Ahss { group: String },
    /// Everything above for one group.
    Report { group: String },
}

/// Failure classes, each with its own exit status.
enum Failure {
    Usage(String),
    Unsupported(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Unsupported(_) => 3,
            Failure::Internal(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Unsupported(m) | Failure::Internal(m) => m,
        }
    }
}

fn from_group(e: &GroupError) -> Failure {
    match e {
        GroupError::MultipleInfinite | GroupError::BadQuaternion(_) | GroupError::QuaternionProduct | GroupError::Infinite(_) => {
            Failure::Unsupported(e.to_string())
        }
        _ => Failure::Usage(e.to_string()),
    }
}

fn from_homology(e: &HomologyError) -> Failure {
    match e {
        HomologyError::NotAComplex(_) | HomologyError::Shape(_) => Failure::Internal(e.to_string()),
        _ => Failure::Usage(e.to_string()),
    }
}

fn from_chain(e: &ChainError) -> Failure {
    match e {
        ChainError::NotAComplex(_) => Failure::Internal(e.to_string()),
        ChainError::Unsupported(_) => Failure::Unsupported(e.to_string()),
        ChainError::Homology(h) => from_homology(h),
        _ => Failure::Usage(e.to_string()),
    }
}

fn from_steenrod(e: &SteenrodError) -> Failure {
    match e {
        SteenrodError::Unsupported(_) | SteenrodError::NonzeroMod2(_) => Failure::Unsupported(e.to_string()),
        SteenrodError::Degree(_) => Failure::Usage(e.to_string()),
        SteenrodError::Chain(c) => from_chain(c),
        SteenrodError::Homology(h) => from_homology(h),
    }
}

fn from_form(e: &FormError) -> Failure {
    match e {
        FormError::Internal(_) => Failure::Internal(e.to_string()),
        FormError::Group(g) => from_group(g),
        _ => Failure::Usage(e.to_string()),
    }
}

fn from_amap(e: &AmapError) -> Failure {
    match e {
        AmapError::Internal(_) => Failure::Internal(e.to_string()),
        AmapError::Unsupported(_) | AmapError::TooLarge(_) => Failure::Unsupported(e.to_string()),
        AmapError::NotALift => Failure::Usage(e.to_string()),
        AmapError::Form(f) => from_form(f),
        AmapError::Chain(c) => from_chain(c),
        AmapError::Steenrod(s) => from_steenrod(s),
        AmapError::Group(g) => from_group(g),
    }
}

fn from_gamma(e: &GammaError) -> Failure {
    match e {
        GammaError::Internal(_) => Failure::Internal(e.to_string()),
        GammaError::Infinite(_) => Failure::Unsupported(e.to_string()),
        GammaError::Chain(c) => from_chain(c),
        GammaError::Steenrod(s) => from_steenrod(s),
    }
}

fn from_report(e: &ReportError) -> Failure {
    match e {
        ReportError::Chain(c) => from_chain(c),
        ReportError::Homology(h) => from_homology(h),
        ReportError::Steenrod(s) => from_steenrod(s),
        ReportError::Group(g) => from_group(g),
        ReportError::Amap(a) => from_amap(a),
        ReportError::Gamma(g) => from_gamma(g),
        ReportError::Form(f) => from_form(f),
    }
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce(&T) -> String) -> Result<String, Failure> {
    if json {
        serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.to_string()))
    } else {
        Ok(text(value))
    }
}

fn ingredients_text(out: &mut String, list: &[Ingredient]) {
    for i in list {
        let tag = serde_json::to_value(i.tag).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        let _ = writeln!(out, "  [{tag}] {}", i.fact);
    }
}

fn evidence_text(e: &Evidence) -> String {
    match e {
        Evidence::Witness { rows } => format!("witness Q = {}", serde_json::to_string(rows).unwrap_or_default()),
        Evidence::Certificate { kind, detail } => format!("{kind}: {detail}"),
        Evidence::SearchBound { window, max_exponent } => {
            format!("no witness with Z-support in [-{window}, {window}], no odd quotient up to Z/2^{max_exponent}")
        }
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let opts = SearchOptions {
        max_support: cli.max_support,
        max_quotient_exponent: cli.max_quotient_exponent,
    };
    let parse = |s: &str| -> Result<GroupSpec, Failure> { s.parse::<GroupSpec>().map_err(|e| from_group(&e)) };
    let json = cli.json;
    match &cli.command {
        Command::Homology { group, coefficients, degree } => {
            let g = parse(group)?;
            let modulus = parse_coefficients(coefficients)
                .ok_or_else(|| Failure::Usage(format!("unknown coefficients `{coefficients}`; use Z, Z2 or Z<m>")))?;
            let r = homology_report(&g, modulus, *degree).map_err(|e| from_report(&e))?;
            emit(json, &r, |r| format!("H_{}({}; {}) = {}", r.degree, r.group, r.coefficients, r.result))
        }
        Command::D2 { group, degree } => {
            let g = parse(group)?;
            let r = d2_report(&g, *degree as usize).map_err(|e| from_report(&e))?;
            emit(json, &r, |r| {
                let mut s = String::new();
                let p = r.degree;
                let _ = writeln!(s, "d2: H_{p}({}; Z) = {} -> H_{}({}; Z/2)", r.reduced_group, r.source, p - 2, r.reduced_group);
                let _ = writeln!(s, "target basis: {}", r.target_basis.join(", "));
                for row in &r.matrix {
                    let cells: Vec<String> = row.iter().map(u8::to_string).collect();
                    let _ = writeln!(s, "  [{}]", cells.join(" "));
                }
                let image = if r.image.is_empty() { "0".to_string() } else { r.image.join(", ") };
                let _ = writeln!(s, "image: {image}");
                let _ = write!(s, "kernel: {}", r.kernel);
                s
            })
        }
        Command::Amap { group } => {
            let g = parse(group)?;
            let r = amap_report(&g).map_err(|e| from_amap(&e))?;
            emit(json, &r, |r| {
                let mut s = format!("A on H_3({}; Z/2)\n", r.reduced_group);
                for c in &r.classes {
                    let w = serde_json::to_string(&c.boundary_image).unwrap_or_default();
                    let _ = writeln!(s, "{}: w = {w}, weakly even: {}", c.label, c.weakly_even);
                    for row in &c.form {
                        let _ = writeln!(s, "  {}", serde_json::to_string(row).unwrap_or_default());
                    }
                }
                s.trim_end().to_string()
            })
        }
        Command::Evenness { group, form } => {
            let g = parse(group)?;
            let text = std::fs::read_to_string(form)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", form.display())))?;
            let file: FormFile =
                serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("bad form file: {e}")))?;
            let r = evenness_report(&g, &file, &opts).map_err(|e| from_report(&e))?;
            emit(json, &r, |r| format!("{}\n{}", r.verdict, evidence_text(&r.witness_or_certificate)))
        }
        Command::Condition { group } => {
            let g = parse(group)?;
            let r = check_condition(&g, &opts).map_err(|e| from_amap(&e))?;
            emit(json, &r, |r| {
                let mut s = String::new();
                let _ = writeln!(s, "group {} (2-primary part {})", r.group, r.reduced_group);
                let _ = writeln!(s, "H_3(G; Z/2) basis: {}", r.basis.join(", "));
                let _ = writeln!(s, "image of d2: {} generator(s), kernel of A: {}", r.image_basis.len(), r.kernel_basis.len());
                for c in &r.classes {
                    let _ = writeln!(s, "  {:<24} {:<9} {}", c.label, c.verdict, evidence_text(&c.witness_or_certificate));
                }
                let holds = serde_json::to_value(r.condition_holds).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
                let _ = writeln!(s, "condition holds: {holds}");
                ingredients_text(&mut s, &r.ingredients);
                s.trim_end().to_string()
            })
        }
        Command::Tertiary { group } => {
            let g = parse(group)?;
            let r = verify_tertiary(&g).map_err(|e| from_gamma(&e))?;
            emit(json, &r, |r| {
                let mut s = format!("group {}: {}\n", r.group, r.criterion.name());
                if let Some(c) = &r.coinvariants {
                    let _ = writeln!(s, "coinvariants of Gamma(pi2): {c}");
                }
                ingredients_text(&mut s, &r.ingredients);
                s.trim_end().to_string()
            })
        }
        Command::Ahss { group } => {
            let g = parse(group)?;
            let r = ahss_report(&g).map_err(|e| from_report(&e))?;
            emit(json, &r, |r| {
                let mut s = format!("E2 page for {} (rows q = 0..4, columns p = 0..5)\n", r.group);
                for q in 0..5 {
                    let row: Vec<String> = r.e2.iter().filter(|e| e.q == q).map(|e| e.group.to_string()).collect();
                    let _ = writeln!(s, "  q={q}: {}", row.join(" | "));
                }
                for d in &r.differentials {
                    let rank = d.rank.map_or("?".to_string(), |x| x.to_string());
                    let _ = writeln!(s, "{}: rank {rank} {}", d.name, d.note);
                }
                for p in &r.pieces {
                    let grp = p.group.as_ref().map_or("?".to_string(), ToString::to_string);
                    let status = serde_json::to_value(p.status).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
                    let _ = writeln!(s, "{} = {grp} [{status}] {}", p.position, p.note);
                }
                ingredients_text(&mut s, &r.notes);
                s.trim_end().to_string()
            })
        }
        Command::Report { group } => {
            let g = parse(group)?;
            let r = full_report(&g, &opts).map_err(|e| from_report(&e))?;
            emit(json, &r, |r| {
                let mut s = format!("report for {}\n", r.group);
                for h in &r.homology {
                    let _ = writeln!(s, "H_{}: Z coefficients {}, Z/2 coefficients {}", h.degree, h.integral, h.mod2);
                }
                let holds = serde_json::to_value(r.condition.condition_holds).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
                let _ = writeln!(s, "condition holds: {holds}");
                let _ = writeln!(s, "tertiary: {}", r.tertiary.criterion.name());
                for p in &r.ahss.pieces {
                    let grp = p.group.as_ref().map_or("?".to_string(), ToString::to_string);
                    let _ = writeln!(s, "{} = {grp}", p.position);
                }
                s.trim_end().to_string()
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
