//! `subint`: check, normalize and translate proof documents.
//!
//! Exit codes: 0 accepted, 1 rejected, 2 malformed input or usage error.

use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use subint_core::batch;
use subint_core::document::{read_document, write_document, Body, ProofDocument};
use subint_core::normalize::{normalize_traced, NormalizeError};
use subint_core::translate::{hilbert_to_nd, nd_to_hilbert, TranslateError};
use subint_core::{CheckOptions, CheckReport, LogicSpec};

const ACCEPT: u8 = 0;
const REJECT: u8 = 1;
const MALFORMED: u8 = 2;

#[derive(Parser)]
#[command(name = "subint", version, about = "Proof kernel for weak subintuitionistic logics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Nd,
    Hilbert,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    Accept,
    Reject,
}

#[derive(clap::Args)]
struct Common {
    /// Logic to use instead of the one named in the document (preset or WF+EXT+...).
    #[arg(long)]
    logic: Option<LogicSpec>,
    /// Require ImpI to discharge at least one assumption.
    #[arg(long)]
    strict_star: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Check a proof document.
    Check {
        /// File to read, or `-` for standard input.
        file: String,
        #[command(flatten)]
        common: Common,
    },
    /// Normalize a natural-deduction document.
    Normalize {
        file: String,
        /// Log every reduction step.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Translate between Hilbert proofs and natural-deduction derivations.
    Translate {
        file: String,
        /// Target kind; defaults to the other kind.
        #[arg(long, value_enum)]
        to: Option<Kind>,
        #[command(flatten)]
        common: Common,
    },
    /// Check every `.nd` and `.hil` file below a directory.
    Corpus {
        dir: PathBuf,
        /// Outcome every file must have.
        #[arg(long, value_enum, default_value = "accept")]
        expect: Expect,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Check { file, common } => cmd_check(&file, &common),
        Command::Normalize { file, trace, common } => cmd_normalize(&file, trace, &common),
        Command::Translate { file, to, common } => cmd_translate(&file, to, &common),
        Command::Corpus { dir, expect, common } => cmd_corpus(&dir, expect, &common),
    };
    ExitCode::from(code)
}

fn options(common: &Common) -> CheckOptions {
    CheckOptions {
        strict_star: common.strict_star,
    }
}

fn read_input(file: &str) -> Result<String, String> {
    if file == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| format!("stdin: {e}"))?;
        Ok(s)
    } else {
        fs::read_to_string(file).map_err(|e| format!("{file}: {e}"))
    }
}

fn load(file: &str, common: &Common) -> Result<ProofDocument, String> {
    let text = read_input(file)?;
    let mut doc = read_document(&text).map_err(|e| format!("{file}: {e}"))?;
    if let Some(logic) = &common.logic {
        doc.logic = logic.clone();
    }
    Ok(doc)
}

fn malformed(format: Format, message: &str) -> u8 {
    match format {
        Format::Text => eprintln!("error: {message}"),
        Format::Json => println!("{}", json!({ "status": "malformed", "error": message })),
    }
    MALFORMED
}

fn report_text(report: &CheckReport) -> String {
    let mut out = String::new();
    out.push_str(if report.accepted { "accepted\n" } else { "rejected\n" });
    if let Some(c) = &report.conclusion {
        out.push_str(&format!("conclusion: {c}\n"));
    }
    let open: Vec<String> = report.open_assumptions.iter().map(|f| f.to_string()).collect();
    out.push_str(&format!("open assumptions: {{{}}}\n", open.join(", ")));
    for d in &report.diagnostics {
        out.push_str(&format!("{d}\n"));
    }
    out
}

fn status(accepted: bool) -> &'static str {
    if accepted {
        "accepted"
    } else {
        "rejected"
    }
}

fn cmd_check(file: &str, common: &Common) -> u8 {
    let doc = match load(file, common) {
        Ok(d) => d,
        Err(e) => return malformed(common.format, &e),
    };
    let report = batch::check_document(&doc, options(common));
    match common.format {
        Format::Text => print!("{}", report_text(&report)),
        Format::Json => println!(
            "{}",
            json!({ "status": status(report.accepted), "logic": doc.logic, "kind": doc.kind(), "report": report })
        ),
    }
    if report.accepted {
        ACCEPT
    } else {
        REJECT
    }
}

fn cmd_normalize(file: &str, trace: bool, common: &Common) -> u8 {
    let doc = match load(file, common) {
        Ok(d) => d,
        Err(e) => return malformed(common.format, &e),
    };
    let Body::Nd(d) = &doc.body else {
        return malformed(common.format, "normalization applies to natural deduction only");
    };
    let report = batch::check_document(&doc, options(common));
    if !report.accepted {
        match common.format {
            Format::Text => eprint!("{}", report_text(&report)),
            Format::Json => println!("{}", json!({ "status": "rejected", "report": report })),
        }
        return REJECT;
    }
    match normalize_traced(d, &doc.logic) {
        Ok(n) => {
            let out = ProofDocument::nd(doc.logic.clone(), n.derivation);
            match common.format {
                Format::Text => {
                    if trace {
                        for s in &n.steps {
                            println!("; step {s}");
                        }
                    }
                    print!("{}", write_document(&out));
                }
                Format::Json => {
                    let mut v = json!({ "status": "accepted", "document": write_document(&out) });
                    if trace {
                        v["steps"] = json!(n.steps);
                    }
                    println!("{v}");
                }
            }
            ACCEPT
        }
        Err(NormalizeError::Rejected(e)) => {
            eprintln!("rejected: {e}");
            REJECT
        }
        Err(e) => {
            // the input was accepted, so this is a kernel failure
            match common.format {
                Format::Text => eprintln!("error: {e}"),
                Format::Json => println!("{}", json!({ "status": "error", "error": e.to_string() })),
            }
            REJECT
        }
    }
}

fn cmd_translate(file: &str, to: Option<Kind>, common: &Common) -> u8 {
    let doc = match load(file, common) {
        Ok(d) => d,
        Err(e) => return malformed(common.format, &e),
    };
    let result: Result<ProofDocument, TranslateError> = match (&doc.body, to) {
        (Body::Nd(_), Some(Kind::Nd)) | (Body::Hilbert { .. }, Some(Kind::Hilbert)) => {
            return malformed(common.format, &format!("document is already {}", doc.kind()));
        }
        (Body::Nd(d), _) => nd_to_hilbert(d, &doc.logic)
            .map(|p| ProofDocument::hilbert(doc.logic.clone(), d.open_assumptions().into_iter().collect(), p)),
        (Body::Hilbert { proof, .. }, _) => {
            hilbert_to_nd(proof, &doc.logic, &doc.assumption_set()).map(|d| ProofDocument::nd(doc.logic.clone(), d))
        }
    };
    match result {
        Ok(out) => {
            match common.format {
                Format::Text => print!("{}", write_document(&out)),
                Format::Json => println!("{}", json!({ "status": "accepted", "document": write_document(&out) })),
            }
            ACCEPT
        }
        Err(e) => {
            match common.format {
                Format::Text => eprintln!("error: {e}"),
                Format::Json => println!("{}", json!({ "status": "rejected", "error": e.to_string() })),
            }
            REJECT
        }
    }
}

fn corpus_files(dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_dir() {
            out.extend(corpus_files(&path)?);
        } else if matches!(path.extension().and_then(|e| e.to_str()), Some("nd" | "hil")) {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

fn cmd_corpus(dir: &Path, expect: Expect, common: &Common) -> u8 {
    let files = match corpus_files(dir) {
        Ok(f) => f,
        Err(e) => return malformed(common.format, &format!("{}: {e}", dir.display())),
    };
    let opts = options(common);
    let results: Vec<Result<CheckReport, String>> = batch::map(&files, |path| {
        let doc = load(&path.to_string_lossy(), common)?;
        Ok(batch::check_document(&doc, opts))
    });
    let mut code = ACCEPT;
    let mut rows = Vec::new();
    for (path, result) in files.iter().zip(&results) {
        let name = path.display().to_string();
        match result {
            Err(e) => {
                code = MALFORMED;
                rows.push(json!({ "file": name, "status": "malformed", "error": e }));
                if common.format == Format::Text {
                    println!("MALFORMED {name}: {e}");
                }
            }
            Ok(report) => {
                let ok = report.accepted == (expect == Expect::Accept);
                if !ok && code == ACCEPT {
                    code = REJECT;
                }
                if common.format == Format::Text {
                    let first = report.diagnostics.first().map(|d| format!(" ({d})")).unwrap_or_default();
                    println!(
                        "{} {name}: {}{first}",
                        if ok { "ok  " } else { "FAIL" },
                        status(report.accepted)
                    );
                }
                rows.push(json!({ "file": name, "status": status(report.accepted), "as_expected": ok, "report": report }));
            }
        }
    }
    match common.format {
        Format::Text => {
            let ok = rows.iter().filter(|r| r["as_expected"] == json!(true)).count();
            println!("{ok}/{} files as expected", files.len());
        }
        Format::Json => println!("{}", json!({ "files": rows })),
    }
    code
}
