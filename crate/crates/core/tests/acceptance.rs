//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use subint_core::document::{read_document, Body, ProofDocument};
use subint_core::generate::{detour_classes, hilbert_proof, nd_derivation, nd_with_detour, HilbertConfig};
use subint_core::hilbert::check_hilbert;
use subint_core::hilbert::{weak_deduction_export, weak_deduction_import};
use subint_core::normalize::{normalize_traced, step_budget, Conversion};
use subint_core::translate::{hilbert_to_nd, nd_to_hilbert};
use subint_core::{check_nd, cut_measure, is_normal, CheckReport, CutMeasure, Derivation, Formula, LogicSpec};

const SEED: u64 = 0x5eed;

struct Outcome {
    total: usize,
    failures: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            total: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, result: Result<(), String>) {
        self.total += 1;
        if let Err(e) = result {
            self.failures.push(e);
        }
    }
}

fn corpus_dir(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn load_corpus(name: &str) -> Vec<(String, ProofDocument)> {
    let mut paths: Vec<PathBuf> = fs::read_dir(corpus_dir(name))
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| matches!(p.extension().and_then(|e| e.to_str()), Some("nd" | "hil")))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = fs::read_to_string(&p).unwrap();
            let doc = read_document(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
            (p.file_name().unwrap().to_string_lossy().into_owned(), doc)
        })
        .collect()
}

fn check_doc(doc: &ProofDocument) -> CheckReport {
    match &doc.body {
        Body::Nd(d) => check_nd(d, &doc.logic),
        Body::Hilbert { proof, .. } => check_hilbert(proof, &doc.logic, &doc.assumption_set()),
    }
}

fn golden() -> Outcome {
    let mut out = Outcome::new();
    let docs = load_corpus("golden");
    for (name, doc) in &docs {
        let report = check_doc(doc);
        out.record(if report.accepted {
            Ok(())
        } else {
            Err(format!("{name}: {:?}", report.diagnostics))
        });
    }
    // each redex reduces to its listed replacement
    for (name, doc) in &docs {
        let Some(stem) = name.strip_suffix("_redex.nd") else { continue };
        let replacement = docs
            .iter()
            .find(|(n, _)| *n == format!("{stem}_replacement.nd"))
            .map(|(_, d)| d);
        out.record(match (&doc.body, replacement.map(|r| &r.body)) {
            (Body::Nd(redex), Some(Body::Nd(expected))) => match subint_core::reduce_once(redex, &doc.logic) {
                Ok((got, _)) if got.canonical_labels() == expected.canonical_labels() => Ok(()),
                Ok((got, step)) => Err(format!("{name}: {step} gave {got:?}")),
                Err(e) => Err(format!("{name}: {e}")),
            },
            _ => Err(format!("{name}: no replacement file")),
        });
    }
    out
}

fn negative() -> Outcome {
    let mut out = Outcome::new();
    for (name, doc) in load_corpus("negative") {
        let report = check_doc(&doc);
        let wanted = match doc.body {
            Body::Nd(_) => "restriction ‡ violated",
            Body::Hilbert { .. } => "restriction violated",
        };
        let named = report.diagnostics.iter().any(|d| d.message.contains(wanted));
        out.record(match (report.accepted, named) {
            (false, true) => Ok(()),
            (true, _) => Err(format!("{name}: accepted")),
            (false, false) => Err(format!("{name}: rejected without `{wanted}`: {:?}", report.diagnostics)),
        });
    }
    // the IPC derivation must be flagged at both inner ImpE nodes
    let ipc = load_corpus("negative")
        .into_iter()
        .find(|(n, _)| n == "ipc_transitivity.nd")
        .map(|(_, d)| d);
    out.record(match ipc.map(|d| d.body) {
        Some(Body::Nd(d)) => {
            let flagged: BTreeSet<String> = check_nd(&d, &LogicSpec::wf())
                .diagnostics
                .iter()
                .filter(|x| x.message.contains("‡"))
                .map(|x| x.location.to_string())
                .collect();
            if flagged.len() >= 2 {
                Ok(())
            } else {
                Err(format!("ipc_transitivity.nd: ‡ flagged at {flagged:?} only"))
            }
        }
        _ => Err("ipc_transitivity.nd missing".into()),
    });
    out
}

fn same_judgment(
    what: &str,
    report: &CheckReport,
    conclusion: &Formula,
    open: &BTreeSet<Formula>,
    expected: &BTreeSet<Formula>,
) -> Result<(), String> {
    if !report.accepted {
        return Err(format!("{what}: rejected: {:?}", report.diagnostics));
    }
    if report.conclusion.as_ref() != Some(conclusion) {
        return Err(format!("{what}: conclusion {:?} != {conclusion}", report.conclusion));
    }
    if open != expected {
        return Err(format!("{what}: assumptions {open:?} != {expected:?}"));
    }
    Ok(())
}

fn round_trip_hilbert(logic: &LogicSpec, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let g = hilbert_proof(rng, logic, HilbertConfig::default());
    let allowed: BTreeSet<Formula> = g.assumptions.iter().cloned().collect();
    let report = check_hilbert(&g.proof, logic, &allowed);
    if !report.accepted {
        return Err(format!("generated proof rejected: {:?}", report.diagnostics));
    }
    let conclusion = g.proof.conclusion().unwrap().clone();
    let used = g.proof.used_assumptions();
    let d = hilbert_to_nd(&g.proof, logic, &allowed).map_err(|e| format!("H->ND: {e}"))?;
    same_judgment("H->ND", &check_nd(&d, logic), &conclusion, &d.open_assumptions(), &used)?;
    let back = nd_to_hilbert(&d, logic).map_err(|e| format!("ND->H: {e}"))?;
    let back_report = check_hilbert(&back, logic, &used);
    same_judgment("H->ND->H", &back_report, &conclusion, &back.used_assumptions(), &used)
}

fn round_trip_nd(logic: &LogicSpec, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let d = nd_derivation(rng, logic, 2, 4, 0.2);
    let report = check_nd(&d, logic);
    if !report.accepted {
        return Err(format!("generated derivation rejected: {:?}", report.diagnostics));
    }
    let conclusion = d.conclusion.clone();
    let open = d.open_assumptions();
    let h = nd_to_hilbert(&d, logic).map_err(|e| format!("ND->H: {e}"))?;
    same_judgment("ND->H", &check_hilbert(&h, logic, &open), &conclusion, &h.used_assumptions(), &open)
}

fn equivalence() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for (name, logic) in LogicSpec::presets() {
        for i in 0..200 {
            out.record(round_trip_hilbert(&logic, &mut rng).map_err(|e| format!("{name} H#{i}: {e}")));
            out.record(round_trip_nd(&logic, &mut rng).map_err(|e| format!("{name} ND#{i}: {e}")));
        }
    }
    out
}

fn conjuncts(f: &Formula, n: usize, out: &mut BTreeSet<Formula>) {
    match f.as_and() {
        Some((l, r)) if n > 1 => {
            out.insert(l.clone());
            conjuncts(r, n - 1, out);
        }
        _ => {
            out.insert(f.clone());
        }
    }
}

fn deduction_case(logic: &LogicSpec, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let config = HilbertConfig {
        assumptions: 3,
        steps: 6,
        dependent: true,
    };
    let g = hilbert_proof(rng, logic, config);
    let b = g.proof.conclusion().unwrap().clone();
    let used = g.proof.used_assumptions();
    if used.is_empty() || used.len() > 3 {
        return Err(format!("generated proof uses {} assumptions", used.len()));
    }
    let exported = weak_deduction_export(&g.proof, logic).map_err(|e| format!("export: {e}"))?;
    let report = check_hilbert(&exported, logic, &BTreeSet::new());
    if !report.accepted || !exported.used_assumptions().is_empty() {
        return Err(format!("export not an accepted theorem: {:?}", report.diagnostics));
    }
    let theorem = exported.conclusion().unwrap();
    let (k, consequent) = theorem.as_imp().ok_or("export is not an implication")?;
    if *consequent != b {
        return Err(format!("export concludes {theorem}, wanted ... -> {b}"));
    }
    let mut folded = BTreeSet::new();
    conjuncts(k, used.len(), &mut folded);
    if folded != used {
        return Err(format!("antecedent {k} does not fold {used:?}"));
    }
    let imported = weak_deduction_import(&exported).map_err(|e| format!("import: {e}"))?;
    let single = BTreeSet::from([k.clone()]);
    same_judgment("import", &check_hilbert(&imported, logic, &single), &b, &imported.used_assumptions(), &single)
}

fn deduction() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    for (name, logic) in LogicSpec::presets() {
        for i in 0..20 {
            out.record(deduction_case(&logic, &mut rng).map_err(|e| format!("{name} #{i}: {e}")));
        }
    }
    out
}

fn normalizes(d: &Derivation, logic: &LogicSpec) -> Result<(), String> {
    let report = check_nd(d, logic);
    if !report.accepted {
        return Err(format!("input rejected: {:?}", report.diagnostics));
    }
    let budget = step_budget(d);
    let n = normalize_traced(d, logic).map_err(|e| e.to_string())?;
    if n.steps.len() > budget {
        return Err(format!("{} steps over budget {budget}", n.steps.len()));
    }
    if !is_normal(&n.derivation) {
        return Err("output not normal".into());
    }
    let out_report = check_nd(&n.derivation, logic);
    if !out_report.accepted {
        return Err(format!("output rejected: {:?}", out_report.diagnostics));
    }
    if n.derivation.conclusion != d.conclusion {
        return Err("conclusion changed".into());
    }
    if !n.derivation.open_assumptions().is_subset(&d.open_assumptions()) {
        return Err("open assumptions grew".into());
    }
    if let Some(s) = n.steps.iter().find(|s| s.after >= s.before) {
        return Err(format!("no descent: {s}"));
    }
    Ok(())
}

fn normalization() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    for (name, logic) in LogicSpec::presets() {
        let classes = detour_classes(&logic);
        let per_class = 200usize.div_ceil(classes.len()).max(20);
        for class in classes {
            for i in 0..per_class {
                let d = nd_with_detour(&mut rng, &logic, class, 3, 0.15);
                out.record(normalizes(&d, &logic).map_err(|e| format!("{name} {class} #{i}: {e}")));
            }
        }
    }
    out
}

fn a(s: &str) -> Derivation {
    Derivation::assume(subint_core::parse(s).unwrap())
}

fn measures() -> Outcome {
    let mut out = Outcome::new();
    let normal = Derivation::and_e1(a("p & q"));
    let detour = Derivation::and_e1(Derivation::and_i(a("p"), a("q")));
    let routed = Derivation::and_e1(Derivation::or_e(
        a("r | s"),
        Some(1),
        Derivation::and_i(a("p"), a("q")),
        Some(2),
        a("p & q"),
    ));
    for (name, d, expected) in [
        ("normal", normal, CutMeasure { d: 0, l: 0 }),
        ("detour", detour, CutMeasure { d: 2, l: 1 }),
        ("routed", routed, CutMeasure { d: 2, l: 2 }),
    ] {
        let got = cut_measure(&d);
        out.record(if got == expected {
            Ok(())
        } else {
            Err(format!("{name}: {got} != {expected}"))
        });
    }
    out
}

fn composition() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let f = LogicSpec::f();
    let parts = [
        ("WFI", Conversion::Trans),
        ("WFC", Conversion::Conj),
        ("WFD", Conversion::Disj),
    ];
    for i in 0..50 {
        let (name, class) = parts[i % 3];
        let d = if i % 2 == 0 {
            nd_with_detour(&mut rng, &f, class, 3, 0.2)
        } else {
            // pair two redexes so rules from different sub-logics meet
            let (_, other) = parts[(i + 1) % 3];
            Derivation::and_i(
                nd_with_detour(&mut rng, &f, class, 2, 0.2),
                nd_with_detour(&mut rng, &f, other, 2, 0.2),
            )
            .canonical_labels()
        };
        out.record(normalizes(&d, &f).map_err(|e| format!("#{i} ({name}): {e}")));
    }
    out
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 7] = [
        ("golden corpus accepted", golden),
        ("negative corpus rejected", negative),
        ("equivalence round-trip", equivalence),
        ("deduction export/import", deduction),
        ("normalization", normalization),
        ("measure examples", measures),
        ("F composition", composition),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let o = run();
        let ok = o.failures.is_empty();
        println!(
            "criterion {}: {} {name} ({}/{} in {:.2?})",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            o.total - o.failures.len(),
            o.total,
            start.elapsed()
        );
        let descent = o.failures.iter().filter(|f| f.contains("no descent")).count();
        if descent > 0 {
            println!("    {descent} of {} failures are measure non-descent only (output still normal)", o.failures.len());
        }
        if std::env::var_os("ACCEPTANCE_VERBOSE").is_some() {
            for f in &o.failures {
                eprintln!("    {f}");
            }
        }
        for f in o.failures.iter().take(5) {
            println!("    {f}");
        }
        if o.failures.len() > 5 {
            println!("    ... {} more", o.failures.len() - 5);
        }
        if !ok {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
