//! Command-line surface over the polarity library: validation, stable-set
//! enumeration, duals in both directions, morphism certification, sums,
//! maximal covering detection, DOT export and the self-check suites.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use polarity_core::checks;
use polarity_core::lattice::{enumerate_stable_capped, DEFAULT_CAP};
use polarity_core::morphism::{
    dual_hom, dual_of_hom, i_maximal_filters, is_maximal_covering, verify,
};
use polarity_core::nlo::{
    canonical_structure, is_homomorphism, is_normal_dual_operator, is_normal_operator,
    theta_embedding_capped, validate_lattice,
};
use polarity_core::omega::{stable_nlo, validate_sections};
use polarity_core::sum::{direct_sum, product_isomorphism};

use polarity_cli::document::{self, Document};
use polarity_cli::{dot, output, CliError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(
    name = "polarity",
    version,
    about = "finite polarities, stable set lattices and their morphisms"
)]
struct Cli {
    /// Cap on enumerated stable-set lattice elements
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Seed for the sampled suites
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural validation; for omega polarities, section stability
    Validate { file: PathBuf },
    /// Enumerate the stable set lattice and print its elements
    Concepts { file: PathBuf },
    /// NLO → canonical structure, or omega polarity → its dual algebra
    Dual { file: PathBuf },
    /// Full double-dual diagnostics of an NLO
    Canonical { file: PathBuf },
    /// Certify a bounded morphism; exit 0 iff every condition passes
    CheckMorphism { file: PathBuf },
    /// Dual homomorphism of a morphism, or dual morphism of a homomorphism
    DualHom { file: PathBuf },
    /// Direct sum of omega polarities plus the product-lattice check
    Sum { files: Vec<PathBuf> },
    /// Does the alpha image cover all i-maximal filters of the target NLO?
    MaximalCovering { file: PathBuf },
    /// DOT rendering of the Hasse diagram of the stable set lattice
    ExportDot { file: PathBuf },
    /// Run the exhaustive invariant suites
    Selfcheck {
        #[arg(long, default_value_t = 3)]
        size: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn read_doc(path: &PathBuf) -> Result<Document, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    document::parse(&text)
}

fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Validate { file } => cmd_validate(&read_doc(file)?, json),
        Command::Concepts { file } => cmd_concepts(&read_doc(file)?, cli.cap, json),
        Command::Dual { file } => cmd_dual(&read_doc(file)?, cli.cap),
        Command::Canonical { file } => cmd_canonical(&read_doc(file)?, cli.cap, cli.seed, json),
        Command::CheckMorphism { file } => cmd_check_morphism(&read_doc(file)?, json),
        Command::DualHom { file } => cmd_dual_hom(&read_doc(file)?, cli.cap),
        Command::Sum { files } => cmd_sum(files, cli.cap, json),
        Command::MaximalCovering { file } => cmd_maximal_covering(&read_doc(file)?, json),
        Command::ExportDot { file } => cmd_export_dot(&read_doc(file)?, cli.cap),
        Command::Selfcheck { size } => cmd_selfcheck(*size, cli.seed, json),
    }
}

fn ok_exit(clean: bool) -> Result<ExitCode, CliError> {
    Ok(if clean {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_validate(doc: &Document, json: bool) -> Result<ExitCode, CliError> {
    let report = match doc {
        Document::Polarity(d) => {
            document::polarity_from_doc(d)?;
            output::Findings::clean("polarity")
        }
        Document::OmegaPolarity(d) => {
            let (base, s, t) = document::omega_parts_from_doc(d)?;
            let report = validate_sections(&base, &s, &t).map_err(CliError::from_core)?;
            output::Findings::from_sections("omega_polarity", &report)
        }
        Document::Lattice(d) => {
            let l = document::lattice_from_doc(d)?;
            output::Findings::from_report("lattice", &validate_lattice(&l))
        }
        Document::Nlo(d) => {
            let lattice = document::lattice_from_doc(&d.lattice)?;
            let f = polarity_core::nlo::OpTable::new(d.f.arity, lattice.size(), d.f.table.clone())
                .map_err(|e| CliError::Semantic(format!("table f: {e}")))?;
            let g = polarity_core::nlo::OpTable::new(d.g.arity, lattice.size(), d.g.table.clone())
                .map_err(|e| CliError::Semantic(format!("table g: {e}")))?;
            let mut findings =
                output::Findings::from_report("nlo", &is_normal_operator(&lattice, &f));
            findings.extend(&is_normal_dual_operator(&lattice, &g));
            findings
        }
        Document::Morphism(d) => {
            let (m, _) = document::morphism_from_doc(d)?;
            output::Findings::from_certificate("morphism", &verify(&m))
        }
        Document::Hom(d) => {
            let h = document::hom_from_doc(d)?;
            output::Findings::from_report("hom", &is_homomorphism(&h))
        }
        Document::SumSpec(d) => {
            for s in &d.summands {
                document::omega_from_doc(s)?;
            }
            output::Findings::clean("sum_spec")
        }
    };
    report.print(json);
    ok_exit(report.clean)
}

fn doc_to_polarity(doc: &Document) -> Result<polarity_core::Polarity, CliError> {
    match doc {
        Document::Polarity(d) => document::polarity_from_doc(d),
        Document::OmegaPolarity(d) => Ok(document::omega_from_doc(d)?.base().clone()),
        _ => Err(CliError::Semantic(String::from(
            "expected a polarity or omega_polarity document",
        ))),
    }
}

fn cmd_concepts(doc: &Document, cap: usize, json: bool) -> Result<ExitCode, CliError> {
    let p = doc_to_polarity(doc)?;
    let lat = enumerate_stable_capped(&p, cap).map_err(CliError::from_core)?;
    if json {
        let elements: Vec<Vec<usize>> = lat.elements().iter().map(|e| e.to_vec()).collect();
        let obj = serde_json::json!({
            "elements": elements,
            "count": lat.len(),
            "bottom": lat.bottom(),
            "top": lat.top(),
        });
        output::print_json(&obj);
    } else {
        println!("elements: {}", lat.len());
        for (i, e) in lat.elements().iter().enumerate() {
            let members: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            println!("{i}: {{{}}}", members.join(","));
        }
        println!("bottom: {}", lat.bottom());
        println!("top: {}", lat.top());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_dual(doc: &Document, cap: usize) -> Result<ExitCode, CliError> {
    let out = match doc {
        Document::OmegaPolarity(d) => {
            let op = document::omega_from_doc(d)?;
            let (_, nlo) = stable_nlo(&op, cap).map_err(CliError::from_core)?;
            Document::Nlo(document::nlo_to_doc(&nlo))
        }
        Document::Nlo(d) => {
            let nlo = document::nlo_from_doc(d)?;
            let cs = canonical_structure(&nlo).map_err(CliError::from_core)?;
            Document::OmegaPolarity(document::omega_to_doc(&cs))
        }
        _ => {
            return Err(CliError::Semantic(String::from(
                "dual expects an omega_polarity or nlo document",
            )))
        }
    };
    print!("{}", document::serialize(&out));
    Ok(ExitCode::SUCCESS)
}

fn cmd_canonical(doc: &Document, cap: usize, seed: u64, json: bool) -> Result<ExitCode, CliError> {
    let Document::Nlo(d) = doc else {
        return Err(CliError::Semantic(String::from(
            "canonical expects an nlo document",
        )));
    };
    let nlo = document::nlo_from_doc(d)?;
    let theta = theta_embedding_capped(&nlo, cap, seed).map_err(CliError::from_core)?;
    let lower = polarity_core::nlo::lower_extension(&nlo, &theta).map_err(CliError::from_core)?;
    let upper = polarity_core::nlo::upper_extension(&nlo, &theta).map_err(CliError::from_core)?;
    let lower_ok = &lower == theta.double_dual.f();
    let upper_ok = &upper == theta.double_dual.g();
    let d = &theta.diagnostics;
    let all = d.all_pass() && d.surjective && lower_ok && upper_ok;
    if json {
        let obj = serde_json::json!({
            "lattice_size": nlo.lattice().size(),
            "double_dual_size": theta.lattice.len(),
            "embedding": theta.map,
            "injective": d.injective,
            "lattice_hom": d.lattice_hom,
            "preserves_f": d.preserves_f,
            "preserves_g": d.preserves_g,
            "dense": d.dense,
            "compact": d.compact,
            "surjective": d.surjective,
            "lower_extension_matches": lower_ok,
            "upper_extension_matches": upper_ok,
            "ok": all,
        });
        output::print_json(&obj);
    } else {
        println!("lattice size: {}", nlo.lattice().size());
        println!("double dual size: {}", theta.lattice.len());
        let flag = |b: bool| if b { "pass" } else { "fail" };
        println!("injective: {}", flag(d.injective));
        println!("lattice hom: {}", flag(d.lattice_hom));
        println!("preserves f: {}", flag(d.preserves_f));
        println!("preserves g: {}", flag(d.preserves_g));
        println!("dense: {}", flag(d.dense));
        println!("compact: {}", flag(d.compact));
        println!("surjective: {}", flag(d.surjective));
        println!("lower extension matches: {}", flag(lower_ok));
        println!("upper extension matches: {}", flag(upper_ok));
    }
    ok_exit(all)
}

fn cmd_check_morphism(doc: &Document, json: bool) -> Result<ExitCode, CliError> {
    let Document::Morphism(d) = doc else {
        return Err(CliError::Semantic(String::from(
            "check-morphism expects a morphism document",
        )));
    };
    let (m, _) = document::morphism_from_doc(d)?;
    let cert = verify(&m);
    let findings = output::Findings::from_certificate("morphism", &cert);
    findings.print(json);
    ok_exit(cert.all_pass())
}

fn cmd_dual_hom(doc: &Document, cap: usize) -> Result<ExitCode, CliError> {
    let out = match doc {
        Document::Morphism(d) => {
            let (m, _) = document::morphism_from_doc(d)?;
            let h = dual_hom(&m, cap).map_err(CliError::from_core)?;
            Document::Hom(document::hom_to_doc(&h))
        }
        Document::Hom(d) => {
            let h = document::hom_from_doc(d)?;
            let dual = dual_of_hom(&h).map_err(CliError::from_core)?;
            Document::Morphism(document::morphism_to_doc(&dual))
        }
        _ => {
            return Err(CliError::Semantic(String::from(
                "dual-hom expects a morphism or hom document",
            )))
        }
    };
    print!("{}", document::serialize(&out));
    Ok(ExitCode::SUCCESS)
}

fn cmd_sum(files: &[PathBuf], cap: usize, json: bool) -> Result<ExitCode, CliError> {
    let mut summands = Vec::new();
    for path in files {
        match read_doc(path)? {
            Document::OmegaPolarity(d) => summands.push(document::omega_from_doc(&d)?),
            Document::SumSpec(d) if files.len() == 1 => {
                for s in &d.summands {
                    summands.push(document::omega_from_doc(s)?);
                }
            }
            _ => {
                return Err(CliError::Semantic(String::from(
                    "sum expects omega_polarity documents or a single sum_spec",
                )))
            }
        }
    }
    let ds = direct_sum(&summands).map_err(CliError::from_core)?;
    let iso = product_isomorphism(&ds, cap).map_err(CliError::from_core)?;
    let ok = iso.bijective && iso.hom_report.is_empty() && iso.inverse_stable;
    let doc = Document::OmegaPolarity(document::omega_to_doc(&ds.total));
    print!("{}", document::serialize(&doc));
    if json {
        let obj = serde_json::json!({
            "summands": summands.len(),
            "lattice_size": iso.total_elements.len(),
            "product_size": iso.product.lattice().size(),
            "product_isomorphism": ok,
        });
        output::print_json(&obj);
    } else {
        println!(
            "product isomorphism: {} ({} elements)",
            if ok { "pass" } else { "fail" },
            iso.total_elements.len()
        );
    }
    ok_exit(ok)
}

fn cmd_maximal_covering(doc: &Document, json: bool) -> Result<ExitCode, CliError> {
    let Document::Morphism(d) = doc else {
        return Err(CliError::Semantic(String::from(
            "maximal-covering expects a morphism document",
        )));
    };
    let (m, target_nlo) = document::morphism_from_doc(d)?;
    let Some(nlo) = target_nlo else {
        return Err(CliError::Semantic(String::from(
            "maximal-covering needs a target of kind nlo (its canonical structure is used)",
        )));
    };
    let covering = is_maximal_covering(&m, &nlo).map_err(CliError::from_core)?;
    let maximal = i_maximal_filters(nlo.lattice());
    let image = m.alpha_image().to_vec();
    if json {
        let obj = serde_json::json!({
            "maximal_covering": covering,
            "i_maximal_filters": maximal,
            "alpha_image": image,
        });
        output::print_json(&obj);
    } else {
        let fmt_list = |v: &[usize]| {
            let inner: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            format!("[{}]", inner.join(","))
        };
        println!("i-maximal filters: {}", fmt_list(&maximal));
        println!("alpha image: {}", fmt_list(&image));
        println!("maximal covering: {}", if covering { "yes" } else { "no" });
    }
    ok_exit(covering)
}

fn cmd_export_dot(doc: &Document, cap: usize) -> Result<ExitCode, CliError> {
    let p = doc_to_polarity(doc)?;
    let lat = enumerate_stable_capped(&p, cap).map_err(CliError::from_core)?;
    print!("{}", dot::hasse_dot(&lat));
    Ok(ExitCode::SUCCESS)
}

fn cmd_selfcheck(size: usize, seed: u64, json: bool) -> Result<ExitCode, CliError> {
    let reports = checks::run_all(size, seed);
    let all = reports.iter().all(|r| r.passed());
    if json {
        let items: Vec<serde_json::Value> = reports
            .iter()
            .map(|r| {
                serde_json::json!({
                    "suite": r.name,
                    "checks": r.checks,
                    "ok": r.passed(),
                    "failures": r.failures,
                })
            })
            .collect();
        let obj = serde_json::json!({ "suites": items, "ok": all });
        output::print_json(&obj);
    } else {
        for r in &reports {
            println!(
                "{:<22} {:>8} checks  {}",
                r.name,
                r.checks,
                if r.passed() { "ok" } else { "FAIL" }
            );
            for f in &r.failures {
                println!("    {f}");
            }
        }
        let total: u64 = reports.iter().map(|r| r.checks).sum();
        println!(
            "total: {total} checks, {}",
            if all { "all ok" } else { "FAILURES" }
        );
    }
    ok_exit(all)
}
