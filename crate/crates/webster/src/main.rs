use clap::Parser;
use std::process::ExitCode;
use webster::bimodule::{format_element, BimodCtx};
use webster::field::FieldParams;
use webster::parse::{parse_element, ParsedElement};
use webster::suites::{run, RunConfig, Status};

#[derive(Parser, Debug)]
#[command(name = "webster", about = "Verify the p-DG Webster algebra, its bimodules and braiding complexes")]
struct Args {
    /// Number of red strands.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Characteristic, an odd prime.
    #[arg(long, default_value_t = 3)]
    p: u64,
    /// Truncation degree of the verification window.
    #[arg(long = "D", default_value_t = 8)]
    window: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated suites; all suites if omitted.
    #[arg(long, value_delimiter = ',')]
    check: Vec<String>,
    /// Write the JSON report here ("-" for stdout).
    #[arg(long)]
    json: Option<String>,
    #[arg(long = "corpus-size", default_value_t = 1000)]
    corpus_size: usize,
    /// Include wall-clock timings in the JSON report.
    #[arg(long)]
    timings: bool,
    /// Parse an element, print its canonical form and exit.
    #[arg(long)]
    element: Option<String>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let config = RunConfig {
        n: args.n,
        p: args.p,
        window: args.window,
        seed: args.seed,
        checks: args.check.iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
        corpus_size: args.corpus_size,
    };
    if let Err(e) = config.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if let Some(text) = &args.element {
        return print_element(&config, text);
    }
    let report = match run(&config, args.timings) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    for r in &report.results {
        let tag = match r.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        println!("{tag} {:<12} {}", r.name, r.summary);
    }
    if let Some(path) = &args.json {
        let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
        if path == "-" {
            print!("{text}");
        } else if let Err(e) = std::fs::write(path, text) {
            eprintln!("error: cannot write {path}: {e}");
            return ExitCode::from(2);
        }
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn print_element(config: &RunConfig, text: &str) -> ExitCode {
    let field = FieldParams::new(config.p).expect("validated");
    let cal = webster::rep::calibrate_psi2(config.n, field);
    let alg = std::sync::Arc::new(webster::algebra::Algebra::new(config.n, field, cal.convention));
    let ctx = BimodCtx::new(alg);
    match parse_element(text, &ctx) {
        Ok(ParsedElement::Algebra(a)) => {
            println!("{}", a.format());
            ExitCode::SUCCESS
        }
        Ok(ParsedElement::Bimodule(model, m)) => {
            println!("{}: {}", model.spec().name(), format_element(&model, &m));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
