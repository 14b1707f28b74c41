//! Command-line front end: simulate duplication channels, decode read files,
//! tabulate read-count trade-offs, query the combinatorial quantities and run
//! the verification sweep.
//!
//! Exit codes: 0 success, 1 internal error, 2 invalid input or infeasible
//! request, 3 inconsistent reads, 4 no common ancestor, 5 codebook mismatch.

mod formats;
mod verify;

use std::fs;
use std::io::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use tandemdup::codes::build_code_greedy;
use tandemdup::error::Error as CoreError;
use tandemdup::lattice;
use tandemdup::oracle::{self, OracleBudget};
use tandemdup::reconstruct::{
    list_decode_ecc, list_decode_typical, required_reads_at, sample_distinct_reads, DecodeReport,
    MembershipFilter, ReadSet,
};
use tandemdup::strings::GString;
use tandemdup::transform::stats;
use tandemdup::typicality::{
    expected_r, exponent_e, is_typical, typical_fraction_bound, uncertainty_typ, TypicalityWindow,
};

const EXIT_INVALID_INPUT: u8 = 2;
const EXIT_INCONSISTENT_READS: u8 = 3;
const EXIT_NO_COMMON_ANCESTOR: u8 = 4;
const EXIT_CODEBOOK_MISMATCH: u8 = 5;

#[derive(Parser)]
#[command(
    name = "tandemdup",
    version,
    about = "List-decoding reconstruction for uniform tandem-duplication channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample distinct noisy reads of a message through the duplication channel.
    Simulate(SimulateArgs),
    /// List-decode a file of reads, optionally against a codebook.
    Decode(DecodeArgs),
    /// Tabulate exponents, uncertainties and read requirements over a grid.
    Tables(TablesArgs),
    /// Maximal lower-bounds-set size mu(w, r, s) and its distance-d variant.
    Mu(MuArgs),
    /// Minimum supremum height sigma(m, w, r) and its distance-d variant.
    Sigma(SigmaArgs),
    /// Uncertainty: worst-case shell count, windowed or at a pinned (w, r).
    Uncertainty(UncertaintyArgs),
    /// Typicality: test one string, or sample the typical fraction.
    Typical(TypicalArgs),
    /// Build a greedy codebook file for a given root, level and distance.
    Codebook(CodebookArgs),
    /// Replay the closed forms against the brute-force oracles.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    k: usize,
    /// The message string (digits for q <= 10, comma-separated otherwise).
    #[arg(long, conflicts_with = "message_file")]
    message: Option<String>,
    /// File holding the message in reads-file format (first entry is used).
    #[arg(long)]
    message_file: Option<String>,
    /// Number of tandem duplications per read.
    #[arg(long)]
    t: u64,
    /// Number of distinct reads to sample.
    #[arg(long)]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FilterArg {
    Typical,
    All,
}

#[derive(Args)]
struct DecodeArgs {
    /// Reads file ('# q=<q> k=<k>' header, one read per line).
    #[arg(long)]
    reads: String,
    /// Number of duplications the reads went through.
    #[arg(long)]
    t: u64,
    /// List-size budget: the decoder guarantees fewer than m outputs.
    #[arg(long)]
    m: u64,
    /// Membership filter for the plain decoder.
    #[arg(long, value_enum, default_value = "typical")]
    filter: FilterArg,
    /// Codebook file; switches to the distance-d decoding pipeline.
    #[arg(long)]
    ecc: Option<String>,
    /// Decoding distance; defaults to the codebook's design distance.
    #[arg(long)]
    d: Option<u64>,
    /// Emit a single JSON document instead of key=value lines.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct TablesArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    k: u64,
    /// Comma-separated list of message lengths.
    #[arg(long, value_delimiter = ',')]
    n: Vec<u64>,
    #[arg(long)]
    t: u64,
    #[arg(long, value_delimiter = ',')]
    m: Vec<u64>,
    /// Minimum distances; 0 rows use the plain pipeline.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    d: Vec<u64>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct MuArgs {
    #[arg(long)]
    w: u64,
    #[arg(long)]
    r: u64,
    #[arg(long)]
    s: u64,
    #[arg(long)]
    d: Option<u64>,
    /// Use the unrestricted brute-force oracle instead of the closed route.
    #[arg(long)]
    exhaustive: bool,
}

#[derive(Args)]
struct SigmaArgs {
    #[arg(long)]
    m: u64,
    #[arg(long)]
    w: u64,
    #[arg(long)]
    r: u64,
    #[arg(long)]
    d: Option<u64>,
    #[arg(long)]
    exhaustive: bool,
}

#[derive(Args)]
struct UncertaintyArgs {
    /// Message length for the windowed maximum.
    #[arg(long, conflicts_with_all = ["w", "r"])]
    n: Option<u64>,
    #[arg(long, requires = "n")]
    q: Option<u64>,
    #[arg(long, requires = "n")]
    k: Option<u64>,
    /// Pinned derivative weight (with --r instead of --n).
    #[arg(long, requires = "r")]
    w: Option<u64>,
    #[arg(long)]
    r: Option<u64>,
    #[arg(long)]
    t: u64,
    #[arg(long)]
    m: u64,
    #[arg(long)]
    d: Option<u64>,
}

#[derive(Args)]
struct TypicalArgs {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    k: usize,
    /// Report (w, r) and membership for one string.
    #[arg(long, conflicts_with = "sample")]
    string: Option<String>,
    /// Sample uniform strings and report the typical fraction.
    #[arg(long, requires = "n")]
    sample: Option<u64>,
    /// Length of the sampled strings.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct CodebookArgs {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    k: usize,
    /// Irreducible root string anchoring the codebook.
    #[arg(long)]
    root: String,
    /// Simplex level the codewords live on.
    #[arg(long)]
    r: u64,
    /// Design minimum distance.
    #[arg(long)]
    d: u64,
    /// Mark the codebook as a subset of the typical set.
    #[arg(long)]
    typ: bool,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Oracle state budget; defaults to TANDEMDUP_BUDGET or 50000000.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Deliberately corrupt one closed-form value to prove the harness trips.
    #[arg(long)]
    inject_fault: bool,
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<CoreError>() {
        Some(CoreError::InconsistentReads) => EXIT_INCONSISTENT_READS,
        Some(CoreError::NoCommonAncestor) => EXIT_NO_COMMON_ANCESTOR,
        Some(CoreError::CodebookMismatch) => EXIT_CODEBOOK_MISMATCH,
        Some(
            CoreError::InvalidInput(_)
            | CoreError::BadReadSet(_)
            | CoreError::BadCodebook(_)
            | CoreError::SamplingExhausted { .. }
            | CoreError::AlphabetTooSmall(_)
            | CoreError::WindowTooSmall(_)
            | CoreError::StringTooShort { .. }
            | CoreError::SymbolOutOfRange { .. }
            | CoreError::MOutOfRange { .. }
            | CoreError::NoFeasibleSubset { .. }
            | CoreError::RegimeViolation(_)
            | CoreError::InstanceTooLarge(_)
            | CoreError::ParameterMismatch,
        ) => EXIT_INVALID_INPUT,
        _ => 1,
    }
}

fn emit(out: &Option<String>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {path}"))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn default_budget(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("TANDEMDUP_BUDGET")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(50_000_000)
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let message = match (&args.message, &args.message_file) {
        (Some(text), None) => GString::parse(text, args.q, args.k)?,
        (None, Some(path)) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            let parsed = formats::parse_reads(&text)?;
            if parsed.q != args.q || parsed.k != args.k {
                return Err(anyhow!(CoreError::ParameterMismatch));
            }
            parsed.strings[0].clone()
        }
        _ => {
            return Err(anyhow!(CoreError::InvalidInput(
                "exactly one of --message / --message-file is required".into()
            )))
        }
    };
    let mut rng = ChaCha12Rng::seed_from_u64(args.seed);
    let attempts = args.count.saturating_mul(2000).saturating_add(10_000);
    let reads = sample_distinct_reads(&message, args.t, args.count, &mut rng, attempts)?;
    emit(
        &args.out,
        &formats::render_reads(args.q, args.k, reads.reads()),
    )
}

fn render_report(report: &DecodeReport, extra: &[(String, String)], json: bool) -> String {
    if json {
        let mut fields: Vec<String> = extra
            .iter()
            .map(|(k, v)| format!("\"{k}\": \"{v}\""))
            .collect();
        fields.push(format!("\"required_reads\": \"{}\"", report.required_reads));
        fields.push(format!("\"guaranteed\": {}", report.guaranteed));
        fields.push(format!("\"list_size\": {}", report.list_size));
        fields.push(format!("\"discarded\": {}", report.discarded));
        fields.push(format!("\"work_steps\": {}", report.work_steps));
        let list: Vec<String> = report.list.iter().map(|x| format!("\"{x}\"")).collect();
        fields.push(format!("\"list\": [{}]", list.join(", ")));
        format!("{{{}}}\n", fields.join(", "))
    } else {
        let mut out = String::new();
        for (k, v) in extra {
            out.push_str(&format!("{k}={v}\n"));
        }
        out.push_str(&format!("required_reads={}\n", report.required_reads));
        out.push_str(&format!("guaranteed={}\n", report.guaranteed));
        out.push_str(&format!("list_size={}\n", report.list_size));
        out.push_str(&format!("discarded={}\n", report.discarded));
        out.push_str(&format!("work_steps={}\n", report.work_steps));
        for (i, x) in report.list.iter().enumerate() {
            out.push_str(&format!("list.{i}={x}\n"));
        }
        out
    }
}

fn cmd_decode(args: DecodeArgs) -> Result<()> {
    let start = Instant::now();
    let text =
        fs::read_to_string(&args.reads).with_context(|| format!("reading {}", args.reads))?;
    let parsed = formats::parse_reads(&text)?;
    let reads = ReadSet::new(parsed.strings, args.t)?;
    let mut extra = vec![
        ("command".to_string(), "decode".to_string()),
        ("q".to_string(), parsed.q.to_string()),
        ("k".to_string(), parsed.k.to_string()),
        ("n".to_string(), reads.message_len().to_string()),
        ("t".to_string(), args.t.to_string()),
        ("m".to_string(), args.m.to_string()),
        ("reads".to_string(), reads.len().to_string()),
        ("root".to_string(), reads.reads()[0].root().to_string()),
    ];
    let report = match &args.ecc {
        None => {
            let filter = match args.filter {
                FilterArg::Typical => MembershipFilter::Typical,
                FilterArg::All => MembershipFilter::AcceptAll,
            };
            extra.push((
                "filter".to_string(),
                match filter {
                    MembershipFilter::Typical => "typical".to_string(),
                    MembershipFilter::AcceptAll => "all".to_string(),
                },
            ));
            list_decode_typical(&reads, args.m, filter)?
        }
        Some(path) => {
            let code_text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            let code = formats::parse_codebook(&code_text)?;
            let d = args.d.unwrap_or_else(|| code.d());
            extra.push(("d".to_string(), d.to_string()));
            extra.push(("codebook".to_string(), code.len().to_string()));
            list_decode_ecc(&reads, &code, args.m, d)?
        }
    };
    let rendered = render_report(&report, &extra, args.json);
    emit(&args.out, &rendered)?;
    eprintln!("elapsed_ms={}", start.elapsed().as_millis());
    Ok(())
}

fn cmd_tables(args: TablesArgs) -> Result<()> {
    let mut out = String::from("# n\tt\tm\td\ts\tdelta\tepsilon\te\tN\trequired\tregime\n");
    for &n in &args.n {
        for &d in &args.d {
            for &m in &args.m {
                let d_opt = if d == 0 { None } else { Some(d) };
                let exponent = exponent_e(n, args.t, m, args.q, args.k, d_opt);
                let uncertainty = uncertainty_typ(n, args.t, m, args.q, args.k, d_opt);
                let (s, delta, eps, e, mut regime) = match &exponent {
                    Ok(rep) => (
                        rep.s.to_string(),
                        rep.delta.to_string(),
                        rep.epsilon.map_or("-".to_string(), |v| v.to_string()),
                        rep.e.to_string(),
                        "ok",
                    ),
                    Err(_) => (
                        "-".to_string(),
                        "-".to_string(),
                        "-".to_string(),
                        "-".to_string(),
                        "violation",
                    ),
                };
                let (n_col, req_col) = match &uncertainty {
                    Ok(v) => (v.to_string(), (v + BigUint::from(1u32)).to_string()),
                    Err(_) => {
                        regime = "violation";
                        ("-".to_string(), "-".to_string())
                    }
                };
                out.push_str(&format!(
                    "{n}\t{t}\t{m}\t{d}\t{s}\t{delta}\t{eps}\t{e}\t{n_col}\t{req_col}\t{regime}\n",
                    t = args.t
                ));
            }
        }
    }
    emit(&args.out, &out)
}

fn cmd_mu(args: MuArgs) -> Result<()> {
    let budget = OracleBudget {
        max_states: default_budget(None),
        max_depth: 6,
    };
    let value = match (args.d, args.exhaustive) {
        (None, false) => lattice::mu(args.w, args.r, args.s),
        (None, true) => oracle::exhaustive_mu(args.w, args.r, args.s, &budget)?,
        (Some(d), false) => lattice::mu_d(args.w, args.r, args.s, d)?,
        (Some(d), true) => oracle::exhaustive_mu_d(args.w, args.r, args.s, d, &budget)?,
    };
    println!("mu={value}");
    Ok(())
}

fn cmd_sigma(args: SigmaArgs) -> Result<()> {
    let budget = OracleBudget {
        max_states: default_budget(None),
        max_depth: 6,
    };
    let value = match (args.d, args.exhaustive) {
        (None, false) => lattice::sigma(args.m, args.w, args.r)?,
        (None, true) => oracle::exhaustive_sigma(args.m, args.w, args.r, &budget)?,
        (Some(d), false) => lattice::sigma_d(args.m, args.w, args.r, d)?,
        (Some(d), true) => oracle::exhaustive_sigma_d(args.m, args.w, args.r, d, &budget)?,
    };
    println!("sigma={value}");
    Ok(())
}

fn cmd_uncertainty(args: UncertaintyArgs) -> Result<()> {
    match (args.n, args.w, args.r) {
        (Some(n), None, None) => {
            let q = args.q.ok_or_else(|| {
                anyhow!(CoreError::InvalidInput("--q is required with --n".into()))
            })?;
            let k = args.k.ok_or_else(|| {
                anyhow!(CoreError::InvalidInput("--k is required with --n".into()))
            })?;
            let value = uncertainty_typ(n, args.t, args.m, q, k, args.d)?;
            println!("required_reads={}", &value + BigUint::from(1u32));
            println!("uncertainty={value}");
        }
        (None, Some(w), Some(r)) => {
            let required = required_reads_at(w, r, args.t, args.m, args.d)?;
            println!("required_reads={required}");
            println!("uncertainty={}", required - BigUint::from(1u32));
        }
        _ => {
            return Err(anyhow!(CoreError::InvalidInput(
                "give either --n --q --k (windowed) or --w --r (pinned)".into()
            )))
        }
    }
    Ok(())
}

fn cmd_typical(args: TypicalArgs) -> Result<()> {
    match (&args.string, args.sample) {
        (Some(text), None) => {
            let x = GString::parse(text, args.q, args.k)?;
            let (w, r) = stats(&x);
            let window = TypicalityWindow::new(x.len() as u64, args.q as u64, args.k as u64)?;
            println!("n={}", x.len());
            println!("w={w}");
            println!("r={r}");
            println!("typical={}", is_typical(&x));
            if let Some((lo, hi)) = window.w_bounds() {
                println!("w_window={lo}..{hi}");
            }
            if let Some((lo, hi)) = window.r_bounds() {
                println!("r_window={lo}..{hi}");
            }
        }
        (None, Some(count)) => {
            let n = args.n.ok_or_else(|| {
                anyhow!(CoreError::InvalidInput(
                    "--n is required with --sample".into()
                ))
            })?;
            let mut rng = ChaCha12Rng::seed_from_u64(args.seed);
            let mut typical = 0u64;
            let mut sum_r = 0u64;
            for _ in 0..count {
                let symbols: Vec<u32> = (0..n)
                    .map(|_| rand::Rng::gen_range(&mut rng, 0..args.q))
                    .collect();
                let x = GString::new(symbols, args.q, args.k)?;
                if is_typical(&x) {
                    typical += 1;
                }
                sum_r += stats(&x).1;
            }
            let frac = typical as f64 / count as f64;
            println!("samples={count}");
            println!("typical_fraction={frac:.6}");
            println!("bound={:.6}", typical_fraction_bound(n as u64));
            println!("mean_r={:.4}", sum_r as f64 / count as f64);
            println!(
                "expected_r_leading={}",
                expected_r(n as u64, args.q as u64, args.k as u64)?
            );
        }
        _ => {
            return Err(anyhow!(CoreError::InvalidInput(
                "give exactly one of --string / --sample".into()
            )))
        }
    }
    Ok(())
}

fn cmd_codebook(args: CodebookArgs) -> Result<()> {
    let root = GString::parse(&args.root, args.q, args.k)?;
    let (w, _) = stats(&root);
    let mut code = build_code_greedy(&root, w, args.r, args.d)?;
    if args.typ {
        code = tandemdup::codes::SimplexCode::from_words(
            root,
            args.r,
            args.d,
            code.words().to_vec(),
            true,
        )?;
    }
    emit(&args.out, &formats::render_codebook(&code))
}

fn cmd_verify(args: VerifyArgs) -> Result<bool> {
    let budget = default_budget(args.budget);
    let outcome = verify::run(budget, args.seed, args.inject_fault)?;
    let mut stdout = std::io::stdout().lock();
    for line in &outcome.lines {
        writeln!(stdout, "{line}")?;
    }
    let status = if outcome.failures == 0 {
        "PASS"
    } else {
        "FAIL"
    };
    writeln!(
        stdout,
        "verify: {status} checks={} failures={}",
        outcome.checks, outcome.failures
    )?;
    Ok(outcome.failures == 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<bool> = match cli.command {
        Command::Simulate(args) => cmd_simulate(args).map(|()| true),
        Command::Decode(args) => cmd_decode(args).map(|()| true),
        Command::Tables(args) => cmd_tables(args).map(|()| true),
        Command::Mu(args) => cmd_mu(args).map(|()| true),
        Command::Sigma(args) => cmd_sigma(args).map(|()| true),
        Command::Uncertainty(args) => cmd_uncertainty(args).map(|()| true),
        Command::Typical(args) => cmd_typical(args).map(|()| true),
        Command::Codebook(args) => cmd_codebook(args).map(|()| true),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
