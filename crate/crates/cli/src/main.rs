mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use fibtree::asymptotics::{
    parse_cert_ids, ratio_cn, CertId, CertificateRecord, Certifier, Verdict,
};
use fibtree::chain::{reduction_chain, restricted_tree, shortest_walk_length};
use fibtree::counting::{cache, Counter, Identity, SeqName};
use fibtree::tree::{parity_class, Constraint, Oracle, DEFAULT_DEPTH_CAP};
use fibtree::walk_prob::{
    absorption_P, escape_probability, simulate_escape, simulate_occurrences, WalkProbParams,
};
use fibtree::{Error, Pair};

use output::{Format, Table};

const EXIT_USAGE: u8 = 1;
const EXIT_CERTIFICATION: u8 = 2;
const EXIT_DISAGREEMENT: u8 = 3;

/// Significant digits printed for interval endpoints.
const DIGITS: u32 = 20;

#[derive(Parser, Debug)]
#[command(
    name = "fibtree",
    version,
    about = "Exact pair counts and certified bounds for the random Fibonacci tree"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    /// Deepest walk the brute-force oracle may enumerate.
    #[arg(long, env = "FIBTREE_DEPTH_CAP", default_value_t = DEFAULT_DEPTH_CAP, global = true)]
    depth_cap: u32,

    /// Largest working precision, in bits, for interval certificates.
    #[arg(long, env = "FIBTREE_PRECISION_CAP", default_value_t = fibtree::asymptotics::DEFAULT_PRECISION_CAP, global = true)]
    precision_cap: u32,

    /// Binary sequence cache, read if present and rewritten when extended.
    #[arg(long, env = "FIBTREE_CACHE", global = true)]
    cache: Option<PathBuf>,

    /// Seed for simulations that do not give one explicitly.
    #[arg(long, default_value_t = 42, global = true)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact values of S, B, A11, D or A<k> over an index range (`1..4` or `1 4`).
    Seq {
        name: String,
        #[arg(num_args = 1..=2, required = true)]
        range: Vec<String>,
        /// Shortest-walk length, required for `Ak`.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Occurrences of the pair (a, b) at depth 3n + m.
    Count {
        a: u64,
        b: u64,
        n: usize,
        /// Also enumerate every walk and compare.
        #[arg(long)]
        oracle: bool,
    },
    /// Shortest walk from (1, 1) to (a, b).
    Sw { a: u64, b: u64 },
    /// Interval certificates: an id, `cor31`, `all`, or `cn` / `cn<N>`.
    Certify {
        id: String,
        from: Option<usize>,
        to: Option<usize>,
    },
    /// Escape probability of the p-biased walk.
    Walkprob {
        p: f64,
        /// Monte Carlo run: TRIALS HORIZON [SEED].
        #[arg(long, num_args = 2..=3, value_names = ["TRIALS", "HORIZON", "SEED"])]
        simulate: Option<Vec<u64>>,
        /// Report the histogram of returns to (1, 1) instead of the estimate.
        #[arg(long, requires = "simulate")]
        occurrences: bool,
    },
    /// Cross-check exact counts against exhaustive enumeration.
    Oracle {
        /// Check every coprime pair with a shortest walk this short.
        #[arg(long, default_value_t = 7)]
        max_sw: u32,
    },
    /// Check exact identities (a name or `all`) over an index range.
    Identities {
        name: String,
        from: usize,
        to: usize,
    },
}

struct Run {
    table: Table,
    code: u8,
}

impl Run {
    fn ok(table: Table) -> Self {
        Run { table, code: 0 }
    }
}

fn big(v: impl ToString) -> Value {
    Value::String(v.to_string())
}

fn parse_range(parts: &[String]) -> Result<(usize, usize), Error> {
    let bad = |s: &str| Error::InvalidParams(format!("bad index range `{s}`"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad(s));
    let (from, to) = match parts {
        [one] => match one.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
            None => (num(one)?, num(one)?),
        },
        [a, b] => (num(a)?, num(b)?),
        _ => return Err(bad(&parts.join(" "))),
    };
    if from > to {
        return Err(Error::InvalidParams(format!("empty range {from}..{to}")));
    }
    Ok((from, to))
}

fn parse_seq_name(name: &str, k: Option<usize>) -> Result<SeqName, Error> {
    let upper = name.to_ascii_uppercase();
    let seq = match upper.as_str() {
        "S" => SeqName::S,
        "B" => SeqName::B,
        "A11" | "A" => SeqName::A11,
        "D" => SeqName::D,
        "AK" => SeqName::Ak(k.ok_or_else(|| Error::InvalidParams("`Ak` needs --k".into()))?),
        other => match other.strip_prefix('A').and_then(|d| d.parse().ok()) {
            Some(k) => SeqName::Ak(k),
            None => return Err(Error::InvalidParams(format!("unknown sequence `{name}`"))),
        },
    };
    Ok(seq)
}

fn pair_label(p: Pair) -> String {
    format!("{}:{}", p.a, p.b)
}

fn cmd_seq(
    counter: &mut Counter,
    name: &str,
    range: &[String],
    k: Option<usize>,
) -> Result<Run, Error> {
    let seq = parse_seq_name(name, k)?;
    let (from, to) = parse_range(range)?;
    let mut table = Table::new("seq", &["sequence", "n", "value"])
        .param("name", seq.to_string())
        .param("from", from)
        .param("to", to);
    for n in from..=to {
        let v = match seq {
            SeqName::S => counter.s(n),
            SeqName::B => counter.b(n),
            SeqName::A11 => counter.a11(n),
            SeqName::D => counter.d(n),
            SeqName::Ak(k) => counter.ak(k, n),
        };
        table.push(vec![json!(seq.to_string()), json!(n), big(v)]);
    }
    Ok(Run::ok(table))
}

fn cmd_count(
    counter: &mut Counter,
    p: Pair,
    n: usize,
    oracle: Option<Oracle>,
) -> Result<Run, Error> {
    p.require_countable()?;
    let depth = 3 * n as u64 + u64::from(parity_class(p)?.m());
    let sw = shortest_walk_length(p)?;
    let exact = counter.count_pair(p, n)?;
    let mut columns = vec!["pair", "n", "depth", "sw", "value"];
    if oracle.is_some() {
        columns.extend(["oracle", "agree"]);
    }
    let mut table = Table::new("count", &columns)
        .param("a", p.a)
        .param("b", p.b)
        .param("n", n);
    let mut row = vec![
        json!(pair_label(p)),
        json!(n),
        json!(depth),
        json!(sw),
        big(&exact),
    ];
    let mut code = 0;
    if let Some(o) = oracle {
        let brute = o.count(p, n as u32)?;
        let agree = exact == brute.into();
        if !agree {
            code = EXIT_DISAGREEMENT;
        }
        row.extend([big(brute), json!(agree)]);
    }
    table.push(row);
    Ok(Run { table, code })
}

fn cmd_sw(p: Pair) -> Result<Run, Error> {
    let chain = reduction_chain(p)?;
    let labels: Vec<String> = chain.pairs.iter().map(|&q| pair_label(q)).collect();
    let nodes: Vec<String> = chain.forward_nodes().iter().map(u64::to_string).collect();
    let branches: String = chain
        .forward_branches()
        .iter()
        .map(|b| match b {
            fibtree::Branch::Left => 'L',
            fibtree::Branch::Right => 'R',
        })
        .collect();
    let mut table = Table::new("sw", &["pair", "length", "chain", "nodes", "branches"])
        .param("a", p.a)
        .param("b", p.b);
    table.push(vec![
        json!(pair_label(p)),
        json!(chain.len()),
        json!(labels.join(" ")),
        json!(nodes.join(" ")),
        json!(branches),
    ]);
    Ok(Run::ok(table))
}

/// Index ranges over which each bound is claimed.
fn default_range(id: CertId) -> (usize, usize) {
    match id {
        CertId::Robbins | CertId::Binom3n | CertId::Cor41 => (1, 2000),
        CertId::AInequality => (0, 2000),
        CertId::ThmA | CertId::DIneq => (100, 5000),
        CertId::Cor31S | CertId::Cor31B | CertId::A12 | CertId::A21 => (100, 2000),
    }
}

fn cmd_certify(
    counter: &mut Counter,
    cap: u32,
    id: &str,
    from: Option<usize>,
    to: Option<usize>,
) -> Result<Run, Error> {
    if let Some(rest) = id.strip_prefix("cn").or_else(|| id.strip_prefix("Cn")) {
        let n_default = rest.parse::<usize>().ok();
        let from = from.or(n_default).unwrap_or(10_000);
        let to = to.unwrap_or(from);
        let mut table = Table::new("certify", &["id", "n", "lo", "hi"])
            .param("id", "cn")
            .param("from", from)
            .param("to", to);
        for n in from..=to {
            let iv = ratio_cn(counter, n, 1e-12)?;
            let (lo, hi) = iv.to_decimal(DIGITS);
            table.push(vec![json!("cn"), json!(n), json!(lo), json!(hi)]);
        }
        return Ok(Run::ok(table));
    }
    let ids = parse_cert_ids(id)?;
    let columns: Vec<&'static str> = CertificateRecord::CSV_HEADER.split(',').collect();
    let mut table = Table::new("certify", &columns)
        .param("id", id)
        .param("precision_cap", cap);
    if let Some(f) = from {
        table = table.param("from", f);
    }
    if let Some(t) = to {
        table = table.param("to", t);
    }
    let mut certifier = Certifier::with_counter(std::mem::take(counter), cap);
    let mut code = 0;
    for cid in ids {
        let (dlo, dhi) = default_range(cid);
        let lo = from.unwrap_or(dlo);
        let hi = to.unwrap_or(if from.is_some() { lo } else { dhi });
        let certs = match certifier.certify_range(cid, lo, hi) {
            Ok(c) => c,
            Err(e) => {
                *counter = certifier.into_counter();
                return Err(e);
            }
        };
        for c in certs {
            if c.verdict == Verdict::Fails {
                code = EXIT_CERTIFICATION;
            }
            let rec = c.record(DIGITS);
            let row = serde_json::to_value(&rec).expect("serializable");
            let obj = row.as_object().expect("record is an object");
            table.push(columns.iter().map(|k| obj[*k].clone()).collect());
        }
    }
    *counter = certifier.into_counter();
    Ok(Run { table, code })
}

fn cmd_walkprob(
    p: f64,
    simulate: Option<&[u64]>,
    occurrences: bool,
    seed: u64,
) -> Result<Run, Error> {
    let closed = escape_probability(p)?;
    let p2 = absorption_P(2, p)?;
    let params = match simulate {
        Some(&[trials, horizon]) => Some(WalkProbParams::new(p, trials, horizon, seed)?),
        Some(&[trials, horizon, s]) => Some(WalkProbParams::new(p, trials, horizon, s)?),
        Some(_) => {
            return Err(Error::InvalidParams(
                "--simulate takes TRIALS HORIZON [SEED]".into(),
            ))
        }
        None => None,
    };
    if occurrences {
        let params = params.expect("clap enforces --simulate");
        let mut table = Table::new("walkprob", &["revisits", "count", "fraction"])
            .param("p", p)
            .param("trials", params.trials)
            .param("horizon", params.horizon)
            .param("seed", params.seed)
            .param("rng", fibtree::walk_prob::RNG_NAME);
        for (k, count) in simulate_occurrences(&params) {
            table.push(vec![
                json!(k),
                json!(count),
                json!(count as f64 / params.trials as f64),
            ]);
        }
        return Ok(Run::ok(table));
    }
    let mut table = Table::new(
        "walkprob",
        &[
            "p",
            "escape",
            "absorption_p2",
            "estimate",
            "half_width",
            "escaped",
            "trials",
            "horizon",
            "seed",
            "rng",
        ],
    )
    .param("p", p);
    let mut row = vec![json!(p), json!(closed), json!(p2)];
    match params {
        Some(params) => {
            let est = simulate_escape(&params);
            row.extend([
                json!(est.estimate),
                json!(est.half_width),
                json!(est.escaped),
                json!(est.trials),
                json!(est.horizon),
                json!(est.seed),
                json!(est.rng),
            ]);
        }
        None => row.extend(std::iter::repeat_n(Value::Null, 7)),
    }
    table.push(row);
    Ok(Run::ok(table))
}

fn cmd_oracle(counter: &mut Counter, max_sw: u32, cap: u32) -> Result<Run, Error> {
    let oracle = Oracle::new(cap);
    let mut pairs: Vec<Pair> = restricted_tree(max_sw, max_sw.max(cap))?
        .into_iter()
        .map(|o| o.pair)
        .filter(|p| p.a > 0 && p.b > 0)
        .collect();
    pairs.sort();
    pairs.dedup();
    let profile = oracle.depth_profile(&pairs, cap)?;
    let mut table = Table::new("oracle", &["target", "depth", "exact", "oracle", "agree"])
        .param("max_sw", max_sw)
        .param("depth_cap", cap);
    let mut code = 0;
    for (i, &p) in pairs.iter().enumerate() {
        let m = parity_class(p)?.m();
        for depth in (m..=cap).step_by(3) {
            let exact = counter.count_pair(p, ((depth - m) / 3) as usize)?;
            let brute = profile[depth as usize][i];
            let agree = exact == brute.into();
            if !agree {
                code = EXIT_DISAGREEMENT;
            }
            table.push(vec![
                json!(pair_label(p)),
                json!(depth),
                big(exact),
                big(brute),
                json!(agree),
            ]);
        }
    }
    for n in 0..=cap / 3 {
        let idx = n as usize;
        for (name, constraint, exact) in [
            ("A11", Constraint::Unconstrained, counter.a11(idx)),
            ("B", Constraint::ZeroAvoiding, counter.b(idx)),
            ("S", Constraint::Primitive, counter.s(idx)),
        ] {
            let brute = oracle.count_constrained(n, constraint)?;
            let agree = exact == brute.into();
            if !agree {
                code = EXIT_DISAGREEMENT;
            }
            table.push(vec![
                json!(name),
                json!(3 * n),
                big(exact),
                big(brute),
                json!(agree),
            ]);
        }
    }
    Ok(Run { table, code })
}

fn cmd_identities(counter: &mut Counter, name: &str, from: usize, to: usize) -> Result<Run, Error> {
    let ids: Vec<Identity> = if name.eq_ignore_ascii_case("all") {
        Identity::ALL.to_vec()
    } else {
        vec![name.parse()?]
    };
    if from > to {
        return Err(Error::InvalidParams(format!("empty range {from}..{to}")));
    }
    let mut table = Table::new("identities", &["identity", "n", "holds"])
        .param("name", name)
        .param("from", from)
        .param("to", to);
    let mut code = 0;
    for id in ids {
        for n in from.max(id.min_index())..=to {
            let holds = counter.check_identity(id, n)?;
            if !holds {
                code = EXIT_DISAGREEMENT;
            }
            table.push(vec![json!(id.name()), json!(n), json!(holds)]);
        }
    }
    Ok(Run { table, code })
}

fn load_counter(path: Option<&PathBuf>) -> (Counter, usize) {
    if let Some(path) = path.filter(|p| p.exists()) {
        match cache::load(path) {
            Ok(seqs) => {
                let top = seqs.top();
                return (Counter::from_sequences(seqs), top);
            }
            Err(e) => eprintln!("warning: ignoring cache {}: {e}", path.display()),
        }
    }
    (Counter::new(), 0)
}

fn run(cli: &Cli, counter: &mut Counter) -> Result<Run, Error> {
    match &cli.command {
        Command::Seq { name, range, k } => cmd_seq(counter, name, range, *k),
        Command::Count { a, b, n, oracle } => cmd_count(
            counter,
            Pair::new(*a, *b),
            *n,
            oracle.then(|| Oracle::new(cli.depth_cap)),
        ),
        Command::Sw { a, b } => cmd_sw(Pair::new(*a, *b)),
        Command::Certify { id, from, to } => {
            cmd_certify(counter, cli.precision_cap, id, *from, *to)
        }
        Command::Walkprob {
            p,
            simulate,
            occurrences,
        } => cmd_walkprob(*p, simulate.as_deref(), *occurrences, cli.seed),
        Command::Oracle { max_sw } => cmd_oracle(counter, *max_sw, cli.depth_cap),
        Command::Identities { name, from, to } => cmd_identities(counter, name, *from, *to),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (mut counter, loaded_top) = load_counter(cli.cache.as_ref());
    let outcome = run(&cli, &mut counter);
    if let Some(path) = &cli.cache {
        if counter.sequences().top() > loaded_top {
            if let Err(e) = cache::save(counter.sequences(), path) {
                eprintln!("warning: could not write cache: {e}");
            }
        }
    }
    match outcome {
        Ok(run) => {
            print!("{}", run.table.render(cli.format));
            ExitCode::from(run.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
