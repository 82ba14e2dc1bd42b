//! The `densclass` command line.
//!
//! ```text
//! densclass <subcommand> key=value ...
//! ```
//!
//! Every output starts with `#` metadata lines: tool version, the fully
//! resolved configuration, the seed and the generator id. Nothing else
//! (no timestamps, no host data) goes into the output, so rerunning a
//! command reproduces it byte for byte.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::bounds::{self, BoundParams, ThresholdStatus};
use crate::ca::{evolve, evolve_recorded, RingConfig, Rule, Symbol, WindowConfig};
use crate::eroder::verify_linear_eroder;
use crate::error::Error;
use crate::montecarlo::{self, Topology};
use crate::rng::{self, PRNG_ID};
use crate::sparseness::{cover_certificate, erase_up_to, OutsideMode, SiteSet, SparsenessParams};

pub const USAGE: &str = "\
usage: densclass <subcommand> key=value ...

  simulate     rule= n= [p= seed= | input=] [t_max=4n] [topology=ring|window]
               [background=0] [format=text|pbm] [out=]
  erode-check  rule= n_max= [background=0] [m=2] [out=]
  sparseness   k= l_max= [p= window= seed= | input=] [outside=empty|unknown] [out=]
  bounds       k= p= [n=5] [n_stop=8] [out=]
  sweep        rule= n= p=a:step:b|p1,p2,... trials= seed= [t_max=4n]
               [topology=ring|window] [background=0] [out=] [trials_out=]

seed is required whenever a configuration is sampled with 0 < p < 1.
";

#[derive(Debug)]
pub enum CliError {
    /// Bad invocation; exit status 2.
    Usage(String),
    /// The run itself failed; exit status 1.
    Runtime(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Runtime(e) => write!(f, "error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        match e {
            Error::InvalidArgument(m) => CliError::Usage(m),
            Error::UnknownRule(name) => CliError::Usage(format!("unknown rule `{name}`")),
            other => CliError::Runtime(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Runtime(e.into())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// Parsed `key=value` arguments. Every value read is recorded, defaults
/// included, in the order read, for the metadata header.
struct Params {
    cmd: String,
    given: BTreeMap<String, String>,
    resolved: Vec<(String, String)>,
}

impl Params {
    fn parse(cmd: &str, args: &[String], allowed: &[&str]) -> CliResult<Params> {
        let mut given = BTreeMap::new();
        for a in args {
            let Some((k, v)) = a.split_once('=') else {
                return usage(format!("expected key=value, got `{a}`"));
            };
            if !allowed.contains(&k) {
                return usage(format!("unknown key `{k}` for {cmd}"));
            }
            if given.insert(k.to_string(), v.to_string()).is_some() {
                return usage(format!("key `{k}` given twice"));
            }
        }
        Ok(Params {
            cmd: cmd.to_string(),
            given,
            resolved: Vec::new(),
        })
    }

    fn has(&self, key: &str) -> bool {
        self.given.contains_key(key)
    }

    fn record(&mut self, key: &str, value: &str) {
        self.resolved.push((key.to_string(), value.to_string()));
    }

    fn opt_str(&mut self, key: &str) -> Option<String> {
        let v = self.given.get(key).cloned();
        if let Some(v) = &v {
            self.record(key, v);
        }
        v
    }

    fn str_or(&mut self, key: &str, default: &str) -> String {
        let v = self.given.get(key).cloned().unwrap_or_else(|| default.to_string());
        self.record(key, &v);
        v
    }

    fn req_str(&mut self, key: &str) -> CliResult<String> {
        match self.opt_str(key) {
            Some(v) => Ok(v),
            None => usage(format!("{} needs `{key}=`", self.cmd)),
        }
    }

    fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> CliResult<T> {
        v.parse()
            .or_else(|_| usage(format!("`{key}={v}` is not a valid number")))
    }

    fn req_num<T: std::str::FromStr>(&mut self, key: &str) -> CliResult<T> {
        let v = self.req_str(key)?;
        Self::parse_num(key, &v)
    }

    fn opt_num<T: std::str::FromStr>(&mut self, key: &str) -> CliResult<Option<T>> {
        self.opt_str(key).map(|v| Self::parse_num(key, &v)).transpose()
    }

    fn num_or<T: std::str::FromStr + ToString>(&mut self, key: &str, default: T) -> CliResult<T> {
        match self.given.get(key).cloned() {
            Some(v) => {
                self.record(key, &v);
                Self::parse_num(key, &v)
            }
            None => {
                self.record(key, &default.to_string());
                Ok(default)
            }
        }
    }

    fn header(&self, seed: Option<u64>) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# densclass {}", env!("CARGO_PKG_VERSION"));
        let _ = write!(out, "# config: {}", self.cmd);
        for (k, v) in &self.resolved {
            let _ = write!(out, " {k}={v}");
        }
        out.push('\n');
        match seed {
            Some(s) => {
                let _ = writeln!(out, "# seed: {s}");
            }
            None => out.push_str("# seed: none\n"),
        }
        let _ = writeln!(out, "# prng: {PRNG_ID}");
        out
    }
}

fn parse_probability(key: &str, v: &str) -> CliResult<(BigRational, f64)> {
    let q = bounds::parse_rational(v).or_else(|_| usage(format!("`{key}={v}` is not a number")))?;
    if q < BigRational::zero() || q > BigRational::one() {
        return usage(format!("`{key}={v}` is not in [0, 1]"));
    }
    let f = q.to_f64().unwrap_or(f64::NAN);
    Ok((q, f))
}

/// `a:step:b` (inclusive, exact) or a comma list.
fn parse_p_list(v: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = v.split(':').collect();
    if parts.len() == 3 {
        let (a, _) = parse_probability("p", parts[0])?;
        let (b, _) = parse_probability("p", parts[2])?;
        let step = bounds::parse_rational(parts[1]).or_else(|_| usage("bad step in p range"))?;
        if step <= BigRational::zero() {
            return usage("the step of a p range must be positive");
        }
        let mut out = Vec::new();
        let mut x = a;
        while x <= b {
            out.push(x.to_f64().unwrap_or(f64::NAN));
            x += &step;
            if out.len() > 1_000_000 {
                return usage("p range has too many points");
            }
        }
        if out.is_empty() {
            return usage("empty p range");
        }
        return Ok(out);
    }
    if parts.len() != 1 {
        return usage(format!("cannot parse p list `{v}`"));
    }
    v.split(',').map(|s| parse_probability("p", s.trim()).map(|(_, f)| f)).collect()
}

fn parse_symbol(key: &str, v: &str) -> CliResult<Symbol> {
    match v {
        "0" => Ok(Symbol::Zero),
        "1" => Ok(Symbol::One),
        _ => usage(format!("`{key}` must be 0 or 1, got `{v}`")),
    }
}

fn rule_arg(p: &mut Params) -> CliResult<Rule> {
    let name = p.req_str("rule")?;
    Ok(Rule::by_name(&name)?)
}

fn seed_arg(p: &mut Params, needed: bool) -> CliResult<Option<u64>> {
    let seed = p.opt_num::<u64>("seed")?;
    if needed && seed.is_none() {
        return usage(format!("{} samples a random configuration and needs `seed=`", p.cmd));
    }
    Ok(seed)
}

fn positive(key: &str, v: u64) -> CliResult<u64> {
    if v == 0 {
        return usage(format!("`{key}` must be at least 1"));
    }
    Ok(v)
}

fn topology_arg(p: &mut Params, n: usize) -> CliResult<Topology> {
    match p.str_or("topology", "ring").as_str() {
        "ring" => {
            if p.has("background") {
                return usage("`background` only applies to topology=window");
            }
            Ok(Topology::Ring { n })
        }
        "window" => {
            let bg = p.str_or("background", "0");
            Ok(Topology::Window {
                background: parse_symbol("background", &bg)?,
                width: n,
            })
        }
        other => usage(format!("topology must be ring or window, got `{other}`")),
    }
}

fn read_bits(path: &str) -> CliResult<String> {
    let text = std::fs::read_to_string(path)?;
    let bits: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(c) = bits.chars().find(|&c| c != '0' && c != '1') {
        return Err(CliError::Runtime(Error::Parse(format!(
            "{path}: unexpected character {c:?}"
        ))));
    }
    if bits.is_empty() {
        return Err(CliError::Runtime(Error::Parse(format!("{path}: no cells"))));
    }
    Ok(bits)
}

struct Output {
    path: Option<PathBuf>,
}

impl Output {
    fn arg(p: &mut Params, key: &str) -> Output {
        Output {
            path: p.opt_str(key).map(PathBuf::from),
        }
    }

    fn emit(&self, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
        match &self.path {
            Some(path) => std::fs::write(path, text)?,
            None => stdout.write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

fn cmd_simulate(args: &[String], stdout: &mut dyn Write) -> CliResult<()> {
    let mut p = Params::parse(
        "simulate",
        args,
        &["rule", "n", "p", "seed", "input", "t_max", "topology", "background", "format", "out"],
    )?;
    let rule = rule_arg(&mut p)?;
    let input = p.opt_str("input");
    let bits = input.as_deref().map(read_bits).transpose()?;
    let n = match (&bits, p.has("n")) {
        (Some(b), false) => b.len(),
        (Some(b), true) => {
            let n: usize = p.req_num("n")?;
            if n != b.len() {
                return usage(format!("n={n} but the input file has {} cells", b.len()));
            }
            n
        }
        (None, _) => positive("n", p.req_num("n")?)? as usize,
    };
    let (seed, prob) = if bits.is_some() {
        if p.has("p") || p.has("seed") {
            return usage("give either input= or p= and seed=, not both");
        }
        (None, None)
    } else {
        let pv = p.req_str("p")?;
        let (q, f) = parse_probability("p", &pv)?;
        let random = !(q.is_zero() || q.is_one());
        (seed_arg(&mut p, random)?, Some(f))
    };
    let t_max: usize = p.num_or("t_max", 4 * n)?;
    let topology = topology_arg(&mut p, n)?;
    let format = p.str_or("format", "text");
    if format != "text" && format != "pbm" {
        return usage(format!("format must be text or pbm, got `{format}`"));
    }
    let out = Output::arg(&mut p, "out");
    let header = p.header(seed);

    let cells = match (&bits, prob) {
        (Some(b), _) => b.chars().map(|c| c == '1').collect::<Vec<bool>>(),
        (None, Some(f)) => rng::bernoulli_bits(n, f, seed.unwrap_or(0))?.iter().collect(),
        (None, None) => unreachable!("either input or p is present"),
    };
    let comments: Vec<String> = header
        .lines()
        .map(|l| l.trim_start_matches("# ").to_string())
        .collect();
    let text = match topology {
        Topology::Ring { .. } => {
            let x = RingConfig::new(crate::ca::BitRow::from_bools(cells))?;
            if format == "pbm" {
                evolve_recorded(&rule, &x, t_max)?.to_pbm(&comments)
            } else {
                format!("{header}{}\n", evolve(&rule, &x, t_max)?)
            }
        }
        Topology::Window { background, .. } => {
            let x = WindowConfig::new(background, 0, crate::ca::BitRow::from_bools(cells));
            if format == "pbm" {
                evolve_recorded(&rule, &x, t_max)?.to_pbm(&comments)
            } else {
                let y = evolve(&rule, &x, t_max)?;
                let line: String = (y.start()..y.end()).map(|i| y.get(i).as_char()).collect();
                format!("{header}# window_start: {}\n{line}\n", y.start())
            }
        }
    };
    out.emit(&text, stdout)
}

fn cmd_erode_check(args: &[String], stdout: &mut dyn Write) -> CliResult<()> {
    let mut p = Params::parse("erode-check", args, &["rule", "background", "m", "n_max", "out"])?;
    let rule = rule_arg(&mut p)?;
    let bg = p.str_or("background", "0");
    let background = parse_symbol("background", &bg)?;
    let m: usize = p.num_or("m", 2)?;
    let n_max = positive("n_max", p.req_num("n_max")?)? as usize;
    let out = Output::arg(&mut p, "out");
    let header = p.header(None);
    let report = verify_linear_eroder(&rule, background, m, n_max)?;
    out.emit(&format!("{header}{}", report.to_csv()), stdout)
}

fn cmd_sparseness(args: &[String], stdout: &mut dyn Write) -> CliResult<()> {
    let mut p = Params::parse(
        "sparseness",
        args,
        &["k", "l_max", "p", "window", "seed", "input", "outside", "out"],
    )?;
    let k = positive("k", p.req_num("k")?)?;
    let l_max = positive("l_max", p.req_num("l_max")?)?;
    let outside: OutsideMode = p.str_or("outside", "empty").parse()?;
    let params = SparsenessParams::new(k)?;
    let (e, seed) = match p.opt_str("input") {
        Some(path) => {
            if p.has("p") || p.has("window") || p.has("seed") {
                return usage("give either input= or p=, window= and seed=, not both");
            }
            (SiteSet::parse(0, &read_bits(&path)?, outside)?, None)
        }
        None => {
            let pv = p.req_str("p")?;
            let (q, f) = parse_probability("p", &pv)?;
            let window = positive("window", p.req_num("window")?)? as usize;
            let random = !(q.is_zero() || q.is_one());
            let seed = seed_arg(&mut p, random)?.unwrap_or(0);
            let bits = rng::bernoulli_bits(window, f, seed)?;
            let members = bits.iter().enumerate().filter(|&(_, b)| b).map(|(i, _)| i as i64);
            (SiteSet::new(0..=window as i64 - 1, members, outside)?, Some(seed))
        }
    };
    let out = Output::arg(&mut p, "out");
    let header = p.header(seed);
    let trace = erase_up_to(&e, &params, l_max);
    let cert = cover_certificate(&trace);
    let text = format!("{header}{}# certificate: {}\n", trace.to_csv(), cert.summary_line());
    out.emit(&text, stdout)
}

fn cmd_bounds(args: &[String], stdout: &mut dyn Write) -> CliResult<()> {
    let mut p = Params::parse("bounds", args, &["k", "p", "n", "n_stop", "out"])?;
    let k = positive("k", p.req_num("k")?)?;
    let pv = p.req_str("p")?;
    let (q, _) = parse_probability("p", &pv)?;
    let n: u32 = p.num_or("n", 5)?;
    let n_stop: u32 = p.num_or("n_stop", 8)?;
    if n > bounds::MAX_DOUBLING - 1 || n_stop > bounds::MAX_DOUBLING - 1 {
        return usage(format!("n and n_stop must be below {}", bounds::MAX_DOUBLING));
    }
    let out = Output::arg(&mut p, "out");
    let header = p.header(None);
    let params = BoundParams::new(k, q)?;
    let alpha = bounds::alpha(&params);
    let status = ThresholdStatus::of(&params);

    let sci = |x: &BigRational| bounds::to_scientific(x, 6);
    let mut text = header;
    let _ = writeln!(text, "# alpha: {alpha} ({}) {status}", sci(&alpha));
    let threshold = bounds::p_threshold(k);
    let _ = writeln!(text, "# p_threshold: {threshold} ({})", sci(&threshold));
    text.push_str("n,l_n,f_n,closed_form_bound,closed_form_holds,alpha_pow,tail_bound\n");
    let lengths = bounds::checkpoint_lengths(k, n);
    for (i, l) in (1..=n).zip(&lengths) {
        let counts = bounds::tree_count_bound(k, i)?;
        let unerased = bounds::unerased_prob_bound(&params, i)?;
        let tail = if status == ThresholdStatus::Below {
            sci(&bounds::borel_cantelli_tail(&params, i, n_stop.max(i))?.total())
        } else {
            String::new()
        };
        let int = |v: &num_bigint::BigUint| sci(&BigRational::from_integer(v.clone().into()));
        let _ = writeln!(
            text,
            "{i},{l},{},{},{},{},{tail}",
            int(&counts.recursion.value),
            int(&counts.closed_form.value),
            counts.closed_form_holds(),
            sci(&unerased.alpha_pow),
        );
    }
    out.emit(&text, stdout)
}

fn cmd_sweep(args: &[String], stdout: &mut dyn Write) -> CliResult<()> {
    let mut p = Params::parse(
        "sweep",
        args,
        &["rule", "n", "p", "trials", "seed", "t_max", "topology", "background", "out", "trials_out"],
    )?;
    let rule = rule_arg(&mut p)?;
    let n = positive("n", p.req_num("n")?)? as usize;
    let pv = p.req_str("p")?;
    let p_list = parse_p_list(&pv)?;
    let trials = positive("trials", p.req_num("trials")?)? as usize;
    let seed = seed_arg(&mut p, true)?.expect("required");
    let t_max: usize = p.num_or("t_max", 4 * n)?;
    let topology = topology_arg(&mut p, n)?;
    if matches!(topology, Topology::Ring { .. }) && n.is_multiple_of(2) {
        return usage(format!("ring length n={n} must be odd"));
    }
    let out = Output::arg(&mut p, "out");
    let trials_out = p.opt_str("trials_out").map(PathBuf::from);
    let header = p.header(Some(seed));
    let result = montecarlo::sweep(&rule, topology, &p_list, trials, t_max, seed)?;
    if let Some(path) = trials_out {
        std::fs::write(path, format!("{header}{}", result.trials_csv()))?;
    }
    out.emit(&format!("{header}{}", result.to_csv()), stdout)
}

/// Runs one invocation; `args` excludes the program name.
pub fn run(args: &[String], stdout: &mut dyn Write) -> CliResult<()> {
    let Some((cmd, rest)) = args.split_first() else {
        return usage("missing subcommand");
    };
    match cmd.as_str() {
        "simulate" => cmd_simulate(rest, stdout),
        "erode-check" => cmd_erode_check(rest, stdout),
        "sparseness" => cmd_sparseness(rest, stdout),
        "bounds" => cmd_bounds(rest, stdout),
        "sweep" => cmd_sweep(rest, stdout),
        "help" | "--help" | "-h" => {
            stdout.write_all(USAGE.as_bytes())?;
            Ok(())
        }
        other => usage(format!("unknown subcommand `{other}`")),
    }
}
