//! Command-line front end: proposition checks, map denotation, deterministic
//! sampling and the measurement demo.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check fails,
//! 2 on malformed input (flags, files, unknown ids).

use std::fs;
use std::process::ExitCode;

use hdlab_core::dilation;
use hdlab_core::group::FiniteAbelianGroup;
use hdlab_core::hypercube::{self, DhState};
use hdlab_core::io;
use hdlab_core::verify::{self, PropConfig, PropId, SampleValue, VerificationReport};

const USAGE: &str = "\
hdlab: numerical laboratory for density hypercubes, double dilation and double mixing

USAGE:
  hdlab check --prop <1..8|eq9|dm-sub-dd|hopf|all>
              [--group <SPEC[,SPEC…]>] [--dim <D>] [--trials <N>]
              [--seed <S>] [--tol <T>] [--format <text|json>]
  hdlab denote --in <map-file> --out <tensor-file>
  hdlab sample --kind <dh-state|dd-state|cp-map> --dim <D> --seed <S> --out <file>
  hdlab demo povm --state <state-file>

Group specs look like Z2, Z3, Z2xZ2 (case-insensitive). The default battery
runs on Z2, Z3 and Z2xZ2 with 200 trials, seed 42 and tolerance 1e-9. The
HDLAB_SEED environment variable overrides the default seed; an explicit
--seed flag wins over both.
";

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args().skip(1).collect()))
}

fn usage_error(message: &str) -> u8 {
    eprintln!("error: {message}");
    eprintln!();
    eprintln!("{USAGE}");
    2
}

fn run(args: Vec<String>) -> u8 {
    match args.first().map(String::as_str) {
        Some("check") => cmd_check(&args[1..]),
        Some("denote") => cmd_denote(&args[1..]),
        Some("sample") => cmd_sample(&args[1..]),
        Some("demo") => cmd_demo(&args[1..]),
        Some("--help") | Some("-h") | Some("help") => {
            println!("{USAGE}");
            0
        }
        Some(other) => usage_error(&format!("unknown subcommand {other:?}")),
        None => usage_error("missing subcommand"),
    }
}

/// Splits `args` into flag/value pairs, rejecting anything else.
fn parse_flags(args: &[String]) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(flag) = it.next() {
        if !flag.starts_with("--") {
            return Err(format!("unexpected argument {flag:?}"));
        }
        let value = it
            .next()
            .ok_or_else(|| format!("flag {flag} needs a value"))?;
        out.push((flag.clone(), value.clone()));
    }
    Ok(out)
}

fn lookup<'a>(flags: &'a [(String, String)], name: &str) -> Option<&'a str> {
    flags
        .iter()
        .rev()
        .find(|(f, _)| f == name)
        .map(|(_, v)| v.as_str())
}

fn default_seed() -> u64 {
    std::env::var("HDLAB_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(42)
}

fn cmd_check(args: &[String]) -> u8 {
    let flags = match parse_flags(args) {
        Ok(f) => f,
        Err(e) => return usage_error(&e),
    };
    let prop = match lookup(&flags, "--prop") {
        Some(p) => p.to_string(),
        None => return usage_error("check needs --prop"),
    };
    let mut cfg = PropConfig { seed: default_seed(), ..PropConfig::default() };
    if let Some(spec) = lookup(&flags, "--group") {
        let mut groups = Vec::new();
        for part in spec.split(',') {
            match FiniteAbelianGroup::parse(part) {
                Ok(g) => groups.push(g),
                Err(e) => return usage_error(&e.to_string()),
            }
        }
        cfg.groups = groups;
    } else if let Some(dim) = lookup(&flags, "--dim") {
        match dim.parse::<u32>() {
            Ok(d) if d >= 1 => cfg.groups = vec![FiniteAbelianGroup::cyclic(d)],
            _ => return usage_error(&format!("invalid --dim {dim:?}")),
        }
    }
    if let Some(trials) = lookup(&flags, "--trials") {
        match trials.parse::<usize>() {
            Ok(t) if t > 0 => cfg.trials = t,
            _ => return usage_error(&format!("invalid --trials {trials:?}")),
        }
    }
    if let Some(seed) = lookup(&flags, "--seed") {
        match seed.parse::<u64>() {
            Ok(s) => cfg.seed = s,
            Err(_) => return usage_error(&format!("invalid --seed {seed:?}")),
        }
    }
    if let Some(tol) = lookup(&flags, "--tol") {
        match tol.parse::<f64>() {
            Ok(t) if t > 0.0 => cfg.tol = t,
            _ => return usage_error(&format!("invalid --tol {tol:?}")),
        }
    }
    let format = lookup(&flags, "--format").unwrap_or("text");
    if format != "text" && format != "json" {
        return usage_error(&format!("invalid --format {format:?}"));
    }

    let ids: Vec<PropId> = if prop == "all" {
        PropId::all().to_vec()
    } else {
        match PropId::parse(&prop) {
            Ok(id) => vec![id],
            Err(e) => return usage_error(&e.to_string()),
        }
    };

    let reports: Vec<VerificationReport> =
        ids.iter().map(|&id| verify::run_proposition(id, &cfg)).collect();

    if format == "json" {
        match io::reports_to_json(&reports) {
            Ok(json) => print!("{json}"),
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        }
    } else {
        for r in &reports {
            let scalars = if r.fitted_scalars.is_empty() {
                String::new()
            } else {
                format!(
                    "  scalars=[{}]",
                    r.fitted_scalars
                        .iter()
                        .map(|s| io::fmt_f64(*s))
                        .collect::<Vec<_>>()
                        .join(",")
                )
            };
            println!(
                "prop {:<9} {:<28} groups={:<12} trials={:<5} seed={} tol={} max_violation={}{}  {}  ({:.0} ms)",
                r.proposition,
                r.theory,
                r.group,
                r.trials,
                r.seed,
                io::fmt_f64(r.tolerance),
                io::fmt_f64(r.max_violation),
                scalars,
                if r.pass { "PASS" } else { "FAIL" },
                r.elapsed_ms,
            );
        }
    }
    if reports.iter().all(|r| r.pass) {
        0
    } else {
        1
    }
}

fn read_file(path: &str) -> Result<String, u8> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {path:?}: {e}");
        2
    })
}

fn write_file(path: &str, contents: &str) -> Result<(), u8> {
    fs::write(path, contents).map_err(|e| {
        eprintln!("error: cannot write {path:?}: {e}");
        2
    })
}

fn cmd_denote(args: &[String]) -> u8 {
    let flags = match parse_flags(args) {
        Ok(f) => f,
        Err(e) => return usage_error(&e),
    };
    let (input, output) = match (lookup(&flags, "--in"), lookup(&flags, "--out")) {
        (Some(i), Some(o)) => (i.to_string(), o.to_string()),
        _ => return usage_error("denote needs --in and --out"),
    };
    let contents = match read_file(&input) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let document = match io::map_document_from_json(&contents) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let tensor = match document {
        io::MapDocument::DensityHypercube(r) => match hypercube::dh_denote(&r) {
            // a trivial input wire denotes a state, written rank-4
            Ok(map) if map.d_in() == 1 => {
                let d = map.d_out();
                map.tensor().reshape(&[d, d, d, d]).expect("state reshape")
            }
            Ok(map) => map.tensor().clone(),
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        },
        io::MapDocument::DoubleDilation(r) => match dilation::dd_denote(&r) {
            Ok(t) if r.d_in() == 1 => {
                let d = r.d_out();
                t.reshape(&[d, d, d, d]).expect("state reshape")
            }
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        },
        io::MapDocument::DoubleMixing(r) => match dilation::dm_denote(&r) {
            Ok(t) if r.d_in() == 1 => {
                let d = r.d_out();
                t.reshape(&[d, d, d, d]).expect("state reshape")
            }
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        },
        io::MapDocument::Channel(phi) => phi.transfer(),
    };
    let json = match io::tensor_to_json(&tensor) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    match write_file(&output, &json) {
        Ok(()) => 0,
        Err(code) => code,
    }
}

fn cmd_sample(args: &[String]) -> u8 {
    let flags = match parse_flags(args) {
        Ok(f) => f,
        Err(e) => return usage_error(&e),
    };
    let kind = match lookup(&flags, "--kind") {
        Some(k) => k.to_string(),
        None => return usage_error("sample needs --kind"),
    };
    let dim = match lookup(&flags, "--dim").map(str::parse::<usize>) {
        Some(Ok(d)) => d,
        _ => return usage_error("sample needs a numeric --dim"),
    };
    let seed = match lookup(&flags, "--seed") {
        Some(s) => match s.parse::<u64>() {
            Ok(v) => v,
            Err(_) => return usage_error(&format!("invalid --seed {s:?}")),
        },
        None => default_seed(),
    };
    let output = match lookup(&flags, "--out") {
        Some(o) => o.to_string(),
        None => return usage_error("sample needs --out"),
    };
    let value = match verify::random_suite(&kind, dim, seed) {
        Ok(v) => v,
        Err(e) => return usage_error(&e.to_string()),
    };
    let json = match value {
        SampleValue::DhState(state) => io::tensor_to_json(state.tensor()),
        SampleValue::DdState(state) => io::tensor_to_json(state.tensor()),
        SampleValue::CpMap(phi) => io::cp_map_to_json(&phi),
        SampleValue::DhMap(map) => io::tensor_to_json(map.tensor()),
    };
    let json = match json {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    match write_file(&output, &json) {
        Ok(()) => 0,
        Err(code) => code,
    }
}

/// Shortest decimal form of a probability.
fn fmt_probability(p: f64) -> String {
    format!("{p}")
}

fn cmd_demo(args: &[String]) -> u8 {
    if args.first().map(String::as_str) != Some("povm") {
        return usage_error("demo supports exactly one mode: povm");
    }
    let flags = match parse_flags(&args[1..]) {
        Ok(f) => f,
        Err(e) => return usage_error(&e),
    };
    let path = match lookup(&flags, "--state") {
        Some(p) => p.to_string(),
        None => return usage_error("demo povm needs --state"),
    };
    let contents = match read_file(&path) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let tensor = match io::tensor_from_json(&contents) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let state = match DhState::new(tensor) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    match hypercube::povm_outcomes(&state) {
        Ok((ps, beyond)) => {
            for (k, p) in ps.iter().enumerate() {
                println!("P({k})={}", fmt_probability(*p));
            }
            println!("P(UHfB)={}", fmt_probability(beyond));
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
