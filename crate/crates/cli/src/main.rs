//! Command-line front end: partition enumeration and verification, the
//! unsymmetrized transforms, free convolution, and the random dual-path
//! oracle suite.
//!
//! Exit codes: 0 success or all checks passed, 1 verification failure,
//! 2 usage or input error, 3 singular input or truncation-cap overflow.
//! Errors are reported as one JSON object on stderr.

use std::collections::BTreeMap;
use std::io::Read;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use mulffs::fock::{self, FockOperator};
use mulffs::jsonio;
use mulffs::ncl::{self, Family};
use mulffs::sample::random_series;
use mulffs::transforms;
use mulffs::{Algebra, Error, MFSeries};

const USAGE: &str = "\
mulffs <command> [flags]

commands:
  ncl count --n K [--mode ncl|nc|ip]
  ncl count --max-n K [--format csv]
  ncl enumerate --n K [--mode ncl|nc|ip] [--format json] [--out FILE]
  ncl verify --max-n K
  rtransform --in FILE [--out FILE]
  ttransform --in FILE [--out FILE]
  stransform --in FILE [--out FILE]
  moments --transform r|t --in FILE --order N [--out FILE]
  convolve --kind add|mul --a FILE --b FILE --order N [--out FILE]
  oracle-check --order N --dim-kind scalar|matrix2 --seed S --trials T

`--in -` reads from stdin. Series and partitions are JSON; the env var
MULFFS_MAX_CELLS overrides the dense-table size guard.
";

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

fn error_kind(e: &CliError) -> &'static str {
    match e {
        CliError::Usage(_) => "usage",
        CliError::Io(_) => "io",
        CliError::Core(Error::Singular(_)) => "singular",
        CliError::Core(Error::CapExceeded { .. }) => "cap-exceeded",
        CliError::Core(Error::NotCompInvertible) => "not-invertible",
        CliError::Core(Error::InvalidPartition(_)) => "invalid-partition",
        CliError::Core(Error::Schema { .. }) => "schema",
        CliError::Core(Error::SizeGuard { .. }) => "size-guard",
        CliError::Core(Error::EnumerationGuard { .. }) => "enumeration-guard",
        CliError::Core(_) => "input",
    }
}

fn exit_code(e: &CliError) -> i32 {
    match e {
        CliError::Core(Error::Singular(_))
        | CliError::Core(Error::CapExceeded { .. })
        | CliError::Core(Error::NotCompInvertible) => 3,
        _ => 2,
    }
}

fn message(e: &CliError) -> String {
    match e {
        CliError::Usage(m) | CliError::Io(m) => m.clone(),
        CliError::Core(err) => err.to_string(),
    }
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    std::process::exit(run(&args));
}

fn run(args: &[String]) -> i32 {
    match dispatch(args) {
        Ok(code) => code,
        Err(e) => {
            let payload = json!({
                "error": error_kind(&e),
                "message": message(&e),
            });
            eprintln!("{}", jsonio::to_canonical_string(&payload));
            exit_code(&e)
        }
    }
}

/// Parse `--key value` pairs, rejecting unknown or duplicated flags.
struct Flags {
    values: BTreeMap<String, String>,
}

impl Flags {
    fn parse(args: &[String], allowed: &[&str]) -> Result<Flags, CliError> {
        let mut values = BTreeMap::new();
        let mut it = args.iter();
        while let Some(arg) = it.next() {
            let key = arg
                .strip_prefix("--")
                .ok_or_else(|| CliError::Usage(format!("unexpected argument {arg:?}")))?;
            if !allowed.contains(&key) {
                return Err(CliError::Usage(format!("unknown flag --{key}")));
            }
            let value = it
                .next()
                .ok_or_else(|| CliError::Usage(format!("flag --{key} needs a value")))?;
            if values.insert(key.to_string(), value.clone()).is_some() {
                return Err(CliError::Usage(format!("flag --{key} given twice")));
            }
        }
        Ok(Flags { values })
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn require(&self, key: &str) -> Result<&str, CliError> {
        self.get(key)
            .ok_or_else(|| CliError::Usage(format!("missing required flag --{key}")))
    }

    fn usize_flag(&self, key: &str) -> Result<usize, CliError> {
        self.require(key)?
            .parse()
            .map_err(|_| CliError::Usage(format!("--{key} expects a nonnegative integer")))
    }
}

fn parse_family(s: &str) -> Result<Family, CliError> {
    match s {
        "ncl" => Ok(Family::Ncl),
        "nc" => Ok(Family::Nc),
        "ip" => Ok(Family::Ip),
        other => Err(CliError::Usage(format!(
            "unknown mode {other:?} (ncl, nc or ip)"
        ))),
    }
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Io(format!("reading stdin: {e}")))?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("reading {path}: {e}")))
    }
}

fn read_series(path: &str) -> Result<MFSeries, CliError> {
    let text = read_input(path)?;
    let value = jsonio::parse(&text)?;
    Ok(jsonio::series_from_value(&value)?)
}

fn write_output(out: Option<&str>, text: &str) -> Result<(), CliError> {
    match out {
        None => {
            println!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, format!("{text}\n"))
            .map_err(|e| CliError::Io(format!("writing {path}: {e}"))),
    }
}

fn dispatch(args: &[String]) -> Result<i32, CliError> {
    let Some(command) = args.first() else {
        return Err(CliError::Usage(format!("no command given\n{USAGE}")));
    };
    match command.as_str() {
        "--help" | "help" => {
            println!("{USAGE}");
            Ok(0)
        }
        "ncl" => {
            let Some(sub) = args.get(1) else {
                return Err(CliError::Usage(
                    "ncl needs a subcommand: count, enumerate or verify".into(),
                ));
            };
            match sub.as_str() {
                "count" => ncl_count_cmd(&args[2..]),
                "enumerate" => ncl_enumerate_cmd(&args[2..]),
                "verify" => ncl_verify_cmd(&args[2..]),
                other => Err(CliError::Usage(format!("unknown ncl subcommand {other:?}"))),
            }
        }
        "rtransform" => transform_cmd(&args[1..], TransformKind::R),
        "ttransform" => transform_cmd(&args[1..], TransformKind::T),
        "stransform" => transform_cmd(&args[1..], TransformKind::S),
        "moments" => moments_cmd(&args[1..]),
        "convolve" => convolve_cmd(&args[1..]),
        "oracle-check" => oracle_check_cmd(&args[1..]),
        other => Err(CliError::Usage(format!(
            "unknown command {other:?}\n{USAGE}"
        ))),
    }
}

fn ncl_count_cmd(args: &[String]) -> Result<i32, CliError> {
    let flags = Flags::parse(args, &["n", "max-n", "mode", "format"])?;
    let family = parse_family(flags.get("mode").unwrap_or("ncl"))?;
    if flags.get("max-n").is_some() {
        let max_n = flags.usize_flag("max-n")?;
        if flags.get("n").is_some() {
            return Err(CliError::Usage("use either --n or --max-n".into()));
        }
        match flags.get("format").unwrap_or("csv") {
            "csv" => {}
            other => {
                return Err(CliError::Usage(format!(
                    "count tables support csv only, got {other:?}"
                )))
            }
        }
        let mut out = String::from("n,count\n");
        for n in 1..=max_n {
            out.push_str(&format!("{n},{}\n", count_one(n, family)?));
        }
        print!("{out}");
        return Ok(0);
    }
    let n = flags.usize_flag("n")?;
    println!("{}", count_one(n, family)?);
    Ok(0)
}

fn count_one(n: usize, family: Family) -> Result<String, CliError> {
    Ok(match family {
        // closed-form fiber count; enumeration-length equality is covered by
        // the acceptance suite
        Family::Ncl => ncl::ncl_count(n)?.to_string(),
        _ => ncl::enumerate(n, family)?.len().to_string(),
    })
}

fn ncl_enumerate_cmd(args: &[String]) -> Result<i32, CliError> {
    let flags = Flags::parse(args, &["n", "mode", "format", "out"])?;
    let n = flags.usize_flag("n")?;
    let family = parse_family(flags.get("mode").unwrap_or("ncl"))?;
    match flags.get("format").unwrap_or("json") {
        "json" => {}
        other => {
            return Err(CliError::Usage(format!(
                "enumerate supports json only, got {other:?}"
            )))
        }
    }
    let list = ncl::enumerate(n, family)?;
    let value = serde_json::Value::Array(list.iter().map(jsonio::partition_to_value).collect());
    write_output(flags.get("out"), &jsonio::to_canonical_string(&value))?;
    Ok(0)
}

fn ncl_verify_cmd(args: &[String]) -> Result<i32, CliError> {
    let flags = Flags::parse(args, &["max-n"])?;
    let max_n = flags.usize_flag("max-n")?;
    let mut all = true;
    let mut report = |name: &str, n: usize, pass: bool, detail: &str| {
        all &= pass;
        println!(
            "{} {name} n={n} {detail}",
            if pass { "PASS" } else { "FAIL" }
        );
    };
    for check in transforms::schroder_identities(max_n)? {
        report(check.name, check.n, check.pass, &check.detail);
    }
    for n in 1..=max_n.min(6) {
        let all_parts = ncl::enumerate(n, Family::Ncl)?;
        let mut seen = std::collections::BTreeSet::new();
        let mut round = true;
        let mut injective = true;
        for pi in &all_parts {
            let code = ncl::s_encode(pi);
            round &= ncl::s_decode(&code).as_ref() == Ok(pi);
            injective &= seen.insert(format!("{:?}", code.values));
        }
        report(
            "s-encoding-round-trip",
            n,
            round,
            &format!("{} partitions", all_parts.len()),
        );
        report(
            "s-encoding-injective",
            n,
            injective,
            &format!("{} partitions", all_parts.len()),
        );
        let mut dc = true;
        if n >= 2 {
            for pi in &all_parts {
                dc &= ncl::decompose_dc(pi)
                    .and_then(|parts| ncl::compose_dc(&parts))
                    .as_ref()
                    == Ok(pi);
            }
        }
        report(
            "decomposition-round-trip",
            n,
            dc,
            &format!("{} partitions", all_parts.len()),
        );
    }
    let cats = ncl::catalan_numbers(max_n.min(7));
    for n in 2..=max_n.min(7) {
        let fiber: Vec<_> = ncl::enumerate(n, Family::Ncl)?
            .into_iter()
            .filter(ncl::is_ncl1)
            .collect();
        let count_ok = mulffs::Int::from(fiber.len()) == cats[n - 1];
        let mut round = true;
        for pi in &fiber {
            round &= ncl::ncl1_to_nc(pi)
                .and_then(|t| ncl::nc_to_ncl1(&t))
                .as_ref()
                == Ok(pi);
        }
        report(
            "fiber-bijection",
            n,
            count_ok && round,
            &format!("|fiber| = {}", fiber.len()),
        );
    }
    Ok(if all { 0 } else { 1 })
}

enum TransformKind {
    R,
    T,
    S,
}

fn transform_cmd(args: &[String], kind: TransformKind) -> Result<i32, CliError> {
    let flags = Flags::parse(args, &["in", "out"])?;
    let series = read_series(flags.require("in")?)?;
    let result = match kind {
        TransformKind::R => transforms::r_transform(&series),
        TransformKind::T => transforms::t_transform(&series)?,
        TransformKind::S => transforms::s_transform(&series)?,
    };
    write_output(
        flags.get("out"),
        &jsonio::to_canonical_string(&jsonio::series_to_value(&result)),
    )?;
    Ok(0)
}

fn moments_cmd(args: &[String]) -> Result<i32, CliError> {
    let flags = Flags::parse(args, &["transform", "in", "order", "out"])?;
    let series = read_series(flags.require("in")?)?;
    let order = flags.usize_flag("order")?;
    let result = match flags.require("transform")? {
        "r" => transforms::r_inverse(&series, order)?,
        "t" => transforms::t_inverse(&series, order)?,
        other => {
            return Err(CliError::Usage(format!(
                "--transform expects r or t, got {other:?}"
            )))
        }
    };
    write_output(
        flags.get("out"),
        &jsonio::to_canonical_string(&jsonio::series_to_value(&result)),
    )?;
    Ok(0)
}

fn convolve_cmd(args: &[String]) -> Result<i32, CliError> {
    let flags = Flags::parse(args, &["kind", "a", "b", "order", "out"])?;
    let a = read_series(flags.require("a")?)?;
    let b = read_series(flags.require("b")?)?;
    let order = flags.usize_flag("order")?;
    let result = match flags.require("kind")? {
        "add" => transforms::free_additive_convolution(&a, &b, order)?,
        "mul" => transforms::free_multiplicative_convolution(&a, &b, order)?,
        other => {
            return Err(CliError::Usage(format!(
                "--kind expects add or mul, got {other:?}"
            )))
        }
    };
    write_output(
        flags.get("out"),
        &jsonio::to_canonical_string(&jsonio::series_to_value(&result)),
    )?;
    Ok(0)
}

fn oracle_check_cmd(args: &[String]) -> Result<i32, CliError> {
    let flags = Flags::parse(args, &["order", "dim-kind", "seed", "trials"])?;
    let order = flags.usize_flag("order")?;
    let seed = flags
        .require("seed")?
        .parse::<u64>()
        .map_err(|_| CliError::Usage("--seed expects an unsigned integer".into()))?;
    let trials = flags.usize_flag("trials")?;
    let (algebra, scalar) = match flags.require("dim-kind")? {
        "scalar" => (Algebra::scalar(), true),
        "matrix2" => (Algebra::matrix(2), false),
        other => {
            return Err(CliError::Usage(format!(
                "--dim-kind expects scalar or matrix2, got {other:?}"
            )))
        }
    };
    // products of two variables populate levels fast; cap their order
    let product_order = if scalar { order } else { order.min(2) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all = true;
    for trial in 0..trials {
        let mut report = |name: &str, pass: bool| {
            all &= pass;
            println!(
                "{} trial={trial} {name}",
                if pass { "PASS" } else { "FAIL" }
            );
        };
        let alpha = random_series(&algebra, order, &mut rng, false);
        let alpha_u = random_series(&algebra, order, &mut rng, true);
        let beta = random_series(&algebra, order, &mut rng, false);
        let beta_u = random_series(&algebra, order, &mut rng, true);

        let x = FockOperator::additive_canonical(1, &alpha);
        let fock_add = fock::distribution_series(std::slice::from_ref(&x), order)?;
        report(
            "additive-moment-formula",
            fock_add == transforms::moments_from_r(&alpha, order)?,
        );

        let yu = FockOperator::multiplicative_canonical(1, &alpha_u);
        let fock_mul = fock::distribution_series(&[yu], order)?;
        report(
            "multiplicative-moment-formula",
            fock_mul == transforms::moments_from_t(&alpha_u, order)?,
        );

        report(
            "r-round-trip",
            transforms::r_transform(&transforms::r_inverse(&alpha, order)?) == alpha,
        );
        report(
            "t-round-trip",
            transforms::t_transform(&transforms::t_inverse(&alpha_u, order)?)? == alpha_u,
        );

        // plug the transforms back into their characterizing equations
        let id = MFSeries::identity(&algebra, order);
        let one = MFSeries::one(&algebra, order);
        let rt = transforms::r_transform(&beta);
        let lhs = id.sum(&id.product(&beta)?.product(&id)?)?.comp_inverse()?;
        let rhs = one.sum(&id.product(&rt)?)?.mul_inverse()?.product(&id)?;
        report("r-plugback", lhs == rhs);
        let tt = transforms::t_transform(&beta_u)?;
        let ib = id.product(&beta_u)?;
        let lhs = tt.compose(&ib)?.product(&one.sum(&ib)?)?;
        report("t-plugback", lhs == beta_u);

        // freeness: sums and products of canonical variables on separate
        // indices against the convolution formulas
        let y = FockOperator::additive_canonical(2, &beta);
        let xy_sum = x.add(&y)?;
        let fock_sum = fock::distribution_series(&[xy_sum], order)?;
        let phi_x = transforms::moments_from_r(&alpha, order)?;
        let phi_y = transforms::moments_from_r(&beta, order)?;
        report(
            "additive-convolution-vs-fock",
            fock_sum == transforms::free_additive_convolution(&phi_x, &phi_y, order)?,
        );
        report(
            "r-additivity",
            transforms::r_transform(&fock_sum) == alpha.sum(&beta)?,
        );

        let a1 = alpha_u.truncate(product_order);
        let a2 = beta_u.truncate(product_order);
        let x1 = FockOperator::multiplicative_canonical(1, &a1);
        let x2 = FockOperator::multiplicative_canonical(2, &a2);
        let fock_prod = fock::distribution_series(&[x1, x2], product_order)?;
        let phi_1 = transforms::moments_from_t(&a1, product_order)?;
        let phi_2 = transforms::moments_from_t(&a2, product_order)?;
        report(
            "multiplicative-convolution-vs-fock",
            fock_prod
                == transforms::free_multiplicative_convolution(&phi_1, &phi_2, product_order)?,
        );
        report(
            "t-twisted-multiplicativity",
            transforms::t_transform(&fock_prod)? == transforms::twisted_t_product(&a1, &a2)?,
        );
    }
    Ok(if all { 0 } else { 1 })
}
