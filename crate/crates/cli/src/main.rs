use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use subsym::analysis::{is_aperiodic, is_primitive, AperiodicityStatus};
use subsym::construct::{
    construct_cantor, construct_cayley_1d, construct_cyclic_tower, construct_nonid, construct_shell, GroupSpec,
    WdSubgroupSpec,
};
use subsym::report::{self, Report};
use subsym::sample::random_bijective_1d;
use subsym::subst::Substitution;
use subsym::{Bounds, Error};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "subsym", version, about = "Symmetries of bijective rectangular substitutions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Exhaustive permutation searches visit at most N! elements.
    #[arg(long, value_name = "N")]
    brute_bound: Option<usize>,
    /// Highest supertile level for legal-block searches.
    #[arg(long, value_name = "K")]
    kmax: Option<usize>,
}

impl Common {
    fn bounds(&self) -> Bounds {
        let mut b = Bounds::default();
        if let Some(n) = self.brute_bound {
            b.brute_degree = n;
        }
        if let Some(k) = self.kmax {
            b.kmax = k;
        }
        b
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Cayley1d,
    Shell,
    Cantor,
    Nonid,
    CyclicTower,
}

#[derive(Subcommand)]
enum Command {
    /// Primitivity, aperiodicity, symmetry and extended symmetry of a substitution file.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Cross-check the analysis against brute-force oracles.
    Verify {
        file: Option<PathBuf>,
        /// Check N random primitive aperiodic 1D substitutions instead of a file.
        #[arg(long, value_name = "N")]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Build a substitution with prescribed groups and certify it.
    Construct {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Letter-exchange group: trivial, cN, sN, klein, quaternion, or cycles like "(a b c);(a b)".
        #[arg(long = "G", visible_alias = "group", default_value = "c2")]
        group: String,
        /// Subgroup of W_d: trivial, pm, c4, v4, cyc, full, or matrices like "(+2,-1);(-1,+2)".
        #[arg(long = "P", visible_alias = "matrices", default_value = "trivial")]
        matrices: String,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Where to write the substitution file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Columns of a power of the substitution, or a supertile.
    Power {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        level: usize,
        /// Position as comma-separated coordinates.
        #[arg(long, value_delimiter = ',')]
        at: Option<Vec<usize>>,
        /// Print the supertile of this letter instead.
        #[arg(long)]
        letter: Option<String>,
    },
    /// Legal blocks of a given box size.
    Blocks {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        size: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
}

fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn load(path: &Path) -> Result<(Substitution, String), String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let s = Substitution::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((s, digest(text.as_bytes())))
}

fn emit(report: &Report, format: Format) -> ExitCode {
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::Structured => println!("{}", report.to_json()),
    }
    ExitCode::from(report.exit_code() as u8)
}

fn input_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze { file, common } => {
            let (s, d) = match load(&file) {
                Ok(x) => x,
                Err(msg) => return input_error(&msg),
            };
            let (mut report, _) = report::analyze(&s, &common.bounds(), VERSION);
            report.input_digest = Some(d);
            emit(&report, common.format)
        }
        Command::Verify { file, random, seed, common } => {
            let bounds = common.bounds();
            if let Some(count) = random {
                return emit(&verify_random(count, seed, &bounds), common.format);
            }
            let Some(file) = file else { return input_error("verify needs a file or --random N") };
            let (s, d) = match load(&file) {
                Ok(x) => x,
                Err(msg) => return input_error(&msg),
            };
            let mut report = report::verify(&s, &bounds, VERSION);
            report.input_digest = Some(d);
            emit(&report, common.format)
        }
        Command::Construct { kind, group, matrices, d, n, k, out, common } => {
            let bounds = common.bounds();
            let result = build(kind, &group, &matrices, d, n, k, &bounds);
            let cert = match result {
                Ok(c) => c,
                Err(e) => {
                    let mut report = Report::new("construct", VERSION, &bounds);
                    report.fail("construction", &e);
                    eprintln!("error: {e}");
                    return emit(&report, common.format);
                }
            };
            let text = cert.substitution.to_json();
            let mut report = report::certificate_report(&cert, &bounds, VERSION);
            report.input_digest = Some(digest(text.as_bytes()));
            if let Some(path) = out {
                if let Err(e) = fs::write(&path, format!("{text}\n")) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            emit(&report, common.format)
        }
        Command::Power { file, level, at, letter } => {
            let (s, _) = match load(&file) {
                Ok(x) => x,
                Err(msg) => return input_error(&msg),
            };
            power(&s, level, at, letter)
        }
        Command::Blocks { file, size, common } => {
            let (s, _) = match load(&file) {
                Ok(x) => x,
                Err(msg) => return input_error(&msg),
            };
            match s.legal_blocks(&size, common.bounds().kmax) {
                Ok(blocks) => {
                    let listed: Vec<String> = blocks.patches.iter().map(|p| p.format(s.alphabet())).collect();
                    match common.format {
                        Format::Text => {
                            println!("{} legal blocks of size {:?} (stable at level {})", listed.len(), size, blocks.level);
                            for b in listed {
                                println!("{b}");
                            }
                        }
                        Format::Structured => println!(
                            "{}",
                            serde_json::json!({ "size": size, "level": blocks.level, "blocks": listed })
                        ),
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => fail_with(&e),
            }
        }
    }
}

fn fail_with(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    let code = match e.class() {
        subsym::error::ErrorClass::Input => 2,
        subsym::error::ErrorClass::Precondition => 3,
        subsym::error::ErrorClass::Internal => 4,
    };
    ExitCode::from(code)
}

fn build(
    kind: Kind,
    group: &str,
    matrices: &str,
    d: usize,
    n: usize,
    k: usize,
    bounds: &Bounds,
) -> subsym::Result<subsym::construct::ConstructionCertificate> {
    let g = GroupSpec::parse(group)?;
    match kind {
        Kind::Cayley1d => construct_cayley_1d(&g, bounds),
        Kind::Shell => {
            let p = WdSubgroupSpec::parse(matrices, d)?;
            construct_shell(&g, &g.minimal_generators(bounds)?, &p, d, bounds)
        }
        Kind::Cantor => {
            let p = WdSubgroupSpec::parse(matrices, d)?;
            construct_cantor(&g, &g.generators, &p, d, bounds)
        }
        Kind::Nonid => {
            let p = WdSubgroupSpec::parse(matrices, d)?;
            construct_nonid(&g, &p, d, bounds)
        }
        Kind::CyclicTower => construct_cyclic_tower(n, k, bounds),
    }
}

fn power(s: &Substitution, level: usize, at: Option<Vec<usize>>, letter: Option<String>) -> ExitCode {
    if let Some(name) = letter {
        let Some(a) = s.alphabet().index_of(&name) else { return input_error(&format!("unknown letter `{name}`")) };
        return match s.supertile(a, level, Bounds::default().supertile_cells) {
            Ok(tile) => {
                println!("{}", tile.format(s.alphabet()));
                ExitCode::SUCCESS
            }
            Err(e) => fail_with(&e),
        };
    }
    let Some(at) = at else { return input_error("power needs --at or --letter") };
    match s.power_column(level, &at) {
        Ok(col) => {
            let text = col.format(s.alphabet());
            println!("{}", if text.is_empty() { "id".to_string() } else { text });
            ExitCode::SUCCESS
        }
        Err(e) => fail_with(&e),
    }
}

/// Seeded random 1D instances, filtered to primitive and aperiodic ones; the
/// oracle lines of every instance are collected into one report.
fn verify_random(count: usize, seed: u64, bounds: &Bounds) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new("verify --random", VERSION, bounds);
    report.input_digest = Some(digest(format!("random {count} {seed}").as_bytes()));
    let mut found = 0;
    while found < count {
        let s = random_bijective_1d(&mut rng, 4, 4);
        if !is_primitive(&s).primitive
            || !is_aperiodic(&s, bounds).is_ok_and(|v| v.status == AperiodicityStatus::Aperiodic)
        {
            continue;
        }
        found += 1;
        let single = report::verify(&s, bounds, VERSION);
        let label = s.to_document().rule.values().map(|w| w.concat()).collect::<Vec<_>>().join(",");
        if let Some(f) = single.failure {
            report.failure = Some(f);
            return report;
        }
        for mut o in single.oracles {
            o.name = format!("#{found} [{label}] {}", o.name);
            report.oracles.push(o);
        }
    }
    report
}
