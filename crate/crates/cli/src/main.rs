mod pipeline;
mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use dashu_int::IBig;
use serde::{Deserialize, Serialize};

use pinwheel_core::apcomplex::cellmap::{check_refinement, refinement_matrix};
use pinwheel_core::apcomplex::tilecw::{build_tile_complex, cohomology_action, substitution_chain_map};
use pinwheel_core::apcomplex::{build_complex, cohomology_of, substitution_on_cells};
use pinwheel_core::gaplabel::{class_frequency, gap_module, membership, state, LimitElement};
use pinwheel_core::perron::primitivity;
use pinwheel_core::substitution::{
    chirality_counts, estimate_bytes, patch, pinwheel_rule, validate_rule, SubstitutionRule, DEFAULT_MAX_LEVEL,
};
use pinwheel_core::ExactRational as Q;

use pipeline::{Pipeline, RunConfig};

#[derive(Parser)]
#[command(name = "pinwheel", version, about = "Exact computations on the pinwheel tiling")]
struct Cli {
    /// Substitution rule as JSON; the built-in pinwheel rule if absent.
    #[arg(long, global = true)]
    rule: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Cache directory; PINWHEEL_CACHE takes precedence when set.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_LEVEL)]
    max_level: u32,
    #[arg(long, global = true, default_value_t = 3)]
    scan_level_start: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// The level-n patch.
    Generate {
        #[arg(long)]
        level: u32,
        /// Draw at the scale of a single tile rather than of the supertile.
        #[arg(long)]
        unit_scale: bool,
    },
    /// Collared prototiles.
    Coronas,
    /// The collared substitution matrix.
    Matrix,
    /// Perron eigenvalue and eigenvector.
    Perron,
    /// The frequency module.
    Gaplabel,
    /// The state of a limit element `[k, n]`.
    State {
        /// JSON array of integers, one per collared class.
        #[arg(long)]
        vector: PathBuf,
        #[arg(long)]
        level: u32,
    },
    /// Frequency of a class among level-l supertiles.
    Freq {
        #[arg(long = "class")]
        class: usize,
        #[arg(long)]
        level: u32,
    },
    /// Approximant complexes.
    Complex {
        #[command(subcommand)]
        action: ComplexAction,
    },
}

#[derive(Subcommand)]
enum ComplexAction {
    /// Cells and boundary matrices.
    Build {
        #[arg(long, default_value_t = 0)]
        level: u32,
    },
    /// Integer cohomology.
    Cohomology {
        #[arg(long, default_value_t = 0)]
        level: u32,
    },
    /// The substitution on cells and on cohomology.
    SubstAction {
        #[arg(long, default_value_t = 0)]
        level: u32,
    },
}

struct Output {
    format: Option<Format>,
    out: Option<PathBuf>,
}

impl Output {
    /// Human-readable lines go to stdout unless stdout carries the report.
    fn line(&self, s: impl AsRef<str>) {
        if self.format.is_none() || self.out.is_some() {
            println!("{}", s.as_ref());
        }
    }

    fn emit(&self, content: &str) -> Result<()> {
        match &self.out {
            Some(p) => fs::write(p, content).with_context(|| format!("writing {}", p.display())),
            None => {
                print!("{content}");
                Ok(())
            }
        }
    }

    fn json<T: Serialize>(&self, value: &T) -> Result<()> {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        self.emit(&s)
    }

    fn unsupported(&self, command: &str) -> Result<()> {
        match self.format {
            None => Ok(()),
            Some(f) => {
                bail!(Usage(format!("{command} has no {} output", f.to_possible_value().expect("named").get_name())))
            }
        }
    }
}

#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn exit_code(err: &anyhow::Error) -> u8 {
    use pinwheel_core::Error as E;
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::LevelCap { .. } | E::NonStabilized(_) | E::NotPrimitive(_) => 2,
                E::Io(_) | E::Json(_) | E::Parse(_) => 3,
                _ => 1,
            };
        }
        if cause.is::<std::io::Error>() || cause.is::<serde_json::Error>() {
            return 3;
        }
    }
    1
}

fn load_rule(path: Option<&Path>) -> Result<SubstitutionRule> {
    let rule = match path {
        None => pinwheel_rule(),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            SubstitutionRule::from_json(&text)?
        }
    };
    let report = validate_rule(&rule);
    if !report.passed() {
        return Err(pinwheel_core::Error::InvalidRule(format!("failed checks: {:?}", report.failed())).into());
    }
    Ok(rule)
}

fn int(x: &IBig) -> Result<i64> {
    i64::try_from(x).map_err(|_| anyhow::anyhow!("{x} exceeds 64 bits"))
}

fn fraction(q: &Q) -> Result<[i64; 2]> {
    Ok([int(q.numer())?, int(&q.denom())?])
}

#[derive(Serialize)]
struct PerronReport {
    lambda: i64,
    denominator: i64,
    gcd: i64,
    rank: usize,
    alpha_prime: Vec<i64>,
}

#[derive(Serialize)]
struct ModuleReport {
    coefficient: [i64; 2],
    base: i64,
    gcd: i64,
    denominator: i64,
}

#[derive(Serialize)]
struct ValueReport {
    level: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    class: Option<usize>,
    value: [i64; 2],
    in_module: bool,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum VectorFile {
    Plain(Vec<i64>),
    Wrapped { vector: Vec<i64> },
}

#[derive(Serialize)]
struct CellMapSummary {
    from_level: u32,
    commutes: bool,
    refinement_is_kron: Option<bool>,
}

fn run(cli: Cli) -> Result<()> {
    let rule = load_rule(cli.rule.as_deref())?;
    let cache_dir = std::env::var_os("PINWHEEL_CACHE").map(PathBuf::from).or(cli.cache_dir);
    let config = RunConfig { max_level: cli.max_level, scan_level_start: cli.scan_level_start, cache_dir };
    let pl = Pipeline::new(rule, config);
    let out = Output { format: cli.format, out: cli.out };

    match cli.command {
        Command::Generate { level, unit_scale } => {
            if level > pl.config.max_level {
                return Err(pinwheel_core::Error::LevelCap { level, max: pl.config.max_level }.into());
            }
            eprintln!("patch({level}): {} tiles, estimated {} KiB", 5u64.pow(level), estimate_bytes(level) >> 10);
            let p = patch(level, &pl.rule, pl.config.max_level)?;
            let (plus, minus) = chirality_counts(&p.tiles);
            out.line(format!("patch({level}): {} tiles ({plus} + {minus})", p.len()));
            match out.format {
                Some(Format::Json) => out.json(&pl.report("generate", p.to_file()))?,
                Some(Format::Svg) => {
                    let scale = unit_scale.then(|| {
                        let (lam, mu) = pl.rule.power(level);
                        let f = render::to_f64;
                        (f(&lam.x), f(&lam.y), f(&mu.x), f(&mu.y))
                    });
                    out.emit(&render::patch_svg(&p.tiles.tiles, Some(&p.region), scale))?
                }
                Some(Format::Csv) => {
                    let mut s = String::from("index,chirality,rot_c,rot_s,x,y\n");
                    for (i, t) in p.tiles.tiles.iter().enumerate() {
                        s.push_str(&format!(
                            "{i},{},{},{},{},{}\n",
                            t.chirality.symbol(),
                            t.rot.c(),
                            t.rot.s(),
                            t.trans.x,
                            t.trans.y
                        ));
                    }
                    out.emit(&s)?
                }
                None => {}
            }
        }
        Command::Coronas => {
            let e = pl.enumeration()?;
            let (plus, minus) = e.count_by_chirality();
            out.line(format!("classes = {} ({plus} + {minus} mirrored)", e.len()));
            out.line(format!(
                "stabilized at level {}; closed under substitution: {}",
                e.certificate.stabilized_at, e.certificate.closed
            ));
            match out.format {
                Some(Format::Json) => out.json(&pl.report("coronas", e.to_file()))?,
                Some(Format::Svg) => out.emit(&render::prototile_sheet(&e, 12))?,
                _ => out.unsupported("coronas")?,
            }
        }
        Command::Matrix => {
            let (_, a) = pl.matrix()?;
            let k = primitivity(&a, 32)?;
            let sums = a.column_sums();
            let uniform = sums.windows(2).all(|w| w[0] == w[1]);
            out.line(format!("matrix {}x{}; A^{k} > 0", a.rows(), a.cols()));
            if uniform {
                out.line(format!("column sums = {}", sums[0]));
            }
            match out.format {
                Some(Format::Json) => {
                    let rows = a.to_i64_rows().context("matrix entry exceeds 64 bits")?;
                    out.json(&pl.report("matrix", rows))?
                }
                Some(Format::Csv) => out.emit(&a.to_csv())?,
                _ => out.unsupported("matrix")?,
            }
        }
        Command::Perron => {
            let (e, _, p) = pl.perron()?;
            let l = p.lambda;
            out.line(format!("lambda = {l}; D = {}; gcd = {}; rank(A−{l}I) = {}", p.denominator, p.gcd, p.rank));
            match out.format {
                Some(Format::Json) => {
                    let report = PerronReport {
                        lambda: l,
                        denominator: int(&p.denominator)?,
                        gcd: int(&p.gcd)?,
                        rank: p.rank,
                        alpha_prime: p.alpha_prime.iter().map(int).collect::<Result<_>>()?,
                    };
                    out.json(&pl.report("perron", report))?
                }
                Some(Format::Csv) => {
                    let mut s = String::from("class,chirality,mirror,alpha_prime\n");
                    for (c, a) in e.classes.iter().zip(&p.alpha_prime) {
                        s.push_str(&format!("{},{},{},{a}\n", c.id, c.chirality.symbol(), c.mirror));
                    }
                    out.emit(&s)?
                }
                _ => out.unsupported("perron")?,
            }
        }
        Command::Gaplabel => {
            let (_, _, p) = pl.perron()?;
            let m = gap_module(&p.alpha_prime, &p.denominator, p.lambda);
            out.line(format!("c = {}", m.coefficient));
            out.line(format!("lambda = {}", m.base));
            out.line(format!("gcd = {}", p.gcd));
            out.line(format!("D = {}", p.denominator));
            match out.format {
                Some(Format::Json) => {
                    let report = ModuleReport {
                        coefficient: fraction(&m.coefficient)?,
                        base: m.base,
                        gcd: int(&p.gcd)?,
                        denominator: int(&p.denominator)?,
                    };
                    out.json(&pl.report("gaplabel", report))?
                }
                _ => out.unsupported("gaplabel")?,
            }
            out.line(format!("module = {m}"));
        }
        Command::State { vector, level } => {
            let text = fs::read_to_string(&vector).with_context(|| format!("reading {}", vector.display()))?;
            let k = match serde_json::from_str::<VectorFile>(&text)? {
                VectorFile::Plain(v) | VectorFile::Wrapped { vector: v } => v,
            };
            let (_, _, p) = pl.perron()?;
            let el = LimitElement::new(k.into_iter().map(IBig::from).collect(), level);
            let s = state(&el, &p.alpha_prime, &p.denominator, p.lambda)?;
            let inside = membership(&s, &gap_module(&p.alpha_prime, &p.denominator, p.lambda));
            out.line(format!("state = {s}"));
            match out.format {
                Some(Format::Json) => out.json(
                    &pl.report("state", ValueReport { level, class: None, value: fraction(&s)?, in_module: inside }),
                )?,
                _ => out.unsupported("state")?,
            }
        }
        Command::Freq { class, level } => {
            let (_, _, p) = pl.perron()?;
            let f = class_frequency(&p.alpha, class, level, p.lambda)?;
            let inside = membership(&f, &gap_module(&p.alpha_prime, &p.denominator, p.lambda));
            out.line(format!("frequency of class {class} at level {level} = {f}"));
            match out.format {
                Some(Format::Json) => out.json(&pl.report(
                    "freq",
                    ValueReport { level, class: Some(class), value: fraction(&f)?, in_module: inside },
                ))?,
                _ => out.unsupported("freq")?,
            }
        }
        Command::Complex { action } => {
            let e = pl.enumeration()?;
            let adj = pl.adjacency(&e)?;
            match action {
                ComplexAction::Build { level } => {
                    let c = build_complex(&pl.rule, &e, &adj, level)?;
                    let [v, ed, f] = c.counts;
                    out.line(format!("level {level}: {v} vertices, {ed} edges, {f} triangles"));
                    out.line(format!("euler characteristic = {}", c.euler_characteristic()));
                    out.line(format!("boundary of boundary vanishes: {}", c.boundaries_compose_to_zero()?));
                    out.line(format!("orientation coherent: {}", c.orientation_coherent()));
                    match out.format {
                        Some(Format::Json) => out.json(&pl.report("complex build", c.dump()))?,
                        _ => out.unsupported("complex build")?,
                    }
                }
                ComplexAction::Cohomology { level } => {
                    let c = build_complex(&pl.rule, &e, &adj, level)?;
                    let h = cohomology_of(&c.boundary1, &c.boundary2, true)?;
                    for (i, d) in h.degrees.iter().enumerate() {
                        out.line(format!("H^{i} = Z^{}{}", d.rank, torsion_suffix(&d.torsion)));
                    }
                    out.line(format!("euler characteristic = {}", h.euler_characteristic));
                    match out.format {
                        Some(Format::Json) => out.json(&pl.report("complex cohomology", h))?,
                        _ => out.unsupported("complex cohomology")?,
                    }
                }
                ComplexAction::SubstAction { level } => {
                    let coarse = build_complex(&pl.rule, &e, &adj, level)?;
                    let fine = build_complex(&pl.rule, &e, &adj, level + 1)?;
                    let map = substitution_on_cells(&pl.rule, &e, &fine, &coarse)?;
                    let refinement_is_kron = if level == 0 {
                        let (_, a, p) = pl.perron()?;
                        let r = refinement_matrix(&map, e.len())?;
                        let rep = check_refinement(&r, &a, &p.alpha, p.lambda)?;
                        Some(rep.kron_matches && rep.slot_sums_match && rep.eigenvector)
                    } else {
                        None
                    };
                    let commutes = map.commutes(&fine, &coarse)?;
                    out.line(format!("cell map level {} -> {level} commutes with boundary: {commutes}", level + 1));
                    if let Some(k) = refinement_is_kron {
                        out.line(format!("refinement matrix = A ⊗ I8: {k}"));
                    }
                    let q = build_tile_complex(&pl.rule, &e, &adj)?;
                    let g = substitution_chain_map(&pl.rule, &e, &q)?;
                    let act = cohomology_action(&q, &g)?;
                    for (i, m) in act.endomorphisms.iter().enumerate() {
                        out.line(format!(
                            "M* on H^{i}: {}x{}, ranks of powers {:?}, eventual rank {}",
                            m.len(),
                            m.len(),
                            act.rank_sequences[i],
                            act.eventual_ranks[i]
                        ));
                    }
                    #[derive(Serialize)]
                    struct Both<'a> {
                        cell_map: CellMapSummary,
                        action: &'a pinwheel_core::apcomplex::tilecw::ActionReport,
                    }
                    match out.format {
                        Some(Format::Json) => out.json(&pl.report(
                            "complex subst-action",
                            Both {
                                cell_map: CellMapSummary { from_level: level + 1, commutes, refinement_is_kron },
                                action: &act,
                            },
                        ))?,
                        _ => out.unsupported("complex subst-action")?,
                    }
                }
            }
        }
    }
    Ok(())
}

fn torsion_suffix(t: &[i64]) -> String {
    t.iter().map(|d| format!(" ⊕ Z/{d}")).collect()
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
