//! Command handlers for the `a22` binary. Each subcommand renders to a
//! string (JSON or text) so the logic is testable without spawning the
//! binary.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use a22::baker;
use a22::chars;
use a22::igraph;
use a22::runge;
use a22::scalar::Domain;
use a22::search;
use a22::symplectic::{self, Sp4};
use a22::theta;
use a22::variety::{self, PointRecord};

#[derive(Parser)]
#[command(
    name = "a22",
    about = "Exact combinatorics, boundary geometry and height bounds for the level-2 Siegel threefold in P^9",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Census of even characteristics, triples and quadruples.
    Chars {
        #[command(subcommand)]
        command: CharsCommand,
    },
    /// Facts about the symplectic group action.
    Group {
        #[command(subcommand)]
        command: GroupCommand,
    },
    /// Point enumeration on the projective model.
    Variety {
        #[command(subcommand)]
        command: VarietyCommand,
    },
    /// The graph of intersection of the ten boundary divisors.
    Graph {
        #[command(subcommand)]
        command: GraphCommand,
    },
    /// Uniform height bounds and their sampling certificates.
    Runge {
        #[command(subcommand)]
        command: RungeCommand,
    },
    /// Linear-forms-in-logarithms constants and the final bound.
    Baker {
        #[command(subcommand)]
        command: BakerCommand,
    },
    /// Exhaustive bounded-height point search over Z[1/2].
    Search {
        #[command(subcommand)]
        command: SearchCommand,
    },
    /// Numerical certification of the theta-constant identities.
    Theta {
        #[command(subcommand)]
        command: ThetaCommand,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum EnumKind {
    EvenChars,
    SyzygousTriples,
    AzygousTriples,
    GoepelQuads,
    AzygousQuads,
}

#[derive(Subcommand)]
pub enum CharsCommand {
    /// Emit one of the canonical lists.
    Enumerate {
        #[arg(long, value_enum)]
        kind: EnumKind,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Subcommand)]
pub enum GroupCommand {
    /// Print the group order, orbit sizes, the pair sign table and the sign
    /// pattern of the exchange involution.
    Verify,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum DomainArg {
    Q,
    F2,
    F3,
    F5,
    F7,
}

impl From<DomainArg> for Domain {
    fn from(d: DomainArg) -> Domain {
        match d {
            DomainArg::Q => Domain::Rational,
            DomainArg::F2 => Domain::Prime(2),
            DomainArg::F3 => Domain::Prime(3),
            DomainArg::F5 => Domain::Prime(5),
            DomainArg::F7 => Domain::Prime(7),
        }
    }
}

#[derive(Subcommand)]
pub enum VarietyCommand {
    /// Enumerate the small points of the model over a domain.
    Points {
        #[arg(long, value_enum, default_value = "q")]
        domain: DomainArg,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Subcommand)]
pub enum GraphCommand {
    /// Build the graph of intersection and write it to a JSON file.
    Build {
        #[arg(long, value_enum, default_value = "q")]
        domain: DomainArg,
        #[arg(long)]
        out: std::path::PathBuf,
        /// Optional DOT rendering layered by depth.
        #[arg(long)]
        dot: Option<std::path::PathBuf>,
    },
}

#[derive(Subcommand)]
pub enum RungeCommand {
    /// The uniform height bound for a bad-set profile.
    Bound {
        #[arg(long)]
        s_contains_2: bool,
        #[arg(long)]
        s_contains_3: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Sampling certificate of the two threshold statements.
    Sample {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0xA22)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum RegimeArg {
    Arch,
    Nonarch,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum VariantArg {
    Thm22,
    P77,
}

#[derive(Subcommand)]
pub enum BakerCommand {
    /// The constants C1 and C2.
    Constants {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        s: u32,
        #[arg(long, value_enum)]
        regime: RegimeArg,
        #[arg(long, value_enum, default_value = "thm22")]
        variant: VariantArg,
    },
    /// The final height bound with every factor itemised.
    Bound(BakerBoundArgs),
}

#[derive(Args)]
pub struct BakerBoundArgs {
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub s: u32,
    #[arg(long)]
    pub hk: f64,
    #[arg(long)]
    pub rs: f64,
    #[arg(long)]
    pub ps: f64,
    /// Also run the outward-rounded interval audit of the headline
    /// coefficient inequality.
    #[arg(long)]
    pub audit: bool,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum AlphabetArg {
    /// Signed powers of two up to the height bound.
    Pm2,
    /// Signs only.
    Pm1,
}

#[derive(Subcommand)]
pub enum SearchCommand {
    Run {
        #[arg(long, default_value_t = 4.0)]
        height: f64,
        #[arg(long)]
        allow_zeros: bool,
        #[arg(long, value_enum, default_value = "pm2")]
        alphabet: AlphabetArg,
        #[arg(long)]
        out: std::path::PathBuf,
        #[arg(long)]
        cert: std::path::PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ThetaSuite {
    All,
    Equations,
    Modularity,
    Splitting,
    Rosenhain,
    Smallsets,
}

#[derive(Subcommand)]
pub enum ThetaCommand {
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: ThetaSuite,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0xA22)]
        seed: u64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

pub fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Chars { command } => run_chars(command),
        Command::Group { command } => run_group(command),
        Command::Variety { command } => run_variety(command),
        Command::Graph { command } => run_graph(command),
        Command::Runge { command } => run_runge(command),
        Command::Baker { command } => run_baker(command),
        Command::Search { command } => run_search_cmd(command),
        Command::Theta { command } => run_theta(command),
    }
}

fn run_chars(command: CharsCommand) -> Result<String> {
    let CharsCommand::Enumerate { kind, format } = command;
    let items: Vec<Vec<usize>> = match kind {
        EnumKind::EvenChars => chars::even_characteristics()
            .iter()
            .map(|c| vec![c.index().expect("even")])
            .collect(),
        EnumKind::SyzygousTriples => chars::syzygous_triples()
            .iter()
            .map(|t| t.indices().to_vec())
            .collect(),
        EnumKind::AzygousTriples => chars::azygous_triples()
            .iter()
            .map(|t| t.indices().to_vec())
            .collect(),
        EnumKind::GoepelQuads => chars::goepel_quadruples()
            .iter()
            .map(|q| q.indices().to_vec())
            .collect(),
        EnumKind::AzygousQuads => chars::azygous_quadruples()
            .iter()
            .map(|q| q.indices().to_vec())
            .collect(),
    };
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(&json!({
            "count": items.len(),
            "members": items,
        }))?),
        Format::Text => {
            let mut out = String::new();
            for item in &items {
                let bits: Vec<String> = item
                    .iter()
                    .map(|&i| format!("{}", chars::even_characteristics()[i - 1]))
                    .collect();
                out.push_str(&format!(
                    "{} {}\n",
                    item.iter()
                        .map(usize::to_string)
                        .collect::<Vec<_>>()
                        .join(","),
                    bits.join(" ")
                ));
            }
            out.push_str(&format!("total: {}\n", items.len()));
            Ok(out)
        }
    }
}

fn run_group(command: GroupCommand) -> Result<String> {
    let GroupCommand::Verify = command;
    let group = Sp4::get();
    let mut out = String::new();
    out.push_str(&format!("group order: {}\n", group.order()));
    out.push_str(&format!(
        "orbit sizes: pairs {}, syzygous triples {}, azygous triples {}, goepel quadruples {}, azygous quadruples {}\n",
        group.orbit(&[1, 2]).len(),
        group.orbit(&chars::syzygous_triples()[0].indices()).len(),
        group.orbit(&chars::azygous_triples()[0].indices()).len(),
        group.orbit(&chars::goepel_quadruples()[0].indices()).len(),
        group.orbit(&chars::azygous_quadruples()[0].indices()).len(),
    ));
    out.push_str("pair signs epsilon(i, j):\n");
    for i in 1..=10usize {
        let row: Vec<String> = (1..=10)
            .map(|j| {
                if i == j {
                    "  .".to_string()
                } else {
                    format!("{:>3}", symplectic::epsilon(i, j).expect("valid pair"))
                }
            })
            .collect();
        out.push_str(&format!("  i={i:>2}: {}\n", row.join(" ")));
    }
    let m = symplectic::exclusion_involution();
    let map = symplectic::signed_map(&m);
    out.push_str("exchange involution: coordinate i <- sign * coordinate source\n");
    for i in 0..10 {
        out.push_str(&format!(
            "  x_{:<2} <- {:+} * x_{}\n",
            i + 1,
            map.signs[i],
            map.perm[i] + 1
        ));
    }
    Ok(out)
}

fn run_variety(command: VarietyCommand) -> Result<String> {
    let VarietyCommand::Points { domain, format } = command;
    let points = variety::enumerate_small_points(domain.into())?;
    let records: Vec<PointRecord> = points.iter().map(PointRecord::from).collect();
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(&records)?),
        Format::Text => {
            let mut out = String::new();
            for p in &points {
                out.push_str(&format!("{p}\n"));
            }
            out.push_str(&format!("total: {}\n", points.len()));
            Ok(out)
        }
    }
}

fn run_graph(command: GraphCommand) -> Result<String> {
    let GraphCommand::Build { domain, out, dot } = command;
    let graph = igraph::build_graph(domain.into())?;
    let payload = serde_json::to_string_pretty(&graph)?;
    std::fs::write(&out, &payload)
        .with_context(|| format!("writing {}", out.display()))?;
    if let Some(dot_path) = &dot {
        std::fs::write(dot_path, graph.to_dot())
            .with_context(|| format!("writing {}", dot_path.display()))?;
    }
    let profile = graph.depth_profile();
    Ok(format!(
        "graph over {}: {} vertices {:?}, {} edges -> {}\n",
        graph.domain_label,
        graph.vertices.len(),
        profile,
        graph.edges.len(),
        out.display()
    ))
}

fn run_runge(command: RungeCommand) -> Result<String> {
    match command {
        RungeCommand::Bound {
            s_contains_2,
            s_contains_3,
            format,
        } => {
            let report = runge::runge_bound(runge::BadSetProfile {
                contains_place_over_2: s_contains_2,
                contains_place_over_3: s_contains_3,
            });
            match format {
                Format::Json => Ok(serde_json::to_string_pretty(&report)?),
                Format::Text => {
                    let mut out = String::new();
                    for (label, value) in &report.contributions {
                        out.push_str(&format!("  {label}: {value:.6}\n"));
                    }
                    out.push_str(&format!("height bound: {:.6}\n", report.height_bound));
                    out.push_str(&format!(
                        "Faltings bound: {} (recorded)\n",
                        report.faltings_bound
                    ));
                    Ok(out)
                }
            }
        }
        RungeCommand::Sample { count, seed } => {
            let mut sampler = theta::TauSampler::new(seed);
            let quads = chars::goepel_quadruples();
            let mut worst_residual = 0.0f64;
            let mut small_ok = 0usize;
            let mut floor_ok = 0usize;
            for _ in 0..count {
                let tau = sampler.sample();
                let psi = theta::psi_numeric(&tau, 1e-12)
                    .map_err(|e| anyhow::anyhow!("theta evaluation failed: {e}"))?;
                worst_residual = worst_residual
                    .max(psi.max_linear_residual)
                    .max(psi.quartic_residual);
                let mags = psi.magnitudes();
                let small = runge::small_coordinate_set(&mags, runge::Place::Archimedean)
                    .map_err(|e| anyhow::anyhow!("{e}"))?;
                if small.verdict {
                    small_ok += 1;
                }
                if quads.iter().all(|q| {
                    runge::goepel_floor_check(&mags, &q.indices(), runge::Place::Archimedean)
                }) {
                    floor_ok += 1;
                }
            }
            let verdict = small_ok == count && floor_ok == count;
            Ok(serde_json::to_string_pretty(&json!({
                "samples": count,
                "seed": seed,
                "small_set_verdicts": small_ok,
                "goepel_floor_verdicts": floor_ok,
                "max_equation_residual": worst_residual,
                "certified": verdict,
            }))?)
        }
    }
}

fn run_baker(command: BakerCommand) -> Result<String> {
    match command {
        BakerCommand::Constants {
            d,
            s,
            regime,
            variant,
        } => {
            let regime = match regime {
                RegimeArg::Arch => baker::Regime::Archimedean,
                RegimeArg::Nonarch => baker::Regime::NonArchimedean,
            };
            let variant = match variant {
                VariantArg::Thm22 => baker::ArchVariant::Theorem22,
                VariantArg::P77 => baker::ArchVariant::P77,
            };
            if d < 1 || s < 1 {
                bail!("need d >= 1 and s >= 1");
            }
            let c = baker::constants(d, s, regime, variant);
            Ok(serde_json::to_string_pretty(&c)?)
        }
        BakerCommand::Bound(args) => {
            let report = baker::final_bound(
                baker::BoundInputs {
                    d: args.d,
                    s: args.s,
                    h_k: args.hk,
                    r_s: args.rs,
                    p_s: args.ps,
                },
                baker::ArchVariant::Theorem22,
            )
            .map_err(|e| anyhow::anyhow!("{e}"))?;
            let mut payload = serde_json::to_value(&report)?;
            if args.audit {
                let (coefficient, certified) = baker::headline_coefficient_certificate();
                payload["headline_audit"] = json!({
                    "coefficient_interval": [coefficient.lo, coefficient.hi],
                    "bound": 1e66,
                    "certified": certified,
                });
            }
            Ok(serde_json::to_string_pretty(&payload)?)
        }
    }
}

fn run_search_cmd(command: SearchCommand) -> Result<String> {
    let SearchCommand::Run {
        height,
        allow_zeros,
        alphabet,
        out,
        cert,
    } = command;
    let mut cfg = search::SearchConfig::new(height).with_zeros(allow_zeros);
    if matches!(alphabet, AlphabetArg::Pm1) {
        cfg.max_exponent = 0;
    }
    let outcome = search::run_search(&cfg).map_err(|e| anyhow::anyhow!("{e}"))?;
    let records: Vec<PointRecord> = outcome.points.iter().map(PointRecord::from).collect();
    std::fs::write(&out, serde_json::to_string_pretty(&records)?)
        .with_context(|| format!("writing {}", out.display()))?;
    std::fs::write(&cert, serde_json::to_string_pretty(&outcome.certificate)?)
        .with_context(|| format!("writing {}", cert.display()))?;
    Ok(format!(
        "search (height {height}, zeros {allow_zeros}): {} points, {} tuples -> {}, cert -> {}\n",
        outcome.points.len(),
        outcome.certificate.free_tuples_enumerated,
        out.display(),
        cert.display()
    ))
}

fn run_theta(command: ThetaCommand) -> Result<String> {
    let ThetaCommand::Verify {
        suite,
        samples,
        seed,
        tol,
        format,
    } = command;
    if !(tol > 0.0) {
        bail!("tolerance must be positive");
    }
    let mut results = serde_json::Map::new();
    let want = |s: ThetaSuite| -> bool {
        matches!(suite, ThetaSuite::All) || std::mem::discriminant(&suite) == std::mem::discriminant(&s)
    };

    if want(ThetaSuite::Equations) {
        let mut sampler = theta::TauSampler::new(seed);
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let psi = theta::psi_numeric(&sampler.sample(), tol)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            worst = worst.max(psi.max_linear_residual).max(psi.quartic_residual);
        }
        results.insert("equations_max_residual".into(), json!(worst));
    }
    if want(ThetaSuite::Modularity) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let mut sampler = theta::TauSampler::new(seed ^ 2);
        let n = samples.min(20).max(1);
        let mut worst = 0.0f64;
        for k in 0..n {
            let m = theta::sample_integral_symplectic(&mut rng, 1 + k % 3);
            let rep = theta::verify_modularity(&m, &sampler.sample(), tol)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            worst = worst.max(rep.max_spread).max(rep.cocycle_modulus);
        }
        results.insert("modularity_samples".into(), json!(n));
        results.insert("modularity_max_spread".into(), json!(worst));
    }
    if want(ThetaSuite::Splitting) {
        let mut sampler = theta::TauSampler::new(seed ^ 3);
        let mut worst = 0.0f64;
        let n = samples.min(10).max(1);
        for _ in 0..n {
            let gen = sampler.sample();
            let [row0, row1] = gen.entries();
            let t1 = row0[0];
            let t2 = row1[1];
            let diag = theta::SiegelMatrix::diagonal(t1, t2)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            for m in chars::all_characteristics() {
                let bits = m.bits().map(i64::from);
                let joint = theta::theta_constant(&bits, &diag, tol)
                    .map_err(|e| anyhow::anyhow!("{e}"))?
                    .value();
                let split = theta::theta_constant_genus1(bits[0], bits[2], t1, tol)
                    .map_err(|e| anyhow::anyhow!("{e}"))?
                    * theta::theta_constant_genus1(bits[1], bits[3], t2, tol)
                        .map_err(|e| anyhow::anyhow!("{e}"))?;
                worst = worst.max((joint - split).norm());
            }
        }
        results.insert("splitting_max_error".into(), json!(worst));
    }
    if want(ThetaSuite::Rosenhain) {
        let mut sampler = theta::TauSampler::new(seed ^ 4);
        let mut worst = 0.0f64;
        for _ in 0..samples.min(50).max(1) {
            let squares = theta::even_thetas(&sampler.sample(), tol)
                .map_err(|e| anyhow::anyhow!("{e}"))?
                .map(|t| t.value() * t.value());
            let r = theta::rosenhain(&squares, tol).map_err(|e| anyhow::anyhow!("{e}"))?;
            worst = worst.max(r.dual_path_error);
        }
        results.insert("rosenhain_max_dual_path_error".into(), json!(worst));
    }
    if want(ThetaSuite::Smallsets) {
        let mut sampler = theta::TauSampler::new(seed ^ 5);
        let mut ok = 0usize;
        for _ in 0..samples {
            let psi = theta::psi_numeric(&sampler.sample(), tol)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            let small =
                runge::small_coordinate_set(&psi.magnitudes(), runge::Place::Archimedean)
                    .map_err(|e| anyhow::anyhow!("{e}"))?;
            if small.verdict {
                ok += 1;
            }
        }
        results.insert("smallset_samples".into(), json!(samples));
        results.insert("smallset_verdicts".into(), json!(ok));
    }
    results.insert("seed".into(), json!(seed));
    results.insert("tolerance".into(), json!(tol));

    match format {
        Format::Json => Ok(serde_json::to_string_pretty(&serde_json::Value::Object(
            results,
        ))?),
        Format::Text => {
            let mut out = String::new();
            for (k, v) in &results {
                out.push_str(&format!("{k}: {v}\n"));
            }
            Ok(out)
        }
    }
}
