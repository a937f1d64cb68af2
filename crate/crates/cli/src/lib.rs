//! Command-line front end: every library operation is reachable through a
//! subcommand, all numeric output is printed with 17 significant digits, and
//! a fixed seed makes every invocation byte-identical.

use clap::{Args, Parser, Subcommand};

mod anyons;
mod emit;
mod gauge;
mod geometry;
mod lattice;

use csbf_core::error::Error;
use emit::error_line;

#[derive(Parser)]
#[command(
    name = "csbf",
    about = "Anyon data, braid representations, state-sum invariants, gauge-field checks, and honeycomb lattices",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Modular data (S matrix, twists, quantum dimensions) at one level
    ModularData {
        #[arg(long)]
        level: u32,
    },
    /// Fusion-category data and consistency checks
    Fusion {
        #[arg(long)]
        level: u32,
        /// pentagon, hexagon, verlinde, unitarity, or all
        #[arg(long)]
        check: Option<String>,
        /// six labels a,b,c,d,e,f
        #[arg(long)]
        f_symbol: Option<String>,
        /// three labels a,b,c
        #[arg(long)]
        r_symbol: Option<String>,
        /// strand count, strand label, total label
        #[arg(long)]
        space: Option<String>,
    },
    /// Unitary matrix of a braid word on the fusion space
    Braid {
        #[arg(long)]
        level: u32,
        #[arg(long)]
        anyon: u32,
        /// restrict to one total charge (default: all non-trivial blocks)
        #[arg(long)]
        total: Option<u32>,
        #[arg(long)]
        strands: Option<usize>,
        /// inline word, e.g. "1+ 2+ 1+" or "3; 1 +1 2 -1"
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        word_file: Option<std::path::PathBuf>,
    },
    /// Closure invariant of a braid word
    Link {
        #[arg(long)]
        level: u32,
        #[arg(long)]
        anyon: u32,
        /// per-strand labels overriding --anyon
        #[arg(long)]
        colors: Option<String>,
        /// skip the writhe correction (blackboard-framed value)
        #[arg(long)]
        framed: bool,
        #[arg(long)]
        strands: Option<usize>,
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        word_file: Option<std::path::PathBuf>,
    },
    /// State-sum invariant of a closed triangulation
    Tv {
        #[arg(long)]
        level: u32,
        #[arg(long)]
        file: Option<std::path::PathBuf>,
        /// built-in: S3, S2xS1, RP3, L31, S3S3
        #[arg(long)]
        manifold: Option<String>,
        /// apply this many random expansion moves first
        #[arg(long, default_value_t = 0)]
        pachner: usize,
        /// then this many random collapse moves
        #[arg(long, default_value_t = 0)]
        pachner_inverse: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// also report the squared chiral value (S3, S2xS1)
        #[arg(long)]
        doubled: bool,
    },
    /// Split a seeded field pair chirally and compare the two action routes
    CsbfCheck {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        grid: usize,
        #[arg(long)]
        kappa: i64,
        #[arg(long, default_value_t = 3)]
        band_limit: usize,
        #[arg(long, default_value_t = 0.8)]
        amplitude: f64,
        /// re-evaluate on grids 16, 32, 64
        #[arg(long)]
        refine: bool,
        /// write the sampled configuration in the flat binary format
        #[arg(long)]
        dump_config: Option<std::path::PathBuf>,
        /// write the configuration as JSON (grids up to 8)
        #[arg(long)]
        dump_json: Option<std::path::PathBuf>,
        /// report norms of the microscopic coupling fields
        #[arg(long)]
        microscopic: bool,
    },
    /// Wilson loop of a seeded configuration around a lattice rectangle
    Holonomy {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        grid: usize,
        #[arg(long)]
        kappa: i64,
        #[arg(long, default_value_t = 3)]
        band_limit: usize,
        #[arg(long, default_value_t = 1e-4)]
        amplitude: f64,
        /// xy, yz, or zx
        #[arg(long, default_value = "xy")]
        plane: String,
        #[arg(long, default_value_t = 4)]
        size: usize,
        #[arg(long, default_value = "0,0,0")]
        origin: String,
        /// chirality: +1 or -1
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        sign: i32,
        /// also apply a seeded trivial gauge transformation and report the trace shift
        #[arg(long)]
        gauge_seed: Option<u64>,
        #[arg(long, default_value_t = 0.5)]
        gauge_amplitude: f64,
        /// also traverse the reversed loop and report the deviation from the inverse
        #[arg(long)]
        reverse_check: bool,
    },
    /// Honeycomb tight-binding computations
    Graphene {
        #[command(subcommand)]
        sub: GrapheneCmd,
    },
}

#[derive(Args)]
struct HoneycombArgs {
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = 0.0)]
    mu: f64,
}

impl HoneycombArgs {
    fn params(&self) -> lattice::LatticeParams {
        lattice::LatticeParams {
            t: self.t,
            a: self.a,
            mu: self.mu,
        }
    }
}

#[derive(Subcommand)]
enum GrapheneCmd {
    /// Band energies along a waypoint path, as CSV
    Bands {
        #[command(flatten)]
        params: HoneycombArgs,
        /// dash-separated waypoints from G, K, K' (Kp), M
        #[arg(long, default_value = "G-K-M-G")]
        path: String,
        /// samples per path segment
        #[arg(long, default_value_t = 60)]
        samples: usize,
    },
    /// Wilson-loop phase of the lower band around a valley
    Berry {
        #[command(flatten)]
        params: HoneycombArgs,
        /// K or K' (Kp)
        #[arg(long, default_value = "K")]
        valley: String,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long, default_value_t = 12000)]
        points: usize,
    },
    /// Locate the Dirac points numerically and fit the cone slope
    Dirac {
        #[command(flatten)]
        params: HoneycombArgs,
    },
    /// Eigenvalues of an L x L periodic lattice, as CSV
    Spectrum {
        #[command(flatten)]
        params: HoneycombArgs,
        #[arg(long)]
        l: usize,
        /// same Peierls phase on every bond
        #[arg(long)]
        em_uniform: Option<f64>,
        /// three bond hopping offsets d1,d2,d3 repeated in every cell
        #[arg(long, allow_hyphen_values = true)]
        chiral: Option<String>,
    },
    /// Displacement of the low-energy weight at the two valleys under a bond modulation
    Valley {
        #[command(flatten)]
        params: HoneycombArgs,
        #[arg(long)]
        l: usize,
        #[arg(long, allow_hyphen_values = true)]
        delta: f64,
    },
}

fn dispatch(cli: Cli) -> Result<String, Error> {
    match cli.cmd {
        Cmd::ModularData { level } => anyons::modular_data(level),
        Cmd::Fusion {
            level,
            check,
            f_symbol,
            r_symbol,
            space,
        } => anyons::fusion(&anyons::FusionQuery {
            level,
            check,
            f_entry: f_symbol,
            r_entry: r_symbol,
            space,
        }),
        Cmd::Braid {
            level,
            anyon,
            total,
            strands,
            word,
            word_file,
        } => anyons::braid(&anyons::BraidQuery {
            level,
            anyon,
            total,
            word,
            word_file,
            strands,
        }),
        Cmd::Link {
            level,
            anyon,
            colors,
            framed,
            strands,
            word,
            word_file,
        } => anyons::link(&anyons::LinkQuery {
            level,
            anyon,
            colors,
            framed,
            word,
            word_file,
            strands,
        }),
        Cmd::Tv {
            level,
            file,
            manifold,
            pachner,
            pachner_inverse,
            seed,
            doubled,
        } => geometry::tv(&geometry::TvQuery {
            level,
            file,
            manifold,
            pachner,
            pachner_inverse,
            seed,
            doubled,
        }),
        Cmd::CsbfCheck {
            seed,
            grid,
            kappa,
            band_limit,
            amplitude,
            refine,
            dump_config,
            dump_json,
            microscopic,
        } => gauge::csbf_check(&gauge::CheckQuery {
            seed,
            grid,
            kappa,
            band_limit,
            amplitude,
            refine,
            dump_config,
            dump_json,
            microscopic,
        }),
        Cmd::Holonomy {
            seed,
            grid,
            kappa,
            band_limit,
            amplitude,
            plane,
            size,
            origin,
            sign,
            gauge_seed,
            gauge_amplitude,
            reverse_check,
        } => gauge::holonomy_cmd(&gauge::HolonomyQuery {
            seed,
            grid,
            kappa,
            band_limit,
            amplitude,
            plane,
            size,
            origin,
            sign,
            gauge_seed,
            gauge_amplitude,
            reverse_check,
        }),
        Cmd::Graphene { sub } => match sub {
            GrapheneCmd::Bands {
                params,
                path,
                samples,
            } => lattice::bands_csv(&params.params(), &path, samples),
            GrapheneCmd::Berry {
                params,
                valley,
                radius,
                points,
            } => lattice::berry(&params.params(), &valley, radius, points),
            GrapheneCmd::Dirac { params } => lattice::dirac(&params.params()),
            GrapheneCmd::Spectrum {
                params,
                l,
                em_uniform,
                chiral,
            } => lattice::spectrum_csv(&params.params(), l, em_uniform, chiral.as_deref()),
            GrapheneCmd::Valley { params, l, delta } => {
                lattice::valley(&params.params(), l, delta)
            }
        },
    }
}

/// Parse and execute one invocation; returns the process exit code.
/// 0 = success, 1 = domain/data error, 2 = usage error.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv = std::iter::once("csbf".to_string()).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let detail = e
                .to_string()
                .lines()
                .next()
                .unwrap_or("bad arguments")
                .trim_start_matches("error: ")
                .to_string();
            eprintln!("{}", error_line("usage", &detail));
            return 2;
        }
    };
    match dispatch(cli) {
        Ok(out) => {
            print!("{out}");
            0
        }
        Err(e) => {
            eprintln!("{}", error_line(e.kind(), &e.to_string()));
            1
        }
    }
}
