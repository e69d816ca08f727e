//! Command-line front end: per-module emitters and the aggregated `verify all`.

mod commands;
mod parse;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "sectorial", version, about = "Sector faces, root subsets and arithmetic quotients of Bruhat-Tits buildings")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Root system data.
    #[command(subcommand)]
    Rootsys(RootsysCmd),
    /// Conditions on subsets of positive roots.
    #[command(subcommand)]
    Subsets(SubsetsCmd),
    /// Chevalley structure constants and conjugation polynomials.
    #[command(subcommand)]
    Chevalley(ChevalleyCmd),
    /// Enclosures, corner sets and fixed points in the standard apartment.
    #[command(subcommand)]
    Apartment(ApartmentCmd),
    /// Finite fields, fractional ideals and Riemann-Roch spaces.
    #[command(subcommand)]
    Ffield(FfieldCmd),
    /// Root-group ideals of conjugated unipotent subgroups of SL_n.
    #[command(subcommand)]
    Ideals(IdealsCmd),
    /// Lattice vertices, quotient balls and cusp counts.
    #[command(subcommand)]
    Building(BuildingCmd),
    /// Aggregated checks.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Args)]
pub struct TypeArg {
    /// Root system label such as A3, G2 or B2xA1.
    #[arg(long = "type")]
    pub ty: String,
}

#[derive(Subcommand)]
enum RootsysCmd {
    /// Simple roots, positive roots and the Cartan matrix.
    Show {
        #[command(flatten)]
        ty: TypeArg,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum SubsetsCmd {
    /// Checks the explicit basis Ψ and, optionally, every Ψ(Θ) and its flag.
    Verify {
        #[command(flatten)]
        ty: TypeArg,
        /// Also check Ψ(Θ) and the flag for every proper Θ.
        #[arg(long)]
        all_theta: bool,
    },
    /// Evaluates (C0), (C1), (C2) and the reformulations on a subset.
    Conditions {
        #[command(flatten)]
        ty: TypeArg,
        /// Comma-separated roots in simple-root coordinates, e.g. 10,11.
        #[arg(long, allow_hyphen_values = true)]
        psi: String,
    },
}

#[derive(Subcommand)]
enum ChevalleyCmd {
    /// Nonzero constants c^{r,s}_{α,β} for pairs of positive roots.
    Constants {
        #[command(flatten)]
        ty: TypeArg,
        /// Emit CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Conjugation polynomials P_{i,j} for a subset Ψ.
    ConjTable {
        #[command(flatten)]
        ty: TypeArg,
        /// `basis`, or comma-separated roots in simple-root coordinates.
        #[arg(long, default_value = "basis")]
        psi: String,
        /// Use Ψ(Θ) for this 1-based list of simple roots instead of --psi.
        #[arg(long)]
        theta: Option<String>,
    },
}

#[derive(Subcommand)]
enum ApartmentCmd {
    /// Minimal special vertices of the enclosure of a sector face.
    Corners {
        #[command(flatten)]
        ty: TypeArg,
        /// Tip in fundamental-coweight coordinates, e.g. 1/2,1/2.
        #[arg(long, allow_hyphen_values = true)]
        tip: String,
        /// 1-based simple roots of Θ, comma-separated (empty for a chamber).
        #[arg(long, default_value = "")]
        theta: String,
    },
    /// Enclosure of finitely many points, separated by `;`.
    Enclosure {
        #[command(flatten)]
        ty: TypeArg,
        #[arg(long, allow_hyphen_values = true)]
        points: String,
    },
    /// Common denominator used to normalise affine Weyl fixed points.
    Normalizer {
        #[command(flatten)]
        ty: TypeArg,
    },
}

#[derive(Subcommand)]
enum FfieldCmd {
    /// Basis of J[m] for an ideal J of F_q[t] against the Riemann-Roch count.
    Rr {
        #[arg(long)]
        q: u32,
        /// Degree of J; J = (t^degJ) unless --ideal is given.
        #[arg(long = "degJ", alias = "deg-j", allow_hyphen_values = true)]
        deg_j: Option<i64>,
        /// Generator of J as a rational function in t.
        #[arg(long)]
        ideal: Option<String>,
        #[arg(long)]
        m: i64,
    },
}

#[derive(Args)]
struct MatrixSource {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    q: u32,
    /// JSON file holding the matrix h as a list of rows of strings in t.
    #[arg(long)]
    h_file: Option<PathBuf>,
    /// Draw a random h of this Laurent height instead of reading a file.
    #[arg(long)]
    random_height: Option<i64>,
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Subcommand)]
enum IdealsCmd {
    /// Lower and upper ideals for every root.
    Bounds {
        #[command(flatten)]
        src: MatrixSource,
    },
    /// Lower ideal ⊆ M_α(h) ⊆ upper ideal on a window of Laurent degrees.
    Sandwich {
        #[command(flatten)]
        src: MatrixSource,
        /// 1-based root i,j; repeat for a subset Ψ.
        #[arg(long, required = true)]
        alpha: Vec<String>,
        /// Window lo,hi of t-exponents.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Dot,
    Json,
}

#[derive(Subcommand)]
enum BuildingCmd {
    /// Ball around the standard vertex grouped by Birkhoff type.
    Quotient {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        radius: usize,
        #[arg(long, value_enum, default_value = "json")]
        emit: Emit,
        /// Output file (stdout when omitted).
        output: Option<PathBuf>,
    },
    /// Number of cuspidal sector chambers.
    Cusps {
        #[arg(long)]
        genus: u32,
        /// Weierstrass coefficients a1,a2,a3,a4,a6 (genus 1).
        #[arg(long, allow_hyphen_values = true)]
        curve: Option<String>,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        rank: u32,
    },
    /// Birkhoff factorisation g = u · diag(t^a) · v.
    Birkhoff {
        #[arg(long)]
        q: u32,
        /// JSON file holding g as a list of rows of strings in t.
        #[arg(long)]
        g_file: PathBuf,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Runs the checks of every module and prints a CSV report.
    All {
        #[arg(long, default_value_t = 4)]
        max_rank: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Result of a subcommand: text to emit and whether all checks passed.
pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

impl Outcome {
    pub fn ok(text: String) -> Outcome {
        Outcome { text, pass: true }
    }
}

/// Failures before any check ran (bad parameters) map to exit status 2.
pub enum Failure {
    Usage(String),
    Other(anyhow::Error),
}

impl From<sectorial::Error> for Failure {
    fn from(e: sectorial::Error) -> Failure {
        match e {
            sectorial::Error::Internal(_) => Failure::Other(e.into()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Failure {
        Failure::Other(e)
    }
}

pub type CmdResult = std::result::Result<Outcome, Failure>;

fn dispatch(cmd: Cmd) -> std::result::Result<(Outcome, Option<PathBuf>), Failure> {
    use commands::*;
    let mut out = None;
    let outcome = match cmd {
        Cmd::Rootsys(RootsysCmd::Show { ty, json }) => rootsys_show(&ty.ty, json)?,
        Cmd::Subsets(SubsetsCmd::Verify { ty, all_theta }) => subsets_verify(&ty.ty, all_theta)?,
        Cmd::Subsets(SubsetsCmd::Conditions { ty, psi }) => subsets_conditions(&ty.ty, &psi)?,
        Cmd::Chevalley(ChevalleyCmd::Constants { ty, csv }) => chevalley_constants(&ty.ty, csv)?,
        Cmd::Chevalley(ChevalleyCmd::ConjTable { ty, psi, theta }) => {
            chevalley_conj_table(&ty.ty, &psi, theta.as_deref())?
        }
        Cmd::Apartment(ApartmentCmd::Corners { ty, tip, theta }) => apartment_corners(&ty.ty, &tip, &theta)?,
        Cmd::Apartment(ApartmentCmd::Enclosure { ty, points }) => apartment_enclosure(&ty.ty, &points)?,
        Cmd::Apartment(ApartmentCmd::Normalizer { ty }) => apartment_normalizer(&ty.ty)?,
        Cmd::Ffield(FfieldCmd::Rr { q, deg_j, ideal, m }) => ffield_rr(q, deg_j, ideal.as_deref(), m)?,
        Cmd::Ideals(IdealsCmd::Bounds { src }) => {
            let ctx = load_context(&src)?;
            ideals_bounds(&ctx)?
        }
        Cmd::Ideals(IdealsCmd::Sandwich { src, alpha, window }) => {
            let ctx = load_context(&src)?;
            ideals_sandwich(&ctx, &alpha, window.as_deref())?
        }
        Cmd::Building(BuildingCmd::Quotient { n, q, radius, emit, output }) => {
            out = output;
            building_quotient(n, q, radius, matches!(emit, Emit::Dot))?
        }
        Cmd::Building(BuildingCmd::Cusps { genus, curve, q, rank }) => {
            building_cusps(genus, curve.as_deref(), q, rank)?
        }
        Cmd::Building(BuildingCmd::Birkhoff { q, g_file }) => building_birkhoff(q, &g_file)?,
        Cmd::Verify(VerifyCmd::All { max_rank, seed, out: path }) => {
            out = path;
            verify::all(max_rank, seed)?
        }
    };
    Ok((outcome, out))
}

fn load_context(src: &MatrixSource) -> std::result::Result<sectorial::ideals::ConjContext, Failure> {
    use rand::SeedableRng;
    let f = sectorial::ffield::GaloisField::new(src.q)?;
    let h = match (&src.h_file, src.random_height) {
        (Some(path), None) => parse::matrix_file(&f, path)?,
        (None, Some(height)) => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(src.seed);
            sectorial::ideals::random_h(&f, src.n, height, &mut rng)?
        }
        _ => return Err(Failure::Usage("give exactly one of --h-file and --random-height".into())),
    };
    if h.len() != src.n {
        return Err(Failure::Usage(format!("h has {} rows, expected n = {}", h.len(), src.n)));
    }
    Ok(sectorial::ideals::ConjContext::new(h)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok((outcome, path)) => {
            let written = match path {
                Some(p) => std::fs::write(&p, &outcome.text).map_err(|e| format!("{}: {e}", p.display())),
                None => {
                    print!("{}", outcome.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
