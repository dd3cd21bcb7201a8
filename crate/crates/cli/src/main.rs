//! `henon`: iterate transcendental Hénon maps and run their certificates.
//!
//! Exit codes: 0 success or passing certificate, 1 failing certificate,
//! 2 usage error, 3 precondition or runtime error.

mod parse;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use henon_core::certify::{DEFAULT_BOUNDARY_SAMPLES, LIMIT_TOL};
use henon_core::dynamics::ADMISSIBLE_R_TOLERANCE;
use henon_core::{
    absorbing_membership, admissible_r, conjugacy_check, dump_orbit, growth_check, invariance_check, is_admissible,
    iterate_orbit, limit_pair, render_slice, rouche_certificate, rouche_certificate_auto, sample_region,
    sandwich_phi_w, AbsorbingStatus, Certificate, CertificateKind, DumpFormat, Error, LimitPair, MapSpec, Plane, Point,
    SliceSpec, Verdict, Window,
};

/// Epsilon used to pick the default `--R`.
const DEFAULT_R_EPS: f64 = 0.1;

#[derive(Parser, Debug)]
#[command(
    name = "henon",
    version,
    about = "Transcendental Hénon maps F(z,w) = (a w + f(z), z): orbits, limit functions and certificates"
)]
struct Cli {
    /// Map as `a=<a>;f=<A1>,<k1>+<A2>,<k2>...` (f = Σ A e^{-k z}) or `a=<a>;f=0`.
    #[arg(long, global = true, default_value = "a=2;f=1,1")]
    map: MapSpec,
    /// Threshold R of W_R = {Re z > R, Re w > R}. Defaults to the admissible R
    /// for epsilon = 0.1, rounded up to one decimal.
    #[arg(long = "R", global = true)]
    r: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct PointArgs {
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    z: Complex64,
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    w: Complex64,
}

impl PointArgs {
    fn point(&self) -> Point {
        Point::new(self.z, self.w)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Forward orbit as CSV (default) or JSON lines.
    Orbit {
        #[command(flatten)]
        p: PointArgs,
        #[arg(long, default_value_t = 50)]
        n: usize,
        /// Append h1, h2 columns (every orbit point must lie in W_R).
        #[arg(long)]
        limits: bool,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Certified h1, h2 at a point of W_R.
    Limitfn {
        #[command(flatten)]
        p: PointArgs,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Conjugacy residual φ∘F − L∘φ on samples, or the W_{R±Δ} sandwich.
    Conjcheck {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Largest n for the two-route φ_n comparison.
        #[arg(long, default_value_t = 40)]
        route_n: usize,
        #[arg(long, default_value_t = 1e-9)]
        threshold: f64,
        /// Check W_{R+Δ} ⊂ φ(W_R) ⊂ W_{R−Δ} instead.
        #[arg(long)]
        sandwich: bool,
    },
    /// Forward invariance of W_R with margin epsilon.
    Invariance {
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Growth sandwich at one point (--z/--w) or on seeded samples.
    Growth {
        #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, requires = "w")]
        z: Option<Complex64>,
        #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, requires = "z")]
        w: Option<Complex64>,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        /// Defaults to m / 10.
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value_t = 60)]
        n_max: usize,
    },
    /// Rouché certificate that c ∈ h1(W_R).
    Rouche {
        #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
        c: Complex64,
        /// Double M from 2 until the certificate passes (default without --M).
        #[arg(long = "auto-M", conflicts_with = "m_param")]
        auto_m: bool,
        #[arg(long = "M")]
        m_param: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_BOUNDARY_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// First entry of the forward orbit into W_R.
    Absorb {
        #[command(flatten)]
        p: PointArgs,
        #[arg(long, default_value_t = 100)]
        n_max: usize,
    },
    /// Escape-time slice as binary PPM.
    Render {
        #[arg(long, value_enum, default_value_t = PlaneArg::ReZReW)]
        plane: PlaneArg,
        /// `min_x,max_x,min_y,max_y`.
        #[arg(long, value_parser = parse::window, allow_hyphen_values = true, default_value = "-10,10,-10,10")]
        window: Window,
        #[arg(long, default_value_t = 256)]
        width: usize,
        #[arg(long, default_value_t = 256)]
        height: usize,
        #[arg(long, default_value_t = 100)]
        n_max: usize,
        /// Frozen Im z for the re-z-re-w plane.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        im_z: f64,
        /// Frozen Im w for the re-z-re-w plane.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        im_w: f64,
        /// Frozen w for the z plane.
        #[arg(long, value_parser = parse::complex, allow_hyphen_values = true, default_value = "6")]
        w: Complex64,
        /// Shade by arg h1 at the entry point.
        #[arg(long)]
        shade: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PlaneArg {
    /// x = Re z, y = Re w.
    ReZReW,
    /// x + iy = z.
    Z,
}

enum Outcome {
    Done,
    Certificate(Verdict),
}

/// Admissible R for epsilon = 0.1 rounded up to one decimal. The bisection
/// returns an upper bracket within `ADMISSIBLE_R_TOLERANCE` of the root, so
/// that slack is removed before rounding and admissibility rechecked after.
fn default_r(m: &MapSpec) -> Result<f64, Error> {
    let r = admissible_r(m, DEFAULT_R_EPS)?;
    let mut rounded = ((r - ADMISSIBLE_R_TOLERANCE) * 10.0).ceil() / 10.0;
    if !is_admissible(m, rounded, DEFAULT_R_EPS) {
        rounded += 0.1;
    }
    Ok(rounded)
}

fn emit(out: &Option<PathBuf>, bytes: &[u8]) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, bytes)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn emit_certificate(cli: &Cli, cert: &Certificate) -> Result<Outcome, Error> {
    let mut text = cert.to_json();
    text.push('\n');
    emit(&cli.out, text.as_bytes())?;
    Ok(Outcome::Certificate(cert.verdict))
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let m = &cli.map;
    let r = match cli.r {
        Some(r) => r,
        None => default_r(m)?,
    };
    match &cli.command {
        Command::Orbit { p, n, limits, tol } => {
            let orbit = iterate_orbit(m, &p.point(), *n);
            let pairs = if *limits {
                Some(orbit.points().iter().map(|q| limit_pair(m, q, r, *tol)).collect::<Result<Vec<_>, _>>()?)
            } else {
                None
            };
            let format = match cli.format {
                Some(Format::Json) => DumpFormat::JsonLines,
                _ => DumpFormat::Csv,
            };
            let mut buf = Vec::new();
            dump_orbit(&orbit, pairs.as_deref(), format, &mut buf)?;
            emit(&cli.out, &buf)?;
            if let Some(step) = orbit.stopped_at() {
                eprintln!("orbit overflowed at step {step}");
            }
            Ok(Outcome::Done)
        }
        Command::Limitfn { p, tol } => {
            let pair: LimitPair = limit_pair(m, &p.point(), r, *tol)?;
            let record = pair.record();
            let text = match cli.format {
                Some(Format::Csv) => format!(
                    "re_h1,im_h1,err_h1,re_h2,im_h2,err_h2,N_used\n{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}\n",
                    record.re_h1, record.im_h1, record.err_h1, record.re_h2, record.im_h2, record.err_h2, record.n_used
                ),
                _ => format!("{}\n", json!(record)),
            };
            emit(&cli.out, text.as_bytes())?;
            Ok(Outcome::Done)
        }
        Command::Conjcheck { samples, tol, route_n, threshold, sandwich } => {
            let cert = if *sandwich {
                sandwich_phi_w(m, r, *samples, cli.seed, *tol)?
            } else {
                conjugacy_check(m, r, *samples, cli.seed, *tol, *route_n, *threshold)?
            };
            emit_certificate(cli, &cert)
        }
        Command::Invariance { eps, samples } => {
            let cert = invariance_check(m, r, *eps, *samples, cli.seed)?;
            emit_certificate(cli, &cert)
        }
        Command::Growth { z, w, samples, eps, n_max } => {
            let (points, seed) = match (z, w) {
                (Some(z), Some(w)) => (vec![Point::new(*z, *w)], None),
                _ => (sample_region(cli.seed, r, *samples), Some(cli.seed)),
            };
            let report = growth_check(m, &points, r, *eps, *n_max)?;
            let mut cert = report.to_certificate(m, r).param("limit_tol", LIMIT_TOL);
            if let Some(seed) = seed {
                cert = cert.with_seed(seed);
            }
            emit_certificate(cli, &cert)
        }
        Command::Rouche { c, auto_m: _, m_param, samples, tol } => {
            let cert = match m_param {
                Some(mp) => rouche_certificate(m, *c, r, *mp, *samples, *tol)?,
                None => rouche_certificate_auto(m, *c, r, *samples, *tol)?,
            };
            emit_certificate(cli, &cert.to_certificate(m, r, *tol))
        }
        Command::Absorb { p, n_max } => {
            let point = p.point();
            let v = absorbing_membership(m, &point, r, *n_max)?;
            // Non-membership is never certified, so a miss is unknown rather than fail.
            let verdict = if v.is_member() { Verdict::Pass } else { Verdict::Unknown };
            let status = match v.status {
                AbsorbingStatus::Member => "member".to_string(),
                AbsorbingStatus::UnknownAfter(n) => format!("unknown_after({n})"),
            };
            let cert = Certificate::new(CertificateKind::Absorbing, m, verdict)
                .param("R", r)
                .param("n_max", *n_max)
                .param("z", vec![point.z.re, point.z.im])
                .param("w", vec![point.w.re, point.w.im])
                .value("entry_index", v.entry_index)
                .value("status", status)
                .with_samples(1);
            emit_certificate(cli, &cert)
        }
        Command::Render { plane, window, width, height, n_max, im_z, im_w, w, shade } => {
            let plane = match plane {
                PlaneArg::ReZReW => Plane::ReZReW { im_z: *im_z, im_w: *im_w },
                PlaneArg::Z => Plane::ZPlane { w: *w },
            };
            let spec = SliceSpec { plane, window: *window, width: *width, height: *height };
            let image = render_slice(m, r, &spec, *n_max, *shade)?;
            emit(&cli.out, &image.to_ppm())?;
            let members = image.cells.iter().filter(|c| c.entry_index.is_some()).count();
            eprintln!("{members} of {} pixels entered W_R within {n_max} steps", image.cells.len());
            Ok(Outcome::Done)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Certificate(v)) if v.passed() => ExitCode::SUCCESS,
        Ok(Outcome::Certificate(_)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
