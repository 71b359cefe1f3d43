//! Command-line front end. Every computation is reachable as a subcommand
//! that writes CSV (grids, curves, tables) or JSON (scalars, fits).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::ctp_green::{ctp_propagator, identity_residual, Statistics};
use crate::error::Error;
use crate::modes::{figure_map, trace_dispersion, MapQuantity, MapWindow};
use crate::oracles::{damping_oracle, lindhard_oracle, QuadratureSpec};
use crate::output::{csv, num, parse_numeric_csv, ConfigEcho};
use crate::params::PlasmaParams;
use crate::response::{classicality, inverse_propagator, landau_damping, lindhard_real, ModePoint};
use crate::scan_fit::{fit_power_law, linear_spaced, log_spaced, scan};

/// Environment variable naming the directory relative `--out` paths resolve against.
pub const OUT_DIR_ENV: &str = "CTP_COULOMB_OUT_DIR";

/// Residual above which `ctp-check` fails.
pub const IDENTITY_TOL: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(name = "ctp-coulomb", version, about = "One-loop CTP response of the Coulomb field in an electron gas")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum QuantityArg {
    #[value(alias = "re_inv")]
    ReInv,
    Damping,
    #[value(alias = "inv_re_inv")]
    InvReInv,
    Classicality,
    Region,
}

impl From<QuantityArg> for MapQuantity {
    fn from(q: QuantityArg) -> Self {
        match q {
            QuantityArg::ReInv => MapQuantity::ReInv,
            QuantityArg::Damping => MapQuantity::Damping,
            QuantityArg::InvReInv => MapQuantity::InvReInv,
            QuantityArg::Classicality => MapQuantity::Classicality,
            QuantityArg::Region => MapQuantity::Region,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StatArg {
    Fermi,
    Bose,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a response quantity on a (z, q) grid.
    #[command(allow_negative_numbers = true)]
    Map {
        #[arg(long)]
        rs: f64,
        #[arg(long, value_enum)]
        quantity: QuantityArg,
        #[arg(long)]
        zmin: f64,
        #[arg(long)]
        zmax: f64,
        #[arg(long)]
        qmin: f64,
        #[arg(long)]
        qmax: f64,
        #[arg(long)]
        nz: usize,
        #[arg(long)]
        nq: usize,
        #[arg(long)]
        clamp: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        msq: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trace the collective-mode curve.
    #[command(allow_negative_numbers = true)]
    Dispersion {
        #[arg(long)]
        rs: f64,
        #[arg(long, default_value_t = 0.0)]
        msq: f64,
        #[arg(long, default_value_t = 4.0)]
        zmax: f64,
        #[arg(long)]
        qmax: f64,
        #[arg(long, default_value_t = 400)]
        nq: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep r_s and collect the crossover scales.
    #[command(allow_negative_numbers = true)]
    Scan {
        #[arg(long, default_value_t = 0.01)]
        rs_min: f64,
        #[arg(long, default_value_t = 0.3)]
        rs_max: f64,
        #[arg(long, default_value_t = 30)]
        n: usize,
        /// Linear instead of logarithmic spacing.
        #[arg(long)]
        linear: bool,
        /// Fit power laws to q_cl and z_cl.
        #[arg(long)]
        fit: bool,
        #[arg(long, default_value_t = 0.0)]
        msq: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Destination of the fit JSON; defaults to `<out>.fit.json`.
        #[arg(long)]
        fit_out: Option<PathBuf>,
    },
    /// Compare closed forms against brute-force integrals at listed points.
    #[command(allow_negative_numbers = true)]
    Oracle {
        #[arg(long)]
        rs: f64,
        #[arg(long, default_value_t = 0.0)]
        msq: f64,
        /// CSV file of `z,q` rows.
        #[arg(long)]
        points: PathBuf,
        /// Relative tolerance for the Lindhard comparison.
        #[arg(long, default_value_t = 1e-5)]
        tol: f64,
        /// Relative tolerance for the damping comparison.
        #[arg(long, default_value_t = 1e-3)]
        damping_tol: f64,
        #[arg(long, default_value_t = 1e-10)]
        quad_tol: f64,
        #[arg(long, default_value_t = 1e-2)]
        pv_window: f64,
        /// Radial cells for the damping area integral.
        #[arg(long, default_value_t = 4000)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the free-propagator identities on a deterministic sample.
    #[command(allow_negative_numbers = true)]
    CtpCheck {
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        mu: f64,
        #[arg(long, value_enum)]
        stat: StatArg,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inverse propagator matrix and classicality at one point.
    #[command(allow_negative_numbers = true)]
    Selfenergy {
        #[arg(long)]
        rs: f64,
        #[arg(long)]
        z: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 0.0)]
        msq: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Usage(#[from] clap::Error),
    #[error("{0}")]
    Invalid(#[from] Error),
    #[error("{0}")]
    Input(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(e) => e.exit_code(),
            CliError::Invalid(_) | CliError::Input(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

fn resolve(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn emit(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let path = resolve(path);
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(path, text)?;
        }
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit status.
pub fn run<I, S>(args: I, stdout: &mut dyn Write) -> Result<i32, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    execute(cli.command, stdout)
}

pub fn execute(command: Command, stdout: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Map { rs, quantity, zmin, zmax, qmin, qmax, nz, nq, clamp, msq, out } => {
            let p = PlasmaParams::with_all(rs, msq, 4.0)?;
            let quantity = MapQuantity::from(quantity);
            let mut echo = ConfigEcho::new("map");
            echo.set_num("rs", rs)
                .set_num("msq", msq)
                .set("quantity", quantity.name())
                .set_num("zmin", zmin)
                .set_num("zmax", zmax)
                .set_num("qmin", qmin)
                .set_num("qmax", qmax)
                .set("nz", nz)
                .set("nq", nq)
                .set("clamp", clamp.map(num).unwrap_or_else(|| "none".into()));
            let window = MapWindow { z_min: zmin, z_max: zmax, q_min: qmin, q_max: qmax };
            let cells = figure_map(window, nz, nq, &p, quantity, clamp)?;
            let text = csv(
                &echo,
                &["z", "q", "value"],
                cells.iter().map(|c| vec![num(c.z), num(c.q), num(c.value)]),
            );
            emit(&out, &text, stdout)?;
            Ok(0)
        }
        Command::Dispersion { rs, msq, zmax, qmax, nq, out } => {
            let p = PlasmaParams::with_all(rs, msq, zmax)?;
            let mut echo = ConfigEcho::new("dispersion");
            echo.set_num("rs", rs).set_num("msq", msq).set_num("zmax", zmax).set_num("qmax", qmax).set("nq", nq);
            let curve = trace_dispersion(&p, qmax, nq)?;
            let text = csv(
                &echo,
                &["q", "branch", "z_root"],
                curve.points.iter().map(|pt| vec![num(pt.q), pt.branch.label().to_string(), num(pt.z)]),
            );
            emit(&out, &text, stdout)?;
            Ok(0)
        }
        Command::Scan { rs_min, rs_max, n, linear, fit, msq, out, fit_out } => {
            if !(rs_min > 0.0 && rs_max >= rs_min) {
                return Err(CliError::Input("scan needs 0 < rs-min <= rs-max".into()));
            }
            let template = PlasmaParams::with_all(rs_min, msq, 4.0)?;
            let values = if linear { linear_spaced(rs_min, rs_max, n) } else { log_spaced(rs_min, rs_max, n) };
            let mut echo = ConfigEcho::new("scan");
            echo.set_num("rs_min", rs_min)
                .set_num("rs_max", rs_max)
                .set("n", n)
                .set("spacing", if linear { "linear" } else { "log" })
                .set_num("msq", msq)
                .set("fit", fit);
            let result = scan(&values, &template)?;
            let text = csv(
                &echo,
                &["r_s", "q_cl", "z_cl", "q_tf", "z_pl", "q_cl_over_q_tf", "z_cl_over_z_pl"],
                result.rows.iter().map(|r| {
                    vec![
                        num(r.r_s),
                        opt_num(r.q_cl),
                        opt_num(r.z_cl),
                        num(r.q_tf),
                        num(r.z_pl),
                        opt_num(r.q_ratio),
                        opt_num(r.z_ratio),
                    ]
                }),
            );
            emit(&out, &text, stdout)?;
            if fit {
                let mut fits = Vec::new();
                for (name, pts) in [("q_cl", result.q_cl_points()), ("z_cl", result.z_cl_points())] {
                    match fit_power_law(&pts) {
                        Ok(f) => fits.push(json!({
                            "quantity": name,
                            "amplitude": f.amplitude,
                            "exponent": f.exponent,
                            "residual": f.residual,
                            "points": pts.len(),
                        })),
                        Err(e) => fits.push(json!({ "quantity": name, "error": e.to_string() })),
                    }
                }
                let doc = json!({ "config": echo.to_json(), "fits": fits });
                let target = fit_out.or_else(|| {
                    out.as_ref().map(|o| {
                        let mut s = o.clone().into_os_string();
                        s.push(".fit.json");
                        PathBuf::from(s)
                    })
                });
                emit(&target, &json_text(&doc), stdout)?;
            }
            Ok(0)
        }
        Command::Oracle { rs, msq, points, tol, damping_tol, quad_tol, pv_window, samples, out } => {
            let p = PlasmaParams::with_all(rs, msq, 4.0)?;
            let text = std::fs::read_to_string(&points)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", points.display())))?;
            let rows = parse_numeric_csv(&text).map_err(CliError::Input)?;
            let spec = QuadratureSpec { rel_tol: quad_tol, max_subdivisions: 4000, pv_window };
            let mut echo = ConfigEcho::new("oracle");
            echo.set_num("rs", rs)
                .set_num("msq", msq)
                .set("points", points.display())
                .set_num("tol", tol)
                .set_num("damping_tol", damping_tol)
                .set_num("quad_tol", quad_tol)
                .set_num("pv_window", pv_window)
                .set("samples", samples);
            let mut failed = false;
            let mut lines = Vec::new();
            for row in rows {
                let [z, q] = row[..] else {
                    return Err(CliError::Input(format!("expected `z,q` rows, got {} fields", row.len())));
                };
                let pt = ModePoint::new(z, q);
                let l_closed = q * q + msq - lindhard_real(pt, &p)?;
                let l_oracle = lindhard_oracle(pt, &p, &spec)?;
                let l_err = (l_oracle - l_closed).abs() / l_closed.abs().max(f64::MIN_POSITIVE);
                let d_closed = landau_damping(pt, &p)?;
                let d_oracle = if z == 0.0 { 0.0 } else { damping_oracle(ModePoint::new(z.abs(), q), &p, samples)? };
                let (d_err, d_ok) = if d_closed == 0.0 {
                    (d_oracle.abs(), d_oracle.abs() < 1e-8)
                } else {
                    let e = (d_oracle - d_closed).abs() / d_closed;
                    (e, e <= damping_tol)
                };
                failed |= !(l_err <= tol) || !d_ok;
                lines.push(vec![
                    num(z),
                    num(q),
                    num(l_closed),
                    num(l_oracle),
                    num(l_err),
                    num(d_closed),
                    num(d_oracle),
                    num(d_err),
                ]);
            }
            let text = csv(
                &echo,
                &["z", "q", "lindhard_closed", "lindhard_oracle", "lindhard_rel_err", "damping_closed", "damping_oracle", "damping_err"],
                lines,
            );
            emit(&out, &text, stdout)?;
            Ok(if failed { 1 } else { 0 })
        }
        Command::CtpCheck { beta, mu, stat, samples, out } => {
            let s = match stat {
                StatArg::Fermi => Statistics::Fermi,
                StatArg::Bose => Statistics::Bose,
            };
            let mut echo = ConfigEcho::new("ctp-check");
            echo.set_num("beta", beta)
                .set_num("mu", mu)
                .set("stat", match s { Statistics::Fermi => "fermi", Statistics::Bose => "bose" })
                .set("samples", samples);
            // Weyl sequence over momenta; bosons stay above the condensation edge
            let k_floor = if s == Statistics::Bose { (2.0 * mu.max(0.0)).sqrt() + 1e-3 } else { 0.0 };
            let golden = (5f64.sqrt() - 1.0) / 2.0;
            let (mut principal, mut delta, mut spectral) = (0f64, 0f64, 0f64);
            for i in 0..samples {
                let k = k_floor + 3.0 * ((i as f64 + 0.5) * golden).fract();
                let m = ctp_propagator(0.0, k, beta, mu, s)?;
                let r = identity_residual(&m, s);
                principal = principal.max(r.principal.norm());
                let scale = 1.0 + m.mp.delta_weight.abs();
                delta = delta.max(r.delta.norm() / scale);
                spectral = spectral.max((m.mp.delta_weight - m.pm.delta_weight - s.xi::<f64>()).abs() / scale);
            }
            let pass = principal <= IDENTITY_TOL && delta <= IDENTITY_TOL && spectral <= IDENTITY_TOL;
            let doc = json!({
                "config": echo.to_json(),
                "samples": samples,
                "max_principal_residual": principal,
                "max_delta_residual": delta,
                "max_spectral_residual": spectral,
                "tolerance": IDENTITY_TOL,
                "pass": pass,
            });
            emit(&out, &json_text(&doc), stdout)?;
            Ok(if pass { 0 } else { 1 })
        }
        Command::Selfenergy { rs, z, q, msq, out } => {
            let p = PlasmaParams::with_all(rs, msq, 4.0)?;
            let pt = ModePoint::new(z, q);
            let m = inverse_propagator(pt, &p)?;
            let entry = |c: num_complex::Complex<f64>| json!({ "re": c.re, "im": c.im });
            let mut echo = ConfigEcho::new("selfenergy");
            echo.set_num("rs", rs).set_num("z", z).set_num("q", q).set_num("msq", msq);
            let (cl, cl_err) = match classicality(pt, &p) {
                Ok(v) => (json!(v), serde_json::Value::Null),
                Err(e) => (serde_json::Value::Null, json!(e.to_string())),
            };
            let doc = json!({
                "config": echo.to_json(),
                "inverse_propagator": {
                    "pp": entry(m.pp),
                    "pm": entry(m.pm),
                    "mp": entry(m.mp),
                    "mm": entry(m.mm),
                },
                "re_inv": m.pp.re,
                "damping": m.pp.im,
                "classicality": cl,
                "classicality_error": cl_err,
            });
            emit(&out, &json_text(&doc), stdout)?;
            Ok(0)
        }
    }
}
