//! `teich`: the experiments of the `teich` library as subcommands.
//!
//! Exit status is 0 on success, 1 when a validation residual exceeds its
//! tolerance or a check fails, and 2 on bad input.

mod config;
mod family;
mod output;

use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::{ArgAction, Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use serde_json::json;

use teich::checks;
use teich::hyptrig::{
    axis_endpoints, collar_width, geodesic_distance, pants_arc_one_cuff, pants_arc_two_cuffs, quad_side,
};
use teich::mcg::{
    dilatation_by_iteration, tau_estimate, translation_estimate, twist_pinch, MappingClass, SearchConfig,
};
use teich::metrics::dhat;
use teich::pantsnet::{build_glued_rep, build_pants_rep, PantsDecomp};
use teich::pinch::{arc_residual, pinch_sweep, DEFAULT_FAREY, DEFAULT_LEVELS};
use teich::torus::{build_rep, curve_length, dual_arc_length, DualArc, FnTorus, Slope};
use teich::word::Word;
use teich::{FnPoint64, FnTorus64};

use output::{Cell, Format, Report, Table};

#[derive(Parser)]
#[command(
    name = "teich",
    version,
    about = "Curve and arc lengths, metric estimates and mapping-class experiments on Teichmüller spaces"
)]
struct Cli {
    /// Output format [default depends on the command]
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for randomized checks and the optimizer
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// JSON file of flag values; flags on the command line take precedence
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<String>,
    #[command(subcommand)]
    command: Cmd,
}

/// A torus point given as `ell,twist[,L]` or as two or three values.
#[derive(Args, Debug, Clone)]
struct TorusArg {
    /// Fenchel-Nielsen point `ell,twist[,L]`; L defaults to 0 (a cusp)
    #[arg(long, num_args = 1..=3, value_delimiter = ',', allow_negative_numbers = true, action = ArgAction::Set, value_name = "ELL,TWIST[,L]")]
    torus: Option<Vec<f64>>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Common perpendiculars in a pair of pants
    PantsArc {
        /// Between two cuffs, across the third: GAMMA BETA1 BETA2
        #[arg(long, num_args = 3, action = ArgAction::Set, value_names = ["GAMMA", "BETA1", "BETA2"])]
        two_cuffs: Option<Vec<f64>>,
        /// From one cuff back to itself: BETA GAMMA1 GAMMA2
        #[arg(long, num_args = 3, action = ArgAction::Set, value_names = ["BETA", "GAMMA1", "GAMMA2"])]
        one_cuff: Option<Vec<f64>>,
        /// Also measure the two-cuff perpendicular between cuff axes of the
        /// pants representation and fail if they disagree
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 1e-9, allow_negative_numbers = true)]
        tol: f64,
    },
    /// Width of the standard collar about a geodesic of length ELL
    Collar {
        #[arg(allow_negative_numbers = true)]
        ell: f64,
    },
    /// Far side of a quadrilateral with right angles at the base
    #[command(allow_negative_numbers = true)]
    Quad { a: f64, b: f64, ell: f64 },
    /// Length of a curve, arc or word on a torus point or a glued surface
    Length {
        #[command(flatten)]
        point: TorusArg,
        /// Pants decomposition: a JSON file or one of one-holed-torus, genus-two, pants
        #[arg(long, requires = "coords", conflicts_with = "torus")]
        surface: Option<String>,
        /// Fenchel-Nielsen coordinates for --surface: a JSON file or inline JSON
        #[arg(long)]
        coords: Option<String>,
        /// Simple closed curve p/q
        #[arg(long, allow_hyphen_values = true)]
        slope: Option<String>,
        /// Boundary arc dual to the curve p/q
        #[arg(long, allow_hyphen_values = true)]
        arc: Option<String>,
        /// Word in the generators (capitals) and their inverses
        #[arg(long)]
        word: Option<String>,
        /// Every class of a family, one row each
        #[arg(long)]
        family: Option<String>,
        /// Mapping class for iter: family terms
        #[arg(long)]
        map: Option<String>,
    },
    /// Trace and gluing residuals of a holonomy representation
    RepValidate {
        #[command(flatten)]
        point: TorusArg,
        #[arg(long, requires = "coords", conflicts_with = "torus")]
        surface: Option<String>,
        #[arg(long)]
        coords: Option<String>,
        #[arg(long, default_value_t = 1e-9, allow_negative_numbers = true)]
        tol: f64,
    },
    /// Length-ratio distance estimate between two torus points
    Dist {
        #[arg(long, num_args = 1..=3, value_delimiter = ',', allow_negative_numbers = true, action = ArgAction::Set, required = true)]
        from: Vec<f64>,
        #[arg(long, num_args = 1..=3, value_delimiter = ',', allow_negative_numbers = true, action = ArgAction::Set, required = true)]
        to: Vec<f64>,
        /// Family spec: farey:N, arcs:N, iter:p/q:K joined by '+'
        #[arg(long, default_value = "farey:8")]
        family: String,
        #[arg(long)]
        map: Option<String>,
    },
    /// Arc metric on shrinking boundaries against the cusped limit
    PinchSweep {
        #[arg(long, num_args = 1..=3, value_delimiter = ',', allow_negative_numbers = true, action = ArgAction::Set, required = true)]
        from: Vec<f64>,
        #[arg(long, num_args = 1..=3, value_delimiter = ',', allow_negative_numbers = true, action = ArgAction::Set, required = true)]
        to: Vec<f64>,
        /// Boundary lengths, comma separated
        #[arg(long, value_delimiter = ',', action = ArgAction::Set)]
        levels: Option<Vec<f64>>,
        #[arg(long, default_value_t = DEFAULT_FAREY)]
        farey: u32,
    },
    /// Error of the small-boundary expansion of the two-cuff perpendicular
    #[command(allow_negative_numbers = true)]
    ArcResidual {
        gamma: f64,
        #[arg(value_name = "L")]
        l: f64,
    },
    /// Length ratios along the orbit of a slope
    Dilatation {
        #[arg(long)]
        map: String,
        #[arg(long, default_value = "1/0", allow_hyphen_values = true)]
        base: String,
        #[arg(long, num_args = 1..=3, value_delimiter = ',', allow_negative_numbers = true, action = ArgAction::Set, default_value = "1,0,0")]
        point: Vec<f64>,
        #[arg(long, default_value_t = 10)]
        iterations: u32,
    },
    /// Minimal displacement of a power of a mapping class over cusped tori
    Translate {
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 1)]
        power: u32,
        /// Run every power from 1 to this one instead
        #[arg(long)]
        max_power: Option<u32>,
        #[arg(long, default_value_t = 0.2)]
        ell_min: f64,
        #[arg(long, default_value_t = 6.0)]
        ell_max: f64,
        #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
        twist_min: f64,
        #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
        twist_max: f64,
        #[arg(long, default_value_t = 25)]
        grid: usize,
        #[arg(long, default_value_t = 5)]
        starts: usize,
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
        #[arg(long, default_value_t = 8)]
        farey: u32,
        #[arg(long, default_value_t = 10)]
        iterates: u32,
    },
    /// Displacement of a power along one orbit, divided by the power
    Tau {
        #[arg(long)]
        map: String,
        #[arg(long, num_args = 1..=3, value_delimiter = ',', allow_negative_numbers = true, action = ArgAction::Set, default_value = "1,0,0")]
        point: Vec<f64>,
        #[arg(long, default_value_t = 12)]
        power: u32,
        #[arg(long, default_value_t = 8)]
        farey: u32,
        #[arg(long, default_value_t = 10)]
        iterates: u32,
        /// Report every power from 1 up to --power
        #[arg(long)]
        sequence: bool,
    },
    /// Displacement of a Dehn twist as its curve is pinched
    TwistPinch {
        #[arg(long, default_value = "1/0", allow_hyphen_values = true)]
        slope: String,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        power: i64,
        #[arg(long, value_delimiter = ',', action = ArgAction::Set, default_value = "1,0.3,0.1,0.01")]
        levels: Vec<f64>,
        #[arg(long, default_value_t = 6)]
        farey: u32,
    },
    /// Run the verification suite, or the checks named (A1 … A12)
    Check { ids: Vec<String> },
}

enum Failure {
    Input(String),
    Lib(teich::error::Error),
}

impl From<teich::error::Error> for Failure {
    fn from(e: teich::error::Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<&str> for Failure {
    fn from(e: &str) -> Self {
        Failure::Input(e.to_owned())
    }
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure::Input(e)
    }
}

struct Outcome {
    report: Report,
    format: Format,
    valid: bool,
}

fn ok(report: Report, format: Format) -> Result<Outcome, Failure> {
    Ok(Outcome {
        report,
        format,
        valid: true,
    })
}

fn torus_point(v: &[f64]) -> Result<FnTorus64, Failure> {
    Ok(match *v {
        [ell, twist] => FnTorus::new(ell, twist, 0.0)?,
        [ell, twist, l] => FnTorus::new(ell, twist, l)?,
        _ => {
            return Err(Failure::Input(format!(
                "expected ell,twist[,L]; got {} values",
                v.len()
            )))
        }
    })
}

fn parse<T: std::str::FromStr<Err = teich::error::Error>>(s: &str) -> Result<T, Failure> {
    Ok(s.parse()?)
}

fn json_arg<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_owned()
    } else {
        fs::read_to_string(arg).map_err(|e| format!("reading {arg}: {e}"))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{arg}: {e}")))
}

fn decomposition(arg: &str) -> Result<PantsDecomp, Failure> {
    match arg {
        "one-holed-torus" if !Path::new(arg).exists() => Ok(PantsDecomp::one_holed_torus()),
        "genus-two" if !Path::new(arg).exists() => Ok(PantsDecomp::genus_two()),
        "pants" if !Path::new(arg).exists() => Ok(PantsDecomp::single_pants()),
        _ => json_arg(arg),
    }
}

fn run(cmd: Cmd, seed: Option<u64>) -> Result<Outcome, Failure> {
    match cmd {
        Cmd::PantsArc {
            two_cuffs,
            one_cuff,
            verify,
            tol,
        } => {
            if two_cuffs.is_none() && one_cuff.is_none() {
                return Err(Failure::Input("give --two-cuffs and/or --one-cuff".into()));
            }
            if verify && two_cuffs.is_none() {
                return Err(Failure::Input("--verify needs --two-cuffs".into()));
            }
            let mut fields = Vec::new();
            let mut valid = true;
            if let Some(v) = &two_cuffs {
                let d = pants_arc_two_cuffs(v[0], v[1], v[2])?;
                fields.push(("two_cuffs", Cell::Num(d)));
                if verify {
                    let r = build_pants_rep(v[0], v[1], v[2])?;
                    let (x1, x2) = (r.generators()[0], r.generators()[1]);
                    let axes = geodesic_distance(&axis_endpoints(&x2)?, &axis_endpoints(&(x1 * x2))?)?;
                    valid = (axes - d).abs() <= tol;
                    fields.push(("axis_distance", Cell::Num(axes)));
                    fields.push(("difference", Cell::Num((axes - d).abs())));
                }
            }
            if let Some(v) = &one_cuff {
                fields.push(("one_cuff", Cell::Num(pants_arc_one_cuff(v[0], v[1], v[2])?)));
            }
            Ok(Outcome {
                report: Report::record(fields),
                format: Format::Text,
                valid,
            })
        }
        Cmd::Collar { ell } => ok(
            Report::record(vec![("collar", collar_width(ell)?.into())]),
            Format::Text,
        ),
        Cmd::Quad { a, b, ell } => ok(
            Report::record(vec![("side", quad_side(a, b, ell)?.into())]),
            Format::Text,
        ),
        Cmd::Length {
            point,
            surface,
            coords,
            slope,
            arc,
            word,
            family,
            map,
        } => {
            let given = [slope.is_some(), arc.is_some(), word.is_some(), family.is_some()];
            if given.iter().filter(|&&g| g).count() != 1 {
                return Err(Failure::Input(
                    "give exactly one of --slope, --arc, --word, --family".into(),
                ));
            }
            if let Some(s) = surface {
                let coords = coords.expect("clap requires --coords");
                let w = word.ok_or("a glued surface takes --word only")?;
                let rep = build_glued_rep(&decomposition(&s)?, &json_arg::<FnPoint64>(&coords)?)?;
                let len = rep.word_length(&parse::<Word>(&w)?)?;
                return ok(Report::record(vec![("length", len.into())]), Format::Text);
            }
            let x = torus_point(point.torus.as_deref().ok_or("give --torus or --surface")?)?;
            if let Some(spec) = family {
                let map = map.as_deref().map(parse::<MappingClass>).transpose()?;
                let fam = family::parse(&spec, map.as_ref())?;
                let mut t = Table::new(vec!["class", "length"]);
                for c in fam.classes() {
                    t.push(vec![c.to_string().into(), x.class_length(c)?.into()]);
                }
                return ok(Report::Rows(t), Format::Text);
            }
            let len = if let Some(s) = slope {
                curve_length(&x, parse(&s)?)?
            } else if let Some(s) = arc {
                dual_arc_length(&x, DualArc { slope: parse(&s)? })?
            } else {
                let w = word.expect("one option was given");
                build_rep(&x)?.holonomy().word_length(&parse::<Word>(&w)?)?
            };
            ok(Report::record(vec![("length", len.into())]), Format::Text)
        }
        Cmd::RepValidate {
            point,
            surface,
            coords,
            tol,
        } => {
            if let Some(s) = surface {
                let coords = coords.expect("clap requires --coords");
                let rep = build_glued_rep(&decomposition(&s)?, &json_arg::<FnPoint64>(&coords)?)?;
                let worst = rep.max_residual()?;
                return Ok(Outcome {
                    report: Report::record(vec![
                        ("generators", rep.generators().len().into()),
                        ("max_residual", worst.into()),
                        ("pass", (worst <= tol).into()),
                    ]),
                    format: Format::Text,
                    valid: worst <= tol,
                });
            }
            let x = torus_point(point.torus.as_deref().ok_or("give --torus or --surface")?)?;
            let rep = build_rep(&x)?;
            let r = rep.residuals();
            let (tx, ty, tz) = rep.trace_triple();
            let worst = r.max_abs();
            Ok(Outcome {
                report: Report::record(vec![
                    ("trace_a", r.trace_a.into()),
                    ("commutator", r.commutator.into()),
                    ("markov", r.markov.into()),
                    ("tr_a", tx.into()),
                    ("tr_b", ty.into()),
                    ("tr_ab", tz.into()),
                    ("pass", (worst <= tol).into()),
                ]),
                format: Format::Text,
                valid: worst <= tol,
            })
        }
        Cmd::Dist { from, to, family, map } => {
            let map = map.as_deref().map(parse::<MappingClass>).transpose()?;
            let fam = family::parse(&family, map.as_ref())?;
            let e = dhat(&torus_point(&from)?, &torus_point(&to)?, &fam)?;
            ok(
                Report::record(vec![
                    ("value", e.value.into()),
                    ("witness", e.witness.to_string().into()),
                    ("family", e.family_label.into()),
                    ("negative", e.negative.into()),
                ]),
                Format::Text,
            )
        }
        Cmd::PinchSweep {
            from,
            to,
            levels,
            farey,
        } => {
            let levels = levels.unwrap_or_else(|| DEFAULT_LEVELS.to_vec());
            let rows = pinch_sweep(&torus_point(&from)?, &torus_point(&to)?, &levels, farey)?;
            let mut t = Table::new(vec!["L", "d_arc", "d_th", "gap", "witness_arc", "witness_th"]);
            for r in &rows {
                t.push(vec![
                    r.l.into(),
                    r.d_arc.into(),
                    r.d_th.into(),
                    r.gap.into(),
                    r.witness_arc.clone().into(),
                    r.witness_th.clone().into(),
                ]);
            }
            let json = serde_json::to_value(&rows).map_err(|e| e.to_string())?;
            ok(Report::Structured { json, table: t }, Format::Csv)
        }
        Cmd::ArcResidual { gamma, l } => ok(
            Report::record(vec![("residual", arc_residual(gamma, l)?.into())]),
            Format::Text,
        ),
        Cmd::Dilatation {
            map,
            base,
            point,
            iterations,
        } => {
            let f = parse::<MappingClass>(&map)?;
            let lambda = f.dilatation::<f64>();
            let r = dilatation_by_iteration(&f, parse(&base)?, &torus_point(&point)?, iterations)?;
            let mut t = Table::new(vec!["k", "r_k", "error"]);
            for (k, rk) in r.iter().enumerate() {
                t.push(vec![k.into(), (*rk).into(), (rk - lambda).abs().into()]);
            }
            ok(Report::Rows(t), Format::Csv)
        }
        Cmd::Translate {
            map,
            power,
            max_power,
            ell_min,
            ell_max,
            twist_min,
            twist_max,
            grid,
            starts,
            max_iter,
            farey,
            iterates,
        } => {
            let f = parse::<MappingClass>(&map)?;
            let mut search = SearchConfig {
                ell: (ell_min, ell_max),
                twist: (twist_min, twist_max),
                farey,
                iterates,
                ..SearchConfig::default()
            };
            search.multistart.grid = grid;
            search.multistart.starts = starts;
            search.multistart.simplex.max_iter = max_iter;
            if let Some(s) = seed {
                search.multistart.seed = s;
            }
            let powers: Vec<u32> = match max_power {
                Some(m) => (1..=m).collect(),
                None => vec![power],
            };
            let mut t = Table::new(vec![
                "map",
                "power",
                "min_value",
                "argmin_ell",
                "argmin_twist",
                "log_dilatation",
                "boundary_hit",
                "n_evals",
            ]);
            let mut docs = Vec::new();
            for n in powers {
                let e = translation_estimate::<f64>(&f, n, &search)?;
                t.push(vec![
                    e.map.to_string().into(),
                    e.power.into(),
                    e.min_value.into(),
                    e.argmin.ell.into(),
                    e.argmin.twist.into(),
                    e.log_dilatation.into(),
                    e.boundary_hit.into(),
                    e.n_evals.into(),
                ]);
                docs.push(json!({
                    "map": e.map.to_string(),
                    "power": e.power,
                    "min_value": e.min_value,
                    "argmin": {"ell": e.argmin.ell, "twist": e.argmin.twist},
                    "log_dilatation": e.log_dilatation,
                    "boundary_hit": e.boundary_hit,
                    "n_evals": e.n_evals,
                }));
            }
            let json = if max_power.is_some() {
                docs.into()
            } else {
                docs.remove(0)
            };
            ok(Report::Structured { json, table: t }, Format::Json)
        }
        Cmd::Tau {
            map,
            point,
            power,
            farey,
            iterates,
            sequence,
        } => {
            let f = parse::<MappingClass>(&map)?;
            let x = torus_point(&point)?;
            let log_lambda = f.dilatation::<f64>().ln();
            let powers: Vec<u32> = if sequence { (1..=power).collect() } else { vec![power] };
            let mut t = Table::new(vec!["n", "tau", "log_dilatation", "error"]);
            for n in powers {
                let tau = tau_estimate(&f, &x, n, farey, iterates)?;
                t.push(vec![
                    n.into(),
                    tau.into(),
                    log_lambda.into(),
                    (tau - log_lambda).abs().into(),
                ]);
            }
            let report = if sequence { Report::Rows(t) } else { Report::Record(t) };
            ok(report, Format::Text)
        }
        Cmd::TwistPinch {
            slope,
            power,
            levels,
            farey,
        } => {
            let rows = twist_pinch(parse::<Slope>(&slope)?, power, &levels, farey)?;
            let mut t = Table::new(vec!["ell", "displacement"]);
            for (ell, d) in rows {
                t.push(vec![ell.into(), d.into()]);
            }
            ok(Report::Rows(t), Format::Csv)
        }
        Cmd::Check { ids } => {
            let seed = seed.unwrap_or(checks::DEFAULT_SEED);
            let ids: Vec<String> = if ids.is_empty() {
                checks::ids().map(String::from).collect()
            } else {
                ids
            };
            let mut t = Table::new(vec!["id", "status", "name", "detail"]);
            let mut valid = true;
            for id in &ids {
                let o = checks::run(id, seed).ok_or_else(|| format!("unknown check {id:?}"))?;
                valid &= o.pass;
                t.push(vec![
                    o.id.into(),
                    (if o.pass { "PASS" } else { "FAIL" }).into(),
                    o.name.into(),
                    o.detail.into(),
                ]);
            }
            Ok(Outcome {
                report: Report::Rows(t),
                format: Format::Text,
                valid,
            })
        }
    }
}

fn main() -> ExitCode {
    let mut command = Cli::command().args_override_self(true);
    let names: Vec<String> = command.get_subcommands().map(|s| s.get_name().to_owned()).collect();
    command = command.mut_subcommands(|s| s.args_override_self(true));

    let args = match config::expand(std::env::args().collect(), &names) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match command
        .try_get_matches_from(args)
        .and_then(|m| Cli::from_arg_matches(&m))
    {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };

    match run(cli.command, cli.seed) {
        Ok(o) => {
            let mut out = io::stdout().lock();
            if let Err(e) = o
                .report
                .write(cli.format.unwrap_or(o.format), &mut out)
                .and_then(|()| out.flush())
            {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if o.valid {
                ExitCode::SUCCESS
            } else {
                eprintln!("validation failed");
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
