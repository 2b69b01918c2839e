//! `torgrowth` command line front end.

use std::fs::File;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use torgrowth::boundary::{
    ergodic_average, parse_angle, radial_limit, stream_length, AverageSpec, CenteredTorsion, RadialMode,
};
use torgrowth::continuation::{rx_continued, Settings};
use torgrowth::lvalues::{characters, l_one_periodic};
use torgrowth::polyalg::{classify_roots, IntPoly};
use torgrowth::report::complex_json;
use torgrowth::resultants::{cyclic_resultants, exceptional_scan, hillar_decompose, hillar_equal};
use torgrowth::rxcore::RxParam;
use torgrowth::torsion::{analyze, e_series, torsion_table, GrowthFunction};
use torgrowth::Error;

#[derive(Parser, Debug)]
#[command(name = "torgrowth", version, about = "Torsion growth generating functions of integer polynomials")]
#[command(after_help = "Polynomials are comma-separated coefficients in ascending degree:\n  \
    \"1,-1,1\"  is t^2 - t + 1\n  \
    \"6,-13,6\" is 6t^2 - 13t + 6\n  \
    \"-2,1\"    is t - 2")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Truncation tolerance for the continuation series.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tail_tol: f64,
    /// Hard cap on terms per continuation series.
    #[arg(long, global = true, default_value_t = 100_000)]
    max_terms: usize,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV.
    #[arg(long, global = true)]
    csv: bool,
    /// Bits used for extended-precision angles and relation searches.
    #[arg(long, global = true, default_value_t = 128)]
    precision_bits: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full report: roots, Mahler measure, periodicity, Laurent data at 1, poles, torsion table.
    Analyze {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(long, default_value_t = 8.0)]
        radius: f64,
        #[arg(long, default_value_t = 64)]
        r_max: u64,
    },
    /// Evaluate a generating function at one point.
    Eval {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        /// Point as `re,im` (or just `re`).
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, value_enum, default_value_t = Quantity::EContinued)]
        quantity: Quantity,
        /// Terms for `e-series`.
        #[arg(long, default_value_t = 300)]
        terms: u64,
        /// Parameter `x` as `re,im` for `rx-continued`; the polynomial is ignored then.
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
    },
    /// Evaluate on a rectangular grid and write CSV rows `re,im,value`.
    Grid {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(long, allow_hyphen_values = true, default_value_t = -3.0)]
        re_min: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 3.0)]
        re_max: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = -3.0)]
        im_min: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 3.0)]
        im_max: f64,
        #[arg(long, default_value_t = 101)]
        nx: usize,
        #[arg(long, default_value_t = 101)]
        ny: usize,
        #[arg(long, value_enum, default_value_t = Quantity::EContinued)]
        quantity: Quantity,
        #[arg(long, value_enum, default_value_t = Part::Abs)]
        part: Part,
        #[arg(long, default_value_t = 300)]
        terms: u64,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        /// Output file (stdout if omitted).
        #[arg(long)]
        out: Option<String>,
    },
    /// Exact values `|Res(f, t^r - 1)|` for `r = 1..r_max`.
    Torsion {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(long, default_value_t = 64)]
        r_max: u64,
    },
    /// Rotation average `(1/N) sum log|1 - e^{2 pi i n theta}| e^{2 pi i m {n alpha}}`.
    Average {
        /// Decimal turn fraction, or `root:<coeffs>:<index|pair>`.
        #[arg(allow_hyphen_values = true)]
        theta: String,
        /// Twist exponent, integer or `u/v`.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        m: String,
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
        /// Independent twist direction.
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Cyclic resultants `Res(f, t^m - 1)`; with `--g`, also compares absolute values.
    Cyclic {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: Option<String>,
        #[arg(long, default_value_t = 12)]
        count: u64,
    },
    /// Indices `n` for which `1 - u^n` is again a unit.
    Units {
        #[arg(allow_hyphen_values = true)]
        minpoly: String,
        #[arg(long, default_value_t = 10)]
        bound: u64,
    },
    /// Dirichlet characters modulo `m` and their values `L(1, chi)`.
    Lvalue { m: u64 },
    /// Radial limit of `(1 - |z|) E(z)` towards a point on the unit circle.
    Radial {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        /// Direction as a turn fraction or `root:<coeffs>:<index|pair>`.
        #[arg(long)]
        p: String,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Quantity {
    ESeries,
    EContinued,
    RxContinued,
    TfContinued,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Part {
    Re,
    Im,
    Abs,
    LogAbs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Cesaro,
    Abel,
    Both,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Boundary(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NaturalBoundary { .. } => Failure::Boundary(e.to_string()),
            Error::Invalid(_) | Error::InvalidExponent(_) | Error::ZeroInput | Error::NotAUnit(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Numeric(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Numeric(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Numeric(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn parse_poly(s: &str) -> std::result::Result<IntPoly, Failure> {
    IntPoly::parse(s).map_err(|e| Failure::Usage(format!("bad polynomial {s:?}: {e}")))
}

fn parse_complex(s: &str) -> std::result::Result<Complex64, Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|_| Failure::Usage(format!("bad number {t:?}")));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(Failure::Usage(format!("expected re,im but got {s:?}"))),
    }
}

fn parse_ratio(s: &str) -> std::result::Result<(i64, u64), Failure> {
    let bad = || Failure::Usage(format!("bad exponent {s:?}"));
    match s.split_once('/') {
        Some((u, v)) => {
            let u: i64 = u.trim().parse().map_err(|_| bad())?;
            let v: u64 = v.trim().parse().map_err(|_| bad())?;
            if v == 0 {
                return Err(bad());
            }
            Ok((u, v))
        }
        None => Ok((s.trim().parse().map_err(|_| bad())?, 1)),
    }
}

fn settings(g: &Global) -> Settings {
    Settings {
        tail_tol: g.tail_tol,
        max_terms: g.max_terms,
    }
}

fn emit_json(v: &Value) -> Outcome {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v).map_err(|e| Failure::Numeric(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

/// Evaluates one grid or point quantity; `Ok(None)` marks a pole.
struct Evaluator {
    quantity: Quantity,
    growth: Option<GrowthFunction>,
    x: Option<Complex64>,
    coeffs: Vec<f64>,
    settings: Settings,
}

impl Evaluator {
    fn new(poly: &str, quantity: Quantity, terms: u64, x: Option<&str>, s: Settings) -> std::result::Result<Self, Failure> {
        let x = x.map(parse_complex).transpose()?;
        if quantity == Quantity::RxContinued && x.is_none() {
            return Err(Failure::Usage("rx-continued needs --x".into()));
        }
        let mut growth = None;
        let mut coeffs = Vec::new();
        match quantity {
            Quantity::ESeries => {
                let p = parse_poly(poly)?;
                let es = e_series(&p, terms, 64)?;
                coeffs = vec![0.0; terms as usize + 1];
                for (r, v) in es.terms {
                    coeffs[r as usize] = v;
                }
            }
            Quantity::EContinued | Quantity::TfContinued => {
                let p = parse_poly(poly)?;
                let g = GrowthFunction::new(&p, s)?;
                let d = g.profile.diophantine();
                if !d.is_empty() {
                    return Err(Error::NaturalBoundary { roots: d }.into());
                }
                growth = Some(g);
            }
            Quantity::RxContinued => {}
        }
        Ok(Evaluator {
            quantity,
            growth,
            x,
            coeffs,
            settings: s,
        })
    }

    fn eval(&self, z: Complex64) -> std::result::Result<Option<(Complex64, f64)>, Error> {
        let r = match self.quantity {
            Quantity::ESeries => {
                let mut acc = Complex64::new(0.0, 0.0);
                for c in self.coeffs.iter().rev() {
                    acc = acc * z + c;
                }
                return Ok(Some((acc, f64::NAN)));
            }
            Quantity::EContinued | Quantity::TfContinued => self.growth.as_ref().unwrap().eval(z),
            Quantity::RxContinued => rx_continued(RxParam::Numeric(self.x.unwrap()), z, &self.settings),
        };
        match r {
            Ok(v) => Ok(Some((v.value, v.tail_bound))),
            Err(Error::PoleHit { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }

    fn near_pole(&self, z: Complex64) -> bool {
        match &self.growth {
            Some(g) => g
                .pole_locations(z.norm() + 1e-3)
                .map(|ps| ps.iter().any(|p| (p.location - z).norm() < 1e-6))
                .unwrap_or(false),
            None => false,
        }
    }
}

fn project(v: Complex64, part: Part) -> f64 {
    match part {
        Part::Re => v.re,
        Part::Im => v.im,
        Part::Abs => v.norm(),
        Part::LogAbs => v.norm().ln(),
    }
}

fn run(cli: Cli) -> Outcome {
    let g = cli.global.clone();
    let s = settings(&g);
    match cli.cmd {
        Command::Analyze { poly, radius, r_max } => {
            let p = parse_poly(&poly)?;
            let report = analyze(&p, radius, r_max, &s)?;
            emit_json(&serde_json::to_value(&report).map_err(|e| Failure::Numeric(e.to_string()))?)
        }
        Command::Eval {
            poly,
            z,
            quantity,
            terms,
            x,
        } => {
            let z = parse_complex(&z)?;
            if quantity == Quantity::ESeries && z.norm() >= 1.0 {
                eprintln!("warning: |z| >= 1, the partial sum is not an approximation of a convergent series");
            }
            let ev = Evaluator::new(&poly, quantity, terms, x.as_deref(), s)?;
            match ev.eval(z)? {
                Some((v, tail)) => {
                    if g.csv {
                        println!("re,im,value_re,value_im,tail_bound");
                        println!("{},{},{},{},{}", z.re, z.im, v.re, v.im, tail);
                        Ok(())
                    } else {
                        emit_json(&json!({
                            "z": complex_json(z),
                            "value": complex_json(v),
                            "tail_bound": if tail.is_finite() { json!(tail) } else { Value::Null },
                        }))
                    }
                }
                None => Err(Failure::Numeric(format!("z = {z} is a pole"))),
            }
        }
        Command::Grid {
            poly,
            re_min,
            re_max,
            im_min,
            im_max,
            nx,
            ny,
            quantity,
            part,
            terms,
            x,
            out,
        } => {
            if nx < 2 || ny < 2 {
                return Err(Failure::Usage("nx and ny must be at least 2".into()));
            }
            let ev = Evaluator::new(&poly, quantity, terms, x.as_deref(), s)?;
            let points: Vec<Complex64> = (0..ny)
                .flat_map(|j| {
                    let im = im_max - (im_max - im_min) * j as f64 / (ny - 1) as f64;
                    (0..nx).map(move |i| Complex64::new(re_min + (re_max - re_min) * i as f64 / (nx - 1) as f64, im))
                })
                .collect();
            let cells: Vec<std::result::Result<Option<f64>, Error>> = points
                .par_iter()
                .map(|&z| {
                    if ev.near_pole(z) {
                        return Ok(None);
                    }
                    Ok(ev.eval(z)?.map(|(v, _)| project(v, part)))
                })
                .collect();
            let sink: Box<dyn Write> = match out {
                Some(path) => Box::new(File::create(path)?),
                None => Box::new(io::stdout().lock()),
            };
            let mut w = csv::Writer::from_writer(sink);
            w.write_record(["re", "im", "value"])?;
            for (z, c) in points.iter().zip(cells) {
                let cell = match c? {
                    Some(v) => v.to_string(),
                    None => "POLE".to_string(),
                };
                w.write_record([z.re.to_string(), z.im.to_string(), cell])?;
            }
            w.flush()?;
            Ok(())
        }
        Command::Torsion { poly, r_max } => {
            let p = parse_poly(&poly)?;
            let t = torsion_table(&p, r_max)?;
            if g.json {
                let rows: Vec<Value> = (1..=r_max)
                    .map(|r| {
                        let v = t.entries.get(&r).map(|v| v.to_string()).unwrap_or_else(|| "0".into());
                        json!({ "r": r, "value": v })
                    })
                    .collect();
                emit_json(&Value::Array(rows))
            } else {
                let mut w = csv::Writer::from_writer(io::stdout().lock());
                w.write_record(["r", "value"])?;
                for r in 1..=r_max {
                    let v = t.entries.get(&r).map(|v| v.to_string()).unwrap_or_else(|| "0".into());
                    w.write_record([r.to_string(), v])?;
                }
                w.flush()?;
                Ok(())
            }
        }
        Command::Average { theta, m, n, alpha } => {
            let th = parse_angle_bits(&theta, g.precision_bits)?;
            let (u, v) = parse_ratio(&m)?;
            let mut spec = AverageSpec::new(th, u, v, n)?;
            if let Some(a) = alpha {
                spec = spec.with_alpha(parse_angle_bits(&a, g.precision_bits)?);
            }
            let avg = ergodic_average(&spec);
            emit_json(&json!({
                "theta": th.value(),
                "m": format!("{}/{}", spec.m_num, spec.m_den),
                "n": n,
                "average": complex_json(avg),
            }))
        }
        Command::Cyclic { f, g: other, count } => {
            let fp = parse_poly(&f)?;
            let rs = cyclic_resultants(&fp, count)?;
            let comparison = match other {
                Some(gs) => {
                    let gp = parse_poly(&gs)?;
                    let equal = hillar_equal(&fp, &gp, count);
                    let dec = hillar_decompose(&fp, &gp);
                    Some(json!({
                        "g": gp.to_string(),
                        "equal": match &equal { Ok(b) => json!(b), Err(e) => json!(e.to_string()) },
                        "decomposition": match &dec {
                            Ok(d) => serde_json::to_value(d).unwrap_or(Value::Null),
                            Err(e) => json!(e.to_string()),
                        },
                    }))
                }
                None => None,
            };
            if g.json {
                let rows: Vec<Value> = rs
                    .iter()
                    .enumerate()
                    .map(|(i, r)| json!({ "m": i + 1, "r_m": r.to_string(), "is_unit": is_unit(r) }))
                    .collect();
                emit_json(&json!({ "f": fp.to_string(), "resultants": rows, "comparison": comparison }))
            } else {
                let mut w = csv::Writer::from_writer(io::stdout().lock());
                w.write_record(["m", "r_m", "is_unit"])?;
                for (i, r) in rs.iter().enumerate() {
                    w.write_record([(i + 1).to_string(), r.to_string(), is_unit(r).to_string()])?;
                }
                w.flush()?;
                if let Some(c) = comparison {
                    eprintln!("{c}");
                }
                Ok(())
            }
        }
        Command::Units { minpoly, bound } => {
            let p = parse_poly(&minpoly)?;
            let scan = exceptional_scan(&p, bound)?;
            let mut v = serde_json::to_value(&scan).map_err(|e| Failure::Numeric(e.to_string()))?;
            v["count_is_lower_bound"] = json!(true);
            emit_json(&v)
        }
        Command::Lvalue { m } => {
            let t = characters(m)?;
            let mut rows = Vec::new();
            for c in 0..t.len() {
                let f = t.periodic_fn(c);
                let l = if c == t.principal_index {
                    Value::Null
                } else {
                    complex_json(l_one_periodic(&f)?)
                };
                rows.push(json!({
                    "index": c,
                    "exponents": t.exponents[c],
                    "real": t.is_real(c),
                    "principal": c == t.principal_index,
                    "l_one": l,
                }));
            }
            emit_json(&json!({ "modulus": m, "generators": t.factors, "characters": rows }))
        }
        Command::Radial { poly, p, mode } => {
            let f = parse_poly(&poly)?;
            let angle = parse_angle_bits(&p, g.precision_bits)?;
            let profile = classify_roots(&f)?;
            let stream_src = CenteredTorsion::new(&profile);
            let modes: Vec<RadialMode> = match mode {
                Mode::Cesaro => vec![RadialMode::Cesaro],
                Mode::Abel => vec![RadialMode::Abel],
                Mode::Both => vec![RadialMode::Cesaro, RadialMode::Abel],
            };
            let len = modes.iter().map(|m| stream_length(*m)).max().unwrap();
            let stream = stream_src.stream(len);
            let mut out = Vec::new();
            for m in modes {
                let est = radial_limit(&stream, angle, m)?;
                out.push(serde_json::to_value(&est).map_err(|e| Failure::Numeric(e.to_string()))?);
            }
            emit_json(&json!({
                "p_turns": angle.value(),
                "log_mahler": profile.log_mahler,
                "estimates": out,
            }))
        }
    }
}

fn parse_angle_bits(spec: &str, bits: usize) -> std::result::Result<torgrowth::boundary::Angle, Failure> {
    if let Some(rest) = spec.trim().strip_prefix("root:") {
        let (poly, sel) = rest
            .rsplit_once(':')
            .ok_or_else(|| Failure::Usage(format!("expected root:<coeffs>:<selector>, got {spec}")))?;
        let f = parse_poly(poly)?;
        let t = torgrowth::boundary::root_angle(&f, sel, bits.max(64)).map_err(|e| Failure::Usage(e.to_string()))?;
        return Ok(torgrowth::boundary::Angle::from_hp(&t));
    }
    parse_angle(spec).map_err(|e| Failure::Usage(e.to_string()))
}

fn is_unit(r: &impl ToString) -> bool {
    matches!(r.to_string().as_str(), "1" | "-1")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.global.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.threads)
            .build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Boundary(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(4)
        }
    }
}
