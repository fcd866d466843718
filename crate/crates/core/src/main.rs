use std::collections::HashMap;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use eginoe::asymptotics::{eval_series, strong_coeffs, three_term_prediction, weak_coeffs};
use eginoe::ensemble::{run_mc, SampleConfig};
use eginoe::exactprob::{
    distribution, log_p_nm, log_total_probability, ratio_l1_laguerre, ratio_l1_s_integral,
    rho_traces, EnsembleParams, Precision, Regime, DEFAULT_ORDER,
};
use eginoe::potential::{find_minimum, gap_limit, hessian_limit, y_star_limit, PotentialParams};
use eginoe::prekernel::{ratio_l1_pfaffian2d, MAX_PFAFFIAN_N};
use eginoe::{Error, Result};

const ZONAL_MAX_N: usize = 64;
const CROSSCHECK_TOL: f64 = 1e-5;

#[derive(Parser, Debug)]
#[command(
    name = "eginoe",
    version,
    about = "Real-eigenvalue counts of the elliptic real Ginibre ensemble"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact probabilities p_{n,m}.
    Exact(Common),
    /// Asymptotic coefficients and predictions.
    Asym(Common),
    /// Exact log-probability minus the three-term prediction over a grid.
    ResidualSweep(Common),
    /// Monte Carlo estimate of the count distribution.
    Mc(Common),
    /// Minimum of the effective potential on the imaginary axis.
    Potential(Common),
    /// Agreement of the four single-pair routes and the normalization defect.
    Crosscheck(Common),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RegimeArg {
    Strong,
    Weak,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PrecisionArg {
    Auto,
    Double,
    Extended,
}

/// Every flag may also come from `--config`; flags win.
#[derive(Args, Debug, Default)]
struct Common {
    /// Matrix sizes: `4`, `10,30,100` or `start:stop:step`.
    #[arg(long)]
    n: Option<String>,
    /// Fixed asymmetry grid (strong regime).
    #[arg(long)]
    tau: Option<String>,
    /// Weak-regime grid, tau = 1 - alpha^2/n.
    #[arg(long)]
    alpha: Option<String>,
    /// Number of complex-conjugate pairs, m = n - 2l.
    #[arg(long)]
    l: Option<String>,
    #[arg(long, value_enum)]
    regime: Option<RegimeArg>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Key-value file (`key = value` per line, `#` comments).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    precision: Option<PrecisionArg>,
    /// Check the l = 1 Laguerre route against the s-integral route.
    #[arg(long)]
    verify: bool,
    /// Terms of the single-pair series (asym).
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

/// Resolved run description; a run's output depends only on this.
#[derive(Debug)]
struct RunPlan {
    ns: Vec<usize>,
    regime: RegimeArg,
    asym: Vec<f64>,
    ls: Option<Vec<usize>>,
    format: Format,
    out: Option<PathBuf>,
    precision: Precision,
    verify: bool,
    order: usize,
    trials: u64,
    seed: u64,
}

impl RunPlan {
    fn params(&self, n: usize, x: f64) -> Result<EnsembleParams> {
        match self.regime {
            RegimeArg::Strong => EnsembleParams::strong(n, x),
            RegimeArg::Weak => EnsembleParams::weak(n, x),
        }
    }

    fn grid(&self) -> Vec<(usize, f64)> {
        self.ns
            .iter()
            .flat_map(|&n| self.asym.iter().map(move |&x| (n, x)))
            .collect()
    }

    fn regime_name(&self) -> &'static str {
        match self.regime {
            RegimeArg::Strong => "strong",
            RegimeArg::Weak => "weak",
        }
    }

    fn provenance(&self, command: &str) -> Vec<(String, String)> {
        vec![
            ("command".into(), command.into()),
            ("version".into(), env!("CARGO_PKG_VERSION").into()),
            ("regime".into(), self.regime_name().into()),
            (
                "precision".into(),
                format!("{:?}", self.precision).to_lowercase(),
            ),
            ("quadrature_order".into(), DEFAULT_ORDER.to_string()),
        ]
    }
}

fn parse_config(path: &PathBuf) -> Result<HashMap<String, String>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut out = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::Usage(format!(
                "{}:{}: expected key = value",
                path.display(),
                i + 1
            ))
        })?;
        out.insert(
            k.trim().replace('_', "-"),
            v.trim().trim_matches('"').to_string(),
        );
    }
    Ok(out)
}

fn parse_value<T: std::str::FromStr>(key: &str, s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Usage(format!("invalid value for {key}: {s:?}")))
}

/// `a,b,c` or inclusive `start:stop:step`.
fn parse_grid(key: &str, s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Usage(format!("{key} grid is empty")));
    }
    if s.contains(':') {
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| parse_value(key, p))
            .collect::<Result<_>>()?;
        let [a, b, h] = parts[..] else {
            return Err(Error::Usage(format!(
                "{key} range must be start:stop:step, got {s:?}"
            )));
        };
        if !(h > 0.0) || b < a {
            return Err(Error::Usage(format!("{key} range {s:?} is empty")));
        }
        let count = ((b - a) / h + 1e-9).floor() as usize;
        return Ok((0..=count).map(|i| a + i as f64 * h).collect());
    }
    s.split(',').map(|p| parse_value(key, p)).collect()
}

fn parse_int_grid(key: &str, s: &str) -> Result<Vec<usize>> {
    parse_grid(key, s)?
        .into_iter()
        .map(|x| {
            if x >= 0.0 && x.fract() == 0.0 {
                Ok(x as usize)
            } else {
                Err(Error::Usage(format!(
                    "{key} must hold nonnegative integers, got {x}"
                )))
            }
        })
        .collect()
}

fn resolve(c: Common) -> Result<RunPlan> {
    let file = match &c.config {
        Some(p) => parse_config(p)?,
        None => HashMap::new(),
    };
    if let Some(k) = file.keys().find(|k| {
        ![
            "n",
            "tau",
            "alpha",
            "l",
            "regime",
            "format",
            "out",
            "precision",
            "verify",
            "order",
            "trials",
            "seed",
        ]
        .contains(&k.as_str())
    }) {
        return Err(Error::Usage(format!("unknown config key {k:?}")));
    }
    let pick = |flag: Option<String>, key: &str| flag.or_else(|| file.get(key).cloned());

    let ns = match pick(c.n, "n") {
        Some(s) => parse_int_grid("n", &s)?,
        None => return Err(Error::Usage("--n is required".into())),
    };
    let (tau, alpha) = if c.tau.is_some() || c.alpha.is_some() {
        (c.tau, c.alpha)
    } else {
        (file.get("tau").cloned(), file.get("alpha").cloned())
    };
    let regime = match c.regime {
        Some(r) => Some(r),
        None => file
            .get("regime")
            .map(|s| {
                RegimeArg::from_str(&s, true)
                    .map_err(|_| Error::Usage(format!("unknown regime {s:?}")))
            })
            .transpose()?,
    };
    let (regime, asym) = match (regime, tau, alpha) {
        (_, Some(_), Some(_)) => {
            return Err(Error::Usage(
                "--tau and --alpha are mutually exclusive".into(),
            ));
        }
        (Some(RegimeArg::Weak), Some(_), None) => {
            return Err(Error::Usage(
                "the weak regime takes --alpha, not --tau".into(),
            ));
        }
        (Some(RegimeArg::Strong), None, Some(_)) => {
            return Err(Error::Usage(
                "the strong regime takes --tau, not --alpha".into(),
            ));
        }
        (_, Some(t), None) => (RegimeArg::Strong, parse_grid("tau", &t)?),
        (_, None, Some(a)) => (RegimeArg::Weak, parse_grid("alpha", &a)?),
        (_, None, None) => return Err(Error::Usage("one of --tau or --alpha is required".into())),
    };
    let ls = pick(c.l, "l")
        .map(|s| parse_int_grid("l", &s))
        .transpose()?;
    let format = match c.format {
        Some(f) => f,
        None => match file.get("format") {
            Some(s) => Format::from_str(s, true)
                .map_err(|_| Error::Usage(format!("unknown format {s:?}")))?,
            None => Format::Csv,
        },
    };
    let precision = match c.precision {
        Some(p) => p,
        None => match file.get("precision") {
            Some(s) => PrecisionArg::from_str(s, true)
                .map_err(|_| Error::Usage(format!("unknown precision {s:?}")))?,
            None => PrecisionArg::Auto,
        },
    };
    let precision = match precision {
        PrecisionArg::Auto => Precision::Auto,
        PrecisionArg::Double => Precision::Double,
        PrecisionArg::Extended => Precision::Extended,
    };
    let verify = c.verify
        || file
            .get("verify")
            .map(|s| parse_value::<bool>("verify", s))
            .transpose()?
            .unwrap_or(false);
    let order = pick(c.order.map(|v| v.to_string()), "order")
        .map(|s| parse_value("order", &s))
        .transpose()?
        .unwrap_or(3);
    let trials = pick(c.trials.map(|v| v.to_string()), "trials")
        .map(|s| parse_value("trials", &s))
        .transpose()?
        .unwrap_or(100_000);
    let seed = pick(c.seed.map(|v| v.to_string()), "seed")
        .map(|s| parse_value("seed", &s))
        .transpose()?
        .unwrap_or(0);
    let out = c.out.or_else(|| file.get("out").map(PathBuf::from));
    Ok(RunPlan {
        ns,
        regime,
        asym,
        ls,
        format,
        out,
        precision,
        verify,
        order,
        trials,
        seed,
    })
}

#[derive(Clone, Debug)]
enum Cell {
    Str(String),
    Int(i64),
    Float(f64),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Str(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Str(s) => json!(s),
            Cell::Int(i) => json!(i),
            Cell::Float(x) => json!(x),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Str(s.into())
    }
}
impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Str(s)
    }
}
impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}
impl From<u64> for Cell {
    fn from(i: u64) -> Self {
        Cell::Int(i as i64)
    }
}
impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}
impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Empty, Into::into)
    }
}

struct Table {
    provenance: Vec<(String, String)>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(provenance: Vec<(String, String)>, columns: &[&'static str]) -> Self {
        Table {
            provenance,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Csv => {
                let mut buf = Vec::new();
                for (k, v) in &self.provenance {
                    writeln!(buf, "# {k}: {v}").expect("write to Vec");
                }
                let mut w = csv::WriterBuilder::new()
                    .terminator(csv::Terminator::Any(b'\n'))
                    .from_writer(buf);
                let io = |e: csv::Error| Error::Usage(format!("csv: {e}"));
                w.write_record(&self.columns).map_err(io)?;
                for r in &self.rows {
                    w.write_record(r.iter().map(Cell::csv)).map_err(io)?;
                }
                w.into_inner()
                    .map_err(|e| Error::Usage(format!("csv: {e}")))
            }
            Format::Json => {
                let prov: Map<String, Value> = self
                    .provenance
                    .iter()
                    .map(|(k, v)| (k.clone(), json!(v)))
                    .collect();
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        Value::Object(
                            self.columns
                                .iter()
                                .zip(r)
                                .map(|(c, v)| (c.to_string(), v.json()))
                                .collect(),
                        )
                    })
                    .collect();
                let mut s = serde_json::to_vec_pretty(&json!({ "provenance": prov, "rows": rows }))
                    .map_err(|e| Error::Usage(format!("json: {e}")))?;
                s.push(b'\n');
                Ok(s)
            }
        }
    }
}

fn emit(bytes: &[u8], out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, bytes)
            .map_err(|e| Error::Usage(format!("cannot write {}: {e}", p.display()))),
        None => io::stdout()
            .write_all(bytes)
            .map_err(|e| Error::Usage(format!("stdout: {e}"))),
    }
}

fn ls_for(job: &RunPlan, n: usize) -> Vec<usize> {
    match &job.ls {
        Some(ls) => ls.clone(),
        None => (0..=n / 2).collect(),
    }
}

fn cmd_exact(job: &RunPlan) -> Result<Table> {
    let mut prov = job.provenance("exact");
    prov.push(("verify".into(), job.verify.to_string()));
    let mut t = Table::new(
        prov,
        &["regime", "n", "tau_or_alpha", "tau", "m", "l", "log_p", "p"],
    );
    for (n, x) in job.grid() {
        let params = job.params(n, x)?;
        let rows: Vec<(usize, f64)> = match &job.ls {
            None if !job.verify => distribution(&params, job.precision)?
                .into_iter()
                .map(|(m, lp)| ((n - m) / 2, lp.ln()))
                .collect(),
            _ => ls_for(job, n)
                .into_iter()
                .map(|l| Ok((l, log_p_nm(&params, l, job.verify, job.precision)?.ln())))
                .collect::<Result<_>>()?,
        };
        for (l, lp) in rows {
            t.rows.push(vec![
                job.regime_name().into(),
                n.into(),
                x.into(),
                params.tau().into(),
                (n - 2 * l).into(),
                l.into(),
                lp.into(),
                lp.exp().into(),
            ]);
        }
    }
    Ok(t)
}

fn cmd_asym(job: &RunPlan) -> Result<Table> {
    let mut prov = job.provenance("asym");
    prov.push(("series_order".into(), job.order.to_string()));
    let mut t = Table::new(
        prov,
        &[
            "regime",
            "n",
            "tau_or_alpha",
            "l",
            "c1",
            "c2",
            "c3",
            "prediction",
            "series_order",
            "series_log",
        ],
    );
    for (n, x) in job.grid() {
        let params = job.params(n, x)?;
        let ls = job.ls.clone().unwrap_or_else(|| vec![1]);
        for l in ls {
            let c = match params.regime {
                Regime::Strong { tau } => {
                    let c = strong_coeffs(tau, l)?;
                    [c.a1, c.a2, c.a3]
                }
                Regime::Weak { alpha } => {
                    let c = weak_coeffs(alpha, l)?;
                    [c.b1, c.b2, c.b3]
                }
            };
            let pred = three_term_prediction(&params, l)?;
            let series = if l == 1 {
                let s = eval_series(&params, 1, job.order)?;
                Some(
                    s.total_log
                        .ln()
                        .ok_or_else(|| Error::Quality("series sum is not positive".into()))?,
                )
            } else {
                None
            };
            t.rows.push(vec![
                job.regime_name().into(),
                n.into(),
                x.into(),
                l.into(),
                c[0].into(),
                c[1].into(),
                c[2].into(),
                pred.into(),
                (if l == 1 { Some(job.order) } else { None }).into(),
                series.into(),
            ]);
        }
    }
    Ok(t)
}

fn error_marker(e: &Error) -> String {
    let kind = match e {
        Error::Domain(_) => "domain",
        Error::Degenerate(_) => "degenerate",
        Error::Resource(_) => "resource",
        Error::Usage(_) => "usage",
        _ => "numeric",
    };
    format!("{kind}: {e}")
}

fn residual_row(job: &RunPlan, n: usize, x: f64, l: usize) -> Result<(f64, f64)> {
    let params = job.params(n, x)?;
    if l >= 2 && n > ZONAL_MAX_N {
        return Err(Error::Resource(format!(
            "zonal route is capped at n <= {ZONAL_MAX_N}"
        )));
    }
    let lp = log_p_nm(&params, l, job.verify, job.precision)?.ln();
    let pred = three_term_prediction(&params, l)?;
    Ok((lp, pred))
}

fn cmd_residual_sweep(job: &RunPlan) -> Result<Table> {
    let mut prov = job.provenance("residual-sweep");
    prov.push(("zonal_max_n".into(), ZONAL_MAX_N.to_string()));
    let mut t = Table::new(
        prov,
        &[
            "regime",
            "n",
            "tau_or_alpha",
            "l",
            "log_p",
            "prediction",
            "residual",
            "error",
        ],
    );
    let ls = job.ls.clone().unwrap_or_else(|| vec![1]);
    let points: Vec<(usize, f64, usize)> = job
        .grid()
        .into_iter()
        .flat_map(|(n, x)| ls.iter().map(move |&l| (n, x, l)))
        .collect();
    let results: Vec<_> = points
        .par_iter()
        .map(|&(n, x, l)| residual_row(job, n, x, l))
        .collect();
    for (&(n, x, l), r) in points.iter().zip(results) {
        let mut row: Vec<Cell> = vec![job.regime_name().into(), n.into(), x.into(), l.into()];
        match r {
            Ok((lp, pred)) => row.extend([lp.into(), pred.into(), (lp - pred).into(), Cell::Empty]),
            Err(e) => row.extend([
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                error_marker(&e).into(),
            ]),
        }
        t.rows.push(row);
    }
    Ok(t)
}

fn cmd_mc(job: &RunPlan) -> Result<Table> {
    let mut prov = job.provenance("mc");
    prov.retain(|(k, _)| k != "precision" && k != "quadrature_order");
    prov.push(("seed".into(), job.seed.to_string()));
    prov.push(("trials".into(), job.trials.to_string()));
    prov.push(("rng".into(), "chacha8, stream = trial index".into()));
    let mut t = Table::new(
        prov,
        &[
            "regime",
            "n",
            "tau_or_alpha",
            "m",
            "count",
            "freq",
            "std_err",
            "ci_lo",
            "ci_hi",
            "mean",
            "variance",
            "mean_std_err",
        ],
    );
    for (n, x) in job.grid() {
        let cfg = SampleConfig {
            params: job.params(n, x)?,
            trials: job.trials,
            seed: job.seed,
        };
        let s = run_mc(&cfg)?;
        for f in &s.frequencies {
            t.rows.push(vec![
                job.regime_name().into(),
                n.into(),
                x.into(),
                f.m.into(),
                s.histogram.counts[&f.m].into(),
                f.freq.into(),
                f.std_err.into(),
                f.ci_lo.into(),
                f.ci_hi.into(),
                s.mean.into(),
                s.variance.into(),
                s.mean_std_err.into(),
            ]);
        }
    }
    Ok(t)
}

fn cmd_potential(job: &RunPlan) -> Result<Table> {
    if job.regime != RegimeArg::Strong {
        return Err(Error::Usage("potential takes --tau".into()));
    }
    let mut prov = job.provenance("potential");
    prov.retain(|(k, _)| k != "precision" && k != "quadrature_order");
    prov.push(("normalization".into(), "r = 0, n/m = 1".into()));
    let mut t = Table::new(
        prov,
        &[
            "tau",
            "n",
            "y_star_n",
            "y_star_limit",
            "q_gap",
            "gap_limit",
            "h_xx",
            "h_xy",
            "h_yy",
            "h_xx_limit",
            "h_yy_limit",
        ],
    );
    for (n, tau) in job.grid() {
        let m = find_minimum(&PotentialParams::new(n, tau)?)?;
        let hl = hessian_limit(tau);
        t.rows.push(vec![
            tau.into(),
            n.into(),
            m.y_star_n.into(),
            y_star_limit(tau).into(),
            m.q_gap.into(),
            gap_limit(tau).into(),
            m.hessian[0][0].into(),
            m.hessian[0][1].into(),
            m.hessian[1][1].into(),
            hl[0][0].into(),
            hl[1][1].into(),
        ]);
    }
    Ok(t)
}

const ROUTES: [&str; 4] = ["laguerre", "s_integral", "trace", "pfaffian"];

struct CrossRow {
    n: usize,
    x: f64,
    values: Vec<Result<f64>>,
    defect: Result<f64>,
}

fn crosscheck_point(job: &RunPlan, n: usize, x: f64) -> Result<CrossRow> {
    let params = job.params(n, x)?;
    if n > MAX_PFAFFIAN_N {
        return Err(Error::Domain(format!(
            "crosscheck needs n <= {MAX_PFAFFIAN_N}, got {n}"
        )));
    }
    let values = vec![
        ratio_l1_laguerre(&params).map(|r| r.to_f64()),
        ratio_l1_s_integral(&params).map(|r| r.to_f64()),
        rho_traces(&params, 1, job.precision).map(|t| t.traces[0].to_f64()),
        ratio_l1_pfaffian2d(&params).map(|r| r.to_f64()),
    ];
    let defect = log_total_probability(&params).map(f64::exp_m1);
    Ok(CrossRow {
        n,
        x,
        values,
        defect,
    })
}

/// Returns the report and whether every entry is within tolerance.
fn cmd_crosscheck(job: &RunPlan) -> Result<(Value, bool)> {
    let grid = job.grid();
    let rows: Vec<CrossRow> = grid
        .par_iter()
        .map(|&(n, x)| crosscheck_point(job, n, x))
        .collect::<Result<_>>()?;
    let mut ok = true;
    let mut out = Vec::new();
    for r in rows {
        let mut obj = Map::new();
        obj.insert("regime".into(), json!(job.regime_name()));
        obj.insert("n".into(), json!(r.n));
        obj.insert("tau_or_alpha".into(), json!(r.x));
        for (name, v) in ROUTES.iter().zip(&r.values) {
            match v {
                Ok(v) => obj.insert(format!("ratio_{name}"), json!(v)),
                Err(e) => {
                    ok = false;
                    obj.insert(format!("error_{name}"), json!(error_marker(e)))
                }
            };
        }
        let mut worst = 0.0f64;
        for i in 0..ROUTES.len() {
            for j in i + 1..ROUTES.len() {
                if let (Ok(a), Ok(b)) = (&r.values[i], &r.values[j]) {
                    let d = (a / b - 1.0).abs();
                    worst = worst.max(d);
                    obj.insert(format!("{}_vs_{}", ROUTES[i], ROUTES[j]), json!(d));
                }
            }
        }
        match &r.defect {
            Ok(d) => {
                worst = worst.max(d.abs());
                obj.insert("normalization_defect".into(), json!(d));
            }
            Err(e) => {
                ok = false;
                obj.insert("error_normalization".into(), json!(error_marker(e)));
            }
        }
        obj.insert("max_disagreement".into(), json!(worst));
        ok &= worst <= CROSSCHECK_TOL;
        out.push(Value::Object(obj));
    }
    let mut prov = Map::new();
    for (k, v) in job.provenance("crosscheck") {
        prov.insert(k, json!(v));
    }
    prov.insert("tolerance".into(), json!(CROSSCHECK_TOL));
    Ok((json!({ "provenance": prov, "rows": out, "pass": ok }), ok))
}

fn run(cli: Cli) -> Result<ExitCode> {
    let (name, common) = match cli.command {
        Command::Exact(c) => ("exact", c),
        Command::Asym(c) => ("asym", c),
        Command::ResidualSweep(c) => ("residual-sweep", c),
        Command::Mc(c) => ("mc", c),
        Command::Potential(c) => ("potential", c),
        Command::Crosscheck(c) => ("crosscheck", c),
    };
    let job = resolve(common)?;
    let table = match name {
        "exact" => cmd_exact(&job)?,
        "asym" => cmd_asym(&job)?,
        "residual-sweep" => cmd_residual_sweep(&job)?,
        "mc" => cmd_mc(&job)?,
        "potential" => cmd_potential(&job)?,
        _ => {
            let (report, ok) = cmd_crosscheck(&job)?;
            let mut s = serde_json::to_vec_pretty(&report)
                .map_err(|e| Error::Usage(format!("json: {e}")))?;
            s.push(b'\n');
            emit(&s, &job.out)?;
            return Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            });
        }
    };
    emit(&table.render(job.format)?, &job.out)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("eginoe: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
