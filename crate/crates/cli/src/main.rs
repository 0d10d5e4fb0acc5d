use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use exzero_core::arith::{parse_rational, Q};
use exzero_core::characters::{gauss_sum, gauss_sum_numeric, interpolation_target, Quasicharacter};
use exzero_core::cvalue::CValue;
use exzero_core::detcheck::{det_fixedpointfree_expansion, random_zero_row_sum};
use exzero_core::local_dist::{mellin_mu_alpha, shells_for_tolerance};
use exzero_core::measure::{Approx, BallMeasure};
use exzero_core::mtt::{self, bundled_curve, CurveData, EllipticCurve};
use exzero_core::padic::Padic;
use exzero_core::steinberg::{coboundary_check, Ell, LogEll, OrdEll};
use exzero_core::suite::{self, cocycle_holds, SuiteConfig, DEFAULT_SEED};
use exzero_core::tree::{ball_edges, ball_vertex_count, ball_vertices, Vertex};
use exzero_core::tree_rep::*;

#[derive(Parser)]
#[command(name = "exzero", version, about = "Local distributions, tree operators and exceptional zeros")]
struct Cli {
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Gauss sums of primitive characters, exactly and numerically.
    Gauss {
        #[arg(long)]
        p: u64,
        #[arg(long = "conductor-exp")]
        conductor_exp: u32,
        /// Index `j` of the character `g -> zeta^j` on a fixed generator, or `all`.
        #[arg(long = "char-spec", default_value = "all")]
        char_spec: String,
    },
    /// Truncated Mellin sum of the local distribution against a character.
    LocalIntegral {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        alpha: String,
        /// `F:J` for conductor exponent `F` and index `J`.
        #[arg(long = "char", default_value = "0:0")]
        chr: String,
        /// Value of the character at `p`.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        t: String,
        #[arg(long = "n-max")]
        n_max: Option<i64>,
    },
    /// Counts and local structure of a ball in the tree.
    Tree {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        radius: u64,
        #[arg(long)]
        check: bool,
    },
    /// Identities among the tree operators on a ball.
    TreeRep {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 2)]
        radius: u64,
        #[arg(long)]
        suite: bool,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Coboundary and cocycle checks for the ord and log extension classes.
    Steinberg {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        suite: bool,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Random trials of the fixed-point-free determinant expansion.
    Detcheck {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 4)]
        kmax: usize,
        #[arg(long, default_value_t = 6)]
        mmax: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Gamma transform or moments of a measure file.
    Lp {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        s: Option<String>,
        #[arg(long)]
        level: Option<u32>,
        #[arg(long)]
        moments: Option<u32>,
        /// Absolute precision used for the stored values.
        #[arg(long, default_value_t = 20)]
        prec: i64,
    },
    /// L-invariant from the Tate period.
    Linv {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 10)]
        prec: i64,
    },
    /// Total mass of the measure against the Euler factor.
    Interp {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 3)]
        level: u32,
        #[arg(long, default_value_t = 3)]
        prec: i64,
    },
    /// Exceptional-zero report at a split multiplicative prime.
    Ezero {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 4)]
        level: u32,
        #[arg(long, default_value_t = 3)]
        prec: i64,
    },
    /// Every acceptance criterion.
    Suite {
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Args)]
struct CurveArg {
    /// A curve file `label N a1 a2 a3 a4 a6`, or the label of a bundled curve.
    #[arg(long)]
    curve: String,
}

impl CurveArg {
    fn load(&self) -> Result<EllipticCurve, String> {
        let path = Path::new(&self.curve);
        if path.exists() {
            return EllipticCurve::load(path).map_err(|e| e.to_string());
        }
        let label = path.file_stem().and_then(|s| s.to_str()).unwrap_or(&self.curve);
        bundled_curve(label).map_err(|_| format!("{}: no such file or bundled curve", self.curve))
    }
}

/// A finished report: human lines, machine fields, verdict.
struct Report {
    command: &'static str,
    lines: Vec<String>,
    fields: Vec<(String, Value)>,
    pass: bool,
}

impl Report {
    fn new(command: &'static str) -> Self {
        Report { command, lines: Vec::new(), fields: Vec::new(), pass: true }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn field(&mut self, k: &str, v: impl Into<Value>) {
        self.fields.push((k.to_string(), v.into()));
    }

    fn require(&mut self, ok: bool) {
        self.pass &= ok;
    }

    fn emit(&self, format: Format) {
        match format {
            Format::Text => {
                for l in &self.lines {
                    println!("{l}");
                }
                let kv: Vec<String> = self.fields.iter().map(|(k, v)| format!("{k}={}", plain(v))).collect();
                println!("{} {}", verdict(self.pass), kv.join(" "));
            }
            Format::Json => {
                let mut m = Map::new();
                m.insert("command".into(), self.command.into());
                m.insert("status".into(), verdict(self.pass).into());
                for (k, v) in &self.fields {
                    m.insert(k.clone(), v.clone());
                }
                println!("{}", Value::Object(m));
            }
        }
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) if s.contains(' ') => format!("{s:?}"),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Bad input exits 2; a refused or failed computation exits 1 with a FAIL line.
enum Failure {
    Usage(String),
    Compute(String),
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Usage(s)
    }
}

impl From<&str> for Failure {
    fn from(s: &str) -> Self {
        Failure::Usage(s.to_string())
    }
}

type Outcome = Result<Vec<Report>, Failure>;

fn err(e: impl std::fmt::Display) -> Failure {
    Failure::Compute(e.to_string())
}

fn parse_cvalue(s: &str, what: &str) -> Result<CValue, String> {
    CValue::parse(s).ok_or_else(|| format!("cannot parse {what} {s:?}"))
}

fn gauss(p: u64, f: u32, spec: &str) -> Outcome {
    let chars = if spec == "all" {
        Quasicharacter::all_primitive(p, f, CValue::one()).map_err(err)?
    } else {
        let j: u64 = spec.parse().map_err(|_| format!("--char-spec must be an index or `all`, got {spec:?}"))?;
        vec![Quasicharacter::from_index(p, f, j, CValue::one()).map_err(err)?]
    };
    let mut r = Report::new("gauss");
    let mut worst = 0.0f64;
    for chi in &chars {
        let f = chi.conductor_exp();
        let q = Q::from_integer(p.pow(f).into());
        let tau = gauss_sum(chi).map_err(err)?;
        let numeric = gauss_sum_numeric(chi).map_err(err)?;
        let prod = tau.mul(&gauss_sum(&chi.inverse().map_err(err)?).map_err(err)?);
        let identity = prod.equals(&CValue::Exact(chi.value_at_minus_one()).scale(&q));
        let dev = (numeric.norm_sqr() - p.pow(f) as f64).abs();
        worst = worst.max(dev);
        r.require(identity && dev <= 1e-9 && f > 0);
        r.line(format!("order {} conductor p^{f}: tau = {tau}", chi.order()));
        r.line(format!("  numeric {:.12} {:+.12}i  |tau|^2 - q = {dev:.1e}  tau tau' = chi(-1) q: {identity}", numeric.re, numeric.im));
    }
    r.field("p", p);
    r.field("characters", chars.len());
    r.field("max_abs_sq_error", format!("{worst:.2e}"));
    Ok(vec![r])
}

fn local_integral(p: u64, alpha: &str, chr: &str, t: &str, n_max: Option<i64>) -> Outcome {
    let alpha = parse_cvalue(alpha, "alpha")?;
    let t = parse_cvalue(t, "t")?;
    let (f, j) = chr.split_once(':').ok_or_else(|| format!("--char must be F:J, got {chr:?}"))?;
    let f: u32 = f.parse().map_err(|_| format!("bad conductor exponent {f:?}"))?;
    let j: u64 = j.parse().map_err(|_| format!("bad character index {j:?}"))?;
    let chi = Quasicharacter::from_index(p, f, j, t).map_err(err)?;
    let n_max = n_max.unwrap_or_else(|| shells_for_tolerance(&chi.twist_unramified(&alpha), &CValue::one(), 1e-9));
    let s = mellin_mu_alpha(&chi, &alpha, n_max).map_err(err)?;
    let target = interpolation_target(&alpha, &chi).map_err(err)?;
    let error = s.partial.sub(&target).abs();
    let mut r = Report::new("local-integral");
    r.line(format!("shells {}..={}", s.n_min, s.n_max));
    r.line(format!("truncated  = {}", s.partial));
    r.line(format!("target     = {target}"));
    r.line(format!("tail bound = {:.3e}", s.tail_bound));
    if let Some(c) = &s.completed {
        r.line(format!("completed  = {c}"));
        r.require(c.equals(&target));
    }
    r.require(error <= s.tail_bound + 1e-9);
    r.field("p", p);
    r.field("n_max", s.n_max);
    r.field("error", format!("{error:.3e}"));
    r.field("tail_bound", format!("{:.3e}", s.tail_bound));
    Ok(vec![r])
}

fn tree(p: u64, radius: u64, check: bool) -> Outcome {
    let o = Vertex::origin(p);
    let vs = ball_vertices(&o, radius);
    let es = ball_edges(&o, radius);
    let mut r = Report::new("tree");
    r.line(format!("ball of radius {radius} around {o} in the tree of PGL2(Q_{p})"));
    r.line(format!("vertices {}  edges {}", vs.len(), es.len()));
    r.require(vs.len() as u64 == ball_vertex_count(p, radius));
    if check {
        let degrees = vs.iter().all(|v| v.neighbors().len() as u64 == p + 1);
        let inside = vs.iter().all(|v| v.distance(&o) <= radius);
        let adjacent = es.iter().all(|e| e.origin().distance(e.target()) == 1 && e.reverse().reverse() == *e);
        let parents = vs.iter().all(|v| v.children().iter().all(|c| c.parent() == *v));
        r.line(format!("degree q+1 {degrees}, within radius {inside}, edges adjacent {adjacent}, parent of child {parents}"));
        r.require(degrees && inside && adjacent && parents);
    }
    r.field("p", p);
    r.field("radius", radius);
    r.field("vertices", vs.len());
    r.field("edges", es.len());
    Ok(vec![r])
}

fn tree_rep(p: u64, radius: u64, run_suite: bool, trials: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = Report::new("tree-rep");
    let q1 = Q::from_integer((p + 1).into());
    let mut checks = 0usize;
    let mut failures = 0usize;
    let mut tally = |ok: bool| {
        checks += 1;
        failures += usize::from(!ok);
    };
    for sign in [Sign::Plus, Sign::Minus] {
        for rad in 1..=radius {
            tally(check_delta_image(p, rad, sign));
            tally(check_delta_star_injective(p, rad, sign));
        }
    }
    if run_suite {
        for i in 0..trials {
            let rad = 1 + i as u64 % radius;
            let phi = random_vertex_function(p, rad, 1 + i % 5, &mut rng);
            for sign in [Sign::Plus, Sign::Minus] {
                let lhs = delta(&delta_star(&phi, sign));
                tally(lhs == phi.scale(&q1).sub(&phi.hecke_t().scale(&sign.value())));
                let c = random_edge_function(p, rad, sign, 1 + i % 4, &mut rng);
                tally(delta(&c).pair(&phi) == c.pair(&delta_star(&phi, sign)));
            }
            let a = Q::from_integer(rng.gen_range(-4..=4i64).into());
            tally(phi.t_minus(&a).twist() == phi.twist().t_minus(&-a.clone()).neg());
            let alpha = Q::from_integer([1i64, -1, 2][i % 3].into());
            let c = random_edge_function(p, rad, Sign::Plus, 1 + i % 4, &mut rng);
            let image = tilde_delta_lower(&|v: &Vertex| rho(&alpha, v), &c).map_err(err)?;
            tally(solve_tilde_delta(&image, &alpha) == Some(c));
        }
    }
    r.require(failures == 0);
    r.line(format!("tree operators at p = {p}, radius {radius}: {checks} checks, {failures} failures"));
    r.field("p", p);
    r.field("radius", radius);
    r.field("checks", checks);
    r.field("failures", failures);
    Ok(vec![r])
}

fn random_nonzero(p: u64, rng: &mut ChaCha8Rng) -> Q {
    let unit = |rng: &mut ChaCha8Rng, hi: i64| loop {
        let x = rng.gen_range(1..=hi);
        if x % p as i64 != 0 {
            return x;
        }
    };
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    let (n, d) = (unit(rng, 60), unit(rng, 40));
    Q::new((sign * n).into(), d.into()) * exzero_core::arith::pow_q(p, rng.gen_range(-2..=2))
}

fn steinberg(p: u64, run_suite: bool, trials: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ord = OrdEll { p };
    let log = LogEll { p, prec: if p == 2 { 4 } else { 3 } };
    let (mut cob, mut cob_fail, mut coc, mut coc_fail) = (0usize, 0usize, 0usize, 0usize);
    let n = if run_suite { trials } else { trials.min(10) };
    for _ in 0..n {
        let a = random_nonzero(p, &mut rng);
        let b = random_nonzero(p, &mut rng);
        let (l, r) = coboundary_check(&a, &b, &ord).map_err(err)?;
        cob_fail += usize::from(l != r);
        let (l, r) = coboundary_check(&a, &b, &log).map_err(err)?;
        cob_fail += usize::from(!log.same(&l, &r));
        cob += 2;
        coc_fail += usize::from(!cocycle_holds(&a, &b, &ord).map_err(err)?);
        coc_fail += usize::from(!cocycle_holds(&a, &b, &log).map_err(err)?);
        coc += 2;
    }
    let mut r = Report::new("steinberg");
    r.line(format!("coboundary identities {cob}, failures {cob_fail}"));
    r.line(format!("cocycle relations {coc}, failures {coc_fail}"));
    r.require(cob_fail == 0 && coc_fail == 0);
    r.field("p", p);
    r.field("coboundary", cob);
    r.field("cocycle", coc);
    r.field("failures", cob_fail + coc_fail);
    Ok(vec![r])
}

fn detcheck(trials: usize, kmax: usize, mmax: usize, seed: u64) -> Outcome {
    if kmax == 0 || mmax < kmax {
        return Err("need 1 <= kmax <= mmax".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0usize;
    let mut maps = 0usize;
    for _ in 0..trials {
        let k = rng.gen_range(1..=kmax);
        let m = rng.gen_range(k..=mmax);
        let e = det_fixedpointfree_expansion(&random_zero_row_sum(k, m, &mut rng)).map_err(err)?;
        maps += e.admissible_maps;
        failures += usize::from(!e.holds());
    }
    let mut r = Report::new("detcheck");
    r.line(format!("{trials} random matrices, {maps} admissible maps summed, {failures} failures"));
    r.require(failures == 0);
    r.field("trials", trials);
    r.field("failures", failures);
    Ok(vec![r])
}

fn lp(path: &Path, s: Option<&str>, level: Option<u32>, moments: Option<u32>, prec: i64) -> Outcome {
    let mu = BallMeasure::load(path, prec).map_err(err)?;
    let p = mu.p();
    let level = level.unwrap_or(mu.max_level());
    let mut r = Report::new("lp");
    let bound = match mu.check() {
        Ok(rep) => rep.bound,
        Err(e) => {
            r.line(format!("{}: {e}", path.display()));
            r.require(false);
            r.field("error", e.to_string());
            return Ok(vec![r]);
        }
    };
    r.line(format!("measure on Z_{p}^* to level {}, bound c = {bound}", mu.max_level()));
    r.field("p", p);
    r.field("c", bound);
    if let Some(k) = moments {
        for j in 0..=k {
            let m = mu.moment(j, level).map_err(err)?;
            let m = Approx { value: m.value.with_abs_prec(m.error_exponent), ..m };
            r.line(format!("moment {j} = {}  (mod {p}^{})", m.value, m.error_exponent));
            r.field(&format!("moment{j}"), m.value.to_string());
        }
    }
    if let Some(s) = s.or(if moments.is_none() { Some("0") } else { None }) {
        let sq = parse_rational(s).ok_or_else(|| format!("cannot parse s {s:?}"))?;
        let sp = Padic::from_rational(p, &sq, prec);
        let g = mu.gamma_transform(&sp, level).map_err(err)?;
        let g = Approx { value: g.value.with_abs_prec(g.error_exponent), ..g };
        r.line(format!("L_p({s}) = {}  (mod {p}^{})", g.value, g.error_exponent));
        r.field("s", s);
        r.field("value", g.value.to_string());
        r.field("error_exponent", g.error_exponent);
    }
    Ok(vec![r])
}

fn linv(e: &EllipticCurve, p: u64, prec: i64) -> Outcome {
    let li = mtt::l_invariant(e, p, prec).map_err(err)?;
    let mut r = Report::new("linv");
    r.line(format!("{e}"));
    r.line(format!("Tate period q = {}", li.q));
    r.line(format!("ord_p(q) = {}, log_p(q) = {}", li.ord_q, li.log_q));
    r.line(format!("L-invariant = {}", li.value));
    r.field("curve", e.label.clone());
    r.field("p", p);
    r.field("ord_q", li.ord_q);
    r.field("l_invariant", li.value.to_string());
    Ok(vec![r])
}

fn interp(e: EllipticCurve, p: u64, level: u32, digits: i64) -> Outcome {
    let data = CurveData::new(e).map_err(err)?;
    let rep = mtt::interpolation_report(&data, p, level, digits).map_err(err)?;
    let mut r = Report::new("interp");
    r.lines.extend(rep.to_string().lines().map(String::from));
    r.require(rep.pass);
    r.field("curve", rep.label.clone());
    r.field("p", p);
    r.field("level", level);
    r.field("mass_ratio", rep.mass_ratio.to_string());
    r.field("euler_factor", rep.euler_factor.to_string());
    r.field("digits", digits);
    Ok(vec![r])
}

fn ezero(e: EllipticCurve, p: u64, level: u32, digits: i64) -> Outcome {
    let data = CurveData::new(e).map_err(err)?;
    let rep = mtt::exceptional_zero_report(&data, p, level, digits).map_err(err)?;
    let mut r = Report::new("ezero");
    r.lines.extend(rep.to_string().lines().map(String::from));
    r.require(rep.pass());
    r.field("curve", rep.label.clone());
    r.field("p", p);
    r.field("level", level);
    r.field("vanishes", rep.value_vanishes);
    r.field("derivative", rep.derivative.value.with_abs_prec(rep.derivative.error_exponent).to_string());
    r.field("l_invariant", rep.l_invariant.value.with_abs_prec(digits + 1).to_string());
    r.field("digits", digits);
    r.field("vanishing_order", rep.vanishing_order.map_or(Value::Null, |k| json!(k)));
    Ok(vec![r])
}

fn run_suite(quick: bool, seed: u64) -> Outcome {
    let cfg = SuiteConfig { seed, quick };
    let results = suite::run_all(&cfg);
    let mut reports = Vec::new();
    let mut summary = Report::new("suite");
    for c in &results {
        summary.line(c.to_string());
        summary.require(c.pass);
    }
    let passed = results.iter().filter(|c| c.pass).count();
    summary.field("passed", passed);
    summary.field("total", results.len());
    summary.field("seed", seed);
    summary.field("quick", quick);
    let mut per = results.iter().map(|c| {
        let mut r = Report::new("criterion");
        r.require(c.pass);
        r.field("id", c.id);
        r.field("name", c.name);
        r.field("elapsed_s", c.elapsed.as_secs_f64());
        r.field("detail", c.detail.clone());
        r
    });
    reports.extend(&mut per);
    reports.push(summary);
    Ok(reports)
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Gauss { p, conductor_exp, char_spec } => gauss(p, conductor_exp, &char_spec),
        Command::LocalIntegral { p, alpha, chr, t, n_max } => local_integral(p, &alpha, &chr, &t, n_max),
        Command::Tree { p, radius, check } => tree(p, radius, check),
        Command::TreeRep { p, radius, suite, trials, seed } => tree_rep(p, radius, suite, trials, seed),
        Command::Steinberg { p, suite, trials, seed } => steinberg(p, suite, trials, seed),
        Command::Detcheck { trials, kmax, mmax, seed } => detcheck(trials, kmax, mmax, seed),
        Command::Lp { measure, s, level, moments, prec } => lp(&measure, s.as_deref(), level, moments, prec),
        Command::Linv { curve, p, prec } => linv(&curve.load()?, p, prec),
        Command::Interp { curve, p, level, prec } => interp(curve.load()?, p, level, prec),
        Command::Ezero { curve, p, level, prec } => ezero(curve.load()?, p, level, prec),
        Command::Suite { quick, seed } => run_suite(quick, seed),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Gauss { .. } => "gauss",
        Command::LocalIntegral { .. } => "local-integral",
        Command::Tree { .. } => "tree",
        Command::TreeRep { .. } => "tree-rep",
        Command::Steinberg { .. } => "steinberg",
        Command::Detcheck { .. } => "detcheck",
        Command::Lp { .. } => "lp",
        Command::Linv { .. } => "linv",
        Command::Interp { .. } => "interp",
        Command::Ezero { .. } => "ezero",
        Command::Suite { .. } => "suite",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let is_suite = matches!(cli.command, Command::Suite { .. });
    let command = command_name(&cli.command);
    match dispatch(cli.command) {
        Ok(reports) => {
            let pass = reports.iter().all(|r| r.pass);
            for r in &reports {
                // Text mode prints the per-criterion lines through the summary.
                if cli.format == Format::Text && is_suite && r.command == "criterion" {
                    continue;
                }
                r.emit(cli.format);
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            let mut r = Report::new(command);
            r.require(false);
            r.field("error", e);
            r.emit(cli.format);
            ExitCode::FAILURE
        }
    }
}
