use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use boxcar_core::diophantine::{approximation_quality, Convergent};
use boxcar_core::equidist::{block_triples, lemma1_bounds, lemma2_check, Lemma1Triple};
use boxcar_core::risk::{
    eps_decades, fit_rate, hyper_exponent, homogeneous_slope, rate_constants, risk_at, rl_hyperrectangle,
    zone_boundaries, classify_block,
};
use boxcar_core::sim::{
    estimator_risk, hyper_bounds, perturbation_study, worst_case_theta, EstimatorSpec, Experiment, GENERATOR,
};
use boxcar_core::{
    BlockGrid, BoxcarKernel, ClassKind, DirectData, Error, Homogeneous, IrrationalNumber, SmoothnessClass,
    Spectrum,
};
use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand};

use crate::figures;
use crate::par;
use crate::table::{fmt_f64, fmt_opt, Table};

pub const GOLDEN: &str = "surd:-1,1,5,2";

#[derive(Parser, Debug)]
#[command(name = "boxcar", version, about = "Diophantine risk calculations for boxcar deconvolution")]
#[command(args_override_self = true)]
pub struct Cli {
    /// `key = value` file applied before the command line flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the CSV here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
pub struct KernelArgs {
    /// Half-width `a`: surd:A,B,D,E | cf:a0;a1,a2,... | dec:digits:bits
    #[arg(long, default_value = GOLDEN)]
    pub a: String,
    /// Boxcar iteration order.
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    /// boxcar | homogeneous | direct
    #[arg(long, default_value = "boxcar")]
    pub kernel: String,
    /// Exponent of the homogeneous control `r_k = k^{-alpha}`.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Ceiling for the precision escalation of ‖ka‖.
    #[arg(long = "precision-bits", env = "BOXCAR_PRECISION_BITS", default_value_t = 4096)]
    pub precision_bits: u32,
}

#[derive(Args, Debug, Clone)]
pub struct ClassArgs {
    /// hyper | ellipsoid | block
    #[arg(long, default_value = "hyper")]
    pub class: String,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long = "C", default_value_t = 1.0)]
    pub c: f64,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Continued-fraction convergents with ‖q_n a‖ and the sandwich check.
    Cf {
        #[arg(long, default_value = GOLDEN)]
        a: String,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long = "precision-bits", env = "BOXCAR_PRECISION_BITS", default_value_t = 4096)]
        precision_bits: u32,
    },
    /// Eigenvalue trace `k, r_k, r_k^-2` with the certified envelope.
    Eig {
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long = "k-max", default_value_t = 500)]
        k_max: u64,
    },
    /// `R_P` (and `R_L` for hyperrectangles) at each ε.
    Risk {
        #[command(flatten)]
        kernel: KernelArgs,
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, value_delimiter = ',', default_value = "1e-6")]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 1e-6)]
        rtol: f64,
    },
    /// `R_P` over `ε = 10^{-j/2}`, `j = lo..hi`, with the log-log slope.
    Sweep {
        #[command(flatten)]
        kernel: KernelArgs,
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long = "eps-decades", default_value = "6:24")]
        eps_decades: String,
        #[arg(long, default_value_t = 1e-6)]
        rtol: f64,
    },
    /// Block-by-block zone classification at one ε.
    Zones {
        #[command(flatten)]
        kernel: KernelArgs,
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, default_value_t = 1e-8)]
        eps: f64,
    },
    /// The block equidistribution sandwich.
    Lemma1 {
        #[arg(long, default_value = GOLDEN)]
        a: String,
        /// Convergent index of `q`.
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// Offset `N` of the run `N+1..N+q`.
        #[arg(long = "N", default_value_t = 0)]
        big_n: u64,
        /// inv (1/x) | inv2 (1/x²) | clip (min(A, B/x²))
        #[arg(long, default_value = "inv")]
        h: String,
        /// Instead of one run, every block of the grid up to this frequency.
        #[arg(long)]
        blocks: Option<u64>,
        #[arg(long = "precision-bits", env = "BOXCAR_PRECISION_BITS", default_value_t = 4096)]
        precision_bits: u32,
    },
    /// Saturated sum over `j = 1..q` against its `c1`, `c2` envelope.
    Lemma2 {
        #[arg(long, default_value_t = 1)]
        r: u64,
        #[arg(long, default_value_t = 1000)]
        q: u64,
        #[arg(long, value_delimiter = ',', default_value = "0.001,0.01,0.1,1,10")]
        kappa: Vec<f64>,
    },
    /// Monte Carlo risk of the threshold inverse at the worst-case signal.
    Simulate {
        #[command(flatten)]
        kernel: KernelArgs,
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, value_delimiter = ',', default_value = "1e-3")]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 400)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Replace `a` by its convergents in the estimator and bound the damage.
    Perturb {
        #[arg(long, default_value = GOLDEN)]
        a: String,
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long = "approx", value_delimiter = ',', default_value = "8,10,12")]
        approx: Vec<usize>,
        /// Active set is cut at `q_r`.
        #[arg(long = "r", default_value_t = 6)]
        r: usize,
        #[arg(long = "precision-bits", env = "BOXCAR_PRECISION_BITS", default_value_t = 4096)]
        precision_bits: u32,
    },
    /// fig1 (r_k^-2 trace) or fig2 (zones of m_k).
    Figures {
        which: String,
        #[arg(long, default_value = GOLDEN)]
        a: String,
        #[arg(long = "k-max")]
        k_max: Option<u64>,
        #[arg(long, default_value_t = figures::FIG2_EPS)]
        eps: f64,
        #[arg(long, default_value_t = figures::FIG2_SIGMA)]
        sigma: f64,
        #[arg(long = "C", default_value_t = 1.0)]
        c: f64,
        /// Also write a gnuplot script here.
        #[arg(long = "plot-script")]
        plot_script: Option<PathBuf>,
    },
}

/// Exit code for an error: 3 precision, 4 hypothesis, 5 assertion, 2 else.
pub fn exit_code(err: &anyhow::Error) -> (i32, &'static str) {
    match err.downcast_ref::<Error>() {
        Some(e) => (
            match e {
                Error::PrecisionExhausted { .. } => 3,
                Error::HypothesisViolated(_) | Error::ApproximantTooCoarse { .. } => 4,
                Error::AssertionFailed(_) => 5,
                _ => 2,
            },
            e.class(),
        ),
        None => (2, "Usage"),
    }
}

/// Parses, runs and writes; returns the process exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match with_config(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(stderr, "error: Usage: {e:#}");
            return 2;
        }
    };
    let matches = match Cli::command().try_get_matches_from(&args) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return 2;
        }
    };
    match run(&cli, &matches, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let (code, class) = exit_code(&e);
            let _ = writeln!(stderr, "error: {class}: {}", format!("{e:#}").replace('\n', " "));
            code
        }
    }
}

/// Splices `--key value` pairs from `--config` right after the subcommand,
/// keeping only keys that subcommand knows.
fn with_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let strs: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let mut path = None;
    for (i, s) in strs.iter().enumerate() {
        if let Some(p) = s.strip_prefix("--config=") {
            path = Some(PathBuf::from(p));
        } else if s == "--config" {
            path = strs.get(i + 1).map(PathBuf::from);
        }
    }
    let Some(path) = path else { return Ok(args) };
    let kv = crate::config::load(&path)?;
    let cmd = Cli::command();
    let Some((pos, sub)) = strs
        .iter()
        .enumerate()
        .skip(1)
        .find_map(|(i, s)| cmd.find_subcommand(s).map(|c| (i, c)))
    else {
        return Ok(args);
    };
    let mut known = Vec::new();
    for arg in sub.get_arguments() {
        if let Some(l) = arg.get_long() {
            known.push(l.to_string());
        }
    }
    let mut out: Vec<OsString> = args[..=pos].to_vec();
    for (k, v) in kv {
        if known.contains(&k) {
            out.push(format!("--{k}").into());
            out.push(v.into());
        }
    }
    out.extend_from_slice(&args[pos + 1..]);
    Ok(out)
}

/// Every resolved argument of the subcommand, defaults included.
fn provenance(t: &mut Table, matches: &ArgMatches) {
    let mut head = vec![("tool".to_string(), format!("boxcar {}", env!("CARGO_PKG_VERSION")))];
    if let Some((name, sub)) = matches.subcommand() {
        head.push(("command".into(), name.to_string()));
        let mut cmd = Cli::command();
        cmd.build();
        if let Some(sc) = cmd.find_subcommand(name) {
            for arg in sc.get_arguments() {
                let id = arg.get_id().as_str();
                if let Ok(Some(vals)) = sub.try_get_raw(id) {
                    let v: Vec<String> = vals.map(|v| v.to_string_lossy().into_owned()).collect();
                    head.push((arg.get_long().unwrap_or(id).to_string(), v.join(",")));
                }
            }
        }
    }
    let rest = std::mem::take(&mut t.meta);
    t.meta = head;
    t.meta.extend(rest);
}

fn number(a: &str, bits: u32) -> Result<IrrationalNumber> {
    let x: IrrationalNumber = a.parse()?;
    Ok(x.with_max_precision(bits)?)
}

fn boxcar(k: &KernelArgs) -> Result<BoxcarKernel> {
    Ok(BoxcarKernel::new(number(&k.a, k.precision_bits)?, k.m)?)
}

fn spectrum(k: &KernelArgs) -> Result<Box<dyn Spectrum>> {
    Ok(match k.kernel.as_str() {
        "boxcar" => Box::new(boxcar(k)?),
        "homogeneous" => Box::new(Homogeneous::new(1.0, k.alpha)?),
        "direct" => Box::new(DirectData),
        other => return Err(Error::InvalidSpec(format!("unknown kernel `{other}`")).into()),
    })
}

fn class_of(c: &ClassArgs) -> Result<SmoothnessClass> {
    let kind: ClassKind = c.class.parse()?;
    Ok(SmoothnessClass::new(kind, c.sigma, c.c)?)
}

fn h_fn(name: &str) -> Result<Box<dyn Fn(f64) -> f64>> {
    Ok(match name {
        "inv" => Box::new(|x: f64| 1.0 / x),
        "inv2" => Box::new(|x: f64| 1.0 / (x * x)),
        "clip" => Box::new(|x: f64| 50.0f64.min(2.0 / (x * x))),
        other => return Err(Error::InvalidSpec(format!("unknown h `{other}`")).into()),
    })
}

fn parse_decades(s: &str) -> Result<(u32, u32)> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| Error::InvalidSpec(format!("eps-decades `{s}` is not lo:hi")))?;
    let lo: u32 = lo.trim().parse().map_err(|_| Error::InvalidSpec(format!("bad decade `{lo}`")))?;
    let hi: u32 = hi.trim().parse().map_err(|_| Error::InvalidSpec(format!("bad decade `{hi}`")))?;
    if lo > hi {
        bail!(Error::InvalidSpec(format!("eps-decades {lo}:{hi} is empty")));
    }
    Ok((lo, hi))
}

/// Expected slope of `ln R_P` against `ln ε`, when known.
fn expected_slope(k: &KernelArgs, class: &SmoothnessClass) -> Option<f64> {
    match (k.kernel.as_str(), class.kind) {
        ("homogeneous", ClassKind::Hyperrectangle) => Some(homogeneous_slope(class.sigma, k.alpha)),
        ("direct", ClassKind::Hyperrectangle) => Some(homogeneous_slope(class.sigma, 0.0)),
        ("boxcar", ClassKind::Hyperrectangle) if k.m == 1 => Some(hyper_exponent(class.sigma)),
        ("boxcar", ClassKind::Ellipsoid | ClassKind::BlockEllipsoid) if k.m == 1 => {
            rate_constants(class.sigma).ok().map(|r| 2.0 * r.r_tilde)
        }
        _ => None,
    }
}

fn lemma1_row(t: &mut Table, tr: &Lemma1Triple) {
    let q = tr.q as f64;
    t.push(vec![
        tr.q.to_string(),
        fmt_f64(tr.q_next),
        tr.big_n.to_string(),
        tr.terms.to_string(),
        fmt_f64(tr.lower),
        fmt_f64(tr.middle),
        fmt_f64(tr.upper),
        fmt_f64(tr.upper_tight),
        fmt_f64(tr.middle / (q * q.ln().max(1.0))),
    ]);
}

fn cf_row(t: &mut Table, x: &IrrationalNumber, c: &Convergent, next_q: Option<&Convergent>) -> Result<()> {
    let el = x.element(c.n)?.map(|e| e.to_string()).unwrap_or_default();
    let q = c.q.to_biguint().ok_or_else(|| anyhow!("negative q"))?;
    let d = x.distance_big(&q)?;
    let sandwich = match next_q {
        Some(nx) if c.n >= 1 && !d.resonant => {
            let qn: f64 = nx.q.to_string().parse()?;
            (1.0 / (2.0 * qn) < d.hi && d.lo < 1.0 / qn).to_string()
        }
        _ => String::new(),
    };
    t.push(vec![c.n.to_string(), el, c.p.to_string(), c.q.to_string(), fmt_f64(d.value), sandwich]);
    Ok(())
}

pub fn run(cli: &Cli, matches: &ArgMatches, stdout: &mut dyn Write) -> Result<()> {
    let mut extra: Option<(PathBuf, String)> = None;
    let mut t = match &cli.cmd {
        Cmd::Cf { a, n, precision_bits } => {
            let x = number(a, *precision_bits)?;
            let conv = x.convergents_to(*n + 1)?;
            let mut t = Table::new(&["n", "a_n", "p", "q", "dist", "sandwich"]);
            for (i, c) in conv.iter().enumerate().take(*n + 1) {
                cf_row(&mut t, &x, c, conv.get(i + 1))?;
            }
            if *n >= 1 && conv.len() > *n && !x.is_rational() {
                let aq = approximation_quality(&x, *n)?;
                t.meta("quality_holds", aq.holds());
            }
            t
        }
        Cmd::Eig { kernel, k_max } => {
            let s = spectrum(kernel)?;
            let bx = if kernel.kernel == "boxcar" { Some(boxcar(kernel)?) } else { None };
            let rows: Vec<Vec<String>> = {
                use rayon::prelude::*;
                (1..=*k_max)
                    .into_par_iter()
                    .map(|k| -> Result<Vec<String>> {
                        let r = s.eigenvalue(k)?;
                        let (lo, hi) = match &bx {
                            Some(b) => b.checked_envelope(k)?,
                            None => (f64::NAN, f64::NAN),
                        };
                        Ok(vec![k.to_string(), fmt_f64(r), fmt_f64(1.0 / (r * r)), fmt_f64(lo), fmt_f64(hi)])
                    })
                    .collect::<Result<_>>()?
            };
            let mut t = Table::new(&["k", "r_k", "inv_sq", "lo", "hi"]);
            t.meta("label", s.label());
            t.rows = rows;
            t
        }
        Cmd::Risk { kernel, class, eps, rtol } => {
            let s = spectrum(kernel)?;
            let cl = class_of(class)?;
            let mut t = Table::new(&[
                "eps", "value", "lo", "hi", "r_l", "k0", "k1", "k_trunc", "variance", "mixed", "bias",
            ]);
            t.meta("label", s.label());
            for &e in eps {
                let r = risk_at(&*s, &cl, e, *rtol)?;
                let rl = if cl.kind == ClassKind::Hyperrectangle {
                    fmt_f64(rl_hyperrectangle(&*s, &cl, e, *rtol)?.value)
                } else {
                    String::new()
                };
                let z = r.zones;
                t.push(vec![
                    fmt_f64(e),
                    fmt_f64(r.value),
                    fmt_f64(r.lo),
                    fmt_f64(r.hi),
                    rl,
                    fmt_opt(r.k0),
                    fmt_opt(r.k1),
                    r.k_trunc.to_string(),
                    fmt_opt(z.map(|z| fmt_f64(z.variance))),
                    fmt_opt(z.map(|z| fmt_f64(z.mixed))),
                    fmt_opt(z.map(|z| fmt_f64(z.bias))),
                ]);
            }
            t
        }
        Cmd::Sweep { kernel, class, eps_decades: dec, rtol } => {
            let s = spectrum(kernel)?;
            let cl = class_of(class)?;
            let (lo, hi) = parse_decades(dec)?;
            let recs = par::sweep(&*s, &cl, &eps_decades(lo, hi), *rtol)?;
            let fit = fit_rate(&recs)?;
            let mut t = Table::new(&["eps", "value", "lo", "hi", "k0", "k1", "k_trunc"]);
            t.meta("label", s.label());
            t.meta("fit_slope", fmt_f64(fit.slope));
            t.meta("fit_intercept", fmt_f64(fit.intercept));
            t.meta("fit_residual", fmt_f64(fit.residual));
            t.meta("fit_points", fit.points);
            if let Some(x) = expected_slope(kernel, &cl) {
                t.meta("expected_slope", fmt_f64(x));
            }
            for r in &recs {
                t.push(vec![
                    fmt_f64(r.eps),
                    fmt_f64(r.value),
                    fmt_f64(r.value_lo),
                    fmt_f64(r.value_hi),
                    fmt_opt(r.k0),
                    fmt_opt(r.k1),
                    r.k_trunc.to_string(),
                ]);
            }
            t
        }
        Cmd::Zones { kernel, class, eps } => {
            let b = boxcar(kernel)?;
            if b.m() != 1 {
                bail!(Error::InvalidSpec("zones need a plain boxcar (m = 1)".into()));
            }
            let cl = class_of(class)?;
            let x = (cl.c / eps).powf(1.0 / (1.0 + cl.tau()));
            let grid = BlockGrid::build(b.a(), (4.0 * x).ceil().max(16.0) as u64)?;
            let z = zone_boundaries(&cl, *eps, &grid)?;
            let mut t = Table::new(&["nu", "start", "end", "q", "zone"]);
            t.meta("k0", z.k0).meta("k1", z.k1).meta("x", fmt_f64(x));
            for nu in 0..grid.len() {
                let (s, e) = grid.block(nu);
                t.push(vec![
                    nu.to_string(),
                    s.to_string(),
                    (e - 1).to_string(),
                    grid.nodes()[nu].q.to_string(),
                    classify_block(&grid, nu, &cl, *eps).as_str().to_string(),
                ]);
            }
            t
        }
        Cmd::Lemma1 { a, n, big_n, h, blocks, precision_bits } => {
            let x = number(a, *precision_bits)?;
            let hf = h_fn(h)?;
            let mut t = Table::new(&[
                "q", "q_next", "N", "terms", "lower", "middle", "upper", "upper_tight", "ratio",
            ]);
            match blocks {
                Some(k_max) => {
                    let grid = BlockGrid::build(&x, *k_max)?;
                    for tr in block_triples(&x, &grid, &*hf)? {
                        lemma1_row(&mut t, &tr);
                    }
                }
                None => lemma1_row(&mut t, &lemma1_bounds(&x, *big_n, *n, &*hf, None)?),
            }
            t
        }
        Cmd::Lemma2 { r, q, kappa } => {
            let mut t = Table::new(&["kappa", "exact_sum", "envelope", "c1", "c2", "ratio"]);
            for &k in kappa {
                let c = lemma2_check(*r, *q, k)?;
                t.push(vec![
                    fmt_f64(k),
                    fmt_f64(c.exact_sum),
                    fmt_f64(c.envelope),
                    fmt_f64(c.c1),
                    fmt_f64(c.c2),
                    fmt_f64(c.ratio()),
                ]);
            }
            t
        }
        Cmd::Simulate { kernel, class, eps, reps, seed } => {
            let s = spectrum(kernel)?;
            let cl = class_of(class)?;
            let mut t = Table::new(&[
                "eps", "exact", "mc_mean", "mc_stderr", "reps", "z", "active", "k_max", "r_p",
            ]);
            t.meta("label", s.label()).meta("generator", GENERATOR);
            for &e in eps {
                let theta = worst_case_theta(&*s, &cl, e)?;
                let tau: Vec<f64> = match cl.kind {
                    ClassKind::Hyperrectangle => hyper_bounds(&cl, theta.len() as u64),
                    _ => theta.clone(),
                };
                let spec = EstimatorSpec::threshold(&*s, &tau, e)?;
                let exact = estimator_risk(&spec, &*s, &theta, e)?;
                let exp = Experiment::new(&*s, &spec, &theta, e)?;
                let mc = par::monte_carlo(&exp, *reps, *seed);
                let z = (mc.mean - exact) / mc.stderr;
                if !mc.agrees(exact, 4.0) {
                    bail!(Error::AssertionFailed(format!(
                        "Monte Carlo mean {} is {z:.2} standard errors from the exact risk {exact}",
                        mc.mean
                    )));
                }
                let rp = risk_at(&*s, &cl, e, 1e-6)?.value;
                t.push(vec![
                    fmt_f64(e),
                    fmt_f64(exact),
                    fmt_f64(mc.mean),
                    fmt_f64(mc.stderr),
                    mc.reps.to_string(),
                    fmt_f64(z),
                    spec.active().to_string(),
                    theta.len().to_string(),
                    fmt_f64(rp),
                ]);
            }
            t
        }
        Cmd::Perturb { a, class, eps, approx, r, precision_bits } => {
            let b = BoxcarKernel::new(number(a, *precision_bits)?, 1)?;
            let cl = class_of(class)?;
            let mut t = Table::new(&[
                "m", "q_m", "q_r", "active", "delta_bar", "chain_bound", "risk_diff", "bound", "r_p",
            ]);
            for &m in approx {
                let p = perturbation_study(&b, m, *r, &cl, *eps)?;
                t.push(vec![
                    m.to_string(),
                    p.q_m.to_string(),
                    p.q_r.to_string(),
                    p.set.len().to_string(),
                    fmt_f64(p.delta_bar),
                    fmt_f64(p.chain_bound),
                    fmt_f64(p.risk_diff),
                    fmt_f64(p.bound),
                    fmt_f64(p.r_p),
                ]);
            }
            t
        }
        Cmd::Figures { which, a, k_max, eps, sigma, c, plot_script } => {
            let b = BoxcarKernel::new(a.parse()?, 1)?;
            let t = match which.as_str() {
                "fig1" => figures::fig1(
                    &b,
                    k_max.unwrap_or(figures::FIG1_K_MAX),
                    &figures::FIG1_ALPHAS,
                    figures::FIG1_C,
                )?,
                "fig2" => figures::fig2(
                    &b,
                    &SmoothnessClass::hyper(*sigma, *c)?,
                    *eps,
                    k_max.unwrap_or(figures::FIG2_K_MAX),
                )?,
                other => bail!(Error::InvalidSpec(format!("unknown figure `{other}`, expected fig1 or fig2"))),
            };
            if let Some(p) = plot_script {
                let csv = cli.out.as_ref().map_or("data.csv".into(), |o| o.display().to_string());
                extra = Some((p.clone(), figures::plot_script(which, &csv, &t)));
            }
            t
        }
    };
    provenance(&mut t, matches);
    match &cli.out {
        Some(p) => {
            let f = std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
            t.write_to(std::io::BufWriter::new(f))?;
        }
        None => t.write_to(&mut *stdout)?,
    }
    if let Some((p, script)) = extra {
        std::fs::write(&p, script).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}
