//! `dsbound`: command-line front end.
//!
//! Exit status: 0 success, 1 a checked inequality or certificate failed,
//! 2 usage, input or cap errors.

mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dsbound::bounds::{
    appendix_check_all, bipartite_peel, ds_sauer_bound, extremal_class, natarajan_sauer_bound, sweep, verify_sauer_at,
    SweepRow,
};
use dsbound::dims::{
    ds_dimension, exponential_dimension, graph_dimension, natarajan_dimension, DimensionResult, Witness,
};
use dsbound::listlearn::{
    loo_experiment, make_task, pac_experiment, pac_plan, uc_experiment, ExperimentConfig, ListProvider, LooReport, PacConstants,
};
use dsbound::oig::{
    build_oig, degree_stats, is_downward_closed, max_density_bruteforce, orient_minmax, savd, shift,
    shift_fixed_point, DEFAULT_SUBSET_CAP,
};
use dsbound::polycert::{construct_q, spanning_certificate, verify_certificate, Certificate};
use dsbound::{
    all_nonempty_classes, random_class, ClassFormat, HypothesisClass, Label, DEFAULT_ENUMERATION_CAP,
};
use report::{Format, Report};
use serde_json::{json, Value};

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, unreadable input, caps: exit 2.
    Usage(String),
    /// A proven statement failed to check: exit 1.
    Verification(String),
}

impl From<dsbound::Error> for CliError {
    fn from(e: dsbound::Error) -> Self {
        match e {
            dsbound::Error::Verification(_) | dsbound::Error::BoundViolated(_) => CliError::Verification(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "dsbound", version, about = "Dimensions, Sauer-type bounds, certificates and list learning for finite multiclass classes")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Class file (text or JSON); `-` or omitted reads stdin.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// List size ℓ.
    #[arg(long, global = true, default_value_t = 1)]
    ell: usize,
    /// Dimension; defaults to the computed DS dimension where applicable.
    #[arg(long, global = true)]
    d: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for sweeps and trials (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Enumeration cap.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u128,
}

#[derive(Subcommand)]
enum Command {
    /// Exact dimensions of a class.
    Dim {
        #[arg(value_enum)]
        kind: DimKind,
    },
    /// Evaluate a Sauer-type bound.
    Bound {
        #[arg(value_enum)]
        kind: BoundKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Label,
    },
    /// Generate classes.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// One-inclusion graph tools.
    Oig {
        #[command(subcommand)]
        kind: OigKind,
    },
    /// Polynomial certificates.
    Cert {
        #[command(subcommand)]
        kind: CertKind,
    },
    /// List-learning experiments.
    Learn {
        #[command(subcommand)]
        kind: LearnKind,
    },
    /// Bound checks over many classes, one CSV row per class.
    Sweep {
        #[command(subcommand)]
        kind: SweepKind,
    },
    /// Check proven statements on one class.
    Verify {
        #[command(subcommand)]
        kind: VerifyKind,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DimKind {
    Ds,
    Nat,
    Exp,
    Graph,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundKind {
    Ds,
    Nat,
}

#[derive(Subcommand)]
enum GenKind {
    /// Words with at most d labels ≥ ℓ; meets the DS bound with equality.
    Extremal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Label,
    },
    /// Each word kept independently with probability `density`.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Label,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
    },
}

#[derive(Subcommand)]
enum OigKind {
    /// Edge count, ℓ-degrees, average and shifting average degree.
    Stats,
    /// Shift along one coordinate.
    Shift {
        #[arg(long)]
        coord: usize,
    },
    /// Shift all coordinates until nothing changes.
    Fixpoint,
    /// Min-max list orientation.
    Orient,
    /// Maximum ℓ-density over subclasses, by subset enumeration.
    Density {
        #[arg(long, default_value_t = DEFAULT_SUBSET_CAP)]
        subset_cap: usize,
    },
}

#[derive(Subcommand)]
enum CertKind {
    /// Rank of the monomial evaluation matrix.
    Span,
    /// Build the triangular polynomial certificate.
    Replay,
    /// Re-check a certificate document given with `--input`.
    Verify,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProviderKind {
    Full,
    Support,
}

#[derive(Args, Clone)]
struct TaskArgs {
    /// Index of the target member in the sorted class.
    #[arg(long, default_value_t = 0)]
    target: usize,
    /// Comma-separated instance weights (default uniform).
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = ProviderKind::Full)]
    provider: ProviderKind,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// Sample size (default 50; for `pac`, the planned minimum).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long)]
    ell_prime: Option<usize>,
}

#[derive(Subcommand)]
enum LearnKind {
    /// Leave-one-out error of one-inclusion list prediction against its bound.
    Loo(TaskArgs),
    /// Amplified learner: chunks, validation, held-out error.
    Pac(TaskArgs),
    /// Uniform deviation of empirical list losses.
    Uc(TaskArgs),
}

#[derive(Subcommand)]
enum SweepKind {
    /// Every nonempty class in `[k]^n`.
    Exhaustive {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Label,
    },
    /// Random classes with densities drawn uniformly from (0, 1).
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Label,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

#[derive(Subcommand)]
enum VerifyKind {
    /// `|H|` against the DS bound (at `--d` if given).
    Sauer,
    /// Shifting preserves size, does not lower savd or raise the exponential dimension.
    Shiftlaws,
    /// Exponential dimension at most `40·ℓ·d_DS·max(ln k, 1)`.
    Corollary,
    /// Forest structure for ℓ = 1 and DS ≤ 1; bipartite peeling for n = 2.
    Appendix,
}

type Params = Vec<(String, String)>;

fn param(params: &mut Params, key: &str, value: impl ToString) {
    params.push((key.to_string(), value.to_string()));
}

fn input_name(c: &Common) -> String {
    c.input.as_ref().map_or_else(|| "-".to_string(), |p| p.display().to_string())
}

fn class_params(c: &Common, h: &HypothesisClass) -> Params {
    let mut p = Params::new();
    param(&mut p, "input", input_name(c));
    param(&mut p, "n", h.n());
    param(&mut p, "k", h.k());
    param(&mut p, "size", h.len());
    param(&mut p, "ell", c.ell);
    param(&mut p, "cap", c.cap);
    p
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

/// A class as the report body. `extra` results go into the JSON document and,
/// as comment lines, into the text class file.
fn class_report(command: &str, params: Params, h: &HypothesisClass, format: Format, extra: &[(&str, Value)]) -> Report {
    let mut result: Value = serde_json::from_str(&h.serialize(ClassFormat::Json)).expect("class JSON");
    let mut comments = String::new();
    for (k, v) in extra {
        result[*k] = v.clone();
        comments += &format!("# {k}={v}\n");
    }
    let rows = h.patterns().iter().map(|p| p.iter().map(|l| l.to_string()).collect()).collect();
    let header: Vec<String> = (0..h.n()).map(|i| format!("x{i}")).collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let text = if format == Format::Text { comments + &h.to_text() } else { String::new() };
    Report::new(command, params, result).text(text).table(&header, rows).flatten()
}

fn dimension_text(r: &DimensionResult) -> String {
    let mut out = format!("{}\nwitness: {:?}\n", r.value, r.witness.indices());
    match &r.structure {
        Witness::None => {}
        Witness::PseudoCube { patterns } => {
            out += &format!("pseudo-cube ({} patterns):\n", patterns.len());
            for p in patterns {
                out += &format!("  {p}\n");
            }
        }
        Witness::Cube { factors } => out += &format!("factors: {factors:?}\n"),
        Witness::Projection { size } => out += &format!("projection size: {size}\n"),
        Witness::Graph { pivot, members } => out += &format!("pivot: {pivot:?}\nmembers: {members:?}\n"),
    }
    for n in &r.notes {
        out += &format!("note: {n}\n");
    }
    out
}

fn run_dim(c: &Common, kind: DimKind) -> Result<Report, CliError> {
    if let DimKind::Graph = kind {
        let lc = input::read_list_class(c.input.as_deref())?;
        let mut p = Params::new();
        param(&mut p, "input", input_name(c));
        param(&mut p, "n", lc.n());
        param(&mut p, "k", lc.k());
        param(&mut p, "ell", lc.ell());
        param(&mut p, "size", lc.len());
        param(&mut p, "cap", c.cap);
        let r = graph_dimension(&lc, c.cap)?;
        let ok = lc.verify_graph_witness(&r);
        return Ok(Report::new("dim graph", p, to_value(&r)).text(dimension_text(&r)).verified(ok));
    }
    let h = input::read_class(c.input.as_deref())?;
    let (name, r) = match kind {
        DimKind::Ds => ("dim ds", ds_dimension(&h, c.ell)?),
        DimKind::Nat => ("dim nat", natarajan_dimension(&h, c.ell)?),
        DimKind::Exp => ("dim exp", exponential_dimension(&h, c.ell)?),
        DimKind::Graph => unreachable!("handled above"),
    };
    let ok = r.verify(&h);
    Ok(Report::new(name, class_params(c, &h), to_value(&r)).text(dimension_text(&r)).verified(ok))
}

fn run_bound(c: &Common, kind: BoundKind, n: usize, k: Label) -> Result<Report, CliError> {
    let d = c.d.ok_or_else(|| CliError::Usage("--d is required".into()))?;
    let mut p = Params::new();
    param(&mut p, "n", n);
    param(&mut p, "k", k);
    param(&mut p, "ell", c.ell);
    param(&mut p, "d", d);
    let (name, value) = match kind {
        BoundKind::Ds => ("bound ds", ds_sauer_bound(n, k, c.ell, d)?),
        BoundKind::Nat => ("bound nat", natarajan_sauer_bound(n, k, c.ell, d)?),
    };
    Ok(Report::new(name, p, json!({ "bound": value.to_string() })).text(format!("{value}\n")))
}

fn run_gen(c: &Common, kind: &GenKind) -> Result<Report, CliError> {
    let mut p = Params::new();
    let (name, h) = match kind {
        GenKind::Extremal { n, k } => {
            let d = c.d.ok_or_else(|| CliError::Usage("--d is required".into()))?;
            param(&mut p, "n", n);
            param(&mut p, "k", k);
            param(&mut p, "ell", c.ell);
            param(&mut p, "d", d);
            ("gen extremal", extremal_class(*n, *k, c.ell, d, c.cap)?)
        }
        GenKind::Random { n, k, density } => {
            param(&mut p, "n", n);
            param(&mut p, "k", k);
            param(&mut p, "density", density);
            param(&mut p, "seed", c.seed);
            ("gen random", random_class(*n, *k, *density, c.seed, c.cap)?)
        }
    };
    param(&mut p, "cap", c.cap);
    Ok(class_report(name, p, &h, c.format, &[]))
}

fn run_oig(c: &Common, kind: &OigKind) -> Result<Report, CliError> {
    let h = input::read_class(c.input.as_deref())?;
    let mut p = class_params(c, &h);
    match kind {
        OigKind::Stats => {
            let g = build_oig(&h)?;
            let s = degree_stats(&g, c.ell);
            let v = json!({
                "vertices": g.vertex_count(),
                "edges": g.edges().len(),
                "total_excess": g.total_excess(c.ell),
                "avd": s.avd.to_string(),
                "savd": s.savd.to_string(),
                "ell_degrees": s.ell_degrees,
            });
            Ok(Report::new("oig stats", p, v))
        }
        OigKind::Shift { coord } => {
            param(&mut p, "coord", coord);
            let s = shift(&h, *coord)?;
            Ok(class_report("oig shift", p, &s, c.format, &[]))
        }
        OigKind::Fixpoint => {
            let (s, sweeps) = shift_fixed_point(&h);
            let extra = [("sweeps", json!(sweeps)), ("downward_closed", json!(is_downward_closed(&s)))];
            Ok(class_report("oig fixpoint", p, &s, c.format, &extra))
        }
        OigKind::Orient => {
            let g = build_oig(&h)?;
            let o = orient_minmax(&g, c.ell);
            let text = format!("c*: {}\nmax outdegree: {}\n{o}", o.c_star, o.max_outdegree());
            let ok = o.max_outdegree() <= o.c_star;
            Ok(Report::new("oig orient", p, to_value(&o)).text(text).verified(ok))
        }
        OigKind::Density { subset_cap } => {
            param(&mut p, "subset_cap", subset_cap);
            let md = max_density_bruteforce(&h, c.ell, *subset_cap)?;
            let g = build_oig(&h)?;
            let c_star = orient_minmax(&g, c.ell).c_star;
            let ceil = md.ceil().to_integer();
            let v = json!({ "max_density": md.to_string(), "ceil": ceil, "c_star": c_star });
            Ok(Report::new("oig density", p, v).verified(c_star as u64 <= ceil))
        }
    }
}

fn resolve_d(c: &Common, h: &HypothesisClass) -> Result<usize, CliError> {
    let computed = ds_dimension(h, c.ell)?.value;
    match c.d {
        Some(d) if d < computed => {
            Err(CliError::Usage(format!("--d {d} is below the DS dimension {computed} of the class")))
        }
        Some(d) => Ok(d),
        None => Ok(computed),
    }
}

fn run_cert(c: &Common, kind: &CertKind) -> Result<Report, CliError> {
    if let CertKind::Verify = kind {
        let text = input::read_source(c.input.as_deref())?;
        let cert = Certificate::from_json(&text)?;
        let check = verify_certificate(&cert);
        let mut p = Params::new();
        param(&mut p, "input", input_name(c));
        param(&mut p, "n", cert.n);
        param(&mut p, "k", cert.k);
        param(&mut p, "ell", cert.ell);
        param(&mut p, "d", cert.d);
        return Ok(Report::new("cert verify", p, to_value(&check)).verified(check.is_valid()));
    }
    let h = input::read_class(c.input.as_deref())?;
    let d = resolve_d(c, &h)?;
    let mut p = class_params(c, &h);
    param(&mut p, "d", d);
    match kind {
        CertKind::Span => {
            let r = spanning_certificate(&h, c.ell, d, c.cap)?;
            Ok(Report::new("cert span", p, to_value(&r)).verified(r.spans))
        }
        CertKind::Replay => {
            let cert = construct_q(&h, c.ell, d, c.cap)?;
            let ok = verify_certificate(&cert).is_valid();
            let text = cert.to_text();
            let v: Value = serde_json::from_str(&cert.to_json()).expect("certificate JSON");
            Ok(Report::new("cert replay", p, v).text(text).flatten().verified(ok))
        }
        CertKind::Verify => unreachable!(),
    }
}

fn experiment(c: &Common, h: &HypothesisClass, t: &TaskArgs, pac: bool, p: &mut Params) -> Result<ExperimentConfig, CliError> {
    let mut cfg = ExperimentConfig {
        epsilon: t.epsilon,
        delta: t.delta,
        m: t.m.unwrap_or(1),
        trials: t.trials,
        seed: c.seed,
        ell: c.ell,
        ell_prime: t.ell_prime,
    };
    cfg.validate()?;
    cfg.m = match (t.m, pac) {
        (Some(m), _) => m,
        (None, false) => 50,
        // Provider lists never exceed k labels, so planning at max(k, ℓ) covers every draw.
        (None, true) => {
            let d = ds_dimension(h, c.ell)?.value;
            let ell_prime = t.ell_prime.unwrap_or((h.k() as usize).max(c.ell));
            pac_plan(c.ell, d, ell_prime, t.epsilon, t.delta, PacConstants::default()).required
        }
    };
    param(p, "target", t.target);
    param(p, "provider", t.provider.to_possible_value().expect("named").get_name());
    param(p, "epsilon", t.epsilon);
    param(p, "delta", t.delta);
    param(p, "m", cfg.m);
    param(p, "trials", t.trials);
    param(p, "seed", c.seed);
    param(p, "ell_prime", t.ell_prime.map_or("auto".to_string(), |l| l.to_string()));
    let weights = t.weights.clone().unwrap_or_else(|| vec![1.0; h.n()]);
    param(p, "weights", weights.iter().map(f64::to_string).collect::<Vec<_>>().join(";"));
    cfg.validate()?;
    Ok(cfg)
}

fn run_learn(c: &Common, kind: &LearnKind) -> Result<Report, CliError> {
    let h = input::read_class(c.input.as_deref())?;
    let mut p = class_params(c, &h);
    let t = match kind {
        LearnKind::Loo(t) | LearnKind::Pac(t) | LearnKind::Uc(t) => t,
    };
    let cfg = experiment(c, &h, t, matches!(kind, LearnKind::Pac(_)), &mut p)?;
    let weights = t.weights.clone().unwrap_or_else(|| vec![1.0; h.n()]);
    let task = make_task(&h, t.target, &weights, c.seed)?;
    let provider = match t.provider {
        ProviderKind::Full => ListProvider::FullAlphabet,
        ProviderKind::Support => ListProvider::SampleSupport,
    };
    match kind {
        LearnKind::Loo(_) => {
            let r = loo_experiment(&task, &provider, &cfg)?;
            Ok(Report::new("learn loo", p, to_value(&r))
                .table(&LooReport::CSV_HEADER.split(',').collect::<Vec<_>>(), vec![split_csv(&r.to_csv())])
                .verified(r.pass))
        }
        LearnKind::Pac(_) => {
            let s = pac_experiment(&task, &provider, &cfg, PacConstants::default())?;
            Ok(Report::new("learn pac", p, to_value(&s)))
        }
        LearnKind::Uc(_) => {
            let lc = dsbound::dims::ListClass::from_class(&h);
            let r = uc_experiment(&lc, &task, &cfg, c.cap)?;
            Ok(Report::new("learn uc", p, to_value(&r)))
        }
    }
}

fn split_csv(line: &str) -> Vec<String> {
    line.split(',').map(str::to_string).collect()
}

fn sweep_report(name: &str, p: Params, rows: Vec<SweepRow>) -> Report {
    let ok = rows.iter().all(|r| r.holds);
    let violations = rows.iter().filter(|r| !r.holds).count();
    let table: Vec<Vec<String>> = rows.iter().map(|r| split_csv(&r.to_csv())).collect();
    let mut text = format!("{}\n", SweepRow::CSV_HEADER);
    for r in &rows {
        text += &r.to_csv();
        text.push('\n');
    }
    let v = json!({ "classes": rows.len(), "violations": violations, "rows": to_value(&rows) });
    Report::new(name, p, v).text(text).table(&SweepRow::CSV_HEADER.split(',').collect::<Vec<_>>(), table).verified(ok)
}

fn run_sweep(c: &Common, kind: &SweepKind) -> Result<Report, CliError> {
    let mut p = Params::new();
    match kind {
        SweepKind::Exhaustive { n, k } => {
            param(&mut p, "n", n);
            param(&mut p, "k", k);
            param(&mut p, "ell", c.ell);
            let classes = all_nonempty_classes(*n, *k)?;
            Ok(sweep_report("sweep exhaustive", p, sweep(&classes, c.ell)?))
        }
        SweepKind::Random { n, k, count } => {
            param(&mut p, "n", n);
            param(&mut p, "k", k);
            param(&mut p, "ell", c.ell);
            param(&mut p, "count", count);
            param(&mut p, "seed", c.seed);
            param(&mut p, "cap", c.cap);
            let mut classes = Vec::with_capacity(*count);
            let mut i = 0u64;
            while classes.len() < *count {
                let seed = c.seed.wrapping_add(i);
                let density = (seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 11) as f64 / (1u64 << 53) as f64;
                let h = random_class(*n, *k, density.max(1e-3), seed, c.cap)?;
                if !h.is_empty() {
                    classes.push(h);
                }
                i += 1;
                if i > 64 * (*count as u64 + 1) {
                    return Err(CliError::Usage("could not draw enough nonempty classes".into()));
                }
            }
            Ok(sweep_report("sweep random", p, sweep(&classes, c.ell)?))
        }
    }
}

fn run_verify(c: &Common, kind: &VerifyKind) -> Result<Report, CliError> {
    let h = input::read_class(c.input.as_deref())?;
    let mut p = class_params(c, &h);
    match kind {
        VerifyKind::Sauer => {
            if let Some(d) = c.d {
                param(&mut p, "d", d);
            }
            match verify_sauer_at(&h, c.ell, c.d) {
                Ok(r) => {
                    let text = format!(
                        "|H| = {} <= {} at d = {} (DS dimension {}); slack {}; Natarajan-form value {}\n",
                        r.class_size, r.ds_bound, r.d_used, r.ds_dimension, r.slack, r.nat_bound
                    );
                    Ok(Report::new("verify sauer", p, to_value(&r)).text(text).verified(r.holds))
                }
                Err(dsbound::Error::BoundViolated(r)) => {
                    let text = format!("VIOLATED: |H| = {} > {} at d = {}\n", r.class_size, r.ds_bound, r.d_used);
                    Ok(Report::new("verify sauer", p, to_value(&*r)).text(text).verified(false))
                }
                Err(e) => Err(e.into()),
            }
        }
        VerifyKind::Shiftlaws => {
            let mut rows = Vec::new();
            let mut ok = true;
            let (fp, sweeps) = shift_fixed_point(&h);
            let fp_ok = fp.len() == h.len() && is_downward_closed(&fp);
            ok &= fp_ok;
            for ell in 1..h.k() as usize {
                let before_savd = savd(&h, ell)?;
                let before_exp = exponential_dimension(&h, ell)?.value;
                for i in 0..h.n() {
                    let s = shift(&h, i)?;
                    let after_savd = savd(&s, ell)?;
                    let after_exp = exponential_dimension(&s, ell)?.value;
                    let holds = s.len() == h.len() && after_savd >= before_savd && after_exp <= before_exp;
                    ok &= holds;
                    rows.push(vec![
                        ell.to_string(),
                        i.to_string(),
                        before_savd.to_string(),
                        after_savd.to_string(),
                        before_exp.to_string(),
                        after_exp.to_string(),
                        holds.to_string(),
                    ]);
                }
            }
            let header = ["ell", "coord", "savd", "savdShifted", "expDim", "expDimShifted", "holds"];
            let mut text = format!("fixed point after {sweeps} sweeps: size {}, downward closed {}\n", fp.len(), fp_ok);
            text += &header.join(",");
            text.push('\n');
            for r in &rows {
                text += &r.join(",");
                text.push('\n');
            }
            let v = json!({
                "fixed_point_ok": fp_ok,
                "sweeps": sweeps,
                "rows": rows.iter().map(|r| header.iter().zip(r).map(|(k, v)| (k.to_string(), Value::String(v.clone()))).collect::<serde_json::Map<_, _>>()).collect::<Vec<_>>(),
            });
            Ok(Report::new("verify shiftlaws", p, v).text(text).table(&header, rows).verified(ok))
        }
        VerifyKind::Corollary => {
            let de = exponential_dimension(&h, c.ell)?.value;
            let dds = ds_dimension(&h, c.ell)?.value;
            let rhs = 40.0 * c.ell as f64 * dds as f64 * (h.k() as f64).ln().max(1.0);
            let holds = de as f64 <= rhs;
            let v = json!({ "exponential_dimension": de, "ds_dimension": dds, "bound": rhs, "holds": holds });
            Ok(Report::new("verify corollary", p, v).verified(holds))
        }
        VerifyKind::Appendix => {
            let forests = if ds_dimension(&h, 1)?.value <= 1 { Some(appendix_check_all(&h)?) } else { None };
            let peel = if h.n() == 2 { Some(bipartite_peel(&h, c.ell)?) } else { None };
            if forests.is_none() && peel.is_none() {
                return Err(CliError::Usage("appendix checks need DS dimension ≤ 1 (ℓ = 1) or n = 2".into()));
            }
            let mut ok = forests.as_ref().map_or(true, |f| f.iter().all(|r| r.acyclic && r.holds));
            if let Some(pr) = &peel {
                ok &= !pr.success || pr.size_within_bound;
                let empty = dsbound::dims::max_pseudocube_core(&h, c.ell + 1)?.core.is_empty();
                ok &= pr.success == empty;
            }
            let v = json!({ "extension_graphs": to_value(&forests), "bipartite_peel": to_value(&peel) });
            Ok(Report::new("verify appendix", p, v).verified(ok))
        }
    }
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let c = &cli.common;
    match &cli.command {
        Command::Dim { kind } => run_dim(c, *kind),
        Command::Bound { kind, n, k } => run_bound(c, *kind, *n, *k),
        Command::Gen { kind } => run_gen(c, kind),
        Command::Oig { kind } => run_oig(c, kind),
        Command::Cert { kind } => run_cert(c, kind),
        Command::Learn { kind } => run_learn(c, kind),
        Command::Sweep { kind } => run_sweep(c, kind),
        Command::Verify { kind } => run_verify(c, kind),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.common.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.render(cli.common.format));
            if report.verified {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed: {}", report.command);
                ExitCode::from(1)
            }
        }
        Err(CliError::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
