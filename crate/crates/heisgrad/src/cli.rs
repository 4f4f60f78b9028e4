//! Command-line front end. `run` is deterministic and returns the exit code with the report.

use crate::color::{classify_color, fmt_color_vec, is_super_realizable, verify_color_axioms, ColorAlgebraSpec, ColorError, ColorTypeSpec};
use crate::fine::{
    auto_conductor, decompose_twisted_grading, enumerate_fine_twisted, equivalent_fine, fine_twisted, gamma1, gamma2, gamma_hn,
    gamma_super, super_universal_prediction, theorem_universal_group, FineError, FineGrading, FineKind, TwistedParams,
};
use crate::gradings::{fmt_vec, universal_group, verify_grading, GradingError, GradingSpec};
use crate::liealg::random_automorphism;
use crate::scalars::{lcm_u64, Cyclo, CycloCtx, ScalarError, ScalarExpr};
use crate::weyl::{cycle_notation, map_entries, weyl_bruteforce, weyl_group, WeylError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use serde::Deserialize;
use serde_json::{json, Value};
use std::fmt::Write as _;

pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_CAP: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "heisgrad", version, about = "Gradings on Heisenberg algebras, superalgebras and twisted Heisenberg algebras")]
pub struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Cyclotomic conductor N (the field is Q(zeta_N)); chosen automatically when absent
    #[arg(long, global = true)]
    pub conductor: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Selects an algebra family and, where needed, a fine grading on it.
#[derive(Args, Debug, Clone, Default)]
pub struct AlgArgs {
    /// Twisted Heisenberg algebra with spectrum λ, e.g. "1,1,zeta(4),zeta(4)"
    #[arg(long)]
    pub twisted: Option<String>,
    /// Heisenberg algebra H_{2k+1}
    #[arg(long)]
    pub heisenberg: Option<usize>,
    /// Heisenberg superalgebra, "k,m"
    #[arg(long = "super")]
    pub superalg: Option<String>,
    /// Parameters "l,s,r;betas;alphas" of a twisted fine grading, or gamma1 / gamma2
    #[arg(long)]
    pub params: Option<String>,
    /// Number of odd pairs r of the superalgebra fine grading
    #[arg(long)]
    pub r: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a grading (JSON file or inline JSON, or a fine grading from the family flags)
    Verify {
        #[arg(long)]
        input: Option<String>,
        #[command(flatten)]
        alg: AlgArgs,
    },
    /// Universal grading group and the regraded grading
    UniversalGroup {
        #[arg(long)]
        input: Option<String>,
        #[command(flatten)]
        alg: AlgArgs,
    },
    /// Fine gradings up to equivalence
    EnumerateFine {
        #[command(flatten)]
        alg: AlgArgs,
    },
    /// Weyl group of a fine grading
    Weyl {
        #[command(flatten)]
        alg: AlgArgs,
        /// Use the fine grading of the family (the only mode)
        #[arg(long)]
        fine: bool,
        /// Also run the brute-force extendability search
        #[arg(long)]
        bruteforce: bool,
        /// Largest support size for the brute-force search
        #[arg(long, default_value_t = 12)]
        cap: usize,
    },
    /// Recover the block parameters of a fine grading on a twisted Heisenberg algebra
    Decompose {
        #[arg(long)]
        input: Option<String>,
        #[command(flatten)]
        alg: AlgArgs,
        /// Transport the grading by a random automorphism with this seed first
        #[arg(long)]
        scramble: Option<u64>,
    },
    /// Standard form (G, g0, ε) of a Heisenberg color algebra
    ColorClassify {
        #[arg(long)]
        input: String,
    },
}

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Validation(String, Value),
    Cap(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Validation(..) => EXIT_VALIDATION,
            CliError::Cap(_) => EXIT_CAP,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Validation(..) => "validation",
            CliError::Cap(_) => "cap",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Validation(m, _) | CliError::Cap(m) => m,
        }
    }
}

fn invalid(m: impl ToString) -> CliError {
    CliError::Validation(m.to_string(), Value::Null)
}

impl From<ScalarError> for CliError {
    fn from(e: ScalarError) -> Self {
        match e {
            ScalarError::Parse { .. } => CliError::Parse(e.to_string()),
            _ => invalid(e),
        }
    }
}

impl From<FineError> for CliError {
    fn from(e: FineError) -> Self {
        match e {
            FineError::Params(m) => CliError::Parse(m),
            FineError::Scalar(s) => s.into(),
            _ => invalid(e),
        }
    }
}

impl From<GradingError> for CliError {
    fn from(e: GradingError) -> Self {
        let w = match &e {
            GradingError::Bracket { g, h, sum, i, j, witness } => json!({"g": g, "h": h, "expected_degree": sum, "i": i, "j": j, "bracket": witness}),
            _ => Value::Null,
        };
        CliError::Validation(e.to_string(), w)
    }
}

impl From<WeylError> for CliError {
    fn from(e: WeylError) -> Self {
        match e {
            WeylError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            WeylError::Fine(f) => f.into(),
            _ => invalid(e),
        }
    }
}

impl From<ColorError> for CliError {
    fn from(e: ColorError) -> Self {
        match e {
            ColorError::Scalar(s) => s.into(),
            ColorError::Group(g) => CliError::Parse(g.to_string()),
            _ => invalid(e),
        }
    }
}

/// Report in both renderings.
pub struct Report {
    pub text: String,
    pub json: Value,
}

/// Parses the arguments (first entry is the program name) and runs the job.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => EXIT_PARSE,
            };
            return (code, e.to_string());
        }
    };
    let format = cli.format;
    match execute(&cli) {
        Ok(r) => (0, render(format, &r)),
        Err(e) => {
            let r = Report {
                text: match &e {
                    CliError::Validation(m, w) if !w.is_null() => format!("error ({}): {}\nwitness: {}\n", e.kind(), m, w),
                    _ => format!("error ({}): {}\n", e.kind(), e.message()),
                },
                json: json!({"error": {"kind": e.kind(), "message": e.message(), "witness": match &e { CliError::Validation(_, w) => w.clone(), _ => Value::Null }}}),
            };
            (e.code(), render(format, &r))
        }
    }
}

fn render(format: Format, r: &Report) -> String {
    match format {
        Format::Text => r.text.clone(),
        Format::Json => serde_json::to_string_pretty(&r.json).unwrap() + "\n",
    }
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Verify { input, alg } => cmd_verify(cli, input.as_deref(), alg),
        Command::UniversalGroup { input, alg } => cmd_universal(cli, input.as_deref(), alg),
        Command::EnumerateFine { alg } => cmd_enumerate(cli, alg),
        Command::Weyl { alg, bruteforce, cap, .. } => cmd_weyl(cli, alg, *bruteforce, *cap),
        Command::Decompose { input, alg, scramble } => cmd_decompose(cli, input.as_deref(), alg, *scramble),
        Command::ColorClassify { input } => cmd_color(cli, input),
    }
}

fn read_input(input: &str) -> Result<String, CliError> {
    let t = input.trim_start();
    if t.starts_with('{') {
        Ok(input.to_string())
    } else {
        std::fs::read_to_string(input).map_err(|e| CliError::Parse(format!("cannot read {input}: {e}")))
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(input: &str) -> Result<T, CliError> {
    serde_json::from_str(&read_input(input)?).map_err(|e| CliError::Parse(format!("invalid JSON: {e}")))
}

fn make_ctx(cli: &Cli, need: u64) -> Result<CycloCtx, CliError> {
    let n = match cli.conductor {
        Some(n) => {
            if n % need != 0 {
                return Err(invalid(format!("conductor {n} cannot hold the scalars (need a multiple of {need})")));
            }
            n
        }
        None => lcm_u64(8, need),
    };
    Ok(CycloCtx::new(n)?)
}

fn parse_lambda(s: &str) -> Result<Vec<ScalarExpr>, CliError> {
    s.split(',').map(|x| ScalarExpr::parse(x.trim()).map_err(CliError::from)).collect()
}

fn parse_km(s: &str) -> Result<(usize, usize), CliError> {
    let v: Vec<&str> = s.split(',').collect();
    if v.len() != 2 {
        return Err(CliError::Parse(format!("--super expects k,m, got '{s}'")));
    }
    let p = |x: &str| x.trim().parse::<usize>().map_err(|_| CliError::Parse(format!("bad number '{x}'")));
    Ok((p(v[0])?, p(v[1])?))
}

/// Field and λ for a twisted job, with the conductor large enough for the params too.
fn twisted_setup(cli: &Cli, lam: &str, params: Option<&str>) -> Result<(CycloCtx, Vec<Cyclo>), CliError> {
    let exprs = parse_lambda(lam)?;
    let mut extra = 1u64;
    if let Some(p) = params {
        if !is_named(p) {
            let (_, b, a) = TwistedParams::parse_exprs(p)?;
            for e in b.iter().chain(&a) {
                extra = lcm_u64(extra, e.required_conductor());
            }
        }
    }
    let need = auto_conductor(&exprs, extra);
    let ctx = match cli.conductor {
        Some(n) => {
            let min = exprs.iter().fold(extra, |a, e| lcm_u64(a, e.required_conductor()));
            if n % lcm_u64(min, 4) != 0 {
                return Err(invalid(format!("conductor {n} cannot hold the scalars (need a multiple of {})", lcm_u64(min, 4))));
            }
            CycloCtx::new(n)?
        }
        None => CycloCtx::new(need)?,
    };
    let lambda = exprs.iter().map(|e| e.eval(&ctx)).collect::<Result<Vec<_>, _>>()?;
    if lambda.iter().any(|x| x.is_zero()) {
        return Err(invalid("twisted parameters must be nonzero"));
    }
    Ok((ctx, lambda))
}

fn is_named(p: &str) -> bool {
    matches!(p.trim(), "gamma1" | "gamma2")
}

/// Fine grading selected by the family flags.
fn fine_from_args(cli: &Cli, a: &AlgArgs) -> Result<FineGrading, CliError> {
    let chosen = [a.twisted.is_some(), a.heisenberg.is_some(), a.superalg.is_some()].iter().filter(|x| **x).count();
    if chosen != 1 {
        return Err(CliError::Parse("give exactly one of --twisted, --heisenberg, --super".into()));
    }
    if let Some(k) = a.heisenberg {
        let ctx = make_ctx(cli, 1)?;
        return Ok(gamma_hn(k, &ctx)?);
    }
    if let Some(km) = &a.superalg {
        let (k, m) = parse_km(km)?;
        let ctx = make_ctx(cli, 4)?;
        return Ok(gamma_super(k, m, a.r.unwrap_or(0), &ctx)?);
    }
    let lam = a.twisted.as_ref().unwrap();
    let p = a.params.as_deref().ok_or_else(|| CliError::Parse("--twisted needs --params (or gamma1 / gamma2)".into()))?;
    let (ctx, lambda) = twisted_setup(cli, lam, Some(p))?;
    Ok(match p.trim() {
        "gamma1" => gamma1(&lambda)?,
        "gamma2" => gamma2(&lambda)?,
        _ => fine_twisted(&lambda, &TwistedParams::parse(p, &ctx)?)?,
    })
}

fn grading_from(cli: &Cli, input: Option<&str>, a: &AlgArgs) -> Result<(crate::gradings::Grading, Option<FineGrading>), CliError> {
    match input {
        Some(i) => {
            let spec: GradingSpec = parse_json(i)?;
            let need = spec.required_conductor().map_err(|e| CliError::Parse(e.to_string()))?;
            let ctx = make_ctx(cli, need)?;
            Ok((spec.build(&ctx)?, None))
        }
        None => {
            let fg = fine_from_args(cli, a)?;
            Ok((fg.grading.clone(), Some(fg)))
        }
    }
}

fn kind_label(fg: &FineGrading) -> String {
    match &fg.kind {
        FineKind::Heisenberg { k } => format!("Cartan grading on H_{}", 2 * k + 1),
        FineKind::Super { k, m, r } => format!("fine grading r={} on H_{{{},{}}}", r, 2 * k + 1, m),
        FineKind::Twisted { params, .. } => format!("fine grading ({}) on the twisted Heisenberg algebra", params),
    }
}

fn cmd_verify(cli: &Cli, input: Option<&str>, a: &AlgArgs) -> Result<Report, CliError> {
    let (gr, _) = grading_from(cli, input, a)?;
    gr.algebra.verify_axioms().map_err(|e| invalid(format!("algebra axioms: {e}")))?;
    verify_grading(&gr)?;
    let dims: Vec<usize> = gr.dims();
    let text = format!(
        "valid grading\ngroup: {}\nsupport size: {}\ncomponent dimensions: {:?}\ntype: {:?}\n",
        gr.group,
        gr.support().len(),
        dims,
        gr.grading_type()
    );
    let json = json!({"valid": true, "group": gr.group.to_string(), "support_size": gr.support().len(), "dims": dims, "type": gr.grading_type()});
    Ok(Report { text, json })
}

fn cmd_universal(cli: &Cli, input: Option<&str>, a: &AlgArgs) -> Result<Report, CliError> {
    let (gr, fg) = grading_from(cli, input, a)?;
    verify_grading(&gr)?;
    let u = universal_group(&gr)?;
    let mut text = format!("universal group: {}\nrelations: {}\n", u.group, u.relations.len());
    let mut json = json!({
        "universal_group": u.group.to_string(),
        "relations": u.relations.len(),
        "degree_map": u.degree_map.iter().map(|(a, b)| json!({"from": a.coords(), "to": b.coords()})).collect::<Vec<_>>(),
        "grading": serde_json::to_value(GradingSpec::from_grading(&u.grading)).unwrap(),
    });
    if let Some(FineKind::Twisted { params, .. }) = fg.as_ref().map(|f| &f.kind) {
        let t = theorem_universal_group(params.l, params.s, params.r);
        let _ = writeln!(text, "predicted: {}  match: {}", t, t.is_isomorphic(&u.group));
        json["predicted"] = json!(t.to_string());
        json["matches_prediction"] = json!(t.is_isomorphic(&u.group));
    }
    if let Some(FineKind::Super { k, m, r }) = fg.as_ref().map(|f| &f.kind) {
        let t = super_universal_prediction(*k, *m, *r);
        let _ = writeln!(text, "predicted: {}  match: {}", t, t.is_isomorphic(&u.group));
        json["predicted"] = json!(t.to_string());
        json["matches_prediction"] = json!(t.is_isomorphic(&u.group));
    }
    text += "degrees:\n";
    for (from, to) in &u.degree_map {
        let _ = writeln!(text, "  {} -> {}", from, to);
    }
    Ok(Report { text, json })
}

fn cmd_enumerate(cli: &Cli, a: &AlgArgs) -> Result<Report, CliError> {
    if let Some(k) = a.heisenberg {
        let ctx = make_ctx(cli, 1)?;
        let fg = gamma_hn(k, &ctx)?;
        let u = universal_group(&fg.grading)?;
        let text = format!("H_{}: 1 fine grading up to equivalence\n  Cartan grading, universal group {}\n", 2 * k + 1, u.group);
        let json = json!({"algebra": format!("H_{}", 2 * k + 1), "class_count": 1, "classes": [{"name": "cartan", "universal_group": u.group.to_string()}]});
        return Ok(Report { text, json });
    }
    if let Some(km) = &a.superalg {
        let (k, m) = parse_km(km)?;
        let ctx = make_ctx(cli, 4)?;
        let mut text = format!("H_{{{},{}}}: {} fine gradings up to equivalence\n", 2 * k + 1, m, m / 2 + 1);
        let mut classes = Vec::new();
        for r in 0..=m / 2 {
            let fg = gamma_super(k, m, r, &ctx)?;
            let u = universal_group(&fg.grading)?;
            let pred = super_universal_prediction(k, m, r);
            let _ = writeln!(text, "  r={}: universal group {} (predicted {})", r, u.group, pred);
            classes.push(json!({"r": r, "universal_group": u.group.to_string(), "predicted": pred.to_string(), "matches_prediction": pred.is_isomorphic(&u.group)}));
        }
        let json = json!({"algebra": format!("H_{{{},{}}}", 2 * k + 1, m), "class_count": m / 2 + 1, "classes": classes});
        return Ok(Report { text, json });
    }
    let lam = a.twisted.as_ref().ok_or_else(|| CliError::Parse("give one of --twisted, --heisenberg, --super".into()))?;
    let (ctx, lambda) = twisted_setup(cli, lam, None)?;
    let en = enumerate_fine_twisted(&lambda)?;
    let mut text = format!("lambda = ({})  conductor {}\nshapes:\n", lambda.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "), ctx.conductor());
    let mut shapes = Vec::new();
    for s in &en.shapes {
        let _ = writeln!(text, "  l={} s={} r={}: {} candidate(s){}", s.l, s.s, s.r, s.candidates, if s.note.is_empty() { String::new() } else { format!(" ({})", s.note) });
        shapes.push(json!({"l": s.l, "s": s.s, "r": s.r, "candidates": s.candidates, "note": s.note}));
    }
    let mut classes = Vec::new();
    let _ = writeln!(text, "{} candidate(s), {} class(es) up to equivalence:", en.candidates.len(), en.classes.len());
    for (i, p) in en.classes.iter().enumerate() {
        let fg = fine_twisted(&lambda, p)?;
        let u = universal_group(&fg.grading)?;
        let t = theorem_universal_group(p.l, p.s, p.r);
        let members: Vec<String> = en.candidates.iter().zip(&en.class_of).filter(|(_, c)| **c == i).map(|(q, _)| q.to_string()).collect();
        let _ = writeln!(text, "  [{}] {}  universal group {}  (predicted {})", i + 1, p, u.group, t);
        if members.len() > 1 {
            let _ = writeln!(text, "      equivalent candidates: {}", members.join(" | "));
        }
        classes.push(json!({"params": p.to_string(), "universal_group": u.group.to_string(), "predicted": t.to_string(), "matches_prediction": t.is_isomorphic(&u.group), "members": members}));
    }
    let json = json!({
        "lambda": lambda.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "conductor": ctx.conductor(),
        "shapes": shapes,
        "candidate_count": en.candidates.len(),
        "class_count": en.classes.len(),
        "classes": classes,
    });
    Ok(Report { text, json })
}

fn cmd_weyl(cli: &Cli, a: &AlgArgs, bruteforce: bool, cap: usize) -> Result<Report, CliError> {
    let fg = fine_from_args(cli, a)?;
    if bruteforce && fg.basis.len() > cap {
        return Err(CliError::Cap(WeylError::CapExceeded { size: fg.basis.len(), cap }.to_string()));
    }
    let rep = weyl_group(&fg)?;
    let alg = rep.grading.algebra().clone();
    let info = rep.group.info();
    let mut text = format!("{}\n", kind_label(&rep.grading));
    if let FineKind::Twisted { params, .. } = &fg.kind {
        if let FineKind::Twisted { params: p2, .. } = &rep.grading.kind {
            if p2 != params {
                let _ = writeln!(text, "blocks reordered as ({}) to layer them for g_p", p2);
            }
        }
    }
    let mut gens = Vec::new();
    text += "generators:\n";
    for g in &rep.generators {
        let cyc = cycle_notation(&g.perm, &rep.component_names);
        let m = map_entries(&alg, &g.map);
        let _ = writeln!(text, "  {}: {}{}", g.name, cyc, if g.pattern_adjusted { "  [block pattern adjusted]" } else if g.repaired { "  [scalars re-solved]" } else { "" });
        for (l, img) in &m {
            let _ = writeln!(text, "      {} -> {}", l, img);
        }
        gens.push(json!({"name": g.name, "cycles": cyc, "map": m, "repaired": g.repaired, "pattern_adjusted": g.pattern_adjusted}));
    }
    let _ = writeln!(text, "closure order: {}", rep.group.order());
    let _ = writeln!(text, "formula order: {}{}", rep.formula, if rep.agree { "" } else { "  [DISAGREES with closure]" });
    if rep.formula_corrected != rep.formula {
        let _ = writeln!(text, "formula with the full class symmetry: {}", rep.formula_corrected);
    }
    let _ = writeln!(text, "structure: {}", info.describe());
    let mut json = json!({
        "grading": kind_label(&rep.grading),
        "generators": gens,
        "closure_order": rep.group.order(),
        "formula_order": rep.formula,
        "formula_corrected": rep.formula_corrected,
        "agree": rep.agree,
        "structure": {
            "abelian": info.abelian, "exponent": info.exponent, "involutions": info.involutions,
            "center_order": info.center_order, "abelianization_order": info.order / info.derived_order,
            "dihedral": info.dihedral, "elementary_abelian": info.elementary_abelian,
        },
    });
    if let Some(pq) = &rep.pq {
        let _ = writeln!(text, "p = {}, q = {}, epsilon = {}", pq.p, pq.q, pq.eps);
        json["pq"] = json!({"p": pq.p, "q": pq.q, "epsilon": pq.eps.to_string()});
    }
    if bruteforce {
        let bf = weyl_bruteforce(&rep.grading, cap)?;
        let sub = crate::weyl::missing(&rep.group, &bf).is_empty();
        let _ = writeln!(text, "brute-force order: {}  closure contained: {}  equal: {}", bf.order(), sub, sub && bf.order() == rep.group.order());
        json["bruteforce"] = json!({"order": bf.order(), "closure_contained": sub, "equal": sub && bf.order() == rep.group.order()});
    }
    Ok(Report { text, json })
}

fn cmd_decompose(cli: &Cli, input: Option<&str>, a: &AlgArgs, scramble: Option<u64>) -> Result<Report, CliError> {
    let (mut gr, fg) = grading_from(cli, input, a)?;
    verify_grading(&gr)?;
    if let Some(seed) = scramble {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let f = random_automorphism(&gr.algebra, &mut rng, 2);
        gr = gr.transport(&f);
    }
    let d = decompose_twisted_grading(&gr)?;
    let alg = gr.algebra.clone();
    let mut text = format!("recovered parameters: {}\nu' = {}\n", d.params, fmt_vec(&alg, &d.u_prime));
    let mut json = json!({"params": d.params.to_string(), "u_prime": fmt_vec(&alg, &d.u_prime), "blocks": d.blocks.len()});
    for (i, b) in d.blocks.iter().enumerate() {
        let _ = writeln!(text, "  block {} ({}), parameter {}", i + 1, if b.type_ii { "type II" } else { "type I" }, b.param);
    }
    if let Some(FineKind::Twisted { params, .. }) = fg.as_ref().map(|f| &f.kind) {
        let eq = equivalent_fine(params, &d.params).is_some();
        let _ = writeln!(text, "input parameters: {}  equivalent: {}", params, eq);
        json["input_params"] = json!(params.to_string());
        json["equivalent_to_input"] = json!(eq);
    }
    Ok(Report { text, json })
}

/// Input of `color-classify`: a type or an algebra in any homogeneous basis.
#[derive(Deserialize)]
struct ColorInput {
    #[serde(rename = "type")]
    color_type: Option<ColorTypeSpec>,
    algebra: Option<ColorAlgebraSpec>,
}

fn cmd_color(cli: &Cli, input: &str) -> Result<Report, CliError> {
    let ci: ColorInput = parse_json(input)?;
    let alg = match (ci.color_type, ci.algebra) {
        (Some(t), None) => {
            let ctx = make_ctx(cli, t.required_conductor()?)?;
            crate::color::color_algebra(&t.build(&ctx)?)?.0
        }
        (None, Some(a)) => {
            let ctx = make_ctx(cli, a.required_conductor()?)?;
            a.build(&ctx)?
        }
        _ => return Err(CliError::Parse("give exactly one of \"type\" or \"algebra\"".into())),
    };
    let axioms = verify_color_axioms(&alg);
    if !axioms.pass() {
        return Err(CliError::Validation("color axioms fail".into(), serde_json::to_value(&axioms).unwrap()));
    }
    let c = classify_color(&alg)?;
    let t = &c.color_type;
    let spec = ColorTypeSpec::from_type(t);
    let split = is_super_realizable(t);
    let mut text = format!("group (generated by the support): {}\ng0 = {}\n", t.group, t.g0);
    if c.normalized {
        let _ = writeln!(text, "degrees rewritten in generators of the subgroup of {} generated by the support", alg.group);
    }
    text += "dimensions:\n";
    for (g, d) in &t.dims {
        let _ = writeln!(text, "  {} : {}", g, d);
    }
    text += "epsilon on generators:\n";
    for row in t.epsilon.values() {
        let _ = writeln!(text, "  {}", row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("  "));
    }
    match &split {
        Some(s) => {
            let _ = writeln!(
                text,
                "graded Heisenberg superalgebra: even degrees {}, odd degrees {}",
                s.even.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(" "),
                s.odd.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(" ")
            );
        }
        None => text += "not a graded Heisenberg superalgebra\n",
    }
    text += "standard basis:\n";
    let labels = |v: &crate::linalg::Vect| fmt_color_vec(&alg, v);
    let mut basis = Vec::new();
    for (r, v) in c.roles.iter().zip(&c.basis) {
        let _ = writeln!(text, "  {} = {}", r, labels(v));
        basis.push(json!({"role": r.to_string(), "vector": labels(v)}));
    }
    let json = json!({
        "type": serde_json::to_value(&spec).unwrap(),
        "normalized": c.normalized,
        "super_realizable": split.as_ref().map(|s| json!({"even": s.even.iter().map(|g| g.coords().to_vec()).collect::<Vec<_>>(), "odd": s.odd.iter().map(|g| g.coords().to_vec()).collect::<Vec<_>>()})),
        "standard_basis": basis,
    });
    Ok(Report { text, json })
}
