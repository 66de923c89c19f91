//! Executes a [`JobSpec`], writing text or json-lines records.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::Serialize;

use ncycle::arith::divisors;
use ncycle::constructor::{cyclotomic_construct, GSpec};
use ncycle::families::{
    family_char3, family_even_q, family_v_trinomial, index2_binomial, index3_trinomial, lifted_family,
    v_trinomial_congruence_failures, BinomialParams, FamilyName, GShape, LiftedFamily, LowIndexOutcome, TrinomialParams,
};
use ncycle::report::{verify_form, verify_poly, Report, FULL_ORACLE_LIMIT};
use ncycle::search::{search, SearchSpec, SearchSummary};
use ncycle::{to_table, CycleStructure, Elem, FieldCtx, FieldSpec, IndexForm, SparsePoly};

use crate::job::{Command, ConstructArgs, FamilyArgs, FieldArgs, Format, JobSpec, Param, SearchArgs};

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Verified = 0,
    Rejected = 1,
    InputError = 2,
    BudgetExceeded = 3,
}

impl Status {
    pub fn code(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    /// A family or construction precondition failed; this is a verdict, not bad input.
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn status(&self) -> Status {
        match self {
            CliError::Precondition(_) => Status::Rejected,
            _ => Status::InputError,
        }
    }
}

impl From<ncycle::Error> for CliError {
    fn from(e: ncycle::Error) -> Self {
        match e {
            ncycle::Error::Precondition(msg) => CliError::Precondition(msg),
            other => CliError::Input(other.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Serialize)]
struct NoteRecord<'a> {
    note: &'a str,
}

#[derive(Serialize)]
struct CyclesRecord {
    field: String,
    modulus: String,
    beta: Elem,
    poly: String,
    permutation: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    cycles: Option<CycleStructure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_order: Option<u128>,
}

#[derive(Serialize)]
struct ConstructRecord<'a> {
    sigma: String,
    mvec: String,
    r: u64,
    h: String,
    valid: bool,
    issues: &'a [String],
    #[serde(flatten)]
    report: &'a Report,
}

#[derive(Serialize)]
struct FamilyRecord<'a> {
    family: String,
    params: &'a BTreeMap<String, String>,
    h: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    shape: Option<GShape>,
    #[serde(skip_serializing_if = "Option::is_none")]
    disjuncts: Option<&'a [bool]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    family_verdict: Option<bool>,
    #[serde(flatten)]
    report: &'a Report,
}

#[derive(Serialize)]
struct SummaryRecord<'a> {
    summary: &'a SearchSummary,
}

#[derive(Serialize)]
struct InfoRecord {
    field: String,
    modulus: String,
    beta: Elem,
    p: u64,
    m: usize,
    order: u64,
    full_oracle: bool,
    /// Divisors of q - 1, i.e. the possible indices ell.
    indices: Vec<u64>,
}

/// Serializes records in the selected format.
pub struct Sink<'a> {
    out: &'a mut (dyn Write + Send),
    format: Format,
}

impl<'a> Sink<'a> {
    pub fn new(out: &'a mut (dyn Write + Send), format: Format) -> Self {
        Sink { out, format }
    }

    fn emit<T: Serialize>(&mut self, record: &T, text: impl FnOnce() -> String) -> io::Result<()> {
        match self.format {
            Format::Jsonl => {
                serde_json::to_writer(&mut *self.out, record)?;
                writeln!(self.out)
            }
            Format::Text => writeln!(self.out, "{}", text()),
        }
    }

    fn note(&mut self, note: &str) -> io::Result<()> {
        self.emit(&NoteRecord { note }, || format!("NOTE: {note}"))
    }
}

fn field_ctx(field: &str, modulus: Option<&str>) -> Result<FieldCtx> {
    let mut spec: FieldSpec = field.parse()?;
    if let Some(m) = modulus {
        spec = spec.with_modulus_text(m)?;
    }
    Ok(spec.build()?)
}

fn field_of(args: &FieldArgs) -> Result<FieldCtx> {
    field_ctx(&args.field, args.modulus.as_deref())
}

fn status_of(passed: bool) -> Status {
    if passed {
        Status::Verified
    } else {
        Status::Rejected
    }
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Multi-line text rendering of a report.
pub fn render_report(rep: &Report) -> String {
    let mut lines = vec![
        format!("field:       GF({}) modulus [{}] beta = {}", rep.field, rep.modulus, rep.beta),
        format!("poly:        {}", rep.poly),
    ];
    if let Some(f) = &rep.index_form {
        lines.push(format!("index form:  r = {}, s = {}, ell = {}", f.r, f.s, f.h.len()));
    }
    lines.push(format!("permutation: {}", if rep.permutation { "yes" } else { "no (not a permutation)" }));
    if let Some(c) = &rep.criterion {
        let mut s = format!("criterion:   {}", verdict(c.passed));
        if let Some(k) = c.failure_kind {
            s.push_str(&format!(" ({k:?})"));
        }
        if let Some(w) = c.witness {
            s.push_str(&format!(" witness {w}"));
        }
        lines.push(s);
    }
    let mode = match rep.oracle.mode {
        ncycle::report::OracleMode::Full => "full",
        ncycle::report::OracleMode::Subgroup => "subgroup",
    };
    lines.push(format!("oracle:      {} ({mode})", verdict(rep.oracle.passed)));
    if let Some(c) = &rep.cycles {
        lines.push(format!("cycles:      {c}"));
    }
    if let Some(k) = rep.min_order {
        lines.push(format!("min order:   {k}"));
    }
    lines.push(format!("{}-cycle:     {}", rep.n, verdict(rep.passed())));
    lines.join("\n")
}

/// Runs `job`, writing records to `out`.
pub fn run(job: &JobSpec, out: &mut (dyn Write + Send)) -> Result<Status> {
    let mut sink = Sink::new(out, job.format);
    match &job.command {
        Command::Verify(v) => {
            let ctx = field_of(&v.field)?;
            let f = SparsePoly::parse(&v.poly, &ctx)?;
            let rep = verify_poly(&f, v.n, &ctx)?;
            sink.emit(&rep, || render_report(&rep))?;
            Ok(status_of(rep.passed()))
        }
        Command::Cycles(c) => {
            let ctx = field_of(&c.field)?;
            let f = SparsePoly::parse(&c.poly, &ctx)?.normalized(&ctx);
            let table = to_table(&f, &ctx)?;
            let permutation = table.is_bijective();
            let cycles = if permutation { Some(table.cycle_structure()?) } else { None };
            let min_order = cycles.as_ref().map(|c| c.lcm()).transpose()?;
            let rec = CyclesRecord {
                field: ctx.spec().to_string(),
                modulus: ctx.modulus_text(),
                beta: ctx.beta(),
                poly: f.to_string(),
                permutation,
                cycles,
                min_order,
            };
            sink.emit(&rec, || match (&rec.cycles, rec.min_order) {
                (Some(c), Some(k)) => format!("{}: cycles {c}, min order {k}", rec.poly),
                _ => format!("{}: not a permutation", rec.poly),
            })?;
            Ok(status_of(permutation))
        }
        Command::Construct(c) => construct(c, &mut sink),
        Command::Family(f) => family(f, &mut sink),
        Command::Search(s) => run_search(s, &mut sink),
        Command::Info(f) => {
            let ctx = field_of(f)?;
            let rec = InfoRecord {
                field: ctx.spec().to_string(),
                modulus: ctx.modulus_text(),
                beta: ctx.beta(),
                p: ctx.characteristic(),
                m: ctx.degree(),
                order: ctx.order(),
                full_oracle: ctx.order() <= FULL_ORACLE_LIMIT,
                indices: divisors(ctx.group_order()),
            };
            sink.emit(&rec, || {
                format!(
                    "GF({}) of order {}\nmodulus [{}] (low to high)\nbeta = {}\noracle: {}\nindices ell | q - 1: {:?}",
                    rec.field,
                    rec.order,
                    rec.modulus,
                    rec.beta,
                    if rec.full_oracle { "full table" } else { "subgroup criterion plus sampling" },
                    rec.indices
                )
            })?;
            Ok(Status::Verified)
        }
    }
}

fn construct(c: &ConstructArgs, sink: &mut Sink) -> Result<Status> {
    let ctx = field_of(&c.field)?;
    let spec = GSpec::parse(&c.sigma, &c.mvec)?;
    let built = cyclotomic_construct(&spec, c.r, c.n, &ctx)?;
    let rep = verify_form(&built.form, c.n, &ctx)?;
    let rec = ConstructRecord {
        sigma: spec.sigma_text(),
        mvec: spec.mvec_text(),
        r: c.r,
        h: built.form.h_poly().to_string(),
        valid: built.valid,
        issues: &built.issues,
        report: &rep,
    };
    sink.emit(&rec, || {
        let mut s = format!("{spec}, r = {}\nh:           {}\n{}", c.r, rec.h, render_report(&rep));
        for issue in &built.issues {
            s.push_str(&format!("\nissue:       {issue}"));
        }
        s
    })?;
    Ok(status_of(built.valid && rep.passed()))
}

/// `--param` values keyed by name, with unknown keys rejected.
struct Params(BTreeMap<String, String>);

impl Params {
    fn new(list: &[Param], allowed: &[&str]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for p in list {
            if !allowed.contains(&p.key.as_str()) {
                return Err(CliError::Input(format!("unknown parameter {:?} (expected one of {allowed:?})", p.key)));
            }
            if map.insert(p.key.clone(), p.value.clone()).is_some() {
                return Err(CliError::Input(format!("parameter {:?} given twice", p.key)));
            }
        }
        Ok(Params(map))
    }

    fn int(&mut self, key: &str, default: Option<u64>) -> Result<u64> {
        match self.0.get(key) {
            Some(v) => v.parse().map_err(|_| CliError::Input(format!("parameter {key} = {v:?} is not an integer"))),
            None => {
                let d = default.ok_or_else(|| CliError::Input(format!("missing parameter {key}")))?;
                self.0.insert(key.to_string(), d.to_string());
                Ok(d)
            }
        }
    }

    fn elem(&mut self, key: &str, ctx: &FieldCtx) -> Result<Elem> {
        let e = self.int(key, None)?;
        Ok(ctx.elem(e)?)
    }
}

fn family_name(name: &str, p: &mut Params) -> Result<FamilyName> {
    Ok(match name {
        "char3-quad" => FamilyName::Char3Quad { q: p.int("q", Some(3))? },
        "even-q-tri" => FamilyName::EvenQTri { q: p.int("q", None)?, a: p.int("a", None)? },
        "v-tri" => FamilyName::VTri { q: p.int("q", None)?, a: p.int("a", None)?, v: p.int("v", None)? },
        "idx2-binomial" => FamilyName::Idx2Binomial,
        "idx3-trinomial" => FamilyName::Idx3Trinomial,
        "lift-char3" => FamilyName::LiftChar3 { q: p.int("q", Some(3))? },
        "lift-even-q" => FamilyName::LiftEvenQ { q: p.int("q", None)?, a: p.int("a", None)? },
        other => {
            return Err(CliError::Input(format!("unknown family {other:?}; known: {}", FamilyName::NAMES.join(", "))))
        }
    })
}

fn allowed_params(name: &str) -> &'static [&'static str] {
    match name {
        "char3-quad" | "lift-char3" => &["q"],
        "even-q-tri" | "lift-even-q" => &["q", "a"],
        "v-tri" => &["q", "a", "v"],
        "idx2-binomial" => &["a", "b", "r"],
        "idx3-trinomial" => &["a", "b", "c", "r"],
        _ => &[],
    }
}

/// Field of a fixed-field family, honouring `--modulus` and checking `--field`.
fn family_field(which: &FamilyName, args: &FamilyArgs) -> Result<FieldCtx> {
    let (p, m) = which
        .field()
        .ok_or_else(|| CliError::Input(format!("family {which} needs --field")))?;
    let derived = format!("{p}^{m}");
    if let Some(f) = &args.field {
        let given: FieldSpec = f.parse()?;
        if (given.p, given.m) != (p, m) {
            return Err(CliError::Input(format!("family {which} lives in GF({derived}), not GF({given})")));
        }
    }
    field_ctx(&derived, args.modulus.as_deref())
}

fn family(args: &FamilyArgs, sink: &mut Sink) -> Result<Status> {
    let mut params = Params::new(&args.params, allowed_params(&args.family))?;
    let which = family_name(&args.family, &mut params)?;
    let n = args.n.unwrap_or(3);
    if which.field().is_some() && args.n.is_some_and(|k| k != 3) {
        return Err(CliError::Input(format!("family {which} produces triple-cycles; --n must be 3")));
    }
    let mut notes = Vec::new();
    let mut low: Option<LowIndexOutcome> = None;
    let (form, ctx): (IndexForm, FieldCtx) = match which {
        FamilyName::Char3Quad { q } => {
            let ctx = family_field(&which, args)?;
            let form = family_char3(q, &ctx)?;
            if q == 3 {
                notes.push(char3_variant_note(&form, &ctx)?);
            }
            (form, ctx)
        }
        FamilyName::EvenQTri { q, a } => {
            let ctx = family_field(&which, args)?;
            (family_even_q(q, a, &ctx)?, ctx)
        }
        FamilyName::VTri { q, a, v } => {
            let ctx = family_field(&which, args)?;
            let form = family_v_trinomial(q, a, v, &ctx)?;
            let cong = v_trinomial_congruence_failures(q, a, v);
            if !cong.is_empty() {
                notes.push(format!(
                    "sufficient congruences not all met ({}); the product condition holds directly",
                    cong.join("; ")
                ));
            }
            (form, ctx)
        }
        FamilyName::Idx2Binomial | FamilyName::Idx3Trinomial => {
            let field = args.field.as_deref().ok_or_else(|| CliError::Input(format!("family {which} needs --field")))?;
            let ctx = field_ctx(field, args.modulus.as_deref())?;
            let (a, b, r) = (params.elem("a", &ctx)?, params.elem("b", &ctx)?, params.int("r", Some(1))?);
            let out = if which == FamilyName::Idx2Binomial {
                index2_binomial(&BinomialParams { a, b, r, n }, &ctx)?
            } else {
                let c = params.elem("c", &ctx)?;
                index3_trinomial(&TrinomialParams { a, b, c, r, n }, &ctx)?
            };
            if !out.exact {
                notes.push(format!("closed form is sufficient only for n = {n}; the oracle decides"));
            }
            let form = out.form.clone();
            low = Some(out);
            (form, ctx)
        }
        FamilyName::LiftChar3 { q } | FamilyName::LiftEvenQ { q, .. } => {
            let ext = family_field(&which, args)?;
            let (p, m) = which.field().expect("fixed field");
            let (lift, k) = match which {
                FamilyName::LiftChar3 { .. } => (LiftedFamily::Char3 { q }, 3),
                FamilyName::LiftEvenQ { a, .. } => (LiftedFamily::EvenQ { q, a }, 2),
                _ => unreachable!(),
            };
            let base = field_ctx(&format!("{p}^{}", m / k), None)?;
            let out = lifted_family(lift, &base, &ext)?;
            notes.push(format!(
                "base map x h(x)^{k} over GF({}) is a triple-cycle: {}",
                base.spec(),
                out.lift.base_n_cycle
            ));
            (out.lift.form, ext)
        }
    };
    let rep = verify_form(&form, n, &ctx)?;
    let rec = FamilyRecord {
        family: which.to_string(),
        params: &params.0,
        h: form.h_poly().to_string(),
        shape: low.as_ref().map(|o| o.shape),
        disjuncts: low.as_ref().map(|o| o.disjuncts.as_slice()),
        family_verdict: low.as_ref().map(|o| o.passed),
        report: &rep,
    };
    sink.emit(&rec, || {
        let params: Vec<String> = rec.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let mut s = format!("family:      {} ({})\nh:           {}", rec.family, params.join(", "), rec.h);
        if let Some(o) = &low {
            s.push_str(&format!(
                "\ng on mu:     {:?}\ndisjuncts:   {:?}\nfamily says: {}",
                o.shape,
                o.disjuncts,
                verdict(o.passed)
            ));
        }
        format!("{s}\n{}", render_report(&rep))
    })?;
    for n in &notes {
        sink.note(n)?;
    }
    Ok(status_of(rep.passed()))
}

/// The q = 3 char-3 member is sometimes quoted with x^313 in place of x^417;
/// both are checked and compared as functions.
fn char3_variant_note(form: &IndexForm, ctx: &FieldCtx) -> Result<String> {
    let derived = form.to_sparse(ctx);
    let variant = SparsePoly::parse("x^521 + x^313 + x^105 + x", ctx)?;
    let t_derived = to_table(&derived, ctx)?;
    let t_variant = to_table(&variant, ctx)?;
    let triple = |t: &ncycle::PermTable| t.is_bijective() && t.is_n_cycle(3).unwrap_or(false);
    Ok(format!(
        "x h(x^26) expands to {derived} (triple-cycle: {}); the variant {variant} is a triple-cycle: {}; same function: {}",
        triple(&t_derived),
        triple(&t_variant),
        t_derived == t_variant
    ))
}

fn run_search(args: &SearchArgs, sink: &mut Sink) -> Result<Status> {
    let ctx = field_of(&args.field)?;
    let mut spec = SearchSpec::new(args.ell, args.n, &ctx);
    if let Some(r) = args.r_range {
        spec.r_min = r.start;
        spec.r_max = r.end;
    }
    if let Some(b) = args.budget {
        spec.budget = b;
    }
    if ctx.order() > FULL_ORACLE_LIMIT {
        return Err(CliError::Input(format!(
            "search needs a field of order at most {FULL_ORACLE_LIMIT} so that every hit is oracle-verified"
        )));
    }
    let mut write_err = None;
    let mut sweep = || {
        search(&spec, &ctx, |rep| {
            if write_err.is_none() {
                let r = rep.index_form.as_ref().map(|f| (f.r, f.h.clone()));
                if let Err(e) = sink.emit(&rep, || match &r {
                    Some((r, h)) => format!(
                        "{}  [r = {r}, h = {:?}] cycles {}",
                        rep.poly,
                        h.iter().map(|e| e.0).collect::<Vec<_>>(),
                        rep.cycles.as_ref().map(|c| c.to_string()).unwrap_or_default()
                    ),
                    None => rep.poly.clone(),
                }) {
                    write_err = Some(e);
                }
            }
        })
    };
    let summary = match args.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Input(e.to_string()))?
            .install(sweep)?,
        None => sweep()?,
    };
    if let Some(e) = write_err {
        return Err(e.into());
    }
    sink.emit(&SummaryRecord { summary: &summary }, || {
        format!(
            "{} candidates evaluated, {} hits{}",
            summary.evaluated,
            summary.hits,
            if summary.complete { "" } else { " (budget exhausted, results partial)" }
        )
    })?;
    Ok(if summary.complete { Status::Verified } else { Status::BudgetExceeded })
}
