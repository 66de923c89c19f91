//! Command-line job descriptions and their flag form.

use std::fmt;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Clone, Debug, PartialEq, Eq)]
#[command(name = "ncycle", version, about = "Construct, verify and search n-cycle permutation polynomials x^r h(x^s)")]
pub struct JobSpec {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Subcommand, Clone, Debug, PartialEq, Eq)]
pub enum Command {
    /// Check that a polynomial is an n-cycle permutation (criterion and oracle).
    Verify(VerifyArgs),
    /// Print the cycle structure of a polynomial's permutation.
    Cycles(CyclesArgs),
    /// Build x^r h(x^s) from a target map on mu_ell.
    Construct(ConstructArgs),
    /// Emit and verify a member of a named family.
    Family(FamilyArgs),
    /// Sweep all x^r h(x^s) of a given index for n-cycles.
    Search(SearchArgs),
    /// Describe a field: modulus, primitive element, admissible indices.
    Info(FieldArgs),
}

#[derive(Args, Clone, Debug, PartialEq, Eq)]
pub struct FieldArgs {
    /// Field as p^m, or a bare prime.
    #[arg(long)]
    pub field: String,
    /// Modulus coefficients, low to high (`1,1,0,1` is 1 + t + t^3).
    #[arg(long)]
    pub modulus: Option<String>,
}

#[derive(Args, Clone, Debug, PartialEq, Eq)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    pub poly: String,
    #[arg(long)]
    pub n: u32,
}

#[derive(Args, Clone, Debug, PartialEq, Eq)]
pub struct CyclesArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    pub poly: String,
}

#[derive(Args, Clone, Debug, PartialEq, Eq)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Target permutation of 0..ell, e.g. `1,2,0`.
    #[arg(long)]
    pub sigma: String,
    /// Exponent offsets m_i, one per subgroup element.
    #[arg(long)]
    pub mvec: String,
    #[arg(long)]
    pub r: u64,
    #[arg(long)]
    pub n: u32,
}

#[derive(Args, Clone, Debug, PartialEq, Eq)]
pub struct FamilyArgs {
    /// One of char3-quad, even-q-tri, v-tri, idx2-binomial, idx3-trinomial, lift-char3, lift-even-q.
    #[arg(long)]
    pub family: String,
    /// Family parameter, repeatable (`--param q=64 --param a=26`).
    #[arg(long = "param")]
    pub params: Vec<Param>,
    /// Required by the low-index families; the others fix their own field.
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long)]
    pub modulus: Option<String>,
    /// Cycle length for the low-index families (the others are triple-cycles).
    #[arg(long)]
    pub n: Option<u32>,
}

#[derive(Args, Clone, Debug, PartialEq, Eq)]
pub struct SearchArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    pub ell: u64,
    #[arg(long)]
    pub n: u32,
    /// Inclusive range of r, `A..B`.
    #[arg(long = "r-range")]
    pub r_range: Option<RRange>,
    /// Maximum number of candidate evaluations.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Worker threads (defaults to the number of cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Jsonl,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Param {
    pub key: String,
    pub value: String,
}

impl FromStr for Param {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.split_once('=') {
            Some((k, v)) if !k.trim().is_empty() => Ok(Param { key: k.trim().to_string(), value: v.trim().to_string() }),
            _ => Err(format!("expected key=value, got {s:?}")),
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.key, self.value)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RRange {
    pub start: u64,
    pub end: u64,
}

impl FromStr for RRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, got {s:?}"))?;
        let parse = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("bad bound {t:?} in {s:?}"));
        let (start, end) = (parse(a)?, parse(b)?);
        if start > end {
            return Err(format!("empty range {s:?}"));
        }
        Ok(RRange { start, end })
    }
}

impl fmt::Display for RRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

fn push(args: &mut Vec<String>, flag: &str, value: impl ToString) {
    args.push(format!("--{flag}"));
    args.push(value.to_string());
}

fn push_opt(args: &mut Vec<String>, flag: &str, value: Option<impl ToString>) {
    if let Some(v) = value {
        push(args, flag, v);
    }
}

impl FieldArgs {
    fn to_args(&self, args: &mut Vec<String>) {
        push(args, "field", &self.field);
        push_opt(args, "modulus", self.modulus.as_ref());
    }
}

impl JobSpec {
    pub fn parse_args<I, T>(args: I) -> Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        JobSpec::try_parse_from(std::iter::once("ncycle".into()).chain(args.into_iter().map(Into::into)))
    }

    /// The flags (without the program name) that parse back to this job.
    pub fn to_args(&self) -> Vec<String> {
        let mut a = Vec::new();
        match &self.command {
            Command::Verify(v) => {
                a.push("verify".into());
                v.field.to_args(&mut a);
                push(&mut a, "poly", &v.poly);
                push(&mut a, "n", v.n);
            }
            Command::Cycles(c) => {
                a.push("cycles".into());
                c.field.to_args(&mut a);
                push(&mut a, "poly", &c.poly);
            }
            Command::Construct(c) => {
                a.push("construct".into());
                c.field.to_args(&mut a);
                push(&mut a, "sigma", &c.sigma);
                push(&mut a, "mvec", &c.mvec);
                push(&mut a, "r", c.r);
                push(&mut a, "n", c.n);
            }
            Command::Family(f) => {
                a.push("family".into());
                push(&mut a, "family", &f.family);
                for p in &f.params {
                    push(&mut a, "param", p);
                }
                push_opt(&mut a, "field", f.field.as_ref());
                push_opt(&mut a, "modulus", f.modulus.as_ref());
                push_opt(&mut a, "n", f.n);
            }
            Command::Search(s) => {
                a.push("search".into());
                s.field.to_args(&mut a);
                push(&mut a, "ell", s.ell);
                push(&mut a, "n", s.n);
                push_opt(&mut a, "r-range", s.r_range);
                push_opt(&mut a, "budget", s.budget);
                push_opt(&mut a, "threads", s.threads);
            }
            Command::Info(f) => {
                a.push("info".into());
                f.to_args(&mut a);
            }
        }
        if self.format != Format::Text {
            push(&mut a, "format", "jsonl");
        }
        a
    }
}
