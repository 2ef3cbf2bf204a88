//! Experiment configs: a kind, a flat parameter map, and where to write.
//!
//! Config files hold one `key = value` per line; `#` starts a comment. The
//! reserved keys `kind`, `output` and `format` set those fields, everything
//! else is a parameter. Values given on the command line win over the file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use kloosterlab::{Method, PrimeModulus};

use crate::error::{CliError, CliResult};
use crate::report::Format;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Compute,
    Table,
    Vst,
    Interval,
    Moments,
    Signs,
    Extremes,
    Cdf,
    Multisum,
    Gm,
    Horizontal,
    Bounds,
}

impl Kind {
    pub const ALL: [Kind; 12] = [
        Kind::Compute,
        Kind::Table,
        Kind::Vst,
        Kind::Interval,
        Kind::Moments,
        Kind::Signs,
        Kind::Extremes,
        Kind::Cdf,
        Kind::Multisum,
        Kind::Gm,
        Kind::Horizontal,
        Kind::Bounds,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Compute => "compute",
            Kind::Table => "table",
            Kind::Vst => "vst",
            Kind::Interval => "interval",
            Kind::Moments => "moments",
            Kind::Signs => "signs",
            Kind::Extremes => "extremes",
            Kind::Cdf => "cdf",
            Kind::Multisum => "multisum",
            Kind::Gm => "gm",
            Kind::Horizontal => "horizontal",
            Kind::Bounds => "bounds",
        }
    }

    fn schema(self) -> Vec<ParamSpec> {
        use Ty::*;
        let req = |name, ty| ParamSpec { name, ty, required: true };
        let opt = |name, ty| ParamSpec { name, ty, required: false };
        let window = || vec![opt("h", Int), opt("M", Int), opt("N", UInt)];
        let table = || vec![opt("method", MethodName), opt("cache", Text)];
        let mut s = match self {
            Kind::Compute => return vec![req("a", Int), req("b", Int), req("p", Prime)],
            Kind::Table => vec![req("p", Prime), opt("b", Int)],
            Kind::Vst => vec![req("p", Prime), req("k", Pos)],
            Kind::Interval => {
                let mut v = vec![req("p", Prime), opt("k", Pos), opt("samples", UInt), opt("seed", UInt)];
                v.extend(window());
                v
            }
            Kind::Moments => {
                let mut v = vec![req("p", Prime), req("alpha", Float), opt("signed", Bool)];
                v.extend(window());
                v
            }
            Kind::Signs | Kind::Cdf => {
                let mut v = vec![req("p", Prime)];
                v.extend(window());
                v
            }
            Kind::Extremes => {
                let mut v = vec![req("p", Prime), req("delta", Float)];
                v.extend(window());
                v
            }
            Kind::Multisum => vec![req("spec", Text), opt("p", Prime)],
            Kind::Gm => vec![
                req("p", Prime),
                req("h", Pos),
                opt("r", Pos),
                opt("k", Pos),
                opt("m", Int),
                opt("seed", UInt),
            ],
            Kind::Horizontal => {
                return vec![
                    req("x", UInt),
                    opt("h", Int),
                    opt("k", Pos),
                    opt("M", Int),
                    req("N", UInt),
                ]
            }
            Kind::Bounds => {
                return vec![
                    req("p", Prime),
                    opt("N", Pos),
                    opt("h", Pos),
                    opt("r", Pos),
                    opt("k", Pos),
                ]
            }
        };
        s.extend(table());
        s
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Kind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| CliError::usage(format!("unknown experiment kind {s:?}")))
    }
}

#[derive(Debug, Clone, Copy)]
enum Ty {
    Prime,
    Int,
    UInt,
    /// Integer >= 1.
    Pos,
    Float,
    Bool,
    MethodName,
    Text,
}

#[derive(Debug, Clone, Copy)]
struct ParamSpec {
    name: &'static str,
    ty: Ty,
    required: bool,
}

fn check_type(name: &str, value: &str, ty: Ty) -> CliResult<()> {
    let bad = |what: &str| CliError::usage(format!("parameter {name} = {value:?} is not {what}"));
    match ty {
        Ty::Prime => {
            let n: u64 = value.parse().map_err(|_| bad("a positive integer"))?;
            PrimeModulus::new(n).map_err(|e| CliError::usage(format!("parameter {name}: {e}")))?;
        }
        Ty::Int => {
            value.parse::<i64>().map_err(|_| bad("an integer"))?;
        }
        Ty::UInt => {
            value.parse::<u64>().map_err(|_| bad("a non-negative integer"))?;
        }
        Ty::Pos => {
            let n: u64 = value.parse().map_err(|_| bad("a positive integer"))?;
            if n == 0 {
                return Err(bad("a positive integer"));
            }
        }
        Ty::Float => {
            let x: f64 = value.parse().map_err(|_| bad("a number"))?;
            if !x.is_finite() {
                return Err(bad("a finite number"));
            }
        }
        Ty::Bool => {
            parse_bool(value).ok_or_else(|| bad("true or false"))?;
        }
        Ty::MethodName => {
            value.parse::<Method>().map_err(|_| bad("naive or dft"))?;
        }
        Ty::Text => {
            if value.is_empty() {
                return Err(bad("a non-empty string"));
            }
        }
    }
    Ok(())
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" | "1" | "yes" => Some(true),
        "false" | "0" | "no" => Some(false),
        _ => None,
    }
}

/// Parse `key = value` lines. Repeated keys are an error.
pub fn parse_kv(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("line {}: expected key = value, got {raw:?}", i + 1)))?;
        let key = key.trim().to_string();
        if key.is_empty() {
            return Err(CliError::usage(format!("line {}: empty key", i + 1)));
        }
        if out.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(CliError::usage(format!("line {}: duplicate key {key}", i + 1)));
        }
    }
    Ok(out)
}

fn read_config_file(path: &Path) -> CliResult<(Option<Kind>, BTreeMap<String, String>)> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))?;
    let mut map = parse_kv(&text)?;
    let kind = map.remove("kind").map(|k| k.parse()).transpose()?;
    Ok((kind, map))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub params: BTreeMap<String, String>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl ExperimentConfig {
    pub fn new(kind: Kind) -> Self {
        ExperimentConfig {
            kind,
            params: BTreeMap::new(),
            output: None,
            format: Format::Csv,
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// A config file that names its own kind (as used by sweeps).
    pub fn from_file(path: &Path) -> CliResult<Self> {
        let (kind, map) = read_config_file(path)?;
        let kind = kind.ok_or_else(|| CliError::usage(format!("{}: missing kind", path.display())))?;
        let mut cfg = ExperimentConfig::new(kind);
        cfg.absorb(map)?;
        Ok(cfg)
    }

    /// Layer sources for `kind`: the optional config file first, then the
    /// command-line values on top.
    pub fn resolve(
        kind: Kind,
        file: Option<&Path>,
        cli: BTreeMap<String, String>,
        output: Option<PathBuf>,
        format: Option<Format>,
    ) -> CliResult<Self> {
        let mut cfg = match file {
            Some(path) => {
                let from_file = read_config_file(path)?;
                if let Some(k) = from_file.0 {
                    if k != kind {
                        return Err(CliError::usage(format!(
                            "{} is a {k} config, not {kind}",
                            path.display()
                        )));
                    }
                }
                let mut cfg = ExperimentConfig::new(kind);
                cfg.absorb(from_file.1)?;
                cfg
            }
            None => ExperimentConfig::new(kind),
        };
        cfg.params.extend(cli);
        if output.is_some() {
            cfg.output = output;
        }
        if let Some(f) = format {
            cfg.format = f;
        }
        Ok(cfg)
    }

    fn absorb(&mut self, mut map: BTreeMap<String, String>) -> CliResult<()> {
        if let Some(out) = map.remove("output") {
            self.output = Some(PathBuf::from(out));
        }
        if let Some(f) = map.remove("format") {
            self.format = f.parse()?;
        }
        self.params.extend(map);
        Ok(())
    }

    /// Every required parameter is present and every parameter parses.
    pub fn validate(&self) -> CliResult<()> {
        let schema = self.kind.schema();
        for key in self.params.keys() {
            if !schema.iter().any(|s| s.name == key) {
                let known: Vec<&str> = schema.iter().map(|s| s.name).collect();
                return Err(CliError::usage(format!(
                    "unknown parameter {key} for {} (expected one of {})",
                    self.kind,
                    known.join(", ")
                )));
            }
        }
        for spec in &schema {
            match self.params.get(spec.name) {
                Some(v) => check_type(spec.name, v, spec.ty)?,
                None if spec.required => {
                    return Err(CliError::usage(format!("{} needs parameter {}", self.kind, spec.name)))
                }
                None => {}
            }
        }
        Ok(())
    }

    fn raw(&self, name: &str) -> Option<&str> {
        self.params.get(name).map(String::as_str)
    }

    fn parsed<T: FromStr>(&self, name: &str) -> CliResult<Option<T>> {
        self.raw(name)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| CliError::usage(format!("parameter {name} = {v:?} has the wrong type")))
            })
            .transpose()
    }

    fn required<T: FromStr>(&self, name: &str) -> CliResult<T> {
        self.parsed(name)?
            .ok_or_else(|| CliError::usage(format!("{} needs parameter {name}", self.kind)))
    }

    pub fn prime(&self, name: &str) -> CliResult<PrimeModulus> {
        let n: u64 = self.required(name)?;
        PrimeModulus::new(n).map_err(|e| CliError::usage(format!("parameter {name}: {e}")))
    }

    pub fn opt_prime(&self, name: &str) -> CliResult<Option<PrimeModulus>> {
        self.parsed::<u64>(name)?
            .map(|n| PrimeModulus::new(n).map_err(|e| CliError::usage(format!("parameter {name}: {e}"))))
            .transpose()
    }

    pub fn int(&self, name: &str, default: i64) -> CliResult<i64> {
        Ok(self.parsed(name)?.unwrap_or(default))
    }

    pub fn uint(&self, name: &str, default: u64) -> CliResult<u64> {
        Ok(self.parsed(name)?.unwrap_or(default))
    }

    pub fn req_uint(&self, name: &str) -> CliResult<u64> {
        self.required(name)
    }

    pub fn float(&self, name: &str) -> CliResult<f64> {
        self.required(name)
    }

    pub fn flag(&self, name: &str) -> CliResult<bool> {
        match self.raw(name) {
            None => Ok(false),
            Some(v) => parse_bool(v).ok_or_else(|| CliError::usage(format!("parameter {name} = {v:?} is not a boolean"))),
        }
    }

    pub fn method(&self) -> CliResult<Method> {
        Ok(self.parsed("method")?.unwrap_or(Method::Dft))
    }

    pub fn text(&self, name: &str) -> Option<&str> {
        self.raw(name)
    }

    /// Value used to order sweep rows: `p`, else `x`, else 0.
    pub fn sort_modulus(&self) -> u64 {
        self.raw("p")
            .or_else(|| self.raw("x"))
            .and_then(|v| v.parse().ok())
            .unwrap_or(0)
    }

    /// Parameters other than `p`, as `k=v` pairs joined by `;`.
    pub fn params_key(&self) -> String {
        self.params
            .iter()
            .filter(|(k, _)| k.as_str() != "p")
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}
