//! Command-line surface. Every flag lands in the parameter map of an
//! [`ExperimentConfig`], on top of any `--config` file.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{ExperimentConfig, Kind};
use crate::error::{CliError, CliResult};
use crate::report::Format;
use crate::run::{emit, run};
use crate::sweep::sweep;

#[derive(Debug, Args)]
pub struct Common {
    /// Flat key = value file; flags override its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// csv or json.
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Report file; stdout when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// naive or dft.
    #[arg(long)]
    pub method: Option<String>,
    /// Table cache directory (defaults to $KLOOSTERLAB_CACHE).
    #[arg(long)]
    pub cache: Option<String>,
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    #[arg(long)]
    pub h: Option<String>,
    #[arg(long = "M", allow_hyphen_values = true)]
    pub m: Option<String>,
    #[arg(long = "N")]
    pub n: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One value S(a, b; p) from the defining sum.
    Compute {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        p: String,
    },
    /// All S(a, b; p) for a = 0..p-1.
    Table {
        #[arg(long)]
        p: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Complete sum of U_k(cos theta) against the Katz bound.
    Vst {
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        k: Option<String>,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Short-interval sum D_k(M, N; p, h); `--samples` draws (M, h) at random.
    Interval {
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        k: Option<String>,
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long)]
        samples: Option<String>,
        #[arg(long)]
        seed: Option<String>,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Power moments of S(a, h; p) over an interval.
    Moments {
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        signed: bool,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Sign counts of S(a, h; p).
    Signs {
        #[arg(long)]
        p: Option<String>,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Counts of small and large |S(a, h; p)|.
    Extremes {
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        delta: Option<String>,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Discrepancy of the angles against the Sato-Tate CDF.
    Cdf {
        #[arg(long)]
        p: Option<String>,
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Multi-linear sum from a spec file.
    Multisum {
        #[arg(long)]
        spec: Option<String>,
        #[arg(long)]
        p: Option<String>,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Window moments, their maximal variant, and the interval-family sum.
    Gm {
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        h: Option<String>,
        #[arg(long)]
        r: Option<String>,
        #[arg(long)]
        k: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        m: Option<String>,
        #[arg(long)]
        seed: Option<String>,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Sum over a window of a and all primes in (x, 2x].
    Horizontal {
        #[arg(long)]
        x: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        h: Option<String>,
        #[arg(long)]
        k: Option<String>,
        #[arg(long = "M", allow_hyphen_values = true)]
        m: Option<String>,
        #[arg(long = "N")]
        n: Option<String>,
    },
    /// Values of every bound shape at given parameters.
    Bounds {
        #[arg(long)]
        p: Option<String>,
        #[arg(long = "N")]
        n: Option<String>,
        #[arg(long)]
        h: Option<String>,
        #[arg(long)]
        r: Option<String>,
        #[arg(long)]
        k: Option<String>,
    },
    /// Run config files concurrently into one aggregate report.
    Sweep {
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Config files, each with a `kind` key.
        configs: Vec<PathBuf>,
    },
}

#[derive(Debug, Parser)]
#[command(name = "kloosterlab", version, about = "Kloosterman sum experiments")]
struct Top {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Default)]
struct Params(BTreeMap<String, String>);

impl Params {
    fn put(&mut self, key: &str, value: &Option<String>) -> &mut Self {
        if let Some(v) = value {
            self.0.insert(key.to_string(), v.clone());
        }
        self
    }

    fn window(&mut self, w: &WindowArgs) -> &mut Self {
        self.put("h", &w.h).put("M", &w.m).put("N", &w.n)
    }

    fn table(&mut self, t: &TableArgs) -> &mut Self {
        self.put("method", &t.method).put("cache", &t.cache)
    }
}

fn kind_and_params(cmd: &Command) -> (Kind, BTreeMap<String, String>) {
    let mut p = Params::default();
    let kind = match cmd {
        Command::Compute { a, b, p: modulus } => {
            p.put("a", &Some(a.clone())).put("b", &Some(b.clone())).put("p", &Some(modulus.clone()));
            Kind::Compute
        }
        Command::Table { p: m, b, table } => {
            p.put("p", m).put("b", b).table(table);
            Kind::Table
        }
        Command::Vst { p: m, k, table } => {
            p.put("p", m).put("k", k).table(table);
            Kind::Vst
        }
        Command::Interval {
            p: m,
            k,
            window,
            samples,
            seed,
            table,
        } => {
            p.put("p", m).put("k", k).window(window).put("samples", samples).put("seed", seed).table(table);
            Kind::Interval
        }
        Command::Moments {
            p: m,
            alpha,
            signed,
            window,
            table,
        } => {
            p.put("p", m).put("alpha", alpha).window(window).table(table);
            if *signed {
                p.put("signed", &Some("true".into()));
            }
            Kind::Moments
        }
        Command::Signs { p: m, window, table } => {
            p.put("p", m).window(window).table(table);
            Kind::Signs
        }
        Command::Extremes {
            p: m,
            delta,
            window,
            table,
        } => {
            p.put("p", m).put("delta", delta).window(window).table(table);
            Kind::Extremes
        }
        Command::Cdf { p: m, window, table } => {
            p.put("p", m).window(window).table(table);
            Kind::Cdf
        }
        Command::Multisum { spec, p: m, table } => {
            p.put("spec", spec).put("p", m).table(table);
            Kind::Multisum
        }
        Command::Gm {
            p: m,
            h,
            r,
            k,
            m: mult,
            seed,
            table,
        } => {
            p.put("p", m).put("h", h).put("r", r).put("k", k).put("m", mult).put("seed", seed).table(table);
            Kind::Gm
        }
        Command::Horizontal { x, h, k, m, n } => {
            p.put("x", x).put("h", h).put("k", k).put("M", m).put("N", n);
            Kind::Horizontal
        }
        Command::Bounds { p: m, n, h, r, k } => {
            p.put("p", m).put("N", n).put("h", h).put("r", r).put("k", k);
            Kind::Bounds
        }
        Command::Sweep { .. } => unreachable!("sweep has no single kind"),
    };
    (kind, p.0)
}

/// Parse arguments and run. Help and version requests print and succeed.
pub fn main_with<I, T>(args: I) -> CliResult<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let top = match Top::try_parse_from(args) {
        Ok(top) => top,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return Ok(());
        }
        Err(e) => return Err(CliError::usage(e.to_string().trim_end().to_string())),
    };
    let format = top.common.format.as_deref().map(str::parse::<Format>).transpose()?;
    match &top.command {
        Command::Sweep { workers, configs } => {
            let configs = configs
                .iter()
                .map(|path| ExperimentConfig::from_file(path))
                .collect::<CliResult<Vec<_>>>()?;
            let total = configs.len();
            let outcome = sweep(configs, *workers, top.common.output.as_ref())?;
            emit(&outcome.render(format.unwrap_or_default()), top.common.output.as_deref())?;
            match outcome.failures() {
                0 => Ok(()),
                failed => Err(CliError::Partial {
                    failed,
                    total,
                    code: outcome.exit_code(),
                }),
            }
        }
        cmd => {
            let (kind, params) = kind_and_params(cmd);
            let cfg = ExperimentConfig::resolve(kind, top.common.config.as_deref(), params, top.common.output, format)?;
            run(&cfg)
        }
    }
}
