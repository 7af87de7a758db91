use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rug::Rational;

use digit_moments::asymptotics::{PeriodWindow, Weighting};
use digit_moments::dirichlet::{load_constants, KempnerConstantsStore};
use digit_moments::moments::Scaling;
use digit_moments::{parse_digit_list, DigitSet, Error, Precision};
use digit_moments_cli::checks::{self, Suite};
use digit_moments_cli::presets::{preset, PRESETS};
use digit_moments_cli::table::{compute_rows, gnuplot_script, write_csv, TableSpec};
use digit_moments_cli::{average_report, exit_code, AverageRequest, EXIT_FAILURE};

#[derive(Parser)]
#[command(name = "digit-moments", version, about = "Moments of digit-restricted measures and their periodic asymptotics")]
struct Cli {
    /// Extra Kempner constants file, merged over the bundled table.
    #[arg(long, global = true)]
    constants: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SetArgs {
    #[arg(long)]
    base: u32,
    /// Allowed digits, comma separated.
    #[arg(long, value_parser = parse_digits)]
    digits: DigitList,
    #[arg(long)]
    s: f64,
    /// none | kappa | linear | pochhammer | power
    #[arg(long = "scale", default_value = "none")]
    scale: Scaling,
    #[arg(long, default_value_t = 128)]
    precision_bits: u32,
}

#[derive(Clone)]
struct DigitList(Vec<u32>);

fn parse_digits(text: &str) -> Result<DigitList, String> {
    parse_digit_list(text).map(DigitList).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate scaled moments as CSV.
    Moments {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, default_value_t = 0)]
        m_min: u64,
        #[arg(long)]
        m_max: u64,
        /// Output file (a gnuplot script is written next to it); stdout if absent.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Fill the profile, Fourier and residual columns.
        #[arg(long)]
        with_profile: bool,
        #[arg(long, default_value_t = 6)]
        fourier_terms: usize,
    },
    /// Write the data and plot script of a published figure (1..=9).
    Figure {
        id: u32,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Keep every n-th m.
        #[arg(long, default_value_t = 1)]
        stride: u64,
        /// About n log-spaced points per period instead of every m.
        #[arg(long)]
        per_period: Option<u32>,
        #[arg(long)]
        no_profile: bool,
        #[arg(long, default_value_t = 6)]
        fourier_terms: usize,
        #[arg(long, default_value_t = 128)]
        precision_bits: u32,
    },
    /// List the figure presets.
    Presets,
    /// Period average of the scaled moments and its target.
    Average {
        #[command(flatten)]
        set: SetArgs,
        /// Average over (b^P, b^(P+1)].
        #[arg(long, conflicts_with = "end", required_unless_present = "end")]
        period: Option<u32>,
        /// Average over the period ending at this m, e.g. (9000, 27000].
        #[arg(long)]
        end: Option<u64>,
        #[arg(long, default_value = "left")]
        weighting: Weighting,
        /// Also average the period before and extrapolate.
        #[arg(long)]
        extrapolate: bool,
    },
    /// Run a verification suite: oracle | periodicity | prop1 | fourier.
    Check { suite: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn store(path: &Option<PathBuf>) -> Result<KempnerConstantsStore, Error> {
    let mut store = KempnerConstantsStore::bundled();
    if let Some(p) = path {
        store.extend(load_constants(p)?);
    }
    Ok(store)
}

fn precision(bits: u32) -> Result<Precision, Error> {
    Precision::new(bits)
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Moments {
            set,
            m_min,
            m_max,
            csv,
            with_profile,
            fourier_terms,
        } => {
            if m_min > m_max {
                return Err(Error::InvalidArgument(format!("--m-min {m_min} exceeds --m-max {m_max}")));
            }
            let store = store(&cli.constants)?;
            let spec = TableSpec {
                digit_set: DigitSet::new(set.base, &set.digits.0)?,
                s: set.s,
                scaling: set.scale,
                m_lo: m_min,
                m_hi: m_max,
                precision: precision(set.precision_bits)?,
                with_profile,
                fourier_terms,
                stride: 1,
                per_period: None,
            };
            let rows = compute_rows(&spec, &store)?;
            match csv {
                Some(path) => {
                    let mut w = BufWriter::new(File::create(&path)?);
                    write_csv(&mut w, set.base, &rows)?;
                    w.flush()?;
                    let label = format!("{} u_m({})", set.scale, set.s);
                    std::fs::write(path.with_extension("gp"), gnuplot_script(&path, set.base, &label, with_profile))?;
                }
                None => {
                    let stdout = io::stdout();
                    let mut w = BufWriter::new(stdout.lock());
                    write_csv(&mut w, set.base, &rows)?;
                    w.flush()?;
                }
            }
            Ok(0)
        }
        Command::Figure {
            id,
            out,
            stride,
            per_period,
            no_profile,
            fourier_terms,
            precision_bits,
        } => {
            let p = preset(id).ok_or_else(|| Error::InvalidArgument(format!("figure id {id} not in 1..=9")))?;
            if stride == 0 {
                return Err(Error::InvalidArgument("--stride must be positive".into()));
            }
            let store = store(&cli.constants)?;
            let spec = TableSpec {
                digit_set: DigitSet::new(p.base, p.digits)?,
                s: p.s,
                scaling: p.scaling,
                m_lo: p.m_lo,
                m_hi: p.m_hi,
                precision: precision(precision_bits)?,
                with_profile: !no_profile,
                fourier_terms,
                stride,
                per_period,
            };
            let rows = compute_rows(&spec, &store)?;
            std::fs::create_dir_all(&out)?;
            let path = out.join(format!("fig{id}.csv"));
            let mut w = BufWriter::new(File::create(&path)?);
            write_csv(&mut w, p.base, &rows)?;
            w.flush()?;
            let script = out.join(format!("fig{id}.gp"));
            std::fs::write(&script, gnuplot_script(&path, p.base, p.ylabel, !no_profile))?;
            eprintln!("wrote {} ({} rows) and {}", path.display(), rows.len(), script.display());
            Ok(0)
        }
        Command::Presets => {
            for p in &PRESETS {
                println!("{p}");
            }
            Ok(0)
        }
        Command::Average {
            set,
            period,
            end,
            weighting,
            extrapolate,
        } => {
            let window = match (period, end) {
                (Some(p), _) => PeriodWindow::anchored(set.base, &Rational::from(1), p as i32)?,
                (None, Some(hi)) => PeriodWindow::ending_at(set.base, hi, 0)?,
                (None, None) => unreachable!("clap requires one of --period and --end"),
            };
            if extrapolate && window.previous().is_err() {
                return Err(Error::InvalidArgument(format!(
                    "--extrapolate needs a full period before {window}"
                )));
            }
            let req = AverageRequest {
                digit_set: DigitSet::new(set.base, &set.digits.0)?,
                s: set.s,
                scaling: set.scale,
                window,
                weighting,
                extrapolate,
                precision: precision(set.precision_bits)?,
            };
            print!("{}", average_report(&req, &store(&cli.constants)?)?);
            Ok(0)
        }
        Command::Check { suite } => {
            let suite: Suite = suite.parse()?;
            let lines = checks::run(suite, &store(&cli.constants)?)?;
            let mut failed = false;
            for l in &lines {
                println!("{l}");
                failed |= !l.pass;
            }
            Ok(if failed { EXIT_FAILURE } else { 0 })
        }
    }
}
