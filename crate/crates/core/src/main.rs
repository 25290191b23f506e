use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use l2hodge::input::{parse_unchecked, Config, InputDocument};
use l2hodge::numeric::Backend;
use l2hodge::report::{run, run_selftest, Command, Format, Report};
use l2hodge::{Error, Result};

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum BackendArg {
    Exact,
    Float,
}

/// L2 cohomology of local systems on punctured Riemann surfaces.
#[derive(Debug, Parser)]
#[command(name = "l2hodge", version)]
struct Cli {
    /// JSON input document (not needed for `selftest`)
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    command: Command,
    #[arg(long, value_enum)]
    backend: Option<BackendArg>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Characters sampled by `family`
    #[arg(long)]
    samples: Option<usize>,
    /// Exit with 3 when the stalk models diverge
    #[arg(long)]
    strict: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

impl Cli {
    fn apply(&self, config: &mut Config) {
        if let Some(b) = self.backend {
            config.backend = match b {
                BackendArg::Exact => Backend::Exact,
                BackendArg::Float => Backend::Float,
            };
        }
        if let Some(t) = self.tolerance {
            config.tolerance = t;
        }
        if let Some(s) = self.seed {
            config.seed = s;
        }
        if let Some(n) = self.samples {
            config.samples = n;
        }
    }

    fn load(&self) -> Result<Option<InputDocument>> {
        let Some(path) = &self.input else {
            return Ok(None);
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        let mut doc = parse_unchecked(&text)?;
        self.apply(&mut doc.config);
        doc.validate()?;
        Ok(Some(doc))
    }

    fn report(&self) -> Result<Report> {
        match (self.load()?, self.command) {
            (Some(doc), cmd) => run(&doc, cmd),
            (None, Command::Selftest) => {
                let mut config = Config::default();
                self.apply(&mut config);
                Ok(run_selftest(&config))
            }
            (None, cmd) => Err(Error::Input(format!("`{}` needs --input", cmd.name()))),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.report() {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            if cli.format == Format::Machine {
                println!();
            }
            ExitCode::from(report.exit_code(cli.strict) as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
