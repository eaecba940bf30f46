use std::path::{Path, PathBuf};
use std::process::ExitCode;

use absix_core::atlas::{builtin_from_spec, catalogue, emit_atlas, load_atlas_file};
use absix_core::{build_report, validate_atlas, Error, StratumAtlas, What};
use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

/// Absolute intersection cohomology from stratum atlases.
#[derive(Parser)]
#[command(name = "absix", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an atlas file; prints one finding per line.
    Validate { file: PathBuf },
    /// Compute tables for an atlas file or a corpus item (`@name[:k=v,...]`).
    Compute {
        source: String,
        #[arg(long, value_enum, default_value_t = WhatArg::All)]
        what: WhatArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, allow_negative_numbers = true)]
        degree: Option<i64>,
    },
    /// List the built-in corpus, optionally writing every entry as a file.
    Corpus {
        #[arg(long)]
        write: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum WhatArg {
    Cohomology,
    Absic,
    Boundary,
    Ihplus,
    Criteria,
    All,
}

impl From<WhatArg> for What {
    fn from(w: WhatArg) -> Self {
        match w {
            WhatArg::Cohomology => What::Cohomology,
            WhatArg::Absic => What::Absic,
            WhatArg::Boundary => What::Boundary,
            WhatArg::Ihplus => What::Ihplus,
            WhatArg::Criteria => What::Criteria,
            WhatArg::All => What::All,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

const DOMAIN: u8 = 1;
const INPUT: u8 = 2;

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn load(source: &str) -> Result<StratumAtlas, ExitCode> {
    match source.strip_prefix('@') {
        Some(spec) => builtin_from_spec(spec).map_err(|e| fail(INPUT, e)),
        None => load_atlas_file(Path::new(source)).map_err(|e| fail(INPUT, e)),
    }
}

fn validate(file: &Path) -> ExitCode {
    let atlas = match load_atlas_file(file) {
        Ok(a) => a,
        Err(e) => return fail(INPUT, e),
    };
    let report = validate_atlas(&atlas);
    if report.is_valid() {
        println!("{}: valid", atlas.name);
        ExitCode::SUCCESS
    } else {
        print!("{report}");
        ExitCode::from(DOMAIN)
    }
}

fn compute(source: &str, what: What, format: Format, degree: Option<i64>) -> ExitCode {
    let atlas = match load(source) {
        Ok(a) => a,
        Err(code) => return code,
    };
    match build_report(&atlas, what, degree) {
        Ok(report) => {
            match format {
                Format::Text => print!("{}", report.to_text()),
                Format::Json => print!("{}", report.to_json_string()),
            }
            ExitCode::SUCCESS
        }
        Err(Error::Parse(e)) => fail(INPUT, e),
        Err(Error::InvalidAtlas(report)) => {
            eprint!("{report}");
            fail(DOMAIN, "invalid atlas")
        }
        Err(e) => fail(DOMAIN, e),
    }
}

fn corpus(write: Option<&Path>) -> anyhow::Result<()> {
    if let Some(dir) = write {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    for entry in catalogue() {
        let params: Vec<String> = entry.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let label = if params.is_empty() { entry.name.to_string() } else { format!("{}({})", entry.name, params.join(",")) };
        println!("{label:<40} {}", entry.description);
        if let Some(dir) = write {
            let atlas = builtin_from_spec(entry.name)?;
            let path = dir.join(format!("{}.atlas.json", entry.name));
            std::fs::write(&path, emit_atlas(&atlas)).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate { file } => validate(&file),
        Command::Compute { source, what, format, degree } => compute(&source, what.into(), format, degree),
        Command::Corpus { write } => match corpus(write.as_deref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(INPUT, format!("{e:#}")),
        },
    }
}
