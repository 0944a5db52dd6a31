//! Files, fixtures, reports and the command-line front end for `gkm-core`.

pub mod cli;
pub mod error;
pub mod format;
pub mod properties;
pub mod registry;
pub mod verify;

pub use error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    #[value(name = "ktheory")]
    KTheory,
    #[value(name = "cohomology")]
    Cohomology,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::KTheory => "ktheory",
            Mode::Cohomology => "cohomology",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "ktheory" => Some(Mode::KTheory),
            "cohomology" => Some(Mode::Cohomology),
            _ => None,
        }
    }
}
