//! Static detection of Python performance smells.
//!
//! The crate is organised around the pipeline a corpus study follows:
//! parse source files ([`syntax`]), detect the nine smells and synthesize
//! idiomatic rewrites ([`smells`]), serialize findings ([`report`]),
//! aggregate them into per-project densities ([`metrics`]) and compare
//! corpora with rank statistics ([`stats`]). Files can additionally be
//! tagged with ML pipeline stages ([`stages`]), and candidate repositories
//! are screened with [`miner`].

pub mod config;
pub mod metrics;
pub mod miner;
pub mod report;
pub mod smells;
pub mod stages;
pub mod stats;
pub mod syntax;

pub use config::ToolConfig;
pub use report::ScanReport;
pub use smells::{scan_unit, Detection, SmellConfig, SmellKind};
pub use syntax::{parse_unit, ParseError, ScopeInfo, SourceRange, SourceUnit};

/// Version string embedded in every report this crate writes.
pub const TOOL_VERSION: &str = concat!("pysmell ", env!("CARGO_PKG_VERSION"));
