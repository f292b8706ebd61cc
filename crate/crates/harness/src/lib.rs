//! Expression language, verification orchestrator, reports and result cache for the `bei` tool.

pub mod cache;
pub mod dsl;
pub mod error;
pub mod report;
pub mod suite;
pub mod verify;

pub use cache::{Cache, CacheKey};
pub use dsl::{emit, parse_expr, Diagnostic};
pub use error::{HarnessError, Result};
pub use report::{Verdict, VerdictReport};
pub use suite::{cmd_suite, Family, SuiteReport};
pub use verify::{cmd_decompose, cmd_oracle, cmd_predict, cmd_verify, Settings};
