//! Trace generation and benchmark statistics.

mod bench;
mod gen;

pub use bench::{bench_od, format_table, BenchRow, RunStats, OD_SPEC};
pub use gen::{gen_steps, gen_stream, GenConfig, GenError, GenMode};
