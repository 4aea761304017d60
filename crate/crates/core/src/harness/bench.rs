use std::fmt::Write as _;
use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};

use super::gen::{gen_steps, GenConfig, GenMode};
use crate::enforce::{build_parallel_game, run_stream, EnforceConfig, EnforceError, EnforcerSession};
use crate::logic::parse_spec_file;

/// Observational determinism over one input and one output bit.
pub const OD_SPEC: &str = "inputs: i\noutputs: o\nspec: forall p1. forall p2. (o[p1] <-> o[p2]) W !(i[p1] <-> i[p2])\n";

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunStats {
    /// Game construction and solving.
    pub init: Duration,
    /// Enforcement loop time of each run.
    pub times: Vec<Duration>,
    /// Runs in which the enforcer took over at least once.
    pub interventions: usize,
    pub traces: usize,
    pub length: usize,
}

impl RunStats {
    pub fn runs(&self) -> usize {
        self.times.len()
    }

    pub fn min(&self) -> Duration {
        self.times.iter().copied().min().unwrap_or_default()
    }

    pub fn max(&self) -> Duration {
        self.times.iter().copied().max().unwrap_or_default()
    }

    pub fn avg(&self) -> Duration {
        match self.times.len() {
            0 => Duration::ZERO,
            k => self.times.iter().sum::<Duration>() / k as u32,
        }
    }

    /// `key=value` lines, times in seconds.
    pub fn to_key_values(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "traces={}", self.traces);
        let _ = writeln!(s, "length={}", self.length);
        let _ = writeln!(s, "runs={}", self.runs());
        let _ = writeln!(s, "init_s={:.6}", self.init.as_secs_f64());
        let _ = writeln!(s, "min_s={:.6}", self.min().as_secs_f64());
        let _ = writeln!(s, "avg_s={:.6}", self.avg().as_secs_f64());
        let _ = writeln!(s, "max_s={:.6}", self.max().as_secs_f64());
        let _ = writeln!(s, "enforced={}", self.interventions);
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: u32,
    pub flip: f64,
    pub stats: RunStats,
}

/// Enforces OD on `runs` generated streams per (n, flip) pair. Run `r` uses
/// seed `seed + r`; runs are spread over the available cores.
pub fn bench_od(
    sizes: &[u32],
    probs: &[f64],
    runs: usize,
    len: usize,
    seed: u64,
    config: &EnforceConfig,
) -> Result<Vec<BenchRow>, EnforceError> {
    let spec = parse_spec_file(OD_SPEC).expect("built-in spec parses");
    let workers = thread::available_parallelism().map_or(1, |n| n.get());
    let mut rows = Vec::new();
    for &n in sizes {
        let started = Instant::now();
        let solved = Arc::new(build_parallel_game(&spec, n, config)?);
        let init = started.elapsed();
        for &flip in probs {
            let results: Vec<(Duration, bool)> = thread::scope(|s| {
                let handles: Vec<_> = (0..workers)
                    .map(|w| {
                        let solved = Arc::clone(&solved);
                        s.spawn(move || {
                            (w..runs)
                                .step_by(workers)
                                .map(|r| {
                                    let cfg = GenConfig {
                                        inputs: 1,
                                        outputs: 1,
                                        n: n as usize,
                                        len,
                                        flip,
                                        seed: seed.wrapping_add(r as u64),
                                        mode: GenMode::Random,
                                    };
                                    let steps = gen_steps(&cfg).expect("valid generator config");
                                    let mut session = EnforcerSession::new(Arc::clone(&solved), config.hand_back);
                                    let res = run_stream(&mut session, &steps).expect("generated stream fits the game");
                                    (r, res.stats.elapsed, res.stats.intervention.is_some())
                                })
                                .collect::<Vec<_>>()
                        })
                    })
                    .collect();
                let mut all: Vec<_> = handles.into_iter().flat_map(|h| h.join().expect("bench worker")).collect();
                all.sort_by_key(|x| x.0);
                all.into_iter().map(|(_, t, e)| (t, e)).collect()
            });
            let stats = RunStats {
                init,
                times: results.iter().map(|r| r.0).collect(),
                interventions: results.iter().filter(|r| r.1).count(),
                traces: n as usize,
                length: len,
            };
            rows.push(BenchRow { n, flip, stats });
        }
    }
    Ok(rows)
}

pub fn format_table(rows: &[BenchRow]) -> String {
    let mut s = format!("{:>3} {:>6} {:>10} {:>10} {:>10} {:>10} {:>9}\n", "n", "flip", "init_s", "avg_s", "min_s", "max_s", "enforced");
    for r in rows {
        let st = &r.stats;
        let _ = writeln!(
            s,
            "{:>3} {:>6.3} {:>10.4} {:>10.4} {:>10.4} {:>10.4} {:>5}/{:<3}",
            r.n,
            r.flip,
            st.init.as_secs_f64(),
            st.avg().as_secs_f64(),
            st.min().as_secs_f64(),
            st.max().as_secs_f64(),
            st.interventions,
            st.runs()
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stats_summaries() {
        let st = RunStats {
            times: vec![Duration::from_millis(1), Duration::from_millis(3)],
            interventions: 1,
            traces: 2,
            length: 5,
            ..RunStats::default()
        };
        assert_eq!(st.avg(), Duration::from_millis(2));
        assert!(st.to_key_values().contains("enforced=1\n"));
        assert!(st.to_key_values().contains("max_s=0.003000\n"));
    }

    #[test]
    fn bench_is_deterministic_in_interventions() {
        let a = bench_od(&[2], &[0.05], 6, 50, 1, &EnforceConfig::default()).unwrap();
        let b = bench_od(&[2], &[0.05], 6, 50, 1, &EnforceConfig::default()).unwrap();
        assert_eq!(a[0].stats.interventions, b[0].stats.interventions);
        assert_eq!(a[0].stats.runs(), 6);
        assert!(format_table(&a).lines().count() == 2);
    }
}
