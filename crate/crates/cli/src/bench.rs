use std::collections::BTreeMap;
use std::time::Instant;

use dyncorr::{mc_run, Design, Dist, McSummary, SimDesign, WindowSize};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::table::write_json;
use crate::BenchArgs;

#[derive(Debug, Serialize)]
struct Meta {
    design: Design,
    dist: Dist,
    t_len: usize,
    reps: usize,
    window: usize,
    seed: u64,
    wall_time_s: f64,
    version: &'static str,
}

#[derive(Debug, Serialize)]
struct Report {
    meta: Meta,
    #[serde(flatten)]
    methods: BTreeMap<&'static str, McSummary>,
}

pub fn run(args: &BenchArgs) -> CliResult<()> {
    if args.reps == 0 {
        return Err(CliError::usage("--reps must be at least 1"));
    }
    let ws = WindowSize::new(args.window).map_err(|e| CliError::usage(e.to_string()))?;
    let design = SimDesign::named(args.design, args.dist, args.t_len, args.seed)?;
    let started = Instant::now();
    let mut methods = BTreeMap::new();
    for &m in &args.methods {
        if !methods.contains_key(m.name()) {
            methods.insert(m.name(), mc_run(&design, m, ws, args.reps)?);
        }
    }
    let report = Report {
        meta: Meta {
            design: args.design,
            dist: args.dist,
            t_len: args.t_len,
            reps: args.reps,
            window: args.window,
            seed: args.seed,
            wall_time_s: started.elapsed().as_secs_f64(),
            version: env!("CARGO_PKG_VERSION"),
        },
        methods,
    };
    write_json(&args.out, &report)
}
