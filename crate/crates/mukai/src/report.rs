//! Report assembly, worker pool and exit-code policy.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::checks::{run_checks, CheckResult, Status};
use crate::spec::InstanceSpec;

pub const WORKERS_ENV: &str = "MUKAI_WORKERS";

#[derive(Clone, Debug, Serialize)]
pub struct InstanceReport {
    pub spec: InstanceSpec,
    pub results: BTreeMap<String, CheckResult>,
}

impl InstanceReport {
    pub fn all_pass(&self) -> bool {
        self.results.values().all(|r| r.status == Status::Pass)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub total_ms: u128,
    pub instances_ms: Vec<u128>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: &'static str,
    pub instances: Vec<InstanceReport>,
    pub timing: Timing,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.instances.iter().all(InstanceReport::all_pass)
    }

    /// 0 when every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    /// Pretty JSON with every object's keys in sorted order.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("reports serialize");
        serde_json::to_string_pretty(&v).expect("reports serialize")
    }

    /// The JSON document without its timing field.
    pub fn stable_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        strip_timing(&mut v);
        serde_json::to_string_pretty(&v).expect("reports serialize")
    }
}

pub fn strip_timing(v: &mut Value) {
    if let Value::Object(map) = v {
        map.remove("timing");
    }
}

fn pool() -> rayon::ThreadPool {
    let workers = std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|w| w.parse::<usize>().ok())
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
}

/// Runs every instance, possibly in parallel; output order follows input order.
pub fn run_batch(specs: Vec<InstanceSpec>) -> Report {
    let start = Instant::now();
    let timed: Vec<(InstanceReport, u128)> = pool().install(|| {
        specs
            .into_par_iter()
            .map(|spec| {
                let t = Instant::now();
                let results = run_checks(&spec);
                (InstanceReport { spec, results }, t.elapsed().as_millis())
            })
            .collect()
    });
    let (instances, instances_ms) = timed.into_iter().unzip();
    Report {
        version: env!("CARGO_PKG_VERSION"),
        instances,
        timing: Timing {
            total_ms: start.elapsed().as_millis(),
            instances_ms,
        },
    }
}
