//! Desk-scale benchmark suites comparing the joint solver with the two-step
//! method. Instances run one after another so timings do not interfere.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::baseline::two_step_solve;
use crate::error::{Error, Result};
use crate::joint::{solve, Method, Mode, SolveOptions, SolveReport};
use crate::lp::ProblemKind;
use crate::net::{
    gen_bidir_line_scd, gen_line_network, gen_random_acyclic, line_unicast, BidirOptions, Network,
    RandomNetConfig, SessionSet,
};
use crate::scalar::{rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Unicast lines with unit delays, `N_{L,1}`.
    Lines,
    /// Two opposite unicast sessions over a single collision domain.
    Bidir,
    /// As `Bidir`, concurrent flow with demands `1 : 1/2`.
    BidirMcmf,
    /// Random acyclic multicast networks without delay.
    Random,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Lines, Suite::Bidir, Suite::BidirMcmf, Suite::Random];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lines => "lines",
            Suite::Bidir => "bidir",
            Suite::BidirMcmf => "bidir-mcmf",
            Suite::Random => "random",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub suite: Suite,
    /// Largest link count generated; lines start at 3 links.
    pub max_links: usize,
    pub seed: u64,
    /// Random instances per size.
    pub random_per_size: usize,
    pub options: SolveOptions,
    pub skip_baseline: bool,
}

pub const BENCH_CYCLE_CAP: usize = 5_000_000;

impl BenchConfig {
    pub fn new(suite: Suite, max_links: usize) -> Self {
        BenchConfig {
            suite,
            max_links,
            seed: 1,
            random_per_size: 3,
            options: SolveOptions {
                max_cycles: BENCH_CYCLE_CAP,
                ..SolveOptions::default()
            },
            skip_baseline: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchInstance {
    pub name: String,
    pub network: Network,
    pub sessions: SessionSet,
    pub kind: ProblemKind,
}

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub instance: String,
    pub links: usize,
    pub method: Method,
    /// `None` when the method did not finish (for example a cap overflow).
    pub objective: Option<f64>,
    pub vertices_used: Option<usize>,
    pub region_size: Option<usize>,
    pub millis: f64,
    pub error: Option<String>,
}

impl BenchRow {
    pub const HEADER: [&'static str; 7] = [
        "instance",
        "|L|",
        "method",
        "objective",
        "vertices_used",
        "region_size_if_known",
        "millis",
    ];
}

pub fn instances(cfg: &BenchConfig) -> Result<Vec<BenchInstance>> {
    let mut out = Vec::new();
    match cfg.suite {
        Suite::Lines => {
            for l in 3..=cfg.max_links {
                let network = gen_line_network(l, 1, 1)?;
                out.push(BenchInstance {
                    name: format!("line-L{l}-K1-d1"),
                    sessions: line_unicast(&network),
                    network,
                    kind: ProblemKind::Mmf,
                });
            }
        }
        Suite::Bidir | Suite::BidirMcmf => {
            let (kind, gammas) = match cfg.suite {
                Suite::Bidir => (ProblemKind::Mmf, (rational(1, 1), rational(1, 1))),
                _ => (ProblemKind::Mcmf, (rational(1, 1), rational(1, 2))),
            };
            let opts = BidirOptions {
                gammas,
                ..BidirOptions::default()
            };
            for nodes in 2..=cfg.max_links / 2 + 1 {
                let (network, sessions) = gen_bidir_line_scd(nodes, &opts)?;
                out.push(BenchInstance {
                    name: format!("bidir-N{nodes}-{kind}"),
                    network,
                    sessions,
                    kind,
                });
            }
        }
        Suite::Random => {
            for nodes in 4..=cfg.max_links.max(4) {
                for k in 0..cfg.random_per_size {
                    let seed = cfg.seed + 1000 * nodes as u64 + k as u64;
                    let config = RandomNetConfig {
                        max_links: Some(cfg.max_links.max(nodes - 1)),
                        ..RandomNetConfig::new(nodes, 2)
                    };
                    let inst = gen_random_acyclic(&config, seed)?;
                    out.push(BenchInstance {
                        name: format!("random-n{nodes}-seed{}", seed + inst.seed_offset),
                        network: inst.network,
                        sessions: inst.sessions,
                        kind: ProblemKind::Mmf,
                    });
                }
            }
        }
    }
    Ok(out)
}

fn timed(f: impl FnOnce() -> Result<SolveReport>) -> (Result<SolveReport>, f64) {
    let start = Instant::now();
    let r = f();
    (r, start.elapsed().as_secs_f64() * 1e3)
}

/// Joint row first, then the two-step row unless skipped.
pub fn run_instance(inst: &BenchInstance, cfg: &BenchConfig) -> Vec<BenchRow> {
    let opts = SolveOptions {
        kind: inst.kind,
        mode: Mode::Auto,
        ..cfg.options.clone()
    };
    let links = inst.network.link_count();
    let row = |method, result: &Result<SolveReport>, millis, region_size| BenchRow {
        instance: inst.name.clone(),
        links,
        method,
        objective: result.as_ref().ok().map(|r| r.objective.to_f64()),
        vertices_used: result.as_ref().ok().map(SolveReport::vertices_used),
        region_size,
        millis,
        error: result.as_ref().err().map(|e| e.code().to_string()),
    };

    let (joint, joint_ms) = timed(|| solve(&inst.network, &inst.sessions, &opts));
    if cfg.skip_baseline {
        return vec![row(Method::Joint, &joint, joint_ms, None)];
    }
    let (two, two_ms) = timed(|| two_step_solve(&inst.network, &inst.sessions, &opts));
    let full = two.as_ref().ok().map(SolveReport::vertices_used);
    vec![
        row(Method::Joint, &joint, joint_ms, full),
        row(Method::TwoStep, &two, two_ms, full),
    ]
}

pub fn run_suite(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    Ok(instances(cfg)?
        .iter()
        .flat_map(|inst| run_instance(inst, cfg))
        .collect())
}
