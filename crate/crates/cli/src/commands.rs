use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use mmflow::baseline::{extreme_points, two_step_solve};
use mmflow::bench::{run_suite, BenchConfig, BenchRow, Suite};
use mmflow::mwis::mwis_solve;
use mmflow::net::netfile::{self, Diagnostic};
use mmflow::net::{gen_bidir_line_scd, gen_line_network, gen_random_acyclic, line_unicast};
use mmflow::net::{BidirOptions, RandomNetConfig};
use mmflow::scalar::{format_float, parse_rational};
use mmflow::sched::{
    build_scheduling_graph, cycle_to_rate_vector, max_mean_cycle, min_window, weight_graph,
};
use mmflow::{solve, Network, Rational, SessionSet, SolveOptions};
use serde_json::{json, Map, Value};

use crate::error::{CliError, CliResult};
use crate::report::{self, Fmt, Header};

pub fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })
}

pub fn load(path: &Path) -> CliResult<(Network, SessionSet)> {
    netfile::parse(&read(path)?).map_err(|source| CliError::Netfile {
        path: path.to_owned(),
        source,
    })
}

/// Whitespace- or comma-separated rationals; `#` starts a comment. A JSON
/// array of numbers or strings also parses.
pub fn parse_weights(text: &str, expected: usize, path: &Path) -> CliResult<Vec<Rational>> {
    let mut out = Vec::new();
    let mut diagnostics = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        for tok in body.split(|c: char| c.is_whitespace() || matches!(c, ',' | '[' | ']')) {
            let tok = tok.trim_matches('"');
            if tok.is_empty() {
                continue;
            }
            match parse_rational(tok) {
                Some(r) => out.push(r),
                None => diagnostics.push(Diagnostic {
                    line: Some(i + 1),
                    column: None,
                    message: format!("`{tok}` is not a number"),
                }),
            }
        }
    }
    if diagnostics.is_empty() && out.len() != expected {
        diagnostics.push(Diagnostic {
            line: None,
            column: None,
            message: format!(
                "expected {expected} weights (one per link), found {}",
                out.len()
            ),
        });
    }
    if diagnostics.is_empty() {
        Ok(out)
    } else {
        Err(CliError::Weights {
            path: path.to_owned(),
            diagnostics,
        })
    }
}

pub fn emit(value: &Value, out: Option<&Path>) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("report serializes") + "\n";
    write_text(&text, out)
}

pub fn write_text(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Write {
            path: path.to_owned(),
            source,
        }),
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

pub fn cmd_solve(path: &Path, opts: &SolveOptions, trace: bool) -> CliResult<Value> {
    let (net, sessions) = load(path)?;
    let r = solve(&net, &sessions, opts)?;
    let header = Header {
        command: "solve",
        input: path.to_str(),
        opts,
        seed: None,
    };
    Ok(Value::Object(report::solve_report(
        header, &net, &sessions, &r, trace,
    )))
}

pub fn cmd_baseline(path: &Path, opts: &SolveOptions, hull: bool) -> CliResult<Value> {
    let (net, sessions) = load(path)?;
    let r = two_step_solve(&net, &sessions, opts)?;
    let header = Header {
        command: "baseline",
        input: path.to_str(),
        opts,
        seed: None,
    };
    let mut m = report::solve_report(header, &net, &sessions, &r, false);
    // The raw region can be huge; list only the vectors the LP weighted.
    let f = Fmt { exact: r.exact };
    let used: Vec<Value> = r
        .region
        .vertices()
        .iter()
        .zip(&r.solution.lambda)
        .filter(|(_, w)| !num_traits::Zero::is_zero(*w))
        .map(|(v, w)| json!({ "lambda": f.num(w), "vector": f.rate(v) }))
        .collect();
    m.insert("region".into(), Value::Array(used));
    let mut stats = Map::new();
    stats.insert("region_size".into(), json!(r.region.len()));
    if hull {
        let ext = extreme_points(r.region.vertices());
        stats.insert("extreme_points".into(), json!(ext.len()));
        stats.insert(
            "extreme_point_list".into(),
            Value::Array(ext.iter().map(|v| Fmt { exact: true }.rate(v)).collect()),
        );
    }
    m.insert("region_stats".into(), Value::Object(stats));
    Ok(Value::Object(m))
}

pub enum GenSpec {
    Line { links: usize, k: usize, d: i64 },
    Bidir { nodes: usize, opts: BidirOptions },
    Random { cfg: RandomNetConfig, seed: u64 },
}

pub fn cmd_gen(spec: &GenSpec) -> CliResult<String> {
    let (net, sessions) = match spec {
        GenSpec::Line { links, k, d } => {
            let net = gen_line_network(*links, *k, *d)?;
            let s = line_unicast(&net);
            (net, s)
        }
        GenSpec::Bidir { nodes, opts } => gen_bidir_line_scd(*nodes, opts)?,
        GenSpec::Random { cfg, seed } => {
            let inst = gen_random_acyclic(cfg, *seed)?;
            if inst.seed_offset > 0 {
                eprintln!(
                    "note: generator reseeded {} time(s); effective seed {}",
                    inst.seed_offset,
                    seed.wrapping_add(inst.seed_offset)
                );
            }
            (inst.network, inst.sessions)
        }
    };
    Ok(netfile::write(&net, &sessions))
}

pub fn cmd_oracle_mwis(net_path: &Path, weights_path: &Path) -> CliResult<Value> {
    let (net, _) = load(net_path)?;
    let w = parse_weights(&read(weights_path)?, net.link_count(), weights_path)?;
    let sol = mwis_solve::<Rational>(&net, &w)?;
    let f = Fmt { exact: true };
    Ok(json!({
        "header": { "tool": "mmflow", "command": "oracle-mwis", "input": net_path, "weights": weights_path },
        "selected": sol.selected.iter().map(|&l| net.links()[l].id.clone()).collect::<Vec<_>>(),
        "value": f.num(&sol.value),
        "indicator": f.rate(&sol.indicator),
    }))
}

pub fn cmd_oracle_mmc(
    net_path: &Path,
    weights_path: &Path,
    window: Option<usize>,
    opts: &SolveOptions,
    dump: bool,
) -> CliResult<Value> {
    let (net, _) = load(net_path)?;
    let w = parse_weights(&read(weights_path)?, net.link_count(), weights_path)?;
    let window = window.unwrap_or_else(|| min_window(&net));
    let g = build_scheduling_graph(&net, window, opts.graph_limits)?;
    let wg = weight_graph(&g, &w)?;
    let f = Fmt { exact: true };
    let mut m = Map::new();
    m.insert(
        "header".into(),
        json!({ "tool": "mmflow", "command": "oracle-mmc", "input": net_path, "weights": weights_path, "window": window }),
    );
    m.insert(
        "scheduling_graph".into(),
        json!({ "vertices": g.vertex_count(), "edges": g.edge_count() }),
    );
    match max_mean_cycle(&wg) {
        Some(best) => {
            let rate = cycle_to_rate_vector(&g, &best.cycle);
            let score = rate.dot(&w);
            m.insert("max_mean".into(), f.num(&best.mean));
            m.insert("cycle".into(), json!(best.cycle));
            m.insert(
                "blocks".into(),
                json!(best
                    .cycle
                    .iter()
                    .map(|&v| g.block_bits(v))
                    .collect::<Vec<_>>()),
            );
            m.insert("rate_vector".into(), f.rate(&rate));
            m.insert("score".into(), f.num(&score));
        }
        None => {
            m.insert("max_mean".into(), Value::Null);
        }
    }
    if dump {
        m.insert(
            "graph_dump".into(),
            json!(g.dump().lines().collect::<Vec<_>>()),
        );
    }
    Ok(Value::Object(m))
}

pub fn cmd_bench(cfg: &BenchConfig, out: Option<&PathBuf>) -> CliResult<()> {
    eprintln!("{}", report::bench_header(cfg));
    let rows = run_suite(cfg)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(BenchRow::HEADER)?;
    let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in &rows {
        if let Some(e) = &r.error {
            eprintln!("note: {} ({}) did not complete: {e}", r.instance, r.method);
        }
        w.write_record([
            r.instance.clone(),
            r.links.to_string(),
            r.method.to_string(),
            r.objective.map(format_float).unwrap_or_default(),
            opt(r.vertices_used),
            opt(r.region_size),
            format!("{:.3}", r.millis),
        ])?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| csv::Error::from(e.into_error()))?;
    write_text(&String::from_utf8_lossy(&bytes), out.map(PathBuf::as_path))
}

pub fn suite(name: &str) -> CliResult<Suite> {
    name.parse::<Suite>()
        .map_err(|e| CliError::Usage(e.to_string()))
}
