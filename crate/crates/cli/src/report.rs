//! JSON report assembly. Exact runs print rationals as strings (`"1/3"`,
//! `"0.5"`); float runs print numbers rounded to 12 significant digits.

use mmflow::bench::BenchConfig;
use mmflow::joint::{IterationRecord, SolveReport};
use mmflow::scalar::{format_float, format_rational};
use mmflow::{Network, RateVector, Rational, Scalar, SessionSet, SolveOptions};
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug)]
pub struct Fmt {
    pub exact: bool,
}

impl Fmt {
    pub fn num(self, r: &Rational) -> Value {
        if self.exact {
            Value::String(format_rational(r))
        } else {
            float_value(r.to_f64())
        }
    }

    pub fn vec(self, v: &[Rational]) -> Value {
        Value::Array(v.iter().map(|r| self.num(r)).collect())
    }

    pub fn rate(self, v: &RateVector) -> Value {
        self.vec(&v.0)
    }

    /// `{link id: value}` in link order.
    pub fn per_link(self, net: &Network, v: &[Rational], skip_zero: bool) -> Value {
        let mut m = Map::new();
        for (l, x) in v.iter().enumerate() {
            if skip_zero && num_traits::Zero::is_zero(x) {
                continue;
            }
            m.insert(net.links()[l].id.clone(), self.num(x));
        }
        Value::Object(m)
    }
}

pub fn float_value(x: f64) -> Value {
    let text = format_float(x);
    match text
        .parse::<f64>()
        .ok()
        .and_then(serde_json::Number::from_f64)
    {
        Some(n) if text.contains(['.', 'e']) => Value::Number(n),
        _ => text
            .parse::<i64>()
            .map(|i| Value::Number(i.into()))
            .unwrap_or(Value::String(text)),
    }
}

/// Caps in force, for the report header.
pub fn caps_json(opts: &SolveOptions) -> Value {
    json!({
        "graph_vertices": opts.graph_limits.max_vertices,
        "graph_edges": opts.graph_limits.max_edges,
        "cycles": opts.max_cycles,
        "independent_sets": opts.max_independent_sets,
        "iterations": opts.max_iterations,
    })
}

pub struct Header<'a> {
    pub command: &'a str,
    pub input: Option<&'a str>,
    pub opts: &'a SolveOptions,
    pub seed: Option<u64>,
}

impl Header<'_> {
    pub fn to_json(&self) -> Value {
        json!({
            "tool": "mmflow",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "input": self.input,
            "kind": self.opts.kind.to_string(),
            "mode": self.opts.mode.to_string(),
            "arithmetic": if self.opts.exact { "exact" } else { "float" },
            "tolerance": self.opts.tolerance(),
            "window": self.opts.window,
            "seed": self.seed,
            "prefer_total_rate": self.opts.prefer_total_rate,
            "parallel": mmflow::par::is_parallel(),
            "caps": caps_json(self.opts),
        })
    }
}

fn sessions_json(f: Fmt, net: &Network, sessions: &SessionSet, rates: &[Rational]) -> Value {
    let node = |i: usize| net.nodes()[i].clone();
    Value::Array(
        sessions
            .iter()
            .zip(rates)
            .enumerate()
            .map(|(i, (s, r))| {
                json!({
                    "session": i,
                    "source": node(s.source),
                    "sinks": s.sinks.iter().map(|&t| node(t)).collect::<Vec<_>>(),
                    "gamma": f.num(&s.gamma),
                    "rate": f.num(r),
                })
            })
            .collect(),
    )
}

fn iteration_json(f: Fmt, it: &IterationRecord) -> Value {
    json!({
        "region_size": it.region_size,
        "objective": f.num(&it.objective),
        "dual": f.vec(&it.dual),
        "fallback_weights": it.fallback_weights,
        "vertex": f.rate(&it.vertex),
        "score": f.num(&it.score),
        "incumbent": f.num(&it.incumbent),
        "added": it.added,
    })
}

pub fn solve_report(
    header: Header<'_>,
    net: &Network,
    sessions: &SessionSet,
    r: &SolveReport,
    trace: bool,
) -> Map<String, Value> {
    let f = Fmt { exact: r.exact };
    let sol = &r.solution;
    let mut m = Map::new();
    m.insert("header".into(), header.to_json());
    m.insert("method".into(), json!(r.method.to_string()));
    m.insert("oracle".into(), json!(r.oracle.to_string()));
    if let (Some(v), Some(e)) = (r.graph_vertices, r.graph_edges) {
        m.insert(
            "scheduling_graph".into(),
            json!({ "window": r.window, "vertices": v, "edges": e }),
        );
    }
    m.insert("objective".into(), f.num(&r.objective));
    m.insert(
        "sessions".into(),
        sessions_json(f, net, sessions, &sol.rates),
    );
    m.insert("link_rates".into(), f.per_link(net, &sol.rate, false));
    m.insert("link_prices".into(), f.per_link(net, &sol.dual, false));
    let region: Vec<Value> = r
        .region
        .vertices()
        .iter()
        .zip(&sol.lambda)
        .map(|(v, w)| json!({ "lambda": f.num(w), "vector": f.rate(v) }))
        .collect();
    m.insert("vertices_used".into(), json!(r.vertices_used()));
    m.insert("region".into(), Value::Array(region));
    let mut flows = Vec::new();
    for (i, s) in sessions.iter().enumerate() {
        for (j, &t) in s.sinks.iter().enumerate() {
            flows.push(json!({
                "session": i,
                "sink": net.nodes()[t],
                "links": f.per_link(net, &sol.flows[i][j], true),
            }));
        }
    }
    m.insert("flows".into(), Value::Array(flows));
    m.insert("iterations".into(), json!(r.iterations.len()));
    m.insert("rounding_anomaly".into(), json!(r.rounding_anomaly));
    if trace {
        m.insert(
            "trace".into(),
            Value::Array(
                r.iterations
                    .iter()
                    .map(|it| iteration_json(f, it))
                    .collect(),
            ),
        );
    }
    m
}

pub fn bench_header(cfg: &BenchConfig) -> String {
    format!(
        "# mmflow {} bench suite={} max_L={} seed={} mode={} arithmetic={} tolerance={:e} parallel={}",
        env!("CARGO_PKG_VERSION"),
        cfg.suite,
        cfg.max_links,
        cfg.seed,
        cfg.options.mode,
        if cfg.options.exact { "exact" } else { "float" },
        cfg.options.tolerance(),
        mmflow::par::is_parallel(),
    )
}
