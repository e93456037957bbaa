//! JSON network/session file format.
//!
//! ```json
//! {
//!   "nodes": ["1", "2", "3"],
//!   "links": [{"id": "l1", "tail": "1", "head": "2"}, ...],
//!   "collisions": {"l1": ["l2"], "l2": ["l1"]},
//!   "delays": [{"from": "l1", "to": "l2", "d": 0}, ...],
//!   "sessions": [{"source": "1", "sinks": ["3"], "gamma": "1"}]
//! }
//! ```
//!
//! `gamma` may be a JSON number or a decimal/fraction string and defaults
//! to 1. Writers always emit it as a string so the value round-trips exactly.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::{Link, Network, Session, SessionSet, ViolationKind};
use crate::scalar::{format_rational, parse_rational, Rational};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NetFile {
    pub nodes: Vec<String>,
    pub links: Vec<LinkEntry>,
    #[serde(default)]
    pub collisions: IndexMap<String, Vec<String>>,
    #[serde(default)]
    pub delays: Vec<DelayEntry>,
    #[serde(default)]
    pub sessions: Vec<SessionEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LinkEntry {
    pub id: String,
    pub tail: String,
    pub head: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DelayEntry {
    pub from: String,
    pub to: String,
    pub d: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SessionEntry {
    pub source: String,
    pub sinks: Vec<String>,
    #[serde(default)]
    pub gamma: Option<serde_json::Value>,
}

/// One problem found while reading a netfile, anchored to a line when known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "line {l}, column {c}: {}", self.message),
            (Some(l), None) => write!(f, "line {l}: {}", self.message),
            _ => f.write_str(&self.message),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetfileError {
    pub diagnostics: Vec<Diagnostic>,
}

impl fmt::Display for NetfileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.diagnostics.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for NetfileError {}

/// Parses and validates a netfile.
pub fn parse(text: &str) -> Result<(Network, SessionSet), NetfileError> {
    let file: NetFile = serde_json::from_str(text).map_err(|e| NetfileError {
        diagnostics: vec![Diagnostic {
            line: Some(e.line()),
            column: Some(e.column()),
            message: e.to_string(),
        }],
    })?;
    let mut diags = Vec::new();
    let Some((net, sessions)) = resolve(&file, text, &mut diags) else {
        return Err(NetfileError { diagnostics: diags });
    };
    for v in net.validate() {
        let line = match v.kind {
            ViolationKind::DuplicateNode => find_line(text, &[&quoted(&v.subject)]),
            ViolationKind::DuplicateLink | ViolationKind::UnknownEndpoint => {
                find_line(text, &[&format!("\"id\":{}", quoted(&v.subject))])
            }
            ViolationKind::DelayWithoutCollision => {
                let from = format!("\"from\":{}", quoted(&v.subject));
                let to = format!("\"to\":{}", quoted(v.other.as_deref().unwrap_or("")));
                find_line(text, &[&from, &to]).or_else(|| find_line(text, &[&from]))
            }
            _ => find_line(text, &[&format!("{}:", quoted(&v.subject))]),
        };
        diags.push(Diagnostic {
            line,
            column: None,
            message: v.to_string(),
        });
    }
    for problem in sessions.validate(&net) {
        diags.push(Diagnostic {
            line: find_line(text, &["\"sessions\""]),
            column: None,
            message: problem,
        });
    }
    if diags.is_empty() {
        Ok((net, sessions))
    } else {
        Err(NetfileError { diagnostics: diags })
    }
}

fn resolve(
    file: &NetFile,
    text: &str,
    diags: &mut Vec<Diagnostic>,
) -> Option<(Network, SessionSet)> {
    let start = diags.len();
    let mut node_ix = HashMap::new();
    for (i, n) in file.nodes.iter().enumerate() {
        node_ix.entry(n.as_str()).or_insert(i);
    }
    let mut link_ix = HashMap::new();
    for (i, l) in file.links.iter().enumerate() {
        link_ix.entry(l.id.as_str()).or_insert(i);
    }
    let unknown = |what: &str, name: &str, diags: &mut Vec<Diagnostic>| {
        diags.push(Diagnostic {
            line: find_line(text, &[&quoted(name)]),
            column: None,
            message: format!("unknown {what} `{name}`"),
        });
    };

    let mut links = Vec::with_capacity(file.links.len());
    for l in &file.links {
        let tail = node_ix.get(l.tail.as_str()).copied();
        let head = node_ix.get(l.head.as_str()).copied();
        if tail.is_none() {
            unknown("node", &l.tail, diags);
        }
        if head.is_none() {
            unknown("node", &l.head, diags);
        }
        links.push(Link {
            id: l.id.clone(),
            tail: tail.unwrap_or(usize::MAX),
            head: head.unwrap_or(usize::MAX),
        });
    }

    let mut collisions = vec![BTreeSet::new(); links.len()];
    for (from, targets) in &file.collisions {
        let Some(&a) = link_ix.get(from.as_str()) else {
            unknown("link", from, diags);
            continue;
        };
        for to in targets {
            match link_ix.get(to.as_str()) {
                Some(&b) => {
                    collisions[a].insert(b);
                }
                None => unknown("link", to, diags),
            }
        }
    }
    let mut delays = BTreeMap::new();
    for d in &file.delays {
        match (link_ix.get(d.from.as_str()), link_ix.get(d.to.as_str())) {
            (Some(&a), Some(&b)) => {
                if delays.insert((a, b), d.d).is_some() {
                    diags.push(Diagnostic {
                        line: find_line(text, &[&format!("\"from\":{}", quoted(&d.from))]),
                        column: None,
                        message: format!("delay for (`{}`, `{}`) given twice", d.from, d.to),
                    });
                }
            }
            (a, b) => {
                if a.is_none() {
                    unknown("link", &d.from, diags);
                }
                if b.is_none() {
                    unknown("link", &d.to, diags);
                }
            }
        }
    }

    let mut sessions = Vec::with_capacity(file.sessions.len());
    for s in &file.sessions {
        let source = node_ix.get(s.source.as_str()).copied();
        if source.is_none() {
            unknown("node", &s.source, diags);
        }
        let mut sinks = Vec::with_capacity(s.sinks.len());
        for t in &s.sinks {
            match node_ix.get(t.as_str()) {
                Some(&ix) => sinks.push(ix),
                None => unknown("node", t, diags),
            }
        }
        let gamma = match &s.gamma {
            None => Some(Rational::from_integer(1.into())),
            Some(serde_json::Value::Number(n)) => parse_rational(&n.to_string()),
            Some(serde_json::Value::String(txt)) => parse_rational(txt),
            Some(_) => None,
        };
        let Some(gamma) = gamma else {
            diags.push(Diagnostic {
                line: find_line(text, &["\"gamma\""]),
                column: None,
                message: format!("session from `{}` has an unreadable gamma", s.source),
            });
            continue;
        };
        sessions.push(Session {
            source: source.unwrap_or(usize::MAX),
            sinks,
            gamma,
        });
    }

    if diags.len() > start {
        return None;
    }
    let net = Network::from_parts(file.nodes.clone(), links, collisions, delays);
    Some((net, SessionSet::new(sessions)))
}

fn quoted(s: &str) -> String {
    serde_json::to_string(s).unwrap_or_else(|_| format!("\"{s}\""))
}

/// 1-based line of the first line that contains every needle once
/// whitespace is stripped.
fn find_line(text: &str, needles: &[&str]) -> Option<usize> {
    text.lines().enumerate().find_map(|(i, line)| {
        let compact: String = line.chars().filter(|c| !c.is_whitespace()).collect();
        needles
            .iter()
            .all(|n| compact.contains(&n.replace(char::is_whitespace, "")))
            .then_some(i + 1)
    })
}

pub fn to_netfile(net: &Network, sessions: &SessionSet) -> NetFile {
    let node = |i: usize| net.nodes()[i].clone();
    let link = |i: usize| net.links()[i].id.clone();
    let links = net
        .links()
        .iter()
        .map(|l| LinkEntry {
            id: l.id.clone(),
            tail: node(l.tail),
            head: node(l.head),
        })
        .collect();
    let collisions = (0..net.link_count())
        .filter(|&l| !net.collision_set(l).is_empty())
        .map(|l| {
            (
                link(l),
                net.collision_set(l).iter().map(|&o| link(o)).collect(),
            )
        })
        .collect();
    let delays = net
        .delays()
        .iter()
        .map(|(&(a, b), &d)| DelayEntry {
            from: link(a),
            to: link(b),
            d,
        })
        .collect();
    let sessions = sessions
        .iter()
        .map(|s| SessionEntry {
            source: node(s.source),
            sinks: s.sinks.iter().map(|&t| node(t)).collect(),
            gamma: Some(serde_json::Value::String(format_rational(&s.gamma))),
        })
        .collect();
    NetFile {
        nodes: net.nodes().to_vec(),
        links,
        collisions,
        delays,
        sessions,
    }
}

/// Pretty-printed netfile text; identical inputs give identical bytes.
pub fn write(net: &Network, sessions: &SessionSet) -> String {
    let mut text = serde_json::to_string_pretty(&to_netfile(net, sessions))
        .expect("netfile serialization cannot fail");
    text.push('\n');
    text
}
