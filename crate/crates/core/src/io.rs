//! Seed files, trace files, and report serialisation.
//!
//! Seed file grammar, one directive per line, `#` starts a comment:
//!
//! ```text
//! hook h
//! edge h h      # a loop
//! edge h m
//! edge m b
//! edge m b      # second copy: a parallel edge
//! ```
//!
//! The hook becomes id 1; other names take ids 2, 3, ... in order of first
//! appearance.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, ParseError};
use crate::growth::{replay, GrowthOptions, GrowthState, GrowthTrace, RecordedRow};
use crate::montecarlo::StatsReport;
use crate::multigraph::{MultiGraph, VertexId};
use crate::seed::{profile_seed, validate_seed, SeedProfile, SeedSpec};
use crate::sequence::BuildingSequence;

/// Serde adapter writing exact rationals as `"num/den"` (or `"num"`).
pub mod rational_string {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use crate::Rational;

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&value.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(|_| D::Error::custom(format!("bad rational '{text}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedSeed {
    pub spec: SeedSpec,
    /// Input name of each vertex, indexed by `VertexId::index`.
    pub names: Vec<String>,
}

pub fn parse_seed(text: &str) -> Result<ParsedSeed, Error> {
    let mut hook: Option<String> = None;
    let mut edges: Vec<(usize, String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let err = |message: String| ParseError::Line { line, message };
        match tokens.as_slice() {
            ["hook", name] => {
                if hook.is_some() {
                    return Err(err("second `hook` line; a seed has exactly one hook".into()).into());
                }
                hook = Some((*name).to_string());
            }
            ["hook", ..] => return Err(err("expected `hook <name>`".into()).into()),
            ["edge", u, v] => edges.push((line, (*u).to_string(), (*v).to_string())),
            ["edge", ..] => return Err(err(format!("expected `edge <u> <v>`, got `{content}`")).into()),
            [other, ..] => return Err(err(format!("unknown directive `{other}`")).into()),
            [] => unreachable!(),
        }
    }
    let hook = hook.ok_or(ParseError::MissingHook)?;
    let mut names = vec![hook.clone()];
    let mut ids: HashMap<String, u32> = HashMap::from([(hook, 1)]);
    let mut id_of = |name: &str| -> u32 {
        if let Some(&id) = ids.get(name) {
            return id;
        }
        names.push(name.to_string());
        let id = names.len() as u32;
        ids.insert(name.to_string(), id);
        id
    };
    let numbered: Vec<(u32, u32)> = edges.iter().map(|(_, u, v)| (id_of(u), id_of(v))).collect();
    let graph = MultiGraph::from_edges(names.len(), &numbered).expect("ids assigned densely");
    let spec = SeedSpec::new(graph, VertexId::REFERENCE)?;
    validate_seed(&spec)?;
    Ok(ParsedSeed { spec, names })
}

/// Canonical text of a seed: numeric ids, hook 1, edges in stored order.
pub fn canonical_seed(spec: &SeedSpec) -> String {
    let mut out = String::from("hook 1\n");
    for (u, v) in spec.graph().edges() {
        let _ = writeln!(out, "edge {u} {v}");
    }
    out
}

/// SHA-256 of the canonical seed text, hex encoded.
pub fn seed_digest(spec: &SeedSpec) -> String {
    hex::encode(Sha256::digest(canonical_seed(spec).as_bytes()))
}

/// One `u v` line per edge copy.
pub fn edge_list(graph: &MultiGraph) -> String {
    let mut out = String::new();
    for (u, v) in graph.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceFile {
    pub seed_digest: String,
    pub sequence_spec: String,
    /// Canonical seed text, so a trace can be replayed on its own.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<String>,
    pub steps: Vec<Vec<VertexId>>,
    pub recorded: Vec<RecordedRow>,
}

impl TraceFile {
    pub fn new(spec: &SeedSpec, sequence: &BuildingSequence, trace: &GrowthTrace) -> Self {
        Self {
            seed_digest: seed_digest(spec),
            sequence_spec: sequence.to_string(),
            seed: Some(canonical_seed(spec)),
            steps: trace.steps.clone(),
            recorded: trace.recorded.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serialises")
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| ParseError::Trace(e.to_string()).into())
    }

    /// The seed embedded in the trace, checked against the digest.
    pub fn embedded_seed(&self) -> Result<SeedSpec, Error> {
        let text = self
            .seed
            .as_deref()
            .ok_or_else(|| ParseError::Trace("no embedded seed; supply a seed file".into()))?;
        let spec = parse_seed(text)?.spec;
        self.check_seed(&spec)?;
        Ok(spec)
    }

    pub fn check_seed(&self, spec: &SeedSpec) -> Result<(), Error> {
        let digest = seed_digest(spec);
        if digest != self.seed_digest {
            return Err(ParseError::Trace(format!(
                "seed digest {digest} does not match the trace's {}",
                self.seed_digest
            ))
            .into());
        }
        Ok(())
    }
}

/// A recorded scalar that replay did not reproduce.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub n: usize,
    pub field: String,
    pub recorded: String,
    pub replayed: String,
}

#[derive(Debug, Clone)]
pub struct ReplayOutcome {
    pub state: GrowthState,
    pub trace: GrowthTrace,
    pub mismatches: Vec<Mismatch>,
}

/// Replays `file` on `spec` and diffs every recorded scalar.
pub fn replay_trace(file: &TraceFile, spec: &SeedSpec) -> Result<ReplayOutcome, Error> {
    file.check_seed(spec)?;
    let sequence: BuildingSequence = file.sequence_spec.parse()?;
    let profile: Arc<SeedProfile> = Arc::new(profile_seed(spec)?);
    let track_ecc = file
        .recorded
        .iter()
        .any(|r| r.diameter.is_some() || r.reference_ecc.is_some());
    let options = GrowthOptions {
        track_ecc,
        ..GrowthOptions::default()
    };
    let (state, trace) = replay(profile, sequence, &file.steps, options)?;
    let mut mismatches = Vec::new();
    if file.recorded.len() != trace.recorded.len() {
        mismatches.push(Mismatch {
            n: file.recorded.len().min(trace.recorded.len()),
            field: "rows".into(),
            recorded: file.recorded.len().to_string(),
            replayed: trace.recorded.len().to_string(),
        });
    }
    for (want, got) in file.recorded.iter().zip(&trace.recorded) {
        let mut check = |field: &str, a: String, b: String| {
            if a != b {
                mismatches.push(Mismatch {
                    n: want.n,
                    field: field.into(),
                    recorded: a,
                    replayed: b,
                });
            }
        };
        check("n", want.n.to_string(), got.n.to_string());
        check("order", want.order.to_string(), got.order.to_string());
        check("edges", want.edges.to_string(), got.edges.to_string());
        check(
            "min_degree_count",
            want.min_degree_count.to_string(),
            got.min_degree_count.to_string(),
        );
        check(
            "total_path_length",
            want.total_path_length.to_string(),
            got.total_path_length.to_string(),
        );
        check("diameter", format!("{:?}", want.diameter), format!("{:?}", got.diameter));
        check(
            "reference_ecc",
            format!("{:?}", want.reference_ecc),
            format!("{:?}", got.reference_ecc),
        );
        check(
            "seed_vertex_degrees",
            format!("{:?}", want.seed_vertex_degrees),
            format!("{:?}", got.seed_vertex_degrees),
        );
    }
    Ok(ReplayOutcome {
        state,
        trace,
        mismatches,
    })
}

/// Renders a float with 17 significant digits.
pub fn float17(x: f64) -> String {
    format!("{x:.16e}")
}

pub const CSV_HEADER: &str = "stat,n,mean,variance,se,theory,z,pass";

/// `stat,n,mean,variance,se,theory,z,pass`; `z` is empty when the variance
/// is zero.
pub fn report_csv(report: &StatsReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            row.stat,
            row.n,
            float17(row.mean),
            float17(row.variance),
            float17(row.se),
            float17(crate::to_f64(&row.theory)),
            row.z.map(float17).unwrap_or_default(),
            row.pass
        );
    }
    out
}

/// JSON sidecar with the exact theory values.
pub fn report_json(report: &StatsReport) -> String {
    serde_json::to_string_pretty(report).expect("report serialises")
}
