//! Instance file parsing and report serialization.
//!
//! An instance file is a single JSON document, either a matrix instance
//! `{"A": [[...]], "y": [...]}` or a hypergraph
//! `{"n": 4, "edges": [[1,3],...], "b": [...], "partition": [[...]],
//! "stable_set": [...]}`. Vertex and row indices are 1-based in files and
//! 0-based internally.

use crate::counter::Instance;
use crate::error::{Error, Result};
use crate::matching::Hypergraph;
use crate::report::CountReport;
use crate::Int;
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    #[serde(rename = "A")]
    a: Option<Vec<Vec<i64>>>,
    y: Option<Vec<i64>>,
    n: Option<usize>,
    edges: Option<Vec<Vec<usize>>>,
    b: Option<Vec<i64>>,
    partition: Option<Vec<Vec<usize>>>,
    stable_set: Option<Vec<usize>>,
}

/// A parsed instance file: exactly one of a matrix instance or a
/// hypergraph, plus the optional stable-set hint (0-based).
#[derive(Debug)]
pub enum ParsedInstance {
    Matrix {
        instance: Instance,
        stable_set: Option<Vec<usize>>,
    },
    Hyper {
        hypergraph: Hypergraph,
        stable_set: Option<Vec<usize>>,
    },
}

fn to_zero_based(indices: &[usize], count: usize, what: &str) -> Result<Vec<usize>> {
    indices
        .iter()
        .map(|&v| {
            if v == 0 || v > count {
                Err(Error::Parse(format!(
                    "{what} index {v} out of range 1..={count}"
                )))
            } else {
                Ok(v - 1)
            }
        })
        .collect()
}

pub fn parse_instance(text: &str) -> Result<ParsedInstance> {
    let file: InstanceFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    match (&file.a, &file.edges) {
        (Some(_), Some(_)) => Err(Error::Parse(
            "document has both \"A\" and \"edges\"; pick one".into(),
        )),
        (Some(rows), None) => {
            let y = file
                .y
                .as_ref()
                .ok_or_else(|| Error::Parse("matrix instance needs field \"y\"".into()))?;
            if file.n.is_some() || file.b.is_some() || file.partition.is_some() {
                return Err(Error::Parse(
                    "matrix instances take only \"A\", \"y\" and \"stable_set\"".into(),
                ));
            }
            let instance = Instance::validate(rows, y)?;
            let stable_set = file
                .stable_set
                .as_deref()
                .map(|s| to_zero_based(s, instance.n(), "row"))
                .transpose()?;
            Ok(ParsedInstance::Matrix {
                instance,
                stable_set,
            })
        }
        (None, Some(edges)) => {
            let n = file
                .n
                .ok_or_else(|| Error::Parse("hypergraph needs field \"n\"".into()))?;
            if file.y.is_some() {
                return Err(Error::Parse(
                    "hypergraphs take \"b\" for demands, not \"y\"".into(),
                ));
            }
            let edges: Vec<Vec<usize>> = edges
                .iter()
                .map(|e| to_zero_based(e, n, "vertex"))
                .collect::<Result<_>>()?;
            let partition = file
                .partition
                .as_ref()
                .map(|parts| {
                    parts
                        .iter()
                        .map(|p| to_zero_based(p, n, "vertex"))
                        .collect::<Result<Vec<_>>>()
                })
                .transpose()?;
            let hypergraph = Hypergraph::new(n, edges, file.b.clone(), partition)?;
            let stable_set = file
                .stable_set
                .as_deref()
                .map(|s| to_zero_based(s, n, "vertex"))
                .transpose()?;
            Ok(ParsedInstance::Hyper {
                hypergraph,
                stable_set,
            })
        }
        (None, None) => Err(Error::Parse(
            "document has neither \"A\" nor \"edges\"".into(),
        )),
    }
}

/// JSON form of a report; a superset of the text output.
pub fn report_to_json(report: &CountReport, threads: usize, with_trace: bool) -> Value {
    let mut doc = json!({
        "count": report.count.to_string(),
        "N": report.modulus,
        "d": report.degree,
        "scale": report.scale.to_string(),
        "method": report.method.as_str(),
        "threads": threads,
        "sweep_terms": report.sweep_terms.to_string(),
        "elapsed_ms": report.elapsed.as_secs_f64() * 1e3,
    });
    if let Some(cells) = report.table_cells {
        doc["table_cells"] = json!(cells.to_string());
    }
    if with_trace {
        if let Some(coeffs) = &report.scaled_coeffs {
            doc["trace"] = json!({
                "scaled_coeffs": coeffs.iter().map(Int::to_string).collect::<Vec<_>>(),
                "steps": report
                    .trace
                    .iter()
                    .map(|s| json!([s.index, s.subtracted.to_string()]))
                    .collect::<Vec<_>>(),
            });
        }
    }
    doc
}

/// Deserialized report schema; the JSON output round-trips through this.
#[derive(Debug, Deserialize)]
pub struct ReportDoc {
    pub count: String,
    #[serde(rename = "N")]
    pub modulus: usize,
    pub d: u64,
    pub scale: String,
    pub method: String,
    pub threads: usize,
    pub sweep_terms: String,
    pub elapsed_ms: f64,
    pub table_cells: Option<String>,
    pub trace: Option<ReportTraceDoc>,
}

#[derive(Debug, Deserialize)]
pub struct ReportTraceDoc {
    pub scaled_coeffs: Vec<String>,
    pub steps: Vec<(usize, String)>,
}

pub fn parse_report(text: &str) -> Result<ReportDoc> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counter::count;

    #[test]
    fn parse_matrix_instance() {
        let parsed = parse_instance(r#"{"A": [[1,1,3],[1,1,1]], "y": [5,3]}"#).unwrap();
        let ParsedInstance::Matrix { instance, .. } = parsed else {
            panic!("expected matrix instance");
        };
        assert_eq!(instance.modulus(), 6);
        assert_eq!(instance.degree(), 8);
    }

    #[test]
    fn parse_hypergraph() {
        let parsed = parse_instance(
            r#"{"n": 4, "edges": [[1,3],[1,4],[2,3],[2,4]], "b": [2,2,2,2]}"#,
        )
        .unwrap();
        let ParsedInstance::Hyper { hypergraph, .. } = parsed else {
            panic!("expected hypergraph");
        };
        assert_eq!(hypergraph.vertex_count(), 4);
        assert_eq!(hypergraph.edges()[0], vec![0, 2]);
        assert_eq!(hypergraph.demands(), Some(&[2i64, 2, 2, 2][..]));
    }

    #[test]
    fn parse_rejects_zero_column() {
        let err = parse_instance(r#"{"A": [[1,0]], "y": [1]}"#).unwrap_err();
        assert!(matches!(err, Error::UnboundedPolytope { col: 2 }));
    }

    #[test]
    fn parse_rejects_bad_vertex_index() {
        let err = parse_instance(r#"{"n": 2, "edges": [[1,3]]}"#).unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
    }

    #[test]
    fn report_json_round_trips() {
        let inst = Instance::validate(&[vec![1, 1, 3], vec![1, 1, 1]], &[5, 3]).unwrap();
        let report = count(&inst, 1).unwrap();
        let doc = report_to_json(&report, 1, true);
        let parsed = parse_report(&doc.to_string()).unwrap();
        assert_eq!(parsed.count, "3");
        assert_eq!(parsed.modulus, 6);
        let trace = parsed.trace.unwrap();
        assert_eq!(trace.scaled_coeffs[0], "144");
    }
}
