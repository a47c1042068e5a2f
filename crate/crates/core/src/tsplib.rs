//! TSPLIB interchange for external TSP solvers.
//!
//! A free-endpoint path problem on `n` cities becomes a cycle problem on
//! `n + 1` cities by adding a dummy city at distance 0 from every other one:
//! an optimal tour enters and leaves the dummy exactly once, and cutting it
//! there leaves an optimal Hamiltonian path. The zero-weight dummy edges make
//! the exported matrix non-metric, which exact cycle solvers do not require.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::reduction::{is_permutation, HamiltonianPath, MetricInstance};

/// FULL_MATRIX export with the dummy as city `n + 1`. LF line endings.
pub fn export_tsplib(inst: &MetricInstance, name: &str) -> String {
    let n = inst.n();
    let dim = n + 1;
    let mut out = String::new();
    let _ = writeln!(out, "NAME: {name}");
    let _ = writeln!(out, "TYPE: TSP");
    let _ = writeln!(out, "COMMENT: L(p)-labeling reduction, dummy city {dim}");
    let _ = writeln!(out, "DIMENSION: {dim}");
    let _ = writeln!(out, "EDGE_WEIGHT_TYPE: EXPLICIT");
    let _ = writeln!(out, "EDGE_WEIGHT_FORMAT: FULL_MATRIX");
    let _ = writeln!(out, "EDGE_WEIGHT_SECTION");
    for u in 0..dim {
        let row: Vec<String> = (0..dim)
            .map(|v| {
                if u == n || v == n {
                    0
                } else {
                    inst.weight(u, v)
                }
            })
            .map(|w| w.to_string())
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    let _ = writeln!(out, "EOF");
    out
}

/// A parsed explicit TSPLIB problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TsplibProblem {
    pub name: String,
    pub dimension: usize,
    /// Row-major `dimension * dimension` weights.
    pub weights: Vec<u32>,
}

impl TsplibProblem {
    pub fn weight(&self, u: usize, v: usize) -> u32 {
        self.weights[u * self.dimension + v]
    }

    pub fn to_instance(&self) -> Result<MetricInstance> {
        MetricInstance::from_matrix(self.dimension, self.weights.clone())
    }
}

fn split_header(line: &str) -> Option<(&str, &str)> {
    let (key, value) = line.split_once(':')?;
    Some((key.trim(), value.trim()))
}

/// Reads a TSPLIB problem with `EDGE_WEIGHT_TYPE: EXPLICIT` and
/// `EDGE_WEIGHT_FORMAT: FULL_MATRIX`.
pub fn parse_tsplib(text: &str) -> Result<TsplibProblem> {
    let mut name = String::new();
    let mut dimension = None;
    let mut weights = Vec::new();
    let mut in_section = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }
        if in_section {
            for token in line.split_whitespace() {
                let w = token
                    .parse::<u32>()
                    .map_err(|_| Error::parse(line_no, format!("bad weight {token:?}")))?;
                weights.push(w);
            }
            continue;
        }
        if line == "EDGE_WEIGHT_SECTION" {
            in_section = true;
            continue;
        }
        let (key, value) = split_header(line)
            .ok_or_else(|| Error::parse(line_no, format!("expected KEY: VALUE, got {line:?}")))?;
        match key {
            "NAME" => name = value.to_string(),
            "DIMENSION" => {
                dimension = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| Error::parse(line_no, format!("bad dimension {value:?}")))?,
                )
            }
            "EDGE_WEIGHT_TYPE" if value != "EXPLICIT" => {
                return Err(Error::parse(
                    line_no,
                    format!("unsupported EDGE_WEIGHT_TYPE {value}"),
                ))
            }
            "EDGE_WEIGHT_FORMAT" if value != "FULL_MATRIX" => {
                return Err(Error::parse(
                    line_no,
                    format!("unsupported EDGE_WEIGHT_FORMAT {value}"),
                ))
            }
            _ => {}
        }
    }
    let dimension = dimension.ok_or_else(|| Error::parse(1, "missing DIMENSION"))?;
    if weights.len() != dimension * dimension {
        return Err(Error::parse(
            1,
            format!(
                "expected {} weights, found {}",
                dimension * dimension,
                weights.len()
            ),
        ));
    }
    Ok(TsplibProblem {
        name,
        dimension,
        weights,
    })
}

/// Reads a tour over the exported `n + 1` cities and turns it back into a
/// path over the original vertices: the dummy is dropped and the path runs
/// from the city after it around to the city before it.
pub fn import_tour(text: &str, inst: &MetricInstance) -> Result<HamiltonianPath> {
    let n = inst.n();
    let dim = n + 1;
    let mut cities: Vec<i64> = Vec::new();
    let mut in_section = false;
    'lines: for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if !in_section {
            if line == "TOUR_SECTION" {
                in_section = true;
                continue;
            }
            if line == "EOF" {
                break;
            }
            if let Some(("DIMENSION", value)) = split_header(line) {
                let declared = value
                    .parse::<usize>()
                    .map_err(|_| Error::parse(line_no, format!("bad dimension {value:?}")))?;
                if declared != dim {
                    return Err(Error::BadTour(format!(
                        "tour has dimension {declared}, expected {dim}"
                    )));
                }
            }
            continue;
        }
        for token in line.split_whitespace() {
            if token == "EOF" {
                break 'lines;
            }
            let city = token
                .parse::<i64>()
                .map_err(|_| Error::parse(line_no, format!("bad city {token:?}")))?;
            if city == -1 {
                break 'lines;
            }
            cities.push(city);
        }
    }
    if !in_section {
        return Err(Error::parse(1, "missing TOUR_SECTION"));
    }

    let zero_based: Vec<usize> = cities
        .iter()
        .map(|&c| {
            if c >= 1 && (c as usize) <= dim {
                Ok(c as usize - 1)
            } else {
                Err(Error::BadTour(format!("city {c} outside 1..={dim}")))
            }
        })
        .collect::<Result<_>>()?;
    if !is_permutation(&zero_based, dim) {
        return Err(Error::BadTour(format!(
            "tour is not a permutation of 1..={dim}: {cities:?}"
        )));
    }
    let dummy_at = zero_based.iter().position(|&c| c == n).unwrap();
    let order: Vec<usize> = zero_based[dummy_at + 1..]
        .iter()
        .chain(&zero_based[..dummy_at])
        .copied()
        .collect();
    HamiltonianPath::new(inst, order)
}
