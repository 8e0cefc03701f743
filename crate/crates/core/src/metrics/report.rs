//! Named metric results and their CSV form.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::collective::{MetricRegistry, PointSet};
use super::distance::{mean_pairwise, min_pairwise};
use crate::error::{Error, Result};
use crate::geometry::DistanceMatrix;
use crate::io::csv_field;

pub const SCHEMA_LINE: &str = "#schema=1";
pub const METRICS_HEADER: &str = "metric,scope,item_id,value";
pub const BOOTSTRAP_HEADER: &str = "metric,sample_index,value";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Individual,
    Collective,
}

impl Scope {
    pub fn as_str(self) -> &'static str {
        match self {
            Scope::Individual => "individual",
            Scope::Collective => "collective",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricValue {
    /// Empty for collective values.
    pub item_id: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub metric_name: String,
    pub scope: Scope,
    pub values: Vec<MetricValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bootstrap_samples: Option<Vec<f64>>,
}

impl MetricReport {
    pub fn collective(name: impl Into<String>, value: f64) -> Self {
        Self {
            metric_name: name.into(),
            scope: Scope::Collective,
            values: vec![MetricValue {
                item_id: String::new(),
                value,
            }],
            bootstrap_samples: None,
        }
    }

    pub fn individual(name: impl Into<String>, ids: &[String], values: Vec<f64>) -> Result<Self> {
        if ids.len() != values.len() {
            return Err(Error::BadParams(format!(
                "{} ids for {} values",
                ids.len(),
                values.len()
            )));
        }
        Ok(Self {
            metric_name: name.into(),
            scope: Scope::Individual,
            values: ids
                .iter()
                .zip(values)
                .map(|(id, value)| MetricValue {
                    item_id: id.clone(),
                    value,
                })
                .collect(),
            bootstrap_samples: None,
        })
    }

    pub fn with_bootstrap(mut self, samples: Vec<f64>) -> Self {
        self.bootstrap_samples = Some(samples);
        self
    }

    /// The value of a collective report.
    pub fn scalar(&self) -> Option<f64> {
        match (self.scope, self.values.as_slice()) {
            (Scope::Collective, [v]) => Some(v.value),
            _ => None,
        }
    }
}

/// Mean and nearest-neighbour distance for every item; `ids` and the
/// matrix share an order.
pub fn individual_reports(ids: &[String], matrix: &DistanceMatrix) -> Result<Vec<MetricReport>> {
    if ids.len() != matrix.len() {
        return Err(Error::BadParams(format!(
            "{} ids for {} points",
            ids.len(),
            matrix.len()
        )));
    }
    let n = ids.len();
    let mean = (0..n)
        .map(|i| mean_pairwise(i, matrix))
        .collect::<Result<Vec<_>>>()?;
    let min = (0..n)
        .map(|i| min_pairwise(i, matrix))
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![
        MetricReport::individual("mean_pairwise", ids, mean)?,
        MetricReport::individual("min_pairwise", ids, min)?,
    ])
}

/// Every metric in `registry` on `set`.
pub fn collective_reports(set: &PointSet, registry: &MetricRegistry) -> Result<Vec<MetricReport>> {
    Ok(registry
        .evaluate(set)?
        .into_iter()
        .map(|(n, v)| MetricReport::collective(n, v))
        .collect())
}

pub fn metrics_csv(reports: &[MetricReport]) -> String {
    let mut out = format!("{SCHEMA_LINE}\n{METRICS_HEADER}\n");
    for r in reports {
        for v in &r.values {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                csv_field(&r.metric_name),
                r.scope.as_str(),
                csv_field(&v.item_id),
                v.value
            );
        }
    }
    out
}

/// Bootstrap samples of every report that has them.
pub fn bootstrap_csv(reports: &[MetricReport]) -> String {
    let mut out = format!("{SCHEMA_LINE}\n{BOOTSTRAP_HEADER}\n");
    for r in reports {
        for (k, v) in r.bootstrap_samples.iter().flatten().enumerate() {
            let _ = writeln!(out, "{},{k},{v}", csv_field(&r.metric_name));
        }
    }
    out
}
