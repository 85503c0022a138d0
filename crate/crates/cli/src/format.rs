//! Text, CSV and JSON renderings of command results.
//!
//! JSON output keeps every count as a decimal string.

use serde::Serialize;

use plr_core::{BigCount, WeightDistribution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Table,
    Csv,
    Json,
}

/// `{"r","s","n","method","counts":[...]}`; `m` is present for
/// single-weight queries.
#[derive(Debug, Serialize)]
pub struct DistributionJson {
    pub r: usize,
    pub s: usize,
    pub n: usize,
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    pub counts: Vec<String>,
}

fn strings(counts: &[BigCount]) -> Vec<String> {
    counts.iter().map(|c| c.to_string()).collect()
}

pub fn distribution(dist: &WeightDistribution, label: &str, fmt: OutputFormat) -> String {
    let [r, s, n] = dist.shape().dims();
    let counts = dist.counts();
    match fmt {
        OutputFormat::Table => {
            let width = counts.iter().map(|c| c.to_string().len()).max().unwrap_or(1).max(5);
            let mut out = format!("{label} {r}x{s}x{n}\n{:>3}  {:>width$}\n", "m", "count");
            for (m, c) in counts.iter().enumerate() {
                out.push_str(&format!("{m:>3}  {c:>width$}\n"));
            }
            out.push_str(&format!("total  {}\n", dist.total()));
            out.push_str(&format!("counts: {}\n", strings(counts).join(", ")));
            out
        }
        OutputFormat::Csv => {
            let mut out = String::from("r,s,n,m,count\n");
            for (m, c) in counts.iter().enumerate() {
                out.push_str(&format!("{r},{s},{n},{m},{c}\n"));
            }
            out
        }
        OutputFormat::Json => {
            json(&DistributionJson { r, s, n, method: label.to_string(), m: None, counts: strings(counts) })
        }
    }
}

pub fn single(dist_dims: [usize; 3], m: usize, value: &BigCount, label: &str, fmt: OutputFormat) -> String {
    let [r, s, n] = dist_dims;
    match fmt {
        OutputFormat::Table => format!("{value}\n"),
        OutputFormat::Csv => format!("r,s,n,m,count\n{r},{s},{n},{m},{value}\n"),
        OutputFormat::Json => {
            json(&DistributionJson { r, s, n, method: label.to_string(), m: Some(m), counts: vec![value.to_string()] })
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SequenceJson {
    pub kind: String,
    pub counts: Vec<String>,
}

/// Counts indexed by weight with no shape, as for unbounded classes.
pub fn sequence(counts: &[BigCount], label: &str, fmt: OutputFormat) -> String {
    match fmt {
        OutputFormat::Table => {
            let mut out = format!("{label}\n{:>3}  count\n", "m");
            for (m, c) in counts.iter().enumerate() {
                out.push_str(&format!("{m:>3}  {c}\n"));
            }
            out.push_str(&format!("counts: {}\n", strings(counts).join(", ")));
            out
        }
        OutputFormat::Csv => {
            let mut out = String::from("m,count\n");
            for (m, c) in counts.iter().enumerate() {
                out.push_str(&format!("{m},{c}\n"));
            }
            out
        }
        OutputFormat::Json => json(&SequenceJson { kind: label.to_string(), counts: strings(counts) }),
    }
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("plain data serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use plr_core::Shape;

    fn dist() -> WeightDistribution {
        WeightDistribution::from_u64(Shape::new(1, 1, 1).unwrap(), &[1, 1]).unwrap()
    }

    #[test]
    fn table_lists_counts() {
        let t = distribution(&dist(), "oracle", OutputFormat::Table);
        assert!(t.contains("counts: 1, 1"), "{t}");
        assert!(t.contains("total  2"));
    }

    #[test]
    fn json_uses_strings() {
        let j = distribution(&dist(), "sade", OutputFormat::Json);
        let v: serde_json::Value = serde_json::from_str(&j).unwrap();
        assert_eq!(v["r"], 1);
        assert_eq!(v["method"], "sade");
        assert_eq!(v["counts"], serde_json::json!(["1", "1"]));
    }

    #[test]
    fn csv_rows() {
        let c = distribution(&dist(), "oracle", OutputFormat::Csv);
        assert_eq!(c, "r,s,n,m,count\n1,1,1,0,1\n1,1,1,1,1\n");
    }
}
