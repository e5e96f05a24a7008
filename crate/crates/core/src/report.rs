//! Rendering simulation results to CSV or JSON.
//!
//! Reports are deterministic for fixed inputs except for the wall-clock
//! field, which is why the CSV renderer isolates `wall_ns` on its own
//! comment line and the JSON renderer keeps it in a single top-level field:
//! consumers comparing runs can drop that one piece and expect byte
//! equality.

use std::str::FromStr;

use serde::Serialize;

use crate::engines::EngineInstrumentation;
use crate::metrics::CustomerMetrics;
use crate::table::DepartureTable;
use crate::time::TimeValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

/// What a simulation run reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "values", rename_all = "snake_case")]
pub enum ReportPayload<T> {
    /// `D_{i,N}` per row i = 0..=M.
    Final(Vec<T>),
    /// The whole departure matrix, each row covering j = 0..=N.
    Table(Vec<Vec<T>>),
    /// Per-customer metrics.
    Metrics(Vec<CustomerMetrics<T>>),
}

impl<T: TimeValue> ReportPayload<T> {
    pub fn table_from(t: &DepartureTable<T>) -> Self {
        ReportPayload::Table((0..=t.num_servers()).map(|i| t.row(i).to_vec()).collect())
    }
}

/// One simulation run: sizes, instrumentation, and the requested payload.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport<T> {
    pub servers: usize,
    pub customers: usize,
    pub engine: String,
    pub workers: usize,
    pub scalar_ops: u64,
    pub parallel_steps: Option<u64>,
    pub peak_working_slots: Option<usize>,
    pub wall_ns: u128,
    pub payload: ReportPayload<T>,
}

impl<T: TimeValue> SimReport<T> {
    pub fn new(
        servers: usize,
        customers: usize,
        instr: &EngineInstrumentation,
        payload: ReportPayload<T>,
    ) -> Self {
        SimReport {
            servers,
            customers,
            engine: instr.engine.to_string(),
            workers: instr.workers,
            scalar_ops: instr.scalar_ops,
            parallel_steps: instr.parallel_steps,
            peak_working_slots: instr.peak_working_slots,
            wall_ns: instr.wall.as_nanos(),
            payload,
        }
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Csv => self.render_csv(),
            ReportFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
        }
    }

    fn render_csv(&self) -> String {
        let opt = |v: Option<u64>| v.map_or_else(|| "-".to_string(), |v| v.to_string());
        let mut out = format!(
            "# tandem-simulate M={} N={} engine={} workers={} scalar_ops={} \
             parallel_steps={} peak_working_slots={}\n",
            self.servers,
            self.customers,
            self.engine,
            self.workers,
            self.scalar_ops,
            opt(self.parallel_steps),
            opt(self.peak_working_slots.map(|v| v as u64)),
        );
        out.push_str(&format!("# wall_ns={}\n", self.wall_ns));
        match &self.payload {
            ReportPayload::Final(values) => {
                out.push_str("server,final_departure\n");
                for (i, v) in values.iter().enumerate() {
                    out.push_str(&format!("{i},{v}\n"));
                }
            }
            ReportPayload::Table(rows) => {
                out.push_str("server");
                for j in 0..self.customers + 1 {
                    out.push_str(&format!(",{j}"));
                }
                out.push('\n');
                for (i, row) in rows.iter().enumerate() {
                    out.push_str(&i.to_string());
                    for v in row {
                        out.push_str(&format!(",{v}"));
                    }
                    out.push('\n');
                }
            }
            ReportPayload::Metrics(rows) => {
                out.push_str("customer,arrival,departure,sojourn");
                let waits = rows.first().map_or(0, |r| r.waits.len());
                for i in 1..=waits {
                    out.push_str(&format!(",wait_{i}"));
                }
                out.push('\n');
                for r in rows {
                    out.push_str(&format!(
                        "{},{},{},{}",
                        r.customer, r.arrival, r.departure, r.sojourn
                    ));
                    for v in &r.waits {
                        out.push_str(&format!(",{v}"));
                    }
                    out.push('\n');
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::{serial_full, EngineInstrumentation, EngineKind};
    use crate::metrics::compute_metrics;
    use crate::workload::Workload;

    fn sample_report() -> SimReport<u64> {
        let w = Workload::constant(2, 5, 1u64).unwrap();
        let (table, instr) = serial_full(&w);
        SimReport::new(2, 5, &instr, ReportPayload::Final(table.final_departures()))
    }

    #[test]
    fn csv_isolates_wall_time_on_its_own_line() {
        let text = sample_report().render(ReportFormat::Csv);
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# tandem-simulate M=2 N=5 engine=serial"));
        assert!(lines[1].starts_with("# wall_ns="));
        assert_eq!(lines[2], "server,final_departure");
        assert_eq!(&lines[3..], ["0,5", "1,6", "2,7"]);
        let stable: Vec<&str> = lines
            .iter()
            .filter(|l| !l.starts_with("# wall_ns="))
            .copied()
            .collect();
        assert_eq!(stable.len(), lines.len() - 1);
    }

    #[test]
    fn json_contains_instrumentation_and_payload() {
        let text = sample_report().render(ReportFormat::Json);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["engine"], "serial");
        assert_eq!(v["scalar_ops"], 30);
        assert_eq!(v["payload"]["kind"], "final");
        assert_eq!(v["payload"]["values"], serde_json::json!([5, 6, 7]));
    }

    #[test]
    fn table_and_metrics_payloads_render() {
        let w = Workload::constant(1, 2, 1u64).unwrap();
        let (table, instr) = serial_full(&w);
        let report = SimReport::new(1, 2, &instr, ReportPayload::table_from(&table));
        let text = report.render(ReportFormat::Csv);
        assert!(text.contains("server,0,1,2\n0,0,1,2\n1,0,2,3\n"));

        let metrics = compute_metrics(&w, &table).unwrap();
        let report = SimReport::new(1, 2, &instr, ReportPayload::Metrics(metrics));
        let text = report.render(ReportFormat::Csv);
        assert!(text.contains("customer,arrival,departure,sojourn,wait_1\n"));
        assert!(text.contains("1,1,2,1,0\n"));
    }

    #[test]
    fn format_names_parse() {
        assert_eq!("csv".parse::<ReportFormat>().unwrap(), ReportFormat::Csv);
        assert_eq!("json".parse::<ReportFormat>().unwrap(), ReportFormat::Json);
        assert!("yaml".parse::<ReportFormat>().is_err());
    }

    #[test]
    fn optional_counters_render_as_dashes() {
        let instr = EngineInstrumentation {
            engine: EngineKind::SerialInplace,
            workers: 1,
            scalar_ops: 4,
            parallel_steps: None,
            peak_working_slots: Some(3),
            wall: std::time::Duration::from_nanos(5),
        };
        let report = SimReport::new(1, 1, &instr, ReportPayload::Final(vec![1u64, 2]));
        let text = report.render(ReportFormat::Csv);
        assert!(text.contains("parallel_steps=- peak_working_slots=3"));
        assert!(text.contains("# wall_ns=5\n"));
    }
}
