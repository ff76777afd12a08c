use std::io::Write;

use serde_json::{json, Map, Value};

use crate::args::Format;

pub const SCHEMA_VERSION: u32 = 1;

/// One emitted record: its JSON body and its CSV row.
pub struct Record {
    json: Value,
    csv: Vec<String>,
}

impl Record {
    pub fn new(json: Value, csv: Vec<String>) -> Self {
        Record { json, csv }
    }
}

pub struct Outcome {
    pub command: &'static str,
    pub config: Value,
    pub header: Vec<&'static str>,
    pub records: Vec<Record>,
    pub notes: Vec<String>,
    /// Any snap, calibration or check failure; exit code 1.
    pub failed: bool,
}

impl Outcome {
    pub fn new(command: &'static str, config: Value, header: &[&'static str]) -> Self {
        Outcome {
            command,
            config,
            header: header.to_vec(),
            records: Vec::new(),
            notes: Vec::new(),
            failed: false,
        }
    }

    pub fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    pub fn note(&mut self, s: String) {
        self.notes.push(s);
    }

    /// A per-item computation error: reported, and the run fails.
    pub fn error(&mut self, p: u64, e: &hgtrace::Error) {
        self.failed = true;
        let mut row = vec![String::new(); self.header.len()];
        if let Some(i) = self.header.iter().position(|h| *h == "p") {
            row[i] = p.to_string();
        }
        if let Some(last) = row.last_mut() {
            *last = format!("error: {e}");
        }
        self.records
            .push(Record::new(json!({"p": p, "error": e.to_string()}), row));
    }

    pub fn write(&self, format: Format, global: Value, w: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                let mut config = global;
                if let (Some(c), Some(extra)) = (config.as_object_mut(), self.config.as_object()) {
                    c.insert("command".into(), json!(self.command));
                    c.extend(extra.clone());
                }
                for r in &self.records {
                    let mut obj = Map::new();
                    obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
                    obj.insert("config".into(), config.clone());
                    match &r.json {
                        Value::Object(m) => obj.extend(m.clone()),
                        other => {
                            obj.insert("record".into(), other.clone());
                        }
                    }
                    serde_json::to_writer(&mut *w, &Value::Object(obj))?;
                    writeln!(w)?;
                }
                for n in &self.notes {
                    serde_json::to_writer(&mut *w, &json!({"schema_version": SCHEMA_VERSION, "note": n}))?;
                    writeln!(w)?;
                }
            }
            Format::Csv => {
                {
                    let mut cw = csv::Writer::from_writer(&mut *w);
                    cw.write_record(&self.header)?;
                    for r in &self.records {
                        cw.write_record(&r.csv)?;
                    }
                    cw.flush()?;
                }
                for n in &self.notes {
                    writeln!(w, "# {n}")?;
                }
            }
        }
        Ok(())
    }
}
