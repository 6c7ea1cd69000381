//! Text and JSON output built side by side.

use std::fmt::Display;

use serde_json::{json, Map, Value};

use gknot_core::format::print_diagram;
use gknot_core::invariants::DiagramCombination;
use gknot_core::GGraph;

#[derive(Default)]
pub struct Report {
    pub text: String,
    pub code: u8,
    header: Vec<Value>,
    diagrams: Vec<Value>,
    current: Option<Map<String, Value>>,
}

/// Group header and raw stanza, each line prefixed with `  | `.
fn stanza(k: &GGraph) -> String {
    let doc = format!("{}\n{}", k.group().to_text(), print_diagram(k, None, None));
    doc.lines().map(|l| format!("  | {l}\n")).collect()
}

impl Report {
    pub fn line(&mut self, s: impl Into<String>) {
        let s = s.into();
        self.text.push_str(&s);
        self.text.push('\n');
        self.header.push(Value::String(s));
    }

    pub fn begin_diagram(&mut self, index: usize, k: &GGraph) {
        let components = k.shadow().component_count();
        let good = k.orientation().is_some();
        self.text.push_str(&format!(
            "diagram {index}\nkey: {}\nvertices: {}\ncomponents: {components}\ngood: {}\n",
            k.key(),
            k.vertex_count(),
            if good { "yes" } else { "no" }
        ));
        let mut m = Map::new();
        m.insert("index".into(), json!(index));
        m.insert("key".into(), json!(k.key().as_str()));
        m.insert("vertices".into(), json!(k.vertex_count()));
        m.insert("components".into(), json!(components));
        m.insert("good".into(), json!(good));
        m.insert("fields".into(), json!([]));
        self.current = Some(m);
    }

    pub fn end_diagram(&mut self) {
        self.text.push('\n');
        if let Some(m) = self.current.take() {
            self.diagrams.push(Value::Object(m));
        }
    }

    fn push(&mut self, v: Value) {
        match &mut self.current {
            Some(m) => m["fields"].as_array_mut().expect("fields").push(v),
            None => self.header.push(v),
        }
    }

    pub fn field(&mut self, name: &str, value: impl Display) {
        let value = value.to_string();
        self.text.push_str(&format!("{name}: {value}\n"));
        self.push(json!({ "name": name, "value": value }));
    }

    pub fn block(&mut self, name: &str, body: String) {
        self.text.push_str(&format!("{name}:\n"));
        for l in body.lines() {
            self.text.push_str(&format!("  | {l}\n"));
        }
        self.push(json!({ "name": name, "value": body }));
    }

    pub fn diagram(&mut self, name: &str, k: &GGraph) {
        let s = stanza(k);
        self.text.push_str(&format!("{name}: {}\n{s}", k.key()));
        self.push(json!({ "name": name, "key": k.key().as_str(), "stanza": unprefix(&s) }));
    }

    /// Sorted `key  coefficient` lines, then one stanza per key.
    pub fn combination(&mut self, name: &str, c: &DiagramCombination) {
        self.text.push_str(&format!("{name}: space {}, terms {}\n", c.space().name(), c.len()));
        let mut terms = Vec::new();
        for (key, _) in c.terms() {
            self.text.push_str(&format!("  {key}  1\n"));
        }
        if !c.is_empty() {
            self.text.push_str(&format!("{name} representatives:\n"));
        }
        for (i, (key, rep)) in c.terms().enumerate() {
            if i > 0 {
                self.text.push_str("  | ---\n");
            }
            self.text.push_str(&format!("  | # {key}\n"));
            let s = stanza(rep);
            self.text.push_str(&s);
            terms.push(json!({ "key": key.as_str(), "coefficient": 1, "representative": unprefix(&s) }));
        }
        self.push(json!({ "name": name, "space": c.space().name(), "terms": terms }));
    }

    pub fn json(&self) -> Value {
        json!({ "header": self.header, "diagrams": self.diagrams, "exit_code": self.code })
    }
}

fn unprefix(s: &str) -> String {
    s.lines().map(|l| format!("{}\n", l.trim_start_matches("  | "))).collect()
}
