//! Structured verification reports: named checks with pass/fail status and
//! an optional detail line, rendered as stable text or JSON.

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub label: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn pass(label: impl Into<String>) -> Self {
        Check { label: label.into(), pass: true, detail: None }
    }

    pub fn fail(label: impl Into<String>, detail: impl Into<String>) -> Self {
        Check { label: label.into(), pass: false, detail: Some(detail.into()) }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub title: String,
    pub params: Vec<(String, String)>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), params: Vec::new(), checks: Vec::new() }
    }

    pub fn param(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.params.push((key.into(), value.to_string()));
        self
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("== {} ==\n", self.title));
        for (k, v) in &self.params {
            out.push_str(&format!("   {k}: {v}\n"));
        }
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("   [{status}] {}", c.label));
            if let Some(d) = &c.detail {
                out.push_str(&format!(" — {d}"));
            }
            out.push('\n');
        }
        let overall = if self.pass() { "PASS" } else { "FAIL" };
        out.push_str(&format!("   => {overall}\n"));
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "title": self.title,
            "params": self.params,
            "checks": self.checks,
            "pass": self.pass(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_renders_and_aggregates() {
        let mut r = Report::new("demo");
        r.param("n", 2);
        r.push(Check::pass("first"));
        r.push(Check::fail("second", "broke"));
        assert!(!r.pass());
        let text = r.render_text();
        assert!(text.contains("[PASS] first"));
        assert!(text.contains("[FAIL] second — broke"));
        assert!(text.contains("=> FAIL"));
        let j = r.to_json();
        assert_eq!(j["pass"], serde_json::json!(false));
    }
}
