//! Rendering of reports and certificates in the two output formats.

use polarity_core::morphism::MorphismCertificate;
use polarity_core::nlo::Report;
use polarity_core::omega::{SectionId, SectionReport};

/// Rewrites arrays that contain no nested structure onto a single line;
/// purely cosmetic. The documents never hold brackets inside strings.
pub fn inline_scalar_arrays(text: &str) -> String {
    let bytes = text.as_bytes();
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c == '[' {
            let mut depth = 0;
            let mut j = i;
            while j < bytes.len() {
                match bytes[j] as char {
                    '[' => depth += 1,
                    ']' => {
                        depth -= 1;
                        if depth == 0 {
                            break;
                        }
                    }
                    _ => {}
                }
                j += 1;
            }
            let inner = &text[i + 1..j];
            if !inner.contains('[') && !inner.contains('{') {
                let items: Vec<&str> = inner
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .collect();
                out.push('[');
                out.push_str(&items.join(", "));
                out.push(']');
                i = j + 1;
                continue;
            }
        }
        out.push(c);
        i += 1;
    }
    out
}

pub fn print_json(value: &serde_json::Value) {
    let pretty = serde_json::to_string_pretty(value).expect("json");
    println!("{}", inline_scalar_arrays(&pretty));
}

/// A flat list of findings with a subject label; empty means clean.
pub struct Findings {
    pub subject: &'static str,
    pub clean: bool,
    pub lines: Vec<(String, String)>,
}

impl Findings {
    pub fn clean(subject: &'static str) -> Self {
        Findings {
            subject,
            clean: true,
            lines: Vec::new(),
        }
    }

    pub fn from_sections(subject: &'static str, report: &SectionReport) -> Self {
        let lines = report
            .violations
            .iter()
            .map(|v| {
                let what = match &v.section {
                    SectionId::SRow { xs } => format!("s row section at {xs:?}"),
                    SectionId::SColumn { xs, coord, y } => {
                        format!("s column section (coordinate {coord}) at {xs:?}, y={y}")
                    }
                    SectionId::TRow { ys } => format!("t row section at {ys:?}"),
                    SectionId::TColumn { x, ys, coord } => {
                        format!("t column section (coordinate {coord}) at x={x}, {ys:?}")
                    }
                };
                (what, format!("closure adds {}", v.witness))
            })
            .collect::<Vec<_>>();
        Findings {
            subject,
            clean: lines.is_empty(),
            lines,
        }
    }

    pub fn from_report(subject: &'static str, report: &Report) -> Self {
        let lines = report
            .violations
            .iter()
            .map(|v| (v.law.to_string(), format!("witness {:?}", v.witness)))
            .collect::<Vec<_>>();
        Findings {
            subject,
            clean: lines.is_empty(),
            lines,
        }
    }

    pub fn extend(&mut self, report: &Report) {
        for v in &report.violations {
            self.lines
                .push((v.law.to_string(), format!("witness {:?}", v.witness)));
        }
        self.clean = self.clean && report.is_empty();
    }

    pub fn from_certificate(subject: &'static str, cert: &MorphismCertificate) -> Self {
        let lines = cert
            .conditions()
            .iter()
            .map(|(name, verdict)| {
                let status = match verdict.witness() {
                    None => String::from("pass"),
                    Some(w) => format!("fail witness {w:?}"),
                };
                (name.to_string(), status)
            })
            .collect::<Vec<_>>();
        Findings {
            subject,
            clean: cert.all_pass(),
            lines,
        }
    }

    pub fn print(&self, json: bool) {
        if json {
            let items: Vec<serde_json::Value> = self
                .lines
                .iter()
                .map(|(k, v)| serde_json::json!({ "condition": k, "status": v }))
                .collect();
            let obj = serde_json::json!({
                "subject": self.subject,
                "ok": self.clean,
                "findings": items,
            });
            print_json(&obj);
        } else {
            for (k, v) in &self.lines {
                println!("{k}: {v}");
            }
            println!(
                "{}: {}",
                self.subject,
                if self.clean {
                    "ok"
                } else {
                    "validation failed"
                }
            );
        }
    }
}
