//! Ordered key/value reports rendered as text, an indented tree, or comma-separated rows.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Duration;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Tree,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "tree" => Ok(Format::Tree),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?} (expected text, tree or csv)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    /// Excluded from comparisons between runs.
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entry {
    Field(String, String),
    Check(Check),
    Section(Report),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub title: String,
    pub entries: Vec<Entry>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            entries: Vec::new(),
        }
    }

    pub fn field(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.entries.push(Entry::Field(key.into(), value.to_string()));
        self
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>, elapsed: Duration) {
        self.entries.push(Entry::Check(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
            elapsed,
        }));
    }

    pub fn section(&mut self, child: Report) {
        self.entries.push(Entry::Section(child));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find_map(|e| match e {
            Entry::Field(k, v) if k == key => Some(v.as_str()),
            _ => None,
        })
    }

    /// All checks, depth first.
    pub fn checks(&self) -> Vec<&Check> {
        let mut out = Vec::new();
        for e in &self.entries {
            match e {
                Entry::Check(c) => out.push(c),
                Entry::Section(s) => out.extend(s.checks()),
                Entry::Field(..) => {}
            }
        }
        out
    }

    pub fn all_passed(&self) -> bool {
        self.checks().iter().all(|c| c.passed)
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Text => self.text(&mut out, ""),
            Format::Tree => self.tree(&mut out, 0),
            Format::Csv => {
                out.push_str("section,key,value,detail,time_ms\n");
                self.csv(&mut out, &self.title);
            }
        }
        out
    }

    fn text(&self, out: &mut String, prefix: &str) {
        let path = if prefix.is_empty() {
            self.title.clone()
        } else {
            format!("{prefix}/{}", self.title)
        };
        let _ = writeln!(out, "== {path}");
        for e in &self.entries {
            match e {
                Entry::Field(k, v) => {
                    let _ = writeln!(out, "{k}: {v}");
                }
                Entry::Check(c) => {
                    let _ = writeln!(
                        out,
                        "[{}] {}: {} ({} ms)",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.name,
                        c.detail,
                        c.elapsed.as_millis()
                    );
                }
                Entry::Section(s) => s.text(out, &path),
            }
        }
    }

    fn tree(&self, out: &mut String, depth: usize) {
        let pad = "  ".repeat(depth);
        let _ = writeln!(out, "{pad}{}", self.title);
        for e in &self.entries {
            match e {
                Entry::Field(k, v) => {
                    let _ = writeln!(out, "{pad}  {k} = {v}");
                }
                Entry::Check(c) => {
                    let _ = writeln!(
                        out,
                        "{pad}  {} {} ({}; {} ms)",
                        if c.passed { "ok" } else { "FAILED" },
                        c.name,
                        c.detail,
                        c.elapsed.as_millis()
                    );
                }
                Entry::Section(s) => s.tree(out, depth + 1),
            }
        }
    }

    fn csv(&self, out: &mut String, path: &str) {
        for e in &self.entries {
            match e {
                Entry::Field(k, v) => {
                    let _ = writeln!(out, "{},{},{},,", quote(path), quote(k), quote(v));
                }
                Entry::Check(c) => {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{}",
                        quote(path),
                        quote(&c.name),
                        if c.passed { "pass" } else { "fail" },
                        quote(&c.detail),
                        c.elapsed.as_millis()
                    );
                }
                Entry::Section(s) => s.csv(out, &format!("{path}/{}", s.title)),
            }
        }
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("root");
        r.field("n", 16).field("note", "a, b");
        let mut s = Report::new("child");
        s.check("x", true, "fine", Duration::from_millis(3));
        s.check("y", false, "bad", Duration::ZERO);
        r.section(s);
        r
    }

    #[test]
    fn renders() {
        let r = sample();
        assert_eq!(r.get("n"), Some("16"));
        assert_eq!(r.checks().len(), 2);
        assert!(!r.all_passed());
        let text = r.render(Format::Text);
        assert!(text.contains("== root/child\n[PASS] x: fine (3 ms)\n[FAIL] y: bad"));
        let csv = r.render(Format::Csv);
        assert!(csv.contains("root,note,\"a, b\",,\n"));
        assert!(csv.contains("root/child,y,fail,bad,0\n"));
        assert!(r.render(Format::Tree).contains("  child\n    ok x (fine; 3 ms)"));
        assert_eq!("tree".parse::<Format>(), Ok(Format::Tree));
        assert!("json".parse::<Format>().is_err());
    }
}
