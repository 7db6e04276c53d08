//! Flat key/value report with a stable schema. Machine lines go to stdout
//! verbatim; human summary lines ride along as `# ` comments only when
//! requested, so golden comparisons can strip or keep them uniformly.

use ricci::Rat;

/// Schema version stamped on the first line of every report.
pub const SCHEMA: u32 = 1;

pub struct Report {
    lines: Vec<(String, String)>,
    human: Vec<String>,
    failures: usize,
}

impl Report {
    pub fn new(subcommand: &str) -> Report {
        let mut r = Report {
            lines: Vec::new(),
            human: Vec::new(),
            failures: 0,
        };
        r.push("schema", SCHEMA.to_string());
        r.push("subcommand", subcommand.to_string());
        r
    }

    /// Record one machine line. Insertion order is emission order; callers
    /// keep the schema deterministic by pushing in a fixed sequence.
    pub fn push(&mut self, key: &str, value: impl Into<String>) {
        let value = value.into();
        debug_assert!(!key.contains('=') && !key.contains('\n'));
        debug_assert!(!value.contains('\n'));
        self.lines.push((key.to_string(), value));
    }

    /// Record a machine line that also counts as a verification failure.
    pub fn fail(&mut self, key: &str, value: impl Into<String>) {
        self.failures += 1;
        self.push(key, value);
    }

    pub fn human(&mut self, line: impl Into<String>) {
        self.human.push(line.into());
    }

    pub fn failed(&self) -> bool {
        self.failures > 0
    }

    pub fn render(&self, with_human: bool) -> String {
        let mut out = String::new();
        for (k, v) in &self.lines {
            out.push_str(k);
            out.push('=');
            out.push_str(v);
            out.push('\n');
        }
        if with_human {
            for line in &self.human {
                out.push_str("# ");
                out.push_str(line);
                out.push('\n');
            }
        }
        out
    }
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Component index in witness position: `violated@0,1,2`.
pub fn fmt_index(idx: &[usize]) -> String {
    idx.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn fmt_rats(v: &[Rat]) -> String {
    v.iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
