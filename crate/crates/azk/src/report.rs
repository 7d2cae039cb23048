use std::fmt::Write as _;
use std::io::IsTerminal;

use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Violation,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Error => 1,
            Status::Violation => 2,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Violation => "violation",
            Status::Error => "error",
        }
    }
}

/// Command result. Fields are declared in key order and `data` is a
/// sorted map, so serialization is byte-stable.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub data: Value,
    pub diagnostics: Vec<String>,
    pub status: Status,
}

impl Report {
    pub fn ok(command: &str, data: Value) -> Self {
        Report {
            command: command.into(),
            data,
            diagnostics: Vec::new(),
            status: Status::Ok,
        }
    }

    pub fn violation(command: &str, data: Value, message: String) -> Self {
        Report {
            command: command.into(),
            data,
            diagnostics: vec![message],
            status: Status::Violation,
        }
    }

    pub fn error(command: &str, err: &CliError) -> Self {
        Report {
            command: command.into(),
            data: serde_json::json!({ "code": err.code() }),
            diagnostics: vec![err.diagnostic()],
            status: Status::Error,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report values are plain JSON");
        s.push('\n');
        s
    }

    pub fn to_text(&self, color: bool) -> String {
        let status = match (color, self.status) {
            (false, _) => self.status.label().to_string(),
            (true, Status::Ok) => format!("\x1b[32m{}\x1b[0m", self.status.label()),
            (true, Status::Violation) => format!("\x1b[33m{}\x1b[0m", self.status.label()),
            (true, Status::Error) => format!("\x1b[31m{}\x1b[0m", self.status.label()),
        };
        let mut out = format!("{}: {}\n", self.command, status);
        flatten(&mut out, "", &self.data);
        for d in &self.diagnostics {
            let _ = writeln!(out, "! {}", d);
        }
        out
    }
}

fn flatten(out: &mut String, prefix: &str, v: &Value) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{}.{}", prefix, k) };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(out, &key(k), x);
            }
        }
        Value::Array(xs) if xs.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(out, &key(&i.to_string()), x);
            }
        }
        Value::Array(xs) => {
            let items: Vec<String> = xs.iter().map(scalar_text).collect();
            let _ = writeln!(out, "  {} = [{}]", prefix, items.join(", "));
        }
        other => {
            let _ = writeln!(out, "  {} = {}", prefix, scalar_text(other));
        }
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Resolves `AZK_COLOR`: `never` disables color, `auto` (the default)
/// enables it when stdout is a terminal.
pub fn color_enabled(setting: Option<&str>) -> Result<bool, CliError> {
    match setting.unwrap_or("auto") {
        "never" => Ok(false),
        "auto" => Ok(std::io::stdout().is_terminal()),
        other => Err(CliError::Usage(format!("AZK_COLOR must be auto or never, got '{}'", other))),
    }
}
