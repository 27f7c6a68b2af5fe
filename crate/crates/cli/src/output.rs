use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};

#[derive(Debug, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub build: String,
    pub command: String,
    /// The resolved configuration, defaults included.
    pub config: Value,
}

impl Provenance {
    pub fn new<C: Serialize>(command: &str, config: &C) -> Self {
        let profile = if cfg!(debug_assertions) { "debug" } else { "release" };
        let build = match option_env!("FRIEDRICHS_BUILD_ID") {
            Some(id) => format!("{id} ({profile})"),
            None => profile.to_string(),
        };
        Self {
            tool: env!("CARGO_BIN_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            build,
            command: command.to_string(),
            config: serde_json::to_value(config).expect("configs serialize"),
        }
    }

    /// As `# key: value` lines, for text formats that allow comments.
    pub fn comment_lines(&self) -> String {
        let mut out = format!(
            "# {} {} ({})\n# command: {}\n",
            self.tool, self.version, self.build, self.command
        );
        out.push_str(&format!("# config: {}\n", self.config));
        out
    }
}

#[derive(Serialize)]
struct Report<'a, R: Serialize> {
    provenance: &'a Provenance,
    result: &'a R,
}

pub fn json_report<R: Serialize>(provenance: &Provenance, result: &R) -> String {
    let mut s = serde_json::to_string_pretty(&Report { provenance, result }).expect("reports serialize");
    s.push('\n');
    s
}

/// Writes to `path` through a temporary file in the same directory, or to stdout.
pub fn emit(path: Option<&Path>, body: &str) -> CliResult<()> {
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        return out.write_all(body.as_bytes()).map_err(|e| CliError::io("<stdout>", e));
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(body.as_bytes())
        .map_err(|e| CliError::io(tmp.path(), e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

/// CSV field for a float, at round-trip precision.
pub fn f(x: f64) -> String {
    format!("{x:.16e}")
}
