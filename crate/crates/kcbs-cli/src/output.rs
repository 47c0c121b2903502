use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::Value;

/// Writes `contents` to a temporary file next to `path`, then renames it
/// into place.
pub fn write_atomic(path: &Path, contents: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating temp file in {}", dir.display()))?;
    {
        let mut w = std::io::BufWriter::new(tmp.as_file_mut());
        contents(&mut w).with_context(|| format!("writing {}", path.display()))?;
        w.flush()?;
    }
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

/// Looks up a `/`-separated path in a JSON value.
pub fn field<'a>(v: &'a Value, path: &str) -> &'a Value {
    v.pointer(&format!("/{path}")).unwrap_or(&Value::Null)
}

/// Renders a JSON value for the human summary: reals to six decimals,
/// everything else as-is.
pub fn show(x: &Value) -> String {
    match x {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap();
            if x != 0.0 && x.abs() < 1e-4 {
                format!("{x:.3e}")
            } else {
                format!("{x:.6}")
            }
        }
        Value::Array(items) => items.iter().map(show).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

/// Prints `label value` lines read from the report itself, so the human
/// summary never shows a quantity the JSON does not contain.
pub fn print_fields(v: &Value, rows: &[(&str, &str)]) {
    for (label, path) in rows {
        println!("{label} {}", show(field(v, path)));
    }
}
