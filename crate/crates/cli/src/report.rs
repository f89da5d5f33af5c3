//! JSON reports and file output.

use std::path::Path;

use casimir_core::Result;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::RunConfig;
use crate::format::sig10;

pub struct Context {
    pub timestamp: bool,
}

#[derive(Debug, Serialize)]
struct Metadata<'a> {
    tool: &'static str,
    version: &'static str,
    core_version: &'static str,
    command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    config: Option<&'a RunConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp_unix_s: Option<u64>,
}

/// Rounds every float to ten significant digits so JSON matches the CSV
/// output digit for digit.
fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64");
            let r: f64 = sig10(x).parse().unwrap_or(x);
            serde_json::Number::from_f64(r)
                .map(Value::Number)
                .unwrap_or(Value::Null)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_floats).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

/// `{"metadata": …, <body fields>}`. The configuration echo keeps full
/// precision so it re-parses to the same configuration.
pub fn render_json(ctx: &Context, command: &str, config: Option<&RunConfig>, body: impl Serialize) -> String {
    let timestamp_unix_s = ctx.timestamp.then(|| {
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    });
    let meta = Metadata {
        tool: "casimir",
        version: env!("CARGO_PKG_VERSION"),
        core_version: casimir_core::VERSION,
        command,
        config,
        timestamp_unix_s,
    };
    let mut root = Map::new();
    root.insert(
        "metadata".into(),
        serde_json::to_value(meta).expect("metadata serialises"),
    );
    match round_floats(serde_json::to_value(body).expect("report serialises")) {
        Value::Object(o) => root.extend(o),
        other => {
            root.insert("data".into(), other);
        }
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(root)).expect("json");
    text.push('\n');
    text
}

pub fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    log::info!("wrote {}", path.display());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_integers() {
        let v = round_floats(serde_json::json!({"a": 1.23456789012345, "n": 3, "s": [0.1, -2.0]}));
        assert_eq!(v["a"], serde_json::json!(1.23456789));
        assert_eq!(v["n"], serde_json::json!(3));
        assert_eq!(v["s"][1], serde_json::json!(-2.0));
    }

    #[test]
    fn metadata_without_timestamp_is_stable() {
        let ctx = Context { timestamp: false };
        let a = render_json(&ctx, "x", None, serde_json::json!({"v": 1.0}));
        let b = render_json(&ctx, "x", None, serde_json::json!({"v": 1.0}));
        assert_eq!(a, b);
        assert!(!a.contains("timestamp"));
        assert!(a.ends_with("}\n"));
    }
}
