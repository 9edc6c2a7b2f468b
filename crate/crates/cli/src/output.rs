use std::fs;
use std::path::PathBuf;

use anyhow::Context;
use serde::Serialize;
use serde_json::{json, Value};

use crate::options::Options;

/// Artifact directory of one run. Opening it echoes the resolved configuration.
pub struct Artifacts {
    dir: PathBuf,
}

impl Artifacts {
    pub fn open(verb: &str, opts: &Options, resolved: Value) -> anyhow::Result<Self> {
        let dir = opts.out_dir();
        fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
        let config = json!({ "verb": verb, "out": dir, "config": resolved });
        let text = serde_json::to_string_pretty(&config)?;
        eprintln!("{text}");
        let out = Self { dir };
        out.write(&format!("{verb}.config.json"), &text)?;
        Ok(out)
    }

    pub fn write(&self, name: &str, contents: impl AsRef<[u8]>) -> anyhow::Result<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> anyhow::Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, text)
    }

    pub fn create(&self, name: &str) -> anyhow::Result<std::io::BufWriter<fs::File>> {
        let path = self.dir.join(name);
        let f = fs::File::create(&path).with_context(|| format!("cannot create {}", path.display()))?;
        Ok(std::io::BufWriter::new(f))
    }
}

/// `∞` has no JSON number; it is written as the string "inf".
pub fn exponent(x: f64) -> Value {
    if x.is_infinite() {
        json!("inf")
    } else {
        json!(x)
    }
}
