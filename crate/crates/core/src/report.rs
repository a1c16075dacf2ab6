//! Deterministic JSON/CSV emission helpers.
//!
//! Reports are emitted with a fixed field order and floats printed with 12
//! significant digits, so identical inputs produce byte-identical output.

/// 12 significant digits, stable across runs.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "\"inf\"".into() } else { "\"-inf\"".into() };
    }
    if x.is_nan() {
        return "\"nan\"".into();
    }
    format!("{:.11e}", x)
}

/// Minimal ordered JSON object builder.
pub struct JsonObject {
    parts: Vec<String>,
}

impl JsonObject {
    pub fn new() -> Self {
        JsonObject { parts: Vec::new() }
    }

    pub fn field_f64(mut self, key: &str, value: f64) -> Self {
        self.parts.push(format!("\"{key}\":{}", fmt_f64(value)));
        self
    }

    pub fn field_opt_f64(self, key: &str, value: Option<f64>) -> Self {
        match value {
            Some(v) => self.field_f64(key, v),
            None => self,
        }
    }

    pub fn field_str(mut self, key: &str, value: &str) -> Self {
        self.parts.push(format!("\"{key}\":{}", escape(value)));
        self
    }

    pub fn field_bool(mut self, key: &str, value: bool) -> Self {
        self.parts.push(format!("\"{key}\":{value}"));
        self
    }

    pub fn field_usize(mut self, key: &str, value: usize) -> Self {
        self.parts.push(format!("\"{key}\":{value}"));
        self
    }

    pub fn field_raw(mut self, key: &str, raw: &str) -> Self {
        self.parts.push(format!("\"{key}\":{raw}"));
        self
    }

    pub fn field_f64_array(mut self, key: &str, values: &[f64]) -> Self {
        let inner: Vec<String> = values.iter().map(|&v| fmt_f64(v)).collect();
        self.parts.push(format!("\"{key}\":[{}]", inner.join(",")));
        self
    }

    pub fn finish(self) -> String {
        format!("{{{}}}", self.parts.join(","))
    }
}

impl Default for JsonObject {
    fn default() -> Self {
        Self::new()
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
