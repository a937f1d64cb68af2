//! Deterministic machine-readable output.  Floats are always printed with 17
//! significant digits so repeated runs are byte-identical.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub fn float(x: f64) -> String {
    format!("{:.16e}", x)
}

pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

pub enum Json {
    Bool(bool),
    Int(i64),
    UInt(u64),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(&'static str, Json)>),
}

impl Json {
    pub fn complex(z: Complex64) -> Json {
        Json::Arr(vec![Json::Num(z.re), Json::Num(z.im)])
    }

    pub fn vector2(v: [f64; 2]) -> Json {
        Json::Arr(vec![Json::Num(v[0]), Json::Num(v[1])])
    }

    pub fn matrix(m: &DMatrix<Complex64>) -> Json {
        let rows = (0..m.nrows())
            .map(|r| Json::Arr((0..m.ncols()).map(|c| Json::complex(m[(r, c)])).collect()))
            .collect();
        Json::Arr(rows)
    }

    fn write(&self, out: &mut String) {
        match self {
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => out.push_str(&i.to_string()),
            Json::UInt(u) => out.push_str(&u.to_string()),
            Json::Num(x) => out.push_str(&float(*x)),
            Json::Str(s) => {
                out.push('"');
                out.push_str(&escape(s));
                out.push('"');
            }
            Json::Arr(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    item.write(out);
                }
                out.push(']');
            }
            Json::Obj(fields) => {
                out.push('{');
                for (i, (key, value)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    out.push('"');
                    out.push_str(key);
                    out.push_str("\": ");
                    value.write(out);
                }
                out.push('}');
            }
        }
    }

    /// Single line plus trailing newline.
    pub fn render(&self) -> String {
        let mut s = String::new();
        self.write(&mut s);
        s.push('\n');
        s
    }
}

pub fn error_line(kind: &str, detail: &str) -> String {
    format!(
        "{{\"error\": \"{}\", \"detail\": \"{}\"}}",
        escape(kind),
        escape(detail)
    )
}
