//! ARFF subset reader: `@relation`, `@attribute` (numeric / nominal / string),
//! `@data` with dense comma-separated rows, `?` for missing, `%` comments.

use super::{detect_class_attribute, AttributeKind, Cell, RawTable};
use crate::error::{Error, Result};

/// Drops an unquoted `%` comment tail.
fn strip_comment(line: &str) -> &str {
    let mut quote: Option<char> = None;
    let mut escaped = false;
    for (i, c) in line.char_indices() {
        if escaped {
            escaped = false;
            continue;
        }
        match (quote, c) {
            (Some(_), '\\') => escaped = true,
            (Some(q), c) if c == q => quote = None,
            (None, '\'' | '"') => quote = Some(c),
            (None, '%') => return &line[..i],
            _ => {}
        }
    }
    line
}

fn unquote(token: &str) -> String {
    let t = token.trim();
    let mut chars = t.chars();
    match (chars.next(), t.chars().last()) {
        (Some(a), Some(b)) if t.len() >= 2 && a == b && (a == '\'' || a == '"') => {
            let inner = &t[1..t.len() - 1];
            let mut out = String::with_capacity(inner.len());
            let mut esc = false;
            for c in inner.chars() {
                if esc {
                    out.push(c);
                    esc = false;
                } else if c == '\\' {
                    esc = true;
                } else {
                    out.push(c);
                }
            }
            out
        }
        _ => t.to_string(),
    }
}

/// Splits on `sep` outside quotes. Returns `None` on an unterminated quote.
fn split_quoted(s: &str, sep: char) -> Option<Vec<String>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quote: Option<char> = None;
    let mut escaped = false;
    for c in s.chars() {
        if escaped {
            cur.push(c);
            escaped = false;
            continue;
        }
        match quote {
            Some(q) => {
                if c == '\\' {
                    escaped = true;
                } else if c == q {
                    quote = None;
                }
                cur.push(c);
            }
            None if c == '\'' || c == '"' => {
                quote = Some(c);
                cur.push(c);
            }
            None if c == sep => out.push(std::mem::take(&mut cur)),
            None => cur.push(c),
        }
    }
    if quote.is_some() {
        return None;
    }
    out.push(cur);
    Some(out)
}

/// Splits `@attribute <name> <type>` into (name, type text).
fn split_attribute(rest: &str) -> Option<(String, String)> {
    let rest = rest.trim_start();
    let first = rest.chars().next()?;
    if first == '\'' || first == '"' {
        let mut escaped = false;
        for (i, c) in rest.char_indices().skip(1) {
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == first {
                let name = unquote(&rest[..=i]);
                return Some((name, rest[i + 1..].trim().to_string()));
            }
        }
        None
    } else {
        let end = rest.find(|c: char| c.is_whitespace() || c == '{')?;
        Some((rest[..end].to_string(), rest[end..].trim().to_string()))
    }
}

fn parse_kind(ty: &str, line: usize) -> Result<AttributeKind> {
    if let Some(body) = ty.strip_prefix('{') {
        let body = body
            .strip_suffix('}')
            .ok_or_else(|| Error::parse(line, "unterminated nominal level list"))?;
        let levels: Vec<String> = split_quoted(body, ',')
            .ok_or_else(|| Error::parse(line, "unterminated quote in level list"))?
            .iter()
            .map(|l| unquote(l))
            .collect();
        if levels.iter().any(String::is_empty) {
            return Err(Error::parse(line, "empty nominal level"));
        }
        return Ok(AttributeKind::Nominal(levels));
    }
    match ty.to_ascii_lowercase().as_str() {
        "numeric" | "real" | "integer" => Ok(AttributeKind::Numeric),
        "string" => Ok(AttributeKind::Text),
        other => Err(Error::parse(
            line,
            format!("unsupported attribute type `{other}`"),
        )),
    }
}

fn parse_cell(token: &str, kind: &AttributeKind, name: &str, line: usize) -> Result<Cell> {
    let t = token.trim();
    if t == "?" {
        return Ok(Cell::Missing);
    }
    match kind {
        AttributeKind::Numeric => {
            let v: f64 = t.parse().map_err(|_| {
                Error::parse(line, format!("non-numeric value `{t}` in numeric column `{name}`"))
            })?;
            if !v.is_finite() {
                return Err(Error::parse(line, format!("non-finite value `{t}` in `{name}`")));
            }
            Ok(Cell::Number(v))
        }
        AttributeKind::Nominal(levels) => {
            let v = unquote(t);
            levels
                .iter()
                .position(|l| *l == v)
                .map(Cell::Level)
                .ok_or_else(|| Error::parse(line, format!("`{v}` is not a level of `{name}`")))
        }
        AttributeKind::Text => Ok(Cell::Text(unquote(t))),
    }
}

pub fn parse_arff(text: &str) -> Result<RawTable> {
    let mut names = Vec::new();
    let mut kinds = Vec::new();
    let mut rows = Vec::new();
    let mut seen_relation = false;
    let mut data_line = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        if data_line.is_none() {
            let lower = line.to_ascii_lowercase();
            if lower.starts_with("@relation") {
                seen_relation = true;
            } else if lower.starts_with("@attribute") {
                if !seen_relation {
                    return Err(Error::parse(line_no, "@attribute before @relation"));
                }
                let (name, ty) = split_attribute(&line["@attribute".len()..])
                    .ok_or_else(|| Error::parse(line_no, "malformed @attribute declaration"))?;
                if ty.is_empty() {
                    return Err(Error::parse(line_no, format!("attribute `{name}` has no type")));
                }
                kinds.push(parse_kind(&ty, line_no)?);
                names.push(name);
            } else if lower.starts_with("@data") {
                if names.is_empty() {
                    return Err(Error::parse(line_no, "@data before any @attribute"));
                }
                data_line = Some(line_no);
            } else {
                return Err(Error::parse(line_no, format!("unexpected header line `{line}`")));
            }
            continue;
        }
        if line.starts_with('{') {
            return Err(Error::parse(line_no, "sparse ARFF rows are not supported"));
        }
        let tokens = split_quoted(line, ',')
            .ok_or_else(|| Error::parse(line_no, "unterminated quote"))?;
        if tokens.len() != names.len() {
            return Err(Error::parse(
                line_no,
                format!("row has {} values, expected {}", tokens.len(), names.len()),
            ));
        }
        let row = tokens
            .iter()
            .zip(names.iter().zip(&kinds))
            .map(|(tok, (name, kind))| parse_cell(tok, kind, name, line_no))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }

    let data_line = data_line.ok_or_else(|| {
        Error::parse(text.lines().count().max(1), "missing @data section")
    })?;
    let class_attribute = detect_class_attribute(&names, &kinds)
        .ok_or_else(|| Error::parse(data_line, "no two-level nominal attribute to use as class"))?;
    Ok(RawTable {
        attribute_names: names,
        attribute_kinds: kinds,
        rows,
        class_attribute,
    })
}
