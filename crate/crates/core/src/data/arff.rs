//! Dense ARFF: `@relation`, numeric/real/integer and `{...}` nominal
//! attributes, `@data` rows with `?` for missing values and `%` comments.

use std::fmt::Write as _;
use std::path::Path;

use super::{Attribute, AttributeKind, DataError, Dataset, Instance, Value};

/// A parsed ARFF file plus the number of data rows dropped for lacking a class.
#[derive(Debug, Clone)]
pub struct ArffLoad {
    pub dataset: Dataset,
    pub skipped_unlabeled: usize,
}

pub fn load_arff(path: impl AsRef<Path>) -> Result<Dataset, DataError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| DataError::Io { path: path.to_path_buf(), source })?;
    let loaded = parse_arff(&text)?;
    if loaded.skipped_unlabeled > 0 {
        log::warn!("{}: skipped {} rows with a missing class", path.display(), loaded.skipped_unlabeled);
    }
    Ok(loaded.dataset)
}

pub fn parse_arff(text: &str) -> Result<ArffLoad, DataError> {
    let mut relation = String::new();
    let mut attributes: Vec<Attribute> = Vec::new();
    let mut rows: Vec<(usize, Vec<Option<String>>)> = Vec::new();
    let mut in_data = false;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if in_data {
            if line.starts_with('{') {
                return Err(DataError::parse(line_no, "sparse ARFF rows are not supported"));
            }
            let fields = split_fields(line, line_no)?;
            if fields.len() != attributes.len() {
                return Err(DataError::parse(
                    line_no,
                    format!("row has {} values, {} attributes declared", fields.len(), attributes.len()),
                ));
            }
            rows.push((line_no, fields));
            continue;
        }
        let (keyword, rest) = split_keyword(line);
        match keyword.to_ascii_lowercase().as_str() {
            "@relation" => {
                let (name, _) = take_token(rest, line_no)?;
                relation = name;
            }
            "@attribute" => attributes.push(parse_attribute(rest, line_no)?),
            "@data" => {
                if attributes.is_empty() {
                    return Err(DataError::parse(line_no, "@data before any @attribute"));
                }
                in_data = true;
            }
            other => return Err(DataError::parse(line_no, format!("unexpected declaration `{other}`"))),
        }
    }
    if !in_data {
        return Err(DataError::parse(text.lines().count(), "missing @data section"));
    }

    let class_idx = attributes
        .iter()
        .position(|a| a.name.eq_ignore_ascii_case("class") && !a.is_numeric())
        .or_else(|| attributes.iter().rposition(|a| !a.is_numeric()))
        .ok_or_else(|| DataError::Invalid("no nominal attribute to use as the class".into()))?;
    let class_attr = attributes.remove(class_idx);
    let AttributeKind::Nominal(classes) = class_attr.kind else { unreachable!() };

    let mut instances = Vec::with_capacity(rows.len());
    let mut skipped = 0;
    for (line_no, mut fields) in rows {
        let class_field = fields.remove(class_idx);
        let Some(class_value) = class_field else {
            skipped += 1;
            continue;
        };
        let label = classes
            .iter()
            .position(|c| *c == class_value)
            .ok_or_else(|| DataError::parse(line_no, format!("undeclared class value `{class_value}`")))?;
        let values = fields
            .into_iter()
            .zip(&attributes)
            .map(|(field, attr)| parse_value(field, attr, line_no))
            .collect::<Result<Vec<_>, _>>()?;
        instances.push(Instance::new(values, label));
    }
    let dataset = Dataset::new(relation, attributes, class_attr.name, classes, instances)?;
    Ok(ArffLoad { dataset, skipped_unlabeled: skipped })
}

fn parse_value(field: Option<String>, attr: &Attribute, line_no: usize) -> Result<Value, DataError> {
    let Some(text) = field else { return Ok(Value::Missing) };
    match &attr.kind {
        AttributeKind::Numeric => text
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map(Value::Numeric)
            .ok_or_else(|| DataError::parse(line_no, format!("`{text}` is not a number for `{}`", attr.name))),
        AttributeKind::Nominal(values) => values
            .iter()
            .position(|v| *v == text)
            .map(Value::Nominal)
            .ok_or_else(|| DataError::parse(line_no, format!("undeclared value `{text}` for `{}`", attr.name))),
    }
}

fn split_keyword(line: &str) -> (&str, &str) {
    match line.find(char::is_whitespace) {
        Some(at) => (&line[..at], line[at..].trim_start()),
        None => (line, ""),
    }
}

fn parse_attribute(rest: &str, line_no: usize) -> Result<Attribute, DataError> {
    let (name, tail) = take_token(rest, line_no)?;
    let spec = tail.trim();
    if let Some(body) = spec.strip_prefix('{') {
        let body = body
            .strip_suffix('}')
            .ok_or_else(|| DataError::parse(line_no, "unterminated nominal value list"))?;
        let values = split_fields(body, line_no)?
            .into_iter()
            .map(|v| v.ok_or_else(|| DataError::parse(line_no, "`?` is not a valid nominal value")))
            .collect::<Result<Vec<_>, _>>()?;
        if values.is_empty() {
            return Err(DataError::parse(line_no, format!("attribute `{name}` declares no values")));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = values.iter().find(|v| !seen.insert(v.as_str())) {
            return Err(DataError::parse(line_no, format!("attribute `{name}` repeats value `{dup}`")));
        }
        return Ok(Attribute::nominal(name, values));
    }
    match spec.to_ascii_lowercase().as_str() {
        "numeric" | "real" | "integer" => Ok(Attribute::numeric(name)),
        "" => Err(DataError::parse(line_no, format!("attribute `{name}` has no type"))),
        other => Err(DataError::parse(line_no, format!("unsupported attribute type `{other}`"))),
    }
}

/// Reads one possibly quoted token and returns it with the remaining text.
fn take_token(text: &str, line_no: usize) -> Result<(String, &str), DataError> {
    let text = text.trim_start();
    let mut chars = text.char_indices();
    match chars.next() {
        None => Err(DataError::parse(line_no, "expected a name")),
        Some((_, q)) if q == '\'' || q == '"' => {
            let mut out = String::new();
            let mut escaped = false;
            for (at, c) in chars {
                if escaped {
                    out.push(c);
                    escaped = false;
                } else if c == '\\' {
                    escaped = true;
                } else if c == q {
                    return Ok((out, &text[at + c.len_utf8()..]));
                } else {
                    out.push(c);
                }
            }
            Err(DataError::parse(line_no, "unterminated quote"))
        }
        Some(_) => {
            let end = text.find(|c: char| c.is_whitespace() || c == '{').unwrap_or(text.len());
            Ok((text[..end].to_string(), &text[end..]))
        }
    }
}

/// Splits a comma separated list honouring quotes. `?` becomes `None`.
fn split_fields(text: &str, line_no: usize) -> Result<Vec<Option<String>>, DataError> {
    let mut fields = Vec::new();
    let mut current = String::new();
    let mut quote: Option<char> = None;
    let mut was_quoted = false;
    let mut escaped = false;
    for c in text.chars() {
        if let Some(q) = quote {
            if escaped {
                current.push(c);
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == q {
                quote = None;
            } else {
                current.push(c);
            }
            continue;
        }
        match c {
            '\'' | '"' if current.trim().is_empty() => {
                current.clear();
                quote = Some(c);
                was_quoted = true;
            }
            ',' => {
                fields.push(finish_field(&current, was_quoted));
                current.clear();
                was_quoted = false;
            }
            _ => current.push(c),
        }
    }
    if quote.is_some() {
        return Err(DataError::parse(line_no, "unterminated quote"));
    }
    if !(fields.is_empty() && current.trim().is_empty() && !was_quoted) {
        fields.push(finish_field(&current, was_quoted));
    }
    Ok(fields)
}

fn finish_field(raw: &str, quoted: bool) -> Option<String> {
    if quoted {
        return Some(raw.to_string());
    }
    let t = raw.trim();
    (t != "?").then(|| t.to_string())
}

fn quote_if_needed(s: &str) -> String {
    let plain = !s.is_empty()
        && s != "?"
        && !s.chars().any(|c| c.is_whitespace() || matches!(c, ',' | '\'' | '"' | '%' | '{' | '}' | '\\'));
    if plain {
        s.to_string()
    } else {
        format!("'{}'", s.replace('\\', "\\\\").replace('\'', "\\'"))
    }
}

/// Renders a dataset as ARFF with the class as the last attribute.
pub fn to_arff(data: &Dataset) -> String {
    let mut out = String::new();
    let relation = if data.relation().is_empty() { "data" } else { data.relation() };
    let _ = writeln!(out, "@relation {}\n", quote_if_needed(relation));
    let nominal_list = |values: &[String]| values.iter().map(|v| quote_if_needed(v)).collect::<Vec<_>>().join(",");
    for attr in data.attributes() {
        match &attr.kind {
            AttributeKind::Numeric => {
                let _ = writeln!(out, "@attribute {} numeric", quote_if_needed(&attr.name));
            }
            AttributeKind::Nominal(values) => {
                let _ = writeln!(out, "@attribute {} {{{}}}", quote_if_needed(&attr.name), nominal_list(values));
            }
        }
    }
    let _ = writeln!(out, "@attribute {} {{{}}}\n\n@data", quote_if_needed(data.class_name()), nominal_list(data.classes()));
    for inst in data.instances() {
        for (value, attr) in inst.values.iter().zip(data.attributes()) {
            match (value, &attr.kind) {
                (Value::Missing, _) => out.push('?'),
                (Value::Numeric(x), _) => {
                    let _ = write!(out, "{x}");
                }
                (Value::Nominal(v), AttributeKind::Nominal(values)) => out.push_str(&quote_if_needed(&values[*v])),
                (Value::Nominal(v), AttributeKind::Numeric) => {
                    let _ = write!(out, "{v}");
                }
            }
            out.push(',');
        }
        out.push_str(&quote_if_needed(&data.classes()[inst.label]));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_valid_file() {
        let text = "@relation tiny\n@attribute x numeric\n@attribute class {yes,no}\n@data\n1.0,yes\n2.5,no\n";
        let d = parse_arff(text).unwrap().dataset;
        assert_eq!(d.len(), 2);
        assert_eq!(d.num_classes(), 2);
        assert_eq!(d.num_attributes(), 1);
        assert_eq!(d.instances()[1].values[0], Value::Numeric(2.5));
        assert_eq!(d.instances()[1].label, 1);
    }

    #[test]
    fn question_mark_is_missing() {
        let text = "@RELATION r\n@ATTRIBUTE a REAL\n@ATTRIBUTE b {u,v}\n@Attribute Class {p,q}\n@DATA\n1.0,?,p\n?,u,q\n";
        let d = parse_arff(text).unwrap().dataset;
        assert_eq!(d.instances()[0].values, vec![Value::Numeric(1.0), Value::Missing]);
        assert_eq!(d.instances()[1].values, vec![Value::Missing, Value::Nominal(0)]);
    }

    #[test]
    fn class_named_attribute_wins_over_last_nominal() {
        let text = "@relation r\n@attribute class {a,b}\n@attribute x real\n@attribute color {red,blue}\n@data\na,1,red\nb,2,blue\n";
        let d = parse_arff(text).unwrap().dataset;
        assert_eq!(d.class_name(), "class");
        assert_eq!(d.attributes()[1].name, "color");
        assert_eq!(d.labels(), vec![0, 1]);
    }

    #[test]
    fn last_nominal_is_default_class() {
        let text = "@relation r\n@attribute kind {a,b}\n@attribute x real\n@data\na,1\nb,2\n";
        let d = parse_arff(text).unwrap().dataset;
        assert_eq!(d.class_name(), "kind");
        assert_eq!(d.attributes().len(), 1);
    }

    #[test]
    fn comments_and_quotes() {
        let text = "% header\n@relation 'my data'\n@attribute 'sepal length' numeric\n@attribute class {'Iris setosa', other}\n% mid\n@data\n5.1,'Iris setosa'\n4.0, other\n";
        let d = parse_arff(text).unwrap().dataset;
        assert_eq!(d.relation(), "my data");
        assert_eq!(d.attributes()[0].name, "sepal length");
        assert_eq!(d.classes(), &["Iris setosa".to_string(), "other".to_string()]);
        assert_eq!(d.labels(), vec![0, 1]);
    }

    #[test]
    fn missing_class_rows_are_skipped() {
        let text = "@relation r\n@attribute x real\n@attribute class {a,b}\n@data\n1,a\n2,?\n3,b\n";
        let load = parse_arff(text).unwrap();
        assert_eq!(load.dataset.len(), 2);
        assert_eq!(load.skipped_unlabeled, 1);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad_value = "@relation r\n@attribute x real\n@attribute class {a,b}\n@data\n1,a\n2,c\n";
        assert!(matches!(parse_arff(bad_value), Err(DataError::Parse { line: 6, .. })));
        let arity = "@relation r\n@attribute x real\n@attribute class {a,b}\n@data\n1,a,3\n";
        assert!(matches!(parse_arff(arity), Err(DataError::Parse { line: 5, .. })));
        let decl = "@relation r\n@attribute x string\n";
        assert!(matches!(parse_arff(decl), Err(DataError::Parse { line: 2, .. })));
        let not_number = "@relation r\n@attribute x real\n@attribute class {a,b}\n@data\nfoo,a\n";
        assert!(matches!(parse_arff(not_number), Err(DataError::Parse { line: 5, .. })));
        let unterminated = "@relation r\n@attribute c {a,b\n";
        assert!(matches!(parse_arff(unterminated), Err(DataError::Parse { line: 2, .. })));
    }

    #[test]
    fn writes_and_rereads() {
        let text = "@relation 'a b'\n@attribute 'x y' real\n@attribute n {'p q',r}\n@attribute class {'c,1',d}\n@data\n1.25,'p q','c,1'\n?,?,d\n";
        let d = parse_arff(text).unwrap().dataset;
        let again = parse_arff(&to_arff(&d)).unwrap().dataset;
        assert_eq!(d, again);
    }
}
