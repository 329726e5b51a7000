//! Mapping from CSL-JSON (as served by doi.org content negotiation) to
//! [`PublicationMeta`]. Fixture files use the same shape.
//!
//! | CSL-JSON                         | PublicationMeta |
//! |----------------------------------|-----------------|
//! | `title` (string or first of list) | `title`         |
//! | `author[]` `given family` or `literal` | `authors`  |
//! | `issued.date-parts[0][0]`        | `year`          |
//! | `container-title` or `publisher` | `venue`         |

use serde::Deserialize;
use serde_json::Value;

use super::PublicationMeta;

#[derive(Deserialize)]
struct CslAuthor {
    given: Option<String>,
    family: Option<String>,
    literal: Option<String>,
}

#[derive(Deserialize)]
struct CslDate {
    #[serde(rename = "date-parts")]
    date_parts: Vec<Vec<Value>>,
}

#[derive(Deserialize)]
struct CslRecord {
    title: Option<Value>,
    #[serde(default)]
    author: Vec<CslAuthor>,
    issued: Option<CslDate>,
    #[serde(rename = "container-title")]
    container_title: Option<Value>,
    publisher: Option<String>,
}

fn first_string(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Array(items) => items.iter().find_map(first_string),
        _ => None,
    }
}

fn year_of(v: &Value) -> Option<i32> {
    match v {
        Value::Number(n) => n.as_i64().and_then(|y| i32::try_from(y).ok()),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

/// `doi` must already be normalized; it wins over any `DOI` field in the record.
pub(super) fn map_record(doi: &str, bytes: &[u8]) -> Result<PublicationMeta, String> {
    let rec: CslRecord = serde_json::from_slice(bytes).map_err(|e| e.to_string())?;
    let title = rec
        .title
        .as_ref()
        .and_then(first_string)
        .map(|t| t.trim().to_string())
        .filter(|t| !t.is_empty())
        .ok_or("record has no title")?;
    let authors = rec
        .author
        .into_iter()
        .filter_map(|a| match (a.literal, a.given, a.family) {
            (Some(l), _, _) => Some(l),
            (None, Some(g), Some(f)) => Some(format!("{g} {f}")),
            (None, None, Some(f)) => Some(f),
            (None, Some(g), None) => Some(g),
            (None, None, None) => None,
        })
        .map(|a| a.trim().to_string())
        .filter(|a| !a.is_empty())
        .collect();
    let year = rec
        .issued
        .and_then(|d| d.date_parts.first().and_then(|p| p.first()).and_then(year_of))
        .ok_or("record has no issued year")?;
    let venue = rec
        .container_title
        .as_ref()
        .and_then(first_string)
        .or(rec.publisher)
        .unwrap_or_default();
    Ok(PublicationMeta { doi: doi.to_string(), title, authors, year, venue })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maps_typical_record() {
        let body = br#"{"DOI":"10.1000/DEMO","title":["A Title"],"author":[{"given":"Ada","family":"L"},{"literal":"The Team"}],
            "issued":{"date-parts":[["2024",5]]},"container-title":"Journal"}"#;
        let m = map_record("10.1000/demo", body).unwrap();
        assert_eq!(m.title, "A Title");
        assert_eq!(m.authors, ["Ada L", "The Team"]);
        assert_eq!(m.year, 2024);
        assert_eq!(m.venue, "Journal");
    }

    #[test]
    fn title_and_year_required() {
        assert!(map_record("10.1/x", br#"{"issued":{"date-parts":[[2020]]}}"#).is_err());
        assert!(map_record("10.1/x", br#"{"title":"t"}"#).is_err());
        assert!(map_record("10.1/x", b"[]").is_err());
    }
}
