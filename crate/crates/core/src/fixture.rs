//! JSON fixtures for the classification tables.
//!
//! A fixture is one document per table:
//!
//! ```json
//! { "table": "3.25",
//!   "rows": [ { "key": "d=9 O(1,1,1,2)", "d": 9, "splitting": [1, 1, 1, 2],
//!               "status": "Exist.", "citation": "3.21" } ] }
//! ```
//!
//! Every field of a row other than `key`, `status`, `citation` and
//! `expect_discrepancy` is a parameter and must be an integer or an integer
//! array.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TableId {
    #[serde(rename = "2.3")]
    T2_3,
    #[serde(rename = "3.25")]
    T3_25,
    #[serde(rename = "5.7")]
    T5_7,
    #[serde(rename = "2.8.2")]
    T2_8_2,
    #[serde(rename = "4.4")]
    T4_4,
}

impl TableId {
    pub const ALL: [TableId; 5] = [
        TableId::T2_3,
        TableId::T3_25,
        TableId::T5_7,
        TableId::T2_8_2,
        TableId::T4_4,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TableId::T2_3 => "2.3",
            TableId::T3_25 => "3.25",
            TableId::T5_7 => "5.7",
            TableId::T2_8_2 => "2.8.2",
            TableId::T4_4 => "4.4",
        }
    }

    /// The fixture shipped with the crate for this table.
    pub fn embedded(self) -> &'static str {
        match self {
            TableId::T2_3 => include_str!("../fixtures/table_2_3.json"),
            TableId::T3_25 => include_str!("../fixtures/table_3_25.json"),
            TableId::T5_7 => include_str!("../fixtures/table_5_7.json"),
            TableId::T2_8_2 => include_str!("../fixtures/table_2_8_2.json"),
            TableId::T4_4 => include_str!("../fixtures/table_4_4.json"),
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TableId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::UnknownTable(s.to_owned()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    List(Vec<i64>),
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRow {
    #[serde(skip_serializing, default = "placeholder_table")]
    pub table: TableId,
    pub key: String,
    #[serde(rename = "status", default, skip_serializing_if = "String::is_empty")]
    pub paper_status: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub citation: String,
    #[serde(default, skip_serializing_if = "is_false")]
    pub expect_discrepancy: bool,
    #[serde(flatten)]
    pub params: BTreeMap<String, ParamValue>,
}

// Overwritten from the enclosing document on load.
fn placeholder_table() -> TableId {
    TableId::T2_3
}

impl ClassificationRow {
    pub fn new(table: TableId, key: impl Into<String>) -> Self {
        Self {
            table,
            key: key.into(),
            paper_status: String::new(),
            citation: String::new(),
            expect_discrepancy: false,
            params: BTreeMap::new(),
        }
    }

    pub fn with_int(mut self, name: &str, v: i64) -> Self {
        self.params.insert(name.to_owned(), ParamValue::Int(v));
        self
    }

    pub fn with_list(mut self, name: &str, v: Vec<i64>) -> Self {
        self.params.insert(name.to_owned(), ParamValue::List(v));
        self
    }

    fn schema(&self, message: String) -> Error {
        Error::Schema {
            row: self.key.clone(),
            message,
        }
    }

    pub fn int(&self, name: &str) -> Result<i64> {
        match self.params.get(name) {
            Some(ParamValue::Int(v)) => Ok(*v),
            Some(ParamValue::List(_)) => {
                Err(self.schema(format!("parameter `{name}` must be an integer")))
            }
            None => Err(self.schema(format!("missing parameter `{name}`"))),
        }
    }

    pub fn list(&self, name: &str) -> Result<&[i64]> {
        match self.params.get(name) {
            Some(ParamValue::List(v)) => Ok(v),
            Some(ParamValue::Int(_)) => {
                Err(self.schema(format!("parameter `{name}` must be an array")))
            }
            None => Err(self.schema(format!("missing parameter `{name}`"))),
        }
    }

    /// Like [`list`](Self::list) but an absent parameter is the empty list.
    pub fn list_or_empty(&self, name: &str) -> Result<&[i64]> {
        if self.params.contains_key(name) {
            self.list(name)
        } else {
            Ok(&[])
        }
    }

    /// The family tag of a Theorem 2.3 row: the key up to the first `-` or `/`.
    pub fn family(&self) -> &str {
        self.key.split(['-', '/']).next().unwrap_or("")
    }

    fn validate(&self) -> Result<()> {
        if self.key.trim().is_empty() {
            return Err(self.schema("empty key".into()));
        }
        let (ints, lists): (&[&str], &[&str]) = match self.table {
            TableId::T3_25 => (&["d"], &["splitting"]),
            TableId::T5_7 => (&["Ln", "r", "Lpn"], &[]),
            TableId::T2_8_2 => (&["degT", "degG", "c2", "L3"], &[]),
            TableId::T4_4 => (&["gC", "e", "b", "d"], &[]),
            TableId::T2_3 => match self.family() {
                "I" | "III" => (&["A2", "KA"], &[]),
                "II" => (&["A2", "KA", "KK"], &[]),
                "IV" => (&["A2", "A2_min"], &[]),
                "V" => (&["A2", "e", "x", "y"], &[]),
                "VI" => (&["A2"], &[]),
                "VII" => (&["A2", "e", "x", "y", "r"], &[]),
                "VIII" => (&["A2", "KK", "a"], &[]),
                other => return Err(self.schema(format!("unknown family `{other}`"))),
            },
        };
        for name in ints {
            self.int(name)?;
        }
        for name in lists {
            self.list(name)?;
        }
        if self.params.contains_key("weights") {
            self.list("weights")?;
        }
        Ok(())
    }
}

#[derive(Deserialize)]
struct RawDocument {
    table: String,
    rows: Vec<serde_json::Value>,
}

#[derive(Serialize)]
struct DocumentOut<'a> {
    table: TableId,
    rows: &'a [ClassificationRow],
}

/// Parses fixture text. `origin` is used in error messages only.
pub fn parse_fixture(text: &str, origin: &Path) -> Result<Vec<ClassificationRow>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let doc: RawDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: origin.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let table: TableId = doc.table.parse()?;
    doc.rows
        .into_iter()
        .enumerate()
        .map(|(i, value)| {
            let label = value
                .get("key")
                .and_then(|k| k.as_str())
                .map_or_else(|| format!("#{i}"), str::to_owned);
            let mut row: ClassificationRow =
                serde_json::from_value(value).map_err(|e| Error::Schema {
                    row: label,
                    message: e.to_string(),
                })?;
            row.table = table;
            row.validate()?;
            Ok(row)
        })
        .collect()
}

pub fn load_fixture(path: &Path) -> Result<Vec<ClassificationRow>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    parse_fixture(&text, path)
}

pub fn render_fixture(table: TableId, rows: &[ClassificationRow]) -> Result<String> {
    if let Some(row) = rows.iter().find(|r| r.table != table) {
        return Err(Error::Schema {
            row: row.key.clone(),
            message: format!("belongs to table {}, not {table}", row.table),
        });
    }
    let mut s = serde_json::to_string_pretty(&DocumentOut { table, rows }).expect("rows serialize");
    s.push('\n');
    Ok(s)
}

pub fn write_fixture(path: &Path, table: TableId, rows: &[ClassificationRow]) -> Result<()> {
    let text = render_fixture(table, rows)?;
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// The shipped fixture for `table`, parsed.
pub fn embedded_rows(table: TableId) -> Vec<ClassificationRow> {
    let origin = format!("<embedded {table}>");
    parse_fixture(table.embedded(), Path::new(&origin)).expect("embedded fixtures are well-formed")
}
