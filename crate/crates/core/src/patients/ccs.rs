use std::collections::HashMap;
use std::path::Path;

use serde::Serialize;

use super::PatientError;

pub const UNMAPPED: &str = "Unmapped";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CcsEntry {
    pub category: String,
    pub description: String,
    pub level2_category: String,
    pub level2_description: String,
}

/// Diagnosis code to CCS category, read from the multi-level CSV layout
/// (fields 1, 2, 3, 7 and 8).
#[derive(Debug, Clone, Default)]
pub struct CcsTable {
    entries: HashMap<String, CcsEntry>,
}

/// Uppercases, trims quoting and drops dots so that `'E11.9'` and `E119`
/// compare equal.
pub fn normalize_code(code: &str) -> String {
    code.trim()
        .trim_matches(|c| c == '\'' || c == '"')
        .trim()
        .chars()
        .filter(|&c| c != '.')
        .flat_map(char::to_uppercase)
        .collect()
}

fn clean(field: &str) -> String {
    field.trim().trim_matches('\'').trim().to_string()
}

impl CcsTable {
    /// Parses a CSV with a header row. Values may be wrapped in single quotes.
    pub fn parse_csv_str(text: &str) -> Result<Self, PatientError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .from_reader(text.as_bytes());
        let mut entries = HashMap::new();
        for record in reader.records() {
            let record = record?;
            let line = record.position().map_or(0, |p| p.line());
            if record.len() < 8 {
                return Err(PatientError::Ccs {
                    line,
                    reason: format!("expected at least 8 fields, found {}", record.len()),
                });
            }
            let code = normalize_code(&record[0]);
            if code.is_empty() {
                return Err(PatientError::Ccs {
                    line,
                    reason: "empty diagnosis code".into(),
                });
            }
            let entry = CcsEntry {
                category: clean(&record[1]),
                description: clean(&record[2]),
                level2_category: clean(&record[6]),
                level2_description: clean(&record[7]),
            };
            if entry.level2_description.is_empty() {
                return Err(PatientError::Ccs {
                    line,
                    reason: format!("code {code} has no level 2 description"),
                });
            }
            entries.insert(code, entry);
        }
        Ok(CcsTable { entries })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, PatientError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| PatientError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse_csv_str(&text)
    }

    pub fn get(&self, code: &str) -> Option<&CcsEntry> {
        self.entries.get(&normalize_code(code))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Level 2 grouping for a code, or [`UNMAPPED`].
pub fn ccs_rollup<'a>(code: &str, table: &'a CcsTable) -> &'a str {
    table
        .get(code)
        .map_or(UNMAPPED, |e| e.level2_description.as_str())
}
