//! CSV ingestion: single-column files, or named-column selection from a
//! header row. UTF-8, '.' decimal separator, blank lines skipped, and any
//! non-numeric cell is a hard error carrying its 1-based line number.

use std::path::Path;

use crate::errors::CliError;

pub fn read_values(path: &Path, column: Option<&str>) -> Result<Vec<f64>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input {
        context: format!("cannot read '{}': {e}", path.display()),
    })?;
    let rows: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    if rows.is_empty() {
        return Err(CliError::Input {
            context: format!("'{}' contains no data rows", path.display()),
        });
    }

    let (col_idx, data_rows): (usize, &[(usize, &str)]) = match column {
        Some(name) => {
            let (header_line, header) = rows[0];
            let names: Vec<&str> = header.split(',').map(str::trim).collect();
            let idx = names
                .iter()
                .position(|h| *h == name)
                .ok_or_else(|| CliError::Input {
                    context: format!(
                        "column '{name}' not found in header (line {header_line}: {})",
                        names.join(", ")
                    ),
                })?;
            (idx, &rows[1..])
        }
        None => {
            let (first_line, first) = rows[0];
            if first.split(',').count() > 1 {
                return Err(CliError::Input {
                    context: format!(
                        "line {first_line}: several columns found; pass --column to pick one"
                    ),
                });
            }
            // single-column mode; a non-numeric first row is a header
            let skip_header = parse_cell(first).is_err();
            (0, &rows[skip_header as usize..])
        }
    };

    let mut values = Vec::with_capacity(data_rows.len());
    for (lineno, row) in data_rows {
        let cells: Vec<&str> = row.split(',').map(str::trim).collect();
        if column.is_none() && cells.len() > 1 {
            return Err(CliError::Input {
                context: format!(
                    "line {lineno}: {} columns found; pass --column to pick one",
                    cells.len()
                ),
            });
        }
        let cell = cells.get(col_idx).copied().unwrap_or("");
        let value = parse_cell(cell).map_err(|msg| CliError::Input {
            context: format!("line {lineno}: {msg}"),
        })?;
        values.push(value);
    }
    Ok(values)
}

fn parse_cell(cell: &str) -> Result<f64, String> {
    if cell.is_empty() {
        return Err("empty cell".into());
    }
    cell.parse::<f64>()
        .map_err(|_| format!("'{cell}' is not a number"))
}

/// Parses "1/2" or "0.5" into a lower-endpoint fraction value.
pub fn parse_r_lower(s: &str) -> Result<f64, String> {
    let value = match s.split_once('/') {
        Some((a, b)) => {
            let num: f64 = a
                .trim()
                .parse()
                .map_err(|_| format!("bad fraction '{s}'"))?;
            let den: f64 = b
                .trim()
                .parse()
                .map_err(|_| format!("bad fraction '{s}'"))?;
            num / den
        }
        None => s.trim().parse().map_err(|_| format!("bad number '{s}'"))?,
    };
    if !(value > 0.0 && value <= 1.0) {
        return Err(format!("r_lower must be in (0, 1], got {value}"));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn single_column_no_header() {
        let f = write_tmp("1.5\n\n2.5\n3.5\n");
        assert_eq!(read_values(f.path(), None).unwrap(), vec![1.5, 2.5, 3.5]);
    }

    #[test]
    fn single_column_with_header() {
        let f = write_tmp("weight\n1.5\n2.5\n");
        assert_eq!(read_values(f.path(), None).unwrap(), vec![1.5, 2.5]);
    }

    #[test]
    fn named_column() {
        let f = write_tmp("id,weight\n1,3.2\n2,2.9\n");
        assert_eq!(
            read_values(f.path(), Some("weight")).unwrap(),
            vec![3.2, 2.9]
        );
        let err = read_values(f.path(), Some("height")).unwrap_err();
        assert!(err.to_string().contains("height"));
    }

    #[test]
    fn non_numeric_cell_reports_line() {
        let f = write_tmp("1.0\n2.0\nabc\n");
        let err = read_values(f.path(), None).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn multi_column_without_selector_rejected() {
        let f = write_tmp("1.0,2.0\n");
        let err = read_values(f.path(), None).unwrap_err();
        assert!(err.to_string().contains("--column"), "{err}");
    }

    #[test]
    fn r_lower_forms() {
        assert_eq!(parse_r_lower("1/2").unwrap(), 0.5);
        assert_eq!(parse_r_lower("0.25").unwrap(), 0.25);
        assert_eq!(parse_r_lower("1").unwrap(), 1.0);
        assert!(parse_r_lower("0").is_err());
        assert!(parse_r_lower("3/2").is_err());
    }
}
