use std::collections::HashSet;

use super::StatsError;

/// One row: key cells in `StatTable::key_columns` order, values in
/// `StatTable::value_columns` order (`None` = missing).
#[derive(Debug, Clone, PartialEq)]
pub struct StatRow {
    pub keys: Vec<String>,
    pub values: Vec<Option<f64>>,
}

/// Long-format statistics: declared string key columns plus numeric value
/// columns.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StatTable {
    pub key_columns: Vec<String>,
    pub value_columns: Vec<String>,
    pub rows: Vec<StatRow>,
}

impl StatTable {
    pub fn new(key_columns: Vec<String>, value_columns: Vec<String>) -> Self {
        StatTable {
            key_columns,
            value_columns,
            rows: Vec::new(),
        }
    }

    pub fn key_index(&self, name: &str) -> Option<usize> {
        self.key_columns.iter().position(|c| c == name)
    }

    pub fn value_index(&self, name: &str) -> Option<usize> {
        self.value_columns.iter().position(|c| c == name)
    }

    pub fn key<'a>(&'a self, row: &'a StatRow, name: &str) -> Option<&'a str> {
        self.key_index(name).map(|i| row.keys[i].as_str())
    }

    pub fn value(&self, row: &StatRow, name: &str) -> Option<f64> {
        self.value_index(name).and_then(|i| row.values[i])
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

fn delimiter(bytes: &[u8]) -> u8 {
    let header_end = bytes
        .iter()
        .position(|b| *b == b'\n')
        .unwrap_or(bytes.len());
    if bytes[..header_end].contains(&b'\t') {
        b'\t'
    } else {
        b','
    }
}

fn reader(bytes: &[u8]) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .delimiter(delimiter(bytes))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(bytes)
}

/// Header names of a comma- or tab-separated table.
pub fn read_header(bytes: &[u8]) -> Result<Vec<String>, StatsError> {
    let mut rdr = reader(bytes);
    let header = rdr.headers().map_err(|e| StatsError::Csv(e.to_string()))?;
    Ok(header.iter().map(str::to_string).collect())
}

/// Parses comma- or tab-separated text (chosen by the header line).
///
/// Declared key columns are kept as trimmed strings; every other column must
/// parse as a finite number. Empty cells and `NA` are missing values.
/// Rows are numbered from 1 in error messages, the header excluded.
pub fn read_stat_table(bytes: &[u8], key_columns: &[&str]) -> Result<StatTable, StatsError> {
    let header = read_header(bytes)?;
    let mut seen = HashSet::new();
    for h in &header {
        if !seen.insert(h.as_str()) {
            return Err(StatsError::DuplicateColumn(h.clone()));
        }
    }
    let key_pos: Vec<usize> = key_columns
        .iter()
        .map(|k| {
            header
                .iter()
                .position(|h| h == k)
                .ok_or_else(|| StatsError::MissingKeyColumn(k.to_string()))
        })
        .collect::<Result<_, _>>()?;
    let value_pos: Vec<usize> = (0..header.len()).filter(|i| !key_pos.contains(i)).collect();

    let mut table = StatTable::new(
        key_columns.iter().map(|k| k.to_string()).collect(),
        value_pos.iter().map(|&i| header[i].clone()).collect(),
    );
    for (idx, record) in reader(bytes).records().enumerate() {
        let row = idx + 1;
        let record = record.map_err(|e| StatsError::Csv(e.to_string()))?;
        if record.len() == 1 && record.get(0) == Some("") && header.len() > 1 {
            continue;
        }
        if record.len() != header.len() {
            return Err(StatsError::RaggedRow {
                row,
                expected: header.len(),
                found: record.len(),
            });
        }
        let keys = key_pos.iter().map(|&i| record[i].to_string()).collect();
        let values = value_pos
            .iter()
            .map(|&i| parse_value(&record[i], row, &header[i]))
            .collect::<Result<_, _>>()?;
        table.rows.push(StatRow { keys, values });
    }
    Ok(table)
}

fn parse_value(cell: &str, row: usize, column: &str) -> Result<Option<f64>, StatsError> {
    if cell.is_empty() || cell == "NA" {
        return Ok(None);
    }
    match cell.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(Some(v)),
        _ => Err(StatsError::NonNumeric {
            row,
            column: column.to_string(),
            value: cell.to_string(),
        }),
    }
}

/// Gathers every non-id column into `(key_name, value_name)` pairs.
///
/// Output order is column-major: all rows of the first measure column, then
/// all rows of the second, and so on.
pub fn pivot_wide_to_long(
    table: &StatTable,
    id_columns: &[&str],
    key_name: &str,
    value_name: &str,
) -> Result<StatTable, StatsError> {
    let id_idx: Vec<usize> = id_columns
        .iter()
        .map(|c| {
            table
                .key_index(c)
                .ok_or_else(|| StatsError::MissingIdColumn(c.to_string()))
        })
        .collect::<Result<_, _>>()?;
    if let Some(extra) = table
        .key_columns
        .iter()
        .find(|k| !id_columns.contains(&k.as_str()))
    {
        return Err(StatsError::UngatherableColumn(extra.clone()));
    }

    let mut key_columns: Vec<String> = id_columns.iter().map(|c| c.to_string()).collect();
    key_columns.push(key_name.to_string());
    let mut out = StatTable::new(key_columns, vec![value_name.to_string()]);
    for (m, measure) in table.value_columns.iter().enumerate() {
        for row in &table.rows {
            let mut keys: Vec<String> = id_idx.iter().map(|&i| row.keys[i].clone()).collect();
            keys.push(measure.clone());
            out.rows.push(StatRow {
                keys,
                values: vec![row.values[m]],
            });
        }
    }
    Ok(out)
}

/// Splits on a key column, keeping groups in first-appearance order. Each
/// sub-table drops the group column.
pub fn split_groups(
    table: &StatTable,
    group_column: &str,
) -> Result<Vec<(String, StatTable)>, StatsError> {
    let gi = table
        .key_index(group_column)
        .ok_or_else(|| StatsError::MissingGroupColumn(group_column.to_string()))?;
    let mut key_columns = table.key_columns.clone();
    key_columns.remove(gi);
    let mut groups: Vec<(String, StatTable)> = Vec::new();
    for row in &table.rows {
        let name = &row.keys[gi];
        let pos = match groups.iter().position(|(g, _)| g == name) {
            Some(p) => p,
            None => {
                groups.push((
                    name.clone(),
                    StatTable::new(key_columns.clone(), table.value_columns.clone()),
                ));
                groups.len() - 1
            }
        };
        let mut keys = row.keys.clone();
        keys.remove(gi);
        groups[pos].1.rows.push(StatRow {
            keys,
            values: row.values.clone(),
        });
    }
    Ok(groups)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_row_parse() {
        let t = read_stat_table(b"area,p\ninsula,0.03\n", &["area"]).unwrap();
        assert_eq!(t.key_columns, vec!["area"]);
        assert_eq!(t.value_columns, vec!["p"]);
        assert_eq!(
            t.rows,
            vec![StatRow {
                keys: vec!["insula".into()],
                values: vec![Some(0.03)]
            }]
        );
    }

    #[test]
    fn header_only_is_empty() {
        let t = read_stat_table(b"area,p\n", &["area"]).unwrap();
        assert!(t.is_empty());
        assert_eq!(t.value_columns, vec!["p"]);
    }

    #[test]
    fn non_numeric_cell_names_row_and_column() {
        let err = read_stat_table(b"area,p\ninsula,abc\n", &["area"]).unwrap_err();
        assert_eq!(
            err,
            StatsError::NonNumeric {
                row: 1,
                column: "p".into(),
                value: "abc".into()
            }
        );
        assert!(err.to_string().contains("row 1"));
    }

    #[test]
    fn tabs_missing_cells_and_whitespace() {
        let t = read_stat_table(
            b"area\themi\tp\n insula \tleft\t\ncuneus\tright\tNA\n",
            &["area", "hemi"],
        )
        .unwrap();
        assert_eq!(t.rows[0].keys, vec!["insula", "left"]);
        assert_eq!(t.rows[0].values, vec![None]);
        assert_eq!(t.rows[1].values, vec![None]);
    }

    #[test]
    fn missing_key_column() {
        assert_eq!(
            read_stat_table(b"area,p\n", &["label"]).unwrap_err(),
            StatsError::MissingKeyColumn("label".into())
        );
    }

    #[test]
    fn infinities_are_rejected() {
        assert!(matches!(
            read_stat_table(b"area,p\ninsula,inf\n", &["area"]),
            Err(StatsError::NonNumeric { .. })
        ));
    }

    #[test]
    fn zero_measure_columns_pivot_to_nothing() {
        let t = read_stat_table(b"id\n10\n11\n", &["id"]).unwrap();
        let long = pivot_wide_to_long(&t, &["id"], "label", "thickness").unwrap();
        assert!(long.is_empty());
        assert_eq!(long.key_columns, vec!["id", "label"]);
    }

    #[test]
    fn pivot_requires_id_columns() {
        let t = read_stat_table(b"id,a\n10,1\n", &["id"]).unwrap();
        assert_eq!(
            pivot_wide_to_long(&t, &["subject"], "label", "v").unwrap_err(),
            StatsError::MissingIdColumn("subject".into())
        );
    }

    #[test]
    fn interleaved_groups_keep_first_appearance_order() {
        let t = read_stat_table(b"area,g,p\na,Y,1\nb,O,2\nc,Y,3\nd,O,4\n", &["area", "g"]).unwrap();
        let groups = split_groups(&t, "g").unwrap();
        let names: Vec<&str> = groups.iter().map(|(g, _)| g.as_str()).collect();
        assert_eq!(names, ["Y", "O"]);
        assert_eq!(groups[0].1.key_columns, vec!["area"]);
        assert_eq!(groups[0].1.rows.len(), 2);
        assert_eq!(groups[1].1.rows[1].values, vec![Some(4.0)]);
    }

    #[test]
    fn single_group_equals_input_minus_column() {
        let t = read_stat_table(b"area,g,p\na,Y,1\nb,Y,2\n", &["area", "g"]).unwrap();
        let groups = split_groups(&t, "g").unwrap();
        assert_eq!(groups.len(), 1);
        let expected = read_stat_table(b"area,p\na,1\nb,2\n", &["area"]).unwrap();
        assert_eq!(groups[0].1, expected);
        assert_eq!(
            split_groups(&t, "AgeG").unwrap_err(),
            StatsError::MissingGroupColumn("AgeG".into())
        );
    }
}
