use std::collections::HashMap;

use super::{split_groups, StatTable, StatsError};
use crate::atlas::{MeshAtlas, MeshHemi, PolygonAtlas, RegionRef, Surface};

/// Anything that can enumerate the regions a statistics table joins onto.
pub trait JoinTarget {
    fn join_regions(&self) -> Vec<RegionRef>;
}

impl JoinTarget for PolygonAtlas {
    fn join_regions(&self) -> Vec<RegionRef> {
        self.region_refs()
    }
}

impl JoinTarget for [RegionRef] {
    fn join_regions(&self) -> Vec<RegionRef> {
        self.to_vec()
    }
}

/// A mesh atlas restricted to one surface and a set of hemispheres
/// (all hemispheres when `hemis` is empty).
#[derive(Debug, Clone, Copy)]
pub struct MeshSelection<'a> {
    pub atlas: &'a MeshAtlas,
    pub surface: Surface,
    pub hemis: &'a [MeshHemi],
}

impl JoinTarget for MeshSelection<'_> {
    fn join_regions(&self) -> Vec<RegionRef> {
        self.atlas.region_refs(self.surface, self.hemis)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct JoinOptions {
    /// Treat stat rows that match no region as an error.
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JoinPair {
    pub region: RegionRef,
    /// Values in `JoinResult::value_columns` order; all `None` when no stat
    /// row matched this region.
    pub values: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnmatchedRow {
    /// 1-based data row number in the input table.
    pub row: usize,
    pub keys: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JoinResult {
    pub join_keys: Vec<String>,
    pub value_columns: Vec<String>,
    pub pairs: Vec<JoinPair>,
    pub unmatched_rows: Vec<UnmatchedRow>,
    /// Number of stat rows that matched at least one region.
    pub matched_count: usize,
}

impl JoinResult {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.value_columns.iter().position(|c| c == name)
    }

    /// Number of regions carrying a value in `column`.
    pub fn valued_regions(&self, column: &str) -> usize {
        self.column(column)
            .map(|c| self.pairs.iter().filter(|p| p.values[c].is_some()).count())
            .unwrap_or(0)
    }
}

fn join_keys(declared: &[String]) -> Vec<&'static str> {
    let has = |k: &str| declared.iter().any(|d| d == k);
    let mut keys = Vec::new();
    if has("label") {
        keys.push("label");
    } else if has("area") {
        keys.push("area");
    }
    if has("hemi") {
        keys.push("hemi");
    }
    keys
}

fn region_attr<'a>(region: &'a RegionRef, key: &str) -> &'a str {
    match key {
        "label" => &region.id.label,
        "area" => &region.area,
        _ => &region.id.hemi,
    }
}

/// Left join of `stats` onto the regions of `target`.
///
/// The join keys are `label` (or `area` when the table has no `label`
/// column), plus `hemi` when declared. Every region appears exactly once in
/// the result; regions without a matching row carry missing values. Key
/// comparison is exact after trimming surrounding whitespace.
pub fn join_stats<T: JoinTarget + ?Sized>(
    target: &T,
    stats: &StatTable,
    options: JoinOptions,
) -> Result<JoinResult, StatsError> {
    let keys = join_keys(&stats.key_columns);
    if keys.is_empty() {
        return Err(StatsError::NoSharedKey {
            declared: stats.key_columns.clone(),
        });
    }
    let key_idx: Vec<usize> = keys
        .iter()
        .map(|k| stats.key_index(k).expect("declared"))
        .collect();
    let regions = target.join_regions();

    let mut by_key: HashMap<Vec<&str>, Vec<usize>> = HashMap::new();
    for (r, region) in regions.iter().enumerate() {
        let k: Vec<&str> = keys
            .iter()
            .map(|key| region_attr(region, key).trim())
            .collect();
        by_key.entry(k).or_default().push(r);
    }

    let mut assigned: Vec<Option<usize>> = vec![None; regions.len()];
    let mut unmatched_rows = Vec::new();
    let mut matched_count = 0;
    for (i, row) in stats.rows.iter().enumerate() {
        let k: Vec<&str> = key_idx.iter().map(|&c| row.keys[c].trim()).collect();
        match by_key.get(&k) {
            Some(hits) => {
                matched_count += 1;
                for &r in hits {
                    if let Some(prev) = assigned[r] {
                        return Err(StatsError::DuplicateRegionRows {
                            region: regions[r].id.to_string(),
                            first: prev + 1,
                            second: i + 1,
                        });
                    }
                    assigned[r] = Some(i);
                }
            }
            None => unmatched_rows.push(UnmatchedRow {
                row: i + 1,
                keys: row.keys.clone(),
            }),
        }
    }

    if options.strict {
        if let Some(first) = unmatched_rows.first() {
            return Err(StatsError::Unmatched {
                count: unmatched_rows.len(),
                first: first.row,
            });
        }
    }
    if !stats.rows.is_empty() && matched_count == 0 {
        return Err(StatsError::NothingMatched);
    }

    let width = stats.value_columns.len();
    let pairs = regions
        .into_iter()
        .zip(assigned)
        .map(|(region, row)| JoinPair {
            region,
            values: match row {
                Some(i) => stats.rows[i].values.clone(),
                None => vec![None; width],
            },
        })
        .collect();

    Ok(JoinResult {
        join_keys: keys.iter().map(|k| k.to_string()).collect(),
        value_columns: stats.value_columns.clone(),
        pairs,
        unmatched_rows,
        matched_count,
    })
}

/// Splits on `group_column` (when given) and joins each group separately.
/// Ungrouped input yields a single entry named by `None`.
pub fn join_grouped<T: JoinTarget + ?Sized>(
    target: &T,
    stats: &StatTable,
    group_column: Option<&str>,
    options: JoinOptions,
) -> Result<Vec<(Option<String>, JoinResult)>, StatsError> {
    match group_column {
        None => Ok(vec![(None, join_stats(target, stats, options)?)]),
        Some(col) => split_groups(stats, col)?
            .into_iter()
            .map(|(name, sub)| Ok((Some(name), join_stats(target, &sub, options)?)))
            .collect(),
    }
}
