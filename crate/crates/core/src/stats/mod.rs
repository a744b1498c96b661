//! Statistics tables and their join onto atlas regions.

mod join;
mod table;

use thiserror::Error;

pub use join::{
    join_grouped, join_stats, JoinOptions, JoinPair, JoinResult, JoinTarget, MeshSelection,
    UnmatchedRow,
};
pub use table::{
    pivot_wide_to_long, read_header, read_stat_table, split_groups, StatRow, StatTable,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("missing declared key column {0:?}")]
    MissingKeyColumn(String),
    #[error("duplicate column {0:?} in header")]
    DuplicateColumn(String),
    #[error("row {row}, column {column:?}: {value:?} is not a finite number")]
    NonNumeric {
        row: usize,
        column: String,
        value: String,
    },
    #[error("row {row}: expected {expected} fields, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("malformed table: {0}")]
    Csv(String),
    #[error("id column {0:?} not present")]
    MissingIdColumn(String),
    #[error("column {0:?} is neither an id column nor numeric and cannot be gathered")]
    UngatherableColumn(String),
    #[error("group column {0:?} not present")]
    MissingGroupColumn(String),
    #[error(
        "no shared key column: stats declare {declared:?}, join needs one of label, area, hemi"
    )]
    NoSharedKey { declared: Vec<String> },
    #[error("{count} stat row(s) matched no region (first: row {first})")]
    Unmatched { count: usize, first: usize },
    #[error("no stat row matched any atlas region")]
    NothingMatched,
    #[error("region {region} matched by more than one stat row (rows {first} and {second})")]
    DuplicateRegionRows {
        region: String,
        first: usize,
        second: usize,
    },
    #[error("value column {0:?} not present")]
    MissingValueColumn(String),
}
