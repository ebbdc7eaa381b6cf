//! Tables, ratio reports, result serialization and checkpoint files.

mod checkpoint;

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::search::{count_with, Constraint, CountResult, SearchOptions};

pub use checkpoint::{
    checkpoint_path, latest_checkpoint, load_checkpoint, read_checkpoint, save_checkpoint, write_checkpoint,
    Checkpointer, CHECKPOINT_MAGIC, CHECKPOINT_VERSION,
};

/// Size of one search level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelStats {
    /// Edge label the next expansion places (0 = terminal).
    pub level: usize,
    pub class_count: usize,
    /// Tree nodes represented, summed over both orientations.
    pub node_sum: u128,
    pub wall_time: Duration,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Plain,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Format::Plain),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidInput(format!("unknown format {other:?}"))),
        }
    }
}

/// Counts travel as decimal strings so 64-bit consumers cannot truncate them.
mod decimal {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u128, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u128, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: usize,
    #[serde(with = "decimal")]
    pub count: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub level: usize,
    pub classes: usize,
    #[serde(with = "decimal")]
    pub nodes: u128,
}

/// JSON shape of a single count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub n: usize,
    pub constraint: String,
    #[serde(with = "decimal")]
    pub count: u128,
    pub elapsed_ms: u64,
    pub levels: Vec<LevelRecord>,
}

impl From<&CountResult> for CountReport {
    fn from(r: &CountResult) -> Self {
        CountReport {
            n: r.n,
            constraint: r.constraint.to_string(),
            count: r.count,
            elapsed_ms: r.elapsed.as_millis() as u64,
            levels: r
                .levels
                .iter()
                .map(|l| LevelRecord { level: l.level, classes: l.class_count, nodes: l.node_sum })
                .collect(),
        }
    }
}

pub fn render_count(r: &CountResult, format: Format) -> Result<String> {
    Ok(match format {
        Format::Plain => format!("{}\n", r.count),
        Format::Csv => format!("n,count\n{},{}\n", r.n, r.count),
        Format::Json => {
            let mut s = serde_json::to_string(&CountReport::from(r))?;
            s.push('\n');
            s
        }
    })
}

/// Per-level class statistics, one line per level.
pub fn render_stats(r: &CountResult) -> String {
    let mut s = String::from("level\tclasses\tnodes\tseconds\n");
    for l in &r.levels {
        let _ = writeln!(s, "{}\t{}\t{}\t{:.3}", l.level, l.class_count, l.node_sum, l.wall_time.as_secs_f64());
    }
    s
}

/// `G(n)` for every `n` in `from..=to`.
pub fn compute_table(from: usize, to: usize, opts: &SearchOptions) -> Result<Vec<TableRow>> {
    if from == 0 || to < from {
        return Err(Error::InvalidInput(format!("bad range {from}..={to}")));
    }
    (from..=to).map(|n| Ok(TableRow { n, count: count_with(n, Constraint::None, opts)?.count })).collect()
}

pub fn render_table(rows: &[TableRow], format: Format) -> Result<String> {
    Ok(match format {
        Format::Plain => rows.iter().map(|r| format!("{} {}\n", r.n, r.count)).collect(),
        Format::Csv => {
            let mut s = String::from("n,count\n");
            for r in rows {
                let _ = writeln!(s, "{},{}", r.n, r.count);
            }
            s
        }
        Format::Json => {
            let mut s = serde_json::to_string(rows)?;
            s.push('\n');
            s
        }
    })
}

/// Parses the `n,count` CSV produced by [`render_table`].
pub fn parse_table_csv(text: &str) -> Result<Vec<TableRow>> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("n,count") {
        return Err(Error::InvalidInput("missing n,count header".into()));
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let (n, c) = l.split_once(',').ok_or_else(|| Error::InvalidInput(format!("bad row {l:?}")))?;
            let bad = |_| Error::InvalidInput(format!("bad row {l:?}"));
            Ok(TableRow { n: n.trim().parse().map_err(bad)?, count: c.trim().parse().map_err(bad)? })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioRow {
    pub n: usize,
    /// `G(n+1)/G(n)` rounded to three decimals, as text.
    pub ratio: String,
}

/// Ratio of two counts, rounded half-up to three decimals.
pub fn ratio_3dp(num: u128, den: u128) -> Option<String> {
    if den == 0 {
        return None;
    }
    let scaled = num.checked_mul(1000)?.checked_add(den / 2)? / den;
    Some(format!("{}.{:03}", scaled / 1000, scaled % 1000))
}

/// Growth ratios `G(n+1)/G(n)` for `n` in `from..to`.
pub fn compute_ratios(from: usize, to: usize, opts: &SearchOptions) -> Result<Vec<RatioRow>> {
    if to < from + 1 {
        return Err(Error::InvalidInput(format!("ratios need to > from (got {from}..{to})")));
    }
    let rows = compute_table(from, to, opts)?;
    Ok(ratios_from_table(&rows))
}

pub fn ratios_from_table(rows: &[TableRow]) -> Vec<RatioRow> {
    rows.windows(2)
        .map(|w| RatioRow { n: w[0].n, ratio: ratio_3dp(w[1].count, w[0].count).unwrap_or_else(|| "inf".into()) })
        .collect()
}

pub fn render_ratios(rows: &[RatioRow]) -> String {
    rows.iter().map(|r| format!("{} {}\n", r.n, r.ratio)).collect()
}
