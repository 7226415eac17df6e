//! CSV files for rankings, ground truth and partitions.

use std::path::Path;

use crate::error::{Error, Result};
use crate::partition::{GroundTruth, Partition};
use crate::ranking::RankingMatrix;

/// Header `item_0..item_{N-1}`, one row of ranks per voter.
pub fn write_rankings_csv<W: std::io::Write>(rankings: &RankingMatrix, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record((0..rankings.items()).map(|i| format!("item_{i}")))?;
    for row in rankings.rows().take(rankings.voters()) {
        w.write_record(row.iter().map(u32::to_string))?;
    }
    w.flush().map_err(|e| Error::io("<rankings csv>", e))?;
    Ok(())
}

pub fn read_rankings_csv<R: std::io::Read>(input: R) -> Result<RankingMatrix> {
    let mut r = csv::Reader::from_reader(input);
    let mut rows = Vec::new();
    for (idx, rec) in r.records().enumerate() {
        let rec = rec?;
        let row = rec
            .iter()
            .enumerate()
            .map(|(col, v)| {
                v.trim().parse::<u32>().map_err(|_| Error::Parse {
                    line: idx + 2,
                    field: format!("item_{col}"),
                    message: format!("`{v}` is not a rank"),
                })
            })
            .collect::<Result<Vec<u32>>>()?;
        rows.push(row);
    }
    RankingMatrix::from_rows(rows)
}

fn write_assignment<W: std::io::Write>(labels: &[usize], column: &str, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["item_id", column])?;
    for (i, l) in labels.iter().enumerate() {
        w.write_record([i.to_string(), l.to_string()])?;
    }
    w.flush().map_err(|e| Error::io("<assignment csv>", e))?;
    Ok(())
}

fn read_assignment<R: std::io::Read>(input: R) -> Result<Vec<usize>> {
    let mut r = csv::Reader::from_reader(input);
    let mut pairs = Vec::new();
    for (idx, rec) in r.records().enumerate() {
        let rec = rec?;
        let get = |k: usize, name: &str| -> Result<usize> {
            let v = rec.get(k).unwrap_or("");
            v.trim().parse().map_err(|_| Error::Parse {
                line: idx + 2,
                field: name.into(),
                message: format!("`{v}` is not an index"),
            })
        };
        pairs.push((get(0, "item_id")?, get(1, "label")?));
    }
    pairs.sort_unstable();
    for (expected, &(id, _)) in pairs.iter().enumerate() {
        if id != expected {
            return Err(Error::config(format!(
                "item ids must cover 0..{} exactly; found {id} at position {expected}",
                pairs.len()
            )));
        }
    }
    Ok(pairs.into_iter().map(|(_, l)| l).collect())
}

pub fn write_ground_truth_csv<W: std::io::Write>(truth: &GroundTruth, out: W) -> Result<()> {
    write_assignment(truth.as_slice(), "category", out)
}

pub fn read_ground_truth_csv<R: std::io::Read>(input: R) -> Result<GroundTruth> {
    GroundTruth::from_categories(read_assignment(input)?)
}

pub fn write_partition_csv<W: std::io::Write>(partition: &Partition, out: W) -> Result<()> {
    write_assignment(partition.as_slice(), "community", out)
}

pub fn read_partition_csv<R: std::io::Read>(input: R) -> Result<Partition> {
    Ok(Partition::from_labels(&read_assignment(input)?))
}

pub fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>> {
    std::fs::File::create(path)
        .map(std::io::BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

pub fn open(path: &Path) -> Result<std::io::BufReader<std::fs::File>> {
    std::fs::File::open(path)
        .map(std::io::BufReader::new)
        .map_err(|e| Error::io(path, e))
}
