//! MovieLens-format ratings and title-selected item subsets.
//!
//! Ratings are the tab-separated `user item rating timestamp` lines of
//! `u.data`; titles come from the pipe-separated `u.item` file, which is
//! Latin-1 encoded. Items are compared on a cardinal 0-5 scale, so the
//! similarity of two ratings is `1 - |r_a - r_b| / 5`, averaged over the
//! users who rated both.

use std::collections::{BTreeMap, HashMap};
use std::io::BufRead;
use std::path::Path;

use crate::error::{Error, Result};
use crate::similarity::SimilarityMatrix;

pub const RATING_SCALE: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rating {
    pub user: u32,
    pub item: u32,
    pub rating: f64,
    pub timestamp: i64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RatingsTable {
    pub ratings: Vec<Rating>,
    pub titles: BTreeMap<u32, String>,
}

impl RatingsTable {
    pub fn users(&self) -> usize {
        let mut u: Vec<u32> = self.ratings.iter().map(|r| r.user).collect();
        u.sort_unstable();
        u.dedup();
        u.len()
    }

    /// Distinct items, counting both rated items and titled items.
    pub fn items(&self) -> usize {
        let mut i: Vec<u32> = self.ratings.iter().map(|r| r.item).collect();
        i.extend(self.titles.keys());
        i.sort_unstable();
        i.dedup();
        i.len()
    }

    /// A copy without any rating by `user`.
    pub fn without_user(&self, user: u32) -> RatingsTable {
        RatingsTable {
            ratings: self
                .ratings
                .iter()
                .filter(|r| r.user != user)
                .copied()
                .collect(),
            titles: self.titles.clone(),
        }
    }
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, name: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::Parse {
        line,
        field: name.into(),
        message: "missing".into(),
    })?;
    tok.trim().parse().map_err(|_| Error::Parse {
        line,
        field: name.into(),
        message: format!("cannot parse `{tok}`"),
    })
}

/// Parse ratings lines, rejecting duplicates and out-of-scale ratings.
pub fn read_ratings<R: BufRead>(input: R) -> Result<Vec<Rating>> {
    let mut seen: HashMap<(u32, u32), usize> = HashMap::new();
    let mut out = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io("<ratings>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split('\t');
        let user: u32 = field(parts.next(), line_no, "user")?;
        let item: u32 = field(parts.next(), line_no, "item")?;
        let rating: f64 = field(parts.next(), line_no, "rating")?;
        let timestamp: i64 = field(parts.next(), line_no, "timestamp")?;
        if !(0.0..=RATING_SCALE).contains(&rating) {
            return Err(Error::Parse {
                line: line_no,
                field: "rating".into(),
                message: format!("{rating} outside [0, {RATING_SCALE}]"),
            });
        }
        if let Some(&first_line) = seen.get(&(user, item)) {
            return Err(Error::DuplicateRating {
                user,
                item,
                line: line_no,
                first_line,
            });
        }
        seen.insert((user, item), line_no);
        out.push(Rating {
            user,
            item,
            rating,
            timestamp,
        });
    }
    Ok(out)
}

/// Parse `id|title|...` lines; bytes are decoded as Latin-1.
pub fn read_titles<R: BufRead>(mut input: R) -> Result<BTreeMap<u32, String>> {
    let mut titles = BTreeMap::new();
    let mut buf = Vec::new();
    let mut line_no = 0;
    loop {
        buf.clear();
        let read = input
            .read_until(b'\n', &mut buf)
            .map_err(|e| Error::io("<items>", e))?;
        if read == 0 {
            break;
        }
        line_no += 1;
        let line: String = buf.iter().map(|&b| b as char).collect();
        let line = line.trim_end_matches(['\n', '\r']);
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split('|');
        let id: u32 = field(parts.next(), line_no, "item id")?;
        let title = parts.next().ok_or_else(|| Error::Parse {
            line: line_no,
            field: "title".into(),
            message: "missing".into(),
        })?;
        titles.insert(id, title.to_string());
    }
    Ok(titles)
}

pub fn parse_ratings(data_file: &Path, item_file: &Path) -> Result<RatingsTable> {
    let open = |p: &Path| {
        std::fs::File::open(p)
            .map(std::io::BufReader::new)
            .map_err(|e| Error::io(p, e))
    };
    let ratings = read_ratings(open(data_file)?).map_err(|e| with_path(e, data_file))?;
    let titles = read_titles(open(item_file)?).map_err(|e| with_path(e, item_file))?;
    Ok(RatingsTable { ratings, titles })
}

fn with_path(e: Error, path: &Path) -> Error {
    match e {
        Error::Io { source, .. } => Error::io(path, source),
        Error::Parse {
            line,
            field,
            message,
        } => Error::Parse {
            line,
            field,
            message: format!("{message} (in {})", path.display()),
        },
        other => other,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TitlePattern {
    /// Case-insensitive substring.
    Contains(String),
    /// Case-insensitive whole title.
    Exact(String),
}

impl TitlePattern {
    fn matches(&self, title: &str) -> bool {
        let title = title.to_lowercase();
        match self {
            TitlePattern::Contains(s) => title.contains(&s.to_lowercase()),
            TitlePattern::Exact(s) => title == s.to_lowercase(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetEntry {
    pub group: Option<String>,
    pub pattern: TitlePattern,
}

/// Title patterns whose matches, together, form the analysis universe.
///
/// Text format, one entry per line: `=Title (Year)` matches a whole title,
/// anything else is a substring. `[name]` starts a named group that the
/// following entries belong to; `#` starts a comment line.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SubsetSpec {
    pub entries: Vec<SubsetEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedSubset {
    pub items: Vec<u32>,
    pub titles: Vec<String>,
    /// Group of the first entry that matched each item.
    pub groups: Vec<Option<String>>,
}

impl SubsetSpec {
    pub fn parse(text: &str) -> Self {
        let mut group = None;
        let mut entries = Vec::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                group = Some(name.trim().to_string());
                continue;
            }
            let pattern = match line.strip_prefix('=') {
                Some(exact) => TitlePattern::Exact(exact.trim().to_string()),
                None => TitlePattern::Contains(line.to_string()),
            };
            entries.push(SubsetEntry {
                group: group.clone(),
                pattern,
            });
        }
        SubsetSpec { entries }
    }

    /// Items in entry order, then by id within an entry; each item once.
    pub fn resolve(&self, table: &RatingsTable) -> Result<ResolvedSubset> {
        let mut out = ResolvedSubset {
            items: Vec::new(),
            titles: Vec::new(),
            groups: Vec::new(),
        };
        for entry in &self.entries {
            for (&id, title) in &table.titles {
                if entry.pattern.matches(title) && !out.items.contains(&id) {
                    out.items.push(id);
                    out.titles.push(title.clone());
                    out.groups.push(entry.group.clone());
                }
            }
        }
        if out.items.len() < 2 {
            return Err(Error::config(format!(
                "subset resolves to {} item(s); need at least 2",
                out.items.len()
            )));
        }
        Ok(out)
    }
}

/// Mean rating similarity over co-rating users for every pair in `subset`.
///
/// Pairs nobody rated together get similarity 0 and a co-count of 0.
pub fn build_rating_similarity(
    table: &RatingsTable,
    subset: &ResolvedSubset,
) -> Result<SimilarityMatrix> {
    let n = subset.items.len();
    if n < 2 {
        return Err(Error::config("subset must contain at least 2 items"));
    }
    let local: HashMap<u32, usize> = subset
        .items
        .iter()
        .enumerate()
        .map(|(k, &id)| (id, k))
        .collect();
    let mut by_user: BTreeMap<u32, Vec<(usize, f64)>> = BTreeMap::new();
    for r in &table.ratings {
        if let Some(&k) = local.get(&r.item) {
            by_user.entry(r.user).or_default().push((k, r.rating));
        }
    }
    let mut sum = vec![0.0; n * n];
    let mut count = vec![0u32; n * n];
    for rated in by_user.values_mut() {
        rated.sort_by_key(|&(k, _)| k);
        for (x, &(a, ra)) in rated.iter().enumerate() {
            for &(b, rb) in &rated[x + 1..] {
                sum[a * n + b] += 1.0 - (ra - rb).abs() / RATING_SCALE;
                count[a * n + b] += 1;
            }
        }
    }
    let mut mean = vec![0.0; n * n];
    for a in 0..n {
        for b in a + 1..n {
            let c = count[a * n + b];
            let s = if c == 0 {
                0.0
            } else {
                sum[a * n + b] / f64::from(c)
            };
            mean[a * n + b] = s;
            mean[b * n + a] = s;
            count[b * n + a] = c;
        }
    }
    SimilarityMatrix::from_parts(n, mean, count)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = "196\t242\t3\t881250949\n186\t302\t3\t891717742\n22\t377\t1\t878887116\n";

    #[test]
    fn golden_fixture() {
        let r = read_ratings(FIXTURE.as_bytes()).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(
            r[2],
            Rating {
                user: 22,
                item: 377,
                rating: 1.0,
                timestamp: 878887116
            }
        );
        assert!(read_ratings("".as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn parse_errors_name_line_and_field() {
        let err = read_ratings("1\t2\t3\t4\n1\tx\t3\t4\n".as_bytes()).unwrap_err();
        assert!(
            matches!(err, Error::Parse { line: 2, ref field, .. } if field == "item"),
            "{err}"
        );
        let err = read_ratings("1\t2\t6\t4\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, ref field, .. } if field == "rating"));
        let err = read_ratings("1\t2\t3\t4\n1\t2\t4\t5\n".as_bytes()).unwrap_err();
        assert!(matches!(
            err,
            Error::DuplicateRating {
                line: 2,
                first_line: 1,
                ..
            }
        ));
        let err = read_ratings("1\t2\t3\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { ref field, .. } if field == "timestamp"));
    }

    #[test]
    fn latin1_titles() {
        let bytes: &[u8] = b"1|Toy Story (1995)|01-Jan-1995||http://x|0|0\n2|Caf\xe9 (1990)|x\n";
        let t = read_titles(bytes).unwrap();
        assert_eq!(t[&1], "Toy Story (1995)");
        assert_eq!(t[&2], "Caf\u{e9} (1990)");
    }

    fn table(lines: &str) -> RatingsTable {
        RatingsTable {
            ratings: read_ratings(lines.as_bytes()).unwrap(),
            titles: [
                (1, "Alpha (1990)"),
                (2, "Beta (1991)"),
                (3, "Alpha II (1992)"),
            ]
            .into_iter()
            .map(|(k, v)| (k, v.to_string()))
            .collect(),
        }
    }

    #[test]
    fn subset_resolution() {
        let t = table("");
        let spec = SubsetSpec::parse("# test\n[a]\nalpha\n[b]\n=beta (1991)\n");
        let r = spec.resolve(&t).unwrap();
        assert_eq!(r.items, vec![1, 3, 2]);
        assert_eq!(r.groups[2].as_deref(), Some("b"));
        assert!(SubsetSpec::parse("=Alpha").resolve(&t).is_err());
    }

    #[test]
    fn co_rater_similarity() {
        let t = table("1\t1\t4\t0\n1\t2\t4\t0\n2\t1\t5\t0\n2\t3\t0\t0\n");
        let spec = SubsetSpec::parse("=Alpha (1990)\n=Beta (1991)\n=Alpha II (1992)\n");
        let s = build_rating_similarity(&t, &spec.resolve(&t).unwrap()).unwrap();
        assert_eq!(s.get(0, 1), 1.0);
        assert_eq!(s.voters_counted(0, 1), 1);
        assert_eq!(s.get(0, 2), 0.0);
        assert_eq!(s.voters_counted(0, 2), 1);
        assert_eq!(s.get(1, 2), 0.0);
        assert_eq!(s.voters_counted(2, 1), 0);
        let g = crate::similarity::threshold_graph(&s, -1.0);
        assert!(!g.has_edge(1, 2));
        assert!(g.has_edge(0, 2));
    }
}
