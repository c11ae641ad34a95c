//! Corpus-wide queries over sealed levels, materialized as reports.
//!
//! Each report has a machine form (pipe-separated rows under
//! `<store>/reports/<name>.psv`) and an aligned text table. The first line
//! of the machine form carries the generation time; everything after it is
//! a pure function of the store content and the scope.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use thiserror::Error;
use treepoly_core::{monotonic, CanonicalCode, Monotonic, TreeRecord};

use crate::format::join;
use crate::store::{Store, StoreError};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("level {0} is not sealed")]
    Unsealed(usize),
    #[error("empty scope {lo}..={hi}")]
    EmptyScope { lo: usize, hi: usize },
    #[error("unknown report {0:?} (expected flags, histogram, duplicates, special or all)")]
    UnknownReport(String),
    #[error("polynomial {coeffs} is shared by trees of different sizes")]
    MixedSizes { coeffs: String },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
}

type Result<T, E = AnalysisError> = std::result::Result<T, E>;

/// Inclusive range of vertex counts a report covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scope {
    pub lo: usize,
    pub hi: usize,
}

impl Scope {
    pub fn new(lo: usize, hi: usize) -> Result<Self> {
        if lo > hi {
            return Err(AnalysisError::EmptyScope { lo, hi });
        }
        Ok(Scope { lo, hi })
    }

    pub fn levels(self) -> std::ops::RangeInclusive<usize> {
        self.lo..=self.hi
    }
}

impl std::fmt::Display for Scope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}..={}", self.lo, self.hi)
    }
}

/// Visits every record in scope, level by level. Fails before reading
/// anything if a level in scope is not sealed.
fn for_each_record(store: &Store, scope: Scope, mut f: impl FnMut(TreeRecord)) -> Result<()> {
    for n in scope.levels() {
        if !store.is_sealed(n)? {
            return Err(AnalysisError::Unsealed(n));
        }
    }
    for n in scope.levels() {
        store.fetch_level(n)?.into_iter().for_each(&mut f);
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FlagCounts {
    pub records: u64,
    pub non_unimodal: u64,
    pub non_log_concave: u64,
}

/// Counts records whose stored flags mark them non-unimodal or
/// non-log-concave.
pub fn verify_flags(store: &Store, scope: Scope) -> Result<FlagCounts> {
    let mut out = FlagCounts::default();
    for_each_record(store, scope, |rec| {
        out.records += 1;
        out.non_unimodal += u64::from(!rec.unimodal);
        out.non_log_concave += u64::from(!rec.log_concave);
    })?;
    Ok(out)
}

/// Published distribution of the lowest maximizing cardinality over all
/// trees with up to 20 vertices, as `(k, count)`.
pub const PUBLISHED_ARGMAX: [(usize, u64); 12] = [
    (0, 2),
    (1, 0),
    (2, 3),
    (3, 23),
    (4, 239),
    (5, 3234),
    (6, 58442),
    (7, 851104),
    (8, 420209),
    (9, 12700),
    (10, 68),
    (11, 0),
];

pub fn published_argmax(k: usize) -> Option<u64> {
    PUBLISHED_ARGMAX
        .iter()
        .find(|(j, _)| *j == k)
        .map(|&(_, c)| c)
}

/// Number of records per stored argmax.
pub fn argmax_histogram(store: &Store, scope: Scope) -> Result<BTreeMap<usize, u64>> {
    let mut out = BTreeMap::new();
    for_each_record(store, scope, |rec| *out.entry(rec.argmax).or_insert(0) += 1)?;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HistogramRow {
    pub k: usize,
    pub computed: u64,
    pub published: Option<u64>,
}

impl HistogramRow {
    pub fn matches(&self) -> Option<bool> {
        self.published.map(|p| p == self.computed)
    }
}

/// Joins computed counts with the published table over the union of keys.
pub fn compare_with_published(hist: &BTreeMap<usize, u64>) -> Vec<HistogramRow> {
    let max_k = hist
        .keys()
        .copied()
        .chain(PUBLISHED_ARGMAX.iter().map(|&(k, _)| k))
        .max()
        .unwrap_or(0);
    (0..=max_k)
        .map(|k| HistogramRow {
            k,
            computed: hist.get(&k).copied().unwrap_or(0),
            published: published_argmax(k),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DuplicateGroup {
    pub coeffs: Vec<u64>,
    pub n: usize,
    pub members: Vec<(CanonicalCode, Vec<usize>)>,
}

impl DuplicateGroup {
    pub fn count(&self) -> usize {
        self.members.len()
    }

    pub fn shares_degree_sequence(&self) -> bool {
        self.members.windows(2).all(|w| w[0].1 == w[1].1)
    }
}

/// `(n, uid, degrees)` of one record while grouping.
type GroupEntry = (usize, CanonicalCode, Vec<usize>);

/// Groups of two or more trees with identical polynomials, largest first
/// (ties by coefficients). Fails if a group mixes vertex counts.
pub fn duplicate_groups(store: &Store, scope: Scope) -> Result<Vec<DuplicateGroup>> {
    let mut by_poly: HashMap<Vec<u64>, Vec<GroupEntry>> = HashMap::new();
    for_each_record(store, scope, |rec| {
        by_poly
            .entry(rec.poly.into_coeffs())
            .or_default()
            .push((rec.n, rec.uid, rec.degrees));
    })?;
    let mut groups = Vec::new();
    for (coeffs, mut members) in by_poly {
        if members.len() < 2 {
            continue;
        }
        let n = members[0].0;
        if members.iter().any(|m| m.0 != n) {
            return Err(AnalysisError::MixedSizes {
                coeffs: join(&coeffs),
            });
        }
        members.sort_by(|a, b| a.1.cmp(&b.1));
        let members = members
            .into_iter()
            .map(|(_, uid, deg)| (uid, deg))
            .collect();
        groups.push(DuplicateGroup { coeffs, n, members });
    }
    groups.sort_by(|a, b| {
        b.count()
            .cmp(&a.count())
            .then_with(|| a.coeffs.cmp(&b.coeffs))
    });
    Ok(groups)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Member {
    pub uid: CanonicalCode,
    pub n: usize,
    pub coeffs: Vec<u64>,
}

impl Member {
    fn of(rec: &TreeRecord) -> Self {
        Member {
            uid: rec.uid.clone(),
            n: rec.n,
            coeffs: rec.poly.coeffs().to_vec(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpecialSequences {
    /// Records whose coefficients never change direction.
    pub monotonic: Vec<(Member, Monotonic)>,
    pub fibonacci: Vec<Member>,
    pub symmetric: Vec<Member>,
}

pub fn special_sequences(store: &Store, scope: Scope) -> Result<SpecialSequences> {
    let mut out = SpecialSequences::default();
    for_each_record(store, scope, |rec| {
        let class = monotonic(rec.poly.coeffs());
        if class != Monotonic::Neither {
            out.monotonic.push((Member::of(&rec), class));
        }
        if rec.fibonacci {
            out.fibonacci.push(Member::of(&rec));
        }
        if rec.symmetric {
            out.symmetric.push(Member::of(&rec));
        }
    })?;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub name: String,
    pub scope: Scope,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Seconds since the Unix epoch.
    pub generated_at: u64,
}

impl Report {
    fn new(name: &str, scope: Scope, header: Vec<&'static str>) -> Self {
        let generated_at = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Report {
            name: name.to_string(),
            scope,
            header,
            rows: Vec::new(),
            generated_at,
        }
    }

    fn row<I: IntoIterator<Item = S>, S: ToString>(&mut self, cells: I) {
        self.rows
            .push(cells.into_iter().map(|c| c.to_string()).collect());
    }

    /// Everything except the timestamp line.
    pub fn deterministic_body(&self) -> String {
        let mut out = format!("# scope={}\n# {}\n", self.scope, self.header.join("|"));
        for row in &self.rows {
            out.push_str(&row.join("|"));
            out.push('\n');
        }
        out
    }

    pub fn to_psv(&self) -> String {
        format!(
            "# report={} generated_at={}\n{}",
            self.name,
            self.generated_at,
            self.deterministic_body()
        )
    }

    pub fn to_table(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i >= widths.len() {
                    widths.push(0);
                }
                widths[i] = widths[i].max(cell.len());
            }
        }
        let mut out = format!("{} (n in {})\n", self.name, self.scope);
        let line = |cells: &[String]| {
            let mut s = String::new();
            for (i, c) in cells.iter().enumerate() {
                let _ = write!(
                    s,
                    "{}{:<w$}",
                    if i > 0 { "  " } else { "" },
                    c,
                    w = widths[i]
                );
            }
            s.trim_end().to_string() + "\n"
        };
        out.push_str(&line(
            &self
                .header
                .iter()
                .map(|h| h.to_string())
                .collect::<Vec<_>>(),
        ));
        for row in &self.rows {
            out.push_str(&line(row));
        }
        out
    }

    /// Writes `<store>/reports/<name>.psv` and returns its path.
    pub fn write(&self, store: &Store) -> Result<PathBuf> {
        let dir = store.dir().join("reports");
        fs::create_dir_all(&dir).map_err(|source| AnalysisError::Write {
            path: dir.clone(),
            source,
        })?;
        let path = dir.join(format!("{}.psv", self.name));
        fs::write(&path, self.to_psv()).map_err(|source| AnalysisError::Write {
            path: path.clone(),
            source,
        })?;
        Ok(path)
    }
}

pub fn flags_report(store: &Store, scope: Scope) -> Result<Report> {
    let counts = verify_flags(store, scope)?;
    let mut report = Report::new("flags", scope, vec!["metric", "count"]);
    report.row(["records".to_string(), counts.records.to_string()]);
    report.row(["non_unimodal".to_string(), counts.non_unimodal.to_string()]);
    report.row([
        "non_log_concave".to_string(),
        counts.non_log_concave.to_string(),
    ]);
    Ok(report)
}

pub fn histogram_report(store: &Store, scope: Scope) -> Result<Report> {
    let rows = compare_with_published(&argmax_histogram(store, scope)?);
    let mut report = Report::new(
        "histogram",
        scope,
        vec!["k", "count", "published", "status"],
    );
    for row in &rows {
        let published = row.published.map_or("-".to_string(), |p| p.to_string());
        let status = match row.matches() {
            Some(true) => "match",
            Some(false) => "diverges",
            None => "-",
        };
        report.row([
            row.k.to_string(),
            row.computed.to_string(),
            published,
            status.to_string(),
        ]);
    }
    let computed: u64 = rows.iter().map(|r| r.computed).sum();
    let published: u64 = PUBLISHED_ARGMAX.iter().map(|&(_, c)| c).sum();
    report.row([
        "total".to_string(),
        computed.to_string(),
        published.to_string(),
        "-".to_string(),
    ]);
    Ok(report)
}

pub fn duplicates_report(store: &Store, scope: Scope) -> Result<Report> {
    let groups = duplicate_groups(store, scope)?;
    let mut report = Report::new(
        "duplicates",
        scope,
        vec![
            "rank",
            "n",
            "count",
            "same_degrees",
            "coeffs",
            "degree_sequences",
            "uids",
        ],
    );
    for (i, g) in groups.iter().enumerate() {
        let degrees: Vec<String> = g.members.iter().map(|(_, d)| join(d)).collect();
        let uids: Vec<&str> = g.members.iter().map(|(u, _)| u.as_str()).collect();
        report.row([
            (i + 1).to_string(),
            g.n.to_string(),
            g.count().to_string(),
            u8::from(g.shares_degree_sequence()).to_string(),
            join(&g.coeffs),
            degrees.join(";"),
            uids.join(";"),
        ]);
    }
    Ok(report)
}

pub fn special_report(store: &Store, scope: Scope) -> Result<Report> {
    let special = special_sequences(store, scope)?;
    let mut report = Report::new(
        "special",
        scope,
        vec!["category", "kind", "uid", "n", "coeffs"],
    );
    report.row([
        "monotonic",
        "count",
        &special.monotonic.len().to_string(),
        "",
        "",
    ]);
    report.row([
        "fibonacci",
        "count",
        &special.fibonacci.len().to_string(),
        "",
        "",
    ]);
    report.row([
        "symmetric",
        "count",
        &special.symmetric.len().to_string(),
        "",
        "",
    ]);
    for (m, class) in &special.monotonic {
        report.row([
            "monotonic",
            class.as_str(),
            m.uid.as_str(),
            &m.n.to_string(),
            &join(&m.coeffs),
        ]);
    }
    for (category, members) in [
        ("fibonacci", &special.fibonacci),
        ("symmetric", &special.symmetric),
    ] {
        for m in members {
            report.row([
                category,
                "member",
                m.uid.as_str(),
                &m.n.to_string(),
                &join(&m.coeffs),
            ]);
        }
    }
    Ok(report)
}

/// Names accepted by [`build_reports`].
pub const REPORT_NAMES: [&str; 4] = ["flags", "histogram", "duplicates", "special"];

/// Default lower bound of a report's scope: the histogram and the flag
/// audit include the empty tree, the sequence reports start at one vertex.
pub fn default_min_n(name: &str) -> usize {
    match name {
        "duplicates" | "special" => 1,
        _ => 0,
    }
}

/// Builds the named report, or all four for `"all"`. With `scope = None`
/// each report uses its default lower bound up to the highest sealed level.
pub fn build_reports(store: &Store, name: &str, scope: Option<Scope>) -> Result<Vec<Report>> {
    let names: Vec<&str> = match name {
        "all" => REPORT_NAMES.to_vec(),
        other if REPORT_NAMES.contains(&other) => vec![other],
        other => return Err(AnalysisError::UnknownReport(other.to_string())),
    };
    let top = store.max_sealed()?.ok_or(AnalysisError::Unsealed(0))?;
    names
        .into_iter()
        .map(|name| {
            let scope = match scope {
                Some(s) => s,
                None => Scope::new(default_min_n(name).min(top), top)?,
            };
            match name {
                "flags" => flags_report(store, scope),
                "histogram" => histogram_report(store, scope),
                "duplicates" => duplicates_report(store, scope),
                _ => special_report(store, scope),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{run, RunOptions};
    use treepoly_core::{free_code, Polynomial, Tree};

    fn small_store(max_n: usize) -> (tempfile::TempDir, Store) {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path()).unwrap();
        run(&RunOptions::new(max_n, 1), &store).unwrap();
        (dir, store)
    }

    #[test]
    fn small_corpus_is_clean() {
        let (_dir, store) = small_store(5);
        let counts = verify_flags(&store, Scope::new(0, 5).unwrap()).unwrap();
        assert_eq!(
            counts,
            FlagCounts {
                records: 9,
                non_unimodal: 0,
                non_log_concave: 0
            }
        );
    }

    #[test]
    fn counterexample_is_flagged() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path()).unwrap();
        let carrier = Tree::path(33);
        let poly = Polynomial::new(vec![1, 33, 24, 32, 16]).unwrap();
        store
            .insert_if_absent(TreeRecord::from_parts(free_code(&carrier), &carrier, poly))
            .unwrap();
        store.seal_level(33, None).unwrap();
        let counts = verify_flags(&store, Scope::new(33, 33).unwrap()).unwrap();
        assert_eq!((counts.non_unimodal, counts.non_log_concave), (1, 1));
    }

    #[test]
    fn unsealed_scope_is_an_error() {
        let (_dir, store) = small_store(3);
        assert!(matches!(
            argmax_histogram(&store, Scope::new(0, 4).unwrap()),
            Err(AnalysisError::Unsealed(4))
        ));
    }

    #[test]
    fn histogram_of_tiny_trees() {
        let (_dir, store) = small_store(3);
        let hist = argmax_histogram(&store, Scope::new(0, 3).unwrap()).unwrap();
        // P0 and P1 peak at 0; P2 and P3 peak at 1.
        assert_eq!(hist, BTreeMap::from([(0, 2), (1, 2)]));
    }

    #[test]
    fn special_sequences_on_small_trees() {
        let (_dir, store) = small_store(4);
        let special = special_sequences(&store, Scope::new(1, 4).unwrap()).unwrap();
        let mono: Vec<usize> = special.monotonic.iter().map(|(m, _)| m.n).collect();
        assert_eq!(mono, [1, 2]);
        let fib: Vec<usize> = special.fibonacci.iter().map(|m| m.n).collect();
        assert_eq!(fib, [1, 2, 3]);
    }

    #[test]
    fn reports_render() {
        let (_dir, store) = small_store(6);
        let reports = build_reports(&store, "all", None).unwrap();
        assert_eq!(reports.len(), 4);
        for r in &reports {
            let path = r.write(&store).unwrap();
            let text = fs::read_to_string(path).unwrap();
            assert!(text.ends_with(&r.deterministic_body()));
            assert!(r.to_table().starts_with(&r.name));
        }
        assert!(matches!(
            build_reports(&store, "nope", None),
            Err(AnalysisError::UnknownReport(_))
        ));
    }
}
