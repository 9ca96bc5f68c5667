//! Source format adapters and the canonical JSON Lines codec.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use log::{debug, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Corpus, CorpusError, CorpusFormat, IngestReport, PaperRecord, Provenance, VenueRank};

const BATCH: usize = 16 * 1024;
const MAX_LOGGED_MALFORMED: usize = 5;

#[derive(Deserialize)]
struct CanonicalIn {
    id: String,
    #[serde(default)]
    title: String,
    #[serde(default, rename = "abstract")]
    abstract_text: String,
    #[serde(default)]
    year: Option<i32>,
    #[serde(default)]
    venue: String,
    #[serde(default)]
    rank: Option<String>,
    #[serde(default)]
    references: Vec<String>,
    #[serde(default)]
    topics: Option<Vec<String>>,
}

#[derive(Serialize)]
struct CanonicalOut<'a> {
    id: &'a str,
    title: &'a str,
    #[serde(rename = "abstract")]
    abstract_text: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    year: Option<i32>,
    venue: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank: Option<&'static str>,
    references: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    topics: Option<&'a [String]>,
}

/// Serializes one record as a canonical JSON line (no trailing newline).
pub fn to_canonical_line(record: &PaperRecord) -> String {
    let out = CanonicalOut {
        id: &record.id,
        title: &record.title,
        abstract_text: &record.abstract_text,
        year: record.year,
        venue: &record.venue,
        rank: record.rank.map(VenueRank::as_str),
        references: &record.references,
        topics: record.topics.as_deref(),
    };
    serde_json::to_string(&out).expect("canonical record serializes")
}

pub fn write_canonical<W: Write>(corpus: &Corpus, mut out: W) -> std::io::Result<()> {
    for r in corpus.records() {
        out.write_all(to_canonical_line(r).as_bytes())?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

fn parse_canonical(text: &str) -> Option<PaperRecord> {
    let c: CanonicalIn = serde_json::from_str(text).ok()?;
    Some(PaperRecord {
        id: c.id,
        title: c.title,
        abstract_text: c.abstract_text,
        year: c.year,
        venue: c.venue,
        rank: c.rank.as_deref().map(VenueRank::parse_lenient),
        references: c.references,
        topics: c.topics,
    })
}

fn id_value(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.trim().to_string()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn text_field(obj: &serde_json::Map<String, Value>, keys: &[&str]) -> String {
    keys.iter()
        .find_map(|k| obj.get(*k).and_then(Value::as_str))
        .unwrap_or_default()
        .to_string()
}

fn year_field(obj: &serde_json::Map<String, Value>, keys: &[&str]) -> Result<Option<i32>, ()> {
    for k in keys {
        match obj.get(*k) {
            None | Some(Value::Null) => continue,
            Some(Value::Number(n)) => {
                return n.as_i64().and_then(|y| i32::try_from(y).ok()).map(Some).ok_or(())
            }
            Some(Value::String(s)) => {
                let digits: String = s.trim().chars().take(4).collect();
                return digits.parse().map(Some).map_err(|_| ());
            }
            Some(_) => return Err(()),
        }
    }
    Ok(None)
}

fn id_list(obj: &serde_json::Map<String, Value>, keys: &[&str]) -> Result<Vec<String>, ()> {
    for k in keys {
        match obj.get(*k) {
            None | Some(Value::Null) => continue,
            Some(Value::Array(items)) => {
                return items.iter().map(|v| id_value(v).ok_or(())).collect();
            }
            Some(_) => return Err(()),
        }
    }
    Ok(Vec::new())
}

fn topic_list(obj: &serde_json::Map<String, Value>, keys: &[&str]) -> Option<Vec<String>> {
    keys.iter().find_map(|k| match obj.get(*k) {
        Some(Value::Array(items)) => Some(
            items
                .iter()
                .filter_map(|v| match v {
                    Value::String(s) => Some(s.clone()),
                    Value::Object(o) => o
                        .get("name")
                        .or_else(|| o.get("descriptor"))
                        .and_then(Value::as_str)
                        .map(str::to_string),
                    _ => None,
                })
                .collect(),
        ),
        _ => None,
    })
}

/// Removes MongoDB shell wrappers such as `NumberInt(2013)` found in the
/// DBLP V13 dump, leaving the bare literal. Text inside strings is untouched.
fn strip_shell_wrappers(text: &str) -> std::borrow::Cow<'_, str> {
    const WRAPPERS: [&str; 3] = ["NumberInt(", "NumberLong(", "NumberDecimal("];
    if !WRAPPERS.iter().any(|w| text.contains(w)) {
        return std::borrow::Cow::Borrowed(text);
    }
    let bytes = text.as_bytes();
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    let mut in_string = false;
    let mut open_wrappers = 0usize;
    while i < bytes.len() {
        let c = bytes[i];
        if in_string {
            if c == b'\\' && i + 1 < bytes.len() {
                out.push_str(&text[i..i + 2]);
                i += 2;
                continue;
            }
            if c == b'"' {
                in_string = false;
            }
        } else if c == b'"' {
            in_string = true;
        } else if let Some(w) = WRAPPERS.iter().find(|w| text[i..].starts_with(**w)) {
            i += w.len();
            open_wrappers += 1;
            continue;
        } else if c == b')' && open_wrappers > 0 {
            open_wrappers -= 1;
            i += 1;
            continue;
        }
        let ch_len = text[i..].chars().next().map_or(1, char::len_utf8);
        out.push_str(&text[i..i + ch_len]);
        i += ch_len;
    }
    std::borrow::Cow::Owned(out)
}

fn parse_dblp(text: &str) -> Option<PaperRecord> {
    let cleaned = strip_shell_wrappers(text);
    let value: Value = serde_json::from_str(&cleaned).ok()?;
    let obj = value.as_object()?;
    let id = obj.get("_id").or_else(|| obj.get("id")).and_then(id_value)?;
    let venue = match obj.get("venue") {
        Some(Value::Object(v)) => ["raw", "name", "raw_zh"]
            .iter()
            .find_map(|k| v.get(*k).and_then(Value::as_str))
            .unwrap_or_default()
            .to_string(),
        Some(Value::String(s)) => s.clone(),
        _ => String::new(),
    };
    Some(PaperRecord {
        id,
        title: text_field(obj, &["title"]),
        abstract_text: text_field(obj, &["abstract"]),
        year: year_field(obj, &["year"]).ok()?,
        venue,
        rank: obj
            .get("rank")
            .and_then(Value::as_str)
            .map(VenueRank::parse_lenient),
        references: id_list(obj, &["references"]).ok()?,
        topics: topic_list(obj, &["topics"]),
    })
}

fn parse_pubmed(text: &str) -> Option<PaperRecord> {
    let value: Value = serde_json::from_str(text).ok()?;
    let obj = value.as_object()?;
    let id = obj.get("pmid").or_else(|| obj.get("id")).and_then(id_value)?;
    Some(PaperRecord {
        id,
        title: text_field(obj, &["title", "article_title"]),
        abstract_text: text_field(obj, &["abstract", "abstract_text"]),
        year: year_field(obj, &["year", "pub_year", "pubdate"]).ok()?,
        venue: text_field(obj, &["journal", "venue"]),
        rank: obj
            .get("rank")
            .and_then(Value::as_str)
            .map(VenueRank::parse_lenient),
        references: id_list(obj, &["references", "cited_pmids", "reference_pmids"]).ok()?,
        topics: topic_list(obj, &["topics", "mesh_terms", "mesh"]),
    })
}

/// Source entry and the byte offset where it starts.
struct Entry {
    offset: u64,
    bytes: Vec<u8>,
}

trait EntrySource {
    fn next_entry(&mut self) -> std::io::Result<Option<Entry>>;
}

/// One entry per non-blank line.
struct LineEntries<R> {
    reader: R,
    offset: u64,
}

impl<R: BufRead> EntrySource for LineEntries<R> {
    fn next_entry(&mut self) -> std::io::Result<Option<Entry>> {
        loop {
            let mut buf = Vec::new();
            let n = self.reader.read_until(b'\n', &mut buf)?;
            if n == 0 {
                return Ok(None);
            }
            let offset = self.offset;
            self.offset += n as u64;
            if buf.iter().all(u8::is_ascii_whitespace) {
                continue;
            }
            return Ok(Some(Entry { offset, bytes: buf }));
        }
    }
}

/// One entry per top-level `{...}` object, wherever it sits in the stream
/// (inside a JSON array, concatenated, or one per line).
struct ObjectEntries<R> {
    reader: R,
    offset: u64,
}

impl<R: BufRead> EntrySource for ObjectEntries<R> {
    fn next_entry(&mut self) -> std::io::Result<Option<Entry>> {
        let mut depth = 0usize;
        let mut in_string = false;
        let mut escaped = false;
        let mut start = 0u64;
        let mut bytes = Vec::new();
        loop {
            let chunk = self.reader.fill_buf()?;
            if chunk.is_empty() {
                // An unterminated trailing object is surfaced as an entry so
                // that it is counted as malformed.
                return Ok((depth > 0).then_some(Entry { offset: start, bytes }));
            }
            let mut consumed = 0;
            let mut done = false;
            for &c in chunk {
                consumed += 1;
                if depth == 0 {
                    if c == b'{' {
                        depth = 1;
                        start = self.offset + consumed as u64 - 1;
                        bytes.push(c);
                    }
                    continue;
                }
                bytes.push(c);
                if in_string {
                    if escaped {
                        escaped = false;
                    } else if c == b'\\' {
                        escaped = true;
                    } else if c == b'"' {
                        in_string = false;
                    }
                    continue;
                }
                match c {
                    b'"' => in_string = true,
                    b'{' => depth += 1,
                    b'}' => {
                        depth -= 1;
                        if depth == 0 {
                            done = true;
                            break;
                        }
                    }
                    _ => {}
                }
            }
            self.reader.consume(consumed);
            self.offset += consumed as u64;
            if done {
                return Ok(Some(Entry { offset: start, bytes }));
            }
        }
    }
}

fn parse_entry(format: CorpusFormat, entry: &Entry) -> Option<PaperRecord> {
    let text = std::str::from_utf8(&entry.bytes).ok()?;
    let text = text.trim();
    match format {
        CorpusFormat::Canonical => parse_canonical(text),
        CorpusFormat::DblpV13 => parse_dblp(text),
        CorpusFormat::Pubmed => parse_pubmed(text),
    }
}

fn read_entries(
    mut source: impl EntrySource,
    format: CorpusFormat,
    report: &mut IngestReport,
) -> std::io::Result<Vec<(PaperRecord, u64)>> {
    let mut located = Vec::new();
    loop {
        let mut batch = Vec::with_capacity(BATCH);
        while batch.len() < BATCH {
            match source.next_entry()? {
                Some(e) => batch.push(e),
                None => break,
            }
        }
        if batch.is_empty() {
            break;
        }
        report.entries_seen += batch.len();
        let parsed: Vec<Option<PaperRecord>> =
            batch.par_iter().map(|e| parse_entry(format, e)).collect();
        for (entry, rec) in batch.iter().zip(parsed) {
            match rec {
                Some(r) => located.push((r, entry.offset)),
                None => {
                    report.malformed += 1;
                    if report.malformed <= MAX_LOGGED_MALFORMED {
                        warn!("skipping malformed entry at offset {}", entry.offset);
                    }
                }
            }
        }
    }
    Ok(located)
}

/// Parses a corpus from any buffered reader. `label` names the source in errors.
pub fn parse_reader<R: BufRead>(
    reader: R,
    format: CorpusFormat,
    label: &str,
) -> Result<Corpus, CorpusError> {
    let mut report = IngestReport::default();
    let io_err = |source| CorpusError::Io {
        path: label.into(),
        source,
    };
    let located = match format {
        CorpusFormat::DblpV13 => {
            read_entries(ObjectEntries { reader, offset: 0 }, format, &mut report)
        }
        CorpusFormat::Canonical | CorpusFormat::Pubmed => {
            read_entries(LineEntries { reader, offset: 0 }, format, &mut report)
        }
    }
    .map_err(io_err)?;
    if located.is_empty() {
        return Err(CorpusError::NoRecords(label.to_string()));
    }
    let provenance = Provenance {
        source: None,
        format: Some(format),
        cleaning: None,
        ingest: report,
    };
    let corpus = Corpus::from_located(located, provenance)?;
    let ingest = &corpus.provenance().ingest;
    debug!(
        "parsed {} records from {label} ({} malformed, {} self-references, {} duplicate references dropped)",
        corpus.len(),
        ingest.malformed,
        ingest.self_references_dropped,
        ingest.duplicate_references_dropped
    );
    Ok(corpus)
}

/// Reads and normalizes a corpus file. Malformed entries are counted and
/// skipped; the result does not depend on thread scheduling.
pub fn parse_corpus(path: impl AsRef<Path>, format: CorpusFormat) -> Result<Corpus, CorpusError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let reader = BufReader::with_capacity(1 << 20, file);
    let mut corpus = parse_reader(reader, format, &path.display().to_string())?;
    corpus.set_source(path);
    Ok(corpus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse_str(text: &str, format: CorpusFormat) -> Result<Corpus, CorpusError> {
        parse_reader(text.as_bytes(), format, "<memory>")
    }

    #[test]
    fn canonical_three_records() {
        let text = r#"{"id":"a","title":"A","abstract":"x","year":2000,"venue":"V","references":["b"]}
{"id":"b","title":"B","abstract":"","year":1999,"venue":"V","references":[]}

{"id":"c","title":"C","abstract":"y","year":2001,"venue":"W","rank":"Q2","references":["a","b"],"topics":["t1","t2"],"extra":1}
"#;
        let c = parse_str(text, CorpusFormat::Canonical).unwrap();
        assert_eq!(c.len(), 3);
        let rec = c.get("c").unwrap();
        assert_eq!(rec.rank, Some(VenueRank::Q2));
        assert_eq!(rec.n_topics(), 2);
        assert_eq!(c.provenance().ingest.malformed, 0);
    }

    #[test]
    fn self_reference_dropped_and_counted() {
        let text = r#"{"id":"a","references":["a","b"]}
{"id":"b"}"#;
        let c = parse_str(text, CorpusFormat::Canonical).unwrap();
        assert_eq!(c.get("a").unwrap().references, vec!["b"]);
        assert_eq!(c.provenance().ingest.self_references_dropped, 1);
    }

    #[test]
    fn malformed_lines_are_skipped() {
        let text = "{\"id\":\"a\"}\nnot json\n{\"title\":\"no id\"}\n{\"id\":\"b\",\"year\":\"x\"}\n";
        let c = parse_str(text, CorpusFormat::Canonical).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.provenance().ingest.malformed, 3);
        assert_eq!(c.provenance().ingest.entries_seen, 4);
    }

    #[test]
    fn zero_records_is_an_error() {
        assert!(matches!(
            parse_str("garbage\n", CorpusFormat::Canonical),
            Err(CorpusError::NoRecords(_))
        ));
    }

    #[test]
    fn duplicate_id_reports_byte_offsets() {
        let text = "{\"id\":\"a\"}\n{\"id\":\"b\"}\n{\"id\":\"a\"}\n";
        match parse_str(text, CorpusFormat::Canonical) {
            Err(CorpusError::DuplicateId { id, first, second }) => {
                assert_eq!(id, "a");
                assert_eq!((first, second), (0, 22));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(
            parse_corpus("/nonexistent/corpus.jsonl", CorpusFormat::Canonical),
            Err(CorpusError::Io { .. })
        ));
    }

    #[test]
    fn dblp_array_with_shell_wrappers() {
        let text = r#"[
{
  "_id": "53e99784b7602d9701f3e151",
  "title": "A {braced} \"title\"",
  "authors": [{"_id": "x", "name": "N"}],
  "venue": {"_id": "v1", "raw": "ICDCS"},
  "year": NumberInt(2006),
  "n_citation": NumberInt(3),
  "abstract": "NumberInt(9) stays in text",
  "references": ["53e99784b7602d9701f3e152", "53e99784b7602d9701f3e151"]
},
{
  "_id": "53e99784b7602d9701f3e152",
  "title": "B",
  "venue": {"raw": "CHI"},
  "year": 2012
},
{ "_id": "broken", "year": }
]"#;
        let c = parse_str(text, CorpusFormat::DblpV13).unwrap();
        assert_eq!(c.len(), 2);
        let a = c.get("53e99784b7602d9701f3e151").unwrap();
        assert_eq!(a.year, Some(2006));
        assert_eq!(a.venue, "ICDCS");
        assert_eq!(a.title, "A {braced} \"title\"");
        assert_eq!(a.abstract_text, "NumberInt(9) stays in text");
        assert_eq!(a.references, vec!["53e99784b7602d9701f3e152"]);
        assert_eq!(c.provenance().ingest.malformed, 1);
        assert_eq!(c.provenance().ingest.self_references_dropped, 1);
    }

    #[test]
    fn pubmed_lines_with_numeric_ids_and_mesh() {
        let text = r#"{"pmid": 101, "title": "T", "abstract": "A", "pub_year": "2020 Mar", "journal": "eLife", "cited_pmids": [102, "103"], "mesh_terms": ["Humans", "Mice", "Humans"]}
{"pmid": "102", "title": "U", "year": 2019, "journal": "mBio", "rank": "Q1"}"#;
        let c = parse_str(text, CorpusFormat::Pubmed).unwrap();
        let a = c.get("101").unwrap();
        assert_eq!(a.year, Some(2020));
        assert_eq!(a.venue, "eLife");
        assert_eq!(a.references, vec!["102", "103"]);
        assert_eq!(a.n_topics(), 2);
        assert_eq!(c.get("102").unwrap().rank, Some(VenueRank::Q1));
    }

    #[test]
    fn canonical_line_layout() {
        let r = PaperRecord {
            id: "p1".into(),
            title: "T".into(),
            abstract_text: "".into(),
            year: Some(2000),
            venue: "V".into(),
            rank: Some(VenueRank::A),
            references: vec!["p0".into()],
            topics: None,
        };
        assert_eq!(
            to_canonical_line(&r),
            r#"{"id":"p1","title":"T","abstract":"","year":2000,"venue":"V","rank":"A","references":["p0"]}"#
        );
    }

    fn arb_record() -> impl Strategy<Value = PaperRecord> {
        (
            "[a-z0-9]{1,6}",
            ".{0,12}",
            ".{0,12}",
            proptest::option::of(1900i32..2030),
            "[A-Za-z ]{0,8}",
            proptest::option::of(proptest::sample::select(VenueRank::ALL.to_vec())),
            proptest::collection::vec("[a-z0-9]{1,6}", 0..5),
            proptest::option::of(proptest::collection::vec("[a-z]{1,5}", 0..4)),
        )
            .prop_map(|(id, title, abs, year, venue, rank, refs, topics)| PaperRecord {
                id,
                title,
                abstract_text: abs,
                year,
                venue,
                rank,
                references: refs,
                topics,
            })
    }

    proptest! {
        #[test]
        fn canonical_round_trip_is_bit_exact(records in proptest::collection::vec(arb_record(), 1..12)) {
            let mut seen = std::collections::HashSet::new();
            let records: Vec<_> = records.into_iter().filter(|r| seen.insert(r.id.clone())).collect();
            let corpus = Corpus::from_records(records).unwrap();
            let mut first = Vec::new();
            write_canonical(&corpus, &mut first).unwrap();
            let reparsed = parse_reader(&first[..], CorpusFormat::Canonical, "<memory>").unwrap();
            let mut second = Vec::new();
            write_canonical(&reparsed, &mut second).unwrap();
            prop_assert_eq!(&first, &second);
            prop_assert_eq!(reparsed.records(), corpus.records());
        }
    }
}
