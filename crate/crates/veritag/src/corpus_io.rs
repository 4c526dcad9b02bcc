//! Corpus directories on disk.
//!
//! ```text
//! DIR/manifest.jsonl     {"id", "url", "site", "label", "year", "html_path"} per line
//! DIR/site_labels.json   {"site": "reliable" | "unreliable", ...}
//! DIR/<html_path>        page bytes, verbatim
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use veritag_core::corpus::{validate_site, validate_year, PageRecord, RawDocument};
use veritag_core::Label;

use crate::error::{AppError, AppResult, IoContext};

pub const MANIFEST: &str = "manifest.jsonl";
pub const SITE_LABELS: &str = "site_labels.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub id: String,
    pub url: String,
    pub site: String,
    pub label: Label,
    pub year: i32,
    pub html_path: String,
}

/// An unlabeled page record, input to label projection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PageEntry {
    pub id: String,
    pub url: String,
    pub site: String,
    pub year: i32,
    pub html_path: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusManifest {
    pub dir: PathBuf,
    pub entries: Vec<ManifestEntry>,
    pub site_labels: BTreeMap<String, Label>,
}

pub fn load_site_labels(path: &Path) -> AppResult<BTreeMap<String, Label>> {
    let text = fs::read_to_string(path).at(path)?;
    let labels: BTreeMap<String, Label> =
        serde_json::from_str(&text).map_err(|e| AppError::data(format!("{}: {e}", path.display())))?;
    for site in labels.keys() {
        validate_site(site).map_err(|e| AppError::from(e).context(path.display()))?;
    }
    Ok(labels)
}

fn read_jsonl<T: for<'de> Deserialize<'de>>(path: &Path) -> AppResult<Vec<(usize, T)>> {
    let file = fs::File::open(path).at(path)?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.at(path)?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line)
            .map_err(|e| AppError::data(format!("{} line {}: malformed record: {e}", path.display(), i + 1)))?;
        out.push((i + 1, rec));
    }
    Ok(out)
}

/// Load and validate `DIR/manifest.jsonl` against `DIR/site_labels.json`.
pub fn load_manifest(dir: &Path, year_range: (i32, i32)) -> AppResult<CorpusManifest> {
    if !dir.is_dir() {
        return Err(AppError::data(format!("{}: corpus directory not found", dir.display())));
    }
    let site_labels = load_site_labels(&dir.join(SITE_LABELS))?;
    let path = dir.join(MANIFEST);
    let mut ids = BTreeSet::new();
    let mut entries = Vec::new();
    for (line, e) in read_jsonl::<ManifestEntry>(&path)? {
        let at = |msg: String| AppError::data(format!("{} line {line}: {msg}", path.display()));
        if !ids.insert(e.id.clone()) {
            return Err(at(format!("duplicate id {:?}", e.id)));
        }
        validate_site(&e.site).map_err(|err| at(err.to_string()))?;
        validate_year(e.year, year_range).map_err(|err| at(err.to_string()))?;
        match site_labels.get(&e.site) {
            None => return Err(at(format!("site {:?} is missing from {SITE_LABELS}", e.site))),
            Some(l) if *l != e.label => {
                return Err(at(format!(
                    "label mismatch for {:?}: entry says {}, site {:?} is {}",
                    e.id, e.label, e.site, l
                )))
            }
            _ => {}
        }
        entries.push(e);
    }
    Ok(CorpusManifest { dir: dir.to_path_buf(), entries, site_labels })
}

impl CorpusManifest {
    pub fn html_path(&self, e: &ManifestEntry) -> PathBuf {
        self.dir.join(&e.html_path)
    }

    /// Read every page; documents keep manifest order.
    pub fn load_documents(&self) -> AppResult<Vec<RawDocument>> {
        self.entries
            .iter()
            .map(|e| {
                let path = self.html_path(e);
                let html = fs::read(&path).at(&path)?;
                Ok(RawDocument {
                    id: e.id.clone(),
                    url: e.url.clone(),
                    site: e.site.clone(),
                    label: e.label,
                    year: e.year,
                    html,
                })
            })
            .collect()
    }

    pub fn entry(&self, id: &str) -> Option<&ManifestEntry> {
        self.entries.iter().find(|e| e.id == id)
    }
}

/// Unlabeled pages (`PageEntry` per line) with their HTML loaded from
/// paths relative to `base`.
pub fn load_pages(path: &Path, base: &Path) -> AppResult<Vec<(PageRecord, String)>> {
    read_jsonl::<PageEntry>(path)?
        .into_iter()
        .map(|(_, p)| {
            let html_file = base.join(&p.html_path);
            let html = fs::read(&html_file).at(&html_file)?;
            Ok((PageRecord { id: p.id, url: p.url, site: p.site, year: p.year, html }, p.html_path))
        })
        .collect()
}

fn write_json_lines<T: Serialize>(path: &Path, items: impl IntoIterator<Item = T>) -> AppResult<()> {
    let file = fs::File::create(path).at(path)?;
    let mut w = BufWriter::new(file);
    for item in items {
        serde_json::to_writer(&mut w, &item)?;
        w.write_all(b"\n").at(path)?;
    }
    w.flush().at(path)
}

pub fn write_manifest(dir: &Path, entries: &[ManifestEntry]) -> AppResult<()> {
    write_json_lines(&dir.join(MANIFEST), entries)
}

pub fn write_site_labels(dir: &Path, labels: &BTreeMap<String, Label>) -> AppResult<()> {
    let path = dir.join(SITE_LABELS);
    let text = serde_json::to_string_pretty(labels)? + "\n";
    fs::write(&path, text).at(&path)
}

/// Write a corpus holding `keep` (ids from `source`), copying each page's
/// HTML under the same relative path.
pub fn write_subset(source: &CorpusManifest, keep: &[&ManifestEntry], out: &Path) -> AppResult<()> {
    fs::create_dir_all(out).at(out)?;
    for e in keep {
        let from = source.html_path(e);
        let to = out.join(&e.html_path);
        if let Some(parent) = to.parent() {
            fs::create_dir_all(parent).at(parent)?;
        }
        fs::copy(&from, &to).at(&from)?;
    }
    let entries: Vec<ManifestEntry> = keep.iter().map(|e| (*e).clone()).collect();
    write_manifest(out, &entries)?;
    write_site_labels(out, &source.site_labels)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopicRecord {
    pub text: String,
    pub topic: String,
}

/// Topic-training corpus: JSONL of `{"text", "topic"}`.
pub fn load_topic_corpus(path: &Path) -> AppResult<Vec<TopicRecord>> {
    Ok(read_jsonl(path)?.into_iter().map(|(_, r)| r).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(lines: &[&str], labels: &str) -> tempfile::TempDir {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join(MANIFEST), lines.join("\n")).unwrap();
        fs::write(dir.path().join(SITE_LABELS), labels).unwrap();
        dir
    }

    fn line(id: &str, site: &str, label: &str) -> String {
        format!(r#"{{"id":"{id}","url":"https://{site}/{id}","site":"{site}","label":"{label}","year":2016,"html_path":"{id}.html"}}"#)
    }

    #[test]
    fn loads_in_file_order() {
        let ls = [line("c", "a.com", "reliable"), line("a", "a.com", "reliable"), line("b", "b.com", "unreliable")];
        let refs: Vec<&str> = ls.iter().map(String::as_str).collect();
        let dir = corpus(&refs, r#"{"a.com":"reliable","b.com":"unreliable"}"#);
        let m = load_manifest(dir.path(), (1990, 2100)).unwrap();
        let ids: Vec<&str> = m.entries.iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, ["c", "a", "b"]);
    }

    #[test]
    fn duplicate_id_is_named() {
        let ls = [line("a1", "a.com", "reliable"), line("a1", "a.com", "reliable")];
        let refs: Vec<&str> = ls.iter().map(String::as_str).collect();
        let dir = corpus(&refs, r#"{"a.com":"reliable"}"#);
        let err = load_manifest(dir.path(), (1990, 2100)).unwrap_err();
        assert!(err.message.contains("\"a1\""), "{err}");
        assert!(err.message.contains("line 2"), "{err}");
    }

    #[test]
    fn label_mismatch_and_malformed_lines() {
        let ls = [line("a", "a.com", "reliable")];
        let refs: Vec<&str> = ls.iter().map(String::as_str).collect();
        let dir = corpus(&refs, r#"{"a.com":"unreliable"}"#);
        assert!(load_manifest(dir.path(), (1990, 2100)).unwrap_err().message.contains("label mismatch"));
        let dir = corpus(&[r#"{"id": 3}"#], r#"{}"#);
        assert!(load_manifest(dir.path(), (1990, 2100)).unwrap_err().message.contains("line 1"));
    }
}
