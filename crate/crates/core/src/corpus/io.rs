//! Corpus file formats.
//!
//! TSV: `label<TAB>text`, labels in {spam, ham, unlabeled}, UTF-8, LF line
//! endings, no header. Ids are assigned at load time as `<source>:<line>`
//! with the file stem as source.
//!
//! CSV: header `id,label,text,source`, RFC-4180 quoting; ids and sources are
//! preserved, so save/load is a full record-for-record round trip.

use super::{Corpus, CorpusError, Label, SmsRecord};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Tsv,
    Csv,
}

impl CorpusFormat {
    /// Guess from the file extension, defaulting to TSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => CorpusFormat::Csv,
            _ => CorpusFormat::Tsv,
        }
    }

    pub fn parse(token: &str) -> Option<Self> {
        match token {
            "tsv" => Some(CorpusFormat::Tsv),
            "csv" => Some(CorpusFormat::Csv),
            _ => None,
        }
    }
}

pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<Corpus, CorpusError> {
    match format {
        CorpusFormat::Tsv => load_tsv(path),
        CorpusFormat::Csv => load_csv(path),
    }
}

pub fn save_corpus(corpus: &Corpus, path: &Path, format: CorpusFormat) -> Result<(), CorpusError> {
    match format {
        CorpusFormat::Tsv => save_tsv(corpus, path),
        CorpusFormat::Csv => save_csv(corpus, path),
    }
}

fn source_tag(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "corpus".to_string())
}

fn parse_label(token: &str, path: &Path, line: usize) -> Result<Label, CorpusError> {
    Label::parse(token).ok_or_else(|| CorpusError::Parse {
        path: path.display().to_string(),
        line,
        reason: format!("unknown label {token:?}"),
    })
}

fn load_tsv(path: &Path) -> Result<Corpus, CorpusError> {
    let file = std::fs::File::open(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let source = source_tag(path);
    let mut corpus = Corpus::new(path.display().to_string());
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|source| CorpusError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.is_empty() {
            continue;
        }
        let (label, text) = line.split_once('\t').ok_or_else(|| CorpusError::Parse {
            path: path.display().to_string(),
            line: line_no,
            reason: "expected `label<TAB>text`".into(),
        })?;
        let label = parse_label(label, path, line_no)?;
        if text.is_empty() {
            return Err(CorpusError::Parse {
                path: path.display().to_string(),
                line: line_no,
                reason: "empty message text".into(),
            });
        }
        corpus.push(SmsRecord::new(
            format!("{source}:{line_no}"),
            text,
            label,
            source.clone(),
        ))?;
    }
    Ok(corpus)
}

fn save_tsv(corpus: &Corpus, path: &Path) -> Result<(), CorpusError> {
    let mut out = std::fs::File::create(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    for (i, record) in corpus.records().iter().enumerate() {
        if record.text.contains('\t') || record.text.contains('\n') {
            return Err(CorpusError::Parse {
                path: path.display().to_string(),
                line: i + 1,
                reason: format!(
                    "record {} contains a tab or newline; use the CSV format",
                    record.id
                ),
            });
        }
        writeln!(out, "{}\t{}", record.label.as_str(), record.text).map_err(|source| {
            CorpusError::Io {
                path: path.display().to_string(),
                source,
            }
        })?;
    }
    Ok(())
}

fn load_csv(path: &Path) -> Result<Corpus, CorpusError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    {
        let headers = reader.headers().map_err(|e| csv_error(path, e))?;
        let expected = ["id", "label", "text", "source"];
        let got: Vec<&str> = headers.iter().collect();
        if got != expected {
            return Err(CorpusError::Parse {
                path: path.display().to_string(),
                line: 1,
                reason: format!("expected header `id,label,text,source`, found {got:?}"),
            });
        }
    }
    let source = source_tag(path);
    let mut corpus = Corpus::new(path.display().to_string());
    for (i, row) in reader.records().enumerate() {
        let line_no = i + 2; // header is line 1
        let row = row.map_err(|e| csv_error(path, e))?;
        if row.len() != 4 {
            return Err(CorpusError::Parse {
                path: path.display().to_string(),
                line: line_no,
                reason: format!("expected 4 fields, found {}", row.len()),
            });
        }
        let label = parse_label(&row[1], path, line_no)?;
        let id = if row[0].is_empty() {
            format!("{source}:{line_no}")
        } else {
            row[0].to_string()
        };
        let rec_source = if row[3].is_empty() { source.clone() } else { row[3].to_string() };
        if row[2].is_empty() {
            return Err(CorpusError::Parse {
                path: path.display().to_string(),
                line: line_no,
                reason: "empty message text".into(),
            });
        }
        corpus.push(SmsRecord::new(id, &row[2], label, rec_source))?;
    }
    Ok(corpus)
}

fn save_csv(corpus: &Corpus, path: &Path) -> Result<(), CorpusError> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    writer
        .write_record(["id", "label", "text", "source"])
        .map_err(|e| csv_error(path, e))?;
    for record in corpus.records() {
        writer
            .write_record([
                record.id.as_str(),
                record.label.as_str(),
                record.text.as_str(),
                record.source.as_str(),
            ])
            .map_err(|e| csv_error(path, e))?;
    }
    writer.flush().map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn csv_error(path: &Path, e: csv::Error) -> CorpusError {
    let line = match e.position() {
        Some(pos) => pos.line() as usize,
        None => 0,
    };
    match e.into_kind() {
        csv::ErrorKind::Io(source) => CorpusError::Io {
            path: path.display().to_string(),
            source,
        },
        kind => CorpusError::Parse {
            path: path.display().to_string(),
            line,
            reason: format!("{kind:?}"),
        },
    }
}
