use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{Feature, FeatureError};
use crate::corpus::Label;
use crate::matrix::Matrix;

const MAGIC: &[u8; 4] = b"IRFM";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixHeader {
    pub features: Vec<Feature>,
    pub dims: Vec<usize>,
    pub offsets: Vec<usize>,
    pub tweet_slots: usize,
    pub vocab_size: usize,
    /// sha256 of the vocabulary terms; empty when no vocabulary was fitted.
    pub vocab_digest: String,
    pub fingerprint: String,
    pub author_ids: Vec<String>,
    pub labels: Vec<Label>,
    pub seed: u64,
    pub config_hash: String,
}

/// Rows are authors, columns the concatenated feature blocks in `features` order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    header: MatrixHeader,
    values: Matrix,
}

pub fn vocab_digest(terms: &[String]) -> String {
    let mut h = Sha256::new();
    for t in terms {
        h.update(t.as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

/// Identity of a column layout: feature names, widths, tweet slots and vocabulary.
pub fn fingerprint(
    features: &[Feature],
    dims: &[usize],
    tweet_slots: usize,
    vocab_digest: &str,
) -> String {
    let mut h = Sha256::new();
    for (f, d) in features.iter().zip(dims) {
        h.update(format!("{}:{d};", f.name()).as_bytes());
    }
    h.update(format!("T={tweet_slots};V={vocab_digest}").as_bytes());
    hex::encode(h.finalize())
}

impl FeatureMatrix {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        features: Vec<Feature>,
        dims: Vec<usize>,
        tweet_slots: usize,
        vocab_size: usize,
        vocab_digest: String,
        author_ids: Vec<String>,
        labels: Vec<Label>,
        values: Matrix,
        seed: u64,
        config_hash: String,
    ) -> Result<FeatureMatrix, FeatureError> {
        let offsets: Vec<usize> = dims
            .iter()
            .scan(0, |acc, &d| {
                let o = *acc;
                *acc += d;
                Some(o)
            })
            .collect();
        let header = MatrixHeader {
            fingerprint: fingerprint(&features, &dims, tweet_slots, &vocab_digest),
            features,
            dims,
            offsets,
            tweet_slots,
            vocab_size,
            vocab_digest,
            author_ids,
            labels,
            seed,
            config_hash,
        };
        let m = FeatureMatrix { header, values };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<(), FeatureError> {
        let h = &self.header;
        let bad = |m: String| Err(FeatureError::BadMatrix(m));
        if h.features.len() != h.dims.len() || h.offsets.len() != h.dims.len() {
            return bad("feature, dim and offset lists differ in length".into());
        }
        let width: usize = h.dims.iter().sum();
        if width != self.values.cols() {
            return bad(format!(
                "header width {width} != {} columns",
                self.values.cols()
            ));
        }
        if h.author_ids.len() != self.values.rows() || h.labels.len() != self.values.rows() {
            return bad("row metadata does not match row count".into());
        }
        if h.fingerprint != fingerprint(&h.features, &h.dims, h.tweet_slots, &h.vocab_digest) {
            return bad("fingerprint does not match layout".into());
        }
        if !self.values.all_finite() {
            return bad("non-finite value".into());
        }
        Ok(())
    }

    pub fn header(&self) -> &MatrixHeader {
        &self.header
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn rows(&self) -> usize {
        self.values.rows()
    }

    pub fn cols(&self) -> usize {
        self.values.cols()
    }

    pub fn fingerprint(&self) -> &str {
        &self.header.fingerprint
    }

    pub fn author_ids(&self) -> &[String] {
        &self.header.author_ids
    }

    pub fn labels(&self) -> &[Label] {
        &self.header.labels
    }

    /// Binary targets (ironic = true); `None` if any row is unlabeled.
    pub fn targets(&self) -> Option<Vec<bool>> {
        self.header.labels.iter().map(|l| l.as_target()).collect()
    }

    /// Column range of one feature block.
    pub fn block(&self, feature: Feature) -> Option<std::ops::Range<usize>> {
        let i = self.header.features.iter().position(|&f| f == feature)?;
        let start = self.header.offsets[i];
        Some(start..start + self.header.dims[i])
    }

    /// A matrix holding only the given blocks, in the given order.
    pub fn select(&self, features: &[Feature]) -> Result<FeatureMatrix, FeatureError> {
        let mut cols = Vec::new();
        let mut dims = Vec::new();
        for &f in features {
            let range = self
                .block(f)
                .ok_or_else(|| FeatureError::UnknownFeature(f.name().to_string()))?;
            dims.push(range.len());
            cols.extend(range);
        }
        let h = &self.header;
        FeatureMatrix::new(
            features.to_vec(),
            dims,
            h.tweet_slots,
            h.vocab_size,
            h.vocab_digest.clone(),
            h.author_ids.clone(),
            h.labels.clone(),
            self.values.take_cols(&cols),
            h.seed,
            h.config_hash.clone(),
        )
    }

    /// Column names: `name` for single columns, `name_i` otherwise.
    pub fn column_names(&self) -> Vec<String> {
        let h = &self.header;
        h.features
            .iter()
            .zip(&h.dims)
            .flat_map(|(f, &d)| {
                (0..d).map(move |i| {
                    if d == 1 && f.level() == super::Level::User {
                        f.name().to_string()
                    } else {
                        format!("{}_{i}", f.name())
                    }
                })
            })
            .collect()
    }

    pub fn write_binary<W: Write>(&self, mut out: W) -> Result<(), FeatureError> {
        let header =
            serde_json::to_vec(&self.header).map_err(|e| FeatureError::BadMatrix(e.to_string()))?;
        out.write_all(MAGIC)?;
        out.write_all(&(header.len() as u32).to_le_bytes())?;
        out.write_all(&header)?;
        let mut buf = Vec::with_capacity(self.values.data().len() * 8);
        for v in self.values.data() {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        out.write_all(&buf)?;
        Ok(())
    }

    pub fn read_binary<R: Read>(mut input: R) -> Result<FeatureMatrix, FeatureError> {
        let bad = |m: &str| FeatureError::BadMatrix(m.to_string());
        let mut bytes = Vec::new();
        input.read_to_end(&mut bytes)?;
        if bytes.len() < 8 || &bytes[..4] != MAGIC {
            return Err(bad("missing magic"));
        }
        let len = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes")) as usize;
        let body = bytes
            .get(8..8 + len)
            .ok_or_else(|| bad("truncated header"))?;
        let header: MatrixHeader = serde_json::from_slice(body)
            .map_err(|e| FeatureError::BadMatrix(format!("header: {e}")))?;
        let payload = &bytes[8 + len..];
        let rows = header.author_ids.len();
        let cols: usize = header.dims.iter().sum();
        if payload.len() != rows * cols * 8 {
            return Err(bad("payload length does not match header"));
        }
        let data = payload
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        let m = FeatureMatrix {
            header,
            values: Matrix::new(rows, cols, data),
        };
        m.validate()?;
        Ok(m)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), FeatureError> {
        let mut line = String::from("author_id,label");
        for c in self.column_names() {
            line.push(',');
            line.push_str(&c);
        }
        writeln!(out, "{line}")?;
        for (r, id) in self.header.author_ids.iter().enumerate() {
            let mut line = format!("{id},{}", self.header.labels[r].code().unwrap_or(""));
            for v in self.values.row(r) {
                line.push(',');
                line.push_str(&v.to_string());
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }
}
