//! Binary model files. All integers are `u64` and all reals `f64`,
//! little-endian.
//!
//! Logistic model (`logreg.bin`):
//!
//! ```text
//! magic "LXLR" | version u32 = 1
//! p | vocab_id | learning_rate | l2_lambda | epochs | batch_size | seed
//! theta_0 theta_1 ... theta_p
//! ```
//!
//! BiLSTM (`bilstm.bin`), tensors row-major in manifest order:
//!
//! ```text
//! magic "LXBL" | version u32 = 1
//! char_count | embedding_dim | hidden_dim
//! learning_rate | epochs | batch_size | clip_norm | seed
//! tensor_count, then per tensor: name_len u32, name bytes, element count
//! tensor data, concatenated
//! ```
//!
//! The character table lives next to it as TSV `char<TAB>index`.

use std::fmt::Write as _;
use std::path::Path;

use lexforge_core::bilstm::{BiLstmParams, CharVocabulary, TENSOR_NAMES};
use lexforge_core::{BiLstmHyperparams, BiLstmModel, LogRegHyperparams, LogRegModel};

use super::{read_artifact, write_file};
use crate::error::{LexError, Result};

const LR_MAGIC: &[u8; 4] = b"LXLR";
const NN_MAGIC: &[u8; 4] = b"LXBL";
const VERSION: u32 = 1;

#[derive(Default)]
struct Writer(Vec<u8>);

impl Writer {
    fn bytes(&mut self, b: &[u8]) {
        self.0.extend_from_slice(b);
    }
    fn u32(&mut self, v: u32) {
        self.bytes(&v.to_le_bytes());
    }
    fn u64(&mut self, v: u64) {
        self.bytes(&v.to_le_bytes());
    }
    fn usize(&mut self, v: usize) {
        self.u64(v as u64);
    }
    fn f64(&mut self, v: f64) {
        self.bytes(&v.to_le_bytes());
    }
}

struct Reader<'a> {
    path: &'a Path,
    data: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.data.len() - self.pos < n {
            return Err(LexError::parse(self.path, 0, format!("truncated at byte {}", self.pos)));
        }
        let out = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn usize(&mut self) -> Result<usize> {
        let v = self.u64()?;
        usize::try_from(v).map_err(|_| LexError::parse(self.path, 0, format!("size {v} too large")))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn header(&mut self, magic: &[u8; 4]) -> Result<()> {
        if self.take(4)? != magic {
            return Err(LexError::parse(self.path, 0, "bad magic bytes"));
        }
        match self.u32()? {
            VERSION => Ok(()),
            v => Err(LexError::parse(self.path, 0, format!("unsupported format version {v}"))),
        }
    }
    fn finish(self) -> Result<()> {
        if self.pos != self.data.len() {
            return Err(LexError::parse(self.path, 0, "trailing bytes"));
        }
        Ok(())
    }
}

pub fn logreg_to_bytes(model: &LogRegModel) -> Vec<u8> {
    let hp = model.hyperparams();
    let mut w = Writer::default();
    w.bytes(LR_MAGIC);
    w.u32(VERSION);
    w.usize(model.theta().len());
    w.u64(model.vocab_id());
    w.f64(hp.learning_rate);
    w.f64(hp.l2_lambda);
    w.usize(hp.epochs);
    w.usize(hp.batch_size);
    w.u64(hp.seed);
    w.f64(model.theta0());
    model.theta().iter().for_each(|&t| w.f64(t));
    w.0
}

pub fn logreg_from_bytes(path: &Path, data: &[u8]) -> Result<LogRegModel> {
    let mut r = Reader { path, data, pos: 0 };
    r.header(LR_MAGIC)?;
    let p = r.usize()?;
    if p.checked_add(1).and_then(|n| n.checked_mul(8)) != Some(data.len().saturating_sub(64)) {
        return Err(LexError::parse(path, 0, format!("expected {p} weights plus a bias")));
    }
    let vocab_id = r.u64()?;
    let hp = LogRegHyperparams {
        learning_rate: r.f64()?,
        l2_lambda: r.f64()?,
        epochs: r.usize()?,
        batch_size: r.usize()?,
        seed: r.u64()?,
    };
    let theta0 = r.f64()?;
    let theta = (0..p).map(|_| r.f64()).collect::<Result<Vec<_>>>()?;
    r.finish()?;
    Ok(LogRegModel::from_parts(theta0, theta, vocab_id, hp))
}

pub fn bilstm_to_bytes(model: &BiLstmModel) -> Vec<u8> {
    let (params, hp) = (model.params(), model.hyperparams());
    let mut w = Writer::default();
    w.bytes(NN_MAGIC);
    w.u32(VERSION);
    w.usize(params.char_count());
    w.usize(params.embedding_dim());
    w.usize(params.hidden_dim());
    w.f64(hp.learning_rate);
    w.usize(hp.epochs);
    w.usize(hp.batch_size);
    w.f64(hp.clip_norm);
    w.u64(hp.seed);
    let tensors = params.tensors();
    w.usize(tensors.len());
    for (name, t) in TENSOR_NAMES.iter().zip(&tensors) {
        w.u32(name.len() as u32);
        w.bytes(name.as_bytes());
        w.usize(t.len());
    }
    for t in tensors {
        t.iter().for_each(|&v| w.f64(v));
    }
    w.0
}

pub fn bilstm_from_bytes(path: &Path, data: &[u8], chars: CharVocabulary) -> Result<BiLstmModel> {
    let mut r = Reader { path, data, pos: 0 };
    r.header(NN_MAGIC)?;
    let (char_count, d, h) = (r.usize()?, r.usize()?, r.usize()?);
    if char_count != chars.len() {
        return Err(LexError::parse(
            path,
            0,
            format!("model has {char_count} character rows but the character table has {}", chars.len()),
        ));
    }
    let hp = BiLstmHyperparams {
        embedding_dim: d,
        hidden_dim: h,
        learning_rate: r.f64()?,
        epochs: r.usize()?,
        batch_size: r.usize()?,
        clip_norm: r.f64()?,
        seed: r.u64()?,
    };
    if r.usize()? != TENSOR_NAMES.len() {
        return Err(LexError::parse(path, 0, "unexpected tensor count"));
    }
    // Sizes are checked against the manifest before allocating.
    let mut sizes = Vec::with_capacity(TENSOR_NAMES.len());
    for expected in TENSOR_NAMES {
        let len = r.u32()? as usize;
        let name = r.take(len)?;
        if name != expected.as_bytes() {
            return Err(LexError::parse(path, 0, format!("expected tensor {expected:?}")));
        }
        sizes.push(r.usize()?);
    }
    let total: usize = sizes.iter().try_fold(0usize, |a, &s| a.checked_add(s)).unwrap_or(usize::MAX);
    if total.checked_mul(8) != Some(data.len() - r.pos) {
        return Err(LexError::parse(path, 0, "tensor data does not match the manifest"));
    }
    let mut params = BiLstmParams::zeros(char_count, d, h);
    for (i, t) in params.tensors_mut().into_iter().enumerate() {
        if t.len() != sizes[i] {
            return Err(LexError::parse(
                path,
                0,
                format!("tensor {} has {} values, expected {}", TENSOR_NAMES[i], sizes[i], t.len()),
            ));
        }
        for v in t.iter_mut() {
            *v = r.f64()?;
        }
    }
    r.finish()?;
    Ok(BiLstmModel::from_parts(chars, params, hp)?)
}

pub fn chars_to_tsv(chars: &CharVocabulary) -> String {
    let mut out = String::new();
    for (c, i) in chars.iter() {
        writeln!(out, "{c}\t{i}").unwrap();
    }
    out
}

pub fn parse_chars_tsv(path: &Path, text: &str) -> Result<CharVocabulary> {
    let mut chars = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let (c, index) = line
            .split_once('\t')
            .ok_or_else(|| LexError::parse(path, i + 1, "expected `char<TAB>index`"))?;
        let mut it = c.chars();
        let (Some(c), None) = (it.next(), it.next()) else {
            return Err(LexError::parse(path, i + 1, format!("{c:?} is not a single character")));
        };
        if index.parse::<usize>().ok() != Some(i + 1) {
            return Err(LexError::parse(path, i + 1, format!("index {index:?} out of sequence")));
        }
        if chars.last().is_some_and(|&prev| prev >= c) {
            return Err(LexError::parse(path, i + 1, "characters must be strictly ascending"));
        }
        chars.push(c);
    }
    Ok(CharVocabulary::from_chars(chars))
}

fn read_binary(path: &Path) -> Result<Vec<u8>> {
    if !path.exists() {
        return Err(LexError::MissingArtifact { path: path.to_path_buf(), step: "train" });
    }
    std::fs::read(path).map_err(|e| LexError::io(path, e))
}

pub fn write_logreg(path: &Path, model: &LogRegModel) -> Result<()> {
    write_file(path, logreg_to_bytes(model))
}

pub fn read_logreg(path: &Path) -> Result<LogRegModel> {
    logreg_from_bytes(path, &read_binary(path)?)
}

pub fn write_bilstm(model_path: &Path, chars_path: &Path, model: &BiLstmModel) -> Result<()> {
    write_file(chars_path, chars_to_tsv(model.chars()))?;
    write_file(model_path, bilstm_to_bytes(model))
}

pub fn read_bilstm(model_path: &Path, chars_path: &Path) -> Result<BiLstmModel> {
    let chars = parse_chars_tsv(chars_path, &read_artifact(chars_path, "train")?)?;
    bilstm_from_bytes(model_path, &read_binary(model_path)?, chars)
}

#[cfg(test)]
mod tests {
    use super::*;
    use lexforge_core::corpus::build_corpus;
    use lexforge_core::rng;

    fn nn() -> BiLstmModel {
        let c = build_corpus(&["gulaam", "kal"], &["house", "zebra"], 2).unwrap();
        let hp = BiLstmHyperparams { embedding_dim: 3, hidden_dim: 4, ..Default::default() };
        BiLstmModel::init(CharVocabulary::build(&c), hp, &mut rng::seeded(8))
    }

    #[test]
    fn logreg_round_trip_is_exact() {
        let hp = LogRegHyperparams { learning_rate: 0.3, epochs: 7, ..Default::default() };
        let m = LogRegModel::from_parts(-0.25, vec![1.5, f64::MIN_POSITIVE, -3.0e-300], 99, hp);
        let bytes = logreg_to_bytes(&m);
        assert_eq!(&bytes[..4], b"LXLR");
        assert_eq!(bytes.len(), 64 + 8 * 4);
        let back = logreg_from_bytes(Path::new("m"), &bytes).unwrap();
        assert_eq!(back, m);
        assert_eq!(logreg_to_bytes(&back), bytes);
    }

    #[test]
    fn logreg_rejects_corruption() {
        let m = LogRegModel::from_parts(0.0, vec![1.0; 3], 1, LogRegHyperparams::default());
        let bytes = logreg_to_bytes(&m);
        assert!(logreg_from_bytes(Path::new("m"), &bytes[..bytes.len() - 1]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(logreg_from_bytes(Path::new("m"), &bad).is_err());
        let mut extra = bytes;
        extra.extend_from_slice(&[0; 8]);
        assert!(logreg_from_bytes(Path::new("m"), &extra).is_err());
    }

    #[test]
    fn bilstm_round_trip_is_exact() {
        let m = nn();
        let bytes = bilstm_to_bytes(&m);
        let chars = parse_chars_tsv(Path::new("c"), &chars_to_tsv(m.chars())).unwrap();
        let back = bilstm_from_bytes(Path::new("m"), &bytes, chars).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.fingerprint(), m.fingerprint());
    }

    #[test]
    fn bilstm_rejects_mismatched_tables() {
        let m = nn();
        let bytes = bilstm_to_bytes(&m);
        let fewer = CharVocabulary::from_chars("abc".chars());
        assert!(bilstm_from_bytes(Path::new("m"), &bytes, fewer).is_err());
        assert!(bilstm_from_bytes(Path::new("m"), &bytes[..bytes.len() - 8], m.chars().clone()).is_err());
    }

    #[test]
    fn char_table_format() {
        let v = CharVocabulary::from_chars("cab".chars());
        assert_eq!(chars_to_tsv(&v), "a\t1\nb\t2\nc\t3\n");
        assert!(parse_chars_tsv(Path::new("c"), "b\t1\na\t2\n").is_err());
        assert!(parse_chars_tsv(Path::new("c"), "a\t2\n").is_err());
    }
}
