//! On-disk table format.
//!
//! ```text
//! offset  size  field
//!      0     4  magic "KLTB"
//!      4     4  version, u32 LE
//!      8     8  p, u64 LE
//!     16     8  b, u64 LE
//!     24     1  method (0 = naive, 1 = dft)
//!     25   8*p  values, f64 LE
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{KloostermanTable, Method};
use crate::arith::PrimeModulus;
use crate::error::{Error, Result};

pub const CACHE_MAGIC: [u8; 4] = *b"KLTB";
pub const CACHE_VERSION: u32 = 1;

const HEADER_LEN: usize = 25;

pub fn cache_file_name(p: PrimeModulus, b: u64, method: Method) -> String {
    format!("kltb-{}-{}-{}.bin", p.get(), b, method.as_str())
}

pub fn write_table<W: Write>(table: &KloostermanTable, out: W) -> Result<()> {
    let mut out = BufWriter::new(out);
    out.write_all(&CACHE_MAGIC)?;
    out.write_all(&CACHE_VERSION.to_le_bytes())?;
    out.write_all(&table.modulus().get().to_le_bytes())?;
    out.write_all(&table.twist().to_le_bytes())?;
    out.write_all(&[table.method().to_byte()])?;
    for v in table.values() {
        out.write_all(&v.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_table<R: Read>(input: R) -> Result<KloostermanTable> {
    let mut input = BufReader::new(input);
    let mut header = [0u8; HEADER_LEN];
    input
        .read_exact(&mut header)
        .map_err(|_| Error::Cache("truncated header".into()))?;
    if header[0..4] != CACHE_MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    let version = u32::from_le_bytes(header[4..8].try_into().unwrap());
    if version != CACHE_VERSION {
        return Err(Error::Cache(format!("unsupported version {version}")));
    }
    let p = u64::from_le_bytes(header[8..16].try_into().unwrap());
    let b = u64::from_le_bytes(header[16..24].try_into().unwrap());
    let method =
        Method::from_byte(header[24]).ok_or_else(|| Error::Cache(format!("bad method byte {}", header[24])))?;
    let p = PrimeModulus::new(p).map_err(|e| Error::Cache(e.to_string()))?;

    let mut values = Vec::with_capacity(p.len());
    let mut buf = [0u8; 8];
    for _ in 0..p.len() {
        input
            .read_exact(&mut buf)
            .map_err(|_| Error::Cache("truncated body".into()))?;
        values.push(f64::from_le_bytes(buf));
    }
    if input.read(&mut buf)? != 0 {
        return Err(Error::Cache("trailing bytes".into()));
    }
    KloostermanTable::from_values(p, b, method, values).map_err(|e| Error::Cache(e.to_string()))
}

impl KloostermanTable {
    pub fn save(&self, path: &Path) -> Result<()> {
        write_table(self, File::create(path)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        read_table(File::open(path)?)
    }

    /// Load from `dir` if a valid cache file for `(p, b, method)` exists;
    /// otherwise build and store it. A file whose header disagrees with the
    /// request is rebuilt.
    pub fn cached(dir: &Path, b: i64, p: PrimeModulus, method: Method) -> Result<Self> {
        let b_red = p.reduce(b);
        let path = dir.join(cache_file_name(p, b_red, method));
        if let Ok(t) = Self::load(&path) {
            if t.modulus() == p && t.twist() == b_red && t.method() == method {
                return Ok(t);
            }
        }
        let t = Self::build(b, p, method)?;
        std::fs::create_dir_all(dir)?;
        t.save(&path)?;
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout_is_fixed() {
        let p = PrimeModulus::new(5).unwrap();
        let t = KloostermanTable::build(2, p, Method::Dft).unwrap();
        let mut bytes = Vec::new();
        write_table(&t, &mut bytes).unwrap();
        assert_eq!(bytes.len(), HEADER_LEN + 8 * 5);
        assert_eq!(&bytes[0..4], b"KLTB");
        assert_eq!(&bytes[4..8], &1u32.to_le_bytes());
        assert_eq!(&bytes[8..16], &5u64.to_le_bytes());
        assert_eq!(&bytes[16..24], &2u64.to_le_bytes());
        assert_eq!(bytes[24], 1);
        assert_eq!(&bytes[25..33], &t.values()[0].to_le_bytes());
        assert_eq!(read_table(&bytes[..]).unwrap(), t);
    }

    #[test]
    fn corrupt_files_are_rejected() {
        let p = PrimeModulus::new(7).unwrap();
        let t = KloostermanTable::build(1, p, Method::Naive).unwrap();
        let mut bytes = Vec::new();
        write_table(&t, &mut bytes).unwrap();

        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(read_table(&bad[..]), Err(Error::Cache(_))));
        assert!(read_table(&bytes[..bytes.len() - 1]).is_err());
        let mut extra = bytes.clone();
        extra.push(0);
        assert!(read_table(&extra[..]).is_err());
        let mut composite = bytes.clone();
        composite[8..16].copy_from_slice(&9u64.to_le_bytes());
        assert!(read_table(&composite[..]).is_err());
    }

    #[test]
    fn cache_round_trip_through_directory() {
        let dir = tempfile::tempdir().unwrap();
        let p = PrimeModulus::new(101).unwrap();
        let built = KloostermanTable::cached(dir.path(), 1, p, Method::Dft).unwrap();
        let path = dir.path().join(cache_file_name(p, 1, Method::Dft));
        assert!(path.exists());
        let again = KloostermanTable::cached(dir.path(), 1, p, Method::Dft).unwrap();
        assert_eq!(built, again);
    }
}
