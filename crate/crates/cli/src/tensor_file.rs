//! The `TTEN` container.
//!
//! ```text
//! "TTEN" | version u32 = 1 | dtype u8 (0 f64, 1 complex128) | order u32 = N
//! | N + 1 dims u64, tubal length last | payload, first index fastest
//! ```
//!
//! Every integer and value is little-endian; complex values are stored as
//! `(re, im)` pairs.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, ensure, Context, Result};
use num_complex::Complex64;
use tubal::{TransformSpec, TubalMatrix, TubalTensor};

pub const MAGIC: &[u8; 4] = b"TTEN";
pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl Payload {
    fn len(&self) -> usize {
        match self {
            Payload::Real(v) => v.len(),
            Payload::Complex(v) => v.len(),
        }
    }
}

/// An order-`N` tubal tensor on disk: `dims` has `N + 1` entries, `p` last.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorFile {
    pub dims: Vec<usize>,
    pub payload: Payload,
}

impl TensorFile {
    pub fn new(dims: Vec<usize>, payload: Payload) -> Result<Self> {
        ensure!(dims.len() >= 2, "a tensor file needs at least one mode and the tubal axis, got dims {dims:?}");
        let want = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).context("dims overflow")?;
        ensure!(payload.len() == want, "payload holds {} values, dims {dims:?} need {want}", payload.len());
        Ok(Self { dims, payload })
    }

    /// Stored as real when every imaginary part is exactly zero.
    pub fn from_tensor(a: &TubalTensor) -> Self {
        let mut dims = a.dims().to_vec();
        dims.push(a.p());
        Self { dims, payload: pack(a.data()) }
    }

    pub fn from_matrix(m: &TubalMatrix) -> Self {
        Self { dims: vec![m.rows(), m.cols(), m.p()], payload: pack(m.data()) }
    }

    pub fn p(&self) -> usize {
        *self.dims.last().expect("dims has at least two entries")
    }

    pub fn complex_data(&self) -> Vec<Complex64> {
        match &self.payload {
            Payload::Real(v) => v.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            Payload::Complex(v) => v.clone(),
        }
    }

    /// The tubal tensor under `transform`, whose length must match `p`.
    pub fn to_tensor(&self, transform: &Arc<TransformSpec>) -> Result<TubalTensor> {
        Ok(TubalTensor::new(&self.dims[..self.dims.len() - 1], self.complex_data(), transform)?)
    }

    pub fn to_matrix(&self, transform: &Arc<TransformSpec>) -> Result<TubalMatrix> {
        ensure!(self.dims.len() == 3, "expected a tubal matrix (order 2), got dims {:?}", self.dims);
        Ok(TubalMatrix::new(self.dims[0], self.dims[1], self.complex_data(), transform)?)
    }

    pub fn write_to(&self, w: &mut impl Write) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        let dtype: u8 = match self.payload {
            Payload::Real(_) => 0,
            Payload::Complex(_) => 1,
        };
        w.write_all(&[dtype])?;
        let order = u32::try_from(self.dims.len() - 1).context("order does not fit in u32")?;
        w.write_all(&order.to_le_bytes())?;
        for &d in &self.dims {
            w.write_all(&(d as u64).to_le_bytes())?;
        }
        match &self.payload {
            Payload::Real(v) => v.iter().try_for_each(|x| w.write_all(&x.to_le_bytes()))?,
            Payload::Complex(v) => v.iter().try_for_each(|z| {
                w.write_all(&z.re.to_le_bytes())?;
                w.write_all(&z.im.to_le_bytes())
            })?,
        }
        Ok(())
    }

    pub fn read_from(r: &mut impl Read) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic).context("truncated header")?;
        ensure!(&magic == MAGIC, "bad magic {magic:?}, expected \"TTEN\"");
        let version = read_u32(r)?;
        ensure!(version == VERSION, "unsupported version {version}, expected {VERSION}");
        let mut dtype = [0u8; 1];
        r.read_exact(&mut dtype)?;
        let order = read_u32(r)? as usize;
        ensure!(order >= 1, "order must be at least 1");
        let dims = (0..=order)
            .map(|_| -> Result<usize> { Ok(usize::try_from(read_u64(r)?)?) })
            .collect::<Result<Vec<_>>>()?;
        let count = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).context("dims overflow")?;
        let payload = match dtype[0] {
            0 => Payload::Real((0..count).map(|_| read_f64(r)).collect::<Result<_>>()?),
            1 => Payload::Complex(
                (0..count).map(|_| Ok(Complex64::new(read_f64(r)?, read_f64(r)?))).collect::<Result<_>>()?,
            ),
            other => bail!("unknown dtype {other}"),
        };
        let mut rest = [0u8; 1];
        ensure!(r.read(&mut rest)? == 0, "trailing bytes after payload");
        Self::new(dims, payload)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut r = BufReader::new(File::open(path).with_context(|| format!("opening {}", path.display()))?);
        Self::read_from(&mut r).with_context(|| format!("reading {}", path.display()))
    }
}

fn pack(data: &[Complex64]) -> Payload {
    if data.iter().all(|z| z.im == 0.0) {
        Payload::Real(data.iter().map(|z| z.re).collect())
    } else {
        Payload::Complex(data.to_vec())
    }
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b).context("truncated file")?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b).context("truncated file")?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b).context("truncated payload")?;
    Ok(f64::from_le_bytes(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout_is_bit_exact() {
        let f = TensorFile::new(vec![2, 1, 3], Payload::Real(vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0])).unwrap();
        let mut buf = Vec::new();
        f.write_to(&mut buf).unwrap();
        let mut want = b"TTEN".to_vec();
        want.extend(1u32.to_le_bytes());
        want.push(0);
        want.extend(2u32.to_le_bytes());
        for d in [2u64, 1, 3] {
            want.extend(d.to_le_bytes());
        }
        for x in 1..=6 {
            want.extend((x as f64).to_le_bytes());
        }
        assert_eq!(buf, want);
        assert_eq!(TensorFile::read_from(&mut buf.as_slice()).unwrap(), f);
    }

    #[test]
    fn complex_round_trip() {
        let data = vec![Complex64::new(1.0, -1.0), Complex64::new(0.5, 2.0)];
        let f = TensorFile::new(vec![1, 2], Payload::Complex(data)).unwrap();
        let mut buf = Vec::new();
        f.write_to(&mut buf).unwrap();
        assert_eq!(buf[8], 1);
        assert_eq!(buf.len(), 4 + 4 + 1 + 4 + 16 + 32);
        assert_eq!(TensorFile::read_from(&mut buf.as_slice()).unwrap(), f);
    }

    #[test]
    fn corrupt_files_are_rejected() {
        let f = TensorFile::new(vec![1, 1], Payload::Real(vec![1.0])).unwrap();
        let mut buf = Vec::new();
        f.write_to(&mut buf).unwrap();
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(TensorFile::read_from(&mut bad.as_slice()).unwrap_err().to_string().contains("magic"));
        let mut bad = buf.clone();
        bad[4] = 2;
        assert!(TensorFile::read_from(&mut bad.as_slice()).unwrap_err().to_string().contains("version"));
        let mut bad = buf.clone();
        bad[8] = 7;
        assert!(TensorFile::read_from(&mut bad.as_slice()).is_err());
        assert!(TensorFile::read_from(&mut &buf[..buf.len() - 1]).is_err());
        let mut long = buf.clone();
        long.push(0);
        assert!(TensorFile::read_from(&mut long.as_slice()).is_err());
        assert!(TensorFile::new(vec![2, 2], Payload::Real(vec![0.0; 3])).is_err());
    }
}
