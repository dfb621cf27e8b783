//! Binary PGM and raw float images.
//!
//! Raw layout: 16-byte header — magic (`DWTF` for f32 samples, `DWTD` for
//! f64), `u32` version (1), `u32` width, `u32` height, all little-endian —
//! followed by row-major little-endian samples.

use std::fs;
use std::path::Path;

use nsdwt::{Image2D, Sample, SubbandQuad};

use crate::CliError;

pub const RAW_MAGIC_F32: &[u8; 4] = b"DWTF";
pub const RAW_MAGIC_F64: &[u8; 4] = b"DWTD";
pub const RAW_VERSION: u32 = 1;
pub const RAW_HEADER_LEN: usize = 16;

/// Sample width of a raw file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RawKind {
    F32,
    F64,
}

pub fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn invalid(path: &Path, what: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("{}: {what}", path.display()))
}

/// Reads a PGM or raw image, detected from its first bytes.
pub fn read_image<T: Sample>(path: &Path) -> Result<Image2D<T>, CliError> {
    let bytes = read_file(path)?;
    if bytes.starts_with(b"P5") {
        decode_pgm(&bytes).map_err(|e| invalid(path, e))
    } else if bytes.starts_with(RAW_MAGIC_F32) || bytes.starts_with(RAW_MAGIC_F64) {
        decode_raw(&bytes).map_err(|e| invalid(path, e))
    } else {
        Err(invalid(path, "not a binary PGM (P5) or raw float image"))
    }
}

/// Binary PGM, 8- or 16-bit, scaled to `[0, 1]` by the maximum value.
pub fn decode_pgm<T: Sample>(bytes: &[u8]) -> Result<Image2D<T>, String> {
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in &mut fields {
        // Whitespace and `#` comments may separate header fields.
        loop {
            match bytes.get(pos) {
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(_) => break,
                None => return Err("truncated PGM header".into()),
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or("malformed PGM header")?;
    }
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err("malformed PGM header".into());
    }
    pos += 1;
    let [width, height, maxval] = fields;
    if maxval == 0 || maxval > 65535 {
        return Err(format!("unsupported PGM maxval {maxval}"));
    }
    let wide = maxval > 255;
    let n = width * height;
    let need = if wide { 2 * n } else { n };
    let data = bytes.get(pos..pos + need).ok_or("truncated PGM data")?;
    let scale = 1.0 / maxval as f64;
    let samples: Vec<T> = if wide {
        data.chunks_exact(2)
            .map(|b| T::from_f64(u16::from_be_bytes([b[0], b[1]]) as f64 * scale))
            .collect()
    } else {
        data.iter().map(|&b| T::from_f64(b as f64 * scale)).collect()
    };
    Image2D::new(width, height, samples).map_err(|e| e.to_string())
}

/// Encodes `[0, 1]` samples as PGM with the given maximum value (255 or
/// 65535); out-of-range values are clamped.
pub fn encode_pgm<T: Sample>(image: &Image2D<T>, maxval: u16) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n{}\n", image.width(), image.height(), maxval).into_bytes();
    for &v in image.samples() {
        let q = (v.to_f64().clamp(0.0, 1.0) * maxval as f64).round() as u16;
        if maxval > 255 {
            out.extend_from_slice(&q.to_be_bytes());
        } else {
            out.push(q as u8);
        }
    }
    out
}

pub fn encode_raw<T: Sample>(image: &Image2D<T>, kind: RawKind) -> Vec<u8> {
    let (magic, width) = match kind {
        RawKind::F32 => (RAW_MAGIC_F32, 4),
        RawKind::F64 => (RAW_MAGIC_F64, 8),
    };
    let mut out = Vec::with_capacity(RAW_HEADER_LEN + width * image.samples().len());
    out.extend_from_slice(magic);
    out.extend_from_slice(&RAW_VERSION.to_le_bytes());
    out.extend_from_slice(&(image.width() as u32).to_le_bytes());
    out.extend_from_slice(&(image.height() as u32).to_le_bytes());
    for &v in image.samples() {
        match kind {
            RawKind::F32 => out.extend_from_slice(&(v.to_f64() as f32).to_le_bytes()),
            RawKind::F64 => out.extend_from_slice(&v.to_f64().to_le_bytes()),
        }
    }
    out
}

pub fn decode_raw<T: Sample>(bytes: &[u8]) -> Result<Image2D<T>, String> {
    if bytes.len() < RAW_HEADER_LEN {
        return Err("truncated raw header".into());
    }
    let word = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().expect("4 bytes"));
    let kind = match &bytes[..4] {
        m if m == RAW_MAGIC_F32 => RawKind::F32,
        m if m == RAW_MAGIC_F64 => RawKind::F64,
        _ => return Err("bad raw magic".into()),
    };
    if word(4) != RAW_VERSION {
        return Err(format!("unsupported raw version {}", word(4)));
    }
    let (width, height) = (word(8) as usize, word(12) as usize);
    let body = &bytes[RAW_HEADER_LEN..];
    let size = if kind == RawKind::F32 { 4 } else { 8 };
    if body.len() != width * height * size {
        return Err(format!(
            "raw body holds {} bytes, expected {} for {width}x{height}",
            body.len(),
            width * height * size
        ));
    }
    let samples = body
        .chunks_exact(size)
        .map(|b| match kind {
            RawKind::F32 => T::from_f64(f32::from_le_bytes(b.try_into().expect("4 bytes")) as f64),
            RawKind::F64 => T::from_f64(f64::from_le_bytes(b.try_into().expect("8 bytes"))),
        })
        .collect();
    Image2D::new(width, height, samples).map_err(|e| e.to_string())
}

/// Raw sample width matching the working precision.
pub fn raw_kind<T: Sample>() -> RawKind {
    match T::PRECISION {
        nsdwt::Precision::Single => RawKind::F32,
        nsdwt::Precision::Double => RawKind::F64,
    }
}

pub const BAND_NAMES: [&str; 4] = ["ll", "hl", "lh", "hh"];

/// `PREFIX.ll.raw`, `PREFIX.hl.raw`, ...
pub fn band_paths(prefix: &Path) -> [std::path::PathBuf; 4] {
    BAND_NAMES.map(|b| {
        let mut s = prefix.as_os_str().to_owned();
        s.push(format!(".{b}.raw"));
        s.into()
    })
}

/// `PREFIX.raw`, holding the subbands in the interleaved pixel layout.
pub fn interleaved_path(prefix: &Path) -> std::path::PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".raw");
    s.into()
}

pub fn write_quad<T: Sample>(quad: &SubbandQuad<T>, prefix: &Path, interleaved: bool) -> Result<Vec<std::path::PathBuf>, CliError> {
    let kind = raw_kind::<T>();
    if interleaved {
        let path = interleaved_path(prefix);
        write_file(&path, &encode_raw(&quad.interleave(), kind))?;
        return Ok(vec![path]);
    }
    let paths = band_paths(prefix);
    for (band, path) in quad.bands().iter().zip(&paths) {
        write_file(path, &encode_raw(band, kind))?;
    }
    Ok(paths.to_vec())
}

pub fn read_quad<T: Sample>(prefix: &Path, interleaved: bool) -> Result<SubbandQuad<T>, CliError> {
    if interleaved {
        let path = interleaved_path(prefix);
        let image = read_image::<T>(&path)?;
        return SubbandQuad::deinterleave(&image).map_err(|e| invalid(&path, e));
    }
    let paths = band_paths(prefix);
    let mut bands = Vec::with_capacity(4);
    for path in &paths {
        bands.push(read_image::<T>(path)?);
    }
    let bands: [Image2D<T>; 4] = bands.try_into().expect("four bands");
    SubbandQuad::from_bands(bands).map_err(|e| invalid(prefix, e))
}

/// Writes PGM when the path ends in `.pgm`, raw otherwise.
pub fn write_image<T: Sample>(image: &Image2D<T>, path: &Path) -> Result<(), CliError> {
    let is_pgm = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("pgm"));
    let bytes = if is_pgm {
        encode_pgm(image, 255)
    } else {
        encode_raw(image, raw_kind::<T>())
    };
    write_file(path, &bytes)
}
