//! Binary database format (".hfxd"): little-endian, fixed-width,
//! versioned, byte-identical across platforms.
//!
//! Layout:
//!   magic "HFXD"
//!   version          u32
//!   flags            u8   (bit 0: region present)
//!   k                u16  (0 without a region)
//!   s_limit          u16  (0xFFFF sentinel without a region)
//!   start            u32
//!   rows             u32  (outer-table row count)
//!   accept pairs     u32 count, then (state u32, pattern u32) ascending
//!   outer table      rows x 256 x u32, row-major
//!   region vectors   256 x 64 bytes shuffle, then 256 x 64 bytes gutter
//!   parameters       batch, sigma, lambda, depth as f64 each

use crate::engine::Vector64;
use crate::error::DecodeError;
use crate::hybrid::{
    EngineParams, GutterTable, HybridDb, OuterTable, RegionTables, ShuffleTable, GUTTER_SINK,
};
use crate::PatternId;

pub const FORMAT_VERSION: u32 = 1;

const MAGIC: &[u8; 4] = b"HFXD";
const SCALAR_SENTINEL: u16 = u16::MAX;
const FLAG_REGION: u8 = 0b0000_0001;

pub fn serialize(db: &HybridDb) -> Vec<u8> {
    let rows = db.outer.rows() as usize;
    let mut out = Vec::with_capacity(32 + rows * 1024);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&db.version.to_le_bytes());
    match &db.region {
        Some(region) => {
            out.push(FLAG_REGION);
            out.extend_from_slice(&(region.k as u16).to_le_bytes());
            out.extend_from_slice(&(region.s_limit as u16).to_le_bytes());
        }
        None => {
            out.push(0);
            out.extend_from_slice(&0u16.to_le_bytes());
            out.extend_from_slice(&SCALAR_SENTINEL.to_le_bytes());
        }
    }
    out.extend_from_slice(&db.start.to_le_bytes());
    out.extend_from_slice(&db.outer.rows().to_le_bytes());

    let pairs: Vec<(u32, u32)> = db
        .accepts
        .iter()
        .enumerate()
        .flat_map(|(s, pats)| pats.iter().map(move |p| (s as u32, p.0)))
        .collect();
    out.extend_from_slice(&(pairs.len() as u32).to_le_bytes());
    for (state, pattern) in pairs {
        out.extend_from_slice(&state.to_le_bytes());
        out.extend_from_slice(&pattern.to_le_bytes());
    }

    for state in 0..db.outer.rows() {
        for &t in db.outer.row(state) {
            out.extend_from_slice(&t.to_le_bytes());
        }
    }

    if let Some(region) = &db.region {
        for v in region.shuffle.0.iter() {
            out.extend_from_slice(v.as_bytes());
        }
        for v in region.gutter.0.iter() {
            out.extend_from_slice(v.as_bytes());
        }
    }

    for value in [
        f64::from(db.params.batch),
        f64::from(db.params.sigma),
        db.params.lambda,
        f64::from(db.params.depth),
    ] {
        out.extend_from_slice(&value.to_le_bytes());
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], DecodeError> {
        if self.pos + n > self.bytes.len() {
            return Err(DecodeError::Truncated);
        }
        let slice = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(slice)
    }

    fn u8(&mut self) -> Result<u8, DecodeError> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16, DecodeError> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32, DecodeError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64, DecodeError> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

fn invalid(reason: impl Into<String>) -> DecodeError {
    DecodeError::Invalid {
        reason: reason.into(),
    }
}

pub fn deserialize(bytes: &[u8]) -> Result<HybridDb, DecodeError> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(4)? != MAGIC {
        return Err(DecodeError::BadMagic);
    }
    let version = r.u32()?;
    if version != FORMAT_VERSION {
        return Err(DecodeError::UnsupportedVersion { version });
    }
    let flags = r.u8()?;
    if flags & !FLAG_REGION != 0 {
        return Err(invalid(format!("unknown flag bits {flags:#04x}")));
    }
    let region_present = flags & FLAG_REGION != 0;
    let k = r.u16()?;
    let s_limit = r.u16()?;
    let start = r.u32()?;
    let rows = r.u32()?;

    if region_present {
        if !(2..=63).contains(&k) {
            return Err(invalid(format!("region size {k} outside 2..=63")));
        }
        if s_limit != k - 1 {
            return Err(invalid(format!(
                "s_limit {s_limit} does not equal k-1 = {}",
                k - 1
            )));
        }
        if rows < 65 {
            return Err(invalid("region database needs at least one outer row"));
        }
    } else {
        if k != 0 || s_limit != SCALAR_SENTINEL {
            return Err(invalid("scalar database carries region fields"));
        }
        if rows == 0 {
            return Err(invalid("empty transition table"));
        }
    }

    let state_is_live = |s: u32| -> bool {
        if region_present {
            s < u32::from(k) || (64..rows).contains(&s)
        } else {
            s < rows
        }
    };
    if !state_is_live(start) {
        return Err(invalid(format!("start state {start} is not a live state")));
    }

    let pair_count = r.u32()? as usize;
    let mut accepts: Vec<Vec<PatternId>> = vec![Vec::new(); rows as usize];
    let mut prev: Option<(u32, u32)> = None;
    for _ in 0..pair_count {
        let state = r.u32()?;
        let pattern = r.u32()?;
        if !state_is_live(state) {
            return Err(invalid(format!("accept entry names dead state {state}")));
        }
        if region_present && u64::from(state) <= u64::from(s_limit) {
            return Err(invalid(format!("accept state {state} inside the region")));
        }
        if prev.is_some_and(|p| p >= (state, pattern)) {
            return Err(invalid("accept entries out of order"));
        }
        prev = Some((state, pattern));
        accepts[state as usize].push(PatternId(pattern));
    }

    let mut table = Vec::with_capacity(rows as usize * 256);
    for state in 0..rows {
        for b in 0..256u32 {
            let t = r.u32()?;
            let on_sink_row = region_present && state == GUTTER_SINK;
            if on_sink_row {
                if t != GUTTER_SINK {
                    return Err(invalid("sink row must self-loop"));
                }
            } else if !state_is_live(t) && !(region_present && !state_is_live(state)) {
                return Err(invalid(format!(
                    "transition from live state {state} on byte {b} targets dead state {t}"
                )));
            }
            table.push(t);
        }
    }
    let outer = OuterTable::from_raw(rows, table);

    let region = if region_present {
        let mut shuffle = Box::new([Vector64::splat(0); 256]);
        for v in shuffle.iter_mut() {
            v.0.copy_from_slice(r.take(64)?);
        }
        let mut gutter = Box::new([Vector64::splat(0); 256]);
        for (b, v) in gutter.iter_mut().enumerate() {
            v.0.copy_from_slice(r.take(64)?);
            for (lane, &value) in v.0.iter().enumerate() {
                let ok = if lane < k as usize {
                    u32::from(value) < u32::from(k) || u32::from(value) == GUTTER_SINK
                } else {
                    u32::from(value) == GUTTER_SINK
                };
                if !ok {
                    return Err(invalid(format!(
                        "gutter vector for byte {b} lane {lane} holds {value}"
                    )));
                }
            }
        }
        Some(RegionTables {
            k: u32::from(k),
            s_limit: u32::from(s_limit),
            shuffle: ShuffleTable(shuffle),
            gutter: GutterTable(gutter),
        })
    } else {
        None
    };

    let batch = r.f64()?;
    let sigma = r.f64()?;
    let lambda = r.f64()?;
    let depth = r.f64()?;
    if r.pos != bytes.len() {
        return Err(invalid("trailing bytes after parameter block"));
    }
    let as_count = |value: f64, name: &str, min: f64| -> Result<u32, DecodeError> {
        if value.fract() != 0.0 || !(min..=f64::from(u32::MAX)).contains(&value) {
            return Err(invalid(format!(
                "parameter {name} = {value} is not a valid count"
            )));
        }
        Ok(value as u32)
    };
    let params = EngineParams {
        batch: as_count(batch, "batch", 1.0)?,
        sigma: as_count(sigma, "sigma", 0.0)?,
        lambda: if (0.0..=1.0).contains(&lambda) {
            lambda
        } else {
            return Err(invalid(format!("lambda {lambda} outside [0, 1]")));
        },
        depth: as_count(depth, "depth", 1.0)?,
    };

    Ok(HybridDb {
        version,
        outer,
        region,
        start,
        accepts,
        params,
    })
}
