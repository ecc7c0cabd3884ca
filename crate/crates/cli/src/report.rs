//! Experiment result rows and serialization.
//!
//! One row per batch.  The `checksum` column is an FNV-1a 64 hash of the
//! algorithm result after the batch, so two runs over the same input with the
//! same seed must produce identical checksum columns even when the timing
//! columns differ.

use serde::Serialize;

/// FNV-1a 64-bit running hasher.
#[derive(Debug, Clone, Copy)]
pub struct Fnv1a64(u64);

impl Fnv1a64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x100_0000_01b3;

    pub fn new() -> Self {
        Fnv1a64(Self::OFFSET)
    }

    pub fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(Self::PRIME);
        }
    }

    pub fn finish(self) -> u64 {
        self.0
    }
}

impl Default for Fnv1a64 {
    fn default() -> Self {
        Self::new()
    }
}

/// Hashes a `u32` slice little-endian.
pub fn checksum_u32s(values: &[u32]) -> u64 {
    let mut h = Fnv1a64::new();
    for &v in values {
        h.write(&v.to_le_bytes());
    }
    h.finish()
}

/// Hashes a `u64` little-endian.
pub fn checksum_u64(value: u64) -> u64 {
    let mut h = Fnv1a64::new();
    h.write(&value.to_le_bytes());
    h.finish()
}

/// Hashes an `f64` slice by bit pattern, little-endian.
pub fn checksum_f64s(values: &[f64]) -> u64 {
    let mut h = Fnv1a64::new();
    for &v in values {
        h.write(&v.to_bits().to_le_bytes());
    }
    h.finish()
}

/// One measured batch.
#[derive(Debug, Clone, Serialize)]
pub struct BatchRow {
    /// 0-based batch index.
    pub batch_idx: usize,
    /// Wall time of the dynamic update + recompute, milliseconds.
    pub t_dynamic_ms: f64,
    /// Wall time of the from-scratch recompute, milliseconds.
    pub t_static_ms: f64,
    /// Cumulative dynamic time, milliseconds.
    pub cum_dynamic: f64,
    /// Cumulative static time, milliseconds.
    pub cum_static: f64,
    /// Self-relative speedup `cum_static / cum_dynamic` after this batch.
    pub s: f64,
    /// FNV-1a 64 checksum of the post-batch result.
    #[serde(serialize_with = "hex_u64")]
    pub checksum: u64,
}

fn hex_u64<S: serde::Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{v:016x}"))
}

/// Exact CSV header; tooling greps for this line.
pub const CSV_HEADER: &str = "batch_idx,t_dynamic_ms,t_static_ms,cum_dynamic,cum_static,s,checksum";

/// Renders rows as CSV.  Zero rows still yields the header line.
pub fn to_csv(rows: &[BatchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{:.6},{:.6},{:.6},{:.6},{:.6},{:016x}\n",
            r.batch_idx,
            r.t_dynamic_ms,
            r.t_static_ms,
            r.cum_dynamic,
            r.cum_static,
            r.s,
            r.checksum
        ));
    }
    out
}

/// Renders rows as a JSON array.
pub fn to_json(rows: &[BatchRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows are always serializable")
}
