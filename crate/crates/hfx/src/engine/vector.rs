//! 64-lane byte vectors and the shuffle-select primitive the batch
//! engine is built on.

use std::fmt;

/// 64 byte lanes; the in-memory unit of the per-byte transition vectors.
#[derive(Clone, Copy, PartialEq, Eq)]
#[repr(C, align(64))]
pub struct Vector64(pub [u8; 64]);

impl Vector64 {
    pub const fn splat(value: u8) -> Vector64 {
        Vector64([value; 64])
    }

    /// Lane identity: lane i holds i.
    pub fn identity() -> Vector64 {
        let mut lanes = [0u8; 64];
        for (i, lane) in lanes.iter_mut().enumerate() {
            *lane = i as u8;
        }
        Vector64(lanes)
    }

    #[inline]
    pub fn lane(&self, i: usize) -> u8 {
        self.0[i & 63]
    }

    pub fn as_bytes(&self) -> &[u8; 64] {
        &self.0
    }
}

impl fmt::Debug for Vector64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vector64{:?}", &self.0[..])
    }
}

/// `out[i] = table[idx[i] mod 64]` for every lane.
///
/// This is the semantics of a 64-lane byte shuffle: index lanes select
/// from the table using only their low six bits. On x86-64 with
/// AVX-512VBMI the single-instruction backend is used; the portable
/// implementation is the contract either way.
#[inline]
pub fn permute64(table: &Vector64, idx: &Vector64) -> Vector64 {
    #[cfg(target_arch = "x86_64")]
    {
        if avx512_available() {
            // SAFETY: feature presence checked at runtime.
            return unsafe { permute64_avx512(table, idx) };
        }
    }
    permute64_portable(table, idx)
}

/// Portable reference implementation of [`permute64`].
#[inline]
pub fn permute64_portable(table: &Vector64, idx: &Vector64) -> Vector64 {
    let mut out = [0u8; 64];
    for (lane, slot) in out.iter_mut().enumerate() {
        *slot = table.0[(idx.0[lane] & 63) as usize];
    }
    Vector64(out)
}

#[cfg(target_arch = "x86_64")]
pub(crate) fn avx512_available() -> bool {
    use std::sync::OnceLock;
    static AVAILABLE: OnceLock<bool> = OnceLock::new();
    *AVAILABLE.get_or_init(|| {
        std::arch::is_x86_feature_detected!("avx512f")
            && std::arch::is_x86_feature_detected!("avx512vbmi")
    })
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx512f,avx512vbmi")]
unsafe fn permute64_avx512(table: &Vector64, idx: &Vector64) -> Vector64 {
    use std::arch::x86_64::*;
    let t = _mm512_loadu_si512(table.0.as_ptr() as *const _);
    let i = _mm512_loadu_si512(idx.0.as_ptr() as *const _);
    // vpermb ignores all but the low six index bits, matching the
    // portable mod-64 contract.
    let r = _mm512_permutexvar_epi8(i, t);
    let mut out = Vector64([0u8; 64]);
    _mm512_storeu_si512(out.0.as_mut_ptr() as *mut _, r);
    out
}

/// Functional composition of transition vectors: lane `s` of the result
/// is the lane reached by applying every table in sequence starting from
/// `s`. `compose(A, B) = permute64(B, A)`, i.e. A first.
pub fn compose_chain(tables: &[Vector64]) -> Vector64 {
    assert!(!tables.is_empty(), "compose_chain needs at least one table");
    let mut acc = tables[0];
    for t in &tables[1..] {
        acc = permute64(t, &acc);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_selects_table() {
        let table = Vector64(std::array::from_fn(|i| (i as u8).wrapping_mul(3)));
        assert_eq!(permute64(&table, &Vector64::identity()), table);
    }

    #[test]
    fn zero_index_broadcasts() {
        let table = Vector64(std::array::from_fn(|i| i as u8 + 1));
        let out = permute64(&table, &Vector64::splat(0));
        assert_eq!(out, Vector64::splat(table.0[0]));
    }

    #[test]
    fn out_of_range_lane_wraps_mod_64() {
        let table = Vector64(std::array::from_fn(|i| i as u8));
        let out = permute64(&table, &Vector64::splat(70));
        assert_eq!(out, Vector64::splat(6));
    }

    #[test]
    fn compose_identity_is_neutral() {
        let x = Vector64(std::array::from_fn(|i| (i as u8).wrapping_mul(7) & 63));
        assert_eq!(compose_chain(&[Vector64::identity(), x]), x);
        assert_eq!(compose_chain(&[x, Vector64::identity()]), x);
    }

    #[test]
    fn compose_equals_sequential_application() {
        let mut rng = crate::rng::Rng::seeded(99);
        for _ in 0..200 {
            let tables: Vec<Vector64> = (0..5)
                .map(|_| Vector64(std::array::from_fn(|_| rng.next_byte() & 63)))
                .collect();
            let composed = compose_chain(&tables);
            for s in 0..64usize {
                let mut cur = s as u8;
                for t in &tables {
                    cur = t.lane(cur as usize);
                }
                assert_eq!(composed.lane(s), cur);
            }
        }
    }

    #[cfg(target_arch = "x86_64")]
    #[test]
    fn hardware_backend_matches_portable() {
        if !avx512_available() {
            return;
        }
        let mut rng = crate::rng::Rng::seeded(5);
        for _ in 0..500 {
            let table = Vector64(std::array::from_fn(|_| rng.next_byte()));
            let idx = Vector64(std::array::from_fn(|_| rng.next_byte()));
            assert_eq!(
                unsafe { permute64_avx512(&table, &idx) },
                permute64_portable(&table, &idx)
            );
        }
    }
}
