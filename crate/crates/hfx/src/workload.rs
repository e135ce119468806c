//! Synthetic scan inputs for differential testing and benchmarking.

use crate::hybrid::HybridDb;
use crate::rng::Rng;

/// Random-case generator that biases bytes toward the in-region edge
/// labels of whatever state the scan would currently be in.
///
/// Uniform bytes almost never follow a multi-byte path through the
/// region, so a plain uniform fuzzer exercises neither deep batching nor
/// the region hand-off. This generator walks the automaton while it
/// emits: from an in-region state it flips a coin between a uniform byte
/// and a byte drawn from a uniformly chosen out-bundle of that state,
/// which weights narrow edges (the ones that advance or escape) heavily.
pub struct CaseGen<'a> {
    db: &'a HybridDb,
    /// Out-bundles per in-region state, as byte lists.
    bundles: Vec<Vec<Vec<u8>>>,
}

impl<'a> CaseGen<'a> {
    pub fn new(db: &'a HybridDb) -> CaseGen<'a> {
        let k = db.region.as_ref().map_or(0, |r| r.k);
        let bundles = (0..k)
            .map(|state| {
                let mut by_dest: std::collections::BTreeMap<u32, Vec<u8>> = Default::default();
                for b in 0..=255u8 {
                    by_dest.entry(db.outer.next(state, b)).or_default().push(b);
                }
                by_dest.into_values().collect()
            })
            .collect();
        CaseGen { db, bundles }
    }

    /// One case with geometric length (mean near `mean_len`).
    pub fn gen(&self, rng: &mut Rng, mean_len: usize) -> Vec<u8> {
        let p = 1.0 / (mean_len as f64);
        let u = rng.unit_f64().max(f64::MIN_POSITIVE);
        let len = ((1.0 - u).ln() / (1.0 - p).ln()).floor() as usize;
        let mut out = Vec::with_capacity(len);
        let mut state = self.db.start;
        let limit = self.db.region.as_ref().map_or(-1, |r| i64::from(r.s_limit));
        for _ in 0..len {
            let b = if i64::from(state) <= limit && rng.below(2) == 1 {
                let bundles = &self.bundles[state as usize];
                let bundle = rng.choose(bundles);
                *rng.choose(bundle)
            } else {
                rng.next_byte()
            };
            state = self.db.outer.next(state, b);
            out.push(b);
        }
        out
    }
}

/// Convenience one-shot wrapper around [`CaseGen`].
pub fn gen_case(rng: &mut Rng, db: &HybridDb, mean_len: usize) -> Vec<u8> {
    CaseGen::new(db).gen(rng, mean_len)
}

/// A workload that circulates inside the hyper region: at each step a
/// byte keeping the current state in-region is chosen when one exists
/// (with a small escape probability to exercise hand-off), otherwise any
/// byte. Used by the default bench input.
pub fn region_circulating(db: &HybridDb, len: usize, seed: u64) -> Vec<u8> {
    let mut rng = Rng::seeded(seed);
    let mut out = Vec::with_capacity(len);
    let Some(region) = &db.region else {
        for _ in 0..len {
            out.push(rng.next_byte());
        }
        return out;
    };
    // Per in-region state, the byte values that stay inside.
    let staying: Vec<Vec<u8>> = (0..region.k)
        .map(|lane| {
            (0..=255u8)
                .filter(|&b| {
                    u32::from(region.gutter.vector(b).lane(lane as usize)) <= region.s_limit
                })
                .collect()
        })
        .collect();
    let mut state = db.start;
    for _ in 0..len {
        let b = if state <= region.s_limit {
            let stay = &staying[state as usize];
            if !stay.is_empty() && rng.below(1000) < 995 {
                *rng.choose(stay)
            } else {
                rng.next_byte()
            }
        } else {
            rng.next_byte()
        };
        state = db.outer.next(state, b);
        out.push(b);
    }
    out
}
