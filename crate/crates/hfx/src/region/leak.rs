//! Edge bundles and depth-bounded region leakiness.

use crate::byteset::ByteSet;
use crate::dfa::Dfa;
use crate::nfa::StateId;

/// All transitions from one source to one destination, grouped as a set
/// of byte labels. The bundles out of a state partition the 256 byte
/// values, so their widths sum to 256.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeBundle {
    pub source: StateId,
    pub dest: StateId,
    pub bytes: ByteSet,
}

impl EdgeBundle {
    pub fn width(&self) -> u32 {
        self.bytes.len()
    }
}

/// Probability that a uniformly random byte takes this bundle.
pub fn transit_probability(bundle: &EdgeBundle) -> f64 {
    f64::from(bundle.width()) / 256.0
}

/// The out-bundles of `source`, ordered by destination id.
pub fn edge_bundles(dfa: &Dfa, source: StateId) -> Vec<EdgeBundle> {
    let mut by_dest: std::collections::BTreeMap<StateId, ByteSet> =
        std::collections::BTreeMap::new();
    for (b, &dest) in dfa.row(source).iter().enumerate() {
        by_dest
            .entry(dest)
            .or_insert(ByteSet::EMPTY)
            .insert(b as u8);
    }
    by_dest
        .into_iter()
        .map(|(dest, bytes)| EdgeBundle {
            source,
            dest,
            bytes,
        })
        .collect()
}

/// Depth-bounded leakiness: the probability that a walk from `start`
/// under uniformly random bytes leaves `region` within `depth` steps.
///
/// Level zero scores states outside the region as 1 and inside as 0;
/// each further level folds in one more transition via the bundle
/// probabilities. The result is non-decreasing in `depth` and lies in
/// [0, 1].
pub fn region_leakiness(dfa: &Dfa, region: &[StateId], start: StateId, depth: u32) -> f64 {
    assert!(depth >= 1, "leak evaluation depth must be at least 1");
    let n = dfa.state_count() as usize;
    let mut in_region = vec![false; n];
    for &s in region {
        in_region[s as usize] = true;
    }
    assert!(in_region[start as usize], "start must belong to the region");

    // Bundles are only needed for region states; escapes contribute a
    // constant factor of 1 at every level.
    let bundles: Vec<Vec<(f64, StateId)>> = region
        .iter()
        .map(|&s| {
            edge_bundles(dfa, s)
                .into_iter()
                .map(|bundle| (transit_probability(&bundle), bundle.dest))
                .collect()
        })
        .collect();
    let index_of: std::collections::HashMap<StateId, usize> =
        region.iter().enumerate().map(|(i, &s)| (s, i)).collect();

    let mut level = vec![0.0f64; region.len()];
    let mut next = vec![0.0f64; region.len()];
    for _ in 0..depth {
        for (i, outs) in bundles.iter().enumerate() {
            let mut acc = 0.0;
            for &(p, dest) in outs {
                let dest_score = if in_region[dest as usize] {
                    level[index_of[&dest]]
                } else {
                    1.0
                };
                acc += p * dest_score;
            }
            next[i] = acc;
        }
        std::mem::swap(&mut level, &mut next);
    }
    level[index_of[&start]]
}
