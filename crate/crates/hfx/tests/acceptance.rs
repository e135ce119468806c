//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line. Run with `cargo test --test acceptance -- --nocapture` to see
//! the per-criterion report.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;

use common::*;
use hfx::rng::Rng;
use hfx::{
    assemble, batch_step, compile_pattern_set, deserialize, detect, find_earliest_escape,
    find_earliest_escape_linear, region_leakiness, serialize, CompileConfig, DecodeError,
    DetectorConfig, Dfa, Engine, EngineParams, GutterTable, HybridDb, MatchEvent, OuterTable,
    PatternId, RegionPlan, RegionTables, ShuffleTable, StreamState, Vector64, FORMAT_VERSION,
};

fn criterion(number: u32, name: &str, body: impl FnOnce()) {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(()) => println!("[acceptance] criterion {number} ({name}): PASS"),
        Err(panic) => {
            println!("[acceptance] criterion {number} ({name}): FAIL");
            resume_unwind(panic);
        }
    }
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hfx"))
}

fn temp_path(name: &str) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("hfx-acceptance-{}-{name}", std::process::id()));
    path
}

// --- 1 -----------------------------------------------------------------

#[test]
fn criterion_1_golden_automaton() {
    criterion(1, "golden automaton", || {
        let patterns = &["mode+l"];
        let dfa = compile(patterns);
        assert_eq!(dfa.state_count(), 6, "minimized state count");

        // State 0: 'm' -> 1, every other byte -> 0.
        for b in 0..=255u8 {
            assert_eq!(
                dfa.next(0, b),
                if b == b'm' { 1 } else { 0 },
                "row 0 byte {b:#04x}"
            );
        }
        assert_eq!(dfa.next(2, b'd'), 3);
        assert_eq!(dfa.next(3, b'e'), 4);
        assert_eq!(dfa.next(4, b'e'), 4);
        assert_eq!(dfa.next(4, b'l'), 5);
        assert_eq!(dfa.next(5, b'm'), 1);

        // Library-level scan.
        let db = build_db(
            patterns,
            &DetectorConfig::default(),
            EngineParams::default(),
        );
        for engine in [Engine::Scalar, Engine::Hybrid] {
            let (_, events) = scan_events(&db, engine, b"hmodel");
            assert_eq!(
                events,
                vec![MatchEvent {
                    pattern: PatternId(0),
                    offset: 6
                }],
                "{engine:?}"
            );
        }

        // End-to-end through the CLI.
        let rules = temp_path("golden.rules");
        let dbfile = temp_path("golden.hfxd");
        let input = temp_path("golden.bin");
        std::fs::write(&rules, "mode+l\n").unwrap();
        std::fs::write(&input, b"hmodel").unwrap();
        let out = bin()
            .args(["compile", "--rules"])
            .arg(&rules)
            .arg("--out")
            .arg(&dbfile)
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        let out = bin()
            .args(["scan", "--db"])
            .arg(&dbfile)
            .arg("--input")
            .arg(&input)
            .output()
            .unwrap();
        assert!(out.status.success());
        let stdout = String::from_utf8(out.stdout).unwrap();
        let events: Vec<&str> = stdout
            .lines()
            .filter(|l| l.starts_with("{\"pattern\""))
            .collect();
        assert_eq!(events, vec![r#"{"pattern":0,"offset":6}"#]);
    });
}

// --- 2 -----------------------------------------------------------------

#[test]
fn criterion_2_oracle_equivalence_exhaustive() {
    criterion(
        2,
        "oracle equivalence, exhaustive <=12 over {a,b,c}",
        || {
            let sets: &[(&[&str], u32)] = &[
                (&["abc"], 9),
                (&["a[ab]c", "cc"], 4),
                (&["(a|b)c{2,3}"], 3),
                (&["ab*c"], 2),
                (&["[abc]{3}a", "ba"], 5),
            ];
            for &(patterns, batch) in sets {
                let db = build_db(
                    patterns,
                    &permissive_detector(),
                    EngineParams {
                        batch,
                        ..EngineParams::default()
                    },
                );
                assert!(db.region.is_some(), "region must engage for {patterns:?}");
                let mut scalar_events: Vec<MatchEvent> = Vec::new();
                let mut hybrid_events: Vec<MatchEvent> = Vec::new();
                for_all_inputs(b"abc", 12, |input| {
                    scalar_events.clear();
                    hybrid_events.clear();
                    let scalar_final =
                        hfx::scalar_scan(&db, StreamState::start_of(&db), input, &mut |ev| {
                            scalar_events.push(ev)
                        });
                    let hybrid_final =
                        hfx::hybrid_scan(&db, StreamState::start_of(&db), input, &mut |ev| {
                            hybrid_events.push(ev)
                        });
                    assert_eq!(
                        hybrid_final,
                        scalar_final,
                        "final state, {patterns:?} on {:?}",
                        String::from_utf8_lossy(input)
                    );
                    assert_eq!(
                        hybrid_events,
                        scalar_events,
                        "events, {patterns:?} on {:?}",
                        String::from_utf8_lossy(input)
                    );
                });
            }
        },
    );
}

// --- 3 -----------------------------------------------------------------

/// Fifty synthetic rules: keyword cores over a narrow alphabet plus
/// classes and quantifiers, shaped so the default detector accepts a
/// region (verified below).
const SYNTH50: &[&str] = &[
    "getata[ab]",
    "postdata",
    "headcheck",
    "putvalue",
    "delroute",
    "optflags",
    "tracemode",
    "connectup",
    "getbbcd",
    "getcafe",
    "postmeta",
    "postnote",
    "headlamp",
    "putmetal",
    "delegate+",
    "optionals?",
    "tracepath",
    "getdd[cd]x",
    "postbb",
    "headbb",
    "aagetaa",
    "bbpostbb",
    "ccheadcc",
    "ddputdd",
    "aadelaa",
    "bboptbb",
    "cctracecc",
    "ddconnectdd",
    "abcabc",
    "bcdbcd",
    "cdacda",
    "dabdab",
    "a[bc]cd",
    "b[cd]da",
    "c[da]ab",
    "d[ab]bc",
    "aab{2}cc",
    "bbc{2}dd",
    "ccd{2}aa",
    "dda{2}bb",
    "acbd",
    "bdca",
    "cadb",
    "dbac",
    "aacc",
    "bbdd",
    "ccaa",
    "ddbb",
    "abcd",
    "dcba",
];

#[test]
fn criterion_3_oracle_equivalence_randomized() {
    criterion(
        3,
        "oracle equivalence, 10k random inputs on 50 rules",
        || {
            let db = build_db(SYNTH50, &DetectorConfig::default(), EngineParams::default());
            assert!(
                db.region.is_some(),
                "default detector must accept a region here"
            );
            let gen = hfx::workload::CaseGen::new(&db);
            let mut rng = Rng::seeded(0x5eed);
            for case in 0..10_000usize {
                let mut input = gen.gen(&mut rng, 512);
                input.truncate(4096);
                let (scalar_final, scalar_events) = scan_events(&db, Engine::Scalar, &input);
                let (hybrid_final, hybrid_events) = scan_events(&db, Engine::Hybrid, &input);
                assert_eq!(hybrid_final, scalar_final, "case {case}: final state");
                assert_eq!(hybrid_events, scalar_events, "case {case}: events");
            }
        },
    );
}

// --- 4 -----------------------------------------------------------------

/// Constructed automaton whose only escape edge fires at batch positions
/// 6..=8 on the chosen inputs: 'a' cycles 0->1->2->3->0, 'b' escapes
/// from state 1 to outer state 4, 'c' moves 4 to the accept 5.
fn chain2_trap() -> (Dfa, RegionPlan) {
    let rows: [[u32; 4]; 6] = [
        // a, b, c, other
        [1, 0, 0, 0],
        [2, 4, 0, 0],
        [3, 0, 0, 0],
        [0, 0, 0, 0],
        [4, 4, 5, 4],
        [4, 4, 5, 4],
    ];
    let mut table = Vec::with_capacity(6 * 256);
    for row in rows {
        for b in 0..=255u8 {
            table.push(match b {
                b'a' => row[0],
                b'b' => row[1],
                b'c' => row[2],
                _ => row[3],
            });
        }
    }
    let accepts: BTreeMap<u32, BTreeSet<PatternId>> =
        [(5u32, BTreeSet::from([PatternId(0)]))].into();
    let dfa = Dfa::from_parts(6, table, 0, accepts);
    let plan = RegionPlan {
        members: vec![0, 1, 2, 3],
        start: 0,
        stickiness_sum: 0,
        leakiness: 0.0,
    };
    (dfa, plan)
}

#[test]
fn criterion_4_gutter_regression() {
    criterion(
        4,
        "out-region error: gutter fixes, ablation diverges",
        || {
            let (dfa, plan) = chain2_trap();
            let db = assemble_with_plan(&dfa, &plan, 9);
            assert_eq!(db.region.as_ref().unwrap().s_limit, 3);

            // Escape at batch position 6, accept just after the batch.
            let input = b"aaaaabaaac";
            let (scalar_final, scalar_events) = scan_events(&db, Engine::Scalar, input);
            assert_eq!(
                scalar_events,
                vec![MatchEvent {
                    pattern: PatternId(0),
                    offset: 10
                }],
                "oracle sees the match"
            );
            let (hybrid_final, hybrid_events) = scan_events(&db, Engine::Hybrid, input);
            assert_eq!(hybrid_final, scalar_final, "gutter engine final state");
            assert_eq!(hybrid_events, scalar_events, "gutter engine events");

            let (ablate_final, ablate_events) = scan_events(&db, Engine::HybridNoGutter, input);
            assert!(
                ablate_events != scalar_events || ablate_final != scalar_final,
                "ablation must diverge on the chain-2 escape"
            );
            assert!(
                ablate_events.is_empty(),
                "ablation silently drops the match"
            );

            // The gutter engine stays oracle-exact across random inputs on
            // this trap automaton, escapes included.
            let mut rng = Rng::seeded(404);
            for _ in 0..2_000 {
                let len = rng.below(64) as usize;
                let input: Vec<u8> = (0..len).map(|_| b"aabc"[rng.below(4) as usize]).collect();
                let (s_final, s_events) = scan_events(&db, Engine::Scalar, &input);
                let (h_final, h_events) = scan_events(&db, Engine::Hybrid, &input);
                assert_eq!((h_final, h_events), (s_final, s_events));
            }
        },
    );
}

// --- 5 -----------------------------------------------------------------

#[test]
fn criterion_5_earliest_escape_exhaustive() {
    criterion(5, "earliest-escape detection, exhaustive", || {
        for limit in [0u8, 5, 62] {
            let hi = u32::from(limit) + 4;
            for a in 0..hi {
                for b in 0..hi {
                    for c in 0..hi {
                        for d in 0..hi {
                            let states = [a as u8, b as u8, c as u8, d as u8];
                            assert_eq!(
                                find_earliest_escape(states, limit),
                                find_earliest_escape_linear(&states, limit),
                                "states {states:?} limit {limit}"
                            );
                        }
                    }
                }
            }
        }
    });
}

// --- 6 -----------------------------------------------------------------

#[test]
fn criterion_6_leakiness_model() {
    criterion(
        6,
        "leakiness: exact value and Monte-Carlo agreement",
        || {
            // Exact: one-state region, 200 staying bytes, 56 escapes.
            let mut table: Vec<u32> = (0..256).map(|b| if b < 200 { 0 } else { 1 }).collect();
            table.extend(std::iter::repeat_n(1, 256));
            let dfa = Dfa::from_parts(2, table, 0, BTreeMap::new());
            assert_eq!(region_leakiness(&dfa, &[0], 0, 1), 0.21875);

            // Monte-Carlo agreement on 20 random small automata.
            let mut rng = Rng::seeded(0xacce55);
            const TRIALS: u64 = 100_000;
            for case in 0..20 {
                let n = 4 + rng.below(7) as u32;
                let mut table = Vec::with_capacity(n as usize * 256);
                for s in 0..n {
                    for b in 0..256u32 {
                        // Byte 0 chains forward so every state is reachable.
                        let t = if b == 0 {
                            (s + 1) % n
                        } else {
                            rng.below(u64::from(n)) as u32
                        };
                        table.push(t);
                    }
                }
                let dfa = Dfa::from_parts(n, table, 0, BTreeMap::new());
                let m = 1 + rng.below(u64::from(n) - 1) as u32;
                let region: Vec<u32> = (0..m).collect();
                let depth = 1 + rng.below(9) as u32;
                let predicted = region_leakiness(&dfa, &region, 0, depth);

                let mut escapes = 0u64;
                for _ in 0..TRIALS {
                    let mut state = 0u32;
                    for _ in 0..depth {
                        state = dfa.next(state, rng.next_byte());
                        if state >= m {
                            escapes += 1;
                            break;
                        }
                    }
                }
                let observed = escapes as f64 / TRIALS as f64;
                let se = (predicted * (1.0 - predicted) / TRIALS as f64).sqrt();
                assert!(
                    (observed - predicted).abs() <= 3.0 * se + 1e-9,
                    "case {case}: predicted {predicted} observed {observed} (se {se})"
                );
            }
        },
    );
}

// --- 7 -----------------------------------------------------------------

#[test]
fn criterion_7_parameter_plumbing() {
    criterion(
        7,
        "default parameters and the lambda=0 degenerate case",
        || {
            let rules = temp_path("params.rules");
            std::fs::write(&rules, "mode+l\n").unwrap();

            // Defaults are in effect per inspect output.
            let out = bin()
                .args(["inspect", "--rules"])
                .arg(&rules)
                .output()
                .unwrap();
            assert!(out.status.success());
            let stdout = String::from_utf8(out.stdout).unwrap();
            assert!(
                stdout.contains("params: sigma=30 lambda=0.05 leak_depth=9 batch=9"),
                "inspect output missing defaults:\n{stdout}"
            );

            // Library defaults agree.
            let cfg = DetectorConfig::default();
            assert_eq!((cfg.sigma, cfg.lambda, cfg.depth), (30, 0.05, 9));
            assert_eq!(EngineParams::default().batch, 9);

            // lambda = 0 accepts nothing: scalar-only database.
            let dbfile = temp_path("params.hfxd");
            let out = bin()
                .args(["compile", "--lambda", "0", "--rules"])
                .arg(&rules)
                .arg("--out")
                .arg(&dbfile)
                .output()
                .unwrap();
            assert!(out.status.success());
            let db = deserialize(&std::fs::read(&dbfile).unwrap()).unwrap();
            assert!(
                db.region.is_none(),
                "lambda=0 must yield a scalar-only database"
            );
            assert_eq!(db.s_limit(), -1);
        },
    );
}

// --- 8 -----------------------------------------------------------------

/// A structurally valid random database: optional region, consistent
/// tables, accepts only outside the region.
fn random_db(rng: &mut Rng) -> HybridDb {
    let with_region = rng.below(4) != 0;
    if !with_region {
        let rows = 1 + rng.below(40) as u32;
        let mut table = Vec::with_capacity(rows as usize * 256);
        for _ in 0..rows {
            for _ in 0..256 {
                table.push(rng.below(u64::from(rows)) as u32);
            }
        }
        let mut accepts = vec![Vec::new(); rows as usize];
        for s in 0..rows {
            if rng.below(5) == 0 {
                let mut pats: Vec<PatternId> = (0..1 + rng.below(3))
                    .map(|_| PatternId(rng.below(50) as u32))
                    .collect();
                pats.sort();
                pats.dedup();
                accepts[s as usize] = pats;
            }
        }
        return HybridDb {
            version: FORMAT_VERSION,
            outer: OuterTable::from_raw(rows, table),
            region: None,
            start: rng.below(u64::from(rows)) as u32,
            accepts,
            params: EngineParams {
                batch: 1 + rng.below(16) as u32,
                sigma: rng.below(100) as u32,
                lambda: (rng.below(101) as f64) / 100.0,
                depth: 1 + rng.below(12) as u32,
            },
        };
    }

    let k = 2 + rng.below(62) as u32;
    let outer_count = 1 + rng.below(40) as u32;
    let rows = 64 + outer_count;
    let live: Vec<u32> = (0..k).chain(64..rows).collect();
    let mut table = vec![0u32; rows as usize * 256];
    let mut shuffle = Box::new([Vector64::splat(63); 256]);
    let mut gutter = Box::new([Vector64::splat(63); 256]);
    for state in 0..rows {
        for b in 0..256usize {
            let slot = state as usize * 256 + b;
            if state == 63 {
                table[slot] = 63;
            } else {
                table[slot] = live[rng.below(live.len() as u64) as usize];
            }
        }
    }
    for b in 0..256usize {
        for lane in 0..k {
            let succ = table[lane as usize * 256 + b];
            if succ < k {
                gutter[b].0[lane as usize] = succ as u8;
                shuffle[b].0[lane as usize] = succ as u8;
            } else {
                gutter[b].0[lane as usize] = 63;
                shuffle[b].0[lane as usize] = (succ & 63) as u8;
            }
        }
    }
    let mut accepts = vec![Vec::new(); rows as usize];
    for s in 64..rows {
        if rng.below(3) == 0 {
            let mut pats: Vec<PatternId> = (0..1 + rng.below(3))
                .map(|_| PatternId(rng.below(50) as u32))
                .collect();
            pats.sort();
            pats.dedup();
            accepts[s as usize] = pats;
        }
    }
    HybridDb {
        version: FORMAT_VERSION,
        outer: OuterTable::from_raw(rows, table),
        region: Some(RegionTables {
            k,
            s_limit: k - 1,
            shuffle: ShuffleTable(shuffle),
            gutter: GutterTable(gutter),
        }),
        start: live[rng.below(live.len() as u64) as usize],
        accepts,
        params: EngineParams {
            batch: 1 + rng.below(16) as u32,
            sigma: rng.below(100) as u32,
            lambda: (rng.below(101) as f64) / 100.0,
            depth: 1 + rng.below(12) as u32,
        },
    }
}

#[test]
fn criterion_8_serialization() {
    criterion(8, "serialization round-trip and corruption errors", || {
        let mut rng = Rng::seeded(8);
        for case in 0..100 {
            let db = random_db(&mut rng);
            let bytes = serialize(&db);
            let back =
                deserialize(&bytes).unwrap_or_else(|e| panic!("case {case}: decode failed: {e}"));
            assert_eq!(back, db, "case {case}: structural round-trip");
            assert_eq!(serialize(&back), bytes, "case {case}: byte round-trip");
        }

        let db = build_db(
            &["mode+l"],
            &DetectorConfig::default(),
            EngineParams::default(),
        );
        let bytes = serialize(&db);

        let mut bad_magic = bytes.clone();
        bad_magic[1] ^= 0x20;
        assert_eq!(deserialize(&bad_magic), Err(DecodeError::BadMagic));

        let mut bad_version = bytes.clone();
        bad_version[4..8].copy_from_slice(&7u32.to_le_bytes());
        assert_eq!(
            deserialize(&bad_version),
            Err(DecodeError::UnsupportedVersion { version: 7 })
        );

        for cut in [5usize, 12, 40, bytes.len() / 3, bytes.len() - 1] {
            assert_eq!(
                deserialize(&bytes[..cut]),
                Err(DecodeError::Truncated),
                "cut at {cut}"
            );
        }
    });
}

// --- 9 -----------------------------------------------------------------

#[test]
fn criterion_9_informative_throughput() {
    criterion(9, "informative throughput ratio (not asserted)", || {
        let rules = temp_path("bench.rules");
        let dbfile = temp_path("bench.hfxd");
        std::fs::write(&rules, "mode+l\n").unwrap();
        let out = bin()
            .args(["compile", "--rules"])
            .arg(&rules)
            .arg("--out")
            .arg(&dbfile)
            .output()
            .unwrap();
        assert!(out.status.success());
        let out = bin()
            .args(["bench", "--repeat", "5", "--db"])
            .arg(&dbfile)
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        let stdout = String::from_utf8(out.stdout).unwrap();
        let ratio_line = stdout
            .lines()
            .find(|l| l.starts_with("ratio hybrid/scalar:"))
            .expect("bench must report the ratio");
        let shuffle_capable =
            cfg!(target_arch = "x86_64") && std::arch::is_x86_feature_detected!("avx512vbmi");
        println!(
            "[acceptance] informative: {ratio_line} (hardware byte-shuffle available: \
             {shuffle_capable}; test profile, see README for release numbers)"
        );
    });
}

// --- criterion-adjacent: batch_step golden example ----------------------

#[test]
fn golden_batch_escape_example() {
    // Not an enumerated criterion, but the canonical worked example:
    // "modelmode" escapes at position 5 with replay from state 4.
    let db = build_db(
        &["mode+l"],
        &DetectorConfig::default(),
        EngineParams::default(),
    );
    let outcome = batch_step(&db, 0, b"modelmode");
    assert_eq!(
        outcome,
        hfx::BatchOutcome::Escaped {
            index: 5,
            replay_state: 4
        }
    );

    // And the assembled region matches the golden-table facts.
    let region = db.region.as_ref().unwrap();
    assert_eq!(region.k, 5);
    assert_eq!(region.s_limit, 4);
    assert_eq!(region.gutter.vector(b'l').lane(4), 63);
    for b in 0..=255u8 {
        assert_eq!(region.gutter.vector(b).lane(63), 63);
    }
}

#[test]
fn compose_chain_golden_example() {
    // Gutter vectors for 'd' then 'e': lane 2 walks 2 -'d'-> 3 -'e'-> 4.
    let db = build_db(
        &["mode+l"],
        &DetectorConfig::default(),
        EngineParams::default(),
    );
    let region = db.region.as_ref().unwrap();
    let composed = hfx::compose_chain(&[*region.gutter.vector(b'd'), *region.gutter.vector(b'e')]);
    assert_eq!(composed.lane(2), 4);
}

// --- cross-check: detect() plumbing used by the suite -------------------

#[test]
fn synthetic_ruleset_compiles_with_region() {
    let dfa = compile_pattern_set(SYNTH50, &CompileConfig::default()).unwrap();
    let plan = detect(&dfa, &DetectorConfig::default()).expect("region accepted");
    assert!(plan.members.len() >= 2);
    let db = assemble(&dfa, Some(&plan), EngineParams::default()).unwrap();
    assert!(db.region.is_some());
}
