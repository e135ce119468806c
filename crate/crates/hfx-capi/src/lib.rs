//! C ABI for the hfx matching engine: opaque handles, status codes, and
//! a match callback, so other languages can compile, persist and scan.
//!
//! The generated header lands in `include/hfx.h`. All functions are
//! thread-compatible: a database may be shared across threads, each
//! stream belongs to one scan at a time.

use std::ffi::{c_char, c_void, CStr, CString};
use std::ptr;

use hfx::{
    assemble, compile_pattern_set, deserialize, detect, parse_rule_file, scan_stream, serialize,
    CompileConfig, DetectorConfig, Engine, EngineParams, HybridDb, RegionMode, StreamState,
};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HfxStatus {
    HfxOk = 0,
    HfxErrNullArgument = 1,
    HfxErrInvalidArgument = 2,
    HfxErrCompile = 3,
    HfxErrBadDatabase = 4,
    HfxErrStateMismatch = 5,
}

/// Region detection mode for compilation.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HfxRegionMode {
    HfxRegionHyper = 0,
    HfxRegionRandom = 1,
    HfxRegionNone = 2,
}

/// Engine selection for scans.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HfxEngine {
    HfxEngineHybrid = 0,
    HfxEngineScalar = 1,
}

/// Compilation options. Use `hfx_compile_options_default` to initialize,
/// then override fields as needed.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HfxCompileOptions {
    /// Stickiness-sum threshold an SCC must exceed.
    pub sigma: u32,
    /// Leakiness acceptance threshold in [0, 1].
    pub lambda: f64,
    /// Leakiness evaluation depth (>= 1).
    pub leak_depth: u32,
    /// Batch length for in-region transitions (>= 1).
    pub batch: u32,
    pub region_mode: HfxRegionMode,
    /// Seed for random region mode.
    pub seed: u64,
}

/// Compiled pattern database (opaque).
pub struct HfxDatabase {
    db: HybridDb,
}

/// Scanning cursor for one input stream (opaque).
pub struct HfxStream {
    owner: *const HfxDatabase,
    state: StreamState,
}

/// Called once per match with the pattern id, the end offset (bytes
/// consumed when the accept state was entered, absolute across a
/// stream), and the caller's context pointer.
pub type HfxMatchCallback =
    Option<unsafe extern "C" fn(pattern: u32, end_offset: u64, context: *mut c_void)>;

#[no_mangle]
pub extern "C" fn hfx_compile_options_default() -> HfxCompileOptions {
    HfxCompileOptions {
        sigma: 30,
        lambda: 0.05,
        leak_depth: 9,
        batch: 9,
        region_mode: HfxRegionMode::HfxRegionHyper,
        seed: 0,
    }
}

fn fill_error(out_error: *mut *mut c_char, message: &str) {
    if out_error.is_null() {
        return;
    }
    let c =
        CString::new(message.replace('\0', " ")).unwrap_or_else(|_| CString::new("error").unwrap());
    // SAFETY: caller promised out_error points to a writable pointer.
    unsafe { *out_error = c.into_raw() };
}

/// Compiles rule text (one regex per line, `#` comments and blank lines
/// ignored) into a database.
///
/// On success writes a new handle to `out_db` and returns `HfxOk`. On
/// failure, if `out_error` is non-null it receives a message that must
/// be released with `hfx_error_free`.
///
/// # Safety
/// `rules_text` must be a valid NUL-terminated string; `out_db` must be
/// a valid pointer; `options` may be null for defaults.
#[no_mangle]
pub unsafe extern "C" fn hfx_compile(
    rules_text: *const c_char,
    options: *const HfxCompileOptions,
    out_db: *mut *mut HfxDatabase,
    out_error: *mut *mut c_char,
) -> HfxStatus {
    if rules_text.is_null() || out_db.is_null() {
        return HfxStatus::HfxErrNullArgument;
    }
    let text = match CStr::from_ptr(rules_text).to_str() {
        Ok(text) => text,
        Err(_) => {
            fill_error(out_error, "rules text is not valid UTF-8");
            return HfxStatus::HfxErrInvalidArgument;
        }
    };
    let opts = if options.is_null() {
        hfx_compile_options_default()
    } else {
        *options
    };
    let detector = DetectorConfig {
        sigma: opts.sigma,
        lambda: opts.lambda,
        depth: opts.leak_depth,
        mode: match opts.region_mode {
            HfxRegionMode::HfxRegionHyper => RegionMode::Hyper,
            HfxRegionMode::HfxRegionRandom => RegionMode::Random,
            HfxRegionMode::HfxRegionNone => RegionMode::None,
        },
        seed: opts.seed,
        ..DetectorConfig::default()
    };
    if detector.validate().is_err() || opts.batch < 1 {
        fill_error(out_error, "invalid detector or batch parameters");
        return HfxStatus::HfxErrInvalidArgument;
    }

    let patterns = parse_rule_file(text);
    if patterns.is_empty() {
        fill_error(out_error, "no patterns");
        return HfxStatus::HfxErrCompile;
    }
    let dfa = match compile_pattern_set(&patterns, &CompileConfig::default()) {
        Ok(dfa) => dfa,
        Err(err) => {
            fill_error(out_error, &err.to_string());
            return HfxStatus::HfxErrCompile;
        }
    };
    let plan = detect(&dfa, &detector);
    let params = EngineParams {
        batch: opts.batch,
        sigma: opts.sigma,
        lambda: opts.lambda,
        depth: opts.leak_depth,
    };
    match assemble(&dfa, plan.as_ref(), params) {
        Ok(db) => {
            *out_db = Box::into_raw(Box::new(HfxDatabase { db }));
            HfxStatus::HfxOk
        }
        Err(err) => {
            fill_error(out_error, &err.to_string());
            HfxStatus::HfxErrCompile
        }
    }
}

/// Releases an error message returned by `hfx_compile`.
///
/// # Safety
/// `message` must have been produced by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hfx_error_free(message: *mut c_char) {
    if !message.is_null() {
        drop(CString::from_raw(message));
    }
}

/// Releases a database handle.
///
/// # Safety
/// `db` must come from this library and have no live streams.
#[no_mangle]
pub unsafe extern "C" fn hfx_database_free(db: *mut HfxDatabase) {
    if !db.is_null() {
        drop(Box::from_raw(db));
    }
}

/// Number of hyper-region states in the database, 0 when scalar-only.
///
/// # Safety
/// `db` must be a live database handle.
#[no_mangle]
pub unsafe extern "C" fn hfx_database_region_size(db: *const HfxDatabase) -> u32 {
    if db.is_null() {
        return 0;
    }
    (*db).db.region.as_ref().map_or(0, |r| r.k)
}

/// Serializes the database; writes a heap buffer to `out_bytes`/`out_len`
/// that must be released with `hfx_bytes_free`.
///
/// # Safety
/// All pointers must be valid; `db` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hfx_database_serialize(
    db: *const HfxDatabase,
    out_bytes: *mut *mut u8,
    out_len: *mut usize,
) -> HfxStatus {
    if db.is_null() || out_bytes.is_null() || out_len.is_null() {
        return HfxStatus::HfxErrNullArgument;
    }
    let bytes = serialize(&(*db).db).into_boxed_slice();
    *out_len = bytes.len();
    *out_bytes = Box::into_raw(bytes) as *mut u8;
    HfxStatus::HfxOk
}

/// Releases a buffer returned by `hfx_database_serialize`.
///
/// # Safety
/// `bytes`/`len` must describe a buffer from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hfx_bytes_free(bytes: *mut u8, len: usize) {
    if !bytes.is_null() {
        drop(Box::from_raw(ptr::slice_from_raw_parts_mut(bytes, len)));
    }
}

/// Rebuilds a database from serialized bytes.
///
/// # Safety
/// `bytes` must point to `len` readable bytes; `out_db` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hfx_database_deserialize(
    bytes: *const u8,
    len: usize,
    out_db: *mut *mut HfxDatabase,
) -> HfxStatus {
    if bytes.is_null() || out_db.is_null() {
        return HfxStatus::HfxErrNullArgument;
    }
    match deserialize(std::slice::from_raw_parts(bytes, len)) {
        Ok(db) => {
            *out_db = Box::into_raw(Box::new(HfxDatabase { db }));
            HfxStatus::HfxOk
        }
        Err(_) => HfxStatus::HfxErrBadDatabase,
    }
}

fn engine_of(engine: HfxEngine) -> Engine {
    match engine {
        HfxEngine::HfxEngineHybrid => Engine::Hybrid,
        HfxEngine::HfxEngineScalar => Engine::Scalar,
    }
}

unsafe fn run_scan(
    db: &HybridDb,
    state: StreamState,
    data: *const u8,
    len: usize,
    engine: Engine,
    on_match: HfxMatchCallback,
    context: *mut c_void,
) -> Result<StreamState, HfxStatus> {
    let input = if len == 0 {
        &[][..]
    } else {
        std::slice::from_raw_parts(data, len)
    };
    scan_stream(db, state, input, engine, &mut |ev| {
        if let Some(cb) = on_match {
            cb(ev.pattern.0, ev.offset, context);
        }
    })
    .map_err(|_| HfxStatus::HfxErrStateMismatch)
}

/// Scans one whole buffer from the start state, invoking `on_match` per
/// match event in order.
///
/// # Safety
/// `db` must be live; `data` must point to `len` readable bytes (may be
/// null only when `len` is 0); the callback must not unwind.
#[no_mangle]
pub unsafe extern "C" fn hfx_scan(
    db: *const HfxDatabase,
    data: *const u8,
    len: usize,
    engine: HfxEngine,
    on_match: HfxMatchCallback,
    context: *mut c_void,
) -> HfxStatus {
    if db.is_null() || (data.is_null() && len != 0) {
        return HfxStatus::HfxErrNullArgument;
    }
    let handle = &(*db).db;
    match run_scan(
        handle,
        StreamState::start_of(handle),
        data,
        len,
        engine_of(engine),
        on_match,
        context,
    ) {
        Ok(_) => HfxStatus::HfxOk,
        Err(status) => status,
    }
}

/// Opens a stream cursor positioned at the start state.
///
/// # Safety
/// `db` must outlive the stream; `out_stream` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hfx_stream_open(
    db: *const HfxDatabase,
    out_stream: *mut *mut HfxStream,
) -> HfxStatus {
    if db.is_null() || out_stream.is_null() {
        return HfxStatus::HfxErrNullArgument;
    }
    let state = StreamState::start_of(&(*db).db);
    *out_stream = Box::into_raw(Box::new(HfxStream { owner: db, state }));
    HfxStatus::HfxOk
}

/// Feeds one chunk to a stream. Match offsets are absolute across all
/// chunks fed so far; matches spanning chunk boundaries are reported
/// exactly as if the chunks were one buffer.
///
/// # Safety
/// As `hfx_scan`; additionally `stream` must have been opened from `db`.
#[no_mangle]
pub unsafe extern "C" fn hfx_stream_scan(
    db: *const HfxDatabase,
    stream: *mut HfxStream,
    data: *const u8,
    len: usize,
    engine: HfxEngine,
    on_match: HfxMatchCallback,
    context: *mut c_void,
) -> HfxStatus {
    if db.is_null() || stream.is_null() || (data.is_null() && len != 0) {
        return HfxStatus::HfxErrNullArgument;
    }
    if (*stream).owner != db {
        return HfxStatus::HfxErrStateMismatch;
    }
    let handle = &(*db).db;
    match run_scan(
        handle,
        (*stream).state,
        data,
        len,
        engine_of(engine),
        on_match,
        context,
    ) {
        Ok(state) => {
            (*stream).state = state;
            HfxStatus::HfxOk
        }
        Err(status) => status,
    }
}

/// Releases a stream.
///
/// # Safety
/// `stream` must come from `hfx_stream_open` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hfx_stream_free(stream: *mut HfxStream) {
    if !stream.is_null() {
        drop(Box::from_raw(stream));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn hfx_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
