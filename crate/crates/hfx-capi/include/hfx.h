#ifndef HFX_H
#define HFX_H

/* Generated by cbindgen from the hfx-capi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Region detection mode for compilation.
 */
typedef enum {
  HFX_REGION_HYPER = 0,
  HFX_REGION_RANDOM = 1,
  HFX_REGION_NONE = 2,
} HfxRegionMode;

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum {
  HFX_OK = 0,
  HFX_ERR_NULL_ARGUMENT = 1,
  HFX_ERR_INVALID_ARGUMENT = 2,
  HFX_ERR_COMPILE = 3,
  HFX_ERR_BAD_DATABASE = 4,
  HFX_ERR_STATE_MISMATCH = 5,
} HfxStatus;

/**
 * Engine selection for scans.
 */
typedef enum {
  HFX_ENGINE_HYBRID = 0,
  HFX_ENGINE_SCALAR = 1,
} HfxEngine;

/**
 * Compiled pattern database (opaque).
 */
typedef struct HfxDatabase HfxDatabase;

/**
 * Scanning cursor for one input stream (opaque).
 */
typedef struct HfxStream HfxStream;

/**
 * Compilation options. Use `hfx_compile_options_default` to initialize,
 * then override fields as needed.
 */
typedef struct {
  /**
   * Stickiness-sum threshold an SCC must exceed.
   */
  uint32_t sigma;
  /**
   * Leakiness acceptance threshold in [0, 1].
   */
  double lambda;
  /**
   * Leakiness evaluation depth (>= 1).
   */
  uint32_t leak_depth;
  /**
   * Batch length for in-region transitions (>= 1).
   */
  uint32_t batch;
  HfxRegionMode region_mode;
  /**
   * Seed for random region mode.
   */
  uint64_t seed;
} HfxCompileOptions;

/**
 * Called once per match with the pattern id, the end offset (bytes
 * consumed when the accept state was entered, absolute across a
 * stream), and the caller's context pointer.
 */
typedef void (*HfxMatchCallback)(uint32_t pattern, uint64_t end_offset, void *context);

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

HfxCompileOptions hfx_compile_options_default(void);

/**
 * Compiles rule text (one regex per line, `#` comments and blank lines
 * ignored) into a database.
 *
 * On success writes a new handle to `out_db` and returns `HfxOk`. On
 * failure, if `out_error` is non-null it receives a message that must
 * be released with `hfx_error_free`.
 *
 * # Safety
 * `rules_text` must be a valid NUL-terminated string; `out_db` must be
 * a valid pointer; `options` may be null for defaults.
 */
HfxStatus hfx_compile(const char *rules_text,
                      const HfxCompileOptions *options,
                      HfxDatabase **out_db,
                      char **out_error);

/**
 * Releases an error message returned by `hfx_compile`.
 *
 * # Safety
 * `message` must have been produced by this library and not yet freed.
 */
void hfx_error_free(char *message);

/**
 * Releases a database handle.
 *
 * # Safety
 * `db` must come from this library and have no live streams.
 */
void hfx_database_free(HfxDatabase *db);

/**
 * Number of hyper-region states in the database, 0 when scalar-only.
 *
 * # Safety
 * `db` must be a live database handle.
 */
uint32_t hfx_database_region_size(const HfxDatabase *db);

/**
 * Serializes the database; writes a heap buffer to `out_bytes`/`out_len`
 * that must be released with `hfx_bytes_free`.
 *
 * # Safety
 * All pointers must be valid; `db` must be a live handle.
 */
HfxStatus hfx_database_serialize(const HfxDatabase *db, uint8_t **out_bytes, uintptr_t *out_len);

/**
 * Releases a buffer returned by `hfx_database_serialize`.
 *
 * # Safety
 * `bytes`/`len` must describe a buffer from this library, not yet freed.
 */
void hfx_bytes_free(uint8_t *bytes, uintptr_t len);

/**
 * Rebuilds a database from serialized bytes.
 *
 * # Safety
 * `bytes` must point to `len` readable bytes; `out_db` must be valid.
 */
HfxStatus hfx_database_deserialize(const uint8_t *bytes, uintptr_t len, HfxDatabase **out_db);

/**
 * Scans one whole buffer from the start state, invoking `on_match` per
 * match event in order.
 *
 * # Safety
 * `db` must be live; `data` must point to `len` readable bytes (may be
 * null only when `len` is 0); the callback must not unwind.
 */
HfxStatus hfx_scan(const HfxDatabase *db,
                   const uint8_t *data,
                   uintptr_t len,
                   HfxEngine engine,
                   HfxMatchCallback on_match,
                   void *context);

/**
 * Opens a stream cursor positioned at the start state.
 *
 * # Safety
 * `db` must outlive the stream; `out_stream` must be valid.
 */
HfxStatus hfx_stream_open(const HfxDatabase *db, HfxStream **out_stream);

/**
 * Feeds one chunk to a stream. Match offsets are absolute across all
 * chunks fed so far; matches spanning chunk boundaries are reported
 * exactly as if the chunks were one buffer.
 *
 * # Safety
 * As `hfx_scan`; additionally `stream` must have been opened from `db`.
 */
HfxStatus hfx_stream_scan(const HfxDatabase *db,
                          HfxStream *stream,
                          const uint8_t *data,
                          uintptr_t len,
                          HfxEngine engine,
                          HfxMatchCallback on_match,
                          void *context);

/**
 * Releases a stream.
 *
 * # Safety
 * `stream` must come from `hfx_stream_open` and not be freed twice.
 */
void hfx_stream_free(HfxStream *stream);

/**
 * Library version as a static string.
 */
const char *hfx_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HFX_H */
