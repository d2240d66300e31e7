/* SPDX-License-Identifier: Apache-2.0
 *
 * C API for the spdrag engine. All functions return a spdrag_status; on
 * failure spdrag_last_error() holds a message for the calling thread.
 * Strings returned through out-parameters are heap-allocated and must be
 * released with spdrag_string_free().
 */
#ifndef SPDRAG_H
#define SPDRAG_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct spdrag_engine spdrag_engine;

typedef enum spdrag_status {
    SPDRAG_OK = 0,
    SPDRAG_ERR_RUNTIME = 1,
    SPDRAG_ERR_CONFIG = 2,
    SPDRAG_ERR_IO = 3,
    SPDRAG_ERR_VALIDATION = 4,
    SPDRAG_ERR_PROVIDER = 5,
    SPDRAG_ERR_USAGE = 6,
    SPDRAG_ERR_INVALID_ARGUMENT = 7
} spdrag_status;

const char* spdrag_version(void);

/* Message describing the most recent failure on this thread ("" if none). */
const char* spdrag_last_error(void);

/* config_path may be NULL for built-in defaults. overrides is an array of
 * n_overrides "section.key=value" strings applied on top of the file. */
spdrag_status spdrag_engine_create(const char* config_path, const char* const* overrides,
                                   size_t n_overrides, spdrag_engine** out_engine);

void spdrag_engine_destroy(spdrag_engine* engine);

/* The engine's effective configuration as a JSON document. */
spdrag_status spdrag_engine_config_json(spdrag_engine* engine, char** out_json);

/* Chunk, embed and persist every document under corpus_path into the
 * configured index directory. out_report_json describes what happened. */
spdrag_status spdrag_ingest(spdrag_engine* engine, const char* corpus_path,
                            char** out_report_json);

/* Answer a question over the ingested corpus. trace_out_path may be NULL;
 * when set, the call trace is written there as JSONL. out_result_json holds
 * the answer, per-document findings, plan, trace and metrics. */
spdrag_status spdrag_query(spdrag_engine* engine, const char* question,
                           const char* trace_out_path, char** out_result_json);

/* Run systems (comma-separated names, NULL or "" for all) over a JSONL
 * dataset. loong_format != 0 selects the adapter for the public benchmark
 * layout. out_json holds {"report":..., "table":..., "csv":...}. */
spdrag_status spdrag_eval(spdrag_engine* engine, const char* dataset_path,
                          const char* systems_csv, int loong_format, char** out_json);

/* Aggregate a trace JSONL file into per-role call and token counts. */
spdrag_status spdrag_trace_summary(spdrag_engine* engine, const char* trace_path,
                                   char** out_json);

void spdrag_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* SPDRAG_H */
