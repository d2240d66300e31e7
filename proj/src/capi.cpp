// SPDX-License-Identifier: Apache-2.0
#include "spdrag.h"

#include <cstring>
#include <string>
#include <vector>

#include "spdrag/engine.hpp"
#include "spdrag/error.hpp"

struct spdrag_engine {
    spdrag::Engine impl;
};

namespace {

thread_local std::string g_last_error;

constexpr const char* kVersion = "0.1.0";

spdrag_status status_from(const spdrag::Error& e) {
    switch (e.code()) {
        case spdrag::ErrorCode::config: return SPDRAG_ERR_CONFIG;
        case spdrag::ErrorCode::io: return SPDRAG_ERR_IO;
        case spdrag::ErrorCode::validation: return SPDRAG_ERR_VALIDATION;
        case spdrag::ErrorCode::provider: return SPDRAG_ERR_PROVIDER;
        case spdrag::ErrorCode::usage: return SPDRAG_ERR_USAGE;
        case spdrag::ErrorCode::runtime: return SPDRAG_ERR_RUNTIME;
    }
    return SPDRAG_ERR_RUNTIME;
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
spdrag_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return SPDRAG_OK;
    } catch (const spdrag::Error& e) {
        g_last_error = e.what();
        return status_from(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SPDRAG_ERR_RUNTIME;
    } catch (...) {
        g_last_error = "unknown error";
        return SPDRAG_ERR_RUNTIME;
    }
}

}  // namespace

extern "C" {

const char* spdrag_version(void) { return kVersion; }

const char* spdrag_last_error(void) { return g_last_error.c_str(); }

spdrag_status spdrag_engine_create(const char* config_path, const char* const* overrides,
                                   size_t n_overrides, spdrag_engine** out_engine) {
    if (out_engine == nullptr) {
        g_last_error = "out_engine must not be null";
        return SPDRAG_ERR_INVALID_ARGUMENT;
    }
    *out_engine = nullptr;
    return guarded([&] {
        spdrag::Config config = config_path != nullptr && config_path[0] != '\0'
                                    ? spdrag::Config::load_file(config_path)
                                    : spdrag::Config::defaults();
        std::vector<std::string> override_list;
        for (size_t i = 0; i < n_overrides; ++i) {
            if (overrides == nullptr || overrides[i] == nullptr) {
                throw spdrag::usage_error("null override string");
            }
            override_list.emplace_back(overrides[i]);
        }
        config.apply_overrides(override_list);
        *out_engine = new spdrag_engine{spdrag::Engine(std::move(config))};
    });
}

void spdrag_engine_destroy(spdrag_engine* engine) { delete engine; }

spdrag_status spdrag_engine_config_json(spdrag_engine* engine, char** out_json) {
    if (engine == nullptr || out_json == nullptr) {
        g_last_error = "engine and out_json must not be null";
        return SPDRAG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { *out_json = copy_string(engine->impl.config().to_json().dump(2)); });
}

spdrag_status spdrag_ingest(spdrag_engine* engine, const char* corpus_path,
                            char** out_report_json) {
    if (engine == nullptr || corpus_path == nullptr || out_report_json == nullptr) {
        g_last_error = "engine, corpus_path and out_report_json must not be null";
        return SPDRAG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        *out_report_json = copy_string(engine->impl.ingest(corpus_path).dump(2));
    });
}

spdrag_status spdrag_query(spdrag_engine* engine, const char* question,
                           const char* trace_out_path, char** out_result_json) {
    if (engine == nullptr || question == nullptr || out_result_json == nullptr) {
        g_last_error = "engine, question and out_result_json must not be null";
        return SPDRAG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        std::string trace_out = trace_out_path != nullptr ? trace_out_path : "";
        *out_result_json = copy_string(engine->impl.query(question, trace_out).dump(2));
    });
}

spdrag_status spdrag_eval(spdrag_engine* engine, const char* dataset_path,
                          const char* systems_csv, int loong_format, char** out_json) {
    if (engine == nullptr || dataset_path == nullptr || out_json == nullptr) {
        g_last_error = "engine, dataset_path and out_json must not be null";
        return SPDRAG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        std::vector<std::string> systems;
        if (systems_csv != nullptr && systems_csv[0] != '\0') {
            std::string csv(systems_csv);
            std::size_t pos = 0;
            while (pos <= csv.size()) {
                std::size_t comma = csv.find(',', pos);
                if (comma == std::string::npos) comma = csv.size();
                std::string name = csv.substr(pos, comma - pos);
                if (!name.empty()) systems.push_back(name);
                pos = comma + 1;
            }
        }
        *out_json = copy_string(
            engine->impl.eval(dataset_path, systems, loong_format != 0).dump(2));
    });
}

spdrag_status spdrag_trace_summary(spdrag_engine* engine, const char* trace_path,
                                   char** out_json) {
    if (engine == nullptr || trace_path == nullptr || out_json == nullptr) {
        g_last_error = "engine, trace_path and out_json must not be null";
        return SPDRAG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        *out_json = copy_string(engine->impl.trace_summary(trace_path).dump(2));
    });
}

void spdrag_string_free(char* s) { std::free(s); }

}  // extern "C"
