// SPDX-License-Identifier: Apache-2.0
#include "spdrag/eval.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "spdrag/error.hpp"
#include "spdrag/parallel.hpp"
#include "spdrag/prompt_format.hpp"
#include "spdrag/splitter.hpp"
#include "spdrag/strings.hpp"
#include "spdrag/subagent.hpp"

namespace spdrag {

namespace fs = std::filesystem;

std::string task_type_name(TaskType t) {
    switch (t) {
        case TaskType::spotlight_locating: return "spotlight_locating";
        case TaskType::comparison: return "comparison";
        case TaskType::clustering: return "clustering";
        case TaskType::chain_of_reasoning: return "chain_of_reasoning";
    }
    return "unknown";
}

std::string domain_name(Domain d) {
    return d == Domain::paper ? "paper" : "financial";
}

std::string system_name(SystemKind s) {
    switch (s) {
        case SystemKind::full_context: return "full-context";
        case SystemKind::normal_rag: return "normal-rag";
        case SystemKind::agentic_rag: return "agentic-rag";
        case SystemKind::spd_rag: return "spd-rag";
    }
    return "unknown";
}

TaskType parse_task_type(const std::string& name) {
    std::string n = to_lower(name);
    std::replace(n.begin(), n.end(), ' ', '_');
    std::replace(n.begin(), n.end(), '-', '_');
    if (n == "spotlight_locating" || n == "1") return TaskType::spotlight_locating;
    if (n == "comparison" || n == "2") return TaskType::comparison;
    if (n == "clustering" || n == "3") return TaskType::clustering;
    if (n == "chain_of_reasoning" || n == "4") return TaskType::chain_of_reasoning;
    throw validation_error("unknown task type: " + name);
}

Domain parse_domain(const std::string& name) {
    std::string n = to_lower(name);
    if (n == "paper" || n == "papers" || n == "academic") return Domain::paper;
    if (n == "financial" || n == "finance") return Domain::financial;
    throw validation_error("unknown domain: " + name);
}

SystemKind parse_system(const std::string& name) {
    std::string n = to_lower(name);
    std::replace(n.begin(), n.end(), '_', '-');
    if (n == "full-context") return SystemKind::full_context;
    if (n == "normal-rag") return SystemKind::normal_rag;
    if (n == "agentic-rag") return SystemKind::agentic_rag;
    if (n == "spd-rag") return SystemKind::spd_rag;
    throw usage_error("unknown system \"" + name +
                      "\"; valid systems: full-context, normal-rag, agentic-rag, spd-rag");
}

std::vector<SystemKind> all_systems() {
    return {SystemKind::full_context, SystemKind::normal_rag, SystemKind::agentic_rag,
            SystemKind::spd_rag};
}

namespace {

Document document_from_json(const nlohmann::json& j, const fs::path& base,
                            std::size_t position) {
    Document doc;
    if (j.is_string()) {
        fs::path p = j.get<std::string>();
        if (p.is_relative()) p = base / p;
        std::ifstream in(p);
        if (!in) throw io_error("cannot read referenced document: " + p.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        doc.id = p.filename().string();
        doc.name = doc.id;
        doc.text = buf.str();
        return doc;
    }
    doc.id = j.value("id", "doc-" + std::to_string(position));
    doc.name = j.value("name", doc.id);
    if (j.contains("path")) {
        fs::path p = j["path"].get<std::string>();
        if (p.is_relative()) p = base / p;
        std::ifstream in(p);
        if (!in) throw io_error("cannot read referenced document: " + p.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        doc.text = buf.str();
    } else {
        doc.text = j.value("text", "");
    }
    return doc;
}

}  // namespace

std::vector<EvalInstance> load_dataset_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot read dataset file: " + path);
    fs::path base = fs::path(path).parent_path();

    std::vector<EvalInstance> dataset;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded() || !j.is_object()) {
            throw io_error("dataset line " + std::to_string(line_no) +
                           " is not a JSON object");
        }
        EvalInstance instance;
        instance.id = j.value("id", "instance-" + std::to_string(line_no));
        instance.question = j.value("question", "");
        instance.gold_answer = j.value("gold_answer", "");
        if (instance.question.empty() || instance.gold_answer.empty()) {
            throw validation_error("dataset line " + std::to_string(line_no) +
                                   " needs question and gold_answer");
        }
        instance.task_type = parse_task_type(j.value("task_type", "spotlight_locating"));
        instance.domain = parse_domain(j.value("domain", "paper"));
        const char* doc_key = j.contains("documents") ? "documents" : "document_paths";
        if (!j.contains(doc_key) || !j[doc_key].is_array() || j[doc_key].empty()) {
            throw validation_error("dataset line " + std::to_string(line_no) +
                                   " has no documents");
        }
        std::size_t position = 0;
        for (const auto& dj : j[doc_key]) {
            instance.documents.push_back(document_from_json(dj, base, position++));
        }
        for (const auto& doc : instance.documents) {
            if (doc.text.empty()) {
                throw validation_error("dataset line " + std::to_string(line_no) +
                                       ": document " + doc.id + " has empty text");
            }
        }
        dataset.push_back(std::move(instance));
    }
    return dataset;
}

std::vector<EvalInstance> load_loong_jsonl(const std::string& path,
                                           const std::string& docs_dir) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot read dataset file: " + path);
    fs::path base = docs_dir.empty() ? fs::path(path).parent_path() : fs::path(docs_dir);

    std::vector<EvalInstance> dataset;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded() || !j.is_object()) continue;

        EvalInstance instance;
        instance.id = j.contains("id") && j["id"].is_string()
                          ? j["id"].get<std::string>()
                          : "loong-" + std::to_string(line_no);
        instance.question = j.value("question", j.value("instruction", ""));
        instance.gold_answer = j.value("answer", j.value("gold", ""));
        if (instance.question.empty() || instance.gold_answer.empty()) continue;

        if (j.contains("type")) {
            try {
                instance.task_type = parse_task_type(
                    j["type"].is_number()
                        ? std::to_string(j["type"].get<int>())
                        : j["type"].get<std::string>());
            } catch (const Error&) {
                instance.task_type = TaskType::spotlight_locating;
            }
        }
        if (j.contains("domain") || j.contains("source")) {
            try {
                instance.domain =
                    parse_domain(j.value("domain", j.value("source", "paper")));
            } catch (const Error&) {
                instance.domain = Domain::paper;
            }
        }

        const char* doc_key = j.contains("docs") ? "docs" : "doc";
        if (!j.contains(doc_key)) continue;
        std::size_t position = 0;
        auto add_doc = [&](const nlohmann::json& dj) {
            instance.documents.push_back(document_from_json(dj, base, position++));
        };
        if (j[doc_key].is_array()) {
            for (const auto& dj : j[doc_key]) add_doc(dj);
        } else {
            add_doc(j[doc_key]);
        }
        if (instance.documents.empty()) continue;
        dataset.push_back(std::move(instance));
    }
    return dataset;
}

EvalIndexes build_eval_indexes(const EvalInstance& instance, const ProviderSet& providers,
                               const Config& config) {
    SplitOptions split_options{config.chunking.chunk_size, config.chunking.chunk_overlap};
    EvalIndexes indexes;
    std::vector<Chunk> all_chunks;
    for (const auto& doc : instance.documents) {
        auto chunks = split_document(doc, split_options, *providers.counter);
        all_chunks.insert(all_chunks.end(), chunks.begin(), chunks.end());
        indexes.per_document.emplace(doc.id, build_collection(chunks, *providers.embedder));
    }
    indexes.global = build_collection(all_chunks, *providers.embedder);
    return indexes;
}

namespace {

std::string question_block(const EvalInstance& instance) {
    return "User query:\n" + instance.question + "\n\n";
}

SystemRun finish_run(const ProviderSet& providers, std::size_t trace_start,
                     std::string answer) {
    SystemRun run;
    run.answer = std::move(answer);
    auto entries = providers.trace->snapshot();
    run.trace.assign(entries.begin() + static_cast<std::ptrdiff_t>(trace_start),
                     entries.end());
    // stable order keeps downstream float sums reproducible
    run.trace = canonical_order(std::move(run.trace));
    return run;
}

}  // namespace

SystemRun run_full_context_baseline(const EvalInstance& instance, const ProviderSet& providers,
                                    const PromptLibrary& prompts, const Config& config) {
    std::size_t trace_start = providers.trace->size();

    std::size_t total_tokens = providers.counter->count(instance.question);
    for (const auto& doc : instance.documents) {
        total_tokens += providers.counter->count(doc.text);
    }
    if (total_tokens > config.eval.context_cap_tokens) {
        SystemRun run;
        run.skipped = true;
        run.skip_reason = "context overflow: " + std::to_string(total_tokens) + " tokens > cap " +
                          std::to_string(config.eval.context_cap_tokens);
        return run;
    }

    std::string user = question_block(instance);
    for (const auto& doc : instance.documents) {
        user += promptfmt::context_section("doc=" + doc.id + " name=" + doc.name, doc.text);
    }
    user += "\nAnswer the user query using only the context above.";

    ChatRequest request;
    request.system_prompt = prompts.baseline_answer;
    request.user_content = user;
    request.model_role = Role::baseline;
    TraceCtx ctx{Role::baseline, "full-context:" + instance.id, 1.0};
    ChatResponse response = providers.chat->chat(request, ctx);
    return finish_run(providers, trace_start, response.text);
}

SystemRun run_normal_rag(const EvalInstance& instance, const Collection& global_index,
                         const ProviderSet& providers, const PromptLibrary& prompts,
                         const Config& config) {
    std::size_t trace_start = providers.trace->size();

    TraceCtx embed_ctx{Role::baseline, "normal-rag:" + instance.id + ":embed", 1.0};
    Embedding query_embedding =
        providers.embedder->embed({instance.question}, embed_ctx).front();
    auto candidates = global_index.search(query_embedding, config.eval.normal_rag_k);

    std::vector<ScoredChunk> context;
    if (!candidates.empty()) {
        std::vector<std::string> texts;
        texts.reserve(candidates.size());
        for (const auto& c : candidates) texts.push_back(c.chunk.text);
        TraceCtx rerank_ctx{Role::baseline, "normal-rag:" + instance.id + ":rerank", 1.2};
        auto ranked = providers.reranker->rerank(instance.question, texts,
                                                 config.retrieval.top_n, rerank_ctx);
        for (const auto& r : ranked) context.push_back(candidates[r.original_position]);
    }

    std::string user = question_block(instance);
    for (const auto& c : context) {
        user += promptfmt::context_section(
            "doc=" + c.chunk.doc_id + " seq=" + std::to_string(c.chunk.seq), c.chunk.text);
    }
    user += "\nAnswer the user query using only the context above.";

    ChatRequest request;
    request.system_prompt = prompts.baseline_answer;
    request.user_content = user;
    request.model_role = Role::baseline;
    TraceCtx ctx{Role::baseline, "normal-rag:" + instance.id + ":answer", 2.0};
    ChatResponse response = providers.chat->chat(request, ctx);
    return finish_run(providers, trace_start, response.text);
}

SystemRun run_agentic_rag(const EvalInstance& instance, const Collection& global_index,
                          const ProviderSet& providers, const PromptLibrary& prompts,
                          const Config& config) {
    std::size_t trace_start = providers.trace->size();

    SubagentOptions options;
    options.max_searches = config.limits.agentic_max_iters;
    options.retrieve_k = config.retrieval.k;
    options.rerank_top_n = config.retrieval.top_n;
    options.role = Role::baseline;
    options.label_prefix = "agentic";
    options.lane_base = 10.0;

    Findings findings = run_agent_loop(instance.question, "global corpus", {}, global_index,
                                       providers, prompts.agentic, options);
    return finish_run(providers, trace_start, findings.summary);
}

SystemRun run_spd_rag(const EvalInstance& instance, const EvalIndexes& indexes,
                      const ProviderSet& providers, const PromptLibrary& prompts,
                      const Config& config) {
    std::size_t trace_start = providers.trace->size();
    std::map<std::string, const Collection*> collections;
    for (const auto& [id, collection] : indexes.per_document) {
        collections.emplace(id, &collection);
    }
    RunResult result =
        run_query(instance.question, instance.documents, collections, providers, prompts, config);
    SystemRun run = finish_run(providers, trace_start, result.answer);
    return run;
}

nlohmann::json InstanceOutcome::to_json() const {
    nlohmann::json j{{"instance_id", instance_id},
                     {"system", system_name(system)},
                     {"skipped", skipped},
                     {"metrics", metrics.to_json()}};
    if (score) j["score"] = *score;
    if (!reason.empty()) j["reason"] = reason;
    return j;
}

namespace {

RunMetrics metrics_from_trace(const RunTrace& trace, const PricingTable& pricing) {
    RunMetrics m;
    m.input_tokens = total_input_tokens(trace);
    m.output_tokens = total_output_tokens(trace);
    m.total_tokens = m.input_tokens + m.output_tokens;
    m.cost = compute_cost(trace, pricing);
    double first = std::numeric_limits<double>::infinity();
    double last = 0.0;
    for (const auto& e : trace) {
        first = std::min(first, e.started_at);
        last = std::max(last, e.finished_at);
    }
    m.latency_seconds = trace.empty() ? 0.0 : last - first;
    return m;
}

struct Accumulator {
    std::size_t n = 0;
    std::size_t scored = 0;
    std::size_t perfect = 0;
    std::size_t skipped = 0;
    std::size_t unscored = 0;
    double score_sum = 0.0;
    double input_sum = 0.0;
    double total_sum = 0.0;
    double cost_sum = 0.0;
    double latency_sum = 0.0;

    void add(const InstanceOutcome& outcome) {
        ++n;
        if (outcome.skipped) {
            ++skipped;
            return;
        }
        input_sum += static_cast<double>(outcome.metrics.input_tokens);
        total_sum += static_cast<double>(outcome.metrics.total_tokens);
        cost_sum += outcome.metrics.cost;
        latency_sum += outcome.metrics.latency_seconds;
        if (outcome.score) {
            ++scored;
            score_sum += *outcome.score;
            if (*outcome.score == 100) ++perfect;
        } else {
            ++unscored;
        }
    }
};

}  // namespace

EvalReport evaluate(const std::vector<SystemKind>& systems,
                    const std::vector<EvalInstance>& dataset, const Config& config,
                    const PromptLibrary& prompts, const ProviderMaker& make_providers) {
    if (dataset.empty()) throw validation_error("dataset must be non-empty");
    if (systems.empty()) throw validation_error("at least one system is required");

    std::vector<std::vector<InstanceOutcome>> outcomes(dataset.size());

    parallel_for(dataset.size(), config.eval.parallelism, [&](std::size_t i) {
        const EvalInstance& instance = dataset[i];

        // indexing is done once per instance, outside any system's accounting
        ProviderSet ingest_providers = make_providers(std::make_shared<TraceSink>());
        EvalIndexes indexes = build_eval_indexes(instance, ingest_providers, config);

        for (SystemKind system : systems) {
            InstanceOutcome outcome;
            outcome.instance_id = instance.id;
            outcome.system = system;

            ProviderSet providers = make_providers(std::make_shared<TraceSink>());
            SystemRun run;
            try {
                switch (system) {
                    case SystemKind::full_context:
                        run = run_full_context_baseline(instance, providers, prompts, config);
                        break;
                    case SystemKind::normal_rag:
                        run = run_normal_rag(instance, indexes.global, providers, prompts,
                                             config);
                        break;
                    case SystemKind::agentic_rag:
                        run = run_agentic_rag(instance, indexes.global, providers, prompts,
                                              config);
                        break;
                    case SystemKind::spd_rag:
                        run = run_spd_rag(instance, indexes, providers, prompts, config);
                        break;
                }
            } catch (const Error& e) {
                outcome.reason = std::string("run failed: ") + e.what();
                outcomes[i].push_back(std::move(outcome));
                continue;
            }

            if (run.skipped) {
                outcome.skipped = true;
                outcome.reason = run.skip_reason;
                outcomes[i].push_back(std::move(outcome));
                continue;
            }

            outcome.metrics = metrics_from_trace(run.trace, config.providers.pricing);

            // the judge is not part of any system; give it its own sink
            ProviderSet judge_providers = make_providers(std::make_shared<TraceSink>());
            try {
                TraceCtx judge_ctx{Role::judge,
                                   "judge:" + system_name(system) + ":" + instance.id,
                                   5000.0};
                outcome.score = judge_providers.judge->judge(instance.question,
                                                             instance.gold_answer,
                                                             run.answer, judge_ctx);
            } catch (const Error& e) {
                outcome.reason = std::string("judge failed: ") + e.what();
            }
            outcomes[i].push_back(std::move(outcome));
        }
    });

    EvalReport report;
    report.systems = systems;
    std::map<SystemKind, Accumulator> acc;
    std::map<SystemKind, std::map<TaskType, Accumulator>> task_acc;
    std::map<SystemKind, std::map<Domain, Accumulator>> domain_acc;

    for (std::size_t i = 0; i < dataset.size(); ++i) {
        for (const auto& outcome : outcomes[i]) {
            report.outcomes.push_back(outcome);
            acc[outcome.system].add(outcome);
            task_acc[outcome.system][dataset[i].task_type].add(outcome);
            domain_acc[outcome.system][dataset[i].domain].add(outcome);
        }
    }

    auto to_cell = [](const Accumulator& a) {
        CellAggregate cell;
        cell.n = a.n;
        cell.n_scored = a.scored;
        cell.avg_score = a.scored ? a.score_sum / static_cast<double>(a.scored) : 0.0;
        cell.perfect_rate =
            a.scored ? 100.0 * static_cast<double>(a.perfect) / static_cast<double>(a.scored)
                     : 0.0;
        return cell;
    };

    for (const auto& [system, a] : acc) {
        SystemAggregate agg;
        agg.n = a.n;
        agg.n_scored = a.scored;
        agg.n_perfect = a.perfect;
        agg.n_skipped = a.skipped;
        agg.n_unscored = a.unscored;
        std::size_t ran = a.n - a.skipped;
        agg.avg_score = a.scored ? a.score_sum / static_cast<double>(a.scored) : 0.0;
        agg.perfect_rate =
            a.scored ? 100.0 * static_cast<double>(a.perfect) / static_cast<double>(a.scored)
                     : 0.0;
        agg.avg_input_tokens = ran ? a.input_sum / static_cast<double>(ran) : 0.0;
        agg.avg_total_tokens = ran ? a.total_sum / static_cast<double>(ran) : 0.0;
        agg.avg_cost = ran ? a.cost_sum / static_cast<double>(ran) : 0.0;
        agg.avg_latency = ran ? a.latency_sum / static_cast<double>(ran) : 0.0;
        agg.score_per_dollar = agg.avg_cost > 0.0 ? agg.avg_score / agg.avg_cost : 0.0;
        report.per_system[system] = agg;
    }
    for (const auto& [system, cells] : task_acc) {
        for (const auto& [task, a] : cells) report.by_task[system][task] = to_cell(a);
    }
    for (const auto& [system, cells] : domain_acc) {
        for (const auto& [domain, a] : cells) report.by_domain[system][domain] = to_cell(a);
    }
    return report;
}

nlohmann::json EvalReport::to_json() const {
    nlohmann::json j;
    auto& systems_json = j["systems"] = nlohmann::json::array();
    for (SystemKind s : systems) systems_json.push_back(system_name(s));

    auto& per_system_json = j["per_system"] = nlohmann::json::object();
    for (const auto& [system, agg] : per_system) {
        per_system_json[system_name(system)] = {
            {"n", agg.n},
            {"n_scored", agg.n_scored},
            {"n_perfect", agg.n_perfect},
            {"n_skipped", agg.n_skipped},
            {"n_unscored", agg.n_unscored},
            {"avg_score", agg.avg_score},
            {"perfect_rate", agg.perfect_rate},
            {"avg_input_tokens", agg.avg_input_tokens},
            {"avg_total_tokens", agg.avg_total_tokens},
            {"avg_cost", agg.avg_cost},
            {"avg_latency", agg.avg_latency},
            {"score_per_dollar", agg.score_per_dollar},
        };
    }

    auto& by_task_json = j["by_task_type"] = nlohmann::json::object();
    for (const auto& [system, cells] : by_task) {
        auto& row = by_task_json[system_name(system)] = nlohmann::json::object();
        for (const auto& [task, cell] : cells) {
            row[task_type_name(task)] = {{"n", cell.n},
                                         {"n_scored", cell.n_scored},
                                         {"avg_score", cell.avg_score},
                                         {"perfect_rate", cell.perfect_rate}};
        }
    }
    auto& by_domain_json = j["by_domain"] = nlohmann::json::object();
    for (const auto& [system, cells] : by_domain) {
        auto& row = by_domain_json[system_name(system)] = nlohmann::json::object();
        for (const auto& [domain, cell] : cells) {
            row[domain_name(domain)] = {{"n", cell.n},
                                        {"n_scored", cell.n_scored},
                                        {"avg_score", cell.avg_score},
                                        {"perfect_rate", cell.perfect_rate}};
        }
    }

    auto& outcomes_json = j["outcomes"] = nlohmann::json::array();
    for (const auto& outcome : outcomes) outcomes_json.push_back(outcome.to_json());
    return j;
}

std::string EvalReport::to_table() const {
    std::ostringstream out;
    out << std::left << std::setw(14) << "system" << std::right << std::setw(7) << "n"
        << std::setw(10) << "avg" << std::setw(8) << "PR%" << std::setw(14) << "avg_in_tok"
        << std::setw(14) << "avg_tot_tok" << std::setw(12) << "avg_cost" << std::setw(12)
        << "avg_lat_s" << std::setw(12) << "score/$" << "\n";
    out << std::string(103, '-') << "\n";
    out << std::fixed;
    for (SystemKind system : systems) {
        auto it = per_system.find(system);
        if (it == per_system.end()) continue;
        const auto& agg = it->second;
        out << std::left << std::setw(14) << system_name(system) << std::right << std::setw(7)
            << agg.n << std::setw(10) << std::setprecision(1) << agg.avg_score << std::setw(8)
            << std::setprecision(1) << agg.perfect_rate << std::setw(14) << std::setprecision(0)
            << agg.avg_input_tokens << std::setw(14) << agg.avg_total_tokens << std::setw(12)
            << std::setprecision(6) << agg.avg_cost << std::setw(12) << std::setprecision(3)
            << agg.avg_latency << std::setw(12) << std::setprecision(1) << agg.score_per_dollar
            << "\n";
    }

    auto breakdown = [&](const std::string& title, auto names, const auto& table) {
        out << "\n" << title << " (avg score / PR%)\n";
        for (SystemKind system : systems) {
            auto row_it = table.find(system);
            if (row_it == table.end()) continue;
            out << std::left << std::setw(14) << system_name(system);
            for (const auto& [key, cell] : row_it->second) {
                out << "  " << names(key) << "=" << std::setprecision(1) << cell.avg_score
                    << "/" << cell.perfect_rate << "%";
            }
            out << "\n";
        }
    };
    breakdown("By task type", [](TaskType t) { return task_type_name(t); }, by_task);
    breakdown("By domain", [](Domain d) { return domain_name(d); }, by_domain);
    return out.str();
}

std::string EvalReport::to_csv() const {
    std::ostringstream out;
    out << "instance_id,system,score,skipped,reason,input_tokens,total_tokens,cost,"
           "latency_seconds\n";
    for (const auto& o : outcomes) {
        std::string reason = o.reason;
        std::replace(reason.begin(), reason.end(), ',', ';');
        std::replace(reason.begin(), reason.end(), '\n', ' ');
        out << o.instance_id << ',' << system_name(o.system) << ','
            << (o.score ? std::to_string(*o.score) : "") << ',' << (o.skipped ? "1" : "0")
            << ',' << reason << ',' << o.metrics.input_tokens << ',' << o.metrics.total_tokens
            << ',' << o.metrics.cost << ',' << o.metrics.latency_seconds << "\n";
    }
    return out.str();
}

}  // namespace spdrag
