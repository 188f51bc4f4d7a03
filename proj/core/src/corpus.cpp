#include "compsum/corpus.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>
#include <unordered_set>
#include <utility>

#include <json.hpp>

#include "compsum/errors.hpp"

namespace compsum {

namespace {

using nlohmann::json;

json parse_line(const std::string& path, std::size_t line_number,
                const std::string& line) {
  try {
    return json::parse(line);
  } catch (const json::exception& e) {
    throw ValidationError(path + " line " + std::to_string(line_number) + ": " +
                          e.what());
  }
}

SentenceRecord sentence_from_json(const json& j, const std::string& doc_id,
                                  std::size_t sent_idx) {
  auto context = [&](const std::string& message) {
    return ValidationError("document '" + doc_id + "' sentence " +
                           std::to_string(sent_idx) + ": " + message);
  };
  if (!j.contains("tokens") || !j.contains("parse")) {
    throw context("sentences need tokens and parse");
  }
  std::vector<std::string> tokens = j["tokens"].get<std::vector<std::string>>();
  ParseTree tree;
  try {
    tree = parse_bracketed(j["parse"].get<std::string>());
  } catch (const ParseError& e) {
    throw context(e.what());
  }
  if (tree.tokens.size() != tokens.size()) {
    throw context("parse has " + std::to_string(tree.tokens.size()) +
                  " leaves but tokens lists " + std::to_string(tokens.size()));
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tree.tokens[i].surface != tokens[i]) {
      throw context("token " + std::to_string(i) + " is '" + tokens[i] +
                    "' but the parse leaf is '" + tree.tokens[i].surface + "'");
    }
  }
  return SentenceRecord::from_tree(std::move(tree));
}

json span_json(const CandidateSpan& span) {
  json j;
  j["rule"] = std::string(rule_name(span.rule));
  j["primary"] = {span.primary.start, span.primary.end};
  json secondary = json::array();
  for (const TokenRange& r : span.secondary) {
    secondary.push_back({r.start, r.end});
  }
  j["secondary"] = std::move(secondary);
  j["tag"] = span.constituent_tag;
  return j;
}

CandidateSpan span_from(const json& j) {
  CandidateSpan span;
  std::optional<RuleId> rule = rule_from_name(j.at("rule").get<std::string>());
  if (!rule.has_value()) {
    throw ValidationError("unknown rule name '" + j.at("rule").get<std::string>() + "'");
  }
  span.rule = *rule;
  auto primary = j.at("primary").get<std::vector<std::size_t>>();
  if (primary.size() != 2) {
    throw ValidationError("span primary must be [start, end]");
  }
  span.primary = {primary[0], primary[1]};
  for (const json& r : j.at("secondary")) {
    auto range = r.get<std::vector<std::size_t>>();
    if (range.size() != 2) {
      throw ValidationError("span secondary entries must be [start, end]");
    }
    span.secondary.push_back({range[0], range[1]});
  }
  span.constituent_tag = j.at("tag").get<std::string>();
  return span;
}

double mean_rouge_f1(const EvalReport& report) {
  return (report.rouge1.f1 + report.rouge2.f1 + report.rougeL.f1) / 3.0;
}

json report_json(const EvalReport& report) {
  auto score_json = [](const RougeScore& s) {
    return json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
  };
  json j;
  j["documents"] = report.documents;
  j["rouge1"] = score_json(report.rouge1);
  j["rouge2"] = score_json(report.rouge2);
  j["rougeL"] = score_json(report.rougeL);
  j["mean_compression_ratio"] = report.mean_compression_ratio;
  if (report.mean_rejection_rate.has_value()) {
    j["mean_rejection_rate"] = *report.mean_rejection_rate;
  }
  return j;
}

}  // namespace

const DocumentRecord* CorpusFile::find(const std::string& id) const {
  for (const DocumentRecord& record : records) {
    if (record.id == id) return &record;
  }
  return nullptr;
}

CorpusFile read_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open corpus: " + path);
  }
  CorpusFile corpus;
  corpus.path = path;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    json row = parse_line(path, line_number, line);
    if (!row.contains("id") || !row.contains("sentences")) {
      throw ValidationError(path + " line " + std::to_string(line_number) +
                            ": rows need id and sentences");
    }
    DocumentRecord doc;
    doc.id = row["id"].get<std::string>();
    if (!seen_ids.insert(doc.id).second) {
      throw ValidationError(path + " line " + std::to_string(line_number) +
                            ": duplicate document id '" + doc.id + "'");
    }
    if (row["sentences"].empty()) {
      throw ValidationError(path + " line " + std::to_string(line_number) +
                            ": document '" + doc.id + "' has no sentences");
    }
    std::size_t sent_idx = 0;
    for (const json& sentence : row["sentences"]) {
      doc.sentences.push_back(sentence_from_json(sentence, doc.id, sent_idx));
      ++sent_idx;
    }
    if (row.contains("reference")) {
      doc.reference = row["reference"].get<std::vector<std::vector<std::string>>>();
    }
    corpus.records.push_back(std::move(doc));
  }
  return corpus;
}

std::vector<ParallelPair> read_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open pairs file: " + path);
  }
  std::vector<ParallelPair> pairs;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    json row = parse_line(path, line_number, line);
    if (!row.contains("long") || !row.contains("short")) {
      throw ValidationError(path + " line " + std::to_string(line_number) +
                            ": rows need long and short");
    }
    ParallelPair pair;
    pair.id = row.contains("id") ? row["id"].get<std::string>()
                                 : "p" + std::to_string(line_number);
    if (!seen_ids.insert(pair.id).second) {
      throw ValidationError(path + " line " + std::to_string(line_number) +
                            ": duplicate pair id '" + pair.id + "'");
    }
    pair.long_form = sentence_from_json(row["long"], pair.id, 0);
    pair.short_form = row["short"].get<std::vector<std::string>>();
    if (pair.short_form.empty()) {
      throw ValidationError(path + " line " + std::to_string(line_number) +
                            ": pair '" + pair.id + "' has an empty short side");
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

EvalReport evaluate(const CorpusFile& corpus,
                    const std::vector<CompressiveSummary>& summaries,
                    const RougeConfig& cfg) {
  if (summaries.empty()) {
    throw ValidationError("evaluate: no summaries given");
  }
  std::vector<std::string> missing;
  for (const CompressiveSummary& summary : summaries) {
    const DocumentRecord* doc = corpus.find(summary.doc_id);
    if (doc == nullptr || !doc->reference.has_value()) {
      missing.push_back(summary.doc_id);
    }
  }
  if (!missing.empty()) {
    std::string joined;
    for (const std::string& id : missing) {
      if (!joined.empty()) joined += ", ";
      joined += id;
    }
    throw ValidationError("evaluate: no reference for document(s): " + joined);
  }

  EvalReport report;
  report.documents = summaries.size();
  double rejection_sum = 0.0;
  std::size_t rejection_count = 0;
  auto add = [](RougeScore& acc, const RougeScore& s) {
    acc.precision += s.precision;
    acc.recall += s.recall;
    acc.f1 += s.f1;
  };
  for (const CompressiveSummary& summary : summaries) {
    const DocumentRecord* doc = corpus.find(summary.doc_id);
    std::vector<std::string> text;
    for (const auto& sentence : summary.text) {
      text.insert(text.end(), sentence.begin(), sentence.end());
    }
    RougeSuite suite = rouge_suite(text, flatten_reference(*doc), cfg);
    add(report.rouge1, suite.r1);
    add(report.rouge2, suite.r2);
    add(report.rougeL, suite.rl);
    report.mean_compression_ratio += summary.compression_ratio;
    if (summary.rejection_rate.has_value()) {
      rejection_sum += *summary.rejection_rate;
      ++rejection_count;
    }
  }
  const double n = static_cast<double>(summaries.size());
  auto scale = [n](RougeScore& s) {
    s.precision /= n;
    s.recall /= n;
    s.f1 /= n;
  };
  scale(report.rouge1);
  scale(report.rouge2);
  scale(report.rougeL);
  report.mean_compression_ratio /= n;
  if (rejection_count > 0) {
    report.mean_rejection_rate = rejection_sum / static_cast<double>(rejection_count);
  }
  return report;
}

std::string eval_report_json(const EvalReport& report) {
  return report_json(report).dump(2);
}

std::string eval_report_table(const EvalReport& report) {
  std::ostringstream out;
  char buffer[160];
  out << "metric       precision    recall        f1\n";
  auto row = [&](const char* name, const RougeScore& s) {
    std::snprintf(buffer, sizeof(buffer), "%-10s %11.4f %9.4f %9.4f\n", name,
                  s.precision, s.recall, s.f1);
    out << buffer;
  };
  row("rouge-1", report.rouge1);
  row("rouge-2", report.rouge2);
  row("rouge-L", report.rougeL);
  std::snprintf(buffer, sizeof(buffer), "documents             %zu\n",
                report.documents);
  out << buffer;
  std::snprintf(buffer, sizeof(buffer), "compression ratio     %.4f\n",
                report.mean_compression_ratio);
  out << buffer;
  if (report.mean_rejection_rate.has_value()) {
    std::snprintf(buffer, sizeof(buffer), "rejection rate        %.4f\n",
                  *report.mean_rejection_rate);
    out << buffer;
  } else {
    out << "rejection rate        n/a\n";
  }
  return out.str();
}

std::vector<CompressiveSummary> summarize_corpus(const CorpusFile& corpus,
                                                 const ScoreProvider& scores,
                                                 const PipelineConfig& cfg,
                                                 std::size_t jobs) {
  cfg.validate();
  const std::size_t n = corpus.records.size();
  std::vector<CompressiveSummary> out(n);
  if (n == 0) return out;

  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = summarize(corpus.records[i], scores, cfg);
    }
    return out;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w]() {
      try {
        while (true) {
          std::size_t i = next.fetch_add(1);
          if (i >= n) break;
          out[i] = summarize(corpus.records[i], scores, cfg);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& worker : workers) worker.join();
  for (const std::exception_ptr& error : errors) {
    if (error) std::rethrow_exception(error);
  }
  return out;
}

SweepResult sweep_lambda_s(const CorpusFile& corpus, const ScoreProvider& scores,
                           PipelineConfig cfg, const RougeConfig& rouge_cfg,
                           double grid_lo, double grid_hi, double step,
                           std::size_t jobs) {
  if (step <= 0.0 || grid_hi < grid_lo) {
    throw ContractViolation("sweep_lambda_s: grid must be increasing");
  }
  SweepResult result;
  const std::size_t points =
      static_cast<std::size_t>(std::llround((grid_hi - grid_lo) / step)) + 1;
  for (std::size_t i = 0; i < points; ++i) {
    result.grid.push_back(grid_lo + static_cast<double>(i) * step);
  }

  double best = -1.0;
  for (double lambda : result.grid) {
    cfg.lambda_s = lambda;
    std::vector<CompressiveSummary> summaries =
        summarize_corpus(corpus, scores, cfg, jobs);
    EvalReport report = evaluate(corpus, summaries, rouge_cfg);
    double value = mean_rouge_f1(report);
    if (value >= best) {  // ties resolve to the larger lambda
      best = value;
      result.best_lambda = lambda;
    }
    result.rouge_at.push_back(std::move(report));
  }
  return result;
}

std::string sweep_result_json(const SweepResult& sweep) {
  json j;
  j["grid"] = sweep.grid;
  json at = json::array();
  for (const EvalReport& report : sweep.rouge_at) {
    at.push_back(report_json(report));
  }
  j["rouge_at"] = std::move(at);
  j["best_lambda"] = sweep.best_lambda;
  return j.dump(2);
}

std::string span_to_json(const CandidateSpan& span) { return span_json(span).dump(); }

CandidateSpan span_from_json(const std::string& text) {
  try {
    return span_from(json::parse(text));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed span: ") + e.what());
  }
}

void write_candidates(std::ostream& out, const std::string& doc_id,
                      std::size_t sent_idx, const std::vector<CandidateSpan>& spans) {
  for (const CandidateSpan& span : spans) {
    json j;
    j["doc_id"] = doc_id;
    j["sent_idx"] = sent_idx;
    j["span"] = span_json(span);
    out << j.dump() << "\n";
  }
}

void write_span_labels(std::ostream& out, const std::vector<LabeledSpanRecord>& labels) {
  for (const LabeledSpanRecord& record : labels) {
    json j;
    j["doc_id"] = record.doc_id;
    j["sent_idx"] = record.sent_idx;
    j["span"] = span_json(record.span);
    j["label"] = std::string(oracle_label_name(record.label));
    out << j.dump() << "\n";
  }
}

std::vector<LabeledSpanRecord> read_span_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open labels file: " + path);
  }
  std::vector<LabeledSpanRecord> out;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    json row = parse_line(path, line_number, line);
    LabeledSpanRecord record;
    try {
      record.doc_id = row.at("doc_id").get<std::string>();
      record.sent_idx = row.at("sent_idx").get<std::size_t>();
      record.span = span_from(row.at("span"));
      std::string label = row.at("label").get<std::string>();
      if (label == "delete") {
        record.label = OracleLabel::Delete;
      } else if (label == "keep") {
        record.label = OracleLabel::Keep;
      } else {
        throw ValidationError("label must be 'delete' or 'keep', got '" + label + "'");
      }
    } catch (const json::exception& e) {
      throw ValidationError(path + " line " + std::to_string(line_number) + ": " +
                            e.what());
    }
    out.push_back(std::move(record));
  }
  return out;
}

void write_extraction_oracle(std::ostream& out, const std::string& doc_id,
                             const ExtractionOracle& oracle) {
  json j;
  j["doc_id"] = doc_id;
  j["selected"] = oracle.selected;
  j["objective"] = oracle.objective_value;
  out << j.dump() << "\n";
}

std::vector<ExtractionRecord> read_extraction_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open extraction file: " + path);
  }
  std::vector<ExtractionRecord> out;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    json row = parse_line(path, line_number, line);
    ExtractionRecord record;
    try {
      record.doc_id = row.at("doc_id").get<std::string>();
      record.selected = row.at("selected").get<std::vector<std::size_t>>();
      record.objective = row.value("objective", 0.0);
    } catch (const json::exception& e) {
      throw ValidationError(path + " line " + std::to_string(line_number) + ": " +
                            e.what());
    }
    out.push_back(std::move(record));
  }
  return out;
}

void write_summaries(std::ostream& out, const std::vector<CompressiveSummary>& summaries) {
  for (const CompressiveSummary& summary : summaries) {
    json j;
    j["doc_id"] = summary.doc_id;
    j["selected"] = summary.selected;
    j["deleted"] = summary.deleted;
    j["text"] = summary.text;
    j["compression_ratio"] = summary.compression_ratio;
    if (summary.rejection_rate.has_value()) {
      j["rejection_rate"] = *summary.rejection_rate;
    }
    out << j.dump() << "\n";
  }
}

std::vector<CompressiveSummary> read_summaries(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open summaries file: " + path);
  }
  std::vector<CompressiveSummary> out;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    json row = parse_line(path, line_number, line);
    CompressiveSummary summary;
    try {
      summary.doc_id = row.at("doc_id").get<std::string>();
      summary.selected = row.at("selected").get<std::vector<std::size_t>>();
      summary.deleted = row.at("deleted").get<std::vector<std::vector<std::size_t>>>();
      summary.text = row.at("text").get<std::vector<std::vector<std::string>>>();
      summary.compression_ratio = row.value("compression_ratio", 0.0);
      if (row.contains("rejection_rate")) {
        summary.rejection_rate = row["rejection_rate"].get<double>();
      }
    } catch (const json::exception& e) {
      throw ValidationError(path + " line " + std::to_string(line_number) + ": " +
                            e.what());
    }
    out.push_back(std::move(summary));
  }
  return out;
}

}  // namespace compsum
