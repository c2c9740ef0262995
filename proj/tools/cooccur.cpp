// cooccur: build positional indexes over text corpora, evaluate
// boolean/proximity queries, answer synonym questions by co-occurrence
// scoring, run association-rating tasks, and cross-check the index against
// the naive-scan oracle.
//
// Exit codes: 0 ok, 1 evaluation failure, 2 usage or parse error.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cooccur/corpus.hpp"
#include "cooccur/errors.hpp"
#include "cooccur/index.hpp"
#include "cooccur/oracle.hpp"
#include "cooccur/query.hpp"
#include "cooccur/rating.hpp"
#include "cooccur/scoring.hpp"
#include "cooccur/stub.hpp"
#include "cooccur/verify.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitEvalFailure = 1;
constexpr int kExitUsage = 2;

int resolve_near_window(std::optional<int> flag) {
  if (flag) {
    if (*flag < 1) throw cooccur::IoError("--near-window must be >= 1");
    return *flag;
  }
  if (const char* env = std::getenv("COOCCUR_NEAR_WINDOW")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) {
      throw cooccur::IoError(
          std::string("COOCCUR_NEAR_WINDOW must be a positive integer, got '") +
          env + "'");
    }
    return static_cast<int>(v);
  }
  return cooccur::kDefaultNearWindow;
}

cooccur::Corpus ingest(const std::string& path, bool lines) {
  return lines ? cooccur::ingest_lines(path) : cooccur::ingest_directory(path);
}

cooccur::ScoreVariant parse_variant(const std::string& v) {
  if (v == "1") return cooccur::ScoreVariant::s1;
  if (v == "2") return cooccur::ScoreVariant::s2;
  if (v == "3") return cooccur::ScoreVariant::s3;
  if (v == "4") return cooccur::ScoreVariant::s4;
  if (v == "pmi") return cooccur::ScoreVariant::pmi;
  throw cooccur::IoError("unknown variant '" + v +
                         "' (expected 1, 2, 3, 4 or pmi)");
}

void print_caret_diagnostic(const std::string& query,
                            const cooccur::ParseError& e) {
  std::cerr << "error: " << e.what() << " (offset " << e.offset << ")\n";
  std::cerr << "  " << query << "\n  ";
  for (std::size_t i = 0; i < e.offset; ++i) std::cerr << ' ';
  std::cerr << "^\n";
}

ordered_json score_to_json(const std::optional<double>& score) {
  if (!score) return nullptr;
  if (std::isinf(*score)) return *score < 0 ? "-inf" : "inf";
  return *score;
}

const char* tie_name(cooccur::TieFlag tie) {
  switch (tie) {
    case cooccur::TieFlag::none:
      return "none";
    case cooccur::TieFlag::tie:
      return "tie";
    case cooccur::TieFlag::all_undefined:
      return "unresolved";
  }
  return "none";
}

// StopWordList has no default constructor by design; hold via pointer.
struct Stops {
  const cooccur::StopWordList* list;
  cooccur::StopWordList storage;
  explicit Stops(const std::optional<std::string>& path)
      : list(nullptr), storage({}) {
    if (path) {
      storage = cooccur::StopWordList::from_file(*path);
      list = &storage;
    } else {
      list = &cooccur::StopWordList::defaults();
    }
  }
};

int cmd_build(const std::string& corpus_path, bool lines,
              const std::string& out_path) {
  cooccur::Corpus corpus = ingest(corpus_path, lines);
  if (corpus.doc_count() == 0) {
    std::cerr << "warning: corpus is empty (no documents ingested)\n";
  }
  cooccur::PositionalIndex index = cooccur::PositionalIndex::build(corpus);
  index.save(std::filesystem::path(out_path));
  std::cout << "docs=" << index.total_docs()
            << " tokens=" << index.total_tokens() << "\n";
  return kExitOk;
}

int cmd_query(const std::string& index_path, const std::string& query_text,
              bool list_docs, bool canonical, bool json_output,
              std::optional<int> window_flag) {
  int window = resolve_near_window(window_flag);
  cooccur::PositionalIndex index =
      cooccur::PositionalIndex::load(std::filesystem::path(index_path));

  cooccur::QueryNodePtr node;
  try {
    node = cooccur::parse(query_text, cooccur::ParseOptions{window});
  } catch (const cooccur::ParseError& e) {
    print_caret_diagnostic(query_text, e);
    return kExitUsage;
  }

  std::uint64_t hits = index.hits(*node);
  std::vector<std::string> ids;
  if (list_docs || json_output) {
    for (std::uint32_t ord : index.matching_docs(*node)) {
      ids.push_back(index.doc_id(ord));
    }
    std::sort(ids.begin(), ids.end());
  }

  if (json_output) {
    ordered_json out;
    out["query"] = cooccur::to_query_string(*node);
    out["hits"] = hits;
    if (list_docs) out["docs"] = ids;
    std::cout << out.dump() << "\n";
    return kExitOk;
  }
  if (canonical) {
    std::cout << "query: " << cooccur::to_query_string(*node) << "\n";
  }
  std::cout << hits << "\n";
  if (list_docs) {
    for (const std::string& id : ids) std::cout << id << "\n";
  }
  return kExitOk;
}

int cmd_synonym(const std::optional<std::string>& index_path,
                const std::optional<std::string>& stub_path,
                const std::string& questions_path,
                const std::string& variant_name,
                const std::optional<std::string>& stopwords_path,
                std::optional<int> window_flag) {
  int window = resolve_near_window(window_flag);
  cooccur::ScoreVariant variant = parse_variant(variant_name);
  Stops stops(stopwords_path);

  std::optional<cooccur::PositionalIndex> index;
  std::optional<cooccur::StubHitSource> stub;
  const cooccur::HitSource* source = nullptr;
  if (stub_path) {
    stub = cooccur::StubHitSource::from_file(*stub_path);
    source = &*stub;
  } else {
    index = cooccur::PositionalIndex::load(std::filesystem::path(*index_path));
    source = &*index;
  }

  std::ifstream in(questions_path);
  if (!in) {
    throw cooccur::IoError("cannot read questions file: " + questions_path);
  }
  cooccur::SynonymRunReport report =
      cooccur::run_synonym_set(*source, in, variant, *stops.list, window);

  for (const cooccur::QuestionRecord& rec : report.records) {
    ordered_json line;
    line["line"] = rec.line_no;
    line["problem"] = rec.question.problem;
    if (!rec.error.empty()) {
      line["error"] = rec.error;
      std::cout << line.dump() << "\n";
      continue;
    }
    const cooccur::SynonymAnswer& ans = *rec.answer;
    line["chosen"] = ans.chosen;
    line["chosen_word"] = rec.question.choices[ans.chosen];
    line["tie"] = tie_name(ans.tie);
    if (ans.context) line["context"] = *ans.context;
    if (rec.correct.has_value()) line["correct"] = *rec.correct;
    ordered_json choices = ordered_json::array();
    for (const cooccur::ScoredChoice& sc : ans.choices) {
      ordered_json c;
      c["word"] = sc.choice;
      c["numerator_query"] = sc.numerator_query;
      c["numerator_hits"] = sc.numerator_hits;
      c["denominator_query"] = sc.denominator_query;
      c["denominator_hits"] = sc.denominator_hits;
      c["score"] = score_to_json(sc.score);
      choices.push_back(std::move(c));
    }
    line["choices"] = std::move(choices);
    std::cout << line.dump() << "\n";
  }

  ordered_json summary;
  summary["questions"] = report.records.size();
  summary["keyed"] = report.keyed;
  summary["correct"] = report.correct;
  if (auto acc = report.accuracy()) summary["accuracy"] = *acc;
  std::cout << summary.dump() << "\n";

  return report.any_error ? kExitEvalFailure : kExitOk;
}

int cmd_rate(const std::optional<std::string>& index_path,
             const std::optional<std::string>& stub_path,
             const std::string& task_path, std::optional<int> window_flag) {
  int window = resolve_near_window(window_flag);

  std::optional<cooccur::PositionalIndex> index;
  std::optional<cooccur::StubHitSource> stub;
  const cooccur::HitSource* source = nullptr;
  if (stub_path) {
    stub = cooccur::StubHitSource::from_file(*stub_path);
    source = &*stub;
  } else {
    index = cooccur::PositionalIndex::load(std::filesystem::path(*index_path));
    source = &*index;
  }

  std::ifstream in(task_path);
  if (!in) throw cooccur::IoError("cannot read task file: " + task_path);
  cooccur::RatingReport report =
      cooccur::run_rating_task(*source, in, window);
  std::cout << cooccur::to_json(report).dump(2) << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& corpus_path, bool lines,
               std::uint64_t trials, std::uint64_t seed,
               std::optional<int> window_flag) {
  int window = resolve_near_window(window_flag);
  cooccur::Corpus corpus = ingest(corpus_path, lines);
  cooccur::PositionalIndex index = cooccur::PositionalIndex::build(corpus);
  cooccur::OracleHitSource oracle(corpus);

  cooccur::QueryGenOptions opts;
  opts.near_window = window;
  cooccur::VerifyOutcome outcome = cooccur::verify_equivalence(
      index, oracle, cooccur::corpus_vocabulary(corpus), trials, seed, opts);

  if (!outcome.ok()) {
    std::cerr << "mismatch after " << outcome.trials_run
              << " trials on query: " << outcome.mismatch->query << "\n"
              << "  index=" << outcome.mismatch->left_hits
              << " oracle=" << outcome.mismatch->right_hits << "\n";
    return kExitEvalFailure;
  }
  std::cout << outcome.trials_run << "/" << trials << " ok\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "co-occurrence statistics engine: positional inverted index, "
      "boolean/NEAR query evaluation, synonym scoring and 1-10 association "
      "rating"};
  app.require_subcommand(1);

  // build
  auto* build = app.add_subcommand("build", "ingest a corpus and write an index");
  std::string build_corpus, build_out;
  bool build_lines = false;
  build->add_option("--corpus", build_corpus, "corpus path")->required();
  build->add_flag("--lines", build_lines,
                  "treat the corpus as one document per line");
  build->add_option("--out", build_out, "output index file")->required();

  // query
  auto* query = app.add_subcommand("query", "evaluate a query against an index");
  std::string query_index, query_text;
  bool query_docs = false, query_canonical = false, query_json = false;
  std::optional<int> query_window;
  query->add_option("--index", query_index, "index file")->required();
  query->add_option("query", query_text, "query text")->required();
  query->add_flag("--docs", query_docs, "list matching doc ids");
  query->add_flag("--canonical", query_canonical,
                  "print the canonical query form (stub file key format)");
  query->add_flag("--json", query_json, "JSON output");
  query->add_option("--near-window", query_window, "NEAR window (default 10)");

  // synonym
  auto* synonym =
      app.add_subcommand("synonym", "answer a synonym question set");
  std::optional<std::string> syn_index, syn_stub, syn_stopwords;
  std::string syn_questions, syn_variant;
  std::optional<int> syn_window;
  synonym->add_option("--index", syn_index, "index file");
  synonym->add_option("--stub-hits", syn_stub,
                      "JSON file of {canonical query: hit count}");
  synonym->add_option("--questions", syn_questions, "JSON Lines question file")
      ->required();
  synonym->add_option("--variant", syn_variant, "1|2|3|4|pmi")->required();
  synonym->add_option("--stopwords", syn_stopwords,
                      "stop-word file (one word per line)");
  synonym->add_option("--near-window", syn_window, "NEAR window (default 10)");

  // rate
  auto* rate = app.add_subcommand("rate", "run an association-rating task");
  std::optional<std::string> rate_index, rate_stub;
  std::string rate_task;
  std::optional<int> rate_window;
  rate->add_option("--index", rate_index, "index file");
  rate->add_option("--stub-hits", rate_stub,
                   "JSON file of {canonical query: hit count}");
  rate->add_option("--task", rate_task, "JSON Lines task file")->required();
  rate->add_option("--near-window", rate_window, "NEAR window (default 10)");

  // verify
  auto* verify = app.add_subcommand(
      "verify", "check the index against the naive-scan oracle");
  std::string verify_corpus;
  bool verify_lines = false;
  std::uint64_t verify_trials = 1000, verify_seed = 1;
  std::optional<int> verify_window;
  verify->add_option("--corpus", verify_corpus, "corpus path")->required();
  verify->add_flag("--lines", verify_lines,
                   "treat the corpus as one document per line");
  verify->add_option("--trials", verify_trials, "number of random queries");
  verify->add_option("--seed", verify_seed, "random seed");
  verify->add_option("--near-window", verify_window,
                     "NEAR window (default 10)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand(build)) {
      return cmd_build(build_corpus, build_lines, build_out);
    }
    if (app.got_subcommand(query)) {
      return cmd_query(query_index, query_text, query_docs, query_canonical,
                       query_json, query_window);
    }
    if (app.got_subcommand(synonym)) {
      if (syn_index.has_value() == syn_stub.has_value()) {
        throw cooccur::IoError(
            "synonym needs exactly one of --index or --stub-hits");
      }
      return cmd_synonym(syn_index, syn_stub, syn_questions, syn_variant,
                         syn_stopwords, syn_window);
    }
    if (app.got_subcommand(rate)) {
      if (rate_index.has_value() == rate_stub.has_value()) {
        throw cooccur::IoError(
            "rate needs exactly one of --index or --stub-hits");
      }
      return cmd_rate(rate_index, rate_stub, rate_task, rate_window);
    }
    if (app.got_subcommand(verify)) {
      return cmd_verify(verify_corpus, verify_lines, verify_trials,
                        verify_seed, verify_window);
    }
  } catch (const cooccur::ParseError& e) {
    std::cerr << "error: " << e.what() << " (offset " << e.offset << ")\n";
    return kExitUsage;
  } catch (const cooccur::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const cooccur::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEvalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEvalFailure;
  }
  return kExitUsage;
}
