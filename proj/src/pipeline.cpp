#include "ideaminer/pipeline.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <map>

#include <nlohmann/json.hpp>

#include "ideaminer/coherence.hpp"
#include "ideaminer/corpus.hpp"
#include "ideaminer/dtm.hpp"
#include "ideaminer/error.hpp"
#include "ideaminer/io.hpp"
#include "ideaminer/preprocess.hpp"
#include "ideaminer/report.hpp"
#include "ideaminer/trends.hpp"

namespace ideaminer::pipeline {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using report::PhaseEntry;
using report::PhaseLog;

constexpr std::string_view kCorpusFile = "corpus.jsonl";
constexpr std::string_view kIngestFile = "ingest.json";
constexpr std::string_view kDictionaryFile = "dictionary.json";
constexpr std::string_view kBowFile = "bow.json";
constexpr std::string_view kFrequencyFile = "frequency.csv";
constexpr std::string_view kPreprocessFile = "preprocess.json";
constexpr std::string_view kSelectionFile = "selection.json";
constexpr std::string_view kCurveFile = "coherence_curve.csv";
constexpr std::string_view kModelFile = "dtm_model.json";
constexpr std::string_view kFitFile = "fit.json";
constexpr std::string_view kTrendsFile = "trends.json";

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void check_format(const json& j, std::string_view format) {
  if (!j.contains("format") || j["format"] != format) {
    throw Error("artifact is not a " + std::string(format) + " file");
  }
}

// --- summary persistence ----------------------------------------------------

std::string ingest_to_json(const report::IngestSummary& s) {
  json j;
  j["format"] = "ideaminer.ingest";
  j["version"] = 1;
  auto files = json::array();
  for (const auto& f : s.parse.files) files.push_back({{"file", f.path}, {"parsed", f.parsed}, {"skipped", f.skipped}});
  j["files"] = std::move(files);
  j["parsed"] = s.parse.parsed;
  j["skipped"] = s.parse.skipped;
  j["dedup"] = {{"input", s.dedup.input},
                {"removed_by_id", s.dedup.removed_by_id},
                {"removed_by_title", s.dedup.removed_by_title},
                {"kept", s.dedup.kept}};
  j["first_year"] = s.first_year;
  j["last_year"] = s.last_year;
  j["records"] = s.records;
  j["dropped_out_of_range"] = s.dropped_out_of_range;
  j["slice_sizes"] = s.slice_sizes;
  j["warnings"] = s.warnings;
  return dump(j);
}

report::IngestSummary ingest_from_json(std::string_view text) {
  const json j = json::parse(text);
  check_format(j, "ideaminer.ingest");
  report::IngestSummary s;
  for (const auto& f : j["files"]) {
    s.parse.files.push_back({f["file"].get<std::string>(), f["parsed"].get<size_t>(), f["skipped"].get<size_t>()});
  }
  s.parse.parsed = j["parsed"];
  s.parse.skipped = j["skipped"];
  s.dedup.input = j["dedup"]["input"];
  s.dedup.removed_by_id = j["dedup"]["removed_by_id"];
  s.dedup.removed_by_title = j["dedup"]["removed_by_title"];
  s.dedup.kept = j["dedup"]["kept"];
  s.first_year = j["first_year"];
  s.last_year = j["last_year"];
  s.records = j["records"];
  s.dropped_out_of_range = j["dropped_out_of_range"];
  s.slice_sizes = j["slice_sizes"].get<std::vector<size_t>>();
  s.warnings = j["warnings"].get<std::vector<std::string>>();
  return s;
}

std::string preprocess_to_json(const report::PreprocessSummary& s, const std::vector<preprocess::BigramStats>& bigrams) {
  json j;
  j["format"] = "ideaminer.preprocess";
  j["version"] = 1;
  j["mode"] = s.mode;
  j["vocab_size"] = s.vocab_size;
  j["documents"] = s.documents;
  j["dropped_documents"] = s.dropped_documents;
  j["tokens"] = s.tokens;
  j["min_doc_count"] = s.min_doc_count;
  j["max_doc_fraction"] = s.max_doc_fraction;
  j["bigrams_accepted"] = s.bigrams_accepted;
  auto bj = json::array();
  for (const auto& b : bigrams) {
    bj.push_back({{"first", b.first}, {"second", b.second}, {"count", b.count}, {"score", b.score}});
  }
  j["bigrams"] = std::move(bj);
  auto fj = json::array();
  for (const auto& f : s.frequency) fj.push_back({{"term", f.term}, {"count", f.count}, {"doc_freq", f.doc_freq}});
  j["frequency"] = std::move(fj);
  return dump(j);
}

report::PreprocessSummary preprocess_from_json(std::string_view text) {
  const json j = json::parse(text);
  check_format(j, "ideaminer.preprocess");
  report::PreprocessSummary s;
  s.mode = j["mode"];
  s.vocab_size = j["vocab_size"];
  s.documents = j["documents"];
  s.dropped_documents = j["dropped_documents"];
  s.tokens = j["tokens"];
  s.min_doc_count = j["min_doc_count"];
  s.max_doc_fraction = j["max_doc_fraction"];
  s.bigrams_accepted = j["bigrams_accepted"];
  for (const auto& f : j["frequency"]) {
    s.frequency.push_back({f["term"].get<std::string>(), f["count"].get<uint64_t>(), f["doc_freq"].get<uint64_t>()});
  }
  return s;
}

std::string selection_to_json(const coherence::Selection& s) {
  json j;
  j["format"] = "ideaminer.selection";
  j["version"] = 1;
  j["measure"] = "umass";
  j["best_k"] = s.best_k;
  auto curve = json::array();
  for (const auto& p : s.curve) {
    curve.push_back({{"K", p.num_topics}, {"coherence", p.coherence}, {"perplexity", p.perplexity}});
  }
  j["curve"] = std::move(curve);
  return dump(j);
}

coherence::Selection selection_from_json(std::string_view text) {
  const json j = json::parse(text);
  check_format(j, "ideaminer.selection");
  coherence::Selection s;
  s.best_k = j["best_k"];
  for (const auto& p : j["curve"]) {
    s.curve.push_back({p["K"].get<int>(), p["coherence"].get<double>(), p["perplexity"].get<double>()});
  }
  return s;
}

std::string trends_to_json(const report::TrendsSummary& s) {
  json j;
  j["format"] = "ideaminer.trends";
  j["version"] = 1;
  j["gate_regression"] = s.gate_regression;
  j["gate_arima"] = s.gate_arima;
  j["notes"] = s.notes;
  auto tj = json::array();
  for (const auto& t : s.trends) {
    const auto& f = t.forecast;
    auto horizon = json::array();
    for (const auto& h : f.horizon) {
      horizon.push_back({{"year", h.year}, {"predicted", h.predicted}, {"unclamped", h.unclamped}, {"clamped", h.clamped}});
    }
    tj.push_back({{"topic", f.topic},
                  {"term", f.term},
                  {"classification", std::string(trends::to_string(t.classification))},
                  {"slope", f.slope},
                  {"intercept", f.intercept},
                  {"intercept_reindexed", f.intercept_reindexed},
                  {"r_squared", f.r_squared},
                  {"rse", f.rse},
                  {"slope_se", f.slope_se},
                  {"slope_t", f.slope_t},
                  {"slope_p_value", f.slope_p_value},
                  {"n", f.n},
                  {"any_clamped", f.any_clamped},
                  {"horizon", std::move(horizon)}});
  }
  j["trends"] = std::move(tj);
  auto cj = json::array();
  for (const auto& c : s.correlations) {
    cj.push_back({{"topic", c.topic}, {"term_a", c.term_a}, {"term_b", c.term_b}, {"r", c.r},
                  {"t_stat", c.t_stat}, {"p_value", c.p_value}, {"n", c.n}});
  }
  j["correlations"] = std::move(cj);
  return dump(j);
}

trends::Trend parse_trend(const std::string& s) {
  if (s == "increasing") return trends::Trend::kIncreasing;
  if (s == "decreasing") return trends::Trend::kDecreasing;
  if (s == "flat") return trends::Trend::kFlat;
  throw Error("unknown trend classification '" + s + "'");
}

report::TrendsSummary trends_from_json(std::string_view text) {
  const json j = json::parse(text);
  check_format(j, "ideaminer.trends");
  report::TrendsSummary s;
  s.gate_regression = j["gate_regression"];
  s.gate_arima = j["gate_arima"];
  s.notes = j["notes"].get<std::vector<std::string>>();
  for (const auto& t : j["trends"]) {
    trends::TermTrend tt;
    auto& f = tt.forecast;
    f.topic = t["topic"];
    f.term = t["term"];
    tt.classification = parse_trend(t["classification"]);
    f.slope = t["slope"];
    f.intercept = t["intercept"];
    f.intercept_reindexed = t["intercept_reindexed"];
    f.r_squared = t["r_squared"];
    f.rse = t["rse"];
    f.slope_se = t["slope_se"];
    f.slope_t = t["slope_t"];
    f.slope_p_value = t["slope_p_value"];
    f.n = t["n"];
    f.any_clamped = t["any_clamped"];
    for (const auto& h : t["horizon"]) {
      f.horizon.push_back({h["year"].get<int>(), h["predicted"].get<double>(), h["unclamped"].get<double>(),
                           h["clamped"].get<bool>()});
    }
    s.trends.push_back(std::move(tt));
  }
  for (const auto& c : j["correlations"]) {
    trends::CorrelationResult r;
    r.topic = c["topic"];
    r.term_a = c["term_a"];
    r.term_b = c["term_b"];
    r.r = c["r"];
    r.t_stat = c["t_stat"];
    r.p_value = c["p_value"];
    r.n = c["n"];
    s.correlations.push_back(std::move(r));
  }
  return s;
}

std::string join(const std::vector<std::string>& xs, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) out += (i ? std::string(sep) : "") + xs[i];
  return out;
}

}  // namespace

Pipeline::Pipeline(config::PipelineConfig config, Logger logger)
    : config_(std::move(config)), logger_(std::move(logger)) {}

void Pipeline::note(const std::string& message) const {
  if (logger_) logger_(message);
}

std::string Pipeline::timestamp() const {
  std::time_t t = 0;
  if (config_.wall_clock) {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  } else if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    try {
      t = static_cast<std::time_t>(std::stoll(epoch));
    } catch (const std::exception&) {
      throw Error(std::string("SOURCE_DATE_EPOCH is not an integer: ") + epoch);
    }
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string Pipeline::read_artifact(std::string_view name) const { return io::read_file(config_.out / name); }

void Pipeline::write_artifact(std::string_view name, std::string_view content) const {
  io::write_file_atomic(config_.out / name, content);
}

std::string Pipeline::digest(std::initializer_list<std::string_view> artifacts) const {
  std::string material = config::canonical_text(config_);
  for (auto name : artifacts) material += std::string(name) + " " + io::sha256_hex(read_artifact(name)) + "\n";
  return io::sha256_hex(material);
}

PhaseLog Pipeline::load_log() const {
  const fs::path p = config_.out / kPhaseLogFile;
  if (!fs::exists(p)) return {};
  return PhaseLog::from_json(io::read_file(p));
}

void Pipeline::save_log(const PhaseLog& log) const { write_artifact(kPhaseLogFile, log.to_json()); }

void Pipeline::require(const PhaseLog& log, std::string_view self, std::string_view upstream,
                       std::string_view artifact) const {
  const PhaseEntry* e = log.last_of(upstream);
  const std::string where = "`" + std::string(self) + "` needs the output of `" + std::string(upstream) +
                            "` (phase '" + std::string(report::phase_name(report::subcommand_phase(upstream))) + "')";
  if (e && !e->go) {
    throw Error(where + ", which ended in a no-go; address it and rerun `ideaminer " + std::string(upstream) + "`");
  }
  if (!e || !fs::exists(config_.out / artifact)) {
    throw Error(where + "; run `ideaminer " + std::string(upstream) + "` first");
  }
}

int Pipeline::do_ingest() {
  PhaseLog log = load_log();
  log.truncate_from("ingest");

  PhaseEntry need;
  need.phase = 1;
  need.subcommand = "ingest";
  need.timestamp = timestamp();
  need.inputs_digest = io::sha256_hex(config_.goals + "\n" + config_.success_criteria);
  need.decisions.push_back("goals: " + (config_.goals.empty() ? std::string("(not stated)") : config_.goals));
  need.decisions.push_back("success criteria: " +
                           (config_.success_criteria.empty() ? std::string("(not stated)") : config_.success_criteria));
  log.append(need);

  PhaseEntry entry;
  entry.phase = 2;
  entry.subcommand = "ingest";
  entry.timestamp = timestamp();
  std::string material = config::canonical_text(config_);
  for (const auto& p : config_.inputs) material += p.filename().string() + " " + io::sha256_hex(io::read_file(p)) + "\n";
  entry.inputs_digest = io::sha256_hex(material);

  auto parsed = corpus::parse_bibliographic_csv(config_.inputs, config_.field_map);
  for (auto& f : parsed.report.files) f.path = fs::path(f.path).filename().string();
  auto dedup = corpus::deduplicate(parsed.records);
  const int from = config_.from_year.value_or(dedup.corpus.first_year());
  const int to = config_.to_year.value_or(dedup.corpus.last_year());
  corpus::BinResult binned;
  try {
    binned = corpus::bin_time_slices(dedup.corpus, from, to);
  } catch (const Error& e) {
    entry.go = false;
    entry.back_transition = 1;
    entry.decisions.push_back(std::string("no usable records: ") + e.what());
    log.append(entry);
    save_log(log);
    note(std::string("ingest: no-go: ") + e.what());
    return kExitNoGo;
  }

  report::IngestSummary s;
  s.parse = parsed.report;
  s.dedup = dedup.report;
  s.first_year = from;
  s.last_year = to;
  s.records = binned.corpus.size();
  s.dropped_out_of_range = binned.dropped;
  s.slice_sizes = binned.corpus.slice_sizes();
  s.warnings = binned.warnings;

  write_artifact(kCorpusFile, corpus::to_jsonl(binned.corpus));
  write_artifact(kIngestFile, ingest_to_json(s));

  entry.decisions.push_back("parsed " + std::to_string(s.parse.parsed) + " rows from " +
                            std::to_string(s.parse.files.size()) + " file(s); skipped " +
                            std::to_string(s.parse.skipped));
  entry.decisions.push_back("removed " + std::to_string(s.dedup.removed_by_id) + " duplicates by id and " +
                            std::to_string(s.dedup.removed_by_title) + " by title and year");
  entry.decisions.push_back("kept " + std::to_string(s.records) + " records in " + std::to_string(from) + "-" +
                            std::to_string(to) + "; " + std::to_string(s.dropped_out_of_range) + " outside the range");
  for (const auto& w : s.warnings) entry.decisions.push_back("warning: " + w);
  log.append(entry);
  save_log(log);
  note("ingest: " + std::to_string(s.records) + " records");
  return kExitOk;
}

int Pipeline::do_preprocess() {
  PhaseLog log = load_log();
  require(log, "preprocess", "ingest", kCorpusFile);
  log.truncate_from("preprocess");

  const auto ingest = ingest_from_json(read_artifact(kIngestFile));
  corpus::Corpus raw = corpus::from_jsonl(read_artifact(kCorpusFile));
  corpus::Corpus c(raw.records(), ingest.first_year, ingest.last_year);

  PhaseEntry entry;
  entry.phase = 3;
  entry.subcommand = "preprocess";
  entry.timestamp = timestamp();
  entry.inputs_digest = digest({kCorpusFile, kIngestFile});

  preprocess::StopwordSet stopwords = preprocess::english_stopwords();
  if (!config_.stopwords_file.empty()) {
    const auto extra = preprocess::load_stopword_file(config_.stopwords_file);
    stopwords = preprocess::with_extension(extra);
    entry.decisions.push_back("stopword list extended with " + std::to_string(extra.size()) + " terms");
  }
  preprocess::LemmaTable lemmas;
  if (!config_.lemma_file.empty()) lemmas = preprocess::load_lemma_table(config_.lemma_file);
  const preprocess::Normalizer normalizer(std::move(stopwords), preprocess::parse_root_mode(config_.mode),
                                          std::move(lemmas));
  preprocess::TokenCorpus tokens = preprocess::tokenize_corpus(c, normalizer);

  std::vector<preprocess::BigramStats> accepted;
  tokens.docs = preprocess::detect_bigrams(tokens.docs, {config_.bigram_min_count, config_.bigram_threshold}, &accepted);
  const auto frequency = preprocess::frequency_report(tokens.docs, config_.frequency_top_n);
  write_artifact(kFrequencyFile, preprocess::frequency_csv(frequency));
  entry.decisions.push_back("root form mode: " + config_.mode);
  std::vector<std::string> shown;
  for (size_t i = 0; i < std::min<size_t>(accepted.size(), 10); ++i) {
    shown.push_back(accepted[i].first + "_" + accepted[i].second);
  }
  entry.decisions.push_back(std::to_string(accepted.size()) + " bigrams accepted" +
                            (shown.empty() ? "" : " (" + join(shown, ", ") + (accepted.size() > 10 ? ", ..." : "") + ")"));

  auto no_go = [&](const std::string& why) {
    entry.go = false;
    entry.back_transition = 2;
    entry.decisions.push_back("no-go: " + why);
    log.append(entry);
    save_log(log);
    note("preprocess: no-go: " + why);
    return kExitNoGo;
  };
  preprocess::Dictionary dictionary;
  try {
    dictionary = preprocess::build_dictionary(tokens.docs, {config_.min_doc_count, config_.max_doc_fraction});
  } catch (const Error& e) {
    return no_go(e.what());
  }
  preprocess::VectorizeResult vec;
  try {
    vec = preprocess::vectorize(tokens, dictionary);
  } catch (const Error& e) {
    return no_go(e.what());
  }

  report::PreprocessSummary s;
  s.mode = config_.mode;
  s.vocab_size = dictionary.size();
  s.documents = vec.bow.docs.size();
  s.dropped_documents = vec.dropped_docs;
  s.tokens = vec.bow.total_tokens();
  s.bigrams_accepted = accepted.size();
  s.min_doc_count = config_.min_doc_count;
  s.max_doc_fraction = config_.max_doc_fraction;
  s.frequency = frequency;

  write_artifact(kDictionaryFile, preprocess::dictionary_to_json(dictionary));
  write_artifact(kBowFile, preprocess::bow_to_json(vec.bow));
  write_artifact(kPreprocessFile, preprocess_to_json(s, accepted));
  entry.decisions.push_back("dictionary keeps " + std::to_string(s.vocab_size) + " terms in between " +
                            std::to_string(config_.min_doc_count) + " documents and " +
                            io::format_number(config_.max_doc_fraction) + " of the corpus");
  entry.decisions.push_back(std::to_string(s.documents) + " documents, " + std::to_string(s.tokens) + " tokens; " +
                            std::to_string(s.dropped_documents) + " empty documents dropped");
  log.append(entry);
  save_log(log);
  note("preprocess: vocabulary " + std::to_string(s.vocab_size) + ", " + std::to_string(s.documents) + " documents");
  return kExitOk;
}

int Pipeline::do_select_k() {
  PhaseLog log = load_log();
  require(log, "select-k", "preprocess", kBowFile);
  log.truncate_from("select-k");

  const auto bow = preprocess::bow_from_json(read_artifact(kBowFile));
  PhaseEntry entry;
  entry.phase = 4;
  entry.subcommand = "select-k";
  entry.timestamp = timestamp();
  entry.inputs_digest = digest({kBowFile});

  coherence::SelectOptions opts;
  opts.lda.alpha = config_.lda_alpha;
  opts.lda.eta = config_.lda_eta;
  opts.lda.iterations = config_.lda_iterations;
  opts.lda.seed = config_.seed;
  opts.top_n = config_.coherence_top_n;
  const auto selection = coherence::select_k(bow, config_.k_candidates, opts);

  write_artifact(kSelectionFile, selection_to_json(selection));
  write_artifact(kCurveFile, coherence::curve_csv(selection));
  std::vector<std::string> ks;
  for (const auto& p : selection.curve) ks.push_back(std::to_string(p.num_topics));
  entry.decisions.push_back("static LDA compared for K in {" + join(ks, ", ") + "} by UMass coherence");
  entry.decisions.push_back("selected K = " + std::to_string(selection.best_k));
  log.append(entry);
  save_log(log);
  note("select-k: K = " + std::to_string(selection.best_k));
  return kExitOk;
}

int Pipeline::do_fit() {
  PhaseLog log = load_log();
  require(log, "fit", "select-k", kSelectionFile);
  log.truncate_from("fit");

  const auto selection = selection_from_json(read_artifact(kSelectionFile));
  const auto bow = preprocess::bow_from_json(read_artifact(kBowFile));
  const auto dictionary = preprocess::dictionary_from_json(read_artifact(kDictionaryFile));

  PhaseEntry entry;
  entry.phase = 4;
  entry.subcommand = "fit";
  entry.timestamp = timestamp();
  entry.inputs_digest = digest({kSelectionFile, kBowFile, kDictionaryFile});

  dtm::DtmOptions opts;
  opts.num_topics = config_.dtm_k > 0 ? config_.dtm_k : selection.best_k;
  opts.chain_variance = config_.dtm_chain_variance;
  opts.obs_variance = config_.dtm_obs_variance;
  opts.initial_variance = config_.dtm_initial_variance;
  opts.alpha = config_.dtm_alpha;
  opts.max_em_iters = config_.dtm_max_em_iters;
  opts.seed = config_.seed;
  dtm::DtmModel model = dtm::fit_dtm(bow, opts);
  model.terms = dictionary.terms;

  write_artifact(kModelFile, dtm::to_json(model));
  json fj;
  fj["format"] = "ideaminer.fit";
  fj["version"] = 1;
  fj["num_topics"] = model.num_topics;
  fj["source_of_k"] = config_.dtm_k > 0 ? "config" : "selection";
  fj["elbo_trace"] = model.elbo_trace;
  fj["converged"] = model.converged;
  fj["warnings"] = model.warnings;
  write_artifact(kFitFile, dump(fj));

  entry.decisions.push_back("dynamic topic model with K = " + std::to_string(model.num_topics) +
                            (config_.dtm_k > 0 ? " (config override)" : " (selected)") + " over " +
                            std::to_string(model.num_slices) + " slices, chain variance " +
                            io::format_number(model.chain_variance));
  entry.decisions.push_back(std::to_string(model.elbo_trace.size()) + " EM iterations, " +
                            (model.converged ? "converged" : "not converged"));
  for (const auto& w : model.warnings) entry.decisions.push_back("warning: " + w);
  if (!model.warnings.empty()) entry.back_transition = 3;
  log.append(entry);
  save_log(log);
  note("fit: K = " + std::to_string(model.num_topics) + ", " + std::to_string(model.elbo_trace.size()) +
       " EM iterations");
  return kExitOk;
}

int Pipeline::do_trends() {
  PhaseLog log = load_log();
  require(log, "trends", "fit", kModelFile);
  log.truncate_from("trends");

  const auto model = dtm::from_json(read_artifact(kModelFile));
  PhaseEntry entry;
  entry.phase = 5;
  entry.subcommand = "trends";
  entry.timestamp = timestamp();
  entry.inputs_digest = digest({kModelFile});

  report::TrendsSummary s;
  const auto regression = trends::method_gate(model.num_slices, trends::Method::kRegression);
  s.gate_regression = regression.reason;
  s.gate_arima = trends::method_gate(model.num_slices, trends::Method::kArima).reason;
  std::vector<dtm::TermTrajectory> trajectories;
  for (int k = 0; k < model.num_topics; ++k) {
    for (size_t w : trends::candidate_terms(model, k, config_.trend_top_n)) {
      auto traj = dtm::topic_term_trajectory(model, k, w);
      if (regression.permitted) {
        trends::TermTrend t;
        t.forecast = trends::ols_forecast(traj, config_.horizon_years);
        t.classification = trends::classify_trend(t.forecast, config_.alpha_level);
        s.trends.push_back(std::move(t));
      }
      trajectories.push_back(std::move(traj));
    }
    if (model.num_slices < 3) continue;
    try {
      auto m = trends::correlation_matrix(model, k, config_.trend_top_n);
      for (auto& p : m.pairs) s.correlations.push_back(std::move(p));
      if (!m.skipped.empty()) {
        s.notes.push_back("topic " + std::to_string(k) + ": constant series skipped for correlation: " +
                          join(m.skipped, ", "));
      }
    } catch (const Error& e) {
      s.notes.push_back("topic " + std::to_string(k) + ": " + e.what());
    }
  }
  if (!regression.permitted) s.notes.push_back(regression.reason);
  if (model.num_slices < 3) s.notes.push_back("correlation needs at least 3 time slices");

  write_artifact(kTrendsFile, trends_to_json(s));
  write_artifact("trajectories.csv", dtm::trajectories_csv(trajectories));
  write_artifact("trends.csv", trends::trends_csv(s.trends));
  write_artifact("forecasts.csv", trends::forecasts_csv(s.trends));
  write_artifact("correlations.csv", trends::correlations_csv(s.correlations));

  std::map<trends::Trend, size_t> counts;
  for (const auto& t : s.trends) ++counts[t.classification];
  size_t strong = 0;
  for (const auto& c : s.correlations) strong += std::abs(c.r) >= config_.min_r;
  entry.decisions.push_back(s.gate_regression);
  entry.decisions.push_back(s.gate_arima);
  entry.decisions.push_back(std::to_string(s.trends.size()) + " term trends: " +
                            std::to_string(counts[trends::Trend::kIncreasing]) + " increasing, " +
                            std::to_string(counts[trends::Trend::kDecreasing]) + " decreasing, " +
                            std::to_string(counts[trends::Trend::kFlat]) + " flat at alpha " +
                            io::format_number(config_.alpha_level));
  entry.decisions.push_back(std::to_string(s.correlations.size()) + " term pairs correlated; " +
                            std::to_string(strong) + " with |r| >= " + io::format_number(config_.min_r));
  log.append(entry);
  save_log(log);
  note("trends: " + std::to_string(s.trends.size()) + " trends, " + std::to_string(s.correlations.size()) + " pairs");
  return kExitOk;
}

int Pipeline::do_report() {
  PhaseLog log = load_log();
  require(log, "report", "trends", kTrendsFile);
  log.truncate_from("report");

  report::ReportInputs in;
  in.goals = config_.goals;
  in.success_criteria = config_.success_criteria;
  in.ingest = ingest_from_json(read_artifact(kIngestFile));
  in.preprocess = preprocess_from_json(read_artifact(kPreprocessFile));
  in.selection = selection_from_json(read_artifact(kSelectionFile));
  in.model = dtm::from_json(read_artifact(kModelFile));
  in.trends = trends_from_json(read_artifact(kTrendsFile));
  in.ideas.min_r = config_.min_r;
  in.ideas.alpha_level = config_.alpha_level;

  std::map<int, std::string> user_labels;
  std::map<std::string, std::string> acronyms;
  if (!config_.labels_file.empty()) user_labels = report::parse_labels_file(io::read_file(config_.labels_file));
  if (!config_.acronyms_file.empty()) acronyms = report::parse_acronyms_file(io::read_file(config_.acronyms_file));
  in.labels = report::label_topics(*in.model, user_labels, acronyms);

  PhaseEntry entry;
  entry.phase = 6;
  entry.subcommand = "report";
  entry.timestamp = timestamp();
  entry.inputs_digest = digest({kIngestFile, kPreprocessFile, kSelectionFile, kModelFile, kTrendsFile});
  entry.decisions.push_back(std::to_string(user_labels.size()) + " analyst label(s), " +
                            std::to_string(in.labels.size() - user_labels.size()) + " default label(s)");
  entry.decisions.push_back("idea candidates at |r| >= " + io::format_number(config_.min_r) + " and alpha " +
                            io::format_number(config_.alpha_level) + " emitted with unscored checklists");
  log.append(entry);

  const auto bundle = report::render_report(in, log);
  fs::remove_all(report_dir());
  report::write_bundle(bundle, report_dir());
  save_log(log);
  note("report: " + std::to_string(bundle.size()) + " files in " + report_dir().string());
  return kExitOk;
}

int Pipeline::dispatch(std::string_view subcommand) {
  if (subcommand == "ingest") return do_ingest();
  if (subcommand == "preprocess") return do_preprocess();
  if (subcommand == "select-k") return do_select_k();
  if (subcommand == "fit") return do_fit();
  if (subcommand == "trends") return do_trends();
  if (subcommand == "report") return do_report();
  if (subcommand == "run") {
    for (auto step : report::kSubcommands) {
      const int code = dispatch(step);
      if (code != kExitOk) return code;
    }
    return kExitOk;
  }
  throw Error("unknown subcommand '" + std::string(subcommand) + "'");
}

int Pipeline::execute(std::string_view subcommand) {
  fs::create_directories(config_.out);
  io::DirectoryLock lock(config_.out);
  return dispatch(subcommand);
}

}  // namespace ideaminer::pipeline
