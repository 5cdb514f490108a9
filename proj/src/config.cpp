#include "ideaminer/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>
#include <sstream>

#include "ideaminer/error.hpp"
#include "ideaminer/io.hpp"

namespace ideaminer::config {
namespace {

namespace fs = std::filesystem;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& expected) {
  throw Error("config key '" + key + "': '" + value + "' is not " + expected);
}

int64_t to_int(const std::string& key, const std::string& v, int64_t lo, int64_t hi) {
  int64_t out = 0;
  try {
    size_t used = 0;
    out = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
  } catch (const std::exception&) {
    bad_value(key, v, "an integer");
  }
  if (out < lo || out > hi) {
    bad_value(key, v, "in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return out;
}

uint64_t to_seed(const std::string& key, const std::string& v) {
  if (v.empty() || !std::all_of(v.begin(), v.end(), [](unsigned char c) { return std::isdigit(c); })) {
    bad_value(key, v, "a non-negative integer");
  }
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    bad_value(key, v, "a 64-bit unsigned integer");
  }
}

// lo_open / hi_open select exclusive bounds.
double to_real(const std::string& key, const std::string& v, double lo, double hi, bool lo_open = false,
               bool hi_open = false) {
  double out = 0;
  try {
    size_t used = 0;
    out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
  } catch (const std::exception&) {
    bad_value(key, v, "a number");
  }
  const bool ok = std::isfinite(out) && (lo_open ? out > lo : out >= lo) && (hi_open ? out < hi : out <= hi);
  if (!ok) {
    std::ostringstream range;
    range << (lo_open ? "(" : "[") << lo << ", " << hi << (hi_open ? ")" : "]");
    bad_value(key, v, "in " + range.str());
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v, "a boolean (true/false)");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

fs::path resolve(const fs::path& base, const std::string& v) {
  if (v.empty()) return {};
  const fs::path p(v);
  return p.is_absolute() ? p : (base / p).lexically_normal();
}

std::string join_ints(const std::vector<int>& xs) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
  return out;
}

std::string real(double x) { return io::format_number(x); }

std::string name_of(const fs::path& p) { return p.empty() ? "" : p.filename().string(); }

struct Key {
  std::string name;
  std::string doc;
  std::function<void(PipelineConfig&, const std::string&, const fs::path& base)> set;
  std::function<std::string(const PipelineConfig&)> get;
  bool in_digest = true;
};

const std::vector<Key>& keys() {
  constexpr int64_t kMaxInt = std::numeric_limits<int32_t>::max();
  static const std::vector<Key> kKeys = {
      {"goals", "Phase 1 free text: technology need and goals",
       [](auto& c, const auto& v, const auto&) { c.goals = v; }, [](const auto& c) { return c.goals; }},
      {"success_criteria", "Phase 1 free text: what a useful result looks like",
       [](auto& c, const auto& v, const auto&) { c.success_criteria = v; },
       [](const auto& c) { return c.success_criteria; }},
      {"input", "comma separated CSV exports, relative to the config file",
       [](auto& c, const auto& v, const auto& base) {
         c.inputs.clear();
         for (const auto& item : split_list(v)) c.inputs.push_back(resolve(base, item));
       },
       [](const auto& c) {
         std::string out;
         for (size_t i = 0; i < c.inputs.size(); ++i) out += (i ? "," : "") + name_of(c.inputs[i]);
         return out;
       }},
      {"field.title", "title column", [](auto& c, const auto& v, const auto&) { c.field_map.title = v; },
       [](const auto& c) { return c.field_map.title; }},
      {"field.abstract", "abstract column (empty: unmapped)",
       [](auto& c, const auto& v, const auto&) { c.field_map.abstract = v; },
       [](const auto& c) { return c.field_map.abstract; }},
      {"field.year", "publication year column", [](auto& c, const auto& v, const auto&) { c.field_map.year = v; },
       [](const auto& c) { return c.field_map.year; }},
      {"field.id", "identifier column, usually the DOI (empty: unmapped)",
       [](auto& c, const auto& v, const auto&) { c.field_map.id = v; },
       [](const auto& c) { return c.field_map.id; }},
      {"field.source", "source/venue column (empty: unmapped)",
       [](auto& c, const auto& v, const auto&) { c.field_map.source = v; },
       [](const auto& c) { return c.field_map.source; }},
      {"from_year", "first year kept (empty: corpus minimum)",
       [](auto& c, const auto& v, const auto&) {
         c.from_year = v.empty() ? std::nullopt : std::optional<int>(to_int("from_year", v, 1900, 2100));
       },
       [](const auto& c) { return c.from_year ? std::to_string(*c.from_year) : ""; }},
      {"to_year", "last year kept (empty: corpus maximum)",
       [](auto& c, const auto& v, const auto&) {
         c.to_year = v.empty() ? std::nullopt : std::optional<int>(to_int("to_year", v, 1900, 2100));
       },
       [](const auto& c) { return c.to_year ? std::to_string(*c.to_year) : ""; }},
      {"mode", "root form: stem or lemma",
       [](auto& c, const auto& v, const auto&) {
         if (v != "stem" && v != "lemma") bad_value("mode", v, "stem or lemma");
         c.mode = v;
       },
       [](const auto& c) { return c.mode; }},
      {"stopwords_file", "extra stopwords, one per line (empty: bundled list only)",
       [](auto& c, const auto& v, const auto& base) { c.stopwords_file = resolve(base, v); },
       [](const auto& c) { return name_of(c.stopwords_file); }},
      {"lemma_file", "surface<TAB>lemma table, required for mode = lemma",
       [](auto& c, const auto& v, const auto& base) { c.lemma_file = resolve(base, v); },
       [](const auto& c) { return name_of(c.lemma_file); }},
      {"min_doc_count", "keep terms in at least this many documents",
       [](auto& c, const auto& v, const auto&) { c.min_doc_count = to_int("min_doc_count", v, 1, kMaxInt); },
       [](const auto& c) { return std::to_string(c.min_doc_count); }},
      {"max_doc_fraction", "drop terms in more than this fraction of documents",
       [](auto& c, const auto& v, const auto&) {
         c.max_doc_fraction = to_real("max_doc_fraction", v, 0.0, 1.0, true);
       },
       [](const auto& c) { return real(c.max_doc_fraction); }},
      {"bigram_min_count", "minimum bigram count",
       [](auto& c, const auto& v, const auto&) { c.bigram_min_count = to_int("bigram_min_count", v, 1, kMaxInt); },
       [](const auto& c) { return std::to_string(c.bigram_min_count); }},
      {"bigram_threshold", "bigram score threshold",
       [](auto& c, const auto& v, const auto&) {
         c.bigram_threshold = to_real("bigram_threshold", v, 0.0, 1e12);
       },
       [](const auto& c) { return real(c.bigram_threshold); }},
      {"frequency_top_n", "rows in the term frequency report",
       [](auto& c, const auto& v, const auto&) { c.frequency_top_n = to_int("frequency_top_n", v, 1, kMaxInt); },
       [](const auto& c) { return std::to_string(c.frequency_top_n); }},
      {"k_candidates", "comma separated numbers of topics to compare (each >= 2)",
       [](auto& c, const auto& v, const auto&) {
         c.k_candidates.clear();
         for (const auto& item : split_list(v)) {
           c.k_candidates.push_back(static_cast<int>(to_int("k_candidates", item, 2, 1000)));
         }
         if (c.k_candidates.empty()) bad_value("k_candidates", v, "a non-empty list");
       },
       [](const auto& c) { return join_ints(c.k_candidates); }},
      {"lda_alpha", "static LDA document-topic prior",
       [](auto& c, const auto& v, const auto&) { c.lda_alpha = to_real("lda_alpha", v, 0.0, 1e6, true); },
       [](const auto& c) { return real(c.lda_alpha); }},
      {"lda_eta", "static LDA topic-term prior",
       [](auto& c, const auto& v, const auto&) { c.lda_eta = to_real("lda_eta", v, 0.0, 1e6, true); },
       [](const auto& c) { return real(c.lda_eta); }},
      {"lda_iterations", "Gibbs sweeps per static LDA fit",
       [](auto& c, const auto& v, const auto&) { c.lda_iterations = to_int("lda_iterations", v, 10, 1000000); },
       [](const auto& c) { return std::to_string(c.lda_iterations); }},
      {"coherence_top_n", "top terms per topic scored for coherence",
       [](auto& c, const auto& v, const auto&) { c.coherence_top_n = to_int("coherence_top_n", v, 2, 1000); },
       [](const auto& c) { return std::to_string(c.coherence_top_n); }},
      {"dtm_k", "topics of the dynamic model (0: the selected K)",
       [](auto& c, const auto& v, const auto&) {
         c.dtm_k = to_int("dtm_k", v, 0, 1000);
         if (c.dtm_k == 1) bad_value("dtm_k", v, "0 or >= 2");
       },
       [](const auto& c) { return std::to_string(c.dtm_k); }},
      {"dtm_chain_variance", "random-walk variance between slices",
       [](auto& c, const auto& v, const auto&) {
         c.dtm_chain_variance = to_real("dtm_chain_variance", v, 0.0, 100.0, true);
       },
       [](const auto& c) { return real(c.dtm_chain_variance); }},
      {"dtm_obs_variance", "variance of the variational pseudo-observations",
       [](auto& c, const auto& v, const auto&) {
         c.dtm_obs_variance = to_real("dtm_obs_variance", v, 0.0, 100.0, true);
       },
       [](const auto& c) { return real(c.dtm_obs_variance); }},
      {"dtm_initial_variance", "prior variance of the first slice",
       [](auto& c, const auto& v, const auto&) {
         c.dtm_initial_variance = to_real("dtm_initial_variance", v, 0.0, 1e6, true);
       },
       [](const auto& c) { return real(c.dtm_initial_variance); }},
      {"dtm_alpha", "dynamic model document-topic prior",
       [](auto& c, const auto& v, const auto&) { c.dtm_alpha = to_real("dtm_alpha", v, 0.0, 1e6, true); },
       [](const auto& c) { return real(c.dtm_alpha); }},
      {"dtm_max_em_iters", "maximum variational EM iterations",
       [](auto& c, const auto& v, const auto&) { c.dtm_max_em_iters = to_int("dtm_max_em_iters", v, 1, 10000); },
       [](const auto& c) { return std::to_string(c.dtm_max_em_iters); }},
      {"trend_top_n", "per-slice top terms pooled into trend candidates",
       [](auto& c, const auto& v, const auto&) { c.trend_top_n = to_int("trend_top_n", v, 2, 1000); },
       [](const auto& c) { return std::to_string(c.trend_top_n); }},
      {"min_r", "minimum |r| for an associated term pair",
       [](auto& c, const auto& v, const auto&) { c.min_r = to_real("min_r", v, 0.0, 1.0); },
       [](const auto& c) { return real(c.min_r); }},
      {"alpha_level", "significance level for trends and correlations",
       [](auto& c, const auto& v, const auto&) { c.alpha_level = to_real("alpha_level", v, 0.0, 1.0, true, true); },
       [](const auto& c) { return real(c.alpha_level); }},
      {"horizon_years", "years forecast past the last slice",
       [](auto& c, const auto& v, const auto&) { c.horizon_years = to_int("horizon_years", v, 0, 100); },
       [](const auto& c) { return std::to_string(c.horizon_years); }},
      {"labels_file", "index<TAB>label topic names (empty: default labels)",
       [](auto& c, const auto& v, const auto& base) { c.labels_file = resolve(base, v); },
       [](const auto& c) { return name_of(c.labels_file); }},
      {"acronyms_file", "acronym<TAB>expansion applied to labels",
       [](auto& c, const auto& v, const auto& base) { c.acronyms_file = resolve(base, v); },
       [](const auto& c) { return name_of(c.acronyms_file); }},
      {"seed", "random seed (required)",
       [](auto& c, const auto& v, const auto&) { c.seed = to_seed("seed", v); },
       [](const auto& c) { return std::to_string(c.seed); }},
      {"out", "output directory, relative to the config file",
       [](auto& c, const auto& v, const auto& base) {
         if (v.empty()) bad_value("out", v, "a directory");
         c.out = resolve(base, v);
       },
       [](const auto& c) { return c.out.string(); }, false},
      {"wall_clock", "stamp the phase log with the current time instead of SOURCE_DATE_EPOCH",
       [](auto& c, const auto& v, const auto&) { c.wall_clock = to_bool("wall_clock", v); },
       [](const auto& c) { return std::string(c.wall_clock ? "true" : "false"); }, false},
  };
  return kKeys;
}

const Key& find_key(const std::string& name) {
  for (const auto& k : keys()) {
    if (k.name == name) return k;
  }
  throw Error("unknown config key '" + name + "'");
}

std::string env_name(const std::string& key) {
  std::string out(kEnvPrefix);
  for (char c : key) out.push_back(c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  return out;
}

}  // namespace

Environment process_environment() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (!v) return std::nullopt;
    return std::string(v);
  };
}

PipelineConfig parse_config(std::string_view text, const fs::path& base_dir, const Environment& env,
                            const Overrides& overrides) {
  PipelineConfig cfg;
  cfg.out = resolve(base_dir, "out");
  bool seed_set = false;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (!seen.insert(key).second) {
      throw Error("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    find_key(key).set(cfg, value, base_dir);
    seed_set |= key == "seed";
  }
  if (env) {
    for (const auto& k : keys()) {
      if (const auto v = env(env_name(k.name))) {
        k.set(cfg, trim(*v), fs::current_path());
        seed_set |= k.name == "seed";
      }
    }
  }
  for (const auto& [key, value] : overrides) {
    find_key(key).set(cfg, value, fs::current_path());
    seed_set |= key == "seed";
  }
  if (!seed_set) throw Error("config has no seed; set 'seed = <integer>' (runs must be reproducible)");
  if (cfg.inputs.empty()) throw Error("config has no input files; set 'input = <file.csv>[,...]'");
  if (cfg.from_year && cfg.to_year && *cfg.from_year > *cfg.to_year) {
    throw Error("config: from_year " + std::to_string(*cfg.from_year) + " is after to_year " +
                std::to_string(*cfg.to_year));
  }
  if (cfg.mode == "lemma" && cfg.lemma_file.empty()) throw Error("config: mode = lemma needs lemma_file");
  return cfg;
}

PipelineConfig load_config(const fs::path& path, const Environment& env, const Overrides& overrides) {
  return parse_config(io::read_file(path), fs::absolute(path).parent_path(), env, overrides);
}

std::string default_config_text() {
  PipelineConfig defaults;
  defaults.out = "out";
  std::string out = "# ideaminer configuration. Every key may be overridden by the environment\n"
                    "# variable " + std::string(kEnvPrefix) + "<KEY> (upper case, '.' as '_').\n";
  for (const auto& k : keys()) {
    out += "\n# " + k.doc + "\n";
    std::string value = k.get(defaults);
    if (k.name == "seed") {
      out += "# seed = 42\n";
    } else if (k.name == "input") {
      out += "# input = records.csv\n";
    } else {
      out += k.name + " = " + value + "\n";
    }
  }
  return out;
}

std::string canonical_text(const PipelineConfig& config) {
  std::string out;
  for (const auto& k : keys()) {
    if (k.in_digest) out += k.name + " = " + k.get(config) + "\n";
  }
  return out;
}

}  // namespace ideaminer::config
