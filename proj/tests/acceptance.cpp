// One pass/fail line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "ideaminer/coherence.hpp"
#include "ideaminer/config.hpp"
#include "ideaminer/corpus.hpp"
#include "ideaminer/csv.hpp"
#include "ideaminer/dtm.hpp"
#include "ideaminer/error.hpp"
#include "ideaminer/io.hpp"
#include "ideaminer/lda.hpp"
#include "ideaminer/pipeline.hpp"
#include "ideaminer/preprocess.hpp"
#include "ideaminer/report.hpp"
#include "ideaminer/trends.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

namespace {

namespace fs = std::filesystem;
using namespace ideaminer;
using namespace ideaminer::testing;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Check {
  bool ok = true;
  std::vector<std::string> failures;
  std::ostringstream detail;
  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      failures.push_back(what);
    }
  }
  template <class F>
  void expect_throw(F&& f, const std::string& what) {
    try {
      f();
    } catch (const Error&) {
      return;
    }
    expect(false, what + " (no error raised)");
  }
};

trends::TermTrajectory series(const std::vector<double>& values, int first_year = 2009) {
  trends::TermTrajectory t;
  t.topic = 0;
  t.term = "x";
  for (size_t i = 0; i < values.size(); ++i) t.years.push_back(first_year + static_cast<int>(i));
  t.values = values;
  return t;
}

// --- 1 ----------------------------------------------------------------------
void statistical_oracles(Check& c) {
  constexpr double kTol = 1e-9;
  size_t fixtures = 0;
  auto check_pair = [&](const std::vector<double>& x, const std::vector<double>& y) {
    const auto got = trends::pearson_correlation(x, y);
    const auto want = pearson_oracle(x, y);
    c.expect(close(got.r, want.r, kTol) && close(got.t_stat, want.t, kTol) && close(got.p_value, want.p, kTol),
             "pearson mismatch on fixture " + std::to_string(fixtures));
    std::vector<double> years(x.size());
    std::iota(years.begin(), years.end(), 2009.0);
    const auto f = trends::ols_forecast(series(y), 0);
    const auto o = ols_oracle(years, y);
    c.expect(close(f.slope, o.slope, kTol) && close(f.intercept, o.intercept, 1e-9) && close(f.rse, o.rse, kTol) &&
                 close(f.slope_p_value, o.p, kTol),
             "ols mismatch on fixture " + std::to_string(fixtures));
    ++fixtures;
  };

  // Hand-derived values.
  const auto r = trends::pearson_correlation(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 3, 2, 4});
  c.expect(std::fabs(r.r - 0.8) <= kTol, "r = 0.8 fixture");
  auto t = series({1, 2, 2, 3}, 1);
  const auto f = trends::ols_forecast(t, 1);
  c.expect(std::fabs(f.slope - 0.6) <= kTol, "slope 0.6 fixture");
  c.expect(std::fabs(f.intercept - 0.5) <= kTol, "intercept 0.5 fixture");
  c.expect(std::fabs(f.rse - std::sqrt(0.1)) <= kTol && std::fabs(f.rse - 0.31623) < 5e-6, "RSE 0.31623 fixture");
  {
    const auto bow = make_bow({{0, 1}, {0, 1}, {0, 2}}, 3);
    const auto u = coherence::umass_coherence({{0, 2}, {0, 1}}, bow, 10);
    c.expect(std::fabs(u.per_topic[0] - std::log(2.0 / 3.0)) <= kTol, "UMass log(2/3) fixture");
    c.expect(std::fabs(u.per_topic[1]) <= kTol, "UMass 0 fixture");
  }

  // Random fixtures with n <= 10.
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 4 + rng.index(7);
    std::vector<double> x(n), y(n);
    for (size_t i = 0; i < n; ++i) {
      x[i] = rng.uniform();
      y[i] = 0.3 * x[i] + 0.1 * rng.uniform();
    }
    check_pair(x, y);
  }
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<uint32_t>> docs;
    const size_t nd = 3 + rng.index(8);
    for (size_t d = 0; d < nd; ++d) {
      std::vector<uint32_t> doc;
      for (int i = 0; i < 6; ++i) doc.push_back(static_cast<uint32_t>(rng.index(8)));
      docs.push_back(doc);
    }
    const auto bow = make_bow(docs, 8);
    std::vector<uint32_t> present;
    for (uint32_t w = 0; w < 8; ++w) {
      for (const auto& d : bow.docs) {
        if (std::any_of(d.begin(), d.end(), [&](const auto& tc) { return tc.term == w; })) {
          present.push_back(w);
          break;
        }
      }
    }
    if (present.size() < 2) continue;
    const auto u = coherence::umass_coherence({present}, bow, 10);
    c.expect(close(u.per_topic[0], umass_oracle(present, bow), kTol), "UMass brute-force mismatch");
    ++fixtures;
  }
  c.detail << fixtures << " random fixtures plus hand-derived r, OLS and UMass values at 1e-9";
}

// --- 2 ----------------------------------------------------------------------
void gate_rules(Check& c) {
  c.expect(!trends::method_gate(3, trends::Method::kRegression).permitted, "regression gate at n = 3");
  c.expect(trends::method_gate(4, trends::Method::kRegression).permitted, "regression gate at n = 4");
  c.expect_throw([] { trends::ols_forecast(series({0.1, 0.2, 0.3}), 1); }, "ols_forecast with n = 3");
  c.expect(!trends::method_gate(10, trends::Method::kArima).permitted, "ARIMA gate at n = 10");

  std::vector<std::vector<std::string>> docs(5000);
  for (size_t d = 0; d < docs.size(); ++d) {
    docs[d].push_back("filler");
    if (d < 99) docs[d].push_back("df_ninety_nine");
    if (d < 100) docs[d].push_back("df_hundred");
    if (d < 4800) docs[d].push_back("df_ninety_six_pct");
    if (d < 4750) docs[d].push_back("df_ninety_five_pct");
  }
  const auto dict = preprocess::build_dictionary(docs);
  c.expect(dict.find("df_ninety_nine") < 0, "term in 99 of 5000 docs excluded");
  c.expect(dict.find("df_hundred") >= 0, "term in 100 of 5000 docs included");
  c.expect(dict.find("df_ninety_six_pct") < 0, "term in 96% of docs excluded");
  c.expect(dict.find("df_ninety_five_pct") >= 0, "term in 95% of docs included");
  c.expect(dict.find("filler") < 0, "term in every doc excluded");
  c.detail << "n=3 regression refused, n=10 ARIMA refused, df 99/100 and 96%/95% boundaries";
}

// --- 3 ----------------------------------------------------------------------
void lda_recovery(Check& c) {
  const auto corpus = separable_corpus();
  lda::LdaOptions opts;
  opts.num_topics = 2;
  opts.seed = 42;
  const auto start = Clock::now();
  const auto m = lda::fit_lda(corpus.bow, opts);
  const double elapsed = seconds_since(start);
  const auto again = lda::fit_lda(corpus.bow, opts);
  size_t agree = 0;
  for (size_t d = 0; d < corpus.truth.size(); ++d) {
    const int k = m.theta(static_cast<Eigen::Index>(d), 0) >= m.theta(static_cast<Eigen::Index>(d), 1) ? 0 : 1;
    agree += k == corpus.truth[d];
  }
  const double n = static_cast<double>(corpus.truth.size());
  const double purity = std::max(agree / n, 1.0 - agree / n);
  c.expect(purity >= 0.9, "purity " + std::to_string(purity) + " < 0.9");
  c.expect(m.phi == again.phi && m.theta == again.theta, "refit with the same seed differs");
  c.expect(elapsed < 30.0, "fit took " + std::to_string(elapsed) + " s");
  c.detail << "purity " << purity << ", bit-identical refit, " << elapsed << " s";
}

// --- 4 ----------------------------------------------------------------------
void dtm_properties(Check& c) {
  const auto drift = drift_corpus();
  dtm::DtmOptions opts;
  opts.num_topics = 2;
  opts.seed = 5;
  const auto start = Clock::now();
  const auto m = dtm::fit_dtm(drift.bow, opts);
  const double elapsed = seconds_since(start);

  double worst_norm = 0;
  for (size_t t = 0; t < m.num_slices; ++t) {
    for (int k = 0; k < m.num_topics; ++k) {
      const auto row = m.topic_at(t, k);
      worst_norm = std::max(worst_norm, std::fabs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0));
    }
  }
  c.expect(worst_norm <= 1e-6, "normalization error " + std::to_string(worst_norm));

  double worst_drop = 0;
  for (size_t i = 1; i < m.elbo_trace.size(); ++i) {
    const double rel = (m.elbo_trace[i - 1] - m.elbo_trace[i]) / std::fabs(m.elbo_trace[i - 1]);
    worst_drop = std::max(worst_drop, rel);
  }
  c.expect(worst_drop <= 1e-6, "ELBO decreased by relative " + std::to_string(worst_drop));

  // The car topic is the one holding petrol and battery.
  auto mass = [&](int k) { return m.prob(0, k, drift.petrol) + m.prob(m.num_slices - 1, k, drift.battery); };
  const int car = mass(0) >= mass(1) ? 0 : 1;
  std::vector<double> petrol, battery;
  for (size_t t = 0; t < m.num_slices; ++t) {
    petrol.push_back(m.prob(t, car, drift.petrol));
    battery.push_back(m.prob(t, car, drift.battery));
  }
  const size_t down = longest_monotone(petrol, false);
  const size_t up = longest_monotone(battery, true);
  c.expect(down >= 4, "petrol monotone decreasing over only " + std::to_string(down) + " of 5 slices");
  c.expect(up >= 4, "battery monotone increasing over only " + std::to_string(up) + " of 5 slices");
  c.expect(elapsed < 120.0, "fit took " + std::to_string(elapsed) + " s");

  auto pinned_opts = opts;
  pinned_opts.chain_variance = 1e-8;
  const auto pinned = dtm::fit_dtm(drift.bow, pinned_opts);
  double deviation = 0;
  for (size_t t = 1; t < pinned.num_slices; ++t) {
    for (int k = 0; k < pinned.num_topics; ++k) {
      for (size_t w = 0; w < pinned.vocab_size; ++w) {
        deviation = std::max(deviation, std::fabs(pinned.prob(t, k, w) - pinned.prob(0, k, w)));
      }
    }
  }
  c.expect(deviation < 0.05, "pinned max deviation " + std::to_string(deviation));
  c.detail << "norm err " << worst_norm << ", max ELBO drop " << worst_drop << ", petrol/battery monotone runs "
           << down << "/" << up << ", pinned deviation " << deviation << ", drift fit " << elapsed << " s";

  // Timing at the stated scale: 1000 documents, V = 500, K = 2.
  const auto big = drift_corpus(200, 50, 4, 490);
  const auto big_start = Clock::now();
  const auto big_model = dtm::fit_dtm(big.bow, opts);
  const double big_elapsed = seconds_since(big_start);
  c.expect(big.bow.docs.size() == 1000 && big.bow.vocab_size == 500, "timing corpus shape");
  c.expect(big_elapsed < 120.0, "1000 docs / V=500 fit took " + std::to_string(big_elapsed) + " s");
  c.detail << ", 1000 docs V=500 fit " << big_elapsed << " s (" << big_model.elbo_trace.size() << " EM iterations)";
}

// --- 5 ----------------------------------------------------------------------
void model_selection(Check& c) {
  const auto bow = planted_two_topic_corpus();
  coherence::SelectOptions opts;
  opts.lda.seed = 17;
  const auto sel = coherence::select_k(bow, {2, 3, 4, 5}, opts);
  c.expect(sel.best_k == 2 || sel.best_k == 3, "best_k = " + std::to_string(sel.best_k));
  c.expect(sel.curve.size() == 4, "curve has " + std::to_string(sel.curve.size()) + " rows");
  const auto rows = csv::parse(coherence::curve_csv(sel));
  c.expect(rows.size() == 5, "curve CSV has a header plus one row per candidate");
  c.detail << "best_k " << sel.best_k << ", coherence";
  for (const auto& p : sel.curve) c.detail << " K" << p.num_topics << "=" << io::format_number(p.coherence);
}

// --- 6 ----------------------------------------------------------------------
std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = io::read_file(e.path());
  }
  return out;
}

void pipeline_determinism(Check& c) {
  const fs::path conf = fs::path(IDEAMINER_SOURCE_DIR) / "data" / "demo" / "demo.conf";
  const fs::path base = fs::temp_directory_path() / ("ideaminer_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(base);
  std::vector<std::map<std::string, std::string>> bundles;
  double elapsed = 0;
  for (int i = 0; i < 2; ++i) {
    const fs::path out = base / ("run" + std::to_string(i));
    auto cfg = config::load_config(conf, {}, {{"out", out.string()}});
    const auto start = Clock::now();
    const int code = pipeline::Pipeline(cfg).run();
    elapsed = seconds_since(start);
    c.expect(code == pipeline::kExitOk, "run exit code " + std::to_string(code));
    bundles.push_back(read_tree(out / pipeline::kReportDir));
  }
  c.expect(!bundles[0].empty() && bundles[0] == bundles[1], "bundles differ between runs");

  const std::string& md = bundles[0]["report.md"];
  std::vector<std::string> sections;
  std::istringstream lines(md);
  std::string line;
  std::vector<std::string> table_lines;
  while (std::getline(lines, line)) {
    if (line.rfind("## Phase ", 0) == 0) sections.push_back(line);
    if (line.rfind("|", 0) == 0 && line.rfind("| ---", 0) != 0) table_lines.push_back(line);
  }
  std::vector<std::string> expected;
  for (const auto& p : report::kPhases) {
    expected.push_back("## Phase " + std::to_string(p.number) + ": " + std::string(p.name));
  }
  c.expect(sections == expected, "phase sections missing or out of order");

  std::set<std::string> exported;
  for (const auto& [name, content] : bundles[0]) {
    if (name.rfind("csv/", 0) != 0) continue;
    for (const auto& row : csv::parse(content)) exported.insert(row.begin(), row.end());
  }
  const std::regex number(R"(-?\d+(?:\.\d+)?(?:e[-+]\d+)?)");
  size_t checked = 0, missing = 0;
  for (const auto& l : table_lines) {
    for (auto it = std::sregex_iterator(l.begin(), l.end(), number); it != std::sregex_iterator(); ++it) {
      ++checked;
      if (!exported.count(it->str())) {
        ++missing;
        if (missing <= 3) c.expect(false, "table number " + it->str() + " not in any CSV export");
      }
    }
  }
  c.expect(checked > 0, "no table numbers found");
  c.expect(elapsed < 300.0, "demo run took " + std::to_string(elapsed) + " s");
  fs::remove_all(base);
  c.detail << bundles[0].size() << " identical files, 6 sections in order, " << checked
           << " table numbers all exported, demo run " << elapsed << " s";
}

// --- 7 ----------------------------------------------------------------------
void dedup_ingestion(Check& c) {
  const std::string header = "Title,Abstract,Year,DOI,Source title\n";
  std::vector<std::pair<std::string, std::string>> batches;
  const std::vector<size_t> sizes = {2000, 2000, 1425};
  size_t serial = 0;
  for (size_t b = 0; b < sizes.size(); ++b) {
    std::string text = header;
    for (size_t i = 0; i < sizes[b]; ++i, ++serial) {
      text += csv::format_row({"Record number " + std::to_string(serial) + ", on driving", "Abstract text",
                               std::to_string(2009 + serial % 10), "10.1000/rec." + std::to_string(serial),
                               "Venue"});
    }
    batches.emplace_back("batch" + std::to_string(b) + ".csv", text);
  }
  const auto parsed = corpus::parse_bibliographic_csv_text(batches);
  c.expect(parsed.records.size() == 5425, "parsed " + std::to_string(parsed.records.size()) + " records");
  const auto clean = corpus::deduplicate(parsed.records);
  c.expect(clean.corpus.size() == 5425 && clean.report.removed_by_id == 0 && clean.report.removed_by_title == 0,
           "clean fixture lost records");

  // 30 DOI re-spellings, 20 retyped titles without DOI, and 5 same-title
  // records from another year that must survive.
  std::string extra = header;
  for (size_t i = 0; i < 30; ++i) {
    extra += csv::format_row({"Different title " + std::to_string(i), "", std::to_string(2009 + (i * 7) % 10),
                              "https://doi.org/10.1000/REC." + std::to_string(i * 7), ""});
  }
  for (size_t i = 0; i < 20; ++i) {
    const size_t s = 100 + i * 11;
    extra += csv::format_row({"  RECORD NUMBER " + std::to_string(s) + " ON DRIVING!", "",
                              std::to_string(2009 + s % 10), "", ""});
  }
  for (size_t i = 0; i < 5; ++i) {
    const size_t s = 500 + i;
    extra += csv::format_row({"Record number " + std::to_string(s) + ", on driving", "",
                              std::to_string(2009 + (s + 1) % 10), "", ""});
  }
  batches.emplace_back("duplicates.csv", extra);
  const auto with_dups = corpus::parse_bibliographic_csv_text(batches);
  const auto dedup = corpus::deduplicate(with_dups.records);
  c.expect(with_dups.records.size() == 5480, "parsed " + std::to_string(with_dups.records.size()) + " with duplicates");
  c.expect(dedup.report.removed_by_id == 30, "removed_by_id = " + std::to_string(dedup.report.removed_by_id));
  c.expect(dedup.report.removed_by_title == 20,
           "removed_by_title = " + std::to_string(dedup.report.removed_by_title));
  c.expect(dedup.corpus.size() == 5430, "kept " + std::to_string(dedup.corpus.size()));
  c.detail << "5425 parsed from 2000+2000+1425; 30 by DOI and 20 by title+year collapsed, 5 other-year kept";
}

// --- 8 ----------------------------------------------------------------------
void trend_classification(Check& c) {
  const std::vector<double> rising = {0.010, 0.014, 0.017, 0.022, 0.024, 0.029, 0.033, 0.036, 0.041, 0.044};
  const std::vector<double> falling = {0.090, 0.085, 0.081, 0.074, 0.071, 0.066, 0.060, 0.057, 0.052, 0.047};
  const std::vector<double> noise = {0.050, 0.053, 0.047, 0.052, 0.049, 0.051, 0.046, 0.054, 0.048, 0.050};
  auto classify = [](std::vector<double> v) { return trends::classify_trend(trends::ols_forecast(series(v), 3)); };
  auto reversed = [](std::vector<double> v) {
    std::reverse(v.begin(), v.end());
    return v;
  };
  c.expect(classify(rising) == trends::Trend::kIncreasing, "rising fixture");
  c.expect(classify(falling) == trends::Trend::kDecreasing, "falling fixture");
  c.expect(classify(noise) == trends::Trend::kFlat, "insignificant fixture");
  c.expect(classify(reversed(rising)) == trends::Trend::kDecreasing, "reversed rising fixture");
  c.expect(classify(reversed(falling)) == trends::Trend::kIncreasing, "reversed falling fixture");
  c.expect(classify(reversed(noise)) == trends::Trend::kFlat, "reversed insignificant fixture");
  c.detail << "increasing/decreasing/flat fixtures and their reversals";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
      {"statistical oracles", statistical_oracles},
      {"method and dictionary gates", gate_rules},
      {"LDA recovery", lda_recovery},
      {"DTM properties", dtm_properties},
      {"model selection", model_selection},
      {"pipeline determinism", pipeline_determinism},
      {"dedup and ingestion", dedup_ingestion},
      {"trend classification", trend_classification},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " -- "
              << (c.ok ? c.detail.str() : "") ;
    for (const auto& f : c.failures) std::cout << "[" << f << "] ";
    std::cout << std::endl;
    failed += !c.ok;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed ? 1 : 0;
}
