#include "ideaminer/report.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ideaminer/csv.hpp"
#include "ideaminer/error.hpp"
#include "ideaminer/io.hpp"
#include "ideaminer/rng.hpp"

namespace ideaminer::report {
namespace {

using io::format_number;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::pair<std::string, std::string>> parse_tsv_pairs(std::string_view text, const char* what) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(std::string(what) + " line " + std::to_string(line_no) + ": expected two tab-separated fields");
    }
    out.emplace_back(trim(line.substr(0, tab)), trim(line.substr(tab + 1)));
  }
  return out;
}

std::string expand_acronyms(const std::string& label, const std::map<std::string, std::string>& acronyms) {
  if (acronyms.empty()) return label;
  std::string out;
  std::string word;
  auto flush = [&] {
    if (word.empty()) return;
    const auto it = acronyms.find(word);
    out += it == acronyms.end() ? word : it->second;
    word.clear();
  };
  for (char c : label) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || static_cast<unsigned char>(c) >= 0x80) {
      word.push_back(c);
    } else {
      flush();
      out.push_back(c);
    }
  }
  flush();
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string md_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else if (c == '\n') out += ' ';
    else out.push_back(c);
  }
  return out;
}

class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
  void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }
  std::string render() const {
    std::string out = line(header_);
    out += "|";
    for (size_t i = 0; i < header_.size(); ++i) out += " --- |";
    out += "\n";
    for (const auto& r : rows_) out += line(r);
    return out + "\n";
  }
  bool empty() const { return rows_.empty(); }

 private:
  static std::string line(const std::vector<std::string>& cells) {
    std::string out = "|";
    for (const auto& c : cells) out += " " + md_escape(c) + " |";
    return out + "\n";
  }
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string label_source(LabelSource s) { return s == LabelSource::kUser ? "user" : "default"; }

std::string missing(int phase, std::string_view subcommand) {
  return "cannot render the report: results of phase '" + std::string(phase_name(phase)) +
         "' are missing; rerun `ideaminer " + std::string(subcommand) + "`";
}

// Status of each phase from its latest log entry.
std::string phase_status(const PhaseLog& log, int phase) {
  const PhaseEntry* last = nullptr;
  for (const auto& e : log.entries()) {
    if (e.phase == phase) last = &e;
  }
  if (!last) return "not run";
  return last->go ? "go" : "no-go";
}

std::vector<std::string> phase_decisions(const PhaseLog& log, int phase) {
  std::vector<std::string> out;
  for (const auto& e : log.entries()) {
    if (e.phase != phase) continue;
    for (const auto& d : e.decisions) out.push_back(d);
    if (e.back_transition) {
      out.push_back(std::string(e.go ? "option: " : "no-go: ") + "back to " +
                    std::string(phase_name(*e.back_transition)));
    }
  }
  return out;
}

const std::vector<std::string>& limitations() {
  static const std::vector<std::string> kNotes = {
      "Perplexity values are in-sample: they are computed on the training corpus from point estimates.",
      "Topic coherence is the UMass measure computed from document co-occurrence counts in the corpus; "
      "sliding-window coherence measures are not implemented.",
      "The number of topics is selected with static LDA fits; the dynamic model is fitted once with the "
      "selected K.",
      "Forecasts are ordinary least squares on calendar year. Predictions are clamped to [0, 1]; unclamped "
      "values are kept in forecasts.csv.",
      "ARIMA forecasting is not implemented. It is refused below 50 observations.",
      "Idea candidates are unscored signals. The evaluation checklist must be completed by analysts, and the "
      "prompt sentences are scaffolding rather than ideas.",
  };
  return kNotes;
}

}  // namespace

std::map<int, std::string> parse_labels_file(std::string_view text) {
  std::map<int, std::string> out;
  for (const auto& [index, label] : parse_tsv_pairs(text, "labels file")) {
    int k = 0;
    try {
      size_t used = 0;
      k = std::stoi(index, &used);
      if (used != index.size() || k < 0) throw std::invalid_argument(index);
    } catch (const std::exception&) {
      throw Error("labels file: '" + index + "' is not a topic index");
    }
    if (label.empty()) throw Error("labels file: empty label for topic " + index);
    out[k] = label;
  }
  return out;
}

std::map<std::string, std::string> parse_acronyms_file(std::string_view text) {
  std::map<std::string, std::string> out;
  for (auto& [a, e] : parse_tsv_pairs(text, "acronyms file")) out[a] = e;
  return out;
}

std::vector<TopicLabel> label_topics(const dtm::DtmModel& model, const std::map<int, std::string>& user_labels,
                                     const std::map<std::string, std::string>& acronyms) {
  for (const auto& [k, label] : user_labels) {
    if (k < 0 || k >= model.num_topics) {
      throw Error("labels file names topic " + std::to_string(k) + " but the model has " +
                  std::to_string(model.num_topics) + " topics");
    }
  }
  std::vector<TopicLabel> out;
  for (int k = 0; k < model.num_topics; ++k) {
    TopicLabel l;
    l.topic = k;
    if (const auto it = user_labels.find(k); it != user_labels.end()) {
      l.label = it->second;
      l.source = LabelSource::kUser;
    } else {
      std::vector<std::string> terms;
      for (const auto& [term, p] : dtm::top_terms_at_slice(model, k, model.num_slices - 1, 3)) terms.push_back(term);
      l.label = join(terms, "/");
    }
    l.label = expand_acronyms(l.label, acronyms);
    out.push_back(std::move(l));
  }
  return out;
}

std::string labels_template(const std::vector<TopicLabel>& labels) {
  std::string out = "# index<TAB>label; edit and pass back with labels_file\n";
  for (const auto& l : labels) out += std::to_string(l.topic) + "\t" + l.label + "\n";
  return out;
}

std::vector<IdeaCandidate> generate_idea_candidates(const std::vector<trends::TermTrend>& trend_results,
                                                    const std::vector<trends::CorrelationResult>& correlations,
                                                    const std::vector<TopicLabel>& labels,
                                                    const IdeaOptions& options) {
  std::map<int, std::string> label_of;
  for (const auto& l : labels) label_of[l.topic] = l.label;
  auto topic_label = [&](int topic) {
    const auto it = label_of.find(topic);
    return it == label_of.end() ? "topic " + std::to_string(topic) : it->second;
  };
  std::map<std::pair<int, std::string>, TrendEvidence> evidence;
  for (const auto& t : trend_results) {
    TrendEvidence e;
    e.term = t.forecast.term;
    e.classification = trends::classify_trend(t.forecast, options.alpha_level);
    e.slope = t.forecast.slope;
    e.p_value = t.forecast.slope_p_value;
    evidence[{t.forecast.topic, t.forecast.term}] = e;
  }
  auto unscored = [] {
    std::map<std::string, std::string> c;
    for (auto key : kChecklistKeys) c[std::string(key)] = "unscored";
    return c;
  };

  std::vector<IdeaCandidate> out;
  for (const auto& [key, e] : evidence) {
    if (e.classification != trends::Trend::kIncreasing) continue;
    IdeaCandidate c;
    c.topic = key.first;
    c.terms = {e.term};
    c.trend_evidence = {e};
    c.prompt = "Rising attention to " + e.term + " in " + topic_label(c.topic) + ": consider solutions centred on " +
               e.term;
    c.checklist = unscored();
    out.push_back(std::move(c));
  }
  std::vector<const trends::CorrelationResult*> pairs;
  for (const auto& r : correlations) pairs.push_back(&r);
  std::sort(pairs.begin(), pairs.end(), [](const auto* a, const auto* b) {
    return std::tie(a->topic, a->term_a, a->term_b) < std::tie(b->topic, b->term_a, b->term_b);
  });
  for (const auto* r : pairs) {
    if (std::abs(r->r) < options.min_r || !(r->p_value < options.alpha_level)) continue;
    const auto ea = evidence.find({r->topic, r->term_a});
    const auto eb = evidence.find({r->topic, r->term_b});
    const bool a_up = ea != evidence.end() && ea->second.classification == trends::Trend::kIncreasing;
    const bool b_up = eb != evidence.end() && eb->second.classification == trends::Trend::kIncreasing;
    if (!a_up && !b_up) continue;
    IdeaCandidate c;
    c.topic = r->topic;
    c.terms = {r->term_a, r->term_b};
    if (ea != evidence.end()) c.trend_evidence.push_back(ea->second);
    if (eb != evidence.end()) c.trend_evidence.push_back(eb->second);
    c.correlation = CorrelationEvidence{r->r, r->p_value, r->n};
    std::string rising;
    if (a_up && b_up) {
      rising = r->term_a + " and " + r->term_b;
    } else {
      rising = a_up ? r->term_a : r->term_b;
    }
    c.prompt = "Rising attention to " + rising + " in " + topic_label(c.topic) + ": consider solutions combining " +
               r->term_a + " and " + r->term_b;
    c.checklist = unscored();
    out.push_back(std::move(c));
  }
  return out;
}

Bundle render_report(const ReportInputs& in, const PhaseLog& log) {
  if (!in.ingest) throw Error(missing(2, "ingest"));
  if (!in.preprocess) throw Error(missing(3, "preprocess"));
  if (!in.selection || !in.model) throw Error(missing(4, in.selection ? "fit" : "select-k"));
  if (!in.trends) throw Error(missing(5, "trends"));

  const auto& ing = *in.ingest;
  const auto& pre = *in.preprocess;
  const auto& sel = *in.selection;
  const auto& model = *in.model;
  const auto& tr = *in.trends;
  const std::vector<TopicLabel> labels = in.labels.empty() ? label_topics(model) : in.labels;
  const auto ideas = generate_idea_candidates(tr.trends, tr.correlations, labels, in.ideas);

  Bundle bundle;
  std::string& md = bundle["report.md"];

  // --- machine-readable exports ---------------------------------------------
  {
    std::string s = "phase,metric,value\n";
    auto add = [&](int phase, const std::string& metric, const std::string& value) {
      s += csv::format_row({std::to_string(phase), metric, value});
    };
    add(2, "rows_parsed", std::to_string(ing.parse.parsed));
    add(2, "rows_skipped", std::to_string(ing.parse.skipped));
    add(2, "removed_by_id", std::to_string(ing.dedup.removed_by_id));
    add(2, "removed_by_title", std::to_string(ing.dedup.removed_by_title));
    add(2, "dropped_out_of_range", std::to_string(ing.dropped_out_of_range));
    add(2, "records", std::to_string(ing.records));
    add(2, "first_year", std::to_string(ing.first_year));
    add(2, "last_year", std::to_string(ing.last_year));
    add(3, "mode", pre.mode);
    add(3, "vocabulary_size", std::to_string(pre.vocab_size));
    add(3, "documents", std::to_string(pre.documents));
    add(3, "dropped_documents", std::to_string(pre.dropped_documents));
    add(3, "tokens", std::to_string(pre.tokens));
    add(3, "bigrams_accepted", std::to_string(pre.bigrams_accepted));
    add(3, "min_doc_count", std::to_string(pre.min_doc_count));
    add(3, "max_doc_fraction", format_number(pre.max_doc_fraction));
    add(4, "selected_k", std::to_string(sel.best_k));
    add(4, "dtm_topics", std::to_string(model.num_topics));
    add(4, "dtm_slices", std::to_string(model.num_slices));
    add(4, "dtm_em_iterations", std::to_string(model.elbo_trace.size()));
    add(4, "dtm_converged", model.converged ? "yes" : "no");
    add(4, "dtm_final_elbo", model.elbo_trace.empty() ? "none" : format_number(model.elbo_trace.back()));
    add(4, "dtm_chain_variance", format_number(model.chain_variance));
    add(5, "idea_candidates", std::to_string(ideas.size()));
    bundle["csv/summary.csv"] = s;
  }
  {
    std::string s = "year,documents\n";
    for (size_t t = 0; t < ing.slice_sizes.size(); ++t) {
      s += csv::format_row({std::to_string(ing.first_year + static_cast<int>(t)), std::to_string(ing.slice_sizes[t])});
    }
    bundle["csv/slices.csv"] = s;
  }
  bundle["csv/frequency.csv"] = preprocess::frequency_csv(pre.frequency);
  bundle["csv/coherence_curve.csv"] = coherence::curve_csv(sel);
  {
    std::string s = "topic,year,rank,term,probability\n";
    for (int k = 0; k < model.num_topics; ++k) {
      for (size_t t = 0; t < model.num_slices; ++t) {
        size_t rank = 1;
        for (const auto& [term, p] : dtm::top_terms_at_slice(model, k, t, in.topic_table_terms)) {
          s += csv::format_row({std::to_string(k), std::to_string(model.slice_years[t]), std::to_string(rank++), term,
                                format_number(p)});
        }
      }
    }
    bundle["csv/topic_terms.csv"] = s;
  }
  {
    std::vector<dtm::TermTrajectory> trajectories;
    for (const auto& t : tr.trends) trajectories.push_back(dtm::topic_term_trajectory(model, t.forecast.topic, t.forecast.term));
    bundle["csv/trajectories.csv"] = dtm::trajectories_csv(trajectories);
  }
  bundle["csv/trends.csv"] = trends::trends_csv(tr.trends);
  bundle["csv/forecasts.csv"] = trends::forecasts_csv(tr.trends);
  bundle["csv/correlations.csv"] = trends::correlations_csv(tr.correlations);
  {
    std::string s = "topic,label,source\n";
    for (const auto& l : labels) s += csv::format_row({std::to_string(l.topic), l.label, label_source(l.source)});
    bundle["csv/labels.csv"] = s;
  }
  {
    std::string s = "index,topic,terms,r,p_value,prompt\n";
    for (size_t i = 0; i < ideas.size(); ++i) {
      const auto& c = ideas[i];
      s += csv::format_row({std::to_string(i + 1), std::to_string(c.topic), join(c.terms, "+"),
                            c.correlation ? format_number(c.correlation->r) : "",
                            c.correlation ? format_number(c.correlation->p_value) : "", c.prompt});
    }
    bundle["csv/ideas.csv"] = s;
  }
  bundle["labels.txt"] = labels_template(labels);
  bundle["phase_log.json"] = log.to_json();

  // --- human-readable document ----------------------------------------------
  md += "# Idea mining report\n\n";
  md += "Topics of " + std::to_string(ing.first_year) + "-" + std::to_string(ing.last_year) +
        " scholarly records, their evolution and the term trends behind candidate ideas.\n\n";
  md += "## Process map\n\n";
  {
    Table t({"CRISP-DM", "Idea mining phase", "Status"});
    for (const auto& p : kPhases) t.row({std::string(p.crisp_dm_name), std::string(p.name), phase_status(log, p.number)});
    md += t.render();
  }

  auto section = [&](int phase) {
    md += "## Phase " + std::to_string(phase) + ": " + std::string(phase_name(phase)) + "\n\n";
    const auto decisions = phase_decisions(log, phase);
    if (!decisions.empty()) {
      md += "Decisions and notes:\n\n";
      for (const auto& d : decisions) md += "- " + d + "\n";
      md += "\n";
    }
  };

  section(1);
  md += "Goals: " + (in.goals.empty() ? std::string("(not stated)") : in.goals) + "\n\n";
  md += "Success criteria: " + (in.success_criteria.empty() ? std::string("(not stated)") : in.success_criteria) +
        "\n\n";

  section(2);
  {
    Table t({"Metric", "Value"});
    t.row({"rows parsed", std::to_string(ing.parse.parsed)});
    t.row({"rows skipped", std::to_string(ing.parse.skipped)});
    t.row({"duplicates removed by id", std::to_string(ing.dedup.removed_by_id)});
    t.row({"duplicates removed by title and year", std::to_string(ing.dedup.removed_by_title)});
    t.row({"records outside the year range", std::to_string(ing.dropped_out_of_range)});
    t.row({"records retained", std::to_string(ing.records)});
    md += t.render();
    Table s({"Year", "Documents"});
    for (size_t i = 0; i < ing.slice_sizes.size(); ++i) {
      s.row({std::to_string(ing.first_year + static_cast<int>(i)), std::to_string(ing.slice_sizes[i])});
    }
    md += s.render();
  }

  section(3);
  {
    Table t({"Metric", "Value"});
    t.row({"root form mode", pre.mode});
    t.row({"vocabulary size", std::to_string(pre.vocab_size)});
    t.row({"documents", std::to_string(pre.documents)});
    t.row({"documents dropped (empty after filtering)", std::to_string(pre.dropped_documents)});
    t.row({"tokens", std::to_string(pre.tokens)});
    t.row({"bigrams accepted", std::to_string(pre.bigrams_accepted)});
    t.row({"minimum document count", std::to_string(pre.min_doc_count)});
    t.row({"maximum document fraction", format_number(pre.max_doc_fraction)});
    md += t.render();
    md += "Most frequent terms (full list in csv/frequency.csv):\n\n";
    Table f({"Term", "Count", "Documents"});
    for (size_t i = 0; i < std::min<size_t>(20, pre.frequency.size()); ++i) {
      const auto& r = pre.frequency[i];
      f.row({r.term, std::to_string(r.count), std::to_string(r.doc_freq)});
    }
    md += f.render();
  }

  section(4);
  {
    md += "Topic coherence per candidate number of topics (UMass, in-sample perplexity):\n\n";
    Table t({"K", "Coherence", "Perplexity"});
    for (const auto& p : sel.curve) {
      t.row({std::to_string(p.num_topics), format_number(p.coherence), format_number(p.perplexity)});
    }
    md += t.render();
    Table m({"Metric", "Value"});
    m.row({"selected K (highest coherence)", std::to_string(sel.best_k)});
    m.row({"dynamic model topics", std::to_string(model.num_topics)});
    m.row({"time slices", std::to_string(model.num_slices)});
    m.row({"EM iterations", std::to_string(model.elbo_trace.size())});
    m.row({"converged", model.converged ? "yes" : "no"});
    m.row({"final ELBO", model.elbo_trace.empty() ? "none" : format_number(model.elbo_trace.back())});
    m.row({"chain variance", format_number(model.chain_variance)});
    md += m.render();
  }

  section(5);
  {
    md += "### Topic labels\n\n";
    Table l({"Topic", "Label", "Source"});
    for (const auto& x : labels) l.row({std::to_string(x.topic), x.label, label_source(x.source)});
    md += l.render();

    md += "### Topics per time slice\n\n";
    for (int k = 0; k < model.num_topics; ++k) {
      md += "Topic " + std::to_string(k) + " (" + md_escape(labels[static_cast<size_t>(k)].label) + "):\n\n";
      Table t({"Year", "Top terms"});
      for (size_t s = 0; s < model.num_slices; ++s) {
        std::vector<std::string> cells;
        for (const auto& [term, p] : dtm::top_terms_at_slice(model, k, s, in.topic_table_terms)) {
          cells.push_back(term + " " + format_number(p));
        }
        t.row({std::to_string(model.slice_years[s]), join(cells, ", ")});
      }
      md += t.render();
    }

    md += "### Term trends\n\n";
    md += "Regression gate: " + tr.gate_regression + ". ARIMA gate: " + tr.gate_arima + ".\n\n";
    for (const auto& n : tr.notes) md += "- " + n + "\n";
    if (!tr.notes.empty()) md += "\n";
    Table t({"Topic", "Term", "Slope", "p-value", "R squared", "Trend"});
    for (const auto& x : tr.trends) {
      t.row({std::to_string(x.forecast.topic), x.forecast.term, format_number(x.forecast.slope),
             format_number(x.forecast.slope_p_value), format_number(x.forecast.r_squared),
             std::string(trends::to_string(x.classification))});
    }
    if (!t.empty()) md += t.render();

    md += "### Forecasts for significant trends\n\n";
    Table f({"Topic", "Term", "Year", "Predicted", "Unclamped", "Clamped"});
    for (const auto& x : tr.trends) {
      if (x.classification == trends::Trend::kFlat) continue;
      for (const auto& h : x.forecast.horizon) {
        f.row({std::to_string(x.forecast.topic), x.forecast.term, std::to_string(h.year), format_number(h.predicted),
               format_number(h.unclamped), h.clamped ? "1" : "0"});
      }
    }
    if (f.empty()) {
      md += "No significant trends.\n\n";
    } else {
      md += f.render();
    }

    md += "### Associated terms\n\n";
    md += "Pairs with |r| >= " + format_number(in.ideas.min_r) + " (all pairs in csv/correlations.csv):\n\n";
    Table c({"Topic", "Term A", "Term B", "r", "p-value", "n"});
    for (const auto& x : tr.correlations) {
      if (std::abs(x.r) < in.ideas.min_r) continue;
      c.row({std::to_string(x.topic), x.term_a, x.term_b, format_number(x.r), format_number(x.p_value),
             std::to_string(x.n)});
    }
    if (c.empty()) {
      md += "None.\n\n";
    } else {
      md += c.render();
    }

    md += "### Idea candidates\n\n";
    if (ideas.empty()) md += "No candidate signals at the chosen thresholds.\n\n";
    for (size_t i = 0; i < ideas.size(); ++i) {
      const auto& idea = ideas[i];
      md += "#### Candidate " + std::to_string(i + 1) + "\n\n";
      md += idea.prompt + "\n\n";
      for (const auto& e : idea.trend_evidence) {
        md += "- " + e.term + ": " + std::string(trends::to_string(e.classification)) + " (slope " +
              format_number(e.slope) + ", p " + format_number(e.p_value) + ")\n";
      }
      if (idea.correlation) {
        md += "- correlation r " + format_number(idea.correlation->r) + ", p " +
              format_number(idea.correlation->p_value) + "\n";
      }
      md += "\n";
      Table check({"Criterion", "Score"});
      for (auto key : kChecklistKeys) check.row({std::string(key), idea.checklist.at(std::string(key))});
      md += check.render();
    }
  }

  section(6);
  {
    md += "Bundle contents: report.md, report.json (index), phase_log.json, labels.txt and the plot-ready CSV "
          "exports under csv/.\n\n";
    md += "Limitations:\n\n";
    for (const auto& n : limitations()) md += "- " + n + "\n";
    md += "\n";
    Table t({"Phase", "Subcommand", "Decision", "Back-transition"});
    for (const auto& e : log.entries()) {
      t.row({std::string(phase_name(e.phase)), e.subcommand, e.go ? "go" : "no-go",
             e.back_transition ? std::string(phase_name(*e.back_transition)) : "-"});
    }
    md += t.render();
  }

  // --- index ----------------------------------------------------------------
  nlohmann::ordered_json index;
  index["format"] = "ideaminer.report";
  index["version"] = 1;
  auto files = nlohmann::ordered_json::object();
  for (const auto& [name, content] : bundle) files[name] = io::sha256_hex(content);
  index["files"] = std::move(files);
  auto phases = nlohmann::ordered_json::array();
  for (const auto& p : kPhases) {
    phases.push_back({{"phase", p.number}, {"name", p.name}, {"crisp_dm", p.crisp_dm_name},
                      {"status", phase_status(log, p.number)}});
  }
  index["phases"] = std::move(phases);
  index["selected_k"] = sel.best_k;
  index["dtm_topics"] = model.num_topics;
  index["seed"] = model.seed;
  index["rng"] = Rng::kAlgorithm;
  auto jl = nlohmann::ordered_json::array();
  for (const auto& l : labels) jl.push_back({{"topic", l.topic}, {"label", l.label}, {"source", label_source(l.source)}});
  index["labels"] = std::move(jl);
  auto ji = nlohmann::ordered_json::array();
  for (const auto& c : ideas) {
    nlohmann::ordered_json j;
    j["topic"] = c.topic;
    j["terms"] = c.terms;
    j["prompt"] = c.prompt;
    auto ev = nlohmann::ordered_json::array();
    for (const auto& e : c.trend_evidence) {
      ev.push_back({{"term", e.term}, {"classification", std::string(trends::to_string(e.classification))},
                    {"slope", format_number(e.slope)}, {"p_value", format_number(e.p_value)}});
    }
    j["trend_evidence"] = std::move(ev);
    if (c.correlation) {
      j["correlation"] = {{"r", format_number(c.correlation->r)}, {"p_value", format_number(c.correlation->p_value)},
                          {"n", c.correlation->n}};
    } else {
      j["correlation"] = nullptr;
    }
    j["checklist"] = c.checklist;
    ji.push_back(std::move(j));
  }
  index["idea_candidates"] = std::move(ji);
  index["limitations"] = limitations();
  bundle["report.json"] = index.dump(2) + "\n";
  return bundle;
}

void write_bundle(const Bundle& bundle, const std::filesystem::path& dir) {
  for (const auto& [name, content] : bundle) io::write_file_atomic(dir / name, content);
}

}  // namespace ideaminer::report
