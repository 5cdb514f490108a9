#include "ideaminer/dtm.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/digamma.hpp>
#include <nlohmann/json.hpp>

#include "ideaminer/chain_smoother.hpp"
#include "ideaminer/csv.hpp"
#include "ideaminer/error.hpp"
#include "ideaminer/io.hpp"
#include "ideaminer/lbfgs.hpp"
#include "ideaminer/rng.hpp"

namespace ideaminer::dtm {
namespace {

using boost::math::digamma;

double log_sum_exp(const double* x, size_t n, size_t stride) {
  double mx = -INFINITY;
  for (size_t i = 0; i < n; ++i) mx = std::max(mx, x[i * stride]);
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) s += std::exp(x[i * stride] - mx);
  return mx + std::log(s);
}

// Variational state of one topic: pseudo-observations and smoothed means,
// both laid out word-major ([w * T + t]) so each chain is contiguous.
struct TopicChains {
  std::vector<double> obs;
  std::vector<double> means;
};

class Fitter {
 public:
  Fitter(const preprocess::BowCorpus& bow, const DtmOptions& options)
      : bow_(bow),
        opt_(options),
        K_(static_cast<size_t>(options.num_topics)),
        T_(bow.num_slices()),
        V_(bow.vocab_size),
        smoother_(T_, options.chain_variance, options.obs_variance, options.initial_variance) {}

  DtmModel run() {
    DtmModel model;
    model.num_topics = opt_.num_topics;
    model.num_slices = T_;
    model.vocab_size = V_;
    model.chain_variance = opt_.chain_variance;
    model.obs_variance = opt_.obs_variance;
    model.initial_variance = opt_.initial_variance;
    model.alpha = opt_.alpha;
    model.seed = opt_.seed;
    model.slice_years = bow_.slice_years;
    for (size_t t = 0; t < T_; ++t) {
      if (bow_.slice_sizes[t] == 0) {
        const std::string label = t < bow_.slice_years.size() ? std::to_string(bow_.slice_years[t]) : std::to_string(t);
        model.warnings.push_back("time slice " + label + " has no documents; the chain interpolates through it");
      }
    }
    if (K_ > bow_.docs.size()) {
      model.warnings.push_back("K exceeds the number of documents");
    }

    initialize();
    double previous = 0.0;
    for (int iter = 0; iter < opt_.max_em_iters; ++iter) {
      const double doc_part = e_step();
      double elbo = doc_part;
      for (size_t k = 0; k < K_; ++k) elbo += m_step(k);
      model.elbo_trace.push_back(elbo);
      if (iter > 0) {
        const double rel = (elbo - previous) / std::abs(previous);
        if (rel < -1e-6) {
          model.warnings.push_back("ELBO decreased at iteration " + std::to_string(iter + 1) +
                                   " (relative change " + io::format_number(rel) + ")");
        }
        if (std::abs(rel) < opt_.em_tolerance) {
          model.converged = true;
          break;
        }
      }
      previous = elbo;
    }
    if (!model.converged) {
      model.warnings.push_back("EM stopped after " + std::to_string(opt_.max_em_iters) +
                               " iterations without reaching the relative ELBO tolerance");
    }

    model.means.assign(T_ * K_ * V_, 0.0);
    model.beta.assign(T_ * K_ * V_, 0.0);
    for (size_t k = 0; k < K_; ++k) {
      for (size_t t = 0; t < T_; ++t) {
        const double* m = chains_[k].means.data() + t;
        const double lse = log_sum_exp(m, V_, T_);
        double* out = model.beta.data() + (t * K_ + k) * V_;
        double* nat = model.means.data() + (t * K_ + k) * V_;
        for (size_t w = 0; w < V_; ++w) {
          nat[w] = m[w * T_];
          out[w] = std::exp(m[w * T_] - lse);
        }
      }
    }
    return model;
  }

 private:
  void initialize() {
    lda::LdaOptions lda_opt;
    lda_opt.num_topics = opt_.num_topics;
    lda_opt.alpha = opt_.alpha;
    lda_opt.iterations = opt_.init_lda_iterations;
    lda_opt.seed = opt_.seed;
    const lda::LdaModel pooled = lda::fit_lda(bow_, lda_opt);

    chains_.assign(K_, {});
    std::vector<double> m(T_), y(T_);
    for (size_t k = 0; k < K_; ++k) {
      auto& c = chains_[k];
      c.obs.assign(V_ * T_, 0.0);
      c.means.assign(V_ * T_, 0.0);
      for (size_t w = 0; w < V_; ++w) {
        std::fill(m.begin(), m.end(), std::log(pooled.phi(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(w))));
        smoother_.observations_for_means(m, y);
        std::copy(y.begin(), y.end(), c.obs.begin() + static_cast<std::ptrdiff_t>(w * T_));
        smoother_.smooth(std::span<const double>(c.obs.data() + w * T_, T_),
                         std::span<double>(c.means.data() + w * T_, T_));
      }
    }
    gamma_.assign(bow_.docs.size() * K_, 0.0);
    for (size_t d = 0; d < bow_.docs.size(); ++d) {
      double n = 0.0;
      for (const auto& tc : bow_.docs[d]) n += tc.count;
      for (size_t k = 0; k < K_; ++k) gamma_[d * K_ + k] = opt_.alpha + n / static_cast<double>(K_);
    }
    stats_.assign(K_, std::vector<double>(V_ * T_, 0.0));
  }

  // Coordinate ascent on every document, warm-started from the stored
  // gammas. Accumulates sufficient statistics and returns the part of the
  // bound that does not involve the topic parameters.
  double e_step() {
    for (auto& s : stats_) std::fill(s.begin(), s.end(), 0.0);
    const double K = static_cast<double>(K_);
    const double alpha = opt_.alpha;
    const double doc_const = std::lgamma(K * alpha) - K * std::lgamma(alpha);
    const auto& var = smoother_.smoothed_variance();

    double total = 0.0;
    std::vector<double> exp_elog_beta(K_ * V_);
    std::vector<double> elog_theta(K_), exp_elog_theta(K_), phi(K_), gamma_new(K_);
    size_t doc = 0;
    for (size_t t = 0; t < T_; ++t) {
      for (size_t k = 0; k < K_; ++k) {
        const double* m = chains_[k].means.data() + t;
        const double lse = log_sum_exp(m, V_, T_);
        for (size_t w = 0; w < V_; ++w) exp_elog_beta[k * V_ + w] = std::exp(m[w * T_] - lse - 0.5 * var[t]);
      }
      for (size_t i = 0; i < bow_.slice_sizes[t]; ++i, ++doc) {
        const auto& words = bow_.docs[doc];
        double* gamma = gamma_.data() + doc * K_;
        // phi is recomputed from each gamma; the loop always ends on a gamma update.
        for (int it = 0; it < opt_.estep_max_iters; ++it) {
          digammas(gamma, elog_theta, exp_elog_theta);
          std::fill(gamma_new.begin(), gamma_new.end(), alpha);
          for (const auto& tc : words) {
            double norm = 0.0;
            for (size_t k = 0; k < K_; ++k) {
              phi[k] = exp_elog_theta[k] * exp_elog_beta[k * V_ + tc.term];
              norm += phi[k];
            }
            for (size_t k = 0; k < K_; ++k) gamma_new[k] += tc.count * phi[k] / norm;
          }
          double change = 0.0;
          for (size_t k = 0; k < K_; ++k) {
            change = std::max(change, std::abs(gamma_new[k] - gamma[k]));
            gamma[k] = gamma_new[k];
          }
          if (change < opt_.estep_tolerance) break;
        }
        // Recover the final phi (from the gamma before the last update) and
        // score the document at the final (phi, gamma).
        const std::vector<double> prev_theta = exp_elog_theta;
        double entropy_and_theta = 0.0;
        digammas(gamma, elog_theta, exp_elog_theta);
        for (const auto& tc : words) {
          double norm = 0.0;
          for (size_t k = 0; k < K_; ++k) norm += prev_theta[k] * exp_elog_beta[k * V_ + tc.term];
          for (size_t k = 0; k < K_; ++k) {
            const double p = prev_theta[k] * exp_elog_beta[k * V_ + tc.term] / norm;
            if (p <= 0.0) continue;
            stats_[k][tc.term * T_ + t] += tc.count * p;
            entropy_and_theta += tc.count * p * (elog_theta[k] - std::log(p));
          }
        }
        double gamma_sum = 0.0;
        double theta_terms = 0.0;
        for (size_t k = 0; k < K_; ++k) {
          gamma_sum += gamma[k];
          theta_terms += (alpha - gamma[k]) * elog_theta[k] + std::lgamma(gamma[k]);
        }
        // The phi-weighted log beta terms belong to the topic part.
        total += doc_const + theta_terms - std::lgamma(gamma_sum) + entropy_and_theta;
      }
    }
    return total;
  }

  void digammas(const double* gamma, std::vector<double>& elog, std::vector<double>& exp_elog) const {
    double sum = 0.0;
    for (size_t k = 0; k < K_; ++k) sum += gamma[k];
    const double dsum = digamma(sum);
    for (size_t k = 0; k < K_; ++k) {
      elog[k] = digamma(gamma[k]) - dsum;
      exp_elog[k] = std::exp(elog[k]);
    }
  }

  // Topic part of the bound for topic k at the given pseudo-observations;
  // writes the gradient with respect to them.
  double topic_bound(size_t k, std::span<const double> obs, std::vector<double>& means, std::span<double> grad) const {
    const auto& s = stats_[k];
    const auto& var = smoother_.smoothed_variance();
    const auto& gain = smoother_.gain();
    for (size_t w = 0; w < V_; ++w) {
      smoother_.smooth(obs.subspan(w * T_, T_), std::span<double>(means.data() + w * T_, T_));
    }
    double value = 0.0;
    std::vector<double> g_means(V_ * T_, 0.0);
    for (size_t t = 0; t < T_; ++t) {
      double n_t = 0.0;
      for (size_t w = 0; w < V_; ++w) n_t += s[w * T_ + t];
      const double lse = log_sum_exp(means.data() + t, V_, T_);
      value -= n_t * (lse + 0.5 * var[t]);
      for (size_t w = 0; w < V_; ++w) {
        const double m = means[w * T_ + t];
        value += s[w * T_ + t] * m;
        g_means[w * T_ + t] = s[w * T_ + t] - n_t * std::exp(m - lse);
      }
    }
    std::vector<double> chain_grad(T_);
    for (size_t w = 0; w < V_; ++w) {
      std::span<const double> m(means.data() + w * T_, T_);
      value += smoother_.chain_bound(m);
      smoother_.chain_bound_gradient(m, chain_grad);
      for (size_t t = 0; t < T_; ++t) g_means[w * T_ + t] += chain_grad[t];
    }
    if (!grad.empty()) {
      // d/d obs_s = sum_t gain[t][s] * d/d mean_t
      for (size_t w = 0; w < V_; ++w) {
        for (size_t sidx = 0; sidx < T_; ++sidx) {
          double acc = 0.0;
          for (size_t t = 0; t < T_; ++t) acc += gain[t * T_ + sidx] * g_means[w * T_ + t];
          grad[w * T_ + sidx] = acc;
        }
      }
    }
    return value;
  }

  double m_step(size_t k) {
    auto& c = chains_[k];
    std::vector<double> scratch(V_ * T_);
    optimize::Objective neg = [&](std::span<const double> x, std::span<double> g) {
      const double v = topic_bound(k, x, scratch, g);
      for (double& gi : g) gi = -gi;
      return -v;
    };
    optimize::LbfgsOptions lopt;
    lopt.max_iterations = opt_.mstep_max_iters;
    lopt.function_tolerance = 1e-13;
    std::vector<double> x = c.obs;
    optimize::minimize(neg, x, lopt);
    c.obs = std::move(x);
    return topic_bound(k, c.obs, c.means, std::span<double>());
  }

  const preprocess::BowCorpus& bow_;
  DtmOptions opt_;
  size_t K_, T_, V_;
  ChainSmoother smoother_;
  std::vector<TopicChains> chains_;
  std::vector<double> gamma_;
  std::vector<std::vector<double>> stats_;  // per topic, [w * T + t]
};

}  // namespace

DtmModel fit_dtm(const preprocess::BowCorpus& bow, const DtmOptions& options) {
  if (options.num_topics < 2) throw Error("DTM needs at least 2 topics");
  if (bow.docs.empty() || bow.total_tokens() == 0) throw Error("cannot fit a DTM on an empty corpus");
  if (bow.num_slices() == 0) throw Error("DTM needs at least one time slice");
  if (options.max_em_iters < 1) throw Error("max_em_iters must be >= 1");
  size_t covered = 0;
  for (size_t s : bow.slice_sizes) covered += s;
  if (covered != bow.docs.size()) throw Error("slice sizes do not sum to the document count");
  return Fitter(bow, options).run();
}

TermTrajectory topic_term_trajectory(const DtmModel& model, int topic, size_t term_index) {
  if (topic < 0 || topic >= model.num_topics) throw Error("topic index out of range");
  if (term_index >= model.vocab_size) throw Error("term index outside the vocabulary");
  TermTrajectory traj;
  traj.topic = topic;
  traj.term = term_index < model.terms.size() ? model.terms[term_index] : std::to_string(term_index);
  for (size_t t = 0; t < model.num_slices; ++t) {
    traj.years.push_back(t < model.slice_years.size() ? model.slice_years[t] : static_cast<int>(t));
    traj.values.push_back(model.prob(t, topic, term_index));
  }
  return traj;
}

TermTrajectory topic_term_trajectory(const DtmModel& model, int topic, const std::string& term) {
  const auto it = std::find(model.terms.begin(), model.terms.end(), term);
  if (it == model.terms.end()) throw Error("unknown term '" + term + "'");
  return topic_term_trajectory(model, topic, static_cast<size_t>(it - model.terms.begin()));
}

std::vector<lda::RankedTerm> top_terms_at_slice(const DtmModel& model, int topic, size_t slice, size_t n) {
  if (topic < 0 || topic >= model.num_topics) throw Error("topic index out of range");
  if (slice >= model.num_slices) throw Error("slice index out of range");
  return lda::rank_terms(model.topic_at(slice, topic), model.terms, n);
}

std::string trajectories_csv(const std::vector<TermTrajectory>& trajectories) {
  std::string out = "topic,term,year,probability\n";
  for (const auto& tr : trajectories) {
    for (size_t i = 0; i < tr.values.size(); ++i) {
      out += csv::format_row({std::to_string(tr.topic), tr.term, std::to_string(tr.years[i]),
                              io::format_number(tr.values[i])});
    }
  }
  return out;
}

std::string to_json(const DtmModel& model) {
  nlohmann::ordered_json j;
  j["format"] = "ideaminer.dtm";
  j["version"] = 1;
  j["rng"] = Rng::kAlgorithm;
  j["K"] = model.num_topics;
  j["T"] = model.num_slices;
  j["V"] = model.vocab_size;
  j["chain_variance"] = model.chain_variance;
  j["obs_variance"] = model.obs_variance;
  j["initial_variance"] = model.initial_variance;
  j["alpha"] = model.alpha;
  j["seed"] = model.seed;
  j["converged"] = model.converged;
  j["elbo_trace"] = model.elbo_trace;
  j["slice_years"] = model.slice_years;
  j["terms"] = model.terms;
  j["warnings"] = model.warnings;
  j["beta"] = model.beta;
  return j.dump() + "\n";
}

DtmModel from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  if (j.value("format", "") != "ideaminer.dtm" || j.value("version", 0) != 1) {
    throw Error("not an ideaminer DTM model (version 1) file");
  }
  DtmModel m;
  m.num_topics = j.at("K").get<int>();
  m.num_slices = j.at("T").get<size_t>();
  m.vocab_size = j.at("V").get<size_t>();
  m.chain_variance = j.at("chain_variance").get<double>();
  m.obs_variance = j.at("obs_variance").get<double>();
  m.initial_variance = j.at("initial_variance").get<double>();
  m.alpha = j.at("alpha").get<double>();
  m.seed = j.at("seed").get<uint64_t>();
  m.converged = j.at("converged").get<bool>();
  m.elbo_trace = j.at("elbo_trace").get<std::vector<double>>();
  m.slice_years = j.at("slice_years").get<std::vector<int>>();
  m.terms = j.at("terms").get<std::vector<std::string>>();
  m.warnings = j.at("warnings").get<std::vector<std::string>>();
  m.beta = j.at("beta").get<std::vector<double>>();
  if (m.beta.size() != m.num_slices * static_cast<size_t>(m.num_topics) * m.vocab_size) {
    throw Error("DTM beta tensor has the wrong size");
  }
  return m;
}

}  // namespace ideaminer::dtm
