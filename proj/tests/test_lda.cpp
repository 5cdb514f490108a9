#include <doctest.h>

#include <cmath>

#include "ideaminer/error.hpp"
#include "ideaminer/lda.hpp"
#include "synthetic.hpp"

using namespace ideaminer;
using namespace ideaminer::testing;

namespace {

void check_stochastic(const lda::RowMatrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    CHECK(std::fabs(m.row(r).sum() - 1.0) <= 1e-6);
    CHECK(m.row(r).minCoeff() >= 0.0);
  }
}

lda::LdaModel manual_model(lda::RowMatrix phi, lda::RowMatrix theta) {
  lda::LdaModel m;
  m.num_topics = static_cast<int>(phi.rows());
  m.vocab_size = static_cast<size_t>(phi.cols());
  m.phi = std::move(phi);
  m.theta = std::move(theta);
  return m;
}

}  // namespace

TEST_CASE("two-letter vocabularies are recovered") {
  // Topic A emits only {a, b}; topic B only {c, d}; single-topic documents.
  Rng rng(1);
  std::vector<std::vector<uint32_t>> docs;
  for (int d = 0; d < 100; ++d) {
    std::vector<uint32_t> doc;
    for (int i = 0; i < 50; ++i) doc.push_back(static_cast<uint32_t>((d % 2) * 2 + rng.index(2)));
    docs.push_back(doc);
  }
  lda::LdaOptions opts;
  opts.seed = 3;
  const auto m = lda::fit_lda(make_bow(docs, 4), opts);
  const int ka = m.phi(0, 0) + m.phi(0, 1) > m.phi(1, 0) + m.phi(1, 1) ? 0 : 1;
  CHECK(m.phi(ka, 0) + m.phi(ka, 1) >= 0.9);
  CHECK(m.phi(1 - ka, 2) + m.phi(1 - ka, 3) >= 0.9);
  check_stochastic(m.phi);
  check_stochastic(m.theta);
  CHECK(m.phi.minCoeff() > 0.0);
}

TEST_CASE("single document corpus stays normalized and warns about K > D") {
  const auto bow = make_bow({std::vector<uint32_t>(10, 0)}, 1);
  lda::LdaOptions opts;
  opts.iterations = 50;
  const auto m = lda::fit_lda(bow, opts);
  check_stochastic(m.phi);
  check_stochastic(m.theta);
  CHECK(m.theta.row(0).maxCoeff() > 0.5);
  CHECK_FALSE(m.warnings.empty());
}

TEST_CASE("fits are deterministic per seed and differ across seeds") {
  const auto bow = ideaminer::testing::planted_two_topic_corpus(60, 30, 4);
  lda::LdaOptions opts;
  opts.iterations = 100;
  opts.seed = 8;
  const auto a = lda::fit_lda(bow, opts);
  const auto b = lda::fit_lda(bow, opts);
  CHECK(a.phi == b.phi);
  CHECK(a.theta == b.theta);
  opts.seed = 9;
  const auto c = lda::fit_lda(bow, opts);
  CHECK_FALSE(a.phi == c.phi);
}

TEST_CASE("invalid inputs") {
  lda::LdaOptions opts;
  CHECK_THROWS_AS(lda::fit_lda(preprocess::BowCorpus{}, opts), Error);
  opts.num_topics = 1;
  CHECK_THROWS_AS(lda::fit_lda(separable_corpus(10, 5).bow, opts), Error);
  opts.num_topics = 2;
  opts.iterations = 0;
  CHECK_THROWS_AS(lda::fit_lda(separable_corpus(10, 5).bow, opts), Error);
}

TEST_CASE("perplexity of a uniform model equals the vocabulary size") {
  const auto bow = make_bow({{0, 1, 2, 3, 3}, {1, 2}}, 4);
  lda::RowMatrix phi = lda::RowMatrix::Constant(2, 4, 0.25);
  lda::RowMatrix theta = lda::RowMatrix::Constant(2, 2, 0.5);
  CHECK(lda::perplexity(manual_model(phi, theta), bow) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("perplexity of a perfect one-hot model is one") {
  const auto bow = make_bow({{0, 0, 0}}, 2);
  lda::RowMatrix phi(2, 2);
  phi << 1.0, 0.0, 0.0, 1.0;
  lda::RowMatrix theta(1, 2);
  theta << 1.0, 0.0;
  CHECK(lda::perplexity(manual_model(phi, theta), bow) == doctest::Approx(1.0));
}

TEST_CASE("perplexity matches direct summation on a toy model") {
  const auto bow = make_bow({{0, 0, 1}, {1, 2, 2, 2}}, 3);
  lda::RowMatrix phi(2, 3);
  phi << 0.6, 0.3, 0.1, 0.1, 0.2, 0.7;
  lda::RowMatrix theta(2, 2);
  theta << 0.8, 0.2, 0.25, 0.75;
  double ll = 0;
  ll += 2 * std::log(0.8 * 0.6 + 0.2 * 0.1) + std::log(0.8 * 0.3 + 0.2 * 0.2);
  ll += std::log(0.25 * 0.3 + 0.75 * 0.2) + 3 * std::log(0.25 * 0.1 + 0.75 * 0.7);
  CHECK(lda::perplexity(manual_model(phi, theta), bow) == doctest::Approx(std::exp(-ll / 7.0)).epsilon(1e-12));

  lda::RowMatrix zero(2, 3);
  zero << 1.0, 0.0, 0.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(lda::perplexity(manual_model(zero, theta), bow), Error);
}

TEST_CASE("fitted perplexity is finite and at least one") {
  const auto corpus = separable_corpus(40, 20);
  lda::LdaOptions opts;
  opts.iterations = 60;
  const double p = lda::perplexity(lda::fit_lda(corpus.bow, opts), corpus.bow);
  CHECK(std::isfinite(p));
  CHECK(p >= 1.0);
  CHECK(p <= 20.0);
}

TEST_CASE("top terms order by probability with lexicographic ties") {
  const std::vector<std::string> terms{"a", "b", "c"};
  const std::vector<double> row{0.5, 0.3, 0.2};
  CHECK(lda::rank_terms(row, terms, 2) == std::vector<lda::RankedTerm>{{"a", 0.5}, {"b", 0.3}});
  const std::vector<double> tie{0.4, 0.4, 0.2};
  const std::vector<std::string> rev{"b", "a", "c"};
  CHECK(lda::rank_terms(tie, rev, 2) == std::vector<lda::RankedTerm>{{"a", 0.4}, {"b", 0.4}});
  CHECK(lda::rank_terms(row, terms, 10).size() == 3);
  CHECK(lda::rank_indices(tie, {}, 3) == std::vector<size_t>{0, 1, 2});
}

TEST_CASE("lda json round-trip") {
  const auto corpus = separable_corpus(20, 10);
  lda::LdaOptions opts;
  opts.iterations = 20;
  auto m = lda::fit_lda(corpus.bow, opts);
  m.terms = numbered_terms(20);
  const auto back = lda::from_json(lda::to_json(m));
  CHECK(back.phi == m.phi);
  CHECK(back.theta == m.theta);
  CHECK(back.terms == m.terms);
  CHECK(back.seed == m.seed);
  CHECK(lda::top_terms(back, 0, 3) == lda::top_terms(m, 0, 3));
}
