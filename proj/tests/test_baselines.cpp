#include <doctest.h>

#include <cmath>
#include <numeric>

#include "olda/baselines.hpp"
#include "olda/errors.hpp"
#include "olda/model.hpp"
#include "olda/rng.hpp"
#include "oracles.hpp"

using namespace olda;

TEST_CASE("digamma matches reference values") {
  CHECK(digamma(1.0) == doctest::Approx(-0.57721566490153286).epsilon(1e-11));
  CHECK(digamma(0.5) == doctest::Approx(-1.9635100260214235).epsilon(1e-11));
  CHECK(digamma(2.0) == doctest::Approx(0.42278433509846714).epsilon(1e-11));
  CHECK(digamma(10.0) == doctest::Approx(2.2517525890667211).epsilon(1e-11));
  CHECK(digamma(0.1) == doctest::Approx(-10.423754940411076).epsilon(1e-11));
  CHECK(digamma(0.25) == doctest::Approx(-4.2274535333762654).epsilon(1e-11));
  CHECK(digamma(100.0) == doctest::Approx(4.6001618527380874).epsilon(1e-11));
}

TEST_CASE("digamma satisfies the recurrence psi(x+1) = psi(x) + 1/x") {
  auto rng = make_rng(8);
  for (int rep = 0; rep < 200; ++rep) {
    const double x = 1e-3 + uniform01(rng) * 20.0;
    CHECK(digamma(x + 1.0) - digamma(x) ==
          doctest::Approx(1.0 / x).epsilon(1e-9));
  }
  // Arguments below the clamp floor behave like the floor.
  CHECK(digamma(1e-9) == digamma(1e-6));
}

TEST_CASE("vb_infer with one topic has the closed form") {
  TopicMatrix beta(1, 4, 0.25);
  const Document d = Document::from_pairs({{0, 3}, {2, 2}});
  const VbResult result = vb_infer_detailed(d, beta, 0.3);
  CHECK(result.gamma[0] == doctest::Approx(0.3 + 5.0).epsilon(1e-12));
  CHECK(result.theta == TopicMixture{1.0});
}

TEST_CASE("vb_infer is symmetric under a uniform topic column") {
  TopicMatrix beta(3, 2, 0.5);
  const Document d = Document::from_pairs({{0, 2}, {1, 1}});
  const VbResult result = vb_infer_detailed(d, beta, 0.5);
  for (std::size_t j = 0; j < d.ids.size(); ++j) {
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(result.phi(j, k) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
  }
  CHECK(result.theta[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("vb lower bound is non-decreasing across iterations") {
  auto rng = make_rng(41);
  for (int rep = 0; rep < 25; ++rep) {
    const TopicMatrix beta = oracle::random_beta(4, 12, rng);
    const Document d = oracle::random_document(12, 8, 5, rng);
    VbConfig cfg;
    cfg.tol = 0.0;  // run every iteration
    cfg.max_iter = 30;
    const VbResult result = vb_infer_detailed(d, beta, 0.1, cfg);
    for (std::size_t i = 1; i < result.bounds.size(); ++i) {
      CHECK(result.bounds[i] >= result.bounds[i - 1] - 1e-9 * std::fabs(result.bounds[i - 1]));
    }
  }
}

TEST_CASE("vb convergence signal means one more iteration gains less than tol") {
  auto rng = make_rng(52);
  const TopicMatrix beta = oracle::random_beta(5, 15, rng);
  const Document d = oracle::random_document(15, 10, 6, rng);

  VbConfig cfg;  // default tol 1e-4
  const VbResult converged = vb_infer_detailed(d, beta, 0.2, cfg);
  REQUIRE(converged.iterations < cfg.max_iter);  // actually converged

  VbConfig longer;
  longer.tol = 0.0;
  longer.max_iter = converged.iterations + 1;
  const VbResult extended = vb_infer_detailed(d, beta, 0.2, longer);
  const double gain = (extended.bounds.back() - converged.bounds.back()) /
                      std::fabs(converged.bounds.back());
  CHECK(gain < 1e-4);
  CHECK(gain >= -1e-12);
}

TEST_CASE("vb invariants: simplex output, gamma floor, phi rows") {
  auto rng = make_rng(63);
  for (int rep = 0; rep < 30; ++rep) {
    const TopicMatrix beta = oracle::random_beta(3, 10, rng);
    const Document d = oracle::random_document(10, 6, 4, rng);
    const double alpha = 0.05 + uniform01(rng);
    const VbResult result = vb_infer_detailed(d, beta, alpha);

    const double theta_sum =
        std::accumulate(result.theta.begin(), result.theta.end(), 0.0);
    CHECK(theta_sum == doctest::Approx(1.0).epsilon(1e-9));
    for (const double g : result.gamma) CHECK(g >= alpha - 1e-12);
    for (std::size_t j = 0; j < result.phi.rows(); ++j) {
      auto row = result.phi.row(j);
      CHECK(std::accumulate(row.begin(), row.end(), 0.0) ==
            doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("cgs_infer with one topic returns the single point") {
  TopicMatrix beta(1, 3, 1.0 / 3.0);
  const Document d = Document::from_pairs({{0, 2}});
  CHECK(cgs_infer(d, beta, 0.1, {}, 9) == TopicMixture{1.0});
}

TEST_CASE("cgs_infer forces all tokens into the only supporting topic") {
  TopicMatrix beta(2, 4, 0.0);
  beta(0, 0) = 0.5;
  beta(0, 1) = 0.5;
  beta(1, 2) = 0.5;
  beta(1, 3) = 0.5;
  const Document d = Document::from_pairs({{0, 3}, {1, 2}});  // inside topic 0 support
  const double alpha = 0.2;
  const TopicMixture theta = cgs_infer(d, beta, alpha, {}, 77);
  const double len = 5.0;
  CHECK(theta[0] >= (len + alpha) / (len + 2 * alpha) - 1e-9);
}

TEST_CASE("cgs_infer is deterministic given the seed and sums to one") {
  auto rng = make_rng(85);
  const TopicMatrix beta = oracle::random_beta(4, 10, rng);
  const Document d = oracle::random_document(10, 6, 4, rng);
  const TopicMixture a = cgs_infer(d, beta, 0.3, {}, 1234);
  const TopicMixture b = cgs_infer(d, beta, 0.3, {}, 1234);
  CHECK(a == b);
  CHECK(std::accumulate(a.begin(), a.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("cgs mean estimate lands near the grid maximizer on a concave instance") {
  // Three well-separated block topics and a long document concentrate the
  // posterior, so its mean sits near the maximizer.
  TopicMatrix beta(3, 9, 0.0125);
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t j = 3 * k; j < 3 * k + 3; ++j) beta(k, j) = 0.3 - 0.0125;
  }
  beta = normalize_rows(beta);
  const Document d = Document::from_pairs(
      {{0, 12}, {1, 10}, {2, 8}, {3, 6}, {4, 5}, {5, 4}, {6, 2}, {7, 2}, {8, 1}});
  const double alpha = 1.1;

  // Grid-search maximizer of the inference objective.
  const double resolution = 0.005;
  const int steps = 200;
  TopicMixture best{1.0, 0.0, 0.0};
  double best_value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps - i; ++j) {
      const TopicMixture theta{i * resolution, j * resolution,
                               1.0 - (i + j) * resolution};
      const double value = objective(theta, d, beta, alpha);
      if (value > best_value) {
        best_value = value;
        best = theta;
      }
    }
  }

  TopicMixture mean(3, 0.0);
  const int seeds = 50;
  for (int s = 0; s < seeds; ++s) {
    const TopicMixture theta = cgs_infer(d, beta, alpha, {}, 9000 + s);
    for (std::size_t k = 0; k < 3; ++k) mean[k] += theta[k] / seeds;
  }
  double l1 = 0.0;
  for (std::size_t k = 0; k < 3; ++k) l1 += std::fabs(mean[k] - best[k]);
  CHECK(l1 <= 0.1);
}

TEST_CASE("infer_theta dispatches and propagates determinism contracts") {
  auto rng = make_rng(11);
  const TopicMatrix beta = oracle::random_beta(3, 8, rng);
  const Document d = oracle::random_document(8, 5, 3, rng);
  InferConfig cfg;

  OpeConfig direct = cfg.ope;
  direct.seed = 321;
  CHECK(infer_theta(InferMethod::Ope, d, beta, 0.1, cfg, 321) ==
        ope_infer(d, beta, 0.1, direct));

  CHECK(infer_theta(InferMethod::Vb, d, beta, 0.1, cfg, 1) ==
        infer_theta(InferMethod::Vb, d, beta, 0.1, cfg, 2));

  CHECK(infer_theta(InferMethod::Cgs, d, beta, 0.1, cfg, 7) ==
        cgs_infer(d, beta, 0.1, cfg.cgs, 7));

  CHECK_THROWS_AS(parse_infer_method("gibbs"), UsageError);
  CHECK(parse_infer_method("ope") == InferMethod::Ope);
  CHECK(infer_method_name(InferMethod::Cgs) == "cgs");
}
