#include "olda/ope.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "olda/errors.hpp"
#include "olda/rng.hpp"

namespace olda {

double objective_g1(const TopicMixture& theta, const Document& d, const TopicMatrix& beta) {
  const std::size_t k_count = theta.size();
  double value = 0.0;
  for (std::size_t j = 0; j < d.ids.size(); ++j) {
    const std::uint32_t term = d.ids[j];
    double p = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) p += theta[k] * beta(k, term);
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    value += static_cast<double>(d.cnts[j]) * std::log(p);
  }
  return value;
}

double objective_g2(const TopicMixture& theta, double alpha) {
  if (alpha == 1.0) return 0.0;
  double log_sum = 0.0;
  for (double x : theta) log_sum += std::log(x);
  return (alpha - 1.0) * log_sum;
}

double objective(const TopicMixture& theta, const Document& d, const TopicMatrix& beta,
                 double alpha) {
  return objective_g1(theta, d, beta) + objective_g2(theta, alpha);
}

void grad_g1(const TopicMixture& theta, const Document& d, const TopicMatrix& beta,
             std::span<double> out) {
  const std::size_t k_count = theta.size();
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t j = 0; j < d.ids.size(); ++j) {
    const std::uint32_t term = d.ids[j];
    double p = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) p += theta[k] * beta(k, term);
    if (p <= 0.0) {
      throw DegenerateSupportError("term " + std::to_string(term) +
                                   " has zero probability under every topic");
    }
    const double w = static_cast<double>(d.cnts[j]) / p;
    for (std::size_t k = 0; k < k_count; ++k) out[k] += w * beta(k, term);
  }
}

void grad_g2(const TopicMixture& theta, double alpha, std::span<double> out) {
  const double a = alpha - 1.0;
  for (std::size_t k = 0; k < theta.size(); ++k) out[k] = a / theta[k];
}

int vertex_argmax_index(std::span<const double> gradient) {
  int best = 0;
  for (std::size_t k = 1; k < gradient.size(); ++k) {
    if (gradient[k] > gradient[best]) best = static_cast<int>(k);
  }
  return best;
}

TopicMixture vertex_argmax(std::span<const double> gradient, const TruncatedSimplex& domain) {
  const int k_star = vertex_argmax_index(gradient);
  TopicMixture vertex(static_cast<std::size_t>(domain.dim), domain.epsilon);
  vertex[static_cast<std::size_t>(k_star)] =
      1.0 - (domain.dim - 1) * domain.epsilon;
  return vertex;
}

namespace {

TopicMixture uniform_mixture(int dim) {
  return TopicMixture(static_cast<std::size_t>(dim), 1.0 / static_cast<double>(dim));
}

// Random interior point: normalized draws from [0.5, 1.5) keep every
// coordinate within a factor 3 of uniform, away from the epsilon floor.
TopicMixture random_interior(int dim, double epsilon, std::mt19937_64& rng) {
  TopicMixture theta(static_cast<std::size_t>(dim));
  double sum = 0.0;
  for (double& x : theta) {
    x = 0.5 + uniform01(rng);
    sum += x;
  }
  const double scale = 1.0 - dim * epsilon;
  for (double& x : theta) x = epsilon + scale * (x / sum);
  return theta;
}

std::string point_to_string(const TopicMixture& theta) {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < theta.size(); ++k) {
    if (k > 0) os << ", ";
    os << theta[k];
  }
  os << ')';
  return os.str();
}

// Shared vertex-stepping loop. Each iteration picks one of the two
// components uniformly at random, forms the averaged surrogate gradient
// (2/t) * (a_t * g1' + b_t * g2') at the current point, and steps toward the
// best vertex of the domain.
template <typename Grad1, typename Grad2, typename ObjectiveFn>
TopicMixture vertex_descent(const TruncatedSimplex& domain, const OpeConfig& cfg,
                            Grad1&& g1_grad, Grad2&& g2_grad, ObjectiveFn&& objective_fn,
                            bool check_finite, OpeTrace* trace) {
  const int dim = domain.dim;
  if (dim < 1) throw std::invalid_argument("domain dimension must be >= 1");
  if (dim * domain.epsilon >= 1.0) {
    throw std::invalid_argument("domain requires dim * epsilon < 1");
  }
  auto rng = make_rng(cfg.seed);
  if (dim == 1) return {1.0};

  TopicMixture theta =
      cfg.random_init ? random_interior(dim, domain.epsilon, rng) : uniform_mixture(dim);

  const std::size_t n = static_cast<std::size_t>(dim);
  std::vector<double> g1_buf(n, 0.0), g2_buf(n, 0.0), surrogate(n, 0.0);
  const double vertex_high = 1.0 - (dim - 1) * domain.epsilon;

  std::uint64_t a = 0, b = 0;
  if (trace) trace->rows.reserve(static_cast<std::size_t>(cfg.iterations));

  for (std::uint64_t t = 1; t <= static_cast<std::uint64_t>(cfg.iterations); ++t) {
    const bool pick_prior = coin(rng);
    if (pick_prior) {
      ++b;
    } else {
      ++a;
    }
    if (a > 0) {
      g1_grad(theta, std::span<double>(g1_buf));
      if (check_finite) {
        for (double x : g1_buf) {
          if (!std::isfinite(x)) {
            throw NonFiniteError("non-finite g1 gradient at " + point_to_string(theta));
          }
        }
      }
    }
    if (b > 0) {
      g2_grad(theta, std::span<double>(g2_buf));
      if (check_finite) {
        for (double x : g2_buf) {
          if (!std::isfinite(x)) {
            throw NonFiniteError("non-finite g2 gradient at " + point_to_string(theta));
          }
        }
      }
    }
    const double scale = 2.0 / static_cast<double>(t);
    const double wa = scale * static_cast<double>(a);
    const double wb = scale * static_cast<double>(b);
    for (std::size_t k = 0; k < n; ++k) {
      surrogate[k] = (a > 0 ? wa * g1_buf[k] : 0.0) + (b > 0 ? wb * g2_buf[k] : 0.0);
    }
    const int v = vertex_argmax_index(surrogate);

    // Step weight 1/(t+1), never a full jump: coordinates pinned to the
    // epsilon floor make the prior gradient (alpha-1)/eps drown out the
    // likelihood for alpha < 1, freezing the iterate on its first vertex.
    const double step = 1.0 / static_cast<double>(t + 1);
    double step_l1 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double target = (static_cast<int>(k) == v) ? vertex_high : domain.epsilon;
      const double before = theta[k];
      double after = before + (target - before) * step;
      if (after < domain.epsilon) after = domain.epsilon;
      theta[k] = after;
      step_l1 += std::fabs(after - before);
    }

    if (trace) {
      OpeTraceRow row;
      row.t = t;
      row.pick = pick_prior ? 1 : 0;
      row.g1_picks = a;
      row.g2_picks = b;
      row.vertex = v;
      row.step_l1 = step_l1;
      row.objective = objective_fn(theta);
      if (check_finite && !std::isfinite(row.objective)) {
        throw NonFiniteError("non-finite objective value at " + point_to_string(theta));
      }
      trace->rows.push_back(row);
    }
  }
  return theta;
}

}  // namespace

TopicMixture ope_infer(const Document& d, const TopicMatrix& beta, double alpha,
                       const OpeConfig& cfg, OpeTrace* trace) {
  const int dim = static_cast<int>(beta.rows());
  if (d.empty()) return uniform_mixture(dim);
  const TruncatedSimplex domain{dim, cfg.epsilon};
  return vertex_descent(
      domain, cfg,
      [&](const TopicMixture& theta, std::span<double> out) { grad_g1(theta, d, beta, out); },
      [&](const TopicMixture& theta, std::span<double> out) { grad_g2(theta, alpha, out); },
      [&](const TopicMixture& theta) { return objective(theta, d, beta, alpha); },
      /*check_finite=*/false, trace);
}

TopicMixture two_term_maximize(const TwoTermObjective& objective, const TruncatedSimplex& domain,
                               const OpeConfig& cfg, OpeTrace* trace) {
  return vertex_descent(
      domain, cfg,
      [&](const TopicMixture& theta, std::span<double> out) { objective.g1_grad(theta, out); },
      [&](const TopicMixture& theta, std::span<double> out) { objective.g2_grad(theta, out); },
      [&](const TopicMixture& theta) {
        return objective.g1_value(theta) + objective.g2_value(theta);
      },
      /*check_finite=*/true, trace);
}

void write_trace_csv(const OpeTrace& trace, std::ostream& out) {
  out << "t,pick,vertex,objective\n";
  for (const auto& row : trace.rows) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", row.objective);
    out << row.t << ',' << row.pick << ',' << row.vertex << ',' << buf << '\n';
  }
}

}  // namespace olda
