#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "olda/corpus.hpp"
#include "olda/matrix.hpp"

namespace olda {

using TopicMixture = std::vector<double>;

// Simplex points with every coordinate >= epsilon; vertices put
// 1 - (dim-1)*epsilon on a single coordinate. Requires dim * epsilon < 1.
struct TruncatedSimplex {
  int dim = 1;
  double epsilon = 1e-10;
};

struct OpeConfig {
  int iterations = 50;
  double epsilon = 1e-10;
  std::uint64_t seed = 0;
  bool random_init = false;  // random interior start instead of the uniform point
};

struct OpeTraceRow {
  std::uint64_t t = 0;
  int pick = 0;                // 0 = likelihood component, 1 = prior component
  std::uint64_t g1_picks = 0;  // a_t
  std::uint64_t g2_picks = 0;  // b_t
  int vertex = 0;
  double step_l1 = 0.0;  // |theta_{t+1} - theta_t|_1
  double objective = 0.0;  // f(theta_{t+1})
};

struct OpeTrace {
  std::vector<OpeTraceRow> rows;
};

// Likelihood component: sum_j d_j log <theta, beta_.j>. Returns -infinity
// when some present term has zero probability under every topic.
double objective_g1(const TopicMixture& theta, const Document& d, const TopicMatrix& beta);

// Prior component: (alpha - 1) * sum_k log theta_k.
double objective_g2(const TopicMixture& theta, double alpha);

double objective(const TopicMixture& theta, const Document& d, const TopicMatrix& beta,
                 double alpha);

// grad_g1[k] = sum_j d_j beta_kj / <theta, beta_.j>; throws
// DegenerateSupportError when a present term's denominator is zero.
void grad_g1(const TopicMixture& theta, const Document& d, const TopicMatrix& beta,
             std::span<double> out);

// grad_g2[k] = (alpha - 1) / theta_k.
void grad_g2(const TopicMixture& theta, double alpha, std::span<double> out);

// Lowest index maximizing the gradient; solves argmax_{x in domain} <g, x>.
int vertex_argmax_index(std::span<const double> gradient);
TopicMixture vertex_argmax(std::span<const double> gradient, const TruncatedSimplex& domain);

// Stochastic vertex-stepping MAP estimate of the topic mixture for one
// document. Empty documents return the uniform mixture without iterating.
TopicMixture ope_infer(const Document& d, const TopicMatrix& beta, double alpha,
                       const OpeConfig& cfg, OpeTrace* trace = nullptr);

// The same loop for an arbitrary objective f = g1 + g2 over the truncated
// simplex; ope_infer is this with the LDA components plugged in.
struct TwoTermObjective {
  std::function<double(const TopicMixture&)> g1_value;
  std::function<double(const TopicMixture&)> g2_value;
  std::function<void(const TopicMixture&, std::span<double>)> g1_grad;
  std::function<void(const TopicMixture&, std::span<double>)> g2_grad;
};

TopicMixture two_term_maximize(const TwoTermObjective& objective, const TruncatedSimplex& domain,
                               const OpeConfig& cfg, OpeTrace* trace = nullptr);

// "t,pick,vertex,objective" diagnostic rows.
void write_trace_csv(const OpeTrace& trace, std::ostream& out);

}  // namespace olda
