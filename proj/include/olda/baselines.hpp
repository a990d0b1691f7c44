#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "olda/corpus.hpp"
#include "olda/matrix.hpp"
#include "olda/ope.hpp"

namespace olda {

// psi(x), accurate to about 1e-10 for x >= 1e-6; smaller arguments are
// clamped to 1e-6.
double digamma(double x);

struct VbConfig {
  int max_iter = 50;
  double tol = 1e-4;  // relative lower-bound improvement; 0 disables early stop
};

struct VbResult {
  TopicMixture theta;  // E[theta] = gamma / sum(gamma)
  std::vector<double> gamma;
  Matrix phi;  // final responsibilities, one row per distinct term
  std::vector<double> bounds;  // evidence lower bound after each iteration
  int iterations = 0;
};

// Coordinate-ascent variational inference for one document against fixed
// topics. Deterministic; beta entries are floored at 1e-12 before use.
VbResult vb_infer_detailed(const Document& d, const TopicMatrix& beta, double alpha,
                           const VbConfig& cfg = {});
TopicMixture vb_infer(const Document& d, const TopicMatrix& beta, double alpha,
                      const VbConfig& cfg = {});

struct CgsConfig {
  int n_samples = 50;
  int burn_in = 25;
};

// Collapsed Gibbs sweeps over the document's tokens; sweeps after burn-in
// average (n_k + alpha) / (len + K*alpha) into the returned mixture.
TopicMixture cgs_infer(const Document& d, const TopicMatrix& beta, double alpha,
                       const CgsConfig& cfg, std::uint64_t seed);

enum class InferMethod { Ope, Vb, Cgs };

// "ope" | "vb" | "cgs"; unknown names raise UsageError.
InferMethod parse_infer_method(std::string_view name);
std::string_view infer_method_name(InferMethod method);

struct InferConfig {
  OpeConfig ope;
  VbConfig vb;
  CgsConfig cgs;
};

// Uniform plug-in point: routes to the chosen method. VB ignores the seed.
TopicMixture infer_theta(InferMethod method, const Document& d, const TopicMatrix& beta,
                         double alpha, const InferConfig& cfg, std::uint64_t seed);

// Per-document inference against fixed topics with an explicit seed; what
// learners and evaluation call for every document.
using LocalInfer =
    std::function<TopicMixture(const Document&, const TopicMatrix&, std::uint64_t)>;

LocalInfer make_local_infer(InferMethod method, double alpha, InferConfig cfg);

}  // namespace olda
