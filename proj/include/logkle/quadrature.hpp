#pragma once

#include "logkle/distributions.hpp"
#include "logkle/errors.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace logkle {

enum class RuleKind
{
  GaussHermiteProb, // weight: standard normal density
  GaussLegendreSym  // weight: uniform density on (-sqrt(3), sqrt(3))
};

/// Gauss rule whose weights absorb a probability density, so the weights
/// sum to one.
struct QuadratureRule
{
  RuleKind kind = RuleKind::GaussHermiteProb;
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;

  /// sum_i w_i f(x_i)
  template<class F>
  double integrate(F&& f) const
  {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      acc += weights[i] * f(nodes[i]);
    return acc;
  }
};

inline constexpr int kMaxRuleOrder = 128;
inline constexpr std::size_t kMaxTensorNodes = 10'000'000;

QuadratureRule make_rule(RuleKind kind, int order);
RuleKind rule_kind_for(XiLaw law);

/// Plain Gauss-Legendre nodes/weights on [-1, 1] (weights sum to 2).
struct LegendreRule
{
  std::vector<double> nodes;
  std::vector<double> weights;
};
LegendreRule gauss_legendre_unit(int order);

/// Total node count of the tensor product, or TensorSizeError if it exceeds
/// kMaxTensorNodes.
std::size_t tensor_size(std::span<const QuadratureRule> rules);

/// Calls fn(xi, weight) for every node of the tensor product of `rules`, in
/// lexicographic index order (last coordinate fastest).
template<class Fn>
void for_each_tensor_node(std::span<const QuadratureRule> rules, Fn&& fn)
{
  const std::size_t dim = rules.size();
  const std::size_t total = tensor_size(rules);
  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> xi(dim);
  for (std::size_t d = 0; d < dim; ++d)
    xi[d] = rules[d].nodes[0];

  for (std::size_t n = 0; n < total; ++n) {
    double w = 1.0;
    for (std::size_t d = 0; d < dim; ++d)
      w *= rules[d].weights[idx[d]];
    fn(std::span<const double>(xi), w);

    // odometer increment
    for (std::size_t d = dim; d-- > 0;) {
      if (++idx[d] < rules[d].nodes.size()) {
        xi[d] = rules[d].nodes[idx[d]];
        break;
      }
      idx[d] = 0;
      xi[d] = rules[d].nodes[0];
    }
  }
}

/// sum over tensor nodes of weight * visitor(xi), summed in lexicographic
/// order so the result is bit-reproducible.
template<class Visitor>
double tensor_iterate(std::span<const QuadratureRule> rules, Visitor&& visitor)
{
  double acc = 0.0;
  for_each_tensor_node(rules, [&](std::span<const double> xi, double w) {
    acc += w * visitor(xi);
  });
  return acc;
}

template<class Visitor>
double tensor_iterate(const QuadratureRule& rule, int N, Visitor&& visitor)
{
  if (N < 1)
    throw DomainError("tensor_iterate: N must be >= 1");
  const std::vector<QuadratureRule> rules(static_cast<std::size_t>(N), rule);
  return tensor_iterate(std::span<const QuadratureRule>(rules),
                        std::forward<Visitor>(visitor));
}

/// Composite Simpson weights for n equally spaced points with spacing h.
/// n must be odd and >= 3.
std::vector<double> simpson_weights(std::size_t n, double h);

/// Composite Simpson on equally spaced samples.
double simpson(std::span<const double> y, double h);

/// Equally spaced grid of n points on [lo, hi] (endpoints included).
std::vector<double> linspace(double lo, double hi, std::size_t n);

} // namespace logkle
