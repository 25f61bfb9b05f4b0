#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace wurn {

/// Gauss-Legendre nodes and weights on [-1, 1].
class GaussLegendreRule
{
  public:
    explicit GaussLegendreRule(int order);

    int order() const { return static_cast<int>(nodes_.size()); }
    std::vector<double> const& nodes() const { return nodes_; }
    std::vector<double> const& weights() const { return weights_; }

    /// Apply the rule to f on [a, b].
    template<class F>
    double integrate(F&& f, double a, double b) const
    {
        double const half = 0.5 * (b - a);
        double const mid = 0.5 * (a + b);
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            sum += weights_[i] * f(mid + half * nodes_[i]);
        return half * sum;
    }

  private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

struct QuadratureOptions
{
    double rel_tol = 1e-10;
    double abs_tol = 1e-300;
    std::size_t max_panels = std::size_t{1} << 16;
    int order = 20;
};

struct QuadratureResult
{
    double value = 0.0;
    double error = 0.0;
    std::size_t panels = 0;
    bool converged = false;
};

/*!
 * Globally adaptive bisection quadrature.
 *
 * Each panel is integrated with a fixed-order Gauss-Legendre rule; its error
 * is estimated as the difference between the whole-panel value and the sum
 * over its two halves. The panel with the largest error is split until the
 * summed error falls below max(rel_tol * |value|, abs_tol) or the panel cap
 * is reached.
 */
QuadratureResult integrate_adaptive(std::function<double(double)> const& f,
                                    double a, double b,
                                    QuadratureOptions const& options = {});

}  // namespace wurn
