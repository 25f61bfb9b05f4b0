#include "wurn/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <utility>

namespace wurn {

GaussLegendreRule::GaussLegendreRule(int order)
{
    if (order < 1)
        throw std::invalid_argument("Gauss-Legendre order must be positive");
    auto const n = static_cast<std::size_t>(order);
    nodes_.resize(n);
    weights_.resize(n);

    if (n == 1)
    {
        nodes_[0] = 0.0;
        weights_[0] = 2.0;
        return;
    }

    // Returns (P_n(x), P_n'(x)) by the three-term recurrence.
    auto legendre = [n](double x) {
        double p0 = 1.0;
        double p1 = x;
        for (std::size_t k = 2; k <= n; ++k)
        {
            double const pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        double const dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
        return std::pair{p1, dp};
    };

    // Roots are symmetric; Newton from the usual cosine initial guess.
    std::size_t const half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i)
    {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75)
                            / (static_cast<double>(n) + 0.5));
        for (int iter = 0; iter < 100; ++iter)
        {
            auto const [p, dp] = legendre(x);
            double const dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        double const dp = legendre(x).second;
        double const w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes_[i] = -x;
        nodes_[n - 1 - i] = x;
        weights_[i] = w;
        weights_[n - 1 - i] = w;
    }
}

namespace {

GaussLegendreRule const& cached_rule(int order)
{
    static std::mutex lock;
    static std::map<int, std::unique_ptr<GaussLegendreRule>> rules;
    std::lock_guard<std::mutex> guard(lock);
    auto& slot = rules[order];
    if (!slot)
        slot = std::make_unique<GaussLegendreRule>(order);
    return *slot;
}

struct Panel
{
    double a;
    double b;
    double left;   // rule applied to [a, mid]
    double right;  // rule applied to [mid, b]
    double error;

    double value() const { return left + right; }
    bool operator<(Panel const& other) const { return error < other.error; }
};

}  // namespace

QuadratureResult integrate_adaptive(std::function<double(double)> const& f,
                                    double a, double b,
                                    QuadratureOptions const& options)
{
    GaussLegendreRule const& rule = cached_rule(options.order);

    auto make_panel = [&](double lo, double hi, double whole) {
        double const mid = 0.5 * (lo + hi);
        double const left = rule.integrate(f, lo, mid);
        double const right = rule.integrate(f, mid, hi);
        return Panel{lo, hi, left, right, std::abs(whole - (left + right))};
    };

    std::priority_queue<Panel> queue;
    queue.push(make_panel(a, b, rule.integrate(f, a, b)));
    double value = queue.top().value();
    double error = queue.top().error;

    QuadratureResult result;
    for (;;)
    {
        double const target = std::max(options.rel_tol * std::abs(value),
                                       options.abs_tol);
        if (error <= target)
        {
            result.converged = true;
            break;
        }
        if (queue.size() + 1 > options.max_panels)
            break;

        Panel const worst = queue.top();
        queue.pop();
        double const mid = 0.5 * (worst.a + worst.b);
        // Stop splitting once the panel is no longer resolvable in doubles.
        if (!(mid > worst.a && mid < worst.b))
        {
            queue.push(Panel{worst.a, worst.b, worst.left, worst.right, 0.0});
            error -= worst.error;
            continue;
        }
        Panel const lo = make_panel(worst.a, mid, worst.left);
        Panel const hi = make_panel(mid, worst.b, worst.right);
        value += lo.value() + hi.value() - worst.value();
        error += lo.error + hi.error - worst.error;
        queue.push(lo);
        queue.push(hi);
    }

    // Resum from the panels to shed accumulated update round-off.
    value = 0.0;
    error = 0.0;
    result.panels = queue.size();
    while (!queue.empty())
    {
        value += queue.top().value();
        error += queue.top().error;
        queue.pop();
    }
    result.value = value;
    result.error = error;
    return result;
}

}  // namespace wurn
