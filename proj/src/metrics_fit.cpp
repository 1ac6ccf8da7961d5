#include "mcsim/metrics_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mcsim/errors.hpp"

namespace mcsim {

namespace {

// Shared accumulation so average_delay, maximum_delay, and delay_stats see
// identical arithmetic: sources ascending, receivers ascending per source.
DelayStats pair_delays(const MulticastTree& tree, std::span<const int> sources,
                       std::span<const int> receivers) {
    DelayStats st;
    double sum = 0.0;
    long pairs = 0;
    std::vector<double> d;
    for (int s : sources) {
        tree.distances_from(s, d);
        for (int r : receivers) {
            if (r == s) continue;
            if (!tree.in_tree(r)) throw NotInTree("delay: receiver not in tree");
            sum += d[r];
            st.max = std::max(st.max, d[r]);
            ++pairs;
        }
    }
    st.avg = pairs ? sum / pairs : 0.0;
    return st;
}

} // namespace

double average_delay(const MulticastTree& tree, std::span<const int> sources,
                     std::span<const int> receivers) {
    return pair_delays(tree, sources, receivers).avg;
}

double maximum_delay(const MulticastTree& tree, std::span<const int> sources,
                     std::span<const int> receivers) {
    return pair_delays(tree, sources, receivers).max;
}

DelayStats delay_stats(const MulticastTree& tree) {
    const auto sources = tree.sources();
    const auto receivers = tree.members();
    return pair_delays(tree, sources, receivers);
}

long link_usage(const MulticastTree& tree) { return tree.edge_count(); }

double bandwidth_usage(const MulticastTree& tree, double source_rate,
                       int n_active_sources) {
    if (source_rate < 0.0) throw SimError("bandwidth: rate must be >= 0");
    if (n_active_sources < 0) throw SimError("bandwidth: sources must be >= 0");
    return static_cast<double>(tree.edge_count()) * source_rate *
           n_active_sources;
}

namespace {

struct Sums {
    double sse = 0.0;
};

double model_sse(std::span<const std::pair<double, double>> pts, double h,
                 double a, double b) {
    double sse = 0.0;
    for (const auto& [x, y] : pts) {
        const double r = y - (h - a * std::exp(-x / b));
        sse += r * r;
    }
    return sse;
}

// Closed-form least squares for (h, a) at fixed b; returns false when the
// basis is numerically degenerate (b so large that exp(-x/b) is constant).
bool solve_linear(std::span<const std::pair<double, double>> pts, double b,
                  double& h, double& a) {
    const double n = static_cast<double>(pts.size());
    double su = 0.0, suu = 0.0, sy = 0.0, syu = 0.0;
    for (const auto& [x, y] : pts) {
        const double u = std::exp(-x / b);
        su += u;
        suu += u * u;
        sy += y;
        syu += y * u;
    }
    // y ~ h - a*u: normal equations in (h, a).
    const double det = -n * suu + su * su;
    if (std::abs(det) < 1e-30) return false;
    h = (-sy * suu + su * syu) / det;
    a = (-su * sy + n * syu) / det;
    return true;
}

bool solve3(double m[3][3], double r[3], double out[3]) {
    int idx[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int row = col + 1; row < 3; ++row)
            if (std::abs(m[idx[row]][col]) > std::abs(m[idx[piv]][col]))
                piv = row;
        std::swap(idx[col], idx[piv]);
        const double diag = m[idx[col]][col];
        if (std::abs(diag) < 1e-30) return false;
        for (int row = col + 1; row < 3; ++row) {
            const double f = m[idx[row]][col] / diag;
            for (int k = col; k < 3; ++k) m[idx[row]][k] -= f * m[idx[col]][k];
            r[idx[row]] -= f * r[idx[col]];
        }
    }
    for (int col = 2; col >= 0; --col) {
        double v = r[idx[col]];
        for (int k = col + 1; k < 3; ++k) v -= m[idx[col]][k] * out[k];
        out[col] = v / m[idx[col]][col];
    }
    return true;
}

} // namespace

FitResult fit_exponential(std::span<const std::pair<double, double>> points,
                          FitTrace* trace) {
    if (points.size() < 4)
        throw std::invalid_argument("fit_exponential: need at least 4 points");
    for (std::size_t i = 1; i < points.size(); ++i)
        if (!(points[i].first > points[i - 1].first))
            throw std::invalid_argument(
                "fit_exponential: x must be strictly increasing");

    const double n = static_cast<double>(points.size());
    double mean = 0.0;
    for (const auto& [x, y] : points) mean += y;
    mean /= n;
    double var = 0.0;
    for (const auto& [x, y] : points) var += (y - mean) * (y - mean);
    var /= n;
    if (var < 1e-12) {
        FitResult res{mean, 0.0, 1.0, std::sqrt(var)};
        return res;
    }

    // Grid over b, log-spaced in [1, 200].
    constexpr int kGrid = 200;
    double best_b = 1.0, best_h = mean, best_a = 0.0;
    double best_sse = std::numeric_limits<double>::infinity();
    for (int k = 0; k < kGrid; ++k) {
        const double b = std::exp(std::log(200.0) * k / (kGrid - 1));
        double h, a;
        if (!solve_linear(points, b, h, a)) continue;
        const double sse = model_sse(points, h, a, b);
        if (sse < best_sse) {
            best_sse = sse;
            best_b = b;
            best_h = h;
            best_a = a;
        }
    }

    // Damped Gauss-Newton refinement.
    double h = best_h, a = best_a, b = best_b, sse = best_sse;
    if (trace) trace->rms_per_accept.push_back(std::sqrt(sse / n));
    for (int iter = 0; iter < 100; ++iter) {
        double jtj[3][3] = {};
        double jtr[3] = {};
        for (const auto& [x, y] : points) {
            const double u = std::exp(-x / b);
            const double r = y - (h - a * u);
            const double j[3] = {1.0, -u, -a * u * x / (b * b)};
            for (int p = 0; p < 3; ++p) {
                jtr[p] += j[p] * r;
                for (int q = 0; q < 3; ++q) jtj[p][q] += j[p] * j[q];
            }
        }
        double step[3];
        if (!solve3(jtj, jtr, step)) break;

        double lambda = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 30; ++halving, lambda *= 0.5) {
            const double nh = h + lambda * step[0];
            const double na = a + lambda * step[1];
            const double nb = b + lambda * step[2];
            if (!(nb > 0.0)) continue;
            const double nsse = model_sse(points, nh, na, nb);
            if (nsse <= sse) {
                const double improvement = sse - nsse;
                h = nh;
                a = na;
                b = nb;
                sse = nsse;
                accepted = true;
                if (trace) trace->rms_per_accept.push_back(std::sqrt(sse / n));
                if (improvement <= 1e-15 * (1.0 + sse)) iter = 100;
                break;
            }
        }
        if (!accepted) break;
    }
    return {h, a, b, std::sqrt(sse / n)};
}

} // namespace mcsim
