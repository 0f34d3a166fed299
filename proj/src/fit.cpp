#include "pneuro/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace pneuro {

FitFamily fit_family_from_string(const std::string& s) {
    if (s == "tanh") return FitFamily::tanh_like;
    if (s == "logistic" || s == "sigmoid") return FitFamily::logistic;
    if (s == "relu") return FitFamily::relu;
    if (s == "linear") return FitFamily::linear;
    throw std::invalid_argument("unknown fit family '" + s + "'");
}

const char* to_string(FitFamily f) {
    switch (f) {
        case FitFamily::tanh_like: return "tanh";
        case FitFamily::logistic: return "logistic";
        case FitFamily::relu: return "relu";
        case FitFamily::linear: return "linear";
    }
    return "?";
}

namespace {

double shape(FitFamily f, double z) {
    switch (f) {
        case FitFamily::tanh_like: return std::tanh(z);
        case FitFamily::logistic: return 1.0 / (1.0 + std::exp(-z));
        case FitFamily::relu: return z > 0.0 ? z : 0.0;
        case FitFamily::linear: return z;
    }
    return 0.0;
}

using Params = std::array<double, 4>;  // a, b, c, d (in normalized x)

double sse(FitFamily f, const std::vector<double>& x, const std::vector<double>& y,
           const Params& p) {
    const double b = std::abs(p[1]) < 1e-9 ? 1e-9 : p[1];
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = p[0] * shape(f, (x[i] - p[2]) / b) + p[3] - y[i];
        s += r * r;
    }
    return s;
}

// Compact Nelder–Mead over the 4 shape parameters.
Params nelder_mead(const std::function<double(const Params&)>& cost, Params start,
                   double scale, int iters) {
    constexpr int dim = 4;
    std::array<Params, dim + 1> simplex;
    std::array<double, dim + 1> value{};
    simplex[0] = start;
    for (int i = 0; i < dim; ++i) {
        simplex[static_cast<std::size_t>(i) + 1] = start;
        double step = scale * (std::abs(start[static_cast<std::size_t>(i)]) + 0.1);
        simplex[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(i)] += step;
    }
    for (int i = 0; i <= dim; ++i) value[static_cast<std::size_t>(i)] = cost(simplex[static_cast<std::size_t>(i)]);

    for (int it = 0; it < iters; ++it) {
        std::array<int, dim + 1> order{};
        for (int i = 0; i <= dim; ++i) order[static_cast<std::size_t>(i)] = i;
        std::sort(order.begin(), order.end(),
                  [&](int a, int b2) { return value[static_cast<std::size_t>(a)] < value[static_cast<std::size_t>(b2)]; });
        const int best = order[0], worst = order[dim], second = order[dim - 1];
        if (value[static_cast<std::size_t>(worst)] - value[static_cast<std::size_t>(best)] <
            1e-14 * (1.0 + std::abs(value[static_cast<std::size_t>(best)])))
            break;

        Params centroid{};
        for (int i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (int k = 0; k < dim; ++k)
                centroid[static_cast<std::size_t>(k)] += simplex[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] / dim;
        }
        auto blend = [&](double t) {
            Params p{};
            for (int k = 0; k < dim; ++k)
                p[static_cast<std::size_t>(k)] = centroid[static_cast<std::size_t>(k)] +
                        t * (centroid[static_cast<std::size_t>(k)] -
                             simplex[static_cast<std::size_t>(worst)][static_cast<std::size_t>(k)]);
            return p;
        };

        const Params reflect = blend(1.0);
        const double vr = cost(reflect);
        if (vr < value[static_cast<std::size_t>(best)]) {
            const Params expand = blend(2.0);
            const double ve = cost(expand);
            simplex[static_cast<std::size_t>(worst)] = ve < vr ? expand : reflect;
            value[static_cast<std::size_t>(worst)] = std::min(ve, vr);
        } else if (vr < value[static_cast<std::size_t>(second)]) {
            simplex[static_cast<std::size_t>(worst)] = reflect;
            value[static_cast<std::size_t>(worst)] = vr;
        } else {
            const Params contract = blend(-0.5);
            const double vc = cost(contract);
            if (vc < value[static_cast<std::size_t>(worst)]) {
                simplex[static_cast<std::size_t>(worst)] = contract;
                value[static_cast<std::size_t>(worst)] = vc;
            } else {
                for (int i = 0; i <= dim; ++i) {
                    if (i == best) continue;
                    for (int k = 0; k < dim; ++k)
                        simplex[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
                            0.5 * (simplex[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] +
                                   simplex[static_cast<std::size_t>(best)][static_cast<std::size_t>(k)]);
                    value[static_cast<std::size_t>(i)] = cost(simplex[static_cast<std::size_t>(i)]);
                }
            }
        }
    }
    int best = 0;
    for (int i = 1; i <= dim; ++i)
        if (value[static_cast<std::size_t>(i)] < value[static_cast<std::size_t>(best)]) best = i;
    return simplex[static_cast<std::size_t>(best)];
}

}  // namespace

FitResult fit_reference(const TransferCurve& curve, FitFamily family) {
    if (curve.points.size() < 4)
        throw std::invalid_argument("fit_reference: need at least 4 points");

    const std::size_t n = curve.points.size();
    std::vector<double> xr(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        xr[i] = curve.points[i].input;
        y[i] = curve.points[i].mean;
    }
    const auto [xmin_it, xmax_it] = std::minmax_element(xr.begin(), xr.end());
    const double xm = (*xmin_it + *xmax_it) / 2.0;
    const double xs = std::max((*xmax_it - *xmin_it) / 2.0, 1e-300);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = (xr[i] - xm) / xs;

    const auto [ymin_it, ymax_it] = std::minmax_element(y.begin(), y.end());
    const double ymin = *ymin_it, ymax = *ymax_it;
    double ymean = 0.0;
    for (double v : y) ymean += v;
    ymean /= static_cast<double>(n);

    FitResult res;
    if (ymax - ymin < 1e-12) {  // constant data: no shape to fit
        res.a = 0.0;
        res.b = xs;
        res.c = xm;
        res.d = ymean;
        res.rmse = 0.0;
        res.degenerate = true;
        return res;
    }

    Params p{};
    if (family == FitFamily::linear) {
        // closed form least squares
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < n; ++i) {
            sx += x[i];
            sy += y[i];
            sxx += x[i] * x[i];
            sxy += x[i] * y[i];
        }
        const double dn = static_cast<double>(n);
        const double slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
        const double inter = (sy - slope * sx) / dn;
        p = {slope, 1.0, 0.0, inter};
    } else {
        Params start{};
        switch (family) {
            case FitFamily::tanh_like:
                start = {(ymax - ymin) / 2.0, 0.5, 0.0, (ymax + ymin) / 2.0};
                break;
            case FitFamily::logistic:
                start = {ymax - ymin, 0.25, 0.0, ymin};
                break;
            case FitFamily::relu:
                start = {(ymax - ymin) / 2.0, 1.0, 0.0, ymin};
                break;
            default: break;
        }
        auto cost = [&](const Params& q) { return sse(family, x, y, q); };
        p = nelder_mead(cost, start, 0.5, 4000);
        p = nelder_mead(cost, p, 0.1, 4000);  // polish
    }

    const double final_sse = sse(family, x, y, p);
    if (!std::isfinite(final_sse))
        throw std::runtime_error("fit_reference: fit did not converge (non-finite residual)");

    res.a = p[0];
    res.b = std::abs(p[1]) * xs;
    res.c = xm + p[2] * xs;
    res.d = p[3];
    res.rmse = std::sqrt(final_sse / static_cast<double>(n));
    res.degenerate = std::abs(p[0]) < 1e-9 * (std::abs(ymax) + std::abs(ymin) + 1e-12);
    return res;
}

}  // namespace pneuro
