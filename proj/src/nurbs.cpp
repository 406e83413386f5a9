#include "meshsizer/nurbs.hpp"

#include <algorithm>
#include <cmath>

#include "meshsizer/errors.hpp"

namespace meshsizer {

namespace {

void check_lambda(double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw UsageError("curve parameter " + std::to_string(lambda) + " outside [0,1]");
}

/// Index i of the knot span [knots[i], knots[i+1]) containing lambda, with
/// lambda = 1 assigned to the last non-vanishing span.
int find_span(const NurbsCurve& c, double lambda) {
    const int n = c.cp_count() - 1;
    const int q = c.degree;
    if (lambda >= c.knots[n + 1]) return n;
    int lo = q, hi = n + 1;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        (lambda < c.knots[mid] ? hi : lo) = mid;
    }
    return lo;
}

/// Non-vanishing basis functions N[span-q .. span] at lambda (Cox-de Boor).
std::vector<double> basis_funs(const NurbsCurve& c, int span, double lambda) {
    const int q = c.degree;
    std::vector<double> N(q + 1, 0.0), left(q + 1), right(q + 1);
    N[0] = 1.0;
    for (int j = 1; j <= q; ++j) {
        left[j] = lambda - c.knots[span + 1 - j];
        right[j] = c.knots[span + j] - lambda;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double tmp = N[r] / (right[r + 1] + left[j - r]);
            N[r] = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        N[j] = saved;
    }
    return N;
}

/// Basis derivatives up to max_order; ders[k][j] is the k-th derivative of
/// basis function span-q+j.
std::vector<std::vector<double>> ders_basis_funs(const NurbsCurve& c, int span, double lambda,
                                                 int max_order) {
    const int q = c.degree;
    const int order = std::min(max_order, q);
    std::vector<std::vector<double>> ndu(q + 1, std::vector<double>(q + 1, 0.0));
    std::vector<double> left(q + 1), right(q + 1);
    ndu[0][0] = 1.0;
    for (int j = 1; j <= q; ++j) {
        left[j] = lambda - c.knots[span + 1 - j];
        right[j] = c.knots[span + j] - lambda;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu[j][r] = right[r + 1] + left[j - r];
            const double tmp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        ndu[j][j] = saved;
    }
    std::vector<std::vector<double>> ders(max_order + 1, std::vector<double>(q + 1, 0.0));
    for (int j = 0; j <= q; ++j) ders[0][j] = ndu[j][q];
    std::vector<std::vector<double>> a(2, std::vector<double>(q + 1, 0.0));
    for (int r = 0; r <= q; ++r) {
        int s1 = 0, s2 = 1;
        a[0][0] = 1.0;
        for (int k = 1; k <= order; ++k) {
            double d = 0.0;
            const int rk = r - k, qk = q - k;
            if (r >= k) {
                a[s2][0] = a[s1][0] / ndu[qk + 1][rk];
                d = a[s2][0] * ndu[rk][qk];
            }
            const int j1 = (rk >= -1) ? 1 : -rk;
            const int j2 = (r - 1 <= qk) ? k - 1 : q - r;
            for (int j = j1; j <= j2; ++j) {
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[qk + 1][rk + j];
                d += a[s2][j] * ndu[rk + j][qk];
            }
            if (r <= qk) {
                a[s2][k] = -a[s1][k - 1] / ndu[qk + 1][r];
                d += a[s2][k] * ndu[r][qk];
            }
            ders[k][r] = d;
            std::swap(s1, s2);
        }
    }
    double factor = q;
    for (int k = 1; k <= order; ++k) {
        for (int j = 0; j <= q; ++j) ders[k][j] *= factor;
        factor *= (q - k);
    }
    return ders;
}

struct CurvePoint {
    Vec2 c;    // position
    Vec2 d1;   // first derivative
    Vec2 d2;   // second derivative
};

CurvePoint eval_all(const NurbsCurve& c, double lambda) {
    const int span = find_span(c, lambda);
    const auto ders = ders_basis_funs(c, span, lambda, 2);
    const int q = c.degree;
    Vec2 A, A1, A2;
    double W = 0.0, W1 = 0.0, W2 = 0.0;
    for (int j = 0; j <= q; ++j) {
        const int i = span - q + j;
        const double w = c.weights[i];
        const Vec2 wb = w * c.control_points[i];
        A += ders[0][j] * wb;
        W += ders[0][j] * w;
        A1 += ders[1][j] * wb;
        W1 += ders[1][j] * w;
        if (q >= 2) {
            A2 += ders[2][j] * wb;
            W2 += ders[2][j] * w;
        }
    }
    CurvePoint p;
    p.c = A / W;
    p.d1 = (A1 - W1 * p.c) / W;
    p.d2 = (A2 - 2.0 * W1 * p.d1 - W2 * p.c) / W;
    return p;
}

}  // namespace

void validate_curve(const NurbsCurve& curve) {
    const int ncp = curve.cp_count();
    const int q = curve.degree;
    if (q < 0) throw UsageError("curve degree must be non-negative");
    if (ncp < q + 1) throw UsageError("curve needs at least degree+1 control points");
    if (static_cast<int>(curve.knots.size()) != ncp + q + 1)
        throw UsageError("knot count must equal control point count + degree + 1");
    if (curve.weights.size() != curve.control_points.size())
        throw UsageError("weight count must match control point count");
    for (double w : curve.weights)
        if (!(w > 0.0)) throw UsageError("curve weights must be positive");
    for (size_t i = 0; i + 1 < curve.knots.size(); ++i)
        if (curve.knots[i] > curve.knots[i + 1]) throw UsageError("knots must be non-decreasing");
    for (int i = 0; i <= q; ++i) {
        if (curve.knots[i] != curve.knots.front() ||
            curve.knots[curve.knots.size() - 1 - i] != curve.knots.back())
            throw UsageError("knot vector must be clamped with degree+1 end repeats");
    }
    if (curve.knots.front() != 0.0 || curve.knots.back() != 1.0)
        throw UsageError("knot vector must span [0,1]");
}

std::vector<double> eval_basis(const NurbsCurve& curve, double lambda) {
    check_lambda(lambda);
    const int span = find_span(curve, lambda);
    const auto N = basis_funs(curve, span, lambda);
    std::vector<double> full(curve.cp_count(), 0.0);
    for (int j = 0; j <= curve.degree; ++j) full[span - curve.degree + j] = N[j];
    return full;
}

Vec2 eval_curve(const NurbsCurve& curve, double lambda, int order) {
    check_lambda(lambda);
    if (order < 0 || order > 1) throw UsageError("eval_curve supports orders 0 and 1");
    const CurvePoint p = eval_all(curve, lambda);
    return order == 0 ? p.c : p.d1;
}

InversionResult invert_point(const NurbsCurve& curve, const Vec2& point) {
    auto dist2 = [&](double t) { return (eval_all(curve, t).c - point).squared_norm(); };

    double best = 0.0, best_d2 = dist2(0.0);
    constexpr int kSeeds = 64;
    for (int k = 1; k < kSeeds; ++k) {
        const double t = static_cast<double>(k) / (kSeeds - 1);
        const double d2 = dist2(t);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = t;
        }
    }

    double lambda = best;
    bool converged = false;
    for (int it = 0; it < 50; ++it) {
        const CurvePoint p = eval_all(curve, lambda);
        const Vec2 r = p.c - point;
        const double f = r.dot(p.d1);
        const double fp = p.d1.squared_norm() + r.dot(p.d2);
        if (fp == 0.0) break;
        double next = lambda - f / fp;
        next = std::clamp(next, 0.0, 1.0);
        const double step = std::abs(next - lambda);
        lambda = next;
        if (step < 1e-12) {
            converged = true;
            break;
        }
    }

    if (!converged || dist2(lambda) > best_d2) {
        // Dense re-seed plus golden-section refinement on the distance.
        constexpr int kDense = 1024;
        double lo = 0.0, hi = 1.0;
        double seed = best;
        double seed_d2 = best_d2;
        for (int k = 0; k <= kDense; ++k) {
            const double t = static_cast<double>(k) / kDense;
            const double d2 = dist2(t);
            if (d2 < seed_d2) {
                seed_d2 = d2;
                seed = t;
            }
        }
        lo = std::max(0.0, seed - 1.0 / kDense);
        hi = std::min(1.0, seed + 1.0 / kDense);
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = lo, b = hi;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = dist2(x1), f2 = dist2(x2);
        for (int it = 0; it < 200 && (b - a) > 1e-14; ++it) {
            if (f1 < f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = dist2(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = dist2(x2);
            }
        }
        const double cand = 0.5 * (a + b);
        if (dist2(cand) < dist2(lambda)) lambda = cand;
    }

    return {lambda, std::sqrt(dist2(lambda))};
}

// ---------------------------------------------------------------------------
// Aerofoil family
// ---------------------------------------------------------------------------

namespace {

constexpr std::array<Vec2, 8> kBaseUpper = {{{0.000, 0.000},
                                             {0.000, 0.024},
                                             {0.105, 0.059},
                                             {0.391, 0.076},
                                             {0.594, 0.059},
                                             {0.799, 0.034},
                                             {0.933, 0.012},
                                             {1.000, 0.000}}};

constexpr std::array<Vec2, 8> kBaseLower = {{{0.000, 0.000},
                                             {0.000, -0.024},
                                             {0.105, -0.059},
                                             {0.391, -0.084},
                                             {0.594, -0.046},
                                             {0.799, -0.010},
                                             {0.933, 0.000},
                                             {1.000, 0.000}}};

// Upper dX cp1..6, upper dY cp1..6, lower dX cp2..6, lower dY cp2..6.
constexpr std::array<double, 22> kOffsetRanges = {
    4.3e-2, 4.3e-2, 3.1e-2, 2.5e-2, 1.5e-2, 5.3e-3,   // upper dX
    2.2e-2, 2.2e-2, 1.5e-2, 1.2e-2, 7.4e-3, 2.7e-3,   // upper dY
    4.3e-2, 4.5e-2, 3.9e-5, 3.2e-2, 1.9e-2,           // lower dX
    2.2e-2, 2.3e-2, 1.9e-5, 1.6e-2, 9.6e-3,           // lower dY
};

NurbsCurve cubic_curve(const std::array<Vec2, 8>& cps) {
    NurbsCurve c;
    c.degree = 3;
    c.knots = {0, 0, 0, 0, 0.2, 0.4, 0.6, 0.8, 1, 1, 1, 1};
    c.control_points.assign(cps.begin(), cps.end());
    c.weights.assign(8, 1.0);
    return c;
}

}  // namespace

std::span<const Vec2, 8> aerofoil_base_upper() { return kBaseUpper; }
std::span<const Vec2, 8> aerofoil_base_lower() { return kBaseLower; }
std::span<const double, 22> aerofoil_offset_ranges() { return kOffsetRanges; }

AerofoilGeometry build_aerofoil(std::span<const double> offsets22, double theta) {
    if (offsets22.size() != 22) throw UsageError("aerofoil expects exactly 22 offsets");
    if (!(theta >= 0.5 && theta <= 1.5))
        throw UsageError("theta " + std::to_string(theta) + " outside [0.5, 1.5]");
    for (int k = 0; k < 22; ++k) {
        if (std::abs(offsets22[k]) > kOffsetRanges[k])
            throw UsageError("offset " + std::to_string(k) + " value " +
                             std::to_string(offsets22[k]) + " exceeds range +-" +
                             std::to_string(kOffsetRanges[k]));
    }

    std::array<Vec2, 8> upper = kBaseUpper;
    std::array<Vec2, 8> lower = kBaseLower;
    for (int k = 0; k < 6; ++k) {
        upper[k + 1].x += offsets22[k];
        upper[k + 1].y += offsets22[6 + k];
    }
    for (int k = 0; k < 5; ++k) {
        lower[k + 2].x += offsets22[12 + k];
        lower[k + 2].y += offsets22[17 + k];
    }
    // G1 join at the leading edge: the second lower control point mirrors the
    // second upper control point through the leading edge, scaled by theta.
    lower[1] = lower[0] + theta * (lower[0] - upper[1]);

    AerofoilGeometry g;
    g.upper = cubic_curve(upper);
    g.lower = cubic_curve(lower);
    std::copy(offsets22.begin(), offsets22.end(), g.params.begin());
    g.params[22] = theta;
    return g;
}

}  // namespace meshsizer
