#include "curvireg/image_math.hpp"

#include <cmath>

namespace curvireg {

namespace {

constexpr double kDiscriminantTol = 1e-12;

// Correlation pass along x: out(x,y) = sum_t w[t] * f(x+t-r, y), replicate border.
ScalarField convolve_x(const ScalarField& f, const std::vector<double>& w, bool parallel) {
    const int r = static_cast<int>(w.size() / 2);
    ScalarField out(f.width(), f.height());
#pragma omp parallel for schedule(static) if (parallel)
    for (int y = 0; y < f.height(); ++y) {
        for (int x = 0; x < f.width(); ++x) {
            double acc = 0.0;
            for (int t = -r; t <= r; ++t)
                acc += w[t + r] * f.at_clamped(x + t, y);
            out.at(x, y) = acc;
        }
    }
    return out;
}

ScalarField convolve_y(const ScalarField& f, const std::vector<double>& w, bool parallel) {
    const int r = static_cast<int>(w.size() / 2);
    ScalarField out(f.width(), f.height());
#pragma omp parallel for schedule(static) if (parallel)
    for (int y = 0; y < f.height(); ++y) {
        for (int x = 0; x < f.width(); ++x) {
            double acc = 0.0;
            for (int t = -r; t <= r; ++t)
                acc += w[t + r] * f.at_clamped(x, y + t);
            out.at(x, y) = acc;
        }
    }
    return out;
}

ScalarField smooth_impl(const ScalarField& f, double sigma, bool parallel) {
    if (sigma <= 0.0)
        throw ParameterError("gaussian_smooth: sigma must be positive");
    if (f.empty())
        throw ParameterError("gaussian_smooth: empty field");
    const auto k = gaussian_kernel(sigma);
    return convolve_y(convolve_x(f, k, parallel), k, parallel);
}

std::pair<ScalarField, ScalarField> deriv1_impl(const ScalarField& f, double sigma,
                                                bool parallel) {
    if (sigma < 0.0)
        throw ParameterError("derivatives1: sigma must be non-negative");
    if (f.empty())
        throw ParameterError("derivatives1: empty field");
    const auto d = gaussian_deriv_kernel(sigma);
    if (sigma == 0.0)
        return {convolve_x(f, d, parallel), convolve_y(f, d, parallel)};
    const auto g = gaussian_kernel(sigma);
    ScalarField fx = convolve_y(convolve_x(f, d, parallel), g, parallel);
    ScalarField fy = convolve_x(convolve_y(f, d, parallel), g, parallel);
    return {std::move(fx), std::move(fy)};
}

std::array<ScalarField, 3> deriv2_impl(const ScalarField& f, double sigma, bool parallel) {
    if (sigma < 0.0)
        throw ParameterError("derivatives2: sigma must be non-negative");
    if (f.empty())
        throw ParameterError("derivatives2: empty field");
    const auto d1 = gaussian_deriv_kernel(sigma);
    const auto d2 = gaussian_deriv2_kernel(sigma);
    if (sigma == 0.0) {
        ScalarField fxy = convolve_y(convolve_x(f, d1, parallel), d1, parallel);
        ScalarField fxx = convolve_x(f, d2, parallel);
        ScalarField fyy = convolve_y(f, d2, parallel);
        return {std::move(fxx), std::move(fxy), std::move(fyy)};
    }
    const auto g = gaussian_kernel(sigma);
    // fxy composes two first-derivative passes (each smoothing the other
    // axis), so it agrees with derivatives1 applied twice in either order.
    ScalarField fxy = convolve_y(convolve_y(convolve_x(convolve_x(f, d1, parallel), g, parallel),
                                            d1, parallel),
                                 g, parallel);
    ScalarField fxx = convolve_y(convolve_x(f, d2, parallel), g, parallel);
    ScalarField fyy = convolve_x(convolve_y(f, d2, parallel), g, parallel);
    return {std::move(fxx), std::move(fxy), std::move(fyy)};
}

ScalarField diffuse_impl(const ScalarField& f, int iterations, double kappa, double grad_sigma,
                         bool parallel) {
    if (iterations < 1)
        throw ParameterError("anisotropic_diffuse: iterations must be >= 1");
    if (kappa <= 0.0)
        throw ParameterError("anisotropic_diffuse: kappa must be positive");
    const int w = f.width();
    const int h = f.height();
    ScalarField cur = f;
    ScalarField nxt(w, h);
    ScalarField cond(w, h);
    const auto gk = gaussian_kernel(grad_sigma);
    constexpr double kTimeStep = 0.2;
    for (int it = 0; it < iterations; ++it) {
        // Regularized conduction: the gradient is read off a smoothed copy, so
        // fine texture diffuses away while extended edges stay frozen.
        const ScalarField reg =
            (grad_sigma > 0.0) ? convolve_y(convolve_x(cur, gk, parallel), gk, parallel) : cur;
#pragma omp parallel for schedule(static) if (parallel)
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const double gx = 0.5 * (reg.at_clamped(x + 1, y) - reg.at_clamped(x - 1, y));
                const double gy = 0.5 * (reg.at_clamped(x, y + 1) - reg.at_clamped(x, y - 1));
                const double g = std::sqrt(gx * gx + gy * gy) / kappa;
                cond.at(x, y) = std::exp(-g * g);
            }
        }
#pragma omp parallel for schedule(static) if (parallel)
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const double u = cur.at(x, y);
                const double cp = cond.at(x, y);
                double flux = 0.0;
                const int nx[4] = {x - 1, x + 1, x, x};
                const int ny[4] = {y, y, y - 1, y + 1};
                for (int k = 0; k < 4; ++k) {
                    if (nx[k] < 0 || nx[k] >= w || ny[k] < 0 || ny[k] >= h)
                        continue;  // replicate border: zero flux across the edge
                    const double cq = cond.at(nx[k], ny[k]);
                    flux += 0.5 * (cp + cq) * (cur.at(nx[k], ny[k]) - u);
                }
                nxt.at(x, y) = u + kTimeStep * flux;
            }
        }
        std::swap(cur, nxt);
    }
    return cur;
}

}  // namespace

std::vector<double> gaussian_kernel(double sigma) {
    if (sigma <= 0.0)
        return {1.0};
    const int r = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> w(2 * r + 1);
    double sum = 0.0;
    for (int t = -r; t <= r; ++t) {
        w[t + r] = std::exp(-0.5 * t * t / (sigma * sigma));
        sum += w[t + r];
    }
    for (double& v : w)
        v /= sum;
    return w;
}

std::vector<double> gaussian_deriv_kernel(double sigma) {
    if (sigma == 0.0)
        return {-0.5, 0.0, 0.5};
    const int r = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> w(2 * r + 1);
    double moment = 0.0;
    for (int t = -r; t <= r; ++t) {
        w[t + r] = t * std::exp(-0.5 * t * t / (sigma * sigma));
        moment += t * w[t + r];
    }
    // Scale so a ramp of unit slope measures exactly 1.
    for (double& v : w)
        v /= moment;
    return w;
}

std::vector<double> gaussian_deriv2_kernel(double sigma) {
    if (sigma == 0.0)
        return {1.0, -2.0, 1.0};
    const int r = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> w(2 * r + 1);
    const double s2 = sigma * sigma;
    double sum = 0.0;
    for (int t = -r; t <= r; ++t) {
        w[t + r] = (t * t / (s2 * s2) - 1.0 / s2) * std::exp(-0.5 * t * t / s2);
        sum += w[t + r];
    }
    // Zero mean (exact on constants), then unit response on t^2/2 curvature.
    double moment2 = 0.0;
    for (int t = -r; t <= r; ++t) {
        w[t + r] -= sum / (2 * r + 1);
        moment2 += t * t * w[t + r];
    }
    for (double& v : w)
        v *= 2.0 / moment2;
    return w;
}

Eig2 eig2(double m11, double m12, double m21, double m22) {
    const double tr = m11 + m22;
    const double det = m11 * m22 - m12 * m21;
    double disc = tr * tr - 4.0 * det;
    if (disc < -kDiscriminantTol)
        throw NumericError("eig2: complex spectrum (discriminant " + std::to_string(disc) + ")");
    if (disc < 0.0)
        disc = 0.0;
    const double s = std::sqrt(disc);

    Eig2 out;
    out.lambda1 = 0.5 * (tr + s);
    out.lambda2 = 0.5 * (tr - s);

    auto eigvec = [&](double lambda) -> std::array<double, 2> {
        // Rows of (M - lambda I) are both orthogonal complements of the
        // eigenvector in the symmetric case; take the better-conditioned one.
        const std::array<double, 2> a{m12, lambda - m11};
        const std::array<double, 2> b{lambda - m22, m21};
        const double na = std::hypot(a[0], a[1]);
        const double nb = std::hypot(b[0], b[1]);
        std::array<double, 2> v = (na >= nb) ? a : b;
        const double n = std::max(na, nb);
        if (n < 1e-300)
            return {1.0, 0.0};  // scalar multiple of identity
        v[0] /= n;
        v[1] /= n;
        if (v[0] < 0.0 || (v[0] == 0.0 && v[1] < 0.0)) {
            v[0] = -v[0];
            v[1] = -v[1];
        }
        return v;
    };

    out.e1 = eigvec(out.lambda1);
    if (s < 1e-300 && m12 == 0.0 && m21 == 0.0) {
        out.e1 = {1.0, 0.0};
        out.e2 = {0.0, 1.0};
    } else {
        out.e2 = eigvec(out.lambda2);
    }
    return out;
}

ScalarField gaussian_smooth(const ScalarField& f, double sigma) {
    return smooth_impl(f, sigma, true);
}

std::pair<ScalarField, ScalarField> derivatives1(const ScalarField& f, double sigma) {
    return deriv1_impl(f, sigma, true);
}

std::array<ScalarField, 3> derivatives2(const ScalarField& f, double sigma) {
    return deriv2_impl(f, sigma, true);
}

ScalarField anisotropic_diffuse(const ScalarField& f, int iterations, double kappa,
                                double grad_sigma) {
    return diffuse_impl(f, iterations, kappa, grad_sigma, true);
}

ScalarField upsample2x(const ScalarField& f) {
    const int w2 = f.width() * 2;
    const int h2 = f.height() * 2;
    ScalarField tmp(w2, f.height());
    auto catrom = [](double p0, double p1, double p2, double p3, double t) {
        return 0.5 * ((2.0 * p1) + (-p0 + p2) * t + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t * t +
                      (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * t * t * t);
    };
#pragma omp parallel for schedule(static)
    for (int y = 0; y < f.height(); ++y) {
        for (int x2 = 0; x2 < w2; ++x2) {
            const double sx = 0.5 * x2;  // up sample k sits at k/2 in source
            const int x1 = static_cast<int>(std::floor(sx));
            const double t = sx - x1;
            tmp.at(x2, y) = (t == 0.0)
                                ? f.at_clamped(x1, y)
                                : catrom(f.at_clamped(x1 - 1, y), f.at_clamped(x1, y),
                                         f.at_clamped(x1 + 1, y), f.at_clamped(x1 + 2, y), t);
        }
    }
    ScalarField out(w2, h2);
#pragma omp parallel for schedule(static)
    for (int y2 = 0; y2 < h2; ++y2) {
        const double sy = 0.5 * y2;
        const int y1 = static_cast<int>(std::floor(sy));
        const double t = sy - y1;
        for (int x2 = 0; x2 < w2; ++x2) {
            out.at(x2, y2) = (t == 0.0)
                                 ? tmp.at_clamped(x2, y1)
                                 : catrom(tmp.at_clamped(x2, y1 - 1), tmp.at_clamped(x2, y1),
                                          tmp.at_clamped(x2, y1 + 1), tmp.at_clamped(x2, y1 + 2), t);
        }
    }
    return out;
}

ScalarField normalize01(const ScalarField& f) {
    if (f.empty())
        return f;
    double lo = f.values().front();
    double hi = lo;
    for (double v : f.values()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    ScalarField out(f.width(), f.height());
    const double span = hi - lo;
    if (span <= 0.0)
        return out;
    for (size_t i = 0; i < f.size(); ++i)
        out.values()[i] = (f.values()[i] - lo) / span;
    return out;
}

namespace serial {
ScalarField gaussian_smooth(const ScalarField& f, double sigma) {
    return smooth_impl(f, sigma, false);
}
std::pair<ScalarField, ScalarField> derivatives1(const ScalarField& f, double sigma) {
    return deriv1_impl(f, sigma, false);
}
std::array<ScalarField, 3> derivatives2(const ScalarField& f, double sigma) {
    return deriv2_impl(f, sigma, false);
}
ScalarField anisotropic_diffuse(const ScalarField& f, int iterations, double kappa,
                                double grad_sigma) {
    return diffuse_impl(f, iterations, kappa, grad_sigma, false);
}
}  // namespace serial

}  // namespace curvireg
