#include "curvireg/saliency_image.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvireg/errors.hpp"
#include "curvireg/image_math.hpp"

namespace curvireg {

namespace {

constexpr double kRatioFloor = 1e-8;  // eps_d: guard for the peak ratio
constexpr double kBlurFloor = 1e-6;   // eps_r: guard for R - 1

double value_range(const ScalarField& f) {
    double lo = f.values().front();
    double hi = lo;
    for (double v : f.values()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo;
}

struct Parabola {
    double a = 0.0, b = 0.0, c = 0.0;
    double eval(double t) const { return (a * t + b) * t + c; }
};

Parabola fit3(double cm, double c0, double cp) {
    Parabola p;
    p.c = c0;
    p.b = 0.5 * (cp - cm);
    p.a = 0.5 * (cp + cm) - c0;
    return p;
}

ScalarField squared_gradient(const ScalarField& f, double sigma) {
    auto [gx, gy] = derivatives1(f, sigma);
    ScalarField cs(f.width(), f.height());
#pragma omp parallel for schedule(static)
    for (int y = 0; y < f.height(); ++y)
        for (int x = 0; x < f.width(); ++x)
            cs.at(x, y) = gx.at(x, y) * gx.at(x, y) + gy.at(x, y) * gy.at(x, y);
    return cs;
}

}  // namespace

SaliencyMap image_curvilinear_saliency(const IntensityImage& img, double sigma) {
    if (img.values.empty())
        throw ParameterError("image_curvilinear_saliency: empty image");
    auto [gx, gy] = derivatives1(img.values, sigma);
    SaliencyMap map(img.values.width(), img.values.height());
#pragma omp parallel for schedule(static)
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            const double dx = gx.at(x, y);
            const double dy = gy.at(x, y);
            map.value.at(x, y) = dx * dx + dy * dy;
            const double n = std::hypot(dx, dy);
            if (n > 0.0) {
                map.orient_x.at(x, y) = dx / n;
                map.orient_y.at(x, y) = dy / n;
            }
        }
    }
    return map;
}

SaliencyMap multi_scale_cs(const IntensityImage& img, int levels, const McsParams& params) {
    if (levels < 2)
        throw ParameterError("multi_scale_cs: need at least 2 levels");
    const int w = img.values.width();
    const int h = img.values.height();
    const double threshold = std::exp(-static_cast<double>(levels));
    const double range = value_range(img.values);
    const double kappa = params.kappa_fraction * range;

    SaliencyMap finest = image_curvilinear_saliency(img, params.sigma);

    ScalarField level = img.values;
    ScalarField keep_min;   // min over levels of normalized CS
    ScalarField keep_max;   // max over levels
    for (int k = 0; k < levels; ++k) {
        if (k > 0) {
            if (kappa <= 0.0)
                break;  // constant image: every level identical
            level = anisotropic_diffuse(level, params.diffusion_iterations, kappa);
        }
        const ScalarField cs =
            (k == 0) ? finest.value : image_curvilinear_saliency({level, img.bit_depth},
                                                                 params.sigma)
                                          .value;
        const ScalarField norm = normalize01(cs);
        if (k == 0) {
            keep_min = norm;
            keep_max = norm;
        } else {
#pragma omp parallel for schedule(static)
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    keep_min.at(x, y) = std::min(keep_min.at(x, y), norm.at(x, y));
                    keep_max.at(x, y) = std::max(keep_max.at(x, y), norm.at(x, y));
                }
        }
    }

    SaliencyMap out(w, h);
    out.orient_x = finest.orient_x;
    out.orient_y = finest.orient_y;
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            out.value.at(x, y) = (keep_min.at(x, y) >= threshold) ? keep_max.at(x, y) : 0.0;
    return out;
}

FocusScaleStack blur_ratio_stack(const IntensityImage& img, double base_sigma,
                                 const std::vector<double>& sigmas) {
    if (img.values.empty())
        throw ParameterError("blur_ratio_stack: empty image");
    if (sigmas.empty())
        throw ParameterError("blur_ratio_stack: need at least one re-blur sigma");
    for (size_t i = 0; i < sigmas.size(); ++i) {
        if (sigmas[i] <= 0.0 || (i > 0 && sigmas[i] <= sigmas[i - 1]))
            throw ParameterError("blur_ratio_stack: sigmas must be positive and increasing");
    }
    const int w = img.values.width();
    const int h = img.values.height();

    FocusScaleStack stack;
    stack.sigmas = sigmas;

    // Direction field and NMS run at image resolution on the plain CS map.
    SaliencyMap base = image_curvilinear_saliency(img, std::max(base_sigma, 1.0));
    stack.orient_x = base.orient_x;
    stack.orient_y = base.orient_y;

    const ScalarField cs0 = squared_gradient(img.values, base_sigma);
    stack.ridge.assign(static_cast<size_t>(w) * h, 0);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double v = cs0.at(x, y);
            if (v <= 0.0)
                continue;
            const double dx = stack.orient_x.at(x, y);
            const double dy = stack.orient_y.at(x, y);
            const double vm = cs0.sample_bilinear(x - dx, y - dy);
            const double vp = cs0.sample_bilinear(x + dx, y + dy);
            if (v >= vm && v >= vp)
                stack.ridge[static_cast<size_t>(y) * w + x] = 1;
        }
    }

    // Peak measurements happen on a 2x grid: a half-pixel sampling step plus
    // the parabola fit keeps sub-pixel blur widths measurable.
    const ScalarField up = upsample2x(img.values);
    const ScalarField cs_up = squared_gradient(up, base_sigma > 0.0 ? 2.0 * base_sigma : 0.0);
    std::vector<ScalarField> cs_up_i;
    cs_up_i.reserve(sigmas.size());
    for (double s : sigmas)
        cs_up_i.push_back(squared_gradient(gaussian_smooth(up, 2.0 * s),
                                           base_sigma > 0.0 ? 2.0 * base_sigma : 0.0));

    stack.ratio.assign(sigmas.size(), ScalarField(w, h));
    stack.blur.assign(sigmas.size(), ScalarField(w, h));
    stack.defined.assign(sigmas.size(), std::vector<uint8_t>(static_cast<size_t>(w) * h, 0));

#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const size_t idx = static_cast<size_t>(y) * w + x;
            if (!stack.ridge[idx])
                continue;
            const double dx = stack.orient_x.at(x, y);
            const double dy = stack.orient_y.at(x, y);
            const double ux = 2.0 * x;
            const double uy = 2.0 * y;
            const Parabola p0 = fit3(cs_up.sample_bilinear(ux - dx, uy - dy),
                                     cs_up.sample_bilinear(ux, uy),
                                     cs_up.sample_bilinear(ux + dx, uy + dy));
            double t = 0.0;
            if (p0.a < 0.0)
                t = std::clamp(-p0.b / (2.0 * p0.a), -1.0, 1.0);
            const double peak0 = p0.eval(t);
            if (peak0 <= 0.0)
                continue;
            for (size_t i = 0; i < sigmas.size(); ++i) {
                const Parabola pi = fit3(cs_up_i[i].sample_bilinear(ux - dx, uy - dy),
                                         cs_up_i[i].sample_bilinear(ux, uy),
                                         cs_up_i[i].sample_bilinear(ux + dx, uy + dy));
                const double peak_i = pi.eval(t);
                const double r = peak0 / std::max(peak_i, kRatioFloor);
                if (r < 1.0 - 1e-6)
                    continue;  // re-blur raised the response: not a clean peak
                stack.ratio[i].at(x, y) = r;
                stack.defined[i][idx] = 1;
            }
        }
    }
    return stack;
}

void blur_amount(FocusScaleStack& stack, double propagate_radius) {
    const int w = stack.width();
    const int h = stack.height();
    for (size_t i = 0; i < stack.sigmas.size(); ++i) {
        ScalarField& s = stack.blur[i];
#pragma omp parallel for schedule(static)
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const size_t idx = static_cast<size_t>(y) * w + x;
                if (!stack.defined[i][idx])
                    continue;
                const double r = stack.ratio[i].at(x, y);
                s.at(x, y) = stack.sigmas[i] / std::sqrt(std::max(r - 1.0, kBlurFloor));
            }
        }
        if (propagate_radius > 0.0) {
            // Chamfer nearest-ridge assignment, cut off at the radius.
            std::vector<double> dist(static_cast<size_t>(w) * h,
                                     std::numeric_limits<double>::infinity());
            ScalarField src = s;
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x)
                    if (stack.defined[i][static_cast<size_t>(y) * w + x])
                        dist[static_cast<size_t>(y) * w + x] = 0.0;
            auto relax = [&](int x, int y, int nx, int ny, double step) {
                if (nx < 0 || nx >= w || ny < 0 || ny >= h)
                    return;
                const size_t a = static_cast<size_t>(y) * w + x;
                const size_t b = static_cast<size_t>(ny) * w + nx;
                if (dist[b] + step < dist[a]) {
                    dist[a] = dist[b] + step;
                    src.at(x, y) = src.at(nx, ny);
                }
            };
            const double diag = std::sqrt(2.0);
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    relax(x, y, x - 1, y, 1.0);
                    relax(x, y, x, y - 1, 1.0);
                    relax(x, y, x - 1, y - 1, diag);
                    relax(x, y, x + 1, y - 1, diag);
                }
            for (int y = h - 1; y >= 0; --y)
                for (int x = w - 1; x >= 0; --x) {
                    relax(x, y, x + 1, y, 1.0);
                    relax(x, y, x, y + 1, 1.0);
                    relax(x, y, x + 1, y + 1, diag);
                    relax(x, y, x - 1, y + 1, diag);
                }
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    const size_t idx = static_cast<size_t>(y) * w + x;
                    if (!stack.defined[i][idx] && dist[idx] <= propagate_radius &&
                        src.at(x, y) > 0.0) {
                        s.at(x, y) = src.at(x, y);
                        stack.defined[i][idx] = 1;
                    }
                }
        }
    }
}

SaliencyMap multi_focus_curves(const IntensityImage& img, int levels, const MfcParams& params) {
    if (levels < 2)
        throw ParameterError("multi_focus_curves: need at least 2 levels");
    std::vector<double> sigmas = params.sigmas;
    if (sigmas.empty())
        for (int i = 1; i < levels; ++i)
            sigmas.push_back(static_cast<double>(i));

    FocusScaleStack stack = blur_ratio_stack(img, params.base_sigma, sigmas);
    blur_amount(stack, params.propagate_radius);

    const int w = stack.width();
    const int h = stack.height();
    const double threshold = std::exp(-static_cast<double>(levels));
    const size_t n_scales = sigmas.size();

    // Normalize focusness 1/s_i over its defined pixels, per scale.
    std::vector<double> lo(n_scales, std::numeric_limits<double>::infinity());
    std::vector<double> hi(n_scales, -std::numeric_limits<double>::infinity());
    for (size_t i = 0; i < n_scales; ++i)
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const size_t idx = static_cast<size_t>(y) * w + x;
                if (!stack.defined[i][idx])
                    continue;
                const double f = 1.0 / stack.blur[i].at(x, y);
                lo[i] = std::min(lo[i], f);
                hi[i] = std::max(hi[i], f);
            }

    SaliencyMap out(w, h);
    out.orient_x = stack.orient_x;
    out.orient_y = stack.orient_y;
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const size_t idx = static_cast<size_t>(y) * w + x;
            bool keep = true;
            double worst_blur = 0.0;
            for (size_t i = 0; i < n_scales && keep; ++i) {
                if (!stack.defined[i][idx]) {
                    keep = false;
                    break;
                }
                const double span = hi[i] - lo[i];
                const double f = 1.0 / stack.blur[i].at(x, y);
                const double fn = (span > 0.0) ? (f - lo[i]) / span : 1.0;
                if (fn < threshold)
                    keep = false;
                worst_blur = std::max(worst_blur, stack.blur[i].at(x, y));
            }
            if (keep && worst_blur > 0.0)
                out.value.at(x, y) = 1.0 / worst_blur;
        }
    }
    return out;
}

}  // namespace curvireg
