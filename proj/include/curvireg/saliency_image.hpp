#ifndef CURVIREG_SALIENCY_IMAGE_HPP
#define CURVIREG_SALIENCY_IMAGE_HPP

#include <vector>

#include "curvireg/saliency.hpp"
#include "curvireg/scalar_field.hpp"

namespace curvireg {

/// Grayscale photograph with values normalized to [0,1].
struct IntensityImage {
    ScalarField values;
    int bit_depth = 8;
};

/// Single-scale curvilinear saliency of the intensity surface: the eigenvalue
/// gap of the first fundamental form collapses to |grad I|^2, with the unit
/// gradient as dominant direction.
SaliencyMap image_curvilinear_saliency(const IntensityImage& img, double sigma);

struct McsParams {
    double sigma = 1.0;            // derivative scale per level
    int diffusion_iterations = 10; // per pyramid level
    double kappa_fraction = 0.02;  // of the image value range
};

/// Multi-scale CS over an anisotropic-diffusion pyramid of n levels. Each
/// level is min-max normalized; a pixel keeps the max over levels iff it
/// clears T = exp(-n) at every level, which starves texture responses that
/// fade at coarse scales. Orientation comes from the finest level.
SaliencyMap multi_scale_cs(const IntensityImage& img, int levels, const McsParams& params = {});

/// Blur-ratio measurements at ridge pixels. Measurements run on an internal
/// 2x grid with a quadratic peak fit so sub-pixel blur widths stay resolvable;
/// all maps are at image resolution. ratio[i]/blur[i] are meaningful where
/// defined[i] is set (ridge pixels with a clean peak), 0 elsewhere.
struct FocusScaleStack {
    std::vector<double> sigmas;                 // re-blur sigmas, px
    std::vector<ScalarField> ratio;             // R_i = CS_peak / reblurred CS_peak
    std::vector<ScalarField> blur;              // s_i = sigma_i / sqrt(R_i - 1), px
    std::vector<std::vector<uint8_t>> defined;  // per-scale validity
    std::vector<uint8_t> ridge;                 // NMS survivors of the base CS
    ScalarField orient_x, orient_y;             // e_S1 of the base image

    int width() const { return orient_x.width(); }
    int height() const { return orient_x.height(); }
};

/// base_sigma: derivative scale of the base CS measurement (0 = central
/// differences). sigmas must be strictly increasing and positive.
FocusScaleStack blur_ratio_stack(const IntensityImage& img, double base_sigma,
                                 const std::vector<double>& sigmas);

/// Fills stack.blur with s_i = sigma_i / sqrt(max(R_i - 1, eps)); with
/// propagate_radius > 0 every pixel within that distance of a ridge borrows
/// the nearest ridge estimate.
void blur_amount(FocusScaleStack& stack, double propagate_radius = 0.0);

struct MfcParams {
    double base_sigma = 0.0;       // blur-ratio derivative scale
    double orient_sigma = 1.0;     // derivative scale of the e_S1 field
    std::vector<double> sigmas;    // empty: 1..n-1
    double propagate_radius = 0.0; // focus propagation, disabled by default
};

/// Multi focus curves: ridge pixels whose normalized focusness 1/s_i clears
/// T = exp(-n) at every re-blur scale; survivors score 1/(max_i s_i), the
/// sharpness under the most pessimistic blur estimate.
SaliencyMap multi_focus_curves(const IntensityImage& img, int levels,
                               const MfcParams& params = {});

}  // namespace curvireg

#endif
