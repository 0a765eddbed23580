#ifndef CURVIREG_CONFIG_HPP
#define CURVIREG_CONFIG_HPP

#include <string>

#include "curvireg/pipeline.hpp"

namespace curvireg {

/// Flat key=value configuration; precedence is CLI override > file > default.
/// Unknown keys are rejected.
struct Config {
    // rendering and view grid
    int image_size = 256;
    double fill_fraction = 0.8;
    double pixel_scale = 0.0;  // 0 = auto
    double h_step_deg = 50.0;
    double a_step_deg = 20.0;
    double v_min_m = 0.3;
    double v_max_m = 2.0;
    double v_step_m = 0.3;

    // detectors
    double detect_sigma = 1.0;
    int scales = 5;                  // MCS / MFC level count n
    int diffusion_iterations = 10;
    double kappa_fraction = 0.02;
    double mfc_base_sigma = 0.0;
    double mfc_propagate_radius = 0.0;

    // descriptor
    double hog_epsilon = 1e-3;
    int hog_resize = 256;

    // registration
    double eps_px = 3.0;
    double percentile = 90.0;
    double sigma_r = 0.1;
    int top_k = 3;
    double step_h_deg = 5.0;
    double step_a_deg = 5.0;
    double step_v_m = 0.05;
    double epsilon = 0.05;
    int max_rounds = 6;
    std::string detector = "mfc";  // query detector: cs | mcs | mfc

    void set(const std::string& key, const std::string& value);
    void load_file(const std::string& path);
    void validate() const;

    PipelineParams pipeline() const;
    McsParams mcs() const;
    MfcParams mfc() const;
};

}  // namespace curvireg

#endif
