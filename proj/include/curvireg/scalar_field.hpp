#ifndef CURVIREG_SCALAR_FIELD_HPP
#define CURVIREG_SCALAR_FIELD_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "curvireg/errors.hpp"

namespace curvireg {

/// Dense row-major grid of real values. Units are the caller's business:
/// depth in meters, intensity in [0,1], saliency unitless.
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(int width, int height, double fill = 0.0)
        : width_(width), height_(height),
          data_(static_cast<size_t>(width) * static_cast<size_t>(height), fill) {
        if (width <= 0 || height <= 0)
            throw ParameterError("ScalarField: non-positive extent");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return data_.empty(); }
    size_t size() const { return data_.size(); }

    double& at(int x, int y) { return data_[static_cast<size_t>(y) * width_ + x]; }
    double at(int x, int y) const { return data_[static_cast<size_t>(y) * width_ + x]; }

    // Replicate-border access.
    double at_clamped(int x, int y) const {
        x = std::clamp(x, 0, width_ - 1);
        y = std::clamp(y, 0, height_ - 1);
        return at(x, y);
    }

    // Bilinear sample with replicate border, coordinates in pixel units.
    double sample_bilinear(double x, double y) const {
        const int x0 = static_cast<int>(std::floor(x));
        const int y0 = static_cast<int>(std::floor(y));
        const double fx = x - x0;
        const double fy = y - y0;
        const double v00 = at_clamped(x0, y0);
        const double v10 = at_clamped(x0 + 1, y0);
        const double v01 = at_clamped(x0, y0 + 1);
        const double v11 = at_clamped(x0 + 1, y0 + 1);
        return (1.0 - fy) * ((1.0 - fx) * v00 + fx * v10) + fy * ((1.0 - fx) * v01 + fx * v11);
    }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

    bool same_shape(const ScalarField& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

}  // namespace curvireg

#endif
