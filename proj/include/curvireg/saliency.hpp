#ifndef CURVIREG_SALIENCY_HPP
#define CURVIREG_SALIENCY_HPP

#include <cstdint>
#include <vector>

#include "curvireg/scalar_field.hpp"

namespace curvireg {

/// Per-pixel saliency magnitude (>= 0) with the dominant eigenvector as a unit
/// orientation; mask flags pixels the detector considers valid. Masked-out
/// pixels carry value 0.
struct SaliencyMap {
    ScalarField value;
    ScalarField orient_x;
    ScalarField orient_y;
    std::vector<uint8_t> mask;

    SaliencyMap() = default;
    SaliencyMap(int w, int h)
        : value(w, h), orient_x(w, h, 1.0), orient_y(w, h, 0.0),
          mask(static_cast<size_t>(w) * h, 1) {}

    int width() const { return value.width(); }
    int height() const { return value.height(); }
    bool valid(int x, int y) const {
        return mask[static_cast<size_t>(y) * value.width() + x] != 0;
    }
    void set_valid(int x, int y, bool v) {
        mask[static_cast<size_t>(y) * value.width() + x] = v ? 1 : 0;
    }
};

}  // namespace curvireg

#endif
