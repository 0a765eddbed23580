#ifndef CURVIREG_DESCRIPTOR_HPP
#define CURVIREG_DESCRIPTOR_HPP

#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "curvireg/saliency.hpp"

namespace curvireg {

/// Curvature-oriented HOG over an 8x8 cell grid with 9 unsigned-orientation
/// bins: 576 non-negative reals, cells row-major.
struct HogDescriptor {
    static constexpr int kCells = 8;
    static constexpr int kBins = 9;
    static constexpr int kSize = kCells * kCells * kBins;

    std::vector<double> data;
    std::string source;  // CS | MCS | MFC
    bool all_zero = false;
};

struct HogParams {
    int resize_to = 256;       // aspect-preserving letterbox target
    double cell_epsilon = 1e-3;  // per-cell L2 guard
};

/// Bins the per-pixel orientation (folded to [0,180), soft vote into the two
/// nearest bins) weighted by the saliency value; each cell is L2-normalized.
HogDescriptor oriented_hog(const SaliencyMap& map, const HogParams& params = {},
                           const std::string& source = "CS");

/// Mean and regularized covariance over the database descriptors, with the
/// Cholesky factor of (Sigma + lambda I) cached for scoring.
struct DescriptorStats {
    Eigen::VectorXd mu;
    Eigen::MatrixXd sigma;
    double lambda_reg = 0.0;
    Eigen::LLT<Eigen::MatrixXd> chol;

    void refactor();  // rebuild the cached factor after deserialization
};

DescriptorStats fit_stats(const std::vector<HogDescriptor>& descriptors);

/// Whitened similarity (d - mu)^T (Sigma + lambda I)^{-1} q via the cached
/// Cholesky solve; never forms an explicit inverse.
double s_hog(const HogDescriptor& query, const HogDescriptor& db, const DescriptorStats& stats);

}  // namespace curvireg

#endif
