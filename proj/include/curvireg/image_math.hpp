#ifndef CURVIREG_IMAGE_MATH_HPP
#define CURVIREG_IMAGE_MATH_HPP

#include <array>
#include <utility>
#include <vector>

#include "curvireg/scalar_field.hpp"

namespace curvireg {

/// Eigen pair of a real 2x2 matrix with real spectrum, lambda1 >= lambda2.
/// Eigenvectors are unit length with the first nonzero component positive.
struct Eig2 {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::array<double, 2> e1{1.0, 0.0};
    std::array<double, 2> e2{0.0, 1.0};
};

/// Closed-form eigen decomposition of [[m11, m12], [m21, m22]].
/// Discriminants in [-1e-12, 0) are clamped to zero; anything below throws.
Eig2 eig2(double m11, double m12, double m21, double m22);

/// Separable Gaussian convolution, kernel radius ceil(3*sigma), replicate border.
ScalarField gaussian_smooth(const ScalarField& f, double sigma);

/// First derivatives by Gaussian-derivative filtering; sigma == 0 means plain
/// central differences. Kernels are normalized so affine fields come out exact.
std::pair<ScalarField, ScalarField> derivatives1(const ScalarField& f, double sigma);

/// Second derivatives (fxx, fxy, fyy), same conventions as derivatives1.
std::array<ScalarField, 3> derivatives2(const ScalarField& f, double sigma);

/// Perona-Malik style edge-preserving diffusion: conduction
/// c = exp(-(|grad f|/kappa)^2), time step 0.2, 4-neighborhood fluxes with
/// interface conduction 0.5*(c_p + c_q). The conduction gradient is read off
/// a grad_sigma-smoothed copy (regularized form), which lets fine texture
/// melt while extended edges stay put.
ScalarField anisotropic_diffuse(const ScalarField& f, int iterations, double kappa,
                                double grad_sigma = 2.0);

/// 2x Catmull-Rom upsampling (output extent 2w x 2h, sample k maps to k/2).
ScalarField upsample2x(const ScalarField& f);

/// Min-max rescale to [0,1]; a constant field maps to all zeros.
ScalarField normalize01(const ScalarField& f);

/// Sampled 1D kernels used by the filters above; exposed for the test oracles.
std::vector<double> gaussian_kernel(double sigma);
std::vector<double> gaussian_deriv_kernel(double sigma);
std::vector<double> gaussian_deriv2_kernel(double sigma);

// Serial twins of the parallel kernels. Same arithmetic, no worker threads;
// kept for the parallel-vs-serial equivalence tests and the benchmark.
namespace serial {
ScalarField gaussian_smooth(const ScalarField& f, double sigma);
std::pair<ScalarField, ScalarField> derivatives1(const ScalarField& f, double sigma);
std::array<ScalarField, 3> derivatives2(const ScalarField& f, double sigma);
ScalarField anisotropic_diffuse(const ScalarField& f, int iterations, double kappa,
                                double grad_sigma = 2.0);
}  // namespace serial

}  // namespace curvireg

#endif
