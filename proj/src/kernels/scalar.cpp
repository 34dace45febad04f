#include "gpdp/kernels.hpp"

#include <cmath>

namespace gpdp::kernels {
namespace {

void ramp_profile_scalar(const double* coords, std::size_t n, double lambda, double b,
                         double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double u = lambda * (b - coords[i]);
    out[i] = u >= 1.0 ? 1.0 : (u <= 0.0 ? 0.0 : u);
  }
}

void scale_scalar(const double* in, std::size_t n, double factor, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = factor * in[i];
}

void axpy_scalar(const double* in, std::size_t n, double w, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::fma(w, in[i], out[i]);
}

constexpr Ops kScalarOps{"scalar", ramp_profile_scalar, scale_scalar, axpy_scalar};

}  // namespace

const Ops& scalar_ops() { return kScalarOps; }

}  // namespace gpdp::kernels
