#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace gpdp::kernels {

enum class Kind { kAuto, kScalar, kAvx2 };

// Hot inner loops of the integrator, provided in a scalar reference form and
// a vectorized form selected at runtime. Every operation is elementwise and
// both variants apply the same per-element rounding sequence (axpy is a fused
// multiply-add in each), so the variants produce bit-identical results.
struct Ops {
  const char* name;

  // out[i] = clamp(lambda * (b - coords[i]), 0, 1)
  void (*ramp_profile)(const double* coords, std::size_t n, double lambda, double b,
                       double* out);

  // out[i] = factor * in[i]
  void (*scale)(const double* in, std::size_t n, double factor, double* out);

  // out[i] = fma(w, in[i], out[i])
  void (*axpy)(const double* in, std::size_t n, double w, double* out);
};

const Ops& scalar_ops();
const Ops& avx2_ops();

bool avx2_supported();

// Resolves kAuto to the best supported variant; throws invalid_input when a
// forced variant is not supported by this CPU.
const Ops& select(Kind kind);

Kind parse_kind(const std::string& name);  // "auto" | "scalar" | "avx2"

}  // namespace gpdp::kernels
