#include "gpdp/kernels.hpp"

#include "gpdp/errors.hpp"

namespace gpdp::kernels {

const Ops& select(Kind kind) {
  switch (kind) {
    case Kind::kScalar:
      return scalar_ops();
    case Kind::kAvx2:
      if (!avx2_supported())
        throw invalid_input("kernel 'avx2' requested but this CPU does not support AVX2+FMA");
      return avx2_ops();
    case Kind::kAuto:
    default:
      return avx2_supported() ? avx2_ops() : scalar_ops();
  }
}

Kind parse_kind(const std::string& name) {
  if (name == "auto") return Kind::kAuto;
  if (name == "scalar") return Kind::kScalar;
  if (name == "avx2") return Kind::kAvx2;
  throw invalid_input("unknown kernel '" + name + "' (expected auto, scalar, or avx2)");
}

}  // namespace gpdp::kernels
