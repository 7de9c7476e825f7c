#pragma once

#include "cloak/simd/kernels.hpp"

namespace cloak::simd::detail {

const KernelTable& avx2_table();
bool cpu_has_avx2_fma();

}  // namespace cloak::simd::detail
