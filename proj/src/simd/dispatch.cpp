#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace cloak::simd {
namespace detail {

bool cpu_has_avx2_fma() {
#if defined(CLOAK_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

}  // namespace detail

namespace {

const KernelTable* select_initial() {
  const char* env = std::getenv("CLOAK_SIMD");
  if (env != nullptr && std::string(env) == "scalar") return &scalar_kernels();
  if (const KernelTable* t = avx2_kernels()) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{select_initial()};
  return table;
}

}  // namespace

const KernelTable* avx2_kernels() {
#if defined(CLOAK_HAVE_AVX2)
  static const bool ok = detail::cpu_has_avx2_fma();
  return ok ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void force_backend(Backend b) {
  const KernelTable* t = b == Backend::scalar ? &scalar_kernels() : avx2_kernels();
  if (t == nullptr) throw std::runtime_error("SIMD backend unavailable: " + std::string(backend_name(b)));
  current().store(t, std::memory_order_release);
}

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
  }
  return "unknown";
}

}  // namespace cloak::simd
