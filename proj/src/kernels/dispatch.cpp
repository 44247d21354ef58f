#include <atomic>
#include <cstdlib>
#include <string_view>

#include "imf/kernels/kernels.hpp"

namespace imf::kernels {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(IMF_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* initial_table() noexcept {
  Isa isa = available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
  if (const char* env = std::getenv("IMF_SIMD")) {
    const std::string_view v(env);
    if (v == "scalar") isa = Isa::scalar;
    if (v == "avx2" && available(Isa::avx2)) isa = Isa::avx2;
  }
  return &table(isa);
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> ptr{initial_table()};
  return ptr;
}

}  // namespace

bool available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2: {
      static const bool has = cpu_has_avx2();
      return has;
    }
  }
  return false;
}

const KernelTable& table(Isa isa) noexcept {
#if defined(IMF_HAVE_AVX2)
  if (isa == Isa::avx2 && available(Isa::avx2)) return detail::kAvx2Table;
#else
  (void)isa;
#endif
  return detail::kScalarTable;
}

const KernelTable& active() noexcept { return *current().load(std::memory_order_acquire); }

void select(Isa isa) noexcept { current().store(&table(isa), std::memory_order_release); }

}  // namespace imf::kernels
