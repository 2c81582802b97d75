#include <atomic>

#include "qclock/errors.hpp"
#include "qclock/simd/kernels.hpp"

namespace qclock::simd {

namespace {

Isa probe() {
#if defined(QCLOCK_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
        return Isa::avx2;
    }
#endif
    return Isa::scalar;
}

std::atomic<Isa>& active() {
    static std::atomic<Isa> isa{detected_isa()};
    return isa;
}

} // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
    case Isa::scalar:
        return "scalar";
    case Isa::avx2:
        return "avx2";
    }
    return "unknown";
}

Isa detected_isa() {
    static const Isa isa = probe();
    return isa;
}

Isa active_isa() {
    return active().load(std::memory_order_relaxed);
}

void force_isa(Isa isa) {
    if (isa == Isa::avx2 && detected_isa() != Isa::avx2) {
        throw DomainError("AVX2 kernels are not available on this machine or build");
    }
    active().store(isa, std::memory_order_relaxed);
}

void exit_current(const ExitCurrentParams& p, std::span<const double> t, std::span<double> jx,
                  std::span<double> jz, std::span<double> modulus) {
#if defined(QCLOCK_HAVE_AVX2)
    if (active_isa() == Isa::avx2) {
        avx2::exit_current(p, t, jx, jz, modulus);
        return;
    }
#endif
    scalar::exit_current(p, t, jx, jz, modulus);
}

void cos_sin(std::span<const double> x, std::span<double> c, std::span<double> s) {
#if defined(QCLOCK_HAVE_AVX2)
    if (active_isa() == Isa::avx2) {
        avx2::cos_sin(x, c, s);
        return;
    }
#endif
    scalar::cos_sin(x, c, s);
}

} // namespace qclock::simd
