#include "wsi/kernels.hpp"

#include <atomic>
#include <cassert>

namespace wsi::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(WSI_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

std::atomic<Isa>& active() {
    static std::atomic<Isa> isa{cpu_has_avx2() ? Isa::avx2 : Isa::scalar};
    return isa;
}

bool use_avx2() {
#if defined(WSI_HAVE_AVX2)
    return active().load(std::memory_order_relaxed) == Isa::avx2;
#else
    return false;
#endif
}

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "unknown";
}

bool isa_available(Isa isa) {
    return isa == Isa::scalar || (isa == Isa::avx2 && cpu_has_avx2());
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

bool set_active_isa(Isa isa) {
    if (!isa_available(isa)) return false;
    active().store(isa, std::memory_order_relaxed);
    return true;
}

#if defined(WSI_HAVE_AVX2)
#define WSI_DISPATCH(fn, ...) (use_avx2() ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define WSI_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    return WSI_DISPATCH(dot, a.data(), b.data(), a.size());
}

double squared_l2(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    return WSI_DISPATCH(squared_l2, a.data(), b.data(), a.size());
}

double l1(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    return WSI_DISPATCH(l1, a.data(), b.data(), a.size());
}

double sum_squares(std::span<const float> x) {
    return WSI_DISPATCH(sum_squares, x.data(), x.size());
}

void axpy(double alpha, std::span<const float> x, std::span<double> y) {
    assert(x.size() == y.size());
    WSI_DISPATCH(axpy, alpha, x.data(), y.data(), x.size());
}

void scale(double alpha, std::span<double> y) {
    WSI_DISPATCH(scale, alpha, y.data(), y.size());
}

#undef WSI_DISPATCH

}  // namespace wsi::kernels
