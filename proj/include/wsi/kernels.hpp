#pragma once

// Vector arithmetic used in the hot loops (context averaging, pairwise
// distances, affinity similarities). Each routine has a portable scalar
// reference and, on x86-64, an AVX2 variant. The variant is picked once at
// first use from CPUID and can be pinned for testing.
//
// axpy is elementwise and bit-identical across variants. The reductions
// (dot, squared_l2, l1, sum_squares) reassociate the sum in the AVX2 path,
// so results may differ from the scalar path in the last few ulps.

#include <cstddef>
#include <span>
#include <string_view>

namespace wsi::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

// True if the running CPU and this build both support `isa`.
bool isa_available(Isa isa);

// The variant currently used by the dispatching entry points below.
Isa active_isa();

// Pins dispatch to `isa`; returns false (and changes nothing) if unavailable.
bool set_active_isa(Isa isa);

double dot(std::span<const double> a, std::span<const double> b);
double squared_l2(std::span<const double> a, std::span<const double> b);
double l1(std::span<const double> a, std::span<const double> b);
double sum_squares(std::span<const float> x);

// y += alpha * x, with x widened from float.
void axpy(double alpha, std::span<const float> x, std::span<double> y);

// y *= alpha
void scale(double alpha, std::span<double> y);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double squared_l2(const double* a, const double* b, std::size_t n);
double l1(const double* a, const double* b, std::size_t n);
double sum_squares(const float* x, std::size_t n);
void axpy(double alpha, const float* x, double* y, std::size_t n);
void scale(double alpha, double* y, std::size_t n);
}  // namespace scalar

#if defined(WSI_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double squared_l2(const double* a, const double* b, std::size_t n);
double l1(const double* a, const double* b, std::size_t n);
double sum_squares(const float* x, std::size_t n);
void axpy(double alpha, const float* x, double* y, std::size_t n);
void scale(double alpha, double* y, std::size_t n);
}  // namespace avx2
#endif

}  // namespace wsi::kernels
