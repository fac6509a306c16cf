#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "wsi/kernels.hpp"

namespace k = wsi::kernels;

namespace {

std::vector<double> random_doubles(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

std::vector<float> random_floats(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<float> u(-3.0f, 3.0f);
    std::vector<float> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

// Reductions may reassociate; allow a few ulps of the sum of magnitudes.
void expect_close(double a, double b, double magnitude) {
    EXPECT_LE(std::abs(a - b), 1e-13 * (magnitude + 1.0)) << a << " vs " << b;
}

bool bits_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST(Kernels, ScalarReferenceMatchesDefinition) {
    const std::vector<double> a{1, 2, 3};
    const std::vector<double> b{4, -5, 6};
    const std::vector<float> f{3, 4};
    EXPECT_EQ(k::scalar::dot(a.data(), b.data(), 3), 12.0);
    EXPECT_EQ(k::scalar::squared_l2(a.data(), b.data(), 3), 9.0 + 49.0 + 9.0);
    EXPECT_EQ(k::scalar::l1(a.data(), b.data(), 3), 3.0 + 7.0 + 3.0);
    EXPECT_EQ(k::scalar::sum_squares(f.data(), 2), 25.0);
    std::vector<double> y{1, 1};
    k::scalar::axpy(2.0, f.data(), y.data(), 2);
    EXPECT_EQ(y, (std::vector<double>{7, 9}));
    k::scalar::scale(0.5, y.data(), 2);
    EXPECT_EQ(y, (std::vector<double>{3.5, 4.5}));
}

TEST(Kernels, ScalarIsAlwaysAvailable) { EXPECT_TRUE(k::isa_available(k::Isa::scalar)); }

TEST(Kernels, PinningDispatchesToTheChosenVariant) {
    const auto before = k::active_isa();
    ASSERT_TRUE(k::set_active_isa(k::Isa::scalar));
    EXPECT_EQ(k::active_isa(), k::Isa::scalar);
    std::mt19937_64 rng(1);
    const auto a = random_doubles(rng, 37);
    const auto b = random_doubles(rng, 37);
    EXPECT_EQ(k::dot(a, b), k::scalar::dot(a.data(), b.data(), a.size()));
    k::set_active_isa(before);
}

#if defined(WSI_HAVE_AVX2)
TEST(Kernels, Avx2MatchesScalarAcrossLengths) {
    if (!k::isa_available(k::Isa::avx2)) GTEST_SKIP() << "CPU lacks AVX2";
    std::mt19937_64 rng(42);
    for (std::size_t n = 0; n <= 131; ++n) {
        for (int rep = 0; rep < 4; ++rep) {
            const auto a = random_doubles(rng, n);
            const auto b = random_doubles(rng, n);
            const auto f = random_floats(rng, n);
            double mag_ab = 0.0, mag_sq = 0.0, mag_l1 = 0.0, mag_f = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                mag_ab += std::abs(a[i] * b[i]);
                mag_sq += (a[i] - b[i]) * (a[i] - b[i]);
                mag_l1 += std::abs(a[i] - b[i]);
                mag_f += static_cast<double>(f[i]) * f[i];
            }
            expect_close(k::avx2::dot(a.data(), b.data(), n), k::scalar::dot(a.data(), b.data(), n), mag_ab);
            expect_close(k::avx2::squared_l2(a.data(), b.data(), n), k::scalar::squared_l2(a.data(), b.data(), n),
                         mag_sq);
            expect_close(k::avx2::l1(a.data(), b.data(), n), k::scalar::l1(a.data(), b.data(), n), mag_l1);
            expect_close(k::avx2::sum_squares(f.data(), n), k::scalar::sum_squares(f.data(), n), mag_f);

            auto y1 = a;
            auto y2 = a;
            k::scalar::axpy(0.37, f.data(), y1.data(), n);
            k::avx2::axpy(0.37, f.data(), y2.data(), n);
            EXPECT_TRUE(bits_equal(y1, y2)) << "axpy n=" << n;
            k::scalar::scale(-1.3, y1.data(), n);
            k::avx2::scale(-1.3, y2.data(), n);
            EXPECT_TRUE(bits_equal(y1, y2)) << "scale n=" << n;
        }
    }
}

TEST(Kernels, Avx2HandlesUnalignedSubspans) {
    if (!k::isa_available(k::Isa::avx2)) GTEST_SKIP() << "CPU lacks AVX2";
    std::mt19937_64 rng(3);
    const auto a = random_doubles(rng, 64);
    const auto b = random_doubles(rng, 64);
    for (std::size_t off = 0; off < 4; ++off) {
        const std::size_t n = 64 - off;
        expect_close(k::avx2::squared_l2(a.data() + off, b.data() + off, n),
                     k::scalar::squared_l2(a.data() + off, b.data() + off, n), 1000.0);
    }
}
#endif
