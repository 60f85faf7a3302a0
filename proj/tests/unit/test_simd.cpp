#include <gtest/gtest.h>

#include <cstring>
#include <limits>
#include <vector>

#include "cloiseg/random.hpp"
#include "cloiseg/simd/kernels.hpp"

using namespace cloiseg;
using namespace cloiseg::simd;

namespace {

struct Soa {
  std::vector<double> x, y, z;
  CoordsView view() const { return {x.data(), y.data(), z.data(), x.size()}; }
};

Soa random_soa(std::uint64_t seed, std::size_t n, bool gridded) {
  CounterRng rng(seed);
  Soa s;
  for (std::size_t i = 0; i < n; ++i) {
    if (gridded) {
      // Small integer coordinates produce many exact ties and knife edges.
      s.x.push_back(static_cast<double>(rng.below(5)));
      s.y.push_back(static_cast<double>(rng.below(5)));
      s.z.push_back(static_cast<double>(rng.below(5)));
    } else {
      s.x.push_back(rng.uniform(-1, 1));
      s.y.push_back(rng.uniform(-1, 1));
      s.z.push_back(rng.uniform(-1, 1));
    }
  }
  return s;
}

std::vector<const KernelTable*> variants() {
  std::vector<const KernelTable*> v{&scalar_kernels()};
  if (const auto* avx = avx2_kernels()) v.push_back(avx);
  return v;
}

}  // namespace

TEST(SimdKernels, ScalarRadiusSelectMatchesDefinition) {
  const auto s = random_soa(1, 100, false);
  const Point3 q{0.1, -0.2, 0.3};
  std::vector<std::uint32_t> out(s.x.size());
  const auto n = scalar_kernels().radius_select(s.view(), q, 0.5, out.data());
  std::vector<std::uint32_t> expect;
  for (std::uint32_t k = 0; k < s.x.size(); ++k) {
    const double dx = s.x[k] - q.x, dy = s.y[k] - q.y, dz = s.z[k] - q.z;
    if ((dx * dx + dy * dy) + dz * dz <= 0.5) expect.push_back(k);
  }
  out.resize(n);
  EXPECT_EQ(out, expect);
}

TEST(SimdKernels, RadiusSelectVariantsAgree) {
  for (bool gridded : {false, true}) {
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 32u, 33u, 257u}) {
      const auto s = random_soa(n * 3 + gridded, n, gridded);
      CounterRng rng(n);
      for (int probe = 0; probe < 20; ++probe) {
        const Point3 q = gridded ? Point3{2, 2, 2}
                                 : Point3{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const double r2 = gridded ? static_cast<double>(probe % 6) : rng.uniform(0.0, 1.5);
        std::vector<std::uint32_t> ref(n + 1), got(n + 1);
        const auto nr = scalar_kernels().radius_select(s.view(), q, r2, ref.data());
        for (const auto* k : variants()) {
          const auto ng = k->radius_select(s.view(), q, r2, got.data());
          ASSERT_EQ(ng, nr) << k->name << " n=" << n;
          for (std::size_t i = 0; i < nr; ++i) ASSERT_EQ(got[i], ref[i]) << k->name;
        }
      }
    }
  }
}

TEST(SimdKernels, FarthestUpdateVariantsAgreeBitwise) {
  for (bool gridded : {false, true}) {
    for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 6u, 7u, 8u, 9u, 63u, 64u, 65u, 1000u}) {
      const auto s = random_soa(n * 7 + gridded, n, gridded);
      std::vector<double> ref(n, std::numeric_limits<double>::infinity());
      std::vector<std::vector<double>> got;
      for (std::size_t v = 0; v < variants().size(); ++v) got.push_back(ref);
      for (std::size_t step = 0; step < 10 && step < n; ++step) {
        const Point3 q{s.x[step], s.y[step], s.z[step]};
        const auto ar = scalar_kernels().farthest_update(s.view(), q, ref.data());
        for (std::size_t v = 0; v < variants().size(); ++v) {
          const auto ag = variants()[v]->farthest_update(s.view(), q, got[v].data());
          ASSERT_EQ(ag, ar) << variants()[v]->name << " n=" << n;
          ASSERT_EQ(0, std::memcmp(got[v].data(), ref.data(), n * sizeof(double)));
        }
      }
    }
  }
}

TEST(SimdKernels, FarthestUpdatePicksLowestIndexOnTies) {
  const Soa s{{1, -1, 1, -1, 1}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}};
  for (const auto* k : variants()) {
    std::vector<double> d(5, std::numeric_limits<double>::infinity());
    EXPECT_EQ(k->farthest_update(s.view(), {0, 0, 0}, d.data()), 0u) << k->name;
  }
}

TEST(SimdKernels, ParseAndOverrideLevel) {
  EXPECT_EQ(parse_level("scalar"), SimdLevel::scalar);
  EXPECT_EQ(parse_level("avx2"), SimdLevel::avx2);
  EXPECT_FALSE(parse_level("sse9").has_value());
  const auto before = active_kernels().level;
  set_active_level(SimdLevel::scalar);
  EXPECT_EQ(active_kernels().level, SimdLevel::scalar);
  set_active_level(before);
  EXPECT_EQ(active_kernels().level, before);
}
