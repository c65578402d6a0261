#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace opennet {

// Deterministic uniform sampler. The mapping from engine output to doubles
// is spelled out explicitly (rather than delegated to std::uniform_real_
// distribution, whose algorithm is implementation-defined) so that runs are
// reproducible across standard libraries.
class SampleRng {
public:
    explicit SampleRng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) {
        const double unit =
            static_cast<double>(engine_() >> 11) * 0x1.0p-53;  // [0,1)
        return lo + (hi - lo) * unit;
    }

    std::vector<double> boxPoint(int dim, double lo, double hi) {
        std::vector<double> point(static_cast<std::size_t>(dim));
        for (double& x : point) x = uniform(lo, hi);
        return point;
    }

private:
    std::mt19937_64 engine_;
};

// Seed used by construction-time invariant checks (commuting squares and
// network 2-cells); command-level checks take the run seed instead.
inline constexpr std::uint64_t kConstructionSeed = 0x6F70656E6E6574ULL;

}  // namespace opennet
