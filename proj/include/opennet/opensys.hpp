#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "opennet/expr.hpp"
#include "opennet/spaces.hpp"

namespace opennet::opensys {

// Open system on a submersion: one velocity expression per state
// coordinate, each over the full (state + input) coordinate list.
class OpenSystem {
public:
    OpenSystem(spaces::Submersion on, std::vector<expr::Expr> field);

    const spaces::Submersion& on() const { return on_; }
    const std::vector<expr::Expr>& field() const { return field_; }

    // State velocity at a total-space point.
    std::vector<double> evalField(std::span<const double> point) const;

    bool isClosed() const { return on_.inputDim() == 0; }

private:
    spaces::Submersion on_;
    std::vector<expr::Expr> field_;
};

// Outcome of a sampled relatedness check. `samples` counts the points that
// actually evaluated; points abandoned after repeated evaluation errors are
// counted in `skipped` and reported, never silently dropped.
struct RelatednessReport {
    double maxResidual = 0.0;
    int samples = 0;
    int skipped = 0;
    bool verdict = false;
    std::vector<double> worstPoint;
    int worstComponent = -1;  // family checks: index of the worst component
};

inline constexpr int kDefaultRelatednessSamples = 200;
inline constexpr double kDefaultRelatednessTolerance = 1e-9;

// Substitutes the wiring into the system: the pullback along an
// interconnection is the field composed with the total map, living on the
// interconnection's source.
OpenSystem pullback(const spaces::Interconnection& wiring, const OpenSystem& system);

// System on the product submersion whose state block a is the a-th input
// system applied to the a-th coordinate block; exact by construction.
OpenSystem productSystems(const std::vector<OpenSystem>& systems);

// Samples the residual  Jac(stateMap)(p(q)) * F(q) - G(map_total(q))  over
// the source box [-2,2]^d; the verdict is true iff the max-norm stays within
// `tolerance` and no requested point was lost to evaluation errors.
RelatednessReport checkRelated(const spaces::SubmersionMap& map,
                               const OpenSystem& sourceSystem,
                               const OpenSystem& targetSystem,
                               int samples = kDefaultRelatednessSamples,
                               double tolerance = kDefaultRelatednessTolerance,
                               std::uint64_t seed = 0);

// Componentwise relatedness of an indexed family: for every index x the
// systems over the image index and over x must be related along the x-th
// component map. Aggregates the per-component reports.
RelatednessReport checkPhiRelatedFamily(
    const std::vector<int>& indexMap,
    const std::vector<spaces::SubmersionMap>& componentMaps,
    const std::vector<OpenSystem>& sourceSystems,
    const std::vector<OpenSystem>& targetSystems,
    int samples = kDefaultRelatednessSamples,
    double tolerance = kDefaultRelatednessTolerance, std::uint64_t seed = 0);

}  // namespace opennet::opensys
