#pragma once

#include <span>
#include <string>
#include <vector>

#include "opennet/expr.hpp"

namespace opennet::spaces {

// Euclidean coordinate space: a name plus an ordered list of distinct
// coordinate names. The dimension is the number of coordinates.
class Space {
public:
    Space() = default;
    Space(std::string name, std::vector<std::string> coordinates);

    const std::string& name() const { return name_; }
    int dim() const { return static_cast<int>(coordinates_.size()); }
    const std::vector<std::string>& coordinates() const { return coordinates_; }

    friend bool operator==(const Space&, const Space&) = default;

private:
    std::string name_;
    std::vector<std::string> coordinates_;
};

// Trivial product submersion: (state factors) x (input factors) -> (state
// factors), i.e. the projection that drops the input coordinates. The total
// coordinate order is all state coordinates (in factor order) followed by
// all input coordinates.
class Submersion {
public:
    Submersion() = default;  // zero-dimensional
    Submersion(std::vector<Space> stateFactors, std::vector<Space> inputFactors);

    const std::vector<Space>& stateFactors() const { return stateFactors_; }
    const std::vector<Space>& inputFactors() const { return inputFactors_; }

    int stateDim() const { return static_cast<int>(stateCoordinates_.size()); }
    int inputDim() const {
        return static_cast<int>(totalCoordinates_.size() - stateCoordinates_.size());
    }
    int totalDim() const { return static_cast<int>(totalCoordinates_.size()); }

    const std::vector<std::string>& stateCoordinates() const { return stateCoordinates_; }
    const std::vector<std::string>& totalCoordinates() const { return totalCoordinates_; }
    std::vector<std::string> inputCoordinates() const;

    friend bool operator==(const Submersion&, const Submersion&) = default;

private:
    std::vector<Space> stateFactors_;
    std::vector<Space> inputFactors_;
    std::vector<std::string> stateCoordinates_;  // cached concatenation
    std::vector<std::string> totalCoordinates_;  // cached concatenation
};

// Map of submersions: expression vectors for the total-space map and the
// state-space map it covers. Construction verifies the commuting square
// (state components of the total map agree with the state map after
// projection) numerically at 100 seeded sample points, tolerance 1e-9.
class SubmersionMap {
public:
    SubmersionMap(Submersion source, Submersion target,
                  std::vector<expr::Expr> totalComponents,
                  std::vector<expr::Expr> stateComponents);

    const Submersion& source() const { return source_; }
    const Submersion& target() const { return target_; }
    const std::vector<expr::Expr>& totalComponents() const { return totalComponents_; }
    const std::vector<expr::Expr>& stateComponents() const { return stateComponents_; }

    // Evaluates the total map at a source total-space point.
    std::vector<double> applyTotal(std::span<const double> point) const;
    // Evaluates the state map at a source state-space point.
    std::vector<double> applyState(std::span<const double> statePoint) const;

    static SubmersionMap identity(const Submersion& on);

private:
    Submersion source_;
    Submersion target_;
    std::vector<expr::Expr> totalComponents_;
    std::vector<expr::Expr> stateComponents_;
};

// Submersion map whose state map is the identity: every state component, of
// both the state map and the total map, is a literal reference to the
// matching source state coordinate. The checks are syntactic, which makes
// the commuting square exact. Input components remain arbitrary; they are
// the wiring.
class Interconnection {
public:
    explicit Interconnection(SubmersionMap map);

    const SubmersionMap& map() const { return map_; }
    const Submersion& source() const { return map_.source(); }
    const Submersion& target() const { return map_.target(); }

    static Interconnection identity(const Submersion& on);

private:
    SubmersionMap map_;
};

// Product of submersions: state factors concatenate, then input factors
// concatenate, with every coordinate (and factor name) prefixed by
// "n{index}." so blocks stay collision-free and addressable.
Submersion productSubmersion(const std::vector<Submersion>& factors);

// Composition outer . inner by symbolic substitution; requires the target
// of `inner` to equal the source of `outer`. The commuting square of the
// result is re-verified by the constructor.
SubmersionMap composeMaps(const SubmersionMap& outer, const SubmersionMap& inner);

}  // namespace opennet::spaces
