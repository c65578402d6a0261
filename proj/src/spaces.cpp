#include "opennet/spaces.hpp"

#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "opennet/sampling.hpp"

namespace opennet::spaces {

namespace {

constexpr int kSquareSamples = 100;
constexpr double kSquareTolerance = 1e-9;
constexpr double kSampleLo = -2.0;
constexpr double kSampleHi = 2.0;
constexpr int kMaxRedraws = 10;

void requireUniqueNames(const std::vector<std::string>& names,
                        const std::string& what) {
    std::unordered_set<std::string> seen;
    for (const std::string& n : names) {
        if (!seen.insert(n).second) {
            throw std::invalid_argument("duplicate " + what + ": \"" + n + "\"");
        }
    }
}

void requireVariablesDeclared(const std::vector<expr::Expr>& components,
                              const std::vector<std::string>& allowed,
                              const std::string& what) {
    std::set<std::string> used;
    for (const expr::Expr& component : components) {
        if (!component.valid()) {
            throw std::invalid_argument(what + " contains an empty expression");
        }
        component.collectVariables(used);
    }
    const std::unordered_set<std::string> declared(allowed.begin(), allowed.end());
    for (const std::string& name : used) {
        if (!declared.contains(name)) {
            throw std::invalid_argument(what + " uses undeclared coordinate \"" +
                                        name + "\"");
        }
    }
}

}  // namespace

Space::Space(std::string name, std::vector<std::string> coordinates)
    : name_(std::move(name)), coordinates_(std::move(coordinates)) {
    requireUniqueNames(coordinates_, "coordinate in space \"" + name_ + "\"");
}

Submersion::Submersion(std::vector<Space> stateFactors,
                       std::vector<Space> inputFactors)
    : stateFactors_(std::move(stateFactors)), inputFactors_(std::move(inputFactors)) {
    for (const Space& factor : stateFactors_) {
        stateCoordinates_.insert(stateCoordinates_.end(),
                                 factor.coordinates().begin(),
                                 factor.coordinates().end());
    }
    totalCoordinates_ = stateCoordinates_;
    for (const Space& factor : inputFactors_) {
        totalCoordinates_.insert(totalCoordinates_.end(),
                                 factor.coordinates().begin(),
                                 factor.coordinates().end());
    }
    requireUniqueNames(totalCoordinates_, "coordinate in submersion");
}

std::vector<std::string> Submersion::inputCoordinates() const {
    return {totalCoordinates_.begin() + stateDim(), totalCoordinates_.end()};
}

SubmersionMap::SubmersionMap(Submersion source, Submersion target,
                             std::vector<expr::Expr> totalComponents,
                             std::vector<expr::Expr> stateComponents)
    : source_(std::move(source)),
      target_(std::move(target)),
      totalComponents_(std::move(totalComponents)),
      stateComponents_(std::move(stateComponents)) {
    if (static_cast<int>(totalComponents_.size()) != target_.totalDim()) {
        std::ostringstream os;
        os << "total map has " << totalComponents_.size()
           << " components but the target total dimension is " << target_.totalDim();
        throw std::invalid_argument(os.str());
    }
    if (static_cast<int>(stateComponents_.size()) != target_.stateDim()) {
        std::ostringstream os;
        os << "state map has " << stateComponents_.size()
           << " components but the target state dimension is " << target_.stateDim();
        throw std::invalid_argument(os.str());
    }
    requireVariablesDeclared(totalComponents_, source_.totalCoordinates(),
                             "total map");
    requireVariablesDeclared(stateComponents_, source_.stateCoordinates(),
                             "state map");

    // Commuting square: state components of the total map must agree with
    // the state map applied to the state part of the point.
    const expr::VarTable totalTable(source_.totalCoordinates());
    const expr::VarTable stateTable(source_.stateCoordinates());
    SampleRng rng(kConstructionSeed);
    const std::size_t stateDim = static_cast<std::size_t>(source_.stateDim());
    for (int sample = 0; sample < kSquareSamples; ++sample) {
        for (int attempt = 0;; ++attempt) {
            const std::vector<double> point =
                rng.boxPoint(source_.totalDim(), kSampleLo, kSampleHi);
            const std::span<const double> statePart(point.data(), stateDim);
            try {
                for (int i = 0; i < target_.stateDim(); ++i) {
                    const double viaTotal =
                        totalComponents_[static_cast<std::size_t>(i)].eval(totalTable,
                                                                           point);
                    const double viaState =
                        stateComponents_[static_cast<std::size_t>(i)].eval(stateTable,
                                                                           statePart);
                    if (!(std::abs(viaTotal - viaState) <= kSquareTolerance)) {
                        std::ostringstream os;
                        os << "commuting square fails in state component " << i
                           << ": total-map route " << viaTotal
                           << " vs state-map route " << viaState;
                        throw std::invalid_argument(os.str());
                    }
                }
            } catch (const expr::EvalError&) {
                if (attempt >= kMaxRedraws) {
                    throw std::invalid_argument(
                        "commuting-square check hit evaluation errors at every "
                        "redraw of a sample point");
                }
                continue;  // redraw the point
            }
            break;
        }
    }
}

std::vector<double> SubmersionMap::applyTotal(std::span<const double> point) const {
    const expr::VarTable table(source_.totalCoordinates());
    std::vector<double> out;
    out.reserve(totalComponents_.size());
    for (const expr::Expr& component : totalComponents_) {
        out.push_back(component.eval(table, point));
    }
    return out;
}

std::vector<double> SubmersionMap::applyState(
    std::span<const double> statePoint) const {
    const expr::VarTable table(source_.stateCoordinates());
    std::vector<double> out;
    out.reserve(stateComponents_.size());
    for (const expr::Expr& component : stateComponents_) {
        out.push_back(component.eval(table, statePoint));
    }
    return out;
}

SubmersionMap SubmersionMap::identity(const Submersion& on) {
    std::vector<expr::Expr> total;
    total.reserve(static_cast<std::size_t>(on.totalDim()));
    for (const std::string& coord : on.totalCoordinates()) {
        total.push_back(expr::Expr::variable(coord));
    }
    std::vector<expr::Expr> state;
    state.reserve(static_cast<std::size_t>(on.stateDim()));
    for (const std::string& coord : on.stateCoordinates()) {
        state.push_back(expr::Expr::variable(coord));
    }
    return SubmersionMap(on, on, std::move(total), std::move(state));
}

Interconnection::Interconnection(SubmersionMap map) : map_(std::move(map)) {
    const Submersion& src = map_.source();
    const Submersion& dst = map_.target();
    if (src.stateDim() != dst.stateDim()) {
        std::ostringstream os;
        os << "interconnection state dimensions differ: source " << src.stateDim()
           << ", target " << dst.stateDim();
        throw std::invalid_argument(os.str());
    }
    auto requireStateReference = [&](const expr::Expr& component, int index,
                                     const char* where) {
        const std::string& expected =
            src.stateCoordinates()[static_cast<std::size_t>(index)];
        if (!component.isVariable() || component.variableName() != expected) {
            std::ostringstream os;
            os << "interconnection " << where << " component " << index
               << " must be the literal coordinate \"" << expected << "\", got \""
               << component.str() << "\"";
            throw std::invalid_argument(os.str());
        }
    };
    for (int i = 0; i < src.stateDim(); ++i) {
        requireStateReference(map_.stateComponents()[static_cast<std::size_t>(i)],
                              i, "state-map");
        requireStateReference(map_.totalComponents()[static_cast<std::size_t>(i)],
                              i, "total-map state");
    }
}

Interconnection Interconnection::identity(const Submersion& on) {
    return Interconnection(SubmersionMap::identity(on));
}

Submersion productSubmersion(const std::vector<Submersion>& factors) {
    if (factors.empty()) {
        throw std::invalid_argument("product of an empty submersion list");
    }
    auto prefixed = [](const Space& space, const std::string& prefix) {
        std::vector<std::string> coords;
        coords.reserve(space.coordinates().size());
        for (const std::string& c : space.coordinates()) coords.push_back(prefix + c);
        return Space(prefix + space.name(), std::move(coords));
    };
    std::vector<Space> stateFactors;
    std::vector<Space> inputFactors;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const std::string prefix = "n" + std::to_string(i) + ".";
        for (const Space& s : factors[i].stateFactors()) {
            stateFactors.push_back(prefixed(s, prefix));
        }
        for (const Space& s : factors[i].inputFactors()) {
            inputFactors.push_back(prefixed(s, prefix));
        }
    }
    return Submersion(std::move(stateFactors), std::move(inputFactors));
}

SubmersionMap composeMaps(const SubmersionMap& outer, const SubmersionMap& inner) {
    if (!(inner.target() == outer.source())) {
        throw std::invalid_argument(
            "map composition requires the inner target and outer source to be "
            "the same submersion");
    }
    std::map<std::string, expr::Expr> totalBindings;
    const std::vector<std::string>& totalNames = outer.source().totalCoordinates();
    for (std::size_t i = 0; i < totalNames.size(); ++i) {
        totalBindings.emplace(totalNames[i], inner.totalComponents()[i]);
    }
    std::map<std::string, expr::Expr> stateBindings;
    const std::vector<std::string>& stateNames = outer.source().stateCoordinates();
    for (std::size_t i = 0; i < stateNames.size(); ++i) {
        stateBindings.emplace(stateNames[i], inner.stateComponents()[i]);
    }
    std::vector<expr::Expr> total;
    total.reserve(outer.totalComponents().size());
    for (const expr::Expr& component : outer.totalComponents()) {
        total.push_back(component.substitute(totalBindings));
    }
    std::vector<expr::Expr> state;
    state.reserve(outer.stateComponents().size());
    for (const expr::Expr& component : outer.stateComponents()) {
        state.push_back(component.substitute(stateBindings));
    }
    return SubmersionMap(inner.source(), outer.target(), std::move(total),
                         std::move(state));
}

}  // namespace opennet::spaces
