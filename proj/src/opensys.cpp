#include "opennet/opensys.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "opennet/sampling.hpp"

namespace opennet::opensys {

namespace {

constexpr double kSampleLo = -2.0;
constexpr double kSampleHi = 2.0;
constexpr int kMaxRedraws = 10;

}  // namespace

OpenSystem::OpenSystem(spaces::Submersion on, std::vector<expr::Expr> field)
    : on_(std::move(on)), field_(std::move(field)) {
    if (static_cast<int>(field_.size()) != on_.stateDim()) {
        std::ostringstream os;
        os << "field has " << field_.size() << " components but the state dimension is "
           << on_.stateDim();
        throw std::invalid_argument(os.str());
    }
    std::set<std::string> used;
    for (const expr::Expr& component : field_) {
        if (!component.valid()) {
            throw std::invalid_argument("field contains an empty expression");
        }
        component.collectVariables(used);
    }
    const std::vector<std::string>& declared = on_.totalCoordinates();
    for (const std::string& name : used) {
        if (std::find(declared.begin(), declared.end(), name) == declared.end()) {
            throw std::invalid_argument("field uses undeclared coordinate \"" + name +
                                        "\"");
        }
    }
}

std::vector<double> OpenSystem::evalField(std::span<const double> point) const {
    const expr::VarTable table(on_.totalCoordinates());
    std::vector<double> out;
    out.reserve(field_.size());
    for (const expr::Expr& component : field_) {
        out.push_back(component.eval(table, point));
    }
    return out;
}

OpenSystem pullback(const spaces::Interconnection& wiring,
                    const OpenSystem& system) {
    if (!(system.on() == wiring.target())) {
        throw std::invalid_argument(
            "pullback requires the system to live on the wiring's target");
    }
    std::map<std::string, expr::Expr> bindings;
    const std::vector<std::string>& names = wiring.target().totalCoordinates();
    for (std::size_t i = 0; i < names.size(); ++i) {
        bindings.emplace(names[i], wiring.map().totalComponents()[i]);
    }
    std::vector<expr::Expr> field;
    field.reserve(system.field().size());
    for (const expr::Expr& component : system.field()) {
        field.push_back(component.substitute(bindings));
    }
    return OpenSystem(wiring.source(), std::move(field));
}

OpenSystem productSystems(const std::vector<OpenSystem>& systems) {
    if (systems.empty()) {
        throw std::invalid_argument("product of an empty system list");
    }
    std::vector<spaces::Submersion> factors;
    factors.reserve(systems.size());
    for (const OpenSystem& s : systems) factors.push_back(s.on());
    spaces::Submersion product = spaces::productSubmersion(factors);

    std::vector<expr::Expr> field;
    field.reserve(static_cast<std::size_t>(product.stateDim()));
    for (std::size_t i = 0; i < systems.size(); ++i) {
        const std::string prefix = "n" + std::to_string(i) + ".";
        std::map<std::string, expr::Expr> rename;
        for (const std::string& name : systems[i].on().totalCoordinates()) {
            rename.emplace(name, expr::Expr::variable(prefix + name));
        }
        for (const expr::Expr& component : systems[i].field()) {
            field.push_back(component.substitute(rename));
        }
    }
    return OpenSystem(std::move(product), std::move(field));
}

RelatednessReport checkRelated(const spaces::SubmersionMap& map,
                               const OpenSystem& sourceSystem,
                               const OpenSystem& targetSystem, int samples,
                               double tolerance, std::uint64_t seed) {
    if (!(sourceSystem.on() == map.source())) {
        throw std::invalid_argument(
            "relatedness check requires the first system on the map's source");
    }
    if (!(targetSystem.on() == map.target())) {
        throw std::invalid_argument(
            "relatedness check requires the second system on the map's target");
    }
    const spaces::Submersion& source = map.source();
    const spaces::Submersion& target = map.target();
    const std::vector<std::vector<expr::Expr>> stateJacobian =
        expr::jacobian(map.stateComponents(), source.stateCoordinates());

    const expr::VarTable sourceTotal(source.totalCoordinates());
    const expr::VarTable sourceState(source.stateCoordinates());
    const expr::VarTable targetTotal(target.totalCoordinates());

    RelatednessReport report;
    report.maxResidual = 0.0;
    SampleRng rng(seed);
    const std::size_t stateDim = static_cast<std::size_t>(source.stateDim());

    for (int sample = 0; sample < samples; ++sample) {
        bool evaluated = false;
        for (int attempt = 0; attempt <= kMaxRedraws && !evaluated; ++attempt) {
            const std::vector<double> point =
                rng.boxPoint(source.totalDim(), kSampleLo, kSampleHi);
            const std::span<const double> statePart(point.data(), stateDim);
            try {
                const std::vector<double> velocity = sourceSystem.evalField(point);
                const std::vector<double> image = map.applyTotal(point);
                const std::vector<double> targetVelocity =
                    targetSystem.evalField(image);
                double pointResidual = 0.0;
                for (int i = 0; i < target.stateDim(); ++i) {
                    double pushed = 0.0;
                    for (int j = 0; j < source.stateDim(); ++j) {
                        pushed += stateJacobian[static_cast<std::size_t>(i)]
                                               [static_cast<std::size_t>(j)]
                                                   .eval(sourceState, statePart) *
                                  velocity[static_cast<std::size_t>(j)];
                    }
                    const double entry =
                        std::abs(pushed - targetVelocity[static_cast<std::size_t>(i)]);
                    if (!std::isfinite(entry)) {
                        throw expr::EvalError("non-finite residual");
                    }
                    pointResidual = std::max(pointResidual, entry);
                }
                if (pointResidual > report.maxResidual || report.samples == 0) {
                    report.maxResidual = std::max(report.maxResidual, pointResidual);
                    report.worstPoint = point;
                }
                ++report.samples;
                evaluated = true;
            } catch (const expr::EvalError&) {
                // singular sample; redraw
            }
        }
        if (!evaluated) ++report.skipped;
    }
    report.verdict = report.skipped == 0 && report.maxResidual <= tolerance;
    return report;
}

RelatednessReport checkPhiRelatedFamily(
    const std::vector<int>& indexMap,
    const std::vector<spaces::SubmersionMap>& componentMaps,
    const std::vector<OpenSystem>& sourceSystems,
    const std::vector<OpenSystem>& targetSystems, int samples, double tolerance,
    std::uint64_t seed) {
    if (indexMap.size() != componentMaps.size() ||
        indexMap.size() != targetSystems.size()) {
        throw std::invalid_argument(
            "family check requires one component map and one target system per "
            "index");
    }
    RelatednessReport aggregate;
    aggregate.verdict = true;  // vacuous for an empty family
    for (std::size_t x = 0; x < indexMap.size(); ++x) {
        const int image = indexMap[x];
        if (image < 0 || image >= static_cast<int>(sourceSystems.size())) {
            std::ostringstream os;
            os << "index map sends " << x << " to " << image
               << ", outside the source family";
            throw std::invalid_argument(os.str());
        }
        const RelatednessReport component = checkRelated(
            componentMaps[x], sourceSystems[static_cast<std::size_t>(image)],
            targetSystems[x], samples, tolerance, seed);
        aggregate.samples += component.samples;
        aggregate.skipped += component.skipped;
        aggregate.verdict = aggregate.verdict && component.verdict;
        if (component.maxResidual >= aggregate.maxResidual) {
            aggregate.maxResidual = component.maxResidual;
            aggregate.worstPoint = component.worstPoint;
            aggregate.worstComponent = static_cast<int>(x);
        }
    }
    return aggregate;
}

}  // namespace opennet::opensys
