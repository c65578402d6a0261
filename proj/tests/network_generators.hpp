#pragma once
// Seeded random map-of-network instances with identity node components,
// shared by the module tests and the acceptance checks. Every instance
// satisfies the componentwise relatedness hypothesis by construction, so
// the composed systems must verify as related.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "opennet/network.hpp"
#include "opennet/sampling.hpp"
#include "oracles.hpp"

namespace generators {

struct NetworkMapInstance {
    opennet::network::NetworkMap map;
    std::vector<opennet::opensys::OpenSystem> sourceSystems;
    std::vector<opennet::opensys::OpenSystem> targetSystems;
};

// The target network replays source nodes along a surjective block
// assignment, the target wiring pulls the source wiring through a chosen
// section of that assignment, and the carrier map copies assigned blocks.
inline NetworkMapInstance randomIdentityInstance(opennet::SampleRng& rng) {
    using namespace opennet;

    const auto randomInt = [&rng](int bound) {  // uniform over 0 .. bound-1
        return std::min(bound - 1, static_cast<int>(rng.uniform(0.0, static_cast<double>(bound))));
    };
    constexpr int kExprDepth = 3;
    constexpr double kMagnitudeBound = 10.0;

    // Source node family and its closed carrier (the product of the states).
    const int sourceCount = 1 + randomInt(2);
    std::vector<spaces::Submersion> sourceNodes;
    std::vector<spaces::Space> carrierFactors;
    for (int y = 0; y < sourceCount; ++y) {
        const int stateDim = 1 + randomInt(2);
        const int inputDim = randomInt(3);
        std::vector<spaces::Space> states;
        std::vector<spaces::Space> inputs;
        for (int i = 0; i < stateDim; ++i) {
            const std::string tag = std::to_string(y) + "_" + std::to_string(i);
            states.emplace_back("S" + tag, std::vector<std::string>{"s" + tag});
        }
        for (int j = 0; j < inputDim; ++j) {
            const std::string tag = std::to_string(y) + "_" + std::to_string(j);
            inputs.emplace_back("I" + tag, std::vector<std::string>{"i" + tag});
        }
        carrierFactors.insert(carrierFactors.end(), states.begin(), states.end());
        sourceNodes.emplace_back(std::move(states), std::move(inputs));
    }
    const spaces::Submersion sourceCarrier(carrierFactors, {});
    const auto& carrierStates = sourceCarrier.stateCoordinates();

    std::vector<expr::Expr> sourceStateParts;
    for (const auto& name : carrierStates) {
        sourceStateParts.push_back(expr::Expr::variable(name));
    }
    std::vector<expr::Expr> sourceTotalParts = sourceStateParts;
    std::vector<std::vector<expr::Expr>> sourceInputExprs(static_cast<std::size_t>(sourceCount));
    for (int y = 0; y < sourceCount; ++y) {
        for (int j = 0; j < sourceNodes[static_cast<std::size_t>(y)].inputDim(); ++j) {
            sourceInputExprs[static_cast<std::size_t>(y)].push_back(
                oracles::randomBoundedExpression(rng, carrierStates, kExprDepth, kMagnitudeBound));
        }
        const auto& exprs = sourceInputExprs[static_cast<std::size_t>(y)];
        sourceTotalParts.insert(sourceTotalParts.end(), exprs.begin(), exprs.end());
    }
    network::Network source(
        sourceNodes,
        spaces::Interconnection(spaces::SubmersionMap(sourceCarrier,
                                                      spaces::productSubmersion(sourceNodes),
                                                      sourceTotalParts, sourceStateParts)));

    // Surjective block assignment target index -> source index, plus one
    // section of it (used to express source carrier states in target ones).
    const int targetCount = sourceCount + randomInt(4 - sourceCount);
    std::vector<int> indexMap(static_cast<std::size_t>(targetCount));
    for (int x = 0; x < targetCount; ++x) {
        indexMap[static_cast<std::size_t>(x)] = x < sourceCount ? x : randomInt(sourceCount);
    }
    for (int x = targetCount - 1; x > 0; --x) {
        std::swap(indexMap[static_cast<std::size_t>(x)],
                  indexMap[static_cast<std::size_t>(randomInt(x + 1))]);
    }
    std::vector<int> section(static_cast<std::size_t>(sourceCount), -1);
    for (int x = targetCount - 1; x >= 0; --x) {
        section[static_cast<std::size_t>(indexMap[static_cast<std::size_t>(x)])] = x;
    }

    std::vector<spaces::Submersion> targetNodes;
    std::vector<spaces::Space> targetCarrierFactors;
    std::vector<expr::Expr> carrierMapParts;
    std::map<std::string, expr::Expr> sectionSubstitution;  // source carrier var -> target one
    for (int x = 0; x < targetCount; ++x) {
        const int y = indexMap[static_cast<std::size_t>(x)];
        const spaces::Submersion& blueprint = sourceNodes[static_cast<std::size_t>(y)];
        targetNodes.push_back(blueprint);
        for (int i = 0; i < blueprint.stateDim(); ++i) {
            const std::string targetCoord = "t" + std::to_string(x) + "_" + std::to_string(i);
            const std::string sourceCoord = "s" + std::to_string(y) + "_" + std::to_string(i);
            targetCarrierFactors.emplace_back("T" + std::to_string(x) + "_" + std::to_string(i),
                                              std::vector<std::string>{targetCoord});
            carrierMapParts.push_back(expr::Expr::variable(sourceCoord));
            if (section[static_cast<std::size_t>(y)] == x) {
                sectionSubstitution.emplace(sourceCoord, expr::Expr::variable(targetCoord));
            }
        }
    }
    const spaces::Submersion targetCarrier(targetCarrierFactors, {});

    std::vector<expr::Expr> targetStateParts;
    for (const auto& name : targetCarrier.stateCoordinates()) {
        targetStateParts.push_back(expr::Expr::variable(name));
    }
    std::vector<expr::Expr> targetTotalParts = targetStateParts;
    for (int x = 0; x < targetCount; ++x) {
        for (const auto& wireExpr : sourceInputExprs[static_cast<std::size_t>(
                 indexMap[static_cast<std::size_t>(x)])]) {
            targetTotalParts.push_back(wireExpr.substitute(sectionSubstitution));
        }
    }
    network::Network target(
        targetNodes,
        spaces::Interconnection(spaces::SubmersionMap(targetCarrier,
                                                      spaces::productSubmersion(targetNodes),
                                                      targetTotalParts, targetStateParts)));

    std::vector<spaces::SubmersionMap> components;
    for (int x = 0; x < targetCount; ++x) {
        components.push_back(spaces::SubmersionMap::identity(
            sourceNodes[static_cast<std::size_t>(indexMap[static_cast<std::size_t>(x)])]));
    }
    spaces::SubmersionMap carrierMap(sourceCarrier, targetCarrier, carrierMapParts, carrierMapParts);

    network::NetworkMap map(std::move(source), std::move(target), indexMap, std::move(components),
                            std::move(carrierMap));

    std::vector<opensys::OpenSystem> sourceSystems;
    for (int y = 0; y < sourceCount; ++y) {
        const spaces::Submersion& node = sourceNodes[static_cast<std::size_t>(y)];
        std::vector<expr::Expr> field;
        for (int i = 0; i < node.stateDim(); ++i) {
            field.push_back(oracles::randomBoundedExpression(rng, node.totalCoordinates(), kExprDepth,
                                                             kMagnitudeBound));
        }
        sourceSystems.emplace_back(node, std::move(field));
    }
    std::vector<opensys::OpenSystem> targetSystems;
    for (int x = 0; x < targetCount; ++x) {
        targetSystems.push_back(sourceSystems[static_cast<std::size_t>(
            indexMap[static_cast<std::size_t>(x)])]);
    }
    return {std::move(map), std::move(sourceSystems), std::move(targetSystems)};
}

}  // namespace generators
