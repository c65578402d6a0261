#include "opennet/network.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <string>

#include "opennet/sampling.hpp"

namespace opennet::network {

namespace {

constexpr int kSquareSamples = 100;
constexpr double kSquareTolerance = 1e-9;
constexpr int kMaxRedraws = 10;

spaces::Submersion productOrPoint(const std::vector<spaces::Submersion>& factors) {
    if (factors.empty()) return spaces::Submersion{};
    return spaces::productSubmersion(factors);
}

// Rewrites every listed coordinate name inside `e` to its prefixed form.
expr::Expr renameByPrefix(const expr::Expr& e, const std::string& prefix,
                          const std::vector<std::string>& names) {
    std::map<std::string, expr::Expr> bindings;
    for (const std::string& name : names) {
        bindings.emplace(name, expr::Expr::variable(prefix + name));
    }
    return e.substitute(bindings);
}

// Numerically compares two submersion maps with identical source and target
// at seeded sample points; throws std::invalid_argument on disagreement.
void requireMapsAgree(const spaces::SubmersionMap& left,
                      const spaces::SubmersionMap& right, const char* what) {
    if (!(left.source() == right.source()) || !(left.target() == right.target())) {
        throw std::invalid_argument(std::string(what) +
                                    ": the two routes have different shapes");
    }
    SampleRng rng(kConstructionSeed);
    const int dim = left.source().totalDim();
    for (int sample = 0; sample < kSquareSamples; ++sample) {
        for (int attempt = 0;; ++attempt) {
            const std::vector<double> point = rng.boxPoint(dim, -2.0, 2.0);
            try {
                const std::vector<double> a = left.applyTotal(point);
                const std::vector<double> b = right.applyTotal(point);
                for (std::size_t i = 0; i < a.size(); ++i) {
                    if (!(std::abs(a[i] - b[i]) <= kSquareTolerance)) {
                        std::ostringstream os;
                        os << what << ": routes disagree in component " << i << " ("
                           << a[i] << " vs " << b[i] << ")";
                        throw std::invalid_argument(os.str());
                    }
                }
            } catch (const expr::EvalError&) {
                if (attempt >= kMaxRedraws) {
                    throw std::invalid_argument(
                        std::string(what) +
                        ": sample evaluation failed at every redraw");
                }
                continue;
            }
            break;
        }
    }
}

}  // namespace

Network::Network(std::vector<spaces::Submersion> nodes,
                 spaces::Interconnection wiring)
    : nodes_(std::move(nodes)), wiring_(std::move(wiring)) {
    if (nodes_.empty()) {
        throw std::invalid_argument("a network needs at least one node");
    }
    if (!(wiring_.target() == spaces::productSubmersion(nodes_))) {
        throw std::invalid_argument(
            "the wiring's target must be the product of the node submersions");
    }
}

NetworkMap::NetworkMap(Network source, Network target, std::vector<int> indexMap,
                       std::vector<spaces::SubmersionMap> components,
                       spaces::SubmersionMap carrierMap)
    : source_(std::move(source)),
      target_(std::move(target)),
      indexMap_(std::move(indexMap)),
      components_(std::move(components)),
      carrierMap_(std::move(carrierMap)) {
    if (indexMap_.size() != target_.nodes().size() ||
        components_.size() != target_.nodes().size()) {
        throw std::invalid_argument(
            "a network map needs one index and one component per target node");
    }
    for (std::size_t x = 0; x < indexMap_.size(); ++x) {
        const int y = indexMap_[x];
        if (y < 0 || y >= static_cast<int>(source_.nodes().size())) {
            std::ostringstream os;
            os << "index map sends node " << x << " to " << y
               << ", outside the source network";
            throw std::invalid_argument(os.str());
        }
        if (!(components_[x].source() == source_.nodes()[static_cast<std::size_t>(y)])) {
            std::ostringstream os;
            os << "component " << x << " must start at source node " << y;
            throw std::invalid_argument(os.str());
        }
        if (!(components_[x].target() == target_.nodes()[x])) {
            std::ostringstream os;
            os << "component " << x << " must end at target node " << x;
            throw std::invalid_argument(os.str());
        }
    }
    if (!(carrierMap_.source() == source_.carrier()) ||
        !(carrierMap_.target() == target_.carrier())) {
        throw std::invalid_argument(
            "the carrier map must run from the source carrier to the target "
            "carrier");
    }
    // Wiring square: target wiring after the carrier map must agree with
    // the block map of the components after the source wiring.
    const spaces::SubmersionMap viaCarrier =
        spaces::composeMaps(target_.wiring().map(), carrierMap_);
    const spaces::SubmersionMap viaBlocks = spaces::composeMaps(
        blockMap(indexMap_, components_, source_.nodes()), source_.wiring().map());
    requireMapsAgree(viaCarrier, viaBlocks, "network-map wiring square");
}

ManifoldNetwork::ManifoldNetwork(graph::Graph graph,
                                 std::vector<spaces::Space> phases)
    : graph_(std::move(graph)), phases_(std::move(phases)) {
    if (static_cast<int>(phases_.size()) != graph_.vertexCount()) {
        throw std::invalid_argument("one phase space per vertex is required");
    }
}

spaces::SubmersionMap blockMap(
    const std::vector<int>& indexMap,
    const std::vector<spaces::SubmersionMap>& components,
    const std::vector<spaces::Submersion>& sourceFamily) {
    if (indexMap.size() != components.size()) {
        throw std::invalid_argument(
            "block map needs one component per index-map entry");
    }
    std::vector<spaces::Submersion> targetFamily;
    targetFamily.reserve(components.size());
    for (std::size_t x = 0; x < components.size(); ++x) {
        const int y = indexMap[x];
        if (y < 0 || y >= static_cast<int>(sourceFamily.size())) {
            std::ostringstream os;
            os << "index map sends " << x << " to " << y
               << ", outside the source family";
            throw std::invalid_argument(os.str());
        }
        if (!(components[x].source() == sourceFamily[static_cast<std::size_t>(y)])) {
            std::ostringstream os;
            os << "component " << x << " does not start at source factor " << y;
            throw std::invalid_argument(os.str());
        }
        targetFamily.push_back(components[x].target());
    }

    const spaces::Submersion source = productOrPoint(sourceFamily);
    const spaces::Submersion target = productOrPoint(targetFamily);

    // Component expressions renamed into product coordinates: inputs of
    // component x read from block indexMap[x], outputs land in block x.
    std::vector<expr::Expr> stateParts;   // target state components, block order
    std::vector<expr::Expr> inputParts;   // target input components, block order
    std::vector<expr::Expr> stateMap;
    for (std::size_t x = 0; x < components.size(); ++x) {
        const std::string prefix = "n" + std::to_string(indexMap[x]) + ".";
        const spaces::Submersion& from = components[x].source();
        const int stateDim = components[x].target().stateDim();
        const auto& total = components[x].totalComponents();
        for (std::size_t i = 0; i < total.size(); ++i) {
            expr::Expr renamed =
                renameByPrefix(total[i], prefix, from.totalCoordinates());
            if (static_cast<int>(i) < stateDim) {
                stateParts.push_back(std::move(renamed));
            } else {
                inputParts.push_back(std::move(renamed));
            }
        }
        for (const expr::Expr& component : components[x].stateComponents()) {
            stateMap.push_back(
                renameByPrefix(component, prefix, from.stateCoordinates()));
        }
    }
    std::vector<expr::Expr> totalMap = std::move(stateParts);
    totalMap.insert(totalMap.end(), inputParts.begin(), inputParts.end());
    return spaces::SubmersionMap(source, target, std::move(totalMap),
                                 std::move(stateMap));
}

opensys::OpenSystem compose(const Network& net,
                            const std::vector<opensys::OpenSystem>& systems) {
    if (systems.size() != net.nodes().size()) {
        throw std::invalid_argument("one system per node is required");
    }
    for (std::size_t i = 0; i < systems.size(); ++i) {
        if (!(systems[i].on() == net.nodes()[i])) {
            std::ostringstream os;
            os << "system " << i << " does not live on node " << i;
            throw std::invalid_argument(os.str());
        }
    }
    return opensys::pullback(net.wiring(), opensys::productSystems(systems));
}

Network networkFromGraph(const ManifoldNetwork& mn) {
    const graph::Graph& g = mn.graph();
    if (g.vertexCount() == 0) {
        throw std::invalid_argument("a network needs at least one vertex");
    }

    auto prefixedPhase = [&](int vertex, const std::string& prefix) {
        const spaces::Space& phase = mn.phases()[static_cast<std::size_t>(vertex)];
        std::vector<std::string> coords;
        coords.reserve(phase.coordinates().size());
        for (const std::string& c : phase.coordinates()) coords.push_back(prefix + c);
        return spaces::Space(prefix + phase.name(), std::move(coords));
    };

    std::vector<spaces::Submersion> nodes;
    nodes.reserve(static_cast<std::size_t>(g.vertexCount()));
    for (int a = 0; a < g.vertexCount(); ++a) {
        std::vector<spaces::Space> inputs;
        for (int e : graph::inNeighborhood(g, a)) {
            inputs.push_back(
                prefixedPhase(g.edge(e).source, "e" + std::to_string(e) + "."));
        }
        nodes.emplace_back(
            std::vector<spaces::Space>{mn.phases()[static_cast<std::size_t>(a)]},
            std::move(inputs));
    }

    std::vector<spaces::Submersion> carrierFactors;
    carrierFactors.reserve(static_cast<std::size_t>(g.vertexCount()));
    for (int a = 0; a < g.vertexCount(); ++a) {
        carrierFactors.emplace_back(
            std::vector<spaces::Space>{mn.phases()[static_cast<std::size_t>(a)]},
            std::vector<spaces::Space>{});
    }
    const spaces::Submersion carrier = spaces::productSubmersion(carrierFactors);

    // States route identically; each node's input blocks read the state of
    // the source vertex of the corresponding incoming edge.
    std::vector<expr::Expr> stateMap;
    stateMap.reserve(static_cast<std::size_t>(carrier.stateDim()));
    for (const std::string& coord : carrier.stateCoordinates()) {
        stateMap.push_back(expr::Expr::variable(coord));
    }
    std::vector<expr::Expr> totalMap = stateMap;
    for (int a = 0; a < g.vertexCount(); ++a) {
        for (int e : graph::inNeighborhood(g, a)) {
            const int src = g.edge(e).source;
            const std::string prefix = "n" + std::to_string(src) + ".";
            for (const std::string& c :
                 mn.phases()[static_cast<std::size_t>(src)].coordinates()) {
                totalMap.push_back(expr::Expr::variable(prefix + c));
            }
        }
    }

    spaces::Interconnection wiring(
        spaces::SubmersionMap(carrier, spaces::productSubmersion(nodes),
                              std::move(totalMap), std::move(stateMap)));
    return Network(std::move(nodes), std::move(wiring));
}

NetworkMap networkMapFromFibration(const graph::GraphMap& fibration,
                                   const ManifoldNetwork& domainNetwork,
                                   const ManifoldNetwork& codomainNetwork) {
    const graph::Graph& domain = domainNetwork.graph();
    const graph::Graph& codomain = codomainNetwork.graph();
    if (const auto failure = graph::fibrationFailure(fibration, domain, codomain)) {
        std::ostringstream os;
        os << "the graph map is not a fibration: at vertex " << failure->vertex
           << ", " << failure->reason;
        throw std::invalid_argument(os.str());
    }
    for (int a = 0; a < domain.vertexCount(); ++a) {
        const int image = fibration.vertexMap[static_cast<std::size_t>(a)];
        if (!(domainNetwork.phases()[static_cast<std::size_t>(a)] ==
              codomainNetwork.phases()[static_cast<std::size_t>(image)])) {
            std::ostringstream os;
            os << "phase of vertex " << a << " differs from the phase of its image "
               << image;
            throw std::invalid_argument(os.str());
        }
    }

    Network source = networkFromGraph(codomainNetwork);
    Network target = networkFromGraph(domainNetwork);

    // Components: identity on the shared state, input blocks permuted along
    // the per-vertex edge bijection.
    std::vector<spaces::SubmersionMap> components;
    components.reserve(static_cast<std::size_t>(domain.vertexCount()));
    std::vector<int> indexMap(fibration.vertexMap.begin(), fibration.vertexMap.end());
    for (int a = 0; a < domain.vertexCount(); ++a) {
        const spaces::Submersion& from =
            source.nodes()[static_cast<std::size_t>(indexMap[static_cast<std::size_t>(a)])];
        const spaces::Submersion& to = target.nodes()[static_cast<std::size_t>(a)];
        std::vector<expr::Expr> stateMap;
        for (const std::string& c : to.stateCoordinates()) {
            stateMap.push_back(expr::Expr::variable(c));
        }
        std::vector<expr::Expr> totalMap = stateMap;
        for (int e : graph::inNeighborhood(domain, a)) {
            const int imageEdge = fibration.edgeMap[static_cast<std::size_t>(e)];
            const std::string prefix = "e" + std::to_string(imageEdge) + ".";
            const spaces::Space& phase =
                domainNetwork.phases()[static_cast<std::size_t>(domain.edge(e).source)];
            for (const std::string& c : phase.coordinates()) {
                totalMap.push_back(expr::Expr::variable(prefix + c));
            }
        }
        components.emplace_back(from, to, std::move(totalMap), std::move(stateMap));
    }

    // Carrier map: block x of the output copies state block vertexMap[x].
    std::vector<expr::Expr> carrierState;
    for (int x = 0; x < domain.vertexCount(); ++x) {
        const int y = indexMap[static_cast<std::size_t>(x)];
        const std::string prefix = "n" + std::to_string(y) + ".";
        for (const std::string& c :
             domainNetwork.phases()[static_cast<std::size_t>(x)].coordinates()) {
            carrierState.push_back(expr::Expr::variable(prefix + c));
        }
    }
    std::vector<expr::Expr> carrierTotal = carrierState;
    spaces::SubmersionMap carrierMap(source.carrier(), target.carrier(),
                                     std::move(carrierTotal),
                                     std::move(carrierState));

    return NetworkMap(std::move(source), std::move(target), std::move(indexMap),
                      std::move(components), std::move(carrierMap));
}

opensys::RelatednessReport verifyNetworkMap(
    const NetworkMap& map, const std::vector<opensys::OpenSystem>& sourceSystems,
    const std::vector<opensys::OpenSystem>& targetSystems, int samples,
    double tolerance, std::uint64_t seed) {
    const opensys::RelatednessReport hypothesis = opensys::checkPhiRelatedFamily(
        map.indexMap(), map.components(), sourceSystems, targetSystems, samples,
        tolerance, seed);
    if (!hypothesis.verdict) {
        std::ostringstream os;
        os << "the node systems are not componentwise related (max residual "
           << hypothesis.maxResidual << " at component " << hypothesis.worstComponent
           << ")";
        throw HypothesisError(os.str());
    }
    return opensys::checkRelated(map.carrierMap(), compose(map.source(), sourceSystems),
                                 compose(map.target(), targetSystems), samples,
                                 tolerance, seed);
}

}  // namespace opennet::network
