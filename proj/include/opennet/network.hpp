#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "opennet/graph.hpp"
#include "opennet/opensys.hpp"
#include "opennet/spaces.hpp"

namespace opennet::network {

// Indexed list of node submersions together with a wiring from a carrier
// into their product. Composing node systems means taking their product and
// pulling it back along the wiring.
class Network {
public:
    Network(std::vector<spaces::Submersion> nodes, spaces::Interconnection wiring);

    const std::vector<spaces::Submersion>& nodes() const { return nodes_; }
    const spaces::Interconnection& wiring() const { return wiring_; }
    const spaces::Submersion& carrier() const { return wiring_.source(); }

private:
    std::vector<spaces::Submersion> nodes_;
    spaces::Interconnection wiring_;
};

// Map between networks: a node-index map (from target-network indices to
// source-network indices), one submersion map per target node, and a map of
// carriers. Construction verifies the wiring square — target wiring after
// the carrier map agrees with the block map of the components after the
// source wiring — numerically at 100 seeded samples, tolerance 1e-9.
class NetworkMap {
public:
    NetworkMap(Network source, Network target, std::vector<int> indexMap,
               std::vector<spaces::SubmersionMap> components,
               spaces::SubmersionMap carrierMap);

    const Network& source() const { return source_; }
    const Network& target() const { return target_; }
    const std::vector<int>& indexMap() const { return indexMap_; }
    const std::vector<spaces::SubmersionMap>& components() const {
        return components_;
    }
    const spaces::SubmersionMap& carrierMap() const { return carrierMap_; }

private:
    Network source_;
    Network target_;
    std::vector<int> indexMap_;
    std::vector<spaces::SubmersionMap> components_;
    spaces::SubmersionMap carrierMap_;
};

// A directed multigraph with one phase space per vertex.
class ManifoldNetwork {
public:
    ManifoldNetwork(graph::Graph graph, std::vector<spaces::Space> phases);

    const graph::Graph& graph() const { return graph_; }
    const std::vector<spaces::Space>& phases() const { return phases_; }

private:
    graph::Graph graph_;
    std::vector<spaces::Space> phases_;
};

// Thrown when the componentwise-relatedness hypothesis of verifyNetworkMap
// fails; distinct from a negative verdict of the conclusion check.
class HypothesisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Map between product submersions whose block at index x applies
// components[x] to block indexMap[x] of the input. `sourceFamily` lists the
// factors of the map's source product (needed because the index map may
// miss some of them). An empty index map yields the map onto the
// zero-dimensional product.
spaces::SubmersionMap blockMap(const std::vector<int>& indexMap,
                               const std::vector<spaces::SubmersionMap>& components,
                               const std::vector<spaces::Submersion>& sourceFamily);

// Pullback of the product of the node systems along the wiring: the
// composite dynamics on the carrier.
opensys::OpenSystem compose(const Network& net,
                            const std::vector<opensys::OpenSystem>& systems);

// Network induced by a graph of phase spaces: node a sees its own state
// plus one input block per incoming edge (ascending edge order, coordinates
// prefixed "e{edge}."), the carrier is the product of the phases, and the
// wiring routes each node its own state followed by the states of its
// in-neighbors.
Network networkFromGraph(const ManifoldNetwork& mn);

// Network map induced by a graph fibration. The resulting map runs opposite
// to the graph map: its source network comes from the fibration's codomain
// graph and its target network from the domain graph. Components permute
// input blocks along the per-vertex edge bijection; the carrier map copies
// state block vertexMap[x] of the input into block x.
NetworkMap networkMapFromFibration(const graph::GraphMap& fibration,
                                   const ManifoldNetwork& domainNetwork,
                                   const ManifoldNetwork& codomainNetwork);

// Checks that the map's composed dynamics are related along the carrier
// map: first the componentwise hypothesis (throws HypothesisError when it
// fails), then relatedness of compose(source, sourceSystems) and
// compose(target, targetSystems) along the carrier map. A false verdict is
// reported, never silently accepted.
opensys::RelatednessReport verifyNetworkMap(
    const NetworkMap& map, const std::vector<opensys::OpenSystem>& sourceSystems,
    const std::vector<opensys::OpenSystem>& targetSystems,
    int samples = opensys::kDefaultRelatednessSamples,
    double tolerance = opensys::kDefaultRelatednessTolerance,
    std::uint64_t seed = 0);

}  // namespace opennet::network
