#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace opennet::graph {

// Finite directed multigraph; parallel edges and loops are allowed. Edges
// carry stable indices given by their position in the edge list.
struct Edge {
    int source = 0;
    int target = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

class Graph {
public:
    Graph() = default;
    Graph(int vertexCount, std::vector<Edge> edges);

    int vertexCount() const { return vertexCount_; }
    const std::vector<Edge>& edges() const { return edges_; }
    int edgeCount() const { return static_cast<int>(edges_.size()); }
    const Edge& edge(int index) const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    int vertexCount_ = 0;
    std::vector<Edge> edges_;
};

// Vertex and edge assignments of a graph homomorphism. The edge map is
// explicit because parallel edges make it ambiguous otherwise.
struct GraphMap {
    std::vector<int> vertexMap;
    std::vector<int> edgeMap;
    friend bool operator==(const GraphMap&, const GraphMap&) = default;
};

// Indices of the edges ending at `vertex`, in ascending edge order.
std::vector<int> inNeighborhood(const Graph& g, int vertex);

// Throws std::invalid_argument when `map` is not an incidence-preserving
// graph homomorphism from `g` to `h`.
void validateGraphMap(const GraphMap& map, const Graph& g, const Graph& h);

// Reason a graph map fails the covering condition at some vertex.
struct FibrationFailure {
    int vertex = 0;           // vertex of g where the condition breaks
    std::string reason;
};

// A fibration induces, at every vertex, a bijection between its incoming
// edges and the incoming edges of its image. Returns the first failure, or
// nullopt when `map` is a fibration.
std::optional<FibrationFailure> fibrationFailure(const GraphMap& map,
                                                 const Graph& g, const Graph& h);

bool isFibration(const GraphMap& map, const Graph& g, const Graph& h);

// All fibrations from g to h, in lexicographic order of (vertexMap, edgeMap).
std::vector<GraphMap> enumerateFibrations(const Graph& g, const Graph& h);

// All incidence-preserving graph maps from g to h, in lexicographic order.
std::vector<GraphMap> enumerateGraphMaps(const Graph& g, const Graph& h);

GraphMap composeMaps(const GraphMap& outer, const GraphMap& inner,
                     const Graph& g, const Graph& h, const Graph& k);

}  // namespace opennet::graph
