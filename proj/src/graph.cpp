#include "opennet/graph.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace opennet::graph {

Graph::Graph(int vertexCount, std::vector<Edge> edges)
    : vertexCount_(vertexCount), edges_(std::move(edges)) {
    if (vertexCount_ < 0) throw std::invalid_argument("negative vertex count");
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        if (e.source < 0 || e.source >= vertexCount_ || e.target < 0 ||
            e.target >= vertexCount_) {
            std::ostringstream os;
            os << "edge " << i << " (" << e.source << " -> " << e.target
               << ") has an endpoint outside 0.." << vertexCount_ - 1;
            throw std::invalid_argument(os.str());
        }
    }
}

const Edge& Graph::edge(int index) const {
    if (index < 0 || index >= edgeCount()) {
        throw std::invalid_argument("edge index out of range");
    }
    return edges_[static_cast<std::size_t>(index)];
}

std::vector<int> inNeighborhood(const Graph& g, int vertex) {
    if (vertex < 0 || vertex >= g.vertexCount()) {
        std::ostringstream os;
        os << "vertex " << vertex << " outside 0.." << g.vertexCount() - 1;
        throw std::invalid_argument(os.str());
    }
    std::vector<int> result;
    for (int e = 0; e < g.edgeCount(); ++e) {
        if (g.edge(e).target == vertex) result.push_back(e);
    }
    return result;
}

void validateGraphMap(const GraphMap& map, const Graph& g, const Graph& h) {
    if (static_cast<int>(map.vertexMap.size()) != g.vertexCount()) {
        throw std::invalid_argument("vertex map size does not match the source graph");
    }
    if (static_cast<int>(map.edgeMap.size()) != g.edgeCount()) {
        throw std::invalid_argument("edge map size does not match the source graph");
    }
    for (int v : map.vertexMap) {
        if (v < 0 || v >= h.vertexCount()) {
            throw std::invalid_argument("vertex map value outside the target graph");
        }
    }
    for (int e = 0; e < g.edgeCount(); ++e) {
        int image = map.edgeMap[static_cast<std::size_t>(e)];
        if (image < 0 || image >= h.edgeCount()) {
            throw std::invalid_argument("edge map value outside the target graph");
        }
        const Edge& src = g.edge(e);
        const Edge& dst = h.edge(image);
        if (dst.source != map.vertexMap[static_cast<std::size_t>(src.source)] ||
            dst.target != map.vertexMap[static_cast<std::size_t>(src.target)]) {
            std::ostringstream os;
            os << "edge " << e << " maps to edge " << image
               << " which does not preserve incidence";
            throw std::invalid_argument(os.str());
        }
    }
}

std::optional<FibrationFailure> fibrationFailure(const GraphMap& map,
                                                 const Graph& g, const Graph& h) {
    validateGraphMap(map, g, h);
    for (int a = 0; a < g.vertexCount(); ++a) {
        const std::vector<int> own = inNeighborhood(g, a);
        const std::vector<int> image =
            inNeighborhood(h, map.vertexMap[static_cast<std::size_t>(a)]);
        if (own.size() != image.size()) {
            std::ostringstream os;
            os << "vertex " << a << " has " << own.size()
               << " incoming edges but its image has " << image.size();
            return FibrationFailure{a, os.str()};
        }
        // the restriction must hit each incoming edge of the image exactly once
        std::vector<int> mapped;
        mapped.reserve(own.size());
        for (int e : own) mapped.push_back(map.edgeMap[static_cast<std::size_t>(e)]);
        std::sort(mapped.begin(), mapped.end());
        if (std::adjacent_find(mapped.begin(), mapped.end()) != mapped.end()) {
            std::ostringstream os;
            os << "two incoming edges of vertex " << a << " map to the same edge";
            return FibrationFailure{a, os.str()};
        }
        // `mapped` lands inside `image` automatically (incidence preservation),
        // so equal sizes plus distinctness give the bijection; keep the check
        // explicit anyway for diagnostics.
        if (!std::includes(image.begin(), image.end(), mapped.begin(), mapped.end())) {
            std::ostringstream os;
            os << "an incoming edge of vertex " << a
               << " maps outside the incoming edges of its image";
            return FibrationFailure{a, os.str()};
        }
    }
    return std::nullopt;
}

bool isFibration(const GraphMap& map, const Graph& g, const Graph& h) {
    return !fibrationFailure(map, g, h).has_value();
}

namespace {

// Enumerates incidence-preserving maps in lexicographic order of
// (vertexMap, edgeMap) and calls `sink` for each.
template <typename Sink>
void forEachGraphMap(const Graph& g, const Graph& h, Sink&& sink) {
    const int n = g.vertexCount();
    if (h.vertexCount() == 0 && (n > 0 || g.edgeCount() > 0)) return;
    std::vector<int> vertexMap(static_cast<std::size_t>(n), 0);

    // candidate target edges per (source image, target image) pair
    auto candidates = [&h](int s, int t) {
        std::vector<int> out;
        for (int e = 0; e < h.edgeCount(); ++e) {
            if (h.edge(e).source == s && h.edge(e).target == t) out.push_back(e);
        }
        return out;
    };

    auto emitEdgeMaps = [&](const std::vector<int>& vm) {
        const int m = g.edgeCount();
        std::vector<std::vector<int>> options(static_cast<std::size_t>(m));
        for (int e = 0; e < m; ++e) {
            const Edge& edge = g.edge(e);
            options[static_cast<std::size_t>(e)] =
                candidates(vm[static_cast<std::size_t>(edge.source)],
                           vm[static_cast<std::size_t>(edge.target)]);
            if (options[static_cast<std::size_t>(e)].empty()) return;
        }
        std::vector<std::size_t> pick(static_cast<std::size_t>(m), 0);
        while (true) {
            GraphMap map;
            map.vertexMap = vm;
            map.edgeMap.resize(static_cast<std::size_t>(m));
            for (int e = 0; e < m; ++e) {
                map.edgeMap[static_cast<std::size_t>(e)] =
                    options[static_cast<std::size_t>(e)][pick[static_cast<std::size_t>(e)]];
            }
            sink(map);
            int slot = m - 1;
            while (slot >= 0) {
                auto& p = pick[static_cast<std::size_t>(slot)];
                if (++p < options[static_cast<std::size_t>(slot)].size()) break;
                p = 0;
                --slot;
            }
            if (slot < 0) break;
        }
    };

    while (true) {
        emitEdgeMaps(vertexMap);
        int slot = n - 1;
        while (slot >= 0) {
            if (++vertexMap[static_cast<std::size_t>(slot)] < h.vertexCount()) break;
            vertexMap[static_cast<std::size_t>(slot)] = 0;
            --slot;
        }
        if (slot < 0) break;
        if (n == 0) break;  // a single empty vertex map
    }
}

}  // namespace

std::vector<GraphMap> enumerateGraphMaps(const Graph& g, const Graph& h) {
    std::vector<GraphMap> out;
    forEachGraphMap(g, h, [&out](const GraphMap& m) { out.push_back(m); });
    return out;
}

std::vector<GraphMap> enumerateFibrations(const Graph& g, const Graph& h) {
    std::vector<GraphMap> out;
    forEachGraphMap(g, h, [&](const GraphMap& m) {
        if (isFibration(m, g, h)) out.push_back(m);
    });
    return out;
}

GraphMap composeMaps(const GraphMap& outer, const GraphMap& inner,
                     const Graph& g, const Graph& h, const Graph& k) {
    validateGraphMap(inner, g, h);
    validateGraphMap(outer, h, k);
    GraphMap out;
    out.vertexMap.reserve(inner.vertexMap.size());
    for (int v : inner.vertexMap) {
        out.vertexMap.push_back(outer.vertexMap[static_cast<std::size_t>(v)]);
    }
    out.edgeMap.reserve(inner.edgeMap.size());
    for (int e : inner.edgeMap) {
        out.edgeMap.push_back(outer.edgeMap[static_cast<std::size_t>(e)]);
    }
    return out;
}

}  // namespace opennet::graph
