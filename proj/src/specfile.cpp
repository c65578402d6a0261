#include "opennet/specfile.hpp"

#include <fstream>
#include <set>
#include <utility>
#include <vector>

#include "opennet/expr.hpp"

namespace opennet::cli {
namespace {

using nlohmann::json;

const json& requireMember(const json& object, const char* key, const std::string& context) {
    auto found = object.find(key);
    if (found == object.end()) {
        throw SpecParseError(context + " is missing the required key \"" + key + "\"");
    }
    return *found;
}

const json& requireObject(const json& value, const std::string& context) {
    if (!value.is_object()) {
        throw SpecParseError(context + " must be a JSON object");
    }
    return value;
}

const json& requireArray(const json& value, const std::string& context) {
    if (!value.is_array()) {
        throw SpecParseError(context + " must be a JSON array");
    }
    return value;
}

std::string requireString(const json& value, const std::string& context) {
    if (!value.is_string()) {
        throw SpecParseError(context + " must be a string");
    }
    return value.get<std::string>();
}

double requireNumber(const json& value, const std::string& context) {
    if (!value.is_number()) {
        throw SpecParseError(context + " must be a number");
    }
    return value.get<double>();
}

std::vector<std::string> stringList(const json& value, const std::string& context) {
    requireArray(value, context);
    std::vector<std::string> out;
    out.reserve(value.size());
    for (std::size_t i = 0; i < value.size(); ++i) {
        out.push_back(requireString(value[i], context + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::vector<int> indexList(const json& value, const std::string& context) {
    requireArray(value, context);
    std::vector<int> out;
    out.reserve(value.size());
    for (std::size_t i = 0; i < value.size(); ++i) {
        const std::string slot = context + "[" + std::to_string(i) + "]";
        if (!value[i].is_number_integer()) {
            throw SpecParseError(slot + " must be an integer");
        }
        out.push_back(value[i].get<int>());
    }
    return out;
}

expr::Expr parseExpression(const std::string& source, const std::vector<std::string>& variables,
                           const std::string& context) {
    try {
        return expr::parse(source, variables);
    } catch (const expr::ParseError& error) {
        throw SpecParseError(context + ": " + error.what() + " (at offset " +
                             std::to_string(error.offset()) + ")");
    }
}

std::vector<expr::Expr> parseExpressionList(const json& value, const std::vector<std::string>& variables,
                                            const std::string& context) {
    requireArray(value, context);
    std::vector<expr::Expr> out;
    out.reserve(value.size());
    for (std::size_t i = 0; i < value.size(); ++i) {
        const std::string slot = context + "[" + std::to_string(i) + "]";
        out.push_back(parseExpression(requireString(value[i], slot), variables, slot));
    }
    return out;
}

template <typename T>
const T& lookup(const std::map<std::string, T>& table, const std::string& name, const char* kind) {
    auto found = table.find(name);
    if (found == table.end()) {
        throw DanglingReferenceError(std::string("unknown ") + kind + " \"" + name + "\"");
    }
    return found->second;
}

[[noreturn]] void rejectShape(const std::string& context, const std::exception& error) {
    throw DimensionError(context + ": " + error.what());
}

void loadSpaces(SpecFile& spec, const json& section) {
    requireObject(section, "\"spaces\"");
    for (const auto& [name, body] : section.items()) {
        const std::string context = "space \"" + name + "\"";
        requireObject(body, context);
        auto coordinates = stringList(requireMember(body, "coordinates", context), context + ".coordinates");
        try {
            spec.spaces.emplace(name, spaces::Space(name, std::move(coordinates)));
        } catch (const std::invalid_argument& error) {
            rejectShape(context, error);
        }
    }
}

void loadSubmersions(SpecFile& spec, const json& section) {
    requireObject(section, "\"submersions\"");
    for (const auto& [name, body] : section.items()) {
        const std::string context = "submersion \"" + name + "\"";
        requireObject(body, context);
        std::vector<spaces::Space> states;
        for (const auto& stateName : stringList(requireMember(body, "states", context), context + ".states")) {
            states.push_back(lookup(spec.spaces, stateName, "space"));
        }
        std::vector<spaces::Space> inputs;
        if (body.contains("inputs")) {
            for (const auto& inputName : stringList(body["inputs"], context + ".inputs")) {
                inputs.push_back(lookup(spec.spaces, inputName, "space"));
            }
        }
        try {
            spec.submersions.emplace(name, spaces::Submersion(std::move(states), std::move(inputs)));
        } catch (const std::invalid_argument& error) {
            rejectShape(context, error);
        }
    }
}

void loadGraphs(SpecFile& spec, const json& section) {
    requireObject(section, "\"graphs\"");
    for (const auto& [name, body] : section.items()) {
        const std::string context = "graph \"" + name + "\"";
        requireObject(body, context);
        const json& vertexCount = requireMember(body, "vertices", context);
        if (!vertexCount.is_number_integer()) {
            throw SpecParseError(context + ".vertices must be an integer");
        }
        std::vector<graph::Edge> edges;
        const json& edgeList = requireArray(requireMember(body, "edges", context), context + ".edges");
        for (std::size_t i = 0; i < edgeList.size(); ++i) {
            const std::string slot = context + ".edges[" + std::to_string(i) + "]";
            auto endpoints = indexList(edgeList[i], slot);
            if (endpoints.size() != 2) {
                throw SpecParseError(slot + " must be a [source, target] pair");
            }
            edges.push_back(graph::Edge{endpoints[0], endpoints[1]});
        }
        try {
            spec.graphs.emplace(name, graph::Graph(vertexCount.get<int>(), std::move(edges)));
        } catch (const std::invalid_argument& error) {
            rejectShape(context, error);
        }
    }
}

void loadGraphMaps(SpecFile& spec, const json& section) {
    requireObject(section, "\"graph_maps\"");
    for (const auto& [name, body] : section.items()) {
        const std::string context = "graph map \"" + name + "\"";
        requireObject(body, context);
        NamedGraphMap named;
        named.from = requireString(requireMember(body, "from", context), context + ".from");
        named.to = requireString(requireMember(body, "to", context), context + ".to");
        const graph::Graph& from = lookup(spec.graphs, named.from, "graph");
        const graph::Graph& to = lookup(spec.graphs, named.to, "graph");
        named.map.vertexMap = indexList(requireMember(body, "vertex_map", context), context + ".vertex_map");
        named.map.edgeMap = indexList(requireMember(body, "edge_map", context), context + ".edge_map");
        try {
            graph::validateGraphMap(named.map, from, to);
        } catch (const std::invalid_argument& error) {
            rejectShape(context, error);
        }
        spec.graphMaps.emplace(name, std::move(named));
    }
}

void loadManifoldNetworks(SpecFile& spec, const json& section) {
    requireObject(section, "\"manifold_networks\"");
    for (const auto& [name, body] : section.items()) {
        const std::string context = "manifold network \"" + name + "\"";
        requireObject(body, context);
        const std::string graphName =
            requireString(requireMember(body, "graph", context), context + ".graph");
        const graph::Graph& shape = lookup(spec.graphs, graphName, "graph");
        std::vector<spaces::Space> phases;
        for (const auto& phaseName : stringList(requireMember(body, "phases", context), context + ".phases")) {
            phases.push_back(lookup(spec.spaces, phaseName, "space"));
        }
        try {
            spec.manifoldNetworks.emplace(name, network::ManifoldNetwork(shape, std::move(phases)));
        } catch (const std::invalid_argument& error) {
            rejectShape(context, error);
        }
    }
}

void loadNetworks(SpecFile& spec, const json& section) {
    requireObject(section, "\"networks\"");
    for (const auto& [name, body] : section.items()) {
        const std::string context = "network \"" + name + "\"";
        requireObject(body, context);
        if (body.contains("from_graph")) {
            const std::string mnName = requireString(body["from_graph"], context + ".from_graph");
            try {
                spec.networks.emplace(name,
                                      network::networkFromGraph(lookup(spec.manifoldNetworks, mnName,
                                                                       "manifold network")));
            } catch (const std::invalid_argument& error) {
                rejectShape(context, error);
            }
            continue;
        }
        std::vector<spaces::Submersion> nodes;
        for (const auto& nodeName : stringList(requireMember(body, "nodes", context), context + ".nodes")) {
            nodes.push_back(lookup(spec.submersions, nodeName, "submersion"));
        }
        const std::string carrierName =
            requireString(requireMember(body, "carrier", context), context + ".carrier");
        const spaces::Submersion& carrier = lookup(spec.submersions, carrierName, "submersion");
        const json& wiringSection = requireMember(body, "wiring", context);
        auto inputComponents =
            parseExpressionList(wiringSection, carrier.totalCoordinates(), context + ".wiring");
        // The state half of an interconnection is forced to the identity, so a
        // spec file only writes the input half.
        std::vector<expr::Expr> stateComponents;
        for (const auto& coordinate : carrier.stateCoordinates()) {
            stateComponents.push_back(expr::Expr::variable(coordinate));
        }
        std::vector<expr::Expr> totalComponents = stateComponents;
        totalComponents.insert(totalComponents.end(), inputComponents.begin(), inputComponents.end());
        try {
            spaces::SubmersionMap wiringMap(carrier, spaces::productSubmersion(nodes),
                                            std::move(totalComponents), std::move(stateComponents));
            spec.networks.emplace(name, network::Network(std::move(nodes),
                                                         spaces::Interconnection(std::move(wiringMap))));
        } catch (const std::invalid_argument& error) {
            rejectShape(context, error);
        }
    }
}

const spaces::Submersion& resolveSystemDomain(const SpecFile& spec, const json& value,
                                              const std::string& context) {
    if (value.is_string()) {
        return lookup(spec.submersions, value.get<std::string>(), "submersion");
    }
    requireObject(value, context);
    const std::string networkName =
        requireString(requireMember(value, "network", context), context + ".network");
    const network::Network& net = lookup(spec.networks, networkName, "network");
    const json& nodeIndex = requireMember(value, "node", context);
    if (!nodeIndex.is_number_integer()) {
        throw SpecParseError(context + ".node must be an integer");
    }
    const int node = nodeIndex.get<int>();
    if (node < 0 || node >= static_cast<int>(net.nodes().size())) {
        throw DimensionError(context + ": node index " + std::to_string(node) +
                             " is out of range for network \"" + networkName + "\"");
    }
    return net.nodes()[static_cast<std::size_t>(node)];
}

void loadSystems(SpecFile& spec, const json& section) {
    requireObject(section, "\"systems\"");
    for (const auto& [name, body] : section.items()) {
        const std::string context = "system \"" + name + "\"";
        requireObject(body, context);
        const spaces::Submersion& domain =
            resolveSystemDomain(spec, requireMember(body, "on", context), context + ".on");
        auto field = parseExpressionList(requireMember(body, "field", context),
                                         domain.totalCoordinates(), context + ".field");
        try {
            spec.systems.emplace(name, opensys::OpenSystem(domain, std::move(field)));
        } catch (const std::invalid_argument& error) {
            rejectShape(context, error);
        }
    }
}

spaces::SubmersionMap buildSubmersionMap(const spaces::Submersion& from, const spaces::Submersion& to,
                                         const json& body, const std::string& context) {
    requireObject(body, context);
    auto total = parseExpressionList(requireMember(body, "total", context), from.totalCoordinates(),
                                     context + ".total");
    auto state = parseExpressionList(requireMember(body, "state", context), from.stateCoordinates(),
                                     context + ".state");
    return spaces::SubmersionMap(from, to, std::move(total), std::move(state));
}

void loadNetworkMapFromFibration(SpecFile& spec, const std::string& name, const json& body,
                                 const std::string& context) {
    requireObject(body, context + ".from_fibration");
    const std::string mapName =
        requireString(requireMember(body, "map", context), context + ".map");
    const std::string domainName =
        requireString(requireMember(body, "domain", context), context + ".domain");
    const std::string codomainName =
        requireString(requireMember(body, "codomain", context), context + ".codomain");
    const NamedGraphMap& named = lookup(spec.graphMaps, mapName, "graph map");
    const network::ManifoldNetwork& domain =
        lookup(spec.manifoldNetworks, domainName, "manifold network");
    const network::ManifoldNetwork& codomain =
        lookup(spec.manifoldNetworks, codomainName, "manifold network");
    if (!(lookup(spec.graphs, named.from, "graph") == domain.graph()) ||
        !(lookup(spec.graphs, named.to, "graph") == codomain.graph())) {
        throw DimensionError(context + ": graph map \"" + mapName +
                             "\" does not run between the graphs of \"" + domainName + "\" and \"" +
                             codomainName + "\"");
    }
    try {
        spec.networkMaps.emplace(name, network::networkMapFromFibration(named.map, domain, codomain));
    } catch (const std::invalid_argument& error) {
        rejectShape(context, error);
    }
}

void loadNetworkMaps(SpecFile& spec, const json& section) {
    requireObject(section, "\"network_maps\"");
    for (const auto& [name, body] : section.items()) {
        const std::string context = "network map \"" + name + "\"";
        requireObject(body, context);
        if (body.contains("from_fibration")) {
            loadNetworkMapFromFibration(spec, name, body["from_fibration"], context);
            continue;
        }
        const std::string sourceName =
            requireString(requireMember(body, "source", context), context + ".source");
        const std::string targetName =
            requireString(requireMember(body, "target", context), context + ".target");
        const network::Network& source = lookup(spec.networks, sourceName, "network");
        const network::Network& target = lookup(spec.networks, targetName, "network");
        auto indexMap = indexList(requireMember(body, "index_map", context), context + ".index_map");
        const json& componentSection =
            requireArray(requireMember(body, "components", context), context + ".components");
        if (indexMap.size() != target.nodes().size() ||
            componentSection.size() != target.nodes().size()) {
            throw DimensionError(context + ": index_map and components must list one entry per node of \"" +
                                 targetName + "\"");
        }
        std::vector<spaces::SubmersionMap> components;
        for (std::size_t x = 0; x < componentSection.size(); ++x) {
            const std::string slot = context + ".components[" + std::to_string(x) + "]";
            const int sourceNode = indexMap[x];
            if (sourceNode < 0 || sourceNode >= static_cast<int>(source.nodes().size())) {
                throw DimensionError(context + ".index_map[" + std::to_string(x) + "] = " +
                                     std::to_string(sourceNode) + " is out of range for network \"" +
                                     sourceName + "\"");
            }
            try {
                components.push_back(buildSubmersionMap(source.nodes()[static_cast<std::size_t>(sourceNode)],
                                                        target.nodes()[x], componentSection[x], slot));
            } catch (const std::invalid_argument& error) {
                rejectShape(slot, error);
            }
        }
        try {
            spaces::SubmersionMap carrierMap =
                buildSubmersionMap(source.carrier(), target.carrier(),
                                   requireMember(body, "carrier_map", context), context + ".carrier_map");
            spec.networkMaps.emplace(name, network::NetworkMap(source, target, std::move(indexMap),
                                                               std::move(components),
                                                               std::move(carrierMap)));
        } catch (const std::invalid_argument& error) {
            rejectShape(context, error);
        }
    }
}

void loadMonitors(SpecFile& spec, const json& section) {
    requireObject(section, "\"monitors\"");
    for (const auto& [name, body] : section.items()) {
        const std::string context = "monitor \"" + name + "\"";
        requireObject(body, context);
        NamedMonitor named{requireString(requireMember(body, "on", context), context + ".on"),
                           sim::Monitor({expr::Expr::constant(0.0)}, 0.0)};
        const network::Network& net = lookup(spec.networks, named.network, "network");
        auto constraints =
            parseExpressionList(requireMember(body, "constraints", context),
                                net.carrier().stateCoordinates(), context + ".constraints");
        const double tolerance =
            requireNumber(requireMember(body, "tolerance", context), context + ".tolerance");
        try {
            named.monitor = sim::Monitor(std::move(constraints), tolerance);
        } catch (const std::invalid_argument& error) {
            rejectShape(context, error);
        }
        spec.monitors.emplace(name, std::move(named));
    }
}

void loadRunParameters(SpecFile& spec, const json& section) {
    requireObject(section, "\"run\"");
    for (const auto& [key, value] : section.items()) {
        const std::string context = "run." + key;
        if (key == "samples") {
            if (!value.is_number_integer()) {
                throw SpecParseError(context + " must be an integer");
            }
            spec.run.samples = value.get<int>();
        } else if (key == "tol") {
            spec.run.tolerance = requireNumber(value, context);
        } else if (key == "dt") {
            spec.run.dt = requireNumber(value, context);
        } else if (key == "t1") {
            spec.run.t1 = requireNumber(value, context);
        } else if (key == "seed") {
            if (!value.is_number_integer()) {
                throw SpecParseError(context + " must be an integer");
            }
            spec.run.seed = value.get<std::uint64_t>();
        } else {
            throw SpecParseError("unknown run parameter \"" + key + "\"");
        }
    }
}

}  // namespace

SpecFile SpecFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw SpecParseError("cannot open spec file \"" + path + "\"");
    }
    json document;
    try {
        document = json::parse(in);
    } catch (const json::parse_error& error) {
        throw SpecParseError(std::string("spec file is not valid JSON: ") + error.what());
    }
    if (!document.is_object()) {
        throw SpecParseError("the top level of a spec file must be an object");
    }

    static const std::set<std::string> knownSections = {
        "spaces",        "submersions",      "systems",       "graphs",  "graph_maps",
        "manifold_networks", "networks",     "network_maps",  "monitors", "run",
        "compose",       "check_fibration",  "enum_fibrations", "from_graph", "verify_map",
        "simulate",      "linrel"};
    for (const auto& [key, value] : document.items()) {
        (void)value;
        if (!knownSections.contains(key)) {
            throw SpecParseError("unknown section \"" + key + "\"");
        }
    }

    SpecFile spec;
    spec.tasks = document;
    if (document.contains("spaces")) loadSpaces(spec, document["spaces"]);
    if (document.contains("submersions")) loadSubmersions(spec, document["submersions"]);
    if (document.contains("graphs")) loadGraphs(spec, document["graphs"]);
    if (document.contains("graph_maps")) loadGraphMaps(spec, document["graph_maps"]);
    if (document.contains("manifold_networks")) loadManifoldNetworks(spec, document["manifold_networks"]);
    if (document.contains("networks")) loadNetworks(spec, document["networks"]);
    if (document.contains("systems")) loadSystems(spec, document["systems"]);
    if (document.contains("network_maps")) loadNetworkMaps(spec, document["network_maps"]);
    if (document.contains("monitors")) loadMonitors(spec, document["monitors"]);
    if (document.contains("run")) loadRunParameters(spec, document["run"]);
    return spec;
}

}  // namespace opennet::cli
