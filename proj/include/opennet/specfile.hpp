#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "opennet/graph.hpp"
#include "opennet/network.hpp"
#include "opennet/opensys.hpp"
#include "opennet/sim.hpp"
#include "opennet/spaces.hpp"

namespace opennet::cli {

// Spec-file problems carry distinct exit codes: malformed content (2),
// references to undeclared entities (3), shapes that do not fit (4).
class SpecParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DanglingReferenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunParameters {
    int samples = 200;
    double tolerance = 1e-9;
    double dt = 1e-3;
    double t1 = 1.0;
    std::uint64_t seed = 0;
};

struct NamedGraphMap {
    std::string from;
    std::string to;
    graph::GraphMap map;
};

struct NamedMonitor {
    std::string network;  // whose carrier states the constraints read
    sim::Monitor monitor;
};

// Fully validated object graph of one declarative spec file. Task sections
// (one JSON object per command) stay raw in `tasks` and are resolved when
// the command runs, with the same error taxonomy as loading.
struct SpecFile {
    std::map<std::string, spaces::Space> spaces;
    std::map<std::string, spaces::Submersion> submersions;
    std::map<std::string, opensys::OpenSystem> systems;
    std::map<std::string, graph::Graph> graphs;
    std::map<std::string, NamedGraphMap> graphMaps;
    std::map<std::string, network::ManifoldNetwork> manifoldNetworks;
    std::map<std::string, network::Network> networks;
    std::map<std::string, network::NetworkMap> networkMaps;
    std::map<std::string, NamedMonitor> monitors;
    RunParameters run;
    nlohmann::json tasks;

    static SpecFile load(const std::string& path);
};

}  // namespace opennet::cli
