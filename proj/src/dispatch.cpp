#include "opennet/dispatch.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "opennet/linrel.hpp"
#include "opennet/sim.hpp"

namespace opennet::cli {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct EffectiveRun {
    int samples;
    double tolerance;
    double dt;
    double t1;
    std::uint64_t seed;
};

EffectiveRun effectiveRun(const SpecFile& spec, const RunOverrides& overrides) {
    return {overrides.samples.value_or(spec.run.samples),
            overrides.tolerance.value_or(spec.run.tolerance),
            overrides.dt.value_or(spec.run.dt),
            overrides.t1.value_or(spec.run.t1),
            overrides.seed.value_or(spec.run.seed)};
}

ordered_json baseReport(const std::string& command, const EffectiveRun& run) {
    ordered_json report;
    report["tool"] = kToolName;
    report["version"] = kToolVersion;
    report["command"] = command;
    report["parameters"]["samples"] = run.samples;
    report["parameters"]["tol"] = run.tolerance;
    report["parameters"]["dt"] = run.dt;
    report["parameters"]["t1"] = run.t1;
    report["parameters"]["seed"] = run.seed;
    return report;
}

const json& requireTask(const SpecFile& spec, const char* section) {
    auto found = spec.tasks.find(section);
    if (found == spec.tasks.end()) {
        throw SpecParseError(std::string("the spec file has no \"") + section + "\" section");
    }
    if (!found->is_object()) {
        throw SpecParseError(std::string("\"") + section + "\" must be a JSON object");
    }
    return *found;
}

const json& member(const json& object, const char* key, const std::string& context) {
    auto found = object.find(key);
    if (found == object.end()) {
        throw SpecParseError(context + " is missing the required key \"" + key + "\"");
    }
    return *found;
}

std::string asString(const json& value, const std::string& context) {
    if (!value.is_string()) {
        throw SpecParseError(context + " must be a string");
    }
    return value.get<std::string>();
}

std::vector<std::string> asStringList(const json& value, const std::string& context) {
    if (!value.is_array()) {
        throw SpecParseError(context + " must be a JSON array");
    }
    std::vector<std::string> out;
    out.reserve(value.size());
    for (std::size_t i = 0; i < value.size(); ++i) {
        out.push_back(asString(value[i], context + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::vector<double> asNumberList(const json& value, const std::string& context) {
    if (!value.is_array()) {
        throw SpecParseError(context + " must be a JSON array");
    }
    std::vector<double> out;
    out.reserve(value.size());
    for (std::size_t i = 0; i < value.size(); ++i) {
        if (!value[i].is_number()) {
            throw SpecParseError(context + "[" + std::to_string(i) + "] must be a number");
        }
        out.push_back(value[i].get<double>());
    }
    return out;
}

std::vector<int> asIndexList(const json& value, const std::string& context) {
    if (!value.is_array()) {
        throw SpecParseError(context + " must be a JSON array");
    }
    std::vector<int> out;
    out.reserve(value.size());
    for (std::size_t i = 0; i < value.size(); ++i) {
        if (!value[i].is_number_integer()) {
            throw SpecParseError(context + "[" + std::to_string(i) + "] must be an integer");
        }
        out.push_back(value[i].get<int>());
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

std::vector<opensys::OpenSystem> lookupSystems(const SpecFile& spec,
                                               const std::vector<std::string>& names) {
    std::vector<opensys::OpenSystem> systems;
    systems.reserve(names.size());
    for (const auto& name : names) {
        systems.push_back(lookup(spec.systems, name, "system"));
    }
    return systems;
}

ordered_json describeField(const std::vector<expr::Expr>& field) {
    ordered_json out = ordered_json::array();
    for (const auto& component : field) {
        out.push_back(component.str());
    }
    return out;
}

// --- validate ---------------------------------------------------------------

DispatchResult runValidate(const SpecFile& spec, const EffectiveRun& run) {
    DispatchResult result;
    result.report = baseReport("validate", run);
    ordered_json& entities = result.report["entities"];
    entities["spaces"] = spec.spaces.size();
    entities["submersions"] = spec.submersions.size();
    entities["systems"] = spec.systems.size();
    entities["graphs"] = spec.graphs.size();
    entities["graph_maps"] = spec.graphMaps.size();
    entities["manifold_networks"] = spec.manifoldNetworks.size();
    entities["networks"] = spec.networks.size();
    entities["network_maps"] = spec.networkMaps.size();
    entities["monitors"] = spec.monitors.size();
    ordered_json taskSections = ordered_json::array();
    for (const char* section : {"compose", "check_fibration", "enum_fibrations", "from_graph",
                                "verify_map", "simulate", "linrel"}) {
        if (spec.tasks.contains(section)) {
            taskSections.push_back(section);
        }
    }
    result.report["tasks"] = std::move(taskSections);
    return result;
}

// --- compose ----------------------------------------------------------------

DispatchResult runCompose(const SpecFile& spec, const EffectiveRun& run) {
    const json& task = requireTask(spec, "compose");
    const std::string networkName = asString(member(task, "network", "\"compose\""), "compose.network");
    const auto systemNames = asStringList(member(task, "systems", "\"compose\""), "compose.systems");
    const network::Network& net = lookup(spec.networks, networkName, "network");
    const auto systems = lookupSystems(spec, systemNames);

    DispatchResult result;
    result.report = baseReport("compose", run);
    result.report["network"] = networkName;
    result.report["systems"] = systemNames;
    try {
        const opensys::OpenSystem composed = network::compose(net, systems);
        result.report["state_coordinates"] = composed.on().stateCoordinates();
        result.report["input_coordinates"] = composed.on().inputCoordinates();
        result.report["field"] = describeField(composed.field());
    } catch (const std::invalid_argument& error) {
        throw DimensionError(std::string("compose: ") + error.what());
    }
    return result;
}

// --- check-fibration --------------------------------------------------------

DispatchResult runCheckFibration(const SpecFile& spec, const EffectiveRun& run) {
    const json& task = requireTask(spec, "check_fibration");
    const std::string mapName =
        asString(member(task, "map", "\"check_fibration\""), "check_fibration.map");
    const NamedGraphMap& named = lookup(spec.graphMaps, mapName, "graph map");
    const graph::Graph& from = lookup(spec.graphs, named.from, "graph");
    const graph::Graph& to = lookup(spec.graphs, named.to, "graph");

    DispatchResult result;
    result.report = baseReport("check-fibration", run);
    result.report["map"] = mapName;
    result.report["from"] = named.from;
    result.report["to"] = named.to;
    const auto failure = graph::fibrationFailure(named.map, from, to);
    result.report["fibration"] = !failure.has_value();
    if (failure) {
        result.report["failure"]["vertex"] = failure->vertex;
        result.report["failure"]["reason"] = failure->reason;
        result.exitCode = kExitVerdictFalse;
    }
    return result;
}

// --- enum-fibrations --------------------------------------------------------

DispatchResult runEnumFibrations(const SpecFile& spec, const EffectiveRun& run) {
    const json& task = requireTask(spec, "enum_fibrations");
    const std::string fromName =
        asString(member(task, "from", "\"enum_fibrations\""), "enum_fibrations.from");
    const std::string toName = asString(member(task, "to", "\"enum_fibrations\""), "enum_fibrations.to");
    const graph::Graph& from = lookup(spec.graphs, fromName, "graph");
    const graph::Graph& to = lookup(spec.graphs, toName, "graph");

    DispatchResult result;
    result.report = baseReport("enum-fibrations", run);
    result.report["from"] = fromName;
    result.report["to"] = toName;
    const auto fibrations = graph::enumerateFibrations(from, to);
    result.report["count"] = fibrations.size();
    ordered_json list = ordered_json::array();
    for (const auto& fibration : fibrations) {
        ordered_json entry;
        entry["vertex_map"] = fibration.vertexMap;
        entry["edge_map"] = fibration.edgeMap;
        list.push_back(std::move(entry));
    }
    result.report["fibrations"] = std::move(list);
    return result;
}

// --- from-graph -------------------------------------------------------------

DispatchResult runFromGraph(const SpecFile& spec, const EffectiveRun& run) {
    const json& task = requireTask(spec, "from_graph");
    const std::string networkName =
        asString(member(task, "network", "\"from_graph\""), "from_graph.network");
    const network::ManifoldNetwork& mn =
        lookup(spec.manifoldNetworks, networkName, "manifold network");

    DispatchResult result;
    result.report = baseReport("from-graph", run);
    result.report["manifold_network"] = networkName;
    try {
        const network::Network net = network::networkFromGraph(mn);
        ordered_json nodes = ordered_json::array();
        for (const auto& node : net.nodes()) {
            ordered_json entry;
            entry["states"] = node.stateCoordinates();
            entry["inputs"] = node.inputCoordinates();
            nodes.push_back(std::move(entry));
        }
        result.report["nodes"] = std::move(nodes);
        result.report["carrier_states"] = net.carrier().stateCoordinates();
        result.report["wiring"] = describeField(net.wiring().map().totalComponents());
    } catch (const std::invalid_argument& error) {
        throw DimensionError(std::string("from-graph: ") + error.what());
    }
    return result;
}

// --- verify-map -------------------------------------------------------------

DispatchResult runVerifyMap(const SpecFile& spec, const EffectiveRun& run) {
    const json& task = requireTask(spec, "verify_map");
    const std::string mapName = asString(member(task, "map", "\"verify_map\""), "verify_map.map");
    const auto sourceNames =
        asStringList(member(task, "source_systems", "\"verify_map\""), "verify_map.source_systems");
    const auto targetNames =
        asStringList(member(task, "target_systems", "\"verify_map\""), "verify_map.target_systems");
    const network::NetworkMap& map = lookup(spec.networkMaps, mapName, "network map");
    const auto sourceSystems = lookupSystems(spec, sourceNames);
    const auto targetSystems = lookupSystems(spec, targetNames);

    DispatchResult result;
    result.report = baseReport("verify-map", run);
    result.report["map"] = mapName;
    result.report["source_systems"] = sourceNames;
    result.report["target_systems"] = targetNames;
    try {
        const opensys::RelatednessReport related = network::verifyNetworkMap(
            map, sourceSystems, targetSystems, run.samples, run.tolerance, run.seed);
        result.report["max_residual"] = related.maxResidual;
        result.report["samples"] = related.samples;
        result.report["skipped"] = related.skipped;
        result.report["verdict"] = related.verdict;
        result.exitCode = related.verdict ? kExitSuccess : kExitVerdictFalse;
    } catch (const network::HypothesisError& error) {
        result.report["hypothesis_error"] = error.what();
        result.report["verdict"] = false;
        result.exitCode = kExitPreconditionFailure;
    } catch (const std::invalid_argument& error) {
        throw DimensionError(std::string("verify-map: ") + error.what());
    }
    return result;
}

// --- simulate ---------------------------------------------------------------

DispatchResult runSimulate(const SpecFile& spec, const EffectiveRun& run,
                           const RunOverrides& overrides) {
    const json& task = requireTask(spec, "simulate");
    const std::string networkName =
        asString(member(task, "network", "\"simulate\""), "simulate.network");
    const auto systemNames = asStringList(member(task, "systems", "\"simulate\""), "simulate.systems");
    const auto initial = asNumberList(member(task, "initial", "\"simulate\""), "simulate.initial");
    std::vector<std::string> monitorNames;
    if (task.contains("monitors")) {
        monitorNames = asStringList(task["monitors"], "simulate.monitors");
    }
    const network::Network& net = lookup(spec.networks, networkName, "network");
    const auto systems = lookupSystems(spec, systemNames);
    std::vector<const NamedMonitor*> monitors;
    for (const auto& name : monitorNames) {
        const NamedMonitor& named = lookup(spec.monitors, name, "monitor");
        if (named.network != networkName) {
            throw DimensionError("monitor \"" + name + "\" watches network \"" + named.network +
                                 "\", not \"" + networkName + "\"");
        }
        monitors.push_back(&named);
    }
    if (initial.size() != net.carrier().stateCoordinates().size()) {
        throw DimensionError("simulate.initial lists " + std::to_string(initial.size()) +
                             " values for the " +
                             std::to_string(net.carrier().stateCoordinates().size()) +
                             "-dimensional carrier of \"" + networkName + "\"");
    }

    DispatchResult result;
    result.report = baseReport("simulate", run);
    result.report["network"] = networkName;
    result.report["systems"] = systemNames;
    result.report["initial"] = initial;

    std::optional<opensys::OpenSystem> composed;
    try {
        composed.emplace(network::compose(net, systems));
    } catch (const std::invalid_argument& error) {
        throw DimensionError(std::string("simulate: ") + error.what());
    }

    sim::Trajectory trajectory;
    try {
        trajectory = sim::integrate(*composed, initial, run.t1, run.dt);
    } catch (const sim::IntegrationError& error) {
        result.report["integration_error"] = error.what();
        result.exitCode = kExitPreconditionFailure;
        return result;
    } catch (const std::invalid_argument& error) {
        result.report["precondition_error"] = error.what();
        result.exitCode = kExitPreconditionFailure;
        return result;
    }

    result.report["state_coordinates"] = trajectory.coordinates;
    result.report["steps"] = trajectory.times.size() - 1;
    result.report["final_time"] = trajectory.times.back();
    result.report["final_state"] = trajectory.states.back();

    bool allWithin = true;
    ordered_json monitorReports = ordered_json::array();
    for (std::size_t i = 0; i < monitors.size(); ++i) {
        const double worst = sim::monitorInvariance(trajectory, monitors[i]->monitor);
        const bool within = worst <= monitors[i]->monitor.tolerance();
        allWithin = allWithin && within;
        ordered_json entry;
        entry["name"] = monitorNames[i];
        entry["max_violation"] = worst;
        entry["tolerance"] = monitors[i]->monitor.tolerance();
        entry["within"] = within;
        monitorReports.push_back(std::move(entry));
    }
    result.report["monitors"] = std::move(monitorReports);

    if (overrides.outPath) {
        std::ofstream out(*overrides.outPath);
        if (!out) {
            result.report["csv_error"] = "cannot open \"" + *overrides.outPath + "\" for writing";
            result.exitCode = kExitPreconditionFailure;
            return result;
        }
        sim::writeCsv(trajectory, out);
        result.report["csv"] = *overrides.outPath;
    }

    result.exitCode = allWithin ? kExitSuccess : kExitVerdictFalse;
    return result;
}

// --- linrel -----------------------------------------------------------------

Eigen::MatrixXd matrixFromRows(const json& value, const std::string& context) {
    if (!value.is_array()) {
        throw SpecParseError(context + " must be an array of rows");
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < value.size(); ++i) {
        rows.push_back(asNumberList(value[i], context + "[" + std::to_string(i) + "]"));
        if (rows.back().size() != rows.front().size()) {
            throw SpecParseError(context + " has rows of different lengths");
        }
    }
    const Eigen::Index rowCount = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index colCount = rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size());
    Eigen::MatrixXd matrix(rowCount, colCount);
    for (Eigen::Index r = 0; r < rowCount; ++r) {
        for (Eigen::Index c = 0; c < colCount; ++c) {
            matrix(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        }
    }
    return matrix;
}

int asDimension(const json& value, const std::string& context) {
    if (!value.is_number_integer() || value.get<int>() < 0) {
        throw SpecParseError(context + " must be a non-negative integer");
    }
    return value.get<int>();
}

linrel::LinRelation buildRelation(const json& body, const std::string& context) {
    if (!body.is_object()) {
        throw SpecParseError(context + " must be a JSON object");
    }
    try {
        if (body.contains("graph")) {
            return linrel::graphOf(matrixFromRows(body["graph"], context + ".graph"));
        }
        if (body.contains("span")) {
            const json& spanBody = body["span"];
            if (!spanBody.is_object()) {
                throw SpecParseError(context + ".span must be a JSON object");
            }
            const int targetDim =
                asDimension(member(spanBody, "target_dim", context + ".span"), context + ".span.target_dim");
            const int sourceDim =
                asDimension(member(spanBody, "source_dim", context + ".span"), context + ".span.source_dim");
            const json& columns = member(spanBody, "columns", context + ".span");
            if (!columns.is_array()) {
                throw SpecParseError(context + ".span.columns must be a JSON array");
            }
            Eigen::MatrixXd span(targetDim + sourceDim, static_cast<Eigen::Index>(columns.size()));
            for (std::size_t i = 0; i < columns.size(); ++i) {
                const auto column =
                    asNumberList(columns[i], context + ".span.columns[" + std::to_string(i) + "]");
                if (static_cast<int>(column.size()) != targetDim + sourceDim) {
                    throw DimensionError(context + ".span.columns[" + std::to_string(i) + "] has " +
                                         std::to_string(column.size()) + " entries, expected " +
                                         std::to_string(targetDim + sourceDim));
                }
                for (int r = 0; r < targetDim + sourceDim; ++r) {
                    span(r, static_cast<Eigen::Index>(i)) = column[static_cast<std::size_t>(r)];
                }
            }
            return linrel::LinRelation(targetDim, sourceDim, span);
        }
        if (body.contains("full")) {
            const auto dims = asIndexList(body["full"], context + ".full");
            if (dims.size() != 2) {
                throw SpecParseError(context + ".full must be a [target_dim, source_dim] pair");
            }
            return linrel::LinRelation::full(dims[0], dims[1]);
        }
        if (body.contains("zero")) {
            const auto dims = asIndexList(body["zero"], context + ".zero");
            if (dims.size() != 2) {
                throw SpecParseError(context + ".zero must be a [target_dim, source_dim] pair");
            }
            return linrel::LinRelation::zeroSubspace(dims[0], dims[1]);
        }
        if (body.contains("identity")) {
            const int n = asDimension(body["identity"], context + ".identity");
            return linrel::graphOf(Eigen::MatrixXd::Identity(n, n));
        }
    } catch (const std::invalid_argument& error) {
        throw DimensionError(context + ": " + error.what());
    }
    throw SpecParseError(context + " must define one of graph, span, full, zero, identity");
}

DispatchResult runLinRel(const SpecFile& spec, const EffectiveRun& run) {
    const json& task = requireTask(spec, "linrel");
    DispatchResult result;
    result.report = baseReport("linrel", run);

    std::map<std::string, linrel::LinRelation> relations;
    if (task.contains("relations")) {
        const json& section = task["relations"];
        if (!section.is_object()) {
            throw SpecParseError("linrel.relations must be a JSON object");
        }
        for (const auto& [name, body] : section.items()) {
            relations.emplace(name, buildRelation(body, "relation \"" + name + "\""));
        }
    }
    ordered_json relationReports;
    for (const auto& [name, relation] : relations) {
        ordered_json entry;
        entry["target_dim"] = relation.dimW();
        entry["source_dim"] = relation.dimV();
        entry["subspace_dim"] = relation.subspaceDim();
        relationReports[name] = std::move(entry);
    }
    result.report["relations"] = std::move(relationReports);

    bool allVerdictsTrue = true;
    ordered_json operationReports = ordered_json::array();
    if (task.contains("operations")) {
        const json& operations = task["operations"];
        if (!operations.is_array()) {
            throw SpecParseError("linrel.operations must be a JSON array");
        }
        for (std::size_t i = 0; i < operations.size(); ++i) {
            const std::string context = "linrel.operations[" + std::to_string(i) + "]";
            const json& operation = operations[i];
            if (!operation.is_object()) {
                throw SpecParseError(context + " must be a JSON object");
            }
            const std::string op = asString(member(operation, "op", context), context + ".op");
            ordered_json entry;
            entry["op"] = op;
            try {
                if (op == "compose") {
                    const std::string outerName =
                        asString(member(operation, "outer", context), context + ".outer");
                    const std::string innerName =
                        asString(member(operation, "inner", context), context + ".inner");
                    const std::string resultName =
                        asString(member(operation, "as", context), context + ".as");
                    const linrel::LinRelation composed =
                        linrel::composeRel(lookup(relations, outerName, "relation"),
                                           lookup(relations, innerName, "relation"));
                    entry["outer"] = outerName;
                    entry["inner"] = innerName;
                    entry["as"] = resultName;
                    entry["subspace_dim"] = composed.subspaceDim();
                    relations.insert_or_assign(resultName, composed);
                } else if (op == "blockwise") {
                    const auto indexMap =
                        asIndexList(member(operation, "index_map", context), context + ".index_map");
                    const auto componentNames =
                        asStringList(member(operation, "components", context), context + ".components");
                    const auto sourceDims =
                        asIndexList(member(operation, "source_dims", context), context + ".source_dims");
                    const std::string resultName =
                        asString(member(operation, "as", context), context + ".as");
                    std::vector<linrel::LinRelation> components;
                    for (const auto& componentName : componentNames) {
                        components.push_back(lookup(relations, componentName, "relation"));
                    }
                    const linrel::LinRelation blocked =
                        linrel::blockwiseRelation(indexMap, components, sourceDims);
                    entry["as"] = resultName;
                    entry["subspace_dim"] = blocked.subspaceDim();
                    relations.insert_or_assign(resultName, blocked);
                } else if (op == "contains") {
                    const std::string outerName =
                        asString(member(operation, "outer", context), context + ".outer");
                    const std::string innerName =
                        asString(member(operation, "inner", context), context + ".inner");
                    const bool verdict = linrel::contains(lookup(relations, outerName, "relation"),
                                                          lookup(relations, innerName, "relation"));
                    entry["outer"] = outerName;
                    entry["inner"] = innerName;
                    entry["verdict"] = verdict;
                    allVerdictsTrue = allVerdictsTrue && verdict;
                } else if (op == "equal") {
                    const std::string leftName =
                        asString(member(operation, "left", context), context + ".left");
                    const std::string rightName =
                        asString(member(operation, "right", context), context + ".right");
                    const bool verdict = linrel::equal(lookup(relations, leftName, "relation"),
                                                       lookup(relations, rightName, "relation"));
                    entry["left"] = leftName;
                    entry["right"] = rightName;
                    entry["verdict"] = verdict;
                    allVerdictsTrue = allVerdictsTrue && verdict;
                } else {
                    throw SpecParseError(context + ".op \"" + op + "\" is not a known operation");
                }
            } catch (const std::invalid_argument& error) {
                throw DimensionError(context + ": " + error.what());
            }
            operationReports.push_back(std::move(entry));
        }
    }
    result.report["operations"] = std::move(operationReports);
    result.report["verdict"] = allVerdictsTrue;
    result.exitCode = allVerdictsTrue ? kExitSuccess : kExitVerdictFalse;
    return result;
}

bool allPrimitive(const ordered_json& array) {
    return std::all_of(array.begin(), array.end(),
                       [](const ordered_json& value) { return value.is_primitive(); });
}

void renderEntry(std::ostringstream& out, const std::string& label, const ordered_json& value,
                 int indent) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    if (value.is_object()) {
        out << pad << label << ":\n";
        for (const auto& [key, child] : value.items()) {
            renderEntry(out, key, child, indent + 2);
        }
    } else if (value.is_array() && !allPrimitive(value)) {
        out << pad << label << ":\n";
        for (std::size_t i = 0; i < value.size(); ++i) {
            renderEntry(out, "[" + std::to_string(i) + "]", value[i], indent + 2);
        }
    } else {
        out << pad << label << ": " << value.dump() << "\n";
    }
}

}  // namespace

const std::vector<std::string>& commandNames() {
    static const std::vector<std::string> names = {"validate",   "compose",     "check-fibration",
                                                   "enum-fibrations", "from-graph", "verify-map",
                                                   "simulate",   "linrel"};
    return names;
}

DispatchResult dispatch(const std::string& command, const SpecFile& spec,
                        const RunOverrides& overrides) {
    const EffectiveRun run = effectiveRun(spec, overrides);
    if (command == "validate") return runValidate(spec, run);
    if (command == "compose") return runCompose(spec, run);
    if (command == "check-fibration") return runCheckFibration(spec, run);
    if (command == "enum-fibrations") return runEnumFibrations(spec, run);
    if (command == "from-graph") return runFromGraph(spec, run);
    if (command == "verify-map") return runVerifyMap(spec, run);
    if (command == "simulate") return runSimulate(spec, run, overrides);
    if (command == "linrel") return runLinRel(spec, run);

    DispatchResult result;
    result.report = baseReport(command, run);
    result.report["error"] = "unknown command \"" + command + "\"";
    result.exitCode = kExitUsage;
    return result;
}

std::string renderReport(const nlohmann::ordered_json& report) {
    std::ostringstream out;
    for (const auto& [key, value] : report.items()) {
        renderEntry(out, key, value, 0);
    }
    return out.str();
}

}  // namespace opennet::cli
