#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "opennet/dispatch.hpp"
#include "opennet/specfile.hpp"

namespace {

std::string joinedCommandNames() {
    std::string out;
    for (const auto& name : opennet::cli::commandNames()) {
        if (!out.empty()) {
            out += ", ";
        }
        out += name;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace opennet::cli;

    CLI::App app{"Compose, verify, and simulate open systems wired over networks"};
    app.name("opennet");

    std::string command;
    std::string specPath;
    app.add_option("command", command, "One of: " + joinedCommandNames())->required();
    app.add_option("spec", specPath, "Path to a JSON spec file")->required();

    RunOverrides overrides;
    int samples = 0;
    double tolerance = 0.0;
    double dt = 0.0;
    double t1 = 0.0;
    std::uint64_t seed = 0;
    std::string outPath;
    bool jsonOutput = false;
    auto* samplesOption = app.add_option("--samples", samples, "Sample count for numeric checks");
    auto* tolOption = app.add_option("--tol", tolerance, "Residual tolerance for numeric checks");
    auto* dtOption = app.add_option("--dt", dt, "Integration step size");
    auto* t1Option = app.add_option("--t1", t1, "Integration horizon");
    auto* seedOption = app.add_option("--seed", seed, "Seed for sampled checks");
    auto* outOption = app.add_option("--out", outPath, "Write the simulated trajectory as CSV");
    app.add_flag("--json", jsonOutput, "Print the machine-readable JSON report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& help) {
        return app.exit(help);
    } catch (const CLI::ParseError& error) {
        app.exit(error);
        return kExitUsage;
    }

    if (*samplesOption) overrides.samples = samples;
    if (*tolOption) overrides.tolerance = tolerance;
    if (*dtOption) overrides.dt = dt;
    if (*t1Option) overrides.t1 = t1;
    if (*seedOption) overrides.seed = seed;
    if (*outOption) overrides.outPath = outPath;

    try {
        const SpecFile spec = SpecFile::load(specPath);
        const DispatchResult result = dispatch(command, spec, overrides);
        if (jsonOutput) {
            std::cout << result.report.dump(2) << "\n";
        } else {
            std::cout << renderReport(result.report);
        }
        return result.exitCode;
    } catch (const SpecParseError& error) {
        std::cerr << "opennet: " << error.what() << "\n";
        return kExitParseError;
    } catch (const DanglingReferenceError& error) {
        std::cerr << "opennet: " << error.what() << "\n";
        return kExitDanglingReference;
    } catch (const DimensionError& error) {
        std::cerr << "opennet: " << error.what() << "\n";
        return kExitDimensionError;
    } catch (const std::exception& error) {
        std::cerr << "opennet: " << error.what() << "\n";
        return kExitPreconditionFailure;
    }
}
