#include "opennet/sim.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

namespace opennet::sim {

namespace {

std::string formatValue(double value) {
    char buffer[32];
    const auto result =
        std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

void requireFinite(const std::vector<double>& state, double time) {
    for (double x : state) {
        if (!std::isfinite(x)) {
            std::ostringstream os;
            os << "state left the finite range at t = " << time;
            throw IntegrationError(os.str());
        }
    }
}

}  // namespace

Monitor::Monitor(std::vector<expr::Expr> constraints, double tolerance)
    : constraints_(std::move(constraints)), tolerance_(tolerance) {
    if (constraints_.empty()) {
        throw std::invalid_argument("monitor needs at least one constraint");
    }
    for (const expr::Expr& c : constraints_) {
        if (!c.valid()) {
            throw std::invalid_argument("monitor contains an empty constraint");
        }
    }
    if (!(tolerance_ >= 0.0)) {
        throw std::invalid_argument("monitor tolerance must be nonnegative");
    }
}

Trajectory integrate(const opensys::OpenSystem& system,
                     std::span<const double> initialState, double t1, double dt) {
    if (!system.isClosed()) {
        throw std::invalid_argument(
            "integration requires a closed system; wire or fix the inputs first");
    }
    const int dim = system.on().stateDim();
    if (static_cast<int>(initialState.size()) != dim) {
        throw std::invalid_argument("initial state has the wrong dimension");
    }
    if (!(dt > 0.0)) {
        throw std::invalid_argument("step size must be positive");
    }
    const long long stepCount = std::llround(t1 / dt);
    if (stepCount < 0 || std::abs(static_cast<double>(stepCount) * dt - t1) >
                             1e-6 * dt) {
        throw std::invalid_argument(
            "the horizon must be a whole number of steps");
    }

    const expr::VarTable table(system.on().totalCoordinates());
    auto velocity = [&](const std::vector<double>& state) {
        std::vector<double> out(static_cast<std::size_t>(dim));
        for (int i = 0; i < dim; ++i) {
            out[static_cast<std::size_t>(i)] =
                system.field()[static_cast<std::size_t>(i)].eval(table, state);
        }
        return out;
    };

    Trajectory trajectory;
    trajectory.coordinates = system.on().stateCoordinates();
    trajectory.times.reserve(static_cast<std::size_t>(stepCount) + 1);
    trajectory.states.reserve(static_cast<std::size_t>(stepCount) + 1);

    std::vector<double> state(initialState.begin(), initialState.end());
    requireFinite(state, 0.0);
    trajectory.times.push_back(0.0);
    trajectory.states.push_back(state);

    std::vector<double> staged(static_cast<std::size_t>(dim));
    for (long long step = 0; step < stepCount; ++step) {
        const double time = static_cast<double>(step) * dt;
        try {
            const std::vector<double> k1 = velocity(state);
            for (int i = 0; i < dim; ++i) {
                staged[static_cast<std::size_t>(i)] =
                    state[static_cast<std::size_t>(i)] +
                    0.5 * dt * k1[static_cast<std::size_t>(i)];
            }
            const std::vector<double> k2 = velocity(staged);
            for (int i = 0; i < dim; ++i) {
                staged[static_cast<std::size_t>(i)] =
                    state[static_cast<std::size_t>(i)] +
                    0.5 * dt * k2[static_cast<std::size_t>(i)];
            }
            const std::vector<double> k3 = velocity(staged);
            for (int i = 0; i < dim; ++i) {
                staged[static_cast<std::size_t>(i)] =
                    state[static_cast<std::size_t>(i)] +
                    dt * k3[static_cast<std::size_t>(i)];
            }
            const std::vector<double> k4 = velocity(staged);
            for (int i = 0; i < dim; ++i) {
                state[static_cast<std::size_t>(i)] +=
                    dt / 6.0 *
                    (k1[static_cast<std::size_t>(i)] +
                     2.0 * k2[static_cast<std::size_t>(i)] +
                     2.0 * k3[static_cast<std::size_t>(i)] +
                     k4[static_cast<std::size_t>(i)]);
            }
        } catch (const expr::EvalError& error) {
            std::ostringstream os;
            os << "field evaluation failed at t = " << time << ": " << error.what();
            throw IntegrationError(os.str());
        }
        const double nextTime = static_cast<double>(step + 1) * dt;
        requireFinite(state, nextTime);
        trajectory.times.push_back(nextTime);
        trajectory.states.push_back(state);
    }
    return trajectory;
}

double monitorInvariance(const Trajectory& trajectory, const Monitor& monitor) {
    const expr::VarTable table(trajectory.coordinates);
    double worst = 0.0;
    for (const std::vector<double>& state : trajectory.states) {
        for (const expr::Expr& constraint : monitor.constraints()) {
            worst = std::max(worst, std::abs(constraint.eval(table, state)));
        }
    }
    return worst;
}

Trajectory pushTrajectory(const spaces::SubmersionMap& map,
                          const Trajectory& trajectory) {
    if (map.source().stateDim() !=
        static_cast<int>(trajectory.coordinates.size())) {
        throw std::invalid_argument(
            "the map's source state dimension does not match the trajectory");
    }
    Trajectory out;
    out.coordinates = map.target().stateCoordinates();
    out.times = trajectory.times;
    out.states.reserve(trajectory.states.size());
    for (const std::vector<double>& state : trajectory.states) {
        out.states.push_back(map.applyState(state));
    }
    return out;
}

void writeCsv(const Trajectory& trajectory, std::ostream& out) {
    for (std::size_t i = 0; i < trajectory.coordinates.size(); ++i) {
        if (i > 0) out << ',';
        out << trajectory.coordinates[i];
    }
    out << '\n';
    for (const std::vector<double>& state : trajectory.states) {
        for (std::size_t i = 0; i < state.size(); ++i) {
            if (i > 0) out << ',';
            out << formatValue(state[i]);
        }
        out << '\n';
    }
}

}  // namespace opennet::sim
