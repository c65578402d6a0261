#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "opennet/expr.hpp"
#include "opennet/opensys.hpp"
#include "opennet/spaces.hpp"

namespace opennet::sim {

class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Uniformly sampled solution curve; every stored state is finite.
struct Trajectory {
    std::vector<std::string> coordinates;        // state coordinate names
    std::vector<double> times;
    std::vector<std::vector<double>> states;     // one vector per time
};

// Constraint expressions over state coordinates whose common zero set is
// the monitored submanifold, with the tolerance the run compares against.
class Monitor {
public:
    Monitor(std::vector<expr::Expr> constraints, double tolerance);

    const std::vector<expr::Expr>& constraints() const { return constraints_; }
    double tolerance() const { return tolerance_; }

private:
    std::vector<expr::Expr> constraints_;
    double tolerance_;
};

// Classical fixed-step fourth-order Runge-Kutta on [0, t1]. The system must
// be closed (no input coordinates) and t1 an integer multiple of dt; the
// integration aborts with IntegrationError when a state stops being finite.
Trajectory integrate(const opensys::OpenSystem& system,
                     std::span<const double> initialState, double t1, double dt);

// Largest absolute constraint value over the whole trajectory.
double monitorInvariance(const Trajectory& trajectory, const Monitor& monitor);

// Applies the map's state components to every sample of the trajectory.
Trajectory pushTrajectory(const spaces::SubmersionMap& map,
                          const Trajectory& trajectory);

// Header of coordinate names, then one comma-separated state row per step.
void writeCsv(const Trajectory& trajectory, std::ostream& out);

}  // namespace opennet::sim
