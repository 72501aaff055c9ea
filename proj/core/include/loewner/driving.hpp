#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace loewner {

// Discretized driving function on uniform capacity steps.  values holds V
// at the step boundaries, so values.size() == n_steps + 1 and values[0] = 0.
struct DrivingPath {
    double dt = 0.0;
    std::vector<double> values;
    double kappa = 0.0;
    std::uint64_t seed = 0;
    std::string generator_id;

    std::size_t n_steps() const { return values.empty() ? 0 : values.size() - 1; }
    double total_time() const { return dt * static_cast<double>(n_steps()); }
};

// Delta(t,s) = sup_{0<=r<=s^2} sqrt(s^{-2} (V_{t+r}-V_t)^2 + 4).
struct ContinuityStat {
    double t = 0.0;
    double s = 0.0;
    double delta = 2.0;
};

// Brownian driving under the convention a = 2/kappa with V a standard
// Brownian motion.  Deterministic given (seed, generator_id).
DrivingPath sample_brownian(double kappa, std::size_t n_steps, double dt, std::uint64_t seed);

// Brownian-bridge midpoint refinement: halves the step 'levels' times,
// keeping the original boundary values and drawing midpoints from the
// bridge law.  Only valid for Brownian paths.
DrivingPath refine_dyadic(const DrivingPath& path, int levels);

ContinuityStat modulus_delta(const DrivingPath& path, double t, double s);

enum class DriverKind { Constant, Linear, Sine };

struct DriverParams {
    double value = 0.0;      // constant level / linear slope / sine amplitude
    double frequency = 1.0;  // sine only: V_t = value * sin(frequency * t)
    std::size_t n_steps = 1;
    double dt = 1.0;
};

DrivingPath deterministic_driver(DriverKind kind, const DriverParams& params);

// CSV serialization: '#' header line with a JSON object
// {kappa, dt, seed, generator_id}, then "t,v" rows.
void write_path_csv(const DrivingPath& path, const std::string& file);
DrivingPath read_path_csv(const std::string& file);

} // namespace loewner
