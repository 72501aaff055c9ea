#include "loewner/driving.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "loewner/io.hpp"
#include "loewner/rng.hpp"

namespace loewner {

DrivingPath sample_brownian(double kappa, std::size_t n_steps, double dt, std::uint64_t seed) {
    if (!(dt > 0.0)) throw std::invalid_argument("sample_brownian: dt must be positive");
    if (!(kappa > 0.0)) throw std::invalid_argument("sample_brownian: kappa must be positive");
    if (n_steps < 1) throw std::invalid_argument("sample_brownian: n_steps must be >= 1");
    DrivingPath path;
    path.dt = dt;
    path.kappa = kappa;
    path.seed = seed;
    path.generator_id = "brownian";
    path.values.resize(n_steps + 1);
    path.values[0] = 0.0;
    CounterRng rng(seed);
    double sd = std::sqrt(dt);
    for (std::size_t k = 0; k < n_steps; ++k)
        path.values[k + 1] = path.values[k] + sd * rng.normal();
    return path;
}

DrivingPath refine_dyadic(const DrivingPath& path, int levels) {
    if (levels < 0) throw std::invalid_argument("refine_dyadic: levels must be >= 0");
    if (levels == 0) return path;
    if (path.generator_id != "brownian")
        throw std::invalid_argument("refine_dyadic: only Brownian paths admit bridge refinement");
    DrivingPath cur = path;
    // Midpoint of a Brownian bridge over a step of length dt:
    // mean of the endpoints plus N(0, dt/4).
    CounterRng rng(mix64(path.seed ^ 0x5bf0a8b1457695a6ULL));
    for (int lvl = 0; lvl < levels; ++lvl) {
        DrivingPath fine;
        fine.dt = cur.dt / 2.0;
        fine.kappa = cur.kappa;
        fine.seed = cur.seed;
        fine.generator_id = cur.generator_id;
        fine.values.resize(2 * cur.n_steps() + 1);
        double sd = std::sqrt(cur.dt / 4.0);
        for (std::size_t k = 0; k < cur.n_steps(); ++k) {
            fine.values[2 * k] = cur.values[k];
            fine.values[2 * k + 1] =
                0.5 * (cur.values[k] + cur.values[k + 1]) + sd * rng.normal();
        }
        fine.values.back() = cur.values.back();
        cur = std::move(fine);
    }
    return cur;
}

ContinuityStat modulus_delta(const DrivingPath& path, double t, double s) {
    if (!(s > 0.0)) throw std::out_of_range("modulus_delta: s must be positive");
    double t_end = t + s * s;
    if (t < 0.0 || t_end > path.total_time() + 1e-12 * path.dt)
        throw std::out_of_range("modulus_delta: window [t, t+s^2] outside the path range");

    auto value_at = [&](double time) {
        double pos = time / path.dt;
        auto k = static_cast<std::size_t>(pos);
        if (k >= path.n_steps()) return path.values.back();
        double frac = pos - static_cast<double>(k);
        return path.values[k] + frac * (path.values[k + 1] - path.values[k]);
    };

    double v0 = value_at(t);
    double sup_inc = 0.0;
    auto k_begin = static_cast<std::size_t>(std::ceil(t / path.dt - 1e-12));
    auto k_end = static_cast<std::size_t>(std::floor(t_end / path.dt + 1e-12));
    for (std::size_t k = k_begin; k <= k_end && k < path.values.size(); ++k)
        sup_inc = std::max(sup_inc, std::abs(path.values[k] - v0));
    sup_inc = std::max(sup_inc, std::abs(value_at(t_end) - v0));

    ContinuityStat stat;
    stat.t = t;
    stat.s = s;
    stat.delta = std::sqrt(sup_inc * sup_inc / (s * s) + 4.0);
    return stat;
}

DrivingPath deterministic_driver(DriverKind kind, const DriverParams& params) {
    if (!(params.dt > 0.0)) throw std::invalid_argument("deterministic_driver: dt must be positive");
    if (params.n_steps < 1) throw std::invalid_argument("deterministic_driver: n_steps must be >= 1");
    DrivingPath path;
    path.dt = params.dt;
    path.kappa = 0.0;
    path.seed = 0;
    path.values.resize(params.n_steps + 1);
    switch (kind) {
    case DriverKind::Constant:
        path.generator_id = "constant";
        // V_0 = 0 by contract; a nonzero level holds from the first step on.
        for (std::size_t k = 0; k <= params.n_steps; ++k)
            path.values[k] = (k == 0) ? 0.0 : params.value;
        break;
    case DriverKind::Linear:
        path.generator_id = "linear";
        for (std::size_t k = 0; k <= params.n_steps; ++k)
            path.values[k] = params.value * params.dt * static_cast<double>(k);
        break;
    case DriverKind::Sine:
        path.generator_id = "sine";
        for (std::size_t k = 0; k <= params.n_steps; ++k)
            path.values[k] =
                params.value * std::sin(params.frequency * params.dt * static_cast<double>(k));
        break;
    }
    return path;
}

void write_path_csv(const DrivingPath& path, const std::string& file) {
    nlohmann::json header = {{"kappa", path.kappa},
                             {"dt", path.dt},
                             {"seed", path.seed},
                             {"generator_id", path.generator_id}};
    std::ostringstream out;
    out << "# " << header.dump() << "\n";
    out << "t,v\n";
    for (std::size_t k = 0; k < path.values.size(); ++k)
        out << io::format_double(path.dt * static_cast<double>(k)) << ","
            << io::format_double(path.values[k]) << "\n";
    io::atomic_write(file, out.str());
}

DrivingPath read_path_csv(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("read_path_csv: cannot open " + file);
    std::string line;
    if (!std::getline(in, line) || line.size() < 2 || line[0] != '#')
        throw std::runtime_error("read_path_csv: missing JSON header line");
    nlohmann::json header = nlohmann::json::parse(line.substr(1));
    DrivingPath path;
    path.kappa = header.at("kappa").get<double>();
    path.dt = header.at("dt").get<double>();
    path.seed = header.at("seed").get<std::uint64_t>();
    path.generator_id = header.at("generator_id").get<std::string>();
    std::getline(in, line); // column header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("read_path_csv: malformed row: " + line);
        path.values.push_back(std::stod(line.substr(comma + 1)));
    }
    if (path.values.size() < 2) throw std::runtime_error("read_path_csv: too few rows");
    return path;
}

} // namespace loewner
