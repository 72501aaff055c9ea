#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "loewner/checks.hpp"
#include "loewner/driving.hpp"
#include "loewner/estimators.hpp"
#include "loewner/flow.hpp"
#include "loewner/io.hpp"
#include "loewner/spectra.hpp"
#include "loewner/vendor_json.hpp"

namespace {

using loewner::Complex;
using nlohmann::json;

struct Options {
    double kappa = 2.0;
    std::uint64_t seed = 1;
    bool seed_given = false;
    int samples = 1000;
    int steps = 1000;
    double dt = 1e-3;
    double tmax = 32.0;
    double beta = 0.0;
    double lambda = 1.0;
    double alpha = 0.6;
    int n_max = 5;
    std::string out;
    std::string format = "csv";
    std::string config;
    unsigned workers = 0;
    std::string level = "fast";
};

// Writes a CSV with a '#'-prefixed JSON meta line, or a meta+data JSON
// envelope, always atomically.
void emit(const Options& opt, const json& meta, const loewner::io::CsvTable& table,
          const json& data) {
    if (opt.out.empty()) return;
    if (opt.format == "json") {
        loewner::io::atomic_write(opt.out,
                                  loewner::io::make_envelope(meta, data).dump(2) + "\n");
    } else {
        std::ostringstream out;
        json m = meta;
        m["version"] = loewner::io::version_string();
        out << "# " << m.dump() << "\n" << table.to_string();
        loewner::io::atomic_write(opt.out, out.str());
    }
}

json meta_base(const Options& opt, const std::string& command) {
    return {{"command", command}, {"kappa", opt.kappa},   {"seed", opt.seed},
            {"samples", opt.samples}, {"steps", opt.steps}, {"dt", opt.dt},
            {"workers", opt.workers}};
}

int cmd_trace(const Options& opt) {
    auto path = loewner::sample_brownian(opt.kappa, static_cast<std::size_t>(opt.steps),
                                         opt.dt, opt.seed);
    auto chain = loewner::chain_from_path(path);
    auto pts = loewner::compute_trace(chain);
    loewner::io::CsvTable tab;
    tab.header = {"t", "re", "im"};
    json rows = json::array();
    for (std::size_t k = 0; k < pts.size(); ++k) {
        double t = opt.dt * static_cast<double>(k);
        tab.rows.push_back({t, pts[k].real(), pts[k].imag()});
        rows.push_back({{"t", t}, {"re", pts[k].real()}, {"im", pts[k].imag()}});
    }
    emit(opt, meta_base(opt, "trace"), tab, rows);
    std::cout << "trace: " << pts.size() << " points, kappa " << opt.kappa << ", seed "
              << opt.seed << "\n";
    return 0;
}

int cmd_spectrum(const Options& opt) {
    auto p = loewner::spectra::SpectrumParams::for_kappa(opt.kappa);
    auto tab = loewner::spectra::spectrum_table(opt.kappa, opt.steps >= 2 ? opt.steps : 201);
    loewner::io::CsvTable csv;
    csv.header = {"alpha", "beta", "rho", "dhat", "dbeta", "f_tip", "f_bulk"};
    json rows = json::array();
    double peak = -1e300;
    for (const auto& r : tab) {
        csv.rows.push_back({r.alpha, r.beta, r.rho, r.dhat, r.dbeta, r.f_tip, r.f_bulk});
        rows.push_back({{"alpha", r.alpha}, {"f_tip", r.f_tip}, {"f_bulk", r.f_bulk},
                        {"dhat", r.dhat}, {"dbeta", r.dbeta}});
        peak = std::max(peak, r.f_tip);
    }
    json meta = meta_base(opt, "spectrum");
    meta["alpha_star"] = p.alpha_star;
    meta["d"] = p.d;
    emit(opt, meta, csv, rows);
    std::cout << "spectrum: kappa " << opt.kappa << ", max F_tip " << peak << " at alpha_* "
              << p.alpha_star << " (d = " << p.d << ")\n";
    return 0;
}

int cmd_moments(const Options& opt) {
    std::vector<double> t_grid;
    for (double t = 2.0; t <= opt.tmax * (1.0 + 1e-12); t *= 2.0) t_grid.push_back(t);
    auto est = loewner::mc::estimate_moment(opt.kappa, opt.lambda, t_grid, opt.samples,
                                            opt.seed, opt.workers);
    loewner::io::CsvTable csv;
    csv.header = {"t", "mean", "stderr"};
    json rows = json::array();
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
        csv.rows.push_back({t_grid[j], est.mean[j], est.stderr_[j]});
        rows.push_back({{"t", t_grid[j]}, {"mean", est.mean[j]}, {"stderr", est.stderr_[j]}});
    }
    json meta = meta_base(opt, "moments");
    meta["lambda"] = opt.lambda;
    meta["fitted_slope"] = est.fitted_slope;
    meta["slope_stderr"] = est.slope_stderr;
    emit(opt, meta, csv, rows);
    std::cout << "moments: kappa " << opt.kappa << ", lambda " << opt.lambda << ", slope "
              << est.fitted_slope << " +- " << est.slope_stderr << "\n";
    return 0;
}

int cmd_counts(const Options& opt) {
    std::vector<int> n_grid;
    for (int n = 3; n <= opt.n_max; ++n) n_grid.push_back(n);
    if (n_grid.size() < 2) throw std::invalid_argument("counts: n-max must be >= 4");
    auto res = loewner::mc::estimate_count_scaling(opt.kappa, opt.beta, n_grid,
                                                   opt.samples, opt.seed, 1.0, opt.workers);
    loewner::io::CsvTable csv;
    csv.header = {"n", "mean_count"};
    json rows = json::array();
    for (const auto& st : res.stats) {
        csv.rows.push_back({static_cast<double>(st.n), st.mean_count});
        rows.push_back({{"n", st.n}, {"mean_count", st.mean_count}});
    }
    json meta = meta_base(opt, "counts");
    meta["beta"] = opt.beta;
    meta["fitted_slope"] = res.fitted_slope;
    meta["slope_stderr"] = res.slope_stderr;
    emit(opt, meta, csv, rows);
    std::cout << "counts: kappa " << opt.kappa << ", beta " << opt.beta << ", log2 slope "
              << res.fitted_slope << " +- " << res.slope_stderr << "\n";
    return 0;
}

int cmd_tip_profile(const Options& opt) {
    auto path = loewner::sample_brownian(opt.kappa, static_cast<std::size_t>(opt.steps),
                                         opt.dt, opt.seed);
    auto chain = loewner::chain_from_path(path);
    std::vector<double> y_grid;
    for (int j = 0; j <= 8; ++j) y_grid.push_back(std::ldexp(1.0, -j));
    auto prof = loewner::tip_profile(chain, chain.size(), y_grid);
    loewner::io::CsvTable csv;
    csv.header = {"y", "deriv_mod", "v_cum"};
    json rows = json::array();
    for (std::size_t k = 0; k < y_grid.size(); ++k) {
        csv.rows.push_back({prof.y_grid[k], prof.deriv_mod[k], prof.v_cum[k]});
        rows.push_back({{"y", prof.y_grid[k]}, {"deriv_mod", prof.deriv_mod[k]},
                        {"v_cum", prof.v_cum[k]}});
    }
    emit(opt, meta_base(opt, "tip-profile"), csv, rows);
    std::cout << "tip-profile: kappa " << opt.kappa << ", v(1) = " << prof.v_cum.front()
              << "\n";
    return 0;
}

int cmd_hm(const Options& opt) {
    loewner::SlitMapChain chain;
    if (opt.kappa > 0.0) {
        auto path = loewner::sample_brownian(opt.kappa, static_cast<std::size_t>(opt.steps),
                                             opt.dt, opt.seed);
        chain = loewner::chain_from_path(path);
    } else {
        loewner::DriverParams dp;
        dp.n_steps = static_cast<std::size_t>(opt.steps);
        dp.dt = opt.dt;
        chain = loewner::chain_from_path(
            loewner::deterministic_driver(loewner::DriverKind::Constant, dp), 1.0);
    }
    double h = std::sqrt(2.0 * chain.a * chain.total_time());
    std::vector<double> eps_grid;
    for (int j = 0; j < 9; ++j) eps_grid.push_back(h / 64.0 * std::pow(2.0, 0.75 * j));
    auto est = loewner::mc::estimate_tip_harmonic_measure(chain, chain.size(), eps_grid,
                                                          opt.samples);
    loewner::io::CsvTable csv;
    csv.header = {"eps", "mu", "x_minus", "x_plus"};
    json rows = json::array();
    for (std::size_t j = 0; j < eps_grid.size(); ++j) {
        csv.rows.push_back({eps_grid[j], est.mu[j], est.x_minus[j], est.x_plus[j]});
        rows.push_back({{"eps", eps_grid[j]}, {"mu", est.mu[j]}});
    }
    json meta = meta_base(opt, "hm");
    meta["slope"] = est.slope;
    emit(opt, meta, csv, rows);
    std::cout << "hm: t " << est.t << ", log-log slope " << est.slope << "\n";
    return 0;
}

int cmd_theta_sde(const Options& opt) {
    auto rep = loewner::mc::radial_theta_simulate(opt.kappa, opt.alpha, 1.5707963267948966,
                                                  opt.tmax, opt.samples, opt.seed, 32,
                                                  opt.dt, opt.workers);
    loewner::io::CsvTable csv;
    csv.header = {"bin_left", "bin_right", "count", "expected"};
    json rows = json::array();
    for (std::size_t j = 0; j < rep.count.size(); ++j) {
        csv.rows.push_back({rep.bin_left[j], rep.bin_right[j],
                            static_cast<double>(rep.count[j]), rep.expected[j]});
        rows.push_back({{"bin_left", rep.bin_left[j]}, {"count", rep.count[j]},
                        {"expected", rep.expected[j]}});
    }
    json meta = meta_base(opt, "theta-sde");
    meta["u"] = opt.alpha;
    meta["chi_square"] = rep.chi_square;
    meta["p_value"] = rep.p_value;
    emit(opt, meta, csv, rows);
    std::cout << "theta-sde: u " << opt.alpha << ", chi2 " << rep.chi_square << " (dof "
              << rep.dof << "), p = " << rep.p_value << "\n";
    return 0;
}

int cmd_check(const Options& opt) {
    auto level = (opt.level == "full") ? loewner::checks::Level::Full
                                       : loewner::checks::Level::Fast;
    auto results = loewner::checks::run_checks(level, opt.workers, true);
    bool ok = loewner::checks::all_passed(results);
    if (!opt.out.empty()) {
        json rows = json::array();
        for (const auto& r : results)
            rows.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed},
                            {"detail", r.detail}});
        json meta = meta_base(opt, "check");
        meta["level"] = opt.level;
        loewner::io::atomic_write(opt.out,
                                  loewner::io::make_envelope(meta, rows).dump(2) + "\n");
    }
    std::cout << (ok ? "all checks passed" : "CHECK FAILURES PRESENT") << "\n";
    return ok ? 0 : 3;
}

void load_config(Options& opt, const std::string& file) {
    std::ifstream in(file);
    if (!in) throw std::invalid_argument("config: cannot open " + file);
    json cfg = json::parse(in);
    if (cfg.contains("kappa")) opt.kappa = cfg["kappa"].get<double>();
    if (cfg.contains("seed")) {
        opt.seed = cfg["seed"].get<std::uint64_t>();
        opt.seed_given = true;
    }
    if (cfg.contains("samples")) opt.samples = cfg["samples"].get<int>();
    if (cfg.contains("steps")) opt.steps = cfg["steps"].get<int>();
    if (cfg.contains("dt")) opt.dt = cfg["dt"].get<double>();
    if (cfg.contains("tmax")) opt.tmax = cfg["tmax"].get<double>();
    if (cfg.contains("beta")) opt.beta = cfg["beta"].get<double>();
    if (cfg.contains("lambda")) opt.lambda = cfg["lambda"].get<double>();
    if (cfg.contains("alpha")) opt.alpha = cfg["alpha"].get<double>();
    if (cfg.contains("n-max")) opt.n_max = cfg["n-max"].get<int>();
    if (cfg.contains("out")) opt.out = cfg["out"].get<std::string>();
    if (cfg.contains("format")) opt.format = cfg["format"].get<std::string>();
    if (cfg.contains("workers")) opt.workers = cfg["workers"].get<unsigned>();
    if (cfg.contains("level")) opt.level = cfg["level"].get<std::string>();
}

} // namespace

int main(int argc, char** argv) {
    Options opt;

    // The config file provides defaults; explicit flags override it below.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                load_config(opt, argv[i + 1]);
            } catch (const std::exception& ex) {
                std::cerr << "error: " << ex.what() << "\n";
                return 2;
            }
        }
    }

    CLI::App app{"Numerical laboratory for chordal Loewner evolution and SLE"};
    app.require_subcommand(1);
    std::string command;
    for (const char* name : {"trace", "spectrum", "moments", "counts", "tip-profile",
                             "hm", "theta-sde", "check"}) {
        auto* sub = app.add_subcommand(name);
        sub->callback([&command, name]() { command = name; });
        sub->add_option("--kappa", opt.kappa);
        sub->add_option("--seed", opt.seed)->each([&opt](const std::string&) {
            opt.seed_given = true;
        });
        sub->add_option("--samples", opt.samples);
        sub->add_option("--steps", opt.steps);
        sub->add_option("--dt", opt.dt);
        sub->add_option("--tmax", opt.tmax);
        sub->add_option("--beta", opt.beta);
        sub->add_option("--lambda", opt.lambda);
        sub->add_option("--alpha", opt.alpha);
        sub->add_option("--n-max", opt.n_max);
        sub->add_option("--out", opt.out);
        sub->add_option("--format", opt.format)
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--config", opt.config); // consumed in the prescan
        sub->add_option("--workers", opt.workers);
        sub->add_option("--level", opt.level)->check(CLI::IsMember({"fast", "full"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (!opt.seed_given) {
        if (const char* env = std::getenv("LOEWNER_LAB_SEED")) opt.seed = std::strtoull(env, nullptr, 10);
    }

    try {
        if (opt.kappa < 0.0 || (command != "hm" && opt.kappa == 0.0))
            throw std::invalid_argument("kappa: must be positive");
        if (opt.samples < 1) throw std::invalid_argument("samples: must be >= 1");
        if (opt.steps < 1) throw std::invalid_argument("steps: must be >= 1");
        if (command == "trace") return cmd_trace(opt);
        if (command == "spectrum") return cmd_spectrum(opt);
        if (command == "moments") return cmd_moments(opt);
        if (command == "counts") return cmd_counts(opt);
        if (command == "tip-profile") return cmd_tip_profile(opt);
        if (command == "hm") return cmd_hm(opt);
        if (command == "theta-sde") return cmd_theta_sde(opt);
        if (command == "check") return cmd_check(opt);
        std::cerr << "error: no command\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
}
