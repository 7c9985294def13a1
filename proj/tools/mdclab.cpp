#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mdclab/errors.hpp"
#include "mdclab/harness.hpp"
#include "mdclab/oscgauss.hpp"
#include "mdclab/qsurface.hpp"

namespace {

struct TolOverride {
    std::string name;
    double value;
};

// --tol.<name>=<value> and --tol.<name> <value> are taken out before CLI11 sees argv.
std::vector<TolOverride> take_tolerances(std::vector<std::string>& args) {
    std::vector<TolOverride> out;
    std::vector<std::string> rest;
    const std::string prefix = "--tol.";
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind(prefix, 0) != 0) {
            rest.push_back(a);
            continue;
        }
        std::string body = a.substr(prefix.size());
        std::string value;
        if (const auto eq = body.find('='); eq != std::string::npos) {
            value = body.substr(eq + 1);
            body = body.substr(0, eq);
        } else if (i + 1 < args.size()) {
            value = args[++i];
        } else {
            throw mdc::ConfigError("missing value for " + a);
        }
        try {
            out.push_back({body, std::stod(value)});
        } catch (const std::exception&) {
            throw mdc::ConfigError("bad tolerance value for " + body);
        }
    }
    args = rest;
    return out;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw mdc::ConfigError("cannot write " + path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::vector<TolOverride> tols;
    try {
        tols = take_tolerances(args);
    } catch (const mdc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::reverse(args.begin(), args.end());

    CLI::App app{"Lattice multiform checks"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run check suites from a config file");
    std::string config_path, out_path, csv_path;
    std::vector<std::string> suites, probes;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<double> hbar;
    run->add_option("--config", config_path, "JSON config")->required();
    run->add_option("--suite", suites, "suite to run (repeatable)");
    run->add_option("--probe", probes, "expected-failure probe (repeatable)");
    run->add_option("--seed", seed, "override seed");
    run->add_option("--trials", trials, "override trial count");
    run->add_option("--hbar", hbar, "override hbar");
    run->add_option("--out", out_path, "report path (stdout when omitted)");
    run->add_option("--csv", csv_path, "sweep CSV path");

    auto* surf = app.add_subcommand("surface", "kernel of a surface description");
    std::string surface_path;
    double p1 = 3, p2 = 2, p3 = 1;
    surf->add_option("--input", surface_path, "surface JSON")->required();
    surf->add_option("--p1", p1);
    surf->add_option("--p2", p2);
    surf->add_option("--p3", p3);

    try {
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*run) {
            mdc::harness::Config cfg = mdc::harness::load_config(config_path);
            if (seed) cfg.seed = *seed;
            if (trials) cfg.trials = *trials;
            if (hbar) {
                cfg.hbar = *hbar;
                for (auto& p : cfg.params) p.hbar = *hbar;
            }
            if (!suites.empty()) cfg.suites = suites;
            if (!probes.empty()) cfg.probes = probes;
            for (const auto& t : tols) cfg.tolerances[t.name] = t.value;
            mdc::harness::validate(cfg);
            const auto report = mdc::harness::run(cfg);
            const std::string text = mdc::harness::report_text(report);
            if (out_path.empty()) std::cout << text;
            else write_file(out_path, text);
            if (!csv_path.empty()) write_file(csv_path, mdc::harness::csv_text(report));
            for (const auto& c : report.checks)
                if (!c.pass) std::cerr << "FAIL " << c.suite << "/" << c.name << " residual=" << c.residual << "\n";
            return report.ok() ? 0 : 1;
        }
        std::ifstream in(surface_path);
        if (!in) throw mdc::ConfigError("cannot open " + surface_path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw mdc::ConfigError(std::string("cannot parse surface: ") + e.what());
        }
        const auto s = mdc::surface::surface_from_json(j);
        const auto K = mdc::surface::surface_kernel(s, mdc::surface::canonical_coeffs(p1, p2, p3));
        std::cout << mdc::osc::to_json(K).dump(2) << "\n";
        return 0;
    } catch (const mdc::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
