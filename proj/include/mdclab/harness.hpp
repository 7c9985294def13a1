#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mdclab/params.hpp"

namespace mdc::harness {

inline constexpr const char* kVersion = "0.1.0";

const std::vector<std::string>& known_suites();
const std::vector<std::string>& known_probes();
std::map<std::string, double> default_tolerances();

struct Config {
    std::uint64_t seed = 42;
    int trials = 100;
    double hbar = 1.0;
    std::vector<LatticeParams> params;  // explicit list; sampled when empty
    SampleRange range;
    std::map<std::string, double> tolerances = default_tolerances();
    std::vector<std::string> suites = known_suites();
    std::vector<std::string> probes;
};

Config config_from_json(const nlohmann::json& j);
Config load_config(const std::string& path);
void validate(const Config& c);

enum class Bound { Upper, Lower, ExpectedFail };

struct CheckRecord {
    std::string suite;
    std::string name;
    std::string ref;
    double residual = 0;
    double tolerance = 0;
    Bound bound = Bound::Upper;
    bool pass = false;
};

struct CsvRow {
    DerivedParams d;
    std::string residual_name;
    double residual = 0;
};

struct Report {
    std::vector<CheckRecord> checks;
    std::vector<CsvRow> sweep;
    std::uint64_t seed = 0;
    int trials = 0;
    double hbar = 1.0;

    bool ok() const;
    std::size_t failures() const;
};

Report run(const Config& c);

nlohmann::json to_json(const Report& r);
std::string report_text(const Report& r);
std::string csv_text(const Report& r);

}  // namespace mdc::harness
