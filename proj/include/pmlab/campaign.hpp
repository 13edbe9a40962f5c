#pragma once

// Configuration-driven verification campaigns and the report tables they emit.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pmlab/series.hpp"

namespace pmlab {

inline constexpr int kReportSchemaVersion = 1;

struct CampaignConfig {
    std::vector<u64> primes;
    std::vector<int> degrees;
    int n_max = 2;
    int precision = 4;
    std::map<u64, CurveParams> curves;  // one curve per prime
    std::vector<std::string> checks;    // trace, ranks, cyclicity, torsion, lambda
    std::uint64_t seed = 1;
    int property_trials = 200;
    int threads = 0;  // 0: hardware concurrency
    std::string out_dir = ".";
};

// Throws ConfigError on malformed input.
CampaignConfig parse_config(const std::string& json_text);
CampaignConfig load_config(const std::string& path);
// "all" expands to every check; unknown names are a ConfigError.
std::vector<std::string> parse_check_list(const std::string& comma_separated);
CurveParams curve_preset(const std::string& name);

struct Record {
    u64 p = 0;
    int d = 0;
    std::string n = "-";
    std::string chi = "-";
    std::string sign = "-";
    std::string check;
    std::string expected;
    std::string measured;
    std::string residual_val = "-";
    bool pass = false;
    std::string formula;  // closed form behind `expected`
    double runtime_ms = 0;
};

struct Report {
    std::vector<Record> records;
    bool precision_exhausted = false;

    bool all_pass() const;
    int failures() const;
};

// Runs the a_p gate for every prime, then the selected checks.  Records are
// sorted, so the result does not depend on scheduling.
Report run_campaign(const CampaignConfig& cfg);

std::string report_csv(const Report& r);
// Runtimes are left out unless asked for, so equal inputs give equal bytes.
std::string report_json(const Report& r, bool with_runtime = false);
std::string report_markdown(const Report& r);
Report report_from_json(const std::string& json_text);

// Process exit status: 0 pass, 1 check failure, 3 precision exhausted.
int exit_code(const Report& r);

}  // namespace pmlab
