#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pmlab/campaign.hpp"

namespace fs = std::filesystem;
using namespace pmlab;

namespace {

constexpr int kExitConfig = 2;

void write_file(const fs::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << body;
}

int verify(const std::string& config_path, const std::string& checks, const std::optional<std::uint64_t>& seed,
           const std::string& out_dir, bool timing) {
    CampaignConfig cfg;
    try {
        cfg = load_config(config_path);
        if (!checks.empty()) cfg.checks = parse_check_list(checks);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    if (seed) cfg.seed = *seed;
    if (!out_dir.empty()) cfg.out_dir = out_dir;

    Report rep = run_campaign(cfg);
    fs::create_directories(cfg.out_dir);
    write_file(fs::path(cfg.out_dir) / "report.json", report_json(rep));
    write_file(fs::path(cfg.out_dir) / "report.csv", report_csv(rep));
    if (timing) write_file(fs::path(cfg.out_dir) / "timing.json", report_json(rep, true));

    for (const Record& r : rep.records)
        if (!r.pass)
            std::cerr << "FAIL " << r.check << " p=" << r.p << " d=" << r.d << " n=" << r.n << " chi=" << r.chi
                      << " sign=" << r.sign << " expected " << r.expected << " measured " << r.measured << "\n";
    std::cout << rep.records.size() << " records, " << rep.failures() << " failed";
    if (rep.precision_exhausted) std::cout << ", precision exhausted";
    std::cout << "; written to " << cfg.out_dir << "\n";
    return exit_code(rep);
}

int table(const std::string& report_path, const std::string& format) {
    std::ifstream in(report_path);
    if (!in) {
        std::cerr << "cannot open report " << report_path << "\n";
        return kExitConfig;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    Report rep;
    try {
        rep = report_from_json(ss.str());
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    }
    if (format == "csv")
        std::cout << report_csv(rep);
    else if (format == "json")
        std::cout << report_json(rep);
    else
        std::cout << report_markdown(rep);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verification campaigns for supersingular formal groups over cyclotomic towers"};
    app.require_subcommand(1);

    CLI::App* v = app.add_subcommand("verify", "run the checks selected by a JSON config");
    std::string config_path, checks, out_dir;
    std::uint64_t seed_value = 0;
    bool timing = false;
    v->add_option("--config", config_path, "campaign config (JSON)")->required();
    v->add_option("--checks", checks, "comma-separated subset of trace,ranks,cyclicity,torsion,lambda,all");
    CLI::Option* seed_opt = v->add_option("--seed", seed_value, "seed for the random property tests");
    v->add_option("--out", out_dir, "output directory for report.json and report.csv");
    v->add_flag("--timing", timing, "also write timing.json with per-cell runtimes");

    CLI::App* t = app.add_subcommand("table", "print a report as a table");
    std::string report_path, format = "md";
    t->add_option("--report", report_path, "report.json written by verify")->required();
    t->add_option("--format", format, "csv, json or md")->check(CLI::IsMember({"csv", "json", "md"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (*v) {
            std::optional<std::uint64_t> seed;
            if (seed_opt->count()) seed = seed_value;
            return verify(config_path, checks, seed, out_dir, timing);
        }
        return table(report_path, format);
    } catch (const PrecisionExhausted& e) {
        std::cerr << "precision exhausted: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
