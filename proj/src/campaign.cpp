#include "pmlab/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "pmlab/formal_group.hpp"
#include "pmlab/group_ring.hpp"
#include "pmlab/lambda.hpp"
#include "pmlab/lattice.hpp"

namespace pmlab {

using ojson = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kAllChecks = {"trace", "ranks", "cyclicity", "torsion", "lambda"};

CurveParams curve_from_json(const nlohmann::json& j) {
    if (j.is_string()) return curve_preset(j.get<std::string>());
    if (!j.is_object()) throw ConfigError("curve must be a preset name or an object of coefficients");
    CurveParams E{0, 0, 0, 0, 0, "custom"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (!it.value().is_number_integer()) throw ConfigError("curve coefficient " + k + " must be an integer");
        const long v = it.value().get<long>();
        if (k == "a1") E.a1 = v;
        else if (k == "a2") E.a2 = v;
        else if (k == "a3") E.a3 = v;
        else if (k == "a4") E.a4 = v;
        else if (k == "a6") E.a6 = v;
        else throw ConfigError("unknown curve coefficient " + k);
    }
    std::ostringstream os;
    os << "[" << E.a1 << "," << E.a2 << "," << E.a3 << "," << E.a4 << "," << E.a6 << "]";
    E.name = os.str();
    return E;
}

CurveParams default_curve(u64 p) {
    if (p % 4 == 3) return curve_ss3();
    if (p % 3 == 2) return curve_ss23();
    throw ConfigError("no preset curve is supersingular at p = " + std::to_string(p) + "; give one under \"curves\"");
}

template <class T>
std::vector<T> int_list(const nlohmann::json& j, const std::string& key) {
    std::vector<T> out;
    if (!j.is_array()) throw ConfigError("\"" + key + "\" must be an array");
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw ConfigError("\"" + key + "\" must contain integers");
        out.push_back(v.get<T>());
    }
    return out;
}

std::string chi_label(int chi) { return chi == 0 ? "triv" : "w^" + std::to_string(chi); }

std::string sign_label(PmSign s) { return s == PmSign::Plus ? "+" : "-"; }

std::string val_label(int v) { return v == kValInf ? "inf" : std::to_string(v); }

std::string multiset_label(const std::vector<int>& xs) {
    if (xs.empty()) return "{}";
    // runs of equal exponents as e^count, joined by spaces
    std::ostringstream os;
    for (size_t i = 0; i < xs.size();) {
        size_t j = i;
        while (j < xs.size() && xs[j] == xs[i]) ++j;
        if (i) os << " ";
        os << xs[i] << "^" << (j - i);
        i = j;
    }
    return os.str();
}

Record make(u64 p, int d, const std::string& check) {
    Record r;
    r.p = p;
    r.d = d;
    r.check = check;
    return r;
}

void set_result(Record& r, const std::string& expected, const std::string& measured, bool pass) {
    r.expected = expected;
    r.measured = measured;
    r.pass = pass;
}

template <class R>
R retry(u64 p, int d, int N0, int n_max, const std::function<R(const TowerPtr&)>& f) {
    return with_precision_retry<R>(p, d, N0, n_max, f);
}

// ---------------- checks ----------------

std::vector<Record> trace_cell(const CampaignConfig& cfg, u64 p, int d) {
    TowerPtr t = build_tower(build_unramified(p, d, cfg.precision), cfg.n_max);
    std::vector<Record> out;
    for (const TraceRow& row : verify_trace_relations(t, cfg.n_max)) {
        Record r = make(p, d, row.relation == 1 ? "trace1" : "trace2");
        r.n = std::to_string(row.n);
        r.residual_val = val_label(row.residual_valuation);
        set_result(r, ">=" + std::to_string(row.floor), val_label(row.residual_valuation), row.pass);
        r.formula = row.relation == 1 ? "Tr_{n/n-1} log d_n + log d_{n-2} = 0" : "Tr_{0/-1} log d_0 + (F + F^-1) log d_{-1} = 0";
        out.push_back(r);
    }
    return out;
}

int rank_N0(const CampaignConfig& cfg) { return std::max(cfg.precision, 8); }

std::vector<Record> rank_cell(const CampaignConfig& cfg, u64 p, int d) {
    const int chars = static_cast<int>(p) - 1;
    const int n_max = cfg.n_max;
    // norm ranks for n = -1..n_max, then plus / minus for n = 0..n_max, per character,
    // then the exact-sequence data per n
    std::function<std::vector<int>(const TowerPtr&)> f = [&](const TowerPtr& t) {
        PointTable pts(t);
        std::vector<int> v;
        for (int chi = 0; chi < chars; ++chi) {
            for (int n = -1; n <= n_max; ++n) v.push_back(norm_lattice(pts, n, chi).rank());
            for (int n = 0; n <= n_max; ++n) {
                v.push_back(norm_subgroup(pts, n, Sign::Plus, chi).rank());
                v.push_back(norm_subgroup(pts, n, Sign::Minus, chi).rank());
            }
        }
        for (int n = 0; n <= n_max; ++n) {
            ExactSequenceReport e = check_exact_sequence(pts, n);
            v.insert(v.end(), {e.rank_intersection, e.intersection_is_bottom, e.sum_is_full, e.additive, e.pass});
        }
        return v;
    };
    std::vector<int> v = retry(p, d, rank_N0(cfg), n_max, f);
    std::vector<Record> out;
    size_t k = 0;
    auto push = [&](int n, int chi, const std::string& sign, int expected, const std::string& formula) {
        Record r = make(p, d, "rank");
        r.n = std::to_string(n);
        r.chi = chi_label(chi);
        r.sign = sign;
        r.formula = formula;
        const int measured = v[k++];
        set_result(r, std::to_string(expected), std::to_string(measured), expected == measured);
        out.push_back(r);
    };
    for (int chi = 0; chi < chars; ++chi) {
        for (int n = -1; n <= n_max; ++n)
            push(n, chi, "norm", expected_norm_rank(p, d, n, chi), "d(q_n + 1) if n odd and chi trivial, else d q_n");
        for (int n = 0; n <= n_max; ++n) {
            push(n, chi, "+", expected_plus_rank(p, d, n), "d q_n^+");
            push(n, chi, "-", expected_minus_rank(p, d, n, chi), "d q_n^- + d [chi trivial]");
        }
    }
    for (int n = 0; n <= n_max; ++n) {
        Record r = make(p, d, "exact_seq");
        r.n = std::to_string(n);
        const int inter = v[k++];
        const bool bottom = v[k++], full = v[k++], additive = v[k++], pass = v[k++];
        std::ostringstream m;
        m << "rank " << inter << (bottom ? " bottom" : " not-bottom") << (full ? " full" : " not-full")
          << (additive ? " additive" : " not-additive");
        set_result(r, "rank " + std::to_string(d) + " bottom full additive", m.str(), pass);
        r.formula = "C_n cap C_{n-1} = E(m_{-1}), C_n + C_{n-1} = E(m_n)";
        out.push_back(r);
    }
    return out;
}

std::vector<Record> cyclicity_cell(const CampaignConfig& cfg, u64 p, int d) {
    std::function<std::vector<int>(const TowerPtr&)> f = [&](const TowerPtr& t) {
        PointTable pts(t);
        std::vector<int> v;
        for (int n = 0; n <= cfg.n_max; ++n) v.push_back(cyclicity_check(pts, n));
        return v;
    };
    std::vector<int> v = retry(p, d, rank_N0(cfg), cfg.n_max, f);
    std::vector<Record> out;
    for (int n = 0; n <= cfg.n_max; ++n) {
        Record r = make(p, d, "cyclicity");
        r.n = std::to_string(n);
        const bool expected = cyclicity_expected(d, n);
        set_result(r, expected ? "true" : "false", v[n] ? "true" : "false", expected == static_cast<bool>(v[n]));
        r.formula = "d_{-1} in span(d_n) unless d = 0 mod 4 and n even";
        out.push_back(r);
    }
    return out;
}

int lambda_precision(u64 p) { return std::min(16, max_precision(p)); }

std::vector<Record> torsion_cell(const CampaignConfig& cfg, u64 p, int d) {
    std::vector<Record> out;
    for (int n = 0; n <= std::min(cfg.n_max, 2); ++n)
        for (int gap : {2, 4}) {
            TorsionCheck t = torsion_closed_form_check(p, d, n + gap, n, lambda_precision(p));
            Record r = make(p, d, "torsion");
            r.n = std::to_string(n);
            r.chi = "triv";
            r.sign = "+m" + std::to_string(n + gap);
            set_result(r, multiset_label(t.expected), multiset_label(t.measured), t.pass);
            r.formula = "Z_p[G][X]/(p^e, omega~_n^-) + Ann(F + F^-1)/p^e, e = (m - n)/2";
            out.push_back(r);
        }
    return out;
}

std::vector<Record> lambda_cell(const CampaignConfig& cfg, u64 p, int d) {
    std::vector<Record> out;
    const int N = lambda_precision(p);
    std::vector<int> chis = {0};
    if (p > 2) chis.push_back(1);
    auto chi_name = [](int chi) { return std::string(chi == 0 ? "triv" : "nontriv"); };
    for (int chi : chis) {
        for (PmSign s : {PmSign::Plus, PmSign::Minus}) {
            for (int n = 0; n <= std::min(cfg.n_max, 2); ++n) {
                RankLawRow row = coinvariant_rank_law(p, d, n, chi, s, N);
                Record r = make(p, d, "rank_law");
                r.n = std::to_string(n);
                r.chi = chi_name(chi);
                r.sign = sign_label(s);
                std::ostringstream m;
                m << row.total;
                if (!row.stable) m << " unstable";
                set_result(r, std::to_string(row.expected), m.str(), row.pass);
                r.formula = s == PmSign::Plus ? "d p^n + delta" : "d p^n";
                out.push_back(r);
            }
            SupplementaryReport sup = supplementary_structure_check(p, d, chi, s, N);
            Record r = make(p, d, "supplementary");
            r.chi = chi_name(chi);
            r.sign = sign_label(s);
            set_result(r, "consistent", sup.consistent ? "consistent" : "inconsistent", sup.consistent);
            r.formula = s == PmSign::Plus ? "Lambda^d + (Lambda/X)^delta" : "Lambda^d";
            out.push_back(r);
        }
        RankLawRow zero = coinvariant_rank_law(p, d, 0, chi, PmSign::Plus, N);
        Record r = make(p, d, "delta");
        r.chi = chi_name(chi);
        r.sign = "+";
        const int expected = delta_of(d, chi);
        set_result(r, std::to_string(expected), std::to_string(zero.delta), zero.delta == expected && zero.stable);
        r.formula = "2 if d = 0 mod 4 and chi trivial, else 0";
        out.push_back(r);
    }
    return out;
}

std::vector<Record> lemma_cell(const CampaignConfig& cfg) {
    std::vector<Record> out;
    for (const HandModule& h : reference_modules()) {
        FreenessVerdict v = freeness_test(h.module);
        Record r = make(3, 0, "freeness");
        r.sign = h.name;
        auto tag = [](bool fr, bool nf) { return std::string(fr ? "free" : "not-free") + (nf ? " no-finite" : " finite-sub"); };
        set_result(r, tag(h.free, h.no_finite_submodule), tag(v.is_free, v.no_finite_submodule),
                   v.is_free == h.free && v.no_finite_submodule == h.no_finite_submodule);
        r.formula = "free iff M^Gamma = 0 and M_Gamma Z_p-free; no finite submodule iff M^Gamma Z_p-free";
        out.push_back(r);
    }
    PropertyReport k = kernel_freeness_property(cfg.property_trials, cfg.seed);
    PropertyReport g = greenberg_cokernel_property(cfg.property_trials, cfg.seed + 1);
    for (auto [name, rep] : {std::pair<std::string, PropertyReport*>{"kernel_free", &k}, {"cokernel_no_finite", &g}}) {
        Record r = make(3, 0, name);
        r.sign = std::to_string(rep->instances) + " instances";
        set_result(r, "0", std::to_string(rep->counterexamples), rep->counterexamples == 0);
        r.formula = "counterexamples among random instances";
        if (!rep->dumps.empty()) r.residual_val = std::to_string(rep->dumps.size()) + " dumped";
        out.push_back(r);
    }
    return out;
}

Record gate_record(u64 p, const CurveParams& E) {
    Record r = make(p, 0, "ap");
    r.sign = E.name;
    r.formula = "a_p = p + 1 - #E(F_p)";
    try {
        require_good_reduction(E, p);
    } catch (const std::invalid_argument&) {
        set_result(r, "0", "bad-reduction", false);
        return r;
    }
    const long a = trace_of_frobenius(E, p);
    set_result(r, "0", std::to_string(a), a == 0);
    r.residual_val = "#E=" + std::to_string(count_points(E, p));
    return r;
}

int n_order(const std::string& n) { return n == "-" ? -100 : std::stoi(n); }

}  // namespace

CurveParams curve_preset(const std::string& name) {
    if (name == "ss3") return curve_ss3();
    if (name == "ss23") return curve_ss23();
    throw ConfigError("unknown curve preset \"" + name + "\"");
}

std::vector<std::string> parse_check_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        if (item == "all") return kAllChecks;
        if (std::find(kAllChecks.begin(), kAllChecks.end(), item) == kAllChecks.end())
            throw ConfigError("unknown check \"" + item + "\"");
        if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(item);
    }
    if (out.empty()) throw ConfigError("empty check list");
    return out;
}

CampaignConfig parse_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    static const std::set<std::string> known = {"p",    "d",     "n_max",           "precision", "curve", "curves",
                                                "checks", "seed", "property_trials", "threads",   "out"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) throw ConfigError("unknown config key \"" + it.key() + "\"");

    CampaignConfig c;
    if (!j.contains("p")) throw ConfigError("missing \"p\"");
    if (!j.contains("d")) throw ConfigError("missing \"d\"");
    for (i64 p : int_list<i64>(j["p"], "p")) {
        if (p < 3 || !is_prime(static_cast<u64>(p))) throw ConfigError("p = " + std::to_string(p) + " is not an odd prime");
        c.primes.push_back(static_cast<u64>(p));
    }
    c.degrees = int_list<int>(j["d"], "d");
    if (c.primes.empty()) throw ConfigError("empty p-list");
    if (c.degrees.empty()) throw ConfigError("empty d-list");
    for (int d : c.degrees)
        if (d < 1 || d > 16) throw ConfigError("d = " + std::to_string(d) + " outside 1..16");
    auto get_int = [&](const char* key, int& dst, int lo, int hi) {
        if (!j.contains(key)) return;
        if (!j[key].is_number_integer()) throw ConfigError(std::string("\"") + key + "\" must be an integer");
        const long v = j[key].get<long>();
        if (v < lo || v > hi) throw ConfigError(std::string("\"") + key + "\" out of range");
        dst = static_cast<int>(v);
    };
    get_int("n_max", c.n_max, 0, 4);
    get_int("precision", c.precision, 2, 39);
    get_int("property_trials", c.property_trials, 0, 100000);
    get_int("threads", c.threads, 0, 1024);
    for (u64 p : c.primes)
        if (c.precision > max_precision(p)) throw ConfigError("precision too large for p = " + std::to_string(p));
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw ConfigError("\"seed\" must be a non-negative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("out")) {
        if (!j["out"].is_string()) throw ConfigError("\"out\" must be a string");
        c.out_dir = j["out"].get<std::string>();
    }
    if (j.contains("checks")) {
        const auto& ch = j["checks"];
        std::string joined;
        if (ch.is_string()) {
            joined = ch.get<std::string>();
        } else if (ch.is_array()) {
            for (const auto& x : ch) {
                if (!x.is_string()) throw ConfigError("\"checks\" must contain strings");
                joined += x.get<std::string>() + ",";
            }
        } else {
            throw ConfigError("\"checks\" must be a string or an array");
        }
        c.checks = parse_check_list(joined);
    } else {
        c.checks = kAllChecks;
    }
    std::optional<CurveParams> common;
    if (j.contains("curve")) common = curve_from_json(j["curve"]);
    std::map<u64, CurveParams> per;
    if (j.contains("curves")) {
        if (!j["curves"].is_object()) throw ConfigError("\"curves\" must map primes to curves");
        for (auto it = j["curves"].begin(); it != j["curves"].end(); ++it) {
            u64 p = 0;
            try {
                p = std::stoull(it.key());
            } catch (const std::exception&) {
                throw ConfigError("\"curves\" key " + it.key() + " is not a prime");
            }
            per[p] = curve_from_json(it.value());
        }
    }
    for (u64 p : c.primes) {
        if (per.count(p))
            c.curves[p] = per[p];
        else if (common)
            c.curves[p] = *common;
        else
            c.curves[p] = default_curve(p);
    }
    return c;
}

CampaignConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

bool Report::all_pass() const { return failures() == 0 && !precision_exhausted; }

int Report::failures() const {
    return static_cast<int>(std::count_if(records.begin(), records.end(), [](const Record& r) { return !r.pass; }));
}

Report run_campaign(const CampaignConfig& cfg) {
    Report rep;
    struct Task {
        u64 p;
        int d;
        std::string check;
        std::function<std::vector<Record>()> run;
    };
    std::vector<Task> tasks;
    auto has = [&](const std::string& c) { return std::find(cfg.checks.begin(), cfg.checks.end(), c) != cfg.checks.end(); };
    using Cell = std::vector<Record> (*)(const CampaignConfig&, u64, int);
    const std::vector<std::pair<std::string, Cell>> cells = {
        {"trace", trace_cell}, {"ranks", rank_cell}, {"cyclicity", cyclicity_cell}, {"torsion", torsion_cell}, {"lambda", lambda_cell}};
    for (u64 p : cfg.primes) {
        Record g = gate_record(p, cfg.curves.at(p));
        rep.records.push_back(g);
        if (!g.pass) continue;
        for (int d : cfg.degrees)
            for (const auto& [name, cell] : cells)
                if (has(name)) tasks.push_back({p, d, name, [&cfg, p, d, cell] { return cell(cfg, p, d); }});
    }
    if (has("lambda")) tasks.push_back({3, 0, "lemmas", [&cfg] { return lemma_cell(cfg); }});

    std::vector<std::vector<Record>> results(tasks.size());
    std::vector<std::string> failures(tasks.size());
    std::vector<char> exhausted(tasks.size(), 0);
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i; (i = next.fetch_add(1)) < tasks.size();) {
            const auto t0 = std::chrono::steady_clock::now();
            try {
                results[i] = tasks[i].run();
            } catch (const PrecisionExhausted& e) {
                exhausted[i] = 1;
                failures[i] = e.what();
            } catch (const std::exception& e) {
                failures[i] = e.what();
            }
            const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            for (Record& r : results[i]) r.runtime_ms = ms;
        }
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned n_threads = std::min<unsigned>(cfg.threads > 0 ? cfg.threads : hw, static_cast<unsigned>(tasks.size()));
    std::vector<std::thread> pool;
    for (unsigned i = 0; i + 1 < n_threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    for (size_t i = 0; i < tasks.size(); ++i) {
        if (!failures[i].empty()) {
            Record r = make(tasks[i].p, tasks[i].d, tasks[i].check);
            r.expected = "completed";
            r.measured = exhausted[i] ? "precision-exhausted" : "error";
            r.formula = failures[i];
            rep.records.push_back(r);
            if (exhausted[i]) rep.precision_exhausted = true;
        }
        rep.records.insert(rep.records.end(), results[i].begin(), results[i].end());
    }
    std::stable_sort(rep.records.begin(), rep.records.end(), [](const Record& a, const Record& b) {
        return std::make_tuple(a.p, a.d, a.check, n_order(a.n), a.chi, a.sign) <
               std::make_tuple(b.p, b.d, b.check, n_order(b.n), b.chi, b.sign);
    });
    return rep;
}

// ---------------- tables ----------------

namespace {

const std::vector<std::string> kColumns = {"p", "d", "n", "chi", "sign", "check", "expected", "measured", "residual_val", "pass"};

std::vector<std::string> row_fields(const Record& r) {
    return {std::to_string(r.p),
            r.d == 0 ? "-" : std::to_string(r.d),
            r.n,
            r.chi,
            r.sign,
            r.check,
            r.expected,
            r.measured,
            r.residual_val,
            r.pass ? "true" : "false"};
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

}  // namespace

std::string report_csv(const Report& r) {
    std::ostringstream os;
    for (size_t i = 0; i < kColumns.size(); ++i) os << (i ? "," : "") << kColumns[i];
    os << "\n";
    for (const Record& rec : r.records) {
        auto f = row_fields(rec);
        for (size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << csv_field(f[i]);
        os << "\n";
    }
    return os.str();
}

std::string report_json(const Report& r, bool with_runtime) {
    ojson j;
    j["schema_version"] = kReportSchemaVersion;
    j["pass"] = r.all_pass();
    j["precision_exhausted"] = r.precision_exhausted;
    j["failures"] = r.failures();
    ojson recs = ojson::array();
    for (const Record& rec : r.records) {
        ojson o;
        o["p"] = rec.p;
        o["d"] = rec.d;
        o["n"] = rec.n;
        o["chi"] = rec.chi;
        o["sign"] = rec.sign;
        o["check"] = rec.check;
        o["expected"] = rec.expected;
        o["measured"] = rec.measured;
        o["residual_val"] = rec.residual_val;
        o["pass"] = rec.pass;
        o["formula"] = rec.formula;
        if (with_runtime) o["runtime_ms"] = rec.runtime_ms;
        recs.push_back(o);
    }
    j["records"] = recs;
    return j.dump(2) + "\n";
}

std::string report_markdown(const Report& r) {
    std::ostringstream os;
    os << "|";
    for (const auto& c : kColumns) os << " " << c << " |";
    os << "\n|";
    for (size_t i = 0; i < kColumns.size(); ++i) os << "---|";
    os << "\n";
    for (const Record& rec : r.records) {
        os << "|";
        for (const auto& f : row_fields(rec)) {
            std::string s = f;
            for (size_t k = 0; (k = s.find('|', k)) != std::string::npos; k += 2) s.replace(k, 1, "\\|");
            os << " " << s << " |";
        }
        os << "\n";
    }
    return os.str();
}

Report report_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("report is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("schema_version") || !j.contains("records"))
        throw ConfigError("not a report: schema_version or records missing");
    if (j["schema_version"].get<int>() != kReportSchemaVersion)
        throw ConfigError("unsupported report schema_version " + j["schema_version"].dump());
    Report r;
    r.precision_exhausted = j.value("precision_exhausted", false);
    try {
        for (const auto& o : j["records"]) {
            Record rec;
            rec.p = o.at("p").get<u64>();
            rec.d = o.at("d").get<int>();
            rec.n = o.at("n").get<std::string>();
            rec.chi = o.at("chi").get<std::string>();
            rec.sign = o.at("sign").get<std::string>();
            rec.check = o.at("check").get<std::string>();
            rec.expected = o.at("expected").get<std::string>();
            rec.measured = o.at("measured").get<std::string>();
            rec.residual_val = o.at("residual_val").get<std::string>();
            rec.pass = o.at("pass").get<bool>();
            rec.formula = o.value("formula", "");
            rec.runtime_ms = o.value("runtime_ms", 0.0);
            r.records.push_back(rec);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed report record: ") + e.what());
    }
    return r;
}

int exit_code(const Report& r) {
    if (r.precision_exhausted) return 3;
    return r.failures() == 0 ? 0 : 1;
}

}  // namespace pmlab
