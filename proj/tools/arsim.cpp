#include "arsim/bounds.hpp"
#include "arsim/run.hpp"
#include "arsim/scenario.hpp"
#include "arsim/search.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace arsim;
using nlohmann::json;

namespace {

constexpr int kMatched = 0;
constexpr int kMismatch = 1;
constexpr int kUsage = 2;

struct Range {
    std::size_t lo = 0;
    std::size_t hi = 0;
};

std::optional<Range> parse_range(const std::string& s) {
    try {
        const auto dots = s.find("..");
        if (dots == std::string::npos) {
            const auto v = std::stoul(s);
            return Range{v, v};
        }
        return Range{std::stoul(s.substr(0, dots)), std::stoul(s.substr(dots + 2))};
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::optional<std::uint64_t> env_seed() {
    const char* raw = std::getenv("ARSIM_SEED");
    if (raw == nullptr || *raw == '\0') {
        return std::nullopt;
    }
    try {
        return std::stoull(raw);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("ARSIM_SEED is not an unsigned integer: ") + raw);
    }
}

Model model_arg(const std::string& name) {
    auto m = parse_model(name);
    if (!m) {
        throw std::invalid_argument("unknown model '" + name + "'");
    }
    return *m;
}

std::vector<Property> property_arg(const std::string& text) {
    std::vector<Property> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto plus = text.find('+', pos);
        if (plus == std::string::npos) {
            plus = text.size();
        }
        const auto name = text.substr(pos, plus - pos);
        auto p = parse_property(name);
        if (!p) {
            throw std::invalid_argument("unknown property '" + name + "'");
        }
        out.push_back(*p);
        pos = plus + 1;
    }
    return out;
}

std::string props_text(const std::vector<Property>& ps) {
    std::string s;
    for (auto p : ps) {
        s += (s.empty() ? "" : "+") + std::string(to_string(p));
    }
    return s;
}

struct RunArgs {
    std::string path;
    std::optional<std::size_t> t;
    std::optional<std::size_t> tau;
    std::optional<std::size_t> n;
    std::string model;
    bool json = false;
};

int cmd_run(const RunArgs& a) {
    Overrides ov;
    ov.t = a.t;
    ov.tau = a.tau;
    ov.n = a.n;
    ov.seed = env_seed();
    if (!a.model.empty()) {
        ov.model = model_arg(a.model);
    }
    const auto scenario = load_scenario(a.path, ov);
    auto report = execute(scenario);
    if (a.t) {
        std::erase_if(report.checks, [&](const CheckResult& c) { return c.kind == "verdict" && c.t != *a.t; });
    }
    if (a.json) {
        for (const auto& line : report_json_lines(report)) {
            std::cout << line << '\n';
        }
    } else {
        print_report(std::cout, report);
    }
    return report.matched() ? kMatched : kMismatch;
}

struct SweepArgs {
    std::string path;
    std::string tau;
    std::string t;
    std::string model;
    std::optional<std::size_t> n;
    bool json = false;
};

int cmd_sweep(const SweepArgs& a) {
    const auto doc = read_scenario_file(a.path);
    const auto seed = env_seed();
    std::optional<Model> model;
    if (!a.model.empty()) {
        model = model_arg(a.model);
    }
    const auto base = instantiate(doc, Overrides{a.n, std::nullopt, std::nullopt, model, seed});
    auto tau_range = a.tau.empty() ? std::optional<Range>(Range{base.cfg.tau, base.cfg.tau}) : parse_range(a.tau);
    auto t_range = a.t.empty() ? std::optional<Range>(Range{1, base.cfg.n}) : parse_range(a.t);
    if (!tau_range || !t_range) {
        throw std::invalid_argument("ranges look like A..B");
    }

    bool matched = true;
    if (!a.json) {
        std::cout << base.name << " sweep, model=" << model_name(model_of(base.cfg)) << ", n=" << base.cfg.n
                  << ", f=" << base.cfg.f << '\n';
        std::cout << "tau  t  completeness  weak_acc  strong_acc  C+weak  C+strong\n";
    }
    for (auto tau = tau_range->lo; tau <= tau_range->hi; ++tau) {
        Scenario s;
        try {
            s = instantiate(doc, Overrides{a.n, tau, std::nullopt, model, seed});
        } catch (const ScenarioError& e) {
            if (a.json) {
                std::cout << json{{"type", "skip"}, {"tau", tau}, {"reason", e.what()}}.dump() << '\n';
            } else {
                std::cout << "tau=" << tau << " skipped: " << e.what() << '\n';
            }
            continue;
        }
        const auto run = execute(s);
        matched = matched && run.matched();
        std::vector<std::size_t> both_weak;
        std::vector<std::size_t> both_strong;
        for (auto t = t_range->lo; t <= std::min(t_range->hi, s.cfg.n); ++t) {
            const auto v = verdicts_at(run, run.audits.size() - 1, t);
            const bool cw = v[0].holds && v[1].holds;
            const bool cs = v[0].holds && v[2].holds;
            if (cw) {
                both_weak.push_back(t);
            }
            if (cs) {
                both_strong.push_back(t);
            }
            if (a.json) {
                json j{{"type", "cell"}, {"model", model_name(model_of(s.cfg))}, {"tau", tau}, {"t", t}};
                for (const auto& pv : v) {
                    j[std::string(to_string(pv.property))] = pv.holds;
                }
                j["completeness+weak_accuracy"] = cw;
                j["completeness+strong_accuracy"] = cs;
                std::cout << j.dump() << '\n';
            } else {
                auto yn = [](bool b) { return b ? "yes" : "no"; };
                std::cout << (tau < 10 ? " " : "") << tau << "  " << t << "  " << yn(v[0].holds) << "           "
                          << (v[0].holds ? " " : "") << yn(v[1].holds) << (v[1].holds ? "       " : "        ")
                          << yn(v[2].holds) << (v[2].holds ? "         " : "          ") << yn(cw)
                          << (cw ? "     " : "      ") << yn(cs) << '\n';
            }
        }
        if (!a.json) {
            auto list = [](const std::vector<std::size_t>& ts) {
                if (ts.empty()) {
                    return std::string("none");
                }
                std::string s;
                for (auto t : ts) {
                    s += (s.empty() ? "" : ",") + std::to_string(t);
                }
                return s;
            };
            std::cout << "  tau=" << tau << ": C+weak at t in {" << list(both_weak) << "}, C+strong at t in {"
                      << list(both_strong) << "}\n";
        }
        for (const auto& c : run.checks) {
            if (!c.ok && !a.json) {
                std::cout << "  MISMATCH tau=" << tau << ' ' << c.kind << ' ' << c.subject << " t=" << c.t
                          << ": expected " << c.expected << ", got " << c.actual << '\n';
            }
        }
    }
    return matched ? kMatched : kMismatch;
}

struct SearchArgs {
    std::size_t n = 0;
    std::size_t f = 1;
    std::optional<std::size_t> tau;
    std::optional<std::size_t> t;
    std::string property;
    std::string model = "fast";
    std::size_t readers = 1;
    std::uint64_t cap = 5'000'000;
    unsigned workers = 0;
    bool no_symmetry = false;
    bool per_value = false;
    std::string emit;
    std::string expect;
    bool json = false;
};

int cmd_search(const SearchArgs& a) {
    SearchSpace space;
    space.n = a.n;
    space.f = a.f;
    space.tau = a.tau.value_or(2 * a.f + 1);
    space.t = a.t;
    space.model = model_arg(a.model);
    space.readers = a.readers;
    space.cap = a.cap;
    space.workers = a.workers;
    space.symmetry = !a.no_symmetry;
    if (a.per_value) {
        space.weak_accuracy = WeakAccuracyMode::PerValue;
    }
    const auto props = property_arg(a.property);
    const auto result = find_violation(space, props);

    if (a.json) {
        json j{{"type", "search"},
               {"n", space.n},
               {"f", space.f},
               {"tau", space.tau},
               {"model", model_name(space.model)},
               {"property", props_text(props)},
               {"states", result.states_explored},
               {"violated", result.violated}};
        if (result.counterexample) {
            const auto& c = *result.counterexample;
            j["counterexample"] = {{"t", c.t},
                                   {"ordinal", c.ordinal},
                                   {"property", to_string(c.verdict.property)},
                                   {"records", c.records}};
        }
        std::cout << j.dump() << '\n';
    } else {
        std::cout << "search " << props_text(props) << ": model=" << model_name(space.model) << " n=" << space.n
                  << " f=" << space.f << " tau=" << space.tau << " readers=" << space.readers << '\n';
        std::cout << "  adversaries explored: " << result.states_explored << '\n';
        if (!result.violated) {
            std::cout << "  no violation over the full enumeration\n";
        } else {
            std::cout << "  violated at every evaluated t\n";
            for (const auto& [t, c] : result.counterexamples) {
                const auto& names = c.scenario.processes;
                std::cout << "    t=" << t << ": " << to_string(c.verdict.property) << " broken by adversary #"
                          << c.ordinal;
                if (c.verdict.witness) {
                    std::cout << " witness " << names.name(c.verdict.witness->first) << '/'
                              << names.label_name(c.verdict.witness->second) << " with " << c.records << " records";
                }
                std::cout << '\n';
            }
        }
    }
    if (!a.emit.empty() && result.violated) {
        std::filesystem::create_directories(a.emit);
        for (const auto& [t, c] : result.counterexamples) {
            const auto doc = counterexample_to_json(c);
            const auto path = std::filesystem::path(a.emit) / (doc["name"].get<std::string>() + ".json");
            std::ofstream(path) << doc.dump(2) << '\n';
            if (!a.json) {
                std::cout << "  wrote " << path.string() << '\n';
            }
        }
    }
    if (a.expect.empty()) {
        return kMatched;
    }
    const bool want = a.expect == "violated";
    return result.violated == want ? kMatched : kMismatch;
}

struct ReportArgs {
    std::string what;
    std::size_t f = 1;
    std::size_t tau_max = 0;
    std::uint64_t cap = 5'000'000;
    unsigned workers = 0;
    bool json = false;
};

int cmd_report(const ReportArgs& a) {
    if (a.what != "table1") {
        throw std::invalid_argument("unknown report '" + a.what + "' (available: table1)");
    }
    BoundsOptions o;
    o.f = a.f;
    o.tau_max = a.tau_max;
    o.cap = a.cap;
    o.workers = a.workers;
    const auto rows = table1(o);
    bool all = true;
    for (const auto& row : rows) {
        all = all && row.cells == expected_row(row.model, a.f);
    }
    if (a.json) {
        for (const auto& row : rows) {
            json j{{"type", "row"}, {"model", model_name(row.model)}};
            const auto expected = expected_row(row.model, a.f);
            for (std::size_t c = 0; c < kColumns.size(); ++c) {
                j[std::string(column_name(kColumns[c]))] = row.cells[c];
                j["expected_" + std::string(column_name(kColumns[c]))] = expected[c];
            }
            json states = json::array();
            for (const auto& tr : row.per_tau) {
                states.push_back({{"tau", tr.tau}, {"n", tr.n}, {"adversaries", tr.states}});
            }
            j["searches"] = states;
            std::cout << j.dump() << '\n';
        }
        std::cout << json{{"type", "summary"}, {"matched", all}}.dump() << '\n';
    } else {
        std::cout << "minimal bounds at f=" << a.f << " (n = tau + 2f, exhaustive search per tau)\n";
        std::cout << render_table(rows, a.f);
    }
    return all ? kMatched : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Auditable register simulator"};
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Execute a scenario and check its expectations");
    run_cmd->add_option("scenario", run.path, "Scenario file")->required();
    run_cmd->add_option("--t", run.t, "Evidence threshold");
    run_cmd->add_option("--tau", run.tau, "Dispersal threshold");
    run_cmd->add_option("--n", run.n, "Number of objects");
    run_cmd->add_option("--model", run.model, "Model variant");
    run_cmd->add_flag("--json", run.json, "JSON lines output");

    SweepArgs sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate a scenario template over tau and t ranges");
    sweep_cmd->add_option("template", sweep.path, "Scenario template")->required();
    sweep_cmd->add_option("--tau", sweep.tau, "tau range A..B");
    sweep_cmd->add_option("--t", sweep.t, "t range A..B");
    sweep_cmd->add_option("--n", sweep.n, "Number of objects");
    sweep_cmd->add_option("--model", sweep.model, "fast, signed, total, total-signed, nonfast, nonfast-signed");
    sweep_cmd->add_flag("--json", sweep.json, "JSON lines output");

    SearchArgs search;
    auto* search_cmd = app.add_subcommand("search", "Exhaustive adversary search");
    search_cmd->add_option("--n", search.n, "Number of objects")->required();
    search_cmd->add_option("--f", search.f, "Fault bound")->required();
    search_cmd->add_option("--property", search.property, "Property or pair, e.g. completeness+strong_accuracy")
        ->required();
    search_cmd->add_option("--tau", search.tau, "Dispersal threshold (default 2f+1)");
    search_cmd->add_option("--t", search.t, "Evaluate one threshold only");
    search_cmd->add_option("--model", search.model, "Model variant");
    search_cmd->add_option("--readers", search.readers, "Readers in the skeleton (1 or 2)");
    search_cmd->add_option("--cap", search.cap, "Maximum number of adversaries");
    search_cmd->add_option("--workers", search.workers, "Worker threads (0: all cores)");
    search_cmd->add_flag("--no-symmetry", search.no_symmetry, "Enumerate every object assignment");
    search_cmd->add_flag("--per-value", search.per_value, "Per-value weak accuracy");
    search_cmd->add_option("--emit", search.emit, "Directory for counterexample scenarios");
    search_cmd->add_option("--expect", search.expect, "violated or holds; sets the exit code")
        ->check(CLI::IsMember({"violated", "holds"}));
    search_cmd->add_flag("--json", search.json, "JSON output");

    ReportArgs report;
    auto* report_cmd = app.add_subcommand("report", "Reproduce the bounds table");
    report_cmd->add_option("what", report.what, "table1")->required();
    report_cmd->add_option("--f", report.f, "Fault bound");
    report_cmd->add_option("--tau-max", report.tau_max, "Largest tau searched (default 3f+2, capped at n = 7)");
    report_cmd->add_option("--cap", report.cap, "Maximum adversaries per search");
    report_cmd->add_option("--workers", report.workers, "Worker threads (0: all cores)");
    report_cmd->add_flag("--json", report.json, "JSON lines output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (*run_cmd) {
            return cmd_run(run);
        }
        if (*sweep_cmd) {
            return cmd_sweep(sweep);
        }
        if (*search_cmd) {
            return cmd_search(search);
        }
        if (*report_cmd) {
            return cmd_report(report);
        }
    } catch (const RunError& e) {
        std::cerr << "arsim: run failed at " << e.what() << '\n';
        return kUsage;
    } catch (const SearchSpaceTooLarge& e) {
        std::cerr << "arsim: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "arsim: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
