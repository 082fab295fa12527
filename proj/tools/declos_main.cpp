#include "CLI11.hpp"
#include "declos/executive.hpp"
#include "declos/oracle.hpp"
#include "declos/render.hpp"
#include "declos/sim.hpp"
#include "json.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace declos;
using ordered_json = nlohmann::ordered_json;

RunMode parse_mode(const std::string& s) {
    if (s == "declos") return RunMode::DecLos;
    if (s == "clairvoyant") return RunMode::Clairvoyant;
    throw ScenarioError("unknown mode '" + s + "' (expected declos|clairvoyant)");
}

TokenMode parse_token(const std::string& s) {
    if (s == "round_robin") return TokenMode::RoundRobin;
    if (s == "bid_based") return TokenMode::BidBased;
    throw ScenarioError("unknown token mode '" + s + "' (expected round_robin|bid_based)");
}

InflationMode parse_inflation(const std::string& s) {
    if (s == "full") return InflationMode::Full;
    if (s == "adaptive") return InflationMode::Adaptive;
    throw ScenarioError("unknown inflation mode '" + s + "' (expected full|adaptive)");
}

const char* mode_name(RunMode m) { return m == RunMode::DecLos ? "declos" : "clairvoyant"; }

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::string mode, token, inflation;
};

ScenarioConfig load_with_overrides(const std::string& path, const Overrides& ov) {
    ScenarioConfig cfg = load_scenario(path);
    if (ov.seed) cfg.params.master_seed = *ov.seed;
    if (!ov.mode.empty()) cfg.params.mode = parse_mode(ov.mode);
    if (!ov.token.empty()) cfg.params.token_mode = parse_token(ov.token);
    if (!ov.inflation.empty()) cfg.params.inflation = parse_inflation(ov.inflation);
    validate_scenario(cfg);
    return cfg;
}

void print_metrics(const MetricsSummary& m) {
    std::cout << "  agent  finished  time_to_goal_s  path_length_m  brakes\n";
    for (const AgentMetrics& a : m.per_agent) {
        std::ostringstream t;
        if (a.time_to_goal < 0)
            t << "-";
        else
            t << std::fixed << std::setprecision(1) << a.time_to_goal;
        std::cout << "  " << std::setw(5) << a.id << "  " << std::setw(8)
                  << (a.finished ? "yes" : "no") << "  " << std::setw(14) << t.str() << "  "
                  << std::setw(13) << std::fixed << std::setprecision(2) << a.path_length << "  "
                  << std::setw(6) << a.brake_count << "\n";
    }
    std::cout << std::setprecision(6);
    std::cout << "  all_finished=" << (m.all_finished ? "yes" : "no")
              << " outer_iterations=" << m.outer_iterations_used
              << " total_brakes=" << m.total_brake_events
              << " min_separation=" << m.min_interagent_distance;
    if (m.mean_time_to_goal >= 0) std::cout << " mean_time_to_goal=" << m.mean_time_to_goal;
    std::cout << " mean_path_length=" << m.mean_path_length << "\n";
}

int cmd_run(const std::string& path, const Overrides& ov, const std::string& out_trace,
            const std::string& out_svg) {
    ScenarioConfig cfg = load_with_overrides(path, ov);
    SimTrace trace = run_scenario(cfg);
    MetricsSummary m = compute_metrics(trace);
    std::cout << "scenario=" << cfg.name << " mode=" << mode_name(cfg.params.mode)
              << " seed=" << cfg.params.master_seed << " agents=" << cfg.agents.size() << "\n";
    print_metrics(m);
    for (const AgentRuntime& rt : final_agent_states(trace)) {
        const char* st = rt.status == AgentStatus::AtGoal          ? "at_goal"
                         : rt.status == AgentStatus::Tracking      ? "tracking"
                                                                   : "stopped";
        std::cout << "  final agent " << rt.id << " (" << rt.position.x << ", " << rt.position.y
                  << ") " << st << "\n";
    }
    if (!out_trace.empty()) {
        write_trace(trace, out_trace);
        std::cout << "trace written to " << out_trace << "\n";
    }
    if (!out_svg.empty()) {
        write_svg(trace, out_svg);
        std::cout << "svg written to " << out_svg << "\n";
    }
    return 0;
}

struct SuiteCell {
    int n = 0;
    RunMode mode = RunMode::DecLos;
    std::uint64_t seed = 0;
    bool failed = false;
    std::string error;
    MetricsSummary metrics;
};

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return -1.0;
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = mean_of(v), s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

int cmd_suite(const std::string& path, std::vector<std::uint64_t> seeds, int num_seeds,
              std::vector<std::string> modes, std::vector<int> agent_counts,
              const std::string& out_dir) {
    ScenarioConfig base = load_scenario(path);
    if (seeds.empty())
        for (int i = 1; i <= num_seeds; ++i) seeds.push_back(static_cast<std::uint64_t>(i));
    if (modes.empty()) modes = {"declos", "clairvoyant"};
    if (agent_counts.empty()) agent_counts = {static_cast<int>(base.agents.size())};

    std::vector<SuiteCell> cells;
    for (int n : agent_counts) {
        ScenarioConfig sliced = base.with_first_agents(n);
        for (const std::string& ms : modes) {
            RunMode mode = parse_mode(ms);
            for (std::uint64_t seed : seeds) {
                SuiteCell cell;
                cell.n = n;
                cell.mode = mode;
                cell.seed = seed;
                ScenarioConfig cfg = sliced;
                cfg.params.mode = mode;
                cfg.params.master_seed = seed;
                try {
                    SimTrace trace = run_scenario(cfg);
                    cell.metrics = compute_metrics(trace);
                    if (!out_dir.empty()) {
                        std::ostringstream name;
                        name << out_dir << "/" << base.name << "_n" << n << "_" << ms << "_s"
                             << seed << ".jsonl";
                        write_trace(trace, name.str());
                    }
                } catch (const std::exception& e) {
                    cell.failed = true;
                    cell.error = e.what();
                }
                cells.push_back(std::move(cell));
            }
        }
    }

    std::cout << "   N  mode         seed  status    finished  time_s  brakes  min_sep\n";
    bool any_failed = false;
    for (const SuiteCell& c : cells) {
        std::cout << std::setw(4) << c.n << "  " << std::setw(11) << std::left
                  << mode_name(c.mode) << std::right << "  " << std::setw(4) << c.seed << "  ";
        if (c.failed) {
            any_failed = true;
            std::cout << "FAILED    " << c.error << "\n";
            continue;
        }
        std::ostringstream t;
        if (c.metrics.mean_time_to_goal >= 0)
            t << std::fixed << std::setprecision(1) << c.metrics.mean_time_to_goal;
        else
            t << "-";
        std::cout << "ok        " << std::setw(8) << (c.metrics.all_finished ? "yes" : "no")
                  << "  " << std::setw(6) << t.str() << "  " << std::setw(6)
                  << c.metrics.total_brake_events << "  " << std::fixed << std::setprecision(3)
                  << std::setw(7) << c.metrics.min_interagent_distance << "\n";
    }

    std::cout << "\n   N  mode         runs  all_finished  mean_time_s  sd_time  mean_brakes\n";
    for (int n : agent_counts) {
        for (const std::string& ms : modes) {
            RunMode mode = parse_mode(ms);
            std::vector<double> times, brakes;
            int runs = 0, completed = 0;
            for (const SuiteCell& c : cells) {
                if (c.n != n || c.mode != mode || c.failed) continue;
                ++runs;
                brakes.push_back(static_cast<double>(c.metrics.total_brake_events));
                if (c.metrics.all_finished) {
                    ++completed;
                    times.push_back(c.metrics.mean_time_to_goal);
                }
            }
            std::cout << std::setw(4) << n << "  " << std::setw(11) << std::left << ms
                      << std::right << "  " << std::setw(4) << runs << "  " << std::setw(12)
                      << completed << "  " << std::fixed << std::setprecision(1) << std::setw(11)
                      << mean_of(times) << "  " << std::setw(7) << stddev_of(times) << "  "
                      << std::setw(11) << mean_of(brakes) << "\n";
        }
    }
    return any_failed ? 1 : 0;
}

ordered_json case_json(const CaseBounds& cb) {
    return ordered_json{{"case0", cb.case0}, {"case1", cb.case1}, {"case2", cb.case2}};
}

int cmd_certify_lemma(double side, double delta, double resolution, const std::string& report) {
    Lemma1Report rep = lemma1_scan(AARect(0.0, side, 0.0, side), delta, resolution);
    CaseBounds numeric = numeric_bounds(side, delta);
    bool ok = rep.min_nonlos_distance >= 2.0 * delta - 2.0 * resolution - 1e-12;

    std::cout << "lemma certification: square side " << side << ", keep-out delta " << delta
              << ", resolution " << resolution << "\n";
    std::cout << "  observed min non-LOS distance " << rep.min_nonlos_distance
              << " (target >= " << 2.0 * delta - 2.0 * resolution << ", analytic floor "
              << 2.0 * delta << ")\n";
    std::cout << "  certified lower bound " << rep.certified_lower_bound << "\n";
    std::cout << "  witness (" << rep.witness.a.x << ", " << rep.witness.a.y << ") - ("
              << rep.witness.b.x << ", " << rep.witness.b.y << ")\n";
    std::cout << "  case bounds   analytic   numeric-min   restricted-scan\n";
    std::cout << "    case0       " << rep.analytic.case0 << "   " << numeric.case0 << "   "
              << rep.scanned_cases.case0 << "\n";
    std::cout << "    case1       " << rep.analytic.case1 << "   " << numeric.case1 << "   "
              << rep.scanned_cases.case1 << "\n";
    std::cout << "    case2       " << rep.analytic.case2 << "   " << numeric.case2 << "   "
              << rep.scanned_cases.case2 << "\n";
    std::cout << "  pairs tested " << rep.pairs_tested << ", blocked " << rep.blocked_pairs
              << "\n";
    std::cout << (ok ? "CERTIFIED" : "FAILED") << "\n";

    if (!report.empty()) {
        ordered_json j{{"kind", "lemma1"},
                       {"side", side},
                       {"delta", delta},
                       {"resolution", resolution},
                       {"observed_min", rep.min_nonlos_distance},
                       {"certified_lower_bound", rep.certified_lower_bound},
                       {"target", 2.0 * delta - 2.0 * resolution},
                       {"witness",
                        {{rep.witness.a.x, rep.witness.a.y}, {rep.witness.b.x, rep.witness.b.y}}},
                       {"analytic", case_json(rep.analytic)},
                       {"numeric", case_json(numeric)},
                       {"restricted_scan", case_json(rep.scanned_cases)},
                       {"pairs_tested", rep.pairs_tested},
                       {"blocked_pairs", rep.blocked_pairs},
                       {"certified", ok}};
        std::ofstream f(report);
        if (!f) throw std::runtime_error("cannot open " + report + " for writing");
        f << j.dump(2) << "\n";
        std::cout << "report written to " << report << "\n";
    }
    return ok ? 0 : 1;
}

int cmd_certify_adaptive(const std::string& path, double resolution, const std::string& report) {
    ScenarioConfig cfg = load_scenario(path);
    Workspace w = cfg.build_workspace();
    AdaptiveCheck chk = validate_adaptive(w.physical, w.planning, cfg.params.delta_min,
                                          resolution);
    std::cout << "adaptive-inflation certification: scenario " << cfg.name << ", delta_min "
              << cfg.params.delta_min << ", resolution " << resolution << "\n";
    std::cout << "  threshold " << chk.threshold << " (delta_min + 2*resolution)\n";
    if (std::isfinite(chk.observed_min))
        std::cout << "  closest blocked pair " << chk.observed_min << " at (" << chk.witness.a.x
                  << ", " << chk.witness.a.y << ") - (" << chk.witness.b.x << ", "
                  << chk.witness.b.y << ")\n";
    else
        std::cout << "  no blocked pair inside the scan window\n";
    std::cout << "  pairs tested " << chk.pairs_tested << "\n";
    std::cout << (chk.certified ? "CERTIFIED" : "COUNTEREXAMPLE FOUND") << "\n";

    if (!report.empty()) {
        ordered_json j{{"kind", "adaptive"},
                       {"scenario", cfg.name},
                       {"delta_min", cfg.params.delta_min},
                       {"resolution", resolution},
                       {"threshold", chk.threshold},
                       {"observed_min", std::isfinite(chk.observed_min)
                                            ? ordered_json(chk.observed_min)
                                            : ordered_json(nullptr)},
                       {"witness",
                        {{chk.witness.a.x, chk.witness.a.y}, {chk.witness.b.x, chk.witness.b.y}}},
                       {"pairs_tested", chk.pairs_tested},
                       {"certified", chk.certified}};
        std::ofstream f(report);
        if (!f) throw std::runtime_error("cannot open " + report + " for writing");
        f << j.dump(2) << "\n";
        std::cout << "report written to " << report << "\n";
    }
    return chk.certified ? 0 : 1;
}

int cmd_metrics(const std::string& trace_path, bool verify) {
    SimTrace trace = read_trace(trace_path);
    std::cout << "trace " << trace_path << ": scenario=" << trace.config.name
              << " mode=" << mode_name(trace.config.params.mode)
              << " seed=" << trace.config.params.master_seed << " ticks=" << trace.records.size()
              << "\n";
    print_metrics(compute_metrics(trace));
    if (verify) {
        std::vector<std::string> problems = verify_trace(trace);
        if (problems.empty()) {
            std::cout << "verification: OK (all invariants hold on replay)\n";
            return 0;
        }
        std::cout << "verification: " << problems.size() << " problem(s)\n";
        for (const std::string& p : problems) std::cout << "  " << p << "\n";
        return 1;
    }
    return 0;
}

int cmd_render(const std::string& trace_path, const std::string& out_svg) {
    SimTrace trace = read_trace(trace_path);
    write_svg(trace, out_svg);
    std::cout << "svg written to " << out_svg << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DEC-LOS-RRT: decentralized multi-agent planning under line-of-sight "
                 "communication"};
    app.require_subcommand(1);
    std::function<int()> action;

    // run
    auto* run = app.add_subcommand("run", "run one scenario and print metrics");
    auto run_scenario_path = std::make_shared<std::string>();
    auto run_ov = std::make_shared<Overrides>();
    auto run_out = std::make_shared<std::string>();
    auto run_svg = std::make_shared<std::string>();
    run->add_option("--scenario", *run_scenario_path, "scenario file")->required();
    run->add_option("--seed", run_ov->seed, "override master seed");
    run->add_option("--mode", run_ov->mode, "declos|clairvoyant");
    run->add_option("--token", run_ov->token, "round_robin|bid_based");
    run->add_option("--inflation", run_ov->inflation, "full|adaptive");
    run->add_option("--out", *run_out, "write trace (jsonl)");
    run->add_option("--svg", *run_svg, "write svg rendering");
    run->callback([=, &action]() {
        action = [=]() { return cmd_run(*run_scenario_path, *run_ov, *run_out, *run_svg); };
    });

    // suite
    auto* suite = app.add_subcommand("suite", "seed sweep across modes and agent counts");
    auto suite_path = std::make_shared<std::string>();
    auto suite_seeds = std::make_shared<std::vector<std::uint64_t>>();
    auto suite_num_seeds = std::make_shared<int>(10);
    auto suite_modes = std::make_shared<std::vector<std::string>>();
    auto suite_agents = std::make_shared<std::vector<int>>();
    auto suite_out_dir = std::make_shared<std::string>();
    suite->add_option("--scenario", *suite_path, "scenario file")->required();
    suite->add_option("--seeds", *suite_seeds, "explicit seed list");
    suite->add_option("--num-seeds", *suite_num_seeds, "seeds 1..K when --seeds absent");
    suite->add_option("--modes", *suite_modes, "subset of declos clairvoyant");
    suite->add_option("--num-agents", *suite_agents, "agent-count variants (first N agents)");
    suite->add_option("--out-dir", *suite_out_dir, "write one trace per cell");
    suite->callback([=, &action]() {
        action = [=]() {
            return cmd_suite(*suite_path, *suite_seeds, *suite_num_seeds, *suite_modes,
                             *suite_agents, *suite_out_dir);
        };
    });

    // certify
    auto* cert = app.add_subcommand("certify", "numeric certification oracles");
    cert->require_subcommand(1);
    auto* lem = cert->add_subcommand("lemma", "non-LOS separation scan on a square obstacle");
    auto lem_side = std::make_shared<double>(1.0);
    auto lem_delta = std::make_shared<double>(0.35);
    auto lem_res = std::make_shared<double>(0.01);
    auto lem_report = std::make_shared<std::string>();
    lem->add_option("--side", *lem_side, "square side, meters");
    lem->add_option("--delta", *lem_delta, "keep-out width per side, meters");
    lem->add_option("--resolution", *lem_res, "grid resolution, meters");
    lem->add_option("--report", *lem_report, "write json report");
    lem->callback([=, &action]() {
        action = [=]() { return cmd_certify_lemma(*lem_side, *lem_delta, *lem_res, *lem_report); };
    });
    auto* adap = cert->add_subcommand("adaptive", "validate a scenario's inflated geometry");
    auto adap_path = std::make_shared<std::string>();
    auto adap_res = std::make_shared<double>(0.05);
    auto adap_report = std::make_shared<std::string>();
    adap->add_option("--scenario", *adap_path, "scenario file")->required();
    adap->add_option("--resolution", *adap_res, "grid resolution, meters");
    adap->add_option("--report", *adap_report, "write json report");
    adap->callback([=, &action]() {
        action = [=]() { return cmd_certify_adaptive(*adap_path, *adap_res, *adap_report); };
    });

    // metrics
    auto* met = app.add_subcommand("metrics", "metrics (and replay verification) of a trace");
    auto met_trace = std::make_shared<std::string>();
    auto met_verify = std::make_shared<bool>(false);
    met->add_option("--trace", *met_trace, "trace file")->required();
    met->add_flag("--verify", *met_verify, "recheck all invariants from the records");
    met->callback([=, &action]() {
        action = [=]() { return cmd_metrics(*met_trace, *met_verify); };
    });

    // render
    auto* ren = app.add_subcommand("render", "render a trace to svg");
    auto ren_trace = std::make_shared<std::string>();
    auto ren_out = std::make_shared<std::string>();
    ren->add_option("--trace", *ren_trace, "trace file")->required();
    ren->add_option("--out", *ren_out, "output svg path")->required();
    ren->callback([=, &action]() {
        action = [=]() { return cmd_render(*ren_trace, *ren_out); };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        return action ? action() : 2;
    } catch (const InvariantBreachError& e) {
        std::cerr << "invariant breach: " << e.what() << "\n";
        return 1;
    } catch (const ScenarioError& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
