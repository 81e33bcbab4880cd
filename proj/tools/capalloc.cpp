#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "capalloc/experiment.hpp"
#include "capalloc/io.hpp"
#include "capalloc/verify.hpp"

using namespace capalloc;

namespace {

enum Exit { kOk = 0, kDeviation = 1, kInvalid = 2, kCapacity = 3, kNumerical = 4 };

std::vector<Method> parse_methods(const std::string& list) {
    std::vector<Method> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_method(item));
    if (out.empty()) throw InvalidInput("no methods given");
    return out;
}

std::vector<Scenario> load_scenarios(const std::string& path) {
    const Json doc = read_json_file(path);
    std::vector<Scenario> out;
    if (doc.is_array()) {
        for (std::size_t i = 0; i < doc.size(); ++i)
            out.push_back({std::to_string(i + 1), config_from_json(doc[i])});
    } else {
        out.push_back({"1", config_from_json(doc)});
    }
    return out;
}

void emit(const std::string& out, const std::vector<ScenarioResult>& rows) {
    if (out.empty() || out == "-") {
        write_csv(std::cout, rows);
        return;
    }
    std::ofstream f(out);
    if (!f) throw InvalidInput("cannot write " + out);
    write_csv(f, rows);
}

TieBreak parse_ties(const std::string& s) {
    if (s == "smallest") return TieBreak::Smallest;
    if (s == "largest") return TieBreak::Largest;
    throw InvalidInput("ties must be 'smallest' or 'largest'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Capacity allocation with preferred service times: exact and heuristic policies"};
    app.require_subcommand(1);

    std::string config_path, methods = "opt,dn,dn1s,th,th1s", out, ties = "smallest";
    auto* run = app.add_subcommand("run", "Evaluate methods on the instances of a config file");
    run->add_option("--config", config_path, "JSON object or array of objects")->required();
    run->add_option("--methods", methods, "comma-separated subset of opt,dn,dn1s,th,th1s");
    run->add_option("--out", out, "CSV output path (default stdout)");
    run->add_option("--ties", ties, "tie rule for one-step improvement: smallest|largest");

    int table = 0;
    bool fast = false;
    auto* reproduce = app.add_subcommand("reproduce", "Recompute a published cost table");
    reproduce->add_option("--table", table, "table id")->required()->check(CLI::Range(1, 6));
    reproduce->add_flag("--fast", fast, "skip long cells");
    reproduce->add_option("--out", out, "CSV output path (default stdout)");
    reproduce->add_option("--ties", ties, "tie rule for one-step improvement: smallest|largest");

    std::string policy_path;
    SimOptions sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo estimate of a policy's cost");
    simulate_cmd->add_option("--config", config_path)->required();
    simulate_cmd->add_option("--policy", policy_path, "policy JSON (tabular or threshold)")->required();
    simulate_cmd->add_option("--horizon", sim.horizon, "periods per replication, warmup included");
    simulate_cmd->add_option("--warmup", sim.warmup);
    simulate_cmd->add_option("--reps", sim.replications);
    simulate_cmd->add_option("--seed", sim.seed);
    bool as_json = false;
    simulate_cmd->add_flag("--json", as_json, "print JSON instead of a CSV row");

    std::string suite;
    bool verbose = false;
    auto* verify = app.add_subcommand("verify", "Run a structural verification suite");
    verify->add_option("--suite", suite)->required()->check(CLI::IsMember(suite_names()));
    verify->add_flag("-v,--verbose", verbose, "list passing instances too");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        const int workers = default_worker_count();
        if (*run) {
            ExperimentOptions opts;
            opts.ties = parse_ties(ties);
            emit(out, run_scenarios(load_scenarios(config_path), parse_methods(methods), opts, workers));
            return kOk;
        }
        if (*reproduce) {
            ExperimentOptions opts;
            opts.ties = parse_ties(ties);
            const ReproductionReport report = reproduce_table(table, fast, opts, workers);
            emit(out, report.results);
            std::cerr << report.summary();
            return report.passed() ? kOk : kDeviation;
        }
        if (*simulate_cmd) {
            const ProblemConfig config = load_config(config_path);
            const AnyPolicy policy = load_policy(policy_path, config);
            sim.workers = workers;
            const SimResult r = simulate(policy, config, build_arrival_model(config), sim);
            if (as_json)
                std::cout << to_json(r).dump(2) << '\n';
            else
                std::cout << sim_csv_header() << '\n' << sim_csv_row(r) << '\n';
            return kOk;
        }
        if (*verify) {
            SimOptions so;
            so.workers = workers;
            const SuiteReport report = verify_suite(suite, so);
            std::cout << report.summary(verbose);
            return report.passed() ? kOk : kDeviation;
        }
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kInvalid;
    } catch (const CapacityError& e) {
        std::cerr << "capacity exceeded: " << e.what() << '\n';
        return kCapacity;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    }
    return kOk;
}
