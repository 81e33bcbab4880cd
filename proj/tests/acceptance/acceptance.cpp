// Acceptance gate: one PASS/FAIL line per criterion. With a criterion number as the
// only argument just that criterion runs; the exit status is nonzero if any run
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "capalloc/experiment.hpp"
#include "capalloc/verify.hpp"

using namespace capalloc;

namespace {

constexpr double kPublishedTolerance = 0.005;
constexpr double kOptimalityTolerance = 1e-6;

struct Outcome {
    bool pass;
    std::string detail;
};

const ReproductionReport& table(int id) {
    static std::map<int, ReproductionReport> cache;
    auto it = cache.find(id);
    if (it == cache.end()) it = cache.emplace(id, reproduce_table(id, false, {}, default_worker_count())).first;
    return it->second;
}

Outcome cells_within(const std::vector<std::pair<int, std::function<bool(const CellDeviation&)>>>& pick) {
    int n = 0, bad = 0;
    double worst = 0.0;
    std::ostringstream os;
    for (const auto& [id, keep] : pick)
        for (const CellDeviation& c : table(id).cells) {
            if (!keep(c)) continue;
            ++n;
            worst = std::max(worst, c.deviation);
            if (!(c.deviation <= kPublishedTolerance)) {
                ++bad;
                os << "\n    T" << id << ' ' << to_string(c.load) << " A=" << c.A << ' ' << to_string(c.method)
                   << ": published " << std::fixed << std::setprecision(2) << c.published << ", computed "
                   << std::setprecision(6) << c.computed << ", |dev| " << c.deviation;
            }
        }
    std::ostringstream head;
    head << n << " cells, " << bad << " beyond " << kPublishedTolerance << ", max |dev| " << std::setprecision(6)
         << worst;
    return {bad == 0 && n > 0, head.str() + os.str()};
}

Outcome suite(const char* name) {
    const SuiteReport r = verify_suite(name, SimOptions{200'000, 10'000, 20, 1, default_worker_count()});
    std::ostringstream os;
    os << r.instances() << " instances, " << r.failures() << " failing";
    if (!r.passed()) os << '\n' << r.summary();
    return {r.passed(), os.str()};
}

bool small(const CellDeviation& c) { return c.A <= 3; }

const std::map<int, std::pair<std::string, std::function<Outcome()>>>& criteria() {
    static const std::map<int, std::pair<std::string, std::function<Outcome()>>> all{
        {1, {"published tables 1-4, A <= 3, all methods within 0.005",
             [] { return cells_within({{1, small}, {2, small}, {3, small}, {4, small}}); }}},
        {2, {"large cells: table 4 A = 5, tables 5-6 A <= 2, within 0.005",
             [] {
                 Outcome o = cells_within({{4, [](const CellDeviation& c) { return c.A == 5; }},
                                           {5, small},
                                           {6, small}});
                 const Outcome optional = cells_within({{4, [](const CellDeviation& c) { return c.A == 10; }}});
                 o.detail += "\n    optional table 4 A = 10: " + optional.detail;
                 return o;
             }}},
        {3, {"th1s equals the policy-iteration optimum within 1e-6 on every reproduced instance",
             [] {
                 int n = 0, bad = 0;
                 std::ostringstream os;
                 for (int id = 1; id <= 6; ++id) {
                     const auto& rows = table(id).results;
                     for (std::size_t k = 0; k < rows.size(); k += kAllMethods.size()) {
                         const double opt = rows[k].avg_cost;
                         const double th1s = rows[k + 4].avg_cost;
                         ++n;
                         if (!(std::abs(th1s - opt) <= kOptimalityTolerance)) {
                             ++bad;
                             os << "\n    " << rows[k].scenario << ": opt " << std::setprecision(10) << opt
                                << ", th1s " << th1s << ", gap " << th1s - opt;
                         }
                     }
                 }
                 return Outcome{bad == 0, std::to_string(n) + " instances, " + std::to_string(bad) + " off" + os.str()};
             }}},
        {4, {"never-early action attains the minimum when co <= ce (1e-9)", [] { return suite("never-early"); }}},
        {5, {"two-period closed-form threshold is optimal (1e-9)",
             [] {
                 Outcome a = suite("corollary1");
                 const Outcome b = suite("proposition1");
                 return Outcome{a.pass && b.pass, a.detail + "; A = 2 subset: " + b.detail};
             }}},
        {6, {"smallest optimal y_1 non-decreasing in x_1 on 20 random instances", [] { return suite("monotone"); }}},
        {7, {"finite-horizon values increasing along e1+e2 and convex, n <= 20, 10 instances",
             [] { return suite("convexity"); }}},
        {8, {"arrival and kernel rows sum to 1 within 1e-12", [] { return suite("kernel"); }}},
        {9, {"simulation within 3 standard errors of the exact gain, reproducible",
             [] { return suite("simulation"); }}},
        {10, {"policy iteration: gain non-increasing, at most 50 iterations",
              [] { return suite("policy-iteration"); }}},
    };
    return all;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> run;
    if (argc > 1) {
        run.push_back(std::atoi(argv[1]));
        if (!criteria().count(run.front())) {
            std::cerr << "unknown criterion " << argv[1] << '\n';
            return 2;
        }
    } else {
        for (const auto& [id, c] : criteria()) run.push_back(id);
    }
    int failed = 0;
    for (int id : run) {
        const auto& [title, check] = criteria().at(id);
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += o.pass ? 0 : 1;
        std::cout << "criterion " << std::setw(2) << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << title
                  << "  [" << std::fixed << std::setprecision(2) << secs << " s]\n    " << o.detail << '\n';
        std::cout.unsetf(std::ios::fixed);
    }
    std::cout << (run.size() - failed) << '/' << run.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
