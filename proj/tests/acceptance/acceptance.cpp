// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "micro.hpp"
#include "mera/collective.hpp"
#include "mera/experiments.hpp"
#include "mera/plan.hpp"
#include "mera/queueing.hpp"
#include "mera/stats.hpp"

using namespace mera;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
    std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    failures += !pass;
}

std::string fmt(const char* f, double a) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

// Erlang C by direct summation in long double.
void erlang_oracle(int n, long double rho, long double& p0, long double& pq) {
    const long double a = n * rho;
    long double sum = 0.0L;
    for (int k = 0; k < n; ++k) sum += std::pow(a, k) / std::tgamma(static_cast<long double>(k + 1));
    const long double tail = std::pow(a, n) / (std::tgamma(static_cast<long double>(n + 1)) * (1.0L - rho));
    p0 = 1.0L / (sum + tail);
    pq = tail * p0;
}

void check_erlang() {
    auto t0 = clock_type::now();
    double worst = 0.0;
    bool n1 = true;
    for (int n = 1; n <= 64; ++n)
        for (int k = 1; k <= 19; ++k) {
            const double rho = 0.05 * k;
            long double p0, pq;
            erlang_oracle(n, rho, p0, pq);
            ErlangC e = erlang_c(n, rho);
            worst = std::max({worst, static_cast<double>(std::fabs(e.empty_prob - p0)),
                              static_cast<double>(std::fabs(e.wait_prob - pq))});
            if (n == 1) n1 = n1 && std::fabs(e.wait_prob - rho) < 1e-12;
        }
    const double dt = seconds_since(t0);
    report(1, worst < 1e-12 && n1 && dt < 1.0,
           fmt("max |err| %.3g", worst) + (n1 ? ", n=1 gives rho" : ", n=1 mismatch") + fmt(", %.3f s", dt));
}

void check_mm1() {
    double worst = 0.0;
    int points = 0;
    for (int a = 0; a < 10; ++a)
        for (int b = 0; b < 10; ++b)
            for (int c = 0; c < 10; ++c) {
                const double mu = 50.0 + 95.0 * a, f = 0.1 + 0.1 * b;
                const double zeta = mu * f * (0.05 + 0.09 * c);
                worst = std::max(worst, std::fabs(waiting_time(1, mu, mu, f, zeta) - 1.0 / (mu * f - zeta)));
                ++points;
            }
    report(2, worst <= 1e-9 && points == 1000, fmt("%g points", points) + fmt(", max |err| %.3g", worst));
}

void check_plan_minimum() {
    int match = 0, total = 0;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        auto vs = fixture::validated(micro::instance(seed));
        auto st = fixture::first_round(vs);
        CostModel m(vs, st);
        std::vector<ServiceIndex> recv;
        for (std::size_t i = 0; i < st.services.size(); ++i) recv.push_back(i);
        PlanOptions opt;
        opt.seed = seed;
        auto plans = generate_plans("fog-0", recv, m, opt);
        const double oracle = micro::brute_force_minimum(m, recv);
        match += std::fabs(plans[0].local_cost() - oracle) <= 1e-12 * std::max(1.0, std::fabs(oracle));
        ++total;
    }
    report(3, match == total, fmt("%g", match) + fmt("/%g micro instances at the exhaustive minimum", total));
}

bool is(const RowKey& k, const char* suite, const char* regime) { return k.suite == suite && k.regime == regime; }

// seed -> strategy -> aggregate of `metric` over exp1 default-regime rows
std::map<std::uint64_t, std::map<std::string, double>> per_seed(const SuiteResult& r, const std::string& metric,
                                                                bool average) {
    std::map<std::uint64_t, std::map<std::string, std::pair<double, int>>> acc;
    for (const auto& row : r.metrics)
        if (is(row.key, "exp1", "default") && row.metric == metric) {
            auto& a = acc[row.key.seed][row.key.strategy];
            a.first += row.value;
            a.second += 1;
        }
    std::map<std::uint64_t, std::map<std::string, double>> out;
    for (auto& [seed, by] : acc)
        for (auto& [s, a] : by) out[seed][s] = average ? a.first / a.second : a.first;
    return out;
}

void check_suite_criteria(const SuiteResult& r, double run_seconds) {
    report(4, r.nonmonotone_rounds == 0,
           fmt("%g", static_cast<double>(r.nonmonotone_rounds)) + fmt(" non-monotone of %g rounds", r.rounds));

    {
        auto var = per_seed(r, "variance", true);
        double m = 0, b = 0, g = 0;
        for (auto& [seed, by] : var) {
            m += by["mera"];
            b += by["baseline"];
            g += by["greedy"];
        }
        const double rb = b / m, rg = g / m;
        report(5, rb >= 10.0 && rg >= 10.0 && run_seconds < 120.0,
               fmt("baseline/mera %.2f", rb) + fmt(", greedy/mera %.2f", rg) + fmt(", suite run %.1f s", run_seconds));
    }
    {
        auto v = per_seed(r, "violation_cost", false);
        int wins = 0;
        double eb = 0, eg = 0;
        for (auto& [seed, by] : v) {
            wins += by["mera"] < by["baseline"] && by["mera"] < by["greedy"];
            eb += by["baseline"] - by["mera"];
            eg += by["greedy"] - by["mera"];
        }
        eb /= v.size();
        eg /= v.size();
        report(6, wins >= 9 && eg > eb,
               fmt("mera lowest on %g seeds", wins) + fmt(", mean excess baseline %.2f", eb) +
                   fmt(" greedy %.2f", eg));
    }
    {
        auto d = per_seed(r, "deployment_cost", false);
        int ok = 0;
        for (auto& [seed, by] : d) ok += by["greedy"] < by["baseline"] && by["baseline"] < by["mera"];
        report(7, ok == static_cast<int>(d.size()) && !d.empty(),
               fmt("greedy < baseline < mera on %g", ok) + fmt("/%g seeds", d.size()));
    }
    {
        // seed -> lambda -> metric -> (sum, count)
        std::map<std::uint64_t, std::map<double, std::map<std::string, std::pair<double, int>>>> acc;
        for (const auto& row : r.metrics)
            if (row.key.suite == "lambda" && row.key.lambda &&
                (row.metric == "selected_local_cost" || row.metric == "selected_global_cost")) {
                auto& a = acc[row.key.seed][*row.key.lambda][row.metric];
                a.first += row.value;
                a.second += 1;
            }
        int ok = 0;
        for (auto& [seed, by] : acc) {
            if (!by.count(0.0) || !by.count(1.0)) continue;
            auto mean = [&](double l, const char* m) { return by[l][m].first / by[l][m].second; };
            ok += mean(1.0, "selected_local_cost") <= mean(0.0, "selected_local_cost") &&
                  mean(0.0, "selected_global_cost") <= mean(1.0, "selected_global_cost");
        }
        report(8, ok == static_cast<int>(acc.size()) && !acc.empty(),
               fmt("extremes ordered on %g", ok) + fmt("/%g seeds", acc.size()));
    }
    {
        std::map<double, std::vector<std::pair<double, int>>> by_ratio;
        for (const auto& row : r.capacity) {
            auto& v = by_ratio[row.ratio];
            v.resize(row.cost.size());
            for (std::size_t s = 0; s < row.cost.size(); ++s) {
                v[s].first += row.cost[s];
                v[s].second += 1;
            }
        }
        bool pass = !by_ratio.empty() && !r.capacity_runs.empty();
        std::string detail;
        for (std::size_t s = 0; s < r.capacity_runs.size(); ++s) {
            std::vector<double> x, y;
            for (auto& [ratio, v] : by_ratio) {
                x.push_back(ratio);
                y.push_back(v[s].first / v[s].second);
            }
            const double rho = stats::spearman(x, y);
            pass = pass && rho <= -0.8;
            detail += r.capacity_runs[s] + fmt(" %.3f ", rho);
        }
        report(9, pass, fmt("%g capacity rows; spearman ", r.capacity.size()) + detail);
    }
    {
        std::map<std::uint64_t, std::map<std::string, double>> rho;
        for (const auto& row : r.metrics)
            if (is(row.key, "exp4", "default") && row.metric == "renewable_spearman")
                rho[row.key.seed][row.key.strategy] = row.value;
        int ok = 0;
        std::string vals;
        for (auto& [seed, by] : rho) {
            ok += by["mera"] >= 0.7 && by["mera"] > by["baseline"] && by["mera"] > by["greedy"];
            vals += fmt(" %.2f", by["mera"]);
        }
        report(10, ok == static_cast<int>(rho.size()) && !rho.empty(),
               fmt("%g", ok) + fmt("/%g seeds; mera rho", rho.size()) + vals);
    }
}

struct Csvs {
    std::string metrics, iterations, capacity, nodes;
    bool operator==(const Csvs&) const = default;
};

Csvs csvs(const SuiteResult& r) { return {metrics_csv(r), iterations_csv(r), capacity_csv(r), nodes_csv(r)}; }

void check_complexity() {
    std::vector<double> x, y;
    bool depth_ok = true;
    std::string depths;
    for (std::size_t n : {16, 32, 64, 128}) {
        auto p = complexity_probe(n, 20, 10, 1);
        // Iteration 0 is the greedy pass; the rest does the same work each.
        double per = 0.0;
        for (std::size_t t = 1; t < p.evaluations_per_iteration.size(); ++t) per += p.evaluations_per_iteration[t];
        per /= static_cast<double>(p.evaluations_per_iteration.size() - 1);
        x.push_back(static_cast<double>(n));
        y.push_back(per);
        const int want = static_cast<int>(std::ceil(std::log2(static_cast<double>(n))));
        depth_ok = depth_ok && p.depth == want;
        depths += fmt(" %g", p.depth);
    }
    auto fit = stats::linear_fit(x, y);
    report(12, fit.r_squared >= 0.99 && depth_ok,
           fmt("evaluations/iteration R^2 %.5f", fit.r_squared) + fmt(", slope %.1f; depths", fit.slope) + depths);
}

} // namespace

int main() {
    auto start = clock_type::now();
    check_erlang();
    check_mm1();
    check_plan_minimum();

    SuiteConfig config; // every suite, seeds 1-10
    config.workers = 1;
    auto t0 = clock_type::now();
    SuiteResult first = run_suites(config);
    const double run_seconds = seconds_since(t0);
    check_suite_criteria(first, run_seconds);

    {
        const Csvs a = csvs(first);
        SuiteConfig again = config;
        const Csvs b = csvs(run_suites(again));
        again.workers = 4;
        const Csvs c = csvs(run_suites(again));
        report(11, a == b && a == c,
               std::string(a == b ? "identical across runs" : "runs differ") +
                   (a == c ? ", identical with 4 workers" : ", 4 workers differ") + fmt(" (%g metric bytes)", a.metrics.size()));
    }

    check_complexity();

    const double total = seconds_since(start);
    report(13, total < 300.0, fmt("acceptance run %.1f s", total));
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
