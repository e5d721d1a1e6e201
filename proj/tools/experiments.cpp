// SPDX-License-Identifier: Apache-2.0

#include "experiments.hpp"

#include "irsmimo/estimation.hpp"
#include "irsmimo/optimizer.hpp"
#include "irsmimo/rate.hpp"
#include "irsmimo/scenario.hpp"
#include "irsmimo/validator.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace irsmimo::tools {

using nlohmann::json;

std::string format_double(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string CsvTable::render() const
{
    std::ostringstream out;
    auto line = [&](const std::vector<std::string> &cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            out << (i ? "," : "") << cells[i];
        out << '\n';
    };
    line(header);
    for (const auto &row : rows)
        line(row);
    return out.str();
}

namespace {

using Ladder = std::vector<std::pair<int, int>>;

// Experiment keys next to the scenario keys; everything read is echoed.
class Params
{
  public:
    Params(const json &j, std::set<std::string> &consumed, json &echo) : j_(j), consumed_(consumed), echo_(echo) {}

    template <typename T>
    T get(const std::string &key, T fallback)
    {
        if (j_.contains(key)) {
            consumed_.insert(key);
            try {
                fallback = j_.at(key).get<T>();
            } catch (const json::exception &) {
                throw ConfigError("key '" + key + "' has the wrong type");
            }
        }
        echo_[key] = fallback;
        return fallback;
    }

    bool has(const std::string &key) const { return j_.contains(key); }

    int positive(const std::string &key, int fallback)
    {
        const int v = get<int>(key, fallback);
        if (v < 1)
            throw ConfigError("key '" + key + "' must be a positive integer");
        return v;
    }

    std::vector<int> positive_list(const std::string &key, std::vector<int> fallback)
    {
        auto v = get<std::vector<int>>(key, std::move(fallback));
        if (v.empty())
            throw ConfigError("key '" + key + "' must not be empty");
        for (int x : v)
            if (x < 1)
                throw ConfigError("key '" + key + "' must hold positive integers");
        return v;
    }

    // "ladder": [[N, M], ...], or every N in "n_values" with M = N/q for q in "q_values".
    Ladder ladder(std::vector<int> n_default, std::vector<int> q_default)
    {
        Ladder out;
        if (has("ladder")) {
            for (const auto &nm : get<std::vector<std::vector<int>>>("ladder", {})) {
                if (nm.size() != 2 || nm[0] < 1 || nm[1] < 1)
                    throw ConfigError("ladder entries must be positive [N, M] pairs");
                out.emplace_back(nm[0], nm[1]);
            }
            if (out.empty())
                throw ConfigError("key 'ladder' must not be empty");
            return out;
        }
        const auto n_values = positive_list("n_values", std::move(n_default));
        const auto q_values = positive_list("q_values", std::move(q_default));
        for (int q : q_values)
            for (int n : n_values) {
                if (n % q != 0)
                    throw ConfigError("N = " + std::to_string(n) + " is not a multiple of q = " + std::to_string(q));
                out.emplace_back(n, n / q);
            }
        return out;
    }

  private:
    const json &j_;
    std::set<std::string> &consumed_;
    json &echo_;
};

struct Context
{
    ScenarioConfig scenario;
    Params params;
    ExperimentReport &report;
    unsigned threads;
};

std::string str(std::size_t v)
{
    return std::to_string(v);
}

std::size_t checked_user(const ScenarioConfig &s, int k, const std::string &key)
{
    if (k < 0 || k >= s.K)
        throw ConfigError("key '" + key + "' must name a user in [0, K)");
    return static_cast<std::size_t>(k);
}

std::vector<std::string> validator_header()
{
    return {"statistic_name", "N", "M", "trial", "value"};
}

void validate_assumptions(Context &ctx)
{
    const ScenarioConfig &s = ctx.scenario;
    const std::size_t k = checked_user(s, ctx.params.get<int>("user", 0), "user");
    const auto n_values = ctx.params.positive_list("n_values", {50, 100, 200, 400, 600, 800, 1000});
    const std::size_t trials = static_cast<std::size_t>(ctx.params.positive("spectral_trials", 10));
    const std::size_t j = checked_user(s, ctx.params.get<int>("pair_user", s.K > 1 ? 1 : 0), "pair_user");
    const auto hard_n = ctx.params.positive_list("hardening_n_values", {64, 128, 256, 512});
    const int q = ctx.params.positive("q", 8);
    const std::size_t blocks = static_cast<std::size_t>(ctx.params.positive("blocks", 200));

    CsvTable table{"validator.csv", validator_header(), {}};
    json &summary = ctx.report.summary;

    const ConvergenceSeries sweep = min_singular_sweep(s, n_values, k);
    for (std::size_t i = 0; i < sweep.values.size(); ++i) {
        table.rows.push_back({"min_singular", std::to_string(sweep.n_values[i]), std::to_string(s.M), "0",
                              format_double(sweep.values[i])});
        summary["min_singular"].push_back({{"N", sweep.n_values[i]}, {"value", sweep.values[i]}});
    }

    const CovarianceSet cov = build_covariance(s);
    Rng rng(derive_seed(s.seed, 0x73706563 /* spectra */));
    const auto spectra = spectral_dist_Ckj(cov, scenario_pattern(s), k, j, trials, rng);
    std::map<std::string, double> worst_norm;
    for (std::size_t r = 0; r < spectra.size(); ++r) {
        const SpectralReport &rep = spectra[r];
        for (Eigen::Index i = 0; i < rep.singular_values.size(); ++i)
            table.rows.push_back({"sv_" + rep.matrix_id, std::to_string(rep.N), std::to_string(rep.M), str(r / 2),
                                  format_double(rep.singular_values(i))});
        worst_norm[rep.matrix_id] = std::max(worst_norm[rep.matrix_id], rep.spectral_norm);
    }
    for (const auto &[id, norm] : worst_norm)
        summary["max_spectral_norm"][id] = norm;

    for (int n : hard_n) {
        if (n % q != 0)
            throw ConfigError("hardening N = " + std::to_string(n) + " is not a multiple of q");
        const ScenarioConfig sized = with_sizes(s, n, n / q);
        const HardeningStats st = hardening_favorable_stats(build_covariance(sized), scenario_pattern(sized), blocks,
                                                            derive_seed(s.seed, 0x68617264 /* "hard" */, n),
                                                            ctx.threads);
        const std::string N = std::to_string(n), M = std::to_string(n / q);
        json point{{"N", n}, {"M", n / q}};
        for (std::size_t u = 0; u < st.hardening.size(); ++u) {
            for (std::size_t b = 0; b < st.hardening[u].samples.size(); ++b)
                table.rows.push_back({"hardening_u" + str(u), N, M, str(b), format_double(st.hardening[u].samples[b])});
            point["hardening_median"].push_back(st.hardening[u].median);
        }
        for (const auto &pair : st.favorable) {
            const std::string name = "favorable_u" + str(pair.k) + "_u" + str(pair.j);
            for (std::size_t b = 0; b < pair.samples.size(); ++b)
                table.rows.push_back({name, N, M, str(b), format_double(pair.samples[b])});
            point["favorable_median"].push_back(pair.median);
        }
        summary["hardening"].push_back(point);
    }
    ctx.report.tables.push_back(std::move(table));
}

void validate_gaussianity(Context &ctx)
{
    const ScenarioConfig &s = ctx.scenario;
    const std::size_t samples = static_cast<std::size_t>(ctx.params.positive("samples", 10000));
    const double significance = ctx.params.get<double>("significance", 0.01);
    if (significance != 0.01 && significance != 0.05)
        throw ConfigError("significance must be 0.01 or 0.05");
    if (samples < 1000)
        throw ConfigError("samples must be at least 1000");
    if (s.K < 2 || s.M < 2)
        throw ConfigError("the Gaussianity check needs K >= 2 and M >= 2");

    const GaussianityReport g = gaussianity_check(build_covariance(s), scenario_pattern(s), samples,
                                                  derive_seed(s.seed, 0x67617573 /* "gaus" */), significance,
                                                  ctx.threads);
    CsvTable table{"gaussianity.csv", validator_header(), {}};
    const std::string N = std::to_string(s.N), M = std::to_string(s.M);
    auto emit = [&](const std::string &name, const std::vector<double> &v) {
        for (std::size_t i = 0; i < v.size(); ++i)
            table.rows.push_back({name, N, M, str(i), format_double(v[i])});
    };
    emit("v11", g.v11);
    emit("v12", g.v12);
    emit("v21", g.v21);

    json &summary = ctx.report.summary;
    for (const auto &m : g.marginals)
        summary["marginals"].push_back({{"name", m.name},
                                        {"theoretical_variance", m.theoretical_variance},
                                        {"sample_variance", m.sample_variance},
                                        {"ks_statistic", m.ks_statistic},
                                        {"critical_value", m.critical_value},
                                        {"passed", m.passed}});
    summary["corr_v11_v12"] = {g.corr_v11_v12, g.corr_v11_v12_expected};
    summary["corr_v11_v21"] = {g.corr_v11_v21, g.corr_v11_v21_expected};
    summary["small_n"] = g.small_n;
    summary["passed"] = g.passed;
    ctx.report.tables.push_back(std::move(table));
}

void validate_estimation(Context &ctx)
{
    const Ladder ladder = ctx.params.ladder({100, 200, 400, 800}, {5, 10, 20});
    CsvTable table{"mse.csv", {"N", "M", "user", "tr_F_over_M", "bound"}, {}};
    for (const MsePoint &p : mse_trend(ctx.scenario, ladder))
        table.rows.push_back({std::to_string(p.N), std::to_string(p.M), str(p.user), format_double(p.tr_F_over_M),
                              format_double(p.bound_over_M)});
    ctx.report.summary["bound_violations"] = 0;
    ctx.report.tables.push_back(std::move(table));
}

void validate_rate(Context &ctx)
{
    const Ladder ladder = ctx.params.ladder({100, 200, 400, 800}, {5, 10, 20});
    const std::size_t blocks = static_cast<std::size_t>(ctx.params.positive("blocks", 200));
    CsvTable table{"rate.csv", {"N", "M", "q", "user", "rate_mc", "rate_asym", "gap"}, {}};
    for (const RateReport &r : validate_large_array_rate(ctx.scenario, ladder, blocks, ctx.threads)) {
        for (std::size_t k = 0; k < r.rate_mc.size(); ++k) {
            const double gap = std::abs(r.rate_mc[k] - r.rate_asym[k]) / r.rate_asym[k];
            table.rows.push_back({std::to_string(r.N), std::to_string(r.M), format_double(r.q), str(k),
                                  format_double(r.rate_mc[k]), format_double(r.rate_asym[k]), format_double(gap)});
        }
        ctx.report.summary["sum_rates"].push_back(
            {{"N", r.N}, {"M", r.M}, {"sum_mc", r.sum_mc}, {"sum_asym", r.sum_asym}, {"gap", r.gap}});
    }
    ctx.report.tables.push_back(std::move(table));
}

std::vector<double> read_targets(Context &ctx)
{
    const int K = ctx.scenario.K;
    std::vector<double> targets;
    if (ctx.params.has("targets_bps") && ctx.params.get<json>("targets_bps", {}).is_number())
        targets.assign(K, ctx.params.get<double>("targets_bps", 1.0));
    else
        targets = ctx.params.get<std::vector<double>>("targets_bps", std::vector<double>(K, 1.0));
    if (targets.size() != static_cast<std::size_t>(K))
        throw ConfigError("targets_bps needs one value per user");
    for (double t : targets)
        if (!(t >= 0.0))
            throw ConfigError("targets_bps must be non-negative");
    return targets;
}

ScaOptions read_sca_options(Context &ctx)
{
    ScaOptions o;
    o.delta = ctx.params.get<double>("delta", o.delta);
    o.max_iter = ctx.params.positive("max_iter", o.max_iter);
    o.inner.tol = ctx.params.get<double>("inner_tol", o.inner.tol);
    o.inner.max_iter = ctx.params.positive("inner_max_iter", o.inner.max_iter);
    const std::string init = ctx.params.get<std::string>("init", "all_one");
    if (init == "all_one")
        o.init = ScaInit::AllOne;
    else if (init == "random_phase")
        o.init = ScaInit::RandomPhase;
    else
        throw ConfigError("init must be all_one or random_phase");
    if (!(o.delta > 0.0) || !(o.inner.tol > 0.0))
        throw ConfigError("delta and inner_tol must be positive");
    return o;
}

void optimize(Context &ctx)
{
    const ScenarioConfig &s = ctx.scenario;
    const std::vector<double> targets = read_targets(ctx);
    const ScaOptions options = read_sca_options(ctx);
    Rng rng(derive_seed(s.seed, 0x6f7074 /* "opt" */));
    const ScaResult r = sca_optimize(build_covariance(s), targets, s.T, s.sigma2_w, rng, options);

    CsvTable trace{"trace.csv", {"iteration", "objective_w", "step_norm_sq"}, {}};
    for (const auto &it : r.trace.iterations)
        trace.rows.push_back({std::to_string(it.iteration), format_double(it.objective_w),
                              format_double(it.step_norm_sq)});
    CsvTable pattern{"pattern.csv", {"n", "phi_re", "phi_im"}, {}};
    const CVector &phi = r.solution.phi.coefficients();
    for (Eigen::Index n = 0; n < phi.size(); ++n)
        pattern.rows.push_back({std::to_string(n), format_double(phi(n).real()), format_double(phi(n).imag())});

    json &summary = ctx.report.summary;
    summary["converged"] = r.trace.converged;
    summary["iterations"] = static_cast<int>(r.trace.iterations.size()) - 1;
    summary["sum_power_w"] = r.solution.sum_power;
    summary["p_w"] = r.solution.p;
    summary["rates_bps"] = r.solution.rates;
    summary["targets_bps"] = targets;
    ctx.report.tables.push_back(std::move(trace));
    ctx.report.tables.push_back(std::move(pattern));
}

void compare(Context &ctx)
{
    const ScenarioConfig &s = ctx.scenario;
    const auto sweep = ctx.params.get<std::vector<double>>("target_sweep", {1.0, 2.0, 3.0, 4.0, 5.0});
    const auto schemes = ctx.params.get<std::vector<std::string>>(
        "schemes", {"sca", "all_one", "rand_amp_rand_phase", "unit_amp_rand_phase"});
    const ScaOptions options = read_sca_options(ctx);
    if (sweep.empty() || schemes.empty())
        throw ConfigError("target_sweep and schemes must not be empty");
    for (const auto &scheme : schemes)
        if (scheme != "sca") {
            try {
                pattern_kind_from_string(scheme);
            } catch (const std::invalid_argument &) {
                throw ConfigError("unknown scheme '" + scheme + "'");
            }
        }
    for (double t : sweep)
        if (!(t >= 0.0))
            throw ConfigError("target_sweep must be non-negative");

    const CovarianceSet cov = build_covariance(s);
    CsvTable table{"compare.csv", {"scheme", "target_bps", "sum_power_w"}, {}};
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        Rng rng(derive_seed(s.seed, 0x636d70 /* "cmp" */, i));
        const std::vector<double> targets(static_cast<std::size_t>(s.K), sweep[i]);
        for (const ComparisonRow &row : compare_sum_power(cov, targets, s.T, s.sigma2_w, schemes, rng, options))
            table.rows.push_back({row.scheme, format_double(row.target_bps), format_double(row.sum_power_w)});
    }
    ctx.report.tables.push_back(std::move(table));
}

using Runner = void (*)(Context &);

const std::vector<std::pair<std::string, Runner>> &runners()
{
    static const std::vector<std::pair<std::string, Runner>> table{
        {"validate-assumptions", validate_assumptions},
        {"validate-gaussianity", validate_gaussianity},
        {"validate-estimation", validate_estimation},
        {"validate-rate", validate_rate},
        {"optimize", optimize},
        {"compare", compare},
    };
    return table;
}

} // namespace

const std::vector<std::string> &experiment_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto &[name, run] : runners())
            out.push_back(name);
        return out;
    }();
    return names;
}

ExperimentReport run_experiment(const std::string &name, const json &config, unsigned threads)
{
    Runner runner = nullptr;
    for (const auto &[n, run] : runners())
        if (n == name)
            runner = run;
    if (!runner)
        throw ConfigError("unknown experiment '" + name + "'");
    if (!config.is_object())
        throw ConfigError("config must be a JSON object");
    if (threads < 1)
        throw ConfigError("threads must be at least 1");

    const auto start = std::chrono::steady_clock::now();
    ExperimentReport report;
    report.experiment = name;

    std::set<std::string> consumed;
    json echo = json::object();
    Context ctx{scenario_from_json(config, consumed), Params(config, consumed, echo), report, threads};
    runner(ctx);

    for (const auto &[key, value] : config.items())
        if (!consumed.count(key))
            throw ConfigError("unknown key '" + key + "'");

    report.config = scenario_to_json(ctx.scenario);
    report.config.update(echo);
    report.seed = ctx.scenario.seed;
    report.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

void write_report(const ExperimentReport &report, const std::filesystem::path &dir)
{
    std::filesystem::create_directories(dir);
    json files = json::array();
    for (const auto &table : report.tables) {
        std::ofstream out(dir / table.file, std::ios::binary);
        out << table.render();
        if (!out)
            throw std::runtime_error("cannot write " + (dir / table.file).string());
        files.push_back(table.file);
    }
    const json doc{{"schema_version", schema_version},
                   {"experiment", report.experiment},
                   {"seed", report.seed},
                   {"config", report.config},
                   {"summary", report.summary},
                   {"files", files},
                   {"wall_clock_s", report.wall_clock_s}};
    std::ofstream out(dir / "report.json", std::ios::binary);
    out << doc.dump(2) << '\n';
    if (!out)
        throw std::runtime_error("cannot write " + (dir / "report.json").string());
}

} // namespace irsmimo::tools
