// SPDX-License-Identifier: Apache-2.0

#include "irsmimo/scenario.hpp"

#include <cmath>
#include <numbers>

namespace irsmimo {

using nlohmann::json;

std::string to_string(CovarianceModel model)
{
    switch (model) {
    case CovarianceModel::Identity:
        return "identity";
    case CovarianceModel::Exponential:
        return "model1";
    case CovarianceModel::Sinc:
        return "model2";
    }
    return "unknown";
}

CovarianceModel covariance_model_from_string(const std::string &name)
{
    if (name == "identity")
        return CovarianceModel::Identity;
    if (name == "model1" || name == "exponential")
        return CovarianceModel::Exponential;
    if (name == "model2" || name == "sinc")
        return CovarianceModel::Sinc;
    throw ConfigError("unknown covariance_model '" + name + "'");
}

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

double dbm_to_watts(double dbm)
{
    return 1e-3 * db_to_linear(dbm);
}

void ScenarioConfig::resolve()
{
    const auto users = static_cast<std::size_t>(std::max(K, 0));
    auto broadcast = [users](auto &values, auto fallback) {
        if (values.empty())
            values.assign(users, fallback);
        else if (values.size() == 1 && users > 1)
            values.assign(users, values.front());
    };
    broadcast(E_w, 1e-3);
    broadcast(c_B_k, c_B);
    broadcast(c_I_k, c_I);

    if (!d_IU.empty()) {
        broadcast(d_IU, d_IU.front());
        if (d_BU.empty())
            d_BU.assign(d_IU.size(), user_center_to_bs);
        broadcast(d_BU, d_BU.front());
        return;
    }

    // IRS at the origin, BS at (d_BI, 0); disk centre fixed by its two distances.
    const double a = user_center_to_irs;
    const double b = user_center_to_bs;
    const double cx = (d_BI * d_BI + a * a - b * b) / (2.0 * d_BI);
    const double cy2 = a * a - cx * cx;
    if (cy2 < 0.0)
        throw ConfigError("user disk centre distances are inconsistent with d_BI");
    const double cy = std::sqrt(cy2);

    Rng rng(derive_seed(seed, 0x706c6163 /* "plac" */));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    d_IU.clear();
    d_BU.clear();
    for (std::size_t k = 0; k < users; ++k) {
        const double r = user_radius * std::sqrt(unit(rng));
        const double theta = 2.0 * std::numbers::pi * unit(rng);
        const double x = cx + r * std::cos(theta);
        const double y = cy + r * std::sin(theta);
        d_IU.push_back(std::hypot(x, y));
        d_BU.push_back(std::hypot(x - d_BI, y));
    }
}

void ScenarioConfig::validate() const
{
    if (K < 1)
        throw ConfigError("K must be at least 1");
    if (T <= K)
        throw ConfigError("T must exceed K");
    if (M < 1 || N < 1)
        throw ConfigError("M and N must be positive");
    if (!(sigma2_w > 0.0))
        throw ConfigError("sigma2 must be positive");
    if (!(p_t_w > 0.0))
        throw ConfigError("pilot power must be positive");
    const auto users = static_cast<std::size_t>(K);
    if (E_w.size() != users || d_IU.size() != users || d_BU.size() != users || c_B_k.size() != users ||
        c_I_k.size() != users)
        throw ConfigError("per-user settings must have K entries");
    for (double e : E_w)
        if (!(e >= 0.0))
            throw ConfigError("E must be non-negative");
    for (double d : d_IU)
        if (!(d > 0.0))
            throw ConfigError("d_IU must be positive");
    if (!(d_BI > 0.0) || !(d0 > 0.0))
        throw ConfigError("distances must be positive");
    auto check_c = [](cdouble c) {
        if (!(std::abs(c) < 1.0))
            throw ConfigError("exponential correlation coefficients need |c| < 1");
    };
    check_c(c_B);
    check_c(c_I);
    for (auto c : c_B_k)
        check_c(c);
    for (auto c : c_I_k)
        check_c(c);
    if (!(spacing_over_wavelength > 0.0))
        throw ConfigError("spacing_over_wavelength must be positive");
    if (irs_rows < 0 || (irs_rows > 0 && N % irs_rows != 0))
        throw ConfigError("irs_rows must divide N");
}

// --------------------------------------------------------------------------

namespace {

cdouble complex_from_json(const json &v, const std::string &key)
{
    if (v.is_number())
        return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    if (v.is_object() && v.contains("abs")) {
        const double arg = v.contains("arg_deg") ? v.at("arg_deg").get<double>() * std::numbers::pi / 180.0 : 0.0;
        return std::polar(v.at("abs").get<double>(), arg);
    }
    throw ConfigError("key '" + key + "' must be a number, [re, im] or {abs, arg_deg}");
}

json complex_to_json(cdouble c)
{
    return json::array({c.real(), c.imag()});
}

class Reader
{
  public:
    Reader(const json &j, std::set<std::string> &consumed) : j_(j), consumed_(consumed) {}

    bool has(const std::string &key) const { return j_.contains(key); }

    template <typename T>
    void get(const std::string &key, T &out)
    {
        if (!j_.contains(key))
            return;
        consumed_.insert(key);
        try {
            out = j_.at(key).get<T>();
        } catch (const json::exception &) {
            throw ConfigError("key '" + key + "' has the wrong type");
        }
    }

    // Scalar or list of doubles.
    void get_list(const std::string &key, std::vector<double> &out, double (*convert)(double) = nullptr)
    {
        if (!j_.contains(key))
            return;
        consumed_.insert(key);
        const json &v = j_.at(key);
        out.clear();
        try {
            if (v.is_array())
                for (const auto &e : v)
                    out.push_back(e.get<double>());
            else
                out.push_back(v.get<double>());
        } catch (const json::exception &) {
            throw ConfigError("key '" + key + "' must be a number or a list of numbers");
        }
        if (convert)
            for (auto &x : out)
                x = convert(x);
    }

    void get_complex(const std::string &key, cdouble &out)
    {
        if (!j_.contains(key))
            return;
        consumed_.insert(key);
        out = complex_from_json(j_.at(key), key);
    }

    void get_complex_list(const std::string &key, std::vector<cdouble> &out)
    {
        if (!j_.contains(key))
            return;
        consumed_.insert(key);
        const json &v = j_.at(key);
        out.clear();
        // A two-number array is one complex value; a list of values otherwise.
        const bool single = !v.is_array() || (v.size() == 2 && v[0].is_number() && v[1].is_number());
        if (single)
            out.push_back(complex_from_json(v, key));
        else
            for (const auto &e : v)
                out.push_back(complex_from_json(e, key));
    }

    void get_dbm(const std::string &key, double &out)
    {
        double dbm = 0.0;
        if (!j_.contains(key))
            return;
        get(key, dbm);
        out = dbm_to_watts(dbm);
    }

  private:
    const json &j_;
    std::set<std::string> &consumed_;
};

} // namespace

ScenarioConfig scenario_from_json(const json &j, std::set<std::string> &consumed)
{
    if (!j.is_object())
        throw ConfigError("configuration must be a JSON object");

    ScenarioConfig c;
    Reader r(j, consumed);
    r.get("K", c.K);
    r.get("M", c.M);
    r.get("N", c.N);
    r.get("T", c.T);

    r.get_list("E_dbm", c.E_w, &dbm_to_watts);
    r.get_list("E_w", c.E_w);
    r.get_dbm("p_t_dbm", c.p_t_w);
    r.get("p_t_w", c.p_t_w);

    if (r.has("noise_psd_dbm_hz")) {
        double psd = 0.0;
        double bandwidth = 1e6;
        r.get("noise_psd_dbm_hz", psd);
        r.get("bandwidth_hz", bandwidth);
        c.sigma2_w = dbm_to_watts(psd) * bandwidth;
    }
    r.get_dbm("sigma2_dbm", c.sigma2_w);
    r.get("sigma2_w", c.sigma2_w);

    r.get("d_BI", c.d_BI);
    r.get("d0", c.d0);
    if (r.has("beta0_db")) {
        double db = 0.0;
        r.get("beta0_db", db);
        c.beta0 = db_to_linear(db);
    }
    r.get("beta0", c.beta0);
    r.get("alpha1", c.alpha1);
    r.get("alpha2", c.alpha2);
    r.get_list("d_IU", c.d_IU);
    r.get("direct_link", c.direct_link);
    r.get("alpha_BU", c.alpha_BU);
    r.get_list("d_BU", c.d_BU);
    r.get("user_radius", c.user_radius);
    r.get("user_center_to_irs", c.user_center_to_irs);
    r.get("user_center_to_bs", c.user_center_to_bs);

    std::string model = to_string(c.covariance_model);
    r.get("covariance_model", model);
    c.covariance_model = covariance_model_from_string(model);
    r.get_complex("c_B", c.c_B);
    r.get_complex_list("c_B_k", c.c_B_k);
    r.get_complex("c_I", c.c_I);
    r.get_complex_list("c_I_k", c.c_I_k);
    r.get("spacing_over_wavelength", c.spacing_over_wavelength);
    r.get("irs_rows", c.irs_rows);
    r.get("seed", c.seed);
    std::string pattern = to_string(c.pattern);
    r.get("pattern", pattern);
    try {
        c.pattern = pattern_kind_from_string(pattern);
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }

    c.resolve();
    c.validate();
    return c;
}

json scenario_to_json(const ScenarioConfig &c)
{
    json j;
    j["K"] = c.K;
    j["M"] = c.M;
    j["N"] = c.N;
    j["T"] = c.T;
    j["E_w"] = c.E_w;
    j["p_t_w"] = c.p_t_w;
    j["sigma2_w"] = c.sigma2_w;
    j["d_BI"] = c.d_BI;
    j["d0"] = c.d0;
    j["beta0"] = c.beta0;
    j["alpha1"] = c.alpha1;
    j["alpha2"] = c.alpha2;
    j["d_IU"] = c.d_IU;
    j["direct_link"] = c.direct_link;
    j["alpha_BU"] = c.alpha_BU;
    j["d_BU"] = c.d_BU;
    j["user_radius"] = c.user_radius;
    j["user_center_to_irs"] = c.user_center_to_irs;
    j["user_center_to_bs"] = c.user_center_to_bs;
    j["covariance_model"] = to_string(c.covariance_model);
    j["c_B"] = complex_to_json(c.c_B);
    j["c_I"] = complex_to_json(c.c_I);
    j["c_B_k"] = json::array();
    for (auto v : c.c_B_k)
        j["c_B_k"].push_back(complex_to_json(v));
    j["c_I_k"] = json::array();
    for (auto v : c.c_I_k)
        j["c_I_k"].push_back(complex_to_json(v));
    j["spacing_over_wavelength"] = c.spacing_over_wavelength;
    j["irs_rows"] = c.irs_rows;
    j["seed"] = c.seed;
    j["pattern"] = to_string(c.pattern);
    return j;
}

CovarianceSet build_covariance(const ScenarioConfig &config)
{
    config.validate();
    const auto K = static_cast<std::size_t>(config.K);
    const Eigen::Index M = config.M;
    const Eigen::Index N = config.N;

    CovarianceSet cov;
    cov.beta_BI = path_loss(config.d_BI, config.d0, config.beta0, config.alpha2);
    for (std::size_t k = 0; k < K; ++k) {
        cov.beta_IU.push_back(path_loss(config.d_IU[k], config.d0, config.beta0, config.alpha1));
        cov.beta_BU.push_back(config.direct_link
                                  ? path_loss(config.d_BU[k], config.d0, config.beta0, config.alpha_BU)
                                  : 0.0);
    }

    switch (config.covariance_model) {
    case CovarianceModel::Identity:
        cov.C_B = CMatrix::Identity(M, M);
        cov.C_I = CMatrix::Identity(N, N);
        cov.C_B_k.assign(K, cov.C_B);
        cov.C_I_k.assign(K, cov.C_I);
        break;
    case CovarianceModel::Exponential:
        cov.C_B = build_exponential_cov(M, config.c_B);
        cov.C_I = build_exponential_cov(N, config.c_I);
        for (std::size_t k = 0; k < K; ++k) {
            cov.C_B_k.push_back(build_exponential_cov(M, config.c_B_k[k]));
            cov.C_I_k.push_back(build_exponential_cov(N, config.c_I_k[k]));
        }
        break;
    case CovarianceModel::Sinc: {
        const GridShape grid = config.irs_rows > 0 ? GridShape{config.irs_rows, N / config.irs_rows}
                                                   : near_square_grid(N);
        // Only the spacing/wavelength ratio matters.
        const CMatrix irs = build_sinc_cov(N, grid, config.spacing_over_wavelength, 1.0);
        cov.C_B = build_exponential_cov(M, config.c_B);
        cov.C_I = irs;
        for (std::size_t k = 0; k < K; ++k) {
            cov.C_B_k.push_back(build_exponential_cov(M, config.c_B_k[k]));
            cov.C_I_k.push_back(irs);
        }
        break;
    }
    }
    cov.validate();
    return cov;
}

ReflectionPattern scenario_pattern(const ScenarioConfig &config)
{
    Rng rng(derive_seed(config.seed, 0x706869 /* "phi" */, static_cast<std::uint64_t>(config.N)));
    return make_pattern(config.N, config.pattern, rng);
}

ScenarioConfig with_sizes(const ScenarioConfig &config, int N, int M)
{
    ScenarioConfig sized = config;
    sized.N = N;
    sized.M = M;
    if (sized.covariance_model == CovarianceModel::Sinc && sized.irs_rows > 0 && N % sized.irs_rows != 0)
        sized.irs_rows = 0;
    sized.validate();
    return sized;
}

} // namespace irsmimo
