// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "irsmimo/scenario.hpp"

#include <cmath>

using namespace irsmimo;
using nlohmann::json;

namespace {

ScenarioConfig parse(const json &j)
{
    std::set<std::string> consumed;
    return scenario_from_json(j, consumed);
}

} // namespace

TEST_CASE("unit conversions")
{
    CHECK(db_to_linear(-20.0) == doctest::Approx(0.01));
    CHECK(dbm_to_watts(0.0) == doctest::Approx(1e-3));
    CHECK(dbm_to_watts(-170.0) * 1e6 == doctest::Approx(1e-14));
}

TEST_CASE("defaults and dB keys")
{
    std::set<std::string> consumed;
    const ScenarioConfig c = scenario_from_json(
        json{{"E_dbm", 0.0}, {"noise_psd_dbm_hz", -170.0}, {"bandwidth_hz", 1e6}, {"beta0_db", -20.0}, {"K", 3}},
        consumed);
    CHECK(c.K == 3);
    CHECK(c.E_w.size() == 3);
    CHECK(c.E_w[2] == doctest::Approx(1e-3));
    CHECK(c.sigma2_w == doctest::Approx(1e-14));
    CHECK(c.beta0 == doctest::Approx(0.01));
    CHECK(consumed.count("noise_psd_dbm_hz") == 1);
    CHECK(consumed.count("bandwidth_hz") == 1);
    CHECK(c.c_B_k.size() == 3);
    CHECK(c.c_I_k[1] == c.c_I);
}

TEST_CASE("user placement lies in the disk")
{
    const ScenarioConfig c = parse(json{{"K", 50}, {"seed", 7}});
    for (int k = 0; k < 50; ++k) {
        CHECK(c.d_IU[k] >= 5.0 - 1e-9);
        CHECK(c.d_IU[k] <= 15.0 + 1e-9);
        CHECK(c.d_BU[k] >= 100.0 - 1e-9);
        CHECK(c.d_BU[k] <= 110.0 + 1e-9);
    }
    // Fixed per seed.
    CHECK(parse(json{{"K", 50}, {"seed", 7}}).d_IU == c.d_IU);
    CHECK(parse(json{{"K", 50}, {"seed", 8}}).d_IU != c.d_IU);
}

TEST_CASE("explicit distances and complex coefficients")
{
    const ScenarioConfig c = parse(json{{"K", 2},
                                        {"d_IU", {10.0, 12.0}},
                                        {"c_B", {{"abs", 0.5}, {"arg_deg", 90.0}}},
                                        {"c_I_k", {0.1, {0.2, 0.3}}}});
    CHECK(c.d_IU == std::vector<double>{10.0, 12.0});
    CHECK(std::abs(c.c_B - cdouble(0.0, 0.5)) < 1e-15);
    CHECK(c.c_I_k[0] == cdouble(0.1, 0.0));
    CHECK(c.c_I_k[1] == cdouble(0.2, 0.3));
}

TEST_CASE("config errors")
{
    CHECK_THROWS_AS(parse(json{{"K", 4}, {"T", 4}}), ConfigError);
    CHECK_THROWS_AS(parse(json{{"M", 0}}), ConfigError);
    CHECK_THROWS_AS(parse(json{{"sigma2_w", 0.0}}), ConfigError);
    CHECK_THROWS_AS(parse(json{{"c_I", 1.0}}), ConfigError);
    CHECK_THROWS_AS(parse(json{{"covariance_model", "model9"}}), ConfigError);
    CHECK_THROWS_AS(parse(json{{"K", "four"}}), ConfigError);
    CHECK_THROWS_AS(parse(json{{"K", 2}, {"d_IU", {1.0, 2.0, 3.0}}}), ConfigError);
    CHECK_THROWS_AS(parse(json::array()), ConfigError);
    CHECK_THROWS_AS(parse(json{{"pattern", "sdr"}}), ConfigError);
}

TEST_CASE("echo round-trips")
{
    const ScenarioConfig c = parse(json{{"K", 3}, {"N", 40}, {"covariance_model", "model2"}, {"seed", 99}});
    const json echo = scenario_to_json(c);
    const ScenarioConfig again = parse(echo);
    CHECK(scenario_to_json(again) == echo);
    CHECK(again.d_IU == c.d_IU);
}

TEST_CASE("build_covariance per model")
{
    ScenarioConfig c = parse(json{{"K", 2}, {"M", 4}, {"N", 12}, {"d_IU", 10.0}});
    CovarianceSet cov = build_covariance(c);
    CHECK(cov.beta_BI == doctest::Approx(3.981e-7).epsilon(1e-3));
    CHECK(cov.beta_IU[0] == doctest::Approx(7.943e-5).epsilon(1e-3));
    CHECK(cov.beta_BU[0] == 0.0);
    CHECK(cov.C_B(1, 0) == c.c_B);
    CHECK(cov.C_I(1, 0) == c.c_I);

    c.covariance_model = CovarianceModel::Identity;
    cov = build_covariance(c);
    CHECK(cov.C_I == CMatrix::Identity(12, 12));

    c.covariance_model = CovarianceModel::Sinc;
    cov = build_covariance(c);
    // 3 x 4 grid at quarter-wavelength spacing: neighbours along a row are sinc(0.5) apart.
    CHECK(cov.C_I(0, 1).real() == doctest::Approx(2.0 / M_PI));
    CHECK(cov.C_I(0, 4).real() == doctest::Approx(2.0 / M_PI));

    c.direct_link = true;
    cov = build_covariance(c);
    CHECK(cov.beta_BU[0] > 0.0);
}

TEST_CASE("scenario_pattern and with_sizes")
{
    const ScenarioConfig c = parse(json{{"N", 16}});
    const ReflectionPattern a = scenario_pattern(c);
    CHECK(a.size() == 16);
    for (Eigen::Index n = 0; n < 16; ++n)
        CHECK(a.amplitude(n) == doctest::Approx(1.0));
    CHECK(scenario_pattern(c).coefficients() == a.coefficients());

    const ScenarioConfig big = with_sizes(c, 64, 8);
    CHECK(big.N == 64);
    CHECK(big.d_IU == c.d_IU);
}
