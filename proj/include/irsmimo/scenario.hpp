// SPDX-License-Identifier: Apache-2.0
//
// Static simulation parameters and the construction of a CovarianceSet from them.

#ifndef IRSMIMO_SCENARIO_HPP
#define IRSMIMO_SCENARIO_HPP

#include "irsmimo/covariance.hpp"

#include "json.hpp"

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace irsmimo {

/// Invalid or inconsistent configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

enum class CovarianceModel
{
    Identity,
    Exponential, // "model1": exponential correlation on both sides
    Sinc         // "model2": exponential at the BS, planar-array sinc at the IRS
};

std::string to_string(CovarianceModel model);
CovarianceModel covariance_model_from_string(const std::string &name);

struct ScenarioConfig
{
    int K = 4;
    int M = 8;
    int N = 64;
    int T = 1000;

    std::vector<double> E_w{1e-3}; // scaled energy E_k, p_k = E_k / (MN)
    double p_t_w = 1e-3;           // pilot power, fixed in M and N
    double sigma2_w = 1e-14;       // -170 dBm/Hz over 1 MHz

    double d_BI = 100.0;
    double d0 = 1.0;
    double beta0 = 0.01; // -20 dB
    double alpha1 = 2.1; // user -> IRS
    double alpha2 = 2.2; // IRS -> BS
    std::vector<double> d_IU;

    bool direct_link = false;
    double alpha_BU = 3.75;
    std::vector<double> d_BU;

    // Users are dropped uniformly in a disk unless d_IU is given explicitly.
    double user_radius = 5.0;
    double user_center_to_irs = 10.0;
    double user_center_to_bs = 105.0;

    CovarianceModel covariance_model = CovarianceModel::Exponential;
    cdouble c_B = std::polar(0.4, 3.14159265358979323846 / 6.0);
    std::vector<cdouble> c_B_k;
    cdouble c_I = 0.6;
    std::vector<cdouble> c_I_k;
    double spacing_over_wavelength = 0.25;
    int irs_rows = 0; // 0: near-square grid

    PatternKind pattern = PatternKind::UnitAmpRandPhase; // IRS pattern for the validation experiments

    std::uint64_t seed = 1;

    /// Broadcasts scalar per-user settings to K entries and drops users when d_IU is empty.
    void resolve();

    /// Throws ConfigError on violated invariants (T > K ≥ 1, M, N ≥ 1, σ² > 0, |c| < 1, ...).
    void validate() const;

    double user_power(std::size_t k) const { return E_w.at(k) / (static_cast<double>(M) * N); }
};

/// Reads scenario keys from a flat JSON object; every key read is added to `consumed`.
/// dB-valued keys carry a `_db` / `_dbm` suffix and are converted to linear here.
ScenarioConfig scenario_from_json(const nlohmann::json &j, std::set<std::string> &consumed);

/// Fully resolved echo: linear units, explicit per-user vectors.
nlohmann::json scenario_to_json(const ScenarioConfig &config);

CovarianceSet build_covariance(const ScenarioConfig &config);

/// The configured pattern kind drawn from a stream derived from (seed, N).
ReflectionPattern scenario_pattern(const ScenarioConfig &config);

/// Copy with new array sizes; user placement is kept.
ScenarioConfig with_sizes(const ScenarioConfig &config, int N, int M);

double db_to_linear(double db);
double dbm_to_watts(double dbm);

} // namespace irsmimo

#endif
