#pragma once

#include "wrg/potential_set.hpp"

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wrg {

/// Exponential weight offsets of the kernel norm; the weight function itself
/// is fixed to 1 throughout (see config docs), which makes every constant
/// below position-independent.
struct RuelleWeight {
    double alpha_plus = 0.0;
    double alpha_minus = 0.0;
};

/// C_g(alpha) = exp(e^alpha * integral of (1 - e^{-g})); always >= 1.
double c_constant(const PotentialSpec& g, double alpha, int dimension);

/// Mesoscopic-regime variant: exp(e^alpha * integral of g).
double vlasov_c_constant(const PotentialSpec& g, double alpha, int dimension);

enum class RegimeKind { fokker_planck, vlasov };

const char* regime_kind_name(RegimeKind k);

/// The four admissibility inequalities, the contraction constant extracted
/// from them, and the implied ergodicity rate. `pass` holds iff every
/// inequality is strict.
struct RegimeReport {
    RegimeKind regime = RegimeKind::fokker_planck;
    RuelleWeight weight;
    std::array<double, 4> lhs{};
    std::array<double, 4> threshold{2.0, 2.0, 1.0, 1.0};
    double a_alpha = 1.0;
    double lambda_0 = 0.0;
    bool pass = false;

    double margin(int i) const { return threshold[i] - lhs[i]; }
    double min_margin() const;
};

RegimeReport check_fokker_planck_conditions(const PotentialSet& pset, const RuelleWeight& w,
                                            int dimension);
RegimeReport check_vlasov_conditions(const PotentialSet& pset, const RuelleWeight& w, int dimension);
RegimeReport check_conditions(const PotentialSet& pset, const RuelleWeight& w, int dimension,
                              RegimeKind kind);

/// max(lhs1 - 1, lhs2 - 1, lhs3, lhs4): the sharpest constant a with
/// "perturbation <= a * cumulative death intensity" supported by the four
/// condition values. Reported even when >= 1.
double contraction_constant(const PotentialSet& pset, const RuelleWeight& w, int dimension,
                            RegimeKind kind = RegimeKind::fokker_planck);

/// lambda_0 = 1 - a; throws std::runtime_error when a >= 1 (no guarantee).
double ergodicity_rate(double a_alpha);
double ergodicity_rate(const PotentialSet& pset, const RuelleWeight& w, int dimension,
                       RegimeKind kind = RegimeKind::fokker_planck);

/// Key-value record form used by report files; parse_regime_report inverts it.
std::vector<std::pair<std::string, std::string>> regime_report_records(const RegimeReport& r);
RegimeReport parse_regime_report(const std::vector<std::pair<std::string, std::string>>& records);

/// Grid scan over weights and square-well mutation potentials looking for a
/// parameter point where all four inequalities hold strictly. Conditions 3
/// and 4 multiply to at least 1 for any parameters (each constant is >= 1),
/// so the scan can at best reach the boundary; it reports the best margin
/// found and a witness only if one exists.
struct WitnessSearchResult {
    bool found = false;
    PotentialSet pset;
    RuelleWeight weight;
    RegimeReport best_report;  // maximal min-margin point scanned
};

WitnessSearchResult search_pass_witness(RegimeKind kind, int dimension);

}  // namespace wrg
