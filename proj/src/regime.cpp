#include "wrg/regime.hpp"

#include "wrg/text.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace wrg {

double c_constant(const PotentialSpec& g, double alpha, int dimension) {
    return std::exp(std::exp(alpha) * mayer_integral(g, dimension));
}

double vlasov_c_constant(const PotentialSpec& g, double alpha, int dimension) {
    return std::exp(std::exp(alpha) * potential_mass(g, dimension));
}

const char* regime_kind_name(RegimeKind k) {
    return k == RegimeKind::fokker_planck ? "fokker_planck" : "vlasov";
}

double RegimeReport::min_margin() const {
    double m = margin(0);
    for (int i = 1; i < 4; ++i) m = std::min(m, margin(i));
    return m;
}

RegimeReport check_conditions(const PotentialSet& pset, const RuelleWeight& w, int dimension,
                              RegimeKind kind) {
    auto C = [&](const PotentialSpec& g, double alpha) {
        return kind == RegimeKind::fokker_planck ? c_constant(g, alpha, dimension)
                                                 : vlasov_c_constant(g, alpha, dimension);
    };
    const double ap = w.alpha_plus;
    const double am = w.alpha_minus;

    RegimeReport r;
    r.regime = kind;
    r.weight = w;
    r.lhs[0] = std::exp(-ap) * C(pset.phi_plus, ap) * C(pset.psi_plus, am) +
               C(pset.kappa_minus, am) * C(pset.tau_minus, ap);
    r.lhs[1] = std::exp(-am) * C(pset.phi_minus, am) * C(pset.psi_minus, ap) +
               C(pset.kappa_plus, ap) * C(pset.tau_plus, am);
    r.lhs[2] = C(pset.kappa_plus, ap) * C(pset.tau_plus, am) * std::exp(am - ap);
    r.lhs[3] = C(pset.kappa_minus, am) * C(pset.tau_minus, ap) * std::exp(ap - am);

    r.a_alpha = std::max({r.lhs[0] - 1.0, r.lhs[1] - 1.0, r.lhs[2], r.lhs[3]});
    r.lambda_0 = 1.0 - r.a_alpha;
    r.pass = true;
    for (int i = 0; i < 4; ++i) r.pass = r.pass && (r.lhs[i] < r.threshold[i]);
    return r;
}

RegimeReport check_fokker_planck_conditions(const PotentialSet& pset, const RuelleWeight& w,
                                            int dimension) {
    return check_conditions(pset, w, dimension, RegimeKind::fokker_planck);
}

RegimeReport check_vlasov_conditions(const PotentialSet& pset, const RuelleWeight& w, int dimension) {
    return check_conditions(pset, w, dimension, RegimeKind::vlasov);
}

double contraction_constant(const PotentialSet& pset, const RuelleWeight& w, int dimension,
                            RegimeKind kind) {
    return check_conditions(pset, w, dimension, kind).a_alpha;
}

double ergodicity_rate(double a_alpha) {
    if (!(a_alpha < 1.0))
        throw std::runtime_error("ergodicity_rate: contraction constant >= 1, no rate guarantee");
    return 1.0 - a_alpha;
}

double ergodicity_rate(const PotentialSet& pset, const RuelleWeight& w, int dimension,
                       RegimeKind kind) {
    return ergodicity_rate(contraction_constant(pset, w, dimension, kind));
}

std::vector<std::pair<std::string, std::string>> regime_report_records(const RegimeReport& r) {
    std::vector<std::pair<std::string, std::string>> rec;
    rec.emplace_back("regime", regime_kind_name(r.regime));
    rec.emplace_back("alpha_plus", format_double(r.weight.alpha_plus));
    rec.emplace_back("alpha_minus", format_double(r.weight.alpha_minus));
    for (int i = 0; i < 4; ++i) {
        const std::string tag = std::to_string(i + 1);
        rec.emplace_back("lhs_" + tag, format_double(r.lhs[i]));
        rec.emplace_back("threshold_" + tag, format_double(r.threshold[i]));
        rec.emplace_back("margin_" + tag, format_double(r.margin(i)));
    }
    rec.emplace_back("a_alpha", format_double(r.a_alpha));
    rec.emplace_back("lambda_0", format_double(r.lambda_0));
    rec.emplace_back("verdict", r.pass ? "PASS" : "FAIL");
    return rec;
}

RegimeReport parse_regime_report(const std::vector<std::pair<std::string, std::string>>& records) {
    std::map<std::string, std::string> kv(records.begin(), records.end());
    auto need = [&](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) throw std::invalid_argument("regime report: missing key '" + key + "'");
        return it->second;
    };
    RegimeReport r;
    const std::string regime = need("regime");
    if (regime == "fokker_planck")
        r.regime = RegimeKind::fokker_planck;
    else if (regime == "vlasov")
        r.regime = RegimeKind::vlasov;
    else
        throw std::invalid_argument("regime report: unknown regime '" + regime + "'");
    r.weight.alpha_plus = parse_double(need("alpha_plus"));
    r.weight.alpha_minus = parse_double(need("alpha_minus"));
    for (int i = 0; i < 4; ++i) {
        const std::string tag = std::to_string(i + 1);
        r.lhs[i] = parse_double(need("lhs_" + tag));
        r.threshold[i] = parse_double(need("threshold_" + tag));
    }
    r.a_alpha = parse_double(need("a_alpha"));
    r.lambda_0 = parse_double(need("lambda_0"));
    r.pass = need("verdict") == "PASS";
    return r;
}

WitnessSearchResult search_pass_witness(RegimeKind kind, int dimension) {
    WitnessSearchResult result;
    double best_margin = -std::numeric_limits<double>::infinity();

    std::vector<double> alphas;
    for (double a = -3.0; a <= 3.0 + 1e-9; a += 0.25) alphas.push_back(a);
    const std::vector<double> heights = {0.0, 0.1, 0.25, 0.5, 1.0, 2.0};
    const std::vector<double> ranges = {0.1, 0.25, 0.5};

    auto well = [](double h, double r) {
        return h == 0.0 ? PotentialSpec::zero() : PotentialSpec::square_well(h, r);
    };

    for (double ap : alphas)
        for (double am : alphas)
            for (double hk : heights)
                for (double ht : heights)
                    for (double rr : ranges) {
                        PotentialSet pset;
                        pset.kappa_plus = well(hk, rr);
                        pset.kappa_minus = well(hk, rr);
                        pset.tau_plus = well(ht, rr);
                        pset.tau_minus = well(ht, rr);
                        const RuelleWeight w{ap, am};
                        const RegimeReport rep = check_conditions(pset, w, dimension, kind);
                        const double margin = rep.min_margin();
                        if (margin > best_margin) {
                            best_margin = margin;
                            result.best_report = rep;
                            result.pset = pset;
                            result.weight = w;
                        }
                        if (rep.pass && !result.found) {
                            result.found = true;
                            result.best_report = rep;
                            result.pset = pset;
                            result.weight = w;
                            return result;
                        }
                    }
    return result;
}

}  // namespace wrg
