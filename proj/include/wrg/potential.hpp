#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace wrg {

enum class PotentialKind { zero, square_well, gaussian, exponential };

/// Radially symmetric, non-negative pair potential with finite support.
/// `height` is the well height / peak amplitude, `range` the well radius /
/// Gaussian sigma / exponential decay length, `cutoff` the truncation radius
/// (equal to `range` for square wells, 0 for the zero potential).
struct PotentialSpec {
    PotentialKind kind = PotentialKind::zero;
    double height = 0.0;
    double range = 0.0;
    double cutoff = 0.0;

    static PotentialSpec zero() { return {}; }
    static PotentialSpec square_well(double height, double range);
    static PotentialSpec gaussian(double amplitude, double sigma, double cutoff);
    static PotentialSpec exponential(double amplitude, double scale, double cutoff);

    bool is_zero() const { return kind == PotentialKind::zero || height == 0.0; }

    bool operator==(const PotentialSpec&) const = default;
};

inline PotentialSpec PotentialSpec::square_well(double height, double range) {
    if (!(height >= 0.0)) throw std::invalid_argument("square_well: height must be >= 0");
    if (!(range > 0.0)) throw std::invalid_argument("square_well: range must be > 0");
    return {PotentialKind::square_well, height, range, range};
}

inline PotentialSpec PotentialSpec::gaussian(double amplitude, double sigma, double cutoff) {
    if (!(amplitude >= 0.0)) throw std::invalid_argument("gaussian: amplitude must be >= 0");
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian: sigma must be > 0");
    if (!(cutoff > 0.0)) throw std::invalid_argument("gaussian: cutoff must be > 0");
    return {PotentialKind::gaussian, amplitude, sigma, cutoff};
}

inline PotentialSpec PotentialSpec::exponential(double amplitude, double scale, double cutoff) {
    if (!(amplitude >= 0.0)) throw std::invalid_argument("exponential: amplitude must be >= 0");
    if (!(scale > 0.0)) throw std::invalid_argument("exponential: scale must be > 0");
    if (!(cutoff > 0.0)) throw std::invalid_argument("exponential: cutoff must be > 0");
    return {PotentialKind::exponential, amplitude, scale, cutoff};
}

inline double evaluate_potential(const PotentialSpec& g, double r) {
    if (r < 0.0) throw std::invalid_argument("evaluate_potential: r must be >= 0");
    switch (g.kind) {
        case PotentialKind::zero:
            return 0.0;
        case PotentialKind::square_well:
            return r <= g.range ? g.height : 0.0;
        case PotentialKind::gaussian:
            return r <= g.cutoff ? g.height * std::exp(-0.5 * (r / g.range) * (r / g.range)) : 0.0;
        case PotentialKind::exponential:
            return r <= g.cutoff ? g.height * std::exp(-r / g.range) : 0.0;
    }
    return 0.0;
}

/// Interaction mass <g> = integral of g over R^d (d = 1 or 2).
/// Closed form for square wells, adaptive quadrature otherwise.
double potential_mass(const PotentialSpec& g, int dimension);

/// Mayer-type exclusion integral: integral of (1 - exp(-g)) over R^d.
double mayer_integral(const PotentialSpec& g, int dimension);

/// Potential with the height/amplitude multiplied by `factor`; support unchanged.
PotentialSpec scale_height(const PotentialSpec& g, double factor);

/// Text forms used by config files, e.g. "square_well(1.0, 0.5)".
std::string format_potential(const PotentialSpec& g);
PotentialSpec parse_potential(const std::string& text);

}  // namespace wrg
