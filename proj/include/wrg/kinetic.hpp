#pragma once

#include "wrg/geometry.hpp"
#include "wrg/potential_set.hpp"

#include <Eigen/Core>
#include <Eigen/LU>

#include <array>
#include <complex>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace wrg {

using Eigen::ArrayXd;
using Eigen::Matrix2d;
using Eigen::Vector2d;

/// Interaction masses <g> of the eight potentials plus activities and the
/// mutation multiplier: everything the spatially homogeneous kinetic system
/// depends on.
struct KineticParams {
    double phi_plus = 0.0, phi_minus = 0.0;
    double psi_plus = 0.0, psi_minus = 0.0;
    double kappa_plus = 0.0, kappa_minus = 0.0;
    double tau_plus = 0.0, tau_minus = 0.0;
    double z_plus = 1.0, z_minus = 1.0;
    double mutation_multiplier = 1.0;

    static KineticParams from_potentials(const PotentialSet& pset, int dimension);
};

/// Right-hand side of the homogeneous mean-field system:
///   d rho+/dt = -(1 + m e^{-<k+>r+ - <t+>r-}) r+
///               + z+ e^{-<f+>r+ - <p+>r-} + m e^{-<k->r- - <t->r+} r-
/// and symmetrically for rho-.
Vector2d rhs_homogeneous(const Vector2d& rho, const KineticParams& p);

/// Closed-form 2x2 Jacobian of rhs_homogeneous.
Matrix2d jacobian_matrix(const Vector2d& rho, const KineticParams& p);

// ---------------------------------------------------------------------------
// Periodic-grid (spatially resolved) form

struct PeriodicGrid {
    Domain domain;
    std::array<int, 2> cells = {1, 1};

    static PeriodicGrid make(const Domain& dom, int cells_x, int cells_y = 1);

    int size() const { return cells[0] * cells[1]; }
    double cell_volume() const { return domain.volume() / size(); }
    int flat(int ix, int iy) const { return ix + cells[0] * iy; }
    Vec center(int flat_index) const;

    bool operator==(const PeriodicGrid& o) const {
        return domain == o.domain && cells == o.cells;
    }
};

/// Circular-convolution stencil of a radial kernel, sampled at cell-center
/// displacements within the cutoff and renormalized so the discrete mass
/// (sum of weights) equals the continuum mass <g> exactly.
struct ConvolutionKernel {
    std::vector<std::array<int, 2>> offsets;
    std::vector<double> weights;  // premultiplied by the cell volume
    double mass = 0.0;

    static ConvolutionKernel build(const PotentialSpec& g, const PeriodicGrid& grid);
};

/// (g * rho) sampled on the grid via the support-limited circular stencil.
ArrayXd convolve(const ConvolutionKernel& k, const PeriodicGrid& grid, const ArrayXd& field);

struct FieldParams {
    PeriodicGrid grid;
    ConvolutionKernel phi_plus, phi_minus, psi_plus, psi_minus;
    ConvolutionKernel kappa_plus, kappa_minus, tau_plus, tau_minus;
    double z_plus = 1.0, z_minus = 1.0;
    double mutation_multiplier = 1.0;

    static FieldParams from_potentials(const PotentialSet& pset, const PeriodicGrid& grid);
};

/// Pointwise kinetic right-hand sides with true circular convolutions.
void rhs_field(const FieldParams& p, const ArrayXd& rho_plus, const ArrayXd& rho_minus,
               ArrayXd& out_plus, ArrayXd& out_minus);

// ---------------------------------------------------------------------------
// Time integration

struct IntegrateOptions {
    double dt_init = 1e-2;
    /// Per-component step-doubling tolerance; tol <= 0 selects fixed steps of
    /// size dt_init (used by the order-measurement tests).
    double tol = 1e-8;
    double min_step = 1e-12;
    /// Accepted states below -negativity_floor abort; tiny overshoots clamp to 0.
    double negativity_floor = 1e-12;
    /// A-priori bound monitor: trajectories exceeding this value set a flag.
    double ceiling = std::numeric_limits<double>::infinity();
};

struct OdePoint {
    double time = 0.0;
    ArrayXd y;
};

struct OdeSolution {
    std::vector<OdePoint> points;  // at the requested output times
    bool ceiling_violated = false;
    double max_component = 0.0;
    long long steps_accepted = 0;
    long long steps_rejected = 0;
};

using OdeRhs = std::function<ArrayXd(const ArrayXd&)>;

/// Classic RK4 with step-doubling error control and linear dense output.
/// Throws std::runtime_error on step underflow (stiffness) or negativity
/// beyond the floor.
OdeSolution integrate_rk4(const OdeRhs& rhs, const ArrayXd& y0, double t0, double t_end,
                          std::span<const double> output_times, const IntegrateOptions& opt);

struct HomogeneousPoint {
    double time = 0.0;
    Vector2d rho;
};

/// `diagnostics`, when given, receives the ceiling flag and step counters.
std::vector<HomogeneousPoint> integrate_homogeneous(const Vector2d& rho0, const KineticParams& p,
                                                    double t_end, std::span<const double> output_times,
                                                    const IntegrateOptions& opt = {},
                                                    OdeSolution* diagnostics = nullptr);

struct FieldTrajectoryPoint {
    double time = 0.0;
    ArrayXd rho_plus;
    ArrayXd rho_minus;
};

std::vector<FieldTrajectoryPoint> integrate_field(const ArrayXd& rho_plus0, const ArrayXd& rho_minus0,
                                                  const FieldParams& p, double t_end,
                                                  std::span<const double> output_times,
                                                  const IntegrateOptions& opt = {},
                                                  OdeSolution* diagnostics = nullptr);

// ---------------------------------------------------------------------------
// Stationary points and linear stability

struct StationaryResult {
    Vector2d rho;
    int iterations = 0;
    double residual = 0.0;
};

/// Damped Picard iteration on the stationary fixed-point map; converged when
/// ||rhs||_inf < tol. Throws std::runtime_error when max_iter is exhausted.
StationaryResult stationary(const KineticParams& p, const Vector2d& init, double damping,
                            double tol, int max_iter);

enum class Stability { stable, unstable, marginal };

const char* stability_name(Stability s);

struct StabilityReport {
    Vector2d fixed_point;
    Matrix2d jacobian;
    std::array<std::complex<double>, 2> eigenvalues;
    Stability classification = Stability::marginal;
};

/// Analytic Jacobian at a stationary point (residual checked against
/// `residual_tol`), eigenvalues by the quadratic formula.
StabilityReport jacobian_homogeneous(const Vector2d& fixed_point, const KineticParams& p,
                                     double residual_tol = 1e-6);

}  // namespace wrg
