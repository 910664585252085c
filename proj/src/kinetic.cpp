#include "wrg/kinetic.hpp"

#include <cmath>
#include <stdexcept>

namespace wrg {

KineticParams KineticParams::from_potentials(const PotentialSet& pset, int dimension) {
    KineticParams p;
    p.phi_plus = potential_mass(pset.phi_plus, dimension);
    p.phi_minus = potential_mass(pset.phi_minus, dimension);
    p.psi_plus = potential_mass(pset.psi_plus, dimension);
    p.psi_minus = potential_mass(pset.psi_minus, dimension);
    p.kappa_plus = potential_mass(pset.kappa_plus, dimension);
    p.kappa_minus = potential_mass(pset.kappa_minus, dimension);
    p.tau_plus = potential_mass(pset.tau_plus, dimension);
    p.tau_minus = potential_mass(pset.tau_minus, dimension);
    p.z_plus = pset.z_plus;
    p.z_minus = pset.z_minus;
    p.mutation_multiplier = pset.mutation_multiplier;
    return p;
}

namespace {

void check_nonnegative(const Vector2d& rho) {
    if (rho[0] < 0.0 || rho[1] < 0.0)
        throw std::invalid_argument("kinetic rhs: densities must be >= 0");
}

struct HomogeneousTerms {
    double mut_out_plus;   // e^{-<kappa+>r+ - <tau+>r-}
    double mut_out_minus;  // e^{-<kappa->r- - <tau->r+}
    double birth_plus;     // z+ e^{-<phi+>r+ - <psi+>r-}
    double birth_minus;    // z- e^{-<phi->r- - <psi->r+}
};

HomogeneousTerms terms_at(const Vector2d& rho, const KineticParams& p) {
    const double rp = rho[0], rm = rho[1];
    return {
        std::exp(-p.kappa_plus * rp - p.tau_plus * rm),
        std::exp(-p.kappa_minus * rm - p.tau_minus * rp),
        p.z_plus * std::exp(-p.phi_plus * rp - p.psi_plus * rm),
        p.z_minus * std::exp(-p.phi_minus * rm - p.psi_minus * rp),
    };
}

}  // namespace

Vector2d rhs_homogeneous(const Vector2d& rho, const KineticParams& p) {
    check_nonnegative(rho);
    const auto t = terms_at(rho, p);
    const double m = p.mutation_multiplier;
    Vector2d d;
    d[0] = -(1.0 + m * t.mut_out_plus) * rho[0] + t.birth_plus + m * t.mut_out_minus * rho[1];
    d[1] = -(1.0 + m * t.mut_out_minus) * rho[1] + t.birth_minus + m * t.mut_out_plus * rho[0];
    return d;
}

Matrix2d jacobian_matrix(const Vector2d& rho, const KineticParams& p) {
    check_nonnegative(rho);
    const auto t = terms_at(rho, p);
    const double m = p.mutation_multiplier;
    const double rp = rho[0], rm = rho[1];
    Matrix2d j;
    j(0, 0) = -1.0 - m * t.mut_out_plus * (1.0 - p.kappa_plus * rp) - p.phi_plus * t.birth_plus -
              m * p.tau_minus * t.mut_out_minus * rm;
    j(0, 1) = m * p.tau_plus * t.mut_out_plus * rp - p.psi_plus * t.birth_plus +
              m * t.mut_out_minus * (1.0 - p.kappa_minus * rm);
    j(1, 1) = -1.0 - m * t.mut_out_minus * (1.0 - p.kappa_minus * rm) - p.phi_minus * t.birth_minus -
              m * p.tau_plus * t.mut_out_plus * rp;
    j(1, 0) = m * p.tau_minus * t.mut_out_minus * rm - p.psi_minus * t.birth_minus +
              m * t.mut_out_plus * (1.0 - p.kappa_plus * rp);
    return j;
}

// ---------------------------------------------------------------------------

PeriodicGrid PeriodicGrid::make(const Domain& dom, int cells_x, int cells_y) {
    if (cells_x < 1 || (dom.dimension == 2 && cells_y < 1))
        throw std::invalid_argument("PeriodicGrid: need at least one cell per axis");
    PeriodicGrid g;
    g.domain = dom;
    g.cells = {cells_x, dom.dimension == 2 ? cells_y : 1};
    return g;
}

Vec PeriodicGrid::center(int flat_index) const {
    const int ix = flat_index % cells[0];
    const int iy = flat_index / cells[0];
    Vec c = Vec::Zero();
    c[0] = (ix + 0.5) * domain.side[0] / cells[0];
    if (domain.dimension == 2) c[1] = (iy + 0.5) * domain.side[1] / cells[1];
    return c;
}

ConvolutionKernel ConvolutionKernel::build(const PotentialSpec& g, const PeriodicGrid& grid) {
    ConvolutionKernel k;
    const int dim = grid.domain.dimension;
    k.mass = potential_mass(g, dim);
    if (g.is_zero() || k.mass == 0.0) return k;

    const double hx = grid.domain.side[0] / grid.cells[0];
    const double hy = dim == 2 ? grid.domain.side[1] / grid.cells[1] : 0.0;
    // Offsets limited to the cutoff ball; on coarse grids the reach is also
    // limited to the torus so no cell is counted twice.
    const int reach_x = std::min(static_cast<int>(std::floor(g.cutoff / hx)),
                                 grid.cells[0] % 2 == 0 ? grid.cells[0] / 2 : (grid.cells[0] - 1) / 2);
    const int reach_y = dim == 2 ? std::min(static_cast<int>(std::floor(g.cutoff / hy)),
                                            grid.cells[1] % 2 == 0 ? grid.cells[1] / 2
                                                                   : (grid.cells[1] - 1) / 2)
                                 : 0;

    double raw_sum = 0.0;
    const double cell_vol = grid.cell_volume();
    for (int oy = -reach_y; oy <= reach_y; ++oy) {
        // With an even cell count the +half and -half offsets alias the same
        // cell; keep only one representative.
        if (grid.cells[1] % 2 == 0 && reach_y > 0 && oy == -reach_y && 2 * reach_y == grid.cells[1])
            continue;
        for (int ox = -reach_x; ox <= reach_x; ++ox) {
            if (grid.cells[0] % 2 == 0 && reach_x > 0 && ox == -reach_x && 2 * reach_x == grid.cells[0])
                continue;
            const double dx = ox * hx;
            const double dy = oy * hy;
            const double r = std::sqrt(dx * dx + dy * dy);
            if (r > g.cutoff) continue;
            const double w = evaluate_potential(g, r) * cell_vol;
            if (w == 0.0 && !(ox == 0 && oy == 0)) continue;
            k.offsets.push_back({ox, oy});
            k.weights.push_back(w);
            raw_sum += w;
        }
    }
    if (raw_sum > 0.0) {
        const double scale = k.mass / raw_sum;
        for (double& w : k.weights) w *= scale;
    }
    return k;
}

ArrayXd convolve(const ConvolutionKernel& k, const PeriodicGrid& grid, const ArrayXd& field) {
    if (field.size() != grid.size())
        throw std::invalid_argument("convolve: field size does not match grid");
    ArrayXd out = ArrayXd::Zero(field.size());
    if (k.offsets.empty()) return out;
    const int nx = grid.cells[0];
    const int ny = grid.cells[1];
    for (std::size_t t = 0; t < k.offsets.size(); ++t) {
        const int ox = k.offsets[t][0];
        const int oy = k.offsets[t][1];
        const double w = k.weights[t];
        for (int iy = 0; iy < ny; ++iy) {
            const int jy = (iy - oy % ny + ny) % ny;
            const int row_out = iy * nx;
            const int row_in = jy * nx;
            for (int ix = 0; ix < nx; ++ix) {
                const int jx = (ix - ox % nx + nx) % nx;
                out[row_out + ix] += w * field[row_in + jx];
            }
        }
    }
    return out;
}

FieldParams FieldParams::from_potentials(const PotentialSet& pset, const PeriodicGrid& grid) {
    FieldParams p;
    p.grid = grid;
    p.phi_plus = ConvolutionKernel::build(pset.phi_plus, grid);
    p.phi_minus = ConvolutionKernel::build(pset.phi_minus, grid);
    p.psi_plus = ConvolutionKernel::build(pset.psi_plus, grid);
    p.psi_minus = ConvolutionKernel::build(pset.psi_minus, grid);
    p.kappa_plus = ConvolutionKernel::build(pset.kappa_plus, grid);
    p.kappa_minus = ConvolutionKernel::build(pset.kappa_minus, grid);
    p.tau_plus = ConvolutionKernel::build(pset.tau_plus, grid);
    p.tau_minus = ConvolutionKernel::build(pset.tau_minus, grid);
    p.z_plus = pset.z_plus;
    p.z_minus = pset.z_minus;
    p.mutation_multiplier = pset.mutation_multiplier;
    return p;
}

void rhs_field(const FieldParams& p, const ArrayXd& rho_plus, const ArrayXd& rho_minus,
               ArrayXd& out_plus, ArrayXd& out_minus) {
    if (rho_plus.size() != p.grid.size() || rho_minus.size() != p.grid.size())
        throw std::invalid_argument("rhs_field: field size does not match grid");
    if ((rho_plus < 0.0).any() || (rho_minus < 0.0).any())
        throw std::invalid_argument("rhs_field: densities must be >= 0");
    const double m = p.mutation_multiplier;

    const ArrayXd mut_out_plus =
        (-convolve(p.kappa_plus, p.grid, rho_plus) - convolve(p.tau_plus, p.grid, rho_minus)).exp();
    const ArrayXd mut_out_minus =
        (-convolve(p.kappa_minus, p.grid, rho_minus) - convolve(p.tau_minus, p.grid, rho_plus)).exp();
    const ArrayXd birth_plus =
        p.z_plus *
        (-convolve(p.phi_plus, p.grid, rho_plus) - convolve(p.psi_plus, p.grid, rho_minus)).exp();
    const ArrayXd birth_minus =
        p.z_minus *
        (-convolve(p.phi_minus, p.grid, rho_minus) - convolve(p.psi_minus, p.grid, rho_plus)).exp();

    out_plus = -(1.0 + m * mut_out_plus) * rho_plus + birth_plus + m * mut_out_minus * rho_minus;
    out_minus = -(1.0 + m * mut_out_minus) * rho_minus + birth_minus + m * mut_out_plus * rho_plus;
}

// ---------------------------------------------------------------------------

namespace {

ArrayXd rk4_step(const OdeRhs& rhs, const ArrayXd& y, double h) {
    const ArrayXd k1 = rhs(y);
    const ArrayXd k2 = rhs((y + 0.5 * h * k1).eval());
    const ArrayXd k3 = rhs((y + 0.5 * h * k2).eval());
    const ArrayXd k4 = rhs((y + h * k3).eval());
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void enforce_positivity(ArrayXd& y, const IntegrateOptions& opt) {
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y[i] < 0.0) {
            if (y[i] < -opt.negativity_floor)
                throw std::runtime_error("integrate_rk4: state went negative beyond the floor");
            y[i] = 0.0;
        }
    }
}

}  // namespace

OdeSolution integrate_rk4(const OdeRhs& rhs, const ArrayXd& y0, double t0, double t_end,
                          std::span<const double> output_times, const IntegrateOptions& opt) {
    if (!(t_end >= t0)) throw std::invalid_argument("integrate_rk4: t_end must be >= t0");
    if (!(opt.dt_init > 0.0)) throw std::invalid_argument("integrate_rk4: dt_init must be > 0");
    for (std::size_t i = 0; i < output_times.size(); ++i) {
        if (output_times[i] < t0 || output_times[i] > t_end)
            throw std::invalid_argument("integrate_rk4: output times must lie in [t0, t_end]");
        if (i > 0 && output_times[i] < output_times[i - 1])
            throw std::invalid_argument("integrate_rk4: output times must be sorted");
    }

    OdeSolution sol;
    const bool fixed_step = !(opt.tol > 0.0);
    double t = t0;
    ArrayXd y = y0;
    double h = opt.dt_init;
    std::size_t next_out = 0;
    sol.max_component = y.size() ? y.maxCoeff() : 0.0;

    auto record_through = [&](double t_prev, const ArrayXd& y_prev, double t_new, const ArrayXd& y_new) {
        while (next_out < output_times.size() && output_times[next_out] <= t_new) {
            const double s = output_times[next_out];
            const double lam = t_new > t_prev ? (s - t_prev) / (t_new - t_prev) : 1.0;
            sol.points.push_back({s, (1.0 - lam) * y_prev + lam * y_new});
            ++next_out;
        }
    };

    record_through(t, y, t, y);  // output times equal to t0

    while (t < t_end) {
        // Steps never straddle an output time, so reported states carry the
        // integrator's accuracy; interpolation only serves times at t0.
        double limit = t_end - t;
        if (next_out < output_times.size()) limit = std::min(limit, output_times[next_out] - t);
        double step = std::min(h, limit);
        bool clamped = step < h;
        ArrayXd y_new;
        if (fixed_step) {
            y_new = rk4_step(rhs, y, step);
            ++sol.steps_accepted;
        } else {
            // Step doubling: accept when the full step and two half steps
            // agree component-wise within tol.
            while (true) {
                const ArrayXd big = rk4_step(rhs, y, step);
                const ArrayXd mid = rk4_step(rhs, y, 0.5 * step);
                const ArrayXd fine = rk4_step(rhs, mid, 0.5 * step);
                const double err = (big - fine).abs().maxCoeff();
                if (err < opt.tol) {
                    y_new = fine;
                    ++sol.steps_accepted;
                    if (!clamped) {
                        const double grow = err > 0.0 ? 0.9 * std::pow(opt.tol / err, 0.2) : 2.0;
                        h = step * std::clamp(grow, 1.0, 2.0);
                    }
                    break;
                }
                ++sol.steps_rejected;
                step *= std::clamp(0.9 * std::pow(opt.tol / err, 0.2), 0.1, 0.9);
                clamped = false;
                h = step;
                if (step < opt.min_step)
                    throw std::runtime_error("integrate_rk4: step size underflow (stiffness)");
            }
        }
        enforce_positivity(y_new, opt);
        const double t_new = std::min(t + step, t_end);
        sol.max_component = std::max(sol.max_component, y_new.size() ? y_new.maxCoeff() : 0.0);
        if (y_new.size() && y_new.maxCoeff() > opt.ceiling) sol.ceiling_violated = true;
        record_through(t, y, t_new, y_new);
        t = t_new;
        y.swap(y_new);
    }

    while (next_out < output_times.size()) {
        sol.points.push_back({output_times[next_out], y});
        ++next_out;
    }
    return sol;
}

std::vector<HomogeneousPoint> integrate_homogeneous(const Vector2d& rho0, const KineticParams& p,
                                                    double t_end, std::span<const double> output_times,
                                                    const IntegrateOptions& opt,
                                                    OdeSolution* diagnostics) {
    check_nonnegative(rho0);
    OdeRhs rhs = [&p](const ArrayXd& y) {
        const Vector2d d = rhs_homogeneous(Vector2d(std::max(y[0], 0.0), std::max(y[1], 0.0)), p);
        ArrayXd out(2);
        out[0] = d[0];
        out[1] = d[1];
        return out;
    };
    ArrayXd y0(2);
    y0[0] = rho0[0];
    y0[1] = rho0[1];
    OdeSolution sol = integrate_rk4(rhs, y0, 0.0, t_end, output_times, opt);
    std::vector<HomogeneousPoint> out;
    out.reserve(sol.points.size());
    for (const OdePoint& pt : sol.points) out.push_back({pt.time, Vector2d(pt.y[0], pt.y[1])});
    if (diagnostics) {
        diagnostics->ceiling_violated = sol.ceiling_violated;
        diagnostics->max_component = sol.max_component;
        diagnostics->steps_accepted = sol.steps_accepted;
        diagnostics->steps_rejected = sol.steps_rejected;
    }
    return out;
}

std::vector<FieldTrajectoryPoint> integrate_field(const ArrayXd& rho_plus0, const ArrayXd& rho_minus0,
                                                  const FieldParams& p, double t_end,
                                                  std::span<const double> output_times,
                                                  const IntegrateOptions& opt,
                                                  OdeSolution* diagnostics) {
    const int n = p.grid.size();
    if (rho_plus0.size() != n || rho_minus0.size() != n)
        throw std::invalid_argument("integrate_field: initial fields do not match grid");
    OdeRhs rhs = [&p, n](const ArrayXd& y) {
        const ArrayXd rp = y.head(n).max(0.0);
        const ArrayXd rm = y.tail(n).max(0.0);
        ArrayXd dp, dm;
        rhs_field(p, rp, rm, dp, dm);
        ArrayXd out(2 * n);
        out.head(n) = dp;
        out.tail(n) = dm;
        return out;
    };
    ArrayXd y0(2 * n);
    y0.head(n) = rho_plus0;
    y0.tail(n) = rho_minus0;
    OdeSolution sol = integrate_rk4(rhs, y0, 0.0, t_end, output_times, opt);
    std::vector<FieldTrajectoryPoint> out;
    out.reserve(sol.points.size());
    for (const OdePoint& pt : sol.points) out.push_back({pt.time, pt.y.head(n), pt.y.tail(n)});
    if (diagnostics) {
        diagnostics->ceiling_violated = sol.ceiling_violated;
        diagnostics->max_component = sol.max_component;
        diagnostics->steps_accepted = sol.steps_accepted;
        diagnostics->steps_rejected = sol.steps_rejected;
    }
    return out;
}

// ---------------------------------------------------------------------------

StationaryResult stationary(const KineticParams& p, const Vector2d& init, double damping,
                            double tol, int max_iter) {
    if (!(damping > 0.0 && damping <= 1.0))
        throw std::invalid_argument("stationary: damping must lie in (0, 1]");
    if (!(tol > 0.0)) throw std::invalid_argument("stationary: tol must be > 0");
    check_nonnegative(init);

    Vector2d rho = init;
    const double m = p.mutation_multiplier;
    for (int it = 1; it <= max_iter; ++it) {
        const auto t = terms_at(rho, p);
        Vector2d next;
        next[0] = (t.birth_plus + m * t.mut_out_minus * rho[1]) / (1.0 + m * t.mut_out_plus);
        next[1] = (t.birth_minus + m * t.mut_out_plus * rho[0]) / (1.0 + m * t.mut_out_minus);
        rho = (1.0 - damping) * rho + damping * next;
        rho = rho.cwiseMax(0.0);
        const double residual = rhs_homogeneous(rho, p).cwiseAbs().maxCoeff();
        if (residual < tol) return {rho, it, residual};
    }
    throw std::runtime_error("stationary: fixed-point iteration did not converge");
}

const char* stability_name(Stability s) {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::unstable: return "unstable";
        case Stability::marginal: return "marginal";
    }
    return "?";
}

StabilityReport jacobian_homogeneous(const Vector2d& fixed_point, const KineticParams& p,
                                     double residual_tol) {
    const double residual = rhs_homogeneous(fixed_point, p).cwiseAbs().maxCoeff();
    if (residual >= residual_tol)
        throw std::invalid_argument("jacobian_homogeneous: input is not a stationary point");

    StabilityReport rep;
    rep.fixed_point = fixed_point;
    rep.jacobian = jacobian_matrix(fixed_point, p);

    const double tr = rep.jacobian.trace();
    const double det = rep.jacobian.determinant();
    const double disc = tr * tr - 4.0 * det;
    if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        rep.eigenvalues[0] = std::complex<double>(0.5 * (tr - root), 0.0);
        rep.eigenvalues[1] = std::complex<double>(0.5 * (tr + root), 0.0);
    } else {
        const double im = 0.5 * std::sqrt(-disc);
        rep.eigenvalues[0] = std::complex<double>(0.5 * tr, -im);
        rep.eigenvalues[1] = std::complex<double>(0.5 * tr, im);
    }

    constexpr double kMarginalBand = 1e-12;
    const double re0 = rep.eigenvalues[0].real();
    const double re1 = rep.eigenvalues[1].real();
    if (std::abs(re0) <= kMarginalBand || std::abs(re1) <= kMarginalBand)
        rep.classification = Stability::marginal;
    else if (re0 < 0.0 && re1 < 0.0)
        rep.classification = Stability::stable;
    else
        rep.classification = Stability::unstable;
    return rep;
}

}  // namespace wrg
