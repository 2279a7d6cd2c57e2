#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "snls/functionals.hpp"
#include "snls/grid.hpp"
#include "snls/nonlinearity.hpp"

namespace snls {

enum class Integrator { Strang, Picard };

inline const char* to_string(Integrator i) { return i == Integrator::Strang ? "strang" : "picard"; }

struct EvolveConfig {
    double dt = 1e-3;
    double t_final = 1.0;
    Integrator integrator = Integrator::Strang;
    int picard_iters = 6;
    int snapshot_stride = 1;

    void validate() const {
        if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("time.dt must be positive");
        if (!(t_final >= dt)) throw DomainError("time.t_final must be >= time.dt");
        if (picard_iters < 2) throw DomainError("integrator.picard_iters must be >= 2");
        if (snapshot_stride < 1) throw DomainError("time.snapshot_stride must be >= 1");
    }

    /// Number of steps; t_final must be an integer multiple of dt.
    long steps() const {
        const long count = std::lround(t_final / dt);
        if (std::abs(count * dt - t_final) > 1e-9 * t_final) {
            throw DomainError("time.t_final=" + std::to_string(t_final) + " is not a multiple of time.dt=" +
                              std::to_string(dt));
        }
        return count;
    }
};

struct TrajectoryState {
    double t = 0.0;
    Field u;
    long step_index = 0;
};

// ---------------------------------------------------------------------------
// Exact substeps

/// e^{it Delta} u: spectral multiplication by e^{-i|k|^2 t}.
inline Field linear_propagator(const Field& u, double t) {
    return detail::apply_multiplier(u, [t](double kx, double ky) { return std::polar(1.0, -(kx * kx + ky * ky) * t); });
}

namespace detail {

inline void nonlinear_phase_in_place(std::span<cplx> u, std::span<const double> w, double alpha, double t) {
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double m2 = std::norm(u[k]);
        check_amplitude(std::sqrt(m2));
        u[k] *= std::polar(1.0, -t * w[k] * std::expm1(alpha * m2));
    }
}

} // namespace detail

/// Exact flow of i u_t = w (e^{alpha|u|^2} - 1) u over time t. |u| is a
/// pointwise invariant, so the flow is a pointwise phase rotation.
inline Field nonlinear_substep(const Field& u, const SingularWeight& w, const PhysParams& p, double t) {
    require_same_grid(u.grid(), w.grid(), "nonlinear_substep");
    Field out(u);
    detail::nonlinear_phase_in_place(out.values(), w.values(), p.alpha(), t);
    return out;
}

/// Strang splitting with cached half-step multipliers:
/// e^{i dt/2 Delta} N(dt) e^{i dt/2 Delta}.
class StrangStepper {
public:
    StrangStepper(const GridSpec& grid, double dt, const SingularWeight& w, const PhysParams& p)
        : grid_(grid), dt_(dt), weight_(w), alpha_(p.alpha()), half_(grid.size()), work_(grid.size()) {
        require_same_grid(grid, w.grid(), "StrangStepper");
        require_same_exponent(w, p);
        const double inv = 1.0 / static_cast<double>(grid.size());
        for (int a = 0; a < grid.n(); ++a) {
            const double kx = grid.wavenumber(a);
            for (int c = 0; c < grid.n(); ++c) {
                const double ky = grid.wavenumber(c);
                half_[grid.index(a, c)] = std::polar(inv, -(kx * kx + ky * ky) * dt / 2.0);
            }
        }
    }

    double dt() const noexcept { return dt_; }

    void step(Field& u) {
        const auto& plan = detail::plan_for(grid_.n());
        half_linear(u, plan);
        detail::nonlinear_phase_in_place(u.values(), weight_.values(), alpha_, dt_);
        half_linear(u, plan);
    }

private:
    void half_linear(Field& u, const detail::FftPlan2d& plan) {
        plan.forward(u.values(), work_);
        for (std::size_t k = 0; k < work_.size(); ++k) work_[k] *= half_[k];
        plan.backward(work_, u.values());
    }

    GridSpec grid_;
    double dt_;
    SingularWeight weight_;
    double alpha_;
    std::vector<cplx> half_;
    std::vector<cplx> work_;
};

/// One Strang step of length cfg.dt.
inline TrajectoryState strang_step(const TrajectoryState& state, const EvolveConfig& cfg, const SingularWeight& w,
                                   const PhysParams& p) {
    StrangStepper stepper(state.u.grid(), cfg.dt, w, p);
    TrajectoryState next{state.t + cfg.dt, state.u, state.step_index + 1};
    stepper.step(next.u);
    return next;
}

/// Gradient norm above which a run is declared blown up.
inline constexpr double blowup_gradient = 1e6;

/// Evolves u0 to cfg.t_final with the Strang integrator. `observer` sees the
/// initial state and every snapshot_stride-th step plus the final one.
inline TrajectoryState evolve(const Field& u0, const EvolveConfig& cfg, const SingularWeight& w, const PhysParams& p,
                              const std::function<void(const TrajectoryState&)>& observer = {}) {
    cfg.validate();
    const long steps = cfg.steps();
    StrangStepper stepper(u0.grid(), cfg.dt, w, p);
    TrajectoryState state{0.0, u0, 0};
    if (observer) observer(state);
    for (long s = 1; s <= steps; ++s) {
        stepper.step(state.u);
        state.step_index = s;
        state.t = s * cfg.dt;
        if (s % cfg.snapshot_stride == 0 || s == steps) {
            if (!state.u.all_finite()) {
                throw NumericError("non-finite samples at step " + std::to_string(s));
            }
            const double grad = grad_l2_norm(state.u);
            if (!(grad < blowup_gradient)) {
                throw NumericError("gradient norm " + std::to_string(grad) + " blew up at t=" +
                                   std::to_string(state.t));
            }
            if (observer) observer(state);
        }
    }
    return state;
}

// ---------------------------------------------------------------------------
// Duhamel fixed-point iteration

struct PicardResult {
    Field u_final;
    /// sup_t ||u^{(m+1)}(t) - u^{(m)}(t)||_{H^1} for each completed iteration.
    std::vector<double> differences;
    /// differences[m+1] / differences[m].
    std::vector<double> contraction_ratios;
};

namespace detail {

inline double spectral_h1_norm(std::span<const cplx> raw, const GridSpec& g) {
    double sum = 0.0;
    for (int a = 0; a < g.n(); ++a) {
        const double kx = g.wavenumber(a);
        for (int c = 0; c < g.n(); ++c) {
            const double ky = g.wavenumber(c);
            sum += (1.0 + kx * kx + ky * ky) * std::norm(raw[g.index(a, c)]);
        }
    }
    return std::sqrt(sum * g.cell_area() / static_cast<double>(g.size()));
}

} // namespace detail

/// Iterates u <- Phi(u) with
///   Phi(u)(t) = e^{it Delta} u0 - i int_0^t e^{i(t - s) Delta} w g(u(s)) ds
/// on the nodes t_j = j dt, the time integral by the composite trapezoid
/// rule, starting from the free flow. Stops after cfg.picard_iters
/// iterations or once the difference reaches roundoff.
inline PicardResult picard_solve(const Field& u0, double t_final, const EvolveConfig& cfg, const SingularWeight& w,
                                 const PhysParams& p) {
    require_same_grid(u0.grid(), w.grid(), "picard_solve");
    require_same_exponent(w, p);
    const double grad0 = grad_l2_norm(u0);
    if (!(grad0 < 1.0)) {
        throw DomainError("picard_solve requires ||grad u0|| < 1, got " + std::to_string(grad0));
    }
    EvolveConfig local = cfg;
    local.t_final = t_final;
    local.validate();
    const long nodes = local.steps();
    const double dt = cfg.dt;
    const auto& g = u0.grid();
    const auto& plan = detail::plan_for(g.n());
    const std::size_t size = g.size();
    const double inv = 1.0 / static_cast<double>(size);
    const double alpha = p.alpha();
    const cplx minus_i{0.0, -1.0};

    // Spectral multipliers e^{-i|k|^2 dt} and the free flow at each node.
    std::vector<double> k2(size);
    for (int a = 0; a < g.n(); ++a) {
        for (int c = 0; c < g.n(); ++c) {
            const double kx = g.wavenumber(a), ky = g.wavenumber(c);
            k2[g.index(a, c)] = kx * kx + ky * ky;
        }
    }
    std::vector<cplx> step_phase(size);
    for (std::size_t k = 0; k < size; ++k) step_phase[k] = std::polar(1.0, -k2[k] * dt);

    std::vector<cplx> u0_hat(size);
    plan.forward(u0.values(), u0_hat);

    // Spectra of the current iterate at every node.
    std::vector<std::vector<cplx>> iterate(nodes + 1, std::vector<cplx>(size));
    iterate[0] = u0_hat;
    for (long j = 1; j <= nodes; ++j) {
        for (std::size_t k = 0; k < size; ++k) iterate[j][k] = iterate[j - 1][k] * step_phase[k];
    }

    PicardResult result{u0, {}, {}};
    const double scale = std::max(detail::spectral_h1_norm(u0_hat, g), 1e-300);
    std::vector<cplx> physical(size), forcing(size), integral(size), next(size), diff(size), free(size);
    for (int it = 0; it < cfg.picard_iters; ++it) {
        double sup_diff = 0.0;
        std::fill(integral.begin(), integral.end(), cplx{0.0, 0.0});
        std::vector<cplx> prev_forcing(size);
        free = u0_hat;
        for (long j = 0; j <= nodes; ++j) {
            // forcing = FFT(w g(u_j)) of the current iterate
            plan.backward(iterate[j], physical);
            auto wv = w.values();
            for (std::size_t k = 0; k < size; ++k) {
                const cplx u = physical[k] * inv;
                physical[k] = wv[k] * snls::g(u, alpha);
            }
            plan.forward(physical, forcing);
            if (j > 0) {
                for (std::size_t k = 0; k < size; ++k) {
                    integral[k] = step_phase[k] * (integral[k] + 0.5 * dt * prev_forcing[k]) + 0.5 * dt * forcing[k];
                }
            }
            prev_forcing.swap(forcing);
            if (j > 0) {
                for (std::size_t k = 0; k < size; ++k) free[k] *= step_phase[k];
            }
            for (std::size_t k = 0; k < size; ++k) {
                next[k] = free[k] + minus_i * integral[k];
                diff[k] = next[k] - iterate[j][k];
            }
            sup_diff = std::max(sup_diff, detail::spectral_h1_norm(diff, g));
            // Later nodes only read their own (old) spectra, so node j can be
            // replaced as soon as its forcing has been taken.
            iterate[j].swap(next);
        }
        result.differences.push_back(sup_diff);
        const auto m = result.differences.size();
        if (m >= 2) {
            const double prev = result.differences[m - 2];
            const double ratio = prev > 0.0 ? result.differences[m - 1] / prev : 0.0;
            if (!(ratio < 1.0)) {
                throw NumericError("Picard iteration failed to contract: ratio " + std::to_string(ratio) +
                                   " at iteration " + std::to_string(m - 1));
            }
            result.contraction_ratios.push_back(ratio);
        }
        if (sup_diff > 0.0 && sup_diff <= 1e-12 * scale) break;
    }

    Field out(g);
    plan.backward(iterate[nodes], out.values());
    for (auto& v : out.values()) v *= inv;
    result.u_final = std::move(out);
    return result;
}

} // namespace snls
