#include "orbsafe/solver.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "orbsafe/parallel.hpp"

namespace orbsafe {

void SolveConfig::validate() const {
    if (!(horizon >= 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("SolveConfig: horizon must be finite and >= 0");
    if (!(cfl > 0.0) || !(cfl <= 1.0))
        throw std::invalid_argument("SolveConfig: cfl must be in (0, 1]");
    if (!(convergence_eps >= 0.0) || !std::isfinite(convergence_eps))
        throw std::invalid_argument("SolveConfig: convergence_eps must be finite and >= 0");
    if (!std::isfinite(save_every))
        throw std::invalid_argument("SolveConfig: save_every must be finite");
}

namespace {

struct StepOutcome {
    double max_update = 0.0;
    std::ptrdiff_t first_bad = -1;
};

}  // namespace

ValueFunctionResult solve(const ScalarField& phi0, const OrbitGameParams& params,
                          const SolveConfig& config) {
    config.validate();
    params.validate();
    phi0.spec.validate();
    if (phi0.values.size() != phi0.spec.size())
        throw std::invalid_argument("solve: phi0 value count does not match its grid");
    for (double v : phi0.values)
        if (!std::isfinite(v)) throw std::invalid_argument("solve: phi0 must be finite everywhere");

    const GridSpec& spec = phi0.spec;
    const auto strides = spec.strides();
    const std::array<std::size_t, 4> counts{spec.axes[0].count, spec.axes[1].count,
                                            spec.axes[2].count, spec.axes[3].count};
    std::array<double, 4> dx{}, inv_dx{};
    for (std::size_t a = 0; a < 4; ++a) {
        dx[a] = spec.axes[a].spacing();
        inv_dx[a] = 1.0 / dx[a];
    }
    std::array<std::vector<double>, 4> coords;
    for (std::size_t a = 0; a < 4; ++a) {
        coords[a].resize(counts[a]);
        for (std::size_t i = 0; i < counts[a]; ++i) coords[a][i] = spec.axes[a].coord(i);
    }

    ValueFunctionResult result;
    result.alpha = hamiltonian_partials_bound(spec.bounds(), params);
    double denom = 0.0;
    for (std::size_t a = 0; a < 4; ++a) denom += result.alpha[a] * inv_dx[a];
    result.dt = denom > 0.0 ? config.cfl / denom : config.horizon;

    const double w = params.omega;
    const double input_gain = config.convention == GameConvention::Avoid
                                  ? params.u_max - params.d_max
                                  : params.d_max - params.u_max;
    const bool tube = config.mode == SolveMode::Tube;

    const std::size_t n = spec.size();
    std::vector<double> cur = phi0.values;
    std::vector<double> next(n);

    std::mutex reduce_mutex;

    const auto step_once = [&](double dt_step) {
        StepOutcome outcome;
        parallel_for(n, config.num_threads, [&](std::size_t begin, std::size_t end) {
            double local_max = 0.0;
            std::ptrdiff_t local_bad = -1;

            std::size_t rem = begin;
            std::size_t ix = rem / strides[0];
            rem %= strides[0];
            std::size_t iy = rem / strides[1];
            rem %= strides[1];
            std::size_t ivx = rem / strides[2];
            std::size_t ivy = rem % strides[2];

            for (std::size_t i = begin; i < end; ++i) {
                const double v = cur[i];

                // One-sided gradients with extrapolated ghost nodes: the
                // outward difference at an edge equals the inward one.
                const double lo0 = ix > 0 ? cur[i - strides[0]] : 2.0 * v - cur[i + strides[0]];
                const double hi0 =
                    ix + 1 < counts[0] ? cur[i + strides[0]] : 2.0 * v - cur[i - strides[0]];
                const double lo1 = iy > 0 ? cur[i - strides[1]] : 2.0 * v - cur[i + strides[1]];
                const double hi1 =
                    iy + 1 < counts[1] ? cur[i + strides[1]] : 2.0 * v - cur[i - strides[1]];
                const double lo2 = ivx > 0 ? cur[i - strides[2]] : 2.0 * v - cur[i + strides[2]];
                const double hi2 =
                    ivx + 1 < counts[2] ? cur[i + strides[2]] : 2.0 * v - cur[i - strides[2]];
                const double lo3 = ivy > 0 ? cur[i - strides[3]] : 2.0 * v - cur[i + strides[3]];
                const double hi3 =
                    ivy + 1 < counts[3] ? cur[i + strides[3]] : 2.0 * v - cur[i - strides[3]];

                const double pm0 = (v - lo0) * inv_dx[0], pp0 = (hi0 - v) * inv_dx[0];
                const double pm1 = (v - lo1) * inv_dx[1], pp1 = (hi1 - v) * inv_dx[1];
                const double pm2 = (v - lo2) * inv_dx[2], pp2 = (hi2 - v) * inv_dx[2];
                const double pm3 = (v - lo3) * inv_dx[3], pp3 = (hi3 - v) * inv_dx[3];

                const double pb0 = 0.5 * (pm0 + pp0);
                const double pb1 = 0.5 * (pm1 + pp1);
                const double pb2 = 0.5 * (pm2 + pp2);
                const double pb3 = 0.5 * (pm3 + pp3);

                const double vx = coords[2][ivx];
                const double vy = coords[3][ivy];
                const double y = coords[1][iy];

                const double ham = pb0 * vx + pb1 * vy + pb2 * (-2.0 * w * vy) +
                                   pb3 * (2.0 * w * vx + 3.0 * w * w * y) +
                                   input_gain * (std::abs(pb2) + std::abs(pb3));
                const double dissipation =
                    0.5 * (result.alpha[0] * (pp0 - pm0) + result.alpha[1] * (pp1 - pm1) +
                           result.alpha[2] * (pp2 - pm2) + result.alpha[3] * (pp3 - pm3));

                // Backward-time advance in pseudo-time s = -t; the dissipation
                // enters with + so the scheme stays monotone.
                double upd = v + dt_step * (ham + dissipation);
                if (tube) {
                    upd = std::min(upd, v);
                    upd = std::min(upd, phi0.values[i]);
                }
                next[i] = upd;

                if (!std::isfinite(upd) && local_bad < 0)
                    local_bad = static_cast<std::ptrdiff_t>(i);
                local_max = std::max(local_max, std::abs(upd - v));

                if (++ivy == counts[3]) {
                    ivy = 0;
                    if (++ivx == counts[2]) {
                        ivx = 0;
                        if (++iy == counts[1]) {
                            iy = 0;
                            ++ix;
                        }
                    }
                }
            }

            std::lock_guard<std::mutex> lk(reduce_mutex);
            outcome.max_update = std::max(outcome.max_update, local_max);
            if (local_bad >= 0 &&
                (outcome.first_bad < 0 || local_bad < outcome.first_bad))
                outcome.first_bad = local_bad;
        });
        return outcome;
    };

    double s = 0.0;
    const double horizon = config.horizon;
    const bool saving = config.save_every > 0.0;
    std::size_t next_cp = 1;

    while (s < horizon && !(std::abs(horizon - s) <= 1e-9 * std::max(1.0, horizon))) {
        double target = horizon;
        bool at_checkpoint = false;
        if (saving) {
            const double cp_time = static_cast<double>(next_cp) * config.save_every;
            if (cp_time < target) {
                target = cp_time;
                at_checkpoint = true;
            } else if (cp_time == target) {
                at_checkpoint = true;
            }
        }
        double dt_step = result.dt;
        bool lands = false;
        if (s + dt_step >= target - 1e-12 * std::max(1.0, target)) {
            dt_step = target - s;
            lands = true;
        }

        const StepOutcome outcome = step_once(dt_step);
        if (outcome.first_bad >= 0) {
            const StateVec node = spec.node_state(static_cast<std::size_t>(outcome.first_bad));
            std::ostringstream msg;
            msg << "solve: non-finite value at node " << outcome.first_bad << " state=(" << node.x
                << ", " << node.y << ", " << node.vx << ", " << node.vy << ") after step "
                << result.steps + 1;
            throw SolveNumericalError(msg.str());
        }

        cur.swap(next);
        ++result.steps;
        result.step_max_updates.push_back(outcome.max_update);
        s = lands ? target : s + dt_step;

        if (lands && at_checkpoint) {
            result.checkpoints.emplace_back(target, ScalarField{spec, cur});
            ++next_cp;
        }

        if (config.convergence_eps > 0.0 && outcome.max_update < config.convergence_eps) {
            result.converged_at = s;
            break;
        }
    }

    result.final = ScalarField{spec, std::move(cur)};
    return result;
}

Membership brt_membership(const ValueFunctionResult& result, const StateVec& state) {
    const SampleResult s = sample(result.final, state);
    Membership m;
    m.margin = s.value;
    m.out_of_domain = s.out_of_domain;
    m.inside = !s.out_of_domain && s.value <= 0.0;
    return m;
}

std::vector<ValueFunctionResult> disturbance_sensitivity(const ScalarField& phi0,
                                                         const OrbitGameParams& params,
                                                         const SolveConfig& config,
                                                         const std::vector<double>& d_levels) {
    if (!std::is_sorted(d_levels.begin(), d_levels.end()))
        throw std::invalid_argument("disturbance_sensitivity: d_levels must be sorted ascending");
    std::vector<ValueFunctionResult> out;
    out.reserve(d_levels.size());
    for (double level : d_levels) {
        OrbitGameParams p = params;
        p.d_max = level;
        out.push_back(solve(phi0, p, config));
    }
    return out;
}

std::string solve_stats_json(const ValueFunctionResult& result) {
    nlohmann::json j;
    j["steps"] = result.steps;
    j["dt"] = result.dt;
    j["alpha"] = result.alpha;
    j["converged_at"] =
        result.converged_at ? nlohmann::json(*result.converged_at) : nlohmann::json(nullptr);
    j["max_updates"] = result.step_max_updates;
    return j.dump(2) + "\n";
}

}  // namespace orbsafe
