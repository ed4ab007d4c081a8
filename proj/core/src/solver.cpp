#include "hartree/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "hartree/operators.hpp"

namespace hartree {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double relative_change(const Field& next, const Field& current) {
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
        diff = std::max(diff, std::abs(next[i] - current[i]));
        scale = std::max(scale, std::abs(current[i]));
    }
    if (scale == 0.0) return diff == 0.0 ? 0.0 : infinity;
    return diff / scale;
}

double edge_fraction(const Field& f) {
    const Grid& g = f.grid;
    const std::size_t n = g.points_per_axis();
    double edge = 0.0;
    if (g.dim() == 1) {
        edge = std::abs(f[0]);
    } else {
        for (std::size_t i = 0; i < n; ++i) edge = std::max({edge, std::abs(f[i]), std::abs(f[i * n])});
    }
    const double peak = sup_norm(f);
    return peak > 0.0 ? edge / peak : 0.0;
}

}  // namespace

Field sample_initial_data(const InitialData& data, const Grid& grid) {
    return std::visit(
        overloaded{
            [&](const GaussianData& d) {
                if (!(d.width > 0.0)) throw DomainError("gaussian initial data: width must be positive");
                return sample(grid, [&](std::span<const double> x) {
                    double r2 = 0.0;
                    for (std::size_t a = 0; a < x.size(); ++a) r2 += (x[a] - d.center[a]) * (x[a] - d.center[a]);
                    return d.amplitude * std::exp(-r2 / (d.width * d.width));
                });
            },
            [&](const AlgebraicData& d) {
                return sample(grid, [&](std::span<const double> x) {
                    double r2 = 0.0;
                    for (double c : x) r2 += c * c;
                    return d.epsilon * std::pow(1.0 + r2, -0.5 * d.gamma);
                });
            },
            [&](const CustomData& d) {
                if (d.values.size() != grid.size()) throw DomainError("custom initial data: size does not match grid");
                return Field(grid, d.values);
            },
        },
        data);
}

void ProblemSpec::validate() const {
    auto require = [](bool ok, const char* message) {
        if (!ok) throw DomainError(message);
    };
    require(beta > 0.0 && beta <= 2.0, "beta must lie in (0, 2]");
    kernel.validate(grid.dim());
    require(std::isfinite(p) && p > 0.0, "p must be positive");
    require(std::isfinite(q) && q >= 0.0, "q must be nonnegative");
    require(horizon > 0.0 && std::isfinite(horizon), "horizon must be positive");
    require(dt_initial > 0.0, "dt_initial must be positive");
    require(dt_min > 0.0 && dt_min <= dt_initial, "dt_min must lie in (0, dt_initial]");
    require(dt_max >= dt_initial, "dt_max must be >= dt_initial");
    require(output_interval > 0.0, "output_interval must be positive");
    require(blowup_factor > 1.0, "blowup_factor must exceed 1");
    require(lebesgue_index > 0.0, "lebesgue_index must be positive");
    require(control.shrink > 0.0 && control.shrink < 1.0, "step shrink factor must lie in (0, 1)");
    require(control.growth >= 1.0, "step growth factor must be >= 1");
    require(control.grow_below < control.reject_above, "step thresholds must satisfy grow_below < reject_above");
    for (double t : snapshot_times) require(t >= 0.0 && t <= horizon, "snapshot times must lie in [0, horizon]");
}

double ProblemSpec::critical_lebesgue_index() const {
    const double n = static_cast<double>(grid.dim());
    return n * (p + q - 1.0) / (beta + kernel.effective_alpha(grid.dim()));
}

std::string ProblemSpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << "dim=" << grid.dim() << "\npoints=" << grid.points_per_axis() << "\nbox=" << grid.box_length()
       << "\nbeta=" << beta << "\nkernel=" << kernel.describe() << "\np=" << p << "\nq=" << q << "\ninitial=";
    std::visit(overloaded{
                   [&](const GaussianData& d) {
                       os << "gaussian(" << d.amplitude << "," << d.width << "," << d.center[0] << ","
                          << d.center[1] << ")";
                   },
                   [&](const AlgebraicData& d) { os << "algebraic(" << d.epsilon << "," << d.gamma << ")"; },
                   [&](const CustomData& d) {
                       std::uint64_t h = 1469598103934665603ULL;
                       for (double v : d.values) {
                           unsigned char bytes[sizeof(double)];
                           std::memcpy(bytes, &v, sizeof v);
                           for (unsigned char b : bytes) h = (h ^ b) * 1099511628211ULL;
                       }
                       os << "custom(" << d.values.size() << "," << std::hex << h << std::dec << ")";
                   },
               },
               initial);
    os << "\nhorizon=" << horizon << "\ndt_initial=" << dt_initial << "\ndt_min=" << dt_min << "\ndt_max=" << dt_max
       << "\noutput_interval=" << output_interval << "\nblowup_factor=" << blowup_factor
       << "\nlebesgue_index=" << lebesgue_index << "\ncontrol=" << control.reject_above << ","
       << control.grow_below << "," << control.growth << "," << control.shrink << "\ndealias=" << dealias
       << "\nsnapshots=";
    for (double t : snapshot_times) os << t << ",";
    os << "\nrecord_every_step=" << record_every_step << "\n";
    return os.str();
}

std::string ProblemSpec::digest() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : describe()) h = (h ^ c) * 1099511628211ULL;
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string to_string(RunStatus status) {
    switch (status) {
        case RunStatus::completed: return "completed";
        case RunStatus::blowup: return "blowup";
        case RunStatus::dt_underflow: return "dt_underflow";
    }
    return "unknown";
}

NormSample measure(const Field& u, double t, const ProblemSpec& spec) {
    return {t,
            lp_norm(u, spec.lebesgue_index),
            sup_norm(u),
            lp_norm(u, spec.critical_lebesgue_index()),
            integral(u),
            min_value(u)};
}

double phi1(double z) {
    if (std::abs(z) < 1e-2) return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0)));
    return std::expm1(z) / z;
}

double phi2(double z) {
    if (std::abs(z) < 1e-2) return 0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0 + z / 720.0)));
    return (std::expm1(z) - z) / (z * z);
}

EtdStepper::EtdStepper(const ProblemSpec& spec)
    : grid_(spec.grid),
      symbol_(spec.grid.size()),
      nonlinearity_(spec.grid, spec.kernel, spec.p, spec.q, spec.dealias) {
    for (std::size_t k = 0; k < symbol_.size(); ++k)
        symbol_[k] = k == 0 ? 0.0 : std::pow(grid_.frequency_norm(k), spec.beta);
}

Field EtdStepper::step(const Field& u, double dt) const {
    SpectralField u_hat = forward_transform(u);
    if (nonlinearity_.vanishes()) {
        for (std::size_t k = 0; k < u_hat.size(); ++k) u_hat[k] *= std::exp(-dt * symbol_[k]);
        return inverse_transform(u_hat);
    }
    const SpectralField n_u = nonlinearity_.spectral(u);
    std::vector<double> e(symbol_.size()), p1(symbol_.size()), p2(symbol_.size());
    for (std::size_t k = 0; k < symbol_.size(); ++k) {
        const double z = -dt * symbol_[k];
        e[k] = std::exp(z);
        p1[k] = phi1(z);
        p2[k] = phi2(z);
    }
    SpectralField a_hat(grid_);
    for (std::size_t k = 0; k < a_hat.size(); ++k) a_hat[k] = e[k] * u_hat[k] + dt * p1[k] * n_u[k];
    const Field a = inverse_transform(a_hat);
    if (!a.all_finite()) return a;
    const SpectralField n_a = nonlinearity_.spectral(a);
    for (std::size_t k = 0; k < a_hat.size(); ++k) a_hat[k] += dt * p2[k] * (n_a[k] - n_u[k]);
    return inverse_transform(a_hat);
}

Field etd_step(const Field& u, const ProblemSpec& spec, double dt) {
    if (!(dt > 0.0)) throw DomainError("etd_step: dt must be positive");
    if (!(u.grid == spec.grid)) throw DomainError("etd_step: field grid does not match the problem grid");
    return EtdStepper(spec).step(u, dt);
}

RunOutcome integrate(const ProblemSpec& spec) {
    spec.validate();
    const EtdStepper stepper(spec);
    RunOutcome out;
    out.digest = spec.digest();

    Field u = sample_initial_data(spec.initial, spec.grid);
    if (!u.all_finite()) throw DomainError("initial data is not finite");
    const double linf0 = sup_norm(u);

    std::vector<double> snaps = spec.snapshot_times;
    std::sort(snaps.begin(), snaps.end());
    std::size_t next_snap = 0;
    auto take_snapshots = [&](double t) {
        while (next_snap < snaps.size() && snaps[next_snap] <= t) {
            out.snapshots.push_back({t, u});
            ++next_snap;
        }
    };

    double t = 0.0;
    out.series.push_back(measure(u, t, spec));
    take_snapshots(t);

    double dt = std::min(spec.dt_initial, spec.dt_max);
    // Output times are k * interval, computed by multiplication so they do not drift; one
    // that lands within rounding of the horizon is the horizon itself.
    long long output_index = 1;
    const auto output_time = [&](long long k) {
        const double v = static_cast<double>(k) * spec.output_interval;
        return v >= spec.horizon * (1.0 - 1e-12) ? spec.horizon : v;
    };
    double next_output = output_time(output_index);
    while (t < spec.horizon) {
        double target = std::min(spec.horizon, next_output);
        if (next_snap < snaps.size()) target = std::min(target, snaps[next_snap]);
        const bool clamped = dt >= target - t;
        const double h = clamped ? target - t : dt;
        if (!(t + h > t)) {
            out.status = RunStatus::dt_underflow;
            break;
        }

        Field next(spec.grid);
        bool ok = true;
        try {
            next = stepper.step(u, h);
            ok = next.all_finite();
        } catch (const SpectralStateError&) {
            ok = false;
        }
        const double change = ok ? relative_change(next, u) : infinity;
        if (!ok || change > spec.control.reject_above) {
            ++out.steps_rejected;
            dt = h * spec.control.shrink;
            if (dt < spec.dt_min) {
                out.status = RunStatus::dt_underflow;
                break;
            }
            continue;
        }

        u = std::move(next);
        t = clamped ? target : t + h;
        ++out.steps_taken;
        if (change < spec.control.grow_below) dt = std::min(dt * spec.control.growth, spec.dt_max);

        const bool at_output = clamped && (t >= next_output || t >= spec.horizon);
        while (next_output <= t && next_output < spec.horizon) next_output = output_time(++output_index);
        const double linf = sup_norm(u);
        const bool blew_up = linf0 > 0.0 && linf >= spec.blowup_factor * linf0;
        if (at_output || spec.record_every_step || blew_up) out.series.push_back(measure(u, t, spec));
        take_snapshots(t);
        if (blew_up) {
            out.status = RunStatus::blowup;
            out.blowup_time = t;
            break;
        }
    }
    if (out.status == RunStatus::dt_underflow && out.series.back().t < t) out.series.push_back(measure(u, t, spec));
    out.final_state = std::move(u);
    return out;
}

ScalingCheck scaling_check(const ProblemSpec& spec, double lambda, double t_star) {
    if (!spec.kernel.is_riesz()) throw DomainError("scaling_check: the kernel must be a Riesz kernel");
    if (!(lambda > 0.0) || !(t_star > 0.0)) throw DomainError("scaling_check: need lambda > 0 and t_star > 0");
    spec.validate();

    const Field u0 = sample_initial_data(spec.initial, spec.grid);
    if (top_third_energy_fraction(forward_transform(u0)) > 1e-6 || edge_fraction(u0) > 1e-6)
        throw DomainError("scaling_check: initial data is not resolved on the grid");

    const int n = spec.grid.dim();
    const double alpha = spec.kernel.effective_alpha(n);
    const double a = (spec.beta + alpha) / (spec.p + spec.q - 1.0);
    const double amplitude = std::pow(lambda, a);
    const double time_scale = std::pow(lambda, -spec.beta);

    ProblemSpec base = spec;
    base.horizon = t_star;
    base.snapshot_times.clear();
    base.output_interval = std::min(spec.output_interval, t_star);

    // Same point count on the box L/lambda: sample j of the new grid sits at x_j / lambda.
    ProblemSpec scaled = base;
    scaled.grid = Grid(n, spec.grid.points_per_axis(), spec.grid.box_length() / lambda);
    std::vector<double> values = u0.values;
    for (double& v : values) v *= amplitude;
    scaled.initial = CustomData{values};
    scaled.horizon = t_star * time_scale;
    scaled.dt_initial = spec.dt_initial * time_scale;
    scaled.dt_min = spec.dt_min * time_scale;
    scaled.dt_max = spec.dt_max * time_scale;
    scaled.output_interval = base.output_interval * time_scale;

    const RunOutcome r_base = integrate(base);
    const RunOutcome r_scaled = integrate(scaled);

    Field mapped = *r_scaled.final_state;
    mapped.grid = spec.grid;
    for (double& v : mapped.values) v /= amplitude;

    ScalingCheck check{};
    check.field_deviation = sup_relative_deviation(mapped, *r_base.final_state);
    const double qsc = spec.critical_lebesgue_index();
    check.norm_exponent = a - static_cast<double>(n) / qsc;
    const double predicted = std::pow(lambda, check.norm_exponent) * lp_norm(u0, qsc);
    const double actual = lp_norm(Field(scaled.grid, values), qsc);
    check.norm_deviation = predicted > 0.0 ? std::abs(actual / predicted - 1.0) : std::abs(actual);
    check.base_status = r_base.status;
    check.scaled_status = r_scaled.status;
    return check;
}

}  // namespace hartree
