#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hartree/grid.hpp"
#include "hartree/hartree_operator.hpp"
#include "hartree/kernels.hpp"
#include "hartree/norms.hpp"

namespace hartree {

/// amplitude * exp(-|x - center|^2 / width^2).
struct GaussianData {
    double amplitude;
    double width;
    std::array<double, 2> center{0.0, 0.0};
};

/// epsilon * (1 + |x|^2)^(-gamma/2).
struct AlgebraicData {
    double epsilon;
    double gamma;
};

/// Samples supplied directly; the grid must match the problem grid.
struct CustomData {
    std::vector<double> values;
};

using InitialData = std::variant<GaussianData, AlgebraicData, CustomData>;

Field sample_initial_data(const InitialData& data, const Grid& grid);

/// Adaptive step thresholds on the relative change max|u+ - u| / max|u|.
struct StepControl {
    double reject_above = 0.10;
    double grow_below = 0.01;
    double growth = 1.25;
    double shrink = 0.5;
};

struct ProblemSpec {
    explicit ProblemSpec(Grid g) : grid(g) {}

    Grid grid;
    double beta = 2.0;
    KernelSpec kernel = KernelSpec::riesz(0.5);
    double p = 2.0;
    double q = 1.0;
    InitialData initial = GaussianData{1.0, 1.0};
    double horizon = 1.0;
    double dt_initial = 1e-3;
    double dt_min = 1e-14;
    double dt_max = infinity;
    double output_interval = 0.1;
    double blowup_factor = 1e8;
    /// The L^s norm tracked alongside L^inf (the Lebesgue index of the local theory).
    double lebesgue_index = 2.0;
    StepControl control{};
    bool dealias = true;
    /// Times at which full fields are stored; steps land on them exactly.
    std::vector<double> snapshot_times;
    /// Record norms after every accepted step, not just at output times.
    bool record_every_step = false;

    /// Throws DomainError for invalid parameters.
    void validate() const;
    /// n (p + q - 1) / (beta + alpha) with alpha the kernel's effective exponent.
    [[nodiscard]] double critical_lebesgue_index() const;
    /// Canonical text of every field, used for echoing and digests.
    [[nodiscard]] std::string describe() const;
    /// FNV-1a hash of describe(), as 16 hex digits.
    [[nodiscard]] std::string digest() const;
};

enum class RunStatus { completed, blowup, dt_underflow };
std::string to_string(RunStatus status);

struct NormSample {
    double t;
    double ls;
    double linf;
    double qsc;
    double mass;
    double min;
};

struct Snapshot {
    double t;
    Field field;
};

struct RunOutcome {
    RunStatus status = RunStatus::completed;
    std::optional<double> blowup_time;
    std::vector<NormSample> series;
    std::size_t steps_taken = 0;
    std::size_t steps_rejected = 0;
    std::string digest;
    std::vector<Snapshot> snapshots;
    std::optional<Field> final_state;
};

NormSample measure(const Field& u, double t, const ProblemSpec& spec);

/// ETD-RK2 stepping with the linear part solved exactly.
class EtdStepper {
public:
    explicit EtdStepper(const ProblemSpec& spec);
    /// One step of size dt; the result may be non-finite if the step overflowed.
    [[nodiscard]] Field step(const Field& u, double dt) const;
    [[nodiscard]] const HartreeNonlinearity& nonlinearity() const noexcept { return nonlinearity_; }

private:
    Grid grid_;
    std::vector<double> symbol_;  // |xi|^beta
    HartreeNonlinearity nonlinearity_;
};

/// One ETD-RK2 step (builds a stepper; prefer EtdStepper for repeated steps).
Field etd_step(const Field& u, const ProblemSpec& spec, double dt);

/// phi_1(z) = (e^z - 1)/z and phi_2(z) = (e^z - 1 - z)/z^2, by series near zero.
double phi1(double z);
double phi2(double z);

RunOutcome integrate(const ProblemSpec& spec);

struct ScalingCheck {
    double field_deviation;
    /// | ||u_lambda(0)||_qsc / (lambda^(a - n/q_sc) ||u_0||_qsc) - 1 |.
    double norm_deviation;
    /// lambda^(a - n/q_sc) with a = (beta + alpha)/(p + q - 1); zero when q_sc is the index.
    double norm_exponent;
    RunStatus base_status;
    RunStatus scaled_status;
};

/**
 * Runs the problem to t_star and the rescaled problem lambda^a u0(lambda x) on
 * the box L/lambda to t_star / lambda^beta, then compares the two final fields
 * under the scaling map. Requires a Riesz kernel and initial data that is
 * resolved (top-third spectral energy and edge values below 1e-6 relative).
 */
ScalingCheck scaling_check(const ProblemSpec& spec, double lambda, double t_star);

}  // namespace hartree
