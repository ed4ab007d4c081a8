#include "hartree/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hartree/grid.hpp"

namespace hartree {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& message) {
    if (!ok) throw DomainError(message);
}

}  // namespace

KernelSpec KernelSpec::constant(double value) { return KernelSpec{ConstantKernel{value}}; }
KernelSpec KernelSpec::power(double coefficient, double sigma) { return KernelSpec{PowerKernel{coefficient, sigma}}; }
KernelSpec KernelSpec::power_log(double sigma, double delta) { return KernelSpec{PowerLogKernel{sigma, delta}}; }
KernelSpec KernelSpec::riesz(double alpha) { return KernelSpec{RieszKernel{alpha}}; }

double KernelSpec::operator()(double r, int n) const {
    return std::visit(
        overloaded{
            [](const ConstantKernel& k) { return k.value; },
            [r](const PowerKernel& k) { return k.coefficient * std::pow(r, -k.sigma); },
            [r](const PowerLogKernel& k) { return std::pow(r, -k.sigma) * std::pow(std::log1p(r), k.delta); },
            [r, n](const RieszKernel& k) {
                return riesz_constant(n, k.alpha).value * std::pow(r, k.alpha - static_cast<double>(n));
            },
        },
        family);
}

void KernelSpec::validate(int n) const {
    const double dim = static_cast<double>(n);
    require(n == 1 || n == 2, "kernel: dimension must be 1 or 2");
    require(tail_threshold > 0.0, "kernel: tail threshold must be positive");
    std::visit(overloaded{
                   [](const ConstantKernel& k) {
                       require(std::isfinite(k.value) && k.value >= 0.0, "constant kernel: value must be >= 0");
                   },
                   [dim](const PowerKernel& k) {
                       require(k.coefficient > 0.0, "power kernel: coefficient must be positive");
                       require(k.sigma > 0.0 && k.sigma < dim,
                               "power kernel: sigma must lie in (0, n); sigma >= n is not locally integrable");
                   },
                   [dim](const PowerLogKernel& k) {
                       require(k.sigma > 0.0 && k.sigma < dim, "power-log kernel: sigma must lie in (0, n)");
                       require(k.delta > k.sigma - dim,
                               "power-log kernel: delta must exceed sigma - n for local integrability");
                   },
                   [dim](const RieszKernel& k) {
                       require(k.alpha > 0.0 && k.alpha < dim, "riesz kernel: alpha must lie in (0, n)");
                   },
               },
               family);
}

std::vector<SingularTerm> KernelSpec::local_expansion(int n) const {
    return std::visit(
        overloaded{
            [](const ConstantKernel& k) { return std::vector<SingularTerm>{{k.value, 0.0}}; },
            [](const PowerKernel& k) { return std::vector<SingularTerm>{{k.coefficient, -k.sigma}}; },
            [](const PowerLogKernel& k) {
                // r^-sigma ln^delta(1+r) = r^(delta-sigma) (1 - delta r/2 + (delta/3 + delta(delta-1)/8) r^2 + ...)
                const double g = k.delta - k.sigma;
                const double d = k.delta;
                return std::vector<SingularTerm>{
                    {1.0, g}, {-0.5 * d, g + 1.0}, {d / 3.0 + d * (d - 1.0) / 8.0, g + 2.0}};
            },
            [n](const RieszKernel& k) {
                return std::vector<SingularTerm>{
                    {riesz_constant(n, k.alpha).value, k.alpha - static_cast<double>(n)}};
            },
        },
        family);
}

double KernelSpec::effective_alpha(int n) const {
    const double dim = static_cast<double>(n);
    return std::visit(overloaded{
                          [dim](const ConstantKernel&) { return dim; },
                          [dim](const PowerKernel& k) { return dim - k.sigma; },
                          [dim](const PowerLogKernel& k) { return dim - k.sigma; },
                          [](const RieszKernel& k) { return k.alpha; },
                      },
                      family);
}

std::string KernelSpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(overloaded{
                   [&](const ConstantKernel& k) { os << "constant(" << k.value << ")"; },
                   [&](const PowerKernel& k) { os << "power(" << k.coefficient << "," << k.sigma << ")"; },
                   [&](const PowerLogKernel& k) { os << "power_log(" << k.sigma << "," << k.delta << ")"; },
                   [&](const RieszKernel& k) { os << "riesz(" << k.alpha << ")"; },
               },
               family);
    os << ";R0=" << tail_threshold;
    return os.str();
}

double tail_monotonicity_deviation(const KernelSpec& kernel, int n, std::span<const double> radii,
                                   int samples_per_radius) {
    double worst = 0.0;
    for (double R : radii) {
        const double at_r = kernel(R, n);
        double inf = at_r;
        // Log-spaced sample of (0, R]: the interesting structure of these kernels is near zero.
        const double lo = R * 1e-6;
        for (int i = 0; i < samples_per_radius; ++i) {
            const double t = static_cast<double>(i) / (samples_per_radius - 1);
            const double r = lo * std::pow(R / lo, t);
            inf = std::min(inf, kernel(r, n));
        }
        if (at_r != 0.0) worst = std::max(worst, std::abs(at_r - inf) / std::abs(at_r));
    }
    return worst;
}

RieszConstant riesz_constant(int n, double sigma) {
    const double dim = static_cast<double>(n);
    if (n < 1) throw DomainError("riesz_constant: dimension must be positive");
    if (!(sigma > 0.0 && sigma < dim)) throw DomainError("riesz_constant: sigma must lie in (0, n)");
    const double value = std::tgamma(0.5 * (dim - sigma)) /
                         (std::tgamma(0.5 * sigma) * std::pow(std::numbers::pi, 0.5 * dim) * std::pow(2.0, sigma));
    return {n, sigma, value};
}

}  // namespace hartree
