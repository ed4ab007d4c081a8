#include "hartree/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"

namespace hartree {
namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid::Grid(int dim, std::size_t points_per_axis, double box_length)
    : dim_(dim), n_(points_per_axis), length_(box_length) {
    if (dim != 1 && dim != 2) throw DomainError("grid dimension must be 1 or 2, got " + std::to_string(dim));
    const std::size_t minimum = dim == 1 ? 32 : 16;
    if (!is_power_of_two(points_per_axis) || points_per_axis < minimum)
        throw DomainError("points per axis must be a power of two >= " + std::to_string(minimum) + ", got " +
                          std::to_string(points_per_axis));
    if (!(box_length > 0.0) || !std::isfinite(box_length))
        throw DomainError("box length must be positive and finite");
    spacing_ = length_ / static_cast<double>(n_);
    total_ = dim_ == 1 ? n_ : n_ * n_;
    cell_volume_ = dim_ == 1 ? spacing_ : spacing_ * spacing_;
    box_volume_ = dim_ == 1 ? length_ : length_ * length_;
}

double Grid::frequency(std::size_t i) const noexcept {
    return 2.0 * std::numbers::pi * static_cast<double>(wavenumber(i)) / length_;
}

double Grid::frequency_norm(std::size_t flat) const noexcept {
    const auto [i, j] = unflatten(flat);
    if (dim_ == 1) return std::abs(frequency(i));
    return std::hypot(frequency(i), frequency(j));
}

double Grid::radius(std::size_t flat) const noexcept {
    const auto [i, j] = unflatten(flat);
    if (dim_ == 1) return std::abs(coordinate(i));
    return std::hypot(coordinate(i), coordinate(j));
}

Grid make_grid(int dim, std::size_t points_per_axis, double box_length) {
    return Grid(dim, points_per_axis, box_length);
}

Field::Field(Grid g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) throw DomainError("field size does not match grid");
}

bool Field::all_finite() const noexcept {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

Field sample(const Grid& grid, const std::function<double(std::span<const double>)>& f) {
    Field out(grid);
    std::array<double, 2> x{};
    for (std::size_t flat = 0; flat < grid.size(); ++flat) {
        const auto [i, j] = grid.unflatten(flat);
        x[0] = grid.coordinate(i);
        x[1] = grid.coordinate(j);
        out[flat] = f(std::span<const double>(x.data(), static_cast<std::size_t>(grid.dim())));
    }
    return out;
}

std::size_t conjugate_index(const Grid& grid, std::size_t flat) noexcept {
    const std::size_t n = grid.points_per_axis();
    const auto [i, j] = grid.unflatten(flat);
    const std::size_t ci = (n - i) % n;
    if (grid.dim() == 1) return ci;
    const std::size_t cj = (n - j) % n;
    return ci * n + cj;
}

double hermitian_deviation(const SpectralField& spectrum) {
    double worst = 0.0;
    double scale = 0.0;
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        const auto partner = conjugate_index(spectrum.grid, k);
        worst = std::max(worst, std::abs(spectrum[partner] - std::conj(spectrum[k])));
        scale = std::max(scale, std::abs(spectrum[k]));
    }
    return scale > 0.0 ? worst / scale : 0.0;
}

SpectralField forward_transform(const Field& f) {
    const Grid& g = f.grid;
    std::vector<cplx> in(f.values.begin(), f.values.end());
    SpectralField out(g);
    detail::dft(in, out.coefficients, g.dim(), g.points_per_axis(), detail::FftDirection::forward);
    const double w = g.cell_volume();
    for (auto& c : out.coefficients) c *= w;
    return out;
}

Field inverse_transform(const SpectralField& spectrum) {
    const Grid& g = spectrum.grid;
    std::vector<cplx> buffer(g.size());
    detail::dft(spectrum.coefficients, buffer, g.dim(), g.points_per_axis(), detail::FftDirection::backward);

    const double inv_volume = 1.0 / g.box_volume();
    Field out(g);
    double max_real = 0.0;
    double max_imag = 0.0;
    for (std::size_t i = 0; i < buffer.size(); ++i) {
        out[i] = buffer[i].real() * inv_volume;
        max_real = std::max(max_real, std::abs(buffer[i].real()));
        max_imag = std::max(max_imag, std::abs(buffer[i].imag()));
    }
    // Absolute floor covers fields that are zero up to rounding.
    if (max_imag > 1e-10 * max_real + 1e-300) {
        throw SpectralStateError("inverse transform: imaginary residue " + std::to_string(max_imag / max_real) +
                                 " exceeds 1e-10 relative; coefficients are not Hermitian");
    }
    return out;
}

Multiplier::Multiplier(Grid grid, std::vector<double> symbol, ZeroModePolicy policy)
    : grid_(grid), symbol_(std::move(symbol)), policy_(policy) {
    if (symbol_.size() != grid_.size()) throw DomainError("multiplier symbol size does not match grid");
}

Multiplier Multiplier::radial(const Grid& grid, const std::function<double(double)>& m, ZeroModePolicy policy) {
    std::vector<double> symbol(grid.size());
    const bool evaluate_zero = std::holds_alternative<ZeroModeAsComputed>(policy);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (k == 0 && !evaluate_zero) {
            symbol[k] = 0.0;
            continue;
        }
        symbol[k] = m(grid.frequency_norm(k));
    }
    return Multiplier(grid, std::move(symbol), policy);
}

double Multiplier::effective(std::size_t i) const noexcept {
    if (i != 0) return symbol_[i];
    struct Resolve {
        double computed;
        double operator()(ZeroModeAsComputed) const { return computed; }
        double operator()(ZeroModeForceZero) const { return 0.0; }
        double operator()(ZeroModeForceOne) const { return 1.0; }
        double operator()(ZeroModeOverride o) const { return o.value; }
    };
    return std::visit(Resolve{symbol_[0]}, policy_);
}

void apply_multiplier_in_place(SpectralField& spectrum, const Multiplier& m) {
    if (!(spectrum.grid == m.grid())) throw DomainError("apply_multiplier: grid mismatch");
    const auto& s = m.symbol();
    spectrum[0] *= m.effective(0);
    for (std::size_t k = 1; k < spectrum.size(); ++k) spectrum[k] *= s[k];
}

SpectralField apply_multiplier(const SpectralField& spectrum, const Multiplier& m) {
    SpectralField out = spectrum;
    apply_multiplier_in_place(out, m);
    return out;
}

Multiplier compose(const Multiplier& a, const Multiplier& b) {
    if (!(a.grid() == b.grid())) throw DomainError("compose: grid mismatch");
    std::vector<double> symbol(a.symbol().size());
    for (std::size_t k = 0; k < symbol.size(); ++k) symbol[k] = a.effective(k) * b.effective(k);
    return Multiplier(a.grid(), std::move(symbol), ZeroModeAsComputed{});
}

}  // namespace hartree
