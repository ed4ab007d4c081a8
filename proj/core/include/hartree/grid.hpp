#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

namespace hartree {

using cplx = std::complex<double>;

/// Raised when an operation receives arguments outside its domain.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a spectral state fails a consistency check (e.g. the
/// coefficients of what should be a real field are not Hermitian).
class SpectralStateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * Uniform periodic grid on the box [-L/2, L/2)^dim.
 *
 * Sample j along an axis sits at x_j = -L/2 + j*h with h = L/N. Storage is
 * row-major (the last axis varies fastest). Spectral coefficients use the
 * same flat layout with FFT ordering along each axis: storage index i maps to
 * the integer wavenumber k = i for i < N/2 and k = i - N otherwise, so that
 * k ranges over [-N/2, N/2) and xi_k = 2*pi*k/L.
 */
class Grid {
public:
    Grid(int dim, std::size_t points_per_axis, double box_length);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t points_per_axis() const noexcept { return n_; }
    [[nodiscard]] double box_length() const noexcept { return length_; }
    [[nodiscard]] double spacing() const noexcept { return spacing_; }
    [[nodiscard]] std::size_t size() const noexcept { return total_; }
    /// h^dim, the volume element of the discrete integral.
    [[nodiscard]] double cell_volume() const noexcept { return cell_volume_; }
    /// L^dim.
    [[nodiscard]] double box_volume() const noexcept { return box_volume_; }

    /// Coordinate of sample j along any axis.
    [[nodiscard]] double coordinate(std::size_t j) const noexcept {
        return -0.5 * length_ + static_cast<double>(j) * spacing_;
    }
    /// Signed integer wavenumber of storage index i along an axis.
    [[nodiscard]] long wavenumber(std::size_t i) const noexcept {
        const auto half = static_cast<long>(n_ / 2);
        const auto k = static_cast<long>(i);
        return k < half ? k : k - static_cast<long>(n_);
    }
    /// Angular frequency xi_k = 2*pi*k/L for storage index i along an axis.
    [[nodiscard]] double frequency(std::size_t i) const noexcept;

    /// |xi| for flat spectral index.
    [[nodiscard]] double frequency_norm(std::size_t flat) const noexcept;
    /// |x| for flat physical index.
    [[nodiscard]] double radius(std::size_t flat) const noexcept;
    /// Axis indices of a flat index (axis 1 is zero for 1D grids).
    [[nodiscard]] std::array<std::size_t, 2> unflatten(std::size_t flat) const noexcept {
        if (dim_ == 1) return {flat, 0};
        return {flat / n_, flat % n_};
    }
    /// Flat index of the sample at the origin x = 0.
    [[nodiscard]] std::size_t origin_index() const noexcept {
        return dim_ == 1 ? n_ / 2 : (n_ / 2) * n_ + n_ / 2;
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int dim_;
    std::size_t n_;
    double length_;
    double spacing_;
    std::size_t total_;
    double cell_volume_;
    double box_volume_;
};

/// Validating constructor; throws DomainError for unsupported shapes.
Grid make_grid(int dim, std::size_t points_per_axis, double box_length);

/// Real samples on a grid.
struct Field {
    Grid grid;
    std::vector<double> values;

    explicit Field(Grid g) : grid(g), values(g.size(), 0.0) {}
    Field(Grid g, std::vector<double> v);

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    double& operator[](std::size_t i) noexcept { return values[i]; }
    double operator[](std::size_t i) const noexcept { return values[i]; }

    [[nodiscard]] bool all_finite() const noexcept;
};

/// Samples f(x) at every grid point (x has grid.dim() components).
Field sample(const Grid& grid, const std::function<double(std::span<const double>)>& f);

/// Fourier coefficients on the frequency lattice of a grid.
struct SpectralField {
    Grid grid;
    std::vector<cplx> coefficients;

    explicit SpectralField(Grid g) : grid(g), coefficients(g.size(), cplx{0.0, 0.0}) {}

    [[nodiscard]] std::size_t size() const noexcept { return coefficients.size(); }
    cplx& operator[](std::size_t i) noexcept { return coefficients[i]; }
    const cplx& operator[](std::size_t i) const noexcept { return coefficients[i]; }
    /// The zero mode, which equals the discrete integral of the field.
    [[nodiscard]] cplx zero_mode() const noexcept { return coefficients[0]; }
};

/// Flat spectral index of the wavenumber -k (the Hermitian partner).
std::size_t conjugate_index(const Grid& grid, std::size_t flat) noexcept;

/// max |F(-k) - conj(F(k))| / max |F(k)|; zero for an all-zero field.
double hermitian_deviation(const SpectralField& spectrum);

/**
 * F(k) = h^n * sum_j f_j exp(-2 pi i k.j / N).
 *
 * The zero mode is the discrete integral of f; phases are referenced to the
 * first grid point rather than the origin.
 */
SpectralField forward_transform(const Field& f);

/**
 * f_j = L^-n * sum_k F(k) exp(2 pi i k.j / N).
 *
 * Throws SpectralStateError if the imaginary residue exceeds 1e-10 relative
 * to the real part, which means the coefficients were not Hermitian.
 */
Field inverse_transform(const SpectralField& spectrum);

struct ZeroModeAsComputed {};
struct ZeroModeForceZero {};
struct ZeroModeForceOne {};
struct ZeroModeOverride {
    double value;
};
using ZeroModePolicy = std::variant<ZeroModeAsComputed, ZeroModeForceZero, ZeroModeForceOne, ZeroModeOverride>;

/// A real diagonal Fourier multiplier on a grid's frequency lattice.
class Multiplier {
public:
    Multiplier(Grid grid, std::vector<double> symbol, ZeroModePolicy policy = ZeroModeAsComputed{});

    /// Builds m(|xi|) on the lattice. m(0) is only evaluated under the as-computed policy.
    static Multiplier radial(const Grid& grid, const std::function<double(double)>& m,
                             ZeroModePolicy policy = ZeroModeAsComputed{});

    [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
    [[nodiscard]] const std::vector<double>& symbol() const noexcept { return symbol_; }
    [[nodiscard]] const ZeroModePolicy& zero_mode_policy() const noexcept { return policy_; }
    /// Symbol value actually applied at flat index i (policy resolved at i = 0).
    [[nodiscard]] double effective(std::size_t i) const noexcept;

private:
    Grid grid_;
    std::vector<double> symbol_;
    ZeroModePolicy policy_;
};

/// Pointwise product on the lattice. Throws DomainError on grid mismatch.
SpectralField apply_multiplier(const SpectralField& spectrum, const Multiplier& m);
void apply_multiplier_in_place(SpectralField& spectrum, const Multiplier& m);

/// Multiplier whose effective symbol is the product of the two effective symbols.
Multiplier compose(const Multiplier& a, const Multiplier& b);

}  // namespace hartree
