#pragma once

// Periodic grid on the circle [0, 1), sampled (u, v) fields, and the
// pseudo-spectral toolkit built on the discrete Fourier transform:
// differentiation, trigonometric interpolation, filtering, tail diagnostics.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <fftw3.h>

#include "psys/errors.hpp"

namespace psys {

using Complex = std::complex<double>;

/// Uniform grid x_j = j/n on the unit circle; n a power of two, n >= 16.
class PeriodicGrid {
public:
    explicit PeriodicGrid(std::size_t n) : n_(n)
    {
        if (n < 16 || (n & (n - 1)) != 0)
            throw DomainError("PeriodicGrid: n must be a power of two >= 16, got " +
                              std::to_string(n));
    }

    std::size_t n() const { return n_; }
    double dx() const { return 1.0 / static_cast<double>(n_); }
    double node(std::size_t j) const { return static_cast<double>(j) / static_cast<double>(n_); }
    /// Highest resolved wavenumber (the Nyquist index n/2).
    std::size_t max_mode() const { return n_ / 2; }

    std::vector<double> nodes() const
    {
        std::vector<double> x(n_);
        for (std::size_t j = 0; j < n_; ++j)
            x[j] = node(j);
        return x;
    }

    template <class F>
    std::vector<double> sample(F&& f) const
    {
        std::vector<double> out(n_);
        for (std::size_t j = 0; j < n_; ++j)
            out[j] = f(node(j));
        return out;
    }

    bool operator==(const PeriodicGrid&) const = default;

private:
    std::size_t n_;
};

namespace detail {

inline void require_finite(std::span<const double> a, const char* what)
{
    for (double x : a)
        if (!std::isfinite(x))
            throw NonFiniteState(std::string(what) + ": non-finite entry");
}

} // namespace detail

/// Sampled pair (u, v) on a PeriodicGrid.
class StateField {
public:
    StateField(PeriodicGrid grid, std::vector<double> u, std::vector<double> v)
        : grid_(grid), u_(std::move(u)), v_(std::move(v))
    {
        if (u_.size() != grid_.n() || v_.size() != grid_.n())
            throw LengthMismatch("StateField: u/v length must equal grid.n");
        detail::require_finite(u_, "StateField u");
        detail::require_finite(v_, "StateField v");
    }

    static StateField constant(PeriodicGrid grid, double u0, double v0)
    {
        return {grid, std::vector<double>(grid.n(), u0), std::vector<double>(grid.n(), v0)};
    }

    const PeriodicGrid& grid() const { return grid_; }
    std::span<const double> u() const { return u_; }
    std::span<const double> v() const { return v_; }

private:
    PeriodicGrid grid_;
    std::vector<double> u_;
    std::vector<double> v_;
};

// ---------------------------------------------------------------------------
// FFTW plans. Planning is not thread safe, execution with the new-array
// interface is; plans are created once per size under a lock.

namespace detail {

class FftPlans {
public:
    explicit FftPlans(std::size_t n) : n_(n)
    {
        std::vector<double> real(n);
        std::vector<Complex> spec(n / 2 + 1);
        const int ni = static_cast<int>(n);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        r2c_ = fftw_plan_dft_r2c_1d(ni, real.data(), reinterpret_cast<fftw_complex*>(spec.data()),
                                    flags);
        c2r_ = fftw_plan_dft_c2r_1d(ni, reinterpret_cast<fftw_complex*>(spec.data()), real.data(),
                                    flags);
    }
    FftPlans(const FftPlans&) = delete;
    FftPlans& operator=(const FftPlans&) = delete;
    ~FftPlans()
    {
        fftw_destroy_plan(r2c_);
        fftw_destroy_plan(c2r_);
    }

    /// Unnormalized forward transform, n/2+1 coefficients.
    std::vector<Complex> forward(std::span<const double> in) const
    {
        std::vector<Complex> out(n_ / 2 + 1);
        std::vector<double> scratch(in.begin(), in.end());
        fftw_execute_dft_r2c(r2c_, scratch.data(), reinterpret_cast<fftw_complex*>(out.data()));
        return out;
    }

    /// Inverse transform including the 1/n normalization. Consumes `spec`.
    std::vector<double> inverse(std::vector<Complex> spec) const
    {
        std::vector<double> out(n_);
        fftw_execute_dft_c2r(c2r_, reinterpret_cast<fftw_complex*>(spec.data()), out.data());
        const double scale = 1.0 / static_cast<double>(n_);
        for (double& x : out)
            x *= scale;
        return out;
    }

private:
    std::size_t n_;
    fftw_plan r2c_{};
    fftw_plan c2r_{};
};

inline const FftPlans& fft_plans(std::size_t n)
{
    static std::mutex mutex;
    static std::map<std::size_t, std::unique_ptr<FftPlans>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot)
        slot = std::make_unique<FftPlans>(n);
    return *slot;
}

inline void require_length(const PeriodicGrid& grid, std::span<const double> samples,
                           const char* op)
{
    if (samples.size() != grid.n())
        throw LengthMismatch(std::string(op) + ": expected " + std::to_string(grid.n()) +
                             " samples, got " + std::to_string(samples.size()));
}

} // namespace detail

/// Fourier coefficients F_m, m = 0..n/2 (unnormalized, FFTW convention).
inline std::vector<Complex> spectrum(const PeriodicGrid& grid, std::span<const double> samples)
{
    detail::require_length(grid, samples, "spectrum");
    return detail::fft_plans(grid.n()).forward(samples);
}

inline std::vector<double> from_spectrum(const PeriodicGrid& grid, std::vector<Complex> spec)
{
    return detail::fft_plans(grid.n()).inverse(std::move(spec));
}

/// Derivative of the trigonometric interpolant at the nodes. The Nyquist
/// coefficient is dropped, which keeps the operator real and skew-symmetric.
inline std::vector<double> spectral_derivative(const PeriodicGrid& grid,
                                               std::span<const double> samples, int order = 1)
{
    auto spec = spectrum(grid, samples);
    const std::size_t nyq = grid.max_mode();
    for (std::size_t m = 0; m < spec.size(); ++m) {
        if (m == nyq && order % 2 == 1) {
            spec[m] = 0.0;
            continue;
        }
        const Complex ik(0.0, 2.0 * std::numbers::pi * static_cast<double>(m));
        Complex factor = 1.0;
        for (int k = 0; k < order; ++k)
            factor *= ik;
        spec[m] *= factor;
    }
    if (order % 2 == 0 && order > 0)
        spec[nyq] = 0.0;
    return from_spectrum(grid, std::move(spec));
}

/// Trigonometric interpolant held in coefficient form; cheap repeated
/// evaluation at off-grid points.
class TrigInterpolant {
public:
    TrigInterpolant() = default;

    TrigInterpolant(const PeriodicGrid& grid, std::span<const double> samples)
        : n_(grid.n()), nodes_(samples.begin(), samples.end())
    {
        detail::require_length(grid, samples, "interpolate");
        coeffs_ = spectrum(grid, samples);
        const double scale = 1.0 / static_cast<double>(n_);
        for (auto& c : coeffs_)
            c *= scale;
    }

    struct ValueSlope {
        double value;
        double slope;
    };

    /// Value and x-derivative at x (taken modulo 1). The derivative drops the
    /// Nyquist term, consistent with spectral_derivative.
    ValueSlope eval(double x) const
    {
        x = wrap(x);
        const std::size_t nyq = n_ / 2;
        const double two_pi = 2.0 * std::numbers::pi;
        const Complex step = std::polar(1.0, two_pi * x);
        Complex phase = step;
        double value = coeffs_[0].real();
        double slope = 0.0;
        for (std::size_t m = 1; m < nyq; ++m) {
            const Complex term = coeffs_[m] * phase;
            value += 2.0 * term.real();
            slope -= 2.0 * two_pi * static_cast<double>(m) * term.imag();
            phase *= step;
            // resync every 64 modes to bound recurrence drift
            if ((m & 63) == 63)
                phase = std::polar(1.0, two_pi * x * static_cast<double>(m + 1));
        }
        value += coeffs_[nyq].real() * std::cos(std::numbers::pi * static_cast<double>(n_) * x);
        return {value, slope};
    }

    /// Exact node values are returned unchanged when x lands on a node.
    double operator()(double x) const
    {
        const double w = wrap(x);
        const double scaled = w * static_cast<double>(n_);
        if (scaled == std::floor(scaled)) {
            const auto j = static_cast<std::size_t>(scaled) % n_;
            return nodes_[j];
        }
        return eval(w).value;
    }

    static double wrap(double x)
    {
        double w = x - std::floor(x);
        if (w >= 1.0)
            w = 0.0;
        return w;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> nodes_;
    std::vector<Complex> coeffs_;
};

inline double interpolate(const PeriodicGrid& grid, std::span<const double> samples, double x)
{
    return TrigInterpolant(grid, samples)(x);
}

/// max_j u_j. Strictly hyperbolic iff negative.
inline double hyperbolicity_margin(const StateField& state)
{
    double m = -std::numeric_limits<double>::infinity();
    for (double u : state.u())
        m = std::max(m, u);
    return m;
}

/// Energy in the top third of the non-mean modes divided by the total
/// non-mean energy. Zero for constant fields.
inline double spectral_tail_ratio(const PeriodicGrid& grid, std::span<const double> samples)
{
    const auto spec = spectrum(grid, samples);
    const std::size_t nyq = grid.max_mode();
    const std::size_t cut = (2 * nyq) / 3;
    double total = 0.0;
    double tail = 0.0;
    for (std::size_t m = 1; m <= nyq; ++m) {
        const double w = (m == nyq) ? 1.0 : 2.0;
        const double e = w * std::norm(spec[m]);
        total += e;
        if (m > cut)
            tail += e;
    }
    return total > 0.0 ? tail / total : 0.0;
}

/// Exponential filter sigma(m) = exp(-36 (m/m_max)^36); identity on mode 0.
inline std::vector<double> exponential_filter(const PeriodicGrid& grid,
                                              std::span<const double> samples)
{
    auto spec = spectrum(grid, samples);
    const double mmax = static_cast<double>(grid.max_mode());
    for (std::size_t m = 1; m < spec.size(); ++m)
        spec[m] *= std::exp(-36.0 * std::pow(static_cast<double>(m) / mmax, 36.0));
    return from_spectrum(grid, std::move(spec));
}

/// Mean over the grid (trapezoid rule on the circle).
inline double grid_mean(std::span<const double> a)
{
    double s = 0.0;
    for (double x : a)
        s += x;
    return s / static_cast<double>(a.size());
}

inline double max_abs(std::span<const double> a)
{
    double m = 0.0;
    for (double x : a)
        m = std::max(m, std::abs(x));
    return m;
}

} // namespace psys
