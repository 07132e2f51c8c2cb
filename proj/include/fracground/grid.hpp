// Periodic truncated domain [-L/2, L/2)^N with a Riemann-sum Fourier pair.
#pragma once

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace fracground {

using Complex = std::complex<double>;

namespace detail {

// The FFTW planner is not re-entrant; plan execution on fresh arrays is.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

class FftPlans {
  public:
    FftPlans(int dim, int points) {
        std::vector<Complex> scratch(static_cast<std::size_t>(std::pow(points, dim)));
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        if (dim == 1) {
            forward_ = fftw_plan_dft_1d(points, buf, buf, FFTW_FORWARD, flags);
            backward_ = fftw_plan_dft_1d(points, buf, buf, FFTW_BACKWARD, flags);
        } else {
            forward_ = fftw_plan_dft_2d(points, points, buf, buf, FFTW_FORWARD, flags);
            backward_ = fftw_plan_dft_2d(points, points, buf, buf, FFTW_BACKWARD, flags);
        }
        if (forward_ == nullptr || backward_ == nullptr) throw std::runtime_error("FFTW planning failed");
    }
    FftPlans(const FftPlans&) = delete;
    FftPlans& operator=(const FftPlans&) = delete;
    ~FftPlans() {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
    }

    // In-place unnormalized DFT, sign -1 (forward) or +1 (backward).
    void forward(std::vector<Complex>& data) const {
        auto* p = reinterpret_cast<fftw_complex*>(data.data());
        fftw_execute_dft(forward_, p, p);
    }
    void backward(std::vector<Complex>& data) const {
        auto* p = reinterpret_cast<fftw_complex*>(data.data());
        fftw_execute_dft(backward_, p, p);
    }

  private:
    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
};

struct GridData {
    int dim;
    double extent;
    int points;
    double spacing;
    std::size_t size;
    std::vector<double> axis_freq;     // xi_k per axis in FFT storage order
    std::vector<int> axis_wavenumber;  // k per axis in FFT storage order
    std::vector<double> abs_freq;      // |xi| per flattened frequency index
    std::unique_ptr<FftPlans> plans;
};

}  // namespace detail

/// Handle to an immutable periodic grid. Copies share the frequency lattice and FFT plans.
///
/// Points are x_j = -L/2 + j h, j = 0..M-1 per axis, flattened row-major (first axis slowest).
/// Spectral arrays use FFT storage order: index i holds wavenumber i for i < M/2 and i - M
/// otherwise, so k runs over {-M/2, ..., M/2-1}.
class Grid {
  public:
    Grid() = default;

    int dim() const { return data().dim; }
    double extent() const { return data().extent; }
    int points() const { return data().points; }
    double spacing() const { return data().spacing; }
    std::size_t size() const { return data().size; }
    /// Volume element h^N.
    double cell_volume() const { return std::pow(spacing(), dim()); }
    /// Volume L^N of the box.
    double volume() const { return std::pow(extent(), dim()); }

    double coordinate(int j) const { return -0.5 * extent() + j * spacing(); }
    /// Coordinate along `axis` of flattened point index `idx`.
    double coordinate(std::size_t idx, int axis) const {
        if (dim() == 1) return coordinate(static_cast<int>(idx));
        const auto m = static_cast<std::size_t>(points());
        return coordinate(static_cast<int>(axis == 0 ? idx / m : idx % m));
    }
    /// Euclidean distance from the origin of point `idx`.
    double radius(std::size_t idx) const {
        if (dim() == 1) return std::abs(coordinate(idx, 0));
        return std::hypot(coordinate(idx, 0), coordinate(idx, 1));
    }

    const std::vector<double>& axis_frequencies() const { return data().axis_freq; }
    const std::vector<int>& axis_wavenumbers() const { return data().axis_wavenumber; }
    /// |xi_k| for each flattened frequency index.
    const std::vector<double>& abs_frequencies() const { return data().abs_freq; }
    /// Flattened index of the frequency -k (Hermitian partner).
    std::size_t conjugate_index(std::size_t idx) const {
        const auto m = static_cast<std::size_t>(points());
        if (dim() == 1) return (m - idx) % m;
        const std::size_t i = idx / m, j = idx % m;
        return ((m - i) % m) * m + (m - j) % m;
    }

    const detail::FftPlans& plans() const { return *data().plans; }

    friend bool operator==(const Grid& a, const Grid& b) {
        if (a.data_ == b.data_) return true;
        if (!a.data_ || !b.data_) return false;
        return a.dim() == b.dim() && a.points() == b.points() && a.extent() == b.extent();
    }

    friend Grid make_grid(int dim, double extent, int points);

  private:
    const detail::GridData& data() const {
        if (!data_) throw std::logic_error("use of an uninitialized Grid");
        return *data_;
    }
    std::shared_ptr<const detail::GridData> data_;
};

/// Builds a grid on [-extent/2, extent/2)^dim with `points` samples per axis.
inline Grid make_grid(int dim, double extent, int points) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("grid dimension must be 1 or 2");
    if (!(extent > 0.0) || !std::isfinite(extent)) throw std::invalid_argument("grid extent must be positive");
    if (points < 8 || points % 2 != 0) throw std::invalid_argument("grid points must be even and at least 8");

    auto d = std::make_shared<detail::GridData>();
    d->dim = dim;
    d->extent = extent;
    d->points = points;
    d->spacing = extent / points;
    d->size = static_cast<std::size_t>(points) * (dim == 2 ? static_cast<std::size_t>(points) : 1U);
    d->axis_freq.resize(points);
    d->axis_wavenumber.resize(points);
    for (int i = 0; i < points; ++i) {
        const int k = i < points / 2 ? i : i - points;
        d->axis_wavenumber[i] = k;
        d->axis_freq[i] = 2.0 * std::numbers::pi * k / extent;
    }
    d->abs_freq.resize(d->size);
    if (dim == 1) {
        for (int i = 0; i < points; ++i) d->abs_freq[i] = std::abs(d->axis_freq[i]);
    } else {
        for (int i = 0; i < points; ++i)
            for (int j = 0; j < points; ++j)
                d->abs_freq[static_cast<std::size_t>(i) * points + j] = std::hypot(d->axis_freq[i], d->axis_freq[j]);
    }
    d->plans = std::make_unique<detail::FftPlans>(dim, points);

    Grid g;
    g.data_ = std::move(d);
    return g;
}

/// Real samples on a grid.
struct Field {
    Grid grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(Grid g) : grid(std::move(g)), values(grid.size(), 0.0) {}
    Field(Grid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
        if (values.size() != grid.size()) throw std::invalid_argument("field length does not match grid");
    }

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
};

/// Fourier coefficients u_hat_k, FFT storage order.
struct SpectralField {
    Grid grid;
    std::vector<Complex> coeffs;
};

inline void require_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) throw std::invalid_argument("fields live on different grids");
}

/// Samples fn(x) (1D) or fn(x, y) (2D) on every grid point.
template <typename Fn>
Field sample(const Grid& grid, Fn&& fn) {
    Field out(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if constexpr (std::is_invocable_v<Fn, double>) {
            out[i] = fn(grid.coordinate(i, 0));
        } else {
            out[i] = fn(grid.coordinate(i, 0), grid.coordinate(i, 1));
        }
    }
    return out;
}

namespace detail {

// exp(i xi_k L/2) = (-1)^k for each axis: the phase picked up by sampling from x_0 = -L/2.
inline double origin_phase(const Grid& g, std::size_t idx) {
    const auto& k = g.axis_wavenumbers();
    if (g.dim() == 1) return (k[idx] & 1) ? -1.0 : 1.0;
    const auto m = static_cast<std::size_t>(g.points());
    return ((k[idx / m] + k[idx % m]) & 1) ? -1.0 : 1.0;
}

}  // namespace detail

/// u_hat_k = h^N sum_x u(x) exp(-i xi_k . x).
inline SpectralField transform_complex(const Grid& grid, std::vector<Complex> data) {
    if (data.size() != grid.size()) throw std::invalid_argument("array length does not match grid");
    grid.plans().forward(data);
    const double vol = grid.cell_volume();
    for (std::size_t i = 0; i < data.size(); ++i) data[i] *= vol * detail::origin_phase(grid, i);
    return {grid, std::move(data)};
}

/// Inverse of transform_complex; returns complex samples.
inline std::vector<Complex> inverse_transform_complex(const SpectralField& w) {
    const Grid& grid = w.grid;
    if (w.coeffs.size() != grid.size()) throw std::invalid_argument("spectral field length does not match grid");
    std::vector<Complex> data(w.coeffs);
    const double scale = 1.0 / grid.volume();
    for (std::size_t i = 0; i < data.size(); ++i) data[i] *= scale * detail::origin_phase(grid, i);
    grid.plans().backward(data);
    return data;
}

inline SpectralField transform(const Field& u) {
    std::vector<Complex> data(u.values.begin(), u.values.end());
    return transform_complex(u.grid, std::move(data));
}

/// Real part of the inverse transform.
inline Field inverse_transform(const SpectralField& w) {
    const auto data = inverse_transform_complex(w);
    Field out(w.grid);
    for (std::size_t i = 0; i < data.size(); ++i) out[i] = data[i].real();
    return out;
}

/// Rectangle rule h^N sum u; spectrally accurate for smooth periodic integrands.
inline double integrate(const Field& u) {
    double acc = 0.0;
    for (double v : u.values) acc += v;
    return acc * u.grid.cell_volume();
}

/// integral of u*v.
inline double inner(const Field& u, const Field& v) {
    require_same_grid(u.grid, v.grid);
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * v[i];
    return acc * u.grid.cell_volume();
}

inline double l2_norm_sq(const Field& u) { return inner(u, u); }
inline double l2_norm(const Field& u) { return std::sqrt(l2_norm_sq(u)); }

inline double max_abs(const Field& u) {
    double m = 0.0;
    for (double v : u.values) m = std::max(m, std::abs(v));
    return m;
}

inline bool all_finite(const Field& u) {
    return std::all_of(u.values.begin(), u.values.end(), [](double v) { return std::isfinite(v); });
}

// Pointwise algebra used throughout the solver.
inline Field axpy(double a, const Field& x, const Field& y) {
    require_same_grid(x.grid, y.grid);
    Field out(y.grid);
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = a * x[i] + y[i];
    return out;
}

inline Field scaled(const Field& u, double a) {
    Field out(u.grid);
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = a * u[i];
    return out;
}

inline Field product(const Field& u, const Field& v) {
    require_same_grid(u.grid, v.grid);
    Field out(u.grid);
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] * v[i];
    return out;
}

/// Translates u by `shift` (per axis) using the spectral phase: returns u(x + shift).
inline Field spectral_translate(const Field& u, std::span<const double> shift) {
    if (shift.size() != static_cast<std::size_t>(u.grid.dim())) throw std::invalid_argument("shift needs one entry per axis");
    auto w = transform(u);
    const Grid& g = u.grid;
    const auto& xi = g.axis_frequencies();
    const auto m = static_cast<std::size_t>(g.points());
    for (std::size_t i = 0; i < w.coeffs.size(); ++i) {
        double phase = 0.0;
        if (g.dim() == 1) {
            phase = xi[i] * shift[0];
        } else {
            phase = xi[i / m] * shift[0] + xi[i % m] * shift[1];
        }
        // Nyquist modes have no symmetric partner; keep the real projection.
        w.coeffs[i] *= std::polar(1.0, phase);
    }
    auto data = inverse_transform_complex(w);
    Field out(g);
    for (std::size_t i = 0; i < data.size(); ++i) out[i] = data[i].real();
    return out;
}

// ---------------------------------------------------------------------------
// CSV field dumps: "# grid: dim=<N> L=<L> M=<M>" then rows "x[,y],value".

inline void write_field_csv(std::ostream& os, const Field& u) {
    const Grid& g = u.grid;
    os << "# grid: dim=" << g.dim() << " L=" << std::setprecision(17) << g.extent() << " M=" << g.points() << '\n';
    os << std::setprecision(17);
    for (std::size_t i = 0; i < u.size(); ++i) {
        os << g.coordinate(i, 0);
        if (g.dim() == 2) os << ',' << g.coordinate(i, 1);
        os << ',' << u[i] << '\n';
    }
}

inline void write_field_csv(const std::string& path, const Field& u) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_field_csv(os, u);
}

inline Field read_field_csv(std::istream& is) {
    std::string header;
    std::getline(is, header);
    int dim = 0, points = 0;
    double extent = 0.0;
    {
        const auto pos = header.find("# grid:");
        if (pos == std::string::npos) throw std::runtime_error("field csv: missing '# grid:' header");
        std::istringstream hs(header.substr(pos + 7));
        std::string tok;
        while (hs >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos) continue;
            const auto key = tok.substr(0, eq);
            const auto val = tok.substr(eq + 1);
            if (key == "dim") dim = std::stoi(val);
            else if (key == "L") extent = std::stod(val);
            else if (key == "M") points = std::stoi(val);
        }
    }
    Field u(make_grid(dim, extent, points));
    std::string line;
    std::size_t i = 0;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (i >= u.size()) throw std::runtime_error("field csv: too many rows");
        const auto comma = line.rfind(',');
        if (comma == std::string::npos) throw std::runtime_error("field csv: malformed row");
        u[i++] = std::stod(line.substr(comma + 1));
    }
    if (i != u.size()) throw std::runtime_error("field csv: expected " + std::to_string(u.size()) + " rows");
    return u;
}

inline Field read_field_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_field_csv(is);
}

}  // namespace fracground
