#include "iel/grid.hpp"

#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>

#include "iel/errors.hpp"

namespace iel {

namespace {

// FFTW's planner is not re-entrant; sweeps create grids from several threads.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

std::shared_ptr<const Grid> Grid::create(int dim, int n, double box_length, double dealias_fraction) {
    return std::make_shared<const Grid>(dim, n, box_length, dealias_fraction);
}

Grid::Grid(int dim, int n, double box_length, double dealias_fraction)
    : dim_(dim), n_(n), length_(box_length), dealias_fraction_(dealias_fraction) {
    if (dim < 1 || dim > 3) throw ConfigError("grid dimension must be 1, 2 or 3");
    if (n < 2 || n % 2 != 0) throw ConfigError("points per axis must be a positive even integer");
    if (!(box_length > 0.0)) throw ConfigError("box length must be positive");
    if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
        throw ConfigError("dealias fraction must lie in (0, 1]");

    k0_ = 2.0 * std::numbers::pi / length_;
    const int half = n / 2 + 1;
    size_ = 1;
    for (int a = 0; a < dim; ++a) size_ *= static_cast<std::size_t>(n);
    spectral_size_ = size_ / n * half;

    modes_.assign(spectral_size_ * 3, 0);
    ksq_.resize(spectral_size_);
    keep_.resize(spectral_size_);
    weight_.resize(spectral_size_);
    const double cutoff = dealias_fraction_ * 0.5 * n;
    for (std::size_t idx = 0; idx < spectral_size_; ++idx) {
        std::size_t rest = idx;
        std::array<int, 3> m{0, 0, 0};
        const int last = rest % half;
        rest /= half;
        m[dim - 1] = last;
        for (int a = dim - 2; a >= 0; --a) {
            const int i = static_cast<int>(rest % n);
            rest /= n;
            m[a] = i < n / 2 ? i : i - n;
        }
        double ksq = 0.0;
        bool keep = true;
        for (int a = 0; a < dim; ++a) {
            modes_[idx * 3 + a] = m[a];
            const double k = k0_ * m[a];
            ksq += k * k;
            if (std::abs(m[a]) > cutoff) keep = false;
        }
        ksq_[idx] = ksq;
        keep_[idx] = keep ? 1 : 0;
        weight_[idx] = (last == 0 || last == n / 2) ? 1.0 : 2.0;
    }

    std::vector<int> shape(dim, n);
    RealBuffer r(size_);
    ComplexBuffer c(spectral_size_);
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto* cptr = reinterpret_cast<fftw_complex*>(c.data());
    forward_plan_ = fftw_plan_dft_r2c(dim, shape.data(), r.data(), cptr, FFTW_ESTIMATE);
    inverse_plan_ = fftw_plan_dft_c2r(dim, shape.data(), cptr, r.data(), FFTW_ESTIMATE);
    if (!forward_plan_ || !inverse_plan_) throw Error("FFTW planning failed");
}

Grid::~Grid() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward_plan_) fftw_destroy_plan(forward_plan_);
    if (inverse_plan_) fftw_destroy_plan(inverse_plan_);
}

double Grid::cell_volume() const { return std::pow(spacing(), dim_); }

std::array<int, 3> Grid::unflatten(std::size_t idx) const {
    std::array<int, 3> out{0, 0, 0};
    for (int a = dim_ - 1; a >= 0; --a) {
        out[a] = static_cast<int>(idx % n_);
        idx /= n_;
    }
    return out;
}

bool Grid::is_nyquist(std::size_t idx, int axis) const {
    const int m = modes_[idx * 3 + axis];
    return m == -n_ / 2 || m == n_ / 2;
}

void Grid::forward(const double* in, Complex* out) const {
    // r2c out-of-place preserves its input.
    fftw_execute_dft_r2c(forward_plan_, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
}

void Grid::inverse(const Complex* in, double* out) const {
    thread_local ComplexBuffer scratch;
    scratch.resize(spectral_size_);
    std::memcpy(scratch.data(), in, spectral_size_ * sizeof(Complex));
    fftw_execute_dft_c2r(inverse_plan_, reinterpret_cast<fftw_complex*>(scratch.data()), out);
}

}  // namespace iel
