#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include <fftw3.h>

namespace iel {

/// Allocator backed by fftw_malloc so every buffer has the SIMD alignment FFTW planned for.
template <class T>
struct FftwAllocator {
    using value_type = T;
    FftwAllocator() = default;
    template <class U>
    FftwAllocator(const FftwAllocator<U>&) noexcept {}
    T* allocate(std::size_t n) {
        void* p = fftw_malloc(n * sizeof(T));
        if (!p && n) throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) noexcept { fftw_free(p); }
    template <class U>
    bool operator==(const FftwAllocator<U>&) const noexcept { return true; }
};

using Complex = std::complex<double>;
using RealBuffer = std::vector<double, FftwAllocator<double>>;
using ComplexBuffer = std::vector<Complex, FftwAllocator<Complex>>;

/// Periodic box [-L/2, L/2)^dim with n points per axis.
///
/// Physical samples are stored row-major (last axis fastest). Spectral
/// coefficients follow the FFTW r2c layout: the last axis is halved to n/2+1.
/// Integer wavenumbers along full axes are m in [-n/2, n/2); the physical
/// wavenumber is 2*pi*m/L. Owns the FFTW plans for its shape.
class Grid {
public:
    static std::shared_ptr<const Grid> create(int dim, int n, double box_length,
                                              double dealias_fraction = 2.0 / 3.0);

    Grid(int dim, int n, double box_length, double dealias_fraction);
    ~Grid();
    Grid(const Grid&) = delete;
    Grid& operator=(const Grid&) = delete;

    int dim() const { return dim_; }
    int n() const { return n_; }
    double box_length() const { return length_; }
    double dealias_fraction() const { return dealias_fraction_; }
    double spacing() const { return length_ / n_; }
    double cell_volume() const;
    std::size_t size() const { return size_; }
    std::size_t spectral_size() const { return spectral_size_; }

    /// Node coordinate along one axis: -L/2 + j*dx.
    double coordinate(int j) const { return -0.5 * length_ + j * spacing(); }
    /// Unpacks a physical flat index into per-axis node indices (unused axes are 0).
    std::array<int, 3> unflatten(std::size_t idx) const;

    /// Integer wavenumber of spectral index idx along `axis`.
    int mode(std::size_t idx, int axis) const { return modes_[idx * 3 + axis]; }
    double wavenumber(std::size_t idx, int axis) const { return k0_ * modes_[idx * 3 + axis]; }
    double k_squared(std::size_t idx) const { return ksq_[idx]; }
    bool dealias_keep(std::size_t idx) const { return keep_[idx] != 0; }
    /// True if idx sits on the Nyquist plane of `axis` (m = -n/2, or n/2 on the halved axis).
    bool is_nyquist(std::size_t idx, int axis) const;
    /// Multiplicity of a spectral coefficient in the full (Hermitian) spectrum: 1 or 2.
    double hermitian_weight(std::size_t idx) const { return weight_[idx]; }
    /// Fundamental wavenumber 2*pi/L.
    double k0() const { return k0_; }

    void forward(const double* in, Complex* out) const;
    /// Unnormalized inverse; `in` is preserved (copied to scratch internally).
    void inverse(const Complex* in, double* out) const;

private:
    int dim_;
    int n_;
    double length_;
    double dealias_fraction_;
    double k0_;
    std::size_t size_;
    std::size_t spectral_size_;
    std::vector<int> modes_;
    std::vector<double> ksq_;
    std::vector<unsigned char> keep_;
    std::vector<double> weight_;
    fftw_plan forward_plan_ = nullptr;
    fftw_plan inverse_plan_ = nullptr;
};

using GridPtr = std::shared_ptr<const Grid>;

}  // namespace iel
