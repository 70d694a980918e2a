#pragma once

#include <cstddef>
#include <string>

// Arithmetic inner loops shared by the tensor operations. Every kernel has a
// scalar reference implementation; on x86-64 an AVX2 variant is selected at
// runtime when the CPU supports it. The scalar kernels define the reference
// accumulation order; SIMD variants reassociate sums and are held equivalent
// by tests up to floating-point reassociation error.
namespace tensamp::kernels {

enum class Backend { scalar, avx2 };

/// Backend used by subsequent kernel calls (runtime-detected unless forced).
Backend active_backend();
bool backend_available(Backend b);
std::string backend_name(Backend b);

/// Force a specific backend (throws invalid_input if unavailable).
void set_backend(Backend b);
/// Return to runtime auto-detection.
void reset_backend();

// sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n);
// sum_i a[i] * b[i] * c[i]
double dot3(const double* a, const double* b, const double* c, std::size_t n);
// sum_i a[i]^2
double sumsq(const double* a, std::size_t n);
// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);
// y = M x for row-major M (rows x cols)
void matvec(const double* m, std::size_t rows, std::size_t cols,
            const double* x, double* y);

}  // namespace tensamp::kernels
