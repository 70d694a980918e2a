#include "tensamp/kernels.hpp"

#include <atomic>

#include "tensamp/errors.hpp"

namespace tensamp::kernels {

namespace scalar {
double dot(const double*, const double*, std::size_t);
double dot3(const double*, const double*, const double*, std::size_t);
double sumsq(const double*, std::size_t);
void axpy(double, const double*, double*, std::size_t);
void matvec(const double*, std::size_t, std::size_t, const double*, double*);
}  // namespace scalar

#if defined(TENSAMP_HAVE_AVX2)
namespace avx2 {
double dot(const double*, const double*, std::size_t);
double dot3(const double*, const double*, const double*, std::size_t);
double sumsq(const double*, std::size_t);
void axpy(double, const double*, double*, std::size_t);
void matvec(const double*, std::size_t, std::size_t, const double*, double*);
}  // namespace avx2
#endif

namespace {

bool cpu_has_avx2() {
#if defined(TENSAMP_HAVE_AVX2)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

// -1 = auto-detect, otherwise a forced Backend value.
std::atomic<int> g_forced{-1};

}  // namespace

bool backend_available(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
      return cpu_has_avx2();
  }
  return false;
}

Backend active_backend() {
  const int forced = g_forced.load(std::memory_order_relaxed);
  if (forced >= 0) return static_cast<Backend>(forced);
  static const Backend detected =
      cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
  return detected;
}

void set_backend(Backend b) {
  if (!backend_available(b))
    throw invalid_input("kernel backend not available on this machine: " +
                        backend_name(b));
  g_forced.store(static_cast<int>(b), std::memory_order_relaxed);
}

void reset_backend() { g_forced.store(-1, std::memory_order_relaxed); }

std::string backend_name(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
  }
  return "unknown";
}

#if defined(TENSAMP_HAVE_AVX2)
#define TENSAMP_DISPATCH(fn, ...)                                     \
  (active_backend() == Backend::avx2 ? avx2::fn(__VA_ARGS__)          \
                                     : scalar::fn(__VA_ARGS__))
#else
#define TENSAMP_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

double dot(const double* a, const double* b, std::size_t n) {
  return TENSAMP_DISPATCH(dot, a, b, n);
}

double dot3(const double* a, const double* b, const double* c, std::size_t n) {
  return TENSAMP_DISPATCH(dot3, a, b, c, n);
}

double sumsq(const double* a, std::size_t n) {
  return TENSAMP_DISPATCH(sumsq, a, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  TENSAMP_DISPATCH(axpy, alpha, x, y, n);
}

void matvec(const double* m, std::size_t rows, std::size_t cols,
            const double* x, double* y) {
  TENSAMP_DISPATCH(matvec, m, rows, cols, x, y);
}

#undef TENSAMP_DISPATCH

}  // namespace tensamp::kernels
