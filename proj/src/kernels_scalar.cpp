#include "enavs/kernels.hpp"

namespace enavs::kernels {

namespace {

void matvec_scalar(const double* W, const double* x, const double* b, double* y,
                   size_t m, size_t n) {
    for (size_t i = 0; i < m; ++i) {
        const double* row = W + i * n;
        double acc = b ? b[i] : 0.0;
        for (size_t j = 0; j < n; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
}

void matvec_t_scalar(const double* W, const double* g, double* out, size_t m, size_t n) {
    for (size_t i = 0; i < m; ++i) {
        const double* row = W + i * n;
        const double gi = g[i];
        for (size_t j = 0; j < n; ++j) out[j] += gi * row[j];
    }
}

void ger_scalar(double* G, const double* g, const double* x, double scale,
                size_t m, size_t n) {
    for (size_t i = 0; i < m; ++i) {
        double* row = G + i * n;
        const double gi = scale * g[i];
        for (size_t j = 0; j < n; ++j) row[j] += gi * x[j];
    }
}

void axpy_scalar(double a, const double* x, double* y, size_t n) {
    for (size_t j = 0; j < n; ++j) y[j] += a * x[j];
}

double dot_scalar(const double* a, const double* b, size_t n) {
    double acc = 0.0;
    for (size_t j = 0; j < n; ++j) acc += a[j] * b[j];
    return acc;
}

}  // namespace

const Backend& scalar_backend() {
    static const Backend k{"scalar", matvec_scalar, matvec_t_scalar, ger_scalar,
                           axpy_scalar, dot_scalar};
    return k;
}

}  // namespace enavs::kernels
