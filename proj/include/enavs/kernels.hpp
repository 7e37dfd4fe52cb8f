#pragma once

#include <cstddef>
#include <string>

// Dense double-precision kernels behind the policy/value networks.
// A scalar reference implementation always exists; an AVX2+FMA variant is
// selected at runtime when the CPU supports it. The two are equivalence-
// tested against each other; within one process the selection is stable,
// so repeated runs of the same build on the same machine are bit-identical.
namespace enavs::kernels {

struct Backend {
    const char* name;
    // y[m] = W[m x n] * x[n] + b[m]; b may be null for no bias
    void (*matvec)(const double* W, const double* x, const double* b, double* y,
                   size_t m, size_t n);
    // out[n] += W[m x n]^T * g[m]
    void (*matvec_t)(const double* W, const double* g, double* out, size_t m, size_t n);
    // G[m x n] += scale * g[m] * x[n]^T
    void (*ger)(double* G, const double* g, const double* x, double scale,
                size_t m, size_t n);
    // y[n] += a * x[n]
    void (*axpy)(double a, const double* x, double* y, size_t n);
    double (*dot)(const double* a, const double* b, size_t n);
};

const Backend& scalar_backend();
const Backend& avx2_backend();  // only valid when avx2_available()
bool avx2_available();

// Active process-wide backend. Auto-selected on first use (AVX2 when the
// CPU has it, scalar otherwise).
const Backend& active();

// Force a backend: "scalar", "avx2", or "auto". Throws ConfigError when the
// name is unknown or the CPU lacks the requested feature.
void select(const std::string& name);

}  // namespace enavs::kernels
