#include "conformap/kernels.hpp"

#include "conformap/types.hpp"

#include <algorithm>
#include <cmath>

namespace conformap {

KernelId parse_kernel(std::string_view name) {
    for (KernelId k : all_kernels()) {
        if (name == kernel_name(k)) {
            return k;
        }
    }
    throw UsageError("unknown kernel \"" + std::string(name) +
                     "\" (expected membership|gaussian|quadratic|morse|harmonic|constant)");
}

std::string kernel_name(KernelId kernel) {
    switch (kernel) {
        case KernelId::membership: return "membership";
        case KernelId::gaussian: return "gaussian";
        case KernelId::quadratic: return "quadratic";
        case KernelId::morse: return "morse";
        case KernelId::harmonic: return "harmonic";
        case KernelId::constant: return "constant";
    }
    throw UsageError("invalid kernel id");
}

double kernel_eval(KernelId kernel, double x, double y) {
    if (x < 0.0 || y < 0.0) {
        throw UsageError("kernel_eval: x and y must be non-negative");
    }
    if (x == 0.0 || y == 0.0) {
        return 1.0;
    }
    double value = 1.0;
    switch (kernel) {
        case KernelId::membership:
            value = std::exp(-x / y);
            break;
        case KernelId::gaussian:
            value = std::exp(-(x * x) / (2.0 * y * y));
            break;
        case KernelId::quadratic:
            value = 1.0 - (x * x) / (x * x + y * y);
            break;
        case KernelId::morse: {
            const double u = 1.0 - std::exp(-x);
            value = y - y * u * u;
            break;
        }
        case KernelId::harmonic:
            value = 1.0 + 0.5 * y * x * x;
            break;
        case KernelId::constant:
            value = 1.0;
            break;
    }
    // Morse can exceed 1 for y > 1 and the harmonic kernel always does for
    // x > 0; clamp so Bernoulli semantics hold downstream.
    return std::clamp(value, 0.0, 1.0);
}

} // namespace conformap
