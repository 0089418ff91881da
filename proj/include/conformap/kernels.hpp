#ifndef CONFORMAP_KERNELS_HPP
#define CONFORMAP_KERNELS_HPP

#include <array>
#include <string>
#include <string_view>

namespace conformap {

// The probability kernels selectable for the high-dimensional weights.
enum class KernelId {
    membership,   // exp(-x/y)
    gaussian,     // exp(-x^2 / 2y^2)
    quadratic,    // 1 - x^2 / (x^2 + y^2)
    morse,        // y - y (1 - exp(-x))^2
    harmonic,     // 1 + (y/2) x^2
    constant      // 1
};

constexpr std::array<KernelId, 6> all_kernels() {
    return {KernelId::membership, KernelId::gaussian, KernelId::quadratic,
            KernelId::morse,      KernelId::harmonic, KernelId::constant};
}

// Maps a kernel name to its id; unknown names raise UsageError.
KernelId parse_kernel(std::string_view name);

std::string kernel_name(KernelId kernel);

// Evaluates the directed edge probability for shifted distance x and scale y.
// Returns 1 when x == 0 or y == 0; otherwise the kernel value clamped into
// [0, 1] (the harmonic and Morse kernels can exceed the unit interval).
// Negative x or y raises UsageError.
double kernel_eval(KernelId kernel, double x, double y);

} // namespace conformap

#endif
