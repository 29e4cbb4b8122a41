#ifndef SPARSELAB_CONSTANTS_HPP
#define SPARSELAB_CONSTANTS_HPP

namespace sparselab {

// Gap between the side exponent of a cube I and the scale of the bump used by
// the localized operator piece: ell(I) = 2^(k + kScaleGap) pairs with psi_k.
inline constexpr int kScaleGap = 3;

// Smallest side exponent admitted into operator cube collections.
inline constexpr int kMinCollectionScaleExp = 3;

// Decay exponent used by every oscillatory estimate, as a function of the
// polynomial degree.
inline double decay_exponent(int degree) { return 1.0 / (2.0 * degree); }

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 6.28318530717958647692;

}  // namespace sparselab

#endif
