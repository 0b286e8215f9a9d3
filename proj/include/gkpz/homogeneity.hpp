#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>

namespace gkpz {

/// Multi-index (k0, k1): k0 counts time derivatives/monomials, k1 space.
using MultiIndex = std::array<int, 2>;

/// Parabolic weight |k|_s = 2 k0 + k1.
inline int parabolic_weight(MultiIndex k) { return 2 * k[0] + k[1]; }

inline MultiIndex operator+(MultiIndex a, MultiIndex b) {
  return {a[0] + b[0], a[1] + b[1]};
}

inline bool componentwise_leq(MultiIndex a, MultiIndex b) {
  return a[0] <= b[0] && a[1] <= b[1];
}

/// Exact scaling degree p + q*kappa with p a half-integer (stored doubled)
/// and q an integer. Ordered lexicographically on (p, q), which matches
/// evaluation at any small positive kappa: the p parts of all generated
/// degrees differ by at least 1/2 while |q| stays below 8.
struct Homogeneity {
  std::int64_t twice_p = 0;  ///< 2p, so half-integers stay exact
  std::int64_t q = 0;        ///< coefficient of kappa

  constexpr Homogeneity() = default;
  constexpr Homogeneity(std::int64_t tp, std::int64_t qq) : twice_p(tp), q(qq) {}

  static constexpr Homogeneity zero() { return {0, 0}; }
  static constexpr Homogeneity xi() { return {-3, -1}; }        // -3/2 - kappa
  static constexpr Homogeneity xi_j_flat() { return {0, -1}; }  // -kappa
  static constexpr Homogeneity of_poly(MultiIndex k) {
    return {2 * (2 * k[0] + k[1]), 0};
  }

  bool negative() const { return twice_p < 0 || (twice_p == 0 && q < 0); }
  bool positive() const { return twice_p > 0 || (twice_p == 0 && q > 0); }
  bool is_zero() const { return twice_p == 0 && q == 0; }

  /// kappa-free part as a double (p).
  double p_value() const { return 0.5 * static_cast<double>(twice_p); }
  /// Value at a concrete kappa weight, for grouping/report purposes.
  double value_at(double kappa) const {
    return p_value() + kappa * static_cast<double>(q);
  }

  friend Homogeneity operator+(Homogeneity a, Homogeneity b) {
    return {a.twice_p + b.twice_p, a.q + b.q};
  }
  Homogeneity& operator+=(Homogeneity b) { twice_p += b.twice_p; q += b.q; return *this; }
  friend Homogeneity operator-(Homogeneity a, Homogeneity b) {
    return {a.twice_p - b.twice_p, a.q - b.q};
  }

  friend auto operator<=>(const Homogeneity&, const Homogeneity&) = default;

  std::string str() const {
    std::ostringstream os;
    if (twice_p % 2 == 0) os << twice_p / 2;
    else os << twice_p << "/2";
    if (q != 0) {
      os << (q > 0 ? "+" : "-");
      if (q != 1 && q != -1) os << (q > 0 ? q : -q) << "*";
      os << "kappa";
    }
    return os.str();
  }
  friend std::ostream& operator<<(std::ostream& os, const Homogeneity& h) {
    return os << h.str();
  }
};

}  // namespace gkpz
