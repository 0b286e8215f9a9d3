#pragma once

#include <map>
#include <string>
#include <vector>

#include "gkpz/rational.hpp"
#include "gkpz/tree.hpp"

namespace gkpz {

/// Polynomial over the rationals in commuting formal symbols l(sigma),
/// sigma a canonical tree. The empty monomial carries plain scalars.
class CharPoly {
 public:
  struct Term {
    std::vector<TreePtr> symbols;  // sorted by key
    Rational coef;
  };

  CharPoly() = default;
  static CharPoly scalar(Rational r);
  static CharPoly symbol(const TreePtr& sigma, Rational coef = Rational(1));

  bool is_zero() const { return terms_.empty(); }
  bool is_scalar() const;
  Rational scalar_value() const;  // throws unless scalar
  const std::map<std::string, Term>& terms() const { return terms_; }

  CharPoly& add(const std::vector<TreePtr>& symbols, Rational coef);
  friend CharPoly operator+(const CharPoly& a, const CharPoly& b);
  friend CharPoly operator*(const CharPoly& a, const CharPoly& b);
  CharPoly operator*(Rational r) const;
  CharPoly operator-() const { return *this * Rational(-1); }
  friend bool operator==(const CharPoly& a, const CharPoly& b);

  std::string str() const;

 private:
  // key: "l(key1)*l(key2)*..." with sorted factors, "" for the scalar part
  std::map<std::string, Term> terms_;
};

/// Finite linear combination of canonical trees with CharPoly coefficients.
class FormalSum {
 public:
  struct Entry {
    TreePtr tree;
    CharPoly coef;
  };

  FormalSum() = default;
  static FormalSum of(const TreePtr& t, Rational c = Rational(1));

  FormalSum& add(const TreePtr& t, Rational c);
  FormalSum& add(const TreePtr& t, const CharPoly& c);
  friend FormalSum operator+(const FormalSum& a, const FormalSum& b);
  FormalSum operator*(Rational r) const;
  friend bool operator==(const FormalSum& a, const FormalSum& b);

  bool is_zero() const { return entries_.empty(); }
  size_t size() const { return entries_.size(); }
  const std::map<std::string, Entry>& entries() const { return entries_; }

  /// Sum of all scalar coefficients; throws on symbolic coefficients.
  Rational coefficient_sum() const;
  /// Coefficient attached to tree t (zero CharPoly when absent).
  CharPoly coefficient(const TreePtr& t) const;

  std::string str() const;

 private:
  std::map<std::string, Entry> entries_;  // keyed by tree key
};

/// Element of the positive companion space: X^k prod_i I+_{a_i}(tau_i).
struct TPlus {
  MultiIndex poly{0, 0};
  std::vector<Child> factors;  // sorted on construction
  std::string key;

  static TPlus make(MultiIndex poly, std::vector<Child> factors);
  static TPlus unit() { return make({0, 0}, {}); }
  bool is_unit() const { return poly == MultiIndex{0, 0} && factors.empty(); }
  static TPlus product(const TPlus& a, const TPlus& b);
};

/// Linear combination of left (x) right tensors with rational coefficients.
/// Right is a plain tree for the root-extraction splitting, and a TPlus
/// element for the recentering co-action; both carriers are provided.
template <typename Right>
class TensorSumT {
 public:
  struct Entry {
    TreePtr left;
    Right right;
    Rational coef;
  };

  TensorSumT& add(const TreePtr& left, const Right& right, Rational c) {
    static_assert(std::is_same_v<Right, TreePtr> || std::is_same_v<Right, TPlus>);
    std::string k;
    if constexpr (std::is_same_v<Right, TreePtr>) k = left->key() + " (x) " + right->key();
    else k = left->key() + " (x) " + right.key;
    auto it = entries_.find(k);
    if (it == entries_.end()) {
      if (!c.is_zero()) entries_.emplace(k, Entry{left, right, c});
    } else {
      it->second.coef += c;
      if (it->second.coef.is_zero()) entries_.erase(it);
    }
    return *this;
  }

  bool is_zero() const { return entries_.empty(); }
  size_t size() const { return entries_.size(); }
  const std::map<std::string, Entry>& entries() const { return entries_; }

  friend bool operator==(const TensorSumT& a, const TensorSumT& b) {
    if (a.entries_.size() != b.entries_.size()) return false;
    auto it = a.entries_.begin();
    auto jt = b.entries_.begin();
    for (; it != a.entries_.end(); ++it, ++jt)
      if (it->first != jt->first || !(it->second.coef == jt->second.coef)) return false;
    return true;
  }

  std::string str() const {
    std::string out;
    for (const auto& [k, e] : entries_) {
      if (!out.empty()) out += " + ";
      if (!e.coef.is_one()) {
        std::ostringstream os;
        os << e.coef << "*";
        out += os.str();
      }
      out += k;
    }
    return out.empty() ? "0" : out;
  }

 private:
  std::map<std::string, Entry> entries_;
};

using TensorSum = TensorSumT<TreePtr>;
using PlusTensorSum = TensorSumT<TPlus>;

}  // namespace gkpz
