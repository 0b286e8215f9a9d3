#include "gkpz/formal.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace gkpz {

namespace {
std::string monomial_key(const std::vector<TreePtr>& symbols) {
  std::string k;
  for (const auto& s : symbols) {
    if (!k.empty()) k += '*';
    k += "l(" + s->key() + ")";
  }
  return k;
}
}  // namespace

CharPoly CharPoly::scalar(Rational r) {
  CharPoly p;
  p.add({}, r);
  return p;
}

CharPoly CharPoly::symbol(const TreePtr& sigma, Rational coef) {
  CharPoly p;
  p.add({sigma}, coef);
  return p;
}

bool CharPoly::is_scalar() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational CharPoly::scalar_value() const {
  if (terms_.empty()) return Rational(0);
  if (!is_scalar()) throw std::logic_error("CharPoly: not a scalar");
  return terms_.begin()->second.coef;
}

CharPoly& CharPoly::add(const std::vector<TreePtr>& symbols, Rational coef) {
  if (coef.is_zero()) return *this;
  std::vector<TreePtr> sorted = symbols;
  std::sort(sorted.begin(), sorted.end(), TreeKeyLess{});
  std::string k = monomial_key(sorted);
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    terms_.emplace(std::move(k), Term{std::move(sorted), coef});
  } else {
    it->second.coef += coef;
    if (it->second.coef.is_zero()) terms_.erase(it);
  }
  return *this;
}

CharPoly operator+(const CharPoly& a, const CharPoly& b) {
  CharPoly r = a;
  for (const auto& [k, t] : b.terms_) r.add(t.symbols, t.coef);
  return r;
}

CharPoly operator*(const CharPoly& a, const CharPoly& b) {
  CharPoly r;
  for (const auto& [ka, ta] : a.terms_)
    for (const auto& [kb, tb] : b.terms_) {
      std::vector<TreePtr> m = ta.symbols;
      m.insert(m.end(), tb.symbols.begin(), tb.symbols.end());
      r.add(m, ta.coef * tb.coef);
    }
  return r;
}

CharPoly CharPoly::operator*(Rational r) const {
  CharPoly out;
  if (r.is_zero()) return out;
  for (const auto& [k, t] : terms_) out.add(t.symbols, t.coef * r);
  return out;
}

bool operator==(const CharPoly& a, const CharPoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  auto it = a.terms_.begin();
  auto jt = b.terms_.begin();
  for (; it != a.terms_.end(); ++it, ++jt)
    if (it->first != jt->first || !(it->second.coef == jt->second.coef)) return false;
  return true;
}

std::string CharPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, t] : terms_) {
    if (!first) os << " + ";
    first = false;
    if (k.empty()) {
      os << t.coef;
    } else {
      if (!t.coef.is_one()) os << t.coef << "*";
      os << k;
    }
  }
  return os.str();
}

FormalSum FormalSum::of(const TreePtr& t, Rational c) {
  FormalSum s;
  s.add(t, c);
  return s;
}

FormalSum& FormalSum::add(const TreePtr& t, Rational c) {
  return add(t, CharPoly::scalar(c));
}

FormalSum& FormalSum::add(const TreePtr& t, const CharPoly& c) {
  if (c.is_zero()) return *this;
  auto it = entries_.find(t->key());
  if (it == entries_.end()) {
    entries_.emplace(t->key(), Entry{t, c});
  } else {
    it->second.coef = it->second.coef + c;
    if (it->second.coef.is_zero()) entries_.erase(it);
  }
  return *this;
}

FormalSum operator+(const FormalSum& a, const FormalSum& b) {
  FormalSum r = a;
  for (const auto& [k, e] : b.entries_) r.add(e.tree, e.coef);
  return r;
}

FormalSum FormalSum::operator*(Rational r) const {
  FormalSum out;
  if (r.is_zero()) return out;
  for (const auto& [k, e] : entries_) out.add(e.tree, e.coef * r);
  return out;
}

bool operator==(const FormalSum& a, const FormalSum& b) {
  if (a.entries_.size() != b.entries_.size()) return false;
  auto it = a.entries_.begin();
  auto jt = b.entries_.begin();
  for (; it != a.entries_.end(); ++it, ++jt)
    if (it->first != jt->first || !(it->second.coef == jt->second.coef)) return false;
  return true;
}

Rational FormalSum::coefficient_sum() const {
  Rational total(0);
  for (const auto& [k, e] : entries_) total += e.coef.scalar_value();
  return total;
}

CharPoly FormalSum::coefficient(const TreePtr& t) const {
  auto it = entries_.find(t->key());
  return it == entries_.end() ? CharPoly{} : it->second.coef;
}

std::string FormalSum::str() const {
  if (entries_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, e] : entries_) {
    if (!first) os << " + ";
    first = false;
    if (e.coef.is_scalar() && e.coef.scalar_value().is_one()) os << k;
    else os << "(" << e.coef.str() << ")*" << k;
  }
  return os.str();
}

TPlus TPlus::make(MultiIndex poly, std::vector<Child> factors) {
  std::sort(factors.begin(), factors.end(), [](const Child& x, const Child& y) {
    if (x.edge != y.edge) return x.edge < y.edge;
    return x.sub->key() < y.sub->key();
  });
  TPlus p;
  p.poly = poly;
  p.factors = std::move(factors);
  std::ostringstream os;
  bool sep = false;
  if (poly != MultiIndex{0, 0} || p.factors.empty()) {
    os << "X^(" << poly[0] << "," << poly[1] << ")";
    sep = true;
  }
  for (const auto& f : p.factors) {
    if (sep) os << '*';
    if (f.edge == MultiIndex{0, 0}) os << "I+[";
    else if (f.edge == MultiIndex{0, 1}) os << "I+'[";
    else os << "I+_(" << f.edge[0] << "," << f.edge[1] << ")[";
    os << f.sub->key() << ']';
    sep = true;
  }
  p.key = os.str();
  return p;
}

TPlus TPlus::product(const TPlus& a, const TPlus& b) {
  std::vector<Child> factors = a.factors;
  factors.insert(factors.end(), b.factors.begin(), b.factors.end());
  return make(a.poly + b.poly, std::move(factors));
}

}  // namespace gkpz
