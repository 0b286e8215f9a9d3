#include "gkpz/tree.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace gkpz {

Noise noise_from_index(int j) {
  switch (j) {
    case 1: return Noise::Xi1;
    case 2: return Noise::Xi2;
    case 3: return Noise::Xi3;
    case 4: return Noise::Xi4;
    default: throw std::out_of_range("noise_from_index: j must be in 1..4");
  }
}

namespace {

const char* noise_name(Noise n) {
  switch (n) {
    case Noise::Xi: return "Xi";
    case Noise::Xi1: return "Xi1";
    case Noise::Xi2: return "Xi2";
    case Noise::Xi3: return "Xi3";
    case Noise::Xi4: return "Xi4";
    default: return "";
  }
}

void print_edge_open(std::ostream& os, MultiIndex a) {
  if (a == MultiIndex{0, 0}) os << "I[";
  else if (a == MultiIndex{0, 1}) os << "I'[";
  else os << "I_(" << a[0] << "," << a[1] << ")[";
}

std::string render(const NodeLabel& root, const std::vector<Child>& children) {
  std::ostringstream os;
  bool need_sep = false;
  const bool has_atom = root.noise != Noise::None || root.poly != MultiIndex{0, 0};
  if (has_atom || children.empty()) {
    os << (root.noise == Noise::None ? "1" : noise_name(root.noise));
    if (root.poly != MultiIndex{0, 0})
      os << "@X^(" << root.poly[0] << "," << root.poly[1] << ")";
    need_sep = true;
  }
  for (const auto& c : children) {
    if (need_sep) os << '*';
    print_edge_open(os, c.edge);
    os << c.sub->key() << ']';
    need_sep = true;
  }
  return os.str();
}

}  // namespace

Tree::Tree(NodeLabel root, std::vector<Child> children)
    : root_(root), children_(std::move(children)) {
  std::sort(children_.begin(), children_.end(), [](const Child& x, const Child& y) {
    if (x.edge != y.edge) return x.edge < y.edge;
    return x.sub->key() < y.sub->key();
  });
  key_ = render(root_, children_);
}

TreePtr Tree::make(NodeLabel root, std::vector<Child> children) {
  for (const auto& c : children)
    if (!c.sub) throw std::invalid_argument("Tree::make: null child");
  return TreePtr(new Tree(root, std::move(children)));
}

TreePtr Tree::unit() {
  static const TreePtr one = make({}, {});
  return one;
}

TreePtr Tree::leaf(Noise n, MultiIndex poly) { return make({n, poly}, {}); }

TreePtr Tree::planted(MultiIndex a, const TreePtr& sub) {
  return make({}, {Child{a, sub}});
}

TreePtr Tree::product(const TreePtr& s, const TreePtr& t) {
  const bool s_noise = s->root().noise != Noise::None;
  const bool t_noise = t->root().noise != Noise::None;
  if (s_noise && t_noise)
    throw std::invalid_argument("Tree::product: both roots carry a noise tag");
  NodeLabel root;
  root.noise = s_noise ? s->root().noise : t->root().noise;
  root.poly = s->root().poly + t->root().poly;
  std::vector<Child> children = s->children();
  children.insert(children.end(), t->children().begin(), t->children().end());
  return make(root, std::move(children));
}

TreePtr Tree::raise_poly(const TreePtr& t, MultiIndex k) {
  if (k == MultiIndex{0, 0}) return t;
  return make({t->root().noise, t->root().poly + k}, t->children());
}

int Tree::node_count() const {
  int n = 1;
  for (const auto& c : children_) n += c.sub->node_count();
  return n;
}

Homogeneity homogeneity(const TreePtr& t, bool plus_mode) {
  Homogeneity h = Homogeneity::of_poly(t->root().poly);
  switch (t->root().noise) {
    case Noise::None: break;
    case Noise::Xi: h += Homogeneity::xi(); break;
    default: h += plus_mode ? Homogeneity::xi() : Homogeneity::xi_j_flat(); break;
  }
  for (const auto& c : t->children()) {
    h += Homogeneity{2 * (2 - parabolic_weight(c.edge)), 0};
    h += homogeneity(c.sub, plus_mode);
  }
  return h;
}

int noise_count(const TreePtr& t) {
  int n = t->root().noise != Noise::None ? 1 : 0;
  for (const auto& c : t->children()) n += noise_count(c.sub);
  return n;
}

int xi_count(const TreePtr& t) {
  int n = t->root().noise == Noise::Xi ? 1 : 0;
  for (const auto& c : t->children()) n += xi_count(c.sub);
  return n;
}

bool contains_xi_j(const TreePtr& t) {
  if (noise_index(t->root().noise) > 0) return true;
  for (const auto& c : t->children())
    if (contains_xi_j(c.sub)) return true;
  return false;
}

bool contains_noise(const TreePtr& t, Noise n) {
  if (t->root().noise == n) return true;
  for (const auto& c : t->children())
    if (contains_noise(c.sub, n)) return true;
  return false;
}

TreePtr canonicalize(const TreePtr& t) {
  std::vector<Child> children;
  children.reserve(t->children().size());
  for (const auto& c : t->children()) children.push_back({c.edge, canonicalize(c.sub)});
  return Tree::make(t->root(), std::move(children));
}

std::string print_tree(const TreePtr& t) { return t->key(); }

namespace {

struct Parser {
  const std::string& s;
  size_t i = 0;

  explicit Parser(const std::string& text) : s(text) {}

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(char c) {
    skip_ws();
    if (i < s.size() && s[i] == c) { ++i; return true; }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("parse_tree: " + what + " at position " +
                                std::to_string(i) + " in \"" + s + "\"");
  }
  int integer() {
    skip_ws();
    size_t start = i;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (start == i) fail("expected integer");
    return std::stoi(s.substr(start, i - start));
  }
  MultiIndex pair_in_parens() {
    expect('(');
    int a0 = integer();
    expect(',');
    int a1 = integer();
    expect(')');
    return {a0, a1};
  }

  MultiIndex decoration_opt() {
    skip_ws();
    if (i < s.size() && s[i] == '@') {
      ++i;
      if (i >= s.size() || s[i] != 'X') fail("expected X after '@'");
      ++i;
      expect('^');
      return pair_in_parens();
    }
    return {0, 0};
  }

  // factor := atom [@X^(k,k)] | I-edge '[' term ']'
  // Returns either an atom contribution to the root label or a child.
  void factor(NodeLabel& label, bool& have_atom, std::vector<Child>& children) {
    skip_ws();
    if (i >= s.size()) fail("unexpected end of input");
    if (s[i] == 'I') {
      ++i;
      MultiIndex a{0, 0};
      if (i < s.size() && s[i] == '\'') { a = {0, 1}; ++i; }
      else if (i < s.size() && s[i] == '_') { ++i; a = pair_in_parens(); }
      expect('[');
      TreePtr sub = term();
      expect(']');
      children.push_back({a, sub});
      return;
    }
    Noise n;
    if (s.compare(i, 2, "Xi") == 0) {
      i += 2;
      n = Noise::Xi;
      if (i < s.size() && s[i] >= '1' && s[i] <= '4') {
        n = noise_from_index(s[i] - '0');
        ++i;
      }
    } else if (s[i] == '1') {
      ++i;
      n = Noise::None;
    } else {
      fail("expected atom or integration edge");
    }
    MultiIndex deco = decoration_opt();
    if (n != Noise::None) {
      if (have_atom && label.noise != Noise::None)
        fail("two noise atoms on one node");
      label.noise = n;
    }
    label.poly = label.poly + deco;
    have_atom = true;
  }

  TreePtr term() {
    NodeLabel label;
    bool have_atom = false;
    std::vector<Child> children;
    factor(label, have_atom, children);
    while (eat('*')) factor(label, have_atom, children);
    return Tree::make(label, std::move(children));
  }
};

}  // namespace

TreePtr parse_tree(const std::string& text) {
  Parser p(text);
  TreePtr t = p.term();
  p.skip_ws();
  if (p.i != text.size()) p.fail("trailing input");
  return t;
}

}  // namespace gkpz
