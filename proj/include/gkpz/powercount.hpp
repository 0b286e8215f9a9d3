#pragma once

#include <string>
#include <vector>

#include "gkpz/graph.hpp"

namespace gkpz {

/// Scaling degrees of divergence of the edge kernels near 0. The
/// calibrated values are the positive degrees validated by the condition
/// battery and the numeric slope calibration; the printed variant keeps
/// the signed values quoted in the source material available for contrast.
struct DegreeTable {
  long long k_deg = 1;
  long long dk_deg = 2;
  long long rho_deg = 3;

  static DegreeTable calibrated() { return {1, 2, 3}; }
  static DegreeTable printed() { return {1, -2, -3}; }

  long long degree(const GEdge& e) const {
    switch (e.kernel) {
      case EdgeKernel::K: return k_deg;
      case EdgeKernel::DK: return dk_deg;
      case EdgeKernel::RhoRho: return rho_deg;
      case EdgeKernel::Test: return 0;
      case EdgeKernel::OrangeFactor: return -parabolic_weight(e.orange);
    }
    return 0;
  }
};

struct Violation {
  std::vector<int> vertices;
  long long lhs = 0;
  long long rhs = 0;
};

/// First half of Condition (C): for every vertex subset V with |V| >= 2,
///   sum_{E_int(V)} a_e + sum_{E_up,r>0} 1_{v_e in V}(a_e+r_e-1)
///     - sum_{E_down} 1_{v_e in V} r_e  <  3(|V|-1),
/// with E_up(V) the edges with tail in V and E_down(V) those with head in V.
/// Test edges are excluded from the edge set throughout.
std::vector<Violation> check_integrability(const FeynmanGraph& g, const DegreeTable& t);

/// Second half: for every subset avoiding the lambda-scaled vertices,
///   sum_{E_int(V)} a_e
///     + sum_{E_down} (1_{{v_e in V} or {r_e=0}}(a_e+r_e-1) - (r_e-1))
///     + sum_{E_up} (a_e + r_e 1_{v_e not in V})  >  3|V|.
std::vector<Violation> check_recentering(const FeynmanGraph& g, const DegreeTable& t);

struct PowerCountReport {
  std::vector<Violation> integrability_violations;
  std::vector<Violation> recentering_violations;
  long long alpha = 0;
  bool pass() const {
    return integrability_violations.empty() && recentering_violations.empty();
  }
};

PowerCountReport power_count(const FeynmanGraph& g, const DegreeTable& t);
std::string report_text(const PowerCountReport& r);

/// alpha = 3|V0| - sum_{non-green edges} a_e over the non-Green vertices.
/// The measured lambda-slope of the mirror integral is alpha - 6 (the
/// squared-norm convention fixed once by the numeric calibration).
long long scaling_exponent(const FeynmanGraph& g, const DegreeTable& t);

/// Minimal integrability-violating subsets, each closed up with the common
/// head of its outgoing kernel edges (the root the rewrite re-attaches to).
std::vector<std::vector<int>> find_divergent_subgraphs(const FeynmanGraph& g,
                                                       const DegreeTable& t);

enum class TelescopeTag { Remainder, Detached, Counterterm };
const char* telescope_tag_name(TelescopeTag t);

struct TelescopeTerm {
  FeynmanGraph graph;
  TelescopeTag tag;
};

/// One telescoping pass on the given divergent subset: the chosen incoming
/// edge becomes a Taylor remainder (order exceeding the divergence, capped
/// at 2), plus one moved graph per subtracted jet, carrying an orange
/// factor for the first-order jet. Closed subgraphs whose factor equals a
/// character diagram are tagged Counterterm. At most two incoming edges.
std::vector<TelescopeTerm> telescope_renormalize(const FeynmanGraph& g,
                                                 const std::vector<int>& divergent,
                                                 const DegreeTable& t);

/// Drives telescope_renormalize until no divergent subset remains,
/// absorbing mollifier pair kernels that hang off incoming-free vertices.
std::vector<TelescopeTerm> telescope_fixpoint(const FeynmanGraph& g,
                                              const DegreeTable& t);

/// Convolution absorption of RhoRho edges: an endpoint with no incoming
/// kernel edge and a single outgoing K/DK edge integrates out, the pair
/// kernel merging into that edge without changing its degree.
FeynmanGraph absorb_pair_kernels(const FeynmanGraph& g);

/// Induced factor of a divergent subset (kernel edges within the subset,
/// marker kinds flattened); used for the counterterm identification.
FeynmanGraph counterterm_factor(const FeynmanGraph& g, const std::vector<int>& subset);

/// The two retained counterterm diagram shapes.
FeynmanGraph char_diagram_dk_pair();           // l(I1(Xi)^2)
FeynmanGraph char_diagram_dk_pair_orange();    // l(I1(Xi) I1(X Xi)), orange to root
FeynmanGraph char_diagram_dk_pair_orange_between();  // drawn variant, orange between
/// Matches a factor against the retained diagrams; empty string if none.
std::string match_counterterm(const FeynmanGraph& factor);

}  // namespace gkpz
