#ifndef KDR_HSIC_HPP
#define KDR_HSIC_HPP

#include <span>

#include "kdr/kernels.hpp"

namespace kdr {

enum class LinkKind { indicator, modified };

// Modified link: l(i,j) = 1(y_i=y_j) * exp(-eta*delta*||x_i-x_j||^2) under the
// canonical sign convention; eta=0 recovers the indicator link.
struct LinkSpec {
  LinkKind kind = LinkKind::indicator;
  double eta = 0.0;
  double delta = 0.0;
};

struct LinkMatrix {
  SymMatrix entries;

  std::size_t n() const { return entries.dim(); }
};

// x may be null for the indicator link; the modified link needs features.
LinkMatrix link_matrix(const LinkSpec& spec, std::span<const int> y, const Matrix* x);

// (1/(n-1)^2) * tr(K H L H), computed through a centered copy of L.
double hsic_empirical(const GramMatrix& k, const LinkMatrix& l);

// A = K H L H K, symmetrized to absorb roundoff.
SymMatrix skpca_objective_matrix(const GramMatrix& k, const LinkMatrix& l);

}  // namespace kdr

#endif
