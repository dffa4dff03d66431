#pragma once

#include <vector>

#include "ndescent/curve/torsion.hpp"

namespace ndescent {

/// A map E[n] x E[n] -> K^x, stored as an n^2 x n^2 grid in torsion-table order.
struct PairTable {
  std::size_t size = 0;
  std::vector<FieldElement> v;

  PairTable() = default;
  PairTable(std::size_t nn, const FieldElement& fill) : size(nn), v(nn * nn, fill) {}
  const FieldElement& operator()(std::size_t a, std::size_t b) const { return v[a * size + b]; }
  FieldElement& operator()(std::size_t a, std::size_t b) { return v[a * size + b]; }
  friend bool operator==(const PairTable& x, const PairTable& y) { return x.size == y.size && x.v == y.v; }
};

using EpsilonTable = PairTable;

/// eps(T1, T2) = F_{T1+T2}(P) / (F_{T1}(P) F_{T2}(P - T1)) for all pairs.
inline EpsilonTable compute_epsilon(const TorsionTable& tab) {
  EpsilonTable eps(tab.size(), FieldElement::one(tab.curve().field));
  for (std::size_t a = 0; a < tab.size(); ++a)
    for (std::size_t b = 0; b < tab.size(); ++b) eps(a, b) = tab.epsilon(a, b);
  return eps;
}

}  // namespace ndescent
